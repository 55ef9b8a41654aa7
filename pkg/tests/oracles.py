"""Slow, independent reference computations used to cross-check the engine.

Everything here works on plain Python lists and frozensets and shares no code
with the package beyond reading a multiplication table.
"""

from __future__ import annotations

from itertools import combinations


def table(G) -> list[list[int]]:
    return [[int(v) for v in row] for row in G.mul]


def inverses(m: list[list[int]]) -> list[int]:
    return [row.index(0) for row in m]


def closure(m: list[list[int]], seed) -> frozenset[int]:
    S = {0} | set(seed)
    frontier = list(S)
    while frontier:
        new = []
        for a in frontier:
            for b in list(S):
                for c in (m[a][b], m[b][a]):
                    if c not in S:
                        S.add(c)
                        new.append(c)
        frontier = new
    return frozenset(S)


def all_subgroups(m: list[list[int]]) -> set[frozenset[int]]:
    """Cyclic subgroups, then joins of pairs until nothing new appears."""
    n = len(m)
    subs = {closure(m, [x]) for x in range(n)}
    frontier = set(subs)
    while frontier:
        new = set()
        for A in frontier:
            for B in list(subs):
                J = closure(m, A | B)
                if J not in subs:
                    new.add(J)
        subs |= new
        frontier = new
    return subs


def subgroups_from_small_sets(m: list[list[int]], k: int = 2) -> set[frozenset[int]]:
    """Subgroups generated by at most ``k`` elements."""
    n = len(m)
    out = set()
    for r in range(k + 1):
        for combo in combinations(range(n), r):
            out.add(closure(m, combo))
    return out


def bitvector(S, n: int) -> tuple[int, ...]:
    return tuple(int(i in S) for i in range(n))


def conjugacy_classes_of_subgroups(m: list[list[int]], subs) -> list[list[frozenset[int]]]:
    n = len(m)
    inv = inverses(m)
    seen: set[frozenset[int]] = set()
    classes = []
    for S in sorted(subs, key=lambda s: (len(s), sorted(s))):
        if S in seen:
            continue
        orbit = {frozenset(m[m[g][x]][inv[g]] for x in S) for g in range(n)}
        seen |= orbit
        classes.append(sorted(orbit, key=lambda s: bitvector(s, n)))
    return classes


def is_abelian_set(m, S) -> bool:
    return all(m[a][b] == m[b][a] for a in S for b in S)


def is_normal_in(m, inv, K, H) -> bool:
    return all(m[m[h][k]][inv[h]] in K for h in H for k in K)


def jordan_brute(m: list[list[int]]) -> tuple[int, int]:
    """``(J, i(G))`` straight from the definition over every subgroup."""
    inv = inverses(m)
    subs = all_subgroups(m)
    abelian = [S for S in subs if is_abelian_set(m, S)]
    best = 1
    whole = None
    for H in subs:
        a = max(len(K) for K in abelian if K <= H and is_normal_in(m, inv, K, H))
        best = max(best, len(H) // a)
        if len(H) == len(m):
            whole = len(H) // a
    return best, whole


def normal_abelian_orders(m) -> list[int]:
    inv = inverses(m)
    G = frozenset(range(len(m)))
    return sorted(len(K) for K in all_subgroups(m) if is_abelian_set(m, K) and is_normal_in(m, inv, K, G))


def is_homomorphism(mG, mH, image) -> bool:
    n = len(mG)
    return all(image[mG[a][b]] == mH[image[a]][image[b]] for a in range(n) for b in range(n))
