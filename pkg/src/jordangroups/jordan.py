"""Normal subgroups, normal abelian profiles, subgroup inventories up to
conjugacy, and Jordan constants of finite groups.

For a finite group ``G`` the Jordan constant is ``max_H i(H)`` over all
subgroups ``H``, where ``i(H)`` is the least index in ``H`` of a normal abelian
subgroup of ``H``.  Since ``i`` is invariant under conjugation it is evaluated
once per conjugacy class of subgroups.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .errors import CapExceeded
from .kernel import (
    GroupTable,
    SubSet,
    abelian_invariants,
    conjugacy_classes,
    extend_closure,
    join,
    subgroup_closure,
)

ENUMERATION_CAP = 1920


# --------------------------------------------------------------------------
# normal subgroups and profiles


def normal_subgroups(G: GroupTable) -> list[SubSet]:
    """Every normal subgroup of ``G``, sorted by order then bit-vector.

    Normal closures of cyclic subgroups are closed under pairwise joins; every
    normal subgroup is the join of the normal closures of its elements.
    """
    cached = G.__dict__.get("_normal_subgroups")
    if cached is not None:
        return cached
    cc = conjugacy_classes(G)
    found: dict[bytes, SubSet] = {}
    for c in range(len(cc)):
        S = subgroup_closure(G, cc.members(c).tolist())
        found.setdefault(S.key, S)
    frontier = list(found.values())
    while frontier:
        base = list(found.values())
        new = []
        for A in frontier:
            for B in base:
                if A <= B or B <= A:
                    continue
                J = join(G, A, B)
                if J.key not in found:
                    found[J.key] = J
                    new.append(J)
        frontier = new
    result = sorted(found.values(), key=lambda S: (S.size, S.key))
    G.__dict__["_normal_subgroups"] = result
    return result


@dataclass(frozen=True)
class NormalAbelianProfile:
    entries: tuple[tuple[SubSet, tuple[int, ...]], ...]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def orders(self) -> list[int]:
        return [S.size for S, _ in self.entries]

    def types(self) -> set[tuple[int, ...]]:
        """Distinct isomorphism types as invariant-factor tuples."""
        return {inv for _, inv in self.entries}

    def render(self) -> list[str]:
        return [format_invariants(inv) for _, inv in self.entries]


def format_invariants(inv: tuple[int, ...]) -> str:
    if not inv:
        return "C1"
    parts: list[str] = []
    for d in sorted(set(inv)):
        k = inv.count(d)
        parts.append(f"C{d}" + (f"^{k}" if k > 1 else ""))
    return " x ".join(parts)


def parse_invariants(text: str) -> tuple[int, ...]:
    """Inverse of ``format_invariants``: ``"C3 x C6"`` -> ``(3, 6)``."""
    out: list[int] = []
    for part in text.split(" x "):
        part = part.strip()
        if not part.startswith("C"):
            raise ValueError(f"not a cyclic factor: {part!r}")
        base, _, exp = part[1:].partition("^")
        d, k = int(base), int(exp) if exp else 1
        if d > 1:
            out.extend([d] * k)
    return tuple(sorted(out))


def normal_abelian_profile(G: GroupTable) -> NormalAbelianProfile:
    rows = [(S, abelian_invariants(S)) for S in normal_subgroups(G) if S.is_abelian]
    rows.sort(key=lambda r: (r[0].size, r[1], r[0].key))
    return NormalAbelianProfile(tuple(rows))


# --------------------------------------------------------------------------
# minimal index of a normal abelian subgroup


def _classes_within(G: GroupTable, H: SubSet) -> list[np.ndarray]:
    """Conjugacy classes of ``H`` (as element arrays of ``G``)."""
    e = H.elements
    conj = G.conj
    seen = np.zeros(G.order, dtype=bool)
    classes = []
    for x in e.tolist():
        if not seen[x]:
            members = np.unique(conj[e, x])
            seen[members] = True
            classes.append(members)
    return classes


def _commuting_graph(G: GroupTable, H: SubSet) -> tuple[list[np.ndarray], list[int], list[int]]:
    """Self-commuting classes of ``H``, their sizes, and which pairs commute."""
    mul = G.mul
    classes = [c for c in _classes_within(G, H) if (mul[c[0], c] == mul[c, c[0]]).all()]
    k = len(classes)
    adj = [0] * k
    for a in range(k):
        x = classes[a][0]
        for b in range(k):
            if a != b and (mul[x, classes[b]] == mul[classes[b], x]).all():
                adj[a] |= 1 << b
    return classes, [int(c.size) for c in classes], adj


def _max_weight_clique(weights: list[int], adj: list[int]) -> tuple[int, int]:
    """Max total weight over cliques of a small graph given as adjacency bitmasks.

    Returns ``(weight, vertex_mask)``; ties resolved towards the smallest mask.
    """
    n = len(weights)
    best = [0, 0]

    def rec(cand: int, chosen: int, w: int) -> None:
        if cand == 0:
            if w > best[0] or (w == best[0] and chosen < best[1]):
                best[0], best[1] = w, chosen
            return
        bound = w + sum(weights[v] for v in range(n) if cand >> v & 1)
        if bound < best[0]:
            return
        v = (cand & -cand).bit_length() - 1
        rec(cand & adj[v], chosen | 1 << v, w + weights[v])
        rec(cand & ~(1 << v), chosen, w)

    rec((1 << n) - 1, 0, 0)
    return best[0], best[1]


def max_normal_abelian(G: GroupTable, H: SubSet | None = None) -> SubSet:
    """A largest normal abelian subgroup of ``H`` (default ``G``).

    A normal abelian subgroup is a union of pairwise-commuting ``H``-classes, so
    the largest one is a maximum-weight clique in the commuting graph on
    self-commuting classes.  Ties go to the lexicographically least bit-vector.
    """
    H = H or G.whole
    if H.is_abelian:
        return H
    classes, weights, adj = _commuting_graph(G, H)
    k = len(classes)
    w, _ = _max_weight_clique(weights, adj)
    # every other maximum clique also has weight w; gather them to pick the least bit-vector
    best: SubSet | None = None
    for mask in _all_max_cliques(weights, adj, w):
        elems = np.concatenate([classes[v] for v in range(k) if mask >> v & 1])
        S = SubSet(G, elems)
        if best is None or S.key < best.key:
            best = S
    assert best is not None
    return best


def _all_max_cliques(weights: list[int], adj: list[int], target: int) -> list[int]:
    n = len(weights)
    out: list[int] = []

    def rec(cand: int, chosen: int, w: int) -> None:
        if cand == 0:
            if w == target:
                out.append(chosen)
            return
        if w + sum(weights[v] for v in range(n) if cand >> v & 1) < target:
            return
        v = (cand & -cand).bit_length() - 1
        rec(cand & adj[v], chosen | 1 << v, w + weights[v])
        rec(cand & ~(1 << v), chosen, w)

    rec((1 << n) - 1, 0, 0)
    return out


def max_normal_abelian_order(G: GroupTable, H: SubSet | None = None) -> int:
    H = H or G.whole
    if H.is_abelian:
        return H.size
    _, weights, adj = _commuting_graph(G, H)
    return _max_weight_clique(weights, adj)[0]


def min_index_normal_abelian(G: GroupTable, H: SubSet | None = None) -> int:
    """``i(H)``: ``|H|`` divided by the largest order of a normal abelian subgroup."""
    H = H or G.whole
    return H.size // max_normal_abelian_order(G, H)


# --------------------------------------------------------------------------
# subgroup inventory


@dataclass(frozen=True)
class SubgroupClass:
    representative: SubSet
    class_size: int
    normalizer_order: int

    @property
    def order(self) -> int:
        return self.representative.size


@dataclass
class SubgroupClassInventory:
    group: GroupTable
    classes: list[SubgroupClass]
    complete: bool = True

    def __len__(self) -> int:
        return len(self.classes)

    @property
    def total_subgroups(self) -> int:
        return sum(c.class_size for c in self.classes)

    def orders(self) -> list[int]:
        return sorted(c.order for c in self.classes)


def _coset_labels(G: GroupTable, H: SubSet) -> np.ndarray:
    """Label of the right coset ``H*y`` for every ``y`` (its least element)."""
    return G.mul[H.elements, :].min(axis=0)


def subgroup_classes(G: GroupTable, cap: int = ENUMERATION_CAP) -> SubgroupClassInventory:
    """Every subgroup of ``G`` up to conjugacy.

    Starting from the trivial subgroup, each class representative ``H`` is
    extended by every element outside it; the results are canonicalized to the
    lexicographically least conjugate bit-vector.  Extensions by elements in
    the same ``N(H)``-conjugate of a double coset ``H g^k H`` (``k`` prime to
    the order of ``g``) give conjugate subgroups and are skipped.
    """
    cached = G.__dict__.get("_subgroup_classes")
    if cached is not None:
        return cached
    if G.order > cap:
        raise CapExceeded(f"subgroup enumeration needs |G| <= {cap}")
    n = G.order
    conj = G.conj
    rows_idx = np.arange(n)[:, None]
    known: dict[bytes, int] = {}
    reps: list[SubSet] = []
    sizes: list[int] = []
    normalizers: list[np.ndarray] = []

    def register(mask: np.ndarray, gens: tuple[int, ...]) -> None:
        key = np.packbits(mask).tobytes()
        if key in known:
            return
        elems = np.flatnonzero(mask)
        M = np.zeros((n, n), dtype=bool)
        M[rows_idx, conj[:, elems]] = True
        packed = np.packbits(M, axis=1)
        uniq, first = np.unique(packed, axis=0, return_index=True)
        cid = len(reps)
        for row in uniq:
            known[row.tobytes()] = cid
        g = int(first[0])
        # row 0 is K itself; N(gKg^-1) = g N(K) g^-1
        norm_K = np.flatnonzero((packed == packed[0]).all(axis=1))
        norm = np.sort(conj[g, norm_K])
        rep_gens = tuple(int(conj[g, x]) for x in gens)
        reps.append(SubSet(G, np.flatnonzero(M[g]), rep_gens))
        sizes.append(int(uniq.shape[0]))
        normalizers.append(norm)

    register(G.trivial.mask.copy(), ())
    i = 0
    while i < len(reps):
        H = reps[i]
        N = normalizers[i]
        i += 1
        if H.size == n:
            continue
        labels = _coset_labels(G, H)
        # conjugation by one element per coset of H in N(H)
        _, t_idx = np.unique(labels[N], return_index=True)
        transversal = N[t_idx]
        done = H.mask.copy()
        for g in range(n):
            if done[g]:
                continue
            mask, gens = extend_closure(G, H.elements, H.mask, H.gens, g)
            register(mask, gens)
            powers = [G.power(g, k) for k in range(1, int(G.elt_order[g])) if gcd(k, int(G.elt_order[g])) == 1]
            gH = G.mul[np.asarray(powers)[:, None], H.elements[None, :]]
            dbl = np.isin(labels, labels[gH.ravel()])
            done[conj[np.ix_(transversal, np.flatnonzero(dbl))].ravel()] = True
    classes = [
        SubgroupClass(rep, size, n // size) for rep, size in zip(reps, sizes)
    ]
    classes.sort(key=lambda c: (c.order, c.representative.key))
    inv = SubgroupClassInventory(G, classes)
    G.__dict__["_subgroup_classes"] = inv
    return inv


# --------------------------------------------------------------------------
# Jordan constants


@dataclass
class JordanReport:
    label: str
    order: int
    whole_group_index: int
    jordan: int
    witness_subgroup: SubSet
    witness_abelian: SubSet
    class_count: int
    elapsed: float = field(default=0.0, compare=False)

    @property
    def witness(self) -> tuple[SubSet, SubSet]:
        return self.witness_subgroup, self.witness_abelian

    def as_dict(self) -> dict:
        return {
            "label": self.label,
            "order": self.order,
            "i": self.whole_group_index,
            "J": self.jordan,
            "witness_order": self.witness_subgroup.size,
            "witness_abelian_order": self.witness_abelian.size,
            "witness_abelian_type": format_invariants(abelian_invariants(self.witness_abelian)),
            "subgroup_classes": self.class_count,
        }


def jordan_constant(G: GroupTable, cap: int = ENUMERATION_CAP) -> JordanReport:
    """Exact Jordan constant of a finite group with a canonical witness.

    The witness subgroup is the lexicographically least class representative
    attaining the maximum of ``i``.
    """
    cached = G.__dict__.get("_jordan_report")
    if cached is not None:
        return cached
    start = time.perf_counter()
    inv = subgroup_classes(G, cap)
    best = 1
    maximizers: list[SubSet] = []
    # i(H) <= |H|, so classes smaller than the running best cannot attain it
    for c in sorted(inv.classes, key=lambda c: -c.order):
        H = c.representative
        if H.size < best:
            break
        i = min_index_normal_abelian(G, H)
        if i > best:
            best, maximizers = i, [H]
        elif i == best:
            maximizers.append(H)
    witness = min(maximizers, key=lambda S: S.key) if maximizers else G.trivial
    A = max_normal_abelian(G, witness)
    report = JordanReport(
        label=G.label,
        order=G.order,
        whole_group_index=min_index_normal_abelian(G),
        jordan=best,
        witness_subgroup=witness,
        witness_abelian=A,
        class_count=len(inv),
        elapsed=time.perf_counter() - start,
    )
    G.__dict__["_jordan_report"] = report
    return report


def jordan_sup(groups: list[GroupTable]) -> int:
    if not groups:
        raise ValueError("jordan_sup needs at least one group")
    return max(jordan_constant(G).jordan for G in groups)


def subgroup_table_jordan(G: GroupTable, H: SubSet) -> int:
    """Jordan constant of ``H`` recomputed from scratch as a standalone group."""
    T, _ = H.table()
    return jordan_constant(T).jordan
