"""Finite groups as multiplication tables, subgroups as bit-vectors, and the
structural primitives built on them (closure, conjugacy, quotients,
automorphisms, isomorphism).

Elements of a group of order ``n`` are the integers ``0..n-1`` with the
identity at 0.  Every table is immutable once constructed.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Iterable, Protocol, Sequence

import numpy as np

from .errors import CapExceeded, InconsistentElement, NotAbelian, NotNormal

CLOSURE_CAP = 10_000
AUTOMORPHISM_CAP = 512
ISOMORPHISM_CAP = 512
# above this order nested-list rows would cost too much memory
ROW_CACHE_LIMIT = 4096


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _index_dtype(n: int) -> type:
    return np.int16 if n <= np.iinfo(np.int16).max else np.int32


class GroupTable:
    """A finite group given by its complete multiplication table.

    ``mul[x, y]`` is the index of ``x*y``.  ``gens`` optionally records a
    generating set (closure-built tables always carry one).
    """

    id = 0

    def __init__(self, mul: np.ndarray, label: str = "", gens: Sequence[int] | None = None) -> None:
        mul = np.asarray(mul)
        n = mul.shape[0]
        if mul.shape != (n, n) or n < 1:
            raise ValueError("multiplication table must be square and nonempty")
        self.order = n
        self.mul = _freeze(np.ascontiguousarray(mul, dtype=_index_dtype(n)))
        self.label = label
        if not (np.array_equal(self.mul[0], np.arange(n)) and np.array_equal(self.mul[:, 0], np.arange(n))):
            raise ValueError("element 0 is not a two-sided identity")
        is_id = self.mul == 0
        if not (is_id.sum(axis=1) == 1).all():
            raise ValueError("some element has no unique right inverse")
        self.inv = _freeze(np.argmax(is_id, axis=1).astype(self.mul.dtype))
        self.elt_order = _freeze(_element_orders(self.mul))
        self._gens = tuple(int(g) for g in gens) if gens is not None else None

    def __repr__(self) -> str:
        return f"GroupTable(order={self.order}, label={self.label!r})"

    def __len__(self) -> int:
        return self.order

    @property
    def gens(self) -> tuple[int, ...]:
        if self._gens is None:
            self._gens = greedy_generators(self, range(self.order))
        return self._gens

    @cached_property
    def rows(self) -> list[list[int]]:
        """The table as nested Python lists (fast scalar lookups)."""
        return self.mul.tolist()

    def prod(self, a: int, b: int) -> int:
        if self.order <= ROW_CACHE_LIMIT:
            return self.rows[a][b]
        return int(self.mul[a, b])

    @cached_property
    def conj(self) -> np.ndarray:
        """``conj[g, x] == g * x * g^-1``."""
        return _freeze(self.mul[self.mul, self.inv[:, None]])

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    @cached_property
    def whole(self) -> "SubSet":
        return SubSet(self, np.arange(self.order), self.gens)

    @cached_property
    def trivial(self) -> "SubSet":
        return SubSet(self, np.zeros(1, dtype=np.int64))

    def power(self, x: int, k: int) -> int:
        k %= int(self.elt_order[x])
        r = 0
        for _ in range(k):
            r = self.prod(r, x)
        return r

    def commutator(self, a: int, b: int) -> int:
        p, inv = self.prod, self.inv
        return p(p(p(int(inv[a]), int(inv[b])), a), b)

    def order_census(self) -> dict[int, int]:
        return dict(sorted(Counter(self.elt_order.tolist()).items()))

    def involutions(self) -> list[int]:
        return np.flatnonzero(self.elt_order == 2).tolist()

    def to_json(self) -> str:
        return json.dumps({"order": self.order, "mul": self.mul.ravel().tolist(), "label": self.label})

    @classmethod
    def from_json(cls, text: str, samples: int = 10_000, seed: int = 0) -> "GroupTable":
        doc = json.loads(text)
        n = int(doc["order"])
        mul = np.asarray(doc["mul"], dtype=np.int64)
        if mul.size != n * n:
            raise ValueError("mul has the wrong number of entries")
        G = cls(mul.reshape(n, n), doc.get("label", ""))
        verify_table(G, samples=samples, seed=seed)
        return G


def _element_orders(mul: np.ndarray) -> np.ndarray:
    n = mul.shape[0]
    idx = np.arange(n)
    orders = np.zeros(n, dtype=np.int64)
    cur = idx.copy()
    k = 1
    while True:
        hit = (cur == 0) & (orders == 0)
        orders[hit] = k
        if (orders > 0).all():
            return orders
        cur = mul[cur, idx]
        k += 1
        if k > n:
            raise ValueError("table is not a group: some element has no finite order")


def verify_table(G: GroupTable, samples: int = 10_000, seed: int = 0) -> None:
    """Latin-square, identity and inverse laws exactly; associativity on random triples."""
    n = G.order
    full = np.arange(n)
    for axis in (0, 1):
        if not (np.sort(G.mul, axis=axis) == (full[:, None] if axis == 0 else full[None, :])).all():
            raise ValueError("table is not a Latin square")
    if not (G.mul[full, G.inv] == 0).all() or not (G.mul[G.inv, full] == 0).all():
        raise ValueError("inverse law fails")
    rng = np.random.default_rng(seed)
    a, b, c = rng.integers(0, n, size=(3, samples))
    if not (G.mul[G.mul[a, b], c] == G.mul[a, G.mul[b, c]]).all():
        raise ValueError("associativity fails on a sampled triple")


# --------------------------------------------------------------------------
# building from concrete elements


class ConcreteElement(Protocol):
    def __mul__(self, other: Any) -> Any: ...

    def inverse(self) -> Any: ...

    @property
    def key(self) -> bytes: ...

    @property
    def carrier(self) -> Any: ...


def build_from_concrete(
    generators: Sequence[ConcreteElement], label: str = "", cap: int = CLOSURE_CAP
) -> tuple[GroupTable, dict[bytes, int], list[ConcreteElement]]:
    """Close a set of concrete elements under multiplication.

    Returns the table, a map from element key to index, and the concrete
    elements in index order.  Associativity is inherited from the concrete
    multiplication, so no table-level check is run.
    """
    if not generators:
        raise ValueError("need at least one generator")
    carrier = generators[0].carrier
    for g in generators:
        if g.carrier != carrier:
            raise InconsistentElement("generators do not share a carrier")
    ident = generators[0] * generators[0].inverse()
    elements: list[ConcreteElement] = [ident]
    index: dict[bytes, int] = {ident.key: 0}
    gens = [g for g in generators if g.key != ident.key]
    gen_idx = []
    # right-multiplication action of each generator, filled as we go
    right: list[list[int]] = [[] for _ in gens]
    parent: list[tuple[int, int]] = [(-1, -1)]
    i = 0
    while i < len(elements):
        x = elements[i]
        for s, g in enumerate(gens):
            y = x * g
            if y.carrier != carrier:
                raise InconsistentElement("product left the declared carrier")
            k = index.get(y.key)
            if k is None:
                k = len(elements)
                if k >= cap:
                    raise CapExceeded(f"closure exceeds cap {cap}")
                index[y.key] = k
                elements.append(y)
                parent.append((i, s))
            right[s].append(k)
        i += 1
    gen_idx = [index[g.key] for g in gens]
    n = len(elements)
    R = [np.asarray(r, dtype=np.int64) for r in right]
    dtype = _index_dtype(n)
    mul = np.empty((n, n), dtype=dtype)
    mul[:, 0] = np.arange(n)
    for y in range(1, n):
        p, s = parent[y]
        mul[:, y] = R[s][mul[:, p]]
    G = GroupTable(mul, label, gens=gen_idx if gen_idx else ())
    return G, index, elements


def table_from_function(n: int, op, label: str = "") -> GroupTable:
    """Tabulate ``op(i, j)`` for ``0 <= i, j < n`` (identity must be 0)."""
    mul = np.fromfunction(np.vectorize(op), (n, n), dtype=np.int64)
    return GroupTable(mul, label)


# --------------------------------------------------------------------------
# subgroups


class SubSet:
    """A subset of a group (normally a subgroup) stored as a membership bit-vector."""

    __slots__ = ("parent", "elements", "mask", "_key", "_gens")

    def __init__(self, parent: GroupTable, elements: Iterable[int] | np.ndarray, gens: Sequence[int] | None = None):
        self.parent = parent
        mask = np.zeros(parent.order, dtype=bool)
        mask[np.asarray(list(elements) if not isinstance(elements, np.ndarray) else elements, dtype=np.int64)] = True
        self.mask = _freeze(mask)
        self.elements = _freeze(np.flatnonzero(mask))
        self._key: bytes | None = None
        self._gens = tuple(int(g) for g in gens) if gens is not None else None

    @classmethod
    def from_mask(cls, parent: GroupTable, mask: np.ndarray, gens: Sequence[int] | None = None) -> "SubSet":
        return cls(parent, np.flatnonzero(mask), gens)

    @property
    def size(self) -> int:
        return int(self.elements.size)

    order = size

    def __len__(self) -> int:
        return self.size

    @property
    def key(self) -> bytes:
        """Packed membership bits, most significant bit = element 0."""
        if self._key is None:
            self._key = np.packbits(self.mask).tobytes()
        return self._key

    @property
    def gens(self) -> tuple[int, ...]:
        if self._gens is None:
            self._gens = greedy_generators(self.parent, self.elements.tolist())
        return self._gens

    def __contains__(self, x: int) -> bool:
        return bool(self.mask[x])

    def __iter__(self):
        return iter(self.elements.tolist())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SubSet) and other.parent is self.parent and other.key == self.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __le__(self, other: "SubSet") -> bool:
        return not (self.mask & ~other.mask).any()

    def __repr__(self) -> str:
        return f"SubSet(size={self.size}, parent={self.parent.label!r})"

    def is_subgroup(self) -> bool:
        e = self.elements
        if not self.mask[0]:
            return False
        return bool(self.mask[self.parent.mul[np.ix_(e, e)]].all() and self.mask[self.parent.inv[e]].all())

    @property
    def is_abelian(self) -> bool:
        sub = self.parent.mul[np.ix_(self.elements, self.elements)]
        return bool(np.array_equal(sub, sub.T))

    def table(self, label: str = "") -> tuple[GroupTable, np.ndarray]:
        """Materialize as a standalone table; returns ``(table, embedding)``."""
        e = self.elements
        relabel = np.full(self.parent.order, -1, dtype=np.int64)
        relabel[e] = np.arange(e.size)
        sub = relabel[self.parent.mul[np.ix_(e, e)]]
        gens = None if self._gens is None else [int(relabel[g]) for g in self._gens]
        return GroupTable(sub, label or f"subgroup of {self.parent.label}", gens=gens), e


def extend_closure(
    G: GroupTable, H_elements: np.ndarray, H_mask: np.ndarray, H_gens: Sequence[int], g: int
) -> tuple[np.ndarray, tuple[int, ...]]:
    """Mask of ``<H, g>`` for a subgroup ``H``, built coset by coset."""
    gens = (*H_gens, int(g))
    mask = H_mask.copy()
    if mask[g]:
        return mask, tuple(H_gens)
    prod = G.prod
    mul = G.mul
    reps = [0]
    i = 0
    while i < len(reps):
        r = reps[i]
        i += 1
        for s in gens:
            x = prod(r, s)
            if not mask[x]:
                mask[mul[H_elements, x]] = True
                reps.append(x)
    return mask, gens


def subgroup_closure(G: GroupTable, seed: Iterable[int]) -> SubSet:
    """Smallest subgroup containing ``seed``."""
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    elems = np.zeros(1, dtype=np.int64)
    gens: tuple[int, ...] = ()
    for g in sorted(set(int(s) for s in seed)):
        if not mask[g]:
            mask, gens = extend_closure(G, elems, mask, gens, g)
            elems = np.flatnonzero(mask)
    return SubSet(G, elems, gens)


def greedy_generators(G: GroupTable, elements: Sequence[int]) -> tuple[int, ...]:
    """A small generating set for the subgroup with the given elements.

    Repeatedly adds the element of largest order not yet covered.
    """
    elements = list(elements)
    target = len(elements)
    order = G.elt_order
    pool = sorted(elements, key=lambda x: (-int(order[x]), x))
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    elems = np.zeros(1, dtype=np.int64)
    gens: tuple[int, ...] = ()
    for x in pool:
        if elems.size == target:
            break
        if not mask[x]:
            mask, gens = extend_closure(G, elems, mask, gens, x)
            elems = np.flatnonzero(mask)
    return gens


def join(G: GroupTable, A: SubSet, B: SubSet) -> SubSet:
    """Subgroup generated by ``A`` and ``B``."""
    mask, elems, gens = A.mask.copy(), A.elements, A.gens
    for g in B.gens:
        if not mask[g]:
            mask, gens = extend_closure(G, elems, mask, gens, g)
            elems = np.flatnonzero(mask)
    return SubSet(G, elems, gens)


def normal_closure(G: GroupTable, seed: Iterable[int], within: SubSet | None = None) -> SubSet:
    """Smallest subgroup containing ``seed`` normalized by ``within`` (default ``G``)."""
    conj_by = (within or G.whole).gens
    S = subgroup_closure(G, seed)
    mask, elems, gens = S.mask.copy(), S.elements, S.gens
    prod, inv = G.prod, G.inv
    changed = True
    while changed:
        changed = False
        for t in conj_by:
            ti = int(inv[t])
            for x in list(gens):
                y = prod(prod(t, x), ti)
                if not mask[y]:
                    mask, gens = extend_closure(G, elems, mask, gens, y)
                    elems = np.flatnonzero(mask)
                    changed = True
    return SubSet(G, elems, gens)


# --------------------------------------------------------------------------
# centers, normalizers, conjugacy


def center(G: GroupTable) -> SubSet:
    return SubSet.from_mask(G, (G.mul == G.mul.T).all(axis=1))


def centralizer(G: GroupTable, S: SubSet) -> SubSet:
    e = S.elements
    return SubSet.from_mask(G, (G.mul[:, e] == G.mul[e, :].T).all(axis=1))


def normalizer(G: GroupTable, S: SubSet) -> SubSet:
    return SubSet.from_mask(G, S.mask[G.conj[:, S.elements]].all(axis=1))


def is_normal(G: GroupTable, S: SubSet) -> bool:
    if S.parent is not G:
        raise ValueError("subset belongs to a different group")
    for g in G.gens:
        if not S.mask[G.mul[G.mul[g, S.elements], G.inv[g]]].all():
            return False
    return True


@dataclass(frozen=True)
class ConjClassPartition:
    class_of: np.ndarray
    representatives: tuple[int, ...]
    sizes: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.representatives)

    def members(self, c: int) -> np.ndarray:
        return np.flatnonzero(self.class_of == c)


def conjugacy_classes(G: GroupTable) -> ConjClassPartition:
    return _classes_cached(G)


def _classes_cached(G: GroupTable) -> ConjClassPartition:
    cached = G.__dict__.get("_conj_classes")
    if cached is not None:
        return cached
    class_of = np.full(G.order, -1, dtype=np.int64)
    reps, sizes = [], []
    conj = G.conj
    for x in range(G.order):
        if class_of[x] < 0:
            members = np.unique(conj[:, x])
            class_of[members] = len(reps)
            reps.append(x)
            sizes.append(int(members.size))
    part = ConjClassPartition(_freeze(class_of), tuple(reps), tuple(sizes))
    G.__dict__["_conj_classes"] = part
    return part


def class_signature(G: GroupTable) -> list[tuple[int, int]]:
    """Sorted multiset of (element order, class size) over conjugacy classes."""
    cc = conjugacy_classes(G)
    return sorted((int(G.elt_order[r]), s) for r, s in zip(cc.representatives, cc.sizes))


# --------------------------------------------------------------------------
# maps and quotients


class GroupMap:
    """A map between groups given by an element-index image array."""

    def __init__(self, domain: GroupTable, codomain: GroupTable, image: Sequence[int] | np.ndarray) -> None:
        self.domain = domain
        self.codomain = codomain
        self.image = _freeze(np.asarray(image, dtype=np.int64).copy())
        if self.image.shape != (domain.order,):
            raise ValueError("image array has the wrong length")

    def __call__(self, x: int) -> int:
        return int(self.image[x])

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, GroupMap)
            and other.domain is self.domain
            and other.codomain is self.codomain
            and np.array_equal(other.image, self.image)
        )

    def __hash__(self) -> int:
        return hash(self.image.tobytes())

    def __repr__(self) -> str:
        return f"GroupMap({self.domain.label!r} -> {self.codomain.label!r})"

    def is_homomorphism(self) -> bool:
        f = self.image
        return bool((f[self.domain.mul] == self.codomain.mul[f[:, None], f[None, :]]).all())

    def is_bijective(self) -> bool:
        return self.domain.order == self.codomain.order and np.unique(self.image).size == self.domain.order

    def kernel(self) -> SubSet:
        return SubSet(self.domain, np.flatnonzero(self.image == 0))

    def image_subset(self, S: SubSet | None = None) -> SubSet:
        src = self.image if S is None else self.image[S.elements]
        return SubSet(self.codomain, np.unique(src))

    def compose(self, inner: "GroupMap") -> "GroupMap":
        """``self ∘ inner``."""
        if inner.codomain is not self.domain:
            raise ValueError("maps are not composable")
        return GroupMap(inner.domain, self.codomain, self.image[inner.image])

    def inverse(self) -> "GroupMap":
        inv = np.empty_like(self.image)
        inv[self.image] = np.arange(self.domain.order)
        return GroupMap(self.codomain, self.domain, inv)


def identity_map(G: GroupTable) -> GroupMap:
    return GroupMap(G, G, np.arange(G.order))


def inner_automorphism(G: GroupTable, g: int) -> GroupMap:
    return GroupMap(G, G, G.conj[g])


def quotient(G: GroupTable, N: SubSet, label: str = "") -> tuple[GroupTable, GroupMap]:
    """``G/N`` with the projection map; cosets are numbered by least element."""
    if not is_normal(G, N):
        raise NotNormal("quotient requires a normal subgroup")
    cosets = G.mul[:, N.elements]
    least = cosets.min(axis=1)
    reps = np.unique(least)
    relabel = np.full(G.order, -1, dtype=np.int64)
    relabel[reps] = np.arange(reps.size)
    proj = relabel[least]
    qmul = proj[G.mul[np.ix_(reps, reps)]]
    Q = GroupTable(qmul, label or f"({G.label})/N{N.size}")
    return Q, GroupMap(G, Q, proj)


def commutator_subgroup(G: GroupTable, S: SubSet | None = None) -> SubSet:
    """Derived subgroup ``[S, S]``."""
    S = S or G.whole
    gens = S.gens
    comms = {G.commutator(a, b) for a in gens for b in gens}
    return normal_closure(G, comms, within=S)


def derived_series(G: GroupTable) -> list[SubSet]:
    series = [G.whole]
    while True:
        nxt = commutator_subgroup(G, series[-1])
        if nxt.size == series[-1].size:
            return series
        series.append(nxt)


def perfect_core(G: GroupTable) -> SubSet:
    return derived_series(G)[-1]


# --------------------------------------------------------------------------
# abelian invariants


def _prime_factors(n: int) -> list[int]:
    ps, p = [], 2
    while p * p <= n:
        if n % p == 0:
            ps.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        ps.append(n)
    return ps


def abelian_invariants(S: SubSet | GroupTable) -> tuple[int, ...]:
    """Invariant factors ``(d1, d2, ...)`` with ``d1 | d2 | ...``; trivial group -> ``()``."""
    if isinstance(S, GroupTable):
        S = S.whole
    if not S.is_abelian:
        raise NotAbelian("abelian invariants of a non-abelian subgroup")
    orders = S.parent.elt_order[S.elements]
    factors: list[list[int]] = []
    for p in _prime_factors(S.size):
        part = 1
        while S.size % (part * p) == 0:
            part *= p
        # s[k] = log_p #{x : x^(p^k) = 1}; factors of exponent >= k number s[k] - s[k-1]
        s = [0]
        while p ** s[-1] < part:
            cnt = int(np.count_nonzero((p ** len(s)) % orders == 0))
            e = 0
            while p**e < cnt:
                e += 1
            s.append(e)
        at_least = [s[k] - s[k - 1] for k in range(1, len(s))] + [0]
        exps = []
        for k in range(1, len(s)):
            exps.extend([k] * (at_least[k - 1] - at_least[k]))
        factors.append(sorted((p**e for e in exps), reverse=True))
    width = max((len(f) for f in factors), default=0)
    inv = []
    for i in range(width):
        d = 1
        for f in factors:
            if i < len(f):
                d *= f[i]
        inv.append(d)
    return tuple(sorted(inv))


def abelianization(G: GroupTable) -> tuple[int, ...]:
    Q, _ = quotient(G, commutator_subgroup(G))
    return abelian_invariants(Q)


# --------------------------------------------------------------------------
# homomorphism search (automorphisms and isomorphisms)


class _Indeterminate:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Indeterminate"

    def __bool__(self) -> bool:
        return False


Indeterminate = _Indeterminate()


def _search_generators(G: GroupTable, weight) -> list[int]:
    """Greedy generating set: largest subgroup growth first, fewest candidate images second."""
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    elems = np.zeros(1, dtype=np.int64)
    gens: tuple[int, ...] = ()
    cc = conjugacy_classes(G)
    reps = list(cc.representatives)
    while elems.size < G.order:
        best = None
        for x in reps:
            if mask[x]:
                continue
            # conjugates of a rep give the same subgroup size only up to conjugacy, so try reps first
            m, _ = extend_closure(G, elems, mask, gens, x)
            score = (-int(m.sum()), weight(x), x)
            if best is None or score < best[0]:
                best = (score, x, m)
        if best is None:
            # every class rep is covered but some conjugate is not
            x = int(np.flatnonzero(~mask)[0])
            m, _ = extend_closure(G, elems, mask, gens, x)
            best = ((0, 0, x), x, m)
        _, x, m = best
        gens = (*gens, x)
        mask = m
        elems = np.flatnonzero(mask)
    return list(gens)


class _SpanningTree:
    """BFS layers of the chain of subgroups ``<g1> <= <g1,g2> <= ...``."""

    def __init__(self, G: GroupTable, gens: Sequence[int]) -> None:
        self.levels = []
        rows = G.rows
        seen = np.zeros(G.order, dtype=bool)
        seen[0] = True
        frontier = [0]
        members = [0]
        for j in range(len(gens)):
            layers = []
            # new generator applied to every element so far, then BFS with gens[:j+1]
            cur = list(members)
            while cur:
                layer_elems, layer_par, layer_gen = [], [], []
                for x in cur:
                    rx = rows[x]
                    for k in range(j + 1):
                        y = rx[gens[k]]
                        if not seen[y]:
                            seen[y] = True
                            layer_elems.append(y)
                            layer_par.append(x)
                            layer_gen.append(k)
                if layer_elems:
                    layers.append(
                        (np.asarray(layer_elems), np.asarray(layer_par), np.asarray(layer_gen))
                    )
                members.extend(layer_elems)
                cur = layer_elems
            self.levels.append((layers, np.asarray(members, dtype=np.int64)))
        self.gens = list(gens)


def _hom_search(G: GroupTable, H: GroupTable, *, first_only: bool, injective: bool) -> list[np.ndarray]:
    """All (or the first) injective homomorphisms ``G -> H`` found by backtracking on generator images."""
    ccG, ccH = conjugacy_classes(G), conjugacy_classes(H)
    sizeG = np.asarray(ccG.sizes)[ccG.class_of]
    sizeH = np.asarray(ccH.sizes)[ccH.class_of]
    sigH: dict[tuple[int, int], list[int]] = {}
    for y in range(H.order):
        sigH.setdefault((int(H.elt_order[y]), int(sizeH[y])), []).append(y)

    def cands(x: int) -> list[int]:
        return sigH.get((int(G.elt_order[x]), int(sizeG[x])), [])

    gens = _search_generators(G, lambda x: len(cands(x)))
    tree = _SpanningTree(G, gens)
    Hmul = H.mul
    Gmul = G.mul
    results: list[np.ndarray] = []
    f = np.full(G.order, -1, dtype=np.int64)
    f[0] = 0
    imgs = [0] * len(gens)
    gens_arr = np.asarray(gens, dtype=np.int64)

    def consistent(j: int) -> bool:
        layers, members = tree.levels[j]
        for elems, par, gi in layers:
            f[elems] = Hmul[f[par], np.asarray(imgs)[gi]]
        img = np.asarray(imgs[: j + 1])
        # f(x g_k) == f(x) f(g_k) for every x in the subgroup and k <= j
        lhs = f[Gmul[members[:, None], gens_arr[None, : j + 1]]]
        rhs = Hmul[f[members][:, None], img[None, :]]
        if not np.array_equal(lhs, rhs):
            return False
        if injective and np.unique(f[members]).size != members.size:
            return False
        return True

    def rec(j: int) -> bool:
        if j == len(gens):
            results.append(f.copy())
            return first_only
        for y in cands(gens[j]):
            imgs[j] = y
            if consistent(j) and rec(j + 1):
                return True
        return False

    if G.order == 1:
        return [f.copy()]
    rec(0)
    return results


def automorphisms(G: GroupTable, cap: int = AUTOMORPHISM_CAP) -> list[GroupMap]:
    """Every automorphism of ``G``, sorted by image array."""
    cached = G.__dict__.get("_automorphisms")
    if cached is not None:
        return cached
    if G.order > cap:
        raise CapExceeded(f"automorphism search needs |G| <= {cap}")
    found = _hom_search(G, G, first_only=False, injective=True)
    auts = [GroupMap(G, G, f) for f in sorted(found, key=lambda a: a.tolist())]
    G.__dict__["_automorphisms"] = auts
    return auts


def invariant_summary(G: GroupTable) -> dict[str, Any]:
    return {
        "order": G.order,
        "classes": class_signature(G),
        "census": G.order_census(),
        "center": abelian_invariants(center(G)),
        "abelianization": abelianization(G),
    }


def is_isomorphic(G: GroupTable, H: GroupTable, cap: int = ISOMORPHISM_CAP):
    """A witness isomorphism ``G -> H``, ``None`` when none exists, or
    ``Indeterminate`` above ``cap`` when the invariants agree."""
    if G.order != H.order:
        return None
    if invariant_summary(G) != invariant_summary(H):
        return None
    if G.order > cap:
        return Indeterminate
    found = _hom_search(G, H, first_only=True, injective=True)
    return GroupMap(G, H, found[0]) if found else None
