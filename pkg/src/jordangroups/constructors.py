"""Group expressions, their parser, and certified builders for every group in
the corpus.

Expression grammar (whitespace-insensitive, case-sensitive names)::

    expr   := term { "x" term }
    term   := name "(" args ")" | name | "(" expr ")"
            | "swap2(" expr ")"
            | "semi(" expr "," expr "," action ")"
            | "cext(" expr "," autsel "," int "," zsel ")"
            | "cprod(" expr "," expr ")"
    action := "swap" | "invert" | "outer2" | "pow(" int ")"
    autsel := "outer2" | "id"
    zsel   := "id" | "zcenter"

``D(n)`` is dihedral of order ``2n`` and ``Dic(n)`` is dicyclic of order ``n``.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .algebra import F5, F9, Mat, Perm, classical_generators, kron, solve_conjugation
from .errors import (
    CapExceeded,
    CertificateFailed,
    GroupError,
    InconsistentExtension,
    NotAbelian,
    NotAHomomorphism,
    NotCentral,
    NotIsomorphicCenters,
    ParseError,
)
from .jordan import max_normal_abelian, normal_abelian_profile, normal_subgroups
from .kernel import (
    CLOSURE_CAP,
    GroupMap,
    GroupTable,
    SubSet,
    abelian_invariants,
    abelianization,
    automorphisms,
    build_from_concrete,
    center,
    commutator_subgroup,
    is_isomorphic,
    is_normal,
    normal_closure,
    perfect_core,
    quotient,
    subgroup_closure,
)

# --------------------------------------------------------------------------
# expressions


@dataclass(frozen=True)
class Named:
    name: str
    params: tuple[int, ...] = ()


@dataclass(frozen=True)
class Direct:
    left: "GroupExpr"
    right: "GroupExpr"


@dataclass(frozen=True)
class Swap2:
    inner: "GroupExpr"


@dataclass(frozen=True)
class Semidirect:
    normal: "GroupExpr"
    acting: "GroupExpr"
    action: str


@dataclass(frozen=True)
class CentralProduct:
    left: "GroupExpr"
    right: "GroupExpr"


@dataclass(frozen=True)
class CyclicExt:
    normal: "GroupExpr"
    aut: str
    m: int
    z: str


GroupExpr = Union[Named, Direct, Swap2, Semidirect, CentralProduct, CyclicExt]

ONE_PARAM = ("C", "D", "Dic", "S", "A")
TWO_PARAM = ("SL", "GL")
NO_PARAM = ("Q8", "Tstar", "Ostar", "Istar", "SL25dot2", "SL25colon2", "ES32minus", "ES1920")
COMBINATORS = ("swap2", "semi", "cext", "cprod")
# longest first so that "Dic" wins over "D" and "SL25dot2" over "SL"
_NAMES = sorted(ONE_PARAM + TWO_PARAM + NO_PARAM + COMBINATORS, key=len, reverse=True)


def render(expr: GroupExpr) -> str:
    """Canonical text of an expression; ``parse_expr(render(e)) == e``."""
    if isinstance(expr, Named):
        if expr.params:
            return f"{expr.name}({','.join(map(str, expr.params))})"
        return expr.name
    if isinstance(expr, Direct):
        right = render(expr.right)
        if isinstance(expr.right, Direct):
            right = f"({right})"
        return f"{render(expr.left)} x {right}"
    if isinstance(expr, Swap2):
        return f"swap2({render(expr.inner)})"
    if isinstance(expr, Semidirect):
        return f"semi({render(expr.normal)}, {render(expr.acting)}, {expr.action})"
    if isinstance(expr, CentralProduct):
        return f"cprod({render(expr.left)}, {render(expr.right)})"
    if isinstance(expr, CyclicExt):
        return f"cext({render(expr.normal)}, {expr.aut}, {expr.m}, {expr.z})"
    raise TypeError(f"not a group expression: {expr!r}")


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def error(self, msg: str) -> ParseError:
        return ParseError(msg, self.text, self.pos)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            raise self.error(f"expected {ch!r}")
        self.pos += 1

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise self.error("expected an integer")
        return int(self.text[start : self.pos])

    def word(self, choices: tuple[str, ...]) -> str:
        self.skip()
        for w in sorted(choices, key=len, reverse=True):
            if self.text.startswith(w, self.pos):
                self.pos += len(w)
                return w
        raise self.error(f"expected one of {', '.join(choices)}")

    def parse(self) -> GroupExpr:
        e = self.expr()
        if self.peek():
            raise self.error("unexpected trailing input")
        return e

    def expr(self) -> GroupExpr:
        e = self.term()
        # names never start with "x", so a bare "x" after a term is the product sign
        while self.peek() == "x":
            self.pos += 1
            e = Direct(e, self.term())
        return e

    def term(self) -> GroupExpr:
        if self.peek() == "(":
            self.pos += 1
            e = self.expr()
            self.expect(")")
            return e
        self.skip()
        name = next((n for n in _NAMES if self.text.startswith(n, self.pos)), None)
        if name is None:
            raise self.error("expected a group name")
        self.pos += len(name)
        if name == "swap2":
            self.expect("(")
            e = self.expr()
            self.expect(")")
            return Swap2(e)
        if name == "semi":
            self.expect("(")
            n = self.expr()
            self.expect(",")
            h = self.expr()
            self.expect(",")
            action = self.word(("swap", "invert", "outer2", "pow"))
            if action == "pow":
                self.expect("(")
                action = f"pow({self.integer()})"
                self.expect(")")
            self.expect(")")
            return Semidirect(n, h, action)
        if name == "cext":
            self.expect("(")
            n = self.expr()
            self.expect(",")
            aut = self.word(("outer2", "id"))
            self.expect(",")
            m = self.integer()
            self.expect(",")
            z = self.word(("zcenter", "id"))
            self.expect(")")
            return CyclicExt(n, aut, m, z)
        if name == "cprod":
            self.expect("(")
            a = self.expr()
            self.expect(",")
            b = self.expr()
            self.expect(")")
            return CentralProduct(a, b)
        if name in NO_PARAM:
            return Named(name)
        self.expect("(")
        params = [self.integer()]
        while self.peek() == ",":
            self.pos += 1
            params.append(self.integer())
        self.expect(")")
        want = 1 if name in ONE_PARAM else 2
        if len(params) != want:
            raise self.error(f"{name} takes {want} parameter(s)")
        return Named(name, tuple(params))


def parse_expr(text: str) -> GroupExpr:
    return _Parser(text).parse()


# --------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class Certificate:
    """Isomorphism-invariant facts a built table must satisfy."""

    order: int | None = None
    center: tuple[int, ...] | None = None
    abelianization: tuple[int, ...] | None = None
    census: tuple[tuple[int, int], ...] | None = None
    profile: frozenset[tuple[int, ...]] | None = None
    iso_ref: str | None = None
    checks: tuple[tuple[str, Callable[[GroupTable], bool]], ...] = field(default=(), compare=False)

    def fingerprint(self) -> str:
        parts = [
            f"o={self.order}",
            f"z={self.center}",
            f"ab={self.abelianization}",
            f"c={self.census}",
            f"p={sorted(self.profile) if self.profile is not None else None}",
            f"iso={self.iso_ref}",
            "chk=" + ",".join(name for name, _ in self.checks),
        ]
        return ";".join(parts)


def check_certificate(G: GroupTable, cert: Certificate, label: str | None = None) -> None:
    """Raise ``CertificateFailed`` at the first failing check."""
    label = label or G.label

    def fail(check: str, detail: str) -> None:
        raise CertificateFailed(label, check, detail)

    if cert.order is not None and G.order != cert.order:
        fail("order", f"expected {cert.order}, got {G.order}")
    if cert.center is not None:
        got = abelian_invariants(center(G))
        if got != cert.center:
            fail("center", f"expected {cert.center}, got {got}")
    if cert.abelianization is not None:
        got = abelianization(G)
        if got != cert.abelianization:
            fail("abelianization", f"expected {cert.abelianization}, got {got}")
    if cert.census is not None:
        got = tuple(G.order_census().items())
        if got != cert.census:
            fail("census", f"expected {cert.census}, got {got}")
    if cert.profile is not None:
        got = frozenset(normal_abelian_profile(G).types())
        if got != cert.profile:
            fail("profile", f"expected {sorted(cert.profile)}, got {sorted(got)}")
    for name, fn in cert.checks:
        if not fn(G):
            fail(name, "predicate is false")
    if cert.iso_ref is not None:
        ref = build(parse_expr(cert.iso_ref))
        if not is_isomorphic(G, ref):
            fail("isomorphism", f"not isomorphic to {cert.iso_ref}")


def passes(G: GroupTable, cert: Certificate | None) -> bool:
    if cert is None:
        return True
    try:
        check_certificate(G, cert)
    except CertificateFailed:
        return False
    return True


def involutions_outside(G: GroupTable, n: int) -> int:
    """Involutions with index ``>= n``; the extensions below place ``N`` at ``0..n-1``."""
    return int(np.count_nonzero(G.elt_order[n:] == 2))


def _named_certificate(name: str, params: tuple[int, ...]) -> Certificate:
    """Textbook order, center and abelianization of each named group."""
    if name == "C":
        (n,) = params
        inv = (n,) if n > 1 else ()
        return Certificate(n, inv, inv)
    if name == "D":
        (n,) = params
        if n == 1:
            return Certificate(2, (2,), (2,))
        if n == 2:
            return Certificate(4, (2, 2), (2, 2))
        return Certificate(2 * n, (2,) if n % 2 == 0 else (), (2,) if n % 2 else (2, 2))
    if name == "Dic":
        (n4,) = params
        n = n4 // 4
        return Certificate(n4, (2,), (4,) if n % 2 else (2, 2))
    if name == "S":
        (n,) = params
        if n <= 2:
            inv = (2,) if n == 2 else ()
            return Certificate(math.factorial(n), inv, inv)
        return Certificate(math.factorial(n), (), (2,))
    if name == "A":
        (n,) = params
        if n <= 2:
            return Certificate(1, (), ())
        if n == 3:
            return Certificate(3, (3,), (3,))
        return Certificate(math.factorial(n) // 2, (), (3,) if n == 4 else ())
    if name == "SL":
        _, q = params
        return Certificate(q * (q * q - 1), (2,), (3,) if q == 3 else ())
    if name == "GL":
        _, q = params
        return Certificate((q * q - 1) * (q * q - q), (q - 1,), (q - 1,))
    one_involution = (("one involution", lambda G: len(G.involutions()) == 1),)
    fixed = {
        "Q8": Certificate(8, (2,), (2, 2), checks=one_involution),
        "Tstar": Certificate(24, (2,), (3,), census=((1, 1), (2, 1), (3, 8), (4, 6), (6, 8))),
        "Ostar": Certificate(48, (2,), (2,), checks=one_involution),
        "Istar": Certificate(120, (2,), (), checks=one_involution),
        "SL25dot2": Certificate(
            240, (2,), (2,), checks=(("no involution outside SL2(F5)", lambda G: involutions_outside(G, 120) == 0),)
        ),
        "SL25colon2": Certificate(
            240, (2,), (2,), checks=(("involution outside SL2(F5)", lambda G: involutions_outside(G, 120) > 0),)
        ),
        "ES32minus": Certificate(
            32, (2,), (2, 2, 2, 2), checks=(("11 involutions", lambda G: len(G.involutions()) == 11),)
        ),
        "ES1920": Certificate(1920, (2,), ()),
    }
    return fixed[name]


# --------------------------------------------------------------------------
# primitive constructions


def _table_with_meta(mul: np.ndarray, label: str, **meta) -> GroupTable:
    G = GroupTable(mul, label)
    G.meta = meta  # type: ignore[attr-defined]
    return G


def cyclic(n: int, label: str | None = None) -> GroupTable:
    if n < 1:
        raise ValueError("cyclic order must be positive")
    idx = np.arange(n)
    G = GroupTable((idx[:, None] + idx[None, :]) % n, label or f"C({n})", gens=[1] if n > 1 else [])
    return G


def direct(G: GroupTable, H: GroupTable, label: str | None = None, cap: int = CLOSURE_CAP) -> GroupTable:
    """``G x H`` with ``(a, b)`` at index ``a*|H| + b``."""
    n, m = G.order, H.order
    if n * m > cap:
        raise CapExceeded(f"direct product of order {n * m} exceeds cap {cap}")
    idx = np.arange(n * m)
    A, B = idx // m, idx % m
    mul = G.mul.astype(np.int64)[A[:, None], A[None, :]] * m + H.mul[B[:, None], B[None, :]]
    gens = [g * m for g in G.gens] + list(H.gens)
    D = GroupTable(mul, label or f"{G.label} x {H.label}", gens=gens)
    D.meta = {"factors": (G, H)}  # type: ignore[attr-defined]
    return D


def projections(D: GroupTable) -> tuple[GroupMap, GroupMap]:
    G, H = D.meta["factors"]  # type: ignore[attr-defined]
    idx = np.arange(D.order)
    return GroupMap(D, G, idx // H.order), GroupMap(D, H, idx % H.order)


def _is_automorphism(N: GroupTable, img: np.ndarray) -> bool:
    return np.unique(img).size == N.order and GroupMap(N, N, img).is_homomorphism()


def semidirect(N: GroupTable, H: GroupTable, action: np.ndarray, label: str | None = None) -> GroupTable:
    """``N x| H`` where ``action[h]`` is the image array of the automorphism by which ``h`` acts.

    Element ``(n, h)`` sits at ``h*|N| + n``; ``(n1,h1)(n2,h2) = (n1 h1(n2), h1 h2)``.
    """
    action = np.asarray(action, dtype=np.int64)
    nN, nH = N.order, H.order
    if action.shape != (nH, nN):
        raise NotAHomomorphism("action array has the wrong shape")
    for h in H.gens:
        if not _is_automorphism(N, action[h]):
            raise NotAHomomorphism(f"element {h} does not act by an automorphism")
    hh = np.arange(nH)
    composed = action[hh[:, None, None], action[None, :, :]]  # [h1, h2, n] = h1(h2(n))
    if not np.array_equal(action[H.mul], composed):
        raise NotAHomomorphism("action is not a homomorphism into Aut(N)")
    if nN * nH > CLOSURE_CAP:
        raise CapExceeded(f"semidirect product of order {nN * nH} exceeds cap")
    idx = np.arange(nN * nH)
    hs, ns = idx // nN, idx % nN
    mul = H.mul.astype(np.int64)[hs[:, None], hs[None, :]] * nN + N.mul[ns[:, None], action[hs[:, None], ns[None, :]]]
    gens = list(N.gens) + [h * nN for h in H.gens]
    G = GroupTable(mul, label or f"semi({N.label}, {H.label})", gens=gens)
    G.meta = {"normal_order": nN}  # type: ignore[attr-defined]
    return G


def _power_map(img: np.ndarray, k: int) -> np.ndarray:
    out = np.arange(img.size)
    for _ in range(k):
        out = img[out]
    return out


def _map_order(img: np.ndarray) -> int:
    k, cur = 1, img
    ident = np.arange(img.size)
    while not np.array_equal(cur, ident):
        cur = img[cur]
        k += 1
    return k


def _is_cyclic(H: GroupTable) -> bool:
    return bool((H.elt_order == H.order).any())


def index_two_subgroup(H: GroupTable) -> SubSet:
    """The canonical index-2 subgroup of ``H``: least bit-vector among all of them."""
    squares = subgroup_closure(H, np.unique(H.mul[np.arange(H.order), np.arange(H.order)]).tolist())
    if squares.size == H.order:
        raise NotAHomomorphism(f"{H.label} has no subgroup of index 2")
    if 2 * squares.size == H.order:
        return squares
    # H/H^2 is elementary abelian; every index-2 subgroup contains H^2
    options = [S for S in normal_subgroups(H) if 2 * S.size == H.order and squares <= S]
    return min(options, key=lambda S: S.key)


def action_array(N: GroupTable, H: GroupTable, alpha: np.ndarray) -> np.ndarray:
    """Extend one automorphism ``alpha`` of ``N`` to an action of ``H``.

    Cyclic ``H``: its least generator acts by ``alpha`` (needs ``alpha^|H| = 1``).
    Otherwise ``H`` acts through ``H/K`` for the canonical index-2 subgroup ``K``
    (needs ``alpha^2 = 1``).
    """
    alpha = np.asarray(alpha, dtype=np.int64)
    ident = np.arange(N.order)
    act = np.empty((H.order, N.order), dtype=np.int64)
    if _is_cyclic(H):
        g = int(np.flatnonzero(H.elt_order == H.order)[0])
        if not np.array_equal(_power_map(alpha, H.order), ident):
            raise NotAHomomorphism("automorphism order does not divide |H|")
        cur, x = ident, 0
        for _ in range(H.order):
            act[x] = cur
            cur = alpha[cur]
            x = H.prod(x, g)
    else:
        if not np.array_equal(alpha[alpha], ident):
            raise NotAHomomorphism("non-cyclic H acts through C2, so the automorphism must be an involution")
        K = index_two_subgroup(H)
        act[:] = alpha
        act[K.elements] = ident
    return act


def _inner_keys(N: GroupTable) -> set[bytes]:
    return {np.asarray(N.conj[g], dtype=np.int64).tobytes() for g in range(N.order)}


def outer_candidates(N: GroupTable, m: int | None, fix: int | None = None) -> list[np.ndarray]:
    """Automorphisms whose class in ``Out(N)`` has order 2, one per ``Aut(N)``-conjugacy class.

    ``m`` bounds the automorphism order (``alpha^m = 1``); ``None`` means
    ``alpha^2 = 1``.  ``fix`` is an element that must be fixed.  Ordered by
    decreasing automorphism order, then by image array.
    """
    auts = [np.asarray(a.image, dtype=np.int64) for a in automorphisms(N)]
    inner = _inner_keys(N)
    cands = []
    for a in auts:
        if a.tobytes() in inner or a[a].tobytes() not in inner:
            continue
        k = _map_order(a)
        if (m is None and k != 2) or (m is not None and m % k != 0):
            continue
        if fix is not None and a[fix] != fix:
            continue
        cands.append((k, a))
    cands.sort(key=lambda t: (-t[0], t[1].tolist()))
    inverses = [np.argsort(g) for g in auts]
    seen: set[bytes] = set()
    reps = []
    for _, a in cands:
        if a.tobytes() in seen:
            continue
        reps.append(a)
        for g, gi in zip(auts, inverses):
            seen.add(g[a[gi]].tobytes())
    return reps


def _swap_action(N: GroupTable) -> np.ndarray:
    meta = getattr(N, "meta", {})
    if "factors" not in meta:
        raise NotAHomomorphism("swap needs a direct product of two equal factors")
    A, B = meta["factors"]
    if A.order != B.order or not np.array_equal(A.mul, B.mul):
        raise NotAHomomorphism("swap needs identical factors")
    idx = np.arange(N.order)
    a, b = idx // B.order, idx % B.order
    return b * B.order + a


def _pow_action(N: GroupTable, k: int) -> np.ndarray:
    if not N.is_abelian:
        raise NotAbelian("power maps are automorphisms only of abelian groups")
    img = np.array([N.power(x, k) for x in range(N.order)], dtype=np.int64)
    if np.unique(img).size != N.order:
        raise NotAHomomorphism(f"x -> x^{k} is not bijective")
    return img


def cyclic_extension(
    N: GroupTable, phi: np.ndarray, m: int, z: int, label: str | None = None
) -> GroupTable:
    """``<N, t | t a t^-1 = phi(a), t^m = z>`` with ``t^k a`` at index ``k*|N| + a``."""
    phi = np.asarray(phi, dtype=np.int64)
    nN = N.order
    ident = np.arange(nN)
    if m < 1:
        raise InconsistentExtension("m must be positive")
    if not _is_automorphism(N, phi):
        raise InconsistentExtension("phi is not an automorphism")
    if not np.array_equal(_power_map(phi, m), ident):
        raise InconsistentExtension("phi^m is not the identity")
    if not (N.mul[z] == N.mul[:, z]).all():
        raise InconsistentExtension("z is not central")
    if phi[z] != z:
        raise InconsistentExtension("phi does not fix z")
    if nN * m > CLOSURE_CAP:
        raise CapExceeded("cyclic extension exceeds cap")
    powers = np.empty((m, nN), dtype=np.int64)
    cur = ident
    for k in range(m):
        powers[k] = cur
        cur = phi[cur]
    idx = np.arange(nN * m)
    ks, ns = idx // nN, idx % nN
    k1, k2 = ks[:, None], ks[None, :]
    # (t^i a)(t^j b) = t^(i+j) phi^-j(a) b ; store elements as t^k * a
    # we use the normal form a t^k instead: (a t^i)(b t^j) = a phi^i(b) t^(i+j)
    body = N.mul[ns[:, None], powers[k1, ns[None, :]]]
    wrap = (k1 + k2) >= m
    body = np.where(wrap, N.mul[body, z], body)
    mul = ((k1 + k2) % m) * nN + body
    gens = list(N.gens) + ([nN] if m > 1 else [])
    G = GroupTable(mul, label or f"cext({N.label}, {m})", gens=gens)
    G.meta = {"normal_order": nN}  # type: ignore[attr-defined]
    return G


def central_product(
    A: GroupTable, B: GroupTable, za: int | None = None, zb: int | None = None, label: str | None = None
) -> GroupTable:
    """``(A x B) / <(za, zb^-1)>``; by default the centers' least generators are identified."""
    ZA, ZB = center(A), center(B)
    if za is None or zb is None:
        inv_a, inv_b = abelian_invariants(ZA), abelian_invariants(ZB)
        if len(inv_a) > 1 or inv_a != inv_b:
            raise NotIsomorphicCenters(f"centers {inv_a} and {inv_b} are not cyclic of equal order")
        if not inv_a:
            za = zb = 0
        else:
            za = int(next(x for x in ZA.elements if A.elt_order[x] == ZA.size))
            zb = int(next(x for x in ZB.elements if B.elt_order[x] == ZB.size))
    if za not in ZA:
        raise NotCentral("designated element of the left factor is not central")
    if zb not in ZB:
        raise NotCentral("designated element of the right factor is not central")
    if A.elt_order[za] != B.elt_order[zb]:
        raise NotIsomorphicCenters("designated central subgroups have different orders")
    D = direct(A, B)
    K = subgroup_closure(D, [za * B.order + int(B.inv[zb])])
    Q, _ = quotient(D, K, label or f"cprod({A.label}, {B.label})")
    return Q


# --------------------------------------------------------------------------
# named groups


def _quaternion_units():
    """``1, i, j, k`` as 2x2 matrices over F9 with ``i = diag(x, -x)``."""
    F = F9
    x = F.gen()
    one = Mat.identity(F, 2)
    i = Mat.diag(F, (x, F.neg(x)))
    j = Mat(F, 2, (0, 1, F.neg(1), 0))
    return F, one, i, j, i * j


def _quaternion(a: int, b: int, c: int, d: int) -> Mat:
    F, one, i, j, k = _quaternion_units()
    return one.scale(a) + i.scale(b) + j.scale(c) + k.scale(d)


def quaternion_generators(name: str) -> list[Mat]:
    F, _, i, j, _ = _quaternion_units()
    half = F.inv(2)
    omega = _quaternion(F.neg(half), half, half, half)  # (-1+i+j+k)/2
    if name == "Q8":
        return [i, j]
    if name == "Tstar":
        return [i, j, omega]
    if name == "Ostar":
        r = F.inv(F.gen())  # x^2 = -1 = 2 in F9, so x is a square root of 2
        return [i, j, omega, _quaternion(r, r, 0, 0)]  # (1+i)/sqrt(2)
    if name == "Istar":
        phi = F.mul(half, F.add(1, F.gen()))  # golden ratio: 5 = 2 = x^2
        t = _quaternion(F.mul(half, phi), F.mul(half, F.inv(phi)), half, 0)
        return [omega, t]
    raise KeyError(name)


def extraspecial_generators() -> list[Mat]:
    """Generators of ``Q8 o D8`` in GL_4(F5) as Kronecker products."""
    F = F5
    one = Mat.identity(F, 2)
    qi = Mat.from_rows(F, [[2, 0], [0, 3]])
    qj = Mat.from_rows(F, [[0, 1], [-1, 0]])
    r = Mat.from_rows(F, [[0, -1], [1, 0]])
    s = Mat.from_rows(F, [[1, 0], [0, -1]])
    return [kron(qi, one), kron(qj, one), kron(one, r), kron(one, s)]


def _perm_generators(kind: str, n: int) -> list[Perm]:
    if n <= 1 or (kind == "A" and n <= 2):
        return [Perm.identity(max(n, 1))]
    if kind == "S":
        return [Perm.from_cycles(n, (0, 1)), Perm.from_cycles(n, tuple(range(n)))]
    if n == 3:
        return [Perm.from_cycles(3, (0, 1, 2))]
    long = tuple(range(n)) if n % 2 else tuple(range(1, n))
    return [Perm.from_cycles(n, (0, 1, 2)), Perm.from_cycles(n, long)]


def build_es1920(label: str = "ES1920") -> GroupTable:
    """A group ``2^{1+4}_-.Alt5`` of order 1920 inside GL_4(F5).

    Automorphisms of the extraspecial group covering the derived subgroup of
    its outer automorphism group are lifted to 4x4 intertwiners; the closure of
    the extraspecial group, the lifts and the scalars is then cut down to its
    perfect core, which drops the scalars.
    """
    X = extraspecial_generators()
    E, index, elts = build_from_concrete(X, "ES32minus")
    auts = automorphisms(E)
    perms = [Perm(tuple(int(v) for v in a.image)) for a in auts]
    # a generating set of Aut(E): add automorphisms until the closure is everything
    gens: list[Perm] = []
    covered: set[bytes] = set()
    for p in perms:
        if p.key in covered:
            continue
        gens.append(p)
        Aut, aidx, _ = build_from_concrete(gens, "Aut(ES32minus)")
        covered = set(aidx)
        if len(covered) == len(perms):
            break
    inner = subgroup_closure(Aut, [aidx[Perm(tuple(int(v) for v in E.conj[g])).key] for g in range(E.order)])
    Out, proj = quotient(Aut, inner, "Out(ES32minus)")
    alt = commutator_subgroup(Out)
    lifts = []
    gen_idx = [index[x.key] for x in X]
    by_index = {aidx[p.key]: p.images for p in perms}
    for q in alt.gens:
        a = int(np.flatnonzero(proj.image == q)[0])
        image = np.asarray(by_index[a], dtype=np.int64)
        Y = [elts[int(image[g])] for g in gen_idx]
        T, _ = solve_conjugation(X, Y)
        lifts.append(T)
    scalar = Mat.scalar(F5, 4, 2)
    big, bidx, _ = build_from_concrete([*X, *lifts, scalar], "ES1920 ambient")
    core = perfect_core(big)
    G, _ = core.table(label)
    G.meta = {  # type: ignore[attr-defined]
        "extraspecial": _embedded_extraspecial(G, core, bidx, elts),
        "ambient_order": big.order,
        "lift_count": len(lifts),
    }
    return G


def _embedded_extraspecial(G: GroupTable, core: SubSet, bidx: dict[bytes, int], elts: list[Mat]) -> SubSet:
    relabel = {int(x): k for k, x in enumerate(core.elements)}
    return SubSet(G, [relabel[bidx[m.key]] for m in elts])


def es1920_certificate() -> Certificate:
    def e_normal(G: GroupTable) -> bool:
        E = G.meta["extraspecial"]
        return E.size == 32 and is_normal(G, E)

    def quotient_simple(G: GroupTable) -> bool:
        Q, _ = quotient(G, G.meta["extraspecial"])
        return Q.order == 60 and len(normal_subgroups(Q)) == 2

    def center_is_max_normal_abelian(G: GroupTable) -> bool:
        return max_normal_abelian(G) == center(G)

    def irreducible_on_frattini_quotient(G: GroupTable) -> bool:
        # no normal subgroup strictly between Z and E: every x in E \ Z has normal closure E
        E, Z = G.meta["extraspecial"], center(G)
        return all(normal_closure(G, [int(x)]) == E for x in E.elements if x not in Z)

    def e_is_minus_type(G: GroupTable) -> bool:
        T, _ = G.meta["extraspecial"].table()
        return bool(is_isomorphic(T, build(Named("ES32minus"))))

    return Certificate(
        1920,
        (2,),
        (),
        checks=(
            ("extraspecial normal subgroup", e_normal),
            ("quotient is simple of order 60", quotient_simple),
            ("center is the unique maximal normal abelian subgroup", center_is_max_normal_abelian),
            ("quotient acts irreducibly on E/Z", irreducible_on_frattini_quotient),
            ("normal subgroup is 2^(1+4)_-", e_is_minus_type),
        ),
    )


# --------------------------------------------------------------------------
# build dispatcher


_CACHE: dict[str, GroupTable] = {}
_LOCK = threading.Lock()


def _memo(key: str, make: Callable[[], GroupTable]) -> GroupTable:
    with _LOCK:
        hit = _CACHE.get(key)
    if hit is not None:
        return hit
    G = make()
    with _LOCK:
        return _CACHE.setdefault(key, G)


def clear_cache() -> None:
    with _LOCK:
        _CACHE.clear()


def build_named(expr: Named) -> GroupTable:
    name, params = expr.name, expr.params
    label = render(expr)
    if name == "C":
        (n,) = params
        G = cyclic(n, label)
    elif name == "D":
        (n,) = params
        if n < 1:
            raise ValueError("D(n) needs n >= 1")
        G = semidirect(cyclic(n), cyclic(2), action_array(cyclic(n), cyclic(2), _pow_action(cyclic(n), -1)), label)
    elif name == "Dic":
        (n4,) = params
        if n4 % 4 or n4 < 8:
            raise ValueError("Dic(4n) needs n >= 2")
        n = n4 // 4
        C = cyclic(2 * n)
        G = cyclic_extension(C, _pow_action(C, -1), 2, n, label)
    elif name in ("S", "A"):
        (n,) = params
        if n < 1:
            raise ValueError(f"{name}(n) needs n >= 1")
        G, _, _ = build_from_concrete(_perm_generators(name, n), label)
    elif name in ("SL", "GL"):
        d, q = params
        if d != 2:
            raise ValueError("only 2x2 classical groups are supported")
        G, _, _ = build_from_concrete(classical_generators(name, q), label)
    elif name in ("Q8", "Tstar", "Ostar", "Istar"):
        G, _, _ = build_from_concrete(quaternion_generators(name), label)
    elif name == "ES32minus":
        G, _, _ = build_from_concrete(extraspecial_generators(), label)
    elif name in ("SL25dot2", "SL25colon2"):
        z = "zcenter" if name == "SL25dot2" else "id"
        inner = CyclicExt(Named("SL", (2, 5)), "outer2", 2, z)
        G = _build(inner, _named_certificate(name, params))
        G.label = label
    elif name == "ES1920":
        G = build_es1920(label)
        check_certificate(G, es1920_certificate(), label)
    else:
        raise ValueError(f"unknown group name {name!r}")
    check_certificate(G, _named_certificate(name, params), label)
    return G


def _z_element(N: GroupTable, zsel: str) -> int:
    if zsel == "id":
        return 0
    Z = center(N)
    invs = [int(x) for x in Z.elements if N.elt_order[x] == 2]
    if len(invs) != 1:
        raise InconsistentExtension("zcenter needs a unique central involution")
    return invs[0]


def _select(candidates, make: Callable[[np.ndarray], GroupTable], cert: Certificate | None, label: str) -> GroupTable:
    """First candidate whose build passes ``cert``; records how many passed."""
    tried = 0
    chosen = None
    passing = []
    for alpha in candidates:
        tried += 1
        try:
            G = make(alpha)
        except (NotAHomomorphism, InconsistentExtension):
            continue
        if passes(G, cert):
            passing.append(G)
            if chosen is None:
                chosen = G
            if cert is None:
                break
    if chosen is None:
        if tried == 0:
            raise CertificateFailed(label, "candidates", "no automorphism of the requested kind")
        raise CertificateFailed(label, "selection", f"none of {tried} candidate actions passes")
    distinct = [passing[0]]
    for H in passing[1:]:
        if not any(is_isomorphic(H, K) for K in distinct):
            distinct.append(H)
    chosen.meta["selection"] = {"tried": tried, "passing": len(passing), "distinct": len(distinct)}
    return chosen


def _build(expr: GroupExpr, cert: Certificate | None = None) -> GroupTable:
    label = render(expr)
    if isinstance(expr, Named):
        G = build_named(expr)
    elif isinstance(expr, Direct):
        G = direct(build(expr.left), build(expr.right), label)
    elif isinstance(expr, Swap2):
        inner = build(expr.inner)
        N = build(Direct(expr.inner, expr.inner))
        G = semidirect(N, cyclic(2), action_array(N, cyclic(2), _swap_action(N)), label)
        if G.order != 2 * inner.order**2:
            raise CertificateFailed(label, "order", "swap2 order mismatch")
    elif isinstance(expr, Semidirect):
        N, H = build(expr.normal), build(expr.acting)
        act = expr.action
        if act == "outer2":
            m = H.order if _is_cyclic(H) else None
            G = _select(
                outer_candidates(N, m),
                lambda a: semidirect(N, H, action_array(N, H, a), label),
                cert,
                label,
            )
        else:
            if act == "swap":
                alpha = _swap_action(N)
            elif act == "invert":
                alpha = _pow_action(N, -1)
            elif act.startswith("pow("):
                alpha = _pow_action(N, int(act[4:-1]))
            else:
                raise ValueError(f"unknown action {act!r}")
            G = semidirect(N, H, action_array(N, H, alpha), label)
    elif isinstance(expr, CentralProduct):
        G = central_product(build(expr.left), build(expr.right), label=label)
    elif isinstance(expr, CyclicExt):
        N = build(expr.normal)
        z = _z_element(N, expr.z)
        if expr.aut == "id":
            G = cyclic_extension(N, np.arange(N.order), expr.m, z, label)
        else:
            G = _select(
                outer_candidates(N, expr.m, fix=z),
                lambda a: cyclic_extension(N, a, expr.m, z, label),
                cert,
                label,
            )
    else:
        raise TypeError(f"not a group expression: {expr!r}")
    if not hasattr(G, "meta"):
        G.meta = {}  # type: ignore[attr-defined]
    if cert is not None:
        check_certificate(G, cert, label)
    return G


def build(expr: GroupExpr | str, certificate: Certificate | None = None) -> GroupTable:
    """Build (and memoize) the table of an expression, checking ``certificate``.

    Identical expressions yield the identical table object within a process.
    """
    if isinstance(expr, str):
        expr = parse_expr(expr)
    key = render(expr) + ("" if certificate is None else "|" + certificate.fingerprint())
    return _memo(key, lambda: _build(expr, certificate))


def expected_order(expr: GroupExpr) -> int:
    """Order predicted from the expression alone."""
    if isinstance(expr, Named):
        return _named_certificate(expr.name, expr.params).order  # type: ignore[return-value]
    if isinstance(expr, Direct):
        return expected_order(expr.left) * expected_order(expr.right)
    if isinstance(expr, Swap2):
        return 2 * expected_order(expr.inner) ** 2
    if isinstance(expr, Semidirect):
        return expected_order(expr.normal) * expected_order(expr.acting)
    if isinstance(expr, CyclicExt):
        return expr.m * expected_order(expr.normal)
    if isinstance(expr, CentralProduct):
        a, b = build(expr.left), build(expr.right)
        return a.order * b.order // center(a).size
    raise TypeError(expr)


__all__ = [
    "Named",
    "Direct",
    "Swap2",
    "Semidirect",
    "CentralProduct",
    "CyclicExt",
    "GroupExpr",
    "Certificate",
    "GroupError",
    "build",
    "build_named",
    "build_es1920",
    "parse_expr",
    "render",
    "direct",
    "semidirect",
    "cyclic_extension",
    "central_product",
    "check_certificate",
]
