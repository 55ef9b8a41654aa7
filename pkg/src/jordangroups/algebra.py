"""Exact arithmetic over the small finite fields F_p and F_{p^2} (p in {2, 3, 5}),
fixed-size matrices over them, and permutations.

Field elements are encoded as integers ``a + p*b`` standing for ``a + b*x`` in
``F_p[x]/(modulus)``.  F_9 is always ``F_3[x]/(x^2 + 1)`` so element keys are
stable across runs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .errors import NoInvertibleSolution, NoSolution, ReduciblePolynomial, Singular

SUPPORTED_CHARACTERISTICS = (2, 3, 5)


@dataclass(frozen=True)
class FieldDesc:
    """A finite field of order ``p**d``.

    ``modulus`` holds ``(c0, c1)`` for the monic polynomial ``x^2 + c1*x + c0``
    when ``d == 2`` and is empty when ``d == 1``.
    """

    p: int
    d: int
    modulus: tuple[int, ...] = ()
    add_t: tuple[tuple[int, ...], ...] = field(default=(), compare=False, repr=False)
    mul_t: tuple[tuple[int, ...], ...] = field(default=(), compare=False, repr=False)
    neg_t: tuple[int, ...] = field(default=(), compare=False, repr=False)
    inv_t: tuple[int, ...] = field(default=(), compare=False, repr=False)

    @property
    def size(self) -> int:
        return self.p**self.d

    @property
    def is_prime(self) -> bool:
        return self.d == 1

    def elements(self) -> range:
        return range(self.size)

    def add(self, a: int, b: int) -> int:
        return self.add_t[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.add_t[a][self.neg_t[b]]

    def mul(self, a: int, b: int) -> int:
        return self.mul_t[a][b]

    def neg(self, a: int) -> int:
        return self.neg_t[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self.inv_t[a]

    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` under the prime-field embedding."""
        return n % self.p

    def gen(self) -> int:
        """The class of ``x`` (only meaningful when ``d == 2``)."""
        return self.p if self.d == 2 else 1

    def mult_order(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative order")
        k, y = 1, a
        while y != 1:
            y = self.mul_t[y][a]
            k += 1
        return k

    def primitive_element(self) -> int:
        return next(a for a in range(1, self.size) if self.mult_order(a) == self.size - 1)

    def name(self) -> str:
        return f"F{self.size}"


def _poly_has_root(p: int, modulus: tuple[int, int]) -> bool:
    c0, c1 = modulus
    return any((x * x + c1 * x + c0) % p == 0 for x in range(p))


def field_make(p: int, d: int = 1, modulus: Sequence[int] | None = None) -> FieldDesc:
    """Validate and tabulate a field descriptor.

    For ``d == 2`` the modulus ``(c0, c1)`` encodes ``x^2 + c1*x + c0``; a monic
    quadratic is irreducible iff it has no root in F_p.
    """
    if p not in SUPPORTED_CHARACTERISTICS:
        raise ValueError(f"unsupported characteristic {p}")
    if d not in (1, 2):
        raise ValueError(f"unsupported degree {d}")
    if d == 1:
        mod: tuple[int, ...] = ()
    else:
        if modulus is None or len(modulus) != 2:
            raise ValueError("degree-2 field needs a modulus (c0, c1)")
        mod = (modulus[0] % p, modulus[1] % p)
        if _poly_has_root(p, mod):  # type: ignore[arg-type]
            raise ReduciblePolynomial(f"x^2 + {mod[1]}x + {mod[0]} has a root over F{p}")
    q = p**d

    def split(a: int) -> tuple[int, int]:
        return a % p, a // p

    def join(a0: int, a1: int) -> int:
        return (a0 % p) + p * (a1 % p)

    add = tuple(tuple(join(split(a)[0] + split(b)[0], split(a)[1] + split(b)[1]) for b in range(q)) for a in range(q))
    neg = tuple(join(-split(a)[0], -split(a)[1]) for a in range(q))
    rows = []
    for a in range(q):
        a0, a1 = split(a)
        row = []
        for b in range(q):
            b0, b1 = split(b)
            if d == 1:
                row.append((a0 * b0) % p)
            else:
                c0, c1 = mod
                # x^2 = -c1*x - c0
                hi = a1 * b1
                lo0 = a0 * b0 - hi * c0
                lo1 = a0 * b1 + a1 * b0 - hi * c1
                row.append(join(lo0, lo1))
        rows.append(tuple(row))
    mul = tuple(rows)
    inv = [0] * q
    for a in range(1, q):
        inv[a] = next(b for b in range(1, q) if mul[a][b] == 1)
    return FieldDesc(p, d, mod, add, mul, neg, tuple(inv))


F2 = field_make(2)
F3 = field_make(3)
F5 = field_make(5)
F9 = field_make(3, 2, (1, 0))

_FIELDS = {2: F2, 3: F3, 5: F5, 9: F9}


def gf(q: int) -> FieldDesc:
    """The canonical field of order ``q`` (2, 3, 5 or 9)."""
    try:
        return _FIELDS[q]
    except KeyError:
        raise ValueError(f"no canonical field of order {q}") from None


# --------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class Mat:
    """A square matrix over a small finite field, entries stored row-major."""

    field: FieldDesc
    dim: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.dim * self.dim:
            raise ValueError("entry count does not match dimension")
        if any(not 0 <= e < self.field.size for e in self.entries):
            raise ValueError("entries must be reduced field elements")

    @classmethod
    def from_rows(cls, F: FieldDesc, rows: Sequence[Sequence[int]]) -> "Mat":
        n = len(rows)
        return cls(F, n, tuple(F.from_int(x) if F.is_prime else x for r in rows for x in r))

    @classmethod
    def identity(cls, F: FieldDesc, n: int) -> "Mat":
        return cls.scalar(F, n, 1)

    @classmethod
    def scalar(cls, F: FieldDesc, n: int, c: int) -> "Mat":
        return cls(F, n, tuple(c if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def diag(cls, F: FieldDesc, values: Sequence[int]) -> "Mat":
        n = len(values)
        return cls(F, n, tuple(values[i] if i == j else 0 for i in range(n) for j in range(n)))

    @property
    def carrier(self) -> tuple[int, int, int]:
        return (self.field.size, self.field.p, self.dim)

    def rows(self) -> list[tuple[int, ...]]:
        n = self.dim
        return [self.entries[i * n : (i + 1) * n] for i in range(n)]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.dim + j]

    def _check(self, other: "Mat") -> None:
        if other.field != self.field or other.dim != self.dim:
            raise ValueError("matrix field/dimension mismatch")

    def __mul__(self, other: "Mat") -> "Mat":
        self._check(other)
        n = self.dim
        a, b = self.entries, other.entries
        F = self.field
        if F.is_prime:
            p = F.p
            out = tuple(
                sum(a[i * n + k] * b[k * n + j] for k in range(n)) % p for i in range(n) for j in range(n)
            )
        else:
            add, mul = F.add_t, F.mul_t
            vals = []
            for i in range(n):
                for j in range(n):
                    s = 0
                    for k in range(n):
                        s = add[s][mul[a[i * n + k]][b[k * n + j]]]
                    vals.append(s)
            out = tuple(vals)
        return Mat(F, n, out)

    def __add__(self, other: "Mat") -> "Mat":
        self._check(other)
        add = self.field.add_t
        return Mat(self.field, self.dim, tuple(add[x][y] for x, y in zip(self.entries, other.entries)))

    def __neg__(self) -> "Mat":
        neg = self.field.neg_t
        return Mat(self.field, self.dim, tuple(neg[x] for x in self.entries))

    def scale(self, c: int) -> "Mat":
        mul = self.field.mul_t
        return Mat(self.field, self.dim, tuple(mul[c][x] for x in self.entries))

    def __pow__(self, k: int) -> "Mat":
        if k < 0:
            return self.inverse() ** (-k)
        result = Mat.identity(self.field, self.dim)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def det(self) -> int:
        F = self.field
        rows = [list(r) for r in self.rows()]
        n = self.dim
        d = 1
        for c in range(n):
            piv = next((r for r in range(c, n) if rows[r][c] != 0), None)
            if piv is None:
                return 0
            if piv != c:
                rows[c], rows[piv] = rows[piv], rows[c]
                d = F.neg(d)
            d = F.mul(d, rows[c][c])
            pinv = F.inv(rows[c][c])
            for r in range(c + 1, n):
                if rows[r][c]:
                    f = F.mul(rows[r][c], pinv)
                    rows[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[r], rows[c])]
        return d

    def inverse(self) -> "Mat":
        F = self.field
        n = self.dim
        aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(self.rows())]
        for c in range(n):
            piv = next((r for r in range(c, n) if aug[r][c] != 0), None)
            if piv is None:
                raise Singular("matrix has zero determinant")
            aug[c], aug[piv] = aug[piv], aug[c]
            pinv = F.inv(aug[c][c])
            aug[c] = [F.mul(pinv, x) for x in aug[c]]
            for r in range(n):
                if r != c and aug[r][c]:
                    f = aug[r][c]
                    aug[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(aug[r], aug[c])]
        return Mat(F, n, tuple(x for r in aug for x in r[n:]))

    def is_scalar(self) -> bool:
        n = self.dim
        c = self.entries[0]
        return all(self.entries[i * n + j] == (c if i == j else 0) for i in range(n) for j in range(n))

    @property
    def key(self) -> bytes:
        return bytes(self.entries)

    def __repr__(self) -> str:
        return f"Mat({self.field.name()}, {[list(r) for r in self.rows()]})"


def kron(A: Mat, B: Mat) -> Mat:
    """Kronecker product; row ``(i, k)`` maps to ``i*dim(B) + k``."""
    if A.field != B.field:
        raise ValueError("kron needs matrices over the same field")
    F = A.field
    m, n = A.dim, B.dim
    out = [0] * (m * n) ** 2
    N = m * n
    for i in range(m):
        for j in range(m):
            a = A.entries[i * m + j]
            for k in range(n):
                for l in range(n):
                    out[(i * n + k) * N + j * n + l] = F.mul(a, B.entries[k * n + l])
    return Mat(F, N, tuple(out))


def nullspace(F: FieldDesc, rows: list[list[int]], ncols: int) -> list[list[int]]:
    """Basis of ``{v : M v = 0}`` by Gauss-Jordan elimination over ``F``."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pinv = F.inv(m[r][c])
        m[r] = [F.mul(pinv, x) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = F.neg(m[i][fc])
        basis.append(v)
    return basis


def _normalize(F: FieldDesc, v: Sequence[int]) -> tuple[int, ...]:
    lead = next(x for x in v if x)
    s = F.inv(lead)
    return tuple(F.mul(s, x) for x in v)


def solve_conjugation(X: Sequence[Mat], Y: Sequence[Mat]) -> tuple[Mat, int]:
    """Find an invertible ``T`` with ``T @ X[i] == Y[i] @ T`` for every ``i``.

    Returns ``(T, dim)`` where ``dim`` is the dimension of the full solution
    space of the homogeneous system.  ``T`` is normalized so its first nonzero
    entry (row-major) is 1.
    """
    if len(X) != len(Y) or not X:
        raise ValueError("need equal-length, nonempty lists")
    F, n = X[0].field, X[0].dim
    for M in (*X, *Y):
        if M.field != F or M.dim != n:
            raise ValueError("all matrices must share field and dimension")
    # unknown t[a*n + b] = T[a, b]; equation (a, c): sum_b T[a,b] X[b,c] - sum_b Y[a,b] T[b,c] = 0
    eqs: list[list[int]] = []
    for Xi, Yi in zip(X, Y):
        for a in range(n):
            for c in range(n):
                row = [0] * (n * n)
                for b in range(n):
                    idx = a * n + b
                    row[idx] = F.add(row[idx], Xi[b, c])
                    idx = b * n + c
                    row[idx] = F.sub(row[idx], Yi[a, b])
                eqs.append(row)
    basis = nullspace(F, eqs, n * n)
    dim = len(basis)
    if dim == 0:
        raise NoSolution("no nonzero intertwiner")
    candidates = []
    if dim == 1:
        candidates.append(_normalize(F, basis[0]))
    else:
        for coeffs in itertools.product(range(F.size), repeat=dim):
            if not any(coeffs):
                continue
            v = [0] * (n * n)
            for c, b in zip(coeffs, basis):
                if c:
                    v = [F.add(x, F.mul(c, y)) for x, y in zip(v, b)]
            candidates.append(_normalize(F, v))
        candidates = sorted(set(candidates))
    for v in candidates:
        T = Mat(F, n, v)
        if T.det() != 0:
            return T, dim
    raise NoInvertibleSolution(f"all intertwiners singular (solution dimension {dim})")


def classical_generators(kind: str, q: int) -> list[Mat]:
    """Generators of SL_2(F_q) or GL_2(F_q) for q in {3, 5, 9}."""
    if q not in (3, 5, 9):
        raise ValueError(f"unsupported q={q}")
    if kind not in ("SL", "GL"):
        raise ValueError(f"unsupported kind {kind!r}")
    F = gf(q)
    one, mone = 1, F.neg(1)
    gens = [
        Mat(F, 2, (one, one, 0, one)),
        Mat(F, 2, (0, mone, one, 0)),
    ]
    w = F.primitive_element()
    if q == 9:
        gens.append(Mat.diag(F, (w, F.inv(w))))
    if kind == "GL":
        gens.append(Mat.diag(F, (w, one)))
    return gens


# --------------------------------------------------------------------------
# permutations


@dataclass(frozen=True)
class Perm:
    """A permutation of ``0..n-1``; ``(p * q)(x) == p(q(x))``."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.images)
        if n > 64:
            raise ValueError("permutations are limited to 64 points")
        if sorted(self.images) != list(range(n)):
            raise ValueError("images do not form a bijection")

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> "Perm":
        img = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, [*cyc[1:], cyc[0]]):
                img[a] = b
        return cls(tuple(img))

    @property
    def degree(self) -> int:
        return len(self.images)

    @property
    def carrier(self) -> int:
        return self.degree

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Perm") -> "Perm":
        if other.degree != self.degree:
            raise ValueError("permutation degree mismatch")
        img = self.images
        return Perm(tuple(img[y] for y in other.images))

    def inverse(self) -> "Perm":
        inv = [0] * self.degree
        for i, y in enumerate(self.images):
            inv[y] = i
        return Perm(tuple(inv))

    def sign(self) -> int:
        seen = [False] * self.degree
        s = 1
        for i in range(self.degree):
            if not seen[i]:
                j, length = i, 0
                while not seen[j]:
                    seen[j] = True
                    j = self.images[j]
                    length += 1
                if length % 2 == 0:
                    s = -s
        return s

    @property
    def key(self) -> bytes:
        return bytes(self.images)
