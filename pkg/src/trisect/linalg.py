"""Exact linear algebra over the integers.

Matrices are 2-D numpy arrays with ``dtype=object`` holding Python ints, so
all arithmetic is arbitrary precision.  No floating point is used anywhere in
this module.  Subgroups of Z^n are generated by matrix *columns* throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "AbelianGroup",
    "Subgroup",
    "adjugate",
    "det",
    "eye",
    "hermite_normal_form",
    "hstack",
    "inverse_unimodular",
    "is_zero",
    "kernel_basis",
    "mat_eq",
    "matrix_rank",
    "membership",
    "quotient_invariants",
    "smith_normal_form",
    "smith_with_inverses",
    "snf_diagonal",
    "solve_integer",
    "solve_integer_many",
    "subgroup_intersection",
    "subgroup_sum",
    "xgcd",
    "zeros",
    "zmat",
    "zvec",
]


def zmat(data) -> np.ndarray:
    """Build an exact integer matrix from nested sequences.

    Entries must be integral; floats are rejected rather than truncated.
    Use zeros(r, c) for empty shapes.
    """
    if isinstance(data, np.ndarray) and data.dtype == object and data.ndim == 2:
        data = data.tolist()
    rows = [list(r) for r in data]
    r = len(rows)
    c = len(rows[0]) if r else 0
    out = np.empty((r, c), dtype=object)
    for i, row in enumerate(rows):
        if len(row) != c:
            raise ValueError("ragged rows in matrix data")
        for j, x in enumerate(row):
            out[i, j] = _as_int(x)
    return out


def zvec(data) -> np.ndarray:
    out = np.empty(len(data), dtype=object)
    for i, x in enumerate(data):
        out[i] = _as_int(x)
    return out


def _as_int(x) -> int:
    if isinstance(x, bool) or not isinstance(x, (int, np.integer)):
        raise TypeError(f"integer entry required, got {x!r}")
    return int(x)


def zeros(r: int, c: int) -> np.ndarray:
    out = np.empty((r, c), dtype=object)
    out[...] = 0
    return out


def eye(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = 1
    return out


def hstack(blocks) -> np.ndarray:
    blocks = list(blocks)
    if not blocks:
        raise ValueError("need at least one block")
    return np.hstack(blocks)


def mat_eq(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and bool(np.array_equal(a, b))


def is_zero(a: np.ndarray) -> bool:
    return all(x == 0 for x in a.flat)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and a*x + b*y = g."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


def det(m: np.ndarray) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n, nc = m.shape
    if n != nc:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    a = [[int(x) for x in row] for row in m.tolist()]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pr = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pr is None:
                return 0
            a[k], a[pr] = a[pr], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def adjugate(m: np.ndarray) -> np.ndarray:
    """Adjugate matrix: adj(M)[i, j] = (-1)^(i+j) * minor(M; row j, col i)."""
    n, nc = m.shape
    if n != nc:
        raise ValueError("adjugate of a non-square matrix")
    out = zeros(n, n)
    idx = list(range(n))
    for i in range(n):
        cols = idx[:i] + idx[i + 1 :]
        for j in range(n):
            rows = idx[:j] + idx[j + 1 :]
            minor = m[np.ix_(rows, cols)]
            out[i, j] = (-1) ** (i + j) * det(minor)
    return out


def inverse_unimodular(m: np.ndarray) -> np.ndarray:
    """Exact inverse of a matrix with determinant +-1, via the adjugate."""
    d = det(m)
    if d not in (1, -1):
        raise ValueError(f"matrix is not unimodular (det = {d})")
    return adjugate(m) * d if d == -1 else adjugate(m)


class _Reducer:
    """Shared row/column elementary-operation engine with transform tracking."""

    def __init__(self, m: np.ndarray, track_inverses: bool = False):
        self.s = zmat(m) if m.size else zeros(*m.shape)
        r, c = self.s.shape
        self.u = eye(r)
        self.v = eye(c)
        self.uinv = eye(r) if track_inverses else None
        self.vinv = eye(c) if track_inverses else None

    def row_swap(self, i, j):
        self.s[[i, j], :] = self.s[[j, i], :]
        self.u[[i, j], :] = self.u[[j, i], :]
        if self.uinv is not None:
            self.uinv[:, [i, j]] = self.uinv[:, [j, i]]

    def row_negate(self, i):
        self.s[i, :] = -self.s[i, :]
        self.u[i, :] = -self.u[i, :]
        if self.uinv is not None:
            self.uinv[:, i] = -self.uinv[:, i]

    def row_addmul(self, src, dst, q):
        # row_dst += q * row_src
        self.s[dst, :] = self.s[dst, :] + q * self.s[src, :]
        self.u[dst, :] = self.u[dst, :] + q * self.u[src, :]
        if self.uinv is not None:
            self.uinv[:, src] = self.uinv[:, src] - q * self.uinv[:, dst]

    def col_swap(self, i, j):
        self.s[:, [i, j]] = self.s[:, [j, i]]
        self.v[:, [i, j]] = self.v[:, [j, i]]
        if self.vinv is not None:
            self.vinv[[i, j], :] = self.vinv[[j, i], :]

    def col_negate(self, i):
        self.s[:, i] = -self.s[:, i]
        self.v[:, i] = -self.v[:, i]
        if self.vinv is not None:
            self.vinv[i, :] = -self.vinv[i, :]

    def col_addmul(self, src, dst, q):
        # col_dst += q * col_src
        self.s[:, dst] = self.s[:, dst] + q * self.s[:, src]
        self.v[:, dst] = self.v[:, dst] + q * self.v[:, src]
        if self.vinv is not None:
            self.vinv[src, :] = self.vinv[src, :] - q * self.vinv[dst, :]


def _min_nonzero(s: np.ndarray, t: int):
    """Position of the smallest |entry| != 0 in s[t:, t:], ties row-major."""
    best = None
    r, c = s.shape
    for i in range(t, r):
        for j in range(t, c):
            v = s[i, j]
            if v != 0 and (best is None or abs(v) < best[0]):
                best = (abs(v), i, j)
                if best[0] == 1:
                    return best[1], best[2]
    return None if best is None else (best[1], best[2])


def _smith_engine(m: np.ndarray, track_inverses: bool):
    red = _Reducer(m, track_inverses)
    s = red.s
    r, c = s.shape
    t = 0
    while t < min(r, c):
        pos = _min_nonzero(s, t)
        if pos is None:
            break
        pi, pj = pos
        if pi != t:
            red.row_swap(t, pi)
        if pj != t:
            red.col_swap(t, pj)
        dirty = False
        for i in range(t + 1, r):
            if s[i, t] != 0:
                q = s[i, t] // s[t, t]
                if q:
                    red.row_addmul(t, i, -q)
                if s[i, t] != 0:
                    dirty = True
        for j in range(t + 1, c):
            if s[t, j] != 0:
                q = s[t, j] // s[t, t]
                if q:
                    red.col_addmul(t, j, -q)
                if s[t, j] != 0:
                    dirty = True
        if dirty:
            continue
        # pivot now alone in its row and column; enforce divisibility
        bad = None
        p = s[t, t]
        for i in range(t + 1, r):
            for j in range(t + 1, c):
                if s[i, j] % p != 0:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            red.row_addmul(bad, t, 1)
            continue
        if s[t, t] < 0:
            red.row_negate(t)
        t += 1
    return red


def smith_normal_form(m: np.ndarray):
    """Smith normal form of an integer matrix.

    Returns (U, S, V) with U*M*V = S, U and V unimodular, and S diagonal with
    nonnegative entries d_1 | d_2 | ... followed by zeros.  The reduction
    pivots on the minimal nonzero entry, so the output is deterministic.
    """
    red = _smith_engine(m, track_inverses=False)
    return red.u, red.s, red.v


def smith_with_inverses(m: np.ndarray):
    """Like smith_normal_form but also returns (Uinv, Vinv)."""
    red = _smith_engine(m, track_inverses=True)
    return red.u, red.s, red.v, red.uinv, red.vinv


def snf_diagonal(m: np.ndarray) -> list[int]:
    """The nonzero invariant factors d_1 | d_2 | ... of M."""
    _, s, _ = smith_normal_form(m)
    return [int(s[i, i]) for i in range(min(s.shape)) if s[i, i] != 0]


def matrix_rank(m: np.ndarray) -> int:
    return len(snf_diagonal(m))


def _row_hnf(m: np.ndarray):
    """Row-style Hermite form: H = U*M, pivots positive, entries above each
    pivot reduced into [0, pivot), zeros below."""
    red = _Reducer(m)
    h = red.s
    r, c = h.shape
    prow = 0
    for col in range(c):
        if prow == r:
            break
        while True:
            nz = [i for i in range(prow, r) if h[i, col] != 0]
            if not nz:
                break
            i_best = min(nz, key=lambda i: (abs(h[i, col]), i))
            if i_best != prow:
                red.row_swap(prow, i_best)
            done = True
            for i in range(prow + 1, r):
                if h[i, col] != 0:
                    q = h[i, col] // h[prow, col]
                    if q:
                        red.row_addmul(prow, i, -q)
                    if h[i, col] != 0:
                        done = False
            if done:
                break
        if h[prow, col] != 0:
            if h[prow, col] < 0:
                red.row_negate(prow)
            for i in range(prow):
                q = h[i, col] // h[prow, col]
                if q:
                    red.row_addmul(prow, i, -q)
            prow += 1
    return h, red.u


def hermite_normal_form(m: np.ndarray):
    """Column-style Hermite normal form.

    Returns (H, U) with H = M*U and U unimodular.  Convention: H is the
    transpose of the row-style Hermite form of M^T, so pivots are positive,
    pivot rows step downward column by column, entries in a pivot's row to
    its left are reduced into [0, pivot) and entries to its right are zero.
    Zero columns are collected at the right.
    """
    hr, ur = _row_hnf(m.T)
    return hr.T.copy(), ur.T.copy()


def kernel_basis(m: np.ndarray) -> "Subgroup":
    """Basis of the integer kernel {x : M x = 0}, as a canonical Subgroup.

    The kernel of an integer matrix is automatically saturated (a direct
    summand of Z^cols).
    """
    r, c = m.shape
    _, s, v = smith_normal_form(m)
    rank = len([i for i in range(min(r, c)) if s[i, i] != 0])
    return Subgroup(c, v[:, rank:])


def solve_integer(m: np.ndarray, b: np.ndarray):
    """Some integer solution x of M x = b, or None if there is none."""
    x = solve_integer_many(m, b.reshape(-1, 1))
    return None if x is None else x[:, 0]


def solve_integer_many(m: np.ndarray, b: np.ndarray):
    """Solve M X = B over the integers for a matrix right-hand side.

    Returns X or None if any column is unsolvable.  A single factorization is
    reused across all columns.
    """
    r, c = m.shape
    if b.shape[0] != r:
        raise ValueError("dimension mismatch in integer solve")
    u, s, v = smith_normal_form(m)
    ub = u @ b
    k = b.shape[1]
    y = zeros(c, k)
    rank = min(r, c)
    for i in range(r):
        d = s[i, i] if i < rank else 0
        for j in range(k):
            if d != 0:
                q, rem = divmod(ub[i, j], d)
                if rem != 0:
                    return None
                y[i, j] = q
            elif ub[i, j] != 0:
                return None
    return v @ y


@dataclass(frozen=True)
class AbelianGroup:
    """A finitely generated abelian group in invariant-factor form.

    free is the rank of the free part; torsion is the chain d_1 | d_2 | ...
    with every d_i >= 2.
    """

    free: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free < 0:
            raise ValueError("negative free rank")
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        for d in self.torsion:
            if d < 2:
                raise ValueError(f"invalid invariant factor {d}")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise ValueError(f"broken divisibility chain {self.torsion}")

    @classmethod
    def trivial(cls) -> "AbelianGroup":
        return cls(0, ())

    @classmethod
    def free_of_rank(cls, n: int) -> "AbelianGroup":
        return cls(n, ())

    @property
    def is_trivial(self) -> bool:
        return self.free == 0 and not self.torsion

    @property
    def is_free(self) -> bool:
        return not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.free == 1:
            parts.append("Z")
        elif self.free > 1:
            parts.append(f"Z^{self.free}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free": self.free, "torsion": list(self.torsion)}


class Subgroup:
    """A subgroup of Z^n generated by the columns of an integer matrix.

    The stored basis is the canonical column-style Hermite form of the
    generators with zero columns dropped, so two subgroups are equal exactly
    when their canonical bases are identical matrices.
    """

    __slots__ = ("ambient", "basis")

    def __init__(self, ambient: int, generators: np.ndarray):
        if generators.shape[0] != ambient:
            raise ValueError(
                f"generators have {generators.shape[0]} rows, ambient rank is {ambient}"
            )
        h, _ = hermite_normal_form(generators)
        keep = [j for j in range(h.shape[1]) if any(h[i, j] != 0 for i in range(ambient))]
        basis = h[:, keep] if keep else zeros(ambient, 0)
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "basis", basis)

    def __setattr__(self, *a):
        raise AttributeError("Subgroup is immutable")

    @classmethod
    def full(cls, n: int) -> "Subgroup":
        return cls(n, eye(n))

    @classmethod
    def trivial(cls, n: int) -> "Subgroup":
        return cls(n, zeros(n, 0))

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subgroup)
            and self.ambient == other.ambient
            and mat_eq(self.basis, other.basis)
        )

    def __hash__(self):
        return hash((self.ambient, tuple(self.basis.flat)))

    def __repr__(self) -> str:
        return f"Subgroup(ambient={self.ambient}, basis={self.basis.tolist()})"


def membership(x: np.ndarray, a: Subgroup) -> bool:
    """True iff the vector x lies in the lattice generated by a."""
    if len(x) != a.ambient:
        raise ValueError("vector length does not match ambient rank")
    if a.rank == 0:
        return all(v == 0 for v in x)
    return solve_integer(a.basis, x) is not None


def subgroup_intersection(a: Subgroup, b: Subgroup) -> Subgroup:
    """Intersection of two subgroups of the same Z^n.

    Computed from the kernel of [gens(a) | -gens(b)] projected through the
    generators of a.
    """
    _check_same_ambient(a, b)
    block = hstack([a.basis, -b.basis])
    ker = kernel_basis(block).basis
    gens = a.basis @ ker[: a.rank, :]
    return Subgroup(a.ambient, gens)


def subgroup_sum(a: Subgroup, b: Subgroup) -> Subgroup:
    _check_same_ambient(a, b)
    return Subgroup(a.ambient, hstack([a.basis, b.basis]))


def quotient_invariants(a: Subgroup, b: Subgroup) -> AbelianGroup:
    """Invariant factors of a/b for a subgroup b of a.

    b is expressed in the basis of a; the Smith form of that coordinate
    matrix gives the quotient.  Raises ValueError if b is not contained in a.
    """
    _check_same_ambient(a, b)
    x = solve_integer_many(a.basis, b.basis)
    if x is None:
        raise ValueError("not a subgroup: second argument is not contained in the first")
    d = snf_diagonal(x)
    return AbelianGroup(free=a.rank - len(d), torsion=tuple(f for f in d if f > 1))


def _check_same_ambient(a: Subgroup, b: Subgroup):
    if a.ambient != b.ambient:
        raise ValueError("subgroups live in different ambient groups")
