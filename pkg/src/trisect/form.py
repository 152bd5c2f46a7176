"""The intersection form of a trisected 4-manifold, three ways.

All three methods produce the pairing on the same deterministic basis of
H_2 modulo torsion, represented by columns in the gamma-curve basis:

* by definition: solve for a companion class in the alpha-Lagrangian and
  pair it against the second argument on the surface;
* the general matrix formula, valid once the alpha/beta matrix has been
  normalized to a truncated identity;
* the fast product q_gb * q_ab^{-1} * q_ag, valid whenever the alpha/beta
  pair splits a 3-sphere (k1 = 0, unimodular q_ab).

Signatures are computed by exact rational congruence reduction; no floating
point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .diagram import MatrixDiagram, as_matrix_diagram
from .linalg import (
    Subgroup,
    det,
    eye,
    inverse_unimodular,
    kernel_basis,
    mat_eq,
    membership,
    smith_with_inverses,
    solve_integer,
    solve_integer_many,
    subgroup_sum,
    zeros,
)


@dataclass(frozen=True)
class H2Basis:
    """Columns (gamma coordinates) representing a basis of H_2 mod torsion."""

    representatives: np.ndarray

    @property
    def rank(self) -> int:
        return self.representatives.shape[1]


@dataclass(frozen=True)
class BilinearForm:
    matrix: np.ndarray
    basis: H2Basis
    method: str

    def __post_init__(self):
        if not mat_eq(self.matrix, self.matrix.T):
            raise ValueError(f"form produced by {self.method!r} is not symmetric")

    @property
    def rank(self) -> int:
        return self.matrix.shape[0]

    def to_json(self) -> dict:
        return {
            "matrix": [[int(x) for x in row] for row in self.matrix.tolist()],
            "method": self.method,
            "basis": [[int(x) for x in row] for row in self.basis.representatives.tolist()],
        }


def surviving_subgroup(d) -> Subgroup:
    """Gamma-coordinate classes bounding in the alpha/beta side: the kernel
    of B * q_ag with B the row basis of kernel(q_ba)."""
    md = as_matrix_diagram(d)
    b_rows = kernel_basis(md.q_ba).basis.T
    return kernel_basis(b_rows @ md.q_ag)


def _denominator_subgroup(md: MatrixDiagram) -> Subgroup:
    return subgroup_sum(kernel_basis(md.q_ag), kernel_basis(md.q_bg))


def h2_basis(d) -> H2Basis:
    """Deterministic representatives for a basis of H_2 mod torsion.

    The quotient of the surviving subgroup by the two partial kernels is put
    in Smith form; preimages of the free coordinates are pulled back to
    gamma-coordinates.
    """
    md = as_matrix_diagram(d)
    num = surviving_subgroup(md)
    den = _denominator_subgroup(md)
    x = solve_integer_many(num.basis, den.basis)
    if x is None:
        raise ValueError("denominator is not contained in the numerator")  # cannot happen
    u, s, v, uinv, vinv = smith_with_inverses(x)
    nonzero = len([i for i in range(min(s.shape)) if s[i, i] != 0])
    return H2Basis(num.basis @ uinv[:, nonzero:])


def phi(x, y, d) -> int:
    """The defining pairing on classes in the surviving subgroup.

    x and y are gamma-coordinate vectors.  A companion x' in alpha
    coordinates is any integer solution of q_ba x' = q_bg x; the value
    x'^T q_ag y does not depend on that choice.
    """
    md = as_matrix_diagram(d)
    num = surviving_subgroup(md)
    for name, v in (("x", x), ("y", y)):
        if not membership(v, num):
            raise ValueError(f"{name} does not represent a class of H_2")
    companion = solve_integer(md.q_ba, md.q_bg @ x)
    if companion is None:
        raise ValueError("no integer companion class; inputs are inconsistent")
    return int(companion @ md.q_ag @ y)


def form_by_definition(d, basis: H2Basis | None = None) -> BilinearForm:
    md = as_matrix_diagram(d)
    basis = basis or h2_basis(md)
    n = basis.rank
    m = zeros(n, n)
    for i in range(n):
        for j in range(n):
            m[i, j] = phi(basis.representatives[:, i], basis.representatives[:, j], md)
    return BilinearForm(m, basis, "definition")


def _truncated_identity(g: int, k: int) -> np.ndarray:
    """Identity in the upper-left k x k corner, zero elsewhere."""
    m = zeros(g, g)
    for i in range(k):
        m[i, i] = 1
    return m


def form_general(d, basis: H2Basis | None = None) -> BilinearForm:
    """A^T q_gb I_g^{g-k1} q_ag A on the chosen basis.

    Requires the diagram to be normalized so that q_ab equals the truncated
    identity I_g^{g-k1}; use the move engine first otherwise.
    """
    md = as_matrix_diagram(d)
    g = md.genus
    k1 = md.kvector[0]
    trunc = _truncated_identity(g, g - k1)
    if not mat_eq(md.q_ab, trunc):
        raise ValueError("diagram not normalized: q_ab is not the truncated identity")
    basis = basis or h2_basis(md)
    a = basis.representatives
    return BilinearForm(a.T @ md.q_gb @ trunc @ md.q_ag @ a, basis, "general")


def form_fast(d, basis: H2Basis | None = None) -> BilinearForm:
    """q_gb * q_ab^{-1} * q_ag restricted to the H_2 representatives.

    Valid when k1 = 0; q_ab is then unimodular and its exact inverse is the
    signed adjugate.
    """
    md = as_matrix_diagram(d)
    if md.kvector[0] != 0:
        raise ValueError(f"fast product needs k1 = 0, diagram has k1 = {md.kvector[0]}")
    if det(md.q_ab) not in (1, -1):
        raise ValueError("fast product needs a unimodular alpha/beta matrix")
    basis = basis or h2_basis(md)
    full = md.q_gb @ inverse_unimodular(md.q_ab) @ md.q_ag
    a = basis.representatives
    return BilinearForm(a.T @ full @ a, basis, "fast")


@dataclass(frozen=True)
class FormInvariants:
    rank: int
    signature: int
    even: bool
    determinant: int

    @property
    def parity(self) -> str:
        return "even" if self.even else "odd"

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "signature": self.signature,
            "parity": self.parity,
            "determinant": self.determinant,
        }


def form_invariants(form) -> FormInvariants:
    """Rank, signature, parity and determinant of a symmetric integer form.

    The signature comes from congruence diagonalization over the rationals
    (exact Fractions), counting pivot signs.  Parity is read off the
    diagonal: the form is even iff every Q[i, i] is, which is congruence
    invariant.
    """
    m = form.matrix if isinstance(form, BilinearForm) else form
    if not mat_eq(m, m.T):
        raise ValueError("form matrix must be symmetric")
    n = m.shape[0]
    even = all(m[i, i] % 2 == 0 for i in range(n))
    pos, neg = _signature_counts([[Fraction(int(x)) for x in row] for row in m.tolist()])
    return FormInvariants(
        rank=pos + neg,
        signature=pos - neg,
        even=even,
        determinant=det(m),
    )


def _signature_counts(rows: list[list[Fraction]]) -> tuple[int, int]:
    pos = neg = 0
    while rows:
        n = len(rows)
        if rows[0][0] == 0:
            k = next((i for i in range(n) if rows[i][i] != 0), None)
            if k is not None:
                _sym_swap(rows, 0, k)
            else:
                hit = next(
                    ((i, j) for i in range(n) for j in range(i + 1, n) if rows[i][j] != 0),
                    None,
                )
                if hit is None:
                    break  # zero form on the rest
                i, j = hit
                # x_i <- x_i + x_j turns the diagonal entry into 2*Q[i, j]
                for r in range(n):
                    rows[r][i] += rows[r][j]
                for c in range(n):
                    rows[i][c] += rows[j][c]
                if i != 0:
                    _sym_swap(rows, 0, i)
        pivot = rows[0][0]
        if pivot > 0:
            pos += 1
        else:
            neg += 1
        rows = [
            [rows[i][j] - rows[i][0] * rows[0][j] / pivot for j in range(1, n)]
            for i in range(1, n)
        ]
    return pos, neg


def _sym_swap(rows, i, j):
    rows[i], rows[j] = rows[j], rows[i]
    for r in rows:
        r[i], r[j] = r[j], r[i]
