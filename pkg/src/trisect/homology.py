"""Homology of a trisected 4-manifold from its diagram data.

The central object is the 5-term chain complex

    Z --0--> (La^Lg) + (Lb^Lg) --d3--> Lg --d2--> Hom(La^Lb, Z) --0--> Z

whose boundary maps are inclusion-sum and the surface pairing against a basis
of La^Lb.  Everything is written in the gamma-curve basis of Lg, so the whole
complex is computable from the three intersection matrices alone.  Two
independent closed forms for H_2 and one for H_3 serve as cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diagram import MatrixDiagram, TrisectionDiagram, as_matrix_diagram
from .linalg import (
    AbelianGroup,
    Subgroup,
    eye,
    hstack,
    is_zero,
    kernel_basis,
    mat_eq,
    quotient_invariants,
    smith_with_inverses,
    subgroup_intersection,
    subgroup_sum,
    zeros,
)


@dataclass(frozen=True)
class ChainComplex:
    """Chain groups Z^{c_i} in dimensions 4..0 with boundary maps d3, d2
    (d4 = d1 = 0)."""

    ranks: tuple[int, int, int, int, int]  # (c4, c3, c2, c1, c0)
    d3: np.ndarray  # c2 x c3
    d2: np.ndarray  # c1 x c2
    provenance: tuple[str, str, str, str, str]

    def __post_init__(self):
        c4, c3, c2, c1, c0 = self.ranks
        if self.d3.shape != (c2, c3) or self.d2.shape != (c1, c2):
            raise ValueError("boundary map shapes do not match the ranks")
        if not is_zero(self.d2 @ self.d3):
            raise ValueError("not a complex: d2 * d3 != 0")

    @property
    def euler_characteristic(self) -> int:
        c4, c3, c2, c1, c0 = self.ranks
        return c0 - c1 + c2 - c3 + c4


@dataclass(frozen=True)
class HomologyProfile:
    groups: tuple[AbelianGroup, AbelianGroup, AbelianGroup, AbelianGroup, AbelianGroup]
    euler_characteristic: int

    @property
    def bettis(self) -> tuple[int, ...]:
        return tuple(g.free for g in self.groups)

    def __str__(self) -> str:
        inner = ", ".join(str(g) for g in self.groups)
        return f"({inner}); chi = {self.euler_characteristic}"

    def to_json(self) -> dict:
        return {
            "groups": [g.to_json() for g in self.groups],
            "bettis": list(self.bettis),
            "euler_characteristic": self.euler_characteristic,
        }


def _intersection_kernels(md: MatrixDiagram):
    """Kernels giving La^Lg, Lb^Lg (gamma coordinates) and La^Lb (alpha)."""
    k_ag = kernel_basis(md.q_ag)  # La ^ Lg in the gamma basis
    k_bg = kernel_basis(md.q_bg)  # Lb ^ Lg in the gamma basis
    k_ab = kernel_basis(md.q_ba)  # La ^ Lb in the alpha basis
    return k_ag, k_bg, k_ab


def build_complex(d) -> ChainComplex:
    """The handle chain complex of the closed 4-manifold.

    C3 carries the Hermite bases of La^Lg and Lb^Lg (in that order); d3 is
    the inclusion-sum into the gamma basis of Lg.  C1 carries the basis dual
    to the Hermite basis of La^Lb, and d2 pairs gamma curves against that
    basis, which in matrix form is kernel(q_ba)^T * q_ag.
    """
    md = as_matrix_diagram(d)
    g = md.genus
    k1, k2, k3 = md.kvector
    k_ag, k_bg, k_ab = _intersection_kernels(md)
    if (k_ag.rank, k_bg.rank, k_ab.rank) != (k2, k3, k1):
        raise ValueError("intersection kernels disagree with the sector counts")
    d3 = hstack([k_ag.basis, k_bg.basis]) if g else zeros(0, 0)
    d2 = k_ab.basis.T @ md.q_ag
    return ChainComplex(
        ranks=(1, k2 + k3, g, k1, 1),
        d3=d3,
        d2=d2,
        provenance=(
            "single 4-handle",
            "Hermite bases of La^Lg and Lb^Lg in gamma coordinates",
            "gamma curve basis of Lg",
            "dual of the Hermite basis of La^Lb",
            "single 0-handle",
        ),
    )


def homology_of_complex(cx: ChainComplex) -> tuple[AbelianGroup, ...]:
    """H_0..H_4 of a 5-term complex with d4 = d1 = 0."""
    c4, c3, c2, c1, c0 = cx.ranks
    h0 = AbelianGroup.free_of_rank(c0)
    h1 = quotient_invariants(Subgroup.full(c1), Subgroup(c1, cx.d2))
    h2 = quotient_invariants(kernel_basis(cx.d2), Subgroup(c2, cx.d3))
    h3 = AbelianGroup.free_of_rank(kernel_basis(cx.d3).rank)
    h4 = AbelianGroup.free_of_rank(c4)
    return (h0, h1, h2, h3, h4)


def homology_profile(d) -> HomologyProfile:
    """All five homology groups and the Euler characteristic."""
    cx = build_complex(d)
    return HomologyProfile(groups=homology_of_complex(cx), euler_characteristic=cx.euler_characteristic)


def reduced_complex(d) -> ChainComplex:
    """The quotient complex with middle term Lg / (Lb^Lg).

    The quotient is realized as a direct summand by extending the Hermite
    basis of Lb^Lg to a basis of Lg; the identification is a choice, so only
    homology-level agreement with build_complex is guaranteed.
    """
    md = as_matrix_diagram(d)
    g = md.genus
    k1, k2, k3 = md.kvector
    k_ag, k_bg, k_ab = _intersection_kernels(md)
    u, s, v, uinv, vinv = smith_with_inverses(k_bg.basis)
    if any(s[i, i] != 1 for i in range(k3)):
        raise ValueError("kernel basis is not a direct summand")  # cannot happen
    # columns of uinv: first k3 span Lb^Lg (after v-change), rest complement it
    complement = uinv[:, k3:]
    d3 = (u @ k_ag.basis)[k3:, :]
    d2_full = k_ab.basis.T @ md.q_ag
    d2 = d2_full @ complement
    return ChainComplex(
        ranks=(1, k2, g - k3, k1, 1),
        d3=d3,
        d2=d2,
        provenance=(
            "single 4-handle",
            "Hermite basis of La^Lg in gamma coordinates",
            "complement of Lb^Lg inside Lg (chosen splitting)",
            "dual of the Hermite basis of La^Lb",
            "single 0-handle",
        ),
    )


def h3_direct(d) -> AbelianGroup:
    """H_3 as the triple intersection La ^ Lb ^ Lg.

    Computed as kernel(q_ag) ^ kernel(q_bg) in the gamma basis; when curve
    classes are available the nested subgroup intersection in Z^{2g} is
    computed as well and the ranks must agree.
    """
    md = as_matrix_diagram(d)
    k_ag, k_bg, _ = _intersection_kernels(md)
    rank = subgroup_intersection(k_ag, k_bg).rank
    if isinstance(d, TrisectionDiagram):
        triple = subgroup_intersection(
            subgroup_intersection(d.alpha.lagrangian(), d.beta.lagrangian()),
            d.gamma.lagrangian(),
        )
        if triple.rank != rank:
            raise ValueError("triple-intersection routes disagree")  # cannot happen
    return AbelianGroup.free_of_rank(rank)


def _pad_rows(block: np.ndarray, g: int, slots: tuple[int, int]) -> np.ndarray:
    """Embed a kernel over two coefficient slots into Z^{3g} coordinates."""
    out = zeros(3 * g, block.shape[1])
    a, b = slots
    out[a * g : (a + 1) * g, :] = block[:g, :]
    out[b * g : (b + 1) * g, :] = block[g:, :]
    return out


def h2_symmetric(d: TrisectionDiagram) -> AbelianGroup:
    """H_2 from the system-symmetric description.

    Triples (a, b, c) in La x Lb x Lg with a + b + c = 0, in curve
    coefficients, form the kernel of [A | B | G] in Z^{3g}; the denominator
    is spanned by the pairwise solutions with one entry zero.  Requires curve
    classes (the triple condition is not visible to the Q-matrices alone).
    """
    if not isinstance(d, TrisectionDiagram):
        raise TypeError("h2_symmetric needs curve classes, not just intersection matrices")
    as_matrix_diagram(d)  # validity gate
    g = d.genus
    a, b, c = d.alpha.classes, d.beta.classes, d.gamma.classes
    numerator = kernel_basis(hstack([a, b, c]))
    den_ab = _pad_rows(kernel_basis(hstack([a, b])).basis, g, (0, 1))
    den_ag = _pad_rows(kernel_basis(hstack([a, c])).basis, g, (0, 2))
    den_bg = _pad_rows(kernel_basis(hstack([b, c])).basis, g, (1, 2))
    denominator = Subgroup(3 * g, hstack([den_ab, den_ag, den_bg]))
    return quotient_invariants(numerator, denominator)


def h2_kernel_formula(d) -> AbelianGroup:
    """H_2 entirely in the gamma basis:
    kernel(B * q_ag) / (kernel(q_ag) + kernel(q_bg)), with the rows of B a
    basis of kernel(q_ba)."""
    md = as_matrix_diagram(d)
    b_rows = kernel_basis(md.q_ba).basis.T
    numerator = kernel_basis(b_rows @ md.q_ag)
    denominator = subgroup_sum(kernel_basis(md.q_ag), kernel_basis(md.q_bg))
    return quotient_invariants(numerator, denominator)
