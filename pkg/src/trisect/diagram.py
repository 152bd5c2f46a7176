"""Trisection diagrams as algebraic data.

A "curve" here is its class in H_1 of the genus-g diagram surface, written in
the fixed symplectic basis e_1..e_g, f_1..f_g (so classes are integer vectors
of length 2g, and <e_i, f_i> = +1).  A curve system is g such classes, one per
column of a 2g x g matrix; the subgroup its columns span is the Lagrangian of
the corresponding handlebody.

Geometric data (crossing patterns, actual curves on the surface) is out of
scope: every computation downstream needs only the classes and the surface
intersection pairing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    AbelianGroup,
    Subgroup,
    eye,
    is_zero,
    mat_eq,
    matrix_rank,
    membership,
    quotient_invariants,
    snf_diagonal,
    solve_integer,
    subgroup_intersection,
    subgroup_sum,
    zeros,
    zmat,
    zvec,
)

LABELS = ("alpha", "beta", "gamma")

# pair order fixed once: k1 <-> (alpha, beta), k2 <-> (alpha, gamma), k3 <-> (beta, gamma)
PAIRS = (("alpha", "beta"), ("alpha", "gamma"), ("beta", "gamma"))


class InvalidDiagramError(ValueError):
    """Raised when diagram data fails a validity requirement."""


def standard_pairing(genus: int) -> np.ndarray:
    """The intersection pairing matrix J on H_1 of the genus-g surface:
    blocks [[0, I], [-I, 0]] in the e/f basis."""
    j = zeros(2 * genus, 2 * genus)
    for i in range(genus):
        j[i, genus + i] = 1
        j[genus + i, i] = -1
    return j


@dataclass(frozen=True)
class SymplecticSurface:
    genus: int

    def __post_init__(self):
        if self.genus < 0:
            raise ValueError("genus must be nonnegative")

    @property
    def pairing(self) -> np.ndarray:
        return standard_pairing(self.genus)

    def pair(self, x: np.ndarray, y: np.ndarray) -> int:
        """<x, y> on H_1 of the surface."""
        return int(x @ self.pairing @ y)


@dataclass(frozen=True)
class CurveSystem:
    """g oriented curve classes on a genus-g surface, one per column."""

    label: str
    classes: np.ndarray

    def __post_init__(self):
        if self.label not in LABELS:
            raise ValueError(f"unknown system label {self.label!r}")
        rows, cols = self.classes.shape
        if rows != 2 * cols:
            raise ValueError(f"classes must be 2g x g, got {rows} x {cols}")

    @property
    def genus(self) -> int:
        return self.classes.shape[1]

    def lagrangian(self) -> Subgroup:
        """The subgroup of Z^{2g} spanned by the curve classes."""
        return Subgroup(2 * self.genus, self.classes)

    def rank_ok(self) -> bool:
        return matrix_rank(self.classes) == self.genus

    def isotropy_ok(self, surface: SymplecticSurface) -> bool:
        return is_zero(self.classes.T @ surface.pairing @ self.classes)

    def primitive_ok(self) -> bool:
        """The classes span a direct summand (all invariant factors 1)."""
        d = snf_diagonal(self.classes)
        return len(d) == self.genus and all(f == 1 for f in d)


@dataclass(frozen=True)
class TrisectionDiagram:
    surface: SymplecticSurface
    alpha: CurveSystem
    beta: CurveSystem
    gamma: CurveSystem
    name: str | None = None

    def __post_init__(self):
        for sysm in (self.alpha, self.beta, self.gamma):
            if sysm.genus != self.surface.genus:
                raise ValueError("curve system genus does not match the surface")

    @property
    def genus(self) -> int:
        return self.surface.genus

    def system(self, label: str) -> CurveSystem:
        return {"alpha": self.alpha, "beta": self.beta, "gamma": self.gamma}[label]

    @classmethod
    def from_classes(cls, genus, alpha, beta, gamma, name=None) -> "TrisectionDiagram":
        """Build from per-system lists of 2g-vectors (one vector per curve)."""
        surface = SymplecticSurface(genus)
        systems = []
        for label, rows in zip(LABELS, (alpha, beta, gamma)):
            if len(rows) != genus:
                raise ValueError(f"{label}: expected {genus} curve classes, got {len(rows)}")
            classes = zeros(2 * genus, genus)
            for j, vec in enumerate(rows):
                if len(vec) != 2 * genus:
                    raise ValueError(f"{label}[{j}]: class vector must have length {2 * genus}")
                for i, x in enumerate(vec):
                    classes[i, j] = int(x)
            systems.append(CurveSystem(label, classes))
        return cls(surface, *systems, name=name)


@dataclass(frozen=True)
class MatrixDiagram:
    """A diagram known only through its pairwise intersection matrices.

    Stores q_ab = (<alpha_i, beta_j>), q_gb = (<gamma_i, beta_j>) and
    q_ag = (<alpha_i, gamma_j>); the remaining three matrices are the negated
    transposes.
    """

    genus: int
    kvector: tuple[int, int, int]
    q_ab: np.ndarray
    q_gb: np.ndarray
    q_ag: np.ndarray
    name: str | None = None

    def __post_init__(self):
        g = self.genus
        for q in (self.q_ab, self.q_gb, self.q_ag):
            if q.shape != (g, g):
                raise ValueError(f"intersection matrices must be {g} x {g}")
        object.__setattr__(self, "kvector", tuple(int(k) for k in self.kvector))

    @property
    def q_ba(self) -> np.ndarray:
        return -self.q_ab.T

    @property
    def q_bg(self) -> np.ndarray:
        return -self.q_gb.T

    @property
    def q_ga(self) -> np.ndarray:
        return -self.q_ag.T


def intersection_matrix(a: CurveSystem, b: CurveSystem, surface: SymplecticSurface) -> np.ndarray:
    """The matrix of pairings (<a_i, b_j>) on the given surface."""
    if a.genus != surface.genus or b.genus != surface.genus:
        raise ValueError("curve systems do not live on the given surface")
    return a.classes.T @ surface.pairing @ b.classes


@dataclass(frozen=True)
class SystemCheck:
    label: str
    rank_ok: bool
    isotropic: bool
    primitive: bool

    @property
    def ok(self) -> bool:
        return self.rank_ok and self.isotropic and self.primitive


@dataclass(frozen=True)
class PairCheck:
    pair: tuple[str, str]
    free: bool
    k: int | None


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of the homological validity checks.

    These conditions are necessary for the data to come from a genuine
    trisection diagram; they are not sufficient.
    """

    ok: bool
    genus: int
    kvector: tuple[int, int, int] | None
    system_checks: tuple[SystemCheck, ...]
    pair_checks: tuple[PairCheck, ...]
    problems: tuple[str, ...]
    note: str = "necessary conditions only; validity here does not certify a genuine diagram"

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "genus": self.genus,
            "kvector": list(self.kvector) if self.kvector else None,
            "systems": [
                {
                    "label": s.label,
                    "rank_ok": s.rank_ok,
                    "isotropic": s.isotropic,
                    "primitive": s.primitive,
                }
                for s in self.system_checks
            ],
            "pairs": [
                {"pair": list(p.pair), "free": p.free, "k": p.k} for p in self.pair_checks
            ],
            "problems": list(self.problems),
            "note": self.note,
        }


def validate(d) -> ValidationReport:
    """Validity report for a TrisectionDiagram or MatrixDiagram."""
    if isinstance(d, MatrixDiagram):
        return _validate_matrix(d)
    return _validate_curves(d)


def _validate_curves(d: TrisectionDiagram) -> ValidationReport:
    problems = []
    checks = []
    for label in LABELS:
        sysm = d.system(label)
        c = SystemCheck(
            label,
            rank_ok=sysm.rank_ok(),
            isotropic=sysm.isotropy_ok(d.surface),
            primitive=sysm.primitive_ok(),
        )
        checks.append(c)
        if not c.rank_ok:
            problems.append(f"{label}: classes are linearly dependent")
        if not c.isotropic:
            problems.append(f"{label}: classes do not pairwise cancel under the surface pairing")
        if not c.primitive:
            problems.append(f"{label}: classes do not span a direct summand of Z^{2 * d.genus}")

    full = Subgroup.full(2 * d.genus)
    pair_checks = []
    ks = []
    for pa, pb in PAIRS:
        la = d.system(pa).lagrangian()
        lb = d.system(pb).lagrangian()
        q = quotient_invariants(full, subgroup_sum(la, lb))
        free = q.is_free
        pair_checks.append(PairCheck((pa, pb), free, q.free if free else None))
        ks.append(q.free)
        if not free:
            problems.append(
                f"pair ({pa}, {pb}): H_1 of the sector boundary has torsion {list(q.torsion)}"
            )
    ok = not problems
    return ValidationReport(
        ok=ok,
        genus=d.genus,
        kvector=tuple(ks) if ok else None,
        system_checks=tuple(checks),
        pair_checks=tuple(pair_checks),
        problems=tuple(problems),
    )


def _validate_matrix(d: MatrixDiagram) -> ValidationReport:
    problems = []
    pair_checks = []
    ks = []
    for (pa, pb), q in zip(PAIRS, (d.q_ab, d.q_ag, d.q_bg)):
        diag = snf_diagonal(q)
        free = all(f == 1 for f in diag)
        k = d.genus - len(diag)
        pair_checks.append(PairCheck((pa, pb), free, k if free else None))
        ks.append(k)
        if not free:
            problems.append(
                f"pair ({pa}, {pb}): intersection matrix presents a group with torsion"
            )
    if not problems and tuple(ks) != d.kvector:
        problems.append(f"declared kvector {d.kvector} does not match derived {tuple(ks)}")
    ok = not problems
    return ValidationReport(
        ok=ok,
        genus=d.genus,
        kvector=tuple(ks) if ok else None,
        system_checks=(),
        pair_checks=tuple(pair_checks),
        problems=tuple(problems),
    )


def as_matrix_diagram(d) -> MatrixDiagram:
    """View any diagram through its intersection matrices, validating first."""
    if isinstance(d, MatrixDiagram):
        return d
    report = validate(d)
    if not report.ok:
        raise InvalidDiagramError("; ".join(report.problems))
    s = d.surface
    return MatrixDiagram(
        genus=d.genus,
        kvector=report.kvector,
        q_ab=intersection_matrix(d.alpha, d.beta, s),
        q_gb=intersection_matrix(d.gamma, d.beta, s),
        q_ag=intersection_matrix(d.alpha, d.gamma, s),
        name=d.name,
    )


def _check_heegaard_pair(a: CurveSystem, b: CurveSystem) -> SymplecticSurface:
    if a.genus != b.genus:
        raise ValueError("curve systems have different genus")
    surface = SymplecticSurface(a.genus)
    for sysm in (a, b):
        if not (sysm.rank_ok() and sysm.isotropy_ok(surface) and sysm.primitive_ok()):
            raise InvalidDiagramError(f"{sysm.label}: not a valid defining curve system")
    return surface


def heegaard_homology(a: CurveSystem, b: CurveSystem) -> tuple[AbelianGroup, int]:
    """(H_1, rank of H_2) of the 3-manifold split along the surface by the
    handlebodies that a and b bound.

    H_1 is Z^{2g} modulo the sum of the two Lagrangians; H_2 is free with the
    rank of their intersection.
    """
    _check_heegaard_pair(a, b)
    la, lb = a.lagrangian(), b.lagrangian()
    h1 = quotient_invariants(Subgroup.full(2 * a.genus), subgroup_sum(la, lb))
    h2rank = subgroup_intersection(la, lb).rank
    return h1, h2rank


def linking_number(j_class, k_class, a: CurveSystem, b: CurveSystem) -> int:
    """Linking number of null-homologous curve classes in the Heegaard
    3-manifold determined by the systems a and b.

    Solves for j in the a-Lagrangian with <j, x> = <J, x> for every x in the
    b-Lagrangian; the answer is <j, K>, independent of the solution chosen.
    Requires both classes to die in H_1 of the 3-manifold and H_1 to be
    torsion free.  The value corresponds to a topological linking number for
    classes with disjoint embedded representatives, i.e. when <J, K> = 0 on
    the surface.
    """
    surface = _check_heegaard_pair(a, b)
    jv = zvec(j_class)
    kv = zvec(k_class)
    if len(jv) != 2 * a.genus or len(kv) != 2 * a.genus:
        raise ValueError("class vectors must have length 2g")
    la, lb = a.lagrangian(), b.lagrangian()
    span = subgroup_sum(la, lb)
    h1 = quotient_invariants(Subgroup.full(2 * a.genus), span)
    if not h1.is_free:
        raise InvalidDiagramError(f"H_1 of the splitting has torsion {list(h1.torsion)}")
    for name, v in (("J", jv), ("K", kv)):
        if not membership(v, span):
            raise InvalidDiagramError(f"class {name} is not null-homologous in the splitting")
    rhs = b.classes.T @ surface.pairing @ jv
    q_ba = intersection_matrix(b, a, surface)
    coeffs = solve_integer(q_ba, rhs)
    if coeffs is None:
        raise InvalidDiagramError("no integer solution for the pushed-off class")
    j = a.classes @ coeffs
    return int(j @ surface.pairing @ kv)
