"""Algebraic move calculus on triples of intersection matrices.

Moves act on the triple (q_ab, q_gb, q_ag) the way handle slides,
orientation flips and relabelings act on the underlying curve systems:

* flip eps i    - reverse the orientation of curve i of system eps;
* swap eps i j  - exchange the labels of curves i and j;
* slide eps i j s - replace curve j by (curve j + s * curve i);
* dslide i j s  - the duality-preserving compound: slide alpha i j s,
  slide gamma i j s, then slide beta j i -s.  On q_ag it is the symmetric
  congruence adding s times row/column i to row/column j, and it fixes
  q_ab = Id and q_gb = Id whenever they hold.

Indices are 1-based, matching the one-line move log format
``flip γ 1`` / ``swap α 1 2`` / ``slide γ 1 2 +`` / ``dslide 1 2 -``.

On top of the primitive engine sit three drivers: a normalizer taking q_ab
to the truncated identity, a reducer taking a unimodular q_gb to the
identity, and a greedy symmetric-congruence reducer that diagonalizes the
odd part of q_ag and reports the even blocks it cannot split.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .diagram import MatrixDiagram, as_matrix_diagram
from .form import form_by_definition, form_invariants
from .linalg import det, eye, kernel_basis, mat_eq, zeros

_GREEK = {"alpha": "α", "beta": "β", "gamma": "γ"}
_SYSTEM_ALIASES = {
    "α": "alpha", "a": "alpha", "alpha": "alpha",
    "β": "beta", "b": "beta", "beta": "beta",
    "γ": "gamma", "g": "gamma", "gamma": "gamma",
}


@dataclass(frozen=True)
class Move:
    kind: str  # flip | swap | slide | dslide
    system: str | None
    i: int
    j: int | None = None
    sign: int | None = None

    def __post_init__(self):
        if self.kind not in ("flip", "swap", "slide", "dslide"):
            raise ValueError(f"unknown move kind {self.kind!r}")
        needs_system = self.kind != "dslide"
        if needs_system and self.system not in ("alpha", "beta", "gamma"):
            raise ValueError(f"move {self.kind} needs a curve system")
        if not needs_system and self.system is not None:
            raise ValueError("dslide does not take a curve system")
        if self.i < 1:
            raise ValueError("move indices are 1-based")
        if self.kind == "flip":
            if self.j is not None or self.sign is not None:
                raise ValueError("flip takes a single index")
        else:
            if self.j is None or self.j < 1 or self.j == self.i:
                raise ValueError("move needs two distinct 1-based indices")
        if self.kind in ("slide", "dslide") and self.sign not in (1, -1):
            raise ValueError("slide sign must be +1 or -1")
        if self.kind == "swap" and self.sign is not None:
            raise ValueError("swap takes no sign")


def format_move(m: Move) -> str:
    if m.kind == "flip":
        return f"flip {_GREEK[m.system]} {m.i}"
    if m.kind == "swap":
        return f"swap {_GREEK[m.system]} {m.i} {m.j}"
    sgn = "+" if m.sign == 1 else "-"
    if m.kind == "slide":
        return f"slide {_GREEK[m.system]} {m.i} {m.j} {sgn}"
    return f"dslide {m.i} {m.j} {sgn}"


def parse_move(line: str) -> Move:
    parts = line.split()
    if not parts:
        raise ValueError("empty move line")
    kind = parts[0]
    try:
        if kind == "flip" and len(parts) == 3:
            return Move("flip", _SYSTEM_ALIASES[parts[1]], int(parts[2]))
        if kind == "swap" and len(parts) == 4:
            return Move("swap", _SYSTEM_ALIASES[parts[1]], int(parts[2]), int(parts[3]))
        if kind == "slide" and len(parts) == 5:
            return Move(
                "slide", _SYSTEM_ALIASES[parts[1]], int(parts[2]), int(parts[3]),
                {"+": 1, "-": -1}[parts[4]],
            )
        if kind == "dslide" and len(parts) == 4:
            return Move("dslide", None, int(parts[1]), int(parts[2]), {"+": 1, "-": -1}[parts[3]])
    except (KeyError, ValueError) as exc:
        raise ValueError(f"bad move line {line!r}") from exc
    raise ValueError(f"bad move line {line!r}")


def format_move_log(moves) -> str:
    return "".join(format_move(m) + "\n" for m in moves)


def parse_move_log(text: str) -> list[Move]:
    return [parse_move(line) for line in text.splitlines() if line.strip()]


@dataclass(frozen=True)
class MoveState:
    """Immutable snapshot of the three intersection matrices plus move log."""

    genus: int
    kvector: tuple[int, int, int]
    q_ab: np.ndarray
    q_gb: np.ndarray
    q_ag: np.ndarray
    log: tuple[Move, ...] = ()

    @classmethod
    def from_diagram(cls, d) -> "MoveState":
        md = as_matrix_diagram(d)
        return cls(md.genus, md.kvector, md.q_ab.copy(), md.q_gb.copy(), md.q_ag.copy())

    def diagram(self) -> MatrixDiagram:
        return MatrixDiagram(self.genus, self.kvector, self.q_ab, self.q_gb, self.q_ag)


def _slide_inplace(q_ab, q_gb, q_ag, system, i0, j0, s):
    if system == "alpha":
        q_ab[j0, :] = q_ab[j0, :] + s * q_ab[i0, :]
        q_ag[j0, :] = q_ag[j0, :] + s * q_ag[i0, :]
    elif system == "beta":
        q_ab[:, j0] = q_ab[:, j0] + s * q_ab[:, i0]
        q_gb[:, j0] = q_gb[:, j0] + s * q_gb[:, i0]
    else:
        q_gb[j0, :] = q_gb[j0, :] + s * q_gb[i0, :]
        q_ag[:, j0] = q_ag[:, j0] + s * q_ag[:, i0]


def apply(state: MoveState, move: Move) -> MoveState:
    """Apply one move, returning the new state with the move logged."""
    g = state.genus
    for idx in (move.i, move.j):
        if idx is not None and not 1 <= idx <= g:
            raise ValueError(f"move index {idx} out of range for genus {g}")
    q_ab, q_gb, q_ag = state.q_ab.copy(), state.q_gb.copy(), state.q_ag.copy()
    i0 = move.i - 1
    j0 = (move.j - 1) if move.j is not None else None
    if move.kind == "flip":
        if move.system == "alpha":
            q_ab[i0, :] = -q_ab[i0, :]
            q_ag[i0, :] = -q_ag[i0, :]
        elif move.system == "beta":
            q_ab[:, i0] = -q_ab[:, i0]
            q_gb[:, i0] = -q_gb[:, i0]
        else:
            q_gb[i0, :] = -q_gb[i0, :]
            q_ag[:, i0] = -q_ag[:, i0]
    elif move.kind == "swap":
        if move.system == "alpha":
            q_ab[[i0, j0], :] = q_ab[[j0, i0], :]
            q_ag[[i0, j0], :] = q_ag[[j0, i0], :]
        elif move.system == "beta":
            q_ab[:, [i0, j0]] = q_ab[:, [j0, i0]]
            q_gb[:, [i0, j0]] = q_gb[:, [j0, i0]]
        else:
            q_gb[[i0, j0], :] = q_gb[[j0, i0], :]
            q_ag[:, [i0, j0]] = q_ag[:, [j0, i0]]
    elif move.kind == "slide":
        _slide_inplace(q_ab, q_gb, q_ag, move.system, i0, j0, move.sign)
    else:  # dslide
        s = move.sign
        _slide_inplace(q_ab, q_gb, q_ag, "alpha", i0, j0, s)
        _slide_inplace(q_ab, q_gb, q_ag, "gamma", i0, j0, s)
        _slide_inplace(q_ab, q_gb, q_ag, "beta", j0, i0, -s)
    return replace(state, q_ab=q_ab, q_gb=q_gb, q_ag=q_ag, log=state.log + (move,))


def apply_all(state: MoveState, moves) -> MoveState:
    for m in moves:
        state = apply(state, m)
    return state


class _Session:
    """Threads a state through emitted moves, collecting them."""

    def __init__(self, state: MoveState):
        self.state = state
        self.moves: list[Move] = []

    def do(self, *args, **kwargs):
        m = Move(*args, **kwargs)
        self.state = apply(self.state, m)
        self.moves.append(m)

    def slides(self, system, src0, dst0, coeff):
        """dst += coeff * src as |coeff| unit slides (0-based indices)."""
        s = 1 if coeff > 0 else -1
        for _ in range(abs(coeff)):
            self.do("slide", system, src0 + 1, dst0 + 1, sign=s)


def _min_entry(q, t):
    best = None
    g = q.shape[0]
    for i in range(t, g):
        for j in range(t, q.shape[1]):
            v = q[i, j]
            if v != 0 and (best is None or abs(v) < best[0]):
                best = (abs(v), i, j)
    return None if best is None else (best[1], best[2])


def _truncated_identity(g, k):
    m = zeros(g, g)
    for i in range(k):
        m[i, i] = 1
    return m


def normalize_pair(state: MoveState) -> tuple[MoveState, list[Move]]:
    """Drive q_ab to the truncated identity I_g^{g-k1} by logged alpha/beta
    moves (a Smith reduction where every elementary step is a move).

    Raises ValueError if q_ab presents a group with torsion, which cannot
    happen for valid diagram data.
    """
    ses = _Session(state)
    g = state.genus
    k1 = state.kvector[0]
    t = 0
    while t < g:
        pos = _min_entry(ses.state.q_ab, t)
        if pos is None:
            break
        pi, pj = pos
        if pi != t:
            ses.do("swap", "alpha", t + 1, pi + 1)
        if pj != t:
            ses.do("swap", "beta", t + 1, pj + 1)
        while True:
            q = ses.state.q_ab
            dirty = False
            for i in range(t + 1, g):
                if q[i, t] != 0:
                    quo = q[i, t] // q[t, t]
                    if quo:
                        ses.slides("alpha", t, i, -quo)
                    if ses.state.q_ab[i, t] != 0:
                        dirty = True
            for j in range(t + 1, g):
                q = ses.state.q_ab
                if q[t, j] != 0:
                    quo = q[t, j] // q[t, t]
                    if quo:
                        ses.slides("beta", t, j, -quo)
                    if ses.state.q_ab[t, j] != 0:
                        dirty = True
            if dirty:
                pos = _min_entry(ses.state.q_ab, t)
                pi, pj = pos
                if pi != t:
                    ses.do("swap", "alpha", t + 1, pi + 1)
                if pj != t:
                    ses.do("swap", "beta", t + 1, pj + 1)
                continue
            q = ses.state.q_ab
            bad = None
            for i in range(t + 1, g):
                for j in range(t + 1, g):
                    if q[i, j] % q[t, t] != 0:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            ses.do("slide", "alpha", bad + 1, t + 1, sign=1)
        if ses.state.q_ab[t, t] < 0:
            ses.do("flip", "alpha", t + 1)
        if ses.state.q_ab[t, t] != 1:
            raise ValueError(
                f"q_ab presents a group with torsion (pivot {ses.state.q_ab[t, t]})"
            )
        t += 1
    if not mat_eq(ses.state.q_ab, _truncated_identity(g, g - k1)):
        raise ValueError("q_ab rank disagrees with the declared k1")
    return ses.state, ses.moves


def reduce_gamma_beta(state: MoveState) -> tuple[MoveState, list[Move]]:
    """Row-reduce q_gb by logged gamma moves: to the identity when q_gb is
    unimodular, otherwise to its best-effort row Hermite form.

    Requires normalize_pair to have run (gamma moves never touch q_ab, so
    the normalization survives).  Raises ValueError when k3 = 0 demands a
    unimodular q_gb but the matrix is not.
    """
    g = state.genus
    k1, k2, k3 = state.kvector
    if not mat_eq(state.q_ab, _truncated_identity(g, g - k1)):
        raise ValueError("run normalize_pair before reduce_gamma_beta")
    unimodular = det(state.q_gb) in (1, -1)
    if k3 == 0 and not unimodular:
        raise ValueError("q_gb must be unimodular when k3 = 0")
    ses = _Session(state)
    prow = 0
    for col in range(g):
        if prow == g:
            break
        while True:
            q = ses.state.q_gb
            nz = [i for i in range(prow, g) if q[i, col] != 0]
            if not nz:
                break
            best = min(nz, key=lambda i: (abs(q[i, col]), i))
            if best != prow:
                ses.do("swap", "gamma", prow + 1, best + 1)
            done = True
            q = ses.state.q_gb
            for i in range(prow + 1, g):
                if q[i, col] != 0:
                    quo = q[i, col] // q[prow, col]
                    if quo:
                        ses.slides("gamma", prow, i, -quo)
                    if ses.state.q_gb[i, col] != 0:
                        done = False
            if done:
                break
        q = ses.state.q_gb
        if q[prow, col] != 0:
            if q[prow, col] < 0:
                ses.do("flip", "gamma", prow + 1)
            q = ses.state.q_gb
            for i in range(prow):
                quo = q[i, col] // q[prow, col]
                if quo:
                    ses.slides("gamma", prow, i, -quo)
            prow += 1
    if unimodular and not mat_eq(ses.state.q_gb, eye(g)):
        raise AssertionError("unimodular q_gb did not reduce to the identity")
    return ses.state, ses.moves


@dataclass(frozen=True)
class CongruenceReport:
    """Outcome of the symmetric congruence reduction of q_ag."""

    transform: np.ndarray  # unimodular P with P^T Q_in P = Q_out
    verified: bool
    diagonal: tuple[int, ...]  # diagonalized leading entries
    residual_start: int
    residual: tuple[tuple[int, ...], ...]  # block the reducer could not split
    trailing_zeros: int
    notes: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "verified": self.verified,
            "diagonal": list(self.diagonal),
            "residual_start": self.residual_start,
            "residual": [list(r) for r in self.residual],
            "trailing_zeros": self.trailing_zeros,
            "notes": list(self.notes),
        }


def _transvection_candidates(a: int, b: int, c: int) -> list[int]:
    """Integer slide multiplicities m worth probing for small
    |a m^2 + 2 b m + c|: near the vertex, near the real roots, and +-1."""
    from math import isqrt

    cands = {1, -1}
    vertex = -b / a
    for base in (int(vertex), int(vertex) + 1, int(vertex) - 1):
        cands.add(base)
    disc = b * b - a * c
    if disc >= 0:
        r = isqrt(disc)
        for num in (-b + r, -b - r):
            root = num / a
            for base in (int(root), int(root) + 1, int(root) - 1):
                cands.add(base)
    return sorted(m for m in cands if m != 0)


class _Congruence:
    """Compound congruence moves on q_ag with transform accumulation and a
    duality check (q_ab = q_gb = Id) after every move."""

    def __init__(self, state: MoveState):
        self.ses = _Session(state)
        self.g = state.genus
        self.p = eye(self.g)

    def _check(self):
        st = self.ses.state
        if not (mat_eq(st.q_ab, eye(self.g)) and mat_eq(st.q_gb, eye(self.g))):
            raise AssertionError("a congruence move broke the identity conditions")

    def dslide(self, i0, j0, s):
        self.ses.do("dslide", None, i0 + 1, j0 + 1, sign=s)
        e = eye(self.g)
        e[i0, j0] = s
        self.p = self.p @ e
        self._check()

    def swap(self, i0, j0):
        for system in ("alpha", "beta", "gamma"):
            self.ses.do("swap", system, i0 + 1, j0 + 1)
        self.p[:, [i0, j0]] = self.p[:, [j0, i0]]
        self._check()

    def flip(self, i0):
        for system in ("alpha", "beta", "gamma"):
            self.ses.do("flip", system, i0 + 1)
        self.p[:, i0] = -self.p[:, i0]
        self._check()

    @property
    def q(self):
        return self.ses.state.q_ag


def congruence_reduce(state: MoveState) -> tuple[MoveState, list[Move], CongruenceReport]:
    """Greedy symmetric congruence reduction of q_ag.

    Preconditions: q_ab = Id and q_gb = Id (so only duality-preserving
    compounds are used) and q_ag symmetric, which those conditions force for
    genuine diagram data.  The reducer splits off the radical as trailing
    zeros, consumes +-1 diagonal pivots (smallest first, lowest index on
    ties), manufactures smaller odd diagonal entries with single compound
    slides when none is available, and stops at a block it cannot improve;
    parity makes even blocks unsplittable by design, so they are reported,
    never forced.
    """
    g = state.genus
    if not (mat_eq(state.q_ab, eye(g)) and mat_eq(state.q_gb, eye(g))):
        raise ValueError("congruence_reduce requires q_ab = Id and q_gb = Id")
    if not mat_eq(state.q_ag, state.q_ag.T):
        raise ValueError("q_ag is not symmetric; data cannot come from a diagram")
    con = _Congruence(state)
    q_in = state.q_ag.copy()
    notes = []

    # split off the radical as trailing zero rows/columns
    end = g
    while end > 0:
        ker = kernel_basis(con.q[:end, :end])
        if ker.rank == 0:
            break
        x = [int(v) for v in ker.basis[:, 0]]
        while sum(1 for v in x if v) > 1:
            nz = sorted((i for i in range(end) if x[i]), key=lambda i: (abs(x[i]), i))
            b, a = nz[0], nz[1]
            quo = x[a] // x[b]
            s = 1 if quo > 0 else -1
            for _ in range(abs(quo)):
                con.dslide(a, b, s)
                x[a] -= s * x[b]
        m = next(i for i in range(end) if x[i])
        if m != end - 1:
            con.swap(m, end - 1)
        if any(con.q[i, end - 1] != 0 for i in range(end)):
            raise AssertionError("radical vector did not clear its column")
        end -= 1
    if end < g:
        notes.append(f"radical of rank {g - end} moved to trailing zeros")

    # greedy diagonalization of the nondegenerate core
    t = 0
    seen_states = set()
    while t < end:
        q = con.q
        units = [i for i in range(t, end) if abs(q[i, i]) == 1]
        if units:
            i = units[0]
            if i != t:
                con.swap(t, i)
            for j in range(t + 1, end):
                v = con.q[t, j]
                if v != 0:
                    s = -1 if (v > 0) == (con.q[t, t] > 0) else 1
                    for _ in range(abs(v)):
                        con.dslide(t, j, s)
            t += 1
            continue
        q = con.q
        odd = [abs(q[i, i]) for i in range(t, end) if q[i, i] % 2 != 0]
        cur = min(odd) if odd else None
        best = None
        for i in range(t, end):
            for j in range(t, end):
                if i == j or q[i, i] == 0:
                    continue
                a, b, c = int(q[i, i]), int(q[i, j]), int(q[j, j])
                for m in _transvection_candidates(a, b, c):
                    v = a * m * m + 2 * b * m + c
                    if v % 2 != 0 and (cur is None or abs(v) < cur):
                        key = (abs(v), i, j, abs(m), -m)
                        if best is None or key < best:
                            best = key
                            best_move = (i, j, m)
        if best is not None:
            i, j, m = best_move
            s = 1 if m > 0 else -1
            for _ in range(abs(m)):
                con.dslide(i, j, s)
            continue
        # mix an already-consumed unit pivot back into the block: with the
        # prefix cleared, the slid diagonal becomes Q[j, j] + Q[i, i], always
        # odd here; the swap re-enters it into the pivot flow
        assist = None
        for i in range(t):
            if abs(q[i, i]) != 1:
                continue
            for j in range(t, end):
                v = q[j, j] + q[i, i]
                key = (abs(v), i, j)
                if assist is None or key < assist:
                    assist = key
                    assist_move = (i, j)
        if assist is None:
            break
        fingerprint = (t, tuple(con.q.flat))
        if fingerprint in seen_states:
            notes.append("pivot search cycled; stopping with a residual block")
            break
        seen_states.add(fingerprint)
        i, j = assist_move
        con.dslide(i, j, 1)
        con.swap(i, j)
        t = i

    # deterministic sign cleanup inside the residual block
    if t < end:
        fixed = [t]
        for j in range(t + 1, end):
            lead = next((i for i in fixed if con.q[i, j] != 0), None)
            if lead is not None and con.q[lead, j] < 0:
                con.flip(j)
            fixed.append(j)
        residual = con.q[t:end, t:end]
        if t == 0 and all(residual[i, i] % 2 == 0 for i in range(end - t)):
            notes.append("residual block is even; parity forbids diagonal +-1 pivots")
        else:
            notes.append("residual block resisted the greedy pivot search; it may still be reducible")

    q_out = con.q
    report = CongruenceReport(
        transform=con.p,
        verified=mat_eq(con.p.T @ q_in @ con.p, q_out),
        diagonal=tuple(int(q_out[i, i]) for i in range(t)),
        residual_start=t,
        residual=tuple(tuple(int(v) for v in row) for row in q_out[t:end, t:end].tolist()),
        trailing_zeros=g - end,
        notes=tuple(notes),
    )
    return con.ses.state, con.ses.moves, report


def _invariant_fingerprint(md: MatrixDiagram):
    from .homology import homology_profile

    profile = homology_profile(md)
    inv = form_invariants(form_by_definition(md))
    return profile, (inv.rank, inv.signature, inv.even, abs(inv.determinant))


def verify_move_invariance(state: MoveState, moves) -> bool:
    """True iff the homology profile and the intersection-form invariants
    (rank, signature, parity, |det|) are unchanged by the move sequence."""
    before = _invariant_fingerprint(state.diagram())
    after = _invariant_fingerprint(apply_all(state, moves).diagram())
    return before == after
