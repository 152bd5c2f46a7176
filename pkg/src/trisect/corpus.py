"""Bundled example diagrams and a seedable random-diagram generator.

Random diagrams are assembled from genus-1 and genus-2 building blocks with
known sector counts, then scrambled by curve-basis changes and by symplectic
changes of the surface basis.  Both kinds of scrambling preserve validity and
every homological invariant, so the generator is safe for property testing.
"""

from __future__ import annotations

import random

import numpy as np

from .diagram import TrisectionDiagram
from .linalg import zeros
from .moves import Move

EXAMPLE_NAMES = ("s4", "cp2", "s1xs3", "s2xs2", "cp2_cp2bar")

# one-handle blocks: (alpha, beta, gamma) as (e-coeff, f-coeff) pairs,
# with the k-vector contribution each block adds
_BLOCKS_1 = {
    "k1": (((1, 0),), ((1, 0),), ((0, 1),)),
    "k2": (((1, 0),), ((0, 1),), ((1, 0),)),
    "k3": (((1, 0),), ((0, 1),), ((0, 1),)),
    "cp2+": (((1, 0),), ((0, 1),), ((1, 1),)),
    "cp2-": (((1, 0),), ((0, 1),), ((1, -1),)),
}

# genus-2 hyperbolic block (the S^2 x S^2 pattern): entries are
# (e1, e2, f1, f2) coefficients per curve
_BLOCK_HYP = (
    ((1, 0, 0, 0), (0, 1, 0, 0)),
    ((0, 0, 0, 1), (0, 0, -1, 0)),
    ((1, 0, 0, -1), (0, -1, 1, 0)),
)

_FILLERS = ("cp2+", "cp2-", "hyp")


def _assemble(blocks) -> TrisectionDiagram:
    g = sum(2 if b == "hyp" else 1 for b in blocks)
    mats = {label: zeros(2 * g, g) for label in ("alpha", "beta", "gamma")}
    h = 0  # handle offset
    col = 0
    for b in blocks:
        if b == "hyp":
            for label, curves in zip(("alpha", "beta", "gamma"), _BLOCK_HYP):
                for j, (e1, e2, f1, f2) in enumerate(curves):
                    m = mats[label]
                    m[h, col + j] = e1
                    m[h + 1, col + j] = e2
                    m[g + h, col + j] = f1
                    m[g + h + 1, col + j] = f2
            h += 2
            col += 2
        else:
            for label, curves in zip(("alpha", "beta", "gamma"), _BLOCKS_1[b]):
                (e, f) = curves[0]
                mats[label][h, col] = e
                mats[label][g + h, col] = f
            h += 1
            col += 1
    return TrisectionDiagram.from_classes(
        g,
        [mats["alpha"][:, j] for j in range(g)],
        [mats["beta"][:, j] for j in range(g)],
        [mats["gamma"][:, j] for j in range(g)],
    )


def _scramble_system(rng: random.Random, classes: np.ndarray, steps: int) -> np.ndarray:
    """Random change of curve basis: column slides, swaps and sign flips."""
    m = classes.copy()
    g = m.shape[1]
    if g < 1:
        return m
    for _ in range(steps):
        op = rng.choice(("slide", "swap", "flip"))
        i = rng.randrange(g)
        j = rng.randrange(g)
        if op == "slide" and i != j:
            m[:, j] = m[:, j] + rng.choice((-1, 1)) * m[:, i]
        elif op == "swap" and i != j:
            m[:, [i, j]] = m[:, [j, i]]
        elif op == "flip":
            m[:, i] = -m[:, i]
    return m


def _random_symplectic(rng: random.Random, g: int, rounds: int) -> np.ndarray:
    """A random element of Sp(2g, Z) with small entries."""
    p = zeros(2 * g, 2 * g)
    for i in range(2 * g):
        p[i, i] = 1
    for _ in range(rounds):
        kind = rng.choice(("upper", "lower", "rot"))
        step = zeros(2 * g, 2 * g)
        for i in range(2 * g):
            step[i, i] = 1
        if kind == "rot":
            step = zeros(2 * g, 2 * g)
            for i in range(g):
                step[i, g + i] = 1
                step[g + i, i] = -1
        else:
            sym = [[0] * g for _ in range(g)]
            for i in range(g):
                for j in range(i, g):
                    v = rng.choice((-1, 0, 0, 1))
                    sym[i][j] = sym[j][i] = v
            for i in range(g):
                for j in range(g):
                    if kind == "upper":
                        step[i, g + j] = sym[i][j]
                    else:
                        step[g + i, j] = sym[i][j]
        p = p @ step
    return p


def random_diagram(
    rng: random.Random | int,
    genus: int | None = None,
    kvector: tuple[int, int, int] | None = None,
    scramble: bool = True,
) -> TrisectionDiagram:
    """A random valid trisection diagram.

    If kvector is given the diagram realizes exactly those sector counts
    (requires k1 + k2 + k3 <= genus).  Seedable: pass an int or a Random.
    """
    if isinstance(rng, int):
        rng = random.Random(rng)
    if genus is None:
        genus = rng.randint(1, 6)
    if kvector is not None:
        k1, k2, k3 = kvector
        if k1 + k2 + k3 > genus:
            raise ValueError("kvector entries sum past the genus")
        blocks = ["k1"] * k1 + ["k2"] * k2 + ["k3"] * k3
        room = genus - (k1 + k2 + k3)
    else:
        blocks = []
        room = genus
        while room > 0:
            b = rng.choice(("k1", "k2", "k3", "cp2+", "cp2-", "hyp"))
            if b == "hyp" and room < 2:
                continue
            blocks.append(b)
            room -= 2 if b == "hyp" else 1
        room = 0
    while room > 0:
        b = rng.choice(_FILLERS)
        if b == "hyp" and room < 2:
            continue
        blocks.append(b)
        room -= 2 if b == "hyp" else 1
    rng.shuffle(blocks)
    d = _assemble(blocks)
    if not scramble:
        return d
    g = d.genus
    systems = {}
    for label in ("alpha", "beta", "gamma"):
        systems[label] = _scramble_system(rng, d.system(label).classes, rng.randint(0, 2 * g))
    p = _random_symplectic(rng, g, rng.randint(0, 2))
    return TrisectionDiagram.from_classes(
        g,
        [(p @ systems["alpha"])[:, j] for j in range(g)],
        [(p @ systems["beta"])[:, j] for j in range(g)],
        [(p @ systems["gamma"])[:, j] for j in range(g)],
    )


def random_moves(rng: random.Random | int, genus: int, count: int) -> list[Move]:
    """A random sequence of valid moves for the given genus.

    Genus 0 admits no moves; genus 1 admits only orientation flips.
    """
    if isinstance(rng, int):
        rng = random.Random(rng)
    if genus == 0:
        return []
    moves = []
    systems = ("alpha", "beta", "gamma")
    kinds = ("flip",) if genus == 1 else ("flip", "swap", "slide", "dslide")
    for _ in range(count):
        kind = rng.choice(kinds)
        i = rng.randint(1, genus)
        if kind == "flip":
            moves.append(Move("flip", rng.choice(systems), i))
            continue
        j = rng.randint(1, genus)
        while j == i:
            j = rng.randint(1, genus)
        if kind == "swap":
            moves.append(Move("swap", rng.choice(systems), i, j))
        elif kind == "slide":
            moves.append(Move("slide", rng.choice(systems), i, j, rng.choice((1, -1))))
        else:
            moves.append(Move("dslide", None, i, j, rng.choice((1, -1))))
    return moves
