import random

import numpy as np
import pytest

from bruteforce import LatticeOracle, frac_det, frac_rank
from trisect.linalg import (
    AbelianGroup,
    Subgroup,
    det,
    eye,
    hermite_normal_form,
    hstack,
    inverse_unimodular,
    kernel_basis,
    mat_eq,
    membership,
    quotient_invariants,
    smith_normal_form,
    smith_with_inverses,
    snf_diagonal,
    solve_integer,
    subgroup_intersection,
    subgroup_sum,
    xgcd,
    zeros,
    zmat,
    zvec,
)


def random_matrix(rng, r, c, lo=-9, hi=9):
    return zmat([[rng.randint(lo, hi) for _ in range(c)] for _ in range(r)])


def assert_unimodular(u):
    assert abs(frac_det(u.tolist())) == 1


def test_xgcd():
    for a, b in [(0, 0), (4, 6), (-4, 6), (7, 0), (0, -5), (123, 456)]:
        g, x, y = xgcd(a, b)
        assert g == a * x + b * y
        assert g >= 0
        if a or b:
            assert a % g == 0 and b % g == 0


def test_snf_worked_example():
    m = zmat([[2, 4], [6, 8]])
    u, s, v = smith_normal_form(m)
    # d1 = gcd of all entries = 2, d1*d2 = |det| = 8, so S = diag(2, 4)
    assert mat_eq(s, zmat([[2, 0], [0, 4]]))
    assert mat_eq(u @ m @ v, s)
    assert_unimodular(u)
    assert_unimodular(v)


def test_snf_identity_and_empty():
    u, s, v = smith_normal_form(eye(3))
    assert mat_eq(s, eye(3))
    u, s, v = smith_normal_form(zeros(0, 0))
    assert s.shape == (0, 0) and u.shape == (0, 0) and v.shape == (0, 0)
    u, s, v = smith_normal_form(zeros(2, 0))
    assert s.shape == (2, 0) and u.shape == (2, 2) and v.shape == (0, 0)


def test_snf_randomized_contract():
    rng = random.Random(20240811)
    shapes = [(1, 1), (2, 2), (3, 3), (4, 4), (2, 4), (4, 2), (3, 5), (0, 3), (3, 0)]
    for trial in range(120):
        r, c = shapes[trial % len(shapes)]
        m = random_matrix(rng, r, c)
        u, s, v = smith_normal_form(m)
        assert mat_eq(u @ m @ v, s)
        assert_unimodular(u)
        assert_unimodular(v)
        diag = [s[i, i] for i in range(min(r, c))]
        for i in range(r):
            for j in range(c):
                if i != j:
                    assert s[i, j] == 0
        seen_zero = False
        for i, d in enumerate(diag):
            assert d >= 0
            if d == 0:
                seen_zero = True
            else:
                assert not seen_zero
                if i > 0 and diag[i - 1] != 0:
                    assert d % diag[i - 1] == 0
        if r == c and r > 0:
            prod = 1
            for d in diag:
                prod *= d
            assert prod == abs(frac_det(m.tolist()))
        # determinism
        u2, s2, v2 = smith_normal_form(m)
        assert mat_eq(u, u2) and mat_eq(s, s2) and mat_eq(v, v2)


def test_snf_inverse_tracking():
    rng = random.Random(7)
    for _ in range(40):
        m = random_matrix(rng, rng.randint(1, 4), rng.randint(1, 4), -5, 5)
        u, s, v, uinv, vinv = smith_with_inverses(m)
        assert mat_eq(u @ uinv, eye(u.shape[0]))
        assert mat_eq(v @ vinv, eye(v.shape[0]))
        assert mat_eq(u @ m @ v, s)


def test_hnf_gcd_column():
    m = zmat([[2, 3], [0, 0]])
    h, u = hermite_normal_form(m)
    assert mat_eq(h, zmat([[1, 0], [0, 0]]))
    assert mat_eq(m @ u, h)
    assert_unimodular(u)


def test_hnf_identity():
    h, u = hermite_normal_form(eye(3))
    assert mat_eq(h, eye(3))


def test_hnf_pivots_2_and_4():
    # columns (2,2) and (0,4); pivots must be 2 and 4
    m = zmat([[2, 0], [2, 4]])
    h, u = hermite_normal_form(m)
    assert mat_eq(m @ u, h)
    assert h[0, 0] == 2 and h[1, 1] == 4
    # same lattice: verified against brute-force enumeration in a box
    ours = LatticeOracle([h[:, j] for j in range(h.shape[1])], 2)
    orig = LatticeOracle([m[:, j] for j in range(m.shape[1])], 2)
    assert ours.box_points(12) == orig.box_points(12)


def test_hnf_is_canonical_under_generator_change():
    rng = random.Random(99)
    for _ in range(60):
        n = rng.randint(1, 4)
        k = rng.randint(0, 4)
        m = random_matrix(rng, n, k, -4, 4)
        h, _ = hermite_normal_form(m)
        if k == 0:
            assert h.shape == (n, 0)
            continue
        # scramble the generators by a random unimodular column change
        w = eye(k)
        for _ in range(8):
            op = rng.choice(["add", "swap", "neg"])
            i, j = rng.randrange(k), rng.randrange(k)
            if op == "add" and i != j:
                w[:, j] = w[:, j] + rng.choice([-1, 1]) * w[:, i]
            elif op == "swap":
                w[:, [i, j]] = w[:, [j, i]]
            else:
                w[:, i] = -w[:, i]
        h2, _ = hermite_normal_form(m @ w)
        assert Subgroup(n, h) == Subgroup(n, h2)


def test_kernel_examples():
    k = kernel_basis(zmat([[1, 1]]))
    assert mat_eq(k.basis, zmat([[1], [-1]]))
    k = kernel_basis(zeros(2, 2))
    assert mat_eq(k.basis, eye(2))
    # saturation: gcd content is divided out
    k = kernel_basis(zmat([[2, 2]]))
    assert mat_eq(k.basis, zmat([[1], [-1]]))


def test_kernel_brute_force_equivalence():
    rng = random.Random(4242)
    for _ in range(50):
        r = rng.randint(1, 4)
        c = rng.randint(1, 4)
        m = random_matrix(rng, r, c, -4, 4)
        ker = kernel_basis(m)
        for j in range(ker.rank):
            col = ker.basis[:, j]
            assert all(v == 0 for v in (m @ col))
        oracle = LatticeOracle([ker.basis[:, j] for j in range(ker.rank)], c)
        from itertools import product

        for x in product(range(-5, 6), repeat=c):
            if all(v == 0 for v in (m @ zvec(x))):
                assert oracle.contains(x)


def test_solve_integer():
    assert list(solve_integer(zmat([[2]]), zvec([4]))) == [2]
    assert solve_integer(zmat([[2]]), zvec([3])) is None
    x = solve_integer(zmat([[1, 0]]), zvec([5]))
    assert x is not None and (zmat([[1, 0]]) @ x)[0] == 5
    rng = random.Random(11)
    for _ in range(60):
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        m = random_matrix(rng, r, c, -4, 4)
        xs = zvec([rng.randint(-3, 3) for _ in range(c)])
        b = m @ xs
        x = solve_integer(m, b)
        assert x is not None
        assert all(u == v for u, v in zip(m @ x, b))


def test_membership_examples():
    a = Subgroup(2, zmat([[1], [0]]))
    assert membership(zvec([2, 0]), a)
    b = Subgroup(2, zmat([[2], [0]]))
    assert not membership(zvec([1, 0]), b)
    k = kernel_basis(zmat([[1, 1]]))
    assert membership(zvec([5, -5]), k)


def test_subgroup_examples():
    two = Subgroup(2, zmat([[2], [0]]))
    three = Subgroup(2, zmat([[3], [0]]))
    inter = subgroup_intersection(two, three)
    assert mat_eq(inter.basis, zmat([[6], [0]]))
    assert subgroup_intersection(two, two) == two
    e1 = Subgroup(2, zmat([[1], [0]]))
    e2 = Subgroup(2, zmat([[0], [1]]))
    assert subgroup_intersection(e1, e2).rank == 0

    assert subgroup_sum(two, three) == e1
    assert subgroup_sum(two, Subgroup.trivial(2)) == two
    assert subgroup_sum(e1, e2) == Subgroup.full(2)


def test_quotient_examples():
    z2 = Subgroup.full(2)
    b = Subgroup(2, zmat([[2, 0], [0, 3]]))
    assert quotient_invariants(z2, b) == AbelianGroup(0, (6,))
    assert quotient_invariants(b, b) == AbelianGroup.trivial()
    assert quotient_invariants(z2, Subgroup(2, zmat([[1], [0]]))) == AbelianGroup(1, ())
    with pytest.raises(ValueError):
        quotient_invariants(Subgroup(2, zmat([[2], [0]])), Subgroup(2, zmat([[1], [0]])))


def test_quotient_full_rank_det():
    rng = random.Random(5)
    for _ in range(40):
        n = rng.randint(1, 4)
        while True:
            b = random_matrix(rng, n, n, -3, 3)
            d = abs(frac_det(b.tolist()))
            if d != 0:
                break
        q = quotient_invariants(Subgroup.full(n), Subgroup(n, b))
        assert q.free == 0
        prod = 1
        for f in q.torsion:
            prod *= f
        assert prod == d


def test_abelian_group_validation_and_str():
    assert str(AbelianGroup.trivial()) == "0"
    assert str(AbelianGroup(1)) == "Z"
    assert str(AbelianGroup(2, (6,))) == "Z^2 + Z/6"
    assert str(AbelianGroup(0, (2, 4))) == "Z/2 + Z/4"
    with pytest.raises(ValueError):
        AbelianGroup(0, (1,))
    with pytest.raises(ValueError):
        AbelianGroup(0, (4, 2))
    with pytest.raises(ValueError):
        AbelianGroup(-1)


def test_no_floats_accepted():
    with pytest.raises(TypeError):
        zmat([[1.5]])
    with pytest.raises(TypeError):
        zvec([2.0])


def test_unimodular_inverse():
    rng = random.Random(3)
    for _ in range(20):
        n = rng.randint(1, 4)
        u = eye(n)
        for _ in range(10):
            i, j = rng.randrange(n), rng.randrange(n)
            if i != j:
                u[:, j] = u[:, j] + rng.choice([-1, 1]) * u[:, i]
        inv = inverse_unimodular(u)
        assert mat_eq(u @ inv, eye(n))
    with pytest.raises(ValueError):
        inverse_unimodular(zmat([[2]]))


def test_det_matches_rational_elimination():
    rng = random.Random(17)
    for _ in range(40):
        n = rng.randint(0, 5)
        m = random_matrix(rng, n, n, -6, 6)
        assert det(m) == frac_det(m.tolist())


def test_snf_big_entry_blowup_stays_exact():
    # entries blow up past 64-bit range during reduction; results stay exact
    m = zmat([[10**20, 3], [7, 10**18]])
    u, s, v = smith_normal_form(m)
    assert mat_eq(u @ m @ v, s)
    prod = int(s[0, 0]) * int(s[1, 1])
    assert prod == abs(10**20 * 10**18 - 21)
