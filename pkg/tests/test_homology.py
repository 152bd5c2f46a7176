import random

import pytest

from test_diagram import CP2BAR_CLASSES, S2XS2_CLASSES, genus1, s2xs2_diagram
from trisect.corpus import random_diagram
from trisect.diagram import TrisectionDiagram, as_matrix_diagram, validate
from trisect.homology import (
    build_complex,
    h2_kernel_formula,
    h2_symmetric,
    h3_direct,
    homology_of_complex,
    homology_profile,
    reduced_complex,
)
from trisect.linalg import AbelianGroup, is_zero, mat_eq, zmat

Z = AbelianGroup(1)
Z2 = AbelianGroup(2)
O = AbelianGroup.trivial()


def s1xs3_diagram():
    return genus1([1, 0], [1, 0], [1, 0])


def cp2_diagram():
    return genus1([1, 0], [0, 1], [1, 1])


def s4_diagram():
    return TrisectionDiagram.from_classes(0, [], [], [])


def cp2bar_diagram():
    return TrisectionDiagram.from_classes(2, **CP2BAR_CLASSES)


def test_complex_s1xs3():
    cx = build_complex(s1xs3_diagram())
    assert cx.ranks == (1, 2, 1, 1, 1)
    assert mat_eq(cx.d3, zmat([[1, 1]]))
    assert mat_eq(cx.d2, zmat([[0]]))


def test_complex_s2xs2():
    cx = build_complex(s2xs2_diagram())
    assert cx.ranks == (1, 0, 2, 0, 1)
    assert cx.d3.shape == (2, 0)
    assert cx.d2.shape == (0, 2)


def test_complex_condition_random():
    rng = random.Random(5150)
    for _ in range(25):
        cx = build_complex(random_diagram(rng))
        assert is_zero(cx.d2 @ cx.d3)


PROFILES = [
    ("s4", s4_diagram, (Z, O, O, O, Z), 2),
    ("cp2", cp2_diagram, (Z, O, Z, O, Z), 3),
    ("s1xs3", s1xs3_diagram, (Z, Z, O, Z, Z), 0),
    ("s2xs2", s2xs2_diagram, (Z, O, Z2, O, Z), 4),
    ("cp2bar", cp2bar_diagram, (Z, O, Z2, O, Z), 4),
]


@pytest.mark.parametrize("name,maker,groups,chi", PROFILES, ids=[p[0] for p in PROFILES])
def test_profiles(name, maker, groups, chi):
    profile = homology_profile(maker())
    assert profile.groups == groups
    assert profile.euler_characteristic == chi


def test_profile_from_matrix_diagram():
    md = as_matrix_diagram(s2xs2_diagram())
    assert homology_profile(md).groups == (Z, O, Z2, O, Z)


def test_reduced_complex_s1xs3():
    cx = reduced_complex(s1xs3_diagram())
    assert cx.ranks == (1, 1, 0, 1, 1)
    assert homology_of_complex(cx) == (Z, Z, O, Z, Z)


def test_reduced_complex_s2xs2_identical():
    full = build_complex(s2xs2_diagram())
    red = reduced_complex(s2xs2_diagram())
    assert red.ranks == full.ranks
    assert mat_eq(red.d3, full.d3)
    assert mat_eq(red.d2, full.d2)


def test_reduced_complex_homology_agreement_random():
    rng = random.Random(616)
    for _ in range(25):
        d = random_diagram(rng)
        assert homology_of_complex(reduced_complex(d)) == homology_of_complex(build_complex(d))


def test_h3_examples():
    assert h3_direct(s2xs2_diagram()) == O
    assert h3_direct(s1xs3_diagram()) == Z


def test_h2_examples():
    assert h2_symmetric(s2xs2_diagram()) == Z2
    assert h2_symmetric(s1xs3_diagram()) == O
    assert h2_kernel_formula(s2xs2_diagram()) == Z2
    assert h2_kernel_formula(s1xs3_diagram()) == O


def test_h2_symmetric_needs_curves():
    with pytest.raises(TypeError):
        h2_symmetric(as_matrix_diagram(s2xs2_diagram()))


def test_three_way_h2_and_h3_agreement_random():
    rng = random.Random(271828)
    for _ in range(40):
        d = random_diagram(rng)
        profile = homology_profile(d)
        assert h2_symmetric(d) == profile.groups[2]
        assert h2_kernel_formula(d) == profile.groups[2]
        assert h3_direct(d) == profile.groups[3]


def test_structural_invariants_random():
    rng = random.Random(1001)
    for _ in range(40):
        d = random_diagram(rng)
        report = validate(d)
        assert report.ok
        k1, k2, k3 = report.kvector
        profile = homology_profile(d)
        assert profile.euler_characteristic == 2 + d.genus - k1 - k2 - k3
        assert profile.groups[0] == Z and profile.groups[4] == Z
        # Poincare duality at the level of ranks
        assert profile.groups[1].free == profile.groups[3].free
        assert profile.groups[3].is_free


def test_genus_zero_is_the_4_sphere_profile():
    assert homology_profile(s4_diagram()).groups == (Z, O, O, O, Z)
