import itertools
import math

import numpy as np
import pytest

from potdyn.compactset import Circle, Disc, Ellipse, Segment
from potdyn.dynamics import filled_julia_grid
from potdyn.errors import GridTooClose
from potdyn.extremal import circle_quadrature
from potdyn.poly import Polynomial
from potdyn.potential import DiscreteMeasure
from potdyn.setmetrics import (
    KlimekInput,
    convergence_table,
    default_test_grid,
    klimek_distance,
    precompactness_diagnostic,
    weak_star_discrepancy,
)

GOLDEN = (1 + math.sqrt(5)) / 2
REF = [Disc(0, 1), Disc(0, 2), Segment(-2, 2), Disc(0.5, 0.7), Ellipse(0, 1.5, 1, filled=True),
       Segment(-1j, 1 + 1j), Circle(0.2j, 1.3)]


def kl(E, F):
    return klimek_distance(KlimekInput.reference(E), KlimekInput.reference(F))


def test_klimek_examples():
    assert kl(Disc(0, 1), Disc(0, 1)).value == 0
    assert kl(Disc(0, 1), Disc(0, 2)).value == pytest.approx(math.log(2), abs=1e-9)
    r = kl(Disc(0, 1), Segment(-2, 2))
    assert r.value == pytest.approx(math.log(2), abs=1e-9)
    assert r.g_a_on_b == pytest.approx(math.log(2), abs=1e-9)
    assert r.g_b_on_a == pytest.approx(math.log(GOLDEN), abs=1e-3)


def test_klimek_exact_copy_is_zero():
    A = KlimekInput.reference(Segment(-1, 1 + 1j))
    B = KlimekInput.reference(Segment(-1, 1 + 1j))
    assert klimek_distance(A, B).value == 0


@pytest.mark.parametrize("r,R", [(0.5, 1.0), (1.0, 3.0), (0.1, 7.0)])
def test_klimek_nested_discs(r, R):
    assert kl(Disc(0, r), Disc(0, R)).value == pytest.approx(math.log(R / r), abs=1e-6)


def test_klimek_symmetric():
    for E, F in itertools.combinations(REF, 2):
        assert kl(E, F).value == kl(F, E).value


def test_klimek_triangle_inequality():
    for E, F, G in itertools.permutations(REF, 3):
        ef, fg, eg = kl(E, F), kl(F, G), kl(E, G)
        slack = 3 * (ef.uncertainty + fg.uncertainty + eg.uncertainty)
        assert eg.value <= ef.value + fg.value + slack


def test_klimek_julia_against_disc():
    p = Polynomial.monomial(2)
    K = filled_julia_grid(p, resolution=256)
    r = klimek_distance(KlimekInput.julia(p, K), KlimekInput.reference(Disc(0, 1)))
    assert r.value <= 4 * K.h
    assert r.uncertainty >= 0


def test_precompactness_diagnostic_monotone():
    d = precompactness_diagnostic([KlimekInput.reference(E) for E in REF[:3]])
    assert list(d) == [0.2, 0.1, 0.05]
    assert d[0.2] >= d[0.1] >= d[0.05] > 0
    # the disc of radius 1 at delta: log(1 + delta); the segment is worse
    assert d[0.05] >= math.log(1.05)


def test_discrepancy_identical():
    mu = DiscreteMeasure.uniform([1, 1j, -1.5])
    rep = weak_star_discrepancy(mu, mu)
    assert rep.moment_discrepancy == 0 and rep.potential_discrepancy == 0


def test_discrepancy_roots_of_unity_vs_circle():
    mu = DiscreteMeasure.uniform(np.exp(2j * np.pi * np.arange(8) / 8))
    rep = weak_star_discrepancy(mu, circle_quadrature(), K=4)
    assert rep.moment_discrepancy <= 1e-10
    assert rep.K == 4


def test_discrepancy_dirac_vs_circle():
    d0 = DiscreteMeasure.uniform([0])
    grid = 0.5 * np.exp(2j * np.pi * np.arange(64) / 64)
    rep = weak_star_discrepancy(d0, circle_quadrature(), K=8, grid=grid)
    assert rep.potential_discrepancy == pytest.approx(math.log(2), abs=1e-10)
    # all moments of both measures vanish: moments alone do not separate them
    assert rep.moment_discrepancy <= 1e-12


def test_discrepancy_symmetric(rng):
    for _ in range(10):
        mu = DiscreteMeasure.uniform(rng.normal(size=20) + 1j * rng.normal(size=20))
        nu = DiscreteMeasure.uniform(rng.normal(size=30) + 1j * rng.normal(size=30))
        a, b = weak_star_discrepancy(mu, nu), weak_star_discrepancy(nu, mu)
        assert a.moment_discrepancy == b.moment_discrepancy
        assert a.potential_discrepancy == b.potential_discrepancy
        assert a.moment_discrepancy >= 0 and a.potential_discrepancy >= 0


def test_default_grid_layout():
    mu = DiscreteMeasure.uniform([1, -1])
    nu = DiscreteMeasure.uniform([2j, 1j])
    _, spec = default_test_grid(mu, nu)
    assert spec["radii"] == [0.5, 3.0, 6.0]
    _, spec = default_test_grid(DiscreteMeasure.uniform([0, 1]), nu)
    assert spec["radii"] == [3.0, 6.0]


def test_grid_too_close():
    mu = DiscreteMeasure.uniform([0.5])
    with pytest.raises(GridTooClose):
        weak_star_discrepancy(mu, mu, grid=[0.52])
    with pytest.raises(ValueError):
        weak_star_discrepancy(mu, mu, K=0)


def test_convergence_table_examples():
    t = convergence_table([(1, 1), (2, 0.5), (3, 0.25), (4, 0.125)])
    assert t.decreasing and t.spearman == pytest.approx(-1)
    assert not convergence_table([(1, 1), (2, 2), (3, 4)]).decreasing
    with pytest.raises(ValueError):
        convergence_table([(1, 1), (2, 0.5)])


def test_convergence_table_below_and_floor():
    t = convergence_table([(4, 0.5), (8, 0.1), (16, 0.01)], threshold=0.05)
    assert t.below
    assert not convergence_table([(4, 0.5), (8, 0.2), (16, 0.1)], threshold=0.05).below
    flat = convergence_table([(4, 0.0), (8, 0.0), (16, 0.0)])
    assert math.isnan(flat.spearman) and not flat.decreasing and flat.below
    # roundoff-level values tie at the floor
    t = convergence_table([(4, 0.5), (8, 2.7e-18), (16, 9.9e-18)])
    assert t.decreasing


def test_convergence_table_julia_disc_trend():
    vals = []
    ns = [4, 8, 16, 32]
    for n in ns:
        p = Polynomial.monomial(n) + 0.5
        K = filled_julia_grid(p, resolution=512)
        vals.append(klimek_distance(KlimekInput.julia(p, K),
                                    KlimekInput.reference(Disc(0, 1))).value)
    t = convergence_table(zip(ns, vals))
    assert t.decreasing and t.below
