"""Acceptance criteria 1-9, each test records a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` and read the summary section.
"""

import itertools
import math

import numpy as np

from potdyn.compactset import (
    Circle,
    Disc,
    Ellipse,
    PointCloud,
    Segment,
    boundary_samples,
    hausdorff_distance,
)
from potdyn.dynamics import (
    brolin_sample,
    brolin_tree,
    cap_julia,
    escape_radius,
    filled_julia_grid,
    green_field,
    julia_boundary,
)
from potdyn.extremal import family_builtin, minimality_report, zero_location_check
from potdyn.labcli import ExperimentConfig, run_hausdorff_dichotomy, run_lemma31, run_thm_klimek
from potdyn.poly import Polynomial, evaluate, residual_scale, roots
from potdyn.potential import (
    analytic_capacity,
    capacity_estimate,
    equilibrium_estimate,
    leja_points,
)
from potdyn.setmetrics import KlimekInput, convergence_table, klimek_distance

Z = Polynomial.monomial
GOLDEN_SQ = (3 + math.sqrt(5)) / 2


def cfg(**kw):
    return ExperimentConfig.from_dict(kw)


def test_criterion_1_julia_capacity(acceptance):
    exact = {"z^2": (Z(2), 1.0), "2z^2": (Z(2, 2), 0.5), "16z^2": (Z(2, 16), 0.0625)}
    formula_ok = all(cap_julia(p) == c for p, c in exact.values())
    rel = {}
    for name, p in {"z^2": Z(2), "2z^2": Z(2, 2), "z^2-2": Z(2) - 2}.items():
        cloud = julia_boundary(filled_julia_grid(p))
        est = capacity_estimate(leja_points(cloud, 256))
        rel[name] = abs(est / cap_julia(p) - 1)
    ok = formula_ok and max(rel.values()) <= 0.05
    acceptance(1, ok, f"formula exact={formula_ok}, leja rel errors "
               + ", ".join(f"{k}:{v:.4f}" for k, v in rel.items()) + " (tol 0.05)")
    assert ok


def test_criterion_2_klimek_trend(acceptance):
    parts, ok = [], True
    for c in (0.5, 2.0):
        res = run_thm_klimek(cfg(family={"name": "power_plus_c", "params": {"c": c}},
                                 n_list=[4, 8, 16, 32], resolution=512))
        g = [r.values["gamma"] for r in res.records]
        t = convergence_table(zip([4, 8, 16, 32], g))
        good = t.spearman <= -0.8 and g[-1] < g[0] and g[-1] <= 0.05
        ok &= good
        parts.append(f"c={c}: gamma={[round(v, 4) for v in g]} rho={t.spearman:.2f}")
    acceptance(2, ok, "; ".join(parts) + " (need rho<=-0.8, gamma_32<=0.05)")
    assert ok


def test_criterion_3_hausdorff_dichotomy(acceptance):
    ns = [4, 8, 16, 32]
    small = run_hausdorff_dichotomy(cfg(family={"name": "power_plus_c", "params": {"c": 0.5}},
                                        n_list=ns, resolution=512))
    big = run_hausdorff_dichotomy(cfg(family={"name": "power_plus_c", "params": {"c": 2.0}},
                                      n_list=ns, resolution=512))
    chi_disc = small.records[-1].values["chi_disc"]
    chi_circle = big.records[-1].values["chi_circle"]
    control = min(r.values["chi_circle"] for r in small.records)
    ok = chi_disc <= 0.1 and chi_circle <= 0.1 and control >= 0.4
    acceptance(3, ok, f"c=0.5 chi(K_32, disc)={chi_disc:.4f}; c=2 chi(K_32, circle)="
               f"{chi_circle:.4f}; c=0.5 min chi(K_n, circle)={control:.4f}")
    assert ok


def _arcsine_cdf_error(points):
    x = np.sort(points.real)
    m = x.size
    law = 0.5 + np.arcsin(np.clip(x / 2, -1, 1)) / np.pi
    hi = np.arange(1, m + 1) / m
    return float(np.max(np.maximum(np.abs(hi - law), np.abs(hi - 1 / m - law))))


def test_criterion_4_brolin_trend(acceptance):
    ns = [4, 8, 16]
    worst = []
    for n in ns:
        depth = math.ceil(math.log(4096) / math.log(n))
        mu = brolin_sample(Z(n) + 0.5, None, depth, "full-tree")
        assert len(mu) >= 4096
        worst.append(max(abs(mu.moment(k)) for k in range(1, 5)))
    t = convergence_table(zip(ns, worst))
    cdf = _arcsine_cdf_error(brolin_sample(Z(2) - 2, 5, 12, "full-tree").points)
    ok = t.decreasing and worst[-1] <= 0.05 and cdf <= 0.05
    acceptance(4, ok, f"max|m_k| = {[f'{v:.3g}' for v in worst]} rho={t.spearman:.3f}; "
               f"arcsine sup error {cdf:.4f}")
    assert ok


def test_criterion_5_scaled_power_divergence(acceptance):
    ns = [2, 3, 4]
    caps = [cap_julia(Z(n, 2.0 ** (n * n))) for n in ns]
    cap_ok = all(c == 2.0 ** (-n * n / (n - 1)) for c, n in zip(caps, ns))
    res = run_thm_klimek(cfg(family={"name": "scaled_power", "params": {}}, n_list=ns))
    gaps = [abs(r.values["gamma"] - n * n / (n - 1) * math.log(2))
            for r, n in zip(res.records, ns)]
    ok = cap_ok and max(gaps) <= 0.1
    acceptance(5, ok, f"cap exact={cap_ok}; |gamma - n^2/(n-1) log 2| = "
               f"{[f'{g:.4f}' for g in gaps]} (tol 0.1)")
    assert ok


MINIMAL_FAMILIES = [
    ("chebyshev", {}),
    # the Fekete-type family is q_n / ||q_n||_E, not the monic q_n
    ("leja", {"normalize": "sup"}),
    ("faber", {}),
    ("power_plus_c", {"c": 0.5}),
    ("power_plus_c", {"c": 2.0}),
    ("orthonormal", {}),
]


def test_criterion_6_growth_at_probes(acceptance):
    res = run_lemma31(cfg(family={"name": "chebyshev", "params": {}}, n_list=[64], probes=[3]))
    err = abs(res.records[0].values["root_modulus"] - GOLDEN_SQ)
    excess = {}
    for name, params in MINIMAL_FAMILIES:
        r = run_lemma31(cfg(family={"name": name, "params": params}, n_list=[8, 16, 32, 64]))
        excess[f"{name}{params or ''}"] = r.summary["max_excess"]
    ok = err <= 0.05 and max(excess.values()) <= 0.05
    acceptance(6, ok, f"chebyshev |p_64(3)|^(1/64) error {err:.2e}; worst one-sided excess "
               f"{max(excess.values()):.2e} over {len(excess)} families (tol 0.05)")
    assert ok


def test_criterion_7_potential_primitives(acceptance):
    sets = [Disc(0, 0.5), Disc(0, 1), Disc(0, 2), Segment(-2, 2)]
    rel = []
    for E in sets:
        est = capacity_estimate(leja_points(boundary_samples(E), 256))
        rel.append(abs(est / analytic_capacity(E) - 1))
    mu = equilibrium_estimate(Segment(-2, 2), 256)
    left = mu.mass(lambda z: z.real <= 0)
    mid = mu.mass(lambda z: (z.real >= 0) & (z.real <= 1))
    mass_ok = abs(left - 0.5) <= 0.05 and abs(mid - 1 / 6) <= 0.05
    cap_ok = max(rel) <= 0.02
    ok = cap_ok and mass_ok
    acceptance(7, ok, f"capacity rel errors {[f'{v:.4f}' for v in rel]} (tol 0.02); "
               f"arcsine masses {left:.4f}, {mid:.4f}")
    assert ok


def test_criterion_8_minimality_verdicts(acceptance):
    ns = [4, 8, 16, 32]
    flags = {
        "chebyshev": minimality_report(family_builtin("chebyshev"), ns).minimal,
        "power_plus_c": minimality_report(family_builtin("power_plus_c",
                                                         {"c": 0.5}), ns).minimal,
        "orthonormal": minimality_report(family_builtin("orthonormal"), ns).minimal,
    }
    sp = minimality_report(family_builtin("scaled_power"), [2, 3, 4, 8])
    sp_alpha = all(a == n * math.log(2) for a, n in zip(sp.column("alpha_n"), [2, 3, 4, 8]))
    flips = zero_location_check(family_builtin("power_plus_c", {"c": 2.0}), 0.1, range(1, 20))
    first_pass = next(z.n for z in flips if z.passed)
    flip_ok = first_pass == 8 and all(z.passed == (z.n >= 8) for z in flips)
    ok = all(flags.values()) and not sp.minimal and sp_alpha and flip_ok
    acceptance(8, ok, f"minimal {flags}; scaled_power minimal={sp.minimal} alpha exact="
               f"{sp_alpha}; zero check first passes at n={first_pass}")
    assert ok


def _green_invariance(p, rng):
    R = escape_radius(p)
    z = R * (rng.uniform(-1, 1, 8000) + 1j * rng.uniform(-1, 1, 8000))
    f = green_field(p, z)
    z = z[(f.status == 1) & (f.value > 0)][:1000]
    a, b = green_field(p, z), green_field(p, evaluate(p, z))
    d = p.degree
    return z.size == 1000 and bool(np.all(np.abs(b.value - d * a.value)
                                          <= 3 * (b.bound + d * a.bound) + 1e-13))


def test_criterion_9_property_suites(acceptance):
    rng = np.random.default_rng(2024)
    polys = [Z(2) - 1, Z(2) + 0.25, Z(3) + 0.5j, Z(2, 2), Z(2) - 2, Z(4) + (0.3 - 0.1j)]
    green_ok = all(_green_invariance(p, rng) for p in polys)

    clouds = [PointCloud(rng.normal(size=30) + 1j * rng.normal(size=30)) for _ in range(5)]
    shapes = clouds + [Disc(0, 1), Circle(0.3, 0.8), Segment(-1, 1j)]
    chi_ok = True
    for A, B, C in itertools.combinations(shapes, 3):
        ab, bc, ac = hausdorff_distance(A, B), hausdorff_distance(B, C), hausdorff_distance(A, C)
        chi_ok &= ab >= 0 and ab == hausdorff_distance(B, A) and ac <= ab + bc + 1e-3
    chi_ok &= all(hausdorff_distance(A, A) == 0 for A in shapes)

    refs = [Disc(0, 1), Disc(0, 2), Segment(-2, 2), Ellipse(0, 1.5, 1, filled=True),
            Disc(0.5, 0.7)]
    gam_ok = True
    gam = {}
    for A, B in itertools.product(refs, repeat=2):
        gam[A, B] = klimek_distance(KlimekInput.reference(A), KlimekInput.reference(B))
    for A, B, C in itertools.permutations(refs, 3):
        slack = 3 * (gam[A, B].uncertainty + gam[B, C].uncertainty + gam[A, C].uncertainty)
        gam_ok &= gam[A, C].value <= gam[A, B].value + gam[B, C].value + slack
    gam_ok &= all(gam[A, B].value == gam[B, A].value for A, B in gam)
    gam_ok &= all(gam[A, A].value == 0 for A in refs)

    worst = 0.0
    for _ in range(100):
        deg = int(rng.integers(1, 17))
        c = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
        p = Polynomial(c)
        r = roots(p)
        worst = max(worst, float(np.max(np.abs(evaluate(p, r)) / residual_scale(p, r))))
    root_ok = worst <= 1e-8

    push_ok = True
    for p in (Z(2) - 1, Z(3) + (0.2 - 0.4j), Z(2) + (-0.12 + 0.75j)):
        levels = brolin_tree(p, depth=6)
        d = p.degree
        for k in range(1, 6):
            img = evaluate(p, levels[k + 1])
            parents = np.repeat(levels[k], d)
            push_ok &= levels[k + 1].size == d * levels[k].size
            push_ok &= bool(np.max(np.abs(img - parents)) <= 1e-8 * max(1, np.abs(parents).max()))

    ok = green_ok and chi_ok and gam_ok and root_ok and push_ok
    acceptance(9, ok, f"green invariance {green_ok}; chi axioms {chi_ok}; gamma axioms {gam_ok}; "
               f"root residual max {worst:.1e}; brolin pushforward {push_ok}")
    assert ok
