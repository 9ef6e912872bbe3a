"""Experiment runners: each returns records and writes CSV plus a JSON manifest."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import __version__
from .._kernels import BACKEND
from ..compactset import (
    Circle,
    Disc,
    Ellipse,
    SetSequence,
    Window,
    boundary,
    directed_hausdorff,
    distance_to,
    erode,
    hausdorff_distance,
    polynomial_hull,
    sequence_limits,
    write_pgm,
)
from ..dynamics import (
    DEM_COVER_FACTOR,
    DEM_FACTOR,
    FULL_TREE_LIMIT,
    brolin_sample,
    escape_radius,
    filled_julia_grid,
    green_grid_field,
)
from ..extremal import equilibrium_quadrature, minimality_report, reference_hull, zero_location_check
from ..poly import from_pairs
from ..potential import green_reference
from ..setmetrics import (
    ExperimentRecord,
    KlimekInput,
    convergence_table,
    klimek_distance,
    weak_star_discrepancy,
)
from .config import ExperimentConfig, finite_or_none

log = logging.getLogger("potdyn.labcli")


@dataclass
class ExperimentResult:
    name: str
    records: list
    columns: list
    summary: dict = field(default_factory=dict)
    files: list = field(default_factory=list)


# ---------------------------------------------------------------- output


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return "" if v is None else str(v)


def records_csv(records, columns) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n"] + columns)
    for r in records:
        w.writerow([_cell(r.n)] + [_cell(r.values.get(c)) for c in columns])
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return finite_or_none(float(obj))
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def write_outputs(cfg: ExperimentConfig, result: ExperimentResult, out_dir) -> list:
    """CSV, manifest and timing file; the first two are deterministic."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = result.name
    csv_path = out / f"{stem}.csv"
    csv_path.write_text(records_csv(result.records, result.columns), encoding="utf-8")
    files = [csv_path.name] + list(result.files)
    manifest = {
        "experiment": stem,
        "version": __version__,
        "backend": BACKEND,
        "config": cfg.to_dict(),
        "columns": ["n"] + result.columns,
        "summary": result.summary,
        "files": files,
    }
    man_path = out / f"{stem}.manifest.json"
    man_path.write_text(json.dumps(_jsonable(manifest), sort_keys=True, indent=2) + "\n",
                        encoding="utf-8")
    timing = {"wall_time": {str(r.n): r.wall_time for r in result.records}}
    tim_path = out / f"{stem}.timing.json"
    tim_path.write_text(json.dumps(timing, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return [csv_path, man_path, tim_path]


def _verdict(records, key, threshold):
    rows = [(r.n, r.values[key]) for r in records]
    if len(rows) < 3:
        return {"metric": key, "rows": len(rows)}
    t = convergence_table(rows, threshold)
    return {"metric": key, "spearman": t.spearman, "decreasing": t.decreasing,
            "threshold": threshold, "below": t.below}


class _Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def _minimal_flag(cfg, F):
    if F.name == "fixed" or len(cfg.n_list) < 2:
        return None
    try:
        return minimality_report(F, cfg.n_list).minimal
    except (ValueError, ArithmeticError) as exc:
        log.warning("minimality report failed: %s", exc)
        return None


# ---------------------------------------------------------------- experiments


def _grid(cfg, p, window=None, factor=DEM_FACTOR):
    fac = factor if cfg.dem_factor is None else cfg.dem_factor
    return filled_julia_grid(p, window, cfg.resolution, cfg.max_iter, dem_factor=fac)


def _brolin_depth(d: int, min_points: int) -> int:
    depth = 1
    while d ** depth < min_points:
        depth += 1
    return depth


def run_thm_brolin(cfg: ExperimentConfig) -> ExperimentResult:
    """Brolin measures of p_n against the equilibrium measure of E."""
    F = cfg.build_family()
    E = F.reference_set
    omega = equilibrium_quadrature(E)
    eps = cfg.thresholds["epsilon"]
    records = []
    for n in cfg.n_list:
        with _Timer() as t:
            p = F(n)
            d = p.degree
            depth = cfg.depth or _brolin_depth(d, cfg.min_points)
            mode = cfg.mode
            if mode == "auto":
                mode = "full-tree" if d ** depth <= FULL_TREE_LIMIT else "random-path"
            mu = brolin_sample(p, None, depth, mode, cfg.samples, cfg.seed)
            rep = weak_star_discrepancy(mu, omega, cfg.moments)
            zl = zero_location_check(F, eps, [n])[0] if F.name != "fixed" else None
        if zl is not None and not zl.passed:
            log.warning("n=%d: zeros leave the %.3g-neighbourhood of Pc(E)", n, eps)
        records.append(ExperimentRecord(n, {
            "moment_discrepancy": rep.moment_discrepancy,
            "potential_discrepancy": rep.potential_discrepancy,
            "depth": depth, "mode": mode, "points": len(mu),
            "zeros_bounded": None if zl is None else zl.passed,
        }, t.elapsed))
    minimal = _minimal_flag(cfg, F)
    summary = {"trend": _verdict(records, "moment_discrepancy", cfg.thresholds["discrepancy"]),
               "potential_trend": _verdict(records, "potential_discrepancy",
                                           cfg.thresholds["discrepancy"]),
               "minimal": minimal, "negative_control": minimal is False}
    cols = ["moment_discrepancy", "potential_discrepancy", "depth", "mode", "points",
            "zeros_bounded"]
    return ExperimentResult("thm-brolin", records, cols, summary)


def run_thm_klimek(cfg: ExperimentConfig) -> ExperimentResult:
    """Klimek distance from K_{p_n} to Pc(E)."""
    F = cfg.build_family()
    hull = reference_hull(F.reference_set)
    ref = KlimekInput.reference(hull)
    eps = cfg.thresholds["epsilon"]
    records = []
    for n in cfg.n_list:
        with _Timer() as t:
            p = F(n)
            K = _grid(cfg, p)
            res = klimek_distance(KlimekInput.julia(p, K, cfg.green_max_iter), ref)
            zl = zero_location_check(F, eps, [n])[0] if F.name != "fixed" else None
        records.append(ExperimentRecord(n, {
            "gamma": res.value, "uncertainty": res.uncertainty,
            "g_set_on_julia": res.g_b_on_a, "g_julia_on_set": res.g_a_on_b,
            "zero_max_dist": None if zl is None else zl.max_dist, "h": K.h,
        }, t.elapsed))
    minimal = _minimal_flag(cfg, F)
    summary = {"trend": _verdict(records, "gamma", cfg.thresholds["klimek"]),
               "minimal": minimal, "negative_control": minimal is False}
    cols = ["gamma", "uncertainty", "g_set_on_julia", "g_julia_on_set", "zero_max_dist", "h"]
    return ExperimentResult("thm-klimek", records, cols, summary)


def run_hausdorff_dichotomy(cfg: ExperimentConfig) -> ExperimentResult:
    """Hausdorff distance of K_n to the closed unit disc and to the unit circle."""
    if cfg.family["name"] != "power_plus_c":
        raise ValueError("hausdorff-dichotomy needs the power_plus_c family")
    F = cfg.build_family()
    disc, circle = Disc(0j, 1.0), Circle(0j, 1.0)
    records = []
    for n in cfg.n_list:
        with _Timer() as t:
            K = _grid(cfg, F(n))
            chi_d = hausdorff_distance(K, disc)
            chi_c = hausdorff_distance(K, circle)
        records.append(ExperimentRecord(n, {"chi_disc": chi_d, "chi_circle": chi_c, "h": K.h},
                                        t.elapsed))
    thr = cfg.thresholds["hausdorff"]
    last = records[-1].values
    summary = {"threshold": thr, "disc_below": last["chi_disc"] <= thr,
               "circle_below": last["chi_circle"] <= thr,
               "disc_trend": _verdict(records, "chi_disc", thr),
               "circle_trend": _verdict(records, "chi_circle", thr)}
    return ExperimentResult("hausdorff-dichotomy", records, ["chi_disc", "chi_circle", "h"],
                            summary)


def run_lemma31(cfg: ExperimentConfig) -> ExperimentResult:
    """|p_n(z)|^(1/n) against exp(g(z)) at probes outside the hull."""
    F = cfg.build_family()
    hull = reference_hull(F.reference_set)
    g = green_reference(hull)
    probes = np.array(cfg.probe_points(), dtype=complex)
    margin = cfg.thresholds["probe_margin"]
    dist = np.atleast_1d(distance_to(hull, probes))
    if np.any(dist <= margin):
        bad = probes[dist <= margin]
        raise ValueError(f"probes {bad.tolist()} lie within {margin} of Pc(E)")
    target = np.exp(g(probes))
    tol = cfg.thresholds["discrepancy"]
    records = []
    worst = -math.inf
    for n in cfg.n_list:
        with _Timer() as t:
            vals = np.abs(F.values(n, probes)) ** (1.0 / n)
        for z, v, e in zip(probes, vals, target):
            worst = max(worst, float(v - e))
            records.append(ExperimentRecord(n, {
                "probe_re": z.real, "probe_im": z.imag, "root_modulus": float(v),
                "exp_green": float(e), "abs_error": float(abs(v - e)),
            }, t.elapsed / probes.size))
    last = [r for r in records if r.n == cfg.n_list[-1]]
    summary = {"max_excess": worst, "one_sided_ok": worst <= tol, "tolerance": tol,
               "last_max_error": max(r.values["abs_error"] for r in last)}
    cols = ["probe_re", "probe_im", "root_modulus", "exp_green", "abs_error"]
    return ExperimentResult("lemma31", records, cols, summary)


def _outer_boundary(E):
    if isinstance(E, Disc):
        return Circle(E.center, E.radius)
    if isinstance(E, Ellipse):
        return Ellipse(E.center, E.a, E.b, filled=False)
    return E


def run_limitset_check(cfg: ExperimentConfig) -> ExperimentResult:
    """liminf and limsup proxies of {K_n} and {J_n} on one shared window.

    Grids use the covering distance-estimate factor so that no piece of a
    thin K_n drops out of a member. The limsup of K_n is filled and then
    eroded by ``tol`` before it is compared with Pc(E).
    """
    F = cfg.build_family()
    polys = [F(n) for n in cfg.n_list]
    R = max(escape_radius(p) for p in polys)
    win = Window.square(R)
    records = []
    Ks = []
    for n, p in zip(cfg.n_list, polys):
        with _Timer() as t:
            Ks.append(_grid(cfg, p, win, DEM_COVER_FACTOR))
        records.append(ExperimentRecord(n, {"count": Ks[-1].count()}, t.elapsed))
    h = Ks[0].h
    tol = 2.0 * h if cfg.tol is None else float(cfg.tol)
    Js = [boundary(K) for K in Ks]
    limK = sequence_limits(SetSequence(cfg.n_list, Ks), cfg.T, tol)
    limJ = sequence_limits(SetSequence(cfg.n_list, Js), cfg.T, tol)
    hull = reference_hull(F.reference_set)
    chi = math.inf
    if limK.limsup is not None:
        filled = polynomial_hull(limK.limsup)
        shrunk = erode(filled, tol) if tol > 0 else filled
        if shrunk is not None:
            chi = hausdorff_distance(shrunk, hull)
    J = _outer_boundary(hull)
    hJ = directed_hausdorff(J, limJ.liminf) if limJ.liminf is not None else math.inf
    summary = {"chi_hull_limsup": chi, "h_J_liminf": hJ, "T": limK.T, "tol": tol, "h": h}
    for r in records:
        r.values.update({"chi_hull_limsup": chi, "h_J_liminf": hJ, "T": limK.T, "tol": tol})
    cols = ["count", "chi_hull_limsup", "h_J_liminf", "T", "tol"]
    return ExperimentResult("limitsets", records, cols, summary)


def run_minimality(cfg: ExperimentConfig) -> ExperimentResult:
    F = cfg.build_family()
    with _Timer() as t:
        rep = minimality_report(F, cfg.n_list)
        zl = zero_location_check(F, cfg.thresholds["epsilon"], cfg.n_list)
    records = []
    for row, z in zip(rep.rows, zl):
        records.append(ExperimentRecord(row.n, {
            "alpha_n": row.alpha_n, "beta_n": row.beta_n, "sup_beta_n": row.sup_beta_n,
            "gamma_diag": row.gamma_diag, "zero_max_dist": row.zero_max_dist,
            "zeros_within_epsilon": z.passed,
        }, t.elapsed / len(rep.rows)))
    summary = {"alpha_minimal": rep.alpha_minimal, "beta_minimal": rep.beta_minimal,
               "minimal": rep.minimal, "capacity": rep.capacity.value,
               "capacity_source": rep.capacity.source}
    cols = ["alpha_n", "beta_n", "sup_beta_n", "gamma_diag", "zero_max_dist",
            "zeros_within_epsilon"]
    return ExperimentResult("minimality", records, cols, summary)


def _render_targets(cfg: ExperimentConfig):
    if cfg.polynomial is not None:
        p = from_pairs(cfg.polynomial)
        return [(p.degree, p)]
    F = cfg.build_family()
    return [(n, F(n)) for n in cfg.n_list]


def run_render(cfg: ExperimentConfig, out_dir=None) -> ExperimentResult:
    """Julia grids as PGM and Green fields as (re, im, g) CSV."""
    out = Path(out_dir or cfg.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    records, files = [], []
    for n, p in _render_targets(cfg):
        with _Timer() as t:
            vals = {}
            if "julia" in cfg.render:
                K = _grid(cfg, p)
                img, side = write_pgm(K, out / f"julia_n{n}.pgm")
                files += [img.name, side.name]
                vals["occupied"] = K.count()
            if "green" in cfg.render:
                lat = Window.square(escape_radius(p)).lattice(cfg.resolution)
                field_ = green_grid_field(p, lat, cfg.green_max_iter)
                z = lat.centers().ravel()
                path = out / f"green_n{n}.csv"
                _write_green_csv(path, z, field_.value.ravel())
                files.append(path.name)
        records.append(ExperimentRecord(n, vals, t.elapsed))
    cols = ["occupied"] if "julia" in cfg.render else []
    return ExperimentResult("render", records, cols, {"files": len(files)}, files)


def _write_green_csv(path: Path, z, g):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["re", "im", "g"])
    for zz, gg in zip(z, g):
        w.writerow([f"{zz.real:.17g}", f"{zz.imag:.17g}", _cell(float(gg))])
    path.write_text(buf.getvalue(), encoding="utf-8")


EXPERIMENTS = {
    "thm-brolin": run_thm_brolin,
    "thm-klimek": run_thm_klimek,
    "hausdorff-dichotomy": run_hausdorff_dichotomy,
    "lemma31": run_lemma31,
    "limitsets": run_limitset_check,
    "minimality": run_minimality,
    "render": run_render,
}


def run_experiment(name: str, cfg: ExperimentConfig, out_dir=None) -> ExperimentResult:
    """Run one experiment and, when an output directory is known, write its files."""
    if name not in EXPERIMENTS:
        raise ValueError(f"unknown experiment {name!r}")
    if cfg.experiment and cfg.experiment != name:
        raise ValueError(f"config is for {cfg.experiment!r}, not {name!r}")
    out = out_dir or cfg.out
    if name == "render":
        result = run_render(cfg, out)
    else:
        result = EXPERIMENTS[name](cfg)
    if out is not None:
        write_outputs(cfg, result, out)
    return result
