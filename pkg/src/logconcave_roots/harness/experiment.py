"""Replicate runner and experiment records.

Each replicate ``j`` at degree ``n`` draws from the generator keyed by
``(master_seed, j, n)``, so results do not depend on scheduling or on the
number of worker processes.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .. import rootsolver as rsv
from .. import stats, theory
from ..errors import ConvergenceError
from ..sampler import make_coeffs, make_rng, sample_convex
from .config import ExperimentConfig

# per-replicate statistics that are aggregated by median
SUMMARY_KEYS = (
    "ks_log_radius", "ks_angular", "kuiper", "modulus_concentration",
    "potential_dev_r0.5", "potential_dev_r1", "potential_dev_r2", "pointwise_max_excess",
    "near_origin_mass", "negative_axis", "positive_axis", "cone_gap", "hughes",
    "max_residual", "precision_bits", "wall_clock_s",
)


def potential_grid(bound: float = 2.0, radii: int = 10, angles: int = 10):
    """``radii * angles`` points with ``1/bound <= |z| <= bound`` as (log r, theta)."""
    lr = np.linspace(-math.log(bound), math.log(bound), radii)
    th = 2 * math.pi * (np.arange(angles) + 0.5) / angles
    lr, th = np.meshgrid(lr, th, indexing="ij")
    return lr.ravel(), th.ravel()


def solve(coeffs, config: ExperimentConfig):
    """Roots of one draw; a ConvergenceError is turned into its partial RootSet."""
    poly = rsv.as_poly(coeffs)
    solver = rsv.SolverConfig(target_residual=config.target_residual, precision=config.precision)
    try:
        return rsv.find_roots(poly, solver), None
    except ConvergenceError as exc:
        return exc.partial, str(exc)


def root_statistics(poly, rs: rsv.RootSet, config: ExperimentConfig) -> dict:
    th = config.thresholds
    n = poly.n
    out = {
        "precision_bits": rs.precision_bits,
        "max_residual": float(np.max(rs.residuals)),
        "conjugate_closure": rsv.conjugate_closure_error(rs),
        "vieta_error": rsv.vieta_log_error(poly, rs),
    }
    out["conjugate_ok"] = out["conjugate_closure"] <= th["conjugate_tol"]
    out["vieta_ok"] = out["vieta_error"] <= th["vieta_tol_per_degree"] * n
    counts = rsv.count_real_roots(rs, tol=th["real_root_tol"])
    m = stats.EmpiricalRootMeasure.from_rootset(rs)
    suites = config.suites
    # positivity is an invariant of every root set, so the counts are always reported
    out["negative_axis"] = counts["negative_axis"]
    out["positive_axis"] = counts["positive_axis"]
    if "realroots" in suites:
        out["cone_gap"] = stats.cone_angle_gap(rs)
    if "radial" in suites:
        out["ks_log_radius"] = stats.ks_log_radius(m)
    if "angular" in suites:
        fit = stats.ks_angular(m)
        out["ks_angular"] = fit.ks
        out["kuiper"] = fit.kuiper
        out["modulus_concentration"] = stats.modulus_concentration(m, th["modulus_band"])
    if "potential" in suites:
        for row in stats.log_potential_profile(poly, th["potential_radii"]):
            out[f"potential_dev_r{row.r:g}"] = abs(row.mean - row.g)
        lr, theta = potential_grid(th["pointwise_radius_bound"])
        lm, _ = rsv.eval_log_polar(poly, lr, theta)
        g = np.array([theory.g_radial(math.exp(x)) for x in lr])
        out["pointwise_max_excess"] = float(np.max(lm / n - g))
        out["pointwise_ok"] = out["pointwise_max_excess"] <= th["pointwise_slack"]
    if "origin" in suites:
        delta = th["origin_delta"]
        out["near_origin_mass"] = stats.near_origin_mass(rs, delta)
        out["origin_envelope"] = theory.jensen_envelope(delta)
        out["origin_ok"] = out["near_origin_mass"] <= out["origin_envelope"] + th["origin_slack"]
    return out


def run_replicate(config: ExperimentConfig, n: int, replicate: int) -> dict:
    """Sample, solve and summarize one replicate.  Returns a JSON-ready dict;
    root rows (CSV fields) are attached under ``"roots"`` when roots were found."""
    seed = [config.master_seed, replicate, n]
    rng = make_rng(*seed)
    sample = sample_convex(n, rng)
    coeffs = make_coeffs(sample, config.model, config.alpha)
    rec = {"n": n, "replicate": replicate, "seed": seed, "r_peak": sample.r_peak,
           "converged": True, "error": None, "stats": {}}
    if "hughes" in config.suites:
        rec["stats"]["hughes"] = theory.hughes_quantity(coeffs)
    if not config.needs_roots:
        return rec
    poly = rsv.as_poly(coeffs)
    t0 = time.perf_counter()
    rs, err = solve(poly, config)
    rec["stats"]["wall_clock_s"] = time.perf_counter() - t0
    rec["converged"] = err is None
    rec["error"] = err
    if rs is not None:
        rec["stats"].update(root_statistics(poly, rs, config))
        rec["roots"] = _root_fields(rs)
    rec["stats"] = {k: _plain(v) for k, v in rec["stats"].items()}
    return rec


def _plain(v):
    # numpy scalars are not JSON serializable
    return v.item() if isinstance(v, np.generic) else v


def _root_fields(rs: rsv.RootSet) -> list[list[str]]:
    lines = rsv.roots_to_csv(rs).splitlines()[1:]
    return [line.split(",") for line in lines]


def _run_task(task):
    return run_replicate(*task)


@dataclass
class ExperimentRecord:
    config: dict
    replicates: list
    aggregates: dict = field(default_factory=dict)

    @property
    def failure_fraction(self) -> float:
        if not self.replicates:
            return 0.0
        return sum(not r["converged"] for r in self.replicates) / len(self.replicates)

    def summarize(self) -> None:
        """Medians over converged replicates, per degree."""
        agg = {}
        for n in self.config["n_values"]:
            reps = [r for r in self.replicates if r["n"] == n]
            ok = [r for r in reps if r["converged"]]
            row = {"replicates": len(reps), "converged": len(ok)}
            for key in SUMMARY_KEYS:
                vals = [r["stats"][key] for r in ok if key in r["stats"]]
                if vals:
                    row[f"median_{key}"] = float(np.median(vals))
            agg[str(n)] = row
        self.aggregates = agg

    def to_dict(self, include_roots: bool = False) -> dict:
        reps = self.replicates
        if not include_roots:
            reps = [{k: v for k, v in r.items() if k != "roots"} for r in reps]
        return {"config": self.config, "replicates": reps, "aggregates": self.aggregates,
                "failure_fraction": self.failure_fraction}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentRecord":
        d = json.loads(text)
        return cls(config=d["config"], replicates=d["replicates"], aggregates=d["aggregates"])


def run_experiment(config: ExperimentConfig) -> ExperimentRecord:
    """Run every (degree, replicate) pair, in worker processes when
    ``config.threads > 1``; results are gathered before aggregation in task order."""
    tasks = [(config, n, j) for n in config.n_values for j in range(config.replicates)]
    if config.threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.threads) as pool:
            results = list(pool.map(_run_task, tasks))
    else:
        results = [_run_task(t) for t in tasks]
    record = ExperimentRecord(config=config.to_dict(), replicates=results)
    record.summarize()
    return record
