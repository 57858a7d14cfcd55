"""Empirical root statistics compared against the limit laws.

The planar limit laws are rotationally symmetric, so the comparisons are
made through the (log-radius, angle) marginals plus circular means of the
log-potential.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import theory
from .rootsolver import RootSet, as_poly, eval_log_polar


@dataclass(frozen=True)
class EmpiricalRootMeasure:
    n: int
    log_radii: np.ndarray  # sorted ascending
    args: np.ndarray  # in (-pi, pi]

    @classmethod
    def from_polar(cls, log_radii, args) -> "EmpiricalRootMeasure":
        log_radii = np.sort(np.asarray(log_radii, dtype=float))
        args = np.asarray(args, dtype=float)
        args = np.where(args <= -math.pi, args + 2 * math.pi, args)
        return cls(n=len(log_radii), log_radii=log_radii, args=args)

    @classmethod
    def from_rootset(cls, rs: RootSet) -> "EmpiricalRootMeasure":
        return cls.from_polar(rs.log_abs, rs.arg)

    @classmethod
    def from_complex(cls, z) -> "EmpiricalRootMeasure":
        z = np.asarray(z, dtype=complex)
        with np.errstate(divide="ignore"):
            return cls.from_polar(np.log(np.abs(z)), np.angle(z))


def _ks_sorted(u: np.ndarray, cdf_values: np.ndarray) -> tuple[float, float]:
    # (D+, D-) for sorted sample points with model CDF values at those points
    n = len(u)
    i = np.arange(1, n + 1)
    d_plus = float(np.max(i / n - cdf_values))
    d_minus = float(np.max(cdf_values - (i - 1) / n))
    return d_plus, d_minus


def ks_log_radius(m: EmpiricalRootMeasure) -> float:
    """Sup distance between the empirical CDF of log-radii and the limit log-radial CDF."""
    d_plus, d_minus = _ks_sorted(m.log_radii, theory.log_radial_cdf(m.log_radii))
    return max(d_plus, d_minus)


@dataclass(frozen=True)
class AngularFit:
    ks: float
    kuiper: float


def ks_angular(m: EmpiricalRootMeasure) -> AngularFit:
    """KS and Kuiper distances of the arguments from the uniform law on the circle.

    Arguments are mapped to ``[0, 1)`` by ``(theta + pi) / (2 pi)``; the
    Kuiper statistic ``D+ + D-`` does not depend on where the circle is cut.
    """
    u = np.sort((m.args + math.pi) / (2 * math.pi))
    d_plus, d_minus = _ks_sorted(u, u)
    return AngularFit(ks=max(d_plus, d_minus), kuiper=d_plus + d_minus)


def modulus_concentration(m: EmpiricalRootMeasure, band: float) -> float:
    """Fraction of roots with ``||z| - 1| > band``."""
    if not band > 0:
        raise ValueError("band must be positive")
    with np.errstate(over="ignore"):
        dev = np.abs(np.expm1(m.log_radii))
    return float(np.mean(dev > band))


@dataclass(frozen=True)
class ProfileRow:
    r: float
    mean: float
    values: np.ndarray
    g: float


def log_potential_profile(poly, radii, angles_per_radius: int = 256) -> list[ProfileRow]:
    """``(1/n) log|P(r e^{i theta})|`` at equally spaced angles on each circle,
    with the trapezoid-rule circular mean and the limit ``G`` on that circle."""
    poly = as_poly(poly)
    theta = 2 * math.pi * np.arange(angles_per_radius) / angles_per_radius
    rows = []
    for r in radii:
        lm, _ = eval_log_polar(poly, math.log(r), theta)
        vals = lm / poly.n
        rows.append(ProfileRow(r=float(r), mean=float(np.mean(vals)), values=vals,
                               g=theory.big_g(r)))
    return rows


def near_origin_mass(rs, delta: float) -> float:
    """Fraction of roots inside ``D(0, delta)``."""
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    log_abs = rs.log_abs if isinstance(rs, RootSet) else rs.log_radii
    return float(np.mean(np.asarray(log_abs) < math.log(delta)))


def cone_angle_gap(args) -> float:
    """Width of the largest root-free sector containing the direction ``theta = 0``.

    Accepts a RootSet, an EmpiricalRootMeasure or an array of arguments.
    """
    args = np.asarray(getattr(args, "arg", getattr(args, "args", args)), dtype=float)
    if np.any(args == 0):
        return 0.0
    pos = args[args > 0]
    neg = args[args < 0]
    upper = pos.min() if len(pos) else neg.min() + 2 * math.pi
    lower = neg.max() if len(neg) else pos.max() - 2 * math.pi
    return float(upper - lower)


def root_rows(rs: RootSet) -> list[dict]:
    """Long-form per-root records (for CSV export)."""
    return [
        {"log_abs": float(la), "arg": float(ar), "residual": float(res)}
        for la, ar, res in zip(rs.log_abs, rs.arg, rs.residuals)
    ]
