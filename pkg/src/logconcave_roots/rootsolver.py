"""All-roots solver for polynomials with positive coefficients of huge dynamic range.

Polynomials are carried as natural-log coefficient magnitudes ``L_k``; the
roots of beta-model draws range over hundreds of orders of magnitude, so
iterates are also tracked as complex logarithms ``w = log z`` wherever double
precision is involved.

:func:`find_roots` runs Aberth-Ehrlich iteration in two phases.  A warm-up
phase iterates on ``w`` in double precision with max-shifted evaluation; it
costs a few numpy passes and usually lands within rounding of every root.
The main phase repeats Aberth sweeps in MPFR arithmetic (via gmpy2) at a
precision seeded from the coefficient spread, doubling it whenever a sweep
budget is exhausted, until every corrected Newton step is below the target.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import gmpy2
import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import ConvergenceError, DomainError

GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))
# start angle offset; an irrational fraction of a turn keeps guesses off the real axis
BASE_OFFSET = math.sqrt(2.0) - 1.0
POSITIVE_AXIS_ARG = 1e-9
_EXP_CLIP = 600.0
# below this the interpreter overhead of the real-arithmetic evaluator outweighs its savings
REAL_EVAL_MIN_BITS = 1024


@dataclass(frozen=True)
class LogCoeffPoly:
    """``P(z) = sum_k exp(L_k) z^k`` with finite ``L_k``.

    ``exact`` optionally keeps the coefficients themselves (ints, Fractions or
    decimal strings) for multiprecision evaluation; ``exp(L_k)`` rounded from a
    double can split multiple roots by ``sqrt(2**-53)``.
    """

    log_coeffs: np.ndarray
    exact: tuple | None = None

    def __post_init__(self):
        lc = np.asarray(self.log_coeffs, dtype=float)
        if lc.ndim != 1 or len(lc) < 2:
            raise DomainError("polynomial degree must be at least 1")
        if not np.all(np.isfinite(lc)):
            raise DomainError("log-coefficients must be finite")
        object.__setattr__(self, "log_coeffs", lc)

    @property
    def n(self) -> int:
        return len(self.log_coeffs) - 1

    @property
    def spread(self) -> float:
        return float(self.log_coeffs.max() - self.log_coeffs.min())

    @classmethod
    def from_coeffs(cls, coeffs) -> "LogCoeffPoly":
        exact = tuple(coeffs)
        c = np.array([float(x) for x in exact])
        if np.any(c <= 0):
            raise DomainError("coefficients must be strictly positive")
        return cls(np.log(c), exact=exact)


def as_poly(obj) -> LogCoeffPoly:
    if isinstance(obj, LogCoeffPoly):
        return obj
    return LogCoeffPoly(np.asarray(getattr(obj, "log_coeffs", obj), dtype=float))


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def eval_log_polar(poly, log_r, theta, chunk: int = 256):
    """Max-shifted evaluation at ``z = exp(log_r + i theta)`` in double precision.

    Vectorized over ``log_r``/``theta``.  Returns ``(log|P|, P/|P|)``;
    exact cancellation gives ``-inf`` and phase 1.
    """
    return _eval_shifted(poly, log_r, theta=theta, chunk=chunk)


def _eval_shifted(poly, log_r, theta=None, unit=None, chunk: int = 256):
    # phases come from exp(i k theta), or from powers of the unit complex ``unit``
    # (exact for units like -1 and i, so exact cancellations are seen as such)
    poly = as_poly(poly)
    ang = theta if unit is None else unit
    log_r, ang = np.broadcast_arrays(np.asarray(log_r, dtype=float), np.asarray(ang))
    shape = log_r.shape
    lr = log_r.ravel()
    ang = ang.ravel()
    k = np.arange(poly.n + 1, dtype=float)
    logmag = np.empty(lr.shape)
    phase = np.empty(lr.shape, dtype=complex)
    for s in range(0, len(lr), chunk):
        e = poly.log_coeffs[None, :] + k[None, :] * lr[s : s + chunk, None]
        m = e.max(axis=1)
        if unit is None:
            rot = np.exp(1j * k[None, :] * ang[s : s + chunk, None].astype(float))
        else:
            rot = np.ones((len(e), poly.n + 1), dtype=complex)
            rot[:, 1:] = ang[s : s + chunk, None].astype(complex)
            rot = np.cumprod(rot, axis=1)
        total = (np.exp(e - m[:, None]) * rot).sum(axis=1)
        a = np.abs(total)
        with np.errstate(divide="ignore"):
            logmag[s : s + chunk] = m + np.log(a)
        phase[s : s + chunk] = np.where(a > 0, total / np.where(a > 0, a, 1.0), 1.0)
    return logmag.reshape(shape), phase.reshape(shape)


def eval_log(poly, z, prec: int | None = None):
    """``(log|P(z)|, P(z)/|P(z)|)``.

    Double precision by default (vectorized over ``z``); with ``prec`` the
    sum is formed by Horner's rule in ``prec``-bit complex arithmetic and
    ``z`` may be a gmpy2 ``mpc``.
    """
    poly = as_poly(poly)
    if prec is None:
        z = np.asarray(z, dtype=complex)
        zero = z == 0
        a = np.where(zero, 1.0, np.abs(z))
        with np.errstate(divide="ignore"):
            lm, ph = _eval_shifted(poly, np.log(a), unit=np.where(zero, 1.0, z / a))
        lm = np.where(zero, poly.log_coeffs[0], lm)
        ph = np.where(zero, 1.0 + 0j, ph)
        if lm.ndim == 0:
            return float(lm), complex(ph)
        return lm, ph
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        coeffs = _mp_coeffs(poly)
        p, _ = _horner(coeffs, gmpy2.mpc(z))
        a = abs(p)
        if a == 0:
            return -math.inf, 1 + 0j
        return float(gmpy2.log(a)), complex(p / a)


def _mp_coeffs(poly: LogCoeffPoly):
    if poly.exact is not None:
        return [_exact_mpfr(x) for x in poly.exact]
    return [gmpy2.exp(gmpy2.mpfr(float(x))) for x in poly.log_coeffs]


def _exact_mpfr(x):
    if isinstance(x, (int, str)):
        return gmpy2.mpfr(x)
    if isinstance(x, float):
        return gmpy2.mpfr(repr(x))
    return gmpy2.mpfr(x.numerator) / x.denominator


def _horner(coeffs, z):
    p = gmpy2.mpc(coeffs[-1])
    d = gmpy2.mpc(0)
    for c in reversed(coeffs[:-1]):
        d = d * z + p
        p = p * z + c
    return p, d


def _quad_divide(desc, t, s, keep: bool):
    """Divide ``sum desc[i] x^(m-i)`` by ``x^2 - t x + s``.

    Returns the remainder ``(r1, r0)`` and, if ``keep``, the quotient's
    coefficients in descending order.
    """
    zero = gmpy2.mpfr(0)
    b1, b2 = zero, zero
    quot = [] if keep else None
    for a in desc[:-2]:
        b1, b2 = a + t * b1 - s * b2, b1
        if keep:
            quot.append(b1)
    r1 = desc[-2] + t * b1 - s * b2
    r0 = desc[-1] - s * b1
    return r1, r0, quot


def _horner_real(coeffs, z):
    """``P(z), P'(z)`` for real coefficients via division by ``(x - z)(x - conj z)``.

    Four real multiplications per coefficient instead of eight.  The
    recurrence is less stable than Horner's rule near the real axis; the
    guard bits of the working precision absorb that.
    """
    t = 2 * z.real
    s = z.real * z.real + z.imag * z.imag
    r1, r0, quot = _quad_divide(coeffs[::-1], t, s, keep=True)
    p = r1 * z + r0
    if not quot:
        return p, gmpy2.mpc(r1)
    if len(quot) == 1:
        q_at_z = gmpy2.mpc(quot[0])
    else:
        e1, e0, _ = _quad_divide(quot, t, s, keep=False)
        q_at_z = e1 * z + e0
    # P = q Q + r1 x + r0 and q'(z) = z - conj(z)
    d = (z - z.conjugate()) * q_at_z + r1
    return p, d


_LOW = gmpy2.context(precision=64)


def _clog(z) -> complex:
    """Double-precision complex log of an mpc/mpfr; rounds to 64 bits first."""
    with gmpy2.context(_LOW):
        return complex(gmpy2.log(+z))


def _log_abs(z) -> float:
    with gmpy2.context(_LOW):
        a = abs(+z)
        return float(gmpy2.log(a)) if a != 0 else -math.inf


def _log_abs_sum(log_coeffs, log_r):
    """``log sum_k exp(L_k) r^k`` for an array of ``log r``."""
    k = np.arange(len(log_coeffs), dtype=float)
    e = log_coeffs[None, :] + k[None, :] * np.asarray(log_r, dtype=float)[:, None]
    m = e.max(axis=1)
    return m + np.log(np.exp(e - m[:, None]).sum(axis=1))


# ---------------------------------------------------------------------------
# Newton polygon
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HullSegment:
    log_radius: float
    multiplicity: int

    @property
    def radius(self) -> float:
        with np.errstate(over="ignore", under="ignore"):
            return float(np.exp(self.log_radius))


def newton_polygon_radii(poly) -> list[HullSegment]:
    """Tropical root radii from the upper convex hull of ``(k, L_k)``.

    A hull edge from ``k_a`` to ``k_b`` with slope ``s`` gives radius
    ``exp(-s)`` with multiplicity ``k_b - k_a``.  Radii come out increasing.
    """
    lc = as_poly(poly).log_coeffs
    hull: list[int] = []
    for k in range(len(lc)):
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            # drop b when it lies on or below the chord a -> k
            if (b - a) * (lc[k] - lc[a]) - (lc[b] - lc[a]) * (k - a) >= 0:
                hull.pop()
            else:
                break
        hull.append(k)
    return [
        HullSegment(log_radius=-(lc[b] - lc[a]) / (b - a), multiplicity=b - a)
        for a, b in zip(hull[:-1], hull[1:])
    ]


def initial_log_guesses(poly) -> np.ndarray:
    """Complex logs of the starting points: each hull circle carries as many
    equally spaced points as its multiplicity, rotated by an irrational offset
    that advances by the golden angle from one circle to the next."""
    out = []
    for j, seg in enumerate(newton_polygon_radii(poly)):
        m = seg.multiplicity
        offset = 2.0 * math.pi * BASE_OFFSET / m + j * GOLDEN_ANGLE
        ang = offset + 2.0 * math.pi * np.arange(m) / m
        ang = np.angle(np.exp(1j * ang))
        out.append(seg.log_radius + 1j * ang)
    return np.concatenate(out)


# ---------------------------------------------------------------------------
# root sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RootSet:
    """Roots at working precision plus per-root backward-error residuals.

    ``roots`` holds gmpy2 ``mpc`` values; ``log_abs`` and ``arg`` are their
    double-precision polar coordinates, which stay finite even when the roots
    themselves are outside the double range.
    """

    roots: tuple
    residuals: np.ndarray
    precision_bits: int
    converged: bool
    iterations: int = 0
    diagnostics: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        w = np.array([_clog(z) for z in self.roots], dtype=complex)
        la, ar = w.real.copy(), w.imag.copy()
        object.__setattr__(self, "log_abs", la)
        object.__setattr__(self, "arg", ar)

    @property
    def n(self) -> int:
        return len(self.roots)

    def as_complex(self) -> np.ndarray:
        """Roots as complex128; moduli outside the double range become 0 or inf."""
        with np.errstate(over="ignore", under="ignore"):
            return np.exp(self.log_abs) * np.exp(1j * self.arg)

    def log_roots(self) -> np.ndarray:
        return self.log_abs + 1j * self.arg


def _rootset(zs, residuals, bits, converged, iterations, diagnostics=None) -> RootSet:
    return RootSet(roots=tuple(zs), residuals=np.asarray(residuals, dtype=float),
                   precision_bits=int(bits), converged=bool(converged),
                   iterations=int(iterations), diagnostics=dict(diagnostics or {}))


# ---------------------------------------------------------------------------
# Aberth-Ehrlich
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SolverConfig:
    """``precision``: ``"auto"`` (spread-based seed) or a starting bit count.

    ``max_iters`` bounds the multiprecision sweeps at each precision level;
    ``max_precision_bits`` defaults to eight times the starting precision.
    """

    target_residual: float = 1e-12
    max_iters: int = 200
    precision: str | int = "auto"
    max_precision_bits: int | None = None
    warm_iters: int = 500


def seed_precision(poly) -> int:
    """``64 + ceil(1.5 * spread / ln 2)`` bits."""
    return 64 + math.ceil(1.5 * as_poly(poly).spread / math.log(2.0))


def _aberth_sums(w: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """``z_j sum_{k != j} 1/(z_j - z_k)`` for ``j`` in ``rows``, from complex logs."""
    d = w[None, :] - w[rows, None]
    d = np.clip(d.real, -_EXP_CLIP, _EXP_CLIP) + 1j * d.imag
    q = np.exp(d)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = 1.0 / (1.0 - q)
    terms[np.arange(len(rows)), rows] = 0.0
    terms[~np.isfinite(terms)] = 0.0
    return terms.sum(axis=1)


def _warm_start(poly: LogCoeffPoly, w: np.ndarray, iters: int, tol: float = 1e-13):
    lc = poly.log_coeffs
    k = np.arange(poly.n + 1, dtype=float)
    w = w.copy()
    active = np.arange(len(w))
    best = np.inf
    stall = 0
    sweeps = 0
    for sweeps in range(1, iters + 1):
        e = lc[None, :] + k[None, :] * w[active, None].real
        e -= e.max(axis=1)[:, None]
        terms = np.exp(e + 1j * k[None, :] * w[active, None].imag)
        s = terms.sum(axis=1)
        dz = (terms * k[None, :]).sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            u = s / dz  # P / (z P')
            delta = u / (1.0 - u * _aberth_sums(w, active))
        delta[~np.isfinite(delta)] = 0.5
        step = np.log(1.0 - np.where(np.abs(1.0 - delta) < 1e-300, 1.0 - 1e-300, delta))
        step = np.clip(step.real, -5.0, 5.0) + 1j * step.imag
        w[active] = w[active] + step
        mag = np.abs(delta)
        active = active[mag >= tol]
        if len(active) == 0:
            break
        worst = mag.max()
        if worst < 0.5 * best:
            best = worst
            stall = 0
        else:
            stall += 1
            # rounding floor reached for the stragglers; the multiprecision phase takes over
            if best < 1e-8 and stall >= 10:
                break
    w.imag = np.angle(np.exp(1j * w.imag))
    return w, sweeps


def find_roots(poly, config: SolverConfig | None = None) -> RootSet:
    """All ``n`` complex roots of ``poly``.

    Raises :class:`ConvergenceError` carrying the partial ``RootSet`` when the
    precision cap is reached first.
    """
    poly = as_poly(poly)
    config = config or SolverConfig()
    n = poly.n
    bits = seed_precision(poly) if config.precision == "auto" else int(config.precision)
    cap = config.max_precision_bits or max(8 * bits, 1024)

    w, warm_sweeps = _warm_start(poly, initial_log_guesses(poly), config.warm_iters)
    diagnostics = {"warm_sweeps": warm_sweeps, "levels": []}
    total_iters = 0
    state = None
    while True:
        state = _mp_phase(poly, w if state is None else state["w"], bits, config,
                          zs=None if state is None else state["z"])
        total_iters += state["sweeps"]
        diagnostics["levels"].append({"bits": bits, "sweeps": state["sweeps"],
                                      "max_step": state["max_step"]})
        if state["converged"]:
            break
        if 2 * bits > cap:
            partial = _rootset(state["z"], state["residuals"], bits, False, total_iters, diagnostics)
            raise ConvergenceError(
                f"no convergence at degree {n} within the {cap}-bit precision cap",
                partial=partial, diagnostics=diagnostics)
        bits *= 2

    rs = _rootset(state["z"], state["residuals"], bits, True, total_iters, diagnostics)
    bad = np.flatnonzero(np.abs(rs.arg) < POSITIVE_AXIS_ARG)
    if len(bad):
        diagnostics["positive_axis_roots"] = bad.tolist()
        partial = _rootset(state["z"], state["residuals"], bits, False, total_iters, diagnostics)
        raise ConvergenceError("iterate on the positive real axis", partial=partial,
                               diagnostics=diagnostics)
    return rs


def _mp_phase(poly: LogCoeffPoly, w: np.ndarray, bits: int, config: SolverConfig, zs=None):
    n = poly.n
    tol = config.target_residual
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        coeffs = _mp_coeffs(poly)
        if zs is None:
            # starting points only need double accuracy; promote exactly afterwards
            with gmpy2.context(_LOW):
                start = [gmpy2.exp(gmpy2.mpc(complex(x))) for x in w]
            zs = [gmpy2.mpc(z) for z in start]
        else:
            zs = [gmpy2.mpc(z) for z in zs]
        logp = np.full(n, -np.inf)
        done = np.zeros(n, dtype=bool)
        steps = np.full(n, np.inf)
        evaluate = _horner_real if bits >= REAL_EVAL_MIN_BITS else _horner
        sweeps = 0
        for sweeps in range(1, config.max_iters + 1):
            w = np.array([_clog(z) for z in zs])
            todo = np.flatnonzero(~done)
            sums = _aberth_sums(w, todo)
            new = {}
            for j, a in zip(todo.tolist(), sums.tolist()):
                z = zs[j]
                p, d = evaluate(coeffs, z)
                logp[j] = _log_abs(p)
                if p == 0:
                    steps[j] = 0.0
                    done[j] = True
                    continue
                if d == 0:
                    new[j] = z * gmpy2.mpc(1.0 + 1e-3, 1e-3)
                    continue
                u = p / (d * z)
                delta = u / (1 - u * gmpy2.mpc(a))
                size = math.exp(_log_abs(delta))
                steps[j] = size
                if size < tol:
                    done[j] = True
                else:
                    new[j] = z * (1 - delta)
            for j, z in new.items():
                zs[j] = z
            if done.all():
                break
        resid = np.exp(logp - _log_abs_sum(poly.log_coeffs, w.real))
        return {"z": zs, "w": w, "residuals": resid, "converged": bool(done.all()),
                "sweeps": sweeps, "max_step": float(steps.max())}


# ---------------------------------------------------------------------------
# companion-matrix oracle
# ---------------------------------------------------------------------------

COMPANION_MAX_N = 60


def _balance_log2(logmag: np.ndarray, sweeps: int = 100) -> np.ndarray:
    """Power-of-two diagonal balancing exponents for a matrix given by log2|a_ij|."""
    n = logmag.shape[0]
    s = np.zeros(n)
    off = ~np.eye(n, dtype=bool)
    for _ in range(sweeps):
        changed = False
        for i in range(n):
            scaled = logmag + s[None, :] - s[:, None]
            row = np.where(off[i], scaled[i, :], -np.inf)
            col = np.where(off[:, i], scaled[:, i], -np.inf)
            if not (np.isfinite(row).any() and np.isfinite(col).any()):
                continue
            lr = np.logaddexp2.reduce(row)
            lc_ = np.logaddexp2.reduce(col)
            f = round((lr - lc_) / 2.0)
            if f != 0:
                s[i] += f
                changed = True
        if not changed:
            break
    return s


def companion_oracle(poly, bits: int | None = None) -> RootSet:
    """Eigenvalues of the balanced companion matrix, in arbitrary precision.

    Uses at least four times the coefficient spread (in bits); refuses
    degrees above 60.
    """
    import flint

    poly = as_poly(poly)
    n = poly.n
    if n > COMPANION_MAX_N:
        raise DomainError(f"companion_oracle is limited to degree {COMPANION_MAX_N}, got {n}")
    lc = poly.log_coeffs
    if bits is None:
        bits = max(256, 4 * math.ceil(poly.spread / math.log(2.0)) + 64)
    rel = (lc - lc[-1]) / math.log(2.0)  # log2 of monic coefficients
    logmag = np.full((n, n), -np.inf)
    for i in range(n - 1):
        logmag[i + 1, i] = 0.0
    logmag[:, n - 1] = np.logaddexp2(logmag[:, n - 1], rel[:-1])
    s = _balance_log2(logmag).astype(int)

    old = flint.ctx.prec
    flint.ctx.prec = bits
    try:
        m = flint.acb_mat(n, n)
        for i in range(n - 1):
            m[i + 1, i] = flint.arb(2) ** int(s[i] - s[i + 1])
        if poly.exact is not None:
            lead = _exact_arb(flint, poly.exact[-1])
        for i in range(n):
            if poly.exact is not None:
                c = _exact_arb(flint, poly.exact[i]) / lead
            else:
                c = flint.arb(float(lc[i] - lc[-1])).exp()
            m[i, n - 1] = -c * flint.arb(2) ** int(s[n - 1] - s[i])
        eig = m.eig(algorithm="approx")
        zs = [_acb_to_mpc(e, bits) for e in eig]
    finally:
        flint.ctx.prec = old
    zs = _canonical_order(zs)
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        coeffs = _mp_coeffs(poly)
        logp = []
        for z in zs:
            p, _ = _horner(coeffs, z)
            logp.append(_log_abs(p))
        la = np.array([_log_abs(z) for z in zs])
    resid = np.exp(np.array(logp) - _log_abs_sum(lc, la))
    return _rootset(zs, resid, bits, True, 0, {"balance_log2": s.tolist()})


def _exact_arb(flint, x):
    if isinstance(x, (int, str)):
        return flint.arb(x)
    if isinstance(x, float):
        return flint.arb(repr(x))
    return flint.arb(x.numerator) / x.denominator


def _arb_to_mpfr(x) -> "gmpy2.mpfr":
    man, exp = x.mid().man_exp()
    return gmpy2.mul_2exp(gmpy2.mpfr(int(man)), int(exp))


def _acb_to_mpc(e, bits):
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        return gmpy2.mpc(_arb_to_mpfr(e.real), _arb_to_mpfr(e.imag))


def _canonical_order(zs):
    def key(z):
        w = _clog(z)
        return (w.imag, w.real)
    return sorted(zs, key=key)


# ---------------------------------------------------------------------------
# comparisons, classification, output
# ---------------------------------------------------------------------------

def match_roots(a: RootSet, b: RootSet) -> np.ndarray:
    """Per-pair distances ``|a_i - b_j|`` after minimum-cost bipartite matching,
    each scaled by ``1 + |a_i|``."""
    za = a.as_complex()
    zb = b.as_complex()
    cost = np.abs(za[:, None] - zb[None, :])
    rows, cols = linear_sum_assignment(cost)
    return cost[rows, cols] / (1.0 + np.abs(za[rows]))


def count_real_roots(rs: RootSet, tol: float = 1e-6) -> dict:
    """Counts of roots on the negative and positive real axes.

    A root counts as real when ``|Im z| <= tol * |z|`` and the root nearest
    its conjugate passes the same test.
    """
    w = rs.log_roots()
    near = np.abs(np.sin(rs.arg)) <= tol
    neg = pos = 0
    for j in np.flatnonzero(near):
        conj = w[j].real - 1j * w[j].imag
        partner = int(np.argmin(np.abs(np.exp(1j * (w.imag - conj.imag)) - 1) + np.abs(w.real - conj.real)))
        if not near[partner]:
            continue
        if math.cos(rs.arg[j]) < 0:
            neg += 1
        else:
            pos += 1
    return {"negative_axis": neg, "positive_axis": pos}


def conjugate_closure_error(rs: RootSet) -> float:
    """Largest relative distance from a conjugated root to its matched partner."""
    w = rs.log_roots()
    cost = (np.abs(w.real[:, None] - w.real[None, :])
            + np.abs(np.exp(1j * (-w.imag[:, None] - w.imag[None, :])) - 1.0))
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def vieta_log_error(poly, rs: RootSet) -> float:
    """``|sum_k log|z_k| - (L_0 - L_n)|``."""
    lc = as_poly(poly).log_coeffs
    return abs(math.fsum(rs.log_abs.tolist()) - (lc[0] - lc[-1]))


CSV_HEADER = ("re", "im", "abs", "arg", "log_abs", "residual")


def _g17(x) -> str:
    if not isinstance(x, gmpy2.mpfr(0).__class__):
        return format(float(x), ".16e")
    if not gmpy2.is_finite(x):
        return format(float(x), ".16e")
    if x == 0:
        return format(0.0, ".16e")
    # mpfr values may lie outside the double range
    mant, exp, _ = x.digits(10, 17)
    sign = "-" if mant.startswith("-") else ""
    mant = mant.lstrip("-")
    return f"{sign}{mant[0]}.{mant[1:]}e{exp - 1:+03d}"


def roots_to_csv(rs: RootSet) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for z, la, ar, res in zip(rs.roots, rs.log_abs, rs.arg, rs.residuals):
        writer.writerow([_g17(z.real), _g17(z.imag), _g17(abs(z)), _g17(float(ar)),
                         _g17(float(la)), _g17(float(res))])
    return buf.getvalue()
