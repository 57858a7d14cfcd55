"""Exact samplers for random convex sequences and the log-concave models built on them.

A random convex sequence is a vector of i.i.d. standard exponentials
conditioned on having nonnegative second differences.  Its law is a mixture,
over the location ``R`` of the minimum, of explicit linear combinations of
independent exponentials, which is what :func:`sample_convex` draws from.
Coefficient vectors of the uniform, beta and alpha-scaled models are
``exp(-scale * W)`` and are only ever handled through their logarithms.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from .errors import ConvergenceError, DomainError

MODELS = ("uniform", "beta", "alpha_scaled")
EXACT_PMF_MAX_N = 500
REJECTION_MAX_N = 12
REJECTION_MAX_ITER = 10**8


def make_rng(master_seed: int, replicate: int = 0, *stream: int) -> np.random.Generator:
    """Counter-based generator for replicate ``replicate`` of ``master_seed``.

    The stream depends only on the key, so replicates can be generated in
    any order or in parallel and still reproduce bit for bit.  Extra integers
    in ``stream`` (e.g. the degree) select further independent substreams.
    """
    key = [int(master_seed) & (2**64 - 1), int(replicate), *(int(s) for s in stream)]
    seq = np.random.SeedSequence(key)
    return np.random.Generator(np.random.Philox(seq))


def standard_exponential(rng: np.random.Generator, size) -> np.ndarray:
    # 1 - U lies in (0, 1], so the log is always finite
    return -np.log1p(-rng.random(size))


def triangular(r):
    return r * (r + 1) / 2


# ---------------------------------------------------------------------------
# law of the peak index
# ---------------------------------------------------------------------------

def peak_pmf(n: int, exact: bool | None = None):
    """Probability mass function of the peak index ``R`` on ``{0, ..., n}``.

    ``P(R = i) = (n+2)/(n+1) * C(n+1, i) C(n+1, i+1) / C(2n+2, n+1)``.

    Parameters
    ----------
    n : int
        Degree, ``n >= 0``.  ``n = 0`` gives the point mass at 0.
    exact : bool, optional
        Return a list of :class:`fractions.Fraction` when true, a float array
        when false.  Defaults to exact for ``n <= 500``.
    """
    if n < 0:
        raise DomainError(f"peak_pmf: n must be nonnegative, got {n}")
    if exact is None:
        exact = n <= EXACT_PMF_MAX_N
    if n == 0:
        return [Fraction(1)] if exact else np.ones(1)
    if exact:
        denom = (n + 1) * math.comb(2 * n + 2, n + 1)
        return [
            Fraction((n + 2) * math.comb(n + 1, i) * math.comb(n + 1, i + 1), denom)
            for i in range(n + 1)
        ]
    i = np.arange(n + 1)
    logp = (
        math.log(n + 2) - math.log(n + 1)
        + _log_comb(n + 1, i) + _log_comb(n + 1, i + 1)
        - _log_comb(2 * n + 2, n + 1)
    )
    return np.exp(logp)


def _log_comb(m, k):
    return gammaln(m + 1) - gammaln(k + 1) - gammaln(m - k + 1)


def _compensated_cumsum(p: np.ndarray) -> np.ndarray:
    out = np.empty_like(p)
    s = 0.0
    c = 0.0
    for i, x in enumerate(p.tolist()):
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
        out[i] = s + c
    return out


@lru_cache(maxsize=64)
def _peak_cdf(n: int) -> np.ndarray:
    if n <= EXACT_PMF_MAX_N:
        acc = Fraction(0)
        cdf = []
        for p in peak_pmf(n, exact=True):
            acc += p
            cdf.append(float(acc))
        cdf = np.array(cdf)
    else:
        cdf = _compensated_cumsum(peak_pmf(n, exact=False))
    cdf[-1] = 1.0
    cdf.setflags(write=False)
    return cdf


def sample_peak(n: int, rng: np.random.Generator) -> int:
    """Draw ``R`` by an inverse-CDF walk over the exact cumulative pmf."""
    if n < 1:
        raise DomainError(f"sample_peak: n must be >= 1, got {n}")
    u = rng.random()
    return min(int(np.searchsorted(_peak_cdf(n), u, side="right")), n)


# ---------------------------------------------------------------------------
# convex sequences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConvexSample:
    """One draw ``W_0..W_n`` of the random convex sequence, with its peak index."""

    n: int
    r_peak: int
    w: np.ndarray

    def violations(self) -> list[str]:
        return convex_violations(self.w, self.r_peak)


def convex_violations(w, r_peak: int) -> list[str]:
    """List every broken ConvexSample invariant (empty when the draw is valid)."""
    w = np.asarray(w, dtype=float)
    out = []
    n = len(w) - 1
    if not 0 <= r_peak <= n:
        return [f"peak index {r_peak} outside [0, {n}]"]
    if np.any(w <= 0):
        out.append("nonpositive value")
    left = w[: r_peak + 1]
    right = w[r_peak:]
    if np.any(np.diff(left) >= 0):
        out.append("not strictly decreasing left of the peak")
    if np.any(np.diff(right) <= 0):
        out.append("not strictly increasing right of the peak")
    if len(left) >= 3 and np.any(np.diff(left, 2) <= 0):
        out.append("left side not strictly convex")
    if len(right) >= 3 and np.any(np.diff(right, 2) <= 0):
        out.append("right side not strictly convex")
    return out


def _side_profile(e: np.ndarray, side_len: int) -> np.ndarray:
    # increments E_m / T_{side_len-m+1}, m = 1..side_len, summed twice
    if side_len == 0:
        return np.empty(0)
    weights = triangular(np.arange(side_len, 0, -1, dtype=float))
    return np.cumsum(np.cumsum(e / weights))


def sample_convex(n: int, rng: np.random.Generator) -> ConvexSample:
    """Draw a random convex sequence of length ``n + 1`` via the mixture representation.

    Draw order: ``R``, then ``E_0``, ``E_{-1}..E_{-R}``, ``E_1..E_{n-R}``.
    """
    if n < 1:
        raise DomainError(f"sample_convex: n must be >= 1, got {n}")
    r = sample_peak(n, rng)
    e = standard_exponential(rng, n + 1)
    base = e[0] / (n + 1)
    w = np.empty(n + 1)
    w[r] = base
    w[:r] = (base + _side_profile(e[1 : r + 1], r))[::-1]
    w[r + 1 :] = base + _side_profile(e[r + 1 :], n - r)
    return ConvexSample(n=n, r_peak=r, w=w)


def rejection_batch(n: int, size: int, rng: np.random.Generator,
                    max_attempts: int = REJECTION_MAX_ITER, chunk: int = 1 << 18):
    """Draw ``size`` accepted sequences by brute-force rejection.

    Returns ``(samples, attempts)`` where ``samples`` has shape
    ``(size, n + 1)`` in acceptance order.
    """
    if not 1 <= n <= REJECTION_MAX_N:
        raise DomainError(f"rejection sampling supports 1 <= n <= {REJECTION_MAX_N}, got {n}")
    found = []
    have = 0
    attempts = 0
    while have < size:
        if attempts >= max_attempts:
            raise ConvergenceError(
                f"rejection sampler exceeded {max_attempts} attempts at n={n}",
                partial=np.concatenate(found) if found else np.empty((0, n + 1)),
                diagnostics={"attempts": attempts, "accepted": have},
            )
        m = min(chunk, max_attempts - attempts)
        x = standard_exponential(rng, (m, n + 1))
        ok = np.all(np.diff(x, 2, axis=1) >= 0, axis=1)
        idx = np.flatnonzero(ok)
        need = size - have
        if len(idx) > need:
            # count attempts only up to the last accepted row we keep
            attempts += int(idx[need - 1]) + 1
            idx = idx[:need]
        else:
            attempts += m
        found.append(x[idx])
        have += len(idx)
    return np.concatenate(found), attempts


def rejection_oracle(n: int, rng: np.random.Generator,
                     max_attempts: int = REJECTION_MAX_ITER) -> np.ndarray:
    """First i.i.d. exponential vector with nonnegative second differences."""
    samples, _ = rejection_batch(n, 1, rng, max_attempts=max_attempts,
                                 chunk=min(1 << 14, max_attempts))
    return samples[0]


# ---------------------------------------------------------------------------
# model coefficients
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModelCoeffs:
    """Natural-log magnitudes ``L_k`` of the positive coefficients of one model draw."""

    model: str
    alpha: float
    log_coeffs: np.ndarray

    @property
    def n(self) -> int:
        return len(self.log_coeffs) - 1


def model_scale(model: str, n: int, alpha: float = 1.0) -> float:
    if model == "uniform":
        return 1.0
    if model == "beta":
        return float(n)
    if model == "alpha_scaled":
        if not alpha > 0:
            raise DomainError(f"alpha must be positive, got {alpha}")
        return float(n) ** alpha
    raise DomainError(f"unknown model {model!r}; expected one of {MODELS}")


def make_coeffs(s: ConvexSample, model: str, alpha: float = 1.0) -> ModelCoeffs:
    scale = model_scale(model, s.n, alpha)
    if model == "beta":
        alpha = 1.0
    return ModelCoeffs(model=model, alpha=float(alpha), log_coeffs=-scale * np.asarray(s.w))


def is_log_concave(log_coeffs, strict: bool = False) -> bool:
    second = np.diff(np.asarray(log_coeffs, dtype=float), 2)
    return bool(np.all(second < 0) if strict else np.all(second <= 0))


# ---------------------------------------------------------------------------
# JSON documents
# ---------------------------------------------------------------------------

def _dec(x: float) -> str:
    return format(float(x), ".16e")


def to_document(sample: ConvexSample, coeffs: ModelCoeffs, seed) -> dict:
    return {
        "n": sample.n,
        "model": coeffs.model,
        "alpha": coeffs.alpha,
        "seed": seed,
        "R": sample.r_peak,
        "W": [_dec(x) for x in sample.w],
        "log_coeffs": [_dec(x) for x in coeffs.log_coeffs],
    }


def dumps_document(doc: dict) -> str:
    return json.dumps(doc, separators=(", ", ": "))


def from_document(doc: dict) -> tuple[ConvexSample | None, ModelCoeffs]:
    """Inverse of :func:`to_document`.

    Documents without ``W`` (e.g. hand-written polynomials) give ``None``
    for the sample.
    """
    logs = np.array([float(x) for x in doc["log_coeffs"]])
    coeffs = ModelCoeffs(model=doc.get("model", "uniform"),
                         alpha=float(doc.get("alpha", 1.0)), log_coeffs=logs)
    sample = None
    if "W" in doc:
        w = np.array([float(x) for x in doc["W"]])
        sample = ConvexSample(n=len(w) - 1, r_peak=int(doc["R"]), w=w)
    return sample, coeffs
