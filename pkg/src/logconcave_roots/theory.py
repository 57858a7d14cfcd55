"""Closed-form limit laws for the beta and uniform models.

All logarithms are natural.  ``big_g`` is the limiting log-potential, whose
Laplacian over ``2 pi`` is the limiting root measure (``mu_density``); the
radial and log-radial laws of that measure have closed-form CDFs and
quantiles.  ``psi`` is the convex rate profile of the rescaled convex
sequence, and ``psi_n_profile`` its finite-``n`` conditional mean.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError


def psi(t: float) -> float:
    """``-4|t| - 2 log(1 - 2|t|)`` for ``|t| < 1/2``."""
    a = abs(t)
    if not a < 0.5:
        raise DomainError(f"psi: need |t| < 1/2, got t={t!r}")
    if a < 0.01:
        # the closed form cancels for small t; 2 sum_{k>=2} (2a)^k / k instead
        x = 2.0 * a
        return 2.0 * math.fsum(x**k / k for k in range(12, 1, -1))
    return -4.0 * a - 2.0 * math.log1p(-2.0 * a)


def psi_tilted(t: float, z: complex) -> float:
    if z == 0:
        raise DomainError("psi_tilted: z must be nonzero")
    return psi(t) - (0.5 + t) * math.log(abs(z))


def big_g(z: complex) -> float:
    """Limiting log-potential ``G(z)``; ``-inf`` at the origin.

    ``2 log(4 / (4 - log|z|))`` inside the unit disk and
    ``log|z| + 2 log(4 / (4 + log|z|))`` outside.
    """
    r = abs(z)
    if r == 0:
        return -math.inf
    return g_radial(r)


def g_radial(r: float) -> float:
    lr = math.log(r)
    if lr <= 0:
        return 2.0 * math.log(4.0 / (4.0 - lr))
    return lr + 2.0 * math.log(4.0 / (4.0 + lr))


def g_radial_derivative(r: float) -> float:
    """``v'(r)``; both one-sided limits equal 1/2 at ``r = 1``."""
    if not r > 0:
        raise DomainError(f"radius must be positive, got {r!r}")
    lr = math.log(r)
    if lr <= 0:
        return 2.0 / (r * (4.0 - lr))
    return (lr + 2.0) / (r * (4.0 + lr))


def g_argmax(z: complex) -> float:
    """Maximizer over ``t`` of ``-psi_tilted(t, z)``, from the stationarity condition.

    With ``s = log|z|`` the maximizer is ``s / (2(4 + |s|))`` with the sign of ``s``.
    """
    s = math.log(abs(z))
    return s / (2.0 * (4.0 + abs(s)))


def mu_density(z: complex) -> float:
    r = abs(z)
    if r == 0:
        raise DomainError("mu_density: undefined at z = 0")
    return 1.0 / (math.pi * r * r * (4.0 + abs(math.log(r))) ** 2)


def mu_radial_cdf(r: float) -> float:
    """``mu(D(0, r))``."""
    if not r > 0:
        raise DomainError(f"mu_radial_cdf: need r > 0, got {r!r}")
    return log_radial_cdf(math.log(r))


def log_radial_density(x):
    return 2.0 / (4.0 + np.abs(x)) ** 2


def log_radial_cdf(x):
    """CDF of ``log|zeta|`` under the limit law; vectorized."""
    x = np.asarray(x, dtype=float)
    out = np.where(x <= 0, 2.0 / (4.0 - np.minimum(x, 0.0)), 1.0 - 2.0 / (4.0 + np.maximum(x, 0.0)))
    return float(out) if out.ndim == 0 else out


def log_radial_quantile(p):
    p = np.asarray(p, dtype=float)
    if np.any((p <= 0) | (p >= 1)):
        raise DomainError(f"log_radial_quantile: need 0 < p < 1, got {p}")
    # invert 2/(4-x) on (0, 1/2] and 1 - 2/(4+x) on [1/2, 1)
    lo = 4.0 - 2.0 / np.minimum(p, 0.5)
    hi = 2.0 / (1.0 - np.maximum(p, 0.5)) - 4.0
    out = np.where(p <= 0.5, lo, hi)
    return float(out) if out.ndim == 0 else out


class RadialLaw:
    """The limiting root measure of the beta model, viewed through its radial marginals."""

    def density_at(self, z):
        return mu_density(z)

    def radial_cdf(self, r):
        return mu_radial_cdf(r)

    def log_radial_density(self, x):
        return log_radial_density(x)

    def log_radial_cdf(self, x):
        return log_radial_cdf(x)

    def radial_quantile(self, p):
        return np.exp(log_radial_quantile(p))

    def sample_polar(self, size, rng: np.random.Generator):
        """Exact draws as ``(log|z|, arg z)``: quantile transform plus a uniform angle.

        The log-radius has tails like ``2/|x|``, so draws routinely leave the
        double range; the polar form keeps them finite.
        """
        u = 1.0 - rng.random(size)  # (0, 1]
        u = np.where(u >= 1.0, 0.5, u)
        logr = log_radial_quantile(u)
        theta = rng.uniform(-math.pi, math.pi, size)
        return logr, theta

    def sample(self, size, rng: np.random.Generator) -> np.ndarray:
        """Complex draws; moduli outside the double range saturate to 0 or inf."""
        logr, theta = self.sample_polar(size, rng)
        with np.errstate(over="ignore", under="ignore"):
            return np.exp(logr) * np.exp(1j * theta)


# ---------------------------------------------------------------------------
# finite-n profile
# ---------------------------------------------------------------------------

def psi_n_profile(n: int, r: int, k: int) -> float:
    """Conditional mean ``E[W_{R+k} | R = r]``.

    For ``k = -l <= 0`` this is ``1/(n+1) + sum_{s=1}^{l} s / T_{r-l+s}``;
    for ``k >= 0`` the same with ``n - r`` in place of ``r``.
    """
    if not 0 <= r <= n or not -r <= k <= n - r:
        raise DomainError(f"psi_n_profile: need 0 <= R <= n and -R <= k <= n-R, got n={n}, R={r}, k={k}")
    side = r if k <= 0 else n - r
    ell = abs(k)
    total = 1.0 / (n + 1)
    for s in range(1, ell + 1):
        u = side - ell + s
        total += s / (u * (u + 1) / 2.0)
    return total


def psi_n_sweep(n: int, r: int) -> np.ndarray:
    """``psi_n_profile(n, r, k)`` for every ``k`` in ``[-r, n - r]``, in ``O(n)``.

    Entry ``j`` corresponds to offset ``k = j - r``.
    """
    if not 0 <= r <= n:
        raise DomainError(f"psi_n_sweep: need 0 <= R <= n, got R={r}")
    return np.concatenate([_side_means(r)[::-1], _side_means(n - r)[1:]]) + 1.0 / (n + 1)


def _side_means(side: int) -> np.ndarray:
    # value at l: sum_{u=side-l+1}^{side} (u - side + l) / T_u
    #           = S1(l) - (side - l) * S0(l), with suffix sums of u/T_u and 1/T_u
    u = np.arange(side, 0, -1, dtype=float)
    inv_t = 2.0 / (u * (u + 1.0))
    s0 = np.concatenate([[0.0], np.cumsum(inv_t)])
    s1 = np.concatenate([[0.0], np.cumsum(u * inv_t)])
    ell = np.arange(side + 1, dtype=float)
    return s1 - (side - ell) * s0


def phi_profile(t: float, r: float) -> float:
    """``-2 log(1 + t/r) + 2 t/r``; equals ``psi(t)`` at ``r = 1/2`` for ``t <= 0``."""
    if not r > 0 or not 1.0 + t / r > 0:
        raise DomainError(f"phi_profile: need r > 0 and 1 + t/r > 0, got t={t!r}, r={r!r}")
    u = t / r
    return -2.0 * math.log1p(u) + 2.0 * u


# ---------------------------------------------------------------------------
# equidistribution criterion
# ---------------------------------------------------------------------------

def hughes_quantity(log_coeffs) -> float:
    """``(1/n) [log sum_k e^{L_k} - (L_0 + L_n)/2]`` via a max-shifted log-sum-exp.

    Accepts a vector of log-coefficients or anything with a ``log_coeffs``
    attribute.
    """
    log_coeffs = np.asarray(getattr(log_coeffs, "log_coeffs", log_coeffs), dtype=float)
    n = len(log_coeffs) - 1
    if n < 1:
        raise DomainError("hughes_quantity: need degree >= 1")
    if not np.all(np.isfinite(log_coeffs)):
        raise DomainError("hughes_quantity: log-coefficients must be finite")
    m = log_coeffs.max()
    lse = m + math.log(math.fsum(np.exp(log_coeffs - m).tolist()))
    return (lse - 0.5 * (log_coeffs[0] + log_coeffs[-1])) / n


def jensen_envelope(delta: float) -> float:
    """Limit bound on the fraction of roots in ``D(0, delta)``:
    ``(v(sqrt(delta)) - v(delta)) / log(1/sqrt(delta))``."""
    if not 0 < delta < 1:
        raise DomainError(f"jensen_envelope: need 0 < delta < 1, got {delta!r}")
    rd = math.sqrt(delta)
    return (g_radial(rd) - g_radial(delta)) / math.log(1.0 / rd)
