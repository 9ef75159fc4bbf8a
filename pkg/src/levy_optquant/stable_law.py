"""Strictly alpha-stable laws: parametrizations, density, sampling.

Parametrizations
----------------
A strictly stable law is described either by the skewness form
``(alpha, beta, scale)``, with characteristic function

    E exp(i z X) = exp(-scale**alpha |z|**alpha (1 - i beta sign(z) tan(pi alpha / 2)))

(alpha != 1; alpha == 1 is restricted to the symmetric Cauchy law), or by the
triplet ``(alpha, rho, lam)`` with ``rho = P(X > 0)`` and ``lam = E log|X|``.
:class:`StableParams` carries both.

Density
-------
The density is evaluated from a non-oscillatory integral representation over
an angular variable, accumulated in log space so that the super-exponential
tail of the spectrally one-sided laws keeps full relative precision. For
repeated evaluation it is tabulated once on a grid uniform in ``asinh(x)``
and interpolated with a cubic spline of ``log f``. :func:`density_fourier` is
an independent route through direct inversion of the characteristic function.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import gammaln, logsumexp

from .errors import IllegalTriplet
from .quadrature import tanh_sinh_rule
from .rng import SeedLike, as_generator

__all__ = [
    "StableParams",
    "params_from_triplet",
    "params_from_skew",
    "positivity_from_skew",
    "skew_from_positivity",
    "unit_log_scale",
    "positive_part_mean",
    "log_density_direct",
    "density_fourier",
    "DensityTable",
    "density_table",
    "density",
    "log_density",
    "sample_unit",
    "sample_increments",
]

_SNAP = 1e-12


def _tan_half(alpha: float) -> float:
    return math.tan(0.5 * math.pi * alpha)


def positivity_from_skew(alpha: float, beta: float) -> float:
    """P(X > 0) of the strictly stable law with skewness ``beta``."""
    if alpha == 1.0:
        return 0.5
    return 0.5 + math.atan(beta * _tan_half(alpha)) / (math.pi * alpha)


def skew_from_positivity(alpha: float, rho: float) -> float:
    if alpha == 1.0:
        return 0.0
    beta = math.tan(math.pi * alpha * (rho - 0.5)) / _tan_half(alpha)
    if abs(abs(beta) - 1.0) < _SNAP:
        beta = math.copysign(1.0, beta)
    if abs(beta) < _SNAP:
        beta = 0.0
    return beta


def _theta0(alpha: float, beta: float) -> float:
    if alpha == 1.0:
        return 0.0
    return math.atan(beta * _tan_half(alpha)) / alpha


def unit_log_scale(alpha: float, beta: float) -> float:
    """``E log|X|`` for ``scale = 1``.

    From the Mellin transform of ``|X|``; the skewness enters only through
    the modulus ``1 / cos(alpha theta0)`` of the characteristic exponent.
    """
    modulus = 1.0 / math.cos(alpha * _theta0(alpha, beta))
    return (math.log(modulus) + np.euler_gamma) / alpha - np.euler_gamma


def _check(alpha: float, rho: float) -> None:
    if not (0.0 < alpha < 2.0):
        raise IllegalTriplet(f"alpha={alpha} outside (0, 2)")
    if alpha > 1.0:
        lo, hi = 1.0 - 1.0 / alpha, 1.0 / alpha
        if not (lo - _SNAP <= rho <= hi + _SNAP):
            raise IllegalTriplet(
                f"rho={rho} outside [{lo:.6g}, {hi:.6g}] for alpha={alpha}"
            )
    elif not (0.0 < rho < 1.0):
        raise IllegalTriplet(f"rho={rho} outside (0, 1)")
    if alpha == 1.0 and abs(rho - 0.5) > _SNAP:
        raise IllegalTriplet("alpha = 1 is only supported for the symmetric Cauchy law")


@dataclass(frozen=True)
class StableParams:
    """A strictly stable law in both parametrizations.

    Build instances through :func:`params_from_triplet` or
    :func:`params_from_skew`; the fields are kept mutually consistent.
    """

    alpha: float
    rho: float
    lam: float
    beta: float
    scale: float

    @property
    def theta0(self) -> float:
        return _theta0(self.alpha, self.beta)

    @property
    def one_sided(self) -> int:
        """-1 or +1 for spectrally negative/positive laws, 0 otherwise."""
        if self.beta == -1.0:
            return -1
        if self.beta == 1.0:
            return 1
        return 0

    def flipped(self) -> "StableParams":
        """Parameters of ``-X``."""
        return StableParams(self.alpha, 1.0 - self.rho, self.lam, -self.beta, self.scale)

    def with_scale(self, scale: float) -> "StableParams":
        return params_from_skew(self.alpha, self.beta, scale)

    def as_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "rho": self.rho,
            "lambda": self.lam,
            "beta": self.beta,
            "scale": self.scale,
        }


def params_from_triplet(alpha: float, rho: float, lam: float) -> StableParams:
    """Build parameters from ``(alpha, rho, lambda)``."""
    alpha, rho, lam = float(alpha), float(rho), float(lam)
    _check(alpha, rho)
    if alpha > 1.0:
        rho = min(max(rho, 1.0 - 1.0 / alpha), 1.0 / alpha)
    beta = skew_from_positivity(alpha, rho)
    scale = math.exp(lam - unit_log_scale(alpha, beta))
    return StableParams(alpha, rho, lam, beta, scale)


def params_from_skew(alpha: float, beta: float, scale: float = 1.0) -> StableParams:
    """Build parameters from ``(alpha, beta, scale)``."""
    alpha, beta, scale = float(alpha), float(beta), float(scale)
    if not (-1.0 <= beta <= 1.0):
        raise IllegalTriplet(f"beta={beta} outside [-1, 1]")
    if scale <= 0:
        raise IllegalTriplet("scale must be positive")
    if alpha == 1.0 and beta != 0.0:
        raise IllegalTriplet("alpha = 1 is only supported for the symmetric Cauchy law")
    rho = positivity_from_skew(alpha, beta)
    _check(alpha, rho)
    lam = math.log(scale) + unit_log_scale(alpha, beta)
    return StableParams(alpha, rho, lam, beta, scale)


def positive_part_mean(params: StableParams) -> float:
    """``E[max(X_1, 0)]`` (finite for alpha > 1)."""
    a = params.alpha
    if a <= 1.0:
        return math.inf
    modulus = 1.0 / math.cos(a * params.theta0)
    return (
        params.scale
        * modulus ** (1.0 / a)
        * math.exp(gammaln(1.0 - 1.0 / a))
        * math.sin(math.pi * params.rho)
        / math.pi
    )


# --------------------------------------------------------------------------
# direct evaluation
# --------------------------------------------------------------------------


def _log_density_positive(x: np.ndarray, alpha: float, beta: float, level: int) -> np.ndarray:
    """log f(x) for x > 0, unit scale, alpha != 1."""
    pi = math.pi
    t0 = _theta0(alpha, beta)
    length = 0.5 * pi + t0
    gap = pi - 0.5 * pi * alpha - alpha * t0  # pi - alpha * length, >= 0
    if abs(gap) < 1e-13:
        gap = 0.0
    a = alpha / (alpha - 1.0)
    log_c = math.log(math.cos(alpha * t0)) / (alpha - 1.0)
    logx = np.log(x)[:, None]

    def log_g(phi, r):
        # phi = theta + theta0 (distance from the left end), r = pi/2 - theta
        p = phi + (0.5 * pi - t0)
        cos_t = np.where(r < p, np.sin(r), np.sin(p))
        q1 = alpha * phi
        q2 = gap + alpha * r
        sin_a = np.where(q1 < q2, np.sin(q1), np.sin(q2))
        w1 = gap + (alpha - 1.0) * r
        c3 = np.where(np.abs(w1) < 0.25 * pi, np.sin(w1), np.cos(t0 + (alpha - 1.0) * phi))
        with np.errstate(divide="ignore", invalid="ignore"):
            log_v = log_c + a * (np.log(cos_t) - np.log(sin_a)) + np.log(c3) - np.log(cos_t)
        return a * logx + log_v

    # split the angular interval where g = 1 (g is monotone in the angle)
    lo = np.zeros(x.shape)
    hi = np.full(x.shape, length)
    decreasing = alpha > 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        val = log_g(mid[:, None], (length - mid)[:, None])[:, 0]
        above = val > 0
        go_right = above if decreasing else ~above
        lo = np.where(go_right, mid, lo)
        hi = np.where(go_right, hi, mid)
    split = 0.5 * (lo + hi)

    rule = tanh_sinh_rule(level)
    logw = np.log(rule.weights)

    def log_piece(start, stop):
        width = (stop - start)[:, None]
        phi = start[:, None] + width * rule.left
        r = (length - stop)[:, None] + width * rule.right
        lg = log_g(phi, r)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            terms = lg - np.exp(lg) + logw + np.log(width)
        terms = np.where(np.isnan(terms), -np.inf, terms)
        return logsumexp(terms, axis=-1)

    with np.errstate(divide="ignore"):
        total = np.logaddexp(log_piece(np.zeros(x.shape), split), log_piece(split, np.full(x.shape, length)))
    return math.log(alpha / (pi * abs(alpha - 1.0))) - np.log(x) + total


def _log_density_unit(x, alpha: float, beta: float, level: int = 6) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.empty(x.shape)
    flat = x.reshape(-1)
    res = out.reshape(-1)
    if alpha == 1.0:
        res[:] = -math.log(math.pi) - np.log1p(flat * flat)
        return out
    pos = flat > 0
    neg = flat < 0
    zero = flat == 0
    if pos.any():
        res[pos] = _log_density_positive(flat[pos], alpha, beta, level)
    if neg.any():
        res[neg] = _log_density_positive(-flat[neg], alpha, -beta, level)
    if zero.any():
        t0 = _theta0(alpha, beta)
        zeta = -beta * _tan_half(alpha)
        res[zero] = (
            gammaln(1.0 + 1.0 / alpha)
            + math.log(math.cos(t0))
            - math.log(math.pi)
            - math.log1p(zeta * zeta) / (2.0 * alpha)
        )
    return out


def log_density_direct(params: StableParams, x, level: int = 6) -> np.ndarray:
    """log density evaluated point by point (no table)."""
    x = np.asarray(x, dtype=float)
    return _log_density_unit(x / params.scale, params.alpha, params.beta, level) - math.log(params.scale)


def density_fourier(params: StableParams, x) -> np.ndarray:
    """Density by direct inversion of the characteristic function.

    Slow and only accurate in absolute terms (about 1e-13); meant for
    moderate ``|x|`` and as a cross-check of the tabulated density.
    """
    alpha, beta = params.alpha, params.beta
    skew = 0.0 if alpha == 1.0 else beta * _tan_half(alpha)
    u = np.atleast_1d(np.asarray(x, dtype=float)) / params.scale
    z_max = 40.0 ** (1.0 / alpha)
    head = tanh_sinh_rule(7)
    gl_x, gl_w = np.polynomial.legendre.leggauss(20)
    out = np.empty(u.shape)
    for i, ui in enumerate(u.reshape(-1)):
        def integrand(z):
            za = z**alpha
            return np.exp(-za) * np.cos(z * ui - skew * za)

        z0 = min(1.0, z_max)
        total = z0 * np.sum(head.weights * integrand(z0 * head.left))
        if z_max > 1.0:
            rate = abs(ui) + 1.0 + alpha * abs(skew) * z_max ** max(alpha - 1.0, 0.0)
            n_panels = int(math.ceil((z_max - 1.0) * rate / 2.0))
            edges = np.linspace(1.0, z_max, n_panels + 1)
            half = 0.5 * np.diff(edges)[:, None]
            nodes = 0.5 * (edges[:-1] + edges[1:])[:, None] + half * gl_x
            total += np.sum(half * gl_w * integrand(nodes))
        out.reshape(-1)[i] = total / math.pi
    out /= params.scale
    return out if np.ndim(x) else out[0]


# --------------------------------------------------------------------------
# tabulated density
# --------------------------------------------------------------------------

_GRID_STEP = 1.0 / 256.0
_GRID_EDGE = 1e4


def _grid_width(alpha: float) -> float:
    """Length scale of the grid near 0; small alpha makes the mode sharp."""
    if alpha >= 0.6:
        return 1.0
    if alpha >= 0.3:
        return 1e-2
    if alpha >= 0.2:
        return 1e-3
    # the peak height grows like Gamma(1 + 1/alpha); accuracy is not certified here
    return 1e-3 * math.exp(gammaln(1.0 + 1.0 / 0.2) - gammaln(1.0 + 1.0 / alpha))


def _tail_series(params: StableParams, r: float, edge: float):
    """Coefficients ``a_k`` of ``f(x) = sum_k a_k x**(-k alpha - 1)`` for the side with ``P(side) = r``.

    Terms are kept while they matter at ``edge``; ``None`` for a light side.
    """
    a = params.alpha
    if abs(math.sin(math.pi * a * r)) < 1e-12:
        return None
    log_c = -math.log(math.cos(a * _theta0(a, params.beta)))
    k = np.arange(1, 41)
    coefs = (-1.0) ** (k + 1) * np.exp(gammaln(k * a + 1.0) - gammaln(k + 1.0) + k * log_c) * np.sin(k * math.pi * a * r) / math.pi
    size = np.abs(coefs) * np.exp(-k * a * math.log(edge))
    keep = np.nonzero(size >= 1e-17 * size[0])[0]
    return coefs[: keep[-1] + 1]


def _tail_log_density(series, alpha: float, u) -> np.ndarray:
    if series is None:
        return np.full(np.shape(u), -np.inf)
    k = np.arange(1, series.size + 1)
    u = np.asarray(u, dtype=float)
    val = np.sum(series * u[..., None] ** (-k * alpha), axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.log(val) - np.log(u)


def _tail_integral(series, alpha: float, u):
    """``int_u^inf`` of the tail series."""
    if series is None:
        return 0.0 * np.asarray(u, dtype=float)
    k = np.arange(1, series.size + 1)
    u = np.asarray(u, dtype=float)
    return np.sum(series * u[..., None] ** (-k * alpha) / (k * alpha), axis=-1)


class DensityTable:
    """Unit-scale log density tabulated on a grid uniform in ``asinh(x)``.

    Beyond the grid each heavy side continues as the tail series

        f(x) = (1/pi) sum_k (-1)**(k+1) Gamma(k alpha + 1) / k! sin(k pi alpha r) c**k x**(-k alpha - 1)

    with ``r = rho`` (``1 - rho`` on the negative side) and ``c = 1 / cos(alpha theta0)``
    (convergent for alpha < 1, asymptotic otherwise). A super-exponentially
    light side is zero there.
    """

    def __init__(self, params: StableParams, step: float = _GRID_STEP, edge: float = _GRID_EDGE, width=None):
        self.params = params
        self.step = step
        self.width = _grid_width(params.alpha) if width is None else float(width)
        s_max = math.asinh(edge / self.width)
        n = int(math.ceil(s_max / step))
        self.s = np.arange(-n, n + 1) * step
        self.s0 = self.s[0]
        self.grid = self.width * np.sinh(self.s)
        self.log_values = _log_density_unit(self.grid, params.alpha, params.beta)
        self._spline = CubicSpline(self.s, self.log_values)
        self._coef = np.ascontiguousarray(self._spline.c.T)
        edge_x = float(self.grid[-1])
        self.tail_series = [_tail_series(params, 1.0 - params.rho, edge_x), _tail_series(params, params.rho, edge_x)]
        weights = self.width * np.exp(self.log_values) * np.cosh(self.s)
        self._mass_spline = CubicSpline(self.s, weights).antiderivative()
        self.tail_mass = [_tail_integral(t, params.alpha, edge_x) for t in self.tail_series]

    @property
    def values(self) -> np.ndarray:
        return np.exp(self.log_values)

    def _log_unit(self, u: np.ndarray) -> np.ndarray:
        s = np.arcsinh(u / self.width)
        pos = (s - self.s0) / self.step
        idx = np.clip(pos.astype(np.intp), 0, self._coef.shape[0] - 1)
        t = (pos - idx) * self.step
        c = self._coef[idx]
        out = ((c[..., 0] * t + c[..., 1]) * t + c[..., 2]) * t + c[..., 3]
        lo = s < self.s0
        hi = s > self.s[-1]
        if lo.any() or hi.any():
            au = np.abs(u)
            for side, mask in ((0, lo), (1, hi)):
                if mask.any():
                    out = np.where(mask, _tail_log_density(self.tail_series[side], self.params.alpha, au), out)
        return out

    def logpdf(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        sc = self.params.scale
        return self._log_unit(x / sc) - math.log(sc)

    def __call__(self, x) -> np.ndarray:
        return np.exp(self.logpdf(x))

    def cdf(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        s = np.arcsinh(x / (self.params.scale * self.width))
        inside = np.clip(s, self.s[0], self.s[-1])
        out = self.tail_mass[0] + self._mass_spline(inside)
        a = self.params.alpha
        u = np.abs(x / self.params.scale)
        for side, mask in ((0, s < self.s[0]), (1, s > self.s[-1])):
            if not mask.any():
                continue
            beyond = _tail_integral(self.tail_series[side], a, u)
            if side == 0:
                out = np.where(mask, beyond, out)
            else:
                out = np.where(mask, self.total_mass() - beyond, out)
        return out

    def total_mass(self) -> float:
        return float(self._mass_spline(self.s[-1]) + sum(float(m) for m in self.tail_mass))

    def trapezoid_mass(self) -> float:
        """Trapezoid rule in the ``asinh`` variable plus both tail masses."""
        w = self.width * np.exp(self.log_values) * np.cosh(self.s)
        return float(self.step * (w.sum() - 0.5 * (w[0] + w[-1])) + sum(float(m) for m in self.tail_mass))

    def to_csv(self, path) -> None:
        sc = self.params.scale
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["x", "f"])
            for xi, lv in zip(self.grid * sc, self.log_values - math.log(sc)):
                writer.writerow([repr(float(xi)), repr(float(math.exp(lv)))])


@lru_cache(maxsize=64)
def _unit_table(alpha: float, beta: float) -> DensityTable:
    return DensityTable(params_from_skew(alpha, beta, 1.0))


class _ScaledTable:
    """A unit-scale table viewed at another scale (shares the cached grid)."""

    def __init__(self, base: DensityTable, params: StableParams):
        self.base = base
        self.params = params
        self._log_scale = math.log(params.scale)

    def logpdf(self, x):
        return self.base._log_unit(np.asarray(x, dtype=float) / self.params.scale) - self._log_scale

    def __call__(self, x):
        return np.exp(self.logpdf(x))

    def cdf(self, x):
        return self.base.cdf(np.asarray(x, dtype=float) / self.params.scale)

    def to_csv(self, path):
        DensityTable.to_csv(_CsvView(self.base, self.params), path)

    def __getattr__(self, name):
        return getattr(self.base, name)


class _CsvView:
    def __init__(self, base, params):
        self.grid, self.log_values, self.params = base.grid, base.log_values, params


def density_table(params: StableParams):
    """Cached tabulated density of ``params`` (one table per ``(alpha, beta)``)."""
    base = _unit_table(params.alpha, params.beta)
    if params.scale == 1.0:
        return base
    return _ScaledTable(base, params)


def log_density(params: StableParams, x) -> np.ndarray:
    return density_table(params).logpdf(x)


def density(params: StableParams, x) -> np.ndarray:
    """Density of ``X_1`` at ``x``."""
    return density_table(params)(x)


# --------------------------------------------------------------------------
# sampling
# --------------------------------------------------------------------------


def sample_unit(alpha: float, beta: float, size, rng: np.random.Generator) -> np.ndarray:
    """Chambers-Mallows-Stuck draws of the unit-scale strictly stable law.

    Draw order per call: all uniform angles, then all exponentials.
    """
    v = rng.uniform(-0.5 * math.pi, 0.5 * math.pi, size)
    w = rng.standard_exponential(size)
    if alpha == 1.0:
        return np.tan(v)
    t0 = _theta0(alpha, beta)
    shift = alpha * t0
    factor = math.cos(shift) ** (-1.0 / alpha)
    av = alpha * v + shift
    return (
        factor
        * np.sin(av)
        / np.cos(v) ** (1.0 / alpha)
        * (np.cos(v - av) / w) ** ((1.0 - alpha) / alpha)
    )


def sample_increments(params: StableParams, n: int, t: float = 1.0, seed: SeedLike = None) -> np.ndarray:
    """``n`` i.i.d. copies of ``X_t``, using ``X_t = t**(1/alpha) X_1`` in law."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if t <= 0:
        raise ValueError("t must be positive")
    rng = as_generator(seed)
    factor = params.scale * t ** (1.0 / params.alpha)
    return factor * sample_unit(params.alpha, params.beta, n, rng)
