"""Mittag-Leffler (Prabhakar) and Wright functions on the real line.

All series are summed term by term with compensated (exact-rounding)
summation and a "three consecutive negligible terms" stopping rule.  Where
the alternating power series would lose too many digits to cancellation,
evaluation switches to a representation without cancellation:

* ``a == 1``: Kummer's transformation turns ``E^c_{1,b}(-x)`` into
  ``exp(-x)`` times a series whose terms have (eventually) one sign.
* ``0 < a < 1``: the Laplace-integral ("spectral") representation on the
  negative real axis, evaluated by :mod:`cmkinetic.spectral`.
* Wright functions ``W_{-nu,mu}(-x)``: a real integral along the steepest
  descent path of the Hankel representation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate, special

from .errors import DomainError, InvalidOrder, NonConvergence

__all__ = [
    "MLOrder",
    "SeriesResult",
    "reciprocal_gamma",
    "pochhammer",
    "mittag_leffler3",
    "mittag_leffler2",
    "ml",
    "schneider_F",
    "wright2",
    "kilbas_saigo_stretched",
    "kilbas_saigo_series",
]

TERM_CAP = 10_000
STOP_RATIO = 1e-16
CANCELLATION_FLAG_RATIO = 1e8
# Partial sums larger than this multiple of the result send the evaluation
# to a cancellation-free route (when one exists for the parameters).
ROUTE_CANCELLATION_RATIO = 1e4
# The Wright integrals are accurate to ~1e-14, so the series yields sooner.
WRIGHT_CANCELLATION_RATIO = 1e2
Z_SWITCH = 15.0

_EULER_GAMMA = 0.5772156649015329
_CHUNK = 64
_LINEAR_GAMMA_MAX = 160.0


@dataclass(frozen=True)
class MLOrder:
    """Parameters ``(a, b, c)`` of the Prabhakar function ``E^c_{a,b}``."""

    a: float
    b: float
    c: float = 1.0

    def __post_init__(self) -> None:
        for name in ("a", "b", "c"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise InvalidOrder(f"Mittag-Leffler parameter {name}={value!r} must be > 0")


@dataclass(frozen=True)
class SeriesResult:
    """Value of a series evaluation plus its accuracy bookkeeping.

    ``route`` records how the value was obtained: ``"series"`` (direct
    power series), ``"kummer"`` (Kummer-transformed series), ``"spectral"``
    (Laplace integral over the spectral density) or ``"integral"``
    (steepest-descent integral for Wright functions) or ``"contour"``
    (fixed Hankel contour for Wright functions at positive argument).
    """

    value: float
    terms_used: int
    truncation_bound: float
    cancellation_flag: bool
    route: str = "series"

    def __float__(self) -> float:
        return float(self.value)


def reciprocal_gamma(x: float) -> float:
    """Return ``1/Gamma(x)``; exactly zero at the poles ``x = 0, -1, -2, ...``."""
    x = float(x)
    if x <= 0 and x == math.floor(x):
        return 0.0
    if abs(x) < 1e-8:
        # 1/Gamma(x) = x + euler_gamma x^2 + O(x^3); the library call underflows here
        return x + _EULER_GAMMA * x * x
    return float(special.rgamma(x))


def pochhammer(c: float, k: int) -> float:
    """Rising factorial ``(c)_k = c (c+1) ... (c+k-1)`` by iterated product.

    Raises
    ------
    DomainError
        If ``c <= 0`` or ``k < 0``.
    OverflowError
        If the product exceeds the largest finite double.
    """
    if not c > 0:
        raise DomainError(f"pochhammer requires c > 0, got {c!r}")
    if k < 0 or int(k) != k:
        raise DomainError(f"pochhammer requires a nonnegative integer k, got {k!r}")
    result = 1.0
    for j in range(int(k)):
        result *= c + j
        if math.isinf(result):
            raise OverflowError(f"(c)_k overflows for c={c}, k={k}")
    return result


# ---------------------------------------------------------------- series core


def _scaled_rgamma(log_mag: np.ndarray, arg: np.ndarray) -> np.ndarray:
    """``exp(log_mag) / Gamma(arg)`` without intermediate over/underflow."""
    out = np.zeros_like(log_mag)
    pole = (arg <= 0) & (arg == np.floor(arg))
    linear = ~pole & (np.abs(arg) < _LINEAR_GAMMA_MAX) & (log_mag < 700.0)
    out[linear] = np.exp(log_mag[linear]) * special.rgamma(arg[linear])
    rest = ~pole & ~linear
    if rest.any():
        sign = special.gammasgn(arg[rest])
        out[rest] = sign * np.exp(log_mag[rest] - special.gammaln(arg[rest]))
    return out


class _RisingLog:
    """Running ``log|prod_j (p + j) * x / (j + 1)|`` and its sign, chunk by chunk."""

    def __init__(self, p: float | None, x: float) -> None:
        self.p = p
        self.log_x = math.log(abs(x)) if x != 0 else -math.inf
        self.x_neg = x < 0
        self.log = 0.0
        self.sign = 1.0
        self.dead = False

    def block(self, k0: int, n: int) -> tuple[np.ndarray, np.ndarray]:
        k = np.arange(k0, k0 + n, dtype=float)
        logs = np.empty(n)
        signs = np.empty(n)
        for i in range(n):
            logs[i] = self.log
            signs[i] = 0.0 if self.dead else self.sign
            j = k[i]
            factor = (self.p + j) if self.p is not None else 1.0
            if factor == 0.0:
                self.dead = True
            else:
                self.log += math.log(abs(factor)) + self.log_x - math.log(j + 1.0)
                if factor < 0:
                    self.sign = -self.sign
                if self.x_neg:
                    self.sign = -self.sign
        return logs, signs


def _sum_series(
    block: Callable[[int, int], np.ndarray],
    *,
    term_cap: int = TERM_CAP,
    route: str = "series",
) -> tuple[SeriesResult, float]:
    """Sum ``sum_k term_k`` with the stopping rule shared by all series.

    ``block(k0, n)`` returns terms ``k0 .. k0+n-1``.  Returns the result and
    the cancellation ratio ``max|partial sum| / |value|``.
    """
    terms: list[float] = []
    partial = 0.0
    max_partial = 0.0
    run = 0
    k0 = 0
    stopped = False
    while k0 < term_cap and not stopped:
        n = min(_CHUNK, term_cap - k0)
        chunk = block(k0, n)
        for term in chunk:
            term = float(term)
            if not math.isfinite(term):
                raise NonConvergence(f"non-finite term at index {len(terms)}")
            terms.append(term)
            partial += term
            max_partial = max(max_partial, abs(partial))
            if term == 0.0 or abs(term) < STOP_RATIO * abs(partial):
                run += 1
                if run == 3:
                    stopped = True
                    break
            else:
                run = 0
        k0 += n
    value = math.fsum(terms)
    bound = math.fsum(abs(t) for t in terms[-3:])
    ratio = max_partial / abs(value) if value != 0 else (math.inf if max_partial > 0 else 1.0)
    if not stopped and bound > 1e-8:
        raise NonConvergence(
            f"series did not converge within {term_cap} terms (tail estimate {bound:.3e})"
        )
    result = SeriesResult(
        value=value,
        terms_used=len(terms),
        truncation_bound=bound,
        cancellation_flag=ratio > CANCELLATION_FLAG_RATIO,
        route=route,
    )
    return result, ratio


# ------------------------------------------------------------ Mittag-Leffler


def _ml_direct(order: MLOrder, z: float) -> tuple[SeriesResult, float]:
    a, b, c = order.a, order.b, order.c
    rising = _RisingLog(c, z)

    def block(k0: int, n: int) -> np.ndarray:
        logs, signs = rising.block(k0, n)
        k = np.arange(k0, k0 + n, dtype=float)
        return signs * _scaled_rgamma(logs, a * k + b)

    return _sum_series(block)


def _ml_log_max_term(order: MLOrder, z: float) -> float:
    """Rough ``log max_k |term_k|`` of the direct series, from log-gamma values."""
    a, b, c = order.a, order.b, order.c
    k = np.arange(TERM_CAP, dtype=float)
    logs = (
        special.gammaln(c + k)
        - special.gammaln(c)
        - special.gammaln(k + 1.0)
        + k * math.log(abs(z))
        - special.gammaln(a * k + b)
    )
    return float(np.max(logs))


def _ml_kummer(order: MLOrder, z: float) -> tuple[SeriesResult, float]:
    # E^c_{1,b}(z) = exp(z) * sum_k (b-c)_k (-z)^k / (Gamma(k+b) k!)
    b, c = order.b, order.c
    rising = _RisingLog(b - c, -z)

    def block(k0: int, n: int) -> np.ndarray:
        logs, signs = rising.block(k0, n)
        k = np.arange(k0, k0 + n, dtype=float)
        return signs * _scaled_rgamma(logs + z, k + b)

    return _sum_series(block, route="kummer")


def _ml_spectral(order: MLOrder, z: float) -> SeriesResult:
    from . import spectral

    value, err = spectral.ml_laplace_value(order.a, order.b, order.c, -z)
    return SeriesResult(
        value=value, terms_used=1, truncation_bound=err, cancellation_flag=True, route="spectral"
    )


def mittag_leffler3(
    order: MLOrder,
    z: float,
    *,
    z_switch: float = Z_SWITCH,
) -> SeriesResult:
    """Three-parameter Mittag-Leffler function ``E^c_{a,b}(z)`` for real ``z``.

    For ``z >= 0`` and moderate ``|z|`` the defining power series is summed
    directly.  For ``z < 0``:

    * ``a == 1`` uses the Kummer-transformed series (no cancellation);
    * ``a < 1`` with ``z < -z_switch``, or whenever the direct sum shows
      cancellation worse than ``ROUTE_CANCELLATION_RATIO``, uses the Laplace
      integral of the spectral density (``cancellation_flag`` is set and
      ``truncation_bound`` carries the quadrature error estimate).

    Raises
    ------
    InvalidOrder
        If a parameter is not positive.
    NonConvergence
        If the series cap is reached, or the spectral quadrature fails.
    """
    if not isinstance(order, MLOrder):
        order = MLOrder(*order)
    z = float(z)
    if not math.isfinite(z):
        raise DomainError(f"argument must be finite, got {z!r}")
    if z == 0.0:
        return SeriesResult(reciprocal_gamma(order.b), 1, 0.0, False)
    if z < 0 and order.a == 1.0:
        return _ml_kummer(order, z)[0]
    if z < 0 and order.a < 1.0:
        if z < -z_switch or _ml_log_max_term(order, z) > math.log(ROUTE_CANCELLATION_RATIO):
            return _ml_spectral(order, z)
        try:
            result, ratio = _ml_direct(order, z)
        except NonConvergence:
            return _ml_spectral(order, z)
        if ratio > ROUTE_CANCELLATION_RATIO:
            return _ml_spectral(order, z)
        return result
    return _ml_direct(order, z)[0]


def mittag_leffler2(a: float, b: float, z: float, *, z_switch: float = Z_SWITCH) -> SeriesResult:
    """Two-parameter Mittag-Leffler function ``E_{a,b}(z) = E^1_{a,b}(z)``."""
    return mittag_leffler3(MLOrder(a, b, 1.0), z, z_switch=z_switch)


def ml(a: float, b: float, c: float, z: float) -> float:
    """Shorthand returning only the value of ``E^c_{a,b}(z)``."""
    return mittag_leffler3(MLOrder(a, b, c), z).value


def schneider_F(a: float, b: float, t: float) -> float:
    """Schneider's normalised function ``Gamma(b) E_{a,b}(-t)``."""
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t!r}")
    return math.gamma(b) * mittag_leffler2(a, b, -t).value


# --------------------------------------------------------------------- Wright


def _wright_direct(lam: float, mu: float, z: float) -> tuple[SeriesResult, float]:
    rising = _RisingLog(None, z)

    def block(k0: int, n: int) -> np.ndarray:
        logs, signs = rising.block(k0, n)
        k = np.arange(k0, k0 + n, dtype=float)
        return signs * _scaled_rgamma(logs, lam * k + mu)

    return _sum_series(block)


def _wright_integral(nu: float, mu: float, x: float) -> tuple[float, float]:
    """``W_{-nu,mu}(-x)`` for ``x > 0`` along the steepest-descent contour.

    The Hankel contour is deformed onto ``sigma = rho(phi) exp(i phi)`` with
    ``rho^(1-nu) = x sin(nu phi) / sin(phi)``, on which the exponent
    ``sigma - x sigma^nu`` is real and negative.
    """
    inv = 1.0 / (1.0 - nu)
    log_x = math.log(x)
    # magnitude at the saddle (phi -> 0), factored out so the quadrature sees
    # an integrand of order one however small the result is
    log_rho0 = inv * (log_x + math.log(nu))
    if log_rho0 > 700.0:
        return 0.0, 0.0  # exp(-rho0 (1-nu)/nu) underflows
    # only scale down: for small x the saddle is not the integrand's maximum
    log_peak = min(0.0, -math.exp(log_rho0) * (1.0 - nu) / nu + (1.0 - mu) * log_rho0)
    if log_peak < -800.0:
        return 0.0, 0.0  # the result underflows

    def integrand(phi: float) -> float:
        if phi <= 0.0:
            phi = 1e-12
        s_nu = math.sin(nu * phi)
        s_1 = math.sin(phi)
        if s_1 <= 0.0:
            return 0.0
        log_rho = inv * (log_x + math.log(s_nu) - math.log(s_1))
        if log_rho > 700.0:
            return 0.0
        expo = math.exp(log_rho) * math.sin((1.0 - nu) * phi) / s_nu
        log_mag = -expo + (1.0 - mu) * log_rho - log_peak
        if log_mag < -745.0:
            return 0.0
        dlog = inv * (nu / math.tan(nu * phi) - 1.0 / math.tan(phi))
        w = (1.0 - mu) * phi
        return math.exp(log_mag) * (math.cos(w) + dlog * math.sin(w))

    # the integrand is concentrated near phi = 0 when x is large
    x_scale = x ** inv
    points = [p for p in (1.0 / x_scale, 3.0 / x_scale) if p < math.pi] if x_scale > 1 else []
    value, err = integrate.quad(
        integrand, 0.0, math.pi, epsabs=1e-15, epsrel=1e-13, limit=400, points=points or None
    )
    scale = math.exp(log_peak) / math.pi
    return value * scale, (err + 1e-15 * abs(value)) * scale


def _wright_contour(nu: float, mu: float, z: float) -> tuple[float, float]:
    """``W_{-nu,mu}(z)`` for ``z > 0`` on a Hankel contour around the cut.

    The contour is the circle ``|sigma| = R`` closed by both banks of the
    negative axis.  The radius keeps ``z R^nu`` of order one so the integrand
    stays moderate; the value can still be much smaller than the integrand,
    which the returned error estimate accounts for.
    """
    radius = min(0.5, max(1e-3, z ** (-1.0 / nu)))
    z_r = z * radius**nu
    r_mu = radius ** (1.0 - mu)

    def arc(phi: float) -> float:
        expo = radius * math.cos(phi) + z_r * math.cos(nu * phi)
        angle = radius * math.sin(phi) + z_r * math.sin(nu * phi) + (1.0 - mu) * phi
        return r_mu * math.exp(expo) * math.cos(angle)

    c_nu, s_nu = math.cos(math.pi * nu), math.sin(math.pi * nu)

    def bank(r: float) -> float:
        zr = z * r**nu
        return math.exp(-r + zr * c_nu) * r ** (-mu) * math.sin(zr * s_nu - math.pi * mu)

    a_val, a_err = integrate.quad(arc, 0.0, math.pi, epsabs=1e-16, epsrel=1e-13, limit=400)
    b_val, b_err = integrate.quad(bank, radius, np.inf, epsabs=1e-16, epsrel=1e-13, limit=400)
    a_abs = integrate.quad(lambda p: abs(arc(p)), 0.0, math.pi, limit=200)[0]
    b_abs = integrate.quad(lambda r: abs(bank(r)), radius, np.inf, limit=200)[0]
    value = (a_val - b_val) / math.pi
    err = (a_err + b_err) / math.pi + 1e-15 * (a_abs + b_abs) / math.pi
    return value, err


def wright2(lam: float, mu: float, z: float) -> SeriesResult:
    """Wright function of the second type ``W_{lam,mu}(z)``, ``-1 < lam < 0``.

    ``W_{lam,mu}(z) = sum_n z^n / (n! Gamma(lam n + mu))``; terms at poles of
    the gamma function contribute exactly zero.  On the negative axis a
    series losing more than ``WRIGHT_CANCELLATION_RATIO`` to cancellation
    (or failing to converge) is replaced by the steepest-descent integral,
    and on the positive axis by a fixed Hankel contour.
    """
    if not -1.0 < lam < 0.0:
        raise InvalidOrder(f"wright2 requires -1 < lambda < 0, got {lam!r}")
    z = float(z)
    if z == 0.0:
        return SeriesResult(reciprocal_gamma(mu), 1, 0.0, False)
    nu = -lam
    # max term ~ exp((1-nu) (nu^nu |z|)^(1/(1-nu))): skip hopeless series
    log_growth = math.log(1.0 - nu) + (nu * math.log(nu) + math.log(abs(z))) / (1.0 - nu)
    growth = math.exp(log_growth) if log_growth < 700.0 else math.inf
    if z > 0:
        if growth < 30.0:
            try:
                result, ratio = _wright_direct(lam, mu, z)
            except NonConvergence:
                pass
            else:
                if ratio <= WRIGHT_CANCELLATION_RATIO:
                    return result
        value, err = _wright_contour(nu, mu, z)
        return SeriesResult(value, 1, err, True, route="contour")
    if growth < 30.0:
        try:
            result, ratio = _wright_direct(lam, mu, z)
        except NonConvergence:
            pass
        else:
            if ratio <= WRIGHT_CANCELLATION_RATIO:
                return result
    value, err = _wright_integral(nu, mu, -z)
    return SeriesResult(value, 1, err, True, route="integral")


# --------------------------------------------------------------- Kilbas-Saigo


def kilbas_saigo_stretched(beta: float, t: float) -> float:
    """``E_{1,1+beta,beta}(-t^(1+beta)) = exp(-t^(beta+1) / (beta+1))``."""
    if not -1.0 < beta <= 0.0:
        raise DomainError(f"beta must lie in (-1, 0], got {beta!r}")
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t!r}")
    g = beta + 1.0
    return math.exp(-(t**g) / g)


def kilbas_saigo_series(beta: float, t: float, n_terms: int = 25) -> float:
    """Partial sum of the Kilbas-Saigo series with ``alpha = 1``, ``m = 1 + beta``.

    ``sum_n prod_{i<n} Gamma(i m + 1 + beta) / Gamma(i m + 2 + beta) (-t^m)^n``,
    truncated after ``n_terms`` terms.
    """
    if not -1.0 < beta <= 0.0:
        raise DomainError(f"beta must lie in (-1, 0], got {beta!r}")
    m = 1.0 + beta
    x = -(t**m)
    terms = []
    coeff = 1.0
    for n in range(n_terms):
        terms.append(coeff * x**n)
        i = n
        coeff *= math.exp(math.lgamma(i * m + 1 + beta) - math.lgamma(i * m + 2 + beta))
    return math.fsum(terms)
