"""Kinetic and fractional kinetic relaxation functions.

Time-domain solutions ``phi`` of the Debye (D), Cole-Cole (CC),
Cole-Davidson (CD) and Havriliak-Negami (HN) kinetic equations and of their
Riemann-Liouville fractional generalisations (DF, CCF, CDF, HNF), together
with the memory functions, permittivity laws and Laplace transforms.

Time enters through ``x = t / sigma``.  Classical kinds satisfy
``phi(t; sigma) = phi(t / sigma; 1)``; fractional kinds, normalised by
``D^(gamma-1) phi(0) = 1``, satisfy
``phi(t; sigma) = sigma^(gamma-1) phi(t / sigma; 1)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import BranchError, DomainError, NonConvergence
from .specfun import MLOrder, SeriesResult, mittag_leffler3

__all__ = [
    "ModelKind",
    "ModelParams",
    "EvalSeries",
    "CLASSICAL",
    "FRACTIONAL",
    "phi",
    "phi_with_error",
    "evaluate",
    "memory",
    "permittivity_law",
    "phi_laplace",
]

_EPS = np.finfo(float).eps


class ModelKind(str, Enum):
    D = "D"
    CC = "CC"
    CD = "CD"
    HN = "HN"
    DF = "DF"
    CCF = "CCF"
    CDF = "CDF"
    HNF = "HNF"

    @property
    def reads(self) -> frozenset[str]:
        """Shape parameters the kind depends on (besides ``sigma``)."""
        return _READS[self]

    @property
    def fractional(self) -> bool:
        return "gamma" in _READS[self]


_READS = {
    ModelKind.D: frozenset(),
    ModelKind.CC: frozenset({"alpha"}),
    ModelKind.CD: frozenset({"beta"}),
    ModelKind.HN: frozenset({"alpha", "beta"}),
    ModelKind.DF: frozenset({"gamma"}),
    ModelKind.CCF: frozenset({"alpha", "gamma"}),
    ModelKind.CDF: frozenset({"beta", "gamma"}),
    ModelKind.HNF: frozenset({"alpha", "beta", "gamma"}),
}

CLASSICAL = (ModelKind.D, ModelKind.CC, ModelKind.CD, ModelKind.HN)
FRACTIONAL = (ModelKind.DF, ModelKind.CCF, ModelKind.CDF, ModelKind.HNF)


@dataclass(frozen=True)
class ModelParams:
    """Shape parameters in ``(0, 1]`` and the time constant ``sigma > 0``."""

    alpha: float = 1.0
    beta: float = 1.0
    gamma: float = 1.0
    sigma: float = 1.0

    def __post_init__(self) -> None:
        for name in ("alpha", "beta", "gamma"):
            value = getattr(self, name)
            if not (0.0 < value <= 1.0):
                raise DomainError(f"{name}={value!r} must lie in (0, 1]")
        if not (self.sigma > 0.0 and math.isfinite(self.sigma)):
            raise DomainError(f"sigma={self.sigma!r} must be a positive finite number")


@dataclass(frozen=True)
class EvalSeries:
    """Function values on an increasing grid, with per-point error estimates."""

    abscissae: tuple[float, ...]
    values: tuple[float, ...]
    accuracy: tuple[float, ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.accuracy:
            object.__setattr__(self, "accuracy", tuple(0.0 for _ in self.values))
        if not len(self.abscissae) == len(self.values) == len(self.accuracy):
            raise ValueError("abscissae, values and accuracy must have equal length")
        if any(b <= a for a, b in zip(self.abscissae, self.abscissae[1:])):
            raise ValueError("abscissae must be strictly increasing")


def _kind(kind: ModelKind | str) -> ModelKind:
    return kind if isinstance(kind, ModelKind) else ModelKind(kind)


def _ml_term(a: float, b: float, c: float, z: float) -> SeriesResult:
    return mittag_leffler3(MLOrder(a, b, c), z)


def _ml_err(res: SeriesResult) -> float:
    # rounding floor of an evaluation plus its own error estimate
    return res.truncation_bound + 4 * _EPS * abs(res.value)


def _phi_unit(kind: ModelKind, p: ModelParams, x: float) -> tuple[float, float]:
    """Canonical (sigma = 1) form at ``x > 0``; returns value and error estimate."""
    a, b, g = p.alpha, p.beta, p.gamma
    if kind is ModelKind.D:
        return math.exp(-x), _EPS * math.exp(-x)
    if kind is ModelKind.CC:
        res = _ml_term(a, 1.0, 1.0, -(x**a))
        return res.value, _ml_err(res)
    if kind is ModelKind.CD:
        res = _ml_term(1.0, b + 1.0, b, -x)
        scale = x**b
        return 1.0 - scale * res.value, scale * _ml_err(res) + _EPS
    if kind is ModelKind.HN:
        res = _ml_term(a, a * b + 1.0, b, -(x**a))
        scale = x ** (a * b)
        return 1.0 - scale * res.value, scale * _ml_err(res) + _EPS
    if kind is ModelKind.DF:
        res = _ml_term(1.0, g, 1.0, -x)
        scale = x ** (g - 1.0)
        return scale * res.value, scale * _ml_err(res)
    if kind is ModelKind.CCF:
        res = _ml_term(a, g, 1.0, -(x**a))
        scale = x ** (g - 1.0)
        return scale * res.value, scale * _ml_err(res)
    if kind is ModelKind.CDF:
        a = 1.0
    # CDF and HNF share one expression (CDF is HNF at alpha = 1)
    lead = x ** (g - 1.0) / math.gamma(g)
    res = _ml_term(a, a * b + g, b, -(x**a))
    scale = x ** (a * b + g - 1.0)
    return lead - scale * res.value, scale * _ml_err(res) + _EPS * abs(lead)


def phi_with_error(kind: ModelKind | str, params: ModelParams, t: float) -> tuple[float, float]:
    """Relaxation function and an absolute error estimate at time ``t``."""
    kind = _kind(kind)
    t = float(t)
    if not math.isfinite(t) or t < 0:
        raise DomainError(f"t must be finite and >= 0, got {t!r}")
    if t == 0.0:
        if kind.fractional and params.gamma < 1.0:
            raise DomainError(f"{kind.value} diverges at t = 0 for gamma < 1")
        return 1.0, 0.0
    x = t / params.sigma
    value, err = _phi_unit(kind, params, x)
    if kind.fractional and params.sigma != 1.0:
        scale = params.sigma ** (params.gamma - 1.0)
        value, err = scale * value, scale * err
    return value, err


def phi(kind: ModelKind | str, params: ModelParams, t: float) -> float:
    """Relaxation function ``phi_kind(t)``.

    Raises
    ------
    DomainError
        For ``t < 0``, or ``t = 0`` with a fractional kind and ``gamma < 1``.
    """
    return phi_with_error(kind, params, t)[0]


def evaluate(kind: ModelKind | str, params: ModelParams, t_grid: Sequence[float]) -> EvalSeries:
    """Evaluate ``phi`` over an increasing grid."""
    pairs = [phi_with_error(kind, params, t) for t in t_grid]
    return EvalSeries(
        tuple(float(t) for t in t_grid),
        tuple(v for v, _ in pairs),
        tuple(e for _, e in pairs),
    )


# ------------------------------------------------------------ memory functions


def memory(
    kind: ModelKind | str,
    params: ModelParams,
    t: float,
    *,
    cd_sign: str = "derived",
    hn_cap: int = 500,
    hn_tol: float = 1e-14,
    hn_route: str = "auto",
) -> float:
    """Memory function ``M(t)`` of the classical kinetic equations.

    ``cd_sign="derived"`` evaluates the Cole-Davidson kernel with
    ``E_{beta,beta}[+(t/sigma)^beta]``, the sign whose Laplace transform
    reproduces ``1 / ((1 + sigma s)^beta - 1)``; ``cd_sign="printed"`` uses
    the negative argument.  The Havriliak-Negami kernel is the sum over ``k``
    truncated once a term falls below ``hn_tol`` times the partial sum.

    The k-th H-N term is ``t^(ab(k+1)-1) E^{b(k+1)}_{a,ab(k+1)}(-t^a)`` (at
    ``sigma = 1``), whose value shrinks far below its own series terms as
    ``k`` grows; no double-precision route resolves it once that cancellation
    is severe.  ``hn_route`` chooses what happens then:

    ``"auto"``
        sum while every term comes from a cancellation-free series route,
        otherwise evaluate the kernel as the Laplace integral of its
        (nonnegative) spectral density;
    ``"series"``
        always sum the series, raising :class:`NonConvergence` when the
        terms stop decreasing or the cap is hit with a tail above ``1e-8``;
    ``"spectral"``
        always use the spectral integral.
    """
    kind = _kind(kind)
    if kind not in CLASSICAL:
        raise DomainError(f"memory functions exist for D, CC, CD, HN only, not {kind.value}")
    if not t > 0:
        raise DomainError(f"t must be > 0, got {t!r}")
    a, b, sigma = params.alpha, params.beta, params.sigma
    x = t / sigma
    if kind is ModelKind.D:
        return 1.0 / sigma
    if kind is ModelKind.CC:
        return t ** (a - 1.0) / (sigma**a * math.gamma(a))
    if kind is ModelKind.CD:
        if cd_sign not in ("derived", "printed"):
            raise ValueError(f"cd_sign must be 'derived' or 'printed', got {cd_sign!r}")
        arg = x**b if cd_sign == "derived" else -(x**b)
        return math.exp(-x) * t ** (b - 1.0) / sigma**b * _ml_term(b, b, 1.0, arg).value

    if hn_route not in ("auto", "series", "spectral"):
        raise ValueError(f"hn_route must be 'auto', 'series' or 'spectral', got {hn_route!r}")
    if a == 1.0 and b == 1.0:
        return 1.0 / sigma
    if hn_route != "spectral":
        value = _hn_memory_series(a, b, x, t, hn_cap, hn_tol, strict=hn_route == "series")
        if value is not None:
            return value
    return _hn_memory_spectral(a, b, x) / sigma


def _hn_memory_series(
    a: float, b: float, x: float, t: float, cap: int, tol: float, *, strict: bool
) -> float | None:
    """Partial sum of the H-N kernel series, or ``None`` when a term would
    need a cancellation-prone route and ``strict`` is false."""
    terms: list[float] = []
    partial = 0.0
    smallest = math.inf
    for k in range(cap):
        e = a * b * (k + 1)
        res = _ml_term(a, e, b * (k + 1), -(x**a))
        if not strict and res.route not in ("series", "kummer"):
            return None
        term = x**e / t * res.value
        terms.append(term)
        partial += term
        if abs(term) < tol * abs(partial):
            return math.fsum(terms)
        if strict and abs(term) > 10.0 * smallest and smallest < 1e-6 * abs(partial):
            raise NonConvergence(
                f"H-N memory series: terms grow again after {k} terms at t={t} "
                "(values below the evaluation noise floor)"
            )
        smallest = min(smallest, abs(term)) if term != 0.0 else smallest
    tail = abs(terms[-1])
    if tail > 1e-8:
        raise NonConvergence(f"H-N memory series: tail {tail:.3e} after {cap} terms at t={t}")
    return math.fsum(terms)


def _hn_memory_spectral(a: float, b: float, x: float) -> float:
    from .spectral import QuadratureSpec, bernstein_reconstruct, hn_memory_density

    quad = QuadratureSpec(abs_tol=1e-15, rel_tol=1e-12, max_subdivisions=500)
    density = hn_memory_density(a, b)
    value, _ = bernstein_reconstruct(density, quad, x, include_atoms=True, full_output=True, strict=False)
    return value


# ---------------------------------------------------------- frequency domain


def _check_branch(s: complex) -> complex:
    s = complex(s)
    if s.imag == 0.0 and s.real <= 0.0:
        raise BranchError(f"s={s!r} lies on the branch cut (-inf, 0]")
    return s


def _log1p(w: complex) -> complex:
    u = 1.0 + w
    if u == 1.0:
        return w
    return cmath.log(u) * (w / (u - 1.0))


def _expm1(w: complex) -> complex:
    x, y = w.real, w.imag
    if abs(w) > 0.5:
        return cmath.exp(w) - 1.0
    real = math.expm1(x) * math.cos(y) - 2.0 * math.sin(0.5 * y) ** 2
    return complex(real, math.exp(x) * math.sin(y))


def _one_minus_inv_pow(w: complex, beta: float) -> complex:
    """``1 - (1 + w)^(-beta)`` without cancellation for small ``w``."""
    return -_expm1(-beta * _log1p(w))


def permittivity_law(kind: ModelKind | str, params: ModelParams, s: complex) -> complex:
    """Empirical permittivity ``eps~(s)`` of the D, CC, CD or HN model."""
    kind = _kind(kind)
    s = _check_branch(s)
    a = params.alpha if kind in (ModelKind.CC, ModelKind.HN) else 1.0
    b = params.beta if kind in (ModelKind.CD, ModelKind.HN) else 1.0
    if kind not in CLASSICAL:
        raise DomainError(f"no permittivity law for kind {kind.value}")
    return 1.0 / (1.0 + (params.sigma * s) ** a) ** b


def _laplace_unit(kind: ModelKind, p: ModelParams, s: complex) -> complex:
    a = p.alpha if kind in (ModelKind.CC, ModelKind.HN, ModelKind.CCF, ModelKind.HNF) else 1.0
    b, g = p.beta, p.gamma
    if kind is ModelKind.D:
        return 1.0 / (s + 1.0)
    if kind is ModelKind.CC:
        return s ** (a - 1.0) / (s**a + 1.0)
    if kind in (ModelKind.CD, ModelKind.HN):
        return _one_minus_inv_pow(s**a, b) / s
    if kind in (ModelKind.DF, ModelKind.CCF):
        return s ** (a - g) / (s**a + 1.0)
    return s ** (-g) * _one_minus_inv_pow(s**a, b)


def phi_laplace(kind: ModelKind | str, params: ModelParams, s: complex) -> complex:
    """Closed-form Laplace transform of ``phi_kind`` at complex ``s``.

    Raises
    ------
    BranchError
        If ``s`` lies on the closed negative real axis.
    """
    kind = _kind(kind)
    s = _check_branch(s)
    sigma = params.sigma
    value = _laplace_unit(kind, params, sigma * s)
    if sigma == 1.0:
        return value
    power = params.gamma if kind.fractional else 1.0
    return sigma**power * value
