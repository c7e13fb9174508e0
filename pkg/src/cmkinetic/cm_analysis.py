"""Numeric falsification tests for complete monotonicity.

Three independent criteria are offered, each returning a :class:`CMReport`:

* :func:`cm_check_derivatives` samples ``(-1)^n f^(n)(t)`` by finite
  differences (and :func:`bernstein_check` does the same for ``1 - f``);
* :func:`cm_check_spectral` looks for negative values of the spectral
  density ``K(r)`` (and negative point masses);
* :func:`halfplane_check` samples the Laplace transform in the upper half
  plane for the sign conditions every transform of a CM function obeys.

A verdict of ``ConsistentWithCM`` only means that no violation was seen on
the sampled grid; it is not a proof.  :func:`sign_region_map` scans the
sign of a closed-form density over a two-parameter grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from .errors import CMKineticError, DomainError
from .relaxation import ModelKind, ModelParams, phi, phi_laplace
from .specfun import kilbas_saigo_stretched, mittag_leffler2, schneider_F
from .spectral import (
    DensityKind,
    SpectralDensity,
    TabulatedTransform,
    closed_form_density,
    model_density,
    schneider_density,
)

__all__ = [
    "Verdict",
    "Criterion",
    "CellSign",
    "Witness",
    "CMReport",
    "SignRegionMap",
    "HalfPlaneSpec",
    "Candidate",
    "cm_check_derivatives",
    "bernstein_check",
    "cm_check_spectral",
    "halfplane_check",
    "sign_region_map",
    "default_r_grid",
    "model_candidate",
    "known_cm_battery",
    "known_violation_battery",
]

RealFunction = Callable[[float], float]
Transform = Callable[[complex], complex]

N_MAX_LIMIT = 6
H0_LOW = 1e-2
H0_HIGH = 5e-2
DERIVATIVE_TOL = 1e-6
DENSITY_REL_TOL = 1e-12
HALFPLANE_TOL = 1e-12
DECAY_RATIO = 1e-2


class Verdict(str, Enum):
    ConsistentWithCM = "ConsistentWithCM"
    ViolationFound = "ViolationFound"
    Inconclusive = "Inconclusive"


class Criterion(str, Enum):
    DerivativeSigns = "DerivativeSigns"
    SpectralNonneg = "SpectralNonneg"
    HalfPlaneProps = "HalfPlaneProps"


class CellSign(str, Enum):
    NonnegEverywhere = "NonnegEverywhere"
    NegativeSomewhere = "NegativeSomewhere"


@dataclass(frozen=True)
class Witness:
    """Where the worst violation occurred.

    ``abscissa`` is a time ``t``, a rate ``r`` or a complex ``s`` depending
    on the criterion; ``test`` names the failing condition (for example
    ``"n=3"`` or ``"upper_half_plane_imag_negative"``).
    """

    params: Mapping[str, float]
    abscissa: float | complex
    test: str

    def as_dict(self) -> dict[str, Any]:
        a = self.abscissa
        abscissa = [a.real, a.imag] if isinstance(a, complex) else a
        return {"params": dict(self.params), "abscissa": abscissa, "test": self.test}


@dataclass(frozen=True)
class CMReport:
    """Outcome of one criterion.

    ``worst_violation`` is the largest amount by which a sampled quantity
    crossed to the wrong side, measured in the units of the quantity;
    ``tolerance`` is the tolerance that applied at that sample.
    ``ViolationFound`` requires ``worst_violation > tolerance``, and a
    witness is present exactly when a violation was found.
    """

    verdict: Verdict
    criterion: Criterion
    worst_violation: float
    tolerance: float
    witness: Witness | None
    grid_meta: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.verdict is Verdict.ViolationFound:
            if self.witness is None or not self.worst_violation > self.tolerance:
                raise ValueError("ViolationFound needs a witness and worst_violation > tolerance")
        elif self.witness is not None:
            raise ValueError("a witness is only recorded for ViolationFound")

    def as_dict(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict.value,
            "criterion": self.criterion.value,
            "worst_violation": self.worst_violation,
            "tolerance": self.tolerance,
            "witness": None if self.witness is None else self.witness.as_dict(),
            "grid_meta": dict(self.grid_meta),
        }


@dataclass(frozen=True)
class SignRegionMap:
    """Sign of a density over a two-parameter grid; ``cells[i][j]`` is ``(axis1[i], axis2[j])``."""

    kind: str
    axis1: str
    grid1: tuple[float, ...]
    axis2: str
    grid2: tuple[float, ...]
    cell_values: tuple[tuple[CellSign, ...], ...]
    min_density_value: tuple[tuple[float, ...], ...]
    fixed_params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        shape = (len(self.grid1), len(self.grid2))
        for matrix in (self.cell_values, self.min_density_value):
            if len(matrix) != shape[0] or any(len(row) != shape[1] for row in matrix):
                raise ValueError("cell matrices must match the axis grids")

    def records(self) -> list[dict[str, Any]]:
        """Cells in grid order as flat records."""
        return [
            {
                self.axis1: v1,
                self.axis2: v2,
                "verdict": self.cell_values[i][j].value,
                "min_K": self.min_density_value[i][j],
            }
            for i, v1 in enumerate(self.grid1)
            for j, v2 in enumerate(self.grid2)
        ]


class _Worst:
    """Track the sample with the largest violation-to-tolerance ratio."""

    def __init__(self) -> None:
        self.ratio = -math.inf
        self.amount = 0.0
        self.tol = 0.0
        self.where: Any = None
        self.test = ""

    def offer(self, amount: float, tol: float, where: Any, test: str) -> None:
        ratio = amount / tol
        if ratio > self.ratio:
            self.ratio, self.amount, self.tol, self.where, self.test = ratio, amount, tol, where, test

    def report(
        self,
        criterion: Criterion,
        params: Mapping[str, float],
        meta: dict[str, Any],
        failures: list[str],
        default_tol: float,
    ) -> CMReport:
        if self.ratio > 1.0:
            witness = Witness(dict(params), self.where, self.test)
            return CMReport(Verdict.ViolationFound, criterion, self.amount, self.tol, witness, meta)
        if failures:
            meta = {**meta, "evaluation_failures": failures}
        verdict = Verdict.Inconclusive if failures or self.where is None else Verdict.ConsistentWithCM
        amount = max(self.amount, 0.0) if self.where is not None else 0.0
        tol = self.tol if self.where is not None else default_tol
        return CMReport(verdict, criterion, amount, tol, None, meta)


# ------------------------------------------------------------- derivatives


def _stencil(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Offsets (in steps) and weights of the central ``n``-th difference."""
    k = np.arange(n + 1)
    offsets = k - 0.5 * n
    weights = np.array([(-1) ** (n - j) * math.comb(n, j) for j in k], dtype=float)
    return offsets, weights


def _step_factor(n: int, h0: float, h0_high: float) -> float:
    return h0 if n <= 4 else h0_high


def _derivative_table(
    f: RealFunction,
    t_grid: Sequence[float],
    n_max: int,
    h0: float,
    h0_high: float,
    failures: list[str],
):
    """Yield ``(t, n, f(t), d^n f(t))`` for each grid point and order ``0..n_max``."""
    cache: dict[float, float] = {}

    def value(x: float) -> float:
        if x not in cache:
            cache[x] = float(f(x))
        return cache[x]

    for t in t_grid:
        try:
            ft = value(t)
        except (CMKineticError, ArithmeticError) as exc:
            failures.append(f"t={t!r}: {exc}")
            continue
        for n in range(n_max + 1):
            if n == 0:
                yield t, 0, ft, ft
                continue
            h = _step_factor(n, h0, h0_high) * t
            offsets, weights = _stencil(n)
            try:
                samples = [value(t + o * h) for o in offsets]
            except (CMKineticError, ArithmeticError) as exc:
                failures.append(f"t={t!r}, n={n}: {exc}")
                continue
            yield t, n, ft, math.fsum(w * s for w, s in zip(weights, samples)) / h**n


def _check_grid(t_grid: Sequence[float], n_max: int, h0: float, h0_high: float) -> list[float]:
    if not 0 <= n_max <= N_MAX_LIMIT:
        raise DomainError(f"n_max must lie in [0, {N_MAX_LIMIT}], got {n_max}")
    grid = [float(t) for t in t_grid]
    if not grid:
        raise DomainError("empty t grid")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("t grid must be strictly increasing")
    widest = max(0.5 * n * _step_factor(n, h0, h0_high) for n in range(n_max + 1))
    if min(grid) * (1.0 - widest) <= 0.0:
        raise DomainError("derivative stencils reach t <= 0; raise t_min or lower the step")
    return grid


def _derivative_tol(n: int, ft: float) -> float:
    return DERIVATIVE_TOL * max(1.0, abs(ft)) * 10.0 ** (n - 1)


def cm_check_derivatives(
    f: RealFunction,
    t_grid: Sequence[float],
    n_max: int = N_MAX_LIMIT,
    *,
    h0: float = H0_LOW,
    h0_high: float = H0_HIGH,
    params: Mapping[str, float] | None = None,
) -> CMReport:
    """Sample ``(-1)^n f^(n)(t) >= 0`` for ``n = 0..n_max`` on ``t_grid``.

    Derivatives are central differences with relative step ``h = h0 t``
    (``h0_high t`` for ``n >= 5``).  A sample violates when
    ``(-1)^n f^(n)(t) < -tol_n`` with
    ``tol_n = 1e-6 max(1, |f(t)|) 10^(n-1)``.

    Raises
    ------
    DomainError
        If ``n_max`` is outside ``[0, 6]``, the grid is not increasing, or a
        stencil reaches ``t <= 0``.
    """
    grid = _check_grid(t_grid, n_max, h0, h0_high)
    failures: list[str] = []
    worst = _Worst()
    for t, n, ft, dn in _derivative_table(f, grid, n_max, h0, h0_high, failures):
        signed = dn if n % 2 == 0 else -dn
        if not math.isfinite(signed):
            failures.append(f"t={t!r}, n={n}: non-finite derivative")
            continue
        worst.offer(-signed, _derivative_tol(n, ft), t, f"n={n}")
    meta = _derivative_meta(grid, n_max, h0, h0_high)
    return worst.report(Criterion.DerivativeSigns, params or {}, meta, failures, DERIVATIVE_TOL)


def bernstein_check(
    f: RealFunction,
    t_grid: Sequence[float],
    n_max: int = N_MAX_LIMIT,
    *,
    h0: float = H0_LOW,
    h0_high: float = H0_HIGH,
    params: Mapping[str, float] | None = None,
) -> CMReport:
    """Check that ``g = 1 - f`` is a Bernstein function on ``t_grid``.

    Requires ``0 < f(t) <= 1`` and ``(-1)^n g^(n)(t) <= tol_n`` for
    ``n = 1..n_max`` (same differences and tolerances as
    :func:`cm_check_derivatives`).
    """
    grid = _check_grid(t_grid, n_max, h0, h0_high)
    failures: list[str] = []
    worst = _Worst()

    def g(t: float) -> float:
        return 1.0 - f(t)

    for t, n, ft, dn in _derivative_table(g, grid, n_max, h0, h0_high, failures):
        f_value = 1.0 - ft
        if n == 0:
            range_tol = DERIVATIVE_TOL * 1e-1
            worst.offer(f_value - 1.0, range_tol, t, "f<=1")
            worst.offer(-f_value, range_tol, t, "f>0")
            continue
        signed = dn if n % 2 == 0 else -dn
        if not math.isfinite(signed):
            failures.append(f"t={t!r}, n={n}: non-finite derivative")
            continue
        worst.offer(signed, _derivative_tol(n, f_value), t, f"n={n}")
    meta = {**_derivative_meta(grid, n_max, h0, h0_high), "function": "1 - f"}
    return worst.report(Criterion.DerivativeSigns, params or {}, meta, failures, DERIVATIVE_TOL)


def _derivative_meta(grid: list[float], n_max: int, h0: float, h0_high: float) -> dict[str, Any]:
    return {
        "t_min": grid[0],
        "t_max": grid[-1],
        "t_count": len(grid),
        "n_max": n_max,
        "h0": h0,
        "h0_high_order": h0_high,
        "tol_rule": "1e-6*max(1,|f|)*10^(n-1)",
    }


# ----------------------------------------------------------------- spectral


def cm_check_spectral(
    density: SpectralDensity | Callable[[float], float],
    r_grid: Sequence[float],
    *,
    rel_tol: float = DENSITY_REL_TOL,
    params: Mapping[str, float] | None = None,
) -> CMReport:
    """Check ``K(r) >= -rel_tol * max|K|`` on ``r_grid`` and that point masses are positive."""
    grid = [float(r) for r in r_grid]
    if not grid or min(grid) <= 0:
        raise DomainError("r grid must be nonempty and positive")
    failures: list[str] = []
    values = []
    for r in grid:
        try:
            values.append(float(density(r)))
        except (CMKineticError, ArithmeticError) as exc:
            failures.append(f"r={r!r}: {exc}")
            values.append(math.nan)
    finite = [abs(v) for v in values if math.isfinite(v)]
    atoms = density.atoms if isinstance(density, SpectralDensity) else ()
    scale = max(finite + [w for _, w in atoms], default=0.0)
    tol = rel_tol * scale if scale > 0 else rel_tol
    worst = _Worst()
    for r, v in zip(grid, values):
        if math.isnan(v):
            continue
        worst.offer(-v, tol, r, "K>=0")
    for loc, w in atoms:
        worst.offer(-w, tol, loc, "atom>=0")
    meta = {
        "r_min": grid[0],
        "r_max": grid[-1],
        "r_count": len(grid),
        "rel_tol": rel_tol,
        "atoms": [list(a) for a in atoms],
    }
    return worst.report(Criterion.SpectralNonneg, params or {}, meta, failures, tol)


# --------------------------------------------------------------- half plane


@dataclass(frozen=True)
class HalfPlaneSpec:
    """Sampling of ``s = rho e^{i phi}`` for :func:`halfplane_check`."""

    rho_min: float = 1e-2
    rho_max: float = 1e3
    n_rho: int = 40
    n_phi: int = 36
    tol: float = HALFPLANE_TOL
    decay_ratio: float = DECAY_RATIO

    def rhos(self) -> np.ndarray:
        return np.logspace(math.log10(self.rho_min), math.log10(self.rho_max), self.n_rho)

    def phis(self) -> np.ndarray:
        # interior angles only: the positive axis is sampled separately
        return math.pi * np.arange(1, self.n_phi + 1) / (self.n_phi + 1)


def halfplane_check(
    transform: Transform,
    spec: HalfPlaneSpec | None = None,
    *,
    params: Mapping[str, float] | None = None,
) -> CMReport:
    """Sample the sign conditions on the Laplace transform ``F`` of a CM function.

    Checked: ``F`` real on the positive axis, decay ``|F(x_max)| <=
    decay_ratio |F(x_min)|``, ``Im F(s) <= tol`` and ``Im(s F(s)) >= -tol``
    in the upper half plane, and ``F(x) >= -tol`` on the positive axis.
    Analytic continuation to the cut plane cannot be sampled and is recorded
    as assumed.
    """
    spec = spec or HalfPlaneSpec()
    rhos, phis = spec.rhos(), spec.phis()
    worst = _Worst()
    failures: list[str] = []
    axis_values = []
    for x in rhos:
        value = complex(transform(complex(x, 0.0)))
        axis_values.append(value)
        worst.offer(abs(value.imag), spec.tol, complex(x, 0.0), "real_on_positive_axis")
        worst.offer(-value.real, spec.tol, complex(x, 0.0), "nonneg_on_positive_axis")
    first, last = abs(axis_values[0]), abs(axis_values[-1])
    if first > 0:
        worst.offer(last / first, spec.decay_ratio, complex(rhos[-1], 0.0), "decay")
    else:
        failures.append("F vanishes at the smallest sampled x; decay ratio undefined")
    for rho in rhos:
        for ang in phis:
            s = complex(rho * math.cos(ang), rho * math.sin(ang))
            value = complex(transform(s))
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                failures.append(f"s={s!r}: non-finite transform value")
                continue
            worst.offer(value.imag, spec.tol, s, "upper_half_plane_imag_negative")
            worst.offer(-(s * value).imag, spec.tol, s, "s_times_F_imag_nonneg")
    meta = {
        "rho_min": spec.rho_min,
        "rho_max": spec.rho_max,
        "n_rho": spec.n_rho,
        "n_phi": spec.n_phi,
        "tol": spec.tol,
        "decay_ratio": spec.decay_ratio,
        "assumed": ["analytic_continuation"],
    }
    return worst.report(Criterion.HalfPlaneProps, params or {}, meta, failures, spec.tol)


# --------------------------------------------------------------- sign maps


def default_r_grid(kind: DensityKind | str, count: int = 400) -> np.ndarray:
    """Log grid on ``[1e-3, 1e3]``; HNF adds points down to ``1e-8``."""
    grid = np.logspace(-3, 3, count)
    if DensityKind(kind) is DensityKind.HNF:
        grid = np.concatenate([np.logspace(-8, -3, count // 4, endpoint=False), grid])
    return grid


def sign_region_map(
    kind: DensityKind | str,
    fixed_params: Mapping[str, float],
    axis_grids: Sequence[tuple[str, Sequence[float]]],
    r_grid: Sequence[float] | None = None,
    *,
    rel_tol: float = DENSITY_REL_TOL,
) -> SignRegionMap:
    """Scan the closed-form density of ``kind`` (CCF or HNF) over two parameters.

    A cell is ``NegativeSomewhere`` when its minimum density on ``r_grid``
    is below ``-rel_tol`` times the largest ``|K|`` in that cell.
    """
    kind = DensityKind(kind)
    if kind not in (DensityKind.CCF, DensityKind.HNF):
        raise DomainError(f"sign maps are defined for CCF and HNF, not {kind.value}")
    if len(axis_grids) != 2:
        raise DomainError("exactly two axes are required")
    (name1, grid1), (name2, grid2) = axis_grids
    for name in (name1, name2, *fixed_params):
        if name not in ("alpha", "beta", "gamma"):
            raise DomainError(f"unknown parameter axis {name!r}")
    rs = np.asarray(default_r_grid(kind) if r_grid is None else r_grid, dtype=float)
    cells, minima = [], []
    for v1 in grid1:
        row_cells, row_min = [], []
        for v2 in grid2:
            values = {**fixed_params, name1: float(v1), name2: float(v2)}
            density = closed_form_density(kind, ModelParams(**values))
            k = np.array([density(float(r)) for r in rs])
            low = float(k.min())
            scale = float(np.abs(k).max())
            negative = low < -rel_tol * scale
            row_cells.append(CellSign.NegativeSomewhere if negative else CellSign.NonnegEverywhere)
            row_min.append(low)
        cells.append(tuple(row_cells))
        minima.append(tuple(row_min))
    return SignRegionMap(
        kind.value,
        name1,
        tuple(float(v) for v in grid1),
        name2,
        tuple(float(v) for v in grid2),
        tuple(cells),
        tuple(minima),
        dict(fixed_params),
    )


# ----------------------------------------------------------------- batteries


@dataclass(frozen=True)
class Candidate:
    """A function with everything the three criteria need.

    ``transform`` may be expensive to build (a tabulated density), so it is
    created on demand by ``make_transform``.
    """

    label: str
    params: Mapping[str, float]
    f: RealFunction
    density: SpectralDensity
    make_transform: Callable[[], Transform]


def model_candidate(kind: ModelKind | str, params: ModelParams) -> Candidate:
    """Candidate for the relaxation function ``phi_kind``."""
    kind = ModelKind(kind)
    values = {name: getattr(params, name) for name in sorted(kind.reads)}
    return Candidate(
        f"phi_{kind.value}",
        values,
        lambda t: phi(kind, params, t),
        model_density(kind, params),
        lambda: (lambda s: phi_laplace(kind, params, s)),
    )


def known_cm_battery() -> list[Candidate]:
    """Functions that are completely monotone, each with density and transform."""
    out = [model_candidate(ModelKind.D, ModelParams())]
    for a in (0.25, 0.5, 0.75, 1.0):
        out.append(
            Candidate(
                "E_a(-t^a)",
                {"alpha": a},
                lambda t, a=a: mittag_leffler2(a, 1.0, -(t**a)).value,
                closed_form_density(DensityKind.ML3, ModelParams(alpha=a), lam=1.0),
                lambda a=a: (lambda s: s ** (a - 1.0) / (s**a + 1.0)),
            )
        )
    for a, b in ((0.5, 0.5), (0.5, 0.75), (0.25, 1.0), (0.75, 1.5)):
        density = schneider_density(a, b)
        out.append(
            Candidate(
                "Gamma(b)E_a,b(-t)",
                {"alpha": a, "beta": b},
                lambda t, a=a, b=b: schneider_F(a, b, t),
                density,
                lambda density=density: TabulatedTransform(density),
            )
        )
    fixtures = (0.3, 0.7)
    for b in fixtures:
        out.append(model_candidate(ModelKind.CD, ModelParams(beta=b)))
    for a in fixtures:
        for b in fixtures:
            out.append(model_candidate(ModelKind.HN, ModelParams(alpha=a, beta=b)))
    for g in (0.3, 0.5, 0.9):
        density = closed_form_density(DensityKind.KilbasSaigo, ModelParams(gamma=g))
        out.append(
            Candidate(
                "exp(-t^g/g)",
                {"gamma": g},
                lambda t, g=g: kilbas_saigo_stretched(g - 1.0, t),
                density,
                lambda density=density: TabulatedTransform(density),
            )
        )
    return out


def known_violation_battery() -> list[Candidate]:
    """Fractional relaxation functions that are not completely monotone."""
    return [
        model_candidate(ModelKind.DF, ModelParams(gamma=0.3)),
        model_candidate(ModelKind.DF, ModelParams(gamma=0.9)),
        model_candidate(ModelKind.CDF, ModelParams(beta=0.5, gamma=0.5)),
        model_candidate(ModelKind.CDF, ModelParams(beta=0.3, gamma=0.9)),
        model_candidate(ModelKind.CCF, ModelParams(alpha=0.9, gamma=0.4)),
        model_candidate(ModelKind.CCF, ModelParams(alpha=0.7, gamma=0.3)),
    ]
