"""Command-line front end: ``cmkinetic <command> [options]``.

Commands
--------
eval          relaxation function on a time grid (``t,phi,acc_est``)
spectrum      spectral density on a rate grid (``r,K,route,err_est``)
cm-check      complete-monotonicity criteria for one relaxation function
reconstruct   Laplace integral of the density compared with direct evaluation
region-map    sign of the CCF/HNF density over two parameters
reduce-check  parameter reductions between the relaxation functions

Exit codes: 0 success (or ``ConsistentWithCM``), 1 invalid configuration,
2 numerical failure, 3 violation found (or a failed reduction),
4 inconclusive.  ``CMK_THREADS`` caps the number of worker processes used
for grid evaluation; output order never depends on it.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from . import __version__
from .cm_analysis import (
    CMReport,
    HalfPlaneSpec,
    Verdict,
    bernstein_check,
    cm_check_derivatives,
    cm_check_spectral,
    halfplane_check,
    model_candidate,
    sign_region_map,
)
from .errors import CMKineticError, NonConvergence, QuadratureFailure
from .relaxation import ModelKind, ModelParams, phi, phi_laplace, phi_with_error
from .spectral import (
    DensityKind,
    QuadratureSpec,
    SpectralRoute,
    bernstein_reconstruct,
    closed_form_K,
    closed_form_density,
    model_density,
    titchmarsh_numeric,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERIC = 2
EXIT_VIOLATION = 3
EXIT_INCONCLUSIVE = 4

COMMANDS = ("eval", "spectrum", "cm-check", "reconstruct", "region-map", "reduce-check")

COLUMNS = {
    "eval": ("t", "phi", "acc_est"),
    "spectrum": ("r", "K", "route", "err_est"),
    "cm-check": ("criterion", "verdict", "worst_violation", "tolerance", "witness_abscissa", "witness_test"),
    "reconstruct": ("t", "f_rec", "err_est", "phi", "abs_diff"),
    "region-map": ("axis1", "axis2", "verdict", "min_K"),
    "reduce-check": ("identity", "max_abs_diff", "points", "passed"),
}


class ConfigError(ValueError):
    """Invalid command-line configuration; the message names the field."""


class NumericFailure(RuntimeError):
    """A numerical routine failed at a given abscissa."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


# -------------------------------------------------------------------- grids


@dataclass(frozen=True)
class Grid:
    min: float
    max: float
    count: int
    spacing: str = "linear"

    def __post_init__(self) -> None:
        if not (math.isfinite(self.min) and math.isfinite(self.max)):
            raise ConfigError("grid: bounds must be finite")
        if not self.min < self.max:
            raise ConfigError(f"grid.min ({self.min}) must be < grid.max ({self.max})")
        if self.count < 2:
            raise ConfigError(f"grid.count ({self.count}) must be >= 2")
        if self.spacing not in ("linear", "log"):
            raise ConfigError(f"grid.spacing must be linear or log, got {self.spacing!r}")
        if self.spacing == "log" and self.min <= 0:
            raise ConfigError("grid.min must be > 0 for a log grid")

    def values(self) -> list[float]:
        if self.spacing == "log":
            pts = np.logspace(math.log10(self.min), math.log10(self.max), self.count)
            pts[0], pts[-1] = self.min, self.max
        else:
            pts = np.linspace(self.min, self.max, self.count)
        return [float(p) for p in pts]

    def meta(self) -> dict[str, Any]:
        return {"min": self.min, "max": self.max, "count": self.count, "spacing": self.spacing}


def _floats(text: str, n: int, what: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != n:
        raise ConfigError(f"{what}: expected {n} colon-separated numbers, got {text!r}")
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise ConfigError(f"{what}: {exc}") from None


def parse_grid(step_grid: str | None, lin_grid: str | None, log_grid: str | None, default: Grid) -> Grid:
    """Build a grid from ``MIN:STEP:MAX``, ``MIN:MAX:COUNT`` (linear) or ``MIN:MAX:COUNT`` (log)."""
    given = [g for g in (step_grid, lin_grid, log_grid) if g is not None]
    if len(given) > 1:
        raise ConfigError("grid: give only one of --grid, --grid-lin, --grid-log")
    if step_grid is not None:
        lo, step, hi = _floats(step_grid, 3, "grid")
        if not step > 0:
            raise ConfigError(f"grid.step must be > 0, got {step}")
        count = int(round((hi - lo) / step)) + 1
        return Grid(lo, hi, count, "linear")
    spec = lin_grid if lin_grid is not None else log_grid
    if spec is None:
        return default
    lo, hi, count = _floats(spec, 3, "grid")
    if count != int(count):
        raise ConfigError(f"grid.count must be an integer, got {count}")
    return Grid(lo, hi, int(count), "linear" if lin_grid is not None else "log")


def parse_steps(text: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    try:
        n1, n2 = (int(p) for p in parts)
    except ValueError:
        raise ConfigError(f"steps: expected NxM, got {text!r}") from None
    if n1 < 1 or n2 < 1:
        raise ConfigError(f"steps must be positive, got {text!r}")
    return n1, n2


# ------------------------------------------------------------------- output


def _fmt(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def write_output(
    command: str,
    records: list[dict[str, Any]],
    meta: dict[str, Any],
    fmt: str,
    out: str | None,
) -> None:
    """Write records as CSV (header plus one row per record) or JSON."""
    if fmt == "json":
        text = json.dumps({"command": command, "grid_meta": meta, "records": records}, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        columns = COLUMNS[command]
        writer.writerow(columns)
        for rec in records:
            writer.writerow([_fmt(rec[c]) for c in columns])
        text = buf.getvalue()
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------- parallel helper


def _workers() -> int:
    raw = os.environ.get("CMK_THREADS", "")
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"CMK_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"CMK_THREADS must be >= 1, got {n}")
    return n


def ordered_map(func: Callable[[Any], Any], items: Sequence[Any]) -> list[Any]:
    """``map`` over ``items`` in order, in worker processes when ``CMK_THREADS > 1``."""
    n = _workers()
    if n == 1 or len(items) < 2:
        return [func(item) for item in items]
    with ProcessPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(func, items, chunksize=max(1, len(items) // (4 * n))))


# ----------------------------------------------------------------- commands


def _params(ns: argparse.Namespace) -> ModelParams:
    try:
        return ModelParams(alpha=ns.alpha, beta=ns.beta, gamma=ns.gamma, sigma=ns.sigma)
    except CMKineticError as exc:
        raise ConfigError(str(exc)) from None


def _model_kind(text: str | None) -> ModelKind:
    if text is None:
        raise ConfigError("kind: --kind is required")
    try:
        return ModelKind(text)
    except ValueError:
        raise ConfigError(f"kind: expected one of {[k.value for k in ModelKind]}, got {text!r}") from None


def _param_meta(kind: str, params: ModelParams, extra: dict[str, Any] | None = None) -> dict[str, Any]:
    meta = {
        "kind": kind,
        "alpha": params.alpha,
        "beta": params.beta,
        "gamma": params.gamma,
        "sigma": params.sigma,
        "version": __version__,
    }
    meta.update(extra or {})
    return meta


def _eval_point(job: tuple[ModelKind, ModelParams, float]) -> tuple[float, float]:
    kind, params, t = job
    try:
        return phi_with_error(kind, params, t)
    except (NonConvergence, QuadratureFailure, ArithmeticError) as exc:
        raise NumericFailure(f"t={t!r}: {exc}") from exc


def cmd_eval(ns: argparse.Namespace) -> tuple[list[dict[str, Any]], dict[str, Any], int]:
    kind = _model_kind(ns.kind)
    params = _params(ns)
    grid = parse_grid(ns.grid, ns.grid_lin, ns.grid_log, Grid(0.0, 10.0, 101))
    if kind.fractional and params.gamma < 1.0 and grid.min <= 0:
        raise ConfigError(f"grid.min must be > 0 for fractional kind {kind.value} with gamma < 1")
    if grid.min < 0:
        raise ConfigError("grid.min must be >= 0")
    ts = grid.values()
    results = ordered_map(_eval_point, [(kind, params, t) for t in ts])
    records = [{"t": t, "phi": v, "acc_est": e} for t, (v, e) in zip(ts, results)]
    return records, _param_meta(kind.value, params, {"grid": grid.meta()}), EXIT_OK


def _spectrum_density(ns: argparse.Namespace, params: ModelParams):
    """Density for ``--kind`` (a density kind or a relaxation kind) and its transform."""
    text = ns.kind
    if text in ("ML3", "KilbasSaigo"):
        dkind = DensityKind(text)
        if dkind is DensityKind.ML3:
            lam = ns.lam
            if lam is None or not 0 < lam <= 1:
                raise ConfigError("lambda: --lambda in (0, 1] is required for ML3")
            a = params.alpha
            return (
                closed_form_density(dkind, params, lam=lam),
                lambda s: s ** (a * lam - 1.0) / (s**a + 1.0) ** lam,
                lambda r: closed_form_K(dkind, params, r, lam=lam),
            )
        if dkind is DensityKind.KilbasSaigo:
            if not 0 < params.gamma < 1:
                raise ConfigError("gamma: KilbasSaigo needs 0 < gamma < 1")
            return None, None, lambda r: closed_form_K(dkind, params, r)
    kind = _model_kind(text)
    if kind is ModelKind.CD and ns.cd_exponent != "derived":
        density = closed_form_density(DensityKind.CD, params, cd_exponent=ns.cd_exponent)
    else:
        density = model_density(kind, params)
    return density, (lambda s: phi_laplace(kind, params, s)), None


def _spectrum_point(job) -> tuple[float, float, str, float]:
    ns_kind, params, lam, cd_exponent, route, r = job
    ns = argparse.Namespace(kind=ns_kind, lam=lam, cd_exponent=cd_exponent)
    density, transform, sampler = _spectrum_density(ns, params)
    try:
        if route == "numeric":
            if transform is None:
                raise ConfigError(f"route: no Laplace transform available for {ns_kind}")
            sample = titchmarsh_numeric(transform, r)
            return r, sample.k_value, sample.route.value, sample.est_error
        if sampler is not None:
            sample = sampler(r)
            return r, sample.k_value, sample.route.value, sample.est_error
        value = float(density(r))
        return r, value, SpectralRoute.ClosedForm.value, 8 * np.finfo(float).eps * abs(value)
    except (NonConvergence, QuadratureFailure, ArithmeticError) as exc:
        raise NumericFailure(f"r={r!r}: {exc}") from exc


def cmd_spectrum(ns: argparse.Namespace):
    params = _params(ns)
    _spectrum_density(ns, params)  # validates kind and parameters up front
    grid = parse_grid(ns.grid, ns.grid_lin, ns.grid_log, Grid(1e-2, 1e2, 200, "log"))
    if grid.min <= 0:
        raise ConfigError("grid.min must be > 0 for a spectrum")
    jobs = [(ns.kind, params, ns.lam, ns.cd_exponent, ns.route, r) for r in grid.values()]
    rows = ordered_map(_spectrum_point, jobs)
    records = [{"r": r, "K": k, "route": route, "err_est": e} for r, k, route, e in rows]
    extra = {"grid": grid.meta(), "lambda": ns.lam, "route": ns.route, "cd_exponent": ns.cd_exponent}
    return records, _param_meta(ns.kind, params, extra), EXIT_OK


def _cm_exit(reports: Iterable[CMReport]) -> int:
    verdicts = [r.verdict for r in reports]
    if Verdict.ViolationFound in verdicts:
        return EXIT_VIOLATION
    if Verdict.Inconclusive in verdicts:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_cm_check(ns: argparse.Namespace):
    kind = _model_kind(ns.kind)
    params = _params(ns)
    grid = parse_grid(ns.grid, ns.grid_lin, ns.grid_log, Grid(0.1, 10.0, 40, "log"))
    if grid.min <= 0:
        raise ConfigError("grid.min must be > 0 for cm-check")
    candidate = model_candidate(kind, params)
    wanted = ("derivatives", "spectral", "halfplane") if ns.criterion == "all" else (ns.criterion,)
    reports: list[CMReport] = []
    for criterion in wanted:
        if criterion == "derivatives":
            reports.append(cm_check_derivatives(candidate.f, grid.values(), ns.n_max, params=candidate.params))
        elif criterion == "bernstein":
            reports.append(bernstein_check(candidate.f, grid.values(), ns.n_max, params=candidate.params))
        elif criterion == "spectral":
            r_grid = np.logspace(-3, 3, 400)
            reports.append(cm_check_spectral(candidate.density, r_grid, params=candidate.params))
        else:
            reports.append(halfplane_check(candidate.make_transform(), HalfPlaneSpec(), params=candidate.params))
    records = []
    for rep in reports:
        w = rep.witness
        abscissa: Any = ""
        if w is not None:
            abscissa = w.abscissa if not isinstance(w.abscissa, complex) else f"{w.abscissa.real!r}{w.abscissa.imag:+.17g}j"
        records.append(
            {
                "criterion": rep.criterion.value,
                "verdict": rep.verdict.value,
                "worst_violation": rep.worst_violation,
                "tolerance": rep.tolerance,
                "witness_abscissa": abscissa,
                "witness_test": "" if w is None else w.test,
                "report": rep.as_dict(),
            }
        )
    meta = _param_meta(kind.value, params, {"grid": grid.meta(), "n_max": ns.n_max})
    return records, meta, _cm_exit(reports)


def _reconstruct_point(job) -> dict[str, Any]:
    kind, params, t, quad = job
    density = model_density(kind, params)
    try:
        value, err = bernstein_reconstruct(density, quad, t, include_atoms=True, full_output=True)
        direct = phi(kind, params, t)
    except (NonConvergence, QuadratureFailure, ArithmeticError) as exc:
        raise NumericFailure(f"t={t!r}: {exc}") from exc
    return {"t": t, "f_rec": value, "err_est": err, "phi": direct, "abs_diff": abs(value - direct)}


def cmd_reconstruct(ns: argparse.Namespace):
    kind = _model_kind(ns.kind)
    params = _params(ns)
    grid = parse_grid(ns.grid, ns.grid_lin, ns.grid_log, Grid(0.5, 2.0, 4))
    if grid.min <= 0:
        raise ConfigError("grid.min must be > 0 for reconstruct")
    if not model_density(kind, params).integrable:
        raise ConfigError(f"kind: the {kind.value} density is not integrable for these parameters")
    quad = QuadratureSpec(abs_tol=ns.abs_tol, rel_tol=ns.rel_tol)
    records = ordered_map(_reconstruct_point, [(kind, params, t, quad) for t in grid.values()])
    extra = {"grid": grid.meta(), "abs_tol": ns.abs_tol, "rel_tol": ns.rel_tol}
    return records, _param_meta(kind.value, params, extra), EXIT_OK


def cmd_region_map(ns: argparse.Namespace):
    if ns.kind is None:
        raise ConfigError("kind: --kind is required")
    try:
        kind = DensityKind(ns.kind)
    except ValueError:
        raise ConfigError(f"kind: region-map supports CCF and HNF, got {ns.kind!r}") from None
    if kind not in (DensityKind.CCF, DensityKind.HNF):
        raise ConfigError(f"kind: region-map supports CCF and HNF, got {ns.kind!r}")
    axes = [a.strip() for a in ns.axes.split(",")]
    if len(axes) != 2 or len(set(axes)) != 2 or any(a not in ("alpha", "beta", "gamma") for a in axes):
        raise ConfigError(f"axes: expected two distinct names from alpha,beta,gamma, got {ns.axes!r}")
    n1, n2 = parse_steps(ns.steps)
    lo, hi = _floats(ns.range, 2, "range")
    if not 0 < lo <= hi <= 1:
        raise ConfigError(f"range must satisfy 0 < lo <= hi <= 1, got {ns.range!r}")
    grid1 = [float(v) for v in np.linspace(lo, hi, n1)]
    grid2 = [float(v) for v in np.linspace(lo, hi, n2)]
    fixed_names = [n for n in ("alpha", "beta", "gamma") if n not in axes]
    fixed = {n: getattr(ns, n) for n in fixed_names}
    for n, v in fixed.items():
        if not 0 < v <= 1:
            raise ConfigError(f"{n}={v!r} must lie in (0, 1]")
    result = sign_region_map(kind, fixed, [(axes[0], grid1), (axes[1], grid2)])
    records = [
        {"axis1": rec[axes[0]], "axis2": rec[axes[1]], "verdict": rec["verdict"], "min_K": rec["min_K"]}
        for rec in result.records()
    ]
    meta = {
        "kind": kind.value,
        "axis1": axes[0],
        "axis2": axes[1],
        "grid1": grid1,
        "grid2": grid2,
        "fixed": fixed,
        "r_grid": "log [1e-3, 1e3], 400 points" + ("; plus 100 points on [1e-8, 1e-3)" if kind is DensityKind.HNF else ""),
        "rel_tol": 1e-12,
        "version": __version__,
    }
    return records, meta, EXIT_OK


REDUCTIONS: tuple[tuple[str, ModelKind, Callable[[ModelParams], ModelParams], ModelKind, Callable[[ModelParams], ModelParams]], ...] = (
    ("HN(beta=1)=CC", ModelKind.HN, lambda p: ModelParams(p.alpha, 1.0), ModelKind.CC, lambda p: ModelParams(p.alpha)),
    ("HN(alpha=1)=CD", ModelKind.HN, lambda p: ModelParams(1.0, p.beta), ModelKind.CD, lambda p: ModelParams(beta=p.beta)),
    ("HN(alpha=beta=1)=D", ModelKind.HN, lambda p: ModelParams(1.0, 1.0), ModelKind.D, lambda p: ModelParams()),
    ("CCF(alpha=1)=DF", ModelKind.CCF, lambda p: ModelParams(1.0, gamma=p.gamma), ModelKind.DF, lambda p: ModelParams(gamma=p.gamma)),
    ("CCF(gamma=1)=CC", ModelKind.CCF, lambda p: ModelParams(p.alpha, gamma=1.0), ModelKind.CC, lambda p: ModelParams(p.alpha)),
    ("HNF(gamma=1)=HN", ModelKind.HNF, lambda p: ModelParams(p.alpha, p.beta, 1.0), ModelKind.HN, lambda p: ModelParams(p.alpha, p.beta)),
    ("HNF(alpha=1)=CDF", ModelKind.HNF, lambda p: ModelParams(1.0, p.beta, p.gamma), ModelKind.CDF, lambda p: ModelParams(beta=p.beta, gamma=p.gamma)),
    ("CDF(gamma=1)=CD", ModelKind.CDF, lambda p: ModelParams(beta=p.beta, gamma=1.0), ModelKind.CD, lambda p: ModelParams(beta=p.beta)),
)


def reduction_points(n: int, seed: int) -> list[tuple[float, ModelParams]]:
    """``n`` reproducible random ``(t, params)`` points with ``t`` in ``(0, 10]``."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        a, b, g = rng.uniform(0.05, 1.0, 3)
        t = float(rng.uniform(0.01, 10.0))
        out.append((t, ModelParams(float(a), float(b), float(g))))
    return out


def reduction_diff(index: int, t: float, p: ModelParams) -> float:
    """``|lhs - rhs|`` of reduction ``index`` at ``(t, p)``."""
    _, k1, f1, k2, f2 = REDUCTIONS[index]
    return abs(phi(k1, f1(p), t) - phi(k2, f2(p), t))


def cmd_reduce_check(ns: argparse.Namespace):
    if ns.points < 1:
        raise ConfigError(f"points must be >= 1, got {ns.points}")
    pts = reduction_points(ns.points, ns.seed)
    records = []
    code = EXIT_OK
    for i, (name, *_rest) in enumerate(REDUCTIONS):
        try:
            worst = max(reduction_diff(i, t, p) for t, p in pts)
        except (NonConvergence, QuadratureFailure, ArithmeticError) as exc:
            raise NumericFailure(f"{name}: {exc}") from exc
        passed = worst <= ns.tol
        code = code if passed else EXIT_VIOLATION
        records.append({"identity": name, "max_abs_diff": worst, "points": ns.points, "passed": passed})
    meta = {"points": ns.points, "seed": ns.seed, "tol": ns.tol, "t_range": [0.01, 10.0], "version": __version__}
    return records, meta, code


HANDLERS = {
    "eval": cmd_eval,
    "spectrum": cmd_spectrum,
    "cm-check": cmd_cm_check,
    "reconstruct": cmd_reconstruct,
    "region-map": cmd_region_map,
    "reduce-check": cmd_reduce_check,
}


# ------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cmkinetic", description="Relaxation functions, spectral densities and CM checks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p: argparse.ArgumentParser, *, grid: bool = True) -> None:
        p.add_argument("--alpha", type=float, default=1.0)
        p.add_argument("--beta", type=float, default=1.0)
        p.add_argument("--gamma", type=float, default=1.0)
        p.add_argument("--sigma", type=float, default=1.0)
        if grid:
            p.add_argument("--grid", metavar="MIN:STEP:MAX", help="linear grid by step")
            p.add_argument("--grid-lin", metavar="MIN:MAX:COUNT", help="linear grid by count")
            p.add_argument("--grid-log", metavar="MIN:MAX:COUNT", help="logarithmic grid")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", metavar="PATH", help="write here instead of stdout")
        p.add_argument("--config", metavar="JSON", help="JSON file of option defaults; flags override")

    p = sub.add_parser("eval", help="relaxation function phi(t)")
    p.add_argument("--kind", help="required; may come from --config")
    common(p)

    p = sub.add_parser("spectrum", help="spectral density K(r)")
    p.add_argument("--kind", help="ML3, CD, HN, CCF, HNF, KilbasSaigo or a relaxation kind (required)")
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--route", choices=("closed", "numeric"), default="closed")
    p.add_argument("--cd-exponent", choices=("derived", "printed"), default="derived")
    common(p)

    p = sub.add_parser("cm-check", help="complete-monotonicity criteria")
    p.add_argument("--kind", help="required; may come from --config")
    p.add_argument(
        "--criterion", choices=("all", "derivatives", "bernstein", "spectral", "halfplane"), default="all"
    )
    p.add_argument("--n-max", type=int, default=6)
    common(p)

    p = sub.add_parser("reconstruct", help="Laplace integral of the spectral density")
    p.add_argument("--kind", help="required; may come from --config")
    p.add_argument("--abs-tol", type=float, default=1e-10)
    p.add_argument("--rel-tol", type=float, default=1e-9)
    common(p)

    p = sub.add_parser("region-map", help="density sign over two parameters")
    p.add_argument("--kind", help="CCF or HNF (required)")
    p.add_argument("--axes", default="alpha,gamma")
    p.add_argument("--steps", default="9x9", metavar="NxM")
    p.add_argument("--range", default="0.1:0.9", metavar="LO:HI")
    common(p, grid=False)

    p = sub.add_parser("reduce-check", help="parameter reductions between kinds")
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--seed", type=int, default=20240601)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--config", metavar="JSON")
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: Sequence[str]) -> argparse.Namespace:
    ns = parser.parse_args(argv)
    if not getattr(ns, "config", None):
        return ns
    try:
        with open(ns.config, encoding="utf-8") as fh:
            values = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"config: cannot read {ns.config!r}: {exc}") from None
    if not isinstance(values, dict):
        raise ConfigError("config: top level must be a JSON object")
    known = vars(ns)
    defaults = {}
    for key, value in values.items():
        dest = key.replace("-", "_")
        if dest == "lambda":
            dest = "lam"
        if dest not in known or dest in ("command", "config"):
            raise ConfigError(f"config: unknown option {key!r}")
        defaults[dest] = value
    # re-parse so explicit flags still win over the file
    subparser = parser._subparsers._group_actions[0].choices[ns.command]  # type: ignore[union-attr]
    subparser.set_defaults(**defaults)
    return parser.parse_args(argv)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        try:
            ns = _apply_config(parser, argv)
        except SystemExit as exc:  # --help, --version and argparse usage errors
            return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
        records, meta, code = HANDLERS[ns.command](ns)
        write_output(ns.command, records, meta, ns.format, ns.out)
        return code
    except ConfigError as exc:
        print(f"cmkinetic: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericFailure as exc:
        print(f"cmkinetic: numerical failure at {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (NonConvergence, QuadratureFailure) as exc:
        print(f"cmkinetic: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except CMKineticError as exc:
        print(f"cmkinetic: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
