import itertools
import math

import numpy as np
import pytest

import oracles
from cmkinetic.errors import BranchError, DomainError, EvaluationError, QuadratureFailure
from cmkinetic.relaxation import FRACTIONAL, CLASSICAL, ModelKind, ModelParams, phi, phi_laplace
from cmkinetic.specfun import mittag_leffler3, MLOrder
from cmkinetic.spectral import (
    DensityKind,
    HalfPlaneAngle,
    QuadratureSpec,
    QuadScheme,
    SpectralRoute,
    TabulatedTransform,
    bernstein_reconstruct,
    closed_form_K,
    closed_form_density,
    density_integral,
    model_density,
    numeric_density,
    schneider_density,
    stieltjes_transform,
    tanh_sinh,
    theta_and_modulus,
    titchmarsh_numeric,
)

FIXTURE = (0.3, 0.7)
TIGHT = QuadratureSpec(abs_tol=1e-12, rel_tol=1e-10)


def transform_for(kind, alpha, beta, gamma, lam):
    """Laplace transform whose cut density is ``closed_form_K(kind)``."""
    if kind is DensityKind.ML3:
        return lambda s: s ** (alpha * lam - 1) / (s**alpha + 1) ** lam
    if kind is DensityKind.CD:
        return lambda s: (1 - (s + 1) ** -beta) / s
    if kind is DensityKind.HN:
        return lambda s: (1 - (s**alpha + 1) ** -beta) / s
    if kind is DensityKind.CCF:
        return lambda s: s ** (alpha - gamma) / (s**alpha + 1)
    return lambda s: s**-gamma * (1 - (s**alpha + 1) ** -beta)


def fixtures(kind):
    reads = {
        DensityKind.ML3: ("alpha", "lam"),
        DensityKind.CD: ("beta",),
        DensityKind.HN: ("alpha", "beta"),
        DensityKind.CCF: ("alpha", "gamma"),
        DensityKind.HNF: ("alpha", "beta", "gamma"),
    }[kind]
    for values in itertools.product(FIXTURE, repeat=len(reads)):
        point = {"alpha": 1.0, "beta": 1.0, "gamma": 1.0, "lam": None}
        point.update(zip(reads, values))
        yield point


CASES = [(kind, p) for kind in list(DensityKind)[:5] for p in fixtures(kind)]


def case_id(case):
    kind, p = case
    return kind.value + "-" + "-".join(f"{k}{v}" for k, v in p.items() if v not in (None, 1.0))


# ----------------------------------------------------------------- examples


def test_titchmarsh_examples():
    assert titchmarsh_numeric(lambda s: 1 / (s + 1), 0.5).k_value == pytest.approx(0.0, abs=1e-12)
    ccf = titchmarsh_numeric(lambda s: s**-0.5 / (s**0.5 + 1), 1.0)
    assert ccf.k_value == pytest.approx(1 / (2 * math.pi), abs=1e-9)
    assert ccf.route is SpectralRoute.NumericInversion
    cd = titchmarsh_numeric(lambda s: (1 - (s + 1) ** -0.5) / s, 2.0)
    assert cd.k_value == pytest.approx(1 / (2 * math.pi), abs=1e-9)


def test_titchmarsh_errors():
    def on_cut(s):
        raise BranchError("nope")

    with pytest.raises(EvaluationError):
        titchmarsh_numeric(on_cut, 1.0)
    with pytest.raises(DomainError):
        titchmarsh_numeric(lambda s: 1 / s, 0.0)


def test_closed_form_examples():
    assert closed_form_K("HN", ModelParams(1.0, 1.0), 0.5).k_value == 0.0
    assert closed_form_K("CD", ModelParams(beta=0.5), 0.5).k_value == 0.0
    ccf = closed_form_K("CCF", ModelParams(alpha=0.5, gamma=0.5), 1.0)
    assert ccf.k_value == pytest.approx(1 / (2 * math.pi), rel=1e-14)
    assert ccf.route is SpectralRoute.ClosedForm
    # Cole-Davidson above the kink: sin(beta pi) / (pi r (r - 1)^beta)
    cd = closed_form_K("CD", ModelParams(beta=0.5), 2.0).k_value
    assert cd == pytest.approx(1 / (2 * math.pi), rel=1e-14)


def test_closed_form_parameter_checks():
    with pytest.raises(DomainError):
        closed_form_K("ML3", ModelParams(alpha=0.5), 1.0)  # lambda missing
    with pytest.raises(DomainError):
        closed_form_K("ML3", ModelParams(alpha=0.5), 1.0, lam=1.5)
    with pytest.raises(DomainError):
        closed_form_K("HN", ModelParams(0.5, 0.5), 0.0)
    with pytest.raises(DomainError):
        closed_form_K("KilbasSaigo", ModelParams(gamma=1.0), 1.0)


def test_theta_uses_second_quadrant():
    # 1 + r^a cos(a pi) < 0 for a = 0.8 and large r
    theta, big_r = theta_and_modulus(0.8, 100.0)
    x = 1 + 100**0.8 * math.cos(0.8 * math.pi)
    y = 100**0.8 * math.sin(0.8 * math.pi)
    assert x < 0
    assert math.pi / 2 < theta <= math.pi
    assert big_r * math.cos(theta) == pytest.approx(x, rel=1e-14)
    assert big_r * math.sin(theta) == pytest.approx(y, rel=1e-14)


def test_plumbing_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(abs_tol=0.0)
    with pytest.raises(ValueError):
        QuadratureSpec(max_subdivisions=0)
    assert QuadratureSpec(split_points=(3.0, 1.0)).split_points == (1.0, 3.0)
    with pytest.raises(DomainError):
        HalfPlaneAngle(4.0)
    assert HalfPlaneAngle(math.pi).theta == math.pi


# ------------------------------------------------------------ route agreement


@pytest.mark.parametrize("case", CASES, ids=[case_id(c) for c in CASES])
def test_route_agreement(case):
    kind, p = case
    params = ModelParams(p["alpha"], p["beta"], p["gamma"])
    transform = transform_for(kind, p["alpha"], p["beta"], p["gamma"], p["lam"])
    worst = 0.0
    for r in np.logspace(-2, 2, 100):
        if abs(r - 1.0) < 1e-3:
            continue
        closed = closed_form_K(kind, params, r, lam=p["lam"]).k_value
        worst = max(worst, abs(closed - titchmarsh_numeric(transform, r).k_value))
    assert worst <= 1e-6


# ------------------------------------------------------------ reconstruction

RECON = [(k, p) for k, p in CASES if k is not DensityKind.ML3] + [
    (DensityKind.ML3, {"alpha": a, "beta": 1.0, "gamma": 1.0, "lam": 1.0}) for a in FIXTURE
]


def direct_value(kind, p, t):
    params = ModelParams(p["alpha"], p["beta"], p["gamma"])
    if kind is DensityKind.ML3:
        return phi(ModelKind.CC, params, t)
    return phi(ModelKind(kind.value), params, t)


@pytest.mark.parametrize("case", RECON, ids=[case_id(c) for c in RECON])
def test_reconstruction(case):
    kind, p = case
    density = closed_form_density(kind, ModelParams(p["alpha"], p["beta"], p["gamma"]), lam=p["lam"])
    for t in (0.5, 1.0, 2.0):
        assert bernstein_reconstruct(density, TIGHT, t) == pytest.approx(direct_value(kind, p, t), abs=1e-6)


def test_reconstruction_examples():
    cd = closed_form_density("CD", ModelParams(beta=0.5))
    assert bernstein_reconstruct(cd, TIGHT, 1.0) == pytest.approx(phi("CD", ModelParams(beta=0.5), 1.0), abs=1e-7)
    ml = closed_form_density("ML3", ModelParams(alpha=0.5), lam=1.0)
    assert bernstein_reconstruct(ml, TIGHT, 1.0) == pytest.approx(0.4275835762, abs=1e-9)
    with pytest.raises(QuadratureFailure):
        bernstein_reconstruct(closed_form_density("HN", ModelParams(1.0, 1.0)), TIGHT, 1.0)
    # the delta is handled analytically on request
    delta = closed_form_density("HN", ModelParams(1.0, 1.0))
    assert bernstein_reconstruct(delta, TIGHT, 1.0, include_atoms=True) == pytest.approx(math.exp(-1))


def test_reconstruction_rejects_bad_time():
    with pytest.raises(DomainError):
        bernstein_reconstruct(closed_form_density("CD", ModelParams(beta=0.5)), TIGHT, 0.0)


def test_tight_tolerance_is_reported():
    density = closed_form_density("HN", ModelParams(0.5, 0.5))
    value, err = bernstein_reconstruct(density, TIGHT, 1.0, full_output=True)
    assert err <= TIGHT.abs_tol + TIGHT.rel_tol * abs(value)
    with pytest.raises(QuadratureFailure):
        bernstein_reconstruct(density, QuadratureSpec(abs_tol=1e-300, rel_tol=1e-300, max_subdivisions=2), 1.0)


@pytest.mark.parametrize("kind", ["CC", "CD", "HN"])
@pytest.mark.parametrize("shape", FIXTURE)
def test_normalization(kind, shape):
    params = ModelParams(shape, shape)
    density = (
        closed_form_density("ML3", params, lam=1.0) if kind == "CC" else closed_form_density(kind, params)
    )
    mass, _ = density_integral(density, TIGHT)
    assert mass == pytest.approx(1.0, abs=1e-5)


def test_hn_nonnegative_on_fixture_grid():
    for a, b in itertools.product(FIXTURE, FIXTURE):
        density = closed_form_density("HN", ModelParams(a, b))
        assert min(density(r) for r in np.logspace(-4, 4, 400)) >= -1e-14


@pytest.mark.parametrize("gamma", [0.3, 0.5, 0.9])
def test_kilbas_saigo_reconstruction(gamma):
    density = closed_form_density("KilbasSaigo", ModelParams(gamma=gamma))
    for t in (0.5, 1.0, 2.0):
        assert bernstein_reconstruct(density, TIGHT, t) == pytest.approx(math.exp(-(t**gamma) / gamma), abs=1e-6)


def test_cd_exponent_arbitration():
    params = ModelParams(beta=0.3)
    target = phi("CD", params, 1.0)
    derived = bernstein_reconstruct(closed_form_density("CD", params), TIGHT, 1.0)
    printed = bernstein_reconstruct(closed_form_density("CD", params, cd_exponent="printed"), TIGHT, 1.0)
    assert derived == pytest.approx(target, abs=1e-9)
    assert abs(printed - target) > 1e-2


def test_cd_printed_exponent_is_not_integrable_at_half():
    density = closed_form_density("CD", ModelParams(beta=0.5), cd_exponent="printed")
    assert not density.integrable
    with pytest.raises(QuadratureFailure):
        bernstein_reconstruct(density, TIGHT, 1.0)
    with pytest.raises(ValueError):
        closed_form_density("CD", ModelParams(beta=0.5), cd_exponent="other")


# ------------------------------------------------------- model densities


@pytest.mark.parametrize("kind", list(CLASSICAL) + list(FRACTIONAL))
@pytest.mark.parametrize("sigma", [1.0, 2.5])
def test_model_density_reconstructs_phi(kind, sigma):
    params = ModelParams(0.6, 0.5, 0.8, sigma)
    density = model_density(kind, params)
    if kind is ModelKind.DF:
        # s^(1-gamma)/(s+1) has a pole on the cut: no integrable density
        assert not density.integrable
        with pytest.raises(QuadratureFailure):
            bernstein_reconstruct(density, None, 1.0)
        return
    for t in (0.5, 2.0):
        value = bernstein_reconstruct(density, None, t, include_atoms=True)
        assert value == pytest.approx(phi(kind, params, t), abs=1e-8)


def test_schneider_density_reconstructs():
    for a, b in [(0.5, 0.5), (0.5, 0.75), (0.75, 1.5)]:
        density = schneider_density(a, b)
        for t in (0.5, 1.0):
            target = math.gamma(b) * mittag_leffler3(MLOrder(a, b, 1.0), -t).value
            assert bernstein_reconstruct(density, TIGHT, t) == pytest.approx(target, abs=1e-8)
    with pytest.raises(DomainError):
        schneider_density(1.0, 1.0)


# --------------------------------------------------------- transforms


def test_stieltjes_transform_matches_closed_form():
    params = ModelParams(0.6, 0.5)
    density = closed_form_density("HN", params)
    for s in (0.5, 2.0 + 1.0j, 0.3 - 4.0j):
        assert stieltjes_transform(density, s, TIGHT) == pytest.approx(phi_laplace("HN", params, s), abs=1e-9)
    with pytest.raises(BranchError):
        stieltjes_transform(density, -1.0)


@pytest.mark.parametrize("kind", ["HN", "CCF", "HNF"])
def test_tabulated_transform_accuracy(kind):
    params = ModelParams(0.6, 0.5, 0.8)
    table = TabulatedTransform(model_density(ModelKind(kind), params))
    for rho in (1e-2, 1.0, 1e3):
        for phase in (0.0, 1.0, 2.5):
            s = rho * complex(math.cos(phase), math.sin(phase))
            exact = phi_laplace(kind, params, s)
            assert abs(table(s) - exact) <= 1e-9 * max(1.0, abs(exact))
    with pytest.raises(BranchError):
        table(-2.0)


def test_tabulated_transform_adds_atoms():
    table = TabulatedTransform(model_density(ModelKind.D, ModelParams(sigma=2.0)))
    assert table(1.0) == pytest.approx(phi_laplace("D", ModelParams(sigma=2.0), 1.0), rel=1e-12)


def test_numeric_density_wraps_inversion():
    density = numeric_density(lambda s: 1 / (s**0.5 + 1) / s**0.5, (1.0,))
    assert density.route is SpectralRoute.NumericInversion
    assert density(2.0) == pytest.approx(closed_form_K("ML3", ModelParams(alpha=0.5), 2.0, lam=1.0).k_value, abs=1e-9)


def test_tanh_sinh_endpoint_singularity():
    value, err = tanh_sinh(lambda x: x**-0.9, 0.0, 1.0, abs_tol=1e-12, rel_tol=1e-12)
    assert value == pytest.approx(10.0, rel=1e-9)
    scheme = QuadratureSpec(scheme=QuadScheme.TanhSinh, abs_tol=1e-10, rel_tol=1e-10)
    ml = closed_form_density("ML3", ModelParams(alpha=0.5), lam=1.0)
    assert bernstein_reconstruct(ml, scheme, 1.0) == pytest.approx(0.4275835762, abs=1e-9)


@pytest.mark.parametrize("a", [0.05, 0.5, 0.8, 1 - 1e-6, 1 - 1e-12])
@pytest.mark.parametrize("lam", [0.2, 0.4, 1.0])
def test_ml3_density_relative_accuracy(a, lam):
    density = closed_form_density("ML3", ModelParams(alpha=a), lam=lam)
    for r in (1e-9, 0.01, 0.999, 1.0, 1.001, 2.0, 1e3, 1e8):
        ref = oracles.ml3_density(a, lam, r)
        assert density(r) == pytest.approx(ref, rel=1e-13)


def test_tanh_sinh_survives_overflow_next_to_an_endpoint():
    def f(x):
        if x < 1e-300:
            raise OverflowError("complex exponentiation")
        return x**-0.5

    value, err = tanh_sinh(f, 0.0, 1.0)
    assert value == pytest.approx(2.0, rel=1e-10)
    assert err < 1e-9


@pytest.mark.parametrize("r", [0.5, 2.0, 7.0])
def test_cut_orientation_is_immaterial_for_real_transforms(r):
    # approaching the cut from below with +1/pi gives the same density
    def h(s):
        return (1 - (s**0.5 + 1) ** -0.7) / s

    eps = 1e-7
    below = h(complex(r * math.cos(math.pi - eps), -r * math.sin(math.pi - eps))).imag / math.pi
    assert below == pytest.approx(titchmarsh_numeric(h, r).k_value, abs=1e-6)
    assert below == pytest.approx(closed_form_K("HN", ModelParams(0.5, 0.7), r).k_value, abs=1e-6)


@pytest.mark.parametrize("alpha, beta", [(0.7, 0.4), (0.5, 0.5), (1.0, 0.5), (0.3, 0.9)])
def test_hn_memory_density_is_accurate_near_zero(alpha, beta):
    import mpmath as mp

    from cmkinetic.spectral import hn_memory_density

    density = hn_memory_density(alpha, beta)
    with mp.workdps(40):
        for r in (1e-300, 1e-40, 1e-12, 0.3, 1.5, 1e3):
            s = mp.mpf(r) * mp.expjpi(1)
            ref = float(-mp.im(1 / mp.expm1(beta * mp.log1p(s**alpha))) / mp.pi)
            assert density(r) == pytest.approx(ref, rel=1e-13, abs=1e-300)
