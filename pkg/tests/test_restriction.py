"""Restriction-constant certificates: closed forms, counting uppers, witnesses."""

import math
from fractions import Fraction

import numpy as np
import pytest

from fflab.certificates import (
    NormCertificate,
    as_float,
    certificate_consistency,
    exponent_str,
    holder_dual,
    parse_exponent,
)
from fflab.errors import (
    MinusOneIsSquareError,
    NoClosedFormError,
    NotAMajorantError,
    SubspaceNotFoundError,
    SupportViolationError,
    UnknownWitnessError,
    WrongSurfaceKindError,
)
from fflab.field import make_field
from fflab.grid import Grid, Side, flat_points, fourier_forward, fourier_inverse
from fflab.restriction import (
    bridge_identity_checks,
    find_affine_line,
    lambda_q_ratio,
    majorant_ratio,
    necessary_region,
    pseudoconformal_identity_check,
    rebuild_surface,
    recheck_lower,
    region_test,
    rstar_exact_closed,
    rstar_lower_power,
    rstar_lower_witness,
    rstar_upper_even,
    selfdot_incidence_count,
    tomas_stein_bound,
    tomas_stein_threshold,
    verify_lower,
)
from fflab.surfaces import cone, moment_curve, paraboloid


# -- exponents ------------------------------------------------------------------------


def test_parse_exponent():
    assert parse_exponent("8/5") == Fraction(8, 5)
    assert parse_exponent(2) == Fraction(2)
    assert parse_exponent("inf") == math.inf
    assert parse_exponent("oo") == math.inf
    with pytest.raises(ValueError, match="rational like '8/5', not a decimal"):
        parse_exponent("2.5")
    with pytest.raises(ValueError):
        parse_exponent(2.5)
    with pytest.raises(ValueError):
        parse_exponent("1/2")


def test_holder_dual():
    assert holder_dual(Fraction(4)) == Fraction(4, 3)
    assert holder_dual(Fraction(1)) == math.inf
    assert holder_dual(math.inf) == Fraction(1)
    assert exponent_str(holder_dual(Fraction(8, 5))) == "8/3"


# -- closed forms ---------------------------------------------------------------------


def test_closed_form_values(f5, f7):
    assert rstar_exact_closed(paraboloid(f5, 2), 2, 2).value == pytest.approx(math.sqrt(5))
    assert rstar_exact_closed(paraboloid(f7, 2), 2, 2).value == pytest.approx(math.sqrt(7))
    assert rstar_exact_closed(cone(f7), 2, 2).value == pytest.approx(math.sqrt(343 / 48))
    assert rstar_exact_closed(paraboloid(f5, 2), 2, math.inf).value == 1.0
    with pytest.raises(NoClosedFormError):
        rstar_exact_closed(paraboloid(f5, 2), 2, 4)


def test_lambda_ratio_is_one_at_two(f5, f7):
    for surface in (paraboloid(f5, 2), paraboloid(f7, 3), cone(f7)):
        cert = rstar_exact_closed(surface, 2, 2)
        assert lambda_q_ratio(cert) == pytest.approx(1.0, abs=1e-12)


# -- counting upper bounds -------------------------------------------------------------


def test_even_counting_uppers(f5, f7):
    assert rstar_upper_even(paraboloid(f5, 2), 2).value == pytest.approx(2 ** 0.25)
    assert rstar_upper_even(paraboloid(f7, 3), 2).value == pytest.approx((8 / 7) ** 0.25)
    assert rstar_upper_even(moment_curve(f7, 3), 3).value == pytest.approx(6 ** (1 / 6))
    c = rstar_upper_even(cone(f7), 2)
    assert c.value == pytest.approx((9 * 343) ** 0.25 / math.sqrt(48))
    assert c.meta["diagonal_split"] is True
    assert c.meta["tuple_count_max"] == 8


def test_lower_stays_below_upper(f5):
    surface = paraboloid(f5, 2)
    upper = rstar_upper_even(surface, 2)
    lower = rstar_lower_power(surface, 2, 4, restarts=4, max_iters=100, seed=0)
    assert lower.value <= upper.value + 1e-9
    assert lower.value > 1.0
    assert certificate_consistency([lower, upper]) == []


# -- power iteration -------------------------------------------------------------------


def test_power_recovers_l2_closed_form(f5):
    surface = paraboloid(f5, 2)
    exact = rstar_exact_closed(surface, 2, 2).value
    got = rstar_lower_power(surface, 2, 2, restarts=4, max_iters=200, seed=1)
    assert abs(got.value - exact) < 1e-6
    assert verify_lower(got)


def test_power_is_deterministic(f5):
    surface = paraboloid(f5, 2)
    a = rstar_lower_power(surface, 2, 4, restarts=3, max_iters=60, seed=7)
    b = rstar_lower_power(surface, 2, 4, restarts=3, max_iters=60, seed=7)
    assert repr(a.value) == repr(b.value)
    assert a.witness == b.witness
    assert a.meta["best_restart"] == b.meta["best_restart"]


# -- explicit witnesses ----------------------------------------------------------------


def test_dirac_witness_matches_closed_form(f5):
    surface = paraboloid(f5, 2)
    cert = rstar_lower_witness(surface, 2, 4, "dirac")
    expect = surface.size ** (1 / 2 - 1) * 5 ** (2 / 4)
    assert cert.value == pytest.approx(expect, rel=1e-12)
    assert cert.meta["closed_form"] == pytest.approx(expect, rel=1e-12)
    assert verify_lower(cert)


def test_constant_witness_attains_l2(f7):
    surface = cone(f7)
    cert = rstar_lower_witness(surface, 2, 2, "constant")
    assert cert.value == pytest.approx(rstar_exact_closed(surface, 2, 2).value, rel=1e-12)
    assert verify_lower(cert)


def test_constant_witness_attains_sup(f5):
    cert = rstar_lower_witness(paraboloid(f5, 2), 2, math.inf, "constant")
    assert cert.value == pytest.approx(1.0, rel=1e-12)


def test_subspace_witness(f5, f7):
    surface = paraboloid(f5, 3)
    a, b = find_affine_line(surface)
    # the line really lies on the surface
    ts = np.arange(5, dtype=np.int64)
    f5_ = surface.field
    pts = np.stack(
        [f5_.add_arrays(np.full_like(ts, a[j]), f5_.mul_arrays(ts, b[j])) for j in range(3)],
        axis=1,
    )
    on = set(int(x) for x in surface.flat)
    assert all(int(x) in on for x in flat_points(f5_, pts))
    # the line's extension is (1/5) of a hyperplane indicator: ratio 1 at q = 4,
    # 5^{1/10} at q = 10/3, so boundedness forces q >= 4
    cert = rstar_lower_witness(surface, 2, 4, "subspace")
    assert cert.value == pytest.approx(1.0, rel=1e-12)
    assert verify_lower(cert)
    tight = rstar_lower_witness(surface, 2, "10/3", "subspace")
    assert tight.value == pytest.approx(5 ** 0.1, rel=1e-12)
    with pytest.raises(SubspaceNotFoundError):
        find_affine_line(paraboloid(f7, 3))


def test_dual_cone_witness_frozen(f7):
    cert = rstar_lower_witness(cone(f7), 2, 4, "dual_cone_X")
    assert cert.value == pytest.approx(0.8367291862806082, abs=1e-12)
    assert verify_lower(cert)
    with pytest.raises(WrongSurfaceKindError):
        rstar_lower_witness(paraboloid(f7, 2), 2, 4, "dual_cone_X")
    with pytest.raises(UnknownWitnessError):
        rstar_lower_witness(cone(f7), 2, 4, "no_such_thing")


def test_recheck_uses_independent_path(f5):
    surface = paraboloid(f5, 2)
    cert = rstar_lower_witness(surface, 2, 4, "constant")
    assert recheck_lower(cert) == pytest.approx(cert.value, rel=1e-12)
    upper = rstar_upper_even(surface, 2)
    with pytest.raises(UnknownWitnessError):
        recheck_lower(upper)


def test_rebuild_surface_roundtrip(f7):
    cert = rstar_exact_closed(cone(f7), 2, 2)
    again = rebuild_surface(cert)
    assert again.size == 48
    assert sorted(int(x) for x in again.flat) == sorted(int(x) for x in cone(f7).flat)


def test_consistency_flags_fabricated_pair(f5):
    surface = paraboloid(f5, 2)
    upper = rstar_upper_even(surface, 2)
    fake = NormCertificate(
        quantity="rstar", kind="lower", method="witness",
        char=5, degree=1, n=2, surface=upper.surface,
        p=parse_exponent(2), q=parse_exponent(4), value=upper.value + 1.0,
    )
    problems = certificate_consistency([fake, upper])
    assert len(problems) == 1 and "exceeds upper" in problems[0]


def test_certificate_dict_roundtrip(f5):
    cert = rstar_lower_witness(paraboloid(f5, 2), 2, 4, "dirac")
    again = NormCertificate.from_dict(cert.to_dict())
    assert again.key == cert.key
    assert again.value == cert.value
    assert again.witness == cert.witness
    assert "R*" in again.describe()


# -- necessary region ------------------------------------------------------------------


def test_region_membership():
    region = necessary_region(3, 2)
    assert region_test(region, 2, 4)
    assert region_test(region, 2, 3)  # boundary counts as inside
    assert not region_test(region, 2, "8/3")
    assert region_test(region, 1, math.inf)
    sharpened = necessary_region(3, 2, k_subspace=1)
    assert not region_test(sharpened, 2, "7/2")
    assert region_test(necessary_region(3, 2), 2, "7/2")


def test_region_constraint_labels():
    labels = [name for name, _ in necessary_region(3, 2, 1).constraints()]
    assert len(labels) == 3
    assert any("subspace" in s for s in labels)


def test_tomas_stein_threshold_and_bound(f7):
    theta, q = tomas_stein_threshold(3, 2, 2)
    assert theta == Fraction(1, 2) and q == Fraction(4)
    base = rstar_exact_closed(paraboloid(f7, 3), 2, 2)
    shape = tomas_stein_bound(theta, 2, base)
    assert shape.value == pytest.approx(2.0, rel=1e-12)
    assert shape.q == Fraction(4)


# -- incidences ------------------------------------------------------------------------


def incidence_oracle(field, pts) -> int:
    count = 0
    for a in pts:
        sd = field.dot(a, a)
        for b in pts:
            if field.dot(a, b) == sd:
                count += 1
    return count


def test_selfdot_incidences_frozen(f7):
    pts = f7.grid_coords(2)[1:]
    rep = selfdot_incidence_count(f7, pts)
    assert rep.count == 336
    assert rep.satisfied and rep.count <= rep.bound
    assert rep.bound == pytest.approx(48 * math.sqrt(48) + 48)
    small = [tuple(int(c) for c in row) for row in pts[:12]]
    rep2 = selfdot_incidence_count(f7, np.array(small))
    assert rep2.count == incidence_oracle(f7, small)


def test_selfdot_rejections(f7):
    with pytest.raises(MinusOneIsSquareError):
        selfdot_incidence_count(make_field(13), make_field(13).grid_coords(2)[1:])
    with pytest.raises(ValueError):
        selfdot_incidence_count(f7, f7.grid_coords(2))  # contains the origin


# -- exact identities ------------------------------------------------------------------


def test_pseudoconformal_identity(f7):
    rng = np.random.default_rng(3)
    vals = np.zeros(343, dtype=np.complex128)
    vals[:49] = rng.standard_normal(49) + 1j * rng.standard_normal(49)
    g = Grid(f7, 3, vals, Side.SPACE)
    assert pseudoconformal_identity_check(g) < 1e-12


def test_pseudoconformal_rejects_bad_support(f7, f5):
    vals = np.zeros(343, dtype=np.complex128)
    vals[100] = 1.0
    with pytest.raises(SupportViolationError):
        pseudoconformal_identity_check(Grid(f7, 3, vals, Side.SPACE))
    with pytest.raises(SupportViolationError):
        pseudoconformal_identity_check(Grid.constant(f5, 2, 1.0, Side.SPACE))


def test_bridge_identities(f5):
    dev = bridge_identity_checks(f5, 2, seed=0, trials=3)
    assert set(dev) == {"embed", "line_sum", "cap"}
    assert max(dev.values()) < 1e-12


# -- majorant ratios -------------------------------------------------------------------


def _self_majorant(field, n, rng):
    prof = rng.random(field.order**n) + 0.1  # strictly positive transform
    return fourier_inverse(Grid(field, n, prof.astype(np.complex128), Side.FREQUENCY))


def test_majorant_self_ratio_is_one(f5):
    rng = np.random.default_rng(0)
    g = _self_majorant(f5, 2, rng)
    assert majorant_ratio(g, g, 4) == pytest.approx(1.0)


def test_majorant_dominated_ratio(f5):
    rng = np.random.default_rng(1)
    g = _self_majorant(f5, 2, rng)
    ghat = fourier_forward(g).values
    phases = np.exp(2j * np.pi * rng.random(25))
    scales = rng.random(25)
    f = fourier_inverse(Grid(f5, 2, ghat * phases * scales, Side.FREQUENCY))
    assert majorant_ratio(f, g, 4) <= 1.0 + 1e-12


def test_majorant_rejects_complex_transform(f5):
    rng = np.random.default_rng(2)
    f = Grid.random(f5, 2, rng)
    with pytest.raises(NotAMajorantError):
        majorant_ratio(f, f, 4)
