import pytest

from hlslab.errors import ExponentError
from hlslab.exponents import Exponents, Regime, critical_p, critical_t, make_exponents, validate_exponents
from hlslab.kernels import Kind


def test_reversed_critical():
    e = Exponents(3, 4.0, 4 / 5, 6 / 7, Kind.REVERSED)
    rep = validate_exponents(e)
    assert rep.ok and rep.regime is Regime.REVERSED_CRITICAL
    assert e == Exponents.critical(3, 4.0, Kind.REVERSED)


def test_reversed_subcritical():
    e = Exponents(3, 4.0, 0.7, 0.8, Kind.REVERSED)
    rep = validate_exponents(e)
    assert rep.ok and rep.regime is Regime.REVERSED_SUBCRITICAL
    assert rep.general_region is True
    assert e.p_conj < 0 and e.t_conj < 0 and e.kappa < 0 and e.theta < 0
    assert e.t_conj == pytest.approx(-4.0)
    assert e.s1 > 0 and e.s2 > 0
    assert 1 / e.p + 1 / e.p_conj == pytest.approx(1, abs=1e-12)
    assert 1 / e.t + 1 / e.t_conj == pytest.approx(1, abs=1e-12)


def test_poisson_critical():
    e = Exponents(3, 2.0, 4.0, 6 / 5, Kind.POISSON)
    rep = validate_exponents(e)
    assert rep.ok and rep.regime is Regime.POISSON_CRITICAL


def test_poisson_subcritical_boundary_case():
    e = Exponents(3, 2.0, 5.0, 1.25, Kind.POISSON)
    rep = validate_exponents(e)
    assert rep.ok and rep.regime is Regime.POISSON_SUBCRITICAL
    assert any("1/p + 1/t = 1" in note for note in rep.notes)
    assert e.kappa > 0 and e.theta > 0


def test_poisson_s_values():
    e = Exponents(3, 2.0, 5.0, 1.2, Kind.POISSON)
    assert e.s1 == pytest.approx(3 + 2 - 4 - 4 / 5)
    assert e.s2 == pytest.approx(5 - 6 / 1.2)
    assert validate_exponents(e).ok


def test_primed_values():
    e = Exponents(3, 4.0, 0.7, 0.8, Kind.REVERSED)
    assert e.s1_primed == pytest.approx(5 - 4 / 0.7)
    assert e.s2_primed == pytest.approx(7 - 6 / 0.8)


@pytest.mark.parametrize("p, t", [(0.9, 0.8), (0.7, 0.9), (-0.5, 0.5)])
def test_reversed_violations(p, t):
    rep = validate_exponents(Exponents(3, 4.0, p, t, Kind.REVERSED))
    assert not rep.ok and rep.violations
    with pytest.raises(ExponentError):
        Exponents(3, 4.0, p, t, Kind.REVERSED).require_valid()


@pytest.mark.parametrize("p, t", [(3.0, 1.5), (5.0, 1.1), (2.0, 1.5)])
def test_poisson_violations(p, t):
    assert not validate_exponents(Exponents(3, 2.0, p, t, Kind.POISSON)).ok


def test_bad_kernel_reported_not_raised():
    rep = validate_exponents(Exponents(3, 3.0, 0.5, 0.5, Kind.REVERSED))
    assert not rep.ok


def test_critical_values():
    assert critical_p(3, 4.0, Kind.REVERSED) == pytest.approx(0.8)
    assert critical_p(3, 2.0, Kind.POISSON) == pytest.approx(4.0)
    assert critical_t(3, 4.0) == pytest.approx(6 / 7)


def test_make_exponents():
    assert make_exponents(3, 4.0, "reversed").is_critical
    with pytest.raises(ExponentError):
        make_exponents(3, 4.0, "reversed", p=0.7)
    with pytest.raises(ExponentError):
        Exponents(3, 4.0, 0.0, 0.8, Kind.REVERSED)
