import math
from fractions import Fraction

import numpy as np
import pytest

from revival_lab.dynamics import pseudo_classical, quadratic_approx
from revival_lab.errors import HypothesisNotMet, NoResonance, NotCoprime, ShapeMismatch
from revival_lab.hamiltonian import EnergyPoint, OscillatorPair, PeriodSet, PolynomialF, period_set
from revival_lab.revival import (check_periodicity, detect_resonance, factorized_moduli,
                                 factorized_moduli_check, fractional_coefficients, gauss_sum, minimal_period,
                                 modulus_closed_form, rationalize, reconstruct_at_revival,
                                 resonance_from_fractions, theta_sequence)
from revival_lab.wavepacket import PacketParams, build_packet

import oracles

QUAD = PolynomialF.from_terms([(2, 0, 1), (1, 1, 1), (0, 2, 1)])
QUAD2 = PolynomialF.from_terms([(2, 0, 1), (1, 1, 2), (0, 2, 1)])


def fake_periods(r1, r2, r12, h=0.01):
    return PeriodSet(h, 1.0, 1.0, 1.0, 1.0, r1, r2, r12, r1, r2, r12)


def test_rationalize():
    assert rationalize(0.75, 64, 1e-12) == Fraction(3, 4)
    assert rationalize(-2.5, 64, 1e-12) == Fraction(-5, 2)
    assert rationalize(math.sqrt(2), 50, 1e-9) is None


def test_detect_resonance_quadratic_scenario(unit_osc, centre):
    ps = period_set(QUAD, centre, 0.01, unit_osc)
    res = detect_resonance(ps)
    # all three revival periods equal 200 pi
    assert (res.frac1, res.frac2, res.frac12) == (1, 1, 1)
    assert res.t_frac == pytest.approx(200 * math.pi)
    assert (res.ell1, res.ell2) == (1, 1)


def test_detect_resonance_equal_periods():
    res = detect_resonance(fake_periods(5.0, 5.0, 5.0))
    assert (res.frac1, res.frac2, res.frac12) == (1, 1, 1)
    assert res.t_frac == 5.0
    assert (res.ell1, res.ell2) == (1, 1)


def test_detect_resonance_double_cross_period():
    # T_rev12 = 2 T_rev: smallest full revival at 2 T_rev
    res = detect_resonance(fake_periods(200 * math.pi, 200 * math.pi, 400 * math.pi))
    assert (res.frac1, res.frac2, res.frac12) == (2, 2, 1)
    assert res.t_frac == pytest.approx(400 * math.pi)
    assert (res.r1, res.s1) == (1, 2)
    assert res.ell1 == 1 and res.ell1 <= res.frac1.denominator * res.s1


def test_detect_resonance_identity_and_signs():
    ps = fake_periods(-3.0, 4.5, 1.5)
    res = detect_resonance(ps, at=Fraction(1, 3))
    for fj, tj in ((res.frac1, -3.0), (res.frac2, 4.5), (res.frac12, 1.5)):
        assert float(fj) * tj == pytest.approx(res.t_frac, rel=1e-12)
    assert res.t_frac > 0
    assert res.r1 == res.frac12.numerator * res.frac1.denominator
    assert res.s1 == res.frac12.denominator * res.frac1.numerator
    assert -3.0 == pytest.approx(res.r1 / res.s1 * 1.5)


def test_no_resonance():
    with pytest.raises(NoResonance):
        detect_resonance(fake_periods(1.0, math.sqrt(2), 1.0), max_den=50)


def test_minimal_period_congruences():
    for f in [Fraction(1, 2), Fraction(2, 3), Fraction(3, 4), Fraction(5, 6), Fraction(7, 8), Fraction(1, 9)]:
        for f12 in [Fraction(0), Fraction(1), Fraction(1, 2), Fraction(1, 3)]:
            ell = minimal_period(f, f12)
            # brute-force smallest ell with the exact periodicity property
            brute = next(L for L in range(1, 1000)
                         if all(((f * (2 * n * L + L * L) + f12 * L * m) % 1) == 0
                                for n in range(-3, 4) for m in range(-3, 4)))
            assert ell == brute


def test_theta_integer_fractions_constant():
    res = resonance_from_fractions(3, 2, 5)
    assert np.allclose(theta_sequence(res, 4, 7), 1)


def test_theta_separable_example():
    res = resonance_from_fractions(Fraction(1, 2), Fraction(1, 2), 0)
    assert (res.ell1, res.ell2) == (2, 2)
    th = theta_sequence(res, 0, 0)
    want = np.array([[(-1) ** (n * n + m * m) for m in range(2)] for n in range(2)])
    assert np.allclose(th, want, atol=1e-15)


@pytest.mark.parametrize("fracs", [(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)),
                                   (Fraction(1, 3), Fraction(2, 5), Fraction(1, 4)),
                                   (Fraction(3, 4), Fraction(1, 6), Fraction(2, 3)),
                                   (Fraction(5, 7), Fraction(3, 8), Fraction(1))])
def test_theta_periodicity(fracs):
    res = resonance_from_fractions(*fracs)
    for n0, m0 in ((0, 0), (49, 12)):
        assert check_periodicity(res, n0, m0)
        th = theta_sequence(res, n0, m0)
        # oracle: direct exponentiation on a shifted domain
        for n in range(res.ell1):
            for m in range(res.ell2):
                dn, dm = n + res.ell1 - n0, m + 2 * res.ell2 - m0
                ph = fracs[0] * dn * dn + fracs[2] * dn * dm + fracs[1] * dm * dm
                assert th[n, m] == pytest.approx(complex(np.exp(-2j * math.pi * float(ph % 1))), abs=1e-13)


def test_coefficients_constant_sequence():
    tab = fractional_coefficients(np.ones((3, 4)), 3, 4, 0, 0)
    want = np.zeros((3, 4))
    want[0, 0] = 1
    assert np.allclose(tab.b, want, atol=1e-15)


@pytest.mark.parametrize("fracs", [(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)),
                                   (Fraction(1, 3), Fraction(2, 5), Fraction(1, 4)),
                                   (Fraction(3, 4), Fraction(1, 6), Fraction(2, 3))])
def test_coefficients_dft_oracle_and_parseval(fracs):
    res = resonance_from_fractions(*fracs)
    n0, m0 = 17, 5
    th = theta_sequence(res, n0, m0)
    tab = fractional_coefficients(th, res.ell1, res.ell2, n0, m0)
    # numpy inverse FFT uses the same e^{+2 i pi k n / N} / N convention
    assert np.allclose(tab.b, np.fft.ifft2(th), atol=1e-13)
    assert abs(np.sum(np.abs(tab.b) ** 2) - 1) < 1e-12
    assert np.allclose(np.abs(tab.c), np.abs(tab.b), atol=1e-15)
    # reconstruction theta = sum_k b_k exp(-2 i pi (k1 n / l1 + k2 m / l2))
    n = np.arange(res.ell1)
    m = np.arange(res.ell2)
    rec = np.einsum("ab,an,bm->nm", tab.b, np.exp(-2j * math.pi * np.outer(n, n) / res.ell1),
                    np.exp(-2j * math.pi * np.outer(m, m) / res.ell2))
    assert np.allclose(rec, th, atol=1e-12)


def test_c_moduli_invariant_under_centre_shift():
    res = resonance_from_fractions(Fraction(1, 3), Fraction(2, 5), Fraction(1, 4))
    a = fractional_coefficients(theta_sequence(res, 0, 0), res.ell1, res.ell2, 0, 0)
    b = fractional_coefficients(theta_sequence(res, 7, 3), res.ell1, res.ell2, 7, 3)
    assert np.allclose(np.abs(a.c), np.abs(b.c), atol=1e-12)


def test_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        fractional_coefficients(np.ones((2, 3)), 3, 2, 0, 0)


def test_gauss_sum_examples():
    for k in range(3):
        assert abs(gauss_sum(3, 1, 3, 0, k)) ** 2 == pytest.approx(1 / 3, abs=1e-12)
    for k in range(4):
        assert abs(gauss_sum(4, 1, 4, 0, k)) ** 2 == pytest.approx(0.5 if k % 2 == 0 else 0.0, abs=1e-12)
    assert abs(gauss_sum(2, 1, 2, 0, 0)) ** 2 == pytest.approx(0, abs=1e-12)
    assert abs(gauss_sum(2, 1, 2, 0, 1)) ** 2 == pytest.approx(1, abs=1e-12)
    with pytest.raises(NotCoprime):
        gauss_sum(4, 2, 4, 0, 0)


def test_gauss_sum_matches_oracle():
    for ell, p, q, n0, k in [(6, 1, 3, 2, 4), (12, 5, 12, 7, 3), (10, 3, 5, 1, 9), (8, 7, 8, 3, 5)]:
        assert gauss_sum(ell, p, q, n0, k) == pytest.approx(oracles.gauss_sum(ell, p, q, n0, k), abs=1e-12)


def test_modulus_closed_form_examples():
    assert all(modulus_closed_form(5, k) == 0.2 for k in range(5))
    assert modulus_closed_form(8, 3) == 0.0
    assert modulus_closed_form(6, 0) == 0.0
    assert modulus_closed_form(6, 1) == pytest.approx(1 / 3)
    assert modulus_closed_form(8, 2) == 0.25


def test_factorization_constant_case():
    res = resonance_from_fractions(1, 1, 1)
    tab = fractional_coefficients(theta_sequence(res, 0, 0), 1, 1, 0, 0)
    assert factorized_moduli_check(res, tab)


def test_factorization_half_fractions():
    res = resonance_from_fractions(Fraction(1, 2), Fraction(1, 2), 1)
    tab = fractional_coefficients(theta_sequence(res, 0, 0), res.ell1, res.ell2, 0, 0)
    expect = factorized_moduli(res)
    d = [abs(oracles.gauss_sum(res.ell1, 1, 2, 0, k)) ** 2 for k in range(res.ell1)]
    assert np.allclose(expect, np.outer(d, d), atol=1e-14)
    assert factorized_moduli_check(res, tab)


def test_factorization_guard():
    res = resonance_from_fractions(Fraction(1, 2), Fraction(1, 2), Fraction(1, 4))
    tab = fractional_coefficients(theta_sequence(res, 0, 0), res.ell1, res.ell2, 0, 0)
    with pytest.raises(HypothesisNotMet):
        factorized_moduli_check(res, tab)


def _pipeline(f, h, at, pp=None, e=EnergyPoint(0.5, 0.5), osc=OscillatorPair()):
    pp = pp or PacketParams(0.8, 0.8, 0.6, 0.6)
    p = build_packet(f, e, h, osc, pp)
    ps = period_set(f, e, h, osc)
    res = detect_resonance(ps, at=at)
    tab = fractional_coefficients(theta_sequence(res, p.n0, p.m0), res.ell1, res.ell2, p.n0, p.m0)
    return p, ps, res, tab


def test_reconstruction_full_revival():
    p, ps, res, tab = _pipeline(QUAD, 0.01, Fraction(1))
    assert tab.c.shape == (1, 1) and tab.c[0, 0] == pytest.approx(1)
    t = 0.37
    want = pseudo_classical(p, ps, t + res.t_frac, t + res.t_frac)
    assert reconstruct_at_revival(p, ps, res, tab, t) == pytest.approx(want, abs=1e-13)
    assert abs(reconstruct_at_revival(p, ps, res, tab, 0.0) - quadratic_approx(p, ps, res.t_frac)) < 1e-9


@pytest.mark.parametrize("f, at", [(QUAD, Fraction(1, 2)), (QUAD, Fraction(1, 3)), (QUAD2, Fraction(1, 2)),
                                   (QUAD2, Fraction(1, 4))])
def test_reconstruction_fractional(f, at):
    p, ps, res, tab = _pipeline(f, 0.01, at)
    assert res.ell1 > 1
    assert abs(reconstruct_at_revival(p, ps, res, tab, 0.0) - quadratic_approx(p, ps, res.t_frac)) < 1e-9
    assert abs(np.sum(np.abs(tab.b) ** 2) - 1) < 1e-10


def test_reconstruction_error_shrinks_with_h():
    alpha = 0.0
    errs = []
    hs = [1e-2, 5e-3, 2.5e-3]
    for h in hs:
        p, ps, res, tab = _pipeline(QUAD2, h, Fraction(1, 2), PacketParams(0.85, 0.85, 0.75, 0.75))
        t = np.linspace(0, h ** alpha, 16)
        rec = reconstruct_at_revival(p, ps, res, tab, t)
        errs.append(np.max(np.abs(rec - quadratic_approx(p, ps, t + res.t_frac))))
    slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
    assert slope >= (alpha + 2 * 0.75 - 1) - 0.2


def test_reconstruct_requires_matching_centre():
    p, ps, res, tab = _pipeline(QUAD, 0.01, Fraction(1, 2))
    other = fractional_coefficients(theta_sequence(res, 0, 0), res.ell1, res.ell2, 0, 0)
    with pytest.raises(ShapeMismatch):
        reconstruct_at_revival(p, ps, res, other, 0.0)
