import math

import numpy as np
import pytest
from scipy.integrate import quad

from cvlea import fock as f
from cvlea import gaussian as g
from cvlea import witness as w
from cvlea.diagram import witness_critical_noise_symmetric
from cvlea.errors import CutoffTooSmall, DomainError

ch = g.make_channel
xn = g.ChannelParams.from_extra_noise


def radial_moment(lam, m):
    # int d^2a/pi exp(lam |a|^2) |a|^(2m) / m!  via polar quadrature
    val, _ = quad(lambda r: 2 * r ** (2 * m + 1) * math.exp((lam - 1) * r * r) / math.factorial(m), 0, np.inf)
    return val


def test_lambda0_examples():
    assert w.lambda0(1.0, 7.3) == 1.0
    assert w.lambda0(2.0, 2.0) == pytest.approx(0.5)


def test_fock_matrix_swap_at_zero():
    d = 4
    W = w.witness_fock_matrix(0.0, d)
    swap = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            swap[i * d + j, j * d + i] = 1
    assert np.array_equal(W, swap)


def test_fock_matrix_entry_against_gaussian_integral():
    d, lam = 3, 0.5
    W = w.witness_fock_matrix(lam, d)
    assert W[1 * d + 0, 0 * d + 1] == pytest.approx(8.0)
    for m in range(d):
        for n in range(d):
            oracle = radial_moment(lam, m) * radial_moment(lam, n)
            assert W[m * d + n, n * d + m] == pytest.approx(oracle, rel=1e-8)


def test_numeric_average_examples():
    d = 6
    assert w.witness_average_numeric(f.psi_n_state(1, -1, d).density(), 0.0) == pytest.approx(-1.0)
    vac = np.zeros(d * d)
    vac[0] = 1
    rho = f.FockDensity(np.outer(vac, vac).astype(complex), d)
    for lam in (-2.0, 0.0, 0.7):
        assert w.witness_average_numeric(rho, lam) == pytest.approx((1 - lam) ** -2)


def test_numeric_average_tail_guard():
    rho = f.tmsv_state(0.9, 12, tol=1e-2).density()
    with pytest.raises(CutoffTooSmall):
        w.witness_average_numeric(rho, 0.6)


def test_closed_form_identity_channels_equals_swap_average():
    idn = ch(1, 0)
    gamma = 0.4
    closed = w.witness_average_closed_form(idn, idn, gamma, 0.0)
    numeric = w.witness_average_numeric(f.psi_gamma_state(gamma, 20).density(), 0.0)
    assert closed == pytest.approx(-1.0, abs=1e-12)
    assert numeric == pytest.approx(closed, abs=1e-10)


@pytest.mark.parametrize(
    "p1,p2,gamma,lam",
    [
        (ch(0.6, 0.3), ch(1.3, 0.25), 0.3, -0.5),
        (xn(0.8, 0.1), xn(0.8, 0.1), 0.5j, 0.2),
        (xn(1.4, 0.05), xn(0.3, 0.2), 0.2 + 0.1j, -1.5),
    ],
)
def test_closed_form_matches_fock_trace(p1, p2, gamma, lam):
    d = 30
    rho = f.apply_channel_pair(f.psi_gamma_state(gamma, d).density(), p1, p2)
    numeric = w.witness_average_numeric(rho, lam)
    assert w.witness_average_closed_form(p1, p2, gamma, lam) == pytest.approx(numeric, abs=1e-9)


def test_closed_form_array_input():
    p = xn(0.9, 0.1)
    lams = np.array([-1.0, 0.0, 0.1])
    vec = w.witness_average_closed_form(p, p, 0.1, lams)
    assert np.allclose(vec, [w.witness_average_closed_form(p, p, 0.1, x) for x in lams])


def test_lambda0_gate():
    p = ch(2.0, 0.5)  # tau = 2
    with pytest.raises(DomainError):
        w.witness_average_closed_form(p, p, 0.1, 0.5)
    with pytest.raises(DomainError):
        w.witness_average_closed_form(p, p, 0.1, [0.0, 0.7])
    with pytest.raises(DomainError):
        w.witness_average_closed_form(p, p, 0, 0.0)


def test_geometric_form_weights():
    wts = w.witness_weights(0.5, 3, form="geometric")
    assert wts[2, 1] == pytest.approx(0.125)
    with pytest.raises(ValueError):
        w.witness_weights(0.5, 3, form="other")


def test_product_state_positivity_sample():
    rng = np.random.default_rng(3)
    for _ in range(20):
        xi = rng.normal(size=8) + 1j * rng.normal(size=8)
        up = rng.normal(size=8) + 1j * rng.normal(size=8)
        assert w.product_state_expectation(xi, up, 0.3) >= -1e-12


@pytest.mark.parametrize(
    "p1,p2,expected",
    [
        (xn(1, 0.5), xn(1, 0.5), True),
        (xn(1, 0.71), xn(1, 0.71), False),
        (xn(0.5, 0), xn(0.5, 0), True),
        (xn(5, 0), xn(5, 0.999), True),
        (xn(5, 0), xn(5, 1.001), False),
    ],
)
def test_prop2_region_examples(p1, p2, expected):
    assert w.prop2_region(p1, p2) is expected
    assert w.prop2_region_eta_tau(p1, p2) is expected


def test_prop2_region_mixed_branch_is_swap_symmetric():
    rng = np.random.default_rng(7)
    for _ in range(500):
        p1 = xn(rng.uniform(0.05, 1), rng.uniform(0, 1))
        p2 = xn(rng.uniform(1, 4), rng.uniform(0, 1))
        assert w.prop2_region(p1, p2) == w.prop2_region(p2, p1)


@pytest.mark.parametrize("kappa", [0.2, 1.0, 3.0])
def test_symmetric_specialization(kappa):
    a = w.symmetric_extra_noise_threshold(kappa)
    assert a + g.quantum_limited_noise(kappa) == pytest.approx(w.corollary4_threshold(kappa))
    assert w.prop2_region(xn(kappa, a - 1e-6), xn(kappa, a - 1e-6))
    assert not w.prop2_region(xn(kappa, a + 1e-6), xn(kappa, a + 1e-6))


def test_corollary4_values():
    assert w.corollary4_threshold(1) == pytest.approx(0.70711, abs=1e-5)
    assert w.corollary4_threshold(5) == pytest.approx(2.5495, abs=1e-4)
    assert w.corollary4_threshold(1e-8) == pytest.approx(0.5)
    for k in np.geomspace(1e-3, 1e3, 50):
        assert w.corollary4_threshold(k) > 0.5


def test_detection_inside_region_and_not_for_eb():
    inside = xn(0.8, 0.1)
    assert w.detect_entanglement(inside, inside)[0]
    eb = xn(0.5, 0.5)
    assert not w.detect_entanglement(eb, ch(1, 0))[0]
    assert not w.detect_entanglement(ch(1, 0), eb)[0]


def test_detection_monotone_in_noise():
    k1, k2 = 0.7, 1.6
    for a2 in np.linspace(0, 1, 6):
        hits = [w.detect_entanglement(xn(k1, a1), xn(k2, a2))[0] for a1 in np.linspace(0, 1, 21)]
        # once detection stops it never resumes as a1 grows
        first_miss = hits.index(False) if False in hits else len(hits)
        assert not any(hits[first_miss:])


def test_detection_agrees_with_region_on_grid():
    for k1 in (0.3, 1.0, 2.5):
        for k2 in (0.5, 1.5):
            for a1 in (0.0, 0.2, 0.6):
                for a2 in (0.05, 0.3, 0.9):
                    p1, p2 = xn(k1, a1), xn(k2, a2)
                    assert w.detect_entanglement(p1, p2)[0] == w.prop2_region(p1, p2)


@pytest.mark.parametrize("kappa", [0.3, 1.0, 2.0])
def test_survival_threshold_independent_of_gamma(kappa):
    # empirical check of gamma independence below and above the threshold
    thr = w.corollary4_threshold(kappa)
    below, above = ch(kappa, thr - 0.01), ch(kappa, thr + 0.01)
    for gamma in (1e-3, 0.1, 0.5, 1.0, 2.0, 3.0):
        assert w.detect_entanglement(below, below, gamma)[0]
        assert not w.detect_entanglement(above, above, gamma)[0]


def test_witness_bisection_matches_corollary4():
    for kappa in (0.1, 1.0, 5.0):
        mu = witness_critical_noise_symmetric(kappa, tol=1e-6)
        assert mu == pytest.approx(w.corollary4_threshold(kappa), abs=1e-4)


def test_halving_gamma_does_not_move_boundary():
    a = witness_critical_noise_symmetric(0.7, gamma=1e-3, tol=1e-9)
    b = witness_critical_noise_symmetric(0.7, gamma=5e-4, tol=1e-9)
    assert abs(a - b) < 1e-6


@pytest.mark.parametrize("k1,k2", [(5, 5), (3, 1), (4, 2.5), (4, 1.5), (7, 1.2)])
def test_quantum_limited_amplifier_partner_threshold(k1, k2):
    # with a QL amplifier on mode 1 the partner must be EB (a2 = 1) exactly
    # when k1 - k2 <= 2; beyond that the boundary drops to k2 / (k1 - 2)
    from cvlea.diagram import witness_critical_a2

    expected = 1.0 if k1 - k2 <= 2 else k2 / (k1 - 2)
    assert witness_critical_a2(k1, k2, 0.0, 1e-3, 1e-6) == pytest.approx(expected, abs=1e-4)
