import math

import numpy as np
import pytest
from scipy.linalg import expm

from cvlea import fock as f
from cvlea import gaussian as g
from cvlea.errors import CutoffTooSmall, DegenerateState, DimensionMismatch


def vacuum(d):
    v = np.zeros(d, dtype=complex)
    v[0] = 1
    return v


def ket(n, d):
    v = np.zeros(d, dtype=complex)
    v[n] = 1
    return v


def test_coherent_state_examples():
    assert np.allclose(f.coherent_state(0, 10), vacuum(10))
    amp = f.coherent_state(1.0, 20)
    assert amp[0].real == pytest.approx(math.exp(-0.5), abs=1e-12)


def test_coherent_state_matches_displacement_operator():
    d, gamma = 60, 0.8 - 0.3j
    b = np.diag(np.sqrt(np.arange(1, d)), 1)
    D = expm(gamma * b.T - np.conj(gamma) * b)
    assert np.allclose(f.coherent_state(gamma, 30), (D @ vacuum(d))[:30], atol=1e-10)


@pytest.mark.filterwarnings("ignore::UserWarning")
def test_coherent_state_cutoff_too_small():
    with pytest.raises(CutoffTooSmall):
        f.coherent_state(3.0, 8)


def test_psi_gamma_energy_and_symmetry():
    assert f.psi_gamma_energy(1e-6) == pytest.approx(1.0, abs=1e-6)
    assert f.psi_gamma_energy(1.0) == pytest.approx(1 / (1 - math.exp(-1)))
    s = f.psi_gamma_state(1.0, 25)
    assert s.energy() == pytest.approx(f.psi_gamma_energy(1.0), abs=1e-8)
    assert np.allclose(s.swapped().amplitudes, -s.amplitudes)
    assert s.norm() == pytest.approx(1.0, abs=1e-9)


def test_psi_gamma_rejects_zero():
    with pytest.raises(DegenerateState):
        f.psi_gamma_state(0, 10)


def test_psi_n_state():
    d = 5
    s = f.psi_n_state(1, -1, d)
    expected = (np.kron(ket(1, d), ket(0, d)) - np.kron(ket(0, d), ket(1, d))) / math.sqrt(2)
    assert np.allclose(s.amplitudes, expected)
    overlap = abs(np.vdot(s.amplitudes, f.psi_gamma_state(1e-4, d).amplitudes))
    assert overlap == pytest.approx(1.0, abs=1e-7)
    with pytest.raises(CutoffTooSmall):
        f.psi_n_state(5, 1, 5)


def test_tmsv_state():
    assert np.allclose(f.tmsv_state(0, 6).amplitudes, np.kron(vacuum(6), vacuum(6)))
    s = f.tmsv_state(0.5, 40)
    assert abs(s.amplitudes[0]) ** 2 == pytest.approx(0.78645, abs=1e-5)
    assert s.energy() == pytest.approx(g.tmsv_energy(0.5), abs=1e-8)


def test_identity_kraus_sets():
    assert len(f.ql_attenuator_kraus(1.0, 8).operators) == 1
    assert len(f.ql_amplifier_kraus(1.0, 8).operators) == 1
    assert np.allclose(f.ql_attenuator_kraus(1.0, 8).operators[0], np.eye(8))
    rho = f.tmsv_state(0.3, 20).density()
    ks = f.channel_kraus(g.make_channel(1, 0), 20)
    assert np.allclose(f.apply_to_mode(rho, ks, 1).matrix, rho.matrix)


def test_attenuator_is_trace_preserving():
    ks = f.ql_attenuator_kraus(0.37, 15)
    assert np.allclose(ks.completeness(), np.eye(15), atol=1e-12)


def test_amplifier_vacuum_gives_thermal_state():
    # oracle: QL amplifier on vacuum is thermal with mean tau - 1
    tau, d = 1.5, 60
    ks = f.ql_amplifier_kraus(tau, d)
    out = ks.apply_to_operator(np.outer(vacuum(d), vacuum(d)))
    nbar = tau - 1
    n = np.arange(d)
    thermal = nbar**n / (1 + nbar) ** (n + 1)
    assert np.allclose(np.diag(out).real, thermal, atol=1e-12)
    assert np.allclose(out - np.diag(np.diag(out)), 0)


def test_attenuator_coherent_state_stays_pure():
    # oracle: loss maps |gamma> to |sqrt(eta) gamma>
    eta, gamma, d = 0.6, 1.1 + 0.4j, 40
    c = f.coherent_state(gamma, d)
    out = f.ql_attenuator_kraus(eta, d).apply_to_operator(np.outer(c, c.conj()))
    target = f.coherent_state(math.sqrt(eta) * gamma, d)
    assert np.allclose(out, np.outer(target, target.conj()), atol=1e-12)


def test_channel_kraus_thermal_output():
    d = 60
    rho = f.FockDensity(np.outer(np.kron(vacuum(d), vacuum(d)), np.kron(vacuum(d), vacuum(d))), d)
    ks = f.channel_kraus(g.make_channel(2, 1.5), d)
    out = f.apply_to_mode(rho, ks, 1)
    assert f.mean_photon_number(out, mode=1) == pytest.approx(2.0, abs=1e-6)
    assert f.mean_photon_number(out, mode=2) == pytest.approx(0.0, abs=1e-15)


def test_single_photon_loss():
    d = 4
    v10 = np.kron(ket(1, d), ket(0, d))
    v00 = np.kron(ket(0, d), ket(0, d))
    rho = f.FockDensity(np.outer(v10, v10), d)
    out = f.apply_to_mode(rho, f.ql_attenuator_kraus(0.5, d), 1)
    assert np.allclose(out.matrix, 0.5 * np.outer(v10, v10) + 0.5 * np.outer(v00, v00))


def test_coherent_mean_after_loss():
    d = 30
    s = f.FockState.from_modes(f.coherent_state(1.0, d), vacuum(d))
    out = f.apply_channel_pair(s.density(), g.make_channel(0.5, 0.25), g.make_channel(1, 0))
    assert f.mean_photon_number(out) == pytest.approx(0.5, abs=1e-9)


def test_local_channels_commute():
    d = 25
    rho = f.tmsv_state(0.4, d).density()
    k1 = f.channel_kraus(g.make_channel(0.6, 0.3), d)
    k2 = f.channel_kraus(g.make_channel(1.3, 0.2), d)
    a = f.apply_to_mode(f.apply_to_mode(rho, k1, 1), k2, 2)
    b = f.apply_to_mode(f.apply_to_mode(rho, k2, 2), k1, 1)
    assert np.allclose(a.matrix, b.matrix, atol=1e-13)


def test_apply_to_mode_cutoff_mismatch():
    with pytest.raises(DimensionMismatch):
        f.apply_to_mode(f.tmsv_state(0.1, 10).density(), f.ql_attenuator_kraus(0.5, 12), 1)


def test_more_noise_lowers_negativity():
    d = 20
    rho = f.tmsv_state(0.5, d).density()
    values = []
    for a in (0.0, 0.1, 0.2, 0.4):
        p = g.ChannelParams.from_extra_noise(0.7, a)
        values.append(f.negativity(f.apply_channel_pair(rho, p, p)))
    assert all(x > y for x, y in zip(values, values[1:]))


def test_negativity_examples():
    d = 6
    prod = f.FockState.from_modes(f.coherent_state(0.5, d, tol=1e-4), vacuum(d))
    assert f.negativity(prod.density()) == 0
    assert f.negativity(f.psi_n_state(1, -1, d).density()) == pytest.approx(0.5)


def test_tmsv_negativity():
    r, d = 0.5, 40
    s = f.tmsv_state(r, d)
    expected = 0.5 * (math.exp(2 * r) - 1)
    assert f.negativity(s.density()) == pytest.approx(expected, abs=1e-7)
    assert f.pure_state_negativity(s) == pytest.approx(expected, abs=1e-7)


def test_partial_transpose_is_involution_and_mode_independent():
    rho = f.psi_gamma_state(0.7, 15).density()
    pt = f.partial_transpose(rho, 2)
    back = f.partial_transpose(f.FockDensity(pt, 15), 2)
    assert np.allclose(back, rho.matrix)
    assert f.negativity(rho, 1) == pytest.approx(f.negativity(rho, 2), abs=1e-12)


def test_moments_examples():
    d = 30
    m, V = f.moments(f.FockState.from_modes(vacuum(d), vacuum(d)).density())
    assert np.allclose(m, 0) and np.allclose(V, 0.5 * np.eye(4))
    m, V = f.moments(f.FockState.from_modes(f.coherent_state(1.0, d), vacuum(d)).density())
    assert np.allclose(m, [math.sqrt(2), 0, 0, 0], atol=1e-10)
    assert np.allclose(V, 0.5 * np.eye(4), atol=1e-10)
    _, V = f.moments(f.tmsv_state(0.5, d).density())
    assert np.allclose(V, g.tmsv_covariance(0.5), atol=1e-10)


def test_moments_track_covariance_map():
    d = 40
    p1, p2 = g.make_channel(0.6, 0.35), g.make_channel(1.2, 0.15)
    out = f.apply_channel_pair(f.tmsv_state(0.4, d).density(), p1, p2)
    _, V = f.moments(out)
    assert np.allclose(V, g.apply_channel(g.tmsv_covariance(0.4), [p1, p2]), atol=1e-6)


@pytest.mark.parametrize("tau", [1.05, 1.1, 2.0])
def test_amplifier_completeness_deficit_is_negative_binomial_tail(tau):
    # level n leaks the probability that the amplifier adds more than d-1-n
    # photons: a negative-binomial tail with n+1 successes at p = 1/tau
    from scipy.stats import nbinom

    d = 40
    ks = f.ql_amplifier_kraus(tau, d)
    diag = np.diag(ks.completeness()).real
    n = np.arange(d)
    assert np.allclose(diag, nbinom.cdf(d - 1 - n, n + 1, 1 / tau), atol=1e-13)
    worst = nbinom.sf(d - 1 - (d - ks.guard - 1), d - ks.guard, 1 / tau)
    assert ks.truncation_error == pytest.approx(worst, rel=1e-6)
