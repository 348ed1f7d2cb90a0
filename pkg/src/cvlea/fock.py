"""Truncated Fock-space simulator for two-mode states and one-mode channels.

Two-mode vectors are indexed ``n1 * d + n2``; density matrices are stored as
``(d*d, d*d)`` arrays.  Channels are applied through sparse superoperators of
their Kraus sets, so a composed channel never materializes the product list.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sp
from scipy.special import gammaln

from .errors import CutoffTooSmall, DegenerateState, DimensionMismatch, NonConvergence
from .gaussian import ChannelParams

TRUNCATION_TOL = 1e-8
NEGATIVE_EIGENVALUE_FLOOR = 1e-9


def guard_band(d: int) -> int:
    return math.ceil(d / 4)


def _check_cutoff(d: int) -> int:
    if int(d) != d or d < 2:
        raise ValueError(f"cutoff must be an integer >= 2, got {d!r}")
    return int(d)


def coherent_amplitudes(gamma: complex, d: int, tol: float = TRUNCATION_TOL) -> np.ndarray:
    """``<n|gamma>`` for ``n < d``; raises if the discarded mass exceeds ``tol``."""
    d = _check_cutoff(d)
    n = np.arange(d)
    g2 = abs(gamma) ** 2
    if gamma == 0:
        out = np.zeros(d, dtype=complex)
        out[0] = 1.0
        return out
    if g2 > d:
        warnings.warn(f"|gamma|^2={g2:.3g} is not small compared to the cutoff {d}")
    log_mag = -0.5 * g2 + n * math.log(abs(gamma)) - 0.5 * gammaln(n + 1)
    out = np.exp(log_mag) * np.exp(1j * np.angle(gamma) * n)
    tail = 1.0 - float(np.sum(np.abs(out) ** 2))
    if tail > tol:
        raise CutoffTooSmall(f"coherent state |{gamma}> loses {tail:.3g} of its norm at d={d}")
    return out


# alias matching the other state builders
coherent_state = coherent_amplitudes


@dataclass(frozen=True)
class FockState:
    """Pure two-mode state truncated to ``d`` levels per mode."""

    amplitudes: np.ndarray
    d: int

    def __post_init__(self):
        if self.amplitudes.shape != (self.d * self.d,):
            raise DimensionMismatch("amplitude vector must have length d**2")

    @classmethod
    def from_modes(cls, psi1: np.ndarray, psi2: np.ndarray) -> "FockState":
        if psi1.shape != psi2.shape:
            raise DimensionMismatch("mode vectors must share the cutoff")
        return cls(np.kron(psi1, psi2).astype(complex), psi1.shape[0])

    @property
    def matrix(self) -> np.ndarray:
        """Amplitudes reshaped to ``(n1, n2)``."""
        return self.amplitudes.reshape(self.d, self.d)

    def density(self) -> "FockDensity":
        return FockDensity(np.outer(self.amplitudes, self.amplitudes.conj()), self.d)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def energy(self) -> float:
        p = np.abs(self.matrix) ** 2
        n = np.arange(self.d)
        return float(np.sum(p * (n[:, None] + n[None, :])))

    def swapped(self) -> "FockState":
        return FockState(self.matrix.T.reshape(-1).copy(), self.d)

    def schmidt_coefficients(self) -> np.ndarray:
        return np.linalg.svd(self.matrix, compute_uv=False)


@dataclass(frozen=True)
class FockDensity:
    """Two-mode density operator truncated to ``d`` levels per mode."""

    matrix: np.ndarray
    d: int

    def __post_init__(self):
        n = self.d * self.d
        if self.matrix.shape != (n, n):
            raise DimensionMismatch(f"density matrix must be {n}x{n}")

    @property
    def tensor(self) -> np.ndarray:
        """View with axes ``(i1, i2, j1, j2)``."""
        return self.matrix.reshape(self.d, self.d, self.d, self.d)

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def normalized(self) -> "FockDensity":
        return FockDensity(self.matrix / self.trace(), self.d)

    def is_hermitian(self, atol: float = 1e-10) -> bool:
        return bool(np.allclose(self.matrix, self.matrix.conj().T, atol=atol, rtol=0))

    def reduced(self, mode: int) -> np.ndarray:
        t = self.tensor
        if mode == 1:
            return np.einsum("ikjk->ij", t)
        return np.einsum("kikj->ij", t)

    def level_populations(self) -> np.ndarray:
        """Diagonal reshaped to ``(n1, n2)``."""
        return np.diag(self.matrix).real.reshape(self.d, self.d)


def product_density(rho1: np.ndarray, rho2: np.ndarray) -> FockDensity:
    return FockDensity(np.kron(rho1, rho2).astype(complex), rho1.shape[0])


def psi_gamma_state(gamma: complex, d: int) -> FockState:
    """``(|gamma>|0> - |0>|gamma>) / sqrt(2 (1 - exp(-|gamma|^2)))``."""
    if gamma == 0:
        raise DegenerateState("gamma = 0 gives the zero vector")
    coh = coherent_amplitudes(gamma, d)
    vac = np.zeros(d, dtype=complex)
    vac[0] = 1.0
    amp = np.kron(coh, vac) - np.kron(vac, coh)
    norm = math.sqrt(-2.0 * math.expm1(-abs(gamma) ** 2))
    return FockState(amp / norm, d)


def psi_gamma_energy(gamma: complex) -> float:
    g2 = abs(gamma) ** 2
    return g2 / -math.expm1(-g2)


def psi_n_state(n: int, sign: int, d: int) -> FockState:
    """``(|n>|0> + sign |0>|n>) / sqrt(2)``."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if n < 1:
        raise ValueError("n must be a positive integer")
    if n >= d:
        raise CutoffTooSmall(f"level {n} does not fit below cutoff {d}")
    amp = np.zeros(d * d, dtype=complex)
    amp[n * d] = 1.0
    amp[n] = sign
    return FockState(amp / math.sqrt(2.0), d)


def tmsv_state(r: float, d: int, tol: float = TRUNCATION_TOL) -> FockState:
    """Two-mode squeezed vacuum ``sqrt(1 - t^2) sum_n t^n |n>|n>``, ``t = tanh r``."""
    d = _check_cutoff(d)
    if r < 0:
        raise ValueError("squeezing must be nonnegative")
    t = math.tanh(r)
    coeff = math.sqrt(1 - t * t) * t ** np.arange(d)
    lost = t ** (2 * d)
    if lost > tol:
        raise CutoffTooSmall(f"TMSV r={r} loses {lost:.3g} of its norm at d={d}")
    amp = np.zeros((d, d), dtype=complex)
    amp[np.arange(d), np.arange(d)] = coeff
    return FockState(amp.reshape(-1), d)


# ---------------------------------------------------------------------------
# Kraus sets


def _log_binom(n, k):
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


def attenuator_operators(eta: float, d: int) -> list[np.ndarray]:
    """Amplitude-damping ladder ``A_k = sum_n sqrt(C(n,k) eta^(n-k) (1-eta)^k) |n-k><n|``."""
    if not 0 < eta <= 1:
        raise ValueError(f"eta must lie in (0, 1], got {eta!r}")
    if eta == 1:
        return [np.eye(d, dtype=complex)]
    ops = []
    n = np.arange(d)
    for k in range(d):
        m = n[k:]
        log_c = 0.5 * (_log_binom(m, k) + (m - k) * math.log(eta) + k * math.log1p(-eta))
        A = np.zeros((d, d), dtype=complex)
        A[m - k, m] = np.exp(log_c)
        ops.append(A)
    return ops


def amplifier_operators(tau: float, d: int) -> list[np.ndarray]:
    """Quantum-limited amplifier from the two-mode-squeezer dilation,
    ``B_k = sum_n sqrt(C(n+k,k) (1-1/tau)^k / tau^(n+1)) |n+k><n|``, truncated
    to ``k < d`` and outputs below the cutoff."""
    if not tau >= 1:
        raise ValueError(f"tau must be >= 1, got {tau!r}")
    if tau == 1:
        return [np.eye(d, dtype=complex)]
    ops = []
    n = np.arange(d)
    log_x = math.log1p(-1.0 / tau)
    for k in range(d):
        m = n[: d - k]
        log_c = 0.5 * (_log_binom(m + k, k) + k * log_x - (m + 1) * math.log(tau))
        B = np.zeros((d, d), dtype=complex)
        B[m + k, m] = np.exp(log_c)
        ops.append(B)
    return ops


def _superoperator(ops: list[np.ndarray]) -> sp.csr_matrix:
    """Row-major vectorization: ``vec(A X A^dag) = (A (x) conj(A)) vec(X)``."""
    total = None
    for A in ops:
        As = sp.csr_matrix(A)
        term = sp.kron(As, As.conj(), format="csr")
        total = term if total is None else total + term
    return total


@dataclass(frozen=True)
class KrausSet:
    """One-mode channel on a ``d``-level truncation as a sequence of Kraus stages.

    Stages are applied first to last; the effective operator list is the set of
    all products across stages.
    """

    stages: tuple[tuple[np.ndarray, ...], ...]
    d: int
    guard: int = field(default=-1)

    def __post_init__(self):
        if self.guard < 0:
            object.__setattr__(self, "guard", guard_band(self.d))

    @property
    def operators(self) -> list[np.ndarray]:
        ops = [np.eye(self.d, dtype=complex)]
        for stage in self.stages:
            ops = [B @ A for B in stage for A in ops]
        return ops

    @cached_property
    def superoperator(self) -> sp.csr_matrix:
        S = sp.identity(self.d * self.d, dtype=complex, format="csr")
        for stage in self.stages:
            S = _superoperator(list(stage)) @ S
        return S.tocsr()

    def completeness(self) -> np.ndarray:
        """``sum_k A_k^dag A_k`` over the effective operator list."""
        E = np.eye(self.d, dtype=complex)
        for stage in reversed(self.stages):
            E = sum(A.conj().T @ E @ A for A in stage)
        return E

    @property
    def truncation_error(self) -> float:
        """Largest deviation of the completeness relation from identity on
        levels below the guard band."""
        m = self.d - self.guard
        E = self.completeness()[:m, :m]
        return float(np.abs(E - np.eye(m)).max())

    def apply_to_operator(self, X: np.ndarray) -> np.ndarray:
        d = self.d
        return (self.superoperator @ X.reshape(-1)).reshape(d, d)


def ql_attenuator_kraus(eta: float, d: int) -> KrausSet:
    d = _check_cutoff(d)
    return KrausSet((tuple(attenuator_operators(eta, d)),), d)


def ql_amplifier_kraus(tau: float, d: int) -> KrausSet:
    d = _check_cutoff(d)
    return KrausSet((tuple(amplifier_operators(tau, d)),), d)


def channel_kraus(p: ChannelParams, d: int, tol: float | None = None) -> KrausSet:
    """Kraus stages of ``Phi(kappa, mu)``: attenuator ``eta`` then amplifier ``tau``.

    With ``tol`` given, raise :class:`CutoffTooSmall` when the guarded
    completeness deficit exceeds it.
    """
    d = _check_cutoff(d)
    stages = []
    if p.eta < 1:
        stages.append(tuple(attenuator_operators(p.eta, d)))
    if p.tau > 1:
        stages.append(tuple(amplifier_operators(p.tau, d)))
    ks = KrausSet(tuple(stages), d)
    if tol is not None and ks.truncation_error > tol:
        raise CutoffTooSmall(
            f"Kraus completeness deficit {ks.truncation_error:.3g} exceeds {tol:.3g} "
            f"at d={d} (tau={p.tau:.4g})"
        )
    return ks


def recommended_cutoff(tau: float, mean_photons: float) -> int:
    return max(20, math.ceil(8 * tau * (1 + mean_photons)))


def apply_to_mode(rho: FockDensity, ks: KrausSet, mode: int) -> FockDensity:
    """``sum_k (A_k (x) I) rho (A_k (x) I)^dag`` (or ``I (x) A_k`` for mode 2)."""
    if ks.d != rho.d:
        raise DimensionMismatch(f"Kraus cutoff {ks.d} != state cutoff {rho.d}")
    if mode not in (1, 2):
        raise ValueError("mode must be 1 or 2")
    if not ks.stages:
        return rho
    d = rho.d
    t = rho.tensor  # (i1, i2, j1, j2)
    if mode == 1:
        M = t.transpose(0, 2, 1, 3).reshape(d * d, d * d)
        out = np.asarray(ks.superoperator @ M).reshape(d, d, d, d).transpose(0, 2, 1, 3)
    else:
        M = t.transpose(1, 3, 0, 2).reshape(d * d, d * d)
        out = np.asarray(ks.superoperator @ M).reshape(d, d, d, d).transpose(2, 0, 3, 1)
    return FockDensity(np.ascontiguousarray(out).reshape(d * d, d * d), d)


def apply_channels(rho: FockDensity, ks1: KrausSet | None, ks2: KrausSet | None) -> FockDensity:
    if ks1 is not None:
        rho = apply_to_mode(rho, ks1, 1)
    if ks2 is not None:
        rho = apply_to_mode(rho, ks2, 2)
    return rho


def apply_channel_pair(rho: FockDensity, p1: ChannelParams, p2: ChannelParams) -> FockDensity:
    return apply_channels(rho, channel_kraus(p1, rho.d), channel_kraus(p2, rho.d))


# ---------------------------------------------------------------------------
# entanglement and moments


def partial_transpose(rho: FockDensity, mode: int = 2) -> np.ndarray:
    d = rho.d
    t = rho.tensor
    if mode == 1:
        pt = t.transpose(2, 1, 0, 3)
    elif mode == 2:
        pt = t.transpose(0, 3, 2, 1)
    else:
        raise ValueError("mode must be 1 or 2")
    return pt.reshape(d * d, d * d)


def negativity(rho: FockDensity, mode: int = 2, floor: float = NEGATIVE_EIGENVALUE_FLOOR) -> float:
    """Sum of magnitudes of the negative partial-transpose eigenvalues."""
    pt = partial_transpose(rho, mode)
    pt = 0.5 * (pt + pt.conj().T)
    try:
        ev = np.linalg.eigvalsh(pt)
    except np.linalg.LinAlgError as exc:
        raise NonConvergence(str(exc)) from exc
    neg = ev[ev < -floor]
    return float(np.abs(neg).sum())


def pure_state_negativity(state: FockState) -> float:
    """``((sum of Schmidt coefficients)^2 - 1) / 2``."""
    s = state.schmidt_coefficients()
    return 0.5 * (s.sum() ** 2 - 1.0)


def _annihilator(d: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, d)), 1).astype(complex)


def moments(rho: FockDensity) -> tuple[np.ndarray, np.ndarray]:
    """Mean vector and symmetrized covariance matrix of ``(q1, p1, q2, p2)``.

    ``q = (b + b^dag)/sqrt(2)``, ``p = (b - b^dag)/(i sqrt(2))``.  The state is
    normalized by its trace first.  Products are formed in the untruncated
    operator algebra, so ``q^2`` does not pick up the spurious top-level term
    of the truncated ``b b^dag``.
    """
    d = rho.d
    r = rho.normalized()
    b = _annihilator(d)
    eye = np.eye(d)
    n = np.diag(np.arange(d, dtype=float))
    bb = b @ b
    s2 = math.sqrt(2.0)
    # single-mode operators: linear, quadratic (symmetrized)
    q = (b + b.conj().T) / s2
    p = (b - b.conj().T) / (1j * s2)
    # q^2 = (b^2 + b^dag^2 + 2 n + 1)/2, p^2 = (-b^2 - b^dag^2 + 2 n + 1)/2,
    # (qp + pq)/2 = (b^2 - b^dag^2)/(2i)
    qq = (bb + bb.conj().T + 2 * n + eye) / 2
    pp = (-bb - bb.conj().T + 2 * n + eye) / 2
    qp = (bb - bb.conj().T) / 2j

    rho1 = r.reduced(1)
    rho2 = r.reduced(2)
    lin = [q, p]
    quad = [[qq, qp], [qp, pp]]

    def ev(op, red):
        return float(np.trace(red @ op).real)

    mean = np.array([ev(q, rho1), ev(p, rho1), ev(q, rho2), ev(p, rho2)])
    V = np.zeros((4, 4))
    for i in range(2):
        for j in range(2):
            V[i, j] = ev(quad[i][j], rho1)
            V[2 + i, 2 + j] = ev(quad[i][j], rho2)
    t = r.tensor
    for i in range(2):
        for j in range(2):
            # <X1 (x) Y2> = sum rho[a,b,c,e] X[c,a] Y[e,b]
            cross = np.einsum("abce,ca,eb->", t, lin[i], lin[j]).real
            V[i, 2 + j] = V[2 + j, i] = cross
    V -= np.outer(mean, mean)
    return mean, V


def mean_photon_number(rho: FockDensity, mode: int | None = None) -> float:
    r = rho.normalized()
    n = np.arange(r.d)
    pops = r.level_populations()
    if mode == 1:
        return float(np.sum(pops * n[:, None]))
    if mode == 2:
        return float(np.sum(pops * n[None, :]))
    return float(np.sum(pops * (n[:, None] + n[None, :])))


def tail_mass(rho: FockDensity, guard: int | None = None) -> float:
    """Population on levels inside the top guard band of either mode."""
    g = guard_band(rho.d) if guard is None else guard
    pops = rho.level_populations()
    m = rho.d - g
    return float(pops.sum() - pops[:m, :m].sum())
