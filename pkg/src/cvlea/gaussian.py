"""Gaussian-sector calculus for phase-insensitive one-mode channels.

Conventions: quadratures ordered ``(x1, y1, ..., xN, yN)``, ``[q, p] = i`` and
the vacuum covariance matrix is ``I / 2``.  A channel ``Phi(kappa, mu)`` acts on
covariance matrices as ``V -> kappa * V + mu * I`` on the mode it addresses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, InvalidChannel, NonConvergence

# absolute slack on symplectic-eigenvalue comparisons
PHYSICAL_ATOL = 1e-9
# relative slack, scaled by the largest matrix entry; a float covariance
# matrix with entries ~1e8 only resolves its small symplectic eigenvalue
# to ~1e-8, so a purely absolute threshold misclassifies boundary states
PHYSICAL_RTOL = 1e-15

# squeezing used as the r -> infinity proxy for two-mode squeezed vacuum
LARGE_SQUEEZING = 10.0


@dataclass(frozen=True)
class ChannelParams:
    """One-mode attenuator/amplifier ``Phi(kappa, mu)``.

    Use :func:`make_channel` (or :meth:`from_extra_noise`) to build validated
    instances; direct construction validates as well.
    """

    kappa: float
    mu: float

    def __post_init__(self):
        if not self.kappa > 0:
            raise InvalidChannel(f"kappa must be positive, got {self.kappa!r}")
        if not self.mu >= 0.5 * abs(self.kappa - 1.0):
            raise InvalidChannel(
                f"mu={self.mu!r} below the quantum limit "
                f"{0.5 * abs(self.kappa - 1.0)!r} for kappa={self.kappa!r}"
            )

    @classmethod
    def from_extra_noise(cls, kappa: float, a: float) -> "ChannelParams":
        if a < 0:
            raise InvalidChannel(f"extra noise must be nonnegative, got {a!r}")
        return cls(float(kappa), 0.5 * abs(kappa - 1.0) + float(a))

    @property
    def mu_ql(self) -> float:
        return 0.5 * abs(self.kappa - 1.0)

    @property
    def a(self) -> float:
        """Extra noise above the quantum limit."""
        return max(self.mu - self.mu_ql, 0.0)

    @property
    def tau(self) -> float:
        """Gain of the quantum-limited amplifier stage."""
        return max(self.kappa, 1.0) + self.a

    @property
    def eta(self) -> float:
        """Transmissivity of the quantum-limited attenuator stage."""
        return self.kappa / self.tau

    @property
    def is_quantum_limited(self) -> bool:
        return self.a == 0.0


def make_channel(kappa: float, mu: float) -> ChannelParams:
    return ChannelParams(float(kappa), float(mu))


def quantum_limited_noise(kappa: float) -> float:
    return 0.5 * abs(kappa - 1.0)


def is_entanglement_breaking(p: ChannelParams) -> bool:
    return p.a >= min(p.kappa, 1.0)


def is_nlea_gaussian(p: ChannelParams) -> bool:
    """True iff ``Phi^{(x)N}`` disentangles every Gaussian state, for any N >= 2."""
    return p.mu >= 0.5


def symplectic_form(n_modes: int) -> np.ndarray:
    return np.kron(np.eye(n_modes), np.array([[0.0, -1.0], [1.0, 0.0]]))


def _as_covariance(V) -> np.ndarray:
    V = np.asarray(V, dtype=float)
    if V.ndim != 2 or V.shape[0] != V.shape[1] or V.shape[0] % 2:
        raise DimensionMismatch(f"covariance matrix must be 2N x 2N, got {V.shape}")
    return V


def apply_channel(V, channels: Sequence[ChannelParams]) -> np.ndarray:
    """Apply ``Phi_1 (x) ... (x) Phi_N`` to a covariance matrix.

    The output is ``K^T V K + M`` with ``K = diag(sqrt(kappa_i) I_2)`` and
    ``M = diag(mu_i I_2)``.
    """
    return covariance_map(V, [c.kappa for c in channels], [c.mu for c in channels])


def covariance_map(V, kappas: Sequence[float], mus: Sequence[float]) -> np.ndarray:
    """``V -> K^T V K + M`` for arbitrary per-mode ``(kappa, mu)``.

    No complete-positivity check: with ``mu`` below the quantum limit this is
    the formal map, useful for locating boundaries that fall outside the set
    of valid channels.
    """
    V = _as_covariance(V)
    n_modes = V.shape[0] // 2
    if len(kappas) != n_modes or len(mus) != n_modes:
        raise DimensionMismatch(
            f"{len(kappas)} channels for a {n_modes}-mode covariance matrix"
        )
    k = np.repeat(np.sqrt(np.asarray(kappas, dtype=float)), 2)
    m = np.repeat(np.asarray(mus, dtype=float), 2)
    return k[:, None] * V * k[None, :] + np.diag(m)


def tmsv_covariance(r: float) -> np.ndarray:
    if r < 0:
        raise ValueError("squeezing must be nonnegative")
    c, s = math.cosh(2 * r), math.sinh(2 * r)
    return 0.5 * np.array(
        [
            [c, 0.0, s, 0.0],
            [0.0, c, 0.0, -s],
            [s, 0.0, c, 0.0],
            [0.0, -s, 0.0, c],
        ]
    )


def tmsv_energy(r: float) -> float:
    """Mean photon number ``cosh 2r - 1`` of the two-mode squeezed vacuum."""
    return math.cosh(2 * r) - 1.0


def tmsv_squeezing(energy: float) -> float:
    """Inverse of :func:`tmsv_energy`."""
    if energy < 0:
        raise ValueError("energy must be nonnegative")
    return 0.5 * math.acosh(1.0 + energy)


def symplectic_eigenvalues(V) -> np.ndarray:
    """Symplectic spectrum of ``V`` in ascending order, one value per mode.

    The magnitudes of the eigenvalues of ``i Delta V`` come in ``+-nu`` pairs.
    For positive-definite ``V`` the spectrum is taken from the Hermitian
    matrix ``L^T (i Delta) L`` (``V = L L^T``), otherwise from ``Delta V``.
    """
    V = _as_covariance(V)
    if not np.allclose(V, V.T, rtol=1e-12, atol=1e-12 * max(1.0, np.abs(V).max())):
        raise ValueError("covariance matrix must be symmetric")
    n = V.shape[0] // 2
    omega = symplectic_form(n)
    try:
        try:
            L = np.linalg.cholesky(V)
            ev = np.linalg.eigvalsh(L.T @ (1j * omega) @ L)
        except np.linalg.LinAlgError:
            ev = np.linalg.eigvals(omega @ V)
    except np.linalg.LinAlgError as exc:
        raise NonConvergence(str(exc)) from exc
    mags = np.sort(np.abs(ev))
    return 0.5 * (mags[0::2] + mags[1::2])


def physicality_tolerance(V, atol: float = PHYSICAL_ATOL, rtol: float = PHYSICAL_RTOL) -> float:
    return atol + rtol * float(np.abs(V).max())


def is_physical(V, atol: float = PHYSICAL_ATOL) -> bool:
    V = _as_covariance(V)
    return bool(symplectic_eigenvalues(V)[0] >= 0.5 - physicality_tolerance(V, atol))


def partial_transpose_covariance(V, mode: int = 2) -> np.ndarray:
    """Partial transposition of ``mode`` (1-based): flip the sign of its y quadrature."""
    V = _as_covariance(V)
    flip = np.ones(V.shape[0])
    flip[2 * (mode - 1) + 1] = -1.0
    return flip[:, None] * V * flip[None, :]


def min_pt_symplectic_eigenvalue(V) -> float:
    return float(symplectic_eigenvalues(partial_transpose_covariance(V))[0])


def simon_separable(V, atol: float = PHYSICAL_ATOL) -> bool:
    """Simon's PPT test; exact separability decision for two-mode Gaussian states."""
    V = _as_covariance(V)
    if V.shape != (4, 4):
        raise DimensionMismatch("Simon's criterion needs a two-mode covariance matrix")
    return min_pt_symplectic_eigenvalue(V) >= 0.5 - physicality_tolerance(V, atol)


def tmsv_survival_max_noise(kappa: float, energy: float) -> float:
    """Largest total noise for which TMSV of the given energy stays entangled
    under ``Phi(kappa, mu) (x) Phi(kappa, mu)`` (strict inequality)."""
    if kappa <= 0 or energy <= 0:
        raise ValueError("kappa and energy must be positive")
    return 0.5 * (1.0 - kappa + kappa * (math.sqrt(energy * (2.0 + energy)) - energy))


def corollary2_annihilates(channels: Sequence[ChannelParams]) -> bool:
    """Sufficient test that the product channel disentangles all Gaussian inputs.

    Every mode is tried as the distinguished one; the remaining modes set
    ``s = min (2 mu_i - 1) / kappa_i``.
    """
    if len(channels) < 2:
        raise DimensionMismatch("need at least two modes")
    ratios = [(2.0 * c.mu - 1.0) / c.kappa for c in channels]
    for j, cj in enumerate(channels):
        s = min(r for i, r in enumerate(ratios) if i != j)
        if s >= 0 and cj.mu >= 0.5 * (1.0 - s * cj.kappa):
            return True
    return False


def corollary3_annihilates(p1: ChannelParams, p2: ChannelParams) -> bool:
    """Exact two-mode test: ``kappa1 mu2 + kappa2 mu1 >= (kappa1 + kappa2) / 2``."""
    return p1.kappa * p2.mu + p2.kappa * p1.mu >= 0.5 * (p1.kappa + p2.kappa)


def corollary3_critical_noise(kappa1: float, kappa2: float, mu1: float) -> float:
    """Total noise on mode 2 at which the two-mode separability inequality becomes tight."""
    return (0.5 * (kappa1 + kappa2) - kappa2 * mu1) / kappa1


def tmsv_output_separable(r: float, p1: ChannelParams, p2: ChannelParams) -> bool:
    return simon_separable(apply_channel(tmsv_covariance(r), [p1, p2]))
