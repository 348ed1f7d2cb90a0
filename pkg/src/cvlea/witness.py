"""Coherent-state swap witness and non-Gaussian survival regions.

The witness is ``W_lam = int d2a/pi d2b/pi exp(lam(|a|^2+|b|^2)) |a><b| (x) |b><a|``,
in the Fock basis ``sum_{m,n} (1-lam)^-(m+n+2) |m,n><n,m|``.  It is evaluated
on ``(Phi1 (x) Phi2)[|psi><psi|]`` with
``|psi> ~ |gamma>|0> - |0>|gamma>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import CutoffTooSmall, DomainError
from .fock import FockDensity, guard_band
from .gaussian import ChannelParams

DETECTION_THRESHOLD = -1e-12
DEFAULT_GAMMA = 1e-3
# closest approach of the lambda grid to lambda0; below ~1e-9 the rounding
# error of the average's numerator exceeds its true size
LAMBDA_OFFSET_FLOOR = 1e-9


@dataclass(frozen=True)
class WitnessEval:
    lam: float
    value: float
    lambda0: float
    detected: bool


def lambda0(tau1: float, tau2: float) -> float:
    """Upper end of the range where the closed-form average is finite."""
    if tau1 < 1 or tau2 < 1:
        raise ValueError("gains must be >= 1")
    return 1.0 - math.sqrt((tau1 - 1.0) * (tau2 - 1.0) / (tau1 * tau2))


def _terms(p1: ChannelParams, p2: ChannelParams, lam):
    """Pieces of the closed form, arranged to survive ``lam -> lambda0``.

    Returns ``(C, NA, NB, D)``: the cross-term exponent coefficient ``C`` and
    the differences ``NA = D (C - A)``, ``NB = D (C - B)`` to the two diagonal
    coefficients, written as polynomials in ``lam`` so that the ``1/D``
    divergences cancel before any division.
    """
    t1, t2, e1, e2 = p1.tau, p2.tau, p1.eta, p2.eta
    u = 1.0 - lam
    l0 = lambda0(t1, t2)
    # factored form of t1 t2 u^2 - (t1-1)(t2-1)
    D = t1 * t2 * (l0 - lam) * (2.0 - lam - l0)
    w = lam * (2.0 - lam)
    s = math.sqrt(e1 * t1 * e2 * t2)
    NA = D - s * u - e1 * t1 * (1.0 - w * t2)
    NB = D - s * u - e2 * t2 * (1.0 - w * t1)
    with np.errstate(divide="ignore"):
        C = 1.0 - s * u / D
    return C, NA, NB, D


def witness_average_closed_form(p1: ChannelParams, p2: ChannelParams, gamma: complex, lam):
    """Closed-form ``tr{W_lam (Phi1 (x) Phi2)[|psi><psi|]}``.

    Equal to ``[2 (1 - e^{-g}) D]^{-1} (e^{-A g} + e^{-B g} - 2 e^{-C g})`` with
    ``g = |gamma|^2``; the factor 2 comes from the normalization of ``|psi>``,
    so at ``lam = 0`` with identity channels the result is the swap
    expectation ``-1``.  Accepts scalar or array ``lam``; every entry must lie
    below :func:`lambda0`.
    """
    if gamma == 0:
        raise DomainError("gamma must be nonzero")
    lam_arr = np.asarray(lam, dtype=float)
    l0 = lambda0(p1.tau, p2.tau)
    if np.any(lam_arr >= l0):
        raise DomainError(f"lambda must stay below lambda0={l0:.6g}")
    g2 = abs(gamma) ** 2
    C, NA, NB, D = _terms(p1, p2, lam_arr)
    # e^{-Ag} + e^{-Bg} - 2e^{-Cg} = e^{-Cg} (expm1(g NA/D) + expm1(g NB/D))
    with np.errstate(over="ignore", invalid="ignore"):
        bracket = np.expm1(g2 * NA / D) + np.expm1(g2 * NB / D)
        value = np.exp(-C * g2) * bracket / (-2.0 * math.expm1(-g2) * D)
    return float(value) if value.ndim == 0 else value


def detection_margin(p1: ChannelParams, p2: ChannelParams, lam):
    """``|gamma| -> 0`` limit of the closed-form average (negative = detected)."""
    lam_arr = np.asarray(lam, dtype=float)
    _, NA, NB, D = _terms(p1, p2, lam_arr)
    value = (NA + NB) / (2.0 * D * D)
    return float(value) if np.ndim(value) == 0 else value


def witness_weights(lam: float, d: int, form: str = "W") -> np.ndarray:
    """``w[m, n]`` such that the witness is ``sum w[m,n] |m,n><n,m|``.

    ``form="W"``: ``(1 - lam)^-(m+n+2)``.  ``form="geometric"``: ``lam^(m+n)``,
    the operator ``sum lam^(i+j) |i><j| (x) |j><i|``.
    """
    n = np.arange(d)
    s = n[:, None] + n[None, :]
    if form == "W":
        if lam >= 1:
            raise DomainError("the coherent-state witness needs lambda < 1")
        return (1.0 - lam) ** (-(s + 2.0))
    if form == "geometric":
        return float(lam) ** s.astype(float)
    raise ValueError(f"unknown witness form {form!r}")


def witness_fock_matrix(lam: float, d: int, form: str = "W") -> np.ndarray:
    w = witness_weights(lam, d, form)
    m, n = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    W = np.zeros((d * d, d * d))
    W[(m * d + n).ravel(), (n * d + m).ravel()] = w.ravel()
    return W


def witness_average_numeric(
    rho: FockDensity, lam: float, tol: float = 1e-8, form: str = "W"
) -> float:
    """``tr{W rho}`` on the truncated space.

    Raises :class:`CutoffTooSmall` when the terms carried by guard-band levels
    exceed ``tol`` in magnitude, i.e. when the weighted tail has not decayed.
    """
    d = rho.d
    w = witness_weights(lam, d, form)
    t = rho.tensor
    m = np.arange(d)
    # tr(W rho) = sum_{m,n} w[m,n] rho[(n,m),(m,n)]
    terms = w * t[m[None, :], m[:, None], m[:, None], m[None, :]]
    g = guard_band(d)
    keep = d - g
    tail = np.abs(terms).sum() - np.abs(terms[:keep, :keep]).sum()
    if tail > tol:
        raise CutoffTooSmall(f"witness tail {tail:.3g} exceeds {tol:.3g} at d={d}, lambda={lam}")
    return float(terms.sum().real)


def product_state_expectation(xi: np.ndarray, upsilon: np.ndarray, lam: float) -> float:
    """``<xi, upsilon| W_lam |xi, upsilon>`` for one-mode amplitude vectors."""
    W = witness_fock_matrix(lam, xi.shape[0])
    v = np.kron(xi, upsilon)
    return float(np.vdot(v, W @ v).real)


def evaluate(p1: ChannelParams, p2: ChannelParams, gamma: complex, lam: float) -> WitnessEval:
    l0 = lambda0(p1.tau, p2.tau)
    value = witness_average_closed_form(p1, p2, gamma, lam)
    return WitnessEval(lam, value, l0, value < DETECTION_THRESHOLD)


# ---------------------------------------------------------------------------
# regions and thresholds


def prop2_region(p1: ChannelParams, p2: ChannelParams) -> bool:
    """Survival region of ``|psi>`` stated in ``(kappa, a)`` per gain/loss branch."""
    k1, a1, k2, a2 = p1.kappa, p1.a, p2.kappa, p2.a
    if k1 < 1 and k2 < 1:
        return (a1 < k1 * (1 + a2) / (2 * (1 + a2) - k2)
                and a2 < k2 * (1 + a1) / (2 * (1 + a1) - k1))
    if k1 >= 1 and k2 >= 1:
        return a1 < 1 - k1 * a2 / (k2 + 2 * a2) and a2 < 1 - k2 * a1 / (k1 + 2 * a1)
    if k1 >= 1:  # mixed case with the amplifier on mode 1
        k1, a1, k2, a2 = k2, a2, k1, a1
    return (a1 < k1 * (k2 + a2) / (k2 + 2 * a2)
            and a2 < 1 - k2 * (1 + a1 - k1) / (2 * (1 + a1) - k1))


def prop2_region_eta_tau(p1: ChannelParams, p2: ChannelParams) -> bool:
    e1, e2, t1, t2 = p1.eta, p2.eta, p1.tau, p2.tau
    return 2 - e1 - t2 * (2 - e1 - e2) > 0 and 2 - e2 - t1 * (2 - e1 - e2) > 0


def corollary4_threshold(kappa: float) -> float:
    """Total noise ``sqrt(kappa^2 + 1) / 2`` below which ``Phi (x) Phi`` keeps ``|psi>`` entangled."""
    return 0.5 * math.sqrt(kappa * kappa + 1.0)


def symmetric_extra_noise_threshold(kappa: float) -> float:
    return 0.5 * (math.sqrt(kappa * kappa + 1.0) - abs(kappa - 1.0))


def default_lambda_grid(lam0: float, n_points: int = 256, lo: float = -4.0) -> np.ndarray:
    """Coarse sweep over ``[lo, lam0)`` merged with a geometric approach to ``lam0``."""
    n_coarse = n_points // 2
    coarse = np.linspace(lo, lam0, n_coarse, endpoint=False)
    offsets = np.geomspace(LAMBDA_OFFSET_FLOOR, lam0 - lo, n_points - n_coarse)
    fine = lam0 - offsets
    grid = np.unique(np.concatenate([coarse, fine]))
    return grid[(grid < lam0) & (grid >= lo)]


def small_gamma_optimal_lambda(p1: ChannelParams, p2: ChannelParams) -> float | None:
    """Minimizer below ``lambda0`` of the small-``gamma`` numerator, or ``None``.

    In ``u = 1 - lam`` the numerator ``D (2C - A - B)`` is the quadratic
    ``t1 t2 (2 - e1 - e2) u^2 - 2 sqrt(e1 t1 e2 t2) u + const``; when its vertex
    lies beyond ``u0 = 1 - lambda0`` the detection window can be narrower than
    the grid spacing, so the vertex is added to the scan explicitly.
    """
    t1, t2, e1, e2 = p1.tau, p2.tau, p1.eta, p2.eta
    curv = t1 * t2 * (2.0 - e1 - e2)
    if curv <= 0:
        return None
    u_star = math.sqrt(e1 * t1 * e2 * t2) / curv
    lam_star = 1.0 - u_star
    return lam_star if lam_star < lambda0(t1, t2) else None


def witness_lambda_grid(p1: ChannelParams, p2: ChannelParams, n_points: int = 256) -> np.ndarray:
    grid = default_lambda_grid(lambda0(p1.tau, p2.tau), n_points)
    lam_star = small_gamma_optimal_lambda(p1, p2)
    if lam_star is not None:
        grid = np.unique(np.append(grid, lam_star))
    return grid


def detect_entanglement(
    p1: ChannelParams,
    p2: ChannelParams,
    gamma: complex = DEFAULT_GAMMA,
    lambda_grid: Iterable[float] | None = None,
) -> tuple[bool, float | None]:
    """Scan the closed-form average over ``lambda_grid``.

    Returns ``(detected, best_lambda)`` where ``best_lambda`` minimizes the
    average on the grid (``None`` when the grid is empty).
    """
    l0 = lambda0(p1.tau, p2.tau)
    grid = witness_lambda_grid(p1, p2) if lambda_grid is None else np.asarray(list(lambda_grid), float)
    grid = grid[grid < l0]
    if grid.size == 0:
        return False, None
    values = witness_average_closed_form(p1, p2, gamma, grid)
    values = np.where(np.isnan(values), np.inf, values)
    i = int(np.argmin(values))
    return bool(values[i] < DETECTION_THRESHOLD), float(grid[i])
