"""Acceptance checks, shared by the test suite and ``cvlea verify``.

Every check returns a :class:`Check` carrying the measured quantity, the
tolerance it was held to and the wall time; none of them raise on failure.
"""

from __future__ import annotations

import inspect
import math
import time
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import diagram as dg
from . import fock as fk
from . import gaussian as g
from . import witness as wt

SEED = 20140101


@dataclass
class Check:
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"[{status}] {self.name}: measured={self.measured:.3e} tol={self.tolerance:.1e} "
            f"({self.seconds:.2f}s) {self.detail}".rstrip()
        )

    def __post_init__(self):
        # checks often compute these with numpy; keep them JSON-serializable
        self.passed = bool(self.passed)
        self.measured = float(self.measured)
        self.tolerance = float(self.tolerance)

    def as_dict(self) -> dict:
        return asdict(self)


def _timed(fn: Callable[[], Check]) -> Check:
    t0 = time.perf_counter()
    check = fn()
    check.seconds = time.perf_counter() - t0
    return check


# ---------------------------------------------------------------------------
# Gaussian suite


def check_prop1_boundary(r: float = g.LARGE_SQUEEZING, tol: float = 1e-3) -> Check:
    def run():
        t0 = time.perf_counter()
        # kappa = 2, 5 put the boundary at or below the quantum limit, so the
        # formal covariance map is bisected
        gaps = [
            abs(dg.simon_critical_noise_symmetric(k, r, valid_only=False) - 0.5)
            for k in (0.2, 1.0, 2.0, 5.0)
        ]
        elapsed = time.perf_counter() - t0
        worst = max(gaps)
        return Check(
            "1 Gaussian N-LEA boundary mu=1/2",
            worst <= tol and elapsed < 1.0,
            worst,
            tol,
            f"kappa in (0.2, 1, 2, 5); runtime {elapsed:.3f}s < 1s",
        )

    return _timed(run)


def check_tmsv_energy_boundary(tol: float = 1e-3) -> Check:
    def run():
        r = g.tmsv_squeezing(1.0)
        gaps = [
            abs(dg.simon_critical_noise_symmetric(k, r, valid_only=False) - g.tmsv_survival_max_noise(k, 1.0))
            for k in (1.0, 2.0)
        ]
        return Check("2 TMSV finite-energy boundary (E=1)", max(gaps) <= tol, max(gaps), tol,
                     "kappa in (1, 2)")

    return _timed(run)


def check_corollary3(n: int = 50, tol: float = 1e-3, seed: int = SEED) -> Check:
    def run():
        rng = np.random.default_rng(seed)
        gaps = []
        while len(gaps) < n:
            k1, k2 = rng.uniform(0.1, 5.0, 2)
            mu1 = g.quantum_limited_noise(k1) + rng.uniform(0.0, 0.5)
            expected = g.corollary3_critical_noise(k1, k2, mu1)
            # the boundary must be reachable by a valid channel on mode 2
            if expected < g.quantum_limited_noise(k2) + 1e-6:
                continue
            gaps.append(abs(dg.simon_critical_noise_mode2(k1, mu1, k2) - expected))
        return Check(f"3 two-mode Gaussian iff condition ({n} draws)", max(gaps) <= tol, max(gaps), tol)

    return _timed(run)


# ---------------------------------------------------------------------------
# Fock suite


def _random_channel(rng, kappa_range, a_range) -> g.ChannelParams:
    lo, hi = kappa_range
    kappa = math.exp(rng.uniform(math.log(lo), math.log(hi)))
    return g.ChannelParams.from_extra_noise(kappa, rng.uniform(*a_range))


def check_kraus_moments(
    n: int = 20, d: int = 40, tol: float = 1e-6, seed: int = SEED
) -> tuple[Check, Check]:
    """Fock-level moments vs ``kappa V + mu I``, and guarded Kraus completeness."""
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    worst, worst_deficit, worst_tau = 0.0, 0.0, 1.0
    for i in range(n):
        ps = [_random_channel(rng, (0.2, 1.8), (0.0, 0.3)) for _ in range(2)]
        if i % 2:
            r = rng.uniform(0.0, 0.7)
            rho = fk.tmsv_state(r, d).density()
            V_in, mean_in = g.tmsv_covariance(r), np.zeros(4)
        else:
            g1, g2 = (rng.uniform(0, 1) * np.exp(2j * np.pi * rng.random()) for _ in range(2))
            rho = fk.FockState.from_modes(fk.coherent_amplitudes(g1, d), fk.coherent_amplitudes(g2, d)).density()
            V_in = 0.5 * np.eye(4)
            mean_in = math.sqrt(2) * np.array([g1.real, g1.imag, g2.real, g2.imag])
        sets = [fk.channel_kraus(p, d) for p in ps]
        out = fk.apply_channels(rho, *sets)
        mean, V = fk.moments(out)
        scale = np.repeat(np.sqrt([p.kappa for p in ps]), 2)
        err = max(np.abs(V - g.apply_channel(V_in, ps)).max(), np.abs(mean - scale * mean_in).max())
        worst = max(worst, err)
        for p, ks in zip(ps, sets):
            if ks.truncation_error > worst_deficit:
                worst_deficit, worst_tau = ks.truncation_error, p.tau
    elapsed = time.perf_counter() - t0
    moments_check = Check(
        "4a Kraus action reproduces covariance map (moments)",
        worst <= tol and elapsed < 60.0,
        worst,
        tol,
        f"{n} channel pairs, d={d}; runtime {elapsed:.1f}s < 60s",
        elapsed,
    )
    completeness_check = Check(
        "4b Kraus completeness on guarded block",
        worst_deficit <= 1e-9,
        worst_deficit,
        1e-9,
        f"guard band ceil(d/4)={fk.guard_band(d)}; worst at tau={worst_tau:.3f}",
        0.0,
    )
    return moments_check, completeness_check


def check_eb_sanity(d: int = 30, tol: float = 1e-9) -> Check:
    """Entanglement-breaking channel on one mode: no negativity, no witness firing."""

    def run():
        identity = g.make_channel(1.0, 0.0)
        eb_channels = [
            g.ChannelParams.from_extra_noise(0.5, 0.5),
            g.ChannelParams.from_extra_noise(0.3, 0.45),
            g.ChannelParams.from_extra_noise(1.0, 1.0),
            g.ChannelParams.from_extra_noise(1.5, 1.2),
        ]
        inputs = [fk.psi_gamma_state(0.5, d), fk.tmsv_state(0.5, d)]
        worst_neg, fired = 0.0, []
        for p in eb_channels:
            assert g.is_entanglement_breaking(p)
            ks = fk.channel_kraus(p, d)
            for mode in (1, 2):
                for state in inputs:
                    out = fk.apply_to_mode(state.density(), ks, mode)
                    worst_neg = max(worst_neg, fk.negativity(out))
                    for lam in (-1.0, -0.5, 0.0):
                        if wt.witness_average_numeric(out, lam) < wt.DETECTION_THRESHOLD:
                            fired.append((p, mode, lam))
            for pair in ((p, identity), (identity, p)):
                for gamma in (1e-3, 0.5):
                    if wt.detect_entanglement(*pair, gamma)[0]:
                        fired.append(pair)
        return Check(
            "10 EB channel leaves no detectable entanglement",
            worst_neg <= tol and not fired,
            worst_neg,
            tol,
            f"witness detections: {len(fired)}",
        )

    return _timed(run)


# ---------------------------------------------------------------------------
# witness suite


def check_witness_oracle(
    n_channels: int = 50, lambdas_per_channel: int = 4, d: int = 30, tol: float = 1e-6, seed: int = SEED
) -> Check:
    def run():
        rng = np.random.default_rng(seed)
        worst, failures = 0.0, 0
        for _ in range(n_channels):
            ps = [_random_channel(rng, (0.1, 1.6), (0.0, 0.3)) for _ in range(2)]
            gamma = rng.uniform(0.01, 0.5) * np.exp(2j * np.pi * rng.random())
            out = fk.apply_channel_pair(fk.psi_gamma_state(gamma, d).density(), *ps)
            hi = min(0.6, wt.lambda0(ps[0].tau, ps[1].tau) - 0.05)
            for lam in rng.uniform(-1.0, hi, lambdas_per_channel):
                try:
                    numeric = wt.witness_average_numeric(out, lam)
                except fk.CutoffTooSmall:
                    failures += 1
                    continue
                closed = wt.witness_average_closed_form(*ps, gamma, lam)
                worst = max(worst, abs(numeric - closed))
        n = n_channels * lambdas_per_channel
        return Check(
            f"5 witness closed form vs Fock trace ({n} points)",
            worst <= tol and failures == 0,
            worst,
            tol,
            f"d={d}; cutoff failures {failures}",
        )

    return _timed(run)


def check_corollary4(gamma: float = wt.DEFAULT_GAMMA, tol: float = 1e-3) -> Check:
    def run():
        gaps, wrong = [], []
        for k in (0.1, 0.5, 1.0, 2.0, 5.0):
            thr = wt.corollary4_threshold(k)
            gaps.append(abs(dg.witness_critical_noise_symmetric(k, gamma) - thr))
            below, above = g.make_channel(k, thr - 0.01), g.make_channel(k, thr + 0.01)
            if not wt.detect_entanglement(below, below, gamma)[0]:
                wrong.append((k, "no detection at threshold - 0.01"))
            if wt.detect_entanglement(above, above, gamma)[0]:
                wrong.append((k, "detection at threshold + 0.01"))
        return Check(
            "6 symmetric non-Gaussian threshold sqrt(kappa^2+1)/2",
            max(gaps) <= tol and not wrong,
            max(gaps),
            tol,
            "; ".join(f"kappa={k}: {w}" for k, w in wrong),
        )

    return _timed(run)


def check_witness_positivity(n: int = 1000, d: int = 20, tol: float = 1e-12, seed: int = SEED) -> Check:
    def run():
        rng = np.random.default_rng(seed)
        lams = (-1.0, 0.0, 0.3, 0.6)
        mats = {lam: wt.witness_fock_matrix(lam, d) for lam in lams}
        levels = np.arange(d)
        worst = math.inf
        for _ in range(n):
            vecs = []
            for _ in range(2):
                envelope = np.exp(-levels / rng.uniform(0.5, 6.0))
                v = envelope * (rng.normal(size=d) + 1j * rng.normal(size=d))
                vecs.append(v / np.linalg.norm(v))
            psi = np.kron(*vecs)
            for lam in lams:
                worst = min(worst, float(np.vdot(psi, mats[lam] @ psi).real))
        return Check(
            f"7 witness nonnegative on {n} product states",
            worst >= -tol,
            worst,
            tol,
            "measured = smallest average",
        )

    return _timed(run)


def check_region_equivalence(n: int = 100_000, seed: int = SEED) -> Check:
    def run():
        rng = np.random.default_rng(seed)
        kappas = np.exp(rng.uniform(math.log(0.01), math.log(20.0), (n, 2)))
        extras = rng.exponential(0.7, (n, 2))
        bad = 0
        for (k1, k2), (a1, a2) in zip(kappas, extras):
            p1 = g.ChannelParams.from_extra_noise(k1, a1)
            p2 = g.ChannelParams.from_extra_noise(k2, a2)
            bad += wt.prop2_region(p1, p2) != wt.prop2_region_eta_tau(p1, p2)
        return Check(f"8 survival-region forms agree ({n} draws)", bad == 0, float(bad), 0.0,
                     "measured = disagreements")

    return _timed(run)


def check_nongaussian_advantage(kappa_grid=None) -> Check:
    def run():
        grid = dg.default_kappa_grid() if kappa_grid is None else np.asarray(kappa_grid)
        grid = np.unique(np.append(grid, 0.3))
        margin = min(wt.corollary4_threshold(k) - 0.5 for k in grid)
        at03 = wt.corollary4_threshold(0.3)
        ok = margin > 0 and abs(at03 - 0.5 * math.sqrt(1.09)) < 1e-12
        return Check("9 non-Gaussian threshold exceeds 1/2 on the kappa grid", ok, margin, 0.0,
                     f"threshold(0.3)={at03:.5f}; measured = smallest margin")

    return _timed(run)


SUITES: dict[str, list[Callable]] = {
    "gaussian": [check_prop1_boundary, check_tmsv_energy_boundary, check_corollary3],
    "fock": [check_kraus_moments, check_eb_sanity],
    "witness": [
        check_witness_oracle,
        check_corollary4,
        check_witness_positivity,
        check_region_equivalence,
        check_nongaussian_advantage,
    ],
}


def run_suite(name: str, cutoff: int | None = None) -> list[Check]:
    """Run one suite (or ``"all"``); ``cutoff`` overrides the Fock cutoff of
    the checks that take one."""
    names = list(SUITES) if name == "all" else [name]
    results: list[Check] = []
    for suite in names:
        for fn in SUITES[suite]:
            kwargs = {}
            if cutoff is not None and "d" in inspect.signature(fn).parameters:
                kwargs["d"] = cutoff
            out = fn(**kwargs)
            results.extend(out if isinstance(out, tuple) else [out])
    return results
