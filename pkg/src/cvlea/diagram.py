"""Boundary curves of the noise phase diagrams, with CSV/JSON export.

Each figure-level builder returns :class:`BoundaryCurve` objects; analytic
curves come paired with an independent bisection against a numerical
entanglement test (Simon's criterion for Gaussian inputs, the witness scan for
the non-Gaussian state).
"""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from . import gaussian as g
from . import witness as wt
from .bisection import bisect_threshold

DEFAULT_TOL = 1e-3
BISECTION_MAX_ITER = 40
CSV_COLUMNS = ("kind", "method", "abscissa", "value", "tolerance")
THREADS_ENV = "CVLEA_THREADS"


@dataclass
class BoundaryCurve:
    kind: str
    method: str  # "analytic" or "bisection"
    samples: list[tuple[float, float]] = field(default_factory=list)
    tolerance: float = 0.0

    def __post_init__(self):
        self.samples = sorted((float(x), float(y)) for x, y in self.samples)

    @property
    def abscissa(self) -> np.ndarray:
        return np.array([x for x, _ in self.samples])

    @property
    def values(self) -> np.ndarray:
        return np.array([y for _, y in self.samples])


def default_threads() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def parallel_map(fn: Callable, items: Sequence, threads: int | None = None) -> list:
    """Order-preserving map; results are independent of the thread count."""
    threads = default_threads() if threads is None else threads
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def default_kappa_grid(n: int = 101, lo: float = 0.05, hi: float = 8.0) -> np.ndarray:
    return np.geomspace(lo, hi, n)


def _bisect_noise(predicate, lo: float, tol: float) -> float:
    return bisect_threshold(predicate, lo, lo + 2.0, tol=tol, max_iter=BISECTION_MAX_ITER)


# ---------------------------------------------------------------------------
# Gaussian boundaries


def simon_critical_noise_symmetric(
    kappa: float, r: float, tol: float = 1e-9, valid_only: bool = True
) -> float:
    """Smallest total noise at which ``Phi(kappa, mu)^(x)2`` separates TMSV(r).

    With ``valid_only`` the search starts at the quantum limit (and returns it
    when every valid channel already separates).  Otherwise the formal
    covariance map is bisected from ``mu = 0``, which locates the boundary
    even where it lies below the quantum limit.
    """
    V = g.tmsv_covariance(r)

    def separable(mu):
        return g.simon_separable(g.covariance_map(V, [kappa, kappa], [mu, mu]))

    lo = g.quantum_limited_noise(kappa) if valid_only else 0.0
    return _bisect_noise(separable, lo, tol)


def simon_critical_noise_mode2(
    kappa1: float, mu1: float, kappa2: float, r: float = g.LARGE_SQUEEZING, tol: float = 1e-9
) -> float:
    """Smallest total noise on mode 2 that separates TMSV(r) at fixed ``(kappa1, mu1)``."""
    p1 = g.make_channel(kappa1, mu1)

    def separable(mu2):
        return g.tmsv_output_separable(r, p1, g.make_channel(kappa2, mu2))

    return _bisect_noise(separable, g.quantum_limited_noise(kappa2), tol)


def validity_curve(kappa_grid) -> BoundaryCurve:
    return BoundaryCurve("validity", "analytic", [(k, g.quantum_limited_noise(k)) for k in kappa_grid])


def eb_threshold_curve(kappa_grid) -> BoundaryCurve:
    return BoundaryCurve(
        "eb_threshold",
        "analytic",
        [(k, g.quantum_limited_noise(k) + min(k, 1.0)) for k in kappa_grid],
    )


def prop1_curve(kappa_grid) -> BoundaryCurve:
    return clip_to_validity(BoundaryCurve("prop1_gaussian", "analytic", [(k, 0.5) for k in kappa_grid]))


def curve_fig1b(
    energies: Iterable[float] = (0.1, 1.0, 10.0),
    kappa_grid=None,
    bisection: bool = True,
    tol: float = DEFAULT_TOL,
    threads: int | None = None,
) -> list[BoundaryCurve]:
    """TMSV survival curves per energy, the ``mu = 1/2`` line and the validity edge.

    Samples where the survival noise falls below the quantum limit are
    dropped: no valid channel preserves the entanglement there.
    """
    kappa_grid = default_kappa_grid() if kappa_grid is None else np.asarray(kappa_grid, float)
    curves = [prop1_curve(kappa_grid), validity_curve(kappa_grid)]
    for E in energies:
        kind = f"tmsv_energy[E={E:g}]"
        pts = [(k, g.tmsv_survival_max_noise(k, E)) for k in kappa_grid]
        pts = [(k, m) for k, m in pts if m >= g.quantum_limited_noise(k)]
        curves.append(BoundaryCurve(kind, "analytic", pts, 0.0))
        if bisection:
            r = g.tmsv_squeezing(E)
            ks = [k for k, _ in pts]
            vals = parallel_map(lambda k: simon_critical_noise_symmetric(k, r, tol * 1e-3), ks, threads)
            curves.append(BoundaryCurve(kind, "bisection", list(zip(ks, vals)), tol))
    return curves


def _fig2b_critical_a2(k1: float, k2: float, a1: float) -> float:
    mu1 = g.quantum_limited_noise(k1) + a1
    return g.corollary3_critical_noise(k1, k2, mu1) - g.quantum_limited_noise(k2)


def curve_fig2b(
    kappa1: float,
    kappa2: float,
    a_grid=None,
    bisection: bool = True,
    tol: float = DEFAULT_TOL,
    r: float = g.LARGE_SQUEEZING,
    threads: int | None = None,
) -> list[BoundaryCurve]:
    """Extra-noise boundary ``a2(a1)`` for high-energy Gaussian inputs.

    Only abscissae with a positive critical ``a2`` are kept; beyond them every
    valid channel pair annihilates the entanglement.
    """
    a_grid = np.linspace(0.0, 2.0, 101) if a_grid is None else np.asarray(a_grid, float)
    kind = f"corollary3[kappa1={kappa1:g};kappa2={kappa2:g}]"
    pts = [(a1, _fig2b_critical_a2(kappa1, kappa2, a1)) for a1 in a_grid]
    pts = [(a1, a2) for a1, a2 in pts if a2 > 0]
    curves = [BoundaryCurve(kind, "analytic", pts, 0.0)]
    if bisection:
        q1, q2 = g.quantum_limited_noise(kappa1), g.quantum_limited_noise(kappa2)

        def crit(a1):
            return simon_critical_noise_mode2(kappa1, q1 + a1, kappa2, r, tol * 1e-3) - q2

        xs = [a1 for a1, _ in pts]
        curves.append(BoundaryCurve(kind, "bisection", list(zip(xs, parallel_map(crit, xs, threads))), tol))
    return curves


# ---------------------------------------------------------------------------
# non-Gaussian boundaries


def prop2_critical_a2(kappa1: float, kappa2: float, a1: float) -> float:
    """Extra noise on mode 2 where the survival region ends, at fixed ``a1``
    (0 when ``a1`` is already outside the region for every ``a2``)."""

    def outside(a2):
        return not wt.prop2_region(
            g.ChannelParams.from_extra_noise(kappa1, a1), g.ChannelParams.from_extra_noise(kappa2, a2)
        )

    return _bisect_noise(outside, 0.0, 1e-12)


def witness_critical_a2(kappa1: float, kappa2: float, a1: float, gamma: float, tol: float) -> float:
    p1 = g.ChannelParams.from_extra_noise(kappa1, a1)

    def undetected(a2):
        return not wt.detect_entanglement(p1, g.ChannelParams.from_extra_noise(kappa2, a2), gamma)[0]

    return _bisect_noise(undetected, 0.0, tol)


def witness_critical_noise_symmetric(kappa: float, gamma: float = wt.DEFAULT_GAMMA, tol: float = 1e-9) -> float:
    """Smallest total noise at which the witness scan no longer detects
    entanglement of ``|psi>`` after ``Phi(kappa, mu)^(x)2``."""

    def undetected(mu):
        p = g.make_channel(kappa, mu)
        return not wt.detect_entanglement(p, p, gamma)[0]

    return _bisect_noise(undetected, g.quantum_limited_noise(kappa), tol)


def curve_fig3a(
    kappa1: float,
    kappa2: float,
    a_grid=None,
    bisection: bool = True,
    tol: float = DEFAULT_TOL,
    gamma: float = wt.DEFAULT_GAMMA,
    threads: int | None = None,
) -> list[BoundaryCurve]:
    a_grid = np.linspace(0.0, 1.0, 101) if a_grid is None else np.asarray(a_grid, float)
    kind = f"prop2_region_slice[kappa1={kappa1:g};kappa2={kappa2:g}]"
    vals = parallel_map(lambda a1: prop2_critical_a2(kappa1, kappa2, a1), list(a_grid), threads)
    pts = [(a1, a2) for a1, a2 in zip(a_grid, vals) if a2 > 0]
    curves = [BoundaryCurve(kind, "analytic", pts, 0.0)]
    if bisection:
        xs = [a1 for a1, _ in pts]
        crit = parallel_map(lambda a1: witness_critical_a2(kappa1, kappa2, a1, gamma, tol * 1e-3), xs, threads)
        curves.append(BoundaryCurve(kind, "bisection", list(zip(xs, crit)), tol))
    return curves


def curve_fig3b(
    kappa_grid=None,
    bisection: bool = True,
    tol: float = DEFAULT_TOL,
    gamma: float = wt.DEFAULT_GAMMA,
    threads: int | None = None,
) -> list[BoundaryCurve]:
    """Symmetric-channel threshold ``sqrt(kappa^2+1)/2``, its two asymptotes,
    the Gaussian ``mu = 1/2`` line and the witness-bisection cross-check."""
    kappa_grid = default_kappa_grid() if kappa_grid is None else np.asarray(kappa_grid, float)
    curves = [
        BoundaryCurve("corollary4", "analytic", [(k, wt.corollary4_threshold(k)) for k in kappa_grid]),
        clip_to_validity(
            BoundaryCurve("corollary4_asymptote_small_kappa", "analytic", [(k, 0.5) for k in kappa_grid])
        ),
        clip_to_validity(
            BoundaryCurve("corollary4_asymptote_large_kappa", "analytic", [(k, 0.5 * k) for k in kappa_grid])
        ),
        prop1_curve(kappa_grid),
        validity_curve(kappa_grid),
    ]
    if bisection:
        ks = list(kappa_grid)
        vals = parallel_map(lambda k: witness_critical_noise_symmetric(k, gamma, tol * 1e-3), ks, threads)
        curves.append(BoundaryCurve("corollary4", "bisection", list(zip(ks, vals)), tol))
    return curves


def max_disagreement(analytic: BoundaryCurve, bisected: BoundaryCurve) -> float:
    """Largest pointwise gap between two sampled versions of one boundary."""
    a = dict(analytic.samples)
    gaps = [abs(a[x] - y) for x, y in bisected.samples if x in a]
    return max(gaps, default=0.0)


# ---------------------------------------------------------------------------
# export


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def to_csv(curves: Sequence[BoundaryCurve]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for c in curves:
        for x, y in c.samples:
            writer.writerow([c.kind, c.method, _fmt(x), _fmt(y), _fmt(c.tolerance)])
    return buf.getvalue()


def to_json(curves: Sequence[BoundaryCurve], config: dict | None = None) -> str:
    def num(x):
        return float(_fmt(x))

    doc: dict = {}
    if config is not None:
        doc["config"] = config
    doc["curves"] = [
        {
            "kind": c.kind,
            "method": c.method,
            "tolerance": num(c.tolerance),
            "samples": [[num(x), num(y)] for x, y in c.samples],
        }
        for c in curves
    ]
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def from_json(text: str) -> list[BoundaryCurve]:
    doc = json.loads(text)
    return [
        BoundaryCurve(c["kind"], c["method"], [tuple(s) for s in c["samples"]], c["tolerance"])
        for c in doc["curves"]
    ]


def from_csv(text: str) -> list[BoundaryCurve]:
    rows = list(csv.DictReader(io.StringIO(text)))
    curves: dict[tuple[str, str], BoundaryCurve] = {}
    for row in rows:
        key = (row["kind"], row["method"])
        if key not in curves:
            curves[key] = BoundaryCurve(row["kind"], row["method"], [], float(row["tolerance"]))
        curves[key].samples.append((float(row["abscissa"]), float(row["value"])))
    return list(curves.values())


def export(curves: Sequence[BoundaryCurve], path, fmt: str | None = None, config: dict | None = None) -> Path:
    """Write curves as CSV or JSON; ``fmt`` defaults to the file extension."""
    path = Path(path)
    fmt = (fmt or path.suffix.lstrip(".") or "csv").lower()
    if fmt == "csv":
        text = to_csv(curves)
    elif fmt == "json":
        text = to_json(curves, config)
    else:
        raise ValueError(f"unsupported format {fmt!r}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def clip_to_validity(curve: BoundaryCurve) -> BoundaryCurve:
    """Drop samples of a ``(kappa, mu)`` curve that lie below the quantum limit."""
    pts = [(k, m) for k, m in curve.samples if m >= g.quantum_limited_noise(k) and k > 0]
    return BoundaryCurve(curve.kind, curve.method, pts, curve.tolerance)

