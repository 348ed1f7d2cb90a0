"""
Phase diagrams as data
======================

Every boundary is computed twice, from its formula and by bisecting the
underlying numerical test, and exported to CSV/JSON for plotting elsewhere.
"""

import sys
import tempfile
from pathlib import Path

import numpy as np

from cvlea import diagram as dg

grid = dg.default_kappa_grid(21)

###############################################################################
# Gaussian survival for three input energies.

fig1b = dg.curve_fig1b((0.1, 1.0, 10.0), grid)
for c in fig1b:
    print(f"{c.kind:24s} {c.method:9s} {len(c.samples):3d} samples")

###############################################################################
# Extra-noise regions for two channel pairs.

fig2b = dg.curve_fig2b(1.0, 1.0, np.linspace(0, 1, 11))
fig3a = dg.curve_fig3a(0.5, 0.5, np.linspace(0, 1, 11))
for curves in (fig2b, fig3a):
    print(curves[0].kind, "analytic vs bisection:", dg.max_disagreement(curves[0], curves[1]))

###############################################################################
# The non-Gaussian threshold with its asymptotes.

fig3b = dg.curve_fig3b(grid)
ana = next(c for c in fig3b if c.kind == "corollary4" and c.method == "analytic")
bis = next(c for c in fig3b if c.kind == "corollary4" and c.method == "bisection")
print("symmetric threshold, analytic vs bisection:", dg.max_disagreement(ana, bis))

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp())
for name, curves in {"fig1b": fig1b, "fig2b": fig2b, "fig3a": fig3a, "fig3b": fig3b}.items():
    print("wrote", dg.export(curves, out / f"{name}.csv"), dg.export(curves, out / f"{name}.json"))
