"""
When do noisy channels destroy Gaussian entanglement?
=====================================================

A phase-insensitive channel Phi(kappa, mu) scales the covariance matrix by
kappa and adds mu of noise.  Here we apply the same channel to both halves of
a two-mode squeezed vacuum and watch Simon's criterion decide separability.
"""

import numpy as np

from cvlea import gaussian as g
from cvlea.diagram import simon_critical_noise_symmetric

###############################################################################
# A quantum-limited amplifier with gain 2 adds exactly mu = 1/2.  That is
# already enough to disentangle every Gaussian input, no matter how squeezed.

amp = g.make_channel(2.0, 0.5)
print("amplifier:", amp, "EB:", g.is_entanglement_breaking(amp), "N-LEA:", g.is_nlea_gaussian(amp))

V = g.tmsv_covariance(g.LARGE_SQUEEZING)
print("TMSV(r=10) separable after amp x amp:", g.tmsv_output_separable(g.LARGE_SQUEEZING, amp, amp))

###############################################################################
# The smallest symplectic eigenvalue of the partially transposed covariance
# matrix tells the same story numerically.

for mu in (0.45, 0.5, 0.55):
    Vout = g.covariance_map(V, [1.0, 1.0], [mu, mu])
    print(f"mu={mu:.2f}  min PT symplectic eigenvalue = {g.min_pt_symplectic_eigenvalue(Vout):.6f}")

###############################################################################
# Finite energy helps the channel: a weakly squeezed state dies earlier.
# The bisection agrees with the closed form.

for energy in (0.1, 1.0, 10.0):
    r = g.tmsv_squeezing(energy)
    for kappa in (0.5, 1.0):
        exact = g.tmsv_survival_max_noise(kappa, energy)
        found = simon_critical_noise_symmetric(kappa, r, valid_only=False)
        print(f"E={energy:5.1f} kappa={kappa}: formula {exact:.6f}  bisection {found:.6f}")

###############################################################################
# With different channels on the two modes the exact condition is
# kappa1 mu2 + kappa2 mu1 >= (kappa1 + kappa2)/2.

k1, k2, mu1 = 2.5, 0.7, 0.75
print("critical mu2:", g.corollary3_critical_noise(k1, k2, mu1))
for mu2 in np.linspace(0.2, 0.6, 5):
    p1, p2 = g.make_channel(k1, mu1), g.make_channel(k2, mu2)
    print(f"  mu2={mu2:.2f}: annihilates={g.corollary3_annihilates(p1, p2)}")
