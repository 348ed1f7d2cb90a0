"""
The same channels, photon by photon
===================================

In the Fock basis Phi(kappa, mu) is a quantum-limited attenuator followed by
a quantum-limited amplifier.  We build both Kraus ladders on a truncated
space and check them against the covariance picture.
"""

import numpy as np

from cvlea import fock as f
from cvlea import gaussian as g

d = 40
p = g.make_channel(2.0, 1.5)
print(f"kappa={p.kappa} mu={p.mu}: eta={p.eta:.4f}, tau={p.tau:.4f}")

###############################################################################
# Vacuum in, thermal state out, with mean photon number kappa/2 + mu - 1/2.

vac = np.zeros(d)
vac[0] = 1
rho = f.FockState.from_modes(vac, vac).density()
out = f.apply_to_mode(rho, f.channel_kraus(p, d), 1)
print("mean photons on mode 1:", f.mean_photon_number(out, mode=1))

###############################################################################
# Moments of the Fock output reproduce kappa V + mu I.

p1, p2 = g.make_channel(0.6, 0.35), g.make_channel(1.2, 0.15)
out = f.apply_channel_pair(f.tmsv_state(0.5, d).density(), p1, p2)
_, V = f.moments(out)
print("max |V_fock - V_gauss| =", np.abs(V - g.apply_channel(g.tmsv_covariance(0.5), [p1, p2])).max())

###############################################################################
# Negativity falls as extra noise is added and vanishes once the channel is
# entanglement breaking.

rho = f.tmsv_state(0.5, 20).density()
for a in (0.0, 0.2, 0.5, 0.7):
    q = g.ChannelParams.from_extra_noise(0.7, a)
    n = f.negativity(f.apply_channel_pair(rho, q, g.make_channel(1, 0)))
    print(f"a={a:.1f} EB={g.is_entanglement_breaking(q)!s:5}  negativity={n:.6f}")

###############################################################################
# The amplifier ladder spreads each level over unbounded support, so the
# truncated set is not trace preserving near the cutoff.  The deficit on the
# guarded block grows quickly with the gain.

for tau in (1.001, 1.01, 1.05, 1.1, 1.5):
    print(f"tau={tau}: completeness deficit {f.ql_amplifier_kraus(tau, d).truncation_error:.2e}")
