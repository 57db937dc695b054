"""Pair coherent states: two ways to build them, and what they look like.

Run with ``python demos/01_pair_coherent_states.py``.
"""
import numpy as np

from tmnlcs import StateSpec, build_by_exponential, build_by_recursion, catalog, eigen_residual, fidelity
from tmnlcs.verify import photon_statistics

#%% Build |zeta, q> from the coefficient recursion
spec = StateSpec("pair", eigenvalue=1.0, charge_q=0)
state = build_by_recursion(spec)
print(state)
print("first amplitudes:", np.round(state.amplitudes[:6].real, 6))

#%% c_0 is the inverse square root of sum 1/(n!)^2, a modified Bessel function I_0(2)
print("c_0 =", state.amplitudes[0].real)

#%% The exponential-series route lands on the same state
other = build_by_exponential(spec)
print("fidelity(recursion, exponential) =", fidelity(state, other))

#%% ab|zeta,q> = zeta|zeta,q>, checked as a residual
print("eigen residual:", eigen_residual(state, catalog("unity"), 1.0))

#%% Photon statistics: mode b is sub-Poissonian (Mandel Q < 0), and <N_a> - <N_b> = q
for q in (0, 1, 3):
    stats = photon_statistics(build_by_recursion(StateSpec("pair", 1.5, q)))
    print(f"q={q}: <Na>={stats['mean_na']:.4f} <Nb>={stats['mean_nb']:.4f} Q_b={stats['mandel_q_b']:.4f}")
