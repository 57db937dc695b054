"""Parity pair states from Kerr evolution of a pair coherent state.

The Kerr phase exp(-i gamma_t n(n-1)) reproduces the parity sign pattern
(-1)^{n(n-1)/2} at gamma_t = pi/2.  At gamma_t = pi the phase is 1 for every
integer n, so nothing happens.
"""
import numpy as np

from tmnlcs import StateSpec, build_by_recursion, build_parity_superposition, fidelity, kerr_evolve

zeta, q = 1.0, 1
pair = build_by_recursion(StateSpec("pair", zeta, q))
parity = build_by_recursion(StateSpec("parity_pair", zeta, q))

#%% Fidelity with the parity state along the Kerr phase
for gamma_t in np.linspace(0, np.pi, 9):
    evolved, _ = kerr_evolve(pair, gamma_t)
    print(f"gamma_t = {gamma_t:.4f}   F = {fidelity(evolved, parity):.12f}")

#%% The same parity state as a two-component cat of pair states
cat = build_parity_superposition("pair", zeta, q)
print("fidelity(cat, parity) =", fidelity(cat, parity))
print("signs:", np.sign(parity.amplitudes[:8].real).astype(int))
