"""Two-mode Perelomov states against a brute-force matrix exponential.

The closed form uses tau = xi tanh|xi| / |xi|.  Here we compare it with
expm(xi a^dag b^dag - xi^* ab)|q,0> computed directly on a truncated ladder
(requires scipy).
"""
import numpy as np
from scipy.linalg import expm

from tmnlcs import build_perelomov_closed, catalog, eigen_residual, perelomov_tau

xi, q = 0.8 * np.exp(0.3j), 2

#%% Closed form
closed = build_perelomov_closed(xi, q)
print(closed, "tau =", perelomov_tau(xi))

#%% Brute force on rungs 0 ... N + 32
dim = closed.truncation_n + 33
n = np.arange(dim - 1)
raise_both = np.zeros((dim, dim))
raise_both[n + 1, n] = np.sqrt((n + 1.0) * (n + q + 1.0))
brute = expm(xi * raise_both - np.conj(xi) * raise_both.T)[:, 0][: closed.truncation_n + 1]
print("fidelity:", abs(np.vdot(closed.amplitudes, brute)))

#%% Eigenstate of ab/(N_a + 1) with eigenvalue tau
print("residual:", eigen_residual(closed, catalog("perelomov_reduced"), perelomov_tau(xi)))
