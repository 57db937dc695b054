"""Adding or removing photons keeps a state inside the nonlinear-coherent-state family.

Each transform returns the new state and the nonlinear function it is an
eigenstate of, with the same eigenvalue as before.
"""
from tmnlcs import StateSpec, build_by_recursion, catalog, eigen_residual, photon_add, photon_subtract

spec = StateSpec("perelomov", 0.5, charge_q=1)
base = build_by_recursion(spec)
alpha = spec.effective_eigenvalue()
f = catalog("perelomov_reduced")

#%% a^dag^2 b^dag
added, induced, record = photon_add(base, f, 2, 1)
print(record)
print("induced function:", induced.label)
print("residual:", eigen_residual(added, induced, alpha))

#%% a^3 drives the photon-number difference negative: modes get relabelled
subtracted, induced, record = photon_subtract(base, f, 3, 0)
print(record)
print([p["operation"] for p in subtracted.provenance])
print("residual:", eigen_residual(subtracted, induced, alpha))

#%% Subtracting one photon from each mode of a pair state gives the same state back
pair = build_by_recursion(StateSpec("pair", 1.2, 2))
same, _, _ = photon_subtract(pair, catalog("unity"), 1, 1)
print("max amplitude change:", abs(same.amplitudes - pair.amplitudes[: same.amplitudes.size]).max())
