"""
Numerical search when no closed form is known.

Two qutrits with three Schmidt coefficients and generic three-qubit states
have no construction in the library, so we minimize f directly over the
unitary charts of all strings (the first string is pinned to the identity).
Each restart starts from Haar-random unitaries drawn from a seed derived
from the master seed, so the whole search is reproducible.
"""
import numpy as np

from isobasis.optimizer import (
    SearchProblem,
    minimize_f,
    qutrit_schmidt_state,
    sample_canonical_coeffs,
    sample_qutrit_schmidt,
    scan_three_qubit,
)
from isobasis.tensor_core import candidate_basis, canonical_three_qubit

# %% One two-qutrit state
lam = sample_qutrit_schmidt(seed=7)
psi = qutrit_schmidt_state(lam)
res = minimize_f(SearchProblem(psi, num_states=9, restarts=10, master_seed=7))
print(f"Schmidt {np.round(lam, 3)}: best f = {res.best_f:.2e} "
      f"after {res.iterations} iterations of restart {res.restart_index}")

# the returned strings are ordinary local unitaries; check them independently
check = candidate_basis(psi, res.best_strings)
print(f"recomputed f = {check.f_value:.2e}, max |<psi_j|psi_k>| = {check.max_offdiag:.2e}")

# %% One three-qubit state in canonical form a|000> + b|011> + c|101> + d|110> + e|111>
coeffs = sample_canonical_coeffs(seed=3)
res = minimize_f(SearchProblem(canonical_three_qubit(*coeffs), 8, restarts=10, master_seed=3))
print(f"three-qubit sample: best f = {res.best_f:.2e}, converged = {res.converged}")

# %% A small campaign: rows are plain records, ready for JSONL
for row in scan_three_qubit(samples=5, restarts=10, master_seed=11):
    print(row.to_json())
