"""
Analytic bases built from local unitaries.

Every construction below takes one state |psi> and a list of strings
V_j = U_1 (x) ... (x) U_n, and the images V_j |psi> come out pairwise
orthogonal. We print the overlap objective f (sum of squared off-diagonal
Gram moduli) for each; zero means an orthonormal basis.
"""
import numpy as np

from isobasis.constructions import (
    bell_state,
    bell_strings,
    bipartite_pow2_strings,
    ghz_basis_strings,
    ghz_state,
    schmidt_basis_for,
    schmidt_form_state,
    w_basis_strings,
    w_state,
)
from isobasis.tensor_core import candidate_basis, random_state, schmidt_decompose

# %% The Bell basis: I(x)I, I(x)X, Z(x)I, Z(x)X acting on (|00> + |11>)/sqrt 2
b = candidate_basis(bell_state(), bell_strings())
print("Bell:", f"f = {b.f_value:.1e}")
print(np.round(b.gram.real, 12))

# %% GHZ states in any (n, d): clock and shift operators spread the support
for n, d in [(3, 2), (2, 3), (3, 3)]:
    b = candidate_basis(ghz_state(n, d), ghz_basis_strings(n, d))
    print(f"GHZ n={n} d={d}: {len(b.strings)} strings, f = {b.f_value:.1e}")

# %% W states, built recursively from the (n-1)-qubit basis
for n in range(1, 7):
    b = candidate_basis(w_state(n), w_basis_strings(n))
    print(f"W_{n}: {len(b.strings)} strings, max off-diagonal = {b.max_offdiag:.1e}")

# %% Two ququarts with arbitrary Schmidt coefficients
lam = np.array([0.1, 0.2, 0.3, 0.4])
b = candidate_basis(schmidt_form_state(lam), bipartite_pow2_strings(4))
print(f"ququart Schmidt form: f = {b.f_value:.1e}")

# %% A generic two-qudit state: rotate it to Schmidt form, then fold the
# rotations back into the strings so they act on the original state
psi = random_state(2, 8, seed=1)
print("Schmidt coefficients:", np.round(schmidt_decompose(psi).coeffs, 4))
b = schmidt_basis_for(psi)
print(f"random two-octet state: {len(b.strings)} strings, f = {b.f_value:.1e}")
