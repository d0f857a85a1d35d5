"""
One set of strings for every real state.

A pair of strings sends every real state to orthogonal images exactly when
V^H V' is skew-symmetric (M^T = -M). Among {I, X, Z, XZ} only XZ is
skew-symmetric, so for Pauli strings the condition is a parity count over
GF(2). That turns the search for state-independent bases into a small
combinatorial problem: solutions exist for two and three qubits and none
for four.
"""
import numpy as np

from isobasis.constructions import XZ, state_independent_strings
from isobasis.state_independent import (
    enumerate_si_pauli,
    eigenvector_witness,
    four_qubit_parity_certificate,
    is_skew_symmetric,
    lemma1_property_check,
    odd_dim_obstruction,
    si_verify_on_random_real_states,
)

# %% Skew-symmetry and real states
print("XZ =", XZ.tolist(), "skew:", is_skew_symmetric(XZ), "orthogonalizes reals:", lemma1_property_check(XZ, 1000, 0))

# %% The three-qubit set works on real states, not on complex ones
strings = state_independent_strings(3)
print("max f, 200 real states:   ", f"{si_verify_on_random_real_states(strings, 200, seed=0):.1e}")
print("max f, 200 complex states:", f"{si_verify_on_random_real_states(strings, 200, seed=0, real_only=False):.2f}")

# %% Why no set can work on complex states: every string has a product eigenvector
psi, overlap = eigenvector_witness(strings[5])
print(f"|<psi|V|psi>| = {overlap:.12f} for the product eigenvector")

# %% Exhaustive enumeration over Pauli strings
for n in (2, 3, 4):
    e = enumerate_si_pauli(n)
    print(f"n={n}: {len(e.solutions)} solutions, {e.nodes_explored} nodes, exhausted = {e.exhausted}")
print("one three-qubit solution:", enumerate_si_pauli(3).label_solutions()[0])

# %% An independent certificate for four qubits: the parity system is inconsistent
cert = four_qubit_parity_certificate()
print(f"rank {cert['rank']} vs augmented rank {cert['augmented_rank']}; "
      f"{len(cert['combination'])} equations sum to 0 = 1")

# %% Odd dimension: det(A) = det(A^T) = -det(A) forces singular skew matrices
for d in (3, 5, 7):
    rep = odd_dim_obstruction(d, trials=1000, seed=d)
    print(f"d={d}: max |det| = {rep['max_abs_det']:.1e}")
print("even d for contrast:", np.round(abs(np.linalg.det(np.kron(XZ, XZ))), 12))
