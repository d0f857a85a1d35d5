"""
Where the search stops working: four qubits.

Counting parameters, a full four-qubit basis has 180 free local parameters
against 240 real orthogonality constraints, so a generic state should not
admit one. For partial sets of m orthonormal images the balance flips
between m = 12 and m = 13. The numerics on the mixed W/GHZ state agree.
Failure to reach f = 0 is evidence under a finite budget, not a proof.
"""
from isobasis.optimizer import parameter_count, probe_four_qubit

# %% Free parameters versus constraints
for n in (2, 3, 4):
    p = parameter_count(n)
    print(f"n={n}: {p.free_params} parameters, {p.constraints} constraints, "
          f"count-feasible = {p.feasible_by_count}")
for m in (11, 12, 13, 14):
    p = parameter_count(4, m)
    print(f"n=4, m={m}: {p.free_params} vs {p.constraints}")

# %% Partial bases on (2/sqrt 6)|W_4> + (sqrt 2/sqrt 6)|GHZ_4>
# (20 restarts of up to 3000 L-BFGS iterations; about half a minute in total)
for m in (12, 13, 16):
    res = probe_four_qubit(restarts=20, master_seed=2024, m=m)
    verdict = "found" if res.converged else "no basis found within budget"
    print(f"m={m}: best f = {res.best_f:.2e} in restart {res.restart_index} of {len(res.restart_f)} run ({verdict})")
