import itertools

import numpy as np
import pytest

from isobasis.constructions import I2, PAULI, X, XZ, Z, pauli_string, state_independent_strings
from isobasis.state_independent import (
    LABELS,
    canonical_codes,
    code_to_labels,
    codes_to_strings,
    enumerate_si_pauli,
    eigenvector_witness,
    four_qubit_parity_certificate,
    four_qubit_system,
    is_skew_symmetric,
    labels_to_code,
    real_overlap_counterexample,
    lemma1_property_check,
    odd_dim_obstruction,
    pauli_closure_table,
    pauli_gauge,
    random_skew_unitary,
    si_verify_on_random_real_states,
    skew_parity,
    string_is_skew_dense,
    verify_si_construction,
)
from isobasis.tensor_core import LocalUnitaryString
from isobasis.unitary_param import haar_random_unitary


def test_is_skew_symmetric_examples():
    assert is_skew_symmetric(XZ)
    assert not is_skew_symmetric(I2)
    a = np.random.default_rng(0).standard_normal((4, 4))
    assert is_skew_symmetric(a - a.T)
    with pytest.raises(ValueError):
        is_skew_symmetric(np.zeros((2, 3)))


def test_transpose_not_conjugate_transpose():
    # i*Z is anti-Hermitian but symmetric
    assert not is_skew_symmetric(1j * Z)


def test_real_orthogonality_examples():
    assert lemma1_property_check(XZ, 100, seed=1)
    assert not lemma1_property_check(X, 100, seed=1)
    np.testing.assert_allclose(real_overlap_counterexample(X), [1 / np.sqrt(2), 1 / np.sqrt(2)])
    u = random_skew_unitary(4, seed=2)
    assert np.abs(u.conj().T @ u - np.eye(4)).max() < 1e-12
    assert is_skew_symmetric(u)
    assert lemma1_property_check(u, 100, seed=3)


CURATED = {
    "XZ": XZ,
    "XZ(x)I": np.kron(XZ, I2),
    "I(x)XZ": np.kron(I2, XZ),
    "skew4a": None,
    "skew4b": None,
    "I": I2,
    "X": X,
    "Z": Z,
    "XZ(x)XZ": np.kron(XZ, XZ),
    "X(x)XZ": np.kron(X, XZ),
    "haar2": None,
    "haar4": None,
}


def _curated(name):
    if name == "skew4a":
        return random_skew_unitary(4, 10)
    if name == "skew4b":
        return random_skew_unitary(4, 11)
    if name == "haar2":
        return haar_random_unitary(2, 12)
    if name == "haar4":
        return haar_random_unitary(4, 13)
    return CURATED[name]


@pytest.mark.parametrize("name", list(CURATED))
def test_property_check_matches_skew_symmetry(name):
    u = _curated(name)
    assert lemma1_property_check(u, 1000, seed=5) == is_skew_symmetric(u, 1e-10)


def test_pauli_encoding_round_trip():
    for labels in itertools.product(LABELS, repeat=3):
        assert code_to_labels(labels_to_code(labels), 3) == labels


def test_parity_rule_agrees_with_matrices():
    rng = np.random.default_rng(7)
    for _ in range(2000):
        n = int(rng.integers(1, 6))
        a = tuple(rng.choice(LABELS) for _ in range(n))
        b = tuple(rng.choice(LABELS) for _ in range(n))
        prod = pauli_string(a).adjoint().compose(pauli_string(b))
        assert skew_parity(labels_to_code(a), labels_to_code(b)) == string_is_skew_dense(prod)


def test_verify_si_examples():
    assert verify_si_construction(state_independent_strings(2))
    assert verify_si_construction(state_independent_strings(3))
    assert not verify_si_construction([pauli_string(("I", "I")), pauli_string(("X", "I"))])


def test_verify_si_on_non_pauli_factors():
    # conjugating every factor by the same real rotation keeps the construction valid
    w = np.array([[np.cos(0.3), -np.sin(0.3)], [np.sin(0.3), np.cos(0.3)]])
    strings = [LocalUnitaryString(tuple(w.T @ u @ w for u in s.factors)) for s in state_independent_strings(2)]
    assert verify_si_construction(strings)
    assert si_verify_on_random_real_states(strings, 50, seed=0) <= 1e-12


def test_verify_si_shape_mismatch():
    with pytest.raises(ValueError):
        verify_si_construction([pauli_string(("I",)), pauli_string(("I", "I"))])


def test_si_random_real_and_complex():
    assert si_verify_on_random_real_states(state_independent_strings(3), 100, seed=1) <= 1e-12
    assert si_verify_on_random_real_states(state_independent_strings(2), 100, seed=1) <= 1e-12
    assert si_verify_on_random_real_states(state_independent_strings(2), 100, seed=1, real_only=False) > 1e-3


@pytest.mark.parametrize("n", [1, 2, 3])
def test_parity_rule_and_real_state_scan_agree(n):
    rng = np.random.default_rng(n)
    good = codes_to_strings(enumerate_si_pauli(n).solutions[0], n)
    assert verify_si_construction(good)
    assert si_verify_on_random_real_states(good, 100, seed=2) <= 1e-10
    for _ in range(20):
        labels = [tuple(rng.choice(LABELS) for _ in range(n)) for _ in range(2**n)]
        strings = [pauli_string(lab) for lab in labels]
        assert verify_si_construction(strings) == (si_verify_on_random_real_states(strings, 100, seed=3) <= 1e-10)


def test_enumeration_small_cases():
    e2 = enumerate_si_pauli(2)
    assert e2.exhausted and e2.solutions
    assert canonical_codes(state_independent_strings(2)) in {tuple(sorted(s)) for s in e2.solutions}
    e3 = enumerate_si_pauli(3)
    assert e3.exhausted and e3.solutions
    assert canonical_codes(state_independent_strings(3)) in {tuple(sorted(s)) for s in e3.solutions}
    for e in (e2, e3):
        for sol in e.solutions:
            assert verify_si_construction(codes_to_strings(sol, e.n))


def test_enumeration_four_qubits_empty():
    e4 = enumerate_si_pauli(4)
    assert e4.exhausted and e4.solutions == []


def test_enumeration_refuses_five():
    with pytest.raises(ValueError, match="n = 4"):
        enumerate_si_pauli(5)


def test_enumeration_json_labels():
    js = enumerate_si_pauli(2).to_json()
    assert js["solutions"][0][0] == ["I", "I"]
    assert all(lab in LABELS for sol in js["solutions"] for s in sol for lab in s)


def test_parity_certificate():
    rep = four_qubit_parity_certificate()
    assert rep["inconsistent"] and rep["augmented_rank"] == rep["rank"] + 1
    # the combination uses the pair conditions and the V6 rows
    assert any("V6^H" in name for name in rep["combination"])
    reduced = four_qubit_parity_certificate(include_last_row=False)
    assert not reduced["inconsistent"]


def test_reduced_system_has_explicit_solution():
    # brute-force oracle over the 16 bits of rows 1..4
    names, a, b = four_qubit_system(include_last_row=False)
    found = False
    for bits in itertools.product((0, 1), repeat=16):
        x = np.zeros(20, dtype=np.uint8)
        x[:16] = bits
        if np.all((a @ x) % 2 == b):
            found = True
            break
    assert found


def test_certificate_agrees_with_enumeration():
    assert four_qubit_parity_certificate()["inconsistent"] == (enumerate_si_pauli(4).solutions == [])


def test_eigenvector_witness_examples():
    psi, ov = eigenvector_witness(pauli_string(("X", "X")))
    assert abs(ov - 1) < 1e-12
    probs = np.abs(psi.amps) ** 2
    np.testing.assert_allclose(probs, 0.25, atol=1e-12)
    _, ov = eigenvector_witness(pauli_string(("XZ", "I")))
    assert abs(ov - 1) < 1e-12
    rng = np.random.default_rng(0)
    for _ in range(10):
        v = LocalUnitaryString(tuple(haar_random_unitary(2, rng) for _ in range(3)))
        assert eigenvector_witness(v)[1] >= 1 - 1e-10


@pytest.mark.parametrize("d", [3, 5])
def test_odd_dim(d):
    rep = odd_dim_obstruction(d, 1000, seed=0)
    assert rep["all_below_tol"] and rep["det_forced_zero"]
    assert rep["symbolic_det"] == "0"


def test_odd_dim_rejects_even():
    with pytest.raises(ValueError):
        odd_dim_obstruction(2)


def test_even_dim_skew_unitaries_have_unit_determinant():
    # contrast: the determinant argument does not apply in even dimension
    assert abs(abs(np.linalg.det(random_skew_unitary(4, 0))) - 1) < 1e-12


def test_pauli_closure():
    table = pauli_closure_table()
    assert len(table) == 16
    for (a, b), (label, sym) in table.items():
        assert label in LABELS and sym is not None
        assert (sym == "skew") == (label == "XZ")


@pytest.mark.parametrize("theta", np.random.default_rng(9).uniform(0, 2 * np.pi, 10))
def test_pauli_gauge(theta):
    gates = pauli_gauge(theta)
    targets = [I2, Z, X, XZ]
    for g, t in zip(gates, targets):
        # equal up to a global sign
        assert min(np.abs(g - t).max(), np.abs(g + t).max()) <= 1e-10
