import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from isobasis.constructions import X, Z, I2, bell_state
from isobasis.tensor_core import (
    LocalUnitaryString,
    PureState,
    apply_local_string,
    basis_state,
    bloch_vector,
    canonical_three_qubit,
    gram_and_f,
    hemisphere_partition,
    inner_product,
    make_state,
    random_state,
    schmidt_decompose,
)
from isobasis.unitary_param import haar_random_unitary

s2 = 1 / np.sqrt(2)


def random_string(n, d, rng):
    return LocalUnitaryString(tuple(haar_random_unitary(d, rng) for _ in range(n)))


def dense_apply(v, psi):
    """Oracle: the full Kronecker product acting on the flat amplitude vector."""
    op = np.ones((1, 1))
    for u in v.factors:
        op = np.kron(op, u)
    return op @ psi.amps


def test_make_state_examples():
    psi = make_state(1, 2, [1, 0])
    np.testing.assert_array_equal(psi.amps, [1, 0])
    bell = make_state(2, 2, [s2, 0, 0, s2])
    assert abs(inner_product(bell, bell_state()) - 1) < 1e-15
    with pytest.raises(ValueError, match="norm"):
        make_state(2, 2, [2, 0, 0, 0])


def test_make_state_renormalizes_small_deviation():
    psi = make_state(1, 2, [1 + 1e-8, 0])
    assert abs(np.linalg.norm(psi.amps) - 1) < 1e-15


@pytest.mark.parametrize("n,d,amps", [(2, 2, [1, 0, 0]), (1, 2, [0, 0]), (1, 1, [1])])
def test_make_state_rejects(n, d, amps):
    with pytest.raises(ValueError):
        make_state(n, d, amps)


def test_states_are_immutable():
    psi = basis_state(2, 2, [0, 1])
    with pytest.raises(ValueError):
        psi.amps[0] = 1


def test_index_convention_first_subsystem_most_significant():
    psi = basis_state(3, 3, [1, 0, 2])
    assert np.flatnonzero(psi.amps).tolist() == [1 * 9 + 0 * 3 + 2]


def test_apply_bit_flip():
    out = apply_local_string(LocalUnitaryString((I2, X)), basis_state(2, 2, [0, 0]))
    np.testing.assert_allclose(out.amps, basis_state(2, 2, [0, 1]).amps)


def test_apply_z_x_to_bell():
    out = apply_local_string(LocalUnitaryString((Z, X)), bell_state())
    np.testing.assert_allclose(out.amps, [0, s2, -s2, 0], atol=1e-15)


@pytest.mark.parametrize("n,d", [(1, 2), (2, 2), (3, 2), (2, 3), (3, 3), (1, 3)])
def test_apply_matches_dense_kronecker(n, d):
    rng = np.random.default_rng(10 * n + d)
    for _ in range(5):
        psi = random_state(n, d, rng)
        v = random_string(n, d, rng)
        out = apply_local_string(v, psi)
        np.testing.assert_allclose(out.amps, dense_apply(v, psi), atol=1e-12)
        assert abs(np.linalg.norm(out.amps) - 1) < 1e-12


def test_apply_dimension_mismatch():
    with pytest.raises(ValueError):
        apply_local_string(LocalUnitaryString((I2,)), bell_state())


def test_inner_product_examples():
    assert inner_product(basis_state(1, 2, [0]), basis_state(1, 2, [1])) == 0
    assert abs(inner_product(bell_state(), bell_state()) - 1) < 1e-15
    flipped = apply_local_string(LocalUnitaryString((Z, I2)), bell_state())
    assert abs(inner_product(bell_state(), flipped)) < 1e-15


def test_inner_product_is_antilinear_in_first_argument():
    phi = make_state(1, 2, [1j, 0])
    psi = make_state(1, 2, [1, 0])
    assert inner_product(phi, psi) == pytest.approx(-1j)


def test_gram_bell_basis_and_duplicate():
    bell = bell_state()
    strings = [(I2, I2), (I2, X), (Z, I2), (Z, X)]
    states = [apply_local_string(LocalUnitaryString(s), bell) for s in strings]
    gram, f = gram_and_f(states)
    assert f < 1e-30
    np.testing.assert_allclose(gram, np.eye(4), atol=1e-15)
    _, f_dup = gram_and_f([bell, bell])
    assert f_dup == pytest.approx(2.0)


def test_gram_f_matches_double_loop():
    rng = np.random.default_rng(4)
    states = [random_state(2, 2, rng) for _ in range(4)]
    _, f = gram_and_f(states)
    oracle = 0.0
    for j, a in enumerate(states):
        for k, b in enumerate(states):
            if j != k:
                oracle += abs(np.sum(np.conj(a.amps) * b.amps)) ** 2
    assert abs(f - oracle) < 1e-12


def test_gram_needs_two_states_of_equal_shape():
    with pytest.raises(ValueError):
        gram_and_f([bell_state()])
    with pytest.raises(ValueError):
        gram_and_f([bell_state(), basis_state(1, 2, [0])])


def test_f_zero_iff_small_offdiagonal():
    rng = np.random.default_rng(0)
    q, _ = np.linalg.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
    ortho = [PureState(2, 2, q[:, j]) for j in range(4)]
    gram, f = gram_and_f(ortho)
    off = np.abs(gram - np.diag(np.diag(gram))).max()
    assert f <= 1e-12 and off <= 1e-6
    tilted = ortho[:3] + [make_state(2, 2, q[:, 3] + 1e-3 * q[:, 0])]
    gram, f = gram_and_f(tilted)
    off = np.abs(gram - np.diag(np.diag(gram))).max()
    assert f > 1e-12 and off > 1e-6


def _schmidt_residual(psi, sf):
    out = apply_local_string(LocalUnitaryString((sf.rot_a, sf.rot_b)), psi)
    return np.abs(out.amps - sf.schmidt_state().amps).max()


def test_schmidt_examples():
    sf = schmidt_decompose(bell_state())
    np.testing.assert_allclose(sf.coeffs, [s2, s2], atol=1e-15)
    assert _schmidt_residual(bell_state(), sf) < 1e-12
    sf = schmidt_decompose(basis_state(2, 2, [0, 1]))
    np.testing.assert_allclose(sf.coeffs, [1, 0], atol=1e-15)
    assert _schmidt_residual(basis_state(2, 2, [0, 1]), sf) < 1e-12


@pytest.mark.parametrize("d", [2, 3, 4, 8])
def test_schmidt_round_trip_and_local_invariance(d):
    rng = np.random.default_rng(d)
    for _ in range(10):
        psi = random_state(2, d, rng)
        sf = schmidt_decompose(psi)
        assert _schmidt_residual(psi, sf) <= 1e-10
        assert abs(np.sum(sf.coeffs**2) - 1) < 1e-10
        assert np.all(np.diff(sf.coeffs) <= 0) and np.all(sf.coeffs >= 0)
        moved = apply_local_string(random_string(2, d, rng), psi)
        np.testing.assert_allclose(schmidt_decompose(moved).coeffs, sf.coeffs, atol=1e-10)


def test_schmidt_is_deterministic_on_degenerate_spectrum():
    a = schmidt_decompose(bell_state())
    b = schmidt_decompose(bell_state())
    np.testing.assert_array_equal(a.rot_a, b.rot_a)


def test_schmidt_needs_bipartite():
    with pytest.raises(ValueError):
        schmidt_decompose(random_state(3, 2, 0))


def test_random_state_determinism_and_real_flag():
    np.testing.assert_array_equal(random_state(1, 2, 7).amps, random_state(1, 2, 7).amps)
    for seed in range(5):
        assert np.all(random_state(2, 2, seed, real_only=True).amps.imag == 0)


def test_random_state_haar_moment():
    # E|<0|psi>|^2 = 1/2 for Haar-random qubit states
    rng = np.random.default_rng(123)
    vals = [abs(random_state(1, 2, rng).amps[0]) ** 2 for _ in range(10_000)]
    assert abs(np.mean(vals) - 0.5) < 0.02


def test_canonical_three_qubit():
    np.testing.assert_array_equal(canonical_three_qubit(1, 0, 0, 0, 0).amps, basis_state(3, 2, [0, 0, 0]).amps)
    t = 1 / np.sqrt(3)
    psi = canonical_three_qubit(t, t, t, 0, 0)
    assert np.flatnonzero(psi.amps).tolist() == [0b000, 0b011, 0b101]
    w_like = canonical_three_qubit(0, t, t, t, 0)
    tens = w_like.tensor()
    for k in range(3):
        mat = np.moveaxis(tens, k, 0).reshape(2, 4)
        assert np.linalg.matrix_rank(mat, tol=1e-10) == 2
    with pytest.raises(ValueError):
        canonical_three_qubit(1, 1, 0, 0, 0)


def test_bloch_vector_poles():
    np.testing.assert_allclose(bloch_vector(basis_state(1, 2, [0])), [0, 0, 1])
    np.testing.assert_allclose(bloch_vector(make_state(1, 2, [s2, 1j * s2])), [0, 1, 0], atol=1e-15)


def test_hemisphere_examples():
    up, down = hemisphere_partition([basis_state(1, 2, [0]), basis_state(1, 2, [1])])
    assert len(up) == len(down) == 1
    plus, minus = make_state(1, 2, [s2, s2]), make_state(1, 2, [s2, -s2])
    up, down = hemisphere_partition([plus, minus])
    assert up == [plus] and down == [minus]


def test_hemisphere_splits_random_orthogonal_pairs():
    rng = np.random.default_rng(5)
    for _ in range(100):
        q = random_state(1, 2, rng)
        a, b = q.amps
        perp = make_state(1, 2, [-np.conj(b), np.conj(a)])
        up, down = hemisphere_partition([q, perp])
        assert len(up) == 1 and len(down) == 1


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 3), st.integers(2, 3), st.integers(0, 2**32 - 1))
def test_norm_preserved_property(n, d, seed):
    rng = np.random.default_rng(seed)
    psi = random_state(n, d, rng)
    v = random_string(n, d, rng)
    out = apply_local_string(v, psi)
    assert abs(np.linalg.norm(out.amps) - 1) <= 1e-12
    np.testing.assert_allclose(out.amps, dense_apply(v, psi), atol=1e-12)
