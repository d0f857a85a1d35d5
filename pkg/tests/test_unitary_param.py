import numpy as np
import pytest
from scipy.optimize import minimize

from isobasis.constructions import X, Z, XZ, generalized_pauli
from isobasis.unitary_param import (
    UnitaryParams,
    batch_jacobian,
    batch_params_to_unitary,
    haar_random_unitary,
    params_to_unitary,
    perturb,
    unitary_to_params,
)


def unitarity(u):
    d = u.shape[-1]
    return np.abs(np.swapaxes(u.conj(), -1, -2) @ u - np.eye(d)).max()


def test_zero_angles_give_identity():
    for d in (2, 3, 5):
        np.testing.assert_array_equal(params_to_unitary(UnitaryParams(d, np.zeros(d * d))), np.eye(d))


def test_length_mismatch():
    with pytest.raises(ValueError):
        UnitaryParams(3, np.zeros(8))


@pytest.mark.parametrize("d", [2, 3, 4])
def test_unitarity_bulk(d):
    # 10^5 parameter vectors in total across dimensions
    rng = np.random.default_rng(d)
    theta = rng.uniform(-10, 10, size=(100_000 // 3, d * d))
    assert unitarity(batch_params_to_unitary(theta, d)) <= 1e-12


@pytest.mark.parametrize("d", [2, 3, 4])
def test_inverse_chart_round_trip(d):
    for seed in range(20):
        u = haar_random_unitary(d, seed)
        np.testing.assert_allclose(params_to_unitary(unitary_to_params(u)), u, atol=1e-12)
    for u in ([X, Z, XZ] if d == 2 else generalized_pauli(d)):
        np.testing.assert_allclose(params_to_unitary(unitary_to_params(u)), u, atol=1e-12)


def test_jacobian_matches_central_differences():
    rng = np.random.default_rng(1)
    for d in (2, 3):
        theta = rng.uniform(-3, 3, size=(4, d * d))
        _, du = batch_jacobian(theta, d)
        h = 1e-5
        for p in range(d * d):
            e = np.zeros(d * d)
            e[p] = h
            fd = (batch_params_to_unitary(theta + e, d) - batch_params_to_unitary(theta - e, d)) / (2 * h)
            np.testing.assert_allclose(du[:, p], fd, atol=1e-8)


def test_directional_derivative_first_order():
    # ratio of one-sided to central estimate within 5% at step 1e-5
    rng = np.random.default_rng(2)
    theta = rng.uniform(-3, 3, 9)
    direction = rng.standard_normal(9)
    h = 1e-5
    u0 = batch_params_to_unitary(theta, 3)
    forward = (batch_params_to_unitary(theta + h * direction, 3) - u0) / h
    central = (batch_params_to_unitary(theta + h * direction, 3) - batch_params_to_unitary(theta - h * direction, 3)) / (2 * h)
    assert np.linalg.norm(forward - central) / np.linalg.norm(central) < 0.05


@pytest.mark.xfail(strict=True, reason="10^4 samples cannot cover the 9-dimensional U(3) "
                   "to Frobenius radius 0.5 under any sampling measure; see the Haar comparison")
def test_coverage_smoke_d3():
    rng = np.random.default_rng(3)
    samples = batch_params_to_unitary(rng.uniform(0, 2 * np.pi, size=(10_000, 9)), 3)
    for target in generalized_pauli(3):
        dist = np.linalg.norm(samples - target, axis=(1, 2))
        assert dist.min() < 0.5


def test_coverage_radius_is_beyond_haar_sampling_too():
    rng = np.random.default_rng(3)
    haar = np.array([haar_random_unitary(3, rng) for _ in range(10_000)])
    chart = batch_params_to_unitary(rng.uniform(0, 2 * np.pi, size=(10_000, 9)), 3)
    for target in generalized_pauli(3):
        d_haar = np.linalg.norm(haar - target, axis=(1, 2)).min()
        d_chart = np.linalg.norm(chart - target, axis=(1, 2)).min()
        assert d_haar > 0.5
        # the chart sample is no worse than Haar sampling by more than a small margin
        assert d_chart < d_haar + 0.3


@pytest.mark.parametrize("target", ["X", "Z", "XZ", "haar2", "haar3"])
def test_chart_reaches_targets_by_local_minimization(target):
    targets = {"X": X, "Z": Z, "XZ": XZ, "haar2": haar_random_unitary(2, 11), "haar3": haar_random_unitary(3, 12)}
    t = targets[target]
    d = t.shape[0]
    rng = np.random.default_rng(4)

    def loss(theta):
        return float(np.sum(np.abs(batch_params_to_unitary(theta, d) - t) ** 2))

    best = min(
        minimize(loss, rng.uniform(-np.pi, np.pi, d * d), method="BFGS", options={"gtol": 1e-12}).fun
        for _ in range(20)
    )
    assert best <= 1e-8


def test_haar_determinism_unitarity_and_moment():
    np.testing.assert_array_equal(haar_random_unitary(3, 5), haar_random_unitary(3, 5))
    assert unitarity(haar_random_unitary(4, 6)) <= 1e-12
    rng = np.random.default_rng(7)
    vals = [abs(haar_random_unitary(2, rng)[0, 0]) ** 2 for _ in range(10_000)]
    assert abs(np.mean(vals) - 0.5) < 0.02


def test_perturb():
    p = unitary_to_params(haar_random_unitary(3, 0))
    assert perturb(p, 0.0, 1) is p
    q = perturb(p, 1e-8, 1)
    assert np.linalg.norm(params_to_unitary(q) - params_to_unitary(p)) < 1e-7
    np.testing.assert_array_equal(perturb(p, 0.1, 9).theta, perturb(p, 0.1, 9).theta)
    with pytest.raises(ValueError):
        perturb(p, -1.0)
