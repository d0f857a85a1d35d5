"""
Numerical search for sets of mutually orthogonal local-unitary images of a state.

The objective is the sum of squared off-diagonal Gram moduli over the images
V_j |psi>. Each local unitary is expressed in the chart of
:mod:`isobasis.unitary_param`; the gradient is computed analytically and fed to
L-BFGS, restarted from independently seeded Haar-random starting points.
"""
from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from . import __version__
from .constructions import w_state, ghz_state
from .tensor_core import LocalUnitaryString, PureState, canonical_three_qubit, make_state
from .unitary_param import batch_jacobian, batch_params_to_unitary, haar_random_unitary, unitary_to_params

logger = logging.getLogger(__name__)

STALL_WINDOW = 50
STALL_RTOL = 1e-12


def derive_seed(master_seed: int, index: int) -> int:
    """Seed for the ``index``-th restart or sample; independent of execution order."""
    return int(np.random.SeedSequence([int(master_seed), int(index)]).generate_state(1, dtype=np.uint32)[0])


class OverlapObjective:
    """Sum of squared overlaps of m local-unitary images of ``state`` as a
    function of the flat chart coordinates of the free strings.

    With ``fix_first_identity`` the first image is ``state`` itself and only the
    remaining m-1 strings are parameterized.
    """

    def __init__(self, state: PureState, m: int, fix_first_identity: bool = True):
        self.state = state
        self.n, self.d = state.n, state.d
        self.m = m
        self.fixed = 1 if fix_first_identity else 0
        self.free = m - self.fixed
        self.per_unitary = self.d**2
        self.size = self.free * self.n * self.per_unitary
        self._psi = np.asarray(state.amps)

    def _legs(self, k):
        return self.d**k, self.d, self.d ** (self.n - k - 1)

    def unitaries(self, theta) -> np.ndarray:
        th = np.asarray(theta, dtype=float).reshape(self.free, self.n, self.per_unitary)
        return batch_params_to_unitary(th, self.d)

    def strings(self, theta) -> list[LocalUnitaryString]:
        eye = np.eye(self.d, dtype=complex)
        out = [LocalUnitaryString((eye,) * self.n)] if self.fixed else []
        us = self.unitaries(theta)
        out += [LocalUnitaryString(tuple(us[j])) for j in range(self.free)]
        return out

    def theta_from_strings(self, strings: Sequence[LocalUnitaryString]) -> np.ndarray:
        """Chart coordinates of the free strings (the first is skipped when fixed)."""
        free = list(strings)[self.fixed:]
        if len(free) != self.free:
            raise ValueError(f"need {self.m} strings, got {len(strings)}")
        return np.concatenate([unitary_to_params(u).theta for v in free for u in v.factors])

    def random_theta(self, seed) -> np.ndarray:
        rng = np.random.default_rng(seed)
        us = [haar_random_unitary(self.d, rng) for _ in range(self.free * self.n)]
        return np.concatenate([unitary_to_params(u).theta for u in us])

    def _images(self, us):
        t = np.broadcast_to(self._psi, (self.free, self._psi.size))
        for k in range(self.n):
            t = np.einsum("mab,mlbr->mlar", us[:, k], t.reshape((self.free,) + self._legs(k)))
        return t.reshape(self.free, -1)

    def _all_images(self, free_images):
        if self.fixed:
            return np.vstack([self._psi[None, :], free_images])
        return free_images

    def value(self, theta) -> float:
        p = self._all_images(self._images(self.unitaries(theta)))
        g = p.conj() @ p.T
        off = np.abs(g) ** 2
        np.fill_diagonal(off, 0.0)
        return float(off.sum())

    def value_and_grad(self, theta):
        th = np.asarray(theta, dtype=float).reshape(self.free * self.n, self.per_unitary)
        u_flat, du_flat = batch_jacobian(th, self.d)
        us = u_flat.reshape(self.free, self.n, self.d, self.d)
        dus = du_flat.reshape(self.free, self.n, self.per_unitary, self.d, self.d)

        imgs = self._images(us)
        p = self._all_images(imgs)
        g = p.conj() @ p.T
        np.fill_diagonal(g, 0.0)
        f = float(np.sum(np.abs(g) ** 2))
        # df = 4 Re sum_j <r_j | d phi_j>,  r_j = sum_k G[k, j] phi_k
        r = (g.T @ p)[self.fixed:]

        grad = np.empty((self.free, self.n, self.per_unitary))
        for k in range(self.n):
            shape = (self.free,) + self._legs(k)
            chi = np.einsum("mba,mlbr->mlar", us[:, k].conj(), imgs.reshape(shape))
            env = np.einsum("mlar,mlbr->mab", r.reshape(shape).conj(), chi)
            grad[:, k] = 4.0 * np.einsum("mab,mpab->mp", env, dus[:, k]).real
        return f, grad.reshape(-1)


@dataclass
class SearchProblem:
    state: PureState
    num_states: int
    fix_first_identity: bool = True
    tol: float = 1e-6
    restarts: int = 10
    max_iters: int = 3000
    master_seed: int = 0
    initial_strings: Optional[Sequence[LocalUnitaryString]] = None

    def validate(self):
        dim = self.state.d**self.state.n
        if not 2 <= self.num_states <= dim:
            raise ValueError(f"num_states must lie in [2, {dim}], got {self.num_states}")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.restarts < 1 or self.max_iters < 0:
            raise ValueError("need restarts >= 1 and max_iters >= 0")


@dataclass
class RestartOutcome:
    index: int
    seed: int
    f: float
    theta: np.ndarray
    iterations: int
    history: list = field(default_factory=list)


@dataclass
class SearchResult:
    best_f: float
    best_strings: list
    restart_index: int
    iterations: int
    converged: bool
    wall_ms: int
    best_theta: Optional[np.ndarray] = None
    restart_f: list = field(default_factory=list)


class _Stop(Exception):
    pass


def descend(obj: OverlapObjective, theta0, tol: float, max_iters: int):
    """L-BFGS from ``theta0``; stops once f <= tol, on a 50-iteration stall, or at ``max_iters``.

    Returns ``(theta, f, iterations, history)`` where ``history`` holds f at every
    accepted iterate (starting point included).
    """
    f0 = obj.value(theta0)
    history = [f0]
    best = {"x": np.array(theta0, dtype=float), "f": f0}
    if f0 <= tol or max_iters == 0:
        return best["x"], f0, 0, history

    def callback(intermediate_result):
        f = float(intermediate_result.fun)
        history.append(f)
        if f <= best["f"]:
            best["x"], best["f"] = np.array(intermediate_result.x), f
        if f <= tol:
            raise StopIteration
        if len(history) > STALL_WINDOW:
            old = history[-STALL_WINDOW - 1]
            if old - f <= STALL_RTOL * max(old, 1e-300):
                raise StopIteration

    res = minimize(
        obj.value_and_grad,
        best["x"],
        jac=True,
        method="L-BFGS-B",
        callback=callback,
        options={"maxiter": max_iters, "maxfun": 20 * max_iters, "ftol": 0.0, "gtol": 0.0, "maxcor": 30},
    )
    if res.fun < best["f"]:
        best["x"], best["f"] = np.array(res.x), float(res.fun)
    return best["x"], best["f"], len(history) - 1, history


def _run_restart(args):
    problem, r = args
    obj = OverlapObjective(problem.state, problem.num_states, problem.fix_first_identity)
    seed = derive_seed(problem.master_seed, r)
    if r == 0 and problem.initial_strings is not None:
        theta0 = obj.theta_from_strings(problem.initial_strings)
    else:
        theta0 = obj.random_theta(seed)
    theta, f, its, hist = descend(obj, theta0, problem.tol, problem.max_iters)
    return RestartOutcome(r, seed, f, theta, its, hist)


def run_restarts(problem: SearchProblem, workers: int = 1) -> list[RestartOutcome]:
    """All restarts of ``problem`` (no early exit); ordered by restart index."""
    problem.validate()
    jobs = [(problem, r) for r in range(problem.restarts)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(_run_restart, jobs))
    return [_run_restart(j) for j in jobs]


def minimize_f(problem: SearchProblem, workers: int = 1, stop_on_success: bool = True) -> SearchResult:
    """Multistart minimization of the overlap objective.

    Restart ``r`` draws its starting point from ``derive_seed(master_seed, r)``.
    In sequential mode the search stops after the first restart reaching
    ``tol`` when ``stop_on_success`` is set; the best restart (lowest f, ties
    broken by index) is returned either way.
    """
    problem.validate()
    t0 = time.perf_counter()
    if workers > 1 or not stop_on_success:
        outcomes = run_restarts(problem, workers)
    else:
        outcomes = []
        for r in range(problem.restarts):
            out = _run_restart((problem, r))
            outcomes.append(out)
            logger.debug("restart %d: f=%.3e after %d iterations", r, out.f, out.iterations)
            if out.f <= problem.tol:
                break
    best = min(outcomes, key=lambda o: (o.f, o.index))
    obj = OverlapObjective(problem.state, problem.num_states, problem.fix_first_identity)
    return SearchResult(
        best_f=best.f,
        best_strings=obj.strings(best.theta),
        restart_index=best.index,
        iterations=best.iterations,
        converged=best.f <= problem.tol,
        wall_ms=int(round(1000 * (time.perf_counter() - t0))),
        best_theta=best.theta,
        restart_f=[o.f for o in outcomes],
    )


def finite_difference_grad(fun, theta, eps: float = 1e-6) -> np.ndarray:
    """Central-difference gradient, used to validate the analytic one."""
    theta = np.asarray(theta, dtype=float)
    g = np.empty_like(theta)
    for i in range(theta.size):
        e = np.zeros_like(theta)
        e[i] = eps
        g[i] = (fun(theta + e) - fun(theta - e)) / (2 * eps)
    return g


# --- campaign scenarios -----------------------------------------------------


@dataclass
class ScanRecord:
    scenario: str
    sample_id: int
    seed: int
    params: dict
    best_f: float
    converged: bool
    restarts: int
    iterations: int
    wall_ms: int
    tool_version: str = __version__

    def to_json(self) -> str:
        return json.dumps(asdict(self))

    @classmethod
    def from_json(cls, line: str) -> "ScanRecord":
        return cls(**json.loads(line))


def hard_four_qubit_state() -> PureState:
    """(2/sqrt 6)|W_4> + (sqrt 2/sqrt 6)|GHZ_4>."""
    amps = 2 / np.sqrt(6) * w_state(4).amps + np.sqrt(2) / np.sqrt(6) * ghz_state(4, 2).amps
    return make_state(4, 2, amps)


def sample_qutrit_schmidt(seed) -> np.ndarray:
    """Positive Schmidt triple normalized in quadrature, sorted descending."""
    rng = np.random.default_rng(seed)
    lam = np.abs(rng.standard_normal(3))
    return np.sort(lam / np.linalg.norm(lam))[::-1]


def sample_canonical_coeffs(seed):
    """(a, b, c, d, e) with complex ``a`` and real rest, Gaussian then normalized."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(6)
    v /= np.linalg.norm(v)
    return complex(v[0], v[1]), float(v[2]), float(v[3]), float(v[4]), float(v[5])


def qutrit_schmidt_state(lam) -> PureState:
    amps = np.zeros(9, dtype=complex)
    amps[[0, 4, 8]] = lam
    return make_state(2, 3, amps)


def _record(scenario, sample_id, seed, params, result: SearchResult, restarts) -> ScanRecord:
    return ScanRecord(
        scenario=scenario,
        sample_id=sample_id,
        seed=seed,
        params=params,
        best_f=float(result.best_f),
        converged=bool(result.converged),
        restarts=restarts,
        iterations=int(result.iterations),
        wall_ms=int(result.wall_ms),
    )


def _two_qutrit_job(args):
    sample_id, seed, lam, restarts, tol, max_iters = args
    if lam is None:
        lam = sample_qutrit_schmidt(seed)
    lam = np.asarray(lam, dtype=float)
    prob = SearchProblem(qutrit_schmidt_state(lam), 9, tol=tol, restarts=restarts, max_iters=max_iters, master_seed=seed)
    res = minimize_f(prob)
    return _record("two-qutrit", sample_id, seed, {"schmidt": lam.tolist()}, res, restarts)


def _three_qubit_job(args):
    sample_id, seed, coeffs, restarts, tol, max_iters = args
    if coeffs is None:
        coeffs = sample_canonical_coeffs(seed)
    a, b, c, d, e = coeffs
    prob = SearchProblem(canonical_three_qubit(a, b, c, d, e), 8, tol=tol, restarts=restarts, max_iters=max_iters, master_seed=seed)
    res = minimize_f(prob)
    params = {"a_re": complex(a).real, "a_im": complex(a).imag, "b": b, "c": c, "d": d, "e": e}
    return _record("three-qubit", sample_id, seed, params, res, restarts)


def _map(fn, jobs, workers):
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            yield from ex.map(fn, jobs)
    else:
        yield from map(fn, jobs)


def scan_two_qutrit(samples: int, restarts: int, master_seed: int, tol: float = 1e-6,
                    max_iters: int = 3000, workers: int = 1, schmidt=None):
    """Search a 9-element basis for random two-qutrit Schmidt states.

    ``schmidt`` optionally pins the coefficient triples (one per sample).
    Yields :class:`ScanRecord` rows in sample order.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    fixed = list(schmidt) if schmidt is not None else [None] * samples
    jobs = [(i, derive_seed(master_seed, i), fixed[i], restarts, tol, max_iters) for i in range(samples)]
    yield from _map(_two_qutrit_job, jobs, workers)


def scan_three_qubit(samples: int, restarts: int, master_seed: int, tol: float = 1e-6,
                     max_iters: int = 3000, workers: int = 1, coeffs=None):
    """Search an 8-element basis for random three-qubit states in canonical form."""
    if samples < 1:
        raise ValueError("samples must be positive")
    fixed = list(coeffs) if coeffs is not None else [None] * samples
    jobs = [(i, derive_seed(master_seed, i), fixed[i], restarts, tol, max_iters) for i in range(samples)]
    yield from _map(_three_qubit_job, jobs, workers)


def probe_four_qubit(restarts: int, master_seed: int, m: int = 16, tol: float = 1e-6,
                     max_iters: int = 3000, workers: int = 1) -> SearchResult:
    """All ``restarts`` descents on the hard four-qubit state for ``m`` images.

    A failure to converge is negative evidence under the stated budget only.
    """
    if m > 16:
        raise ValueError("at most 16 orthonormal four-qubit states exist")
    prob = SearchProblem(hard_four_qubit_state(), m, tol=tol, restarts=restarts, max_iters=max_iters, master_seed=master_seed)
    return minimize_f(prob, workers=workers)


def _four_qubit_job(args):
    sample_id, m, seed, restarts, tol, max_iters = args
    res = probe_four_qubit(restarts, seed, m=m, tol=tol, max_iters=max_iters)
    return _record("four-qubit-partial", sample_id, seed, {"m": m, "state": "hard"}, res, restarts)


def scan_four_qubit_partial(m_values: Sequence[int], restarts: int, master_seed: int, tol: float = 1e-6,
                            max_iters: int = 3000, workers: int = 1):
    """One probe of the hard four-qubit state per requested basis size."""
    jobs = [(i, m, derive_seed(master_seed, m), restarts, tol, max_iters) for i, m in enumerate(m_values)]
    yield from _map(_four_qubit_job, jobs, workers)


@dataclass(frozen=True)
class ParamCount:
    free_params: int
    constraints: int

    @property
    def feasible_by_count(self) -> bool:
        return self.free_params >= self.constraints


def parameter_count(n: int, m: Optional[int] = None, d: int = 2) -> ParamCount:
    """Free local-unitary parameters versus real orthogonality constraints for qubits.

    Each of the m-1 non-identity strings carries 3 parameters per qubit
    (SU(2)); each ordered pair of distinct states contributes one real
    constraint. ``m=None`` means a full basis of 2**n states.
    """
    if d != 2:
        raise ValueError("parameter counting is implemented for qubits only")
    full = 2**n
    m = full if m is None else m
    if not 1 <= m <= full:
        raise ValueError(f"m must lie in [1, {full}]")
    return ParamCount(free_params=3 * n * (m - 1), constraints=m * m - m)
