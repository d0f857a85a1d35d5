"""
Multipartite pure states, strings of local unitaries and the overlap objective.

Amplitudes are stored flat with the first subsystem most significant, i.e. the
basis ket |l_1 ... l_n> sits at index sum_k l_k * d**(n - k).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

NORM_TOL = 1e-6
UNITARY_TOL = 1e-10


def _frozen(a: np.ndarray, dtype=complex) -> np.ndarray:
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state of ``n`` subsystems with local dimension ``d``."""

    n: int
    d: int
    amps: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "amps", _frozen(self.amps))

    @property
    def dim(self) -> int:
        return self.d**self.n

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to an ``(d,) * n`` array."""
        return self.amps.reshape((self.d,) * self.n)

    def __repr__(self):
        return f"PureState(n={self.n}, d={self.d})"


@dataclass(frozen=True, eq=False)
class LocalUnitaryString:
    """Ordered factors U_1, ..., U_n of the operator U_1 (x) ... (x) U_n."""

    factors: tuple

    def __post_init__(self):
        facs = tuple(_frozen(u) for u in self.factors)
        if not facs:
            raise ValueError("a local unitary string needs at least one factor")
        d = facs[0].shape[0]
        for u in facs:
            if u.shape != (d, d):
                raise ValueError(f"factor of shape {u.shape}, expected {(d, d)}")
        object.__setattr__(self, "factors", facs)

    @property
    def n(self) -> int:
        return len(self.factors)

    @property
    def d(self) -> int:
        return self.factors[0].shape[0]

    def matrix(self) -> np.ndarray:
        """Dense d^n x d^n operator. Only meant for small systems and tests."""
        out = np.ones((1, 1), dtype=complex)
        for u in self.factors:
            out = np.kron(out, u)
        return out

    def adjoint(self) -> "LocalUnitaryString":
        return LocalUnitaryString(tuple(u.conj().T for u in self.factors))

    def compose(self, other: "LocalUnitaryString") -> "LocalUnitaryString":
        """Factorwise product ``self @ other``."""
        _check_string_shapes(self, other)
        return LocalUnitaryString(tuple(a @ b for a, b in zip(self.factors, other.factors)))

    def unitarity_residuals(self) -> list[float]:
        return [unitarity_residual(u) for u in self.factors]

    def __repr__(self):
        return f"LocalUnitaryString(n={self.n}, d={self.d})"


@dataclass(frozen=True, eq=False)
class CandidateBasis:
    state: PureState
    strings: tuple
    derived_states: tuple
    gram: np.ndarray = field(repr=False)
    f_value: float = 0.0

    @property
    def max_offdiag(self) -> float:
        g = np.abs(self.gram)
        np.fill_diagonal(g, 0.0)
        return float(g.max()) if g.size else 0.0


@dataclass(frozen=True, eq=False)
class SchmidtForm:
    """Schmidt coefficients plus the local rotations that bring a state to
    sum_l coeffs[l] |l, l>."""

    coeffs: np.ndarray
    rot_a: np.ndarray = field(repr=False)
    rot_b: np.ndarray = field(repr=False)

    def schmidt_state(self) -> PureState:
        d = len(self.coeffs)
        m = np.diag(self.coeffs).astype(complex)
        return PureState(2, d, m.reshape(-1))


def unitarity_residual(u) -> float:
    u = np.asarray(u)
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def _check_string_shapes(a: LocalUnitaryString, b: LocalUnitaryString):
    if a.n != b.n or a.d != b.d:
        raise ValueError(f"string shapes differ: (n={a.n}, d={a.d}) vs (n={b.n}, d={b.d})")


def _check_same_shape(phi: PureState, psi: PureState):
    if phi.n != psi.n or phi.d != psi.d:
        raise ValueError(f"state shapes differ: (n={phi.n}, d={phi.d}) vs (n={psi.n}, d={psi.d})")


def make_state(n: int, d: int, amps) -> PureState:
    """Build a :class:`PureState`, renormalizing tiny norm deviations.

    Inputs whose norm differs from one by ``NORM_TOL`` or more are rejected
    rather than silently rescaled.
    """
    if n < 1 or d < 2:
        raise ValueError(f"need n >= 1 and d >= 2, got n={n}, d={d}")
    amps = np.asarray(amps, dtype=complex).reshape(-1)
    if amps.size != d**n:
        raise ValueError(f"expected {d**n} amplitudes for n={n}, d={d}, got {amps.size}")
    norm = np.linalg.norm(amps)
    if norm == 0:
        raise ValueError("zero vector is not a state")
    if abs(norm - 1.0) >= NORM_TOL:
        raise ValueError(f"amplitudes have norm {norm:.6g}; deviation from 1 exceeds {NORM_TOL}")
    if abs(norm - 1.0) > 1e-15:
        amps = amps / norm
    return PureState(n, d, amps)


def basis_state(n: int, d: int, digits: Sequence[int]) -> PureState:
    """Computational basis ket |digits[0] ... digits[n-1]>."""
    if len(digits) != n:
        raise ValueError("need one digit per subsystem")
    amps = np.zeros(d**n, dtype=complex)
    amps[np.ravel_multi_index(tuple(digits), (d,) * n)] = 1.0
    return PureState(n, d, amps)


def local_string(factors) -> LocalUnitaryString:
    """Validated :class:`LocalUnitaryString` from a sequence of matrices."""
    s = LocalUnitaryString(tuple(factors))
    for k, u in enumerate(s.factors):
        r = unitarity_residual(u)
        if r > UNITARY_TOL:
            raise ValueError(f"factor {k} is not unitary (residual {r:.3g})")
    return s


def apply_factor(tensor: np.ndarray, u: np.ndarray, k: int) -> np.ndarray:
    """Contract ``u`` onto leg ``k`` of a state tensor."""
    return np.moveaxis(np.tensordot(u, tensor, axes=([1], [k])), 0, k)


def apply_local_string(v: LocalUnitaryString, psi: PureState) -> PureState:
    """Apply U_1 (x) ... (x) U_n to ``psi`` one tensor leg at a time."""
    if v.n != psi.n or v.d != psi.d:
        raise ValueError(f"string (n={v.n}, d={v.d}) does not act on state (n={psi.n}, d={psi.d})")
    t = psi.tensor()
    for k, u in enumerate(v.factors):
        t = apply_factor(t, u, k)
    return PureState(psi.n, psi.d, t.reshape(-1))


def inner_product(phi: PureState, psi: PureState) -> complex:
    """<phi|psi>, antilinear in ``phi``."""
    _check_same_shape(phi, psi)
    return complex(np.vdot(phi.amps, psi.amps))


def gram_and_f(states: Sequence[PureState]) -> tuple[np.ndarray, float]:
    """Gram matrix ``G[j, j'] = <psi_j|psi_j'>`` and the sum of squared
    off-diagonal moduli, which vanishes exactly for pairwise orthogonal states."""
    if len(states) < 2:
        raise ValueError("need at least two states")
    for s in states[1:]:
        _check_same_shape(states[0], s)
    mat = np.stack([s.amps for s in states])
    gram = mat.conj() @ mat.T
    off = np.abs(gram) ** 2
    np.fill_diagonal(off, 0.0)
    return gram, float(off.sum())


def candidate_basis(psi: PureState, strings: Sequence[LocalUnitaryString]) -> CandidateBasis:
    derived = tuple(apply_local_string(v, psi) for v in strings)
    gram, f = gram_and_f(derived)
    return CandidateBasis(psi, tuple(strings), derived, gram, f)


def schmidt_decompose(psi: PureState) -> SchmidtForm:
    """Schmidt form of a bipartite state via the SVD of its coefficient matrix.

    With ``M = A diag(s) B^H`` the rotations are ``rot_a = A^H`` and
    ``rot_b = B^T`` so that ``(rot_a (x) rot_b) psi = sum_l s_l |l, l>``.
    Columns belonging to (numerically) equal singular values are ordered by
    lexicographic comparison of the left singular vectors.
    """
    if psi.n != 2:
        raise ValueError(f"Schmidt decomposition needs a bipartite state, got n={psi.n}")
    d = psi.d
    mat = psi.amps.reshape(d, d)
    a, s, bh = np.linalg.svd(mat)
    order = sorted(range(d), key=lambda i: (-round(s[i], 10), _lex_key(a[:, i])))
    a, s, bh = a[:, order], s[order], bh[order, :]
    return SchmidtForm(_frozen(s, float), _frozen(a.conj().T), _frozen(bh.conj()))


def _lex_key(vec):
    return tuple(np.round(np.concatenate([vec.real, vec.imag]), 10))


def random_state(n: int, d: int, seed=None, real_only: bool = False) -> PureState:
    """Uniformly distributed (Haar) random pure state from Gaussian amplitudes."""
    rng = np.random.default_rng(seed)
    amps = rng.standard_normal(d**n).astype(complex)
    if not real_only:
        amps = amps + 1j * rng.standard_normal(d**n)
    return PureState(n, d, amps / np.linalg.norm(amps))


CANONICAL_SUPPORT = (0b000, 0b011, 0b101, 0b110, 0b111)


def canonical_three_qubit(a: complex, b: float, c: float, d: float, e: float) -> PureState:
    """a|000> + b|011> + c|101> + d|110> + e|111> with real b, c, d, e."""
    coeffs = (complex(a), float(b), float(c), float(d), float(e))
    norm2 = sum(abs(x) ** 2 for x in coeffs)
    if abs(norm2 - 1.0) > 1e-10:
        raise ValueError(f"canonical coefficients have squared norm {norm2:.12g}, expected 1")
    amps = np.zeros(8, dtype=complex)
    amps[list(CANONICAL_SUPPORT)] = coeffs
    return PureState(3, 2, amps)


def bloch_vector(q: PureState) -> np.ndarray:
    """(x, y, z) Bloch coordinates of a single-qubit state."""
    if q.n != 1 or q.d != 2:
        raise ValueError("Bloch vectors are defined for single qubits only")
    a, b = q.amps
    c = np.conj(a) * b
    return np.array([2 * c.real, 2 * c.imag, abs(a) ** 2 - abs(b) ** 2])


def hemisphere_partition(qubit_states: Sequence[PureState], tol: float = 1e-12):
    """Split qubit states into two lists so that no two orthogonal states share a list.

    A state goes to the first list when the first Bloch coordinate (in the
    order z, x, y) exceeding ``tol`` in modulus is positive. Orthogonal states
    have antipodal Bloch vectors and are therefore always separated.
    """
    upper, lower = [], []
    for q in qubit_states:
        x, y, z = bloch_vector(q)
        side = 0.0
        for coord in (z, x, y):
            if abs(coord) > tol:
                side = coord
                break
        (upper if side > 0 else lower).append(q)
    return upper, lower
