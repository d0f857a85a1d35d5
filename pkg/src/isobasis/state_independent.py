"""
State-independent constructions on real states.

Two strings map every real state to orthogonal vectors exactly when
V_j^H V_j' is skew-symmetric. For qubits the local unitaries can be taken
from {I, X, Z, XZ}; writing each as X^x Z^z, products reduce to XOR of the
(x, z) bits (phases dropped) and skew-symmetry of a string product to the
parity of the number of XZ factors. This module provides the matrix-level
checks, the GF(2) search over Pauli strings, the four-qubit inconsistency
certificate, the product-eigenvector witness for complex states and the
odd-dimension determinant argument.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .constructions import PAULI, pauli_string
from .tensor_core import (
    LocalUnitaryString,
    PureState,
    apply_local_string,
    candidate_basis,
    inner_product,
    random_state,
)
from .unitary_param import haar_random_unitary

LABELS = ("I", "X", "Z", "XZ")
LABEL_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "XZ": (1, 1)}
BITS_LABEL = {v: k for k, v in LABEL_BITS.items()}


# --- matrix-level checks ----------------------------------------------------


def is_skew_symmetric(m, tol: float = 1e-10) -> bool:
    """True when ``m + m.T`` (plain transpose) vanishes entrywise within ``tol``."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return bool(np.max(np.abs(m + m.T), initial=0.0) <= tol)


def is_symmetric(m, tol: float = 1e-10) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(m - m.T), initial=0.0) <= tol)


def real_overlap_counterexample(u, tol: float = 1e-10) -> Optional[np.ndarray]:
    """A real unit vector with ``|<psi|u|psi>| > tol``, or None if none exists.

    Only basis vectors |k> and pair states (|i> + |j>)/sqrt 2 are tried; when
    all of those are mapped to orthogonal vectors, ``u`` is skew-symmetric.
    """
    u = np.asarray(u)
    d = u.shape[0]
    for k in range(d):
        if abs(u[k, k]) > tol:
            v = np.zeros(d)
            v[k] = 1.0
            return v
    for i, j in itertools.combinations(range(d), 2):
        v = np.zeros(d)
        v[[i, j]] = 1 / np.sqrt(2)
        if abs(v @ u @ v) > tol:
            return v
    return None


def lemma1_property_check(u, samples: int = 100, seed=None, tol: float = 1e-10) -> bool:
    """Whether ``u`` maps random real states (and the probe states) to orthogonal ones."""
    u = np.asarray(u)
    d = u.shape[0]
    if real_overlap_counterexample(u, tol) is not None:
        return False
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        v = rng.standard_normal(d)
        v /= np.linalg.norm(v)
        if abs(v @ u @ v) > tol:
            return False
    return True


def random_skew_unitary(d: int, seed=None) -> np.ndarray:
    """V (XZ (+) ... (+) XZ) V^T for a Haar-random V; d must be even."""
    if d % 2:
        raise ValueError("skew-symmetric unitaries exist only in even dimension")
    block = np.kron(np.eye(d // 2), PAULI["XZ"])
    v = haar_random_unitary(d, seed)
    return v @ block @ v.T


def _pair_products(strings: Sequence[LocalUnitaryString]):
    for (j, a), (k, b) in itertools.combinations(enumerate(strings), 2):
        yield j, k, a.adjoint().compose(b)


def verify_si_construction(strings: Sequence[LocalUnitaryString], tol: float = 1e-10) -> bool:
    """Every pairwise product V_j^H V_j' is skew-symmetric.

    Skew-symmetry of a tensor product is decided factorwise (every factor
    symmetric or skew-symmetric, with an odd number of skew ones), which is
    equivalent to checking the dense product for product operators.
    """
    strings = list(strings)
    if len(strings) < 2:
        raise ValueError("need at least two strings")
    for s in strings[1:]:
        if s.n != strings[0].n or s.d != strings[0].d:
            raise ValueError("strings differ in shape")
    ok = all(_string_is_skew(p, tol) for _, _, p in _pair_products(strings))
    labels = [string_to_labels(s) for s in strings]
    if ok and all(lab is not None for lab in labels):
        codes = [labels_to_code(lab) for lab in labels]
        if not all(skew_parity(a, b) for a, b in itertools.combinations(codes, 2)):
            raise AssertionError("matrix check and GF(2) parity rule disagree")
    return ok


def _string_is_skew(s: LocalUnitaryString, tol: float) -> bool:
    skew = 0
    for u in s.factors:
        # global phases of individual factors are irrelevant
        u = u / np.linalg.norm(u) * np.sqrt(u.shape[0])
        if is_skew_symmetric(u, tol):
            skew += 1
        elif not is_symmetric(u, tol):
            return False
    return skew % 2 == 1


def string_is_skew_dense(s: LocalUnitaryString, tol: float = 1e-10) -> bool:
    return is_skew_symmetric(s.matrix(), tol)


def si_verify_on_random_real_states(strings: Sequence[LocalUnitaryString], samples: int = 100,
                                    seed=None, real_only: bool = True) -> float:
    """Largest overlap objective seen over ``samples`` random (real) states."""
    strings = list(strings)
    n, d = strings[0].n, strings[0].d
    for s in strings[1:]:
        if s.n != n or s.d != d:
            raise ValueError("strings differ in shape")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        psi = random_state(n, d, rng, real_only=real_only)
        worst = max(worst, candidate_basis(psi, strings).f_value)
    return worst


# --- GF(2) Pauli encoding ---------------------------------------------------


def labels_to_code(labels: Sequence[str]) -> tuple[int, int]:
    """Pack a label string into (x, z) bitmasks, first qubit most significant."""
    x = z = 0
    for lab in labels:
        bx, bz = LABEL_BITS[lab]
        x, z = (x << 1) | bx, (z << 1) | bz
    return x, z


def code_to_labels(code: tuple[int, int], n: int) -> tuple[str, ...]:
    x, z = code
    return tuple(BITS_LABEL[((x >> (n - 1 - k)) & 1, (z >> (n - 1 - k)) & 1)] for k in range(n))


def string_to_labels(s: LocalUnitaryString, tol: float = 1e-10) -> Optional[tuple[str, ...]]:
    """Labels of a qubit string whose factors are exactly I, X, Z or XZ (no phases)."""
    if s.d != 2:
        return None
    out = []
    for u in s.factors:
        for lab, p in PAULI.items():
            if np.max(np.abs(u - p)) <= tol:
                out.append(lab)
                break
        else:
            return None
    return tuple(out)


def skew_parity(a: tuple[int, int], b: tuple[int, int]) -> bool:
    """Parity rule: the product of two Pauli strings is skew-symmetric iff the
    number of positions where it equals XZ is odd."""
    return bin((a[0] ^ b[0]) & (a[1] ^ b[1])).count("1") % 2 == 1


@dataclass
class SIEnumeration:
    n: int
    solutions: list = field(default_factory=list)
    nodes_explored: int = 0
    exhausted: bool = False

    def label_solutions(self) -> list[list[str]]:
        """Solutions as lists of label-strings such as ``"XZ.I.Z"`` joined by ``.``."""
        return [[".".join(code_to_labels(c, self.n)) for c in sol] for sol in self.solutions]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "solutions": [[list(code_to_labels(c, self.n)) for c in sol] for sol in self.solutions],
            "nodes_explored": self.nodes_explored,
            "exhausted": self.exhausted,
        }


def enumerate_si_pauli(n: int, max_solutions: Optional[int] = None) -> SIEnumeration:
    """All Pauli-string state-independent constructions on n real qubits.

    String j carries the bit-flip pattern x = j (the first string is the
    identity); the z bits are chosen by depth-first search, each new string
    having odd XZ parity with all previously placed ones. Solutions are
    listed in this canonical order.
    """
    if not 1 <= n <= 4:
        raise ValueError("exhaustive enumeration supports 1 <= n <= 4; larger n are "
                         "excluded because fixing one qubit reduces them to n = 4")
    size = 2**n
    out = SIEnumeration(n)
    placed = [(0, 0)]

    def extend():
        out.nodes_explored += 1
        if len(placed) == size:
            out.solutions.append(tuple(placed))
            return max_solutions is not None and len(out.solutions) >= max_solutions
        x = len(placed)
        for z in range(size):
            cand = (x, z)
            if all(skew_parity(cand, p) for p in placed):
                placed.append(cand)
                stop = extend()
                placed.pop()
                if stop:
                    return True
        return False

    stopped = extend()
    out.exhausted = not stopped
    return out


def codes_to_strings(codes, n: int) -> list[LocalUnitaryString]:
    return [pauli_string(code_to_labels(c, n)) for c in codes]


def canonical_codes(strings: Sequence[LocalUnitaryString]) -> tuple:
    """Pauli codes of a construction, normalized so the identity comes first
    and the rest are sorted by bit-flip pattern."""
    codes = [labels_to_code(string_to_labels(s)) for s in strings]
    first = codes[0]
    codes = [(c[0] ^ first[0], c[1] ^ first[1]) for c in codes]
    return tuple(sorted(codes))


# --- four-qubit GF(2) certificate -------------------------------------------


def _gf2_solve(a: np.ndarray, b: np.ndarray):
    """Row reduce [a | b] over GF(2).

    Returns ``(rank_a, rank_ab, combination)`` where ``combination`` is a 0/1
    vector over the original rows summing to ``0 = 1`` when the system is
    inconsistent, else None.
    """
    a = (np.asarray(a, dtype=np.uint8) % 2).copy()
    b = (np.asarray(b, dtype=np.uint8) % 2).copy()
    rows, cols = a.shape
    track = np.eye(rows, dtype=np.uint8)
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i, c]), None)
        if piv is None:
            continue
        for arr in (a, b, track):
            arr[[r, piv]] = arr[[piv, r]]
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] ^= a[r]
                b[i] ^= b[r]
                track[i] ^= track[r]
        r += 1
    rank_a = r
    bad = [i for i in range(r, rows) if b[i]]
    combo = track[bad[0]].copy() if bad else None
    return rank_a, rank_a + (1 if bad else 0), combo


def _r(i, j):
    """Variable index of r_ij (i = 1..5, j = 1..4)."""
    return (i - 1) * 4 + (j - 1)


def four_qubit_system(include_last_row: bool = True):
    """GF(2) constraints on the Z-insertion bits r_ij of the six four-qubit rows
    with 0, 1 and 4 bit flips.

    Rows 1..4 of the r-table belong to the single-flip strings, row 5 to the
    all-flip string. Returns ``(names, A, b)``.
    """
    names, rows, rhs = [], [], []

    def add(name, variables, value):
        row = np.zeros(20, dtype=np.uint8)
        for v in variables:
            row[v] ^= 1
        names.append(name)
        rows.append(row)
        rhs.append(value)

    for i in range(1, 5):
        add(f"V{i + 1} skew: r{i}{i} = 1", [_r(i, i)], 1)
    for i, j in itertools.combinations(range(1, 5), 2):
        add(f"V{i + 1}^H V{j + 1} skew: r{i}{j} + r{j}{i} = 1", [_r(i, j), _r(j, i)], 1)
    if include_last_row:
        add("V6 skew: r51 + r52 + r53 + r54 = 1", [_r(5, j) for j in range(1, 5)], 1)
        for i in range(1, 5):
            others = [j for j in range(1, 5) if j != i]
            add(
                f"V6^H V{i + 1} skew",
                [_r(i, j) for j in others] + [_r(5, j) for j in others],
                1,
            )
    return names, np.array(rows), np.array(rhs, dtype=np.uint8)


def four_qubit_parity_certificate(include_last_row: bool = True) -> dict:
    """Rank certificate that the four-qubit constraint system has no solution."""
    names, a, b = four_qubit_system(include_last_row)
    rank_a, rank_ab, combo = _gf2_solve(a, b)
    report = {
        "variables": [f"r{i}{j}" for i in range(1, 6) for j in range(1, 5)],
        "rows": [
            {"name": nm, "support": [int(v) for v in np.flatnonzero(row)], "rhs": int(val)}
            for nm, row, val in zip(names, a, b)
        ],
        "rank": int(rank_a),
        "augmented_rank": int(rank_ab),
        "inconsistent": rank_ab > rank_a,
        "combination": None,
    }
    if combo is not None:
        used = np.flatnonzero(combo)
        lhs = np.bitwise_xor.reduce(a[used], axis=0)
        assert not lhs.any() and int(np.bitwise_xor.reduce(b[used])) == 1
        report["combination"] = [names[i] for i in used]
    return report


# --- complex states and odd dimensions --------------------------------------


def eigenvector_witness(v: LocalUnitaryString):
    """Product of per-factor eigenvectors, which ``v`` maps to itself up to a phase.

    Returns the witness state and ``|<psi|V|psi>|`` (equal to one).
    """
    vecs = []
    for u in v.factors:
        _, w = np.linalg.eig(u)
        vecs.append(w[:, 0] / np.linalg.norm(w[:, 0]))
    amps = vecs[0]
    for vec in vecs[1:]:
        amps = np.kron(amps, vec)
    psi = PureState(v.n, v.d, amps / np.linalg.norm(amps))
    return psi, abs(inner_product(psi, apply_local_string(v, psi)))


def random_skew_symmetric(d: int, rng) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return g - g.T


def odd_dim_obstruction(d: int, trials: int = 1000, seed=None, tol: float = 1e-10) -> dict:
    """Determinants of random skew-symmetric matrices in odd dimension ``d``.

    Matrices are scaled to unit spectral norm, so a unitary (all singular
    values one) would have determinant of modulus one; the observed moduli
    are at rounding level. The symbolic part records det(A^T) = det(-A) =
    (-1)^d det(A), and for d <= 5 expands the determinant of a generic
    symbolic skew-symmetric matrix.
    """
    if d % 2 == 0:
        raise ValueError(f"d={d} is even; XZ-type skew-symmetric unitaries exist there")
    rng = np.random.default_rng(seed)
    dets = []
    for _ in range(trials):
        a = random_skew_symmetric(d, rng)
        a /= np.linalg.norm(a, 2)
        dets.append(abs(np.linalg.det(a)))
    symbolic = None
    if d <= 5:
        import sympy

        syms = sympy.symbols(f"a0:{d * (d - 1) // 2}")
        mat = sympy.zeros(d, d)
        for s, (i, j) in zip(syms, itertools.combinations(range(d), 2)):
            mat[i, j], mat[j, i] = s, -s
        symbolic = str(sympy.expand(mat.det()))
    max_det = float(max(dets)) if dets else 0.0
    return {
        "d": d,
        "trials": trials,
        "max_abs_det": max_det,
        "all_below_tol": max_det <= tol,
        "sign_factor": (-1) ** d,
        "det_forced_zero": (-1) ** d == -1,
        "symbolic_det": symbolic,
    }


def pauli_closure_table() -> dict:
    """Product of every ordered pair from {I, X, Z, XZ}: the label it equals up
    to phase, and whether it is symmetric or skew-symmetric."""
    table = {}
    for a, b in itertools.product(LABELS, repeat=2):
        prod = PAULI[a].conj().T @ PAULI[b]
        match = None
        for lab, p in PAULI.items():
            ph = np.vdot(p, prod) / 2
            if abs(abs(ph) - 1) < 1e-12 and np.allclose(prod, ph * p, atol=1e-12):
                match = lab
                break
        sym = "symmetric" if is_symmetric(prod) else "skew" if is_skew_symmetric(prod) else None
        table[(a, b)] = (match, sym)
    return table


def reflection(theta: float) -> np.ndarray:
    """Real symmetric orthogonal 2x2 [[cos t, sin t], [sin t, -cos t]]."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [s, -c]], dtype=complex)


def rotation(alpha: float) -> np.ndarray:
    c, s = np.cos(alpha), np.sin(alpha)
    return np.array([[c, -s], [s, c]], dtype=complex)


def pauli_gauge(theta: float):
    """Conjugate {I, U_1(t), U_2(t), XZ} by the rotation by t/2.

    U_1(t) is the reflection above and U_2(t) = U_1(t - pi/2); the result is
    {I, Z, -X, XZ}, i.e. the Pauli-type set up to signs.
    """
    w = rotation(theta / 2)
    gates = [np.eye(2, dtype=complex), reflection(theta), reflection(theta - np.pi / 2), PAULI["XZ"]]
    return [w.conj().T @ g @ w for g in gates]
