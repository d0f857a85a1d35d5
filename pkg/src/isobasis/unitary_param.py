"""
Smooth chart of U(d) with d**2 real coordinates.

A unitary is written as an ordered product of two-level rotations followed by
a diagonal of phases,

    U(theta) = G_1 G_2 ... G_K diag(exp(i phi_0), ..., exp(i phi_{d-1})),

with K = d(d-1)/2 and the pairs (p, q), p < q, visited column by column.
Each rotation on levels (p, q) carries an angle t and a phase a,

    G = [[cos t, -exp(-i a) sin t], [exp(i a) sin t, cos t]]  (on rows/cols p, q).

The layout of ``theta`` is ``[t_1, a_1, ..., t_K, a_K, phi_0, ..., phi_{d-1}]``.
Every unitary is reached: Givens elimination of the lower triangle
(:func:`unitary_to_params`) produces the coordinates explicitly.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def rotation_pairs(d: int) -> tuple:
    return tuple((p, q) for p in range(d - 1) for q in range(p + 1, d))


def num_params(d: int) -> int:
    return d * d


@dataclass(frozen=True, eq=False)
class UnitaryParams:
    d: int
    theta: np.ndarray

    def __post_init__(self):
        theta = np.array(self.theta, dtype=float).reshape(-1)
        if theta.size != num_params(self.d):
            raise ValueError(f"need {num_params(self.d)} parameters for d={self.d}, got {theta.size}")
        theta.setflags(write=False)
        object.__setattr__(self, "theta", theta)


def _rotation_blocks(t, a):
    """2x2 blocks for arrays of angles/phases of shape (...,)."""
    c, s = np.cos(t), np.sin(t)
    e = np.exp(1j * a)
    blk = np.empty(t.shape + (2, 2), dtype=complex)
    blk[..., 0, 0] = c
    blk[..., 0, 1] = -s * e.conj()
    blk[..., 1, 0] = s * e
    blk[..., 1, 1] = c
    return blk


def _rotation_block_derivs(t, a):
    c, s = np.cos(t), np.sin(t)
    e = np.exp(1j * a)
    dt = np.empty(t.shape + (2, 2), dtype=complex)
    dt[..., 0, 0] = -s
    dt[..., 0, 1] = -c * e.conj()
    dt[..., 1, 0] = c * e
    dt[..., 1, 1] = -s
    da = np.zeros(t.shape + (2, 2), dtype=complex)
    da[..., 0, 1] = 1j * s * e.conj()
    da[..., 1, 0] = 1j * s * e
    return dt, da


def _embed(blk, p, q, d):
    out = np.zeros(blk.shape[:-2] + (d, d), dtype=complex)
    out[..., range(d), range(d)] = 1.0
    out[..., p, p] = blk[..., 0, 0]
    out[..., p, q] = blk[..., 0, 1]
    out[..., q, p] = blk[..., 1, 0]
    out[..., q, q] = blk[..., 1, 1]
    return out


def _right_rotate(m, blk, p, q):
    """m @ G for a two-level G, touching only columns p and q."""
    out = m.copy()
    cp, cq = m[..., :, p], m[..., :, q]
    out[..., :, p] = cp * blk[..., None, 0, 0] + cq * blk[..., None, 1, 0]
    out[..., :, q] = cp * blk[..., None, 0, 1] + cq * blk[..., None, 1, 1]
    return out


def batch_params_to_unitary(theta: np.ndarray, d: int) -> np.ndarray:
    """Vectorized chart: ``theta`` of shape (..., d*d) to unitaries (..., d, d)."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape[-1] != d * d:
        raise ValueError(f"last axis must have length {d * d}, got {theta.shape[-1]}")
    batch = theta.shape[:-1]
    u = np.broadcast_to(np.eye(d, dtype=complex), batch + (d, d)).copy()
    for i, (p, q) in enumerate(rotation_pairs(d)):
        blk = _rotation_blocks(theta[..., 2 * i], theta[..., 2 * i + 1])
        u = _right_rotate(u, blk, p, q)
    phases = np.exp(1j * theta[..., d * (d - 1):])
    return u * phases[..., None, :]


def batch_jacobian(theta: np.ndarray, d: int):
    """Unitaries and their derivatives for a batch of parameter vectors.

    Returns ``(u, du)`` with ``u`` of shape (B, d, d) and ``du`` of shape
    (B, d*d, d, d), where ``du[b, p]`` is the derivative of ``u[b]`` with
    respect to ``theta[b, p]``.
    """
    theta = np.atleast_2d(np.asarray(theta, dtype=float))
    nb = theta.shape[0]
    pairs = rotation_pairs(d)
    k = len(pairs)
    eye = np.broadcast_to(np.eye(d, dtype=complex), (nb, d, d))

    blocks = [_rotation_blocks(theta[:, 2 * i], theta[:, 2 * i + 1]) for i in range(k)]
    # prefix[i] = G_1 ... G_i (prefix[0] = I)
    prefix = [eye.copy()]
    for i, (p, q) in enumerate(pairs):
        prefix.append(_right_rotate(prefix[-1], blocks[i], p, q))
    phases = np.exp(1j * theta[:, d * (d - 1):])
    rot = prefix[-1]
    u = rot * phases[:, None, :]

    du = np.empty((nb, d * d, d, d), dtype=complex)
    # suffix[i] = G_{i+1} ... G_K D applied from the right
    suffix = np.broadcast_to(np.eye(d, dtype=complex), (nb, d, d)) * phases[:, None, :]
    for i in range(k - 1, -1, -1):
        p, q = pairs[i]
        dt, da = _rotation_block_derivs(theta[:, 2 * i], theta[:, 2 * i + 1])
        for j, dblk in enumerate((dt, da)):
            emb = np.zeros((nb, d, d), dtype=complex)
            emb[:, p, p], emb[:, p, q] = dblk[:, 0, 0], dblk[:, 0, 1]
            emb[:, q, p], emb[:, q, q] = dblk[:, 1, 0], dblk[:, 1, 1]
            du[:, 2 * i + j] = prefix[i] @ emb @ suffix
        suffix = _embed(blocks[i], p, q, d) @ suffix
    for j in range(d):
        col = np.zeros((nb, d, d), dtype=complex)
        col[:, :, j] = 1j * u[:, :, j]
        du[:, d * (d - 1) + j] = col
    return u, du


def params_to_unitary(p: UnitaryParams) -> np.ndarray:
    return batch_params_to_unitary(p.theta, p.d)


def unitary_to_params(u, tol: float = 1e-14) -> UnitaryParams:
    """Chart coordinates reproducing ``u`` by Givens elimination of its lower triangle."""
    u = np.array(u, dtype=complex)
    d = u.shape[0]
    theta = np.zeros(d * d)
    work = u.copy()
    for i, (p, q) in enumerate(rotation_pairs(d)):
        a, b = work[p, p], work[q, p]
        if abs(b) <= tol:
            t, ph = 0.0, 0.0
        elif abs(a) <= tol:
            t, ph = np.pi / 2, float(np.angle(b))
        else:
            t = float(np.arctan2(abs(b), abs(a)))
            ph = float(np.angle(b) - np.angle(a))
        theta[2 * i], theta[2 * i + 1] = t, ph
        g = _embed(_rotation_blocks(np.array(t), np.array(ph)), p, q, d)
        work = g.conj().T @ work
    theta[d * (d - 1):] = np.angle(np.diag(work))
    return UnitaryParams(d, theta)


def haar_random_unitary(d: int, seed=None) -> np.ndarray:
    """Haar-distributed unitary from the QR decomposition of a complex Ginibre matrix."""
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph[None, :]


def perturb(p: UnitaryParams, scale: float, seed=None) -> UnitaryParams:
    if scale < 0:
        raise ValueError("scale must be non-negative")
    if scale == 0:
        return p
    rng = np.random.default_rng(seed)
    return UnitaryParams(p.d, p.theta + scale * rng.standard_normal(p.theta.size))
