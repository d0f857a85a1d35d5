"""JSON and JSONL file formats for states, unitaries, bases, checkpoints and scan rows."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .optimizer import ScanRecord, SearchProblem
from .tensor_core import LocalUnitaryString, PureState, local_string, make_state


class FormatError(ValueError):
    """A file does not follow the expected schema."""


def _complex(re, im) -> np.ndarray:
    """Exact recombination (``re + 1j*im`` would drop the sign of a zero imaginary part)."""
    re, im = np.asarray(re, dtype=float), np.asarray(im, dtype=float)
    if re.shape != im.shape:
        raise FormatError(f"real part {re.shape} and imaginary part {im.shape} differ in shape")
    out = np.empty(re.shape, dtype=complex)
    out.real, out.imag = re, im
    return out


def dumps(obj) -> str:
    return json.dumps(obj, indent=1) + "\n"


def write_json(path, obj):
    Path(path).write_text(dumps(obj))


def read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from exc


def state_to_json(psi: PureState) -> dict:
    return {
        "n": psi.n,
        "d": psi.d,
        "amps_re": np.asarray(psi.amps, dtype=complex).real.tolist(),
        "amps_im": np.asarray(psi.amps, dtype=complex).imag.tolist(),
    }


def state_from_json(obj) -> PureState:
    try:
        amps = _complex(obj["amps_re"], obj["amps_im"])
        return make_state(int(obj["n"]), int(obj["d"]), amps)
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed state: {exc}") from exc


def unitary_to_json(u) -> dict:
    u = np.asarray(u, dtype=complex)
    return {"d": int(u.shape[0]), "re": u.real.tolist(), "im": u.imag.tolist()}


def unitary_from_json(obj) -> np.ndarray:
    try:
        u = _complex(obj["re"], obj["im"])
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed unitary: {exc}") from exc
    if u.shape != (obj["d"], obj["d"]):
        raise FormatError(f"unitary of shape {u.shape} declared with d={obj['d']}")
    return u


def basis_to_json(strings, n: int = None, d: int = None) -> dict:
    strings = list(strings)
    return {
        "n": strings[0].n if n is None else n,
        "d": strings[0].d if d is None else d,
        "strings": [{"factors": [unitary_to_json(u) for u in s.factors]} for s in strings],
    }


def basis_from_json(obj) -> tuple[int, int, list[LocalUnitaryString]]:
    try:
        n, d = int(obj["n"]), int(obj["d"])
        strings = [local_string([unitary_from_json(u) for u in s["factors"]]) for s in obj["strings"]]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed basis: {exc}") from exc
    for s in strings:
        if s.n != n or s.d != d:
            raise FormatError(f"string of shape (n={s.n}, d={s.d}) in a basis declared (n={n}, d={d})")
    return n, d, strings


def checkpoint_to_json(problem: SearchProblem, result) -> dict:
    return {
        "problem": {
            "state": state_to_json(problem.state),
            "num_states": problem.num_states,
            "fix_first_identity": problem.fix_first_identity,
            "tol": problem.tol,
            "restarts": problem.restarts,
            "max_iters": problem.max_iters,
            "master_seed": problem.master_seed,
        },
        "best_f": float(result.best_f),
        "restart_index": int(result.restart_index),
        "best_theta": np.asarray(result.best_theta, dtype=float).tolist(),
    }


def checkpoint_from_json(obj):
    """Problem and best parameter vector stored by :func:`checkpoint_to_json`."""
    p = obj["problem"]
    problem = SearchProblem(
        state=state_from_json(p["state"]),
        num_states=int(p["num_states"]),
        fix_first_identity=bool(p["fix_first_identity"]),
        tol=float(p["tol"]),
        restarts=int(p["restarts"]),
        max_iters=int(p["max_iters"]),
        master_seed=int(p["master_seed"]),
    )
    return problem, np.asarray(obj["best_theta"], dtype=float)


def read_jsonl(path) -> list[ScanRecord]:
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rows.append(ScanRecord.from_json(line))
            except (json.JSONDecodeError, TypeError) as exc:
                raise FormatError(f"{path}:{lineno}: {exc}") from exc
    return rows
