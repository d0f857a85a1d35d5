"""
Command line front end.

    isobasis construct --family w --n 4
    isobasis verify state.json basis.json
    isobasis search state.json --m 9 --restarts 10 --seed 1
    isobasis scan two-qutrit --samples 50 --restarts 10 --seed 1
    isobasis si enumerate --n 3
    isobasis report runs.jsonl

Exit codes: 0 success, 1 negative outcome (f above tolerance, search not
converged), 2 bad input. Every run writes one manifest JSON into the output
directory (``--out-dir``, else ``$ISOBASIS_OUT_DIR``, else the working directory).
"""
from __future__ import annotations

import argparse
import datetime as _dt
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import constructions as cons
from . import io, optimizer, report, state_independent as si
from .tensor_core import candidate_basis, make_state, random_state

logger = logging.getLogger("isobasis")

OUT_DIR_ENV = "ISOBASIS_OUT_DIR"


class UsageError(Exception):
    pass


def _now():
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def _out_dir(args) -> Path:
    path = Path(args.out_dir or os.environ.get(OUT_DIR_ENV) or ".")
    path.mkdir(parents=True, exist_ok=True)
    return path


def _config(args) -> dict:
    skip = {"func", "out_dir"}
    return {k: v for k, v in vars(args).items() if k not in skip}


# --- construct --------------------------------------------------------------


def _schmidt_vector(args, d):
    if args.schmidt is not None:
        lam = np.asarray(args.schmidt, dtype=float)
        if lam.size != d or np.any(lam < 0) or not lam.any():
            raise UsageError(f"--schmidt needs {d} non-negative values, not all zero")
    else:
        lam = np.abs(np.random.default_rng(args.seed).standard_normal(d))
    return lam / np.linalg.norm(lam)


def _build_family(args):
    fam = args.family
    if fam == "bell":
        return cons.bell_state(), cons.bell_strings()
    if fam == "ghz":
        n, d = args.n or 2, args.d or 2
        if n < 2 or d < 2:
            raise UsageError("ghz needs --n >= 2 and --d >= 2")
        return cons.ghz_state(n, d), cons.ghz_basis_strings(n, d)
    if fam == "two-qubit-schmidt":
        return cons.schmidt_form_state(_schmidt_vector(args, 2)), cons.two_qubit_schmidt_strings()
    if fam == "bipartite-pow2":
        if args.state:
            psi = io.state_from_json(io.read_json(args.state))
            if psi.n != 2 or psi.d not in (2, 4, 8):
                raise UsageError("bipartite-pow2 needs a two-party state with d in 2, 4, 8")
            b = cons.schmidt_basis_for(psi)
            return psi, list(b.strings)
        d = args.d or 4
        if d not in (2, 4, 8):
            raise UsageError("bipartite-pow2 supports --d 2, 4 or 8")
        strings = cons.two_qubit_schmidt_strings() if d == 2 else cons.bipartite_pow2_strings(d)
        return cons.schmidt_form_state(_schmidt_vector(args, d)), strings
    if fam == "w":
        n = args.n or 3
        if n < 1:
            raise UsageError("w needs --n >= 1")
        return cons.w_state(n), cons.w_basis_strings(n)
    if fam in ("two-qubit-si", "three-qubit-si"):
        n = 2 if fam == "two-qubit-si" else 3
        return random_state(n, 2, args.seed, real_only=True), cons.state_independent_strings(n)
    raise UsageError(f"unknown family {fam!r}")


def cmd_construct(args):
    psi, strings = _build_family(args)
    b = candidate_basis(psi, strings)
    out = _out_dir(args)
    io.write_json(out / "state.json", io.state_to_json(psi))
    io.write_json(out / "basis.json", io.basis_to_json(strings))
    print(f"family {args.family}: {len(strings)} strings, f = {b.f_value:.3e}")
    print(f"wrote {out / 'state.json'} and {out / 'basis.json'}")
    return 0, {"strings": len(strings), "f": b.f_value}


# --- verify -----------------------------------------------------------------


def cmd_verify(args):
    psi = io.state_from_json(io.read_json(args.state))
    n, d, strings = io.basis_from_json(io.read_json(args.basis))
    if (n, d) != (psi.n, psi.d):
        raise UsageError(f"basis acts on (n={n}, d={d}) but the state has (n={psi.n}, d={psi.d})")
    if len(strings) < 2:
        raise UsageError("basis file needs at least two strings")
    b = candidate_basis(psi, strings)
    resid = max(max(s.unitarity_residuals()) for s in strings)
    print(f"f = {b.f_value:.3e}")
    print(f"max |<psi_j|psi_k>| (j != k) = {b.max_offdiag:.3e}")
    print(f"max unitarity residual = {resid:.3e}")
    ok = b.f_value <= args.tol
    summary = {"f": b.f_value, "max_offdiag": b.max_offdiag, "unitarity_residual": resid}
    if args.real_scan:
        worst = si.si_verify_on_random_real_states(strings, args.real_scan, args.seed)
        print(f"max f over {args.real_scan} random real states = {worst:.3e}")
        summary["real_scan_max_f"] = worst
        ok = ok and worst <= args.tol
    print("PASS" if ok else "FAIL")
    return (0 if ok else 1), summary


# --- search / scan ----------------------------------------------------------


def cmd_search(args):
    psi = io.state_from_json(io.read_json(args.state))
    if not 2 <= args.m <= psi.dim:
        raise UsageError(f"--m must lie in [2, {psi.dim}] for this state")
    prob = optimizer.SearchProblem(psi, args.m, tol=args.tol, restarts=args.restarts,
                                   max_iters=args.max_iters, master_seed=args.seed)
    res = optimizer.minimize_f(prob, workers=args.workers)
    real = bool(np.allclose(psi.amps.imag, 0))
    rec = optimizer.ScanRecord(
        scenario="search", sample_id=0, seed=args.seed,
        params={"n": psi.n, "d": psi.d, "m": args.m, "real": real, "state": str(args.state)},
        best_f=float(res.best_f), converged=bool(res.converged), restarts=args.restarts,
        iterations=int(res.iterations), wall_ms=int(res.wall_ms),
    )
    out = _out_dir(args)
    jsonl = Path(args.out) if args.out else out / "search.jsonl"
    with open(jsonl, "a") as fh:
        fh.write(rec.to_json() + "\n")
    io.write_json(out / "search-basis.json", io.basis_to_json(res.best_strings))
    io.write_json(out / "search-checkpoint.json", io.checkpoint_to_json(prob, res))
    status = "converged" if res.converged else "no basis found within budget"
    print(f"best f = {res.best_f:.3e} (restart {res.restart_index}, {res.iterations} iterations): {status}")
    return (0 if res.converged else 1), {"best_f": res.best_f, "converged": res.converged}


def _parse_m_values(text):
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --m-values {text!r}") from exc
    if not vals or any(not 2 <= v <= 16 for v in vals):
        raise UsageError("--m-values must be integers in [2, 16]")
    return vals


def cmd_scan(args):
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    common = dict(restarts=args.restarts, master_seed=args.seed, tol=args.tol,
                  max_iters=args.max_iters, workers=args.workers)
    if args.scenario == "two-qutrit":
        rows = optimizer.scan_two_qutrit(args.samples, **common)
    elif args.scenario == "three-qubit":
        rows = optimizer.scan_three_qubit(args.samples, **common)
    elif args.scenario == "four-qubit-partial":
        rows = optimizer.scan_four_qubit_partial(_parse_m_values(args.m_values), **common)
    else:
        raise UsageError(f"unknown scenario {args.scenario!r}")
    out = _out_dir(args)
    jsonl = Path(args.out) if args.out else out / f"scan-{args.scenario}.jsonl"
    total = done = 0
    with open(jsonl, "a") as fh:
        for rec in rows:
            fh.write(rec.to_json() + "\n")
            fh.flush()
            total += 1
            done += rec.converged
            logger.info("sample %d: f=%.3e converged=%s", rec.sample_id, rec.best_f, rec.converged)
    print(f"{args.scenario}: {done}/{total} converged ({done / total:.0%}); rows in {jsonl}")
    return 0, {"rows": total, "converged": done}


# --- state-independent analysis -------------------------------------------


def cmd_si(args):
    out = _out_dir(args)
    if args.action == "enumerate":
        if args.n is None or not 1 <= args.n <= 4:
            raise UsageError("enumerate needs --n in 1..4 (n >= 5 reduces to n = 4 by fixing one qubit)")
        e = si.enumerate_si_pauli(args.n)
        io.write_json(out / f"si-enumerate-n{args.n}.json", e.to_json())
        print(f"n={args.n}: {len(e.solutions)} solutions, {e.nodes_explored} nodes, exhausted={e.exhausted}")
        for sol in e.label_solutions()[:10]:
            print("  " + " | ".join(sol))
        return 0, {"solutions": len(e.solutions), "exhausted": e.exhausted}
    if args.action == "certify-4":
        rep = si.four_qubit_parity_certificate()
        io.write_json(out / "si-certificate-4.json", rep)
        print(f"rank {rep['rank']}, augmented rank {rep['augmented_rank']}: "
              f"{'inconsistent' if rep['inconsistent'] else 'consistent'}")
        if rep["combination"]:
            print("sum of these rows reads 0 = 1:")
            for name in rep["combination"]:
                print("  " + name)
        return 0, {"inconsistent": rep["inconsistent"]}
    if args.action == "witness":
        if not args.basis:
            raise UsageError("witness needs --basis FILE")
        _, _, strings = io.basis_from_json(io.read_json(args.basis))
        worst = 1.0
        for j, s in enumerate(strings):
            _, ov = si.eigenvector_witness(s)
            worst = min(worst, ov)
            print(f"string {j}: product eigenvector overlap |<psi|V|psi>| = {ov:.12f}")
        return 0, {"min_overlap": worst}
    if args.action == "odd-dim":
        if args.d is None or args.d % 2 == 0:
            raise UsageError("odd-dim needs an odd --d")
        rep = si.odd_dim_obstruction(args.d, args.trials, args.seed)
        print(f"d={args.d}: max |det| over {args.trials} trials = {rep['max_abs_det']:.3e}; "
              "det(A) = det(A^T) = det(-A) = -det(A) forces det = 0")
        return (0 if rep["all_below_tol"] else 1), rep
    raise UsageError(f"unknown action {args.action!r}")


# --- report -----------------------------------------------------------------


def cmd_report(args):
    records = []
    for path in args.jsonl:
        records.extend(io.read_jsonl(path))
    rep = report.build_report(records)
    for w in rep["warnings"]:
        print(f"warning: {w}", file=sys.stderr)
    print(report.render_report(rep))
    return 0, {"rows": len(records), "warnings": rep["warnings"]}


# --- plumbing ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="isobasis", description=__doc__.split("\n\n")[0].strip())
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out-dir", help=f"output directory (default ${OUT_DIR_ENV} or .)")
        return sp

    c = common(sub.add_parser("construct", help="write an analytic construction"))
    c.add_argument("--family", required=True, choices=[
        "bell", "ghz", "two-qubit-schmidt", "bipartite-pow2", "w", "two-qubit-si", "three-qubit-si"])
    c.add_argument("--n", type=int)
    c.add_argument("--d", type=int)
    c.add_argument("--schmidt", type=float, nargs="+")
    c.add_argument("--state", help="state file for bipartite-pow2 (Schmidt rotations folded in)")
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_construct)

    v = common(sub.add_parser("verify", help="evaluate a state/basis pair"))
    v.add_argument("state")
    v.add_argument("basis")
    v.add_argument("--tol", type=float, default=1e-10)
    v.add_argument("--real-scan", type=int, default=0, metavar="N")
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    s = common(sub.add_parser("search", help="numerically search for orthogonal images"))
    s.add_argument("state")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--restarts", type=int, default=10)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--tol", type=float, default=1e-6)
    s.add_argument("--max-iters", type=int, default=3000)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out", help="JSONL file to append the result row to")
    s.set_defaults(func=cmd_search)

    sc = common(sub.add_parser("scan", help="run a sampling campaign"))
    sc.add_argument("scenario", choices=["two-qutrit", "three-qubit", "four-qubit-partial"])
    sc.add_argument("--samples", type=int, default=50)
    sc.add_argument("--restarts", type=int, default=10)
    sc.add_argument("--seed", type=int, required=True)
    sc.add_argument("--tol", type=float, default=1e-6)
    sc.add_argument("--max-iters", type=int, default=3000)
    sc.add_argument("--m-values", default="11,12,13,14")
    sc.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    sc.add_argument("--out", help="JSONL file to append rows to")
    sc.set_defaults(func=cmd_scan)

    si_p = common(sub.add_parser("si", help="state-independent analysis"))
    si_p.add_argument("action", choices=["enumerate", "certify-4", "witness", "odd-dim"])
    si_p.add_argument("--n", type=int)
    si_p.add_argument("--d", type=int)
    si_p.add_argument("--trials", type=int, default=1000)
    si_p.add_argument("--seed", type=int, default=0)
    si_p.add_argument("--basis")
    si_p.set_defaults(func=cmd_si)

    r = common(sub.add_parser("report", help="overview grid from JSONL rows"))
    r.add_argument("jsonl", nargs="*")
    r.set_defaults(func=cmd_report)
    return p


def _json_safe(obj):
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(levelname)s %(message)s")
    started = _now()
    try:
        code, summary = args.func(args)
    except (UsageError, io.FormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        code, summary = 2, {"error": str(exc)}
    manifest = {
        "command": args.command,
        "config": _json_safe(_config(args)),
        "master_seed": getattr(args, "seed", None),
        "tool_version": __version__,
        "started_at": started,
        "finished_at": _now(),
        "exit_code": code,
        "outcome": _json_safe(summary),
    }
    try:
        io.write_json(_out_dir(args) / f"{args.command}.manifest.json", manifest)
    except OSError as exc:
        print(f"warning: could not write manifest: {exc}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
