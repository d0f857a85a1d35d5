"""Overview grid of scenarios versus outcomes, assembled from scan/search rows."""
from __future__ import annotations

from collections import defaultdict
from statistics import median

from . import __version__

COLUMNS = ("(2,2,R)", "(2,2,C)", "(3,2,R)", "(3,2,C)", "(4,2,R)", "(2,3,C)", "(2,4|8,C)", "(n,odd,R)")
ROWS = ("state-dependent", "state-independent")

YES, NO, NONE = "✓", "✗", "---"

# Cells settled by constructions or impossibility arguments implemented in the library.
ANALYTIC = {
    ("state-dependent", "(2,2,R)"): YES,
    ("state-dependent", "(2,2,C)"): YES,
    ("state-dependent", "(3,2,R)"): YES,
    ("state-dependent", "(2,4|8,C)"): YES,
    ("state-dependent", "(n,odd,R)"): NONE,
    ("state-independent", "(2,2,R)"): YES,
    ("state-independent", "(2,2,C)"): NO,
    ("state-independent", "(3,2,R)"): YES,
    ("state-independent", "(3,2,C)"): NO,
    ("state-independent", "(4,2,R)"): NO,
    ("state-independent", "(2,3,C)"): NO,
    ("state-independent", "(2,4|8,C)"): NO,
    ("state-independent", "(n,odd,R)"): NO,
}

# Numerically evidenced cells and the row scenarios that feed them.
NUMERICAL = {
    ("state-dependent", "(3,2,C)"): ("three-qubit", YES),
    ("state-dependent", "(2,3,C)"): ("two-qutrit", YES),
    ("state-dependent", "(4,2,R)"): ("four-qubit", NO),
}


FULL_SIZE = {"two-qutrit": 9, "three-qubit": 8, "four-qubit": 16}


def _column_key(rec) -> str:
    """Which numerical scenario a row contributes to.

    Only full-basis rows feed a grid cell; partial-basis rows (m below the
    dimension) are kept apart under ``<scenario>-partial``.
    """
    if rec.scenario in ("two-qutrit", "three-qubit"):
        return rec.scenario
    if rec.scenario.startswith("four-qubit"):
        key = "four-qubit"
    elif rec.scenario == "search":
        shape = (rec.params.get("n"), rec.params.get("d"))
        key = {(2, 3): "two-qutrit", (3, 2): "three-qubit", (4, 2): "four-qubit"}.get(shape)
        if key is None:
            return "search"
    else:
        return rec.scenario
    m = rec.params.get("m", FULL_SIZE[key])
    return key if m == FULL_SIZE[key] else f"{key}-partial"


def _numeric_cell(rows, expected):
    if not rows:
        return "(no data)"
    done = sum(r.converged for r in rows)
    if expected == YES:
        return f"({YES})" if done == len(rows) else f"budget-exhausted {done}/{len(rows)}"
    # negative evidence: any budget-limited failure on the probed state
    return f"({NO})" if done < len(rows) else f"({YES}?)"


def build_report(records) -> dict:
    records = list(records)
    groups = defaultdict(list)
    for rec in records:
        groups[_column_key(rec)].append(rec)

    grid = {}
    for row in ROWS:
        for col in COLUMNS:
            if (row, col) in ANALYTIC:
                grid[(row, col)] = ANALYTIC[(row, col)]
            elif (row, col) in NUMERICAL:
                key, expected = NUMERICAL[(row, col)]
                grid[(row, col)] = _numeric_cell(groups.get(key, []), expected)
            else:
                grid[(row, col)] = "?"

    stats = {}
    for scen in sorted({r.scenario for r in records}):
        rows = [r for r in records if r.scenario == scen]
        fs = [r.best_f for r in rows]
        stats[scen] = {
            "rows": len(rows),
            "converged": sum(r.converged for r in rows),
            "min_f": min(fs),
            "median_f": median(fs),
            "max_f": max(fs),
            "wall_ms": sum(r.wall_ms for r in rows),
        }
    partial = sorted(
        (r for r in groups.get("four-qubit-partial", []) if "m" in r.params), key=lambda r: r.params["m"]
    )
    by_m = {}
    for r in partial:
        cur = by_m.setdefault(r.params["m"], {"rows": 0, "converged": 0, "min_f": r.best_f})
        cur["rows"] += 1
        cur["converged"] += r.converged
        cur["min_f"] = min(cur["min_f"], r.best_f)

    versions = sorted({r.tool_version for r in records})
    warnings = []
    if len(versions) > 1 or (versions and versions[0] != __version__):
        warnings.append(f"rows come from tool versions {versions} (current {__version__})")
    return {"grid": grid, "stats": stats, "partial": by_m, "versions": versions, "warnings": warnings}


def render_report(report: dict) -> str:
    width = max(len(c) for c in COLUMNS + tuple(report["grid"].values())) + 2
    head = " " * 18 + "".join(c.center(width) for c in COLUMNS)
    lines = [head]
    for row in ROWS:
        lines.append(row.ljust(18) + "".join(report["grid"][(row, c)].center(width) for c in COLUMNS))
    lines.append("")
    lines.append(f"{YES}/{NO}: analytic; parenthesized: numerical search (finite budget, not a proof)")
    for scen, s in report["stats"].items():
        lines.append(
            f"{scen}: {s['converged']}/{s['rows']} converged, f min {s['min_f']:.2e} "
            f"median {s['median_f']:.2e} max {s['max_f']:.2e}, {s['wall_ms'] / 1000:.1f} s"
        )
    for m, s in report.get("partial", {}).items():
        lines.append(f"four-qubit partial basis m={m}: {s['converged']}/{s['rows']} converged, best f {s['min_f']:.2e}")
    return "\n".join(lines)
