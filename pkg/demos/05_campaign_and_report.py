"""
A seeded campaign written to JSONL and summarized as an overview grid.

The same files come out of the command line (``isobasis scan ...`` and
``isobasis report ...``); here we drive the library directly and keep the
sample counts small; the four-qubit rows take about half a minute.
"""
import tempfile
from pathlib import Path

from isobasis import io
from isobasis.optimizer import scan_four_qubit_partial, scan_three_qubit, scan_two_qutrit
from isobasis.report import build_report, render_report

out = Path(tempfile.mkdtemp()) / "campaign.jsonl"
with open(out, "a") as fh:
    for rows in (
        scan_two_qutrit(samples=5, restarts=10, master_seed=1),
        scan_three_qubit(samples=5, restarts=10, master_seed=1),
        scan_four_qubit_partial([12, 13], restarts=20, master_seed=1),
    ):
        for row in rows:
            fh.write(row.to_json() + "\n")

records = io.read_jsonl(out)
print(f"{len(records)} rows in {out}\n")
print(render_report(build_report(records)))
