import csv
import io
import json
import logging
import os
from typing import Dict, List, Optional, Sequence

import markdown

from ..core.model import Instance
from ..core.settings import APP_NAME
from .bench import SummaryRow, SweepRow, best_variants, summarize
from .milp import export_milp

logger = logging.getLogger(__name__)

CSV_HEADER = ["workload", "capacity_factor", "heuristic", "makespan", "ratio"]


def _sweep_dict(row: SweepRow) -> Dict:
    return {"workload": row.workload, "capacity_factor": row.capacity_factor, "heuristic": str(row.heuristic),
            "makespan": row.makespan, "ratio": row.ratio}


def _summary_dict(row: SummaryRow) -> Dict:
    return {"capacity_factor": row.capacity_factor, "heuristic": str(row.heuristic),
            "category": row.heuristic.category.value, "min": row.min, "q1": row.q1,
            "median": row.median, "q3": row.q3, "max": row.max}


def sweep_csv(rows: Sequence[SweepRow]) -> str:
    out = io.StringIO(newline="")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow([row.workload, repr(row.capacity_factor), str(row.heuristic), repr(row.makespan), repr(row.ratio)])
    return out.getvalue()


def sweep_json(rows: Sequence[SweepRow], summary: Optional[List[SummaryRow]] = None) -> str:
    summary = summarize(rows) if summary is None else summary
    document = {
        "rows": [_sweep_dict(row) for row in rows],
        "summary": [_summary_dict(row) for row in summary],
        "best_variants": [_summary_dict(row) for row in best_variants(summary)],
    }
    return json.dumps(document, indent=2)


def _table(header: Sequence[str], rows: Sequence[Sequence]) -> List[str]:
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    for row in rows:
        lines.append("| " + " | ".join(f"{v:.4f}" if isinstance(v, float) else str(v) for v in row) + " |")
    return lines


def sweep_markdown(rows: Sequence[SweepRow], summary: Optional[List[SummaryRow]] = None) -> str:
    summary = summarize(rows) if summary is None else summary
    workloads = sorted({row.workload for row in rows})
    columns = ["capacity factor", "heuristic", "min", "q1", "median", "q3", "max"]
    lines = [f"# {APP_NAME} sweep report", "",
             f"{len(rows)} runs over {len(workloads)} workload(s). Ratios are makespan / OMIM.", "",
             "## Ratio quartiles", ""]
    lines += _table(columns, [(r.capacity_factor, str(r.heuristic), r.min, r.q1, r.median, r.q3, r.max) for r in summary])
    lines += ["", "## Best variant per category", ""]
    lines += _table(["capacity factor", "category", "heuristic", "median"],
                    [(r.capacity_factor, r.heuristic.category.value, str(r.heuristic), r.median)
                     for r in best_variants(summary)])
    return "\n".join(lines) + "\n"


class Exporter:
    """Writes sweep reports and model files into ``out_dir``."""

    def __init__(self, out_dir: str = "."):
        self.out_dir = out_dir

    def _path(self, filename: str) -> str:
        os.makedirs(self.out_dir, exist_ok=True)
        return os.path.join(self.out_dir, filename)

    def _write(self, filename: str, content: str) -> str:
        file_path = self._path(filename)
        with open(file_path, "w", encoding="utf-8", newline="") as f:
            f.write(content)
        logger.info("Wrote %s", file_path)
        return file_path

    def export_to_csv(self, rows: Sequence[SweepRow], filename: str = "sweep.csv") -> str:
        return self._write(filename, sweep_csv(rows))

    def export_to_json(self, rows: Sequence[SweepRow], filename: str = "sweep.json") -> str:
        return self._write(filename, sweep_json(rows))

    def export_to_md(self, rows: Sequence[SweepRow], filename: str = "report.md") -> str:
        return self._write(filename, sweep_markdown(rows))

    def export_to_html(self, rows: Sequence[SweepRow], filename: str = "report.html") -> str:
        return self._write(filename, self._generate_full_html(sweep_markdown(rows)))

    def export_sweep(self, rows: Sequence[SweepRow]) -> List[str]:
        return [
            self.export_to_csv(rows),
            self.export_to_json(rows),
            self.export_to_md(rows),
            self.export_to_html(rows),
        ]

    def export_milp_to_lp(self, instance: Instance, filename: str = "problem_dt.lp") -> str:
        return self._write(filename, export_milp(instance))

    def _generate_full_html(self, md_content: str) -> str:
        """A complete HTML document with basic styling around the rendered Markdown."""
        body_html = markdown.markdown(md_content, extensions=["tables"])
        css = """
        body { font-family: sans-serif; line-height: 1.6; padding: 25px; margin: 0 auto; max-width: 850px; background-color: #fff; color: #111; }
        h1, h2, h3 { margin-top: 1.6em; margin-bottom: 0.6em; border-bottom: 1px solid #eee; padding-bottom: 0.3em; }
        table { border-collapse: collapse; margin: 1.2em 0; width: auto; border: 1px solid #ccc; }
        th, td { border: 1px solid #ccc; padding: 8px 12px; text-align: left; }
        td { font-variant-numeric: tabular-nums; }
        th { background-color: #f2f2f2; font-weight: bold; }
        """
        return f"""<!DOCTYPE html>
<html lang="en">
<head>
    <meta charset="UTF-8">
    <meta name="viewport" content="width=device-width, initial-scale=1.0">
    <title>{APP_NAME} sweep report</title>
    <style>
{css}
    </style>
</head>
<body>
{body_html}
</body>
</html>"""
