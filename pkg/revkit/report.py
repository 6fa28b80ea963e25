"""
Text and Markdown rendering of metrics: the results table (Alg., USW, NSW,
Min Score, EF1 Viol.), the inequality table and the run report. Nothing here
embeds a timestamp, so identical runs give identical files.
"""
from __future__ import annotations

import logging
from typing import Mapping

import markdown
import pandas as pd

from .metrics import MetricsReport

logger = logging.getLogger(__name__)

HTML_TEMPLATE = """<!DOCTYPE html>
<html>
<head>
<meta charset="utf-8">
<title>{title}</title>
<style>
body {{ font-family: Arial, sans-serif; line-height: 1.6; max-width: 1200px; margin: 0 auto; padding: 20px; }}
table {{ border-collapse: collapse; margin-bottom: 20px; }}
th, td {{ border: 1px solid #ddd; padding: 8px; text-align: right; }}
th {{ background-color: #f2f2f2; }}
</style>
</head>
<body>
{body}
</body>
</html>
"""


def format_nsw(report: MetricsReport, digits: int = 2) -> str:
    """NSW cell; with zero-score papers it reads "0.00 (x)" where x is the NSW of the rest."""
    if report.zero_score_count:
        return f"{0.0:.{digits}f} ({report.nsw_positive:.{digits}f})"
    return f"{report.nsw:.{digits}f}"


def _block_label(fraction: float) -> str:
    return f"Lowest {fraction * 100:g}%"


def results_frame(rows: Mapping[str, MetricsReport], digits: int = 2) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "Alg.": name,
                "USW": f"{r.usw_mean:.{digits}f}",
                "NSW": format_nsw(r, digits),
                "Min Score": f"{r.min_score:.{digits}f}",
                "EF1 Viol.": str(r.ef1_violations),
            }
            for name, r in rows.items()
        ]
    )


def inequality_frame(rows: Mapping[str, MetricsReport], digits: int = 2) -> pd.DataFrame:
    records = []
    for name, r in rows.items():
        record = {"Alg.": name}
        for fraction, mean, std in r.percentile_blocks:
            record[_block_label(fraction)] = f"{mean:.{digits}f} ± {std:.{digits}f}"
        record["Gini"] = f"{r.gini:.{digits + 1}f}"
        record["Envy"] = f"{r.total_envy:.{digits}f}"
        records.append(record)
    return pd.DataFrame(records)


RUN_LABELS = {
    "usw_mean": "USW",
    "nsw": "NSW",
    "min_score": "Min Score",
    "ef1_violations": "EF1 Viol.",
    "gini": "Gini",
    "total_envy": "Envy",
}


def runs_frame(summary: Mapping[str, tuple[float, float]], digits: int = 2) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {"Metric": RUN_LABELS.get(name, name), "Mean": f"{mean:.{digits}f}", "Std": f"{std:.{digits}f}"}
            for name, (mean, std) in summary.items()
        ]
    )


def _text(frame: pd.DataFrame) -> str:
    return frame.to_string(index=False) + "\n"


def results_table(rows: Mapping[str, MetricsReport], digits: int = 2) -> str:
    """Aligned plain-text table with one row per algorithm."""
    return _text(results_frame(rows, digits))


def inequality_table(rows: Mapping[str, MetricsReport], digits: int = 2) -> str:
    return _text(inequality_frame(rows, digits))


def runs_table(summary: Mapping[str, tuple[float, float]], digits: int = 2) -> str:
    return _text(runs_frame(summary, digits))


def _markdown_table(frame: pd.DataFrame) -> list[str]:
    header = list(frame.columns)
    lines = [
        "| " + " | ".join(header) + " |",
        "|" + "|".join("-" * (len(h) + 2) for h in header) + "|",
    ]
    for row in frame.itertuples(index=False):
        lines.append("| " + " | ".join(str(v) for v in row) + " |")
    lines.append("")
    return lines


def markdown_report(title: str, rows: Mapping[str, MetricsReport],
                    run_info: Mapping[str, object] | None = None,
                    notes: list[str] | None = None,
                    runs: Mapping[str, tuple[float, float]] | None = None) -> str:
    """
    Build the run report in Markdown.

    Args:
        title: Report heading
        rows: Metrics per algorithm name
        run_info: Settings shown in the "Run" section (seed, subsample size, ...)
        notes: Extra bullet points, e.g. a negative-score shift or an early halt
        runs: Mean and std per metric over repeated seeded runs (optional)

    Returns:
        The report text
    """
    report = [f"# {title}", ""]
    if run_info:
        report += ["## Run", ""]
        report += [f"- **{key}**: {value}" for key, value in run_info.items()]
        report.append("")
    report += ["## Welfare", ""] + _markdown_table(results_frame(rows))
    report += ["## Inequality", ""] + _markdown_table(inequality_frame(rows))
    if runs:
        report += ["## Runs", ""] + _markdown_table(runs_frame(runs))
    if notes:
        report += ["## Notes", ""] + [f"- {note}" for note in notes] + [""]
    return "\n".join(report)


def write_report(path: str, text: str, title: str = "Assignment report") -> None:
    """Write Markdown, or HTML rendered from it when the path ends in .html."""
    if path.lower().endswith((".html", ".htm")):
        body = markdown.markdown(text, extensions=["tables"])
        content = HTML_TEMPLATE.format(title=title, body=body)
    else:
        content = text if text.endswith("\n") else text + "\n"
    with open(path, "w", encoding="utf-8") as f:
        f.write(content)
    logger.info("Report written to %s", path)
