"""Table emission: machine-readable CSV and human-readable Markdown.

The CSV carries exactly these columns, in this order::

    scenario_id, alpha, beta, pcs, se_pcs, e_n1, se_n1, asn, se_asn,
    n1_star_closed, n1_star_series, asn_wald_k0, replications, master_seed

Floats are serialized with 17 significant digits so parsing the file
recovers every value exactly.  The Markdown rendering groups rows by
scenario with the inferior-allocation limit in the caption line and
metric columns rounded to 3 decimals; classical scenarios label their
sample-number column ``rounds`` and add the companion ``total_draws``
column (one classical round samples both populations).
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

from .config import TableSpec
from .montecarlo import ExperimentSummary, Procedure

CSV_COLUMNS = (
    "scenario_id",
    "alpha",
    "beta",
    "pcs",
    "se_pcs",
    "e_n1",
    "se_n1",
    "asn",
    "se_asn",
    "n1_star_closed",
    "n1_star_series",
    "asn_wald_k0",
    "replications",
    "master_seed",
)


def _f(x: float) -> str:
    return format(x, ".17g")


def render_csv(summaries: list[ExperimentSummary]) -> str:
    if not summaries:
        raise ValueError("no summaries to emit")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for s in summaries:
        c = s.config
        writer.writerow(
            [
                c.label,
                _f(c.alpha),
                _f(c.beta),
                _f(s.pcs),
                _f(s.se_pcs),
                _f(s.mean_n_inferior),
                _f(s.se_n_inferior),
                _f(s.asn),
                _f(s.se_asn),
                _f(s.n1_star_closed),
                _f(s.n1_star_series),
                _f(s.asn_wald_k0),
                c.replications,
                c.master_seed,
            ]
        )
    return buf.getvalue()


def _grouped(summaries: list[ExperimentSummary]):
    groups: dict[str, list[ExperimentSummary]] = {}
    for s in summaries:
        groups.setdefault(s.config.label, []).append(s)
    return groups


def render_markdown(summaries: list[ExperimentSummary]) -> str:
    if not summaries:
        raise ValueError("no summaries to emit")
    lines = []
    for label, rows in _grouped(summaries).items():
        head = rows[0]
        classical = head.config.procedure is Procedure.CLASSICAL
        lines.append(
            f"### {label} — N1* = {head.n1_star_closed:.3f} (closed), "
            f"{head.n1_star_series:.3f} (series)"
        )
        lines.append("")
        if classical:
            lines.append("| alpha | beta | PCS | rounds | total_draws |")
            lines.append("|---|---|---|---|---|")
            for s in rows:
                lines.append(
                    f"| {s.config.alpha:g} | {s.config.beta:g} | {s.pcs:.3f} "
                    f"| {s.asn:.3f} | {s.mean_total_draws:.3f} |"
                )
        else:
            lines.append("| alpha | beta | PCS | E(N1) | ASN |")
            lines.append("|---|---|---|---|---|")
            for s in rows:
                lines.append(
                    f"| {s.config.alpha:g} | {s.config.beta:g} | {s.pcs:.3f} "
                    f"| {s.mean_n_inferior:.3f} | {s.asn:.3f} |"
                )
        lines.append("")
    return "\n".join(lines)


def emit_table(summaries: list[ExperimentSummary], spec: TableSpec) -> Path:
    """Write the rendered table to ``spec.path`` and return the path."""
    text = render_csv(summaries) if spec.format == "csv" else render_markdown(summaries)
    path = Path(spec.path)
    path.write_text(text)
    return path
