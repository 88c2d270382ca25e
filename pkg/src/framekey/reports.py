"""Report writers and the run manifest.

Report files are deterministic: fixed column orders, floats via repr
(shortest round-trip form), rows in the analysis ordering. Timestamps
live only in the run manifest so analysis outputs stay byte-identical
across reruns with the same inputs.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable

from .agreement import AgreementReport
from .confusion import ConfusionReport, OverlapReport
from .saliency import SaliencyRecord

SALIENCY_FIELDS = [
    "label", "O1", "N1", "O2", "N2", "E1", "E2", "g2",
    "p_threshold", "significant", "direction", "rel_freq1", "rel_freq2",
]
CONFUSION_FIELDS = ["label_a", "label_b", "count", "npmi", "npmi_weighted"]
AGREEMENT_FIELDS = ["batch", "agreement_rate", "majority_vote_rate"]


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _saliency_row(record: SaliencyRecord, p_threshold: float) -> dict:
    cell = record.cell
    return {
        "label": record.label,
        "O1": cell.o1,
        "N1": cell.n1,
        "O2": cell.o2,
        "N2": cell.n2,
        "E1": cell.e1,
        "E2": cell.e2,
        "g2": record.g2,
        "p_threshold": p_threshold,
        "significant": record.significant,
        "direction": record.direction.value,
        "rel_freq1": record.rel_freq1,
        "rel_freq2": record.rel_freq2,
    }


def write_saliency_csv(records: Iterable[SaliencyRecord], path: str | Path, p_threshold: float):
    with Path(path).open("w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=SALIENCY_FIELDS)
        writer.writeheader()
        for record in records:
            row = _saliency_row(record, p_threshold)
            writer.writerow({k: _fmt(v) for k, v in row.items()})


def write_saliency_json(
    records: Iterable[SaliencyRecord],
    path: str | Path,
    p_threshold: float,
    dimension: str,
):
    payload = {
        "dimension": dimension,
        "p_threshold": p_threshold,
        "records": [
            {
                **_saliency_row(record, p_threshold),
                "examples1": [list(ref) for ref in record.examples1],
                "examples2": [list(ref) for ref in record.examples2],
            }
            for record in records
        ],
    }
    _write_json(payload, path)


def write_figure_data(
    records: Iterable[SaliencyRecord],
    path: str | Path,
    dimension: str,
    p_threshold: float,
):
    """Column-oriented arrays for plotting, in g2-descending order."""
    records = list(records)
    payload = {
        "dimension": dimension,
        "p_threshold": p_threshold,
        "labels": [r.label for r in records],
        "g2": [r.g2 for r in records],
        "significant": [r.significant for r in records],
        "direction": [r.direction.value for r in records],
        "rel_freq1": [r.rel_freq1 for r in records],
        "rel_freq2": [r.rel_freq2 for r in records],
    }
    _write_json(payload, path)


def write_confusion_csv(report: ConfusionReport, path: str | Path):
    with Path(path).open("w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=CONFUSION_FIELDS)
        writer.writeheader()
        for record in report.records:
            writer.writerow(
                {
                    "label_a": record.label_a,
                    "label_b": record.label_b,
                    "count": record.count,
                    "npmi": _fmt(record.npmi),
                    "npmi_weighted": _fmt(record.npmi_weighted),
                }
            )


def write_confusion_json(report: ConfusionReport, path: str | Path):
    payload = {
        "mode": report.mode.value,
        "n_events": report.n_events,
        "n_samples": report.n_samples,
        "n_selections": report.n_selections,
        "n_pairs": report.n_pairs,
        "records": [
            {
                "label_a": r.label_a,
                "label_b": r.label_b,
                "count": r.count,
                "p_a": r.p_a,
                "p_b": r.p_b,
                "p_ab": r.p_ab,
                "npmi": r.npmi,
                "npmi_weighted": r.npmi_weighted,
                "degenerate": r.degenerate,
            }
            for r in report.records
        ],
    }
    _write_json(payload, path)


def write_agreement_csv(reports: Iterable[AgreementReport], path: str | Path):
    """One row per batch plus a final unweighted mean row."""
    reports = list(reports)
    if not reports:
        raise ValueError("no agreement reports to write")
    with Path(path).open("w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=AGREEMENT_FIELDS)
        writer.writeheader()
        for report in reports:
            writer.writerow(
                {
                    "batch": report.batch_id,
                    "agreement_rate": _fmt(report.agreement_rate),
                    "majority_vote_rate": _fmt(report.strong_majority_rate),
                }
            )
        writer.writerow(
            {
                "batch": "mean",
                "agreement_rate": _fmt(sum(r.agreement_rate for r in reports) / len(reports)),
                "majority_vote_rate": _fmt(
                    sum(r.strong_majority_rate for r in reports) / len(reports)
                ),
            }
        )


def write_adjudication_queue(reports: Iterable[AgreementReport], path: str | Path):
    """Unresolved majority votes as JSON Lines, batch order preserved."""
    with Path(path).open("w", encoding="utf-8") as handle:
        for report in reports:
            for outcome in report.adjudication_queue:
                record = {
                    "batch": report.batch_id,
                    "sample": outcome.sample_id,
                    "reason": outcome.reason,
                    "votes": dict(sorted(outcome.votes.items())),
                }
                handle.write(json.dumps(record, ensure_ascii=False) + "\n")


def write_overlap_json(report: OverlapReport, path: str | Path):
    payload = {
        "domain_a": report.domain_a,
        "domain_b": report.domain_b,
        "frames_a": list(report.frames_a),
        "frames_b": list(report.frames_b),
        "shared": list(report.shared),
        "overlap_ab": report.overlap_ab,
        "overlap_ba": report.overlap_ba,
        "subsumed": report.subsumed,
    }
    _write_json(payload, path)


def _write_json(payload, path: str | Path):
    with Path(path).open("w", encoding="utf-8") as handle:
        json.dump(payload, handle, ensure_ascii=False, indent=2)
        handle.write("\n")


def file_digest(path: str | Path) -> str:
    digest = hashlib.sha256()
    with Path(path).open("rb") as handle:
        for chunk in iter(lambda: handle.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass
class RunManifest:
    """Provenance for one CLI run: inputs, outputs, settings, digests."""

    command: str
    version: str
    seed: int | None = None
    p_threshold: float | None = None
    settings: dict = field(default_factory=dict)
    inputs: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)

    def add_input(self, path: str | Path):
        self.inputs[str(path)] = file_digest(path)

    def add_output(self, path: str | Path):
        self.outputs[str(path)] = file_digest(path)

    def write(self, path: str | Path):
        payload = {
            "command": self.command,
            "version": self.version,
            "created_at": datetime.now(timezone.utc).isoformat(),
            "seed": self.seed,
            "p_threshold": self.p_threshold,
            "settings": self.settings,
            "inputs": self.inputs,
            "outputs": self.outputs,
        }
        _write_json(payload, path)
