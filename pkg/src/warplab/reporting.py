"""Deterministic artifact emission: manifest, report, CSV table, plots.

Everything except the manifest is a pure function of the run configuration:
floats serialize through repr (shortest round-trip form), JSON keys are
sorted, and rows keep the pipeline's order, so re-running a config
reproduces records.csv and report.json byte for byte.  Timestamps and
library versions are confined to manifest.json.

Every command maps its findings onto one fixed row shape

    command, label, lhs, rhs, ratio, bound, margin

where lhs/rhs are the two quantities compared, ratio = lhs/rhs, bound is the
asserted ceiling on ratio (empty for report-only rows), and margin is
bound - ratio.  Per-command meanings are documented in the README.
"""

import csv
import datetime
import io
import json
import math
import os
import platform
from dataclasses import dataclass, field
from typing import Optional

import matplotlib
import numpy as np
import scipy

from . import __version__
from .config import RunConfig, config_hash

__all__ = [
    "CSV_COLUMNS",
    "MANIFEST_SCHEMA",
    "REPORT_SCHEMA",
    "ReportBundle",
    "record_row",
    "render_records_csv",
]

MANIFEST_SCHEMA = "warplab-manifest/1"
REPORT_SCHEMA = "warplab-report/1"

CSV_COLUMNS = ("command", "label", "lhs", "rhs", "ratio", "bound", "margin")


def record_row(
    command: str,
    label: str,
    lhs: Optional[float] = None,
    rhs: Optional[float] = None,
    ratio: Optional[float] = None,
    bound: Optional[float] = None,
    margin: Optional[float] = None,
) -> dict:
    if margin is None and bound is not None and ratio is not None:
        margin = bound - ratio
    return {
        "command": command,
        "label": label,
        "lhs": lhs,
        "rhs": rhs,
        "ratio": ratio,
        "bound": bound,
        "margin": margin,
    }


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    v = float(value)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return repr(v)


def render_records_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        writer.writerow([_cell(rec[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def _json_ready(obj):
    """Plain-Python tree with sorted-key-safe leaves; non-finite -> strings."""
    if isinstance(obj, dict):
        return {str(k): _json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_ready(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_json_ready(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isfinite(v):
            return v
        return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
    return obj


def dumps_json(obj) -> str:
    return json.dumps(_json_ready(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def library_versions() -> dict:
    return {
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "matplotlib": matplotlib.__version__,
        "warplab": __version__,
    }


@dataclass
class ReportBundle:
    """Everything one run produced, ready to serialize.

    config is the configuration exactly as received (the manifest hash is
    computed from its re-serialized form); reports hold one dict per
    executed section; records hold the flat CSV rows; verdicts maps
    asserted section names to "holds"/"violated", and failures lists
    human-readable descriptions of every violation.
    """

    config: RunConfig
    model: Optional[dict]
    reports: list
    records: list
    verdicts: dict
    failures: list
    plot_paths: list = field(default_factory=list)

    @property
    def exit_status(self) -> int:
        return 0 if not self.failures else 1

    @property
    def overall(self) -> str:
        if self.failures:
            return "violated"
        return "holds" if self.verdicts else "report-only"

    def report_dict(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "command": self.config.command,
            "overall": self.overall,
            "asserted": dict(self.verdicts),
            "failures": list(self.failures),
            "reports": list(self.reports),
        }

    def manifest_dict(self) -> dict:
        return {
            "schema": MANIFEST_SCHEMA,
            "command": self.config.command,
            "config": self.config.to_dict(),
            "config_sha256": config_hash(self.config),
            "versions": library_versions(),
            "created_utc": datetime.datetime.now(datetime.timezone.utc).isoformat(),
            "overall": self.overall,
            "exit_status": self.exit_status,
            "plots": list(self.plot_paths),
        }

    def write(self, outdir: str) -> None:
        """Emit manifest.json, model.json, report.json, records.csv, plots/."""
        os.makedirs(outdir, exist_ok=True)
        if self.config.plot and self.records:
            from . import plots

            self.plot_paths = plots.render_command_plots(
                self.records, os.path.join(outdir, "plots")
            )
        with open(os.path.join(outdir, "report.json"), "w", encoding="utf-8") as fh:
            fh.write(dumps_json(self.report_dict()))
        if self.model is not None:
            with open(os.path.join(outdir, "model.json"), "w", encoding="utf-8") as fh:
                fh.write(dumps_json(self.model))
        with open(os.path.join(outdir, "records.csv"), "w", encoding="utf-8") as fh:
            fh.write(render_records_csv(self.records))
        with open(os.path.join(outdir, "manifest.json"), "w", encoding="utf-8") as fh:
            fh.write(dumps_json(self.manifest_dict()))
