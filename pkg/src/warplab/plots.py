"""SVG line charts rendered from the records table.

One chart per command: the ratio column against the record index within
that command, with any asserted bounds drawn as horizontal lines.  Every
plotted number therefore also appears in records.csv.  Output is static
SVG with a pinned hash salt and no creation date, so identical records
yield identical bytes.
"""

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

__all__ = ["render_command_plots"]


def render_command_plots(records, plots_dir: str) -> list:
    """Write plots/<command>.svg per command with numeric ratios; return paths."""
    groups = {}
    for rec in records:
        if rec["ratio"] is not None:
            groups.setdefault(rec["command"], []).append(rec)
    written = []
    for command in sorted(groups):
        rows = groups[command]
        idx = list(range(len(rows)))
        ratios = [float(r["ratio"]) for r in rows]
        bounds = sorted({float(r["bound"]) for r in rows if r["bound"] is not None})
        with plt.rc_context({"svg.hashsalt": "warplab"}):
            fig, ax = plt.subplots(figsize=(6.4, 4.0))
            ax.plot(idx, ratios, marker="o", linewidth=1.2, label="ratio")
            for b in bounds:
                ax.axhline(b, color="tab:red", linestyle="--", linewidth=1.0)
            ax.set_title(command)
            ax.set_xlabel("record index")
            ax.set_ylabel("ratio")
            if min(ratios) > 0.0 and max(ratios) / min(ratios) > 50.0:
                ax.set_yscale("log")
            fig.tight_layout()
            os.makedirs(plots_dir, exist_ok=True)
            path = os.path.join(plots_dir, f"{command}.svg")
            fig.savefig(path, format="svg", metadata={"Date": None})
            plt.close(fig)
        written.append(os.path.join("plots", f"{command}.svg"))
    return written
