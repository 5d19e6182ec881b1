"""Delimited output and figure rendering for trajectories and region grids.

CSV output is deterministic: time and fraction columns use fixed 12-decimal
formatting, parameter columns use shortest-exact float form, and events are
appended as `#event,` comment lines.  Figures are rendered headlessly with
matplotlib and are byte-stable for identical inputs (no embedded dates,
fixed hash salt for SVG element ids).
"""

from __future__ import annotations

import json
from pathlib import Path

import matplotlib
import numpy as np
from matplotlib.colors import ListedColormap
from matplotlib.figure import Figure
from matplotlib.patches import Patch

from .analysis import RegionGrid
from .integrate import Trajectory
from .model import RegionLabel

TRAJECTORY_HEADER = "t,r,alpha,beta,c1,c2,v,p,region"
GRID_HEADER = "alpha,beta,region"

_REGION_COLORS = {
    RegionLabel.KNIFE_EDGE: "#bdbdbd",
    RegionLabel.FAILED_STATE: "#a6611a",
    RegionLabel.STABLE_POLICE_STATE: "#2c7bb6",
    RegionLabel.METASTABLE_POLICE_STATE: "#fdae61",
    RegionLabel.UNSTABLE_POLICE_STATE: "#d7191c",
}


def trajectory_csv_text(trajectory: Trajectory) -> str:
    lines = [TRAJECTORY_HEADER]
    for s in trajectory.samples:
        lines.append(f"{s.t:.12f},{s.r:.12f},{s.alpha!r},{s.beta!r},"
                     f"{s.c1!r},{s.c2!r},{s.v},{s.p},{s.region}")
    for e in trajectory.events:
        lines.append(f"#event,{e.t:.12f},{e.kind},{e.detail}")
    return "\n".join(lines) + "\n"


def grid_csv_text(grid: RegionGrid) -> str:
    lines = [GRID_HEADER]
    for i, alpha in enumerate(grid.alpha_axis):
        for j, beta in enumerate(grid.beta_axis):
            lines.append(f"{alpha!r},{beta!r},{grid.cells[i][j].value}")
    return "\n".join(lines) + "\n"


def trajectory_json_text(trajectory: Trajectory) -> str:
    obj = {
        "samples": [{"t": s.t, "r": s.r, "alpha": s.alpha, "beta": s.beta,
                     "c1": s.c1, "c2": s.c2, "v": s.v, "p": s.p,
                     "region": s.region} for s in trajectory.samples],
        "events": [{"t": e.t, "kind": e.kind, "detail": e.detail}
                   for e in trajectory.events],
    }
    return json.dumps(obj, indent=2) + "\n"


def _write_text(text: str, destination) -> int:
    data = text.encode("utf-8")
    if hasattr(destination, "write"):
        destination.write(text)
        return len(data)
    Path(destination).write_bytes(data)
    return len(data)


def write_trajectory_csv(trajectory: Trajectory, destination) -> int:
    """Write the trajectory CSV; returns the number of bytes written."""
    return _write_text(trajectory_csv_text(trajectory), destination)


def write_grid_csv(grid: RegionGrid, destination) -> int:
    return _write_text(grid_csv_text(grid), destination)


def _save(fig: Figure, path) -> None:
    path = Path(path)
    with matplotlib.rc_context({"svg.hashsalt": "revdyn"}):
        if path.suffix.lower() == ".svg":
            fig.savefig(path, metadata={"Date": None})
        else:
            fig.savefig(path)


def render_trajectory_figure(trajectory: Trajectory, path,
                             title: str | None = None) -> Path:
    """Render r(t) with thresholds and event markers to an image file.

    The format follows the file suffix (.svg, .png, .pdf).
    """
    ts = [s.t for s in trajectory.samples]
    rs = [s.r for s in trajectory.samples]
    fig = Figure(figsize=(8.0, 4.5))
    ax = fig.add_subplot()
    ax.plot(ts, rs, color="#222222", lw=1.8, label="protest fraction r")
    ax.plot(ts, [1.0 - s.alpha for s in trajectory.samples],
            color="#2c7bb6", lw=1.0, ls="--", label="visibility threshold 1-alpha")
    ax.plot(ts, [s.beta for s in trajectory.samples],
            color="#d7191c", lw=1.0, ls=":", label="policing capacity beta")
    seen = set()
    for e in trajectory.events:
        if e.kind == "shock":
            label = None if "shock" in seen else "shock"
            seen.add("shock")
            ax.axvline(e.t, color="#888888", lw=0.9, ls="--", label=label)
        elif e.kind == "threshold_crossing":
            label = None if "crossing" in seen else "threshold crossing"
            seen.add("crossing")
            ax.plot([e.t], [trajectory.r_at(e.t)], "o", ms=5,
                    color="#fdae61", mec="#222222", label=label)
    ax.set_xlabel("t (months)")
    ax.set_ylabel("fraction of population")
    ax.set_ylim(-0.02, 1.02)
    if title:
        ax.set_title(title)
    ax.legend(loc="center right", fontsize=8)
    ax.grid(alpha=0.25)
    fig.tight_layout()
    _save(fig, path)
    return Path(path)


def render_grid_figure(grid: RegionGrid, path,
                       title: str | None = None) -> Path:
    """Render the region map over the (alpha, beta) plane to an image file."""
    order = list(_REGION_COLORS)
    index = {label: k for k, label in enumerate(order)}
    codes = np.array([[index[grid.cells[i][j]]
                       for j in range(len(grid.beta_axis))]
                      for i in range(len(grid.alpha_axis))])
    fig = Figure(figsize=(6.0, 5.2))
    ax = fig.add_subplot()
    # cells[i][j] maps to x=alpha_axis[i], y=beta_axis[j]
    ax.pcolormesh(np.asarray(grid.alpha_axis), np.asarray(grid.beta_axis),
                  codes.T, cmap=ListedColormap([_REGION_COLORS[l] for l in order]),
                  vmin=-0.5, vmax=len(order) - 0.5, shading="nearest")
    present = {label for row in grid.cells for label in row}
    ax.legend(handles=[Patch(color=_REGION_COLORS[l], label=l.value)
                       for l in order if l in present],
              loc="lower left", fontsize=8)
    ax.set_xlabel("alpha (visibility)")
    ax.set_ylabel("beta (policing capacity)")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    _save(fig, path)
    return Path(path)
