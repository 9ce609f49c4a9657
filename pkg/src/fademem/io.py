"""Serialization of histories, trajectories, spectra, and verdicts.

All floating-point output is written with 17 significant digits so that
round-tripping is exact and identical inputs produce bit-identical files.
Plots are optional, dependency-free SVG, and carry no verdict content.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .circspec import SpectrumIndicator
from .monodromy import SpectrumReport
from .phase_space import History
from .solver import Trajectory


def fmt(x) -> str:
    """17-significant-digit decimal form (shortest exact round-trip width)."""
    return f"{float(x):.17g}"


def _sanitize(obj):
    """Make nested report structures JSON-ready (floats stay floats; json's
    repr-based float encoding is already round-trip exact)."""
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_sanitize(v) for v in obj.tolist()]
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj


def write_json(path, payload: dict) -> None:
    text = json.dumps(_sanitize(payload), indent=2, sort_keys=True)
    Path(path).write_text(text + "\n")


def read_json(path) -> dict:
    return json.loads(Path(path).read_text())


def write_history_csv(path, history: History) -> None:
    lines = ["theta,mode_index,value"]
    for j, th in enumerate(history.theta_grid):
        for k in range(history.n_modes):
            lines.append(f"{fmt(th)},{k + 1},{fmt(history.values[j, k])}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_history_csv(path, gamma: float) -> History:
    rows = Path(path).read_text().strip().splitlines()[1:]
    thetas, modes, vals = [], [], []
    for row in rows:
        th, k, v = row.split(",")
        thetas.append(float(th))
        modes.append(int(k))
        vals.append(float(v))
    theta_grid = np.unique(thetas)
    n_modes = max(modes)
    values = np.zeros((theta_grid.size, n_modes))
    pos = {th: j for j, th in enumerate(theta_grid)}
    for th, k, v in zip(thetas, modes, vals):
        values[pos[th], k - 1] = v
    return History(theta_grid, values, gamma)


def write_trajectory_csv(path, traj: Trajectory, stride: int = 1) -> None:
    """Long-format trajectory dump (t, mode_index, u_value), optionally
    strided in time (only stride-aligned rows are written, so the stored
    grid stays uniform)."""
    idx = np.arange(0, traj.n_steps + 1, max(1, int(stride)))
    times = traj.times()
    lines = ["t,mode_index,u_value"]
    for i in idx:
        for k in range(traj.n_modes):
            lines.append(f"{fmt(times[i])},{k + 1},{fmt(traj.values[i, k])}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_trajectory_csv(path) -> Trajectory:
    rows = Path(path).read_text().strip().splitlines()[1:]
    recs = [row.split(",") for row in rows]
    times = np.asarray([float(r[0]) for r in recs])
    modes = np.asarray([int(r[1]) for r in recs])
    vals = np.asarray([float(r[2]) for r in recs])
    t_grid = np.unique(times)
    n_modes = modes.max()
    values = np.zeros((t_grid.size, n_modes))
    tpos = {t: i for i, t in enumerate(t_grid)}
    for t, k, v in zip(times, modes, vals):
        values[tpos[t], k - 1] = v
    steps = np.diff(t_grid)
    if t_grid.size < 2 or not np.allclose(steps, steps[0], rtol=1e-9):
        raise ValueError("trajectory CSV must carry a uniform time grid")
    return Trajectory(float(t_grid[0]), float(steps[0]), values)


def write_curve_csv(path, times, values, header: str = "t,r") -> None:
    lines = [header]
    for t, v in zip(times, values):
        lines.append(f"{fmt(t)},{fmt(v)}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_curve_csv(path) -> tuple[np.ndarray, np.ndarray]:
    rows = Path(path).read_text().strip().splitlines()[1:]
    pairs = [tuple(map(float, row.split(","))) for row in rows]
    arr = np.asarray(pairs)
    return arr[:, 0], arr[:, 1]


def spectrum_report_payload(report: SpectrumReport) -> dict:
    return {
        "band": report.band,
        "circle_distance": report.circle_distance,
        "sigma_gamma_empty": report.sigma_gamma_empty,
        "max_modulus": report.max_modulus,
        "eigenvalues": [[[ev.real, ev.imag] for ev in block]
                        for block in report.eigenvalues],
        "matches": [
            {
                "mode": m.mode,
                "root": m.root,
                "multiplier": m.multiplier,
                "eigenvalue": [m.eigenvalue.real, m.eigenvalue.imag],
                "rel_error": m.rel_error,
            }
            for m in report.matches
        ],
        "metadata": report.metadata,
    }


def write_spectrum_json(path, report: SpectrumReport) -> None:
    write_json(path, spectrum_report_payload(report))


def write_indicator_csv(path, ind: SpectrumIndicator) -> None:
    lines = ["zeta_re,zeta_im,radius,value,flagged"]
    for i, z in enumerate(ind.zeta_grid):
        for j, r in enumerate(ind.radii):
            lines.append(
                f"{fmt(z.real)},{fmt(z.imag)},{fmt(r)},{fmt(ind.values[i, j])},"
                f"{int(ind.flagged[i])}")
    Path(path).write_text("\n".join(lines) + "\n")


# --- minimal SVG plotting (for humans; never read back) ---------------------

_SVG_W, _SVG_H, _PAD = 640, 400, 45


def _scale(v, lo, hi, out_lo, out_hi):
    if hi == lo:
        return (out_lo + out_hi) / 2
    return out_lo + (v - lo) * (out_hi - out_lo) / (hi - lo)


def plot_curve_svg(path, xs, ys, title: str = "", logy: bool = False) -> None:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if logy:
        ys = np.log10(np.maximum(ys, 1e-300))
    xlo, xhi = float(xs.min()), float(xs.max())
    ylo, yhi = float(ys.min()), float(ys.max())
    pts = " ".join(
        f"{_scale(x, xlo, xhi, _PAD, _SVG_W - _PAD):.2f},"
        f"{_scale(y, ylo, yhi, _SVG_H - _PAD, _PAD):.2f}"
        for x, y in zip(xs, ys))
    body = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SVG_W}" height="{_SVG_H}">',
        f'<rect width="{_SVG_W}" height="{_SVG_H}" fill="white"/>',
        f'<text x="{_SVG_W // 2}" y="20" text-anchor="middle" '
        f'font-family="monospace">{title}</text>',
        f'<polyline points="{pts}" fill="none" stroke="steelblue" stroke-width="1"/>',
        f'<text x="{_PAD}" y="{_SVG_H - 8}" font-family="monospace" font-size="11">'
        f'x: [{xlo:.4g}, {xhi:.4g}]  y{"(log10)" if logy else ""}: '
        f'[{ylo:.4g}, {yhi:.4g}]</text>',
        "</svg>",
    ]
    Path(path).write_text("\n".join(body) + "\n")


def plot_spectrum_svg(path, report: SpectrumReport) -> None:
    cx, cy = _SVG_W / 2, _SVG_H / 2
    rad = min(_SVG_W, _SVG_H) / 2 - _PAD
    body = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SVG_W}" height="{_SVG_H}">',
        f'<rect width="{_SVG_W}" height="{_SVG_H}" fill="white"/>',
        f'<circle cx="{cx}" cy="{cy}" r="{rad}" fill="none" stroke="black"/>',
        f'<text x="{_SVG_W // 2}" y="20" text-anchor="middle" font-family="monospace">'
        f'period-map eigenvalues (unit circle drawn), max modulus '
        f'{report.max_modulus:.4f}</text>',
    ]
    for block in report.eigenvalues:
        for ev in block:
            body.append(f'<circle cx="{cx + rad * ev.real:.2f}" '
                        f'cy="{cy - rad * ev.imag:.2f}" r="2" fill="crimson" '
                        f'fill-opacity="0.5"/>')
    body.append("</svg>")
    Path(path).write_text("\n".join(body) + "\n")
