"""Temperature sweeps of the thermal observables and their file formats.

Rows are computed by a process pool (``SUSYTFD_WORKERS`` sets its size)
and assembled in ascending ``T/w1`` order. Floats are written with 17
significant digits, so reading a CSV back gives the same doubles.
"""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .model import ModelParams
from .thermal import thermal_point

WORKERS_ENV = "SUSYTFD_WORKERS"

COLUMNS = (
    "beta",
    "T_over_omega1",
    "E0_over_omega1",
    "E0_closed_form",
    "gibbs_oracle",
    "witten_numeric",
    "witten_closed_form",
    "goldstino_norm_numeric",
    "goldstino_norm_closed_form",
    "goldstino_norm_dagger_numeric",
    "N_b_used",
    "tail_mass",
    "path_deviation",
    "flagged",
)
INT_COLUMNS = ("N_b_used", "flagged")

PROVENANCE_PREFIX = "# provenance: "
TIMESTAMP_PREFIX = "# timestamp: "


@dataclass(frozen=True)
class SweepConfig:
    omega1: float = 1.0
    alpha2: float = 0.5
    T_min: float = 0.1
    T_max: float = 2.0
    points: int = 20
    N_b: int | str = "auto"
    output_path: str | None = None
    format: str = "csv"
    emit_plot: bool = False
    tail_tolerance: float = 1e-8

    def __post_init__(self):
        if not 0 < self.T_min < self.T_max:
            raise ValueError(f"need 0 < T_min < T_max, got {self.T_min}, {self.T_max}")
        if int(self.points) != self.points or self.points < 2:
            raise ValueError(f"points must be an integer >= 2, got {self.points}")
        if self.N_b != "auto" and (isinstance(self.N_b, str) or int(self.N_b) < 2):
            raise ValueError(f"N_b must be an integer >= 2 or 'auto', got {self.N_b!r}")
        if self.format not in ("csv", "json"):
            raise ValueError(f"unknown format {self.format!r}")
        ModelParams(self.omega1, self.alpha2)

    @property
    def model(self) -> ModelParams:
        return ModelParams(self.omega1, self.alpha2)

    def temperatures(self) -> np.ndarray:
        """Uniform grid of ``T/w1``."""
        return np.linspace(self.T_min, self.T_max, self.points)

    def echo(self) -> dict:
        return asdict(self)


@dataclass
class SweepResult:
    rows: list[dict]
    provenance: dict = field(default_factory=dict)

    @property
    def flagged(self) -> bool:
        return any(r["flagged"] for r in self.rows)

    def column(self, name: str) -> np.ndarray:
        return np.array([r[name] for r in self.rows])

    def to_csv(self, columns=COLUMNS) -> str:
        buf = io.StringIO()
        buf.write(PROVENANCE_PREFIX + json.dumps(self.provenance.get("config", {}) | {
            "engine_version": self.provenance.get("engine_version", __version__)}, sort_keys=True) + "\n")
        buf.write(TIMESTAMP_PREFIX + self.provenance.get("timestamp", "") + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in self.rows:
            w.writerow([_fmt(r[c]) for c in columns])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"provenance": self.provenance, "rows": self.rows}, indent=2)

    @classmethod
    def from_csv(cls, text: str) -> SweepResult:
        lines = text.splitlines()
        provenance: dict = {}
        body = []
        for line in lines:
            if line.startswith(PROVENANCE_PREFIX):
                config = json.loads(line[len(PROVENANCE_PREFIX):])
                provenance["engine_version"] = config.pop("engine_version", None)
                provenance["config"] = config
            elif line.startswith(TIMESTAMP_PREFIX):
                provenance["timestamp"] = line[len(TIMESTAMP_PREFIX):]
            elif not line.startswith("#"):
                body.append(line)
        reader = csv.DictReader(body)
        rows = [{c: (int(r[c]) if c in INT_COLUMNS else float(r[c])) for c in COLUMNS} for r in reader]
        return cls(rows, provenance)


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def worker_count(points: int) -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        n = int(env)
        if n < 1:
            raise ValueError(f"{WORKERS_ENV} must be >= 1")
    else:
        n = os.cpu_count() or 1
    return max(1, min(n, points))


def _row(args) -> dict:
    omega1, alpha2, T, n_b, tol = args
    beta = 1.0 / (T * omega1)
    return thermal_point(ModelParams(omega1, alpha2), beta, n_b=n_b, tail_tolerance=tol).record()


def run_sweep(config: SweepConfig, workers: int | None = None) -> SweepResult:
    """Evaluate every grid temperature; rows come back sorted by ``T/w1``."""
    jobs = [(config.omega1, config.alpha2, float(T), config.N_b, config.tail_tolerance)
            for T in config.temperatures()]
    workers = worker_count(len(jobs)) if workers is None else workers
    if workers == 1:
        rows = [_row(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_row, jobs))
    rows.sort(key=lambda r: r["T_over_omega1"])
    provenance = {
        "config": config.echo(),
        "engine_version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    return SweepResult(rows, provenance)


def _write(path: Path, text: str) -> None:
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def gnuplot_data(result: SweepResult) -> str:
    lines = ["# T_over_omega1 E0_over_omega1 E0_closed_form"]
    for r in result.rows:
        lines.append(" ".join(_fmt(r[c]) for c in ("T_over_omega1", "E0_over_omega1", "E0_closed_form")))
    return "\n".join(lines) + "\n"


def svg_plot(result: SweepResult, width: int = 640, height: int = 420) -> str:
    """Polyline chart of ``E0/w1`` against ``T/w1`` (closed form dashed, numeric dots)."""
    T = result.column("T_over_omega1")
    E = result.column("E0_over_omega1")
    Ec = result.column("E0_closed_form")
    left, right, top, bottom = 70, 20, 20, 50
    x0, x1 = 0.0, float(T.max())
    y0, y1 = 0.0, float(max(E.max(), Ec.max())) * 1.05 or 1.0

    def sx(x):
        return left + (x - x0) / (x1 - x0) * (width - left - right)

    def sy(y):
        return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{sx(x0):.2f}" y1="{sy(y0):.2f}" x2="{sx(x1):.2f}" y2="{sy(y0):.2f}" stroke="black"/>',
        f'<line x1="{sx(x0):.2f}" y1="{sy(y0):.2f}" x2="{sx(x0):.2f}" y2="{sy(y1):.2f}" stroke="black"/>',
    ]
    for v in np.linspace(x0, x1, 5):
        out.append(f'<line x1="{sx(v):.2f}" y1="{sy(y0):.2f}" x2="{sx(v):.2f}" y2="{sy(y0) + 5:.2f}" stroke="black"/>')
        out.append(f'<text x="{sx(v):.2f}" y="{sy(y0) + 20:.2f}" font-size="12" text-anchor="middle">{v:.2f}</text>')
    for v in np.linspace(y0, y1, 5):
        out.append(f'<line x1="{sx(x0) - 5:.2f}" y1="{sy(v):.2f}" x2="{sx(x0):.2f}" y2="{sy(v):.2f}" stroke="black"/>')
        out.append(f'<text x="{sx(x0) - 8:.2f}" y="{sy(v) + 4:.2f}" font-size="12" text-anchor="end">{v:.2f}</text>')
    out.append(f'<text x="{(left + width - right) / 2:.2f}" y="{height - 10}" font-size="14" '
               f'text-anchor="middle">T / omega1</text>')
    out.append(f'<text x="18" y="{(top + height - bottom) / 2:.2f}" font-size="14" text-anchor="middle" '
               f'transform="rotate(-90 18 {(top + height - bottom) / 2:.2f})">E0 / omega1</text>')
    pts = " ".join(f"{sx(t):.2f},{sy(e):.2f}" for t, e in zip(T, Ec))
    out.append(f'<polyline points="{pts}" fill="none" stroke="gray" stroke-dasharray="5,4"/>')
    pts = " ".join(f"{sx(t):.2f},{sy(e):.2f}" for t, e in zip(T, E))
    out.append(f'<polyline points="{pts}" fill="none" stroke="steelblue" stroke-width="2"/>')
    for t, e, r in zip(T, E, result.rows):
        colour = "crimson" if r["flagged"] else "steelblue"
        out.append(f'<circle cx="{sx(t):.2f}" cy="{sy(e):.2f}" r="3" fill="{colour}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_outputs(result: SweepResult, config: SweepConfig) -> list[Path]:
    """Write the table (and plot files with ``emit_plot``) next to ``output_path``."""
    if config.output_path is None:
        raise ValueError("output_path is not set")
    path = Path(config.output_path)
    _write(path, result.to_csv() if config.format == "csv" else result.to_json())
    written = [path]
    if config.emit_plot:
        for suffix, text in ((".svg", svg_plot(result)), (".dat", gnuplot_data(result))):
            p = path.with_suffix(suffix)
            _write(p, text)
            written.append(p)
    return written
