"""
artifacts.py
------------

Files written by a run: the data CSV, the sidecar JSON and the optional
plot script.

CSV files are UTF-8, comma separated, start with '#' provenance lines and
carry units in the header names. Floats are written with repr so a re-run
from the sidecar reproduces the file byte for byte.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Any, Dict, Iterable, Sequence

import numpy as np

from . import __version__
from .config import NvsimConfig
from .errors import NumericalError

TOOL_NAME = "nvsim"


def _cell(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        number = float(value)
        if not math.isfinite(number):
            raise NumericalError(f"non-finite value {number!r} in CSV output")
        return repr(number)
    return str(value)


def write_csv(
    path: Path,
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    provenance: Sequence[str] = (),
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    cells = [[_cell(v) for v in row] for row in rows]
    for i, row in enumerate(cells):
        if len(row) != len(header):
            raise ValueError(f"row {i} has {len(row)} cells, header has {len(header)}")
    with open(path, "w", encoding=NvsimConfig.CSV_ENCODING, newline="") as out:
        for line in provenance:
            out.write(f"# {line}\n")
        wr = csv.writer(out)
        wr.writerow(header)
        wr.writerows(cells)
    return path


def read_csv(path: Path) -> tuple[list[str], np.ndarray]:
    """Header and float matrix of a CSV written by write_csv."""
    with open(path, "r", encoding=NvsimConfig.CSV_ENCODING, newline="") as f:
        lines = [line for line in f if not line.startswith("#")]
    reader = csv.reader(lines)
    header = next(reader)
    data = np.array([[float(v) for v in row] for row in reader if row], dtype=float)
    return header, data


def provenance_lines(scenario: str, model: str | None = None) -> list[str]:
    lines = [f"{TOOL_NAME} {__version__}", f"scenario: {scenario}"]
    if model:
        lines.append(f"model: {model}")
    return lines


def jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (np.floating, float)):
        number = float(value)
        return number if math.isfinite(number) else None
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def write_sidecar(path: Path, payload: Dict[str, Any]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(jsonable(payload), indent=2), encoding="utf-8")
    return path


_LINE_PLOT = '''#!/usr/bin/env python3
"""Plot {csv_name} (generated by {tool} {version})."""

from pathlib import Path

import matplotlib.pyplot as plt
import numpy as np

HERE = Path(__file__).resolve().parent
CSV = HERE / "{csv_name}"

with open(CSV, encoding="utf-8") as f:
    lines = [line for line in f if not line.startswith("#")]
header = lines[0].strip().split(",")
data = np.loadtxt(lines[1:], delimiter=",", ndmin=2)

fig, ax = plt.subplots(figsize=(7, 4))
for col in range(1, data.shape[1]):
    ax.plot(data[:, 0], data[:, col], label=header[col])
ax.set_xlabel(header[0])
ax.set_title("{title}")
ax.legend()
fig.tight_layout()
fig.savefig(CSV.with_suffix(".png"), dpi=150)
plt.show()
'''

_MAP_PLOT = '''#!/usr/bin/env python3
"""Plot {csv_name} (generated by {tool} {version})."""

from pathlib import Path

import matplotlib.pyplot as plt
import numpy as np

HERE = Path(__file__).resolve().parent
CSV = HERE / "{csv_name}"

with open(CSV, encoding="utf-8") as f:
    lines = [line for line in f if not line.startswith("#")]
header = lines[0].strip().split(",")
data = np.loadtxt(lines[1:], delimiter=",", ndmin=2)
amplitudes = data[:, 0]
detunings = np.array([float(h.split("=")[1]) for h in header[1:]])
pl = data[:, 1:]

fig, ax = plt.subplots(figsize=(7, 5))
mesh = ax.pcolormesh(detunings, amplitudes, pl / pl.max(), shading="auto", cmap="viridis")
fig.colorbar(mesh, ax=ax, label="PL (normalised)")
ax.set_xlabel("laser detuning (GHz)")
ax.set_ylabel(header[0])
ax.set_title("{title}")
fig.tight_layout()
fig.savefig(CSV.with_suffix(".png"), dpi=150)
plt.show()
'''


def write_plot_script(path: Path, csv_path: Path, scenario: str) -> Path:
    """Standalone matplotlib script reading csv_path from its own directory."""
    template = _MAP_PLOT if scenario == "map" else _LINE_PLOT
    text = template.format(
        csv_name=Path(csv_path).name,
        tool=TOOL_NAME,
        version=__version__,
        title=f"{TOOL_NAME} {scenario}",
    )
    path = Path(path)
    path.write_text(text, encoding="utf-8")
    return path
