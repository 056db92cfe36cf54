"""Self-describing CSV/JSON datasets.

CSV layout: the first line is ``# metadata: <json>``, the second the column
names, then one row per record.  Floats are written with 17 significant
digits; missing values (e.g. a KUR ratio where the current vanishes) are
empty cells in CSV and ``null`` in JSON.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__

UNITS = {
    "t_gamma": "1/Gamma",
    "t_l": "eps_s",
    "mu_l": "eps_s",
    "t_l_crit": "eps_s",
}


def unit_of(column: str) -> str:
    if column in UNITS:
        return UNITS[column]
    for suffix, unit in (("_over_gamma_l", "gamma_L"), ("_over_gamma_r", "gamma_R")):
        if column.endswith(suffix):
            return unit
    return "1"


@dataclass
class Dataset:
    name: str
    columns: list
    rows: list
    metadata: dict = field(default_factory=dict)


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return "" if math.isnan(x) else f"{float(x) + 0.0:.17g}"
    return str(x)


def _json_value(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return None if math.isnan(x) else float(f"{float(x):.17g}")
    if isinstance(x, dict):
        return {str(k): _json_value(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_value(v) for v in x]
    return x


def full_metadata(ds: Dataset, command: str, config_echo: dict) -> dict:
    meta = {
        "artifact": "entanglement_engine",
        "version": __version__,
        "command": command,
        "dataset": ds.name,
        "config": config_echo,
        "units": {c: unit_of(c) for c in ds.columns},
    }
    meta.update(ds.metadata)
    return _json_value(meta)


def write_dataset(ds: Dataset, out_dir: Path, fmt: str, command: str, config_echo: dict) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    meta = full_metadata(ds, command, config_echo)
    if fmt == "json":
        path = out_dir / f"{ds.name}.json"
        payload = {"metadata": meta, "columns": list(ds.columns),
                   "rows": [[_json_value(x) for x in row] for row in ds.rows]}
        path.write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n", encoding="utf-8")
        return path
    path = out_dir / f"{ds.name}.csv"
    lines = ["# metadata: " + json.dumps(meta, sort_keys=True, separators=(",", ":")),
             ",".join(ds.columns)]
    lines.extend(",".join(_cell(x) for x in row) for row in ds.rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def read_csv(path) -> tuple[dict, list, np.ndarray]:
    """Parse a dataset written by :func:`write_dataset` (numeric columns only)."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    meta = json.loads(lines[0].removeprefix("# metadata: "))
    columns = lines[1].split(",")
    rows = [[float(x) if x else np.nan for x in line.split(",")] for line in lines[2:]]
    return meta, columns, np.array(rows, dtype=float).reshape(len(rows), len(columns))
