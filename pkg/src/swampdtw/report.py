"""Series ingestion and the JSON run report."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np

from .core import DataError, MotifResult, SearchConfig, SearchStats, TimeSeries


def _parse_float(token: str, lineno: int) -> float:
    try:
        v = float(token)
    except ValueError:
        raise DataError(f"line {lineno}: non-numeric value {token.strip()!r}") from None
    if not math.isfinite(v):
        raise DataError(f"line {lineno}: non-finite value {token.strip()!r}")
    return v


def ingest(path: Union[str, Path], column: Optional[str] = None) -> TimeSeries:
    """Read one float per line, or one column of a comma-separated file.

    ``column`` is a header name or a 1-based column number. A CSV whose first
    row does not parse as numbers in the selected column is taken to have a
    header. Blank lines are skipped.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise DataError(f"cannot read {path}: {exc}") from None

    rows = [(k + 1, line) for k, line in enumerate(text.splitlines()) if line.strip()]
    if not rows:
        raise DataError(f"{path}: no data")
    is_csv = column is not None or any("," in line for _, line in rows)
    if not is_csv:
        vals = [_parse_float(line, k) for k, line in rows]
        return TimeSeries(np.array(vals), name=str(path))

    parsed = [(k, next(csv.reader(io.StringIO(line)))) for k, line in rows]
    first_no, first = parsed[0]
    col: Optional[int] = None
    if column is not None and not column.strip().isdigit():
        names = [c.strip() for c in first]
        if column not in names:
            raise DataError(f"{path}: no column named {column!r} in header {names}")
        col = names.index(column)
        parsed = parsed[1:]
    else:
        if column is not None:
            col = int(column) - 1
            if col < 0:
                raise DataError(f"column numbers are 1-based, got {column}")
        elif len(first) == 1:
            col = 0
        else:
            raise DataError(f"{path}: {len(first)} columns found; choose one with --column")
        if col >= len(first):
            raise DataError(f"{path}: line {first_no} has no column {col + 1}")
        try:
            float(first[col])
        except ValueError:
            parsed = parsed[1:]
    vals = []
    for k, fields in parsed:
        if col >= len(fields):
            raise DataError(f"{path}: line {k} has no column {col + 1}")
        vals.append(_parse_float(fields[col], k))
    if not vals:
        raise DataError(f"{path}: no data rows")
    return TimeSeries(np.array(vals), name=str(path))


def format_series(ts: TimeSeries) -> str:
    return "".join(f"{v!r}\n" for v in ts.values.tolist())


def _num(v: float) -> Optional[float]:
    return float(v) if math.isfinite(v) else None


def stats_dict(stats: SearchStats, timings: bool = True) -> dict[str, Any]:
    out: dict[str, Any] = {
        "p": stats.pruned_fraction,
        "pruned_per_level": [
            {
                "D": lv.factor,
                "pruned": lv.newly_pruned,
                "pruned_total": lv.pruned_total,
                "min_lb": _num(lv.min_bound),
                "confirmation_distance": (
                    None if lv.confirmation_distance is None else _num(lv.confirmation_distance)
                ),
                "block_pairs": lv.block_pairs,
            }
            for lv in stats.levels
        ],
        "dtw_calls": {
            "phase1": stats.phase1_dtw_calls,
            "phase2": stats.phase2_dtw_calls,
            "total": stats.dtw_calls,
        },
        "lb_calls": {"kim_fl": stats.phase2_kim_fl_calls, "keogh": stats.phase2_keogh_calls},
        "pairs": {
            "total": stats.total_pairs,
            "phase2": stats.phase2_pairs,
            "bound": stats.predicted_pair_bound,
        },
        "pruned_in_phase2": stats.pruned_in_phase2,
    }
    if timings:
        out["timings"] = {k: stats.timings[k] for k in sorted(stats.timings)}
    return out


def config_dict(cfg: SearchConfig) -> dict[str, Any]:
    return {
        "length": cfg.subsequence_length,
        "window": cfg.warp_window,
        "mode": cfg.normalization,
        "epsilon": cfg.epsilon,
    }


@dataclass
class RunReport:
    input: dict[str, Any]
    config: dict[str, Any]
    motif: Optional[dict[str, Any]] = None
    stats: Optional[dict[str, Any]] = None
    bench: Optional[list[dict[str, Any]]] = None
    dumps: Optional[dict[str, str]] = None
    extra: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_result(cls, input_desc: dict, cfg: SearchConfig, result: MotifResult,
                    timings: bool = True) -> "RunReport":
        return cls(
            input=input_desc,
            config=config_dict(cfg),
            motif={"i": result.first_index, "j": result.second_index, "distance": result.distance},
            stats=stats_dict(result.stats, timings),
        )

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"input": self.input, "config": self.config}
        for key in ("motif", "stats", "bench", "dumps"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        out.update(self.extra)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        d = json.loads(text)
        known = {"input", "config", "motif", "stats", "bench", "dumps"}
        return cls(
            input=d["input"],
            config=d["config"],
            motif=d.get("motif"),
            stats=d.get("stats"),
            bench=d.get("bench"),
            dumps=d.get("dumps"),
            extra={k: v for k, v in d.items() if k not in known},
        )
