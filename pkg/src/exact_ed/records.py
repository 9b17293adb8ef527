"""Flat run records and their JSON / CSV encodings."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, fields

from .params import AlgorithmParams

SWEEP_HEADER = (
    "N", "r", "t2", "ct2", "t1", "d", "beta", "alpha1", "alpha2",
    "success_prob", "query_count", "queries_over_N23",
)


@dataclass(frozen=True)
class RunRecord:
    params: AlgorithmParams
    success_prob: float = math.nan
    residual_inner: float = math.nan
    residual_outer: float = math.nan
    residual_phase: float = math.nan
    query_count: int = 0
    wall_time: float = 0.0
    mode: str = "reduced"

    def to_dict(self) -> dict:
        out = asdict(self.params)
        for f in fields(self):
            if f.name != "params":
                out[f.name] = getattr(self, f.name)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "RunRecord":
        names = AlgorithmParams.field_names()
        params = AlgorithmParams(**{k: data[k] for k in names})
        extra = {f.name: data[f.name] for f in fields(cls) if f.name != "params" and f.name in data}
        return cls(params=params, **extra)

    def to_json(self) -> str:
        # Python's float repr is the shortest string that round-trips exactly
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "RunRecord":
        return cls.from_dict(json.loads(text))

    def csv_header(self) -> list[str]:
        return list(self.to_dict())

    def to_csv_row(self) -> list[str]:
        return [_fmt(v) for v in self.to_dict().values()]

    @classmethod
    def from_csv_row(cls, header, row) -> "RunRecord":
        types = {f.name: f.type for f in fields(AlgorithmParams)}
        data = {}
        for key, text in zip(header, row):
            if key == "mode":
                data[key] = text
            elif key in ("query_count",) or types.get(key) in (int, "int"):
                data[key] = int(text)
            else:
                data[key] = float(text)
        return cls.from_dict(data)


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def sweep_row(params: AlgorithmParams, success_prob: float) -> list[str]:
    q = params.query_count
    vals = [
        params.N, params.r, params.t2, params.ct2, params.t1,
        params.d, params.beta, params.alpha1, params.alpha2,
        success_prob, q, q / params.N ** (2.0 / 3.0),
    ]
    return [_fmt(v) for v in vals]


def write_csv(rows, header, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def csv_text(rows, header) -> str:
    buf = io.StringIO()
    write_csv(rows, header, buf)
    return buf.getvalue()
