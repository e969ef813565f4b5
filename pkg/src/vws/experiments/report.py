"""Recipe reports: CSV tables, a structured JSON summary, and a text digest.

Every recipe produces one RecipeReport.  Assertions carry the measured value
and the threshold it was checked against so a failure is machine readable.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path


@dataclass
class Assertion:
    name: str
    passed: bool
    value: float
    threshold: float
    detail: str = ""

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": bool(self.passed),
            "value": float(self.value),
            "threshold": float(self.threshold),
            "detail": self.detail,
        }

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        s = f"{tag}  {self.name}: value={self.value:.6g} threshold={self.threshold:.6g}"
        if self.detail:
            s += f"  ({self.detail})"
        return s


@dataclass
class RecipeReport:
    recipe: str
    assertions: list = field(default_factory=list)
    metrics: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)
    started: float = field(default_factory=time.time)

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)

    def check(self, name: str, passed: bool, value: float, threshold: float,
              detail: str = "") -> None:
        # record, never raise: a recipe reports every failure it finds
        self.assertions.append(
            Assertion(name, bool(passed), float(value), float(threshold), detail))

    def check_le(self, name, value, threshold, detail=""):
        self.check(name, value <= threshold, value, threshold, detail)

    def check_ge(self, name, value, threshold, detail=""):
        self.check(name, value >= threshold, value, threshold, detail)

    def metric(self, name: str, value) -> None:
        self.metrics[name] = value

    def table(self, name: str, header, rows) -> None:
        self.tables[name] = (list(header), [list(r) for r in rows])

    def merge(self, other: "RecipeReport") -> None:
        prefix = other.recipe
        for a in other.assertions:
            self.assertions.append(
                Assertion(f"{prefix}/{a.name}", a.passed, a.value, a.threshold,
                          a.detail))
        for k, v in other.metrics.items():
            self.metrics[f"{prefix}/{k}"] = v
        for k, v in other.tables.items():
            self.tables[f"{prefix}_{k}"] = v

    def summary_dict(self) -> dict:
        return {
            "recipe": self.recipe,
            "passed": self.passed,
            "assertions": [a.as_dict() for a in self.assertions],
            "metrics": {k: _jsonable(v) for k, v in self.metrics.items()},
            "elapsed_seconds": round(time.time() - self.started, 3),
        }

    def lines(self) -> list:
        out = [f"recipe: {self.recipe}"]
        out += [a.line() for a in self.assertions]
        status = "ALL ASSERTIONS PASSED" if self.passed else "FAILURES PRESENT"
        out.append(status)
        return out

    def write(self, outdir) -> Path:
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        for name, (header, rows) in self.tables.items():
            write_csv(outdir / f"{name}.csv", header, rows)
        summary = outdir / "summary.json"
        with open(summary, "w") as fh:
            json.dump(self.summary_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        with open(outdir / "summary.txt", "w") as fh:
            fh.write("\n".join(self.lines()) + "\n")
        return summary


def _jsonable(v):
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "item"):
        return v.item()
    return v


def write_csv(path, header, rows) -> None:
    import csv

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(c) for c in row])


def _fmt(c):
    if isinstance(c, float):
        return f"{c:.12g}"
    if hasattr(c, "item"):
        return f"{float(c):.12g}"
    return c


def load_summary(outdir) -> dict:
    path = Path(outdir) / "summary.json"
    if not path.exists():
        raise FileNotFoundError(f"no summary.json under {outdir}")
    with open(path) as fh:
        return json.load(fh)
