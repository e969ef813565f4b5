"""Compare two recipe runs by their structured summaries."""

from __future__ import annotations

from ..errors import RecipeMismatch
from .report import load_summary


def _numeric_items(metrics: dict):
    for key, value in sorted(metrics.items()):
        if isinstance(value, bool):
            continue
        if isinstance(value, (int, float)):
            yield key, [float(value)]
        elif isinstance(value, list) and value and all(
                isinstance(v, (int, float)) and not isinstance(v, bool)
                for v in value):
            yield key, [float(v) for v in value]


def _rel_diff(a: list, b: list) -> float:
    if len(a) != len(b):
        return float("inf")
    worst = 0.0
    for x, y in zip(a, b):
        scale = max(abs(x), abs(y), 1e-300)
        worst = max(worst, abs(x - y) / scale)
    return worst


def compare_runs(dir_a, dir_b, tol: float = 1e-8) -> dict:
    """Per-metric relative differences between two runs of the same recipe.

    Raises RecipeMismatch if the directories hold different recipes.  Returns
    a dict with the diffs, the metrics beyond tol, and any assertions whose
    pass/fail state flipped.
    """
    sa = load_summary(dir_a)
    sb = load_summary(dir_b)
    if sa["recipe"] != sb["recipe"]:
        raise RecipeMismatch(
            f"cannot compare recipe {sa['recipe']!r} ({dir_a}) with "
            f"{sb['recipe']!r} ({dir_b})")

    ma = dict(_numeric_items(sa.get("metrics", {})))
    mb = dict(_numeric_items(sb.get("metrics", {})))
    diffs = {}
    for key in sorted(set(ma) | set(mb)):
        if key in ma and key in mb:
            diffs[key] = _rel_diff(ma[key], mb[key])
        else:
            diffs[key] = float("inf")

    flips = []
    aa = {x["name"]: x["passed"] for x in sa.get("assertions", [])}
    ab = {x["name"]: x["passed"] for x in sb.get("assertions", [])}
    for name in sorted(set(aa) | set(ab)):
        if aa.get(name) != ab.get(name):
            flips.append(name)

    exceeds = sorted(k for k, d in diffs.items() if d > tol)
    return {
        "recipe": sa["recipe"],
        "tol": tol,
        "metric_diffs": diffs,
        "max_rel_diff": max(diffs.values()) if diffs else 0.0,
        "exceeds": exceeds,
        "assertion_flips": flips,
        "match": not exceeds and not flips,
    }


def format_comparison(result: dict) -> str:
    lines = [f"recipe: {result['recipe']}  (tol={result['tol']:g})"]
    for key, d in sorted(result["metric_diffs"].items()):
        mark = "  " if d <= result["tol"] else "> "
        lines.append(f"{mark}{key}: rel diff {d:.3e}")
    if result["assertion_flips"]:
        lines.append("assertion flips: " + ", ".join(result["assertion_flips"]))
    lines.append("MATCH" if result["match"] else "DIFFERS")
    return "\n".join(lines)
