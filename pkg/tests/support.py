"""Small helpers shared across test modules."""

import numpy as np


def find_assertion(report, name):
    for a in report.assertions:
        if a.name == name:
            return a
    raise KeyError(f"no assertion {name!r} in recipe {report.recipe!r}")


def observed_orders(values):
    v = np.asarray(values, dtype=float)
    return [float(np.log2(v[k] / v[k + 1])) for k in range(len(v) - 1)]
