"""Monte Carlo harnesses: image counts, solidity, many-attractor rates.

Each runner returns a list of row dicts; :func:`write_csv` renders them.
Sample ``k`` always draws from ``rs.substream(k)``, so results do not depend
on evaluation order.
"""

from __future__ import annotations

import csv
import io
import math
from typing import Iterable

import numpy as np

from .core import RandomSource, random_network
from .dynamics import image_count
from .solidity import MAX_EXPERIMENT_N, solidity_samples

# asymptotic mean of |Im f^2| / 2^n for uniform f
IMAGE2_LIMIT = 1 - math.exp(-1 + math.exp(-1))
MANY_ATT_RATE = 0.046
MAX_NETWORK_N = 16


def _check(n: int, hi: int) -> None:
    if not 1 <= n <= hi:
        raise ValueError(f"n={n} outside 1..{hi}")


def image_ratios(n: int, samples: int, rs: RandomSource, k: int = 2) -> np.ndarray:
    _check(n, MAX_NETWORK_N)
    return np.array(
        [image_count(random_network(n, rs.substream(s)), k) / (1 << n) for s in range(samples)], dtype=float
    )


def image_count_experiment(n: int, samples: int, rs: RandomSource) -> list[dict]:
    r = image_ratios(n, samples, rs)
    return [
        {
            "n": n,
            "samples": samples,
            "mean_ratio": round(float(r.mean()), 6) if samples else 0.0,
            "std_ratio": round(float(r.std()), 6) if samples else 0.0,
            "reference": round(IMAGE2_LIMIT, 6),
            "seed": rs.seed,
        }
    ]


def solidity_rows(n: int, ps: Iterable[float], samples: int, rs: RandomSource) -> list[dict]:
    _check(n, MAX_EXPERIMENT_N)
    ps = list(ps)
    outcome = solidity_samples(n, ps, samples, rs)
    return [
        {
            "n": n,
            "p": p,
            "samples": samples,
            "certified_fraction": round(float(outcome[:, j].mean()), 6) if samples else 0.0,
            "seed": rs.seed,
        }
        for j, p in enumerate(ps)
    ]


def many_attractor_counts(n: int, samples: int, rs: RandomSource) -> list[tuple[int, int]]:
    """``(d, small attractor count)`` per sample."""
    from .construct.many import many_attractors

    _check(n, MAX_NETWORK_N)
    out = []
    for s in range(samples):
        res = many_attractors(random_network(n, rs.substream(s)))
        out.append((res.d, res.count))
    return out


def many_attractor_experiment(n: int, samples: int, rs: RandomSource) -> list[dict]:
    counts = many_attractor_counts(n, samples, rs)
    threshold = MANY_ATT_RATE * (1 << n)
    hits = sum(c >= threshold for _, c in counts)
    return [
        {
            "n": n,
            "samples": samples,
            "threshold": round(threshold, 3),
            "fraction": round(hits / samples, 6) if samples else 0.0,
            "min_count": min((c for _, c in counts), default=0),
            "guarantee_met": all(c >= d // 10 for d, c in counts),
            "seed": rs.seed,
        }
    ]


def write_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()
