"""Scaling measurements for the reduction engine."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from random import Random
from statistics import median

from .generate import random_fixed_multiplicity_tree, random_mul_tree
from .reduce import reduce_to_mrf
from .tree import MulTree


@dataclass(frozen=True)
class BenchPoint:
    n_leaves: int
    n_nodes: int
    seconds: float


def time_reduction(tree: MulTree, repeats: int = 3) -> float:
    """Median wall time of reducing `tree`, in seconds."""
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        reduce_to_mrf(tree)
        times.append(time.perf_counter() - start)
    return median(times)


def run_ladder(
    sizes: list[int],
    seed: int,
    multiplicity: int | None = None,
    repeats: int = 3,
) -> list[BenchPoint]:
    """Time the reduction across a leaf-count ladder.

    `multiplicity` fixes every label's copy number; None mixes multiplicities
    one through three.
    """
    points = []
    for n in sizes:
        rng = Random(seed * 1_000_003 + n)
        if multiplicity is None:
            tree = random_mul_tree(rng, n, max_multiplicity=3)
        else:
            tree = random_fixed_multiplicity_tree(rng, n, multiplicity)
        points.append(BenchPoint(n, tree.n_nodes, time_reduction(tree, repeats)))
    return points


def loglog_slope(points: list[BenchPoint]) -> float:
    """Least-squares slope of log(seconds) against log(leaves)."""
    if len(points) < 2:
        raise ValueError("need at least two points")
    xs = [math.log(p.n_leaves) for p in points]
    ys = [math.log(max(p.seconds, 1e-9)) for p in points]
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    num = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    den = sum((x - mx) ** 2 for x in xs)
    return num / den
