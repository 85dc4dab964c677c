from typing import Iterable

import numpy as np
from sklearn import metrics

from hitmix.errors import MetricError


def adjusted_rand_index(a: Iterable[int], b: Iterable[int]) -> float:
    """Hubert-Arabie adjusted Rand index of two labelings of the same items."""
    a, b = np.asarray(list(a)), np.asarray(list(b))
    if len(a) != len(b):
        raise MetricError(f"label vectors differ in length: {len(a)} vs {len(b)}")
    if len(a) < 2:
        raise MetricError(f"adjusted Rand index needs at least 2 items, got {len(a)}")
    return float(metrics.adjusted_rand_score(a, b))


def precision_recall_f1(predicted: Iterable[int], truth: Iterable[int], universe_size: int) -> tuple[float, float, float]:
    predicted, truth = set(predicted), set(truth)
    outside = [v for v in predicted | truth if not 0 <= v < universe_size]
    if outside:
        raise MetricError(f"items outside a universe of {universe_size}: {sorted(outside)[:10]}")

    overlap = len(predicted & truth)
    precision = overlap / len(predicted) if predicted else 0.0
    recall = overlap / len(truth) if truth else 0.0
    if precision + recall == 0.0:
        return precision, recall, 0.0
    return precision, recall, 2 * precision * recall / (precision + recall)


def percentiles(values: Iterable[float], probs: Iterable[float]) -> list[float]:
    """Linearly interpolated sample quantiles (Hyndman-Fan type 7)."""
    values = np.asarray(list(values), dtype=np.float64)
    probs = np.asarray(list(probs), dtype=np.float64)
    if values.size == 0:
        raise MetricError("cannot take percentiles of an empty sample")
    if np.any((probs < 0.0) | (probs > 1.0)):
        raise MetricError(f"probabilities must lie in [0, 1], got {probs.tolist()}")
    return np.quantile(np.sort(values), probs, method="linear").tolist()
