import pytest

from hitmix.errors import MetricError
from hitmix.metrics.evaluation import adjusted_rand_index, percentiles, precision_recall_f1


def test_ari_identical_labelings():
    assert adjusted_rand_index([0, 0, 1, 1], [0, 0, 1, 1]) == pytest.approx(1.0)
    assert adjusted_rand_index([0, 0, 1, 1], [5, 5, 2, 2]) == pytest.approx(1.0)


def test_ari_worse_than_chance():
    assert adjusted_rand_index([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(-0.5)


def test_ari_is_symmetric():
    a = [0, 0, 0, 1, 1, 2, 2, 2, 2]
    b = [1, 1, 0, 0, 0, 2, 2, 1, 2]
    assert adjusted_rand_index(a, b) == pytest.approx(adjusted_rand_index(b, a))


def test_ari_rejects_bad_input():
    with pytest.raises(MetricError):
        adjusted_rand_index([0, 1], [0, 1, 1])
    with pytest.raises(MetricError):
        adjusted_rand_index([0], [0])


def test_precision_recall_f1():
    precision, recall, f1 = precision_recall_f1({1, 2, 3, 4}, {2, 3, 4, 5, 6}, 10)
    assert precision == pytest.approx(0.75)
    assert recall == pytest.approx(0.6)
    assert f1 == pytest.approx(2 / 3)


def test_precision_recall_f1_empty_prediction():
    assert precision_recall_f1([], [1, 2], 5) == (0.0, 0.0, 0.0)


def test_precision_recall_f1_checks_universe():
    with pytest.raises(MetricError):
        precision_recall_f1([7], [1], 5)


def test_percentiles():
    assert percentiles([5, 1, 3], [0.0, 0.5, 1.0]) == pytest.approx([1.0, 3.0, 5.0])
    assert percentiles([0, 1], [0.5]) == pytest.approx([0.5])
    assert percentiles([0.0, 10.0], [0.05, 0.95]) == pytest.approx([0.5, 9.5])


def test_percentiles_reject_bad_input():
    with pytest.raises(MetricError):
        percentiles([], [0.5])
    with pytest.raises(MetricError):
        percentiles([1.0], [1.5])
