from netlue.estimators.baseline import (
    ht_weights,
    naive_weights,
    stratified_naive_weights,
)
from netlue.estimators.weights import WeightScheme

__all__ = [
    "WeightScheme",
    "ht_weights",
    "naive_weights",
    "stratified_naive_weights",
]
