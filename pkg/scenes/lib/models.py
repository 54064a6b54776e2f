from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from shared.helpers import make_rng


def sigmoid(z):
    """Overflow-free logistic function."""
    z = np.asarray(z, dtype=float)
    e = np.exp(-np.abs(z))
    return np.where(z >= 0, 1.0 / (1.0 + e), e / (1.0 + e))


@dataclass(frozen=True)
class PredicateModel:
    """score(o) = σ(w·o + b)."""
    weights: np.ndarray
    bias: float

    __hash__ = None

    def score(self, obj: np.ndarray) -> float:
        return float(sigmoid(np.dot(self.weights, obj) + self.bias))

    def parameters(self) -> np.ndarray:
        return np.append(self.weights, self.bias)


@dataclass
class PredicateModels:
    """The trainable family (θ_p) as one weight matrix, a row per predicate.

    Attributes:
        names (List[str]): Predicate symbols, in row order.
        weights (np.ndarray): (P, n) weight matrix.
        bias (np.ndarray): (P,) biases.
    """
    names: List[str]
    weights: np.ndarray
    bias: np.ndarray = field(default=None)

    def __post_init__(self):
        self.weights = np.array(self.weights, dtype=float, ndmin=2)
        self.bias = np.zeros(len(self.names)) if self.bias is None else np.array(self.bias, dtype=float)
        if self.weights.shape[0] != len(self.names) or self.bias.shape != (len(self.names),):
            raise ValueError(f"Expected {len(self.names)} weight rows and biases, got {self.weights.shape} and {self.bias.shape}")
        if not (np.all(np.isfinite(self.weights)) and np.all(np.isfinite(self.bias))):
            raise ValueError("Model parameters must be finite.")

    @property
    def dimension(self) -> int:
        return self.weights.shape[1]

    def index(self, name: str) -> int:
        return self.names.index(name)

    def __getitem__(self, name: str) -> PredicateModel:
        i = self.index(name)
        return PredicateModel(self.weights[i].copy(), float(self.bias[i]))

    def scores(self, objects: np.ndarray) -> np.ndarray:
        """(m, P) matrix of every predicate's score on every object."""
        return sigmoid(np.asarray(objects, dtype=float) @ self.weights.T + self.bias)

    def copy(self) -> "PredicateModels":
        return PredicateModels(list(self.names), self.weights.copy(), self.bias.copy())

    def permuted(self, order: Sequence[int]) -> "PredicateModels":
        """Rows reordered by `order`, names kept in place."""
        order = list(order)
        return PredicateModels(list(self.names), self.weights[order], self.bias[order])


def predicate_names(count: int) -> List[str]:
    return [f"p{i + 1}" for i in range(count)]


def init_models(num_predicates: int, dimension: int, seed: int | None = None, scale: float = 0.1) -> PredicateModels:
    """Small Gaussian weights and zero biases, so every score starts near ½."""
    rng = make_rng(seed)
    return PredicateModels(predicate_names(num_predicates), rng.normal(0.0, scale, size=(num_predicates, dimension)))
