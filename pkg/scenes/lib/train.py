import math
import time
from typing import List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, NonNegativeInt, PositiveFloat, PositiveInt

from algebra.lib.grounding import GroundingAssignment
from algebra.utils.errors import EmptyCorpus, NonFiniteLoss, UsageError
from shared import const
from shared.helpers import make_rng, progress
from shared.lprint import lprint
from .formula import SceneExample, select_leaf
from .grounding import corpus_objective, ground_best
from .models import PredicateModels


class TrainConfig(BaseModel):
    learning_rate: PositiveFloat = 1.0
    epochs: NonNegativeInt = 60
    seed: int | None = None
    grounding_cap: PositiveInt = const.GROUNDING_CAP
    regrounding_period: PositiveInt = 1
    batch_size: PositiveInt = 32


def frozen_loss_and_grad(models: PredicateModels, ex: SceneExample, g: GroundingAssignment) -> Tuple[float, np.ndarray, np.ndarray, float]:
    """Loss 1 − val(φ)(g) under a fixed grounding and its subgradient.

    The value follows a single predicate leaf through the min/max connectives, so the
    gradient touches one model row.

    Returns:
        Tuple[float, np.ndarray, np.ndarray, float]: Loss, weight gradient (P, n),
            bias gradient (P,), and the smallest gap at any min/max node.
    """
    leaf = select_leaf(models, ex, g)
    grad_w = np.zeros_like(models.weights)
    grad_b = np.zeros_like(models.bias)
    score = leaf.value if leaf.sign > 0 else 1.0 - leaf.value
    slope = -leaf.sign * score * (1.0 - score)
    grad_w[leaf.predicate] = slope * ex.vectors[leaf.object]
    grad_b[leaf.predicate] = slope
    return 1.0 - leaf.value, grad_w, grad_b, leaf.margin


def train(init: PredicateModels, corpus: Sequence[SceneExample], config: TrainConfig = TrainConfig()) -> Tuple[PredicateModels, List[float]]:
    """Alternates best-grounding search with gradient steps on the frozen-grounding loss.

    Every `regrounding_period` epochs the best grounding of each example is recomputed
    under the current models. Between refreshes, shuffled mini-batches take plain
    gradient steps on the mean example loss.

    Args:
        init (PredicateModels): Starting models; left unchanged.
        corpus (Sequence[SceneExample]): Training examples.
        config (TrainConfig, optional): Settings.

    Raises:
        EmptyCorpus: No examples.
        UsageError: Object vectors and models disagree on the dimension.
        NonFiniteLoss: Parameters diverged.

    Returns:
        Tuple[PredicateModels, List[float]]: Trained models and the objective before training and after each epoch.
    """
    if not corpus:
        raise EmptyCorpus("Cannot train on an empty scene corpus")
    for i, ex in enumerate(corpus):
        if ex.dimension != init.dimension:
            raise UsageError(f"Example {i} has dimension {ex.dimension}, models expect {init.dimension}")

    start = time.perf_counter()
    rng = make_rng(config.seed)
    models = init.copy()
    trace = [corpus_objective(models, corpus, config.grounding_cap)]
    groundings: List[GroundingAssignment] = []

    for epoch in progress(range(config.epochs), desc="train"):
        if epoch % config.regrounding_period == 0:
            groundings = [ground_best(models, ex, config.grounding_cap)[1] for ex in corpus]

        order = rng.permutation(len(corpus))
        for begin in range(0, len(order), config.batch_size):
            batch = order[begin:begin + config.batch_size]
            grad_w = np.zeros_like(models.weights)
            grad_b = np.zeros_like(models.bias)
            for i in batch:
                _, gw, gb, _ = frozen_loss_and_grad(models, corpus[i], groundings[i])
                grad_w += gw
                grad_b += gb
            models.weights -= config.learning_rate * grad_w / len(batch)
            models.bias -= config.learning_rate * grad_b / len(batch)

        if not (np.all(np.isfinite(models.weights)) and np.all(np.isfinite(models.bias))):
            raise NonFiniteLoss(f"Model parameters diverged in epoch {epoch}")
        objective = corpus_objective(models, corpus, config.grounding_cap)
        if not math.isfinite(objective):
            raise NonFiniteLoss(f"Objective is not finite after epoch {epoch}")
        trace.append(objective)

    lprint("Info", start, f"train: {config.epochs} epochs, objective {trace[0]:.4f} -> {trace[-1]:.4f}")
    return models, trace
