import itertools
from typing import Dict, Sequence, Tuple

import numpy as np

from algebra.utils.errors import MissingTruth
from shared import const
from .formula import SceneExample
from .models import PredicateModels


def attribute_label(attribute: Tuple[str, str]) -> str:
    return f"{attribute[0]}:{attribute[1]}"


def accuracy_matrix(models: PredicateModels, scenes: Sequence[SceneExample], attributes: Sequence[Tuple[str, str]]) -> np.ndarray:
    """(P, A) accuracy of each thresholded predicate against each attribute, over every object."""
    vectors = np.concatenate([ex.vectors for ex in scenes])
    labels = [t for ex in scenes for t in ex.truth]
    predicted = models.scores(vectors) >= const.PREDICATE_THRESHOLD
    result = np.zeros((len(models.names), len(attributes)))
    for j, (category, value) in enumerate(attributes):
        actual = np.array([getattr(t, category) == value for t in labels])
        result[:, j] = (predicted == actual[:, None]).mean(axis=0)
    return result


def evaluate_predicates(models: PredicateModels, scenes: Sequence[SceneExample],
                        assignment: Dict[str, Tuple[str, str]]) -> Dict[str, Tuple[str, float]]:
    """Accuracy of each predicate against the attribute it is matched to.

    Predicates are unlabeled during training, so the matching between predicates and
    the generator's attributes that maximizes total accuracy is used.

    Raises:
        MissingTruth: A scene has no truth labels.

    Returns:
        Dict[str, Tuple[str, float]]: Predicate name to (attribute, accuracy).
    """
    for i, ex in enumerate(scenes):
        if ex.truth is None:
            raise MissingTruth(f"Scene {i} has no truth labels")
    attributes = list(assignment.values())
    if not scenes:
        raise MissingTruth("No labeled scenes to evaluate against")
    scores = accuracy_matrix(models, scenes, attributes)

    predicates = range(len(models.names))
    best, best_total = None, -1.0
    for matched in itertools.permutations(range(len(attributes)), min(len(attributes), len(models.names))):
        total = sum(scores[p, a] for p, a in zip(predicates, matched))
        if total > best_total:
            best, best_total = matched, total
    return {models.names[p]: (attribute_label(attributes[a]), float(scores[p, a])) for p, a in zip(predicates, best)}
