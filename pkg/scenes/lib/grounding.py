from typing import List, Sequence, Tuple

from algebra.lib.grounding import GroundingAssignment, enumerate_groundings
from algebra.utils.errors import EmptyCorpus, ExampleFailed, NoGrounding, TemplateError
from shared import const
from shared.helpers import mean
from .formula import SceneExample, Selection, select_term
from .models import PredicateModels


def best_selection(models: PredicateModels, ex: SceneExample, cap: int = const.GROUNDING_CAP) -> Tuple[Selection, GroundingAssignment]:
    groundings = enumerate_groundings(ex.ctx, ex.objects(), cap)
    if not groundings:
        raise NoGrounding(f"No grounding of {len(ex.ctx)} variables in {len(ex.vectors)} objects")
    scores = models.scores(ex.vectors)
    best, best_g = None, None
    for g in groundings:
        selection = select_term(ex.term, scores, models, g)
        if best is None or selection.value > best.value:
            best, best_g = selection, g
    return best, best_g


def ground_best(models: PredicateModels, ex: SceneExample, cap: int = const.GROUNDING_CAP) -> Tuple[float, GroundingAssignment]:
    """The grounding maximizing the formula value; ties keep the first in assignment order.

    Raises:
        NoGrounding: Fewer objects than variables.
        CapExceeded: More than `cap` injective assignments.

    Returns:
        Tuple[float, GroundingAssignment]: The best value and its assignment.
    """
    selection, g = best_selection(models, ex, cap)
    return selection.value, g


def example_loss(models: PredicateModels, ex: SceneExample, cap: int = const.GROUNDING_CAP) -> float:
    return 1.0 - ground_best(models, ex, cap)[0]


def corpus_values(models: PredicateModels, corpus: Sequence[SceneExample], cap: int = const.GROUNDING_CAP) -> List[float]:
    values = []
    for i, ex in enumerate(corpus):
        try:
            values.append(ground_best(models, ex, cap)[0])
        except TemplateError as e:
            raise ExampleFailed(i, e) from e
    return values


def corpus_objective(models: PredicateModels, corpus: Sequence[SceneExample], cap: int = const.GROUNDING_CAP) -> float:
    """Average of the best example values.

    Raises:
        EmptyCorpus: No examples.
    """
    if not corpus:
        raise EmptyCorpus("Cannot average over an empty scene corpus")
    return mean(corpus_values(models, corpus, cap))
