import math
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from algebra.lib.algebra import UNIT, CandidateFamily, TemplateAlgebra, vector_domain
from algebra.lib.alphabet import Alphabet, VariableContext, symbol
from algebra.lib.grounding import Example, ExampleObject, GroundingAssignment
from algebra.lib.term import Apply, Term, Var, render, variables
from algebra.utils.errors import UnboundVariable, UsageError
from shared import const
from shared.helpers import mean
from .fuzzy import CONNECTIVES, clamp
from .models import PredicateModels, predicate_names, sigmoid

ALPHA = "alpha"
BETA = "beta"


class ObjectTruth(NamedTuple):
    shape: str
    color: str
    size: str
    material: str


@dataclass(frozen=True)
class SceneExample:
    """(φ, O): a fuzzy formula and the object vectors of one scene.

    Attributes:
        term (Term): Formula over the connectives and unary predicates.
        ctx (VariableContext): The formula's variables, all of the object type.
        vectors (np.ndarray): (m, n) object vectors; object i has id i.
        truth (Tuple[ObjectTruth, ...] | None): Generator labels, one per object.
    """
    term: Term
    ctx: VariableContext
    vectors: np.ndarray
    truth: Optional[Tuple[ObjectTruth, ...]] = None

    __hash__ = None

    def __post_init__(self):
        vectors = np.array(self.vectors, dtype=float, ndmin=2)
        if not np.all(np.isfinite(vectors)):
            raise ValueError("Object vectors must be finite.")
        object.__setattr__(self, "vectors", vectors)
        if self.truth is not None:
            truth = tuple(ObjectTruth(*t) for t in self.truth)
            if len(truth) != len(vectors):
                raise ValueError(f"Truth labels cover {len(truth)} of {len(vectors)} objects")
            object.__setattr__(self, "truth", truth)
        for name in variables(self.term):
            if name not in self.ctx:
                raise ValueError(f"Variable '{name}' is not declared in the example context.")

    @property
    def dimension(self) -> int:
        return self.vectors.shape[1]

    def objects(self) -> Tuple[ExampleObject, ...]:
        return tuple(ExampleObject(i, ALPHA, v) for i, v in enumerate(self.vectors))

    def to_example(self) -> Example:
        return Example(self.term, self.ctx, self.objects())

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, SceneExample) and self.term == other.term and self.ctx == other.ctx
                and self.truth == other.truth and bool(np.array_equal(self.vectors, other.vectors)))


def scene_alphabet(predicates: Sequence[str]) -> Alphabet:
    return Alphabet([
        symbol("and", BETA, BETA, BETA),
        symbol("or", BETA, BETA, BETA),
        symbol("implies", BETA, BETA, BETA),
        symbol("not", BETA, BETA),
    ] + [symbol(name, ALPHA, BETA) for name in predicates])


def _logistic_family(params: Sequence[float]):
    params = np.asarray(params, dtype=float)
    weights, bias = params[:-1], params[-1]
    return lambda obj: float(sigmoid(np.dot(weights, obj) + bias))


def scene_template(num_predicates: int, dimension: int = const.SCENE_DIMENSION) -> TemplateAlgebra:
    """Fuzzy connectives fixed, predicates open with the logistic family of n + 1 parameters.

    opt is max over groundings and ⊕ is the average.
    """
    return TemplateAlgebra(
        alphabet=scene_alphabet(predicate_names(num_predicates)),
        domains={ALPHA: vector_domain(dimension), BETA: UNIT},
        interpretations=dict(CONNECTIVES),
        eval_type=BETA,
        combine=mean,
        opt="max",
        candidate_families={name: CandidateFamily(dimension + 1, _logistic_family) for name in predicate_names(num_predicates)},
    )


def models_instance(models: PredicateModels) -> TemplateAlgebra:
    """The complete algebra realized by trained models."""
    template = scene_template(len(models.names), models.dimension)
    return template.instance({name: np.append(models.weights[i], models.bias[i]) for i, name in enumerate(models.names)})


class Selection(NamedTuple):
    """The formula's value is offset + sign·score(predicate, object) for the selected leaf."""
    value: float
    offset: float
    sign: float
    predicate: int
    object: int
    margin: float


def select_term(term: Term, scores: np.ndarray, models: PredicateModels, g: GroundingAssignment) -> Selection:
    if not isinstance(term, Apply):
        raise UsageError(f"Variable '{term.name}' appears outside a predicate")

    if term.symbol not in CONNECTIVES:
        (arg,) = term.children
        if not isinstance(arg, Var):
            raise UsageError(f"Predicate '{term.symbol}' must be applied to a variable, got {render(arg)}")
        if arg.name not in g:
            raise UnboundVariable(f"Variable '{arg.name}' is not grounded")
        p, o = models.index(term.symbol), g[arg.name]
        return Selection(clamp(scores[o, p]), 0.0, 1.0, p, o, math.inf)

    parts = [select_term(child, scores, models, g) for child in term.children]
    if term.symbol == "not":
        (a,) = parts
        return Selection(1.0 - a.value, 1.0 - a.offset, -a.sign, a.predicate, a.object, a.margin)

    a, b = parts
    if term.symbol == "implies":
        a = Selection(1.0 - a.value, 1.0 - a.offset, -a.sign, a.predicate, a.object, a.margin)
    margin = min(a.margin, b.margin, abs(a.value - b.value))
    # ties go to the first argument
    if term.symbol == "and":
        chosen = a if a.value <= b.value else b
    else:
        chosen = a if a.value >= b.value else b
    return chosen._replace(margin=margin)


def select_leaf(models: PredicateModels, ex: SceneExample, g: GroundingAssignment) -> Selection:
    return select_term(ex.term, models.scores(ex.vectors), models, g)


def formula_value(models: PredicateModels, ex: SceneExample, g: GroundingAssignment) -> float:
    """val(φ)(g(x₁),…,g(x_ℓ)) with predicate leaves scoring their grounded objects.

    Raises:
        UnboundVariable: A variable of φ is not covered by `g`.
    """
    return select_leaf(models, ex, g).value


def truth_scores(ex: SceneExample, attributes: Dict[str, Tuple[str, str]], names: Sequence[str]) -> np.ndarray:
    """Crisp (m, P) scores: 1 where the object has the attribute a predicate denotes."""
    scores = np.zeros((len(ex.vectors), len(names)))
    for o, labels in enumerate(ex.truth):
        for p, name in enumerate(names):
            category, value = attributes[name]
            scores[o, p] = float(getattr(labels, category) == value)
    return scores


def truth_value(ex: SceneExample, attributes: Dict[str, Tuple[str, str]], names: Sequence[str],
                g: GroundingAssignment) -> float:
    """Formula value under the ground-truth attribute semantics."""
    stub = PredicateModels(list(names), np.zeros((len(names), 1)))
    return select_term(ex.term, truth_scores(ex, attributes, names), stub, g).value


def formula_predicates(term: Term) -> List[str]:
    return [node.symbol for node in _leaves(term)]


def _leaves(term: Term):
    if isinstance(term, Apply) and term.symbol not in CONNECTIVES:
        yield term
    elif isinstance(term, Apply):
        for child in term.children:
            yield from _leaves(child)
