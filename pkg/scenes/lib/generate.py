import time
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np
from pydantic import BaseModel, NonNegativeFloat, PositiveInt, model_validator

from algebra.lib.alphabet import Alphabet, VariableContext, symbol
from algebra.lib.grammar import Random, RegularTreeGrammar, rtg_generate
from algebra.lib.grounding import enumerate_groundings
from algebra.lib.term import Var, apply, rename, variables
from algebra.utils.errors import GenerationStalled
from shared import const
from shared.helpers import make_rng, progress
from shared.lprint import lprint
from .formula import ALPHA, BETA, ObjectTruth, SceneExample, scene_alphabet, truth_value
from .models import predicate_names

ATTRIBUTES: Dict[str, Tuple[str, ...]] = {
    "shape": ("cube", "sphere", "cylinder"),
    "color": ("gray", "red", "blue", "green", "brown", "purple", "cyan", "yellow"),
    "size": ("small", "large"),
    "material": ("rubber", "metal"),
}
ONE_HOT_DIMENSION = sum(len(values) for values in ATTRIBUTES.values())

# predicate i denotes DEFAULT_ASSIGNMENT[i % 4] unless the config overrides it
DEFAULT_ASSIGNMENT = (("shape", "cube"), ("color", "red"), ("size", "large"), ("material", "metal"))

Assignment = Dict[str, Tuple[str, str]]


class SceneGenConfig(BaseModel):
    num_scenes: PositiveInt = 200
    objects_per_scene: Tuple[PositiveInt, PositiveInt] = (3, 6)
    noise_sigma: NonNegativeFloat = 0.05
    dimension: PositiveInt = const.SCENE_DIMENSION
    formula_depth: PositiveInt = 3
    num_predicates: PositiveInt = 4
    num_variables: PositiveInt = 2
    seed: int | None = None

    @model_validator(mode="after")
    def check_ranges(self):
        low, high = self.objects_per_scene
        if low > high:
            raise ValueError(f"Object range {self.objects_per_scene} is empty")
        if self.dimension < ONE_HOT_DIMENSION:
            raise ValueError(f"Dimension must hold the {ONE_HOT_DIMENSION} attribute slots, got {self.dimension}")
        if self.num_predicates > len(DEFAULT_ASSIGNMENT):
            raise ValueError(f"At most {len(DEFAULT_ASSIGNMENT)} predicates have a generator attribute")
        return self


@dataclass
class SceneCorpus:
    examples: List[SceneExample]
    assignment: Assignment
    dimension: int
    num_predicates: int = 0

    def __post_init__(self):
        self.num_predicates = self.num_predicates or len(self.assignment)

    @property
    def predicates(self) -> List[str]:
        return predicate_names(self.num_predicates)


def default_assignment(num_predicates: int) -> Assignment:
    return dict(zip(predicate_names(num_predicates), DEFAULT_ASSIGNMENT))


def encode(truth: ObjectTruth, dimension: int) -> np.ndarray:
    """One-hot attribute blocks in shape, color, size, material order, zero-padded."""
    vector = np.zeros(dimension)
    start = 0
    for category, values in ATTRIBUTES.items():
        vector[start + values.index(getattr(truth, category))] = 1.0
        start += len(values)
    return vector


def formula_grammar(predicates: List[str], num_variables: int) -> RegularTreeGrammar:
    """B → and[B,B] | or[B,B] | implies[B,B] | not[B] | p[v] for every predicate p and variable v."""
    variable_symbols = [symbol(f"x{i + 1}", ALPHA) for i in range(num_variables)]
    terminals = scene_alphabet(predicates).union(variable_symbols)
    b = apply("B")
    rules = [("B", apply(name, b, b)) for name in ("and", "or", "implies")] + [("B", apply("not", b))]
    rules += [("B", apply(p, apply(v.name))) for p in predicates for v in variable_symbols]
    return RegularTreeGrammar(terminals, Alphabet([symbol("B", BETA)]), tuple(rules), "B")


def _draw_truth(rng) -> ObjectTruth:
    return ObjectTruth(*(values[int(rng.integers(len(values)))] for values in ATTRIBUTES.values()))


def generate_scene_corpus(config: SceneGenConfig = SceneGenConfig()) -> SceneCorpus:
    """Draws scenes and formulas, keeping pairs some grounding satisfies under the true attributes.

    Object vectors are one-hot attribute encodings plus Gaussian noise. A pair is
    accepted when the best ground-truth value reaches ACCEPT_THRESHOLD.

    Raises:
        GenerationStalled: More than 99% of the attempts were rejected.

    Returns:
        SceneCorpus: Labeled examples and the predicate→attribute assignment.
    """
    start = time.perf_counter()
    rng = make_rng(config.seed)
    assignment = default_assignment(config.num_predicates)
    names = list(assignment)
    grammar = formula_grammar(names, config.num_variables)
    budget = 100 * config.num_scenes
    low, high = config.objects_per_scene

    examples: List[SceneExample] = []
    attempts = 0
    bar = progress(range(config.num_scenes), desc="scenes")
    for _ in bar:
        while True:
            attempts += 1
            if attempts > budget:
                raise GenerationStalled(f"Accepted {len(examples)} of {attempts - 1} attempts, below 1%")
            term = rtg_generate(grammar, Random(1, seed=int(rng.integers(2**32)), cutoff=config.formula_depth))[0]
            term = rename(term, {f"x{i + 1}": Var(f"x{i + 1}") for i in range(config.num_variables)})
            ctx = VariableContext(tuple((name, ALPHA) for name in sorted(variables(term))))

            truth = tuple(_draw_truth(rng) for _ in range(int(rng.integers(low, high + 1))))
            vectors = np.array([encode(t, config.dimension) for t in truth])
            vectors = vectors + rng.normal(0.0, config.noise_sigma, size=vectors.shape) if config.noise_sigma else vectors
            ex = SceneExample(term, ctx, vectors, truth)

            groundings = enumerate_groundings(ctx, ex.objects())
            if any(truth_value(ex, assignment, names, g) >= const.ACCEPT_THRESHOLD for g in groundings):
                examples.append(ex)
                break

    lprint("Info", start, f"scene-gen: {len(examples)} scenes from {attempts} attempts")
    return SceneCorpus(examples, assignment, config.dimension)
