from typing import List, Sequence, Tuple

import numpy as np

from algebra.lib.algebra import REAL, CandidateFamily, Domain, TemplateAlgebra
from algebra.lib.alphabet import Alphabet, VariableContext, symbol
from algebra.lib.evaluate import eval_closed
from algebra.lib.grammar import RegularTreeGrammar
from algebra.lib.grounding import Example, ExampleObject
from algebra.lib.term import Term, Var, apply
from shared import const
from shared.helpers import mean
from .distance import hausdorff_distance, sym_diff_area
from .geometry import UNIT_SQUARE, UNIT_TRIANGLE, CollageOp, Picture, collage_apply, scale_translate
from .raster import UNIT_VIEWPORT, Viewport

PICTURE_TYPE = "p"
PICTURE = Domain("picture", lambda v: isinstance(v, Picture))

DISTANCES = ("symdiff", "hausdorff")

# four half-scale translates tiling the unit square: lower-left, lower-right, upper-left, upper-right
GRID_OP = CollageOp(tuple(scale_translate(0.5, dx, dy) for dx, dy in ((0, 0), (0.5, 0), (0, 0.5), (0.5, 0.5))))
GRID_PARAMS = GRID_OP.parameters()
PAIR_OP = CollageOp((scale_translate(0.5), scale_translate(0.5, 0.5, 0.5)))

COLLAGE_ALPHABET = Alphabet([
    symbol("sq", PICTURE_TYPE),
    symbol("tri", PICTURE_TYPE),
    symbol("C", PICTURE_TYPE),
    symbol("F", *[PICTURE_TYPE] * 5),
    symbol("G", PICTURE_TYPE, PICTURE_TYPE, PICTURE_TYPE),
    symbol("delta", PICTURE_TYPE, PICTURE_TYPE, "real"),
])


def collage_operation(op: CollageOp):
    return lambda *pictures: collage_apply(op, pictures)


def _grid_family(params: Sequence[float]):
    return collage_operation(CollageOp.from_parameters(params))


def collage_template(viewport: Viewport = UNIT_VIEWPORT, distance: str = "symdiff",
                     resolution: int = const.RASTER_RESOLUTION, smooth: bool = False) -> TemplateAlgebra:
    """Collage algebra over pictures with the 4-ary F left open.

    δ measures the distance between a target picture and an evaluated term; the value
    of a corpus is the mean distance and opt is min.

    Args:
        viewport (Viewport, optional): Raster viewport covering every picture.
        distance (str, optional): "symdiff" or "hausdorff".
        resolution (int, optional): Raster size per side.
        smooth (bool, optional): Use anti-aliased coverage for symdiff.
    """
    if distance not in DISTANCES:
        raise ValueError(f"Unknown distance '{distance}', expected one of {DISTANCES}")
    if distance == "symdiff":
        delta = lambda a, b: sym_diff_area(a, b, viewport, resolution, smooth)
    else:
        delta = lambda a, b: hausdorff_distance(a, b, viewport, resolution)

    return TemplateAlgebra(
        alphabet=COLLAGE_ALPHABET,
        domains={PICTURE_TYPE: PICTURE, "real": REAL},
        interpretations={
            "sq": lambda: UNIT_SQUARE,
            "tri": lambda: UNIT_TRIANGLE,
            "C": lambda: UNIT_TRIANGLE,
            "G": collage_operation(PAIR_OP),
            "delta": delta,
        },
        eval_type="real",
        combine=mean,
        opt="min",
        candidate_families={"F": CandidateFamily(6 * 4, _grid_family)},
    )


def ground_truth_algebra(**kwargs) -> TemplateAlgebra:
    return collage_template(**kwargs).instance({"F": GRID_PARAMS})


def chair_grammar() -> Tuple[RegularTreeGrammar, TemplateAlgebra]:
    """S → F[A,A,A,A]; A → F[A,A,A,A] | F[B,B,B,B]; B → G[C,S] | C."""
    terminals = Alphabet([COLLAGE_ALPHABET["F"], COLLAGE_ALPHABET["G"], COLLAGE_ALPHABET["C"]])
    nonterminals = Alphabet([symbol(name, PICTURE_TYPE) for name in ("S", "A", "B")])
    s, a, b = apply("S"), apply("A"), apply("B")
    rules = (
        ("S", apply("F", a, a, a, a)),
        ("A", apply("F", a, a, a, a)),
        ("A", apply("F", b, b, b, b)),
        ("B", apply("G", apply("C"), s)),
        ("B", apply("C")),
    )
    return RegularTreeGrammar(terminals, nonterminals, rules, "S"), ground_truth_algebra()


def fitting_corpus_terms() -> List[Term]:
    """The four collage terms over tri and sq used as the fitting corpus."""
    tri, sq = apply("tri"), apply("sq")
    return [
        apply("F", tri, sq, tri, sq),
        apply("F", tri, tri, sq, sq),
        apply("F", sq, tri, sq, tri),
        apply("F", apply("F", tri, sq, tri, sq), tri, tri, sq),
    ]


def eval_picture_term(alg: TemplateAlgebra, term: Term) -> Picture:
    """Evaluates a closed picture term bottom-up.

    Raises:
        UninterpretedSymbol: F is still open in `alg`.
    """
    return eval_closed(alg, term)


def make_collage_example(alg: TemplateAlgebra, term: Term) -> Example:
    """(δ[x, t], {val(t)}): the picture of `t` is the single object."""
    return example_from_picture(term, eval_picture_term(alg, term))


def example_from_picture(term: Term, picture: Picture) -> Example:
    ctx = VariableContext.of(x=PICTURE_TYPE)
    return Example(apply("delta", Var("x"), term), ctx, (ExampleObject(0, PICTURE_TYPE, picture),))


def params_error(params: Sequence[float], reference: Sequence[float] = GRID_PARAMS) -> float:
    """Largest absolute coefficient difference."""
    return float(np.max(np.abs(np.asarray(params, dtype=float) - np.asarray(reference, dtype=float))))
