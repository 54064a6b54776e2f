"""Acceptance experiments at full size.

The unit tests run reduced versions of these; this script runs every experiment at the
sizes the toolkit is accepted at and prints one PASS/FAIL line per check.

    PYTHONPATH=. python bin/scripts/acceptance.py
    PYTHONPATH=. python bin/scripts/acceptance.py --only fitting
"""
import itertools
import math
import sys
import time

import fire
import numpy as np

from algebra.lib.alphabet import VariableContext
from algebra.lib.evaluate import total_value
from algebra.lib.grammar import Exhaustive, rtg_generate
from algebra.lib.term import Var, apply, variables
from algebra.utils.errors import NoTerminalDerivation
from collage.lib.algebra import (GRID_OP, GRID_PARAMS, chair_grammar, eval_picture_term, fitting_corpus_terms,
                                 ground_truth_algebra, make_collage_example, params_error)
from collage.lib.distance import sym_diff_area
from collage.lib.fit import FitConfig, fit_transforms, perturb_params
from collage.lib.geometry import UNIT_SQUARE, UNIT_TRIANGLE, AffineTransform, collage_apply, transform_picture
from collage.lib.raster import Viewport, rasterize
from regular.lib.canonical import canonical_dfa, nerode_classes
from regular.lib.dfa import add_transition, dfa_from_table, random_dfa
from regular.lib.embedding import dfa_isomorphic, embedding
from regular.lib.examples import Accept, Equiv, NotEquiv, RegularExampleSet, to_example
from regular.lib.generate import generate_sufficient
from regular.lib.inference import equiv_closure, infer, right_completion
from regular.lib.instance import admissible_instance
from scenes.lib.evaluate import evaluate_predicates
from scenes.lib.formula import SceneExample, formula_value
from scenes.lib.fuzzy import fuzzy_apply
from scenes.lib.generate import SceneGenConfig, generate_scene_corpus
from scenes.lib.grounding import corpus_objective, ground_best
from scenes.lib.models import PredicateModels, init_models
from scenes.lib.train import TrainConfig, frozen_loss_and_grad, train
from shared.helpers import progress
from shared.lprint import lprint

AB = ("a", "b")

results = []


def check(name: str, passed: bool, detail: str = ""):
    results.append((name, passed))
    print(f"{'PASS' if passed else 'FAIL'}\t{name}{f'  ({detail})' if detail else ''}")


def random_targets(count: int):
    """Seeded canonical automata with 2-6 states over 2-3 symbols."""
    targets = []
    seed = 0
    while len(targets) < count:
        alphabet = AB if seed % 2 else ("a", "b", "c")
        target = canonical_dfa(random_dfa(2 + seed % 5, alphabet, seed=seed))
        seed += 1
        if target.states:
            targets.append(target)
    return targets


def regular_experiments():
    ab_star = dfa_from_table(AB, [(0, "a", 1), (1, "b", 0)], initial=0, finals=[0])
    a_plus_b_star = add_transition(ab_star, 1, "a", 1)
    s_star = RegularExampleSet(AB, (Accept("ab"), Equiv("ab", ""), Equiv("abab", "ab"), Equiv("ababa", "aba"),
                                    NotEquiv(("abab", "aba"))))

    start = time.perf_counter()
    inferred = infer(s_star)
    elapsed = time.perf_counter() - start
    check("(ab)* inferred from the corrected set", dfa_isomorphic(inferred, ab_star) is not None and elapsed < 1.0,
          f"{elapsed:.3f}s")

    isomorphic, oracle = 0, 0
    start = time.perf_counter()
    targets = random_targets(200)
    for seed, target in enumerate(progress(targets, desc="random automata")):
        s = generate_sufficient(target, seed=seed)
        isomorphic += dfa_isomorphic(infer(s, seed=seed), target) is not None
        completed = right_completion(equiv_closure(s), seed)
        expected = set(nerode_classes(target, completed.carrier))
        oracle += {frozenset(c) for c in completed.classes()} == expected
    elapsed = time.perf_counter() - start
    check("generate -> infer is isomorphic", isomorphic == len(targets) and elapsed < 30.0,
          f"{isomorphic}/{len(targets)} in {elapsed:.1f}s")
    check("right completion matches Nerode classes", oracle == len(targets), f"{oracle}/{len(targets)}")

    examples = [to_example(record) for record in s_star]
    check("corrected set holds under (ab)* and (a+b)*",
          total_value(admissible_instance(ab_star), examples) and total_value(admissible_instance(a_plus_b_star), examples))
    check("(ab)* embeds into (a+b)*", embedding(ab_star, a_plus_b_star) is not None)

    embedded, pairs, seed = 0, 0, 1000
    rng = np.random.default_rng(5)
    while pairs < 50:
        target = canonical_dfa(random_dfa(2 + seed % 5, AB, seed=seed))
        seed += 1
        missing = [(q, x) for q in sorted(target.states) for x in target.alphabet if (q, x) not in target.delta]
        if not target.states or not missing:
            continue
        source, symbol = missing[int(rng.integers(len(missing)))]
        larger = add_transition(target, source, symbol, int(rng.integers(len(target.states))))
        embedded += embedding(target, larger) is not None
        pairs += 1
    check("random automata embed into their extensions", embedded == pairs, f"{embedded}/{pairs}")


def fuzzy_experiments():
    grid = [i / 10 for i in range(11)]
    table = all(fuzzy_apply("and", a, b) == min(a, b) and fuzzy_apply("or", a, b) == max(a, b)
                and fuzzy_apply("implies", a, b) == max(1 - a, b) and fuzzy_apply("not", a) == 1 - a
                for a, b in itertools.product(grid, grid))
    check("connective table on the 0.1 grid", table)

    rng = np.random.default_rng(3)
    pairs = rng.integers(0, 2**20 + 1, size=(1000, 2)) / 2**20
    laws = all(
        fuzzy_apply("not", fuzzy_apply("and", a, b)) == fuzzy_apply("or", fuzzy_apply("not", a), fuzzy_apply("not", b))
        and fuzzy_apply("not", fuzzy_apply("or", a, b)) == fuzzy_apply("and", fuzzy_apply("not", a), fuzzy_apply("not", b))
        and fuzzy_apply("not", fuzzy_apply("not", a)) == a
        and fuzzy_apply("implies", a, b) == fuzzy_apply("or", fuzzy_apply("not", a), b)
        for a, b in pairs)
    check("De Morgan, involution and implication on 1000 pairs", laws)


def grounding_experiments():
    rng = np.random.default_rng(11)
    x, y, z = Var("x"), Var("y"), Var("z")
    terms = [
        apply("and", apply("p1", x), apply("not", apply("p2", y))),
        apply("implies", apply("p3", z), apply("or", apply("p1", x), apply("p2", y))),
        apply("or", apply("and", apply("p1", x), apply("p1", y)), apply("not", apply("p3", x))),
        apply("p2", x),
    ]
    agree = 0
    for case in progress(range(500), desc="grounding"):
        models = PredicateModels(["p1", "p2", "p3"], rng.normal(size=(3, 4)), rng.normal(size=3))
        term = terms[case % len(terms)]
        ctx = VariableContext(tuple((name, "alpha") for name in variables(term)))
        m = int(rng.integers(len(ctx), 7))
        ex = SceneExample(term, ctx, rng.normal(size=(m, 4)))
        best = max(formula_value(models, ex, dict(zip(ctx.names(), ids)))
                   for ids in itertools.permutations(range(m), len(ctx)))
        value, g = ground_best(models, ex)
        agree += value == best and formula_value(models, ex, g) == value
    check("best grounding equals brute force on 500 scenes", agree == 500, f"{agree}/500")


def training_experiments():
    corpus = generate_scene_corpus(SceneGenConfig(num_scenes=200, noise_sigma=0.05, seed=0))
    start = time.perf_counter()
    models, _ = train(init_models(corpus.num_predicates, corpus.dimension, seed=0), corpus.examples,
                          TrainConfig(seed=0))
    elapsed = time.perf_counter() - start
    objective = corpus_objective(models, corpus.examples)
    accuracy = min(acc for _, acc in evaluate_predicates(models, corpus.examples, corpus.assignment).values())
    check("training objective", objective >= 0.9 and elapsed < 120.0, f"{objective:.3f} in {elapsed:.1f}s")
    check("matched predicate accuracy", accuracy >= 0.95, f"worst {accuracy:.3f}")

    rng = np.random.default_rng(21)
    x, y = Var("x"), Var("y")
    term = apply("implies", apply("and", apply("p1", x), apply("not", apply("p2", y))),
                 apply("or", apply("p3", x), apply("p1", y)))
    ctx = VariableContext.of(x="alpha", y="alpha")
    g = {"x": 0, "y": 1}
    checked, matched, h = 0, 0, 1e-6
    while checked < 100:
        models = PredicateModels(["p1", "p2", "p3"], rng.normal(size=(3, 4)), rng.normal(size=3))
        ex = SceneExample(term, ctx, rng.normal(size=(2, 4)))
        _, grad_w, _, margin = frozen_loss_and_grad(models, ex, g)
        if margin < 1e-3:
            continue
        numeric = np.zeros_like(grad_w)
        for i, j in itertools.product(range(3), range(4)):
            up, down = models.copy(), models.copy()
            up.weights[i, j] += h
            down.weights[i, j] -= h
            numeric[i, j] = (frozen_loss_and_grad(up, ex, g)[0] - frozen_loss_and_grad(down, ex, g)[0]) / (2 * h)
        matched += bool(np.allclose(grad_w, numeric, rtol=1e-5, atol=1e-9))
        checked += 1
    check("gradients match central differences", matched == checked, f"{matched}/{checked}")


def geometry_experiments():
    pic = collage_apply(GRID_OP, [UNIT_SQUARE, UNIT_TRIANGLE, UNIT_SQUARE, UNIT_TRIANGLE])
    check("distance to itself is zero", sym_diff_area(pic, pic) == 0.0)

    wide = Viewport(0.0, 0.0, 1.5, 1.0)
    shifted = transform_picture(AffineTransform(1, 0, 0, 1, 0.5, 0), UNIT_SQUARE)
    pitch = wide.width / 128
    area = sym_diff_area(UNIT_SQUARE, shifted, wide, 128)
    check("shifted square area", math.isclose(area, 1.0, abs_tol=2 * pitch * 4), f"{area:.5f}")
    errors = [abs(sym_diff_area(UNIT_SQUARE, shifted, wide, r) - 1.0) for r in (64, 128, 256)]
    check("area error shrinks with resolution", errors[0] >= errors[1] >= errors[2],
          " ".join(f"{e:.5f}" for e in errors))

    squares = collage_apply(GRID_OP, [UNIT_SQUARE] * 4)
    check("four tiles fill the unit square", all(rasterize(squares, width=r).bits.all() for r in (16, 64, 128, 256)))


def fitting_experiments():
    truth = ground_truth_algebra()
    corpus = [make_collage_example(truth, term) for term in fitting_corpus_terms()]
    config = FitConfig(max_iters=500, seed=0)
    init = perturb_params(GRID_PARAMS, 0.1, seed=0)
    start = time.perf_counter()
    params, trace = fit_transforms(config.template(), corpus, init, config)
    elapsed = time.perf_counter() - start
    error = params_error(params)
    check("fit recovers the grid operator", trace[-1] < 1e-3 and error < 1e-2 and elapsed < 120.0,
          f"loss {trace[-1]:.2e}, parameter error {error:.2e}, {elapsed:.1f}s")
    check("loss trace is non-increasing", all(later <= earlier for earlier, later in zip(trace, trace[1:])))


def count_derivations(rules, nonterminal: str, depth: int) -> int:
    total = 0
    for lhs, rhs in rules:
        if lhs == nonterminal:
            total += _count_rhs(rules, rhs, depth)
    return total


def _count_rhs(rules, term, depth: int) -> int:
    if term.symbol in ("S", "A", "B"):
        return count_derivations(rules, term.symbol, depth)
    if not term.children:
        return 1
    if depth == 0:
        return 0
    return math.prod(_count_rhs(rules, child, depth - 1) for child in term.children)


def chair_experiments():
    g, alg = chair_grammar()
    counts = []
    for depth in (1, 2, 3, 4):
        try:
            counts.append(len(rtg_generate(g, Exhaustive(depth))))
        except NoTerminalDerivation:
            counts.append(0)
    expected = [count_derivations(g.rules, "S", depth) for depth in (1, 2, 3, 4)]
    check("chair term counts", counts == expected, f"{counts}")

    bounds = [eval_picture_term(alg, term).bounds() for term in rtg_generate(g, Exhaustive(3))]
    inside = all(min(b[0], b[1]) >= 0.0 and max(b[2], b[3]) <= 1.0 for b in bounds)
    check("chair pictures stay in the unit square", inside)


EXPERIMENTS = {
    "regular": regular_experiments,
    "fuzzy": fuzzy_experiments,
    "grounding": grounding_experiments,
    "training": training_experiments,
    "geometry": geometry_experiments,
    "fitting": fitting_experiments,
    "chair": chair_experiments,
}


def main(only: str | None = None):
    """Runs every experiment, or just the one named by --only."""
    selected = list(EXPERIMENTS) if only is None else [only]
    for name in selected:
        if name not in EXPERIMENTS:
            raise ValueError(f"Unknown experiment '{name}', expected one of {list(EXPERIMENTS)}")
        start = time.perf_counter()
        EXPERIMENTS[name]()
        lprint("Info", start, f"{name} done")

    failed = [name for name, passed in results if not passed]
    lprint("Error" if failed else "Info", message=f"{len(results) - len(failed)}/{len(results)} checks pass")
    if failed:
        sys.exit(1)


if __name__ == "__main__":
    fire.Fire(main)
