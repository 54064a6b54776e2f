import itertools
import math
import unittest
from unittest import mock

import numpy as np
from pydantic import ValidationError

from algebra.lib.alphabet import VariableContext
from algebra.lib.evaluate import eval_open
from algebra.lib.grounding import enumerate_groundings
from algebra.lib.term import Var, apply, variables
from algebra.utils.errors import ArityMismatch, EmptyCorpus, GenerationStalled, MissingTruth, NoGrounding, UsageError
from scenes.lib.evaluate import evaluate_predicates
from scenes.lib.formula import ObjectTruth, SceneExample, formula_value, models_instance, scene_template, truth_value
from scenes.lib.fuzzy import fuzzy_apply
from scenes.lib.generate import ATTRIBUTES, SceneGenConfig, default_assignment, encode, generate_scene_corpus
from scenes.lib.grounding import corpus_objective, example_loss, ground_best
from scenes.lib.models import PredicateModels, init_models
from scenes.lib.train import TrainConfig, frozen_loss_and_grad, train
from shared import const

const.PROGRESS = False

X, Y, Z = Var("x"), Var("y"), Var("z")


def p(name, var):
    return apply(name, var)


def one_dimensional(scores):
    """Models and vectors for a single predicate p1 that scores object i with scores[i]."""
    models = PredicateModels(["p1"], np.array([[1.0]]))
    vectors = np.array([[math.log(s / (1 - s))] for s in scores])
    return models, vectors


def dyadic_pairs(count, seed):
    rng = np.random.default_rng(seed)
    return rng.integers(0, 2**20 + 1, size=(count, 2)) / 2**20


class TestFuzzy(unittest.TestCase):

    def test_table_values(self):
        self.assertEqual(fuzzy_apply("and", 0.3, 0.7), 0.3)
        self.assertEqual(fuzzy_apply("not", 0.2), 0.8)
        self.assertEqual(fuzzy_apply("implies", 0.9, 0.4), 0.4)
        grid = [i / 10 for i in range(11)]
        for a, b in itertools.product(grid, grid):
            self.assertEqual(fuzzy_apply("and", a, b), min(a, b))
            self.assertEqual(fuzzy_apply("or", a, b), max(a, b))
            self.assertEqual(fuzzy_apply("implies", a, b), max(1 - a, b))

    def test_identities(self):
        for a, b in dyadic_pairs(1000, seed=3):
            self.assertEqual(fuzzy_apply("not", fuzzy_apply("and", a, b)),
                             fuzzy_apply("or", fuzzy_apply("not", a), fuzzy_apply("not", b)))
            self.assertEqual(fuzzy_apply("not", fuzzy_apply("not", a)), a)
            self.assertEqual(fuzzy_apply("implies", a, b), fuzzy_apply("or", fuzzy_apply("not", a), b))

    def test_clamping_and_arity(self):
        self.assertEqual(fuzzy_apply("not", 1.5), 0.0)
        self.assertEqual(fuzzy_apply("or", -0.5, 0.25), 0.25)
        with self.assertRaises(ArityMismatch):
            fuzzy_apply("and", 0.5)


class TestFormulas(unittest.TestCase):

    def test_single_leaf(self):
        models = PredicateModels(["p1"], np.zeros((1, 2)), np.array([math.log(9)]))
        ex = SceneExample(p("p1", X), VariableContext.of(x="alpha"), np.zeros((1, 2)))
        self.assertAlmostEqual(formula_value(models, ex, {"x": 0}), 0.9)

    def test_non_contradiction(self):
        rng = np.random.default_rng(0)
        models = init_models(1, 4, seed=1, scale=2.0)
        term = apply("and", p("p1", X), apply("not", p("p1", X)))
        for _ in range(20):
            ex = SceneExample(term, VariableContext.of(x="alpha"), rng.normal(size=(1, 4)))
            self.assertLessEqual(formula_value(models, ex, {"x": 0}), 0.5)

    def test_hand_computation(self):
        # p1(x) ∧ p2(x) ∧ p1(y) ∧ p3(y)
        models = PredicateModels(["p1", "p2", "p3"], np.eye(3), np.zeros(3))
        vectors = np.array([[2.0, 1.0, -1.0], [0.5, -2.0, 3.0]])
        term = apply("and", apply("and", p("p1", X), p("p2", X)), apply("and", p("p1", Y), p("p3", Y)))
        ex = SceneExample(term, VariableContext.of(x="alpha", y="alpha"), vectors)
        sig = lambda z: 1 / (1 + math.exp(-z))
        expected = min(sig(2.0), sig(1.0), sig(0.5), sig(3.0))
        self.assertAlmostEqual(formula_value(models, ex, {"x": 0, "y": 1}), expected)

    def test_agrees_with_template_instance(self):
        models = init_models(3, 5, seed=2, scale=1.0)
        term = apply("implies", apply("and", p("p1", X), apply("not", p("p2", Y))), apply("or", p("p3", X), p("p1", Y)))
        ctx = VariableContext.of(x="alpha", y="alpha")
        ex = SceneExample(term, ctx, np.random.default_rng(5).normal(size=(3, 5)))
        alg = models_instance(models)
        for g in enumerate_groundings(ctx, ex.objects()):
            self.assertAlmostEqual(formula_value(models, ex, g), eval_open(alg, term, ctx, g, ex.objects()))

    def test_template_has_open_predicates(self):
        alg = scene_template(4, 16)
        self.assertEqual(alg.uninterpreted(), ["p1", "p2", "p3", "p4"])
        self.assertEqual(alg.candidate_families["p1"].parameter_count, 17)


class TestGrounding(unittest.TestCase):

    def test_argmax_object(self):
        models, vectors = one_dimensional([0.2, 0.8, 0.5])
        ex = SceneExample(p("p1", X), VariableContext.of(x="alpha"), vectors)
        value, g = ground_best(models, ex)
        self.assertAlmostEqual(value, 0.8)
        self.assertEqual(g, {"x": 1})

    def test_matches_brute_force(self):
        rng = np.random.default_rng(11)
        names = ["p1", "p2", "p3"]
        terms = [
            apply("and", p("p1", X), apply("not", p("p2", Y))),
            apply("implies", p("p3", Z), apply("or", p("p1", X), p("p2", Y))),
            apply("or", apply("and", p("p1", X), p("p1", Y)), apply("not", p("p3", X))),
        ]
        for case in range(60):
            models = PredicateModels(names, rng.normal(size=(3, 4)), rng.normal(size=3))
            term = terms[case % len(terms)]
            ctx = VariableContext(tuple((name, "alpha") for name in variables(term)))
            m = int(rng.integers(len(ctx), 7))
            ex = SceneExample(term, ctx, rng.normal(size=(m, 4)))
            best = max(formula_value(models, ex, dict(zip(ctx.names(), ids)))
                       for ids in itertools.permutations(range(m), len(ctx)))
            value, g = ground_best(models, ex)
            self.assertEqual(value, best)
            self.assertEqual(formula_value(models, ex, g), value)

    def test_no_grounding(self):
        models = init_models(1, 2, seed=0)
        term = apply("and", apply("and", p("p1", X), p("p1", Y)), apply("and", p("p1", Z), p("p1", Var("w"))))
        ctx = VariableContext.of(x="alpha", y="alpha", z="alpha", w="alpha")
        with self.assertRaises(NoGrounding):
            ground_best(models, SceneExample(term, ctx, np.zeros((3, 2))))

    def test_objective_and_loss(self):
        models = PredicateModels(["p1"], np.array([[1.0]]))
        ctx = VariableContext.of(x="alpha")
        sure = SceneExample(p("p1", X), ctx, np.array([[40.0]]))
        even = SceneExample(p("p1", X), ctx, np.array([[0.0]]))
        self.assertEqual(corpus_objective(models, [sure, even]), 0.75)
        self.assertEqual(corpus_objective(models, [even]), 0.5)
        self.assertEqual(example_loss(models, sure), 0.0)
        self.assertEqual(example_loss(models, even) + ground_best(models, even)[0], 1.0)
        with self.assertRaises(EmptyCorpus):
            corpus_objective(models, [])


class TestTraining(unittest.TestCase):

    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(21)
        term = apply("implies", apply("and", p("p1", X), apply("not", p("p2", Y))), apply("or", p("p3", X), p("p1", Y)))
        ctx = VariableContext.of(x="alpha", y="alpha")
        checked = 0
        while checked < 30:
            models = PredicateModels(["p1", "p2", "p3"], rng.normal(size=(3, 4)), rng.normal(size=3))
            ex = SceneExample(term, ctx, rng.normal(size=(2, 4)))
            g = {"x": 0, "y": 1}
            loss, grad_w, grad_b, margin = frozen_loss_and_grad(models, ex, g)
            if margin < 1e-3:
                continue
            h = 1e-6
            numeric = np.zeros_like(grad_w)
            for i, j in itertools.product(range(3), range(4)):
                up, down = models.copy(), models.copy()
                up.weights[i, j] += h
                down.weights[i, j] -= h
                numeric[i, j] = (frozen_loss_and_grad(up, ex, g)[0] - frozen_loss_and_grad(down, ex, g)[0]) / (2 * h)
            np.testing.assert_allclose(grad_w, numeric, rtol=1e-5, atol=1e-9)
            self.assertAlmostEqual(loss, 1 - formula_value(models, ex, g))
            checked += 1

    def test_zero_epochs(self):
        models = init_models(1, 2, seed=0)
        corpus = [SceneExample(p("p1", X), VariableContext.of(x="alpha"), np.ones((2, 2)))]
        trained, trace = train(models, corpus, TrainConfig(epochs=0))
        np.testing.assert_array_equal(trained.weights, models.weights)
        self.assertEqual(trace, [corpus_objective(models, corpus)])

    def positive_corpus(self):
        rng = np.random.default_rng(4)
        corpus = []
        for _ in range(20):
            truths = [ObjectTruth(*(values[int(rng.integers(len(values)))] for values in ATTRIBUTES.values()))
                      for _ in range(int(rng.integers(1, 3)))]
            corpus.append(SceneExample(p("p1", X), VariableContext.of(x="alpha"),
                                       np.array([encode(t, 16) for t in truths]), tuple(truths)))
        return corpus

    def test_training_improves_objective(self):
        corpus = self.positive_corpus()
        _, trace = train(init_models(1, 16, seed=0), corpus, TrainConfig(epochs=5, seed=1))
        self.assertEqual(len(trace), 6)
        self.assertGreater(trace[-1], trace[0])

    def test_seeded_training_is_reproducible(self):
        corpus = self.positive_corpus()
        config = TrainConfig(epochs=3, seed=9, batch_size=4)
        self.assertEqual(train(init_models(1, 16, seed=0), corpus, config)[1],
                         train(init_models(1, 16, seed=0), corpus, config)[1])

    def test_dimension_mismatch(self):
        corpus = [SceneExample(p("p1", X), VariableContext.of(x="alpha"), np.ones((1, 3)))]
        with self.assertRaises(UsageError):
            train(init_models(1, 2, seed=0), corpus)

    def test_config_validation(self):
        with self.assertRaises(ValidationError):
            TrainConfig(learning_rate=0)


class TestGeneration(unittest.TestCase):

    def test_true_cube_is_accepted(self):
        cube = ObjectTruth("cube", "red", "small", "rubber")
        ex = SceneExample(p("p1", X), VariableContext.of(x="alpha"), [encode(cube, 16)], (cube,))
        names = ["p1"]
        self.assertEqual(truth_value(ex, default_assignment(1), names, {"x": 0}), 1.0)

    def test_two_variables_need_two_objects(self):
        cube = ObjectTruth("cube", "red", "small", "rubber")
        term = apply("and", p("p1", X), apply("not", p("p1", Y)))
        ex = SceneExample(term, VariableContext.of(x="alpha", y="alpha"), [encode(cube, 16)], (cube,))
        self.assertEqual(enumerate_groundings(ex.ctx, ex.objects()), [])

    def test_generated_corpus(self):
        config = SceneGenConfig(num_scenes=15, noise_sigma=0.0, seed=1)
        corpus = generate_scene_corpus(config)
        self.assertEqual(len(corpus.examples), 15)
        for ex in corpus.examples:
            self.assertEqual(ex.dimension, 16)
            self.assertTrue(3 <= len(ex.vectors) <= 6)
            values = [truth_value(ex, corpus.assignment, corpus.predicates, g) for g in enumerate_groundings(ex.ctx, ex.objects())]
            self.assertGreaterEqual(max(values), const.ACCEPT_THRESHOLD)

    def test_generation_is_seeded(self):
        config = SceneGenConfig(num_scenes=5, seed=7)
        self.assertEqual(generate_scene_corpus(config).examples, generate_scene_corpus(config).examples)

    def test_stalled(self):
        with mock.patch.object(const, "ACCEPT_THRESHOLD", 2.0):
            with self.assertRaises(GenerationStalled):
                generate_scene_corpus(SceneGenConfig(num_scenes=1, seed=0))

    def test_config_validation(self):
        with self.assertRaises(ValidationError):
            SceneGenConfig(dimension=8)
        with self.assertRaises(ValidationError):
            SceneGenConfig(objects_per_scene=(4, 2))


class TestEvaluation(unittest.TestCase):

    def perfect_models(self, assignment):
        slots = {}
        start = 0
        for category, values in ATTRIBUTES.items():
            for i, value in enumerate(values):
                slots[(category, value)] = start + i
            start += len(values)
        weights = np.zeros((len(assignment), 16))
        for row, attribute in enumerate(assignment.values()):
            weights[row, slots[attribute]] = 10.0
        return PredicateModels(list(assignment), weights, np.full(len(assignment), -5.0))

    def test_perfect_and_permuted_models(self):
        corpus = generate_scene_corpus(SceneGenConfig(num_scenes=10, noise_sigma=0.0, seed=3))
        models = self.perfect_models(corpus.assignment)
        report = evaluate_predicates(models, corpus.examples, corpus.assignment)
        self.assertEqual([accuracy for _, accuracy in report.values()], [1.0] * 4)
        self.assertEqual(report["p2"][0], "color:red")

        shuffled = evaluate_predicates(models.permuted([2, 0, 3, 1]), corpus.examples, corpus.assignment)
        self.assertEqual(sorted(a for _, a in shuffled.values()), sorted(a for _, a in report.values()))

    def test_missing_truth(self):
        models = init_models(1, 16, seed=0)
        ex = SceneExample(p("p1", X), VariableContext.of(x="alpha"), np.zeros((1, 16)))
        with self.assertRaises(MissingTruth):
            evaluate_predicates(models, [ex], default_assignment(1))


if __name__ == "__main__":
    unittest.main()
