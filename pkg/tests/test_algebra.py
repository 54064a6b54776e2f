import unittest

from algebra.lib.algebra import BOOLEAN, REAL, CandidateFamily, TemplateAlgebra
from algebra.lib.alphabet import Alphabet, VariableContext, symbol
from algebra.lib.evaluate import eval_closed, eval_open, example_value, substitute, total_value, typecheck_term
from algebra.lib.grammar import Exhaustive, Random, RegularTreeGrammar, rtg_generate
from algebra.lib.grounding import Example, count_groundings, enumerate_groundings, make_objects
from algebra.lib.term import Var, apply, height, render, variables
from algebra.utils.errors import (ArityMismatch, CapExceeded, DomainError, EmptyCorpus, ExampleFailed, NoGrounding,
                                  NoTerminalDerivation, TypeMismatch, UninterpretedSymbol, UnknownSymbol, UsageError)
from shared import const

const.PROGRESS = False

ARITH = Alphabet([
    symbol("zero", "num"),
    symbol("one", "num"),
    symbol("plus", "num", "num", "num"),
    symbol("half", "num", "num"),
    symbol("positive", "num", "flag"),
])


def arith_algebra(**overrides) -> TemplateAlgebra:
    settings = dict(
        alphabet=ARITH,
        domains={"num": REAL, "flag": BOOLEAN},
        interpretations={"zero": lambda: 0.0, "one": lambda: 1.0, "plus": lambda a, b: a + b, "positive": lambda a: a > 0},
        eval_type="num",
        combine=sum,
        opt="max",
        candidate_families={"half": CandidateFamily(1, lambda p: lambda a: a * p[0])},
    )
    settings.update(overrides)
    return TemplateAlgebra(**settings)


class TestTyping(unittest.TestCase):

    def test_well_typed_term(self):
        term = apply("positive", apply("plus", apply("one"), Var("x")))
        self.assertEqual(typecheck_term(term, ARITH, VariableContext.of(x="num")), "flag")

    def test_unknown_symbol(self):
        with self.assertRaises(UnknownSymbol):
            typecheck_term(apply("minus", apply("one")), ARITH)

    def test_arity_mismatch_names_path(self):
        term = apply("positive", apply("plus", apply("one")))
        with self.assertRaises(ArityMismatch) as raised:
            typecheck_term(term, ARITH)
        self.assertEqual(raised.exception.path, (0,))

    def test_type_mismatch(self):
        term = apply("plus", apply("positive", apply("one")), apply("one"))
        with self.assertRaises(TypeMismatch) as raised:
            typecheck_term(term, ARITH)
        self.assertEqual(raised.exception.path, (0,))

    def test_undeclared_variable(self):
        with self.assertRaises(UnknownSymbol):
            typecheck_term(Var("y"), ARITH, VariableContext.of(x="num"))

    def test_duplicate_symbol_names_rejected(self):
        with self.assertRaises(ValueError):
            Alphabet([symbol("one", "num"), symbol("one", "flag")])


class TestTerms(unittest.TestCase):

    def test_render_and_height(self):
        term = apply("plus", apply("one"), apply("plus", Var("x"), apply("zero")))
        self.assertEqual(render(term), "plus[one,plus[x,zero]]")
        self.assertEqual(height(term), 2)
        self.assertEqual(height(apply("one")), 0)

    def test_variables_in_first_occurrence_order(self):
        term = apply("plus", Var("y"), apply("plus", Var("x"), Var("y")))
        self.assertEqual(variables(term), ["y", "x"])


class TestEvaluation(unittest.TestCase):

    def test_closed_term(self):
        term = apply("plus", apply("one"), apply("plus", apply("one"), apply("zero")))
        self.assertEqual(eval_closed(arith_algebra(), term), 2.0)

    def test_uninterpreted_symbol(self):
        with self.assertRaises(UninterpretedSymbol):
            eval_closed(arith_algebra(), apply("half", apply("one")))

    def test_instance_fills_hole(self):
        alg = arith_algebra().instance({"half": [0.5]})
        self.assertTrue(alg.is_complete())
        self.assertEqual(eval_closed(alg, apply("half", apply("one"))), 0.5)

    def test_instance_checks_parameter_count(self):
        with self.assertRaises(UsageError):
            arith_algebra().instance({"half": [0.5, 1.0]})

    def test_cannot_override_template_operation(self):
        with self.assertRaises(UsageError):
            arith_algebra().with_interpretations({"plus": lambda a, b: a - b})

    def test_host_error_becomes_domain_error(self):
        alg = arith_algebra(interpretations={"zero": lambda: 0.0, "one": lambda: 1.0, "plus": lambda a, b: a / b,
                                             "positive": lambda a: a > 0})
        with self.assertRaises(DomainError):
            eval_closed(alg, apply("plus", apply("one"), apply("zero")))

    def test_open_term_matches_substitution(self):
        alg = arith_algebra()
        ctx = VariableContext.of(x="num", y="num")
        term = apply("plus", Var("x"), apply("plus", Var("y"), Var("y")))
        objects = make_objects("num", [2.0, 5.0])
        for g in enumerate_groundings(ctx, objects):
            extended, closed = substitute(alg, term, ctx, g, objects)
            self.assertEqual(eval_open(alg, term, ctx, g, objects), eval_closed(extended, closed))


class TestGroundings(unittest.TestCase):

    def test_counts_are_falling_factorials(self):
        ctx = VariableContext.of(x="num", y="num", z="num")
        for m in range(3, 7):
            groundings = enumerate_groundings(ctx, make_objects("num", list(range(m))))
            self.assertEqual(len(groundings), count_groundings(3, m))
            self.assertEqual(len(groundings), m * (m - 1) * (m - 2))

    def test_groundings_are_injective(self):
        ctx = VariableContext.of(x="num", y="num")
        for g in enumerate_groundings(ctx, make_objects("num", [1, 2, 3])):
            self.assertNotEqual(g["x"], g["y"])

    def test_types_are_respected(self):
        ctx = VariableContext.of(x="num", y="flag")
        objects = make_objects("num", [1.0, 2.0]) + make_objects("flag", [True], first_id=2)
        groundings = enumerate_groundings(ctx, objects)
        self.assertEqual(len(groundings), 2)
        self.assertTrue(all(g["y"] == 2 for g in groundings))

    def test_cap(self):
        ctx = VariableContext.of(x="num", y="num")
        with self.assertRaises(CapExceeded):
            enumerate_groundings(ctx, make_objects("num", list(range(10))), cap=50)

    def test_duplicate_values_are_distinct_objects(self):
        ctx = VariableContext.of(x="num", y="num")
        self.assertEqual(len(enumerate_groundings(ctx, make_objects("num", [1.0, 1.0]))), 2)


class TestExampleValues(unittest.TestCase):

    def setUp(self):
        self.alg = arith_algebra()
        self.ctx = VariableContext.of(x="num", y="num")
        self.term = apply("plus", Var("x"), apply("plus", Var("y"), Var("y")))

    def test_opt_over_groundings(self):
        ex = Example(self.term, self.ctx, make_objects("num", [1.0, 3.0]))
        # x=1,y=3 -> 7; x=3,y=1 -> 5
        self.assertEqual(example_value(self.alg, ex), 7.0)
        self.assertEqual(example_value(arith_algebra(opt="min"), ex), 5.0)

    def test_no_grounding(self):
        ex = Example(self.term, self.ctx, make_objects("num", [1.0]))
        with self.assertRaises(NoGrounding):
            example_value(self.alg, ex)

    def test_total_value_combines(self):
        examples = [Example(self.term, self.ctx, make_objects("num", [1.0, 3.0])),
                    Example(self.term, self.ctx, make_objects("num", [0.0, 1.0]))]
        self.assertEqual(total_value(self.alg, examples), 7.0 + 2.0)

    def test_total_value_reports_failing_index(self):
        examples = [Example(self.term, self.ctx, make_objects("num", [1.0, 3.0])),
                    Example(self.term, self.ctx, make_objects("num", [1.0]))]
        with self.assertRaises(ExampleFailed) as raised:
            total_value(self.alg, examples)
        self.assertEqual(raised.exception.index, 1)
        self.assertIsInstance(raised.exception.cause, NoGrounding)

    def test_empty_corpus(self):
        with self.assertRaises(EmptyCorpus):
            total_value(self.alg, [])


def chair_like_grammar() -> RegularTreeGrammar:
    terminals = Alphabet([symbol("F", "p", "p", "p", "p", "p"), symbol("C", "p")])
    nonterminals = Alphabet([symbol("S", "p")])
    s, c = apply("S"), apply("C")
    rules = (("S", apply("F", s, s, s, s)), ("S", apply("F", c, c, c, c)))
    return RegularTreeGrammar(terminals, nonterminals, rules, "S")


class TestGrammar(unittest.TestCase):

    def test_exhaustive_counts(self):
        g = chair_like_grammar()
        self.assertEqual(len(rtg_generate(g, Exhaustive(1))), 1)
        self.assertEqual(len(rtg_generate(g, Exhaustive(2))), 2)
        self.assertEqual(len(rtg_generate(g, Exhaustive(3))), 1 + 2 ** 4)

    def test_exhaustive_terms_are_terminal_and_bounded(self):
        g = chair_like_grammar()
        for term in rtg_generate(g, Exhaustive(3)):
            self.assertLessEqual(height(term), 3)
            self.assertEqual(typecheck_term(term, g.terminals), "p")

    def test_no_terminal_derivation(self):
        terminals = Alphabet([symbol("F", "p", "p")])
        nonterminals = Alphabet([symbol("S", "p")])
        g = RegularTreeGrammar(terminals, nonterminals, (("S", apply("F", apply("S"))),), "S")
        with self.assertRaises(NoTerminalDerivation):
            rtg_generate(g, Exhaustive(3))

    def test_random_mode_is_seeded_and_terminates(self):
        g = chair_like_grammar()
        first = rtg_generate(g, Random(20, seed=4, cutoff=3))
        second = rtg_generate(g, Random(20, seed=4, cutoff=3))
        self.assertEqual(first, second)
        for term in first:
            self.assertLessEqual(height(term), 4)
            self.assertEqual(typecheck_term(term, g.terminals), "p")

    def test_random_mode_skips_unproductive_branches(self):
        # B only rewrites to itself, so G[S,B] never terminates
        terminals = Alphabet([symbol("G", "p", "p", "p"), symbol("H", "p", "p"), symbol("C", "p")])
        nonterminals = Alphabet([symbol("S", "p"), symbol("B", "p")])
        rules = (("S", apply("G", apply("S"), apply("B"))), ("S", apply("C")), ("B", apply("H", apply("B"))))
        g = RegularTreeGrammar(terminals, nonterminals, rules, "S")
        self.assertEqual(rtg_generate(g, Random(30, seed=0, cutoff=2)), [apply("C")] * 30)
        self.assertEqual(rtg_generate(g, Exhaustive(3)), [apply("C")])
        with self.assertRaises(NoTerminalDerivation):
            rtg_generate(RegularTreeGrammar(terminals, nonterminals, rules, "B"), Random(1, seed=0))

    def test_ill_typed_rule_rejected(self):
        terminals = Alphabet([symbol("F", "p", "p"), symbol("C", "q")])
        nonterminals = Alphabet([symbol("S", "p")])
        with self.assertRaises(TypeMismatch):
            RegularTreeGrammar(terminals, nonterminals, (("S", apply("F", apply("C"))),), "S")


if __name__ == "__main__":
    unittest.main()
