import unittest

from algebra.lib.evaluate import eval_open, example_value, total_value
from algebra.lib.grounding import enumerate_groundings
from algebra.utils.errors import InsufficientExampleSet, NotRightCongruence, SymbolNotInAlphabet
from regular.lib.canonical import access_strings, canonical_dfa, convergences, is_live, nerode_classes
from regular.lib.dfa import accepts, add_transition, complete_dfa, dfa_from_table, random_dfa, run
from regular.lib.embedding import dfa_isomorphic, embedding
from regular.lib.examples import (Accept, Equiv, NotAccept, NotEquiv, RegularExampleSet, from_example, strings_of,
                                  to_example)
from regular.lib.generate import generate_sufficient
from regular.lib.inference import build_dfa, equiv_closure, infer, right_completion
from regular.lib.instance import admissible_instance
from regular.lib.sufficiency import check_sufficient, format_report, prune_sufficient, require_sufficient
from regular.utils.strings import lex_less, prefixes, words_up_to
from regular.utils.union_find import StringPartition, shuffled
from shared import const
from shared.helpers import make_rng

const.PROGRESS = False

AB = ("a", "b")


def ab_star():
    """(ab)*: state 0 accepts, 0 -a-> 1 -b-> 0."""
    return dfa_from_table(AB, [(0, "a", 1), (1, "b", 0)], initial=0, finals=[0])


def a_plus_b_star():
    return add_transition(ab_star(), 1, "a", 1)


def sufficient_set():
    return RegularExampleSet(AB, (
        Accept("ab"),
        Equiv("ab", ""),
        Equiv("abab", "ab"),
        Equiv("ababa", "aba"),
        NotEquiv(("abab", "aba")),
    ))


def printed_set():
    return RegularExampleSet(AB, (
        Accept("ab"),
        NotEquiv(("ababa", "aba", "b")),
        Equiv("ab", ""),
        Equiv("abab", "ab"),
        Equiv("ababa", "aba"),
        NotAccept("abba"),
    ))


class TestStrings(unittest.TestCase):

    def test_lex_order(self):
        self.assertTrue(lex_less("", "a", AB))
        self.assertTrue(lex_less("ab", "abab", AB))
        self.assertTrue(lex_less("abb", "b", AB))
        self.assertFalse(lex_less("b", "b", AB))

    def test_lex_order_follows_alphabet(self):
        self.assertTrue(lex_less("b", "a", ("b", "a")))

    def test_foreign_symbol(self):
        with self.assertRaises(SymbolNotInAlphabet):
            lex_less("ac", "a", AB)
        with self.assertRaises(SymbolNotInAlphabet):
            run(ab_star(), "c")

    def test_prefixes(self):
        self.assertEqual(prefixes(["ab", "b"]), {"", "a", "ab", "b"})

    def test_shuffled_is_a_seeded_permutation(self):
        items = words_up_to(AB, 3)
        first = shuffled(items, make_rng(4))
        self.assertEqual(sorted(first), sorted(items))
        self.assertEqual(first, shuffled(items, make_rng(4)))
        self.assertEqual(shuffled(items, None), list(items))


class TestDfa(unittest.TestCase):

    def test_partial_run(self):
        m = ab_star()
        self.assertTrue(accepts(m, ""))
        self.assertTrue(accepts(m, "abab"))
        self.assertFalse(accepts(m, "aba"))
        self.assertIsNone(run(m, "b"))

    def test_complete_dfa_keeps_language(self):
        m = ab_star()
        total = complete_dfa(m)
        self.assertEqual(len(total.delta), len(total.states) * 2)
        for word in words_up_to(AB, 5):
            self.assertEqual(accepts(m, word), accepts(total, word))

    def test_canonical_collapses_redundancy(self):
        # two copies of the accepting state plus an unreachable and a dead state
        m = dfa_from_table(AB, [(0, "a", 1), (1, "b", 2), (2, "a", 1), (1, "a", 3), (4, "a", 0)], initial=0,
                           finals=[0, 2], states=[3, 4])
        self.assertEqual(canonical_dfa(m), ab_star())
        self.assertEqual(canonical_dfa(complete_dfa(ab_star())), ab_star())

    def test_liveness(self):
        m = ab_star()
        self.assertTrue(is_live(m, ""))
        self.assertTrue(is_live(m, "aba"))
        self.assertFalse(is_live(m, "b"))
        self.assertFalse(is_live(m, "abba"))

    def test_convergences(self):
        # [ε] is initial and entered from [a] by b
        self.assertEqual(convergences(ab_star()), [0])
        self.assertEqual(access_strings(ab_star()), {0: "", 1: "a"})

    def test_nerode_oracle_agrees_with_canonical_form(self):
        for seed in range(20):
            m = random_dfa(2 + seed % 5, AB if seed % 2 else ("a", "b", "c"), seed=seed)
            c = canonical_dfa(m)
            words = words_up_to(m.alphabet, 4)
            grouped = {}
            for word in words:
                grouped.setdefault(run(c, word), set()).add(word)
            self.assertEqual(set(nerode_classes(m, words)), {frozenset(g) for g in grouped.values()}, f"seed {seed}")

    def test_longer_suffix_bound_agrees_with_default(self):
        for seed in range(6):
            m = random_dfa(2 + seed % 2, AB, seed=seed)
            words = words_up_to(AB, 3)
            longer = nerode_classes(m, words, suffix_bound=len(m.states) ** 2 + 1)
            self.assertEqual(longer, nerode_classes(m, words), f"seed {seed}")


class TestInstance(unittest.TestCase):

    def test_records_become_examples(self):
        for record in sufficient_set():
            self.assertEqual(from_example(to_example(record)), record)

    def test_equiv_and_negation(self):
        alg = admissible_instance(ab_star())
        self.assertTrue(example_value(alg, to_example(Equiv("ab", ""))))
        self.assertFalse(example_value(alg, to_example(Equiv("ab", "a"))))
        self.assertTrue(example_value(alg, to_example(NotAccept("aba"))))
        # dead strings share one class
        self.assertTrue(example_value(alg, to_example(Equiv("b", "bb"))))

    def test_not_equiv_takes_every_pair(self):
        alg = admissible_instance(ab_star())
        self.assertTrue(example_value(alg, to_example(NotEquiv(("", "a")))))
        self.assertFalse(example_value(alg, to_example(NotEquiv(("ababa", "aba", "b")))))

    def test_strings_exclude_negative_examples(self):
        self.assertEqual(strings_of(printed_set()), {"", "ab", "abab", "aba", "ababa"})

    def test_sufficient_set_holds_in_larger_language(self):
        examples = [to_example(record) for record in sufficient_set()]
        self.assertTrue(total_value(admissible_instance(ab_star()), examples))
        self.assertTrue(total_value(admissible_instance(a_plus_b_star()), examples))


class TestSufficiency(unittest.TestCase):

    def test_sufficient_set_passes(self):
        report = check_sufficient(sufficient_set(), ab_star())
        self.assertTrue(report["sufficient"], format_report(report))

    def test_printed_set_fails_conditions_1_and_4(self):
        report = check_sufficient(printed_set(), ab_star())
        self.assertFalse(report["sufficient"])
        failing = [name for name, verdict in report["conditions"].items() if not verdict["passed"]]
        self.assertEqual(failing, ["1", "4"])
        self.assertIn('example 1: dead string "b"', report["conditions"]["1"]["witnesses"])
        self.assertFalse(any("true" in w for w in report["conditions"]["1"]["witnesses"]))

    def test_faithfulness_needs_one_true_grounding(self):
        # "" and "ab" share a class, but some chosen pair differs
        record = NotEquiv(("", "a", "ab"))
        alg = admissible_instance(ab_star())
        ex = to_example(record)
        self.assertFalse(example_value(alg, ex))
        self.assertTrue(any(eval_open(alg, ex.term, ex.ctx, g, ex.objects)
                            for g in enumerate_groundings(ex.ctx, ex.objects)))
        report = check_sufficient(RegularExampleSet(AB, (Accept("ab"), Equiv("ab", ""), record)), ab_star())
        self.assertTrue(report["conditions"]["1"]["passed"], format_report(report))

    def test_dropping_not_equiv_fails_condition_4_only(self):
        s = sufficient_set().without(4)
        report = check_sufficient(s, ab_star())
        failing = [name for name, verdict in report["conditions"].items() if not verdict["passed"]]
        self.assertEqual(failing, ["4"])
        with self.assertRaises(InsufficientExampleSet):
            require_sufficient(s, ab_star())

    def test_dropping_equiv_fails_condition_3(self):
        # abab stays a string of S but loses its link to ab
        s = RegularExampleSet(AB, (Accept("ab"), Equiv("ab", ""), Accept("abab"), Equiv("ababa", "aba"),
                                   NotEquiv(("abab", "aba"))))
        report = check_sufficient(s, ab_star())
        self.assertFalse(report["conditions"]["3"]["passed"])
        self.assertTrue(report["conditions"]["2b"]["passed"])

    def test_prune_keeps_sufficiency(self):
        pruned = prune_sufficient(generate_sufficient(ab_star(), seed=1), ab_star())
        self.assertTrue(check_sufficient(pruned, ab_star())["sufficient"])


class TestInference(unittest.TestCase):

    def test_closure(self):
        classes = equiv_closure(sufficient_set()).classes()
        self.assertEqual(classes, [["", "ab", "abab"], ["aba", "ababa"]])

    def test_right_completion_is_order_independent(self):
        closure = equiv_closure(sufficient_set())
        expected = right_completion(closure)
        for seed in range(10):
            self.assertEqual(right_completion(closure, seed), expected)
        self.assertEqual(expected.classes(), [["", "ab", "abab"], ["a", "aba", "ababa"]])

    def test_infers_ab_star(self):
        inferred = infer(sufficient_set())
        self.assertIsNotNone(dfa_isomorphic(inferred, ab_star()))
        self.assertEqual(inferred, ab_star())

    def test_not_right_congruence(self):
        p = StringPartition(["", "a", "aa"], ("a",))
        p.union("", "a")
        with self.assertRaises(NotRightCongruence):
            build_dfa(["", "a", "aa"], p, [])

    def test_contradicting_examples(self):
        s = RegularExampleSet(("a",), (Equiv("", "a"), Accept("aa"), NotEquiv(("a", "aa"))))
        with self.assertRaises(NotRightCongruence):
            infer(s)
        with self.assertRaises(NotRightCongruence):
            infer(RegularExampleSet(AB, (Accept("ab"), Equiv("", "ab"), NotAccept(""))))

    def test_generated_sets_reconstruct_their_language(self):
        for seed in range(30):
            alphabet = AB if seed % 3 else ("a", "b", "c")
            target = canonical_dfa(random_dfa(2 + seed % 5, alphabet, seed=100 + seed))
            s = generate_sufficient(target, seed=seed)
            report = check_sufficient(s, target)
            self.assertTrue(report["sufficient"], f"seed {seed}\n{format_report(report)}")
            self.assertIsNotNone(dfa_isomorphic(infer(s, seed=seed), target), f"seed {seed}")

    def test_epsilon_language(self):
        target = dfa_from_table(AB, [], initial=0, finals=[0])
        self.assertEqual(generate_sufficient(target).examples, (Accept(""),))

    def test_generation_is_seeded(self):
        self.assertEqual(generate_sufficient(ab_star(), seed=3), generate_sufficient(ab_star(), seed=3))


class TestEmbedding(unittest.TestCase):

    def test_identity(self):
        for seed in range(10):
            m = random_dfa(4, AB, seed=seed)
            self.assertEqual(embedding(m, m), {q: q for q in m.states})

    def test_sublanguage_embeds(self):
        self.assertEqual(embedding(ab_star(), a_plus_b_star()), {0: 0, 1: 1})
        self.assertIsNone(embedding(a_plus_b_star(), ab_star()))

    def test_not_isomorphic_to_total_loop(self):
        loop = dfa_from_table(AB, [(0, "a", 0), (0, "b", 0)], initial=0, finals=[0])
        self.assertIsNone(dfa_isomorphic(ab_star(), loop))
        self.assertIsNone(dfa_isomorphic(ab_star(), a_plus_b_star()))


if __name__ == "__main__":
    unittest.main()
