import io
import os
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout

import numpy as np

from collage.lib.algebra import GRID_PARAMS, fitting_corpus_terms, ground_truth_algebra, make_collage_example
from collage.utils.export import read_svg_polygons
from corpus.lib.corpus_file import parse_regular_corpus, read_scene_corpus, write_collage_corpus
from corpus.lib.dfa_file import format_dfa, parse_dfa, read_dfa
from corpus.lib.models_file import read_params, write_params
from corpus.utils.atomic import write_text
from main import main
from regular.lib.embedding import dfa_isomorphic
from regular.lib.sufficiency import check_sufficient
from shared import const

const.PROGRESS = False

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def fixture(name: str) -> str:
    return os.path.join(FIXTURES, name)


def run(*argv: str):
    """Runs the command line; returns the exit code and standard output."""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue()


class TestRegularCommands(unittest.TestCase):

    def test_infer_dfa(self):
        with tempfile.TemporaryDirectory() as tmp:
            dot = os.path.join(tmp, "out.dot")
            code, out = run("infer-dfa", fixture("s_star.corpus"), "--dot", dot)
            self.assertEqual(code, 0)
            with open(dot, encoding="utf-8") as handle:
                with open(fixture("s_star.dot"), encoding="utf-8") as golden:
                    self.assertEqual(handle.read(), golden.read())
        self.assertEqual(out, format_dfa(read_dfa(fixture("abstar.dfa"))))

    def test_infer_dfa_as_dot(self):
        code, out = run("--format", "dot", "infer-dfa", fixture("s_star.corpus"))
        self.assertEqual(code, 0)
        self.assertTrue(out.startswith("digraph dfa {"))

    def test_conflicting_corpus(self):
        code, out = run("infer-dfa", fixture("conflicting.corpus"))
        self.assertEqual(code, 3)
        self.assertEqual(out, "")

    def test_check_sufficient_reports_printed_set(self):
        code, out = run("check-sufficient", fixture("printed.corpus"), "--reference", fixture("abstar.dfa"))
        self.assertEqual(code, 3)
        with open(fixture("printed_report.txt"), encoding="utf-8") as golden:
            self.assertEqual(out, golden.read())

    def test_check_sufficient_passes(self):
        code, out = run("check-sufficient", fixture("s_star.corpus"), "--reference", fixture("abstar.dfa"))
        self.assertEqual(code, 0)
        self.assertTrue(out.endswith("sufficient: yes\n"))

    def test_generated_corpus_is_seeded_and_sufficient(self):
        first = run("--seed", "5", "gen-dfa-corpus", "--target", fixture("abstar.dfa"))
        second = run("gen-dfa-corpus", "--target", fixture("abstar.dfa"), "--seed", "5")
        self.assertEqual(first, second)
        self.assertEqual(first[0], 0)
        s = parse_regular_corpus(first[1])
        self.assertTrue(check_sufficient(s, read_dfa(fixture("abstar.dfa")))["sufficient"])

    def test_gen_then_infer_through_files(self):
        with tempfile.TemporaryDirectory() as tmp:
            target = os.path.join(tmp, "target.dfa")
            corpus = os.path.join(tmp, "gen.corpus")
            write_text(target, "alphabet a b c\ninitial 0\nfinal 2\ntrans 0 a 1\ntrans 1 b 2\ntrans 2 c 0\ntrans 1 a 1\n")
            self.assertEqual(run("--seed", "1", "--out", corpus, "gen-dfa-corpus", "--target", target)[0], 0)
            code, out = run("infer-dfa", corpus)
            self.assertEqual(code, 0)
            self.assertIsNotNone(dfa_isomorphic(parse_dfa(out), read_dfa(target)))

    def test_eval_under_dfa(self):
        self.assertEqual(run("eval", fixture("s_star.corpus"), "--instance", fixture("abstar.dfa")), (0, "true\n"))
        self.assertEqual(run("eval", fixture("printed.corpus"), "--instance", fixture("abstar.dfa")), (0, "false\n"))


class TestFailures(unittest.TestCase):

    def test_missing_file(self):
        self.assertEqual(run("infer-dfa", fixture("absent.corpus"))[0], 5)

    def test_parse_error(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "bad.corpus")
            write_text(path, "#kind regular\n#alphabet a\n#vars x:alpha\naccept[x ; \"a\"\n")
            self.assertEqual(run("infer-dfa", path)[0], 2)

    def test_usage_errors(self):
        self.assertEqual(run("no-such-command")[0], 1)
        self.assertEqual(run("--format", "pdf", "infer-dfa", fixture("s_star.corpus"))[0], 1)
        self.assertEqual(run("--seed", "1", "scene-gen", "--scenes", "0")[0], 1)


class TestCollageCommands(unittest.TestCase):

    def test_render_svg_and_png(self):
        with tempfile.TemporaryDirectory() as tmp:
            term = os.path.join(tmp, "grid.term")
            write_text(term, "# four squares\nF[sq,sq,sq,sq]\n")
            svg = os.path.join(tmp, "grid.svg")
            png = os.path.join(tmp, "grid.png")
            self.assertEqual(run("--out", svg, "collage-render", term)[0], 0)
            self.assertEqual(run("--out", png, "collage-render", term, "--resolution", "16")[0], 0)
            with open(svg, encoding="utf-8") as handle:
                self.assertEqual(len(read_svg_polygons(handle.read())), 4)
            self.assertTrue(os.path.getsize(png) > 0)
            self.assertEqual(run("collage-render", term)[0], 1)

    def test_eval_collage_corpus(self):
        with tempfile.TemporaryDirectory() as tmp:
            params = os.path.join(tmp, "grid.params")
            corpus = os.path.join(tmp, "one.corpus")
            write_params(GRID_PARAMS, params)
            write_text(os.path.join(tmp, "square.pic"), "poly 0.0 0.0 1.0 0.0 1.0 1.0 0.0 1.0\n")
            write_text(corpus, "#kind collage\n#vars x:p\ndelta[x,F[sq,sq,sq,sq]] ; @square.pic\n")
            self.assertEqual(run("eval", corpus, "--instance", params), (0, "0.0\n"))

    def test_fit_from_truth(self):
        truth = ground_truth_algebra()
        with tempfile.TemporaryDirectory() as tmp:
            params = os.path.join(tmp, "grid.params")
            corpus = os.path.join(tmp, "fig.corpus")
            fitted = os.path.join(tmp, "fitted.params")
            overlay = os.path.join(tmp, "overlay.svg")
            write_params(GRID_PARAMS, params)
            write_collage_corpus([make_collage_example(truth, t) for t in fitting_corpus_terms()[:2]], corpus)
            code, _ = run("--out", fitted, "collage-fit", corpus, "--init", params, "--resolution", "32",
                          "--overlay", overlay)
            self.assertEqual(code, 0)
            np.testing.assert_array_equal(read_params(fitted), GRID_PARAMS)
            self.assertTrue(os.path.getsize(overlay) > 0)


class TestSceneCommands(unittest.TestCase):

    def test_generate_train_ground(self):
        with tempfile.TemporaryDirectory() as tmp:
            corpus = os.path.join(tmp, "scenes.corpus")
            models = os.path.join(tmp, "models.txt")
            self.assertEqual(run("--seed", "2", "--out", corpus, "scene-gen", "--scenes", "8")[0], 0)
            self.assertEqual(len(read_scene_corpus(corpus).examples), 8)

            self.assertEqual(run("--seed", "1", "--out", models, "scene-train", corpus, "--epochs", "2")[0], 0)
            code, out = run("scene-ground", corpus, "--models", models)
            self.assertEqual(code, 0)
            lines = out.splitlines()
            self.assertEqual(len(lines), 9)
            self.assertTrue(lines[-1].startswith("objective\t"))

            code, value = run("eval", corpus, "--instance", models)
            self.assertEqual(code, 0)
            self.assertAlmostEqual(float(value), float(lines[-1].split("\t")[1]))

    def test_scene_gen_is_seeded(self):
        self.assertEqual(run("--seed", "3", "scene-gen", "--scenes", "3"), run("--seed", "3", "scene-gen", "--scenes", "3"))


if __name__ == "__main__":
    unittest.main()
