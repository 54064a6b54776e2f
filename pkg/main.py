import sys
import time
from typing import List

import fire
from fire.core import FireExit
from pydantic import ValidationError

from algebra.lib.evaluate import total_value
from algebra.utils.errors import IO, USAGE, InsufficientExampleSet, TemplateError, UsageError
from collage.lib.algebra import COLLAGE_ALPHABET, collage_template, eval_picture_term, ground_truth_algebra
from collage.lib.fit import FitConfig, fit_transforms, perturb_params
from collage.lib.raster import Viewport, rasterize
from collage.utils.export import export_overlay_svg, export_png_mask, export_svg
from corpus.lib.corpus_file import (corpus_kind, format_regular_corpus, format_scene_corpus, read_collage_corpus,
                                    read_corpus, read_regular_corpus, read_scene_corpus)
from corpus.lib.dfa_file import format_dfa, read_dfa
from corpus.lib.dot import dfa_to_dot
from corpus.lib.models_file import format_models, format_params, read_models, read_params
from corpus.lib.term_text import read_term
from corpus.utils.atomic import write_text
from regular.lib.canonical import canonical_dfa
from regular.lib.generate import generate_sufficient
from regular.lib.inference import infer
from regular.lib.instance import admissible_instance
from regular.lib.sufficiency import check_sufficient, format_report
from scenes.lib.evaluate import evaluate_predicates
from scenes.lib.formula import models_instance
from scenes.lib.generate import SceneGenConfig, generate_scene_corpus
from scenes.lib.grounding import corpus_objective, ground_best
from scenes.lib.models import init_models
from scenes.lib.train import TrainConfig, train
from shared import const
from shared.lprint import lprint

FORMATS = ("text", "dot", "svg")


class Cli:
    """Template-algebra toolkit: regular-language inference, collage fitting and scene grounding.

    Results go to standard output (or --out); diagnostics go to standard error.

    Args:
        seed: Seed for every random choice of the run.
        out: Write the result to this file instead of standard output.
        format: Result format, one of text, dot or svg.
    """

    def __init__(self, seed: int | None = None, out: str | None = None, format: str = "text"):
        if format not in FORMATS:
            raise UsageError(f"Unknown format '{format}', expected one of {FORMATS}")
        self._seed = seed
        self._out = out
        self._format = format

    def _emit(self, text: str):
        if self._out:
            write_text(self._out, text)
        else:
            sys.stdout.write(text)

    def infer_dfa(self, corpus: str, dot: str | None = None):
        """Infers the automaton of a regular-language corpus."""
        start = time.perf_counter()
        m = infer(read_regular_corpus(corpus), self._seed)
        if dot:
            write_text(dot, dfa_to_dot(m))
        self._emit(dfa_to_dot(m) if self._format == "dot" else format_dfa(m))
        lprint("Info", start, f"infer-dfa: {len(m.states)} states")

    def check_sufficient(self, corpus: str, reference: str):
        """Reports the sufficiency conditions; exits 3 when one fails."""
        report = check_sufficient(read_regular_corpus(corpus), read_dfa(reference))
        self._emit(format_report(report))
        if not report["sufficient"]:
            failing = [name for name, verdict in report["conditions"].items() if not verdict["passed"]]
            raise InsufficientExampleSet(f"Conditions {', '.join(failing)} fail")

    def gen_dfa_corpus(self, target: str):
        """Writes a sufficient example set for the target automaton's language."""
        s = generate_sufficient(canonical_dfa(read_dfa(target)), self._seed)
        self._emit(format_regular_corpus(s))

    def eval(self, corpus: str, instance: str):
        """Total value of a corpus under an instance: a DFA, trained models or collage parameters."""
        kind = corpus_kind(corpus)
        template, examples = read_corpus(corpus)
        if kind == "regular":
            alg = admissible_instance(read_dfa(instance))
        elif kind == "scene":
            alg = models_instance(read_models(instance))
        else:
            alg = template.instance({"F": read_params(instance)})
        value = total_value(alg, examples)
        self._emit(f"{str(value).lower() if isinstance(value, bool) else repr(float(value))}\n")

    def collage_render(self, term_file: str, resolution: int = const.RASTER_RESOLUTION, params: str | None = None):
        """Renders a closed collage term to SVG, or to a 1-bit PNG when --out ends in .png."""
        if not self._out:
            raise UsageError("collage-render needs --out")
        alg = ground_truth_algebra() if params is None else collage_template().instance({"F": read_params(params)})
        pic = eval_picture_term(alg, read_term(term_file, COLLAGE_ALPHABET))
        bounds = pic.bounds() or (0.0, 0.0, 1.0, 1.0)
        viewport = Viewport(min(bounds[0], 0.0), min(bounds[1], 0.0), max(bounds[2], 1.0), max(bounds[3], 1.0))
        if self._out.endswith(".png"):
            export_png_mask(rasterize(pic, viewport, resolution), self._out)
        else:
            export_svg(pic, self._out, viewport)
        lprint("Info", message=f"collage-render: {len(pic)} polygons -> {self._out}")

    def collage_fit(self, corpus: str, init: str, steps: int = 500, lr: float = 0.05, perturb: float = 0.0,
                    resolution: int = 64, overlay: str | None = None):
        """Fits the open collage operation F to a corpus, starting from the parameters in --init.

        --overlay draws the first target with its fitted approximation on top.
        """
        config = FitConfig(step=lr, max_iters=steps, resolution=resolution, seed=self._seed)
        examples = read_collage_corpus(corpus)
        start_params = read_params(init)
        if perturb:
            start_params = perturb_params(start_params, perturb, self._seed)
        params, trace = fit_transforms(config.template(), examples, start_params, config)
        self._emit(format_params(params))
        if overlay:
            fitted = eval_picture_term(collage_template().instance({"F": params}), examples[0].term.children[1])
            export_overlay_svg(examples[0].objects[0].value, fitted, overlay)
        lprint("Info", message=f"collage-fit: final loss {trace[-1]!r}")

    def scene_gen(self, scenes: int = 200, dim: int = const.SCENE_DIMENSION, noise: float = 0.05, predicates: int = 4,
                  variables: int = 2, depth: int = 3):
        """Generates a labeled scene corpus."""
        config = SceneGenConfig(num_scenes=scenes, dimension=dim, noise_sigma=noise, num_predicates=predicates,
                                num_variables=variables, formula_depth=depth, seed=self._seed)
        self._emit(format_scene_corpus(generate_scene_corpus(config)))

    def scene_train(self, corpus: str, epochs: int = 60, lr: float = 1.0, cap: int = const.GROUNDING_CAP,
                    batch: int = 32):
        """Trains one predicate model per predicate and writes them."""
        scenes = read_scene_corpus(corpus)
        config = TrainConfig(learning_rate=lr, epochs=epochs, seed=self._seed, grounding_cap=cap, batch_size=batch)
        models, trace = train(init_models(scenes.num_predicates, scenes.dimension, self._seed), scenes.examples, config)
        self._emit(format_models(models))
        lprint("Info", message=f"scene-train: objective {trace[-1]:.4f}")
        if scenes.assignment and all(ex.truth is not None for ex in scenes.examples):
            for name, (attribute, accuracy) in evaluate_predicates(models, scenes.examples, scenes.assignment).items():
                lprint("Info", message=f"scene-train: {name} ~ {attribute} accuracy {accuracy:.3f}")

    def scene_ground(self, corpus: str, models: str, cap: int = const.GROUNDING_CAP):
        """Prints the best grounding and value of every scene, then the corpus objective."""
        scenes = read_scene_corpus(corpus)
        trained = read_models(models)
        lines = []
        for i, ex in enumerate(scenes.examples):
            value, g = ground_best(trained, ex, cap)
            lines.append(f"{i}\t{value!r}\t" + " ".join(f"{name}={g[name]}" for name in ex.ctx.names()))
        lines.append(f"objective\t{corpus_objective(trained, scenes.examples, cap)!r}")
        self._emit("\n".join(lines) + "\n")


def main(argv: List[str] | None = None) -> int:
    """Runs the command line and maps failures onto exit codes."""
    try:
        fire.Fire(Cli, command=argv, name="main.py")
    except FireExit as e:
        return USAGE if e.code else 0
    except ValidationError as e:
        lprint("Error", message=f"Invalid option: {e}")
        return USAGE
    except TemplateError as e:
        lprint("Error", message=f"{type(e).__name__}: {e}")
        return e.exit_code
    except OSError as e:
        lprint("Error", message=f"{type(e).__name__}: {e}")
        return IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
