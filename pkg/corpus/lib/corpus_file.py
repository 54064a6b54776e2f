import os
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

from algebra.lib.algebra import TemplateAlgebra
from algebra.lib.alphabet import Alphabet, VariableContext
from algebra.lib.evaluate import typecheck_term
from algebra.lib.grounding import Example, ExampleObject, make_objects
from algebra.lib.term import Term, render, variables
from algebra.utils.errors import CorpusSyntaxError, TypingError, UsageError
from collage.lib.algebra import COLLAGE_ALPHABET, PICTURE_TYPE, collage_template
from regular.lib.examples import ALPHA, REGULAR_ALPHABET, RegularExampleSet, from_example, regular_template, to_example
from scenes.lib.formula import ObjectTruth, SceneExample, scene_alphabet, scene_template
from scenes.lib.generate import ATTRIBUTES, SceneCorpus
from scenes.lib.models import predicate_names
from ..utils.atomic import write_text
from .picture_file import read_picture, write_picture
from .term_text import parse_term

KINDS = ("regular", "scene", "collage")
HEADER_KEYS = ("kind", "alphabet", "vars", "dimension", "predicates", "attributes")
HEADER = re.compile(r"#([a-z]+)(?:\s+(.*?))?\s*$")

STRING_OBJECT = re.compile(r'"([^"]*)"')
VECTOR_OBJECT = re.compile(r"\[([^\]]*)\](?:@([A-Za-z:]+))?")
PICTURE_OBJECT = re.compile(r"@(\S+)")


@dataclass
class Record:
    line: int
    term: str
    objects: str
    objects_column: int


@dataclass
class CorpusText:
    """A corpus file split into header values and raw `term ; objects` records."""
    headers: Dict[str, str] = field(default_factory=dict)
    header_lines: Dict[str, int] = field(default_factory=dict)
    records: List[Record] = field(default_factory=list)

    def require(self, key: str) -> str:
        if key not in self.headers:
            raise CorpusSyntaxError(f"Missing '#{key}' header")
        return self.headers[key]

    @property
    def kind(self) -> str:
        return self.require("kind")


def split_corpus(text: str) -> CorpusText:
    """Separates headers, comments and records.

    A line `#key value` with a known key is a header; any other `#` line is a comment.

    Raises:
        CorpusSyntaxError: Repeated headers, an unknown kind, or a record without `;`.
    """
    corpus = CorpusText()
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            match = HEADER.match(stripped)
            if match and match.group(1) in HEADER_KEYS:
                key = match.group(1)
                if key in corpus.headers:
                    raise CorpusSyntaxError(f"Repeated '#{key}' header", number)
                corpus.headers[key] = match.group(2) or ""
                corpus.header_lines[key] = number
            continue

        term, separator, objects = raw.partition(";")
        if not separator:
            raise CorpusSyntaxError("Expected ';' between the term and its objects", number, len(raw) + 1)
        corpus.records.append(Record(number, term, objects, len(term) + 2))

    if corpus.kind not in KINDS:
        raise CorpusSyntaxError(f"Unknown corpus kind '{corpus.kind}', expected one of {KINDS}", corpus.header_lines["kind"])
    return corpus


def _tokens(record: Record, pattern: re.Pattern, what: str) -> List[Tuple[re.Match, int]]:
    """Whitespace-separated object tokens with their columns."""
    result, text, pos = [], record.objects, 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            return result
        match = pattern.match(text, pos)
        if not match:
            raise CorpusSyntaxError(f"Expected {what}", record.line, record.objects_column + pos)
        result.append((match, record.objects_column + pos))
        pos = match.end()


def _parse_vars(corpus: CorpusText) -> VariableContext:
    pairs = []
    for item in corpus.headers.get("vars", "").split():
        name, _, type_name = item.partition(":")
        if not type_name:
            raise CorpusSyntaxError(f"Variable declaration '{item}' needs the form name:type", corpus.header_lines["vars"])
        pairs.append((name, type_name))
    try:
        return VariableContext(tuple(pairs))
    except ValueError as e:
        raise CorpusSyntaxError(str(e), corpus.header_lines.get("vars")) from e


def _record_term(record: Record, alphabet: Alphabet, ctx: VariableContext) -> Tuple[Term, VariableContext]:
    """Parses and typechecks a record's term; its context keeps only the variables it uses."""
    term = parse_term(record.term, None, ctx, record.line)
    local = ctx.restrict(variables(term))
    try:
        typecheck_term(term, alphabet, local)
    except TypingError as e:
        raise CorpusSyntaxError(f"Record does not typecheck: {e}", record.line) from e
    return term, local


def _format_vars(ctx_list: Sequence[VariableContext]) -> str:
    declared: Dict[str, str] = {}
    for ctx in ctx_list:
        for name, type_name in ctx:
            declared.setdefault(name, type_name)
    return " ".join(f"{name}:{declared[name]}" for name in sorted(declared))


def _read_text(path: str | os.PathLike) -> str:
    with open(path, encoding="utf-8") as handle:
        return handle.read()


# Regular-language corpora

def parse_regular_corpus(text: str) -> RegularExampleSet:
    corpus = split_corpus(text)
    if corpus.kind != "regular":
        raise CorpusSyntaxError(f"Expected a regular corpus, got '{corpus.kind}'", corpus.header_lines["kind"])
    alphabet = tuple(corpus.require("alphabet").split())
    ctx = _parse_vars(corpus)

    records = []
    for record in corpus.records:
        term, local = _record_term(record, REGULAR_ALPHABET, ctx)
        words = []
        for match, column in _tokens(record, STRING_OBJECT, 'a quoted string such as "ab" or ""'):
            word = match.group(1)
            outside = [c for c in word if c not in alphabet]
            if outside:
                raise CorpusSyntaxError(f"String \"{word}\" uses '{outside[0]}' outside the alphabet", record.line, column)
            words.append(word)
        try:
            records.append(from_example(Example(term, local, make_objects(ALPHA, words))))
        except (UsageError, ValueError) as e:
            raise CorpusSyntaxError(str(e), record.line) from e
    return RegularExampleSet(alphabet, tuple(records))


def format_regular_corpus(s: RegularExampleSet) -> str:
    lines = ["#kind regular", f"#alphabet {' '.join(s.alphabet)}", "#vars x:alpha y:alpha"]
    for record in s:
        ex = to_example(record)
        lines.append(f"{render(ex.term)} ; " + " ".join(f'"{obj.value}"' for obj in ex.objects))
    return "\n".join(lines) + "\n"


def read_regular_corpus(path: str | os.PathLike) -> RegularExampleSet:
    return parse_regular_corpus(_read_text(path))


def write_regular_corpus(s: RegularExampleSet, path: str | os.PathLike):
    write_text(path, format_regular_corpus(s))


# Scene corpora

def _parse_assignment(corpus: CorpusText, names: List[str]) -> Dict[str, Tuple[str, str]]:
    assignment = {}
    line = corpus.header_lines.get("attributes")
    for item in corpus.headers.get("attributes", "").split():
        name, _, attribute = item.partition("=")
        category, _, value = attribute.partition(":")
        if name not in names:
            raise CorpusSyntaxError(f"'{name}' is not one of the predicates {names}", line)
        if value not in ATTRIBUTES.get(category, ()):
            raise CorpusSyntaxError(f"Unknown attribute '{attribute}'", line)
        assignment[name] = (category, value)
    return assignment


def _parse_truth(labels: str, line: int, column: int) -> ObjectTruth:
    values = labels.split(":")
    if len(values) != len(ATTRIBUTES):
        raise CorpusSyntaxError(f"Truth labels need {len(ATTRIBUTES)} fields, got '{labels}'", line, column)
    for (category, allowed), value in zip(ATTRIBUTES.items(), values):
        if value not in allowed:
            raise CorpusSyntaxError(f"Unknown {category} '{value}'", line, column)
    return ObjectTruth(*values)


def parse_scene_corpus(text: str) -> SceneCorpus:
    """Reads a scene corpus.

    Raises:
        CorpusSyntaxError: Malformed records, or an object vector whose length differs from `#dimension`.
    """
    corpus = split_corpus(text)
    if corpus.kind != "scene":
        raise CorpusSyntaxError(f"Expected a scene corpus, got '{corpus.kind}'", corpus.header_lines["kind"])
    try:
        dimension = int(corpus.require("dimension"))
        num_predicates = int(corpus.require("predicates"))
    except ValueError as e:
        raise CorpusSyntaxError(f"Bad number in header: {e}") from e
    names = predicate_names(num_predicates)
    alphabet = scene_alphabet(names)
    ctx = _parse_vars(corpus)
    assignment = _parse_assignment(corpus, names)

    examples = []
    for record in corpus.records:
        term, local = _record_term(record, alphabet, ctx)
        vectors, truth = [], []
        for match, column in _tokens(record, VECTOR_OBJECT, "an object vector such as [0.5,1.0]"):
            try:
                vector = [float(token) for token in match.group(1).split(",")]
            except ValueError as e:
                raise CorpusSyntaxError(f"Bad vector entry: {e}", record.line, column) from e
            if len(vector) != dimension:
                raise CorpusSyntaxError(f"Object has dimension {len(vector)}, expected {dimension}", record.line, column)
            vectors.append(vector)
            if match.group(2):
                truth.append(_parse_truth(match.group(2), record.line, column))
        if truth and len(truth) != len(vectors):
            raise CorpusSyntaxError("Either every object of a record has truth labels or none has", record.line)
        if not vectors:
            raise CorpusSyntaxError("A scene needs at least one object", record.line)
        try:
            examples.append(SceneExample(term, local, vectors, tuple(truth) if truth else None))
        except ValueError as e:
            raise CorpusSyntaxError(str(e), record.line) from e
    return SceneCorpus(examples, assignment, dimension, num_predicates)


def _format_object(vector, truth: ObjectTruth | None) -> str:
    text = "[" + ",".join(repr(float(v)) for v in vector) + "]"
    return text + ("@" + ":".join(truth) if truth else "")


def format_scene_corpus(corpus: SceneCorpus) -> str:
    lines = ["#kind scene", f"#dimension {corpus.dimension}", f"#predicates {corpus.num_predicates}",
             f"#vars {_format_vars([ex.ctx for ex in corpus.examples])}".rstrip()]
    if corpus.assignment:
        lines.append("#attributes " + " ".join(f"{name}={c}:{v}" for name, (c, v) in corpus.assignment.items()))
    for ex in corpus.examples:
        truth = ex.truth or (None,) * len(ex.vectors)
        lines.append(f"{render(ex.term)} ; " + " ".join(_format_object(v, t) for v, t in zip(ex.vectors, truth)))
    return "\n".join(lines) + "\n"


def read_scene_corpus(path: str | os.PathLike) -> SceneCorpus:
    return parse_scene_corpus(_read_text(path))


def write_scene_corpus(corpus: SceneCorpus, path: str | os.PathLike):
    write_text(path, format_scene_corpus(corpus))


# Collage corpora

def parse_collage_corpus(text: str, base: str | os.PathLike = ".") -> List[Example]:
    """Reads a collage corpus; `@file.pic` references resolve against `base`.

    Raises:
        OSError: A referenced picture file cannot be read.
    """
    corpus = split_corpus(text)
    if corpus.kind != "collage":
        raise CorpusSyntaxError(f"Expected a collage corpus, got '{corpus.kind}'", corpus.header_lines["kind"])
    ctx = _parse_vars(corpus)

    examples = []
    for record in corpus.records:
        term, local = _record_term(record, COLLAGE_ALPHABET, ctx)
        objects = tuple(ExampleObject(i, PICTURE_TYPE, read_picture(Path(base) / match.group(1)))
                        for i, (match, _) in enumerate(_tokens(record, PICTURE_OBJECT, "a picture reference such as @target.pic")))
        examples.append(Example(term, local, objects))
    return examples


def format_collage_corpus(examples: Sequence[Example], references: Sequence[Sequence[str]]) -> str:
    lines = ["#kind collage", f"#vars {_format_vars([ex.ctx for ex in examples])}".rstrip()]
    for ex, refs in zip(examples, references):
        lines.append(f"{render(ex.term)} ; " + " ".join(f"@{ref}" for ref in refs))
    return "\n".join(lines) + "\n"


def read_collage_corpus(path: str | os.PathLike) -> List[Example]:
    return parse_collage_corpus(_read_text(path), Path(path).parent)


def write_collage_corpus(examples: Sequence[Example], path: str | os.PathLike):
    """Writes the corpus and one `<stem>.<example>.<object>.pic` picture file per object beside it."""
    target = Path(path)
    references = []
    for i, ex in enumerate(examples):
        refs = []
        for j, obj in enumerate(sorted(ex.objects, key=lambda obj: obj.id)):
            name = f"{target.stem}.{i}.{j}.pic"
            write_picture(obj.value, target.parent / name)
            refs.append(name)
        references.append(refs)
    write_text(target, format_collage_corpus(examples, references))


# Any kind

def corpus_kind(path: str | os.PathLike) -> str:
    return split_corpus(_read_text(path)).kind


def read_corpus(path: str | os.PathLike) -> Tuple[TemplateAlgebra, List[Example]]:
    """The template skeleton of the file's kind and its examples."""
    kind = corpus_kind(path)
    if kind == "regular":
        return regular_template(), [to_example(record) for record in read_regular_corpus(path)]
    if kind == "scene":
        corpus = read_scene_corpus(path)
        return scene_template(corpus.num_predicates, corpus.dimension), [ex.to_example() for ex in corpus.examples]
    return collage_template(), read_collage_corpus(path)


def write_corpus(kind: str, corpus, path: str | os.PathLike):
    """Writes a RegularExampleSet, SceneCorpus or list of collage Examples."""
    writers = {"regular": write_regular_corpus, "scene": write_scene_corpus, "collage": write_collage_corpus}
    if kind not in writers:
        raise UsageError(f"Unknown corpus kind '{kind}', expected one of {KINDS}")
    writers[kind](corpus, path)
