from dataclasses import dataclass
from typing import Iterable, List, Sequence, Set, Tuple, Union

from algebra.lib.algebra import BOOLEAN, STRING, CandidateFamily, TemplateAlgebra
from algebra.lib.alphabet import Alphabet, VariableContext, symbol
from algebra.lib.grounding import Example, make_objects
from algebra.lib.term import Apply, Var, apply, render
from algebra.utils.errors import UsageError
from ..utils.strings import check_word

ALPHA = "alpha"
BETA = "beta"

REGULAR_ALPHABET = Alphabet([
    symbol("accept", ALPHA, BETA),
    symbol("equiv", ALPHA, ALPHA, BETA),
    symbol("not", BETA, BETA),
])

X, Y = Var("x"), Var("y")
ACCEPT_TERM = apply("accept", X)
NOT_ACCEPT_TERM = apply("not", ACCEPT_TERM)
EQUIV_TERM = apply("equiv", X, Y)
NOT_EQUIV_TERM = apply("not", EQUIV_TERM)


@dataclass(frozen=True)
class Accept:
    word: str


@dataclass(frozen=True)
class NotAccept:
    word: str


@dataclass(frozen=True)
class Equiv:
    """u ∼ w; the pair is unordered and stored in sorted order."""
    first: str
    second: str

    def __post_init__(self):
        if self.first == self.second:
            raise ValueError(f"Equiv needs two distinct strings, got '{self.first}' twice")
        a, b = sorted((self.first, self.second))
        object.__setattr__(self, "first", a)
        object.__setattr__(self, "second", b)


@dataclass(frozen=True)
class NotEquiv:
    """The strings are pairwise inequivalent."""
    words: Tuple[str, ...]

    def __post_init__(self):
        words = tuple(sorted(set(self.words)))
        if len(words) < 2:
            raise ValueError(f"NotEquiv needs at least two distinct strings, got {list(self.words)}")
        object.__setattr__(self, "words", words)


RegularRecord = Union[Accept, NotAccept, Equiv, NotEquiv]


@dataclass(frozen=True)
class RegularExampleSet:
    alphabet: Tuple[str, ...]
    examples: Tuple[RegularRecord, ...]

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "examples", tuple(self.examples))
        for record in self.examples:
            for word in record_words(record):
                check_word(word, self.alphabet)

    def __iter__(self):
        return iter(self.examples)

    def __len__(self) -> int:
        return len(self.examples)

    def without(self, index: int) -> "RegularExampleSet":
        return RegularExampleSet(self.alphabet, self.examples[:index] + self.examples[index + 1:])


def record_words(record: RegularRecord) -> List[str]:
    if isinstance(record, (Accept, NotAccept)):
        return [record.word]
    if isinstance(record, Equiv):
        return [record.first, record.second]
    return list(record.words)


def strings_of(s: Iterable[RegularRecord]) -> Set[str]:
    """Strings(S): the strings of positive examples; NotAccept and NotEquiv contribute nothing."""
    result: Set[str] = set()
    for record in s:
        if isinstance(record, (Accept, Equiv)):
            result.update(record_words(record))
    return result


def to_example(record: RegularRecord) -> Example:
    """The template example (φ, O) a record stands for."""
    if isinstance(record, Accept):
        term, ctx = ACCEPT_TERM, VariableContext.of(x=ALPHA)
    elif isinstance(record, NotAccept):
        term, ctx = NOT_ACCEPT_TERM, VariableContext.of(x=ALPHA)
    elif isinstance(record, Equiv):
        term, ctx = EQUIV_TERM, VariableContext.of(x=ALPHA, y=ALPHA)
    else:
        term, ctx = NOT_EQUIV_TERM, VariableContext.of(x=ALPHA, y=ALPHA)
    return Example(term, ctx, make_objects(ALPHA, record_words(record)))


def from_example(example: Example) -> RegularRecord:
    """Reads a template example back as a record.

    Raises:
        UsageError: The term is not one of the four regular-language example shapes.
    """
    words = [obj.value for obj in sorted(example.objects, key=lambda obj: obj.id)]
    shape = render(example.term)
    variables = example.ctx.names()
    if len(variables) == 1:
        term = _rename_to(example.term, {variables[0]: "x"})
        if term == ACCEPT_TERM and len(words) == 1:
            return Accept(words[0])
        if term == NOT_ACCEPT_TERM and len(words) == 1:
            return NotAccept(words[0])
    if len(variables) == 2:
        term = _rename_to(example.term, {variables[0]: "x", variables[1]: "y"})
        swapped = _rename_to(example.term, {variables[0]: "y", variables[1]: "x"})
        if EQUIV_TERM in (term, swapped) and len(words) == 2:
            return Equiv(words[0], words[1])
        if NOT_EQUIV_TERM in (term, swapped) and len(words) >= 2:
            return NotEquiv(tuple(words))
    raise UsageError(f"'{shape}' with {len(words)} strings is not a regular-language example")


def _rename_to(term, names):
    if isinstance(term, Var):
        return Var(names.get(term.name, term.name))
    return Apply(term.symbol, tuple(_rename_to(child, names) for child in term.children))


def regular_template() -> TemplateAlgebra:
    """The template with accept and equiv left open and negation fixed.

    Values are booleans ordered False < True; opt is min over groundings and ⊕ is
    conjunction. Both holes are filled from a Dfa by their candidate families.
    """
    from .instance import accept_operation, equiv_operation
    return TemplateAlgebra(
        alphabet=REGULAR_ALPHABET,
        domains={ALPHA: STRING, BETA: BOOLEAN},
        interpretations={"not": lambda b: not b},
        eval_type=BETA,
        combine=lambda values: all(values),
        opt="min",
        eval_key=int,
        candidate_families={
            "accept": CandidateFamily(None, accept_operation),
            "equiv": CandidateFamily(None, equiv_operation),
        },
    )


def example_set(alphabet: Sequence[str], records: Iterable[RegularRecord]) -> RegularExampleSet:
    return RegularExampleSet(tuple(alphabet), tuple(records))
