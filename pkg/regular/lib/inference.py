from typing import Dict, Iterable, Optional, Tuple

from algebra.utils.errors import NotRightCongruence
from shared.helpers import make_rng
from shared.lprint import lprint
from .canonical import renumber
from .dfa import Dfa
from .examples import Accept, Equiv, NotAccept, NotEquiv, RegularExampleSet, strings_of
from ..utils.strings import EPSILON, prefixes, shortlex_key
from ..utils.union_find import StringPartition, shuffled


def equiv_closure(s: RegularExampleSet) -> StringPartition:
    """The least equivalence on Strings(S) containing every Equiv pair."""
    partition = StringPartition(strings_of(s), s.alphabet)
    for record in s:
        if isinstance(record, Equiv):
            partition.union(record.first, record.second)
    return partition


def right_completion(p: StringPartition, seed: Optional[int] = None) -> StringPartition:
    """Least right-congruent extension of `p` over Pref(carrier).

    Whenever w ∼ w′ and both wξ and w′ξ are in the carrier, their classes are merged;
    the result does not depend on the order of merges. `seed` shuffles that order.

    Args:
        p (StringPartition): An equivalence on a set of strings.
        seed (int, optional): Shuffles the processing order.

    Returns:
        StringPartition: An equivalence on Pref(carrier) ∪ {ε}.
    """
    carrier = prefixes(p.carrier) | {EPSILON}
    result = StringPartition(carrier, p.alphabet)
    for word in p.carrier:
        result.union(word, p.find(word))

    rng = make_rng(seed) if seed is not None else None
    extended = [w for w in sorted(carrier, key=shortlex_key(p.alphabet)) if w]
    changed = True
    while changed:
        changed = False
        seen: Dict[Tuple[str, str], str] = {}
        for word in shuffled(extended, rng):
            key = (result.find(word[:-1]), word[-1])
            if key in seen:
                changed |= result.union(seen[key], word)
            else:
                seen[key] = word
    return result


def build_dfa(carrier: Iterable[str], p: StringPartition, final_strings: Iterable[str]) -> Dfa:
    """The quotient automaton of a prefix-closed set under a right congruence.

    States are the classes of `p`, δ(B, ξ) = B′ iff wξ ∈ B′ for some w ∈ B, the initial
    state is [ε] and a class is final iff it meets `final_strings`.

    Raises:
        ValueError: The carrier is not prefix-closed, lacks ε or differs from p's.
        NotRightCongruence: Two strings of one class step into different classes.
    """
    carrier = frozenset(carrier)
    if carrier != p.carrier:
        raise ValueError("The partition is not over the given carrier.")
    if EPSILON not in carrier:
        raise ValueError("The carrier must contain the empty string.")

    numbering = {p.find(group[0]): i for i, group in enumerate(p.classes())}

    delta: Dict[Tuple[int, str], int] = {}
    for word in sorted(carrier, key=shortlex_key(p.alphabet)):
        if not word:
            continue
        if word[:-1] not in carrier:
            raise ValueError(f"The carrier is not prefix-closed: '{word[:-1]}' is missing.")
        source, symbol, target = numbering[p.find(word[:-1])], word[-1], numbering[p.find(word)]
        if delta.get((source, symbol), target) != target:
            raise NotRightCongruence(f"Class of '{word[:-1]}' steps on '{symbol}' into two classes")
        delta[(source, symbol)] = target

    finals = frozenset(numbering[p.find(w)] for w in final_strings if w in carrier)
    quotient = Dfa(p.alphabet, frozenset(numbering.values()), delta, numbering[p.find(EPSILON)], finals)
    return renumber(quotient)


def check_consistent(s: RegularExampleSet, p: StringPartition, finals: Iterable[str]):
    """Negative examples must survive the merges forced by the Equiv links.

    Raises:
        NotRightCongruence: A NotEquiv example has two strings in one class, or a NotAccept
            string shares a class with an accepted string.
    """
    final_classes = {p.find(w) for w in finals}
    for i, record in enumerate(s):
        if isinstance(record, NotEquiv):
            for j, u in enumerate(record.words):
                for w in record.words[j + 1:]:
                    if u in p.carrier and w in p.carrier and p.same(u, w):
                        raise NotRightCongruence(f"Example {i}: the Equiv links force '{u}' ∼ '{w}'")
        elif isinstance(record, NotAccept) and record.word in p.carrier and p.find(record.word) in final_classes:
            raise NotRightCongruence(f"Example {i}: '{record.word}' is forced into an accepting class")


def infer(s: RegularExampleSet, seed: Optional[int] = None) -> Dfa:
    """Reconstructs an automaton from an example set.

    When `s` is sufficient for some L the result is isomorphic to L's canonical automaton.

    Raises:
        NotRightCongruence: The examples contradict each other.
    """
    closure = equiv_closure(s)
    completed = right_completion(closure, seed)
    finals = [record.word for record in s if isinstance(record, Accept)]
    check_consistent(s, completed, finals)
    m = build_dfa(completed.carrier, completed, finals)
    lprint("Info", message=f"infer: {len(s)} examples, {len(completed.carrier)} prefixes -> {len(m.states)} states")
    return m
