from typing import Dict, List, Optional, TypedDict

from algebra.lib.evaluate import eval_open
from algebra.lib.grounding import enumerate_groundings
from algebra.utils.errors import InsufficientExampleSet
from .canonical import access_strings, canonical_dfa, coreachable, is_convergence, pred_map
from .dfa import Dfa, run
from .examples import Accept, Equiv, NotEquiv, RegularExampleSet, record_words, strings_of, to_example
from .instance import admissible_instance
from ..utils.strings import EPSILON, lex_key, prefixes, show

CONDITIONS = ("1", "2a", "2b", "3", "4")


class ConditionVerdict(TypedDict):
    passed: bool
    witnesses: List[str]


class SufficiencyReport(TypedDict):
    conditions: Dict[str, ConditionVerdict]
    sufficient: bool


def _class_name(access: Dict[int, str], state: Optional[int]) -> str:
    return "[dead]" if state is None else f"[{show(access[state])}]"


def _faithful(s: RegularExampleSet, c: Dfa, live: set, witnesses: List[str]):
    alg = admissible_instance(c)
    for i, record in enumerate(s):
        dead = [w for w in record_words(record) if w != EPSILON and run(c, w) not in live]
        for word in dead:
            witnesses.append(f"example {i}: dead string {show(word)}")
        ex = to_example(record)
        # one true grounding suffices
        if not any(eval_open(alg, ex.term, ex.ctx, g, ex.objects) for g in enumerate_groundings(ex.ctx, ex.objects)):
            witnesses.append(f"example {i}: no grounding evaluates to true")


def _accepting_classes(s: RegularExampleSet, c: Dfa, access, witnesses: List[str]):
    covered = {run(c, record.word) for record in s if isinstance(record, Accept)}
    for state in sorted(c.finals):
        if state not in covered:
            witnesses.append(f"class {_class_name(access, state)}: no accepted string")


def _convergence_entries(c: Dfa, strings: set, access, witnesses: List[str]):
    pref = prefixes(strings)

    def entering(words, source, symbol):
        return {w for w in words if w and w[-1] == symbol and run(c, w[:-1]) == source}

    pred = pred_map(c)
    for state in sorted(c.states):
        if not is_convergence(c, state, pred):
            continue
        for source, symbol in sorted(pred[state]):
            in_s = entering(strings, source, symbol)
            in_p = entering(pref, source, symbol)
            if not in_s or in_s != in_p:
                missing = sorted(in_p - in_s)
                detail = f"prefixes {', '.join(show(w) for w in missing)} are not examples" if missing else "no example enters"
                witnesses.append(f"class {_class_name(access, state)} via {_class_name(access, source)}·{symbol}: {detail}")


def _equiv_chains(s: RegularExampleSet, c: Dfa, strings: set, witnesses: List[str]):
    key = lex_key(s.alphabet)
    pairs = {(r.first, r.second) for r in s if isinstance(r, Equiv)}
    pairs |= {(b, a) for a, b in pairs}
    by_class: Dict[Optional[int], List[str]] = {}
    for word in strings:
        by_class.setdefault(run(c, word), []).append(word)
    for members in by_class.values():
        members.sort(key=key)
        for position, word in enumerate(members[1:], start=1):
            if not any((u, word) in pairs for u in members[:position]):
                witnesses.append(f"string {show(word)}: no smaller equivalent string is linked by an Equiv example")


def _separations(s: RegularExampleSet, c: Dfa, live: set, access, witnesses: List[str]):
    groups = []
    for record in s:
        if isinstance(record, NotEquiv):
            counts: Dict[Optional[int], int] = {}
            for word in record.words:
                state = run(c, word)
                counts[state] = counts.get(state, 0) + 1
            groups.append(counts)
    classes = sorted(live)
    for i, first in enumerate(classes):
        for second in classes[i + 1:]:
            if not any(g.get(first) == 1 and g.get(second) == 1 for g in groups):
                witnesses.append(f"classes {_class_name(access, first)} and {_class_name(access, second)}: no distinguishing example")


def check_sufficient(s: RegularExampleSet, reference: Dfa) -> SufficiencyReport:
    """Checks the four sufficiency conditions of `s` against L(reference).

    Every failing condition lists witnesses: dead strings and examples without a true
    grounding for 1,
    uncovered accepting classes for 2a, convergence entries for 2b, strings without an
    Equiv link to a smaller equivalent for 3 and undistinguished class pairs for 4.

    Returns:
        SufficiencyReport: One verdict per condition and the overall result.
    """
    c = canonical_dfa(reference)
    live = coreachable(c) | {c.initial}
    access = access_strings(c)
    strings = strings_of(s)

    witnesses: Dict[str, List[str]] = {name: [] for name in CONDITIONS}
    _faithful(s, c, live, witnesses["1"])
    _accepting_classes(s, c, access, witnesses["2a"])
    _convergence_entries(c, strings, access, witnesses["2b"])
    _equiv_chains(s, c, strings, witnesses["3"])
    _separations(s, c, live, access, witnesses["4"])

    conditions = {name: ConditionVerdict(passed=not found, witnesses=found) for name, found in witnesses.items()}
    return SufficiencyReport(conditions=conditions, sufficient=all(v["passed"] for v in conditions.values()))


def format_report(report: SufficiencyReport) -> str:
    lines = []
    for name, verdict in report["conditions"].items():
        lines.append(f"condition {name}: {'pass' if verdict['passed'] else 'fail'}")
        lines.extend(f"  {w}" for w in verdict["witnesses"])
    lines.append(f"sufficient: {'yes' if report['sufficient'] else 'no'}")
    return "\n".join(lines) + "\n"


def require_sufficient(s: RegularExampleSet, reference: Dfa) -> SufficiencyReport:
    """Raises InsufficientExampleSet naming the first failing condition."""
    report = check_sufficient(s, reference)
    if not report["sufficient"]:
        failing = [name for name, v in report["conditions"].items() if not v["passed"]]
        first = report["conditions"][failing[0]]["witnesses"][0]
        raise InsufficientExampleSet(f"Condition {failing[0]} fails: {first}")
    return report


def prune_sufficient(s: RegularExampleSet, reference: Dfa) -> RegularExampleSet:
    """Greedily drops records, last first, while the set stays sufficient."""
    require_sufficient(s, reference)
    current = s
    for index in reversed(range(len(s))):
        candidate = current.without(index)
        if check_sufficient(candidate, reference)["sufficient"]:
            current = candidate
    return current
