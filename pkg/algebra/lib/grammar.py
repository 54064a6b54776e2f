import itertools
import math
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Sequence, Set, Tuple, Union

from shared.helpers import make_rng
from .alphabet import Alphabet, VariableContext
from .evaluate import typecheck_term
from .term import Apply, Term, render
from ..utils.errors import NoTerminalDerivation, UsageError

Rule = Tuple[str, Term]


@dataclass(frozen=True)
class RegularTreeGrammar:
    """g = (Σ, N, R, S); nonterminals occur in right-hand sides as nullary applications."""
    terminals: Alphabet
    nonterminals: Alphabet
    rules: Tuple[Rule, ...]
    start: str

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        for entry in self.nonterminals:
            if entry.arity:
                raise ValueError(f"Nonterminal '{entry.name}' must be nullary.")
            if entry.name in self.terminals:
                raise ValueError(f"'{entry.name}' is both terminal and nonterminal.")
        if self.start not in self.nonterminals:
            raise ValueError(f"Start symbol '{self.start}' is not a nonterminal.")

        combined = self.terminals.union(self.nonterminals)
        for lhs, rhs in self.rules:
            expected = self.nonterminals[lhs].result_type
            actual = typecheck_term(rhs, combined, VariableContext())
            if actual != expected:
                raise ValueError(f"Rule {lhs} -> {render(rhs)} has type {actual}, expected {expected}.")

    def is_nonterminal(self, term: Term) -> bool:
        return isinstance(term, Apply) and not term.children and term.symbol in self.nonterminals

    def rules_for(self, lhs: str) -> List[Term]:
        return [rhs for name, rhs in self.rules if name == lhs]


class Exhaustive(NamedTuple):
    depth: int


class Random(NamedTuple):
    count: int
    seed: int | None = None
    cutoff: int = 6


GenerationMode = Union[Exhaustive, Random]


def _productive_ranks(g: RegularTreeGrammar) -> Dict[str, float]:
    """Round at which each nonterminal first derives a terminal term (inf if never)."""
    rank: Dict[str, float] = {entry.name: math.inf for entry in g.nonterminals}
    current = 0
    changed = True
    while changed:
        changed = False
        current += 1
        ready = {name for name, r in rank.items() if r < current}
        for lhs, rhs in g.rules:
            if rank[lhs] < math.inf:
                continue
            needed = {node.symbol for node in _nonterminal_leaves(g, rhs)}
            if needed <= ready:
                rank[lhs] = current
                changed = True
    return rank


def _nonterminal_leaves(g: RegularTreeGrammar, term: Term) -> List[Apply]:
    if g.is_nonterminal(term):
        return [term]
    return [leaf for child in term.children for leaf in _nonterminal_leaves(g, child)]


def _exhaustive(g: RegularTreeGrammar, depth: int) -> List[Term]:
    # table[h][A] holds the terminal terms of height ≤ h derivable from A
    names = [entry.name for entry in g.nonterminals]
    table: List[Dict[str, Set[Term]]] = []

    def expand(term: Term, budget: int, level: int, current: Dict[str, Set[Term]]) -> List[Term]:
        if g.is_nonterminal(term):
            return list(current[term.symbol] if budget == level else table[budget][term.symbol])
        if not term.children:
            return [term]
        if budget == 0:
            return []
        options = [expand(child, budget - 1, level, current) for child in term.children]
        return [Apply(term.symbol, combo) for combo in itertools.product(*options)]

    for level in range(depth + 1):
        current: Dict[str, Set[Term]] = {name: set() for name in names}
        changed = True
        # unit rules A -> B derive at the same height, so iterate to a fixpoint
        while changed:
            changed = False
            for lhs, rhs in g.rules:
                for term in expand(rhs, level, level, current):
                    if term not in current[lhs]:
                        current[lhs].add(term)
                        changed = True
        table.append(current)

    return sorted(table[depth][g.start], key=render)


def _sample(g: RegularTreeGrammar, lhs: str, depth: int, cutoff: int, rank: Dict[str, float], rng) -> Term:
    # rules reaching an unproductive nonterminal never terminate
    candidates = [rhs for rhs in g.rules_for(lhs) if all(rank[leaf.symbol] < math.inf for leaf in _nonterminal_leaves(g, rhs))]
    if depth >= cutoff:
        # only rules whose nonterminals terminate strictly sooner
        candidates = [rhs for rhs in candidates if all(rank[leaf.symbol] < rank[lhs] for leaf in _nonterminal_leaves(g, rhs))]
    if not candidates:
        raise NoTerminalDerivation(f"No rule for '{lhs}' leads to a terminal term at depth {depth}")
    rhs = candidates[int(rng.integers(len(candidates)))]
    return _instantiate(g, rhs, depth, cutoff, rank, rng)


def _instantiate(g: RegularTreeGrammar, term: Term, depth: int, cutoff: int, rank: Dict[str, float], rng) -> Term:
    if g.is_nonterminal(term):
        return _sample(g, term.symbol, depth + 1, cutoff, rank, rng)
    if not term.children:
        return term
    return Apply(term.symbol, tuple(_instantiate(g, child, depth, cutoff, rank, rng) for child in term.children))


def rtg_generate(g: RegularTreeGrammar, mode: GenerationMode) -> List[Term]:
    """Generates terminal terms of L(g).

    Exhaustive mode lists every term of height at most `depth` (operator nesting, leaves
    count 0), sorted by bracket rendering. Random mode samples `count` derivations by
    uniform rule choice; past `cutoff` nested rule applications only rules leading
    strictly closer to termination are eligible.

    Args:
        g (RegularTreeGrammar): The grammar.
        mode (GenerationMode): Exhaustive(depth) or Random(count, seed, cutoff).

    Raises:
        NoTerminalDerivation: The start symbol derives no terminal term within the bound.
        UsageError: Nonpositive bound or count.

    Returns:
        List[Term]: The generated terms.
    """
    rank = _productive_ranks(g)
    if rank[g.start] == math.inf:
        raise NoTerminalDerivation(f"Start symbol '{g.start}' derives no terminal term")

    if isinstance(mode, Exhaustive):
        if mode.depth < 1:
            raise UsageError(f"Depth bound must be at least 1, got {mode.depth}")
        terms = _exhaustive(g, mode.depth)
        if not terms:
            raise NoTerminalDerivation(f"No terminal term of height at most {mode.depth} derives from '{g.start}'")
        return terms

    if mode.count < 1:
        raise UsageError(f"Sample count must be at least 1, got {mode.count}")
    rng = make_rng(mode.seed)
    return [_sample(g, g.start, 0, mode.cutoff, rank, rng) for _ in range(mode.count)]


def min_heights(g: RegularTreeGrammar) -> Dict[str, float]:
    """Smallest height of a terminal term derivable from each nonterminal."""
    best: Dict[str, float] = {entry.name: math.inf for entry in g.nonterminals}

    def rhs_height(term: Term) -> float:
        if g.is_nonterminal(term):
            return best[term.symbol]
        if not term.children:
            return 0
        return 1 + max(rhs_height(child) for child in term.children)

    changed = True
    while changed:
        changed = False
        for lhs, rhs in g.rules:
            h = rhs_height(rhs)
            if h < best[lhs]:
                best[lhs] = h
                changed = True
    return best
