from dataclasses import dataclass
from typing import Dict, Iterator, List, Tuple, Union


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Apply:
    """The formal expression f[t₁,…,tₖ]; constants have no children."""
    symbol: str
    children: Tuple["Term", ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))

    def __str__(self) -> str:
        return render(self)


Term = Union[Apply, Var]


def apply(symbol: str, *children: Term) -> Apply:
    return Apply(symbol, tuple(children))


def render(term: Term) -> str:
    """Renders a term in bracket syntax, e.g. `not[equiv[x,y]]`."""
    if isinstance(term, Var):
        return term.name
    if not term.children:
        return term.symbol
    return f"{term.symbol}[{','.join(render(child) for child in term.children)}]"


def variables(term: Term) -> List[str]:
    """Variable names of `term` in order of first occurrence."""
    seen: Dict[str, None] = {}
    for node in walk(term):
        if isinstance(node, Var):
            seen.setdefault(node.name)
    return list(seen)


def symbols(term: Term) -> List[str]:
    seen: Dict[str, None] = {}
    for node in walk(term):
        if isinstance(node, Apply):
            seen.setdefault(node.symbol)
    return list(seen)


def walk(term: Term) -> Iterator[Term]:
    """Pre-order traversal."""
    stack = [term]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Apply):
            stack.extend(reversed(node.children))


def height(term: Term) -> int:
    """Operator nesting depth; leaves have height 0."""
    if isinstance(term, Var) or not term.children:
        return 0
    return 1 + max(height(child) for child in term.children)


def rename(term: Term, mapping: Dict[str, Term]) -> Term:
    """Replaces variables (and nullary symbols) named in `mapping` by terms."""
    if isinstance(term, Var):
        return mapping.get(term.name, term)
    if not term.children:
        return mapping.get(term.symbol, term)
    return Apply(term.symbol, tuple(rename(child, mapping) for child in term.children))
