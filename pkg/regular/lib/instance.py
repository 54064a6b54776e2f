from typing import Callable

from algebra.lib.algebra import TemplateAlgebra
from .canonical import canonical_dfa
from .dfa import Dfa, accepts, run
from .examples import regular_template


def accept_operation(m: Dfa) -> Callable[[str], bool]:
    return lambda word: accepts(m, word)


def equiv_operation(m: Dfa) -> Callable[[str, str], bool]:
    """u ∼_L w, decided by comparing states of the canonical automaton; dead strings share the implicit class."""
    c = canonical_dfa(m)
    return lambda u, w: run(c, u) == run(c, w)


def admissible_instance(m: Dfa) -> TemplateAlgebra:
    """A_L: the template instance whose accept is L(m) and whose equiv is ∼_L(m).

    Raises:
        SymbolNotInAlphabet: At evaluation, if a string leaves Ξ.
    """
    return regular_template().instance({"accept": m, "equiv": m})
