from typing import Dict, Iterable, List, Sequence, Set, Tuple

from algebra.utils.errors import SymbolNotInAlphabet

EPSILON = ""


def symbol_index(alphabet: Sequence[str]) -> Dict[str, int]:
    return {symbol: i for i, symbol in enumerate(alphabet)}


def check_word(word: str, alphabet: Sequence[str]) -> str:
    """Ensures every symbol of `word` is in the alphabet.

    Raises:
        SymbolNotInAlphabet: Names the first foreign symbol.
    """
    allowed = set(alphabet)
    for position, symbol in enumerate(word):
        if symbol not in allowed:
            raise SymbolNotInAlphabet(f"Symbol '{symbol}' at position {position} of '{word}' is not in {list(alphabet)}")
    return word


def lex_less(u: str, w: str, alphabet: Sequence[str]) -> bool:
    """Strict lexicographic order on Ξ*; a proper prefix precedes its extensions.

    Args:
        u (str): Left string.
        w (str): Right string.
        alphabet (Sequence[str]): Ξ in its total order.

    Raises:
        SymbolNotInAlphabet: Either string leaves Ξ.

    Returns:
        bool: u <_lex w.
    """
    check_word(u, alphabet)
    check_word(w, alphabet)
    index = symbol_index(alphabet)
    return [index[s] for s in u] < [index[s] for s in w]


def lex_key(alphabet: Sequence[str]):
    index = symbol_index(alphabet)
    return lambda word: [index[s] for s in word]


def shortlex_key(alphabet: Sequence[str]):
    """Length first, then lexicographic; the order of breadth-first access strings."""
    index = symbol_index(alphabet)
    return lambda word: (len(word), [index[s] for s in word])


def prefixes(words: Iterable[str]) -> Set[str]:
    """Pref(S), which always contains ε when S is nonempty."""
    result: Set[str] = set()
    for word in words:
        for end in range(len(word) + 1):
            result.add(word[:end])
    return result


def show(word: str) -> str:
    """Quoted form used in reports and corpus files; ε is `""`."""
    return f'"{word}"'


def words_up_to(alphabet: Sequence[str], length: int) -> List[str]:
    """Every string over Ξ of length at most `length`, in shortlex order."""
    result = [EPSILON]
    layer = [EPSILON]
    for _ in range(length):
        layer = [word + symbol for word in layer for symbol in alphabet]
        result.extend(layer)
    return result


def sort_words(words: Iterable[str], alphabet: Sequence[str]) -> List[str]:
    return sorted(words, key=shortlex_key(alphabet))


def split_last(word: str) -> Tuple[str, str]:
    return word[:-1], word[-1]
