import re
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple

from ..utils.errors import UnknownSymbol

NAME_PATTERN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def check_name(name: str, what: str = "name") -> str:
    if not isinstance(name, str) or not NAME_PATTERN.fullmatch(name):
        raise ValueError(f"Invalid {what} '{name}'.")
    return name


@dataclass(frozen=True)
class TypedSymbol:
    """A symbol σ: γ₁⋯γₖ → γ of a typed alphabet."""
    name: str
    arg_types: Tuple[str, ...]
    result_type: str

    def __post_init__(self):
        check_name(self.name, "symbol name")
        object.__setattr__(self, "arg_types", tuple(self.arg_types))
        for type_name in self.arg_types + (self.result_type,):
            check_name(type_name, "type name")

    @property
    def arity(self) -> int:
        return len(self.arg_types)

    def __str__(self) -> str:
        if not self.arg_types:
            return f"{self.name}: {self.result_type}"
        return f"{self.name}: {' '.join(self.arg_types)} -> {self.result_type}"


def symbol(name: str, *types: str) -> TypedSymbol:
    """Builds a symbol from its name and signature, result type last.

    Args:
        name (str): The symbol name.
        *types (str): Argument types followed by the result type.

    Returns:
        TypedSymbol: `symbol("equiv", "alpha", "alpha", "beta")` is equiv: α α → β.
    """
    if not types:
        raise ValueError(f"Symbol '{name}' needs at least a result type.")
    return TypedSymbol(name, tuple(types[:-1]), types[-1])


class Alphabet(Iterable[TypedSymbol]):
    """A typed alphabet keeping declaration order and a lookup by symbol name.

    Attributes:
        lookup (Dict[str, TypedSymbol]): Symbols by name.
        symbols (List[TypedSymbol]): Symbols in declaration order.
    """

    def __init__(self, symbols: Sequence[TypedSymbol] = ()):
        """Initialize the alphabet.

        Parameters:
            symbols (Sequence[TypedSymbol], optional): The symbols. Names must be pairwise distinct.

        Raises:
            ValueError: If two symbols share a name.
        """
        self.lookup: Dict[str, TypedSymbol] = {}
        self.symbols: List[TypedSymbol] = []

        for entry in symbols:
            if entry.name in self.lookup:
                raise ValueError(f"Addition failed: symbol '{entry.name}' already declared.")
            self.lookup[entry.name] = entry
            self.symbols.append(entry)

    def union(self, other: Iterable[TypedSymbol]) -> "Alphabet":
        """Returns a new alphabet holding the symbols of both.

        Raises:
            ValueError: If a name is declared in both with different signatures.
        """
        merged = list(self.symbols)
        for entry in other:
            if entry.name in self.lookup:
                if self.lookup[entry.name] != entry:
                    raise ValueError(f"Conflicting declarations for '{entry.name}'.")
                continue
            merged.append(entry)
        return Alphabet(merged)

    def types(self) -> List[str]:
        """Every type name mentioned by some signature, in first-use order."""
        seen: Dict[str, None] = {}
        for entry in self.symbols:
            for type_name in entry.arg_types + (entry.result_type,):
                seen.setdefault(type_name)
        return list(seen)

    def names(self) -> List[str]:
        return [entry.name for entry in self.symbols]

    def __getitem__(self, name: str) -> TypedSymbol:
        if name in self.lookup:
            return self.lookup[name]
        raise UnknownSymbol(f"Lookup failed: symbol '{name}' not in alphabet")

    def __contains__(self, name: object) -> bool:
        return name in self.lookup

    def __iter__(self) -> Iterator[TypedSymbol]:
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Alphabet) and self.symbols == other.symbols

    def __str__(self) -> str:
        return "{" + ", ".join(str(entry) for entry in self.symbols) + "}"


@dataclass(frozen=True)
class VariableContext:
    """The variable alphabet X_ℓ with its typing map.

    Attributes:
        vars (Tuple[Tuple[str, str], ...]): (name, type) pairs in declaration order.
    """
    vars: Tuple[Tuple[str, str], ...] = ()

    def __post_init__(self):
        pairs = tuple((check_name(name, "variable name"), check_name(type_name, "type name")) for name, type_name in self.vars)
        names = [name for name, _ in pairs]
        if len(set(names)) != len(names):
            raise ValueError(f"Variable names must be pairwise distinct: {names}")
        object.__setattr__(self, "vars", pairs)

    @classmethod
    def of(cls, **types: str) -> "VariableContext":
        return cls(tuple(types.items()))

    def names(self) -> List[str]:
        return [name for name, _ in self.vars]

    def type_of(self, name: str) -> str:
        for var_name, type_name in self.vars:
            if var_name == name:
                return type_name
        raise KeyError(name)

    def restrict(self, names: Iterable[str]) -> "VariableContext":
        """Keeps only the variables in `names`, preserving declaration order."""
        keep = set(names)
        return VariableContext(tuple(pair for pair in self.vars if pair[0] in keep))

    def __contains__(self, name: object) -> bool:
        return any(var_name == name for var_name, _ in self.vars)

    def __len__(self) -> int:
        return len(self.vars)

    def __iter__(self):
        return iter(self.vars)
