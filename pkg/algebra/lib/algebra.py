import math
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Any, Callable, Iterable, List, Mapping, NamedTuple, Sequence

import numpy as np

from .alphabet import Alphabet, TypedSymbol
from ..utils.errors import UsageError

Operation = Callable[..., Any]


class Domain(NamedTuple):
    """Carrier set 𝔸_γ of one type, given by its payload kind and a membership test."""
    kind: str
    contains: Callable[[Any], bool]


class CandidateFamily(NamedTuple):
    """A parametric family ℱ_f of candidate operations for an uninterpreted symbol.

    Attributes:
        parameter_count (int | None): Length of the parameter vector, or None when the
            family is indexed by a structured object (e.g. an automaton).
        instantiate (Callable[[Any], Operation]): Maps parameters to an operation.
    """
    parameter_count: int | None
    instantiate: Callable[[Any], Operation]


def _is_real(value: Any) -> bool:
    return isinstance(value, (int, float, np.floating, np.integer)) and not isinstance(value, bool) and math.isfinite(value)


STRING = Domain("string", lambda v: isinstance(v, str))
BOOLEAN = Domain("boolean", lambda v: isinstance(v, (bool, np.bool_)))
REAL = Domain("real", _is_real)
UNIT = Domain("real", lambda v: _is_real(v) and 0.0 <= v <= 1.0)


def vector_domain(dimension: int) -> Domain:
    def contains(value: Any) -> bool:
        return isinstance(value, np.ndarray) and value.shape == (dimension,) and bool(np.all(np.isfinite(value)))
    return Domain("real-vector", contains)


OPT_MODES = ("min", "max")


@dataclass(frozen=True)
class TemplateAlgebra:
    """A Σ-algebra in which some operations may be left undefined.

    Attributes:
        alphabet (Alphabet): The typed alphabet Σ.
        domains (Mapping[str, Domain]): 𝔸_γ for every type γ.
        interpretations (Mapping[str, Operation]): f_𝒜 for the defined symbols.
        eval_type (str): The evaluation type τ.
        combine (Callable[[Sequence[Any]], Any]): ⊕ over a finite nonempty multiset of τ-values.
        opt (str): "min" or "max", the optimisation over groundings.
        eval_key (Callable[[Any], Any]): Sort key realising the linear order ≤ on 𝔸_τ.
        candidate_families (Mapping[str, CandidateFamily]): ℱ_f for every undefined f.
    """
    alphabet: Alphabet
    domains: Mapping[str, Domain]
    interpretations: Mapping[str, Operation]
    eval_type: str
    combine: Callable[[Sequence[Any]], Any]
    opt: str = "max"
    eval_key: Callable[[Any], Any] = float
    candidate_families: Mapping[str, CandidateFamily] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "domains", MappingProxyType(dict(self.domains)))
        object.__setattr__(self, "interpretations", MappingProxyType(dict(self.interpretations)))
        object.__setattr__(self, "candidate_families", MappingProxyType(dict(self.candidate_families)))

        if self.opt not in OPT_MODES:
            raise ValueError(f"opt must be one of {OPT_MODES}, got '{self.opt}'.")
        if self.eval_type not in self.domains:
            raise ValueError(f"Evaluation type '{self.eval_type}' has no domain.")
        for type_name in self.alphabet.types():
            if type_name not in self.domains:
                raise ValueError(f"Type '{type_name}' has no domain.")
        for name in list(self.interpretations) + list(self.candidate_families):
            if name not in self.alphabet:
                raise ValueError(f"'{name}' is not a symbol of the alphabet.")
        for name in self.uninterpreted():
            if name not in self.candidate_families:
                raise ValueError(f"Uninterpreted symbol '{name}' has no candidate family.")

    def uninterpreted(self) -> List[str]:
        return [entry.name for entry in self.alphabet if entry.name not in self.interpretations]

    def is_complete(self) -> bool:
        return not self.uninterpreted()

    def optimum(self, values: Iterable[Any]) -> Any:
        """opt over `values` under ≤; ties resolve to the first occurrence."""
        chooser = min if self.opt == "min" else max
        return chooser(values, key=self.eval_key)

    def with_interpretations(self, operations: Mapping[str, Operation]) -> "TemplateAlgebra":
        """Fills undefined operations. Defined operations of the template stay as they are.

        Args:
            operations (Mapping[str, Operation]): New operations by symbol name.

        Raises:
            UsageError: If a symbol is unknown or already interpreted.

        Returns:
            TemplateAlgebra: An algebra agreeing with this one on every defined operation.
        """
        for name in operations:
            if name not in self.alphabet:
                raise UsageError(f"Cannot interpret unknown symbol '{name}'.")
            if name in self.interpretations:
                raise UsageError(f"Symbol '{name}' is already interpreted by the template.")
        return replace(self, interpretations={**self.interpretations, **operations})

    def instance(self, parameters: Mapping[str, Any]) -> "TemplateAlgebra":
        """Instantiates undefined symbols from their candidate families.

        Args:
            parameters (Mapping[str, Any]): Family parameters by symbol name.

        Raises:
            UsageError: If a parameter vector has the wrong length.

        Returns:
            TemplateAlgebra: The algebra with the named holes filled.
        """
        operations = {}
        for name, params in parameters.items():
            if name not in self.candidate_families:
                raise UsageError(f"Symbol '{name}' has no candidate family.")
            family = self.candidate_families[name]
            if family.parameter_count is not None and len(params) != family.parameter_count:
                raise UsageError(f"'{name}' takes {family.parameter_count} parameters, got {len(params)}.")
            operations[name] = family.instantiate(params)
        return self.with_interpretations(operations)

    def extend(self, symbols: Sequence[TypedSymbol], operations: Mapping[str, Operation]) -> "TemplateAlgebra":
        """Adds new, interpreted symbols (used to bind objects as constants)."""
        return replace(self, alphabet=self.alphabet.union(symbols), interpretations={**self.interpretations, **operations})


def instance_complete(alg: TemplateAlgebra) -> bool:
    """Whether every symbol of the alphabet has an interpretation."""
    return alg.is_complete()
