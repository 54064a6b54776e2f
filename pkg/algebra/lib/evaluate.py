from typing import Any, Dict, List, Mapping, Sequence, Tuple

from shared import const
from .algebra import TemplateAlgebra
from .alphabet import Alphabet, TypedSymbol, VariableContext
from .grounding import Example, ExampleObject, GroundingAssignment, enumerate_groundings
from .term import Apply, Term, Var, rename, variables
from ..utils.errors import (ArityMismatch, DomainError, EmptyCorpus, ExampleFailed, NoGrounding, TemplateError,
                            TypeMismatch, UnboundVariable, UninterpretedSymbol, UnknownSymbol, format_path)

Path = Tuple[int, ...]


def typecheck_term(term: Term, alphabet: Alphabet, ctx: VariableContext = VariableContext(), path: Path = ()) -> str:
    """Computes the type of a term over Σ ∪ X_ℓ.

    Args:
        term (Term): The term.
        alphabet (Alphabet): The typed alphabet Σ.
        ctx (VariableContext, optional): The variables X_ℓ.

    Raises:
        UnknownSymbol: A name is neither a symbol nor a declared variable.
        ArityMismatch: A symbol is applied to the wrong number of arguments.
        TypeMismatch: An argument's type differs from the signature.

    Returns:
        str: The unique result type.
    """
    if isinstance(term, Var):
        if term.name in ctx:
            return ctx.type_of(term.name)
        raise UnknownSymbol(f"Unknown variable '{term.name}'", path)

    if term.symbol not in alphabet:
        raise UnknownSymbol(f"Unknown symbol '{term.symbol}'", path)

    entry = alphabet[term.symbol]
    if len(term.children) != entry.arity:
        raise ArityMismatch(f"'{entry.name}' takes {entry.arity} arguments, got {len(term.children)}", path)

    for i, (child, expected) in enumerate(zip(term.children, entry.arg_types)):
        actual = typecheck_term(child, alphabet, ctx, path + (i,))
        if actual != expected:
            raise TypeMismatch(f"Argument {i + 1} of '{entry.name}' must be {expected}, got {actual}", path + (i,))

    return entry.result_type


def _evaluate(alg: TemplateAlgebra, term: Term, env: Mapping[str, Any], path: Path) -> Any:
    if isinstance(term, Var):
        if term.name not in env:
            raise UnboundVariable(f"Variable '{term.name}' is not grounded (at {format_path(path)})")
        return env[term.name]

    entry = alg.alphabet[term.symbol]
    if term.symbol not in alg.interpretations:
        raise UninterpretedSymbol(f"Symbol '{term.symbol}' has no interpretation (at {format_path(path)})")

    args = [_evaluate(alg, child, env, path + (i,)) for i, child in enumerate(term.children)]
    try:
        value = alg.interpretations[term.symbol](*args)
    except TemplateError:
        raise
    except (ValueError, ArithmeticError, TypeError) as e:
        raise DomainError(f"'{term.symbol}' rejected its arguments (at {format_path(path)}): {e}") from e

    domain = alg.domains[entry.result_type]
    if not domain.contains(value):
        raise DomainError(f"'{term.symbol}' produced a value outside {entry.result_type} (at {format_path(path)})")
    return value


def eval_closed(alg: TemplateAlgebra, term: Term) -> Any:
    """Evaluates a variable-free term bottom-up: val_𝒜(f[t₁,…,tₖ]) = f_𝒜(val_𝒜(t₁),…,val_𝒜(tₖ)).

    Raises:
        UninterpretedSymbol: The evaluation reached a template hole.
        DomainError: A host operation rejected its inputs.
        UnboundVariable: The term has a variable.
    """
    return _evaluate(alg, term, {}, ())


def _environment(ctx: VariableContext, g: GroundingAssignment, objects: Sequence[ExampleObject]) -> Dict[str, Any]:
    by_id = {obj.id: obj for obj in objects}
    env = {}
    for name, object_id in g.items():
        obj = by_id[object_id]
        if name in ctx and ctx.type_of(name) != obj.type:
            raise TypeMismatch(f"Variable '{name}' of type {ctx.type_of(name)} grounded to object {object_id} of type {obj.type}")
        env[name] = obj.value
    return env


def eval_open(alg: TemplateAlgebra, term: Term, ctx: VariableContext, g: GroundingAssignment, objects: Sequence[ExampleObject]) -> Any:
    """Evaluates a term with variables under the grounding `g`.

    Args:
        alg (TemplateAlgebra): A (possibly partial) algebra.
        term (Term): The term over Σ ∪ X_ℓ.
        ctx (VariableContext): The typing of X_ℓ.
        g (GroundingAssignment): Variable name to object id.
        objects (Sequence[ExampleObject]): The objects `g` refers to.

    Raises:
        UnboundVariable: A variable of `term` is not covered by `g`.

    Returns:
        Any: val_𝒜(term)(g(x₁),…,g(x_ℓ)).
    """
    missing = [name for name in variables(term) if name not in g]
    if missing:
        raise UnboundVariable(f"Variables {missing} are not grounded")
    return _evaluate(alg, term, _environment(ctx, g, objects), ())


def substitute(alg: TemplateAlgebra, term: Term, ctx: VariableContext, g: GroundingAssignment,
               objects: Sequence[ExampleObject]) -> Tuple[TemplateAlgebra, Term]:
    """Replaces every variable by a fresh constant denoting its grounded object.

    Returns:
        Tuple[TemplateAlgebra, Term]: The algebra extended by the constants and the closed term.
    """
    by_id = {obj.id: obj for obj in objects}
    symbols: List[TypedSymbol] = []
    operations = {}
    mapping = {}
    for name in variables(term):
        if name not in g:
            raise UnboundVariable(f"Variable '{name}' is not grounded")
        obj = by_id[g[name]]
        constant = f"obj_{obj.id}"
        symbols.append(TypedSymbol(constant, (), obj.type))
        operations[constant] = (lambda value: lambda: value)(obj.value)
        mapping[name] = Apply(constant)
    return alg.extend(symbols, operations), rename(term, mapping)


def example_value(alg: TemplateAlgebra, ex: Example, cap: int = const.GROUNDING_CAP) -> Any:
    """The value of an example: opt over all groundings g of val(φ)(g(x₁),…,g(x_ℓ)).

    Raises:
        NoGrounding: No injective, type-respecting grounding exists.
        CapExceeded: Too many groundings.

    Returns:
        Any: A value of the evaluation type.
    """
    groundings = enumerate_groundings(ex.ctx, ex.objects, cap)
    if not groundings:
        raise NoGrounding(f"No grounding of {len(ex.ctx)} variables in {len(ex.objects)} objects")
    env_values = (eval_open(alg, ex.term, ex.ctx, g, ex.objects) for g in groundings)
    return alg.optimum(env_values)


def total_value(alg: TemplateAlgebra, examples: Sequence[Example], cap: int = const.GROUNDING_CAP) -> Any:
    """⊕ of the example values of a corpus.

    Raises:
        EmptyCorpus: No examples.
        ExampleFailed: An example could not be valued; carries the example index.
    """
    if not examples:
        raise EmptyCorpus("Cannot aggregate an empty example corpus")

    values = []
    for i, ex in enumerate(examples):
        try:
            values.append(example_value(alg, ex, cap))
        except TemplateError as e:
            raise ExampleFailed(i, e) from e
    return alg.combine(values)
