from dataclasses import dataclass
from typing import Any, Dict, List, NamedTuple, Sequence, Tuple

from shared import const
from .alphabet import VariableContext
from .term import Term, variables
from ..utils.errors import CapExceeded

GroundingAssignment = Dict[str, int]


class ExampleObject(NamedTuple):
    """One member of an example's object multiset; identity is the id, not the value."""
    id: int
    type: str
    value: Any


@dataclass(frozen=True)
class Example:
    """An example (φ, O) together with the context typing φ's variables."""
    term: Term
    ctx: VariableContext
    objects: Tuple[ExampleObject, ...]

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        ids = [obj.id for obj in self.objects]
        if len(set(ids)) != len(ids):
            raise ValueError(f"Object ids must be unique within an example: {ids}")
        for name in variables(self.term):
            if name not in self.ctx:
                raise ValueError(f"Variable '{name}' is not declared in the example context.")

    def object(self, object_id: int) -> ExampleObject:
        for obj in self.objects:
            if obj.id == object_id:
                return obj
        raise KeyError(object_id)


def make_objects(type_name: str, values: Sequence[Any], first_id: int = 0) -> Tuple[ExampleObject, ...]:
    """Wraps plain values as consecutively numbered objects of one type."""
    return tuple(ExampleObject(first_id + i, type_name, value) for i, value in enumerate(values))


def enumerate_groundings(ctx: VariableContext, objects: Sequence[ExampleObject], cap: int = const.GROUNDING_CAP) -> List[GroundingAssignment]:
    """Lists every injective, type-respecting assignment of objects to the variables.

    Objects are taken in id order and variables in declaration order, so the result is
    in lexicographic assignment order.

    Args:
        ctx (VariableContext): The variables X_ℓ.
        objects (Sequence[ExampleObject]): The object multiset O.
        cap (int, optional): Largest number of assignments to produce.

    Raises:
        CapExceeded: If more than `cap` assignments exist.

    Returns:
        List[GroundingAssignment]: All groundings; empty if none exists.
    """
    ordered = sorted(objects, key=lambda obj: obj.id)
    candidates = [[obj.id for obj in ordered if obj.type == type_name] for _, type_name in ctx.vars]
    names = ctx.names()
    result: List[GroundingAssignment] = []
    chosen: List[int] = []

    def extend(position: int):
        if position == len(names):
            if len(result) >= cap:
                raise CapExceeded(f"More than {cap} groundings for {len(names)} variables over {len(ordered)} objects.")
            result.append(dict(zip(names, chosen)))
            return
        for object_id in candidates[position]:
            if object_id in chosen:
                continue
            chosen.append(object_id)
            extend(position + 1)
            chosen.pop()

    extend(0)
    return result


def count_groundings(num_variables: int, num_objects: int) -> int:
    """m·(m−1)⋯(m−k+1) for k same-typed variables over m same-typed objects."""
    count = 1
    for i in range(num_variables):
        count *= max(num_objects - i, 0)
    return count
