from collections import defaultdict
from typing import Dict, List, Tuple

from regular.lib.dfa import Dfa


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def dfa_to_dot(m: Dfa, name: str = "dfa") -> str:
    """Graphviz source: the initial state has an arrow from an invisible point, finals are double circles.

    Parallel transitions share one edge labelled with their symbols in alphabet order.
    """
    labels: Dict[Tuple[int, int], List[str]] = defaultdict(list)
    for symbol in m.alphabet:
        for source in sorted(m.states):
            target = m.step(source, symbol)
            if target is not None:
                labels[(source, target)].append(symbol)

    lines = [f"digraph {name} {{", "  rankdir=LR;", "  __start [shape=point];"]
    for q in sorted(m.states):
        lines.append(f'  "{q}" [shape={"doublecircle" if q in m.finals else "circle"}];')
    lines.append(f'  __start -> "{m.initial}";')
    for source, target in sorted(labels):
        lines.append(f'  "{source}" -> "{target}" [label="{_escape(",".join(labels[(source, target)]))}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
