import re
from typing import List, Optional

from algebra.lib.alphabet import Alphabet, VariableContext
from algebra.lib.evaluate import typecheck_term
from algebra.lib.term import Apply, Term, Var, render
from algebra.utils.errors import CorpusSyntaxError

NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class _Reader:
    """Cursor over one line of term text; columns are 1-based."""

    def __init__(self, text: str, ctx: VariableContext, line: Optional[int], column: int):
        self.text = text
        self.ctx = ctx
        self.line = line
        self.offset = column - 1
        self.pos = 0

    def error(self, message: str) -> CorpusSyntaxError:
        return CorpusSyntaxError(message, self.line, self.offset + self.pos + 1)

    def skip_space(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_space()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, char: str):
        if self.peek() != char:
            found = f"'{self.peek()}'" if self.peek() else "end of input"
            raise self.error(f"Expected '{char}', found {found}")
        self.pos += 1

    def name(self) -> str:
        self.skip_space()
        match = NAME.match(self.text, self.pos)
        if not match:
            found = f"'{self.text[self.pos]}'" if self.pos < len(self.text) else "end of input"
            raise self.error(f"Expected a name, found {found}")
        self.pos = match.end()
        return match.group()

    def term(self) -> Term:
        name = self.name()
        if self.peek() != "[":
            return Var(name) if name in self.ctx else Apply(name)

        self.pos += 1
        children: List[Term] = [self.term()]
        while self.peek() == ",":
            self.pos += 1
            children.append(self.term())
        if self.peek() != "]":
            found = f"'{self.peek()}'" if self.peek() else "end of input"
            raise self.error(f"Expected ',' or ']', found {found}")
        self.pos += 1
        return Apply(name, tuple(children))


def parse_term(text: str, alphabet: Alphabet | None = None, ctx: VariableContext = VariableContext(),
               line: int | None = None, column: int = 1) -> Term:
    """Parses bracket syntax such as `not[equiv[x,y]]`.

    A bare name declared in `ctx` is a variable; any other bare name is a constant.

    Args:
        text (str): The term text.
        alphabet (Alphabet, optional): When given, the parsed term is typechecked against it.
        ctx (VariableContext, optional): The declared variables.
        line (int, optional): Line number reported in errors.
        column (int, optional): Column of `text[0]` in its line.

    Raises:
        CorpusSyntaxError: Malformed text, with the line and column of the problem.
        TypingError: The term does not typecheck.

    Returns:
        Term: The parsed term.
    """
    reader = _Reader(text, ctx, line, column)
    term = reader.term()
    if reader.peek():
        raise reader.error(f"Unexpected '{reader.peek()}' after the term")
    if alphabet is not None:
        typecheck_term(term, alphabet, ctx)
    return term


def render_term(term: Term) -> str:
    """The normal form: no whitespace, `name[a,b]`."""
    return render(term)


def read_term(path, alphabet: Alphabet | None = None, ctx: VariableContext = VariableContext()) -> Term:
    """Reads a file holding one term on a single line; blank and `#` lines are skipped.

    Raises:
        CorpusSyntaxError: No term, more than one term, or malformed text.
    """
    with open(path, encoding="utf-8") as handle:
        lines = [(number, raw) for number, raw in enumerate(handle.read().splitlines(), start=1)
                 if raw.strip() and not raw.lstrip().startswith("#")]
    if len(lines) != 1:
        raise CorpusSyntaxError(f"Expected exactly one term, found {len(lines)}", lines[1][0] if len(lines) > 1 else None)
    number, raw = lines[0]
    return parse_term(raw, alphabet, ctx, number)
