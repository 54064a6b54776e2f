"""Error hierarchy shared by every engine.

Each error carries the exit code the command line reports for it.
"""

from typing import Tuple

Path = Tuple[int, ...]

USAGE = 1
PARSE = 2
CONSTRAINT = 3
CAP = 4
IO = 5


def format_path(path: Path) -> str:
    return "root" if not path else ".".join(str(i) for i in path)


class TemplateError(Exception):
    exit_code = CONSTRAINT


class UsageError(TemplateError):
    exit_code = USAGE


# Typing

class TypingError(TemplateError):
    exit_code = PARSE

    def __init__(self, message: str, path: Path = ()):
        super().__init__(f"{message} (at {format_path(path)})")
        self.path = path


class UnknownSymbol(TypingError):
    pass


class ArityMismatch(TypingError):
    pass


class TypeMismatch(TypingError):
    pass


# Evaluation

class UninterpretedSymbol(TemplateError):
    pass


class DomainError(TemplateError):
    pass


class UnboundVariable(TemplateError):
    pass


class CapExceeded(TemplateError):
    exit_code = CAP


class NoGrounding(TemplateError):
    pass


class EmptyCorpus(TemplateError):
    pass


class ExampleFailed(TemplateError):
    """Wraps an error raised while valuing one member of a corpus."""

    def __init__(self, index: int, cause: TemplateError):
        super().__init__(f"Example {index}: {cause}")
        self.index = index
        self.cause = cause
        self.exit_code = cause.exit_code


class NoTerminalDerivation(TemplateError):
    pass


# Automata

class SymbolNotInAlphabet(TemplateError):
    pass


class NotRightCongruence(TemplateError):
    pass


class InsufficientExampleSet(TemplateError):
    pass


# Pictures and training

class EmptyPicture(TemplateError):
    pass


class NonFiniteLoss(TemplateError):
    pass


class GenerationStalled(TemplateError):
    pass


class MissingTruth(TemplateError):
    pass


# Files

class CorpusSyntaxError(TemplateError):
    exit_code = PARSE

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        suffix = f" ({', '.join(where)})" if where else ""
        super().__init__(f"{message}{suffix}")
        self.line = line
        self.column = column
