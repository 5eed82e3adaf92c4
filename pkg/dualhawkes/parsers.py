"""Parsers for command-line option values.

A parser takes the deque of tokens that follow an option and returns a
Result. Parsers that fail raise CantParse and leave the deque untouched.
"""

import abc
import typing as t

from .exceptions import InvalidInput

Tokens = t.Deque[str]


class Result(t.NamedTuple):
    """Parsed value."""
    value: t.Any


class Parser(abc.ABC):
    """Value parser; str(parser) is the value type shown in usage."""
    def __call__(self, tokens: Tokens) -> Result:
        scratch = tokens.copy()
        result = self.parse(scratch)
        for _ in range(len(tokens) - len(scratch)):
            tokens.popleft()
        return result

    @abc.abstractmethod
    def parse(self, tokens: Tokens) -> Result:
        """Consume tokens from the front of the deque."""

    @abc.abstractmethod
    def __str__(self) -> str:
        ...

    def pretty(self, template: str = "<{}>") -> str:
        """Fill template with the type name, if there is one."""
        name = str(self)
        return template.format(name) if name else ""


class CantParse(InvalidInput):
    """Tokens don't match the parser."""
    def __init__(self, parser: Parser, tokens: t.Iterable[str]):
        self.parser = parser
        self.tokens = tuple(tokens)
        super().__init__(parser, self.tokens)

    def __str__(self) -> str:
        return f"cannot parse {self.parser} from {' '.join(self.tokens)!r}"


class TokenParser(Parser):
    """Parser that converts exactly one token."""
    def parse(self, tokens: Tokens) -> Result:
        if not tokens:
            raise CantParse(self, tokens)
        try:
            value = self.convert(tokens[0])
        except Exception as exc:
            raise CantParse(self, tokens) from exc
        tokens.popleft()
        return Result(value)

    @abc.abstractmethod
    def convert(self, token: str) -> t.Any:
        """Convert token or raise an exception."""


class One(TokenParser):
    """Token converted by a function, e.g. One(int)."""
    def __init__(self, func: t.Callable[[str], t.Any],
                 name: t.Optional[str] = None):
        self.func = func
        self.name = name or getattr(func, "__name__", "value")

    def __str__(self) -> str:
        return self.name

    def convert(self, token: str) -> t.Any:
        return self.func(token)


class Choice(TokenParser):
    """Token out of a fixed set of names (case-sensitive)."""
    def __init__(self, *choices: str):
        self.choices = choices

    def __str__(self) -> str:
        return "|".join(self.choices)

    def convert(self, token: str) -> str:
        if token not in self.choices:
            raise ValueError(token)
        return token


class Grid(TokenParser):
    """Comma-separated sweep values in one token, e.g. 0,0.5,1."""
    def __init__(self, func: t.Callable[[str], t.Any] = float):
        self.func = func

    def __str__(self) -> str:
        return f"{self.func.__name__},..."

    def convert(self, token: str) -> t.Tuple[t.Any, ...]:
        values = tuple(map(self.func, filter(None, token.split(","))))
        if not values:
            raise ValueError(token)
        return values


BOOLS = {
    **dict.fromkeys(("1", "t", "true", "y", "yes"), True),
    **dict.fromkeys(("0", "f", "false", "n", "no"), False),
}


class Bool(TokenParser):
    """yes/no, true/false, 1/0 and their initials, in any case."""
    def __str__(self) -> str:
        return "bool"

    def convert(self, token: str) -> bool:
        return BOOLS[token.lower()]


class Or(Parser):
    """First alternative that parses."""
    def __init__(self, *parsers: Parser):
        self.parsers = parsers

    def __str__(self) -> str:
        names = [n for n in map(str, self.parsers) if n]
        if not names:
            return ""
        joined = " | ".join(names)
        return joined if len(names) == len(self.parsers) else f"[{joined}]"

    def parse(self, tokens: Tokens) -> Result:
        for alternative in self.parsers:
            try:
                return alternative(tokens)
            except CantParse:
                continue
        raise CantParse(self, tokens)


class Repeat(Parser):
    """Zero or more values, collected by then (list by default)."""
    def __init__(self, parser: Parser, then: t.Callable[..., t.Any] = list):
        self.parser = parser
        self.then = then

    def __str__(self) -> str:
        return f"{self.parser}..."

    def parse(self, tokens: Tokens) -> Result:
        values = []
        progress = True
        while tokens and progress:
            before = len(tokens)
            try:
                values.append(self.parser(tokens).value)
            except CantParse:
                break
            progress = len(tokens) < before
        return Result(self.then(values))


class Emit(Parser):
    """Constant value; consumes nothing."""
    def __init__(self, value: t.Any):
        self.value = value

    def __str__(self) -> str:
        return ""

    def parse(self, tokens: Tokens) -> Result:
        return Result(self.value)


def flag() -> Parser:
    """Boolean option: bare flag means True, or an explicit bool."""
    return Or(Bool(), Emit(True))
