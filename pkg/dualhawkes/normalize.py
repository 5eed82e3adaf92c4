"""Normalize argv into options and positional arguments."""

import typing as t

from .exceptions import InvalidInput
from .options import Option


class UnknownOption(InvalidInput):
    """Unrecognized option."""
    def __init__(self, option: str):
        super().__init__(option)
        self.option = option

    def __str__(self) -> str:
        return f"received unrecognized option: {self.option}"


class AmbiguousOption(UnknownOption):
    """Ambiguous long option prefix."""
    def __init__(self, prefix: str, choices: t.List[str]):
        super().__init__(prefix)
        self.prefix = prefix
        self.choices = choices

    def __str__(self) -> str:
        return (f"cannot expand ambiguous option: {self.prefix} "
                f"could be any of {', '.join(self.choices)}")


class Argv:
    """Normalized argv: options with their trailing tokens, and arguments."""
    def __init__(self) -> None:
        self.options: t.List[t.List[str]] = []
        self.arguments: t.List[str] = []
        self.current: t.List[str] = []

    def add_arg(self, arg: str) -> None:
        """Add argument to the current option, or to global arguments."""
        (self.current if self.current else self.arguments).append(arg)

    def add_opt(self, opt: str, arg: t.Optional[str] = None) -> None:
        """Start a new option; an inline argument closes it immediately."""
        self.flush()
        self.current.append(opt)
        if arg is not None:
            self.current.append(arg)
            self.flush()

    def flush(self) -> None:
        """Save current option and trailing arguments."""
        if self.current:
            self.options.append(self.current)
            self.current = []


def is_number(token: str) -> bool:
    """Check if token is a (possibly negative) number or grid like -1,0.5."""
    try:
        float(token.split(",")[0])
    except ValueError:
        return False
    return True


def complete(options: t.Container[str], names: t.Iterable[str],
             prefix: str) -> str:
    """Complete long option prefix.

    An exact match wins over longer options with the same prefix.
    """
    if prefix in options:
        return prefix
    candidates = [o for o in names if o.startswith(prefix)]
    if not candidates:
        raise UnknownOption(prefix)
    if len(candidates) > 1:
        raise AmbiguousOption(prefix, candidates)
    return candidates[0]


def normalize(params: t.Iterable[Option], argv: t.Iterable[str]) -> Argv:
    """Normalize argv.

    Handles --long, --long=value, unambiguous long prefixes, -s, -s=value,
    -svalue, and "--" (everything after it is an argument). Negative
    numbers are arguments, not options.
    """
    options = {o for p in params for o in p.optargs if o.startswith("-")}
    long_options = sorted(o for o in options if o.startswith("--"))
    normalized = Argv()
    tokens = iter(argv)

    for token in tokens:
        if token == "--":
            normalized.flush()
            normalized.arguments.extend(tokens)
        elif token.startswith("--"):
            name, sep, arg = token.partition("=")
            normalized.add_opt(complete(options, long_options, name),
                               arg if sep else None)
        elif token.startswith("-") and len(token) > 1 \
                and not is_number(token):
            name = token[:2]
            if name not in options:
                raise UnknownOption(token)
            rest = token[2:]
            normalized.add_opt(name, rest[rest.startswith("="):] or None)
        else:
            normalized.add_arg(token)

    normalized.flush()
    return normalized
