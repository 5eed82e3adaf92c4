"""Command options, inferred from callback signatures."""

import inspect
import pathlib
import typing as t

from . import parsers


class InvalidOption(ValueError):
    """Invalid option (e.g. contains '=' or ' ')."""
    def __init__(self, option: str):
        super().__init__(option)
        self.option = option


class UnsupportedType(TypeError):
    """No parser for type hint."""


class UnsupportedCallback(ValueError):
    """Command callback without signature."""
    def __init__(self, callback: t.Any):
        super().__init__(callback)
        self.callback = callback


Aggregator = t.Callable[[t.Sequence[t.Any]], t.Any]


def last(values: t.Sequence[t.Any]) -> t.Any:
    """Return last element of values (last occurrence of option wins)."""
    return values[-1]


class Option:  # pylint: disable=too-many-arguments
    """Command option or positional argument descriptor."""
    def __init__(self,
                 dest: str,
                 optargs: t.Optional[t.List[str]] = None,
                 parser: parsers.Parser = parsers.One(str),
                 aggregator: Aggregator = last,
                 description: t.Optional[str] = None,
                 default: t.Any = inspect.Parameter.empty):
        if optargs is None:
            optargs = [dest]
        for optarg in optargs:
            if "=" in optarg or any(c.isspace() for c in optarg):
                raise InvalidOption(optarg)

        self.dest = dest
        self.optargs = optargs
        self.parser = parser
        self.aggregator = aggregator
        self.description = description
        self.default = default

    def __eq__(self, other: object) -> bool:
        return self.dest == other.dest if isinstance(other, Option) else False

    def __hash__(self) -> int:
        return hash(self.dest)

    def is_option(self) -> bool:
        """Check if this is an option (and not a positional argument)."""
        return all(p.startswith("-") for p in self.optargs)


def option_name(dest: str) -> str:
    """Return long option for parameter name (snake_case -> --kebab-case)."""
    return "--" + dest.strip("_").replace("_", "-")


def infer_parser(hint: t.Any) -> parsers.Parser:
    """Make parser for type hint.

    Supports bool, int, float, str, Path, Optional[X], List[X],
    Tuple[X, ...] (comma-separated grid) and Literal[...].
    """
    if hint is bool:
        return parsers.flag()
    if hint in (int, float, str):
        return parsers.One(hint)
    if hint is pathlib.Path:
        return parsers.One(pathlib.Path, "path")

    origin, args = t.get_origin(hint), t.get_args(hint)
    if origin is t.Union and len(args) == 2 and type(None) in args:
        return infer_parser(next(a for a in args if a is not type(None)))
    if origin is list and len(args) == 1:
        return parsers.Repeat(infer_parser(args[0]))
    if origin is tuple and len(args) == 2 and args[1] is Ellipsis:
        return parsers.Grid(args[0])
    if origin is t.Literal:
        return parsers.Choice(*map(str, args))
    raise UnsupportedType(hint)


def infer_options(function: t.Callable[..., t.Any],
                  descriptions: t.Optional[t.Mapping[str, str]] = None,
                  ) -> t.List[Option]:
    """Infer long options from function signature.

    Throws UnsupportedCallback or UnsupportedType.
    """
    try:
        signature = inspect.signature(function)
        hints = t.get_type_hints(function)
    except (TypeError, ValueError) as exc:
        raise UnsupportedCallback(function) from exc

    descriptions = descriptions or {}
    return [
        Option(
            dest=p.name,
            optargs=[option_name(p.name)],
            parser=infer_parser(hints.get(p.name, str)),
            description=descriptions.get(p.name),
            default=p.default,
        )
        for p in signature.parameters.values()
        if p.kind not in (p.VAR_POSITIONAL, p.VAR_KEYWORD)
    ]
