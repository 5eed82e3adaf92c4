"""Command tree, argv dispatch and exit codes."""

import collections
import inspect
import logging
import sys
import typing as t

from . import parsers
from .exceptions import HawkesError, InvalidInput
from .normalize import UnknownOption, normalize
from .options import Option, infer_options
from .usage import usage

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID = 2

HELP = Option("help_", ["-h", "--help"], parser=parsers.Emit(True),
              description="Show this message and exit.")

ErrorHandler = t.Callable[["Command", Exception], t.NoReturn]


def exit_code(exc: Exception) -> int:
    """Return exit code for exception raised by a command."""
    return EXIT_INVALID if isinstance(exc, InvalidInput) else EXIT_FAILURE


def default_error_handler(cli: "Command", exc: Exception) -> t.NoReturn:
    """Print '<command>: <message>' to stderr and exit."""
    name = " ".join(cli.complete_name())
    print(f"{name}: {exc}", file=sys.stderr)
    sys.exit(exit_code(exc))


def configure_logging(verbose: bool = False) -> None:
    """Send log records to stderr."""
    logging.basicConfig(
        level=logging.INFO if verbose else logging.WARNING,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
        stream=sys.stderr,
    )


def unique(items: t.Iterable[Option]) -> t.List[Option]:
    """Return distinct options; later ones replace earlier ones."""
    result: t.Dict[Option, Option] = {}
    for item in items:
        result.pop(item, None)
        result[item] = item
    return list(result.values())


class Command:  # pylint: disable=too-many-instance-attributes
    """Command with options inferred from its callback, and subcommands."""
    def __init__(self,  # pylint: disable=too-many-arguments
                 callback: t.Callable[..., t.Any],
                 *,
                 name: t.Optional[str] = None,
                 description: t.Optional[str] = None,
                 params: t.Optional[t.List[t.Union[Option, str]]] = None,
                 descriptions: t.Optional[t.Mapping[str, str]] = None,
                 subcommands: t.Optional[t.Sequence["Command"]] = None,
                 error_handler: ErrorHandler = default_error_handler):
        """params overrides the inferred options if it contains "...",
        and replaces them otherwise."""
        if name is None:
            name = callback.__name__
        assert not any(c.isspace() for c in name)

        self.name = name
        self.description = description if description is not None else \
            (inspect.getdoc(callback) or "").split("\n\n")[0] or None
        self.subcommands = {s.name: s for s in subcommands or []}
        self.callback = callback
        self.error_handler = error_handler
        self.parent: t.Optional[Command] = None

        inferred = infer_options(callback, descriptions)
        filtered = [p for p in params or () if isinstance(p, Option)]
        if params is None:
            self.params = unique(inferred + [HELP])
        elif "..." in params:
            self.params = unique(inferred + filtered + [HELP])
        else:
            self.params = unique(filtered + [HELP])

        self.options = {}
        self.arguments = {}
        for param in self.params:
            for optarg in param.optargs:
                if optarg.startswith("-"):
                    self.options[optarg] = param
                else:
                    self.arguments[optarg] = param

        for sub in self.subcommands.values():
            sub.parent = self

    def complete_name(self) -> t.Tuple[str, ...]:
        """Return complete command name (includes parents)."""
        if self.parent is None:
            return (self.name,)
        return self.parent.complete_name() + (self.name,)

    def takes_params(self) -> bool:
        """Check if command takes options other than --help."""
        return any(p is not HELP for p in self.params)

    def has_subcommands(self) -> bool:
        """Check if command has subcommands."""
        return bool(self.subcommands)

    def route(self, argv: t.Sequence[str]) -> t.Tuple["Command", t.List[str]]:
        """Follow subcommand names at the start of argv."""
        command = self
        deque = collections.deque(argv)
        while deque and deque[0] in command.subcommands:
            command = command.subcommands[deque.popleft()]
        return command, list(deque)

    def parse_optargs(self, argv: t.Sequence[str]) -> t.Dict[str, t.Any]:
        """Parse options and positional arguments (subcommands removed)."""
        normalized = normalize(self.params, argv)
        args = normalized.arguments
        values: t.Dict[Option, t.List[t.Any]] = {}

        for opt, *tokens in normalized.options:
            param = self.options[opt]
            deque = collections.deque(tokens)
            values.setdefault(param, []).append(param.parser(deque).value)
            args.extend(deque)

        deque = collections.deque(args)
        for param in self.arguments.values():
            values.setdefault(param, []).append(param.parser(deque).value)
        if deque:
            raise UnknownOption(deque[0])
        return {p.dest: p.aggregator(v) for p, v in values.items()}

    def run(self, argv: t.Optional[t.Sequence[str]] = None) -> t.Any:
        """Parse argv and run the callback of the selected command.

        Errors are passed to the selected command's error handler.
        """
        if argv is None:
            argv = sys.argv[1:]
        command, rest = self.route(argv)
        try:
            optargs = command.parse_optargs(rest)
            if optargs.pop("help_", False):
                print(usage(command))
                return EXIT_OK
            args, kwargs = to_args_kwargs(optargs, command.callback)
            return command.callback(*args, **kwargs)
        except (HawkesError, OSError) as exc:
            command.error_handler(command, exc)


class MissingArgument(InvalidInput):
    """Missing argument to command."""
    def __init__(self, name: str):
        super().__init__(name)
        self.name = name

    def __str__(self) -> str:
        return f"missing argument: {self.name}"


def to_args_kwargs(optargs: t.Dict[str, t.Any],
                   function: t.Callable[..., t.Any],
                   ) -> t.Tuple[t.List[t.Any], t.Dict[str, t.Any]]:
    """Convert optargs to (args, kwargs) for function."""
    args = []
    kwargs = {}
    for name, param in inspect.signature(function).parameters.items():
        value = optargs.get(name, param.default)
        if value is param.empty:
            raise MissingArgument(name)
        if param.kind in (param.POSITIONAL_ONLY, param.POSITIONAL_OR_KEYWORD):
            args.append(value)
        elif param.kind == param.KEYWORD_ONLY:
            kwargs[name] = value
    return args, kwargs
