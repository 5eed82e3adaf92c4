"""Usage strings."""

import inspect
import shutil
import textwrap
import typing as t

from .options import Option

if t.TYPE_CHECKING:
    from .cli import Command


def wrapped_list(head: str, *items: str) -> str:
    """Return wrapped, indented, comma-separated list of items."""
    max_width = min(70, shutil.get_terminal_size().columns) - 4

    lines = [head]
    for item in items:
        if len(lines[-1]) + 2 + len(item) < max_width:
            lines[-1] += f", {item}"
        else:
            lines[-1] += ","
            lines.append(item)
    return textwrap.indent("\n".join(lines), "    ")


def command_block(command: "Command") -> str:
    """List subcommands with their descriptions."""
    names = list(command.subcommands)
    result = f"commands:\n{wrapped_list(*names)}\n\n"
    width = max(len(c) for c in names)
    width += 4 - width % 4  # So that name column is a multiple of 4
    for sub in command.subcommands.values():
        result += f"    {sub.name.ljust(width)}"
        if sub.description:
            result += "    " + sub.description
        result += "\n"
    return result.rstrip()


def render_option(param: Option) -> t.Optional[str]:
    """Render option info string, or None for positional arguments."""
    if not param.is_option():
        return None

    flags = ", ".join(
        sorted(param.optargs, key=lambda s: (s.startswith("--"), s))
    )
    result = flags
    arg = param.parser.pretty()
    if arg:
        result += f" {arg}"
    details = param.description or ""
    if not any(param.default is x
               for x in (inspect.Parameter.empty, None, False)):
        details += f" [default: {param.default}]"
    if details.strip():
        result += f"\n{textwrap.indent(details.strip(), '    ')}"
    return result


def options_block(*params: Option) -> str:
    """Construct options info block."""
    result = "options:\n"
    for option in filter(None, map(render_option, params)):
        result += textwrap.indent(option, "    ") + "\n"
    return result.rstrip()


def usage_example(command: "Command") -> str:
    """Return usage example line (without command name)."""
    args = [
        f"<{p.dest}:{p.parser!s}>"
        for p in command.params if not p.is_option()
    ]
    return " ".join(["[options]"] + args)


def usage(command: "Command",
          header: t.Optional[str] = None,
          footer: t.Optional[str] = None,
          ) -> str:
    """Construct usage string."""
    name = " ".join(command.complete_name())
    examples = []
    if command.takes_params():
        examples.append(f"{name} {usage_example(command)}")
    if command.has_subcommands():
        examples.append(f"{name} <command> ...")
    result = "usage:  " + "\n        ".join(examples or [name])

    header = command.description if header is None else header
    if header:
        result += f"\n\n{header}"
    if command.takes_params():
        result += "\n\n" + options_block(*command.params)
    if command.has_subcommands():
        result += "\n\n" + command_block(command)
    if footer:
        result += f"\n\n{footer}"
    return result
