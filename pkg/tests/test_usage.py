# pylint: disable=disallowed-name
"""Test dualhawkes.usage."""

import string

import pytest

from dualhawkes import parsers as p
from dualhawkes.cli import Command
from dualhawkes.options import Option
from dualhawkes.usage import render_option, usage, wrapped_list


def callback() -> None:
    """Does nothing."""


def callback_without_docstring() -> None:  # noqa; # pylint: disable=missing-function-docstring
    ...


callback_without_docstring()


def test_usage_with_params() -> None:
    """usage(...) should contain description of options."""
    cli = Command(
        callback,
        name="test-cli",
        description="Test command.",
        params=[
            Option("foo", parser=p.One(str)),
            Option("aaa", ["-a", "--aaa"], p.One(str),
                   description="Set aaa."),
            Option("ahh", ["--ahh"], p.One(str), description="Set ahh."),
            Option("baa", ["--baa", "-b"], p.One(str),
                   description="Set baa."),
            Option("bar", ["--bar"], p.One(int), default=3),
            Option("baz", ["--baz"], p.One(str)),
        ],
    )
    assert usage(cli) == """usage:  test-cli [options] <foo:str>

Test command.

options:
    -a, --aaa <str>
        Set aaa.
    --ahh <str>
        Set ahh.
    -b, --baa <str>
        Set baa.
    --bar <int>
        [default: 3]
    --baz <str>
    -h, --help
        Show this message and exit."""


@pytest.mark.parametrize("default,expected", [
    (0, "--seed <int>\n    Seed. [default: 0]"),
    (None, "--seed <int>\n    Seed."),
    (False, "--seed <int>\n    Seed."),
])
def test_render_option_defaults(default: object, expected: str) -> None:
    """Zero is a default worth showing; None and False aren't."""
    option = Option("seed", ["--seed"], p.One(int), description="Seed.",
                    default=default)
    assert render_option(option) == expected


def test_render_positional_argument() -> None:
    """Positional arguments aren't listed as options."""
    assert render_option(Option("traces", ["traces"])) is None


def test_usage_with_subcommands() -> None:
    """usage(...) should contain description of subcommands."""
    bar = Command(callback, name="bar", description="Bar subcommand")
    baz = Command(callback, name="baz", description="Baz subcommand")
    foo = Command(callback, name="foo", description="Foo command.",
                  subcommands=[bar, baz])
    assert usage(foo) == """usage:  foo <command> ...

Foo command.

commands:
    bar, baz

    bar     Bar subcommand
    baz     Baz subcommand"""


def test_usage_with_header_and_footer() -> None:
    """usage(...) should contain header and footer."""
    cli = Command(callback, name="test-cli", description="Test command")
    assert usage(cli, header="Hello.", footer="Bye.") == """usage:  test-cli

Hello.

Bye."""


def test_usage_with_multiple_examples() -> None:
    """usage(...) should have properly indented example lines."""
    bar = Command(callback, name="bar", description="Bar subcommand")
    foo = Command(
        callback,
        name="foo",
        description="Foo command.",
        params=[Option("help_", ["-?", "-h"], parser=p.Emit(True))],
        subcommands=[bar],
    )
    assert usage(foo).startswith("""usage:  foo [options]
        foo <command> ...""")


def test_usage_with_really_long_list_of_commands(
        monkeypatch: pytest.MonkeyPatch) -> None:
    """usage(...) should break line."""
    monkeypatch.setenv("COLUMNS", "80")

    def make_subcli(name: str) -> Command:
        return Command(callback, name=name, description="Test subcommand")

    cli = Command(
        callback,
        name="test-cli",
        description="Test command",
        subcommands=[make_subcli(3*a) for a in string.ascii_lowercase],
    )
    assert usage(cli).startswith("""usage:  test-cli <command> ...

Test command

commands:
    aaa, bbb, ccc, ddd, eee, fff, ggg, hhh, iii, jjj, kkk, lll, mmm,
    nnn, ooo, ppp, qqq, rrr, sss, ttt, uuu, vvv, www, xxx, yyy, zzz

    aaa""")


def test_wrapped_list_single_item() -> None:
    """One item is just indented."""
    assert wrapped_list("simulate") == "    simulate"


def test_usage_on_subcommand() -> None:
    """usage(...) example line should contain subcommand name."""
    bar = Command(callback, name="bar", description="Bar subcommand")
    Command(callback, name="foo", description="Foo command",
            subcommands=[bar])
    assert usage(bar).startswith("""usage:  foo bar

Bar subcommand""")


def test_usage_with_no_description() -> None:
    """There's one blank line between usage patterns and options list."""
    def fit(steps: int) -> None:  # pylint: disable=W0613
        ...

    fit(0)
    assert usage(Command(fit)) == """usage:  fit [options]

options:
    --steps <int>
    -h, --help
        Show this message and exit."""


def test_usage_subcommand_with_no_description() -> None:
    """There's nothing after the command name (e.g. doesn't show "None")."""
    cli = Command(
        callback,
        subcommands=[
            Command(callback_without_docstring, name="foo"),
            Command(callback_without_docstring, name="bar"),
        ],
    )

    # "foo" is left justified to a multiple of 4.
    actual = usage(cli)
    assert "    foo \n    bar" in actual
    assert "None" not in actual
