"""INI configuration files.

Each section fills one of the config dataclasses; keys are the dataclass
field names. Values given on the command line override the file.
"""

import configparser
import dataclasses
import os
import pathlib
import typing as t

from .exceptions import InvalidInput, MissingFile

Config = t.TypeVar("Config")


def load(path: t.Union[str, pathlib.Path]) -> configparser.ConfigParser:
    """Read an INI file."""
    parser = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as file:
            parser.read_file(file)
    except FileNotFoundError as exc:
        raise MissingFile(path, "config file") from exc
    except configparser.Error as exc:
        raise InvalidInput(f"{path}: {exc}") from exc
    return parser


def _is_optional(hint: t.Any) -> bool:
    return t.get_origin(hint) is t.Union and type(None) in t.get_args(hint)


def coerce(hint: t.Any, text: str) -> t.Any:
    """Convert text to the type of a dataclass field."""
    if _is_optional(hint):
        if text.strip().lower() in ("", "none"):
            return None
        hint = next(a for a in t.get_args(hint) if a is not type(None))
    if hint is bool:
        lower = text.strip().lower()
        if lower in ("1", "true", "yes", "on"):
            return True
        if lower in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"not a boolean: {text!r}")
    if t.get_origin(hint) is tuple:
        (item, *_) = t.get_args(hint)
        return tuple(item(x) for x in text.replace(",", " ").split())
    if hint in (int, float, str):
        return hint(text.strip())
    if hint is pathlib.Path:
        return pathlib.Path(text.strip())
    raise TypeError(f"unsupported config type: {hint}")


def section(parser: configparser.ConfigParser,
            name: str,
            kind: t.Type[Config],
            ) -> t.Dict[str, t.Any]:
    """Return the values of a section, coerced to the fields of kind."""
    if not parser.has_section(name):
        return {}
    hints = t.get_type_hints(kind)
    fields = {f.name for f in dataclasses.fields(kind)}  # type: ignore
    values = {}
    for key, text in parser.items(name):
        if key not in fields:
            raise InvalidInput(f"unknown key in [{name}]: {key}")
        try:
            values[key] = coerce(hints[key], text)
        except (TypeError, ValueError) as exc:
            raise InvalidInput(f"[{name}] {key} = {text}: {exc}") from exc
    return values


def merge(base: Config, *layers: t.Mapping[str, t.Any]) -> Config:
    """Apply layers of overrides to a config dataclass.

    Later layers win; None values are skipped so unset flags don't clobber
    config file values.
    """
    changes: t.Dict[str, t.Any] = {}
    for layer in layers:
        changes.update({k: v for k, v in layer.items() if v is not None})
    try:
        return dataclasses.replace(base, **changes)  # type: ignore
    except TypeError as exc:
        raise InvalidInput(str(exc)) from exc


def build(kind: t.Type[Config],
          parser: t.Optional[configparser.ConfigParser],
          name: str,
          flags: t.Optional[t.Mapping[str, t.Any]] = None,
          ) -> Config:
    """Build config dataclass from defaults, a file section and flags."""
    from_file = section(parser, name, kind) if parser is not None else {}
    return merge(kind(), from_file, flags or {})


def thread_limit(environ: t.Optional[t.Mapping[str, str]] = None) -> int:
    """Return the work pool cap from HAWKES_THREADS (default: CPU count)."""
    environ = os.environ if environ is None else environ
    text = environ.get("HAWKES_THREADS", "").strip()
    if not text:
        return os.cpu_count() or 1
    try:
        value = int(text)
    except ValueError as exc:
        raise InvalidInput(f"HAWKES_THREADS is not an integer: {text}") \
            from exc
    if value < 1:
        raise InvalidInput(f"HAWKES_THREADS must be at least 1: {value}")
    return value
