"""Project configuration file.

Line-oriented ``key = value`` pairs at the top, then optional sections::

    class = Heatbug
    bridged_methods = step
    objc_imports = "HeatSpace.h" <space.h>

    [typedefs]
    HeatValue = int
    maxHeat = extern const HeatValue

    [exports]
    objc_getHeat = int (HeatSpace *) heatobj getValueAtX: (int) px Y: (int) py

    [base-chain]
    SwarmObject = Object_s

    [dependencies]
    main.o = main.m Heatbug.mh HeatSpace.h
"""

from __future__ import annotations

import configparser
import re
import shlex
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import ConfigError
from .reverse import SelectorExportSpec, TypedefSpec, parse_export_decl

# Emitted verbatim into build text; never executed by this tool.
DEFAULT_TOOLS = {
    "cpp": "/usr/local/gcc2/bin/g++",
    "cc": "gcc",
    "objc": "gcc",
    "cflags": "-g",
    "optflags": "",
    "libs": "-L/usr/local/lib/gcc-lib/i686-pc-linux-gnu/2.95/ -L/usr/local/lib/libstdc++.so -lgcc -lobjc",
    "classdesc": "classdesc",
    "translator": "write_objc",
    "swarm_home": "/usr/local/swarm-2.1.1",
}

_LIST_KEYS = {"opaque_typedefs", "bridged_methods", "objc_imports", "objc_objects"}
_TOP_SECTION = "tool"
_SECTIONS = {_TOP_SECTION, "typedefs", "exports", "base-chain", "dependencies"}


@dataclass(frozen=True)
class ToolConfig:
    class_name: str | None = None
    opaque_typedefs: tuple[str, ...] = ()
    base_chain: dict[str, str] = field(default_factory=dict)
    selector_exports: tuple[SelectorExportSpec, ...] = ()
    typedef_specs: tuple[TypedefSpec, ...] = ()
    bridged_methods: tuple[str, ...] = ()
    objc_imports: tuple[str, ...] = ()
    objc_objects: tuple[str, ...] | None = None
    program: str = "main"
    application: str | None = None
    dependencies: tuple[tuple[str, tuple[str, ...]], ...] = ()
    compiler_paths: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_TOOLS))

    @property
    def opaque_names(self) -> frozenset[str]:
        """Type names treated as translatable scalars: declared opaque names plus bridged typedef aliases."""
        return frozenset(self.opaque_typedefs) | {t.alias for t in self.typedef_specs if not t.is_extern}

    def tool(self, key: str) -> str:
        return self.compiler_paths.get(key, DEFAULT_TOOLS[key])

    def with_class(self, class_name: str | None) -> ToolConfig:
        if class_name is None:
            return self
        return replace(self, class_name=class_name)


def parse_config(text: str, source: str = "<config>") -> ToolConfig:
    parser = configparser.ConfigParser(
        delimiters=("=",), interpolation=None, comment_prefixes=("#",), strict=True, empty_lines_in_values=False
    )
    parser.optionxform = str
    try:
        parser.read_string(f"[{_TOP_SECTION}]\n{text}", source=source)
    except configparser.Error as e:
        # line numbers are shifted by the synthetic top-level section header
        message = re.sub(r"line\s+(\d+)", lambda m: f"line {int(m.group(1)) - 1}", str(e))
        raise ConfigError(f"{source}: {message}") from None

    unknown = set(parser.sections()) - _SECTIONS
    if unknown:
        raise ConfigError(f"{source}: unknown section [{sorted(unknown)[0]}]")

    values: dict = {}
    tools = dict(DEFAULT_TOOLS)
    for key, raw in parser.items(_TOP_SECTION):
        value = " ".join(raw.split())
        if key == "class":
            values["class_name"] = value
        elif key in _LIST_KEYS:
            values[key] = tuple(shlex.split(value, posix=False))
        elif key in ("program", "application"):
            values[key] = value
        elif key in DEFAULT_TOOLS:
            tools[key] = value
        else:
            raise ConfigError(f"{source}: unknown key '{key}'")
    values["compiler_paths"] = tools

    if parser.has_section("typedefs"):
        values["typedef_specs"] = tuple(
            TypedefSpec(alias, " ".join(v.split())) for alias, v in parser.items("typedefs")
        )
    if parser.has_section("exports"):
        try:
            values["selector_exports"] = tuple(
                parse_export_decl(name, " ".join(v.split())) for name, v in parser.items("exports")
            )
        except ConfigError as e:
            raise ConfigError(f"{source}: [exports] {e}") from None
    if parser.has_section("base-chain"):
        values["base_chain"] = {k: v.strip() for k, v in parser.items("base-chain")}
    if parser.has_section("dependencies"):
        values["dependencies"] = tuple((k, tuple(v.split())) for k, v in parser.items("dependencies"))
    return ToolConfig(**values)


def load_config(path: str | Path | None) -> ToolConfig:
    if path is None:
        return ToolConfig()
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e.strerror}") from None
    return parse_config(text, str(path))

