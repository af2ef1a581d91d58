"""Class-description (``.cd``) text: one ``writeobjc`` action per bridged member.

The format carries member names, array extents and method prototypes.  It
does not carry field element types; as with the original translator, which
compiles the ``.cd`` file together with the class header, :func:`parse_cd`
resolves them against the parsed header.
"""

from __future__ import annotations

import re
from typing import TYPE_CHECKING

from .errors import ParseError
from .header import classify_signature, parse_arg_list, parse_type_text
from .ir import ClassDescription, FieldDescriptor, MethodDescriptor
from .lexer import squeeze

if TYPE_CHECKING:
    from .config import ToolConfig

INCLUDE_LINE = '#include "writeobjc_base.h"'


def opener_line(class_name: str) -> str:
    return f"inline void writeobjc(writeobjc_t* targ, eco_string desc,class {class_name}& arg)"


def base_cast_line(base_name: str) -> str:
    return f'writeobjc(targ,desc+"",({base_name}&)arg);'


def field_line(f: FieldDescriptor) -> str:
    if f.type.array_extents:
        first = "[0]" * len(f.type.array_extents)
        return f'writeobjc(targ,desc+".{f.name}",is_array(),arg.{f.name}{first},"{f.type.extents_text}");'
    return f'writeobjc(targ,desc+".{f.name}",arg.{f.name});'


def method_line(class_name: str, m: MethodDescriptor) -> str:
    return (
        f'writeobjc(targ,desc+".{m.name}",arg,&{class_name}::{m.name}, '
        f'"{m.return_type.spelling()}", "{m.arg_text}");'
    )


def emit_cd(cd: ClassDescription) -> str:
    lines = [INCLUDE_LINE, opener_line(cd.class_name), "{", base_cast_line(cd.base_name)]
    lines += [field_line(f) for f in cd.fields]
    lines += [method_line(cd.class_name, m) for m in cd.translated_methods]
    lines.append("}")
    return "\n".join(lines) + "\n"


_ID = r"[A-Za-z_]\w*"
_OPENER = re.compile(
    rf"^inline\s+void\s+writeobjc\s*\(\s*writeobjc_t\s*\*\s*targ\s*,\s*eco_string\s+desc\s*,"
    rf"\s*class\s+(?P<cls>{_ID})\s*&\s*arg\s*\)$"
)
_BASE = re.compile(rf'^writeobjc\(\s*targ\s*,\s*desc\s*\+\s*""\s*,\s*\(\s*(?P<base>{_ID})\s*&\s*\)\s*arg\s*\)\s*;$')
_ARRAY = re.compile(
    rf'^writeobjc\(\s*targ\s*,\s*desc\s*\+\s*"\.(?P<name>{_ID})"\s*,\s*is_array\(\)\s*,'
    rf'\s*arg\.(?P<ref>{_ID})(?P<zeros>(?:\[0\])+)\s*,\s*"(?P<ext>[^"]*)"\s*\)\s*;$'
)
_SCALAR = re.compile(rf'^writeobjc\(\s*targ\s*,\s*desc\s*\+\s*"\.(?P<name>{_ID})"\s*,\s*arg\.(?P<ref>{_ID})\s*\)\s*;$')
_METHOD = re.compile(
    rf'^writeobjc\(\s*targ\s*,\s*desc\s*\+\s*"\.(?P<name>{_ID})"\s*,\s*arg\s*,\s*&(?P<cls>{_ID})::(?P<ref>{_ID})\s*,'
    rf'\s*"(?P<ret>[^"]*)"\s*,\s*"(?P<args>[^"]*)"\s*\)\s*;$'
)
_EXTENTS = re.compile(r"^(?:\[[1-9]\d*\])+$")


def parse_cd(
    text: str,
    header: ClassDescription | None = None,
    config: ToolConfig | None = None,
    filename: str = "<input>",
) -> ClassDescription:
    """Rebuild a :class:`ClassDescription` from ``.cd`` text.

    ``header`` supplies field element types and must declare the same
    fields, in the same order, with the same extents.
    """
    opaque = tuple(config.opaque_names) if config is not None else ()

    def fail(lineno: int, message: str) -> ParseError:
        return ParseError.at(lineno, message, filename)

    lines = [(i, ln.strip()) for i, ln in enumerate(text.splitlines(), 1) if ln.strip()]
    if not lines or lines[0][1] != INCLUDE_LINE:
        raise fail(lines[0][0] if lines else 1, f"expected '{INCLUDE_LINE}'")
    if len(lines) < 2 or not (m := _OPENER.match(lines[1][1])):
        raise fail(lines[1][0] if len(lines) > 1 else 1, "expected the writeobjc function opener")
    class_name = m.group("cls")
    if len(lines) < 3 or lines[2][1] != "{":
        raise fail(lines[2][0] if len(lines) > 2 else lines[1][0], "expected '{'")
    if len(lines) < 4 or not (m := _BASE.match(lines[3][1])):
        raise fail(lines[3][0] if len(lines) > 3 else lines[2][0], "expected the base-class cast line")
    base_name = m.group("base")
    if lines[-1][1] != "}":
        raise fail(lines[-1][0], "expected closing '}'")

    fields: list[FieldDescriptor] = []
    methods: list[MethodDescriptor] = []
    seen: set[str] = set()
    for lineno, line in lines[4:-1]:
        if m := _ARRAY.match(line):
            name, ext = m.group("name"), m.group("ext")
            if m.group("ref") != name:
                raise fail(lineno, f"action for '{name}' refers to member '{m.group('ref')}'")
            if not _EXTENTS.match(ext):
                raise fail(lineno, f"malformed array extents {ext!r}")
            extents = tuple(int(n) for n in re.findall(r"\d+", ext))
            if len(m.group("zeros")) // 3 != len(extents):
                raise fail(lineno, f"element reference rank does not match extents {ext!r}")
            fields.append(_resolve_field(name, extents, len(fields), header, lineno, fail))
        elif m := _SCALAR.match(line):
            name = m.group("name")
            if m.group("ref") != name:
                raise fail(lineno, f"action for '{name}' refers to member '{m.group('ref')}'")
            fields.append(_resolve_field(name, (), len(fields), header, lineno, fail))
        elif m := _METHOD.match(line):
            name = m.group("name")
            if m.group("ref") != name or m.group("cls") != class_name:
                raise fail(lineno, f"member pointer does not match '{class_name}::{name}'")
            rtype = parse_type_text(m.group("ret"), opaque, lineno, filename)
            params = parse_arg_list(m.group("args"), opaque, lineno, filename)
            mode = classify_signature(name, rtype, params)
            methods.append(MethodDescriptor(name, rtype, params, mode, squeeze(m.group("args"))))
        elif line.startswith("writeobjc"):
            raise fail(lineno, "malformed writeobjc action")
        else:
            raise fail(lineno, f"unknown line kind: {line[:40]!r}")
        if name in seen:
            raise fail(lineno, f"duplicate member '{name}'")
        seen.add(name)

    if header is not None:
        expected = [f.name for f in header.fields]
        got = [f.name for f in fields]
        if expected != got:
            missing = [n for n in expected if n not in got]
            detail = f"missing {missing}" if missing else f"order {got} differs from header {expected}"
            raise fail(lines[-1][0], f"fields do not match the class header: {detail}")
    return ClassDescription(class_name, base_name, tuple(fields), tuple(methods))


def _resolve_field(name, extents, order, header, lineno, fail) -> FieldDescriptor:
    if header is None:
        raise fail(lineno, f"type of field '{name}' needs the class header")
    declared = header.field(name)
    if declared is None:
        raise fail(lineno, f"field '{name}' is not declared in class '{header.class_name}'")
    if declared.type.array_extents != extents:
        raise fail(
            lineno,
            f"extents of '{name}' ({''.join(f'[{n}]' for n in extents) or 'scalar'}) "
            f"differ from the header ({declared.type.extents_text or 'scalar'})",
        )
    return FieldDescriptor(name, declared.type, order)
