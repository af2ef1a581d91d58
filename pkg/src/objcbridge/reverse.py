"""Objective-C class -> C++ bridge.

Starting from an existing ``@interface``, emit a layout-compatible C++ class
template, a typedef bridge header, the method-bridge pair that lets one
selector's body run in C++, and plain C functions exporting host selectors to
C++ callers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Mapping

from .errors import ConfigError, ParseError, SpecError
from .forward import mangle
from .header import is_primitive
from .lexer import Token, tokenize

if TYPE_CHECKING:
    from .config import ToolConfig

SWARM_OBJECT = "SwarmObject"
_BUILTIN = {"unsigned", "signed", "short", "long", "int", "char", "double", "float", "void"}
_BUILTIN_OR_QUALIFIER = _BUILTIN | {"const", "struct"}
ZBITS_LINE = "unsigned zbits; // from SwarmObject"


@dataclass(frozen=True)
class ObjCIvar:
    name: str
    type_text: str
    is_pointer: bool = False
    extents: tuple[int, ...] = ()
    protocol: str | None = None
    # ivars declared in one statement share an index (``int x, y;``)
    decl_index: int = 0


@dataclass(frozen=True)
class ObjCMethod:
    # ``None`` is the implicit ``id`` return of ``- step``
    return_type_text: str | None
    pieces: tuple[tuple[str, str | None, str | None], ...]
    is_class_method: bool = False
    is_varargs: bool = False

    @property
    def selector(self) -> str:
        if len(self.pieces) == 1 and self.pieces[0][2] is None:
            return self.pieces[0][0]
        return "".join(f"{kw}:" for kw, _, _ in self.pieces)

    @property
    def name(self) -> str:
        return self.pieces[0][0]

    @property
    def arguments(self) -> list[tuple[str, str]]:
        """(type_text, name) per argument; untyped arguments default to ``id``."""
        return [(t or "id", n) for _, t, n in self.pieces if n is not None]

    def render(self) -> str:
        out = "+" if self.is_class_method else "-"
        if self.return_type_text is not None:
            out += f" ({self.return_type_text})"
        if len(self.pieces) == 1 and self.pieces[0][2] is None:
            return f"{out} {self.pieces[0][0]}"
        parts = []
        for kw, t, n in self.pieces:
            parts.append(f"{kw}: ({t}) {n}" if t else f"{kw}: {n}")
        out += " " + " ".join(parts)
        if self.is_varargs:
            out += ", ..."
        return out


@dataclass(frozen=True)
class ObjCInterfaceDescription:
    class_name: str
    base_name: str
    ivars: tuple[ObjCIvar, ...] = ()
    methods: tuple[ObjCMethod, ...] = ()

    @property
    def method_selectors(self) -> list[str]:
        return [m.selector for m in self.methods]

    def find_method(self, selector: str) -> ObjCMethod | None:
        for m in self.methods:
            if selector in (m.selector, m.name) and not m.is_class_method:
                return m
        return None


@dataclass(frozen=True)
class TypedefSpec:
    alias: str
    underlying_text: str

    @property
    def is_extern(self) -> bool:
        return self.underlying_text.split()[0] == "extern"

    def render(self) -> str:
        if self.is_extern:
            return f"{self.underlying_text} {self.alias};"
        return f"typedef {self.underlying_text} {self.alias};"


@dataclass(frozen=True)
class SelectorExportSpec:
    export_function_name: str
    receiver_class: str
    selector_pieces: tuple[tuple[str, str | None, str | None], ...]
    return_type_text: str = "void"
    receiver_name: str = "obj"
    receiver_is_protocol: bool = False

    @property
    def selector(self) -> str:
        return ObjCMethod(None, self.selector_pieces).selector

    @property
    def receiver_cast(self) -> str:
        if self.receiver_is_protocol:
            return f"(id <{self.receiver_class}>)"
        return f"({self.receiver_class} *)"

    def c_params(self) -> list[tuple[str, str]]:
        return [("void *", self.receiver_name)] + [(t, n) for _, t, n in self.selector_pieces if n is not None]

    def prototype(self, type_map=lambda t: t) -> str:
        params = ", ".join(f"{type_map(t)} {n}" for t, n in self.c_params())
        return f"{type_map(self.return_type_text)} {self.export_function_name}({params})"


# -- parsing ---------------------------------------------------------------


def _type_text(tokens: list[str]) -> str:
    out = ""
    for t in tokens:
        if not out:
            out = t
        elif t in (">", ","):
            out += t
        elif out.endswith("<"):
            out += t
        else:
            out += " " + t
    return out


class _ObjCParser:
    def __init__(self, tokens: list[Token], filename: str, eof_line: int):
        self.tokens = tokens
        self.pos = 0
        self.filename = filename
        self.eof_line = eof_line

    def text(self, k: int = 0) -> str | None:
        i = self.pos + k
        return self.tokens[i].text if i < len(self.tokens) else None

    @property
    def line(self) -> int:
        return self.tokens[self.pos].line if self.pos < len(self.tokens) else self.eof_line

    def error(self, message: str) -> ParseError:
        return ParseError.at(self.line, message, self.filename)

    def next(self) -> str:
        if self.pos >= len(self.tokens):
            raise self.error("unexpected end of input (missing '@end'?)")
        self.pos += 1
        return self.tokens[self.pos - 1].text

    def expect(self, text: str) -> None:
        if self.text() != text:
            raise self.error(f"expected '{text}', found '{self.text() or 'end of input'}'")
        self.pos += 1

    def ident(self, what: str) -> str:
        tok = self.tokens[self.pos] if self.pos < len(self.tokens) else None
        if tok is None or tok.kind != "ident" or tok.text.startswith("@"):
            raise self.error(f"expected {what}, found '{tok.text if tok else 'end of input'}'")
        self.pos += 1
        return tok.text

    def protocols(self) -> str:
        self.expect("<")
        names = [self.ident("protocol name")]
        while self.text() == ",":
            self.pos += 1
            names.append(self.ident("protocol name"))
        self.expect(">")
        return ",".join(names)

    def interface(self) -> ObjCInterfaceDescription:
        while self.text() not in ("@interface", None):
            self.pos += 1
        if self.text() is None:
            raise self.error("no '@interface' found")
        self.pos += 1
        name = self.ident("class name")
        if self.text() == "(":
            raise self.error("categories are not supported")
        if self.text() != ":":
            raise self.error(f"root class '{name}' has no superclass to bridge from")
        self.pos += 1
        base = self.ident("superclass name")
        if self.text() == "<":
            self.protocols()
        ivars: list[ObjCIvar] = []
        if self.text() == "{":
            self.pos += 1
            decl = 0
            while self.text() != "}":
                if self.text() in ("@public", "@private", "@protected", "@package"):
                    self.pos += 1
                    continue
                ivars += self.ivar_decl(decl)
                decl += 1
            self.pos += 1
        names = [iv.name for iv in ivars]
        dup = {n for n in names if names.count(n) > 1}
        if dup:
            raise self.error(f"duplicate ivar {sorted(dup)[0]!r}")
        methods = []
        while self.text() != "@end":
            if self.text() is None:
                raise self.error(f"missing '@end' for '@interface {name}'")
            if self.text() in ("-", "+"):
                methods.append(self.method_decl())
            elif self.text() == "@property":
                raise self.error("@property declarations are not supported")
            else:
                raise self.error(f"unexpected '{self.text()}' in interface")
        self.pos += 1
        if "@interface" in (t.text for t in self.tokens[self.pos:]):
            raise self.error("more than one '@interface' block")
        return ObjCInterfaceDescription(name, base, tuple(ivars), tuple(methods))

    def base_type(self) -> tuple[str, str | None]:
        words = []
        while self.text() in _BUILTIN_OR_QUALIFIER:
            words.append(self.next())
        if not any(w in _BUILTIN for w in words):
            words.append(self.ident("type name"))
        protocol = None
        if self.text() == "<":
            protocol = self.protocols()
        return " ".join(w for w in words if w != "const"), protocol

    def ivar_decl(self, index: int) -> list[ObjCIvar]:
        base, protocol = self.base_type()
        out = []
        while True:
            ptr = False
            while self.text() == "*":
                if ptr:
                    raise self.error("multi-level pointers are not supported")
                ptr = True
                self.pos += 1
            name = self.ident("ivar name")
            extents = []
            while self.text() == "[":
                self.pos += 1
                n = self.next()
                if not n.isdigit() or int(n) <= 0:
                    raise self.error(f"array extent must be a positive integer literal, found '{n}'")
                extents.append(int(n))
                self.expect("]")
            out.append(ObjCIvar(name, base, ptr, tuple(extents), protocol, index))
            if self.text() == ";":
                self.pos += 1
                return out
            self.expect(",")

    def paren_type(self) -> str:
        self.expect("(")
        toks = []
        while self.text() != ")":
            if self.text() is None:
                raise self.error("unterminated type")
            toks.append(self.next())
        self.pos += 1
        return _type_text(toks)

    def method_decl(self) -> ObjCMethod:
        is_class = self.next() == "+"
        rtype = self.paren_type() if self.text() == "(" else None
        first = self.ident("selector") if self.text() != ":" else ""
        pieces = []
        varargs = False
        if self.text() != ":":
            pieces.append((first, None, None))
        else:
            keyword = first
            while True:
                self.expect(":")
                ptype = self.paren_type() if self.text() == "(" else None
                pname = self.ident("argument name")
                pieces.append((keyword, ptype, pname))
                if self.text() == ",":
                    self.pos += 1
                    self.expect("...")
                    varargs = True
                    break
                if self.text() == ":":
                    keyword = ""
                elif self.text() not in (";", "{", None) and self.text(1) == ":":
                    keyword = self.ident("selector keyword")
                else:
                    break
        if self.text() != ";":
            raise self.error(f"expected ';' after method declaration, found '{self.text()}'")
        self.pos += 1
        return ObjCMethod(rtype, tuple(pieces), is_class, varargs)


def parse_objc_interface(text: str, filename: str = "<input>") -> ObjCInterfaceDescription:
    tokens = tokenize(text, filename)
    return _ObjCParser(tokens, filename, text.count("\n") + 1).interface()


def parse_export_decl(name: str, text: str) -> SelectorExportSpec:
    """Parse an export declaration such as
    ``int (HeatSpace *) heatobj getValueAtX: (int) px Y: (int) py``."""
    p = _ObjCParser(tokenize(text), f"export {name}", 1)
    try:
        ret = []
        while p.text() not in ("(", None):
            ret.append(p.next())
        if not ret:
            raise p.error("missing return type")
        p.expect("(")
        if p.text() == "id":
            p.pos += 1
            receiver = p.protocols()
            is_protocol = True
        else:
            receiver = p.ident("receiver class")
            p.expect("*")
            is_protocol = False
        p.expect(")")
        receiver_name = p.ident("receiver name")
        first = p.ident("selector")
        pieces = []
        if p.text() is None:
            pieces.append((first, None, None))
        else:
            keyword = first
            while True:
                p.expect(":")
                ptype = p.paren_type()
                pname = p.ident("argument name")
                pieces.append((keyword, ptype, pname))
                if p.text() is None:
                    break
                keyword = p.ident("selector keyword")
    except ParseError as e:
        raise ConfigError(str(e)) from None
    return SelectorExportSpec(name, receiver, tuple(pieces), _type_text(ret), receiver_name, is_protocol)


# -- emission --------------------------------------------------------------


def cpp_type(type_text: str, opaque: Iterable[str] = ()) -> str:
    """Map an Objective-C type to its C++ spelling.

    Protocol-qualified ``id`` becomes bare ``id`` and object pointers become
    ``id``; scalars, typedefs and primitive pointers pass through.
    """
    text = type_text.strip()
    if text == "id" or text.startswith("id ") or text.startswith("id<"):
        return "id"
    if text.endswith("*"):
        pointee = text[:-1].split("<")[0].strip()
        if not is_primitive(pointee) and pointee not in set(opaque):
            return "id"
    return text


def inherits_swarm_object(base_name: str, base_chain: Mapping[str, str]) -> bool:
    seen = set()
    cur: str | None = base_name
    while cur:
        if cur == SWARM_OBJECT:
            return True
        if cur in seen:
            raise ConfigError(f"cycle in base-chain at '{cur}'")
        seen.add(cur)
        cur = base_chain.get(cur)
    return False


def _ivar_cpp(iv: ObjCIvar, opaque) -> tuple[str, str]:
    """(base type, declarator) of an ivar on the C++ side."""
    ext = "".join(f"[{n}]" for n in iv.extents)
    if iv.is_pointer:
        mapped = cpp_type(iv.type_text + " *", opaque)
        if mapped == "id":
            return "id", iv.name + ext
        return iv.type_text, "*" + iv.name + ext
    return cpp_type(iv.type_text, opaque), iv.name + ext


def _cpp_method_decl(m: ObjCMethod, opaque) -> str:
    ret = "void" if m.return_type_text in (None, "void") else cpp_type(m.return_type_text, opaque)
    params = ", ".join(f"{cpp_type(t, opaque)} {n}" for t, n in m.arguments)
    return f"{ret} {m.name}({params})"


def _resolve_bridged(iface: ObjCInterfaceDescription, bridged: Iterable[str]) -> list[ObjCMethod]:
    out = []
    for sel in bridged:
        m = iface.find_method(sel)
        if m is None:
            raise SpecError(f"bridged method '{sel}' is not declared in @interface {iface.class_name}")
        if m.is_varargs:
            raise SpecError(f"variadic method '{m.selector}' cannot be bridged to C++")
        out.append(m)
    names = [m.name for m in out]
    if len(set(names)) != len(names):
        raise SpecError("bridged methods must have distinct first keywords (C++ has no selectors)")
    return out


def _config_parts(config: ToolConfig | None):
    if config is None:
        return frozenset(), {}, [], []
    return frozenset(config.opaque_names), dict(config.base_chain), list(config.selector_exports), list(config.typedef_specs)


def emit_cpp_class_template(
    iface: ObjCInterfaceDescription,
    bridged_methods: Iterable[str] = (),
    config: ToolConfig | None = None,
) -> str:
    opaque, chain, exports, typedefs = _config_parts(config)
    opaque = opaque | {t.alias for t in typedefs}
    methods = _resolve_bridged(iface, bridged_methods)
    guard = f"{iface.class_name.upper()}_H"
    lines = [f"#ifndef {guard}", f"#define {guard}", '#include "ObjCsupport.h"']
    if typedefs:
        lines.append(f'#include "{iface.class_name}Types.h"')
    lines += ["", f"class {iface.class_name}: public objc_obj {{", "public:"]
    if inherits_swarm_object(iface.base_name, chain):
        lines.append(f"    {ZBITS_LINE}")
    i = 0
    ivars = iface.ivars
    while i < len(ivars):
        group = [ivars[i]]
        while i + len(group) < len(ivars) and ivars[i + len(group)].decl_index == ivars[i].decl_index:
            group.append(ivars[i + len(group)])
        i += len(group)
        rendered = [_ivar_cpp(iv, opaque) for iv in group]
        bases = {b for b, _ in rendered}
        if len(bases) == 1:
            lines.append(f"    {rendered[0][0]} {', '.join(d for _, d in rendered)};")
        else:
            lines += [f"    {b} {d};" for b, d in rendered]
    lines.append("public:")
    lines += [f"    {_cpp_method_decl(m, opaque)};" for m in methods]
    lines.append("};")
    if exports:
        lines += ["", 'extern "C" {']
        lines += [e.prototype(lambda t: cpp_type(t, opaque)) + ";" for e in exports]
        lines.append("}")
    lines += ["", "#endif"]
    return "\n".join(lines) + "\n"


def emit_typedef_bridge(specs: Iterable[TypedefSpec]) -> str:
    specs = list(specs)
    seen = set()
    for s in specs:
        if s.alias in seen:
            raise SpecError(f"duplicate typedef alias '{s.alias}'")
        seen.add(s.alias)
    return "".join(s.render() + "\n" for s in specs)


def _as_method(method: ObjCMethod | str) -> ObjCMethod:
    if isinstance(method, ObjCMethod):
        return method
    return ObjCMethod(None, ((method, None, None),))


def emit_method_bridge(class_name: str, method: ObjCMethod | str, opaque: Iterable[str] = ()) -> tuple[str, str]:
    """The rewritten Objective-C method and the C-linkage shim it forwards to."""
    m = _as_method(method)
    shim = mangle(class_name, m.name)
    args = m.arguments
    ret = "void" if m.return_type_text in (None, "void") else cpp_type(m.return_type_text, opaque)
    c_params = ", ".join([f"{class_name} * obj"] + [f"{cpp_type(t, opaque)} {n}" for t, n in args])
    call_args = ", ".join(["self"] + [n for _, n in args])
    if m.return_type_text is None:
        body = f"{{ {shim}({call_args}); return self; }}"
    elif m.return_type_text == "void":
        body = f"{{ {shim}({call_args}); }}"
    else:
        body = f"{{ return {shim}({call_args}); }}"
    objc = f"{ret} {shim}({c_params});\n{m.render()}\n{body}\n"
    member_args = ", ".join(n for _, n in args)
    ret_kw = "" if ret == "void" else "return "
    cpp = f'extern "C" {ret} {shim}({c_params})\n{{ {ret_kw}obj->{m.name}({member_args}); }}\n'
    return objc, cpp


def emit_selector_exports(specs: Iterable[SelectorExportSpec], imports: Iterable[str] = ()) -> str:
    specs = list(specs)
    seen = set()
    for s in specs:
        if s.export_function_name in seen:
            raise SpecError(f"duplicate export function '{s.export_function_name}'")
        seen.add(s.export_function_name)
    lines = ["#import <objc/Object.h>"] + [f"#import {imp}" for imp in imports] + [""]
    for s in specs:
        if len(s.selector_pieces) == 1 and s.selector_pieces[0][2] is None:
            message = s.selector_pieces[0][0]
        else:
            message = " ".join(f"{kw}: {n}" for kw, _, n in s.selector_pieces)
        send = f"[{s.receiver_cast} {s.receiver_name} {message}]"
        body = f"{{ {send}; }}" if s.return_type_text == "void" else f"{{ return {send}; }}"
        lines += [f"extern {s.prototype()}", body, ""]
    return "\n".join(lines)


@dataclass(frozen=True)
class ReverseFileSet:
    class_name: str
    class_template: str
    export_cpp: str
    bridge_methods: str
    typedef_header: str | None
    selector_exports: str | None

    def files(self) -> dict[str, str]:
        cls = self.class_name
        out = {
            f"{cls}.h": self.class_template,
            f"{cls}ExportCpp.cc": self.export_cpp,
            f"{cls}Bridge.inc": self.bridge_methods,
        }
        if self.typedef_header is not None:
            out[f"{cls}Types.h"] = self.typedef_header
        if self.selector_exports is not None:
            out[f"{cls}ExportObjc.m"] = self.selector_exports
        return out


def generate_reverse(
    iface: ObjCInterfaceDescription, config: ToolConfig, bridged_methods: Iterable[str] | None = None
) -> ReverseFileSet:
    bridged = list(config.bridged_methods if bridged_methods is None else bridged_methods)
    opaque = frozenset(config.opaque_names)
    methods = _resolve_bridged(iface, bridged)
    template = emit_cpp_class_template(iface, bridged, config)
    objc_parts, cpp_parts = [], []
    for m in methods:
        objc, cpp = emit_method_bridge(iface.class_name, m, opaque)
        objc_parts.append(objc)
        cpp_parts.append(cpp)
    export_cpp = f'#include "{iface.class_name}.h"\n\n' + "\n".join(cpp_parts)
    bridge = "\n".join(objc_parts)
    typedefs = emit_typedef_bridge(config.typedef_specs) if config.typedef_specs else None
    exports = (
        emit_selector_exports(config.selector_exports, config.objc_imports) if config.selector_exports else None
    )
    return ReverseFileSet(iface.class_name, template, export_cpp, bridge, typedefs, exports)
