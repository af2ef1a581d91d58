"""C++ class -> Objective-C bridge: interface template, trampolines and C shims."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .describe import emit_cd
from .ir import ClassDescription, MethodDescriptor, PassingMode
from .lexer import tokenize

MH_IMPORT = "#import <objc/Object.h>"
OBJC_ROOT = "Object"


def mangle(class_name: str, method_name: str) -> str:
    return f"cpp_{class_name}_{method_name}"


def construct_shim_name(class_name: str) -> str:
    return mangle(class_name, "construct")


@dataclass(frozen=True)
class ObjCDeclaration:
    # empty return type means the default object return (``- step``)
    return_type_text: str
    selector_pieces: tuple[tuple[str, str, str], ...]
    is_varargs: bool = False

    @property
    def selector(self) -> str:
        if len(self.selector_pieces) == 1 and not self.selector_pieces[0][1]:
            return self.selector_pieces[0][0]
        return "".join(f"{kw}:" for kw, _, _ in self.selector_pieces)

    def render(self) -> str:
        out = "-"
        if self.return_type_text:
            out += f" ({self.return_type_text})"
        parts = []
        for keyword, ptype, pname in self.selector_pieces:
            parts.append(f"{keyword}: ({ptype}) {pname}" if ptype else keyword)
        out += " " + " ".join(parts)
        if self.is_varargs:
            out += ", ..."
        return out


def translate_prototype(m: MethodDescriptor, class_name: str | None = None) -> ObjCDeclaration | None:
    """Objective-C declaration for a classified method, or ``None`` for C++-only ones."""
    if m.passing_mode is PassingMode.CPP_ONLY:
        return None
    rtype = "" if m.return_type.spelling() == "void" else m.return_type.spelling()
    if m.passing_mode is PassingMode.VARARGS:
        first = m.params[0]
        return ObjCDeclaration(rtype, ((m.name, first.type.spelling(), first.name),), True)
    if not m.params:
        return ObjCDeclaration(rtype, ((m.name, "", ""),))
    pieces = [(m.name if i == 0 else p.name, p.type.spelling(), p.name) for i, p in enumerate(m.params)]
    return ObjCDeclaration(rtype, tuple(pieces))


def _returns_void(m: MethodDescriptor) -> bool:
    return m.return_type.spelling() == "void"


def shim_params(class_name: str, m: MethodDescriptor) -> str:
    """C parameter list shared by the trampoline's forward declaration and the shim."""
    params = [f"{class_name} * obj"]
    if m.passing_mode is PassingMode.VARARGS:
        params += [m.params[0].type.declare(m.params[0].name), "va_list * ap"]
    else:
        params += [p.type.declare(p.name) for p in m.params]
    return ", ".join(params)


def shim_prototype(class_name: str, m: MethodDescriptor) -> str:
    return f"{m.return_type.spelling()} {mangle(class_name, m.name)}({shim_params(class_name, m)})"


def emit_interface_header(cd: ClassDescription, imports: Iterable[str] = ()) -> str:
    lines = [MH_IMPORT]
    lines += [f"#import {imp}" for imp in imports]
    lines += ["", f"@interface {cd.class_name} : {OBJC_ROOT}", "{ @public"]
    lines += [f"    {f.type.declare(f.name)};" for f in cd.fields]
    lines += ["}", "- init;"]
    for m in cd.methods:
        decl = translate_prototype(m, cd.class_name)
        if decl is not None:
            lines.append(decl.render() + ";")
    lines.append("@end")
    return "\n".join(lines) + "\n"


def _trampoline_body(cd: ClassDescription, m: MethodDescriptor) -> list[str]:
    shim = mangle(cd.class_name, m.name)
    if m.passing_mode is PassingMode.VARARGS:
        last = m.params[0].name
        call = f"{shim}(self, {last}, &ap);"
        if _returns_void(m):
            return [
                f"{{ va_list ap; va_start(ap, {last});",
                f"  {call}",
                "  va_end(ap);",
                "  return self; }",
            ]
        return [
            f"{{ {m.return_type.spelling()} rtnvalue; va_list ap; va_start(ap, {last});",
            f"  rtnvalue = {call}",
            "  va_end(ap);",
            "  return rtnvalue; }",
        ]
    args = ", ".join(["self"] + [p.name for p in m.params])
    if _returns_void(m):
        return [f"{{ {shim}({args}); return self; }}"]
    return [f"{{ return {shim}({args}); }}"]


def emit_trampolines(cd: ClassDescription) -> str:
    cls = cd.class_name
    lines = [f'#import "{cls}.mh"', "#include <stdarg.h>", "", f"@implementation {cls}", ""]
    lines += [
        f"void {construct_shim_name(cls)}({cls} * obj);",
        "- init",
        f"{{ {construct_shim_name(cls)}(self); return self; }}",
        "",
    ]
    for m in cd.translated_methods:
        decl = translate_prototype(m, cls)
        lines.append(shim_prototype(cls, m) + ";")
        lines.append(decl.render())
        lines += _trampoline_body(cd, m)
        lines.append("")
    lines.append("@end")
    return "\n".join(lines) + "\n"


def _shim_body(m: MethodDescriptor) -> str:
    ret = "" if _returns_void(m) else "return "
    if m.passing_mode is PassingMode.VARARGS:
        first = m.params[0].name
        return f"{{ objc_t buffer; buffer.ap = ap; {ret}obj->{m.name}({first}, buffer); }}"
    args = ", ".join(p.name for p in m.params)
    return f"{{ {ret}obj->{m.name}({args}); }}"


def emit_export_shims(cd: ClassDescription) -> str:
    cls = cd.class_name
    lines = [f'#include "{cls}.h"', "#include <new>", ""]
    lines += [
        'extern "C"',
        f"void {construct_shim_name(cls)}({cls} * obj)",
        f"{{ new (obj) {cls}; }}",
        "",
    ]
    for m in cd.translated_methods:
        lines += ['extern "C"', shim_prototype(cls, m), _shim_body(m), ""]
    return "\n".join(lines)


@dataclass(frozen=True)
class GeneratedFileSet:
    class_name: str
    mh_text: str
    m_text: str
    export_cc_text: str
    cd_text: str

    def files(self) -> dict[str, str]:
        cls = self.class_name
        return {
            f"{cls}.cd": self.cd_text,
            f"{cls}.mh": self.mh_text,
            f"{cls}.m": self.m_text,
            f"{cls}ExportCpp.cc": self.export_cc_text,
        }


def generate(cd: ClassDescription, imports: Iterable[str] = ()) -> GeneratedFileSet:
    return GeneratedFileSet(
        cd.class_name,
        emit_interface_header(cd, imports),
        emit_trampolines(cd),
        emit_export_shims(cd),
        emit_cd(cd),
    )


def translation_trace(cd: ClassDescription) -> list[str]:
    """Progress lines printed while translating, one per bridged member."""
    lines = ["C++ to ObjC parsing ...", "Starts parsing C++ class to ObjC ..."]
    for f in cd.fields:
        simple = f'Translating simple data type: "{f.name}" of-type "{f.type.scalar().spelling()}"'
        if f.type.array_extents:
            lines.append(f'Translating array: "{f.name}{f.type.extents_text}" - {simple}')
        else:
            lines.append(simple)
    for m in cd.translated_methods:
        args = "".join(t.text + " " for t in tokenize(m.arg_text))
        lines.append(f"Translating function: {m.return_type.spelling()} {m.name}({args})")
    lines.append("End translation.")
    return lines
