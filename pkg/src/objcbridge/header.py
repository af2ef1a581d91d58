"""Parser for the supported C++ class-header subset.

A header holds exactly one class deriving from ``objc_obj``.  Public data
members become fields; public member functions become methods classified
into a passing mode.  Everything outside the supported grammar is rejected
with a line-numbered :class:`~objcbridge.errors.ParseError` rather than
translated approximately.
"""

from __future__ import annotations

import logging
from collections import Counter
from typing import TYPE_CHECKING, Iterable

from .errors import ParseError
from .ir import (
    ClassDescription,
    FieldDescriptor,
    MethodDescriptor,
    ParameterDescriptor,
    PassingMode,
    TypeKind,
    TypeRef,
)
from .lexer import Token, clean_source, squeeze, tokenize

if TYPE_CHECKING:
    from .config import ToolConfig

log = logging.getLogger(__name__)

MAX_ARRAY_RANK = 3
BRIDGE_BASE = "objc_obj"

# Names the generated code claims for itself.
RESERVED_METHOD_NAMES = frozenset({"init", "construct"})
RESERVED_PARAM_NAMES = frozenset({"obj", "self", "_cmd", "ap", "buffer", "rtnvalue"})

_SIGN_WORDS = {"signed", "unsigned"}
_INT_WORDS = {"char", "short", "int", "long"}
_BUILTIN_WORDS = _SIGN_WORDS | _INT_WORDS | {"void", "float", "double"}
_INT_SHAPES = [
    Counter(),
    Counter(["char"]),
    Counter(["short"]),
    Counter(["short", "int"]),
    Counter(["int"]),
    Counter(["long"]),
    Counter(["long", "int"]),
    Counter(["long", "long"]),
    Counter(["long", "long", "int"]),
]
_REJECTED_SPECIFIERS = {
    "virtual": "virtual members change the object layout and cannot be bridged",
    "static": "static members are not supported",
    "mutable": "mutable members are not supported",
    "volatile": "volatile types are not supported",
    "explicit": "explicit constructors are not supported",
    "typedef": "member typedefs are not supported",
    "using": "using-declarations inside the class are not supported",
    "template": "templates are not supported in the class definition",
    "operator": "operator overloads are not supported",
    "enum": "nested types are not supported",
    "union": "nested types are not supported",
}
_ACCESS = {"public", "private", "protected"}


def is_primitive(base_name: str) -> bool:
    words = base_name.split()
    if words in (["void"], ["float"], ["double"], ["long", "double"]):
        return True
    if not words or any(w not in _SIGN_WORDS | _INT_WORDS for w in words):
        return False
    signs = [w for w in words if w in _SIGN_WORDS]
    rest = Counter(w for w in words if w not in _SIGN_WORDS)
    if len(signs) > 1 or (not signs and not rest):
        return False
    return rest in _INT_SHAPES


def classify_type(
    base_name: str,
    *,
    is_reference: bool = False,
    is_pointer: bool = False,
    array_extents: tuple[int, ...] = (),
    opaque_typedefs: Iterable[str] = (),
    line: int = 0,
    filename: str = "<input>",
) -> TypeRef:
    """Build a :class:`TypeRef`, assigning its kind from the base name alone."""
    if is_primitive(base_name):
        kind = TypeKind.PRIMITIVE
    elif base_name == "id":
        kind = TypeKind.OBJC_ID
    elif base_name == "objc_t":
        if not is_reference or is_pointer or array_extents:
            raise ParseError.at(line, "objc_t may only be passed as 'objc_t&'", filename)
        kind = TypeKind.OBJC_T_REF
    elif base_name in set(opaque_typedefs):
        kind = TypeKind.OPAQUE_TYPEDEF
    else:
        kind = TypeKind.CPP_ONLY
    if is_reference and kind not in (TypeKind.OBJC_T_REF, TypeKind.CPP_ONLY):
        raise ParseError.at(
            line, f"reference to '{base_name}' cannot cross the bridge; pass it by value", filename
        )
    if array_extents and (is_pointer or is_reference):
        raise ParseError.at(line, "arrays of pointers or references are not supported", filename)
    return TypeRef(base_name, kind, is_reference, is_pointer, tuple(array_extents))


def classify_signature(name: str, return_type: TypeRef, params: Iterable[ParameterDescriptor]) -> PassingMode:
    params = tuple(params)
    if "cpp_" in name:
        return PassingMode.CPP_ONLY
    if not return_type.translatable or any(not p.type.translatable for p in params):
        return PassingMode.CPP_ONLY
    if len(params) == 2 and params[1].type.kind is TypeKind.OBJC_T_REF:
        return PassingMode.VARARGS
    return PassingMode.STANDARD


class _Stream:
    def __init__(self, tokens: list[Token], filename: str, eof_line: int):
        self.tokens = tokens
        self.pos = 0
        self.filename = filename
        self.eof_line = eof_line

    def peek(self, offset: int = 0) -> Token | None:
        i = self.pos + offset
        return self.tokens[i] if i < len(self.tokens) else None

    def text(self, offset: int = 0) -> str | None:
        tok = self.peek(offset)
        return tok.text if tok else None

    @property
    def line(self) -> int:
        tok = self.peek()
        return tok.line if tok else self.eof_line

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise self.error("unexpected end of input")
        self.pos += 1
        return tok

    def accept(self, text: str) -> Token | None:
        if self.text() == text:
            return self.next()
        return None

    def expect(self, text: str, what: str | None = None) -> Token:
        tok = self.peek()
        if tok is None or tok.text != text:
            found = f"'{tok.text}'" if tok else "end of input"
            raise self.error(f"expected {what or repr(text)}, found {found}")
        return self.next()

    def ident(self, what: str = "identifier") -> Token:
        tok = self.peek()
        if tok is None or tok.kind != "ident" or tok.text.startswith("@"):
            found = f"'{tok.text}'" if tok else "end of input"
            raise self.error(f"expected {what}, found {found}")
        return self.next()

    def error(self, message: str, line: int | None = None) -> ParseError:
        return ParseError.at(self.line if line is None else line, message, self.filename)

    def skip_balanced(self, open_: str, close: str) -> None:
        """Skip from an opening bracket to its matching close."""
        start = self.line
        self.expect(open_)
        depth = 1
        while depth:
            tok = self.peek()
            if tok is None:
                raise self.error(f"unbalanced '{open_}'", start)
            self.pos += 1
            if tok.text == open_:
                depth += 1
            elif tok.text == close:
                depth -= 1

    def skip_statement(self) -> None:
        """Skip to the next ';' at bracket depth zero, including it."""
        while True:
            text = self.text()
            if text is None:
                raise self.error("missing ';'")
            if text == ";":
                self.next()
                return
            if text == "{":
                self.skip_balanced("{", "}")
            elif text == "(":
                self.skip_balanced("(", ")")
            else:
                self.next()


def _join_type_tokens(tokens: list[str]) -> str:
    out = ""
    prev_word = False
    for t in tokens:
        word = t[0].isalnum() or t[0] == "_"
        if out and word and prev_word:
            out += " "
        out += t
        prev_word = word
    return out


def _read_base_type(s: _Stream) -> tuple[str, int]:
    """Read decl-specifiers and the base type name; return (base_name, line)."""
    line = s.line
    words: list[str] = []
    while s.text() == "const":
        s.next()
    text = s.text()
    if text in _REJECTED_SPECIFIERS:
        raise s.error(_REJECTED_SPECIFIERS[text])
    if text in _BUILTIN_WORDS:
        while s.text() in _BUILTIN_WORDS or s.text() == "const":
            tok = s.next()
            if tok.text != "const":
                words.append(tok.text)
        base = " ".join(words)
        if not is_primitive(base):
            raise s.error(f"invalid builtin type '{base}'", line)
        return base, line
    if text in ("class", "struct"):
        s.next()  # elaborated type specifier
    parts: list[str] = []
    if s.accept("::"):
        parts.append("::")
    while True:
        parts.append(s.ident("type name").text)
        if s.text() == "<":
            parts.extend(_read_template_args(s))
        if s.text() == "::":
            parts.append(s.next().text)
            continue
        break
    while s.text() == "const":
        s.next()
    return _join_type_tokens(parts), line


def _read_template_args(s: _Stream) -> list[str]:
    out = [s.expect("<").text]
    depth = 1
    while depth:
        tok = s.peek()
        if tok is None or tok.text in (";", "{", "}"):
            raise s.error("unterminated template argument list")
        s.next()
        if tok.text == "<":
            depth += 1
        elif tok.text == ">":
            depth -= 1
        out.append(tok.text)
    return out


def _read_ptr_ops(s: _Stream) -> tuple[bool, bool]:
    """Read '*', '&' and cv-qualifiers following a base type."""
    stars = 0
    ref = False
    while True:
        text = s.text()
        if text == "*":
            if ref:
                raise s.error("pointers to references are not valid")
            stars += 1
            s.next()
        elif text == "&":
            if ref:
                raise s.error("references to references are not valid")
            ref = True
            s.next()
        elif text == "&&":
            raise s.error("rvalue references are not supported")
        elif text == "const":
            s.next()
        else:
            break
    if stars > 1:
        raise s.error("multi-level pointers are not supported")
    return stars == 1, ref


def _read_extents(s: _Stream) -> tuple[int, ...]:
    extents = []
    while s.text() == "[":
        s.next()
        tok = s.next()
        if tok.kind != "number" or not tok.text.isdigit() or int(tok.text) <= 0:
            raise s.error(f"array extent must be a positive integer literal, found '{tok.text}'", tok.line)
        extents.append(int(tok.text))
        s.expect("]")
    if len(extents) > MAX_ARRAY_RANK:
        raise s.error(f"arrays of more than {MAX_ARRAY_RANK} dimensions are not supported")
    return tuple(extents)


def _parse_params(s: _Stream, source: str, opaque: frozenset[str], method: str) -> tuple[tuple[ParameterDescriptor, ...], str]:
    """Parse '( ... )' and return the parameters plus the squeezed source text between the parens."""
    open_tok = s.expect("(")
    if s.text() == "void" and s.text(1) == ")":
        s.next()
        close = s.expect(")")
        return (), squeeze(source[open_tok.end:close.start])
    params = []
    names = set()
    while s.text() != ")":
        if s.text() == "...":
            raise s.error("C variadic parameters are not supported; use 'objc_t& buf'")
        base, line = _read_base_type(s)
        is_ptr, is_ref = _read_ptr_ops(s)
        if s.text() in (",", ")"):
            raise s.error(f"parameter {len(params) + 1} of '{method}' has no name")
        name = s.ident("parameter name").text
        if s.text() == "[":
            raise s.error("array parameters are not supported")
        if s.text() == "(":
            raise s.error("function-pointer parameters are not supported")
        if s.text() == "=":
            raise s.error(f"default arguments are not supported (parameter '{name}' of '{method}')")
        if name in names:
            raise s.error(f"duplicate parameter name '{name}' in '{method}'", line)
        names.add(name)
        ptype = classify_type(
            base, is_reference=is_ref, is_pointer=is_ptr, opaque_typedefs=opaque, line=line, filename=s.filename
        )
        params.append(ParameterDescriptor(name, ptype, len(params)))
        if not s.accept(","):
            break
    close = s.expect(")")
    return tuple(params), squeeze(source[open_tok.end:close.start])


def _skip_function_tail(s: _Stream, name: str) -> None:
    while s.text() == "const":
        s.next()
    if s.text() == "=":
        raise s.error(f"'= ...' specifiers on '{name}' are not supported")
    if s.text() == "{":
        s.skip_balanced("{", "}")
        s.accept(";")
    else:
        s.expect(";", "';' after member function declaration")


class _ClassParser:
    def __init__(self, s: _Stream, source: str, opaque: frozenset[str]):
        self.s = s
        self.source = source
        self.opaque = opaque

    def parse(self) -> ClassDescription:
        s = self.s
        key = s.next().text
        class_name = s.ident("class name").text
        if s.text() != ":":
            raise s.error(f"class '{class_name}' must derive from '{BRIDGE_BASE}' (': public {BRIDGE_BASE}')")
        s.next()
        if s.text() == "virtual":
            raise s.error("virtual inheritance is not supported")
        access = s.accept("public") or s.accept("protected") or s.accept("private")
        base = s.ident("base class name").text
        if s.text() == ",":
            raise s.error("multiple inheritance is not supported")
        if base != BRIDGE_BASE or (access is None and key == "class") or (access and access.text != "public"):
            raise s.error(f"class '{class_name}' must derive as ': public {BRIDGE_BASE}', found base '{base}'")
        s.expect("{")

        self.class_name = class_name
        self.public = key == "struct"
        self.fields: list[FieldDescriptor] = []
        self.methods: list[MethodDescriptor] = []
        self.member_lines: dict[str, int] = {}
        self.hidden_fields: list[str] = []
        self.ctor_lines: list[int] = []
        self.has_default_ctor = False

        while s.text() != "}":
            if s.peek() is None:
                raise s.error(f"missing '}}' closing class '{class_name}'")
            self.member()
        s.expect("}")
        if s.text() != ";":
            raise s.error("declarators after the class body are not supported")
        s.next()
        if self.ctor_lines and not self.has_default_ctor:
            raise s.error(
                f"'{class_name}' needs a public default constructor; -init constructs the object in place",
                self.ctor_lines[0],
            )
        if self.hidden_fields:
            log.warning(
                "%s: non-public data members %s are omitted from the bridge; "
                "the Objective-C ivar layout will not include them",
                class_name,
                ", ".join(self.hidden_fields),
            )
        return ClassDescription(class_name, base, tuple(self.fields), tuple(self.methods))

    def member(self) -> None:
        s = self.s
        text = s.text()
        if text in _ACCESS and s.text(1) == ":":
            self.public = text == "public"
            s.next()
            s.next()
            return
        if text == ";":
            s.next()
            return
        if text == "friend":
            s.skip_statement()
            return
        if text in ("class", "struct") and s.text(2) in ("{", ":"):
            raise s.error("nested types are not supported")
        if text in _REJECTED_SPECIFIERS:
            raise s.error(_REJECTED_SPECIFIERS[text])
        if text == "~" or (text == self.class_name and s.text(1) == "("):
            self.special_member()
            return
        self.declaration()

    def special_member(self) -> None:
        s = self.s
        line = s.line
        what = "destructor" if s.accept("~") else "constructor"
        s.ident()
        s.expect("(")
        default = s.text() == ")" or (s.text() == "void" and s.text(1) == ")")
        s.pos -= 1
        s.skip_balanced("(", ")")
        if s.text() == ":":
            while s.text() not in ("{", None):
                s.next()
        _skip_function_tail(s, self.class_name)
        if what == "constructor":
            self.ctor_lines.append(line)
            self.has_default_ctor |= default and self.public
        if what == "destructor":
            log.warning("%s:%d: destructor of '%s' is never run by the bridge", s.filename, line, self.class_name)
        elif not default and self.public:
            log.warning(
                "%s:%d: only the default constructor of '%s' runs from -init", s.filename, line, self.class_name
            )

    def declaration(self) -> None:
        s = self.s
        base, line = _read_base_type(s)
        first = True
        while True:
            decl_line = s.line
            is_ptr, is_ref = _read_ptr_ops(s)
            if s.text() == "operator":
                raise s.error(_REJECTED_SPECIFIERS["operator"])
            if s.text() == "(":
                raise s.error("function-pointer members are not supported")
            name = s.ident("member name").text
            if s.text() == "(":
                if not first:
                    raise s.error("a member function cannot share a declaration with other members")
                self.method(base, is_ptr, is_ref, name, decl_line)
                return
            extents = _read_extents(s)
            if s.text() == "=" or s.text() == "{":
                raise s.error(f"default member initializers are not supported ('{name}')")
            if s.text() == ":":
                raise s.error(f"bit-fields are not supported ('{name}')")
            self.field(base, is_ptr, is_ref, extents, name, decl_line)
            first = False
            if s.accept(";"):
                return
            s.expect(",", "',' or ';' after member declarator")

    def _claim(self, name: str, line: int, overload: bool = False) -> None:
        if name in self.member_lines:
            prior = self.member_lines[name]
            if overload:
                raise self.s.error(f"overloaded method {name} (first declared on line {prior})", line)
            raise self.s.error(f"duplicate member name '{name}' (first declared on line {prior})", line)
        self.member_lines[name] = line

    def field(self, base, is_ptr, is_ref, extents, name, line) -> None:
        s = self.s
        if not self.public:
            self.hidden_fields.append(name)
            return
        if is_ref:
            raise s.error(f"reference member '{name}' is not supported", line)
        ftype = classify_type(
            base,
            is_pointer=is_ptr,
            array_extents=extents,
            opaque_typedefs=self.opaque,
            line=line,
            filename=s.filename,
        )
        if ftype.kind is TypeKind.CPP_ONLY:
            raise s.error(
                f"field '{name}' has C++-only type '{base}' and cannot be mirrored in the "
                "Objective-C layout (declare the name as an opaque typedef if it is a scalar)",
                line,
            )
        if ftype.base_name == "void" and not ftype.is_pointer:
            raise s.error(f"field '{name}' has type void", line)
        self._claim(name, line)
        self.fields.append(FieldDescriptor(name, ftype, len(self.fields)))

    def method(self, base, is_ptr, is_ref, name, line) -> None:
        s = self.s
        params, arg_text = _parse_params(s, self.source, self.opaque, name)
        _skip_function_tail(s, name)
        if not self.public:
            return
        rtype = classify_type(
            base, is_reference=is_ref, is_pointer=is_ptr, opaque_typedefs=self.opaque, line=line, filename=s.filename
        )
        if rtype.kind is TypeKind.OBJC_T_REF:
            raise s.error(f"'{name}' cannot return objc_t", line)
        mode = classify_signature(name, rtype, params)
        if mode is not PassingMode.CPP_ONLY:
            if name in RESERVED_METHOD_NAMES:
                raise s.error(f"method name '{name}' collides with generated bridge code", line)
            for p in params:
                if p.name in RESERVED_PARAM_NAMES:
                    raise s.error(f"parameter name '{p.name}' of '{name}' collides with generated bridge code", line)
            if mode is PassingMode.STANDARD and any(p.type.kind is TypeKind.OBJC_T_REF for p in params):
                log.warning(
                    "%s:%d: '%s' takes objc_t& outside the (value, objc_t&) form; it is bridged as a standard argument",
                    s.filename,
                    line,
                    name,
                )
        self._claim(name, line, overload=True)
        self.methods.append(MethodDescriptor(name, rtype, params, mode, arg_text))


def _config_opaque(config: ToolConfig | None) -> frozenset[str]:
    if config is None:
        return frozenset()
    return frozenset(config.opaque_names)


def parse_header(source: str, config: ToolConfig | None = None, filename: str = "<input>") -> ClassDescription:
    """Parse one C++ header into a :class:`ClassDescription`.

    Raises :class:`ParseError` when no class, more than one class, an
    overloaded method, or unsupported syntax is found.
    """
    cleaned = clean_source(source)
    tokens = tokenize(cleaned, filename, clean=False)
    s = _Stream(tokens, filename, cleaned.count("\n") + 1)
    opaque = _config_opaque(config)
    found: ClassDescription | None = None
    found_line = 0
    while s.peek() is not None:
        text = s.text()
        if text in ("template", "namespace"):
            raise s.error(f"{text}s are not supported")
        if text in ("class", "struct"):
            if s.text(2) == ";":
                s.pos += 3  # forward declaration
                continue
            if s.text(2) in (":", "{"):
                line = s.line
                if found is not None:
                    raise s.error(
                        f"more than one class definition (first is '{found.class_name}' on line {found_line})"
                    )
                found = _ClassParser(s, cleaned, opaque).parse()
                found_line = line
                continue
        if text == "extern" and s.text(1) and s.text(1).startswith('"') and s.text(2) == "{":
            s.pos += 2
            s.skip_balanced("{", "}")
            continue
        s.skip_statement()
    if found is None:
        raise ParseError.at(s.eof_line, "no class definition found", filename)
    return found


def parse_signature(text: str, opaque_typedefs: Iterable[str] = ()) -> tuple[str, TypeRef, tuple[ParameterDescriptor, ...], str]:
    """Parse a lone member-function prototype such as ``double f(double x, objc_t& b);``.

    Returns ``(name, return_type, params, arg_text)``.
    """
    cleaned = clean_source(text)
    s = _Stream(tokenize(cleaned, clean=False), "<signature>", cleaned.count("\n") + 1)
    opaque = frozenset(opaque_typedefs)
    base, line = _read_base_type(s)
    is_ptr, is_ref = _read_ptr_ops(s)
    name = s.ident("function name").text
    params, arg_text = _parse_params(s, cleaned, opaque, name)
    while s.text() == "const":
        s.next()
    s.accept(";")
    if s.peek() is not None:
        raise s.error(f"unexpected '{s.text()}' after prototype")
    rtype = classify_type(base, is_reference=is_ref, is_pointer=is_ptr, opaque_typedefs=opaque, line=line)
    return name, rtype, params, arg_text


def parse_arg_list(arg_text: str, opaque_typedefs: Iterable[str] = (), line: int = 0, filename: str = "<input>") -> tuple[ParameterDescriptor, ...]:
    """Parse an argument-list string (the text between a prototype's parentheses)."""
    cleaned = "(" + arg_text + ")"
    s = _Stream(tokenize(cleaned, filename), filename, line)
    try:
        params, _ = _parse_params(s, cleaned, frozenset(opaque_typedefs), "<method>")
        if s.peek() is not None:
            raise s.error(f"unexpected '{s.text()}' after argument list")
    except ParseError as e:
        # re-anchor to the caller's line: the argument text is a single line
        raise ParseError.at(line, e.diagnostics[0].message, filename) from None
    return params


def parse_type_text(text: str, opaque_typedefs: Iterable[str] = (), line: int = 0, filename: str = "<input>") -> TypeRef:
    """Parse a bare type such as ``double`` or ``char *``."""
    s = _Stream(tokenize(text, filename), filename, line)
    try:
        base, _ = _read_base_type(s)
        is_ptr, is_ref = _read_ptr_ops(s)
        if s.peek() is not None:
            raise s.error(f"unexpected '{s.text()}' in type")
    except ParseError as e:
        raise ParseError.at(line, e.diagnostics[0].message, filename) from None
    return classify_type(
        base, is_reference=is_ref, is_pointer=is_ptr, opaque_typedefs=opaque_typedefs, line=line, filename=filename
    )


def classify_method(signature: str, opaque_typedefs: Iterable[str] = ()) -> PassingMode:
    """Passing mode of a prototype given as text."""
    name, rtype, params, _ = parse_signature(signature, opaque_typedefs)
    return classify_signature(name, rtype, params)
