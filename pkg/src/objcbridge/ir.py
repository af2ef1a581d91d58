"""Class-description IR shared by the parser, the `.cd` codec and the emitters.

All records are frozen dataclasses holding tuples, so two descriptions built
from the same source compare (and hash) equal.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace


class TypeKind(str, enum.Enum):
    PRIMITIVE = "primitive"
    OBJC_ID = "objc_id"
    OBJC_T_REF = "objc_t_ref"
    OPAQUE_TYPEDEF = "opaque_typedef"
    CPP_ONLY = "cpp_only"


class PassingMode(str, enum.Enum):
    STANDARD = "standard"
    VARARGS = "varargs"
    CPP_ONLY = "cpp_only"


@dataclass(frozen=True)
class TypeRef:
    base_name: str
    kind: TypeKind
    is_reference: bool = False
    is_pointer: bool = False
    array_extents: tuple[int, ...] = ()

    def __post_init__(self):
        if self.array_extents and (self.is_reference or self.is_pointer):
            raise ValueError("array types cannot also be pointers or references")
        if any(n <= 0 for n in self.array_extents):
            raise ValueError("array extents must be positive")
        if self.kind is TypeKind.OBJC_T_REF and not (
            self.is_reference and self.base_name == "objc_t"
        ):
            raise ValueError("objc_t_ref must be a reference to objc_t")

    @property
    def translatable(self) -> bool:
        return self.kind is not TypeKind.CPP_ONLY

    @property
    def extents_text(self) -> str:
        return "".join(f"[{n}]" for n in self.array_extents)

    def spelling(self) -> str:
        """The type as it appears in a cast or return position: ``char *``."""
        text = self.base_name
        if self.is_pointer:
            text += " *"
        if self.is_reference:
            text += " &"
        return text

    def declare(self, name: str) -> str:
        """Render a C declaration of ``name`` with this type (no semicolon)."""
        if self.is_pointer:
            return f"{self.base_name} *{name}{self.extents_text}"
        if self.is_reference:
            return f"{self.base_name} &{name}"
        return f"{self.base_name} {name}{self.extents_text}"

    def scalar(self) -> TypeRef:
        """The element type with array extents removed."""
        return replace(self, array_extents=())


@dataclass(frozen=True)
class FieldDescriptor:
    name: str
    type: TypeRef
    declaration_order: int


@dataclass(frozen=True)
class ParameterDescriptor:
    name: str
    type: TypeRef
    position: int


@dataclass(frozen=True)
class MethodDescriptor:
    name: str
    return_type: TypeRef
    params: tuple[ParameterDescriptor, ...]
    passing_mode: PassingMode
    # argument list as written in the source, whitespace runs collapsed
    arg_text: str = ""

    @property
    def translated(self) -> bool:
        return self.passing_mode is not PassingMode.CPP_ONLY


@dataclass(frozen=True)
class ClassDescription:
    class_name: str
    base_name: str = "objc_obj"
    fields: tuple[FieldDescriptor, ...] = ()
    methods: tuple[MethodDescriptor, ...] = ()

    @property
    def translated_methods(self) -> tuple[MethodDescriptor, ...]:
        return tuple(m for m in self.methods if m.translated)

    def without_cpp_only(self) -> ClassDescription:
        return replace(self, methods=self.translated_methods)

    def field(self, name: str) -> FieldDescriptor | None:
        for f in self.fields:
            if f.name == name:
                return f
        return None


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    line: int
    message: str
    filename: str = field(default="<input>", compare=False)

    def __str__(self) -> str:
        return f"{self.filename}:{self.line}: {self.severity}: {self.message}"
