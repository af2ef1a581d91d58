"""Bridge generator between C++ classes and Objective-C objects."""

from .describe import emit_cd, parse_cd
from .errors import BridgeError, ConfigError, ParseError, SpecError
from .forward import GeneratedFileSet, generate, translation_trace
from .header import classify_signature, parse_header
from .ir import (
    ClassDescription,
    FieldDescriptor,
    MethodDescriptor,
    ParameterDescriptor,
    PassingMode,
    TypeKind,
    TypeRef,
)
from .reverse import generate_reverse, parse_objc_interface

__version__ = "0.1.0"
