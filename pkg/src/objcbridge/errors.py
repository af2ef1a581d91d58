from __future__ import annotations

from .ir import Diagnostic


class BridgeError(Exception):
    """Base class for every input error the tool reports (exit status 1)."""


class ParseError(BridgeError):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))

    @classmethod
    def at(cls, line: int, message: str, filename: str = "<input>") -> ParseError:
        return cls([Diagnostic("error", line, message, filename)])

    @property
    def line(self) -> int:
        return self.diagnostics[0].line


class ConfigError(BridgeError):
    pass


class SpecError(BridgeError):
    """A generation request that contradicts its inputs (unknown method, duplicate name)."""
