"""File-level drivers behind the CLI commands.

Every command computes all of its outputs in memory first and only then
writes them, so an input error never leaves partial or stale files behind.
"""

from __future__ import annotations

import os
import re
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from .buildplan import forward_plan, render_makefile, reverse_plan, swarm_env_fragments
from .config import ToolConfig
from .describe import emit_cd, parse_cd
from .errors import BridgeError
from .forward import generate, translation_trace
from .header import parse_header
from .ir import ClassDescription
from .reverse import generate_reverse, parse_objc_interface
from .support import SUPPORT_HEADER_NAME, emit_support


@dataclass
class Outcome:
    files: dict[str, str]
    trace: list[str] = field(default_factory=list)


def read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise BridgeError(f"cannot read {path}: {e.strerror}") from None


def _check_class(cd_name: str, config: ToolConfig) -> None:
    if config.class_name and config.class_name != cd_name:
        raise BridgeError(f"input defines class '{cd_name}', but '{config.class_name}' was requested")


def load_header(path: str | Path, config: ToolConfig, text: str | None = None) -> ClassDescription:
    if text is None:
        text = read_text(path)
    cd = parse_header(text, config, filename=str(path))
    _check_class(cd.class_name, config)
    return cd


def describe(header_path: str | Path, config: ToolConfig, text: str | None = None) -> Outcome:
    cd = load_header(header_path, config, text)
    return Outcome({f"{cd.class_name}.cd": emit_cd(cd)})


_CD_CLASS = re.compile(r"class\s+([A-Za-z_]\w*)\s*&\s*arg")


def load_translation_input(path: str | Path, config: ToolConfig, header_path: str | Path | None = None) -> ClassDescription:
    path = Path(path)
    if path.suffix != ".cd":
        return load_header(path, config)
    text = read_text(path)
    m = _CD_CLASS.search(text)
    if header_path is None and m:
        header_path = path.with_name(f"{m.group(1)}.h")
    header = load_header(header_path, config) if header_path is not None and Path(header_path).exists() else None
    if header is None and header_path is not None:
        raise BridgeError(f"class header {header_path} not found; pass --header")
    cd = parse_cd(text, header, config, filename=str(path))
    _check_class(cd.class_name, config)
    return cd


def translate(path: str | Path, config: ToolConfig, header_path: str | Path | None = None) -> Outcome:
    cd = load_translation_input(path, config, header_path)
    files = generate(cd, config.objc_imports).files()
    files.pop(f"{cd.class_name}.cd")
    return Outcome(files, translation_trace(cd))


def reverse(iface_path: str | Path, config: ToolConfig, bridged: list[str] | None = None) -> Outcome:
    iface = parse_objc_interface(read_text(iface_path), filename=str(iface_path))
    _check_class(iface.class_name, config)
    return Outcome(generate_reverse(iface, config, bridged).files())


def emit_build(config: ToolConfig, direction: str, swarm_env: bool = False) -> Outcome:
    if not config.class_name:
        raise BridgeError("emit-build needs a class name (--class or 'class =' in the config)")
    plan = forward_plan(config) if direction == "forward" else reverse_plan(config)
    files = {"Makefile": render_makefile(plan)}
    if swarm_env:
        files["Makefile.swarm-env"] = swarm_env_fragments(config)
    return Outcome(files)


def emit_support_header() -> Outcome:
    return Outcome({SUPPORT_HEADER_NAME: emit_support()})


def run_pipeline(header_path: str | Path, config: ToolConfig) -> Outcome:
    """All four steps: describe, translate (build + run the translator), emit the build plan."""
    cd = load_header(header_path, config)
    files = generate(cd, config.objc_imports).files()
    plan = forward_plan(config.with_class(cd.class_name))
    files["Makefile"] = render_makefile(plan)
    return Outcome(files, translation_trace(cd))


def write_outputs(out_dir: str | Path, files: dict[str, str]) -> list[Path]:
    """Write all files or none; unchanged files are left untouched."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    staged: list[tuple[str, Path]] = []
    written = []
    try:
        for name, text in files.items():
            target = out_dir / name
            if target.exists() and target.read_text() == text:
                continue
            fd, tmp = tempfile.mkstemp(prefix=f".{name}.", dir=out_dir)
            with os.fdopen(fd, "w", newline="\n") as f:
                f.write(text)
            staged.append((tmp, target))
    except BaseException:
        for tmp, _ in staged:
            os.unlink(tmp)
        raise
    for tmp, target in staged:
        os.replace(tmp, target)
        written.append(target)
    return written
