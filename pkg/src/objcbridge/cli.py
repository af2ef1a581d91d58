"""Command-line entry point: ``objcbridge <command> ...``."""

from __future__ import annotations

import argparse
import logging
import sys

from . import pipeline
from .config import load_config
from .errors import BridgeError


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--class", dest="class_name", help="class name (overrides the config file)")
    p.add_argument("--config", help="project configuration file")
    p.add_argument("--out-dir", default=".", help="directory for generated files (default: .)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="objcbridge", description="Generate C++/Objective-C bridge code")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("describe", help="write <class>.cd from a C++ class header")
    p.add_argument("header", help="C++ header, or - for standard input")
    p.add_argument("--stdout", action="store_true", help="print the description instead of writing a file")
    _common(p)

    p = sub.add_parser("translate", help="write <class>.mh, <class>.m and <class>ExportCpp.cc")
    p.add_argument("input", help="class header (.h) or class description (.cd)")
    p.add_argument("--header", help="header matching a .cd input (default: <class>.h next to it)")
    _common(p)

    p = sub.add_parser("reverse", help="write the C++ template and shims for an Objective-C interface")
    p.add_argument("interface", help="Objective-C interface file")
    p.add_argument("--bridge", action="append", metavar="SELECTOR",
                   help="method to bridge into C++ (repeatable; replaces bridged_methods from the config)")
    _common(p)

    p = sub.add_parser("emit-build", help="write a Makefile for either direction")
    p.add_argument("--direction", choices=("forward", "reverse"), default="forward")
    p.add_argument("--swarm-env", action="store_true", help="also write the Swarm makefile fragments")
    p.add_argument("--stdout", action="store_true", help="print the Makefile instead of writing it")
    _common(p)

    p = sub.add_parser("emit-support", help="write the ObjCsupport.h support header")
    _common(p)

    p = sub.add_parser("pipeline", help="describe, translate and emit the build plan in one step")
    p.add_argument("header", help="C++ class header")
    _common(p)
    return parser


def run(args: argparse.Namespace) -> pipeline.Outcome:
    config = load_config(args.config).with_class(args.class_name)
    cmd = args.command
    if cmd == "describe":
        if args.header == "-":
            return pipeline.describe("<stdin>", config, sys.stdin.read())
        return pipeline.describe(args.header, config)
    if cmd == "translate":
        return pipeline.translate(args.input, config, args.header)
    if cmd == "reverse":
        return pipeline.reverse(args.interface, config, args.bridge)
    if cmd == "emit-build":
        return pipeline.emit_build(config, args.direction, args.swarm_env)
    if cmd == "emit-support":
        return pipeline.emit_support_header()
    return pipeline.run_pipeline(args.header, config)


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(format="%(levelname)s: %(message)s", level=logging.WARNING, stream=sys.stderr)
    args = build_parser().parse_args(argv)
    try:
        outcome = run(args)
        if getattr(args, "stdout", False):
            for text in outcome.files.values():
                sys.stdout.write(text)
        else:
            pipeline.write_outputs(args.out_dir, outcome.files)
    except BridgeError as e:
        print(e, file=sys.stderr)
        return 1
    except OSError as e:
        print(f"objcbridge: {e}", file=sys.stderr)
        return 1
    except Exception as e:  # pragma: no cover - defensive
        print(f"objcbridge: internal error: {e!r}", file=sys.stderr)
        return 2
    for line in outcome.trace:
        print(line)
    return 0
