"""Build plans (Makefile text) for both bridge directions.

A :class:`BuildPlan` is the structured form; :func:`render_makefile` turns it
into text.  The forward plan keeps the original two-step translator recipe
(compile ``write_objc``, then run it) even though this tool translates in
process, so the emitted Makefile works with the original toolchain.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .config import ToolConfig

SUFFIXES = (".o", ".m", ".mo", ".mh", ".cd", ".cc", ".xm")
TRANSLATOR_SOURCE = "write_objc.cc"


@dataclass(frozen=True)
class Rule:
    target: str
    prerequisites: tuple[str, ...] = ()
    recipe: tuple[str, ...] = ()


@dataclass
class BuildPlan:
    direction: str
    class_name: str
    suffix_rules: list[Rule]
    object_lists: dict[str, list[str]]
    link_rule: Rule
    dependency_edges: list[tuple[str, tuple[str, ...]]]
    clean_rule: Rule
    # plain variables rendered ahead of the object lists
    variables: list[tuple[str, str]] = field(default_factory=list)
    # toolchain defaults rendered after everything else (forward) or first (reverse)
    toolchain: list[tuple[str, str]] = field(default_factory=list)
    appended_objects: list[tuple[str, str]] = field(default_factory=list)
    sources: set[str] = field(default_factory=set)
    # files written as a side effect of building a target
    side_products: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def expand(self, words) -> list[str]:
        out = []
        for w in words:
            m = re.fullmatch(r"\$\((\w+)\)", w)
            if m and m.group(1) in self.object_lists:
                out += self.expand(self.object_lists[m.group(1)])
                out += self.expand([v for name, v in self.appended_objects if name == m.group(1)])
            else:
                out.append(w)
        return out

    def mentioned_files(self) -> set[str]:
        names = set()
        for target, prereqs in self.dependency_edges:
            names.add(target)
            names.update(prereqs)
        names.update(self.expand(self.link_rule.prerequisites))
        return names


def _wrap(head: str, words: list[str], sep: str = " ", width: int = 60) -> str:
    """``head`` followed by ``words``, continued with backslash-newline past ``width``."""
    lines = []
    current = head
    for i, w in enumerate(words):
        if i and len(current) + 1 + len(w) > width:
            lines.append(current + " \\")
            current = "\t" + w
        else:
            current += (sep if i == 0 else " ") + w
    lines.append(current)
    return "\n".join(lines)


def _rule_text(rule: Rule) -> list[str]:
    head = f"{rule.target}:"
    if rule.prerequisites:
        head = _wrap(head, list(rule.prerequisites))
    return [head] + [f"\t{line}" for line in rule.recipe]


def forward_plan(config: ToolConfig) -> BuildPlan:
    cls = config.class_name
    translator = config.tool("translator")
    objc_objects = list(config.objc_objects) if config.objc_objects is not None else ["main.o"]
    suffix_rules = [
        Rule(".h.cd", recipe=(f"{config.tool('classdesc')} -objc writeobjc < $< > $@",)),
        Rule(
            ".h.mh",
            recipe=(
                f"$(CPP) -g -c {cls}.cc",
                f"$(CPP) -g -DCNAME={cls} -o {translator} $(CPPOBJ) $(OBJC_TRANSLATOR)",
                translator,
            ),
        ),
        Rule(".m.mo", recipe=("$(CC) -c -o $@ -Wno-import $(CFLAGS) $<",)),
        Rule(".m.o", recipe=("$(CC) -c -Wno-import $(CFLAGS) $<",)),
        Rule(".cc.o", recipe=("$(CPP) -g -c $(OPTFLAGS) $<",)),
    ]
    object_lists = {
        "OBJC_cd": [f"{cls}.cd"],
        "OBJC_mh": [f"{cls}.mh"],
        "CPPOBJ": [f"{cls}.o"],
        "INTERFACE_OBJ": [f"{cls}ExportCpp.o"],
        "OBJC_TRANSLATOR": [TRANSLATOR_SOURCE],
        "OBJCOBJ": objc_objects + [f"{cls}.mo"],
        "OBJ": ["$(OBJCOBJ)", "$(CPPOBJ)", "$(INTERFACE_OBJ)"],
    }
    link = Rule(
        "appl",
        ("$(OBJC_cd)", "$(OBJC_mh)", "$(OBJ)"),
        (f"$(CPP) $(CFLAGS) -o {config.program} $(OBJ) $(LIBS)",),
    )
    edges = [(o, (o[:-2] + ".m",)) for o in objc_objects]
    edges += [
        (f"{cls}.cd", (f"{cls}.h",)),
        (f"{cls}.mo", (f"{cls}.mh", f"{cls}.m")),
        (f"{cls}.o", (f"{cls}.h", f"{cls}.cc")),
        (f"{cls}ExportCpp.o", (f"{cls}.h", f"{cls}ExportCpp.cc")),
        (f"{cls}.mh", (f"{cls}.h", f"{cls}.cc")),
    ]
    edges += [(t, p) for t, p in config.dependencies]
    clean = Rule(
        "clean",
        recipe=(
            f"rm -f *.o *.mo *.*~ *~ {config.program} *.cd *,D",
            f"rm {cls}ExportCpp.cc {translator} {cls}.mh {cls}.m",
        ),
    )
    toolchain = [
        ("CPP", config.tool("cpp")),
        ("CC", config.tool("cc")),
        ("CFLAGS", config.tool("cflags")),
        ("OPTFLAGS", config.tool("optflags")),
    ]
    return BuildPlan(
        direction="forward",
        class_name=cls,
        suffix_rules=suffix_rules,
        object_lists=object_lists,
        link_rule=link,
        dependency_edges=edges,
        clean_rule=clean,
        variables=[("LIBS", config.tool("libs"))],
        toolchain=toolchain,
        sources={f"{cls}.h", f"{cls}.cc", TRANSLATOR_SOURCE} | {o[:-2] + ".m" for o in objc_objects},
        side_products={f"{cls}.mh": (f"{cls}.m", f"{cls}ExportCpp.cc", f"{cls}.o", translator)},
    )


def swarm_rules(config: ToolConfig) -> tuple[list[Rule], Rule]:
    """The suffix rules and link rule a Swarm installation needs to mix C++ and Objective-C."""
    suffix_rules = [
        Rule(
            ".m.mo",
            recipe=("$(OBJC) -c -o $@ $(OBJCFLAGS) $(CPPFLAGS) $(DLLCPPFLAGS) $(EXTRACPPFLAGS) $(SWARMINCLUDES) $<",),
        ),
        Rule(".cc.o", recipe=("$(CPP) -g -c $(OPTFLAGS) $<",)),
    ]
    link = Rule(
        "$(APPEXE)",
        ("$(OBJECTS)",),
        ("$(SHELL) $(bindir)/libtool-swarm --mode link $(CPP) $(CFLAGS) $(LDFLAGS) -o $@ $(OBJECTS) $(LIBS)",),
    )
    return suffix_rules, link


def reverse_plan(config: ToolConfig) -> BuildPlan:
    cls = config.class_name
    extra = list(config.objc_objects) if config.objc_objects is not None else ["main.o"]
    objcobj = [f"{cls}.mo"] + extra
    has_exports = bool(config.selector_exports)
    if has_exports:
        objcobj.append(f"{cls}ExportObjc.o")
    suffix_rules, link = swarm_rules(config)
    suffix_rules.insert(1, Rule(".m.o", recipe=("$(OBJC) -c $(OBJCFLAGS) $(CPPFLAGS) $(SWARMINCLUDES) $<",)))
    edges = [(t, p) for t, p in config.dependencies]
    edges += [
        (f"{cls}.mo", (f"{cls}.m", f"{cls}.mh")),
        (f"{cls}.o", (f"{cls}.cc", f"{cls}.h")),
        (f"{cls}ExportCpp.o", (f"{cls}ExportCpp.cc", f"{cls}.h")),
    ]
    if has_exports:
        edges.append((f"{cls}ExportObjc.o", (f"{cls}ExportObjc.m",)))
    application = config.application or cls.lower()
    toolchain = [
        ("SWARMHOME", config.tool("swarm_home")),
        ("bindir", "$(SWARMHOME)/bin"),
        ("APPLICATION", application),
        ("APPEXE", "$(APPLICATION)"),
        ("CPP", config.tool("cpp")),
        ("OBJC", config.tool("objc")),
    ]
    generated = {f"{cls}.h", f"{cls}ExportCpp.cc"} | ({f"{cls}ExportObjc.m"} if has_exports else set())
    sources = {f"{cls}.m", f"{cls}.mh", f"{cls}.cc"} | generated | {o[:-2] + ".m" for o in extra}
    for _, prereqs in config.dependencies:
        sources.update(p for p in prereqs if not p.endswith((".o", ".mo")))
    return BuildPlan(
        direction="reverse",
        class_name=cls,
        suffix_rules=suffix_rules,
        object_lists={"CPPOBJ": [f"{cls}.o"], "OBJCOBJ": objcobj, "OBJECTS": ["$(OBJCOBJ)", "$(CPPOBJ)"]},
        link_rule=link,
        dependency_edges=edges,
        clean_rule=Rule("clean", recipe=("rm -f *.o *.mo $(APPEXE)",)),
        toolchain=toolchain,
        appended_objects=[("OBJECTS", f"{cls}ExportCpp.o")],
        sources=sources,
    )


def _suffixes_line() -> str:
    return ".SUFFIXES: " + " ".join(SUFFIXES)


def render_makefile(plan: BuildPlan) -> str:
    out: list[str] = []
    if plan.direction == "reverse":
        out += [f"{k}={v}" for k, v in plan.toolchain]
        out.append(_suffixes_line())
    for rule in plan.suffix_rules:
        out += _rule_text(rule)
    out += [_wrap(f"{k} =", v.split()) for k, v in plan.variables]
    out.append("")
    for name, words in plan.object_lists.items():
        out.append(_wrap(f"{name}=", words, sep=""))
    out += [f"{name}+={value}" for name, value in plan.appended_objects]
    if plan.direction == "reverse":
        out.append("")
    out += _rule_text(plan.link_rule)
    out.append("")
    for target, prereqs in plan.dependency_edges:
        out.append(_wrap(f"{target}:", list(prereqs)))
    out.append("")
    out += _rule_text(plan.clean_rule)
    if plan.direction == "forward":
        out += ["", "# toolchain defaults; override on the make command line"]
        out += [f"{k}={v}" for k, v in plan.toolchain]
        out.append(_suffixes_line())
    return "\n".join(out) + "\n"


def swarm_env_fragments(config: ToolConfig) -> str:
    """Text to merge into an installed Swarm's Makefile.common, Makefile.rule and Makefile.appl."""
    suffix_rules, link = swarm_rules(config)
    out = ["# Makefile.common: C++ compiler", f"CPP={config.tool('cpp')}", ""]
    out += ["# Makefile.rule: Objective-C object and C++ object rules", _suffixes_line()]
    for rule in suffix_rules:
        out += _rule_text(rule)
    out += ["", "# Makefile.appl: link with the C++ driver"]
    out += _rule_text(link)
    return "\n".join(out) + "\n"


def unresolved_inputs(plan: BuildPlan) -> list[str]:
    """Files the link rule needs that nothing in the plan produces (empty when closed)."""
    edges: dict[str, list[str]] = {}
    for target, prereqs in plan.dependency_edges:
        edges.setdefault(target, []).extend(prereqs)
    suffix_pairs = []
    for rule in plan.suffix_rules:
        parts = rule.target.split(".")
        if len(parts) == 3 and not parts[0]:
            suffix_pairs.append(("." + parts[1], "." + parts[2]))
    producers = {p: t for t, ps in plan.side_products.items() for p in ps}
    memo: dict[str, bool] = {}

    def producible(name: str, stack: frozenset[str]) -> bool:
        if name in memo:
            return memo[name]
        if name in plan.sources:
            return True
        if name in stack:
            return False
        stack = stack | {name}
        ok = all(producible(p, stack) for p in edges.get(name, []))
        if ok:
            ok = (
                any(name.endswith(dst) and producible(name[: -len(dst)] + src, stack) for src, dst in suffix_pairs)
                or (name in producers and producible(producers[name], stack))
            )
        memo[name] = ok
        return ok

    return [f for f in plan.expand(plan.link_rule.prerequisites) if not producible(f, frozenset())]
