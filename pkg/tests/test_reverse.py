from __future__ import annotations

import pytest

from goldens import contains, golden, matches
from objcbridge.config import load_config, parse_config
from objcbridge.errors import ConfigError, ParseError, SpecError
from objcbridge.reverse import (
    TypedefSpec,
    cpp_type,
    emit_cpp_class_template,
    emit_method_bridge,
    emit_selector_exports,
    emit_typedef_bridge,
    generate_reverse,
    inherits_swarm_object,
    parse_export_decl,
    parse_objc_interface,
)


@pytest.fixture
def heatbug(data_dir):
    return parse_objc_interface((data_dir / "Heatbug.mh").read_text(), "Heatbug.mh")


@pytest.fixture
def config(data_dir):
    return load_config(data_dir / "heatbug.cfg")


def test_interface_parse(heatbug):
    assert heatbug.class_name == "Heatbug" and heatbug.base_name == "SwarmObject"
    assert [iv.name for iv in heatbug.ivars] == [
        "unhappiness", "x", "y", "idealTemperature", "outputHeat", "randomMoveProbability",
        "world", "worldXSize", "worldYSize", "heat", "bugColor",
    ]
    world = heatbug.ivars[6]
    assert world.protocol == "Grid2d"
    assert heatbug.ivars[9].is_pointer
    assert "step" in heatbug.method_selectors
    assert "setX:Y:" in heatbug.method_selectors


def test_class_template_golden(heatbug, config):
    text = emit_cpp_class_template(heatbug, ["step"], config)
    assert contains(text, golden("Heatbug_template.h"))


def test_typedef_golden(config):
    assert matches(emit_typedef_bridge(config.typedef_specs), golden("HeatbugTypes.h"))


def test_step_bridge_golden():
    objc, cpp = emit_method_bridge("Heatbug", "step")
    assert matches(objc, golden("Heatbug_step_bridge.m"))
    assert matches(cpp, golden("Heatbug_step_export.cc"))


def test_get_heat_export_golden(config):
    text = emit_selector_exports(config.selector_exports, config.objc_imports)
    assert contains(text, golden("Heatbug_getHeat.m"))


def test_zbits_only_for_swarm_objects(heatbug, config):
    assert "zbits" in emit_cpp_class_template(heatbug, [], config)
    plain = parse_objc_interface("@interface P: Object { int a; } - run; @end")
    assert "zbits" not in emit_cpp_class_template(plain, ["run"], config)


def test_zbits_through_base_chain(config):
    iface = parse_objc_interface("@interface Sub: Heatbug { int extra; } @end")
    assert "zbits" in emit_cpp_class_template(iface, [], config)


def test_base_chain_cycle():
    with pytest.raises(ConfigError, match="cycle"):
        inherits_swarm_object("A", {"A": "B", "B": "A"})


@pytest.mark.parametrize(
    "objc,cpp",
    [
        ("int", "int"),
        ("id <Grid2d>", "id"),
        ("HeatSpace *", "id"),
        ("char *", "char *"),
        ("HeatValue", "HeatValue"),
    ],
)
def test_cpp_type(objc, cpp):
    assert cpp_type(objc, ["HeatValue"]) == cpp


def test_bridge_with_arguments():
    iface = parse_objc_interface("@interface A: Object { } - (double) scale: (double) f by: (int) n; @end")
    objc, cpp = emit_method_bridge("A", iface.methods[0])
    assert objc.splitlines() == [
        "double cpp_A_scale(A * obj, double f, int n);",
        "- (double) scale: (double) f by: (int) n",
        "{ return cpp_A_scale(self, f, n); }",
    ]
    assert "{ return obj->scale(f, n); }" in cpp


def test_unknown_bridged_method(heatbug, config):
    with pytest.raises(SpecError, match="fly"):
        generate_reverse(heatbug, config, ["fly"])


def test_duplicate_export_names(heatbug, data_dir):
    text = (data_dir / "heatbug.cfg").read_text().replace("objc_addHeat =", "objc_getHeat =")
    with pytest.raises((SpecError, ConfigError)):
        generate_reverse(heatbug, parse_config(text))


def test_duplicate_typedef():
    with pytest.raises(SpecError):
        emit_typedef_bridge([TypedefSpec("A", "int"), TypedefSpec("A", "long")])


def test_files_without_exports_or_typedefs(heatbug):
    files = generate_reverse(heatbug, parse_config("class = Heatbug\nbridged_methods = step\n")).files()
    assert sorted(files) == ["Heatbug.h", "HeatbugBridge.inc", "HeatbugExportCpp.cc"]


def test_full_file_set(heatbug, config):
    files = generate_reverse(heatbug, config).files()
    assert sorted(files) == [
        "Heatbug.h", "HeatbugBridge.inc", "HeatbugExportCpp.cc", "HeatbugExportObjc.m", "HeatbugTypes.h",
    ]
    assert '#include "HeatbugTypes.h"' in files["Heatbug.h"]
    assert "int objc_getHeat(void * heatobj, int px, int py);" in files["Heatbug.h"]


def test_export_decl_forms():
    spec = parse_export_decl("f", "void (id <Grid2d>) w putObject: (id) o atX: (int) x Y: (int) y")
    assert spec.receiver_cast == "(id <Grid2d>)"
    assert spec.selector == "putObject:atX:Y:"
    unary = parse_export_decl("g", "int (Counter *) c count")
    assert unary.selector == "count"
    with pytest.raises(ConfigError):
        parse_export_decl("h", "(Counter *) c count")


@pytest.mark.parametrize(
    "src,needle",
    [
        ("@interface A: Object { int a; }", "@end"),
        ("@interface A (Cat) - f; @end", "categories"),
        ("@interface A { int a; } @end", "root class"),
        ("@interface A: Object @property int a; @end", "@property"),
        ("@interface A: Object @end @interface B: Object @end", "more than one"),
        ("int x;", "@interface"),
        ("@interface A: Object { int a; int a; } @end", "duplicate"),
    ],
)
def test_interface_errors(src, needle):
    with pytest.raises(ParseError) as e:
        parse_objc_interface(src)
    assert needle in str(e.value)


def test_variadic_methods_are_not_bridgeable():
    iface = parse_objc_interface("@interface A: Object - (int) sum: (int) n, ...; @end")
    with pytest.raises(SpecError, match="variadic"):
        emit_cpp_class_template(iface, ["sum:"])
