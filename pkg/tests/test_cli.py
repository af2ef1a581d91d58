from __future__ import annotations

import io
import shutil
import subprocess
import sys

import pytest

from goldens import golden, matches
from objcbridge.cli import main
from objcbridge.pipeline import write_outputs


@pytest.fixture
def work(tmp_path, data_dir):
    for name in ("myCounter.h", "Heatbug.mh", "heatbug.cfg"):
        shutil.copy(data_dir / name, tmp_path / name)
    return tmp_path


def snapshot(d):
    return {p.name: p.read_bytes() for p in sorted(d.iterdir()) if p.is_file()}


def test_describe(work, capsys):
    assert main(["describe", str(work / "myCounter.h"), "--out-dir", str(work)]) == 0
    assert matches((work / "myCounter.cd").read_text(), golden("myCounter.cd"))


def test_describe_stdin_to_stdout(work, capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO((work / "myCounter.h").read_text()))
    assert main(["describe", "-", "--stdout"]) == 0
    assert matches(capsys.readouterr().out, golden("myCounter.cd"))


def test_describe_overload_fails(work, capsys):
    bad = work / "Bad.h"
    bad.write_text("class Bad: public objc_obj {\npublic:\n  int f(int a);\n  int f(double a);\n};\n")
    assert main(["describe", str(bad), "--out-dir", str(work)]) == 1
    err = capsys.readouterr().err
    assert f"{bad}:4: error:" in err and "overloaded method f" in err
    assert not (work / "Bad.cd").exists()


def test_translate_from_cd(work, capsys):
    main(["describe", str(work / "myCounter.h"), "--out-dir", str(work)])
    capsys.readouterr()
    assert main(["translate", str(work / "myCounter.cd"), "--out-dir", str(work)]) == 0
    out = capsys.readouterr().out
    assert 'Translating array: "sName[20]"' in out
    assert out.rstrip().endswith("End translation.")
    for name in ("myCounter.mh", "myCounter.m", "myCounterExportCpp.cc"):
        assert (work / name).exists()


def test_translate_from_header_matches_cd_route(work, tmp_path_factory):
    other = tmp_path_factory.mktemp("direct")
    main(["describe", str(work / "myCounter.h"), "--out-dir", str(work)])
    main(["translate", str(work / "myCounter.cd"), "--out-dir", str(work)])
    main(["translate", str(work / "myCounter.h"), "--out-dir", str(other)])
    for name in ("myCounter.mh", "myCounter.m", "myCounterExportCpp.cc"):
        assert (work / name).read_bytes() == (other / name).read_bytes()


def test_translate_cd_without_header(tmp_path, work, capsys):
    main(["describe", str(work / "myCounter.h"), "--out-dir", str(tmp_path / "x")])
    assert main(["translate", str(tmp_path / "x" / "myCounter.cd"), "--out-dir", str(tmp_path)]) == 1
    assert "--header" in capsys.readouterr().err
    assert main(["translate", str(tmp_path / "x" / "myCounter.cd"), "--header", str(work / "myCounter.h"),
                 "--out-dir", str(tmp_path)]) == 0


def test_class_mismatch(work, capsys):
    assert main(["describe", str(work / "myCounter.h"), "--class", "Other", "--out-dir", str(work)]) == 1
    assert "Other" in capsys.readouterr().err


def test_reverse(work):
    assert main(["reverse", str(work / "Heatbug.mh"), "--config", str(work / "heatbug.cfg"),
                 "--out-dir", str(work)]) == 0
    assert (work / "HeatbugExportObjc.m").exists()
    assert "objc_getHeat" in (work / "HeatbugExportObjc.m").read_text()


def test_reverse_bridge_flag_and_unknown_method(work, capsys):
    rc = main(["reverse", str(work / "Heatbug.mh"), "--config", str(work / "heatbug.cfg"),
               "--bridge", "fly", "--out-dir", str(work / "out")])
    assert rc == 1
    assert "fly" in capsys.readouterr().err
    assert not (work / "out").exists() or not any((work / "out").iterdir())


def test_emit_build(work):
    assert main(["emit-build", "--class", "myCounter", "--out-dir", str(work)]) == 0
    assert matches((work / "Makefile").read_text(), golden("myCounter.mk"))
    assert main(["emit-build", "--direction", "reverse", "--config", str(work / "heatbug.cfg"),
                 "--swarm-env", "--out-dir", str(work)]) == 0
    assert matches((work / "Makefile").read_text(), golden("Heatbug.mk"))
    assert "libtool-swarm" in (work / "Makefile.swarm-env").read_text()


def test_emit_build_needs_class(work, capsys):
    assert main(["emit-build", "--out-dir", str(work)]) == 1
    assert "class" in capsys.readouterr().err


def test_emit_support(work):
    assert main(["emit-support", "--out-dir", str(work)]) == 0
    text = (work / "ObjCsupport.h").read_text()
    assert "class objc_obj" in text and "class objc_t" in text


def test_pipeline_outputs_and_rerun(work, capsys):
    out = work / "gen"
    assert main(["pipeline", str(work / "myCounter.h"), "--out-dir", str(out)]) == 0
    first = snapshot(out)
    assert sorted(first) == ["Makefile", "myCounter.cd", "myCounter.m", "myCounter.mh", "myCounterExportCpp.cc"]
    mtimes = {p.name: p.stat().st_mtime_ns for p in out.iterdir()}
    assert main(["pipeline", str(work / "myCounter.h"), "--out-dir", str(out)]) == 0
    assert snapshot(out) == first
    assert {p.name: p.stat().st_mtime_ns for p in out.iterdir()} == mtimes


def test_pipeline_error_leaves_directory_untouched(work):
    out = work / "gen"
    main(["pipeline", str(work / "myCounter.h"), "--out-dir", str(out)])
    before = snapshot(out)
    bad = work / "myCounter.h"
    bad.write_text(bad.read_text().replace("int     cpp_prtVec();", "int     cpp_prtVec(;"))
    assert main(["pipeline", str(bad), "--out-dir", str(out)]) == 1
    assert snapshot(out) == before


def test_missing_input(work, capsys):
    assert main(["describe", str(work / "nope.h")]) == 1
    assert "cannot read" in capsys.readouterr().err


def test_internal_error_exit_status(work, monkeypatch, capsys):
    import objcbridge.pipeline as pl

    def boom(*a, **k):
        raise RuntimeError("bug")

    monkeypatch.setattr(pl, "describe", boom)
    assert main(["describe", str(work / "myCounter.h")]) == 2
    assert "internal error" in capsys.readouterr().err


def test_write_outputs_is_all_or_nothing(tmp_path, monkeypatch):
    import os

    real = os.replace
    calls = []

    def flaky(src, dst):
        calls.append(dst)
        real(src, dst)

    monkeypatch.setattr(os, "replace", flaky)
    write_outputs(tmp_path, {"a.txt": "1\n", "b.txt": "2\n"})
    assert len(calls) == 2
    calls.clear()
    write_outputs(tmp_path, {"a.txt": "1\n", "b.txt": "3\n"})
    assert [p.name for p in calls] == ["b.txt"]
    assert not [p for p in tmp_path.iterdir() if p.name.startswith(".")]


def test_module_entry_point(work):
    proc = subprocess.run(
        [sys.executable, "-m", "objcbridge", "emit-build", "--class", "Foo", "--stdout"],
        capture_output=True, text=True, check=True,
    )
    assert "Foo.cd: Foo.h" in proc.stdout
