"""Compile and run generated code with real toolchains (skipped when unavailable)."""

from __future__ import annotations

import glob
import shutil
import subprocess
from pathlib import Path

import pytest

from objcbridge.cli import main as cli
from objcbridge.support import emit_support

NATIVE = Path(__file__).parent / "data" / "native"


def _objc_include() -> str | None:
    hits = sorted(glob.glob("/usr/lib/gcc/*/*/include/objc/Object.h"))
    return str(Path(hits[-1]).parent.parent) if hits else None


OBJC_INCLUDE = _objc_include()
HAVE_CXX = shutil.which("g++") is not None
HAVE_OBJC = HAVE_CXX and all(shutil.which(t) for t in ("clang", "make")) and OBJC_INCLUDE is not None

needs_cxx = pytest.mark.skipif(not HAVE_CXX, reason="g++ not found")
needs_objc = pytest.mark.skipif(not HAVE_OBJC, reason="clang, make or GNU Objective-C headers not found")
OBJC_CC = "clang -fobjc-runtime=gcc -Wno-objc-root-class"


def run(cmd, cwd, **kw) -> str:
    proc = subprocess.run(cmd, cwd=cwd, capture_output=True, text=True, **kw)
    assert proc.returncode == 0, proc.stdout + proc.stderr
    return proc.stdout


def compile_cpp(tmp_path, source: str) -> str:
    (tmp_path / "ObjCsupport.h").write_text(emit_support())
    (tmp_path / "t.cc").write_text(source)
    run(["g++", "-Wall", "-o", "t", "t.cc"], tmp_path)
    return run(["./t"], tmp_path)


@needs_cxx
def test_support_sum_of_extracted_arguments(tmp_path):
    out = compile_cpp(
        tmp_path,
        r"""
#include <stdio.h>
#include "ObjCsupport.h"
struct C : objc_obj {
  double sumN_x1(double x1, objc_t& buf) { double x2, x3; buf >> x2 >> x3; return x1 + x2 + x3; }
};
static double call(C *c, double x1, ...)
{ va_list ap; va_start(ap, x1); objc_t b; b.ap = &ap; double r = c->sumN_x1(x1, b); va_end(ap); return r; }
int main() { C c; printf("%.17g\n", call(&c, 1.1, 2.2, 3.3)); }
""",
    )
    assert abs(float(out) - 6.6) < 1e-12


@needs_cxx
def test_support_default_promotions(tmp_path):
    out = compile_cpp(
        tmp_path,
        r"""
#include <stdio.h>
#include "ObjCsupport.h"
static void probe(int n, ...)
{
  va_list ap; va_start(ap, n); objc_t b; b.ap = &ap;
  float f; char c; signed char sc; unsigned char uc; short s; unsigned short us;
  int i; unsigned u; long l; unsigned long ul; long long ll; unsigned long long ull;
  double d; long double ld; const char *p;
  b >> f >> c >> sc >> uc >> s >> us >> i >> u >> l >> ul >> ll >> ull >> d >> ld >> p;
  va_end(ap);
  printf("%g %d %d %d %d %d %d %u %ld %lu %lld %llu %g %Lg %s\n",
         f, c, sc, uc, s, us, i, u, l, ul, ll, ull, d, ld, p);
}
int main()
{
  float f = 1.5f; char c = 'A'; signed char sc = -3; unsigned char uc = 250;
  short s = -1234; unsigned short us = 60000;
  probe(0, f, c, sc, uc, s, us, -7, 4000000000u, -9L, 9UL, -5LL, 123456789012345ULL,
        2.25, (long double) 3.5, "ok");
}
""",
    )
    assert out.split() == [
        "1.5", "65", "-3", "250", "-1234", "60000", "-7", "4000000000", "-9", "9", "-5",
        "123456789012345", "2.25", "3.5", "ok",
    ]


@needs_cxx
def test_support_zero_extractions_leave_cursor(tmp_path):
    out = compile_cpp(
        tmp_path,
        r"""
#include <stdio.h>
#include "ObjCsupport.h"
static int first(objc_t& b) { (void) b; return 0; }
static void probe(int n, ...)
{ va_list ap; va_start(ap, n); objc_t b; b.ap = &ap; first(b); int x; b >> x; printf("%d\n", x); va_end(ap); }
int main() { probe(0, 41); }
""",
    )
    assert out.strip() == "41"


@needs_cxx
def test_first_field_follows_isa_slot(tmp_path, data_dir):
    shutil.copy(data_dir / "myCounter.h", tmp_path / "myCounter.h")
    out = compile_cpp(
        tmp_path,
        r"""
#include <stdio.h>
#include "myCounter.h"
int main()
{
  myCounter c;
  printf("%d %d\n", (int) ((char *) &c.sName - (char *) &c), (int) sizeof(void *));
}
""",
    )
    offset, ptr = out.split()
    assert offset == ptr


@needs_cxx
def test_placement_construction_keeps_isa(tmp_path):
    out = compile_cpp(
        tmp_path,
        r"""
#include <stdio.h>
#include <new>
#include "ObjCsupport.h"
struct C : objc_obj { int n; C(): n(7) {} };
int main()
{
  void *mem[4]; mem[0] = (void *) 0x1234;
  C *c = new (mem) C;
  printf("%d %d\n", c->isa == (void *) 0x1234, c->n);
}
""",
    )
    assert out.split() == ["1", "7"]


def _make(tmp_path, target, **overrides):
    args = ["make", target] + [f"{k}={v}" for k, v in overrides.items()]
    return run(args, tmp_path)


@needs_objc
def test_forward_build_my_counter(tmp_path, data_dir, monkeypatch):
    for name in ("myCounter.h", "myCounter.cc", "main.m"):
        shutil.copy(data_dir / name, tmp_path / name)
    monkeypatch.chdir(tmp_path)
    assert cli(["pipeline", "myCounter.h"]) == 0
    assert cli(["emit-support"]) == 0
    _make(tmp_path, "appl", CPP="g++", CC=OBJC_CC, CFLAGS=f"-g -I{OBJC_INCLUDE}", LIBS="-lobjc")
    out = run(["./main"], tmp_path)
    assert "va_list sum = 6.600000" in out
    assert "standard sum = 3.300000" in out
    assert "name = c1 iaX[1][3] = 23" in out


@needs_objc
def test_forward_build_probe(tmp_path, monkeypatch):
    for p in NATIVE.glob("Probe.*"):
        shutil.copy(p, tmp_path / p.name)
    shutil.copy(NATIVE / "main.m", tmp_path / "main.m")
    monkeypatch.chdir(tmp_path)
    assert cli(["pipeline", "Probe.h"]) == 0
    assert cli(["emit-support"]) == 0
    _make(tmp_path, "appl", CPP="g++", CC=OBJC_CC, CFLAGS=f"-g -I{OBJC_INCLUDE}", LIBS="-lobjc")
    out = run(["./main"], tmp_path).splitlines()
    assert out == [
        "init tag=P weight=0.50 ratio=0.25 count=0",
        "total=11.00",
        "promo=13.50",
        "bump=7",
        "count=0",
        "grid=9",
        "mix=6.50",
        "label=5",
        "peer=1",
    ]


@needs_objc
def test_reverse_build_tally(tmp_path, monkeypatch):
    for name in ("Tally.mh", "Tally.m", "Tally.cc", "tally_main.m", "tally.cfg"):
        shutil.copy(NATIVE / name, tmp_path / name)
    (tmp_path / "bin").mkdir()
    shutil.copy(NATIVE / "libtool-swarm", tmp_path / "bin" / "libtool-swarm")
    monkeypatch.chdir(tmp_path)
    assert cli(["reverse", "Tally.mh", "--config", "tally.cfg"]) == 0
    assert cli(["emit-support"]) == 0
    assert cli(["emit-build", "--direction", "reverse", "--config", "tally.cfg"]) == 0
    _make(
        tmp_path, "tally", CPP="g++", OBJC=OBJC_CC, OBJCFLAGS=f"-I{OBJC_INCLUDE}",
        bindir=str(tmp_path / "bin"), LIBS="-lobjc",
    )
    assert run(["./tally"], tmp_path).strip() == "hits=3 misses=4 level=7.50"
