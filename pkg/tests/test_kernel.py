from __future__ import annotations

import importlib
import sys

import pytest
from hypothesis import given, settings

import bsv
from bsv import _pykernel, kernel
from bsv.formula import Domain, IntRange, compile_formula
from strategies import ATOMS, formulas, int_formulas

needs_cython = pytest.mark.skipif("cython" not in kernel.available_backends(), reason="extension not built")


def _both(code, lows, radices):
    """first_false under every available backend."""
    out = {}
    for name in kernel.available_backends():
        previous = kernel.use_backend(name)
        try:
            out[name] = kernel.first_false(code, lows, radices)
        finally:
            kernel.use_backend(previous)
    return out


def test_python_backend_always_available():
    assert "python" in kernel.available_backends()
    assert kernel.BACKEND in kernel.available_backends()


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        kernel.use_backend("fortran")


def test_first_false_on_hand_written_code():
    # x0 < 2 over x0 in [0..3]: first failure at x0 = 2
    code = (kernel.LOAD, 0, kernel.PUSH, 2, kernel.LT, 0)
    assert set(_both(code, (0,), (4,)).values()) == {2}
    assert set(_both((kernel.PUSH, 1), (), ()).values()) == {-1}


def test_last_slot_varies_fastest():
    # !(x0 && !x1): first failure is x0=1, x1=0 -> index 2
    code = (kernel.LOAD, 0, kernel.LOAD, 1, kernel.NOT, 0, kernel.AND, 0, kernel.NOT, 0)
    assert set(_both(code, (0, 0), (2, 2)).values()) == {2}


def test_python_source_translation_is_readable():
    code = (kernel.LOAD, 0, kernel.PUSH, 2, kernel.LT, 0)
    assert "<" in _pykernel.to_source(code)


@needs_cython
@settings(max_examples=200, deadline=None)
@given(formulas(two_state=True))
def test_backends_agree_on_boolean_formulas(f):
    prog = compile_formula(f, Domain.booleans(*ATOMS), two_state=True)
    assert len(set(_both(prog.code, prog.lows, prog.radices).values())) == 1


@needs_cython
@settings(max_examples=200, deadline=None)
@given(int_formulas())
def test_backends_agree_on_integer_formulas(f):
    prog = compile_formula(f, Domain({"x": IntRange(-3, 3), "y": IntRange(-3, 3)}), two_state=False)
    assert len(set(_both(prog.code, prog.lows, prog.radices).values())) == 1


def test_falls_back_to_python_when_extension_is_missing(monkeypatch):
    monkeypatch.setitem(sys.modules, "bsv._kernel", None)
    monkeypatch.delattr(bsv, "_kernel", raising=False)
    try:
        importlib.reload(kernel)
        assert kernel.BACKEND == "python"
        assert kernel.available_backends() == ["python"]
        assert kernel.first_false((kernel.PUSH, 0), (), ()) == 0
    finally:
        monkeypatch.undo()
        importlib.reload(kernel)
