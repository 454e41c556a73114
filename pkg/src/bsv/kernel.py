"""Enumeration kernel: find the first assignment falsifying a postfix program.

The compiled extension (``bsv._kernel``) is used when it imports; otherwise
the pure-Python implementation in ``bsv._pykernel`` takes over. Both honour
the same contract and enumeration order (last slot varies fastest).
"""

from __future__ import annotations

from typing import Sequence

PUSH = 0
LOAD = 1
NOT = 2
AND = 3
OR = 4
IMP = 5
IFF = 6
LT = 7
LE = 8
EQ = 9
NE = 10
GE = 11
GT = 12

CMP_OPCODES = {"<": LT, "<=": LE, "==": EQ, "!=": NE, ">=": GE, ">": GT}
BINARY_OPCODES = {"And": AND, "Or": OR, "Implies": IMP, "Iff": IFF}

from . import _pykernel  # noqa: E402

try:
    from . import _kernel as _ckernel  # type: ignore[attr-defined]  # noqa: E402
except ImportError:  # extension not built
    _ckernel = None

_BACKENDS = {"python": _pykernel}
if _ckernel is not None:
    _BACKENDS["cython"] = _ckernel

BACKEND = "cython" if _ckernel is not None else "python"


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def use_backend(name: str) -> str:
    """Switch the active backend; returns the previous one."""
    global BACKEND
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} unavailable (have {available_backends()})")
    previous, BACKEND = BACKEND, name
    return previous


def first_false(code: Sequence[int], lows: Sequence[int], radices: Sequence[int]) -> int:
    """Index of the first falsifying assignment in mixed-radix order, or -1."""
    return _BACKENDS[BACKEND].first_false(tuple(code), tuple(lows), tuple(radices))
