"""Pure-Python enumeration kernel.

The postfix program is turned into a Python expression once and evaluated
over ``itertools.product`` of the slot ranges.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

_CMP = {7: "<", 8: "<=", 9: "==", 10: "!=", 11: ">=", 12: ">"}


def to_source(code: tuple[int, ...]) -> str:
    stack: list[str] = []
    for i in range(0, len(code), 2):
        op, arg = code[i], code[i + 1]
        if op == 0:
            stack.append(str(arg))
        elif op == 1:
            stack.append(f"v[{arg}]")
        elif op == 2:
            stack.append(f"(not {stack.pop()})")
        else:
            b = stack.pop()
            a = stack.pop()
            if op == 3:
                stack.append(f"({a} and {b})")
            elif op == 4:
                stack.append(f"({a} or {b})")
            elif op == 5:
                stack.append(f"((not {a}) or {b})")
            elif op == 6:
                stack.append(f"(bool({a}) == bool({b}))")
            elif op in _CMP:
                stack.append(f"({a} {_CMP[op]} {b})")
            else:
                raise ValueError(f"bad opcode {op}")
    if len(stack) != 1:
        raise ValueError("malformed program")
    return stack[0]


@lru_cache(maxsize=4096)
def _predicate(code: tuple[int, ...]):
    return eval(f"lambda v: {to_source(code)}", {"bool": bool})


def first_false(code: tuple[int, ...], lows: tuple[int, ...], radices: tuple[int, ...]) -> int:
    pred = _predicate(code)
    ranges = [range(lo, lo + r) for lo, r in zip(lows, radices)]
    for i, v in enumerate(product(*ranges)):
        if not pred(v):
            return i
    return -1
