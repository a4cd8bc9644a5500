"""Extended integers: ``int`` plus the two float infinities.

Python floats already order and saturate correctly against ints, so the
only work here is parsing, formatting and a guarded subtraction.
"""

from __future__ import annotations

import math
from typing import Union

ExtInt = Union[int, float]

POS_INF: float = math.inf
NEG_INF: float = -math.inf


def is_ext(value: object) -> bool:
    if isinstance(value, bool):
        return False
    if isinstance(value, int):
        return True
    return isinstance(value, float) and math.isinf(value)


def ext_sub(a: ExtInt, b: ExtInt) -> ExtInt:
    if math.isinf(a) and math.isinf(b) and (a > 0) == (b > 0):
        raise ValueError("inf - inf is undefined")
    result = a - b
    return result if isinstance(result, float) else int(result)


def parse_ext(text: str | int) -> ExtInt:
    if isinstance(text, int) and not isinstance(text, bool):
        return text
    s = str(text).strip().lower().replace("∞", "inf")
    if s in ("inf", "+inf", "infinity", "+infinity"):
        return POS_INF
    if s in ("-inf", "-infinity"):
        return NEG_INF
    return int(s)


def format_ext(value: ExtInt) -> str:
    if value == POS_INF:
        return "+inf"
    if value == NEG_INF:
        return "-inf"
    return str(int(value))


def to_json(value: ExtInt) -> int | str:
    return format_ext(value) if math.isinf(value) else int(value)
