"""Canonical JSON form of payload values: {"type": "<TagName>", "value": ...}.

Used by the HTTP gateway and the devcli tool.  The mapping is a bijection on
the value domain; floats survive because json uses shortest-representation
printing and DevFloat values are already rounded to binary32 on construction.
"""
from __future__ import annotations

from .model import (
    DeviceState,
    MIXED_TAGS,
    TangoTypeTag,
    TangoValue,
    fail,
    make_value,
)

_INT_TAGS = {
    TangoTypeTag.DevShort, TangoTypeTag.DevUShort,
    TangoTypeTag.DevLong, TangoTypeTag.DevULong,
}
_FLOAT_TAGS = {TangoTypeTag.DevFloat, TangoTypeTag.DevDouble}
_INT_SEQ_TAGS = {
    TangoTypeTag.DevVarShortArray, TangoTypeTag.DevVarUShortArray,
    TangoTypeTag.DevVarLongArray, TangoTypeTag.DevVarULongArray,
}
_FLOAT_SEQ_TAGS = {TangoTypeTag.DevVarFloatArray, TangoTypeTag.DevVarDoubleArray}


def value_to_json(v: TangoValue) -> dict:
    tag = v.tag
    if tag is TangoTypeTag.DevVoid:
        return {"type": "DevVoid"}
    if tag is TangoTypeTag.DevState:
        return {"type": tag.name, "value": v.value.name}
    if tag is TangoTypeTag.DevVarLongStringArray:
        longs, strings = v.value
        return {"type": tag.name, "value": {"longs": list(longs), "strings": list(strings)}}
    if tag is TangoTypeTag.DevVarDoubleStringArray:
        doubles, strings = v.value
        return {"type": tag.name, "value": {"doubles": list(doubles), "strings": list(strings)}}
    if isinstance(v.value, tuple):
        return {"type": tag.name, "value": list(v.value)}
    return {"type": tag.name, "value": v.value}


def _bad(msg: str):
    return fail("BAD_JSON", msg, "json_to_value")


def _expect_number(x, what: str):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise _bad(f"{what} must be a number, got {type(x).__name__}")
    return x


def _expect_int(x, what: str):
    n = _expect_number(x, what)
    if isinstance(n, float):
        if not n.is_integer():
            raise _bad(f"{what} must be an integer, got {n}")
        n = int(n)
    return n


def json_to_value(obj) -> TangoValue:
    if not isinstance(obj, dict) or "type" not in obj:
        raise _bad('expected an object with a "type" field')
    name = obj["type"]
    try:
        tag = TangoTypeTag[name]
    except KeyError:
        raise _bad(f"unknown type name {name!r}") from None
    if tag is TangoTypeTag.DevVoid:
        return make_value(tag)
    if "value" not in obj:
        raise _bad(f'{name} needs a "value" field')
    val = obj["value"]
    try:
        if tag is TangoTypeTag.DevBoolean:
            if not isinstance(val, bool):
                raise _bad("DevBoolean value must be true/false")
            return make_value(tag, val)
        if tag in _INT_TAGS:
            return make_value(tag, _expect_int(val, name))
        if tag in _FLOAT_TAGS:
            return make_value(tag, _expect_number(val, name))
        if tag is TangoTypeTag.DevString:
            if not isinstance(val, str):
                raise _bad("DevString value must be a string")
            return make_value(tag, val)
        if tag is TangoTypeTag.DevState:
            try:
                return make_value(tag, DeviceState[val])
            except (KeyError, TypeError):
                raise _bad(f"unknown state name {val!r}") from None
        if tag is TangoTypeTag.DevVarBooleanArray:
            if not isinstance(val, list) or any(not isinstance(x, bool) for x in val):
                raise _bad("expected an array of booleans")
            return make_value(tag, val)
        if tag in _INT_SEQ_TAGS:
            if not isinstance(val, list):
                raise _bad("expected an array of integers")
            return make_value(tag, [_expect_int(x, name) for x in val])
        if tag in _FLOAT_SEQ_TAGS:
            if not isinstance(val, list):
                raise _bad("expected an array of numbers")
            return make_value(tag, [_expect_number(x, name) for x in val])
        if tag is TangoTypeTag.DevVarStringArray:
            if not isinstance(val, list) or any(not isinstance(x, str) for x in val):
                raise _bad("expected an array of strings")
            return make_value(tag, val)
        if tag in MIXED_TAGS:
            num_key = "longs" if tag is TangoTypeTag.DevVarLongStringArray else "doubles"
            if not isinstance(val, dict) or num_key not in val or "strings" not in val:
                raise _bad(f'expected an object with "{num_key}" and "strings"')
            nums, strings = val[num_key], val["strings"]
            if not isinstance(nums, list) or not isinstance(strings, list):
                raise _bad(f'"{num_key}" and "strings" must be arrays')
            if any(not isinstance(s, str) for s in strings):
                raise _bad('"strings" must contain strings')
            if tag is TangoTypeTag.DevVarLongStringArray:
                nums = [_expect_int(x, "longs") for x in nums]
            else:
                nums = [_expect_number(x, "doubles") for x in nums]
            return make_value(tag, (nums, strings))
    except Exception as exc:
        if hasattr(exc, "errors"):
            raise
        raise _bad(str(exc)) from None
    raise _bad(f"unhandled tag {name}")
