import json

import pytest
from hypothesis import given, settings

from tangokit.jsonmap import json_to_value, value_to_json
from tangokit.model import DevFailed, DeviceState, TangoTypeTag, make_value

from .strategies import any_value


@settings(max_examples=800, deadline=None)
@given(any_value)
def test_json_bijection(v):
    obj = value_to_json(v)
    # must survive an actual JSON text round trip, not just the dict form
    assert json_to_value(json.loads(json.dumps(obj))) == v


def test_canonical_forms():
    assert value_to_json(make_value(TangoTypeTag.DevVoid)) == {"type": "DevVoid"}
    assert value_to_json(make_value(TangoTypeTag.DevLong, 7)) == {"type": "DevLong", "value": 7}
    assert value_to_json(make_value(TangoTypeTag.DevState, DeviceState.FAULT)) == \
        {"type": "DevState", "value": "FAULT"}
    assert value_to_json(make_value(TangoTypeTag.DevVarLongStringArray, ([1], ["a"]))) == \
        {"type": "DevVarLongStringArray", "value": {"longs": [1], "strings": ["a"]}}


@pytest.mark.parametrize("obj", [
    42,
    {"type": "DevBanana", "value": 1},
    {"type": "DevLong"},
    {"type": "DevLong", "value": "x"},
    {"type": "DevLong", "value": 1.5},
    {"type": "DevBoolean", "value": 1},
    {"type": "DevState", "value": "NOPE"},
    {"type": "DevVarLongArray", "value": [1, "x"]},
    {"type": "DevVarLongStringArray", "value": {"longs": [1]}},
])
def test_bad_json_rejected(obj):
    with pytest.raises(DevFailed) as e:
        json_to_value(obj)
    assert e.value.reason in ("BAD_JSON", "API_IncompatibleCmdArgumentType")


def test_integral_floats_accepted_for_ints():
    assert json_to_value({"type": "DevLong", "value": 3.0}) == make_value(TangoTypeTag.DevLong, 3)
