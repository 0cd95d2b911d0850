"""Conformance of the shipped example device classes, driven over a real
socket so every value crosses the codec twice."""
import pytest
from hypothesis import given, settings

from tangokit.client import DeviceProxy
from tangokit.model import (
    DevFailed,
    DeviceState,
    TangoTypeTag,
    make_value,
    parse_device_name,
)
from tangokit.server import DeviceInstance, DeviceRegistry, WireServer
from tangokit.devices.typesecho.types_echo_device import build_class as typesecho_class
from tangokit.devices.simplc.sim_plc_device import build_class as simplc_class

from .strategies import values_of


def _serve(descriptor, name, properties=None):
    dev = DeviceInstance(parse_device_name(name), descriptor)
    if properties:
        dev.properties.update({k.lower(): v for k, v in properties.items()})
        # re-run init with the canned properties in place of a database
        descriptor.init(dev)
    else:
        dev.initialize()
    registry = DeviceRegistry()
    registry.add(dev)
    server = WireServer("127.0.0.1", 0, registry)
    server.serve_forever_in_thread()
    return server, dev


@pytest.fixture(scope="module")
def echo():
    server, dev = _serve(typesecho_class(), "sr/echo/1")
    proxy = DeviceProxy(f"{server.endpoint}/sr/echo/1")
    yield proxy, dev
    proxy.close()
    server.shutdown()
    server.server_close()


ECHO_CMDS = [(f"Echo{suffix}", tag) for suffix, tag in [
    ("Boolean", TangoTypeTag.DevBoolean), ("Short", TangoTypeTag.DevShort),
    ("Long", TangoTypeTag.DevLong), ("Float", TangoTypeTag.DevFloat),
    ("Double", TangoTypeTag.DevDouble), ("UShort", TangoTypeTag.DevUShort),
    ("ULong", TangoTypeTag.DevULong), ("String", TangoTypeTag.DevString),
    ("BooleanArray", TangoTypeTag.DevVarBooleanArray),
    ("ShortArray", TangoTypeTag.DevVarShortArray),
    ("LongArray", TangoTypeTag.DevVarLongArray),
    ("FloatArray", TangoTypeTag.DevVarFloatArray),
    ("DoubleArray", TangoTypeTag.DevVarDoubleArray),
    ("UShortArray", TangoTypeTag.DevVarUShortArray),
    ("ULongArray", TangoTypeTag.DevVarULongArray),
    ("StringArray", TangoTypeTag.DevVarStringArray),
    ("LongStringArray", TangoTypeTag.DevVarLongStringArray),
    ("DoubleStringArray", TangoTypeTag.DevVarDoubleStringArray),
    ("State", TangoTypeTag.DevState),
]]


def test_every_type_tag_has_an_echo_command(echo):
    proxy, _ = echo
    infos = {i.name: i for i in proxy.command_list_query()}
    for cmd, tag in ECHO_CMDS:
        assert infos[cmd].in_type is tag and infos[cmd].out_type is tag
    covered = {tag for _, tag in ECHO_CMDS}
    assert covered == set(TangoTypeTag) - {TangoTypeTag.DevVoid}


@pytest.mark.parametrize("cmd,tag", ECHO_CMDS)
def test_echo_round_trip_describe_driven(echo, cmd, tag):
    proxy, _ = echo

    @settings(max_examples=25, deadline=None)
    @given(values_of(tag))
    def check(v):
        assert proxy.command_inout(cmd, v) == v

    check()


def test_attribute_matrix_write_read(echo):
    proxy, _ = echo
    cases = {
        "short_scalar": 7, "long_scalar": 70000, "double_scalar": 2.5,
        "string_scalar": "hello",
        "short_spectrum": [1, 2, 3], "long_spectrum": [1 << 20],
        "double_spectrum": [0.5, -0.5], "string_spectrum": ["a", "b"],
        "short_image": [[1, 2], [3, 4]], "long_image": [[9]],
        "double_image": [[1.0, 2.0]], "string_image": [["x", "y"], ["z", "w"]],
    }
    for name, payload in cases.items():
        proxy.write_attribute(name, payload)
    for name, payload in cases.items():
        av = proxy.read_attribute(name)
        if isinstance(payload, list) and payload and isinstance(payload[0], list):
            flat = tuple(x for row in payload for x in row)
            assert av.data == flat
            assert (av.dim_y, av.dim_x) == (len(payload), len(payload[0]))
        elif isinstance(payload, list):
            assert av.data == tuple(payload)
        else:
            assert av.data == (payload,)


def test_spectrum_limit_enforced(echo):
    proxy, _ = echo
    with pytest.raises(DevFailed) as e:
        proxy.write_attribute("short_spectrum", [0] * 257)
    assert e.value.reason == "API_IncompatibleAttrDataType"


@pytest.fixture
def plc():
    server, dev = _serve(simplc_class(), "sr/plc/1", properties={
        "InputAddresses": ["I0.0", "I0.1", "I0.2"],
        "OutputAddresses": ["Q0.0", "Q0.1"],
    })
    dev.set_state(DeviceState.ON)
    proxy = DeviceProxy(f"{server.endpoint}/sr/plc/1")
    yield proxy
    proxy.close()
    server.shutdown()
    server.server_close()


def test_plc_read_inputs_initial(plc):
    out = plc.command_inout("ReadInputs")
    assert out.tag is TangoTypeTag.DevVarLongArray
    assert out.value == (0, 0, 0)  # every register powers up at zero


def test_plc_write_then_read_by_name(plc):
    plc.command_inout("WriteOutputs", make_value(TangoTypeTag.DevVarLongArray, [11, 22]))
    assert plc.command_inout("ReadRegisterByName",
                             make_value(TangoTypeTag.DevString, "Q0.1")).value == 22
    assert plc.command_inout("ReadRegisterByName",
                             make_value(TangoTypeTag.DevString, "I0.2")).value == 0


def test_plc_length_mismatch(plc):
    with pytest.raises(DevFailed) as e:
        plc.command_inout("WriteOutputs", make_value(TangoTypeTag.DevVarLongArray, [1]))
    assert e.value.reason == "SIMPLC_LengthMismatch"


def test_plc_unknown_register(plc):
    with pytest.raises(DevFailed) as e:
        plc.command_inout("ReadRegisterByName", make_value(TangoTypeTag.DevString, "nope"))
    assert e.value.reason == "SIMPLC_UnknownRegister"


def test_plc_output_count_attribute(plc):
    assert plc.read_attribute("output_count").data == (2,)
