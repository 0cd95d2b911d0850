import threading

import pytest

from tangokit.model import (
    AttrSource,
    DevFailed,
    DeviceState,
    TangoTypeTag,
    VOID,
    make_value,
)
from tangokit.wire import AttrWriteValue
from tangokit.model import AttrElementType

from .fixture_classes import make_device


@pytest.fixture
def dev():
    return make_device()


def test_state_command_auto_injected(dev):
    out = dev.dispatch_command("State", VOID)
    assert out == make_value(TangoTypeTag.DevState, DeviceState.ON)
    assert "ON" in dev.dispatch_command("Status", VOID).value


def test_echo(dev):
    assert dev.dispatch_command("EchoLong", make_value(TangoTypeTag.DevLong, 7)).value == 7


def test_command_lookup_case_insensitive(dev):
    assert dev.dispatch_command("echolong", make_value(TangoTypeTag.DevLong, 1)).value == 1


def test_unknown_command(dev):
    with pytest.raises(DevFailed) as e:
        dev.dispatch_command("Nope", VOID)
    assert e.value.reason == "API_CommandNotFound"


def test_bad_argument_type(dev):
    with pytest.raises(DevFailed) as e:
        dev.dispatch_command("EchoLong", make_value(TangoTypeTag.DevString, "x"))
    assert e.value.reason == "API_IncompatibleCmdArgumentType"


def test_state_gating_names_current_state(dev):
    dev.set_state(DeviceState.FAULT)
    with pytest.raises(DevFailed) as e:
        dev.dispatch_command("GatedOn", VOID)
    assert e.value.reason == "API_CommandNotAllowed"
    assert "FAULT" in e.value.errors[-1].description
    assert dev.store["gate_hits"] == 0


def test_handler_exception_becomes_dev_error(dev):
    with pytest.raises(DevFailed) as e:
        dev.dispatch_command("Boom", VOID)
    err = e.value.errors[-1]
    assert err.reason == "API_CommandFailed" and err.origin == "Boom"


def test_init_failure_degrades_to_fault():
    def bad_init(device):
        raise RuntimeError("no hardware")
    dev = make_device(init=bad_init)
    assert dev.state is DeviceState.FAULT
    # State/Status still callable
    assert dev.dispatch_command("State", VOID).value is DeviceState.FAULT
    assert "Init failed" in dev.dispatch_command("Status", VOID).value


def test_init_command_reruns_hook(dev):
    dev.set_state(DeviceState.FAULT)
    dev.dispatch_command("Init", VOID)
    assert dev.state is DeviceState.ON


def test_read_attributes_partial_failure_keeps_order(dev):
    results = dev.dispatch_read_attributes(["double_scalar", "missing", "long_spectrum"])
    assert results[0].data == (1.25,) and results[0].source is AttrSource.Hardware
    assert results[0].dim_x == 1 and results[0].dim_y == 0
    assert isinstance(results[1], tuple) and results[1][-1].reason == "API_AttrNotFound"
    assert results[2].data == (1, 2, 3) and results[2].dim_x == 3


def test_image_read_dims(dev):
    av = dev.dispatch_read_attributes(["short_image"])[0]
    assert (av.dim_x, av.dim_y) == (3, 2) and av.data == (1, 2, 3, 4, 5, 6)


def test_write_then_read(dev):
    dev.dispatch_write_attributes([
        AttrWriteValue("double_scalar", AttrElementType.DevDouble, 1, 0, (9.5,))])
    assert dev.dispatch_read_attributes(["double_scalar"])[0].data == (9.5,)


def test_write_read_only_attribute(dev):
    with pytest.raises(DevFailed) as e:
        dev.dispatch_write_attributes([
            AttrWriteValue("fixed_string", AttrElementType.DevString, 1, 0, ("x",))])
    assert e.value.reason == "API_AttrNotWritable"


def test_write_wrong_element_type(dev):
    with pytest.raises(DevFailed) as e:
        dev.dispatch_write_attributes([
            AttrWriteValue("double_scalar", AttrElementType.DevLong, 1, 0, (1,))])
    assert e.value.reason == "API_IncompatibleAttrDataType"


def test_describe_lists_everything(dev):
    names = [c.name for c in dev.command_list()]
    assert names[:3] == ["State", "Status", "Init"]
    for expected in ("EchoLong", "EchoString", "Sample"):
        assert expected in names
    info = {c.name: c for c in dev.command_list()}
    assert info["State"].out_type is TangoTypeTag.DevState
    assert info["EchoLong"].in_type is TangoTypeTag.DevLong
    configs = dev.attribute_configs()
    assert len(configs) == 4


def test_output_tag_enforced():
    from tangokit.model import CommandInfo
    from tangokit.server import CommandDescriptor, DeviceClassDescriptor, DeviceInstance
    from tangokit.model import parse_device_name

    def liar(device, argin):
        return make_value(TangoTypeTag.DevString, "not a long")

    desc = DeviceClassDescriptor("Liar", commands=[
        CommandDescriptor(CommandInfo("Lie", TangoTypeTag.DevVoid, TangoTypeTag.DevLong), liar)])
    dev = DeviceInstance(parse_device_name("a/b/c"), desc)
    dev.initialize()
    with pytest.raises(DevFailed) as e:
        dev.dispatch_command("Lie", VOID)
    assert e.value.reason == "API_BadCmdResultType"


def test_per_device_serialization_under_hammer():
    dev = make_device()
    active = []
    overlap = []

    def tracer(device, argin):
        active.append(1)
        if len(active) > 1:
            overlap.append(1)
        try:
            for _ in range(50):
                pass
            return argin
        finally:
            active.pop()

    from tangokit.model import CommandInfo
    from tangokit.server import CommandDescriptor
    dev._commands["trace"] = CommandDescriptor(
        CommandInfo("Trace", TangoTypeTag.DevLong, TangoTypeTag.DevLong), tracer)

    threads = [threading.Thread(
        target=lambda: [dev.dispatch_command("Trace", make_value(TangoTypeTag.DevLong, 1))
                        for _ in range(20)])
        for _ in range(20)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not overlap


def test_device_property_defaults(dev):
    assert dev.get_property("Gain") == 2.0
