"""SimPLC device class skeleton.

Generated by pogo; edit only inside PROTECTED-REGION blocks, regeneration
preserves them."""
from __future__ import annotations

from tangokit.model import (
    AttrElementType,
    AttrFormat,
    AttrWritable,
    AttributeConfig,
    CommandInfo,
    DeviceState,
    TangoTypeTag,
    VOID,
    default_value,
    fail,
    make_value,
)
from tangokit.server import (
    AttrData,
    AttributeDescriptor,
    CommandDescriptor,
    DeviceClassDescriptor,
    DevicePropertyInfo,
)

# PROTECTED-REGION module.imports BEGIN
# PROTECTED-REGION module.imports END


STATE_NOTES = {
    DeviceState.ON: 'Register bank initialized from the configured address lists.',
    DeviceState.FAULT: 'Initialization failed; check the address properties.',
}


def init_device(device):
    """Initialize a SimPLC device."""
    # PROTECTED-REGION init.body BEGIN
    inputs = device.get_property("InputAddresses")
    outputs = device.get_property("OutputAddresses")
    device.store["inputs"] = list(inputs)
    device.store["outputs"] = list(outputs)
    # every register powers up at zero
    device.store["bank"] = {addr: 0 for addr in [*inputs, *outputs]}
    # PROTECTED-REGION init.body END
    return None


def cmd_read_inputs(device, argin):
    """Current value of every input register, in InputAddresses order."""
    result = default_value(TangoTypeTag.DevVarLongArray)
    # PROTECTED-REGION cmd.ReadInputs.body BEGIN
    bank = device.store["bank"]
    values = [bank[a] for a in device.store["inputs"]]
    result = make_value(TangoTypeTag.DevVarLongArray, values)
    # PROTECTED-REGION cmd.ReadInputs.body END
    return result


def cmd_write_outputs(device, argin):
    """Set every output register; the argument length must match OutputAddresses."""
    result = default_value(TangoTypeTag.DevVoid)
    # PROTECTED-REGION cmd.WriteOutputs.body BEGIN
    outputs = device.store["outputs"]
    if len(argin.value) != len(outputs):
        raise fail("SIMPLC_LengthMismatch",
                   f"got {len(argin.value)} values for {len(outputs)} outputs",
                   "WriteOutputs")
    device.store["bank"].update(zip(outputs, argin.value))
    # PROTECTED-REGION cmd.WriteOutputs.body END
    return result


def cmd_read_register_by_name(device, argin):
    """Value of one register selected by its configured symbolic address."""
    result = default_value(TangoTypeTag.DevLong)
    # PROTECTED-REGION cmd.ReadRegisterByName.body BEGIN
    bank = device.store["bank"]
    if argin.value not in bank:
        raise fail("SIMPLC_UnknownRegister",
                   f"no register named {argin.value!r}", "ReadRegisterByName")
    result = make_value(TangoTypeTag.DevLong, bank[argin.value])
    # PROTECTED-REGION cmd.ReadRegisterByName.body END
    return result


def read_output_count(device):
    """Read output_count."""
    value = 0
    # PROTECTED-REGION attr.output_count.read BEGIN
    value = len(device.store["outputs"])
    # PROTECTED-REGION attr.output_count.read END
    return value


# PROTECTED-REGION module.extra BEGIN
# PROTECTED-REGION module.extra END


def build_class():
    """Descriptor registering every command, attribute and property."""
    commands = [
        CommandDescriptor(
            CommandInfo(
                'ReadInputs',
                TangoTypeTag.DevVoid,
                TangoTypeTag.DevVarLongArray,
                'Current value of every input register, in InputAddresses order.',
                frozenset({DeviceState.ON}),
            ),
            cmd_read_inputs,
        ),
        CommandDescriptor(
            CommandInfo(
                'WriteOutputs',
                TangoTypeTag.DevVarLongArray,
                TangoTypeTag.DevVoid,
                'Set every output register; the argument length must match OutputAddresses.',
                frozenset({DeviceState.ON}),
            ),
            cmd_write_outputs,
        ),
        CommandDescriptor(
            CommandInfo(
                'ReadRegisterByName',
                TangoTypeTag.DevString,
                TangoTypeTag.DevLong,
                'Value of one register selected by its configured symbolic address.',
                frozenset({DeviceState.ON}),
            ),
            cmd_read_register_by_name,
        ),
    ]
    attributes = [
        AttributeDescriptor(
            AttributeConfig(
                'output_count',
                AttrWritable.Read,
                AttrElementType.DevLong,
                AttrFormat.Scalar,
                1,
                0,
                'Number of configured output registers.',
                '',
            ),
            read=read_output_count,
        ),
    ]
    properties = [
        DevicePropertyInfo('InputAddresses', 'string-list', [], 'Symbolic addresses of the input registers.'),
        DevicePropertyInfo('OutputAddresses', 'string-list', [], 'Symbolic addresses of the output registers.'),
    ]
    return DeviceClassDescriptor(
        'SimPLC',
        commands=commands,
        attributes=attributes,
        device_properties=properties,
        init=init_device,
    )
