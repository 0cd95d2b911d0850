"""TypesEcho device class skeleton.

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
    DeviceState.ON: 'Ready; all commands and attributes available.',
}


def init_device(device):
    """Initialize a TypesEcho device."""
    # PROTECTED-REGION init.body BEGIN
    for key, initial in _INITIAL.items():
        device.store.setdefault(key, initial)
    # PROTECTED-REGION init.body END
    return None


def cmd_echo_boolean(device, argin):
    """Return the boolean argument unchanged."""
    result = default_value(TangoTypeTag.DevBoolean)
    # PROTECTED-REGION cmd.EchoBoolean.body BEGIN
    result = argin
    # PROTECTED-REGION cmd.EchoBoolean.body END
    return result


def cmd_echo_short(device, argin):
    """Return the 16-bit signed argument unchanged."""
    result = default_value(TangoTypeTag.DevShort)
    # PROTECTED-REGION cmd.EchoShort.body BEGIN
    result = argin
    # PROTECTED-REGION cmd.EchoShort.body END
    return result


def cmd_echo_long(device, argin):
    """Return the 32-bit signed argument unchanged."""
    result = default_value(TangoTypeTag.DevLong)
    # PROTECTED-REGION cmd.EchoLong.body BEGIN
    result = argin
    # PROTECTED-REGION cmd.EchoLong.body END
    return result


def cmd_echo_float(device, argin):
    """Return the 32-bit float argument unchanged."""
    result = default_value(TangoTypeTag.DevFloat)
    # PROTECTED-REGION cmd.EchoFloat.body BEGIN
    result = argin
    # PROTECTED-REGION cmd.EchoFloat.body END
    return result


def cmd_echo_double(device, argin):
    """Return the 64-bit float argument unchanged."""
    result = default_value(TangoTypeTag.DevDouble)
    # PROTECTED-REGION cmd.EchoDouble.body BEGIN
    result = argin
    # PROTECTED-REGION cmd.EchoDouble.body END
    return result


def cmd_echo_u_short(device, argin):
    """Return the 16-bit unsigned argument unchanged."""
    result = default_value(TangoTypeTag.DevUShort)
    # PROTECTED-REGION cmd.EchoUShort.body BEGIN
    result = argin
    # PROTECTED-REGION cmd.EchoUShort.body END
    return result


def cmd_echo_u_long(device, argin):
    """Return the 32-bit unsigned argument unchanged."""
    result = default_value(TangoTypeTag.DevULong)
    # PROTECTED-REGION cmd.EchoULong.body BEGIN
    result = argin
    # PROTECTED-REGION cmd.EchoULong.body END
    return result


def cmd_echo_string(device, argin):
    """Return the string argument unchanged."""
    result = default_value(TangoTypeTag.DevString)
    # PROTECTED-REGION cmd.EchoString.body BEGIN
    result = argin
    # PROTECTED-REGION cmd.EchoString.body END
    return result


def cmd_echo_boolean_array(device, argin):
    """Return the boolean array unchanged."""
    result = default_value(TangoTypeTag.DevVarBooleanArray)
    # PROTECTED-REGION cmd.EchoBooleanArray.body BEGIN
    result = argin
    # PROTECTED-REGION cmd.EchoBooleanArray.body END
    return result


def cmd_echo_short_array(device, argin):
    """Return the short array unchanged."""
    result = default_value(TangoTypeTag.DevVarShortArray)
    # PROTECTED-REGION cmd.EchoShortArray.body BEGIN
    result = argin
    # PROTECTED-REGION cmd.EchoShortArray.body END
    return result


def cmd_echo_long_array(device, argin):
    """Return the long array unchanged."""
    result = default_value(TangoTypeTag.DevVarLongArray)
    # PROTECTED-REGION cmd.EchoLongArray.body BEGIN
    result = argin
    # PROTECTED-REGION cmd.EchoLongArray.body END
    return result


def cmd_echo_float_array(device, argin):
    """Return the float array unchanged."""
    result = default_value(TangoTypeTag.DevVarFloatArray)
    # PROTECTED-REGION cmd.EchoFloatArray.body BEGIN
    result = argin
    # PROTECTED-REGION cmd.EchoFloatArray.body END
    return result


def cmd_echo_double_array(device, argin):
    """Return the double array unchanged."""
    result = default_value(TangoTypeTag.DevVarDoubleArray)
    # PROTECTED-REGION cmd.EchoDoubleArray.body BEGIN
    result = argin
    # PROTECTED-REGION cmd.EchoDoubleArray.body END
    return result


def cmd_echo_u_short_array(device, argin):
    """Return the unsigned short array unchanged."""
    result = default_value(TangoTypeTag.DevVarUShortArray)
    # PROTECTED-REGION cmd.EchoUShortArray.body BEGIN
    result = argin
    # PROTECTED-REGION cmd.EchoUShortArray.body END
    return result


def cmd_echo_u_long_array(device, argin):
    """Return the unsigned long array unchanged."""
    result = default_value(TangoTypeTag.DevVarULongArray)
    # PROTECTED-REGION cmd.EchoULongArray.body BEGIN
    result = argin
    # PROTECTED-REGION cmd.EchoULongArray.body END
    return result


def cmd_echo_string_array(device, argin):
    """Return the string array unchanged."""
    result = default_value(TangoTypeTag.DevVarStringArray)
    # PROTECTED-REGION cmd.EchoStringArray.body BEGIN
    result = argin
    # PROTECTED-REGION cmd.EchoStringArray.body END
    return result


def cmd_echo_long_string_array(device, argin):
    """Return the mixed long/string arrays unchanged."""
    result = default_value(TangoTypeTag.DevVarLongStringArray)
    # PROTECTED-REGION cmd.EchoLongStringArray.body BEGIN
    result = argin
    # PROTECTED-REGION cmd.EchoLongStringArray.body END
    return result


def cmd_echo_double_string_array(device, argin):
    """Return the mixed double/string arrays unchanged."""
    result = default_value(TangoTypeTag.DevVarDoubleStringArray)
    # PROTECTED-REGION cmd.EchoDoubleStringArray.body BEGIN
    result = argin
    # PROTECTED-REGION cmd.EchoDoubleStringArray.body END
    return result


def cmd_echo_state(device, argin):
    """Return the state argument unchanged."""
    result = default_value(TangoTypeTag.DevState)
    # PROTECTED-REGION cmd.EchoState.body BEGIN
    result = argin
    # PROTECTED-REGION cmd.EchoState.body END
    return result


def read_short_scalar(device):
    """Read short_scalar."""
    value = 0
    # PROTECTED-REGION attr.short_scalar.read BEGIN
    value = device.store["short_scalar"]
    # PROTECTED-REGION attr.short_scalar.read END
    return value


def write_short_scalar(device, attr_value):
    """Write short_scalar."""
    # PROTECTED-REGION attr.short_scalar.write BEGIN
    device.store["short_scalar"] = attr_value.data[0]
    # PROTECTED-REGION attr.short_scalar.write END
    return None


def read_long_scalar(device):
    """Read long_scalar."""
    value = 0
    # PROTECTED-REGION attr.long_scalar.read BEGIN
    value = device.store["long_scalar"]
    # PROTECTED-REGION attr.long_scalar.read END
    return value


def write_long_scalar(device, attr_value):
    """Write long_scalar."""
    # PROTECTED-REGION attr.long_scalar.write BEGIN
    device.store["long_scalar"] = attr_value.data[0]
    # PROTECTED-REGION attr.long_scalar.write END
    return None


def read_double_scalar(device):
    """Read double_scalar."""
    value = 0.0
    # PROTECTED-REGION attr.double_scalar.read BEGIN
    value = device.store["double_scalar"]
    # PROTECTED-REGION attr.double_scalar.read END
    return value


def write_double_scalar(device, attr_value):
    """Write double_scalar."""
    # PROTECTED-REGION attr.double_scalar.write BEGIN
    device.store["double_scalar"] = attr_value.data[0]
    # PROTECTED-REGION attr.double_scalar.write END
    return None


def read_string_scalar(device):
    """Read string_scalar."""
    value = ""
    # PROTECTED-REGION attr.string_scalar.read BEGIN
    value = device.store["string_scalar"]
    # PROTECTED-REGION attr.string_scalar.read END
    return value


def write_string_scalar(device, attr_value):
    """Write string_scalar."""
    # PROTECTED-REGION attr.string_scalar.write BEGIN
    device.store["string_scalar"] = attr_value.data[0]
    # PROTECTED-REGION attr.string_scalar.write END
    return None


def read_short_spectrum(device):
    """Read short_spectrum."""
    value = []
    # PROTECTED-REGION attr.short_spectrum.read BEGIN
    value = device.store["short_spectrum"]
    # PROTECTED-REGION attr.short_spectrum.read END
    return value


def write_short_spectrum(device, attr_value):
    """Write short_spectrum."""
    # PROTECTED-REGION attr.short_spectrum.write BEGIN
    device.store["short_spectrum"] = attr_value.data
    # PROTECTED-REGION attr.short_spectrum.write END
    return None


def read_long_spectrum(device):
    """Read long_spectrum."""
    value = []
    # PROTECTED-REGION attr.long_spectrum.read BEGIN
    value = device.store["long_spectrum"]
    # PROTECTED-REGION attr.long_spectrum.read END
    return value


def write_long_spectrum(device, attr_value):
    """Write long_spectrum."""
    # PROTECTED-REGION attr.long_spectrum.write BEGIN
    device.store["long_spectrum"] = attr_value.data
    # PROTECTED-REGION attr.long_spectrum.write END
    return None


def read_double_spectrum(device):
    """Read double_spectrum."""
    value = []
    # PROTECTED-REGION attr.double_spectrum.read BEGIN
    value = device.store["double_spectrum"]
    # PROTECTED-REGION attr.double_spectrum.read END
    return value


def write_double_spectrum(device, attr_value):
    """Write double_spectrum."""
    # PROTECTED-REGION attr.double_spectrum.write BEGIN
    device.store["double_spectrum"] = attr_value.data
    # PROTECTED-REGION attr.double_spectrum.write END
    return None


def read_string_spectrum(device):
    """Read string_spectrum."""
    value = []
    # PROTECTED-REGION attr.string_spectrum.read BEGIN
    value = device.store["string_spectrum"]
    # PROTECTED-REGION attr.string_spectrum.read END
    return value


def write_string_spectrum(device, attr_value):
    """Write string_spectrum."""
    # PROTECTED-REGION attr.string_spectrum.write BEGIN
    device.store["string_spectrum"] = attr_value.data
    # PROTECTED-REGION attr.string_spectrum.write END
    return None


def read_short_image(device):
    """Read short_image."""
    value = AttrData((), 0, 0)
    # PROTECTED-REGION attr.short_image.read BEGIN
    value = device.store["short_image"]
    # PROTECTED-REGION attr.short_image.read END
    return value


def write_short_image(device, attr_value):
    """Write short_image."""
    # PROTECTED-REGION attr.short_image.write BEGIN
    device.store["short_image"] = AttrData(attr_value.data, attr_value.dim_x, attr_value.dim_y)
    # PROTECTED-REGION attr.short_image.write END
    return None


def read_long_image(device):
    """Read long_image."""
    value = AttrData((), 0, 0)
    # PROTECTED-REGION attr.long_image.read BEGIN
    value = device.store["long_image"]
    # PROTECTED-REGION attr.long_image.read END
    return value


def write_long_image(device, attr_value):
    """Write long_image."""
    # PROTECTED-REGION attr.long_image.write BEGIN
    device.store["long_image"] = AttrData(attr_value.data, attr_value.dim_x, attr_value.dim_y)
    # PROTECTED-REGION attr.long_image.write END
    return None


def read_double_image(device):
    """Read double_image."""
    value = AttrData((), 0, 0)
    # PROTECTED-REGION attr.double_image.read BEGIN
    value = device.store["double_image"]
    # PROTECTED-REGION attr.double_image.read END
    return value


def write_double_image(device, attr_value):
    """Write double_image."""
    # PROTECTED-REGION attr.double_image.write BEGIN
    device.store["double_image"] = AttrData(attr_value.data, attr_value.dim_x, attr_value.dim_y)
    # PROTECTED-REGION attr.double_image.write END
    return None


def read_string_image(device):
    """Read string_image."""
    value = AttrData((), 0, 0)
    # PROTECTED-REGION attr.string_image.read BEGIN
    value = device.store["string_image"]
    # PROTECTED-REGION attr.string_image.read END
    return value


def write_string_image(device, attr_value):
    """Write string_image."""
    # PROTECTED-REGION attr.string_image.write BEGIN
    device.store["string_image"] = AttrData(attr_value.data, attr_value.dim_x, attr_value.dim_y)
    # PROTECTED-REGION attr.string_image.write END
    return None


# PROTECTED-REGION module.extra BEGIN
_INITIAL = {
    "short_scalar": 0,
    "long_scalar": 0,
    "double_scalar": 0.0,
    "string_scalar": "",
    "short_spectrum": (),
    "long_spectrum": (),
    "double_spectrum": (),
    "string_spectrum": (),
    "short_image": AttrData((), 0, 0),
    "long_image": AttrData((), 0, 0),
    "double_image": AttrData((), 0, 0),
    "string_image": AttrData((), 0, 0),
}
# PROTECTED-REGION module.extra END


def build_class():
    """Descriptor registering every command, attribute and property."""
    commands = [
        CommandDescriptor(
            CommandInfo(
                'EchoBoolean',
                TangoTypeTag.DevBoolean,
                TangoTypeTag.DevBoolean,
                'Return the boolean argument unchanged.',
            ),
            cmd_echo_boolean,
        ),
        CommandDescriptor(
            CommandInfo(
                'EchoShort',
                TangoTypeTag.DevShort,
                TangoTypeTag.DevShort,
                'Return the 16-bit signed argument unchanged.',
            ),
            cmd_echo_short,
        ),
        CommandDescriptor(
            CommandInfo(
                'EchoLong',
                TangoTypeTag.DevLong,
                TangoTypeTag.DevLong,
                'Return the 32-bit signed argument unchanged.',
            ),
            cmd_echo_long,
        ),
        CommandDescriptor(
            CommandInfo(
                'EchoFloat',
                TangoTypeTag.DevFloat,
                TangoTypeTag.DevFloat,
                'Return the 32-bit float argument unchanged.',
            ),
            cmd_echo_float,
        ),
        CommandDescriptor(
            CommandInfo(
                'EchoDouble',
                TangoTypeTag.DevDouble,
                TangoTypeTag.DevDouble,
                'Return the 64-bit float argument unchanged.',
            ),
            cmd_echo_double,
        ),
        CommandDescriptor(
            CommandInfo(
                'EchoUShort',
                TangoTypeTag.DevUShort,
                TangoTypeTag.DevUShort,
                'Return the 16-bit unsigned argument unchanged.',
            ),
            cmd_echo_u_short,
        ),
        CommandDescriptor(
            CommandInfo(
                'EchoULong',
                TangoTypeTag.DevULong,
                TangoTypeTag.DevULong,
                'Return the 32-bit unsigned argument unchanged.',
            ),
            cmd_echo_u_long,
        ),
        CommandDescriptor(
            CommandInfo(
                'EchoString',
                TangoTypeTag.DevString,
                TangoTypeTag.DevString,
                'Return the string argument unchanged.',
            ),
            cmd_echo_string,
        ),
        CommandDescriptor(
            CommandInfo(
                'EchoBooleanArray',
                TangoTypeTag.DevVarBooleanArray,
                TangoTypeTag.DevVarBooleanArray,
                'Return the boolean array unchanged.',
            ),
            cmd_echo_boolean_array,
        ),
        CommandDescriptor(
            CommandInfo(
                'EchoShortArray',
                TangoTypeTag.DevVarShortArray,
                TangoTypeTag.DevVarShortArray,
                'Return the short array unchanged.',
            ),
            cmd_echo_short_array,
        ),
        CommandDescriptor(
            CommandInfo(
                'EchoLongArray',
                TangoTypeTag.DevVarLongArray,
                TangoTypeTag.DevVarLongArray,
                'Return the long array unchanged.',
            ),
            cmd_echo_long_array,
        ),
        CommandDescriptor(
            CommandInfo(
                'EchoFloatArray',
                TangoTypeTag.DevVarFloatArray,
                TangoTypeTag.DevVarFloatArray,
                'Return the float array unchanged.',
            ),
            cmd_echo_float_array,
        ),
        CommandDescriptor(
            CommandInfo(
                'EchoDoubleArray',
                TangoTypeTag.DevVarDoubleArray,
                TangoTypeTag.DevVarDoubleArray,
                'Return the double array unchanged.',
            ),
            cmd_echo_double_array,
        ),
        CommandDescriptor(
            CommandInfo(
                'EchoUShortArray',
                TangoTypeTag.DevVarUShortArray,
                TangoTypeTag.DevVarUShortArray,
                'Return the unsigned short array unchanged.',
            ),
            cmd_echo_u_short_array,
        ),
        CommandDescriptor(
            CommandInfo(
                'EchoULongArray',
                TangoTypeTag.DevVarULongArray,
                TangoTypeTag.DevVarULongArray,
                'Return the unsigned long array unchanged.',
            ),
            cmd_echo_u_long_array,
        ),
        CommandDescriptor(
            CommandInfo(
                'EchoStringArray',
                TangoTypeTag.DevVarStringArray,
                TangoTypeTag.DevVarStringArray,
                'Return the string array unchanged.',
            ),
            cmd_echo_string_array,
        ),
        CommandDescriptor(
            CommandInfo(
                'EchoLongStringArray',
                TangoTypeTag.DevVarLongStringArray,
                TangoTypeTag.DevVarLongStringArray,
                'Return the mixed long/string arrays unchanged.',
            ),
            cmd_echo_long_string_array,
        ),
        CommandDescriptor(
            CommandInfo(
                'EchoDoubleStringArray',
                TangoTypeTag.DevVarDoubleStringArray,
                TangoTypeTag.DevVarDoubleStringArray,
                'Return the mixed double/string arrays unchanged.',
            ),
            cmd_echo_double_string_array,
        ),
        CommandDescriptor(
            CommandInfo(
                'EchoState',
                TangoTypeTag.DevState,
                TangoTypeTag.DevState,
                'Return the state argument unchanged.',
            ),
            cmd_echo_state,
        ),
    ]
    attributes = [
        AttributeDescriptor(
            AttributeConfig(
                'short_scalar',
                AttrWritable.ReadWrite,
                AttrElementType.DevShort,
                AttrFormat.Scalar,
                1,
                0,
                'Stored 16-bit scalar.',
                '',
            ),
            read=read_short_scalar,
            write=write_short_scalar,
        ),
        AttributeDescriptor(
            AttributeConfig(
                'long_scalar',
                AttrWritable.ReadWrite,
                AttrElementType.DevLong,
                AttrFormat.Scalar,
                1,
                0,
                'Stored 32-bit scalar.',
                '',
            ),
            read=read_long_scalar,
            write=write_long_scalar,
        ),
        AttributeDescriptor(
            AttributeConfig(
                'double_scalar',
                AttrWritable.ReadWrite,
                AttrElementType.DevDouble,
                AttrFormat.Scalar,
                1,
                0,
                'Stored double scalar.',
                '',
            ),
            read=read_double_scalar,
            write=write_double_scalar,
        ),
        AttributeDescriptor(
            AttributeConfig(
                'string_scalar',
                AttrWritable.ReadWrite,
                AttrElementType.DevString,
                AttrFormat.Scalar,
                1,
                0,
                'Stored string scalar.',
                '',
            ),
            read=read_string_scalar,
            write=write_string_scalar,
        ),
        AttributeDescriptor(
            AttributeConfig(
                'short_spectrum',
                AttrWritable.ReadWrite,
                AttrElementType.DevShort,
                AttrFormat.Spectrum,
                256,
                0,
                'Stored 16-bit vector.',
                '',
            ),
            read=read_short_spectrum,
            write=write_short_spectrum,
        ),
        AttributeDescriptor(
            AttributeConfig(
                'long_spectrum',
                AttrWritable.ReadWrite,
                AttrElementType.DevLong,
                AttrFormat.Spectrum,
                256,
                0,
                'Stored 32-bit vector.',
                '',
            ),
            read=read_long_spectrum,
            write=write_long_spectrum,
        ),
        AttributeDescriptor(
            AttributeConfig(
                'double_spectrum',
                AttrWritable.ReadWrite,
                AttrElementType.DevDouble,
                AttrFormat.Spectrum,
                256,
                0,
                'Stored double vector.',
                '',
            ),
            read=read_double_spectrum,
            write=write_double_spectrum,
        ),
        AttributeDescriptor(
            AttributeConfig(
                'string_spectrum',
                AttrWritable.ReadWrite,
                AttrElementType.DevString,
                AttrFormat.Spectrum,
                256,
                0,
                'Stored string vector.',
                '',
            ),
            read=read_string_spectrum,
            write=write_string_spectrum,
        ),
        AttributeDescriptor(
            AttributeConfig(
                'short_image',
                AttrWritable.ReadWrite,
                AttrElementType.DevShort,
                AttrFormat.Image,
                64,
                64,
                'Stored 16-bit matrix.',
                '',
            ),
            read=read_short_image,
            write=write_short_image,
        ),
        AttributeDescriptor(
            AttributeConfig(
                'long_image',
                AttrWritable.ReadWrite,
                AttrElementType.DevLong,
                AttrFormat.Image,
                64,
                64,
                'Stored 32-bit matrix.',
                '',
            ),
            read=read_long_image,
            write=write_long_image,
        ),
        AttributeDescriptor(
            AttributeConfig(
                'double_image',
                AttrWritable.ReadWrite,
                AttrElementType.DevDouble,
                AttrFormat.Image,
                64,
                64,
                'Stored double matrix.',
                '',
            ),
            read=read_double_image,
            write=write_double_image,
        ),
        AttributeDescriptor(
            AttributeConfig(
                'string_image',
                AttrWritable.ReadWrite,
                AttrElementType.DevString,
                AttrFormat.Image,
                64,
                64,
                'Stored string matrix.',
                '',
            ),
            read=read_string_image,
            write=write_string_image,
        ),
    ]
    properties = [
    ]
    return DeviceClassDescriptor(
        'TypesEcho',
        commands=commands,
        attributes=attributes,
        device_properties=properties,
        init=init_device,
    )
