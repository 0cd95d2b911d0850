"""tangokit: distributed device-control middleware.

Devices expose commands, attributes and properties through one uniform
network interface; device servers host them, a naming database binds names
to endpoints, starters supervise server processes, and a JSON gateway plus
web console sit on top.
"""

from .model import (
    AttrElementType,
    AttrFormat,
    AttrSource,
    AttrWritable,
    AttributeConfig,
    AttributeValue,
    CommandInfo,
    DevError,
    DevFailed,
    DeviceName,
    DeviceState,
    ErrorSeverity,
    TangoTypeTag,
    TangoValue,
    VOID,
    check_value_against_tag,
    default_value,
    fail,
    make_value,
    parse_device_name,
    scalar_of_sequence,
    sequence_of_scalar,
)

__version__ = "0.1.0"
