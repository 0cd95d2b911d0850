from .device import (
    AttrData,
    AttributeDescriptor,
    CommandDescriptor,
    DeviceClassDescriptor,
    DeviceInstance,
    DevicePropertyInfo,
    describe,
    dispatch_command,
    dispatch_read_attributes,
    dispatch_write_attributes,
)
from .connection import DeviceRegistry, WireServer, serve_connection
from .process import (
    EXIT_DB_UNREACHABLE,
    EXIT_NOT_REGISTERED,
    EXIT_OK,
    ServerProcess,
    ServerStartupError,
    run_server,
    run_server_main,
)
