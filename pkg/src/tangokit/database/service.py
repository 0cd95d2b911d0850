"""The database exposed as a device: every store operation is a command on
"sys/database/2", served over the ordinary wire protocol.

The database server bootstraps itself (it cannot look itself up), then
behaves like any other device.
"""
from __future__ import annotations

import threading

from ..model import (
    CommandInfo,
    DeviceName,
    TangoTypeTag,
    VOID,
    fail,
    make_value,
    parse_device_name,
)
from ..server.connection import DeviceRegistry, WireServer
from ..server.device import CommandDescriptor, DeviceClassDescriptor, DeviceInstance
from . import codec
from .store import DbStore, SELF_CLASS, SELF_DEVICE, SELF_SERVER


def _strings(*values) -> "make_value":
    return make_value(TangoTypeTag.DevVarStringArray, [str(v) for v in values])


def build_database_class(store: DbStore, save) -> DeviceClassDescriptor:
    """Command table over the store; ``save()`` runs after every mutation."""

    def mutator(fn):
        def wrapped(device, argin):
            out = fn(device, argin)
            save()
            return out
        return wrapped

    def db_add_server(_d, argin):
        args = list(argin.value)
        if len(args) < 3:
            raise fail("MALFORMED_ARGS", "expected [server_id, host, level, bindings...]",
                       "DbAddServer")
        try:
            level = int(args[2])
        except ValueError:
            raise fail("MALFORMED_ARGS", f"bad level {args[2]!r}", "DbAddServer") from None
        store.add_server(args[0], args[1], level, codec.unpack_bindings(args, 3))
        return VOID

    def db_delete_server(_d, argin):
        store.delete_server(argin.value)
        return VOID

    def db_get_server_list(_d, argin):
        return _strings(*(r.server_id for r in store.list_servers(argin.value or "*")))

    def db_get_server_info(_d, argin):
        rec = store.get_server(argin.value)
        return _strings(rec.server_id, rec.host, rec.level, *rec.classes)

    def db_get_device_list(_d, argin):
        args = list(argin.value)
        if len(args) != 2:
            raise fail("MALFORMED_ARGS", "expected [server_id, class]", "DbGetDeviceList")
        return _strings(*store.get_device_list(args[0], args[1]))

    def db_export_device(_d, argin):
        args = list(argin.value)
        if len(args) != 3:
            raise fail("MALFORMED_ARGS", "expected [device, endpoint, server_id]",
                       "DbExportDevice")
        store.export_device(args[0], args[1], args[2])
        return VOID

    def db_unexport_device(_d, argin):
        store.unexport_device(argin.value)
        return VOID

    def db_unexport_server(_d, argin):
        store.unexport_server(argin.value)
        return VOID

    def db_import_device(_d, argin):
        rec = store.get_device(argin.value)
        return _strings(rec.name, rec.class_name, rec.server_id,
                        1 if rec.exported else 0, rec.endpoint, rec.export_time)

    def db_get_property(_d, argin):
        args = list(argin.value)
        if not args:
            raise fail("MALFORMED_ARGS", "expected [owner, names...]", "DbGetProperty")
        owner, names = args[0], args[1:] or None
        props = store.get_property(owner, names)
        display = {store.property_display_name(owner, n): v for n, v in props.items()}
        return make_value(TangoTypeTag.DevVarStringArray, codec.pack_properties(display))

    def db_put_property(_d, argin):
        args = list(argin.value)
        if not args:
            raise fail("MALFORMED_ARGS", "expected [owner, properties...]", "DbPutProperty")
        store.put_property(args[0], codec.unpack_properties(args, 1))
        return VOID

    def db_delete_property(_d, argin):
        args = list(argin.value)
        if not args:
            raise fail("MALFORMED_ARGS", "expected [owner, names...]", "DbDeleteProperty")
        store.delete_property(args[0], args[1:])
        return VOID

    def db_browse(_d, argin):
        return _strings(*store.browse_devices(argin.value))

    def db_get_host_list(_d, _argin):
        return _strings(*store.list_hosts())

    def db_get_class_list(_d, _argin):
        return _strings(*store.list_classes())

    S, V, SA = TangoTypeTag.DevString, TangoTypeTag.DevVoid, TangoTypeTag.DevVarStringArray
    commands = [
        CommandDescriptor(CommandInfo("DbAddServer", SA, V,
                          "Register a server: [server_id, host, level, class, n, dev...]"),
                          mutator(db_add_server)),
        CommandDescriptor(CommandInfo("DbDeleteServer", S, V, "Delete a server and its devices"),
                          mutator(db_delete_server)),
        CommandDescriptor(CommandInfo("DbGetServerList", S, SA, "Server ids matching a pattern"),
                          db_get_server_list),
        CommandDescriptor(CommandInfo("DbGetServerInfo", S, SA,
                          "[server_id, host, level, classes...]"), db_get_server_info),
        CommandDescriptor(CommandInfo("DbGetDeviceList", SA, SA,
                          "Devices of [server_id, class]"), db_get_device_list),
        CommandDescriptor(CommandInfo("DbExportDevice", SA, V,
                          "Record a live endpoint: [device, endpoint, server_id]"),
                          mutator(db_export_device)),
        CommandDescriptor(CommandInfo("DbUnexportDevice", S, V, "Mark a device unexported"),
                          mutator(db_unexport_device)),
        CommandDescriptor(CommandInfo("DbUnexportServer", S, V,
                          "Mark every device of a server unexported"),
                          mutator(db_unexport_server)),
        CommandDescriptor(CommandInfo("DbImportDevice", S, SA,
                          "[name, class, server_id, exported, endpoint, export_time]"),
                          db_import_device),
        CommandDescriptor(CommandInfo("DbGetProperty", SA, SA,
                          "Properties of [owner, names...]; all when no names"), db_get_property),
        CommandDescriptor(CommandInfo("DbPutProperty", SA, V,
                          "Upsert [owner, n, (name, count, values...)*]"), mutator(db_put_property)),
        CommandDescriptor(CommandInfo("DbDeleteProperty", SA, V, "Delete [owner, names...]"),
                          mutator(db_delete_property)),
        CommandDescriptor(CommandInfo("DbBrowse", S, SA,
                          "Device names matching a d/f/m wildcard pattern"), db_browse),
        CommandDescriptor(CommandInfo("DbGetHostList", V, SA, "Distinct registered hosts"),
                          db_get_host_list),
        CommandDescriptor(CommandInfo("DbGetClassList", V, SA, "Distinct registered classes"),
                          db_get_class_list),
    ]
    return DeviceClassDescriptor(SELF_CLASS, commands=commands)


class DatabaseServer:
    """Standalone database service process state."""

    def __init__(self, data_file: str, port: int = 0, host: str = "127.0.0.1"):
        self.data_file = data_file
        self.store = DbStore.load(data_file)
        self._save_lock = threading.Lock()
        descriptor = build_database_class(self.store, self._save)
        self.device = DeviceInstance(parse_device_name(SELF_DEVICE), descriptor)
        self.device.initialize()
        self.registry = DeviceRegistry()
        self.registry.add(self.device)
        self.server = WireServer(host, port, self.registry)

    def _save(self) -> None:
        with self._save_lock:
            self.store.save(self.data_file)

    @property
    def endpoint(self) -> str:
        return self.server.endpoint

    def start(self) -> None:
        self.server.serve_forever_in_thread()
        self.store.export_device(SELF_DEVICE, self.endpoint, SELF_SERVER)
        self._save()

    def stop(self) -> None:
        self.server.shutdown()
        self.server.server_close()
        self.device.delete()
