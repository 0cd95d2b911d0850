"""Typed wrapper over the database device's command interface."""
from __future__ import annotations

from ..database import codec
from ..database.store import SELF_DEVICE
from ..model import TangoTypeTag, make_value
from .proxy import DeviceProxy, db_endpoint_from_env


def _sa(values) -> "make_value":
    return make_value(TangoTypeTag.DevVarStringArray, [str(v) for v in values])


def _s(value) -> "make_value":
    return make_value(TangoTypeTag.DevString, str(value))


class DatabaseClient:
    """Talks to sys/database/2 at a fixed endpoint."""

    def __init__(self, endpoint: str | None = None, timeout: float = 10.0):
        self.endpoint = endpoint or db_endpoint_from_env()
        self.proxy = DeviceProxy(f"{self.endpoint}/{SELF_DEVICE}", timeout=timeout)

    def ping(self) -> int:
        return self.proxy.ping()

    def close(self) -> None:
        self.proxy.close()

    # -- servers / devices ------------------------------------------------

    def add_server(self, server_id: str, host: str, level: int, bindings: dict) -> None:
        args = [server_id, host, str(level)] + codec.pack_bindings(
            {c: [str(d) for d in devs] for c, devs in bindings.items()})
        self.proxy.command_inout("DbAddServer", _sa(args))

    def delete_server(self, server_id: str) -> None:
        self.proxy.command_inout("DbDeleteServer", _s(server_id))

    def get_server_list(self, pattern: str = "*") -> list[str]:
        return list(self.proxy.command_inout("DbGetServerList", _s(pattern)).value)

    def get_server_info(self, server_id: str) -> dict:
        out = self.proxy.command_inout("DbGetServerInfo", _s(server_id)).value
        return {"server_id": out[0], "host": out[1], "level": int(out[2]),
                "classes": list(out[3:])}

    def get_device_list(self, server_id: str, class_name: str) -> list[str]:
        out = self.proxy.command_inout("DbGetDeviceList", _sa([server_id, class_name]))
        return list(out.value)

    def export_device(self, name, endpoint: str, server_id: str) -> None:
        self.proxy.command_inout("DbExportDevice", _sa([name, endpoint, server_id]))

    def unexport_device(self, name) -> None:
        self.proxy.command_inout("DbUnexportDevice", _s(name))

    def unexport_server(self, server_id: str) -> None:
        self.proxy.command_inout("DbUnexportServer", _s(server_id))

    def import_device(self, name) -> dict:
        out = self.proxy.command_inout("DbImportDevice", _s(name)).value
        return {"name": out[0], "class_name": out[1], "server_id": out[2],
                "exported": out[3] == "1", "endpoint": out[4], "export_time": int(out[5])}

    def browse(self, pattern: str) -> list[str]:
        return list(self.proxy.command_inout("DbBrowse", _s(pattern)).value)

    def get_host_list(self) -> list[str]:
        return list(self.proxy.command_inout("DbGetHostList").value)

    def get_class_list(self) -> list[str]:
        return list(self.proxy.command_inout("DbGetClassList").value)

    # -- properties -------------------------------------------------------

    def put_device_property(self, owner, entries: dict) -> None:
        args = [str(owner)] + codec.pack_properties(
            {n: [str(v) for v in vs] for n, vs in entries.items()})
        self.proxy.command_inout("DbPutProperty", _sa(args))

    def get_device_property(self, owner, names=None) -> dict[str, list[str]]:
        """Keys come back lower-cased; missing names map to empty lists."""
        args = [str(owner)] + (list(names) if names else [])
        out = self.proxy.command_inout("DbGetProperty", _sa(args)).value
        props = codec.unpack_properties(list(out))
        result = {n.lower(): v for n, v in props.items()}
        if names:
            for n in names:
                result.setdefault(n.lower(), [])
        return result

    def delete_device_property(self, owner, names) -> None:
        self.proxy.command_inout("DbDeleteProperty", _sa([str(owner)] + list(names)))

    # aliases used with class or free-property owners
    put_property = put_device_property
    get_property = get_device_property
    delete_property = delete_device_property
