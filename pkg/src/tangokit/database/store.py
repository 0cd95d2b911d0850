"""In-memory state of the naming/configuration database plus its text-file
persistence (atomic rewrite, see FORMAT.md for the line grammar).

The store is pure data; the network face lives in service.py.
"""
from __future__ import annotations

import os
import re
import threading
import time
from dataclasses import dataclass, field, replace
from urllib.parse import quote, unquote

from ..model import DeviceName, fail, parse_device_name

SELF_DEVICE = "sys/database/2"
SELF_SERVER = "databaseds/2"
SELF_CLASS = "DataBase"

_IDENT = re.compile(r"^[^\s|,/]+$")


@dataclass(frozen=True)
class ServerRecord:
    server_id: str  # "ExecName/instance", case preserved for process spawning
    host: str
    level: int
    classes: tuple = ()


@dataclass(frozen=True)
class DeviceRecord:
    name: DeviceName
    class_name: str
    server_id: str
    exported: bool = False
    endpoint: str = ""
    export_time: int = 0


def normalize_server_id(server_id: str) -> str:
    parts = server_id.split("/")
    if len(parts) != 2 or not all(p and _IDENT.match(p) for p in parts):
        raise fail("MALFORMED_NAME", f"server id {server_id!r} is not ExecName/instance",
                   "database")
    return server_id.lower()


def _check_class_name(name: str) -> str:
    if not _IDENT.match(name):
        raise fail("MALFORMED_NAME", f"bad class name {name!r}", "database")
    return name


def match_pattern(pattern: str, name: str) -> bool:
    """'*' wildcards within '/'-separated parts, case-insensitive."""
    p_parts = pattern.lower().split("/")
    n_parts = name.lower().split("/")
    if len(p_parts) != len(n_parts):
        return False
    for p, n in zip(p_parts, n_parts):
        regex = "^" + ".*".join(re.escape(chunk) for chunk in p.split("*")) + "$"
        if not re.match(regex, n):
            return False
    return True


def _check_pattern(pattern: str, parts: int) -> None:
    ps = pattern.split("/")
    if len(ps) != parts or any(not p for p in ps):
        raise fail("MALFORMED_PATTERN", f"pattern {pattern!r} must have {parts} non-empty parts",
                   "browse")


class DbStore:
    """All database state; every public method takes the internal lock."""

    def __init__(self):
        self._lock = threading.RLock()
        self.servers: dict[str, ServerRecord] = {}
        self.devices: dict[str, DeviceRecord] = {}  # key: lowercase "d/f/m"
        self.properties: dict[str, dict[str, list[str]]] = {}  # owner -> name -> values
        self._prop_case: dict[str, dict[str, str]] = {}  # owner -> lower name -> display name
        self._ensure_self_record()

    def _ensure_self_record(self) -> None:
        if SELF_SERVER not in self.servers:
            self.servers[SELF_SERVER] = ServerRecord(SELF_SERVER, "localhost", 0, (SELF_CLASS,))
        if SELF_DEVICE not in self.devices:
            self.devices[SELF_DEVICE] = DeviceRecord(
                parse_device_name(SELF_DEVICE), SELF_CLASS, SELF_SERVER)

    # -- servers and devices ----------------------------------------------

    def add_server(self, server_id: str, host: str, level: int, bindings: dict) -> None:
        """Register/replace a server and its class -> device-name bindings."""
        sid = normalize_server_id(server_id)
        if level < 0:
            raise fail("MALFORMED_NAME", f"negative level {level}", "add_server")
        parsed: dict[str, list[DeviceName]] = {}
        for class_name, names in bindings.items():
            _check_class_name(class_name)
            if not names:
                raise fail("CLASS_EMPTY", f"class {class_name} bound with zero devices",
                           "add_server")
            parsed[class_name] = [
                n if isinstance(n, DeviceName) else parse_device_name(n) for n in names
            ]
        with self._lock:
            for class_name, names in parsed.items():
                for n in names:
                    existing = self.devices.get(str(n))
                    if existing is not None and existing.server_id != sid:
                        raise fail("DEVICE_OWNED",
                                   f"device {n} already belongs to server {existing.server_id}",
                                   "add_server")
            # replace: drop devices no longer listed for this server
            keep = {str(n) for names in parsed.values() for n in names}
            for key in [k for k, d in self.devices.items()
                        if d.server_id == sid and k not in keep and k != SELF_DEVICE]:
                del self.devices[key]
            # lookups key on the lowercase id, but the display case survives:
            # the supervisor spawns processes by the executable-name part
            self.servers[sid] = ServerRecord(server_id, host, level, tuple(parsed))
            for class_name, names in parsed.items():
                for n in names:
                    old = self.devices.get(str(n))
                    if old is not None:
                        self.devices[str(n)] = replace(old, class_name=class_name, server_id=sid)
                    else:
                        self.devices[str(n)] = DeviceRecord(n, class_name, sid)
            self._check_integrity()

    def delete_server(self, server_id: str) -> None:
        sid = normalize_server_id(server_id)
        with self._lock:
            if sid == SELF_SERVER:
                raise fail("DEVICE_OWNED", "cannot delete the database's own record",
                           "delete_server")
            self.servers.pop(sid, None)
            for key in [k for k, d in self.devices.items() if d.server_id == sid]:
                del self.devices[key]

    def get_server(self, server_id: str) -> ServerRecord:
        sid = normalize_server_id(server_id)
        with self._lock:
            rec = self.servers.get(sid)
        if rec is None:
            raise fail("SERVER_NOT_DEFINED", f"server {server_id} is not registered", "database")
        return rec

    def list_servers(self, pattern: str = "*") -> list[ServerRecord]:
        with self._lock:
            recs = list(self.servers.values())
        if pattern in ("", "*", "*/*"):
            return sorted(recs, key=lambda r: r.server_id)
        return sorted((r for r in recs if match_pattern(pattern, r.server_id)),
                      key=lambda r: r.server_id)

    def get_device_list(self, server_id: str, class_name: str) -> list[DeviceName]:
        try:
            sid = normalize_server_id(server_id)
        except Exception:
            return []
        with self._lock:
            return sorted(
                (d.name for d in self.devices.values()
                 if d.server_id == sid and d.class_name.lower() == class_name.lower()),
            )

    def get_device(self, name) -> DeviceRecord:
        dn = name if isinstance(name, DeviceName) else parse_device_name(name)
        with self._lock:
            rec = self.devices.get(str(dn))
        if rec is None:
            raise fail("DEVICE_NOT_DEFINED", f"device {dn} is not defined in the database",
                       "database")
        return rec

    def export_device(self, name, endpoint: str, server_id: str) -> None:
        dn = name if isinstance(name, DeviceName) else parse_device_name(name)
        sid = normalize_server_id(server_id)
        with self._lock:
            rec = self.devices.get(str(dn))
            if rec is None:
                raise fail("DEVICE_NOT_DEFINED", f"device {dn} is not defined in the database",
                           "export_device")
            self.devices[str(dn)] = replace(
                rec, exported=True, endpoint=endpoint, server_id=sid,
                export_time=int(time.time() * 1000))

    def unexport_device(self, name) -> None:
        dn = name if isinstance(name, DeviceName) else parse_device_name(name)
        with self._lock:
            rec = self.devices.get(str(dn))
            if rec is not None:
                self.devices[str(dn)] = replace(rec, exported=False)

    def unexport_server(self, server_id: str) -> None:
        sid = normalize_server_id(server_id)
        with self._lock:
            for key, rec in self.devices.items():
                if rec.server_id == sid and rec.exported:
                    self.devices[key] = replace(rec, exported=False)

    def browse_devices(self, pattern: str) -> list[str]:
        _check_pattern(pattern, 3)
        with self._lock:
            names = list(self.devices)
        return sorted(n for n in names if match_pattern(pattern, n))

    def list_hosts(self) -> list[str]:
        with self._lock:
            return sorted({r.host for r in self.servers.values()})

    def list_classes(self) -> list[str]:
        with self._lock:
            return sorted({c for r in self.servers.values() for c in r.classes})

    # -- properties -------------------------------------------------------

    @staticmethod
    def _owner_key(owner) -> str:
        text = str(owner)
        if not text or "|" in text or any(c.isspace() for c in text):
            raise fail("MALFORMED_NAME", f"bad property owner {text!r}", "properties")
        return text.lower()

    def put_property(self, owner, entries: dict) -> None:
        key = self._owner_key(owner)
        with self._lock:
            bucket = self.properties.setdefault(key, {})
            case = self._prop_case.setdefault(key, {})
            for name, values in entries.items():
                if not name or "|" in name:
                    raise fail("MALFORMED_NAME", f"bad property name {name!r}", "put_property")
                bucket[name.lower()] = [str(v) for v in values]
                case[name.lower()] = name

    def get_property(self, owner, names=None) -> dict[str, list[str]]:
        """Lower-cased property names -> values; missing names map to []."""
        key = self._owner_key(owner)
        with self._lock:
            bucket = dict(self.properties.get(key, {}))
        if names is None:
            return {n: list(v) for n, v in bucket.items()}
        return {n.lower(): list(bucket.get(n.lower(), [])) for n in names}

    def property_display_name(self, owner, name: str) -> str:
        key = self._owner_key(owner)
        with self._lock:
            return self._prop_case.get(key, {}).get(name.lower(), name)

    def delete_property(self, owner, names) -> None:
        key = self._owner_key(owner)
        with self._lock:
            bucket = self.properties.get(key)
            if bucket is None:
                return
            for name in names:
                bucket.pop(name.lower(), None)
                self._prop_case.get(key, {}).pop(name.lower(), None)
            if not bucket:
                self.properties.pop(key, None)

    # -- integrity --------------------------------------------------------

    def _check_integrity(self) -> None:
        for rec in self.devices.values():
            if rec.server_id not in self.servers:
                raise fail("CORRUPT_FILE",
                           f"device {rec.name} references unknown server {rec.server_id}",
                           "database")

    # -- persistence ------------------------------------------------------

    def dump(self) -> str:
        with self._lock:
            lines = ["# tangokit database v1", "[servers]"]
            for rec in sorted(self.servers.values(), key=lambda r: r.server_id):
                lines.append(f"{rec.server_id}|{rec.host}|{rec.level}|{','.join(rec.classes)}")
            lines.append("[devices]")
            for key in sorted(self.devices):
                d = self.devices[key]
                lines.append(f"{d.name}|{d.class_name}|{d.server_id}|"
                             f"{1 if d.exported else 0}|{d.endpoint}|{d.export_time}")
            lines.append("[properties]")
            for owner in sorted(self.properties):
                for pname in sorted(self.properties[owner]):
                    values = self.properties[owner][pname]
                    display = self._prop_case.get(owner, {}).get(pname, pname)
                    encoded = "|".join(quote(v, safe="") for v in values)
                    lines.append(f"{owner}|{display}|{len(values)}"
                                 + (f"|{encoded}" if values else ""))
            return "\n".join(lines) + "\n"

    def save(self, path: str) -> None:
        tmp = path + ".tmp"
        try:
            with open(tmp, "w", encoding="utf-8") as f:
                f.write(self.dump())
                f.flush()
                os.fsync(f.fileno())
            os.replace(tmp, path)
        except OSError as exc:
            raise fail("IO_FAILURE", f"cannot persist database to {path}: {exc}", "save")

    @classmethod
    def load(cls, path: str) -> "DbStore":
        store = cls()
        if not os.path.exists(path):
            return store
        try:
            with open(path, "r", encoding="utf-8") as f:
                text = f.read()
        except OSError as exc:
            raise fail("IO_FAILURE", f"cannot read {path}: {exc}", "load")
        store._parse(text, path)
        return store

    def _parse(self, text: str, path: str) -> None:
        def corrupt(lineno, msg):
            return fail("CORRUPT_FILE", f"{path}:{lineno}: {msg}", "load")

        section = None
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            if line in ("[servers]", "[devices]", "[properties]"):
                section = line[1:-1]
                continue
            if section is None:
                raise corrupt(lineno, f"content before any section header: {line!r}")
            fields = line.split("|")
            try:
                if section == "servers":
                    if len(fields) != 4:
                        raise corrupt(lineno, "server line needs 4 fields")
                    sid, host, level, classes = fields
                    self.servers[normalize_server_id(sid)] = ServerRecord(
                        sid, host, int(level),
                        tuple(c for c in classes.split(",") if c))
                elif section == "devices":
                    if len(fields) != 6:
                        raise corrupt(lineno, "device line needs 6 fields")
                    name, class_name, sid, exported, endpoint, ts = fields
                    dn = parse_device_name(name)
                    self.devices[str(dn)] = DeviceRecord(
                        dn, class_name, normalize_server_id(sid),
                        exported == "1", endpoint, int(ts))
                else:
                    if len(fields) < 3:
                        raise corrupt(lineno, "property line needs at least 3 fields")
                    owner, pname, count = fields[0], fields[1], int(fields[2])
                    values = fields[3:]
                    if len(values) != count:
                        raise corrupt(lineno, f"property claims {count} values, has {len(values)}")
                    self.put_property(owner, {pname: [unquote(v) for v in values]})
            except (ValueError, IndexError) as exc:
                raise corrupt(lineno, str(exc)) from None
            except Exception as exc:
                if getattr(exc, "reason", "") == "CORRUPT_FILE":
                    raise
                raise corrupt(lineno, str(exc)) from None
        self._ensure_self_record()
        self._check_integrity()
