"""Client proxy: name resolution through the database, multiplexed
synchronous calls, callback-style asynchronous commands, and automatic
reconnection that hides server restarts.

Retry discipline: a transport failure detected before the request bytes were
fully written triggers one re-import + reconnect + retry; a failure after the
full write is surfaced, because the command may already have executed.
"""
from __future__ import annotations

import os
import queue
import socket
import struct
import threading
import time

from ..model import (
    AttributeConfig,
    AttributeValue,
    CommandInfo,
    DevFailed,
    DeviceState,
    TangoTypeTag,
    TangoValue,
    VOID,
    fail,
    make_value,
    parse_device_name,
)
from .. import wire
from ..wire import AttrWriteValue, OpCode, ReplyEnvelope, _Reader

ENV_DB = "TNG_HOST"
DEFAULT_TIMEOUT = 10.0

_LOST = object()  # sentinel: connection died while a reply was pending


def db_endpoint_from_env() -> str:
    ep = os.environ.get(ENV_DB, "")
    if not ep or ":" not in ep:
        raise fail("NO_DATABASE", f"{ENV_DB} is not set to host:port", "connect")
    return ep


class _Connection:
    """One live socket with a reader thread demultiplexing replies."""

    def __init__(self, endpoint: str, connect_timeout: float = 5.0):
        host, _, port = endpoint.rpartition(":")
        try:
            self.sock = socket.create_connection((host, int(port)), timeout=connect_timeout)
        except (OSError, ValueError) as exc:
            raise fail("API_DeviceUnreachable", f"cannot connect to {endpoint}: {exc}", "connect")
        self.sock.settimeout(None)
        self.endpoint = endpoint
        self.dead = threading.Event()
        self._pending: dict[int, queue.SimpleQueue] = {}
        self._plock = threading.Lock()
        self._wlock = threading.Lock()
        self._next_id = 1
        threading.Thread(target=self._read_loop, daemon=True,
                         name=f"proxy-reader-{endpoint}").start()

    def _read_loop(self) -> None:
        try:
            while True:
                body = wire.recv_frame(self.sock)
                reply = wire.decode_reply(body)
                with self._plock:
                    q = self._pending.pop(reply.request_id, None)
                if q is not None:
                    q.put(reply)
        except Exception:
            pass
        finally:
            self.dead.set()
            with self._plock:
                pending, self._pending = self._pending, {}
            for q in pending.values():
                q.put(_LOST)
            try:
                self.sock.close()
            except OSError:
                pass

    def new_request(self) -> tuple[int, queue.SimpleQueue]:
        q: queue.SimpleQueue = queue.SimpleQueue()
        with self._plock:
            rid = self._next_id
            self._next_id += 1
            self._pending[rid] = q
        return rid, q

    def forget(self, rid: int) -> None:
        with self._plock:
            self._pending.pop(rid, None)

    def send(self, body: bytes) -> None:
        """Raises OSError when the bytes could not be (fully) written."""
        with self._wlock:
            self.sock.sendall(wire.write_frame(body))

    def close(self) -> None:
        self.dead.set()
        try:
            self.sock.shutdown(socket.SHUT_RDWR)
        except OSError:
            pass
        try:
            self.sock.close()
        except OSError:
            pass


class DeviceProxy:
    """Handle on one remote device; shareable between threads."""

    def __init__(self, name: str, db: str | None = None, timeout: float = DEFAULT_TIMEOUT):
        self.timeout = timeout
        self._explicit_endpoint = None
        if name.count("/") == 3 and ":" in name.split("/", 1)[0]:
            endpoint, _, devpart = name.partition("/")
            self._explicit_endpoint = endpoint
            self.name = parse_device_name(devpart)
            self._db_endpoint = None
        else:
            self.name = parse_device_name(name)
            self._db_endpoint = db  # resolved lazily from env if still None
        self._endpoint: str | None = self._explicit_endpoint
        self._conn: _Connection | None = None
        self._lock = threading.Lock()
        self._async: "_AsyncWorker | None" = None
        self._configs: dict[str, AttributeConfig] | None = None

    # -- connection management -------------------------------------------

    def _resolve(self, force: bool) -> str:
        if self._explicit_endpoint is not None:
            return self._explicit_endpoint
        if self._endpoint is not None and not force:
            return self._endpoint
        from .db import DatabaseClient
        if self._db_endpoint is None:
            self._db_endpoint = db_endpoint_from_env()
        rec = DatabaseClient(self._db_endpoint).import_device(self.name)
        if not rec["endpoint"]:
            raise fail("API_DeviceUnreachable",
                       f"device {self.name} has never been exported", "connect")
        self._endpoint = rec["endpoint"]
        return self._endpoint

    def _ensure_conn(self, force_resolve: bool) -> _Connection:
        with self._lock:
            if self._conn is not None and not self._conn.dead.is_set() and not force_resolve:
                return self._conn
            if self._conn is not None:
                self._conn.close()
                self._conn = None
            endpoint = self._resolve(force=force_resolve)
            self._conn = _Connection(endpoint)
            return self._conn

    def close(self) -> None:
        with self._lock:
            if self._conn is not None:
                self._conn.close()
                self._conn = None
        if self._async is not None:
            self._async.stop()
            self._async = None

    # -- raw call ---------------------------------------------------------

    def _call(self, op: OpCode, payload: bytes, timeout: float | None = None) -> ReplyEnvelope:
        timeout = timeout if timeout is not None else self.timeout
        body = wire.encode_request(
            wire.RequestEnvelope(0, int(op), str(self.name), payload))
        last_exc: Exception | None = None
        for attempt in (0, 1):
            try:
                conn = self._ensure_conn(force_resolve=(attempt == 1))
            except DevFailed as exc:
                last_exc = exc
                continue
            rid, q = conn.new_request()
            framed = struct.pack("<IB", rid, int(op)) + body[5:]
            try:
                conn.send(framed)
            except OSError as exc:
                # request not fully written: safe to retry once
                conn.forget(rid)
                conn.close()
                last_exc = fail("API_DeviceUnreachable",
                                f"send to {conn.endpoint} failed: {exc}", "call")
                continue
            try:
                reply = q.get(timeout=timeout)
            except queue.Empty:
                conn.forget(rid)
                raise fail("API_DeviceTimedOut",
                           f"no reply from {conn.endpoint} within {timeout}s", "call")
            if reply is _LOST:
                # the request was fully written: the command may have run
                raise fail("API_DeviceUnreachable",
                           f"connection to {conn.endpoint} lost awaiting the reply", "call")
            return reply
        raise last_exc if last_exc is not None else fail(
            "API_DeviceUnreachable", f"cannot reach {self.name}", "call")

    def _call_ok(self, op: OpCode, payload: bytes, timeout: float | None = None) -> bytes:
        reply = self._call(op, payload, timeout)
        if not reply.ok:
            raise DevFailed(*wire.decode_errors(reply.payload))
        return reply.payload

    # -- commands ---------------------------------------------------------

    def command_inout(self, cmd: str, argin: TangoValue = VOID) -> TangoValue:
        out = bytearray()
        wire._put_string(out, cmd)
        out += wire.encode_value(argin)
        payload = self._call_ok(OpCode.CommandInout, bytes(out))
        value, _ = wire.decode_value(payload)
        return value

    def command_inout_async(self, cmd: str, argin: TangoValue, callback) -> int:
        if self._async is None:
            self._async = _AsyncWorker(self)
        return self._async.submit(cmd, argin, callback)

    # -- attributes -------------------------------------------------------

    def read_attributes(self, names) -> list:
        out = bytearray(struct.pack("<I", len(names)))
        for n in names:
            wire._put_string(out, n)
        payload = self._call_ok(OpCode.ReadAttributes, bytes(out))
        r = _Reader(payload)
        n = r.count(1)
        results = []
        for _ in range(n):
            if r.u8() == 0:
                results.append(wire.decode_attr_value_at(r))
            else:
                results.append(DevFailed(*wire.decode_errors_at(r)))
        return results

    def read_attribute(self, name: str) -> AttributeValue:
        res = self.read_attributes([name])[0]
        if isinstance(res, DevFailed):
            raise res
        return res

    def write_attributes(self, writes) -> None:
        out = bytearray(struct.pack("<I", len(writes)))
        for w in writes:
            out += wire.encode_attr_write(w)
        self._call_ok(OpCode.WriteAttributes, bytes(out))

    def write_attribute(self, name: str, data, dim_x: int | None = None, dim_y: int = 0) -> None:
        cfg = self._config(name)
        if not isinstance(data, (list, tuple)):
            data = (data,)
            if dim_x is None:
                dim_x = 1
        elif data and isinstance(data[0], (list, tuple)):
            # image given as rows
            rows = [tuple(r) for r in data]
            if len({len(r) for r in rows}) > 1:
                raise fail("API_IncompatibleAttrDataType", f"{name}: ragged image rows",
                           "write_attribute")
            if dim_x is None:
                dim_x, dim_y = len(rows[0]), len(rows)
            data = tuple(x for r in rows for x in r)
        data = tuple(data)
        if dim_x is None:
            dim_x = len(data)
        self.write_attributes([AttrWriteValue(cfg.name, cfg.element_type, dim_x, dim_y, data)])

    def _config(self, name: str) -> AttributeConfig:
        if self._configs is None:
            self._configs = {c.name.lower(): c for c in self.get_attribute_config()}
        cfg = self._configs.get(name.lower())
        if cfg is None:
            self._configs = {c.name.lower(): c for c in self.get_attribute_config()}
            cfg = self._configs.get(name.lower())
        if cfg is None:
            raise fail("API_AttrNotFound", f"attribute {name} not found on {self.name}",
                       "write_attribute")
        return cfg

    def get_attribute_config(self, names=None) -> list[AttributeConfig]:
        names = names or []
        out = bytearray(struct.pack("<I", len(names)))
        for n in names:
            wire._put_string(out, n)
        payload = self._call_ok(OpCode.GetAttributeConfig, bytes(out))
        r = _Reader(payload)
        n = r.count(1)
        return [wire.decode_attr_config_at(r) for _ in range(n)]

    def set_attribute_config(self, configs) -> None:
        out = bytearray(struct.pack("<I", len(configs)))
        for c in configs:
            out += wire.encode_attr_config(c)
        self._call_ok(OpCode.SetAttributeConfig, bytes(out))

    # -- description and health ------------------------------------------

    def command_list_query(self) -> list[CommandInfo]:
        payload = self._call_ok(OpCode.CommandListQuery, b"")
        r = _Reader(payload)
        n = r.count(1)
        return [wire.decode_command_info_at(r) for _ in range(n)]

    def command_query(self, name: str) -> CommandInfo:
        out = bytearray()
        wire._put_string(out, name)
        payload = self._call_ok(OpCode.CommandQuery, bytes(out))
        return wire.decode_command_info_at(_Reader(payload))

    def ping(self) -> int:
        """Round-trip time in microseconds."""
        t0 = time.perf_counter()
        self._call_ok(OpCode.Ping, b"")
        return int((time.perf_counter() - t0) * 1e6)

    def state(self) -> DeviceState:
        payload = self._call_ok(OpCode.State, b"")
        if len(payload) != 1:
            raise fail("API_ProtocolError", "bad State payload", "state")
        return DeviceState(payload[0])

    def status(self) -> str:
        payload = self._call_ok(OpCode.Status, b"")
        return _Reader(payload).string()


class _AsyncWorker:
    """Single delivery thread per proxy: FIFO submission order, callbacks
    fire exactly once, never inline with submit()."""

    def __init__(self, proxy: DeviceProxy):
        self.proxy = proxy
        self.queue: queue.Queue = queue.Queue()
        self._next = 1
        self._thread = threading.Thread(target=self._run, daemon=True,
                                        name=f"proxy-async-{proxy.name}")
        self._thread.start()

    def submit(self, cmd: str, argin: TangoValue, callback) -> int:
        handle = self._next
        self._next += 1
        self.queue.put((cmd, argin, callback))
        return handle

    def _run(self) -> None:
        while True:
            item = self.queue.get()
            if item is None:
                return
            cmd, argin, callback = item
            try:
                result = self.proxy.command_inout(cmd, argin)
            except DevFailed as exc:
                result = exc.errors
            except Exception as exc:
                result = (fail("API_DeviceUnreachable", str(exc), cmd).errors[0],)
            try:
                callback(cmd, result)
            except Exception:
                pass  # a broken callback must not kill delivery

    def stop(self) -> None:
        self.queue.put(None)


def connect(name: str, db: str | None = None, timeout: float = DEFAULT_TIMEOUT) -> DeviceProxy:
    """Build a proxy from "domain/family/member" or "host:port/domain/family/member"."""
    return DeviceProxy(name, db=db, timeout=timeout)
