"""Serving the wire protocol: one handler per connection, per-device request
ordering, concurrent across devices.

Replies to different devices on one connection may interleave; replies to a
single device always come back in request order.
"""
from __future__ import annotations

import queue
import socket
import socketserver
import struct
import threading

from ..model import DevError, DevFailed, ErrorSeverity, fail
from .. import wire
from ..wire import (
    OpCode,
    ReplyEnvelope,
    RequestEnvelope,
    _Reader,
)
from .device import DeviceInstance


class DeviceRegistry:
    """Name -> device instance table behind a lock; lookups are lowercase."""

    def __init__(self):
        self._devices: dict[str, DeviceInstance] = {}
        self._lock = threading.Lock()

    def add(self, device: DeviceInstance) -> None:
        with self._lock:
            self._devices[str(device.name).lower()] = device

    def remove(self, name: str) -> None:
        with self._lock:
            self._devices.pop(name.lower(), None)

    def get(self, name: str) -> DeviceInstance:
        with self._lock:
            dev = self._devices.get(name.lower())
        if dev is None:
            raise fail("API_DeviceNotFound", f"device {name} is not served here", "serve_connection")
        return dev

    def all(self) -> list[DeviceInstance]:
        with self._lock:
            return list(self._devices.values())


def _error_reply(request_id: int, exc: Exception) -> ReplyEnvelope:
    if isinstance(exc, DevFailed):
        errors = exc.errors
    else:
        errors = (DevError("API_InternalError", f"{type(exc).__name__}: {exc}",
                           "serve_connection", ErrorSeverity.Panic),)
    return ReplyEnvelope(request_id, 1, wire.encode_errors(errors))


def handle_request(device: DeviceInstance, req: RequestEnvelope) -> ReplyEnvelope:
    try:
        payload = _route(device, req)
        return ReplyEnvelope(req.request_id, 0, payload)
    except Exception as exc:  # every failure becomes an error reply
        return _error_reply(req.request_id, exc)


def _route(device: DeviceInstance, req: RequestEnvelope) -> bytes:
    op = req.op_code
    r = _Reader(req.payload)
    if op == OpCode.CommandInout:
        cmd = r.string()
        argin = wire.decode_value_at(r)
        result = device.dispatch_command(cmd, argin)
        return wire.encode_value(result)
    if op == OpCode.ReadAttributes:
        n = r.count(4)
        names = [r.string() for _ in range(n)]
        results = device.dispatch_read_attributes(names)
        out = bytearray(struct.pack("<I", len(results)))
        for res in results:
            if isinstance(res, tuple):  # DevError sequence
                out.append(1)
                out += wire.encode_errors(res)
            else:
                out.append(0)
                out += wire.encode_attr_value(res)
        return bytes(out)
    if op == OpCode.WriteAttributes:
        n = r.count(4)
        writes = [wire.decode_attr_write_at(r) for _ in range(n)]
        device.dispatch_write_attributes(writes)
        return b""
    if op == OpCode.CommandListQuery:
        infos = device.command_list()
        out = bytearray(struct.pack("<I", len(infos)))
        for info in infos:
            out += wire.encode_command_info(info)
        return bytes(out)
    if op == OpCode.CommandQuery:
        info = device.command_query(r.string())
        return wire.encode_command_info(info)
    if op == OpCode.GetAttributeConfig:
        n = r.count(4)
        names = [r.string() for _ in range(n)]
        configs = device.attribute_configs(names or None)
        out = bytearray(struct.pack("<I", len(configs)))
        for cfg in configs:
            out += wire.encode_attr_config(cfg)
        return bytes(out)
    if op == OpCode.SetAttributeConfig:
        n = r.count(4)
        configs = [wire.decode_attr_config_at(r) for _ in range(n)]
        device.set_attribute_config(configs)
        return b""
    if op == OpCode.Ping:
        return b""
    if op == OpCode.State:
        return bytes([int(device.state)])
    if op == OpCode.Status:
        out = bytearray()
        wire._put_string(out, device.status_text)
        return bytes(out)
    raise fail("BAD_OPCODE", f"unknown op code {op}", "serve_connection")


class _DeviceWorker:
    """Serial executor for one device on one connection."""

    def __init__(self, device: DeviceInstance, send_reply):
        self.queue: queue.Queue = queue.Queue()
        self._thread = threading.Thread(
            target=self._run, args=(device, send_reply), daemon=True,
            name=f"conn-worker-{device.name}")
        self._thread.start()

    def _run(self, device, send_reply):
        while True:
            req = self.queue.get()
            if req is None:
                return
            reply = handle_request(device, req)
            send_reply(reply)

    def stop(self):
        self.queue.put(None)


def serve_connection(sock: socket.socket, registry: DeviceRegistry) -> None:
    """Serve one client connection until it closes or sends garbage."""
    write_lock = threading.Lock()
    closed = threading.Event()

    def send_reply(reply: ReplyEnvelope) -> None:
        if closed.is_set():
            return
        try:
            with write_lock:
                wire.send_frame(sock, wire.encode_reply(reply))
        except OSError:
            closed.set()

    workers: dict[str, _DeviceWorker] = {}
    try:
        while not closed.is_set():
            try:
                body = wire.recv_frame(sock)
            except (wire.ConnectionClosed, DevFailed, OSError):
                break
            try:
                req = wire.decode_request(body)
            except DevFailed:
                break  # protocol-level garbage: drop the connection
            try:
                device = registry.get(req.device)
            except DevFailed as exc:
                send_reply(_error_reply(req.request_id, exc))
                continue
            key = req.device.lower()
            worker = workers.get(key)
            if worker is None:
                worker = workers[key] = _DeviceWorker(device, send_reply)
            worker.queue.put(req)
    finally:
        closed.set()
        for worker in workers.values():
            worker.stop()
        try:
            sock.close()
        except OSError:
            pass


class WireServer(socketserver.ThreadingTCPServer):
    """TCP listener serving the wire protocol for a device registry."""

    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, host: str, port: int, registry: DeviceRegistry):
        self.registry = registry
        super().__init__((host, port), _Handler)

    @property
    def endpoint(self) -> str:
        host, port = self.server_address[:2]
        return f"{host}:{port}"

    def serve_forever_in_thread(self) -> threading.Thread:
        t = threading.Thread(target=self.serve_forever, daemon=True, name="wire-server")
        t.start()
        return t


class _Handler(socketserver.BaseRequestHandler):
    def handle(self):
        serve_connection(self.request, self.server.registry)
