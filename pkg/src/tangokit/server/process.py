"""Device-server process skeleton: DB-driven startup, endpoint export,
signal-driven shutdown, and the standard command line.

Invocation convention: ``<exec_name> <instance> [--port N] [--db host:port]``
with the TNG_HOST environment variable as the --db fallback.
Exit codes: 0 clean, 2 server not registered, 3 database unreachable.
"""
from __future__ import annotations

import argparse
import os
import signal
import sys
import threading
import time

from ..client.db import DatabaseClient
from ..client.proxy import ENV_DB
from ..model import DevFailed, parse_device_name
from .connection import DeviceRegistry, WireServer
from .device import DeviceClassDescriptor, DeviceInstance

EXIT_OK = 0
EXIT_NOT_REGISTERED = 2
EXIT_DB_UNREACHABLE = 3


class ServerStartupError(Exception):
    def __init__(self, exit_code: int, message: str):
        super().__init__(message)
        self.exit_code = exit_code


class ServerProcess:
    """One running device server hosting one or more device classes."""

    def __init__(self, exec_name: str, instance: str, classes,
                 port: int = 0, db: str | None = None, host: str = "127.0.0.1",
                 db_attempts: int = 5, db_backoff_s: float = 0.4):
        self.exec_name = exec_name
        self.instance = instance
        self.server_id = f"{exec_name}/{instance}".lower()
        self.classes: list[DeviceClassDescriptor] = list(classes)
        self.port = port
        self.host = host
        self.db_endpoint = db or os.environ.get(ENV_DB, "")
        self.db_attempts = db_attempts
        self.db_backoff_s = db_backoff_s
        self.registry = DeviceRegistry()
        self.devices: list[DeviceInstance] = []
        self.wire_server: WireServer | None = None
        self.db: DatabaseClient | None = None
        self._shutdown = threading.Event()

    # -- startup ----------------------------------------------------------

    def _connect_db(self) -> DatabaseClient:
        if not self.db_endpoint:
            raise ServerStartupError(EXIT_DB_UNREACHABLE,
                                     f"no database endpoint: set {ENV_DB} or pass --db")
        last = None
        for attempt in range(self.db_attempts):
            try:
                client = DatabaseClient(self.db_endpoint)
                client.ping()
                return client
            except DevFailed as exc:
                last = exc
                time.sleep(self.db_backoff_s * (2 ** attempt))
        raise ServerStartupError(EXIT_DB_UNREACHABLE,
                                 f"database {self.db_endpoint} unreachable: {last}")

    def startup(self) -> None:
        self.db = self._connect_db()
        try:
            self.db.get_server_info(self.server_id)
        except DevFailed:
            raise ServerStartupError(
                EXIT_NOT_REGISTERED,
                f"server {self.server_id} is not registered in the database") from None

        for descriptor in self.classes:
            for name in self.db.get_device_list(self.server_id, descriptor.class_name):
                device = DeviceInstance(parse_device_name(name), descriptor, db=self.db)
                self.devices.append(device)
                self.registry.add(device)
        for device in self.devices:
            device.initialize()
            device.poller.start()

        self.wire_server = WireServer(self.host, self.port, self.registry)
        self.wire_server.serve_forever_in_thread()
        endpoint = self.wire_server.endpoint
        for device in self.devices:
            self.db.export_device(device.name, endpoint, self.server_id)

    @property
    def endpoint(self) -> str:
        return self.wire_server.endpoint if self.wire_server else ""

    # -- shutdown ---------------------------------------------------------

    def shutdown(self) -> None:
        if self._shutdown.is_set():
            return
        self._shutdown.set()
        for device in reversed(self.devices):
            try:
                if self.db is not None:
                    self.db.unexport_device(device.name)
            except DevFailed:
                pass
            device.delete()
        if self.wire_server is not None:
            self.wire_server.shutdown()
            self.wire_server.server_close()
        if self.db is not None:
            self.db.close()

    def wait_for_shutdown(self) -> None:
        self._shutdown.wait()

    def request_shutdown(self) -> None:
        self._shutdown.set()


def run_server(exec_name: str, instance: str, classes, port: int = 0,
               db: str | None = None, host: str = "127.0.0.1") -> int:
    """Blocking process body; returns the exit code."""
    proc = ServerProcess(exec_name, instance, classes, port=port, db=db, host=host)
    try:
        proc.startup()
    except ServerStartupError as exc:
        print(f"{exec_name}/{instance}: {exc}", file=sys.stderr)
        return exc.exit_code

    stop = threading.Event()
    for sig in (signal.SIGINT, signal.SIGTERM):
        signal.signal(sig, lambda *_: stop.set())
    print(f"{exec_name}/{instance}: serving {len(proc.devices)} device(s) on {proc.endpoint}",
          flush=True)
    stop.wait()
    proc.shutdown()
    return EXIT_OK


def run_server_main(exec_name: str, classes, argv=None) -> int:
    """Standard CLI for a device-server executable."""
    parser = argparse.ArgumentParser(
        prog=exec_name, usage=f"{exec_name} <instance> [--port N] [--db host:port]")
    parser.add_argument("instance")
    parser.add_argument("--port", type=int, default=0)
    parser.add_argument("--db", default=None)
    parser.add_argument("--host", default="127.0.0.1")
    args = parser.parse_args(argv)
    return run_server(exec_name, args.instance, classes,
                      port=args.port, db=args.db, host=args.host)
