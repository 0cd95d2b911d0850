"""Per-host supervisor device: starts, stops and watches the device-server
processes registered for its host in the database.

One Starter runs per host as a normal device server (``Starter <hostname>``,
device ``tango/admin/<hostname>``).  Servers registered with level >= 1 for the
host are supervised; level 0 means "never touched".  Liveness combines child
process status with a TCP probe of the server's exported endpoint, so servers
started outside the Starter are seen too.  Crashed servers are reported, never
restarted automatically.
"""
from __future__ import annotations

import argparse
import os
import shutil
import signal
import socket
import subprocess
import sys
import threading
from dataclasses import dataclass, field

from .client import DatabaseClient, db_endpoint_from_env
from .model import (
    CommandInfo,
    DevFailed,
    DeviceState,
    TangoTypeTag,
    fail,
    make_value,
)
from .server import (
    CommandDescriptor,
    DeviceClassDescriptor,
    DevicePropertyInfo,
    run_server,
)

RUNNING, STOPPED, CRASHED = "Running", "Stopped", "Crashed"


@dataclass
class SupervisedServer:
    server_id: str
    level: int
    desired: str = STOPPED
    proc: subprocess.Popen | None = None
    log: object = None
    last_exit_code: int | None = None
    devices: list = field(default_factory=list)


def probe_endpoint(endpoint: str, timeout: float = 0.5) -> bool:
    host, _, port = endpoint.rpartition(":")
    try:
        with socket.create_connection((host, int(port)), timeout=timeout):
            return True
    except OSError:
        return False


class Supervisor:
    """Process table plus the periodic scan; handlers read under the lock."""

    def __init__(self, host: str, db_endpoint: str, log_dir: str, scan_period_ms: int):
        self.host = host
        self.db_endpoint = db_endpoint
        self.log_dir = log_dir
        self.scan_period_ms = max(100, scan_period_ms)
        self.db = DatabaseClient(db_endpoint)
        self.lock = threading.RLock()
        self.servers: dict[str, SupervisedServer] = {}
        self._stop = threading.Event()
        self._thread: threading.Thread | None = None

    # -- registration scan -------------------------------------------------

    def refresh(self) -> None:
        try:
            registered = self.db.get_server_list("*")
        except DevFailed:
            return
        seen = set()
        for sid in registered:
            try:
                info = self.db.get_server_info(sid)
            except DevFailed:
                continue
            if info["host"].lower() != self.host.lower() or info["level"] < 1:
                continue
            seen.add(sid.lower())
            with self.lock:
                rec = self.servers.get(sid.lower())
                if rec is None:
                    rec = SupervisedServer(sid, info["level"])
                    self.servers[sid.lower()] = rec
                rec.level = info["level"]
                devices = []
                for cls in info["classes"]:
                    try:
                        devices += self.db.get_device_list(sid, cls)
                    except DevFailed:
                        pass
                rec.devices = devices
        with self.lock:
            for key in [k for k, r in self.servers.items()
                        if k not in seen and r.proc is None]:
                del self.servers[key]

    def _reap(self) -> None:
        with self.lock:
            for rec in self.servers.values():
                if rec.proc is not None and rec.proc.poll() is not None:
                    rec.last_exit_code = rec.proc.returncode
                    rec.proc = None
                    if rec.log:
                        rec.log.close()
                        rec.log = None

    def observed(self, rec: SupervisedServer) -> str:
        if rec.proc is not None and rec.proc.poll() is None:
            return RUNNING
        # exported endpoint probe catches externally started servers
        for dev in rec.devices:
            try:
                imp = self.db.import_device(dev)
            except DevFailed:
                continue
            if imp["exported"] and probe_endpoint(imp["endpoint"]):
                return RUNNING
        if rec.desired == RUNNING:
            return CRASHED
        return STOPPED

    def partition(self) -> tuple[list[str], list[str]]:
        self._reap()
        running, stopped = [], []
        with self.lock:
            records = list(self.servers.values())
        for rec in records:
            (running if self.observed(rec) == RUNNING else stopped).append(rec.server_id)
        return sorted(running), sorted(stopped)

    # -- commands ----------------------------------------------------------

    def _record(self, server_id: str) -> SupervisedServer:
        with self.lock:
            rec = self.servers.get(server_id.lower())
        if rec is None:
            self.refresh()
            with self.lock:
                rec = self.servers.get(server_id.lower())
        if rec is None:
            raise fail("STARTER_UnknownServer",
                       f"{server_id} is not registered for host {self.host} at level >= 1",
                       "Starter")
        return rec

    def start(self, server_id: str) -> None:
        rec = self._record(server_id)
        self._reap()
        if self.observed(rec) == RUNNING:
            rec.desired = RUNNING
            return
        exec_name, _, instance = rec.server_id.partition("/")
        path = shutil.which(exec_name)
        if path is None:
            raise fail("STARTER_SpawnFailed", f"executable {exec_name} not found on PATH",
                       "DevStart")
        os.makedirs(self.log_dir, exist_ok=True)
        log = open(os.path.join(self.log_dir, f"{exec_name}_{instance}.log"), "ab")
        env = dict(os.environ, TNG_HOST=self.db_endpoint)
        try:
            proc = subprocess.Popen([path, instance], stdout=log, stderr=log, env=env)
        except OSError as exc:
            log.close()
            raise fail("STARTER_SpawnFailed", f"{exec_name}: {exc}", "DevStart")
        with self.lock:
            rec.proc, rec.log, rec.desired = proc, log, RUNNING

    def stop(self, server_id: str) -> None:
        rec = self._record(server_id)
        self._reap()
        rec.desired = STOPPED
        proc = rec.proc
        if proc is None or proc.poll() is not None:
            return
        proc.send_signal(signal.SIGTERM)

        def escalate(p=proc):
            try:
                p.wait(timeout=5.0)
            except subprocess.TimeoutExpired:
                p.kill()
        threading.Thread(target=escalate, daemon=True).start()

    # -- health ------------------------------------------------------------

    def health(self) -> DeviceState:
        self._reap()
        with self.lock:
            records = list(self.servers.values())
        moving = alarm = False
        for rec in records:
            obs = self.observed(rec)
            if rec.desired == RUNNING and obs != RUNNING:
                alarm = True
            if rec.desired == STOPPED and obs == RUNNING and rec.proc is not None:
                moving = True  # termination grace window
        if moving:
            return DeviceState.MOVING
        return DeviceState.ALARM if alarm else DeviceState.ON

    # -- scan thread -------------------------------------------------------

    def scan_once(self) -> DeviceState:
        self.refresh()
        self._reap()
        return self.health()

    def run_scan(self, device) -> None:
        while not self._stop.wait(self.scan_period_ms / 1000.0):
            try:
                state = self.scan_once()
            except Exception:
                continue
            if device.state not in (DeviceState.FAULT, DeviceState.INIT):
                device.set_state(state)

    def start_scan(self, device) -> None:
        self._thread = threading.Thread(target=self.run_scan, args=(device,),
                                        name=f"starter-scan-{self.host}", daemon=True)
        self._thread.start()

    def close(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=2.0)
        self.db.close()


# ---------------------------------------------------------------------------
# device class

def _sup(device) -> Supervisor:
    return device.store["supervisor"]


def init_device(device):
    host = str(device.name).rsplit("/", 1)[-1]
    old = device.store.pop("supervisor", None)
    if old is not None:
        old.close()
    sup = Supervisor(host,
                     device.store["db_endpoint"],
                     device.get_property("LogDir") or "server-logs",
                     device.get_property("ScanPeriodMs") or 2000)
    device.store["supervisor"] = sup
    sup.refresh()
    sup.start_scan(device)


def delete_device(device):
    sup = device.store.pop("supervisor", None)
    if sup is not None:
        sup.close()


def cmd_dev_start(device, argin):
    _sup(device).start(argin.value)
    device.set_state(DeviceState.MOVING)


def cmd_dev_stop(device, argin):
    _sup(device).stop(argin.value)
    device.set_state(DeviceState.MOVING)


def cmd_running(device, argin):
    running, _ = _sup(device).partition()
    return make_value(TangoTypeTag.DevVarStringArray, running)


def cmd_stopped(device, argin):
    _, stopped = _sup(device).partition()
    return make_value(TangoTypeTag.DevVarStringArray, stopped)


def cmd_update(device, argin):
    """Force a scan now instead of waiting for the period."""
    device.set_state(_sup(device).scan_once())


def build_class() -> DeviceClassDescriptor:
    void, s, sa = TangoTypeTag.DevVoid, TangoTypeTag.DevString, TangoTypeTag.DevVarStringArray
    commands = [
        CommandDescriptor(CommandInfo(
            "DevStart", s, void, "Spawn the named server's process on this host."),
            cmd_dev_start),
        CommandDescriptor(CommandInfo(
            "DevStop", s, void, "Terminate the named server (SIGTERM, kill after 5 s)."),
            cmd_dev_stop),
        CommandDescriptor(CommandInfo(
            "DevGetRunningServers", void, sa, "Supervised servers observed alive."),
            cmd_running),
        CommandDescriptor(CommandInfo(
            "DevGetStopServers", void, sa, "Supervised servers observed stopped or crashed."),
            cmd_stopped),
        CommandDescriptor(CommandInfo(
            "UpdateServersInfo", void, void, "Refresh registration and liveness immediately."),
            cmd_update),
    ]
    properties = [
        DevicePropertyInfo("ScanPeriodMs", "integer", 2000,
                           "Liveness/registration scan period."),
        DevicePropertyInfo("LogDir", "string", "server-logs",
                           "Directory receiving child stdout/stderr, one file per server."),
    ]
    return DeviceClassDescriptor("Starter", commands=commands, device_properties=properties,
                                 init=init_device, delete=delete_device)


def starter_device_name(host: str) -> str:
    return f"tango/admin/{host.lower()}"


def ensure_registered(db: DatabaseClient, host: str) -> None:
    """Self-register the Starter's own server record if absent."""
    server_id = f"Starter/{host}"
    try:
        db.get_server_info(server_id)
    except DevFailed:
        db.add_server(server_id, host, 0, {"Starter": [starter_device_name(host)]})


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="Starter", usage="Starter <hostname> [--port N] [--db host:port]")
    parser.add_argument("instance")
    parser.add_argument("--port", type=int, default=0)
    parser.add_argument("--db", default=None)
    parser.add_argument("--host", default="127.0.0.1")
    args = parser.parse_args(argv)

    endpoint = args.db or db_endpoint_from_env()
    try:
        db = DatabaseClient(endpoint)
        ensure_registered(db, args.instance)
        db.close()
    except DevFailed as exc:
        print(f"Starter/{args.instance}: cannot reach database at {endpoint}: {exc}",
              file=sys.stderr)
        return 3

    descriptor = build_class()
    # the supervisor needs the database endpoint before properties exist
    original_init = descriptor.init

    def init_with_endpoint(device):
        device.store["db_endpoint"] = endpoint
        original_init(device)
    descriptor.init = init_with_endpoint
    return run_server("Starter", args.instance, [descriptor],
                      port=args.port, db=endpoint, host=args.host)


if __name__ == "__main__":
    sys.exit(main())
