"""Helpers for integration tests that drive real OS processes."""
from __future__ import annotations

import os
import signal
import socket
import subprocess
import time

from tangokit.client import DatabaseClient


def free_port() -> int:
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


def wait_line(proc: subprocess.Popen, needle: str, timeout: float = 10.0) -> str:
    """Block until the process prints a line containing needle."""
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        line = proc.stdout.readline()
        if not line:
            raise AssertionError(
                f"process exited (rc={proc.poll()}) before printing {needle!r}")
        if needle in line:
            return line
    raise AssertionError(f"timed out waiting for {needle!r}")


def spawn(args, env_extra=None, cwd=None) -> subprocess.Popen:
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.Popen(args, stdout=subprocess.PIPE, stderr=subprocess.STDOUT,
                            text=True, env=env, cwd=cwd)


def terminate(proc: subprocess.Popen, timeout: float = 5.0) -> int:
    if proc.poll() is None:
        proc.send_signal(signal.SIGTERM)
        try:
            proc.wait(timeout=timeout)
        except subprocess.TimeoutExpired:
            proc.kill()
            proc.wait()
    if proc.stdout:
        proc.stdout.close()
    return proc.returncode


class DbProcess:
    """A real tng-db subprocess plus a client bound to it."""

    def __init__(self, tmp_path, port: int | None = None):
        self.port = port if port is not None else free_port()
        self.endpoint = f"127.0.0.1:{self.port}"
        self.file = str(tmp_path / "db.txt")
        self.proc = spawn(["tng-db", "--port", str(self.port), "--file", self.file])
        wait_line(self.proc, "serving sys/database/2")
        self.client = DatabaseClient(self.endpoint)

    def stop(self):
        self.client.close()
        terminate(self.proc)


def wait_exported(client: DatabaseClient, device: str, timeout: float = 10.0) -> str:
    """Endpoint of the device once its server has exported it."""
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        rec = client.import_device(device)
        if rec["exported"]:
            return rec["endpoint"]
        time.sleep(0.05)
    raise AssertionError(f"{device} never exported")
