#!/usr/bin/env python3
"""Bring up a complete local control system and keep it running.

Starts the configuration database, a supervisor daemon, a TypesEcho and a
SimPLC device server (via the supervisor, so the fleet tools see them) and
the HTTP gateway, then prints how to poke at everything.  Ctrl-C tears the
whole stack down.

Usage: python3 scripts/demo_stack.py [--gateway-port 8080] [--data DIR]
"""
import argparse
import atexit
import pathlib
import signal
import socket
import subprocess
import sys
import tempfile
import time

from tangokit.client import DatabaseClient, DeviceProxy
from tangokit.model import DevFailed, TangoTypeTag, make_value

HOST = socket.gethostname().split(".")[0].lower()


def free_port() -> int:
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


def spawn(args):
    proc = subprocess.Popen(args)
    atexit.register(lambda: (proc.poll() is None and proc.terminate()))
    return proc


def wait_tcp(endpoint: str, timeout: float = 10.0) -> None:
    host, _, port = endpoint.rpartition(":")
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        try:
            socket.create_connection((host, int(port)), timeout=0.5).close()
            return
        except OSError:
            time.sleep(0.1)
    sys.exit(f"nothing listening on {endpoint} after {timeout}s")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--gateway-port", type=int, default=8080)
    parser.add_argument("--data", default=None,
                        help="directory for the database file (default: temp)")
    args = parser.parse_args()

    data = args.data or tempfile.mkdtemp(prefix="tng-demo-")
    db_port = free_port()
    db_endpoint = f"127.0.0.1:{db_port}"

    spawn(["tng-db", "--port", str(db_port), "--file", f"{data}/db.txt"])
    wait_tcp(db_endpoint)
    db = DatabaseClient(db_endpoint)

    db.add_server("TypesEcho/demo", HOST, 1, {"TypesEcho": ["demo/echo/1"]})
    db.add_server("SimPLC/demo", HOST, 2, {"SimPLC": ["demo/plc/1"]})
    db.put_device_property("demo/plc/1", {
        "InputAddresses": ["I0.0", "I0.1", "I0.2"],
        "OutputAddresses": ["Q0.0", "Q0.1"],
    })

    spawn(["Starter", HOST, "--db", db_endpoint])
    admin = f"tango/admin/{HOST}"
    deadline = time.monotonic() + 10
    while True:
        try:
            if db.import_device(admin)["exported"]:
                break
        except DevFailed:
            pass  # the supervisor self-registers on startup
        if time.monotonic() > deadline:
            sys.exit("supervisor never exported itself")
        time.sleep(0.1)

    starter = DeviceProxy(admin, db=db_endpoint)
    for sid in ("TypesEcho/demo", "SimPLC/demo"):
        starter.command_inout("DevStart", make_value(TangoTypeTag.DevString, sid))
    starter.close()

    gateway_cmd = ["gateway", "--listen", f"127.0.0.1:{args.gateway_port}",
                   "--db", db_endpoint]
    console = pathlib.Path(__file__).resolve().parent.parent / "frontend" / "dist"
    if console.is_dir():
        gateway_cmd += ["--static", str(console)]
    spawn(gateway_cmd)
    wait_tcp(f"127.0.0.1:{args.gateway_port}")

    base = f"http://127.0.0.1:{args.gateway_port}/api/v1"
    console_line = (f"  web console     http://127.0.0.1:{args.gateway_port}/"
                    if console.is_dir()
                    else "  web console     (not built — run `npm run build` in frontend/)")
    print(f"""
demo stack is up (database file: {data}/db.txt)

{console_line}
  database        {db_endpoint}           (export TNG_HOST={db_endpoint})
  gateway         {base}
  fleet status    astor status --db {db_endpoint}
  one-shot call   devcli demo/echo/1 EchoLong '{{"type": "DevLong", "value": 7}}' --db {db_endpoint}
  browse          curl {base}/db/browse
  run a command   curl -X POST {base}/devices/demo/plc/1/commands/ReadInputs

Ctrl-C stops everything.""")
    try:
        signal.pause()
    except KeyboardInterrupt:
        pass
    finally:
        db.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
