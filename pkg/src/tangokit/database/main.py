"""Process entry for the database service: ``tng-db [--port N] [--file F]``."""
from __future__ import annotations

import argparse
import signal
import sys
import threading

from ..model import DevFailed
from .service import DatabaseServer


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="tng-db", description="naming/configuration database")
    parser.add_argument("--port", type=int, default=11000)
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--file", default="tangokit-db.txt", help="persistence file")
    args = parser.parse_args(argv)

    try:
        server = DatabaseServer(args.file, args.port, args.host)
    except DevFailed as exc:
        print(f"tng-db: {exc}", file=sys.stderr)
        return 1
    server.start()
    print(f"tng-db: serving sys/database/2 on {server.endpoint}, data in {args.file}", flush=True)

    done = threading.Event()
    for sig in (signal.SIGINT, signal.SIGTERM):
        signal.signal(sig, lambda *_: done.set())
    done.wait()
    server.stop()
    return 0


if __name__ == "__main__":
    sys.exit(main())
