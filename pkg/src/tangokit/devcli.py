"""Tiny diagnostic CLI: run one command on one device.

``devcli <device> <command> [json-value]`` — the optional argument and the
printed result use the gateway's canonical JSON value mapping.  The device is
resolved through the database (TNG_HOST or --db) unless given as
``host:port/domain/family/member``.
"""
from __future__ import annotations

import argparse
import json
import sys

from .client import DeviceProxy
from .jsonmap import json_to_value, value_to_json
from .model import DevFailed, TangoTypeTag, VOID


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="devcli", description=__doc__.splitlines()[0])
    parser.add_argument("device", help="domain/family/member or host:port/domain/family/member")
    parser.add_argument("command")
    parser.add_argument("value", nargs="?", default=None,
                        help='JSON value, e.g. \'{"type": "DevLong", "value": 7}\'')
    parser.add_argument("--db", default=None, help="database endpoint host:port")
    parser.add_argument("--timeout", type=float, default=10.0)
    args = parser.parse_args(argv)

    if args.value is None:
        argin = VOID
    else:
        try:
            argin = json_to_value(json.loads(args.value))
        except ValueError as exc:
            print(f"devcli: argument is not JSON: {exc}", file=sys.stderr)
            return 1
        except DevFailed as exc:
            print(f"devcli: {exc.reason}: {exc.errors[0].description}", file=sys.stderr)
            return 1

    try:
        proxy = DeviceProxy(args.device, db=args.db, timeout=args.timeout)
        try:
            result = proxy.command_inout(args.command, argin)
        finally:
            proxy.close()
    except DevFailed as exc:
        for err in exc.errors:
            print(f"devcli: {err.reason}: {err.description}", file=sys.stderr)
        return 1
    json.dump(value_to_json(result), sys.stdout)
    print()
    return 0


if __name__ == "__main__":
    sys.exit(main())
