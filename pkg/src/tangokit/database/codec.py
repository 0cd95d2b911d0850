"""String-array marshalling for the database device's command payloads.

Shared by the service handlers and the client wrapper so both sides agree on
the layouts.  Property sets travel as a counted flat list:
[n_props, (name, n_values, values...)*].
"""
from __future__ import annotations

from ..model import fail


def pack_properties(entries: dict[str, list[str]]) -> list[str]:
    out = [str(len(entries))]
    for name, values in entries.items():
        out.append(name)
        out.append(str(len(values)))
        out.extend(str(v) for v in values)
    return out


def unpack_properties(args, start: int = 0) -> dict[str, list[str]]:
    def bad(msg):
        return fail("MALFORMED_ARGS", f"bad property list: {msg}", "database")

    try:
        n = int(args[start])
    except (ValueError, IndexError):
        raise bad("missing property count") from None
    pos = start + 1
    out: dict[str, list[str]] = {}
    for _ in range(n):
        if pos + 1 >= len(args) + 1:
            raise bad("truncated")
        try:
            name = args[pos]
            count = int(args[pos + 1])
        except (ValueError, IndexError):
            raise bad("bad value count") from None
        values = list(args[pos + 2:pos + 2 + count])
        if len(values) != count:
            raise bad(f"{name} claims {count} values, has {len(values)}")
        out[name] = values
        pos += 2 + count
    return out


def pack_bindings(bindings: dict[str, list[str]]) -> list[str]:
    out = []
    for class_name, devices in bindings.items():
        out.append(class_name)
        out.append(str(len(devices)))
        out.extend(str(d) for d in devices)
    return out


def unpack_bindings(args, start: int = 0) -> dict[str, list[str]]:
    pos = start
    out: dict[str, list[str]] = {}
    while pos < len(args):
        if pos + 1 >= len(args):
            raise fail("MALFORMED_ARGS", "truncated class binding", "database")
        class_name = args[pos]
        try:
            count = int(args[pos + 1])
        except ValueError:
            raise fail("MALFORMED_ARGS", f"bad device count {args[pos + 1]!r}", "database") from None
        devices = list(args[pos + 2:pos + 2 + count])
        if len(devices) != count:
            raise fail("MALFORMED_ARGS", f"class {class_name} claims {count} devices", "database")
        out[class_name] = devices
        pos += 2 + count
    return out
