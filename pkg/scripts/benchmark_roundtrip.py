#!/usr/bin/env python3
"""Measure synchronous round-trip throughput and latency over loopback.

Runs an in-process TypesEcho server and times command_inout for a scalar
and for growing array payloads, printing rate and latency percentiles.

Usage: python3 scripts/benchmark_roundtrip.py [--calls 2000]
"""
import argparse
import statistics
import sys
import time

from tangokit.client import DeviceProxy
from tangokit.devices.typesecho.types_echo_device import build_class
from tangokit.model import TangoTypeTag, make_value, parse_device_name
from tangokit.server import DeviceInstance, DeviceRegistry, WireServer


def bench(proxy, cmd, arg, calls):
    for _ in range(min(200, calls)):  # warmup
        proxy.command_inout(cmd, arg)
    latencies = []
    started = time.monotonic()
    for _ in range(calls):
        t0 = time.monotonic()
        proxy.command_inout(cmd, arg)
        latencies.append(time.monotonic() - t0)
    elapsed = time.monotonic() - started
    latencies.sort()
    return (calls / elapsed,
            statistics.median(latencies) * 1e3,
            latencies[int(len(latencies) * 0.99)] * 1e3)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--calls", type=int, default=2000)
    args = parser.parse_args()

    device = DeviceInstance(parse_device_name("bench/echo/1"), build_class())
    device.initialize()
    registry = DeviceRegistry()
    registry.add(device)
    server = WireServer("127.0.0.1", 0, registry)
    server.serve_forever_in_thread()
    proxy = DeviceProxy(f"{server.endpoint}/bench/echo/1")

    cases = [
        ("EchoLong scalar", "EchoLong", make_value(TangoTypeTag.DevLong, 42)),
        ("EchoDoubleArray[10]", "EchoDoubleArray",
         make_value(TangoTypeTag.DevVarDoubleArray, [1.5] * 10)),
        ("EchoDoubleArray[1k]", "EchoDoubleArray",
         make_value(TangoTypeTag.DevVarDoubleArray, [1.5] * 1000)),
        ("EchoDoubleArray[100k]", "EchoDoubleArray",
         make_value(TangoTypeTag.DevVarDoubleArray, [1.5] * 100_000)),
    ]
    print(f"{args.calls} calls per case, single client, loopback\n")
    print(f"{'payload':<22} {'calls/s':>10} {'median ms':>10} {'p99 ms':>10}")
    for label, cmd, arg in cases:
        rate, med, p99 = bench(proxy, cmd, arg, args.calls)
        print(f"{label:<22} {rate:>10.0f} {med:>10.3f} {p99:>10.3f}")

    proxy.close()
    server.shutdown()
    server.server_close()
    device.delete()
    return 0


if __name__ == "__main__":
    sys.exit(main())
