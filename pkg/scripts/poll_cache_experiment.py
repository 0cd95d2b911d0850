#!/usr/bin/env python3
"""Show how the polling cache decouples client load from hardware load.

Polls a counting command at a fixed period, hammers it from N concurrent
clients for a few seconds, and reports how many times the handler actually
ran versus how many calls the clients made.

Usage: python3 scripts/poll_cache_experiment.py [--clients 50] [--seconds 3]
                                                [--period-ms 100]
"""
import argparse
import sys
import threading
import time

from tangokit.client import DeviceProxy
from tangokit.devices.pollprobe import build_class
from tangokit.model import TangoTypeTag, make_value, parse_device_name
from tangokit.server import DeviceInstance, DeviceRegistry, WireServer


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--clients", type=int, default=50)
    parser.add_argument("--seconds", type=float, default=3.0)
    parser.add_argument("--period-ms", type=int, default=100)
    args = parser.parse_args()

    device = DeviceInstance(parse_device_name("lab/probe/1"), build_class())
    device.initialize()
    device.poller.start()
    registry = DeviceRegistry()
    registry.add(device)
    server = WireServer("127.0.0.1", 0, registry)
    server.serve_forever_in_thread()

    control = DeviceProxy(f"{server.endpoint}/lab/probe/1")
    control.command_inout("AddPollEntry", make_value(
        TangoTypeTag.DevVarStringArray, ["command", "Sample", str(args.period_ms)]))
    time.sleep(args.period_ms / 1000 * 1.5)  # let the first sample land

    before = control.command_inout("GetSampleCount").value
    calls = [0] * args.clients
    stop = time.monotonic() + args.seconds

    def hammer(i):
        proxy = DeviceProxy(f"{server.endpoint}/lab/probe/1")
        while time.monotonic() < stop:
            proxy.command_inout("Sample")
            calls[i] += 1
        proxy.close()

    threads = [threading.Thread(target=hammer, args=(i,)) for i in range(args.clients)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()

    executions = control.command_inout("GetSampleCount").value - before
    total = sum(calls)
    print(f"{args.clients} clients x {args.seconds:.0f}s, "
          f"command polled every {args.period_ms} ms")
    print(f"  client calls answered : {total}")
    print(f"  handler executions    : {executions}")
    print(f"  coalescing factor     : {total / max(executions, 1):.0f}x")

    control.close()
    server.shutdown()
    server.server_close()
    device.delete()
    return 0


if __name__ == "__main__":
    sys.exit(main())
