"""Diagnostic device that counts every handler execution.

Used to observe caching and delivery semantics from the outside: polled
entities must be served from the ring buffer (bounding the execution counters)
and each client submission must bump a counter at most once.
"""
from __future__ import annotations

import sys

from ..model import (
    AttrElementType,
    AttrFormat,
    AttrWritable,
    AttributeConfig,
    CommandInfo,
    TangoTypeTag,
    make_value,
)
from ..server import (
    AttributeDescriptor,
    CommandDescriptor,
    DeviceClassDescriptor,
    run_server_main,
)


def _bump(device, key: str) -> int:
    device.store[key] = device.store.get(key, 0) + 1
    return device.store[key]


def init_device(device):
    device.store.setdefault("sample_count", 0)
    device.store.setdefault("bump_count", 0)
    device.store.setdefault("read_count", 0)


def cmd_sample(device, argin):
    return make_value(TangoTypeTag.DevLong, _bump(device, "sample_count"))


def cmd_bump(device, argin):
    return make_value(TangoTypeTag.DevLong, _bump(device, "bump_count"))


def cmd_get_sample_count(device, argin):
    return make_value(TangoTypeTag.DevLong, device.store.get("sample_count", 0))


def cmd_get_bump_count(device, argin):
    return make_value(TangoTypeTag.DevLong, device.store.get("bump_count", 0))


def cmd_get_read_count(device, argin):
    return make_value(TangoTypeTag.DevLong, device.store.get("read_count", 0))


def read_reading(device):
    return float(_bump(device, "read_count"))


def build_class() -> DeviceClassDescriptor:
    void, long_ = TangoTypeTag.DevVoid, TangoTypeTag.DevLong
    commands = [
        CommandDescriptor(CommandInfo("Sample", void, long_,
                                      "Increment and return the sample counter."), cmd_sample),
        CommandDescriptor(CommandInfo("Bump", void, long_,
                                      "Increment and return the bump counter."), cmd_bump),
        CommandDescriptor(CommandInfo("GetSampleCount", void, long_,
                                      "Sample handler executions so far."), cmd_get_sample_count),
        CommandDescriptor(CommandInfo("GetBumpCount", void, long_,
                                      "Bump handler executions so far."), cmd_get_bump_count),
        CommandDescriptor(CommandInfo("GetReadCount", void, long_,
                                      "reading handler executions so far."), cmd_get_read_count),
    ]
    attributes = [
        AttributeDescriptor(
            AttributeConfig("reading", AttrWritable.Read, AttrElementType.DevDouble,
                            AttrFormat.Scalar, 1, 0,
                            "Monotone counter of its own read-handler executions."),
            read=read_reading),
    ]
    return DeviceClassDescriptor("PollProbe", commands=commands, attributes=attributes,
                                 init=init_device)


def main(argv=None) -> int:
    return run_server_main("PollProbe", [build_class()], argv)


if __name__ == "__main__":
    sys.exit(main())
