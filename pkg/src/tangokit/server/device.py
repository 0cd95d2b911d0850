"""The device pattern: class descriptors, instances, and dispatch.

A device class is a descriptor binding command/attribute metadata to plain
handler functions; a device instance carries the mutable state.  The
framework serializes all handler execution per device, injects the universal
State/Status/Init commands, and routes polled reads through the cache.
"""
from __future__ import annotations

import dataclasses
import threading
import time
from dataclasses import dataclass, field
from typing import Callable

from ..model import (
    AttrElementType,
    AttrFormat,
    AttrSource,
    AttrWritable,
    AttributeConfig,
    AttributeValue,
    CommandInfo,
    DevFailed,
    DeviceName,
    DeviceState,
    TangoTypeTag,
    TangoValue,
    VOID,
    fail,
    make_value,
)
from ..polling import DevicePoller, Clock, PollEntry, PollKind
from ..wire import AttrWriteValue


@dataclass(frozen=True)
class DevicePropertyInfo:
    name: str
    ptype: str  # string | integer | float | string-list | integer-list | float-list
    default: object = None
    description: str = ""


PROPERTY_TYPES = ("string", "integer", "float", "string-list", "integer-list", "float-list")


@dataclass
class CommandDescriptor:
    info: CommandInfo
    handler: Callable  # (device, TangoValue) -> TangoValue


@dataclass
class AttributeDescriptor:
    config: AttributeConfig
    read: Callable | None = None  # (device) -> raw data
    write: Callable | None = None  # (device, AttributeValue) -> None

    def __post_init__(self):
        w = self.config.writable
        if w in (AttrWritable.Read, AttrWritable.ReadWrite) and self.read is None:
            raise fail("BAD_ATTR_CONFIG", f"{self.config.name}: readable but no read handler",
                       "AttributeDescriptor")
        if w in (AttrWritable.Write, AttrWritable.ReadWrite) and self.write is None:
            raise fail("BAD_ATTR_CONFIG", f"{self.config.name}: writable but no write handler",
                       "AttributeDescriptor")


@dataclass
class DeviceClassDescriptor:
    class_name: str
    commands: list = field(default_factory=list)
    attributes: list = field(default_factory=list)
    device_properties: list = field(default_factory=list)
    init: Callable | None = None  # (device) -> None
    delete: Callable | None = None

    def __post_init__(self):
        seen = set()
        for cd in self.commands:
            key = cd.info.name.lower()
            if key in seen:
                raise fail("DUPLICATE_NAME", f"duplicate command {cd.info.name}", self.class_name)
            seen.add(key)
        seen = set()
        for ad in self.attributes:
            key = ad.config.name.lower()
            if key in seen:
                raise fail("DUPLICATE_NAME", f"duplicate attribute {ad.config.name}", self.class_name)
            seen.add(key)


@dataclass
class AttrData:
    """Dimensioned raw data returned by read handlers (needed for images)."""

    data: tuple
    dim_x: int
    dim_y: int = 0


def _now_ms() -> int:
    return int(time.time() * 1000)


def _check_element(elem: AttrElementType, x, attr: str):
    if elem is AttrElementType.DevString:
        if not isinstance(x, str):
            raise fail("API_IncompatibleAttrDataType",
                       f"{attr}: expected string element, got {type(x).__name__}", attr)
        return x
    if elem is AttrElementType.DevDouble:
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise fail("API_IncompatibleAttrDataType",
                       f"{attr}: expected numeric element, got {type(x).__name__}", attr)
        return float(x)
    # DevShort / DevLong
    if isinstance(x, bool) or not isinstance(x, int):
        raise fail("API_IncompatibleAttrDataType",
                   f"{attr}: expected integer element, got {type(x).__name__}", attr)
    bits = 15 if elem is AttrElementType.DevShort else 31
    if not -(1 << bits) <= x < (1 << bits):
        raise fail("API_IncompatibleAttrDataType", f"{attr}: {x} out of range", attr)
    return x


class DeviceInstance:
    """One controlled object: state, storage, and the serialization lock."""

    def __init__(self, name: DeviceName, descriptor: DeviceClassDescriptor,
                 db=None, clock: Clock | None = None):
        self.name = name
        self.descriptor = descriptor
        self.state = DeviceState.UNKNOWN
        self.status_text = "The device is in UNKNOWN state."
        self.properties: dict[str, list[str]] = {}
        self.store: dict = {}
        self.db = db
        self.lock = threading.RLock()
        self.poller = DevicePoller(self, clock)
        self._attr_overrides: dict[str, dict] = {}
        self._commands: dict[str, CommandDescriptor] = {}
        self._attributes: dict[str, AttributeDescriptor] = {}
        self._command_order: list[CommandDescriptor] = []
        self._build_tables()

    def __str__(self) -> str:
        return str(self.name)

    # -- table construction ----------------------------------------------

    def _build_tables(self) -> None:
        injected = [
            CommandDescriptor(CommandInfo("State", TangoTypeTag.DevVoid, TangoTypeTag.DevState,
                                          "Device state"), _cmd_state),
            CommandDescriptor(CommandInfo("Status", TangoTypeTag.DevVoid, TangoTypeTag.DevString,
                                          "Device status text"), _cmd_status),
            CommandDescriptor(CommandInfo("Init", TangoTypeTag.DevVoid, TangoTypeTag.DevVoid,
                                          "Re-run the device init hook"), _cmd_init),
            CommandDescriptor(CommandInfo("AddPollEntry", TangoTypeTag.DevVarStringArray,
                                          TangoTypeTag.DevVoid,
                                          "Start polling: [command|attribute, name, period_ms]"),
                              _cmd_add_poll),
            CommandDescriptor(CommandInfo("RemPollEntry", TangoTypeTag.DevVarStringArray,
                                          TangoTypeTag.DevVoid,
                                          "Stop polling: [command|attribute, name]"),
                              _cmd_rem_poll),
        ]
        declared = {cd.info.name.lower() for cd in self.descriptor.commands}
        order = [cd for cd in injected if cd.info.name.lower() not in declared]
        order += self.descriptor.commands
        self._command_order = order
        self._commands = {cd.info.name.lower(): cd for cd in order}
        self._attributes = {ad.config.name.lower(): ad for ad in self.descriptor.attributes}

    # -- state ------------------------------------------------------------

    def set_state(self, state: DeviceState) -> None:
        self.state = DeviceState(state)
        self.status_text = f"The device is in {self.state.name} state."

    def set_status(self, text: str) -> None:
        self.status_text = text

    # -- properties -------------------------------------------------------

    def load_properties(self) -> None:
        """Fetch this device's properties from the database, falling back to
        declared defaults."""
        names = [p.name for p in self.descriptor.device_properties]
        fetched: dict[str, list[str]] = {}
        if self.db is not None:
            fetched = self.db.get_device_property(self.name, names or None)
        merged: dict[str, list[str]] = {}
        for p in self.descriptor.device_properties:
            values = fetched.get(p.name.lower(), [])
            if not values and p.default is not None:
                default = p.default if isinstance(p.default, (list, tuple)) else [p.default]
                values = [str(x) for x in default]
            merged[p.name.lower()] = list(values)
        # keep any extra fetched properties visible too
        for k, v in fetched.items():
            merged.setdefault(k, list(v))
        self.properties = merged

    def get_property(self, name: str):
        """Property values parsed per the declared logical type."""
        info = next((p for p in self.descriptor.device_properties
                     if p.name.lower() == name.lower()), None)
        raw = self.properties.get(name.lower(), [])
        if info is None:
            return list(raw)
        try:
            if info.ptype == "string":
                return raw[0] if raw else ""
            if info.ptype == "integer":
                return int(raw[0]) if raw else 0
            if info.ptype == "float":
                return float(raw[0]) if raw else 0.0
            if info.ptype == "integer-list":
                return [int(x) for x in raw]
            if info.ptype == "float-list":
                return [float(x) for x in raw]
        except ValueError as exc:
            raise fail("BAD_PROPERTY_VALUE", f"{name}: {exc}", str(self.name)) from None
        return list(raw)

    # -- lifecycle --------------------------------------------------------

    def initialize(self) -> None:
        """Run the init sequence; a failing hook leaves the device in FAULT
        but still serving State/Status."""
        self.set_state(DeviceState.INIT)
        try:
            self.load_properties()
            if self.descriptor.init is not None:
                self.descriptor.init(self)
            if self.state in (DeviceState.INIT, DeviceState.UNKNOWN):
                self.set_state(DeviceState.ON)
            self._load_poll_config()
        except Exception as exc:
            self.set_state(DeviceState.FAULT)
            self.set_status(f"Init failed: {exc}")

    def delete(self) -> None:
        self.poller.stop()
        if self.descriptor.delete is not None:
            try:
                self.descriptor.delete(self)
            except Exception:
                pass

    def _load_poll_config(self) -> None:
        for prop, kind in (("polled_cmd", PollKind.Command), ("polled_attr", PollKind.Attribute)):
            flat = self.properties.get(prop, [])
            for i in range(0, len(flat) - 1, 2):
                try:
                    self.poller.add_entry(PollEntry(kind, flat[i], int(flat[i + 1])))
                except (ValueError, DevFailed):
                    pass  # bad persisted entry must not kill init

    # -- poll plumbing (called by the poller thread) ----------------------

    def poll_execute_command(self, name: str) -> TangoValue:
        cd = self._commands.get(name.lower())
        if cd is None:
            raise fail("API_CommandNotFound", f"command {name} not found", str(self.name))
        return self._execute(cd, VOID)

    def poll_read_attribute(self, name: str) -> AttributeValue:
        ad = self._attributes.get(name.lower())
        if ad is None:
            raise fail("API_AttrNotFound", f"attribute {name} not found", str(self.name))
        return self._read_hardware(ad)

    def _poll_persist(self) -> None:
        if self.db is None:
            return
        cmds, attrs = [], []
        for e in self.poller.entries():
            (cmds if e.kind is PollKind.Command else attrs).extend([e.name, str(e.period_ms)])
        self.db.put_device_property(self.name, {"polled_cmd": cmds, "polled_attr": attrs})

    # -- dispatch ---------------------------------------------------------

    def _execute(self, cd: CommandDescriptor, argin: TangoValue) -> TangoValue:
        with self.lock:
            try:
                out = cd.handler(self, argin)
            except DevFailed:
                raise
            except Exception as exc:
                raise fail("API_CommandFailed", f"{type(exc).__name__}: {exc}", cd.info.name)
        if out is None:
            out = VOID
        if not isinstance(out, TangoValue) or out.tag != cd.info.out_type:
            raise fail("API_BadCmdResultType",
                       f"{cd.info.name} produced {getattr(out, 'tag', type(out).__name__)}, "
                       f"declared {cd.info.out_type.name}", cd.info.name)
        return out

    def dispatch_command(self, cmd_name: str, argin: TangoValue) -> TangoValue:
        cd = self._commands.get(cmd_name.lower())
        if cd is None:
            raise fail("API_CommandNotFound",
                       f"command {cmd_name} not found on {self.name}", "dispatch_command")
        if argin.tag != cd.info.in_type:
            raise fail("API_IncompatibleCmdArgumentType",
                       f"{cd.info.name} takes {cd.info.in_type.name}, got {argin.tag.name}",
                       cd.info.name)
        if cd.info.allowed_states and self.state not in cd.info.allowed_states:
            raise fail("API_CommandNotAllowed",
                       f"{cd.info.name} not allowed when the device is in {self.state.name} state",
                       cd.info.name)
        if cd.info.in_type is TangoTypeTag.DevVoid and \
                self.poller.get_entry(PollKind.Command, cd.info.name) is not None:
            sample = self.poller.cache_read(PollKind.Command, cd.info.name)
            if sample.is_error:
                raise DevFailed(*sample.value)
            return sample.value
        return self._execute(cd, argin)

    def _read_hardware(self, ad: AttributeDescriptor) -> AttributeValue:
        cfg = ad.config
        if ad.read is None:
            raise fail("API_AttrNotReadable", f"attribute {cfg.name} is write-only", cfg.name)
        with self.lock:
            try:
                raw = ad.read(self)
            except DevFailed:
                raise
            except Exception as exc:
                raise fail("API_AttributeFailed", f"{type(exc).__name__}: {exc}", cfg.name)
        return self._normalize_reading(cfg, raw)

    def _normalize_reading(self, cfg: AttributeConfig, raw) -> AttributeValue:
        if isinstance(raw, AttributeValue):
            return raw
        if isinstance(raw, AttrData):
            data, dim_x, dim_y = raw.data, raw.dim_x, raw.dim_y
        elif cfg.format is AttrFormat.Scalar:
            data, dim_x, dim_y = (raw,), 1, 0
        elif cfg.format is AttrFormat.Spectrum:
            data = tuple(raw)
            dim_x, dim_y = len(data), 0
        else:  # Image given as rows
            rows = [tuple(row) for row in raw]
            widths = {len(r) for r in rows}
            if len(widths) > 1:
                raise fail("API_AttributeFailed", f"{cfg.name}: ragged image rows", cfg.name)
            dim_y = len(rows)
            dim_x = widths.pop() if rows else 0
            data = tuple(x for row in rows for x in row)
        if cfg.format is AttrFormat.Scalar and (dim_x, dim_y) != (1, 0):
            raise fail("API_AttributeFailed", f"{cfg.name}: scalar read produced {dim_x}x{dim_y}",
                       cfg.name)
        if dim_x > cfg.max_dim_x or (cfg.format is AttrFormat.Image and dim_y > cfg.max_dim_y):
            raise fail("API_AttributeFailed",
                       f"{cfg.name}: dims {dim_x}x{dim_y} exceed {cfg.max_dim_x}x{cfg.max_dim_y}",
                       cfg.name)
        data = tuple(_check_element(cfg.element_type, x, cfg.name) for x in data)
        return AttributeValue(cfg.name, cfg.element_type, dim_x, dim_y, data,
                              _now_ms(), AttrSource.Hardware)

    def dispatch_read_attributes(self, names) -> list:
        """Per-attribute results aligned with the request: AttributeValue on
        success, a DevError tuple on failure."""
        results = []
        for name in names:
            try:
                ad = self._attributes.get(name.lower())
                if ad is None:
                    raise fail("API_AttrNotFound",
                               f"attribute {name} not found on {self.name}", "read_attributes")
                if self.poller.get_entry(PollKind.Attribute, ad.config.name) is not None:
                    sample = self.poller.cache_read(PollKind.Attribute, ad.config.name)
                    if sample.is_error:
                        raise DevFailed(*sample.value)
                    results.append(dataclasses.replace(sample.value, source=AttrSource.Cache))
                    continue
                results.append(self._read_hardware(ad))
            except DevFailed as exc:
                results.append(exc.errors)
        return results

    def dispatch_write_attributes(self, writes) -> None:
        """Validate every write first, then invoke the handlers."""
        checked = []
        for w in writes:
            ad = self._attributes.get(w.name.lower())
            if ad is None:
                raise fail("API_AttrNotFound", f"attribute {w.name} not found on {self.name}",
                           "write_attributes")
            cfg = ad.config
            if cfg.writable not in (AttrWritable.Write, AttrWritable.ReadWrite):
                raise fail("API_AttrNotWritable", f"attribute {cfg.name} is not writable", cfg.name)
            if w.element_type != cfg.element_type:
                raise fail("API_IncompatibleAttrDataType",
                           f"{cfg.name} holds {cfg.element_type.name}, got {w.element_type.name}",
                           cfg.name)
            if cfg.format is AttrFormat.Scalar and (w.dim_x, w.dim_y) != (1, 0):
                raise fail("API_IncompatibleAttrDataType",
                           f"{cfg.name}: scalar write must be 1x0", cfg.name)
            if w.dim_x > cfg.max_dim_x or (cfg.format is AttrFormat.Image and w.dim_y > cfg.max_dim_y):
                raise fail("API_IncompatibleAttrDataType",
                           f"{cfg.name}: dims {w.dim_x}x{w.dim_y} exceed "
                           f"{cfg.max_dim_x}x{cfg.max_dim_y}", cfg.name)
            if cfg.format is AttrFormat.Spectrum and w.dim_y != 0:
                raise fail("API_IncompatibleAttrDataType",
                           f"{cfg.name}: spectrum write must have dim_y=0", cfg.name)
            data = tuple(_check_element(cfg.element_type, x, cfg.name) for x in w.data)
            checked.append((ad, AttributeValue(cfg.name, cfg.element_type, w.dim_x, w.dim_y,
                                               data, _now_ms(), AttrSource.Hardware)))
        for ad, av in checked:
            with self.lock:
                try:
                    ad.write(self, av)
                except DevFailed:
                    raise
                except Exception as exc:
                    raise fail("API_AttributeFailed", f"{type(exc).__name__}: {exc}", ad.config.name)

    # -- description ------------------------------------------------------

    def command_list(self) -> list[CommandInfo]:
        return [cd.info for cd in self._command_order]

    def command_query(self, name: str) -> CommandInfo:
        cd = self._commands.get(name.lower())
        if cd is None:
            raise fail("API_CommandNotFound", f"command {name} not found on {self.name}",
                       "command_query")
        return cd.info

    def attribute_configs(self, names=None) -> list[AttributeConfig]:
        if not names:
            return [self._effective_config(ad) for ad in self.descriptor.attributes]
        out = []
        for name in names:
            ad = self._attributes.get(name.lower())
            if ad is None:
                raise fail("API_AttrNotFound", f"attribute {name} not found on {self.name}",
                           "get_attribute_config")
            out.append(self._effective_config(ad))
        return out

    def _effective_config(self, ad: AttributeDescriptor) -> AttributeConfig:
        over = self._attr_overrides.get(ad.config.name.lower())
        return dataclasses.replace(ad.config, **over) if over else ad.config

    def set_attribute_config(self, configs) -> None:
        """Only the mutable descriptor parts (description, unit) are applied."""
        for cfg in configs:
            if cfg.name.lower() not in self._attributes:
                raise fail("API_AttrNotFound", f"attribute {cfg.name} not found on {self.name}",
                           "set_attribute_config")
            self._attr_overrides[cfg.name.lower()] = {
                "description": cfg.description, "unit": cfg.unit,
            }


# -- injected command handlers -------------------------------------------

def _cmd_state(device: DeviceInstance, _argin: TangoValue) -> TangoValue:
    return make_value(TangoTypeTag.DevState, device.state)


def _cmd_status(device: DeviceInstance, _argin: TangoValue) -> TangoValue:
    return make_value(TangoTypeTag.DevString, device.status_text)


def _cmd_init(device: DeviceInstance, _argin: TangoValue) -> TangoValue:
    device.initialize()
    return VOID


def _parse_poll_kind(text: str) -> PollKind:
    try:
        return PollKind(text.lower())
    except ValueError:
        raise fail("MALFORMED_POLL_ENTRY", f"poll kind must be command|attribute, got {text!r}",
                   "AddPollEntry") from None


def _cmd_add_poll(device: DeviceInstance, argin: TangoValue) -> TangoValue:
    args = argin.value
    if len(args) != 3:
        raise fail("MALFORMED_POLL_ENTRY", "expected [kind, name, period_ms]", "AddPollEntry")
    kind = _parse_poll_kind(args[0])
    name = args[1]
    try:
        period = int(args[2])
    except ValueError:
        raise fail("MALFORMED_POLL_ENTRY", f"bad period {args[2]!r}", "AddPollEntry") from None
    if kind is PollKind.Command:
        info = device.command_query(name)
        if info.in_type is not TangoTypeTag.DevVoid:
            raise fail("POLL_NOT_VOID", f"command {name} takes {info.in_type.name}; only "
                       "void-input commands can be polled", "AddPollEntry")
        name = info.name
    else:
        name = device.attribute_configs([name])[0].name
    device.poller.add_entry(PollEntry(kind, name, period))
    device.poller.start()
    device._poll_persist()
    return VOID


def _cmd_rem_poll(device: DeviceInstance, argin: TangoValue) -> TangoValue:
    args = argin.value
    if len(args) != 2:
        raise fail("MALFORMED_POLL_ENTRY", "expected [kind, name]", "RemPollEntry")
    kind = _parse_poll_kind(args[0])
    device.poller.remove_entry(kind, args[1])
    device._poll_persist()
    return VOID


def dispatch_command(device: DeviceInstance, cmd_name: str, argin: TangoValue) -> TangoValue:
    return device.dispatch_command(cmd_name, argin)


def dispatch_read_attributes(device: DeviceInstance, names):
    return device.dispatch_read_attributes(names)


def dispatch_write_attributes(device: DeviceInstance, writes):
    return device.dispatch_write_attributes(writes)


def describe(device: DeviceInstance):
    return device.command_list(), device.attribute_configs()
