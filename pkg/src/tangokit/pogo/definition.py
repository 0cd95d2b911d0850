"""Parsing and validation of device-class definition files (JSON).

Diagnostics carry line numbers; for semantic errors the line is located by
searching the source text for the offending token (best effort, first hit).
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from ..model import (
    AttrElementType,
    AttrFormat,
    AttrWritable,
    AttributeConfig,
    CommandInfo,
    DeviceState,
    TangoTypeTag,
    fail,
)
from ..server.device import PROPERTY_TYPES, DevicePropertyInfo

RESERVED_COMMANDS = ("State", "Status", "Init", "AddPollEntry", "RemPollEntry")
_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


@dataclass
class ClassDefinition:
    class_name: str
    description: str = ""
    states: list = field(default_factory=list)  # (DeviceState, description)
    commands: list = field(default_factory=list)  # CommandInfo
    attributes: list = field(default_factory=list)  # AttributeConfig
    device_properties: list = field(default_factory=list)  # DevicePropertyInfo


def _line_of(text: str, token: str) -> int:
    for lineno, line in enumerate(text.splitlines(), 1):
        if f'"{token}"' in line or token in line.split('"'):
            return lineno
    return 1


class _Ctx:
    def __init__(self, text: str, path: str):
        self.text = text
        self.path = path

    def error(self, reason: str, message: str, token: str = ""):
        lineno = _line_of(self.text, token) if token else 1
        return fail(reason, f"{self.path}:{lineno}: {message}", "parse_definition")


def _ident(ctx: _Ctx, value, what: str) -> str:
    if not isinstance(value, str) or not _IDENT.match(value):
        raise ctx.error("PARSE_ERROR", f"bad {what}: {value!r}", str(value))
    return value


def _type_tag(ctx: _Ctx, name, what: str) -> TangoTypeTag:
    try:
        return TangoTypeTag[name]
    except (KeyError, TypeError):
        raise ctx.error("UNKNOWN_TYPE", f"unknown {what} {name!r}", str(name)) from None


def parse_definition_text(text: str, path: str = "<string>") -> ClassDefinition:
    ctx = _Ctx(text, path)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise fail("PARSE_ERROR", f"{path}:{exc.lineno}: {exc.msg}", "parse_definition") from None
    if not isinstance(doc, dict):
        raise ctx.error("PARSE_ERROR", "definition must be a JSON object")

    class_name = _ident(ctx, doc.get("class_name"), "class name")
    definition = ClassDefinition(class_name, str(doc.get("description", "")))

    for entry in doc.get("states", []):
        name = entry.get("name") if isinstance(entry, dict) else None
        try:
            state = DeviceState[name]
        except (KeyError, TypeError):
            raise ctx.error("UNKNOWN_TYPE", f"unknown device state {name!r}", str(name)) from None
        definition.states.append((state, str(entry.get("description", ""))))

    seen = set()
    for entry in doc.get("commands", []):
        name = _ident(ctx, entry.get("name"), "command name")
        if name.lower() in (r.lower() for r in RESERVED_COMMANDS):
            raise ctx.error("RESERVED_NAME", f"command name {name} is reserved", name)
        if name.lower() in seen:
            raise ctx.error("DUPLICATE_NAME", f"duplicate command {name}", name)
        seen.add(name.lower())
        in_type = _type_tag(ctx, entry.get("in_type", "DevVoid"), "input type")
        out_type = _type_tag(ctx, entry.get("out_type", "DevVoid"), "output type")
        allowed = frozenset()
        if entry.get("allowed_states"):
            states = []
            for sname in entry["allowed_states"]:
                try:
                    states.append(DeviceState[sname])
                except (KeyError, TypeError):
                    raise ctx.error("UNKNOWN_TYPE", f"unknown device state {sname!r}",
                                    str(sname)) from None
            allowed = frozenset(states)
        definition.commands.append(CommandInfo(
            name, in_type, out_type, str(entry.get("description", "")), allowed))

    seen = set()
    for entry in doc.get("attributes", []):
        name = _ident(ctx, entry.get("name"), "attribute name")
        if name.lower() in seen:
            raise ctx.error("DUPLICATE_NAME", f"duplicate attribute {name}", name)
        seen.add(name.lower())
        try:
            writable = AttrWritable[entry.get("writable", "Read")]
            fmt = AttrFormat[entry.get("format", "Scalar")]
        except KeyError as exc:
            raise ctx.error("UNKNOWN_TYPE", f"unknown {exc.args[0]!r}", str(exc.args[0])) from None
        elem_name = entry.get("element_type")
        try:
            elem = AttrElementType[elem_name]
        except (KeyError, TypeError):
            raise ctx.error("UNKNOWN_TYPE", f"unknown element type {elem_name!r}",
                            str(elem_name)) from None
        max_dim_x = entry.get("max_dim_x", 1)
        max_dim_y = entry.get("max_dim_y", 0)
        try:
            cfg = AttributeConfig(name, writable, elem, fmt, max_dim_x, max_dim_y,
                                  str(entry.get("description", "")), str(entry.get("unit", "")))
        except Exception as exc:
            raise ctx.error("PARSE_ERROR", f"bad attribute {name}: {exc}", name) from None
        definition.attributes.append(cfg)

    seen = set()
    for entry in doc.get("device_properties", []):
        name = _ident(ctx, entry.get("name"), "property name")
        if name.lower() in seen:
            raise ctx.error("DUPLICATE_NAME", f"duplicate property {name}", name)
        seen.add(name.lower())
        ptype = entry.get("type", "string")
        if ptype not in PROPERTY_TYPES:
            raise ctx.error("UNKNOWN_TYPE", f"unknown property type {ptype!r}", str(ptype))
        definition.device_properties.append(DevicePropertyInfo(
            name, ptype, entry.get("default"), str(entry.get("description", ""))))

    return definition


def parse_definition(path: str) -> ClassDefinition:
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as exc:
        raise fail("IO_FAILURE", f"cannot read {path}: {exc}", "parse_definition")
    return parse_definition_text(text, path)
