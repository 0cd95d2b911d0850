"""Skeleton generation and marker-based regeneration.

Generated sources are runnable no-op device servers immediately; user code
lives only between PROTECTED-REGION marker lines, which regeneration splices
back.  Regions whose owning entity disappeared are quarantined in
orphaned_regions.txt, never dropped.
"""
from __future__ import annotations

import html
import os
import re

from ..model import (
    AttrElementType,
    AttrFormat,
    AttrWritable,
    TangoTypeTag,
    fail,
)
from .definition import ClassDefinition

_MARKER = re.compile(r"^\s*#\s*PROTECTED-REGION\s+(\S+)\s+(BEGIN|END)\s*$")
ORPHAN_FILE = "orphaned_regions.txt"


def snake(name: str) -> str:
    out = re.sub(r"(?<=[a-z0-9])(?=[A-Z])", "_", name)
    out = re.sub(r"(?<=[A-Z])(?=[A-Z][a-z])", "_", out)
    return out.lower()


# ---------------------------------------------------------------------------
# Region extraction / splicing

def extract_regions(text: str, path: str = "<string>") -> dict[str, str]:
    """id -> verbatim content between its markers."""
    regions: dict[str, str] = {}
    current: str | None = None
    buf: list[str] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        m = _MARKER.match(line)
        if not m:
            if current is not None:
                buf.append(line)
            continue
        rid, kind = m.group(1), m.group(2)
        if kind == "BEGIN":
            if current is not None:
                raise fail("MARKER_CORRUPT", f"{path}:{lineno}: BEGIN inside region {current}",
                           "extract_regions")
            if rid in regions:
                raise fail("MARKER_CORRUPT", f"{path}:{lineno}: duplicate region id {rid}",
                           "extract_regions")
            current, buf = rid, []
        else:
            if current != rid:
                raise fail("MARKER_CORRUPT",
                           f"{path}:{lineno}: END {rid} does not match open region {current}",
                           "extract_regions")
            regions[rid] = "\n".join(buf)
            current = None
    if current is not None:
        raise fail("MARKER_CORRUPT", f"{path}: region {current} never closed", "extract_regions")
    return regions


class _Emitter:
    def __init__(self, regions: dict[str, str]):
        self.lines: list[str] = []
        self.regions = regions
        self.used: set[str] = set()

    def line(self, text: str = "") -> None:
        self.lines.append(text)

    def region(self, rid: str, indent: str = "    ") -> None:
        self.used.add(rid)
        self.line(f"{indent}# PROTECTED-REGION {rid} BEGIN")
        content = self.regions.get(rid, "")
        if content:
            self.lines.extend(content.split("\n"))
        self.line(f"{indent}# PROTECTED-REGION {rid} END")

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


# ---------------------------------------------------------------------------
# Code templates

_SCALAR_DEFAULT = {
    AttrElementType.DevShort: "0",
    AttrElementType.DevLong: "0",
    AttrElementType.DevDouble: "0.0",
    AttrElementType.DevString: '""',
}


def _render_states(e: _Emitter, definition: ClassDefinition) -> None:
    if not definition.states:
        return
    e.line("STATE_NOTES = {")
    for state, note in definition.states:
        e.line(f"    DeviceState.{state.name}: {note!r},")
    e.line("}")
    e.line()
    e.line()


def _render_command(e: _Emitter, info) -> None:
    fn = f"cmd_{snake(info.name)}"
    e.line(f"def {fn}(device, argin):")
    doc = info.description or f"{info.name} command handler."
    e.line(f'    """{doc}"""')
    e.line(f"    result = default_value(TangoTypeTag.{info.out_type.name})")
    e.region(f"cmd.{info.name}.body")
    e.line("    return result")
    e.line()
    e.line()


def _render_attr_handlers(e: _Emitter, cfg) -> None:
    name = cfg.name
    if cfg.writable in (AttrWritable.Read, AttrWritable.ReadWrite):
        e.line(f"def read_{snake(name)}(device):")
        e.line(f'    """Read {name}."""')
        if cfg.format is AttrFormat.Scalar:
            e.line(f"    value = {_SCALAR_DEFAULT[cfg.element_type]}")
        elif cfg.format is AttrFormat.Spectrum:
            e.line("    value = []")
        else:
            e.line("    value = AttrData((), 0, 0)")
        e.region(f"attr.{name}.read")
        e.line("    return value")
        e.line()
        e.line()
    if cfg.writable in (AttrWritable.Write, AttrWritable.ReadWrite):
        e.line(f"def write_{snake(name)}(device, attr_value):")
        e.line(f'    """Write {name}."""')
        e.region(f"attr.{name}.write")
        e.line("    return None")
        e.line()
        e.line()


def _render_build_class(e: _Emitter, d: ClassDefinition) -> None:
    e.line("def build_class():")
    e.line('    """Descriptor registering every command, attribute and property."""')
    e.line("    commands = [")
    for info in d.commands:
        e.line("        CommandDescriptor(")
        e.line("            CommandInfo(")
        e.line(f"                {info.name!r},")
        e.line(f"                TangoTypeTag.{info.in_type.name},")
        e.line(f"                TangoTypeTag.{info.out_type.name},")
        e.line(f"                {info.description!r},")
        if info.allowed_states:
            states = ", ".join(f"DeviceState.{s.name}"
                               for s in sorted(info.allowed_states, key=int))
            e.line(f"                frozenset({{{states}}}),")
        e.line("            ),")
        e.line(f"            cmd_{snake(info.name)},")
        e.line("        ),")
    e.line("    ]")
    e.line("    attributes = [")
    for cfg in d.attributes:
        e.line("        AttributeDescriptor(")
        e.line("            AttributeConfig(")
        e.line(f"                {cfg.name!r},")
        e.line(f"                AttrWritable.{cfg.writable.name},")
        e.line(f"                AttrElementType.{cfg.element_type.name},")
        e.line(f"                AttrFormat.{cfg.format.name},")
        e.line(f"                {cfg.max_dim_x},")
        e.line(f"                {cfg.max_dim_y},")
        e.line(f"                {cfg.description!r},")
        e.line(f"                {cfg.unit!r},")
        e.line("            ),")
        if cfg.writable in (AttrWritable.Read, AttrWritable.ReadWrite):
            e.line(f"            read=read_{snake(cfg.name)},")
        if cfg.writable in (AttrWritable.Write, AttrWritable.ReadWrite):
            e.line(f"            write=write_{snake(cfg.name)},")
        e.line("        ),")
    e.line("    ]")
    e.line("    properties = [")
    for p in d.device_properties:
        e.line(f"        DevicePropertyInfo({p.name!r}, {p.ptype!r}, {p.default!r}, "
               f"{p.description!r}),")
    e.line("    ]")
    e.line("    return DeviceClassDescriptor(")
    e.line(f"        {d.class_name!r},")
    e.line("        commands=commands,")
    e.line("        attributes=attributes,")
    e.line("        device_properties=properties,")
    e.line("        init=init_device,")
    e.line("    )")


def render_device_module(d: ClassDefinition, regions: dict[str, str]) -> tuple[str, set[str]]:
    e = _Emitter(regions)
    e.line(f'"""{d.class_name} device class skeleton.')
    e.line()
    e.line("Generated by pogo; edit only inside PROTECTED-REGION blocks, regeneration")
    e.line('preserves them."""')
    e.line("from __future__ import annotations")
    e.line()
    e.line("from tangokit.model import (")
    e.line("    AttrElementType,")
    e.line("    AttrFormat,")
    e.line("    AttrWritable,")
    e.line("    AttributeConfig,")
    e.line("    CommandInfo,")
    e.line("    DeviceState,")
    e.line("    TangoTypeTag,")
    e.line("    VOID,")
    e.line("    default_value,")
    e.line("    fail,")
    e.line("    make_value,")
    e.line(")")
    e.line("from tangokit.server import (")
    e.line("    AttrData,")
    e.line("    AttributeDescriptor,")
    e.line("    CommandDescriptor,")
    e.line("    DeviceClassDescriptor,")
    e.line("    DevicePropertyInfo,")
    e.line(")")
    e.line()
    e.region("module.imports", indent="")
    e.line()
    e.line()
    _render_states(e, d)
    e.line("def init_device(device):")
    e.line(f'    """Initialize a {d.class_name} device."""')
    e.region("init.body")
    e.line("    return None")
    e.line()
    e.line()
    for info in d.commands:
        _render_command(e, info)
    for cfg in d.attributes:
        _render_attr_handlers(e, cfg)
    e.region("module.extra", indent="")
    e.line()
    e.line()
    _render_build_class(e, d)
    return e.text(), e.used


def render_server_module(d: ClassDefinition) -> str:
    mod = f"{snake(d.class_name)}_device"
    return (
        f'"""Process entry for {d.class_name} device servers."""\n'
        "import sys\n"
        "\n"
        "from tangokit.server import run_server_main\n"
        "\n"
        "try:\n"
        f"    from .{mod} import build_class\n"
        "except ImportError:\n"
        f"    from {mod} import build_class\n"
        "\n"
        "\n"
        "def main(argv=None):\n"
        f"    return run_server_main({d.class_name!r}, [build_class()], argv)\n"
        "\n"
        "\n"
        'if __name__ == "__main__":\n'
        "    sys.exit(main())\n"
    )


def render_doc_page(d: ClassDefinition) -> str:
    esc = html.escape
    rows = []
    rows.append(f"<html><head><title>{esc(d.class_name)}</title></head><body>")
    rows.append(f"<h1>Device class {esc(d.class_name)}</h1>")
    rows.append(f"<p>{esc(d.description)}</p>")
    rows.append("<h2>Commands</h2><table border='1'>")
    rows.append("<tr><th>Name</th><th>Input</th><th>Output</th><th>Allowed states</th>"
                "<th>Description</th></tr>")
    for info in d.commands:
        states = ", ".join(s.name for s in sorted(info.allowed_states, key=int)) or "any"
        rows.append(f"<tr><td>{esc(info.name)}</td><td>{info.in_type.name}</td>"
                    f"<td>{info.out_type.name}</td><td>{esc(states)}</td>"
                    f"<td>{esc(info.description)}</td></tr>")
    rows.append("</table>")
    rows.append("<h2>Attributes</h2><table border='1'>")
    rows.append("<tr><th>Name</th><th>Type</th><th>Format</th><th>Access</th><th>Max dims</th>"
                "<th>Unit</th><th>Description</th></tr>")
    for cfg in d.attributes:
        rows.append(f"<tr><td>{esc(cfg.name)}</td><td>{cfg.element_type.name}</td>"
                    f"<td>{cfg.format.name}</td><td>{cfg.writable.name}</td>"
                    f"<td>{cfg.max_dim_x}x{cfg.max_dim_y}</td><td>{esc(cfg.unit)}</td>"
                    f"<td>{esc(cfg.description)}</td></tr>")
    rows.append("</table>")
    rows.append("<h2>Device properties</h2><table border='1'>")
    rows.append("<tr><th>Name</th><th>Type</th><th>Default</th><th>Description</th></tr>")
    for p in d.device_properties:
        rows.append(f"<tr><td>{esc(p.name)}</td><td>{esc(p.ptype)}</td>"
                    f"<td>{esc(repr(p.default))}</td><td>{esc(p.description)}</td></tr>")
    rows.append("</table>")
    if d.states:
        rows.append("<h2>States</h2><table border='1'>")
        rows.append("<tr><th>State</th><th>Description</th></tr>")
        for state, note in d.states:
            rows.append(f"<tr><td>{state.name}</td><td>{esc(note)}</td></tr>")
        rows.append("</table>")
    rows.append("</body></html>")
    return "\n".join(rows) + "\n"


# ---------------------------------------------------------------------------
# File-set operations

def output_paths(d: ClassDefinition, out_dir: str) -> dict[str, str]:
    base = snake(d.class_name)
    return {
        "device": os.path.join(out_dir, f"{base}_device.py"),
        "server": os.path.join(out_dir, f"{base}_server.py"),
        "doc": os.path.join(out_dir, f"{d.class_name}.html"),
    }


def generate(d: ClassDefinition, out_dir: str, regions: dict[str, str] | None = None,
             allow_overwrite: bool = False) -> list[str]:
    """Emit the skeleton file set; refuses to clobber files holding protected
    regions unless allow_overwrite (the regenerate path) is set."""
    paths = output_paths(d, out_dir)
    if not allow_overwrite:
        for path in paths.values():
            if os.path.exists(path):
                try:
                    with open(path, "r", encoding="utf-8") as f:
                        if "PROTECTED-REGION" in f.read():
                            raise fail("WOULD_OVERWRITE",
                                       f"{path} contains protected regions; use regenerate",
                                       "generate")
                except OSError as exc:
                    raise fail("IO_FAILURE", str(exc), "generate")
    device_src, _used = render_device_module(d, regions or {})
    os.makedirs(out_dir, exist_ok=True)
    try:
        with open(paths["device"], "w", encoding="utf-8") as f:
            f.write(device_src)
        with open(paths["server"], "w", encoding="utf-8") as f:
            f.write(render_server_module(d))
        with open(paths["doc"], "w", encoding="utf-8") as f:
            f.write(render_doc_page(d))
    except OSError as exc:
        raise fail("IO_FAILURE", str(exc), "generate")
    return [paths["device"], paths["server"], paths["doc"]]


def regenerate(d: ClassDefinition, existing_dir: str) -> list[str]:
    """Re-emit skeletons for (a possibly changed) definition, splicing back
    every surviving protected region; orphaned non-empty regions land in
    orphaned_regions.txt."""
    regions: dict[str, str] = {}
    for fname in sorted(os.listdir(existing_dir)):
        if not fname.endswith(".py"):
            continue
        path = os.path.join(existing_dir, fname)
        with open(path, "r", encoding="utf-8") as f:
            found = extract_regions(f.read(), path)
        for rid in found:
            if rid in regions:
                raise fail("MARKER_CORRUPT", f"region id {rid} appears in multiple files",
                           "regenerate")
        regions.update(found)
    _src, used = render_device_module(d, regions)
    orphans = {rid: content for rid, content in regions.items()
               if rid not in used and content.strip()}
    written = generate(d, existing_dir, regions, allow_overwrite=True)
    if orphans:
        orphan_path = os.path.join(existing_dir, ORPHAN_FILE)
        with open(orphan_path, "a", encoding="utf-8") as f:
            for rid in sorted(orphans):
                f.write(f"=== orphaned region {rid} ===\n{orphans[rid]}\n")
        written.append(orphan_path)
    return written
