"""Framed binary wire protocol: value codec, envelopes, op codes.

Layout rules (see PROTOCOL.md for the normative description and golden
vectors): everything little-endian, strings are u32 byte-length + UTF-8,
sequences are u32 count + elements, frames are u32 body-length + body.
"""
from __future__ import annotations

import enum
import struct
from dataclasses import dataclass

from .model import (
    AttrElementType,
    AttrFormat,
    AttrSource,
    AttrWritable,
    AttributeConfig,
    AttributeValue,
    CommandInfo,
    DevError,
    DeviceState,
    ErrorSeverity,
    MIXED_TAGS,
    TangoTypeTag,
    TangoValue,
    fail,
    make_value,
    scalar_of_sequence,
)

FRAME_CAP = 16 * 1024 * 1024


class OpCode(enum.IntEnum):
    CommandInout = 1
    ReadAttributes = 2
    WriteAttributes = 3
    CommandListQuery = 4
    CommandQuery = 5
    GetAttributeConfig = 6
    SetAttributeConfig = 7
    Ping = 8
    State = 9
    Status = 10


_SCALAR_FMT = {
    TangoTypeTag.DevShort: "<h",
    TangoTypeTag.DevUShort: "<H",
    TangoTypeTag.DevLong: "<i",
    TangoTypeTag.DevULong: "<I",
    TangoTypeTag.DevFloat: "<f",
    TangoTypeTag.DevDouble: "<d",
}


class _Reader:
    """Cursor over a byte buffer; every read is bounds-checked."""

    def __init__(self, buf: bytes, pos: int = 0):
        self.buf = buf
        self.pos = pos

    def remaining(self) -> int:
        return len(self.buf) - self.pos

    def take(self, n: int) -> bytes:
        if n > self.remaining():
            raise fail("TRUNCATED", f"need {n} bytes, have {self.remaining()}", "decode")
        out = self.buf[self.pos:self.pos + n]
        self.pos += n
        return out

    def u8(self) -> int:
        return self.take(1)[0]

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def u64(self) -> int:
        return struct.unpack("<Q", self.take(8))[0]

    def scalar(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))[0]

    def string(self) -> str:
        n = self.u32()
        if n > self.remaining():
            raise fail("TRUNCATED", f"string claims {n} bytes, {self.remaining()} remain", "decode")
        raw = self.take(n)
        try:
            return raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise fail("BAD_UTF8", str(exc), "decode") from None

    def count(self, min_elem_size: int) -> int:
        n = self.u32()
        if n * min_elem_size > self.remaining():
            raise fail("LENGTH_OVERFLOW",
                       f"declared count {n} exceeds remaining {self.remaining()} bytes", "decode")
        return n


def _put_string(out: bytearray, s: str) -> None:
    raw = s.encode("utf-8")
    out += struct.pack("<I", len(raw))
    out += raw


def encode_value(v: TangoValue) -> bytes:
    out = bytearray()
    out.append(int(v.tag))
    tag = v.tag
    if tag is TangoTypeTag.DevVoid:
        pass
    elif tag is TangoTypeTag.DevBoolean:
        out.append(1 if v.value else 0)
    elif tag in _SCALAR_FMT:
        out += struct.pack(_SCALAR_FMT[tag], v.value)
    elif tag is TangoTypeTag.DevString:
        _put_string(out, v.value)
    elif tag is TangoTypeTag.DevState:
        out.append(int(v.value))
    elif tag is TangoTypeTag.DevVarBooleanArray:
        out += struct.pack("<I", len(v.value))
        out += bytes(1 if x else 0 for x in v.value)
    elif tag is TangoTypeTag.DevVarStringArray:
        out += struct.pack("<I", len(v.value))
        for s in v.value:
            _put_string(out, s)
    elif tag in MIXED_TAGS:
        nums, strs = v.value
        fmt = "<i" if tag is TangoTypeTag.DevVarLongStringArray else "<d"
        out += struct.pack("<I", len(nums))
        for x in nums:
            out += struct.pack(fmt, x)
        out += struct.pack("<I", len(strs))
        for s in strs:
            _put_string(out, s)
    else:  # homogeneous numeric sequence
        fmt = _SCALAR_FMT[scalar_of_sequence(tag)]
        out += struct.pack("<I", len(v.value))
        for x in v.value:
            out += struct.pack(fmt, x)
    if len(out) > FRAME_CAP:
        raise fail("VALUE_TOO_LARGE", f"encoded value is {len(out)} bytes", "encode_value")
    return bytes(out)


def decode_value_at(r: _Reader) -> TangoValue:
    raw_tag = r.u8()
    if raw_tag >= 20:
        raise fail("BAD_TAG", f"unknown type tag {raw_tag}", "decode_value")
    tag = TangoTypeTag(raw_tag)
    if tag is TangoTypeTag.DevVoid:
        return make_value(tag)
    if tag is TangoTypeTag.DevBoolean:
        return make_value(tag, r.u8() != 0)
    if tag in _SCALAR_FMT:
        return make_value(tag, r.scalar(_SCALAR_FMT[tag]))
    if tag is TangoTypeTag.DevString:
        return make_value(tag, r.string())
    if tag is TangoTypeTag.DevState:
        code = r.u8()
        if code >= 14:
            raise fail("BAD_TAG", f"unknown device state {code}", "decode_value")
        return make_value(tag, DeviceState(code))
    if tag is TangoTypeTag.DevVarBooleanArray:
        n = r.count(1)
        return make_value(tag, tuple(b != 0 for b in r.take(n)))
    if tag is TangoTypeTag.DevVarStringArray:
        n = r.count(4)
        return make_value(tag, tuple(r.string() for _ in range(n)))
    if tag in MIXED_TAGS:
        fmt = "<i" if tag is TangoTypeTag.DevVarLongStringArray else "<d"
        size = struct.calcsize(fmt)
        n = r.count(size)
        nums = tuple(r.scalar(fmt) for _ in range(n))
        m = r.count(4)
        strs = tuple(r.string() for _ in range(m))
        return make_value(tag, (nums, strs))
    fmt = _SCALAR_FMT[scalar_of_sequence(tag)]
    size = struct.calcsize(fmt)
    n = r.count(size)
    return make_value(tag, tuple(r.scalar(fmt) for _ in range(n)))


def decode_value(buf: bytes) -> tuple[TangoValue, int]:
    """Decode one value; returns (value, bytes consumed)."""
    r = _Reader(buf)
    v = decode_value_at(r)
    return v, r.pos


# ---------------------------------------------------------------------------
# Error sequences

def encode_errors(errors) -> bytes:
    out = bytearray()
    out += struct.pack("<I", len(errors))
    for e in errors:
        _put_string(out, e.reason)
        _put_string(out, e.description)
        _put_string(out, e.origin)
        out.append(int(e.severity))
    return bytes(out)


def decode_errors_at(r: _Reader) -> tuple[DevError, ...]:
    n = r.count(13)  # 3 empty strings + severity = 13 bytes minimum
    errs = []
    for _ in range(n):
        reason = r.string()
        description = r.string()
        origin = r.string()
        sev = r.u8()
        if sev > 2:
            raise fail("BAD_TAG", f"unknown severity {sev}", "decode_errors")
        errs.append(DevError(reason, description, origin, ErrorSeverity(sev)))
    return tuple(errs)


def decode_errors(buf: bytes) -> tuple[DevError, ...]:
    return decode_errors_at(_Reader(buf))


# ---------------------------------------------------------------------------
# Attribute structures

def encode_attr_config(c: AttributeConfig) -> bytes:
    out = bytearray()
    _put_string(out, c.name)
    out.append(int(c.writable))
    out.append(int(c.element_type))
    out.append(int(c.format))
    out += struct.pack("<II", c.max_dim_x, c.max_dim_y)
    _put_string(out, c.description)
    _put_string(out, c.unit)
    return bytes(out)


def decode_attr_config_at(r: _Reader) -> AttributeConfig:
    name = r.string()
    writable = AttrWritable(r.u8())
    element_type = AttrElementType(r.u8())
    fmt = AttrFormat(r.u8())
    max_dim_x, max_dim_y = struct.unpack("<II", r.take(8))
    description = r.string()
    unit = r.string()
    return AttributeConfig(name, writable, element_type, fmt, max_dim_x, max_dim_y,
                           description, unit)


_ELEM_FMT = {
    AttrElementType.DevShort: "<h",
    AttrElementType.DevLong: "<i",
    AttrElementType.DevDouble: "<d",
}


def _encode_elements(out: bytearray, elem: AttrElementType, data) -> None:
    out += struct.pack("<I", len(data))
    if elem is AttrElementType.DevString:
        for s in data:
            _put_string(out, s)
    else:
        fmt = _ELEM_FMT[elem]
        for x in data:
            out += struct.pack(fmt, x)


def _decode_elements(r: _Reader, elem: AttrElementType) -> tuple:
    if elem is AttrElementType.DevString:
        n = r.count(4)
        return tuple(r.string() for _ in range(n))
    fmt = _ELEM_FMT[elem]
    n = r.count(struct.calcsize(fmt))
    return tuple(r.scalar(fmt) for _ in range(n))


def encode_attr_value(v: AttributeValue) -> bytes:
    out = bytearray()
    _put_string(out, v.name)
    out.append(int(v.element_type))
    out += struct.pack("<II", v.dim_x, v.dim_y)
    _encode_elements(out, v.element_type, v.data)
    out += struct.pack("<Q", v.timestamp)
    out.append(int(v.source))
    return bytes(out)


def decode_attr_value_at(r: _Reader) -> AttributeValue:
    name = r.string()
    elem = AttrElementType(r.u8())
    dim_x, dim_y = struct.unpack("<II", r.take(8))
    data = _decode_elements(r, elem)
    timestamp = r.u64()
    source = AttrSource(r.u8())
    return AttributeValue(name, elem, dim_x, dim_y, data, timestamp, source)


@dataclass(frozen=True)
class AttrWriteValue:
    """A write request for one attribute: name plus dimensioned elements."""

    name: str
    element_type: AttrElementType
    dim_x: int
    dim_y: int
    data: tuple


def encode_attr_write(w: AttrWriteValue) -> bytes:
    out = bytearray()
    _put_string(out, w.name)
    out.append(int(w.element_type))
    out += struct.pack("<II", w.dim_x, w.dim_y)
    _encode_elements(out, w.element_type, w.data)
    return bytes(out)


def decode_attr_write_at(r: _Reader) -> AttrWriteValue:
    name = r.string()
    elem = AttrElementType(r.u8())
    dim_x, dim_y = struct.unpack("<II", r.take(8))
    data = _decode_elements(r, elem)
    return AttrWriteValue(name, elem, dim_x, dim_y, data)


def encode_command_info(info: CommandInfo) -> bytes:
    out = bytearray()
    _put_string(out, info.name)
    out.append(int(info.in_type))
    out.append(int(info.out_type))
    _put_string(out, info.description)
    states = sorted(int(s) for s in info.allowed_states)
    out += struct.pack("<I", len(states))
    out += bytes(states)
    return bytes(out)


def decode_command_info_at(r: _Reader) -> CommandInfo:
    name = r.string()
    in_type = TangoTypeTag(r.u8())
    out_type = TangoTypeTag(r.u8())
    description = r.string()
    n = r.count(1)
    states = frozenset(DeviceState(r.u8()) for _ in range(n))
    return CommandInfo(name, in_type, out_type, description, states)


# ---------------------------------------------------------------------------
# Envelopes

@dataclass(frozen=True)
class RequestEnvelope:
    request_id: int
    op_code: int
    device: str
    payload: bytes


@dataclass(frozen=True)
class ReplyEnvelope:
    request_id: int
    status: int  # 0 ok, 1 error
    payload: bytes

    @property
    def ok(self) -> bool:
        return self.status == 0


def encode_request(req: RequestEnvelope) -> bytes:
    out = bytearray()
    out += struct.pack("<IB", req.request_id, req.op_code)
    _put_string(out, req.device)
    out += req.payload
    return bytes(out)


def decode_request(body: bytes) -> RequestEnvelope:
    r = _Reader(body)
    request_id, op_code = struct.unpack("<IB", r.take(5))
    device = r.string()
    return RequestEnvelope(request_id, op_code, device, body[r.pos:])


def encode_reply(rep: ReplyEnvelope) -> bytes:
    return struct.pack("<IB", rep.request_id, rep.status) + rep.payload


def decode_reply(body: bytes) -> ReplyEnvelope:
    r = _Reader(body)
    request_id, status = struct.unpack("<IB", r.take(5))
    return ReplyEnvelope(request_id, status, body[r.pos:])


# ---------------------------------------------------------------------------
# Framing

class ConnectionClosed(Exception):
    """Clean end of stream between frames."""


def write_frame(body: bytes) -> bytes:
    if len(body) > FRAME_CAP:
        raise fail("FRAME_TOO_LARGE", f"{len(body)} bytes exceeds {FRAME_CAP}", "write_frame")
    return struct.pack("<I", len(body)) + body


def _read_exactly(recv, n: int, *, at_boundary: bool) -> bytes:
    chunks = []
    got = 0
    while got < n:
        chunk = recv(n - got)
        if not chunk:
            if at_boundary and got == 0:
                raise ConnectionClosed()
            raise fail("CONNECTION_CLOSED", "stream ended mid-frame", "read_frame")
        chunks.append(chunk)
        got += len(chunk)
    return b"".join(chunks)


def read_frame(recv) -> bytes:
    """Read one frame body from ``recv(n) -> bytes``.

    Raises ConnectionClosed on a clean close between frames, DevFailed
    CONNECTION_CLOSED on a mid-frame close, FRAME_TOO_LARGE on cap breach.
    """
    header = _read_exactly(recv, 4, at_boundary=True)
    (length,) = struct.unpack("<I", header)
    if length > FRAME_CAP:
        raise fail("FRAME_TOO_LARGE", f"frame of {length} bytes exceeds {FRAME_CAP}", "read_frame")
    if length == 0:
        return b""
    return _read_exactly(recv, length, at_boundary=False)


def send_frame(sock, body: bytes) -> None:
    sock.sendall(write_frame(body))


def recv_frame(sock) -> bytes:
    return read_frame(sock.recv)
