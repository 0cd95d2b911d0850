"""Domain vocabulary shared by every part of the toolkit.

Everything here is an immutable value: safe to share between threads and to
ship across the wire.  The payload type table (20 tags), the device state
table (14 states) and the attribute element/format tables are fixed; nothing
else in the toolkit may invent payload shapes outside of them.
"""
from __future__ import annotations

import enum
import math
import re
import struct
from dataclasses import dataclass, field


class TangoTypeTag(enum.IntEnum):
    """The closed set of command payload types."""

    DevVoid = 0
    DevBoolean = 1
    DevShort = 2
    DevLong = 3
    DevFloat = 4
    DevDouble = 5
    DevUShort = 6
    DevULong = 7
    DevString = 8
    DevVarBooleanArray = 9
    DevVarShortArray = 10
    DevVarLongArray = 11
    DevVarFloatArray = 12
    DevVarDoubleArray = 13
    DevVarUShortArray = 14
    DevVarULongArray = 15
    DevVarStringArray = 16
    DevVarLongStringArray = 17
    DevVarDoubleStringArray = 18
    DevState = 19


SCALAR_TAGS = tuple(TangoTypeTag(i) for i in range(1, 9))
SEQUENCE_TAGS = tuple(TangoTypeTag(i) for i in range(9, 17))
MIXED_TAGS = (TangoTypeTag.DevVarLongStringArray, TangoTypeTag.DevVarDoubleStringArray)


class DeviceState(enum.IntEnum):
    ON = 0
    OFF = 1
    CLOSE = 2
    OPEN = 3
    INSERT = 4
    EXTRACT = 5
    MOVING = 6
    STANDBY = 7
    FAULT = 8
    INIT = 9
    RUNNING = 10
    ALARM = 11
    DISABLE = 12
    UNKNOWN = 13


class AttrElementType(enum.IntEnum):
    """Attribute element types; numeric values match the scalar payload tags."""

    DevShort = TangoTypeTag.DevShort
    DevLong = TangoTypeTag.DevLong
    DevDouble = TangoTypeTag.DevDouble
    DevString = TangoTypeTag.DevString


class AttrFormat(enum.IntEnum):
    Scalar = 0
    Spectrum = 1
    Image = 2


class AttrWritable(enum.IntEnum):
    Read = 0
    Write = 1
    ReadWrite = 2


class AttrSource(enum.IntEnum):
    Hardware = 0
    Cache = 1


class ErrorSeverity(enum.IntEnum):
    Warn = 0
    Err = 1
    Panic = 2


@dataclass(frozen=True)
class DevError:
    reason: str
    description: str
    origin: str
    severity: ErrorSeverity = ErrorSeverity.Err


class DevFailed(Exception):
    """Carries a non-empty chain of DevError, outermost cause last."""

    def __init__(self, *errors: DevError):
        if not errors:
            raise ValueError("DevFailed needs at least one DevError")
        self.errors: tuple[DevError, ...] = tuple(errors)
        super().__init__("; ".join(f"{e.reason}: {e.description}" for e in errors))

    @property
    def reason(self) -> str:
        return self.errors[-1].reason

    def appended(self, err: DevError) -> "DevFailed":
        return DevFailed(*self.errors, err)


def fail(reason: str, description: str, origin: str = "",
         severity: ErrorSeverity = ErrorSeverity.Err) -> "DevFailed":
    """Build a single-cause DevFailed (convenience for ``raise fail(...)``)."""
    return DevFailed(DevError(reason, description, origin, severity))


# Bounds for the fixed-width integer payloads.
_INT_RANGES = {
    TangoTypeTag.DevShort: (-(1 << 15), (1 << 15) - 1),
    TangoTypeTag.DevUShort: (0, (1 << 16) - 1),
    TangoTypeTag.DevLong: (-(1 << 31), (1 << 31) - 1),
    TangoTypeTag.DevULong: (0, (1 << 32) - 1),
}


def _as_float32(x: float) -> float:
    """Round to the nearest value representable in IEEE-754 binary32."""
    return struct.unpack("<f", struct.pack("<f", x))[0]


def _check_int(tag: TangoTypeTag, x, origin: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise fail("API_IncompatibleCmdArgumentType",
                   f"expected an integer for {tag.name}, got {type(x).__name__}", origin)
    lo, hi = _INT_RANGES[tag]
    if not lo <= x <= hi:
        raise fail("API_IncompatibleCmdArgumentType",
                   f"{x} out of range for {tag.name}", origin)
    return x


def _check_str(x, origin: str) -> str:
    if not isinstance(x, str):
        raise fail("API_IncompatibleCmdArgumentType",
                   f"expected a string, got {type(x).__name__}", origin)
    return x


@dataclass(frozen=True)
class TangoValue:
    """Tagged union over the 20 payload types.

    Construct through :func:`make_value`, which validates and normalizes the
    payload (integer ranges, float32 rounding, tuple-ification of sequences).
    """

    tag: TangoTypeTag
    value: object = None

    def __str__(self) -> str:
        if self.tag is TangoTypeTag.DevVoid:
            return "DevVoid"
        return f"{self.tag.name}({self.value!r})"


VOID = TangoValue(TangoTypeTag.DevVoid, None)


def make_value(tag: TangoTypeTag, value=None) -> TangoValue:
    """Validate/normalize ``value`` for ``tag`` and wrap it."""
    origin = "make_value"
    tag = TangoTypeTag(tag)
    if tag is TangoTypeTag.DevVoid:
        return VOID
    if tag is TangoTypeTag.DevBoolean:
        return TangoValue(tag, bool(value))
    if tag in (TangoTypeTag.DevShort, TangoTypeTag.DevUShort,
               TangoTypeTag.DevLong, TangoTypeTag.DevULong):
        return TangoValue(tag, _check_int(tag, value, origin))
    if tag is TangoTypeTag.DevFloat:
        return TangoValue(tag, _as_float32(float(value)))
    if tag is TangoTypeTag.DevDouble:
        return TangoValue(tag, float(value))
    if tag is TangoTypeTag.DevString:
        return TangoValue(tag, _check_str(value, origin))
    if tag is TangoTypeTag.DevState:
        return TangoValue(tag, DeviceState(value))
    if tag is TangoTypeTag.DevVarBooleanArray:
        return TangoValue(tag, tuple(bool(x) for x in value))
    if tag in (TangoTypeTag.DevVarShortArray, TangoTypeTag.DevVarUShortArray,
               TangoTypeTag.DevVarLongArray, TangoTypeTag.DevVarULongArray):
        scalar = scalar_of_sequence(tag)
        return TangoValue(tag, tuple(_check_int(scalar, x, origin) for x in value))
    if tag is TangoTypeTag.DevVarFloatArray:
        return TangoValue(tag, tuple(_as_float32(float(x)) for x in value))
    if tag is TangoTypeTag.DevVarDoubleArray:
        return TangoValue(tag, tuple(float(x) for x in value))
    if tag is TangoTypeTag.DevVarStringArray:
        return TangoValue(tag, tuple(_check_str(x, origin) for x in value))
    if tag is TangoTypeTag.DevVarLongStringArray:
        longs, strings = value
        return TangoValue(tag, (
            tuple(_check_int(TangoTypeTag.DevLong, x, origin) for x in longs),
            tuple(_check_str(x, origin) for x in strings),
        ))
    if tag is TangoTypeTag.DevVarDoubleStringArray:
        doubles, strings = value
        return TangoValue(tag, (
            tuple(float(x) for x in doubles),
            tuple(_check_str(x, origin) for x in strings),
        ))
    raise fail("API_IncompatibleCmdArgumentType", f"unhandled tag {tag}", origin)


def default_value(tag: TangoTypeTag) -> TangoValue:
    """The zero/empty value of a tag; what generated no-op handlers return."""
    tag = TangoTypeTag(tag)
    if tag is TangoTypeTag.DevVoid:
        return VOID
    if tag is TangoTypeTag.DevBoolean:
        return make_value(tag, False)
    if tag in (TangoTypeTag.DevShort, TangoTypeTag.DevUShort,
               TangoTypeTag.DevLong, TangoTypeTag.DevULong):
        return make_value(tag, 0)
    if tag in (TangoTypeTag.DevFloat, TangoTypeTag.DevDouble):
        return make_value(tag, 0.0)
    if tag is TangoTypeTag.DevString:
        return make_value(tag, "")
    if tag is TangoTypeTag.DevState:
        return make_value(tag, DeviceState.UNKNOWN)
    if tag in MIXED_TAGS:
        return make_value(tag, ((), ()))
    return make_value(tag, ())


def check_value_against_tag(v: TangoValue, expected: TangoTypeTag) -> bool:
    return v.tag == expected


def scalar_of_sequence(tag: TangoTypeTag) -> TangoTypeTag:
    """Scalar counterpart of a homogeneous sequence tag (tags 9..16)."""
    if not 9 <= int(tag) <= 16:
        raise fail("NOT_A_SEQUENCE", f"{TangoTypeTag(tag).name} is not a homogeneous sequence tag",
                   "scalar_of_sequence")
    return TangoTypeTag(int(tag) - 8)


def sequence_of_scalar(tag: TangoTypeTag) -> TangoTypeTag:
    """Sequence counterpart of a simple scalar tag (tags 1..8)."""
    if not 1 <= int(tag) <= 8:
        raise fail("NOT_A_SCALAR", f"{TangoTypeTag(tag).name} has no sequence counterpart",
                   "sequence_of_scalar")
    return TangoTypeTag(int(tag) + 8)


_NAME_PART = re.compile(r"^[^/\s]+$")


@dataclass(frozen=True, order=True)
class DeviceName:
    """Three-part device name; stored lowercase, compared case-insensitively."""

    domain: str
    family: str
    member: str

    def __str__(self) -> str:
        return f"{self.domain}/{self.family}/{self.member}"


def parse_device_name(text: str) -> DeviceName:
    parts = text.split("/")
    if len(parts) != 3:
        raise fail("MALFORMED_NAME", f"device name {text!r} is not domain/family/member",
                   "parse_device_name")
    for p in parts:
        if not p or not _NAME_PART.match(p):
            raise fail("MALFORMED_NAME", f"bad name part {p!r} in {text!r}", "parse_device_name")
    return DeviceName(*(p.lower() for p in parts))


@dataclass(frozen=True)
class AttributeConfig:
    name: str
    writable: AttrWritable
    element_type: AttrElementType
    format: AttrFormat
    max_dim_x: int
    max_dim_y: int = 0
    description: str = ""
    unit: str = ""

    def __post_init__(self):
        if self.max_dim_x <= 0:
            raise fail("BAD_ATTR_CONFIG", f"{self.name}: max_dim_x must be positive", "AttributeConfig")
        if self.format is AttrFormat.Scalar and (self.max_dim_x != 1 or self.max_dim_y != 0):
            raise fail("BAD_ATTR_CONFIG", f"{self.name}: scalar must be 1x0", "AttributeConfig")
        if self.format is AttrFormat.Spectrum and self.max_dim_y != 0:
            raise fail("BAD_ATTR_CONFIG", f"{self.name}: spectrum must have max_dim_y=0", "AttributeConfig")
        if self.max_dim_y < 0:
            raise fail("BAD_ATTR_CONFIG", f"{self.name}: negative max_dim_y", "AttributeConfig")


@dataclass(frozen=True)
class AttributeValue:
    name: str
    element_type: AttrElementType
    dim_x: int
    dim_y: int
    data: tuple
    timestamp: int  # milliseconds since the Unix epoch
    source: AttrSource = AttrSource.Hardware

    def __post_init__(self):
        expected = self.dim_x * max(self.dim_y, 1)
        if len(self.data) != expected:
            raise fail("BAD_ATTR_VALUE",
                       f"{self.name}: {len(self.data)} elements for dims {self.dim_x}x{self.dim_y}",
                       "AttributeValue")


@dataclass(frozen=True)
class CommandInfo:
    name: str
    in_type: TangoTypeTag
    out_type: TangoTypeTag
    description: str = ""
    allowed_states: frozenset = field(default_factory=frozenset)


# Startup sanity: the closed tables must stay closed.
assert len(TangoTypeTag) == 20
assert [int(t) for t in TangoTypeTag] == list(range(20))
assert len(DeviceState) == 14
assert [int(s) for s in DeviceState] == list(range(14))
assert len(AttrElementType) == 4
assert len(AttrFormat) == 3
