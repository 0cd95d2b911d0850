"""Per-device polling: periodic execution of void commands and attribute
reads into a ring-buffer cache, so slow hardware is shielded from client
request rates.

One polling thread per device.  Every cache decision goes through a Clock so
tests can drive time by hand.
"""
from __future__ import annotations

import enum
import threading
import time
from dataclasses import dataclass, field

from .model import AttributeValue, DevFailed, TangoValue, fail

MIN_PERIOD_MS = 10
STALE_FACTOR = 3
DEFAULT_DEPTH = 10


class Clock:
    """Time source used by pollers and cache freshness checks."""

    def now_ms(self) -> int:
        raise NotImplementedError

    def wait(self, event: threading.Event, timeout_ms: float) -> bool:
        """Wait for the event or the timeout; returns True if event was set."""
        raise NotImplementedError


class SystemClock(Clock):
    def now_ms(self) -> int:
        return int(time.time() * 1000)

    def wait(self, event: threading.Event, timeout_ms: float) -> bool:
        return event.wait(timeout_ms / 1000.0)


class ManualClock(Clock):
    """Hand-stepped clock for deterministic tests; wait() never blocks."""

    def __init__(self, start_ms: int = 0):
        self._now = start_ms

    def now_ms(self) -> int:
        return self._now

    def advance(self, ms: int) -> None:
        self._now += ms

    def wait(self, event: threading.Event, timeout_ms: float) -> bool:
        return event.is_set()


class PollKind(enum.Enum):
    Command = "command"
    Attribute = "attribute"


@dataclass(frozen=True)
class PollEntry:
    kind: PollKind
    name: str
    period_ms: int


@dataclass(frozen=True)
class CacheSample:
    value: object  # TangoValue | AttributeValue | tuple[DevError, ...]
    acquired_at: int
    is_error: bool = False


@dataclass
class _PolledItem:
    entry: PollEntry
    samples: list = field(default_factory=list)  # newest last, bounded by depth
    next_due: int = 0


class DevicePoller:
    """Owns the poll schedule and ring-buffer cache of one device.

    The device object must provide ``poll_execute_command(name)`` and
    ``poll_read_attribute(name)`` running under its own serialization.
    """

    def __init__(self, device, clock: Clock | None = None, depth: int = DEFAULT_DEPTH):
        self.device = device
        self.clock = clock or SystemClock()
        self.depth = depth
        self._items: dict[tuple[PollKind, str], _PolledItem] = {}
        self._lock = threading.Lock()
        self._wake = threading.Event()
        self._stop = threading.Event()
        self._suspended = False
        self._thread: threading.Thread | None = None

    # -- configuration ----------------------------------------------------

    def add_entry(self, entry: PollEntry, *, first_tick: bool = True) -> None:
        if entry.period_ms < MIN_PERIOD_MS:
            raise fail("BAD_PERIOD", f"period {entry.period_ms} ms below minimum {MIN_PERIOD_MS}",
                       "add_poll_entry")
        key = (entry.kind, entry.name.lower())
        with self._lock:
            self._items[key] = _PolledItem(entry, [], self.clock.now_ms())
        if first_tick:
            self.tick(entry.kind, entry.name)
        self._wake.set()

    def remove_entry(self, kind: PollKind, name: str) -> None:
        with self._lock:
            self._items.pop((kind, name.lower()), None)
        self._wake.set()

    def entries(self) -> list[PollEntry]:
        with self._lock:
            return [it.entry for it in self._items.values()]

    def get_entry(self, kind: PollKind, name: str) -> PollEntry | None:
        with self._lock:
            it = self._items.get((kind, name.lower()))
            return it.entry if it else None

    # -- ticking ----------------------------------------------------------

    def tick(self, kind: PollKind, name: str) -> CacheSample | None:
        """Execute one poll of the entry and cache the outcome."""
        key = (kind, name.lower())
        with self._lock:
            item = self._items.get(key)
        if item is None:
            return None
        try:
            if kind is PollKind.Command:
                value = self.device.poll_execute_command(item.entry.name)
            else:
                value = self.device.poll_read_attribute(item.entry.name)
            is_error = False
        except DevFailed as exc:
            value, is_error = exc.errors, True
        now = self.clock.now_ms()
        with self._lock:
            if self._items.get(key) is not item:
                return None
            if item.samples and now <= item.samples[-1].acquired_at:
                now = item.samples[-1].acquired_at + 1  # keep timestamps strictly monotone
            sample = CacheSample(value, now, is_error)
            item.samples.append(sample)
            del item.samples[:-self.depth]
            item.next_due = now + item.entry.period_ms
        return sample

    def _due_items(self) -> tuple[list[_PolledItem], float]:
        now = self.clock.now_ms()
        due, soonest = [], None
        with self._lock:
            for item in self._items.values():
                if item.next_due <= now:
                    due.append(item)
                elif soonest is None or item.next_due < soonest:
                    soonest = item.next_due
        timeout = (soonest - now) if soonest is not None else 1000.0
        return due, max(timeout, 1.0)

    def _run(self) -> None:
        while not self._stop.is_set():
            if self._suspended:
                self._wake.wait(0.05)
                self._wake.clear()
                continue
            due, timeout_ms = self._due_items()
            for item in due:
                if self._stop.is_set() or self._suspended:
                    break
                self.tick(item.entry.kind, item.entry.name)
            if not due:
                if self._wake.wait(timeout_ms / 1000.0):
                    self._wake.clear()

    def start(self) -> None:
        if self._thread is None:
            self._thread = threading.Thread(target=self._run, daemon=True,
                                            name=f"poll-{self.device}")
            self._thread.start()

    def stop(self) -> None:
        self._stop.set()
        self._wake.set()
        if self._thread is not None:
            self._thread.join(timeout=2)
            self._thread = None

    def suspend(self) -> None:
        self._suspended = True
        self._wake.set()

    def resume(self) -> None:
        self._suspended = False
        self._wake.set()

    # -- serving ----------------------------------------------------------

    def cache_read(self, kind: PollKind, name: str) -> CacheSample:
        key = (kind, name.lower())
        with self._lock:
            item = self._items.get(key)
            if item is None:
                raise fail("API_PollObjNotFound", f"{kind.value} {name} is not polled", "cache_read")
            sample = item.samples[-1] if item.samples else None
            period = item.entry.period_ms
        now = self.clock.now_ms()
        if sample is None or now - sample.acquired_at > STALE_FACTOR * period:
            raise fail("API_DataNotUpdated",
                       f"cached {kind.value} {name} is older than {STALE_FACTOR}x its {period} ms period",
                       "cache_read")
        return sample

    def history(self, kind: PollKind, name: str) -> list[CacheSample]:
        key = (kind, name.lower())
        with self._lock:
            item = self._items.get(key)
            return list(item.samples) if item else []
