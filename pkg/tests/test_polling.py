import pytest

from tangokit.model import AttrSource, DevFailed, TangoTypeTag, VOID, make_value
from tangokit.polling import ManualClock, PollEntry, PollKind

from .fixture_classes import make_device


@pytest.fixture
def clock():
    return ManualClock(start_ms=1_000)


@pytest.fixture
def dev(clock):
    return make_device(clock=clock)


def _poll_cmd(dev, name="Sample", period=100):
    dev.poller.add_entry(PollEntry(PollKind.Command, name, period))


def test_add_entry_validates_period(dev):
    with pytest.raises(DevFailed) as e:
        dev.poller.add_entry(PollEntry(PollKind.Command, "Sample", 5))
    assert e.value.reason == "BAD_PERIOD"


def test_add_poll_command_with_input_rejected(dev):
    with pytest.raises(DevFailed) as e:
        dev.dispatch_command("AddPollEntry", make_value(
            TangoTypeTag.DevVarStringArray, ["command", "EchoLong", "100"]))
    assert e.value.reason == "POLL_NOT_VOID"


def test_add_poll_unknown_command(dev):
    with pytest.raises(DevFailed) as e:
        dev.dispatch_command("AddPollEntry", make_value(
            TangoTypeTag.DevVarStringArray, ["command", "Nope", "100"]))
    assert e.value.reason == "API_CommandNotFound"


def test_ring_depth(dev, clock):
    _poll_cmd(dev)
    for _ in range(24):
        clock.advance(100)
        dev.poller.tick(PollKind.Command, "Sample")
    history = dev.poller.history(PollKind.Command, "Sample")
    assert len(history) == 10
    # newest last: the 25 ticks produced values 1..25, buffer holds 16..25
    assert [s.value.value for s in history] == list(range(16, 26))


def test_timestamps_strictly_monotone(dev, clock):
    _poll_cmd(dev)
    for _ in range(5):
        dev.poller.tick(PollKind.Command, "Sample")  # clock frozen on purpose
    ts = [s.acquired_at for s in dev.poller.history(PollKind.Command, "Sample")]
    assert ts == sorted(ts) and len(set(ts)) == len(ts)


def test_cache_read_fresh(dev, clock):
    _poll_cmd(dev)
    sample = dev.poller.cache_read(PollKind.Command, "Sample")
    assert sample.value.value == 1
    # dispatch serves polled void commands from the cache
    out = dev.dispatch_command("Sample", VOID)
    assert out.value == 1
    assert dev.store["counters"]["Sample"] == 1  # handler ran once, at add time


def test_cache_read_stale(dev, clock):
    _poll_cmd(dev, period=100)
    clock.advance(301)  # just over 3x period
    with pytest.raises(DevFailed) as e:
        dev.dispatch_command("Sample", VOID)
    assert e.value.reason == "API_DataNotUpdated"


def test_unpolled_falls_through_to_hardware(dev):
    with pytest.raises(DevFailed) as e:
        dev.poller.cache_read(PollKind.Command, "Sample")
    assert e.value.reason == "API_PollObjNotFound"
    assert dev.dispatch_command("Sample", VOID).value == 1  # hardware execution


def test_remove_entry_routes_back_to_hardware(dev, clock):
    _poll_cmd(dev)
    dev.dispatch_command("RemPollEntry", make_value(
        TangoTypeTag.DevVarStringArray, ["command", "Sample"]))
    before = dev.store["counters"]["Sample"]
    dev.dispatch_command("Sample", VOID)
    assert dev.store["counters"]["Sample"] == before + 1


def test_error_samples_cached(dev, clock):
    dev.poller.add_entry(PollEntry(PollKind.Command, "Boom", 100))
    with pytest.raises(DevFailed) as e:
        dev.dispatch_command("Boom", VOID)
    assert e.value.reason == "API_CommandFailed"
    history = dev.poller.history(PollKind.Command, "Boom")
    assert history[-1].is_error


def test_error_then_success_replaces_newest(dev, clock):
    calls = {"n": 0}

    def flaky(device, argin):
        calls["n"] += 1
        if calls["n"] == 1:
            raise RuntimeError("first fails")
        return VOID

    from tangokit.model import CommandInfo
    from tangokit.server import CommandDescriptor
    dev._commands["flaky"] = CommandDescriptor(
        CommandInfo("Flaky", TangoTypeTag.DevVoid, TangoTypeTag.DevVoid), flaky)
    dev.poller.add_entry(PollEntry(PollKind.Command, "Flaky", 100))
    assert dev.poller.history(PollKind.Command, "Flaky")[-1].is_error
    clock.advance(100)
    dev.poller.tick(PollKind.Command, "Flaky")
    assert not dev.poller.history(PollKind.Command, "Flaky")[-1].is_error


def test_polled_attribute_served_from_cache(dev, clock):
    dev.poller.add_entry(PollEntry(PollKind.Attribute, "double_scalar", 100))
    reads_before = dev.store["counters"]["read_double_scalar"]
    av = dev.dispatch_read_attributes(["double_scalar"])[0]
    assert av.source is AttrSource.Cache
    assert av.data == (1.25,)
    assert dev.store["counters"]["read_double_scalar"] == reads_before


def test_hardware_shielding_bound(dev, clock):
    _poll_cmd(dev, period=100)
    # simulate T=1000ms with ticks at the period while clients hammer
    for step in range(10):
        clock.advance(100)
        dev.poller.tick(PollKind.Command, "Sample")
        for _ in range(50):  # 50 "clients" per step
            dev.dispatch_command("Sample", VOID)
    # ceil(1000/100) + 1 = 11 executions max
    assert dev.store["counters"]["Sample"] <= 11


def test_cache_value_equals_last_hardware_execution(dev, clock):
    _poll_cmd(dev)
    clock.advance(100)
    dev.poller.tick(PollKind.Command, "Sample")
    hw = dev.store["counters"]["Sample"]
    assert dev.dispatch_command("Sample", VOID).value == hw


def test_poll_config_persists_as_properties(dev):
    # no DB attached: entries still work, property mirror is a no-op
    dev.dispatch_command("AddPollEntry", make_value(
        TangoTypeTag.DevVarStringArray, ["command", "Sample", "100"]))
    entries = dev.poller.entries()
    assert any(e.name == "Sample" and e.period_ms == 100 for e in entries)


def test_poll_config_loaded_from_properties(clock):
    dev = make_device(clock=clock)
    dev.properties["polled_cmd"] = ["Sample", "150"]
    dev._load_poll_config()
    assert dev.poller.get_entry(PollKind.Command, "Sample").period_ms == 150
