import queue
import threading
import time

import pytest

from tangokit.client import DeviceProxy
from tangokit.model import (
    DevFailed,
    DeviceState,
    TangoTypeTag,
    VOID,
    make_value,
)
from tangokit.server import DeviceRegistry, WireServer

from .fixture_classes import make_device


@pytest.fixture
def served():
    registry = DeviceRegistry()
    dev = make_device("sr/test/dev1")
    registry.add(dev)
    server = WireServer("127.0.0.1", 0, registry)
    server.serve_forever_in_thread()
    yield server, dev
    server.shutdown()
    server.server_close()


def _proxy(server, name="sr/test/dev1"):
    return DeviceProxy(f"{server.endpoint}/{name}")


def test_command_round_trip(served):
    server, _ = served
    p = _proxy(server)
    assert p.command_inout("EchoLong", make_value(TangoTypeTag.DevLong, 7)).value == 7
    assert p.state() is DeviceState.ON
    assert "ON" in p.status()
    assert p.ping() > 0


def test_state_via_command(served):
    server, _ = served
    p = _proxy(server)
    out = p.command_inout("State")
    assert out.tag is TangoTypeTag.DevState and out.value is DeviceState.ON


def test_unknown_device_error_reply(served):
    server, _ = served
    p = _proxy(server, "no/such/device")
    with pytest.raises(DevFailed) as e:
        p.ping()
    assert e.value.reason == "API_DeviceNotFound"


def test_server_side_errors_pass_through(served):
    server, _ = served
    p = _proxy(server)
    with pytest.raises(DevFailed) as e:
        p.command_inout("Boom")
    assert e.value.reason == "API_CommandFailed"


def test_describe_over_the_wire(served):
    server, dev = served
    p = _proxy(server)
    infos = p.command_list_query()
    assert [i.name for i in infos] == [i.name for i in dev.command_list()]
    info = p.command_query("EchoLong")
    assert info.in_type is TangoTypeTag.DevLong
    configs = p.get_attribute_config()
    assert len(configs) == 4


def test_attributes_over_the_wire(served):
    server, _ = served
    p = _proxy(server)
    av = p.read_attribute("double_scalar")
    assert av.data == (1.25,)
    p.write_attribute("double_scalar", 4.5)
    assert p.read_attribute("double_scalar").data == (4.5,)
    results = p.read_attributes(["double_scalar", "missing"])
    assert results[0].data == (4.5,)
    assert isinstance(results[1], DevFailed)


def test_interleaved_requests_same_device_ordered(served):
    server, _ = served
    p = _proxy(server)
    results = []
    threads = [threading.Thread(
        target=lambda i=i: results.append(
            p.command_inout("EchoLong", make_value(TangoTypeTag.DevLong, i)).value))
        for i in range(20)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert sorted(results) == list(range(20))


def test_async_callbacks_fifo(served):
    server, _ = served
    p = _proxy(server)
    done = queue.Queue()
    for i in range(100):
        p.command_inout_async("EchoLong", make_value(TangoTypeTag.DevLong, i),
                              lambda cmd, res: done.put(res))
    got = [done.get(timeout=5) for _ in range(100)]
    assert [r.value for r in got] == list(range(100))


def test_async_callback_gets_error(served):
    server, _ = served
    p = _proxy(server)
    done = queue.Queue()
    p.command_inout_async("Boom", VOID, lambda cmd, res: done.put((cmd, res)))
    cmd, res = done.get(timeout=5)
    assert cmd == "Boom"
    assert isinstance(res, tuple) and res[-1].reason == "API_CommandFailed"


def test_callbacks_exactly_once_on_disconnect(served):
    server, _ = served
    p = _proxy(server)
    done = queue.Queue()
    slow = threading.Event()

    # fill the pipe, then kill the server; every submission must get exactly
    # one callback (result or error)
    n = 30
    for i in range(n):
        p.command_inout_async("EchoLong", make_value(TangoTypeTag.DevLong, i),
                              lambda cmd, res: done.put(res))
    time.sleep(0.05)
    server.shutdown()
    server.server_close()
    results = [done.get(timeout=10) for _ in range(n)]
    assert done.empty()
    assert len(results) == n


def test_protocol_garbage_closes_connection(served):
    import socket
    server, _ = served
    host, port = server.endpoint.rsplit(":", 1)
    s = socket.create_connection((host, int(port)))
    s.sendall(bytes([4, 0, 0, 0]) + b"\x00\x00\x00\x00")  # bogus envelope
    s.settimeout(2)
    assert s.recv(1) == b""  # server dropped us
    s.close()
