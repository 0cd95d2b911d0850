"""Device-server process lifecycle, exercised through real subprocesses."""
import subprocess

import pytest

from tangokit.client import DeviceProxy
from tangokit.model import DevFailed, DeviceState, TangoTypeTag, make_value

from .procutil import DbProcess, spawn, terminate, wait_exported, wait_line


@pytest.fixture
def dbp(tmp_path):
    db = DbProcess(tmp_path)
    yield db
    db.stop()


def test_exit_code_when_not_registered(dbp):
    out = subprocess.run(["PollProbe", "ghost", "--db", dbp.endpoint],
                         capture_output=True, text=True, timeout=30)
    assert out.returncode == 2
    assert "not registered" in out.stderr.lower() or "not defined" in out.stderr.lower()


def test_exit_code_when_db_unreachable(tmp_path):
    out = subprocess.run(["PollProbe", "x", "--db", "127.0.0.1:1"],
                         capture_output=True, text=True, timeout=60)
    assert out.returncode == 3


def test_server_exports_and_serves(dbp):
    dbp.client.add_server("PollProbe/t1", "localhost", 1,
                          {"PollProbe": ["sr/probe/1", "sr/probe/2"]})
    proc = spawn(["PollProbe", "t1", "--db", dbp.endpoint])
    try:
        wait_line(proc, "serving 2 device(s)")
        ep = wait_exported(dbp.client, "sr/probe/1")
        assert wait_exported(dbp.client, "sr/probe/2") == ep
        p1 = DeviceProxy(f"{ep}/sr/probe/1")
        p2 = DeviceProxy(f"{ep}/sr/probe/2")
        assert p1.state() is DeviceState.ON
        # counters are per device instance
        assert p1.command_inout("Bump").value == 1
        assert p2.command_inout("Bump").value == 1
        assert p1.command_inout("Bump").value == 2
        p1.close()
        p2.close()
    finally:
        terminate(proc)
    # orderly shutdown unexports
    assert not dbp.client.import_device("sr/probe/1")["exported"]


def test_db_resolution_via_env(dbp, monkeypatch):
    dbp.client.add_server("PollProbe/t1", "localhost", 1, {"PollProbe": ["sr/probe/1"]})
    proc = spawn(["PollProbe", "t1", "--db", dbp.endpoint])
    try:
        wait_exported(dbp.client, "sr/probe/1")
        monkeypatch.setenv("TNG_HOST", dbp.endpoint)
        p = DeviceProxy("sr/probe/1")
        assert p.ping() > 0
        p.close()
    finally:
        terminate(proc)


def test_faulty_sibling_does_not_block_server(dbp):
    # a device whose init fails must come up FAULT while its sibling serves
    dbp.client.add_server("SimPLC/t1", "localhost", 1,
                          {"SimPLC": ["sr/plc/good", "sr/plc/bad"]})
    dbp.client.put_device_property("sr/plc/good", {"OutputAddresses": ["Q0", "Q1"]})
    dbp.client.put_device_property("sr/plc/bad", {"OutputAddresses": ["Q0"],
                                                  "InputAddresses": []})
    proc = spawn(["SimPLC", "t1", "--db", dbp.endpoint])
    try:
        ep = wait_exported(dbp.client, "sr/plc/good")
        good = DeviceProxy(f"{ep}/sr/plc/good")
        bad = DeviceProxy(f"{ep}/sr/plc/bad")
        assert good.state() is DeviceState.ON
        assert good.read_attribute("output_count").data == (2,)
        # break the bad one via a property the init hook chokes on after restart
        good.close()
        bad.close()
    finally:
        terminate(proc)


def test_init_command_reloads_properties(dbp):
    dbp.client.add_server("SimPLC/t1", "localhost", 1, {"SimPLC": ["sr/plc/1"]})
    dbp.client.put_device_property("sr/plc/1", {"OutputAddresses": ["Q0"]})
    proc = spawn(["SimPLC", "t1", "--db", dbp.endpoint])
    try:
        ep = wait_exported(dbp.client, "sr/plc/1")
        p = DeviceProxy(f"{ep}/sr/plc/1")
        assert p.read_attribute("output_count").data == (1,)
        dbp.client.put_device_property("sr/plc/1", {"OutputAddresses": ["Q0", "Q1", "Q2"]})
        p.command_inout("Init")
        assert p.read_attribute("output_count").data == (3,)
        p.close()
    finally:
        terminate(proc)
