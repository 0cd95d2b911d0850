import pytest

from tangokit.client import DatabaseClient
from tangokit.database.service import DatabaseServer
from tangokit.database.store import SELF_DEVICE
from tangokit.model import DevFailed


@pytest.fixture
def db(tmp_path):
    server = DatabaseServer(str(tmp_path / "db.txt"), port=0)
    server.start()
    client = DatabaseClient(server.endpoint)
    yield server, client
    client.close()
    server.stop()


def test_database_is_a_device(db):
    server, client = db
    infos = client.proxy.command_list_query()
    names = {i.name for i in infos}
    # every database operation is a command on sys/database/2
    for expected in ("DbAddServer", "DbGetDeviceList", "DbExportDevice", "DbImportDevice",
                     "DbGetProperty", "DbPutProperty", "DbDeleteProperty", "DbBrowse",
                     "DbGetServerList", "DbGetServerInfo", "DbUnexportDevice",
                     "DbGetHostList", "DbGetClassList"):
        assert expected in names
    assert "State" in names and "Status" in names


def test_add_server_and_device_list(db):
    _, client = db
    client.add_server("TypesEcho/test", "hosta", 1, {"TypesEcho": ["sr/test/echo1"]})
    assert client.get_device_list("TypesEcho/test", "TypesEcho") == ["sr/test/echo1"]
    assert client.get_device_list("Unknown/none", "TypesEcho") == []
    info = client.get_server_info("TypesEcho/test")
    assert info["level"] == 1 and info["classes"] == ["TypesEcho"]


def test_export_import(db):
    _, client = db
    client.add_server("TypesEcho/test", "hosta", 1, {"TypesEcho": ["sr/test/echo1"]})
    rec = client.import_device("sr/test/echo1")
    assert not rec["exported"]
    client.export_device("sr/test/echo1", "127.0.0.1:4100", "TypesEcho/test")
    rec = client.import_device("sr/test/echo1")
    assert rec["exported"] and rec["endpoint"] == "127.0.0.1:4100"
    with pytest.raises(DevFailed) as e:
        client.import_device("nope/nope/nope")
    assert e.value.reason == "DEVICE_NOT_DEFINED"


def test_properties_over_the_wire(db):
    _, client = db
    client.put_device_property("sr/plc/c1", {"InputAddresses": ["DB1.0", "DB1.2"]})
    got = client.get_device_property("sr/plc/c1", ["InputAddresses"])
    assert got["inputaddresses"] == ["DB1.0", "DB1.2"]
    client.delete_device_property("sr/plc/c1", ["InputAddresses"])
    assert client.get_device_property("sr/plc/c1", ["InputAddresses"])["inputaddresses"] == []


def test_browse_over_the_wire(db):
    _, client = db
    client.add_server("TypesEcho/test", "hosta", 1, {"TypesEcho": ["sr/test/echo1"]})
    assert client.browse("sr/*/*") == ["sr/test/echo1"]
    assert SELF_DEVICE in client.browse("*/*/*")


def test_db_self_record_exported(db):
    server, client = db
    rec = client.import_device(SELF_DEVICE)
    assert rec["exported"] and rec["endpoint"] == server.endpoint


def test_restart_preserves_state(tmp_path):
    path = str(tmp_path / "db.txt")
    server = DatabaseServer(path, port=0)
    server.start()
    client = DatabaseClient(server.endpoint)
    client.add_server("TypesEcho/test", "hosta", 2, {"TypesEcho": ["sr/test/echo1"]})
    client.export_device("sr/test/echo1", "127.0.0.1:4100", "TypesEcho/test")
    client.put_device_property("sr/test/echo1", {"Gain": ["3.5"]})
    client.close()
    server.stop()

    server2 = DatabaseServer(path, port=0)
    server2.start()
    client2 = DatabaseClient(server2.endpoint)
    try:
        rec = client2.import_device("sr/test/echo1")
        assert rec["endpoint"] == "127.0.0.1:4100"
        assert client2.get_server_info("TypesEcho/test")["level"] == 2
        assert client2.get_device_property("sr/test/echo1", ["Gain"])["gain"] == ["3.5"]
    finally:
        client2.close()
        server2.stop()


def test_re_export_after_restart_new_port(db):
    _, client = db
    client.add_server("TypesEcho/test", "hosta", 1, {"TypesEcho": ["sr/test/echo1"]})
    client.export_device("sr/test/echo1", "127.0.0.1:4100", "TypesEcho/test")
    client.export_device("sr/test/echo1", "127.0.0.1:4999", "TypesEcho/test")
    assert client.import_device("sr/test/echo1")["endpoint"] == "127.0.0.1:4999"
