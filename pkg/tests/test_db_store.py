import re

import pytest
import hypothesis.strategies as st
from hypothesis import given, settings

from tangokit.database.store import DbStore, SELF_DEVICE, match_pattern
from tangokit.model import DevFailed


@pytest.fixture
def store():
    s = DbStore()
    s.add_server("TypesEcho/test", "hosta", 1, {"TypesEcho": ["sr/test/echo1"]})
    return s


def test_self_record_always_present():
    s = DbStore()
    rec = s.get_device(SELF_DEVICE)
    assert rec.class_name == "DataBase"


def test_add_server_and_query(store):
    assert [str(n) for n in store.get_device_list("TypesEcho/test", "TypesEcho")] == \
        ["sr/test/echo1"]
    assert store.get_device_list("Unknown/x", "TypesEcho") == []
    info = store.get_server("typesecho/TEST")
    assert info.host == "hosta" and info.level == 1


def test_re_add_replaces_bindings(store):
    store.add_server("TypesEcho/test", "hosta", 1, {"TypesEcho": ["sr/test/echo2"]})
    assert [str(n) for n in store.get_device_list("TypesEcho/test", "TypesEcho")] == \
        ["sr/test/echo2"]
    with pytest.raises(DevFailed) as e:
        store.get_device("sr/test/echo1")
    assert e.value.reason == "DEVICE_NOT_DEFINED"


def test_device_owned_conflict(store):
    with pytest.raises(DevFailed) as e:
        store.add_server("Other/one", "hostb", 1, {"TypesEcho": ["sr/test/echo1"]})
    assert e.value.reason == "DEVICE_OWNED"


def test_class_empty_rejected(store):
    with pytest.raises(DevFailed) as e:
        store.add_server("Other/one", "hostb", 1, {"TypesEcho": []})
    assert e.value.reason == "CLASS_EMPTY"


def test_multi_class_server():
    s = DbStore()
    s.add_server("Multi/a", "h", 1, {"A": ["d/a/1", "d/a/2"], "B": ["d/b/1"]})
    assert [str(n) for n in s.get_device_list("Multi/a", "A")] == ["d/a/1", "d/a/2"]
    assert [str(n) for n in s.get_device_list("Multi/a", "B")] == ["d/b/1"]


def test_export_import_cycle(store):
    store.export_device("sr/test/echo1", "127.0.0.1:4001", "TypesEcho/test")
    rec = store.get_device("sr/test/echo1")
    assert rec.exported and rec.endpoint == "127.0.0.1:4001" and rec.export_time > 0
    # last writer wins on re-export
    store.export_device("sr/test/echo1", "127.0.0.1:4002", "TypesEcho/test")
    assert store.get_device("sr/test/echo1").endpoint == "127.0.0.1:4002"


def test_import_never_exported_is_not_an_error(store):
    rec = store.get_device("sr/test/echo1")
    assert not rec.exported and rec.endpoint == ""


def test_export_unknown_device(store):
    with pytest.raises(DevFailed) as e:
        store.export_device("no/pe/x", "h:1", "TypesEcho/test")
    assert e.value.reason == "DEVICE_NOT_DEFINED"


def test_properties_round_trip(store):
    store.put_property("sr/plc/c1", {"InputAddresses": ["DB1.0", "DB1.2"]})
    got = store.get_property("sr/plc/c1", ["InputAddresses"])
    assert got == {"inputaddresses": ["DB1.0", "DB1.2"]}
    assert store.get_property("sr/plc/c1", ["Missing"]) == {"missing": []}
    store.delete_property("sr/plc/c1", ["InputAddresses"])
    assert store.get_property("sr/plc/c1", ["InputAddresses"]) == {"inputaddresses": []}
    store.delete_property("sr/plc/c1", ["InputAddresses"])  # idempotent


def test_browse(store):
    assert store.browse_devices("sr/*/*") == ["sr/test/echo1"]
    assert set(store.browse_devices("*/*/*")) == {"sr/test/echo1", SELF_DEVICE}
    with pytest.raises(DevFailed) as e:
        store.browse_devices("sr/*")
    assert e.value.reason == "MALFORMED_PATTERN"


def _oracle_match(pattern, name):
    parts = pattern.lower().split("/")
    nparts = name.lower().split("/")
    return len(parts) == len(nparts) and all(
        re.fullmatch(".*".join(re.escape(c) for c in p.split("*")), n)
        for p, n in zip(parts, nparts))


_word = st.text(alphabet="abcx1", min_size=1, max_size=3)
_pword = st.text(alphabet="abcx1*", min_size=1, max_size=3)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(_word, _word, _word), min_size=1, max_size=8, unique=True),
       st.tuples(_pword, _pword, _pword))
def test_browse_matches_linear_scan_oracle(names, pat):
    s = DbStore()
    devices = [f"{d}/{f}/{m}" for d, f, m in names]
    s.add_server("Fix/ture", "h", 1, {"C": devices})
    pattern = "/".join(pat)
    expected = sorted(n for n in devices + [SELF_DEVICE] if _oracle_match(pattern, n))
    assert s.browse_devices(pattern) == expected


def test_persistence_round_trip(tmp_path, store):
    store.export_device("sr/test/echo1", "127.0.0.1:4001", "TypesEcho/test")
    store.put_property("sr/plc/c1", {"Weird": ["a|b", "new\nline", "per%cent", ""]})
    path = str(tmp_path / "db.txt")
    store.save(path)
    loaded = DbStore.load(path)
    assert loaded.dump() == store.dump()
    assert loaded.get_property("sr/plc/c1")["weird"] == ["a|b", "new\nline", "per%cent", ""]
    assert loaded.get_device("sr/test/echo1").endpoint == "127.0.0.1:4001"


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=12), st.data())
def test_persistence_round_trip_random_mutations(tmp_path_factory, ops, data):
    s = DbStore()
    known = []
    for i, op in enumerate(ops):
        if op == 0:
            dev = f"d{i}/f/m"
            s.add_server(f"S{i}/a", "h", i % 3, {"C": [dev]})
            known.append(dev)
        elif op == 1 and known:
            s.export_device(known[-1], f"h:{1000 + i}", s.get_device(known[-1]).server_id)
        elif op == 2:
            s.put_property(f"own/er/{i % 2}", {f"p{i}": [data.draw(st.text(max_size=8))]})
        elif known:
            s.unexport_device(known[-1])
    path = str(tmp_path_factory.mktemp("db") / "db.txt")
    s.save(path)
    assert DbStore.load(path).dump() == s.dump()


def test_load_missing_file_gives_fresh_db(tmp_path):
    s = DbStore.load(str(tmp_path / "nope.txt"))
    assert s.get_device(SELF_DEVICE)


def test_corrupt_file_refused(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("[servers]\nonly|three|fields\n")
    with pytest.raises(DevFailed) as e:
        DbStore.load(str(path))
    assert e.value.reason == "CORRUPT_FILE"
    assert ":2:" in e.value.errors[-1].description  # line diagnostics


def test_referential_integrity_on_load(tmp_path):
    path = tmp_path / "dangling.txt"
    path.write_text("[servers]\n[devices]\na/b/c|C|ghost/x|0||0\n[properties]\n")
    with pytest.raises(DevFailed) as e:
        DbStore.load(str(path))
    assert e.value.reason == "CORRUPT_FILE"


def test_match_pattern_case_insensitive():
    assert match_pattern("SR/*/*", "sr/test/echo1")
    assert not match_pattern("sr/*/*", "sys/database/2")
