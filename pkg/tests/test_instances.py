import json

import pytest

from spinacc import instances
from spinacc.group_engine import GroupTooLarge

ROOT = __import__("pathlib").Path(__file__).resolve().parents[1]


def test_parse_construct():
    assert instances.parse_construct("gprime:d=4:var=1") == ("gprime", [], {"d": 4, "var": 1})
    assert instances.parse_construct("ical:A4")[1] == ["A4"]


def test_unknown_builder():
    with pytest.raises(instances.InstanceError):
        instances.build_construct("nosuch:3")


def test_example_file_matches_builder(corpus):
    p = instances.load_instance(ROOT / "instances" / "example1.json")
    G = p.instance
    assert G.order == 16 and G.level == "spin"
    assert set(G.labels) == {"a2", "b2", "a2b2"}
    ref = corpus.instance("example1")
    assert {G.matrix(x).key() for x in range(G.order)} == {ref.matrix(x).key() for x in range(ref.order)}


def test_json_roundtrip(corpus):
    G = corpus.instance("h123:2")
    obj = instances.instance_to_json(G)
    H = instances.parse_instance(json.loads(json.dumps(obj))).instance
    assert H.order == G.order


@pytest.mark.parametrize("bad", [
    {"n": 7, "M": 8},
    {"n": 6, "M": 8, "generators": []},
    {"n": 7, "M": 8, "generators": [{"rotation": {"plane": [1, 9], "num": 1, "den": 4}}]},
    {"n": 7, "M": 8, "generators": [{"matrix": [[2]]}]},
    {"n": 7, "M": 8, "generators": [{"spin": 1}]},
    {"n": 7, "M": 8, "generators": [{"z_B": [1]}]},
])
def test_bad_instances(bad):
    with pytest.raises(instances.InstanceError):
        instances.parse_instance(bad)


def test_max_order_option():
    obj = {"n": 7, "M": 8, "generators": [{"construct": "ical:A4"}], "options": {"max_order": 5}}
    with pytest.raises((GroupTooLarge, instances.InstanceError)):
        instances.parse_instance(obj)


def test_bad_json_reports_position(tmp_path):
    f = tmp_path / "x.json"
    f.write_text('{"n": 7,\n "M": }')
    with pytest.raises(instances.InstanceError) as e:
        instances.load_instance(f)
    assert ":2:" in str(e.value)
