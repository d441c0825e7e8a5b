import json

import pytest

from freefactor import projections as pj, serialize as se
from freefactor.errors import SchemaError
from freefactor.words import abc_alphabet, word_from_str


class TestGraphRoundTrip:
    def test_rose(self):
        T = pj.rose(abc_alphabet(3))
        obj = se.graph_to_json(T)
        back = se.graph_from_json(obj)
        assert back == T
        assert se.graph_to_json(back) == obj

    def test_theta(self):
        A2 = abc_alphabet(2)
        T = pj.MarkedGraph(
            A2,
            2,
            (
                (0, 1, word_from_str(A2, "a")),
                (0, 1, word_from_str(A2, "b")),
                (0, 1, word_from_str(A2, "b a")),
            ),
            0,
        )
        assert se.graph_from_json(se.graph_to_json(T)) == T

    def test_bad_edge_vertex(self):
        T = pj.rose(abc_alphabet(2))
        obj = se.graph_to_json(T)
        obj["edges"][1]["to"] = 7
        with pytest.raises(SchemaError) as e:
            se.graph_from_json(obj)
        assert "edges[1].to" in str(e.value)

    def test_bad_word_token(self):
        T = pj.rose(abc_alphabet(2))
        obj = se.graph_to_json(T)
        obj["edges"][0]["label"] = "z q"
        with pytest.raises(SchemaError) as e:
            se.graph_from_json(obj)
        assert "edges[0].label" in str(e.value)

    def test_inverse_token(self):
        T = pj.rose(abc_alphabet(2))
        obj = se.graph_to_json(T)
        obj["edges"][0]["label"] = "b a^-1 a b^-1 a"
        back = se.graph_from_json(obj)
        assert str(back.edges[0][2]) == "a"

    def test_missing_key(self):
        with pytest.raises(SchemaError) as e:
            se.graph_from_json({"alphabet": ["a"]})
        assert "vertices" in str(e.value)


class TestFixtures:
    def test_shipped_list(self):
        names = se.list_fixtures()
        assert {"pentagon-f5", "pentagon-support-f6", "overlap-chain-f3"} <= set(names)

    def test_roundtrip_byte_identical(self):
        for name in se.list_fixtures():
            text = se.fixture_path(name).read_text()
            system = se.system_from_json(json.loads(text))
            assert se.canonical_dumps(se.system_to_json(system)) == text

    def test_load_verified(self):
        system = se.load_fixture("pentagon-f5", verify=True)
        assert len(system.maps) == 5

    def test_schema_error_paths(self):
        obj = json.loads(se.fixture_path("pentagon-f5").read_text())
        obj["generators"][2]["images"] = obj["generators"][2]["images"][:-1]
        with pytest.raises(SchemaError) as e:
            se.system_from_json(obj)
        assert "generators[2].images" in str(e.value)

    def test_non_automorphism_rejected(self):
        obj = json.loads(se.fixture_path("pentagon-f5").read_text())
        obj["generators"][0]["images"] = ["x0 x0", "x1", "x2", "x3", "x4"]
        with pytest.raises(SchemaError) as e:
            se.system_from_json(obj)
        assert "generators[0]" in str(e.value)

    def test_unknown_fixture(self):
        with pytest.raises(SchemaError):
            se.load_fixture("does-not-exist")
