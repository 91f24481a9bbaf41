import json
from fractions import Fraction

import pytest

from corpus import DATA, hull, space
from tightspan import io
from tightspan.errors import Disconnected, InvalidMetric


@pytest.mark.parametrize("q, out", [(Fraction(3, 2), "3/2"), (Fraction(4, 2), 2), (0, 0),
                                    (Fraction(-1, 3), "-1/3")])
def test_fmt_rational(q, out):
    assert io.fmt_rational(q) == out


def test_load_metric_and_graph(tmp_path):
    M = io.load_space(DATA / "fivepoint.json")
    assert M.n == 5 and M.labels[0] == "x1"
    G = io.load_space(DATA / "path3.graph.json")
    assert G.d[0][2] == 2
    p = tmp_path / "g.json"
    p.write_text(json.dumps({"vertices": 3, "edges": [[0, 1]]}))
    with pytest.raises(Disconnected):
        io.load_space(p)


def test_bad_metric_lists_violations(tmp_path):
    p = tmp_path / "m.json"
    p.write_text(json.dumps({"distances": [[0, 1, 3], [1, 0, 1], [3, 1, 0]]}))
    with pytest.raises(InvalidMetric) as e:
        io.load_space(p)
    assert e.value.violations[0].kind == "TriangleViolation"
    p.write_text(json.dumps({"distances": [[0, 0.5], [0.5, 0]]}))
    with pytest.raises(InvalidMetric):
        io.load_space(p)


def test_metric_roundtrip():
    M = space("weighted")
    assert io.metric_from_json(json.loads(io.dumps(io.metric_to_json(M)))) == M


def test_complex_json_roundtrip():
    cx = hull("sixpoint")
    doc = json.loads(io.dumps(io.complex_to_json(cx)))
    assert doc["vertices"][0]["values"][0] in (0, 1, 2, "1/2", "3/2")
    back = io.complex_from_json(doc, cx.metric)
    assert back.vertices == cx.vertices
    assert [c.admissible_set for c in back.cells] == [c.admissible_set for c in cx.cells]
    assert back.face_relation == cx.face_relation
    assert back.isometry_class == cx.isometry_class


def test_off_export():
    cx = hull("c4")
    lines = io.complex_to_off(cx).splitlines()
    assert lines[0] == "nOFF" and lines[1] == "4"
    assert lines[2] == "4 1 4"
    face = lines[-1].split()
    assert face[0] == "4"
    ring = [int(v) for v in face[1:]]
    # consecutive polygon vertices are joined by edges of the square
    edges = {cx.cells[i].vertex_ids for i in cx.cells_of_dim(1)}
    for a, b in zip(ring, ring[1:] + ring[:1]):
        assert (min(a, b), max(a, b)) in edges


def test_off_lists_free_edges():
    cx = hull("k3")
    lines = io.complex_to_off(cx).splitlines()
    assert lines[2] == "4 3 3"
    assert all(line.startswith("2 ") for line in lines[-3:])


def test_csv_export():
    rows = io.complex_to_csv(hull("fivepoint")).splitlines()
    assert rows[0].startswith("id,dim,isometry_class")
    assert len(rows) == 1 + len(hull("fivepoint").cells)
    assert any(r.endswith(",2") for r in rows)


def test_subgroup_file():
    G = io.load_subgroup(DATA / "c4_rotations.json")
    assert len(G) == 4 and G[1] == (1, 2, 3, 0)
