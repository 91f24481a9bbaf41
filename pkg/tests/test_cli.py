import json

import pytest

from corpus import DATA
from tightspan.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_hull_fivepoint(capsys, tmp_path):
    out = tmp_path / "h.json"
    code, stdout, _ = run(capsys, "hull", "--input", str(DATA / "fivepoint.json"), "--out", str(out))
    assert code == 0
    assert "0-cells=5" in stdout and "2-cells=3" in stdout
    doc = json.loads(out.read_text())
    assert doc["summary"]["edge_lengths"] == [1, 2]
    assert doc["summary"]["classes_per_dim"]["2"] == 1


def test_hull_cube_and_cycle(capsys):
    code, stdout, err = run(capsys, "hull", "--gen", "hypercube:3")
    assert code == 0 and "dim=4" in err
    assert json.loads(stdout)["summary"]["dim"] == 4
    code, stdout, _ = run(capsys, "hull", "--gen", "cycle:6", "--subdivide")
    s = json.loads(stdout)["summary"]
    assert s["cells_per_dim"] == {"0": 8, "1": 12, "2": 6, "3": 1}
    assert "subdivision_simplices_per_dim" in s


def test_hull_formats(capsys):
    code, stdout, _ = run(capsys, "hull", "--gen", "cycle:4", "--format", "off")
    assert code == 0 and stdout.startswith("nOFF")
    code, stdout, _ = run(capsys, "hull", "--gen", "cycle:4", "--format", "csv")
    assert stdout.startswith("id,dim")


def test_space_reports(capsys):
    _, stdout, _ = run(capsys, "space", "--gen", "hypercube:3")
    doc = json.loads(stdout)
    assert doc["min_beta"] == 1 and doc["discretely_geodesic"]
    _, stdout, _ = run(capsys, "space", "--gen", "path:5")
    doc = json.loads(stdout)
    assert doc["delta"] == 0 and doc["min_beta"] == 1
    _, stdout, _ = run(capsys, "space", "--gen", "cycle:8")
    doc = json.loads(stdout)
    assert {c["cone_count"] for c in doc["cones"]} == {8}
    assert doc["stability_at_delta_plus_one"]["holds"]
    assert len(doc["witness_below_min_beta"]) == 4


def test_space_interior_only(capsys):
    _, stdout, _ = run(capsys, "space", "--gen", "zn_ball:2,3,l1", "--interior-only")
    doc = json.loads(stdout)
    assert doc["interior"] == {"center": 0, "radius": 3}


def test_bicombing_and_vertices(capsys):
    code, stdout, _ = run(capsys, "bicombing", "--gen", "cycle:4", "0", "2", "1/2")
    doc = json.loads(stdout)
    assert code == 0 and doc["result"] == [1, 1, 1, 1] and doc["converged_exactly"]
    code, stdout, _ = run(capsys, "vertices", "--input", str(DATA / "sixpoint.json"))
    assert len(json.loads(stdout)["vertices"]) == 10


def test_action(capsys):
    code, stdout, _ = run(capsys, "action", "--gen", "cycle:4", "--subgroup", str(DATA / "c4_rotations.json"))
    doc = json.loads(stdout)
    assert code == 0 and doc["group_order"] == 4
    assert doc["fixed_point_function"] == [1, 1, 1, 1]


def test_exit_codes(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"distances": [[0, 1], [2, 0]]}))
    assert run(capsys, "hull", "--input", str(bad))[0] == 1
    assert run(capsys, "hull", "--input", str(tmp_path / "missing.json"))[0] == 1
    assert run(capsys, "hull", "--gen", "hypercube:3", "--budget", "10")[0] == 2
    assert run(capsys, "hull", "--gen", "hypercube:30")[0] == 2
    assert run(capsys, "hull", "--gen", "cycle:4", "--budget", "0")[0] == 1
    sub = tmp_path / "sub.json"
    sub.write_text("[[1, 2, 3, 0]]")
    assert run(capsys, "action", "--gen", "cycle:4", "--subgroup", str(sub))[0] == 1


def test_requires_one_source(capsys):
    with pytest.raises(SystemExit):
        main(["hull"])


def test_plots(tmp_path, capsys):
    pytest.importorskip("matplotlib")
    png = tmp_path / "hull.png"
    assert run(capsys, "hull", "--input", str(DATA / "sixpoint.json"), "--plot", str(png))[0] == 0
    assert png.stat().st_size > 1000
    png = tmp_path / "space.png"
    assert run(capsys, "space", "--gen", "cycle:6", "--plot", str(png))[0] == 0
    assert png.stat().st_size > 1000
