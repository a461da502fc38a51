import json
import random
import subprocess
import sys
from fractions import Fraction as F
from importlib import resources

import pytest

import helpers
from tropws import catalog, io
from tropws.cli import main
from tropws.divisor import Divisor, canonical_divisor
from tropws.region import Region
from tropws.weierstrass import sweep


def _golden(name: str) -> str:
    return resources.files("tropws").joinpath("data", name).read_text(encoding="utf-8")


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


# ---------------------------------------------------------------- JSON round trips


def test_graph_round_trip():
    for G in helpers.catalog_graphs(4):
        H = io.graph_from_json(json.loads(io.dumps(io.graph_to_json(G))))
        assert H.vertices == G.vertices
        assert [(e.u, e.v, e.length) for e in H.edges] == [(e.u, e.v, e.length) for e in G.edges]


def test_lengths_must_be_exact():
    obj = {"vertices": ["a", "b"], "edges": [{"u": "a", "v": "b", "len": 0.5}]}
    with pytest.raises(ValueError, match="strings"):
        io.graph_from_json(obj)
    with pytest.raises(ValueError, match="malformed"):
        io.graph_from_json({"vertices": ["a"]})


def test_points_and_divisors_round_trip():
    rng = random.Random(71)
    for G in helpers.catalog_graphs(3):
        for _ in range(5):
            D = helpers.random_divisor(rng, G, -2, 6)
            obj = json.loads(io.dumps(io.divisor_to_json(G, D)))
            assert io.divisor_from_json(G, obj) == D
            p = helpers.random_point(rng, G)
            assert io.point_from_json(G, io.point_to_json(G, p)) == p


def test_divisor_json_rejects_bad_entries():
    G = catalog.dipole(3).graph
    with pytest.raises(ValueError):
        io.divisor_from_json(G, {"at": "v", "c": 1})
    with pytest.raises(ValueError, match="integer"):
        io.divisor_from_json(G, [{"at": "v", "c": 1.5}])
    with pytest.raises(ValueError):
        io.point_from_json(G, {"where": "v"})
    # repeated points add up
    assert io.divisor_from_json(G, [{"at": "v", "c": 1}, {"at": {"vertex": "v"}, "c": 2}]) == Divisor.point(
        G.vertex_point("v"), 3
    )


def test_parse_divisor_text():
    G = catalog.dipole(3).graph
    v, w = G.vertex_point("v"), G.vertex_point("v'")
    m = G.point(0, F(1, 3))
    assert io.parse_divisor_text(G, "2*v + e0:1/3 - v'") == Divisor.point(v, 2) + Divisor.point(m) - Divisor.point(w)
    assert io.parse_divisor_text(G, "K") == canonical_divisor(G)
    assert io.parse_divisor_text(G, "2*K - 4*v") == Divisor.point(w, 4)
    with pytest.raises(ValueError):
        io.parse_divisor_text(G, "3*nowhere")


def test_region_round_trip():
    G = catalog.dipole(3).graph
    R = Region(G, {0: [(F(1, 3), F(2, 3))], 2: [(F(1, 2), F(1, 2))]}, [G.vertex_point("v").vertex])
    assert io.region_from_json(G, json.loads(io.dumps(io.region_to_json(R)))) == R
    with pytest.raises(ValueError):
        io.region_from_json(G, [{"nothing": 1}])


def test_edge_map_round_trip():
    for fam in (catalog.dipole(3), catalog.k4(), catalog.theta_circle("1/3")):
        G = fam.graph
        K = canonical_divisor(G)
        gm = sweep(G, K)
        for m in gm.edges:
            back = io.edge_map_from_json(G, json.loads(io.dumps(io.edge_map_to_json(G, m))), K.degree)
            assert list(back.pieces()) == list(m.pieces())


# ---------------------------------------------------------------- command line


def test_info(capsys):
    rc, out, _ = run(capsys, "info", "--family", "dipole", "--genus", "3")
    assert rc == 0
    assert "K = 2(v) + 2(v')" in out and "v0 = e0:1/2" in out
    rc, out, _ = run(capsys, "info", "--family", "k4", "--json")
    data = json.loads(out)
    assert data["genus"] == 3 and data["degree_K"] == 4 and data["hyperelliptic"] is False


def test_rank_and_reduce(capsys):
    rc, out, _ = run(capsys, "rank", "--family", "dipole", "--genus", "3", "--divisor", "2*e0:1/2")
    assert rc == 0 and out.splitlines()[0] == "1"
    rc, out, _ = run(capsys, "rank", "--family", "dipole", "--genus", "3", "--json")
    assert json.loads(out) == {"rank": 2, "method": "canonical"}
    rc, out, _ = run(capsys, "reduce", "--family", "dipole", "--genus", "3", "--divisor", "4*v'", "--at", "v", "--trace")
    assert rc == 0
    assert out.splitlines() == ["v-reduced: 4(v)", "  fire δ=1 vertices {v'} partial edges {-}"]
    rc, out, _ = run(
        capsys, "reduce", "--family", "dipole", "--genus", "3", "--divisor", "4*v'", "--at", "v", "--slopes-at", "v", "--json"
    )
    data = json.loads(out)
    assert sum(s["slope"] for s in data["witness_slopes_at"]["slopes"]) == -4


def test_gaps(capsys):
    rc, out, _ = run(capsys, "gaps", "--family", "dipole", "--genus", "3", "--at", "e0:1/2")
    assert rc == 0 and out.strip() == "(1,3,5) wt=3"
    rc, out, _ = run(capsys, "gaps", "--family", "dipole", "--genus", "3", "--at", "e1:1/3", "--json")
    assert json.loads(out) == {"at": {"edge": "e1", "t": "1/3"}, "gaps": [1, 2, 4], "wt": 1}


@pytest.mark.parametrize("g", [3, 4])
def test_sweep_outputs_match_golden_files(capsys, g):
    rc, out, _ = run(capsys, "sweep", "--family", "dipole", "--genus", str(g), "--edge", "e0", "--table")
    assert rc == 0 and out == _golden(f"dipole{g}_e0.txt")
    rc, out, _ = run(capsys, "sweep", "--family", "dipole", "--genus", str(g), "--json")
    assert rc == 0 and out == _golden(f"dipole{g}.json")


def test_sweep_text_and_bisect(capsys):
    rc, out, _ = run(capsys, "sweep", "--family", "dipole", "--genus", "3", "--edge", "e2")
    assert "e2 1/2 (1,3,5) wt=3" in out.splitlines()
    rc, again, _ = run(capsys, "sweep", "--family", "dipole", "--genus", "3", "--edge", "e2", "--method", "bisect")
    assert again == out


def test_wl_commands(capsys):
    args = ("--family", "dipole", "--genus", "3")
    rc, out, _ = run(capsys, "wl", *args)
    assert out.strip() == "e0:[1/3,2/3], e1:[1/3,2/3], e2:[1/3,2/3], e3:[1/3,2/3]"
    rc, out, _ = run(capsys, "wl-ge", *args, "--seq", "1,3,5")
    assert out.strip() == "e0:{1/2}, e1:{1/2}, e2:{1/2}, e3:{1/2}"
    rc, out, _ = run(capsys, "maximal", *args)
    assert out.splitlines()[-1] == "4 maximal loci, Σ wt = 12"


def test_mu_command(capsys):
    region = json.dumps({"edge": "e0", "intervals": [["1/3", "2/3"]]})
    rc, out, _ = run(capsys, "mu", "--family", "dipole", "--genus", "3", "--region", region)
    assert rc == 0 and out.strip() == "2"


def test_verify_and_graph_file(capsys, tmp_path):
    rc, out, _ = run(capsys, "verify", "--family", "k4")
    assert rc == 0 and "✗" not in out
    path = tmp_path / "g.json"
    path.write_text(io.dumps(io.graph_to_json(catalog.dipole(3).graph)))
    rc, out, _ = run(capsys, "verify", "--graph", str(path), "--json")
    data = json.loads(out)
    assert rc == 0 and data["ok"] and data["data"]["mu"] == [2, 2, 2, 2]


def test_classify_and_oracle(capsys):
    rc, out, _ = run(capsys, "classify", "--genus", "2")
    assert rc == 0 and out.splitlines()[-1].endswith("✓")
    rc, out, _ = run(capsys, "oracle-check", "--cases", "10", "--seed", "1")
    assert rc == 0 and "disagreements: 0" in out


def test_family_command(capsys):
    rc, out, _ = run(capsys, "family", "--name", "circle-dipole")
    data = json.loads(out)
    assert rc == 0 and data["genus"] == 4 and set(data["marked"]) >= {"p", "q"}


@pytest.mark.parametrize(
    "argv",
    [
        ["rank", "--graph", "{bad"],
        ["rank"],
        ["gaps", "--family", "dipole", "--genus", "3"],
        ["rank", "--family", "nope"],
        ["wl-ge", "--family", "dipole", "--genus", "3"],
        ["mu", "--family", "dipole", "--genus", "3"],
        ["classify", "--genus", "7"],
        ["reduce", "--family", "dipole", "--genus", "3", "--at", "e9:1/2"],
        ["sweep", "--family", "dipole", "--genus", "4", "--edge", "e0", "--method", "bisect", "--qmax", "2", "--grid", "4"],
    ],
)
def test_input_errors_exit_1(capsys, argv):
    rc, out, err = run(capsys, *argv)
    assert rc == 1 and out == ""
    assert err.startswith(("input error:", "error:"))


def test_failed_check_exits_2(capsys, monkeypatch):
    monkeypatch.setitem(catalog.ACHIEVABLE, 2, [(1, 2)])
    rc, out, _ = run(capsys, "classify", "--genus", "2")
    assert rc == 2 and out.splitlines()[-1].endswith("✗")


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "tropws.cli", "gaps", "--family", "k4", "--at", "e0:1/2"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert res.returncode == 0 and res.stdout.endswith("\n") and "wt=" in res.stdout
