"""End-to-end runs of the command line through a subprocess."""

import json
import subprocess
import sys


def run(*argv):
    return subprocess.run(
        [sys.executable, "-m", "eqideal.cli", *argv],
        capture_output=True,
        text=True,
        timeout=120,
    )


def test_depends_true_and_false():
    r = run("depends", "-n", "2", "--h", "ba,abbA", "--g", "a")
    assert r.returncode == 0
    assert r.stdout.strip() == "depends=true"
    r = run("depends", "-n", "2", "--h", "a", "--g", "b")
    assert r.returncode == 0
    assert r.stdout.strip() == "depends=false"


def test_trivial_subgroup_flag():
    r = run("depends", "-n", "2", "--h", "", "--g", "a")
    assert r.returncode == 0
    assert r.stdout.strip() == "depends=false"


def test_mindeg_text_output():
    r = run("mindeg", "-n", "2", "--h", "ba,abbA", "--g", "a")
    assert r.returncode == 0
    lines = r.stdout.splitlines()
    assert lines[0] == "d_min=4"
    assert lines[1] == "witness=~h1 x ~h1 ~x h2 x x"
    assert lines[2] == "witness_path_length_bound=2304"


def test_mindeg_json_witness_roundtrips():
    r = run("mindeg", "-n", "2", "--h", "ba,abbA", "--g", "a", "--json")
    assert r.returncode == 0
    blob = json.loads(r.stdout)
    assert blob["d_min"] == 4
    from eqideal.ideal import normal_generators, problem_from_strings
    from eqideal.words import equation_word, evaluate

    p = problem_from_strings(2, ["ba", "abbA"], ["a"])
    pres = normal_generators(p)
    w = equation_word(blob["witness"], len(pres.h_basis))
    assert len(evaluate(w, list(pres.h_basis), list(p.g_values))) == 0


def test_generators_text_output():
    r = run("generators", "-n", "2", "--h", "ba,abbA", "--g", "a")
    assert r.returncode == 0
    lines = r.stdout.splitlines()
    assert lines[0] == "h_basis = ba, abbA"
    assert lines[1] == "generators = x ~h1 ~x h2 x x ~h1"
    assert "parity = all-even" in lines


def test_degree_decision():
    r = run("degree", "-n", "2", "--h", "ba,abbA", "--g", "a", "4")
    assert r.returncode == 0
    assert "exists=true" in r.stdout.splitlines()
    r = run("degree", "-n", "2", "--h", "ba,abbA", "--g", "a", "2")
    assert r.returncode == 0
    assert "exists=false" in r.stdout.splitlines()


def test_degree_multi_target():
    r = run("degree", "-n", "2", "--h", "ba,abbA", "--g", "a,b", "1", "1")
    assert r.returncode == 0
    assert "dvec=1,1" in r.stdout.splitlines()
    assert "exists=true" in r.stdout.splitlines()


def test_degset_json():
    r = run("degset", "-n", "2", "--h", "b,ababa", "--g", "a", "--json")
    assert r.returncode == 0
    blob = json.loads(r.stdout)
    assert blob["d_min"] == 2
    assert blob["degree_set"]["case"] == "odd-present"
    assert blob["degree_set"]["base"] == "N"
    assert blob["degree_set"]["exceptional"] == [1]


def test_input_error_exits_2():
    r = run("mindeg", "-n", "2", "--h", "ba!!", "--g", "a")
    assert r.returncode == 2
    assert "error:" in r.stderr


def test_independent_instance_exits_2():
    r = run("mindeg", "-n", "2", "--h", "aa", "--g", "b")
    assert r.returncode == 2


def test_fold_emits_stage_files(tmp_path):
    out = tmp_path / "stages"
    r = run("fold", "-n", "2", "--h", "ba,abbA", "--g", "a",
            "--emit-stages", str(out))
    assert r.returncode == 0
    lines = r.stdout.splitlines()
    assert "fold_steps=4" in lines
    assert "rank_preserving_steps=3" in lines
    assert "rank=2" in lines
    names = sorted(f.name for f in out.iterdir())
    assert names == ["stage_%03d.dot" % i for i in range(5)]
    for f in out.iterdir():
        assert f.read_text().startswith("digraph")


def test_oracle_command():
    r = run("oracle", "-n", "2", "--h", "b,ababa", "--g", "a", "--cap-len", "14")
    assert r.returncode == 0
    lines = r.stdout.splitlines()
    assert lines[0] == "cap_len=14"
    assert lines[1] == "loops=2"
    assert lines[2] == "len=10 degree=3 equation=~h1 ~x ~h1 ~x h2 ~x"


def test_moves_trace_command():
    r = run("moves-trace", "-n", "2", "--h", "b,ababa", "--g", "a")
    assert r.returncode == 0
    lines = r.stdout.splitlines()
    assert "path_length=10" in lines
    assert "couples=5" in lines


def test_report_writes_figures_and_tables(tmp_path):
    out = tmp_path / "rep"
    r = run("report", "-n", "2", "--h", "ba,abbA", "--g", "a", "--out", str(out))
    assert r.returncode == 0
    names = {f.name for f in out.iterdir()}
    assert {"presentation.json", "degrees.json", "summary.csv",
            "wedge.png", "fold.png", "degrees.png"} <= names
    blob = json.loads((out / "presentation.json").read_text())
    assert blob["generators"] == ["x ~h1 ~x h2 x x ~h1"]
    header = (out / "summary.csv").read_text().splitlines()[0]
    assert header.split(",")[0] == "key"


def test_byte_identical_reruns():
    argv = ("degset", "-n", "2", "--h", "b,ababa", "--g", "a", "--json")
    first = run(*argv)
    second = run(*argv)
    assert first.returncode == second.returncode == 0
    assert first.stdout == second.stdout
    argv = ("generators", "-n", "2", "--h", "aaBA,aaa,baB", "--g", "aaB")
    assert run(*argv).stdout == run(*argv).stdout
