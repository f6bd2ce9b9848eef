import itertools
import subprocess
import sys

import pytest

from paramstream.cli import main
from paramstream.oracles import CnfInstance, format_dimacs, sat2_solve
from paramstream.stream import insert_only, write_stream


def run_cli(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    fields = dict(line.split("=", 1) for line in out.out.splitlines() if "=" in line)
    return code, fields, out.err


@pytest.fixture
def files(tmp_path):
    p6 = tmp_path / "p6.txt"
    write_stream(insert_only(6, [(i, i + 1) for i in range(5)]), p6)
    tri = tmp_path / "tri.txt"
    write_stream(insert_only(3, [(0, 1), (1, 2), (0, 2)]), tri)
    tree = tmp_path / "tree.txt"
    write_stream(insert_only(7, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (5, 6)]), tree)
    return {"p6": p6, "tri": tri, "tree": tree, "dir": tmp_path}


def test_run_examples(capsys, files):
    code, f, _ = run_cli(capsys, "run", "path", "--k", 5, "--input", files["p6"])
    assert code == 0 and f["decision"] == "YES" and f["passes"] == "1" and f["threshold"] == "30"
    code, f, _ = run_cli(capsys, "run", "vc-branching", "--k", 1, "--input", files["tri"])
    assert code == 0 and f["decision"] == "NO" and f["passes"] == "2"
    code, f, _ = run_cli(capsys, "run", "treewidth", "--k", 1, "--input", files["tree"])
    assert code == 0 and f["decision"] == "YES"
    code, f, _ = run_cli(capsys, "run", "vc-ic", "--k", 2, "--input", files["tri"])
    assert f["decision"] == "YES" and len(f["witness"].split(",")) == 2
    code, f, _ = run_cli(capsys, "run", "bidim:fvs", "--k", 0, "--input", files["tri"], "--tau", 2)
    assert f["decision"] == "NO" and f["threshold"] == str(2 * 3)


def test_report_is_reproducible(capsys, files):
    runs = []
    for _ in range(2):
        _, f, _ = run_cli(capsys, "run", "fvs", "--k", 1, "--input", files["tri"])
        f.pop("wall_time")
        runs.append(f)
    assert runs[0] == runs[1]


def test_oracle_examples(capsys, files):
    for problem, value in (("vc", "2"), ("fvs", "1"), ("girth", "3"), ("path", "2"), ("treewidth", "2"), ("domset", "1")):
        code, f, _ = run_cli(capsys, "oracle", problem, "--input", files["tri"])
        assert code == 0 and f["value"] == value
    _, f, _ = run_cli(capsys, "oracle", "girth", "--input", files["p6"])
    assert f["value"] == "inf"


def test_input_errors(capsys, files):
    bad = files["dir"] / "bad.txt"
    bad.write_text("n 3 insert-only\n0 1\n2 2\n")
    code, _, err = run_cli(capsys, "run", "path", "--k", 1, "--input", bad)
    assert code == 2 and "line 3" in err
    code, _, err = run_cli(capsys, "run", "vc-ic", "--k", 1, "--input", files["tri"], "--model", "insert-delete")
    assert code == 2
    dyn = files["dir"] / "dyn.txt"
    dyn.write_text("n 3 insert-delete\n+ 0 1\n+ 1 2\n- 0 1\n")
    code, _, err = run_cli(capsys, "run", "vc-branching", "--k", 1, "--input", dyn)
    assert code == 2 and "insert-only" in err
    code, f, _ = run_cli(capsys, "run", "path", "--k", 1, "--input", dyn)
    assert code == 0 and f["decision"] == "YES" and f["model"] == "insert-delete"
    code, _, _ = run_cli(capsys, "run", "nonsense", "--k", 1, "--input", files["tri"])
    assert code == 2
    code, _, _ = run_cli(capsys, "run", "path", "--k", 1, "--input", files["dir"] / "missing.txt")
    assert code == 2


def test_desk_bound_refusal(capsys, tmp_path):
    big = tmp_path / "big.txt"
    write_stream(insert_only(30, [(u, v) for u, v in itertools.combinations(range(30), 2) if (u + 2 * v) % 5 == 0]), big)
    code, _, err = run_cli(capsys, "oracle", "domset", "--input", big)
    assert code == 3 and "desk bound" in err


@pytest.mark.parametrize(
    "reduction, params",
    [
        ("perm-5path", ["N=4", "delta=3,1,4,2", "I=5"]),
        ("perm-treewidth1", ["N=4"]),
        ("perm-fvs0", ["N=2"]),
        ("index-domset3", ["B=101101110", "I=4"]),
        ("index-girth3", ["N=9"]),
        ("index-2sat", ["N=9"]),
        ("domset-est", ["n=16", "beta=8", "theta=0"]),
    ],
)
def test_gen_verify_round_trip(capsys, tmp_path, reduction, params):
    out = tmp_path / f"{reduction}.txt"
    code, f, _ = run_cli(capsys, "gen", reduction, "--params", *params, "--seed", 7, "--out", out)
    assert code == 0
    truth = (tmp_path / f"{reduction}.txt.truth").read_text()
    assert truth.startswith("truth ")
    if reduction == "domset-est":
        assert truth.strip() == "truth opt=2"
    code, f, _ = run_cli(capsys, "verify", reduction, out)
    assert code == 0 and f["result"] == "pass"


def test_verify_detects_tampering(capsys, tmp_path):
    out = tmp_path / "g.txt"
    run_cli(capsys, "gen", "index-girth3", "--params", "B=1111", "I=2", "--out", out)
    (tmp_path / "g.txt.truth").write_text("truth bit=0\n")
    code, f, _ = run_cli(capsys, "verify", "index-girth3", out)
    assert code == 1 and f["result"] == "fail"


def test_gen_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    run_cli(capsys, "gen", "perm-5path", "--params", "N=4", "--seed", 5, "--out", a)
    run_cli(capsys, "gen", "perm-5path", "--params", "N=4", "--seed", 5, "--out", b)
    strip = lambda p: [l for l in p.read_text().splitlines() if not l.startswith("#")]  # noqa: E731
    assert strip(a) == strip(b)


def test_sat_naive_matches_solver(capsys, tmp_path):
    import random

    rng = random.Random(4)
    for trial in range(30):
        nv = rng.randint(1, 6)
        clauses = []
        for _ in range(rng.randint(0, 10)):
            vs = rng.sample(range(1, nv + 1), rng.randint(1, min(2, nv)))
            clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
        cnf = CnfInstance(nv, tuple(clauses))
        path = tmp_path / f"c{trial}.cnf"
        path.write_text(format_dimacs(cnf))
        code, f, _ = run_cli(capsys, "run", "sat-naive", "--k", 0, "--input", path)
        assert code == 0 and (f["decision"] == "YES") == sat2_solve(cnf)


def test_module_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "paramstream", "oracle", "vc", "--input", str(files["tri"])],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and "value=2" in proc.stdout
