import pytest

from lifo_resched.cli import main

E4 = "# worked example\n4 1\n25 1 45\n10 1 15\n5 1 10\n10 1 30\n"


@pytest.fixture
def e4_file(tmp_path):
    path = tmp_path / "e4.txt"
    path.write_text(E4)
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def kv(out):
    return dict(line.split("=", 1) for line in out.splitlines() if "=" in line and "," not in line)


def test_solve_numlate_with_tables(capsys, e4_file):
    code, out, _ = run(capsys, "solve", e4_file, "--objective", "numlate", "--dump-tables")
    assert code == 0
    assert kv(out)["value"] == "2"
    assert "1,4,1,5,5,-5,-20" in out.splitlines()


def test_solve_twct(capsys, e4_file):
    code, out, _ = run(capsys, "solve", e4_file, "--objective", "twct", "--stack", "2")
    values = kv(out)
    assert code == 0
    assert (values["delta"], values["value"], values["order"]) == ("-55", "95", "3 2 4 1")


@pytest.mark.parametrize("flag", ["--alt-dp", "--time-dp"])
def test_solve_wlate_methods(capsys, e4_file, flag):
    code, out, _ = run(capsys, "solve", e4_file, "--objective", "wlate", flag)
    assert code == 0 and kv(out)["value"] == "2"


def test_solve_phimax_with_omega(capsys, tmp_path):
    path = tmp_path / "i.txt"
    path.write_text(E4 + "omega 2 3\nphi weighted-tardiness\n")
    code, out, _ = run(capsys, "solve", path, "--objective", "phimax", "--stack", "3")
    _, ref, _ = run(capsys, "oracle", path, "--objective", "phimax", "--stack", "3")
    assert code == 0 and kv(out)["value"] == kv(ref)["value"]


def test_oracle_and_baseline(capsys, e4_file):
    code, out, _ = run(capsys, "oracle", e4_file, "--objective", "lmax")
    assert code == 0 and kv(out)["value"] == "5"
    code, out, _ = run(capsys, "baseline", e4_file, "--objective", "numlate")
    assert kv(out) == {"objective": "numlate", "value": "1", "order": "3 2 4 1"}
    code, out, _ = run(capsys, "baseline", e4_file, "--objective", "wlate")
    assert kv(out)["value"] == "1"


def test_apply(capsys, e4_file, tmp_path):
    script = tmp_path / "m.txt"
    script.write_text("1 2\n")
    code, out, _ = run(capsys, "apply", e4_file, script)
    assert code == 0
    assert kv(out)["order"] == "2 1 3 4"
    assert "step,occupancy,event" in out
    trace = tmp_path / "t.csv"
    run(capsys, "apply", e4_file, script, "--trace", trace)
    assert trace.read_text().startswith("step,occupancy,event\n1,1,push 1")


@pytest.mark.parametrize("script", ["1 3\n2 4\n", "1 3\n2 3\n", "x y\n"])
def test_apply_bad_scripts(capsys, e4_file, tmp_path, script):
    path = tmp_path / "m.txt"
    path.write_text(script)
    code, _, err = run(capsys, "apply", e4_file, path)
    assert code == 1 and err.startswith("error:")


def test_input_errors(capsys, tmp_path):
    assert run(capsys, "solve", tmp_path / "missing", "--objective", "lmax")[0] == 1
    bad = tmp_path / "bad.txt"
    bad.write_text("2 1\n1 1\n")
    assert run(capsys, "solve", bad, "--objective", "lmax")[0] == 1
    assert run(capsys, "gen", "partition", "--values", "1,2,3")[0] == 1


def test_gen(capsys, tmp_path):
    code, out, _ = run(capsys, "gen", "partition", "--values", "3,1,2,2")
    assert code == 0 and "4 2\n3 3 4\n" in out
    code, _, _ = run(capsys, "gen", "random", "--n", "6", "--count", "3", "--out", tmp_path / "inst")
    assert code == 0 and len(list((tmp_path / "inst").iterdir())) == 3
    _, a, _ = run(capsys, "gen", "random", "--n", "6", "--seed", "4")
    _, b, _ = run(capsys, "gen", "random", "--n", "6", "--seed", "4")
    assert a == b


def test_bench_and_plot(capsys, tmp_path):
    out_dir = tmp_path / "study"
    code, out, _ = run(capsys, "bench", "--n", "5", "--count", "1", "--s-max", "2", "--workers", "1",
                       "--out", out_dir)
    assert code == 0
    assert (out_dir / "results.csv").exists() and (out_dir / "twct.svg").exists()
    assert "digest=" in out
    code, out, _ = run(capsys, "plot", out_dir / "summary.csv", "--out", tmp_path / "figs")
    assert code == 0 and (tmp_path / "figs" / "numlate.svg").exists()


def test_bench_invariant_exit_code(capsys, tmp_path, monkeypatch):
    from lifo_resched import bench

    monkeypatch.setattr(bench, "audit", lambda records: ["forced"])
    code, _, err = run(capsys, "bench", "--n", "4", "--count", "1", "--s-max", "1", "--workers", "1",
                       "--out", tmp_path, "--no-plot")
    assert code == 2 and "forced" in err
