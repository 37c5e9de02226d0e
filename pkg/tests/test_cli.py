import pytest

from barnette.cli import main
from barnette.planar_core import format_triangulation, parse_triangulation


@pytest.fixture
def k4_file(tmp_path, k4):
    p = tmp_path / "k4.tri"
    p.write_text(format_triangulation(k4))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_catalog_check(capsys):
    code, out, _ = run(capsys, "catalog", "check")
    assert code == 0
    assert "fail=0" in out


def test_catalog_check_broken(tmp_path, capsys):
    (tmp_path / "bad.cat").write_text("[pattern site 4 3]\n")
    code, _, err = run(capsys, "catalog", "check", str(tmp_path))
    assert code == 1 and "error" in err


def test_verify_k4(capsys, k4_file):
    code, out, _ = run(capsys, "verify", k4_file, "1 2")
    assert code == 0
    assert "is_hamiltonian=true" in out


def test_verify_negative(capsys, k4_file):
    code, out, _ = run(capsys, "verify", k4_file, "1")
    assert code == 1 and "failure=missing-face" in out


def test_verify_required_flavor(capsys, k4_file):
    assert run(capsys, "verify", k4_file, "1,2", "--flavor", "pm")[0] == 0


def test_construct_exceptional(capsys):
    code, out, err = run(capsys, "construct", "catalog:P", "--flavor", "compatible")
    assert code == 1
    assert "exceptional graph P" in err
    assert "exception=P" in out


def test_construct_then_verify_and_dualize(tmp_path, capsys):
    g = tmp_path / "h7.tri"
    code, out, _ = run(capsys, "construct", "catalog:H:7", "--trace")
    assert code == 0
    result = tmp_path / "h7.out"
    result.write_text(out)
    code, text, _ = run(capsys, "replay", str(result))
    assert code == 0
    g.write_text(text)
    # the replayed graph has its own ids, so construct again on it
    code, out, _ = run(capsys, "construct", str(g))
    result.write_text(out)
    assert run(capsys, "verify", str(g), str(result), "--flavor", "compatible")[0] == 0
    dot = tmp_path / "cycle.dot"
    code, out, _ = run(capsys, "dualize", str(g), str(result), "--dot", str(dot))
    assert code == 0 and "barnette_class=true" in out
    assert dot.read_text().startswith("graph")


def test_enumerate_matches_census(capsys, tmp_path):
    code, a, _ = run(capsys, "enumerate", "--max-vertices", "9", "--out", str(tmp_path))
    assert code == 0
    code, b, _ = run(capsys, "census", "--max-vertices", "9")
    codes = lambda s: {ln.split()[0] for ln in s.splitlines() if not ln.startswith("count=")}
    assert codes(a) == codes(b)
    files = list(tmp_path.glob("*.tri"))
    assert len(files) == len(codes(a))
    parse_triangulation(files[0].read_text())


def test_enumerate_with_traces(capsys):
    code, out, _ = run(capsys, "enumerate", "--max-vertices", "6", "--traces", "--height", "1")
    assert code == 0 and "trace=start" in out


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "catalog:A:4", "--flavor", "pm")
    assert code == 1 and "exhausted=true" in out and "count=0" in out
    code, out, _ = run(capsys, "oracle", "catalog:H:7", "--flavor", "compatible", "--all")
    assert code == 0 and "set=" in out


def test_batch_construct_with_jobs(capsys):
    code, out, _ = run(capsys, "construct", "catalog:G:3", "catalog:F:3", "catalog:J", "--jobs", "2")
    assert code == 0
    assert out.count("graph=") == 3


def test_usage_errors(capsys, k4_file, tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["enumerate"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["enumerate", "--max-vertices", "-3"])
    assert exc.value.code == 2
    assert run(capsys, "verify", "missing.tri", "1")[0] == 2
    bad = tmp_path / "bad.tri"
    bad.write_text("not a graph")
    assert run(capsys, "verify", str(bad), "1")[0] == 2
    assert run(capsys, "verify", k4_file, "one two")[0] == 2
    assert run(capsys, "verify", k4_file, "1 42")[0] == 2
    assert run(capsys, "construct", "catalog:Z")[0] == 2


def test_replay_bad_trace(tmp_path, capsys):
    t = tmp_path / "t.txt"
    t.write_text("start G 3\nstep C 9\n")
    assert run(capsys, "replay", str(t))[0] == 1
