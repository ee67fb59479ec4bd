import csv
import io

import pytest

from freefib.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_plain(capsys):
    code, out, _ = run(capsys, "gen", "--n", "4", "--count", "16")
    assert code == 0
    assert out.split() == "0 1 1 2 3 5 2 7 9 1 10 11 21 2 23 25".split()


def test_gen_csv(capsys):
    code, out, _ = run(capsys, "gen", "--n", "2", "--start", "3,5", "--count", "3", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows == [["index", "term", "power", "residue"], ["1", "3", "0", "1"],
                    ["2", "5", "0", "1"], ["3", "1", "3", "1"]]


def test_cycle(capsys):
    _, out, _ = run(capsys, "cycle", "--n", "5", "--start", "0,1")
    assert "period: 6" in out and "cycle: 1,1,2,3,1,4" in out
    _, out, _ = run(capsys, "cycle", "--n", "4", "--budget", "100")
    assert "status: exhausted" in out and "budget: 100" in out


def test_digits_truncation(capsys):
    _, out, _ = run(capsys, "gen", "--n", "4", "--count", "400", "--digits", "5")
    last = out.splitlines()[-1]
    assert last.endswith("digits)") and "…" in last and len(last.split("…")[0]) == 5


def test_construct(capsys):
    _, out, _ = run(capsys, "construct", "rich", "--n", "3", "--length", "10")
    assert out.splitlines()[0].startswith("#")
    assert out.split()[-10:] == "49 32 1 11 4 5 1 2 1 1".split()
    _, out, _ = run(capsys, "construct", "prescription", "--n", "3", "--remainders", "1,1,2,2,1,1",
                    "--powers", "0,0,0,1,0,1", "--adjust", "3")
    assert out.split()[-6:] == "19 7 26 11 37 16".split()
    _, out, _ = run(capsys, "construct", "predecessors", "--count", "9", "--format", "csv")
    terms = [r[1] for r in list(csv.reader(io.StringIO(out)))[1:]]
    assert terms == "1 9 5 7 3 5 1 3 1".split()


def test_classify(capsys):
    _, out, _ = run(capsys, "classify", "--max", "15")
    assert out.splitlines()[-1] == "non_omni: 5,8,10,11,12,13,15"
    _, out, _ = run(capsys, "classify", "--min", "11", "--max", "11", "--format", "csv")
    assert list(csv.reader(io.StringIO(out)))[1] == ["11", "0", "1", "1 4"]


def test_orbits(capsys):
    _, out, _ = run(capsys, "orbits", "--n", "8")
    assert "census: 1,3,6,6,6,6,6,6,12,12" in out and "sum_squares: 514" in out
    _, out, _ = run(capsys, "orbits", "--n", "8", "--successors")
    assert out.splitlines()[0] == "1: 3, 4, 5, 6"
    _, out, err = run(capsys, "orbits", "--n", "7", "--successors")
    assert out == "" and "omni-factor" in err


def test_oeis(capsys, tmp_path):
    _, out, _ = run(capsys, "oeis", "--id", "A230457", "--count", "7")
    assert out.split() == "5 8 10 11 12 13 15".split()
    dest = tmp_path / "b.txt"
    assert run(capsys, "oeis", "--id", "A224382", "--count", "3", "--bfile", str(dest))[0] == 0
    assert dest.read_text() == "0 0\n1 1\n2 1\n"


def test_domain_errors_exit_1(capsys):
    code, _, err = run(capsys, "gen", "--n", "3", "--start", "0,0")
    assert code == 1 and err.startswith("error: degenerate-input:")
    code, _, err = run(capsys, "oeis", "--id", "A999999")
    assert code == 1 and "unsupported" in err
    code, _, err = run(capsys, "construct", "prescription", "--n", "3", "--remainders", "1,2,1,0",
                       "--powers", "0,0,0,0")
    assert code == 1 and err.startswith("error: illegal")
    code, _, err = run(capsys, "orbits", "--n", "200", "--cap", "100")
    assert code == 1 and "cap" in err


def test_usage_errors_exit_2(capsys):
    for argv in (["gen"], ["gen", "--n", "x"], ["frobnicate"], ["experiment", "growth"],
                 ["gen", "--n", "3", "--start", "1,2,3"]):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2
    capsys.readouterr()


def test_experiment_seed_reproducible(capsys):
    argv = ["experiment", "growth", "--n", "6,9", "--trials", "30", "--length", "80", "--seed", "5"]
    first = run(capsys, *argv)[1]
    assert first == run(capsys, *argv)[1]
    assert len(first.splitlines()) == 2


def test_experiment_auto_seed_is_printed(capsys):
    _, out, _ = run(capsys, "experiment", "growth", "--n", "6", "--trials", "10", "--length", "70")
    seed = int(out.splitlines()[0].split(":")[1])
    _, again, _ = run(capsys, "experiment", "growth", "--n", "6", "--trials", "10", "--length", "70",
                      "--seed", str(seed))
    assert again == out.split("\n", 1)[1]


def test_models(capsys):
    _, out, _ = run(capsys, "experiment", "models", "--pairs", "1000", "--seed", "0")
    assert "model4_overall: 1.035" in out and "HH=2/5" in out


def test_manifest(capsys, tmp_path):
    m = tmp_path / "run.cfg"
    m.write_text("# desk run\ntrials = 20\nlength = 70\nseed = 9\nn = 6\n")
    a = run(capsys, "experiment", "growth", "--manifest", str(m))[1]
    b = run(capsys, "experiment", "growth", "--n", "6", "--trials", "20", "--length", "70", "--seed", "9")[1]
    assert a == b
    # command-line flags take precedence over the manifest
    c = run(capsys, "experiment", "growth", "--manifest", str(m), "--seed", "10")[1]
    assert c.split()[-1] == "10"
    m.write_text("bogus = 1\n")
    with pytest.raises(SystemExit):
        main(["gen", "--n", "3", "--manifest", str(m)])
    capsys.readouterr()
    code, _, err = run(capsys, "gen", "--n", "3", "--manifest", str(tmp_path / "nope"))
    assert code == 1 and err.startswith("error: io")
