import json
import os

import pytest

from rangelb import cli
from rangelb.formats import FormatError, digest, dumps, read_instance, instance_to_dict


def run(argv, capsys):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def slab_inst(tmp_path, capsys):
    path = tmp_path / "sr.json"
    code, out, _ = run(["gen", "slab-report", "--n", 1000, "--delta", 2, "--qn", 10, "--w", 50,
                        "--d", "100,200", "--seed", 7, "--out", path], capsys)
    assert code == 0
    return path, json.loads(out)


def test_gen_echoes_default_width(tmp_path, capsys):
    # the default scales are too coarse at this n, so only the width echo is checked
    code, _, err = run(["gen", "slab-report", "--n", 16384, "--delta", 2, "--qn", 14, "--seed", 7,
                        "--out", tmp_path / "i.json"], capsys)
    assert code == 2 and "d1" in err
    assert not (tmp_path / "i.json").exists()
    code, out, _ = run(["gen", "slab-report", "--n", 16384, "--delta", 2, "--qn", 14, "--d", "1024,2048",
                        "--seed", 7, "--out", tmp_path / "i.json"], capsys)
    assert code == 0
    assert json.loads(out)["params"]["w"] == 448.0


def test_gen_size_and_points(slab_inst):
    path, rec = slab_inst
    assert rec["family_size"] == 144 and rec["points"] == 1000
    assert "w" in rec["provenance"]


def test_gen_annulus_stab_recount(tmp_path, capsys):
    path = tmp_path / "as.json"
    code, out, _ = run(["gen", "annulus-stab", "--n", "1e5", "--qn", 100, "--out", path], capsys)
    assert code == 0
    fam, pts, raw, _ = read_instance(str(path))
    p = fam.params
    assert json.loads(out)["family_size"] == len(fam) == p.coverage * p.rings_per_center
    assert pts is None


def test_missing_flag_exit_2(tmp_path, capsys):
    with pytest.raises(SystemExit) as e:
        cli.main(["gen", "slab-report", "--n", "100", "--out", str(tmp_path / "x.json")])
    assert e.value.code == 2
    assert not (tmp_path / "x.json").exists()


def test_non_integer_n_rejected(tmp_path, capsys):
    with pytest.raises(SystemExit) as e:
        cli.main(["gen", "annulus-stab", "--n", "1.5e0", "--qn", "4", "--out", str(tmp_path / "x.json")])
    assert e.value.code == 2


def test_invalid_regime_names_field(tmp_path, capsys):
    code, _, err = run(["gen", "annulus-stab", "--n", 100, "--qn", 90, "--out", tmp_path / "x.json"], capsys)
    assert code == 2 and "qn" in err
    code, _, err = run(["gen", "annulus-report", "--n", 1024, "--qn", 8, "--w", 300, "--T", 256,
                        "--out", tmp_path / "y.json"], capsys)
    assert code == 2 and "w" in err


def test_instance_round_trip(slab_inst):
    path, _ = slab_inst
    text = path.read_text()
    fam, pts, raw, _ = read_instance(str(path))
    assert dumps(instance_to_dict(fam, pts, raw["seed"])) == text
    assert dumps(json.loads(text)) == text


def test_annulus_instance_round_trip(tmp_path, capsys):
    path = tmp_path / "ar.json"
    run(["gen", "annulus-report", "--n", 256, "--qn", 4, "--w", 4, "--T", 128, "--seed", 3, "--out", path], capsys)
    text = path.read_text()
    fam, pts, raw, _ = read_instance(str(path))
    assert dumps(instance_to_dict(fam, pts, raw["seed"])) == text


def test_malformed_instance(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, _ = run(["verify", "chazelle", "--inst", bad], capsys)
    assert code == 2
    bad.write_text(json.dumps({"schema": "other"}))
    with pytest.raises(FormatError):
        read_instance(str(bad))
    code, _, _ = run(["verify", "afshani", "--inst", tmp_path / "missing.json"], capsys)
    assert code == 2


def test_verify_chazelle_report(slab_inst, tmp_path, capsys):
    path, _ = slab_inst
    rp = tmp_path / "r.json"
    code, out, _ = run(["verify", "chazelle", "--inst", path, "--c", 1000, "--report", rp, "--threads", 1], capsys)
    assert code == 0
    assert out.startswith("chazelle ") and "implied_bound=" in out
    rep = json.loads(rp.read_text())
    assert rep["instance_digest"] == digest(path.read_text())
    assert rep["report"]["m"] == 144
    assert "timings" not in rep


def test_verify_chazelle_violation_exit_1(slab_inst, tmp_path, capsys):
    path, _ = slab_inst
    rp = tmp_path / "r.json"
    code, _, _ = run(["verify", "chazelle", "--inst", path, "--qn", 1e9, "--report", rp], capsys)
    assert code == 1
    rep = json.loads(rp.read_text())
    assert rep["report"]["cond1_violations"] == 144
    assert rep["report"]["violating_queries"][:3] == [0, 1, 2]


def test_verify_deterministic_across_threads(slab_inst, tmp_path, capsys):
    path, _ = slab_inst
    outs = []
    for t in (1, 1, 4):
        rp = tmp_path / f"r{len(outs)}.json"
        run(["verify", "chazelle", "--inst", path, "--alpha", 3, "--tuples", 20, "--seed", 5,
             "--report", rp, "--threads", t], capsys)
        outs.append(rp.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_verify_afshani_coverage(tmp_path, capsys):
    path = tmp_path / "as.json"
    run(["gen", "annulus-stab", "--n", 2000, "--qn", 9, "--out", path], capsys)
    code, out, _ = run(["verify", "afshani", "--inst", path, "--probe-grid", 20, "--random-probes", 100,
                        "--max-pairs", 2000], capsys)
    assert code == 0
    # T = 1/(2*3 - 1), so (1/T + 1)^2 = 36
    assert "coverage=36..36 expected=36" in out


def test_timings_flag(slab_inst, tmp_path, capsys):
    path, _ = slab_inst
    rp = tmp_path / "r.json"
    run(["verify", "chazelle", "--inst", path, "--report", rp, "--timings"], capsys)
    assert "verify_seconds" in json.loads(rp.read_text())["timings"]


def test_seed_env_default(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv(cli.SEED_ENV, "11")
    p1 = tmp_path / "a.json"
    run(["gen", "slab-report", "--n", 1000, "--qn", 10, "--w", 50, "--d", "100,200", "--out", p1], capsys)
    monkeypatch.delenv(cli.SEED_ENV)
    p2 = tmp_path / "b.json"
    run(["gen", "slab-report", "--n", 1000, "--qn", 10, "--w", 50, "--d", "100,200", "--seed", 11, "--out", p2], capsys)
    assert p1.read_bytes() == p2.read_bytes()


def test_area_annulus_int_with_mc(capsys):
    code, out, _ = run(["area", "annulus-int", "--r1", 100, "--r2", 120, "--w", 5, "--d", 60, "--mc", 200000], capsys)
    rec = json.loads(out)
    assert code == 0
    assert abs(rec["area"] - rec["mc"]["estimate"]) <= 4 * rec["mc"]["std_err"]


def test_area_ring_bound_domain_error(capsys):
    code, _, err = run(["area", "ring-bound", "--r1", 10, "--r2", 20, "--w", 2, "--d", 1], capsys)
    assert code == 2 and err


def test_area_corner_gap(capsys):
    code, out, _ = run(["area", "corner-gap", "--r1", 100, "--r2", 120, "--w", 5, "--d", 35], capsys)
    rec = json.loads(out)
    assert rec["gap"] == pytest.approx(5 * 225 / 35)


def test_area_slab_int(capsys):
    code, out, _ = run(["area", "slab-int", "--p1", "0,1", "--p2", "0,1", "--w", 2, "--lo", 0, "--hi", 3], capsys)
    assert json.loads(out)["area"] == pytest.approx(6.0)


def test_bound_command(capsys):
    code, out, _ = run(["bound", "--kind", "annulus-stab", "--n", "1e6", "--qn", "1e4"], capsys)
    assert code == 0 and json.loads(out)["bound"] == pytest.approx(1e6)
    code, _, _ = run(["bound", "--kind", "slab-stab", "--n", "1e6", "--qn", "1e4"], capsys)
    assert code == 2


def test_experiment_commands(tmp_path, capsys):
    path = tmp_path / "ar.json"
    run(["gen", "annulus-report", "--n", 256, "--qn", 4, "--w", 4, "--T", 128, "--seed", 3, "--out", path], capsys)
    code, out, _ = run(["experiment", "derand-ring", "--inst", path, "--trials", 3, "--t", 1], capsys)
    rec = json.loads(out)
    assert rec["trials"] == 3 and "failure_rate" in rec
    code, out, _ = run(["experiment", "derand-int", "--inst", path, "--trials", 3], capsys)
    assert json.loads(out)["threshold"] > 0
    rp = tmp_path / "l.json"
    code, out, _ = run(["experiment", "lemma42", "--inst", path, "--subsets", 20, "--report", rp], capsys)
    assert code == 0 and "ratio" in json.loads(out)
    assert json.loads(rp.read_text())["instance_digest"] == digest(path.read_text())


def test_sweep_csv(tmp_path, capsys):
    out = tmp_path / "s.csv"
    code, _, _ = run(["sweep", "ring-bound", "--steps", 5, "--csv", out], capsys)
    lines = out.read_text().splitlines()
    assert code == 0 and lines[0] == "d,g,exact_area,bound,ratio" and len(lines) == 6
    code, stdout, _ = run(["sweep", "bound", "--kind", "annulus-stab", "--n", 1e6, "--qn-list", "1,10,100"], capsys)
    assert len(stdout.strip().splitlines()) == 4


def test_module_entry_point():
    import subprocess
    import sys

    r = subprocess.run([sys.executable, "-m", "rangelb", "bound", "--kind", "annulus-report", "--n", "10", "--qn", "1"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["bound"] == 1000.0
