import copy
import json
import random

import pytest
import yaml

from coarsedim import certificate as certs
from coarsedim.cli import format_table, main, report_rows

DIHEDRAL = {
    "kind": "free_product",
    "factors": [
        {"kind": "cyclic", "order": 2, "generators": ["s"]},
        {"kind": "cyclic", "order": 2, "generators": ["t"]},
    ],
}


def write_config(tmp_path, name="run.yaml", **kw):
    data = {"group": DIHEDRAL, "scale": 4, "radius": 12}
    data.update(kw)
    path = tmp_path / name
    path.write_text(yaml.safe_dump(data))
    return path


@pytest.fixture
def cert_path(tmp_path):
    cfg = write_config(tmp_path)
    out = tmp_path / "c.json"
    assert main(["run", "--config", str(cfg), "--out", str(out)]) == 0
    return out


def test_run_writes_passing_certificate(cert_path):
    cert = json.loads(cert_path.read_text())
    assert cert["verdicts"]["passed"]
    assert cert["params"]["colors"] == 2 and cert["params"]["d"] == 4
    assert cert["digest"] == certs.digest(cert)
    # canonical words only
    assert all(isinstance(w, str) for fam in cert["families"] for s in fam for w in s)


def test_rerun_is_byte_identical(tmp_path, cert_path):
    cfg = tmp_path / "run.yaml"
    again = tmp_path / "again.json"
    assert main(["run", "--config", str(cfg), "--out", str(again)]) == 0
    assert again.read_bytes() == cert_path.read_bytes()


def test_verify_round_trip(cert_path, capsys):
    assert main(["verify", str(cert_path)]) == 0
    assert capsys.readouterr().out.startswith("PASS")


def test_verify_ignores_stored_verdicts(cert_path, tmp_path):
    cert = json.loads(cert_path.read_text())
    cert["verdicts"]["passed"] = False
    cert["verdicts"]["disjoint"] = [False, False]
    cert["digest"] = certs.digest(cert)
    res = certs.verify_certificate(cert)
    assert res.passed and not res.stored_verdicts_agree


def test_moved_element_fails_with_witness(cert_path, capsys):
    cert = json.loads(cert_path.read_text())
    fams = cert["families"]
    w = fams[0][0].pop()
    fams[1][0].append(w)
    cert_path.write_text(certs.dumps(cert))
    assert main(["verify", str(cert_path)]) == 1
    out = capsys.readouterr().out
    assert "digest mismatch" in out
    # with a fresh digest the cover itself is still rejected
    cert["digest"] = certs.digest(cert)
    res = certs.verify_certificate(cert)
    assert not res.passed
    assert any(repr(w) in p or "disjoint" in p or "diameter" in p for p in res.problems)


def test_deleted_element_is_reported_as_uncovered(cert_path):
    cert = json.loads(cert_path.read_text())
    w = cert["families"][0][0].pop()
    cert["digest"] = certs.digest(cert)
    res = certs.verify_certificate(cert)
    assert not res.passed
    assert any(repr(w) in p and "not covered" in p for p in res.problems)


def test_every_single_word_edit_is_detected(cert_path):
    cert = json.loads(cert_path.read_text())
    rng = random.Random(0)
    words = [(i, j, k) for i, fam in enumerate(cert["families"])
             for j, s in enumerate(fam) for k in range(len(s))]
    for i, j, k in rng.sample(words, min(30, len(words))):
        bad = copy.deepcopy(cert)
        op = rng.choice(["drop", "swap", "rename"])
        s = bad["families"][i][j]
        if op == "drop":
            s.pop(k)
        elif op == "swap":
            other = bad["families"][1 - i]
            other[rng.randrange(len(other))].append(s.pop(k))
        else:
            s[k] = s[k] + " s"
        assert not certs.verify_certificate(bad).passed


def test_non_canonical_word_rejected(cert_path):
    cert = json.loads(cert_path.read_text())
    s = cert["families"][0][0]
    s[0] = "s s " + s[0] if s[0] != "e" else "s s"
    cert["digest"] = certs.digest(cert)
    res = certs.verify_certificate(cert)
    assert any("canonical" in p for p in res.problems)


def test_spec_round_trip(cert_path, tmp_path):
    cert = json.loads(cert_path.read_text())
    spec = tmp_path / "spec.yaml"
    spec.write_text(yaml.safe_dump(cert["group"]))
    cfg = tmp_path / "rt.yaml"
    cfg.write_text(yaml.safe_dump({"group_file": "spec.yaml", "scale": 4, "radius": 12}))
    out = tmp_path / "rt.json"
    assert main(["run", "--config", str(cfg), "--out", str(out)]) == 0
    assert main(["verify", str(out)]) == 0
    assert json.loads(out.read_text())["families"] == cert["families"]


def test_small_window_exit_code(tmp_path, capsys):
    cfg = write_config(tmp_path, scale=8, radius=3)
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "x.json")]) == 3
    err = capsys.readouterr().err
    assert "free_product:window" in err and "below the scale" in err
    assert not (tmp_path / "x.json").exists()


def test_resource_cap_exit_code(tmp_path, capsys):
    f2 = {"kind": "free_product", "factors": [{"kind": "free_abelian", "generators": ["a"]},
                                              {"kind": "free_abelian", "generators": ["b"]}]}
    cfg = write_config(tmp_path, group=f2, scale=2, radius=8, cap=100)
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "x.json")]) == 3
    assert "cap" in capsys.readouterr().err
    assert not (tmp_path / "x.json").exists()


def test_input_errors_exit_two(tmp_path, capsys):
    bad = tmp_path / "bad.yaml"
    bad.write_text("group: [unclosed")
    assert main(["run", "--config", str(bad)]) == 2
    assert main(["run", "--config", str(tmp_path / "missing.yaml")]) == 2
    cfg = write_config(tmp_path, name="extra.yaml", colour="red")
    assert main(["run", "--config", str(cfg)]) == 2
    assert "unknown config keys" in capsys.readouterr().err


def test_flags_override_config(tmp_path):
    cfg = write_config(tmp_path)
    out = tmp_path / "o.json"
    assert main(["run", "--config", str(cfg), "--out", str(out), "--scale", "2",
                 "--radius", "6"]) == 0
    cert = json.loads(out.read_text())
    assert cert["params"]["d"] == 2 and cert["window"]["inner_radius"] == 6


def test_report_rows_and_verdicts(cert_path, tmp_path, capsys):
    bad = json.loads(cert_path.read_text())
    bad["verdicts"]["passed"] = False
    bad_path = tmp_path / "bad.json"
    bad_path.write_text(certs.dumps(bad))
    rows = report_rows([str(cert_path)])
    assert len(rows) == 1 and rows[0]["verdict"] == "PASS"
    rows = report_rows([str(cert_path), str(bad_path)])
    assert [r["verdict"] for r in rows] == ["PASS", "FAIL"]
    text = format_table(rows)
    assert text.splitlines()[0].split() == ["group", "pipeline", "d", "colors", "max_diameter",
                                             "verdict"]
    out = tmp_path / "rows.json"
    assert main(["report", str(cert_path), "--out", str(out)]) == 0
    assert json.loads(out.read_text())[0]["colors"] == 2


def test_scale_sweep_diameters_nondecreasing(tmp_path):
    paths = []
    for d in (2, 4, 8):
        cfg = write_config(tmp_path, name=f"d{d}.yaml", scale=d, radius=6 * d)
        out = tmp_path / f"d{d}.json"
        assert main(["run", "--config", str(cfg), "--out", str(out)]) == 0
        paths.append(str(out))
    diams = [r["max_diameter"] for r in report_rows(paths)]
    assert diams == sorted(diams)


def test_quotient_config(tmp_path):
    cfg = tmp_path / "q.yaml"
    cfg.write_text(yaml.safe_dump({
        "pipeline": "quotient", "scale": 2, "radius": 6,
        "group": {"kind": "free_abelian", "generators": ["x", "y"]},
        "quotient": {"target": {"kind": "free_abelian", "generators": ["t"]},
                     "images": {"x": "t", "y": ""}},
    }))
    out = tmp_path / "q.json"
    assert main(["run", "--config", str(cfg), "--out", str(out)]) == 0
    assert main(["verify", str(out)]) == 0


def test_ball_reduce_tree(tmp_path, capsys):
    spec = tmp_path / "f2.yaml"
    spec.write_text(yaml.safe_dump({"kind": "free", "generators": ["a", "b"]}))
    assert main(["ball", "--config", str(spec), "--radius", "3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[-1].split() == ["3", "36", "53"]
    cfg = write_config(tmp_path)
    assert main(["reduce", "--config", str(cfg), "s s t", "t s t t"]) == 0
    assert capsys.readouterr().out.splitlines() == ["t\t1", "t s\t2"]
    out = tmp_path / "tree.json"
    assert main(["tree", "--config", str(cfg), "--radius", "3", "--scale", "2",
                 "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["root"] == "0|e" and len(doc["vertices"]) == 7
    assert "verified=True" in capsys.readouterr().out


def test_verify_many_in_parallel(cert_path, tmp_path):
    other = tmp_path / "copy.json"
    other.write_bytes(cert_path.read_bytes())
    assert main(["verify", str(cert_path), str(other), "--jobs", "2"]) == 0
