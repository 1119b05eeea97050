import json

import pytest

from chowring.cli import main, preset_tasks, run_sweep
from chowring.modelspec import load_model, load_model_file, model_from_dict, model_to_dict, save_model_file


def run(args, tmp_path, capsys):
    code = main(args + ["--out", str(tmp_path)])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_conj1_pass(tmp_path, capsys):
    code, out, _ = run(["check", "conj1", "--model", "sympow:g=2,mode=theta", "--divisor", "z", "--p", "1"],
                       tmp_path, capsys)
    assert code == 0 and "injective" in out
    files = list(tmp_path.glob("*.json"))
    assert len(files) == 1
    doc = json.loads(files[0].read_text())
    assert doc["schema"] == "chowring.report/1"
    assert doc["model"] == "sympow:g=2,mode=theta"
    assert doc["result"]["verdict"] == "injective"
    assert "timestamp" not in doc


def test_report_files_byte_identical(tmp_path, capsys):
    args = ["check", "kunnemann", "--model", "divisor:g=4", "--p", "2", "--s", "1"]
    run(args, tmp_path / "a", capsys)
    run(args, tmp_path / "b", capsys)
    (fa,), (fb,) = list((tmp_path / "a").iterdir()), list((tmp_path / "b").iterdir())
    assert fa.name == fb.name and fa.read_bytes() == fb.read_bytes()


def test_timestamp_optional(tmp_path, capsys):
    run(["sympow", "pbig", "--g", "5", "--p", "2", "--timestamp"], tmp_path, capsys)
    (f,) = list(tmp_path.iterdir())
    assert "timestamp" in json.loads(f.read_text())


def test_pbig_prints_det(tmp_path, capsys):
    code, out, _ = run(["sympow", "pbig", "--g", "5", "--p", "2"], tmp_path, capsys)
    assert code == 0 and "det = -1/144" in out


def test_hypothesis_violation_exit_2(tmp_path, capsys):
    code, _, err = run(["check", "conj1", "--model", "theta:g=2", "--divisor", "theta", "--p", "2"],
                       tmp_path, capsys)
    assert code == 2 and "hypothesis violated" in err
    assert "Traceback" not in err


def test_failed_check_exit_1(tmp_path, capsys):
    model = tmp_path / "m.json"
    model.write_text(json.dumps({
        "schema": "chowring.model/1", "id": "p1xp1", "truncation": 2,
        "generators": [{"name": "a", "codim": 1}, {"name": "b", "codim": 1}],
        "relations": [{"lead": "a^2", "rhs": "0"}, {"lead": "b^2", "rhs": "0"}],
    }))
    code, out, _ = run(["check", "conj1", "--model", f"file:{model}", "--divisor", "a", "--p", "0"],
                       tmp_path, capsys)
    assert code == 1 and "not-injective" in out and "kernel: 1" in out


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["check", "conj1", "--model", "nope:g=1", "--p", "1"],
    ["check", "conj1", "--model", "theta:g=x", "--p", "1"],
    ["check", "conj1", "--model", "file:/does/not/exist.json", "--p", "1"],
    ["check", "conj1", "--model", "theta:g=2", "--divisor", "theta +", "--p", "1"],
    ["check", "conj1", "--model", "theta:g=2", "--divisor", "theta"],
    ["sympow", "extract-system", "--g", "5", "--p", "1"],
    ["sympow", "stability", "--g", "2", "--n", "2", "--p", "1"],
    ["sympow", "pbig", "--g", "5", "--p", "1"],
    ["blowup", "check", "--x", "projective:n=3", "--center", "point", "--m", "1", "--p", "1"],
    ["blowup", "check", "--p", "1"],
    ["sweep"],
    ["check", "conj1", "--unknown-flag"],
])
def test_invalid_input_exit_2(argv, tmp_path, capsys):
    code, _, err = run(argv, tmp_path, capsys)
    assert code == 2
    assert "Traceback" not in err


def test_malformed_files_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    for text in ("{", "[]", '{"schema": "other/9"}', '{"generators": [{"name": 3}] , "truncation": 2}',
                 '{"generators": [{"name": "x", "codim": 1}], "truncation": 2, "relations": [{"lead": "x"}]}'):
        bad.write_text(text)
        code, _, err = run(["check", "conj1", "--model", f"file:{bad}", "--p", "1"], tmp_path, capsys)
        assert code == 2, text
    cfg = tmp_path / "sweep.json"
    cfg.write_text('{"checks": [{"model": "theta:g=2"}]}')
    code, _, _ = run(["sweep", "--config", str(cfg)], tmp_path, capsys)
    assert code == 2


def test_blowup_cli(tmp_path, capsys):
    code, out, _ = run(["blowup", "check", "--x", "projective:n=3", "--center", "point",
                        "--L", "H", "--m", "-1/2", "--p", "1"], tmp_path, capsys)
    assert code == 0 and "injective" in out
    (f,) = list(tmp_path.iterdir())
    assert json.loads(f.read_text())["result"]["details"]["matrix"] == [["2", "0"], ["0", "1"]]


def test_blowup_cli_data_file(tmp_path, capsys):
    data = {
        "X": {"truncation": 3, "generators": [{"name": "H", "codim": 1}]},
        "Y": {"truncation": 0, "generators": []},
        "r": 2, "pullback_iota": {"H": "0"},
        "pushforward_iota": [{"monomial": [], "image": "H^3"}],
        "normal_chern": [], "label": "Bl_pt_P3",
    }
    f = tmp_path / "bl.json"
    f.write_text(json.dumps(data))
    code, out, _ = run(["blowup", "check", "--data", str(f), "--m", "-1/2", "--p", "1"], tmp_path, capsys)
    assert code == 0 and "Bl_pt_P3" in out


def test_model_file_round_trip(tmp_path, capsys):
    code, out, _ = run(["bundle", "build", "--model", "curve:hom=1", "--chern", "1,pt + v1", "--r", "1",
                        "--save", str(tmp_path / "b.json")], tmp_path, capsys)
    assert code == 0
    m = load_model_file(tmp_path / "b.json")
    d1 = model_to_dict(m)
    save_model_file(m, tmp_path / "c.json")
    assert (tmp_path / "b.json").read_text() == (tmp_path / "c.json").read_text()
    assert model_to_dict(model_from_dict(d1)) == d1
    code, out, _ = run(["check", "conj2", "--model", f"file:{tmp_path / 'b.json'}", "--divisor", "pt + xi",
                        "--p", "1"], tmp_path, capsys)
    assert code == 0 and "injective" in out


def test_builtin_model_round_trip():
    for spec in ("theta:g=2", "divisor:g=3", "sympow:g=3,mode=formal", "curve:hom=2", "projective:n=2"):
        m = load_model(spec)
        d = model_to_dict(m)
        assert model_to_dict(model_from_dict(d)) == d


def test_product_structured(tmp_path, capsys):
    code, out, _ = run(["product", "--model", "theta:g=2", "--pm", "1", "--format", "structured"],
                       tmp_path, capsys)
    assert code == 0 and json.loads(out)["truncation"] == 3


def test_structured_output(tmp_path, capsys):
    code, out, _ = run(["check", "hl", "--model", "cohomology:g=2", "--k", "1", "--format", "structured"],
                       tmp_path, capsys)
    doc = json.loads(out)
    assert code == 0 and doc["verdict"] == "iso"


def test_sweep_config_and_out_env(tmp_path, capsys, monkeypatch):
    cfg = tmp_path / "s.json"
    cfg.write_text(json.dumps({"schema": "chowring.sweep/1",
                               "checks": [{"command": "kunnemann", "model": "divisor:g=3", "p": [1], "s": [0, 1, 2]}]}))
    monkeypatch.setenv("CHOWRING_OUT", str(tmp_path / "env"))
    code = main(["sweep", "--config", str(cfg)])
    out = capsys.readouterr().out
    assert code == 0 and "3 checks: 3 passed" in out
    assert list((tmp_path / "env").glob("sweep__s*.json"))


def test_sweep_order_independent_of_jobs():
    tasks = preset_tasks("kunnemann", 3)
    serial = run_sweep(tasks, 1)
    parallel = run_sweep(list(reversed(tasks)), 3)
    assert [r["summary"] for r in serial] == [r["summary"] for r in parallel]


@pytest.mark.parametrize("preset,gmax", [("kunnemann", 4), ("pbig", 12), ("hl", 4)])
def test_sweep_presets_all_pass(preset, gmax, tmp_path, capsys):
    code, out, _ = run(["sweep", "--preset", preset, "--gmax", str(gmax)], tmp_path, capsys)
    assert code == 0 and "0 failed" in out
