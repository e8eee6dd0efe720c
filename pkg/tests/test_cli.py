"""End-to-end runs of the command-line entry points."""

import copy
import json

import numpy as np
import pytest

from paralens.cli import main, parse_game_spec
from paralens.demos import run_gan
from paralens.errors import SpecFormatError


def _pd_spec():
    return {
        "players": [
            {"name": "row", "strategies": ["C", "D"]},
            {"name": "col", "strategies": ["C", "D"]},
        ],
        "payoffs": {
            "C,C": [2, 2],
            "C,D": [0, 3],
            "D,C": [3, 0],
            "D,D": [1, 1],
        },
        "selection": "argmax_each",
    }


def _path_of(raiser):
    with pytest.raises(SpecFormatError) as exc:
        parse_game_spec(raiser)
    return exc.value.path


def test_spec_error_paths():
    spec = _pd_spec()
    assert _path_of([]) == "$"
    bad = copy.deepcopy(spec)
    del bad["players"]
    assert _path_of(bad) == "$.players"
    bad = copy.deepcopy(spec)
    bad["players"][0] = "row"
    assert _path_of(bad) == "$.players[0]"
    bad = copy.deepcopy(spec)
    del bad["players"][1]["name"]
    assert _path_of(bad) == "$.players[1].name"
    bad = copy.deepcopy(spec)
    bad["players"][1]["name"] = "row"
    assert _path_of(bad) == "$.players[1].name"
    bad = copy.deepcopy(spec)
    bad["players"][0]["strategies"] = []
    assert _path_of(bad) == "$.players[0].strategies"
    bad = copy.deepcopy(spec)
    bad["players"][0]["strategies"] = ["C", "D,E"]
    assert _path_of(bad) == "$.players[0].strategies[1]"
    bad = copy.deepcopy(spec)
    bad["players"][0]["strategies"] = ["C", "C"]
    assert _path_of(bad) == "$.players[0].strategies"
    bad = copy.deepcopy(spec)
    del bad["payoffs"]
    assert _path_of(bad) == "$.payoffs"
    bad = copy.deepcopy(spec)
    bad["payoffs"]["C"] = [1, 1]
    assert _path_of(bad) == "$.payoffs['C']"
    bad = copy.deepcopy(spec)
    bad["payoffs"]["C,X"] = bad["payoffs"].pop("C,D")
    assert _path_of(bad) == "$.payoffs['C,X']"
    bad = copy.deepcopy(spec)
    bad["payoffs"]["C,C"] = [True, 2]
    assert _path_of(bad) == "$.payoffs['C,C'][0]"
    bad = copy.deepcopy(spec)
    bad["payoffs"]["C,C"] = ["two", 2]
    assert _path_of(bad) == "$.payoffs['C,C'][0]"
    bad = copy.deepcopy(spec)
    del bad["payoffs"]["D,D"]
    assert _path_of(bad) == "$.payoffs"
    bad = copy.deepcopy(spec)
    bad["selection"] = "argmin_each"
    assert _path_of(bad) == "$.selection"
    bad = copy.deepcopy(spec)
    bad["selection"] = ["argmax", "softmax"]
    assert _path_of(bad) == "$.selection[1]"


def test_spec_parses_rationals_and_tags():
    spec = _pd_spec()
    spec["payoffs"]["C,C"] = ["3/2", 1.5]
    spec["selection"] = ["argmax", "total"]
    game, selection = parse_game_spec(spec)
    assert selection == ["argmax", "total"]
    assert [p.labels for p in game.players] == [("C", "D"), ("C", "D")]
    assert game.payoff("(C,C)") == "(3/2,3/2)"


def test_solve_bundled_dilemma(capsys):
    assert main(["solve", "pd.json"]) == 0
    out = capsys.readouterr().out
    assert out == (
        '{"agrees":true,"oracle":[["D","D"]],"selection":"argmax_each",'
        '"solutions":[["D","D"]]}\n'
    )


def test_solve_output_is_reproducible(capsys):
    main(["solve", "pd.json"])
    first = capsys.readouterr().out
    main(["solve", "pd.json"])
    assert capsys.readouterr().out == first


def test_solve_hicks_selection(capsys):
    assert main(["solve", "pd.json", "--selection", "hicks_sum"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["solutions"] == [["C", "C"]]
    assert report["agrees"] is True


def test_solve_other_fixtures(capsys):
    assert main(["solve", "matching_pennies.json"]) == 0
    assert json.loads(capsys.readouterr().out)["solutions"] == []
    assert main(["solve", "coordination.json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["solutions"] == [["A", "A"], ["B", "B"]]


def test_solve_with_tag_override(capsys):
    assert main(["solve", "pd.json", "--selection", "argmax,total"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["selection"] == ["argmax", "total"]
    assert report["solutions"] == [["D", "C"], ["D", "D"]]
    assert report["agrees"] is True


def test_solve_rejects_bad_inputs(capsys):
    assert main(["solve", "pd.json", "--selection", "argmax"]) == 2
    assert "--selection" in capsys.readouterr().err
    assert main(["solve", "/nonexistent/game.json"]) == 2
    assert "no such spec" in capsys.readouterr().err


def test_solve_user_spec_from_disk(tmp_path, capsys):
    # the dilemma with the labels' roles swapped: now C dominates
    spec = _pd_spec()
    spec["payoffs"] = {
        "C,C": [1, 1],
        "C,D": [3, 0],
        "D,C": [0, 3],
        "D,D": [2, 2],
    }
    path = tmp_path / "swapped.json"
    path.write_text(json.dumps(spec), encoding="utf-8")
    assert main(["solve", str(path)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["solutions"] == [["C", "C"]]
    assert report["agrees"] is True


def test_train_writes_csv(tmp_path, capsys):
    out = tmp_path / "run.csv"
    assert main(["train", "linreg", "--steps", "5", "--out", str(out)]) == 0
    printed = capsys.readouterr().out
    assert f"wrote {out} (5 steps)" in printed
    assert "final loss = " in printed
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "step,loss"
    assert len(lines) == 6
    assert lines[1].startswith("0,")


def test_train_zero_steps_is_header_only(tmp_path):
    out = tmp_path / "empty.csv"
    assert main(["train", "gan", "--steps", "0", "--out", str(out)]) == 0
    assert out.read_text(encoding="utf-8") == "step,d_fake,d_real\n"


def test_train_is_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["train", "gan", "--steps", "5", "--seed", "3", "--out", str(a)])
    main(["train", "gan", "--steps", "5", "--seed", "3", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_train_default_output_name(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    assert main(["train", "linreg", "--steps", "1"]) == 0
    assert "wrote linreg.csv (1 steps)" in capsys.readouterr().out
    assert (tmp_path / "linreg.csv").is_file()


def test_train_flag_validation():
    with pytest.raises(SystemExit) as exc:
        main(["train", "linreg", "--alpha", "1/0"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["train", "linreg", "--steps", "-3"])
    assert exc.value.code == 2


def test_gan_with_zero_rate_keeps_parameters():
    result = run_gan(seed=1, steps=3, alpha=0)
    for snap in result.snapshots:
        for key in ("gen", "disc"):
            assert np.array_equal(snap[key], result.initial_params[key])


def test_check_single_name(capsys):
    assert main(["check", "--filter", "pd-solutions"]) == 0
    assert capsys.readouterr().out == "ok pd-solutions (4 instances)\n"


def test_check_unknown_name(capsys):
    assert main(["check", "--filter", "nonsense"]) == 2
    err = capsys.readouterr().err
    assert "unknown check" in err
    assert "pd-solutions" in err


def test_check_catches_a_planted_bug(capsys, monkeypatch):
    import paralens.smooth_autodiff as sa

    real = sa.gd_lens
    monkeypatch.setattr(sa, "gd_lens", lambda alpha, dim: real(-alpha, dim))
    assert main(["check", "--filter", "gradient-descent-lens"]) == 1
    assert "FAIL gradient-descent-lens" in capsys.readouterr().out
