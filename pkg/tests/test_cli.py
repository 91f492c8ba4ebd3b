import json

import pytest

from selection_games.cli import run


def _capture(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    return code, out


def test_norecall_header_and_determinism(capsys):
    code, out1 = _capture(capsys, ["norecall", "--dist", "uniform", "--n", "3"])
    assert code == 0
    assert out1.splitlines()[0] == "n,alpha_prime,alpha,beta"
    _, out2 = _capture(capsys, ["norecall", "--dist", "uniform", "--n", "3"])
    assert out1 == out2
    assert out1.endswith("\n")
    assert "\r" not in out1


def test_fullrecall_header(capsys):
    code, out = _capture(capsys, ["fullrecall", "--n", "2", "--grid", "301"])
    assert code == 0
    assert out.splitlines()[0] == "n,l,h"


def test_efficiency_header(capsys):
    code, out = _capture(capsys, ["efficiency", "--variant", "norecall", "--n", "3"])
    assert code == 0
    assert out.splitlines()[0] == "n,poa,pos,pr"


def test_prophet_values(capsys):
    code, out = _capture(capsys, ["prophet", "--n", "3"])
    assert code == 0
    rows = out.strip().splitlines()
    assert rows[0] == "n,c,s"
    last = rows[-1].split(",")
    assert float(last[1]) == pytest.approx(89 / 128)
    assert float(last[2]) == pytest.approx(1.1953125)


def test_oracle_json_output(tmp_path, capsys):
    spec = tmp_path / "twopoint.json"
    spec.write_text(
        json.dumps(
            {
                "type": "discrete",
                "atoms": [{"x": "1/3", "p": "1/2"}, {"x": "2/3", "p": "1/2"}],
            }
        )
    )
    code, out = _capture(
        capsys, ["oracle", "--dist", str(spec), "--n", "2", "--variant", "norecall"]
    )
    assert code == 0
    payload = json.loads(out)
    got = {
        (p["p1"]["num"], p["p1"]["den"], p["p2"]["num"], p["p2"]["den"])
        for p in payload["payoffs"]
    }
    assert got == {(11, 24, 13, 24), (13, 24, 11, 24), (23, 48, 23, 48)}
    assert payload["summaries"]["best_single"] == {"num": 13, "den": 24}


def test_oracle_accepts_float_atoms_by_snapping(capsys):
    inline = json.dumps(
        {"type": "discrete", "atoms": [{"x": 1 / 3, "p": 0.5}, {"x": 2 / 3, "p": 0.5}]}
    )
    code, out = _capture(capsys, ["oracle", "--dist", inline, "--n", "2", "--variant", "fullrecall"])
    assert code == 0
    payload = json.loads(out)
    assert payload["payoffs"][0]["p1"] == {"num": 1, "den": 2}


def test_tables_and_figures(capsys):
    code, out = _capture(capsys, ["tables", "--which", "fig2", "--n", "6"])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,two_beta,two_alpha"
    rows = [tuple(map(float, line.split(","))) for line in lines[1:]]
    assert all(r[1] >= r[2] - 1e-12 for r in rows)  # best sum >= worst sum
    assert all(b[1] >= a[1] and b[2] >= a[2] for a, b in zip(rows, rows[1:]))
    code, out = _capture(capsys, ["tables", "--which", "table4", "--n", "2", "--grid", "301"])
    assert code == 0
    assert out.splitlines()[0] == "n,l,h,alpha,beta"


def test_figure_series_peaks(capsys):
    _, poa_out = _capture(capsys, ["tables", "--which", "fig3a", "--n", "10"])
    _, pr_out = _capture(capsys, ["tables", "--which", "fig3c", "--n", "10"])

    def peak(out):
        rows = [line.split(",") for line in out.strip().splitlines()[1:]]
        return max(rows, key=lambda r: float(r[1]))[0]

    assert peak(poa_out) == "2"
    assert peak(pr_out) == "5"


def test_simulate_json_deterministic(capsys):
    argv = [
        "simulate", "--variant", "norecall", "--n", "2", "--strategy", "worst",
        "--runs", "2000", "--seed", "7",
    ]
    code, out1 = _capture(capsys, argv)
    assert code == 0
    _, out2 = _capture(capsys, argv)
    assert out1 == out2
    payload = json.loads(out1)
    assert payload["runs"] == 2000 and payload["seed"] == 7


def test_validation_error_exit_code(capsys):
    code = run(["norecall", "--dist", '{"type":"discrete"}', "--n", "3"])
    err = capsys.readouterr().err
    assert code == 2
    assert "atoms" in err


def test_unsupported_distribution_exit_code(capsys):
    inline = json.dumps(
        {"type": "discrete", "atoms": [{"x": 0.3, "p": 0.5}, {"x": 0.6, "p": 0.5}]}
    )
    code = run(["norecall", "--dist", inline, "--n", "3"])
    assert code == 2


def test_resource_guard_exit_code(capsys):
    atoms = [{"x": f"{k}/10", "p": "1/5"} for k in range(1, 6)]
    inline = json.dumps({"type": "discrete", "atoms": atoms})
    code = run(["oracle", "--dist", inline, "--n", "2", "--variant", "norecall"])
    assert code == 3


def test_output_file(tmp_path, capsys):
    target = tmp_path / "out.csv"
    code = run(["prophet", "--n", "2", "--out", str(target)])
    assert code == 0
    assert target.read_text().splitlines()[0] == "n,c,s"
