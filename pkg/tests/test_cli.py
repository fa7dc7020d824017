import json
from pathlib import Path

import pytest

from rbspitzer import cli
from rbspitzer import identities as ids

DATA = Path(__file__).resolve().parent.parent / "data" / "characters"


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(argv, capsys):
    code, out, _ = run(argv + ["--format", "json"], capsys)
    return code, json.loads(out)


class TestVerify:
    @pytest.mark.parametrize(
        "argv",
        [
            ["verify", "ncbs", "--model", "seq", "--n", "4", "--seed", "7"],
            ["verify", "waring", "--model", "laurent", "--n", "5"],
            ["verify", "key", "--model", "seq", "--n", "1"],
            ["verify", "rb", "--model", "riemann"],
            ["verify", "atkinson", "--model", "seq", "--trunc", "5"],
            ["verify", "spitzer", "--model", "polyint"],
            ["verify", "bs", "--n", "3"],
            ["verify", "tu-right", "--model", "matrix", "--n", "3"],
            ["verify", "ncqsym", "--n", "2", "--trunc", "5"],
            ["verify", "antipode", "--n", "3"],
            ["verify", "dynkin", "--n", "3"],
            ["verify", "magnus", "--trunc", "4"],
            ["verify", "eulerian", "--hopf", "trees", "--trunc", "4"],
            ["verify", "gamma-dynkin", "--trunc", "4"],
        ],
    )
    def test_passes(self, argv, capsys):
        code, data = run_json(argv + ["--workers", "1"], capsys)
        assert code == 0
        assert data["passed"] is True

    def test_weight_rescale(self, capsys):
        code, data = run_json(["verify", "key", "--n", "3", "--weight=-1/2"], capsys)
        assert code == 0
        assert data["reports"][0]["params"]["weight"] == "-1/2"

    def test_weight_zero_model_cannot_rescale(self, capsys):
        code, _, err = run(["verify", "key", "--model", "matrix", "--weight", "1"], capsys)
        assert code == 2 and "weight 0" in err

    def test_degree_cap(self, capsys):
        code, _, err = run(["verify", "tu-left", "--n", "8"], capsys)
        assert code == 2 and "--unsafe-degree" in err

    def test_commutative_required(self, capsys):
        code, _, _ = run(["verify", "waring", "--model", "matrix"], capsys)
        assert code == 2

    def test_bad_weight_syntax(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["verify", "key", "--weight", "abc"])
        assert exc.value.code == 2

    def test_failure_exit_code(self, capsys, monkeypatch):
        original = ids.check_key_identity

        def broken(n, algebra, a=None):
            rep = original(n, algebra, a)
            rep.residual_zero = False
            return rep

        monkeypatch.setattr(ids, "check_key_identity", broken)
        code, data = run_json(["verify", "key", "--n", "2"], capsys)
        assert code == 1 and data["passed"] is False

    def test_timing_only_on_request(self, capsys):
        _, data = run_json(["verify", "key", "--n", "2"], capsys)
        assert "elapsed_seconds" not in data["reports"][0]
        _, data = run_json(["verify", "key", "--n", "2", "--timing"], capsys)
        assert "elapsed_seconds" in data["reports"][0]

    def test_workers_byte_identical(self, capsys):
        outs = []
        for w in ("1", "2"):
            code, out, _ = run(["verify", "tu-left", "--n", "4", "--seed", "3", "--workers", w], capsys)
            assert code == 0
            outs.append(out)
        assert outs[0] == outs[1]

    def test_csv_and_text(self, capsys):
        code, out, _ = run(["verify", "key", "--n", "2", "--format", "csv"], capsys)
        assert code == 0 and out.startswith("field,value\n") and "passed,true" in out
        code, out, _ = run(["verify", "key", "--n", "2", "--format", "text"], capsys)
        assert "passed: True" in out

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        code, out, _ = run(["verify", "key", "--n", "2", "--output", str(target)], capsys)
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["passed"]


class TestRenormalize:
    def test_ladder_example(self, capsys):
        code, data = run_json(["renormalize", str(DATA / "ladder_example.json")], capsys)
        assert code == 0
        assert data["gamma_minus"]["t1"] == {"-1": "-1"}
        assert data["renormalized"]["t1"] == "1"

    def test_pole_free(self, capsys):
        code, data = run_json(["renormalize", str(DATA / "pole_free.json")], capsys)
        assert code == 0 and data["trivial_counterterm"] is True

    def test_trees(self, capsys):
        code, data = run_json(["renormalize", str(DATA / "trees_degree4.json")], capsys)
        assert code == 0 and all(data["checks"].values())

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = run(["renormalize", str(tmp_path / "nope.json")], capsys)
        assert code == 2

    def test_bad_file(self, capsys, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text(json.dumps({"hopf": "ladder", "degree": 2, "values": {"q": {"0": "1"}}}))
        code, _, _ = run(["renormalize", str(p)], capsys)
        assert code == 2


class TestMagnus:
    def test_table(self, capsys):
        code, data = run_json(["magnus", "--trunc", "4"], capsys)
        assert code == 0
        table = {tuple(row["composition"]): row["c"] for row in data["coefficients"]}
        assert table[(2,)] == "1/2"
        assert table[(1, 2)] == "1/12"
        assert table[(2, 1)] == "-1/12"
        assert all(data["routes"].values())
        assert data["leading_factor_variant"]["passes_order_two_check"] is False


class TestExpand:
    def test_tu_left_two(self, capsys):
        code, data = run_json(["expand", "tu-left", "--n", "2"], capsys)
        assert code == 0
        assert data["lhs"] == "R(R(Z1)*Z2) + R(R(Z2)*Z1)"
        assert data["rhs"] == "R(Z1)*R(Z2) + R((Z2 |> Z1))"
        assert data["equal"] is True

    def test_key_one(self, capsys):
        code, data = run_json(["expand", "key", "--n", "1"], capsys)
        assert code == 0
        assert data["lhs"] == data["rhs"] == "R(Z1)"

    @pytest.mark.parametrize("name", ["rb", "key", "ncbs", "tu-left", "tu-right"])
    def test_three(self, name, capsys):
        code, data = run_json(["expand", name, "--n", "3"], capsys)
        assert code == 0 and data["equal"] is True

    def test_weight_zero(self, capsys):
        code, data = run_json(["expand", "tu-right", "--n", "3", "--weight", "0"], capsys)
        assert code == 0 and data["weight"] == "0"

    def test_cap(self, capsys):
        code, _, _ = run(["expand", "ncbs", "--n", "5"], capsys)
        assert code == 2
