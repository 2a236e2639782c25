import json

import pytest

from tangent_syzygies import cli, verify
from tangent_syzygies.geometry import equations

RNC4 = '{"kind": "rnc", "params": {"d": 4}}'
SEGRE23 = '{"kind": "segre", "params": {"dims": [2, 3]}}'


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_equations_intro(capsys):
    code, out, _ = run(capsys, "equations", RNC4, "--q", "1", "--k", "1")
    assert code == 0
    assert out == "dim=1; basis: x0*x4 - 4*x1*x3 + 3*x2^2\n"


def test_equations_four_factor_segre(capsys):
    code, out, _ = run(capsys, "equations", '{"kind": "segre", "params": {"dims": [2, 2, 2, 2]}}')
    assert code == 0 and out.startswith("dim=1;")


def test_equations_no_cubics(capsys):
    code, out, _ = run(capsys, "equations", SEGRE23, "--q", "2", "--k", "0")
    assert (code, out) == (0, "dim=0\n")


def test_equations_from_file(capsys, tmp_path):
    f = tmp_path / "x.json"
    f.write_text(RNC4)
    code, out, _ = run(capsys, "equations", str(f))
    assert code == 0 and out.startswith("dim=1;")


def test_equations_sampling_echoes_seed(capsys):
    code, out, _ = run(capsys, "equations", RNC4, "--method", "sampling", "--seed", "17")
    assert code == 0 and "seed=17" in out and "x0*x4 - 4*x1*x3 + 3*x2^2" in out


def test_equations_json(capsys):
    code, out, _ = run(capsys, "equations", RNC4, "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert data["dim"] == 1 and data["basis"] == ["x0*x4 - 4*x1*x3 + 3*x2^2"] and data["status"] == "exact"


def test_betti_row_segre_2x3(capsys):
    code, out, _ = run(capsys, "betti-row", SEGRE23, "--k", "0")
    assert (code, out) == (0, "3,2,0\n")


def test_betti_row_intro(capsys):
    code, out, _ = run(capsys, "betti-row", RNC4, "--p-max", "0")
    assert (code, out) == (0, "1\n")


def test_betti_row_csv(capsys):
    code, out, _ = run(capsys, "betti-row", SEGRE23, "--k", "0", "--format", "csv")
    assert out == "p,dim\n0,3\n1,2\n2,0\n"


def test_betti_row_json(capsys):
    code, out, _ = run(capsys, "betti-row", SEGRE23, "--k", "0", "--format", "json")
    data = json.loads(out)
    assert data["row"] == [3, 2, 0] and data["status"] == "exact" and data["seed"] == verify.DEFAULT_SEED


def test_betti_row_slice_check(capsys):
    code, out, _ = run(capsys, "betti-row", RNC4, "--p-max", "0", "--slice-check", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["row"] == [1]
    assert "3" in data["ideal_dims"] and "seed" in data["sampled_degrees"]["3"]


def test_modp_is_labeled_filter(capsys):
    code, out, _ = run(capsys, "betti-row", SEGRE23, "--k", "0", "--arithmetic", "modp:2147483629")
    assert code == 0
    assert out.splitlines()[0] == "3,2,0"
    assert "filter" in out and "exact" not in out
    code, out, _ = run(capsys, "betti-row", SEGRE23, "--k", "0", "--arithmetic", "modp:2147483629", "--format", "json")
    assert json.loads(out)["status"].startswith("filter")


@pytest.mark.parametrize(
    "argv",
    [
        ("equations", '{"kind": "segre", "params": {"dims": [2, 2]}}', "--seed", "5"),
        ("betti-row", SEGRE23, "--k", "0", "--format", "json"),
        ("equations", RNC4, "--method", "sampling", "--seed", "99", "--format", "json"),
        ("verify", "fulton-hansen", "--format", "json"),
    ],
)
def test_byte_identical_reruns(capsys, argv):
    first = run(capsys, *argv)
    assert first == run(capsys, *argv)


@pytest.mark.parametrize(
    "argv",
    [
        ("equations", "missing-file.json"),
        ("equations", "{not json"),
        ("equations", '{"kind": "torus"}'),
        ("equations", "[1, 2]"),
        ("equations", RNC4, "--q", "0"),
        ("betti-row", RNC4, "--p-max", "-1"),
        ("betti-row", RNC4, "--arithmetic", "modp:10"),
        ("betti-row", RNC4, "--arithmetic", "float"),
        ("verify", "no-such-suite"),
        ("frobnicate",),
    ],
)
def test_input_errors_exit_1(capsys, argv):
    assert run(capsys, *argv)[0] == 1


def test_degenerate_oracle_exit_2(capsys, monkeypatch):
    monkeypatch.setattr(equations, "MAX_ESCALATIONS", 2)
    code, out, err = run(capsys, "equations", RNC4)
    assert code == 2 and out == "" and "degenera" in err


def test_verification_failure_exit_3(capsys, monkeypatch):
    def failing(seed=verify.DEFAULT_SEED):
        return [verify.Check("always wrong", 1, 2, False)]

    monkeypatch.setitem(verify.SUITES, "eks-genus0", failing)
    code, out, _ = run(capsys, "verify", "eks-genus0")
    assert code == 3 and "FAIL always wrong" in out


def test_verify_eks_genus0(capsys):
    code, out, _ = run(capsys, "verify", "eks-genus0", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["passed"]
    assert all({"name", "expected", "got"} <= set(c) for c in data["checks"])


def test_verify_fulton_hansen_text(capsys):
    code, out, _ = run(capsys, "verify", "fulton-hansen")
    assert code == 0 and out.rstrip().endswith(f"all passed (seed={verify.DEFAULT_SEED})")


def test_verify_csv(capsys):
    code, out, _ = run(capsys, "verify", "fulton-hansen", "--format", "csv")
    assert out.splitlines()[0] == "name,expected,got,ok"
