import json

from algebra.zq import RingSpec
from cli import build_parser, run
from cli.serialiser import serialize
from config_interpreter import GUARD_ENV
from dynamics.lift_datum import cyclotomic_datum

MULTIPLICATIVE = ["--p", "3", "--f", "1", "--precN", "12", "--precT", "10", "--frob", "(1+T)^3-1"]


def output(capsys) -> dict:
    return json.loads(capsys.readouterr().out)


def test_fg_build_multiplicative(capsys):
    assert run(["fg-build", *MULTIPLICATIVE]) == 0
    envelope = output(capsys)
    assert envelope["holds"]
    assert envelope["meta"] == {"precN": 12, "internalPrecN": 21, "guard": 9, "precT": 10}
    law = envelope["result"]["group"]["law"]
    assert law["ring"] == {"p": 3, "f": 1, "precN": 12, "modulus": [0, 1]}
    assert law["triangle"] == [
        [[1] if (i, j) in {(1, 0), (0, 1), (1, 1)} else [0] for j in range(10 - i)]
        for i in range(10)
    ]
    assert envelope["result"]["axioms"]["commutative"]
    assert envelope["result"]["frobeniusChain"]


def test_output_is_deterministic(capsys):
    assert run(["fg-build", *MULTIPLICATIVE, "--endos", "2"]) == 0
    first = capsys.readouterr().out
    assert run(["fg-build", *MULTIPLICATIVE, "--endos", "2"]) == 0
    assert capsys.readouterr().out == first
    assert "\"2\"" in first


def test_out_path(tmp_path, capsys):
    target = tmp_path / "group.json"
    assert run(["fg-build", *MULTIPLICATIVE, "--out", str(target)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(target.read_text(encoding="utf-8"))["command"] == "fg-build"


def test_fg_build_twisted(capsys):
    twisted = ["--p", "3", "--f", "2", "--precN", "6", "--precT", "12", "--q", "3",
               "--frob", "3*x*T + T^3"]
    assert run(["fg-build", *twisted, "--alpha", "9"]) == 0
    envelope = output(capsys)
    assert envelope["meta"]["guard"] == 11
    assert envelope["result"]["group"]["frob"]["twist"] == 2
    assert envelope["result"]["group"]["alpha"] == [9, 0]
    assert run(["fg-build", *twisted, "--alpha", "3"]) == 2


def test_rebuild_from_group_file(tmp_path, capsys):
    target = tmp_path / "group.json"
    assert run(["fg-build", *MULTIPLICATIVE, "--out", str(target)]) == 0
    group = json.loads(target.read_text(encoding="utf-8"))["result"]["group"]
    (tmp_path / "artifact.json").write_text(json.dumps(group), encoding="utf-8")
    assert run([
        "fg-endo", "--p", "3", "--precN", "12", "--precT", "10",
        "--group", str(tmp_path / "artifact.json"), "--a", "2",
    ]) == 0
    endo = output(capsys)["result"]["endos"]["2"]
    assert endo["coeffs"][:3] == [[0], [2], [1]]


def test_verify_lift_datum_file(tmp_path, capsys):
    datum = tmp_path / "cyclo.json"
    datum.write_text(
        serialize(cyclotomic_datum(RingSpec(3, 1, 8), 12, [1, 2, 4, 5, 7, 8])), encoding="utf-8"
    )
    assert run(["verify-lift", "--datum", str(datum)]) == 0
    report = output(capsys)["result"]["report"]
    assert all(report["commutesWithP"].values())
    assert all(report["tableRespected"].values())
    assert report["failingDegrees"] == {}


def test_verify_lift_cyclotomic(capsys):
    assert run([
        "verify-lift", "--p", "5", "--precN", "6", "--precT", "10",
        "--cyclotomic", "--units", "1", "--units", "-1",
    ]) == 0
    assert output(capsys)["result"]["report"]["etaValues"]["-1"] == [5 ** 6 - 1]


def test_perturbed_semiconjugacy_exits_1(capsys):
    assert run([
        "semiconj-verify", "--p", "3", "--precN", "8", "--precT", "8",
        "--F", "3*T + T^3", "--G", "3*T + T^3", "--h", "T + T^4",
    ]) == 1
    envelope = output(capsys)
    assert not envelope["holds"]
    assert envelope["result"]["report"]["firstFailingDegree"] == 4


def test_commutant_command(capsys):
    assert run([
        "commutant", "--p", "3", "--precN", "8", "--precT", "8", "--P", "(1+T)^3-1", "--c", "2",
    ]) == 0
    envelope = output(capsys)
    assert envelope["meta"]["internalPrecN"] == 15
    assert envelope["result"]["commutant"]["coeffs"] == [[0], [2], [1]] + [[0]] * 5


def test_log_fractions(capsys):
    assert run([
        "log", "--p", "3", "--precN", "10", "--precT", "8", "--P", "(1+T)^3-1", "--effPrec", "4",
    ]) == 0
    envelope = output(capsys)
    assert envelope["meta"]["precN"] == 4
    assert envelope["result"]["functionalEquation"]
    fractions = envelope["result"]["fractions"]
    assert fractions[1] == "1"
    assert fractions[3] == "1/3"


def test_root_profile_command(capsys):
    assert run([
        "root-profile", "--p", "3", "--precN", "10", "--precT", "32", "--P", "(1+T)^3-1", "--n", "2",
    ]) == 0
    result = output(capsys)["result"]
    assert result["profile"] == [
        {"slope": "-1/2", "multiplicity": 2},
        {"slope": "-1/6", "multiplicity": 6},
    ]
    assert result["levels"] == [{"slope": "-1/6", "multiplicity": 6}]


def test_bad_literal_exits_2(capsys, caplog):
    assert run(["fg-build", "--p", "3", "--precN", "6", "--precT", "8", "--frob", "2*T + $"]) == 2
    assert capsys.readouterr().out == ""
    assert "column 6" in caplog.text


def test_malformed_json_exits_2(tmp_path, caplog):
    broken = tmp_path / "broken.json"
    broken.write_text("{\"P\": \n", encoding="utf-8")
    assert run(["verify-lift", "--datum", str(broken)]) == 2
    assert "line 2" in caplog.text


def test_missing_subcommand_exits_2():
    assert run([]) == 2


def test_exhausted_precision_exits_3(monkeypatch):
    monkeypatch.setenv(GUARD_ENV, "0")
    assert run(["fg-build", "--p", "3", "--precN", "5", "--precT", "10", "--frob", "(1+T)^3-1"]) == 3


def test_bad_guard_variable_exits_2(monkeypatch):
    monkeypatch.setenv(GUARD_ENV, "many")
    assert run(["fg-build", *MULTIPLICATIVE]) == 2


def test_batch(tmp_path, capsys):
    jobs = tmp_path / "jobs.json"
    jobs.write_text(json.dumps([
        {
            "command": "fg-build",
            "ring": {"p": 3, "precN": 6},
            "precT": 6,
            "inputs": {"frob": "(1+T)^3-1"},
        },
        {
            "command": "seed-check",
            "ring": {"p": 3, "precN": 6},
            "precT": 8,
            "inputs": {"P": "3*T + T^3 + T^4", "d": 3},
        },
        {"command": "no-such-command"},
    ]), encoding="utf-8")
    assert run(["batch", "--jobs", str(jobs)]) == 2
    results = output(capsys)["jobs"]
    assert [entry["exitCode"] for entry in results] == [0, 1, 2]
    assert results[0]["output"]["holds"]
    assert results[1]["output"]["result"] == {"seed": False}
    assert "error" in results[2]


def test_summary_is_logged(capsys, caplog):
    assert run(["newton", "--p", "3", "--precN", "4", "--precT", "4", "--series", "3 + T^2"]) == 0
    assert output(capsys)["result"]["polygon"]["vertices"] == [[0, 1], [2, 0]]
    assert "newton:" in caplog.text


def test_root_profile_beyond_precision_exits_3(capsys, caplog):
    assert run([
        "root-profile", "--p", "3", "--precN", "3", "--precT", "32", "--P", "(1+T)^3-1", "--n", "3",
    ]) == 3
    assert capsys.readouterr().out == ""
    assert "PrecisionExhausted" in caplog.text


def test_parsers_keep_their_own_inputs():
    first, second = build_parser(), build_parser()
    assert second.parse_args(["commutant", "--P", "T", "--c", "2"]).input_keys == ("P", "c")
    assert first.parse_args(["newton", "--series", "T"]).input_keys == ("series",)
    assert first.parse_args(["verify-lift", "--cyclotomic"]).input_keys == ("datum", "builtin", "units")
