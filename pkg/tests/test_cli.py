import json
from pathlib import Path

import pytest

from diagram_sos.cli import RunConfig, main
from diagram_sos.errors import DiagramError
from diagram_sos.sos import SCHEMA_VERSION

EX5 = str(Path(__file__).resolve().parent.parent / "data" / "ex5.proc")
HANDSHAKE = str(Path(__file__).resolve().parent.parent / "data" / "handshake.proc")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_place_lts_json(capsys):
    code, out, _ = run(capsys, "sos", "lts", "--algebra", "nat:6", "--term", "place:2", "--format", "json")
    assert code == 0
    j = json.loads(out)
    assert j["schema"] == SCHEMA_VERSION and j["complete"]
    assert len(j["states"]) == 7
    # place law from the root (state 0 holds two tokens)
    root_moves = {(e[1], e[2]) for e in j["edges"] if e[0] == 0}
    assert root_moves == {(str(i), str(o)) for i in range(7) for o in range(3) if i + 2 - o <= 6}


def test_bisim_exit_codes(capsys):
    assert run(capsys, "bisim", "check", "--algebra", "zmod:2", "--left", "bnew;bdel", "--right", "id0")[0] == 0
    code, out, _ = run(capsys, "bisim", "check", "--left", "reg(0)", "--right", "reg(1)")
    assert code == 1 and "witness" in out


def test_theorem_example(capsys):
    code, out, _ = run(
        capsys, "proc", "theorem", "--mode", "hoare", "--depth", "3", "--decls", EX5, "--root", "1: nu(2) (f [perm 1 2] | g)"
    )
    assert code == 0 and "pass" in out


def test_milner_theorem(capsys):
    code, _, _ = run(capsys, "proc", "theorem", "--mode", "milner", "--decls", HANDSHAKE, "--root", "1: f | h")
    assert code == 0


@pytest.mark.parametrize(
    "argv,code",
    [
        (["parse", "--term", "bcopy ; bmerge"], 0),
        (["sort", "--term", "place:1"], 0),
        (["congruent", "--left", "swap;swap", "--right", "id*id"], 0),
        (["congruent", "--left", "bcopy", "--right", "wcopy"], 1),
        (["diagram", "dot", "--term", "bcopy;bmerge"], 0),
        (["sos", "step", "--term", "reg(1)"], 0),
        (["sos", "lts", "--term", "reg(1)", "--format", "dot"], 0),
        (["check-frobenius", "--mode", "black", "--algebra", "zmod:3"], 0),
        (["check-frobenius", "--mode", "white", "--algebra", "bool"], 1),
        (["congruence-probe", "--samples", "10"], 0),
        (["lawvere-demo"], 0),
        (["proc", "typecheck", "--decls", EX5, "--root", "3: f"], 0),
        (["proc", "encode", "--decls", EX5, "--root", "1: f | g [perm 1 2]"], 2),
        (["proc", "encode", "--decls", EX5, "--root", "2: f | g"], 0),
        (["proc", "lts", "--decls", EX5, "--root", "1: f"], 0),
    ],
)
def test_subcommands(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["parse", "--term", "bcopy ;;"],
        ["sort", "--term", "bcopy ; bcopy"],
        ["parse", "--algebra", "zmod:0", "--term", "id"],
        ["parse", "--term", "place:9"],
        ["proc", "typecheck", "--decls", "/nonexistent.proc", "--root", "1: f"],
        ["proc", "typecheck", "--decls", EX5, "--root", "0: f"],
        ["proc", "typecheck", "--decls", EX5, "--root", "f"],
        ["sos", "lts", "--term", "id", "--max-states", "0"],
        ["bisim", "check", "--left", "id", "--right", "swap"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.strip()


def test_diagnostic_has_position(capsys):
    _, _, err = run(capsys, "parse", "--term", "bcopy ;;")
    assert "position 7" in err and "^" in err


def test_json_everywhere_has_schema(capsys):
    for argv in (
        ["parse", "--term", "id", "--format", "json"],
        ["check-frobenius", "--mode", "black", "--algebra", "bool", "--format", "json"],
        ["lawvere-demo", "--format", "json"],
        ["proc", "theorem", "--decls", EX5, "--root", "1: f", "--format", "json"],
    ):
        code, out, _ = run(capsys, *argv)
        assert code == 0 and json.loads(out)["schema"] == SCHEMA_VERSION


def test_deterministic_json(capsys, tmp_path):
    argv = ["congruence-probe", "--samples", "15", "--seed", "4", "--format", "json"]
    a = run(capsys, *argv)[1]
    b = run(capsys, *argv)[1]
    assert a == b
    out = tmp_path / "lts.json"
    main(["sos", "lts", "--algebra", "nat:6", "--term", "place:2", "--format", "json", "--output", str(out)])
    first = out.read_bytes()
    main(["sos", "lts", "--algebra", "nat:6", "--term", "place:2", "--format", "json", "--output", str(out)])
    assert out.read_bytes() == first


def test_truncation_caveat(capsys):
    code, out, _ = run(capsys, "sos", "lts", "--algebra", "nat:6", "--term", "place:0", "--max-states", "3")
    assert code == 0 and "caveat" in out


def test_signature_file(capsys, tmp_path):
    f = tmp_path / "sig.json"
    f.write_text(json.dumps({"frobenius": "black", "generators": [
        {"symbol": "blink", "arity": 0, "coarity": 1, "transitions": [{"in": "", "out": "1", "next": "blink"}]}
    ]}))
    code, out, _ = run(capsys, "sos", "step", "--signature", str(f), "--term", "blink ; bcopy")
    assert code == 0 and out.strip() == "ε/11 -> blink ; bcopy"


def test_run_config_validation():
    assert RunConfig("parse").seed == 0
    with pytest.raises(DiagramError):
        RunConfig("sos lts", max_depth=0)
