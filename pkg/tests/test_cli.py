import json
import random

import pytest

from trisect.cli import (
    DiagramFile,
    DiagramFileError,
    load_example,
    main,
    parse,
    parse_diagram_dict,
    serialize,
)
from trisect.corpus import EXAMPLE_NAMES, random_diagram
from trisect.diagram import InvalidDiagramError, MatrixDiagram, TrisectionDiagram
from trisect.linalg import mat_eq


def write(tmp_path, name, payload):
    p = tmp_path / name
    p.write_text(json.dumps(payload))
    return str(p)


def example_path(tmp_path, name):
    return write(tmp_path, f"{name}.json", load_example(name))


def test_bundled_examples_parse_and_roundtrip():
    for name in EXAMPLE_NAMES:
        payload = load_example(name)
        df = parse_diagram_dict(payload)
        assert df.name == name
        again = parse_diagram_dict(serialize(df))
        assert type(again.diagram) is type(df.diagram)
        assert serialize(again) == serialize(df)


def test_roundtrip_random_curves():
    rng = random.Random(4)
    for _ in range(10):
        d = random_diagram(rng)
        df = DiagramFile(1, "x", d)
        df2 = parse_diagram_dict(serialize(df))
        assert isinstance(df2.diagram, TrisectionDiagram)
        for label in ("alpha", "beta", "gamma"):
            assert mat_eq(df2.diagram.system(label).classes, d.system(label).classes)


def test_parse_rejects_bad_files(tmp_path):
    with pytest.raises(DiagramFileError):
        parse(str(tmp_path / "missing.json"))
    with pytest.raises(DiagramFileError):
        parse(write(tmp_path, "bad.json", {"version": 2}))
    with pytest.raises(DiagramFileError):
        parse_diagram_dict({"version": 1})  # no payload
    with pytest.raises(DiagramFileError):
        parse_diagram_dict({"version": 1, "curves": {"genus": 1, "alpha": [[1, 0]],
                                                     "beta": [[0, 1]], "gamma": [[1]]}})
    with pytest.raises(DiagramFileError):
        parse_diagram_dict({"version": 1, "curves": {"genus": 1, "alpha": [[1.5, 0]],
                                                     "beta": [[0, 1]], "gamma": [[1, 1]]}})


def test_parse_checks_isotropy_with_offending_pair():
    bad = {
        "version": 1,
        "curves": {
            "genus": 2,
            "alpha": [[1, 0, 0, 0], [0, 0, 1, 0]],  # <alpha_1, alpha_2> = 1
            "beta": [[0, 0, 1, 0], [0, 0, 0, 1]],
            "gamma": [[1, 0, 1, 0], [0, 1, 0, 1]],
        },
    }
    with pytest.raises(InvalidDiagramError, match="alpha_1, alpha_2"):
        parse_diagram_dict(bad)


def test_beta_gamma_alias():
    base = load_example("s2xs2")
    gb = base["matrices"].pop("gamma_beta")
    base["matrices"]["beta_gamma"] = [[-gb[j][i] for j in range(2)] for i in range(2)]
    df = parse_diagram_dict(base)
    assert isinstance(df.diagram, MatrixDiagram)
    assert df.diagram.q_gb.tolist() == gb


def test_cli_form_s2xs2(tmp_path, capsys):
    code = main(["form", example_path(tmp_path, "s2xs2"), "--json"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["schema"] == "trisect/v1"
    assert out["matrix"] == [[0, 1], [1, 0]]
    assert set(out["methods"]) == {"definition", "fast"}
    assert out["agree"] is True
    assert out["invariants"] == {"rank": 2, "signature": 0, "parity": "even",
                                 "determinant": -1}


def test_cli_homology_s1xs3(tmp_path, capsys):
    code = main(["homology", example_path(tmp_path, "s1xs3"), "--json"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["groups"] == [
        {"free": 1, "torsion": []},
        {"free": 1, "torsion": []},
        {"free": 0, "torsion": []},
        {"free": 1, "torsion": []},
        {"free": 1, "torsion": []},
    ]
    assert out["euler_characteristic"] == 0


def test_cli_validate_invalid_exits_1(tmp_path, capsys):
    path = write(tmp_path, "bad.json", {
        "version": 1,
        "curves": {"genus": 1, "alpha": [[1, 0]], "beta": [[2, 0]], "gamma": [[0, 1]]},
    })
    code = main(["validate", path])
    out = capsys.readouterr().out
    assert code == 1
    assert "INVALID" in out


def test_cli_other_commands_exit_1_on_invalid(tmp_path, capsys):
    path = write(tmp_path, "bad.json", {
        "version": 1,
        "curves": {"genus": 1, "alpha": [[1, 0]], "beta": [[2, 0]], "gamma": [[0, 1]]},
    })
    code = main(["homology", path])
    err = capsys.readouterr().err
    assert code == 1
    assert "invalid diagram" in err


def test_cli_usage_errors_exit_2(tmp_path, capsys):
    assert main(["homology", str(tmp_path / "nope.json")]) == 2
    capsys.readouterr()
    assert main(["example", "nonsense"]) == 2
    capsys.readouterr()
    # linking on a matrices payload cannot work
    assert main(["linking", example_path(tmp_path, "s2xs2"), "--j", "1,0,0,0",
                 "--k", "0,1,0,0"]) == 2


def test_cli_linking(tmp_path, capsys):
    code = main(["linking", example_path(tmp_path, "cp2"), "--pair", "ab",
                 "--j", "2,1", "--k", "2,1", "--json"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["linking_number"] == 2


def test_cli_reduce_and_replay_roundtrip(tmp_path, capsys):
    src = example_path(tmp_path, "s2xs2")
    log = str(tmp_path / "out.moves")
    code = main(["reduce", src, "--log", log, "--json"])
    reduced = json.loads(capsys.readouterr().out)
    assert code == 0
    assert reduced["alpha_beta"] == [[1, 0], [0, 1]]
    assert reduced["gamma_beta"] == [[1, 0], [0, 1]]
    assert reduced["alpha_gamma"] == [[0, 1], [1, 0]]
    assert reduced["congruence"]["verified"] is True

    code = main(["replay", src, "--log", log, "--json"])
    replayed = json.loads(capsys.readouterr().out)
    assert code == 0
    for key in ("alpha_beta", "gamma_beta", "alpha_gamma"):
        assert replayed[key] == reduced[key]


def test_cli_reduce_cp2bar(tmp_path, capsys):
    code = main(["reduce", example_path(tmp_path, "cp2_cp2bar"), "--json"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["alpha_gamma"] == [[1, 0], [0, -1]]


def test_cli_example_random_is_seed_deterministic(capsys):
    assert main(["example", "random", "--seed", "11", "--genus", "4"]) == 0
    first = capsys.readouterr().out
    assert main(["example", "random", "--seed", "11", "--genus", "4"]) == 0
    second = capsys.readouterr().out
    assert first == second
    df = parse_diagram_dict(json.loads(first))
    assert df.diagram.genus == 4


def test_cli_example_outputs_parse(tmp_path, capsys):
    for name in EXAMPLE_NAMES:
        assert main(["example", name]) == 0
        payload = json.loads(capsys.readouterr().out)
        parse_diagram_dict(payload)


def test_cli_human_output_mentions_groups(tmp_path, capsys):
    main(["homology", example_path(tmp_path, "cp2")])
    out = capsys.readouterr().out
    assert "H_2 = Z" in out
    assert "euler characteristic = 3" in out
