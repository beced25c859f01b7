import json

import pytest

from npc.cli import (
    EXIT_GENERICITY,
    EXIT_IMPROPER,
    EXIT_INPUT,
    EXIT_LINEAR,
    EXIT_OK,
    EXIT_SINGULAR,
    ResultReport,
    cmd_degree,
    main,
)
from npc.fixtures import FIXTURES, fixture
from npc.groebner import SchemeStats, scheme_stats
from npc.problem import ProblemSpec, SpecError

P3 = ["x0", "x1", "x2", "x3"]


def write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def run_json(capsys, argv):
    code = main(argv + ["--json"])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    return out, json.loads(out)


@pytest.fixture(scope="module")
def quartic_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("fx") / "quartic.json"
    assert main(["fixture", "quartic-surface", "-o", str(path)]) == EXIT_OK
    return str(path)


def test_degree_of_zero_ideal(tmp_path, capsys):
    path = write(tmp_path, "zero.json", {"variables": P3, "variety": []})
    _, data = run_json(capsys, ["degree", path])
    assert data["variety"] == {"ambient": 3, "dim": 3, "degree": 1}
    report = cmd_degree(ProblemSpec.load(path))
    assert (report.variety["dim"], report.variety["degree"]) == (3, 1)


def test_euler_on_quartic_surface(quartic_file, capsys):
    out, data = run_json(capsys, ["euler", quartic_file])
    assert data["polar_degrees"] == [4, 8, 12]
    assert data["chi"] == {"0": "1", "1": "2", "2": "1"}
    assert data["ed_degree"] == 24
    assert data["dual"]["degree"] == 12
    assert data["provenance"] == {"seed": 0, "prime": 32003, "retries_used": 0}
    # re-reading and re-printing gives the same bytes
    assert ResultReport.loads(out).dumps() == out
    assert main(["euler", quartic_file]) == EXIT_OK
    text = capsys.readouterr().out
    assert "chi(X, a*D) = 1 + 2*a + a^2" in text
    assert "ED degree: 24" in text


def test_products_ed_dual_polar(quartic_file, capsys):
    _, data = run_json(capsys, ["products", quartic_file])
    degrees = {(tuple(e["m"]), tuple((d["k"], d["a"]) for d in e["divisors"])): e["degree"] for e in data["products"]}
    assert degrees[((2, 0), ((1, 0),))] == 16
    assert degrees[((1, 0), ((1, 1),))] == 8
    assert degrees[((0, 0), ((2, 1),))] == 6
    assert run_json(capsys, ["ed", quartic_file])[1]["ed_degree"] == 24
    assert run_json(capsys, ["dual", quartic_file])[1]["dual"] == {"dim": 3, "degree": 12}
    assert run_json(capsys, ["polar", quartic_file, "--jobs", "2"])[1]["polar_degrees"] == [4, 8, 12]


def test_polar_on_segre(tmp_path, capsys):
    path = str(tmp_path / "segre.json")
    main(["fixture", "segre-p1p2", "-o", path])
    assert run_json(capsys, ["polar", path])[1]["polar_degrees"] == [3, 4, 3, 0]


def test_same_seed_same_bytes(quartic_file, capsys):
    first, _ = run_json(capsys, ["euler", quartic_file, "--seed", "5"])
    second, _ = run_json(capsys, ["euler", quartic_file, "--seed", "5"])
    assert first == second


def test_fixture_stats():
    X, divs, _ = fixture("quartic-surface").ideals()
    assert scheme_stats(X) == SchemeStats(2, 4)
    assert scheme_stats(divs[0]) == SchemeStats(1, 4)
    X, divs, _ = fixture("ci-threefold").ideals()
    assert scheme_stats(X) == SchemeStats(3, 4)
    assert scheme_stats(divs[0]) == SchemeStats(2, 8)
    X, _, _ = fixture("segre-p1p2").ideals()
    assert scheme_stats(X) == SchemeStats(3, 3)


def test_fixture_to_stdout_is_seeded(capsys):
    for name in FIXTURES[:1]:
        main(["fixture", name, "--seed", "3"])
        a = capsys.readouterr().out
        main(["fixture", name, "--seed", "3"])
        assert capsys.readouterr().out == a
        main(["fixture", name, "--seed", "4"])
        assert capsys.readouterr().out != a


def test_exit_codes(tmp_path, capsys):
    bad = write(tmp_path, "bad.json", {"variables": P3, "variety": ["x0*x9"]})
    assert main(["degree", bad]) == EXIT_INPUT
    missing = str(tmp_path / "nope.json")
    assert main(["degree", missing]) == EXIT_INPUT
    plane = write(tmp_path, "plane.json", {"variables": P3, "variety": ["x0"]})
    assert main(["dual", plane]) == EXIT_LINEAR
    # a plane union a line: polar loci have the wrong dimension for every seed
    mixed = write(tmp_path, "mixed.json", {"variables": P3, "variety": ["x0*x2", "x0*x3"]})
    assert main(["polar", mixed]) == EXIT_GENERICITY
    cone = write(tmp_path, "cone.json", {"variables": P3, "variety": ["x0*x1 - x2^2"]})
    assert main(["degree", cone, "--check-smooth"]) == EXIT_SINGULAR
    assert main(["degree", cone]) == EXIT_OK
    twice = write(
        tmp_path,
        "twice.json",
        {"variables": P3, "variety": ["x0*x1 - x2*x3"], "divisors": {"D": ["x0 + x1 + x2"], "E": ["x0 + x1 + x2"]}},
    )
    assert main(["euler", twice]) == EXIT_IMPROPER
    assert main(["euler", twice, "--divisors", "D"]) == EXIT_OK
    capsys.readouterr()


def test_spec_validation():
    with pytest.raises(SpecError):
        ProblemSpec.from_dict({"variables": P3, "variety": [], "extra": 1})
    with pytest.raises(SpecError):
        ProblemSpec.from_dict({"variables": P3, "variety": [], "divisors": {"c1": ["x0"]}})
    with pytest.raises(SpecError):
        ProblemSpec.from_dict({"variety": []})
    spec = fixture("veronese-projection")
    assert ProblemSpec.from_dict(json.loads(spec.dumps())) == spec
    assert spec.prime == 32003
