"""End-to-end CLI checks, run in process through main(argv).

Contract under test: exit code 0 for clean runs, 1 for domain failures,
2 for undetermined valuations, 64 for usage errors; every non-usage path
prints one complete JSON report; --svg output is byte-stable.
"""

import json

import pytest

from ramtower.cli import main
from ramtower.jsonio import (
    read_report,
    schedule_from_json,
    tate_breaks_from_json,
    torsion_trace_from_json,
)
from ramtower.polygon import build_polygon, polygon_from_json
from ramtower.tate import eisenstein_trinomial, tate_breaks
from ramtower.towers import TowerParams, filtration_tables, torsion_valuations
from ramtower.fq import fq_field


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report_of(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, read_report(out)


def test_polygon_happy_path(capsys):
    code, rep = report_of(capsys, "polygon", "--points", "1:1,2:1,4:0")
    assert code == 0 and rep.status == "ok"
    assert polygon_from_json(rep.payload) == build_polygon([(1, 1), (2, 1), (4, 0)])
    assert rep.payload["vertices"] == [[1, "1"], [4, "0"]]
    assert rep.payload["sides"][0]["slope"] == "-1/3"


def test_polygon_rejects_fractional_abscissa(capsys):
    code, out, err = run(capsys, "polygon", "--points", "1/2:1,2:0")
    assert code == 64
    assert out == ""
    assert "integers" in err


def test_polygon_rejects_garbage(capsys):
    code, _, err = run(capsys, "polygon", "--points", "a:b")
    assert code == 64 and "rational" in err


def test_missing_subcommand_is_usage(capsys):
    code, out, err = run(capsys)
    assert code == 64 and out == "" and "usage" in err.lower()


def test_unknown_flag_exits_64(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["polygon", "--nope"])
    assert exc.value.code == 64


def test_herbrand_composition(capsys):
    code, rep = report_of(
        capsys, "herbrand", "--layer", "2:3:2", "--layer", "2:15:2", "--eval", "63"
    )
    assert code == 0
    assert rep.payload["phi_values"] == [["63", "21"]]
    assert rep.payload["psi_values"] == [["63", "231"]]


def test_herbrand_bad_layer(capsys):
    code, _, err = run(capsys, "herbrand", "--layer", "2:3")
    assert code == 64 and "ORDER:BREAK:DROP" in err


def test_formal_honda_check(capsys):
    code, rep = report_of(
        capsys, "formal", "--p", "2", "--q", "2", "--honda", "1", "--prec", "8", "--check"
    )
    assert code == 0
    assert rep.payload["group_law"]["ok"] is True
    assert [c["ok"] for c in rep.payload["congruences"]] == [True, True, True]
    assert rep.payload["law"]["D"] == 8


def test_formal_values_flag_required(capsys):
    code, _, err = run(capsys, "formal", "--p", "2", "--q", "2")
    assert code == 64 and "--values" in err


def test_prec_env_var_supplies_default(capsys, monkeypatch):
    monkeypatch.setenv("RAMTOWER_PREC", "12")
    code, rep = report_of(capsys, "formal", "--p", "2", "--q", "2", "--honda", "1")
    assert code == 0 and rep.payload["law"]["D"] == 12


def test_prec_env_var_must_be_integer(capsys, monkeypatch):
    monkeypatch.setenv("RAMTOWER_PREC", "soon")
    code, _, err = run(capsys, "formal", "--p", "2", "--q", "2", "--honda", "1")
    assert code == 64 and "RAMTOWER_PREC" in err


def test_tate_single_break(capsys):
    code, rep = report_of(capsys, "tate", "--p", "2", "--poly", "t;t;1")
    assert code == 0
    assert rep.payload["breaks"] == ["1"]
    again = tate_breaks_from_json(rep.payload)
    assert again.breaks == tate_breaks(eisenstein_trinomial(fq_field(2), 1)).breaks


def test_tate_alias(capsys):
    # x^3 + t^3·x + t over F_3 through the long-form command name
    code, rep = report_of(capsys, "tate-breaks", "--p", "3", "--poly", "t;t^3;0;1")
    assert code == 0
    assert rep.payload["breaks"] == ["7/2"]


def test_tate_field_ext(capsys):
    code, rep = report_of(
        capsys, "tate", "--p", "2", "--field-ext", "2", "--poly", "t;t;0;0;1"
    )
    assert code == 0
    assert rep.payload["breaks"] == ["1/3"]


def test_tate_precision_exit(capsys):
    code, rep = report_of(capsys, "tate", "--p", "2", "--poly", "t;O(t^3);1")
    assert code == 2
    assert rep.status == "precision-error"
    assert "error" in rep.payload


def test_tate_domain_failure(capsys):
    code, rep = report_of(capsys, "tate", "--p", "2", "--poly", "t^2;t;1")
    assert code == 1
    assert rep.status == "fail"
    assert rep.payload["kind"] == "ValueError"


def test_tate_hypothesis_diagnostic(capsys):
    # v(a_2) = 1 < v(a_1) = 2: report stays ok but carries a warning
    code, rep = report_of(capsys, "tate", "--p", "3", "--poly", "t;t^2;t;1")
    assert code == 0
    assert any("undercuts" in d for d in rep.diagnostics)


def test_tower_schedule(capsys):
    code, rep = report_of(
        capsys,
        *"tower schedule --p 2 --q 2 --g 1 --d 1 --N 0 --c 1 --n 3".split(),
    )
    assert code == 0
    assert rep.payload["upper"] == ["3", "9", "21"]
    params = TowerParams(p=2, q=2, g=1, d=1, N=0, c=1)
    assert schedule_from_json(rep.payload) == filtration_tables(params, 3)


def test_tower_schedule_guard(capsys):
    code, rep = report_of(
        capsys,
        *"tower schedule --p 2 --q 2 --g 1 --d 1 --N 2 --c 1 --n 1".split(),
    )
    assert code == 1
    assert rep.payload["kind"] == "GuardViolation"


def test_tower_schedule_lint_in_diagnostics(capsys):
    code, rep = report_of(
        capsys,
        *"tower schedule --p 3 --q 3 --g 1 --d 1 --N 0 --c 1 --n 2".split(),
    )
    assert code == 0
    assert any("not an integer" in d for d in rep.diagnostics)


def test_tower_torsion(capsys):
    code, rep = report_of(
        capsys, *"tower torsion --vals 1,1 --q 2 --g 1 --nmax 4".split()
    )
    assert code == 0
    assert rep.payload["valuations"][:2] == ["1/3", "1/12"]
    assert torsion_trace_from_json(rep.payload) == torsion_valuations(
        (1, 1), q=2, g=1, n_max=4
    )


def test_tower_torsion_branch_choice(capsys):
    with pytest.raises(SystemExit) as exc:
        main("tower torsion --vals 1 --q 2 --g 1 --nmax 2 --branch sideways".split())
    assert exc.value.code == 64


def test_verify_small_grid_serial_and_parallel(capsys):
    code1, rep1 = report_of(capsys, "verify", "--grid", "small", "--jobs", "1")
    code2, rep2 = report_of(
        capsys, "tower", "verify", "--grid", "small", "--jobs", "2", "--depth", "4"
    )
    assert code1 == 0 and code2 == 0
    assert rep1.payload["counterexamples"] == 0
    assert rep2.payload["counterexamples"] == 0
    assert rep1.payload["tuples"] == rep2.payload["tuples"] == 16
    assert rep1.payload["cases"] == rep2.payload["cases"] == 64
    assert rep1.payload["jobs"] == 1 and rep2.payload["jobs"] == 2


def test_svg_is_byte_stable(capsys, tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    assert main(["polygon", "--points", "1:1,2:1,4:0", "--svg", str(a)]) == 0
    assert main(["polygon", "--points", "1:1,2:1,4:0", "--svg", str(b)]) == 0
    capsys.readouterr()
    first, second = a.read_bytes(), b.read_bytes()
    assert first == second
    text = first.decode()
    assert "slope -1/3" in text
    assert "(4, 0)" in text


def test_torsion_svg_renders_last_snapshot(capsys, tmp_path):
    target = tmp_path / "trace.svg"
    code = main(
        f"tower torsion --vals 1 --q 2 --g 1 --nmax 3 --svg {target}".split()
    )
    capsys.readouterr()
    assert code == 0
    assert target.read_text().startswith("<svg")


def test_report_is_well_formed_json_on_every_exit(capsys):
    # same schema on ok, fail and precision paths
    for argv, expected in [
        (["polygon", "--points", "1:1,4:0"], 0),
        (["tate", "--p", "2", "--poly", "t^2;t;1"], 1),
        (["tate", "--p", "2", "--poly", "t;O(t^3);1"], 2),
    ]:
        code, out, _ = run(capsys, *argv)
        assert code == expected
        doc = json.loads(out)
        assert set(doc) == {"schema", "status", "payload", "diagnostics"}
        assert doc["schema"] == 1
