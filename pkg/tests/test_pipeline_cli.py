import json
import subprocess
import sys

import pytest

from tiltforge.cli import main
from tiltforge.fixtures import cyclic_4_1133, cyclic_5_122
from tiltforge.pipeline import (
    HypothesisError,
    PipelineInput,
    cmd_check,
    cmd_tilt,
    cmd_tilt_a,
    cmd_tilt_b,
)
from tiltforge.skewgroup import CyclicGroupData, arrow_id


def input_5_122():
    g, grading, e = cyclic_5_122()
    return PipelineInput(group=g, grading=grading, e_vertices=e)


def input_4_1133():
    g, grading, e = cyclic_4_1133()
    return PipelineInput(group=g, grading=grading, e_vertices=e)


def grading_file(tmp_path, grading, name="fixture.grading"):
    path = tmp_path / name
    path.write_text(
        "".join(f"{k} {grading[k]}\n" for k in sorted(grading)), encoding="utf-8"
    )
    return str(path)


# ---------------------------------------------------------------------------
# pipeline
# ---------------------------------------------------------------------------

def test_check_5_122_verdicts():
    rep = cmd_check(input_5_122())
    hyp = rep["hypotheses"]
    assert hyp["sl"]["holds"] and hyp["isolated"]["holds"]
    assert rep["ell"] == 2
    assert hyp["eA0e_is_k"]["holds"]
    assert hyp["eA0_eprime_zero"]["holds"]
    assert hyp["eprime_A0_e_zero"]["holds"]
    assert hyp["nabla_levelled"]["holds"] is False
    assert rep["route_eligibility"]["A"]["eligible"]
    assert not rep["route_eligibility"]["B"]["eligible"]


def test_check_4_1133_verdicts():
    rep = cmd_check(input_4_1133())
    hyp = rep["hypotheses"]
    assert hyp["sl"]["holds"] and hyp["isolated"]["holds"]
    assert rep["ell"] == 2
    assert hyp["eA0e_is_k"]["holds"]
    assert hyp["eA0_eprime_zero"]["holds"] is False  # four degree-0 arrows leave vertex 0
    assert hyp["nabla_levelled"]["holds"] and hyp["nabla_koszul"]["holds"]
    assert not rep["route_eligibility"]["A"]["eligible"]
    assert rep["route_eligibility"]["B"]["eligible"]


def test_check_non_isolated_flags_finiteness():
    g = CyclicGroupData(4, (1, 2, 1))
    grading = {arrow_id(j, i): 1 for i in range(4) for j in range(1, 4)}
    rep = cmd_check(PipelineInput(group=g, grading=grading, e_vertices=("0",)))
    hyp = rep["hypotheses"]
    assert hyp["sl"]["holds"]
    assert hyp["isolated"]["holds"] is False
    assert hyp["a_over_AeA_finite"]["holds"] is None
    assert "not established" in hyp["a_over_AeA_finite"]["detail"]


def test_tilt_a_golden_5_122():
    rep = cmd_tilt_a(input_5_122())
    assert rep["route"] == "A"
    pres = rep["presentation"]
    assert len(pres["vertices"]) == 8
    assert len(pres["arrows"]) == 14
    assert rep["cross_checks"]["dims_agree"]


def test_tilt_a_refused_on_4_1133():
    with pytest.raises(HypothesisError) as exc:
        cmd_tilt_a(input_4_1133())
    assert "eA0_eprime_zero" in exc.value.failures
    assert exc.value.report["presentation"] is None


def test_tilt_b_golden_4_1133():
    rep = cmd_tilt_b(input_4_1133())
    assert rep["route"] == "B"
    pres = rep["presentation"]
    assert len(pres["vertices"]) == 6
    assert len(pres["arrows"]) == 14
    cc = rep["cross_checks"]
    assert cc["triple_agreement"] and cc["coxeter_relation"] and cc["dims_agree"]
    assert cc["cartan_dual"] == cc["gram_left_dual"] == cc["ext_gram"]


def test_tilt_b_refused_on_5_122():
    with pytest.raises(HypothesisError) as exc:
        cmd_tilt_b(input_5_122())
    assert "nabla_levelled" in exc.value.failures


def test_tilt_auto_picks_the_eligible_route():
    assert cmd_tilt(input_5_122(), "auto")["route"] == "A"
    assert cmd_tilt(input_4_1133(), "auto")["route"] == "B"


def test_route_a_refuses_high_cycle_degree():
    # all arrows in degree 1 on 1/5(1,2,2) gives cycle degree 3
    g = CyclicGroupData(5, (1, 2, 2))
    grading = {arrow_id(j, i): 1 for i in range(5) for j in range(1, 4)}
    inp = PipelineInput(group=g, grading=grading, e_vertices=("0",))
    with pytest.raises(HypothesisError) as exc:
        cmd_tilt_a(inp)
    assert any("not in {1, 2}" in f for f in exc.value.failures)


def test_trivial_group_zero_algebra_report():
    inp = PipelineInput(group=CyclicGroupData(1, (1,)), grading={"x1@0": 1}, e_vertices=("0",))
    rep = cmd_tilt_a(inp)
    assert rep["presentation"] is None
    assert any("singularity category trivial" in n for n in rep["notes"])


def test_smooth_case_empty_truncation():
    inp = PipelineInput(
        group=CyclicGroupData(1, (0, 0)),
        grading={"x1@0": 1, "x2@0": 1},
        e_vertices=("0",),
    )
    rep = cmd_tilt_b(inp)
    assert rep["presentation"] is None
    assert any("singularity category trivial" in n for n in rep["notes"])


def test_reports_are_deterministic():
    r1 = json.dumps(cmd_tilt_b(input_4_1133()), indent=2)
    r2 = json.dumps(cmd_tilt_b(input_4_1133()), indent=2)
    assert r1 == r2


def test_report_schema_keys():
    rep = cmd_tilt_b(input_4_1133())
    assert list(rep.keys()) == [
        "input", "hypotheses", "ell", "route", "presentation",
        "cross_checks", "notes", "route_eligibility",
    ]


def test_no_presentation_alongside_failed_route():
    for inp, runner in ((input_4_1133(), cmd_tilt_a), (input_5_122(), cmd_tilt_b)):
        with pytest.raises(HypothesisError) as exc:
            runner(inp)
        assert exc.value.report["presentation"] is None


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

def test_cli_mckay_counts(tmp_path, capsys):
    assert main(["mckay", "--r", "5", "--weights", "1,2,2"]) == 0
    out = capsys.readouterr().out
    assert out.count("vertex ") == 5
    assert out.count("arrow ") == 15
    assert out.count("relation ") == 15


def test_cli_nabla_counts(tmp_path, capsys):
    _, grading, _ = cyclic_4_1133()
    gf = grading_file(tmp_path, grading)
    assert main(["nabla", "--r", "4", "--weights", "1,1,3,3", "--grading", gf]) == 0
    out = capsys.readouterr().out
    assert out.count("vertex ") == 8
    assert out.count("arrow ") == 24


def test_cli_nabla_inline_degrees(capsys):
    _, grading, _ = cyclic_5_122()
    args = ["nabla", "--r", "5", "--weights", "1,2,2"]
    for aid, deg in sorted(grading.items()):
        args += ["--deg", f"{aid}={deg}"]
    assert main(args) == 0
    out = capsys.readouterr().out
    assert out.count("vertex ") == 10
    assert out.count("arrow ") == 20


def test_cli_dual_emits_anticommutators(tmp_path, capsys):
    _, grading, _ = cyclic_4_1133()
    gf = grading_file(tmp_path, grading)
    assert main(["dual", "--r", "4", "--weights", "1,1,3,3", "--grading", gf]) == 0
    out = capsys.readouterr().out
    assert out.count("relation ") == 40
    assert " - " not in out  # annihilator of commutators has positive signs


def test_cli_tilt_b_json_report(tmp_path):
    _, grading, _ = cyclic_4_1133()
    gf = grading_file(tmp_path, grading)
    out = tmp_path / "report.json"
    code = main([
        "tilt", "--r", "4", "--weights", "1,1,3,3", "--grading", gf,
        "--e", "0", "--route", "B", "--out", str(out),
    ])
    assert code == 0
    rep = json.loads(out.read_text(encoding="utf-8"))
    assert rep["route"] == "B"
    assert rep["cross_checks"]["triple_agreement"] is True
    assert len(rep["presentation"]["arrows"]) == 14


def test_cli_tilt_hypothesis_failure_exit_code(tmp_path):
    _, grading, _ = cyclic_5_122()
    gf = grading_file(tmp_path, grading)
    code = main([
        "tilt", "--r", "5", "--weights", "1,2,2", "--grading", gf,
        "--e", "0", "--route", "B", "--out", str(tmp_path / "r.json"),
    ])
    assert code == 2


def test_cli_truncate_and_export(tmp_path, capsys):
    _, grading, _ = cyclic_4_1133()
    gf = grading_file(tmp_path, grading)
    code = main([
        "truncate", "--r", "4", "--weights", "1,1,3,3", "--grading", gf,
        "--dual", "--e", "0",
    ])
    assert code == 0
    out = capsys.readouterr().out
    assert out.count("vertex ") == 6
    assert out.count("arrow ") == 14
    base = tmp_path / "nabla"
    code = main([
        "export", "--r", "4", "--weights", "1,1,3,3", "--grading", gf,
        "--out", str(base),
    ])
    assert code == 0
    dot = (tmp_path / "nabla.dot").read_text(encoding="utf-8")
    data = json.loads((tmp_path / "nabla.json").read_text(encoding="utf-8"))
    assert dot.startswith("digraph")
    assert len(data["arrows"]) == 16


def test_cli_presentation_file_roundtrip(tmp_path, capsys):
    _, grading, _ = cyclic_4_1133()
    gf = grading_file(tmp_path, grading)
    assert main([
        "nabla", "--r", "4", "--weights", "1,1,3,3", "--grading", gf,
        "--out", str(tmp_path / "nabla.txt"),
    ]) == 0
    assert main([
        "dual", "--presentation", str(tmp_path / "nabla.txt"),
    ]) == 0
    out = capsys.readouterr().out
    assert out.count("relation ") == 40


def test_cli_check_with_assume_flags(tmp_path, capsys):
    # a presentation file is the base graded algebra; hypotheses that cannot
    # be checked combinatorially come from --assume and are echoed
    _, grading, _ = cyclic_4_1133()
    gf = grading_file(tmp_path, grading)
    assert main([
        "mckay", "--r", "4", "--weights", "1,1,3,3", "--grading", gf,
        "--out", str(tmp_path / "m.txt"),
    ]) == 0
    code = main([
        "check", "--presentation", str(tmp_path / "m.txt"), "--ell", "2", "--e", "0",
        "--assume", "as-regular", "--assume", "gorenstein", "--assume", "isolated",
        "--format", "json", "--out", str(tmp_path / "c.json"),
    ])
    assert code == 0
    rep = json.loads((tmp_path / "c.json").read_text(encoding="utf-8"))
    assert rep["hypotheses"]["as_regular"]["source"] == "assumed"
    assert rep["input"]["assumptions"] == ["as-regular", "gorenstein", "isolated"]
    assert rep["route_eligibility"]["B"]["eligible"]


def test_cli_check_without_assume_is_inconclusive(tmp_path):
    _, grading, _ = cyclic_4_1133()
    gf = grading_file(tmp_path, grading)
    assert main([
        "mckay", "--r", "4", "--weights", "1,1,3,3", "--grading", gf,
        "--out", str(tmp_path / "m.txt"),
    ]) == 0
    code = main([
        "tilt", "--presentation", str(tmp_path / "m.txt"), "--ell", "2", "--e", "0",
        "--route", "B", "--out", str(tmp_path / "t.json"),
    ])
    assert code == 3  # blockers are only "not-established" hypotheses


def test_cli_input_error_exit_code(capsys):
    assert main(["mckay", "--r", "5"]) == 4
    assert main(["check", "--r", "5", "--weights", "1,2,2"]) == 4


def test_cli_byte_identical_reports(tmp_path):
    _, grading, _ = cyclic_4_1133()
    gf = grading_file(tmp_path, grading)
    outs = []
    for name in ("a.json", "b.json"):
        main([
            "tilt", "--r", "4", "--weights", "1,1,3,3", "--grading", gf,
            "--e", "0", "--route", "B", "--out", str(tmp_path / name),
        ])
        outs.append((tmp_path / name).read_bytes())
    assert outs[0] == outs[1]


def test_cli_subprocess_entry_point(tmp_path):
    result = subprocess.run(
        [sys.executable, "-m", "tiltforge", "mckay", "--r", "4", "--weights", "1,1,3,3"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert result.stdout.count("arrow ") == 16
