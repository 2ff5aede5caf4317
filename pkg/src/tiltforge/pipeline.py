"""End-to-end hypothesis checking and the two truncation routes.

Route A truncates the folded algebra itself and is gated on the degree-zero
corner blocks vanishing (one of them for cycle degree 1, both for 2; higher
cycle degrees are refused because only a silting object is guaranteed).
Route B truncates the quadratic dual and is gated on eA0e = k plus the
folded algebra being levelled Koszul; its report carries three
independently computed matrices that must agree entrywise.

Reports are plain dicts with a fixed key order, so identical inputs give
byte-identical JSON.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .findim import AlgebraTable, build_algebra, cartan_matrix, truncate
from .homological import (
    LevelFailure,
    LevelledStructure,
    detect_levels,
    koszul_check_levelled,
    quadratic_dual,
)
from .mutation import (
    coxeter_check,
    left_dual,
    projective_collection,
    shifted_simples_collection,
)
from .presentation import GradedPresentation, presentation_to_json
from .skewgroup import (
    CyclicGroupData,
    degree_zero_part,
    folded_quiver,
    gorenstein_parameter,
    induced_idempotent,
    isolated_check,
    mckay_quiver,
    sl_check,
)

TRIVIAL_NOTE = "zero algebra; singularity category trivial"


class HypothesisError(RuntimeError):
    """A route was requested whose hypotheses do not hold."""

    def __init__(self, report: dict, failures: List[str]):
        super().__init__("hypothesis failure: " + ", ".join(failures or ["?"]))
        self.report = report
        self.failures = failures


@dataclass
class PipelineInput:
    group: Optional[CyclicGroupData]
    grading: Dict[str, int]
    e_vertices: Tuple[str, ...]
    presentation: Optional[GradedPresentation] = None
    ell: Optional[int] = None
    assumptions: Tuple[str, ...] = ()
    length_bound: Optional[int] = None

    def describe(self) -> dict:
        out: dict = {}
        if self.group is not None:
            out["group"] = {"r": self.group.r, "weights": list(self.group.weights)}
        else:
            out["group"] = None
        out["grading"] = {k: self.grading[k] for k in sorted(self.grading)}
        out["e_vertices"] = sorted(self.e_vertices)
        out["assumptions"] = sorted(self.assumptions)
        return out


def _hyp(holds, source: str, detail: str) -> dict:
    return {"holds": holds, "source": source, "detail": detail}


def _base_presentation(inp: PipelineInput) -> GradedPresentation:
    if inp.presentation is not None:
        return inp.presentation
    return mckay_quiver(inp.group, inp.grading)


def analyse(inp: PipelineInput) -> dict:
    """All hypothesis verdicts; the dict is the `check` report."""
    pres = _base_presentation(inp)
    hyp: Dict[str, dict] = {}
    notes: List[str] = []

    if inp.group is not None:
        sl = sl_check(inp.group)
        iso = isolated_check(inp.group)
        hyp["sl"] = _hyp(sl, "computed", "weights sum to 0 mod r")
        hyp["isolated"] = _hyp(iso, "computed", "gcd(a_j, r) = 1 for all j")
        hyp["as_regular"] = _hyp(
            True, "assumed", "cyclic skew-group algebras with a consistent grading"
        )
        hyp["eAe_as_gorenstein"] = _hyp(
            sl, "computed", "determinant-one criterion for the invariant ring"
        )
        if iso:
            hyp["a_over_AeA_finite"] = _hyp(True, "computed", "isolated fixed-point criterion")
        else:
            hyp["a_over_AeA_finite"] = _hyp(
                "isolated" in inp.assumptions or None,
                "assumed" if "isolated" in inp.assumptions else "not-established",
                "A/AeA finiteness not established",
            )
        ell = gorenstein_parameter(pres, inp.group)
        hyp["gorenstein_parameter"] = _hyp(
            True, "computed", f"cycle degree {ell}, vertex-independent (reconstructed rule)"
        )
    else:
        ell = inp.ell
        if ell is None:
            raise ValueError("presentation input requires an explicit cycle degree (--ell)")
        for name, flag in (
            ("as_regular", "as-regular"),
            ("eAe_as_gorenstein", "gorenstein"),
            ("a_over_AeA_finite", "isolated"),
        ):
            assumed = flag in inp.assumptions
            hyp[name] = _hyp(
                True if assumed else None,
                "assumed" if assumed else "not-established",
                f"--assume {flag}" if assumed else f"supply --assume {flag}",
            )
        hyp["gorenstein_parameter"] = _hyp(True, "assumed", f"--ell {ell}")

    # degree-zero corner blocks
    a0 = degree_zero_part(pres)
    e_set = set(inp.e_vertices)
    unknown = e_set - set(pres.quiver.vertices)
    if unknown:
        raise ValueError(f"e-vertices not in the quiver: {sorted(unknown)}")
    lv0 = detect_levels(a0)
    if isinstance(lv0, LevelFailure) and lv0.cycle is not None:
        raise ValueError(
            "degree-0 subquiver has a directed cycle; A_0 is infinite-dimensional "
            f"(cycle {' -> '.join(lv0.cycle)})"
        )
    a0tab = build_algebra(a0)
    dims = {"ee": 0, "ex": 0, "xe": 0}
    for b in a0tab.basis:
        s_in = b.source in e_set
        t_in = b.target in e_set
        if s_in and t_in:
            dims["ee"] += 1
        elif s_in:
            dims["ex"] += 1
        elif t_in:
            dims["xe"] += 1
    hyp["eA0e_is_k"] = _hyp(dims["ee"] == 1, "computed", f"dim eA0e = {dims['ee']}")
    hyp["eA0_eprime_zero"] = _hyp(dims["ex"] == 0, "computed", f"dim eA0e' = {dims['ex']}")
    hyp["eprime_A0_e_zero"] = _hyp(dims["xe"] == 0, "computed", f"dim e'A0e = {dims['xe']}")

    nabla = folded_quiver(pres, ell, inp.group)
    lv = detect_levels(nabla)
    if isinstance(lv, LevelFailure):
        witness = lv.arrow or (" -> ".join(lv.cycle) if lv.cycle else "")
        hyp["nabla_levelled"] = _hyp(False, "computed", f"{lv.reason} ({witness})")
        hyp["nabla_koszul"] = _hyp(None, "not-established", "no levelled structure")
    else:
        hyp["nabla_levelled"] = _hyp(True, "computed", f"top level {lv.n}")
        ntab = build_algebra(nabla, inp.length_bound)
        verdict = koszul_check_levelled(ntab, lv)
        hyp["nabla_koszul"] = _hyp(
            verdict.ok,
            "computed",
            f"Ext bound {verdict.bound}"
            + (f", witness {verdict.witness}" if verdict.witness else ""),
        )

    return {
        "input": inp.describe(),
        "hypotheses": hyp,
        "ell": ell,
        "route": None,
        "presentation": None,
        "cross_checks": {},
        "notes": notes,
    }


def _holds(hyp: dict, name: str) -> bool:
    return hyp[name]["holds"] is True


def route_a_eligibility(report: dict) -> List[str]:
    hyp = report["hypotheses"]
    ell = report["ell"]
    failures = []
    for name in ("as_regular", "eAe_as_gorenstein", "a_over_AeA_finite"):
        if not _holds(hyp, name):
            failures.append(name)
    if ell == 1:
        if not (_holds(hyp, "eA0_eprime_zero") or _holds(hyp, "eprime_A0_e_zero")):
            failures.append("eA0_eprime_zero or eprime_A0_e_zero")
    elif ell == 2:
        if not _holds(hyp, "eA0_eprime_zero"):
            failures.append("eA0_eprime_zero")
        if not _holds(hyp, "eprime_A0_e_zero"):
            failures.append("eprime_A0_e_zero")
    else:
        failures.append(f"ell = {ell} not in {{1, 2}} (only a silting object is guaranteed)")
    return failures


def route_b_eligibility(report: dict) -> List[str]:
    hyp = report["hypotheses"]
    failures = []
    for name in (
        "as_regular",
        "eAe_as_gorenstein",
        "a_over_AeA_finite",
        "eA0e_is_k",
        "nabla_levelled",
        "nabla_koszul",
    ):
        if not _holds(hyp, name):
            failures.append(name)
    return failures


def cmd_check(inp: PipelineInput) -> dict:
    report = analyse(inp)
    report["route_eligibility"] = {
        "A": {"eligible": not route_a_eligibility(report), "failures": route_a_eligibility(report)},
        "B": {"eligible": not route_b_eligibility(report), "failures": route_b_eligibility(report)},
    }
    return report


def _truncation_block(
    tab: AlgebraTable, kept: Sequence[str], length_bound: Optional[int]
) -> Tuple[Optional[GradedPresentation], dict, List[str]]:
    notes: List[str] = []
    if not kept:
        notes.append(TRIVIAL_NOTE)
        return None, {"truncated_dim": 0, "rebuilt_dim": 0, "dims_agree": True}, notes
    out = truncate(tab, kept)
    kept_set = set(kept)
    ebe_dim = sum(1 for b in tab.basis if b.source in kept_set and b.target in kept_set)
    rebuilt = build_algebra(out, length_bound)
    checks = {
        "truncated_dim": ebe_dim,
        "rebuilt_dim": rebuilt.dimension(),
        "dims_agree": rebuilt.dimension() == ebe_dim,
        "vertices": len(out.quiver.vertices),
        "arrows": len(out.quiver.arrows),
        "relations": len(out.relations),
    }
    return out, checks, notes


def cmd_tilt_a(inp: PipelineInput) -> dict:
    report = cmd_check(inp)
    failures = route_a_eligibility(report)
    report["route"] = "A"
    if failures:
        report["notes"].append("route A ineligible: " + "; ".join(failures))
        raise HypothesisError(report, failures)
    pres = _base_presentation(inp)
    nabla = folded_quiver(pres, report["ell"], inp.group)
    tab = build_algebra(nabla, inp.length_bound)
    removed = induced_idempotent(inp.e_vertices, report["ell"], inp.group.r) \
        if inp.group is not None else {
            f"{v}^{p}" for v in inp.e_vertices for p in range(report["ell"])
        }
    kept = [v for v in nabla.quiver.vertices if v not in removed]
    out, checks, notes = _truncation_block(tab, kept, inp.length_bound)
    report["presentation"] = presentation_to_json(out) if out is not None else None
    report["cross_checks"] = checks
    report["notes"].extend(notes)
    return report


def cmd_tilt_b(inp: PipelineInput) -> dict:
    report = cmd_check(inp)
    failures = route_b_eligibility(report)
    report["route"] = "B"
    if failures:
        report["notes"].append("route B ineligible: " + "; ".join(failures))
        raise HypothesisError(report, failures)
    pres = _base_presentation(inp)
    nabla = folded_quiver(pres, report["ell"], inp.group)
    tab = build_algebra(nabla, inp.length_bound)
    lv = detect_levels(nabla)
    assert isinstance(lv, LevelledStructure)

    dual = quadratic_dual(nabla)
    dtab = build_algebra(dual, inp.length_bound)

    removed = induced_idempotent(inp.e_vertices, report["ell"], inp.group.r) \
        if inp.group is not None else {
            f"{v}^{p}" for v in inp.e_vertices for p in range(report["ell"])
        }
    kept = [v for v in dual.quiver.vertices if v not in removed]
    out, checks, notes = _truncation_block(dtab, kept, inp.length_bound)

    # three independent computations of the dual endomorphism data
    rev = list(reversed(lv.order))
    cartan_dual = cartan_matrix(dtab, order=rev).as_lists()
    coll = projective_collection(tab, lv)
    gram_left_dual = [list(r) for r in left_dual(coll).chi()]
    shifted = shifted_simples_collection(tab, lv)
    ext_gram = [list(r) for r in shifted.gram]
    cox = coxeter_check(coll)
    checks.update(
        {
            "reindexing": "position i <-> vertex at reversed level-order position i",
            "cartan_dual": cartan_dual,
            "gram_left_dual": gram_left_dual,
            "ext_gram": ext_gram,
            "triple_agreement": cartan_dual == gram_left_dual == ext_gram,
            "coxeter_relation": cox.ok,
        }
    )
    report["presentation"] = presentation_to_json(out) if out is not None else None
    report["cross_checks"] = checks
    report["notes"].extend(notes)
    return report


def cmd_tilt(inp: PipelineInput, route: str = "auto") -> dict:
    if route == "A":
        return cmd_tilt_a(inp)
    if route == "B":
        return cmd_tilt_b(inp)
    report = cmd_check(inp)
    a_fail = route_a_eligibility(report)
    b_fail = route_b_eligibility(report)
    if not a_fail:
        return cmd_tilt_a(inp)
    if not b_fail:
        return cmd_tilt_b(inp)
    report["notes"].append("route A ineligible: " + "; ".join(a_fail))
    report["notes"].append("route B ineligible: " + "; ".join(b_fail))
    raise HypothesisError(report, a_fail + b_fail)
