"""The staged reconstruction: strata, gluing, claims, reports.

Frozen expected values here were produced by independent recomputation
(kernels, intersections, linear systems) and cross-checked against the
source text; they are the regression oracles for the whole pipeline.
"""

import json

import pytest

from chowcheck.chowpipeline import (
    CLAIMS_FILE,
    PipelineError,
    SignConvention,
    StratumSpec,
    Stratum,
    emit_report,
    load_base,
    load_claims,
    load_stratum,
    minimal_generators,
)
from chowcheck.exprparser import parse_polynomial

# stage-2 glued relation, recomputed via kernel intersection and lifting
J1 = "k1^4*g2^2 + 2*k1^2*k2*g2^2 - 4*k1^2*g2^3 - 8*k2*g2^3 + q^2"

# stage-3a glued relations (reduced basis of the chain-stratum step)
J3A = [
    "k2*g2*g3p + 2*g2^2*g3p - g3p*q",
    "k1^2*g3p + k2*g3p - 2*g2*g3p",
    J1,
]

# corrected final lift of the stage-2 relation across the two-tails square
ROW10_LIFT = (
    "k1^4*g2^2 + 2*k1^2*k2*g2^2 - 4*k1^2*g2^3 - 2*k1^3*g2*g3pp - 8*k2*g2^3"
    " - 4*k1*k2*g2*g3pp - 3*k1^2*g3pp^2 + 8*k1^2*g2*r + 4*k1^3*t"
    " - 6*k2*g3pp^2 + 16*k2*g2*r + 8*k1*k2*t + q^2"
)

FINAL_DIMS = [1, 1, 3, 5, 10, 15, 26, 36, 54, 72, 99, 126, 165]
TWO_NODE_DIMS = [1, 1, 3, 3, 7, 7, 13, 13, 21]
CHAIN_DIMS = [1, 1, 3, 4, 8, 9, 16, 17, 26, 28, 39, 41, 55]

FINAL_WEIGHTS = {
    "k1": 1, "k2": 2, "g2": 2, "g3p": 3, "q": 4,
    "g3pp": 3, "r": 4, "s": 5, "t": 5, "u": 6,
}


def test_sign_convention_parsing_and_labels():
    c = SignConvention()
    assert c.label == "e1=-1,e2=-1,e3=-1,eg=+1"
    assert SignConvention.parse("-1,-1,-1") == c
    assert SignConvention.parse("(+1, -1, +1, -1)").label == "e1=+1,e2=-1,e3=+1,eg=-1"
    assert len(SignConvention.all()) == 16
    with pytest.raises(PipelineError):
        SignConvention.parse("1,2,3")
    with pytest.raises(PipelineError):
        SignConvention.parse("1,1")


def test_load_base_and_strata_validate():
    base = load_base()
    assert base.table.names == ("k2",) and base.is_free()
    for name in ("gamma1", "gamma2", "gamma3p", "gamma3pp"):
        spec = StratumSpec.load(f"{name}.stratum")
        assert spec.label
        # materialisation re-checks invariance of every class form
        Stratum(spec, SignConvention())


def test_load_stratum_rejects_non_invariant_forms():
    bad = """
    [kind]
    stratum
    [label]
    Demo
    [vars]
    t1
    t2
    [group]
    t1 -> t2; t2 -> t1
    [ring]
    k1(1): t1
    [top]
    t1 + t2
    [restrict]
    k1: t1 + t2
    [new]
    k1(1)
    """
    with pytest.raises(PipelineError) as err:
        load_stratum(bad)
    assert "not invariant" in str(err.value)


def test_stage_shapes(artifacts):
    labels = [s["info"]["label"] for s in artifacts["stages"]]
    assert labels == ["Gamma1", "Gamma2", "Gamma3p", "Gamma3pp"]
    for stage in artifacts["stages"]:
        assert stage["info"]["nzd"] is True
        assert stage["info"]["certified_through"] == 12


def test_stage1_result_is_free_on_k1_k2(artifacts):
    result = artifacts["stages"][0]["result"]
    assert result.table.names == ("k1", "k2")
    assert result.table.weights == (1, 2)
    assert result.is_free()


def test_stage2_result_relation_is_the_single_glued_one(artifacts):
    result = artifacts["stages"][1]["result"]
    assert [str(g) for g in result.relations.gens] == [J1]
    assert [result.dim(d) for d in range(9)] == TWO_NODE_DIMS


def test_stage3a_result_relations(artifacts):
    result = artifacts["stages"][2]["result"]
    assert [str(g) for g in result.relations.gens] == J3A
    assert [result.dim(d) for d in range(13)] == CHAIN_DIMS


def test_stage3a_displayed_pair_differs_from_restriction(artifacts):
    info = artifacts["stages"][2]["info"]
    q_pair = next(p for p in info["pairs"] if p["tag"] == "q")
    assert q_pair["source"] == "displayed"
    assert q_pair["differs_from_restriction"] is True
    assert q_pair["a_side"] == "-k1^2*g2 + 4*g2^2"


def test_stage3b_lift_of_stage2_relation_needs_a_correction(artifacts):
    info = artifacts["stages"][3]["info"]
    corrected = [L for L in info["lifts"] if L["correction"]]
    assert len(corrected) == 1
    assert corrected[0]["relation"] == J1
    assert corrected[0]["lift"] == ROW10_LIFT


def test_final_presentation_shape(artifacts):
    final = artifacts["final"]
    assert len(final.table.names) == 10
    assert dict(zip(final.table.names, final.table.weights)) == FINAL_WEIGHTS
    assert [final.dim(d) for d in range(13)] == FINAL_DIMS


def test_final_relations_all_homogeneous(artifacts):
    final = artifacts["final"]
    for g in final.relations.gens:
        assert g.is_homogeneous()


def test_minimal_generators_profile(artifacts):
    final = artifacts["final"]
    minimal = minimal_generators(final)
    assert len(minimal) == 22
    profile = {}
    for g in minimal:
        profile[g.weighted_degree()] = profile.get(g.weighted_degree(), 0) + 1
    assert profile == {5: 1, 6: 1, 7: 2, 8: 5, 9: 5, 10: 5, 11: 2, 12: 1}
    # a minimal set still generates the whole relation ideal
    regen = final.relations
    from chowcheck.groebner import Ideal, ideal_equal

    assert ideal_equal(Ideal(final.table, minimal), regen, final.order)


def test_claims_file_is_wellformed():
    claims = load_claims(CLAIMS_FILE)
    assert len(claims) == 84
    ids = [c.id for c in claims]
    assert len(set(ids)) == len(ids)
    for claim in claims:
        assert claim.expect in ("pass", "fail", "assumed")


def test_all_claims_behave_as_recorded(report):
    rows = report["claims"]
    assert len(rows) == 84
    unexpected = [r["id"] for r in rows if not r["ok"]]
    assert unexpected == []
    statuses = {}
    for r in rows:
        statuses[r["status"]] = statuses.get(r["status"], 0) + 1
    assert statuses == {"PASS": 60, "FAIL": 20, "ASSUMED": 4}
    assert report["all_as_expected"] is True
    assert report["status"] == "DISCREPANCY"


def test_specific_claim_details(claim_rows):
    assert claim_rows["two-node-zero-fiber"]["detail"] == {
        "count": 3, "finite": True,
    }
    assert claim_rows["final-generator-count"]["detail"] == {"computed": 10}
    assert claim_rows["final-relation-count"]["detail"] == {
        "computed": 22, "corrected_ok": True,
    }
    assert claim_rows["two-tails-lift-profile"]["detail"] == {
        "exact": 2, "corrected": 1,
    }
    assert claim_rows["two-node-glued-relation"]["status"] == "PASS"
    assert claim_rows["two-node-glued-relation-restated"]["status"] == "FAIL"


def test_theorem_rows_shape(report):
    rows = report["final"]["theorem_rows"]
    assert len(rows) == 11
    statuses = [r["status"] for r in rows]
    assert statuses == ["PASS"] * 9 + ["FAIL", "FAIL"]
    for row in rows:
        if row["status"] == "FAIL":
            assert row["corrected"] is not None
            assert row["corrected_ok"] is True


def test_relation_analysis_counts(report):
    analysis = report["final"]["relation_analysis"]
    assert analysis["displayed_rows"] == 11
    assert analysis["minimal_generator_count"] == 22
    assert analysis["reduced_basis_size"] == 37
    assert len(analysis["missing_from_displayed"]) == 27
    assert analysis["displayed_not_in_computed"] == []
    # the first displayed gap appears in weight 8
    gap = [parse_polynomial(t, _final_table(report)) for t in
           analysis["missing_from_displayed"]]
    assert min(g.weighted_degree() for g in gap) == 8


def _final_table(report):
    from chowcheck.polyarith import VarTable

    gens = report["final"]["generators"]
    return VarTable([g["name"] for g in gens], [g["weight"] for g in gens])


def test_sign_sweeps_in_report(report):
    sweeps = report["sign_search"]
    pair = sweeps["incompatible-pair"]
    assert pair["jointly_satisfiable"] is False
    assert pair["best_pass_count"] == 1
    assert len(pair["best_conventions"]) == 8
    assert all("eg=+1" in label for label in pair["best_conventions"])
    six = sweeps["section-six-signs"]
    assert six["jointly_satisfiable"] is True
    assert six["all_pass_conventions"] == ["e1=-1,e2=+1,e3=-1,eg=+1"]


def test_machine_report_is_valid_json_and_deterministic(report):
    one = emit_report(report, format="machine")
    two = emit_report(report, format="machine")
    assert one == two
    parsed = json.loads(one)
    assert parsed["format"] == "chowcheck-verification-report"
    assert "timing" not in parsed


def test_text_report_mentions_the_key_findings(report):
    text = emit_report(report, format="text")
    assert "status: DISCREPANCY" in text
    assert "incompatible-pair" in text
    assert "no single sign convention satisfies all of them" in text
    assert "e1=-1,e2=+1,e3=-1,eg=+1" in text
    assert text.count("FAIL") >= 20
    with pytest.raises(PipelineError):
        emit_report(report, format="yaml")
