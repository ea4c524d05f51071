import json
import math

import pytest

from plasticity import verify
from plasticity.closedforms import ClosedForm
from plasticity.verify import OracleCase, oracle_cases, run_verification


def test_every_quantum_form_has_a_case():
    forms = {c.form for c in oracle_cases()}
    assert forms == set(ClosedForm) - {ClosedForm.E_classical_linear}
    keys = [c.key for c in oracle_cases()]
    assert len(keys) == len(set(keys))
    assert {k for k in keys if k.startswith("E_general_j")} == {
        f"E_general_j[j={n}/2]" for n in range(1, 6)}


def test_shipped_errata():
    errata = verify.load_errata()
    ids = verify.known_erratum_ids(errata)
    assert {"E321_enhanced", "E321_enhanced_domain", "sign_series"} <= ids
    for rec in errata:
        assert {"formula_id", "parameters", "printed_value", "engine_value", "delta", "note"} <= set(rec)


def test_quick_run_passes():
    rep = run_verification(trials=20, seed=42)
    assert rep.passed
    statuses = {c.key: c.status for c in rep.cases}
    assert statuses.pop("E321_enhanced") == "erratum"
    assert set(statuses.values()) == {"pass"}
    assert all(c.passed for c in rep.checks)
    json.dumps(rep.to_record())


def test_filter():
    rep = run_verification(trials=5, filter="E321_spin")
    assert [c.key for c in rep.cases] == ["E321_spin"] and rep.checks == []
    rep = run_verification(trials=5, filter="E_general_j")
    assert len(rep.cases) == 5
    with pytest.raises(ValueError):
        run_verification(trials=5, filter="bogus")
    with pytest.raises(ValueError):
        run_verification(trials=0)


def test_results_independent_of_selection():
    full = {c.key: c.max_delta for c in run_verification(trials=10, seed=3).cases}
    one = run_verification(trials=10, seed=3, filter="E241_general").cases[0]
    assert one.max_delta == full["E241_general"]


def _perturbed(case: OracleCase, eps=1e-6) -> OracleCase:
    return OracleCase(case.key, case.form, case.sample, lambda p: case.closed(p) + eps, case.trace)


def test_perturbed_formula_fails():
    case = next(c for c in oracle_cases() if c.key == "E321_spin")
    rep = run_verification(trials=10, cases=[_perturbed(case)], filter="E321_spin")
    assert not rep.passed
    assert rep.cases[0].status == "fail" and rep.cases[0].failures == 10
    assert rep.errata_records()[0]["formula_id"] == "E321_spin"


def test_unlisted_discrepancy_is_not_excused():
    case = next(c for c in oracle_cases() if c.key == "E321_enhanced")
    rep = run_verification(trials=10, cases=[case], errata=[])
    assert rep.cases[0].status == "fail" and not rep.passed


def test_listed_discrepancy_needs_rotation_confirmation():
    case = next(c for c in oracle_cases() if c.key == "E321_spin")

    def broken_engine(p, projectors=None):
        value = case.trace(p, projectors)
        return value if projectors is not None else value + 1e-3

    bad = OracleCase(case.key, case.form, case.sample, case.closed, broken_engine)
    rep = run_verification(trials=5, cases=[bad], errata=[{"formula_id": "E321_spin"}])
    assert rep.cases[0].status == "fail"


def test_analytic_errata_and_writer(tmp_path):
    recs = verify.analytic_errata()
    ids = [r["formula_id"] for r in recs]
    assert ids == ["E321_enhanced_domain", "sign_series"]
    sign = recs[1]
    assert sign["printed_value"] == pytest.approx(-1, abs=1e-3)
    assert sign["engine_value"] == pytest.approx(1, abs=5e-4)
    rep = run_verification(trials=5, filter="E321_enhanced")
    out = tmp_path / "errata.jsonl"
    verify.write_errata(out, rep, recs)
    loaded = verify.load_errata(out)
    assert [r["formula_id"] for r in loaded] == ["E321_enhanced", *ids]
    assert loaded[0]["delta"] > 1e-9
    assert math.isclose(loaded[0]["printed_value"] - loaded[0]["engine_value"],
                        -math.cos(loaded[0]["parameters"]["theta"][0]
                                  - loaded[0]["parameters"]["theta"][1]) / 6, abs_tol=1e-12)
