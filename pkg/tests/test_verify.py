import json

import pytest

from moserkit.catalogue import certificate_for, group, parse_graph
from moserkit.groups import inverse_set, left_translate, minkowski_product
from moserkit.verify import (
    Mode, Record, SweepSpec, VerificationError, VerificationReport, run_sweep, verify_kemperman,
    verify_main_finite, verify_mainomega, verify_mader, verify_scherk,
)


def by_key(rep):
    return {(r.theorem, r.key): r for r in rep.records}


def test_kemperman_examples():
    recs = by_key(verify_kemperman(group("Z4"), policy="all"))
    r = recs["kemperman", "group=Z4;A=0,2;B=0,2;c=0"]
    assert (r.lhs, r.rhs, r.holds, r.tight) == (2, 2, True, True)
    recs = by_key(verify_kemperman(group("Z5"), policy="all"))
    r = recs["kemperman", "group=Z5;A=0,1;B=0,1;c=2"]
    assert (r.lhs, r.rhs, r.tight) == (3, 3, True)
    # c outside AB is never an instance
    assert ("kemperman", "group=Z5;A=0,1;B=0,1;c=3") not in recs


def test_scherk_examples():
    recs = by_key(verify_scherk(group("Z5"), policy="all"))
    r = recs["scherk", "group=Z5;A=0,1;B=0,2"]
    assert (r.lhs, r.rhs, r.holds, r.tight) == (4, 3, True, False)
    singles = [r for r in recs.values() if r.key.split(";")[1] == "A=0"]
    assert singles and all(r.tight for r in singles)


@pytest.mark.parametrize("gs", ["Z6", "D3", "Q8"])
def test_exhaustive_matches_set_oracle(gs):
    g = group(gs)
    rep = verify_kemperman(g, policy="all")
    assert rep.violations == 0
    assert rep.tallies["kemperman"].instances == len(rep.records)
    for r in rep.records[::97]:
        parts = dict(p.split("=") for p in r.key.split(";"))
        a = g.subset(map(int, parts["A"].split(",")))
        b = g.subset(map(int, parts["B"].split(",")))
        c = int(parts["c"])
        ab = minkowski_product(a, b)
        assert c in ab and r.lhs == len(ab)
        assert r.rhs == len(a) + len(b) - len(set(a) & set(left_translate(c, inverse_set(b))))


def test_scherk_is_kemperman_at_identity():
    g = group("Z6")
    sch = {r.key: r for r in verify_scherk(g, policy="all").records}
    kem = {r.key: r for r in verify_kemperman(g, policy="all").records if r.key.endswith(";c=0")}
    assert sch
    for key, r in sch.items():
        k = kem[key + ";c=0"]
        assert (k.lhs, k.rhs, k.holds, k.tight) == (r.lhs, r.rhs, r.holds, r.tight)


def test_sampled_records_agree_with_exhaustive():
    g = group("D4")
    full = by_key(verify_kemperman(g, policy="all"))
    samp = verify_kemperman(g, Mode.sampled(200, 7), policy="all")
    assert samp.records
    for r in samp.records:
        f = full["kemperman", r.key]
        assert (f.lhs, f.rhs, f.holds, f.tight) == (r.lhs, r.rhs, r.holds, r.tight)
    full = by_key(verify_scherk(g, policy="all"))
    for r in verify_scherk(g, Mode.sampled(200, 7), policy="all").records:
        assert full["scherk", r.key].lhs == r.lhs


def test_main_examples():
    inst = parse_graph("circulant:7:0,1,3")
    rep = verify_main_finite(inst, certificate_for(inst), policy="all")
    assert rep.violations == 0
    assert rep.tallies["main"].instances == 7 * 2 ** 6
    recs = by_key(rep)
    for v in range(7):
        assert recs["main", f"graph={inst.key};v={v};F={v}"].tight
        assert recs["main", f"graph={inst.key};v={v};F=0,1,2,3,4,5,6"].tight


def test_main_sampled_agrees_with_exhaustive():
    inst = parse_graph("cayley:D4:0,1,4")
    cert = certificate_for(inst)
    full = by_key(verify_main_finite(inst, cert, policy="all"))
    samp = verify_main_finite(inst, cert, Mode.sampled(30, 3), policy="all")
    for r in samp.records:
        f = full["main", r.key]
        assert (f.lhs, f.rhs, f.holds, f.tight) == (r.lhs, r.rhs, r.holds, r.tight)


def test_graph_verifier_preconditions():
    inst = parse_graph("circulant:5:1,2")
    with pytest.raises(VerificationError):
        verify_main_finite(inst, certificate_for(inst))
    with pytest.raises(VerificationError):
        verify_main_finite(parse_graph("circulant:5:0,1"), None)
    with pytest.raises(VerificationError):
        verify_mader(parse_graph("circulant:5:0,1"), certificate_for(parse_graph("circulant:5:0,1")))


def test_mainomega_and_mader_reports():
    inst = parse_graph("cayley:Q8:0,2,3")
    rep = verify_mainomega(inst, certificate_for(inst), policy="all")
    assert rep.violations == 0 and {"omega-cayley", "omega-lemma", "mainomega"} <= set(rep.tallies)
    inst = parse_graph("cayley:Q8:2,3")
    assert verify_mader(inst, certificate_for(inst)).violations == 0


def test_report_policies_and_tight_implies_holds():
    rep = run_sweep(SweepSpec("cyclic:5", ("kemperman", "scherk"), records="tight"))
    assert rep.records and all(r.tight or not r.holds for r in rep.records)
    assert all(r.holds for r in rep.records if r.tight)
    assert rep.records == sorted(rep.records, key=lambda r: (r.theorem, r.key))


def test_run_sweep_cyclic_kemperman_clean():
    rep = run_sweep(SweepSpec("cyclic:6", ("kemperman",)))
    assert rep.exit_code == 0 and rep.violations == 0 and rep.instances > 0


def test_empty_theorem_set():
    rep = run_sweep(SweepSpec("cyclic:6", ()))
    assert rep.exit_code == 0 and rep.instances == 0 and rep.records == []
    assert json.loads(rep.to_json())["schema"] == 1


def test_exit_code_on_violation():
    rep = VerificationReport()
    rep.add(Record("x", "main", 1, 2, False, False))
    assert rep.exit_code == 1 and "VIOLATION main x" in rep.to_text()
    assert rep.to_csv().splitlines()[1] == "main,x,1,2,0,0"


def test_sampled_runs_are_byte_identical():
    spec = SweepSpec("groups:Z6,D4", ("kemperman", "scherk"), Mode.sampled(1000, 42), "all")
    assert run_sweep(spec).to_json() == run_sweep(spec).to_json()
    other = SweepSpec("groups:Z6,D4", ("kemperman", "scherk"), Mode.sampled(1000, 43), "all")
    assert run_sweep(spec).to_json() != run_sweep(other).to_json()


def test_spec_validation_and_budget():
    with pytest.raises(VerificationError):
        Mode.sampled(10, None)
    with pytest.raises(VerificationError):
        SweepSpec("cyclic:3", ("nope",))
    with pytest.raises(VerificationError):
        run_sweep(SweepSpec("bogus:3", ("kemperman",)))
    with pytest.raises(VerificationError):
        run_sweep(SweepSpec("group:Z9", ("scherk",)))
    with pytest.raises(VerificationError):
        run_sweep(SweepSpec("group:S4", ("kemperman",), force=True))


def test_timing_only_on_request():
    spec = SweepSpec("cyclic:3", ("kemperman",))
    assert "runtime_s" not in run_sweep(spec).summary()
    assert "runtime_s" in run_sweep(spec, timing=True).summary()
