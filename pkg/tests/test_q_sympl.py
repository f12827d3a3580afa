import pytest

from ncsphere import q_sympl
from ncsphere.q_sympl import N, PairPoly, RMatrixData, _c, build_R, prime, q


@pytest.fixture(scope="module")
def R():
    return build_R()


@pytest.fixture(scope="module")
def derivation(R):
    return q_sympl.derive_sphere_relations(R)


def test_R_corner_and_unit_block(R):
    assert R(N, N, N, N) == q(1)
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            if j not in (i, prime(i)):
                assert R(i, j, i, j) == _c(1)
    assert q_sympl.R_spot_checks(R).ok


def test_derivation_matches_shipped_rules(derivation):
    assert derivation.report.ok, derivation.report.failures()
    assert {fam: len(rules) for fam, rules in derivation.rules.items()} == {"comxx": 6, "commvv": 6, "commxv": 16}


def test_transposed_R_breaks_derivation(R):
    d = q_sympl.derive_sphere_relations(R.transposed())
    failed = {c.id for c in d.report.checks if not c.ok}
    assert any(f.endswith(".rules") for f in failed)
    with pytest.raises(q_sympl.DerivationMismatch):
        q_sympl.derive_sphere_relations(R.transposed(), strict=True)


def test_perturbed_entry_breaks_derivation(R):
    entries = dict(R.entries)
    key = next(k for k in sorted(entries) if k[0] == k[3] and k[1] == k[2] and k[0] != k[1])
    entries[key] = entries[key] * _c(2)
    d = q_sympl.derive_sphere_relations(RMatrixData(entries, R.rho, R.eps, R.C))
    assert not d.report.ok


def test_rtt_instances(R):
    assert q_sympl.rtt_instances(R, count=30, seed=3).ok


def test_projection_and_s4q_relations():
    proj = q_sympl.build_projection_q()
    assert proj.report.ok
    assert q_sympl.verify_s4q_relations(proj).ok


def test_coaction():
    rep = q_sympl.coaction_checks()
    assert rep.ok, rep.failures()


def test_wrong_coaction_image_breaks_relations():
    delta = q_sympl.CoactionMap()
    s = delta.source
    # a coaction that ignores the SU_q(2) mixing for x1
    delta._idx[s.by_name["x1"]] = PairPoly.simple(q_sympl.x(1), delta.target.gen("alpha")) + \
        PairPoly.simple(q_sympl.x(2), delta.target.gen("gamma"))
    rels = [s.central_element(0)] + [q_sympl.NCPoly._raw(s, {lhs: _c(1)}) - q_sympl.NCPoly._raw(s, dict(rhs))
                                     for lhs, rhs in s.rule_table().items()]
    assert any(not delta(r).is_zero() for r in rels)


def test_hopf_quotient(R):
    rep = q_sympl.hopf_quotient_checks(R)
    assert rep.ok, rep.failures()


def test_false_bq_relation_rejected(R):
    al = ("alpha",)
    ga = ("gamma",)
    bogus = {al + ga: _c(1), ga + al: -q(1)}
    rep = q_sympl.bq_relations_from_rtt(R, extra_targets={"bogus": bogus})
    by_id = {c.id: c.ok for c in rep.checks}
    assert by_id.pop("bq.derived.bogus") is False
    assert all(by_id.values())


def test_sp1_coinvariance():
    assert q_sympl.sp1_coinvariance().ok
