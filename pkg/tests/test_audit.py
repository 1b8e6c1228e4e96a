import json

import pytest

from arswallet import ars, audit, wallet as w
from arswallet.errors import OutOfRangeError

from conftest import WalletScenario


@pytest.fixture
def executed(rng):
    sc = WalletScenario(rng=rng)
    req = sc.request()
    w.submit_transaction(sc.chain, req, sc.bundle(req, 2, rng))
    return sc


def test_open_identifies_signer(executed):
    claim = audit.open_transaction(executed.chain, 0, 0, executed.opener.osk)
    assert claim is not None
    assert claim.pk_identified == executed.users[2].pk
    assert audit.judge_transaction(executed.chain, claim)


def test_open_wrong_osk_returns_bottom(executed, rng):
    g = executed.chain.pp.group
    bottoms = 0
    for _ in range(20):
        wrong = (executed.opener.osk + rng.randrange(1, g.order)) % g.order
        if audit.open_transaction(executed.chain, 0, 0, wrong) is None:
            bottoms += 1
    assert bottoms >= 18


def test_open_out_of_range_indices(executed):
    with pytest.raises(OutOfRangeError):
        audit.open_transaction(executed.chain, 5, 0, executed.opener.osk)
    with pytest.raises(OutOfRangeError):
        audit.open_transaction(executed.chain, 0, 3, executed.opener.osk)


def test_judge_rejects_every_wrong_member(executed):
    claim = audit.open_transaction(executed.chain, 0, 0, executed.opener.osk)
    for i, user in enumerate(executed.users):
        if i == 2:
            continue
        forged = audit.AuditClaim(tx_index=0, ring_index=0,
                                  pk_identified=user.pk,
                                  proof=ars.OpeningProof(
                                      pk_identified=user.pk,
                                      a1=claim.proof.a1, a2=claim.proof.a2,
                                      c=claim.proof.c, z=claim.proof.z))
        assert not audit.judge_transaction(executed.chain, forged)


def test_judge_rejects_claim_moved_to_other_transaction(executed, rng):
    req = executed.request()
    w.submit_transaction(executed.chain, req, executed.bundle(req, 1, rng))
    claim = audit.open_transaction(executed.chain, 0, 0, executed.opener.osk)
    moved = audit.AuditClaim(tx_index=1, ring_index=0,
                             pk_identified=claim.pk_identified,
                             proof=claim.proof)
    assert not audit.judge_transaction(executed.chain, moved)


def test_judge_out_of_range_claim_is_zero_not_error(executed):
    claim = audit.open_transaction(executed.chain, 0, 0, executed.opener.osk)
    bad = audit.AuditClaim(tx_index=7, ring_index=0,
                           pk_identified=claim.pk_identified,
                           proof=claim.proof)
    assert not audit.judge_transaction(executed.chain, bad)


def test_claim_file_roundtrip(executed):
    pp = executed.chain.pp
    claim = audit.open_transaction(executed.chain, 0, 0, executed.opener.osk)
    obj = audit.claim_to_json(pp, claim)
    assert set(obj) == {"tx_index", "ring", "pk", "proof"}
    back = audit.claim_from_json(pp, json.loads(json.dumps(obj)))
    assert back == claim
    assert audit.judge_transaction(executed.chain, back)


def test_chain_state_exposes_no_secrets(executed):
    # judging needs only public data; the serialized chain must carry no
    # signing or opening keys anywhere in its schema
    blob = json.dumps(w.chain_to_json(executed.chain))
    obj = json.loads(blob)

    def keys(node):
        if isinstance(node, dict):
            for k, v in node.items():
                yield k
                yield from keys(v)
        elif isinstance(node, list):
            for v in node:
                yield from keys(v)

    forbidden = {"sk", "osk", "sigk"}
    assert forbidden.isdisjoint(set(keys(obj)))
    # and a chain rebuilt from that public state judges the claim
    claim = audit.open_transaction(executed.chain, 0, 0, executed.opener.osk)
    public_chain = w.chain_from_json(obj)
    assert audit.judge_transaction(public_chain, claim)


def test_provability_over_all_scenarios(rng):
    # every accepted transaction is openable with a judge-accepted claim
    sc = WalletScenario(rng=rng)
    for k in range(4):
        req = sc.request()
        w.submit_transaction(sc.chain, req, sc.bundle(req, k, rng))
    for k in range(4):
        claim = audit.open_transaction(sc.chain, k, 0, sc.opener.osk)
        assert claim is not None
        assert claim.pk_identified == sc.users[k].pk
        assert audit.judge_transaction(sc.chain, claim)
