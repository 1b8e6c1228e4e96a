import json
import random

import pytest

from arswallet import ars, harness


def test_full_unforgeability_no_wins(toy_pp):
    report = harness.run_full_unforgeability_suite(toy_pp, trials=30)
    assert report.adversary_wins == 0, report.details
    assert report.trials >= 30


def test_anonymity_within_band(toy_pp):
    report = harness.run_anonymity_suite(toy_pp, trials=400)
    assert report.adversary_wins == 0, report.details
    assert any("meter-trace: identical traces = True" in d
               for d in report.details)
    assert any("osk-holder sanity" in d for d in report.details)


def test_traceability_no_wins(toy_pp):
    report = harness.run_traceability_suite(toy_pp, trials=30)
    assert report.adversary_wins == 0, report.details


def test_tracing_soundness_no_wins(toy_pp):
    report = harness.run_tracing_soundness_suite(toy_pp, trials=30)
    assert report.adversary_wins == 0, report.details


def test_run_suite_dispatch(toy_pp):
    report = harness.run_suite(toy_pp, "traceability", trials=6)
    assert report.game == "traceability"
    with pytest.raises(ValueError):
        harness.run_suite(toy_pp, "nosuch")


def test_report_json_shape(toy_pp):
    report = harness.run_traceability_suite(toy_pp, trials=6)
    obj = json.loads(json.dumps(report.to_json()))
    assert set(obj) == {"game", "trials", "adversary_wins", "details"}


def test_bruteforce_oracle_agrees_with_open(toy_pp):
    g = toy_pp.group
    rng = random.Random(5)
    for _ in range(50):
        opener = ars.okgen(toy_pp, rng)
        sk = g.random_scalar(rng) or 1
        pk = g.exp(g.generator, sk)
        r = g.random_scalar(rng)
        u = g.exp(g.generator, r)
        v = g.mul(pk, g.exp(opener.opk, r))
        assert harness.brute_force_decrypt(g, opener.opk, u, v) == pk
        assert g.div(v, g.exp(u, opener.osk)) == pk


def test_bench_counts_are_exact_and_deterministic(toy_pp):
    r1 = harness.run_bench(toy_pp, ring_sizes=(4, 10), runs=5)
    r2 = harness.run_bench(toy_pp, ring_sizes=(4, 10), runs=5)
    assert r1.exponentiations == {4: 24, 10: 60}
    assert r1.exponentiations == r2.exponentiations
    assert set(r1.mean_ms) == {"rsign", "rverify", "open", "judge"}
    table = r1.to_table()
    assert "|R|=4" in table and "rverify" in table
    obj = r1.to_json()
    assert obj["exponentiations"] == {"4": 24, "10": 60}


def test_tamper_enumeration_count(toy_pp, rng):
    from conftest import fresh_scenario

    opener, users, ring = fresh_scenario(toy_pp, 4, rng)
    sig = ars.rsign(toy_pp, opener.opk, b"m", ring, users[0].sk, rng)
    mutations = harness.enumerate_tamper_mutations(toy_pp, sig)
    names = [n for n, _ in mutations]
    assert len(names) == len(set(names)) >= 30
