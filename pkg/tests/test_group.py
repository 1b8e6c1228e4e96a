import random

import pytest
from hypothesis import given, settings, strategies as st
from sympy import isprime

from arswallet.errors import (
    MalformedEncodingError,
    NotInSubgroupError,
    UnknownGroupError,
)
from arswallet.group import CostMeter, instantiate


def test_toy_parameters():
    g = instantiate("toy")
    assert g.order == 1013
    assert g.P == 2027
    assert g.generator == 4
    assert isprime(1013) and isprime(2027)
    # generator has order exactly q
    assert pow(4, 1013, 2027) == 1
    assert pow(4, 1, 2027) != 1


def test_production_is_secp256k1():
    g = instantiate("production")
    assert g.order == int(
        "FFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEBAAEDCE6AF48A03BBFD25E8CD0364141", 16)
    assert g.is_member(g.generator)


def test_unknown_identifier_rejected():
    with pytest.raises(UnknownGroupError):
        instantiate("nosuch")


@pytest.mark.parametrize("gid", ["toy", "production"])
def test_hash_to_scalar_contract(gid):
    g = instantiate(gid)
    a = g.hash_to_scalar(b"tag", b"data")
    assert a == g.hash_to_scalar(b"tag", b"data")
    assert 0 <= a < g.order
    # length-prefixed tag: moving a byte across the boundary changes the hash
    assert g.hash_to_scalar(b"A", b"BC") != g.hash_to_scalar(b"AB", b"C")


def test_hash_to_scalar_meters_hash_calls():
    g = instantiate("toy")
    meter = CostMeter()
    g.hash_to_scalar(b"t", b"d", meter)
    g.hash_to_scalar(b"t", b"d", meter)
    assert meter.hash_calls == 2 and meter.exponentiations == 0


@pytest.mark.parametrize("gid", ["toy", "production"])
def test_encode_decode_generator_roundtrip(gid):
    g = instantiate(gid)
    assert g.decode_element(g.encode_element(g.generator)) == g.generator


def test_decode_rejects_all_zero():
    for gid in ("toy", "production"):
        g = instantiate(gid)
        with pytest.raises((MalformedEncodingError, NotInSubgroupError)):
            g.decode_element(b"\x00" * g.element_bytes)


def test_toy_decode_rejects_non_residue():
    g = instantiate("toy")
    # 2 is a quadratic non-residue mod 2027 (2027 = 3 mod 8)
    assert pow(2, 1013, 2027) != 1
    with pytest.raises(NotInSubgroupError):
        g.decode_element((2).to_bytes(2, "big"))


def test_toy_decode_rejects_bad_length():
    g = instantiate("toy")
    with pytest.raises(MalformedEncodingError):
        g.decode_element(b"\x01")


def test_scalar_decode_rejects_out_of_range():
    g = instantiate("toy")
    with pytest.raises(MalformedEncodingError):
        g.decode_scalar((1013).to_bytes(2, "big"))


@pytest.mark.parametrize("gid", ["toy", "production"])
def test_exponent_laws(gid):
    g = instantiate(gid)
    rng = random.Random(7)
    trials = 1000 if gid == "toy" else 25
    for _ in range(trials):
        a, b = g.random_scalar(rng), g.random_scalar(rng)
        assert g.exp(g.generator, a + b) == g.mul(g.exp(g.generator, a),
                                                  g.exp(g.generator, b))
        assert g.exp(g.generator, a * b) == g.exp(g.exp(g.generator, a), b)


def test_toy_exhaustive_dlog_recovers_exponent():
    g = instantiate("toy")
    rng = random.Random(11)
    for _ in range(100):
        e = g.random_scalar(rng)
        assert g.dlog(g.exp(g.generator, e)) == e


@pytest.mark.parametrize("gid", ["toy", "production"])
def test_serialization_roundtrip_random(gid):
    g = instantiate(gid)
    rng = random.Random(13)
    trials = 1000 if gid == "toy" else 50
    for _ in range(trials):
        e = g.random_scalar(rng)
        assert g.decode_scalar(g.encode_scalar(e)) == e
        x = g.exp(g.generator, g.random_scalar(rng))
        if g.is_identity(x):
            continue
        assert g.decode_element(g.encode_element(x)) == x


@settings(max_examples=50, deadline=None)
@given(st.binary(max_size=64), st.binary(max_size=64))
def test_hash_to_scalar_range_property(tag, data):
    g = instantiate("toy")
    assert 0 <= g.hash_to_scalar(tag, data) < g.order


def test_meter_counts_exponentiations():
    g = instantiate("toy")
    meter = CostMeter()
    g.exp(g.generator, 5, meter)
    g.exp(g.generator, 6, meter)
    assert meter.exponentiations == 2
    meter.reset()
    assert meter.snapshot() == (0, 0)
