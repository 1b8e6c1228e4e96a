import pytest

from arswallet.errors import UnknownGroupError
from arswallet.individual import individual_scheme


@pytest.mark.parametrize("gid", ["toy", "production"])
def test_sign_verify(gid):
    scheme = individual_scheme(gid)
    kp = scheme.keygen()
    sig = scheme.sign(kp.sigk, b"message")
    assert scheme.verify(kp.vk, b"message", sig)


@pytest.mark.parametrize("gid", ["toy", "production"])
def test_verify_rejects_other_message(gid):
    scheme = individual_scheme(gid)
    kp = scheme.keygen()
    sig = scheme.sign(kp.sigk, b"message")
    assert not scheme.verify(kp.vk, b"other", sig)


@pytest.mark.parametrize("gid", ["toy", "production"])
def test_verify_rejects_wrong_key(gid):
    scheme = individual_scheme(gid)
    kp, other = scheme.keygen(), scheme.keygen()
    sig = scheme.sign(kp.sigk, b"message")
    assert not scheme.verify(other.vk, b"message", sig)


@pytest.mark.parametrize("gid", ["toy", "production"])
def test_verify_rejects_garbage(gid):
    scheme = individual_scheme(gid)
    kp = scheme.keygen()
    assert not scheme.verify(kp.vk, b"message", b"\x00\x01\x02")
    assert not scheme.verify(b"\x00" * len(kp.vk), b"message",
                             scheme.sign(kp.sigk, b"message"))


def test_unknown_group():
    with pytest.raises(UnknownGroupError):
        individual_scheme("nosuch")
