"""Conventional signatures for the policy's individual users.

Production mode uses standard ECDSA over secp256k1 (the same curve as
the ring scheme) via the cryptography package.  Toy mode uses a Schnorr
signature over the toy group so the brute-force oracle stays usable end
to end.

Keys and signatures cross module boundaries as bytes: vk is the
canonical public encoding, sigk the fixed-width secret encoding.
"""

from dataclasses import dataclass

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives import hashes
from cryptography.hazmat.primitives.asymmetric import ec
from cryptography.hazmat.primitives.serialization import (
    Encoding,
    PublicFormat,
)

from .errors import MalformedEncodingError, UnknownGroupError
from .group import PRODUCTION, TOY, encode_fields, instantiate

_SCHNORR_TAG = b"arswallet/individual-schnorr/v1"


@dataclass(frozen=True)
class IndividualKeyPair:
    vk: bytes
    sigk: bytes


class ToySchnorrScheme:
    """Schnorr over the toy group: vk = g^sigk, sigma = (c, s)."""

    group_id = TOY

    def __init__(self):
        self.group = instantiate(TOY)

    def keygen(self, rng=None) -> IndividualKeyPair:
        g = self.group
        sigk = g.random_scalar(rng)
        vk = g.exp(g.generator, sigk)
        return IndividualKeyPair(vk=g.encode_element(vk),
                                 sigk=g.encode_scalar(sigk))

    def sign(self, sigk: bytes, message: bytes, rng=None) -> bytes:
        g = self.group
        x = g.decode_scalar(sigk)
        vk = g.exp(g.generator, x)
        k = g.random_scalar(rng)
        commit = g.exp(g.generator, k)
        c = self._challenge(vk, commit, message)
        s = (k + c * x) % g.order
        return g.encode_scalar(c) + g.encode_scalar(s)

    def verify(self, vk: bytes, message: bytes, signature: bytes) -> bool:
        g = self.group
        try:
            pk = g.decode_element(vk)
            if len(signature) != 2 * g.scalar_bytes:
                return False
            c = g.decode_scalar(signature[:g.scalar_bytes])
            s = g.decode_scalar(signature[g.scalar_bytes:])
        except MalformedEncodingError:
            return False
        except Exception:
            return False
        commit = g.div(g.exp(g.generator, s), g.exp(pk, c))
        return self._challenge(pk, commit, message) == c

    def _challenge(self, vk, commit, message) -> int:
        g = self.group
        return g.hash_to_scalar(_SCHNORR_TAG, encode_fields(
            g.encode_element(vk), g.encode_element(commit), message))


class EcdsaScheme:
    """ECDSA/SHA-256 over secp256k1; vk is the 33-byte compressed point."""

    group_id = PRODUCTION

    def keygen(self, rng=None) -> IndividualKeyPair:
        if rng is None:
            key = ec.generate_private_key(ec.SECP256K1())
        else:
            value = rng.randrange(1, instantiate(PRODUCTION).order)
            key = ec.derive_private_key(value, ec.SECP256K1())
        vk = key.public_key().public_bytes(Encoding.X962,
                                           PublicFormat.CompressedPoint)
        sigk = key.private_numbers().private_value.to_bytes(32, "big")
        return IndividualKeyPair(vk=vk, sigk=sigk)

    def sign(self, sigk: bytes, message: bytes, rng=None) -> bytes:
        key = ec.derive_private_key(int.from_bytes(sigk, "big"),
                                    ec.SECP256K1())
        return key.sign(message, ec.ECDSA(hashes.SHA256()))

    def verify(self, vk: bytes, message: bytes, signature: bytes) -> bool:
        try:
            pub = ec.EllipticCurvePublicKey.from_encoded_point(ec.SECP256K1(),
                                                               vk)
            pub.verify(signature, message, ec.ECDSA(hashes.SHA256()))
            return True
        except (InvalidSignature, ValueError):
            return False


def individual_scheme(group_id: str):
    if group_id == TOY:
        return ToySchnorrScheme()
    if group_id == PRODUCTION:
        return EcdsaScheme()
    raise UnknownGroupError(f"unknown group identifier: {group_id!r}")
