"""Prime-order group backends.

Two instantiations behind one interface:

* ``production`` — the secp256k1 prime-order group (DDH-hard curve),
  implemented over gmpy2 integers with Jacobian coordinates and a
  fixed-base comb for the generator.
* ``toy`` — the quadratic-residue subgroup of Z_2027^* (order 1013),
  small enough that discrete logs are brute-forcible, used as a testing
  oracle only.

All values are immutable after construction and every operation is a pure
function, so instances can be shared freely between threads.

Scalars are plain ints reduced mod the group order.  Hash-to-scalar is
hash-then-reduce; the residual bias (~2^-128 for production) is accepted
for a reference artifact.
"""

import hashlib
import secrets

import gmpy2
from gmpy2 import mpz
from sympy import isprime

from .errors import MalformedEncodingError, NotInSubgroupError, UnknownGroupError

PRODUCTION = "production"
TOY = "toy"


class CostMeter:
    """Counts group exponentiations and hash invocations.

    Desk-scale stand-in for gas: monotone while metering a transaction,
    reset between transactions.
    """

    __slots__ = ("exponentiations", "hash_calls")

    def __init__(self):
        self.exponentiations = 0
        self.hash_calls = 0

    def reset(self):
        self.exponentiations = 0
        self.hash_calls = 0

    def snapshot(self):
        return (self.exponentiations, self.hash_calls)


def lp(field: bytes) -> bytes:
    """4-byte big-endian length prefix; keeps multi-part transcripts injective."""
    return len(field).to_bytes(4, "big") + field


def encode_fields(*fields: bytes) -> bytes:
    return b"".join(lp(f) for f in fields)


class Group:
    """Shared behaviour of both instantiations.

    Subclasses provide ``group_id``, ``order`` (prime q), ``generator``,
    element arithmetic and fixed-width encodings.
    """

    group_id: str
    order: int
    generator: object
    scalar_bytes: int
    element_bytes: int

    # -- scalar field -------------------------------------------------

    def random_scalar(self, rng=None) -> int:
        if rng is None:
            return secrets.randbelow(self.order)
        return rng.randrange(self.order)

    def encode_scalar(self, s: int) -> bytes:
        return (s % self.order).to_bytes(self.scalar_bytes, "big")

    def decode_scalar(self, data: bytes) -> int:
        if len(data) != self.scalar_bytes:
            raise MalformedEncodingError("bad scalar length")
        value = int.from_bytes(data, "big")
        if value >= self.order:
            raise MalformedEncodingError("scalar out of range")
        return value

    def hash_to_scalar(self, domain_tag: bytes, transcript: bytes,
                       meter: CostMeter | None = None) -> int:
        """Fiat-Shamir challenge derivation: SHA-256 then reduce mod q.

        The domain tag is length-prefixed so distinct tags can never
        collide by concatenation.
        """
        digest = hashlib.sha256(lp(domain_tag) + transcript).digest()
        if meter is not None:
            meter.hash_calls += 1
        return int.from_bytes(digest, "big") % self.order

    # -- element interface (subclass responsibility) ------------------

    def exp(self, base, e: int, meter: CostMeter | None = None):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_identity(self, a) -> bool:
        raise NotImplementedError

    def encode_element(self, a) -> bytes:
        raise NotImplementedError

    def decode_element(self, data: bytes):
        raise NotImplementedError

    def _check_structure(self):
        """Construction-time invariants: prime order, generator of full order."""
        if not isprime(self.order):
            raise ValueError(f"group order {self.order} is not prime")
        if self.is_identity(self.generator):
            raise ValueError("generator is the identity")
        if not self.is_identity(self.exp(self.generator, self.order)):
            raise ValueError("generator order does not divide q")


class ToyGroup(Group):
    """Quadratic residues mod the safe prime 2027; order 1013, generator 4.

    Elements are ints in [1, 2027).  Exhaustive discrete log over
    [0, 1013) is feasible, which is the whole point.
    """

    P = 2027
    group_id = TOY
    order = 1013
    generator = 4
    scalar_bytes = 2
    element_bytes = 2

    def __init__(self):
        if not isprime(self.P):
            raise ValueError("toy modulus is not prime")
        self._check_structure()

    def exp(self, base, e, meter=None):
        if meter is not None:
            meter.exponentiations += 1
        return pow(base, e % self.order, self.P)

    def mul(self, a, b):
        return a * b % self.P

    def inv(self, a):
        return pow(a, -1, self.P)

    def is_identity(self, a):
        return a == 1

    def is_member(self, a):
        return 0 < a < self.P and pow(a, self.order, self.P) == 1

    def encode_element(self, a):
        return int(a).to_bytes(2, "big")

    def decode_element(self, data):
        if len(data) != 2:
            raise MalformedEncodingError("bad element length")
        value = int.from_bytes(data, "big")
        if not 0 < value < self.P:
            raise MalformedEncodingError("residue out of range")
        if pow(value, self.order, self.P) != 1:
            raise NotInSubgroupError(f"{value} is not a quadratic residue mod {self.P}")
        return value

    def dlog(self, a):
        """Exhaustive discrete log to base g; testing oracle only."""
        acc = 1
        for e in range(self.order):
            if acc == a:
                return e
            acc = acc * self.generator % self.P
        raise NotInSubgroupError(f"{a} has no discrete log")


# secp256k1 parameters (SEC 2).
_SECP_P = mpz(2**256 - 2**32 - 977)
_SECP_N = mpz(0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEBAAEDCE6AF48A03BBFD25E8CD0364141)
_SECP_GX = mpz(0x79BE667EF9DCBBAC55A06295CE870B07029BFCDB2DCE28D959F2815B16F81798)
_SECP_GY = mpz(0x483ADA7726A3C4655DA4FBFC0E1108A8FD17B448A68554199C47D08FFB10D4B8)

_INF = None  # point at infinity (never a subgroup element we encode)


class Secp256k1Group(Group):
    """secp256k1 over gmpy2: affine points as (x, y) mpz tuples.

    Exponentiation runs in Jacobian coordinates; generator exponentiation
    uses a lazily built 4-bit fixed-base comb (64 windows x 15 points).
    Cofactor is 1, so on-curve non-infinity implies subgroup membership.
    """

    group_id = PRODUCTION
    order = int(_SECP_N)
    scalar_bytes = 32
    element_bytes = 33

    def __init__(self):
        self.generator = (_SECP_GX, _SECP_GY)
        self._comb = None
        self._check_structure()

    # -- field helpers ------------------------------------------------

    @staticmethod
    def _on_curve(x, y):
        return (y * y - x * x * x - 7) % _SECP_P == 0

    # -- Jacobian arithmetic ------------------------------------------

    @staticmethod
    def _jdouble(pt):
        x1, y1, z1 = pt
        if not y1:
            return (mpz(0), mpz(1), mpz(0))
        p = _SECP_P
        a = x1 * x1 % p
        b = y1 * y1 % p
        c = b * b % p
        d = 2 * ((x1 + b) * (x1 + b) - a - c) % p
        e = 3 * a % p
        f = e * e % p
        x3 = (f - 2 * d) % p
        y3 = (e * (d - x3) - 8 * c) % p
        z3 = 2 * y1 * z1 % p
        return (x3, y3, z3)

    @classmethod
    def _jadd(cls, pt1, pt2):
        x1, y1, z1 = pt1
        x2, y2, z2 = pt2
        if not z1:
            return pt2
        if not z2:
            return pt1
        p = _SECP_P
        z1z1 = z1 * z1 % p
        z2z2 = z2 * z2 % p
        u1 = x1 * z2z2 % p
        u2 = x2 * z1z1 % p
        s1 = y1 * z2 * z2z2 % p
        s2 = y2 * z1 * z1z1 % p
        h = (u2 - u1) % p
        if not h:
            if (s2 - s1) % p:
                return (mpz(0), mpz(1), mpz(0))
            return cls._jdouble(pt1)
        i = 4 * h * h % p
        j = h * i % p
        r = 2 * (s2 - s1) % p
        v = u1 * i % p
        x3 = (r * r - j - 2 * v) % p
        y3 = (r * (v - x3) - 2 * s1 * j) % p
        z3 = 2 * h * z1 * z2 % p
        return (x3, y3, z3)

    @staticmethod
    def _to_affine(pt):
        x, y, z = pt
        if not z:
            return _INF
        zinv = gmpy2.invert(z, _SECP_P)
        zinv2 = zinv * zinv % _SECP_P
        return (x * zinv2 % _SECP_P, y * zinv2 * zinv % _SECP_P)

    @staticmethod
    def _to_jacobian(pt):
        if pt is _INF:
            return (mpz(0), mpz(1), mpz(0))
        return (pt[0], pt[1], mpz(1))

    def _jmul(self, e, pt):
        acc = (mpz(0), mpz(1), mpz(0))
        q = self._to_jacobian(pt)
        while e:
            if e & 1:
                acc = self._jadd(acc, q)
            q = self._jdouble(q)
            e >>= 1
        return acc

    def _build_comb(self):
        table = []
        base = self._to_jacobian(self.generator)
        for _ in range(64):
            multiples = []
            acc = (mpz(0), mpz(1), mpz(0))
            for _ in range(15):
                acc = self._jadd(acc, base)
                multiples.append(acc)
            table.append(multiples)
            for _ in range(4):
                base = self._jdouble(base)
        self._comb = table

    def _gmul(self, e):
        if self._comb is None:
            self._build_comb()
        acc = (mpz(0), mpz(1), mpz(0))
        for i in range(64):
            window = (e >> (4 * i)) & 0xF
            if window:
                acc = self._jadd(acc, self._comb[i][window - 1])
        return acc

    # -- Group interface ----------------------------------------------

    def exp(self, base, e, meter=None):
        if meter is not None:
            meter.exponentiations += 1
        e %= self.order
        if base is _INF or e == 0:
            return _INF
        if base == self.generator:
            return self._to_affine(self._gmul(e))
        return self._to_affine(self._jmul(e, base))

    def mul(self, a, b):
        return self._to_affine(self._jadd(self._to_jacobian(a), self._to_jacobian(b)))

    def inv(self, a):
        if a is _INF:
            return _INF
        return (a[0], (-a[1]) % _SECP_P)

    def is_identity(self, a):
        return a is _INF

    def is_member(self, a):
        return a is not _INF and self._on_curve(a[0], a[1])

    def encode_element(self, a):
        if a is _INF:
            raise MalformedEncodingError("cannot encode the identity")
        prefix = 2 + int(a[1] & 1)
        return bytes([prefix]) + int(a[0]).to_bytes(32, "big")

    def decode_element(self, data):
        if len(data) != 33 or data[0] not in (2, 3):
            raise MalformedEncodingError("bad compressed-point encoding")
        x = mpz(int.from_bytes(data[1:], "big"))
        if x >= _SECP_P:
            raise MalformedEncodingError("x out of field range")
        rhs = (x * x * x + 7) % _SECP_P
        y = gmpy2.powmod(rhs, (_SECP_P + 1) // 4, _SECP_P)
        if y * y % _SECP_P != rhs:
            raise NotInSubgroupError("x is not on the curve")
        if int(y & 1) != data[0] - 2:
            y = (-y) % _SECP_P
        return (x, y)


_INSTANCES: dict[str, Group] = {}


def instantiate(group_id: str) -> Group:
    """Return the validated group for ``production`` or ``toy``.

    Instances are cached: they are immutable and the production one
    carries a precomputed generator table.
    """
    if group_id not in (PRODUCTION, TOY):
        raise UnknownGroupError(f"unknown group identifier: {group_id!r}")
    if group_id not in _INSTANCES:
        _INSTANCES[group_id] = ToyGroup() if group_id == TOY else Secp256k1Group()
    return _INSTANCES[group_id]
