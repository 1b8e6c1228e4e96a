"""Accountable ring signatures.

The scheme is an ElGamal encryption of the signer's verification key
under the opener key, tied to the ring by an N-branch disjunctive
Chaum-Pedersen/Schnorr OR-proof and made non-interactive with the
Fiat-Shamir transform.  Seven algorithms: setup, okgen, ukgen, rsign,
rverify, open, judge.

Branch i proves "the ciphertext (u, v) encrypts pk_i and I know the
discrete log of pk_i":

    a_i = g^alpha,  b_i = opk^alpha      (Chaum-Pedersen half: u = g^r,
                                          v/pk_i = opk^r)
    d_i = g^beta                         (Schnorr half: pk_i = g^sk)

with per-branch responses (z_r_i, z_s_i) and challenges c_i summing to
the overall Fiat-Shamir challenge.  Only the true index is computed
honestly; all other branches are simulated backwards.

Every operation is pure given an explicit entropy source; all types are
immutable, so verification may run in parallel freely.
"""

from dataclasses import dataclass

from .errors import (
    DuplicateRingMembersError,
    MalformedEncodingError,
    SignerNotInRingError,
)
from .group import CostMeter, Group, encode_fields, instantiate

SCHEME_VERSION = 1

_SIG_TAG = b"arswallet/ring-sig/v1"
_OPEN_TAG = b"arswallet/open-proof/v1"


@dataclass(frozen=True)
class PublicParams:
    group: Group
    scheme_version: int = SCHEME_VERSION

    def id_bytes(self) -> bytes:
        return encode_fields(self.group.group_id.encode(),
                             bytes([self.scheme_version]))


@dataclass(frozen=True)
class OpenerKeyPair:
    opk: object
    osk: int


@dataclass(frozen=True)
class UserKeyPair:
    pk: object
    sk: int


class Ring:
    """Ordered ring of verification keys; order is significant and fixed.

    Rings differing only in member order are distinct rings.  Duplicates
    are rejected: they would let one signature be judged for two keys.
    """

    def __init__(self, members):
        members = tuple(members)
        if len(members) < 1:
            raise DuplicateRingMembersError("ring must have at least one member")
        if len(set(members)) != len(members):
            raise DuplicateRingMembersError("ring members must be pairwise distinct")
        self.members = members

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, pk):
        return pk in self.members

    def __eq__(self, other):
        return isinstance(other, Ring) and self.members == other.members

    def __hash__(self):
        return hash(self.members)

    def index(self, pk):
        return self.members.index(pk)

    def encode(self, group: Group) -> bytes:
        return encode_fields(*(group.encode_element(pk) for pk in self.members))


@dataclass(frozen=True)
class Branch:
    a: object
    b: object
    d: object
    c: int
    z_r: int
    z_s: int


@dataclass(frozen=True)
class RingSignature:
    u: object
    v: object
    branches: tuple


@dataclass(frozen=True)
class OpeningProof:
    pk_identified: object
    a1: object
    a2: object
    c: int
    z: int


def setup(group_id: str) -> PublicParams:
    return PublicParams(group=instantiate(group_id))


def okgen(pp: PublicParams, rng=None) -> OpenerKeyPair:
    g = pp.group
    osk = g.random_scalar(rng)
    return OpenerKeyPair(opk=g.exp(g.generator, osk), osk=osk)


def ukgen(pp: PublicParams, rng=None) -> UserKeyPair:
    g = pp.group
    sk = g.random_scalar(rng)
    return UserKeyPair(pk=g.exp(g.generator, sk), sk=sk)


def _challenge(pp, opk, message, ring, u, v, commitments, meter=None) -> int:
    g = pp.group
    fields = [pp.id_bytes(), g.encode_element(opk), ring.encode(g), message,
              g.encode_element(u), g.encode_element(v)]
    for a, b, d in commitments:
        fields.extend((g.encode_element(a), g.encode_element(b),
                       g.encode_element(d)))
    return g.hash_to_scalar(_SIG_TAG, encode_fields(*fields), meter)


def rsign(pp: PublicParams, opk, message: bytes, ring: Ring, sk: int,
          rng=None) -> RingSignature:
    """Sign ``message`` for ``ring`` with signing key ``sk``.

    Randomness is consumed in a fixed order (r, alpha, beta, then
    c_i, z_r_i, z_s_i per simulated branch in ring order) so forced-rng
    test vectors are reproducible.
    """
    g = pp.group
    q = g.order
    pk = g.exp(g.generator, sk)
    if pk not in ring:
        raise SignerNotInRingError("pk derived from sk is not a ring member")
    ell = ring.index(pk)
    n = len(ring)

    r = g.random_scalar(rng)
    alpha = g.random_scalar(rng)
    beta = g.random_scalar(rng)
    u = g.exp(g.generator, r)
    v = g.mul(pk, g.exp(opk, r))

    commitments = [None] * n
    sims = [None] * n
    commitments[ell] = (g.exp(g.generator, alpha), g.exp(opk, alpha),
                        g.exp(g.generator, beta))
    for i, pk_i in enumerate(ring):
        if i == ell:
            continue
        c_i = g.random_scalar(rng)
        z_r_i = g.random_scalar(rng)
        z_s_i = g.random_scalar(rng)
        a_i = g.mul(g.exp(g.generator, z_r_i), g.exp(u, -c_i))
        b_i = g.mul(g.exp(opk, z_r_i), g.exp(g.div(v, pk_i), -c_i))
        d_i = g.mul(g.exp(g.generator, z_s_i), g.exp(pk_i, -c_i))
        commitments[i] = (a_i, b_i, d_i)
        sims[i] = (c_i, z_r_i, z_s_i)

    x = _challenge(pp, opk, message, ring, u, v, commitments)
    c_ell = (x - sum(s[0] for s in sims if s)) % q
    sims[ell] = (c_ell, (alpha + c_ell * r) % q, (beta + c_ell * sk) % q)

    branches = tuple(Branch(a=com[0], b=com[1], d=com[2],
                            c=sim[0], z_r=sim[1], z_s=sim[2])
                     for com, sim in zip(commitments, sims))
    return RingSignature(u=u, v=v, branches=branches)


def rverify(pp: PublicParams, opk, message: bytes, ring: Ring,
            sig: RingSignature, meter: CostMeter | None = None) -> bool:
    """Deterministic verification: challenge-sum plus three equations per branch.

    The meter records the six metered exponentiations per branch (the
    on-chain cost model) and one hash invocation for the challenge.
    """
    g = pp.group
    if len(sig.branches) != len(ring):
        return False
    commitments = [(br.a, br.b, br.d) for br in sig.branches]
    x = _challenge(pp, opk, message, ring, sig.u, sig.v, commitments, meter)
    if sum(br.c for br in sig.branches) % g.order != x:
        return False
    ok = True
    for pk_i, br in zip(ring, sig.branches):
        lhs_a = g.exp(g.generator, br.z_r, meter)
        rhs_a = g.mul(br.a, g.exp(sig.u, br.c, meter))
        lhs_b = g.exp(opk, br.z_r, meter)
        rhs_b = g.mul(br.b, g.exp(g.div(sig.v, pk_i), br.c, meter))
        lhs_d = g.exp(g.generator, br.z_s, meter)
        rhs_d = g.mul(br.d, g.exp(pk_i, br.c, meter))
        if lhs_a != rhs_a or lhs_b != rhs_b or lhs_d != rhs_d:
            ok = False
    return ok


def open_signature(pp: PublicParams, message: bytes, ring: Ring,
                   sig: RingSignature, osk: int, rng=None):
    """Identify the signer and prove it; None is the scheme's bottom output.

    Returns None when the signature does not verify or the decrypted key
    is outside the ring (wrong osk, or an untraceable ciphertext that a
    sound scheme never produces from an accepted signature).
    """
    g = pp.group
    opk = g.exp(g.generator, osk)
    if not rverify(pp, opk, message, ring, sig):
        return None
    pk_star = g.div(sig.v, g.exp(sig.u, osk))
    if pk_star not in ring:
        return None
    # DLEQ: log_g(opk) = log_u(v / pk*) = osk.
    alpha = g.random_scalar(rng)
    a1 = g.exp(g.generator, alpha)
    a2 = g.exp(sig.u, alpha)
    c = _open_challenge(pp, opk, message, ring, sig, pk_star, a1, a2)
    z = (alpha + c * osk) % g.order
    return OpeningProof(pk_identified=pk_star, a1=a1, a2=a2, c=c, z=z)


def _open_challenge(pp, opk, message, ring, sig, pk, a1, a2) -> int:
    g = pp.group
    return g.hash_to_scalar(_OPEN_TAG, encode_fields(
        pp.id_bytes(), g.encode_element(opk), message, ring.encode(g),
        serialize_signature(pp, sig), g.encode_element(pk),
        g.encode_element(a1), g.encode_element(a2)))


def judge(pp: PublicParams, opk, message: bytes, ring: Ring,
          sig: RingSignature, pk, proof: OpeningProof) -> bool:
    """Publicly check an opening proof; deterministic, needs no secret."""
    g = pp.group
    if not rverify(pp, opk, message, ring, sig):
        return False
    if pk not in ring or proof.pk_identified != pk:
        return False
    c = _open_challenge(pp, opk, message, ring, sig, pk, proof.a1, proof.a2)
    if c != proof.c:
        return False
    if g.exp(g.generator, proof.z) != g.mul(proof.a1, g.exp(opk, proof.c)):
        return False
    if g.exp(sig.u, proof.z) != g.mul(proof.a2,
                                      g.exp(g.div(sig.v, pk), proof.c)):
        return False
    return True


def simulate_branches(pp: PublicParams, opk, u, v, ring: Ring, rng=None):
    """Honest-verifier zero-knowledge simulator for the OR-proof.

    Picks every (c_i, z_r_i, z_s_i) at random and derives the
    commitments backwards; the per-branch verification equations all
    hold by construction (with the overall challenge programmed as the
    challenge sum).  Supports the anonymity argument: honest branches
    are distributed like simulated ones.
    """
    g = pp.group
    branches = []
    for pk_i in ring:
        c_i = g.random_scalar(rng)
        z_r_i = g.random_scalar(rng)
        z_s_i = g.random_scalar(rng)
        a_i = g.mul(g.exp(g.generator, z_r_i), g.exp(u, -c_i))
        b_i = g.mul(g.exp(opk, z_r_i), g.exp(g.div(v, pk_i), -c_i))
        d_i = g.mul(g.exp(g.generator, z_s_i), g.exp(pk_i, -c_i))
        branches.append(Branch(a=a_i, b=b_i, d=d_i, c=c_i, z_r=z_r_i,
                               z_s=z_s_i))
    return tuple(branches)


def branch_equations_hold(pp: PublicParams, opk, u, v, ring: Ring,
                          branches) -> bool:
    """Per-branch verification equations only (no challenge recomputation)."""
    g = pp.group
    for pk_i, br in zip(ring, branches):
        if g.exp(g.generator, br.z_r) != g.mul(br.a, g.exp(u, br.c)):
            return False
        if g.exp(opk, br.z_r) != g.mul(br.b, g.exp(g.div(v, pk_i), br.c)):
            return False
        if g.exp(g.generator, br.z_s) != g.mul(br.d, g.exp(pk_i, br.c)):
            return False
    return True


# -- bit-exact serialization -----------------------------------------


def serialize_signature(pp: PublicParams, sig: RingSignature) -> bytes:
    """version (1) || N (4, BE) || u || v || per-branch a,b,d,c,z_r,z_s."""
    g = pp.group
    out = [bytes([pp.scheme_version]),
           len(sig.branches).to_bytes(4, "big"),
           g.encode_element(sig.u), g.encode_element(sig.v)]
    for br in sig.branches:
        out.extend((g.encode_element(br.a), g.encode_element(br.b),
                    g.encode_element(br.d), g.encode_scalar(br.c),
                    g.encode_scalar(br.z_r), g.encode_scalar(br.z_s)))
    return b"".join(out)


def deserialize_signature(pp: PublicParams, data: bytes) -> RingSignature:
    g = pp.group
    ew, sw = g.element_bytes, g.scalar_bytes
    if len(data) < 5 or data[0] != pp.scheme_version:
        raise MalformedEncodingError("bad signature header")
    n = int.from_bytes(data[1:5], "big")
    branch_len = 3 * ew + 3 * sw
    if len(data) != 5 + 2 * ew + n * branch_len:
        raise MalformedEncodingError("bad signature length")
    off = 5
    u = g.decode_element(data[off:off + ew]); off += ew
    v = g.decode_element(data[off:off + ew]); off += ew
    branches = []
    for _ in range(n):
        a = g.decode_element(data[off:off + ew]); off += ew
        b = g.decode_element(data[off:off + ew]); off += ew
        d = g.decode_element(data[off:off + ew]); off += ew
        c = g.decode_scalar(data[off:off + sw]); off += sw
        z_r = g.decode_scalar(data[off:off + sw]); off += sw
        z_s = g.decode_scalar(data[off:off + sw]); off += sw
        branches.append(Branch(a=a, b=b, d=d, c=c, z_r=z_r, z_s=z_s))
    return RingSignature(u=u, v=v, branches=tuple(branches))


def serialize_proof(pp: PublicParams, proof: OpeningProof) -> bytes:
    """pk || A1 || A2 || c || z with fixed-width encodings."""
    g = pp.group
    return b"".join((g.encode_element(proof.pk_identified),
                     g.encode_element(proof.a1), g.encode_element(proof.a2),
                     g.encode_scalar(proof.c), g.encode_scalar(proof.z)))


def deserialize_proof(pp: PublicParams, data: bytes) -> OpeningProof:
    g = pp.group
    ew, sw = g.element_bytes, g.scalar_bytes
    if len(data) != 3 * ew + 2 * sw:
        raise MalformedEncodingError("bad proof length")
    off = 0
    pk = g.decode_element(data[off:off + ew]); off += ew
    a1 = g.decode_element(data[off:off + ew]); off += ew
    a2 = g.decode_element(data[off:off + ew]); off += ew
    c = g.decode_scalar(data[off:off + sw]); off += sw
    z = g.decode_scalar(data[off:off + sw])
    return OpeningProof(pk_identified=pk, a1=a1, a2=a2, c=c, z=z)
