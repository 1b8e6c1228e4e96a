"""Off-chain accountability channel.

Any holder of a ring's shared opening key can open a logged transaction
and produce a claim; anyone can judge a claim from public chain data
alone.  Claims are files exchanged out of band; the chain never stores
them.
"""

from dataclasses import dataclass

from . import ars
from .errors import OutOfRangeError
from .wallet import Chain, canonical_message


@dataclass(frozen=True)
class AuditClaim:
    tx_index: int
    ring_index: int
    pk_identified: object
    proof: ars.OpeningProof


def _locate(chain: Chain, tx_index: int, ring_index: int):
    if not 0 <= tx_index < len(chain.log):
        raise OutOfRangeError(f"no transaction at index {tx_index}")
    entry = chain.log[tx_index]
    wallet = chain.wallets.get(entry.req.wallet)
    if wallet is None or not 0 <= ring_index < len(wallet.policy.rings):
        raise OutOfRangeError(f"no policy ring at index {ring_index}")
    policy_ring = wallet.policy.rings[ring_index]
    sig = dict(entry.bundle.ring_sigs)[ring_index]
    return entry, policy_ring, sig


def open_transaction(chain: Chain, tx_index: int, ring_index: int, osk: int,
                     rng=None):
    """Open a logged ring signature; None when osk does not match."""
    entry, policy_ring, sig = _locate(chain, tx_index, ring_index)
    message = canonical_message(entry.req)
    proof = ars.open_signature(chain.pp, message, policy_ring.ring, sig, osk,
                               rng)
    if proof is None:
        return None
    return AuditClaim(tx_index=tx_index, ring_index=ring_index,
                      pk_identified=proof.pk_identified, proof=proof)


def judge_transaction(chain: Chain, claim: AuditClaim) -> bool:
    """Check a claim against public chain data only; no secret involved."""
    try:
        entry, policy_ring, sig = _locate(chain, claim.tx_index,
                                          claim.ring_index)
    except OutOfRangeError:
        return False
    message = canonical_message(entry.req)
    return ars.judge(chain.pp, policy_ring.opk, message, policy_ring.ring,
                     sig, claim.pk_identified, claim.proof)


def claim_to_json(pp: ars.PublicParams, claim: AuditClaim) -> dict:
    return {"tx_index": claim.tx_index, "ring": claim.ring_index,
            "pk": pp.group.encode_element(claim.pk_identified).hex(),
            "proof": ars.serialize_proof(pp, claim.proof).hex()}


def claim_from_json(pp: ars.PublicParams, obj: dict) -> AuditClaim:
    return AuditClaim(tx_index=int(obj["tx_index"]),
                      ring_index=int(obj["ring"]),
                      pk_identified=pp.group.decode_element(
                          bytes.fromhex(obj["pk"])),
                      proof=ars.deserialize_proof(pp,
                                                  bytes.fromhex(obj["proof"])))
