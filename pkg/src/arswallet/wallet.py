"""Simulated account-abstraction chain.

A single in-process state machine: contract wallets hold an immutable
policy, a monotone nonce and an action rule.  Submitting a transaction
verifies the authorization bundle (the only "on-chain" computation,
metered by CostMeter), then executes the action atomically.  No
externally owned account ever issues a transaction; an accepted log
entry is just (request, bundle, receipt).

The chain is single-writer: submissions are serialized by the caller;
reads of the log may happen concurrently between submissions.
"""

import json
from dataclasses import dataclass, field

from . import ars
from .errors import (
    AddressCollisionError,
    BadNonceError,
    DuplicateIndividualsError,
    EmptyPolicyError,
    ExtraSignatureError,
    InsufficientBalanceError,
    InvalidIndividualSignatureError,
    InvalidRingSignatureError,
    MissingSignatureError,
    OverlappingRingsError,
    PolicyError,
    UnknownWalletError,
)
from .group import CostMeter, encode_fields
from .individual import individual_scheme
from .keccak import keccak256

ADDRESS_BYTES = 20


def derive_address(key_bytes: bytes) -> bytes:
    """Last 20 bytes of Keccak-256 of a canonical key encoding."""
    return keccak256(key_bytes)[-ADDRESS_BYTES:]


@dataclass(frozen=True)
class PolicyRing:
    ring: ars.Ring
    opk: object


@dataclass(frozen=True)
class Policy:
    """Rings (each with its opener key) plus individual verification keys.

    Every listed ring and individual must authorize a transaction; at
    most one ring signature per ring (more would be indistinguishable
    anyway), and rings must be pairwise disjoint as key sets.
    """

    rings: tuple
    individuals: tuple

    def encode(self, pp: ars.PublicParams) -> bytes:
        g = pp.group
        fields = [len(self.rings).to_bytes(4, "big")]
        for pr in self.rings:
            fields.append(g.encode_element(pr.opk))
            fields.append(pr.ring.encode(g))
        fields.append(encode_fields(*self.individuals))
        return encode_fields(*fields)


def validate_policy(policy: Policy) -> None:
    """Raise a PolicyError subclass if any policy invariant fails."""
    if not policy.rings and not policy.individuals:
        raise EmptyPolicyError("policy requires at least one ring or individual")
    seen = set()
    for pr in policy.rings:
        members = set(pr.ring.members)
        if seen & members:
            raise OverlappingRingsError("policy rings must be pairwise disjoint")
        seen |= members
    if len(set(policy.individuals)) != len(policy.individuals):
        raise DuplicateIndividualsError("individual vks must be pairwise distinct")


@dataclass(frozen=True)
class TransferRule:
    amount: int
    to: bytes


@dataclass(frozen=True)
class RecordRule:
    pass


@dataclass
class ContractWallet:
    address: bytes
    policy: Policy
    action_rule: object
    nonce: int = 0


@dataclass(frozen=True)
class TransactionRequest:
    chain_id: int
    wallet: bytes
    nonce: int
    payload: bytes


@dataclass(frozen=True)
class AuthorizationBundle:
    ring_sigs: tuple  # (ring index, RingSignature)
    ind_sigs: tuple   # (vk index, signature bytes)


@dataclass(frozen=True)
class Receipt:
    tx_index: int
    exponentiations: int
    hash_calls: int


@dataclass(frozen=True)
class LogEntry:
    req: TransactionRequest
    bundle: AuthorizationBundle
    receipt: Receipt


def canonical_message(req: TransactionRequest) -> bytes:
    """The signed message M; binds chain, wallet, nonce and payload.

    Length-prefixed concatenation, so distinct requests never encode to
    the same message.
    """
    return encode_fields(req.chain_id.to_bytes(8, "big"), req.wallet,
                         req.nonce.to_bytes(8, "big"), req.payload)


class Chain:
    """Wallets, balances, append-only log and the per-transaction meter."""

    def __init__(self, group_id: str, chain_id: int = 1):
        self.pp = ars.setup(group_id)
        self.individual = individual_scheme(group_id)
        self.chain_id = chain_id
        self.wallets: dict[bytes, ContractWallet] = {}
        self.accounts: dict[bytes, int] = {}
        self.log: list[LogEntry] = []

    @property
    def group_id(self) -> str:
        return self.pp.group.group_id

    def credit(self, address: bytes, amount: int) -> None:
        if amount < 0:
            raise ValueError("credit amount must be non-negative")
        self.accounts[address] = self.accounts.get(address, 0) + amount

    def balance(self, address: bytes) -> int:
        return self.accounts.get(address, 0)


def deploy_contract_wallet(chain: Chain, policy: Policy, action_rule,
                           salt: bytes) -> bytes:
    """Deploy a wallet at a deterministic (salt, policy)-derived address."""
    validate_policy(policy)
    address = derive_address(b"WALLET" + encode_fields(salt,
                                                       policy.encode(chain.pp)))
    if address in chain.wallets:
        raise AddressCollisionError(f"wallet already deployed at {address.hex()}")
    chain.wallets[address] = ContractWallet(address=address, policy=policy,
                                            action_rule=action_rule)
    return address


def submit_transaction(chain: Chain, req: TransactionRequest,
                       bundle: AuthorizationBundle) -> Receipt:
    """Verify the bundle against the wallet policy and execute atomically.

    All checks run before any state mutation, so a rejection leaves the
    chain untouched.  The meter covers on-chain ring verification only.
    """
    wallet = chain.wallets.get(req.wallet)
    if wallet is None:
        raise UnknownWalletError(f"no wallet at {req.wallet.hex()}")
    if req.nonce != wallet.nonce:
        raise BadNonceError(f"expected nonce {wallet.nonce}, got {req.nonce}")
    if req.chain_id != chain.chain_id:
        raise BadNonceError(f"wrong chain id {req.chain_id}")

    policy = wallet.policy
    ring_by_index = _index_signatures(bundle.ring_sigs, len(policy.rings))
    ind_by_index = _index_signatures(bundle.ind_sigs, len(policy.individuals))

    message = canonical_message(req)
    meter = CostMeter()
    for i, pr in enumerate(policy.rings):
        sig = ring_by_index[i]
        if not ars.rverify(chain.pp, pr.opk, message, pr.ring, sig, meter):
            raise InvalidRingSignatureError(i)
    for j, vk in enumerate(policy.individuals):
        if not chain.individual.verify(vk, message, ind_by_index[j]):
            raise InvalidIndividualSignatureError(j)

    if isinstance(wallet.action_rule, TransferRule):
        rule = wallet.action_rule
        if chain.balance(wallet.address) < rule.amount:
            raise InsufficientBalanceError(
                f"wallet holds {chain.balance(wallet.address)}, rule needs {rule.amount}")

    # Commit point: every check passed.
    receipt = Receipt(tx_index=len(chain.log),
                      exponentiations=meter.exponentiations,
                      hash_calls=meter.hash_calls)
    if isinstance(wallet.action_rule, TransferRule):
        rule = wallet.action_rule
        chain.accounts[wallet.address] -= rule.amount
        chain.accounts[rule.to] = chain.accounts.get(rule.to, 0) + rule.amount
    chain.log.append(LogEntry(req=req, bundle=bundle, receipt=receipt))
    wallet.nonce += 1
    return receipt


def _index_signatures(entries, expected: int) -> dict:
    by_index = {}
    for idx, sig in entries:
        if not 0 <= idx < expected or idx in by_index:
            raise ExtraSignatureError(f"unexpected or duplicate signature for slot {idx}")
        by_index[idx] = sig
    if len(by_index) < expected:
        missing = sorted(set(range(expected)) - set(by_index))
        raise MissingSignatureError(f"missing signature for slot(s) {missing}")
    return by_index


# -- JSON codecs (the CLI file formats) -------------------------------


def policy_to_json(pp: ars.PublicParams, policy: Policy) -> dict:
    g = pp.group
    return {
        "rings": [{"opk": g.encode_element(pr.opk).hex(),
                   "members": [g.encode_element(pk).hex()
                               for pk in pr.ring]}
                  for pr in policy.rings],
        "individuals": [vk.hex() for vk in policy.individuals],
    }


def policy_from_json(pp: ars.PublicParams, obj: dict) -> Policy:
    g = pp.group
    try:
        rings = tuple(PolicyRing(opk=g.decode_element(bytes.fromhex(r["opk"])),
                                 ring=ars.Ring(g.decode_element(bytes.fromhex(m))
                                               for m in r["members"]))
                      for r in obj["rings"])
        individuals = tuple(bytes.fromhex(v) for v in obj["individuals"])
    except (KeyError, TypeError, ValueError) as exc:
        raise PolicyError(f"malformed policy file: {exc}") from exc
    return Policy(rings=rings, individuals=individuals)


def rule_to_json(rule) -> dict:
    if isinstance(rule, TransferRule):
        return {"type": "transfer", "amount": rule.amount, "to": rule.to.hex()}
    return {"type": "record"}


def rule_from_json(obj: dict):
    if obj["type"] == "transfer":
        return TransferRule(amount=int(obj["amount"]),
                            to=bytes.fromhex(obj["to"]))
    if obj["type"] == "record":
        return RecordRule()
    raise PolicyError(f"unknown action rule {obj['type']!r}")


def request_to_json(req: TransactionRequest) -> dict:
    return {"chain_id": req.chain_id, "wallet": req.wallet.hex(),
            "nonce": req.nonce, "payload": req.payload.hex()}


def request_from_json(obj: dict) -> TransactionRequest:
    return TransactionRequest(chain_id=int(obj["chain_id"]),
                              wallet=bytes.fromhex(obj["wallet"]),
                              nonce=int(obj["nonce"]),
                              payload=bytes.fromhex(obj["payload"]))


def bundle_to_json(pp: ars.PublicParams, bundle: AuthorizationBundle) -> dict:
    return {
        "ring_sigs": [{"ring": i,
                       "sig": ars.serialize_signature(pp, sig).hex()}
                      for i, sig in bundle.ring_sigs],
        "ind_sigs": [{"vk": j, "sig": sig.hex()}
                     for j, sig in bundle.ind_sigs],
    }


def bundle_from_json(pp: ars.PublicParams, obj: dict) -> AuthorizationBundle:
    return AuthorizationBundle(
        ring_sigs=tuple((int(e["ring"]),
                         ars.deserialize_signature(pp, bytes.fromhex(e["sig"])))
                        for e in obj.get("ring_sigs", ())),
        ind_sigs=tuple((int(e["vk"]), bytes.fromhex(e["sig"]))
                       for e in obj.get("ind_sigs", ())),
    )


def transaction_data_to_json(pp: ars.PublicParams, req: TransactionRequest,
                             bundle: AuthorizationBundle) -> dict:
    obj = request_to_json(req)
    obj.update(bundle_to_json(pp, bundle))
    return obj


def transaction_data_from_json(pp: ars.PublicParams, obj: dict):
    return request_from_json(obj), bundle_from_json(pp, obj)


def receipt_to_json(receipt: Receipt) -> dict:
    return {"tx_index": receipt.tx_index,
            "exponentiations": receipt.exponentiations,
            "hash_calls": receipt.hash_calls}


def chain_to_json(chain: Chain) -> dict:
    pp = chain.pp
    return {
        "group": chain.group_id,
        "chain_id": chain.chain_id,
        "wallets": {w.address.hex(): {"policy": policy_to_json(pp, w.policy),
                                      "rule": rule_to_json(w.action_rule),
                                      "nonce": w.nonce}
                    for w in chain.wallets.values()},
        "accounts": {addr.hex(): bal for addr, bal in chain.accounts.items()},
        "log": [dict(transaction_data_to_json(pp, e.req, e.bundle),
                     receipt=receipt_to_json(e.receipt))
                for e in chain.log],
    }


def chain_from_json(obj: dict) -> Chain:
    chain = Chain(obj["group"], chain_id=int(obj.get("chain_id", 1)))
    for addr_hex, w in obj["wallets"].items():
        address = bytes.fromhex(addr_hex)
        chain.wallets[address] = ContractWallet(
            address=address,
            policy=policy_from_json(chain.pp, w["policy"]),
            action_rule=rule_from_json(w["rule"]),
            nonce=int(w["nonce"]))
    for addr_hex, bal in obj["accounts"].items():
        chain.accounts[bytes.fromhex(addr_hex)] = int(bal)
    for entry in obj["log"]:
        req, bundle = transaction_data_from_json(chain.pp, entry)
        r = entry["receipt"]
        chain.log.append(LogEntry(req=req, bundle=bundle,
                                  receipt=Receipt(int(r["tx_index"]),
                                                  int(r["exponentiations"]),
                                                  int(r["hash_calls"]))))
    return chain


def chain_snapshot(chain: Chain) -> bytes:
    """Canonical serialized state, for atomicity comparisons."""
    return json.dumps(chain_to_json(chain), sort_keys=True,
                      separators=(",", ":")).encode()
