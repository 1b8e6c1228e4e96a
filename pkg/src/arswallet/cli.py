"""Operator-facing command line.

Multi-party flows are simulated over files: the chain lives in
``chain.json`` inside a workspace directory (``--workspace`` or the
ARSWALLET_WORKSPACE environment variable), signers exchange bundle
files, auditors exchange claim files.  Mutating commands lock the chain
state file and write it atomically (write-to-temp, rename).

Every failure maps to a distinct nonzero exit code with a one-line
machine-parsable ``error: <code>: <detail>`` message on stderr.
"""

import argparse
import json
import os
import sys
from pathlib import Path

from filelock import FileLock

from . import ars, audit, harness, wallet
from .errors import (
    ArsWalletError,
    MalformedEncodingError,
    OutOfRangeError,
    UntraceableError,
    exit_code_for,
)

CHAIN_FILE = "chain.json"


def _workspace(args) -> Path:
    ws = Path(args.workspace or os.environ.get("ARSWALLET_WORKSPACE", "."))
    ws.mkdir(parents=True, exist_ok=True)
    return ws


def _read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedEncodingError(f"cannot read {path}: {exc}") from exc


def _write_json(path, obj) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(json.dumps(obj, indent=2) + "\n")
    os.replace(tmp, path)


def _load_chain(ws: Path) -> wallet.Chain:
    path = ws / CHAIN_FILE
    if not path.exists():
        raise MalformedEncodingError(
            f"no chain state at {path}; run `arswallet chain init` first")
    return wallet.chain_from_json(_read_json(path))


def _save_chain(ws: Path, chain: wallet.Chain) -> None:
    _write_json(ws / CHAIN_FILE, wallet.chain_to_json(chain))


def _chain_lock(ws: Path) -> FileLock:
    return FileLock(str(ws / (CHAIN_FILE + ".lock")))


# -- subcommand handlers ----------------------------------------------


def cmd_chain_init(args) -> int:
    ws = _workspace(args)
    with _chain_lock(ws):
        path = ws / CHAIN_FILE
        if path.exists():
            raise ArsWalletError(f"chain state already exists at {path}")
        _save_chain(ws, wallet.Chain(args.group))
    print(str(ws / CHAIN_FILE))
    return 0


def cmd_keygen(args) -> int:
    pp = ars.setup(args.group)
    g = pp.group
    if args.kind == "user":
        kp = ars.ukgen(pp)
        obj = {"kind": "user", "group": args.group,
               "pk": g.encode_element(kp.pk).hex(),
               "sk": g.encode_scalar(kp.sk).hex()}
    elif args.kind == "opener":
        kp = ars.okgen(pp)
        obj = {"kind": "opener", "group": args.group,
               "opk": g.encode_element(kp.opk).hex(),
               "osk": g.encode_scalar(kp.osk).hex()}
    else:
        from .individual import individual_scheme
        kp = individual_scheme(args.group).keygen()
        obj = {"kind": "individual", "group": args.group,
               "vk": kp.vk.hex(), "sigk": kp.sigk.hex()}
    _write_json(args.out, obj)
    print(args.out)
    return 0


def _parse_rule(text: str):
    if text == "record":
        return wallet.RecordRule()
    if text.startswith("transfer:"):
        try:
            _, amount, to = text.split(":")
            return wallet.TransferRule(amount=int(amount),
                                       to=bytes.fromhex(to))
        except ValueError as exc:
            raise MalformedEncodingError(f"bad transfer rule {text!r}") from exc
    raise MalformedEncodingError(
        f"unknown rule {text!r}; use record or transfer:<amount>:<hexaddr>")


def cmd_wallet_deploy(args) -> int:
    ws = _workspace(args)
    with _chain_lock(ws):
        chain = _load_chain(ws)
        policy = wallet.policy_from_json(chain.pp, _read_json(args.policy))
        address = wallet.deploy_contract_wallet(chain, policy,
                                                _parse_rule(args.rule),
                                                bytes.fromhex(args.salt))
        _save_chain(ws, chain)
    print(address.hex())
    return 0


def cmd_wallet_fund(args) -> int:
    ws = _workspace(args)
    with _chain_lock(ws):
        chain = _load_chain(ws)
        chain.credit(bytes.fromhex(args.addr), args.amount)
        _save_chain(ws, chain)
    print(chain.balance(bytes.fromhex(args.addr)))
    return 0


def cmd_tx_build(args) -> int:
    ws = _workspace(args)
    chain = _load_chain(ws)
    address = bytes.fromhex(args.wallet)
    cw = chain.wallets.get(address)
    if cw is None:
        raise ArsWalletError(f"no wallet at {args.wallet}")
    req = wallet.TransactionRequest(chain_id=chain.chain_id, wallet=address,
                                    nonce=cw.nonce,
                                    payload=bytes.fromhex(args.payload))
    _write_json(args.out, wallet.request_to_json(req))
    print(args.out)
    return 0


def _load_bundle(pp, path) -> dict:
    if Path(path).exists():
        return _read_json(path)
    return {"ring_sigs": [], "ind_sigs": []}


def cmd_tx_sign_ring(args) -> int:
    ws = _workspace(args)
    chain = _load_chain(ws)
    pp = chain.pp
    g = pp.group
    req = wallet.request_from_json(_read_json(args.req))
    cw = chain.wallets.get(req.wallet)
    if cw is None:
        raise ArsWalletError(f"no wallet at {req.wallet.hex()}")
    if not 0 <= args.ring < len(cw.policy.rings):
        raise OutOfRangeError(f"wallet has no policy ring {args.ring}")
    key = _read_json(args.key)
    if key.get("kind") != "user":
        raise MalformedEncodingError("sign-ring needs a user key file")
    sk = g.decode_scalar(bytes.fromhex(key["sk"]))
    pr = cw.policy.rings[args.ring]
    message = wallet.canonical_message(req)
    sig = ars.rsign(pp, pr.opk, message, pr.ring, sk)
    bundle = _load_bundle(pp, args.bundle)
    bundle["ring_sigs"].append({"ring": args.ring,
                                "sig": ars.serialize_signature(pp, sig).hex()})
    _write_json(args.bundle, bundle)
    print(args.bundle)
    return 0


def cmd_tx_sign_ind(args) -> int:
    ws = _workspace(args)
    chain = _load_chain(ws)
    req = wallet.request_from_json(_read_json(args.req))
    cw = chain.wallets.get(req.wallet)
    if cw is None:
        raise ArsWalletError(f"no wallet at {req.wallet.hex()}")
    key = _read_json(args.key)
    if key.get("kind") != "individual":
        raise MalformedEncodingError("sign-ind needs an individual key file")
    vk = bytes.fromhex(key["vk"])
    if vk not in cw.policy.individuals:
        raise OutOfRangeError("individual vk is not in the wallet policy")
    index = cw.policy.individuals.index(vk)
    message = wallet.canonical_message(req)
    sig = chain.individual.sign(bytes.fromhex(key["sigk"]), message)
    bundle = _load_bundle(chain.pp, args.bundle)
    bundle["ind_sigs"].append({"vk": index, "sig": sig.hex()})
    _write_json(args.bundle, bundle)
    print(args.bundle)
    return 0


def cmd_tx_submit(args) -> int:
    ws = _workspace(args)
    with _chain_lock(ws):
        chain = _load_chain(ws)
        req = wallet.request_from_json(_read_json(args.req))
        bundle = wallet.bundle_from_json(chain.pp, _read_json(args.bundle))
        receipt = wallet.submit_transaction(chain, req, bundle)
        _save_chain(ws, chain)
    print(json.dumps(wallet.receipt_to_json(receipt)))
    return 0


def cmd_audit_open(args) -> int:
    ws = _workspace(args)
    chain = _load_chain(ws)
    key = _read_json(args.osk)
    if key.get("kind") != "opener":
        raise MalformedEncodingError("audit open needs an opener key file")
    osk = chain.pp.group.decode_scalar(bytes.fromhex(key["osk"]))
    claim = audit.open_transaction(chain, args.tx, args.ring, osk)
    if claim is None:
        raise UntraceableError("open returned bottom (wrong osk or invalid signature)")
    _write_json(args.out, audit.claim_to_json(chain.pp, claim))
    print(args.out)
    return 0


def cmd_audit_judge(args) -> int:
    ws = _workspace(args)
    chain = _load_chain(ws)
    claim = audit.claim_from_json(chain.pp, _read_json(args.claim))
    accepted = audit.judge_transaction(chain, claim)
    print(1 if accepted else 0)
    return 0 if accepted else 1


def cmd_harness_run(args) -> int:
    pp = ars.setup(args.group)
    kwargs = {}
    if args.trials:
        kwargs["trials"] = args.trials
    report = harness.run_suite(pp, args.suite, **kwargs)
    print(json.dumps(report.to_json(), indent=2))
    return 0 if report.adversary_wins == 0 else 1


def cmd_bench_run(args) -> int:
    pp = ars.setup(args.group)
    report = harness.run_bench(pp, runs=args.runs)
    print(report.to_table())
    print(json.dumps(report.to_json()))
    return 0


# -- parser -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arswallet",
        description="Anonymous yet accountable contract wallet simulator")
    parser.add_argument("--workspace", "-w", default=None,
                        help="workspace directory (default: $ARSWALLET_WORKSPACE or .)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("chain", help="chain state management")
    csub = p.add_subparsers(dest="subcommand", required=True)
    c = csub.add_parser("init", help="create a fresh chain state file")
    c.add_argument("--group", choices=["production", "toy"],
                   default="production")
    c.set_defaults(func=cmd_chain_init)

    p = sub.add_parser("keygen", help="generate a key file")
    p.add_argument("kind", choices=["user", "opener", "individual"])
    p.add_argument("--group", choices=["production", "toy"],
                   default="production")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("wallet", help="contract wallet operations")
    wsub = p.add_subparsers(dest="subcommand", required=True)
    c = wsub.add_parser("deploy", help="deploy a contract wallet")
    c.add_argument("--policy", required=True)
    c.add_argument("--salt", required=True, help="hex salt")
    c.add_argument("--rule", default="record",
                   help="record or transfer:<amount>:<hexaddr>")
    c.set_defaults(func=cmd_wallet_deploy)
    c = wsub.add_parser("fund", help="credit a wallet balance")
    c.add_argument("--addr", required=True)
    c.add_argument("--amount", type=int, required=True)
    c.set_defaults(func=cmd_wallet_fund)

    p = sub.add_parser("tx", help="build, sign and submit transactions")
    tsub = p.add_subparsers(dest="subcommand", required=True)
    c = tsub.add_parser("build", help="write a transaction request file")
    c.add_argument("--wallet", required=True)
    c.add_argument("--payload", default="")
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_tx_build)
    c = tsub.add_parser("sign-ring", help="append a ring signature to a bundle")
    c.add_argument("--req", required=True)
    c.add_argument("--key", required=True)
    c.add_argument("--ring", type=int, required=True)
    c.add_argument("--bundle", required=True)
    c.set_defaults(func=cmd_tx_sign_ring)
    c = tsub.add_parser("sign-ind",
                        help="append an individual signature to a bundle")
    c.add_argument("--req", required=True)
    c.add_argument("--key", required=True)
    c.add_argument("--bundle", required=True)
    c.set_defaults(func=cmd_tx_sign_ind)
    c = tsub.add_parser("submit", help="submit a request with its bundle")
    c.add_argument("--req", required=True)
    c.add_argument("--bundle", required=True)
    c.set_defaults(func=cmd_tx_submit)

    p = sub.add_parser("audit", help="open and judge logged transactions")
    asub = p.add_subparsers(dest="subcommand", required=True)
    c = asub.add_parser("open", help="produce an audit claim")
    c.add_argument("--tx", type=int, required=True)
    c.add_argument("--ring", type=int, required=True)
    c.add_argument("--osk", required=True, help="opener key file")
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_audit_open)
    c = asub.add_parser("judge", help="judge an audit claim")
    c.add_argument("--claim", required=True)
    c.set_defaults(func=cmd_audit_judge)

    p = sub.add_parser("harness", help="security game suites")
    hsub = p.add_subparsers(dest="subcommand", required=True)
    c = hsub.add_parser("run")
    c.add_argument("suite", choices=sorted(harness.SUITES))
    c.add_argument("--group", choices=["production", "toy"], default="toy")
    c.add_argument("--trials", type=int, default=None)
    c.set_defaults(func=cmd_harness_run)

    p = sub.add_parser("bench", help="timing benchmark")
    bsub = p.add_subparsers(dest="subcommand", required=True)
    c = bsub.add_parser("run")
    c.add_argument("--group", choices=["production", "toy"],
                   default="production")
    c.add_argument("--runs", type=int, default=100)
    c.set_defaults(func=cmd_bench_run)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ArsWalletError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return exit_code_for(exc)


if __name__ == "__main__":
    sys.exit(main())
