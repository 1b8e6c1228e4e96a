"""Desk-scale security game suites and the benchmark.

The four games (full unforgeability, anonymity, traceability, tracing
soundness) quantify over all adversaries, which no test can do; each
suite instead runs a concrete list of adversary strategies and reports
how often one wins.  Shipped suites must report zero wins (anonymity:
no distinguisher outside the 3-sigma band).  The suites are regression
oracles; the reduction arguments live in the README.

Trials are independent; reports merge associatively.
"""

import hashlib
import math
import random
import time
from dataclasses import dataclass, field

from . import ars
from .group import CostMeter, TOY


@dataclass
class GameReport:
    game: str
    trials: int
    adversary_wins: int
    details: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"game": self.game, "trials": self.trials,
                "adversary_wins": self.adversary_wins,
                "details": self.details}


@dataclass
class BenchReport:
    ring_sizes: tuple
    mean_ms: dict          # {algorithm: {ring size: mean wall ms}}
    exponentiations: dict  # {ring size: metered rverify exp count}
    runs: int = 100

    def to_json(self) -> dict:
        return {"ring_sizes": list(self.ring_sizes), "runs": self.runs,
                "mean_ms": {alg: {str(n): ms for n, ms in by_n.items()}
                            for alg, by_n in self.mean_ms.items()},
                "exponentiations": {str(n): c
                                    for n, c in self.exponentiations.items()}}

    def to_table(self) -> str:
        header = "Algorithm | " + " | ".join(f"|R|={n}" for n in self.ring_sizes)
        lines = [header, "-" * len(header)]
        for alg, by_n in self.mean_ms.items():
            cells = " | ".join(f"{by_n[n]:8.2f} ms" for n in self.ring_sizes)
            lines.append(f"{alg:<9} | {cells}")
        return "\n".join(lines)


def _fresh_instance(pp, ring_size, rng=None):
    opener = ars.okgen(pp, rng)
    users = []
    seen = set()
    while len(users) < ring_size:
        # resample collisions: at toy scale duplicate keys are likely
        kp = ars.ukgen(pp, rng)
        if kp.pk not in seen:
            seen.add(kp.pk)
            users.append(kp)
    ring = ars.Ring(u.pk for u in users)
    return opener, users, ring


def brute_force_decrypt(group, opk, u, v):
    """ElGamal decryption via exhaustive discrete log of u; oracle only.

    Independent of the osk-based decryption path: recovers the
    encryption randomness r with a brute-force search and strips opk^r.
    """
    r = group.dlog(u)
    return group.div(v, group.exp(opk, r))


# -- full unforgeability ----------------------------------------------


def run_full_unforgeability_suite(pp, trials=100, ring_size=4,
                                  rng=None) -> GameReport:
    """Concrete forgery strategies; every acceptance is an adversary win."""
    rng = rng or random.Random(0xF04)
    g = pp.group
    report = GameReport("full-unforgeability", 0, 0)

    def attempt(name, accepted):
        report.trials += 1
        if accepted:
            report.adversary_wins += 1
            report.details.append(f"WIN: {name}")

    for _ in range(trials):
        opener, users, ring = _fresh_instance(pp, ring_size, rng)
        message = rng.randbytes(16)
        signer = rng.randrange(ring_size)
        sig = ars.rsign(pp, opener.opk, message, ring, users[signer].sk, rng)

        # random signature: every component drawn fresh
        rand_sig = ars.RingSignature(
            u=g.exp(g.generator, g.random_scalar(rng)),
            v=g.exp(g.generator, g.random_scalar(rng)),
            branches=tuple(ars.Branch(
                a=g.exp(g.generator, g.random_scalar(rng)),
                b=g.exp(g.generator, g.random_scalar(rng)),
                d=g.exp(g.generator, g.random_scalar(rng)),
                c=g.random_scalar(rng), z_r=g.random_scalar(rng),
                z_s=g.random_scalar(rng)) for _ in range(ring_size)))
        attempt("random signature",
                ars.rverify(pp, opener.opk, message, ring, rand_sig))

        # single-field tamper of the honest signature
        attempt("tampered honest signature",
                ars.rverify(pp, opener.opk, message, ring,
                            _random_mutation(g, sig, rng)))

        # splice branches of two honest signatures
        sig2 = ars.rsign(pp, opener.opk, message, ring, users[signer].sk, rng)
        cut = ring_size // 2 or 1
        splice = ars.RingSignature(u=sig.u, v=sig.v,
                                   branches=sig.branches[:cut]
                                   + sig2.branches[cut:])
        attempt("branch splice",
                ars.rverify(pp, opener.opk, message, ring, splice))

        # transplants: same signature under different M, R, opk
        attempt("transplant to M'",
                ars.rverify(pp, opener.opk, message + b"x", ring, sig))
        if ring_size > 1:
            other_ring = ars.Ring([users[-1].pk] + [u.pk for u in users[:-1]])
            attempt("transplant to reordered R",
                    ars.rverify(pp, opener.opk, message, other_ring, sig))
        opk2 = ars.okgen(pp, rng).opk
        attempt("transplant to opk'",
                ars.rverify(pp, opk2, message, ring, sig))

        # false accusation: honest proof presented against another member
        proof = ars.open_signature(pp, message, ring, sig, opener.osk, rng)
        wrong = users[(signer + 1) % ring_size].pk
        attempt("honest proof against wrong pk",
                ars.judge(pp, opener.opk, message, ring, sig, wrong, proof))
    return report


def _random_mutation(g, sig, rng):
    """Perturb one uniformly chosen field of one branch, or u or v."""
    tweak = g.exp(g.generator, 1)
    choice = rng.randrange(8)
    if choice == 0:
        return ars.RingSignature(u=g.mul(sig.u, tweak), v=sig.v,
                                 branches=sig.branches)
    if choice == 1:
        return ars.RingSignature(u=sig.u, v=g.mul(sig.v, tweak),
                                 branches=sig.branches)
    i = rng.randrange(len(sig.branches))
    br = sig.branches[i]
    fields = {"a": br.a, "b": br.b, "d": br.d, "c": br.c, "z_r": br.z_r,
              "z_s": br.z_s}
    name = ("a", "b", "d", "c", "z_r", "z_s")[choice - 2]
    if name in ("a", "b", "d"):
        fields[name] = g.mul(fields[name], tweak)
    else:
        fields[name] = (fields[name] + 1) % g.order
    branches = list(sig.branches)
    branches[i] = ars.Branch(**fields)
    return ars.RingSignature(u=sig.u, v=sig.v, branches=tuple(branches))


def enumerate_tamper_mutations(pp, sig):
    """Deterministic named mutations of a signature; all must fail rverify.

    Covers: replaced u and v, each field of every branch perturbed,
    two branches permuted, one branch dropped.  Message/ring-order
    transplants are the caller's to add (they mutate the context, not
    the signature).
    """
    g = pp.group
    tweak = g.exp(g.generator, 1)
    out = [("replace u", ars.RingSignature(u=g.mul(sig.u, tweak), v=sig.v,
                                           branches=sig.branches)),
           ("replace v", ars.RingSignature(u=sig.u, v=g.mul(sig.v, tweak),
                                           branches=sig.branches))]
    for i, br in enumerate(sig.branches):
        for name in ("a", "b", "d", "c", "z_r", "z_s"):
            fields = {"a": br.a, "b": br.b, "d": br.d, "c": br.c,
                      "z_r": br.z_r, "z_s": br.z_s}
            if name in ("a", "b", "d"):
                fields[name] = g.mul(fields[name], tweak)
            else:
                fields[name] = (fields[name] + 1) % g.order
            branches = list(sig.branches)
            branches[i] = ars.Branch(**fields)
            out.append((f"perturb {name} of branch {i}",
                        ars.RingSignature(u=sig.u, v=sig.v,
                                          branches=tuple(branches))))
    if len(sig.branches) > 1:
        branches = list(sig.branches)
        branches[0], branches[1] = branches[1], branches[0]
        out.append(("permute branches 0 and 1",
                    ars.RingSignature(u=sig.u, v=sig.v,
                                      branches=tuple(branches))))
        out.append(("drop last branch",
                    ars.RingSignature(u=sig.u, v=sig.v,
                                      branches=sig.branches[:-1])))
    out.append(("swap u and v",
                ars.RingSignature(u=sig.v, v=sig.u, branches=sig.branches)))
    out.append(("duplicate last branch",
                ars.RingSignature(u=sig.u, v=sig.v,
                                  branches=sig.branches + sig.branches[-1:])))
    br0 = sig.branches[0]
    zeroed = 0 if (br0.z_r, br0.z_s) != (0, 0) else 1
    out.append(("zero responses of branch 0",
                ars.RingSignature(u=sig.u, v=sig.v,
                                  branches=(ars.Branch(a=br0.a, b=br0.b,
                                                       d=br0.d, c=br0.c,
                                                       z_r=zeroed,
                                                       z_s=zeroed),)
                                  + sig.branches[1:])))
    return out


# -- anonymity --------------------------------------------------------


def run_anonymity_suite(pp, trials=1000, ring_size=4, rng=None) -> GameReport:
    """Hidden-bit game against every implemented non-osk distinguisher.

    A distinguisher loses the suite if its empirical advantage leaves
    the 3-sigma band around zero.  The osk-holding "distinguisher" is a
    sanity inversion and must sit near advantage 1 instead.
    """
    rng = rng or random.Random(0xA11)
    g = pp.group
    report = GameReport("anonymity", trials, 0)

    byte_wins = stat_wins = osk_wins = 0
    meter_traces_identical = True
    for _ in range(trials):
        opener, users, ring = _fresh_instance(pp, ring_size, rng)
        i0, i1 = rng.sample(range(ring_size), 2)
        message = rng.randbytes(16)
        b = rng.randrange(2)
        signer = (i0, i1)[b]
        sig = ars.rsign(pp, opener.opk, message, ring, users[signer].sk, rng)
        blob = ars.serialize_signature(pp, sig)

        # byte-pattern inspection: any fixed function of the public bytes
        if (hashlib.sha256(blob).digest()[0] & 1) == b:
            byte_wins += 1
        # branch-statistics: compare the two candidate branches' challenges
        if (0 if sig.branches[i0].c > sig.branches[i1].c else 1) == b:
            stat_wins += 1
        # meter-trace: verification cost must not depend on the signer
        m0, m1 = CostMeter(), CostMeter()
        ars.rverify(pp, opener.opk, message, ring, sig, m0)
        other = ars.rsign(pp, opener.opk, message, ring,
                          users[(i0, i1)[1 - b]].sk, rng)
        ars.rverify(pp, opener.opk, message, ring, other, m1)
        if m0.snapshot() != m1.snapshot():
            meter_traces_identical = False
        # osk holder: opening must identify the signer (sanity inversion)
        proof = ars.open_signature(pp, message, ring, sig, opener.osk, rng)
        if proof is not None and proof.pk_identified == users[signer].pk:
            osk_wins += 1

    sigma3 = 3 * math.sqrt(0.25 / trials)
    for name, wins in (("byte-inspection", byte_wins),
                       ("branch-statistics", stat_wins)):
        adv = wins / trials - 0.5
        report.details.append(f"{name}: advantage {adv:+.4f} (3-sigma {sigma3:.4f})")
        if abs(adv) > sigma3:
            report.adversary_wins += 1
            report.details.append(f"WIN: {name} outside 3-sigma")
    # the meter-trace distinguisher's guess is independent of b: advantage 0
    report.details.append(
        f"meter-trace: identical traces = {meter_traces_identical}, advantage +0.0000")
    if not meter_traces_identical:
        report.adversary_wins += 1
    report.details.append(f"osk-holder sanity: win rate {osk_wins / trials:.3f}")
    if osk_wins / trials < 0.99:
        report.adversary_wins += 1
        report.details.append("WIN: osk holder failed to open")

    # simulator property: simulated transcripts satisfy all branch equations
    sim_fail = 0
    for _ in range(100):
        opener, users, ring = _fresh_instance(pp, ring_size, rng)
        u = g.exp(g.generator, g.random_scalar(rng))
        v = g.exp(g.generator, g.random_scalar(rng))
        branches = ars.simulate_branches(pp, opener.opk, u, v, ring, rng)
        if not ars.branch_equations_hold(pp, opener.opk, u, v, ring, branches):
            sim_fail += 1
    report.details.append(f"simulator property: {100 - sim_fail}/100 pass")
    if sim_fail:
        report.adversary_wins += 1
    return report


# -- traceability -----------------------------------------------------


def run_traceability_suite(pp, trials=100, ring_sizes=(2, 4, 10),
                           rng=None) -> GameReport:
    """Every accepted signature must open to a ring member with a valid proof."""
    rng = rng or random.Random(0x7AC3)
    g = pp.group
    report = GameReport("traceability", 0, 0)
    per_size = max(1, -(-trials // len(ring_sizes)))
    for n in ring_sizes:
        for t in range(per_size):
            # adversarially chosen opener key: forced small osk values too
            osk = (t % g.order) or 1 if t % 2 else g.random_scalar(rng)
            opener = ars.OpenerKeyPair(opk=g.exp(g.generator, osk), osk=osk)
            _, users, ring = _fresh_instance(pp, n, rng)
            message = rng.randbytes(16)
            signer = t % n
            # alternate honest and fixed-randomness construction paths
            sig_rng = rng if t % 2 else random.Random(t)
            sig = ars.rsign(pp, opener.opk, message, ring, users[signer].sk,
                            sig_rng)
            report.trials += 1
            if not ars.rverify(pp, opener.opk, message, ring, sig):
                report.adversary_wins += 1
                report.details.append(f"WIN: honest signature rejected (n={n})")
                continue
            proof = ars.open_signature(pp, message, ring, sig, opener.osk, rng)
            if proof is None or not ars.judge(pp, opener.opk, message, ring,
                                              sig, proof.pk_identified, proof):
                report.adversary_wins += 1
                report.details.append(f"WIN: valid but untraceable (n={n})")
                continue
            if g.group_id == TOY:
                expect = brute_force_decrypt(g, opener.opk, sig.u, sig.v)
                if proof.pk_identified != expect:
                    report.adversary_wins += 1
                    report.details.append("WIN: open disagrees with dlog oracle")
    return report


# -- tracing soundness ------------------------------------------------


def run_tracing_soundness_suite(pp, trials=100, ring_size=4,
                                rng=None) -> GameReport:
    """Exhaustive wrong-key proof attempts; all must be rejected."""
    rng = rng or random.Random(0x50D)
    g = pp.group
    report = GameReport("tracing-soundness", 0, 0)

    def attempt(name, accepted):
        report.trials += 1
        if accepted:
            report.adversary_wins += 1
            report.details.append(f"WIN: {name}")

    for _ in range(trials):
        opener, users, ring = _fresh_instance(pp, ring_size, rng)
        message = rng.randbytes(16)
        signer = rng.randrange(ring_size)
        sig = ars.rsign(pp, opener.opk, message, ring, users[signer].sk, rng)
        proof = ars.open_signature(pp, message, ring, sig, opener.osk, rng)

        # two honest opens must agree
        proof2 = ars.open_signature(pp, message, ring, sig, opener.osk, rng)
        attempt("honest opens disagree",
                proof.pk_identified != proof2.pk_identified)

        for pk_wrong in ring:
            if pk_wrong == users[signer].pk:
                continue
            # replay the honest proof under the wrong key
            forged = ars.OpeningProof(pk_identified=pk_wrong, a1=proof.a1,
                                      a2=proof.a2, c=proof.c, z=proof.z)
            attempt("replayed proof, wrong pk",
                    ars.judge(pp, opener.opk, message, ring, sig, pk_wrong,
                              forged))
            # honest prover with the wrong witness claim
            alpha = g.random_scalar(rng)
            a1 = g.exp(g.generator, alpha)
            a2 = g.exp(sig.u, alpha)
            c = ars._open_challenge(pp, opener.opk, message, ring, sig,
                                    pk_wrong, a1, a2)
            z = (alpha + c * opener.osk) % g.order
            attempt("wrong-witness prover",
                    ars.judge(pp, opener.opk, message, ring, sig, pk_wrong,
                              ars.OpeningProof(pk_wrong, a1, a2, c, z)))
            # random transcript forgery
            attempt("random transcript",
                    ars.judge(pp, opener.opk, message, ring, sig, pk_wrong,
                              ars.OpeningProof(
                                  pk_wrong,
                                  g.exp(g.generator, g.random_scalar(rng)),
                                  g.exp(g.generator, g.random_scalar(rng)),
                                  g.random_scalar(rng),
                                  g.random_scalar(rng))))
        # correct key but proof replayed for a different message
        attempt("proof replayed under M'",
                ars.judge(pp, opener.opk, message + b"x", ring, sig,
                          users[signer].pk, proof))
    return report


SUITES = {
    "full-unforgeability": run_full_unforgeability_suite,
    "anonymity": run_anonymity_suite,
    "traceability": run_traceability_suite,
    "tracing-soundness": run_tracing_soundness_suite,
}


def run_suite(pp, name: str, **kwargs) -> GameReport:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](pp, **kwargs)


# -- benchmark --------------------------------------------------------


def run_bench(pp, ring_sizes=(4, 10), runs=100, rng=None) -> BenchReport:
    """Mean wall time of the four algorithms over ``runs`` executions each."""
    rng = rng or random.Random(0xBE)
    mean_ms = {alg: {} for alg in ("rsign", "rverify", "open", "judge")}
    exp_counts = {}
    for n in ring_sizes:
        opener, users, ring = _fresh_instance(pp, n, rng)
        message = b"bench"
        totals = dict.fromkeys(mean_ms, 0.0)
        for i in range(runs):
            sk = users[i % n].sk
            t0 = time.perf_counter()
            sig = ars.rsign(pp, opener.opk, message, ring, sk, rng)
            t1 = time.perf_counter()
            meter = CostMeter()
            assert ars.rverify(pp, opener.opk, message, ring, sig, meter)
            t2 = time.perf_counter()
            proof = ars.open_signature(pp, message, ring, sig, opener.osk, rng)
            t3 = time.perf_counter()
            assert ars.judge(pp, opener.opk, message, ring, sig,
                             proof.pk_identified, proof)
            t4 = time.perf_counter()
            totals["rsign"] += t1 - t0
            totals["rverify"] += t2 - t1
            totals["open"] += t3 - t2
            totals["judge"] += t4 - t3
            exp_counts[n] = meter.exponentiations
        for alg in totals:
            mean_ms[alg][n] = totals[alg] / runs * 1000
    return BenchReport(ring_sizes=tuple(ring_sizes), mean_ms=mean_ms,
                       exponentiations=exp_counts, runs=runs)
