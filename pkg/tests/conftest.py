import random

import pytest

from arswallet import ars


@pytest.fixture(scope="session")
def toy_pp():
    return ars.setup("toy")


@pytest.fixture(scope="session")
def prod_pp():
    return ars.setup("production")


@pytest.fixture
def rng():
    return random.Random(20240817)


def distinct_users(pp, n, rng=None):
    """Keypairs with pairwise distinct pk; resamples toy-scale collisions."""
    users, seen = [], set()
    while len(users) < n:
        kp = ars.ukgen(pp, rng)
        if kp.pk not in seen:
            seen.add(kp.pk)
            users.append(kp)
    return users


def fresh_scenario(pp, n, rng=None):
    opener = ars.okgen(pp, rng)
    users = distinct_users(pp, n, rng)
    ring = ars.Ring(u.pk for u in users)
    return opener, users, ring


class WalletScenario:
    """A deployed {R, j} wallet on a fresh chain, ready to authorize."""

    def __init__(self, group_id="toy", ring_size=4, rule=None, rng=None,
                 salt=b"salt"):
        from arswallet import wallet as w

        self.chain = w.Chain(group_id)
        pp = self.chain.pp
        self.opener, self.users, self.ring = fresh_scenario(pp, ring_size, rng)
        self.individual = self.chain.individual.keygen(rng)
        self.policy = w.Policy(
            rings=(w.PolicyRing(ring=self.ring, opk=self.opener.opk),),
            individuals=(self.individual.vk,))
        self.address = w.deploy_contract_wallet(
            self.chain, self.policy, rule or w.RecordRule(), salt)

    def request(self, payload=b"\x01", nonce=None):
        from arswallet import wallet as w

        cw = self.chain.wallets[self.address]
        return w.TransactionRequest(
            chain_id=self.chain.chain_id, wallet=self.address,
            nonce=cw.nonce if nonce is None else nonce, payload=payload)

    def bundle(self, req, signer=0, rng=None):
        from arswallet import wallet as w

        message = w.canonical_message(req)
        sig = ars.rsign(self.chain.pp, self.opener.opk, message, self.ring,
                        self.users[signer].sk, rng)
        ind_sig = self.chain.individual.sign(self.individual.sigk, message)
        return w.AuthorizationBundle(ring_sigs=((0, sig),),
                                     ind_sigs=((0, ind_sig),))
