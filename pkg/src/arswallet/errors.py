"""Error hierarchy shared by every layer.

Each error carries a stable machine-readable ``code`` so the CLI can map
failures to distinct exit codes and one-line messages.
"""


class ArsWalletError(Exception):
    """Base class; ``code`` is a stable kebab-case identifier."""

    code = "error"

    def __init__(self, message=None):
        super().__init__(message or self.code)


class UnknownGroupError(ArsWalletError):
    code = "unknown-identifier"


class MalformedEncodingError(ArsWalletError):
    code = "malformed-encoding"


class NotInSubgroupError(ArsWalletError):
    code = "not-in-subgroup"


class SignerNotInRingError(ArsWalletError):
    code = "signer-not-in-ring"


class DuplicateRingMembersError(ArsWalletError):
    code = "duplicate-ring-members"


class PolicyError(ArsWalletError):
    code = "invalid-policy"


class OverlappingRingsError(PolicyError):
    code = "overlapping-rings"


class DuplicateIndividualsError(PolicyError):
    code = "duplicate-individuals"


class EmptyPolicyError(PolicyError):
    code = "empty-policy"


class AddressCollisionError(ArsWalletError):
    code = "address-collision"


class UnknownWalletError(ArsWalletError):
    code = "unknown-wallet"


class BadNonceError(ArsWalletError):
    code = "bad-nonce"


class MissingSignatureError(ArsWalletError):
    code = "missing-signature"


class ExtraSignatureError(ArsWalletError):
    code = "extra-signature"


class InvalidRingSignatureError(ArsWalletError):
    code = "invalid-ring-signature"

    def __init__(self, ring_index, message=None):
        self.ring_index = ring_index
        super().__init__(message or f"{self.code}({ring_index})")


class InvalidIndividualSignatureError(ArsWalletError):
    code = "invalid-individual-signature"

    def __init__(self, vk_index, message=None):
        self.vk_index = vk_index
        super().__init__(message or f"{self.code}({vk_index})")


class InsufficientBalanceError(ArsWalletError):
    code = "insufficient-balance"


class OutOfRangeError(ArsWalletError):
    code = "out-of-range"


class UntraceableError(ArsWalletError):
    """CLI-level wrapper for the open algorithm's bottom output."""

    code = "untraceable"


# CLI exit codes.  0 is success; 1 is reserved for judge-reject.
EXIT_CODES = {
    "judge-reject": 1,
    "unknown-identifier": 2,
    "invalid-policy": 3,
    "overlapping-rings": 3,
    "duplicate-individuals": 3,
    "empty-policy": 3,
    "address-collision": 4,
    "unknown-wallet": 5,
    "bad-nonce": 6,
    "missing-signature": 7,
    "extra-signature": 8,
    "invalid-ring-signature": 9,
    "invalid-individual-signature": 10,
    "insufficient-balance": 11,
    "out-of-range": 12,
    "malformed-encoding": 13,
    "not-in-subgroup": 13,
    "signer-not-in-ring": 14,
    "duplicate-ring-members": 14,
    "untraceable": 15,
    "usage": 64,
    "error": 70,
}


def exit_code_for(err: ArsWalletError) -> int:
    return EXIT_CODES.get(err.code, EXIT_CODES["error"])
