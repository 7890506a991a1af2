"""Exception types raised across the package.

Everything derives from :class:`PicError` so callers (and the CLI) can
catch domain failures without masking genuine bugs.
"""

from __future__ import annotations


class PicError(Exception):
    """Base class for all domain errors."""


# --- instance construction and parsing ---


class InstanceSyntaxError(PicError):
    """Instance or code document is not well-formed JSON of the expected shape."""


class InstanceSemanticError(PicError):
    """Instance data parsed but violates a semantic constraint."""


class InvalidInstance(InstanceSemanticError):
    """Message count out of range or otherwise unusable."""


class DuplicateReceiver(InstanceSemanticError):
    """The same side-information set was listed twice."""


class FullSetListed(InstanceSemanticError):
    """The full message set [1:m] appeared as a receiver."""


class MessageIndexOutOfRange(InstanceSemanticError):
    """A message index fell outside 1..m."""


class InvalidPartition(PicError):
    """Partition parts overlap, miss messages, or are empty."""


class TOutOfRange(PicError):
    """Truncation level outside 0..L-1."""


class QNotProper(PicError):
    """Part-index set must be a proper subset of 1..L."""


class HtildeNotStrictSubset(PicError):
    """Replacement side-information set is not a strict subset of the
    absent set it replaces (or is itself part of the nested family)."""


# --- decoding chains ---


class PolicyViolation(PicError):
    """A skip policy returned a decision the current chain state forbids."""


class BudgetExceeded(PicError):
    """An exhaustive enumeration would exceed its evaluation budget."""

    def __init__(self, required: int, budget: int, what: str = "enumeration"):
        self.required = required
        self.budget = budget
        self.what = what
        super().__init__(
            f"{what} needs {required} evaluations, budget is {budget}"
        )


# --- structural analysis ---


class LOutOfRange(PicError):
    """Chain length outside 2..m-1."""


class ANotAbsent(PicError):
    """A member of the look-ahead family is not an absent receiver."""


class PreconditionViolated(PicError):
    """Look-ahead skip invoked on a family whose verdict is inapplicable."""


# --- code construction and verification ---


class DuplicateIndex(PicError):
    """A message index repeats in a cyclic ordering."""


class HNotAbsent(PicError):
    """The uncoded side-information set must be an absent receiver."""


class KInQ(PicError):
    """The extra uncoded part index must lie outside the replaced index set."""


class FieldSearchExhausted(PicError):
    """No prime field up to the cap produced a verifying code."""


class DimensionMismatch(PicError):
    """Code width does not match the instance message count."""


class NoSchemeForProvenance(PicError):
    """No construction is associated with the classification tag."""


# --- oracles and cross-checks ---


class SearchSpaceTooLarge(PicError):
    """Brute-force rate search refused: enumeration out of reach."""


class OracleBudgetExceeded(PicError):
    """Criticality probe could not afford its oracle calls."""


class TheoremViolation(PicError):
    """An invariant that should hold unconditionally failed.

    Raised by consistency checks; seeing this means a bug, never an
    unlucky input.
    """
