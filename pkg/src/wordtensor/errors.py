"""Shared exception types."""
from __future__ import annotations


class CarrierTooLarge(Exception):
    """Exhaustive enumeration requested on a carrier beyond the hard cap."""

    def __init__(self, size: int, limit: int):
        self.size = size
        self.limit = limit
        super().__init__(f"carrier size {size} exceeds enumeration limit {limit}")


class BudgetExceeded(Exception):
    """A universe or search would exceed its configured budget."""

    def __init__(self, needed: int, budget: int, what: str = "universe"):
        self.needed = needed
        self.budget = budget
        self.what = what
        super().__init__(f"{what} needs {needed} items, budget is {budget}")


class RuleSetNotNested(Exception):
    """Refinement requested between spaces whose rule sets are not nested."""


class CongruenceViolation(Exception):
    """Cross-member sampling of the induced operation found a class mismatch.

    Structurally impossible for saturated partitions; raised so a bug here
    can never masquerade as a mathematical result.
    """


class WellDefinednessViolation(Exception):
    """The fold defining a factorization map differs between members of one class.

    offending is (class representative, member, member, value, value) when a
    concrete clash was located; assoc_witness is an image triple on which the
    target operation fails to associate, when that is the root cause.
    """

    def __init__(self, message: str, offending=None, assoc_witness=None):
        self.offending = offending
        self.assoc_witness = assoc_witness
        super().__init__(message)


class NotAHomomorphism(Exception):
    """A map required to be a homomorphism is not; carries a witness pair."""

    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"not a homomorphism, witness {witness!r}")


class NotAssociative(Exception):
    """An operation required to be associative is not; carries a witness triple."""

    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"operation not associative, witness {witness!r}")


class ConfigError(Exception):
    """Configuration failed validation; collects every issue found, not just the first."""

    def __init__(self, issues):
        self.issues = tuple(issues)
        lines = "; ".join(str(i) for i in self.issues)
        super().__init__(f"{len(self.issues)} config issue(s): {lines}")


class ParseError(Exception):
    """Configuration file is not syntactically valid."""


class UnresolvedReference(Exception):
    """A config section refers to a name that was never declared."""

    def __init__(self, where: str, name: str):
        self.where = where
        self.name = name
        super().__init__(f"{where} references undeclared name {name!r}")


class InvalidCap(Exception):
    """A cap, budget or builtin-operation parameter is out of its legal range."""
