"""Exception hierarchy. Each class carries the CLI exit status it maps to."""

from __future__ import annotations


class LelekfanError(Exception):
    exit_code = 1


class InvalidInput(LelekfanError, ValueError):
    """Malformed or out-of-domain input (bad rational, violated precondition)."""

    exit_code = 2


class PrimeBoundExceeded(InvalidInput):
    """A slope has a prime factor above the configured trial-division bound."""


class BudgetExceeded(LelekfanError):
    """A bounded search or a size cap ran out before finding an answer."""

    exit_code = 3


class InvariantFailure(LelekfanError):
    exit_code = 1
