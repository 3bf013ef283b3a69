"""Exception types shared across the package."""


class TreeError(ValueError):
    """Malformed tree input: parse failure, bad labels, cycle, or disconnection."""


class FamilyError(ValueError):
    """Invalid subtree family: empty, overlapping, or disconnected parts."""


class DomainError(ValueError):
    """Arguments outside a formula's stated domain (e.g. m < 2 or n < m)."""


class ResourceCapError(RuntimeError):
    """A configured size cap (total cells, SNF columns) would be exceeded."""


class InternalCheckError(RuntimeError):
    """An internal cross-check failed; indicates a bug, not bad input."""
