class DomainError(ValueError):
    """Invalid mathematical input (bad discriminant, composite prime, ...)."""


class ResourceLimitError(DomainError):
    """A configured search or memory bound would be exceeded."""
