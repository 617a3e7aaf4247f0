class InputError(ValueError):
    """Invalid user-supplied data (bad file, bad map, violated precondition)."""


class ContractViolation(RuntimeError):
    """An internal invariant that is supposed to be unbreakable was broken."""
