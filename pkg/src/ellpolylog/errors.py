"""Exception types shared across modules."""


class EllPolylogError(Exception):
    pass


class DomainError(EllPolylogError, ValueError):
    """An input violates a documented precondition."""


class PoleError(EllPolylogError, ValueError):
    """Evaluation requested too close to a pole divisor."""


class EvaluationError(EllPolylogError, ArithmeticError):
    """A numerical evaluation produced non-finite values or failed to converge."""


class ContractError(EllPolylogError, ValueError):
    """A structural contract (vector length, weight check) was violated."""
