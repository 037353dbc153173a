"""Exception types shared across the package."""


class InvariantViolation(RuntimeError):
    """A structural claim the library relies on was falsified at runtime.

    This is never raised for bad user input.  It fires when a computation
    contradicts one of the theorems the algorithms are built on (for example
    a descent step that fails to shrink, or an SNR ranking that disagrees
    with the minimum ranking).  The CLI maps it to exit code 2 so that such
    findings are impossible to miss.
    """


class NotRepresentableError(ValueError):
    """The requested scale factor admits no solutions.

    Raised when a conic family ``p^2 + 3 r^2 = d q^2`` is requested for a
    ``d`` that is not a squarefree product of primes congruent to 1 mod 3:
    the solution set is empty, which is a different condition from a
    malformed argument.
    """
