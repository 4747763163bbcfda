"""Exception hierarchy.

Validation failures derive from :class:`TlgError`; internal consistency
failures (things the theory says cannot happen) derive from
:class:`InvariantViolation`. The CLI maps the first to exit code 1 and the
second to exit code 2.
"""


class TlgError(ValueError):
    """Invalid input: malformed graph, program, weights, walk, or target."""


class InvariantViolation(RuntimeError):
    """A property guaranteed by the theory failed; indicates a bug."""


class InvalidGraph(TlgError):
    pass


class InvalidStep(TlgError):
    def __init__(self, index, reason=""):
        self.index = index
        self.reason = reason
        msg = f"invalid step {index}"
        super().__init__(f"{msg}: {reason}" if reason else msg)


class NotTlg(TlgError):
    def __init__(self, reason):
        self.reason = reason
        super().__init__(f"not a triangulated Laman graph: {reason}")


class NotAdjacent(TlgError):
    pass


class NotAWalk(TlgError):
    pass


class NonAdjacentStep(NotAWalk):
    def __init__(self, index, pair=None):
        self.index = index
        super().__init__(f"walk step {index} joins non-adjacent triangles {pair}")


class AssumptionViolated(TlgError):
    def __init__(self, violations):
        self.violations = list(violations)
        shown = ", ".join(f"triangle {t} edge {e}" for t, e in self.violations[:5])
        super().__init__(f"zero weight sum on non-simple edge(s): {shown}")


class InvalidTarget(TlgError):
    pass


class IdentityViolation(InvariantViolation):
    def __init__(self, i, j=None, detail=""):
        self.i, self.j = i, j
        where = f"({i}, {j})" if j is not None else f"({i})"
        super().__init__(f"eigen-identity failed at {where} {detail}".rstrip())


class MonotonicityViolation(InvariantViolation):
    def __init__(self, step, previous, current):
        self.step = step
        super().__init__(
            f"seminorm increased at step {step}: {previous!r} -> {current!r}"
        )


class NoCommonEdge(InvariantViolation):
    pass
