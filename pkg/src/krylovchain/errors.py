"""Exception types shared across the package."""


class KrylovChainError(Exception):
    """Base class for all package errors."""


class SupportExceededError(KrylovChainError):
    """Coefficient requested beyond the finite support of a sequence."""

    def __init__(self, n, support):
        self.n = n
        self.support = support
        super().__init__(f"b_{n} requested but the sequence ends at n = {support}")


class InvalidMomentSequenceError(KrylovChainError):
    """Moment sequence fails Hankel positivity; `order` names the moment mu_{2*order}."""

    def __init__(self, order, detail=""):
        self.order = order
        msg = f"not a valid moment sequence: positivity fails at order {order}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class PrecisionExhaustedError(KrylovChainError):
    """Floating-point arithmetic ran out of precision during a conversion."""

    def __init__(self, order, detail=""):
        self.order = order
        msg = f"precision exhausted at order {order}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class InsufficientDataError(KrylovChainError):
    """Not enough coefficients or moments for the requested count."""


class ConvergenceError(KrylovChainError):
    """Continued fraction failed to converge; carries both trial values."""

    def __init__(self, value_a, value_b, detail=""):
        self.value_a = value_a
        self.value_b = value_b
        msg = f"no convergence: {value_a} vs {value_b}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class ResourceLimitError(KrylovChainError):
    """Active window hit max_active_size; reports the time reached."""

    def __init__(self, t_reached, max_active_size):
        self.t_reached = t_reached
        self.max_active_size = max_active_size
        super().__init__(
            f"active window exceeded max_active_size={max_active_size} at t={t_reached:.6g}"
        )


class StiffnessError(KrylovChainError):
    """Step size underflowed during adaptive integration."""

    def __init__(self, t, dt, detail=""):
        self.t = t
        self.dt = dt
        msg = f"step size underflow at t={t:.6g} (dt={dt:.3g})"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class WindowError(KrylovChainError):
    """Fit window selects too few samples or none at all."""


class OrderingError(KrylovChainError):
    """Trajectory samples are not time ordered."""


class SchemaError(KrylovChainError):
    """Run configuration fails validation; `pointer` is a JSON pointer path."""

    def __init__(self, pointer, detail):
        self.pointer = pointer
        super().__init__(f"config error at {pointer}: {detail}")


class UnsupportedFamilyError(KrylovChainError):
    """Reference asymptotics requested for an unknown family."""
