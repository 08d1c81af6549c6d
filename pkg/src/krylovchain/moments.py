"""Transformations between moments and Lanczos coefficients.

The even moments mu_0, mu_2, ... and the coefficients b_1, b_2, ... carry
the same information, but the map between them is nonlinear and
notoriously ill conditioned in floating point: roughly one decimal digit
is lost per coefficient.  Two arithmetic paths are provided:

* exact rationals (fractions.Fraction) whenever the inputs are rational;
  this path is authoritative and loses nothing;
* an mpmath path whose working precision scales with the requested count
  (the default), or plain float64 on request, which raises
  PrecisionExhaustedError when cancellation destroys positivity.

The production conversion runs a quotient-difference style recurrence in
O(K^2) operations; the Hankel-determinant formula

    b_n^2 = D_{n-2} D_n / D_{n-1}^2,   D_{-1} = 1,

over the zero-interleaved moment sequence is kept alongside as the
independent oracle, and the two are required to agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence, Tuple, Union

import mpmath as mp

from .errors import (
    InsufficientDataError,
    InvalidMomentSequenceError,
    PrecisionExhaustedError,
)

__all__ = [
    "MomentSequence",
    "LanczosConversion",
    "moments_to_lanczos",
    "lanczos_to_moments",
    "hankel_determinants",
    "lanczos_from_hankel",
]

Number = Union[Fraction, float]


def _is_exact(value) -> bool:
    return isinstance(value, Rational)


@dataclass(frozen=True)
class MomentSequence:
    """Even moments mu_0, mu_2, ..., mu_{2K}; entries[k] is mu_{2k}.

    precision is "exact" when every entry is rational, otherwise "float".
    mu_0 must equal 1 (normalized initial operator).
    """

    entries: Tuple[Number, ...]
    precision: str = "exact"

    def __post_init__(self):
        entries = tuple(self.entries)
        if len(entries) == 0:
            raise ValueError("a moment sequence needs at least mu_0")
        exact = all(_is_exact(v) for v in entries)
        entries = tuple(Fraction(v) if exact else float(v) for v in entries)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "precision", "exact" if exact else "float")
        if entries[0] != 1:
            raise ValueError(f"mu_0 must be 1, got {entries[0]}")

    @classmethod
    def from_values(cls, values: Sequence) -> "MomentSequence":
        return cls(entries=tuple(values))

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def exact(self) -> bool:
        return self.precision == "exact"

    def as_floats(self) -> Tuple[float, ...]:
        return tuple(float(v) for v in self.entries)


@dataclass(frozen=True)
class LanczosConversion:
    """Result of a moments -> coefficients conversion.

    b_squared holds b_n^2 (exact rationals in exact mode; square roots are
    only taken when reading `coefficients`).
    """

    b_squared: Tuple[Number, ...]
    mode: str  # "exact", "mp<digits>", or "double"

    @property
    def exact(self) -> bool:
        return self.mode == "exact"

    @property
    def coefficients(self) -> Tuple[float, ...]:
        return tuple(math.sqrt(float(v)) for v in self.b_squared)

    def __len__(self) -> int:
        return len(self.b_squared)


def _aerated(entries: Sequence[Number]) -> list:
    """Interleave zeros for the odd moments: (mu_0, 0, mu_2, 0, ...)."""
    m = [entries[0] * 0] * (2 * len(entries) - 1)
    for j, v in enumerate(entries):
        m[2 * j] = v
    return m


def _qd_recurrence(m, count, zero, is_bad):
    """Quotient-difference / Chebyshev-style recurrence over aerated moments.

    m has length >= 2*count; returns [b_1^2 .. b_count^2].  `is_bad(x)`
    flags a non-positive pivot (invalid sequence or precision loss).
    """
    prev = None
    cur = list(m)
    b2 = []
    for n in range(1, count + 1):
        hi = len(m) - 1 - n
        row = [zero] * (hi + 1)
        for k in range(n, hi + 1):
            v = cur[k + 1]
            if n >= 2:
                v = v - b2[-1] * prev[k]
            row[k] = v
        den = cur[n - 1]
        num = row[n]
        if is_bad(num) or is_bad(den):
            return b2, n
        b2.append(num / den)
        prev, cur = cur, row
    return b2, None


def moments_to_lanczos(
    moments: MomentSequence,
    count: int,
    precision: Union[str, int] = "auto",
) -> LanczosConversion:
    """First `count` coefficients b_1..b_count from mu_0..mu_{2*count}.

    Needs count+1 moment entries.  precision: "auto" picks exact
    arithmetic for rational input and a count-scaled mpmath precision
    otherwise; an integer forces that many decimal digits; "double"
    forces float64 (which raises PrecisionExhaustedError once
    cancellation wins).
    """
    if count < 0:
        raise ValueError("count must be >= 0")
    if len(moments) < count + 1:
        raise InsufficientDataError(
            f"{count} coefficients need {count + 1} moment entries, got {len(moments)}"
        )
    if count == 0:
        return LanczosConversion(b_squared=(), mode="exact" if moments.exact else "double")

    use_exact = moments.exact and precision == "auto"
    if use_exact:
        m = _aerated([Fraction(v) for v in moments.entries])
        b2, fail = _qd_recurrence(m, count, Fraction(0), lambda x: x <= 0)
        if fail is not None:
            raise InvalidMomentSequenceError(fail)
        return LanczosConversion(b_squared=tuple(b2), mode="exact")

    if precision == "double":
        m = _aerated([float(v) for v in moments.entries])
        b2, fail = _qd_recurrence(
            m, count, 0.0, lambda x: not (x > 0.0 and math.isfinite(x))
        )
        if fail is not None:
            if moments.exact:
                # exact arithmetic can still decide validity
                try:
                    moments_to_lanczos(moments, count, precision="auto")
                except InvalidMomentSequenceError:
                    raise
                raise PrecisionExhaustedError(fail, "float64 cancellation")
            raise PrecisionExhaustedError(fail, "float64 cancellation")
        return LanczosConversion(b_squared=tuple(b2), mode="double")

    # mpmath path; one digit is lost per order, so scale the precision
    digits = precision if isinstance(precision, int) else max(30, 20 + 3 * count)
    with mp.workdps(digits):
        vals = [
            mp.mpf(v.numerator) / mp.mpf(v.denominator) if _is_exact(v) else mp.mpf(v)
            for v in moments.entries
        ]
        m = _aerated(vals)
        b2, fail = _qd_recurrence(
            m, count, mp.mpf(0), lambda x: not (x > 0 and mp.isfinite(x))
        )
        if fail is not None:
            raise InvalidMomentSequenceError(fail, f"at {digits} digits")
        b2f = tuple(float(v) for v in b2)
    if any(not (v > 0.0 and math.isfinite(v)) for v in b2f):
        raise PrecisionExhaustedError(count, f"{digits} digits insufficient")
    return LanczosConversion(b_squared=b2f, mode=f"mp{digits}")


def lanczos_to_moments(
    b: Sequence = None,
    count: int = None,
    *,
    b_squared: Sequence = None,
) -> MomentSequence:
    """Moments mu_0..mu_{2*count} of the tridiagonal operator built from b.

    Pass either coefficients `b` or their squares `b_squared`.  mu_{2n}
    is the (0,0) entry of the 2n-th operator power, evaluated on a
    (count+1)-site window, which is exact because a walk of length
    2*count never leaves it.  All inputs are transported exactly (binary
    floats are exact rationals), and the result is exact in b^2: this
    direction is benign, and keeping it lossless is what lets the
    ill-conditioned inverse direction round trip.
    """
    if (b is None) == (b_squared is None):
        raise ValueError("pass exactly one of b or b_squared")
    if count is None:
        raise ValueError("count is required")
    if count < 0:
        raise ValueError("count must be >= 0")
    if b_squared is not None:
        sq = [Fraction(v) for v in b_squared]
    else:
        sq = [Fraction(v) * Fraction(v) for v in b]
    if count > 0 and len(sq) == 0:
        raise InsufficientDataError("no coefficients supplied for count > 0")
    zero = Fraction(0)
    one = Fraction(1)

    # similarity-transformed operator: sub-diagonal 1, super-diagonal b^2,
    # so powers stay rational in b^2
    dim = count + 1
    sq = list(sq[: dim - 1]) + [zero] * max(0, dim - 1 - len(sq))
    v = [zero] * dim
    v[0] = one
    entries = [one]
    for p in range(1, 2 * count + 1):
        nxt = [zero] * dim
        for i in range(dim):
            acc = zero
            if i > 0:
                acc += v[i - 1]           # sub-diagonal entry 1
            if i < dim - 1:
                acc += sq[i] * v[i + 1]   # super-diagonal entry b_{i+1}^2
            nxt[i] = acc
        v = nxt
        if p % 2 == 0:
            entries.append(v[0])
    return MomentSequence(entries=tuple(entries))


def hankel_determinants(moments: MomentSequence, count: int) -> list:
    """Determinants D_0..D_count of the zero-interleaved Hankel matrices.

    D_n = det(m_{i+j})_{0<=i,j<=n} with m the aerated sequence
    (mu_0, 0, mu_2, 0, ...); exact for rational input via fraction-free
    Gaussian elimination.
    """
    if len(moments) < count + 1:
        raise InsufficientDataError(
            f"D_{count} needs mu_{2 * count}, got {len(moments)} entries"
        )
    exact = moments.exact
    m = _aerated(list(moments.entries))
    dets = []
    for n in range(count + 1):
        a = [[m[i + j] for j in range(n + 1)] for i in range(n + 1)]
        dets.append(_det(a, exact))
    return dets


def _det(a, exact):
    n = len(a)
    if exact:
        a = [[Fraction(v) for v in row] for row in a]
    else:
        a = [[float(v) for v in row] for row in a]
    det = Fraction(1) if exact else 1.0
    for col in range(n):
        piv = None
        for r in range(col, n):
            if a[r][col] != 0:
                piv = r
                break
        if piv is None:
            return det * 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] / inv
            if f == 0:
                continue
            for c in range(col, n):
                a[r][c] -= f * a[col][c]
    return det


def lanczos_from_hankel(moments: MomentSequence, count: int) -> list:
    """Oracle path: b_n^2 = D_{n-2} D_n / D_{n-1}^2 over aerated Hankels."""
    dets = hankel_determinants(moments, count)
    for order, d in enumerate(dets):
        if d <= 0:
            # aerated D_n closes with mu_{2n}; report that moment order
            raise InvalidMomentSequenceError(order, f"D_{order} = {d}")
    one = Fraction(1) if moments.exact else 1.0
    full = [one] + dets
    return [full[n - 1] * full[n + 1] / full[n] ** 2 for n in range(1, count + 1)]
