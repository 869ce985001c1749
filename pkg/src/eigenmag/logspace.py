"""Signed log-space arithmetic for products of many eigenvalue gaps.

A product of a few hundred gap factors routinely leaves the double range in
either direction.  ``SignedLogValue`` keeps the sign, the natural log of the
magnitude and an exact-zero flag, so only the final ratio is ever
exponentiated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable


@dataclass(frozen=True)
class SignedLogValue:
    """A real number stored as (sign, log|x|), with exact zero tracked separately.

    When ``is_zero`` is set the other two fields are meaningless and ignored.
    """

    log_magnitude: float
    sign: int
    is_zero: bool = False

    @classmethod
    def one(cls) -> "SignedLogValue":
        return cls(0.0, 1)

    @classmethod
    def zero(cls) -> "SignedLogValue":
        return cls(0.0, 1, is_zero=True)

    @classmethod
    def from_value(cls, x: float) -> "SignedLogValue":
        if x == 0.0:
            return cls.zero()
        return cls(math.log(abs(x)), 1 if x > 0 else -1)

    def __mul__(self, other: "SignedLogValue") -> "SignedLogValue":
        if self.is_zero or other.is_zero:
            return SignedLogValue.zero()
        return SignedLogValue(self.log_magnitude + other.log_magnitude, self.sign * other.sign)

    def __truediv__(self, other: "SignedLogValue") -> "SignedLogValue":
        if other.is_zero:
            raise ZeroDivisionError("division by exact-zero SignedLogValue")
        if self.is_zero:
            return SignedLogValue.zero()
        return SignedLogValue(self.log_magnitude - other.log_magnitude, self.sign * other.sign)

    def to_float(self) -> float:
        """Exponentiate back to a plain float.

        Overflows saturate to +-inf; extreme underflow returns (signed) zero.
        """
        if self.is_zero:
            return 0.0
        try:
            mag = math.exp(self.log_magnitude)
        except OverflowError:
            mag = math.inf
        return self.sign * mag


def signed_log_product(gaps: Iterable[float]) -> SignedLogValue:
    """Product of ``gaps`` held in signed log space.

    The empty product is 1.  Any exactly-zero factor makes the result an
    exact zero (no logarithm is taken), which preserves the exact-zero
    weights of e.g. diagonal matrices.
    """
    log_sum = 0.0
    sign = 1
    for g in gaps:
        if g == 0.0:
            return SignedLogValue.zero()
        if g < 0.0:
            sign = -sign
        log_sum += math.log(abs(g))
    return SignedLogValue(log_sum, sign)
