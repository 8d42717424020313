"""Exact coefficient fields: prime fields F_p and the rationals.

Scalars in a prime field are plain ints in ``range(p)``; rational scalars are
:class:`fractions.Fraction`.  Arrays use ``int64`` for small primes (products
never overflow) and ``object`` otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import isqrt

import numpy as np

from .errors import FieldMismatchError, ParseError

# p**2 * 2**15 stays below 2**63 for p below this bound
_INT64_PRIME_BOUND = 1 << 24
_MAX_PRIME = 1 << 31


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


@dataclass(frozen=True)
class Field:
    """A prime field (``prime`` set) or the rational numbers (``prime=None``)."""

    prime: int | None = None

    def __post_init__(self):
        p = self.prime
        if p is not None:
            if not isinstance(p, int) or p >= _MAX_PRIME or not is_prime(p):
                raise ValueError(f"modulus must be a prime below 2**31, got {p!r}")

    @property
    def is_prime(self) -> bool:
        return self.prime is not None

    @property
    def is_rational(self) -> bool:
        return self.prime is None

    @cached_property
    def dtype(self):
        if self.prime is not None and self.prime < _INT64_PRIME_BOUND:
            return np.int64
        return object

    @property
    def zero(self):
        return 0 if self.is_prime else Fraction(0)

    @property
    def one(self):
        return 1 if self.is_prime else Fraction(1)

    def __call__(self, x):
        """Coerce an int or Fraction into this field."""
        p = self.prime
        if p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % p == 0:
                raise ParseError(f"denominator {x.denominator} is divisible by the modulus {p}")
            return x.numerator * pow(x.denominator, -1, p) % p
        return int(x) % p

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.prime is None:
            return 1 / Fraction(x)
        return pow(int(x), -1, self.prime)

    def array(self, data) -> np.ndarray:
        """Build an array of field elements from ints/Fractions."""
        if self.prime is None:
            arr = np.array(data, dtype=object)
            flat = arr.reshape(-1)
            for i, v in enumerate(flat):
                if not isinstance(v, Fraction):
                    flat[i] = Fraction(v)
            return arr
        arr = np.array(data, dtype=object)
        if arr.size and any(isinstance(v, Fraction) for v in arr.reshape(-1)):
            arr = np.vectorize(self, otypes=[object])(arr)
        return (arr % self.prime).astype(self.dtype)

    def zeros(self, shape) -> np.ndarray:
        if self.prime is None:
            out = np.empty(shape, dtype=object)
            out.fill(Fraction(0))
            return out
        return np.zeros(shape, dtype=self.dtype)

    def identity(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one
        return out

    def reduce(self, arr):
        if self.prime is None:
            return arr
        return arr % self.prime

    def random(self, rng: np.random.Generator, size=None):
        if self.prime is None:
            raise ValueError("cannot sample uniformly from the rationals")
        out = rng.integers(0, self.prime, size=size, dtype=np.int64)
        if size is None:
            return int(out)
        return out.astype(self.dtype)

    def to_str(self, x) -> str:
        """Render a scalar; prime-field values use the symmetric range."""
        if self.prime is None:
            x = Fraction(x)
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        x = int(x) % self.prime
        if x > self.prime // 2:
            x -= self.prime
        return str(x)

    def to_json(self):
        return "rational" if self.prime is None else {"prime": self.prime}

    @classmethod
    def from_json(cls, data) -> "Field":
        if data == "rational":
            return QQ
        if isinstance(data, dict) and set(data) == {"prime"}:
            try:
                return cls(int(data["prime"]))
            except (TypeError, ValueError) as exc:
                raise ParseError(f"bad field prime {data['prime']!r}: {exc}") from None
        raise ParseError(f"unrecognised field specification {data!r}")

    def check_same(self, other: "Field") -> None:
        if self != other:
            raise FieldMismatchError(f"field mismatch: {self} vs {other}")

    def __str__(self):
        return "QQ" if self.prime is None else f"GF({self.prime})"


QQ = Field(None)


def GF(p: int) -> Field:
    return Field(p)


DEFAULT_FIELD = GF(101)
