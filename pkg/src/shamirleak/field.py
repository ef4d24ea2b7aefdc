"""Arithmetic in binary extension fields GF(2^l).

Field elements are plain Python ints in ``[0, 2^l)``: the integer's bits are
the coefficients of a polynomial over GF(2), LSB first, so bit 0 is the
constant coefficient. Addition is XOR. Multiplication is polynomial
multiplication reduced modulo an irreducible degree-l polynomial, given as a
bit mask with bit l set (``0b1011`` is x^3 + x + 1).

Every module in this package shares the LSB-first convention: bit b of an
element is ``(value >> b) & 1``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# One irreducible polynomial per degree, used when the caller does not pick
# their own. The choice matters downstream (the bitwise recovery equations
# depend on it), which is why FieldSpec keeps the polynomial explicit.
DEFAULT_POLYS = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000001010011,
    13: 0b10000000011011,
    14: 0b100010001000011,
    15: 0b1000000000000011,
    16: 0b10001000000001011,
}

MAX_DEGREE = 16


def _degree(poly: int) -> int:
    """Degree of a polynomial bit mask (-1 for the zero polynomial)."""
    return poly.bit_length() - 1


def _poly_mod(a: int, b: int) -> int:
    """Remainder of carry-less polynomial division of a by b over GF(2)."""
    db = _degree(b)
    while _degree(a) >= db:
        a ^= b << (_degree(a) - db)
    return a


def _poly_mul(a: int, b: int) -> int:
    """Carry-less (unreduced) polynomial product over GF(2)."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def is_irreducible(poly: int) -> bool:
    """True iff poly has no nontrivial factor over GF(2).

    Trial division by every polynomial of degree 1 .. deg/2. Fine for the
    degrees this package supports (l <= 16 means at most 2^9 candidates).
    """
    deg = _degree(poly)
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for divisor in range(1 << d, 1 << (d + 1)):
            if _poly_mod(poly, divisor) == 0:
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """GF(2^l) fixed by its extension degree and reducing polynomial.

    Immutable; construction validates that the polynomial has degree exactly
    l and is irreducible, so a FieldSpec in hand is always a real field.
    """

    l: int
    poly: int

    def __post_init__(self) -> None:
        if not 1 <= self.l <= MAX_DEGREE:
            raise ValueError(f"extension degree must be in [1, {MAX_DEGREE}], got {self.l}")
        if _degree(self.poly) != self.l:
            raise ValueError(
                f"polynomial {bin(self.poly)} has degree {_degree(self.poly)}, expected {self.l}"
            )
        if not is_irreducible(self.poly):
            raise ValueError(f"polynomial {bin(self.poly)} is reducible over GF(2)")

    @classmethod
    def default(cls, l: int) -> "FieldSpec":
        """Field of degree l with the built-in polynomial table."""
        if l not in DEFAULT_POLYS:
            raise ValueError(f"no default polynomial for degree {l}")
        return cls(l, DEFAULT_POLYS[l])

    @property
    def order(self) -> int:
        """Number of field elements, q = 2^l."""
        return 1 << self.l

    def validate(self, *elements: int) -> None:
        """Raise if any value is outside [0, 2^l)."""
        for a in elements:
            if not 0 <= a < self.order:
                raise ValueError(f"{a} is not an element of GF(2^{self.l})")

    def to_config(self) -> dict:
        return {"l": self.l, "poly": self.poly}

    @classmethod
    def from_config(cls, cfg: dict) -> "FieldSpec":
        if "poly" in cfg:
            return cls(int(cfg["l"]), int(cfg["poly"]))
        return cls.default(int(cfg["l"]))


def gf_add(a: int, b: int, spec: FieldSpec) -> int:
    """Sum in GF(2^l): bitwise XOR (characteristic 2, so same as subtraction)."""
    spec.validate(a, b)
    return a ^ b


def gf_mul(a: int, b: int, spec: FieldSpec) -> int:
    """Product in GF(2^l) by shift-and-reduce."""
    spec.validate(a, b)
    out = 0
    top = 1 << spec.l
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        if a & top:
            a ^= spec.poly
        b >>= 1
    return out


def gf_pow(a: int, e: int, spec: FieldSpec) -> int:
    """a raised to a nonnegative integer exponent, by square-and-multiply."""
    spec.validate(a)
    if e < 0:
        raise ValueError("negative exponent")
    out = 1
    base = a
    while e:
        if e & 1:
            out = gf_mul(out, base, spec)
        base = gf_mul(base, base, spec)
        e >>= 1
    return out


def gf_inv(a: int, spec: FieldSpec) -> int:
    """Multiplicative inverse, a^(q-2) in the cyclic unit group."""
    spec.validate(a)
    if a == 0:
        raise ZeroDivisionError("division by zero in field")
    return gf_pow(a, spec.order - 2, spec)


def mul_matrix(c: int, spec: FieldSpec) -> np.ndarray:
    """The l x l GF(2) matrix of the linear map x -> c*x.

    Column j holds the bits (LSB first) of c * 2^j, so for every x,
    bits(c*x) = M @ bits(x) over GF(2).
    """
    spec.validate(c)
    m = np.zeros((spec.l, spec.l), dtype=np.uint8)
    for j in range(spec.l):
        col = gf_mul(c, 1 << j, spec)
        for i in range(spec.l):
            m[i, j] = (col >> i) & 1
    return m
