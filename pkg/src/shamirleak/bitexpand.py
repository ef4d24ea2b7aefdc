"""Expand a recovery equation s = sum c_j s_j into per-bit XOR equations.

Multiplication by a constant c is GF(2)-linear on the bit representation, so
each bit of the recovered secret is the XOR of a fixed set of share bits:
bit i of s = XOR over {(j, b) : M_{c_j}[i, b] = 1} of bit b of share j.
The number of summands in the thinnest of these l equations (min_summands)
drives the exponent of the bitwise leakage bounds, and it depends on both
the recovery coefficients and the field's reducing polynomial.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from .field import FieldSpec, gf_mul, mul_matrix


@dataclass(frozen=True)
class BitwiseSystem:
    """The l per-bit recovery equations for one coefficient vector.

    equations[i] is a frozenset of (share_index, bit_index) pairs whose XOR
    equals bit i of the secret. counts[i] is its size; min_summands is the
    smallest count, serialized as "n_tilde".
    """

    l: int
    equations: tuple[frozenset[tuple[int, int]], ...]

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(len(eq) for eq in self.equations)

    @property
    def min_summands(self) -> int:
        return min(self.counts)

    def to_json(self) -> str:
        payload = {
            "l": self.l,
            "equations": [sorted([j, b] for j, b in eq) for eq in self.equations],
            "n_tilde": self.min_summands,
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "BitwiseSystem":
        payload = json.loads(text)
        return cls(
            l=payload["l"],
            equations=tuple(
                frozenset((j, b) for j, b in eq) for eq in payload["equations"]
            ),
        )


def expand(coefficients: tuple[int, ...], spec: FieldSpec) -> BitwiseSystem:
    """Bitwise recovery system for s = sum c_j s_j over the given field.

    Zero coefficients contribute no summands (their multiplication matrix is
    zero). Distinct pairs never cancel because the share bits are distinct
    variables, so the summand counts are literal set sizes.
    """
    spec.validate(*coefficients)
    equations = []
    mats = [mul_matrix(c, spec) for c in coefficients]
    for i in range(spec.l):
        eq = set()
        for j, m in enumerate(mats):
            for b in range(spec.l):
                if m[i, b]:
                    eq.add((j, b))
        equations.append(frozenset(eq))
    return BitwiseSystem(l=spec.l, equations=tuple(equations))


def verify_system(
    system: BitwiseSystem, coefficients: tuple[int, ...], spec: FieldSpec
) -> bool:
    """Exhaustively check the system against direct field arithmetic.

    Enumerates every share vector (order^N of them, so keep l*N small) and
    compares the XOR of each equation's bits with the corresponding bit of
    sum c_j s_j.
    """
    n = len(coefficients)
    if system.l != spec.l or len(system.equations) != spec.l:
        return False
    for shares in itertools.product(range(spec.order), repeat=n):
        combo = 0
        for c, s in zip(coefficients, shares):
            combo ^= gf_mul(c, s, spec)
        for i, eq in enumerate(system.equations):
            bit = 0
            for j, b in eq:
                bit ^= (shares[j] >> b) & 1
            if bit != (combo >> i) & 1:
                return False
    return True
