"""Real quaternion algebra on immutable values.

A quaternion is a scalar part plus a three component vector part over the
unit vectors e1, e2, e3 with e1^2 = e2^2 = e3^2 = e1*e2*e3 = -1.  Values
are never renormalized implicitly; frame construction normalizes
explicitly where it needs unit vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Quaternion",
    "ZERO",
    "ONE",
    "E1",
    "E2",
    "E3",
    "add",
    "scale",
    "conjugate",
    "mul",
    "inner",
    "norm",
    "spatial_cross_check",
]


@dataclass(frozen=True)
class Quaternion:
    """A real quaternion ``s + v[0]*e1 + v[1]*e2 + v[2]*e3``."""

    s: float
    v: tuple[float, float, float]

    def __post_init__(self):
        if len(self.v) != 3:
            raise ValueError("vector part must have exactly three components")
        object.__setattr__(self, "s", float(self.s))
        object.__setattr__(self, "v", tuple(float(c) for c in self.v))
        if not all(math.isfinite(c) for c in (self.s, *self.v)):
            raise ValueError("quaternion components must be finite")

    @classmethod
    def spatial(cls, x: float, y: float, z: float) -> "Quaternion":
        """Quaternion with zero scalar part, identified with a point of R^3."""
        return cls(0.0, (x, y, z))

    @classmethod
    def from_vec4(cls, vec) -> "Quaternion":
        w, x, y, z = (float(c) for c in vec)
        return cls(w, (x, y, z))

    def as_vec4(self) -> np.ndarray:
        return np.array([self.s, *self.v], dtype=float)

    @property
    def components(self) -> tuple[float, float, float, float]:
        return (self.s, *self.v)

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.s, (-self.v[0], -self.v[1], -self.v[2]))

    def norm_squared(self) -> float:
        return self.s * self.s + self.v[0] ** 2 + self.v[1] ** 2 + self.v[2] ** 2

    def norm(self) -> float:
        return math.sqrt(self.norm_squared())

    def dot(self, other: "Quaternion") -> float:
        """Euclidean inner product of the two 4-component vectors."""
        return (
            self.s * other.s
            + self.v[0] * other.v[0]
            + self.v[1] * other.v[1]
            + self.v[2] * other.v[2]
        )

    def is_spatial(self, atol: float = 1e-12) -> bool:
        return abs(self.s) <= atol

    def approx_eq(self, other: "Quaternion", atol: float = 1e-12) -> bool:
        return all(
            abs(a - b) <= atol for a, b in zip(self.components, other.components)
        )

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(
            self.s + other.s,
            (
                self.v[0] + other.v[0],
                self.v[1] + other.v[1],
                self.v[2] + other.v[2],
            ),
        )

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return self + (-other)

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.s, (-self.v[0], -self.v[1], -self.v[2]))

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return mul(self, other)
        return scale(float(other), self)

    def __rmul__(self, other):
        return scale(float(other), self)


ZERO = Quaternion(0.0, (0.0, 0.0, 0.0))
ONE = Quaternion(1.0, (0.0, 0.0, 0.0))
E1 = Quaternion(0.0, (1.0, 0.0, 0.0))
E2 = Quaternion(0.0, (0.0, 1.0, 0.0))
E3 = Quaternion(0.0, (0.0, 0.0, 1.0))


def add(p: Quaternion, q: Quaternion) -> Quaternion:
    """Componentwise sum."""
    return p + q


def scale(c: float, q: Quaternion) -> Quaternion:
    """Multiply every component by the real scalar ``c``."""
    return Quaternion(c * q.s, (c * q.v[0], c * q.v[1], c * q.v[2]))


def conjugate(q: Quaternion) -> Quaternion:
    """Scalar part unchanged, vector part negated."""
    return q.conjugate()


def mul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Quaternion product: associative, distributive, not commutative.

    Scalar part is ``s_p*s_q - <v_p, v_q>``; vector part is
    ``s_p*v_q + s_q*v_p + v_p x v_q``.
    """
    a1, (b1, c1, d1) = p.s, p.v
    a2, (b2, c2, d2) = q.s, q.v
    return Quaternion(
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        (
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 + c1 * a2 + d1 * b2 - b1 * d2,
            a1 * d2 + d1 * a2 + b1 * c2 - c1 * b2,
        ),
    )


def inner(p: Quaternion, q: Quaternion) -> float:
    """Symmetric bilinear inner product; equals the 4D Euclidean dot product."""
    return p.dot(q)


def norm(q: Quaternion) -> float:
    """Nonnegative; ``norm(q)**2 == inner(q, q)``."""
    return q.norm()


def spatial_cross_check(p: Quaternion, q: Quaternion, atol: float = 1e-9) -> float:
    """Max componentwise gap between ``mul(p, q)`` and the 3D cross product.

    Both inputs must be spatial and mutually orthogonal; for such pairs the
    quaternion product reduces to the cross product of the vector parts, so
    the returned gap is zero up to round-off.
    """
    if not p.is_spatial(atol) or not q.is_spatial(atol):
        raise ValueError("spatial_cross_check requires spatial quaternions")
    if abs(inner(p, q)) > atol * max(1.0, p.norm() * q.norm()):
        raise ValueError("spatial_cross_check requires orthogonal inputs")
    prod = mul(p, q)
    cx = np.cross(np.array(p.v), np.array(q.v))
    gap = Quaternion(prod.s, (prod.v[0] - cx[0], prod.v[1] - cx[1], prod.v[2] - cx[2]))
    return max(abs(c) for c in gap.components)
