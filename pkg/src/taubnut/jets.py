"""Second-order jet arithmetic in the three base coordinates.

A :class:`Jet2` carries the value, gradient, and Hessian of a scalar with
respect to the Euclidean base coordinates (x1, x2, x3). Every field entering
the metric construction is circle-invariant, so fiber derivatives never occur
and three base coordinates suffice. Arithmetic follows the truncated Taylor
rules exactly; no step sizes are involved, so jet derivatives are exact up to
roundoff.

Domain violations (division by a jet with zero value, square root or
fractional power of a nonpositive value) raise
:class:`~taubnut.errors.JetDomainError` rather than propagating NaNs.

``fd_oracle`` provides independent central-difference derivatives. It exists
for tests only and is never called by the construction pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import JetDomainError

__all__ = [
    "Jet2",
    "constant",
    "seed_coordinate",
    "seed_point",
    "distance",
    "inv_distance",
    "jet_sqrt",
    "jet_pow",
    "jet_arith",
    "fd_oracle",
]

_EYE3 = np.eye(3)


@dataclass(frozen=True)
class Jet2:
    """Value, gradient (3,), and symmetric Hessian (3,3) of a scalar."""

    value: float
    gradient: np.ndarray
    hessian: np.ndarray

    def __post_init__(self):
        grad = np.array(self.gradient, dtype=float).reshape(3)
        hess = np.array(self.hessian, dtype=float).reshape(3, 3)
        # symmetrized on write: mixed partials commute for C^2 data
        hess = 0.5 * (hess + hess.T)
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "gradient", grad)
        object.__setattr__(self, "hessian", hess)

    # -- ring operations --------------------------------------------------

    def __add__(self, other):
        o = _coerce(other)
        return Jet2(self.value + o.value, self.gradient + o.gradient, self.hessian + o.hessian)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.value, -self.gradient, -self.hessian)

    def __sub__(self, other):
        o = _coerce(other)
        return Jet2(self.value - o.value, self.gradient - o.gradient, self.hessian - o.hessian)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        o = _coerce(other)
        cross = np.outer(self.gradient, o.gradient)
        return Jet2(
            self.value * o.value,
            self.value * o.gradient + o.value * self.gradient,
            self.value * o.hessian + o.value * self.hessian + cross + cross.T,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * _coerce(other).reciprocal()

    def __rtruediv__(self, other):
        return _coerce(other) * self.reciprocal()

    def __pow__(self, p):
        return jet_pow(self, p)

    def reciprocal(self):
        if self.value == 0.0:
            raise JetDomainError("division by a jet with zero value")
        iv = 1.0 / self.value
        outer = np.outer(self.gradient, self.gradient)
        return Jet2(iv, -iv * iv * self.gradient, -iv * iv * self.hessian + 2.0 * iv**3 * outer)

    def laplacian(self):
        return float(np.trace(self.hessian))


def _coerce(x):
    if isinstance(x, Jet2):
        return x
    if isinstance(x, (int, float, np.floating, np.integer)):
        return constant(float(x))
    raise TypeError(f"cannot mix Jet2 with {type(x).__name__}")


def constant(c):
    """Jet of the constant function c."""
    return Jet2(float(c), np.zeros(3), np.zeros((3, 3)))


def seed_coordinate(axis, x):
    """Jet of the coordinate function x[axis] (axis in {0, 1, 2}) at x."""
    if axis not in (0, 1, 2):
        raise ValueError("axis must be 0, 1, or 2")
    grad = np.zeros(3)
    grad[axis] = 1.0
    return Jet2(float(x[axis]), grad, np.zeros((3, 3)))


def seed_point(x):
    """Jets of all three coordinate functions at x."""
    return tuple(seed_coordinate(i, x) for i in range(3))


def distance(x, center):
    """Jet of |x - center| at x. Closed form; errors at the center itself."""
    d = np.asarray(x, dtype=float) - np.asarray(center, dtype=float)
    r2 = float(d @ d)
    if r2 == 0.0:
        raise JetDomainError("distance jet evaluated at its own center")
    r = np.sqrt(r2)
    n = d / r
    return Jet2(r, n, (_EYE3 - np.outer(n, n)) / r)


def inv_distance(x, center):
    """Jet of 1/|x - center| at x. Closed form; errors at the center itself."""
    d = np.asarray(x, dtype=float) - np.asarray(center, dtype=float)
    r2 = float(d @ d)
    if r2 == 0.0:
        raise JetDomainError("inverse-distance jet evaluated at its own center")
    r = np.sqrt(r2)
    return Jet2(1.0 / r, -d / (r2 * r), (3.0 * np.outer(d, d) - r2 * _EYE3) / (r2 * r2 * r))


def jet_sqrt(j):
    """Jet of sqrt(j); requires a strictly positive value."""
    if j.value <= 0.0:
        raise JetDomainError(f"sqrt of a jet with nonpositive value {j.value}")
    s = np.sqrt(j.value)
    outer = np.outer(j.gradient, j.gradient)
    return Jet2(s, j.gradient / (2.0 * s), j.hessian / (2.0 * s) - outer / (4.0 * s**3))


def jet_pow(j, p):
    """Jet of j**p for real p; requires a strictly positive value."""
    p = float(p)
    if j.value <= 0.0:
        raise JetDomainError(f"power of a jet with nonpositive value {j.value}")
    v = j.value**p
    dv = p * j.value ** (p - 1.0)
    ddv = p * (p - 1.0) * j.value ** (p - 2.0)
    outer = np.outer(j.gradient, j.gradient)
    return Jet2(v, dv * j.gradient, dv * j.hessian + ddv * outer)


def jet_arith(op, *args):
    """Apply a named jet operation. Mostly a convenience for property tests.

    Supported ops: add, sub, mul, div (two jets), neg, sqrt, reciprocal
    (one jet), pow (jet, exponent), inv_norm (three coordinate jets,
    composing to 1/sqrt(x1^2 + x2^2 + x3^2) through the generic rules).
    """
    if op == "add":
        return args[0] + args[1]
    if op == "sub":
        return args[0] - args[1]
    if op == "mul":
        return args[0] * args[1]
    if op == "div":
        return args[0] / args[1]
    if op == "neg":
        return -args[0]
    if op == "sqrt":
        return jet_sqrt(args[0])
    if op == "reciprocal":
        return args[0].reciprocal()
    if op == "pow":
        return jet_pow(args[0], args[1])
    if op == "inv_norm":
        j1, j2, j3 = args
        return jet_pow(j1 * j1 + j2 * j2 + j3 * j3, -0.5)
    raise ValueError(f"unknown jet operation {op!r}")


def fd_oracle(f, x, step=1e-5):
    """Central-difference gradient and Hessian of a scalar callable at x.

    Independent of the jet rules on purpose: second-order central stencils
    with a fixed step, O(step^2) accurate. Test oracle only.
    """
    x = np.asarray(x, dtype=float)
    h = float(step)
    grad = np.zeros(3)
    hess = np.zeros((3, 3))
    f0 = f(x)
    for i in range(3):
        ei = np.zeros(3)
        ei[i] = h
        fp, fm = f(x + ei), f(x - ei)
        grad[i] = (fp - fm) / (2.0 * h)
        hess[i, i] = (fp - 2.0 * f0 + fm) / (h * h)
    for i in range(3):
        for j in range(i + 1, 3):
            ei = np.zeros(3)
            ej = np.zeros(3)
            ei[i] = h
            ej[j] = h
            val = (f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)) / (4.0 * h * h)
            hess[i, j] = hess[j, i] = val
    return grad, hess
