"""Projective 2x2 real matrices, their boundary action, classification and norms.

Elements of PGL_2(R) are stored as 2x2 float matrices normalized to
|det| = 1 with the first nonzero entry of (a, b, c, d) positive, so that
projective equality, hashing and sign bookkeeping are well defined.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import BranchViolation, DegenerateMatrix, NotHyperbolic

INF = float("inf")

# |tr| - 2 threshold for parabolic/elliptic/hyperbolic decisions.  Group
# elements here are short products of exact generators, so traces are
# accurate to near machine precision.
EPS_CLS = 1e-9

_EQ_TOL = 1e-12


class GroupElement:
    """A projective real 2x2 matrix with |det| = 1.

    det_sign is -1 for orientation-reversing elements (reflections such as
    Q = [[0,1],[1,0]] and J = [[-1,0],[0,1]]).
    """

    __slots__ = ("m", "det_sign")

    def __init__(self, a, b, c, d):
        m = np.array([[a, b], [c, d]], dtype=float)
        det = a * d - b * c
        scale = max(abs(a), abs(b), abs(c), abs(d))
        if scale == 0.0 or abs(det) < 1e-14 * scale * scale:
            raise DegenerateMatrix(f"matrix {m.tolist()} has det ~ 0")
        m /= math.sqrt(abs(det))
        flat = m.reshape(-1)
        for x in flat:
            if abs(x) > _EQ_TOL:
                if x < 0:
                    m = -m
                break
        self.m = m
        self.m.flags.writeable = False
        self.det_sign = 1 if det > 0 else -1

    @classmethod
    def from_array(cls, arr):
        a, b = arr[0]
        c, d = arr[1]
        return cls(a, b, c, d)

    @classmethod
    def identity(cls):
        return cls(1.0, 0.0, 0.0, 1.0)

    @property
    def a(self):
        return self.m[0, 0]

    @property
    def b(self):
        return self.m[0, 1]

    @property
    def c(self):
        return self.m[1, 0]

    @property
    def d(self):
        return self.m[1, 1]

    def trace(self):
        return self.m[0, 0] + self.m[1, 1]

    def __mul__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        p = self.m @ other.m
        return GroupElement(p[0, 0], p[0, 1], p[1, 0], p[1, 1])

    def inv(self):
        a, b, c, d = self.m[0, 0], self.m[0, 1], self.m[1, 0], self.m[1, 1]
        # adjugate; normalization in __init__ absorbs the determinant
        return GroupElement(d, -b, -c, a)

    def power(self, n):
        if n == 0:
            return GroupElement.identity()
        base = self if n > 0 else self.inv()
        out = base
        for _ in range(abs(n) - 1):
            out = out * base
        return out

    def is_identity(self, tol=_EQ_TOL):
        return (
            self.det_sign == 1
            and abs(self.m[0, 0] - self.m[1, 1]) <= tol
            and abs(self.m[0, 1]) <= tol
            and abs(self.m[1, 0]) <= tol
            and abs(abs(self.m[0, 0]) - 1.0) <= tol
        )

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.det_sign == other.det_sign and bool(
            np.all(np.abs(self.m - other.m) <= _EQ_TOL)
        )

    def __hash__(self):
        key = tuple(round(x, 9) for x in self.m.reshape(-1))
        return hash((key, self.det_sign))

    def __repr__(self):
        a, b, c, d = self.m.reshape(-1)
        return f"GroupElement([[{a:.6g}, {b:.6g}], [{c:.6g}, {d:.6g}]], det={self.det_sign:+d})"


def apply(g: GroupElement, z):
    """Fractional linear action of g on P^1(R) or on complex points.

    z may be a float, complex, or INF.  The infinity conventions are
    projective: g.inf = a/c (inf if c = 0), g.z = inf when cz + d = 0.
    """
    a, b, c, d = g.m[0, 0], g.m[0, 1], g.m[1, 0], g.m[1, 1]
    if z == INF:
        if abs(c) <= _EQ_TOL:
            return INF
        return a / c
    num = a * z + b
    den = c * z + d
    if abs(den) <= _EQ_TOL * max(1.0, abs(num)):
        return INF
    return num / den


def classify(g: GroupElement, tol=EPS_CLS):
    """Trace classification of an orientation-preserving element."""
    if g.det_sign != 1:
        raise NotHyperbolic("classification requires det +1; route reflections through g*g")
    if g.is_identity(1e-9):
        return "identity"
    t = abs(g.trace())
    if t > 2.0 + tol:
        return "hyperbolic"
    if t < 2.0 - tol:
        return "elliptic"
    return "parabolic"


def norm(g: GroupElement):
    """N(g): the square of the eigenvalue of larger absolute value.

    For orientation-reversing g (det -1), N(g) = N(g^2)^(1/2).
    """
    if g.det_sign == -1:
        g2 = g * g
        return math.sqrt(norm(g2))
    t = abs(g.trace())
    if t <= 2.0 + EPS_CLS:
        raise NotHyperbolic(f"|trace| = {t} <= 2")
    half = (t + math.sqrt(t * t - 4.0)) / 2.0
    return half * half


def j_s(g: GroupElement, z, s):
    """The weight j_s(g, z) = (|det g| * (cz+d)^(-2))^s.

    For real z the base is positive and the principal real power is taken.
    For complex z a holomorphic branch is used, anchored so that it is
    continuous on half planes Re(cz+d) > 0 or Re(cz+d) < 0 and matches the
    positive real power on the real axis.  Evaluation with cz+d on the
    imaginary axis (ambiguous branch) raises BranchViolation.
    """
    c, d = g.m[1, 0], g.m[1, 1]
    den = c * z + d
    if isinstance(z, complex) and z.imag != 0.0:
        re, im = den.real, den.imag
        mag = math.hypot(re, im)
        if mag <= _EQ_TOL:
            raise BranchViolation("cz + d vanishes")
        if re > _EQ_TOL * mag:
            w = den
        elif re < -_EQ_TOL * mag:
            w = -den
        else:
            raise BranchViolation("cz + d on the imaginary axis; no certified branch")
        # exp(-2s Log w) with w in the right half plane agrees with the
        # positive real power ((cx+d)^2)^(-s) on the real trace.
        return np.exp(-2.0 * s * np.log(complex(w)))
    x = z.real if isinstance(z, complex) else z
    den = c * x + d
    if den == 0.0:
        raise BranchViolation("cx + d vanishes")
    base = math.log(abs(den))
    return np.exp(-2.0 * s * base)
