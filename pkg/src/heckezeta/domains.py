"""Domains of transfer-operator blocks: real intervals and discs in P^1(C).

Discs follow the B(a, b) convention: the open ball whose boundary circle
passes through a and b on the real line, containing infinity when a > b.
Every domain carries a real Moebius chart from the reference set (the
unit disc, or (-1,1) for intervals) onto the domain; collocation and all
kernel evaluations happen in reference coordinates, where c*u + d is
zero-free and positive-base powers are unambiguous.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .moebius import INF


def mobius_apply(mat, z):
    """mat acting on a complex number or INF (mat: 2x2 real ndarray)."""
    a, b, c, d = mat[0, 0], mat[0, 1], mat[1, 0], mat[1, 1]
    if z == INF:
        return INF if c == 0.0 else a / c
    num = a * z + b
    den = c * z + d
    if den == 0.0:
        return INF
    return num / den


def mobius_inv(mat):
    return np.array([[mat[1, 1], -mat[0, 1]], [-mat[1, 0], mat[0, 0]]], dtype=float)


@dataclass(frozen=True)
class Domain:
    """interval (a, b) on P^1(R), or disc B(a, b) in P^1(C)."""

    kind: str            # 'interval' | 'disc'
    a: float
    b: float

    @property
    def contains_inf(self):
        if self.kind == "disc":
            return self.a > self.b
        return self.a == -INF or self.b == INF

    @property
    def center(self):
        if self.kind != "disc":
            raise ValueError("center defined for discs")
        return 0.5 * (self.a + self.b)

    @property
    def radius(self):
        """Radius of the boundary circle (for contains_inf discs, of the
        complementary circle)."""
        if self.kind != "disc":
            raise ValueError("radius defined for discs")
        return abs(self.b - self.a) * 0.5

    def chart(self):
        """Real Moebius matrix mapping the reference onto the domain.

        reference: unit disc for discs, (-1, 1) for intervals; the real
        diameter maps onto the domain's real trace.
        """
        a, b = self.a, self.b
        if self.kind == "disc":
            if a < b:
                return np.array([[0.5 * (b - a), 0.5 * (a + b)], [0.0, 1.0]])
            m, rho = 0.5 * (a + b), 0.5 * (a - b)
            return np.array([[m, rho], [1.0, 0.0]])
        if a == -INF and b == INF:
            raise ValueError("full-line interval domains are not used")
        if b == INF:
            return np.array([[1.0 - a, 1.0 + a], [-1.0, 1.0]])
        if a == -INF:
            return np.array([[b + 1.0, b - 1.0], [1.0, 1.0]])
        return np.array([[0.5 * (b - a), 0.5 * (a + b)], [0.0, 1.0]])

    def contains_point(self, z, margin=0.0):
        if self.kind != "disc":
            raise ValueError("containment test is for discs")
        if z == INF:
            return self.contains_inf and margin <= 0.0
        dist = abs(z - self.center)
        if self.contains_inf:
            return dist >= self.radius + margin
        return dist <= self.radius - margin

    def contains_disc(self, other, margin=0.0):
        """Margin by which the closure of `other` sits inside this disc.

        Returns the signed clearance (positive = strictly inside by that
        amount); both discs may contain infinity.
        """
        c1, r1 = self.center, self.radius
        c2, r2 = other.center, other.radius
        if not self.contains_inf and not other.contains_inf:
            return r1 - (abs(c1 - c2) + r2)
        if self.contains_inf and other.contains_inf:
            # complement of (c1, r1) contains complement of (c2, r2)
            return r2 - (abs(c1 - c2) + r1)
        if self.contains_inf and not other.contains_inf:
            # bounded disc inside the complement: circles must be disjoint
            return abs(c1 - c2) - r1 - r2
        return -INF  # bounded disc cannot contain one through infinity

    def boundary_points(self, k):
        """k points on the boundary circle (as complex numbers)."""
        if self.kind != "disc":
            raise ValueError("boundary sampling is for discs")
        th = 2.0 * math.pi * (np.arange(k) + 0.31) / k
        return self.center + self.radius * np.exp(1j * th)


def interval(a, b):
    return Domain(kind="interval", a=float(a), b=float(b))


def disc(a, b):
    """B(a, b): through a and b, containing infinity iff a > b."""
    return Domain(kind="disc", a=float(a), b=float(b))


def disc_center_radius(c, r):
    return disc(c - r, c + r)


def mobius_disc_image(mat, dom: Domain) -> Domain:
    """Image of a disc under a real Moebius map (again a disc).

    The image circle passes through the images of a and b; which side is
    the disc is decided with an interior test point.
    """
    ia = mobius_apply(mat, dom.a)
    ib = mobius_apply(mat, dom.b)
    if ia == INF or ib == INF:
        # perturb: use two other real boundary points plus orientation
        raise ValueError("image through infinity; choose different boundary points")
    lo, hi = (ia, ib) if ia < ib else (ib, ia)
    phi = dom.chart()
    z0 = complex(mobius_apply(phi, 0.5j))  # interior point off the real axis
    w0 = complex(mobius_apply(mat, z0))
    c, r = 0.5 * (lo + hi), 0.5 * (hi - lo)
    inside = abs(w0 - c) < r
    return disc(lo, hi) if inside else disc(hi, lo)


def hull_interval(dom: Domain):
    """Real trace of a disc domain as an interval (through INF if needed)."""
    if dom.contains_inf:
        return (dom.b, dom.a)  # understood through infinity
    return (dom.a, dom.b)
