"""Lerch zeta zeta(s, a, w) = sum_{n>=0} e^{2 pi i n a} (n+w)^{-s}, Re w > 0,
with meromorphic continuation in s.

For integral phase a this is the Hurwitz zeta function, continued by
Euler-Maclaurin; it has a single simple pole at s = 1 with residue 1.
For non-integral a the function is entire in s; the series is accelerated
by iterated summation by parts, which converges for every s once enough
initial terms are split off.

The contour-integral normalization sometimes quoted with a Gamma(s-1)
prefactor is not used here; the continuation below is validated directly
against the defining series on Re s > 1.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import DomainError, NotAPole, PoleAt1

_INT_TOL = 1e-12

# B_2, B_4, ..., B_24
_BERNOULLI = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
]


def _phase_mod1(a):
    a = float(a) % 1.0
    if a > 1.0 - _INT_TOL:
        a = 0.0
    return a


def is_integral_phase(a):
    return _phase_mod1(a) < _INT_TOL


def _pow(base, expo):
    """base^(-expo) ... principal (n+w)^{-s} for Re(base) > 0."""
    return cmath.exp(-expo * cmath.log(base))


def hurwitz_zeta(s, w, nterms=None, ncorr=10):
    """Hurwitz zeta by Euler-Maclaurin; meromorphic in s, pole at s = 1."""
    s = complex(s)
    w = complex(w)
    if w.real <= 0:
        raise DomainError(f"Re w = {w.real} <= 0")
    if abs(s - 1.0) < _INT_TOL:
        raise PoleAt1("Hurwitz zeta has a simple pole at s = 1")
    if nterms is None:
        nterms = int(max(16.0, 1.5 * abs(s.imag), 2.0 * abs(s.real))) + 8
    N = nterms
    n = np.arange(N)
    base = n + w
    head = np.sum(np.exp(-s * np.log(base)))
    c = N + w
    logc = cmath.log(c)
    out = head + cmath.exp((1.0 - s) * logc) / (s - 1.0) + 0.5 * cmath.exp(-s * logc)
    # Bernoulli corrections: B_2j/(2j)! * (s)_{2j-1} * c^{-s-2j+1}
    poch = s  # (s)_1
    fact = 2.0  # (2j)!
    for j in range(1, ncorr + 1):
        term = _BERNOULLI[j - 1] / fact * poch * cmath.exp((-s - 2 * j + 1) * logc)
        out += term
        if abs(term) < 1e-18 * max(1.0, abs(out)):
            break
        if j < ncorr:
            poch *= (s + 2 * j - 1) * (s + 2 * j)
            fact *= (2 * j + 1) * (2 * j + 2)
    return complex(out)


def _sbp_tail(s, z, w0, kmax=14):
    """sum_{m>=0} z^m (m+w0)^{-s} by iterated summation by parts, z != 1."""
    v = np.array([_pow(m + w0, s) for m in range(kmax + 1)], dtype=complex)
    r = z / (1.0 - z)
    out = 0.0 + 0.0j
    coeff = 1.0 / (1.0 - z)
    for k in range(kmax):
        out += coeff * v[0]
        v = np.diff(v)
        coeff *= r
    return complex(out)


def _lerch_osc(s, a, w, n0, kmax=14):
    z = cmath.exp(2j * math.pi * a)
    n = np.arange(n0)
    head = np.sum(np.exp(2j * math.pi * a * n) * np.exp(-s * np.log(n + w)))
    tail = z**n0 * _sbp_tail(s, z, w + n0, kmax=kmax)
    return complex(head + tail)


def lerch_zeta(s, a, w):
    """zeta(s, a, w) with continuation in s (entire for a not in Z)."""
    s = complex(s)
    w = complex(w)
    a = _phase_mod1(a)
    if w.real <= 0:
        raise DomainError(f"Re w = {w.real} <= 0")
    if a < _INT_TOL:
        return hurwitz_zeta(s, w)
    z = cmath.exp(2j * math.pi * a)
    # enough head terms that the difference table sits in the smooth
    # regime; the closer z is to 1 the deeper we must go
    r = 1.0 / abs(1.0 - z)
    n0 = int(max(24.0, 2.0 * abs(s), 1.2 * abs(s.imag), 2.0 * (16 + abs(s)) * r))
    val = _lerch_osc(s, a, w, n0)
    for _ in range(3):
        check = _lerch_osc(s, a, w, 2 * n0)
        if abs(check - val) <= 1e-13 * max(1.0, abs(check)):
            return check
        n0 *= 2
        val = check
        if n0 > 400000:
            break
    return val


def residue_at_1(a, w=None):
    """Residue of s -> zeta(s, a, w) at s = 1 (requires a in Z; equals 1)."""
    if not is_integral_phase(a):
        raise NotAPole(f"phase a = {a} is not integral; the function is entire")
    return 1.0 + 0.0j


def hurwitz_zeta_vec(s, w_arr, nterms=None, ncorr=10):
    """Euler-Maclaurin Hurwitz zeta, vectorized over an array of w."""
    s = complex(s)
    w = np.asarray(w_arr, dtype=complex)
    if np.any(w.real <= 0):
        raise DomainError("Re w <= 0 in Hurwitz zeta")
    if abs(s - 1.0) < _INT_TOL:
        raise PoleAt1("Hurwitz zeta has a simple pole at s = 1")
    if nterms is None:
        nterms = int(max(16.0, 1.5 * abs(s.imag), 2.0 * abs(s.real))) + 8
    N = nterms
    n = np.arange(N)
    base = n[:, None] + w[None, :]
    head = np.sum(np.exp(-s * np.log(base)), axis=0)
    c = N + w
    logc = np.log(c)
    out = head + np.exp((1.0 - s) * logc) / (s - 1.0) + 0.5 * np.exp(-s * logc)
    poch = s
    fact = 2.0
    for j in range(1, ncorr + 1):
        out = out + _BERNOULLI[j - 1] / fact * poch * np.exp((-s - 2 * j + 1) * logc)
        if j < ncorr:
            poch *= (s + 2 * j - 1) * (s + 2 * j)
            fact *= (2 * j + 1) * (2 * j + 2)
    return out


def osc_tail_vec(s, z, w_arr, kmax=12):
    """sum_{m>=0} z^m (m + w)^{-s} vectorized over w (|z| = 1, z != 1).

    Iterated summation by parts; valid once |w| is large compared to
    |s| + kmax (callers shift w accordingly).
    """
    w = np.asarray(w_arr, dtype=complex)
    m = np.arange(kmax + 1)
    v = np.exp(-s * np.log(m[:, None] + w[None, :]))
    r = z / (1.0 - z)
    out = np.zeros_like(w)
    coeff = 1.0 / (1.0 - z)
    for k in range(kmax):
        out = out + coeff * v[0]
        v = np.diff(v, axis=0)
        coeff *= r
    return out


def lerch_zeta_vec(s, a, w_arr):
    """zeta(s, a, w) for an array of w with Re w > 0 (continued in s)."""
    a = _phase_mod1(a)
    w = np.asarray(w_arr, dtype=complex)
    if a < _INT_TOL:
        return hurwitz_zeta_vec(s, w)
    s = complex(s)
    z = cmath.exp(2j * math.pi * a)
    r = 1.0 / abs(1.0 - z)
    n0 = int(max(24.0, 2.0 * abs(s), 1.2 * abs(s.imag), 2.0 * (16 + abs(s)) * r))
    n = np.arange(n0)
    head = np.sum(
        np.exp(2j * math.pi * a * n)[:, None] * np.exp(-s * np.log(n[:, None] + w[None, :])),
        axis=0,
    )
    return head + z**n0 * osc_tail_vec(s, z, w + n0)


def lerch_series(s, a, w, nterms=200000):
    """Direct partial sum of the defining series (test oracle; Re s > 1)."""
    s = complex(s)
    w = complex(w)
    a = _phase_mod1(a)
    if s.real <= 1.0:
        raise DomainError("defining series requires Re s > 1")
    n = np.arange(nterms)
    return complex(np.sum(np.exp(2j * math.pi * a * n) * np.exp(-s * np.log(n + w))))
