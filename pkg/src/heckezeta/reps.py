"""Finite-dimensional unitary representations of Hecke triangle groups.

A representation is specified by its images on the projective generators
S and T (and optionally on the reflection Q for billiard extensions).
Every element the operators use reaches chi through a stored word in
S, T, Q, so no word problem is ever solved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GroupMismatch, NotUnitary, QNotDefined, RelationViolated
from .groups import COFINITE_SMALL, THETA, HeckeGroup, element_families

_UNITARY_TOL = 1e-10
_RELATION_TOL = 1e-10
_EIG_TOL = 1e-8


def _is_unitary(M, tol=_UNITARY_TOL):
    d = M.shape[0]
    return np.linalg.norm(M @ M.conj().T - np.eye(d)) <= tol


def _mat_power(M, e):
    if e >= 0:
        return np.linalg.matrix_power(M, e)
    return np.linalg.matrix_power(M.conj().T, -e)  # unitary inverse


@dataclass
class UnitaryRep:
    """Unitary rep by generator images; image_Q optional (billiards)."""

    group: HeckeGroup
    dim: int
    image_S: np.ndarray
    image_T: np.ndarray
    image_Q: np.ndarray | None = None

    def image(self, sym):
        if sym == "S":
            return self.image_S
        if sym == "T":
            return self.image_T
        if sym == "Q":
            if self.image_Q is None:
                raise QNotDefined("representation does not define chi(Q)")
            return self.image_Q
        raise KeyError(sym)

    def of_word(self, word):
        """chi(g) for g given as a word ((sym, exponent), ...)."""
        out = np.eye(self.dim, dtype=complex)
        for sym, e in word:
            out = out @ _mat_power(self.image(sym), e)
        return out

    def of_letters(self, model, letters):
        """chi of a model word, multiplied in reversed (composition) order."""
        out = np.eye(self.dim, dtype=complex)
        for fam_idx, n in letters:
            fam = model.families[fam_idx]
            w = self.of_word(fam.prefix_word) @ _mat_power(self.of_word(fam.base_word), n)
            out = w @ out
        return out

    @property
    def has_Q(self):
        return self.image_Q is not None


def rep_from_generators(G: HeckeGroup, image_S, image_T, image_Q=None, tol=_RELATION_TOL):
    """Validate generator images against the group's relations.

    Checked relations: chi(S)^2 = 1 always; (chi(T) chi(S))^q = 1 for the
    cofinite class.  For chi(Q): chi(Q)^2 = 1, chi(Q) chi(S) chi(Q) =
    chi(S)^{-1}, and chi(Q) chi(T) chi(Q) = chi(S T^{-1} S^{-1}) (the
    relation Q T Q = S T^{-1} S^{-1} in PGL_2).
    """
    S = np.array(image_S, dtype=complex)
    T = np.array(image_T, dtype=complex)
    if S.shape != T.shape or S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise NotUnitary("generator images must be square matrices of equal size")
    d = S.shape[0]
    for name, M in (("S", S), ("T", T)):
        if not _is_unitary(M):
            raise NotUnitary(f"chi({name}) is not unitary to {_UNITARY_TOL}")
    eye = np.eye(d)
    worst = ("", 0.0)

    def check(name, M):
        nonlocal worst
        r = np.linalg.norm(M - eye)
        if r > worst[1]:
            worst = (name, r)
        return r

    check("chi(S)^2 = 1", S @ S)
    if G.group_class == COFINITE_SMALL:
        check(f"(chi(T) chi(S))^q = 1, q={G.q}", np.linalg.matrix_power(T @ S, G.q))
    Q = None
    if image_Q is not None:
        Q = np.array(image_Q, dtype=complex)
        if not _is_unitary(Q):
            raise NotUnitary("chi(Q) is not unitary")
        check("chi(Q)^2 = 1", Q @ Q)
        Sinv = S.conj().T
        Tinv = T.conj().T
        r = np.linalg.norm(Q @ S @ Q - Sinv)
        if r > worst[1]:
            worst = ("chi(Q) chi(S) chi(Q) = chi(S)^-1", r)
        r = np.linalg.norm(Q @ T @ Q - S @ Tinv @ Sinv)
        if r > worst[1]:
            worst = ("chi(Q) chi(T) chi(Q) = chi(S T^-1 S^-1)", r)
    if worst[1] > tol:
        raise RelationViolated(
            f"relation '{worst[0]}' violated with residual {worst[1]:.3e}",
            residual=worst[1],
        )
    return UnitaryRep(group=G, dim=d, image_S=S, image_T=T, image_Q=Q)


def trivial_rep(G: HeckeGroup, dim=1):
    eye = np.eye(dim, dtype=complex)
    return UnitaryRep(group=G, dim=dim, image_S=eye.copy(), image_T=eye.copy())


def onedim_rep(G: HeckeGroup, chi_T, chi_S=1.0, chi_Q=None):
    """One-dimensional rep; validates the class relations."""
    return rep_from_generators(
        G,
        [[complex(chi_S)]],
        [[complex(chi_T)]],
        None if chi_Q is None else [[complex(chi_Q)]],
    )


def random_onedim_rep(G: HeckeGroup, rng):
    """A random valid one-dimensional unitary rep.

    For lambda >= 2 (free product C2 * Z), chi(T) is a free phase.  For the
    cofinite class the characters form C2 x Cq: chi(S) = +-1 and
    chi(T) chi(S) a q-th root of unity.
    """
    chi_S = rng.choice([1.0, -1.0])
    if G.group_class == COFINITE_SMALL:
        j = int(rng.integers(G.q))
        omega = np.exp(2.0 * math.pi * 1j * j / G.q)
        chi_T = omega / chi_S
    else:
        theta = rng.uniform(0.0, 2.0 * math.pi)
        chi_T = np.exp(1j * theta)
    return onedim_rep(G, chi_T, chi_S)


def sd(rep: UnitaryRep):
    """Degree of singularity: max over cusps of dim ker(chi(P) - 1).

    For lambda != 2 the only cusp is infinity with stabilizer T; for the
    Theta group the second cusp -1 has stabilizer P_{-1} = T^{-1} S (the
    element printed as [[2,1],[-1,0]]).
    """
    def fixdim(M):
        eig = np.linalg.eigvals(M)
        return int(np.sum(np.abs(eig - 1.0) < _EIG_TOL))

    out = fixdim(rep.image_T)
    if rep.group.group_class == THETA:
        P_minus1 = rep.of_word((("T", -1), ("S", 1)))
        out = max(out, fixdim(P_minus1))
    return out


def is_regular(rep: UnitaryRep):
    return sd(rep) == 0


def direct_sum(rep1: UnitaryRep, rep2: UnitaryRep):
    if rep1.group != rep2.group:
        raise GroupMismatch("direct sum requires the same underlying group")
    d1, d2 = rep1.dim, rep2.dim

    def blockdiag(A, B):
        out = np.zeros((d1 + d2, d1 + d2), dtype=complex)
        out[:d1, :d1] = A
        out[d1:, d1:] = B
        return out

    Q = None
    if rep1.has_Q and rep2.has_Q:
        Q = blockdiag(rep1.image_Q, rep2.image_Q)
    return UnitaryRep(
        group=rep1.group,
        dim=d1 + d2,
        image_S=blockdiag(rep1.image_S, rep2.image_S),
        image_T=blockdiag(rep1.image_T, rep2.image_T),
        image_Q=Q,
    )


def family_image(rep: UnitaryRep, name):
    """chi on a named element family member (see groups.element_families)."""
    fam = element_families(rep.group)
    return rep.of_word(fam.word(name))
