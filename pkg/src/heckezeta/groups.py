"""Hecke triangle groups, named element families, and regular-word combinatorics.

The fast transfer operators are indexed by countable alphabets of group
elements (parabolic powers plus finitely many single letters).  Periodic
orbits of the fast systems correspond to cyclically admissible words over
these alphabets; conjugacy classes of hyperbolic elements correspond to
such words up to rotation, with primitive classes corresponding to
aperiodic words.  This module builds the alphabets for the three group
classes and enumerates words / conjugacy classes below a norm cutoff with
certified pruning.

Word convention: a word is a tuple of (family_index, power) letters in
time order; its matrix is the reversed product  L(l_k) @ ... @ L(l_1),
matching composition of the transfer-operator terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceeded, NotFuchsian, QEvenUnsupported
from .moebius import EPS_CLS, INF, GroupElement, apply

_Q_SCAN_MAX = 10**6
_LAMBDA_MATCH_TOL = 1e-12

COFINITE_SMALL = "cofinite_small"
THETA = "theta"
NONCOFINITE = "noncofinite"

# S/T/Q words are tuples of (symbol, integer exponent)
WORD_S = (("S", 1),)
WORD_T = (("T", 1),)
WORD_Q = (("Q", 1),)


def _word_inv(word):
    return tuple((sym, -e) for sym, e in reversed(word))


def _word_pow(word, k):
    if k >= 0:
        return word * k
    return _word_inv(word) * (-k)


@dataclass(frozen=True)
class HeckeGroup:
    lam: float
    q: int | None
    group_class: str
    S: GroupElement
    T: GroupElement
    delta_hint: float | None = None

    def __repr__(self):
        tag = f"q={self.q}" if self.q is not None else f"lambda={self.lam:.6g}"
        return f"HeckeGroup({tag}, {self.group_class})"


def hecke_group(q=None, lam=None, delta_hint=None):
    """Construct the Hecke triangle group from q >= 3 or lambda > 0.

    lambda < 2 must match 2*cos(pi/q) for some q (Fuchsian condition).
    """
    if (q is None) == (lam is None):
        raise ValueError("specify exactly one of q, lam")
    if q is not None:
        if q < 3 or int(q) != q:
            raise NotFuchsian(f"q must be an integer >= 3, got {q}")
        q = int(q)
        lam = 2.0 * math.cos(math.pi / q)
    else:
        lam = float(lam)
        if lam <= 0:
            raise NotFuchsian("lambda must be positive")
        if lam < 2.0:
            qf = math.pi / math.acos(lam / 2.0)
            q = int(round(qf))
            if q < 3 or q > _Q_SCAN_MAX or abs(lam - 2.0 * math.cos(math.pi / q)) > _LAMBDA_MATCH_TOL:
                raise NotFuchsian(f"lambda = {lam} < 2 is not 2*cos(pi/q) for q <= {_Q_SCAN_MAX}")
            lam = 2.0 * math.cos(math.pi / q)
        else:
            q = None
    if lam < 2.0 - 1e-15:
        cls = COFINITE_SMALL
    elif abs(lam - 2.0) <= 1e-12:
        cls = THETA
        lam = 2.0
    else:
        cls = NONCOFINITE
    S = GroupElement(0.0, 1.0, -1.0, 0.0)
    T = GroupElement(1.0, lam, 0.0, 1.0)
    return HeckeGroup(lam=lam, q=q, group_class=cls, S=S, T=T, delta_hint=delta_hint)


def conjugator_calT():
    """The conjugation element T_cal = 2^{-1/2} [[1,-1],[1,1]] used for lambda < 2."""
    return GroupElement(1.0, -1.0, 1.0, 1.0)


@dataclass(frozen=True)
class Families:
    """Named element families of a Hecke group, with S/T/Q words."""

    elements: dict
    words: dict

    def __getitem__(self, name):
        return self.elements[name]

    def word(self, name):
        return self.words[name]


def element_families(G: HeckeGroup) -> Families:
    """The element families behind slow and fast systems.

    cofinite (lambda < 2): g1..g_{q-1} with g_k = ((T S)^k S)^{-1}, their
    conjugates h_k = calT g_k calT^{-1}, and calT itself.
    theta: k1 = T, k2 = T^{-1} S, k3 = T S, k4 = S.
    noncofinite: a1 = T, a2 = T^{-1} S, a3 = T S.
    """
    S, T = G.S, G.T
    elements = {"S": S, "T": T}
    words = {"S": WORD_S, "T": WORD_T}
    if G.group_class == COFINITE_SMALL:
        R = T * S
        calT = conjugator_calT()
        calT_inv = calT.inv()
        for k in range(1, G.q):
            gk = (R.power(k) * S).inv()
            elements[f"g{k}"] = gk
            # ((TS)^k S)^{-1} = S^{-1} (S^{-1} T^{-1})^k
            words[f"g{k}"] = (("S", -1),) + (("S", -1), ("T", -1)) * k
            elements[f"h{k}"] = calT * gk * calT_inv
            words[f"h{k}"] = words[f"g{k}"]
        elements["calT"] = calT
    elif G.group_class == THETA:
        elements["k1"] = T
        elements["k2"] = T.inv() * S
        elements["k3"] = T * S
        elements["k4"] = S
        words["k1"] = WORD_T
        words["k2"] = (("T", -1), ("S", 1))
        words["k3"] = (("T", 1), ("S", 1))
        words["k4"] = WORD_S
    else:
        elements["a1"] = T
        elements["a2"] = T.inv() * S
        elements["a3"] = T * S
        words["a1"] = WORD_T
        words["a2"] = (("T", -1), ("S", 1))
        words["a3"] = (("T", 1), ("S", 1))
    return Families(elements=elements, words=words)


# ----------------------------------------------------------------------
# Word models
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class LetterFamily:
    index: int
    name: str
    parabolic: bool           # powers range over all of N
    can_start: bool           # allowed as first letter of a canonical rotation
    src: int                  # source symbolic domain
    targets: frozenset        # domains covered by the image interval
    base: GroupElement        # power-1 element of the family
    base_word: tuple
    prefix: GroupElement | None = None
    prefix_word: tuple = ()
    det_sign: int = 1


class WordModel:
    """Alphabet + adjacency + pruning data for one fast system.

    kind = 'trace': lambda < 2 alphabet; all letter matrices are sign-
    normalized to entrywise-nonnegative with diagonal >= 1 after
    conjugation by diag(1, -1), so appending letters never decreases the
    trace.  Pruning is by the trace bound.

    kind = 'path': Markov path model (theta, noncofinite, billiard);
    pruning is by products of per-cylinder infima of |branch'|, a
    certified lower bound for the norm of any completion.
    """

    def __init__(self, group, kind, families, pieces=None, pos_check=True):
        self.group = group
        self.kind = kind
        self.families = families
        self._pieces = pieces
        self._mat_cache = {}
        self._nil = {}
        self._single = {}
        for fam in families:
            m = np.array(fam.base.m, dtype=float)
            if fam.parabolic:
                if m[0, 0] + m[1, 1] < 0:
                    m = -m
                P = m - np.eye(2)
                self._nil[fam.index] = P
            self._single[fam.index] = m
        if kind == "trace":
            D = np.diag([1.0, -1.0])
            self._pos = {}
            for fam in families:
                m = D @ self._single[fam.index] @ D
                if m[0, 0] + m[1, 1] < 0:
                    m = -m
                if pos_check:
                    if np.min(m) < -1e-12 or m[0, 0] < 1 - 1e-12 or m[1, 1] < 1 - 1e-12:
                        raise AssertionError(
                            f"letter {fam.name} not positivizable: {m.tolist()}"
                        )
                m = np.maximum(m, 0.0)
                if fam.parabolic:
                    self._pos[fam.index] = ("nil", m - np.eye(2))
                else:
                    self._pos[fam.index] = ("single", m)

    # -- matrices ------------------------------------------------------

    def letter_matrix(self, fam_idx, n):
        """Actual 2x2 matrix (ndarray) of the letter, prefix included."""
        key = (fam_idx, n)
        m = self._mat_cache.get(key)
        if m is None:
            fam = self.families[fam_idx]
            if fam.parabolic:
                m = np.eye(2) + n * self._nil[fam_idx]
            else:
                if n != 1:
                    raise ValueError("non-parabolic letters have power 1")
                m = self._single[fam_idx]
            if fam.prefix is not None:
                m = np.array(fam.prefix.m, dtype=float) @ m
            if len(self._mat_cache) < 200000:
                self._mat_cache[key] = m
        return m

    def pos_letter(self, fam_idx, n):
        kind, m = self._pos[fam_idx]
        if kind == "nil":
            return np.eye(2) + n * m
        return m

    def word_matrix(self, letters):
        """Reversed product of letter matrices (time order l1..lk)."""
        m = np.eye(2)
        for fam_idx, n in letters:
            m = self.letter_matrix(fam_idx, n) @ m
        return m

    def word_det_sign(self, letters):
        s = 1
        for fam_idx, _ in letters:
            s *= self.families[fam_idx].det_sign
        return s

    # -- pieces and expansion bounds (path kind) ------------------------

    def piece(self, fam_idx, n):
        lo, hi = self._pieces[fam_idx](n)
        if not lo < hi:
            raise AssertionError(f"empty piece for {self.families[fam_idx].name}, n={n}")
        return lo, hi

    def _inf_abs_der(self, mat, lo, hi):
        det = abs(mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0])
        c, d = mat[1, 0], mat[1, 1]
        m = max((c * lo + d) ** 2, (c * hi + d) ** 2)
        if m == 0.0:
            return 1.0
        return det / m * (1.0 - 1e-9)

    def piece_inf(self, fam_idx, n):
        lo, hi = self.piece(fam_idx, n)
        return self._inf_abs_der(self.letter_matrix(fam_idx, n), lo, hi)

    def cyl_inf(self, fam_idx, n, next_piece):
        """inf |branch'| over the cylinder {x in piece : branch(x) in next_piece}."""
        mat = self.letter_matrix(fam_idx, n)
        lo, hi = self.piece(fam_idx, n)
        a, b, c, d = mat[0, 0], mat[0, 1], mat[1, 0], mat[1, 1]
        y0, y1 = next_piece
        if c != 0.0:
            pole_img = a / c  # image of infinity = pole of the inverse
            if y0 < pole_img < y1:
                return self._inf_abs_der(mat, lo, hi)
        det = a * d - b * c
        # inverse matrix (projective): [[d, -b], [-c, a]]
        xs = sorted(((d * y - b) / (-c * y + a) for y in (y0, y1)))
        u = max(lo, xs[0])
        v = min(hi, xs[1])
        if not u <= v:
            # Markov property: cylinders of admissible pairs are nonempty;
            # fall back to the full piece if roundoff makes it look empty.
            u, v = lo, hi
        return self._inf_abs_der(mat, u, v)

    # -- adjacency -------------------------------------------------------

    def follows(self, prev_fam_idx, fam_idx):
        if self.kind == "trace":
            prev = self.families[prev_fam_idx]
            return not (prev.parabolic and prev_fam_idx == fam_idx)
        return self.families[fam_idx].src in self.families[prev_fam_idx].targets


@dataclass(frozen=True)
class Word:
    """A cyclically admissible (regular) word with cached invariants."""

    letters: tuple
    trace: float
    det_sign: int
    model: WordModel = field(compare=False, repr=False)

    @property
    def length(self):
        return len(self.letters)

    def matrix(self):
        return self.model.word_matrix(self.letters)

    def norm(self):
        t = abs(self.trace)
        if self.det_sign == 1:
            if t <= 2.0 + EPS_CLS:
                raise AssertionError(f"non-hyperbolic word {self.letters}, trace {t}")
            half = (t + math.sqrt(t * t - 4.0)) / 2.0
        else:
            if t <= EPS_CLS:
                raise AssertionError(f"orientation-reversing involution {self.letters}")
            half = (t + math.sqrt(t * t + 4.0)) / 2.0
        return half * half

    def names(self):
        return tuple(
            (self.model.families[f].name, n) for f, n in self.letters
        )


def primitive_data(word: Word):
    """(primitive root, n(g), p(g), class multiplicity) of a regular word.

    n(g) is the repetition count of the shortest period, p(g) its length;
    the class multiplicity equals the number of distinct rotations, which
    is p(g) for words arising here.
    """
    letters = word.letters
    L = len(letters)
    p = L
    for cand in range(1, L):
        if L % cand == 0 and letters[:cand] * (L // cand) == letters:
            p = cand
            break
    n = L // p
    rotations = {letters[i:] + letters[:i] for i in range(L)}
    root = Word(
        letters=letters[:p],
        trace=float(np.trace(word.model.word_matrix(letters[:p]))),
        det_sign=word.model.word_det_sign(letters[:p]),
        model=word.model,
    )
    return root, n, p, len(rotations)


# ----------------------------------------------------------------------
# Model builders
# ----------------------------------------------------------------------

_MODEL_CACHE = {}


def word_model(G: HeckeGroup) -> WordModel:
    key = (round(G.lam, 12), "std")
    model = _MODEL_CACHE.get(key)
    if model is None:
        if G.group_class == COFINITE_SMALL:
            model = _cofinite_model(G)
        elif G.group_class == THETA:
            model = _theta_model(G)
        else:
            model = _noncofinite_model(G)
        _MODEL_CACHE[key] = model
    return model


def _cofinite_model(G):
    fam = element_families(G)
    q = G.q
    families = []
    idx = 0
    families.append(
        LetterFamily(idx, "g1", True, True, 0, frozenset(), fam["g1"], fam.word("g1"))
    )
    for k in range(2, q - 1):
        idx += 1
        families.append(
            LetterFamily(idx, f"g{k}", False, True, 0, frozenset(), fam[f"g{k}"], fam.word(f"g{k}"))
        )
    idx += 1
    families.append(
        LetterFamily(idx, f"g{q-1}", True, True, 0, frozenset(), fam[f"g{q-1}"], fam.word(f"g{q-1}"))
    )
    return WordModel(G, "trace", families)


def _parabolic_nil(base: GroupElement):
    """P with base^n = I + n P (sign-normalized parabolic base)."""
    m = np.array(base.m, dtype=float)
    if m[0, 0] + m[1, 1] < 0:
        m = -m
    return m - np.eye(2)


def _apply_affine_power(P, n, x):
    """(I + n P).x on P^1(R), exact in n for parabolic powers."""
    if x == INF:
        num = 1.0 + n * P[0, 0]
        den = n * P[1, 0]
    else:
        num = (1.0 + n * P[0, 0]) * x + n * P[0, 1]
        den = n * P[1, 0] * x + 1.0 + n * P[1, 1]
    if den == 0.0:
        return INF
    return num / den


def _theta_model(G):
    fam = element_families(G)
    k1, k2, k3 = fam["k1"], fam["k2"], fam["k3"]
    w1, w2, w3 = fam.word("k1"), fam.word("k2"), fam.word("k3")
    k1i = k1.inv()
    w1i = _word_inv(w1)
    P2 = _parabolic_nil(k2)
    P3 = _parabolic_nil(k3)

    def piece_pow(P, left_pt, n):
        # family pieces (base^{-(n+1)}.x0, base^{-n}.x0), sorted
        lo = _apply_affine_power(P, -(n + 1), left_pt)
        hi = _apply_affine_power(P, -n, left_pt)
        return (lo, hi) if lo < hi else (hi, lo)

    families = [
        LetterFamily(0, "k2^n", True, True, 1, frozenset({2, 3}), k2, w2),
        LetterFamily(1, "k3", False, True, 2, frozenset({4, 5, 6}), k3, w3),
        LetterFamily(2, "k1^-n", True, False, 3, frozenset({1, 2}), k1i, w1i),
        LetterFamily(3, "k1^n", True, False, 4, frozenset({5, 6}), k1, w1),
        LetterFamily(4, "k2", False, True, 5, frozenset({1, 2, 3}), k2, w2),
        LetterFamily(5, "k3^n", True, True, 6, frozenset({4, 5}), k3, w3),
    ]
    pieces = {
        0: lambda n: piece_pow(P2, INF, n),
        1: lambda n: (0.0, 1.0),
        2: lambda n: (2.0 * n - 1.0, 2.0 * n + 1.0),
        3: lambda n: (1.0 - 2.0 * (n + 1), 1.0 - 2.0 * n),
        4: lambda n: (-1.0, 0.0),
        5: lambda n: piece_pow(P3, INF, n),
    }
    return WordModel(G, "path", families, pieces=pieces)


def _noncofinite_model(G):
    fam = element_families(G)
    lam = G.lam
    a1, a2, a3 = fam["a1"], fam["a2"], fam["a3"]
    w1, w2, w3 = fam.word("a1"), fam.word("a2"), fam.word("a3")
    families = [
        LetterFamily(0, "a2@1", False, True, 1, frozenset({1, 2}), a2, w2),
        LetterFamily(1, "a3@1", False, True, 1, frozenset({3, 4}), a3, w3),
        LetterFamily(2, "a1^-n", True, False, 2, frozenset({1}), a1.inv(), _word_inv(w1)),
        LetterFamily(3, "a1^n", True, False, 3, frozenset({4}), a1, w1),
        LetterFamily(4, "a2@4", False, True, 4, frozenset({1, 2}), a2, w2),
        LetterFamily(5, "a3@4", False, True, 4, frozenset({3, 4}), a3, w3),
    ]
    pieces = {
        0: lambda n: (-1.0, 0.0),
        1: lambda n: (0.0, 1.0),
        2: lambda n: (-1.0 + n * lam, -1.0 + (n + 1) * lam),
        3: lambda n: (1.0 - (n + 1) * lam, 1.0 - n * lam),
        4: lambda n: (-1.0, 0.0),
        5: lambda n: (0.0, 1.0),
    }
    return WordModel(G, "path", families, pieces=pieces)


def billiard_word_model(G: HeckeGroup) -> WordModel:
    """Word model for the triangle-group extension (q odd, lambda < 2).

    Letters are g_{q-1}^n, Q g_{q-1}^n (source domain 1) and g_k, Q g_k
    for k = m..q-2 (source domain 2), m = (q+1)/2.  Pieces are derived by
    folding the lambda < 2 fast system at 1 via Q: the part of a branch
    image above 1 is reflected into (0, 1).
    """
    key = (round(G.lam, 12), "billiard")
    model = _MODEL_CACHE.get(key)
    if model is not None:
        return model
    if G.group_class != COFINITE_SMALL:
        raise QEvenUnsupported("billiard word model implemented for lambda < 2 only")
    if G.q % 2 == 0:
        raise QEvenUnsupported("q even requires the averaged section (out of scope)")
    fam = element_families(G)
    q = G.q
    m0 = (q + 1) // 2
    Q = GroupElement(0.0, 1.0, 1.0, 0.0)
    gq = fam[f"g{q-1}"]
    wq = fam.word(f"g{q-1}")
    Pq = _parabolic_nil(gq)

    families = []
    pieces = {}
    idx = 0

    def pow_piece(P, x0, x1):
        def f(n, P=P, x0=x0, x1=x1):
            lo = _apply_affine_power(P, -n, x0)
            hi = _apply_affine_power(P, -n, x1)
            return (lo, hi) if lo < hi else (hi, lo)

        return f

    families.append(
        LetterFamily(idx, f"g{q-1}^n", True, True, 1, frozenset({2}), gq, wq)
    )
    pieces[idx] = pow_piece(Pq, 1.0 / G.lam, 1.0)
    idx += 1
    families.append(
        LetterFamily(
            idx, f"Qg{q-1}^n", True, True, 1, frozenset({1, 2}), gq, wq,
            prefix=Q, prefix_word=WORD_Q, det_sign=-1,
        )
    )
    pieces[idx] = pow_piece(Pq, 1.0, INF)
    idx += 1
    for k in range(m0, q - 1):
        gk = fam[f"g{k}"]
        wk = fam.word(f"g{k}")
        gki = gk.inv()
        lo, hi = sorted((apply(gki, 0.0), apply(gki, 1.0)))
        families.append(
            LetterFamily(idx, f"g{k}", False, True, 2, frozenset({1, 2}), gk, wk)
        )
        pieces[idx] = (lambda n, lo=lo, hi=hi: (lo, hi))
        idx += 1
        lo2, hi2 = sorted((apply(gki, 1.0), apply(gki, INF)))
        families.append(
            LetterFamily(
                idx, f"Qg{k}", False, True, 2, frozenset({1, 2}), gk, wk,
                prefix=Q, prefix_word=WORD_Q, det_sign=-1,
            )
        )
        pieces[idx] = (lambda n, lo=lo2, hi=hi2: (lo, hi))
        idx += 1
    model = WordModel(G, "path", families, pieces=pieces)
    _MODEL_CACHE[key] = model
    return model


# ----------------------------------------------------------------------
# Enumeration
# ----------------------------------------------------------------------

_POWER_CAP = 10**7


def _valid_rotations(model, letters):
    rots = []
    L = len(letters)
    for i in range(L):
        rot = letters[i:] + letters[:i]
        if model.families[rot[0][0]].can_start:
            rots.append(rot)
    return rots


def is_canonical(model, letters):
    rots = _valid_rotations(model, letters)
    return bool(rots) and letters == min(rots)


def is_primitive(letters):
    L = len(letters)
    for cand in range(1, L):
        if L % cand == 0 and letters[:cand] * (L // cand) == letters:
            return False
    return True


def enumerate_words(
    model: WordModel,
    max_norm,
    max_len=None,
    budget=20_000_000,
    yield_mode="all",
):
    """DFS over regular words with N <= max_norm (and length <= max_len).

    yield_mode 'all' emits every cyclically admissible word; 'canonical'
    emits one lexicographically minimal rotation per aperiodic cyclic word
    (i.e. one representative per primitive conjugacy class).

    Returns (words, stats) where stats carries node counts and the data
    for certified truncation bounds.
    """
    if model.kind == "trace":
        return _enumerate_trace(model, max_norm, max_len, budget, yield_mode)
    return _enumerate_path(model, max_norm, max_len, budget, yield_mode)


def _emit(model, out, letters, mat, max_norm, max_len, yield_mode):
    first_fam = letters[0][0]
    last_fam = letters[-1][0]
    if not model.follows(last_fam, first_fam):
        return
    if max_len is not None and len(letters) > max_len:
        return
    if yield_mode == "canonical":
        if not (is_canonical(model, letters) and is_primitive(letters)):
            return
    t = mat[0, 0] + mat[1, 1]
    det_sign = model.word_det_sign(letters)
    ta = abs(t)
    if det_sign == 1 and ta <= 2.0 + EPS_CLS:
        raise AssertionError(f"non-hyperbolic admissible word {letters} (trace {t})")
    if det_sign == -1 and ta <= EPS_CLS:
        raise AssertionError(f"involution word {letters}")
    w = Word(letters=letters, trace=float(t), det_sign=det_sign, model=model)
    if w.norm() <= max_norm:
        out.append(w)


def _enumerate_trace(model, max_norm, max_len, budget, yield_mode):
    tmax = math.sqrt(max_norm) + 1.0 / math.sqrt(max_norm)
    fams = model.families
    nfam = len(fams)
    out = []
    stats = {"nodes": 0, "power_stops": []}
    pos1 = {f.index: model.pos_letter(f.index, 1) for f in fams}

    def min_follower_trace(child_pos, fam_idx):
        best = math.inf
        for f2 in fams:
            if not model.follows(fam_idx, f2.index):
                continue
            p = pos1[f2.index] @ child_pos
            best = min(best, p[0, 0] + p[1, 1])
        return best

    def rec(letters, mat, pos, depth, last_fam):
        stats["nodes"] += 1
        if stats["nodes"] > budget:
            raise BudgetExceeded(f"enumeration exceeded {budget} nodes")
        if max_len is not None and depth >= max_len:
            return
        for f in fams:
            if depth > 0 and not model.follows(last_fam, f.index):
                continue
            n = 1
            while True:
                child_pos = model.pos_letter(f.index, n) @ pos
                if depth == 0 and f.parabolic:
                    bound = min_follower_trace(child_pos, f.index)
                else:
                    bound = child_pos[0, 0] + child_pos[1, 1]
                if bound > tmax:
                    if f.parabolic:
                        stats["power_stops"].append((depth, f.index, n))
                    break
                child_mat = model.letter_matrix(f.index, n) @ mat
                child_letters = letters + ((f.index, n),)
                if not (depth == 0 and f.parabolic):
                    _emit(model, out, child_letters, child_mat, max_norm, max_len, yield_mode)
                rec(child_letters, child_mat, child_pos, depth + 1, f.index)
                if not f.parabolic:
                    break
                n += 1
                if n > _POWER_CAP:
                    raise BudgetExceeded("parabolic power cap hit")

    rec((), np.eye(2), np.eye(2), 0, None)
    return out, stats


def _enumerate_path(model, max_norm, max_len, budget, yield_mode):
    fams = model.families
    out = []
    stats = {"nodes": 0, "power_stops": []}

    def rec(letters, factors, mat, bound, depth, last):
        stats["nodes"] += 1
        if stats["nodes"] > budget:
            raise BudgetExceeded(f"enumeration exceeded {budget} nodes")
        if max_len is not None and depth >= max_len:
            return
        last_fam, last_n = last if last else (None, None)
        for f in fams:
            if depth == 0:
                if not f.can_start:
                    continue
            elif not model.follows(last_fam, f.index):
                continue
            n = 1
            prev_b = -math.inf
            exceed_run = 0
            while True:
                piece_n = model.piece(f.index, n)
                own = model.piece_inf(f.index, n)
                if depth == 0:
                    child_bound = own
                    new_factors = (own,)
                else:
                    refined = model.cyl_inf(last_fam, last_n, piece_n)
                    child_bound = bound / factors[-1] * refined * own
                    new_factors = factors[:-1] + (refined, own)
                if child_bound > max_norm:
                    # per-n pruning is exact; stop the power loop only once
                    # the bound is in its eventually-monotone growth regime
                    if not f.parabolic:
                        break
                    exceed_run = exceed_run + 1 if child_bound >= prev_b else 1
                    if exceed_run >= 2:
                        stats["power_stops"].append((depth, f.index, n))
                        break
                else:
                    exceed_run = 0
                    child_mat = model.letter_matrix(f.index, n) @ mat
                    child_letters = letters + ((f.index, n),)
                    _emit(model, out, child_letters, child_mat, max_norm, max_len, yield_mode)
                    rec(child_letters, new_factors, child_mat, child_bound, depth + 1, (f.index, n))
                prev_b = child_bound
                if not f.parabolic:
                    break
                n += 1
                if n > _POWER_CAP:
                    raise BudgetExceeded("parabolic power cap hit")

    rec((), (), np.eye(2), 1.0, 0, None)
    return out, stats


def enumerate_regular_words(G, max_word_length, max_norm, s_real_hint=None, budget=20_000_000):
    """The truncated sets P_n: regular words of length n <= max_word_length
    with N(word) <= max_norm, grouped by length.

    s_real_hint is accepted for interface compatibility; truncation is
    norm-driven and does not depend on it.
    """
    model = word_model(G)
    words, _ = enumerate_words(model, max_norm, max_len=max_word_length, budget=budget)
    grouped = {n: [] for n in range(1, max_word_length + 1)}
    for w in words:
        grouped[w.length].append(w)
    for n in grouped:
        grouped[n].sort(key=lambda w: w.letters)
    return grouped


def primitive_classes(model: WordModel, max_norm, budget=20_000_000):
    """One canonical representative per primitive conjugacy class with
    N <= max_norm (plus enumeration stats)."""
    words, stats = enumerate_words(
        model, max_norm, max_len=None, budget=budget, yield_mode="canonical"
    )
    words.sort(key=lambda w: (w.norm(), w.letters))
    return words, stats
