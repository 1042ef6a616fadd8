"""Symbolic slow and fast transfer operators as block term lists.

A TransferOperator is a grid of blocks over domains; block (i, j) holds
the terms mapping functions on domain j to functions on domain i.  A
FiniteTerm g contributes  f |-> j_s(g^{-1}, x) chi(g) f(g^{-1}.x);  a
TailTerm contributes the parabolic family  sum_{n>=1}  of the same with
g = prefix * base^n  (prefix = Q for billiard reflections, else absent).

Fast operators for lambda < 2 are built in coordinates conjugated by
calT = 2^{-1/2}[[1,-1],[1,1]] (elements h_k, weights eta(h_k) = chi(g_k)),
which keeps all domains bounded; chi always receives words in S, T, Q, so
the stored words refer to the unconjugated elements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .domains import Domain, disc, disc_center_radius, interval, mobius_disc_image, mobius_inv
from .errors import ContractionViolated, DiscSearchFailed, QEvenUnsupported, QNotDefined
from .groups import (
    COFINITE_SMALL,
    NONCOFINITE,
    THETA,
    WORD_Q,
    HeckeGroup,
    element_families,
    hecke_group,
)
from .moebius import INF, GroupElement
from .reps import UnitaryRep


@dataclass(frozen=True)
class FiniteTerm:
    g: GroupElement
    word: tuple

    @property
    def is_tail(self):
        return False


@dataclass(frozen=True)
class TailTerm:
    """sum over n >= 1 of the terms for prefix * base^n (base parabolic)."""

    base: GroupElement
    base_word: tuple
    prefix: GroupElement | None = None
    prefix_word: tuple = ()

    @property
    def is_tail(self):
        return True

    def element(self, n):
        g = self.base.power(n)
        if self.prefix is not None:
            g = self.prefix * g
        return g

    def pull_affine(self):
        """(A0, A1) with (prefix*base^n)^{-1} = A0 + n*A1 as raw matrices."""
        m = np.array(self.base.m, dtype=float)
        if m[0, 0] + m[1, 1] < 0:
            m = -m
        P = m - np.eye(2)
        pre_inv = np.eye(2) if self.prefix is None else np.array(self.prefix.inv().m)
        return pre_inv.copy(), (-P @ pre_inv)


@dataclass
class TransferOperator:
    group: HeckeGroup
    rep: UnitaryRep
    flavor: str                      # 'slow' | 'fast' | 'billiard-slow' | 'billiard-fast'
    domains: tuple
    blocks: dict                     # (i, j) -> list of terms
    conjugated: bool = False         # lambda < 2 fast: calT-coordinates
    intervals: tuple = ()            # symbolic interval of each domain (real trace)
    meta: dict = field(default_factory=dict)

    @property
    def nblocks(self):
        return len(self.domains)

    def terms(self, i, j):
        return self.blocks.get((i, j), [])

    def zero_pattern(self):
        n = self.nblocks
        return np.array(
            [[1 if self.blocks.get((i, j)) else 0 for j in range(n)] for i in range(n)]
        )


# ----------------------------------------------------------------------
# Slow operators
# ----------------------------------------------------------------------


def build_slow(G: HeckeGroup, rep: UnitaryRep) -> TransferOperator:
    """The slow transfer operator of the group's class.

    lambda < 2: single block sum_{k=1}^{q-1} alpha_s(g_k) on (0, inf).
    theta: the full 3x3 system on (-1,inf), (-inf,1), (0,inf).
    lambda > 2: the 2x2 system on (-1,inf), (-inf,1).
    """
    fam = element_families(G)
    if G.group_class == COFINITE_SMALL:
        doms = (interval(0.0, INF),)
        terms = [FiniteTerm(fam[f"g{k}"], fam.word(f"g{k}")) for k in range(1, G.q)]
        blocks = {(0, 0): terms}
        ivs = ((0.0, INF),)
    elif G.group_class == THETA:
        doms = (interval(-1.0, INF), interval(-INF, 1.0), interval(0.0, INF))
        k1, k2, k3, k4 = (fam[n] for n in ("k1", "k2", "k3", "k4"))
        w = fam.word
        blocks = {
            (0, 0): [FiniteTerm(k2, w("k2"))],
            (0, 2): [FiniteTerm(k1.inv(), _winv(w("k1")))],
            (1, 1): [FiniteTerm(k3, w("k3"))],
            (1, 2): [FiniteTerm(k3, w("k3"))],
            (2, 0): [FiniteTerm(GroupElement.identity(), ())],
            (2, 1): [FiniteTerm(k4, w("k4"))],
        }
        ivs = ((-1.0, INF), (-INF, 1.0), (0.0, INF))
    else:
        return build_slow_pair(G.lam, rep)
    return TransferOperator(G, rep, "slow", doms, blocks, intervals=ivs)


def build_slow_pair(lam, rep: UnitaryRep) -> TransferOperator:
    """The two-component slow operator on (-1,inf) x (-inf,1), lambda >= 2.

    For lambda = 2 this is the reduced Theta system (a_i(2) = k_i); for
    lambda > 2 it is the non-cofinite slow system.  The same builder is
    used for the lambda -> 2 convergence study.
    """
    G = rep.group
    if abs(G.lam - lam) > 1e-12:
        raise ValueError("rep group lambda mismatch")
    fam = element_families(G)
    key = "k" if G.group_class == THETA else "a"
    a1, a2, a3 = fam[f"{key}1"], fam[f"{key}2"], fam[f"{key}3"]
    w1, w2, w3 = fam.word(f"{key}1"), fam.word(f"{key}2"), fam.word(f"{key}3")
    doms = (interval(-1.0, INF), interval(-INF, 1.0))
    blocks = {
        (0, 0): [FiniteTerm(a2, w2), FiniteTerm(a1.inv(), _winv(w1))],
        (0, 1): [FiniteTerm(a2, w2)],
        (1, 0): [FiniteTerm(a3, w3)],
        (1, 1): [FiniteTerm(a1, w1), FiniteTerm(a3, w3)],
    }
    flavor = "slow-reduced" if G.group_class == THETA else "slow"
    return TransferOperator(G, rep, flavor, doms, blocks, intervals=((-1.0, INF), (-INF, 1.0)))


def build_theta_reduced_slow(G: HeckeGroup, rep: UnitaryRep) -> TransferOperator:
    if G.group_class != THETA:
        raise ValueError("reduced system is a Theta-group construction")
    return build_slow_pair(2.0, rep)


def _winv(word):
    return tuple((sym, -e) for sym, e in reversed(word))


# ----------------------------------------------------------------------
# Discs
# ----------------------------------------------------------------------

_DISC_CACHE = {}


def construct_discs(G: HeckeGroup):
    """Block domains of the fast system.

    theta / lambda > 2: the explicit discs; lambda < 2: discs found by a
    parametrized search and certified against the containment,
    derivative, and real-part conditions.
    """
    key = round(G.lam, 12)
    if key in _DISC_CACHE:
        return _DISC_CACHE[key]
    if G.group_class == THETA:
        out = (
            disc(-1.5, 0.5),
            disc(-0.5, 2.5),
            disc(0.0, -10.0),
            disc(10.0, 0.0),
            disc(-2.5, 0.5),
            disc(-0.5, 1.5),
        )
    elif G.group_class == NONCOFINITE:
        lam = G.lam
        d1 = disc(-1.0, 1.0)
        d2 = disc((5.0 * lam - 4.0) / 6.0, -lam / 2.0)
        d3 = disc(lam / 2.0, (4.0 - 5.0 * lam) / 6.0)
        out = (d1, d2, d3, d1)
    else:
        out = _search_cofinite_discs(G)
    _DISC_CACHE[key] = out
    return out


def fast_intervals(G: HeckeGroup):
    """Real trace intervals of the fast blocks (the sets the dynamics lives on)."""
    lam = G.lam
    if G.group_class == COFINITE_SMALL:
        e = (lam - 1.0) / (lam + 1.0)
        if G.q == 3:
            return ((e, 1.0), (-1.0, -e))
        return ((e, 1.0), (-e, e), (-1.0, -e))
    if G.group_class == THETA:
        return ((-1.0, 0.0), (0.0, 1.0), (1.0, INF), (-INF, -1.0), (-1.0, 0.0), (0.0, 1.0))
    return ((-1.0, 1.0), (-1.0 + lam, INF), (-INF, 1.0 - lam), (-1.0, 1.0))


def _cofinite_margins(G, params, nmax=48):
    """Signed margins of the disc conditions for lambda < 2.

    params = (c1, r1, rr); E_1 = disc(c1, r1), E_{q-1} its mirror, E_r
    centered at 0 with radius rr (the mirror symmetry realizes the
    J-invariance condition exactly).
    """
    lam, q = G.lam, G.q
    e = (lam - 1.0) / (lam + 1.0)
    if q == 3:
        c1, r1 = params
        rr = 0.5
    else:
        c1, r1, rr = params
    if r1 <= 0 or (q > 3 and rr <= 0):
        return [("positivity", -1.0)]
    E1 = disc_center_radius(c1, r1)
    Eq = disc_center_radius(-c1, r1)
    Er = disc_center_radius(0.0, rr) if q > 3 else None
    fam = element_families(G)
    h1_inv = np.array(fam["h1"].inv().m)
    hq_inv = np.array(fam[f"h{q-1}"].inv().m)
    margins = []
    # (i) closed intervals inside the discs
    margins.append(("interval E1", r1 - max(abs(c1 - e), abs(c1 - 1.0))))
    margins.append(("interval Eq", r1 - max(abs(-c1 + e), abs(-c1 + 1.0))))
    if q > 3:
        margins.append(("interval Er", rr - e))
    # (iii) middle letters map everything into E_r
    if q > 3:
        for k in range(2, q - 1):
            hk_inv = np.array(fam[f"h{k}"].inv().m)
            for nm, dom in (("E1", E1), ("Er", Er), ("Eq", Eq)):
                img = mobius_disc_image(hk_inv, dom)
                margins.append((f"h{k}^-1.{nm} in Er", Er.contains_disc(img)))
    # (iv)/(v) parabolic tails; images shrink toward the fixed points +-1
    tail_specs = [("h1", h1_inv, E1, [Eq] + ([Er] if q > 3 else []))]
    tail_specs.append((f"h{q-1}", hq_inv, Eq, [E1] + ([Er] if q > 3 else [])))
    for name, hinv, target, sources in tail_specs:
        P = hinv - np.eye(2)  # hinv is parabolic with trace +2 after normalization
        if abs(np.trace(hinv) - 2.0) > 1e-9:
            P = -hinv - np.eye(2)
        for src in sources:
            worst = math.inf
            for n in range(1, nmax + 1):
                img = mobius_disc_image(np.eye(2) + n * P, src)
                worst = min(worst, target.contains_disc(img))
            # n > nmax: image inside ball(fix, sup|z-fix| / (n kappa_min - 1))
            fix = P[0, 0] / P[1, 0] if abs(P[1, 0]) > 1e-14 else P[0, 1] / P[1, 1]
            zs = src.boundary_points(90)
            kap = np.abs(P[1, 0] * zs + P[1, 1])
            cnu = np.max(np.abs(zs - fix))
            kmin = np.min(kap)
            if (nmax + 1) * kmin <= 1.0:
                worst = min(worst, -1.0)
            else:
                rad = cnu / ((nmax + 1) * kmin - 1.0)
                ball = disc_center_radius(fix, rad)
                worst = min(worst, target.contains_disc(ball))
            margins.append((f"{name}-tail {src.a:.3f}.. in target", worst))
    # (vi)/(vii) |(h^{-1})'| < 1 on the expanding-side discs
    for name, hinv, dom in (("h1", h1_inv, E1), (f"h{q-1}", hq_inv, Eq)):
        c, d = hinv[1, 0], hinv[1, 1]
        m = abs(c * dom.center + d) - abs(c) * dom.radius
        margins.append((f"|({name}^-1)'| < 1", m - 1.0))
    # (viii)-(x) real parts
    margins.append(("Re > -1 on E1", (c1 - r1) + 1.0))
    margins.append(("Re < 1 on Eq", 1.0 - (-c1 + r1)))
    if q > 3:
        margins.append(("|Re| < 1 on Er", 1.0 - rr))
    return margins


def _search_cofinite_discs(G):
    lam, q = G.lam, G.q
    e = (lam - 1.0) / (lam + 1.0)

    def score(p):
        try:
            return -min(m for _, m in _cofinite_margins(G, p))
        except Exception:
            return 1.0

    best = None
    for c1 in np.linspace((e + 1) / 2 - 0.2, (e + 1) / 2 + 0.2, 5):
        for r1 in np.linspace(0.6 * (1 - e), 1.8 * (1 - e), 7):
            for rr in np.linspace(e + 0.05, 0.95, 6) if q > 3 else [None]:
                p = (c1, r1) if q == 3 else (c1, r1, rr)
                sc = score(p)
                if best is None or sc < best[0]:
                    best = (sc, p)
    res = optimize.minimize(score, best[1], method="Nelder-Mead",
                            options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 2000})
    p = res.x
    margins = _cofinite_margins(G, p)
    worst = min(margins, key=lambda t: t[1])
    if worst[1] < 1e-3:
        raise DiscSearchFailed(f"q={q}: worst condition {worst[0]} margin {worst[1]:.2e}")
    c1, r1 = p[0], p[1]
    E1 = disc_center_radius(c1, r1)
    Eq = disc_center_radius(-c1, r1)
    if q == 3:
        return (E1, Eq)
    return (E1, disc_center_radius(0.0, p[2]), Eq)


# ----------------------------------------------------------------------
# Fast operators
# ----------------------------------------------------------------------


def build_fast(G: HeckeGroup, rep: UnitaryRep) -> TransferOperator:
    """The fast (infinite-alphabet) transfer operator on disc domains."""
    fam = element_families(G)
    w = fam.word
    if G.group_class == COFINITE_SMALL:
        doms = construct_discs(G)
        q = G.q
        t1 = TailTerm(fam["h1"], w("g1"))
        tq = TailTerm(fam[f"h{q-1}"], w(f"g{q-1}"))
        if q == 3:
            blocks = {(0, 1): [tq], (1, 0): [t1]}
        else:
            mids = [FiniteTerm(fam[f"h{k}"], w(f"g{k}")) for k in range(2, q - 1)]
            blocks = {
                (0, 1): list(mids),
                (0, 2): [tq],
                (1, 0): [t1],
                (1, 1): list(mids),
                (1, 2): [tq],
                (2, 0): [t1],
                (2, 1): list(mids),
            }
        return TransferOperator(
            G, rep, "fast", doms, blocks, conjugated=True, intervals=fast_intervals(G)
        )
    if G.group_class == THETA:
        doms = construct_discs(G)
        k1, k2, k3 = fam["k1"], fam["k2"], fam["k3"]
        t_k2 = TailTerm(k2, w("k2"))
        t_k3 = TailTerm(k3, w("k3"))
        t_k1m = TailTerm(k1.inv(), _winv(w("k1")))
        t_k1p = TailTerm(k1, w("k1"))
        f_k2 = FiniteTerm(k2, w("k2"))
        f_k3 = FiniteTerm(k3, w("k3"))
        blocks = {
            (0, 2): [t_k1m], (0, 4): [f_k2],
            (1, 0): [t_k2], (1, 2): [t_k1m], (1, 4): [f_k2],
            (2, 0): [t_k2], (2, 4): [f_k2],
            (3, 1): [f_k3], (3, 5): [t_k3],
            (4, 1): [f_k3], (4, 3): [t_k1p], (4, 5): [t_k3],
            (5, 1): [f_k3], (5, 3): [t_k1p],
        }
        return TransferOperator(G, rep, "fast", doms, blocks, intervals=fast_intervals(G))
    doms = construct_discs(G)
    a1, a2, a3 = fam["a1"], fam["a2"], fam["a3"]
    f2, f3 = FiniteTerm(a2, w("a2")), FiniteTerm(a3, w("a3"))
    blocks = {
        (0, 0): [f2], (0, 1): [TailTerm(a1.inv(), _winv(w("a1")))], (0, 3): [f2],
        (1, 0): [f2], (1, 3): [f2],
        (2, 0): [f3], (2, 3): [f3],
        (3, 0): [f3], (3, 2): [TailTerm(a1, w("a1"))], (3, 3): [f3],
    }
    return TransferOperator(G, rep, "fast", doms, blocks, intervals=fast_intervals(G))


def build_billiard(G: HeckeGroup, rep: UnitaryRep):
    """Slow and fast transfer operators of the billiard flow (q odd).

    Requires chi(Q).  Slow:  sum_{k=m}^{q-1} alpha_s(g_k) + alpha_s(Q g_k)
    on (0,1), m = (q+1)/2.  Fast: the 2x2 operator on the calT^{-1}-images
    of the lambda < 2 discs, with Q-companion terms (det -1).
    """
    if G.group_class != COFINITE_SMALL:
        raise QEvenUnsupported("billiard operators are built for lambda < 2")
    if G.q % 2 == 0:
        raise QEvenUnsupported("q even needs the averaged cross section (out of scope)")
    if not rep.has_Q:
        raise QNotDefined("billiard operators need chi(Q)")
    fam = element_families(G)
    q = G.q
    m0 = (q + 1) // 2
    Q = GroupElement(0.0, 1.0, 1.0, 0.0)

    slow_terms = []
    for k in range(m0, q):
        gk, wk = fam[f"g{k}"], fam.word(f"g{k}")
        slow_terms.append(FiniteTerm(gk, wk))
        slow_terms.append(FiniteTerm(Q * gk, WORD_Q + wk))
    slow = TransferOperator(
        G, rep, "billiard-slow", (interval(0.0, 1.0),), {(0, 0): slow_terms},
        intervals=((0.0, 1.0),),
    )

    discs = construct_discs(G)
    E1, Eq = discs[0], discs[-1]
    Er = discs[1] if q > 3 else None
    calT_inv = np.array(element_families(G)["calT"].inv().m)
    d1 = mobius_disc_image(calT_inv, Eq)   # contains (0, 1/lambda)
    d2 = mobius_disc_image(calT_inv, Er) if q > 3 else None
    gq, wq = fam[f"g{q-1}"], fam.word(f"g{q-1}")
    t_plain = TailTerm(gq, wq)
    t_q = TailTerm(gq, wq, prefix=Q, prefix_word=WORD_Q)
    blocks = {(0, 0): [t_q], (1, 0): [t_plain, t_q]}
    doms = [d1]
    ivs = [(0.0, 1.0 / G.lam)]
    if q > 3:
        mids = []
        for k in range(m0, q - 1):
            gk, wk = fam[f"g{k}"], fam.word(f"g{k}")
            mids.append(FiniteTerm(gk, wk))
            mids.append(FiniteTerm(Q * gk, WORD_Q + wk))
        blocks[(0, 1)] = list(mids)
        blocks[(1, 1)] = list(mids)
        doms.append(d2)
        ivs.append((1.0 / G.lam, 1.0))
    fast = TransferOperator(
        G, rep, "billiard-fast", tuple(doms), blocks, intervals=tuple(ivs)
    )
    return slow, fast


# ----------------------------------------------------------------------
# Certification
# ----------------------------------------------------------------------


def certify_contraction(op: TransferOperator, samples=360, nmax=64, margin=1e-3):
    """Check that every term pulls the closure of its target domain
    strictly inside its source domain, on `samples` boundary points, with
    the stated margin; parabolic tails are checked for n <= nmax plus an
    asymptotic ball bound.  Also checks the Lerch-argument positivity
    1 + w(u) > 0 on tail blocks.  Returns a report dict; raises
    ContractionViolated on failure.
    """
    report = {"worst": math.inf, "checks": []}

    def note(name, m):
        report["checks"].append((name, float(m)))
        report["worst"] = min(report["worst"], float(m))

    # the symbolic interval of each block must lie inside its disc
    for idx, dom in enumerate(op.domains):
        if dom.kind != "disc" or not op.intervals:
            continue
        lo, hi = op.intervals[idx]
        pts = []
        if lo == -INF or hi == INF:
            if not dom.contains_inf:
                note(f"interval {idx} in disc", -1.0)
                continue
            anchor = hi if lo == -INF else lo
            sgn = -1.0 if lo == -INF else 1.0
            pts = [anchor + sgn * t for t in (0.0, 1.0, 10.0, 1e3, 1e6)]
        else:
            pts = list(np.linspace(lo, hi, 9))
        if dom.contains_inf:
            m = min(abs(x - dom.center) - dom.radius for x in pts)
        else:
            m = min(dom.radius - abs(x - dom.center) for x in pts)
        note(f"interval {idx} in disc", m)

    for (i, j), terms in op.blocks.items():
        tgt, src = op.domains[i], op.domains[j]
        if tgt.kind != "disc":
            continue
        zs = tgt.boundary_points(samples)
        for term in terms:
            if not term.is_tail:
                pull = np.array(term.g.inv().m)
                note(f"({i},{j}) {term.word}", _containment_margin(pull, zs, src))
            else:
                A0, A1 = term.pull_affine()
                worst = math.inf
                for n in range(1, nmax + 1):
                    worst = min(worst, _containment_margin(A0 + n * A1, zs, src))
                # asymptotic: pulled points approach the fixed point of base
                col = A1[:, 0] if abs(A1[1, 0]) > abs(A1[1, 1]) else A1[:, 1]
                uf = col[0] / col[1]
                kap = A1[1, 0] * zs + A1[1, 1]
                bet = A0[1, 0] * zs + A0[1, 1]
                nu = (A0[0, 0] - uf * A0[1, 0]) * zs + (A0[0, 1] - uf * A0[1, 1])
                wv = bet / kap
                nlim = nmax + 1
                # |n + w| >= n + Re w for all n >= nlim once nlim + Re w > 0
                ren = nlim + np.real(wv)
                if np.min(ren) <= 0.0:
                    worst = -1.0
                else:
                    rad = np.max(np.abs(nu / kap) / ren)
                    ball = disc_center_radius(uf, rad)
                    worst = min(worst, src.contains_disc(ball))
                note(f"({i},{j}) tail {term.base_word}", worst)
                # Lerch argument positivity on the real trace and boundary
                phi_i = op.domains[i].chart()
                phi_j_inv = mobius_inv(op.domains[j].chart())
                B0 = phi_j_inv @ A0 @ phi_i
                B1 = phi_j_inv @ A1 @ phi_i
                u = np.cos(np.pi * (np.arange(samples) + 0.5) / samples)
                kapu = B1[1, 0] * u + B1[1, 1]
                wu = (B0[1, 0] * u + B0[1, 1]) / kapu
                note(f"({i},{j}) lerch 1+w>0", float(np.min(1.0 + wu)))
                note(f"({i},{j}) kappa != 0", float(np.min(np.abs(kapu))))
    if report["worst"] < margin:
        bad = min(report["checks"], key=lambda t: t[1])
        raise ContractionViolated(
            f"{op.flavor} operator: check '{bad[0]}' margin {bad[1]:.3e} < {margin}"
        )
    return report


def _containment_margin(pull, zs, src: Domain):
    den = pull[1, 0] * zs + pull[1, 1]
    if np.min(np.abs(den)) < 1e-14:
        return -1.0
    img = (pull[0, 0] * zs + pull[0, 1]) / den
    dist = np.abs(img - src.center)
    if src.contains_inf:
        return float(np.min(dist) - src.radius)
    return float(src.radius - np.max(dist))
