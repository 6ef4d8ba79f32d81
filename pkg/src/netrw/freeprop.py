"""Isomorphism classes of networks, the free PROP operations on them,
the symmetric join, annexation, free feedback, and formal linear
combinations with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .core import NEUTRAL, BoolMat, Perm, bm_blocks, bm_stack, same
from .network import (
    Edge,
    Network,
    canonical_code,
    from_code,
    perm_network,
    generator_network,
    smoothen,
    transference,
    act,
)


class ShapeError(ValueError):
    pass


class JoinUndefinedError(ValueError):
    def __init__(self, witness: str):
        super().__init__(f"symmetric join undefined: {witness}")
        self.witness = witness


class NetClass:
    """A canonical representative of a network isomorphism class."""

    __slots__ = ("code", "rep", "tr", "_hash")

    def __init__(self, code: tuple, rep: Network, tr: BoolMat):
        self.code = code
        self.rep = rep
        self.tr = tr
        self._hash = hash(code)

    @property
    def coarity(self) -> int:
        return self.rep.coarity

    @property
    def arity(self) -> int:
        return self.rep.arity

    def __eq__(self, other) -> bool:
        return isinstance(other, NetClass) and self.code == other.code

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "NetClass") -> bool:
        return self.code < other.code

    def __repr__(self) -> str:
        return f"NetClass({self.coarity},{self.arity};{len(self.rep.deco)}v)"


def class_of(net: Network) -> NetClass:
    code = canonical_code(net)
    rep = from_code(code)
    return NetClass(code, rep, transference(rep))


def phi(p: Perm) -> NetClass:
    return class_of(perm_network(p))


def identity(n: int) -> NetClass:
    return phi(same(n))


def generator(sym) -> NetClass:
    return class_of(generator_network(sym))


# ---------------------------------------------------------------------------
# PROP operations on classes
# ---------------------------------------------------------------------------


def _disjoint_pair(a: Network, b: Network) -> tuple[Network, Network]:
    """Relabel b so ids do not collide with a (vertices 0,1 shared)."""
    voff = max(a.vertices) + 1
    eoff = max(a.edges, default=-1) + 1
    vmap = {v: (v if v in (0, 1) else v + voff) for v in b.vertices}
    emap = {e: e + eoff for e in b.edges}
    b2 = Network(
        {vmap[v] for v in b.vertices},
        {
            emap[e]: Edge(vmap[ends.head], ends.hindex, vmap[ends.tail], ends.tindex)
            for e, ends in b.edges.items()
        },
        {vmap[v]: s for v, s in b.deco.items()},
    )
    return a, b2


def compose(a: NetClass, b: NetClass) -> NetClass:
    """Glue: outputs of b feed the inputs of a."""
    if a.arity != b.coarity:
        raise ShapeError(f"compose: arity {a.arity} != coarity {b.coarity}")
    upper, lower = _disjoint_pair(a.rep, b.rep)
    edges: dict[int, Edge] = {}
    # interface: output leg j of lower merges with input leg j of upper
    up_in = {ends.tindex: (e, ends) for e, ends in upper.edges.items() if ends.tail == 1}
    for e, ends in lower.edges.items():
        if ends.head == 0:
            ue, uends = up_in[ends.hindex]
            edges[e] = Edge(uends.head, uends.hindex, ends.tail, ends.tindex)
        else:
            edges[e] = ends
    for e, ends in upper.edges.items():
        if ends.tail != 1:
            edges[e] = ends
    vertices = upper.vertices | lower.vertices
    deco = {**lower.deco, **upper.deco}
    return class_of(Network(vertices, edges, deco))


def tensor(a: NetClass, b: NetClass) -> NetClass:
    """Juxtapose: b's legs are shifted after a's."""
    left, right = _disjoint_pair(a.rep, b.rep)
    edges = dict(left.edges)
    for e, ends in right.edges.items():
        hindex = ends.hindex + a.coarity if ends.head == 0 else ends.hindex
        tindex = ends.tindex + a.arity if ends.tail == 1 else ends.tindex
        edges[e] = Edge(ends.head, hindex, ends.tail, tindex)
    deco = {**left.deco, **right.deco}
    return class_of(Network(left.vertices | right.vertices, edges, deco))


def act_class(sigma: Perm | None, a: NetClass, tau: Perm | None = None) -> NetClass:
    return class_of(act(sigma, a.rep, tau))


# ---------------------------------------------------------------------------
# Symmetric join
# ---------------------------------------------------------------------------


def join_condition(tr_a: BoolMat, tr_b: BoolMat, r: int, q: int) -> BoolMat | None:
    """The boolean product a22*b22 whose nilpotence makes the join defined,
    or None on a shape mismatch."""
    k = tr_a.rows - r
    l = tr_a.cols - q
    m = tr_b.rows - q
    n = tr_b.cols - r
    if min(k, l, m, n) < 0:
        return None
    a22 = tr_a.submatrix(range(k, k + r), range(l, l + q))
    b22 = tr_b.submatrix(range(0, q), range(0, r))
    return a22.mul(b22)


def join_transference(tr_a: BoolMat, tr_b: BoolMat, r: int, q: int) -> BoolMat:
    """The block formula for Tr(a join^r_q b)."""
    k = tr_a.rows - r
    l = tr_a.cols - q
    m = tr_b.rows - q
    n = tr_b.cols - r
    a11, a12, a21, a22 = bm_blocks(tr_a, k, l)
    b22, b23, b32, b33 = bm_blocks(tr_b, q, r)
    ab_star = a22.mul(b22).star()
    ba_star = b22.mul(a22).star()
    c11 = a11.add(a12.mul(b22).mul(ab_star).mul(a21))
    c13 = a12.mul(ba_star).mul(b23)
    c31 = b32.mul(ab_star).mul(a21)
    c33 = b33.add(b32.mul(a22).mul(ba_star).mul(b23))
    return bm_stack(c11, c13, c31, c33)


def _raw_sym_join(ka: Network, hb: Network, r: int, q: int) -> Network:
    """The symmetric join network with neutral join vertices (not smoothened)."""
    k = ka.coarity - r
    l = ka.arity - q
    edges: dict[int, Edge] = {}
    vertices = {0, 1} | {2 + i for i in range(1, r + q + 1)}
    deco = {2 + i: NEUTRAL for i in range(1, r + q + 1)}
    for v in ka.inner_vertices():
        vertices.add(r + q + 2 * v)
        deco[r + q + 2 * v] = ka.deco[v]
    for v in hb.inner_vertices():
        vertices.add(r + q + 2 * v + 1)
        deco[r + q + 2 * v + 1] = hb.deco[v]

    for e, ends in ka.edges.items():
        if ends.head != 0:
            head, hindex = r + q + 2 * ends.head, ends.hindex
        elif ends.hindex <= k:
            head, hindex = 0, ends.hindex
        else:
            head, hindex = 2 + ends.hindex - k, 1
        if ends.tail != 1:
            tail, tindex = r + q + 2 * ends.tail, ends.tindex
        elif ends.tindex <= l:
            tail, tindex = 1, ends.tindex
        else:
            tail, tindex = 2 + r + ends.tindex - l, 1
        edges[2 * e] = Edge(head, hindex, tail, tindex)
    for e, ends in hb.edges.items():
        if ends.head != 0:
            head, hindex = r + q + 2 * ends.head + 1, ends.hindex
        elif ends.hindex <= q:
            head, hindex = 2 + r + ends.hindex, 1
        else:
            head, hindex = 0, k + ends.hindex - q
        if ends.tail != 1:
            tail, tindex = r + q + 2 * ends.tail + 1, ends.tindex
        elif ends.tindex <= r:
            tail, tindex = 2 + ends.tindex, 1
        else:
            tail, tindex = 1, l + ends.tindex - r
        edges[2 * e + 1] = Edge(head, hindex, tail, tindex)
    return Network(vertices, edges, deco)


def sym_join(a: NetClass, r: int, q: int, b: NetClass) -> NetClass:
    """The symmetric join a join^r_q b on classes.

    The last r outputs of a are connected to the first r inputs of b and
    the first q outputs of b to the last q inputs of a.
    """
    if a.coarity < r or a.arity < q or b.coarity < q or b.arity < r:
        raise ShapeError("join: operands too small for the given r, q")
    cond = join_condition(a.tr, b.tr, r, q)
    if cond is None:
        raise ShapeError("join: shape mismatch")
    if not cond.is_nilpotent():
        plus = cond.plus()
        bad = [i + 1 for i in range(plus.rows) if plus.get(i, i)]
        raise JoinUndefinedError(f"cycle through joined ports {bad}")
    raw = _raw_sym_join(a.rep, b.rep, r, q)
    smooth, _ = smoothen(raw)
    return class_of(smooth)


def annex(a: NetClass, b: NetClass) -> NetClass:
    """Right annexation: b is fully engulfed by a."""
    return sym_join(a, b.arity, b.coarity, b)


def free_feedback(a: NetClass, n: int) -> NetClass:
    """Connect the last n outputs back to the last n inputs."""
    return sym_join(a, n, n, phi(same(n)))


# ---------------------------------------------------------------------------
# Linear combinations
# ---------------------------------------------------------------------------


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class LinComb:
    """A finite formal sum of NetClass with exact rational coefficients."""

    __slots__ = ("coarity", "arity", "terms")

    def __init__(self, coarity: int, arity: int, terms: Mapping[NetClass, Fraction] | None = None):
        self.coarity = coarity
        self.arity = arity
        clean: dict[NetClass, Fraction] = {}
        for t, c in (terms or {}).items():
            if (t.coarity, t.arity) != (coarity, arity):
                raise ShapeError("term shape differs from combination shape")
            c = _as_fraction(c)
            if c != 0:
                clean[t] = c
        self.terms = clean

    # -- constructors --------------------------------------------------------

    @staticmethod
    def monomial(t: NetClass, coeff=1) -> "LinComb":
        return LinComb(t.coarity, t.arity, {t: _as_fraction(coeff)})

    @staticmethod
    def zero(coarity: int, arity: int) -> "LinComb":
        return LinComb(coarity, arity, {})

    # -- structure -----------------------------------------------------------

    def items(self) -> list[tuple[NetClass, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0].code)

    def monomials(self) -> list[NetClass]:
        return [t for t, _ in self.items()]

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def coeff(self, t: NetClass) -> Fraction:
        return self.terms.get(t, Fraction(0))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LinComb)
            and (self.coarity, self.arity) == (other.coarity, other.arity)
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.coarity, self.arity, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        if self.is_zero():
            return f"LinComb(0; {self.coarity},{self.arity})"
        return "LinComb(" + " + ".join(f"{c}*{t!r}" for t, c in self.items()) + ")"

    # -- module operations ----------------------------------------------------

    def _require_shape(self, other: "LinComb") -> None:
        if (self.coarity, self.arity) != (other.coarity, other.arity):
            raise ShapeError("shape mismatch in linear combination arithmetic")

    def __add__(self, other: "LinComb") -> "LinComb":
        self._require_shape(other)
        terms = dict(self.terms)
        for t, c in other.terms.items():
            terms[t] = terms.get(t, Fraction(0)) + c
        return LinComb(self.coarity, self.arity, terms)

    def __sub__(self, other: "LinComb") -> "LinComb":
        return self + (-other)

    def __neg__(self) -> "LinComb":
        return LinComb(self.coarity, self.arity, {t: -c for t, c in self.terms.items()})

    def scale(self, r) -> "LinComb":
        r = _as_fraction(r)
        return LinComb(self.coarity, self.arity, {t: r * c for t, c in self.terms.items()})

    def __rmul__(self, r) -> "LinComb":
        return self.scale(r)


def lc(x: NetClass | LinComb) -> LinComb:
    return x if isinstance(x, LinComb) else LinComb.monomial(x)


def _bilinear(op, a: NetClass | LinComb, b: NetClass | LinComb, coarity: int, arity: int) -> LinComb:
    la, lb = lc(a), lc(b)
    out = LinComb.zero(coarity, arity)
    for s, cs in la.items():
        for t, ct in lb.items():
            out = out + LinComb.monomial(op(s, t), cs * ct)
    return out


def lc_compose(a: NetClass | LinComb, b: NetClass | LinComb) -> LinComb:
    la, lb = lc(a), lc(b)
    if la.arity != lb.coarity:
        raise ShapeError("compose: shape mismatch")
    return _bilinear(compose, la, lb, la.coarity, lb.arity)


def lc_tensor(a: NetClass | LinComb, b: NetClass | LinComb) -> LinComb:
    la, lb = lc(a), lc(b)
    return _bilinear(tensor, la, lb, la.coarity + lb.coarity, la.arity + lb.arity)


def lc_phi(p: Perm) -> LinComb:
    return LinComb.monomial(phi(p))


def lc_sym_join(a: NetClass | LinComb, r: int, q: int, b: NetClass | LinComb) -> LinComb:
    """Bilinear symmetric join; undefined when any monomial pair fails the
    nilpotence condition."""
    la, lb = lc(a), lc(b)
    for s, _ in la.items():
        for t, _ in lb.items():
            cond = join_condition(s.tr, t.tr, r, q)
            if cond is None:
                raise ShapeError("join: shape mismatch")
            if not cond.is_nilpotent():
                raise JoinUndefinedError("monomial pair fails the nilpotence condition")
    return _bilinear(
        lambda s, t: sym_join(s, r, q, t),
        la,
        lb,
        la.coarity - r + lb.coarity - q,
        la.arity - q + lb.arity - r,
    )


def lc_annex(a: NetClass | LinComb, b: NetClass | LinComb) -> LinComb:
    lb = lc(b)
    return lc_sym_join(a, lb.arity, lb.coarity, b)


def lc_free_feedback(a: NetClass | LinComb, n: int) -> LinComb:
    return lc_sym_join(a, n, n, phi(same(n)))


def lc_act(sigma: Perm | None, x: LinComb, tau: Perm | None = None) -> LinComb:
    return LinComb(
        x.coarity,
        x.arity,
        {act_class(sigma, t, tau): c for t, c in x.terms.items()},
    )
