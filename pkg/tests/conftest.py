"""Shared fixtures: signatures, random generators, and the PROP axiom suite."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from netrw.core import Perm, Signature, Symbol, cross, same
from netrw.freeprop import LinComb, NetClass, class_of
from netrw.network import Edge, Network, validate
from netrw.props import Mat


@pytest.fixture
def rng():
    return random.Random(20260808)


@pytest.fixture
def sig2():
    """The two-symbol signature used by the brute-force suites."""
    return Signature([Symbol("m", 1, 2), Symbol("D", 2, 1)])


@pytest.fixture
def hopf_sig():
    return Signature(
        [
            Symbol("m", 1, 2),
            Symbol("eta", 1, 0),
            Symbol("D", 2, 1),
            Symbol("eps", 0, 1),
            Symbol("S", 1, 1),
        ]
    )


def random_network(
    rng: random.Random,
    symbols,
    max_inner: int = 4,
    max_strays: int = 1,
    min_inner: int = 0,
) -> Network:
    """A uniform-ish random decorated acyclic port-graph.

    Vertices are created in a topological order; each input port either
    consumes a dangling output of an earlier vertex or becomes an input
    leg, and leftover outputs become output legs.
    """
    n_inner = rng.randint(min_inner, max_inner)
    vertices = {0, 1}
    deco = {}
    edges: dict[int, Edge] = {}
    eid = 0
    dangling: list[tuple[int, int]] = []  # (vertex, out index)
    in_stubs: list[int] = []  # edge ids with tail at the input vertex

    for k in range(n_inner):
        v = 2 + k
        sym = rng.choice(symbols)
        vertices.add(v)
        deco[v] = sym
        for i in range(1, sym.arity + 1):
            if dangling and rng.random() < 0.6:
                u, j = dangling.pop(rng.randrange(len(dangling)))
                edges[eid] = Edge(v, i, u, j)
            else:
                edges[eid] = Edge(v, i, 1, 0)  # tail index patched below
                in_stubs.append(eid)
            eid += 1
        for i in range(1, sym.coarity + 1):
            dangling.append((v, i))

    for _ in range(rng.randint(0, max_strays)):
        edges[eid] = Edge(0, 0, 1, 0)
        in_stubs.append(eid)
        eid += 1

    out_stubs = []
    for u, j in dangling:
        edges[eid] = Edge(0, 0, u, j)
        out_stubs.append(eid)
        eid += 1
    out_stubs += [e for e, ends in edges.items() if ends.head == 0 and e not in out_stubs]

    rng.shuffle(in_stubs)
    for pos, e in enumerate(in_stubs, 1):
        ends = edges[e]
        edges[e] = Edge(ends.head, ends.hindex, 1, pos)
    rng.shuffle(out_stubs)
    for pos, e in enumerate(out_stubs, 1):
        ends = edges[e]
        edges[e] = Edge(0, pos, ends.tail, ends.tindex)
    return validate(vertices, edges, deco)


def random_relabel(rng: random.Random, net: Network) -> Network:
    from netrw.network import relabel

    inner = net.inner_vertices()
    new_ids = [2 + rng.randrange(50) for _ in inner]
    while len(set(new_ids)) != len(inner):
        new_ids = [2 + rng.randrange(50) for _ in inner]
    vmap = {0: 0, 1: 1, **dict(zip(inner, new_ids))}
    eids = list(net.edges)
    new_eids = rng.sample(range(100), len(eids))
    emap = dict(zip(eids, new_eids))
    return relabel(net, vmap, emap)


def random_class(rng, symbols, max_inner=4, max_strays=1, min_inner=0) -> NetClass:
    return class_of(
        random_network(rng, symbols, max_inner=max_inner, max_strays=max_strays, min_inner=min_inner)
    )


def class_pool(rng, symbols, count, **kw):
    """Random classes bucketed by (coarity, arity)."""
    buckets: dict[tuple[int, int], list[NetClass]] = {}
    for _ in range(count):
        c = random_class(rng, symbols, **kw)
        buckets.setdefault((c.coarity, c.arity), []).append(c)
    return buckets


def random_nat_mat(rng, rows, cols, top=5) -> Mat:
    return Mat.from_rows(
        [[rng.randrange(top) for _ in range(cols)] for _ in range(rows)], cols=cols
    )


def random_perm(rng, n) -> Perm:
    images = list(range(1, n + 1))
    rng.shuffle(images)
    return Perm(tuple(images))


# ---------------------------------------------------------------------------
# The shared PROP axiom suite
# ---------------------------------------------------------------------------


def check_prop_axioms(target, gen, rng, cases=70):
    """Exercise the eight PROP axioms on random data.

    ``gen(rng, m, n)`` must return a random element of shape (m, n).
    """

    def shapes():
        return rng.randint(0, 3), rng.randint(0, 3)

    for _ in range(cases):
        k, l = shapes()
        m, n = shapes()
        r, s = shapes()
        a, b, c = gen(rng, k, l), gen(rng, l, m), gen(rng, m, n)
        # composition associativity
        assert target.eq(
            target.compose(target.compose(a, b), c),
            target.compose(a, target.compose(b, c)),
        )
        # composition identity
        assert target.eq(target.compose(target.phi(same(k)), a), a)
        assert target.eq(target.compose(a, target.phi(same(l))), a)
        # tensor associativity
        x, y, z = gen(rng, k, l), gen(rng, m, n), gen(rng, r, s)
        assert target.eq(
            target.tensor(target.tensor(x, y), z),
            target.tensor(x, target.tensor(y, z)),
        )
        # tensor identity
        unit = target.phi(same(0))
        assert target.eq(target.tensor(unit, x), x)
        assert target.eq(target.tensor(x, unit), x)
        # composition-tensor compatibility
        a2, b2 = gen(rng, k, l), gen(rng, l, m)
        c2, d2 = gen(rng, r, s), gen(rng, s, n)
        assert target.eq(
            target.tensor(target.compose(a2, b2), target.compose(c2, d2)),
            target.compose(target.tensor(a2, c2), target.tensor(b2, d2)),
        )
        # permutation composition and juxtaposition
        sig1, tau1 = random_perm(rng, n), random_perm(rng, n)
        assert target.eq(
            target.compose(target.phi(sig1), target.phi(tau1)),
            target.phi(sig1.compose(tau1)),
        )
        sig2_, tau2 = random_perm(rng, m), random_perm(rng, n)
        assert target.eq(
            target.tensor(target.phi(sig2_), target.phi(tau2)),
            target.phi(sig2_.star(tau2)),
        )
        # tensor permutation
        a3, b3 = gen(rng, k, l), gen(rng, m, n)
        assert target.eq(
            target.compose(target.phi(cross(k, m)), target.tensor(a3, b3)),
            target.compose(target.tensor(b3, a3), target.phi(cross(l, n))),
        )


def exact_shape_class(rng, sig: Signature, m: int, n: int) -> NetClass:
    """A random free-PROP element of exactly the given shape, built as a
    random sequence of one-generator layers over a signature that can
    change widths in both directions (needs arity-0 and coarity-0
    symbols, e.g. the Hopf signature)."""
    from netrw.freeprop import compose, generator, identity, phi, tensor

    grow = [s for s in sig if s.coarity > s.arity]
    shrink = [s for s in sig if s.coarity < s.arity]
    anything = list(sig)
    acc = phi(random_perm(rng, n))
    width = n
    steps = 0
    while width != m or (rng.random() < 0.4 and steps < 6):
        steps += 1
        if steps > 24:
            pool = grow if width < m else shrink
        elif width < m:
            pool = grow if rng.random() < 0.7 else anything
        elif width > m:
            pool = shrink if rng.random() < 0.7 else anything
        else:
            pool = anything
        candidates = [s for s in pool if s.arity <= width]
        if not candidates:
            candidates = [s for s in anything if s.arity <= width]
            if not candidates:
                break
        sym = rng.choice(candidates)
        p = rng.randint(0, width - sym.arity)
        layer = tensor(identity(p), tensor(generator(sym), identity(width - p - sym.arity)))
        acc = compose(layer, acc)
        width = width - sym.arity + sym.coarity
        if rng.random() < 0.3:
            acc = compose(phi(random_perm(rng, width)), acc)
    if width != m:
        raise RuntimeError("shape walk failed")
    return compose(phi(random_perm(rng, m)), acc)


class FreePropTarget:
    """NetClass operations wrapped in the target interface, so the shared
    axiom suite can run over the free PROP itself."""

    name = "free"

    def dims(self, a: NetClass):
        return (a.coarity, a.arity)

    def eq(self, a, b):
        return a == b

    def compose(self, a, b):
        from netrw.freeprop import compose

        return compose(a, b)

    def tensor(self, a, b):
        from netrw.freeprop import tensor

        return tensor(a, b)

    def phi(self, p):
        from netrw.freeprop import phi

        return phi(p)
