"""Decorated acyclic port-graphs ("networks") and their basic operations.

A network has a distinguished output vertex 0 and input vertex 1.  Every
edge runs from its tail (the producing end) to its head (the consuming
end); vertex 1 only produces, vertex 0 only consumes.  Ports at each
vertex are numbered from 1, so networks are rigid: an isomorphism can
only rename vertex and edge ids.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

from .core import NEUTRAL_NAME, Perm, Symbol, BoolMat, same


class Edge(NamedTuple):
    """Edge endpoints in the order (head, hindex, tail, tindex)."""

    head: int
    hindex: int
    tail: int
    tindex: int


@dataclass(frozen=True)
class Violation:
    kind: str  # CycleFound | DuplicatePort | GapInIndices | ArityMismatch | BadVertex
    detail: tuple

    def __str__(self) -> str:
        return f"{self.kind}{self.detail}"


class InvalidNetworkError(ValueError):
    def __init__(self, violations: Sequence[Violation]):
        super().__init__("; ".join(str(v) for v in violations))
        self.violations = list(violations)


class Network:
    """An immutable validated network.

    Use :func:`validate` to construct one from raw data; the constructor
    itself trusts its arguments.
    """

    __slots__ = ("vertices", "edges", "deco", "_in", "_out", "coarity", "arity")

    def __init__(
        self,
        vertices: Iterable[int],
        edges: Mapping[int, Edge],
        deco: Mapping[int, Symbol],
    ):
        self.vertices = frozenset(vertices)
        self.edges = dict(edges)
        self.deco = dict(deco)
        inp: dict[int, dict[int, int]] = {v: {} for v in self.vertices}
        out: dict[int, dict[int, int]] = {v: {} for v in self.vertices}
        for e, ends in self.edges.items():
            inp[ends.head][ends.hindex] = e
            out[ends.tail][ends.tindex] = e
        self._in = inp
        self._out = out
        self.coarity = len(inp[0])
        self.arity = len(out[1])

    # -- port access ---------------------------------------------------------

    def in_edges(self, v: int) -> list[int]:
        """Edges with head v, in head-index order."""
        ports = self._in[v]
        return [ports[i] for i in range(1, len(ports) + 1)]

    def out_edges(self, v: int) -> list[int]:
        """Edges with tail v, in tail-index order."""
        ports = self._out[v]
        return [ports[i] for i in range(1, len(ports) + 1)]

    def in_edge(self, v: int, index: int) -> int:
        return self._in[v][index]

    def out_edge(self, v: int, index: int) -> int:
        return self._out[v][index]

    def inner_vertices(self) -> list[int]:
        return sorted(self.vertices - {0, 1})

    def __repr__(self) -> str:
        return (
            f"Network({self.coarity},{self.arity};"
            f" {len(self.vertices) - 2} inner, {len(self.edges)} edges)"
        )


def check(
    vertices: Iterable[int],
    edges: Mapping[int, Edge],
    deco: Mapping[int, Symbol],
) -> list[Violation]:
    """Return the list of network axiom violations (empty when valid)."""
    violations: list[Violation] = []
    vset = set(vertices)
    if 0 not in vset or 1 not in vset:
        violations.append(Violation("BadVertex", ("missing 0 or 1",)))
        return violations
    if any(v < 0 for v in vset):
        violations.append(Violation("BadVertex", ("negative id",)))
        return violations
    inner = vset - {0, 1}
    if set(deco) != inner:
        violations.append(Violation("BadVertex", ("decoration domain mismatch",)))
        return violations

    heads: dict[tuple[int, int], int] = {}
    tails: dict[tuple[int, int], int] = {}
    for e, ends in edges.items():
        if ends.head == 1 or ends.head not in vset:
            violations.append(Violation("BadVertex", ("head", e, ends.head)))
            return violations
        if ends.tail == 0 or ends.tail not in vset:
            violations.append(Violation("BadVertex", ("tail", e, ends.tail)))
            return violations
        if ends.hindex < 1 or ends.tindex < 1:
            violations.append(Violation("GapInIndices", (e, "nonpositive index")))
            return violations
        hkey, tkey = (ends.head, ends.hindex), (ends.tail, ends.tindex)
        if hkey in heads:
            violations.append(Violation("DuplicatePort", (ends.head, "in", ends.hindex)))
        heads[hkey] = e
        if tkey in tails:
            violations.append(Violation("DuplicatePort", (ends.tail, "out", ends.tindex)))
        tails[tkey] = e
    if violations:
        return violations

    # contiguity of port indices
    by_head: dict[int, list[int]] = {v: [] for v in vset}
    by_tail: dict[int, list[int]] = {v: [] for v in vset}
    for ends in edges.values():
        by_head[ends.head].append(ends.hindex)
        by_tail[ends.tail].append(ends.tindex)
    for v in vset:
        if v != 1 and sorted(by_head[v]) != list(range(1, len(by_head[v]) + 1)):
            violations.append(Violation("GapInIndices", (v, "in")))
        if v != 0 and sorted(by_tail[v]) != list(range(1, len(by_tail[v]) + 1)):
            violations.append(Violation("GapInIndices", (v, "out")))

    # arities against decorations
    for v in sorted(inner):
        sym = deco[v]
        if len(by_head[v]) != sym.arity or len(by_tail[v]) != sym.coarity:
            violations.append(Violation("ArityMismatch", (v,)))

    # acyclicity via Kahn's algorithm over inner vertices
    indeg = {v: 0 for v in inner}
    succs: dict[int, list[int]] = {v: [] for v in inner}
    for ends in edges.values():
        if ends.tail in inner and ends.head in inner:
            succs[ends.tail].append(ends.head)
            indeg[ends.head] += 1
    queue = [v for v in inner if indeg[v] == 0]
    seen = 0
    while queue:
        v = queue.pop()
        seen += 1
        for w in succs[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    if seen != len(inner):
        cyclic = sorted(v for v in inner if indeg[v] > 0)
        witness = sorted(
            e for e, ends in edges.items() if ends.tail in cyclic and ends.head in cyclic
        )
        violations.append(Violation("CycleFound", tuple(witness)))
    return violations


def validate(
    vertices: Iterable[int],
    edges: Mapping[int, Edge],
    deco: Mapping[int, Symbol],
) -> Network:
    vertices = list(vertices)
    violations = check(vertices, edges, deco)
    if violations:
        raise InvalidNetworkError(violations)
    return Network(vertices, edges, deco)


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------


def perm_network(p: Perm) -> Network:
    """The network of phi(p): edge j runs from input port j to output port p(j)."""
    edges = {j - 1: Edge(0, p(j), 1, j) for j in range(1, p.n + 1)}
    return Network({0, 1}, edges, {})


def generator_network(sym: Symbol) -> Network:
    """Single inner vertex decorated by ``sym``, all legs in order."""
    edges: dict[int, Edge] = {}
    eid = 0
    for i in range(1, sym.coarity + 1):
        edges[eid] = Edge(0, i, 2, i)
        eid += 1
    for j in range(1, sym.arity + 1):
        edges[eid] = Edge(2, j, 1, j)
        eid += 1
    return Network({0, 1, 2}, edges, {2: sym})


def relabel(net: Network, vmap: Mapping[int, int], emap: Mapping[int, int]) -> Network:
    """Apply an isomorphism given by vertex and edge relabelings."""
    edges = {
        emap[e]: Edge(vmap[ends.head], ends.hindex, vmap[ends.tail], ends.tindex)
        for e, ends in net.edges.items()
    }
    deco = {vmap[v]: s for v, s in net.deco.items()}
    return Network({vmap[v] for v in net.vertices}, edges, deco)


# ---------------------------------------------------------------------------
# Transference
# ---------------------------------------------------------------------------


def transference(net: Network) -> BoolMat:
    """Boolean coarity x arity matrix of input-to-output path existence."""
    # reach[e] = bitmask of input leg indices (0-based) that can reach edge e
    reach: dict[int, int] = {}
    order = _topological_edges(net)
    for e in order:
        ends = net.edges[e]
        if ends.tail == 1:
            reach[e] = 1 << (ends.tindex - 1)
        else:
            acc = 0
            for f in net.in_edges(ends.tail):
                acc |= reach[f]
            reach[e] = acc
    bits = [0] * net.coarity
    for e, ends in net.edges.items():
        if ends.head == 0:
            bits[ends.hindex - 1] = reach[e]
    return BoolMat(net.coarity, net.arity, tuple(bits))


def _topological_edges(net: Network) -> list[int]:
    """Edges ordered so that each edge follows all edges into its tail."""
    inner = net.inner_vertices()
    indeg = {
        v: sum(1 for e in net.in_edges(v) if net.edges[e].tail != 1) for v in inner
    }
    ready = [v for v in inner if indeg[v] == 0]
    out: list[int] = [e for e, ends in sorted(net.edges.items()) if ends.tail == 1]
    seen_v = []
    while ready:
        v = ready.pop()
        seen_v.append(v)
        for e in net.out_edges(v):
            out.append(e)
            h = net.edges[e].head
            if h != 0:
                indeg[h] -= 1
                if indeg[h] == 0:
                    ready.append(h)
    return out


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


class TargetError(ValueError):
    pass


def evaluate(
    net: Network,
    target,
    assign: Callable[[Symbol], object] | Mapping[str, object],
    tiebreak: str = "min",
):
    """Evaluate a network in a target PROP.

    ``assign`` maps symbols (or symbol names) to target elements of the
    right shape.  The computation slices the network below one
    topologically minimal inner vertex at a time; the result does not
    depend on the order in which ready vertices are consumed (``tiebreak``
    exists so tests can exercise that).
    """
    if callable(assign) and not isinstance(assign, Mapping):
        lookup = assign
    else:
        mapping = assign

        def lookup(sym: Symbol):
            try:
                return mapping[sym.name]
            except KeyError:
                raise TargetError(f"no assignment for symbol {sym.name!r}") from None

    images: dict[int, object] = {}
    for v in net.inner_vertices():
        sym = net.deco[v]
        img = lookup(sym)
        if target.dims(img) != (sym.coarity, sym.arity):
            raise TargetError(
                f"assignment for {sym.name!r} has shape {target.dims(img)},"
                f" expected {(sym.coarity, sym.arity)}"
            )
        images[v] = img

    frontier: list[int] = [net.out_edge(1, j) for j in range(1, net.arity + 1)]
    value = target.phi(same(net.arity))

    inner = net.inner_vertices()
    missing = {v: len(net.in_edges(v)) for v in inner}
    available = set(frontier)
    for v in inner:
        missing[v] -= sum(1 for e in net.in_edges(v) if e in available)
    ready = sorted(v for v in inner if missing[v] == 0)
    done = 0
    while ready:
        if tiebreak == "min":
            v = ready.pop(0)
        else:
            v = ready.pop()
        ins = net.in_edges(v)
        others = [e for e in frontier if e not in set(ins)]
        arranged = others + ins
        # route frontier position j to arranged position of frontier[j-1]
        pos = {e: i for i, e in enumerate(arranged, 1)}
        sigma = Perm(tuple(pos[e] for e in frontier))
        value = target.compose(target.phi(sigma), value)
        slice_elem = target.tensor(target.phi(same(len(others))), images[v])
        value = target.compose(slice_elem, value)
        frontier = others + net.out_edges(v)
        done += 1
        for e in net.out_edges(v):
            h = net.edges[e].head
            if h != 0:
                missing[h] -= 1
                if missing[h] == 0:
                    ready.append(h)
        ready.sort()
    if done != len(inner):
        raise InvalidNetworkError([Violation("CycleFound", ())])

    target_order = [net.in_edge(0, i) for i in range(1, net.coarity + 1)]
    pos = {e: i for i, e in enumerate(target_order, 1)}
    sigma = Perm(tuple(pos[e] for e in frontier))
    return target.compose(target.phi(sigma), value)


# ---------------------------------------------------------------------------
# Permutation actions
# ---------------------------------------------------------------------------


def act(sigma: Perm | None, net: Network, tau: Perm | None = None) -> Network:
    """Left/right action: relabel output head indices by sigma and input
    tail indices by tau^-1."""
    if sigma is not None and sigma.n != net.coarity:
        raise ValueError("left action size mismatch")
    if tau is not None and tau.n != net.arity:
        raise ValueError("right action size mismatch")
    tau_inv = tau.inverse() if tau is not None else None
    edges = {}
    for e, ends in net.edges.items():
        hindex = ends.hindex
        tindex = ends.tindex
        if sigma is not None and ends.head == 0:
            hindex = sigma(ends.hindex)
        if tau_inv is not None and ends.tail == 1:
            tindex = tau_inv(ends.tindex)
        edges[e] = Edge(ends.head, hindex, ends.tail, tindex)
    return Network(net.vertices, edges, net.deco)


# ---------------------------------------------------------------------------
# Cuts and splits
# ---------------------------------------------------------------------------


class DecompositionError(ValueError):
    pass


def cut(net: Network, w0: set[int], w1: set[int], ordering: Mapping[int, int]) -> tuple[Network, Network]:
    """Decompose along an ordered cut (W0 above, W1 below).

    ``ordering`` maps each cut edge to its interface position (1-based).
    """
    inner = set(net.inner_vertices())
    if w0 | w1 != inner or w0 & w1:
        raise DecompositionError("not a bipartition of the inner vertices")
    for e, ends in net.edges.items():
        if ends.head in w1 and ends.tail in w0:
            raise DecompositionError(f"NotACut: edge {e} goes from W0 to W1")
    cut_edges = [
        e
        for e, ends in net.edges.items()
        if (ends.head in w0 or ends.head == 0) and (ends.tail in w1 or ends.tail == 1)
    ]
    if sorted(ordering.keys()) != sorted(cut_edges) or sorted(ordering.values()) != list(
        range(1, len(cut_edges) + 1)
    ):
        raise DecompositionError("NotACut: bad interface ordering")

    e_upper = {e for e, ends in net.edges.items() if ends.head in w0 or ends.head == 0}
    e_lower = {e for e, ends in net.edges.items() if ends.tail in w1 or ends.tail == 1}
    cutset = set(cut_edges)

    upper_edges = {}
    for e in e_upper:
        ends = net.edges[e]
        if e in cutset:
            upper_edges[e] = Edge(ends.head, ends.hindex, 1, ordering[e])
        else:
            upper_edges[e] = ends
    lower_edges = {}
    for e in e_lower:
        ends = net.edges[e]
        if e in cutset:
            lower_edges[e] = Edge(0, ordering[e], ends.tail, ends.tindex)
        else:
            lower_edges[e] = ends
    upper = Network(w0 | {0, 1}, upper_edges, {v: net.deco[v] for v in w0})
    lower = Network(w1 | {0, 1}, lower_edges, {v: net.deco[v] for v in w1})
    return upper, lower


def split(
    net: Network, fl: set[int], fr: set[int], wl: set[int], wr: set[int]
) -> tuple[Network, Network]:
    """Decompose along a split into left and right tensor factors."""
    inner = set(net.inner_vertices())
    if wl | wr != inner or wl & wr:
        raise DecompositionError("not a bipartition of the inner vertices")
    if fl | fr != set(net.edges) or fl & fr:
        raise DecompositionError("not a bipartition of the edges")
    for e in fl:
        ends = net.edges[e]
        if ends.head not in wl | {0} or ends.tail not in wl | {1}:
            raise DecompositionError(f"NotASplit: edge {e} leaves the left part")
    for e in fr:
        ends = net.edges[e]
        if ends.head not in wr | {0} or ends.tail not in wr | {1}:
            raise DecompositionError(f"NotASplit: edge {e} leaves the right part")
    left_out = sorted(net.edges[e].hindex for e in fl if net.edges[e].head == 0)
    right_out = sorted(net.edges[e].hindex for e in fr if net.edges[e].head == 0)
    if left_out != list(range(1, len(left_out) + 1)) or right_out != list(
        range(len(left_out) + 1, net.coarity + 1)
    ):
        raise DecompositionError("NotASplit: output legs interleave")
    left_in = sorted(net.edges[e].tindex for e in fl if net.edges[e].tail == 1)
    right_in = sorted(net.edges[e].tindex for e in fr if net.edges[e].tail == 1)
    if left_in != list(range(1, len(left_in) + 1)) or right_in != list(
        range(len(left_in) + 1, net.arity + 1)
    ):
        raise DecompositionError("NotASplit: input legs interleave")

    k, l = len(left_out), len(left_in)
    left_edges = {e: net.edges[e] for e in fl}
    right_edges = {}
    for e in fr:
        ends = net.edges[e]
        hindex = ends.hindex - k if ends.head == 0 else ends.hindex
        tindex = ends.tindex - l if ends.tail == 1 else ends.tindex
        right_edges[e] = Edge(ends.head, hindex, ends.tail, tindex)
    left = Network(wl | {0, 1}, left_edges, {v: net.deco[v] for v in wl})
    right = Network(wr | {0, 1}, right_edges, {v: net.deco[v] for v in wr})
    return left, right


def all_cuts(net: Network) -> list[tuple[set[int], set[int]]]:
    """All (W0, W1) cuts, for small networks."""
    inner = net.inner_vertices()
    out = []
    for mask in range(1 << len(inner)):
        w1 = {v for i, v in enumerate(inner) if mask >> i & 1}
        w0 = set(inner) - w1
        if all(
            not (ends.head in w1 and ends.tail in w0) for ends in net.edges.values()
        ):
            out.append((w0, w1))
    return out


def obvious_ordering(net: Network, w0: set[int], w1: set[int]) -> dict[int, int]:
    """Some valid interface ordering for the given cut (sorted by edge id)."""
    cut_edges = sorted(
        e
        for e, ends in net.edges.items()
        if (ends.head in w0 or ends.head == 0) and (ends.tail in w1 or ends.tail == 1)
    )
    return {e: i for i, e in enumerate(cut_edges, 1)}


# ---------------------------------------------------------------------------
# Homeomorphisms and smoothening
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Homeomorphism:
    """A pair (beta, gamma): beta maps target vertices into the source,
    gamma maps source edges onto target edges."""

    source: Network
    target: Network
    vertex_map: Mapping[int, int]  # target vertex -> source vertex, injective
    edge_map: Mapping[int, int]  # source edge -> target edge, surjective


def smoothen(net: Network, neutral_names: frozenset[str] | set[str] = frozenset({NEUTRAL_NAME})) -> tuple[Network, Homeomorphism]:
    """Remove all neutral-decorated vertices, joining their incident edges.

    Every neutral vertex must have arity = coarity = 1.
    """
    drop = {v for v, s in net.deco.items() if s.name in neutral_names}
    for v in drop:
        sym = net.deco[v]
        if sym.arity != 1 or sym.coarity != 1:
            raise InvalidNetworkError([Violation("ArityMismatch", (v,))])
    keep_vertices = net.vertices - drop
    keep_edges = {e for e, ends in net.edges.items() if ends.tail in keep_vertices}

    # headmost edge of the neutral chain starting at e
    head_of: dict[int, int] = {}

    def headmost(e: int) -> int:
        seen = []
        cur = e
        while cur not in head_of:
            ends = net.edges[cur]
            if ends.head in keep_vertices:
                head_of[cur] = cur
                break
            seen.append(cur)
            cur = net.out_edge(ends.head, 1)
        result = head_of[cur]
        for x in seen:
            head_of[x] = result
        return result

    edges = {}
    for e in keep_edges:
        ends = net.edges[e]
        top = net.edges[headmost(e)]
        edges[e] = Edge(top.head, top.hindex, ends.tail, ends.tindex)
    deco = {v: s for v, s in net.deco.items() if v in keep_vertices - {0, 1}}
    smooth = Network(keep_vertices, edges, deco)

    # gamma maps each source edge to the tailmost (kept) segment of its chain
    tail_of: dict[int, int] = {}

    def tailmost(e: int) -> int:
        chain = []
        cur = e
        while cur not in tail_of:
            ends = net.edges[cur]
            if ends.tail in keep_vertices:
                tail_of[cur] = cur
                break
            chain.append(cur)
            cur = net.in_edge(ends.tail, 1)
        result = tail_of[cur]
        for x in chain:
            tail_of[x] = result
        return result

    gamma = {e: tailmost(e) for e in net.edges}
    beta = {v: v for v in keep_vertices}
    return smooth, Homeomorphism(net, smooth, beta, gamma)


def is_homeomorphism(hom: Homeomorphism) -> bool:
    """Check the five homeomorphism conditions (used by tests)."""
    src, dst = hom.source, hom.target
    beta, gamma = dict(hom.vertex_map), dict(hom.edge_map)
    if beta.get(0) != 0 or beta.get(1) != 1:
        return False
    if len(set(beta.values())) != len(beta):
        return False
    if set(gamma.keys()) != set(src.edges) or set(gamma.values()) != set(dst.edges):
        return False
    image = set(beta.values())
    inv = {w: v for v, w in beta.items()}
    for v in dst.inner_vertices():
        if v not in beta or src.deco[beta[v]] != dst.deco[v]:
            return False
    for e, ends in src.edges.items():
        g = gamma[e]
        if ends.head in image:
            gd = dst.edges[g]
            if ends.head != beta[inv[ends.head]] or inv[ends.head] != gd.head:
                return False
            if ends.hindex != gd.hindex:
                return False
        if ends.tail in image:
            gd = dst.edges[g]
            if inv[ends.tail] != gd.tail or ends.tindex != gd.tindex:
                return False
    for v in src.vertices - image:
        sym = src.deco[v]
        if sym.arity != 1 or sym.coarity != 1:
            return False
        e_in = src.in_edge(v, 1)
        e_out = src.out_edge(v, 1)
        if gamma[e_in] != gamma[e_out]:
            return False
    return True


# ---------------------------------------------------------------------------
# Canonical codes
# ---------------------------------------------------------------------------


def _components(net: Network) -> tuple[list[set[int]], list[int]]:
    """Connected components of inner vertices, plus the stray edges."""
    parent = {v: v for v in net.inner_vertices()}

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    strays = []
    for e, ends in net.edges.items():
        if ends.head == 0 and ends.tail == 1:
            strays.append(e)
        elif ends.head != 0 and ends.tail != 1:
            a, b = find(ends.head), find(ends.tail)
            if a != b:
                parent[a] = b
    comps: dict[int, set[int]] = {}
    for v in net.inner_vertices():
        comps.setdefault(find(v), set()).add(v)
    return list(comps.values()), sorted(strays)


def _component_code_from(net: Network, root: int, comp: set[int]) -> tuple:
    order = {root: 0}
    queue = [root]
    seq = []
    while queue:
        v = queue.pop(0)
        sym = net.deco[v]
        ins = []
        for e in net.in_edges(v):
            ends = net.edges[e]
            if ends.tail == 1:
                ins.append(("I", ends.tindex))
            else:
                u = ends.tail
                if u not in order:
                    order[u] = len(order)
                    queue.append(u)
                ins.append(("V", order[u], ends.tindex))
        outs = []
        for e in net.out_edges(v):
            ends = net.edges[e]
            if ends.head == 0:
                outs.append(("O", ends.hindex))
            else:
                u = ends.head
                if u not in order:
                    order[u] = len(order)
                    queue.append(u)
                outs.append(("V", order[u], ends.hindex))
        seq.append((sym.name, sym.coarity, sym.arity, tuple(ins), tuple(outs)))
    return tuple(seq)


def canonical_code(net: Network) -> tuple:
    """A total serialization of the isomorphism class of ``net``.

    Codes are equal iff the networks are isomorphic: per component the
    minimum breadth-first serialization over all start vertices is taken
    (ports are totally ordered at each vertex, so each start fixes the
    whole traversal), component codes are sorted, and the leg counts
    appended.
    """
    comps, strays = _components(net)
    codes = []
    for comp in comps:
        best = min(_component_code_from(net, r, comp) for r in sorted(comp))
        codes.append(("C", best))
    for e in strays:
        ends = net.edges[e]
        codes.append(("S", ends.tindex, ends.hindex))
    return (net.coarity, net.arity, tuple(sorted(codes)))


def from_code(code: tuple) -> Network:
    """Rebuild the canonical representative from a canonical code."""
    coarity, arity, comps = code
    vertices = {0, 1}
    edges: dict[int, Edge] = {}
    deco: dict[int, Symbol] = {}
    next_v = 2
    next_e = 0

    def fresh_edge(ends: Edge) -> None:
        nonlocal next_e
        edges[next_e] = ends
        next_e += 1

    for entry in comps:
        if entry[0] == "S":
            _, tindex, hindex = entry
            fresh_edge(Edge(0, hindex, 1, tindex))
            continue
        _, seq = entry
        base = next_v
        for k, (name, co, ar, _ins, _outs) in enumerate(seq):
            deco[base + k] = Symbol(name, co, ar)
            vertices.add(base + k)
        next_v += len(seq)
        for k, (_name, _co, _ar, ins, outs) in enumerate(seq):
            v = base + k
            for i, item in enumerate(ins, 1):
                if item[0] == "I":
                    fresh_edge(Edge(v, i, 1, item[1]))
                else:
                    fresh_edge(Edge(v, i, base + item[1], item[2]))
            for i, item in enumerate(outs, 1):
                if item[0] == "O":
                    fresh_edge(Edge(0, item[1], v, i))
                # inner heads are created from the head side scan above
    return Network(vertices, edges, deco)
