"""Enumeration of ambiguities for rule pairs, resolvability checking,
confluence reporting, and a completion loop.

Two left hand sides overlap when the gluing relation generated by a set
of seeds is consistent: shared inner vertices with equal decorations,
stray edges lying over internal edges of the other pattern, and leg-to-
leg wirings.  The last kind produces the "wrap" obstructions that are
invisible to classical overlap/inclusion analysis; gluings whose wiring
is sequentially consistent are montages and never reported.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .core import BoolMat, Perm
from .freeprop import LinComb, NetClass, class_of, lc_act, lc_annex
from .match import Embedding, complement, context_type_ok, strong_embeddings
from .network import Edge, Network, act, canonical_code, validate
from .order import LT, OrderSpec, compare, rule_compatible
from .rewrite import Rule, joinable, make_rule, normalize

Node = tuple[str, int, int]  # ("v"|"e", side, id)


@dataclass(frozen=True)
class Ambiguity:
    rule1_id: str
    rule2_id: str
    site: NetClass
    context1: NetClass
    context2: NetClass
    amb_type: BoolMat
    reduct1: LinComb
    reduct2: LinComb
    terse: bool
    key: tuple = field(compare=False)

    @property
    def trivial(self) -> bool:
        return (
            self.rule1_id == self.rule2_id
            and self.context1 == self.context2
            and self.reduct1 == self.reduct2
        )

    @property
    def wrap(self) -> bool:
        return not self.terse


class _GlueState:
    """Union-find over the vertices and edges of both patterns."""

    def __init__(self, nets: dict[int, Network]):
        self.nets = nets
        self.parent: dict[Node, Node] = {}
        for side, net in nets.items():
            for v in net.inner_vertices():
                self.parent[("v", side, v)] = ("v", side, v)
            for e in net.edges:
                self.parent[("e", side, e)] = ("e", side, e)

    def copy(self) -> "_GlueState":
        st = _GlueState.__new__(_GlueState)
        st.nets = self.nets
        st.parent = dict(self.parent)
        return st

    def find(self, x: Node) -> Node:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def classes(self) -> dict[Node, set[Node]]:
        out: dict[Node, set[Node]] = {}
        for x in self.parent:
            out.setdefault(self.find(x), set()).add(x)
        return out

    def signature(self) -> frozenset:
        return frozenset(
            frozenset(c) for c in self.classes().values() if len(c) > 1
        )

    def _edge_class_ok(self, members: set[Node], pending: list) -> bool:
        per_side_heads: dict[int, list[Node]] = {1: [], 2: []}
        per_side_tails: dict[int, list[Node]] = {1: [], 2: []}
        heads = []
        tails = []
        for node in members:
            _, side, e = node
            ends = self.nets[side].edges[e]
            if ends.head != 0:
                per_side_heads[side].append(node)
                heads.append((side, ends.head, ends.hindex))
            if ends.tail != 1:
                per_side_tails[side].append(node)
                tails.append((side, ends.tail, ends.tindex))
        for side in (1, 2):
            if len(per_side_heads[side]) > 1 or len(per_side_tails[side]) > 1:
                return False
            internal = [
                n
                for n in members
                if n[1] == side
                and self.nets[side].edges[n[2]].head != 0
                and self.nets[side].edges[n[2]].tail != 1
            ]
            if internal and sum(1 for n in members if n[1] == side) > 1:
                return False
        for (s1, v1, i1), (s2, v2, i2) in itertools.combinations(heads, 2):
            if i1 != i2:
                return False
            pending.append((("v", s1, v1), ("v", s2, v2)))
        for (s1, v1, i1), (s2, v2, i2) in itertools.combinations(tails, 2):
            if i1 != i2:
                return False
            pending.append((("v", s1, v1), ("v", s2, v2)))
        return True

    def merge(self, a: Node, b: Node) -> bool:
        pending = [(a, b)]
        while pending:
            x, y = pending.pop()
            rx, ry = self.find(x), self.find(y)
            if rx == ry:
                continue
            if rx[0] != ry[0]:
                return False
            kind = rx[0]
            cls = self.classes()
            merged = cls[rx] | cls[ry]
            if kind == "v":
                per_side: dict[int, set[int]] = {1: set(), 2: set()}
                for _, side, v in merged:
                    per_side[side].add(v)
                if len(per_side[1]) > 1 or len(per_side[2]) > 1:
                    return False
                decos = {self.nets[side].deco[v] for _, side, v in merged}
                if len(decos) != 1:
                    return False
                self.parent[rx] = ry
                members = sorted(merged)
                base = members[0]
                _, bside, bv = base
                bnet = self.nets[bside]
                for other in members[1:]:
                    _, oside, ov = other
                    onet = self.nets[oside]
                    sym = bnet.deco[bv]
                    for i in range(1, sym.arity + 1):
                        pending.append(
                            (
                                ("e", bside, bnet.in_edge(bv, i)),
                                ("e", oside, onet.in_edge(ov, i)),
                            )
                        )
                    for i in range(1, sym.coarity + 1):
                        pending.append(
                            (
                                ("e", bside, bnet.out_edge(bv, i)),
                                ("e", oside, onet.out_edge(ov, i)),
                            )
                        )
            else:
                self.parent[rx] = ry
                if not self._edge_class_ok(merged, pending):
                    return False
        return True


def _leg_kind(net: Network, e: int) -> tuple[bool, bool]:
    ends = net.edges[e]
    return ends.head == 0, ends.tail == 1  # (is output leg, is input leg)


def _possible_seeds(state: _GlueState) -> list[tuple[Node, Node]]:
    h1, h2 = state.nets[1], state.nets[2]
    seeds = []
    for v1 in h1.inner_vertices():
        for v2 in h2.inner_vertices():
            if h1.deco[v1] == h2.deco[v2]:
                if state.find(("v", 1, v1)) != state.find(("v", 2, v2)):
                    seeds.append((("v", 1, v1), ("v", 2, v2)))
    for side, other in ((1, 2), (2, 1)):
        ns, no = state.nets[side], state.nets[other]
        for e, ends in sorted(ns.edges.items()):
            if ends.head == 0 and ends.tail == 1:  # stray
                for f, fe in sorted(no.edges.items()):
                    if fe.head != 0 and fe.tail != 1:
                        if state.find(("e", side, e)) != state.find(("e", other, f)):
                            seeds.append((("e", side, e), ("e", other, f)))
    for side, other in ((1, 2), (2, 1)):
        ns, no = state.nets[side], state.nets[other]
        for e, ends in sorted(ns.edges.items()):
            if ends.head != 0:
                continue
            for f, fe in sorted(no.edges.items()):
                if fe.tail != 1:
                    continue
                if state.find(("e", side, e)) != state.find(("e", other, f)):
                    seeds.append((("e", side, e), ("e", other, f)))
    return seeds


def _enumerate_gluings(h1: Network, h2: Network) -> list[_GlueState]:
    base = _GlueState({1: h1, 2: h2})
    seen: set[frozenset] = set()
    out: list[_GlueState] = []

    def rec(state: _GlueState) -> None:
        sig = state.signature()
        if sig in seen:
            return
        seen.add(sig)
        if sig:
            out.append(state)
        for a, b in _possible_seeds(state):
            nxt = state.copy()
            if nxt.merge(a, b):
                rec(nxt)

    rec(base)
    return out


@dataclass
class _Candidate:
    site: Network
    chi: dict[int, dict[int, int]]  # side -> pattern vertex -> site vertex
    psi: dict[int, dict[int, int]]  # side -> pattern edge -> site edge
    terse: bool


def _build_site(state: _GlueState) -> _Candidate | None:
    """Assemble the glued network; None when cyclic or not terse enough."""
    h1, h2 = state.nets[1], state.nets[2]
    classes = state.classes()

    vclasses = sorted(
        (root for root in classes if root[0] == "v"),
        key=lambda r: min(classes[r]),
    )
    vid_of: dict[Node, int] = {}
    deco = {}
    for i, root in enumerate(vclasses):
        vid = 2 + i
        members = classes[root]
        for node in members:
            vid_of[node] = vid
        _, side, v = min(members)
        deco[vid] = state.nets[side].deco[v]

    eclasses = sorted(
        (root for root in classes if root[0] == "e"),
        key=lambda r: min(classes[r]),
    )
    eid_of: dict[Node, int] = {}
    edge_members: dict[int, set[Node]] = {}
    for i, root in enumerate(eclasses):
        for node in classes[root]:
            eid_of[node] = i
        edge_members[i] = classes[root]

    # terseness 4/5: same-side sharing must be covered by the other side
    for members in edge_members.values():
        for side in (1, 2):
            own = [n for n in members if n[1] == side]
            if len(own) > 1 and not any(n[1] != side for n in members):
                return None
    # terseness 2/3: an output leg of one pattern and an input leg of the
    # other sharing an edge makes the ambiguity a wrap, not terse
    terse = True
    for members in edge_members.values():
        for a, b in itertools.permutations(members, 2):
            if a[1] == b[1]:
                continue
            a_out, _ = _leg_kind(state.nets[a[1]], a[2])
            _, b_in = _leg_kind(state.nets[b[1]], b[2])
            if a_out and b_in:
                terse = False

    edges: dict[int, Edge] = {}
    out_legs = []
    in_legs = []
    for eid, members in sorted(edge_members.items()):
        head = tail = None
        hindex = tindex = None
        for node in members:
            _, side, e = node
            ends = state.nets[side].edges[e]
            if ends.head != 0:
                head, hindex = vid_of[("v", side, ends.head)], ends.hindex
            if ends.tail != 1:
                tail, tindex = vid_of[("v", side, ends.tail)], ends.tindex
        if head is None:
            out_legs.append(eid)
        if tail is None:
            in_legs.append(eid)
        edges[eid] = Edge(head, hindex, tail, tindex)
    for pos, eid in enumerate(out_legs, 1):
        ends = edges[eid]
        edges[eid] = Edge(0, pos, ends.tail, ends.tindex)
    for pos, eid in enumerate(in_legs, 1):
        ends = edges[eid]
        edges[eid] = Edge(ends.head, ends.hindex, 1, pos)

    try:
        site = validate(set(deco) | {0, 1}, edges, deco)
    except Exception:
        return None
    chi = {
        side: {
            v: vid_of[("v", side, v)] for v in state.nets[side].inner_vertices()
        }
        for side in (1, 2)
    }
    psi = {
        side: {e: eid_of[("e", side, e)] for e in state.nets[side].edges}
        for side in (1, 2)
    }
    return _Candidate(site, chi, psi, terse)


def _is_montage(state: _GlueState, q1: BoolMat, q2: BoolMat) -> bool:
    """A gluing with no shared vertices and no internal-edge sharing is a
    montage iff its leg wiring is sequentially consistent."""
    classes = state.classes()
    for root, members in classes.items():
        if root[0] == "v" and len({n[1] for n in members}) > 1:
            return False
    wires = []
    for root, members in classes.items():
        if root[0] != "e" or len(members) < 2:
            continue
        for node in members:
            _, side, e = node
            ends = state.nets[side].edges[e]
            if ends.head != 0 and ends.tail != 1 and any(n[1] != side for n in members):
                return False  # something lies over an internal edge
        outs = [n for n in members if state.nets[n[1]].edges[n[2]].head == 0]
        ins = [n for n in members if state.nets[n[1]].edges[n[2]].tail == 1]
        for o in outs:
            for n in ins:
                if o == n:
                    continue
                wires.append((o, n))
    if not wires:
        return True
    omega1, alpha1 = q1.rows, q1.cols
    total_in = alpha1 + q2.cols
    total_out = omega1 + q2.rows
    w_back = BoolMat.zeros(total_in, total_out)
    for o, n in wires:
        _, oside, oe = o
        _, nside, ne = n
        out_pos = state.nets[oside].edges[oe].hindex - 1 + (0 if oside == 1 else omega1)
        in_pos = state.nets[nside].edges[ne].tindex - 1 + (0 if nside == 1 else alpha1)
        w_back = w_back.set(in_pos, out_pos, 1)
    q_tensor = q1.tensor(q2)
    return w_back.mul(q_tensor).is_nilpotent()


def _leg_relabelings(site: Network, cap: int = 64) -> list[tuple[Perm, Perm]]:
    """Canonical leg reorderings: permutation pairs (sigma, tau) such that
    sigma . site . tau carries the canonical leg numbering.  Ties from
    equal-coded components yield several."""
    from .network import _components, _component_code_from

    comps, strays = _components(site)
    entries = []  # (legless code, [per-root (outs, ins)])
    for comp in comps:
        best = None
        assignments = []
        for root in sorted(comp):
            raw = _component_code_from(site, root, comp)
            outs: list[int] = []
            ins: list[int] = []
            norm = []
            for name, co, ar, in_items, out_items in raw:
                nins = []
                for item in in_items:
                    if item[0] == "I":
                        ins.append(item[1])
                        nins.append(("I", len(ins)))
                    else:
                        nins.append(item)
                nouts = []
                for item in out_items:
                    if item[0] == "O":
                        outs.append(item[1])
                        nouts.append(("O", len(outs)))
                    else:
                        nouts.append(item)
                norm.append((name, co, ar, tuple(nins), tuple(nouts)))
            norm_t = tuple(norm)
            if best is None or norm_t < best:
                best = norm_t
                assignments = [(outs, ins)]
            elif norm_t == best:
                assignments.append((outs, ins))
        entries.append((("C", best), assignments))
    for e in strays:
        ends = site.edges[e]
        entries.append((("S",), [([ends.hindex], [ends.tindex])]))

    entries.sort(key=lambda kv: kv[0])
    groups: list[list[int]] = []
    for i, (code, _) in enumerate(entries):
        if groups and entries[groups[-1][0]][0] == code:
            groups[-1].append(i)
        else:
            groups.append([i])

    group_orders = [list(itertools.permutations(g)) for g in groups]
    total = 1
    for g in group_orders:
        total *= len(g)
    if total > cap:
        group_orders = [[tuple(g)] for g in groups]

    out = []
    for ordering in itertools.product(*group_orders):
        flat = [i for group in ordering for i in group]
        for choice in itertools.product(*(entries[i][1] for i in flat)):
            if len(out) >= cap:
                break
            new_out: list[int] = []
            new_in: list[int] = []
            for outs, ins in choice:
                new_out.extend(outs)
                new_in.extend(ins)
            if len(new_out) != site.coarity or len(new_in) != site.arity:
                continue
            sigma_images = [0] * site.coarity
            for newpos, old in enumerate(new_out, 1):
                sigma_images[old - 1] = newpos
            tau_inv = [0] * site.arity
            for newpos, old in enumerate(new_in, 1):
                tau_inv[old - 1] = newpos
            sigma = Perm(tuple(sigma_images))
            tau = Perm(tuple(tau_inv)).inverse()
            out.append((sigma, tau))
    if not out:
        out.append((Perm(tuple(range(1, site.coarity + 1))), Perm(tuple(range(1, site.arity + 1)))))
    return out


def _lc_key(x: LinComb) -> tuple:
    return tuple((t.code, c) for t, c in x.items())


def _ambiguity_key(
    site: Network,
    rule1_id: str,
    rule2_id: str,
    r1: LinComb,
    r2: LinComb,
) -> tuple:
    best = None
    for sigma, tau in _leg_relabelings(site):
        scode = canonical_code(act(sigma, site, tau))
        k1 = (rule1_id, _lc_key(lc_act(sigma, r1, tau)))
        k2 = (rule2_id, _lc_key(lc_act(sigma, r2, tau)))
        key = (scode, tuple(sorted((k1, k2))))
        if best is None or key < best:
            best = key
    return best


def enumerate_decisive(s1: Rule, s2: Rule) -> list[Ambiguity]:
    """All decisive ambiguities of the rule pair, up to site isomorphism,
    leg reordering, and operand swap, plus the non-terse wrap ambiguities
    that leg-to-leg wirings produce."""
    h1 = s1.lhs.rep
    h2 = s2.lhs.rep
    both_sharp = s1.sharp and s2.sharp

    found: dict[tuple, Ambiguity] = {}
    for state in _enumerate_gluings(h1, h2):
        if _is_montage(state, s1.qtype, s2.qtype):
            continue
        cand = _build_site(state)
        if cand is None:
            continue
        site = cand.site
        site_cls = class_of(site)
        amb_type = site_cls.tr if both_sharp else BoolMat.ones(site.coarity, site.arity)

        emb1 = Embedding(
            tuple(sorted(cand.chi[1].items())), tuple(sorted(cand.psi[1].items()))
        )
        emb2 = Embedding(
            tuple(sorted(cand.chi[2].items())), tuple(sorted(cand.psi[2].items()))
        )
        for se1 in strong_embeddings(emb1, h1, site):
            k1 = complement(site, h1, se1)
            if not context_type_ok(k1.tr, s1.qtype, amb_type):
                continue
            r1 = lc_annex(k1, s1.rhs)
            for se2 in strong_embeddings(emb2, h2, site):
                k2 = complement(site, h2, se2)
                if not context_type_ok(k2.tr, s2.qtype, amb_type):
                    continue
                r2 = lc_annex(k2, s2.rhs)
                key = _ambiguity_key(site, s1.rule_id, s2.rule_id, r1, r2)
                if key in found:
                    continue
                found[key] = Ambiguity(
                    s1.rule_id,
                    s2.rule_id,
                    site_cls,
                    k1,
                    k2,
                    amb_type,
                    r1,
                    r2,
                    cand.terse,
                    key,
                )
    return [found[k] for k in sorted(found)]


# ---------------------------------------------------------------------------
# Resolution and reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AmbiguityResult:
    ambiguity: Ambiguity
    status: str  # "resolved" | "unresolved" | "unknown"
    difference: LinComb | None


@dataclass(frozen=True)
class ConfluenceReport:
    results: tuple[AmbiguityResult, ...]
    verdict: str  # "confluent" | "not-confluent" | "unknown"
    advisory: bool  # True when the system is not sharp
    operadic: bool

    def counts(self) -> dict[str, int]:
        out = {"resolved": 0, "unresolved": 0, "unknown": 0}
        for r in self.results:
            out[r.status] += 1
        return out


def resolve(
    amb: Ambiguity,
    rules: Sequence[Rule],
    spec: OrderSpec | None = None,
    max_steps: int | None = None,
) -> AmbiguityResult:
    """Apply both reductions to the site and check joinability at the
    ambiguity type."""
    if amb.trivial:
        return AmbiguityResult(amb, "resolved", None)
    result = joinable(
        amb.reduct1,
        amb.reduct2,
        amb.amb_type,
        rules,
        max_steps=max_steps,
        order_backed=spec is not None,
    )
    if result.status == "yes":
        return AmbiguityResult(amb, "resolved", None)
    if result.status == "unknown":
        return AmbiguityResult(amb, "unknown", None)
    try:
        n1 = normalize(
            amb.reduct1, amb.amb_type, rules, max_steps=max_steps, order_backed=spec is not None
        )
        n2 = normalize(
            amb.reduct2, amb.amb_type, rules, max_steps=max_steps, order_backed=spec is not None
        )
        difference = n1 - n2
    except Exception:
        difference = amb.reduct1 - amb.reduct2
    return AmbiguityResult(amb, "unresolved", difference)


class IncompatibleRuleError(ValueError):
    def __init__(self, rule_id: str):
        super().__init__(f"rule {rule_id!r} is not compatible with the order")
        self.rule_id = rule_id


def confluence_report(
    rules: Sequence[Rule],
    spec: OrderSpec | None = None,
    max_steps: int | None = None,
) -> ConfluenceReport:
    """Enumerate ambiguities over all rule pairs and resolve each.

    For an all-sharp system a fully resolved report certifies unique
    normal forms; otherwise the report is advisory.
    """
    rules = sorted(rules, key=lambda r: r.rule_id)
    if spec is not None:
        for rule in rules:
            ok, _ = rule_compatible(rule, spec)
            if not ok:
                raise IncompatibleRuleError(rule.rule_id)
    results: list[AmbiguityResult] = []
    for i, s1 in enumerate(rules):
        for s2 in rules[i:]:
            for amb in enumerate_decisive(s1, s2):
                results.append(resolve(amb, rules, spec, max_steps))
    results.sort(key=lambda r: r.ambiguity.key)
    counts = {"resolved": 0, "unresolved": 0, "unknown": 0}
    for r in results:
        counts[r.status] += 1
    if counts["unresolved"]:
        verdict = "not-confluent"
    elif counts["unknown"]:
        verdict = "unknown"
    else:
        verdict = "confluent"
    advisory = not all(r.sharp for r in rules)
    operadic = all(r.coarity == 1 for r in rules)
    return ConfluenceReport(tuple(results), verdict, advisory, operadic)


class OrientationFailedError(ValueError):
    def __init__(self, difference: LinComb):
        super().__init__("cannot orient an unresolved difference")
        self.difference = difference


class LimitReachedError(RuntimeError):
    pass


def complete(
    rules: Sequence[Rule],
    spec: OrderSpec,
    max_rounds: int = 8,
    max_new_rules: int = 32,
    max_steps: int | None = None,
) -> tuple[list[Rule], ConfluenceReport]:
    """Standard completion: orient unresolved differences into new rules
    until the system is confluent or a limit is hit."""
    current = list(rules)
    added = 0
    for _ in range(max_rounds):
        report = confluence_report(current, spec, max_steps)
        bad = [r for r in report.results if r.status == "unresolved"]
        if not bad:
            return current, report
        progressed = False
        for res in bad:
            diff = res.difference
            if diff is None or diff.is_zero():
                continue
            rule = _orient(diff, spec, f"c{added}", current)
            if rule is None:
                raise OrientationFailedError(diff)
            current.append(rule)
            added += 1
            progressed = True
            if added > max_new_rules:
                raise LimitReachedError("too many generated rules")
        if not progressed:
            raise OrientationFailedError(bad[0].difference or LinComb.zero(0, 0))
    raise LimitReachedError("completion did not converge")


def _orient(diff: LinComb, spec: OrderSpec, rule_id: str, current: Sequence[Rule]) -> Rule | None:
    items = diff.items()
    for mu, coeff in items:
        if all(
            compare(nu, mu, spec) == LT for nu, _ in items if nu != mu
        ):
            rhs = LinComb.monomial(mu) - diff.scale(1 / coeff)
            try:
                rule = make_rule(rule_id, LinComb.monomial(mu), rhs, "sharp")
            except Exception:
                try:
                    rule = make_rule(rule_id, LinComb.monomial(mu), rhs, [])
                except Exception:
                    return None
            ok, _ = rule_compatible(rule, spec)
            if ok:
                return rule
    return None
