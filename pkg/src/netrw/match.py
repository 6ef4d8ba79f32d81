"""Redex location: embeddings of a pattern network into a subject,
strong embeddings (segment labelings), complement extraction, and
context-type admissibility."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from .core import BoolMat, bm_blocks
from .freeprop import NetClass, class_of
from .network import Edge, Network


@dataclass(frozen=True)
class Embedding:
    """An occurrence of a pattern inside a subject.

    ``vertex_map`` sends pattern inner vertices injectively to equally
    decorated subject inner vertices; ``edge_map`` sends pattern edges to
    subject edges, with leg pairs allowed to share an image.
    """

    vertex_map: tuple[tuple[int, int], ...]  # sorted (pattern vertex, subject vertex)
    edge_map: tuple[tuple[int, int], ...]  # sorted (pattern edge, subject edge)

    def chi(self) -> dict[int, int]:
        return dict(self.vertex_map)

    def psi(self) -> dict[int, int]:
        return dict(self.edge_map)


@dataclass(frozen=True)
class StrongEmbedding:
    """An embedding enriched with injective segment labels (mod m)."""

    base: Embedding
    modulus: int
    segment_map: tuple[tuple[int, int], ...]  # (pattern edge, segment label)

    def psi_prime(self) -> dict[int, int]:
        return dict(self.segment_map)


def _embedding_ok(pattern: Network, subject: Network, chi: dict[int, int], psi: dict[int, int]) -> bool:
    if len(set(chi.values())) != len(chi):
        return False
    for v, w in chi.items():
        if w in (0, 1) or pattern.deco[v] != subject.deco[w]:
            return False
    for e, x in psi.items():
        ends = pattern.edges[e]
        sub = subject.edges[x]
        if ends.head != 0:
            if sub.head != chi[ends.head] or sub.hindex != ends.hindex:
                return False
        if ends.tail != 1:
            if sub.tail != chi[ends.tail] or sub.tindex != ends.tindex:
                return False
    by_image: dict[int, list[int]] = {}
    for e, x in psi.items():
        by_image.setdefault(x, []).append(e)
    for edges in by_image.values():
        for e, f in itertools.combinations(edges, 2):
            pe, pf = pattern.edges[e], pattern.edges[f]
            if not (
                (pe.head == 0 and pf.tail == 1) or (pe.tail == 1 and pf.head == 0)
            ):
                return False
    return True


def _pattern_components(pattern: Network) -> tuple[list[list[int]], list[int]]:
    """Inner-vertex components (each a sorted vertex list) and stray edges."""
    inner = pattern.inner_vertices()
    parent = {v: v for v in inner}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    strays = []
    for e, ends in pattern.edges.items():
        if ends.head == 0 and ends.tail == 1:
            strays.append(e)
        elif ends.head != 0 and ends.tail != 1:
            a, b = find(ends.head), find(ends.tail)
            if a != b:
                parent[a] = b
    comps: dict[int, list[int]] = {}
    for v in inner:
        comps.setdefault(find(v), []).append(v)
    return [sorted(c) for c in comps.values()], sorted(strays)


def _grow_component(
    pattern: Network,
    subject: Network,
    anchor: int,
    image: int,
) -> tuple[dict[int, int], dict[int, int]] | None:
    """Propagate the anchor choice through ordered ports; None on clash."""
    if subject.deco.get(image) != pattern.deco[anchor]:
        return None
    chi = {anchor: image}
    psi: dict[int, int] = {}
    queue = [anchor]
    while queue:
        v = queue.pop()
        w = chi[v]
        for e in pattern.in_edges(v) + pattern.out_edges(v):
            ends = pattern.edges[e]
            if ends.head == v:
                x = subject.in_edge(w, ends.hindex)
            else:
                x = subject.out_edge(w, ends.tindex)
            if e in psi:
                if psi[e] != x:
                    return None
                continue
            psi[e] = x
            sub = subject.edges[x]
            for pv, sv, sidx, pidx in (
                (ends.head, sub.head, sub.hindex, ends.hindex),
                (ends.tail, sub.tail, sub.tindex, ends.tindex),
            ):
                if pv in (0, 1):
                    continue
                if sv in (0, 1):
                    return None
                if pattern.deco[pv] != subject.deco.get(sv) or sidx != pidx:
                    return None
                if pv in chi:
                    if chi[pv] != sv:
                        return None
                else:
                    chi[pv] = sv
                    queue.append(pv)
    return chi, psi


def find_embeddings(pattern: Network, subject: Network) -> list[Embedding]:
    """All embeddings of ``pattern`` into ``subject``, in a deterministic
    order.  One anchor vertex per pattern component is tried against every
    equally decorated subject vertex; stray pattern edges may land on any
    subject edge."""
    comps, strays = _pattern_components(pattern)
    per_comp: list[list[tuple[dict[int, int], dict[int, int]]]] = []
    for comp in comps:
        anchor = comp[0]
        found = []
        for w in subject.inner_vertices():
            grown = _grow_component(pattern, subject, anchor, w)
            if grown is not None:
                found.append(grown)
        if not found:
            return []
        per_comp.append(found)

    subject_edges = sorted(subject.edges)
    results = []
    for combo in itertools.product(*per_comp):
        chi: dict[int, int] = {}
        psi: dict[int, int] = {}
        used = set()
        ok = True
        for part_chi, part_psi in combo:
            if used & set(part_chi.values()):
                ok = False
                break
            used |= set(part_chi.values())
            chi.update(part_chi)
            psi.update(part_psi)
        if not ok:
            continue
        for stray_images in itertools.product(subject_edges, repeat=len(strays)):
            full_psi = dict(psi)
            for e, x in zip(strays, stray_images):
                full_psi[e] = x
            if _embedding_ok(pattern, subject, chi, full_psi):
                results.append(
                    Embedding(
                        tuple(sorted(chi.items())), tuple(sorted(full_psi.items()))
                    )
                )
    results.sort(key=lambda emb: (emb.vertex_map, emb.edge_map))
    return results


def strong_embeddings(
    emb: Embedding, pattern: Network, subject: Network, dedup: bool = True
) -> list[StrongEmbedding]:
    """All segment labelings of an embedding.

    Pattern edges sharing a subject edge are ordered tail to head: an edge
    with an inner tail is the tailmost segment, one with an inner head is
    the headmost, and stray edges fill the remaining slots in every
    possible order.  When ``dedup`` is set, labelings with isomorphic
    complements are reported once.
    """
    psi = emb.psi()
    m = max(subject.edges, default=0) + 1
    classes: dict[int, list[int]] = {}
    for e in sorted(psi):
        classes.setdefault(psi[e], []).append(e)

    per_class: list[list[dict[int, int]]] = []
    for x, members in sorted(classes.items()):
        first = [e for e in members if pattern.edges[e].tail != 1]
        last = [e for e in members if pattern.edges[e].head != 0]
        middle = [e for e in members if e not in first and e not in last]
        assignments = []
        if len(members) == 1:
            assignments.append({members[0]: 0})
        else:
            slots = list(range(len(members)))
            fixed: dict[int, int] = {}
            if first:
                fixed[first[0]] = slots.pop(0)
            if last:
                fixed[last[0]] = slots.pop()
            for order in itertools.permutations(middle):
                theta = dict(fixed)
                for slot, e in zip(slots, order):
                    theta[e] = slot
                assignments.append(theta)
        per_class.append(assignments)

    out = []
    seen = set()
    for combo in itertools.product(*per_class):
        theta: dict[int, int] = {}
        for part in combo:
            theta.update(part)
        seg = {e: psi[e] + m * theta[e] for e in psi}
        se = StrongEmbedding(emb, m, tuple(sorted(seg.items())))
        if dedup:
            key = complement(subject, pattern, se).code
            if key in seen:
                continue
            seen.add(key)
        out.append(se)
    return out


def complement(subject: Network, pattern: Network, se: StrongEmbedding) -> NetClass:
    """The context K with class(subject) = annex(class(K), class(pattern)).

    Follows the padding construction: segment labels donate edge ids, the
    context keeps the subject vertices outside the embedding, and the
    extra legs of K line up with the pattern's legs.
    """
    chi = se.base.chi()
    psi = se.psi_prime()
    m = se.modulus
    image = set(chi.values())
    keep = subject.vertices - image

    seg_of_leg = {}
    for e, label in psi.items():
        ends = pattern.edges[e]
        if ends.head == 0 or ends.tail == 1:
            seg_of_leg[label] = e
    s_values = sorted(seg_of_leg)
    s_by_residue: dict[int, list[int]] = {}
    for f in s_values:
        s_by_residue.setdefault(f % m, []).append(f)

    edges: dict[int, Edge] = {}
    omega_g, alpha_g = subject.coarity, subject.arity

    for e, ends in subject.edges.items():
        seg = s_by_residue.get(e, [])
        head_in_k = ends.head in keep
        tail_in_k = ends.tail in keep
        if not seg:
            if head_in_k and tail_in_k:
                edges[e] = ends
            continue
        if head_in_k:
            label = m + max(seg)
            h, g = ends.head, ends.hindex
            prev = max(f for f in seg if f < label)
            donor = seg_of_leg[prev]
            edges[label] = Edge(h, g, 1, alpha_g + pattern.edges[donor].hindex)
        if tail_in_k:
            label = min(seg)
            leg = seg_of_leg[label]
            edges[label] = Edge(
                0, omega_g + pattern.edges[leg].tindex, ends.tail, ends.tindex
            )
        for label in seg:
            if label == min(seg):
                continue
            leg = seg_of_leg[label]
            prev = max(f for f in seg if f < label)
            donor = seg_of_leg[prev]
            edges[label] = Edge(
                0,
                omega_g + pattern.edges[leg].tindex,
                1,
                alpha_g + pattern.edges[donor].hindex,
            )
    deco = {v: subject.deco[v] for v in keep - {0, 1}}
    return class_of(Network(keep, edges, deco))


def context_type_ok(k_tr: BoolMat, q_rule: BoolMat, q_ambient: BoolMat) -> bool:
    """Admissibility of a context K for a rule of type q_rule inside an
    ambient type q_ambient."""
    omega_g = q_ambient.rows
    alpha_g = q_ambient.cols
    p11, p12, p21, p22 = bm_blocks(k_tr, omega_g, alpha_g)
    loop = p22.mul(q_rule)
    if not loop.is_nilpotent():
        return False
    induced = p11.add(p12.mul(q_rule).mul(loop.star()).mul(p21))
    return induced.leq(q_ambient)
