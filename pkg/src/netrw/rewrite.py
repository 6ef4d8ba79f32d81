"""Rules, simple reductions, normalization, irreducibility, and
joinability over the typed modules of the free linear PROP."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import BoolMat
from .freeprop import LinComb, NetClass, lc, lc_annex
from .match import complement, context_type_ok, find_embeddings, strong_embeddings


class RuleError(ValueError):
    pass


class BudgetExceededError(RuntimeError):
    def __init__(self, partial: LinComb, steps: int):
        super().__init__(f"reduction budget exhausted after {steps} steps")
        self.partial = partial
        self.steps = steps


@dataclass(frozen=True)
class Rule:
    """A rewrite rule (transference type, lhs monomial, rhs combination)."""

    rule_id: str
    qtype: BoolMat
    lhs: NetClass
    rhs: LinComb
    sharp: bool

    @property
    def coarity(self) -> int:
        return self.lhs.coarity

    @property
    def arity(self) -> int:
        return self.lhs.arity


def make_rule(
    rule_id: str,
    lhs: NetClass | LinComb,
    rhs: NetClass | LinComb,
    typespec="sharp",
) -> Rule:
    """Assemble and check a rule.

    ``typespec`` is ``"sharp"`` (type = lhs transference), a list of
    0-based ``(output, input)`` positions to zero out of the all-ones
    type, or an explicit :class:`BoolMat`.
    """
    lhs_lc = lc(lhs)
    if not lhs_lc.is_monomial() or lhs_lc.items()[0][1] != 1:
        raise RuleError(f"rule {rule_id!r}: LhsNotMonomial")
    mu = lhs_lc.monomials()[0]
    rhs_lc = lc(rhs)
    if (rhs_lc.coarity, rhs_lc.arity) != (mu.coarity, mu.arity):
        raise RuleError(f"rule {rule_id!r}: lhs and rhs shapes differ")

    if typespec == "sharp":
        q = mu.tr
        sharp = True
    elif isinstance(typespec, BoolMat):
        q = typespec
        sharp = q == mu.tr
    else:
        q = BoolMat.ones(mu.coarity, mu.arity)
        for i, j in typespec:
            q = q.set(i, j, 0)
        sharp = q == mu.tr
    if (q.rows, q.cols) != (mu.coarity, mu.arity):
        raise RuleError(f"rule {rule_id!r}: type shape mismatch")
    if not mu.tr.leq(q):
        raise RuleError(f"rule {rule_id!r}: TrExceedsType")
    for pos, (term, _) in enumerate(rhs_lc.items()):
        if not term.tr.leq(q):
            raise RuleError(f"rule {rule_id!r}: RhsOutsideType(term {pos})")
    return Rule(rule_id, q, mu, rhs_lc, sharp)


@dataclass(frozen=True)
class ReductionStep:
    rule_id: str
    context: NetClass
    before: NetClass
    after: LinComb
    coefficient: Fraction


@dataclass
class Redex:
    """One admissible simple reduction site inside a combination."""

    monomial: NetClass
    coefficient: Fraction
    rule: Rule
    context: NetClass


def _monomial_redexes(nu: NetClass, q: BoolMat, rules: Sequence[Rule]):
    """Yield (rule, context K) pairs admissible at ambient type q, in the
    deterministic redex order."""
    for rule in sorted(rules, key=lambda r: r.rule_id):
        pattern = rule.lhs.rep
        for emb in find_embeddings(pattern, nu.rep):
            for se in strong_embeddings(emb, pattern, nu.rep):
                ctx = complement(nu.rep, pattern, se)
                if context_type_ok(ctx.tr, rule.qtype, q):
                    yield rule, ctx


def _check_types(x: LinComb, q: BoolMat) -> None:
    if (q.rows, q.cols) != (x.coarity, x.arity):
        raise RuleError("ambient type shape mismatch")
    for t in x.monomials():
        if not t.tr.leq(q):
            raise RuleError("combination outside ambient type")


def reduce_once(
    x: LinComb, q: BoolMat, rules: Sequence[Rule]
) -> tuple[LinComb, ReductionStep] | None:
    """Apply the first admissible simple reduction, or None if irreducible.

    Redexes are tried in a reproducible order: monomials by canonical
    code, rules by id, occurrences by canonical order.
    """
    _check_types(x, q)
    for nu, coeff in x.items():
        for rule, ctx in _monomial_redexes(nu, q, rules):
            replacement = lc_annex(ctx, rule.rhs)
            out = x + (replacement - LinComb.monomial(nu)).scale(coeff)
            step = ReductionStep(rule.rule_id, ctx, nu, replacement, coeff)
            return out, step
    return None


def all_single_steps(x: LinComb, q: BoolMat, rules: Sequence[Rule]) -> list[LinComb]:
    """Every result of one simple reduction acting nontrivially on x."""
    _check_types(x, q)
    seen = set()
    out = []
    for nu, coeff in x.items():
        for rule, ctx in _monomial_redexes(nu, q, rules):
            replacement = lc_annex(ctx, rule.rhs)
            result = x + (replacement - LinComb.monomial(nu)).scale(coeff)
            if result not in seen:
                seen.add(result)
                out.append(result)
    return out


def is_irreducible(x: LinComb, q: BoolMat, rules: Sequence[Rule]) -> bool:
    return reduce_once(x, q, rules) is None


def normalize(
    x: LinComb,
    q: BoolMat,
    rules: Sequence[Rule],
    max_steps: int | None = None,
    order_backed: bool = False,
    trace: list[ReductionStep] | None = None,
) -> LinComb:
    """Reduce to a fixpoint of :func:`reduce_once`.

    With ``order_backed`` the caller asserts the rules are compatible with
    a well-founded order, so no step bound is needed; otherwise
    ``max_steps`` bounds the run and :class:`BudgetExceededError` carries
    the partial result.
    """
    if not order_backed and max_steps is None:
        raise ValueError("normalize needs either order_backed or max_steps")
    steps = 0
    cur = x
    while True:
        hit = reduce_once(cur, q, rules)
        if hit is None:
            return cur
        cur, step = hit
        if trace is not None:
            trace.append(step)
        steps += 1
        if max_steps is not None and steps >= max_steps:
            if reduce_once(cur, q, rules) is None:
                return cur
            raise BudgetExceededError(cur, steps)


@dataclass(frozen=True)
class JoinResult:
    status: str  # "yes" | "no" | "unknown"
    common: LinComb | None = None

    @property
    def joined(self) -> bool:
        return self.status == "yes"


def joinable(
    x: LinComb,
    y: LinComb,
    q: BoolMat,
    rules: Sequence[Rule],
    max_steps: int | None = None,
    order_backed: bool = False,
) -> JoinResult:
    """Search for reductions taking x and y to a common form.

    First the deterministic normal forms are compared; on a mismatch a
    bidirectional breadth-first search over all one-step reducts runs to
    the given depth.  "no" is only reported when both reachable sets are
    fully explored.
    """
    if x == y:
        return JoinResult("yes", x)
    try:
        nx = normalize(x, q, rules, max_steps=max_steps, order_backed=order_backed)
        ny = normalize(y, q, rules, max_steps=max_steps, order_backed=order_backed)
    except BudgetExceededError:
        return JoinResult("unknown")
    if nx == ny:
        return JoinResult("yes", nx)

    seen_x = {x, nx}
    seen_y = {y, ny}
    frontier_x = [x]
    frontier_y = [y]
    depth = 0
    while frontier_x or frontier_y:
        if max_steps is not None and depth >= max_steps:
            return JoinResult("unknown")
        depth += 1
        new_x = []
        for z in frontier_x:
            for w in all_single_steps(z, q, rules):
                if w not in seen_x:
                    seen_x.add(w)
                    new_x.append(w)
        new_y = []
        for z in frontier_y:
            for w in all_single_steps(z, q, rules):
                if w not in seen_y:
                    seen_y.add(w)
                    new_y.append(w)
        common = seen_x & seen_y
        if common:
            return JoinResult("yes", sorted(common, key=_lc_key)[0])
        frontier_x, frontier_y = new_x, new_y
    return JoinResult("no")


def _lc_key(x: LinComb):
    return tuple((t.code, c) for t, c in x.items())


def format_step(step: ReductionStep, fmt=None) -> str:
    """Serialize a step record; ``fmt`` renders combinations (defaults to repr)."""
    if fmt is None:
        fmt = repr
    return (
        f"apply {step.rule_id} at {fmt(LinComb.monomial(step.context))} : "
        f"{fmt(LinComb.monomial(step.before))} -> {fmt(step.after)}"
    )
