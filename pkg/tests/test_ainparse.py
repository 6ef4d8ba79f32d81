"""AIN parsing, printing, and the notation theorems."""

import itertools
from fractions import Fraction

import pytest

from netrw.ainparse import AinError, format_term, parse_rules, parse_term
from netrw.core import BoolMat, cross, parse_signature, same
from netrw.freeprop import (
    LinComb,
    compose,
    lc_compose,
    lc_sym_join,
    lc_tensor,
    phi,
    sym_join,
    tensor,
)
from netrw.rewrite import RuleError

from conftest import random_class, random_network


@pytest.fixture
def hsig():
    return parse_signature(
        "gen m 1 2\ngen S 1 1\ngen D 2 1\ngen eta 1 0\ngen eps 0 1\n"
    )


class TestParse:
    def test_closed_cross(self, hsig):
        assert parse_term("[ab|1|ba]", hsig) == LinComb.monomial(phi(cross(1, 1)))
        assert parse_term("[a b|1|b a]", hsig) == parse_term("[ab|1|ba]", hsig)

    def test_naked_equals_closed(self, hsig):
        assert parse_term("m^a_{b c} eta^b", hsig) == parse_term(
            "[a| m^a_{bc} eta^b |c]", hsig
        )

    def test_delta_rhs(self, hsig):
        assert parse_term("d^a_c", hsig) == LinComb.monomial(phi(same(1)))
        assert parse_term("delta^a_c", hsig) == LinComb.monomial(phi(same(1)))

    def test_antipode_axiom_lhs(self, hsig):
        x = parse_term("[b| m^b_{c d} S^c_e D^{e d}_a |a]", hsig)
        assert (x.coarity, x.arity) == (1, 1)
        assert len(x.monomials()[0].rep.deco) == 3

    def test_scalar_one(self, hsig):
        one = parse_term("1", hsig)
        assert one == LinComb.monomial(phi(same(0)))

    def test_coefficients(self, hsig):
        x = parse_term("2 m^a_bc - 1/2 m^a_bc", hsig)
        assert list(x.terms.values()) == [Fraction(3, 2)]

    def test_unknown_symbol(self, hsig):
        with pytest.raises(AinError, match="UnknownSymbol"):
            parse_term("zz^a_b", hsig)

    def test_arity_mismatch(self, hsig):
        with pytest.raises(AinError, match="ArityMismatch"):
            parse_term("m^a_b", hsig)

    def test_repeated_label(self, hsig):
        with pytest.raises(AinError, match="RepeatedLabel"):
            parse_term("S^a_b S^a_c", hsig)

    def test_cycle(self, hsig):
        with pytest.raises(AinError, match="CycleInTerm"):
            parse_term("[|S^a_b S^b_a|]", hsig)

    def test_leg_mismatch_across_terms(self, hsig):
        with pytest.raises(AinError, match="LegOrderMismatchAcrossTerms"):
            parse_term("S^a_b + S^a_c", hsig)


class TestRules:
    def test_hopf_file_loads_sharp(self, hsig):
        text = open("src/netrw/corpus/hopf.rules").read()
        rules = parse_rules(text, hsig)
        assert len(rules) == 14
        assert all(r.sharp for r in rules)

    def test_where_clause_zero(self, hsig):
        # the smallest feedback-typed rule instance: where a ~> e
        text = (
            "rule fb: m^b_cd m^c_ef S^d_g d^f_h D^{a h}_i D^{i g}_j"
            " -> d^a_j d^b_e where a ~> e"
        )
        rule = parse_rules(text, hsig)[0]
        # lhs legs: outputs (b, a), inputs (e, j); the declared zero at
        # (a, e) coincides with the transference zero, so the rule is sharp
        assert rule.qtype.get(1, 0) == 0
        assert sum(sum(row) for row in rule.qtype.to_rows()) == 3
        assert rule.sharp and rule.qtype == rule.lhs.tr

    def test_duplicate_id(self, hsig):
        with pytest.raises(AinError):
            parse_rules("rule a: d^x_y -> d^x_y\nrule a: d^x_y -> d^x_y", hsig)

    def test_rhs_inherits_lhs_legs(self, hsig):
        rule = parse_rules("rule r: m^a_bc eta^b -> d^a_c", hsig)[0]
        assert rule.lhs.coarity == 1 and rule.lhs.arity == 1
        assert rule.rhs == LinComb.monomial(phi(same(1)))


class TestFormat:
    def test_cross_format(self):
        sig = parse_signature("gen m 1 2")
        assert format_term(LinComb.monomial(phi(cross(1, 1)))) == "[a b|1|b a]"

    def test_roundtrip_random(self, rng, hsig):
        for _ in range(300):
            x = LinComb.monomial(random_class(rng, list(hsig), max_inner=4))
            assert parse_term(format_term(x), hsig) == x

    def test_roundtrip_combinations(self, rng, hsig):
        for _ in range(50):
            a = random_class(rng, list(hsig), max_inner=3)
            b = random_class(rng, list(hsig), max_inner=3)
            if (a.coarity, a.arity) != (b.coarity, b.arity):
                continue
            x = LinComb.monomial(a, Fraction(2, 3)) + LinComb.monomial(b, -2)
            assert parse_term(format_term(x), hsig) == x

    def test_zero(self, hsig):
        assert format_term(LinComb.zero(1, 1)) == "0"



def render_with(cls, names):
    """Closed-form text for a class with a chosen edge -> label table."""
    rep = cls.rep
    outs = [names[rep.in_edge(0, i)] for i in range(1, rep.coarity + 1)]
    ins = [names[rep.out_edge(1, j)] for j in range(1, rep.arity + 1)]
    factors = []
    for v in rep.inner_vertices():
        sym = rep.deco[v]
        piece = sym.name
        if sym.coarity:
            piece += "^{" + " ".join(names[e] for e in rep.out_edges(v)) + "}"
        if sym.arity:
            piece += "_{" + " ".join(names[e] for e in rep.in_edges(v)) + "}"
        factors.append(piece)
    body = " ".join(factors) if factors else "1"
    return "[{}|{}|{}]".format(" ".join(outs), body, " ".join(ins))


ALPHABET = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"


class TestNotationTheorems:
    def test_factor_order_independence(self, rng, hsig):
        # permuting the factors of a product leaves the class unchanged
        for _ in range(300):
            x = random_class(rng, list(hsig), max_inner=4)
            text = format_term(LinComb.monomial(x))
            outs, body, ins = text[1:-1].split("|")
            factors = body.split()
            if body == "1" or len(factors) < 2:
                continue
            rng.shuffle(factors)
            scrambled = f"[{outs}|{' '.join(factors)}|{ins}]"
            assert parse_term(scrambled, hsig) == LinComb.monomial(x)

    def test_label_renaming_independence(self, rng, hsig):
        for _ in range(300):
            x = random_class(rng, list(hsig), max_inner=3)
            pool = list(ALPHABET)
            rng.shuffle(pool)
            names = {e: pool[k] for k, e in enumerate(sorted(x.rep.edges))}
            renamed = render_with(x, names)
            assert parse_term(renamed, hsig) == LinComb.monomial(x), renamed

    def test_concatenation_is_composition(self, rng, hsig):
        # [a|M|b] o [b|N|c] == [a|M N|c]
        cases = 0
        while cases < 300:
            a = random_class(rng, list(hsig), max_inner=2)
            b = random_class(rng, list(hsig), max_inner=2)
            if a.arity != b.coarity:
                continue
            if len(a.rep.edges) + len(b.rep.edges) > len(ALPHABET):
                continue
            whole = compose(a, b)
            names_a = {e: ALPHABET[k] for k, e in enumerate(sorted(a.rep.edges))}
            off = len(a.rep.edges)
            names_b = {e: ALPHABET[off + k] for k, e in enumerate(sorted(b.rep.edges))}
            # identify b's output legs with a's input legs
            for j in range(1, a.arity + 1):
                names_b[b.rep.in_edge(0, j)] = names_a[a.rep.out_edge(1, j)]
            ta = render_with(a, names_a)[1:-1].split("|")
            tb = render_with(b, names_b)[1:-1].split("|")
            body1 = "" if ta[1] == "1" else ta[1]
            body2 = "" if tb[1] == "1" else tb[1]
            body = (body1 + " " + body2).strip() or "1"
            glued = f"[{ta[0]}|{body}|{tb[2]}]"
            assert parse_term(glued, hsig) == LinComb.monomial(whole), glued
            cases += 1

    def test_juxtaposition_is_tensor(self, rng, hsig):
        # [a|M|b] (x) [c|N|d] == [a c|M N|b d]
        cases = 0
        while cases < 300:
            a = random_class(rng, list(hsig), max_inner=2)
            b = random_class(rng, list(hsig), max_inner=2)
            if len(a.rep.edges) + len(b.rep.edges) > len(ALPHABET):
                continue
            whole = tensor(a, b)
            names_a = {e: ALPHABET[k] for k, e in enumerate(sorted(a.rep.edges))}
            off = len(a.rep.edges)
            names_b = {e: ALPHABET[off + k] for k, e in enumerate(sorted(b.rep.edges))}
            ta = render_with(a, names_a)[1:-1].split("|")
            tb = render_with(b, names_b)[1:-1].split("|")
            body1 = "" if ta[1] == "1" else ta[1]
            body2 = "" if tb[1] == "1" else tb[1]
            body = (body1 + " " + body2).strip() or "1"
            glued = "[{} {}|{}|{} {}]".format(ta[0], tb[0], body, ta[2], tb[2])
            glued = glued.replace("[ ", "[").replace(" |", "|").replace("| ", "|")
            assert parse_term(glued, hsig) == LinComb.monomial(whole), glued
            cases += 1

    def test_factor_group_rejoin(self, rng, hsig):
        # splitting the factors of a parsed product into two groups and
        # re-joining with the symmetric join reproduces the whole
        cases = 0
        while cases < 200:
            x = random_class(rng, list(hsig), max_inner=4, max_strays=0)
            rep = x.rep
            inner = rep.inner_vertices()
            if len(inner) < 2:
                continue
            group1 = set(rng.sample(inner, rng.randint(1, len(inner) - 1)))
            names = {}
            alphabet = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
            for e in sorted(rep.edges):
                names[e] = alphabet[e]

            def owner(e):
                ends = rep.edges[e]
                producer = ends.tail if ends.tail != 1 else None
                consumer = ends.head if ends.head != 0 else None
                return producer, consumer

            outs1, outs2, ins1, ins2 = [], [], [], []
            for i in range(1, rep.coarity + 1):
                e = rep.in_edge(0, i)
                (outs1 if rep.edges[e].tail in group1 else outs2).append(names[e])
            for j in range(1, rep.arity + 1):
                e = rep.out_edge(1, j)
                ends = rep.edges[e]
                target = ends.head in group1 if ends.head != 0 else (
                    ends.tail in group1 if ends.tail != 1 else True
                )
                (ins1 if target else ins2).append(names[e])
            qlist, rlist = [], []
            for e, ends in sorted(rep.edges.items()):
                if ends.head in (0,) or ends.tail in (1,):
                    continue
                p_in_1 = ends.tail in group1
                c_in_1 = ends.head in group1
                if p_in_1 and not c_in_1:
                    rlist.append(names[e])
                elif c_in_1 and not p_in_1:
                    qlist.append(names[e])

            def factors_for(group):
                out = []
                for v in rep.inner_vertices():
                    if v not in group:
                        continue
                    sym = rep.deco[v]
                    piece = sym.name
                    if sym.coarity:
                        piece += "^{" + " ".join(names[e] for e in rep.out_edges(v)) + "}"
                    if sym.arity:
                        piece += "_{" + " ".join(names[e] for e in rep.in_edges(v)) + "}"
                    out.append(piece)
                return " ".join(out) or "1"

            group2 = set(inner) - group1
            k_text = "[{}|{}|{}]".format(
                " ".join(outs1 + rlist), factors_for(group1), " ".join(ins1 + qlist)
            )
            h_text = "[{}|{}|{}]".format(
                " ".join(qlist + outs2), factors_for(group2), " ".join(rlist + ins2)
            )
            k = parse_term(k_text, hsig)
            h = parse_term(h_text, hsig)
            joined = lc_sym_join(k, len(rlist), len(qlist), h)
            whole_text = "[{}|{}|{}]".format(
                " ".join(outs1 + outs2),
                factors_for(group1) + " " + factors_for(group2),
                " ".join(ins1 + ins2),
            )
            whole = parse_term(whole_text, hsig)
            assert joined == whole, (k_text, h_text)
            cases += 1
