import itertools

import pytest

from uageom.errors import ParseError, TermError
from uageom.terms import (
    App,
    Signature,
    Var,
    enumerate_terms,
    format_term,
    parse_signature,
    parse_term,
    replace_symbols,
    substitute,
    term_depth,
    term_sort_key,
    term_vars,
)

GROUP = parse_signature("mul/2, inv/1, e/0")
MEET = parse_signature("meet/2")


def t(text, sig=GROUP, nvars=3):
    return parse_term(text, sig, nvars)


class TestParseSignature:
    def test_group_signature(self):
        sig = parse_signature("mul/2, inv/1, e/0")
        assert sig.symbols == (("mul", 2), ("inv", 1), ("e", 0))

    def test_single_symbol(self):
        assert parse_signature("meet/2").symbols == (("meet", 2),)

    def test_duplicate_name_rejected(self):
        with pytest.raises(ParseError, match="duplicate"):
            parse_signature("meet/2, meet/1")

    def test_variable_shaped_name_rejected(self):
        with pytest.raises(ParseError, match="variable"):
            parse_signature("x1/2")

    def test_error_carries_position(self):
        with pytest.raises(ParseError, match="line 1"):
            parse_signature("meet/")


class TestParseTerm:
    def test_application(self):
        assert t("mul(x2,x1)", nvars=2) == App("mul", (Var(2), Var(1)))

    def test_variable(self):
        assert t("x1", nvars=2) == Var(1)

    def test_arity_mismatch(self):
        with pytest.raises(ParseError, match="expects 2 arguments"):
            t("mul(x1)", nvars=2)

    def test_unknown_symbol(self):
        with pytest.raises(ParseError, match="unknown symbol"):
            t("join(x1,x2)", sig=MEET, nvars=2)

    def test_variable_outside_varset(self):
        with pytest.raises(ParseError, match="exceeds"):
            t("x3", nvars=2)

    def test_bare_constant_sugar(self):
        assert t("e") == App("e", ())
        assert t("e()") == App("e", ())

    def test_trailing_input(self):
        with pytest.raises(ParseError, match="trailing"):
            t("x1 x2", nvars=2)

    def test_whitespace_insignificant(self):
        assert t(" mul ( x1 ,\n x2 ) ", nvars=2) == t("mul(x1,x2)", nvars=2)


class TestSubstitute:
    def test_simultaneous(self):
        term = t("mul(x1,x2)", nvars=2)
        out = substitute(term, {1: t("e"), 2: Var(1)})
        assert out == t("mul(e,x1)", nvars=1)

    def test_identity(self):
        assert substitute(Var(1), {1: Var(1)}) == Var(1)

    def test_duplicating(self):
        term = t("meet(x1,x1)", sig=MEET, nvars=1)
        rep = t("meet(x1,x2)", sig=MEET, nvars=2)
        assert substitute(term, {1: rep}) == parse_term(
            "meet(meet(x1,x2),meet(x1,x2))", MEET, 2
        )

    def test_unmapped_variable(self):
        with pytest.raises(TermError, match="unmapped"):
            substitute(t("mul(x1,x2)", nvars=2), {1: Var(1)})

    def test_composition_law(self):
        # substitute(substitute(t, a), b) == substitute(t, b after a)
        a = {1: t("mul(x1,x2)", nvars=2), 2: Var(1)}
        b = {1: t("inv(x2)", nvars=2), 2: t("e")}
        composed = {i: substitute(v, b) for i, v in a.items()}
        for text in ["mul(x1,x2)", "inv(mul(x2,x1))", "mul(mul(x1,x1),x2)"]:
            term = t(text, nvars=2)
            assert substitute(substitute(term, a), b) == substitute(term, composed)


class TestTermVars:
    def test_two_vars(self):
        assert term_vars(t("mul(x2,x1)", nvars=2)) == {1, 2}

    def test_constant(self):
        assert term_vars(t("e")) == set()

    def test_repeated(self):
        assert term_vars(t("meet(x1,x1)", sig=MEET, nvars=1)) == {1}


class TestEnumerate:
    def test_meet_one_var_depth1(self):
        got = list(enumerate_terms(MEET, 1, 1))
        assert got == [Var(1), parse_term("meet(x1,x1)", MEET, 1)]

    def test_meet_two_vars_depth0(self):
        assert list(enumerate_terms(MEET, 2, 0)) == [Var(1), Var(2)]

    def test_unary_chain(self):
        sig = parse_signature("f/1")
        got = [format_term(x) for x in enumerate_terms(sig, 1, 2)]
        assert got == ["x1", "f(x1)", "f(f(x1))"]

    def test_constants_are_depth_zero(self):
        got = [format_term(x) for x in enumerate_terms(GROUP, 1, 0)]
        assert got == ["x1", "e()"]

    def test_no_duplicates_and_sorted(self):
        for sig, k in [(MEET, 2), (GROUP, 1)]:
            got = list(enumerate_terms(sig, k, 2))
            assert len(got) == len(set(got))
            keys = [term_sort_key(x, sig) for x in got]
            assert keys == sorted(keys)

    def test_depth_bound_exact(self):
        for term in enumerate_terms(GROUP, 2, 2):
            assert term_depth(term) <= 2

    def test_restartable(self):
        first = list(enumerate_terms(MEET, 1, 2))
        second = list(enumerate_terms(MEET, 1, 2))
        assert first == second


class TestReplaceSymbols:
    def test_rename(self):
        sig = parse_signature("mul/2, mulop/2")
        term = parse_term("mul(x2,x1)", sig, 2)
        assert replace_symbols(term, {"mul": "mulop"}) == parse_term(
            "mulop(x2,x1)", sig, 2
        )

    def test_expand_template(self):
        template = t("mul(x2,x1)", nvars=2)
        term = t("mul(x1,x2)", nvars=2)
        assert replace_symbols(term, {"mul": template}) == t("mul(x2,x1)", nvars=2)

    def test_degenerate_projection_template(self):
        # bottom-up: the inner application collapses first, then the outer
        sig = parse_signature("meet*/2")
        term = parse_term("meet*(meet*(x1,x2),x2)", sig, 2)
        assert replace_symbols(term, {"meet*": Var(1)}) == Var(1)

    def test_unmapped_symbols_untouched(self):
        term = t("mul(inv(x1),e)", nvars=1)
        assert replace_symbols(term, {"inv": "inv"}) == term

    def test_template_arity_mismatch(self):
        with pytest.raises(TermError, match="template"):
            replace_symbols(t("inv(x1)", nvars=1), {"inv": t("mul(x1,x2)", nvars=2)})


class TestRoundTrip:
    @pytest.mark.parametrize("sig,k", [(MEET, 2), (GROUP, 2)])
    def test_print_parse_round_trip_depth3(self, sig, k):
        count = 0
        for term in itertools.islice(enumerate_terms(sig, k, 3), 4000):
            assert parse_term(format_term(term), sig, k) == term
            count += 1
        assert count > 10
