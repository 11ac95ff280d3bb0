import itertools

import pytest

from uageom.algebras import hom_set, is_homomorphism
from uageom.corpus import (
    BAND_SIG,
    GROUP_SIG,
    MEET_SIG,
    opposite_band_system,
    opposite_group_system,
    rect_band,
    s2,
    s2xs2,
    s3,
    s3_transposed,
    trivial_meet,
    var_rect_band,
    var_s2,
    var_s3,
    var_z2,
    var_z3,
    z2,
    z3,
)
from uageom.errors import AlgebraError, WordSystemError
from uageom.free import variety_membership
from uageom.terms import Var, format_term, parse_term
from uageom.verbal import (
    BijectionSystem,
    WordSystem,
    bijections_from_words,
    check_b1_b2,
    check_op1,
    check_op2,
    derived_operation,
    enumerate_word_systems,
    identity_system,
    inverse_word_system,
    star_algebra,
    strongly_stable_action,
    systems_semantically_equal,
    verify_zhito,
    words_from_bijections,
)


def pt(text, sig, k=2):
    return parse_term(text, sig, k)


def projection_system():
    return WordSystem(MEET_SIG, {"meet": Var(1)})


class TestCheckOp1:
    def test_opposite_word_ok(self):
        assert check_op1(opposite_group_system())

    def test_unary_word_with_second_variable(self):
        ws = WordSystem(
            GROUP_SIG,
            {"mul": pt("mul(x1,x2)", GROUP_SIG), "inv": pt("mul(x1,x2)", GROUP_SIG), "e": pt("e", GROUP_SIG)},
        )
        assert not check_op1(ws)

    def test_constant_word(self):
        assert check_op1(identity_system(GROUP_SIG))


class TestStarAlgebra:
    def test_identity_system_reproduces_tables(self):
        for h in (s2(), z3(), s3()):
            star = star_algebra(h, identity_system(h.signature))
            assert star.tables == h.tables

    def test_opposite_on_abelian_is_same(self):
        star = star_algebra(z3(), opposite_group_system())
        assert star.tables == z3().tables

    def test_opposite_on_s3_transposes(self):
        star = star_algebra(s3(), opposite_group_system())
        base = s3().tables["mul"]
        transposed = tuple(tuple(base[b][a] for b in range(6)) for a in range(6))
        assert star.tables["mul"] == transposed
        assert star.tables["inv"] == s3().tables["inv"]

    def test_op1_violation_rejected(self):
        bad = WordSystem(
            GROUP_SIG,
            {"mul": pt("mul(x1,x2)", GROUP_SIG), "inv": pt("mul(x1,x2)", GROUP_SIG), "e": pt("e", GROUP_SIG)},
        )
        with pytest.raises(WordSystemError):
            star_algebra(s3(), bad)


class TestDerivedOperation:
    def test_identity_bijection(self):
        assert derived_operation(s2(), (0, 1), "meet") == s2().tables["meet"]

    def test_swap_on_z2(self):
        # conjugation by the swap: s(s^-1(a) + s^-1(b)) = a + b + 1 mod 2
        table = derived_operation(z2(), (1, 0), "mul")
        assert table == ((1, 0), (0, 1))

    def test_conjugating_twice_restores(self):
        s = (2, 0, 1, 3, 5, 4)
        s_inv = tuple(s.index(i) for i in range(6))
        once = derived_operation(s3(), s, "mul")
        back = derived_operation(
            s3().__class__("tmp", GROUP_SIG, 6, {"mul": once, "inv": s3().tables["inv"], "e": 0}),
            s_inv,
            "mul",
        )
        assert back == s3().tables["mul"]

    def test_non_bijection_rejected(self):
        with pytest.raises(AlgebraError, match="bijection"):
            derived_operation(z2(), (0, 0), "mul")


class TestCheckOp2:
    def test_identity_always_passes(self):
        for v in (var_s2(), var_z2(), var_z3(), var_rect_band()):
            res = check_op2(identity_system(v.signature), v)
            assert res.ok
            for k, sigma in res.sigmas.items():
                assert sigma == tuple(range(v.free(k).size))

    def test_projection_fails_membership_at_rank2(self):
        res = check_op2(projection_system(), var_s2())
        assert not res.ok
        assert res.failed_rank == 2
        assert res.stage == "membership"

    def test_opposite_s3_rank1(self):
        res = check_op2(opposite_group_system(), var_s3(), n_max=1)
        assert res.ok
        assert set(res.sigmas) == {0, 1}
        # rank-1 free algebra is commutative, so the star equals it and
        # the generator-fixing isomorphism is the identity
        assert res.sigmas[1] == tuple(range(6))

    def test_opposite_rect_band(self):
        res = check_op2(opposite_band_system(), var_rect_band(), n_max=2)
        assert res.ok
        # free rectangular band on two generators: x1, x2, f(x1,x2), f(x2,x1);
        # reversal swaps the two mixed products
        assert res.sigmas[2] == (0, 1, 3, 2)

    @pytest.mark.slow
    def test_opposite_s3_rank2(self):
        res = check_op2(opposite_group_system(), var_s3(), n_max=2)
        assert res.ok
        free = var_s3().free(2)
        assert free.size == 972
        sigma = res.sigmas[2]
        assert sorted(sigma) == list(range(972))
        assert all(sigma[g] == g for g in free.generator_indices)


class TestWordBijectionDuality:
    def test_identity_round_trip(self):
        v = var_s2()
        s = BijectionSystem.identity(v, 2)
        ws = words_from_bijections(s)
        assert systems_semantically_equal(ws, identity_system(MEET_SIG), v)
        assert bijections_from_words(ws, v, 2).maps == s.maps

    def test_reversal_bijections_give_opposite_words(self):
        # independent construction: transpose each element of the free
        # rectangular band (swap the two mixed products at rank 2)
        v = var_rect_band()
        s = BijectionSystem(v, 2, {1: (0,), 2: (0, 1, 3, 2)})
        ok, why = check_b1_b2(s)
        assert ok, why
        ws = words_from_bijections(s)
        assert format_term(ws.word("f")) == "f(x2,x1)"
        assert bijections_from_words(ws, v, 2).maps == s.maps

    def test_words_from_bijections_satisfies_op1(self):
        v = var_z2()
        s = BijectionSystem.identity(v, 2)
        assert check_op1(words_from_bijections(s))

    def test_bound_must_cover_arities(self):
        v = var_rect_band()
        s = BijectionSystem(v, 1, {1: (0,)})
        with pytest.raises(WordSystemError, match="arity"):
            words_from_bijections(s)

    def test_round_trip_from_words(self):
        # words -> bijections -> words is semantic identity
        for v, ws in [
            (var_rect_band(), opposite_band_system()),
            (var_z2(), identity_system(GROUP_SIG)),
        ]:
            s = bijections_from_words(ws, v, 2)
            back = words_from_bijections(s)
            assert systems_semantically_equal(back, ws, v)


class TestCheckB1B2:
    def test_identity_passes(self):
        ok, why = check_b1_b2(BijectionSystem.identity(var_s2(), 2))
        assert ok and why is None

    def test_moved_generator_reported(self):
        v = var_s2()
        # swap x1 with the meet element at rank 2
        s = BijectionSystem(v, 2, {1: (0,), 2: (2, 1, 0)})
        ok, why = check_b1_b2(s)
        assert not ok and "generator" in why

    def test_derived_systems_always_pass(self):
        for v, ws in [(var_rect_band(), opposite_band_system()), (var_s2(), identity_system(MEET_SIG))]:
            s = bijections_from_words(ws, v, 2)
            ok, why = check_b1_b2(s)
            assert ok, why


class TestStronglyStableAction:
    def test_identity_system_acts_trivially(self):
        v = var_s2()
        s = BijectionSystem.identity(v, 2)
        f1, f2 = v.free(1), v.free(2)
        for h in hom_set(f1.algebra, f2.algebra):
            assert strongly_stable_action(s, h).mapping == h.mapping

    def test_identity_morphism_fixed(self):
        v = var_rect_band()
        s = bijections_from_words(opposite_band_system(), v, 2)
        f2 = v.free(2)
        ident = hom_set(f2.algebra, f2.algebra)[0].__class__(
            f2.algebra, f2.algebra, tuple(range(f2.size))
        )
        assert strongly_stable_action(s, ident).mapping == ident.mapping

    def test_reversal_action_on_embedding(self):
        # x1 |-> f(x1,x2) conjugates to x1 |-> f(x2,x1)
        v = var_rect_band()
        s = bijections_from_words(opposite_band_system(), v, 2)
        f1, f2 = v.free(1), v.free(2)
        src = f2.term_index(pt("f(x1,x2)", BAND_SIG))
        tgt = f2.term_index(pt("f(x2,x1)", BAND_SIG))
        from uageom.algebras import Homomorphism

        alpha = Homomorphism(f1.algebra, f2.algebra, (src,))
        assert strongly_stable_action(s, alpha).mapping == (tgt,)

    def test_functorial_and_bijective_on_hom_sets(self):
        v = var_rect_band()
        s = bijections_from_words(opposite_band_system(), v, 2)
        f1, f2 = v.free(1), v.free(2)
        homs12 = hom_set(f1.algebra, f2.algebra)
        homs22 = hom_set(f2.algebra, f2.algebra)
        acted = {strongly_stable_action(s, h).mapping for h in homs12}
        assert acted == {h.mapping for h in homs12}  # bijective on the hom-set
        for a in homs12:
            for b in homs22:
                composed = a.__class__(
                    f1.algebra, f2.algebra, tuple(b.mapping[x] for x in a.mapping)
                )
                lhs = strongly_stable_action(s, composed).mapping
                fa = strongly_stable_action(s, a).mapping
                fb = strongly_stable_action(s, b).mapping
                assert lhs == tuple(fb[x] for x in fa)

    def test_out_of_scope_rejected(self):
        v = var_s2()
        s = BijectionSystem.identity(v, 1)
        f2 = var_s2().free(2)
        from uageom.algebras import Homomorphism

        with pytest.raises(WordSystemError, match="bound"):
            strongly_stable_action(
                s, Homomorphism(f2.algebra, f2.algebra, (0, 1, 2))
            )


class TestVerifyZhito:
    def test_identity_trivially_equal(self):
        assert verify_zhito(identity_system(MEET_SIG), var_s2()) == (True, None)

    def test_opposite_s3_rank1(self):
        assert verify_zhito(opposite_group_system(), var_s3(), n_max=1) == (True, None)

    def test_opposite_rect_band(self):
        assert verify_zhito(opposite_band_system(), var_rect_band(), n_max=2) == (True, None)

    def test_requires_admissibility(self):
        with pytest.raises(WordSystemError):
            verify_zhito(projection_system(), var_s2())


class TestInverseWordSystem:
    def test_identity_self_inverse(self):
        v = var_s2()
        inv = inverse_word_system(identity_system(MEET_SIG), v)
        assert systems_semantically_equal(inv, identity_system(MEET_SIG), v)

    def test_opposite_group_self_inverse(self):
        inv = inverse_word_system(opposite_group_system(), var_s3(), n_max=1)
        assert format_term(inv.word("mul")) == "mul(x2,x1)"
        assert format_term(inv.word("inv")) == "inv(x1)"

    def test_double_star_restores_tables(self):
        cases = [
            (var_s3(), opposite_group_system(), [s3(), s3_transposed()], 1),
            (var_rect_band(), opposite_band_system(), [rect_band()], 2),
            (var_z3(), opposite_group_system(), [z3()], 2),
            (var_s2(), identity_system(MEET_SIG), [s2(), s2xs2(), trivial_meet()], 2),
        ]
        for v, ws, algebras, n_max in cases:
            inv = inverse_word_system(ws, v, n_max=n_max)
            for h in algebras:
                assert star_algebra(star_algebra(h, ws), inv).tables == h.tables

    def test_requires_admissibility(self):
        with pytest.raises(WordSystemError):
            inverse_word_system(projection_system(), var_s2())


class TestHomomorphismLift:
    def test_homs_lift_to_stars_and_back(self):
        # a map is a homomorphism of the originals iff of the stars
        ws = opposite_group_system()
        pairs = [(z2(), z2()), (z3(), z3()), (s3(), s3())]
        for h1, h2 in pairs:
            s1, s2_ = star_algebra(h1, ws), star_algebra(h2, ws)
            original = {h.mapping for h in hom_set(h1, h2)}
            starred = {h.mapping for h in hom_set(s1, s2_)}
            assert original == starred

    def test_star_membership(self):
        # the star of a variety member stays in the variety
        assert variety_membership(star_algebra(s2(), identity_system(MEET_SIG)), var_s2())
        assert variety_membership(star_algebra(z3(), opposite_group_system()), var_z3())
        assert variety_membership(
            star_algebra(rect_band(), opposite_band_system()), var_rect_band()
        )

    def test_star_membership_s3_by_isomorphism(self):
        # |S3| = 6 puts the generic decision over the free-algebra cap, so
        # exhibit the witnessing isomorphism instead: inversion maps the
        # transposed-table group isomorphically onto the original
        star = star_algebra(s3(), opposite_group_system())
        assert star.tables == s3_transposed().tables
        inv_map = s3().tables["inv"]
        assert sorted(inv_map) == list(range(6))
        assert is_homomorphism(star, s3(), inv_map)
        assert var_s3().refute_membership(star) is None


class TestEnumerateWordSystems:
    def test_semilattice_depth2_classes(self):
        # free semilattice on 2 generators has 3 elements, so 3 candidates
        systems = list(enumerate_word_systems(var_s2(), 2))
        words = [format_term(ws.word("meet")) for ws in systems]
        assert words == ["x1", "x2", "meet(x1,x2)"]

    def test_group_depth1_distinct_classes(self):
        systems = list(enumerate_word_systems(var_s3(), 1))
        assert len(systems) == 9 * 4 * 1

    def test_dedup_keeps_first_representative(self):
        # in the exponent-2 variety inv(x1) collapses into the x1 class
        systems = list(enumerate_word_systems(var_z2(), 1))
        inv_words = {format_term(ws.word("inv")) for ws in systems}
        assert "inv(x1)" not in inv_words
        assert "x1" in inv_words
