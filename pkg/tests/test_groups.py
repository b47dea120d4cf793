"""Marked-group oracles: arithmetic laws and the concrete families."""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lefgrow.groups import (
    MarkedGroup,
    WreathElement,
    center_is_trivial,
    covering_radius,
    elements,
    eval_word,
    group_from_json,
    make_cyclic,
    make_direct_product,
    make_free_abelian,
    make_free_group,
    make_int_matrix_group,
    make_perm_group,
    make_wreath,
    sl2_generators,
)
from lefgrow.perms import Perm, alpha, beta
from lefgrow.words import format_word, parse_word, reduced_words


def sample_oracles():
    s3 = make_perm_group([Perm.from_cycles("(1 2)", 3), Perm.from_cycles("(1 2 3)")], "S3")
    return [
        make_free_abelian(2),
        make_cyclic(6),
        s3,
        make_direct_product(make_cyclic(4), s3),
        make_free_group(2),
        make_int_matrix_group(sl2_generators(), "SL2Z"),
        make_wreath(s3, make_cyclic(4)),
    ]


word_strategy = st.lists(
    st.sampled_from([1, 2, -1, -2]), min_size=0, max_size=8
).map(tuple)


class TestWordUtilities:
    def test_parse_format_roundtrip(self):
        assert parse_word("abA") == (1, 2, -1)
        assert format_word((1, 2, -1)) == "abA"
        assert parse_word("") == ()

    def test_reduced_words_shortlex(self):
        ws = list(reduced_words(2, 2))
        assert ws[0] == ()
        assert ws[1:5] == [(1,), (2,), (-1,), (-2,)]
        assert all(len(w) <= 2 for w in ws)
        # no cancelling adjacent pair survives
        assert all(all(a != -b for a, b in zip(w, w[1:])) for w in ws)
        assert len(ws) == 1 + 4 + 4 * 3


class TestOracleLaws:
    @pytest.mark.parametrize("G", sample_oracles(), ids=lambda g: g.name)
    def test_group_laws_on_random_words(self, G):
        rng = random.Random(11)
        letters = list(range(1, G.d + 1)) + list(range(-G.d, 0))
        for _ in range(60):
            w1 = [rng.choice(letters) for _ in range(rng.randrange(0, 6))]
            w2 = [rng.choice(letters) for _ in range(rng.randrange(0, 6))]
            x, y = eval_word(G, w1), eval_word(G, w2)
            assert G.mul(x, G.inv(x)) == G.identity
            assert G.mul(G.identity, x) == x
            assert G.mul(x, G.identity) == x
            z = eval_word(G, w1 + w2)
            assert G.mul(x, y) == z  # associativity along concatenation
            assert (x == y) == (G.mul(x, G.inv(y)) == G.identity)

    def test_eval_word_trivialities(self):
        Z = make_free_abelian(1)
        assert eval_word(Z, "") == Z.identity
        assert eval_word(Z, "aaA") == (1,)

    def test_eval_word_matches_perm_compose(self):
        G = make_perm_group([alpha(5), beta(5)])
        assert eval_word(G, "ab") == alpha(5) * beta(5)


class TestFamilies:
    def test_free_abelian_commutes(self):
        G = make_free_abelian(2)
        a, b = G.generators
        assert G.mul(a, b) == G.mul(b, a) == (1, 1)
        assert G.relators is not None

    def test_product_matches_free_abelian(self):
        Z = make_free_abelian(1)
        P = make_direct_product(Z, Z)
        G = make_free_abelian(2)
        for w in ["ab", "aB", "abAB", "bba"]:
            pw = eval_word(P, w)
            gw = eval_word(G, w)
            assert (pw[0][0], pw[1][0]) == gw
        assert P.relators is not None  # the commutator survives into the product

    def test_matrix_entry_growth(self):
        G = make_int_matrix_group(sl2_generators())
        fib = [1, 1]
        for _ in range(12):
            fib.append(fib[-1] + fib[-2])
        x = G.identity
        for n in range(1, 12):
            x = G.mul(x, G.generators[n % 2])
            assert max(abs(e) for row in x for e in row) <= fib[n + 1]

    def test_matrix_group_rejects_singular(self):
        with pytest.raises(ValueError):
            make_int_matrix_group([((1, 0), (0, 2))])

    def test_cyclic_relator(self):
        G = make_cyclic(6)
        assert G.relators == ((1,) * 6,)
        assert eval_word(G, "aaaaaa") == 0

    def test_elements_enumeration(self):
        s3 = make_perm_group([Perm.from_cycles("(1 2)", 3), Perm.from_cycles("(1 2 3)")])
        assert len(elements(s3)) == 6
        assert covering_radius(s3) == 2

    def test_center_probe(self):
        s3 = make_perm_group([Perm.from_cycles("(1 2)", 3), Perm.from_cycles("(1 2 3)")])
        assert center_is_trivial(s3)
        assert not center_is_trivial(make_cyclic(2))


class TestWreath:
    def s3(self):
        return make_perm_group(
            [Perm.from_cycles("(1 2)", 3), Perm.from_cycles("(1 2 3)")], "S3"
        )

    def test_total_order(self):
        W = make_wreath(self.s3(), make_cyclic(3))
        assert W.order == 6**3 * 3

    def test_displayed_product_rule(self):
        # lamplighter-style: S3 wr Z, move then light at origin twice
        Wr = make_wreath(self.s3(), make_free_abelian(1))
        swap = Perm.from_cycles("(1 2)", 3)
        x = WreathElement(frozenset({((0,), swap)}), (1,))
        y = WreathElement(frozenset({((0,), swap)}), (-1,))
        z = Wr.mul(x, y)
        assert z.top == (0,)
        assert z.items() == {(0,): swap, (1,): swap}

    @given(word_strategy)
    @settings(max_examples=40)
    def test_identity_neutral(self, w):
        Wr = make_wreath(self.s3(), make_cyclic(4))
        # restrict letters to the wreath's generator count
        w = tuple(x if abs(x) <= Wr.d else (1 if x > 0 else -1) for x in w)
        x = eval_word(Wr, w)
        assert Wr.mul(Wr.identity, x) == x
        assert Wr.mul(x, Wr.identity) == x

    @given(word_strategy, word_strategy)
    @settings(max_examples=40)
    def test_collapse_to_top_is_homomorphism(self, w1, w2):
        Wr = make_wreath(self.s3(), make_cyclic(4))
        top = Wr.meta["gamma"]
        w1 = tuple(x if abs(x) <= Wr.d else (1 if x > 0 else -1) for x in w1)
        w2 = tuple(x if abs(x) <= Wr.d else (1 if x > 0 else -1) for x in w2)
        x, y = eval_word(Wr, w1), eval_word(Wr, w2)
        assert Wr.mul(x, y).top == top.mul(x.top, y.top)


class TestJson:
    def test_kinds_construct(self):
        defs = [
            {"kind": "zk", "k": 2},
            {"kind": "cyclic", "m": 6},
            {"kind": "cyclic", "m": 5, "marks": [1, 2]},
            {"kind": "free", "rank": 2},
            {"kind": "perm", "gens": ["(1 2 3 4 5)", "(1 2 3)"]},
            {"kind": "matrix", "gens": [[[1, 1], [0, 1]], [[1, 0], [1, 1]]]},
            {"kind": "product", "factors": [{"kind": "zk", "k": 1}, {"kind": "cyclic", "m": 2}]},
            {"kind": "wreath", "base": {"kind": "perm", "gens": ["(1 2)", "(1 2 3)"]},
             "top": {"kind": "cyclic", "m": 4}},
        ]
        for obj in defs:
            G = group_from_json(obj)
            assert G.mul(G.identity, G.identity) == G.identity

    def test_bad_kind(self):
        with pytest.raises(ValueError):
            group_from_json({"kind": "nope"})

    def test_bad_relator_rejected(self):
        with pytest.raises(ValueError):
            group_from_json({"kind": "cyclic", "m": 6, "relators": ["aa"]})
