"""Dense/sparse permutation arithmetic against brute-force oracles."""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lefgrow.perms import (
    Perm,
    SparsePerm,
    alpha,
    beta,
    block_system,
    compose,
    group_order,
    is_transitive,
    sparse,
    sparse_alpha,
    sparse_apply,
    sparse_beta,
    sparse_compose,
    sparse_eq,
    sparse_identity,
    sparse_inv,
    sparse_is_identity,
    sparse_order,
    sparse_str,
    sparse_to_dense,
    stab_chain,
)


def brute_closure(gens):
    """Oracle: full element enumeration of <gens> by repeated multiplication."""
    frontier = list(gens)
    seen = set(gens)
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = a * g
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    ident = Perm.identity(gens[0].degree)
    seen.add(ident)
    return seen


perm_strategy = st.integers(2, 8).flatmap(
    lambda n: st.permutations(list(range(n))).map(lambda xs: Perm(tuple(xs)))
)


class TestPerm:
    def test_compose_identity(self):
        p = Perm.from_cycles("(1 2 3)")
        assert compose(p, Perm.identity(3)) == p

    def test_compose_pointwise(self):
        # right action: apply (1 2 3) first, then (1 2)
        a = Perm.from_cycles("(1 2 3)")
        b = Perm.from_cycles("(1 2)", degree=3)
        assert compose(a, b) == Perm.from_cycles("(2 3)", degree=3)

    @given(perm_strategy)
    def test_inverse_law(self, p):
        assert (p * p.inv()).is_identity()
        assert (p.inv() * p).is_identity()

    @given(perm_strategy, perm_strategy, perm_strategy)
    def test_associativity(self, a, b, c):
        n = max(a.degree, b.degree, c.degree)

        def pad(p):
            return Perm(tuple(list(p.images) + list(range(p.degree, n))))

        a, b, c = pad(a), pad(b), pad(c)
        assert (a * b) * c == a * (b * c)

    def test_cycle_roundtrip(self):
        for text in ["(1 2 3)(4 5)", "(2 4)", "()"]:
            p = Perm.from_cycles(text, degree=5)
            assert Perm.from_cycles(str(p), degree=5) == p

    def test_pow_and_order(self):
        p = Perm.from_cycles("(1 2 3)(4 5)")
        assert p.order() == 6
        assert (p ** 6).is_identity()
        assert p ** -1 == p.inv()

    def test_degree_mismatch(self):
        with pytest.raises(ValueError):
            Perm.identity(3) * Perm.identity(4)

    def test_not_a_bijection(self):
        with pytest.raises(ValueError):
            Perm((0, 0, 1))


class TestGroupOrder:
    def test_trivial(self):
        assert group_order([Perm.identity(4)]) == 1

    def test_alt5_against_brute_closure(self):
        gens = [alpha(5), beta(5)]
        assert group_order(gens) == len(brute_closure(gens)) == 60

    def test_sym6_against_brute_closure(self):
        gens = [alpha(6), beta(6)]
        assert group_order(gens) == len(brute_closure(gens)) == 720

    @pytest.mark.parametrize("d,q", [(5, 2), (7, 3), (9, 2), (11, 7)])
    def test_odd_degree_coprime_power_gives_alternating(self, d, q):
        assert math.gcd(d, q) == 1
        assert group_order([alpha(d, q), beta(d)]) == math.factorial(d) // 2

    @pytest.mark.parametrize("d", [6, 8, 10])
    def test_even_degree_gives_symmetric(self, d):
        assert group_order([alpha(d), beta(d)]) == math.factorial(d)

    def test_random_small_groups_match_closure(self):
        rng = random.Random(7)
        for _ in range(12):
            n = rng.randrange(3, 7)
            gens = []
            for _ in range(2):
                imgs = list(range(n))
                rng.shuffle(imgs)
                gens.append(Perm(tuple(imgs)))
            closure = brute_closure(gens)
            if len(closure) > 5000:
                continue
            assert group_order(gens) == len(closure)

    def test_chain_membership(self):
        chain = stab_chain([alpha(5), beta(5)])
        assert chain.verified
        assert chain.contains(alpha(5) * beta(5))
        odd = Perm.from_cycles("(1 2)", degree=5)
        assert not chain.contains(odd)


def brute_block_partitions(gens, n):
    """Oracle: all nontrivial block partitions by exhaustive refinement.

    Enumerates set partitions of small point sets and keeps those preserved
    by every generator with uniform block size > 1 and < n.
    """

    def partitions(points):
        if not points:
            yield []
            return
        first, rest = points[0], points[1:]
        for part in partitions(rest):
            for i in range(len(part)):
                yield part[:i] + [[first] + part[i]] + part[i + 1:]
            yield [[first]] + part

    out = []
    for part in partitions(list(range(n))):
        sizes = {len(b) for b in part}
        if len(sizes) != 1 or sizes in ({1}, {n}):
            continue
        frozen = {frozenset(b) for b in part}
        ok = True
        for g in gens:
            for b in frozen:
                if frozenset(g.images[x] for x in b) not in frozen:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(sorted(sorted(b) for b in frozen))
    return out


class TestBlockSystem:
    def test_dihedral_imprimitive(self):
        gens = [Perm.from_cycles("(1 2 3 4)"), Perm.from_cycles("(1 3)", degree=4)]
        primitive, blocks = block_system(gens)
        assert not primitive
        assert blocks == [[0, 2], [1, 3]]
        assert blocks in brute_block_partitions(gens, 4)

    def test_exhaustive_oracle_agreement_degree_6(self):
        gens = [alpha(6), beta(6)]
        primitive, blocks = block_system(gens)
        oracle = brute_block_partitions(gens, 6)
        assert primitive == (not oracle)
        if oracle:
            assert blocks in oracle

    def test_alpha8_beta8_primitive(self):
        primitive, blocks = block_system([alpha(8), beta(8)])
        assert primitive and blocks is None
        assert brute_block_partitions([alpha(8), beta(8)], 8) == []

    def test_prime_cycle_primitive(self):
        primitive, blocks = block_system([alpha(5)])
        assert primitive and blocks is None

    def test_intransitive_rejected(self):
        with pytest.raises(ValueError):
            block_system([Perm.from_cycles("(1 2)", degree=4)])

    def test_transitivity_probe(self):
        assert is_transitive([alpha(6)])
        assert not is_transitive([beta(6)])


class TestSparsePerm:
    def test_shift_inverse_is_identity(self):
        a = sparse_alpha(33, 31)
        assert sparse_is_identity(sparse_compose(a, sparse_inv(a)))

    def test_beta_composed_with_shift(self):
        b = sparse_beta(33)
        s = sparse_alpha(33, 1)
        out = sparse_compose(b, s)
        assert out == sparse(33, 1, {0: 2, 1: 3, 2: 1})

    def test_commutator_is_small(self):
        d, q = 33, 31
        s, t = sparse_alpha(d, q), sparse_beta(d)
        w = sparse_compose(
            sparse_compose(sparse_compose(s, t), sparse_inv(s)), sparse_inv(t)
        )
        assert not sparse_is_identity(w)
        assert len(w.exc) <= 6
        # dense cross-check of the same word
        sd, td = sparse_to_dense(s), sparse_to_dense(t)
        assert sparse_to_dense(w) == sd * td * sd.inv() * td.inv()

    @given(
        st.integers(2, 400),
        st.integers(0, 10**6),
        st.dictionaries(st.integers(0, 10**6), st.integers(0, 10**6), max_size=4),
    )
    @settings(max_examples=120)
    def test_dense_sparse_agree(self, d, shift, excd):
        # exceptions must themselves permute; build them as a cycle shuffle
        pts = sorted({k % d for k in excd})
        vals = list(pts[1:]) + pts[:1]
        try:
            p = sparse(d, shift, dict(zip(pts, vals)))
        except ValueError:
            return  # the shuffled candidate failed bijectivity; fine
        dense = sparse_to_dense(p)
        assert all(sparse_apply(p, x) == dense.images[x] for x in range(d))

    @given(st.integers(2, 120), st.integers(0, 10**4), st.integers(0, 10**4))
    @settings(max_examples=80)
    def test_compose_matches_dense(self, d, s1, s2):
        a = sparse_compose(sparse_beta(max(d, 3)), sparse_alpha(max(d, 3), s1))
        b = sparse_compose(sparse_alpha(max(d, 3), s2), sparse_inv(sparse_beta(max(d, 3))))
        lhs = sparse_to_dense(sparse_compose(a, b))
        rhs = sparse_to_dense(a) * sparse_to_dense(b)
        assert lhs == rhs

    def test_huge_modulus_arithmetic(self):
        d = 10**12 + 39
        s = sparse_alpha(d, 10**11)
        t = sparse_beta(d)
        w = sparse_compose(sparse_compose(s, t), sparse_inv(s))
        assert len(w.exc) == 3
        assert sparse_order(t) == 3

    def test_sparse_order_pure_shift(self):
        assert sparse_order(sparse_alpha(33, 31)) == 33
        assert sparse_order(sparse_alpha(12, 8)) == 3
        assert sparse_order(sparse_identity(7)) == 1

    def test_sparse_order_matches_dense(self):
        rng = random.Random(3)
        for _ in range(40):
            d = rng.randrange(3, 60)
            s = rng.randrange(d)
            t = sparse_compose(sparse_beta(d), sparse_alpha(d, s))
            assert sparse_order(t) == sparse_to_dense(t).order()

    def test_eq_modulus_mismatch(self):
        with pytest.raises(ValueError):
            sparse_eq(sparse_identity(4), sparse_identity(5))

    def test_normalization_unique(self):
        # entries that agree with the shift are dropped, so equality is
        # plain field comparison
        p = sparse(10, 3, {0: 4, 1: 3, 7: 0})  # 7 -> 0 equals the shift
        assert p == sparse(10, 3, {0: 4, 1: 3})
        assert p.exc == ((0, 4), (1, 3))
        assert "0→4" in sparse_str(p)

    def test_invalid_exceptions_rejected(self):
        with pytest.raises(ValueError):
            SparsePerm(10, 0, ((0, 5),))  # 5 is not covered: not a bijection
