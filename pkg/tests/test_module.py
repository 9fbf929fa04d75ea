import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fpgmod.errors import (
    BlockTooLarge,
    CharacteristicMismatch,
    DimensionMismatch,
    GroupMismatch,
    LengthOutOfRange,
    LevelOutOfRange,
    NotInvariant,
    NotUnipotent,
)
from fpgmod.linalg import FpMatrix, Subspace, image_basis, intersect
from fpgmod.module import (
    GroupSpec,
    JordanType,
    cyclic_basis,
    cyclic_submodule,
    decompose,
    direct_sum,
    exclusion_check,
    fixed_submodule,
    from_jordan_type,
    is_invariant,
    is_isomorphic,
    jordan_type,
    length,
    new_module,
    norm_operator,
    restrict,
    restrict_cyclic_type,
    socle_filtration,
    trivial_module,
)
from fpgmod.oracle import all_vectors, brute_directness, enumerate_subspaces, random_conjugate
from fpgmod.sweeps import partitions


def span_size(p, vectors, dim):
    out = set()
    for coeffs in itertools.product(range(p), repeat=len(vectors)):
        v = [0] * dim
        for c, u in zip(coeffs, vectors):
            v = [(a + c * b) % p for a, b in zip(v, u)]
        out.add(tuple(v))
    return len(out)


GROUPS = [GroupSpec(2, 1), GroupSpec(3, 1), GroupSpec(2, 2), GroupSpec(5, 1), GroupSpec(2, 3), GroupSpec(3, 2)]


class TestConstruction:
    def test_identity_action_is_valid(self):
        X = new_module(GroupSpec(3, 2), FpMatrix.identity(3, 4))
        assert X.dim == 4 and X.rho.is_zero()

    def test_full_block_is_valid(self):
        X = from_jordan_type(GroupSpec(2, 2), (4,))
        assert X.dim == 4

    def test_eigenvalue_two_is_rejected(self):
        sigma = FpMatrix.from_rows(3, [[2]])
        # direct computation: 2^3 = 8 = 2 mod 3
        assert pow(2, 3, 3) == 2
        with pytest.raises(NotUnipotent):
            new_module(GroupSpec(3, 1), sigma)

    def test_block_too_big_for_group(self):
        with pytest.raises(BlockTooLarge):
            from_jordan_type(GroupSpec(2, 1), (3,))
        # a size-3 block is not killed by (sigma-1)^2 either
        with pytest.raises(NotUnipotent):
            new_module(GroupSpec(2, 1), from_jordan_type(GroupSpec(2, 2), (3,)).sigma)

    def test_characteristic_mismatch(self):
        with pytest.raises(CharacteristicMismatch):
            new_module(GroupSpec(3, 1), FpMatrix.identity(2, 2))

    def test_jordan_type_round_trip_singletons(self):
        assert jordan_type(from_jordan_type(GroupSpec(2, 1), (1,))).parts == (1,)
        assert from_jordan_type(GroupSpec(2, 1), (1,)).sigma == FpMatrix.identity(2, 1)
        assert jordan_type(from_jordan_type(GroupSpec(3, 2), (9,))).parts == (9,)

    def test_trivial_group(self):
        G = GroupSpec(3, 0)
        X = trivial_module(G, 3)
        dec = decompose(X)
        assert dec.count(1) == 3
        with pytest.raises(NotUnipotent):
            new_module(G, from_jordan_type(GroupSpec(3, 1), (2,)).sigma)


class TestFixedAndLength:
    def test_trivial_module_fixes_everything(self):
        X = trivial_module(GroupSpec(5, 1), 3)
        assert fixed_submodule(X) == Subspace.full(5, 3)

    def test_free_module_has_fixed_line(self):
        X = from_jordan_type(GroupSpec(3, 1), (3,))
        assert fixed_submodule(X).dim == 1

    def test_two_blocks(self):
        X = from_jordan_type(GroupSpec(2, 2), (3, 2))
        assert fixed_submodule(X).dim == 2

    def test_length_conventions(self):
        X = from_jordan_type(GroupSpec(2, 2), (4,))
        assert length(X, (0, 0, 0, 0)) == 0
        assert length(X, (0, 0, 0, 1)) == 1

    def test_length_of_generator(self):
        X = from_jordan_type(GroupSpec(2, 2), (4,))
        u = (1, 0, 0, 0)
        # iterate rho by hand
        v, steps = u, 0
        while any(v):
            v = X.rho.apply(v)
            steps += 1
        assert steps == 4
        assert length(X, u) == 4

    def test_length_dimension_mismatch(self):
        X = from_jordan_type(GroupSpec(2, 1), (2,))
        with pytest.raises(DimensionMismatch):
            length(X, (1, 0, 0))

    def test_cyclic_submodule_examples(self):
        X = from_jordan_type(GroupSpec(3, 1), (3,))
        assert cyclic_submodule(X, (0, 0, 0)).dim == 0
        assert cyclic_submodule(X, (0, 0, 2)).dim == 1
        C = cyclic_submodule(X, (1, 0, 0))
        # brute orbit span over F_3^3
        orbit = []
        v = (1, 0, 0)
        for _ in range(3):
            orbit.append(v)
            v = X.sigma.apply(v)
        assert span_size(3, orbit, 3) == 27
        assert C.dim == 3

    @pytest.mark.parametrize("group", GROUPS, ids=str)
    def test_length_identities_exhaustive(self, group):
        for t in partitions(min(4, group.order + 1), group.order):
            X = from_jordan_type(group, t)
            fixed = fixed_submodule(X)
            for u in all_vectors(X.p, X.dim):
                l = length(X, u)
                C = cyclic_submodule(X, u)
                assert C.dim == l
                if l:
                    top = C.image(X.rho_power(l - 1))
                    assert top == intersect(C, fixed) and top.dim > 0
                    assert C.image(X.rho_power(l)).dim == 0


class TestJordanType:
    def test_identity(self):
        assert jordan_type(trivial_module(GroupSpec(2, 1), 3)).parts == (1, 1, 1)

    def test_single_block(self):
        assert jordan_type(from_jordan_type(GroupSpec(2, 3), (8,))).parts == (8,)

    def test_conjugate_of_221(self):
        group = GroupSpec(3, 1)
        X = from_jordan_type(group, (2, 2, 1))
        T = FpMatrix.from_rows(3, [[1, 2, 0, 1, 0], [0, 1, 1, 0, 2], [0, 0, 1, 2, 0], [0, 0, 0, 1, 1], [0, 0, 0, 0, 1]])
        # explicit inverse by enumeration-free Gauss-Jordan on [T | I]
        from fpgmod.linalg import rref as _rref
        aug = FpMatrix.from_rows(3, [r + e for r, e in zip(T.data, FpMatrix.identity(3, 5).data)])
        R, piv, rk = _rref(aug)
        assert piv[:5] == (0, 1, 2, 3, 4)
        Tinv = FpMatrix.from_rows(3, [r[5:] for r in R.data])
        assert T @ Tinv == FpMatrix.identity(3, 5)
        Y = new_module(group, T @ X.sigma @ Tinv)
        assert jordan_type(Y) == JordanType((2, 2, 1))

    @pytest.mark.parametrize("group", GROUPS, ids=str)
    def test_conjugation_invariance(self, group):
        for t in partitions(min(5, group.order + 2), group.order):
            X = from_jordan_type(group, t)
            for seed in range(10):
                assert jordan_type(random_conjugate(X, seed)) == JordanType(t)

    def test_serialization(self):
        jt = JordanType((1, 4, 2, 2))
        assert str(jt) == "4,2,2,1"
        assert JordanType.parse("4,2,2,1") == jt
        assert jt.multiplicities() == {1: 1, 2: 2, 4: 1}


class TestDecompose:
    def test_trivial(self):
        dec = decompose(trivial_module(GroupSpec(2, 2), 3))
        assert dec.count(1) == 3 and dec.lengths() == JordanType((1, 1, 1))

    def test_free_rank_one(self):
        dec = decompose(from_jordan_type(GroupSpec(3, 2), (9,)))
        assert dec.count(9) == 1 and list(dec.generators) == [9]

    def test_21_over_c2(self):
        X = from_jordan_type(GroupSpec(2, 1), (2, 1))
        dec = decompose(X)
        assert dec.count(2) == 1 and dec.count(1) == 1
        bases = [v for b in dec.cyclic_bases() for v in b]
        # the emitted cyclic bases reach all 8 vectors of F_2^3
        assert span_size(2, bases, 3) == 8

    def test_fixed_parts_are_the_L_spaces(self):
        X = from_jordan_type(GroupSpec(2, 2), (4, 3, 1, 1))
        dec = decompose(X)
        fixed = fixed_submodule(X)
        for i, L in dec.fixed_parts.items():
            assert intersect(dec.summand(i), fixed) == L
            assert L.dim == dec.count(i)

    @pytest.mark.parametrize("group", GROUPS, ids=str)
    def test_round_trip(self, group):
        for dim in range(1, 7):
            for t in partitions(dim, group.order):
                X = from_jordan_type(group, t)
                dec = decompose(X)
                assert dec.lengths() == JordanType(t)
                parts = [Subspace.span(X.p, X.dim, b) for b in dec.cyclic_bases()]
                assert brute_directness(parts)

    def test_on_conjugated_module(self):
        X = random_conjugate(from_jordan_type(GroupSpec(3, 2), (5, 3, 1)), 7)
        dec = decompose(X)
        assert dec.lengths() == JordanType((5, 3, 1))
        for i, y in dec.all_generators():
            assert length(X, y) == i


class TestRestriction:
    def test_level_zero(self):
        X = from_jordan_type(GroupSpec(2, 2), (3, 1))
        assert restrict(X, 0) == X

    def test_level_n(self):
        X = from_jordan_type(GroupSpec(2, 2), (4, 3))
        Y = restrict(X, 2)
        assert Y.group == GroupSpec(2, 0)
        assert jordan_type(Y).parts == (1,) * 7

    def test_block_of_four(self):
        X = from_jordan_type(GroupSpec(2, 2), (4,))
        assert jordan_type(restrict(X, 1)) == JordanType((2, 2))

    def test_out_of_range(self):
        X = from_jordan_type(GroupSpec(2, 2), (4,))
        with pytest.raises(LevelOutOfRange):
            restrict(X, 3)
        with pytest.raises(LevelOutOfRange):
            restrict_cyclic_type(2, GroupSpec(2, 2), -1)
        with pytest.raises(LengthOutOfRange):
            restrict_cyclic_type(5, GroupSpec(2, 2), 1)

    @pytest.mark.parametrize("k", [0, 1, 2])
    def test_length_one(self, k):
        assert restrict_cyclic_type(1, GroupSpec(2, 2), k) == JordanType((1,))

    def test_closed_form_examples(self):
        G = GroupSpec(2, 2)
        assert restrict_cyclic_type(3, G, 1) == JordanType((2, 1))
        assert restrict_cyclic_type(4, G, 1) == JordanType((2, 2))
        assert jordan_type(restrict(from_jordan_type(G, (3,)), 1)) == JordanType((2, 1))

    @pytest.mark.parametrize("group", [g for g in GROUPS] + [GroupSpec(7, 1)], ids=str)
    def test_equivalence(self, group):
        for l in range(1, group.order + 1):
            X = from_jordan_type(group, (l,))
            for k in range(group.n + 1):
                assert restrict_cyclic_type(l, group, k) == jordan_type(restrict(X, k))


class TestDirectSumAndIsomorphism:
    def test_direct_sum_with_zero(self):
        G = GroupSpec(3, 1)
        X = from_jordan_type(G, (2, 1))
        Z = trivial_module(G, 0)
        assert direct_sum(X, Z) == X

    def test_types_add(self):
        G = GroupSpec(2, 1)
        S = direct_sum(from_jordan_type(G, (2,)), from_jordan_type(G, (1,)))
        assert jordan_type(S) == JordanType((2, 1))

    @given(st.sampled_from(GROUPS), st.data())
    @settings(max_examples=30)
    def test_type_additivity(self, group, data):
        t1 = data.draw(st.lists(st.integers(1, group.order), max_size=3))
        t2 = data.draw(st.lists(st.integers(1, group.order), max_size=3))
        X = random_conjugate(from_jordan_type(group, t1), data.draw(st.integers(0, 99)))
        Y = random_conjugate(from_jordan_type(group, t2), data.draw(st.integers(0, 99)))
        assert jordan_type(direct_sum(X, Y)) == JordanType(tuple(t1 + t2))

    def test_group_mismatch(self):
        with pytest.raises(GroupMismatch):
            direct_sum(trivial_module(GroupSpec(2, 1), 1), trivial_module(GroupSpec(2, 2), 1))
        with pytest.raises(GroupMismatch):
            is_isomorphic(trivial_module(GroupSpec(2, 1), 1), trivial_module(GroupSpec(2, 2), 1))

    def test_isomorphism(self):
        G = GroupSpec(3, 1)
        X = from_jordan_type(G, (2, 1))
        assert is_isomorphic(X, X)
        assert is_isomorphic(X, random_conjugate(X, 3))
        Y = from_jordan_type(G, (3,))
        assert X.rho.rank() == 1 and Y.rho.rank() == 2
        assert not is_isomorphic(X, Y)


class TestNormOperator:
    def test_trivial_module_mod_two(self):
        assert norm_operator(trivial_module(GroupSpec(2, 1), 3)).is_zero()

    def test_free_module_rank_one(self):
        assert norm_operator(from_jordan_type(GroupSpec(2, 1), (2,))).rank() == 1

    @pytest.mark.parametrize("group", GROUPS, ids=str)
    def test_annihilates_rho(self, group):
        for t in partitions(4, group.order):
            X = from_jordan_type(group, t)
            assert (norm_operator(X) @ X.rho).is_zero()


class TestExclusion:
    def test_block_parts(self):
        X = from_jordan_type(GroupSpec(2, 2), (3, 1))
        parts = [Subspace.span(2, 4, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]),
                 Subspace.span(2, 4, [[0, 0, 0, 1]])]
        res = exclusion_check(X, parts)
        assert res.hypothesis and res.conclusion

    def test_repeated_part(self):
        X = from_jordan_type(GroupSpec(3, 1), (2,))
        full = Subspace.full(3, 2)
        res = exclusion_check(X, [full, full])
        assert not res.hypothesis and not res.conclusion and res.consistent

    def test_two_cyclic_submodules_of_free_rank_two(self):
        X = from_jordan_type(GroupSpec(2, 1), (2, 2))
        A = cyclic_submodule(X, (1, 0, 1, 0))
        B = cyclic_submodule(X, (0, 0, 1, 0))
        assert A.dim == B.dim == 2
        # the two fixed lines are (0,1,0,1) and (0,0,0,1): independent
        res = exclusion_check(X, [A, B])
        assert res.hypothesis and res.conclusion
        assert span_size(2, A.vectors + B.vectors, 4) == 16

    def test_not_invariant(self):
        X = from_jordan_type(GroupSpec(2, 1), (2,))
        with pytest.raises(NotInvariant):
            exclusion_check(X, [Subspace.span(2, 2, [[1, 0]])])

    @pytest.mark.parametrize(
        "group,t",
        [(GroupSpec(2, 1), t) for d in range(1, 5) for t in partitions(d, 2)]
        + [(GroupSpec(2, 2), t) for d in range(1, 5) for t in partitions(d, 4)]
        + [(GroupSpec(3, 1), t) for d in range(1, 3) for t in partitions(d, 3)]
        + [(GroupSpec(3, 2), t) for d in range(1, 3) for t in partitions(d, 9)],
        ids=str,
    )
    def test_all_pairs_of_submodules(self, group, t):
        X = from_jordan_type(group, t)
        subs = [
            U for U in enumerate_subspaces(X.p, X.dim, FpMatrix.identity(X.p, X.dim).data)
            if is_invariant(X, U)
        ]
        for A, B in itertools.product(subs, repeat=2):
            assert exclusion_check(X, [A, B]).consistent

    @pytest.mark.parametrize("t", [t for d in range(5, 9) for t in partitions(d, 4)], ids=str)
    def test_pairs_of_cyclic_submodules(self, t):
        X = from_jordan_type(GroupSpec(2, 2), t)
        if 2**X.dim > 64:
            vecs = [tuple(random.Random(i).randrange(2) for _ in range(X.dim)) for i in range(48)]
        else:
            vecs = list(all_vectors(2, X.dim))
        cyclic = sorted({cyclic_submodule(X, u) for u in vecs}, key=lambda S: S.vectors)
        for A, B in itertools.combinations(cyclic, 2):
            assert exclusion_check(X, [A, B]).consistent


@pytest.mark.parametrize("group", GROUPS, ids=str)
def test_filtration_is_monotone(group):
    for t in partitions(5, group.order):
        dims = [F.dim for F in socle_filtration(from_jordan_type(group, t))]
        assert dims == sorted(dims, reverse=True)


def test_cyclic_basis_starts_with_generator():
    X = from_jordan_type(GroupSpec(2, 2), (4,))
    assert cyclic_basis(X, (1, 0, 0, 0)) == [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
