import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import canonical_h_matrix, gf2_congruence_class, gf2_rank, types_for_h
from ovalis.exact import IntMatrix, det
from ovalis.mod2 import (
    AddRow, ElementaryOpTrace, HMatrix, Inconsistent, Mod2Matrix, NotSymmetric, Pattern, RealPoints,
    SwapRows, TopologicalType, canonical_forms, classify_H, congruence_reduce, lift_to_unimodular,
)


@st.composite
def symmetric_gf2(draw, max_g=8):
    g = draw(st.integers(1, max_g))
    bits = draw(st.lists(st.integers(0, 1), min_size=g * g, max_size=g * g))
    m = [[0] * g for _ in range(g)]
    for i in range(g):
        for j in range(i, g):
            m[i][j] = m[j][i] = bits[i * g + j]
    return m


class TestMod2Matrix:
    def test_matmul_matches_numpy(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            a = rng.integers(0, 2, size=(4, 6))
            b = rng.integers(0, 2, size=(6, 3))
            got = Mod2Matrix.from_lists(a.tolist()) @ Mod2Matrix.from_lists(b.tolist())
            assert got.tolist() == ((a @ b) % 2).tolist()

    def test_rank_matches_oracle(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            a = rng.integers(0, 2, size=(rng.integers(1, 7), rng.integers(1, 7))).tolist()
            assert Mod2Matrix.from_lists(a).rank() == gf2_rank(a)

    def test_from_int_reduces(self):
        m = Mod2Matrix.from_int(IntMatrix([[3, -2], [-1, 4]]))
        assert m.tolist() == [[1, 0], [1, 0]]
        assert m.T.tolist() == [[1, 1], [0, 0]]
        assert not m.is_symmetric()
        assert Mod2Matrix.identity(3).is_symmetric()


class TestHMatrix:
    def test_shapes(self):
        assert HMatrix.blocks(6, 2).to_int().tolist() == canonical_h_matrix(6, "blocks", 2)
        assert HMatrix.diag_ones(3, 2).to_int().tolist() == canonical_h_matrix(3, "diag_ones", 2)
        assert HMatrix.zero(2).rank == 0
        assert HMatrix.blocks(6, 2).rank == 4

    @pytest.mark.parametrize("make", [
        lambda: HMatrix.blocks(3, 2), lambda: HMatrix.diag_ones(2, 3), lambda: HMatrix(2, Pattern.DIAG_ONES, 0),
    ])
    def test_invalid(self, make):
        with pytest.raises(ValueError):
            make()

    def test_count_zero_normalizes(self):
        assert HMatrix.diag_ones(2, 0) == HMatrix.blocks(2, 0) == HMatrix.zero(2)

    def test_from_matrix(self):
        assert HMatrix.from_matrix([[0, 1, 0], [1, 0, 0], [0, 0, 0]]) == HMatrix.blocks(3, 1)
        with pytest.raises(ValueError):
            HMatrix.from_matrix([[0, 0], [0, 1]])

    @pytest.mark.parametrize("g", range(1, 9))
    def test_canonical_forms_count(self, g):
        forms = canonical_forms(g)
        assert len(forms) == 1 + g + g // 2
        assert len(set(forms)) == len(forms)

    def test_json(self):
        doc = HMatrix.blocks(4, 1).to_json()
        assert doc["pattern"] == "blocks" and doc["count"] == 1 and doc["rank"] == 2
        assert doc["matrix"][0][1] == 1


class TestCongruenceReduce:
    def test_zero(self):
        trace, h = congruence_reduce(Mod2Matrix.zeros(3, 3))
        assert len(trace) == 0 and h == HMatrix.zero(3)
        assert lift_to_unimodular(trace) == IntMatrix.identity(3)

    def test_mixed_block_diagonalizes(self):
        n1 = Mod2Matrix.from_lists([[1, 0, 0], [0, 0, 1], [0, 1, 0]])
        trace, h = congruence_reduce(n1)
        assert h == HMatrix.diag_ones(3, 3)
        assert trace.replay(n1) == h.to_mod2()

    def test_single_block_unchanged(self):
        trace, h = congruence_reduce(Mod2Matrix.from_lists([[0, 1], [1, 0]]))
        assert h == HMatrix.blocks(2, 1)

    def test_not_symmetric(self):
        with pytest.raises(NotSymmetric):
            congruence_reduce(Mod2Matrix.from_lists([[0, 1], [0, 0]]))

    @settings(max_examples=300, deadline=None)
    @given(symmetric_gf2())
    def test_against_oracle(self, n):
        g = len(n)
        nm = Mod2Matrix.from_lists(n)
        trace, h = congruence_reduce(nm)
        assert (h.pattern.value, h.count) == gf2_congruence_class(n)
        p = trace.composite()
        assert p @ nm @ p.T == h.to_mod2()
        q = lift_to_unimodular(trace)
        assert abs(det(q)) == 1
        assert Mod2Matrix.from_int(q) @ p == Mod2Matrix.identity(g)
        assert Mod2Matrix.from_int(q @ h.to_int() @ q.T) == nm


class TestLift:
    def test_empty(self):
        assert lift_to_unimodular(ElementaryOpTrace(3, [])) == IntMatrix.identity(3)

    def test_swap(self):
        assert lift_to_unimodular(ElementaryOpTrace(2, [SwapRows(0, 1)])).tolist() == [[0, 1], [1, 0]]

    def test_add_inverts_exactly(self):
        q = lift_to_unimodular(ElementaryOpTrace(2, [AddRow(0, 1)]))
        # P = I + e_1 e_0^T, integer inverse subtracts
        assert q.tolist() == [[1, 0], [-1, 1]]


class TestClassify:
    @pytest.mark.parametrize("h, rp, expected", [
        (HMatrix.zero(3), "yes", [(3, 4, 0)]),
        (HMatrix.diag_ones(3, 3), "yes", [(3, 1, 1)]),
        (HMatrix.diag_ones(3, 3), "unknown", [(3, 1, 1)]),
        (HMatrix.blocks(3, 1), "no", [(3, 0, 1)]),
        (HMatrix.blocks(6, 2), "yes", [(6, 3, 0)]),
        (HMatrix.blocks(3, 1), "unknown", [(3, 2, 0), (3, 0, 1)]),
        (HMatrix.blocks(4, 2), "unknown", [(4, 1, 0), (4, 0, 1)]),
    ])
    def test_examples(self, h, rp, expected):
        got = [(t.g, t.k, t.a) for t in classify_H(h, rp)]
        assert got == expected

    def test_inconsistent(self):
        with pytest.raises(Inconsistent):
            classify_H(HMatrix.diag_ones(3, 1), RealPoints.NO)
        with pytest.raises(Inconsistent):
            classify_H(HMatrix.zero(3), RealPoints.NO)

    def test_genus_one_zero_is_ambiguous(self):
        # rank 0 is both the M-curve shape and the odd-genus no-oval shape
        got = {(t.g, t.k, t.a) for t in classify_H(HMatrix.zero(1), "unknown")}
        assert got == {(1, 2, 0), (1, 0, 1)}

    @pytest.mark.parametrize("g", range(1, 9))
    def test_matches_type_table(self, g):
        for h in canonical_forms(g):
            expected = types_for_h(g, h.pattern.value, h.count)
            got = {(t.g, t.k, t.a) for t in classify_H(h, RealPoints.UNKNOWN)}
            assert got == expected
            yes = {(t.g, t.k, t.a) for t in classify_H(h, RealPoints.YES)}
            assert yes == {t for t in expected if t[1] > 0}
            no = {t for t in expected if t[1] == 0}
            if no:
                assert {(t.g, t.k, t.a) for t in classify_H(h, RealPoints.NO)} == no
            else:
                with pytest.raises(Inconsistent):
                    classify_H(h, RealPoints.NO)


class TestTopologicalType:
    @pytest.mark.parametrize("args", [(3, 5, 0), (3, 0, 0), (3, 4, 1), (3, 1, 2)])
    def test_invalid(self, args):
        with pytest.raises(ValueError):
            TopologicalType(*args)

    def test_str_and_order(self):
        assert str(TopologicalType(3, 1, 1)) == "(3,1,1)"
        assert TopologicalType(3, 0, 1) < TopologicalType(3, 2, 0)
        assert TopologicalType(6, 3, 0).to_json() == {"g": 6, "k": 3, "a": 0}


def test_pattern_values():
    assert {p.value for p in Pattern} == {"zero", "diag_ones", "blocks"}
