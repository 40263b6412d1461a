import numpy as np
import pytest

from conftest import FIXTURE_NAMES, load_fixture
from ovalis.exact import IntMatrix, smith_normal_form, unimodular_inverse
from ovalis.mod2 import HMatrix, Inconsistent, Mod2Matrix
from ovalis.periods import PeriodPair, synth_instance
from ovalis.symmetrize import (
    InvolutionMatrix, RoundingTooLoose, StageError, assemble_symplectic, compute_N1, compute_R,
    conjugation_target, kernel_section, result_to_json, symmetrize, verify_symmetric,
)
from ovalis.symplectic import J, SymplecticMap

# reference H, types and real-point flag for each curve
EXPECTED = {
    "trott": (HMatrix.zero(3), [(3, 4, 0)], "yes"),
    "klein": (HMatrix.diag_ones(3, 3), [(3, 1, 1)], "yes"),
    "fermat4": (HMatrix.blocks(3, 1), [(3, 0, 1)], "no"),
    "fermat5": (HMatrix.diag_ones(6, 6), [(6, 1, 1)], "yes"),
    "x9": (HMatrix.diag_ones(3, 3), [(3, 1, 1)], "yes"),
    "dividing": (HMatrix.blocks(6, 2), [(6, 3, 0)], "yes"),
}

REFERENCE_Q = {
    "trott": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
    "klein": [[1, 1, 1], [0, 0, 1], [0, 1, 0]],
    "fermat4": [[1, 0, 0], [0, 0, 1], [0, 1, 0]],
}

# reference [A, B, C, D] for the Trott curve, blocks side by side
REFERENCE_TROTT_ABCD = [
    [0, 1, 0, 0, -1, 0, 0, 1, 0, 0, 0, 0],
    [1, 0, 0, -1, 0, 0, 1, 0, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1],
]


def types_of(res):
    return [(t.g, t.k, t.a) for t in res.types]


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_fixture_end_to_end(name):
    h, types, rp = EXPECTED[name]
    res = symmetrize(load_fixture(name), rp)
    assert res.h == h
    assert types_of(res) == types
    assert res.verification.passed


def test_reference_trott_map_verifies():
    m = IntMatrix(REFERENCE_TROTT_ABCD)
    ref = SymplecticMap(m[:, 0:3], m[:, 3:6], m[:, 6:9], m[:, 9:12])
    p = load_fixture("trott")
    rep = verify_symmetric(ref, compute_R(p), p, HMatrix.zero(3))
    assert rep.passed


@pytest.mark.parametrize("name", sorted(REFERENCE_Q))
def test_reference_Q_solves_our_N1(name):
    p = load_fixture(name)
    n1 = compute_N1(kernel_section(compute_R(p)), p).n1
    q = IntMatrix(REFERENCE_Q[name])
    assert Mod2Matrix.from_int(q @ EXPECTED[name][0].to_int() @ q.T) == Mod2Matrix.from_int(n1)


class TestComputeR:
    @pytest.mark.parametrize("name", FIXTURE_NAMES)
    def test_fixture_involution(self, name):
        r = compute_R(load_fixture(name))
        assert r.r @ r.r == IntMatrix.identity(2 * r.g)
        assert r.r.trace() == 0
        assert r.max_rounding_deviation < 0.1

    def test_trott_kernel_smith(self):
        r = compute_R(load_fixture("trott"))
        dec = smith_normal_form(r.r.T - IntMatrix.identity(6))
        assert dec.u @ (r.r.T - IntMatrix.identity(6)) @ dec.v == dec.s
        assert dec.rank == 3
        assert set(dec.invariant_factors) <= {1, 2}

    @pytest.mark.parametrize("h", [HMatrix.zero(2), HMatrix.diag_ones(3, 2), HMatrix.blocks(5, 2)])
    def test_symmetric_input(self, h):
        sym = synth_instance(h.g, h, 4).symmetric_periods
        assert compute_R(sym).r == conjugation_target(h)

    def test_perturbation_too_loose(self):
        p = load_fixture("trott")
        bad = PeriodPair(p.a_periods + 0.3 + 0.3j, p.b_periods + 0.3 + 0.3j)
        with pytest.raises(RoundingTooLoose):
            compute_R(bad)
        with pytest.raises(StageError) as info:
            symmetrize(bad)
        assert info.value.stage == "compute_R"


class TestKernelSection:
    def test_genus_one_zero(self):
        s = kernel_section(InvolutionMatrix(IntMatrix([[1, 0], [0, -1]]), 0.0))
        assert s.tolist() in ([[1], [0]], [[-1], [0]])

    def test_genus_one_diag(self):
        r = IntMatrix([[1, 0], [1, -1]])
        assert (r.T - IntMatrix.identity(2)).tolist() == [[0, 1], [0, -2]]
        s = kernel_section(InvolutionMatrix(r, 0.0))
        assert s.tolist() in ([[1], [0]], [[-1], [0]])

    def test_klein(self):
        r = compute_R(load_fixture("klein"))
        s = kernel_section(r)
        assert s.shape == (6, 3)
        assert ((r.r.T - IntMatrix.identity(6)) @ s).is_zero()


class TestN1:
    def test_mcurve_even(self):
        inst = synth_instance(3, HMatrix.zero(3), 0)
        p = inst.symmetric_periods
        assert compute_N1(kernel_section(compute_R(p)), p).n1.mod(2).is_zero()

    @pytest.mark.parametrize("name, rank", [("klein", 3), ("fermat4", 2), ("trott", 0), ("dividing", 4)])
    def test_mod2_rank(self, name, rank):
        p = load_fixture(name)
        res = compute_N1(kernel_section(compute_R(p)), p)
        assert Mod2Matrix.from_int(res.n1).rank() == rank
        assert res.n2.mod(2).is_zero()


class TestAssemble:
    def test_genus_one_identity(self):
        sym = PeriodPair(np.array([[2.0 + 0j]]), np.array([[0.7j]]))
        s = kernel_section(compute_R(sym))
        q = IntMatrix([[s[0, 0]]])  # absorbs the sign of the kernel generator
        m, _ = assemble_symplectic(s, q, HMatrix.zero(1), sym)
        assert m.matrix() == IntMatrix.identity(2)

    def test_trott_identity_q(self):
        p = load_fixture("trott")
        s = kernel_section(compute_R(p))
        m, dev = assemble_symplectic(s, IntMatrix.identity(3), HMatrix.zero(3), p)
        assert m.is_symplectic() and dev < 0.1


class TestVerify:
    def test_identity_on_symmetric(self):
        h = HMatrix.diag_ones(4, 3)
        p = synth_instance(4, h, 2).symmetric_periods
        rep = verify_symmetric(SymplecticMap.identity(4), compute_R(p), p, h)
        assert rep.passed
        assert rep.im_a_period_residual == 0.0 and rep.b_period_reality_residual == 0.0

    @pytest.mark.parametrize("name", FIXTURE_NAMES)
    def test_mutation_detected(self, name):
        p = load_fixture(name)
        res = symmetrize(p, EXPECTED[name][2])
        a = res.map.a.tolist()
        a[0][0] += 1
        bad = SymplecticMap(IntMatrix(a), res.map.b, res.map.c, res.map.d)
        rep = verify_symmetric(bad, res.r, p, res.h)
        assert not (rep.exact_symplectic and rep.exact_conjugation)
        assert not rep.passed

    def test_identity_on_fixture_fails(self):
        p = load_fixture("klein")
        rep = verify_symmetric(SymplecticMap.identity(3), compute_R(p), p, HMatrix.diag_ones(3, 3))
        assert rep.im_a_period_residual > 0.5 and not rep.passed


class TestSymmetrize:
    def test_inconsistent_flag(self):
        with pytest.raises(StageError) as info:
            symmetrize(load_fixture("klein"), "no")
        assert info.value.stage == "classify_H" and isinstance(info.value.error, Inconsistent)

    def test_ambiguous(self):
        res = symmetrize(load_fixture("fermat4"))
        assert res.ambiguous and set(types_of(res)) == {(3, 2, 0), (3, 0, 1)}

    @pytest.mark.parametrize("name", FIXTURE_NAMES)
    def test_rounding_stability(self, name):
        p = load_fixture(name)
        rng = np.random.default_rng(17)
        noisy = PeriodPair(p.a_periods + 1e-6 * rng.normal(size=p.a_periods.shape),
                           p.b_periods + 1e-6 * rng.normal(size=p.b_periods.shape))
        rp = EXPECTED[name][2]
        assert symmetrize(noisy, rp).h == symmetrize(p, rp).h

    @pytest.mark.parametrize("name", FIXTURE_NAMES)
    def test_deterministic(self, name):
        p = load_fixture(name)
        a, b = symmetrize(p, EXPECTED[name][2]), symmetrize(p, EXPECTED[name][2])
        assert a == b
        assert result_to_json(a, timings=False) == result_to_json(b, timings=False)

    def test_q_is_unimodular_lift(self):
        res = symmetrize(load_fixture("dividing"), "yes")
        unimodular_inverse(res.q)
        assert Mod2Matrix.from_int(res.q @ res.h.to_int() @ res.q.T) == Mod2Matrix.from_int(res.n1)

    def test_report(self):
        res = symmetrize(load_fixture("trott"), "yes")
        doc = result_to_json(res, "trott")
        assert {"types", "H", "Q", "map", "verification", "timings", "rounding_deviation"} <= set(doc)
        assert doc["H"]["pattern"] == "zero"
        assert "timings" not in result_to_json(res, timings=False)
        assert set(res.timings) >= {"compute_R", "verify_symmetric", "classify_H"}

    @pytest.mark.parametrize("g", range(1, 5))
    def test_synthetic_recovers_map_class(self, g):
        inst = synth_instance(g, HMatrix.diag_ones(g, 1), 11)
        res = symmetrize(inst.tilde_periods, "yes", residual_tol=1e-8)
        t = (res.map @ inst.applied_map.inverse()).matrix()
        assert t[:g, g:].is_zero()
        assert t.T @ J(g) @ t == J(g)
