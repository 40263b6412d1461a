"""From an arbitrary canonical basis to a symmetric one.

The pipeline reads the action of the anti-holomorphic involution off the
periods (an integer matrix R), takes a Z-basis of the cycles it fixes,
reduces the resulting mod-2 form to canonical H, and assembles the integer
symplectic map.  Floating point is only used where periods enter; every
integer identity is checked exactly.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import mod2
from .exact import IntMatrix, integer_kernel_basis, smith_normal_form, unimodular_inverse
from .mod2 import HMatrix, Mod2Matrix, RealPoints, TopologicalType
from .periods import PeriodPair, check_mtilde, mtilde
from .symplectic import SymplecticMap

DEFAULT_TOL = 0.25
DEFAULT_RESIDUAL_TOL = 1e-2


class RoundingTooLoose(ValueError):
    pass


class NotInvolution(ValueError):
    pass


class RankMismatch(ValueError):
    pass


class SingularRealPart(ValueError):
    pass


class N2NotEven(ValueError):
    pass


class NotSymplectic(ValueError):
    pass


class VerificationFailed(ValueError):
    pass


class StageError(Exception):
    """A pipeline failure tagged with the stage that raised it."""

    def __init__(self, stage: str, error: Exception):
        super().__init__(f"[{stage}] {type(error).__name__}: {error}")
        self.stage = stage
        self.error = error


@dataclass(frozen=True)
class InvolutionMatrix:
    r: IntMatrix
    max_rounding_deviation: float

    @property
    def g(self) -> int:
        return self.r.nrows // 2


@dataclass(frozen=True)
class VerificationReport:
    exact_symplectic: bool
    exact_conjugation: bool
    im_a_period_residual: float
    b_period_reality_residual: float
    n2_even: bool
    tol: float = DEFAULT_RESIDUAL_TOL

    @property
    def passed(self) -> bool:
        return (self.exact_symplectic and self.exact_conjugation and self.n2_even
                and self.im_a_period_residual <= self.tol
                and self.b_period_reality_residual <= self.tol)

    def to_json(self) -> dict:
        return {
            "exact_symplectic": self.exact_symplectic,
            "exact_conjugation": self.exact_conjugation,
            "im_a_period_residual": self.im_a_period_residual,
            "b_period_reality_residual": self.b_period_reality_residual,
            "n2_even": self.n2_even,
            "tol": self.tol,
            "passed": self.passed,
        }


def _round(x: np.ndarray, tol: float, what: str) -> tuple[IntMatrix, float]:
    xi = np.rint(x)
    dev = float(np.abs(x - xi).max()) if x.size else 0.0
    if not dev <= tol:
        raise RoundingTooLoose(f"{what}: max distance to nearest integer {dev:.3g} exceeds tol {tol:.3g}")
    return IntMatrix([[int(v) for v in row] for row in xi], ncols=x.shape[1]), dev


def conjugation_target(h: HMatrix) -> IntMatrix:
    """``[[I, 0], [H, -I]]``, the involution in a symmetric basis."""
    g = h.g
    i = IntMatrix.identity(g)
    return IntMatrix.block([[i, IntMatrix.zeros(g, g)], [h.to_int(), -i]])


def compute_R(p: PeriodPair, tol: float = DEFAULT_TOL) -> InvolutionMatrix:
    """Integer matrix of the involution on the given cycles, rounded from the periods."""
    check_mtilde(p)
    g = p.g
    a, b = p.a_periods, p.b_periods
    mt = mtilde(p)
    # M^-1 Im(A^t) and M^-1 Im(B^t) via solves
    ma = np.linalg.solve(mt, a.imag.T)
    mb = np.linalg.solve(mt, b.imag.T)
    x = 2 * b.real @ ma + np.eye(g)
    top = np.hstack([x.T, -2 * a.real @ ma])
    bot = np.hstack([2 * b.real @ mb, -x])
    r, dev = _round(np.vstack([top, bot]), tol, "R")
    if r @ r != IntMatrix.identity(2 * g):
        raise NotInvolution("rounded R does not square to the identity")
    if r.trace() != 0:
        raise NotInvolution(f"trace(R) = {r.trace()}, expected 0")
    return InvolutionMatrix(r, dev)


def kernel_section(r: InvolutionMatrix) -> IntMatrix:
    """2g x g matrix whose columns are a Z-basis of ker(R^t - I)."""
    g = r.g
    s = integer_kernel_basis(r.r.T - IntMatrix.identity(2 * g))
    if s.ncols != g:
        raise RankMismatch(f"integer kernel of R^t - I has rank {s.ncols}, expected {g}")
    return s


def _real_stack(p: PeriodPair) -> np.ndarray:
    return np.vstack([-p.b_periods.real, p.a_periods.real])


def _real_part_inverse(s: IntMatrix, p: PeriodPair) -> np.ndarray:
    """``(-Re PB; Re PA) [S1^t Re PA + S2^t Re PB]^-1``."""
    g = p.g
    sf = s.to_numpy(float)
    base = sf[:g].T @ p.a_periods.real + sf[g:].T @ p.b_periods.real
    if np.linalg.cond(base) > 1e12:
        raise SingularRealPart("S1^t Re(PA) + S2^t Re(PB) is numerically singular")
    # X @ base^-1 == solve(base^t, X^t)^t
    return np.linalg.solve(base.T, _real_stack(p).T).T


@dataclass(frozen=True)
class N1Result:
    n1: IntMatrix
    n2: IntMatrix
    max_rounding_deviation: float


def compute_N1(s: IntMatrix, p: PeriodPair, tol: float = DEFAULT_TOL) -> N1Result:
    """The g x g integer matrix whose mod-2 class must equal Q H Q^t.

    With ``U @ S @ V == (I; 0)``: W = 2 U (-Re PB; Re PA)[...]^-1 is rounded,
    N1 = V @ (top g rows of W), N2 = bottom g rows, which must be even.
    """
    g = p.g
    dec = smith_normal_form(s)
    if dec.rank != g or any(x != 1 for x in dec.invariant_factors):
        raise RankMismatch(f"kernel basis is not primitive: invariant factors {dec.invariant_factors}")
    w = 2 * dec.u.to_numpy(float) @ _real_part_inverse(s, p)
    wi, dev = _round(w, tol, "N1")
    n1 = dec.v @ wi[:g, :]
    n2 = wi[g:, :]
    if not n2.mod(2).is_zero():
        raise N2NotEven(f"N2 is not even: {n2.tolist()}")
    return N1Result(n1, n2, dev)


def assemble_symplectic(s: IntMatrix, q: IntMatrix, h: HMatrix, p: PeriodPair,
                        tol: float = DEFAULT_TOL) -> tuple[SymplecticMap, float]:
    """Integer (A, B; C, D) taking the given basis to a symmetric one.

    ``(A^t; B^t) = S Q`` exactly; ``(C^t; D^t) = 1/2 S Q H + X (Q^t)^-1``
    is rounded.  Returns the map and the rounding deviation.
    """
    g = p.g
    sq = s @ q
    a, b = sq[:g, :].T, sq[g:, :].T
    qt_inv = unimodular_inverse(q.T).to_numpy(float)
    cd = 0.5 * (sq @ h.to_int()).to_numpy(float) + _real_part_inverse(s, p) @ qt_inv
    cdi, dev = _round(cd, tol, "C, D")
    m = SymplecticMap(a, b, cdi[:g, :].T, cdi[g:, :].T)
    if not m.is_symplectic():
        raise NotSymplectic("assembled map fails M^t J M == J")
    return m, dev


def period_residuals(m: SymplecticMap, p: PeriodPair, h: HMatrix) -> tuple[float, float]:
    """max|Im PA'| and max|2 Re PB' - H PA'| for the transformed periods."""
    pa, pb = m.apply(p.a_periods, p.b_periods)
    hf = h.to_int().to_numpy(float)
    return float(np.abs(pa.imag).max()), float(np.abs(2 * pb.real - hf @ pa).max())


def verify_symmetric(m: SymplecticMap, r: InvolutionMatrix, p: PeriodPair, h: HMatrix,
                     tol: float = DEFAULT_RESIDUAL_TOL, n2: Optional[IntMatrix] = None) -> VerificationReport:
    """Exact and numeric checks that ``m`` lands in a symmetric basis for ``h``.

    When ``n2`` is not supplied it is recomputed from ``r`` and the periods.
    """
    mm = m.matrix()
    exact_conj = mm.shape == r.r.shape and mm @ r.r == conjugation_target(h) @ mm
    im_res, b_res = period_residuals(m, p, h)
    if n2 is None:
        try:
            n2 = compute_N1(kernel_section(r), p).n2
            n2_even = True
        except (N2NotEven, RankMismatch, RoundingTooLoose, SingularRealPart):
            n2_even = False
    else:
        n2_even = n2.mod(2).is_zero()
    return VerificationReport(
        exact_symplectic=m.is_symplectic(),
        exact_conjugation=exact_conj,
        im_a_period_residual=im_res,
        b_period_reality_residual=b_res,
        n2_even=n2_even,
        tol=tol,
    )


@dataclass(frozen=True)
class SymmetrizeResult:
    r: InvolutionMatrix
    s: IntMatrix
    n1: IntMatrix
    n2: IntMatrix
    q: IntMatrix
    h: HMatrix
    map: SymplecticMap
    types: tuple[TopologicalType, ...]
    verification: VerificationReport
    rounding: dict = field(compare=False)
    timings: dict = field(compare=False, default_factory=dict)

    @property
    def g(self) -> int:
        return self.h.g

    @property
    def ambiguous(self) -> bool:
        return len(self.types) > 1


def symmetrize(p: PeriodPair, real_points: RealPoints | str = RealPoints.UNKNOWN,
               tol: float = DEFAULT_TOL, residual_tol: float = DEFAULT_RESIDUAL_TOL) -> SymmetrizeResult:
    """Run the whole pipeline; any failure surfaces as a :class:`StageError`."""
    timings: dict[str, float] = {}

    def stage(name, fn, *args):
        t0 = time.perf_counter()
        try:
            return fn(*args)
        except StageError:
            raise
        except Exception as exc:
            raise StageError(name, exc) from exc
        finally:
            timings[name] = time.perf_counter() - t0

    r = stage("compute_R", compute_R, p, tol)
    s = stage("kernel_section", kernel_section, r)
    n = stage("compute_N1", compute_N1, s, p, tol)
    trace, h = stage("congruence_reduce", mod2.congruence_reduce, Mod2Matrix.from_int(n.n1), p.g)
    q = stage("lift_to_unimodular", mod2.lift_to_unimodular, trace)
    m, cd_dev = stage("assemble_symplectic", assemble_symplectic, s, q, h, p, tol)
    ver = stage("verify_symmetric", verify_symmetric, m, r, p, h, residual_tol, n.n2)
    if not ver.passed:
        raise StageError("verify_symmetric", VerificationFailed(f"verification failed: {ver.to_json()}"))
    types = stage("classify_H", mod2.classify_H, h, real_points)
    return SymmetrizeResult(
        r=r, s=s, n1=n.n1, n2=n.n2, q=q, h=h, map=m, types=tuple(types), verification=ver,
        rounding={"R": r.max_rounding_deviation, "N1": n.max_rounding_deviation, "CD": cd_dev},
        timings=timings,
    )


def result_to_json(res: SymmetrizeResult, label: str = "", timings: bool = True) -> dict:
    doc = {
        "label": label,
        "genus": res.g,
        "types": [t.to_json() for t in res.types],
        "ambiguous": res.ambiguous,
        "H": res.h.to_json(),
        "Q": res.q.to_json(),
        "map": res.map.to_json(),
        "R": res.r.r.to_json(),
        "kernel_basis": res.s.to_json(),
        "N1": res.n1.to_json(),
        "N2": res.n2.to_json(),
        "rounding_deviation": res.rounding,
        "verification": res.verification.to_json(),
    }
    if timings:
        doc["timings"] = res.timings
    return doc
