"""Period matrices: data model, I/O, sanity checks and a synthetic generator.

Convention: ``a_periods[i, j]`` is the integral of the j-th differential over
the i-th A-cycle (rows are cycles), and likewise for ``b_periods``.

The synthetic generator produces period pairs that satisfy the reality
constraints of a symmetric basis (real A-periods, ``2 Re(PB) == H PA``),
pushed through a random integer symplectic map.  It does NOT produce genuine
Riemann matrices: the pipeline only consumes the reality constraints, so the
bilinear relations are not enforced.  Synthetic data is test data, not curve
data.
"""
from __future__ import annotations

import csv
import io
import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Optional, Union

import numpy as np

from .exact import IntMatrix, unimodular_inverse
from .mod2 import HMatrix
from .symplectic import SymplecticMap

DEFAULT_MAX_COND = 1e10
SYNTH_MAX_COND = 1e4


class ParseError(ValueError):
    pass


class ShapeError(ValueError):
    pass


class SingularMtilde(ValueError):
    pass


class DegenerateDraw(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class PeriodPair:
    a_periods: np.ndarray
    b_periods: np.ndarray
    label: str = ""
    # free-form extras carried through I/O (plot polynomial, window, expected results)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        a = np.asarray(self.a_periods, dtype=complex)
        b = np.asarray(self.b_periods, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ShapeError(f"a_periods must be square, got shape {a.shape}")
        if b.shape != a.shape:
            raise ShapeError(f"b_periods shape {b.shape} does not match a_periods {a.shape}")
        if not (np.isfinite(a).all() and np.isfinite(b).all()):
            raise ValueError("period matrices contain NaN or Inf")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a_periods", a)
        object.__setattr__(self, "b_periods", b)

    @property
    def g(self) -> int:
        return self.a_periods.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PeriodPair):
            return NotImplemented
        return (self.label == other.label and np.array_equal(self.a_periods, other.a_periods)
                and np.array_equal(self.b_periods, other.b_periods))


def mtilde(p: PeriodPair) -> np.ndarray:
    """``Im(PB^t) Re(PA) - Im(PA^t) Re(PB)``."""
    a, b = p.a_periods, p.b_periods
    return b.imag.T @ a.real - a.imag.T @ b.real


def mtilde_condition(p: PeriodPair) -> float:
    return float(np.linalg.cond(mtilde(p)))


def check_mtilde(p: PeriodPair, max_cond: float = DEFAULT_MAX_COND) -> float:
    cond = mtilde_condition(p)
    if not np.isfinite(cond) or cond > max_cond:
        raise SingularMtilde(f"Mtilde is numerically singular (condition {cond:.3g} > {max_cond:.3g})")
    return cond


# -- I/O ----------------------------------------------------------------------

def _complex_grid(rows, name: str) -> np.ndarray:
    try:
        return np.array([[complex(float(re), float(im)) for re, im in row] for row in rows], dtype=complex)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{name}: expected rows of [re, im] pairs ({exc})") from None


def _read_text(source) -> str:
    if isinstance(source, (bytes, bytearray)):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    return data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data


def load_periods(source: Union[IO, bytes, str], format: str = "json",
                 max_cond: float = DEFAULT_MAX_COND) -> PeriodPair:
    """Parse a period document (JSON or CSV) and check its invariants."""
    text = _read_text(source)
    if format == "json":
        p = _parse_json(text)
    elif format == "csv":
        p = _parse_csv(text)
    else:
        raise ParseError(f"unknown format {format!r}")
    check_mtilde(p, max_cond)
    return p


def load_periods_file(path: Union[str, Path], format: Optional[str] = None,
                      max_cond: float = DEFAULT_MAX_COND) -> PeriodPair:
    path = Path(path)
    if format is None:
        format = "csv" if path.suffix.lower() == ".csv" else "json"
    with open(path, "rb") as fh:
        return load_periods(fh, format, max_cond)


def _parse_json(text: str) -> PeriodPair:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("period document must be a JSON object")
    try:
        a = _complex_grid(doc["a_periods"], "a_periods")
        b = _complex_grid(doc["b_periods"], "b_periods")
    except KeyError as exc:
        raise ParseError(f"missing key {exc}") from None
    if a.ndim != 2:
        raise ShapeError("a_periods must be a 2-d grid")
    g = doc.get("genus")
    if g is not None and (a.shape != (g, g) or b.shape != (g, g)):
        raise ShapeError(f"genus {g} does not match matrix shapes {a.shape}, {b.shape}")
    meta = {k: v for k, v in doc.items() if k not in {"label", "genus", "a_periods", "b_periods"}}
    return PeriodPair(a, b, label=str(doc.get("label", "")), meta=meta)


def _parse_csv(text: str) -> PeriodPair:
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not rows:
        raise ParseError("empty CSV")
    try:
        g = int(rows[0][0])
    except ValueError:
        raise ParseError(f"CSV header must hold the genus, got {rows[0]!r}") from None
    body = rows[1:]
    if len(body) != 2 * g or any(len(r) != 2 * g for r in body):
        raise ShapeError(f"CSV body must be {2 * g} rows x {2 * g} columns for g={g}")
    try:
        vals = np.array([[float(c) for c in r] for r in body])
    except ValueError as exc:
        raise ParseError(f"bad number in CSV: {exc}") from None
    z = vals[:, 0::2] + 1j * vals[:, 1::2]
    return PeriodPair(z[:g], z[g:], label="")


def periods_to_json(p: PeriodPair) -> dict:
    def grid(m):
        return [[[float(z.real), float(z.imag)] for z in row] for row in m]
    doc = {"label": p.label, "genus": p.g, "a_periods": grid(p.a_periods), "b_periods": grid(p.b_periods)}
    doc.update(p.meta)
    return doc


def dump_periods(p: PeriodPair, format: str = "json") -> str:
    if format == "json":
        return json.dumps(periods_to_json(p), indent=1)
    if format == "csv":
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow([p.g])
        for row in np.vstack([p.a_periods, p.b_periods]):
            w.writerow([repr(float(x)) for z in row for x in (z.real, z.imag)])
        return out.getvalue()
    raise ParseError(f"unknown format {format!r}")


# -- validation ---------------------------------------------------------------

@dataclass
class ValidationReport:
    mtilde_condition: float
    max_abs_im_a: float
    tau_orientation: Optional[str]
    tau_symmetry_residual: float
    im_tau_min_eigenvalue: Optional[float]
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.warnings

    def to_json(self) -> dict:
        return {
            "mtilde_condition": self.mtilde_condition,
            "max_abs_im_a": self.max_abs_im_a,
            "tau_orientation": self.tau_orientation,
            "tau_symmetry_residual": self.tau_symmetry_residual,
            "im_tau_min_eigenvalue": self.im_tau_min_eigenvalue,
            "warnings": list(self.warnings),
        }


def validate_periods(p: PeriodPair, tol: float = 1e-2) -> ValidationReport:
    """Report-only sanity checks; never raises on bad data."""
    warnings = []
    cond = mtilde_condition(p)
    if not np.isfinite(cond) or cond > DEFAULT_MAX_COND:
        warnings.append(f"Mtilde is ill-conditioned (condition {cond:.3g})")

    a, b = p.a_periods, p.b_periods
    best = (None, np.inf, None)
    if np.linalg.cond(a) < 1 / np.finfo(float).eps:
        ainv = np.linalg.inv(a)
        scale = max(1.0, float(np.abs(b).max()))
        for name, tau in (("b_periods @ inv(a_periods)", b @ ainv), ("inv(a_periods) @ b_periods", ainv @ b)):
            res = float(np.abs(tau - tau.T).max()) / scale
            if res < best[1]:
                im = (tau.imag + tau.imag.T) / 2
                best = (name, res, float(np.linalg.eigvalsh(im).min()))
    else:
        warnings.append("a_periods is singular; normalized period matrix unavailable")

    orient, sym_res, min_eig = best
    if orient is not None:
        if sym_res > tol:
            warnings.append(f"normalized period matrix not symmetric in either orientation (residual {sym_res:.3g})")
        elif min_eig <= 0:
            warnings.append(f"imaginary part of the normalized period matrix is not positive definite "
                            f"(min eigenvalue {min_eig:.3g})")
    return ValidationReport(
        mtilde_condition=cond,
        max_abs_im_a=float(np.abs(a.imag).max()),
        tau_orientation=orient if orient is not None and sym_res <= tol else None,
        tau_symmetry_residual=float(sym_res),
        im_tau_min_eigenvalue=min_eig,
        warnings=warnings,
    )


# -- synthetic generator ------------------------------------------------------

def _random_unimodular(g: int, rng: random.Random, n_ops: int = 3) -> IntMatrix:
    u = IntMatrix.identity(g).tolist()
    for _ in range(n_ops):
        kind = rng.randrange(3) if g > 1 else 2
        if kind == 0:
            i, j = rng.sample(range(g), 2)
            u[i], u[j] = u[j], u[i]
        elif kind == 1:
            i, j = rng.sample(range(g), 2)
            k = rng.choice((-1, 1))
            u[j] = [x + k * y for x, y in zip(u[j], u[i])]
        else:
            i = rng.randrange(g)
            u[i] = [-x for x in u[i]]
    return IntMatrix(u, ncols=g)


def _random_symmetric(g: int, rng: random.Random, bound: int = 1) -> IntMatrix:
    m = [[0] * g for _ in range(g)]
    for i in range(g):
        for j in range(i, g):
            m[i][j] = m[j][i] = rng.randint(-bound, bound)
    return IntMatrix(m, ncols=g)


def random_symplectic(g: int, seed: int, n_ops: int = 6) -> SymplecticMap:
    """Product of ``n_ops`` random generators of Sp(2g, Z), deterministic in ``seed``.

    Generators: ``[[I, B], [0, I]]`` and ``[[I, 0], [C, I]]`` with symmetric
    integer B, C, and ``[[U^t, 0], [0, U^-1]]`` with unimodular U.
    """
    if g < 1:
        raise ValueError("g must be positive")
    rng = random.Random(seed)
    i, z = IntMatrix.identity(g), IntMatrix.zeros(g, g)
    m = SymplecticMap.identity(g)
    for _ in range(n_ops):
        kind = rng.randrange(3)
        if kind == 0:
            step = SymplecticMap(i, _random_symmetric(g, rng), z, i)
        elif kind == 1:
            step = SymplecticMap(i, z, _random_symmetric(g, rng), i)
        else:
            u = _random_unimodular(g, rng)
            step = SymplecticMap(u.T, z, z, unimodular_inverse(u))
        m = step @ m
    return m


@dataclass(frozen=True)
class SyntheticInstance:
    tilde_periods: PeriodPair
    symmetric_periods: PeriodPair
    true_h: HMatrix
    applied_map: SymplecticMap
    seed: int

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "h": self.true_h.to_json(),
            "map": self.applied_map.to_json(),
            "symmetric_periods": periods_to_json(self.symmetric_periods),
        }


def synth_instance(g: int, h: HMatrix, seed: int, n_ops: int = 6,
                   max_cond: float = SYNTH_MAX_COND, max_tries: int = 50) -> SyntheticInstance:
    """Ground-truth instance: symmetric-basis periods for ``h`` seen through ``M^-1``.

    ``applied_map`` is the M with ``M @ tilde == symmetric``, so a correct
    pipeline recovers it up to the symmetric-basis freedom.
    """
    if h.g != g:
        raise ValueError(f"H has size {h.g}, expected {g}")
    rng = np.random.default_rng(seed)
    hf = h.to_int().to_numpy(float)
    for _ in range(max_tries):
        pa = rng.uniform(-1.0, 1.0, size=(g, g))
        im_b = rng.uniform(-1.0, 1.0, size=(g, g))
        if np.linalg.cond(pa) > max_cond or np.linalg.cond(im_b) > max_cond:
            continue
        pb = 0.5 * (hf @ pa) + 1j * im_b
        sym = PeriodPair(pa.astype(complex), pb, label=f"synthetic-symmetric g={g} H={h} seed={seed}")
        if mtilde_condition(sym) > max_cond:
            continue
        m = random_symplectic(g, seed, n_ops)
        ta, tb = m.inverse().apply(sym.a_periods, sym.b_periods)
        tilde = PeriodPair(ta, tb, label=f"synthetic g={g} H={h} seed={seed}")
        return SyntheticInstance(tilde, sym, h, m, seed)
    raise DegenerateDraw(f"no well-conditioned draw for g={g} seed={seed} after {max_tries} tries")
