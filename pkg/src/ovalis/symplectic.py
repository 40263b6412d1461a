"""Integer symplectic matrices in (A, B; C, D) block form."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exact import IntMatrix


def J(g: int) -> IntMatrix:
    """The intersection form ``[[0, I], [-I, 0]]``."""
    z, i = IntMatrix.zeros(g, g), IntMatrix.identity(g)
    return IntMatrix.block([[z, i], [-i, z]])


@dataclass(frozen=True)
class SymplecticMap:
    a: IntMatrix
    b: IntMatrix
    c: IntMatrix
    d: IntMatrix

    @property
    def g(self) -> int:
        return self.a.nrows

    @classmethod
    def identity(cls, g: int) -> SymplecticMap:
        z, i = IntMatrix.zeros(g, g), IntMatrix.identity(g)
        return cls(i, z, z, i)

    @classmethod
    def from_matrix(cls, m: IntMatrix) -> SymplecticMap:
        n = m.nrows
        if n != m.ncols or n % 2:
            raise ValueError(f"expected a 2g x 2g matrix, got {m.shape}")
        g = n // 2
        return cls(m[:g, :g], m[:g, g:], m[g:, :g], m[g:, g:])

    def matrix(self) -> IntMatrix:
        return IntMatrix.block([[self.a, self.b], [self.c, self.d]])

    def inverse(self) -> SymplecticMap:
        """``[[D^t, -B^t], [-C^t, A^t]]``; exact only for symplectic input."""
        return SymplecticMap(self.d.T, -self.b.T, -self.c.T, self.a.T)

    def __matmul__(self, other: SymplecticMap) -> SymplecticMap:
        return SymplecticMap.from_matrix(self.matrix() @ other.matrix())

    def is_symplectic(self) -> bool:
        m = self.matrix()
        return m.T @ J(self.g) @ m == J(self.g)

    def block_identities(self) -> tuple[bool, bool, bool]:
        """A^tD - C^tB == I, A^tC symmetric, D^tB symmetric."""
        a, b, c, d = self.a, self.b, self.c, self.d
        return (
            a.T @ d - c.T @ b == IntMatrix.identity(self.g),
            a.T @ c == c.T @ a,
            d.T @ b == b.T @ d,
        )

    def apply(self, pa: np.ndarray, pb: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Transform stacked periods: ``(PA'; PB') = M @ (PA; PB)``."""
        m = self.matrix().to_numpy(float)
        out = m @ np.vstack([pa, pb])
        return out[: self.g], out[self.g:]

    def to_json(self) -> dict:
        return {"A": self.a.to_json(), "B": self.b.to_json(), "C": self.c.to_json(), "D": self.d.to_json()}

    @classmethod
    def from_json(cls, doc: dict) -> SymplecticMap:
        if "matrix" in doc:
            return cls.from_matrix(IntMatrix.from_json(doc["matrix"]))
        return cls(*(IntMatrix.from_json(doc[k]) for k in "ABCD"))
