"""Small dense linear algebra used by the equilibrium analysis.

Everything here is deliberately closed-form or direct: 2x2 eigenvalues from
the quadratic formula, the 2x2 Lyapunov equation reduced to a 3x3 linear
solve, and 6x6 characteristic-polynomial residuals via an LU determinant.
No iterative eigensolver is needed anywhere in the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Mat2",
    "eigenvalues_2x2",
    "spectral_radius",
    "solve_lyapunov",
    "spectral_norm",
    "char_residual_6",
]


@dataclass(frozen=True)
class Mat2:
    """A real 2x2 matrix with named entries."""

    a11: float
    a12: float
    a21: float
    a22: float

    def __post_init__(self):
        for name in ("a11", "a12", "a21", "a22"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def trace(self) -> float:
        return self.a11 + self.a22

    @property
    def det(self) -> float:
        return self.a11 * self.a22 - self.a12 * self.a21

    @property
    def frobenius(self) -> float:
        return math.sqrt(self.a11**2 + self.a12**2 + self.a21**2 + self.a22**2)

    def to_array(self) -> np.ndarray:
        return np.array([[self.a11, self.a12], [self.a21, self.a22]])

    @classmethod
    def from_array(cls, a) -> "Mat2":
        a = np.asarray(a, dtype=float)
        if a.shape != (2, 2):
            raise ValueError(f"expected shape (2, 2), got {a.shape}")
        return cls(float(a[0, 0]), float(a[0, 1]), float(a[1, 0]), float(a[1, 1]))

    def to_dict(self) -> dict:
        return {"a11": self.a11, "a12": self.a12, "a21": self.a21, "a22": self.a22}


def eigenvalues_2x2(m: Mat2) -> tuple[complex, complex]:
    """Both eigenvalues, ordered by real part then imaginary part, descending.

    Roots of ``lambda^2 - tr(m) lambda + det(m)`` via the quadratic formula;
    a negative discriminant yields a conjugate pair.
    """
    half_tr = 0.5 * m.trace
    disc = half_tr * half_tr - m.det
    if disc >= 0.0:
        root = math.sqrt(disc)
        pair = (complex(half_tr + root), complex(half_tr - root))
    else:
        root = math.sqrt(-disc)
        pair = (complex(half_tr, root), complex(half_tr, -root))
    return tuple(sorted(pair, key=lambda z: (-z.real, -z.imag)))


def spectral_radius(m: Mat2) -> float:
    """Largest eigenvalue modulus."""
    lam1, lam2 = eigenvalues_2x2(m)
    return max(abs(lam1), abs(lam2))


def solve_lyapunov(m: Mat2) -> Mat2:
    """Solve ``m^T Q + Q m = -I`` for the symmetric positive definite ``Q``.

    The symmetric unknown ``(q11, q12, q22)`` satisfies the 3x3 system

        [2 a11, 2 a21,    0 ] [q11]   [-1]
        [ a12,  a11+a22, a21] [q12] = [ 0]
        [   0,  2 a12, 2 a22] [q22]   [-1]

    which is solved by Gaussian elimination with partial pivoting.

    Raises
    ------
    ValueError
        If some eigenvalue of ``m`` has real part >= 0.  The caller has left
        the subcritical regime (reproductive ratio below one) in which the
        certificate exists.
    """
    lam1, _ = eigenvalues_2x2(m)
    if lam1.real >= 0.0:
        raise ValueError(
            "Lyapunov equation requires a Hurwitz matrix; an eigenvalue has "
            f"real part {lam1.real:g} >= 0 (reproductive ratio >= 1 regime)"
        )
    a = np.array([
        [2.0 * m.a11, 2.0 * m.a21, 0.0],
        [m.a12, m.a11 + m.a22, m.a21],
        [0.0, 2.0 * m.a12, 2.0 * m.a22],
    ])
    rhs = np.array([-1.0, 0.0, -1.0])
    q11, q12, q22 = (float(v) for v in _solve_linear(a, rhs))
    q = Mat2(q11, q12, q12, q22)
    if not (q.a11 > 0.0 and q.det > 0.0):
        raise ValueError("Lyapunov solution is not positive definite")
    return q


def spectral_norm(m: Mat2) -> float:
    """Largest singular value, from the closed form for 2x2 matrices."""
    f2 = m.a11**2 + m.a12**2 + m.a21**2 + m.a22**2
    d = m.det
    inner = f2 * f2 - 4.0 * d * d
    root = math.sqrt(max(inner, 0.0))
    return math.sqrt(0.5 * (f2 + root))


def char_residual_6(matrix, lam: float) -> float:
    """``|det(matrix - lam I)|`` for a 6x6 matrix, by LU with partial pivoting.

    A closed-form eigenvalue of ``matrix`` should drive this to roundoff
    level, so it serves as a residual check without an eigensolver.
    """
    a = np.array(matrix, dtype=float)
    if a.shape != (6, 6):
        raise ValueError(f"expected shape (6, 6), got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    a[np.diag_indices(6)] -= lam
    det = 1.0
    for col in range(6):
        pivot = col + int(np.argmax(np.abs(a[col:, col])))
        if a[pivot, col] == 0.0:
            return 0.0
        if pivot != col:
            a[[col, pivot]] = a[[pivot, col]]
            det = -det
        det *= a[col, col]
        for row in range(col + 1, 6):
            factor = a[row, col] / a[col, col]
            a[row, col:] -= factor * a[col, col:]
    return abs(det)


def _solve_linear(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Gaussian elimination with partial pivoting for tiny dense systems."""
    a = a.copy()
    b = b.copy()
    n = a.shape[0]
    for col in range(n):
        pivot = col + int(np.argmax(np.abs(a[col:, col])))
        if a[pivot, col] == 0.0:
            raise ValueError("singular linear system")
        if pivot != col:
            a[[col, pivot]] = a[[pivot, col]]
            b[[col, pivot]] = b[[pivot, col]]
        for row in range(col + 1, n):
            factor = a[row, col] / a[col, col]
            a[row, col + 1:] -= factor * a[col, col + 1:]
            b[row] -= factor * b[col]
    x = np.empty(n)
    for row in range(n - 1, -1, -1):
        x[row] = (b[row] - a[row, row + 1:] @ x[row + 1:]) / a[row, row]
    return x
