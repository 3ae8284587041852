"""Fourier analysis on Z_q^d with the normalized transform pair

    F(m) = q^{-d} sum_x f(x) e^{-2 pi i (x . m)/q}
    f(x) = sum_m F(m) e^{+2 pi i (x . m)/q}

Grids are stored flat in row-major order: the flat index of (x_1, ..., x_d)
is its base-q reading with x_1 most significant.  Transforms are separable:
d one-dimensional length-q passes, O(d q^{d+1}) scalar work, no radix
restriction on q.  Phases are reduced mod q before exponentiation.  Each
output coefficient is a contiguous dot product, so results are independent
of any parallel schedule the underlying BLAS may use.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .arith import Modulus, Residue, as_modulus
from .errors import BudgetError, DomainError

__all__ = [
    "GridFunction",
    "Spectrum",
    "chi",
    "forward",
    "inverse",
    "plancherel_defect",
    "dft_reference",
    "orthogonality_max_defect",
    "character_table",
    "lattice_points",
    "index_of_point",
    "point_of_index",
    "DEFAULT_GRID_BUDGET",
]

DEFAULT_GRID_BUDGET = 10**7


def check_grid_budget(q: int, d: int, max_grid: int = DEFAULT_GRID_BUDGET) -> int:
    size = q**d
    if size > max_grid:
        raise BudgetError(f"grid Z_{q}^{d} has {size} points, exceeding the budget {max_grid}")
    return size


def index_of_point(point: Sequence[int], q: int, d: int) -> int:
    if len(point) != d:
        raise DomainError(f"expected {d} coordinates, got {len(point)}")
    idx = 0
    for c in point:
        idx = idx * q + (c % q)
    return idx


def point_of_index(index: int, q: int, d: int) -> tuple[int, ...]:
    out = []
    for _ in range(d):
        index, r = divmod(index, q)
        out.append(r)
    return tuple(reversed(out))


@lru_cache(maxsize=64)
def character_table(q: int) -> np.ndarray:
    """e^{2 pi i k / q} for k in Z_q, the q-entry table behind all transforms."""
    tbl = np.exp(2j * np.pi * np.arange(q) / q)
    tbl.setflags(write=False)
    return tbl


@lru_cache(maxsize=16)
def lattice_points(q: int, d: int) -> np.ndarray:
    """All points of Z_q^d as a (q^d, d) integer array in flat-index order."""
    check_grid_budget(q, d)
    pts = np.indices((q,) * d, dtype=np.int64).reshape(d, -1).T
    pts = np.ascontiguousarray(pts)
    pts.setflags(write=False)
    return pts


class _GridBase:
    """Flat complex data indexed by Z_q^d; values are immutable once built."""

    __slots__ = ("modulus", "d", "values")

    def __init__(self, q: "int | Modulus", d: int, values: Iterable[complex]) -> None:
        modulus = as_modulus(q)
        if d < 1:
            raise DomainError(f"dimension must be >= 1, got {d}")
        vals = np.array(values, dtype=np.complex128).reshape(-1)
        if vals.size != modulus.q**d:
            raise DomainError(
                f"expected {modulus.q ** d} values for Z_{modulus.q}^{d}, got {vals.size}"
            )
        vals.setflags(write=False)
        self.modulus = modulus
        self.d = d
        self.values = vals

    @property
    def q(self) -> int:
        return self.modulus.q

    @property
    def size(self) -> int:
        return self.values.size

    def grid(self) -> np.ndarray:
        return self.values.reshape((self.q,) * self.d)

    def index_of(self, point: Sequence[int]) -> int:
        return index_of_point(point, self.q, self.d)

    def point_of(self, index: int) -> tuple[int, ...]:
        return point_of_index(index, self.q, self.d)

    def __getitem__(self, point: Sequence[int]) -> complex:
        return complex(self.values[self.index_of(point)])

    def __len__(self) -> int:
        return self.values.size


class GridFunction(_GridBase):
    """A complex-valued function on Z_q^d."""


class Spectrum(_GridBase):
    """Fourier coefficients indexed by frequency vectors m in Z_q^d."""


def chi(x: Residue) -> complex:
    """The additive character chi(x) = e^{2 pi i x / q}."""
    return complex(character_table(x.q)[x.value])


@lru_cache(maxsize=64)
def _kernel(q: int, forward_sign: bool) -> np.ndarray:
    phases = np.outer(np.arange(q), np.arange(q)) % q
    tbl = character_table(q)
    mat = np.conj(tbl)[phases] if forward_sign else tbl[phases]
    mat.setflags(write=False)
    return mat


def _separable_apply(values: np.ndarray, q: int, d: int, kernel: np.ndarray) -> np.ndarray:
    arr = values.reshape((q,) * d)
    for axis in range(d):
        arr = np.moveaxis(np.tensordot(kernel, arr, axes=([1], [axis])), 0, axis)
    return arr.reshape(-1)


def forward(f: GridFunction) -> Spectrum:
    """F(m) = q^{-d} sum_x f(x) e^{-2 pi i (x . m)/q}, axis by axis."""
    out = _separable_apply(f.values, f.q, f.d, _kernel(f.q, True))
    out *= 1.0 / f.size
    return Spectrum(f.modulus, f.d, out)


def inverse(F: Spectrum) -> GridFunction:
    """f(x) = sum_m F(m) e^{+2 pi i (x . m)/q}; exact inverse of forward."""
    out = _separable_apply(F.values, F.q, F.d, _kernel(F.q, False))
    return GridFunction(F.modulus, F.d, out)


def plancherel_defect(f: GridFunction, g: GridFunction) -> float:
    """| q^{-d} sum_x f conj(g)  -  sum_m F conj(G) |, a test statistic."""
    if f.q != g.q or f.d != g.d:
        raise DomainError(f"shape mismatch: Z_{f.q}^{f.d} vs Z_{g.q}^{g.d}")
    lhs = np.vdot(g.values, f.values) / f.size
    rhs = np.vdot(forward(g).values, forward(f).values)
    return float(abs(lhs - rhs))


def dft_reference(f: GridFunction, max_size: int = 20_000) -> Spectrum:
    """The O(q^{2d}) double-sum transform straight from the definition.

    Independent of the separable path; intended as a small-grid oracle.
    """
    if f.size > max_size:
        raise BudgetError(f"reference DFT limited to {max_size} points, got {f.size}")
    pts = lattice_points(f.q, f.d)
    phases = (pts @ pts.T) % f.q
    kernel = np.conj(character_table(f.q))[phases]
    return Spectrum(f.modulus, f.d, (kernel.T @ f.values) / f.size)


def orthogonality_max_defect(q: int, d: int, max_grid: int = DEFAULT_GRID_BUDGET) -> float:
    """max over m of | q^{-d} sum_x e^{2 pi i (x . m)/q} - [m = 0] |.

    Every (x, m) pair is summed directly; no transform code is involved.
    """
    check_grid_budget(q, d, max_grid)
    pts = lattice_points(q, d)
    tbl = character_table(q)
    n = pts.shape[0]
    worst = 0.0
    chunk = max(1, 2**22 // max(n, 1))
    for lo in range(0, n, chunk):
        block = pts[lo : lo + chunk]
        phases = (pts @ block.T) % q
        sums = tbl[phases].sum(axis=0) / n
        if lo == 0:
            sums[0] -= 1.0
        worst = max(worst, float(np.abs(sums).max()))
    return worst
