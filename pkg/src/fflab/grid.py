"""Dense complex grids on F^n with the two-sided measure convention.

Space side carries counting measure dx; frequency side carries normalized
counting measure, |F|^{-n} per point.  A function on F^n is stored flat in
little-endian mixed radix: coordinate 0 varies fastest, so the flat index of
x = (x_0, ..., x_{n-1}) is sum_i x_i * |F|^i.

Transforms:
    forward   f^(xi) = sum_x f(x) e(-x.xi)        Space -> Frequency
    inverse   g_(x) = |F|^{-n} sum_xi g(xi) e(x.xi)  Frequency -> Space

computed axis by axis as dense 1-D contractions (no FFT; summation order is
fixed, so results do not depend on parallelism).  Double precision throughout;
the default check tolerance is 1e-9 relative with a 1e-12 absolute floor.
"""

from __future__ import annotations

import enum
import struct
from dataclasses import dataclass
from fractions import Fraction

import math
import numpy as np

from .errors import SideMismatchError, WrongSideError
from .field import Field, make_field

REL_TOL = 1e-9
ABS_FLOOR = 1e-12


class Side(enum.IntEnum):
    SPACE = 0
    FREQUENCY = 1


def point_index(field: Field, point) -> int:
    """Flat index of a coordinate tuple."""
    q = field.order
    idx = 0
    for i, c in enumerate(point):
        if not 0 <= c < q:
            raise ValueError(f"coordinate {c} outside [0, {q})")
        idx += c * q**i
    return idx


def index_point(field: Field, n: int, idx: int) -> tuple[int, ...]:
    q = field.order
    return tuple((idx // q**i) % q for i in range(n))


def flat_points(field: Field, points: np.ndarray) -> np.ndarray:
    """Flat indices of an (m, n) array of coordinate rows."""
    q = field.order
    n = points.shape[1]
    pw = q ** np.arange(n, dtype=np.int64)
    return points @ pw


@dataclass(frozen=True)
class Grid:
    field: Field
    n: int
    values: np.ndarray
    side: Side

    def __post_init__(self):
        expect = self.field.order**self.n
        if self.values.shape != (expect,):
            raise ValueError(f"expected flat length {expect}, got {self.values.shape}")
        if self.values.dtype != np.complex128:
            object.__setattr__(self, "values", self.values.astype(np.complex128))
        self.values.setflags(write=False)

    # constructors

    @classmethod
    def from_values(cls, field, n, values, side=Side.SPACE):
        return cls(field, n, np.array(values, dtype=np.complex128).ravel(), Side(side))

    @classmethod
    def delta(cls, field, n, point=None, side=Side.SPACE):
        vals = np.zeros(field.order**n, dtype=np.complex128)
        idx = 0 if point is None else point_index(field, point)
        vals[idx] = 1.0
        return cls(field, n, vals, Side(side))

    @classmethod
    def constant(cls, field, n, value=1.0, side=Side.SPACE):
        vals = np.full(field.order**n, value, dtype=np.complex128)
        return cls(field, n, vals, Side(side))

    @classmethod
    def random(cls, field, n, rng, side=Side.SPACE):
        m = field.order**n
        vals = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        return cls(field, n, vals, Side(side))

    def with_values(self, values) -> "Grid":
        return Grid(self.field, self.n, np.asarray(values, dtype=np.complex128), self.side)

    def to_nd(self) -> np.ndarray:
        q = self.field.order
        return self.values.reshape((q,) * self.n, order="F")

    def __getitem__(self, point) -> complex:
        return complex(self.values[point_index(self.field, point)])


def _weight(g: Grid) -> float:
    return 1.0 if g.side == Side.SPACE else float(g.field.order) ** (-g.n)


def _transform_matrices(field: Field):
    """(forward, inverse-phase) 1-D kernels; cached on the field object."""
    cached = getattr(field, "_dft_mats", None)
    if cached is not None:
        return cached
    q = field.order
    a = np.arange(q, dtype=np.int64)
    prod = field.mul_arrays(a[:, None], a[None, :])
    plus = field.character[prod]  # plus[x, xi] = e(x.xi)
    mats = (np.conj(plus), plus)
    field._dft_mats = mats
    return mats


def _apply_axes(values: np.ndarray, mat: np.ndarray, q: int, n: int) -> np.ndarray:
    arr = values.reshape((q,) * n, order="F")
    for axis in range(n):
        arr = np.moveaxis(arr, axis, 0)
        shp = arr.shape
        arr = mat @ arr.reshape(q, -1)
        arr = np.moveaxis(arr.reshape(shp), 0, axis)
    return arr.reshape(-1, order="F")


def fourier_forward(f: Grid) -> Grid:
    """f^(xi) = sum_x f(x) e(-x.xi); defined on space-side grids only."""
    if f.side != Side.SPACE:
        raise WrongSideError("forward transform expects a space-side grid")
    minus, _ = _transform_matrices(f.field)
    out = _apply_axes(f.values, minus, f.field.order, f.n)
    return Grid(f.field, f.n, out, Side.FREQUENCY)


def fourier_inverse(g: Grid) -> Grid:
    """g_(x) = |F|^{-n} sum_xi g(xi) e(x.xi); frequency-side grids only."""
    if g.side != Side.FREQUENCY:
        raise WrongSideError("inverse transform expects a frequency-side grid")
    _, plus = _transform_matrices(g.field)
    out = _apply_axes(g.values, plus, g.field.order, g.n)
    out *= float(g.field.order) ** (-g.n)
    return Grid(g.field, g.n, out, Side.SPACE)


def _as_float_exponent(p) -> float:
    if p == math.inf:
        return math.inf
    if isinstance(p, Fraction):
        return p.numerator / p.denominator
    return float(p)


def lp_norm(f: Grid, p) -> float:
    """L^p norm under the grid's own measure (dx counting, dxi normalized)."""
    pf = _as_float_exponent(p)
    absv = np.abs(f.values)
    if pf == math.inf:
        return float(absv.max())
    if pf < 1:
        raise ValueError("exponents below 1 are not norms here")
    w = _weight(f)
    return float((w * np.sum(absv**pf)) ** (1.0 / pf))


def inner_product(f: Grid, g: Grid) -> complex:
    """<f, g> = sum f conj(g) under the shared measure."""
    if f.side != g.side or f.n != g.n or f.field is not g.field and f.field != g.field:
        raise SideMismatchError("inner product needs matching grids")
    return complex(_weight(f) * np.sum(f.values * np.conj(g.values)))


def pointwise_mul(f: Grid, g: Grid) -> Grid:
    if f.side != g.side or f.n != g.n or f.field != g.field:
        raise SideMismatchError("pointwise product needs matching grids")
    return f.with_values(f.values * g.values)


def convolve(f: Grid, g: Grid) -> Grid:
    """Convolution under the side's measure, via transform-multiply-invert.

    Space side:     (f*g)(x)  = sum_y f(y) g(x-y)
    Frequency side: (f*g)(xi) = |F|^{-n} sum_eta f(eta) g(xi-eta)
    """
    if f.side != g.side or f.n != g.n or f.field != g.field:
        raise SideMismatchError("convolution needs matching grids")
    if f.side == Side.SPACE:
        prod = pointwise_mul(fourier_forward(f), fourier_forward(g))
        return fourier_inverse(prod)
    prod = pointwise_mul(fourier_inverse(f), fourier_inverse(g))
    return fourier_forward(prod)


def parseval_defect(f1: Grid, f2: Grid) -> float:
    """|<f1, f2>_dx - <f1^, f2^>_dxi|; zero in exact arithmetic."""
    lhs = inner_product(f1, f2)
    rhs = inner_product(fourier_forward(f1), fourier_forward(f2))
    return abs(lhs - rhs)


# -- serialization -------------------------------------------------------------

_HEADER = struct.Struct("<IIII")  # p, k, n, side


def grid_to_bytes(g: Grid) -> bytes:
    head = _HEADER.pack(g.field.p, g.field.k, g.n, int(g.side))
    body = np.ascontiguousarray(g.values).astype("<c16").tobytes()
    return head + body


def grid_from_bytes(blob: bytes) -> Grid:
    p, k, n, side = _HEADER.unpack_from(blob, 0)
    field = make_field(p, k)
    vals = np.frombuffer(blob, dtype="<c16", offset=_HEADER.size).astype(np.complex128)
    return Grid(field, n, vals, Side(side))
