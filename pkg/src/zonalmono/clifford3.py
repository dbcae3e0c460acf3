"""Arithmetic of the Clifford algebra R_3 (e_j^2 = -1) and its even subalgebra.

Multivectors are stored as 8 coefficients in the fixed blade order
``(1, e1, e2, e3, e12, e13, e23, e123)``.  The vectorised helpers (``gp``,
``conj_arr``, ...) operate on arrays whose last axis has length 8, which is
what the basis evaluators use; :class:`Multivector3` wraps a single value.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Real

import numpy as np

BLADES = ("s", "e1", "e2", "e3", "e12", "e13", "e23", "e123")
# bitmask of generators for each slot (bit 0 = e1, bit 1 = e2, bit 2 = e3)
_MASKS = (0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111)
_SLOT = {m: i for i, m in enumerate(_MASKS)}
GRADES = np.array([bin(m).count("1") for m in _MASKS])
EVEN_SLOTS = (0, 4, 5, 6)
ODD_SLOTS = (1, 2, 3, 7)

# scalar/vector/bivector/trivector signs of the Hermitian conjugation
_CONJ_SIGN = np.array([1.0, -1.0, -1.0, -1.0, -1.0, -1.0, -1.0, 1.0])

EXP_SCALAR_TOL = 1e-12
_SERIES_CUTOFF = 1e-8


def _blade_product(ma: int, mb: int) -> tuple[float, int]:
    # count transpositions needed to merge the two ordered generator lists
    swaps = 0
    a = ma >> 1
    while a:
        swaps += bin(a & mb).count("1")
        a >>= 1
    sign = -1.0 if swaps % 2 else 1.0
    # every repeated generator squares to -1
    if bin(ma & mb).count("1") % 2:
        sign = -sign
    return sign, ma ^ mb


def _build_product_table() -> np.ndarray:
    table = np.zeros((8, 8, 8))
    for i, ma in enumerate(_MASKS):
        for j, mb in enumerate(_MASKS):
            sign, m = _blade_product(ma, mb)
            table[i, j, _SLOT[m]] = sign
    return table


# PRODUCT[i, j, k]: coefficient of blade k in (blade i)(blade j)
PRODUCT = _build_product_table()


def gp(a, b) -> np.ndarray:
    """Geometric product of broadcastable coefficient arrays ``(..., 8)``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.einsum("...i,...j,ijk->...k", a, b, PRODUCT)


def conj_arr(a) -> np.ndarray:
    return np.asarray(a, dtype=float) * _CONJ_SIGN


def grade_arr(a, k: int) -> np.ndarray:
    if k not in (0, 1, 2, 3):
        raise ValueError(f"grade must be in 0..3, got {k}")
    return np.asarray(a, dtype=float) * (GRADES == k)


def vector_arr(x) -> np.ndarray:
    """Embed 3-vectors ``(..., 3)`` as grade-1 multivectors ``(..., 8)``."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape[:-1] + (8,))
    out[..., 1:4] = x
    return out


def scalar_arr(s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    out = np.zeros(s.shape + (8,))
    out[..., 0] = s
    return out


def bivector_arr(b12, b13, b23) -> np.ndarray:
    b12, b13, b23 = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (b12, b13, b23)))
    out = np.zeros(b12.shape + (8,))
    out[..., 4] = b12
    out[..., 5] = b13
    out[..., 6] = b23
    return out


def wedge_arr(x, y) -> np.ndarray:
    """Outer product of two 3-vectors as a bivector ``(..., 8)``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return bivector_arr(
        x[..., 0] * y[..., 1] - x[..., 1] * y[..., 0],
        x[..., 0] * y[..., 2] - x[..., 2] * y[..., 0],
        x[..., 1] * y[..., 2] - x[..., 2] * y[..., 1],
    )


def norm_sq_arr(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    return np.sum(a * a, axis=-1)


def exp_bivector_arr(b) -> np.ndarray:
    """``exp(B) = cos s + B sin(s)/s`` for bivectors with ``B^2 = -s^2``.

    Any array of grade-2 elements works; in R_3 every bivector squares to a
    non-positive scalar, so only the grade check can fail.
    """
    b = np.asarray(b, dtype=float)
    if np.any(np.abs(b[..., list(ODD_SLOTS) + [0]]) > EXP_SCALAR_TOL):
        raise ValueError("exp_bivector expects a pure bivector")
    s2 = np.sum(b * b, axis=-1)
    s = np.sqrt(s2)
    small = s < _SERIES_CUTOFF
    safe = np.where(small, 1.0, s)
    cos_s = np.where(small, 1.0 - s2 / 2.0, np.cos(safe))
    sinc = np.where(small, 1.0 - s2 / 6.0, np.sin(safe) / safe)
    out = b * sinc[..., None]
    out[..., 0] = cos_s
    return out


def rotor12(angle) -> np.ndarray:
    """``exp(e12 * angle) = cos(angle) + e12 sin(angle)``, vectorised."""
    angle = np.asarray(angle, dtype=float)
    out = np.zeros(angle.shape + (8,))
    out[..., 0] = np.cos(angle)
    out[..., 4] = np.sin(angle)
    return out


@dataclass(frozen=True, eq=False)
class Multivector3:
    """A single element of R_3.

    Supports ``+``, ``-``, the geometric product ``*`` (also with real
    scalars) and ``~`` for Hermitian conjugation.
    """

    coeffs: tuple

    def __init__(self, coeffs=None, **blades):
        if coeffs is None:
            coeffs = [float(blades.pop(name, 0.0)) for name in BLADES]
            if blades:
                raise TypeError(f"unknown blades: {sorted(blades)}")
        arr = np.asarray(coeffs, dtype=float).reshape(-1)
        if arr.shape != (8,):
            raise ValueError("a multivector has exactly 8 coefficients")
        object.__setattr__(self, "coeffs", tuple(float(c) for c in arr))

    @classmethod
    def scalar(cls, s: float) -> Multivector3:
        return cls(s=s)

    @classmethod
    def vector(cls, x) -> Multivector3:
        return cls(vector_arr(x))

    @classmethod
    def blade(cls, name: str) -> Multivector3:
        return cls(**{name: 1.0})

    def to_array(self) -> np.ndarray:
        return np.array(self.coeffs)

    def __getitem__(self, name: str) -> float:
        return self.coeffs[BLADES.index(name)]

    def __add__(self, other):
        if isinstance(other, Real):
            other = Multivector3.scalar(float(other))
        if not isinstance(other, Multivector3):
            return NotImplemented
        return Multivector3(self.to_array() + other.to_array())

    __radd__ = __add__

    def __neg__(self):
        return Multivector3(-self.to_array())

    def __sub__(self, other):
        if isinstance(other, Real):
            other = Multivector3.scalar(float(other))
        if not isinstance(other, Multivector3):
            return NotImplemented
        return Multivector3(self.to_array() - other.to_array())

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Real):
            return Multivector3(self.to_array() * float(other))
        if not isinstance(other, Multivector3):
            return NotImplemented
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, Real):
            return Multivector3(self.to_array() * float(other))
        return NotImplemented

    def __invert__(self):
        return conj(self)

    def __eq__(self, other):
        if not isinstance(other, Multivector3):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def isclose(self, other: Multivector3, atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.to_array(), other.to_array(), rtol=0.0, atol=atol))

    def norm(self) -> float:
        """``|a| = sqrt([conj(a) a]_0)``."""
        return math.sqrt(sum(c * c for c in self.coeffs))

    def is_even(self, atol: float = 0.0) -> bool:
        arr = self.to_array()
        return bool(np.all(np.abs(arr[list(ODD_SLOTS)]) <= atol))

    def to_dict(self) -> dict:
        return dict(zip(BLADES, self.coeffs))

    @classmethod
    def from_dict(cls, data: dict) -> Multivector3:
        return cls(**{k: float(v) for k, v in data.items()})

    def __repr__(self):
        terms = [f"{c:+.6g}{'' if n == 's' else n}" for n, c in zip(BLADES, self.coeffs) if c]
        return "Multivector3(" + (" ".join(terms) if terms else "0") + ")"


E1 = Multivector3.blade("e1")
E2 = Multivector3.blade("e2")
E3 = Multivector3.blade("e3")
E12 = Multivector3.blade("e12")
E13 = Multivector3.blade("e13")
E23 = Multivector3.blade("e23")
E123 = Multivector3.blade("e123")
ONE = Multivector3.scalar(1.0)


def mul(a: Multivector3, b: Multivector3) -> Multivector3:
    return Multivector3(gp(a.to_array(), b.to_array()))


def conj(a: Multivector3) -> Multivector3:
    return Multivector3(conj_arr(a.to_array()))


def grade(a: Multivector3, k: int) -> Multivector3:
    """The k-vector part ``[a]_k``."""
    return Multivector3(grade_arr(a.to_array(), k))


def exp_bivector(b: Multivector3) -> Multivector3:
    return Multivector3(exp_bivector_arr(b.to_array()))


@dataclass(frozen=True)
class EvenElement:
    """Element of the even subalgebra, coefficients on (1, e12, e13, e23)."""

    s: float = 0.0
    e12: float = 0.0
    e13: float = 0.0
    e23: float = 0.0

    @classmethod
    def from_multivector(cls, a: Multivector3, atol: float = 1e-12) -> EvenElement:
        if not a.is_even(atol):
            raise ValueError(f"{a!r} has an odd part")
        return cls(a["s"], a["e12"], a["e13"], a["e23"])

    @classmethod
    def from_array(cls, arr) -> EvenElement:
        return cls(*(float(v) for v in np.asarray(arr, dtype=float)))

    def to_array(self) -> np.ndarray:
        return np.array([self.s, self.e12, self.e13, self.e23])

    def to_multivector(self) -> Multivector3:
        return Multivector3(s=self.s, e12=self.e12, e13=self.e13, e23=self.e23)

    def __mul__(self, other: EvenElement) -> EvenElement:
        return EvenElement.from_multivector(self.to_multivector() * other.to_multivector())

    def __add__(self, other: EvenElement) -> EvenElement:
        return EvenElement.from_array(self.to_array() + other.to_array())

    def conj(self) -> EvenElement:
        return EvenElement(self.s, -self.e12, -self.e13, -self.e23)

    def to_dict(self) -> dict:
        return {"s": self.s, "e12": self.e12, "e13": self.e13, "e23": self.e23}

    @classmethod
    def from_dict(cls, data: dict) -> EvenElement:
        return cls(float(data["s"]), float(data["e12"]), float(data["e13"]), float(data["e23"]))


@dataclass(frozen=True)
class Quaternion:
    """Element of R_2 with basis (1, e1, e2, e12), i.e. i = e1, j = e2, k = e12."""

    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __mul__(self, o: Quaternion) -> Quaternion:
        return Quaternion(*_quat_mul(self.to_array(), o.to_array()))

    def __add__(self, o: Quaternion) -> Quaternion:
        return Quaternion(*(self.to_array() + o.to_array()))

    def conj(self) -> Quaternion:
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm(self) -> float:
        return float(np.linalg.norm(self.to_array()))

    def to_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])


def _quat_mul(p, q) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    pw, px, py, pz = np.moveaxis(p, -1, 0)
    qw, qx, qy, qz = np.moveaxis(q, -1, 0)
    return np.stack(
        [
            pw * qw - px * qx - py * qy - pz * qz,
            pw * qx + px * qw + py * qz - pz * qy,
            pw * qy - px * qz + py * qw + pz * qx,
            pw * qz + px * qy - py * qx + pz * qw,
        ],
        axis=-1,
    )


def tau_arr(even) -> np.ndarray:
    """Vectorised tau on arrays ``(..., 4)`` of (1, e12, e13, e23) coefficients."""
    even = np.asarray(even, dtype=float)
    s, b12, b13, b23 = np.moveaxis(even, -1, 0)
    return np.stack([s, -b23, b13, b12], axis=-1)


def tau_inv_arr(quat) -> np.ndarray:
    quat = np.asarray(quat, dtype=float)
    w, x, y, z = np.moveaxis(quat, -1, 0)
    return np.stack([w, z, y, -x], axis=-1)


def tau(a: EvenElement) -> Quaternion:
    """``x0 + x12 e12 + x13 e13 + x23 e23  ->  x0 + x12 e12 + x13 e2 - x23 e1``."""
    return Quaternion(*tau_arr(a.to_array()))


def tau_inv(q: Quaternion) -> EvenElement:
    return EvenElement.from_array(tau_inv_arr(q.to_array()))


def even_part_arr(a) -> np.ndarray:
    """Slice ``(..., 8)`` multivectors down to ``(..., 4)`` even coefficients."""
    return np.asarray(a, dtype=float)[..., list(EVEN_SLOTS)]


def from_even_arr(e) -> np.ndarray:
    e = np.asarray(e, dtype=float)
    out = np.zeros(e.shape[:-1] + (8,))
    out[..., list(EVEN_SLOTS)] = e
    return out
