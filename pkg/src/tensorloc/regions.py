"""Membership predicates for the Gersgorin-type and Brauer-type inclusion sets.

Every predicate accepts a scalar or an array of complex points and returns a
``bool`` or a boolean array of the same shape. Inclusion sets (``gamma``,
``k``) use non-strict comparisons widened by ``tol``; exclusion sets
(``delta``, ``lambda``) use strict comparisons narrowed by ``tol``, so a
positive tolerance can only make a point *more* likely to be kept.

Indices ``i``, ``j``, ``p`` are 1-based.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .tensor import RowSums, Tensor, UsageError, row_sums

__all__ = [
    "Family",
    "RegionQuery",
    "DiskParams",
    "Window",
    "gamma_i_contains",
    "delta_ij_contains",
    "delta_i_contains",
    "omega_i_contains",
    "k_ij_contains",
    "lambda_ip_contains",
    "lambda_i_contains",
    "theta_ij_contains",
    "gamma_contains",
    "omega_contains",
    "k_contains",
    "theta_contains",
    "region_contains",
    "gamma_disk",
    "delta_disk",
    "bounding_window",
    "default_window",
]


class Family(enum.Enum):
    GAMMA_I = "gamma_i"
    DELTA_IJ = "delta_ij"
    DELTA_I = "delta_i"
    OMEGA_I = "omega_i"
    OMEGA = "omega"
    GAMMA = "gamma"
    K_IJ = "k_ij"
    LAMBDA_IP = "lambda_ip"
    LAMBDA_I = "lambda_i"
    THETA_IJ = "theta_ij"
    THETA = "theta"
    K = "k"

    @property
    def arity(self) -> int:
        return _ARITY[self]

    @property
    def needs_pairs(self) -> bool:
        """Brauer-type families are only defined for ``n >= 2``."""
        return self in _BRAUER

    @classmethod
    def parse(cls, name) -> "Family":
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).lower())
        except ValueError:
            try:
                return cls[str(name).upper()]
            except KeyError:
                choices = ", ".join(f.value for f in cls)
                raise UsageError(f"unknown region {name!r}; choose from {choices}") from None


_ARITY = {
    Family.GAMMA_I: 1, Family.DELTA_IJ: 2, Family.DELTA_I: 1, Family.OMEGA_I: 1,
    Family.OMEGA: 0, Family.GAMMA: 0, Family.K_IJ: 2, Family.LAMBDA_IP: 2,
    Family.LAMBDA_I: 1, Family.THETA_IJ: 2, Family.THETA: 0, Family.K: 0,
}
_BRAUER = {Family.K_IJ, Family.LAMBDA_IP, Family.LAMBDA_I, Family.THETA_IJ, Family.THETA, Family.K}


@dataclass(frozen=True)
class RegionQuery:
    """A named region, its indices (1-based) and a boundary tolerance."""

    family: Family
    indices: tuple[int, ...] = ()
    tolerance: float = 0.0

    def __post_init__(self):
        family = Family.parse(self.family)
        object.__setattr__(self, "family", family)
        indices = tuple(self.indices)
        object.__setattr__(self, "indices", indices)
        if len(indices) != family.arity:
            raise UsageError(
                f"{family.value} takes {family.arity} indices, got {len(indices)}"
            )
        if family.arity == 2 and indices[0] == indices[1]:
            raise UsageError(f"{family.value} needs two distinct indices, got {indices}")
        if not self.tolerance >= 0:
            raise UsageError(f"tolerance must be >= 0, got {self.tolerance}")

    @property
    def name(self) -> str:
        if not self.indices:
            return self.family.value
        return self.family.value + "_" + "_".join(map(str, self.indices))


class DiskParams(NamedTuple):
    """Center and radius of a disk; a negative radius encodes the empty set."""

    center: complex
    radius: float


class Window(NamedTuple):
    re_min: float
    re_max: float
    im_min: float
    im_max: float


def _result(mask):
    return bool(mask) if np.ndim(mask) == 0 else mask


def _pair(S: RowSums, i, j, names=("i", "j")):
    a, b = S.check_index(i, names[0]), S.check_index(j, names[1])
    if a == b:
        raise UsageError(f"{names[0]} and {names[1]} must differ, got {i}")
    return a, b


def _require_pairs(S: RowSums):
    if S.n < 2:
        raise UsageError("Brauer-type regions need n >= 2")


# The *_terms helpers return (left side, right side) of each defining
# inequality. Certificates reuse them at z = 0 so verdicts and membership
# tests agree bit for bit.

def gamma_terms(S: RowSums, i0: int, z):
    return np.abs(z - S.diag[i0]), S.r[i0]


def delta_terms(S: RowSums, i0: int, j0: int, z):
    return np.abs(z - S.diag[j0]), 2 * S.special_col[j0, i0] - S.r[j0]


def k_terms(S: RowSums, i0: int, j0: int, z):
    lhs = (np.abs(z - S.diag[i0]) - S.r_partial[i0, j0]) * np.abs(z - S.diag[j0])
    return lhs, S.special_col[i0, j0] * S.r[j0]


def lambda_terms(S: RowSums, i0: int, p0: int, z):
    lhs = (np.abs(z - S.diag[i0]) + S.r_partial[i0, p0]) * np.abs(z - S.diag[p0])
    return lhs, S.special_col[i0, p0] * (2 * S.special_col[p0, i0] - S.r[p0])


def _gamma0(S, i0, z, tol):
    lhs, rhs = gamma_terms(S, i0, z)
    return lhs <= rhs + tol


def _delta0(S, i0, j0, z, tol):
    lhs, rhs = delta_terms(S, i0, j0, z)
    return lhs < rhs - tol


def _delta_union0(S, i0, z, tol):
    out = np.zeros(np.shape(z), dtype=bool)
    for j0 in range(S.n):
        if j0 != i0:
            out |= _delta0(S, i0, j0, z, tol)
    return out


def _k0(S, i0, j0, z, tol):
    lhs, rhs = k_terms(S, i0, j0, z)
    return lhs <= rhs + tol


def _lambda0(S, i0, p0, z, tol):
    lhs, rhs = lambda_terms(S, i0, p0, z)
    return lhs < rhs - tol


def _lambda_union0(S, i0, z, tol):
    out = np.zeros(np.shape(z), dtype=bool)
    for p0 in range(S.n):
        if p0 != i0:
            out |= _lambda0(S, i0, p0, z, tol)
    return out


def _omega0(S, i0, z, tol):
    return _gamma0(S, i0, z, tol) & ~_delta_union0(S, i0, z, tol)


def _theta0(S, i0, j0, z, tol):
    return _k0(S, i0, j0, z, tol) & ~_lambda_union0(S, i0, z, tol)


def gamma_i_contains(S: RowSums, i: int, z, tol: float = 0.0):
    """``|z - a_{i..i}| <= r_i + tol``."""
    return _result(_gamma0(S, S.check_index(i), np.asarray(z), tol))


def delta_ij_contains(S: RowSums, i: int, j: int, z, tol: float = 0.0):
    """Exclusion disk centred at ``a_{j..j}`` with radius ``2|a_{ji..i}| - r_j`` (open)."""
    i0, j0 = _pair(S, i, j)
    return _result(_delta0(S, i0, j0, np.asarray(z), tol))


def delta_i_contains(S: RowSums, i: int, z, tol: float = 0.0):
    return _result(_delta_union0(S, S.check_index(i), np.asarray(z), tol))


def omega_i_contains(S: RowSums, i: int, z, tol: float = 0.0):
    """Gersgorin disk ``i`` minus the union of the exclusion disks ``Delta_ij``.

    For ``n = 1`` the union is empty and this is the Gersgorin disk itself.
    """
    return _result(_omega0(S, S.check_index(i), np.asarray(z), tol))


def k_ij_contains(S: RowSums, i: int, j: int, z, tol: float = 0.0):
    """Brauer-type set: ``(|z-a_i| - r_i^j)|z-a_j| <= |a_{ij..j}| r_j + tol``.

    The left factor can be negative and is deliberately not clamped.
    """
    _require_pairs(S)
    i0, j0 = _pair(S, i, j)
    return _result(_k0(S, i0, j0, np.asarray(z), tol))


def lambda_ip_contains(S: RowSums, i: int, p: int, z, tol: float = 0.0):
    _require_pairs(S)
    i0, p0 = _pair(S, i, p, names=("i", "p"))
    return _result(_lambda0(S, i0, p0, np.asarray(z), tol))


def lambda_i_contains(S: RowSums, i: int, z, tol: float = 0.0):
    _require_pairs(S)
    return _result(_lambda_union0(S, S.check_index(i), np.asarray(z), tol))


def theta_ij_contains(S: RowSums, i: int, j: int, z, tol: float = 0.0):
    """``K_ij`` with every ``Lambda_ip`` (``p != i``) removed."""
    _require_pairs(S)
    i0, j0 = _pair(S, i, j)
    return _result(_theta0(S, i0, j0, np.asarray(z), tol))


def _union(S, z, tol, member, pairs):
    z = np.asarray(z)
    out = np.zeros(z.shape, dtype=bool)
    if pairs:
        _require_pairs(S)
        keys = [(a, b) for a in range(S.n) for b in range(S.n) if a != b]
    else:
        keys = [(a,) for a in range(S.n)]
    for key in keys:
        if z.ndim == 0 and out:
            break
        out |= member(S, *key, z, tol)
    return _result(out)


def gamma_contains(S: RowSums, z, tol: float = 0.0):
    return _union(S, z, tol, _gamma0, pairs=False)


def omega_contains(S: RowSums, z, tol: float = 0.0):
    return _union(S, z, tol, _omega0, pairs=False)


def k_contains(S: RowSums, z, tol: float = 0.0):
    return _union(S, z, tol, _k0, pairs=True)


def theta_contains(S: RowSums, z, tol: float = 0.0):
    return _union(S, z, tol, _theta0, pairs=True)


_DISPATCH = {
    Family.GAMMA_I: gamma_i_contains,
    Family.DELTA_IJ: delta_ij_contains,
    Family.DELTA_I: delta_i_contains,
    Family.OMEGA_I: omega_i_contains,
    Family.OMEGA: omega_contains,
    Family.GAMMA: gamma_contains,
    Family.K_IJ: k_ij_contains,
    Family.LAMBDA_IP: lambda_ip_contains,
    Family.LAMBDA_I: lambda_i_contains,
    Family.THETA_IJ: theta_ij_contains,
    Family.THETA: theta_contains,
    Family.K: k_contains,
}


def as_row_sums(A) -> RowSums:
    if isinstance(A, RowSums):
        return A
    if isinstance(A, Tensor):
        return row_sums(A)
    raise UsageError(f"expected Tensor or RowSums, got {type(A).__name__}")


def region_contains(A, q: RegionQuery, z):
    """Evaluate membership of ``z`` in the region described by ``q``."""
    S = as_row_sums(A)
    if q.family.needs_pairs:
        _require_pairs(S)
    return _DISPATCH[q.family](S, *q.indices, z, tol=q.tolerance)


def gamma_disk(S: RowSums, i: int) -> DiskParams:
    i0 = S.check_index(i)
    return DiskParams(complex(S.diag[i0]), float(S.r[i0]))


def delta_disk(S: RowSums, i: int, j: int) -> DiskParams:
    i0, j0 = _pair(S, i, j)
    _, radius = delta_terms(S, i0, j0, 0)
    return DiskParams(complex(S.diag[j0]), float(radius))


def bounding_window(S: RowSums, margin: float = 0.0) -> Window:
    """Smallest rectangle holding every Gersgorin disk, padded by ``margin``.

    All other regions are subsets of the Gersgorin set, so this window
    frames every one of them.
    """
    if not margin >= 0:
        raise UsageError(f"margin must be >= 0, got {margin}")
    re, im, r = S.diag.real, S.diag.imag, S.r
    return Window(
        float(np.min(re - r)) - margin,
        float(np.max(re + r)) + margin,
        float(np.min(im - r)) - margin,
        float(np.max(im + r)) + margin,
    )


def default_window(S: RowSums, fraction: float = 0.05) -> Window:
    """Bounding window padded by ``fraction`` of its larger side (1.0 if degenerate)."""
    w = bounding_window(S)
    extent = max(w.re_max - w.re_min, w.im_max - w.im_min)
    return bounding_window(S, fraction * extent if extent > 0 else 1.0)
