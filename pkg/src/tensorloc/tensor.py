"""Sparse complex tensors and the row-sum quantities every region is built from.

Indices are 1-based at the public surface (constructor keys, file format,
``i``/``j`` arguments). Arrays held on :class:`RowSums` are plain numpy
arrays and therefore 0-based.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

__all__ = [
    "UsageError",
    "TensorFormatError",
    "Tensor",
    "RowSums",
    "is_diagonal_index",
    "row_sums",
    "apply",
    "is_symmetric",
    "parse_tensor",
    "load_tensor",
    "format_tensor",
]


class UsageError(ValueError):
    """Raised for malformed arguments (bad index, wrong arity, size mismatch)."""


class TensorFormatError(ValueError):
    """Raised when a tensor text file cannot be parsed."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


def is_diagonal_index(idx: Sequence[int], order: int | None = None) -> bool:
    """Generalized Kronecker delta: True iff all components of ``idx`` coincide."""
    if order is not None and len(idx) != order:
        raise UsageError(f"index tuple {tuple(idx)} has {len(idx)} components, expected {order}")
    if len(idx) == 0:
        raise UsageError("empty index tuple")
    first = idx[0]
    return all(k == first for k in idx)


@dataclass(frozen=True, eq=False)
class Tensor:
    """Order-``m``, dimension-``n`` complex tensor in canonical sparse form.

    Parameters
    ----------
    order : int
        Number of indices ``m`` (at least 2).
    dim : int
        Index range ``n``; each index runs over ``1..n``.
    entries : mapping
        ``{(i1, ..., im): value}`` with 1-based indices. Missing tuples are
        zero; exact zeros are dropped.
    """

    order: int
    dim: int
    entries: Mapping[tuple[int, ...], complex] = field(default_factory=dict)

    def __post_init__(self):
        m, n = self.order, self.dim
        if not isinstance(m, (int, np.integer)) or m < 2:
            raise UsageError(f"order must be an integer >= 2, got {m!r}")
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise UsageError(f"dim must be an integer >= 1, got {n!r}")
        clean = {}
        for key, value in self.entries.items():
            idx = tuple(int(k) for k in key)
            if len(idx) != m:
                raise UsageError(f"index tuple {idx} has {len(idx)} components, expected {m}")
            if any(k < 1 or k > n for k in idx):
                raise UsageError(f"index tuple {idx} out of range 1..{n}")
            value = complex(value)
            if not cmath.isfinite(value):
                raise UsageError(f"non-finite entry at {idx}")
            if value != 0:
                clean[idx] = value
        object.__setattr__(self, "order", int(m))
        object.__setattr__(self, "dim", int(n))
        object.__setattr__(self, "entries", dict(sorted(clean.items())))
        # 0-based coordinate arrays for vectorized evaluation
        if clean:
            index = np.array(list(self.entries), dtype=np.intp) - 1
            values = np.array(list(self.entries.values()), dtype=complex)
        else:
            index = np.zeros((0, m), dtype=np.intp)
            values = np.zeros(0, dtype=complex)
        index.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_values", values)

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def __getitem__(self, idx) -> complex:
        return self.entries.get(tuple(idx), 0j)

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return (self.order, self.dim, self.entries) == (other.order, other.dim, other.entries)

    def __hash__(self):
        return hash((self.order, self.dim, tuple(self.entries.items())))

    def __repr__(self):
        return f"Tensor(order={self.order}, dim={self.dim}, nnz={self.nnz})"

    @classmethod
    def from_dense(cls, array) -> "Tensor":
        """Build from a dense array of shape ``(n,) * m``."""
        array = np.asarray(array, dtype=complex)
        if array.ndim < 2 or len(set(array.shape)) != 1:
            raise UsageError(f"dense tensor must have shape (n,)*m with m >= 2, got {array.shape}")
        nz = np.argwhere(array != 0)
        entries = {tuple(int(k) + 1 for k in idx): array[tuple(idx)] for idx in nz}
        return cls(array.ndim, array.shape[0], entries)

    @classmethod
    def diagonal(cls, order: int, values: Sequence[complex]) -> "Tensor":
        return cls(order, len(values), {(i + 1,) * order: v for i, v in enumerate(values)})

    @classmethod
    def identity(cls, order: int, dim: int) -> "Tensor":
        return cls.diagonal(order, [1.0] * dim)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.dim,) * self.order, dtype=complex)
        if self.nnz:
            out[tuple(self._index.T)] = self._values
        return out


@dataclass(frozen=True, eq=False)
class RowSums:
    """Diagonal entries, radii and coupling moduli of a tensor (0-based arrays).

    ``diag[i]`` is the diagonal entry of row ``i``, ``r[i]`` the sum of moduli
    of its off-diagonal entries, ``special_col[i, j]`` the modulus of the entry
    whose trailing indices all equal ``j`` and ``r_partial[i, j]`` is
    ``r[i] - special_col[i, j]``. Diagonals of the two tables are zero.
    """

    diag: np.ndarray
    r: np.ndarray
    r_partial: np.ndarray
    special_col: np.ndarray

    @property
    def n(self) -> int:
        return len(self.diag)

    def check_index(self, i: int, name: str = "i") -> int:
        """Validate a 1-based index and return it 0-based."""
        if isinstance(i, bool) or not isinstance(i, (int, np.integer)):
            raise UsageError(f"index {name}={i!r} is not an integer")
        if not 1 <= i <= self.n:
            raise UsageError(f"index {name}={i} out of range 1..{self.n}")
        return int(i) - 1


def row_sums(A: Tensor) -> RowSums:
    n = A.dim
    diag = np.zeros(n, dtype=complex)
    terms: list[list[float]] = [[] for _ in range(n)]
    special = np.zeros((n, n))
    # entries are stored lexicographically sorted, so the summation order is fixed
    for idx, value in A.entries.items():
        i = idx[0] - 1
        if is_diagonal_index(idx):
            diag[i] = value
            continue
        terms[i].append(abs(value))
        if is_diagonal_index(idx[1:]):
            special[i, idx[1] - 1] = abs(value)
    r = np.array([math.fsum(t) for t in terms], dtype=float)
    r_partial = r[:, None] - special
    np.fill_diagonal(r_partial, 0.0)
    for arr in (diag, r, r_partial, special):
        arr.flags.writeable = False
    return RowSums(diag=diag, r=r, r_partial=r_partial, special_col=special)


def _power_products(index: np.ndarray, X: np.ndarray, skip: int | None = None) -> np.ndarray:
    """Products of ``X`` over trailing index positions, one column per entry."""
    cols = [p for p in range(1, index.shape[1]) if p != skip]
    out = np.ones(X.shape[:-1] + (index.shape[0],), dtype=complex)
    for p in cols:
        out = out * X[..., index[:, p]]
    return out


def apply(A: Tensor, x) -> np.ndarray:
    """Evaluate ``A x^{m-1}``.

    ``x`` may be a single vector of length ``n`` or a stack of shape
    ``(..., n)``; the result has the same shape.
    """
    x = np.asarray(x, dtype=complex)
    if x.ndim == 0 or x.shape[-1] != A.dim:
        raise UsageError(f"vector length {x.shape[-1:] or 0} does not match dim {A.dim}")
    out = np.zeros(x.shape, dtype=complex)
    if A.nnz == 0:
        return out
    contrib = _power_products(A._index, x) * A._values
    onehot = np.zeros((A.nnz, A.dim))
    onehot[np.arange(A.nnz), A._index[:, 0]] = 1.0
    return contrib @ onehot


def jacobian(A: Tensor, x) -> np.ndarray:
    """Derivative of ``A x^{m-1}`` with respect to ``x``; shape ``(..., n, n)``."""
    x = np.asarray(x, dtype=complex)
    n = A.dim
    out = np.zeros(x.shape[:-1] + (n * n,), dtype=complex)
    rows = A._index[:, 0] * n
    for p in range(1, A.order):
        contrib = _power_products(A._index, x, skip=p) * A._values
        onehot = np.zeros((A.nnz, n * n))
        np.add.at(onehot, (np.arange(A.nnz), rows + A._index[:, p]), 1.0)
        out = out + contrib @ onehot
    return out.reshape(x.shape[:-1] + (n, n))


def is_symmetric(A: Tensor) -> bool:
    """True iff every entry is invariant under all permutations of its indices."""
    for idx, value in A.entries.items():
        for perm in set(itertools.permutations(idx)):
            if A.entries.get(perm, 0j) != value:
                return False
    return True


def parse_tensor(text: str) -> Tensor:
    """Parse the line-oriented tensor format.

    The first content line holds ``m n``; every further line holds ``m``
    1-based indices, a real part and an optional imaginary part. Blank lines
    and lines starting with ``#`` are ignored.
    """
    header = None
    entries: dict[tuple[int, ...], complex] = {}
    seen: dict[tuple[int, ...], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if header is None:
            if len(fields) != 2:
                raise TensorFormatError("header must be 'm n'", lineno)
            try:
                m, n = int(fields[0]), int(fields[1])
            except ValueError:
                raise TensorFormatError(f"header must hold two integers, got {line!r}", lineno) from None
            if m < 2 or n < 1:
                raise TensorFormatError(f"need m >= 2 and n >= 1, got m={m}, n={n}", lineno)
            header = (m, n)
            continue
        m, n = header
        if len(fields) not in (m + 1, m + 2):
            raise TensorFormatError(f"expected {m} indices and 1 or 2 numbers, got {len(fields)} fields", lineno)
        try:
            idx = tuple(int(f) for f in fields[:m])
        except ValueError:
            raise TensorFormatError(f"indices must be integers in {line!r}", lineno) from None
        if any(k < 1 or k > n for k in idx):
            raise TensorFormatError(f"index {idx} out of range 1..{n}", lineno)
        try:
            re_part = float(fields[m])
            im_part = float(fields[m + 1]) if len(fields) == m + 2 else 0.0
        except ValueError:
            raise TensorFormatError(f"bad numeric value in {line!r}", lineno) from None
        if not (math.isfinite(re_part) and math.isfinite(im_part)):
            raise TensorFormatError("non-finite entry", lineno)
        if idx in seen:
            raise TensorFormatError(f"duplicate index {idx} (first given on line {seen[idx]})", lineno)
        seen[idx] = lineno
        entries[idx] = complex(re_part, im_part)
    if header is None:
        raise TensorFormatError("missing 'm n' header")
    return Tensor(header[0], header[1], entries)


def load_tensor(path) -> Tensor:
    with open(path, encoding="utf-8") as fh:
        return parse_tensor(fh.read())


def format_tensor(A: Tensor) -> str:
    """Serialize to the text format; ``parse_tensor`` inverts it exactly."""
    lines = [f"{A.order} {A.dim}"]
    for idx, value in A.entries.items():
        nums = repr(value.real) if value.imag == 0 else f"{value.real!r} {value.imag!r}"
        lines.append(" ".join(map(str, idx)) + " " + nums)
    return "\n".join(lines) + "\n"

