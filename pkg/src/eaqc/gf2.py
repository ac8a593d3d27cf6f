"""Binary-field linear algebra on bit-packed matrices, plus circulant expansion.

Matrices over GF(2) are stored as dense bit-packed rows (uint64 words,
little-endian bit order within each word).  All arithmetic is mod 2:
addition is XOR, products reduce each dot product to its parity.

A :class:`ModelMatrix` is the compressed form of a quasi-cyclic
parity-check matrix: a grid of shift exponents over Z_n.  ``expand``
replaces each exponent ``e`` by the right-circulant permutation power
``P^e``, where ``P^a[u, v] = 1`` iff ``v = u + a (mod n)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "BinaryMatrix",
    "ModelMatrix",
    "RowBasis",
    "expand",
    "gfrank",
    "matmul",
    "nullspace",
    "rowspace_member",
]

_WORD = 64


class DimensionMismatch(ValueError):
    """Shapes are incompatible for the requested operation."""


def _n_words(cols: int) -> int:
    return max(1, (cols + _WORD - 1) // _WORD)


@dataclass(frozen=True)
class BinaryMatrix:
    """Dense GF(2) matrix with bit-packed rows.

    Fields:
        rows, cols: logical shape.
        words: uint64 array of shape (rows, ceil(cols/64)); bit j of row i
            lives at words[i, j // 64] >> (j % 64).  Bits at or beyond
            `cols` are always zero.
    """

    rows: int
    cols: int
    words: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimensions")
        expected = (max(self.rows, 0), _n_words(self.cols))
        if self.words.shape != expected or self.words.dtype != np.uint64:
            raise ValueError(f"storage shape {self.words.shape} != {expected}")
        self.words.flags.writeable = False

    # ── constructors ──────────────────────────────────────────────────

    @staticmethod
    def from_dense(arr) -> "BinaryMatrix":
        a = np.asarray(arr, dtype=np.uint8) & 1
        if a.ndim != 2:
            raise ValueError("expected a 2-D array")
        rows, cols = a.shape
        nw = _n_words(cols)
        padded = np.zeros((rows, nw * 8), dtype=np.uint8)
        if cols:
            packed = np.packbits(a, axis=1, bitorder="little")
            padded[:, : packed.shape[1]] = packed
        words = np.ascontiguousarray(padded).view(np.uint64)
        return BinaryMatrix(rows, cols, words)

    @staticmethod
    def zeros(rows: int, cols: int) -> "BinaryMatrix":
        return BinaryMatrix(rows, cols, np.zeros((rows, _n_words(cols)), dtype=np.uint64))

    @staticmethod
    def identity(n: int) -> "BinaryMatrix":
        return BinaryMatrix.from_dense(np.eye(n, dtype=np.uint8))

    @staticmethod
    def ones(rows: int, cols: int) -> "BinaryMatrix":
        return BinaryMatrix.from_dense(np.ones((rows, cols), dtype=np.uint8))

    # ── views ─────────────────────────────────────────────────────────

    def to_dense(self) -> np.ndarray:
        if self.rows == 0 or self.cols == 0:
            return np.zeros((self.rows, self.cols), dtype=np.uint8)
        bytes_view = self.words.view(np.uint8).reshape(self.rows, -1)
        bits = np.unpackbits(bytes_view, axis=1, bitorder="little")
        return bits[:, : self.cols].copy()

    def row(self, i: int) -> np.ndarray:
        return self.to_dense()[i]

    def column_bit(self, c: int) -> np.ndarray:
        """The c-th column as a uint64 0/1 vector (cheap, no unpacking)."""
        if not 0 <= c < self.cols:
            raise IndexError(c)
        return (self.words[:, c >> 6] >> np.uint64(c & 63)) & np.uint64(1)

    # ── algebra ───────────────────────────────────────────────────────

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and np.array_equal(self.words, other.words)
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.words.tobytes()))

    def __add__(self, other: "BinaryMatrix") -> "BinaryMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        return BinaryMatrix(self.rows, self.cols, self.words ^ other.words)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def transpose(self) -> "BinaryMatrix":
        return BinaryMatrix.from_dense(self.to_dense().T)

    def submatrix(self, row_idx) -> "BinaryMatrix":
        idx = np.asarray(row_idx, dtype=np.intp)
        return BinaryMatrix(len(idx), self.cols, self.words[idx].copy())

    def hstack(self, other: "BinaryMatrix") -> "BinaryMatrix":
        if self.rows != other.rows:
            raise DimensionMismatch(f"{self.shape} | {other.shape}")
        d = np.concatenate([self.to_dense(), other.to_dense()], axis=1)
        return BinaryMatrix.from_dense(d)

    def vstack(self, other: "BinaryMatrix") -> "BinaryMatrix":
        if self.cols != other.cols:
            raise DimensionMismatch(f"{self.shape} / {other.shape}")
        return BinaryMatrix(
            self.rows + other.rows, self.cols, np.vstack([self.words, other.words])
        )

    def is_zero(self) -> bool:
        return not self.words.any()


@dataclass(frozen=True)
class ModelMatrix:
    """Exponent grid over Z_order; the compressed quasi-cyclic form."""

    order: int
    exponents: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "exponents", np.ascontiguousarray(self.exponents, dtype=np.int64)
        )
        if self.order < 1:
            raise ValueError(f"circulant order must be positive, got {self.order}")
        e = self.exponents
        if e.ndim != 2:
            raise ValueError("exponent grid must be 2-D")
        if e.size and (e.min() < 0 or e.max() >= self.order):
            raise ValueError(f"exponents must lie in [0, {self.order})")
        self.exponents.flags.writeable = False

    @property
    def block_rows(self) -> int:
        return self.exponents.shape[0]

    @property
    def block_cols(self) -> int:
        return self.exponents.shape[1]

    def row_submodel(self, row_idx) -> "ModelMatrix":
        idx = np.asarray(row_idx, dtype=np.intp)
        return ModelMatrix(self.order, self.exponents[idx].copy())

    def vstack(self, other: "ModelMatrix") -> "ModelMatrix":
        if self.order != other.order:
            raise DimensionMismatch("circulant orders differ")
        return ModelMatrix(self.order, np.vstack([self.exponents, other.exponents]))

    def to_json_dict(self) -> dict:
        return {"order": int(self.order), "exponents": self.exponents.tolist()}

    @staticmethod
    def from_json_dict(d: dict) -> "ModelMatrix":
        return ModelMatrix(int(d["order"]), np.asarray(d["exponents"], dtype=np.int64))


# ── operations ────────────────────────────────────────────────────────


def expand(m: ModelMatrix) -> BinaryMatrix:
    """Blow each exponent up into a right-circulant permutation block."""
    n = m.order
    br, bc = m.exponents.shape
    dense = np.zeros((br * n, bc * n), dtype=np.uint8)
    u = np.arange(n)
    for i in range(br):
        for j in range(bc):
            dense[i * n + u, j * n + (u + m.exponents[i, j]) % n] = 1
    return BinaryMatrix.from_dense(dense)


def gfrank(a: BinaryMatrix) -> int:
    """Row-space dimension over GF(2) by packed Gaussian elimination."""
    if a.rows == 0 or a.cols == 0:
        return 0
    w = a.words.copy()
    r = 0
    for c in range(a.cols):
        col = (w[r:, c >> 6] >> np.uint64(c & 63)) & np.uint64(1)
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            w[[r, piv]] = w[[piv, r]]
        below = r + nz[1:]
        if below.size:
            w[below] ^= w[r]
        r += 1
        if r == a.rows:
            break
    return r


def matmul(a: BinaryMatrix, b: BinaryMatrix) -> BinaryMatrix:
    """Product over GF(2): popcount-parity of ANDed packed rows."""
    if a.cols != b.rows:
        raise DimensionMismatch(f"{a.shape} @ {b.shape}")
    bt = b.transpose()
    out = np.zeros((a.rows, b.cols), dtype=np.uint8)
    # chunk rows of `a` so the (chunk × b.cols × words) intermediate stays small
    chunk = max(1, (1 << 22) // max(1, b.cols * bt.words.shape[1]))
    for lo in range(0, a.rows, chunk):
        hi = min(a.rows, lo + chunk)
        anded = a.words[lo:hi, None, :] & bt.words[None, :, :]
        out[lo:hi] = np.bitwise_count(anded).sum(axis=2, dtype=np.uint64) & 1
    return BinaryMatrix.from_dense(out)


@dataclass
class RowBasis:
    """Reduced row-echelon form of a matrix, prepared for repeated queries.

    Supports batched membership tests and expressing a member as an exact
    GF(2) combination of the *original* rows (via the recorded transform).
    """

    source_rows: int
    cols: int
    rref_words: np.ndarray
    pivot_cols: np.ndarray
    transform: np.ndarray  # combination of source rows giving each rref row

    @staticmethod
    def build(a: BinaryMatrix) -> "RowBasis":
        w = a.words.copy()
        t = BinaryMatrix.identity(max(a.rows, 1)).words[: a.rows].copy()
        pivots = []
        r = 0
        for c in range(a.cols):
            col = (w[r:, c >> 6] >> np.uint64(c & 63)) & np.uint64(1)
            nz = np.nonzero(col)[0]
            if nz.size == 0:
                continue
            piv = r + nz[0]
            if piv != r:
                w[[r, piv]] = w[[piv, r]]
                t[[r, piv]] = t[[piv, r]]
            col_all = (w[:, c >> 6] >> np.uint64(c & 63)) & np.uint64(1)
            col_all[r] = 0
            others = np.nonzero(col_all)[0]
            if others.size:
                w[others] ^= w[r]
                t[others] ^= t[r]
            pivots.append(c)
            r += 1
            if r == a.rows:
                break
        return RowBasis(
            source_rows=a.rows,
            cols=a.cols,
            rref_words=w[:r].copy(),
            pivot_cols=np.asarray(pivots, dtype=np.int64),
            transform=t[:r].copy(),
        )

    @property
    def rank(self) -> int:
        return len(self.pivot_cols)

    def _reduce(self, vec_words: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Eliminate pivots from a batch of packed vectors.

        Returns (residual words, rref-coefficient bits) with shapes
        (batch, n_words) and (batch, rank).
        """
        res = vec_words.copy()
        coeff = np.zeros((res.shape[0], self.rank), dtype=np.uint8)
        for k, c in enumerate(self.pivot_cols):
            bit = (res[:, c >> 6] >> np.uint64(c & 63)) & np.uint64(1)
            hit = np.nonzero(bit)[0]
            if hit.size:
                res[hit] ^= self.rref_words[k]
                coeff[hit, k] = 1
        return res, coeff

    def contains_batch(self, vectors: BinaryMatrix) -> np.ndarray:
        if vectors.cols != self.cols:
            raise DimensionMismatch(f"vector length {vectors.cols} != {self.cols}")
        res, _ = self._reduce(vectors.words)
        return ~res.any(axis=1)

    def contains(self, v) -> bool:
        vm = v if isinstance(v, BinaryMatrix) else BinaryMatrix.from_dense(
            np.atleast_2d(np.asarray(v, dtype=np.uint8))
        )
        return bool(self.contains_batch(vm)[0])

    def coefficients(self, v) -> np.ndarray:
        """Express v as a combination of the original rows; raises if outside."""
        vm = v if isinstance(v, BinaryMatrix) else BinaryMatrix.from_dense(
            np.atleast_2d(np.asarray(v, dtype=np.uint8))
        )
        res, coeff = self._reduce(vm.words)
        if res.any():
            raise ValueError("vector is not in the row space")
        # coeff selects rref rows; map through the recorded transform
        out = np.zeros((vm.rows, self.source_rows), dtype=np.uint8)
        for k in range(self.rank):
            hit = np.nonzero(coeff[:, k])[0]
            if hit.size:
                trow = np.unpackbits(
                    self.transform[k].view(np.uint8), bitorder="little"
                )[: self.source_rows]
                out[hit] ^= trow
        return out[0] if vm.rows == 1 else out


def rowspace_member(basis: BinaryMatrix, v) -> bool:
    """True iff v is a GF(2) combination of the rows of `basis`."""
    arr = np.atleast_2d(np.asarray(v, dtype=np.uint8))
    if arr.shape[1] != basis.cols:
        raise DimensionMismatch(f"vector length {arr.shape[1]} != {basis.cols}")
    return RowBasis.build(basis).contains(arr)


def nullspace(a: BinaryMatrix) -> BinaryMatrix:
    """Independent rows spanning {v : a·v = 0}, one per free column."""
    basis = RowBasis.build(a)
    rref = np.zeros((basis.rank, a.cols), dtype=np.uint8)
    for t in range(basis.rank):
        rref[t] = np.unpackbits(
            basis.rref_words[t].view(np.uint8), bitorder="little"
        )[: a.cols]
    pivots = basis.pivot_cols.tolist()
    free = [c for c in range(a.cols) if c not in set(pivots)]
    out = np.zeros((len(free), a.cols), dtype=np.uint8)
    for i, f in enumerate(free):
        out[i, f] = 1
        for t, pc in enumerate(pivots):
            out[i, pc] = rref[t, f]
    return BinaryMatrix.from_dense(out)
