"""Exact dense linear algebra over the prime field F_p.

Matrices are immutable and act on column vectors.  Vectors are plain tuples
of residues.  For p = 2 the elimination and multiplication kernels run on
rows packed into Python ints (bit ``c`` holds column ``c``); every other
prime goes through the generic list path.  Both paths produce identical
canonical results.
"""

from __future__ import annotations

import sys
from array import array
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .errors import (
    AmbientMismatch,
    NotContained,
    NotPrime,
    NotSquare,
    ShapeMismatch,
)

MAX_PRIME = 1 << 16

Vector = tuple[int, ...]


@lru_cache(maxsize=None)
def check_prime(p: int) -> int:
    if not isinstance(p, int) or isinstance(p, bool):
        raise NotPrime(f"characteristic must be an integer, got {p!r}")
    if p < 2 or p >= MAX_PRIME:
        raise NotPrime(f"characteristic {p} outside [2, {MAX_PRIME})")
    d = 2
    while d * d <= p:
        if p % d == 0:
            raise NotPrime(f"{p} is not prime (divisible by {d})")
        d += 1
    return p


@lru_cache(maxsize=None)
def inverse_table(p: int) -> tuple[int, ...]:
    check_prime(p)
    return (0,) + tuple(pow(a, -1, p) for a in range(1, p))


_FIELD_CODES = {2: "H", 4: "I", 8: "Q"}


def _field_bytes(p: int, inner: int) -> int:
    """Bytes per packed field so a length-``inner`` dot product cannot overflow it."""
    bound = max(inner, 1) * (p - 1) ** 2
    for nbytes in (2, 4, 8):
        if bound < 1 << (8 * nbytes):
            return nbytes
    raise ShapeMismatch(f"inner dimension {inner} too large for packed products mod {p}")


def _pack(row: Sequence[int]) -> int:
    bits = 0
    for c, x in enumerate(row):
        if x:
            bits |= 1 << c
    return bits


@lru_cache(maxsize=1 << 16)
def _unpack(bits: int, ncols: int) -> Vector:
    return tuple((bits >> c) & 1 for c in range(ncols))


@dataclass(frozen=True)
class FpMatrix:
    """An ``nrows x ncols`` matrix over F_p stored as a tuple of row tuples."""

    p: int
    nrows: int
    ncols: int
    data: tuple[Vector, ...]

    def __post_init__(self):
        check_prime(self.p)
        if self.nrows < 0 or self.ncols < 0:
            raise ShapeMismatch("negative matrix dimension")
        if len(self.data) != self.nrows or any(len(r) != self.ncols for r in self.data):
            raise ShapeMismatch(
                f"entries do not match declared shape {self.nrows}x{self.ncols}"
            )
        for r in self.data:
            for x in r:
                if not 0 <= x < self.p:
                    raise ShapeMismatch(f"entry {x} is not a residue mod {self.p}")

    # -- construction -------------------------------------------------

    @classmethod
    def _raw(cls, p: int, nrows: int, ncols: int, data: tuple[Vector, ...]) -> FpMatrix:
        # trusted path: data already reduced and correctly shaped
        self = object.__new__(cls)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "nrows", nrows)
        object.__setattr__(self, "ncols", ncols)
        object.__setattr__(self, "data", data)
        return self

    @classmethod
    def _from_bits(cls, nrows: int, ncols: int, bits: Sequence[int]) -> FpMatrix:
        M = cls._raw(2, nrows, ncols, tuple(_unpack(b, ncols) for b in bits))
        M.__dict__["bits"] = tuple(bits)
        return M

    @classmethod
    def from_rows(cls, p: int, rows: Iterable[Iterable[int]], ncols: int | None = None) -> FpMatrix:
        """Build a matrix from integer rows, reducing every entry mod p."""
        check_prime(p)
        data = tuple(tuple(int(x) % p for x in r) for r in rows)
        if ncols is None:
            if not data:
                raise ShapeMismatch("cannot infer column count of an empty row list")
            ncols = len(data[0])
        if any(len(r) != ncols for r in data):
            raise ShapeMismatch("ragged rows")
        return cls._raw(p, len(data), ncols, data)

    @classmethod
    def zeros(cls, p: int, nrows: int, ncols: int) -> FpMatrix:
        check_prime(p)
        return cls._raw(p, nrows, ncols, tuple((0,) * ncols for _ in range(nrows)))

    @classmethod
    def identity(cls, p: int, d: int) -> FpMatrix:
        return _identity(p, d)

    # -- basic properties ---------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    @cached_property
    def bits(self) -> tuple[int, ...]:
        if self.p != 2:
            raise TypeError("bit-packed rows exist only for p = 2")
        return tuple(_pack(r) for r in self.data)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.data)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.data[i][j]

    def row(self, i: int) -> Vector:
        return self.data[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.data)

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.data]

    def __repr__(self) -> str:
        return f"FpMatrix(p={self.p}, {self.nrows}x{self.ncols}, {[list(r) for r in self.data]})"

    # -- arithmetic ---------------------------------------------------

    def _same_field(self, other: FpMatrix) -> None:
        if self.p != other.p:
            raise ShapeMismatch(f"characteristics differ: {self.p} vs {other.p}")

    def __add__(self, other: FpMatrix) -> FpMatrix:
        self._same_field(other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"cannot add {self.shape} and {other.shape}")
        p = self.p
        return FpMatrix._raw(
            p,
            self.nrows,
            self.ncols,
            tuple(
                tuple((x + y) % p for x, y in zip(a, b))
                for a, b in zip(self.data, other.data)
            ),
        )

    def __neg__(self) -> FpMatrix:
        p = self.p
        return FpMatrix._raw(
            p, self.nrows, self.ncols, tuple(tuple(-x % p for x in r) for r in self.data)
        )

    def __sub__(self, other: FpMatrix) -> FpMatrix:
        return self + (-other)

    def scale(self, c: int) -> FpMatrix:
        p = self.p
        c %= p
        return FpMatrix._raw(
            p, self.nrows, self.ncols, tuple(tuple(c * x % p for x in r) for r in self.data)
        )

    def transpose(self) -> FpMatrix:
        return FpMatrix._raw(
            self.p, self.ncols, self.nrows, tuple(zip(*self.data)) if self.nrows else
            tuple(() for _ in range(self.ncols))
        )

    @property
    def T(self) -> FpMatrix:
        return self.transpose()

    def __matmul__(self, other: FpMatrix) -> FpMatrix:
        self._same_field(other)
        if self.ncols != other.nrows:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        if self.p == 2:
            b_rows = other.bits
            out = []
            for a in self.data:
                acc = 0
                for k, x in enumerate(a):
                    if x:
                        acc ^= b_rows[k]
                out.append(acc)
            return FpMatrix._from_bits(self.nrows, other.ncols, out)
        p = self.p
        m = other.ncols
        nbytes = _field_bytes(p, self.ncols)
        packed = other._packed(nbytes)
        code = _FIELD_CODES[nbytes]
        out = []
        for a in self.data:
            acc = 0
            for x, b in zip(a, packed):
                if x:
                    acc += x * b
            fields = memoryview(acc.to_bytes(nbytes * m, sys.byteorder)).cast(code)
            out.append(tuple([f % p for f in fields]))
        return FpMatrix._raw(p, self.nrows, m, tuple(out))

    def _packed(self, nbytes: int) -> list[int]:
        # rows as ints with one native-order field of `nbytes` bytes per column
        cache = self.__dict__.setdefault("_packcache", {})
        rows = cache.get(nbytes)
        if rows is None:
            code = _FIELD_CODES[nbytes]
            rows = [int.from_bytes(array(code, r).tobytes(), sys.byteorder) for r in self.data]
            cache[nbytes] = rows
        return rows

    def apply(self, v: Sequence[int]) -> Vector:
        """Matrix times column vector."""
        if len(v) != self.ncols:
            raise ShapeMismatch(f"vector of length {len(v)} for {self.shape} matrix")
        p = self.p
        return tuple(sum(x * y for x, y in zip(r, v)) % p for r in self.data)

    def rank(self) -> int:
        return rref(self)[2]


def matrix_sum(p: int, mats: Sequence[FpMatrix]) -> FpMatrix:
    """Entrywise sum of equally shaped matrices."""
    if not mats:
        raise ShapeMismatch("empty matrix sum")
    shape = mats[0].shape
    if any(M.shape != shape or M.p != p for M in mats):
        raise ShapeMismatch("matrix sum over differing shapes or fields")
    data = tuple(
        tuple(sum(col) % p for col in zip(*rows)) if shape[1] else ()
        for rows in zip(*(M.data for M in mats))
    )
    return FpMatrix._raw(p, shape[0], shape[1], data)


@lru_cache(maxsize=256)
def _identity(p: int, d: int) -> FpMatrix:
    check_prime(p)
    return FpMatrix._raw(p, d, d, tuple(tuple(int(i == j) for j in range(d)) for i in range(d)))


def block_diag(p: int, blocks: Sequence[FpMatrix]) -> FpMatrix:
    """Block-diagonal matrix with the given square or rectangular blocks."""
    check_prime(p)
    nrows = sum(b.nrows for b in blocks)
    ncols = sum(b.ncols for b in blocks)
    rows = []
    offset = 0
    for b in blocks:
        if b.p != p:
            raise ShapeMismatch(f"block over F_{b.p} in a matrix over F_{p}")
        left = (0,) * offset
        right = (0,) * (ncols - offset - b.ncols)
        rows.extend(left + r + right for r in b.data)
        offset += b.ncols
    return FpMatrix._raw(p, nrows, ncols, tuple(rows))


# -- elimination ------------------------------------------------------


def _rref_generic(rows: list[list[int]], ncols: int, p: int):
    inv = inverse_table(p)
    pivots: list[int] = []
    r = 0
    m = len(rows)
    for c in range(ncols):
        if r == m:
            break
        piv = next((i for i in range(r, m) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        lead = rows[r][c]
        if lead != 1:
            a = inv[lead]
            rows[r] = [x * a % p for x in rows[r]]
        prow = rows[r]
        for i in range(m):
            f = rows[i][c]
            if i != r and f:
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def _rref_bits(rows: list[int], ncols: int):
    pivots: list[int] = []
    r = 0
    m = len(rows)
    for c in range(ncols):
        if r == m:
            break
        bit = 1 << c
        piv = next((i for i in range(r, m) if rows[i] & bit), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        for i in range(m):
            if i != r and rows[i] & bit:
                rows[i] ^= prow
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def rref(M: FpMatrix) -> tuple[FpMatrix, tuple[int, ...], int]:
    """Reduced row echelon form, pivot columns and rank.

    Zero rows are dropped, so the returned matrix has exactly ``rank`` rows.
    """
    if M.p == 2:
        rows, pivots = _rref_bits(list(M.bits), M.ncols)
        R = FpMatrix._from_bits(len(rows), M.ncols, rows)
    else:
        rows, pivots = _rref_generic([list(r) for r in M.data], M.ncols, M.p)
        R = FpMatrix._raw(M.p, len(rows), M.ncols, tuple(tuple(r) for r in rows))
    return R, tuple(pivots), len(pivots)


def rank(M: FpMatrix) -> int:
    return rref(M)[2]


def solve(M: FpMatrix, b: Sequence[int]) -> Vector | None:
    """Least-pivot solution of ``M y = b``: free variables set to zero.

    Returns None when the system is inconsistent.
    """
    if len(b) != M.nrows:
        raise ShapeMismatch(f"right-hand side of length {len(b)} for {M.shape} matrix")
    p = M.p
    aug = FpMatrix._raw(
        p, M.nrows, M.ncols + 1, tuple(r + (x % p,) for r, x in zip(M.data, b))
    )
    R, pivots, _ = rref(aug)
    if pivots and pivots[-1] == M.ncols:
        return None
    y = [0] * M.ncols
    for i, c in enumerate(pivots):
        y[c] = R.data[i][M.ncols]
    return tuple(y)


def mat_pow(M: FpMatrix, e: int) -> FpMatrix:
    """``M**e`` by repeated squaring; ``M**0`` is the identity."""
    if not M.is_square:
        raise NotSquare(f"cannot raise a {M.nrows}x{M.ncols} matrix to a power")
    if e < 0:
        raise ValueError("negative exponent")
    result = FpMatrix.identity(M.p, M.nrows)
    base = M
    while e:
        if e & 1:
            result = result @ base
        e >>= 1
        if e:
            base = base @ base
    return result


# -- subspaces --------------------------------------------------------


@dataclass(frozen=True)
class Subspace:
    """A subspace of F_p^ambient_dim held by its canonical RREF basis.

    Two Subspace objects are equal exactly when they are the same subspace.
    """

    p: int
    ambient_dim: int
    basis: FpMatrix

    @classmethod
    def span(cls, p: int, ambient_dim: int, vectors: Iterable[Sequence[int]]) -> Subspace:
        M = FpMatrix.from_rows(p, vectors, ncols=ambient_dim)
        return cls._from_rref(rref(M)[0], ambient_dim)

    def __post_init__(self):
        if self.basis.p != self.p or self.basis.ncols != self.ambient_dim:
            raise AmbientMismatch("basis does not live in the declared ambient space")
        if rref(self.basis)[0] != self.basis:
            raise ShapeMismatch("subspace basis must be in reduced row echelon form")

    @classmethod
    def _from_rref(cls, R: FpMatrix, ambient_dim: int) -> Subspace:
        self = object.__new__(cls)
        object.__setattr__(self, "p", R.p)
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "basis", R)
        return self

    @classmethod
    def zero(cls, p: int, ambient_dim: int) -> Subspace:
        return cls._from_rref(FpMatrix.zeros(p, 0, ambient_dim), ambient_dim)

    @classmethod
    def full(cls, p: int, ambient_dim: int) -> Subspace:
        return cls._from_rref(FpMatrix.identity(p, ambient_dim), ambient_dim)

    @property
    def dim(self) -> int:
        return self.basis.nrows

    @property
    def vectors(self) -> tuple[Vector, ...]:
        return self.basis.data

    @cached_property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(c for c, x in enumerate(r) if x) for r in self.basis.data)

    def _check(self, other: Subspace) -> None:
        if self.p != other.p or self.ambient_dim != other.ambient_dim:
            raise AmbientMismatch(
                f"F_{self.p}^{self.ambient_dim} vs F_{other.p}^{other.ambient_dim}"
            )

    def reduce(self, v: Sequence[int]) -> Vector:
        """Remainder of ``v`` after elimination against the basis."""
        if len(v) != self.ambient_dim:
            raise AmbientMismatch(f"vector of length {len(v)} in F_p^{self.ambient_dim}")
        p = self.p
        w = [x % p for x in v]
        for row, c in zip(self.basis.data, self.pivots):
            f = w[c]
            if f:
                w = [(x - f * y) % p for x, y in zip(w, row)]
        return tuple(w)

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def issubspace(self, other: Subspace) -> bool:
        self._check(other)
        return all(other.contains(v) for v in self.vectors)

    def __le__(self, other: Subspace) -> bool:
        return self.issubspace(other)

    def __add__(self, other: Subspace) -> Subspace:
        self._check(other)
        return Subspace.span(self.p, self.ambient_dim, self.vectors + other.vectors)

    def image(self, M: FpMatrix) -> Subspace:
        """The image of this subspace under the linear map ``M``."""
        if M.ncols != self.ambient_dim or M.p != self.p:
            raise AmbientMismatch(f"{M.shape} matrix applied to F_p^{self.ambient_dim}")
        return Subspace.span(self.p, M.nrows, [M.apply(v) for v in self.vectors])

    def __repr__(self) -> str:
        return f"Subspace(p={self.p}, ambient={self.ambient_dim}, basis={[list(r) for r in self.vectors]})"


def kernel_basis(M: FpMatrix) -> Subspace:
    """The null space ``{v : M v = 0}`` in canonical form."""
    R, pivots, _ = rref(M)
    p = M.p
    pivot_set = set(pivots)
    vecs = []
    for f in range(M.ncols):
        if f in pivot_set:
            continue
        v = [0] * M.ncols
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = -R.data[i][f] % p
        vecs.append(v)
    return Subspace.span(p, M.ncols, vecs)


def image_basis(M: FpMatrix) -> Subspace:
    """The column space of ``M`` in canonical form."""
    return Subspace._from_rref(rref(M.transpose())[0], M.nrows)


def intersect(U: Subspace, W: Subspace) -> Subspace:
    U._check(W)
    if U.dim == 0 or W.dim == 0:
        return Subspace.zero(U.p, U.ambient_dim)
    p = U.p
    # columns are u_1..u_a, -w_1..-w_b; a kernel vector (x, y) gives sum x_i u_i in both
    stacked = FpMatrix._raw(
        p,
        U.dim + W.dim,
        U.ambient_dim,
        U.vectors + tuple(tuple(-x % p for x in w) for w in W.vectors),
    )
    K = kernel_basis(stacked.transpose())
    a = U.dim
    vecs = []
    for coeffs in K.vectors:
        v = [0] * U.ambient_dim
        for x, u in zip(coeffs[:a], U.vectors):
            if x:
                v = [(s + x * t) % p for s, t in zip(v, u)]
        vecs.append(v)
    return Subspace.span(p, U.ambient_dim, vecs)


def complement(W: Subspace, U: Subspace) -> Subspace:
    """A complement ``C`` of ``W`` inside ``U``, so that ``C + W = U`` directly.

    The rule is deterministic: walk U's RREF basis in order and keep each
    vector that is not already in the span of W plus the vectors kept so far.
    """
    W._check(U)
    if not W.issubspace(U):
        raise NotContained("first subspace is not contained in the second")
    p = U.p
    inv = inverse_table(p)
    # echelon rows with their pivot column, kept reduced against each other
    echelon: list[tuple[list[int], int]] = [(list(r), c) for r, c in zip(W.vectors, W.pivots)]
    kept = []
    for u in U.vectors:
        w = list(u)
        for row, c in echelon:
            f = w[c]
            if f:
                w = [(x - f * y) % p for x, y in zip(w, row)]
        lead = next((c for c, x in enumerate(w) if x), None)
        if lead is None:
            continue
        a = inv[w[lead]]
        echelon.append(([x * a % p for x in w], lead))
        kept.append(u)
    return Subspace.span(p, U.ambient_dim, kept)
