"""Modules over F_p[G] for G cyclic of order p**n.

A module is a dimension together with the matrix of a fixed generator
``sigma``; ``rho = sigma - 1`` is nilpotent.  Everything structural (lengths,
Jordan types, decompositions into cyclic summands) is computed from ``rho``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .errors import (
    BlockTooLarge,
    CharacteristicMismatch,
    DimensionMismatch,
    GroupMismatch,
    InternalCheckFailed,
    LengthOutOfRange,
    LevelOutOfRange,
    NotInvariant,
    NotSquare,
    NotUnipotent,
)
from .linalg import (
    FpMatrix,
    Subspace,
    Vector,
    block_diag,
    check_prime,
    complement,
    image_basis,
    intersect,
    kernel_basis,
    mat_pow,
    matrix_sum,
    rank,
    solve,
)


@dataclass(frozen=True)
class GroupSpec:
    """The cyclic group of order ``p**n`` with its subgroup tower.

    ``H_k`` is generated by ``sigma**(p**k)`` and has order ``p**(n-k)``; the
    quotient ``G_i = G / H_i`` has order ``p**i``.
    """

    p: int
    n: int

    def __post_init__(self):
        check_prime(self.p)
        if self.n < 0:
            raise LevelOutOfRange(f"group exponent must be >= 0, got {self.n}")

    @property
    def order(self) -> int:
        return self.p**self.n

    def _level(self, k: int) -> None:
        if not 0 <= k <= self.n:
            raise LevelOutOfRange(f"level {k} outside [0, {self.n}]")

    def subgroup_order(self, k: int) -> int:
        self._level(k)
        return self.p ** (self.n - k)

    def quotient_order(self, i: int) -> int:
        self._level(i)
        return self.p**i

    def subgroup(self, k: int) -> GroupSpec:
        """``H_k`` as a cyclic group in its own right."""
        self._level(k)
        return GroupSpec(self.p, self.n - k)

    def __str__(self) -> str:
        return f"C_{self.p}^{self.n}" if self.n != 1 else f"C_{self.p}"


@dataclass(frozen=True, order=True)
class JordanType:
    """Multiset of cyclic summand lengths, kept sorted in descending order."""

    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(sorted((int(x) for x in self.parts), reverse=True))
        if any(x < 1 for x in parts):
            raise ValueError(f"block sizes must be positive: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def from_multiplicities(cls, mult: dict[int, int]) -> JordanType:
        return cls(tuple(size for size, m in mult.items() for _ in range(m)))

    @classmethod
    def parse(cls, text: str) -> JordanType:
        text = text.strip()
        if not text:
            return cls(())
        return cls(tuple(int(tok) for tok in text.split(",")))

    @property
    def dim(self) -> int:
        return sum(self.parts)

    def multiplicity(self, size: int) -> int:
        return self.parts.count(size)

    def multiplicities(self) -> dict[int, int]:
        return dict(sorted(Counter(self.parts).items()))

    def __add__(self, other: JordanType) -> JordanType:
        return JordanType(self.parts + other.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __str__(self) -> str:
        return ",".join(map(str, self.parts))


@dataclass(frozen=True)
class GModule:
    """An F_p[G]-module given by the action matrix of the generator."""

    group: GroupSpec
    sigma: FpMatrix
    _powers: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.sigma.p != self.group.p:
            raise CharacteristicMismatch(
                f"action matrix over F_{self.sigma.p} for a group of order {self.group.p}^{self.group.n}"
            )
        if not self.sigma.is_square:
            raise NotSquare(f"action matrix has shape {self.sigma.shape}")
        # in characteristic p, (sigma - 1)^(p^n) = sigma^(p^n) - 1
        if mat_pow(self.sigma, self.group.order) != FpMatrix.identity(self.group.p, self.dim):
            raise NotUnipotent(f"sigma^{self.group.order} is not the identity")

    @property
    def p(self) -> int:
        return self.group.p

    @property
    def dim(self) -> int:
        return self.sigma.nrows

    @cached_property
    def rho(self) -> FpMatrix:
        return self.sigma - FpMatrix.identity(self.p, self.dim)

    def rho_power(self, i: int) -> FpMatrix:
        """``rho**i``, memoised on the module."""
        cached = self._powers.get(i)
        if cached is None:
            if i == 0:
                cached = FpMatrix.identity(self.p, self.dim)
            else:
                cached = self.rho_power(i - 1) @ self.rho
            self._powers[i] = cached
        return cached

    def check_vector(self, u: Sequence[int]) -> Vector:
        if len(u) != self.dim:
            raise DimensionMismatch(f"vector of length {len(u)} in a module of dimension {self.dim}")
        return tuple(int(x) % self.p for x in u)

    def __repr__(self) -> str:
        return f"GModule({self.group}, dim={self.dim})"


def new_module(group: GroupSpec, sigma: FpMatrix) -> GModule:
    return GModule(group, sigma)


def jordan_block(p: int, size: int) -> FpMatrix:
    """Unipotent block with ``rho e_k = e_{k+1}``: e_0 generates, e_{size-1} is fixed."""
    return FpMatrix.from_rows(
        p, ([int(i == j) + int(i == j + 1) for j in range(size)] for i in range(size)), ncols=size
    )


def from_jordan_type(group: GroupSpec, jtype: JordanType | Sequence[int]) -> GModule:
    if not isinstance(jtype, JordanType):
        jtype = JordanType(tuple(jtype))
    too_big = [s for s in jtype.parts if s > group.order]
    if too_big:
        raise BlockTooLarge(f"block sizes {too_big} exceed the group order {group.order}")
    sigma = block_diag(group.p, [jordan_block(group.p, s) for s in jtype.parts])
    return GModule(group, sigma)


def trivial_module(group: GroupSpec, dim: int) -> GModule:
    return GModule(group, FpMatrix.identity(group.p, dim))


def direct_sum(X: GModule, Y: GModule) -> GModule:
    if X.group != Y.group:
        raise GroupMismatch(f"{X.group} vs {Y.group}")
    return GModule(X.group, block_diag(X.p, [X.sigma, Y.sigma]))


def fixed_submodule(X: GModule) -> Subspace:
    return kernel_basis(X.rho)


def length(X: GModule, u: Sequence[int]) -> int:
    """Dimension of the cyclic submodule generated by ``u``: least l with rho^l u = 0."""
    v = X.check_vector(u)
    rho = X.rho
    l = 0
    while any(v):
        v = rho.apply(v)
        l += 1
    return l


def cyclic_basis(X: GModule, u: Sequence[int]) -> list[Vector]:
    """The basis ``u, rho u, ..., rho^(l-1) u`` of the submodule generated by ``u``."""
    v = X.check_vector(u)
    out = []
    while any(v):
        out.append(v)
        v = X.rho.apply(v)
    return out


def cyclic_submodule(X: GModule, u: Sequence[int]) -> Subspace:
    return Subspace.span(X.p, X.dim, cyclic_basis(X, u))


def rank_sequence(X: GModule) -> list[int]:
    """``[rank(rho^0), rank(rho^1), ...]`` up to and including the first zero."""
    ranks = [X.dim]
    i = 0
    while ranks[-1]:
        i += 1
        ranks.append(rank(X.rho_power(i)))
    return ranks


def jordan_type(X: GModule) -> JordanType:
    r = rank_sequence(X)
    r += [0, 0]
    mult = {}
    for i in range(1, len(r) - 1):
        m = r[i - 1] - 2 * r[i] + r[i + 1]
        if m < 0:
            raise InternalCheckFailed(f"negative block multiplicity {m} at size {i}")
        if m:
            mult[i] = m
    jt = JordanType.from_multiplicities(mult)
    if jt.dim != X.dim:
        raise InternalCheckFailed(f"Jordan type {jt} does not add up to dimension {X.dim}")
    return jt


def is_isomorphic(X: GModule, Y: GModule) -> bool:
    if X.group != Y.group:
        raise GroupMismatch(f"{X.group} vs {Y.group}")
    return X.dim == Y.dim and jordan_type(X) == jordan_type(Y)


def socle_filtration(X: GModule) -> list[Subspace]:
    """``[rho^(i-1) X  ∩  X^G  for i = 1 .. p^n]``."""
    fixed = fixed_submodule(X)
    out = []
    for i in range(1, X.group.order + 1):
        img = image_basis(X.rho_power(i - 1))
        out.append(intersect(img, fixed) if img.dim else img)
    return out


@dataclass(frozen=True)
class Decomposition:
    """Generators of the cyclic summands, grouped by their length.

    ``generators[i]`` is the tuple of generators of length ``i``; the summand
    ``X_i`` is the submodule they generate and its fixed part is ``L_i``.
    """

    module: GModule
    generators: dict[int, tuple[Vector, ...]]
    fixed_parts: dict[int, Subspace]

    def lengths(self) -> JordanType:
        return JordanType.from_multiplicities(
            {i: len(ys) for i, ys in self.generators.items()}
        )

    def count(self, i: int) -> int:
        return len(self.generators.get(i, ()))

    def all_generators(self) -> list[tuple[int, Vector]]:
        """The flat generator list, longest summands first."""
        return [(i, y) for i in sorted(self.generators, reverse=True) for y in self.generators[i]]

    def cyclic_bases(self) -> list[list[Vector]]:
        return [cyclic_basis(self.module, y) for _, y in self.all_generators()]

    def summand(self, i: int) -> Subspace:
        X = self.module
        vecs = [v for y in self.generators.get(i, ()) for v in cyclic_basis(X, y)]
        return Subspace.span(X.p, X.dim, vecs)


def decompose(X: GModule) -> Decomposition:
    """Split ``X`` into cyclic summands from the filtration of its fixed points.

    With ``F_i = rho^(i-1) X ∩ X^G``, take ``L_{p^n} = rho^(p^n - 1) X`` and
    ``L_i`` a complement of ``F_{i+1}`` in ``F_i``.  Each basis vector ``v`` of
    ``L_i`` is lifted to some ``y`` with ``rho^(i-1) y = v``; the lifts are the
    generators of the length-``i`` summands.
    """
    order = X.group.order
    filt = socle_filtration(X)
    generators: dict[int, tuple[Vector, ...]] = {}
    fixed_parts: dict[int, Subspace] = {}
    for i in range(1, order + 1):
        if i == order:
            L = image_basis(X.rho_power(order - 1))
        else:
            L = complement(filt[i], filt[i - 1])
        if L.dim == 0:
            continue
        fixed_parts[i] = L
        lifts = []
        for v in L.vectors:
            y = solve(X.rho_power(i - 1), v)
            if y is None:
                raise InternalCheckFailed(f"no preimage of a fixed vector under rho^{i - 1}")
            lifts.append(y)
        generators[i] = tuple(lifts)
    dec = Decomposition(X, generators, fixed_parts)

    total = sum(i * len(ys) for i, ys in generators.items())
    if total != X.dim:
        raise InternalCheckFailed(f"summand lengths add to {total}, module has dimension {X.dim}")
    bases = [v for b in dec.cyclic_bases() for v in b]
    if Subspace.span(X.p, X.dim, bases).dim != X.dim:
        raise InternalCheckFailed("cyclic summand bases are linearly dependent")
    return dec


def restrict(X: GModule, k: int) -> GModule:
    """Restriction to ``H_k``, acting through ``sigma**(p**k)``."""
    if not 0 <= k <= X.group.n:
        raise LevelOutOfRange(f"level {k} outside [0, {X.group.n}]")
    return GModule(X.group.subgroup(k), mat_pow(X.sigma, X.p**k))


def restrict_cyclic_type(l: int, group: GroupSpec, k: int) -> JordanType:
    """Jordan type over ``H_k`` of a cyclic module of length ``l``.

    Writing ``l = (l_H - 1) p^k + r`` with ``1 <= r <= p^k`` the result has ``r``
    blocks of size ``l_H`` and ``p^k - r`` blocks of size ``l_H - 1``.
    """
    if not 0 <= k <= group.n:
        raise LevelOutOfRange(f"level {k} outside [0, {group.n}]")
    if not 1 <= l <= group.order:
        raise LengthOutOfRange(f"length {l} outside [1, {group.order}]")
    q = group.p**k
    l_h = -(-l // q)
    r = l - (l_h - 1) * q
    parts = (l_h,) * r + ((l_h - 1,) * (q - r) if l_h > 1 else ())
    return JordanType(parts)


def is_invariant(X: GModule, U: Subspace) -> bool:
    return all(U.contains(X.sigma.apply(v)) for v in U.vectors)


@dataclass(frozen=True)
class ExclusionResult:
    """Outcome of checking the exclusion principle on a family of submodules.

    ``hypothesis``: the fixed parts sum directly.  ``conclusion``: the parts
    themselves sum directly.  The principle says the first implies the second.
    """

    hypothesis: bool
    conclusion: bool
    fixed_dims: tuple[int, ...]
    fixed_span_dim: int
    part_dims: tuple[int, ...]
    span_dim: int

    @property
    def consistent(self) -> bool:
        return self.conclusion or not self.hypothesis


def exclusion_check(ambient: GModule, parts: Sequence[Subspace]) -> ExclusionResult:
    p, d = ambient.p, ambient.dim
    for idx, U in enumerate(parts):
        if U.p != p or U.ambient_dim != d:
            raise DimensionMismatch(f"part {idx} does not live in the ambient module")
        if not is_invariant(ambient, U):
            raise NotInvariant(f"part {idx} is not stable under sigma")
    fixed = fixed_submodule(ambient)
    fixed_parts = [intersect(U, fixed) for U in parts]
    fixed_span = Subspace.span(p, d, [v for F in fixed_parts for v in F.vectors])
    span = Subspace.span(p, d, [v for U in parts for v in U.vectors])
    fixed_dims = tuple(F.dim for F in fixed_parts)
    part_dims = tuple(U.dim for U in parts)
    return ExclusionResult(
        hypothesis=sum(fixed_dims) == fixed_span.dim,
        conclusion=sum(part_dims) == span.dim,
        fixed_dims=fixed_dims,
        fixed_span_dim=fixed_span.dim,
        part_dims=part_dims,
        span_dim=span.dim,
    )


def norm_operator(X: GModule) -> FpMatrix:
    """``rho**(p**n - 1)``, checked against ``1 + sigma + ... + sigma**(p**n - 1)``."""
    order = X.group.order
    N = X.rho_power(order - 1)
    powers = [FpMatrix.identity(X.p, X.dim)]
    for _ in range(order - 1):
        powers.append(powers[-1] @ X.sigma)
    if matrix_sum(X.p, powers) != N:
        raise InternalCheckFailed("rho^(p^n - 1) differs from the sum of all sigma^j")
    return N
