"""Brute-force reference computations.

Nothing here calls the elimination, kernel, image or decomposition code in
``linalg`` / ``module``.  The oracle keeps its own rank routine and matrix
products over plain lists, and otherwise works by enumeration.  Library
types (``GModule``, ``Subspace``, ``JordanType``) are used only as containers
for inputs and outputs.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Sequence

from .analyzer import NormFiltrationModel
from .errors import AmbientMismatch, FixedSpaceTooLarge, LevelOutOfRange
from .linalg import FpMatrix, Subspace
from .module import GModule, JordanType

DEFAULT_BUDGET = 3**6
MAX_CHAIN_FIXED_DIM = 4


@dataclass(frozen=True)
class EnumerationBudget:
    """Cap on ``p**dim`` for exhaustive enumeration, plus a seed for sampling."""

    max_elements: int = DEFAULT_BUDGET
    seed: int = 0

    def allows(self, p: int, dim: int) -> bool:
        return p**dim <= self.max_elements


# -- plain-list arithmetic --------------------------------------------


def _rank(rows: Sequence[Sequence[int]], p: int) -> int:
    m = [list(r) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][c] % p:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(r + 1, len(m)):
            f = m[i][c] % p
            if f:
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        r += 1
    return r


def _mul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]], p: int) -> list[list[int]]:
    cols = list(zip(*B))
    return [[sum(x * y for x, y in zip(row, col)) % p for col in cols] for row in A]


def _matvec(A: Sequence[Sequence[int]], v: Sequence[int], p: int) -> tuple[int, ...]:
    return tuple(sum(a * x for a, x in zip(row, v)) % p for row in A)


def _eye(d: int) -> list[list[int]]:
    return [[int(i == j) for j in range(d)] for i in range(d)]


def _inverse(A: Sequence[Sequence[int]], p: int) -> list[list[int]] | None:
    d = len(A)
    m = [list(r) + e for r, e in zip(A, _eye(d))]
    for c in range(d):
        piv = next((i for i in range(c, d) if m[i][c] % p), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        inv = pow(m[c][c], p - 2, p)
        m[c] = [x * inv % p for x in m[c]]
        for i in range(d):
            f = m[i][c]
            if i != c and f:
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[c])]
    return [r[d:] for r in m]


def all_vectors(p: int, dim: int) -> Iterator[tuple[int, ...]]:
    return itertools.product(range(p), repeat=dim)


def _type_from_ranks(ranks: list[int]) -> JordanType:
    ranks = ranks + [0, 0]
    sizes = []
    for i in range(1, len(ranks) - 1):
        sizes += [i] * (ranks[i - 1] - 2 * ranks[i] + ranks[i + 1])
    return JordanType(tuple(sizes))


# -- oracles ----------------------------------------------------------


def brute_length(X: GModule, u: Sequence[int]) -> int:
    """Dimension of the span of the whole orbit ``{sigma^j u : 0 <= j < p^n}``."""
    p = X.p
    sigma = X.sigma.to_lists()
    orbit = []
    v = tuple(x % p for x in u)
    for _ in range(X.group.order):
        orbit.append(v)
        v = _matvec(sigma, v, p)
    return _rank(orbit, p)


def brute_restriction(X: GModule, k: int) -> JordanType:
    """Jordan type of ``sigma^(p^k)`` from the ranks of its unipotent part's powers."""
    if not 0 <= k <= X.group.n:
        raise LevelOutOfRange(f"level {k} outside [0, {X.group.n}]")
    p, d = X.p, X.dim
    S = _eye(d)
    sigma = X.sigma.to_lists()
    for _ in range(p**k):
        S = _mul(S, sigma, p)
    Nk = [[(S[i][j] - (i == j)) % p for j in range(d)] for i in range(d)]
    ranks = [d]
    P = _eye(d)
    while ranks[-1]:
        P = _mul(P, Nk, p)
        ranks.append(_rank(P, p))
    return _type_from_ranks(ranks)


def brute_directness(parts: Sequence[Subspace]) -> bool:
    """Whether the dimension of the joint span equals the sum of dimensions."""
    if not parts:
        return True
    p, d = parts[0].p, parts[0].ambient_dim
    for U in parts:
        if U.p != p or U.ambient_dim != d:
            raise AmbientMismatch("parts live in different spaces")
    dims = [_rank(U.vectors, p) for U in parts]
    joint = [v for U in parts for v in U.vectors]
    return _rank(joint, p) == sum(dims)


def brute_fixed_space(X: GModule) -> list[tuple[int, ...]]:
    """A basis of ``{v : sigma v = v}``, found by enumerating every vector."""
    p = X.p
    sigma = X.sigma.to_lists()
    basis: list[tuple[int, ...]] = []
    for v in all_vectors(p, X.dim):
        if _matvec(sigma, v, p) == v and _rank(basis + [v], p) > len(basis):
            basis.append(v)
    return basis


def brute_norm_image(X: GModule) -> list[tuple[int, ...]]:
    """Spanning set of the image of ``1 + sigma + ... + sigma^(p^n - 1)``."""
    p, d = X.p, X.dim
    sigma = X.sigma.to_lists()
    total = [[0] * d for _ in range(d)]
    P = _eye(d)
    for _ in range(X.group.order):
        total = [[(a + b) % p for a, b in zip(r, s)] for r, s in zip(total, P)]
        P = _mul(P, sigma, p)
    return [tuple(col) for col in zip(*total)] if d else []


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def count_chains(v: int, f: int, n: int, q: int) -> int:
    """Number of chains ``V = W_0 ⊇ W_1 ⊇ ... ⊇ W_n ⊇ F`` with dim V = v, dim F = f."""
    top = v - f
    counts = {top: 1}
    for _ in range(n):
        nxt: dict[int, int] = {}
        for a, c in counts.items():
            for b in range(a + 1):
                nxt[b] = nxt.get(b, 0) + c * gaussian_binomial(a, b, q)
        counts = nxt
    return sum(counts.values())


def expected_chain_count(X: GModule) -> int:
    """Chain count predicted by Gaussian binomials, for cross-checking enumeration."""
    floor = brute_norm_image(X)
    return count_chains(
        len(brute_fixed_space(X)), _rank(floor, X.p) if floor else 0, X.group.n, X.p
    )


def _rref_patterns(v: int, p: int) -> Iterator[list[list[int]]]:
    """Every reduced row echelon matrix with ``v`` columns, one per subspace of F_p^v."""
    for k in range(v + 1):
        for pivots in itertools.combinations(range(v), k):
            free = [(r, c) for r in range(k) for c in range(pivots[r] + 1, v) if c not in pivots]
            for values in itertools.product(range(p), repeat=len(free)):
                rows = [[0] * v for _ in range(k)]
                for r, c in enumerate(pivots):
                    rows[r][c] = 1
                for (r, c), x in zip(free, values):
                    rows[r][c] = x
                yield rows


def enumerate_subspaces(p: int, ambient_dim: int, basis: Sequence[Sequence[int]]) -> list[Subspace]:
    """All subspaces of ``span(basis)``; ``basis`` must be linearly independent."""
    out = []
    for coeffs in _rref_patterns(len(basis), p):
        vecs = [
            tuple(sum(c * b[t] for c, b in zip(row, basis)) % p for t in range(ambient_dim))
            for row in coeffs
        ]
        out.append(Subspace.span(p, ambient_dim, vecs) if vecs else Subspace.zero(p, ambient_dim))
    return out


def enumerate_w_chains(X: GModule) -> list[NormFiltrationModel]:
    """Every chain ``X^G = W_0 ⊇ ... ⊇ W_n ⊇ N X`` packaged as a model."""
    p, d, n = X.p, X.dim, X.group.n
    fixed = brute_fixed_space(X)
    if len(fixed) > MAX_CHAIN_FIXED_DIM:
        raise FixedSpaceTooLarge(
            f"fixed space has dimension {len(fixed)} > {MAX_CHAIN_FIXED_DIM}"
        )
    floor = brute_norm_image(X)
    floor_rank = _rank(floor, p) if floor else 0
    memo: dict[Subspace, list[Subspace]] = {}

    def below(W: Subspace) -> list[Subspace]:
        if W not in memo:
            memo[W] = [
                S
                for S in enumerate_subspaces(p, d, W.vectors)
                if _rank(list(S.vectors) + floor, p) == S.dim
            ] if floor_rank <= W.dim else []
        return memo[W]

    top = Subspace.span(p, d, fixed) if fixed else Subspace.zero(p, d)
    chains: list[tuple[Subspace, ...]] = [(top,)]
    for _ in range(n):
        chains = [c + (S,) for c in chains for S in below(c[-1])]
    if n == 0:
        chains = [c for c in chains if _rank(list(c[0].vectors) + floor, p) == c[0].dim]
    return [NormFiltrationModel(X, c) for c in chains]


def random_invertible(p: int, d: int, rng: random.Random) -> list[list[int]]:
    while True:
        flat = rng.choices(range(p), k=d * d)
        T = [flat[i * d:(i + 1) * d] for i in range(d)]
        if _rank(T, p) == d:
            return T


def random_conjugate(X: GModule, seed: int) -> GModule:
    """``T sigma T^-1`` for a seeded random invertible ``T``."""
    p, d = X.p, X.dim
    rng = random.Random(seed)
    T = random_invertible(p, d, rng)
    Tinv = _inverse(T, p)
    conj = _mul(_mul(T, X.sigma.to_lists(), p), Tinv, p)
    return GModule(X.group, FpMatrix.from_rows(p, conj, ncols=d))
