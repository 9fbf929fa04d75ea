"""Norm-filtration models and the rank formulas they determine.

A model is a module ``X`` together with a chain ``W_0 ⊇ W_1 ⊇ ... ⊇ W_n`` of
subspaces of ``X^G``.  ``W_i`` stands in for the image of the norm from the
degree ``p^i`` subextension.  The filtration predicate compares
``rho^(j-1) X ∩ X^G`` with ``W_i`` for ``i`` minimal with ``j <= p^i``.  When it
holds for every ``j``, the module is a sum of free modules over the quotients
``G_i``, with ranks read off from ``dim W_i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import GroupMismatch, JOutOfRange, ModelInvalid, NotNested
from .linalg import Subspace, image_basis, intersect
from .module import (
    GModule,
    GroupSpec,
    JordanType,
    decompose,
    fixed_submodule,
    from_jordan_type,
    jordan_type,
    socle_filtration,
)


def is_power_of(p: int, x: int) -> bool:
    while x > 1 and x % p == 0:
        x //= p
    return x == 1


def minimal_level(j: int, group: GroupSpec) -> int:
    """Least ``i`` with ``j <= p**i``."""
    if not 1 <= j <= group.order:
        raise JOutOfRange(f"j = {j} outside [1, {group.order}]")
    i = 0
    while j > group.p**i:
        i += 1
    return i


@dataclass(frozen=True)
class NormData:
    """Dimensions ``d_i`` of the norm images, ``d_0`` being the fixed dimension.

    ``m`` is an inert degree label carried through file formats.
    """

    group: GroupSpec
    d: tuple[int, ...]
    m: int = 1

    def __post_init__(self):
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))
        if len(self.d) != self.group.n + 1:
            raise NotNested(f"expected {self.group.n + 1} dimensions, got {len(self.d)}")
        if any(x < 0 for x in self.d):
            raise NotNested(f"negative dimension in {self.d}")
        if any(a < b for a, b in zip(self.d, self.d[1:])):
            raise NotNested(f"norm dimensions {self.d} are not weakly decreasing")
        if self.m < 1:
            raise ValueError(f"degree label must be positive, got {self.m}")


@dataclass(frozen=True)
class Ranks:
    """``values[i]`` is the number of free ``F_p G_i`` summands (length ``p^i``)."""

    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(x) for x in self.values))
        if any(x < 0 for x in self.values):
            raise ValueError(f"ranks must be nonnegative: {self.values}")

    @property
    def n(self) -> int:
        return len(self.values) - 1

    def dimension(self, p: int) -> int:
        return sum(r * p**i for i, r in enumerate(self.values))

    def jordan_type(self, p: int) -> JordanType:
        return JordanType.from_multiplicities({p**i: r for i, r in enumerate(self.values)})

    def __str__(self) -> str:
        return " ".join(map(str, self.values))


def theorem_ranks(data: NormData) -> Ranks:
    d = data.d
    n = data.group.n
    return Ranks(tuple(d[i] - d[i + 1] for i in range(n)) + (d[n],))


@dataclass(frozen=True)
class NormFiltrationModel:
    module: GModule
    W: tuple[Subspace, ...]
    m: int = 1

    def __post_init__(self):
        object.__setattr__(self, "W", tuple(self.W))

    @property
    def group(self) -> GroupSpec:
        return self.module.group

    def problems(self) -> list[str]:
        """Violated model axioms, empty when the model is well formed."""
        X = self.module
        n = X.group.n
        out = []
        if len(self.W) != n + 1:
            return [f"expected {n + 1} norm subspaces, got {len(self.W)}"]
        for i, Wi in enumerate(self.W):
            if Wi.p != X.p or Wi.ambient_dim != X.dim:
                return [f"W_{i} does not live in the module"]
        fixed = fixed_submodule(X)
        if self.W[0] != fixed:
            out.append("W_0 is not the fixed submodule")
        for i, Wi in enumerate(self.W):
            if not Wi.issubspace(fixed):
                out.append(f"W_{i} is not pointwise fixed")
        for i in range(n):
            if not self.W[i + 1].issubspace(self.W[i]):
                out.append(f"W_{i + 1} is not contained in W_{i}")
        norm_image = image_basis(X.rho_power(X.group.order - 1))
        if not norm_image.issubspace(self.W[n]):
            out.append(f"W_{n} does not contain the image of the norm operator")
        return out

    def validate(self) -> None:
        issues = self.problems()
        if issues:
            raise ModelInvalid("; ".join(issues))


def synthesize(ranks: Ranks, group: GroupSpec, m: int = 1) -> NormFiltrationModel:
    """Canonical model: ``ranks[i]`` blocks of size ``p^i`` with the filtration it induces."""
    if ranks.n != group.n:
        raise GroupMismatch(f"{len(ranks.values)} ranks for a group with n = {group.n}")
    X = from_jordan_type(group, ranks.jordan_type(group.p))
    fixed = fixed_submodule(X)
    W = []
    for i in range(group.n + 1):
        img = image_basis(X.rho_power(group.p**i - 1))
        W.append(intersect(img, fixed))
    return NormFiltrationModel(X, tuple(W), m)


def derive_norm_data(model: NormFiltrationModel) -> NormData:
    model.validate()
    return NormData(model.group, tuple(Wi.dim for Wi in model.W), model.m)


@dataclass(frozen=True)
class FiltrationCheck:
    j: int
    level: int
    filtration: Subspace
    norm_image: Subspace

    @property
    def passed(self) -> bool:
        return self.filtration == self.norm_image

    @property
    def inclusion(self) -> bool:
        """Whether ``W_level ⊆ rho^(j-1) X ∩ X^G``."""
        return self.norm_image.issubspace(self.filtration)

    def summary(self) -> dict:
        return {
            "name": "norm-filtration",
            "j": self.j,
            "level": self.level,
            "result": "pass" if self.passed else "fail",
            "inclusion": self.inclusion,
            "dim_filtration": self.filtration.dim,
            "dim_norm_image": self.norm_image.dim,
        }


@dataclass(frozen=True)
class FiltrationReport:
    checks: tuple[FiltrationCheck, ...]
    model_problems: tuple[str, ...] = ()

    @property
    def valid_model(self) -> bool:
        return not self.model_problems

    @property
    def passed(self) -> bool:
        """Well-formed model and equality at every ``j``."""
        return self.valid_model and all(c.passed for c in self.checks)

    @property
    def failed_at(self) -> list[int]:
        return [c.j for c in self.checks if not c.passed]


def verify_norm_filtration(model: NormFiltrationModel) -> FiltrationReport:
    """Compare every step of the fixed-point filtration with the norm chain.

    All ``j`` are checked; failures are recorded, not raised.
    """
    problems = tuple(model.problems())
    group = model.group
    X = model.module
    if len(model.W) != group.n + 1 or any(
        Wi.p != X.p or Wi.ambient_dim != X.dim for Wi in model.W
    ):
        return FiltrationReport((), problems)
    filt = socle_filtration(X)
    checks = tuple(
        FiltrationCheck(j, lvl, filt[j - 1], model.W[lvl])
        for j in range(1, group.order + 1)
        for lvl in (minimal_level(j, group),)
    )
    return FiltrationReport(checks, problems)


@dataclass(frozen=True)
class PPowerResult:
    ok: bool
    offenders: tuple[int, ...]


def check_p_power_lengths(X: GModule) -> PPowerResult:
    offenders = tuple(sorted({s for s in jordan_type(X).parts if not is_power_of(X.p, s)}))
    return PPowerResult(not offenders, offenders)


@dataclass(frozen=True)
class StructureReport:
    """Lemma-implies-theorem certificate for one model.

    ``theorem_checked`` is False when the filtration check failed or the model
    is malformed; ``certified`` then stays False as well.
    """

    filtration: FiltrationReport
    theorem_checked: bool
    counts: dict[int, int] = field(default_factory=dict)
    expected: Ranks | None = None
    non_p_power: tuple[int, ...] = ()
    mismatches: tuple[int, ...] = ()

    @property
    def certified(self) -> bool:
        return self.theorem_checked and not self.non_p_power and not self.mismatches


def structure_theorem_check(model: NormFiltrationModel) -> StructureReport:
    report = verify_norm_filtration(model)
    if not report.passed:
        return StructureReport(report, theorem_checked=False)
    X = model.module
    dec = decompose(X)
    counts = {i: dec.count(i) for i in sorted(dec.generators)}
    expected = theorem_ranks(derive_norm_data(model))
    non_p_power = tuple(i for i in counts if not is_power_of(X.p, i))
    mismatches = tuple(
        i for i, r in enumerate(expected.values) if counts.get(X.p**i, 0) != r
    )
    return StructureReport(report, True, counts, expected, non_p_power, mismatches)
