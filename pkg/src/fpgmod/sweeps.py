"""Exhaustive property sweeps comparing the library against the oracle.

Each family returns a :class:`FamilyResult`; :func:`run_selftest` strings them
together into a deterministic report.  Every module built along the way also
has its norm identity checked, and those checks are collected into a final
``group-ring-identity`` family.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .analyzer import (
    Ranks,
    check_p_power_lengths,
    derive_norm_data,
    is_power_of,
    structure_theorem_check,
    synthesize,
    theorem_ranks,
    verify_norm_filtration,
)
from .errors import InternalCheckFailed
from .linalg import Subspace, intersect
from .module import (
    GModule,
    GroupSpec,
    JordanType,
    cyclic_submodule,
    decompose,
    fixed_submodule,
    from_jordan_type,
    jordan_type,
    length,
    norm_operator,
    restrict,
    restrict_cyclic_type,
)
from .oracle import (
    EnumerationBudget,
    all_vectors,
    brute_directness,
    brute_length,
    brute_restriction,
    enumerate_w_chains,
    expected_chain_count,
    random_conjugate,
)

MAX_GROUP_ORDER = 9


@dataclass
class NormTally:
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    def check(self, X: GModule, label: str) -> None:
        self.checked += 1
        try:
            norm_operator(X)
        except InternalCheckFailed as exc:
            self.failures.append(f"{label}: {exc}")


@dataclass
class FamilyResult:
    name: str
    instances: int = 0
    failures: list[str] = field(default_factory=list)
    sampled: bool = False

    @property
    def ok(self) -> bool:
        return not self.failures

    def line(self) -> str:
        flag = "sampled" if self.sampled else "certified"
        return f"{self.name:<24} instances={self.instances} failures={len(self.failures)} {flag}"

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "instances": self.instances,
            "failures": len(self.failures),
            "mode": "sampled" if self.sampled else "certified",
            "details": list(self.failures),
        }


@dataclass(frozen=True)
class SweepConfig:
    primes: tuple[int, ...] = (2, 3, 5, 7)
    max_dim: int = 8
    budget: EnumerationBudget = EnumerationBudget()
    conjugations: int = 100
    roundtrip_dim: int = 16
    necessity_dim: int = 6
    samples: int = 64
    # above the budget: sample when True, skip the module entirely when False
    sample_above_budget: bool = True

    def groups(self) -> list[GroupSpec]:
        """All ``(p, n)`` with ``p`` in ``primes``, ``n >= 1`` and ``p^n <= 9``."""
        out = []
        for p in sorted(self.primes):
            n = 1
            while p**n <= MAX_GROUP_ORDER:
                out.append(GroupSpec(p, n))
                n += 1
        return out


def partitions(total: int, max_part: int) -> Iterator[tuple[int, ...]]:
    """Partitions of ``total`` into parts ``<= max_part``, descending, in lex-descending order."""
    if total == 0:
        yield ()
        return
    for first in range(min(total, max_part), 0, -1):
        for rest in partitions(total - first, first):
            yield (first,) + rest


def module_types(group: GroupSpec, max_dim: int) -> list[JordanType]:
    return [
        JordanType(t)
        for dim in range(1, max_dim + 1)
        for t in partitions(dim, group.order)
    ]


def _label(group: GroupSpec, t: JordanType | Sequence[int]) -> str:
    return f"p={group.p} n={group.n} type={','.join(map(str, t))}"


def restriction_family(cfg: SweepConfig, norms: NormTally) -> FamilyResult:
    res = FamilyResult("restriction-lemma")
    for group in cfg.groups():
        for l in range(1, group.order + 1):
            X = from_jordan_type(group, (l,))
            norms.check(X, _label(group, (l,)))
            for k in range(group.n + 1):
                res.instances += 1
                closed = restrict_cyclic_type(l, group, k)
                brute = brute_restriction(X, k)
                Y = restrict(X, k)
                norms.check(Y, _label(group, (l,)) + f" restricted k={k}")
                fast = jordan_type(Y)
                if closed != brute or fast != brute:
                    res.failures.append(
                        f"p={group.p} n={group.n} l={l} k={k}: closed={closed} brute={brute} fast={fast}"
                    )
    return res


def decomposition_family(cfg: SweepConfig, norms: NormTally) -> FamilyResult:
    res = FamilyResult("proposition-decompose")
    for group in cfg.groups():
        for t in module_types(group, cfg.max_dim):
            res.instances += 1
            X = from_jordan_type(group, t)
            norms.check(X, _label(group, t))
            try:
                dec = decompose(X)
            except InternalCheckFailed as exc:
                res.failures.append(f"{_label(group, t)}: {exc}")
                continue
            parts = [Subspace.span(X.p, X.dim, b) for b in dec.cyclic_bases()]
            covered = sum(U.dim for U in parts) == X.dim
            if dec.lengths() != t or not covered or not brute_directness(parts):
                res.failures.append(f"{_label(group, t)}: recovered {dec.lengths()}")
    return res


def _length_identities(X: GModule, fixed: Subspace, u: tuple[int, ...]) -> str | None:
    l = length(X, u)
    b = brute_length(X, u)
    if l != b:
        return f"length {l} but orbit span has dimension {b}"
    C = cyclic_submodule(X, u)
    if C.dim != l:
        return f"cyclic submodule of dimension {C.dim} for length {l}"
    if l == 0:
        return None
    top = C.image(X.rho_power(l - 1))
    if top != intersect(C, fixed) or top.dim == 0:
        return "rho^(l-1)<u> differs from <u>^G or vanishes"
    if C.image(X.rho_power(l)).dim != 0:
        return "rho^l<u> is nonzero"
    return None


def length_family(cfg: SweepConfig, norms: NormTally) -> FamilyResult:
    res = FamilyResult("length-identities")
    rng = random.Random(cfg.budget.seed)
    for group in cfg.groups():
        for t in module_types(group, cfg.max_dim):
            X = from_jordan_type(group, t)
            if cfg.budget.allows(X.p, X.dim):
                vectors: Iterator[tuple[int, ...]] = all_vectors(X.p, X.dim)
            elif not cfg.sample_above_budget:
                continue
            else:
                res.sampled = True
                vectors = iter(
                    [tuple(rng.randrange(X.p) for _ in range(X.dim)) for _ in range(cfg.samples)]
                )
            fixed = fixed_submodule(X)
            for u in vectors:
                res.instances += 1
                problem = _length_identities(X, fixed, u)
                if problem:
                    res.failures.append(f"{_label(group, t)} u={u}: {problem}")
    return res


def rank_vectors(group: GroupSpec, max_dim: int) -> Iterator[Ranks]:
    p, n = group.p, group.n
    bounds = [max_dim // p**i for i in range(n + 1)]
    for values in itertools.product(*(range(b + 1) for b in bounds)):
        r = Ranks(values)
        if r.dimension(p) <= max_dim:
            yield r


def roundtrip_family(cfg: SweepConfig, norms: NormTally) -> FamilyResult:
    res = FamilyResult("theorem-roundtrip")
    for group in cfg.groups():
        if group.n < 2:
            continue
        for ranks in rank_vectors(group, cfg.roundtrip_dim):
            res.instances += 1
            model = synthesize(ranks, group)
            norms.check(model.module, f"p={group.p} n={group.n} ranks={ranks}")
            report = structure_theorem_check(model)
            back = theorem_ranks(derive_norm_data(model))
            if not report.certified or back != ranks or not check_p_power_lengths(model.module).ok:
                res.failures.append(
                    f"p={group.p} n={group.n} ranks=({ranks}): certified={report.certified} back=({back})"
                )
    return res


def necessity_family(cfg: SweepConfig, norms: NormTally) -> FamilyResult:
    """No chain rescues a module having a block whose size is not a power of p."""
    res = FamilyResult("p-power-necessity")
    for group in cfg.groups():
        if group.n != 2:
            continue
        for t in module_types(group, min(cfg.necessity_dim, cfg.max_dim)):
            if len(t) > 4 or all(is_power_of(group.p, s) for s in t):
                continue
            X = from_jordan_type(group, t)
            norms.check(X, _label(group, t))
            chains = enumerate_w_chains(X)
            expected = expected_chain_count(X)
            if len(chains) != expected:
                res.failures.append(f"{_label(group, t)}: {len(chains)} chains, expected {expected}")
            for model in chains:
                res.instances += 1
                if verify_norm_filtration(model).passed:
                    dims = ",".join(str(W.dim) for W in model.W)
                    res.failures.append(f"{_label(group, t)}: chain with dims {dims} passes")
    return res


def krull_schmidt_family(cfg: SweepConfig, norms: NormTally) -> FamilyResult:
    res = FamilyResult("krull-schmidt")
    for group in cfg.groups():
        for t in module_types(group, cfg.max_dim):
            X = from_jordan_type(group, t)
            for seed in range(cfg.conjugations):
                res.instances += 1
                Y = random_conjugate(X, cfg.budget.seed * 1_000_003 + seed)
                norms.check(Y, _label(group, t) + f" seed={seed}")
                if jordan_type(Y) != t:
                    res.failures.append(f"{_label(group, t)} seed={seed}: got {jordan_type(Y)}")
    return res


FAMILIES = (
    restriction_family,
    decomposition_family,
    length_family,
    roundtrip_family,
    necessity_family,
    krull_schmidt_family,
)


def run_selftest(cfg: SweepConfig) -> list[FamilyResult]:
    norms = NormTally()
    results = [family(cfg, norms) for family in FAMILIES]
    results.append(FamilyResult("group-ring-identity", norms.checked, norms.failures))
    return results


def format_report(results: Sequence[FamilyResult]) -> str:
    lines = [r.line() for r in results]
    for r in results:
        lines += [f"  FAIL {r.name}: {d}" for d in r.failures]
    status = "PASS" if all(r.ok for r in results) else "FAIL"
    lines.append(f"selftest {status}")
    return "\n".join(lines) + "\n"

