"""Seeded randomized constructions of cube-free sets with certificates.

Two constructions are exposed: dense sets (density following the schedule
c_n) with no r-cube for r slightly above log2(n), and sparse near-full-entropy
sets with no r-cube for a fixed r depending only on the target entropy gap.
Both run the same resampling loop: sample every cell independently with
probability p, find a violating cube, redraw exactly its vertex cells, and
repeat.  Violation detection is delegated to the cube search instead of
materializing the bad-event catalog, which is only feasible at toy sizes.

Every success is re-verified by an independent search and shipped with a
serializable certificate; failure and budget exhaustion are first-class,
clearly distinguished outcomes.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import floor, sqrt
from typing import Optional

from .bounds import (
    c_n_schedule,
    check_eq_ep,
    choose_r_dense,
    choose_r_sparse,
    count_affine_maps_bound,
    lll_condition,
)
from .cubes import (
    AffineCube,
    CubeNotion,
    DEFAULT_BUDGET,
    DEFAULT_NOTION,
    find_cube,
)
from .exactmath import as_fraction, pow_at_least
from .grid import MATERIALIZE_LIMIT, GridParams, PointSet

DEFAULT_SEED = 1729
DEFAULT_MAX_ROUNDS = 10 ** 5


@dataclass(frozen=True)
class SamplerConfig:
    """Knobs for one resampling run; a fixed config pins the run exactly."""

    p: Fraction
    seed: int = DEFAULT_SEED
    max_rounds: int = DEFAULT_MAX_ROUNDS
    notion: CubeNotion = DEFAULT_NOTION
    search_budget: int = DEFAULT_BUDGET

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", as_fraction(self.p))
        if not 0 < self.p < 1:
            raise ValueError(f"inclusion probability must lie in (0, 1), got {self.p}")
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be >= 1")


@dataclass(frozen=True)
class BadEventCatalog:
    """Deduplicated vertex-image sets of all injective affine cube maps."""

    grid: GridParams
    r: int
    events: tuple[frozenset, ...]

    @property
    def L(self) -> int:
        return len(self.events)


def enumerate_cube_images(N: int, n: int, r: int, cap: int = 10 ** 7) -> BadEventCatalog:
    """All distinct images Q of injective affine maps {0,1}^r -> [N]^n.

    The raw parametrization (base point plus r distinct vertex images) has
    at most N^(n(r+1)) tuples, which must not exceed `cap`; beyond that,
    search-based violation detection is the only option.
    """
    grid = GridParams(N, n)
    if r < 0:
        raise ValueError(f"r must be >= 0, got {r}")
    raw = N ** (n * (r + 1))
    if raw > cap:
        raise ValueError(f"raw enumeration count {raw} exceeds cap {cap}")
    if r == 0:
        events = tuple(frozenset([i]) for i in range(grid.size))
        return BadEventCatalog(grid, r, events)
    pts = list(grid.points())
    events = set()
    for z in pts:
        for images in combinations(pts, r):
            if z in images:
                continue  # zero generator can never be injective
            cube = AffineCube(z, tuple(tuple(w - b for w, b in zip(im, z)) for im in images))
            verts = cube.vertices()
            if len(set(verts)) != 2 ** r:
                continue
            if not all(grid.contains(v) for v in verts):
                continue
            events.add(frozenset(grid.index_of(v) for v in verts))
    ordered = tuple(sorted(events, key=sorted))
    return BadEventCatalog(grid, r, ordered)


@dataclass(frozen=True)
class SampleOutcome:
    point_set: PointSet
    rounds: int
    success: bool
    last_violation: Optional[AffineCube]


def moser_tardos_sample(grid: GridParams, r: int, config: SamplerConfig) -> SampleOutcome:
    """Resample violating r-cubes until none remain or rounds run out.

    Deterministic for a fixed config: one random stream drives both the
    initial sample and every redraw, the violating cube is always the
    canonically smallest one, and its cells are redrawn in index order.
    A search-budget blowup propagates as SearchBudgetExceeded (the outcome
    is then unknown, which is different from an honest failure).
    """
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if grid.size > MATERIALIZE_LIMIT:
        raise ValueError(f"grid with {grid.size} cells is too large to sample")
    rng = random.Random(config.seed)
    p = float(config.p)
    included = {idx for idx in range(grid.size) if rng.random() < p}
    rounds = 0
    while True:
        current = PointSet.from_indices(grid, included)
        cube = find_cube(current, r, config.notion, budget=config.search_budget)
        if cube is None:
            return SampleOutcome(current, rounds, True, None)
        if rounds >= config.max_rounds:
            return SampleOutcome(current, rounds, False, cube)
        for idx in sorted(grid.index_of(v) for v in cube.vertices()):
            if rng.random() < p:
                included.add(idx)
            else:
                included.discard(idx)
        rounds += 1


@dataclass(frozen=True)
class VerifyReport:
    verified: bool
    witness: Optional[AffineCube]
    density: Fraction
    cardinality: int

    def to_dict(self, notion: CubeNotion = DEFAULT_NOTION) -> dict:
        """Self-contained JSON-ready form (used standalone, without a run)."""
        out = {
            "verified": self.verified,
            "density_num": self.density.numerator,
            "density_den": self.density.denominator,
            "cardinality": self.cardinality,
        }
        if self.witness is not None:
            out["witness"] = self.witness.to_record(notion)
        return out


def verify_construction(
    s: PointSet,
    r: int,
    notion: CubeNotion = DEFAULT_NOTION,
    budget: int = DEFAULT_BUDGET,
) -> VerifyReport:
    """Re-check cube-freeness with a fresh search and recount the set.

    Shares no state with any sampler.  A budget blowup raises (inconclusive);
    it never reports verified.
    """
    witness = None
    if r >= 1 and len(s) > 0:
        witness = find_cube(s, r, notion, budget=budget)
    return VerifyReport(witness is None, witness, s.density(), len(s))


class ConstructStatus(enum.Enum):
    VERIFIED = "verified"
    NO_VALID_R = "no-valid-r"
    CUBE_PERSISTS = "cube-persists"
    DENSITY_MISSED = "density-missed"
    SIZE_MISSED = "size-missed"


@dataclass(frozen=True)
class ConstructionResult:
    status: ConstructStatus
    r: Optional[int]
    point_set: Optional[PointSet]
    certificate: Optional[dict]
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status is ConstructStatus.VERIFIED


def certificate_dict(
    grid: GridParams,
    r: int,
    notion: CubeNotion,
    p: Fraction,
    seed: int,
    rounds: int,
    report: VerifyReport,
    extras: Optional[dict] = None,
) -> dict:
    """Serializable run certificate with a stable field order."""
    cert = {
        "grid": {"base": grid.base, "dim": grid.dim},
        "r": r,
        "notion": notion.value,
        "p": str(p),
        "seed": seed,
        "rounds": rounds,
        "density_num": report.density.numerator,
        "density_den": report.density.denominator,
        "cardinality": report.cardinality,
        "verified": report.verified,
    }
    if report.witness is not None:
        cert["witness"] = report.witness.to_record(notion)
    if extras:
        cert.update(extras)
    return cert


def sparse_exponent_chain(n: int, N: int, eps, r: int) -> dict:
    """Symbolic evaluation of the sparse feasibility chain.

    The headline comparison is the final exponent n(r+3) - 2^(r-1) eps n,
    negative exactly when r was chosen large enough; the looser middle step
    additionally needs eps*n >= 2.  Both are reported, together with the
    exact LLL comparison at L = N^(n(r+1)).
    """
    eps = as_fraction(eps)
    exponent = n * (r + 3) - 2 ** (r - 1) * eps * n
    middle_ok = eps * n >= 2
    p = Fraction(1, N ** floor(eps * n)) if floor(eps * n) >= 1 else None
    exact_lll = None
    if p is not None and 2 ** r <= 10 ** 4:
        exact_lll = lll_condition(count_affine_maps_bound(N, n, r), p, r)
    return {
        "final_exponent": str(exponent),
        "final_exponent_negative": exponent < 0,
        "middle_step_valid": bool(middle_ok),
        "lll_condition_at_count_bound": exact_lll,
    }


def containment_probability(N: int, n: int, r: int, c) -> Fraction:
    """Probability that a uniform exact-density-c subset contains a fixed
    2^r-point set: the product of (cN^n - i)/(N^n - i) over i < 2^r."""
    c = as_fraction(c)
    cells = N ** n
    if 2 ** r > cells:
        return Fraction(0)  # no 2^r-point set fits in the grid at all
    prod = Fraction(1)
    for i in range(2 ** r):
        prod *= (c * cells - i) / (cells - i)
    return prod


def construct_dense_small_M(
    n: int,
    N: int,
    eps,
    seed: int = DEFAULT_SEED,
    max_rounds: int = DEFAULT_MAX_ROUNDS,
    budget: int = DEFAULT_BUDGET,
    notion: CubeNotion = DEFAULT_NOTION,
) -> ConstructionResult:
    """Dense set with no r-cube, r strictly between (1+eps/2)log2(n) and
    (1+eps)log2(n), at inclusion probability c_n.

    Success needs an independently verified cube-free set whose realized
    density sits within three binomial standard deviations of c_n.  At desk
    scale the feasibility inequality may simply fail, and an honest failure
    (or a budget blowup, raised) is a legitimate outcome.
    """
    eps = as_fraction(eps)
    grid = GridParams(N, n)
    r = choose_r_dense(n, eps)
    if r is None:
        return ConstructionResult(
            ConstructStatus.NO_VALID_R, None, None, None,
            detail=f"no integer strictly inside ((1+eps/2)log2({n}), (1+eps)log2({n}))",
        )
    p = c_n_schedule(n, N)
    eq_ep = check_eq_ep(n, eps, N)
    extras = {
        "eq_ep_holds": eq_ep.holds,
        "eq_ep_lhs": eq_ep.lhs,
        "eq_ep_rhs": eq_ep.rhs,
    }
    if p == 0:
        # Degenerate schedule (n < N^N): the empty set is trivially cube-free.
        empty = PointSet.empty(grid)
        report = verify_construction(empty, r, notion, budget)
        cert = certificate_dict(grid, r, notion, p, seed, 0, report, extras)
        return ConstructionResult(ConstructStatus.VERIFIED, r, empty, cert,
                                  detail="degenerate schedule c_n = 0")
    config = SamplerConfig(p=p, seed=seed, max_rounds=max_rounds,
                           notion=notion, search_budget=budget)
    outcome = moser_tardos_sample(grid, r, config)
    report = verify_construction(outcome.point_set, r, notion, budget)
    cert = certificate_dict(grid, r, notion, p, seed, outcome.rounds, report, extras)
    if not (outcome.success and report.verified):
        return ConstructionResult(ConstructStatus.CUBE_PERSISTS, r, outcome.point_set, cert,
                                  detail=f"an {r}-cube persisted after {outcome.rounds} rounds")
    sigma = sqrt(float(p) * (1 - float(p)) / grid.size)
    if float(report.density) < float(p) - 3 * sigma:
        return ConstructionResult(ConstructStatus.DENSITY_MISSED, r, outcome.point_set, cert,
                                  detail=f"density {report.density} below c_n - 3 sigma")
    return ConstructionResult(ConstructStatus.VERIFIED, r, outcome.point_set, cert)


def construct_sparse_bounded_M(
    n: int,
    N: int,
    eps,
    seed: int = DEFAULT_SEED,
    max_rounds: int = DEFAULT_MAX_ROUNDS,
    budget: int = DEFAULT_BUDGET,
    notion: CubeNotion = DEFAULT_NOTION,
) -> ConstructionResult:
    """Sparse set of size at least N^((1-eps)n) with no r-cube for the fixed
    r = choose_r_sparse(eps), at inclusion probability N^(-floor(eps n)).

    The size test is an exact big-integer comparison; missing it is an
    outcome distinct from a persisting cube.
    """
    eps = as_fraction(eps)
    grid = GridParams(N, n)
    r = choose_r_sparse(eps)
    exponent = floor(eps * n)
    if exponent < 1:
        raise ValueError(f"eps*n = {eps * n} < 1 gives inclusion probability 1; increase n")
    p = Fraction(1, N ** exponent)
    config = SamplerConfig(p=p, seed=seed, max_rounds=max_rounds,
                           notion=notion, search_budget=budget)
    outcome = moser_tardos_sample(grid, r, config)
    report = verify_construction(outcome.point_set, r, notion, budget)
    extras = {
        "size_target": f"{N}^({n}*(1-{eps}))",
        "size_target_met": pow_at_least(report.cardinality, (1 - eps) * n, N),
        "exponent_chain": sparse_exponent_chain(n, N, eps, r),
    }
    cert = certificate_dict(grid, r, notion, p, seed, outcome.rounds, report, extras)
    if not (outcome.success and report.verified):
        return ConstructionResult(ConstructStatus.CUBE_PERSISTS, r, outcome.point_set, cert,
                                  detail=f"an {r}-cube persisted after {outcome.rounds} rounds")
    if not extras["size_target_met"]:
        return ConstructionResult(ConstructStatus.SIZE_MISSED, r, outcome.point_set, cert,
                                  detail=f"|S| = {report.cardinality} below the size target")
    return ConstructionResult(ConstructStatus.VERIFIED, r, outcome.point_set, cert)
