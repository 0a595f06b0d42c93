"""Affine hypercubes in grid subsets and exact maximal-dimension search.

A dimension-m affine cube is the image of the vertex set {0,1}^m under an
affine map y -> Ay + z, stored as the base z plus the m generator vectors
(columns of A).  Three nested notions are distinguished:

* VERTEX_INJECTIVE: the 2^m subset sums are pairwise distinct points;
* INDEPENDENT_GENERATORS: generators are also linearly independent over Q;
* UNIMODULAR: generators also extend to a basis of the lattice Z^n.

The search grows a cube by doubling: the current vertex set V extends by a
shift d to V u (V+d) when the translate stays inside S and misses V, which
is exactly the prefix-extension mechanism the density lemmas use.  Every
cube has a unique anchored representation (each generator with positive
leading entry, generators sorted lexicographically, base at the anchor
vertex), and shifts are enumerated in that canonical order, so the search
is exhaustive and visits each cube once.
"""

from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, NamedTuple, Optional, Sequence

from .exactmath import as_fraction
from .grid import GridParams, Point, PointSet
from .intlinalg import (
    is_primitive_system,
    pivot_index,
    rational_rank,
    reduce_against,
)

DEFAULT_BUDGET = 10 ** 8

ORACLE_GRID_CAP = 512  # the naive oracle refuses anything bigger
VERTEX_CAP = 30  # 2^m vertices must stay enumerable


class CubeNotion(enum.Enum):
    VERTEX_INJECTIVE = "vertex-injective"
    INDEPENDENT_GENERATORS = "independent-generators"
    UNIMODULAR = "unimodular"

    @classmethod
    def from_string(cls, name: str) -> "CubeNotion":
        for notion in cls:
            if name in (notion.value, notion.name, notion.name.lower()):
                return notion
        raise ValueError(f"unknown cube notion {name!r}")


DEFAULT_NOTION = CubeNotion.INDEPENDENT_GENERATORS


class SearchBudgetExceeded(RuntimeError):
    """The node budget ran out before the search could certify its answer."""

    def __init__(self, message: str, best_m: int = 0, witness: Optional["AffineCube"] = None):
        super().__init__(message)
        self.best_m = best_m
        self.witness = witness


def _leading_positive(v: Sequence[int]) -> bool:
    for x in v:
        if x > 0:
            return True
        if x < 0:
            return False
    return True  # zero vector needs no sign flip


def _add(p: Point, d: Sequence[int]) -> Point:
    return tuple(a + b for a, b in zip(p, d))


def _sub(p: Point, q: Point) -> tuple[int, ...]:
    return tuple(a - b for a, b in zip(p, q))


@dataclass(frozen=True)
class AffineCube:
    """Base point plus generator vectors; dimension m = len(generators)."""

    base: tuple[int, ...]
    generators: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self) -> None:
        for v in self.generators:
            if len(v) != len(self.base):
                raise ValueError("generator length differs from base length")

    @property
    def m(self) -> int:
        return len(self.generators)

    @property
    def dim(self) -> int:
        return len(self.base)

    def vertices(self) -> list[Point]:
        """All 2^m subset sums, ordered by subset bitmask (with duplicates
        if the cube is not vertex-injective)."""
        if self.m > VERTEX_CAP:
            raise ValueError(f"cube dimension {self.m} exceeds the vertex cap {VERTEX_CAP}")
        verts = [self.base]
        for v in self.generators:
            verts += [_add(w, v) for w in verts]
        return verts

    def is_vertex_injective(self) -> bool:
        verts = self.vertices()
        return len(set(verts)) == len(verts)

    def satisfies(self, notion: CubeNotion) -> bool:
        if not self.is_vertex_injective():
            return False
        if notion is CubeNotion.VERTEX_INJECTIVE:
            return True
        if notion is CubeNotion.INDEPENDENT_GENERATORS:
            return rational_rank(self.generators) == self.m
        return is_primitive_system(self.generators)

    def canonical(self) -> "AffineCube":
        """Flip generators to positive leading entry (moving the base to the
        anchor vertex), then sort generators lexicographically."""
        base = list(self.base)
        gens = []
        for v in self.generators:
            if not _leading_positive(v):
                base = [b + x for b, x in zip(base, v)]
                v = tuple(-x for x in v)
            gens.append(v)
        gens.sort()
        return AffineCube(tuple(base), tuple(gens))

    def sort_key(self):
        return (self.base, self.generators)

    def to_record(self, notion: CubeNotion) -> dict:
        return {
            "notion": notion.value,
            "m": self.m,
            "base": list(self.base),
            "generators": [list(v) for v in self.generators],
        }

    def canonical_line(self, notion: CubeNotion) -> str:
        """Single-line canonical text form for golden tests."""
        cube = self.canonical()
        base = ",".join(str(x) for x in cube.base)
        gens = ";".join(",".join(str(x) for x in v) for v in cube.generators)
        return f"{notion.value} m={cube.m} base=({base}) gens=[{gens}]"


def cube_vertices(cube: AffineCube) -> list[Point]:
    """Distinct subset sums, sorted; has length 2^m iff vertex-injective."""
    return sorted(set(cube.vertices()))


def is_cube_in(s: PointSet, cube: AffineCube, notion: CubeNotion = DEFAULT_NOTION) -> bool:
    """True iff the cube satisfies the notion and every vertex lies in S."""
    if cube.dim != s.grid.dim:
        raise ValueError(f"cube dimension {cube.dim} does not match grid dimension {s.grid.dim}")
    if not cube.satisfies(notion):
        return False
    tset = s.tuple_set
    return all(w in tset for w in cube.vertices())


def extend_cube(a: Sequence[int], b: Sequence[int], inner: AffineCube) -> AffineCube:
    """Lift a cube over the suffix grid to one dimension higher over the
    full grid: base a x z, first generator (b-a) x 0, rest 0 x v_i."""
    a = tuple(int(x) for x in a)
    b = tuple(int(x) for x in b)
    if len(a) != len(b):
        raise ValueError("prefixes must have equal length")
    if a == b:
        raise ValueError("prefixes must be distinct")
    if not inner.is_vertex_injective():
        raise ValueError("inner cube must be vertex-injective")
    r = len(a)
    zeros_suffix = (0,) * inner.dim
    zeros_prefix = (0,) * r
    first = _sub(b, a) + zeros_suffix
    gens = (first,) + tuple(zeros_prefix + v for v in inner.generators)
    return AffineCube(a + inner.base, gens)


class _SearchOutcome(NamedTuple):
    best_m: int
    witness: Optional[AffineCube]  # target mode: the target-dimension cube, if found
    conclusive: bool
    checks: int


class _Stop(Exception):
    pass


def _run_search(
    s: PointSet,
    notion: CubeNotion,
    target: Optional[int],
    budget: int,
    bases: Optional[Sequence[Point]] = None,
) -> _SearchOutcome:
    """Depth-first doubling search over the given top-level bases.

    target=None: exhaust the tree and report the maximal dimension with its
    first (lexicographically minimal) witness.  target=m: stop at the first
    cube of dimension exactly m.  `conclusive` is False only when the budget
    ran out before the answer was certain.
    """
    pts = s.points()
    tset = s.tuple_set
    size = len(pts)
    independent = notion is not CubeNotion.VERTEX_INJECTIVE
    unimodular = notion is CubeNotion.UNIMODULAR
    n = s.grid.dim

    best_m = 0
    best_cube = AffineCube(pts[0]) if pts else None
    found: list[Optional[AffineCube]] = [None]
    checks = 0

    if target == 0:
        return _SearchOutcome(0, best_cube, True, 0)

    def descend(z, cands, start, verts, vset, gens, reduced):
        nonlocal best_m, best_cube, checks
        m = len(gens)
        if independent and m >= n:
            return
        # Doubling can multiply |V| by at most size // |V| in total.
        max_extra = (size // len(verts)).bit_length() - 1
        if target is None:
            if m + max_extra <= best_m:
                return
        elif m + max_extra < target:
            return
        for idx in range(start, len(cands)):
            if target is not None and m + (len(cands) - idx) < target:
                break  # shifts are strictly increasing; not enough remain
            checks += 1
            if checks > budget:
                raise _Stop
            d = cands[idx]
            new = []
            ok = True
            for v in verts:
                w = _add(v, d)
                if w not in tset or w in vset:
                    ok = False
                    break
                new.append(w)
            if not ok:
                continue
            red = None
            if independent:
                red = reduce_against(d, reduced)
                if red is None:
                    continue
                if unimodular and not is_primitive_system(gens + [d]):
                    continue
            gens.append(d)
            if len(gens) > best_m:
                best_m = len(gens)
                best_cube = AffineCube(z, tuple(gens))
                if target is not None and best_m == target:
                    found[0] = best_cube
                    gens.pop()
                    raise _Stop
            verts.extend(new)
            vset.update(new)
            if independent:
                reduced.append((red, pivot_index(red)))
            descend(z, cands, idx + 1, verts, vset, gens, reduced)
            if independent:
                reduced.pop()
            del verts[-len(new):]
            vset.difference_update(new)
            gens.pop()

    base_list = list(bases) if bases is not None else pts
    try:
        for z in base_list:
            cands = sorted(
                d for p in pts if p != z and _leading_positive(d := _sub(p, z))
            )
            descend(z, cands, 0, [z], {z}, [], [])
    except _Stop:
        if found[0] is not None:
            return _SearchOutcome(best_m, found[0], True, checks)
        return _SearchOutcome(best_m, None, False, checks)
    witness = found[0] if target is not None else best_cube
    return _SearchOutcome(best_m, witness, True, checks)


def _search_chunk_worker(payload) -> tuple[int, Optional[AffineCube], bool, int]:
    base, dim, indices, notion_value, target, budget, chunk = payload
    grid = GridParams(base, dim)
    s = PointSet.from_indices(grid, indices)
    out = _run_search(s, CubeNotion(notion_value), target, budget, bases=chunk)
    return (out.best_m, out.witness, out.conclusive, out.checks)


def _search_parallel(s, notion, target, budget, threads) -> list[_SearchOutcome]:
    pts = s.points()
    chunks = [pts[i::threads] for i in range(threads)]
    payloads = [
        (s.grid.base, s.grid.dim, tuple(sorted(s.indices)), notion.value, target, budget, chunk)
        for chunk in chunks
        if chunk
    ]
    with ProcessPoolExecutor(max_workers=len(payloads)) as pool:
        raw = list(pool.map(_search_chunk_worker, payloads))
    return [_SearchOutcome(*r) for r in raw]


def _best_of(outcomes: Iterable[_SearchOutcome]) -> tuple[int, Optional[AffineCube]]:
    best_m, best_cube = -1, None
    for out in outcomes:
        if out.witness is None:
            continue
        if out.witness.m > best_m or (
            out.witness.m == best_m and out.witness.sort_key() < best_cube.sort_key()
        ):
            best_m, best_cube = out.witness.m, out.witness
    return best_m, best_cube


def find_cube(
    s: PointSet,
    m: int,
    notion: CubeNotion = DEFAULT_NOTION,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> Optional[AffineCube]:
    """Canonical-form witness of dimension exactly m inside S, or None.

    The search is exhaustive: None means no such cube exists.  Running out
    of budget raises SearchBudgetExceeded instead (never reported as None).
    With threads > 1 the top-level bases are split across processes and each
    worker gets the full budget; the merged answer equals the sequential one
    whenever the search completes.
    """
    if m < 0:
        raise ValueError(f"cube dimension must be >= 0, got {m}")
    if len(s) == 0:
        return None
    if m > VERTEX_CAP or len(s) < 2 ** m:
        return None
    if notion is not CubeNotion.VERTEX_INJECTIVE and m > s.grid.dim:
        return None
    if threads <= 1:
        out = _run_search(s, notion, m, budget)
        if out.witness is not None:
            return out.witness
        if out.conclusive:
            return None
        raise SearchBudgetExceeded(
            f"budget {budget} exhausted before certifying a {m}-cube answer",
            best_m=out.best_m,
        )
    outcomes = _search_parallel(s, notion, m, budget, threads)
    _, cube = _best_of(outcomes)
    if cube is not None and cube.m == m:
        return cube
    if all(out.conclusive for out in outcomes):
        return None
    raise SearchBudgetExceeded(
        f"budget {budget} exhausted before certifying a {m}-cube answer",
        best_m=max(out.best_m for out in outcomes),
    )


def m_value(
    s: PointSet,
    notion: CubeNotion = DEFAULT_NOTION,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> tuple[int, AffineCube]:
    """The largest cube dimension inside S with a canonical witness."""
    if len(s) == 0:
        raise ValueError("M(S) is undefined for the empty set")
    if threads <= 1:
        out = _run_search(s, notion, None, budget)
        if not out.conclusive:
            raise SearchBudgetExceeded(
                f"budget {budget} exhausted before the maximum was certified",
                best_m=out.best_m,
                witness=out.witness,
            )
        return out.best_m, out.witness
    outcomes = _search_parallel(s, notion, None, budget, threads)
    best_m, cube = _best_of(outcomes)
    if all(out.conclusive for out in outcomes):
        return best_m, cube
    raise SearchBudgetExceeded(
        f"budget {budget} exhausted before the maximum was certified",
        best_m=best_m,
        witness=cube,
    )


def m_value_oracle_all(s: PointSet) -> dict[CubeNotion, int]:
    """Ground-truth M(S) for every notion by naive anchored enumeration.

    For each dimension m, every (base, generator-set) pair with the base in
    S and generators drawn from S - base is tried; no search-tree pruning,
    no shift ordering.  Each cube has an anchor vertex from which all its
    generators have positive leading entry (flipping a generator negates it
    and moves the base, preserving the vertex set, the rank, and the Smith
    form), so anchored enumeration misses nothing.
    """
    if s.grid.size > ORACLE_GRID_CAP:
        raise ValueError(f"oracle instance too large: {s.grid.size} > {ORACLE_GRID_CAP}")
    if len(s) == 0:
        raise ValueError("M(S) is undefined for the empty set")
    pts = s.points()
    tset = s.tuple_set
    diffs_of = {
        z: sorted(d for p in pts if p != z and _leading_positive(d := _sub(p, z)))
        for z in pts
    }
    results = {notion: 0 for notion in CubeNotion}
    alive = set(CubeNotion)
    m = 1
    while alive and 2 ** m <= len(pts):
        found: set[CubeNotion] = set()
        for z in pts:
            for combo in combinations(diffs_of[z], m):
                verts = [z]
                ok = True
                for d in combo:
                    new = [_add(v, d) for v in verts]
                    if any(w not in tset for w in new):
                        ok = False
                        break
                    verts += new
                if not ok or len(set(verts)) != 2 ** m:
                    continue
                found.add(CubeNotion.VERTEX_INJECTIVE)
                if CubeNotion.INDEPENDENT_GENERATORS in alive or CubeNotion.UNIMODULAR in alive:
                    if rational_rank(combo) == m:
                        found.add(CubeNotion.INDEPENDENT_GENERATORS)
                        if CubeNotion.UNIMODULAR in alive and is_primitive_system(combo):
                            found.add(CubeNotion.UNIMODULAR)
                if alive <= found:
                    break
            if alive <= found:
                break
        for notion in found & alive:
            results[notion] = m
        alive &= found  # a notion absent at m stays absent above (monotone)
        m += 1
    return results


def m_value_oracle(s: PointSet, notion: CubeNotion = DEFAULT_NOTION) -> int:
    """Independent brute-force value of M(S); see m_value_oracle_all."""
    return m_value_oracle_all(s)[notion]


def f_exhaustive(
    N: int,
    n: int,
    c,
    notion: CubeNotion = DEFAULT_NOTION,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
    budget: int = DEFAULT_BUDGET,
) -> int:
    """Exact f_N(n, c): the minimum of M(S) over subsets of density >= c.

    Exhaustive mode enumerates every qualifying subset (grid size capped at
    16 cells); pass `samples` for a seeded sampled variant (an upper
    estimate, not exact).  A subset qualifies iff |S| >= ceil(c * N^n).
    """
    import math as _math
    import random as _random

    c = as_fraction(c)
    if not 0 < c <= 1:
        raise ValueError(f"density threshold must lie in (0, 1], got {c}")
    grid = GridParams(N, n)
    cells = grid.size
    k_min = max(1, _math.ceil(c * cells))
    if samples is None:
        if cells > 16:
            raise ValueError(
                f"exhaustive mode handles at most 16 cells, got {cells}; pass samples="
            )
        all_pts = list(grid.points())
        mu: Optional[int] = None
        for k in range(k_min, cells + 1):
            for combo in combinations(all_pts, k):
                sub = PointSet(grid, combo)
                if mu is not None and find_cube(sub, mu, notion, budget=budget) is not None:
                    continue  # M(sub) >= mu, cannot lower the minimum
                mu = m_value(sub, notion, budget=budget)[0]
                if mu == 0:
                    return 0
        return mu if mu is not None else 0
    if samples < 1:
        raise ValueError("sample count must be positive")
    if cells > (1 << 24):
        raise ValueError("grid too large to sample point sets from")
    rng = _random.Random(seed)
    mu = None
    for _ in range(samples):
        picked = rng.sample(range(cells), k_min)
        sub = PointSet.from_indices(grid, picked)
        if mu is not None and find_cube(sub, mu, notion, budget=budget) is not None:
            continue
        mu = m_value(sub, notion, budget=budget)[0]
        if mu == 0:
            return 0
    return mu if mu is not None else 0
