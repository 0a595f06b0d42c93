"""Evaluation codes from lattice polytopes over prime fields.

A polytope P inside [0, q-2]^n defines a code of block length (q-1)^n: each
lattice point u of P contributes the row (t^u for t in the torus), where the
torus is all points with nonzero coordinates and t^u is the monomial product
t_1^{u_1} ... t_n^{u_n} mod q.  Geometry is exact: hull membership is decided
by rational phase-1 simplex pivoting, never floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

from .cubes import CubeNotion, DEFAULT_BUDGET, DEFAULT_NOTION, m_value
from .grid import GridParams, Point, PointSet

BOX_CAP = 10 ** 7  # enumerable bounding-box volume
BLOCK_CAP = 10 ** 6  # largest torus we evaluate on
MESSAGE_CAP = 10 ** 7  # exhaustive minimum-distance enumeration


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q < 4:
        return True
    if q % 2 == 0:
        return False
    d = 3
    while d * d <= q:
        if q % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    """Arithmetic mod a prime q, elements canonically in [0, q)."""

    q: int

    def __post_init__(self) -> None:
        if not is_prime(self.q):
            raise ValueError(f"{self.q} is not prime")

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.q

    def neg(self, a: int) -> int:
        return (-a) % self.q

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.q

    def inv(self, a: int) -> int:
        if a % self.q == 0:
            raise ZeroDivisionError("no inverse of 0")
        return pow(a, self.q - 2, self.q)

    def pow(self, a: int, e: int) -> int:
        return pow(a, e, self.q)


def _in_hull(x: Sequence[int], vertices: Sequence[Point]) -> bool:
    """Exact feasibility of x = sum(lam_i v_i), sum(lam_i) = 1, lam >= 0.

    Phase-1 simplex over Fractions with Bland's rule (no cycling); the point
    is in the hull iff the artificial objective reaches zero.
    """
    k = len(vertices)
    m = len(x) + 1
    rows: list[list[Fraction]] = []
    for i in range(len(x)):
        rows.append([Fraction(v[i]) for v in vertices] + [Fraction(0)] * m + [Fraction(x[i])])
    rows.append([Fraction(1)] * k + [Fraction(0)] * m + [Fraction(1)])
    for i in range(m):
        if rows[i][-1] < 0:
            rows[i] = [-v for v in rows[i]]
        rows[i][k + i] = Fraction(1)
    basis = list(range(k, k + m))
    cost = [Fraction(0)] * k + [Fraction(1)] * m
    # Reduced costs for the artificial basis: z_j = sum_i rows[i][j] - cost_j.
    z = [sum(rows[i][j] for i in range(m)) - cost[j] for j in range(k + m)]
    obj = sum(rows[i][-1] for i in range(m))
    while True:
        enter = next((j for j in range(k + m) if z[j] > 0), None)  # Bland
        if enter is None:
            break
        leave = None
        best: Optional[Fraction] = None
        for i in range(m):
            if rows[i][enter] > 0:
                ratio = rows[i][-1] / rows[i][enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            break  # cannot happen: phase-1 objective is bounded below
        piv = rows[leave][enter]
        rows[leave] = [v / piv for v in rows[leave]]
        for i in range(m):
            if i != leave and rows[i][enter]:
                f = rows[i][enter]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[leave])]
        f = z[enter]
        z = [a - f * b for a, b in zip(z, rows[leave][:-1])]
        obj -= f * rows[leave][-1]
        basis[leave] = enter
    return obj == 0


class LatticePolytope:
    """Integral polytope given by a nonempty vertex list; lattice points are
    the integer points of the convex hull of those vertices."""

    __slots__ = ("dim", "vertices", "_points")

    def __init__(self, vertices: Sequence[Sequence[int]]):
        verts = tuple(tuple(int(x) for x in v) for v in vertices)
        if not verts:
            raise ValueError("polytope needs at least one vertex")
        dim = len(verts[0])
        if any(len(v) != dim for v in verts):
            raise ValueError("vertices have mixed dimensions")
        self.dim = dim
        self.vertices = verts
        self._points: Optional[tuple[Point, ...]] = None

    def __repr__(self) -> str:
        return f"LatticePolytope(dim={self.dim}, vertices={len(self.vertices)})"

    def bounding_box(self) -> tuple[tuple[int, int], ...]:
        return tuple(
            (min(v[i] for v in self.vertices), max(v[i] for v in self.vertices))
            for i in range(self.dim)
        )

    def lattice_points(self) -> tuple[Point, ...]:
        if self._points is None:
            box = self.bounding_box()
            volume = 1
            for lo, hi in box:
                volume *= hi - lo + 1
            if volume > BOX_CAP:
                raise ValueError(f"bounding box volume {volume} exceeds cap {BOX_CAP}")
            vset = set(self.vertices)
            pts = []
            for p in product(*(range(lo, hi + 1) for lo, hi in box)):
                if p in vset or _in_hull(p, self.vertices):
                    pts.append(p)
            self._points = tuple(sorted(pts))
        return self._points


def lattice_points(p: LatticePolytope) -> list[Point]:
    """Integer points of the convex hull, lexicographically sorted."""
    return list(p.lattice_points())


def _gf_rank(matrix: Sequence[Sequence[int]], q: int) -> int:
    rows = [list(r) for r in matrix]
    ncols = len(rows[0]) if rows else 0
    rank = 0
    col = 0
    while rank < len(rows) and col < ncols:
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] % q), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], q - 2, q)
        rows[rank] = [(x * inv) % q for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] % q:
                f = rows[i][col]
                rows[i] = [(a - f * b) % q for a, b in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


@dataclass(frozen=True)
class ToricCode:
    field: PrimeField
    polytope: LatticePolytope
    monomials: tuple[Point, ...]  # exponent vectors, one per matrix row
    matrix: tuple[tuple[int, ...], ...]
    block_length: int

    @property
    def dimension(self) -> int:
        return len(self.monomials)


def build_code(p: LatticePolytope, q: int) -> ToricCode:
    """Generator matrix of the evaluation code of P over F_q.

    Rows follow the lex-sorted lattice points of P; columns follow the
    lex-sorted torus points of [1, q-1]^n, so the matrix is reproducible.
    """
    field = PrimeField(q)
    n = p.dim
    pts = p.lattice_points()
    for u in pts:
        if any(not 0 <= x <= q - 2 for x in u):
            raise ValueError(f"lattice point {u} outside the box [0, {q - 2}]^{n}")
    block = (q - 1) ** n
    if block > BLOCK_CAP:
        raise ValueError(f"block length {block} exceeds cap {BLOCK_CAP}")
    torus = list(product(range(1, q), repeat=n))
    matrix = tuple(
        tuple(_eval_monomial(u, t, q) for t in torus)
        for u in pts
    )
    if _gf_rank(matrix, q) != len(pts):
        raise ArithmeticError("evaluation matrix lost rank; polytope/field mismatch")
    return ToricCode(field, p, tuple(pts), matrix, block)


def _eval_monomial(u: Point, t: Point, q: int) -> int:
    val = 1
    for ui, ti in zip(u, t):
        val = (val * pow(ti, ui, q)) % q
    return val


def _min_weight_scan(matrix, q: int, first_values: Sequence[int]) -> int:
    """Minimum Hamming weight over nonzero messages whose first symbol is in
    first_values; incremental partial sums, weight count aborts at the
    current best."""
    k = len(matrix)
    block = len(matrix[0])
    best = block + 1

    def weight_capped(vec, cap):
        w = 0
        for x in vec:
            if x:
                w += 1
                if w >= cap:
                    return w
        return w

    def rec(i, partial, nonzero):
        nonlocal best
        if i == k:
            if nonzero:
                w = weight_capped(partial, best)
                if w < best:
                    best = w
            return
        values = first_values if i == 0 else range(q)
        for m_i in values:
            if m_i == 0:
                rec(i + 1, partial, nonzero)
            else:
                row = matrix[i]
                rec(i + 1, [(a + m_i * b) % q for a, b in zip(partial, row)], True)

    rec(0, [0] * block, False)
    return best


def _dmin_worker(payload):
    matrix, q, first_values = payload
    return _min_weight_scan(matrix, q, first_values)


def minimum_distance(code: ToricCode, threads: int = 1) -> int:
    """Exhaustive minimum Hamming distance of the code.

    Enumerates all q^k - 1 nonzero messages; with threads > 1 the message
    space splits by the first symbol and the minima merge deterministically.
    """
    q = code.field.q
    k = code.dimension
    if q ** k > MESSAGE_CAP:
        raise ValueError(f"message space {q}^{k} exceeds cap {MESSAGE_CAP}")
    if threads <= 1:
        return _min_weight_scan(code.matrix, q, range(q))
    from concurrent.futures import ProcessPoolExecutor

    values = list(range(q))
    chunks = [values[i::threads] for i in range(threads)]
    payloads = [(code.matrix, q, chunk) for chunk in chunks if chunk]
    with ProcessPoolExecutor(max_workers=len(payloads)) as pool:
        return min(pool.map(_dmin_worker, payloads))


@dataclass(frozen=True)
class CodeStats:
    block_length: int
    dimension: int
    min_distance: int
    relative_min_distance: Fraction
    information_rate: Fraction
    max_cube_dim: int


def code_stats(
    p: LatticePolytope,
    q: int,
    notion: CubeNotion = DEFAULT_NOTION,
    threads: int = 1,
    budget: int = DEFAULT_BUDGET,
) -> CodeStats:
    """All six statistics of the code of P over F_q.

    The cube dimension is computed on the lattice-point set of P viewed
    inside the grid [q-1]^n.
    """
    code = build_code(p, q)
    dmin = minimum_distance(code, threads=threads)
    pts = PointSet(GridParams(q - 1, p.dim), p.lattice_points())
    m, _ = m_value(pts, notion, budget=budget)
    return CodeStats(
        block_length=code.block_length,
        dimension=code.dimension,
        min_distance=dmin,
        relative_min_distance=Fraction(dmin, code.block_length),
        information_rate=Fraction(code.dimension, code.block_length),
        max_cube_dim=m,
    )


def family_report(entries: Sequence[tuple[LatticePolytope, int]], notion: CubeNotion = DEFAULT_NOTION) -> list[dict]:
    """Trend table over a finite list of (polytope, q) pairs.

    One row per entry: ambient dimension, rate, relative distance, cube
    dimension, and the entropy term log_{q-1}(dimension)/n.  No convergence
    claims; this is finite-prefix reporting only.
    """
    from .grid import entropy_profile

    rows = []
    for poly, q in entries:
        stats = code_stats(poly, q, notion)
        values, _ = entropy_profile([(poly.dim, stats.dimension)], q - 1)
        rows.append(
            {
                "q": q,
                "n": poly.dim,
                "information_rate": str(stats.information_rate),
                "relative_min_distance": str(stats.relative_min_distance),
                "max_cube_dim": stats.max_cube_dim,
                "entropy_term": float(values[0]),
            }
        )
    return rows


def parse_polytope(text: str) -> tuple[int, LatticePolytope]:
    """Parse the polytope text format: header "q n", one vertex per line."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty polytope file")
    header = lines[0].split()
    if len(header) != 2:
        raise ValueError(f"header must be 'q n', got {lines[0]!r}")
    try:
        q, n = int(header[0]), int(header[1])
    except ValueError as exc:
        raise ValueError(f"header must be two integers, got {lines[0]!r}") from exc
    if len(lines) < 2:
        raise ValueError("polytope file lists no vertices")
    seen = set()
    verts = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != n:
            raise ValueError(f"expected {n} coordinates, got {ln!r}")
        try:
            v = tuple(int(x) for x in parts)
        except ValueError as exc:
            raise ValueError(f"non-integer coordinate in {ln!r}") from exc
        if v in seen:
            raise ValueError(f"duplicate vertex line {ln!r}")
        seen.add(v)
        verts.append(v)
    return q, LatticePolytope(verts)


def format_polytope(q: int, p: LatticePolytope) -> str:
    lines = [f"{q} {p.dim}"]
    lines.extend(" ".join(str(x) for x in v) for v in p.vertices)
    return "\n".join(lines) + "\n"
