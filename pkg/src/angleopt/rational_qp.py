"""Exact extremization of rational quadratic forms over the probability simplex.

Maximize or minimize f(x) = (1/2) x^T A x over the standard simplex
{x >= 0, sum x = 1} for a symmetric rational matrix A, entirely in exact
rational arithmetic.  Every extremum lies in the relative interior of some
face {x_i = 0 for i in face} and is a stationary point of f restricted to
that face, i.e. solves the bordered system

    A_S x_S = c * 1,   1^T x_S = 1        (S = supported coordinates)

for some scalar c.  On the solution set of that system f is constant
(f = c/2), so enumerating all 2^m - 1 faces, solving each system exactly,
and keeping solutions interior to their face inspects every candidate
value.  Vertices are the singleton faces, so the enumeration is complete
even when no interior stationary point exists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np

from .errors import DomainError, StructureError

__all__ = [
    "RationalSymMatrix",
    "SimplexWitness",
    "enumerate_face_candidates",
    "quadratic_value",
    "simplex_extremum",
    "support_weight_optimum",
    "verify_witness",
]


def _as_fraction(v) -> Fraction:
    if isinstance(v, bool):
        raise StructureError(f"matrix entries must be rational numbers, got {v!r}")
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError) as exc:
            raise StructureError(f"cannot parse rational {v!r}") from exc
    raise StructureError(f"matrix entries must be exact rationals, got {v!r}")


class RationalSymMatrix:
    """Symmetric matrix of exact rationals.

    Entries may be ints, ``Fraction`` instances, or "num/den" strings.
    Asymmetry or non-squareness raises ``StructureError``.
    """

    __slots__ = ("entries",)

    def __init__(self, rows):
        entries = tuple(tuple(_as_fraction(v) for v in row) for row in rows)
        m = len(entries)
        if m == 0 or any(len(row) != m for row in entries):
            raise StructureError("matrix must be square and nonempty")
        for i in range(m):
            for j in range(i + 1, m):
                if entries[i][j] != entries[j][i]:
                    raise StructureError(
                        f"matrix is not symmetric at ({i}, {j}): "
                        f"{entries[i][j]} != {entries[j][i]}"
                    )
        self.entries = entries

    @property
    def order(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalSymMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def to_json_obj(self) -> list[list[str]]:
        return [[str(v) for v in row] for row in self.entries]

    @classmethod
    def from_json_obj(cls, obj) -> "RationalSymMatrix":
        if not isinstance(obj, list):
            raise StructureError("matrix JSON must be a 2-D array")
        return cls(obj)


@dataclass(frozen=True)
class SimplexWitness:
    """An exact extremum certificate: the point, its value, and its face.

    ``face`` lists the coordinates pinned to zero; ``multiplier`` is the
    stationarity scalar c with A_S x_S = c * 1 on the support (f = c/2 at
    the witness whenever the support has more than one coordinate).
    """

    x: tuple[Fraction, ...]
    value: Fraction
    face: tuple[int, ...]
    multiplier: Fraction | None = None

    def to_json_obj(self) -> dict:
        return {
            "x": [str(v) for v in self.x],
            "value": str(self.value),
            "face": list(self.face),
            "multiplier": None if self.multiplier is None else str(self.multiplier),
            "x_decimal": [float(v) for v in self.x],
            "value_decimal": float(self.value),
        }


def quadratic_value(A: RationalSymMatrix, x) -> Fraction:
    """f(x) = (1/2) x^T A x, exactly."""
    xs = [_as_fraction(v) if not isinstance(v, Fraction) else v for v in x]
    if len(xs) != A.order:
        raise DomainError(f"point has length {len(xs)}, matrix order is {A.order}")
    total = Fraction(0)
    for i, xi in enumerate(xs):
        if xi == 0:
            continue
        row = A.entries[i]
        total += xi * sum((row[j] * xj for j, xj in enumerate(xs) if xj != 0), Fraction(0))
    return total / 2


def _solve_linear(rows: list[list[Fraction]], rhs: list[Fraction]):
    """Exact Gaussian elimination for a square-or-rectangular system.

    Returns ``None`` if inconsistent, else ``(particular, null_basis)``
    where ``null_basis`` spans the homogeneous solutions.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    aug = [list(rows[i]) + [rhs[i]] for i in range(m)]
    pivot_cols: list[int] = []
    r = 0
    for col in range(n):
        pivot = next((i for i in range(r, m) if aug[i][col] != 0), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        inv = 1 / aug[r][col]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(m):
            if i != r and aug[i][col] != 0:
                factor = aug[i][col]
                aug[i] = [a - factor * b for a, b in zip(aug[i], aug[r])]
        pivot_cols.append(col)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if aug[i][n] != 0:
            return None
    particular = [Fraction(0)] * n
    for row_idx, col in enumerate(pivot_cols):
        particular[col] = aug[row_idx][n]
    free_cols = [c for c in range(n) if c not in pivot_cols]
    null_basis = []
    for free in free_cols:
        vec = [Fraction(0)] * n
        vec[free] = Fraction(1)
        for row_idx, col in enumerate(pivot_cols):
            vec[col] = -aug[row_idx][free]
        null_basis.append(vec)
    return particular, null_basis


def _strict_interior_point(x0: list[Fraction], directions: list[list[Fraction]]):
    """Rational t with x0 + sum_j t_j * directions[j] > 0 componentwise.

    Fourier-Motzkin elimination over strict linear inequalities; returns the
    parameter vector t (midpoints of the surviving intervals, so the choice
    is deterministic) or ``None`` when the open polyhedron is empty.
    """
    k = len(directions)
    # Each constraint: const + sum_j coef_j t_j > 0.
    cons = []
    for i, c0 in enumerate(x0):
        coefs = tuple(directions[j][i] for j in range(k))
        cons.append((coefs, c0))

    def solve(cons: list, nvars: int):
        if nvars == 0:
            return [] if all(const > 0 for _coefs, const in cons) else None
        lowers, uppers, rest = [], [], []
        for coefs, const in cons:
            a = coefs[nvars - 1]
            head = coefs[: nvars - 1]
            if a > 0:
                # t > -(const + head . t') / a
                lowers.append((tuple(-c / a for c in head), -const / a))
            elif a < 0:
                uppers.append((tuple(-c / a for c in head), -const / a))
            else:
                rest.append((head, const))
        combined = list(rest)
        for lc, lconst in lowers:
            for uc, uconst in uppers:
                # upper bound - lower bound > 0
                combined.append(
                    (tuple(u - l for u, l in zip(uc, lc)), uconst - lconst)
                )
        partial = solve(combined, nvars - 1)
        if partial is None:
            return None
        lo = None
        for lc, lconst in lowers:
            v = lconst + sum((c * t for c, t in zip(lc, partial)), Fraction(0))
            lo = v if lo is None or v > lo else lo
        hi = None
        for uc, uconst in uppers:
            v = uconst + sum((c * t for c, t in zip(uc, partial)), Fraction(0))
            hi = v if hi is None or v < hi else hi
        if lo is not None and hi is not None:
            if lo >= hi:
                return None
            t = (lo + hi) / 2
        elif lo is not None:
            t = lo + 1
        elif hi is not None:
            t = hi - 1
        else:
            t = Fraction(0)
        return partial + [t]

    return solve(cons, k)


def _face_candidate(A: RationalSymMatrix, support: tuple[int, ...]):
    """Stationary point of f on the face supported by ``support``, if the
    face's relative interior contains one."""
    m = A.order
    s = len(support)
    # Bordered system in (x_S, c): A_S x_S - c 1 = 0, 1^T x_S = 1.
    rows = []
    for i in support:
        rows.append([A.entries[i][j] for j in support] + [Fraction(-1)])
    rows.append([Fraction(1)] * s + [Fraction(0)])
    rhs = [Fraction(0)] * s + [Fraction(1)]
    solved = _solve_linear(rows, rhs)
    if solved is None:
        return None
    particular, null_basis = solved
    if not null_basis:
        x_s = particular[:s]
        mult = particular[s]
        if any(v <= 0 for v in x_s):
            return None
    else:
        dirs = [vec[:s] for vec in null_basis]
        t = _strict_interior_point(particular[:s], dirs)
        if t is None:
            return None
        x_s = [
            particular[i]
            + sum((t[j] * dirs[j][i] for j in range(len(dirs))), Fraction(0))
            for i in range(s)
        ]
        mult = particular[s] + sum(
            (t[j] * null_basis[j][s] for j in range(len(null_basis))), Fraction(0)
        )
    x = [Fraction(0)] * m
    for idx, i in enumerate(support):
        x[i] = x_s[idx]
    face = tuple(i for i in range(m) if i not in support)
    return SimplexWitness(
        x=tuple(x), value=quadratic_value(A, x), face=face, multiplier=mult
    )


def enumerate_face_candidates(A: RationalSymMatrix) -> list[SimplexWitness]:
    """Stationary candidates of every face of the simplex, exact.

    Each witness lies strictly inside its face; distinct faces with a
    common stationary value each contribute once.  The global extremum of
    f over the simplex is the best/worst value in this list.
    """
    if not isinstance(A, RationalSymMatrix):
        A = RationalSymMatrix(A)
    m = A.order
    out = []
    for size in range(1, m + 1):
        for support in combinations(range(m), size):
            cand = _face_candidate(A, support)
            if cand is not None:
                out.append(cand)
    return out


def _norm_sense(sense: str) -> str:
    try:
        s = sense.strip().lower()
    except AttributeError:
        raise DomainError(f"sense must be 'max' or 'min', got {sense!r}") from None
    if s not in ("max", "min"):
        raise DomainError(f"sense must be 'max' or 'min', got {sense!r}")
    return s


def simplex_extremum(A: RationalSymMatrix, sense: str = "max") -> SimplexWitness:
    """Exact extremum of f(x) = (1/2) x^T A x over the probability simplex.

    Ties are broken deterministically: best value, then fewest pinned
    coordinates, then lexicographically smallest point.
    """
    if not isinstance(A, RationalSymMatrix):
        A = RationalSymMatrix(A)
    s = _norm_sense(sense)
    candidates = enumerate_face_candidates(A)
    # Vertices always solve their (singleton) bordered system, so this
    # cannot be empty.
    def key(w: SimplexWitness):
        primary = w.value if s == "max" else -w.value
        return (primary, -len(w.face), tuple(-v for v in w.x))

    return max(candidates, key=key)


@lru_cache(maxsize=32)
def _compositions_matrix(total: int, parts: int) -> np.ndarray:
    """All nonnegative integer vectors of length ``parts`` summing to
    ``total``, as a read-only int64 array (lexicographic order)."""
    if parts == 1:
        out = np.array([[total]], dtype=np.int64)
    else:
        blocks = []
        for first in range(total + 1):
            rest = _compositions_matrix(total - first, parts - 1)
            col = np.full((rest.shape[0], 1), first, dtype=np.int64)
            blocks.append(np.hstack([col, rest]))
        out = np.vstack(blocks)
    out.setflags(write=False)
    return out


def verify_witness(
    A: RationalSymMatrix, witness: SimplexWitness, sense: str = "max", grid_res: int = 30
) -> bool:
    """Check that no denominator-``grid_res`` grid point beats the witness.

    Evaluates f exactly (integer arithmetic) on every x = m/grid_res with
    m a composition of grid_res, and compares against ``witness.value``
    with exact rationals.  Returns ``True`` when the witness dominates.
    """
    if not isinstance(A, RationalSymMatrix):
        A = RationalSymMatrix(A)
    s = _norm_sense(sense)
    if not isinstance(grid_res, int) or grid_res < 1:
        raise DomainError(f"grid_res must be a positive integer, got {grid_res!r}")
    m = A.order
    denom_lcm = 1
    for row in A.entries:
        for v in row:
            denom_lcm = denom_lcm * v.denominator // math.gcd(denom_lcm, v.denominator)
    scaled = [[v * denom_lcm for v in row] for row in A.entries]
    max_abs = max((abs(int(v)) for row in scaled for v in row), default=0)
    comps = _compositions_matrix(grid_res, m)
    # f(m/g) = (m^T Ascaled m) / (2 g^2 L); compare numerators exactly.
    if max_abs * (grid_res**2) * m * m < 2**62:
        Ai = np.array([[int(v) for v in row] for row in scaled], dtype=np.int64)
        vals = np.einsum("ij,jk,ik->i", comps, Ai, comps)
        best = int(vals.max() if s == "max" else vals.min())
    else:
        Ai_py = [[int(v) for v in row] for row in scaled]
        best = None
        for row_m in comps.tolist():
            v = sum(
                row_m[i] * sum(Ai_py[i][j] * row_m[j] for j in range(m)) for i in range(m)
            )
            if best is None or (v > best if s == "max" else v < best):
                best = v
    best_value = Fraction(best, 2 * grid_res * grid_res * denom_lcm)
    if s == "max":
        return best_value <= witness.value
    return best_value >= witness.value


def support_weight_optimum(config, orth_tol: float = 1e-9) -> SimplexWitness:
    """Best weights on a fixed support for the orthogonality-indicator energy.

    Builds the 0/1 perpendicularity matrix of the support atoms (exact for
    frame-tagged configurations, |dot| <= orth_tol otherwise) and maximizes
    (1/2) x^T A x over probability weights x.  Antipodal atoms are allowed
    (they simply never interact); atoms that coincide as points of the
    sphere must be merged by the caller first.
    """
    from .measures import LineConfig  # local import to avoid a module cycle

    if not isinstance(config, LineConfig):
        raise StructureError("support must be given as a LineConfig")
    n = config.natoms
    if config.frame_tag is not None:
        seen = {}
        for idx, tag in enumerate(config.frame_tag):
            if tag in seen:
                raise StructureError(
                    f"atoms {seen[tag]} and {idx} coincide; merge them first"
                )
            seen[tag] = idx
        rows = [
            [
                Fraction(0)
                if i == j or config.frame_tag[i][0] == config.frame_tag[j][0]
                else Fraction(1)
                for j in range(n)
            ]
            for i in range(n)
        ]
    else:
        X = config.points_matrix()
        G = X @ X.T
        rows = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                g = G[i, j]
                if g >= 1.0 - 1e-12:
                    raise StructureError(f"atoms {i} and {j} coincide; merge them first")
                if abs(g) <= orth_tol:
                    rows[i][j] = rows[j][i] = Fraction(1)
    A = RationalSymMatrix(rows)
    return simplex_extremum(A, "max")
