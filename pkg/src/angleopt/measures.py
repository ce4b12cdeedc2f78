"""Finitely supported measures on spheres and their pairwise-angle energies.

A ``LineConfig`` is a weighted atomic measure mu = sum_i w_i * delta_{x_i}
on S^d.  The central quantities are

    bilinear(mu, nu, alpha) = sum_{i,j} w_i v_j * kernel(x_i, y_j, alpha)
    energy(mu, alpha)       = bilinear(mu, mu, alpha) / 2

Every kernel here is invariant under x -> -x, so all energies are really
functionals of the induced measure on projective space; ``equivalent``
decides equality of two configurations up to that identification and a
global rotation.

Configurations supported on the standard signed basis {+-e_i} carry a
``frame_tag`` and their kernel values are exactly 0 or 1, so energies of
such configurations are returned as exact ``Fraction`` values for every
alpha (finite or not).
"""

from __future__ import annotations

import json
import math
import numbers
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from . import geometry
from .errors import DimensionMismatchError, DomainError, StructureError
from .geometry import ALPHA_INFINITY, DEFAULT_ORTH_TOL, UnitVector, check_alpha

__all__ = [
    "FrameConfig",
    "LineConfig",
    "WeightMode",
    "bilinear",
    "conjectured_maximizer",
    "conjectured_maximizer_weighted",
    "energy",
    "equivalent",
    "load_config",
    "save_config",
    "uniform_basis_splits",
    "uniform_circle_energy",
    "uniform_circle_energy_quadrature",
]

#: Allowed deviation of a probability configuration's total mass from 1.
MASS_TOL = 1e-12

#: Coordinate magnitudes below this count as zero during antipodal folding.
FOLD_ZERO_TOL = 1e-12


class WeightMode(str, Enum):
    """How atom weights are interpreted.

    PROBABILITY: nonnegative weights summing to 1 (a probability measure).
    COUNTING: positive integer weights (a multiset of lines, mass = count).
    """

    PROBABILITY = "probability"
    COUNTING = "counting"


def _as_fraction(w) -> Fraction:
    if isinstance(w, bool):
        raise StructureError(f"weight must be a number, got {w!r}")
    if isinstance(w, Fraction):
        return w
    if isinstance(w, int):
        return Fraction(w)
    if isinstance(w, float):
        if not math.isfinite(w):
            raise StructureError(f"weight must be finite, got {w!r}")
        return Fraction(w)  # exact binary value of the float
    if isinstance(w, str):
        return Fraction(w)
    raise StructureError(f"cannot interpret weight {w!r}")


def _detect_frame_tag(points: tuple[UnitVector, ...]):
    """Recognize atoms sitting exactly on signed standard basis vectors."""
    tags = []
    for p in points:
        nz = np.nonzero(p.coords)[0]
        if nz.size != 1:
            return None
        c = float(p.coords[nz[0]])
        if c == 1.0:
            tags.append((int(nz[0]), 1))
        elif c == -1.0:
            tags.append((int(nz[0]), -1))
        else:
            return None
    return tuple(tags)


class LineConfig:
    """Weighted atomic measure on the unit sphere.

    ``atoms`` is a sequence of (point, weight) pairs; points may be
    ``UnitVector`` instances or coordinate sequences.  Weights are stored
    exactly as ``Fraction`` (floats are converted to their exact binary
    value).  When every atom lies exactly on a signed standard basis vector
    the configuration is frame-tagged and its energies are exact.
    """

    __slots__ = ("points", "weights", "weight_mode", "frame_tag")

    def __init__(self, atoms, weight_mode: WeightMode, frame_tag=None):
        weight_mode = WeightMode(weight_mode)
        points: list[UnitVector] = []
        weights: list[Fraction] = []
        for point, w in atoms:
            if not isinstance(point, UnitVector):
                point = UnitVector(point)
            points.append(point)
            weights.append(_as_fraction(w))
        if points:
            ambient = points[0].ambient_dim
            for p in points:
                if p.ambient_dim != ambient:
                    raise DimensionMismatchError("all atoms must share one ambient dimension")
        if weight_mode is WeightMode.COUNTING:
            for w in weights:
                if w.denominator != 1 or w <= 0:
                    raise StructureError(f"counting weights must be positive integers, got {w}")
        else:
            for w in weights:
                if w < 0:
                    raise StructureError(f"probability weights must be nonnegative, got {w}")
            total = sum(weights, Fraction(0))
            if abs(float(total - 1)) > MASS_TOL:
                raise StructureError(f"probability weights must sum to 1, got {float(total)!r}")
        self.points = tuple(points)
        self.weights = tuple(weights)
        self.weight_mode = weight_mode
        if frame_tag is None:
            frame_tag = _detect_frame_tag(self.points)
        else:
            frame_tag = tuple((int(a), int(s)) for a, s in frame_tag)
            if len(frame_tag) != len(self.points):
                raise StructureError("frame_tag length must match the number of atoms")
            for (axis, sign), p in zip(frame_tag, self.points):
                if sign not in (1, -1) or not 0 <= axis < p.ambient_dim:
                    raise StructureError(f"bad frame tag ({axis}, {sign})")
                expected = np.zeros(p.ambient_dim)
                expected[axis] = float(sign)
                if not np.array_equal(p.coords, expected):
                    raise StructureError("frame_tag does not match atom coordinates")
        self.frame_tag = frame_tag

    # -- basic structure ---------------------------------------------------

    @property
    def natoms(self) -> int:
        return len(self.points)

    @property
    def ambient_dim(self) -> int:
        if not self.points:
            raise StructureError("empty configuration has no dimension")
        return self.points[0].ambient_dim

    @property
    def sphere_dim(self) -> int:
        return self.ambient_dim - 1

    @property
    def is_exact(self) -> bool:
        return self.frame_tag is not None

    def total_mass(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    def points_matrix(self) -> np.ndarray:
        return np.vstack([p.coords for p in self.points])

    def weights_array(self) -> np.ndarray:
        return np.array([float(w) for w in self.weights])

    def __repr__(self) -> str:
        return (
            f"<LineConfig {self.natoms} atoms on S^{self.sphere_dim}, "
            f"{self.weight_mode.value}{', exact' if self.is_exact else ''}>"
        )

    # -- canonicalization --------------------------------------------------

    def to_probability(self) -> "LineConfig":
        """Rescale total mass to 1, keeping atoms separate."""
        total = self.total_mass()
        if total <= 0:
            raise StructureError("cannot normalize a configuration of zero mass")
        atoms = [(p, w / total) for p, w in zip(self.points, self.weights)]
        return LineConfig(atoms, WeightMode.PROBABILITY, frame_tag=self.frame_tag)

    def folded(self, zero_tol: float = FOLD_ZERO_TOL) -> "LineConfig":
        """Canonical antipodal representative of every atom.

        Each point is negated when its first coordinate of magnitude above
        ``zero_tol`` is negative.  All energies are invariant under this.
        """
        points = []
        tags = [] if self.frame_tag is not None else None
        for idx, p in enumerate(self.points):
            flip = False
            for c in p.coords:
                if abs(c) > zero_tol:
                    flip = c < 0
                    break
            points.append(-p if flip else p)
            if tags is not None:
                axis, sign = self.frame_tag[idx]
                tags.append((axis, -sign if flip else sign))
        atoms = list(zip(points, self.weights))
        return LineConfig(atoms, self.weight_mode, frame_tag=tuple(tags) if tags else None)

    def merged(self, tol: float = 1e-9) -> "LineConfig":
        """Combine atoms that coincide as projective points within ``tol``.

        Projective distance is min(|x-y|, |x+y|).  Weights add; each merged
        group is represented by its heaviest atom (lowest index on ties).
        Note this identifies antipodal atoms: the result represents the same
        measure on lines, not necessarily the same measure on the sphere.
        """
        n = self.natoms
        X = self.points_matrix()
        parent = list(range(n))

        def find(i: int) -> int:
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        # |x-y|^2 = 2-2g, |x+y|^2 = 2+2g  =>  projective dist^2 = 2-2|g|;
        # snap near-parallel dots so bit-identical atoms merge at tol = 0.
        absg = np.minimum(np.abs(X @ X.T), 1.0)
        absg[absg >= 1.0 - geometry._PARALLEL_SNAP] = 1.0
        for i in range(n):
            for j in range(i + 1, n):
                if 2.0 - 2.0 * absg[i, j] <= tol * tol:
                    parent[find(j)] = find(i)
        groups: dict[int, list[int]] = {}
        for i in range(n):
            groups.setdefault(find(i), []).append(i)
        atoms = []
        tags = [] if self.frame_tag is not None else None
        for root in sorted(groups, key=lambda r: min(groups[r])):
            members = groups[root]
            rep = max(members, key=lambda i: (self.weights[i], -i))
            w = sum((self.weights[i] for i in members), Fraction(0))
            atoms.append((self.points[rep], w))
            if tags is not None:
                tags.append(self.frame_tag[rep])
        return LineConfig(atoms, self.weight_mode, frame_tag=tuple(tags) if tags else None)

    # -- serialization -----------------------------------------------------

    def to_json_obj(self) -> dict:
        return {
            "dimension": self.sphere_dim,
            "weight_mode": self.weight_mode.value,
            "atoms": [
                {
                    "coords": [float(c) for c in p.coords],
                    "weight_num": w.numerator,
                    "weight_den": w.denominator,
                }
                for p, w in zip(self.points, self.weights)
            ],
        }

    @classmethod
    def from_json_obj(cls, obj) -> "LineConfig":
        if not isinstance(obj, dict):
            raise StructureError("configuration JSON must be an object")
        try:
            dim = obj["dimension"]
            mode = obj["weight_mode"]
            raw_atoms = obj["atoms"]
        except KeyError as exc:
            raise StructureError(f"configuration JSON missing key {exc}") from exc
        try:
            mode = WeightMode(mode)
        except ValueError as exc:
            raise StructureError(f"unknown weight_mode {mode!r}") from exc
        if not isinstance(raw_atoms, list) or not raw_atoms:
            raise StructureError("configuration JSON needs a nonempty atom list")
        atoms = []
        for entry in raw_atoms:
            try:
                coords = entry["coords"]
                num = entry["weight_num"]
                den = entry["weight_den"]
            except (TypeError, KeyError) as exc:
                raise StructureError(f"malformed atom entry {entry!r}") from exc
            if not isinstance(num, int) or not isinstance(den, int) or den <= 0:
                raise StructureError(f"weight must be an integer pair, got {num!r}/{den!r}")
            if len(coords) != dim + 1:
                raise StructureError(
                    f"atom has {len(coords)} coordinates but dimension is {dim}"
                )
            atoms.append((UnitVector(coords), Fraction(num, den)))
        return cls(atoms, mode)


def save_config(config: LineConfig, path) -> None:
    with open(path, "w") as fh:
        json.dump(config.to_json_obj(), fh, indent=2)
        fh.write("\n")


def load_config(path) -> LineConfig:
    with open(path) as fh:
        obj = json.load(fh)
    return LineConfig.from_json_obj(obj)


# -- frame descriptions ----------------------------------------------------


@dataclass(frozen=True)
class FrameConfig:
    """Mass distribution over a signed orthonormal frame {+-e_0..+-e_d}.

    ``multiplicities[i] = (a_i, b_i)`` gives the masses on +e_i and -e_i.
    """

    basis_size: int
    multiplicities: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        if self.basis_size < 2:
            raise StructureError("basis must contain at least 2 axes")
        if len(self.multiplicities) != self.basis_size:
            raise StructureError("need one (a, b) pair per basis axis")
        for a, b in self.multiplicities:
            if a < 0 or b < 0:
                raise StructureError("frame masses must be nonnegative")

    def line_masses(self) -> tuple[Fraction, ...]:
        return tuple(a + b for a, b in self.multiplicities)

    def is_balanced_counting(self) -> bool:
        """Integer masses per line, as even as possible (differ by <= 1)."""
        masses = self.line_masses()
        if any(m.denominator != 1 for m in masses):
            return False
        return max(masses) - min(masses) <= 1

    def is_probability_split(self) -> bool:
        """Each line carries exactly 1/(d+1) of the mass."""
        share = Fraction(1, self.basis_size)
        return all(m == share for m in self.line_masses())

    def to_line_config(self, weight_mode: WeightMode) -> LineConfig:
        atoms = []
        tags = []
        for axis, (a, b) in enumerate(self.multiplicities):
            for mass, sign in ((a, 1), (b, -1)):
                if mass > 0:
                    coords = np.zeros(self.basis_size)
                    coords[axis] = float(sign)
                    atoms.append((UnitVector(coords), mass))
                    tags.append((axis, sign))
        if not atoms:
            raise StructureError("frame carries no mass")
        return LineConfig(atoms, weight_mode, frame_tag=tuple(tags))


def conjectured_maximizer(d: int, n: int) -> LineConfig:
    """n unit-mass atoms spread as evenly as possible over e_1..e_{d+1}.

    Atom i (1-based) sits on basis axis 1 + (i-1) mod (d+1); the per-axis
    multiplicities therefore differ by at most one.  COUNTING mode, exact.
    """
    if not (isinstance(d, int) and isinstance(n, int)):
        raise DomainError("d and n must be integers")
    if d < 1 or n < 1:
        raise DomainError(f"need d >= 1 and n >= 1, got d={d}, n={n}")
    atoms = []
    tags = []
    for i in range(n):
        axis = i % (d + 1)
        coords = np.zeros(d + 1)
        coords[axis] = 1.0
        atoms.append((UnitVector(coords), 1))
        tags.append((axis, 1))
    return LineConfig(atoms, WeightMode.COUNTING, frame_tag=tuple(tags))


def uniform_basis_splits(d: int) -> tuple[tuple[Fraction, Fraction], ...]:
    """The all-positive uniform split: a_i = 1/(d+1), b_i = 0."""
    if d < 1:
        raise DomainError(f"need d >= 1, got d={d}")
    return tuple((Fraction(1, d + 1), Fraction(0)) for _ in range(d + 1))


def conjectured_maximizer_weighted(d: int, splits) -> LineConfig:
    """Probability measure a_i delta_{+e_i} + b_i delta_{-e_i} per axis.

    ``splits`` must supply d+1 pairs of nonnegative rationals with
    a_i + b_i = 1/(d+1) exactly.  Atoms of zero mass are omitted.
    """
    if not isinstance(d, int) or d < 1:
        raise DomainError(f"need integer d >= 1, got {d!r}")
    pairs = []
    for entry in splits:
        a, b = entry
        pairs.append((_as_fraction(a), _as_fraction(b)))
    if len(pairs) != d + 1:
        raise StructureError(f"need exactly {d + 1} splits, got {len(pairs)}")
    share = Fraction(1, d + 1)
    for a, b in pairs:
        if a < 0 or b < 0:
            raise StructureError("split masses must be nonnegative")
        if a + b != share:
            raise StructureError(f"each split must sum to 1/{d + 1}, got {a} + {b}")
    frame = FrameConfig(basis_size=d + 1, multiplicities=tuple(pairs))
    return frame.to_line_config(WeightMode.PROBABILITY)


# -- energies ----------------------------------------------------------------


def _frame_axis_masses(config: LineConfig) -> dict[int, Fraction]:
    masses: dict[int, Fraction] = {}
    for (axis, _sign), w in zip(config.frame_tag, config.weights):
        masses[axis] = masses.get(axis, Fraction(0)) + w
    return masses


def energy(mu: LineConfig, alpha, orth_tol: float = DEFAULT_ORTH_TOL):
    """Total pair energy (1/2) sum_{i,j} w_i w_j kernel(x_i, x_j, alpha).

    Frame-tagged configurations are evaluated exactly (the kernel is 0
    within an axis and 1 across axes, for every alpha) and yield a
    ``Fraction``; everything else is evaluated in floating point.
    """
    check_alpha(alpha)
    if mu.natoms == 0:
        raise StructureError("empty configuration")
    if mu.is_exact:
        masses = _frame_axis_masses(mu)
        total = sum(masses.values(), Fraction(0))
        return (total * total - sum(m * m for m in masses.values())) / 2
    X = mu.points_matrix()
    w = mu.weights_array()
    K = geometry.kernel_matrix(X, alpha=alpha, orth_tol=orth_tol)
    return 0.5 * float(w @ K @ w)


def bilinear(mu: LineConfig, nu: LineConfig, alpha, orth_tol: float = DEFAULT_ORTH_TOL):
    """Cross energy sum_{i,j} w_i v_j kernel(x_i, y_j, alpha).

    Exact (``Fraction``) when both configurations are frame-tagged.
    """
    check_alpha(alpha)
    if mu.natoms == 0 or nu.natoms == 0:
        raise StructureError("empty configuration")
    if mu.ambient_dim != nu.ambient_dim:
        raise DimensionMismatchError(
            f"configurations live on different spheres: S^{mu.sphere_dim} vs S^{nu.sphere_dim}"
        )
    if mu.is_exact and nu.is_exact:
        ma = _frame_axis_masses(mu)
        mb = _frame_axis_masses(nu)
        ta = sum(ma.values(), Fraction(0))
        tb = sum(mb.values(), Fraction(0))
        overlap = sum((ma[axis] * mb[axis] for axis in ma.keys() & mb.keys()), Fraction(0))
        return ta * tb - overlap
    K = geometry.kernel_matrix(
        mu.points_matrix(), nu.points_matrix(), alpha=alpha, orth_tol=orth_tol
    )
    return float(mu.weights_array() @ K @ nu.weights_array())


def uniform_circle_energy(alpha) -> float:
    """Energy of the uniform probability measure on S^1: 1 / (2 (alpha+1)).

    The angle between two independent uniform points on the circle is
    uniform on [0, pi] and lambda0 maps it to a uniform variable on [0, 1]
    (two-to-one), so E |Lambda|^alpha = 1/(alpha+1).
    """
    a = check_alpha(alpha, finite=True)
    return 1.0 / (2.0 * (a + 1.0))


def uniform_circle_energy_quadrature(alpha, nodes: int = 100_000) -> float:
    """Trapezoid-rule cross-check of ``uniform_circle_energy``."""
    a = check_alpha(alpha, finite=True)
    if nodes < 2:
        raise DomainError("need at least 2 quadrature nodes")
    t = np.linspace(0.0, math.pi, nodes)
    vals = geometry.lambda0(t) ** a
    return float(np.trapezoid(vals, t) / (2.0 * math.pi))


# -- equivalence up to rotation and antipodal identification ----------------


def _weight_close(a: Fraction, b: Fraction, tol: float) -> bool:
    return abs(float(a - b)) <= tol


def _drop_zero_atoms(config: LineConfig) -> LineConfig:
    """Remove atoms of weight 0; they carry no mass and must not affect
    equivalence."""
    if all(w > 0 for w in config.weights):
        return config
    atoms = [(p, w) for p, w in zip(config.points, config.weights) if w > 0]
    tag = None
    if config.frame_tag is not None:
        tag = tuple(
            t for t, w in zip(config.frame_tag, config.weights) if w > 0
        )
    return LineConfig(atoms, config.weight_mode, frame_tag=tag)


def equivalent(mu: LineConfig, nu: LineConfig, tol: float = 1e-9) -> bool:
    """Decide mu == nu up to a global rotation and atomwise sign flips.

    Both configurations are folded to canonical antipodal representatives
    and projectively merged at ``tol``; the merged atom sets are then
    matched by weights and pairwise |dot| profiles (backtracking), and a
    candidate matching is certified by a best-fit rotation (proper
    orthogonal alignment; on odd ambient dimensions -M acts like M on
    lines, so orientation never separates configurations there).
    May report a false negative on configurations that are degenerate at
    the scale of ``tol``; never reports a false positive beyond ``tol``.
    """
    if not isinstance(mu, LineConfig) or not isinstance(nu, LineConfig):
        raise StructureError("equivalent() compares LineConfig instances")
    if mu.weight_mode != nu.weight_mode:
        raise StructureError("cannot compare configurations with different weight modes")
    if mu.ambient_dim != nu.ambient_dim:
        raise DimensionMismatchError(
            f"configurations live on different spheres: S^{mu.sphere_dim} vs S^{nu.sphere_dim}"
        )
    if not (isinstance(tol, numbers.Real) and tol >= 0):
        raise DomainError(f"tol must be a nonnegative real, got {tol!r}")
    a = _drop_zero_atoms(mu).folded().merged(tol)
    b = _drop_zero_atoms(nu).folded().merged(tol)
    n = a.natoms
    if n != b.natoms:
        return False
    if not _weight_close(a.total_mass(), b.total_mass(), tol):
        return False
    wa, wb = list(a.weights), list(b.weights)
    for x, y in zip(sorted(wa), sorted(wb)):
        if not _weight_close(x, y, tol):
            return False

    Xa, Xb = a.points_matrix(), b.points_matrix()
    Ga, Gb = Xa @ Xa.T, Xb @ Xb.T
    if n == 1:
        return True  # any two single lines are related by a rotation

    # Invariant screening: sorted multisets of (w_i, w_j, |x_i . x_j|).
    def triples(w, G):
        out = []
        for i in range(n):
            for j in range(i + 1, n):
                lo, hi = sorted((float(w[i]), float(w[j])))
                out.append((lo, hi, abs(G[i, j])))
        return sorted(out)

    for ta, tb in zip(triples(wa, Ga), triples(wb, Gb)):
        if any(abs(x - y) > tol for x, y in zip(ta, tb)):
            return False

    # Backtracking search for a weight- and angle-consistent matching with
    # per-atom signs, certified by orthogonal alignment.
    sigma = [-1] * n
    sign = [0] * n
    used = [False] * n

    ambient = mu.ambient_dim

    def alignment_ok() -> bool:
        W = np.array([float(w) for w in wa])
        Za = Xa
        Zb = np.vstack([sign[i] * Xb[sigma[i]] for i in range(n)])
        # Least-squares orthogonal M with M za_i ~= zb_i:
        # M = U V^T from the SVD of H = Zb^T diag(w) Za.
        H = (Zb * W[:, None]).T @ Za
        U, _s, Vt = np.linalg.svd(H)
        M = U @ Vt
        if ambient % 2 == 0 and np.linalg.det(M) < 0:
            # Even ambient dimension: -M reflects too, so force a proper
            # rotation by flipping the least significant singular direction.
            U[:, -1] = -U[:, -1]
            M = U @ Vt
        R = Za @ M.T
        limit = max(tol, 1e-12)
        for i in range(n):
            t = Xb[sigma[i]]
            if min(np.linalg.norm(R[i] - t), np.linalg.norm(R[i] + t)) > limit:
                return False
        return True

    def extend(i: int) -> bool:
        if i == n:
            return alignment_ok()
        for j in range(n):
            if used[j] or not _weight_close(wa[i], wb[j], tol):
                continue
            for s in (1, -1):
                ok = True
                for m in range(i):
                    if abs(Ga[i, m] - s * sign[m] * Gb[j, sigma[m]]) > tol:
                        ok = False
                        break
                if not ok:
                    continue
                sigma[i], sign[i], used[j] = j, s, True
                if extend(i + 1):
                    return True
                used[j] = False
        sigma[i], sign[i] = -1, 0
        return False

    return extend(0)
