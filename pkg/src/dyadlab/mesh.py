"""Dyadic meshes on the periodic unit cube and cube-collection algorithms.

The mesh fixes a single canonical dyadic grid on [0,1)^d with levels
0..L; all "supremum over cubes" computations elsewhere in the package
range over this finite grid (optionally augmented by half-shifted
grids).  Everything is exact: cube measures are powers of two, so the
arithmetic below is lossless in binary floating point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

__all__ = [
    "DomainError",
    "MeshMismatchError",
    "PreconditionError",
    "Mesh",
    "DyadicCube",
    "GridFunction",
    "SparseCollection",
    "average",
    "cz_stopping_cubes",
    "carleson_constant",
    "is_sparse",
    "is_sparse_hall",
    "sparse_witness",
    "sparse_renormalize",
    "weak_decomposition",
    "cubes_to_text",
    "cubes_from_text",
]


class DomainError(ValueError):
    """A numeric argument lies outside its admissible range."""


class MeshMismatchError(ValueError):
    """A cube or function does not belong to the mesh it is used with."""


class PreconditionError(ValueError):
    """A structural precondition on a collection is violated."""


@dataclass(frozen=True, order=True)
class DyadicCube:
    """Dyadic cube at `level` with integer corner `index` (one per axis).

    The cube occupies prod_i [index_i * 2^-level, (index_i+1) * 2^-level).
    """

    level: int
    index: tuple[int, ...]

    def __post_init__(self):
        if self.level < 0:
            raise DomainError(f"cube level must be >= 0, got {self.level}")
        if any(i < 0 or i >= 2**self.level for i in self.index):
            raise DomainError(f"cube index {self.index} out of range at level {self.level}")

    @property
    def dimension(self) -> int:
        return len(self.index)

    @property
    def measure(self) -> float:
        return 2.0 ** (-self.level * self.dimension)

    @property
    def side(self) -> float:
        return 2.0**-self.level

    def parent(self) -> "DyadicCube":
        if self.level == 0:
            raise DomainError("the root cube has no parent")
        return DyadicCube(self.level - 1, tuple(i // 2 for i in self.index))

    def children(self) -> list["DyadicCube"]:
        return [
            DyadicCube(self.level + 1, tuple(2 * i + o for i, o in zip(self.index, offs)))
            for offs in itertools.product((0, 1), repeat=self.dimension)
        ]

    def contains(self, other: "DyadicCube") -> bool:
        """Whether `other` is contained in this cube (dyadic nesting)."""
        if other.level < self.level:
            return False
        shift = other.level - self.level
        return all(j >> shift == i for i, j in zip(self.index, other.index))

    def key(self) -> str:
        return " ".join([str(self.level)] + [str(i) for i in self.index])


class Mesh:
    """Dyadic mesh of depth `L` on the periodic unit cube in dimension `d`."""

    def __init__(self, d: int, L: int):
        if d < 1:
            raise DomainError(f"dimension must be >= 1, got {d}")
        if L < 0:
            raise DomainError(f"depth must be >= 0, got {L}")
        self.d = d
        self.L = L
        self.cell_count = 2 ** (L * d)
        self.cell_measure = 2.0 ** (-L * d)
        self.shape = (2**L,) * d

    def __repr__(self):
        return f"Mesh(d={self.d}, L={self.L})"

    def __eq__(self, other):
        return isinstance(other, Mesh) and (self.d, self.L) == (other.d, other.L)

    def __hash__(self):
        return hash((self.d, self.L))

    # -- cube bookkeeping ---------------------------------------------------

    def root(self) -> DyadicCube:
        return DyadicCube(0, (0,) * self.d)

    def check_cube(self, cube: DyadicCube) -> None:
        if cube.dimension != self.d or cube.level > self.L:
            raise MeshMismatchError(f"{cube} does not belong to {self}")

    def cubes(self, max_level: int | None = None) -> Iterator[DyadicCube]:
        """All dyadic cubes, level-major then lexicographic in the index."""
        top = self.L if max_level is None else min(max_level, self.L)
        for k in range(top + 1):
            for index in itertools.product(range(2**k), repeat=self.d):
                yield DyadicCube(k, index)

    def n_cubes(self) -> int:
        return sum(2 ** (k * self.d) for k in range(self.L + 1))

    def cube_slices(self, cube: DyadicCube) -> tuple[slice, ...]:
        self.check_cube(cube)
        w = 2 ** (self.L - cube.level)
        return tuple(slice(i * w, (i + 1) * w) for i in cube.index)

    def cells_in(self, cube: DyadicCube) -> np.ndarray:
        """Flat ids of the finest cells inside `cube`."""
        grid = np.zeros(self.shape, dtype=bool)
        grid[self.cube_slices(cube)] = True
        return np.flatnonzero(grid.reshape(-1))

    def cell_cube(self, flat_id: int) -> DyadicCube:
        index = np.unravel_index(flat_id, self.shape)
        return DyadicCube(self.L, tuple(int(i) for i in index))

    def level_sums(self, values: np.ndarray, level: int) -> np.ndarray:
        """Per-cube sums of cell values at `level`, shape (2^level,)*d."""
        w = 2 ** (self.L - level)
        out = values
        for axis in range(self.d):
            out = out.reshape(out.shape[:axis] + (2**level, w) + out.shape[axis + 1 :]).sum(
                axis=axis + 1
            )
        return out

    def spread(self, coarse: np.ndarray, level: int) -> np.ndarray:
        """Broadcast per-cube values at `level` back onto the finest cells."""
        w = 2 ** (self.L - level)
        out = coarse
        for axis in range(self.d):
            out = np.repeat(out, w, axis=axis)
        return out

    def shifted_offsets(self) -> list[tuple[int, ...]]:
        """Nonzero half-shift patterns for the optional shifted grids."""
        return [offs for offs in itertools.product((0, 1), repeat=self.d) if any(offs)]

    def shifted_cell_ids(self, cube: DyadicCube, offs: tuple[int, ...]) -> np.ndarray:
        """Cells of `cube` translated by offs/2 * side(cube), wrapping mod 1.

        Only defined for cube.level < L (a half shift of a finest cell is
        not resolvable on the mesh).
        """
        if cube.level >= self.L:
            raise DomainError("shifted grids require cube level < mesh depth")
        w = 2 ** (self.L - cube.level)
        n = 2**self.L
        axes = []
        for i, o in zip(cube.index, offs):
            start = i * w + o * (w // 2)
            axes.append([(start + j) % n for j in range(w)])
        grid = np.zeros(self.shape, dtype=bool)
        for combo in itertools.product(*axes):
            grid[combo] = True
        return np.flatnonzero(grid.reshape(-1))


@dataclass
class GridFunction:
    """Real values on the finest cells of a mesh; model of a function on [0,1)^d."""

    mesh: Mesh
    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float)
        if arr.size != self.mesh.cell_count:
            raise MeshMismatchError(
                f"expected {self.mesh.cell_count} cell values, got {arr.size}"
            )
        if not np.all(np.isfinite(arr)):
            raise DomainError("grid function values must be finite")
        object.__setattr__(self, "values", arr.reshape(self.mesh.shape))

    @property
    def flat(self) -> np.ndarray:
        return self.values.reshape(-1)

    def abs(self) -> "GridFunction":
        return GridFunction(self.mesh, np.abs(self.values))

    def integral(self) -> float:
        return float(self.values.sum() * self.mesh.cell_measure)

    @classmethod
    def constant(cls, mesh: Mesh, c: float) -> "GridFunction":
        return cls(mesh, np.full(mesh.shape, float(c)))

    @classmethod
    def indicator(cls, mesh: Mesh, cube: DyadicCube) -> "GridFunction":
        values = np.zeros(mesh.shape)
        values[mesh.cube_slices(cube)] = 1.0
        return cls(mesh, values)


def average(f: GridFunction, cube: DyadicCube, r: float = 1.0) -> float:
    """r-average of |f| over a cube: (|Q|^-1 int_Q |f|^r)^(1/r)."""
    f.mesh.check_cube(cube)
    if not (0 < r < math.inf):
        raise DomainError(f"average exponent must lie in (0, inf), got {r}")
    block = np.abs(f.values[f.mesh.cube_slices(cube)])
    mean = float((block**r).mean())
    return mean ** (1.0 / r)


def cz_stopping_cubes(f: GridFunction, lam: float) -> list[DyadicCube]:
    """Maximal dyadic cubes P with <|f|>_P > lam (Calderon-Zygmund stopping time).

    The returned cubes are pairwise disjoint and their union is the set
    {M_dyadic f > lam} at mesh resolution.
    """
    if lam <= 0:
        raise DomainError(f"stopping threshold must be positive, got {lam}")
    mesh = f.mesh
    out: list[DyadicCube] = []
    stack = [mesh.root()]
    absf = np.abs(f.values)
    while stack:
        cube = stack.pop()
        if float(absf[mesh.cube_slices(cube)].mean()) > lam:
            out.append(cube)
        elif cube.level < mesh.L:
            stack.extend(reversed(cube.children()))
    return sorted(out)


# -- sparseness -------------------------------------------------------------


def _check_collection(mesh: Mesh, cubes: Iterable[DyadicCube]) -> list[DyadicCube]:
    out = sorted(set(cubes))
    for q in out:
        mesh.check_cube(q)
    return out


def carleson_constant(mesh: Mesh, cubes: Iterable[DyadicCube]) -> float:
    """max over Q in S of sum_{Q' in S, Q' subset Q} |Q'| / |Q| (packing norm)."""
    cubes = _check_collection(mesh, cubes)
    if not cubes:
        return 0.0
    best = 0.0
    for q in cubes:
        s = sum(q2.measure for q2 in cubes if q.contains(q2))
        best = max(best, s / q.measure)
    return best


def is_sparse(
    mesh: Mesh,
    cubes: Iterable[DyadicCube],
    eta: float,
    method: str = "packing",
) -> bool:
    """Decide whether the collection is eta-sparse.

    method="packing" uses the dyadic Carleson criterion (packing constant
    <= 1/eta), which characterizes eta-sparseness for dyadic families.
    method="hall" checks the deficiency condition eta*sum|Q| <= |union Q|
    over every subfamily; exponential, intended as a small-scale oracle.
    """
    if not (0 < eta <= 1):
        raise DomainError(f"sparsity parameter must lie in (0, 1], got {eta}")
    cubes = _check_collection(mesh, cubes)
    if method == "packing":
        return carleson_constant(mesh, cubes) <= 1.0 / eta + 1e-12
    if method == "hall":
        return is_sparse_hall(mesh, cubes, eta)
    raise ValueError(f"unknown method {method!r}")


def is_sparse_hall(mesh: Mesh, cubes: Iterable[DyadicCube], eta: float) -> bool:
    """Exhaustive Hall-condition check: every subfamily S' must satisfy
    eta * sum_{Q in S'} |Q| <= |union of S'|.  Exponential in len(cubes)."""
    if not (0 < eta <= 1):
        raise DomainError(f"sparsity parameter must lie in (0, 1], got {eta}")
    cubes = _check_collection(mesh, cubes)
    if len(cubes) > 20:
        raise DomainError("Hall-condition oracle limited to 20 cubes")
    masks = []
    for q in cubes:
        m = np.zeros(mesh.shape, dtype=bool)
        m[mesh.cube_slices(q)] = True
        masks.append(m.reshape(-1))
    measures = [q.measure for q in cubes]
    for bits in range(1, 2 ** len(cubes)):
        chosen = [i for i in range(len(cubes)) if bits >> i & 1]
        union = np.zeros(mesh.cell_count, dtype=bool)
        demand = 0.0
        for i in chosen:
            union |= masks[i]
            demand += measures[i]
        if eta * demand > union.sum() * mesh.cell_measure + 1e-12:
            return False
    return True


def sparse_witness(
    mesh: Mesh,
    cubes: Iterable[DyadicCube],
    eta: float,
    max_refine: int = 8,
) -> dict[DyadicCube, np.ndarray] | None:
    """Concrete disjoint sets E_Q with |E_Q| >= eta |Q|, as refined-cell ids.

    Cells are taken on a virtual refinement of the mesh (extra levels
    appended so that the demands ceil(eta |Q| / cell) round off); the
    returned arrays hold flat cell ids at refinement level L + j, with the
    level recorded under the key None... instead we return ids scaled to
    the refined grid of the coarsest refinement that works, together with
    that grid, via the companion `witness_refinement` attribute set on the
    dict.  Deepest cubes are served first; the dyadic packing bound
    guarantees enough unused cells remain for each coarser cube whenever
    the demands are exactly representable.  Returns None if no whole-cell
    witness exists within `max_refine` extra levels (possible only for
    non-dyadic eta at tight packing).
    """
    if not (0 < eta <= 1):
        raise DomainError(f"sparsity parameter must lie in (0, 1], got {eta}")
    cubes = _check_collection(mesh, cubes)
    if not cubes:
        return {}
    if not is_sparse(mesh, cubes, eta):
        return None
    deepest = max(q.level for q in cubes)
    for extra in range(max_refine + 1):
        lw = deepest + extra
        fine = Mesh(mesh.d, lw)
        witness = _greedy_witness(fine, cubes, eta)
        if witness is not None:
            witness.refinement = lw  # type: ignore[attr-defined]
            return witness
    return None


class _WitnessDict(dict):
    """Cube -> refined-cell-id arrays; `refinement` records the cell level."""

    refinement: int


def _greedy_witness(fine: Mesh, cubes: Sequence[DyadicCube], eta: float):
    used = np.zeros(fine.cell_count, dtype=bool)
    out = _WitnessDict()
    for q in sorted(cubes, key=lambda c: (-c.level, c.index)):
        ids = fine.cells_in(q)
        demand = math.ceil(eta * q.measure / fine.cell_measure - 1e-12)
        free = ids[~used[ids]]
        if free.size < demand:
            return None
        take = free[:demand]
        used[take] = True
        out[q] = take
    return out


@dataclass
class SparseCollection:
    """A collection of dyadic cubes with sparsity parameter and optional witness."""

    mesh: Mesh
    cubes: tuple[DyadicCube, ...]
    eta: float
    witness: Mapping[DyadicCube, np.ndarray] | None = None
    witness_level: int | None = None

    def __post_init__(self):
        if not (0 < self.eta <= 1):
            raise DomainError(f"sparsity parameter must lie in (0, 1], got {self.eta}")
        object.__setattr__(self, "cubes", tuple(_check_collection(self.mesh, self.cubes)))
        if self.witness is not None:
            self.validate_witness()

    @classmethod
    def from_cubes(cls, mesh: Mesh, cubes: Iterable[DyadicCube], eta: float,
                   with_witness: bool = False) -> "SparseCollection":
        cubes = _check_collection(mesh, cubes)
        if not is_sparse(mesh, cubes, eta):
            raise PreconditionError(f"collection is not {eta}-sparse")
        witness = None
        level = None
        if with_witness:
            witness = sparse_witness(mesh, cubes, eta)
            if witness is not None:
                level = getattr(witness, "refinement", mesh.L)
        return cls(mesh, tuple(cubes), eta, witness, level)

    def validate_witness(self) -> None:
        assert self.witness is not None
        lw = self.witness_level if self.witness_level is not None else self.mesh.L
        fine = Mesh(self.mesh.d, lw)
        seen: set[int] = set()
        for q in self.cubes:
            ids = np.asarray(self.witness[q])
            inside = set(fine.cells_in(q).tolist())
            if not set(ids.tolist()) <= inside:
                raise PreconditionError(f"witness of {q.key()} leaves the cube")
            if seen & set(ids.tolist()):
                raise PreconditionError("witness sets are not pairwise disjoint")
            seen |= set(ids.tolist())
            if ids.size * fine.cell_measure < self.eta * q.measure - 1e-12:
                raise PreconditionError(f"witness of {q.key()} is too small")


def _children_in(collection: Sequence[DyadicCube], q: DyadicCube) -> list[DyadicCube]:
    """Maximal members of `collection` strictly contained in q."""
    inside = [c for c in collection if q.contains(c) and c != q]
    out = []
    for c in inside:
        if not any(o.contains(c) and o != c for o in inside):
            out.append(c)
    return sorted(out)


def _maximal(collection: Sequence[DyadicCube]) -> list[DyadicCube]:
    return sorted(
        c for c in collection if not any(o.contains(c) and o != c for o in collection)
    )


def _averaging_sum(mesh: Mesh, cubes: Sequence[DyadicCube], absf: np.ndarray) -> np.ndarray:
    out = np.zeros(mesh.shape)
    for q in cubes:
        sl = mesh.cube_slices(q)
        out[sl] += absf[sl].mean()
    return out


def _weak_11_bound(mesh: Mesh, cubes: Sequence[DyadicCube], absf: np.ndarray) -> float:
    """On-mesh weak (1,1) constant of the averaging sum, over localizations.

    Returns the max over dyadic cubes Q0 (with positive mass) and levels
    lambda of  lambda * |{A_{S(Q0)} f > lambda}| / ||f 1_Q0||_1, where
    S(Q0) keeps the members contained in Q0.  Covers every localized
    application made by the renormalization construction.
    """
    best = 1.0
    mu = mesh.cell_measure
    for q0 in mesh.cubes():
        sl = mesh.cube_slices(q0)
        mass = float(absf[sl].sum()) * mu
        if mass <= 0:
            continue
        local = [q for q in cubes if q0.contains(q)]
        if not local:
            continue
        a = _averaging_sum(mesh, local, absf)[sl].reshape(-1)
        for v in np.unique(a[a > 0]):
            best = max(best, float(v) * float((a >= v).sum()) * mu / mass)
    return best


def sparse_renormalize(
    collection: SparseCollection, nu: float, f: GridFunction
) -> tuple[SparseCollection, float]:
    """Renormalize a sparse collection to child-packing parameter nu.

    Returns (E, C) where E satisfies, for every Q in E,
    sum of |Q'| over maximal E-members strictly inside Q  <=  (1-nu)|Q|,
    and the pointwise domination  A_S f <= C * A_E f  holds with
    C = 2 * K,  K = (1-nu)^-1 * (computed on-mesh weak (1,1) bound).
    E carries the explicit witness E_Q = Q minus its E-children.
    """
    if not (0 < nu < 1):
        raise DomainError(f"renormalization parameter must lie in (0, 1), got {nu}")
    mesh = collection.mesh
    if f.mesh != mesh:
        raise MeshMismatchError("function and collection live on different meshes")
    cubes = list(collection.cubes)
    absf = np.abs(f.values)
    wk = _weak_11_bound(mesh, cubes, absf)
    K = wk / (1.0 - nu)
    C = 2.0 * K

    result: list[DyadicCube] = []
    children_of: dict[DyadicCube, list[DyadicCube]] = {}
    stack = _maximal(cubes)
    while stack:
        q0 = stack.pop()
        result.append(q0)
        sl = mesh.cube_slices(q0)
        avg = float(absf[sl].mean())
        if avg <= 0:
            children_of[q0] = []
            continue
        local = [q for q in cubes if q0.contains(q)]
        a = _averaging_sum(mesh, local, absf)
        exceed = a > K * avg
        kids = _maximal_cubes_inside(mesh, exceed)
        children_of[q0] = kids
        stack.extend(kids)

    result = sorted(set(result))
    witness = {}
    for q in result:
        mask = np.zeros(mesh.shape, dtype=bool)
        mask[mesh.cube_slices(q)] = True
        for kid in children_of.get(q, []):
            mask[mesh.cube_slices(kid)] = False
        witness[q] = np.flatnonzero(mask.reshape(-1))
    out = SparseCollection(mesh, tuple(result), nu, witness, mesh.L)
    return out, C


def _maximal_cubes_inside(mesh: Mesh, cellmask: np.ndarray) -> list[DyadicCube]:
    """Maximal dyadic cubes all of whose cells lie in the mask."""
    out: list[DyadicCube] = []
    stack = [mesh.root()]
    while stack:
        cube = stack.pop()
        if bool(cellmask[mesh.cube_slices(cube)].all()):
            out.append(cube)
        elif cube.level < mesh.L and bool(cellmask[mesh.cube_slices(cube)].any()):
            stack.extend(cube.children())
    return sorted(out)


def verify_child_packing(
    mesh: Mesh, cubes: Sequence[DyadicCube], nu: float
) -> DyadicCube | None:
    """First cube violating sum_{children} |Q'| <= (1-nu)|Q|, or None."""
    cubes = _check_collection(mesh, cubes)
    for q in cubes:
        s = sum(c.measure for c in _children_in(cubes, q))
        if s > (1.0 - nu) * q.measure + 1e-12:
            return q
    return None


@dataclass
class DecompositionLayers:
    """Output of weak_decomposition: per-band cube families and tail sets."""

    bands: dict[int, list[DyadicCube]]
    tails: dict[int, dict[DyadicCube, np.ndarray]]  # m -> Q -> flat cell ids of F_m(Q)
    generations: dict[int, dict[DyadicCube, int]]


def weak_decomposition(
    mesh: Mesh, cubes: Sequence[DyadicCube], nu: float, f: GridFunction
) -> DecompositionLayers:
    """Split a child-packed collection into average bands with thin tails.

    Requires the verified packing bound sum_{ch(Q)} |Q'| <= (1-nu)|Q| for
    every member.  Band m >= 1 holds the cubes with 4^-(m+1) < <|f|>_Q <=
    4^-m; within a band, generation n+2^m members inside Q form F_m(Q),
    guaranteeing |F_m(Q)| <= (1-nu)^(2^m) |Q| and the integral bound

        int_{ {A_S f > 2} minus {M f > 1/4} } |g|
            <=  sum_m 4^-m sum_{Q in band m} int_{F_m(Q)} |g|

    for every g (checked exactly in the test-suite by direct summation).
    """
    if not (0 < nu < 1):
        raise DomainError(f"packing parameter must lie in (0, 1), got {nu}")
    cubes = _check_collection(mesh, cubes)
    if f.mesh != mesh:
        raise MeshMismatchError("function and collection live on different meshes")
    bad = verify_child_packing(mesh, cubes, nu)
    if bad is not None:
        raise PreconditionError(f"child packing bound fails at cube {bad.key()}")

    absf = np.abs(f.values)
    bands: dict[int, list[DyadicCube]] = {}
    for q in cubes:
        avg = float(absf[mesh.cube_slices(q)].mean())
        if avg <= 0 or avg > 0.25:
            continue
        m = max(1, int(math.floor(-math.log(avg) / math.log(4.0))))
        while 4.0 ** -(m + 1) >= avg:
            m += 1
        while avg > 4.0**-m:
            m -= 1
        if m >= 1:
            bands.setdefault(m, []).append(q)

    tails: dict[int, dict[DyadicCube, np.ndarray]] = {}
    generations: dict[int, dict[DyadicCube, int]] = {}
    for m, family in sorted(bands.items()):
        gen: dict[DyadicCube, int] = {}
        remaining = set(family)
        n = 0
        while remaining:
            top = _maximal(sorted(remaining))
            for q in top:
                gen[q] = n
            remaining -= set(top)
            n += 1
        generations[m] = gen
        tails[m] = {}
        jump = 2**m
        for q in family:
            target = gen[q] + jump
            sel = [c for c in family if gen[c] == target and q.contains(c)]
            mask = np.zeros(mesh.shape, dtype=bool)
            for c in sel:
                mask[mesh.cube_slices(c)] = True
            tails[m][q] = np.flatnonzero(mask.reshape(-1))
    return DecompositionLayers(bands, tails, generations)


# -- text serialization -----------------------------------------------------


def cubes_to_text(
    cubes: Sequence[DyadicCube],
    witness: Mapping[DyadicCube, np.ndarray] | None = None,
) -> str:
    """One cube per line: "k i_1 ... i_d"; with witness: "... : id,id,..."."""
    lines = []
    for q in sorted(cubes):
        if witness is not None and q in witness:
            ids = ",".join(str(int(i)) for i in witness[q])
            lines.append(f"{q.key()} : {ids}")
        else:
            lines.append(q.key())
    return "\n".join(lines) + ("\n" if lines else "")


def cubes_from_text(text: str) -> tuple[list[DyadicCube], dict[DyadicCube, np.ndarray]]:
    cubes = []
    witness: dict[DyadicCube, np.ndarray] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        head, _, tail = line.partition(":")
        parts = head.split()
        if len(parts) < 2:
            raise ValueError(f"line {line_no}: expected 'level index...'")
        cube = DyadicCube(int(parts[0]), tuple(int(p) for p in parts[1:]))
        cubes.append(cube)
        if tail.strip():
            witness[cube] = np.array([int(t) for t in tail.split(",")], dtype=int)
    return cubes, witness
