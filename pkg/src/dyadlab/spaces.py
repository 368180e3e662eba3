"""Norm oracles for function spaces on a dyadic mesh.

Every space is a concrete class with an exact `norm`; Koethe-dual norms
are dispatched by `kothe_dual_norm`, which returns a value together with
a certification grade:

    EXACT        closed form (Hoelder) or convergent 1-d minimization
    LP           convex-solver reference value (trustworthy, not closed form)
    LOWER_BOUND  seeded multi-start ascent over the unit ball

Suprema over cubes always range over the finite canonical dyadic grid of
the mesh, which is what makes each norm exactly computable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterator, Sequence

import numpy as np

from .mesh import DomainError, DyadicCube, GridFunction, Mesh, MeshMismatchError
from .phi import INF, PowerPhi, SampledPhi, phi_for_exponent

__all__ = [
    "Certification",
    "Space",
    "WeightedLebesgue",
    "VariableLebesgue",
    "MusielakOrlicz",
    "OrliczAmemiya",
    "Morrey",
    "Concavification",
    "KotheDual",
    "WeakType",
    "block_space",
    "conjugate_exponent",
    "luxemburg_norm",
    "amemiya_norm",
    "kothe_dual_norm",
    "weak_norm",
    "MixedFamily",
    "mixed_norm",
    "dual_norm_lower",
    "dual_norm_reference",
    "lebesgue_pairing_witness",
    "space_to_config",
    "space_from_config",
    "render_canonical",
]


class Certification(str, Enum):
    EXACT = "exact"
    LP = "lp"
    LOWER_BOUND = "lower_bound"


def conjugate_exponent(p: float) -> float:
    if p == 1:
        return INF
    if p == INF:
        return 1.0
    return p / (p - 1.0)


def _as_values(mesh: Mesh, f) -> np.ndarray:
    if isinstance(f, GridFunction):
        if f.mesh != mesh:
            raise MeshMismatchError("function lives on a different mesh")
        return f.values
    arr = np.asarray(f, dtype=float)
    if arr.size != mesh.cell_count:
        raise MeshMismatchError("cell count mismatch")
    if not np.all(np.isfinite(arr)):
        raise DomainError("norm input must be finite")
    return arr.reshape(mesh.shape)


class Space:
    """Base class; subclasses implement `norm` on cell-value arrays."""

    mesh: Mesh
    kind: str = "abstract"

    def norm(self, f) -> float:
        raise NotImplementedError

    @property
    def quasi_constant(self) -> float:
        """Recorded quasi-triangle constant K (1 for the Banach branches)."""
        return 1.0

    @property
    def is_banach(self) -> bool:
        return self.quasi_constant <= 1.0 + 1e-12

    def dual_exact(self) -> "Space | None":
        """Closed-form Koethe dual, when one exists."""
        return None

    def norm_is_exact(self) -> bool:
        return True

    def simplified(self) -> "Space":
        return self

    def label(self) -> str:
        return render_canonical(space_to_config(self))


class WeightedLebesgue(Space):
    """||f|| = ||w f||_p on the mesh, p in (0, inf]."""

    kind = "weighted_lebesgue"

    def __init__(self, mesh: Mesh, p: float, weight=None):
        if not (p > 0):
            raise DomainError(f"Lebesgue exponent must be positive, got {p}")
        self.mesh = mesh
        self.p = float(p)
        w = np.ones(mesh.shape) if weight is None else _as_values(mesh, weight)
        if np.any(w <= 0):
            raise DomainError("weights must be strictly positive")
        self.weight = w

    def norm(self, f) -> float:
        vals = np.abs(_as_values(self.mesh, f)) * self.weight
        if self.p == INF:
            return float(vals.max())
        return float((vals**self.p).sum() * self.mesh.cell_measure) ** (1.0 / self.p)

    @property
    def quasi_constant(self) -> float:
        return 1.0 if self.p >= 1 else 2.0 ** (1.0 / self.p - 1.0)

    def dual_exact(self) -> Space:
        if self.p >= 1:
            return WeightedLebesgue(self.mesh, conjugate_exponent(self.p), 1.0 / self.weight)
        # dual of the p < 1 ball on finite atoms: concentration on one cell
        mu = self.mesh.cell_measure
        u = (1.0 / self.weight) * mu ** (1.0 - 1.0 / self.p)
        return WeightedLebesgue(self.mesh, INF, u)


class VariableLebesgue(Space):
    """Luxemburg norm of the integrand (1/p(x)) (w(x) t)^p(x)."""

    kind = "variable_lebesgue"

    def __init__(self, mesh: Mesh, p, weight=None):
        self.mesh = mesh
        self.p = np.broadcast_to(np.asarray(p, dtype=float), mesh.shape).copy()
        if np.any(self.p < 1):
            raise DomainError("variable exponents must lie in [1, inf]")
        w = np.ones(mesh.shape) if weight is None else _as_values(mesh, weight)
        if np.any(w <= 0):
            raise DomainError("weights must be strictly positive")
        self.weight = w
        self.phi = phi_for_exponent(mesh, self.p, w)

    def norm(self, f) -> float:
        return luxemburg_norm(self.phi, _as_values(self.mesh, f))

    def dual_exact(self) -> Space:
        return OrliczAmemiya(self.mesh, self.phi.conjugate())


class MusielakOrlicz(Space):
    """Luxemburg norm of a general Phi-function."""

    kind = "musielak_orlicz"

    def __init__(self, mesh: Mesh, phi: PowerPhi | SampledPhi):
        self.mesh = mesh
        self.phi = phi

    def norm(self, f) -> float:
        return luxemburg_norm(self.phi, _as_values(self.mesh, f))

    def dual_exact(self) -> Space | None:
        return OrliczAmemiya(self.mesh, self.phi.conjugate())


class OrliczAmemiya(Space):
    """Amemiya (Orlicz) norm inf_k (1 + rho_phi(k g)) / k.

    This is the exact Koethe dual of the Luxemburg norm of phi*, so it
    appears as the dual of the Luxemburg branches.
    """

    kind = "orlicz_amemiya"

    def __init__(self, mesh: Mesh, phi: PowerPhi | SampledPhi):
        self.mesh = mesh
        self.phi = phi

    def norm(self, f) -> float:
        return amemiya_norm(self.phi, _as_values(self.mesh, f))

    def dual_exact(self) -> Space:
        return MusielakOrlicz(self.mesh, self.phi.conjugate())


class Morrey(Space):
    """||f|| = max over dyadic Q of |Q|^(1/q - 1/p) (int_Q |f w|^p)^(1/p), p <= q."""

    kind = "morrey"

    def __init__(self, mesh: Mesh, p: float, q: float, weight=None):
        if not (1 <= p <= q):
            raise DomainError(f"Morrey exponents need 1 <= p <= q, got ({p}, {q})")
        self.mesh = mesh
        self.p = float(p)
        self.q = float(q)
        w = np.ones(mesh.shape) if weight is None else _as_values(mesh, weight)
        if np.any(w <= 0):
            raise DomainError("weights must be strictly positive")
        self.weight = w

    def norm(self, f) -> float:
        vals = np.abs(_as_values(self.mesh, f)) * self.weight
        if self.p == INF:
            return float(vals.max())
        mesh = self.mesh
        powed = vals**self.p
        best = 0.0
        inv_q = 0.0 if self.q == INF else 1.0 / self.q
        for k in range(mesh.L + 1):
            sums = mesh.level_sums(powed, k) * mesh.cell_measure
            qmeas = 2.0 ** (-k * mesh.d)
            scale = qmeas ** (inv_q - 1.0 / self.p)
            best = max(best, scale * float(sums.max()) ** (1.0 / self.p))
        return best

    def norm_local(self, f, cube: DyadicCube) -> float:
        """The single-cube constraint value |Q|^(1/q-1/p) (int_Q |fw|^p)^(1/p)."""
        vals = np.abs(_as_values(self.mesh, f)) * self.weight
        block = vals[self.mesh.cube_slices(cube)]
        if self.p == INF:
            return float(block.max())
        inv_q = 0.0 if self.q == INF else 1.0 / self.q
        mass = float((block**self.p).sum() * self.mesh.cell_measure)
        return cube.measure ** (inv_q - 1.0 / self.p) * mass ** (1.0 / self.p)


class Concavification(Space):
    """||f||_{X^r} = || |f|^(1/r) ||_X ^ r."""

    kind = "concavification"

    def __init__(self, inner: Space, r: float):
        if not (r > 0):
            raise DomainError(f"concavification exponent must be positive, got {r}")
        self.mesh = inner.mesh
        self.inner = inner
        self.r = float(r)

    def norm(self, f) -> float:
        vals = np.abs(_as_values(self.mesh, f))
        return self.inner.norm(vals ** (1.0 / self.r)) ** self.r

    @property
    def quasi_constant(self) -> float:
        k = self.inner.quasi_constant
        return 2.0 ** abs(self.r - 1.0) * k**self.r

    def norm_is_exact(self) -> bool:
        return self.inner.norm_is_exact()

    def simplified(self) -> Space:
        inner = self.inner.simplified()
        r = self.r
        if isinstance(inner, WeightedLebesgue):
            return WeightedLebesgue(self.mesh, inner.p / r, inner.weight**r)
        if isinstance(inner, Morrey) and inner.p / r >= 1:
            q = INF if inner.q == INF else inner.q / r
            return Morrey(self.mesh, inner.p / r, q, inner.weight**r)
        if isinstance(inner, (VariableLebesgue, MusielakOrlicz)) and isinstance(
            inner.phi, PowerPhi
        ):
            new_expo = inner.phi.expo / r
            new_expo[np.isinf(inner.phi.expo)] = INF
            if np.all(new_expo >= 1):
                coeff = inner.phi.coeff.copy()
                thr = np.isinf(inner.phi.expo)
                coeff[thr] = inner.phi.coeff[thr] ** r
                return MusielakOrlicz(self.mesh, PowerPhi(self.mesh, new_expo, coeff))
        if isinstance(inner, Concavification):
            return Concavification(inner.inner, inner.r * r).simplified()
        return Concavification(inner, r)

    def dual_exact(self) -> Space | None:
        return self.simplified().dual_exact() if not isinstance(self.simplified(), Concavification) else None


class KotheDual(Space):
    """The associate space X': ||g|| = sup over the unit ball of X of int |fg|."""

    kind = "kothe_dual"

    def __init__(self, inner: Space):
        self.mesh = inner.mesh
        self.inner = inner

    def norm(self, f) -> float:
        value, _ = kothe_dual_norm(self.inner, f)
        return value

    def norm_is_exact(self) -> bool:
        _, cert = kothe_dual_norm(self.inner, np.zeros(self.mesh.shape), probe=True)
        return cert == Certification.EXACT

    def simplified(self) -> Space:
        inner = self.inner.simplified()
        exact = inner.dual_exact()
        if exact is not None:
            return exact
        return KotheDual(inner)

    def dual_exact(self) -> Space | None:
        inner = self.inner.simplified()
        if inner.dual_exact() is not None:
            d = inner.dual_exact()
            return d.dual_exact()
        if inner.is_banach and inner.norm_is_exact():
            # finite-dimensional biduality: (X')' = X
            return inner
        return None


class WeakType(Space):
    """||f|| = sup over lambda > 0 of lambda ||1_{|f| > lambda}||_X."""

    kind = "weak_type"

    def __init__(self, inner: Space):
        self.mesh = inner.mesh
        self.inner = inner

    def norm(self, f) -> float:
        return weak_norm(self.inner, f)

    @property
    def quasi_constant(self) -> float:
        return 2.0 * self.inner.quasi_constant

    def norm_is_exact(self) -> bool:
        return self.inner.norm_is_exact()


def block_space(mesh: Mesh, q: float, p: float, weight=None) -> Space:
    """The block space with summability q >= p and multiplier weight w,
    realized as the Koethe dual of the conjugate Morrey space."""
    if not (1 <= p <= q):
        raise DomainError(f"block exponents need q >= p >= 1, got ({q}, {p})")
    w = np.ones(mesh.shape) if weight is None else _as_values(mesh, weight)
    return KotheDual(
        Morrey(mesh, conjugate_exponent(q), conjugate_exponent(p), 1.0 / w)
    )


# -- Luxemburg / Amemiya ----------------------------------------------------


def luxemburg_norm(phi: PowerPhi | SampledPhi, f, rtol: float = 1e-12) -> float:
    """inf{lambda > 0 : rho_phi(f / lambda) <= 1} by bisection."""
    vals = np.abs(np.asarray(f, dtype=float))
    if not np.all(np.isfinite(vals)):
        raise DomainError("luxemburg input must be finite")
    if np.all(vals == 0):
        return 0.0
    scale = float(vals.max())

    def ok(lam: float) -> bool:
        return phi.modular(vals / lam) <= 1.0

    hi = scale
    for _ in range(200):
        if ok(hi):
            break
        hi *= 2.0
    else:
        raise RuntimeError("luxemburg bisection failed to bracket from above")
    lo = hi
    for _ in range(200):
        cand = lo / 2.0
        if not ok(cand):
            break
        lo = cand
    else:
        return 0.0
    lo = lo / 2.0
    while (hi - lo) > rtol * hi:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def amemiya_norm(phi: PowerPhi | SampledPhi, g, rtol: float = 1e-12) -> float:
    """inf_{k > 0} (1 + rho_phi(k g)) / k, minimized by golden section.

    The objective is unimodal for convex modulars; the bracket is grown
    geometrically and a failure to bracket raises rather than returning a
    silent value.
    """
    vals = np.abs(np.asarray(g, dtype=float))
    if np.all(vals == 0):
        return 0.0

    def h(k: float) -> float:
        m = phi.modular(k * vals)
        return INF if math.isinf(m) else (1.0 + m) / k

    # geometric scan for the unimodal valley
    js = np.arange(-60, 61)
    hs = [h(float(2.0**j)) for j in js]
    if all(math.isinf(v) for v in hs):
        raise RuntimeError("amemiya bracket failure: objective infinite everywhere")
    jstar = int(np.argmin(hs))
    lo = float(2.0 ** js[max(jstar - 1, 0)])
    hi = float(2.0 ** js[min(jstar + 1, len(js) - 1)])
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = h(c), h(d)
    for _ in range(400):
        if (b - a) <= rtol * max(abs(a), abs(b)):
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = h(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = h(d)
    k = 0.5 * (a + b)
    best = min(fc, fd, h(k))
    if math.isinf(best):
        best = min(v for v in hs if not math.isinf(v))
    return float(best)


# -- dual norms ---------------------------------------------------------------


def kothe_dual_norm(X: Space, g, seed: int = 0, budget: int = 400, probe: bool = False):
    """||g||_{X'} with a certification grade.

    Closed forms are used when available (weighted Lebesgue via Hoelder,
    Luxemburg branches via the Amemiya formula); everything else falls
    back to a seeded multi-start ascent over the unit ball, reported as
    LOWER_BOUND.  With probe=True no work is done and the value is 0; use
    it to query the certification grade of a branch.
    """
    X = X.simplified()
    if isinstance(X, WeightedLebesgue):
        if probe:
            return 0.0, Certification.EXACT
        return X.dual_exact().norm(g), Certification.EXACT
    if isinstance(X, (VariableLebesgue, MusielakOrlicz, OrliczAmemiya)):
        cert = (
            Certification.EXACT if isinstance(X.phi, PowerPhi) else Certification.LP
        )
        if probe:
            return 0.0, cert
        return X.dual_exact().norm(g), cert
    if isinstance(X, KotheDual):
        inner = X.inner.simplified()
        if inner.is_banach and inner.norm_is_exact():
            cert = Certification.EXACT
            if probe:
                return 0.0, cert
            return inner.norm(g), cert
    if probe:
        return 0.0, Certification.LOWER_BOUND
    return dual_norm_lower(X, g, seed=seed, budget=budget), Certification.LOWER_BOUND


def weak_norm(X: Space, f) -> float:
    """sup_lambda lambda ||1_{|f| > lambda}||_X, exact on the finite mesh.

    The supremum equals max over the distinct positive values v of |f| of
    v * ||1_{|f| >= v}||_X (approach lambda from below each value)."""
    vals = np.abs(_as_values(X.mesh, f))
    out = 0.0
    for v in np.unique(vals[vals > 0]):
        out = max(out, float(v) * X.norm((vals >= v).astype(float)))
    return out


@dataclass
class MixedFamily:
    """Finite family of grid functions indexed by dyadic cubes."""

    mesh: Mesh
    members: list[tuple[DyadicCube, np.ndarray]]

    def __post_init__(self):
        fixed = []
        for cube, f in self.members:
            self.mesh.check_cube(cube)
            fixed.append((cube, _as_values(self.mesh, f)))
        self.members = fixed

    def __len__(self):
        return len(self.members)


def mixed_norm(X: Space, r: float, family: MixedFamily) -> float:
    """|| (sum_Q |f_Q|^r)^(1/r) ||_X  (pointwise sup over the family for r = inf)."""
    if r < 1:
        raise DomainError(f"mixed-norm exponent must lie in [1, inf], got {r}")
    if not family.members:
        return 0.0
    stack = np.stack([np.abs(f) for _, f in family.members])
    if r == INF:
        env = stack.max(axis=0)
    else:
        env = (stack**r).sum(axis=0) ** (1.0 / r)
    return X.norm(env)


# -- ascent lower bound and convex reference ----------------------------------


def lebesgue_pairing_witness(X: WeightedLebesgue, g) -> np.ndarray:
    """f >= 0 achieving Hoelder equality sup int f|g| over the X-ball."""
    g = np.abs(_as_values(X.mesh, g))
    w = X.weight
    if X.p == INF:
        return 1.0 / w
    if X.p == 1:
        quot = g / w
        out = np.where(quot >= quot.max() * (1 - 1e-12), 1.0 / w, 0.0)
        return out
    pc = conjugate_exponent(X.p)
    return g ** (pc - 1.0) * w**-pc


def _candidate_stream(
    X: Space, objective: Callable[[np.ndarray], float], seed: int
) -> Iterator[np.ndarray]:
    """Deterministic stream of nonnegative candidates: structured pool,
    then multiplicative hill-climbing around the best seen so far."""
    mesh = X.mesh
    rng = np.random.default_rng(seed)
    yield np.ones(mesh.shape)
    for cube in mesh.cubes():
        ind = np.zeros(mesh.shape)
        ind[mesh.cube_slices(cube)] = 1.0
        yield ind
    best = None
    best_val = -INF
    sigma = 1.0
    while True:
        if best is None:
            cand = np.exp(rng.normal(0.0, 1.0, size=mesh.shape))
        else:
            cand = best * np.exp(rng.normal(0.0, sigma, size=mesh.shape))
            sigma = max(0.02, sigma * 0.995)
        yield cand
        val = objective(cand)
        if val > best_val:
            best_val, best = val, cand


def dual_norm_lower(X: Space, g, seed: int = 0, budget: int = 400) -> float:
    """Multi-start ascent lower bound for sup{int |fg| : ||f||_X = 1}."""
    mesh = X.mesh
    gabs = np.abs(_as_values(mesh, g))
    if np.all(gabs == 0):
        return 0.0
    mu = mesh.cell_measure

    def ratio(f: np.ndarray) -> float:
        nf = X.norm(f)
        if nf <= 0 or not math.isfinite(nf):
            return 0.0
        return float((f * gabs).sum() * mu) / nf

    best = max(ratio(gabs), ratio(np.ones(mesh.shape)))
    stream = _candidate_stream(X, ratio, seed)
    for _, cand in zip(range(budget), stream):
        best = max(best, ratio(cand))
    return best


def _support_cube(mesh: Mesh, gabs: np.ndarray) -> DyadicCube:
    """Minimal dyadic cube containing the support of g."""
    grid = gabs.reshape(mesh.shape) > 0
    cube = DyadicCube(mesh.L, tuple(int(i) for i in np.argwhere(grid)[0]))
    while cube.level > 0:
        parent = cube.parent()
        outside = grid.copy()
        outside[mesh.cube_slices(cube)] = False
        if not outside.any():
            return cube
        cube = parent
    return cube


def dual_norm_reference(X: Space, g) -> float:
    """Support-function value sup{int f|g| : f in ball(X)} by convex solver.

    Supported for weighted Lebesgue, the Luxemburg branches with finite
    power integrands, and Morrey.  Intended as the small-scale
    certification oracle for branches whose duals are otherwise only
    lower-bounded.  The maximizer can be restricted to the minimal dyadic
    cube containing supp(g) (constraints are monotone in |f|), which
    keeps indicator duals cheap on deeper meshes.
    """
    import cvxpy as cp

    X = X.simplified()
    mesh = X.mesh
    gabs = np.abs(_as_values(mesh, g)).reshape(-1)
    if not np.any(gabs > 0):
        return 0.0
    mu = mesh.cell_measure
    support = _support_cube(mesh, gabs)
    ids = mesh.cells_in(support)
    f = cp.Variable(ids.size, nonneg=True)
    objective = cp.Maximize(cp.sum(cp.multiply(gabs[ids] * mu, f)))
    constraints = []
    if isinstance(X, WeightedLebesgue):
        if X.p < 1:
            raise DomainError("convex reference requires p >= 1")
        wf = cp.multiply(X.weight.reshape(-1)[ids], f)
        if X.p == INF:
            constraints.append(wf <= 1.0)
        else:
            constraints.append(cp.norm(wf, X.p) <= mu ** (-1.0 / X.p))
    elif isinstance(X, (VariableLebesgue, MusielakOrlicz)) and isinstance(X.phi, PowerPhi):
        expo = X.phi.expo.reshape(-1)[ids]
        coeff = X.phi.coeff.reshape(-1)[ids]
        terms = []
        for i in range(ids.size):
            if math.isinf(expo[i]):
                constraints.append(f[i] <= coeff[i])
            else:
                terms.append(coeff[i] * mu * cp.power(f[i], expo[i]))
        if terms:
            constraints.append(cp.sum(cp.hstack(terms)) <= 1.0)
    elif isinstance(X, Morrey):
        w = X.weight.reshape(-1)
        inv_q = 0.0 if X.q == INF else 1.0 / X.q
        pos = {int(i): j for j, i in enumerate(ids)}
        for cube in mesh.cubes():
            if support.contains(cube):
                sel = np.array([pos[int(i)] for i in mesh.cells_in(cube)])
                radius = cube.measure ** (1.0 / X.p - inv_q)
            elif cube.contains(support):
                sel = np.arange(ids.size)
                radius = cube.measure ** (1.0 / X.p - inv_q)
            else:
                continue
            wf = cp.multiply(w[ids][sel], f[sel])
            if X.p == INF:
                constraints.append(wf <= cube.measure**-inv_q)
            else:
                constraints.append(cp.norm(wf, X.p) <= radius * mu ** (-1.0 / X.p))
    else:
        raise DomainError(f"convex reference not available for {X.kind}")
    problem = cp.Problem(objective, constraints)
    problem.solve(solver=cp.CLARABEL)
    if problem.status not in ("optimal", "optimal_inaccurate"):
        raise RuntimeError(f"convex reference solve failed: {problem.status}")
    return float(problem.value)


# -- config documents ---------------------------------------------------------


def space_to_config(X: Space) -> dict:
    if isinstance(X, WeightedLebesgue):
        return {
            "kind": X.kind,
            "p": _num(X.p),
            "weight": [float(v) for v in X.weight.reshape(-1)],
        }
    if isinstance(X, VariableLebesgue):
        return {
            "kind": X.kind,
            "p": [_num(v) for v in X.p.reshape(-1)],
            "weight": [float(v) for v in X.weight.reshape(-1)],
        }
    if isinstance(X, (MusielakOrlicz, OrliczAmemiya)):
        if not isinstance(X.phi, PowerPhi):
            raise DomainError("only power integrands serialize to config documents")
        return {
            "kind": X.kind,
            "expo": [_num(v) for v in X.phi.expo.reshape(-1)],
            "coeff": [float(v) for v in X.phi.coeff.reshape(-1)],
        }
    if isinstance(X, Morrey):
        return {
            "kind": X.kind,
            "p": _num(X.p),
            "q": _num(X.q),
            "weight": [float(v) for v in X.weight.reshape(-1)],
        }
    if isinstance(X, Concavification):
        return {"kind": X.kind, "r": float(X.r), "inner": space_to_config(X.inner)}
    if isinstance(X, KotheDual):
        return {"kind": X.kind, "inner": space_to_config(X.inner)}
    if isinstance(X, WeakType):
        return {"kind": X.kind, "inner": space_to_config(X.inner)}
    raise DomainError(f"cannot serialize space kind {X.kind}")


def space_from_config(mesh: Mesh, doc: dict) -> Space:
    kind = doc.get("kind")
    if kind == "weighted_lebesgue":
        return WeightedLebesgue(mesh, _denum(doc["p"]), np.asarray(doc["weight"]))
    if kind == "variable_lebesgue":
        p = np.asarray([_denum(v) for v in doc["p"]], dtype=float)
        return VariableLebesgue(mesh, p, np.asarray(doc["weight"]))
    if kind in ("musielak_orlicz", "orlicz_amemiya"):
        expo = np.asarray([_denum(v) for v in doc["expo"]], dtype=float)
        phi = PowerPhi(mesh, expo, np.asarray(doc["coeff"], dtype=float))
        cls = MusielakOrlicz if kind == "musielak_orlicz" else OrliczAmemiya
        return cls(mesh, phi)
    if kind == "morrey":
        return Morrey(mesh, _denum(doc["p"]), _denum(doc["q"]), np.asarray(doc["weight"]))
    if kind == "concavification":
        return Concavification(space_from_config(mesh, doc["inner"]), float(doc["r"]))
    if kind == "kothe_dual":
        return KotheDual(space_from_config(mesh, doc["inner"]))
    if kind == "weak_type":
        return WeakType(space_from_config(mesh, doc["inner"]))
    raise DomainError(f"unknown space kind {kind!r}")


def _num(v: float):
    return "inf" if v == INF else float(v)


def _denum(v) -> float:
    return INF if v == "inf" else float(v)


def render_canonical(doc: dict) -> str:
    """Stable text rendering of a config tree, for golden tests."""
    import json

    return json.dumps(doc, sort_keys=True, separators=(",", ":"), allow_nan=False)
