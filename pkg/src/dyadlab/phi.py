"""Generalized Phi-functions: per-cell convex integrands for Orlicz-type norms.

Two representations are supported.  `PowerPhi` stores, per cell, one of
    coeff * t^expo          (expo > 1)
    coeff * t               (expo == 1)
    0 for t <= thresh, inf beyond     (expo == inf)
and carries an exact convex conjugate in the same family.  `SampledPhi`
stores a convex table phi(t_j) on a shared t-grid (one row per cell) and
conjugates via the discrete Legendre transform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .mesh import DomainError, Mesh

__all__ = ["PowerPhi", "SampledPhi", "phi_for_exponent", "delta2_check"]

INF = math.inf


@dataclass
class PowerPhi:
    """Per-cell power integrand; exponent inf encodes the 0/inf threshold branch.

    expo[i] == 1:  phi(x_i, t) = coeff[i] * t
    expo[i] in (1, inf):  phi(x_i, t) = coeff[i] * t^expo[i]
    expo[i] == inf: phi(x_i, t) = 0 if t <= coeff[i] else inf
                    (coeff stores the threshold in that branch)
    """

    mesh: Mesh
    expo: np.ndarray
    coeff: np.ndarray

    def __post_init__(self):
        self.expo = np.asarray(self.expo, dtype=float).reshape(self.mesh.shape)
        self.coeff = np.asarray(self.coeff, dtype=float).reshape(self.mesh.shape)
        if np.any(self.expo < 1):
            raise DomainError("phi exponents must lie in [1, inf]")
        if np.any(self.coeff <= 0):
            raise DomainError("phi coefficients/thresholds must be positive")

    def modular(self, t: np.ndarray) -> float:
        """rho_phi(t) = sum_cells phi(x, |t(x)|) * cell_measure; may be inf."""
        t = np.abs(np.asarray(t, dtype=float)).reshape(self.mesh.shape)
        inf_branch = np.isinf(self.expo)
        if np.any(t[inf_branch] > self.coeff[inf_branch] * (1 + 1e-15)):
            return INF
        vals = np.zeros(self.mesh.shape)
        fin = ~inf_branch
        vals[fin] = self.coeff[fin] * np.power(t[fin], self.expo[fin])
        return float(vals.sum() * self.mesh.cell_measure)

    def conjugate(self) -> "PowerPhi":
        expo = np.empty(self.mesh.shape)
        coeff = np.empty(self.mesh.shape)
        e, c = self.expo, self.coeff
        inf_branch = np.isinf(e)
        lin = e == 1.0
        pow_branch = ~(inf_branch | lin)
        # threshold(c) -> linear with slope c
        expo[inf_branch] = 1.0
        coeff[inf_branch] = c[inf_branch]
        # linear(c) -> threshold at c
        expo[lin] = INF
        coeff[lin] = c[lin]
        # c t^e -> c* s^e' with c* = (1/e') (c e)^(1-e')
        ee = e[pow_branch]
        conj = ee / (ee - 1.0)
        expo[pow_branch] = conj
        coeff[pow_branch] = (1.0 / conj) * np.power(c[pow_branch] * ee, 1.0 - conj)
        return PowerPhi(self.mesh, expo, coeff)

    def value(self, t: np.ndarray) -> np.ndarray:
        """Pointwise phi(x, t(x)) with inf where the threshold branch trips."""
        t = np.abs(np.asarray(t, dtype=float)).reshape(self.mesh.shape)
        out = np.zeros(self.mesh.shape)
        inf_branch = np.isinf(self.expo)
        out[inf_branch] = np.where(
            t[inf_branch] > self.coeff[inf_branch] * (1 + 1e-15), INF, 0.0
        )
        fin = ~inf_branch
        out[fin] = self.coeff[fin] * np.power(t[fin], self.expo[fin])
        return out

    def finite_everywhere(self) -> bool:
        return bool(np.all(~np.isinf(self.expo)))


def phi_for_exponent(mesh: Mesh, p: np.ndarray | float, weight: np.ndarray | None = None) -> PowerPhi:
    """The integrand t -> (1/p(x)) (w(x) t)^p(x), with the usual sup-branch at p = inf.

    This is the variable-Lebesgue integrand; p may be a scalar or a
    per-cell array with values in [1, inf].
    """
    p_arr = np.broadcast_to(np.asarray(p, dtype=float), mesh.shape).copy()
    if np.any(p_arr < 1):
        raise DomainError("variable exponents must lie in [1, inf]")
    w = np.ones(mesh.shape) if weight is None else np.asarray(weight, dtype=float).reshape(mesh.shape)
    if np.any(w <= 0):
        raise DomainError("weights must be positive")
    expo = np.where(np.isinf(p_arr), INF, p_arr)
    coeff = np.empty(mesh.shape)
    fin = ~np.isinf(p_arr)
    # (1/p) (w t)^p = (w^p / p) t^p
    coeff[fin] = np.power(w[fin], p_arr[fin]) / p_arr[fin]
    # p = inf: phi_inf(w t) = 0 iff t <= 1/w
    coeff[~fin] = 1.0 / w[~fin]
    return PowerPhi(mesh, expo, coeff)


@dataclass
class SampledPhi:
    """Convex table phi(t_j) per cell on a shared increasing grid of t >= 0.

    The grid must start at 0 with phi(x, 0) = 0; values may be inf from
    some index on.  Evaluation between nodes interpolates the supporting
    piecewise-linear convex minorant, which keeps conjugation involutive
    on the sampled grid.
    """

    mesh: Mesh
    tgrid: np.ndarray
    table: np.ndarray  # shape (cells, len(tgrid))

    def __post_init__(self):
        self.tgrid = np.asarray(self.tgrid, dtype=float)
        self.table = np.asarray(self.table, dtype=float).reshape(
            self.mesh.cell_count, self.tgrid.size
        )
        if self.tgrid[0] != 0 or np.any(np.diff(self.tgrid) <= 0):
            raise DomainError("t-grid must be increasing and start at 0")
        if np.any(self.table[:, 0] != 0):
            raise DomainError("phi(x, 0) must be 0")

    def modular(self, t: np.ndarray) -> float:
        t = np.abs(np.asarray(t, dtype=float)).reshape(-1)
        vals = np.empty(t.size)
        for i, ti in enumerate(t):
            vals[i] = self._interp(i, ti)
        if np.any(np.isinf(vals)):
            return INF
        return float(vals.sum() * self.mesh.cell_measure)

    def _interp(self, cell: int, t: float) -> float:
        grid, row = self.tgrid, self.table[cell]
        if t <= 0:
            return 0.0
        j = int(np.searchsorted(grid, t))
        if j >= grid.size:
            return INF if np.isinf(row[-1]) else row[-1] + self._right_slope(cell) * (
                t - grid[-1]
            )
        if grid[j] == t:
            return float(row[j])
        lo, hi = row[j - 1], row[j]
        if np.isinf(hi):
            return INF
        frac = (t - grid[j - 1]) / (grid[j] - grid[j - 1])
        return float(lo + frac * (hi - lo))

    def _right_slope(self, cell: int) -> float:
        grid, row = self.tgrid, self.table[cell]
        fin = np.isfinite(row)
        idx = np.flatnonzero(fin)
        if idx.size < 2:
            return INF
        a, b = idx[-2], idx[-1]
        return float((row[b] - row[a]) / (grid[b] - grid[a]))

    def conjugate(self, sgrid: np.ndarray | None = None) -> "SampledPhi":
        """Discrete Legendre transform phi*(s) = max_j (s t_j - phi(t_j))."""
        if sgrid is None:
            sgrid = self.tgrid
        sgrid = np.asarray(sgrid, dtype=float)
        out = np.empty((self.mesh.cell_count, sgrid.size))
        finite = np.where(np.isfinite(self.table), self.table, np.nan)
        for k, s in enumerate(sgrid):
            cand = s * self.tgrid[None, :] - finite
            out[:, k] = np.nanmax(cand, axis=1)
        out[:, sgrid == 0] = 0.0
        return SampledPhi(self.mesh, sgrid, np.maximum(out, 0.0))


def delta2_check(
    phi: PowerPhi | SampledPhi,
    s: float | None = None,
    tgrid: np.ndarray | None = None,
    k_cap: float = 1e9,
) -> dict:
    """Search for the doubling constant phi(x, 2t) <= K phi(x, t) (h = 0).

    With `s` also checks the stronger lambda^-s phi(x, lambda t) <= K phi(x, t)
    over doubling steps lambda = 2^j reachable inside the grid.  Returns
    {"holds": bool, "K": float or None, "K_s": ..., "witness": (cell, t, lam)}.
    `tgrid` must be doubling-closed (each t with 2t also on the grid); the
    default is a geometric grid 2^-20 .. 2^20.
    """
    if tgrid is None:
        tgrid = 2.0 ** np.arange(-20, 21)
    tgrid = np.asarray(tgrid, dtype=float)

    def values(ts: np.ndarray) -> np.ndarray:
        if isinstance(phi, PowerPhi):
            cols = [phi.value(np.full(phi.mesh.shape, t)).reshape(-1) for t in ts]
        else:
            cols = [
                np.array([phi._interp(i, t) for i in range(phi.mesh.cell_count)])
                for t in ts
            ]
        return np.stack(cols, axis=1)  # (cells, len(ts))

    v1 = values(tgrid)
    v2 = values(2.0 * tgrid)
    report: dict = {"holds": True, "K": 1.0, "K_s": None, "witness": None}
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(v1 > 0, v2 / v1, np.where(v2 > 0, INF, 1.0))
    worst = float(np.max(ratio))
    if not np.isfinite(worst) or worst > k_cap:
        cell, j = np.unravel_index(int(np.argmax(ratio)), ratio.shape)
        report.update(holds=False, K=None, witness=(int(cell), float(tgrid[j]), 2.0))
        return report
    report["K"] = worst

    if s is not None:
        best = 1.0
        lam = 2.0
        j = 1
        while lam * tgrid[0] <= tgrid[-1]:
            vl = values(lam * tgrid)
            with np.errstate(divide="ignore", invalid="ignore"):
                r = np.where(v1 > 0, lam**-s * vl / v1, np.where(vl > 0, INF, 1.0))
            m = float(np.max(r))
            if not np.isfinite(m) or m > k_cap:
                cell, t_idx = np.unravel_index(int(np.argmax(r)), r.shape)
                report.update(
                    holds=False, K_s=None, witness=(int(cell), float(tgrid[t_idx]), lam)
                )
                return report
            best = max(best, m)
            j += 1
            lam = 2.0**j
        report["K_s"] = best
    return report
