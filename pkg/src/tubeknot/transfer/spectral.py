"""Dominant eigen-data and free energies."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

import numpy as np
import scipy.sparse.linalg as spla
from scipy.optimize import brentq
from scipy.sparse.csgraph import breadth_first_order, connected_components

from ..errors import BracketingFailure, NonPrimitiveMatrix
from .system import TransferSystem

#: Systems up to this many states are diagonalised densely.
DENSE_LIMIT = 2500
#: Target relative residual ``|T v - lam v| / (lam |v|)``.
RESIDUAL_TOL = 1e-12


@dataclass(frozen=True)
class Eigen:
    """Perron data of ``T(g)``.

    ``u`` and ``v`` are the positive left and right eigenvectors, scaled
    so that ``v.sum() == 1`` and ``u @ v == 1``.
    """

    g: float
    lam: float
    u: np.ndarray
    v: np.ndarray
    residual: float
    iterations: int
    method: str

    @property
    def log_lam(self) -> float:
        return math.log(self.lam)


def period(system: TransferSystem) -> int:
    """Period of the (irreducible) transition graph."""
    T = system.matrix(0.0)
    order, _ = breadth_first_order(T, 0, directed=True)
    level = np.full(system.n_states, -1)
    level[0] = 0
    indptr, indices = T.indptr, T.indices
    for a in order:
        for b in indices[indptr[a]:indptr[a + 1]]:
            if level[b] < 0:
                level[b] = level[a] + 1
    d = 0
    for a in range(system.n_states):
        for b in indices[indptr[a]:indptr[a + 1]]:
            d = gcd(d, int(level[a] + 1 - level[b]))
    return abs(d)


def check_primitive(system: TransferSystem) -> None:
    """Raise :class:`NonPrimitiveMatrix` unless ``T`` is irreducible and aperiodic."""
    n_comp, _ = connected_components(system.matrix(0.0), directed=True, connection="strong")
    if n_comp != 1:
        raise NonPrimitiveMatrix(f"transition graph has {n_comp} strong components")
    p = period(system)
    if p != 1:
        raise NonPrimitiveMatrix(f"transition graph has period {p}")


def _power_refine(T, Tt, v, u, lam, max_iter=200):
    """Polish eigenvectors by power steps under a spectral shift-free update."""
    it = 0
    res = math.inf
    for it in range(1, max_iter + 1):
        w = T @ v
        lam = float(w.sum() / v.sum())
        res = float(np.abs(w - lam * v).max() / (lam * np.abs(v).max()))
        v = w / w.sum()
        u = Tt @ u
        u /= u.sum()
        if res < RESIDUAL_TOL:
            break
    return v, u, lam, res, it


def dominant(system: TransferSystem, g: float = 0.0) -> Eigen:
    """Perron eigenvalue and eigenvectors of ``T(g)``."""
    return _dominant_cached(system, float(g))


@lru_cache(maxsize=4096)
def _dominant_cached(system: TransferSystem, g: float) -> Eigen:
    T = system.matrix(g).tocsr()
    Tt = T.T.tocsr()
    n = system.n_states
    if n <= DENSE_LIMIT:
        A = T.toarray()
        w, vr = np.linalg.eig(A)
        k = int(np.argmax(w.real))
        v = np.abs(vr[:, k].real)
        w2, vl = np.linalg.eig(A.T)
        k2 = int(np.argmax(w2.real))
        u = np.abs(vl[:, k2].real)
        lam = float(w[k].real)
        method = "dense"
    else:
        lam_c, vr = spla.eigs(T, k=1, which="LR")
        _, vl = spla.eigs(Tt, k=1, which="LR")
        v, u, lam = np.abs(vr[:, 0].real), np.abs(vl[:, 0].real), float(lam_c[0].real)
        method = "arpack"
    v = v / v.sum()
    res = float(np.abs(T @ v - lam * v).max() / (lam * np.abs(v).max()))
    it = 0
    if res > RESIDUAL_TOL:
        v, u, lam2, res2, it = _power_refine(T, Tt, v, u, lam)
        if res2 < res:
            lam, res = lam2, res2
    u = u / (u @ v)
    return Eigen(g, lam, u, v, res, it, method)


def log_lambda(system: TransferSystem, g: float) -> float:
    return dominant(system, g).log_lam


def free_energy_per_span(system: TransferSystem, g: float) -> float:
    """``G(g) = log lambda(g)``."""
    return log_lambda(system, g)


def g_star(system: TransferSystem, f: float, window: tuple[float, float] = (-5.0, 5.0),
           tol: float = 1e-10, max_doublings: int = 8) -> float:
    """Root ``g*`` of ``f + log lambda(g) = 0``.

    ``log lambda`` is strictly increasing in ``g``, so the root is unique;
    the window is doubled until it brackets a sign change.
    """
    fn = lambda g: f + log_lambda(system, g)
    lo, hi = window
    for _ in range(max_doublings + 1):
        flo, fhi = fn(lo), fn(hi)
        if flo <= 0 <= fhi:
            if flo == 0:
                return lo
            if fhi == 0:
                return hi
            return brentq(fn, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps)
        width = hi - lo
        if flo > 0:
            lo -= width
        if fhi < 0:
            hi += width
    raise BracketingFailure(f"no sign change of f + log lambda(g) in [{lo}, {hi}] for f={f}")


def free_energy_per_edge(system: TransferSystem, f: float, **kw) -> float:
    """``F(f) = -g*(f)``."""
    return -g_star(system, f, **kw)


def hamiltonian_rate(system: TransferSystem) -> float:
    """``kappa^H = log lambda_H / W`` for a Hamiltonian-restricted system."""
    if not system.hamiltonian:
        raise ValueError("hamiltonian_rate needs a Hamiltonian system")
    return log_lambda(system, 0.0) / system.tube.W


def free_energy(system: TransferSystem, which: str, param: float = 0.0) -> float:
    """Dispatch on ``which`` in ``{"PerEdge", "PerSpan", "HamiltonianRate"}``."""
    if which == "PerEdge":
        return free_energy_per_edge(system, param)
    if which == "PerSpan":
        return free_energy_per_span(system, param)
    if which == "HamiltonianRate":
        return hamiltonian_rate(system)
    raise ValueError(f"unknown free energy {which!r}")
