"""Exact and weighted partition functions of a transfer system."""
from __future__ import annotations

import math

import numpy as np
from scipy.special import logsumexp

from .system import TransferSystem


def _poly_step(system: TransferSystem, vec: np.ndarray, max_n: int) -> np.ndarray:
    """Advance an edge-resolved state vector by one interior column."""
    out = np.zeros_like(vec)
    for dn in np.unique(system.dn):
        sel = system.dn == dn
        if dn > max_n:
            continue
        src, dst, mult = system.src[sel], system.dst[sel], system.mult[sel].astype(object)
        contrib = vec[src, : max_n + 1 - dn] * mult[:, None]
        np.add.at(out, (dst[:, None], np.arange(dn, max_n + 1)[None, :]), contrib)
    return out


def _poly_start(system: TransferSystem, max_n: int) -> np.ndarray:
    vec = np.zeros((system.n_states, max_n + 1), dtype=object)
    for d, e, c in zip(system.start_dst, system.start_dn, system.start_mult):
        if e <= max_n:
            vec[d, e] += int(c)
    return vec


def _poly_close(system: TransferSystem, vec: np.ndarray, max_n: int) -> list[int]:
    out = [0] * (max_n + 1)
    for a, e, c in zip(system.end_src, system.end_dn, system.end_mult):
        for k in range(0, max_n + 1 - e):
            if vec[a, k]:
                out[k + e] += vec[a, k] * int(c)
    return out


def edge_polynomials(system: TransferSystem, max_n: int, max_span: int | None = None) -> dict[int, list[int]]:
    """Exact counts ``p_n(s)`` as ``{s: [p_0(s), ..., p_max_n(s)]}``.

    Spans run from 0 up to the largest span with ``2s + 2 <= max_n``
    (or ``max_span`` when given).
    """
    top = (max_n - 2) // 2 if max_span is None else max_span
    res: dict[int, list[int]] = {}
    flat = [0] * (max_n + 1)
    for e, c in system.flat.items():
        if e <= max_n:
            flat[e] += c
    res[0] = flat
    if top < 1:
        return res
    vec = _poly_start(system, max_n)
    for s in range(1, top + 1):
        res[s] = _poly_close(system, vec, max_n)
        if s < top:
            vec = _poly_step(system, vec, max_n)
    return res


def span_count(system: TransferSystem, s: int) -> int:
    """Exact number of span-``s`` polygons (``Q_s(0)``)."""
    if s == 0:
        return sum(system.flat.values())
    vec = [0] * system.n_states
    for d, c in zip(system.start_dst, system.start_mult):
        vec[d] += int(c)
    for _ in range(s - 1):
        nv = [0] * system.n_states
        for a, b, c in zip(system.src.tolist(), system.dst.tolist(), system.mult.tolist()):
            if vec[a]:
                nv[b] += vec[a] * c
        vec = nv
    return sum(vec[a] * int(c) for a, c in zip(system.end_src, system.end_mult))


def log_fixed_span_partition(system: TransferSystem, s: int, g: float) -> float:
    """``log Q_s(g)`` accumulated with per-column renormalisation."""
    if s < 1:
        raise ValueError("fixed-span partition needs s >= 1")
    T = system.matrix(g).T.tocsr()
    vec = system.start_vector(g)
    logscale = 0.0
    for _ in range(s - 1):
        vec = T @ vec
        m = vec.max()
        if m <= 0:
            return -math.inf
        vec /= m
        logscale += math.log(m)
    tot = float(vec @ system.end_vector(g))
    return logscale + math.log(tot) if tot > 0 else -math.inf


def fixed_span_partition(system: TransferSystem, s: int, g: float = 0.0):
    """``Q_s(g) = sum_n p_n(s) exp(g n)``.

    Exact integer at ``g = 0``; otherwise a float (possibly ``inf`` when
    the value overflows; use :func:`log_fixed_span_partition`).
    """
    if s < 1:
        raise ValueError("fixed-span partition needs s >= 1")
    if g == 0:
        return span_count(system, s)
    lq = log_fixed_span_partition(system, s, g)
    return math.exp(lq) if lq < 700 else math.inf


def edge_counts(system: TransferSystem, n: int) -> dict[int, int]:
    """``{s: p_n(s)}`` for one edge count ``n``."""
    if n % 2 or n < 4:
        return {}
    polys = edge_polynomials(system, n)
    return {s: row[n] for s, row in polys.items() if row[n]}


def fixed_edge_partition(system: TransferSystem, n: int, f: float = 0.0) -> float:
    """``Z_n(f) = sum_s p_n(s) exp(f s)``."""
    counts = edge_counts(system, n)
    if not counts:
        return 0.0
    return float(math.exp(log_fixed_edge_partition_from_counts(counts, f)))


def log_fixed_edge_partition_from_counts(counts: dict[int, int], f: float) -> float:
    s = np.array(list(counts), dtype=float)
    logc = np.array([math.log(c) for c in counts.values()])
    return float(logsumexp(logc + f * s))
