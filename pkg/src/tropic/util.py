"""Small shared helpers: seed streams, point bookkeeping, optional threading."""

from __future__ import annotations

import os
import zlib
from concurrent.futures import ThreadPoolExecutor

import numpy as np

_MAX_SEED = 2**63 - 1


def stream(seed: int, label: str) -> np.random.Generator:
    """Named random stream derived from a single master seed.

    Different labels give statistically independent generators, and adding a
    new stream never reshuffles an existing one.
    """
    key = zlib.crc32(label.encode("utf-8"))
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(key,)))


def substream_seed(seed: int, label: str) -> int:
    """Integer seed for a named child stream (for APIs that take a seed)."""
    return int(stream(seed, label).integers(_MAX_SEED))


def thread_count() -> int:
    """Parallelism cap from TROPIC_THREADS (default 1: sequential)."""
    raw = os.environ.get("TROPIC_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def parallel_map(fn, items):
    """Map preserving input order; fans out across threads when allowed.

    Results must not depend on execution order; callers treat this as a plain
    map.
    """
    items = list(items)
    workers = thread_count()
    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def max_norm(v) -> float:
    v = np.asarray(v)
    if v.size == 0:
        return 0.0
    return float(np.max(np.abs(v)))


def lex_key(point) -> tuple:
    """Deterministic sort key for a complex vector."""
    p = np.asarray(point, dtype=complex)
    out = []
    for z in p:
        out.append(float(z.real))
        out.append(float(z.imag))
    return tuple(out)


def dedup_points(points, tol: float):
    """Cluster points by max-norm distance ``tol``.

    Returns (representatives, groups) where groups[i] lists the indices of
    ``points`` merged into representatives[i].  Representatives are sorted
    lexicographically.  The representative of a cluster is its first member in
    lexicographic order, which keeps the output independent of input order.
    """
    order = sorted(range(len(points)), key=lambda i: lex_key(points[i]))
    reps: list[np.ndarray] = []
    groups: list[list[int]] = []
    for i in order:
        p = np.asarray(points[i], dtype=complex)
        for k, rep in enumerate(reps):
            if max_norm(p - rep) < tol:
                groups[k].append(i)
                break
        else:
            reps.append(p)
            groups.append([i])
    return reps, groups


def is_real_vector(p, tol: float) -> bool:
    """Reality test: imaginary part small relative to the point's size."""
    p = np.asarray(p, dtype=complex)
    return max_norm(p.imag) < tol * (1.0 + max_norm(p))


def sign_vector(p) -> tuple:
    """Signs of p0*pk for k = 1..n, on the real part of ``p``."""
    r = np.asarray(p, dtype=complex).real
    return tuple(1 if r[0] * x > 0 else -1 for x in r[1:])
