"""Projectivization and affine patching, and the ray map back to the input torus.

The curve is closed up projectively and cut with a random affine chart
v . x = 1 whose rays with nonpositive coordinates carry all the tropical
data; a good chart keeps every boundary point (intersection with the
coordinate hyperplanes) finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .poly import LinearForm, PolySystem, homogenize
from .util import stream

#: boundary coordinates above this magnitude mean the patch failed operationally
_FINITE_BOUND = 1e6


@dataclass(frozen=True)
class PatchVector:
    """Chart vector v of length n+1 with no zero entries."""

    v: np.ndarray
    real_only: bool = False

    def __post_init__(self):
        v = np.asarray(self.v, dtype=complex).copy()
        if np.any(v == 0):
            raise ValueError("patch vector entries must be nonzero")
        if self.real_only and np.any(v.imag != 0):
            raise ValueError("real patch requested but vector has imaginary entries")
        v.flags.writeable = False
        object.__setattr__(self, "v", v)

    def __len__(self):
        return len(self.v)


def draw_patch(size: int, real_only: bool, seed: int = 0) -> PatchVector:
    """Random chart vector: entries in [0.5, 1.5] (real) or unit modulus (complex)."""
    rng = stream(seed, "patch")
    if real_only:
        v = rng.uniform(0.5, 1.5, size=size).astype(complex)
    else:
        v = np.exp(2j * np.pi * rng.uniform(size=size))
    return PatchVector(v, real_only)


def build_patched_system(f: PolySystem, v: PatchVector) -> PolySystem:
    """Homogenized equations plus the chart equation v . x = 1."""
    if len(v) != f.nvars + 1:
        raise ValueError(f"patch vector must have length {f.nvars + 1}")
    hom = homogenize(f)
    return hom.appended(LinearForm(v.v, 1.0))


def verify_patch(ws_hat, v: PatchVector, boundary) -> bool:
    """Operational check of the chart condition.

    A failing chart sends some boundary point to infinity, which shows up as
    a diverged boundary path or an unbounded boundary coordinate; with empty
    boundary the check holds vacuously.
    """
    diverged = getattr(boundary, "diverged", 0)
    if diverged:
        return False
    points = getattr(boundary, "points", boundary)
    for p in points:
        if np.max(np.abs(np.asarray(p, dtype=complex))) > _FINITE_BOUND:
            return False
    return True


def map_ray_back(r) -> tuple:
    """Project a patched-curve ray (length n+1) to the input torus (length n).

    (r_0, ..., r_n) -> (r_0 - r_1, ..., r_0 - r_n).  The all-equal ray is the
    lineality direction and is rejected.
    """
    r = [int(x) for x in r]
    if any(x < 0 for x in r):
        raise ValueError("expected a nonnegative ray")
    if len(set(r)) == 1:
        raise ValueError("ray is the lineality direction; it maps to zero")
    return tuple(r[0] - x for x in r[1:])


def is_primitive(vec) -> bool:
    g = 0
    for x in vec:
        g = math.gcd(g, int(x))
    return g == 1
