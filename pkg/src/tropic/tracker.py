"""Predictor-corrector continuation for one-parameter polynomial families.

The tracking parameter is a straight segment in the complex plane between
``from_t`` and ``to_t``; loops (for monodromy and for Cauchy integrals) are
polygons of such segments with vertices on a circle.  The predictor is one
explicit Euler step on the Davidenko ODE, the corrector plain Newton.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import TrackingError
from .poly import LinearForm, PolySystem


@dataclass(frozen=True)
class TrackSettings:
    newton_tol: float = 1e-10
    max_newton_iters: int = 10
    step_initial: float = 0.1
    step_min: float = 1e-14
    step_max: float = 0.25
    max_steps: int = 20000
    divergence_norm: float = 1e8

    def __post_init__(self):
        if not (0 < self.step_min <= self.step_initial <= self.step_max):
            raise ValueError("require 0 < step_min <= step_initial <= step_max")
        if self.newton_tol <= 0:
            raise ValueError("tolerances must be positive")


#: step control: halve on corrector failure, double after this many successes
_GROW_AFTER = 3

#: loop-closure tolerance for cycle detection (max-norm)
CLOSURE_TOL = 1e-6


@dataclass
class TrackedPath:
    start: np.ndarray
    end: np.ndarray
    status: str  # success | diverged | stalled
    t_reached: complex
    steps: int = 0
    samples: list | None = None

    @property
    def success(self) -> bool:
        return self.status == "success"


class ConvexCombination:
    """H(x, t) = (1 - t) * target(x) + gamma * t * start(x).

    Both systems are stacked into one evaluator so every Newton or predictor
    step costs a single monomial pass.
    """

    def __init__(self, target: PolySystem, start: PolySystem, gamma: complex = 1.0):
        if len(target.polys) != len(start.polys):
            raise ValueError("target and start systems must have equal size")
        self.target = target
        self.start = start
        self.gamma = complex(gamma)
        self._n = len(target.polys)
        self._stacked = PolySystem(
            target.nvars, list(target.polys) + list(start.polys), target.varnames
        )

    @property
    def nvars(self) -> int:
        return self.target.nvars

    def _split(self, x):
        f, jac = self._stacked.eval_with_jacobian(x)
        n = self._n
        return f[:n], f[n:], jac[:n], jac[n:]

    def evaluate(self, x, t):
        f1, f2, _, _ = self._split(x)
        return (1 - t) * f1 + self.gamma * t * f2

    def jacobian_x(self, x, t):
        _, _, j1, j2 = self._split(x)
        return (1 - t) * j1 + self.gamma * t * j2

    def evaluate_with_jacobian(self, x, t):
        f1, f2, j1, j2 = self._split(x)
        return (1 - t) * f1 + self.gamma * t * f2, (1 - t) * j1 + self.gamma * t * j2

    def dt(self, x, t):
        f1, f2, _, _ = self._split(x)
        return self.gamma * f2 - f1

    def predictor_data(self, x, t):
        f1, f2, j1, j2 = self._split(x)
        return (1 - t) * j1 + self.gamma * t * j2, self.gamma * f2 - f1

    def _split_batch(self, points):
        f, jac = self._stacked.eval_batch(points)
        n = self._n
        return f[:, :n], f[:, n:], jac[:, :n, :], jac[:, n:, :]

    def batch(self, points, t):
        f1, f2, j1, j2 = self._split_batch(points)
        a = (1 - t)[:, None]
        b = (self.gamma * t)[:, None]
        return a * f1 + b * f2, a[:, :, None] * j1 + b[:, :, None] * j2

    def predictor_batch(self, points, t):
        f1, f2, j1, j2 = self._split_batch(points)
        a = (1 - t)[:, None, None]
        b = (self.gamma * t)[:, None, None]
        return a * j1 + b * j2, self.gamma * f2 - f1


class SlidingForm:
    """Fixed equations plus one interpolated affine form.

    H(x, t) = [base(x); t * start_form(x) + (1 - t) * end_form(x)], so t = 1
    sits on the start form and t = 0 on the end form.
    """

    def __init__(self, base: PolySystem, start_form: LinearForm, end_form: LinearForm):
        if start_form.nvars != base.nvars or end_form.nvars != base.nvars:
            raise ValueError("form length must match the system's variable count")
        self.base = base
        self.start_form = start_form
        self.end_form = end_form

    @property
    def nvars(self) -> int:
        return self.base.nvars

    def evaluate(self, x, t):
        row = t * self.start_form.evaluate(x) + (1 - t) * self.end_form.evaluate(x)
        return np.concatenate([self.base.evaluate(x), [row]])

    def jacobian_x(self, x, t):
        grad = t * self.start_form.coeffs + (1 - t) * self.end_form.coeffs
        return np.vstack([self.base.jacobian(x), grad[None, :]])

    def evaluate_with_jacobian(self, x, t):
        f, jac = self.base.eval_with_jacobian(x)
        row = t * self.start_form.evaluate(x) + (1 - t) * self.end_form.evaluate(x)
        grad = t * self.start_form.coeffs + (1 - t) * self.end_form.coeffs
        return np.concatenate([f, [row]]), np.vstack([jac, grad[None, :]])

    def dt(self, x, t):
        row = self.start_form.evaluate(x) - self.end_form.evaluate(x)
        out = np.zeros(len(self.base) + 1, dtype=complex)
        out[-1] = row
        return out

    def predictor_data(self, x, t):
        jac = self.base.jacobian(x)
        grad = t * self.start_form.coeffs + (1 - t) * self.end_form.coeffs
        ht = np.zeros(len(self.base) + 1, dtype=complex)
        ht[-1] = self.start_form.evaluate(x) - self.end_form.evaluate(x)
        return np.vstack([jac, grad[None, :]]), ht

    def _rows_batch(self, points, t):
        s = points @ self.start_form.coeffs - self.start_form.offset
        e = points @ self.end_form.coeffs - self.end_form.offset
        rows = t * s + (1 - t) * e
        grads = t[:, None] * self.start_form.coeffs[None, :] + (1 - t)[:, None] * self.end_form.coeffs[None, :]
        return rows, grads, s - e

    def batch(self, points, t):
        f, jac = self.base.eval_batch(points)
        rows, grads, _ = self._rows_batch(points, t)
        values = np.concatenate([f, rows[:, None]], axis=1)
        jacs = np.concatenate([jac, grads[:, None, :]], axis=1)
        return values, jacs

    def predictor_batch(self, points, t):
        _, jac = self.base.eval_batch(points)
        rows, grads, diff = self._rows_batch(points, t)
        jacs = np.concatenate([jac, grads[:, None, :]], axis=1)
        ht = np.zeros((points.shape[0], len(self.base) + 1), dtype=complex)
        ht[:, -1] = diff
        return jacs, ht

    def frozen_system(self, t: complex) -> PolySystem:
        coeffs = t * self.start_form.coeffs + (1 - t) * self.end_form.coeffs
        offset = t * self.start_form.offset + (1 - t) * self.end_form.offset
        return self.base.appended(LinearForm(coeffs, offset))


class CoordinateScale:
    """H(x, t) = [base(x); x_j - scale * t]: only coordinate j follows t."""

    def __init__(self, base: PolySystem, j: int, scale: complex):
        self.base = base
        self.j = j
        self.scale = complex(scale)

    @property
    def nvars(self) -> int:
        return self.base.nvars

    def evaluate(self, x, t):
        return np.concatenate([self.base.evaluate(x), [x[self.j] - self.scale * t]])

    def jacobian_x(self, x, t):
        grad = np.zeros(self.base.nvars, dtype=complex)
        grad[self.j] = 1.0
        return np.vstack([self.base.jacobian(x), grad[None, :]])

    def evaluate_with_jacobian(self, x, t):
        f, jac = self.base.eval_with_jacobian(x)
        grad = np.zeros(self.base.nvars, dtype=complex)
        grad[self.j] = 1.0
        return np.concatenate([f, [x[self.j] - self.scale * t]]), np.vstack([jac, grad[None, :]])

    def dt(self, x, t):
        out = np.zeros(len(self.base) + 1, dtype=complex)
        out[-1] = -self.scale
        return out

    def predictor_data(self, x, t):
        jac = self.base.jacobian(x)
        grad = np.zeros(self.base.nvars, dtype=complex)
        grad[self.j] = 1.0
        ht = np.zeros(len(self.base) + 1, dtype=complex)
        ht[-1] = -self.scale
        return np.vstack([jac, grad[None, :]]), ht

    def _jac_batch(self, jac):
        rows = jac.shape[0]
        grads = np.zeros((rows, 1, self.base.nvars), dtype=complex)
        grads[:, 0, self.j] = 1.0
        return np.concatenate([jac, grads], axis=1)

    def batch(self, points, t):
        f, jac = self.base.eval_batch(points)
        rows = points[:, self.j] - self.scale * t
        return np.concatenate([f, rows[:, None]], axis=1), self._jac_batch(jac)

    def predictor_batch(self, points, t):
        _, jac = self.base.eval_batch(points)
        ht = np.zeros((points.shape[0], len(self.base) + 1), dtype=complex)
        ht[:, -1] = -self.scale
        return self._jac_batch(jac), ht

    def frozen_system(self, t: complex) -> PolySystem:
        return self.base.appended(LinearForm.coordinate(self.base.nvars, self.j, self.scale * t))


def _newton(homotopy, x, t, settings: TrackSettings):
    """Newton iteration on H(., t); returns (point, converged, first correction norm).

    Convergence is judged on the Newton step size relative to |x| (scale-free,
    so paths may make large excursions); at least one correction is always
    applied so predictor drift cannot accumulate unchecked.
    """
    x = np.asarray(x, dtype=complex)
    both = getattr(homotopy, "evaluate_with_jacobian", None)
    first = 0.0
    prev = np.inf
    for it in range(settings.max_newton_iters):
        if both is not None:
            f, jac = both(x, t)
        else:
            f = homotopy.evaluate(x, t)
            jac = homotopy.jacobian_x(x, t)
        try:
            delta = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError:
            return x, False, first
        size = float(np.max(np.abs(delta)))
        if it == 0:
            first = size
        elif size > 4.0 * prev:
            return x, False, first  # corrections growing: hopeless, fail fast
        prev = size
        x = x + delta
        if not np.all(np.isfinite(x)):
            return x, False, first
        if size < settings.newton_tol * (1.0 + float(np.max(np.abs(x)))):
            return x, True, first
    return x, False, first


def newton_correct(homotopy, x, t, settings: TrackSettings):
    """Newton iteration on H(., t); returns (point, converged)."""
    point, ok, _ = _newton(homotopy, x, t, settings)
    return point, ok


#: en-route corrector tolerance; endpoints are polished at full tolerance
_PATH_TOL = 1e-8


def track(homotopy, start, from_t: complex, to_t: complex, settings: TrackSettings | None = None,
          record: bool = False) -> TrackedPath:
    """Continue a solution of H(x, from_t) = 0 along the segment to to_t."""
    settings = settings or TrackSettings()
    start = np.asarray(start, dtype=complex)
    x = start.copy()
    span = complex(to_t) - complex(from_t)
    samples = [(complex(from_t), start.copy())] if record else None
    if span == 0:
        x, ok = newton_correct(homotopy, x, from_t, settings)
        status = "success" if ok else "stalled"
        return TrackedPath(start, x, status, complex(from_t), 0, samples)

    # intermediate points only steer the predictor; correct them loosely and
    # polish the endpoint at the requested tolerance
    path_tol = max(settings.newton_tol, min(_PATH_TOL, settings.newton_tol * 100))
    path_settings = settings if path_tol == settings.newton_tol else replace(settings, newton_tol=path_tol)

    sigma = 0.0
    step = settings.step_initial
    consecutive = 0
    steps = 0
    predictor = getattr(homotopy, "predictor_data", None)
    while sigma < 1.0:
        if steps >= settings.max_steps:
            return TrackedPath(start, x, "stalled", from_t + sigma * span, steps, samples)
        h = min(step, 1.0 - sigma)
        t0 = from_t + sigma * span
        t1 = from_t + (sigma + h) * span
        # Euler predictor on the Davidenko ODE J dx = -H_t dt
        pred_move = 0.0
        try:
            if predictor is not None:
                jac, ht = predictor(x, t0)
            else:
                jac, ht = homotopy.jacobian_x(x, t0), homotopy.dt(x, t0)
            tangent = np.linalg.solve(jac, -ht * span)
            predicted = x + h * tangent
            pred_move = h * float(np.max(np.abs(tangent)))
        except np.linalg.LinAlgError:
            predicted = x
        if not np.all(np.isfinite(predicted)):
            predicted = x
            pred_move = 0.0
        corrected, ok, first_corr = _newton(homotopy, predicted, t1, path_settings)
        # a correction out of proportion to the predictor move means the
        # corrector was pulled toward a different sheet: reject and shrink
        if ok and first_corr > 0.1 * pred_move + 1e-7 * (1.0 + float(np.max(np.abs(x)))):
            ok = False
        steps += 1
        if ok:
            x = corrected
            sigma += h
            if np.max(np.abs(x)) > settings.divergence_norm:
                return TrackedPath(start, x, "diverged", t1, steps, samples)
            if record:
                samples.append((t1, x.copy()))
            consecutive += 1
            if consecutive >= _GROW_AFTER:
                step = min(step * 2.0, settings.step_max)
                consecutive = 0
        else:
            step *= 0.5
            consecutive = 0
            if step < settings.step_min:
                return TrackedPath(start, x, "stalled", t0, steps, samples)
    if path_settings is not settings:
        polished, ok, _ = _newton(homotopy, x, to_t, settings)
        if ok:
            x = polished
    return TrackedPath(start, x, "success", complex(to_t), steps, samples)


def _solve_rows(jacs, rhs):
    """Batched linear solves; rows with singular matrices come back as None."""
    try:
        return np.linalg.solve(jacs, rhs[..., None])[..., 0], None
    except np.linalg.LinAlgError:
        rows = jacs.shape[0]
        out = np.zeros_like(rhs)
        bad = np.zeros(rows, dtype=bool)
        for i in range(rows):
            try:
                out[i] = np.linalg.solve(jacs[i], rhs[i])
            except np.linalg.LinAlgError:
                bad[i] = True
        return out, bad


def _newton_batch(homotopy, points, t, settings: TrackSettings):
    """Row-wise Newton on H(., t_i); returns (points, converged, first norms)."""
    x = points.copy()
    rows = x.shape[0]
    converged = np.zeros(rows, dtype=bool)
    failed = np.zeros(rows, dtype=bool)
    first = np.zeros(rows)
    prev = np.full(rows, np.inf)
    for it in range(settings.max_newton_iters):
        active = ~(converged | failed)
        if not active.any():
            break
        idx = np.nonzero(active)[0]
        f, jac = homotopy.batch(x[idx], t[idx])
        delta, bad = _solve_rows(jac, -f)
        if bad is not None:
            failed[idx[bad]] = True
            ok_rows = ~bad
            idx = idx[ok_rows]
            if len(idx) == 0:
                continue
            delta = delta[ok_rows]
        size = np.abs(delta).max(axis=1)
        if it == 0:
            first[idx] = size
        else:
            hopeless = size > 4.0 * prev[idx]
            failed[idx[hopeless]] = True
        keep = ~failed[idx]
        idx = idx[keep]
        if len(idx) == 0:
            continue
        size = size[keep]
        x[idx] += delta[keep]
        bad_vals = ~np.isfinite(x[idx]).all(axis=1)
        failed[idx[bad_vals]] = True
        done = size < settings.newton_tol * (1.0 + np.abs(x[idx]).max(axis=1))
        converged[idx[done & ~bad_vals]] = True
        prev[idx] = size
    return x, converged, first


def track_batch(homotopy, starts, from_t: complex, to_t: complex,
                settings: TrackSettings | None = None) -> list:
    """Track many starts through the same segment in lockstep.

    Row-for-row this applies the same stepping rules as :func:`track`, but
    amortizes the numpy dispatch cost across the whole batch.  Falls back to
    the scalar tracker for homotopies without batch evaluation.
    """
    settings = settings or TrackSettings()
    starts = [np.asarray(s, dtype=complex) for s in starts]
    if not starts:
        return []
    if getattr(homotopy, "batch", None) is None or len(starts) == 1:
        return [track(homotopy, s, from_t, to_t, settings) for s in starts]
    span = complex(to_t) - complex(from_t)
    rows = len(starts)
    x = np.array(starts, dtype=complex)
    if span == 0:
        out, conv, _ = _newton_batch(homotopy, x, np.full(rows, complex(from_t)), settings)
        return [
            TrackedPath(starts[i], out[i], "success" if conv[i] else "stalled", complex(from_t), 0)
            for i in range(rows)
        ]
    path_tol = max(settings.newton_tol, min(_PATH_TOL, settings.newton_tol * 100))
    path_settings = settings if path_tol == settings.newton_tol else replace(settings, newton_tol=path_tol)

    sigma = np.zeros(rows)
    step = np.full(rows, settings.step_initial)
    consecutive = np.zeros(rows, dtype=np.int64)
    steps = np.zeros(rows, dtype=np.int64)
    status = np.array(["active"] * rows, dtype=object)
    t_reached = np.full(rows, complex(from_t))

    while True:
        idx = np.nonzero(status == "active")[0]
        if len(idx) == 0:
            break
        h = np.minimum(step[idx], 1.0 - sigma[idx])
        t0 = from_t + sigma[idx] * span
        t1 = from_t + (sigma[idx] + h) * span
        # batched Euler predictor
        jac, ht = homotopy.predictor_batch(x[idx], t0)
        tangent, bad = _solve_rows(jac, -ht * span)
        pred_move = h * np.abs(tangent).max(axis=1)
        predicted = x[idx] + h[:, None] * tangent
        bad_pred = ~np.isfinite(predicted).all(axis=1)
        if bad is not None:
            bad_pred |= bad
        predicted[bad_pred] = x[idx][bad_pred]
        pred_move[bad_pred] = 0.0
        corrected, ok, first = _newton_batch(homotopy, predicted, t1, path_settings)
        jumped = first > 0.1 * pred_move + 1e-7 * (1.0 + np.abs(x[idx]).max(axis=1))
        ok &= ~jumped
        steps[idx] += 1

        acc = idx[ok]
        x[acc] = corrected[ok]
        sigma[acc] += h[ok]
        t_reached[acc] = t1[ok]
        if len(acc):
            blown = np.abs(x[acc]).max(axis=1) > settings.divergence_norm
            status[acc[blown]] = "diverged"
        consecutive[acc] += 1
        grow = consecutive[acc] >= _GROW_AFTER
        step[acc[grow]] = np.minimum(step[acc[grow]] * 2.0, settings.step_max)
        consecutive[acc[grow]] = 0

        rej = idx[~ok]
        step[rej] *= 0.5
        consecutive[rej] = 0
        status[rej[step[rej] < settings.step_min]] = "stalled"

        done = idx[ok][sigma[idx[ok]] >= 1.0]
        still = status[done] == "active"
        status[done[still]] = "success"
        capped = idx[steps[idx] >= settings.max_steps]
        status[capped[status[capped] == "active"]] = "stalled"

    good = np.nonzero(status == "success")[0]
    if len(good) and path_settings is not settings:
        polished, conv, _ = _newton_batch(homotopy, x[good], np.full(len(good), complex(to_t)), settings)
        upd = good[conv]
        x[upd] = polished[conv]
    results = []
    for i in range(rows):
        end_t = complex(to_t) if status[i] == "success" else t_reached[i]
        results.append(TrackedPath(starts[i], x[i].copy(), str(status[i]), end_t, int(steps[i])))
    return results


@dataclass
class LoopSamples:
    """Vertices of regular-polygon loops of the tracking parameter.

    For coordinate loops, j is the driven coordinate and the sample at angle
    theta has x_j = radius * exp(i * theta); thetas run 0 .. 2*pi*c over c
    full loops with m vertices each.  For generic parameter loops j is None
    and radius is the loop's base parameter value.
    """

    j: int | None
    radius: complex
    c: int
    m: int
    thetas: np.ndarray
    points: np.ndarray  # shape (c * m + 1, nvars)


# settings overrides for polygon-chord tracking: chords are short, smooth moves
def _loop_settings(settings: TrackSettings) -> TrackSettings:
    return replace(settings, step_initial=0.5, step_max=1.0)


def parameter_loop(homotopy, start, base_t: complex, m: int, c_max: int,
                   settings: TrackSettings | None = None,
                   closure_tol: float = CLOSURE_TOL) -> LoopSamples:
    """Loop the parameter around the circle |t| = |base_t| until closure.

    Tracks chord segments between the m-th roots of unity times base_t,
    recording every vertex; stops at the first full loop count c <= c_max
    whose endpoint returns to the start within closure_tol (max-norm).  On an
    ambiguous near-closure, retries once with a tightened Newton tolerance.
    """
    settings = settings or TrackSettings()
    loop_settings = _loop_settings(settings)
    for attempt in range(2):
        start_arr = np.asarray(start, dtype=complex)
        x, ok = newton_correct(homotopy, start_arr, base_t, loop_settings)
        if not ok:
            raise TrackingError("loop start point does not satisfy the system")
        vertices = [x.copy()]
        best_miss = np.inf
        closed_c = None
        for loop in range(1, c_max + 1):
            for k in range(m):
                t_a = base_t * np.exp(2j * np.pi * ((loop - 1) * m + k) / m)
                t_b = base_t * np.exp(2j * np.pi * ((loop - 1) * m + k + 1) / m)
                res = track(homotopy, x, t_a, t_b, loop_settings)
                if not res.success:
                    raise TrackingError(f"loop segment failed ({res.status}) at loop {loop}")
                x = res.end
                vertices.append(x.copy())
            miss = float(np.max(np.abs(x - vertices[0])))
            best_miss = min(best_miss, miss)
            if miss < closure_tol:
                closed_c = loop
                break
        if closed_c is not None:
            pts = np.array(vertices[: closed_c * m + 1])
            thetas = 2 * np.pi * np.arange(closed_c * m + 1) / m
            return LoopSamples(None, complex(base_t), closed_c, m, thetas, pts)
        # ambiguity: nearly closed but not within tolerance; retry tightened
        if attempt == 0 and best_miss < 100 * closure_tol:
            loop_settings = replace(loop_settings, newton_tol=min(1e-12, loop_settings.newton_tol))
            continue
        raise TrackingError(
            f"no loop closure within {c_max} loops (best miss {best_miss:.3e}); "
            "radius may be outside the endgame operating zone"
        )
    raise TrackingError("unreachable")  # pragma: no cover


def parameter_loop_batch(homotopy, starts, base_t: complex, m: int, c_max: int,
                         settings: TrackSettings | None = None,
                         closure_tol: float = CLOSURE_TOL) -> list:
    """Loop many starts around the same parameter circle in lockstep.

    Returns one LoopSamples per start, or None for rows whose loop failed or
    never closed; callers retry those rows with the scalar machinery.
    """
    settings = settings or TrackSettings()
    loop_settings = _loop_settings(settings)
    rows = len(starts)
    x = np.array([np.asarray(s, dtype=complex) for s in starts])
    x, conv, _ = _newton_batch(homotopy, x, np.full(rows, complex(base_t)), loop_settings)
    results: list = [None] * rows
    active = [i for i in range(rows) if conv[i]]
    vertices = {i: [x[i].copy()] for i in active}
    for loop in range(1, c_max + 1):
        if not active:
            break
        for k in range(m):
            t_a = base_t * np.exp(2j * np.pi * ((loop - 1) * m + k) / m)
            t_b = base_t * np.exp(2j * np.pi * ((loop - 1) * m + k + 1) / m)
            tracked = track_batch(homotopy, [x[i] for i in active], t_a, t_b, loop_settings)
            still = []
            for i, res in zip(active, tracked):
                if res.success:
                    x[i] = res.end
                    vertices[i].append(res.end.copy())
                    still.append(i)
            active = still
            if not active:
                break
        closed = [i for i in active
                  if float(np.max(np.abs(x[i] - vertices[i][0]))) < closure_tol]
        for i in closed:
            pts = np.array(vertices[i][: loop * m + 1])
            thetas = 2 * np.pi * np.arange(loop * m + 1) / m
            results[i] = LoopSamples(None, complex(base_t), loop, m, thetas, pts)
        active = [i for i in active if i not in closed]
    return results


def track_coordinate_circle(curve_system: PolySystem, j: int, radius: complex, start,
                            vertices_per_loop: int, loops_max: int,
                            settings: TrackSettings | None = None) -> LoopSamples:
    """Newton-homotopy loops of x_j around the circle of the given radius.

    The start point must lie on the curve with x_j = radius.  Returns samples
    at theta = 2*pi*l/m for l = 0..c*m where c is the detected cycle number.
    """
    homotopy = CoordinateScale(curve_system, j, radius)
    samples = parameter_loop(homotopy, start, 1.0, vertices_per_loop, loops_max, settings)
    samples.j = j
    samples.radius = complex(radius)
    return samples
