"""Sparse multivariate polynomials over complex doubles.

Provides parsing, evaluation, differentiation, homogenization and A*f
randomization for the polynomial systems that define the input curve.  All
objects are immutable after construction; arrays are marked read-only so they
can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ParseError
from .util import stream


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


class Polynomial:
    """A sparse polynomial: exponent rows (terms x nvars) and complex coefficients.

    Terms are kept in lexicographic exponent order with duplicates merged and
    exact-zero coefficients dropped, so two equal polynomials compare equal.
    """

    __slots__ = ("nvars", "exponents", "coeffs", "_term_degrees")

    def __init__(self, nvars: int, exponents, coeffs):
        exponents = np.asarray(exponents, dtype=np.int64).reshape(-1, nvars)
        coeffs = np.asarray(coeffs, dtype=complex).reshape(-1)
        if exponents.shape[0] != coeffs.shape[0]:
            raise ValueError("exponent rows and coefficients differ in length")
        if exponents.size and exponents.min() < 0:
            raise ValueError("exponents must be nonnegative")
        merged: dict[tuple, complex] = {}
        for row, c in zip(exponents, coeffs):
            key = tuple(int(e) for e in row)
            merged[key] = merged.get(key, 0.0 + 0.0j) + complex(c)
        items = sorted((k, c) for k, c in merged.items() if c != 0)
        self.nvars = nvars
        if items:
            self.exponents = _frozen(np.array([k for k, _ in items], dtype=np.int64))
            self.coeffs = _frozen(np.array([c for _, c in items], dtype=complex))
        else:
            self.exponents = _frozen(np.zeros((0, nvars), dtype=np.int64))
            self.coeffs = _frozen(np.zeros(0, dtype=complex))
        # total degree per term, cached for the evaluation hot path
        self._term_degrees = _frozen(self.exponents.sum(axis=1))

    @property
    def degree(self) -> int:
        """Total degree; 0 for constants and for the zero polynomial."""
        if len(self.coeffs) == 0:
            return 0
        return int(self._term_degrees.max())

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.coeffs.imag == 0.0))

    def evaluate(self, point) -> complex:
        point = np.asarray(point, dtype=complex)
        if point.shape != (self.nvars,):
            raise ValueError(f"expected point of length {self.nvars}, got {point.shape}")
        if len(self.coeffs) == 0:
            return 0.0 + 0.0j
        mono = np.prod(point[None, :] ** self.exponents, axis=1)
        return complex(self.coeffs @ mono)

    def diff(self, var: int) -> "Polynomial":
        keep = self.exponents[:, var] > 0
        exps = self.exponents[keep].copy()
        coeffs = self.coeffs[keep] * exps[:, var]
        exps[:, var] -= 1
        return Polynomial(self.nvars, exps, coeffs)

    def homogenized(self, degree: int | None = None) -> "Polynomial":
        """Homogenize with a new variable inserted at index 0."""
        d = self.degree if degree is None else degree
        if len(self.coeffs) == 0:
            return Polynomial(self.nvars + 1, np.zeros((0, self.nvars + 1)), [])
        fill = (d - self._term_degrees).reshape(-1, 1)
        exps = np.hstack([fill, self.exponents])
        return Polynomial(self.nvars + 1, exps, self.coeffs)

    def embedded(self, nvars: int, positions) -> "Polynomial":
        """Reinterpret over a larger variable set; positions maps old -> new index."""
        exps = np.zeros((len(self.coeffs), nvars), dtype=np.int64)
        for old, new in enumerate(positions):
            exps[:, new] = self.exponents[:, old]
        return Polynomial(nvars, exps, self.coeffs)

    def scaled(self, c: complex) -> "Polynomial":
        return Polynomial(self.nvars, self.exponents, self.coeffs * c)

    @staticmethod
    def combination(terms) -> "Polynomial":
        """Linear combination sum(c * p) over (c, p) pairs (all same nvars)."""
        terms = list(terms)
        nvars = terms[0][1].nvars
        exps = np.vstack([p.exponents for _, p in terms])
        coeffs = np.concatenate([c * p.coeffs for c, p in terms])
        return Polynomial(nvars, exps, coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.nvars == other.nvars
            and self.exponents.shape == other.exponents.shape
            and bool(np.array_equal(self.exponents, other.exponents))
            and bool(np.allclose(self.coeffs, other.coeffs, rtol=0, atol=0))
        )

    def __hash__(self):
        return hash((self.nvars, self.exponents.tobytes(), self.coeffs.tobytes()))

    def format(self, names) -> str:
        if len(self.coeffs) == 0:
            return "0"
        parts = []
        for row, c in zip(self.exponents, self.coeffs):
            factors = []
            for name, e in zip(names, row):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            parts.append(_format_coeff(c, bool(factors)) + "*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        names = [f"x{i}" for i in range(self.nvars)]
        return f"Polynomial({self.format(names)})"


def _format_coeff(c: complex, has_factors: bool) -> str:
    if c.imag == 0:
        r = c.real
        if has_factors and r == 1:
            return ""
        if has_factors and r == -1:
            return "-"
        s = f"{r:g}"
    else:
        s = f"({c.real:g}{c.imag:+g}i)"
    return s + ("*" if has_factors else "")


@dataclass(frozen=True)
class LinearForm:
    """Affine-linear form coeffs . x - offset."""

    coeffs: np.ndarray
    offset: complex = 0.0

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _frozen(np.asarray(self.coeffs, dtype=complex).copy()))
        object.__setattr__(self, "offset", complex(self.offset))

    @property
    def nvars(self) -> int:
        return len(self.coeffs)

    def evaluate(self, point) -> complex:
        return complex(np.asarray(point, dtype=complex) @ self.coeffs - self.offset)

    def as_polynomial(self) -> Polynomial:
        n = self.nvars
        exps = np.vstack([np.eye(n, dtype=np.int64), np.zeros((1, n), dtype=np.int64)])
        coeffs = np.concatenate([self.coeffs, [-self.offset]])
        return Polynomial(n, exps, coeffs)

    @staticmethod
    def coordinate(nvars: int, j: int, value: complex = 0.0) -> "LinearForm":
        coeffs = np.zeros(nvars, dtype=complex)
        coeffs[j] = 1.0
        return LinearForm(coeffs, value)

    def translated(self, delta: complex) -> "LinearForm":
        return LinearForm(self.coeffs, self.offset + delta)


class _EvalCache:
    """Stacked monomial table for fast system + Jacobian evaluation.

    All distinct monomials appearing in the system or any first partial are
    evaluated once per point; values are combined by two dense mat-vecs.
    """

    def __init__(self, system: "PolySystem"):
        n, v = len(system.polys), system.nvars
        index: dict[tuple, int] = {}

        def monomial_id(key: tuple) -> int:
            if key not in index:
                index[key] = len(index)
            return index[key]

        sys_entries = []  # (row, monomial, coeff)
        for i, p in enumerate(system.polys):
            for row, c in zip(p.exponents, p.coeffs):
                sys_entries.append((i, monomial_id(tuple(row)), c))
        jac_entries = []
        for i, p in enumerate(system.polys):
            for k in range(v):
                dp = p.diff(k)
                for row, c in zip(dp.exponents, dp.coeffs):
                    jac_entries.append((i * v + k, monomial_id(tuple(row)), c))

        m = max(1, len(index))
        self.exponents = np.zeros((m, v), dtype=np.int64)
        for key, idx in index.items():
            self.exponents[idx] = key
        self.sys_matrix = np.zeros((n, m), dtype=complex)
        for r, mid, c in sys_entries:
            self.sys_matrix[r, mid] += c
        self.jac_matrix = np.zeros((n * v, m), dtype=complex)
        for r, mid, c in jac_entries:
            self.jac_matrix[r, mid] += c
        self.dmax = self.exponents.max(axis=0) if m else np.zeros(v, dtype=np.int64)
        self.shape = (n, v)
        # broadcast powers win for small tables; per-variable tables for large
        self._direct = self.exponents.size <= 2048

    def monomials(self, point: np.ndarray) -> np.ndarray:
        if self._direct:
            return np.prod(point[None, :] ** self.exponents, axis=1)
        vals = np.ones(self.exponents.shape[0], dtype=complex)
        for k in range(self.exponents.shape[1]):
            d = int(self.dmax[k])
            if d == 0:
                continue
            powers = np.empty(d + 1, dtype=complex)
            powers[0] = 1.0
            powers[1:] = np.cumprod(np.full(d, point[k], dtype=complex))
            vals *= powers[self.exponents[:, k]]
        return vals

    def eval_system(self, point: np.ndarray) -> np.ndarray:
        return self.sys_matrix @ self.monomials(point)

    def eval_jacobian(self, point: np.ndarray) -> np.ndarray:
        return (self.jac_matrix @ self.monomials(point)).reshape(self.shape)

    def eval_both(self, point: np.ndarray):
        mono = self.monomials(point)
        return self.sys_matrix @ mono, (self.jac_matrix @ mono).reshape(self.shape)

    def monomials_batch(self, points: np.ndarray) -> np.ndarray:
        """Monomial values for a stack of points, shape (rows, monomials)."""
        rows = points.shape[0]
        vals = np.ones((rows, self.exponents.shape[0]), dtype=complex)
        for k in range(self.exponents.shape[1]):
            d = int(self.dmax[k])
            if d == 0:
                continue
            powers = np.empty((rows, d + 1), dtype=complex)
            powers[:, 0] = 1.0
            np.cumprod(np.broadcast_to(points[:, k : k + 1], (rows, d)), axis=1, out=powers[:, 1:])
            vals *= powers[:, self.exponents[:, k]]
        return vals

    def eval_batch(self, points: np.ndarray):
        """System values (rows, n) and Jacobians (rows, n, v) for stacked points."""
        mono = self.monomials_batch(points)
        n, v = self.shape
        values = mono @ self.sys_matrix.T
        jacs = (mono @ self.jac_matrix.T).reshape(points.shape[0], n, v)
        return values, jacs


class PolySystem:
    """A list of polynomials sharing one variable set."""

    __slots__ = ("nvars", "polys", "varnames", "_cache")

    def __init__(self, nvars: int, polys, varnames=None):
        polys = list(polys)
        for p in polys:
            if p.nvars != nvars:
                raise ValueError("all polynomials must share the system's variable count")
        self.nvars = nvars
        self.polys = tuple(polys)
        self.varnames = tuple(varnames) if varnames else tuple(f"x{i}" for i in range(nvars))
        if len(self.varnames) != nvars:
            raise ValueError("variable name count must match nvars")
        self._cache = None

    def _eval_cache(self) -> _EvalCache:
        if self._cache is None:
            self._cache = _EvalCache(self)
        return self._cache

    @property
    def degrees(self) -> tuple:
        return tuple(p.degree for p in self.polys)

    @property
    def is_real(self) -> bool:
        return all(p.is_real for p in self.polys)

    def evaluate(self, point) -> np.ndarray:
        point = np.asarray(point, dtype=complex)
        if point.shape != (self.nvars,):
            raise ValueError(f"expected point of length {self.nvars}, got {point.shape}")
        return self._eval_cache().eval_system(point)

    def jacobian(self, point) -> np.ndarray:
        point = np.asarray(point, dtype=complex)
        if point.shape != (self.nvars,):
            raise ValueError(f"expected point of length {self.nvars}, got {point.shape}")
        return self._eval_cache().eval_jacobian(point)

    def eval_with_jacobian(self, point):
        return self._eval_cache().eval_both(np.asarray(point, dtype=complex))

    def eval_batch(self, points: np.ndarray):
        """Vectorized values and Jacobians over a stack of points (rows, nvars)."""
        return self._eval_cache().eval_batch(np.asarray(points, dtype=complex))

    def appended(self, extra) -> "PolySystem":
        """New system with one more equation (Polynomial or LinearForm)."""
        if isinstance(extra, LinearForm):
            extra = extra.as_polynomial()
        return PolySystem(self.nvars, list(self.polys) + [extra], self.varnames)

    def __len__(self):
        return len(self.polys)

    def __repr__(self):
        body = "; ".join(p.format(self.varnames) for p in self.polys)
        return f"PolySystem[{', '.join(self.varnames)}]({body})"


def evaluate(p: Polynomial, point) -> complex:
    """Evaluate one polynomial at a complex point."""
    return p.evaluate(point)


def jacobian_eval(f: PolySystem, point) -> np.ndarray:
    """Jacobian matrix of the system at a point; entry (i, j) = df_i/dx_j."""
    return f.jacobian(point)


def homogenize(f: PolySystem) -> PolySystem:
    """Homogenize every equation with a shared new variable at index 0."""
    used = set(f.varnames)
    for candidate in ("x0", "h", "h0", "_h"):
        if candidate not in used:
            hom_name = candidate
            break
    else:
        hom_name = "_h_"
        while hom_name in used:
            hom_name += "_"
    polys = [p.homogenized() for p in f.polys]
    return PolySystem(f.nvars + 1, polys, (hom_name,) + f.varnames)


@dataclass(frozen=True)
class RandomizedSystem:
    """A . f randomization of an overdetermined system down to target_rows rows."""

    base: PolySystem
    matrix: np.ndarray
    result: PolySystem


def randomize(f: PolySystem, target_rows: int, real_only: bool = False, seed: int = 0) -> RandomizedSystem:
    """Replace f by target_rows generic linear combinations of its equations.

    With target_rows equal to the number of equations the matrix is the
    identity and f is returned unchanged.  Entries are drawn uniformly from
    the complex unit disk, or from [-1, 1] when real_only.
    """
    m = len(f.polys)
    if target_rows > m:
        raise ValueError(f"cannot randomize {m} equations up to {target_rows} rows")
    if target_rows == m:
        a = np.eye(m, dtype=complex)
        return RandomizedSystem(f, a, f)
    rng = stream(seed, "randomize")
    while True:
        if real_only:
            a = rng.uniform(-1.0, 1.0, size=(target_rows, m)).astype(complex)
        else:
            radius = np.sqrt(rng.uniform(0.0, 1.0, size=(target_rows, m)))
            angle = rng.uniform(0.0, 2 * np.pi, size=(target_rows, m))
            a = radius * np.exp(1j * angle)
        if np.linalg.matrix_rank(a) == target_rows:
            break
    polys = [Polynomial.combination([(a[i, k], f.polys[k]) for k in range(m)]) for i in range(target_rows)]
    return RandomizedSystem(f, a, PolySystem(f.nvars, polys, f.varnames))


# --- input grammar -----------------------------------------------------------
#
#   vars: x, y
#   f1 = x^6 - x^3 + y^2      # comment
#
# Expressions are sums of terms built from + - * ^ with integer, decimal or
# rational (p/q) coefficients; a coefficient may be juxtaposed with the
# variable that follows it (2x*y).


class _Tokenizer:
    def __init__(self, text: str, line_no: int):
        self.text = text
        self.line_no = line_no
        self.pos = 0

    def error(self, message: str):
        raise ParseError(message, self.line_no, self.pos + 1)

    def peek(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1
        if self.pos >= len(self.text) or self.text[self.pos] == "#":
            return None
        return self.text[self.pos]

    def take_number(self) -> complex:
        start = self.pos
        t = self.text
        while self.pos < len(t) and (t[self.pos].isdigit() or t[self.pos] == "."):
            self.pos += 1
        if self.pos < len(t) and t[self.pos] in "eE":
            probe = self.pos + 1
            if probe < len(t) and t[probe] in "+-":
                probe += 1
            if probe < len(t) and t[probe].isdigit():
                self.pos = probe
                while self.pos < len(t) and t[self.pos].isdigit():
                    self.pos += 1
        token = t[start : self.pos]
        # rational p/q: only between two integer literals
        if (
            "." not in token
            and "e" not in token.lower()
            and self.pos < len(t)
            and t[self.pos] == "/"
            and self.pos + 1 < len(t)
            and t[self.pos + 1].isdigit()
        ):
            self.pos += 1
            dstart = self.pos
            while self.pos < len(t) and t[self.pos].isdigit():
                self.pos += 1
            frac = Fraction(int(token), int(t[dstart : self.pos]))
            return complex(frac)
        try:
            return complex(float(token))
        except ValueError:
            self.error(f"malformed number {token!r}")

    def take_name(self) -> str:
        start = self.pos
        t = self.text
        while self.pos < len(t) and (t[self.pos].isalnum() or t[self.pos] == "_"):
            self.pos += 1
        return t[start : self.pos]

    def take_int(self) -> int:
        ch = self.peek()
        if ch is None or not ch.isdigit():
            self.error("expected an integer exponent after '^'")
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        return int(self.text[start : self.pos])


def _parse_expression(tok: _Tokenizer, var_index: dict) -> Polynomial:
    nvars = len(var_index)
    exps, coeffs = [], []
    sign = 1.0
    first = True
    while True:
        ch = tok.peek()
        if ch is None:
            if first:
                tok.error("empty expression")
            break
        if ch in "+-":
            tok.pos += 1
            sign = 1.0 if ch == "+" else -1.0
            ch = tok.peek()
            if ch is None:
                tok.error("dangling operator at end of expression")
        elif not first:
            tok.error(f"expected '+', '-' or end of expression, found {ch!r}")
        coeff, exp = _parse_term(tok, var_index)
        exps.append(exp)
        coeffs.append(sign * coeff)
        sign = 1.0
        first = False
    return Polynomial(nvars, np.array(exps, dtype=np.int64).reshape(-1, nvars), coeffs)


def _parse_term(tok: _Tokenizer, var_index: dict) -> tuple:
    coeff = 1.0 + 0.0j
    exp = [0] * len(var_index)
    expect_factor = True
    seen = False
    while True:
        ch = tok.peek()
        if expect_factor:
            if ch is None:
                tok.error("expected a coefficient or variable")
            if ch.isdigit() or ch == ".":
                coeff *= tok.take_number()
                seen = True
                # implicit '*' between a coefficient and a following variable
                nxt = tok.peek()
                expect_factor = nxt is not None and (nxt.isalpha() or nxt == "_")
                continue
            if ch.isalpha() or ch == "_":
                name = tok.take_name()
                if name not in var_index:
                    tok.error(f"unknown variable {name!r}")
                power = 1
                if tok.peek() == "^":
                    tok.pos += 1
                    power = tok.take_int()
                exp[var_index[name]] += power
                seen = True
                expect_factor = False
                continue
            tok.error(f"unexpected character {ch!r}")
        else:
            if ch == "*":
                tok.pos += 1
                expect_factor = True
                continue
            if not seen:
                tok.error("empty term")
            return coeff, exp


def parse_system(text: str) -> PolySystem:
    """Parse the UTF-8 input grammar into a PolySystem."""
    var_names: list | None = None
    var_index: dict = {}
    polys = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if var_names is None:
            if not line.startswith("vars:"):
                raise ParseError("expected a 'vars:' line first", line_no, 1)
            names = [v.strip() for v in line[len("vars:") :].split(",")]
            if any(not n or not (n[0].isalpha() or n[0] == "_") or not n.replace("_", "a").isalnum() for n in names):
                raise ParseError("variable names must be identifiers", line_no, 1)
            if len(set(names)) != len(names):
                raise ParseError("duplicate variable name", line_no, 1)
            var_names = names
            var_index = {n: i for i, n in enumerate(names)}
            continue
        if "=" not in line:
            raise ParseError("expected 'name = expression'", line_no, 1)
        _, expr = line.split("=", 1)
        offset = raw.index("=") + 1
        tok = _Tokenizer(raw.split("#", 1)[0][offset:], line_no)
        tok_origin = offset
        try:
            polys.append(_parse_expression(tok, var_index))
        except ParseError as err:
            if err.column is not None:
                raise ParseError(str(err).split(": ", 1)[1], line_no, err.column + tok_origin) from None
            raise
    if var_names is None:
        raise ParseError("input contains no 'vars:' line", 1, 1)
    if not polys:
        raise ParseError("input contains no equations", 1, 1)
    return PolySystem(len(var_names), polys, var_names)
