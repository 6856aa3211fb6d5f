"""Problem definitions, interval grids, sampled functions, and file I/O.

A problem couples three copies of the expression i u' + A_k u, living on
(-inf, a1], [a2, b2], and [a3, +inf), through the unitary boundary maps
u3(a3) = W1 u1(a1) and u2(b2) = W2 u2(a2).  The two infinite intervals are
truncated to length T; every function the package integrates there decays
exponentially (rate |Im lambda| or 1), so the truncation error is e^{-rate*T}.

Grids are uniform.  The endpoint coordinates are stored exactly and the step
is derived from them, never accumulated, so boundary samples always sit on
the interval endpoints.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import GridMismatchError, ValidationError
from .linalg import check_hermitian, check_unitary

OUTER_LEFT = "outer_left"
INNER = "inner"
OUTER_RIGHT = "outer_right"
INTERVAL_IDS = (OUTER_LEFT, INNER, OUTER_RIGHT)

_PROBLEM_KEYS = {
    "dim", "a1", "a2", "b2", "a3", "T", "n_outer", "n_inner",
    "A1", "A2", "A3", "W1", "W2", "tolerances",
}
_TOLERANCE_KEYS = {"eig_tol", "unitary_tol", "residual_tol", "quadrature_rtol"}


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical tolerances used across the package; all overridable per problem."""

    eig_tol: float = 1e-10
    unitary_tol: float = 1e-10
    residual_tol: float = 1e-9
    quadrature_rtol: float = 1e-6

    def __post_init__(self):
        for name in _TOLERANCE_KEYS:
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and value > 0):
                raise ValidationError(f"tolerance {name} must be positive, got {value!r}")


@dataclass(frozen=True)
class IntervalConfig:
    """Interval endpoints, truncation length, and grid sizes."""

    a1: float
    a2: float
    b2: float
    a3: float
    T: float = 40.0
    n_outer: int = 801
    n_inner: int = 801

    def __post_init__(self):
        coords = [("a1", self.a1), ("a2", self.a2), ("b2", self.b2), ("a3", self.a3)]
        for name, value in coords:
            if not math.isfinite(value):
                raise ValidationError(f"coordinate {name} must be finite")
        for (n1, v1), (n2, v2) in zip(coords, coords[1:]):
            if not v1 < v2:
                raise ValidationError(
                    f"interval ordering violated: need {n1} < {n2}, "
                    f"got {n1}={v1!r}, {n2}={v2!r}")
        if not (math.isfinite(self.T) and self.T > 0):
            raise ValidationError(f"truncation length T must be positive, got {self.T!r}")
        if self.n_outer < 2 or self.n_inner < 2:
            raise ValidationError("grid sizes n_outer and n_inner must be at least 2")

    @property
    def delta(self) -> float:
        return self.b2 - self.a2


@dataclass(frozen=True, eq=False)
class ProblemDefinition:
    """A complete operator problem: geometry, coefficients, boundary couplings."""

    dim: int
    intervals: IntervalConfig
    A1: np.ndarray
    A2: np.ndarray
    A3: np.ndarray
    W1: np.ndarray
    W2: np.ndarray
    tolerances: ToleranceConfig = field(default_factory=ToleranceConfig)


def validate_problem(problem: ProblemDefinition) -> ProblemDefinition:
    d = problem.dim
    if not (isinstance(d, int) and d >= 1):
        raise ValidationError(f"dim must be a positive integer, got {d!r}")
    for name in ("A1", "A2", "A3"):
        m = getattr(problem, name)
        if m.shape != (d, d):
            raise ValidationError(f"{name} must be {d}x{d}, got shape {m.shape}")
        check_hermitian(m, name=name)
    for name in ("W1", "W2"):
        m = getattr(problem, name)
        if m.shape != (d, d):
            raise ValidationError(f"{name} must be {d}x{d}, got shape {m.shape}")
        check_unitary(m, name=name, tol=problem.tolerances.unitary_tol)
    return problem


def make_problem(dim, intervals, A1, A2, A3, W1, W2,
                 tolerances: ToleranceConfig | None = None) -> ProblemDefinition:
    """Build and validate a ProblemDefinition from array-likes."""
    mats = {name: np.asarray(m, dtype=complex)
            for name, m in (("A1", A1), ("A2", A2), ("A3", A3), ("W1", W1), ("W2", W2))}
    problem = ProblemDefinition(
        dim=int(dim), intervals=intervals,
        A1=mats["A1"], A2=mats["A2"], A3=mats["A3"],
        W1=mats["W1"], W2=mats["W2"],
        tolerances=tolerances or ToleranceConfig())
    return validate_problem(problem)


def with_truncation(problem: ProblemDefinition, T: float) -> ProblemDefinition:
    return ProblemDefinition(
        dim=problem.dim,
        intervals=replace(problem.intervals, T=float(T)),
        A1=problem.A1, A2=problem.A2, A3=problem.A3,
        W1=problem.W1, W2=problem.W2, tolerances=problem.tolerances)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Samples of a C^d valued function on a uniform grid over [t0, t1]."""

    interval_id: str
    t0: float
    t1: float
    samples: np.ndarray  # shape (n, d), complex

    def __post_init__(self):
        if self.interval_id not in INTERVAL_IDS:
            raise ValidationError(f"unknown interval id {self.interval_id!r}")
        if not self.t1 > self.t0:
            raise ValidationError("grid needs t1 > t0")
        if self.samples.ndim != 2 or self.samples.shape[0] < 2:
            raise ValidationError("grid needs at least 2 samples of shape (n, d)")

    @property
    def n(self) -> int:
        return self.samples.shape[0]

    @property
    def dim(self) -> int:
        return self.samples.shape[1]

    @property
    def h(self) -> float:
        return (self.t1 - self.t0) / (self.n - 1)

    def times(self) -> np.ndarray:
        return np.linspace(self.t0, self.t1, self.n)

    def with_samples(self, samples: np.ndarray) -> "GridFunction":
        samples = np.asarray(samples, dtype=complex)
        if samples.shape != self.samples.shape:
            raise ValidationError(
                f"replacement samples must have shape {self.samples.shape}, "
                f"got {samples.shape}")
        return GridFunction(self.interval_id, self.t0, self.t1, samples)


@dataclass(frozen=True, eq=False)
class TripleFunction:
    """An element of the direct sum space; absent parts are None."""

    u1: GridFunction | None = None
    u2: GridFunction | None = None
    u3: GridFunction | None = None

    def __post_init__(self):
        parts = [p for p in (self.u1, self.u2, self.u3) if p is not None]
        if not parts:
            raise ValidationError("TripleFunction needs at least one part")
        dims = {p.dim for p in parts}
        if len(dims) != 1:
            raise ValidationError(f"inconsistent dimensions across parts: {sorted(dims)}")

    @property
    def dim(self) -> int:
        for p in (self.u1, self.u2, self.u3):
            if p is not None:
                return p.dim
        raise AssertionError("unreachable")

    def parts(self):
        return (self.u1, self.u2, self.u3)


def _odd(n: int) -> int:
    return n if n % 2 == 1 else n + 1


def grid_bounds(interval_id: str, problem: ProblemDefinition) -> tuple[float, float, int]:
    iv = problem.intervals
    if interval_id == OUTER_LEFT:
        return iv.a1 - iv.T, iv.a1, _odd(iv.n_outer)
    if interval_id == INNER:
        return iv.a2, iv.b2, _odd(iv.n_inner)
    if interval_id == OUTER_RIGHT:
        return iv.a3, iv.a3 + iv.T, _odd(iv.n_outer)
    raise ValidationError(f"unknown interval id {interval_id!r}")


def make_grid(interval_id: str, problem: ProblemDefinition) -> GridFunction:
    """Zero-sample grid skeleton for one interval.

    Outer grids cover [a1-T, a1] and [a3, a3+T], the inner grid covers
    [a2, b2]; sample counts are forced odd so composite Simpson applies.
    """
    t0, t1, n = grid_bounds(interval_id, problem)
    samples = np.zeros((n, problem.dim), dtype=complex)
    return GridFunction(interval_id, t0, t1, samples)


def zero_triple(problem: ProblemDefinition) -> TripleFunction:
    return TripleFunction(u1=make_grid(OUTER_LEFT, problem),
                          u2=make_grid(INNER, problem),
                          u3=make_grid(OUTER_RIGHT, problem))


def sampled(problem: ProblemDefinition, interval_id: str, fn) -> GridFunction:
    """Sample a callable t -> C^d vector (or scalar for d=1) on an interval grid."""
    grid = make_grid(interval_id, problem)
    values = np.array([np.atleast_1d(np.asarray(fn(t), dtype=complex))
                       for t in grid.times()])
    return grid.with_samples(values.reshape(grid.n, problem.dim))


def grids_compatible(g1: GridFunction, g2: GridFunction) -> bool:
    return (g1.interval_id == g2.interval_id and g1.t0 == g2.t0
            and g1.t1 == g2.t1 and g1.n == g2.n and g1.dim == g2.dim)


def require_same_grid(g1: GridFunction, g2: GridFunction) -> None:
    if not grids_compatible(g1, g2):
        raise GridMismatchError(
            f"grid mismatch on {g1.interval_id!r}/{g2.interval_id!r}: "
            f"[{g1.t0}, {g1.t1}] n={g1.n} d={g1.dim} vs "
            f"[{g2.t0}, {g2.t1}] n={g2.n} d={g2.dim}")


def require_problem_grid(g: GridFunction, problem: ProblemDefinition) -> None:
    t0, t1, n = grid_bounds(g.interval_id, problem)
    if not (g.t0 == t0 and g.t1 == t1 and g.n == n and g.dim == problem.dim):
        raise GridMismatchError(
            f"{g.interval_id} grid does not match the problem: expected "
            f"[{t0}, {t1}] n={n} d={problem.dim}, got [{g.t0}, {g.t1}] "
            f"n={g.n} d={g.dim}")


def hdot(x: np.ndarray, y: np.ndarray) -> complex:
    """C^d inner product, linear in the first argument, conjugate in the second."""
    return complex(np.sum(x * np.conj(y)))


def _simpson_weights(n: int, h: float) -> np.ndarray:
    if n % 2 == 0:
        raise ValidationError(f"composite Simpson needs an odd sample count, got {n}")
    w = np.full(n, 2.0)
    w[1::2] = 4.0
    w[0] = 1.0
    w[-1] = 1.0
    return w * (h / 3.0)


def l2_inner_product(u: TripleFunction, v: TripleFunction) -> complex:
    """Composite Simpson quadrature of sum_parts int (u(t), v(t))_H dt.

    Conjugate symmetric bit for bit: swapping the arguments conjugates every
    addend through the same summation order.
    """
    total = 0j
    for gu, gv in zip(u.parts(), v.parts()):
        if (gu is None) != (gv is None):
            raise GridMismatchError("triple functions have different parts present")
        if gu is None:
            continue
        require_same_grid(gu, gv)
        w = _simpson_weights(gu.n, gu.h)
        # Real and imaginary parts assembled explicitly: IEEE products commute
        # and sums negate exactly, so swapping the arguments conjugates the
        # result bit for bit (a fused complex multiply would not).
        ur, ui = gu.samples.real, gu.samples.imag
        vr, vi = gv.samples.real, gv.samples.imag
        re = np.sum(ur * vr + ui * vi, axis=1)
        im = np.sum(ui * vr - ur * vi, axis=1)
        total += complex(float(np.sum(w * re)), float(np.sum(w * im)))
    return total


def l2_norm(u: TripleFunction) -> float:
    return math.sqrt(max(l2_inner_product(u, u).real, 0.0))


def grid_l2_norm(g: GridFunction) -> float:
    w = _simpson_weights(g.n, g.h)
    val = float(np.sum(w * np.sum(np.abs(g.samples) ** 2, axis=1)))
    return math.sqrt(max(val, 0.0))


# ---------------------------------------------------------------------------
# Problem document I/O.  Complex numbers are always two-element [re, im].

def _parse_matrix(doc, name: str, d: int) -> np.ndarray:
    if not (isinstance(doc, list) and len(doc) == d):
        raise ValidationError(f"{name} must be a {d}x{d} matrix of [re, im] pairs")
    out = np.zeros((d, d), dtype=complex)
    for i, row in enumerate(doc):
        if not (isinstance(row, list) and len(row) == d):
            raise ValidationError(f"{name} row {i} must have {d} entries")
        for j, entry in enumerate(row):
            if not (isinstance(entry, list) and len(entry) == 2
                    and all(isinstance(x, (int, float)) for x in entry)):
                raise ValidationError(
                    f"{name}[{i}][{j}] must be a [re, im] pair of numbers")
            out[i, j] = complex(entry[0], entry[1])
    return out


def _require_number(doc, key: str) -> float:
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"field {key!r} must be a number, got {value!r}")
    return float(value)


def problem_from_dict(doc: dict) -> ProblemDefinition:
    if not isinstance(doc, dict):
        raise ValidationError("problem document must be a JSON object")
    unknown = sorted(set(doc) - _PROBLEM_KEYS)
    if unknown:
        raise ValidationError(f"unknown problem fields: {', '.join(unknown)}")
    missing = sorted(_PROBLEM_KEYS - {"tolerances"} - set(doc))
    if missing:
        raise ValidationError(f"missing problem fields: {', '.join(missing)}")
    dim = doc["dim"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise ValidationError(f"dim must be a positive integer, got {dim!r}")
    for key in ("n_outer", "n_inner"):
        if isinstance(doc[key], bool) or not isinstance(doc[key], int):
            raise ValidationError(f"field {key!r} must be an integer")
    tolerances = ToleranceConfig()
    if "tolerances" in doc:
        tdoc = doc["tolerances"]
        if not isinstance(tdoc, dict):
            raise ValidationError("tolerances must be an object")
        unknown = sorted(set(tdoc) - _TOLERANCE_KEYS)
        if unknown:
            raise ValidationError(f"unknown tolerance fields: {', '.join(unknown)}")
        tolerances = ToleranceConfig(**{k: float(v) for k, v in tdoc.items()})
    intervals = IntervalConfig(
        a1=_require_number(doc, "a1"), a2=_require_number(doc, "a2"),
        b2=_require_number(doc, "b2"), a3=_require_number(doc, "a3"),
        T=_require_number(doc, "T"),
        n_outer=doc["n_outer"], n_inner=doc["n_inner"])
    return make_problem(
        dim=dim, intervals=intervals,
        A1=_parse_matrix(doc["A1"], "A1", dim),
        A2=_parse_matrix(doc["A2"], "A2", dim),
        A3=_parse_matrix(doc["A3"], "A3", dim),
        W1=_parse_matrix(doc["W1"], "W1", dim),
        W2=_parse_matrix(doc["W2"], "W2", dim),
        tolerances=tolerances)


def load_problem(text: str) -> ProblemDefinition:
    """Parse and validate a problem JSON document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"problem document is not valid JSON: {exc}") from exc
    return problem_from_dict(doc)


def matrix_to_doc(m: np.ndarray) -> list:
    return [[[float(m[i, j].real), float(m[i, j].imag)]
             for j in range(m.shape[1])] for i in range(m.shape[0])]


def vector_to_doc(v: np.ndarray) -> list:
    return [[float(x.real), float(x.imag)] for x in v]


def problem_to_dict(problem: ProblemDefinition) -> dict:
    iv = problem.intervals
    tol = problem.tolerances
    return {
        "dim": problem.dim,
        "a1": iv.a1, "a2": iv.a2, "b2": iv.b2, "a3": iv.a3,
        "T": iv.T, "n_outer": iv.n_outer, "n_inner": iv.n_inner,
        "A1": matrix_to_doc(problem.A1),
        "A2": matrix_to_doc(problem.A2),
        "A3": matrix_to_doc(problem.A3),
        "W1": matrix_to_doc(problem.W1),
        "W2": matrix_to_doc(problem.W2),
        "tolerances": {
            "eig_tol": tol.eig_tol, "unitary_tol": tol.unitary_tol,
            "residual_tol": tol.residual_tol,
            "quadrature_rtol": tol.quadrature_rtol,
        },
    }


def grid_to_doc(g: GridFunction) -> dict:
    return {"interval": g.interval_id,
            "samples": [vector_to_doc(row) for row in g.samples]}


def grid_from_doc(doc: dict, problem: ProblemDefinition) -> GridFunction:
    if not isinstance(doc, dict) or set(doc) != {"interval", "samples"}:
        raise ValidationError(
            'function sample document must have exactly the fields "interval" and "samples"')
    interval_id = doc["interval"]
    if interval_id not in INTERVAL_IDS:
        raise ValidationError(f"unknown interval {interval_id!r}")
    grid = make_grid(interval_id, problem)
    rows = doc["samples"]
    if not (isinstance(rows, list) and len(rows) == grid.n):
        raise ValidationError(
            f"sample count must match the problem grid ({grid.n} nodes for "
            f"{interval_id}), got {len(rows) if isinstance(rows, list) else rows!r}")
    samples = np.zeros((grid.n, problem.dim), dtype=complex)
    for k, row in enumerate(rows):
        if not (isinstance(row, list) and len(row) == problem.dim):
            raise ValidationError(f"sample {k} must have {problem.dim} entries")
        for j, entry in enumerate(row):
            if not (isinstance(entry, list) and len(entry) == 2):
                raise ValidationError(f"sample {k} entry {j} must be [re, im]")
            samples[k, j] = complex(entry[0], entry[1])
    return grid.with_samples(samples)
