"""Height-field interpolation from mixed value/gradient/directional constraints.

The fitted field has the form

    s(x) = sum_i  a_i  phi(|x - x_i|)                    (value centers)
         + sum_j <b_j, -grad_x phi(|x - x_j|)>           (gradient centers)
         + sum_k  g_k <u_k, -grad_x phi(|x - x_k|)>      (directional centers)
         + p(x)

with the triharmonic kernel phi(r) = r^3, grad_x phi = 3 r (x - c), and the
second-derivative blocks 3 (delta_ab r + d_a d_b / r) taken as 0 at r = 0.
Each constraint functional applied to each basis term yields a symmetric
saddle-point system; polynomial side conditions keep the radial coefficients
orthogonal to the polynomial space.

Coordinates are internally shifted and uniformly scaled onto a unit square
before assembly so conditioning does not depend on map extent; the interpolant
stores the transform and applies it transparently on evaluation.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from .errors import EmptyConstraintsError, SingularSystemError
from .geometry import Point2

_UNIT_NORM_TOL = 1e-12


class Kernel(Enum):
    TRIHARMONIC = "triharmonic"  # phi(r) = r^3


class ConstraintKind(Enum):
    VALUE = "value"
    GRADIENT = "gradient"
    DIRECTIONAL = "directional"


@dataclass(frozen=True)
class Constraint:
    """One interpolation datum at a map location.

    VALUE pins s(x) = value. GRADIENT pins grad s(x) = vector. DIRECTIONAL pins
    <grad s(x), vector> = value with a unit-norm vector.
    """

    kind: ConstraintKind
    location: Point2
    value: float = 0.0
    vector: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        if not math.isfinite(self.value):
            raise ValueError("constraint value must be finite")
        if self.kind is ConstraintKind.VALUE:
            if self.vector is not None:
                raise ValueError("VALUE constraint takes no vector")
        else:
            if self.vector is None:
                raise ValueError(f"{self.kind.value} constraint needs a vector")
            vx, vy = self.vector
            if not (math.isfinite(vx) and math.isfinite(vy)):
                raise ValueError("constraint vector must be finite")
            if self.kind is ConstraintKind.DIRECTIONAL:
                if abs(math.hypot(vx, vy) - 1.0) > _UNIT_NORM_TOL:
                    raise ValueError("directional constraint direction must have unit norm")

    @staticmethod
    def value_at(x: float, y: float, v: float) -> "Constraint":
        return Constraint(ConstraintKind.VALUE, Point2(x, y), value=v)

    @staticmethod
    def gradient_at(x: float, y: float, gx: float, gy: float) -> "Constraint":
        return Constraint(ConstraintKind.GRADIENT, Point2(x, y), vector=(gx, gy))

    @staticmethod
    def directional_at(x: float, y: float, ux: float, uy: float, c: float) -> "Constraint":
        n = math.hypot(ux, uy)
        if n == 0.0:
            raise ValueError("directional constraint direction must be non-zero")
        return Constraint(ConstraintKind.DIRECTIONAL, Point2(x, y), value=c, vector=(ux / n, uy / n))


@dataclass(frozen=True)
class HbrbfConfig:
    kernel: Kernel = Kernel.TRIHARMONIC
    poly_degree: int = 1
    regularization: float = 0.0
    dedup_radius: float = 0.0

    def __post_init__(self) -> None:
        if self.poly_degree not in (0, 1):
            raise ValueError("poly_degree must be 0 or 1")
        if not math.isfinite(self.regularization) or self.regularization < 0:
            raise ValueError("regularization must be finite and >= 0")
        if self.dedup_radius < 0:
            raise ValueError("dedup_radius must be >= 0")

    @property
    def poly_dim(self) -> int:
        return 1 if self.poly_degree == 0 else 3


@dataclass(frozen=True)
class RowKey:
    """Identifies one row/column of the assembled system.

    kind is a ConstraintKind for constraint rows or None for polynomial
    side-condition rows; index refers to the constraint list passed to
    assemble_system; component is 0/1 for the two rows of a GRADIENT
    constraint and the monomial index for polynomial rows.
    """

    kind: ConstraintKind | None
    index: int
    component: int = 0


# ---------------------------------------------------------------------------
# Deduplication
# ---------------------------------------------------------------------------


def dedup_constraints(constraints: Sequence[Constraint], radius: float) -> list[Constraint]:
    """Greedily merge same-kind constraints within radius by averaging.

    Locations and payloads are averaged; merged directional directions are
    re-normalized (kept from the first member if the average degenerates).
    """
    if radius <= 0.0:
        return list(constraints)
    clusters: list[dict] = []
    for c in constraints:
        target = None
        for cl in clusters:
            if cl["kind"] is not c.kind:
                continue
            cx = cl["sx"] / cl["n"]
            cy = cl["sy"] / cl["n"]
            if math.hypot(c.location.x - cx, c.location.y - cy) <= radius:
                target = cl
                break
        if target is None:
            clusters.append(
                {
                    "kind": c.kind,
                    "n": 1,
                    "sx": c.location.x,
                    "sy": c.location.y,
                    "sv": c.value,
                    "svx": c.vector[0] if c.vector else 0.0,
                    "svy": c.vector[1] if c.vector else 0.0,
                    "first_vec": c.vector,
                }
            )
        else:
            target["n"] += 1
            target["sx"] += c.location.x
            target["sy"] += c.location.y
            target["sv"] += c.value
            if c.vector is not None:
                target["svx"] += c.vector[0]
                target["svy"] += c.vector[1]
    merged: list[Constraint] = []
    for cl in clusters:
        n = cl["n"]
        loc = Point2(cl["sx"] / n, cl["sy"] / n)
        if cl["kind"] is ConstraintKind.VALUE:
            merged.append(Constraint(cl["kind"], loc, value=cl["sv"] / n))
        elif cl["kind"] is ConstraintKind.GRADIENT:
            merged.append(Constraint(cl["kind"], loc, vector=(cl["svx"] / n, cl["svy"] / n)))
        else:
            ux, uy = cl["svx"] / n, cl["svy"] / n
            norm = math.hypot(ux, uy)
            if norm < 1e-9:
                ux, uy = cl["first_vec"]
            else:
                ux, uy = ux / norm, uy / norm
            merged.append(Constraint(cl["kind"], loc, value=cl["sv"] / n, vector=(ux, uy)))
    return merged


# ---------------------------------------------------------------------------
# Assembly
# ---------------------------------------------------------------------------


def _split_by_kind(constraints: Sequence[Constraint]):
    vals = [c for c in constraints if c.kind is ConstraintKind.VALUE]
    grads = [c for c in constraints if c.kind is ConstraintKind.GRADIENT]
    dirs = [c for c in constraints if c.kind is ConstraintKind.DIRECTIONAL]
    return vals, grads, dirs


def _locations(cs: Iterable[Constraint]) -> np.ndarray:
    pts = [(c.location.x, c.location.y) for c in cs]
    return np.asarray(pts, dtype=float).reshape(-1, 2)


def _diff(P: np.ndarray, Q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Pairwise differences D[i,j] = P[i] - Q[j] and their norms."""
    D = P[:, None, :] - Q[None, :, :]
    R = np.sqrt(np.sum(D * D, axis=2))
    return D, R


def _hessian(D: np.ndarray, R: np.ndarray) -> np.ndarray:
    """H[i,j,a,b] = 3 (delta_ab R + D_a D_b / R), zero where R == 0."""
    Rsafe = np.where(R > 0.0, R, 1.0)
    H = 3.0 * (np.eye(2)[None, None, :, :] * R[:, :, None, None] + D[:, :, :, None] * D[:, :, None, :] / Rsafe[:, :, None, None])
    H[R == 0.0] = 0.0
    return H


def assemble_system(
    constraints: Sequence[Constraint], config: HbrbfConfig
) -> tuple[np.ndarray, np.ndarray, list[RowKey]]:
    """Assemble the symmetric interpolation system in the given coordinates.

    Rows are grouped by kind: value rows, then two rows per gradient
    constraint, then directional rows, then polynomial side conditions; the
    returned row map records which constraint each row belongs to. The
    regularization is added to the diagonal of the radial block only.
    """
    if not constraints:
        raise EmptyConstraintsError("cannot assemble a system from zero constraints")

    vals, grads, dirs = _split_by_kind(constraints)
    kind_order = {ConstraintKind.VALUE: 0, ConstraintKind.GRADIENT: 1, ConstraintKind.DIRECTIONAL: 2}
    orig_index = {ConstraintKind.VALUE: [], ConstraintKind.GRADIENT: [], ConstraintKind.DIRECTIONAL: []}
    for i, c in enumerate(constraints):
        orig_index[c.kind].append(i)

    nv, ng, nd = len(vals), len(grads), len(dirs)
    Xv, Xg, Xd = _locations(vals), _locations(grads), _locations(dirs)
    U = np.asarray([d.vector for d in dirs], dtype=float).reshape(-1, 2)

    n_rbf = nv + 2 * ng + nd
    p = config.poly_dim
    n = n_rbf + p
    A = np.zeros((n, n))

    sl_v = slice(0, nv)
    sl_g = slice(nv, nv + 2 * ng)
    sl_d = slice(nv + 2 * ng, n_rbf)

    if nv:
        D, R = _diff(Xv, Xv)
        A[sl_v, sl_v] = R**3
    if nv and ng:
        D, R = _diff(Xv, Xg)
        block = -3.0 * R[:, :, None] * D  # [i, j, a] = 3 R (x_j - x_i)_a
        A[sl_v, sl_g] = block.reshape(nv, 2 * ng)
        A[sl_g, sl_v] = A[sl_v, sl_g].T
    if nv and nd:
        D, R = _diff(Xv, Xd)
        A[sl_v, sl_d] = -3.0 * R * np.einsum("ika,ka->ik", D, U)
        A[sl_d, sl_v] = A[sl_v, sl_d].T
    if ng:
        D, R = _diff(Xg, Xg)
        H = _hessian(D, R)
        # rows (j, b), cols (j', a): -H[j, j', b, a]
        A[sl_g, sl_g] = -H.transpose(0, 2, 1, 3).reshape(2 * ng, 2 * ng)
    if ng and nd:
        D, R = _diff(Xg, Xd)
        H = _hessian(D, R)
        Hu = np.einsum("jkab,kb->jka", H, U)  # (H u_k)_a at (x_j - x_k)
        A[sl_g, sl_d] = -Hu.transpose(0, 2, 1).reshape(2 * ng, nd)
        A[sl_d, sl_g] = A[sl_g, sl_d].T
    if nd:
        D, R = _diff(Xd, Xd)
        H = _hessian(D, R)
        A[sl_d, sl_d] = -np.einsum("kKab,ka,Kb->kK", H, U, U)

    if config.regularization > 0.0:
        A[:n_rbf, :n_rbf] += config.regularization * np.eye(n_rbf)

    # Polynomial block: L[p_m] per constraint row.
    P = np.zeros((n_rbf, p))
    if nv:
        P[sl_v, 0] = 1.0
        if p == 3:
            P[sl_v, 1] = Xv[:, 0]
            P[sl_v, 2] = Xv[:, 1]
    if ng and p == 3:
        Pg = np.zeros((ng, 2, 3))
        Pg[:, 0, 1] = 1.0
        Pg[:, 1, 2] = 1.0
        P[sl_g] = Pg.reshape(2 * ng, 3)
    if nd and p == 3:
        P[sl_d, 1] = U[:, 0]
        P[sl_d, 2] = U[:, 1]
    A[:n_rbf, n_rbf:] = P
    A[n_rbf:, :n_rbf] = P.T

    b = np.zeros(n)
    b[sl_v] = [c.value for c in vals]
    if ng:
        b[sl_g] = np.asarray([c.vector for c in grads], dtype=float).reshape(-1)
    b[sl_d] = [c.value for c in dirs]

    rows: list[RowKey] = []
    rows += [RowKey(ConstraintKind.VALUE, i) for i in orig_index[ConstraintKind.VALUE]]
    for i in orig_index[ConstraintKind.GRADIENT]:
        rows += [RowKey(ConstraintKind.GRADIENT, i, 0), RowKey(ConstraintKind.GRADIENT, i, 1)]
    rows += [RowKey(ConstraintKind.DIRECTIONAL, i) for i in orig_index[ConstraintKind.DIRECTIONAL]]
    rows += [RowKey(None, -1, m) for m in range(p)]
    return A, b, rows


# ---------------------------------------------------------------------------
# Interpolant
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HbrbfInterpolant:
    """Fitted height field; immutable and safe to share across threads."""

    config: HbrbfConfig
    origin: tuple[float, float]  # internal frame: x' = (x - origin) / scale
    scale: float
    value_centers: np.ndarray  # (nv, 2) internal coords
    grad_centers: np.ndarray  # (ng, 2)
    dir_centers: np.ndarray  # (nd, 2)
    dir_vectors: np.ndarray  # (nd, 2) unit directions
    value_coeffs: np.ndarray  # (nv,)
    grad_coeffs: np.ndarray  # (ng, 2)
    dir_coeffs: np.ndarray  # (nd,)
    poly_coeffs: np.ndarray  # (1,) or (3,), internal frame

    @property
    def centers(self) -> list[tuple[Point2, ConstraintKind]]:
        """Centers in map coordinates, mirroring the deduplicated constraints."""
        out: list[tuple[Point2, ConstraintKind]] = []
        ox, oy = self.origin
        for arr, kind in (
            (self.value_centers, ConstraintKind.VALUE),
            (self.grad_centers, ConstraintKind.GRADIENT),
            (self.dir_centers, ConstraintKind.DIRECTIONAL),
        ):
            for x, y in arr:
                out.append((Point2(ox + self.scale * x, oy + self.scale * y), kind))
        return out

    @property
    def coefficients(self) -> np.ndarray:
        """Radial coefficients in system order (value, gradient pairs, directional)."""
        return np.concatenate([self.value_coeffs, self.grad_coeffs.reshape(-1), self.dir_coeffs])

    def _to_internal(self, points: np.ndarray) -> np.ndarray:
        return (points - np.asarray(self.origin)) / self.scale

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """Heights at an (n, 2) array of map points.

        Accumulates center by center in a fixed order, so each output value is
        bit-identical regardless of how the query points are batched.
        """
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        X = self._to_internal(pts)
        x, y = X[:, 0], X[:, 1]
        acc = np.full(len(X), float(self.poly_coeffs[0]))
        if self.config.poly_degree == 1:
            acc = acc + self.poly_coeffs[1] * x + self.poly_coeffs[2] * y
        for (cx, cy), a in zip(self.value_centers, self.value_coeffs):
            dx, dy = x - cx, y - cy
            r = np.sqrt(dx * dx + dy * dy)
            acc = acc + a * r * r * r
        for (cx, cy), (bx, by) in zip(self.grad_centers, self.grad_coeffs):
            dx, dy = x - cx, y - cy
            r = np.sqrt(dx * dx + dy * dy)
            acc = acc + 3.0 * r * (bx * (cx - x) + by * (cy - y))
        for (cx, cy), (ux, uy), g in zip(self.dir_centers, self.dir_vectors, self.dir_coeffs):
            dx, dy = x - cx, y - cy
            r = np.sqrt(dx * dx + dy * dy)
            acc = acc + g * 3.0 * r * (ux * (cx - x) + uy * (cy - y))
        return acc

    def evaluate(self, point: Point2 | Sequence[float]) -> float:
        if isinstance(point, Point2):
            point = (point.x, point.y)
        return float(self.evaluate_many(np.asarray([point], dtype=float))[0])

    def evaluate_gradient_many(self, points: np.ndarray) -> np.ndarray:
        """Analytic gradients (dz per unit map distance) at an (n, 2) array."""
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        X = self._to_internal(pts)
        x, y = X[:, 0], X[:, 1]
        gx = np.zeros(len(X))
        gy = np.zeros(len(X))
        if self.config.poly_degree == 1:
            gx += float(self.poly_coeffs[1])
            gy += float(self.poly_coeffs[2])
        for (cx, cy), a in zip(self.value_centers, self.value_coeffs):
            dx, dy = x - cx, y - cy
            r = np.sqrt(dx * dx + dy * dy)
            gx = gx + 3.0 * a * r * dx
            gy = gy + 3.0 * a * r * dy
        for (cx, cy), (bx, by) in zip(self.grad_centers, self.grad_coeffs):
            dx, dy = x - cx, y - cy
            r = np.sqrt(dx * dx + dy * dy)
            rs = np.where(r > 0.0, r, 1.0)
            t = (bx * dx + by * dy) / rs
            live = r > 0.0
            gx = gx - 3.0 * np.where(live, t * dx + r * bx, 0.0)
            gy = gy - 3.0 * np.where(live, t * dy + r * by, 0.0)
        for (cx, cy), (ux, uy), g in zip(self.dir_centers, self.dir_vectors, self.dir_coeffs):
            dx, dy = x - cx, y - cy
            r = np.sqrt(dx * dx + dy * dy)
            rs = np.where(r > 0.0, r, 1.0)
            t = (ux * dx + uy * dy) / rs
            live = r > 0.0
            gx = gx - 3.0 * g * np.where(live, t * dx + r * ux, 0.0)
            gy = gy - 3.0 * g * np.where(live, t * dy + r * uy, 0.0)
        return np.stack([gx, gy], axis=1) / self.scale

    def evaluate_gradient(self, point: Point2 | Sequence[float]) -> np.ndarray:
        if isinstance(point, Point2):
            point = (point.x, point.y)
        return self.evaluate_gradient_many(np.asarray([point], dtype=float))[0]

    def side_condition_residual(self) -> float:
        """Max |P^T c| over polynomial moments, relative to coefficient scale."""
        terms = [np.sum(self.value_coeffs)]
        if self.config.poly_degree == 1:
            mx = np.sum(self.value_coeffs * self.value_centers[:, 0]) if len(self.value_centers) else 0.0
            my = np.sum(self.value_coeffs * self.value_centers[:, 1]) if len(self.value_centers) else 0.0
            mx += np.sum(self.grad_coeffs[:, 0]) if len(self.grad_coeffs) else 0.0
            my += np.sum(self.grad_coeffs[:, 1]) if len(self.grad_coeffs) else 0.0
            mx += np.sum(self.dir_coeffs * self.dir_vectors[:, 0]) if len(self.dir_coeffs) else 0.0
            my += np.sum(self.dir_coeffs * self.dir_vectors[:, 1]) if len(self.dir_coeffs) else 0.0
            terms += [mx, my]
        scale = max(1.0, float(np.max(np.abs(self.coefficients))) if len(self.coefficients) else 0.0)
        return float(max(abs(t) for t in terms)) / scale

    @staticmethod
    def constant(value: float, config: HbrbfConfig | None = None) -> "HbrbfInterpolant":
        """A centerless interpolant evaluating to a constant everywhere."""
        config = config or HbrbfConfig()
        poly = np.zeros(config.poly_dim)
        poly[0] = value
        empty2 = np.zeros((0, 2))
        return HbrbfInterpolant(
            config=config,
            origin=(0.0, 0.0),
            scale=1.0,
            value_centers=empty2,
            grad_centers=empty2,
            dir_centers=empty2,
            dir_vectors=empty2,
            value_coeffs=np.zeros(0),
            grad_coeffs=np.zeros((0, 2)),
            dir_coeffs=np.zeros(0),
            poly_coeffs=poly,
        )


# ---------------------------------------------------------------------------
# Fitting
# ---------------------------------------------------------------------------


def _normalization(constraints: Sequence[Constraint]) -> tuple[tuple[float, float], float]:
    xs = [c.location.x for c in constraints]
    ys = [c.location.y for c in constraints]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    scale = max(x1 - x0, y1 - y0)
    if scale <= 0.0:
        scale = 1.0
    return ((x0 + x1) / 2.0, (y0 + y1) / 2.0), scale


def _transform_constraint(c: Constraint, origin: tuple[float, float], scale: float) -> Constraint:
    loc = Point2((c.location.x - origin[0]) / scale, (c.location.y - origin[1]) / scale)
    if c.kind is ConstraintKind.VALUE:
        return Constraint(c.kind, loc, value=c.value)
    if c.kind is ConstraintKind.GRADIENT:
        gx, gy = c.vector
        return Constraint(c.kind, loc, vector=(gx * scale, gy * scale))
    return Constraint(c.kind, loc, value=c.value * scale, vector=c.vector)


def solve_symmetric(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Direct dense solve with an explicit pivot check against near-singularity."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A)
    norm = float(np.max(np.abs(A)))
    pivots = np.abs(np.diag(lu))
    if norm == 0.0 or np.min(pivots) < 1e-12 * norm:
        raise SingularSystemError(
            f"interpolation system is singular or near-singular "
            f"(min pivot {np.min(pivots):.3e} vs |A| {norm:.3e})"
        )
    return scipy.linalg.lu_solve((lu, piv), b)


def fit(constraints: Sequence[Constraint], config: HbrbfConfig | None = None) -> HbrbfInterpolant:
    """Fit an interpolant; with regularization 0 it reproduces every constraint."""
    config = config or HbrbfConfig()
    if not constraints:
        raise EmptyConstraintsError("fit requires at least one constraint")
    merged = dedup_constraints(constraints, config.dedup_radius)
    origin, scale = _normalization(merged)
    internal = [_transform_constraint(c, origin, scale) for c in merged]
    A, b, _rows = assemble_system(internal, config)
    coeffs = solve_symmetric(A, b)

    vals, grads, dirs = _split_by_kind(internal)
    nv, ng, nd = len(vals), len(grads), len(dirs)
    value_coeffs = coeffs[:nv]
    grad_coeffs = coeffs[nv : nv + 2 * ng].reshape(ng, 2)
    dir_coeffs = coeffs[nv + 2 * ng : nv + 2 * ng + nd]
    poly = coeffs[nv + 2 * ng + nd :]
    return HbrbfInterpolant(
        config=config,
        origin=origin,
        scale=scale,
        value_centers=_locations(vals),
        grad_centers=_locations(grads),
        dir_centers=_locations(dirs),
        dir_vectors=np.asarray([d.vector for d in dirs], dtype=float).reshape(-1, 2),
        value_coeffs=value_coeffs,
        grad_coeffs=grad_coeffs,
        dir_coeffs=dir_coeffs,
        poly_coeffs=poly,
    )
