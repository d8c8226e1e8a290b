"""Numerical integration on 4-D boxes.

Provides 1-D Gauss rules (Legendre, and Jacobi for endpoint power weights),
composite axis rules graded toward a singular point, tensor-product volume
integration, face integration with structural-set surface weights, and
singularity-excluding volume integration.

Surface convention: the quaternionic surface measure on the face of a box
with outward unit normal n is sum_k psi_k n_k dS, i.e. +psi_k dS on the high
face of axis k and -psi_k dS on the low face.  With this convention the
Stokes identity  int_dJ g sigma f = int_J (g psiD[f] + psiD_r[g] f) dV
holds exactly for every structural set (checked in the tests against the
divergence theorem).
"""

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .errors import InvalidExponent, NonFinite
from .quaternion import StructuralSet, quat_mul


@dataclass(frozen=True)
class Box4:
    """Open axis-aligned rectangle J_a^b with corners a < b (componentwise)."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        b = np.asarray(self.b, dtype=float)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if a.shape != (4,) or b.shape != (4,):
            raise ValueError("box corners must be length-4 vectors")
        if not np.all(a < b):
            raise ValueError("box requires a_k < b_k for all k")
        a.setflags(write=False)
        b.setflags(write=False)

    @property
    def measure(self):
        return float(np.prod(self.b - self.a))

    @property
    def diameter(self):
        return float(np.linalg.norm(self.b - self.a))

    def contains(self, x, margin=0.0):
        x = np.asarray(x)
        return bool(np.all(x > self.a + margin) and np.all(x < self.b - margin))

    def boundary_distance(self, x):
        x = np.asarray(x)
        return float(min((x - self.a).min(), (self.b - x).min()))


@dataclass(frozen=True)
class Face:
    """One of the 8 faces of a box: fixed coordinate `axis` at `side`."""

    axis: int
    side: str  # "low" | "high"

    @property
    def orientation(self):
        return 1.0 if self.side == "high" else -1.0


FACES = tuple(Face(k, side) for k in range(4) for side in ("low", "high"))


@dataclass(frozen=True)
class QuadratureSpec:
    """Knobs for the quadrature layer.

    ``order`` is the Gauss order per axis, ``refine_levels`` the length of
    convergence studies, ``exclusion_radius`` the ball/tube radius around
    kernel singularities (defaults to 1e-2 x box diameter when None),
    ``fd_step`` the relative central-difference step, and ``graded`` enables
    composite meshes refined toward singular points.  ``grade_levels``,
    ``grade_order`` and ``grade_ratio`` shape the graded meshes;
    ``seg_order`` is the Gauss order used along the base segments of the
    fractional kernel.
    """

    order: int = 24
    refine_levels: int = 3
    exclusion_radius: float | None = None
    fd_step: float = 1e-5
    graded: bool = False
    grade_levels: int = 4
    grade_order: int = 6
    grade_ratio: float = 0.15
    seg_order: int = 24
    boundary_order: int | None = None

    def __post_init__(self):
        if self.order < 2:
            raise ValueError("order must be >= 2")
        if self.exclusion_radius is not None and self.exclusion_radius <= 0:
            raise ValueError("exclusion_radius must be > 0")
        if self.fd_step <= 0:
            raise ValueError("fd_step must be > 0")

    def resolve_eps(self, box: Box4):
        if self.exclusion_radius is not None:
            return self.exclusion_radius
        return 1e-2 * box.diameter

    def refined(self, level, box: Box4):
        """Spec for refinement level `level`: halved exclusion radius, a
        deeper graded mesh, higher-order face rules, and a finer segment
        rule, so every error source shrinks with the level."""
        eps = self.resolve_eps(box) / 2.0**level
        return replace(
            self,
            exclusion_radius=eps,
            grade_levels=self.grade_levels + level,
            grade_order=self.grade_order + level,
            boundary_order=(self.boundary_order or self.grade_order) + 2 * level,
            seg_order=self.seg_order + 12 * level,
            graded=True,
        )


@lru_cache(maxsize=256)
def _canonical_legendre(n):
    return roots_legendre(n)


@lru_cache(maxsize=1024)
def _canonical_jacobi(n, mu_high, mu_low):
    with np.errstate(invalid="ignore", divide="ignore"):
        return roots_jacobi(n, mu_high, mu_low)


def gauss_legendre(n, lo, hi):
    """Gauss-Legendre nodes and weights on [lo, hi]."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not lo < hi:
        raise ValueError("need lo < hi")
    u, w = _canonical_legendre(n)
    half = (hi - lo) / 2.0
    return lo + half * (u + 1.0), w * half


def gauss_jacobi(n, mu, lo, hi, mu_low=0.0):
    """Nodes and weights for the weight (hi-t)^mu (t-lo)^mu_low on [lo, hi].

    The returned weights absorb the weight function: sum(w * p(t)) equals
    int (hi-t)^mu (t-lo)^mu_low p(t) dt exactly for polynomials p of degree
    <= 2n-1.  Both exponents must exceed -1.
    """
    if mu <= -1.0 or mu_low <= -1.0:
        raise InvalidExponent(f"weight exponents must be > -1, got ({mu}, {mu_low})")
    if not lo < hi:
        raise ValueError("need lo < hi")
    u, w = _canonical_jacobi(n, float(mu), float(mu_low))
    half = (hi - lo) / 2.0
    return lo + half * (u + 1.0), w * half ** (1.0 + mu + mu_low)


def plain_axis_rule(lo, hi, n):
    return gauss_legendre(n, lo, hi)


def power_axis_rule(lo, hi, n, gamma):
    """Rule for plain integrands behaving like (t-lo)^gamma x smooth.

    The Jacobi weights are divided by the power factor at the nodes, so the
    rule is applied to the integrand as-is.
    """
    if gamma == 0.0:
        return gauss_legendre(n, lo, hi)
    t, w = gauss_jacobi(n, 0.0, lo, hi, mu_low=gamma)
    return t, w / (t - lo) ** gamma


def graded_axis_rule(lo, hi, target, order, levels, ratio):
    """Composite Gauss rule on [lo, hi], panels geometrically refined toward
    `target` from both sides.  `target` may lie outside [lo, hi], in which
    case only the approaching side is graded."""
    breaks = {lo, hi}
    if target > lo:
        # panels approaching target from the left
        length = min(target, hi) - lo
        for m in range(1, levels + 1):
            p = min(target, hi) - length * ratio**m
            if p > lo:
                breaks.add(p)
    if target < hi:
        # panels approaching target from the right
        length = hi - max(target, lo)
        for m in range(1, levels + 1):
            p = max(target, lo) + length * ratio**m
            if p < hi:
                breaks.add(p)
    if lo < target < hi:
        breaks.add(target)
    pts = sorted(breaks)
    nodes, weights = [], []
    for p0, p1 in zip(pts[:-1], pts[1:]):
        if p1 - p0 <= 0:
            continue
        t, w = gauss_legendre(order, p0, p1)
        nodes.append(t)
        weights.append(w)
    return np.concatenate(nodes), np.concatenate(weights)


def power_graded_axis_rule(lo, hi, gamma, target, order, levels, ratio):
    """Low-end power panel (exact for (t-lo)^gamma x smooth) plus panels
    graded toward `target` on the rest of the axis."""
    if gamma == 0.0:
        return graded_axis_rule(lo, hi, target, order, levels, ratio)
    if target <= lo:
        split = lo + 0.5 * (hi - lo)
    else:
        split = lo + 0.5 * (min(target, hi) - lo)
    t0, w0 = power_axis_rule(lo, split, max(order, 12), gamma)
    t1, w1 = graded_axis_rule(split, hi, target, order, levels, ratio)
    return np.concatenate([t0, t1]), np.concatenate([w0, w1])


def tensor_product(rules):
    """Cartesian product of four 1-D rules: nodes (N, 4) and weights (N,)."""
    grids = np.meshgrid(*[r[0] for r in rules], indexing="ij")
    nodes = np.stack([g.reshape(-1) for g in grids], axis=-1)
    wgrids = np.meshgrid(*[r[1] for r in rules], indexing="ij")
    weights = np.ones(nodes.shape[0])
    for wg in wgrids:
        weights = weights * wg.reshape(-1)
    return nodes, weights


def face_quadrature(box: Box4, face: Face, rules3):
    """Nodes (N, 4) and scalar weights for one face, given three 1-D rules
    for the free axes (in increasing axis order)."""
    free = [i for i in range(4) if i != face.axis]
    grids = np.meshgrid(*[r[0] for r in rules3], indexing="ij")
    wgrids = np.meshgrid(*[r[1] for r in rules3], indexing="ij")
    shape = grids[0].shape
    nodes = np.empty(shape + (4,))
    for gi, i in enumerate(free):
        nodes[..., i] = grids[gi]
    nodes[..., face.axis] = box.b[face.axis] if face.side == "high" else box.a[face.axis]
    weights = np.ones(shape)
    for wg in wgrids:
        weights = weights * wg
    return nodes.reshape(-1, 4), weights.reshape(-1)


def face_normal_weight(face: Face, psi: StructuralSet):
    """Quaternion surface weight on a face: (outward normal)_k psi_k."""
    return face.orientation * psi[face.axis]


def _check_finite(values):
    if not np.all(np.isfinite(values)):
        raise NonFinite("integrand returned a non-finite value at a quadrature node")


def volume_quadrature(box: Box4, spec: QuadratureSpec):
    rules = [plain_axis_rule(box.a[i], box.b[i], spec.order) for i in range(4)]
    return tensor_product(rules)


def integrate_box4(F, box: Box4, spec: QuadratureSpec):
    """Tensor-product Gauss-Legendre integral of F over the box.

    F maps (N, 4) points to (N, 4) quaternion values; the reduction order is
    fixed by the node ordering, so results are reproducible bit-for-bit.
    """
    nodes, weights = volume_quadrature(box, spec)
    vals = np.asarray(F(nodes))
    _check_finite(vals)
    return (weights[:, None] * vals).sum(axis=0)


def integrate_boundary(F, box: Box4, psi: StructuralSet, spec: QuadratureSpec, side="left"):
    """Surface integral of sigma F (side="left") or F sigma (side="right")
    over the 8 faces of the box."""
    total = None
    for face in FACES:
        free = [i for i in range(4) if i != face.axis]
        rules3 = [plain_axis_rule(box.a[i], box.b[i], spec.order) for i in free]
        nodes, weights = face_quadrature(box, face, rules3)
        vals = np.asarray(F(nodes))
        _check_finite(vals)
        nu = face_normal_weight(face, psi)
        if side == "left":
            contrib = quat_mul(np.broadcast_to(nu, vals.shape), vals)
        elif side == "right":
            contrib = quat_mul(vals, np.broadcast_to(nu, vals.shape))
        else:
            raise ValueError("side must be 'left' or 'right'")
        term = (weights[:, None] * contrib).sum(axis=0)
        total = term if total is None else total + term
    return total


@dataclass(frozen=True)
class BallExclusionResult:
    value: np.ndarray
    eps: float
    skipped_fraction: float


def singular_volume_rules(box: Box4, center, spec: QuadratureSpec):
    """Per-axis rules for a volume integral with a point singularity at
    `center`: graded toward it when spec.graded, else plain Gauss."""
    center = np.asarray(center, dtype=float)
    if spec.graded and box.contains(center):
        return [
            graded_axis_rule(box.a[i], box.b[i], center[i], spec.grade_order,
                             spec.grade_levels, spec.grade_ratio)
            for i in range(4)
        ]
    return [plain_axis_rule(box.a[i], box.b[i], spec.order) for i in range(4)]


def iter_tensor_slabs(rules):
    """Iterate the tensor-product rule in slabs over the first axis.

    Yields (nodes (M, 4), weights (M,)) with M = n1*n2*n3, keeping peak
    memory small for large meshes; the slab order is deterministic.
    """
    t0, w0 = rules[0]
    grids = np.meshgrid(*[r[0] for r in rules[1:]], indexing="ij")
    sub_nodes = np.stack([g.reshape(-1) for g in grids], axis=-1)
    wg = np.meshgrid(*[r[1] for r in rules[1:]], indexing="ij")
    sub_w = np.ones(sub_nodes.shape[0])
    for g in wg:
        sub_w = sub_w * g.reshape(-1)
    m = sub_nodes.shape[0]
    nodes = np.empty((m, 4))
    nodes[:, 1:] = sub_nodes
    for i in range(len(t0)):
        nodes[:, 0] = t0[i]
        yield nodes.copy(), w0[i] * sub_w


def ball_excluded_quadrature(box: Box4, center, eps, spec: QuadratureSpec):
    """Volume nodes/weights with nodes inside B(center, eps) dropped.

    Returns (nodes, weights, skipped_fraction); the mesh is graded toward
    the center when spec.graded is set and the center lies in the box.
    """
    center = np.asarray(center, dtype=float)
    rules = singular_volume_rules(box, center, spec)
    nodes, weights = tensor_product(rules)
    if np.linalg.norm(np.clip(center, box.a, box.b) - center) < eps:
        dist2 = ((nodes - center) ** 2).sum(axis=1)
        keep = dist2 >= eps * eps
        skipped = float(weights[~keep].sum() / box.measure)
        nodes, weights = nodes[keep], weights[keep]
    else:
        skipped = 0.0
    return nodes, weights, skipped


def integrate_excluding_ball(F, box: Box4, center, eps, spec: QuadratureSpec):
    """Integral of F over the box minus the Euclidean ball B(center, eps)."""
    nodes, weights, skipped = ball_excluded_quadrature(box, center, eps, spec)
    vals = np.asarray(F(nodes))
    _check_finite(vals)
    value = (weights[:, None] * vals).sum(axis=0)
    return BallExclusionResult(value=value, eps=float(eps), skipped_fraction=skipped)


def sphere3_quadrature(center, radius, n_theta=12):
    """Product Gauss rule on the 3-sphere of given center and radius.

    Parameterization x = r(cos a, sin a cos b, sin a sin b cos c,
    sin a sin b sin c) with dS = r^3 sin^2 a sin b da db dc.
    """
    ta, wa = gauss_legendre(n_theta, 0.0, math.pi)
    tb, wb = gauss_legendre(n_theta, 0.0, math.pi)
    tc, wc = gauss_legendre(2 * n_theta, 0.0, 2 * math.pi)
    A, B, C = np.meshgrid(ta, tb, tc, indexing="ij")
    WA, WB, WC = np.meshgrid(wa, wb, wc, indexing="ij")
    sa, sb = np.sin(A), np.sin(B)
    nodes = np.stack(
        [np.cos(A), sa * np.cos(B), sa * sb * np.cos(C), sa * sb * np.sin(C)],
        axis=-1,
    ).reshape(-1, 4)
    weights = (radius**3 * sa**2 * sb * WA * WB * WC).reshape(-1)
    return np.asarray(center) + radius * nodes, weights, nodes
