"""Classical structural-set Fueter layer.

Left/right psi-Fueter operators, the Cauchy kernel, the Teodorescu
transform (singular volume integral with exclusion-ball regularization and
refinement traces), and residual verifiers for the classical Stokes and
Borel-Pompeiu identities on boxes.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import OnBoundary, OutsideDomain, SingularPoint
from .fields import PolyField, QField
from .quadrature import (
    FACES,
    Box4,
    QuadratureSpec,
    face_normal_weight,
    face_quadrature,
    graded_axis_rule,
    plain_axis_rule,
    volume_quadrature,
)
from .quaternion import StructuralSet, quat_mul


@dataclass
class Residual:
    """Outcome of an identity check: max-norm mismatch plus samples of both
    sides, the refinement trace, and quadrature bookkeeping."""

    value: float
    lhs: np.ndarray
    rhs: np.ndarray
    trace: list
    skipped_fraction: float = 0.0
    spec: QuadratureSpec | None = None

    def __float__(self):
        return float(self.value)


def dist_to_boundary(box: Box4, x):
    """Distance from x to the box boundary (inside or outside)."""
    x = np.asarray(x, dtype=float)
    if box.contains(x):
        return box.boundary_distance(x)
    return float(np.linalg.norm(x - np.clip(x, box.a, box.b)))


def fueter_values(F, psi: StructuralSet, pts, side="left"):
    """Batch values of the left/right psi-Fueter operator of F."""
    pts = np.asarray(pts, dtype=float)
    out = None
    for k in range(4):
        dk = F.partial_values(pts, k)
        pk = np.broadcast_to(psi[k], dk.shape)
        term = quat_mul(pk, dk) if side == "left" else quat_mul(dk, pk)
        out = term if out is None else out + term
    return out


def fueter_field(F, psi: StructuralSet, side="left"):
    """The psi-Fueter derivative of F as a field (exact for polynomials)."""
    if isinstance(F, PolyField):
        out = None
        for k in range(4):
            dk = F.partial(k)
            term = dk.lmul(psi[k]) if side == "left" else dk.rmul(psi[k])
            out = term if out is None else out + term
        out.name = f"psiD[{F.name}]" if side == "left" else f"psiDr[{F.name}]"
        return out
    return QField(lambda pts: fueter_values(F, psi, pts, side), F.domain)


def psi_fueter_left(F, psi: StructuralSet, x):
    """Left psi-Fueter operator sum_k psi_k d_k F at an interior point."""
    x = np.asarray(x, dtype=float)
    if not F.domain.contains(x):
        raise OutsideDomain(f"{x} not interior to the field domain")
    return fueter_values(F, psi, x[None, :], side="left")[0]


def psi_fueter_right(F, psi: StructuralSet, x):
    """Right psi-Fueter operator sum_k d_k F psi_k at an interior point."""
    x = np.asarray(x, dtype=float)
    if not F.domain.contains(x):
        raise OutsideDomain(f"{x} not interior to the field domain")
    return fueter_values(F, psi, x[None, :], side="right")[0]


def cauchy_kernel_values(psi: StructuralSet, u):
    """Cauchy kernel at coordinate differences u (batch)."""
    return _kernels.cauchy_batch(np.ascontiguousarray(u, dtype=float), psi.conj_matrix)


def cauchy_kernel(psi: StructuralSet, tau, x):
    """Cauchy kernel K_psi(tau - x) = conj((tau-x)_psi) / (2 pi^2 |tau-x|^4)."""
    u = np.asarray(tau, dtype=float) - np.asarray(x, dtype=float)
    if np.linalg.norm(u) < 1e-14:
        raise SingularPoint("kernel evaluated at zero separation")
    return cauchy_kernel_values(psi, u[None, :])[0]


def _bp_boundary_rules(box, face, x, spec):
    free = [i for i in range(4) if i != face.axis]
    if spec.graded:
        order = spec.boundary_order or spec.grade_order
        return [
            graded_axis_rule(box.a[i], box.b[i], float(np.asarray(x)[i]),
                             order, spec.grade_levels, spec.grade_ratio)
            for i in free
        ]
    return [plain_axis_rule(box.a[i], box.b[i], spec.order) for i in free]


def boundary_kernel_integral(field, box, psi, x, spec, side="left"):
    """int_dJ K(tau-x) sigma F(tau)  (side="left") or  int_dJ F(tau) sigma
    K(tau-x)  (side="right")."""
    x = np.asarray(x, dtype=float)
    total = np.zeros(4, dtype=complex)
    if isinstance(field, PolyField) and field.is_zero:
        return total
    for face in FACES:
        nodes, w = face_quadrature(box, face, _bp_boundary_rules(box, face, x, spec))
        nu = face_normal_weight(face, psi)
        vals = np.asarray(field(nodes), dtype=complex)
        u = np.ascontiguousarray(nodes - x)
        if side == "left":
            sv = quat_mul(np.broadcast_to(nu, vals.shape), vals)
            total += _kernels.accumulate_kernel_left(u, w, np.ascontiguousarray(sv),
                                                     psi.conj_matrix)
        else:
            sv = quat_mul(vals, np.broadcast_to(nu, vals.shape))
            total += _kernels.accumulate_kernel_right(u, w, np.ascontiguousarray(sv),
                                                      psi.conj_matrix)
    return total


TWO_PI_SQ = 2.0 * np.pi**2


def _pyramid_face_rules(box, face, x, spec, face_exponents, grade_target=None):
    """Rules for the free axes of a pyramid base face: graded toward the
    projection of x, with a low-edge power panel where the integrand has a
    known fractional edge exponent.

    The base-face integrand is regular (the ray parameterization removed
    the kernel singularity), so modest orders suffice; the refinement-level
    knobs that drive surface integrals are deliberately not applied here.
    """
    from .quadrature import power_graded_axis_rule

    free = [i for i in range(4) if i != face.axis]
    order = spec.grade_order
    levels = spec.grade_levels
    target = np.asarray(grade_target if grade_target is not None else x, dtype=float)
    rules = []
    for i in free:
        gamma = float(face_exponents.get(i, 0.0)) if face_exponents else 0.0
        if spec.graded:
            rules.append(
                power_graded_axis_rule(box.a[i], box.b[i], gamma, float(target[i]),
                                       order, levels, spec.grade_ratio)
            )
        else:
            from .quadrature import power_axis_rule

            rules.append(power_axis_rule(box.a[i], box.b[i], spec.order, gamma))
    return rules


def _ray_rule(ns, endpoint_exponent):
    """Rule on [0, 1] for integrands behaving like (1-s)^gamma near s = 1."""
    from .quadrature import gauss_jacobi, plain_axis_rule

    if endpoint_exponent == 0.0:
        return plain_axis_rule(0.0, 1.0, ns)
    s, w = gauss_jacobi(ns, endpoint_exponent, 0.0, 1.0)
    return s, w / (1.0 - s) ** endpoint_exponent


def volume_kernel_integral(values_of, box, psi, x, spec, side="left",
                           face_exponents=None, grade_target=None):
    """Ball-excluded int_{J \\ B(x,eps)} K(y-x) G(y) dy (left) or the
    mirrored right product; returns (value, skipped_fraction).

    Interior x: the box is split into 8 pyramids with apex x and the faces
    as bases.  On each pyramid, y = x + s (p - x) with p on the face turns
    the integral into a face integral of the (regular there) kernel times a
    smooth ray integral of G, because the s^3 Jacobian cancels the kernel
    singularity exactly; the exclusion ball becomes the exact lower limit
    s > eps/|p - x|.  Exterior x: plain tensor quadrature (regular kernel).

    `face_exponents` optionally maps axis -> gamma when G behaves like
    (y_axis - a_axis)^gamma at the low face of that axis; the face and ray
    rules then stay exact for such integrands.
    """
    from .quadrature import iter_tensor_slabs, power_axis_rule, plain_axis_rule

    x = np.asarray(x, dtype=float)
    eps = spec.resolve_eps(box)
    zero_field = isinstance(values_of, PolyField) and values_of.is_zero
    total = np.zeros(4, dtype=complex)

    if not box.contains(x):
        if zero_field:
            return total, 0.0
        accumulate = (
            _kernels.accumulate_kernel_left if side == "left"
            else _kernels.accumulate_kernel_right
        )
        rules = []
        for i in range(4):
            gamma = float(face_exponents.get(i, 0.0)) if face_exponents else 0.0
            if gamma != 0.0:
                rules.append(power_axis_rule(box.a[i], box.b[i], spec.order, gamma))
            else:
                rules.append(plain_axis_rule(box.a[i], box.b[i], spec.order))
        for nodes, w in iter_tensor_slabs(rules):
            vals = np.ascontiguousarray(np.asarray(values_of(nodes), dtype=complex))
            u = np.ascontiguousarray(nodes - x)
            total = total + accumulate(u, np.ascontiguousarray(w), vals,
                                       psi.conj_matrix)
        return total, 0.0

    skipped = float(np.pi**2 * eps**4 / 2.0) / box.measure
    if zero_field:
        return total, skipped

    ns = max(6, min(spec.grade_order, 10))
    for face in FACES:
        plane = box.b[face.axis] if face.side == "high" else box.a[face.axis]
        height = abs(plane - x[face.axis])
        if height == 0.0:
            raise OnBoundary(f"{x} lies on the plane of face {face}")
        p_nodes, p_w = face_quadrature(
            box, face,
            _pyramid_face_rules(box, face, x, spec, face_exponents, grade_target),
        )
        u = p_nodes - x
        unorm2 = (u * u).sum(axis=1)
        kern = (u @ psi.conj_matrix) / (TWO_PI_SQ * unorm2 * unorm2)[:, None]
        gamma_ray = 0.0
        if face_exponents and face.side == "low":
            gamma_ray = float(face_exponents.get(face.axis, 0.0))
        s_nodes, s_w = _ray_rule(ns, gamma_ray)
        s_min = eps / np.sqrt(unorm2)
        # map the [0,1] ray rule onto [s_min(p), 1] per face node; the
        # (1-s)^gamma endpoint weight is affine-invariant under this map
        smap = s_min[:, None] + (1.0 - s_min)[:, None] * s_nodes[None, :]
        wmap = (1.0 - s_min)[:, None] * s_w[None, :]
        pts = x[None, None, :] + smap[:, :, None] * u[:, None, :]
        vals = np.asarray(values_of(pts.reshape(-1, 4)), dtype=complex).reshape(
            pts.shape[:2] + (4,)
        )
        inner = (wmap[:, :, None] * vals).sum(axis=1)
        if side == "left":
            contrib = quat_mul(kern.astype(complex), inner)
        else:
            contrib = quat_mul(inner, kern.astype(complex))
        total = total + height * (p_w[:, None] * contrib).sum(axis=0)

    return total, skipped


def volume_kernel_integral_masked(values_of, box, psi, x, spec, side="left",
                                  axis_exponents=None):
    """Ball-excluded kernel volume integral on a masked tensor mesh.

    Companion to :func:`volume_kernel_integral` for integrands with
    fractional low-face power behavior declared in `axis_exponents`
    (axis -> gamma): each such axis gets a rule exact for
    (t-a)^gamma x smooth, all axes are graded toward x, and nodes inside
    B(x, eps) are zeroed.
    """
    from .quadrature import (
        graded_axis_rule,
        iter_tensor_slabs,
        plain_axis_rule,
        power_graded_axis_rule,
    )

    x = np.asarray(x, dtype=float)
    eps = spec.resolve_eps(box)
    accumulate = (
        _kernels.accumulate_kernel_left if side == "left"
        else _kernels.accumulate_kernel_right
    )
    inside = box.contains(x)
    rules = []
    for i in range(4):
        gamma = float(axis_exponents.get(i, 0.0)) if axis_exponents else 0.0
        if spec.graded:
            if gamma != 0.0:
                rules.append(power_graded_axis_rule(
                    box.a[i], box.b[i], gamma, float(x[i]),
                    spec.grade_order, spec.grade_levels, spec.grade_ratio))
            else:
                rules.append(graded_axis_rule(
                    box.a[i], box.b[i], float(x[i]),
                    spec.grade_order, spec.grade_levels, spec.grade_ratio))
        else:
            rules.append(plain_axis_rule(box.a[i], box.b[i], spec.order))
    total = np.zeros(4, dtype=complex)
    skipped_weight = 0.0
    for nodes, w in iter_tensor_slabs(rules):
        if inside:
            dist2 = ((nodes - x) ** 2).sum(axis=1)
            keep = dist2 >= eps * eps
            if not np.all(keep):
                skipped_weight += float(w[~keep].sum())
                nodes, w = nodes[keep], w[keep]
                if nodes.shape[0] == 0:
                    continue
        vals = np.ascontiguousarray(np.asarray(values_of(nodes), dtype=complex))
        u = np.ascontiguousarray(nodes - x)
        total = total + accumulate(u, np.ascontiguousarray(w), vals, psi.conj_matrix)
    return total, skipped_weight / box.measure


def teodorescu(F, box: Box4, x, spec: QuadratureSpec, psi: StructuralSet = None,
               with_trace=False, grade_target=None):
    """Teodorescu transform T[F](x) = int_J K(x-y) F(y) dy.

    The kernel argument is oriented so that T is a right inverse of the
    left psi-Fueter operator (psiD T[F] = F); since the kernel is odd this
    equals minus the integral with argument y-x.  With `with_trace` the
    exclusion radius is halved (and the mesh refined) spec.refine_levels
    times and a (level, value) trace is returned."""
    from .quaternion import PSI_STD

    psi = psi if psi is not None else PSI_STD
    x = np.asarray(x, dtype=float)
    if not box.contains(x):
        raise OutsideDomain(f"{x} not interior to the box")
    if not with_trace:
        val, _ = volume_kernel_integral(F, box, psi, x, spec,
                                        grade_target=grade_target)
        return -val
    trace = []
    val = None
    for level in range(spec.refine_levels):
        spec_l = spec.refined(level, box)
        val, _ = volume_kernel_integral(F, box, psi, x, spec_l,
                                        grade_target=grade_target)
        trace.append((level, -val))
    return -val, trace


def verify_stokes_classical(f, g, box: Box4, psi: StructuralSet, spec: QuadratureSpec) -> Residual:
    """Residual of int_dJ g sigma f = int_J (g psiD[f] + psiD_r[g] f) dV."""
    lhs = np.zeros(4, dtype=complex)
    for face in FACES:
        free = [i for i in range(4) if i != face.axis]
        rules3 = [plain_axis_rule(box.a[i], box.b[i], spec.order) for i in free]
        nodes, w = face_quadrature(box, face, rules3)
        nu = face_normal_weight(face, psi)
        gv = np.asarray(g(nodes), dtype=complex)
        fv = np.asarray(f(nodes), dtype=complex)
        sandwich = quat_mul(quat_mul(gv, np.broadcast_to(nu, gv.shape)), fv)
        lhs += (w[:, None] * sandwich).sum(axis=0)
    nodes, w = volume_quadrature(box, spec)
    df = fueter_values(f, psi, nodes, side="left")
    drg = fueter_values(g, psi, nodes, side="right")
    integrand = quat_mul(np.asarray(g(nodes), dtype=complex), df.astype(complex)) + quat_mul(
        drg.astype(complex), np.asarray(f(nodes), dtype=complex)
    )
    rhs = (w[:, None] * integrand).sum(axis=0)
    value = float(np.abs(lhs - rhs).max())
    return Residual(value=value, lhs=lhs, rhs=rhs, trace=[(0, value)], spec=spec)


def verify_borel_pompeiu_classical(
    f, g, box: Box4, psi: StructuralSet, x, spec: QuadratureSpec
) -> Residual:
    """Residual of the Borel-Pompeiu identity at x (inside or outside).

    boundary(K sigma f + g sigma K) - volume(K psiD[f] + psiD_r[g] K)
    compared against (f+g)(x) inside and 0 outside, with an
    exclusion-radius/mesh refinement trace of length spec.refine_levels.
    """
    x = np.asarray(x, dtype=float)
    eps0 = spec.resolve_eps(box)
    if dist_to_boundary(box, x) < eps0:
        raise OnBoundary(f"{x} within {eps0} of the box boundary")
    inside = box.contains(x)
    if inside:
        expected = np.asarray(f(x[None, :])[0], dtype=complex) + np.asarray(
            g(x[None, :])[0], dtype=complex
        )
    else:
        expected = np.zeros(4, dtype=complex)
    df_field = fueter_field(f, psi, side="left")
    drg_field = fueter_field(g, psi, side="right")
    trace = []
    lhs = None
    skipped = 0.0
    for level in range(spec.refine_levels):
        spec_l = spec.refined(level, box)
        bnd = boundary_kernel_integral(f, box, psi, x, spec_l, side="left")
        bnd += boundary_kernel_integral(g, box, psi, x, spec_l, side="right")
        vol_f, sk1 = volume_kernel_integral(df_field, box, psi, x, spec_l, side="left")
        vol_g, sk2 = volume_kernel_integral(drg_field, box, psi, x, spec_l, side="right")
        lhs = bnd - vol_f - vol_g
        skipped = max(sk1, sk2)
        trace.append((level, float(np.abs(lhs - expected).max())))
    return Residual(
        value=trace[-1][1], lhs=lhs, rhs=expected, trace=trace,
        skipped_fraction=skipped, spec=spec,
    )
