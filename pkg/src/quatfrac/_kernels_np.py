"""Pure NumPy implementations of the hot quadrature kernels.

These are the reference semantics for the compiled lane in
``_kernels_cy.pyx``; both lanes are deterministic (fixed reduction order)
and agree to rounding.  `mbar` is the 4x4 matrix whose k-th row holds the
standard coordinates of conj(psi_k), so that u @ mbar recombines a
coordinate difference u into the conjugated kernel numerator.
"""

import numpy as np

TWO_PI_SQ = 2.0 * np.pi**2


def _qmul(a, b):
    a0, a1, a2, a3 = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    b0, b1, b2, b3 = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ],
        axis=-1,
    )


def cauchy_batch(u, mbar):
    """Cauchy kernel K(u) = conj(u_psi) / (2 pi^2 |u|^4) for rows of u."""
    u = np.asarray(u, dtype=float)
    r2 = (u * u).sum(axis=-1)
    return (u @ mbar) / (TWO_PI_SQ * r2 * r2)[..., None]


def cauchy_dbatch(u, axis, mbar):
    """Partial derivative of the Cauchy kernel along one coordinate of u."""
    u = np.asarray(u, dtype=float)
    r2 = (u * u).sum(axis=-1)
    num = mbar[axis] * r2[..., None] - 4.0 * u[..., axis, None] * (u @ mbar)
    return num / (TWO_PI_SQ * r2**3)[..., None]


def accumulate_kernel_left(u, w, fvals, mbar):
    """sum_n w_n K(u_n) fvals_n  (kernel multiplies from the left)."""
    kv = cauchy_batch(u, mbar).astype(complex)
    prod = _qmul(kv, np.asarray(fvals, dtype=complex))
    return (np.asarray(w)[:, None] * prod).sum(axis=0)


def accumulate_kernel_right(u, w, gvals, mbar):
    """sum_n w_n gvals_n K(u_n)  (kernel multiplies from the right)."""
    kv = cauchy_batch(u, mbar).astype(complex)
    prod = _qmul(np.asarray(gvals, dtype=complex), kv)
    return (np.asarray(w)[:, None] * prod).sum(axis=0)


def frak_kernel_batch(y, pts, axes, coeffs, mbar):
    """Superposition of kernel sources evaluated at rows of y.

    Source p contributes coeffs[p] * K(y - pts[p]) when axes[p] < 0 and
    coeffs[p] * dK/du_axes[p] (y - pts[p]) otherwise.  Used to assemble the
    fractional Cauchy kernel, whose base-segment quadrature reduces to
    exactly such a superposition.
    """
    y = np.asarray(y, dtype=float)
    out = np.zeros(y.shape[:-1] + (4,), dtype=complex)
    for p in range(pts.shape[0]):
        u = y - pts[p]
        if axes[p] < 0:
            out += coeffs[p] * cauchy_batch(u, mbar)
        else:
            out += coeffs[p] * cauchy_dbatch(u, int(axes[p]), mbar)
    return out
