"""Real and complex quaternion arithmetic with structural-set support.

Quaternions are stored as length-4 ndarrays of coordinates in the standard
basis {1, i, j, k}; a real dtype gives a real quaternion, complex128 a
complex quaternion.  All arithmetic functions broadcast over leading axes,
so a batch of N quaternions is simply an (N, 4) array.

A structural set is an orthonormal quadruple of quaternions generalizing the
standard basis.  It is stored as the 4x4 matrix whose k-th row holds the
standard-basis coordinates of the k-th member; coordinates relative to the
set are obtained with :func:`coords` / :func:`from_coords`.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import NotOrthonormal

ORTHONORMALITY_TOL = 1e-10

ONE = np.array([1.0, 0.0, 0.0, 0.0])
I = np.array([0.0, 1.0, 0.0, 0.0])
J = np.array([0.0, 0.0, 1.0, 0.0])
K = np.array([0.0, 0.0, 0.0, 1.0])


def quat(x0=0.0, x1=0.0, x2=0.0, x3=0.0):
    """Real quaternion from four real coordinates."""
    return np.array([x0, x1, x2, x3], dtype=float)


def cquat(q0=0.0, q1=0.0, q2=0.0, q3=0.0):
    """Complex quaternion from four complex coordinates."""
    return np.array([q0, q1, q2, q3], dtype=complex)


def quat_mul(a, b):
    """Quaternion product, broadcasting over leading axes.

    Complex coordinates are supported; the complex unit commutes with the
    basis elements, so the product rule is applied coordinate-wise over the
    complex scalars.
    """
    a = np.asarray(a)
    b = np.asarray(b)
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


def conjugate(q):
    """Quaternionic conjugation: negates the three non-real coordinates.

    For complex quaternions only the basis elements are conjugated, never the
    complex scalars.
    """
    q = np.asarray(q)
    out = q.copy()
    out[..., 1:] = -out[..., 1:]
    return out


def norm2(q):
    """Squared Euclidean norm sum(q_k^2) (complex coordinates squared, not |.|^2)."""
    q = np.asarray(q)
    return (q * q).sum(axis=-1)


def norm(q):
    """Euclidean norm for real quaternions."""
    return np.sqrt(norm2(q))


def scalar_product(q, x):
    """Quaternionic scalar product <q, x> = (conj(q)x + conj(x)q) / 2.

    Equals the coordinate dot product; complex coordinates are combined
    bilinearly (no complex conjugation).
    """
    q = np.asarray(q)
    x = np.asarray(x)
    return (q * x).sum(axis=-1)


@dataclass(frozen=True)
class StructuralSet:
    """Orthonormal quadruple psi with orientation sign.

    ``matrix[k]`` holds the standard-basis coordinates of psi_k; ``sgn`` is
    +1 when the quadruple has the orientation of {1, i, j, k} and -1
    otherwise.
    """

    matrix: np.ndarray
    sgn: int
    conj_matrix: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        cm = self.matrix.copy()
        cm[:, 1:] = -cm[:, 1:]
        object.__setattr__(self, "conj_matrix", cm)
        self.matrix.setflags(write=False)
        cm.setflags(write=False)

    @classmethod
    def standard(cls):
        return cls(matrix=np.eye(4), sgn=1)

    def __getitem__(self, k):
        """psi_k as a standard-coordinate quaternion."""
        return self.matrix[k]

    def conj(self, k):
        """conj(psi_k) as a standard-coordinate quaternion."""
        return self.conj_matrix[k]

    def conjugated(self):
        """The structural set {conj(psi_0), ..., conj(psi_3)}."""
        return make_structural_set(*self.conj_matrix)


def make_structural_set(v0, v1, v2, v3) -> StructuralSet:
    """Validate four quaternions as a structural set and compute its sign.

    Raises :class:`NotOrthonormal` when any pairwise scalar product deviates
    from delta_ks by more than 1e-10.
    """
    m = np.array([np.asarray(v, dtype=float) for v in (v0, v1, v2, v3)])
    gram = m @ m.T
    dev = np.abs(gram - np.eye(4)).max()
    if dev > ORTHONORMALITY_TOL:
        raise NotOrthonormal(f"max deviation from orthonormality: {dev:.3e}")
    sgn = 1 if np.linalg.det(m) > 0 else -1
    return StructuralSet(matrix=m, sgn=sgn)


PSI_STD = StructuralSet.standard()


def coords(q, psi: StructuralSet):
    """Coordinates of q relative to psi: coords_k = <q, psi_k>."""
    return np.asarray(q) @ psi.matrix.T


def from_coords(c, psi: StructuralSet):
    """Quaternion sum_k c_k psi_k from coordinates relative to psi."""
    return np.asarray(c) @ psi.matrix


def psi_scalar_product(q, x, psi: StructuralSet):
    """Scalar product of the psi-coordinate tuples of q and x."""
    return (coords(q, psi) * coords(x, psi)).sum(axis=-1)


def random_structural_set(rng) -> StructuralSet:
    """Random structural set drawn from a seeded generator (QR of a Gaussian)."""
    m = np.linalg.qr(rng.normal(size=(4, 4)))[0]
    return make_structural_set(*m)
