"""Quaternion-valued fields on boxes and their one-dimensional slices.

A :class:`QField` maps batches of coordinate points (N, 4) to quaternion
values (N, 4); values are standard-basis coordinate arrays (real or
complex).  :class:`PolyField` is the workhorse: a polynomial with quaternion
coefficients, exact partial derivatives of every order, and exact 1-D
slices.  The seeded test corpus is built from such fields.

:class:`Field1D` represents a function of one real variable together with
whatever analytic derivative information is available and a known power
behavior (t - base)^lower_exponent at its base point.  The Riemann-Liouville
layer consumes and produces these.
"""

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import MissingDerivative
from .quadrature import Box4
from .quaternion import StructuralSet, quat_mul


def _as_batch(t):
    t = np.asarray(t, dtype=float)
    scalar = t.ndim == 0
    return np.atleast_1d(t), scalar


@dataclass
class Field1D:
    """Function of one real variable with values in the (complex) quaternions.

    ``evaluate`` maps (n,) -> (n, 4).  ``lower_exponent`` declares that the
    function behaves like (t - base)^lower_exponent x smooth near ``base``;
    quadrature rules exploit this to stay exact on the corpus.  Missing
    derivatives fall back to central differences with step ``fd_step``.
    """

    evaluate: callable
    derivative: callable = None
    derivative2: callable = None
    base: float = 0.0
    lower_exponent: float = 0.0
    fd_step: float = 1e-6

    def values(self, t):
        t, scalar = _as_batch(t)
        out = np.asarray(self.evaluate(t))
        return out[0] if scalar else out

    def value_at_base(self):
        if self.lower_exponent > 0:
            return np.zeros(4, dtype=complex)
        if self.lower_exponent == 0:
            return np.asarray(self.evaluate(np.array([self.base])))[0]
        raise MissingDerivative(
            "value at base undefined for negative lower_exponent "
            f"({self.lower_exponent})"
        )

    def smooth_values(self, t):
        """Values with the power factor divided out: f(t) (t-base)^(-gamma)."""
        t, scalar = _as_batch(t)
        out = np.asarray(self.evaluate(t))
        if self.lower_exponent != 0.0:
            out = out / ((t - self.base) ** self.lower_exponent)[:, None]
        return out[0] if scalar else out

    def derivative_values(self, t):
        t, scalar = _as_batch(t)
        if self.derivative is not None:
            out = np.asarray(self.derivative(t))
        else:
            h = self.fd_step
            out = (np.asarray(self.evaluate(t + h)) - np.asarray(self.evaluate(t - h))) / (2 * h)
        return out[0] if scalar else out

    def derivative_field(self):
        g = self.lower_exponent
        return Field1D(
            evaluate=self.derivative_values if self.derivative is None else self.derivative,
            derivative=self.derivative2,
            base=self.base,
            lower_exponent=g - 1.0 if g > 0 else 0.0,
            fd_step=self.fd_step,
        )


@dataclass
class PowerTerm1D:
    """Closed-form power term coeff * (t - base)^exponent."""

    coeff: np.ndarray
    exponent: complex
    base: float = 0.0

    def values(self, t):
        t, scalar = _as_batch(t)
        powers = (t - self.base).astype(complex) ** self.exponent
        out = powers[:, None] * np.asarray(self.coeff, dtype=complex)
        return out[0] if scalar else out


def slice_values(term_or_sum, t):
    """Evaluate a Field1D, PowerTerm1D, or list thereof."""
    if isinstance(term_or_sum, (list, tuple)):
        return sum(slice_values(s, t) for s in term_or_sum)
    return term_or_sum.values(t)


class QField:
    """Quaternion-valued field on a box; base class uses finite-difference
    partials.  ``evaluate`` maps (..., 4) points to (..., 4) values."""

    def __init__(self, evaluate, domain: Box4, fd_step=1e-5, name=""):
        self._evaluate = evaluate
        self.domain = domain
        self.fd_step = fd_step
        self.name = name

    analytic_partials = False

    def evaluate(self, pts):
        return self._evaluate(np.asarray(pts))

    def __call__(self, pts):
        return self.evaluate(pts)

    def partial_values(self, pts, axis):
        pts = np.asarray(pts, dtype=float)
        h = self.fd_step * max(1.0, float(self.domain.b[axis] - self.domain.a[axis]))
        shift = np.zeros(4)
        shift[axis] = h
        return (self.evaluate(pts + shift) - self.evaluate(pts - shift)) / (2 * h)

    def slice1d(self, q, axis, fd_step=1e-6) -> Field1D:
        """The map t -> F(q_0, ..., t, ..., q_3) along the given axis."""
        q = np.asarray(q, dtype=float)

        def points_of(t):
            pts = np.tile(q, (len(t), 1))
            pts[:, axis] = t
            return pts

        return Field1D(
            evaluate=lambda t: self.evaluate(points_of(np.asarray(t))),
            derivative=lambda t: self.partial_values(points_of(np.asarray(t)), axis),
            base=float(self.domain.a[axis]),
            fd_step=fd_step,
        )


class PolyField(QField):
    """Polynomial field: sum over multi-exponents m of x^m coeff_m.

    Coefficients are quaternions (real or complex); scalar monomials commute
    with them, so there is no left/right ambiguity.  Partial derivatives of
    every order are exact and again PolyFields.
    """

    analytic_partials = True

    def __init__(self, coeffs, domain: Box4, name=""):
        self.coeffs = {
            tuple(m): np.asarray(c, dtype=complex) for m, c in coeffs.items()
            if np.any(np.asarray(c) != 0)
        }
        if not self.coeffs:
            self.coeffs = {(0, 0, 0, 0): np.zeros(4, dtype=complex)}
        super().__init__(None, domain, name=name)

    @property
    def is_real(self):
        return all(np.all(c.imag == 0) for c in self.coeffs.values())

    @property
    def is_zero(self):
        return all(np.all(c == 0) for c in self.coeffs.values())

    def evaluate(self, pts):
        pts = np.asarray(pts, dtype=float)
        # cache powers per axis; integer powers by repeated multiplication
        max_deg = [max((m[k] for m in self.coeffs), default=0) for k in range(4)]
        powers = []
        for k in range(4):
            col = [None, pts[..., k]] if max_deg[k] >= 1 else [None]
            for _ in range(2, max_deg[k] + 1):
                col.append(col[-1] * pts[..., k])
            powers.append(col)
        out = np.zeros(pts.shape[:-1] + (4,), dtype=complex)
        for m, c in self.coeffs.items():
            mono = None
            for k in range(4):
                if m[k]:
                    p = powers[k][m[k]]
                    mono = p if mono is None else mono * p
            if mono is None:
                out += c
            else:
                out += mono[..., None] * c
        return out.real if self.is_real else out

    def partial(self, axis, order=1):
        coeffs = self.coeffs
        for _ in range(order):
            new = {}
            for m, c in coeffs.items():
                if m[axis] == 0:
                    continue
                mm = list(m)
                mm[axis] -= 1
                key = tuple(mm)
                new[key] = new.get(key, 0) + m[axis] * c
            coeffs = new
        return PolyField(coeffs, self.domain, name=f"d{axis}^{order}[{self.name}]")

    def partial_values(self, pts, axis):
        return self.partial(axis).evaluate(pts)

    def lmul(self, c):
        """Left multiplication by a constant quaternion."""
        c = np.asarray(c)
        return PolyField(
            {m: quat_mul(c, v) for m, v in self.coeffs.items()}, self.domain, self.name
        )

    def rmul(self, c):
        c = np.asarray(c)
        return PolyField(
            {m: quat_mul(v, c) for m, v in self.coeffs.items()}, self.domain, self.name
        )

    def __add__(self, other):
        coeffs = dict(self.coeffs)
        for m, c in other.coeffs.items():
            coeffs[m] = coeffs.get(m, 0) + c
        return PolyField(coeffs, self.domain)

    def slice1d(self, q, axis, fd_step=1e-6) -> Field1D:
        """Exact univariate slice: a polynomial in t with quaternion coeffs."""
        q = np.asarray(q, dtype=float)
        by_power = {}
        for m, c in self.coeffs.items():
            mono = 1.0
            for k in range(4):
                if k != axis and m[k]:
                    mono *= q[k] ** m[k]
            by_power[m[axis]] = by_power.get(m[axis], 0) + mono * c

        def poly_eval(powers):
            def ev(t):
                t = np.asarray(t, dtype=float)
                out = np.zeros(t.shape + (4,), dtype=complex)
                for p, c in powers.items():
                    out += (t**p)[:, None] * c
                return out

            return ev

        def deriv(powers):
            return {p - 1: p * c for p, c in powers.items() if p > 0} or {0: np.zeros(4)}

        d1 = deriv(by_power)
        d2 = deriv(d1)
        return Field1D(
            evaluate=poly_eval(by_power),
            derivative=poly_eval(d1),
            derivative2=poly_eval(d2),
            base=float(self.domain.a[axis]),
            fd_step=fd_step,
        )


def constant_field(c, domain: Box4, name="const"):
    return PolyField({(0, 0, 0, 0): np.asarray(c, dtype=float)}, domain, name=name)


def identity_field(domain: Box4, psi: StructuralSet, name="identity"):
    """F(x) = sum_k x_k psi_k, the coordinate embedding for the set psi."""
    coeffs = {}
    for k in range(4):
        m = [0, 0, 0, 0]
        m[k] = 1
        coeffs[tuple(m)] = psi[k]
    return PolyField(coeffs, domain, name=name)


def regular_field(domain: Box4, psi: StructuralSet, c=None, name="regular"):
    """A field annihilated by the left psi-Fueter operator:
    F(x) = x_0 c - x_1 (conj(psi_1) psi_0 c)."""
    if c is None:
        c = -psi[1]  # std psi: c = -i, giving x_1 - i x_0 up to relabeling
    c = np.asarray(c, dtype=float)
    c1 = -quat_mul(psi.conj(1), quat_mul(psi[0], c))
    return PolyField({(1, 0, 0, 0): c, (0, 1, 0, 0): c1}, domain, name=name)


def random_poly_field(rng, domain: Box4, degree=3, name="poly"):
    coeffs = {}
    for m in product(range(degree + 1), repeat=4):
        if sum(m) > degree:
            continue
        coeffs[m] = rng.normal(size=4) / (1.0 + sum(m)) ** 2
    return PolyField(coeffs, domain, name=name)


def corpus(seed, domain: Box4, psi: StructuralSet, size=12):
    """Seeded corpus: fixed special fields plus random degree-<=3 polynomials."""
    rng = np.random.default_rng(seed)
    fields = [
        ("const_one", constant_field([1.0, 0, 0, 0], domain, "const_one")),
        ("identity", identity_field(domain, psi)),
        ("regular", regular_field(domain, psi)),
        ("const_rand", constant_field(rng.normal(size=4), domain, "const_rand")),
    ]
    for idx in range(size - len(fields)):
        fields.append((f"poly_{idx}", random_poly_field(rng, domain, name=f"poly_{idx}")))
    return fields
