"""Riemann-Liouville fractional integrals and derivatives (left-endpoint).

Scalar- and quaternion-valued, for complex orders with positive real part.
The derivative is computed in the stabilized form

    D^alpha f (x) = f(a) (x-a)^(-alpha) / Gamma(1-alpha)
                    + I^(1-alpha)[f'](x),

which equals d/dx I^(1-alpha) f for absolutely continuous f and avoids
differentiating a quadrature.  Fields carrying a known power behavior
(t-a)^gamma at the base point are integrated with two-sided Gauss-Jacobi
rules, which keeps every operation in this module exact (to rounding) on
polynomial data and their fractional integrals.

Operator composition is supported through :func:`rl_integral_field` and
:func:`rl_derivative_terms`, which return slice objects / term lists whose
derivative information is propagated analytically through the same
absolute-continuity identity.
"""

import numpy as np
from scipy.special import gamma as _gamma
from scipy.special import rgamma as _rgamma

from .errors import DomainError, InvalidOrder, MissingDerivative
from .fields import Field1D, PowerTerm1D, _as_batch
from .quadrature import gauss_jacobi

DEFAULT_ORDER = 24


def gamma_fn(z):
    """Gamma function, complex-safe."""
    return _gamma(z)


def recip_gamma(z):
    """1/Gamma(z); zero at the poles."""
    return _rgamma(z)


def _check_order_integral(alpha):
    if np.real(alpha) <= 0:
        raise InvalidOrder(f"need Re(alpha) > 0, got {alpha}")


def _check_order_derivative(alpha, n=1):
    re = np.real(alpha)
    if not (n - 1 < re < n):
        raise InvalidOrder(f"need {n - 1} < Re(alpha) < {n}, got {alpha}")


def _quadrature_integral(f: Field1D, a, alpha, x, order):
    """(1/Gamma(alpha)) int_a^x f(tau) (x-tau)^(alpha-1) dtau by Gauss-Jacobi
    with the low-end power behavior of f built into the rule."""
    re_a = float(np.real(alpha))
    im_a = float(np.imag(alpha))
    gamma_lo = float(f.lower_exponent)
    t, w = gauss_jacobi(order, re_a - 1.0, a, x, mu_low=gamma_lo)
    vals = f.smooth_values(t)
    if im_a != 0.0:
        vals = vals * np.exp(1j * im_a * np.log(x - t))[:, None]
    total = (w[:, None] * vals).sum(axis=0)
    return total * recip_gamma(alpha)


def _quadrature_integral_batch(f: Field1D, a, alpha, xs, order):
    """Vectorized form of :func:`_quadrature_integral` over points xs > a.

    The canonical Jacobi rule is affine-mapped to every [a, x] at once; the
    inner field is evaluated on the flattened node matrix.
    """
    from .quadrature import _canonical_jacobi

    re_a = float(np.real(alpha))
    im_a = float(np.imag(alpha))
    gamma_lo = float(f.lower_exponent)
    u, w = _canonical_jacobi(order, re_a - 1.0, gamma_lo)
    xs = np.asarray(xs, dtype=float)
    half = (xs - a)[:, None] / 2.0
    t = a + half * (u[None, :] + 1.0)
    vals = f.smooth_values(t.reshape(-1)).reshape(t.shape + (4,))
    if im_a != 0.0:
        vals = vals * np.exp(1j * im_a * np.log(xs[:, None] - t))[:, :, None]
    scale = half[:, 0] ** (1.0 + (re_a - 1.0) + gamma_lo)
    total = (w[None, :, None] * vals).sum(axis=1) * scale[:, None]
    return total * recip_gamma(alpha)


class IntegralSlice(Field1D):
    """I^alpha applied to a slice, as a slice: values by quadrature, base
    power behavior (t-a)^(gamma + Re alpha), derivatives via the
    absolute-continuity identity."""

    def __init__(self, f, a, alpha, order=DEFAULT_ORDER):
        self.inner = f
        self.alpha = alpha
        self.order = order
        super().__init__(
            evaluate=self._evaluate_batch,
            base=float(a),
            lower_exponent=float(np.real(alpha)) + _terms_exponent(f),
        )

    def _evaluate_batch(self, t):
        t, _ = _as_batch(t)
        if np.any(t < self.base):
            raise DomainError(f"evaluation below base {self.base}")
        out = np.zeros((len(t), 4), dtype=complex)
        live = t > self.base
        xs = t[live]
        if xs.size:
            out[live] = _integral_value_batch(self.inner, self.base, self.alpha,
                                              xs, self.order)
        return out

    def derivative_terms(self):
        terms = []
        base_val = _terms_value_at_base(self.inner)
        if base_val is not None and np.any(base_val != 0):
            terms.append(
                PowerTerm1D(base_val * recip_gamma(self.alpha), self.alpha - 1, self.base)
            )
        terms.append(
            IntegralSlice(_terms_derivative(self.inner), self.base, self.alpha, self.order)
        )
        return terms

    def derivative_values(self, t):
        t, scalar = _as_batch(t)
        out = sum(slice_term_values(s, t) for s in self.derivative_terms())
        return out[0] if scalar else out

    def derivative_field(self):
        dterms = self.derivative_terms()
        return _TermSumField(dterms, self.base)


class _TermSumField(Field1D):
    """Sum of slice terms packaged as one Field1D (for quadrature reuse)."""

    def __init__(self, terms, a):
        self.terms = terms
        exps = [_term_exponent(s) for s in terms]
        super().__init__(
            evaluate=lambda t: sum(slice_term_values(s, np.asarray(t)) for s in terms),
            base=float(a),
            lower_exponent=min(exps) if exps else 0.0,
        )

    def derivative_terms(self):
        out = []
        for s in self.terms:
            out.extend(_derivative_terms_of(s))
        return out


def slice_term_values(term, t):
    if isinstance(term, (list, tuple)):
        return sum(slice_term_values(s, t) for s in term)
    return term.values(t)


def _term_exponent(term):
    if isinstance(term, PowerTerm1D):
        return float(np.real(term.exponent))
    return float(term.lower_exponent)


def _terms_exponent(f):
    if isinstance(f, (list, tuple)):
        return min(_term_exponent(s) for s in f)
    return _term_exponent(f)


def _terms_value_at_base(f):
    """Value at the base point, or None when it vanishes by power counting."""
    if isinstance(f, (list, tuple)):
        vals = [_terms_value_at_base(s) for s in f]
        vals = [v for v in vals if v is not None]
        return sum(vals) if vals else None
    if isinstance(f, PowerTerm1D):
        exp = f.exponent
        if np.real(exp) > 0:
            return None
        if exp == 0:
            return np.asarray(f.coeff, dtype=complex)
        raise DomainError("power term with negative exponent has no base value")
    if f.lower_exponent > 0:
        return None
    return f.value_at_base()


def _terms_derivative(f):
    if isinstance(f, (list, tuple)):
        out = []
        for s in f:
            out.extend(_derivative_terms_of(s))
        return out
    return _derivative_terms_of(f)


def _derivative_terms_of(term):
    if isinstance(term, PowerTerm1D):
        if term.exponent == 0:
            return []
        return [PowerTerm1D(term.coeff * term.exponent, term.exponent - 1, term.base)]
    if hasattr(term, "derivative_terms"):
        return term.derivative_terms()
    return [term.derivative_field()]


def _power_integral(term: PowerTerm1D, a, alpha, x):
    """Closed-form I^alpha of coeff (t-a)^g: power rule."""
    if term.base != a:
        raise DomainError("power-term base must match the integration base")
    g = term.exponent
    factor = gamma_fn(g + 1) * recip_gamma(g + 1 + alpha)
    return np.asarray(term.coeff, dtype=complex) * factor * complex(x - a) ** (g + alpha)


def _power_derivative(term: PowerTerm1D, a, alpha, x):
    if term.base != a:
        raise DomainError("power-term base must match the integration base")
    g = term.exponent
    factor = gamma_fn(g + 1) * recip_gamma(g + 1 - alpha)
    return np.asarray(term.coeff, dtype=complex) * factor * complex(x - a) ** (g - alpha)


def _power_derivative_term(term: PowerTerm1D, alpha):
    g = term.exponent
    factor = gamma_fn(g + 1) * recip_gamma(g + 1 - alpha)
    return PowerTerm1D(np.asarray(term.coeff) * factor, g - alpha, term.base)


def _as_field(f, a):
    if isinstance(f, (Field1D, PowerTerm1D, list, tuple)):
        return f
    if callable(f):
        return Field1D(evaluate=lambda t: np.asarray(f(np.asarray(t))), base=float(a))
    raise TypeError(f"cannot interpret {type(f)} as a 1-D field")


def _integral_value(f, a, alpha, x, order):
    if isinstance(f, (list, tuple)):
        return sum(_integral_value(s, a, alpha, x, order) for s in f)
    if isinstance(f, PowerTerm1D):
        return _power_integral(f, a, alpha, x)
    return _quadrature_integral(f, a, alpha, x, order)


def _integral_value_batch(f, a, alpha, xs, order):
    if isinstance(f, (list, tuple)):
        return sum(_integral_value_batch(s, a, alpha, xs, order) for s in f)
    if isinstance(f, PowerTerm1D):
        g = f.exponent
        factor = gamma_fn(g + 1) * recip_gamma(g + 1 + alpha)
        powers = (np.asarray(xs) - a).astype(complex) ** (g + alpha)
        return powers[:, None] * (np.asarray(f.coeff, dtype=complex) * factor)
    return _quadrature_integral_batch(f, a, alpha, xs, order)


def rl_integral(f, a, alpha, x, order=DEFAULT_ORDER):
    """Riemann-Liouville integral (I_{a+}^alpha f)(x) for x > a."""
    _check_order_integral(alpha)
    if not x > a:
        raise DomainError(f"require x > a, got x={x}, a={a}")
    return _integral_value(_as_field(f, a), a, alpha, x, order)


def rl_integral_field(f, a, alpha, order=DEFAULT_ORDER) -> IntegralSlice:
    """I^alpha f as a slice object (composable, with analytic derivatives)."""
    _check_order_integral(alpha)
    return IntegralSlice(_as_field(f, a), a, alpha, order)


def rl_derivative_terms(f, a, alpha, order=DEFAULT_ORDER):
    """D^alpha f as a list of slice terms (stabilized form)."""
    f = _as_field(f, a)
    if isinstance(f, (list, tuple)):
        out = []
        for s in f:
            out.extend(rl_derivative_terms(s, a, alpha, order))
        return out
    if isinstance(f, PowerTerm1D):
        return [_power_derivative_term(f, alpha)]
    terms = []
    base_val = _terms_value_at_base(f)
    if base_val is not None and np.any(base_val != 0):
        terms.append(PowerTerm1D(base_val * recip_gamma(1 - alpha), -alpha, a))
    terms.append(IntegralSlice(_terms_derivative(f), a, 1 - alpha, order))
    return terms


def rl_derivative(f, a, alpha, x, order=DEFAULT_ORDER):
    """Riemann-Liouville derivative (D_{a+}^alpha f)(x), 0 < Re alpha < 1."""
    _check_order_derivative(alpha, n=1)
    if not x > a:
        raise DomainError(f"require x > a, got x={x}, a={a}")
    f = _as_field(f, a)
    if isinstance(f, PowerTerm1D):
        return _power_derivative(f, a, alpha, x)
    total = np.zeros(4, dtype=complex)
    for term in rl_derivative_terms(f, a, alpha, order):
        total = total + slice_term_values(term, np.asarray([float(x)]))[0]
    return total


def rl_derivative_n(f, a, alpha, x, n, derivatives=None, order=DEFAULT_ORDER):
    """Riemann-Liouville derivative of order alpha with n-1 < Re alpha < n.

    Stabilized form: boundary terms f^(m)(a) (x-a)^(m-alpha)/Gamma(m+1-alpha)
    for m = 0..n-1 plus I^(n-alpha)[f^(n)].  Analytic derivatives of orders
    1..n are taken from `derivatives` when given, else from the field's own
    derivative chain.
    """
    _check_order_derivative(alpha, n=n)
    if not x > a:
        raise DomainError(f"require x > a, got x={x}, a={a}")
    f = _as_field(f, a)
    if isinstance(f, PowerTerm1D):
        return _power_derivative(f, a, alpha, x)
    if derivatives is not None:
        if len(derivatives) < n:
            raise MissingDerivative(f"need {n} derivatives, got {len(derivatives)}")
        chain = [f]
        for d in derivatives[:n]:
            chain.append(_as_field(d, a))
    else:
        chain = [f]
        for _ in range(n):
            chain.append(_terms_derivative(chain[-1]))
    total = np.zeros(4, dtype=complex)
    xa = complex(x - a)
    for m in range(n):
        fm_at_a = _terms_value_at_base(chain[m])
        if fm_at_a is None or not np.any(fm_at_a != 0):
            continue
        total = total + fm_at_a * recip_gamma(m + 1 - alpha) * xa ** (m - alpha)
    total = total + _integral_value(chain[n], a, n - alpha, x, order)
    return total


def partial_rl_integral(F, box, j, alpha_j, q, xj, order=DEFAULT_ORDER):
    """RL integral along axis j of the slice of F through q, at x_j."""
    a_j = float(box.a[j])
    if not xj > a_j:
        raise DomainError(f"require x_j > a_j, got {xj} <= {a_j}")
    if xj > box.b[j] + 1e-12:
        raise DomainError(f"x_j = {xj} beyond the box on axis {j}")
    return rl_integral(F.slice1d(q, j), a_j, alpha_j, xj, order)


def partial_rl_derivative(F, box, j, alpha_j, q, xj, order=DEFAULT_ORDER):
    """RL derivative along axis j of the slice of F through q, at x_j."""
    a_j = float(box.a[j])
    if not xj > a_j:
        raise DomainError(f"require x_j > a_j, got {xj} <= {a_j}")
    return rl_derivative(F.slice1d(q, j), a_j, alpha_j, xj, order)
