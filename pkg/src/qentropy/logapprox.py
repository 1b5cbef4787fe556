"""Power-function approximations of the logarithm and their Taylor realizations.

The antisymmetric combination (x^-a - x^a) / (2a ln 2) approximates
log2(1/x) from above on [beta, 1] when a = ln(gamma) / ln(1/beta), with a
one-sided multiplicative overshoot of at most gamma at x = beta.  The two
power functions are realized as truncated binomial (Taylor) series around
x = 1, stored in the shifted basis (powers of x - 1) and evaluated at |x|,
so they act as even functions of the singular value.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dists import ValidationError

MAX_DEGREE = 5_000_000


def choose_exponent(gamma: float, beta: float) -> float:
    """Exponent a = ln(gamma)/ln(1/beta) making x^-a/x^a a gamma-factor log proxy."""
    if gamma <= 1.0:
        raise ValidationError("gamma must exceed 1")
    if not (0.0 < beta < 1.0):
        raise ValidationError("beta must be in (0, 1)")
    return math.log(gamma) / math.log(1.0 / beta)


def f_power_log(x, a: float):
    """(x^-a - x^a) / (2 a ln 2): a base-2 logarithm proxy, exact as a -> 0."""
    if a <= 0:
        raise ValidationError("exponent a must be positive")
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0) or np.any(x > 1):
        raise ValidationError("f_power_log is defined on (0, 1]")
    out = (x**-a - x**a) / (2.0 * a * math.log(2.0))
    return float(out) if out.ndim == 0 else out


def multiplicative_factor_bound(a: float, x: float) -> float:
    """Upper bound exp(a * ln(1/x)) = x^-a on f(x) / log2(1/x)."""
    if a <= 0 or not (0.0 < x < 1.0):
        raise ValidationError("need a > 0 and x in (0, 1)")
    return x**-a


# ---------------------------------------------------------------------------
# Taylor polynomials for x^c and x^-c
# ---------------------------------------------------------------------------

@dataclass
class TaylorPolynomial:
    """Truncated binomial series for normalization * x^(sign*c), shifted basis.

    coeffs[k] multiplies (|x| - 1)^k; evaluation at |x| makes the realized
    function even in x, matching how it is applied to singular values.
    `normalization` is the scale of the approximated target: poly(x) is
    within eps_cert of normalization * x^(sign*c) on [delta, 1].
    """

    coeffs: np.ndarray
    degree: int
    c: float
    sign: int  # +1 approximates x^c, -1 approximates x^-c
    delta: float
    normalization: float
    eps_target: float
    eps_cert: float
    parity: str = "even"
    rescaled: bool = False

    def __call__(self, x):
        x = np.abs(np.asarray(x, dtype=float))
        y = x - 1.0
        acc = np.full_like(y, self.coeffs[self.degree])
        for k in range(self.degree - 1, -1, -1):
            acc = acc * y + self.coeffs[k]
        return float(acc) if acc.ndim == 0 else acc

    def target(self, x):
        x = np.asarray(x, dtype=float)
        out = self.normalization * x ** (self.sign * self.c)
        return float(out) if out.ndim == 0 else out

    def to_record(self) -> dict:
        return {
            "coeffs": [float(v) for v in self.coeffs],
            "degree": self.degree,
            "c": self.c,
            "sign": self.sign,
            "delta": self.delta,
            "normalization": self.normalization,
            "eps_target": self.eps_target,
            "eps_cert": self.eps_cert,
            "parity": self.parity,
            "rescaled": self.rescaled,
        }


def _binom_magnitudes(c: float, k_max: int) -> np.ndarray:
    """|binom(c, k)| for k = 0..k_max, computed by the stable term recurrence."""
    b = np.empty(k_max + 1)
    b[0] = 1.0
    for k in range(k_max):
        b[k + 1] = b[k] * abs(c - k) / (k + 1)
    return b


def binom_abs_series_sum(c: float, k_max: int) -> float:
    """sum_{k=1..k_max} |binom(c, k)|; converges to 1 for c in (0, 1]."""
    return float(_binom_magnitudes(c, k_max)[1:].sum())


def taylor_poly_pos(c: float, delta: float, eps: float) -> TaylorPolynomial:
    """Polynomial approximation of x^c / 2 on [delta, 1].

    Binomial series of (1+y)^c around y = 0, truncated at the smallest
    degree whose tail bound (geometric majorant at radius 1 - delta) is
    below eps.  Since 1 + sum_k>=1 |binom(c,k)| = 2 for c in (0,1], the
    truncation is bounded by 1 in magnitude for |y| <= 1, i.e. on x in [0, 2].
    """
    _check_cde(c, delta, eps)
    norm = 0.5
    if c == 1.0:  # series terminates: x/2 exactly
        return TaylorPolynomial(
            coeffs=np.array([0.5, 0.5]), degree=1, c=c, sign=+1, delta=delta,
            normalization=norm, eps_target=eps, eps_cert=0.0,
        )
    r = 1.0 - delta
    coeffs = [1.0]
    b = 1.0  # binom(c, k), signed
    k = 0
    while True:
        b_next = b * (c - k) / (k + 1)
        # terms decrease in magnitude, so the tail is below a geometric series
        tail = abs(b_next) * r ** (k + 1) / delta if r > 0 else 0.0
        if norm * tail <= eps or r == 0.0:
            break
        coeffs.append(b_next)
        b = b_next
        k += 1
        if k > MAX_DEGREE:
            raise ValidationError("degree cap exceeded in taylor_poly_pos")
    coeffs = norm * np.asarray(coeffs)
    tail_bound = norm * abs(b * (c - k) / (k + 1)) * r ** (k + 1) / delta if r > 0 else 0.0
    return TaylorPolynomial(
        coeffs=coeffs, degree=len(coeffs) - 1, c=c, sign=+1, delta=delta,
        normalization=norm, eps_target=eps, eps_cert=tail_bound,
    )


def taylor_poly_neg(c: float, delta: float, eps: float) -> TaylorPolynomial:
    """Polynomial approximation of (delta^c / 2) * x^-c on [delta, 1].

    Binomial series of (1+y)^-c with the normalization delta^c / 2; the
    shrunken wiggle radius delta' = delta / (2 max(1, c)) certifies the
    magnitude bound 1 down to x = delta - delta'.
    """
    _check_cde(c, delta, eps)
    norm = 0.5 * delta**c
    if delta == 1.0:  # certified domain degenerates to the point x = 1
        return TaylorPolynomial(
            coeffs=np.array([norm]), degree=0, c=c, sign=-1, delta=delta,
            normalization=norm, eps_target=eps, eps_cert=0.0,
        )
    r = 1.0 - delta
    coeffs = [1.0]
    b = 1.0  # binom(-c, k), signed
    k = 0
    while True:
        b_next = b * (-c - k) / (k + 1)
        # summand ratios r*(c+j)/(j+1) increase toward r, so a geometric
        # majorant at ratio r bounds the tail
        tail = abs(b_next) * r ** (k + 1) / delta
        if norm * tail <= eps:
            break
        coeffs.append(b_next)
        b = b_next
        k += 1
        if k > MAX_DEGREE:
            raise ValidationError("degree cap exceeded in taylor_poly_neg")
    coeffs = norm * np.asarray(coeffs)
    tail_bound = norm * abs(b * (-c - k) / (k + 1)) * r ** (k + 1) / delta
    return TaylorPolynomial(
        coeffs=coeffs, degree=len(coeffs) - 1, c=c, sign=-1, delta=delta,
        normalization=norm, eps_target=eps, eps_cert=tail_bound,
    )


def _check_cde(c: float, delta: float, eps: float):
    if not (0.0 < c <= 1.0):
        raise ValidationError("power c must be in (0, 1]")
    if not (0.0 < delta <= 1.0):
        raise ValidationError("delta must be in (0, 1]")
    if eps <= 0:
        raise ValidationError("eps must be positive")


# ---------------------------------------------------------------------------
# Grid certification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CertReport:
    sup_error: float        # max |poly - target| on [delta, 1]
    max_abs: float          # max |poly| on [-1, 1] after any rescale
    grid_points: int
    rescaled: bool
    scale: float            # factor the polynomial was divided by (1.0 if none)


def _cert_grid(lo: float, hi: float, m: int) -> np.ndarray:
    """Uniform grid joined with Chebyshev nodes on [lo, hi]."""
    uni = np.linspace(lo, hi, m)
    k = np.arange(1, m + 1)
    cheb = 0.5 * (lo + hi) + 0.5 * (hi - lo) * np.cos((2 * k - 1) * np.pi / (2 * m))
    return np.union1d(uni, cheb)


def certify(poly: TaylorPolynomial, grid_points: int = 20001) -> CertReport:
    """Dense-grid certification of approximation error and magnitude bound.

    Checks |poly - normalization * x^(sign*c)| on [delta, 1] and |poly| on
    [-1, 1] (via the even realization).  If the magnitude exceeds 1 the
    polynomial is rescaled in place by the measured maximum, the stored
    normalization is updated, and the rescale is recorded.
    """
    if grid_points < 1000:
        raise ValidationError("grid_points must be at least 1000")
    full = _cert_grid(-1.0, 1.0, grid_points)
    max_abs = float(np.abs(poly(full)).max())
    rescaled, scale = False, 1.0
    if max_abs > 1.0 + 1e-12:
        scale = max_abs
        poly.coeffs = poly.coeffs / scale
        poly.normalization /= scale
        poly.rescaled = True
        rescaled = True
        max_abs = float(np.abs(poly(full)).max())
    dom = _cert_grid(poly.delta, 1.0, grid_points)
    sup_err = float(np.abs(poly(dom) - poly.target(dom)).max())
    poly.eps_cert = max(poly.eps_cert / scale, sup_err)
    return CertReport(sup_error=sup_err, max_abs=max_abs, grid_points=grid_points,
                      rescaled=rescaled, scale=scale)


def degree_bound(c: float, delta: float, eps: float, constant: float = 20.0) -> int:
    """Analytic cap constant * (max(1, c)/delta) * ln(1/eps) on the degree."""
    return int(math.ceil(constant * (max(1.0, c) / delta) * math.log(1.0 / eps)))
