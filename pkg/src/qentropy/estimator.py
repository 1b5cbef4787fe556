"""Multiplicative entropy estimation from purified oracle access.

Pipeline: derive the split threshold and power exponent from (n, gamma, eps);
flag light elements by singular value estimation and estimate their mass by
amplitude estimation; transform heavy singular values by the two power
polynomials and estimate the resulting power sums; recombine into an
entropy estimate
    H_tilde = H_heavy + w_light * log2(n) / gamma'
that is (1+2*eps)*gamma-multiplicative whenever the entropy promise holds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dists import DensityMatrix, Distribution, ValidationError, shannon_entropy, von_neumann_entropy
from .encodings import (
    ProjectedUnitaryEncoding,
    PurifiedOracle,
    projected_encoding_classical,
    projected_encoding_quantum,
    spectral_encoding_classical,
    spectral_encoding_quantum,
)
from .logapprox import TaylorPolynomial, certify, taylor_poly_neg, taylor_poly_pos
from .qsub import M_for_precision, QueryLedger, boost_median, qae, qsve, qsvt_apply

LN2 = math.log(2.0)
TOTAL_BOUND_CONSTANT = 5000.0  # calibrated constant in the total-query bound
GAMMA_DEGENERATE_TOL = 1e-9


@dataclass(frozen=True)
class EstimatorParams:
    """Target instance size and accuracy.

    gamma > 1 is the multiplicative target; eps in (0, 1) the slack in the
    (1+2*eps)*gamma guarantee.  If `eta` is given, eps is set to eta/8 (the
    promise-slack interface).
    """

    n: int
    gamma: float
    eps: float = 0.1
    eta: float | None = None

    def __post_init__(self):
        if self.n < 2:
            raise ValidationError("n must be >= 2")
        if self.gamma <= 1.0:
            raise ValidationError("gamma must exceed 1")
        if self.eta is not None:
            object.__setattr__(self, "eps", self.eta / 8.0)
        if not (0.0 < self.eps < 1.0):
            raise ValidationError("eps must be in (0, 1)")


@dataclass
class DerivedParams:
    m_bits: int
    sqrt_beta_prime: float
    beta_prime: float
    gamma_prime: float      # light-term divisor, sqrt(log2(n) / (2*m)) floored at 1
    gamma_heavy: float      # factor backing the power exponent
    a: float
    delta: float            # polynomial domain edge on the encoded scale
    eps1: float
    eps2: float
    eps3: float
    M_light: int
    M_heavy: int
    alpha: float
    poly_pos: TaylorPolynomial | None = None
    poly_neg: TaylorPolynomial | None = None

    @property
    def deg_pos(self) -> int:
        return self.poly_pos.degree if self.poly_pos is not None else 0

    @property
    def deg_neg(self) -> int:
        return self.poly_neg.degree if self.poly_neg is not None else 0


def derive_params(params: EstimatorParams, alpha: float = 1.0,
                  m_bits: int | None = None, build_polys: bool = True,
                  grid_points: int = 4001) -> DerivedParams:
    """Derive threshold, exponent, error budgets, polynomials, and QAE rounds.

    sqrt(beta') = 2^-m with m = ceil(log2(n) / (2*gamma^2)), so that
    beta' = n^(-1/gamma'^2) for the rounded gamma' = sqrt(log2(n)/(2m)) <= gamma.
    If the rounding degenerates to gamma' = 1 the power exponent falls back
    to the requested gamma (still a valid one-sided factor) and the light
    term uses the exact divisor 1.
    """
    n, gamma, eps = params.n, params.gamma, params.eps
    logn = math.log2(n)
    if m_bits is None:
        m_bits = max(1, math.ceil(logn / (2.0 * gamma**2)))
    sqrt_beta = 2.0**-m_bits
    beta_prime = sqrt_beta**2
    gp = math.sqrt(logn / (2.0 * m_bits))
    if gp > 1.0 + GAMMA_DEGENERATE_TOL:
        gamma_prime = gp
        gamma_heavy = gp
    else:
        gamma_prime = 1.0
        gamma_heavy = gamma
    a = math.log(gamma_heavy) / math.log(1.0 / beta_prime)
    log_inv_beta = math.log(1.0 / beta_prime)
    eps1 = eps / logn**2
    eps2 = eps * math.log(gamma) / (2.0 * n * math.sqrt(gamma) * log_inv_beta)
    eps3 = eps * math.log(gamma) / (4.0 * math.sqrt(gamma) * log_inv_beta)
    delta = sqrt_beta / (2.0 * alpha)
    derived = DerivedParams(
        m_bits=m_bits, sqrt_beta_prime=sqrt_beta, beta_prime=beta_prime,
        gamma_prime=gamma_prime, gamma_heavy=gamma_heavy, a=a, delta=delta,
        eps1=eps1, eps2=eps2, eps3=eps3,
        M_light=M_for_precision(1.0, eps1), M_heavy=M_for_precision(1.0, eps3),
        alpha=alpha,
    )
    if build_polys:
        derived.poly_pos = taylor_poly_pos(a, delta, eps2)
        derived.poly_neg = taylor_poly_neg(a, delta, eps2)
        certify(derived.poly_pos, grid_points)
        certify(derived.poly_neg, grid_points)
    return derived


# ---------------------------------------------------------------------------
# Stage results
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LightweightResult:
    w_tilde: float
    w_true: float
    light_flags: np.ndarray
    rounds: int


@dataclass(frozen=True)
class HeavyResult:
    h_heavy: float
    f_plus_hat: float
    f_minus_hat: float
    heavy_flags: np.ndarray
    rounds: int


def _sve_prep_cost(alpha: float, m_bits: int) -> int:
    from .qsub import SVE_ROUNDS_FACTOR
    return math.ceil(alpha * SVE_ROUNDS_FACTOR * 2**m_bits)


def lightweight(enc: ProjectedUnitaryEncoding, derived: DerivedParams, mode: str,
                rng: np.random.Generator, ledger: QueryLedger,
                sve_mode: str = "ideal_svd") -> LightweightResult:
    """Estimate the total mass of elements below the split threshold."""
    sve = qsve(enc, derived.m_bits, ledger, mode=sve_mode)
    light = sve.estimates < derived.sqrt_beta_prime
    p = enc.true_values() ** 2
    w_true = float(p[light].sum())
    est = qae(min(1.0, w_true), derived.M_light, mode, rng, ledger,
              prep_cost_U=_sve_prep_cost(enc.alpha, derived.m_bits))
    return LightweightResult(w_tilde=est.value, w_true=w_true,
                             light_flags=light, rounds=est.rounds)


def heavy_entropy(enc: ProjectedUnitaryEncoding, derived: DerivedParams, mode: str,
                  rng: np.random.Generator, ledger: QueryLedger,
                  sve_mode: str = "ideal_svd") -> HeavyResult:
    """Estimate the entropy carried by elements at or above the threshold.

    Runs the two power-polynomial transformations, amplitude-estimates the
    resulting power sums F+- = sum_heavy p_i * poly(sigma_i/alpha)^2, and
    reconstructs the heavy entropy with the exact stored normalizations:
        H_heavy = (F-/(nu_-^2 alpha^(2a)) - F+/(nu_+^2 alpha^(-2a))) / (2 a ln 2).
    """
    if derived.poly_pos is None or derived.poly_neg is None:
        raise ValidationError("derived parameters lack constructed polynomials")
    sve = qsve(enc, derived.m_bits, ledger, mode=sve_mode)
    heavy = sve.estimates >= derived.sqrt_beta_prime
    p = enc.true_values() ** 2
    prep = _sve_prep_cost(enc.alpha, derived.m_bits)
    hats = {}
    for label, poly in (("plus", derived.poly_pos), ("minus", derived.poly_neg)):
        tenc = qsvt_apply(enc, poly, ledger)
        amp = float((p[heavy] * tenc.sigma[heavy] ** 2).sum())
        est = qae(min(1.0, amp), derived.M_heavy, mode, rng, ledger,
                  prep_cost_U=prep + poly.degree)
        hats[label] = est.value
    a, alpha = derived.a, derived.alpha
    nu_p = derived.poly_pos.normalization
    nu_m = derived.poly_neg.normalization
    f_plus = hats["plus"] / (nu_p**2 * alpha ** (-2.0 * a))
    f_minus = hats["minus"] / (nu_m**2 * alpha ** (2.0 * a))
    h_heavy = (f_minus - f_plus) / (2.0 * a * LN2)
    return HeavyResult(h_heavy=h_heavy, f_plus_hat=hats["plus"],
                       f_minus_hat=hats["minus"], heavy_flags=heavy,
                       rounds=derived.M_heavy)


# ---------------------------------------------------------------------------
# Top-level estimation
# ---------------------------------------------------------------------------

@dataclass
class EstimateReport:
    h_tilde: float
    h_true: float
    gamma: float
    eps: float
    mode: str
    seed: int
    repetitions: int
    n: int
    alpha: float
    h_heavy: float
    w_light: float
    m_bits: int
    gamma_prime: float
    a: float
    deg_pos: int
    deg_neg: int
    ledger: dict
    within_guarantee: bool
    promise_satisfied: bool

    def to_record(self) -> dict:
        rec = dict(self.__dict__)
        rec["ledger"] = dict(self.ledger)
        return rec


def _resolve_encoding(source, dense: bool | None = None):
    """Map a distribution / density matrix / oracle onto (encoding, H_true)."""
    if isinstance(source, Distribution):
        if dense:
            from .encodings import build_purified_oracle_classical
            enc = projected_encoding_classical(build_purified_oracle_classical(source))
        else:
            enc = spectral_encoding_classical(source)
        return enc, shannon_entropy(source)
    if isinstance(source, DensityMatrix):
        if dense:
            from .encodings import build_purified_oracle_quantum
            enc = projected_encoding_quantum(build_purified_oracle_quantum(source))
        else:
            enc = spectral_encoding_quantum(source.spectrum())
        return enc, von_neumann_entropy(source)
    if isinstance(source, PurifiedOracle):
        if source.kind == "quantum":
            enc = projected_encoding_quantum(source)
            h = von_neumann_entropy(DensityMatrix(source.reduced_state()))
        else:
            enc = projected_encoding_classical(source)
            red = np.clip(np.real(np.diag(source.reduced_state())), 0.0, None)
            h = shannon_entropy(red / red.sum())
        return enc, h
    if isinstance(source, ProjectedUnitaryEncoding):
        p = source.true_values() ** 2
        return source, shannon_entropy(p / p.sum())
    raise ValidationError(f"cannot interpret source of type {type(source).__name__}")


def promise_threshold(gamma: float, eps: float) -> float:
    """Entropy promise 3*gamma + 1/(2*eps) backing the guarantee."""
    return 3.0 * gamma + 1.0 / (2.0 * eps)


def check_guarantee(h_tilde: float, h_true: float, gamma: float, eps: float) -> bool:
    """Inclusive check H/((1+2eps)gamma) <= H_tilde <= (1+2eps)*gamma*H."""
    g = (1.0 + 2.0 * eps) * gamma
    return h_true / g <= h_tilde <= g * h_true


def estimate_entropy(source, params: EstimatorParams, mode: str = "exact",
                     seed: int = 0, repetitions: int = 1,
                     sve_mode: str = "ideal_svd", dense: bool | None = None,
                     derived: DerivedParams | None = None) -> EstimateReport:
    """Full estimator: light mass + heavy power sums, optionally median-boosted.

    `mode` is the amplitude-estimation noise model: exact (noise-free),
    bound_only (adversarial within each error bound), sampled (exact
    outcome distribution).  `repetitions` (odd) applies median boosting to
    the final estimate; the ledger accumulates over all repetitions.
    """
    if repetitions < 1 or repetitions % 2 == 0:
        raise ValidationError("repetitions must be a positive odd number")
    enc, h_true = _resolve_encoding(source, dense)
    if derived is None:
        derived = derive_params(params, alpha=enc.alpha)
    ledger = QueryLedger()
    estimates, heavies, lights = [], [], []
    for k in range(repetitions):
        rng = np.random.default_rng(seed + k)
        lw = lightweight(enc, derived, mode, rng, ledger, sve_mode)
        hv = heavy_entropy(enc, derived, mode, rng, ledger, sve_mode)
        h_k = max(0.0, hv.h_heavy + lw.w_tilde * math.log2(params.n) / derived.gamma_prime)
        estimates.append(h_k)
        heavies.append(hv.h_heavy)
        lights.append(lw.w_tilde)
    h_tilde = boost_median(estimates) if repetitions > 1 else estimates[0]
    return EstimateReport(
        h_tilde=h_tilde, h_true=h_true, gamma=params.gamma, eps=params.eps,
        mode=mode, seed=seed, repetitions=repetitions, n=params.n,
        alpha=enc.alpha, h_heavy=float(np.median(heavies)),
        w_light=float(np.median(lights)), m_bits=derived.m_bits,
        gamma_prime=derived.gamma_prime, a=derived.a,
        deg_pos=derived.deg_pos, deg_neg=derived.deg_neg,
        ledger=ledger.snapshot(),
        within_guarantee=check_guarantee(h_tilde, h_true, params.gamma, params.eps),
        promise_satisfied=h_true >= promise_threshold(params.gamma, params.eps),
    )


def estimate_additive(source, eps_add: float, mode: str = "exact", seed: int = 0,
                      repetitions: int = 1) -> EstimateReport:
    """Additive estimation via gamma = 1 + eps_add/log2(n).

    Uses a deepened split threshold beta' = n^-2 so the light remainder
    (bounded by 2*log2(n)/n) stays inside the additive budget; the heavy
    power sums then carry the whole estimate up to the gamma factor.
    """
    if eps_add <= 0:
        raise ValidationError("eps_add must be positive")
    n = _source_size(source)
    logn = math.log2(n)
    gamma = 1.0 + eps_add / logn
    params = EstimatorParams(n=n, gamma=gamma, eps=min(0.5, eps_add / (4.0 * logn)))
    enc, _ = _resolve_encoding(source)
    derived = derive_params(params, alpha=enc.alpha, m_bits=math.ceil(logn))
    return estimate_entropy(source, params, mode=mode, seed=seed,
                            repetitions=repetitions, derived=derived)


@dataclass(frozen=True)
class ThresholdReport:
    high: bool
    h_tilde: float
    gamma: float
    cut: float
    estimate: EstimateReport


def entropy_threshold_test(source, h_high: float, h_low: float, eps: float = 0.1,
                           mode: str = "exact", seed: int = 0,
                           repetitions: int = 1) -> ThresholdReport:
    """Decide H >= h_high versus H <= h_low with gamma = sqrt(h_high/h_low)."""
    if not (h_high > h_low > 0):
        raise ValidationError("need h_high > h_low > 0")
    gamma = math.sqrt(h_high / h_low)
    if gamma <= 1.0:
        raise ValidationError("threshold gap too small")
    n = _source_size(source)
    params = EstimatorParams(n=n, gamma=gamma, eps=eps)
    rep = estimate_entropy(source, params, mode=mode, seed=seed,
                           repetitions=repetitions)
    cut = math.sqrt(h_high * h_low)
    return ThresholdReport(high=rep.h_tilde > cut, h_tilde=rep.h_tilde,
                           gamma=gamma, cut=cut, estimate=rep)


def _source_size(source) -> int:
    if isinstance(source, (Distribution, DensityMatrix)):
        return source.n
    if isinstance(source, PurifiedOracle):
        return int(source.register_dims[1 - source.ancilla_axis])
    if isinstance(source, ProjectedUnitaryEncoding):
        return int(source.sigma.size)
    raise ValidationError(f"cannot interpret source of type {type(source).__name__}")


def total_query_bound(n: int, gamma: float, eps: float, alpha: float = 1.0,
                      constant: float = TOTAL_BOUND_CONSTANT) -> float:
    """Budget C * alpha * n^(1/(2 gamma^2)) * log2(n)^2 / (eps * log2(gamma))."""
    return (constant * alpha * n ** (1.0 / (2.0 * gamma**2))
            * math.log2(n) ** 2 / (eps * math.log2(gamma)))
