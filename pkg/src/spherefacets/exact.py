"""Quadrature-exact facet counts and facet-height laws.

For n i.i.d. uniform points on the unit sphere in R^d, the expected
number of facets whose supporting hyperplane sits at height in [h1, h2]
is

    F[h1, h2] = binom(n, d) * 2 * c_out * J[h1, h2],

    J[h1, h2] = integral( (1 - h^2)**((d*d - 2*d - 1)/2) * G(h)**(n - d),
                          h = h1 .. h2 ),

where G is the single-point height CDF (``numerics.inner_cdf``) and
c_out normalizes (1 - h^2)**((d*d - 2*d - 1)/2) on [-1, 1].  The typical
facet height has CDF J[-1, h] / J[-1, 1].

Numerically everything runs on the substitution h = sin(theta), which
removes the d = 2 endpoint singularity and makes the log-integrand
concave in theta.  The integration variable is the gap u = pi/2 - theta
to the upper endpoint, because the integrand mass can concentrate within
u ~ exp(-2 ln(n) / d), far below float resolution of theta itself; the
slice nearest the endpoint is integrated in log(u).  The peak is located
by golden-section search before paneling, magnitudes stay in log scale
throughout, and counts are returned as LogReal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .logreal import AccuracyConfig, LogReal, QUADRATURE_ACCURACY, log_add_exp
from .numerics import log_c_alpha, log_reg_inc_beta, log_reg_inc_beta_from_log_x
from .quadrature import geometric_ladder, log_integrate, panel_log_values
from .solvers import bisect_root, golden_max

__all__ = [
    "PolytopeParams",
    "HeightInterval",
    "FULL_RANGE",
    "TypicalHeightLaw",
    "height_integral",
    "expected_facets",
    "log_binomial",
    "typical_height_cdf",
    "typical_height_quantile",
    "gamma_statistic_cdf",
    "cdf_table",
]

HALF_PI = 0.5 * math.pi
_NEG_INF = float("-inf")
_MAX_EXP_ARG = 709.0
# below this gap from the endpoint, integrate in log(u) space
_LOG_SLICE_LIMIT = 0.25


@dataclass(frozen=True)
class PolytopeParams:
    """Point count and ambient dimension, n > d >= 2.

    ``n`` may be omitted in favor of ``ln_n`` for counts beyond float
    range (needed once n grows like exp(rho * d)).
    """

    n: float | None
    d: int
    ln_n: float | None = None

    def __post_init__(self):
        if not (isinstance(self.d, int) and self.d >= 2):
            raise ValueError(f"dimension must be an integer >= 2, got {self.d}")
        if self.n is not None:
            n = float(self.n)
            if not (n > self.d and n == math.floor(n)):
                raise ValueError(f"need integer n > d, got n={self.n}, d={self.d}")
            object.__setattr__(self, "n", n)
            object.__setattr__(self, "ln_n", math.log(n))
        else:
            if self.ln_n is None:
                raise ValueError("provide either n or ln_n")
            if not self.ln_n > math.log(self.d + 1) - 1e-12:
                raise ValueError(f"ln_n={self.ln_n} implies n <= d+1 for d={self.d}")

    @classmethod
    def from_log(cls, ln_n: float, d: int) -> "PolytopeParams":
        return cls(None, d, ln_n)

    @property
    def log_n_minus_d(self) -> float:
        """ln(n - d), valid in both representations."""
        if self.n is not None:
            return math.log(self.n - self.d)
        scale = self.d * math.exp(-self.ln_n) if self.ln_n < 745 else 0.0
        return self.ln_n + math.log1p(-scale)


@dataclass(frozen=True)
class HeightInterval:
    """A height window [h1, h2] inside [-1, 1].

    Angular endpoints theta = arcsin(h) and upper gaps u = pi/2 - theta
    are carried alongside the heights; windows hugging h = 1 can be
    constructed from the gap directly (``upper_tail``) with precision the
    height field itself cannot represent.
    """

    h1: float
    h2: float
    theta1: float = None  # type: ignore[assignment]
    theta2: float = None  # type: ignore[assignment]
    gap1: float = None  # type: ignore[assignment]  # pi/2 - theta1 (larger gap)
    gap2: float = None  # type: ignore[assignment]  # pi/2 - theta2

    def __post_init__(self):
        if not (-1.0 <= self.h1 <= self.h2 <= 1.0):
            raise ValueError(f"need -1 <= h1 <= h2 <= 1, got [{self.h1}, {self.h2}]")
        if self.theta1 is None:
            object.__setattr__(self, "theta1", math.asin(self.h1))
        if self.theta2 is None:
            object.__setattr__(self, "theta2", math.asin(self.h2))
        if self.gap1 is None:
            object.__setattr__(self, "gap1", HALF_PI - self.theta1)
        if self.gap2 is None:
            object.__setattr__(self, "gap2", HALF_PI - self.theta2)
        if not 0.0 <= self.gap2 <= self.gap1:
            raise ValueError("angular gaps are inconsistent with the window order")

    @classmethod
    def from_theta(cls, theta1: float, theta2: float) -> "HeightInterval":
        if not -HALF_PI <= theta1 <= theta2 <= HALF_PI:
            raise ValueError("need -pi/2 <= theta1 <= theta2 <= pi/2")
        return cls(math.sin(theta1), math.sin(theta2), theta1, theta2)

    @classmethod
    def upper_tail(cls, gap: float) -> "HeightInterval":
        """The window [sin(pi/2 - gap), 1], with the gap carried exactly."""
        if not 0.0 <= gap <= math.pi:
            raise ValueError(f"gap must lie in [0, pi], got {gap}")
        return cls(math.cos(gap), 1.0, HALF_PI - gap, HALF_PI, gap, 0.0)

    def is_empty(self) -> bool:
        return self.gap1 == self.gap2


FULL_RANGE = HeightInterval(-1.0, 1.0, -HALF_PI, HALF_PI, math.pi, 0.0)


class _GapIntegrand:
    """E(u) for h = cos(u): the log-integrand in the gap variable.

    E(u) = (d^2 - 2d) ln sin(u) + (n - d) ln G(cos u), with the beta
    argument (1 - cos u)/2 = sin^2(u/2) evaluated from u directly, so
    nothing cancels no matter how small the gap is.  ``at_log_gap``
    evaluates E at u = exp(t) for gaps below float range (the mass sits
    at gaps ~ exp(-2 ln(n)/d), which underflows once ln n >> 350 d).
    """

    def __init__(self, params: PolytopeParams):
        self.a = 0.5 * (params.d - 1)  # inner beta parameter
        self.p_out = params.d * params.d - 2 * params.d
        self.log_m = params.log_n_minus_d
        # left scan limit for ln(u): generously below any possible peak
        self.t_floor = min(-50.0, -2.0 * params.ln_n - 100.0)

    def _log_neg_log_g(self, u: float) -> float:
        """ln(-ln G(cos u)); +inf encodes G = 0."""
        s = math.sin(0.5 * u)
        xc = s * s  # (1 - cos u) / 2
        if xc < 0.5:
            log_gc = log_reg_inc_beta(xc, self.a, self.a)
            gc = math.exp(log_gc)
            if gc > 1e-8:
                return math.log(-math.log1p(-gc))
            return log_gc + math.log1p(0.5 * gc)
        c = math.cos(0.5 * u)
        log_g = log_reg_inc_beta(c * c, self.a, self.a)
        if log_g == _NEG_INF:
            return math.inf
        return math.log(-log_g)

    def __call__(self, u: float) -> float:
        if u <= 0.0 or u >= math.pi:
            return _NEG_INF
        out = 0.0
        if self.p_out:
            out = self.p_out * math.log(math.sin(u))
        lnl = self._log_neg_log_g(u)
        arg = self.log_m + lnl
        if arg >= _MAX_EXP_ARG:
            return _NEG_INF
        return out - math.exp(arg)

    def at_log_gap(self, t: float) -> float:
        """E(exp(t)); for t <= -40 the small-gap limits are exact in float."""
        if t > -40.0:
            return self(math.exp(t))
        # sin(u) = u and (1 - cos u)/2 = (u/2)^2 to relative O(u^2)
        log_gc = log_reg_inc_beta_from_log_x(2.0 * (t - math.log(2.0)), self.a, self.a)
        arg = self.log_m + log_gc
        if arg >= _MAX_EXP_ARG:
            return _NEG_INF
        return self.p_out * t - math.exp(arg)


def _integrate_linear(
    f_u, lo: float, hi: float, cfg: AccuracyConfig, reference_ln: float | None = None
) -> LogReal:
    span = hi - lo
    mode, peak = golden_max(f_u, lo, hi, xtol=max(span * 1e-12, 1e-300))
    if reference_ln is not None and peak != _NEG_INF:
        # peak * width bounds the integral; skip segments that cannot move
        # the already-accumulated total at the requested tolerance
        if peak + math.log(span) < reference_ln + math.log(cfg.rel_tol) - 40.0:
            return LogReal.zero()
    return log_integrate(
        f_u, geometric_ladder(lo, hi, mode), rel_tol=cfg.rel_tol, max_panels=cfg.max_iter
    )


def _integrate_log_slice(
    f_u: _GapIntegrand, u_lo: float, t_hi: float, cfg: AccuracyConfig
) -> LogReal:
    """Integrate over gaps [u_lo, exp(t_hi)] in t = ln(gap); u_lo may be zero.

    With u_lo = 0 the lower limit is cut where the integrand has fallen
    750 log-units below its peak; the truncated mass is a factor
    exp(-750) of the total, far below any quadrature tolerance.
    """
    f_t = lambda t: f_u.at_log_gap(t) + t
    if u_lo > 0.0:
        t_lo = math.log(u_lo)
        if t_hi - t_lo < 1e-14:
            return _integrate_linear(f_u, u_lo, math.exp(t_hi), cfg)
        mode, _ = golden_max(f_t, t_lo, t_hi, xtol=1e-10)
    else:
        floor = min(f_u.t_floor, t_hi - 1.0)
        mode, peak = golden_max(f_t, floor, t_hi, xtol=1e-10)
        if peak == _NEG_INF:
            return LogReal.zero()
        t_lo, step = mode - 1.0, 1.0
        while t_lo > floor and f_t(t_lo) > peak - 750.0:
            step *= 2.0
            t_lo = mode - step
        t_lo = max(t_lo, floor)
    return log_integrate(
        f_t,
        geometric_ladder(t_lo, t_hi, mode),
        rel_tol=cfg.rel_tol,
        max_panels=cfg.max_iter,
    )


def height_integral(
    params: PolytopeParams,
    window: HeightInterval = FULL_RANGE,
    cfg: AccuracyConfig = QUADRATURE_ACCURACY,
) -> LogReal:
    """The height-window integral J[h1, h2], as a LogReal.

    Raises QuadratureError (with the achieved error estimate) if the
    panel budget ``cfg.max_iter`` is exhausted before ``cfg.rel_tol``.
    """
    if window.is_empty():
        return LogReal.zero()
    f_u = _GapIntegrand(params)
    u_lo, u_hi = window.gap2, window.gap1
    cross = min(_LOG_SLICE_LIMIT, u_hi)
    total = LogReal.zero()
    if u_lo < cross:
        total = total + _integrate_log_slice(f_u, u_lo, math.log(cross), cfg)
    if cross < u_hi:
        reference = total.ln() if total.sign == 1 else None
        total = total + _integrate_linear(f_u, max(u_lo, cross), u_hi, cfg, reference)
    return total


def log_binomial(params: PolytopeParams) -> float:
    """ln binom(n, d); uses the log-only representation when n has one."""
    d = params.d
    if params.n is not None and d <= 100_000:
        n = params.n
        return math.fsum(
            math.log(n - d + j) - math.log(j) for j in range(1, d + 1)
        )
    total = d * params.ln_n - math.lgamma(d + 1)
    if params.ln_n < 50.0:
        inv_n = math.exp(-params.ln_n)
        total += math.fsum(math.log1p(-k * inv_n) for k in range(1, d))
    return total


def expected_facets(
    params: PolytopeParams,
    window: HeightInterval = FULL_RANGE,
    cfg: AccuracyConfig = QUADRATURE_ACCURACY,
) -> LogReal:
    """Expected number of facets with height in the window, as a LogReal."""
    integral = height_integral(params, window, cfg)
    if integral.is_zero():
        return LogReal.zero()
    d = params.d
    ln_f = (
        log_binomial(params)
        + math.log(2.0)
        + log_c_alpha(0.5 * (d * d - 2 * d - 1))
        + integral.ln()
    )
    return LogReal.from_log(ln_f)


@dataclass
class TypicalHeightLaw:
    """Height distribution of the typical facet: CDF(h) = J[-1, h] / J[-1, 1]."""

    params: PolytopeParams
    normalizer: LogReal
    cfg: AccuracyConfig = field(default=QUADRATURE_ACCURACY, repr=False)

    def __post_init__(self):
        if not self.normalizer.sign == 1:
            raise ValueError("normalizer must be positive")
        self._neg_mass = None

    @classmethod
    def for_params(
        cls, params: PolytopeParams, cfg: AccuracyConfig = QUADRATURE_ACCURACY
    ) -> "TypicalHeightLaw":
        return cls(params, height_integral(params, FULL_RANGE, cfg), cfg)

    def _mass_below_theta(self, theta: float) -> float:
        part = height_integral(
            self.params, HeightInterval.from_theta(-HALF_PI, theta), self.cfg
        )
        if part.is_zero():
            return 0.0
        return min(math.exp(part.ln() - self.normalizer.ln()), 1.0)

    def _mass_of_upper_gap(self, gap: float) -> float:
        part = height_integral(self.params, HeightInterval.upper_tail(gap), self.cfg)
        if part.is_zero():
            return 0.0
        return min(math.exp(part.ln() - self.normalizer.ln()), 1.0)

    def _mass_of_upper_log_gap(self, log_gap: float) -> float:
        """Mass of heights above cos(exp(log_gap)); gap may underflow float."""
        if log_gap >= math.log(_LOG_SLICE_LIMIT):
            return self._mass_of_upper_gap(math.exp(log_gap))
        part = _integrate_log_slice(_GapIntegrand(self.params), 0.0, log_gap, self.cfg)
        if part.is_zero():
            return 0.0
        return min(math.exp(part.ln() - self.normalizer.ln()), 1.0)

    @property
    def negative_height_mass(self) -> float:
        """P(typical height < 0); reported alongside the gamma statistic."""
        if self._neg_mass is None:
            self._neg_mass = self._mass_below_theta(0.0)
        return self._neg_mass


def typical_height_cdf(law: TypicalHeightLaw, h: float) -> float:
    """P(typical height <= h)."""
    if not -1.0 <= h <= 1.0:
        raise ValueError(f"height must lie in [-1, 1], got {h}")
    return law._mass_below_theta(math.asin(h))


def typical_height_quantile(law: TypicalHeightLaw, p: float) -> float:
    """Inverse of the typical-height CDF, to 1e-10 absolute in height.

    Bisection runs on the angular variable, which bounds the height error
    by the angular tolerance.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"probability must lie in (0, 1), got {p}")
    theta = bisect_root(
        lambda t: law._mass_below_theta(t) - p,
        -HALF_PI,
        HALF_PI,
        xtol=1e-10,
        max_iter=80,
    )
    return math.sin(theta)


def gamma_statistic_cdf(law: TypicalHeightLaw, y: float) -> float:
    """CDF of the rescaled cap statistic of the typical facet.

    The statistic is Y = n * Gamma(d/2) / (2 sqrt(pi) Gamma((d+1)/2)) *
    (1 - H^2)^((d-1)/2), restricted to H >= 0; for n growing fast enough
    it converges to a Gamma(d-1) law.  The value returned is
    P(H >= h(y)) with h(y) the height solving Y = y; the mass at
    negative heights is reported separately by
    ``law.negative_height_mass``, not folded in.
    """
    if not y > 0:
        raise ValueError(f"statistic value must be positive, got {y}")
    d = law.params.d
    ln_t = (
        math.log(y)
        + math.log(2.0)
        + 0.5 * math.log(math.pi)
        + math.lgamma(0.5 * (d + 1))
        - math.lgamma(0.5 * d)
        - law.params.ln_n
    )
    if ln_t >= 0.0:
        # the implied cap exceeds a hemisphere: Y <= y is certain given H >= 0
        return law._mass_of_upper_gap(HALF_PI)
    # 1 - h^2 = t^(2/(d-1)); the gap is arcsin(sqrt(1 - h^2))
    ln_root_s = ln_t / (d - 1)
    if ln_root_s > -20.0:
        log_gap = math.log(math.asin(min(math.exp(ln_root_s), 1.0)))
    else:
        log_gap = ln_root_s  # arcsin(x) = x to relative O(x^2)
    return law._mass_of_upper_log_gap(log_gap)


def cdf_table(law: TypicalHeightLaw, num: int = 2001) -> tuple:
    """Dense table (theta, height, cdf) of the typical-height CDF.

    The angular grid is refined inside the region that carries the
    integrand mass, located by a concave search plus a coarse scan; the
    table resolves laws whose mass band is no narrower than ~1e-14 in
    angle (beyond that, use the windowed integrals directly).
    """
    f_u = _GapIntegrand(law.params)
    f_theta = lambda t: f_u(HALF_PI - t)
    mode, _ = golden_max(f_theta, -HALF_PI, HALF_PI, xtol=1e-14)
    coarse = np.unique(
        np.concatenate(
            [
                np.linspace(-HALF_PI, HALF_PI, 1025),
                np.asarray(geometric_ladder(-HALF_PI, HALF_PI, mode)),
            ]
        )
    )
    e_vals = np.array([f_theta(t) for t in coarse])
    peak = e_vals.max()
    core = e_vals >= peak - 60.0
    # widen by one node on each side
    active = core.copy()
    active[:-1] |= core[1:]
    active[1:] |= core[:-1]
    lo = coarse[active].min()
    hi = coarse[active].max()
    fine = np.linspace(lo, hi, num)
    grid = np.unique(np.concatenate([coarse, fine]))
    cell_logs = panel_log_values(f_theta, grid)
    acc = _NEG_INF
    prefix = np.empty(len(cell_logs) + 1)
    prefix[0] = _NEG_INF
    for i, v in enumerate(cell_logs):
        acc = log_add_exp(acc, v)
        prefix[i + 1] = acc
    total = prefix[-1]
    with np.errstate(divide="ignore"):
        cdf = np.exp(prefix - total)
    cdf[-1] = 1.0
    return grid, np.sin(grid), cdf
