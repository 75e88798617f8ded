//! The normalized tangent sum T_m and both sides of every explicit
//! inequality the library checks: the count estimates for Lehmer numbers,
//! LPRs, e-free Lehmer numbers and Golomb-Lehmer pairs, the two existence
//! conditions, and the omega upper bound.
//!
//! All logarithms are natural. Checks are strict inequalities with no
//! epsilon slack; a result within 1e-9 of the boundary is flagged as a
//! warning rather than silently passed or failed.

use std::f64::consts::PI;

use crate::arith::{Factorization, PrimeContext};
use crate::{Error, Result};

/// Largest m for which T_m is summed directly; beyond it, bound evaluators
/// substitute the proven upper limit for T_m.
pub const T_COMPUTE_CAP: u64 = 2_000_000;

/// Band around the exact boundary inside which a verdict is flagged.
pub const BOUNDARY_WARNING_BAND: f64 = 1e-9;

/// The tangent sum 2 * sum_{j <= (m-1)/2} tan(pi j / m) / (m log m)
/// together with its unnormalized numerator sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentSumValue {
    pub m: u64,
    pub t: f64,
    pub sum: f64,
}

/// T_m by compensated summation, terms ascending so the dominant
/// near-pi/2 tangents are added last.
pub fn compute_t(m: u64) -> Result<TangentSumValue> {
    if m < 3 || m % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "tangent sum needs an odd m >= 3, got {m}"
        )));
    }
    if m > T_COMPUTE_CAP {
        return Err(Error::CapExceeded {
            what: "tangent sum argument",
            value: m,
            cap: T_COMPUTE_CAP,
        });
    }
    let mf = m as f64;
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for j in 1..=(m - 1) / 2 {
        let y = (PI * j as f64 / mf).tan() - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    Ok(TangentSumValue {
        m,
        t: 2.0 * sum / (mf * mf.ln()),
        sum,
    })
}

/// Proven lower limit (2/pi)(1 + 0.548 / log m) < T_m.
pub fn tangent_lower_limit(m: u64) -> f64 {
    (2.0 / PI) * (1.0 + 0.548 / (m as f64).ln())
}

/// Proven upper limit T_m < (2/pi)(1 + 1.549 / log m).
pub fn tangent_upper_limit(m: u64) -> f64 {
    (2.0 / PI) * (1.0 + 1.549 / (m as f64).ln())
}

/// T_p^2 as used on the right-hand side of the count estimates: the exact
/// value below the computation cap, else the proven upper limit squared
/// (clamped to 1/2, which applies from m = 1637 on).
///
/// The several estimates evaluated per prime all need the same value, so
/// the last result is memoized per thread.
pub fn t_squared(p: u64) -> f64 {
    thread_local! {
        static LAST: std::cell::Cell<(u64, f64)> = const { std::cell::Cell::new((0, 0.0)) };
    }
    LAST.with(|last| {
        let (cached_p, cached) = last.get();
        if cached_p == p {
            return cached;
        }
        let value = if p <= T_COMPUTE_CAP {
            let t = compute_t(p).expect("p odd and under cap").t;
            t * t
        } else {
            let u = tangent_upper_limit(p);
            (u * u).min(0.5)
        };
        last.set((p, value));
        value
    })
}

/// Which inequality a report instantiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    /// lower limit < T_m
    TangentLower,
    /// T_m < upper limit
    TangentUpper,
    /// |M_p - (p-1)/2| < T_p^2 sqrt(p) log^2 p
    LehmerCount,
    /// |M_p - (p-1)/2| < (1/2) sqrt(p) log^2 p, valid for all p
    LehmerCountSimplified,
    /// |N_p - phi(p-1)/2| < T_p^2 theta W sqrt(p) log^2 p
    LprCount,
    /// same with T_p^2 replaced by 1/2
    LprCountSimplified,
    /// |N(e) - theta_e (p-1)/2| < T_p^2 theta_e W_e sqrt(p) log^2 p
    EfreeLehmerCount,
    /// |G_p - theta^2 (p-2)/4| < (theta^2/4) T_p^2 [W^2 (9 log^2 p + 1) - 1] sqrt(p)
    GolombPairCount,
    /// same with T_p^2 replaced by 1/2
    GolombPairCountSimplified,
    /// sqrt(p) > 2 T_p^2 W log^2 p + p^{-1/2} implies an LPR exists
    LprExistence,
    /// sqrt(p) > W log^2 p + p^{-1/2} implies an LPR exists (p > 7)
    LprExistenceSimple,
    /// omega(n) <= 1.4 log n / log log n
    OmegaUpper,
}

/// One inequality instance, evaluated: the counted/measured quantity, the
/// theoretical center, the right-hand side, and the signed margin by which
/// the inequality holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub p_or_m: u64,
    pub exact_value: f64,
    pub center: f64,
    pub bound: f64,
    pub holds: bool,
    pub slack: f64,
    /// slack within the warning band of zero: near-boundary outcome
    pub warning: bool,
}

impl BoundReport {
    /// |exact - center| < bound
    fn band(kind: BoundKind, p_or_m: u64, exact_value: f64, center: f64, bound: f64) -> Self {
        let slack = bound - (exact_value - center).abs();
        BoundReport {
            kind,
            p_or_m,
            exact_value,
            center,
            bound,
            holds: slack > 0.0,
            slack,
            warning: slack.abs() < BOUNDARY_WARNING_BAND,
        }
    }

    /// lhs > rhs (one-sided exceedance; slack = lhs - rhs)
    fn exceeds(kind: BoundKind, p_or_m: u64, lhs: f64, rhs: f64) -> Self {
        let slack = lhs - rhs;
        BoundReport {
            kind,
            p_or_m,
            exact_value: lhs,
            center: rhs,
            bound: rhs,
            holds: slack > 0.0,
            slack,
            warning: slack.abs() < BOUNDARY_WARNING_BAND,
        }
    }

    /// value < limit (one-sided cap; slack = limit - value)
    fn below(kind: BoundKind, p_or_m: u64, value: f64, limit: f64) -> Self {
        let slack = limit - value;
        BoundReport {
            kind,
            p_or_m,
            exact_value: value,
            center: limit,
            bound: limit,
            holds: slack > 0.0,
            slack,
            warning: slack.abs() < BOUNDARY_WARNING_BAND,
        }
    }
}

/// Conservative analytic comparison: the left side must clear the right by
/// a small safety margin before an existence condition is accepted.
pub(crate) fn exceeds_with_margin(lhs: f64, rhs: f64) -> bool {
    lhs > rhs + 1e-9 * rhs.abs().max(1.0)
}

/// Two-sided check of the tangent-sum limits, plus whether T_m^2 < 1/2.
#[derive(Debug, Clone)]
pub struct TangentBoundsReport {
    pub value: TangentSumValue,
    pub lower: BoundReport,
    pub upper: BoundReport,
    pub t_squared: f64,
    pub t_squared_below_half: bool,
}

pub fn tangent_sum_bounds(m: u64) -> Result<TangentBoundsReport> {
    let value = compute_t(m)?;
    let lower = BoundReport::exceeds(BoundKind::TangentLower, m, value.t, tangent_lower_limit(m));
    let upper = BoundReport::below(BoundKind::TangentUpper, m, value.t, tangent_upper_limit(m));
    let t_squared = value.t * value.t;
    Ok(TangentBoundsReport {
        value,
        lower,
        upper,
        t_squared,
        t_squared_below_half: t_squared < 0.5,
    })
}

fn sqrt_log2(p: u64) -> f64 {
    let pf = p as f64;
    pf.sqrt() * pf.ln() * pf.ln()
}

/// Lehmer-count estimate: |M_p - (p-1)/2| < T_p^2 sqrt(p) log^2 p, or the
/// simplified all-p form with 1/2 in place of T_p^2.
pub fn lehmer_count_bound(ctx: &PrimeContext, m_count: u64, simplified: bool) -> BoundReport {
    let p = ctx.p();
    let (kind, tsq) = if simplified {
        (BoundKind::LehmerCountSimplified, 0.5)
    } else {
        (BoundKind::LehmerCount, t_squared(p))
    };
    BoundReport::band(
        kind,
        p,
        m_count as f64,
        (p - 1) as f64 / 2.0,
        tsq * sqrt_log2(p),
    )
}

fn efree_count_bound_impl(
    kind: BoundKind,
    ctx: &PrimeContext,
    e: u64,
    count: u64,
    tsq: f64,
) -> BoundReport {
    let p = ctx.p();
    let stats = Factorization::of(e).stats();
    let theta_e = stats.phi as f64 / e as f64;
    let w_e = stats.w as f64;
    BoundReport::band(
        kind,
        p,
        count as f64,
        theta_e * (p - 1) as f64 / 2.0,
        tsq * theta_e * w_e * sqrt_log2(p),
    )
}

/// e-free Lehmer count estimate for an even divisor e of p-1:
/// |N(e) - theta_e (p-1)/2| < T_p^2 theta_e W_e sqrt(p) log^2 p.
pub fn efree_lehmer_count_bound(ctx: &PrimeContext, e: u64, n_e: u64) -> Result<BoundReport> {
    let p = ctx.p();
    if e == 0 || (p - 1) % e != 0 {
        return Err(Error::NotDivisor {
            divisor: e,
            of: p - 1,
        });
    }
    if e % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "e-free count estimate needs an even e, got {e}"
        )));
    }
    Ok(efree_count_bound_impl(
        BoundKind::EfreeLehmerCount,
        ctx,
        e,
        n_e,
        t_squared(p),
    ))
}

/// LPR count estimate (the e = p-1 specialization):
/// |N_p - phi(p-1)/2| < T_p^2 theta W sqrt(p) log^2 p, simplified form with 1/2.
pub fn lpr_count_bound(ctx: &PrimeContext, n_count: u64, simplified: bool) -> BoundReport {
    let p = ctx.p();
    let (kind, tsq) = if simplified {
        (BoundKind::LprCountSimplified, 0.5)
    } else {
        (BoundKind::LprCount, t_squared(p))
    };
    efree_count_bound_impl(kind, ctx, p - 1, n_count, tsq)
}

/// Golomb-Lehmer pair estimate:
/// |G_p - theta^2 (p-2)/4| < (theta^2/4) T_p^2 [W^2 (9 log^2 p + 1) - 1] sqrt(p),
/// simplified form with T_p^2 replaced by 1/2.
pub fn golomb_pair_bound(ctx: &PrimeContext, pairs: u64, simplified: bool) -> BoundReport {
    let p = ctx.p();
    let stats = ctx.fact_p_minus_1().stats();
    let theta = stats.phi as f64 / (p - 1) as f64;
    let w = stats.w as f64;
    let (kind, tsq) = if simplified {
        (BoundKind::GolombPairCountSimplified, 0.5)
    } else {
        (BoundKind::GolombPairCount, t_squared(p))
    };
    let pf = p as f64;
    let bracket = w * w * (9.0 * pf.ln() * pf.ln() + 1.0) - 1.0;
    BoundReport::band(
        kind,
        p,
        pairs as f64,
        theta * theta * (pf - 2.0) / 4.0,
        theta * theta / 4.0 * tsq * bracket * pf.sqrt(),
    )
}

/// Right-hand side of the sharp existence condition, for a given T_p^2.
fn existence_rhs(p: u64, tsq: f64, w: f64) -> f64 {
    let pf = p as f64;
    2.0 * tsq * w * pf.ln() * pf.ln() + 1.0 / pf.sqrt()
}

/// Sharp existence condition: sqrt(p) > 2 T_p^2 W_{p-1} log^2 p + p^{-1/2}.
/// True implies an LPR exists mod p (p > 3).
///
/// T_p^2 is resolved lazily: the cheap proven limits decide all but a thin
/// boundary band, and the exact sum is only computed inside that band, which
/// gives verdicts identical to always using the exact value.
pub fn lpr_existence_condition(fact_p_minus_1: &Factorization) -> bool {
    let p = fact_p_minus_1.n() + 1;
    let w = (1u64 << fact_p_minus_1.omega()) as f64;
    let sqrt_p = (p as f64).sqrt();
    let upper = tangent_upper_limit(p);
    let mut ub2 = upper * upper;
    if p >= 1637 {
        ub2 = ub2.min(0.5);
    }
    if exceeds_with_margin(sqrt_p, existence_rhs(p, ub2, w)) {
        return true;
    }
    if p > T_COMPUTE_CAP {
        return false;
    }
    let lower = tangent_lower_limit(p);
    if !exceeds_with_margin(sqrt_p, existence_rhs(p, lower * lower, w)) {
        return false;
    }
    let t = compute_t(p).expect("p odd and under cap").t;
    exceeds_with_margin(sqrt_p, existence_rhs(p, t * t, w))
}

/// Simple existence condition: sqrt(p) > W_{p-1} log^2 p + p^{-1/2}.
/// True implies an LPR exists mod p, provided p > 7.
pub fn lpr_existence_simple_condition(fact_p_minus_1: &Factorization) -> bool {
    let p = fact_p_minus_1.n() + 1;
    let pf = p as f64;
    let w = (1u64 << fact_p_minus_1.omega()) as f64;
    exceeds_with_margin(pf.sqrt(), w * pf.ln() * pf.ln() + 1.0 / pf.sqrt())
}

/// Report form of the simple existence condition.
pub fn lpr_existence_simple_report(fact_p_minus_1: &Factorization) -> BoundReport {
    let p = fact_p_minus_1.n() + 1;
    let pf = p as f64;
    let w = (1u64 << fact_p_minus_1.omega()) as f64;
    BoundReport::exceeds(
        BoundKind::LprExistenceSimple,
        p,
        pf.sqrt(),
        w * pf.ln() * pf.ln() + 1.0 / pf.sqrt(),
    )
}

/// Report form of the sharp existence condition (exact T where computable).
pub fn lpr_existence_report(fact_p_minus_1: &Factorization) -> BoundReport {
    let p = fact_p_minus_1.n() + 1;
    let w = (1u64 << fact_p_minus_1.omega()) as f64;
    BoundReport::exceeds(
        BoundKind::LprExistence,
        p,
        (p as f64).sqrt(),
        existence_rhs(p, t_squared(p), w),
    )
}

/// Upper bound 1.4 log n / log log n for the number of distinct prime
/// factors of n, valid for n >= 3.
pub fn omega_upper_bound(n: u64) -> Result<f64> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "omega bound needs n >= 3, got {n}"
        )));
    }
    let nf = n as f64;
    Ok(1.4 * nf.ln() / nf.ln().ln())
}

/// Report form: omega(n) against its upper bound.
pub fn omega_upper_report(n: u64) -> Result<BoundReport> {
    let omega = Factorization::of(n).omega();
    let limit = omega_upper_bound(n)?;
    Ok(BoundReport::below(BoundKind::OmegaUpper, n, omega as f64, limit))
}

/// The constant 1 + log(2/pi), the effective lower-limit numerator.
pub fn lower_limit_constant() -> f64 {
    1.0 + (2.0 / PI).ln()
}
