//! Existence machinery for Lehmer primitive roots: the core/sieving-prime
//! decomposition of p-1, the sieved lower bound on the LPR count, analytic
//! existence conditions per core size, worst-case thresholds per omega(p-1),
//! the 210k+1 candidate enumeration, and an end-to-end certifier.

use num::{BigInt, BigRational, One, Signed, ToPrimitive};
use rayon::prelude::*;

use crate::arith::{is_prime, Factorization, PrimeContext};
use crate::bounds::{
    compute_t, exceeds_with_margin, lpr_existence_condition, lpr_existence_simple_condition,
    t_squared, tangent_lower_limit, tangent_upper_limit, T_COMPUTE_CAP,
};
use crate::lehmer::{find_first_lpr, LehmerProfile};
use crate::{Error, Result};

/// Default ceiling for the per-prime direct LPR search in certification.
pub const DEFAULT_DIRECT_SEARCH_CAP: u64 = 1_000_000_000;

/// Smallest p for which the simplified sieved condition (T^2 replaced by
/// 1/2) is proven.
pub const SIMPLIFIED_CONDITION_FLOOR: u64 = 1637;

const PRIME_LIST: [u64; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

/// Product of the first k primes; the smallest possible p-1 with
/// omega(p-1) = k.
pub fn primorial(k: u32) -> u64 {
    assert!(k as usize <= PRIME_LIST.len(), "primorial overflows u64");
    PRIME_LIST[..k as usize].iter().product()
}

fn big_ratio(num: i64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Decomposition of p-1 into an even core f (the r smallest distinct prime
/// factors) and the remaining sieving primes, with the exact sieve weight
/// delta = 1 - sum of reciprocals of the sieving primes.
#[derive(Debug, Clone, PartialEq)]
pub struct SieveParams {
    pub p: u64,
    pub f: u64,
    pub w_f: u64,
    pub sieving_primes: Vec<u64>,
    pub delta: BigRational,
}

impl SieveParams {
    pub fn s(&self) -> usize {
        self.sieving_primes.len()
    }

    pub fn delta_f64(&self) -> f64 {
        self.delta.to_f64().unwrap_or(f64::NAN)
    }
}

/// Split the distinct primes of p-1 into the r smallest (the core) and the
/// rest (the sieving primes). r must satisfy 1 <= r <= omega(p-1).
pub fn make_sieve_params(fact_p_minus_1: &Factorization, r: usize) -> Result<SieveParams> {
    let omega = fact_p_minus_1.omega() as usize;
    if r < 1 || r > omega {
        return Err(Error::InvalidArgument(format!(
            "core size r = {r} out of range 1..={omega}"
        )));
    }
    let primes: Vec<u64> = fact_p_minus_1.distinct_primes().collect();
    debug_assert_eq!(primes[0], 2, "p-1 is even for every odd prime p");
    let f: u64 = primes[..r].iter().product();
    let sieving_primes = primes[r..].to_vec();
    let mut delta = BigRational::one();
    for &q in &sieving_primes {
        delta -= big_ratio(1, q);
    }
    Ok(SieveParams {
        p: fact_p_minus_1.n() + 1,
        f,
        w_f: 1u64 << r,
        sieving_primes,
        delta,
    })
}

/// Exact right-hand side of the sieved lower bound:
/// N_p >= sum_i [N(p_i f) - theta_{p_i} N(f)] + delta N(f),
/// which telescopes to sum_i N(p_i f) - (s-1) N(f).
pub fn sieve_lower_bound(params: &SieveParams, profile: &LehmerProfile) -> Result<BigRational> {
    let n_f = profile.count_lehmer_efree(params.f)?;
    let n_f_big = BigRational::from_integer(BigInt::from(n_f));
    let mut acc = &params.delta * &n_f_big;
    for &q in &params.sieving_primes {
        let n_qf = profile.count_lehmer_efree(q * params.f)?;
        let theta_q = big_ratio((q - 1) as i64, q);
        acc += BigRational::from_integer(BigInt::from(n_qf)) - theta_q * &n_f_big;
    }
    Ok(acc)
}

/// The telescoped integer form sum_i N(p_i f) - (s-1) N(f).
pub fn sieve_lower_bound_basic(params: &SieveParams, profile: &LehmerProfile) -> Result<i64> {
    let n_f = profile.count_lehmer_efree(params.f)? as i64;
    let mut acc = -(params.s() as i64 - 1) * n_f;
    for &q in &params.sieving_primes {
        acc += profile.count_lehmer_efree(q * params.f)? as i64;
    }
    Ok(acc)
}

/// Bound on one sieve term:
/// |N(p_i f) - theta_{p_i} N(f)| < 2 (1 - 1/p_i) W_f T_p^2 sqrt(p) log^2 p.
pub fn sieve_term_bound(params: &SieveParams, p_i: u64) -> Result<f64> {
    if !params.sieving_primes.contains(&p_i) {
        return Err(Error::InvalidArgument(format!(
            "{p_i} is not a sieving prime of p = {}",
            params.p
        )));
    }
    let p = params.p as f64;
    Ok(2.0 * (1.0 - 1.0 / p_i as f64) * params.w_f as f64 * t_squared(params.p)
        * p.sqrt()
        * p.ln()
        * p.ln())
}

/// The two forms of the sieved existence condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SieveMode {
    /// sqrt(p) > 2 T_p^2 W_f ((s-1)/delta + 2) log^2 p + p^{-1/2}
    Exact,
    /// same with 2 T_p^2 replaced by 1; valid once p >= 1637
    Simplified,
}

/// Evaluate the sieved existence condition. True implies an LPR exists.
/// Requires delta > 0; the simplified mode additionally requires p >= 1637.
///
/// In exact mode T_p^2 is resolved lazily from its proven two-sided limits,
/// with the exact sum computed only when the limits straddle the boundary;
/// the verdict is identical to always using the exact value.
pub fn sieved_existence_condition(params: &SieveParams, mode: SieveMode) -> Result<bool> {
    if !params.delta.is_positive() {
        return Err(Error::NonPositiveDelta);
    }
    let p = params.p;
    let pf = p as f64;
    let sqrt_p = pf.sqrt();
    let s_term = (params.s() as f64 - 1.0) / params.delta_f64() + 2.0;
    let base = params.w_f as f64 * s_term * pf.ln() * pf.ln();
    match mode {
        SieveMode::Simplified => {
            if p < SIMPLIFIED_CONDITION_FLOOR {
                return Err(Error::InvalidArgument(format!(
                    "simplified condition needs p >= {SIMPLIFIED_CONDITION_FLOOR}, got {p}"
                )));
            }
            Ok(exceeds_with_margin(sqrt_p, base + 1.0 / sqrt_p))
        }
        SieveMode::Exact => {
            let rhs = |tsq: f64| 2.0 * tsq * base + 1.0 / sqrt_p;
            let upper = tangent_upper_limit(p);
            let mut ub2 = upper * upper;
            if p >= SIMPLIFIED_CONDITION_FLOOR {
                ub2 = ub2.min(0.5);
            }
            if exceeds_with_margin(sqrt_p, rhs(ub2)) {
                return Ok(true);
            }
            if p > T_COMPUTE_CAP {
                return Ok(false);
            }
            let lower = tangent_lower_limit(p);
            if !exceeds_with_margin(sqrt_p, rhs(lower * lower)) {
                return Ok(false);
            }
            let t = compute_t(p)?.t;
            Ok(exceeds_with_margin(sqrt_p, rhs(t * t)))
        }
    }
}

/// One row of the worst-case threshold analysis for a given omega(p-1):
/// the sieved (or unsieved) condition under the least favorable delta and
/// core, the p beyond which it provably holds, and how that compares with
/// the smallest p-1 possible at this omega.
#[derive(Debug, Clone)]
pub struct OmegaCase {
    pub omega: u32,
    pub s: usize,
    pub rule: &'static str,
    pub worst_case_delta: Option<BigRational>,
    /// solved crossover: the condition holds for every p above this
    pub threshold: f64,
    /// threshold rounded up to two significant figures, a clean search cap
    pub search_cap: f64,
    /// minimum possible p-1 at this omega
    pub primorial_floor: u64,
    /// true when the floor already exceeds the crossover, so no finite
    /// search is needed for this omega
    pub closed: bool,
}

impl OmegaCase {
    /// Residual search interval [primorial_floor + 1, search_cap] for rows
    /// that are not closed.
    pub fn residual_range(&self) -> Option<(u64, u64)> {
        if self.closed {
            None
        } else {
            Some((self.primorial_floor + 1, self.search_cap as u64))
        }
    }
}

fn ceil_two_significant(x: f64) -> f64 {
    let exp = x.log10().floor() as i32 - 1;
    let scale = 10f64.powi(exp);
    (x / scale).ceil() * scale
}

/// Largest p where sqrt(p) <= C log^2 p + p^{-1/2}; above it the condition
/// holds for good.
fn condition_crossover(gap: impl Fn(f64) -> f64) -> f64 {
    let mut hi = 1e16;
    debug_assert!(gap(hi) > 0.0);
    while gap(hi) > 0.0 && hi > 16.0 {
        hi /= 1.3;
    }
    let mut lo = hi;
    let mut hi = hi * 1.3;
    for _ in 0..200 {
        let mid = (lo + hi) / 2.0;
        if gap(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo + hi) / 2.0
}

fn sieved_gap(coefficient: f64) -> impl Fn(f64) -> f64 {
    move |p: f64| p.sqrt() - coefficient * p.ln() * p.ln() - 1.0 / p.sqrt()
}

/// Per-omega reduction of the existence question to finite ranges,
/// under the worst case (smallest possible sieving primes, hence smallest
/// delta, and the largest applicable W).
pub fn omega_threshold_table() -> Vec<OmegaCase> {
    let mut rows = Vec::new();

    // omega >= 13: the omega upper bound 1.4 log p / log log p caps W, and
    // the simple unsieved condition takes over; increasing in p from here.
    let robin_gap = |p: f64| {
        let w = 2f64.powf(1.4 * p.ln() / p.ln().ln());
        p.sqrt() - w * p.ln() * p.ln() - 1.0 / p.sqrt()
    };
    let threshold = condition_crossover(robin_gap);
    rows.push(OmegaCase {
        omega: 13,
        s: 0,
        rule: "omega >= 13: omega bound caps W in the simple condition",
        worst_case_delta: None,
        threshold,
        search_cap: ceil_two_significant(threshold),
        primorial_floor: primorial(13),
        closed: primorial(13) as f64 >= threshold,
    });

    for (omega, s) in [(12u32, 3usize), (11, 5), (10, 6), (9, 7), (8, 6), (7, 5)] {
        let r = omega as usize - s;
        let sieving = &PRIME_LIST[r..omega as usize];
        let mut delta = BigRational::one();
        for &q in sieving {
            delta -= big_ratio(1, q);
        }
        let w_f = (1u64 << r) as f64;
        let coefficient =
            w_f * ((s as f64 - 1.0) / delta.to_f64().unwrap_or(f64::NAN) + 2.0);
        let threshold = condition_crossover(sieved_gap(coefficient));
        rows.push(OmegaCase {
            omega,
            s,
            rule: "sieved condition, simplified form, worst-case delta",
            worst_case_delta: Some(delta),
            threshold,
            search_cap: ceil_two_significant(threshold),
            primorial_floor: primorial(omega),
            closed: primorial(omega) as f64 >= threshold,
        });
    }

    // omega <= 6: the unsieved simple condition with W <= 2^6.
    let threshold = condition_crossover(sieved_gap(64.0));
    rows.push(OmegaCase {
        omega: 6,
        s: 0,
        rule: "omega <= 6: simple condition with W <= 64",
        worst_case_delta: None,
        threshold,
        search_cap: ceil_two_significant(threshold),
        primorial_floor: primorial(6),
        closed: primorial(6) as f64 >= threshold,
    });

    rows
}

/// All primes n = 210k + 1 with 1 <= k <= k_max and omega(n-1) = 9,
/// ascending. This is the residual omega = 9 candidate list.
pub fn enumerate_omega9_candidates(k_max: u64) -> Vec<u64> {
    (1..=k_max)
        .into_par_iter()
        .filter_map(|k| {
            let n = 210 * k + 1;
            if !is_prime(n) {
                return None;
            }
            if Factorization::of(n - 1).omega() == 9 {
                Some(n)
            } else {
                None
            }
        })
        .collect()
}

/// A candidate from the omega = 9 enumeration together with its exact
/// sieve data at core size r = 2 and the simplified-condition verdict.
#[derive(Debug, Clone)]
pub struct Omega9Entry {
    pub p: u64,
    pub fact_p_minus_1: Factorization,
    pub params: SieveParams,
    pub simplified_holds: bool,
}

pub fn omega9_survey(k_max: u64) -> Result<Vec<Omega9Entry>> {
    enumerate_omega9_candidates(k_max)
        .into_iter()
        .map(|p| {
            let fact_p_minus_1 = Factorization::of(p - 1);
            let params = make_sieve_params(&fact_p_minus_1, 2)?;
            let simplified_holds = sieved_existence_condition(&params, SieveMode::Simplified)?;
            Ok(Omega9Entry {
                p,
                fact_p_minus_1,
                params,
                simplified_holds,
            })
        })
        .collect()
}

/// How a prime's certificate was decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// p in {2, 3, 7}: no LPR exists
    NoLpr,
    /// an unsieved analytic condition holds
    ExistsAnalyticUnsieved,
    /// the sieved condition holds for some core size
    ExistsAnalyticSieved,
    /// direct search produced a witness
    ExistsComputational,
    Undecided,
}

impl Verdict {
    pub fn exists(&self) -> bool {
        matches!(
            self,
            Verdict::ExistsAnalyticUnsieved
                | Verdict::ExistsAnalyticSieved
                | Verdict::ExistsComputational
        )
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::NoLpr => "NoLPR",
            Verdict::ExistsAnalyticUnsieved => "ExistsAnalyticUnsieved",
            Verdict::ExistsAnalyticSieved => "ExistsAnalyticSieved",
            Verdict::ExistsComputational => "ExistsComputational",
            Verdict::Undecided => "Undecided",
        })
    }
}

/// The decision-tree outcome for one prime: which rule fired, with the
/// sieve parameters for sieved verdicts and the witness for computational
/// ones.
#[derive(Debug, Clone)]
pub struct ExistenceCertificate {
    pub p: u64,
    pub verdict: Verdict,
    pub rule: String,
    pub params: Option<SieveParams>,
    pub witness: Option<u64>,
}

#[derive(Debug, Clone, Copy)]
pub struct CertifyOptions {
    pub direct_search_cap: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            direct_search_cap: DEFAULT_DIRECT_SEARCH_CAP,
        }
    }
}

pub fn certify_existence(p: u64) -> Result<ExistenceCertificate> {
    certify_existence_with(p, &CertifyOptions::default())
}

/// Decide existence of an LPR mod p: excluded primes first, then the
/// unsieved conditions, then the sieved condition over every core size
/// (exact form before simplified), then direct search below the cap.
pub fn certify_existence_with(p: u64, opts: &CertifyOptions) -> Result<ExistenceCertificate> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 || p == 3 || p == 7 {
        return Ok(ExistenceCertificate {
            p,
            verdict: Verdict::NoLpr,
            rule: "excluded prime: no LPR exists".into(),
            params: None,
            witness: None,
        });
    }
    let fact = Factorization::of(p - 1);
    if lpr_existence_condition(&fact) {
        return Ok(ExistenceCertificate {
            p,
            verdict: Verdict::ExistsAnalyticUnsieved,
            rule: "unsieved condition (sharp form)".into(),
            params: None,
            witness: None,
        });
    }
    if p > 7 && lpr_existence_simple_condition(&fact) {
        return Ok(ExistenceCertificate {
            p,
            verdict: Verdict::ExistsAnalyticUnsieved,
            rule: "unsieved condition (simple form)".into(),
            params: None,
            witness: None,
        });
    }
    for r in 1..=fact.omega() as usize {
        let params = make_sieve_params(&fact, r)?;
        if !params.delta.is_positive() {
            continue;
        }
        if sieved_existence_condition(&params, SieveMode::Exact)? {
            let rule = format!("sieved condition r={r} s={} (exact form)", params.s());
            return Ok(ExistenceCertificate {
                p,
                verdict: Verdict::ExistsAnalyticSieved,
                rule,
                params: Some(params),
                witness: None,
            });
        }
        if p >= SIMPLIFIED_CONDITION_FLOOR
            && sieved_existence_condition(&params, SieveMode::Simplified)?
        {
            let rule = format!("sieved condition r={r} s={} (simplified form)", params.s());
            return Ok(ExistenceCertificate {
                p,
                verdict: Verdict::ExistsAnalyticSieved,
                rule,
                params: Some(params),
                witness: None,
            });
        }
    }
    if p <= opts.direct_search_cap {
        let ctx = PrimeContext::new(p)?;
        return Ok(match find_first_lpr(&ctx) {
            Some(witness) => ExistenceCertificate {
                p,
                verdict: Verdict::ExistsComputational,
                rule: "direct search".into(),
                params: None,
                witness: Some(witness),
            },
            None => ExistenceCertificate {
                p,
                verdict: Verdict::Undecided,
                rule: "direct search exhausted without a witness".into(),
                params: None,
                witness: None,
            },
        });
    }
    Ok(ExistenceCertificate {
        p,
        verdict: Verdict::Undecided,
        rule: "no analytic condition applies and p exceeds the direct-search cap".into(),
        params: None,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_up_to;

    fn profile(p: u64) -> LehmerProfile {
        let ctx = PrimeContext::with_inverse_table(p, 1 << 24).unwrap();
        LehmerProfile::build(&ctx).unwrap()
    }

    #[test]
    fn primorials() {
        assert_eq!(primorial(4), 210);
        assert_eq!(primorial(9), 223_092_870);
        assert_eq!(primorial(12), 7_420_738_134_810);
        assert_eq!(primorial(13), 304_250_263_527_210);
    }

    #[test]
    fn params_for_211() {
        let fact = Factorization::of(210);
        let params = make_sieve_params(&fact, 2).unwrap();
        assert_eq!(params.p, 211);
        assert_eq!(params.f, 6);
        assert_eq!(params.w_f, 4);
        assert_eq!(params.sieving_primes, vec![5, 7]);
        assert_eq!(params.delta, big_ratio(23, 35));
        let full = make_sieve_params(&fact, 4).unwrap();
        assert_eq!(full.s(), 0);
        assert_eq!(full.delta, BigRational::one());
        assert!(make_sieve_params(&fact, 0).is_err());
        assert!(make_sieve_params(&fact, 5).is_err());
    }

    #[test]
    fn params_for_largest_enumerated_prime() {
        let fact = Factorization::of(1_295_163_870);
        let params = make_sieve_params(&fact, 2).unwrap();
        assert_eq!(params.s(), 7);
        assert_eq!(params.f, 6);
        assert_eq!(params.delta, big_ratio(84_246_566, 215_860_645));
        assert!((params.delta_f64() - 0.39028219340306336).abs() < 1e-12);
    }

    #[test]
    fn sieve_lower_bound_frozen_cases() {
        // p = 61, r = 2: the bound telescopes to N(30) = 12 = N_61
        let fact = Factorization::of(60);
        let params = make_sieve_params(&fact, 2).unwrap();
        let prof = profile(61);
        let exact = sieve_lower_bound(&params, &prof).unwrap();
        assert_eq!(exact, BigRational::from_integer(BigInt::from(12)));
        assert_eq!(sieve_lower_bound_basic(&params, &prof).unwrap(), 12);
        assert!(prof.count_lehmer_efree(60).unwrap() >= 12);

        // p = 211, r = 2: bound = N(30) + N(42) - N(6) = 20 = N_211
        let fact = Factorization::of(210);
        let params = make_sieve_params(&fact, 2).unwrap();
        let prof = profile(211);
        let exact = sieve_lower_bound(&params, &prof).unwrap();
        assert_eq!(exact, BigRational::from_integer(BigInt::from(20)));
        assert_eq!(sieve_lower_bound_basic(&params, &prof).unwrap(), 20);
        assert_eq!(prof.count_lehmer_efree(210).unwrap(), 20);
    }

    #[test]
    fn sieve_bound_forms_agree_and_hold() {
        for p in primes_up_to(2_000) {
            if p <= 3 {
                continue;
            }
            let fact = Factorization::of(p - 1);
            let prof = profile(p);
            let n_p = prof.count_lehmer_efree(p - 1).unwrap() as i64;
            for r in 1..=fact.omega() as usize {
                let params = make_sieve_params(&fact, r).unwrap();
                let exact = sieve_lower_bound(&params, &prof).unwrap();
                let basic = sieve_lower_bound_basic(&params, &prof).unwrap();
                assert_eq!(
                    exact,
                    BigRational::from_integer(BigInt::from(basic)),
                    "telescoping identity at p = {p}, r = {r}"
                );
                assert!(n_p >= basic, "lower bound violated at p = {p}, r = {r}");
            }
        }
    }

    #[test]
    fn sieve_term_bound_holds_small() {
        for p in primes_up_to(1_000) {
            if p <= 3 {
                continue;
            }
            let fact = Factorization::of(p - 1);
            let prof = profile(p);
            for r in 1..=fact.omega() as usize {
                let params = make_sieve_params(&fact, r).unwrap();
                let n_f = prof.count_lehmer_efree(params.f).unwrap() as f64;
                for &q in &params.sieving_primes {
                    let n_qf = prof.count_lehmer_efree(q * params.f).unwrap() as f64;
                    let diff = (n_qf - (1.0 - 1.0 / q as f64) * n_f).abs();
                    let bound = sieve_term_bound(&params, q).unwrap();
                    assert!(diff < bound, "p = {p}, r = {r}, q = {q}");
                }
            }
        }
    }

    #[test]
    fn sieved_condition_edge_cases() {
        let fact = Factorization::of(10);
        let params = make_sieve_params(&fact, 1).unwrap();
        // p = 11 is below the simplified floor
        assert!(sieved_existence_condition(&params, SieveMode::Simplified).is_err());
        assert_eq!(
            sieved_existence_condition(&params, SieveMode::Exact).unwrap(),
            false
        );
        // nonpositive delta is rejected
        let mut bad = params;
        bad.delta = big_ratio(-1, 10);
        assert!(matches!(
            sieved_existence_condition(&bad, SieveMode::Exact),
            Err(Error::NonPositiveDelta)
        ));
    }

    #[test]
    fn threshold_table_matches_independent_solve() {
        let table = omega_threshold_table();
        let row = |omega: u32| table.iter().find(|c| c.omega == omega).unwrap();

        let r13 = row(13);
        assert!((r13.threshold - 5.000892e13).abs() < 1e10);
        assert!(r13.closed);

        let r12 = row(12);
        assert_eq!(
            r12.worst_case_delta.clone().unwrap(),
            BigRational::one() - big_ratio(1, 29) - big_ratio(1, 31) - big_ratio(1, 37)
        );
        assert!((r12.threshold - 3.187539e12).abs() < 1e9);
        assert_eq!(r12.search_cap, 3.2e12);
        assert_eq!(r12.primorial_floor, 7_420_738_134_810);
        assert!(r12.closed);

        assert!((row(11).threshold - 8.349966e10).abs() < 1e8);
        assert!(row(11).closed);
        assert!((row(10).threshold - 6.355664e9).abs() < 1e7);
        assert!(row(10).closed);

        let r9 = row(9);
        assert!((r9.worst_case_delta.clone().unwrap().to_f64().unwrap() - 0.33437732).abs() < 1e-7);
        assert!((r9.threshold - 1.2193e9).abs() < 1e6);
        assert_eq!(r9.search_cap, 1.3e9);
        assert_eq!(r9.primorial_floor, 223_092_870);
        assert!(!r9.closed);
        assert_eq!(r9.residual_range(), Some((223_092_871, 1_300_000_000)));

        assert!((row(8).threshold - 6.245809e8).abs() < 1e5);
        assert_eq!(row(8).search_cap, 6.3e8);
        assert!(!row(8).closed);

        assert!((row(7).threshold - 2.951574e8).abs() < 1e5);
        assert!(!row(7).closed);

        let r6 = row(6);
        assert!((r6.threshold - 7.059119e8).abs() < 1e5);
        assert_eq!(r6.search_cap, 7.1e8);
        assert!(!r6.closed);
    }

    #[test]
    fn omega9_enumeration_is_empty_for_small_kmax() {
        // 210k with k <= 1000 has at most 6 distinct prime factors
        assert!(enumerate_omega9_candidates(1_000).is_empty());
    }

    #[test]
    fn certify_examples() {
        assert!(matches!(certify_existence(4), Err(Error::NotPrime(4))));
        for p in [2u64, 3, 7] {
            assert_eq!(certify_existence(p).unwrap().verdict, Verdict::NoLpr);
        }
        let c5 = certify_existence(5).unwrap();
        assert_eq!(c5.verdict, Verdict::ExistsComputational);
        assert_eq!(c5.witness, Some(2));
        let c11 = certify_existence(11).unwrap();
        assert_eq!(c11.verdict, Verdict::ExistsComputational);
        assert_eq!(c11.witness, Some(7));
        // 3 * 2^18 + 1: W(p-1) = 4 lets the unsieved condition fire
        let c = certify_existence(786_433).unwrap();
        assert_eq!(c.verdict, Verdict::ExistsAnalyticUnsieved);
        let ctx = PrimeContext::new(786_433).unwrap();
        assert!(find_first_lpr(&ctx).is_some());
    }

    #[test]
    fn certify_largest_enumerated_prime() {
        let c = certify_existence(1_295_163_871).unwrap();
        assert_eq!(c.verdict, Verdict::ExistsAnalyticSieved);
        let params = c.params.unwrap();
        assert_eq!(params.s(), 7);
        assert!((params.delta_f64() - 0.390282).abs() < 1e-6);
    }

    #[test]
    fn certify_witnesses_verify() {
        for p in primes_up_to(3_000) {
            if p == 2 {
                continue;
            }
            let cert = certify_existence(p).unwrap();
            match cert.verdict {
                Verdict::NoLpr => assert!(p == 3 || p == 7),
                Verdict::ExistsComputational => {
                    let w = cert.witness.unwrap();
                    let ctx = PrimeContext::new(p).unwrap();
                    assert!(ctx.is_primitive_root(w));
                    assert!(crate::lehmer::is_lehmer(w, &ctx));
                }
                Verdict::ExistsAnalyticUnsieved | Verdict::ExistsAnalyticSieved => {
                    let ctx = PrimeContext::new(p).unwrap();
                    assert!(find_first_lpr(&ctx).is_some(), "unsound at p = {p}");
                }
                Verdict::Undecided => panic!("undecided at p = {p}"),
            }
        }
    }
}
