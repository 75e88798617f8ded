//! Exact counting of Lehmer numbers, e-free Lehmer numbers, Lehmer primitive
//! roots (LPRs) and Golomb-Lehmer pairs by direct enumeration.
//!
//! A Lehmer number mod p is an a in [1, p-1] whose inverse in the same range
//! has opposite parity. Counting here is ground truth: it never goes through
//! the character-sum machinery that the `bounds` module checks against it.

use crate::arith::{mod_mul, mod_pow, PrimeContext};
use crate::{Error, Result};

/// Per-prime census: the Lehmer count M, the LPR count N, the signed parity
/// sum E = sum over a of (-1)^(a + inverse(a)), and the smallest LPR.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LehmerCounts {
    pub p: u64,
    pub m: u64,
    pub n: u64,
    pub e: i64,
    pub first_lpr: Option<u64>,
}

impl LehmerCounts {
    /// Single O(p) pass over the residues; the context must carry an
    /// inverse table.
    pub fn compute(ctx: &PrimeContext) -> Result<LehmerCounts> {
        let profile = LehmerProfile::build(ctx)?;
        let (m, e) = profile.count_lehmer();
        Ok(LehmerCounts {
            p: ctx.p(),
            m,
            n: profile.count_lpr(),
            e,
            first_lpr: profile.first_lpr(),
        })
    }
}

/// True iff a + inverse(a) is odd.
pub fn is_lehmer(a: u64, ctx: &PrimeContext) -> bool {
    debug_assert!(a >= 1 && a < ctx.p());
    (a + ctx.inverse(a)) % 2 == 1
}

/// Per-residue flags for one prime: Lehmer parity plus, for each prime l
/// dividing p-1, whether the residue is an l-th power. Built once in O(p),
/// it answers every e-free counting query in a single pass.
#[derive(Debug, Clone)]
pub struct LehmerProfile {
    p: u64,
    primes: Vec<u64>,
    flags: Vec<u16>,
    full_mask: u16,
}

const LEHMER_BIT: u16 = 1 << 15;

impl LehmerProfile {
    pub fn build(ctx: &PrimeContext) -> Result<LehmerProfile> {
        let table = ctx.inverse_table().ok_or(Error::InverseTableMissing)?;
        let p = ctx.p();
        let primes: Vec<u64> = ctx.fact_p_minus_1().distinct_primes().collect();
        debug_assert!(primes.len() < 15);
        let mut flags = vec![0u16; p as usize];
        for a in 1..p as usize {
            if (a as u64 + u64::from(table[a])) % 2 == 1 {
                flags[a] |= LEHMER_BIT;
            }
        }
        // The l-th power residues form the subgroup generated by g^l, of
        // order (p-1)/l; walking it marks them all in O(p/l).
        for (i, &l) in primes.iter().enumerate() {
            let h = mod_pow(ctx.g(), l, p);
            let bit = 1u16 << i;
            let mut x = 1u64;
            for _ in 0..(p - 1) / l {
                flags[x as usize] |= bit;
                x = mod_mul(x, h, p);
            }
        }
        let full_mask = (1u16 << primes.len()) - 1;
        Ok(LehmerProfile {
            p,
            primes,
            flags,
            full_mask,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    fn prime_mask(&self, e: u64) -> Result<u16> {
        if e == 0 || (self.p - 1) % e != 0 {
            return Err(Error::NotDivisor {
                divisor: e,
                of: self.p - 1,
            });
        }
        let mut mask = 0u16;
        for (i, &l) in self.primes.iter().enumerate() {
            if e % l == 0 {
                mask |= 1 << i;
            }
        }
        Ok(mask)
    }

    pub fn is_lehmer(&self, a: u64) -> bool {
        self.flags[a as usize] & LEHMER_BIT != 0
    }

    pub fn is_e_free(&self, a: u64, e: u64) -> Result<bool> {
        Ok(self.flags[a as usize] & self.prime_mask(e)? == 0)
    }

    pub fn is_lpr(&self, a: u64) -> bool {
        self.flags[a as usize] & (LEHMER_BIT | self.full_mask) == LEHMER_BIT
    }

    /// (M, E): Lehmer count and the signed parity sum, related by
    /// M = (p-1)/2 - E/2.
    pub fn count_lehmer(&self) -> (u64, i64) {
        let m = self.flags[1..]
            .iter()
            .filter(|&&f| f & LEHMER_BIT != 0)
            .count() as u64;
        let e = (self.p - 1) as i64 - 2 * m as i64;
        (m, e)
    }

    /// Number of e-free residues (no Lehmer condition).
    pub fn count_efree(&self, e: u64) -> Result<u64> {
        let mask = self.prime_mask(e)?;
        Ok(self.flags[1..].iter().filter(|&&f| f & mask == 0).count() as u64)
    }

    /// N(e): Lehmer numbers that are also e-free.
    pub fn count_lehmer_efree(&self, e: u64) -> Result<u64> {
        let mask = self.prime_mask(e)? | LEHMER_BIT;
        Ok(self.flags[1..]
            .iter()
            .filter(|&&f| f & mask == LEHMER_BIT)
            .count() as u64)
    }

    /// N(p-1): the LPR count.
    pub fn count_lpr(&self) -> u64 {
        let want = LEHMER_BIT;
        let mask = self.full_mask | LEHMER_BIT;
        self.flags[1..].iter().filter(|&&f| f & mask == want).count() as u64
    }

    pub fn first_lpr(&self) -> Option<u64> {
        (2..self.p).find(|&a| self.is_lpr(a))
    }

    /// Ordered pairs (a, p+1-a) of LPRs summing to 1 mod p, a in [2, p-1];
    /// the diagonal a = (p+1)/2 contributes once.
    pub fn count_golomb_pairs(&self) -> u64 {
        (2..self.p)
            .filter(|&a| self.is_lpr(a) && self.is_lpr(self.p + 1 - a))
            .count() as u64
    }
}

/// N(e): Lehmer numbers that are also e-free, for an even divisor e of p-1.
pub fn count_lehmer_efree(ctx: &PrimeContext, e: u64) -> Result<u64> {
    LehmerProfile::build(ctx)?.count_lehmer_efree(e)
}

/// Ordered Golomb-Lehmer pair count G_p.
pub fn count_golomb_lehmer_pairs(ctx: &PrimeContext) -> Result<u64> {
    Ok(LehmerProfile::build(ctx)?.count_golomb_pairs())
}

/// Smallest a in [2, p-1] that is both a primitive root and a Lehmer number,
/// scanning candidates in increasing order. Needs no inverse table, so it
/// works for primes far beyond the counting caps.
pub fn find_first_lpr(ctx: &PrimeContext) -> Option<u64> {
    let p = ctx.p();
    (2..p).find(|&a| ctx.is_primitive_root(a) && is_lehmer(a, ctx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{is_e_free, primes_up_to, Factorization};

    fn ctx(p: u64) -> PrimeContext {
        PrimeContext::with_inverse_table(p, 1 << 24).unwrap()
    }

    // enumeration oracle for p <= 50, computed independently
    const SMALL_TABLE: &[(u64, u64, i64, u64, Option<u64>, u64)] = &[
        // (p, M, E, N, first_lpr, G)
        (3, 0, 2, 0, None, 0),
        (5, 2, 0, 2, Some(2), 1),
        (7, 0, 6, 0, None, 0),
        (11, 4, 2, 2, Some(7), 0),
        (13, 6, 0, 4, Some(2), 1),
        (17, 10, -4, 4, Some(3), 0),
        (19, 4, 10, 2, Some(14), 0),
        (23, 12, -2, 6, Some(5), 2),
        (29, 18, -8, 12, Some(2), 5),
        (31, 4, 22, 2, Some(12), 0),
        (37, 14, 8, 8, Some(2), 3),
        (41, 18, 4, 4, Some(6), 2),
        (43, 20, 2, 6, Some(5), 0),
        (47, 16, 14, 8, Some(10), 2),
    ];

    #[test]
    fn census_matches_frozen_table() {
        for &(p, m, e, n, first, g) in SMALL_TABLE {
            let c = LehmerCounts::compute(&ctx(p)).unwrap();
            assert_eq!((c.m, c.e, c.n, c.first_lpr), (m, e, n, first), "p = {p}");
            let pairs = count_golomb_lehmer_pairs(&ctx(p)).unwrap();
            assert_eq!(pairs, g, "G_{p}");
        }
    }

    #[test]
    fn is_lehmer_examples() {
        let c5 = ctx(5);
        assert!(is_lehmer(2, &c5));
        assert!(!is_lehmer(1, &c5));
        assert!(!is_lehmer(4, &c5)); // p-1 is self-inverse
    }

    #[test]
    fn efree_lehmer_examples() {
        assert_eq!(count_lehmer_efree(&ctx(5), 4), Ok(2));
        assert_eq!(count_lehmer_efree(&ctx(7), 6), Ok(0));
        assert_eq!(count_lehmer_efree(&ctx(11), 10), Ok(2));
        assert_eq!(count_lehmer_efree(&ctx(13), 2), Ok(6));
        assert_eq!(count_lehmer_efree(&ctx(13), 6), Ok(4));
        assert_eq!(count_lehmer_efree(&ctx(61), 6), Ok(16));
        assert_eq!(count_lehmer_efree(&ctx(61), 30), Ok(12));
        assert_eq!(count_lehmer_efree(&ctx(61), 60), Ok(12));
        assert!(count_lehmer_efree(&ctx(13), 5).is_err());
    }

    #[test]
    fn find_first_lpr_examples() {
        assert_eq!(find_first_lpr(&PrimeContext::new(5).unwrap()), Some(2));
        assert_eq!(find_first_lpr(&PrimeContext::new(7).unwrap()), None);
        assert_eq!(find_first_lpr(&PrimeContext::new(11).unwrap()), Some(7));
    }

    #[test]
    fn profile_agrees_with_definitional_routes() {
        for p in primes_up_to(300) {
            if p == 2 {
                continue;
            }
            let c = ctx(p);
            let profile = LehmerProfile::build(&c).unwrap();
            for a in 1..p {
                assert_eq!(profile.is_lehmer(a), is_lehmer(a, &c));
                for e in Factorization::of(p - 1).divisors() {
                    if e == 0 {
                        continue;
                    }
                    assert_eq!(
                        profile.is_e_free(a, e).unwrap(),
                        is_e_free(a, e, &c).unwrap(),
                        "p = {p}, a = {a}, e = {e}"
                    );
                }
            }
        }
    }

    #[test]
    fn inverse_symmetry_and_identity() {
        for p in primes_up_to(2_000) {
            if p == 2 {
                continue;
            }
            let c = ctx(p);
            for a in 1..p {
                assert_eq!(is_lehmer(a, &c), is_lehmer(c.inverse(a), &c), "p = {p}");
            }
            let counts = LehmerCounts::compute(&c).unwrap();
            // M = (p-1)/2 - E/2, exactly
            assert_eq!(2 * counts.m as i64 + counts.e, (p - 1) as i64);
            assert!(counts.n <= counts.m && counts.m <= p - 1);
            assert!(counts.n <= Factorization::of(p - 1).stats().phi);
        }
    }

    #[test]
    fn efree_count_monotone_under_divisibility() {
        for p in primes_up_to(500) {
            if p == 2 {
                continue;
            }
            let profile = LehmerProfile::build(&ctx(p)).unwrap();
            let divisors = Factorization::of(p - 1).divisors();
            for &e in &divisors {
                for &e2 in &divisors {
                    if e2 % e == 0 {
                        assert!(
                            profile.count_lehmer_efree(e2).unwrap()
                                <= profile.count_lehmer_efree(e).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn golomb_symmetry() {
        for p in primes_up_to(500) {
            if p == 2 {
                continue;
            }
            let profile = LehmerProfile::build(&ctx(p)).unwrap();
            for a in 2..p {
                let b = p + 1 - a;
                let counted = profile.is_lpr(a) && profile.is_lpr(b);
                let mirrored = profile.is_lpr(b) && profile.is_lpr(p + 1 - b);
                assert_eq!(counted, mirrored);
            }
        }
    }

    #[test]
    fn first_lpr_matches_profile_scan() {
        for p in primes_up_to(1_000) {
            if p == 2 {
                continue;
            }
            let c = ctx(p);
            let profile = LehmerProfile::build(&c).unwrap();
            assert_eq!(profile.first_lpr(), find_first_lpr(&c), "p = {p}");
        }
    }
}
