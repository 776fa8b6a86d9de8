//! Exact arithmetic in cyclotomic fields ℚ(ζ_N), plus truncated jets.
//!
//! Elements are stored as polynomials in ℚ\[x\]/(Φ_N(x)) on the power basis
//! 1, ζ, …, ζ^{φ(N)-1}, reduced modulo the N-th cyclotomic polynomial
//! Φ_N rather than x^N - 1. That makes the representation canonical, so
//! the zero test is a plain vector comparison and "is this rational?" is
//! "are all non-constant coordinates zero?", both of which downstream
//! character code leans on hard.
//!
//! A [`Jet`] is a truncated power series in one formal parameter s with
//! cyclotomic coefficients. Jets realize limits of ratios of exponential
//! sums along a one-parameter deformation: each term ζ^e · exp(m·s) is
//! truncated at a fixed order, and the ratio of two such sums is read off
//! at the denominator's valuation.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

type Q = BigRational;

/// Euler totient, by trial-division factorization.
pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

/// Exact division of integer polynomials by a monic divisor (ascending coeffs).
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().map(|c| c.is_one()).unwrap_or(false), "divisor must be monic");
    let mut rem: Vec<BigInt> = num.to_vec();
    let dn = den.len() - 1;
    if rem.len() <= dn {
        assert!(rem.iter().all(|c| c.is_zero()));
        return vec![BigInt::zero()];
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dn];
    for i in (dn..rem.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        quot[i - dn] = c.clone();
        for (j, dc) in den.iter().enumerate() {
            let idx = i - dn + j;
            rem[idx] = &rem[idx] - &c * dc;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division must be exact");
    quot
}

/// Coefficients of the N-th cyclotomic polynomial Φ_N, ascending, memoized.
///
/// Computed as (x^N - 1) / ∏_{d|N, d<N} Φ_d.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<BigInt>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    assert!(n >= 1);
    let mut p: Vec<BigInt> = vec![BigInt::zero(); (n + 1) as usize];
    p[0] = BigInt::from(-1);
    p[n as usize] = BigInt::one();
    for d in divisors(n) {
        if d < n {
            let phi_d = cyclotomic_polynomial(d);
            p = int_poly_div_exact(&p, &phi_d);
        }
    }
    let arc = Arc::new(p);
    cache.lock().unwrap().insert(n, arc.clone());
    arc
}

fn phi_n_rational(n: u64) -> Vec<Q> {
    cyclotomic_polynomial(n).iter().map(|c| Q::from_integer(c.clone())).collect()
}

fn poly_trim(p: &mut Vec<Q>) {
    while p.len() > 1 && p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

/// Remainder of `p` modulo the monic polynomial `m`, ascending coefficients.
fn poly_rem(p: &[Q], m: &[Q]) -> Vec<Q> {
    let dm = m.len() - 1;
    let mut rem: Vec<Q> = p.to_vec();
    poly_trim(&mut rem);
    while rem.len() > dm {
        let lead = rem.last().unwrap().clone();
        let shift = rem.len() - 1 - dm;
        if !lead.is_zero() {
            for (j, mc) in m.iter().enumerate() {
                rem[shift + j] = &rem[shift + j] - &lead * mc;
            }
        }
        rem.pop();
        poly_trim(&mut rem);
    }
    rem
}

fn poly_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + ai * bj;
        }
    }
    out
}

/// An exact element of ℚ(ζ_N) on the power basis modulo Φ_N.
#[derive(Clone, PartialEq, Eq)]
pub struct Cyclotomic {
    n: u64,
    coeffs: Vec<Q>, // length φ(N)
}

impl Cyclotomic {
    fn from_poly(n: u64, poly: &[Q]) -> Self {
        let phi = phi_n_rational(n);
        let deg = phi.len() - 1;
        let mut r = poly_rem(poly, &phi);
        r.resize(deg, Q::zero());
        Cyclotomic { n, coeffs: r }
    }

    pub fn zero(n: u64) -> Self {
        Cyclotomic { n, coeffs: vec![Q::zero(); euler_phi(n) as usize] }
    }

    pub fn one(n: u64) -> Self {
        Self::from_rational(n, Q::one())
    }

    pub fn from_integer(n: u64, v: i64) -> Self {
        Self::from_rational(n, Q::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(n: u64, q: Q) -> Self {
        let mut z = Self::zero(n);
        z.coeffs[0] = q;
        z
    }

    /// ζ_N^e, canonically reduced. The exponent may be any integer.
    pub fn root(n: u64, e: i64) -> Self {
        let e = e.rem_euclid(n as i64) as usize;
        let mut poly = vec![Q::zero(); e + 1];
        poly[e] = Q::one();
        Self::from_poly(n, &poly)
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    fn assert_same_modulus(&self, other: &Self) {
        assert_eq!(self.n, other.n, "cyclotomic modulus mismatch; promote first");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_modulus(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Cyclotomic { n: self.n, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.assert_same_modulus(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Cyclotomic { n: self.n, coeffs }
    }

    pub fn neg(&self) -> Self {
        Cyclotomic { n: self.n, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_modulus(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.n);
        }
        Self::from_poly(self.n, &poly_mul(&self.coeffs, &other.coeffs))
    }

    pub fn scale(&self, q: &Q) -> Self {
        Cyclotomic { n: self.n, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Φ_N.
    ///
    /// Panics on zero; zero inputs indicate an upstream logic error because
    /// every division site checks for vanishing denominators first.
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero cyclotomic number");
        let phi = phi_n_rational(self.n);
        // Extended gcd of (self, Φ_N) in ℚ[x]: since Φ_N is irreducible and
        // self ≠ 0 has lower degree, the gcd is a nonzero constant.
        let mut r0: Vec<Q> = {
            let mut c = self.coeffs.clone();
            poly_trim(&mut c);
            c
        };
        let mut r1 = phi.clone();
        let mut s0 = vec![Q::one()];
        let mut s1 = vec![Q::zero()];
        while !(r1.len() == 1 && r1[0].is_zero()) {
            // divide r0 by r1: compute quotient q and remainder
            let (q, rem) = {
                let mut rem = r0.clone();
                poly_trim(&mut rem);
                let d1 = r1.len() - 1;
                let lead_inv = r1.last().unwrap().recip();
                let mut q = vec![Q::zero(); rem.len().saturating_sub(d1).max(1)];
                while rem.len() > d1 || (rem.len() == d1 + 1 && !rem.last().unwrap().is_zero()) {
                    if rem.len() < d1 + 1 {
                        break;
                    }
                    let c = rem.last().unwrap() * &lead_inv;
                    let shift = rem.len() - 1 - d1;
                    q[shift] = c.clone();
                    for (j, rc) in r1.iter().enumerate() {
                        rem[shift + j] = &rem[shift + j] - &c * rc;
                    }
                    poly_trim(&mut rem);
                    if rem.len() == 1 && rem[0].is_zero() {
                        break;
                    }
                }
                poly_trim(&mut rem);
                (q, rem)
            };
            let qs1 = poly_mul(&q, &s1);
            let mut s2 = s0.clone();
            s2.resize(s2.len().max(qs1.len()), Q::zero());
            for (i, v) in qs1.iter().enumerate() {
                s2[i] = &s2[i] - v;
            }
            poly_trim(&mut s2);
            s0 = s1;
            s1 = s2;
            r0 = r1;
            r1 = rem;
        }
        // r0 = gcd constant g with s·self ≡ g (mod Φ): inverse = s/g.
        assert_eq!(r0.len(), 1, "gcd with irreducible Φ_N must be a unit");
        let g_inv = r0[0].recip();
        let inv_poly: Vec<Q> = s0.iter().map(|c| c * &g_inv).collect();
        let out = Self::from_poly(self.n, &inv_poly);
        debug_assert!(out.mul(self).is_one());
        out
    }

    /// The rational value, if the element lies in ℚ ⊂ ℚ(ζ_N).
    pub fn to_rational(&self) -> Result<Q> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Ok(self.coeffs[0].clone())
        } else {
            Err(Error::NonRational)
        }
    }

    /// The integer value of a Galois-fixed algebraic integer.
    pub fn to_rational_integer(&self) -> Result<BigInt> {
        let q = self.to_rational()?;
        if q.is_integer() {
            Ok(q.to_integer())
        } else {
            Err(Error::NonIntegral(q.to_string()))
        }
    }

    /// Galois automorphism σ_a: ζ ↦ ζ^a, for gcd(a, N) = 1.
    pub fn galois(&self, a: u64) -> Self {
        assert_eq!(num_integer::gcd(a, self.n), 1, "σ_a needs gcd(a, N) = 1");
        let mut acc = Self::zero(self.n);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = Self::root(self.n, (a as i64) * (i as i64)).scale(c);
            acc = acc.add(&term);
        }
        acc
    }

    /// Embed into ℚ(ζ_M) for N | M via ζ_N ↦ ζ_M^{M/N}.
    pub fn promote(&self, m: u64) -> Result<Self> {
        if !m.is_multiple_of(self.n) {
            return Err(Error::ModulusMismatch(self.n, m));
        }
        let step = (m / self.n) as i64;
        let mut acc = Self::zero(m);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&Self::root(m, step * i as i64).scale(c));
        }
        Ok(acc)
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyc(ζ{}; {:?})", self.n, self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>())
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "({c})ζ{}^{}", self.n, i)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Default truncation order for jets. The Weyl denominator for G2 vanishes
/// to order at most 6 (the number of positive roots), so 8 leaves margin.
pub const JET_ORDER: usize = 8;

/// Truncated power series Σ c_j s^j with cyclotomic coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    coeffs: Vec<Cyclotomic>, // length order + 1
}

impl Jet {
    pub fn zero(n: u64, order: usize) -> Self {
        Jet { coeffs: vec![Cyclotomic::zero(n); order + 1] }
    }

    /// The jet of `base · exp(slope · s)` truncated at `order`.
    pub fn exp_term(base: &Cyclotomic, slope: i64, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut factor = Q::one(); // slope^j / j!
        for j in 0..=order {
            if j > 0 {
                factor *= Q::new(BigInt::from(slope), BigInt::from(j as i64));
            }
            coeffs.push(base.scale(&factor));
        }
        Jet { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, j: usize) -> &Cyclotomic {
        &self.coeffs[j]
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.coeffs.len(), other.coeffs.len());
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect();
        Jet { coeffs }
    }

    pub fn neg(&self) -> Self {
        Jet { coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    /// Truncated product: coefficients beyond the common order are dropped.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.coeffs.len(), other.coeffs.len());
        let n = self.coeffs[0].modulus();
        let order = self.order();
        let mut out = Jet::zero(n, order);
        for i in 0..=order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(order - i) {
                out.coeffs[i + j] = out.coeffs[i + j].add(&self.coeffs[i].mul(&other.coeffs[j]));
            }
        }
        out
    }

    /// Index of the first nonzero coefficient, or None for the zero jet.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }
}

/// The limit as s → 0 of num(s)/den(s), read off at the denominator's
/// valuation v: all numerator coefficients below v must vanish, and the
/// value is num\[v\]/den\[v\].
pub fn jet_ratio_limit(num: &Jet, den: &Jet) -> Result<Cyclotomic> {
    let v = den.valuation().ok_or(Error::TruncationTooShort { order: den.order() })?;
    if let Some(nv) = num.valuation() {
        if nv < v {
            return Err(Error::OrderMismatch { num: nv, den: v });
        }
    }
    Ok(num.coeff(v).mul(&den.coeff(v).inv()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn cyclotomic_polynomials_small() {
        let as_i64 = |v: Arc<Vec<BigInt>>| -> Vec<i64> {
            v.iter().map(|c| i64::try_from(c).unwrap()).collect()
        };
        assert_eq!(as_i64(cyclotomic_polynomial(1)), vec![-1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(2)), vec![1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(3)), vec![1, 1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(4)), vec![1, 0, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(6)), vec![1, -1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(12)), vec![1, 0, -1, 0, 1]);
        // φ agrees with the degree.
        for n in 1..=48 {
            assert_eq!(cyclotomic_polynomial(n).len() as u64 - 1, euler_phi(n), "n = {n}");
        }
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(Cyclotomic::root(4, 2), Cyclotomic::from_integer(4, -1));
        assert_eq!(Cyclotomic::root(7, 0), Cyclotomic::one(7));
        // ζ6 + ζ6⁻¹ = 1
        let s = Cyclotomic::root(6, 1).add(&Cyclotomic::root(6, 5));
        assert_eq!(s.to_rational_integer().unwrap(), BigInt::from(1));
        // exponent arithmetic wraps
        assert_eq!(Cyclotomic::root(5, 7), Cyclotomic::root(5, 2));
        assert_eq!(Cyclotomic::root(5, -1), Cyclotomic::root(5, 4));
    }

    #[test]
    fn root_multiplicativity() {
        for n in [1u64, 2, 3, 4, 6, 8, 12, 14, 24] {
            for e in 0..n as i64 {
                for f in [0, 1, 3, (n as i64) - 1] {
                    let lhs = Cyclotomic::root(n, e).mul(&Cyclotomic::root(n, f));
                    assert_eq!(lhs, Cyclotomic::root(n, e + f), "n={n} e={e} f={f}");
                }
            }
        }
    }

    #[test]
    fn rational_reduction() {
        // 1 + ζ3 + ζ3² = 0
        let v = Cyclotomic::one(3)
            .add(&Cyclotomic::root(3, 1))
            .add(&Cyclotomic::root(3, 2));
        assert!(v.is_zero());
        assert_eq!(v.to_rational_integer().unwrap(), BigInt::zero());
        // ζ5 is not rational
        assert_eq!(Cyclotomic::root(5, 1).to_rational(), Err(Error::NonRational));
        assert_eq!(
            Cyclotomic::from_integer(12, 7).to_rational_integer().unwrap(),
            BigInt::from(7)
        );
        // 1/2 is rational but not integral
        let half = Cyclotomic::from_rational(8, q(1, 2));
        assert!(matches!(half.to_rational_integer(), Err(Error::NonIntegral(_))));
    }

    #[test]
    fn field_axioms_on_samples() {
        for n in [3u64, 8, 12] {
            let samples = [
                Cyclotomic::root(n, 1),
                Cyclotomic::root(n, 1).add(&Cyclotomic::from_integer(n, 2)),
                Cyclotomic::root(n, 2).sub(&Cyclotomic::root(n, 1).scale(&q(3, 5))),
                Cyclotomic::from_rational(n, q(-7, 3)),
            ];
            for x in &samples {
                for y in &samples {
                    assert_eq!(x.mul(y), y.mul(x));
                    for z in &samples {
                        assert_eq!(x.mul(&y.mul(z)), x.mul(y).mul(z));
                        assert_eq!(x.mul(&y.add(z)), x.mul(y).add(&x.mul(z)));
                    }
                }
                if !x.is_zero() {
                    assert!(x.mul(&x.inv()).is_one(), "x · x⁻¹ = 1 for {x}");
                }
            }
        }
    }

    #[test]
    fn galois_fixed_iff_rational() {
        // ζ8 + ζ8⁻¹ = √2 is fixed by σ_7 but not σ_3.
        let sqrt2 = Cyclotomic::root(8, 1).add(&Cyclotomic::root(8, 7));
        assert_eq!(sqrt2.galois(7), sqrt2);
        assert_ne!(sqrt2.galois(3), sqrt2);
        assert!(sqrt2.to_rational().is_err());
        // A full Galois-orbit sum is rational.
        let mut tr = Cyclotomic::zero(8);
        for a in [1u64, 3, 5, 7] {
            tr = tr.add(&Cyclotomic::root(8, 1).galois(a));
        }
        assert_eq!(tr.to_rational_integer().unwrap(), BigInt::zero());
    }

    #[test]
    fn promotion_is_compatible() {
        // ζ6 ↦ ζ12² and arithmetic commutes with promotion.
        let a = Cyclotomic::root(6, 1);
        let b = Cyclotomic::root(6, 4).add(&Cyclotomic::from_integer(6, 3));
        assert_eq!(a.promote(12).unwrap(), Cyclotomic::root(12, 2));
        assert_eq!(
            a.mul(&b).promote(12).unwrap(),
            a.promote(12).unwrap().mul(&b.promote(12).unwrap())
        );
        assert_eq!(
            a.add(&b).promote(12).unwrap(),
            a.promote(12).unwrap().add(&b.promote(12).unwrap())
        );
        assert!(a.promote(9).is_err());
    }

    #[test]
    fn jet_exp_and_valuation() {
        let one = Cyclotomic::one(4);
        let j = Jet::exp_term(&one, 3, 4);
        assert_eq!(j.coeff(0), &one);
        assert_eq!(j.coeff(1), &one.scale(&q(3, 1)));
        assert_eq!(j.coeff(2), &one.scale(&q(9, 2)));
        assert_eq!(j.coeff(3), &one.scale(&q(27, 6)));
        assert_eq!(j.valuation(), Some(0));
        assert_eq!(Jet::zero(4, 4).valuation(), None);
        // exp(a s)·exp(b s) = exp((a+b) s) up to truncation
        let k = Jet::exp_term(&one, -1, 4);
        assert_eq!(j.mul(&k), Jet::exp_term(&one, 2, 4));
    }

    #[test]
    fn jet_ratio_limits() {
        let n = 4u64;
        let one = Cyclotomic::one(n);
        // s²/s² → 1
        let mut s2 = Jet::zero(n, 4);
        s2.coeffs[2] = one.clone();
        assert!(jet_ratio_limit(&s2, &s2).unwrap().is_one());
        // 2s³/s² → 0 (valuation 3 > 2, coefficient at 2 vanishes)
        let mut s3 = Jet::zero(n, 4);
        s3.coeffs[3] = one.scale(&q(2, 1));
        assert!(jet_ratio_limit(&s3, &s2).unwrap().is_zero());
        // s/s² is a genuine order mismatch
        let mut s1 = Jet::zero(n, 4);
        s1.coeffs[1] = one.clone();
        assert_eq!(
            jet_ratio_limit(&s1, &s2),
            Err(Error::OrderMismatch { num: 1, den: 2 })
        );
        // zero denominator to truncation order
        assert_eq!(
            jet_ratio_limit(&s2, &Jet::zero(n, 4)),
            Err(Error::TruncationTooShort { order: 4 })
        );
    }
}
