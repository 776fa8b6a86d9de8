//! Characters of irreducible G2 representations, evaluated exactly.
//!
//! A torsion point t of the compact maximal torus is stored as an order N
//! together with residues (c, d) mod 2N; the weight μ = aε1 + bε2 takes
//! the value μ(t) = ζ_{2N}^{ac+bd}. Working with ζ_{2N} exponents clears
//! the 1/2 in the pairing so every exponent stays integral.
//!
//! χ_λ(t) is the Weyl character formula
//!
//! ```text
//! χ_λ(t) = Σ_w sign(w) (w(λ+ρ))(t)  /  Σ_w sign(w) (w(ρ))(t)
//! ```
//!
//! when the denominator is nonzero. At irregular t both sums vanish and
//! the value is recovered as a limit along a one-parameter deformation
//! t·exp(s·v) for a regular cocharacter direction v: each term becomes a
//! truncated jet with slope ⟨w(μ), v⟩ and the ratio is read off at the
//! denominator's valuation. The default direction is ρ∨, which is regular,
//! so the denominator jet is nonzero at order ≤ 6.
//!
//! [`freudenthal_multiplicities`] is an independent oracle: it builds the
//! full weight-multiplicity table by the Freudenthal recursion, so the two
//! evaluation routes (alternating-sum ratio vs. plain weight sum) can be
//! compared exactly.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{jet_ratio_limit, Cyclotomic, Jet, JET_ORDER};
use crate::error::{Error, Result};
use crate::rootlattice::{
    is_dominant_g2, pairing, Coweight, Weight, WeylGroup, POSITIVE_ROOTS,
};

/// A point of finite order on the compact maximal torus.
///
/// Invariants: 0 ≤ c, d < 2N with c + d even (needed for μ(t) to be
/// well defined on the parity lattice), normalized under the residual
/// identification (c, d) ~ (c + N, d + N).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusElement {
    n: u64,
    c: i64,
    d: i64,
}

/// Serialized shape: {"N": ..., "c": ..., "d": ...}.
#[derive(Serialize, Deserialize)]
struct TorusElementRepr {
    #[serde(rename = "N")]
    n: u64,
    c: i64,
    d: i64,
}

impl Serialize for TorusElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TorusElementRepr { n: self.n, c: self.c, d: self.d }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TorusElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = TorusElementRepr::deserialize(d)?;
        if (r.c + r.d) % 2 != 0 {
            return Err(serde::de::Error::custom("torus element needs c + d even"));
        }
        Ok(TorusElement::new(r.n, r.c, r.d))
    }
}

impl TorusElement {
    /// Build from an order and residues; residues are reduced mod 2N and
    /// the (c, d) ~ (c+N, d+N) ambiguity is resolved by preferring the
    /// representative with both residues even (it exists whenever N is
    /// odd), then the lexicographic minimum. Panics unless c + d is even.
    pub fn new(n: u64, c: i64, d: i64) -> Self {
        assert!(n >= 1);
        assert!((c + d) % 2 == 0, "torus element needs c + d even");
        let m = 2 * n as i64;
        let a = (c.rem_euclid(m), d.rem_euclid(m));
        let b = ((a.0 + n as i64) % m, (a.1 + n as i64) % m);
        let rank = |p: (i64, i64)| (p.0 % 2 != 0 || p.1 % 2 != 0, p);
        let (c, d) = if rank(a) <= rank(b) { a } else { b };
        TorusElement { n, c, d }
    }

    pub fn identity() -> Self {
        TorusElement { n: 1, c: 0, d: 0 }
    }

    pub fn declared_order(&self) -> u64 {
        self.n
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// The ζ_{2N} exponent of μ(t).
    pub fn exponent(&self, mu: &Weight) -> i64 {
        (mu.a() * self.c + mu.b() * self.d).rem_euclid(2 * self.n as i64)
    }

    /// μ(t) as an exact cyclotomic number.
    pub fn eval_weight(&self, mu: &Weight) -> Cyclotomic {
        Cyclotomic::root(2 * self.n, self.exponent(mu))
    }

    /// t^m, keeping the declared modulus.
    pub fn power(&self, m: i64) -> Self {
        TorusElement::new(self.n, self.c * m, self.d * m)
    }

    /// Exact multiplicative order.
    pub fn multiplicative_order(&self) -> u64 {
        let two_n = 2 * self.n;
        let m1 = self.n / num_integer::gcd(self.n, self.c.unsigned_abs());
        let m2 = two_n / num_integer::gcd(two_n, (self.c + self.d).unsigned_abs());
        num_integer::lcm(m1, m2).max(1)
    }

    /// The same torus point with the declared order reduced to the exact
    /// multiplicative order m: residues become (mc/N, md/N) mod 2m.
    pub fn reduced(&self) -> Self {
        let m = self.multiplicative_order();
        if m == self.n {
            return *self;
        }
        let (m, n) = (m as i64, self.n as i64);
        debug_assert!((self.c * m) % n == 0 && (self.d * m) % n == 0);
        TorusElement::new(m as u64, self.c * m / n, self.d * m / n)
    }

    /// Image under a Weyl element, acting through the cocharacter side.
    pub fn weyl_image(&self, w: &crate::rootlattice::WeylElement) -> Self {
        // (c, d) transforms like a coweight; c + d stays even.
        let cw = w.act_coweight(&Coweight::new(self.c, self.d));
        TorusElement::new(self.n, cw.c(), cw.d())
    }

    /// True iff no root evaluates to 1, i.e. t is G2-regular.
    pub fn is_g2_regular(&self) -> bool {
        POSITIVE_ROOTS.iter().all(|(root, _)| self.exponent(root) != 0)
    }

    /// All parameter pairs in the Weyl orbit of this point, normalized.
    pub fn weyl_orbit(&self) -> Vec<TorusElement> {
        let mut out: Vec<TorusElement> =
            WeylGroup::g2().elements().iter().map(|w| self.weyl_image(w)).collect();
        out.sort();
        out.dedup();
        out
    }
}

const WEYL_DIM_DENOMINATOR: i128 = 120; // ∏ ⟨ρ, α∨⟩ = 1·1·4·5·2·3

/// Dimension of the irreducible representation with highest weight λ,
/// by the Weyl dimension formula over the six positive coroots.
pub fn weyl_dim(lambda: &Weight) -> Result<u64> {
    if !is_dominant_g2(lambda) {
        return Err(Error::NonDominant(*lambda));
    }
    let shifted = *lambda + Weight::RHO_G;
    let mut prod: i128 = 1;
    for (_, coroot) in &POSITIVE_ROOTS {
        prod *= pairing(&shifted, coroot) as i128;
    }
    debug_assert!(prod > 0 && prod % WEYL_DIM_DENOMINATOR == 0);
    Ok(u64::try_from(prod / WEYL_DIM_DENOMINATOR).expect("dimension fits u64"))
}

/// Alternating Weyl sum Σ_w sign(w) (w(μ))(t) in ℚ(ζ_{2N}).
fn alternating_sum(mu: &Weight, t: &TorusElement) -> Cyclotomic {
    let two_n = 2 * t.declared_order();
    let mut acc = Cyclotomic::zero(two_n);
    for w in WeylGroup::g2().elements() {
        let img = w.act(mu);
        let term = Cyclotomic::root(two_n, t.exponent(&img));
        acc = if w.sign() > 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// The same sum as a jet along direction v: term slopes are ⟨w(μ), v⟩.
fn alternating_jet(mu: &Weight, t: &TorusElement, v: &Coweight) -> Jet {
    let two_n = 2 * t.declared_order();
    let mut acc = Jet::zero(two_n, JET_ORDER);
    for w in WeylGroup::g2().elements() {
        let img = w.act(mu);
        let base = Cyclotomic::root(two_n, t.exponent(&img));
        let term = Jet::exp_term(&base, pairing(&img, v), JET_ORDER);
        acc = if w.sign() > 0 { acc.add(&term) } else { acc.add(&term.neg()) };
    }
    acc
}

/// χ_λ(t), exactly.
///
/// Regular t: the plain ratio of alternating sums. Irregular t: the
/// jet-ratio limit along ρ∨, retrying along ρ∨ + k·λ1∨ for k = 1, 2, 3
/// if a direction ever leaves the denominator zero to truncation order.
pub fn char_at(lambda: &Weight, t: &TorusElement) -> Result<Cyclotomic> {
    if !is_dominant_g2(lambda) {
        return Err(Error::NonDominant(*lambda));
    }
    let shifted = *lambda + Weight::RHO_G;
    let den = alternating_sum(&Weight::RHO_G, t);
    if !den.is_zero() {
        let num = alternating_sum(&shifted, t);
        return Ok(num.mul(&den.inv()));
    }
    for k in 0..=3 {
        let v = Coweight::RHO_CHECK + Coweight::LAMBDA1_CHECK * k;
        let den_jet = alternating_jet(&Weight::RHO_G, t, &v);
        if den_jet.valuation().is_none() {
            continue; // non-generic direction; perturb and retry
        }
        let num_jet = alternating_jet(&shifted, t, &v);
        return jet_ratio_limit(&num_jet, &den_jet);
    }
    Err(Error::DeformationDegenerate)
}

/// Default cap on `weyl_dim` for multiplicity-table construction.
pub const FREUDENTHAL_DIM_BOUND: u64 = 1_000_000;

/// Full weight-multiplicity table of V_λ by the Freudenthal recursion,
/// with the default size cap.
pub fn freudenthal_multiplicities(lambda: &Weight) -> Result<BTreeMap<Weight, u64>> {
    freudenthal_multiplicities_bounded(lambda, FREUDENTHAL_DIM_BOUND)
}

/// As [`freudenthal_multiplicities`] but with an explicit dimension cap.
pub fn freudenthal_multiplicities_bounded(
    lambda: &Weight,
    bound: u64,
) -> Result<BTreeMap<Weight, u64>> {
    let dim = weyl_dim(lambda)?;
    if dim > bound {
        return Err(Error::BoundExceeded { dim, bound });
    }
    let group = WeylGroup::g2();
    let (x_max, y_max) = lambda.alpha_coords();

    // Dominant weights μ ≤ λ (all of them occur in V_λ), ordered by the
    // height of λ - μ so every Freudenthal reference is already computed.
    let mut dominants: Vec<(i64, Weight)> = Vec::new();
    for n1 in 0..=x_max {
        for n2 in 0..=y_max {
            let mu = *lambda - Weight::ALPHA1 * n1 - Weight::ALPHA2 * n2;
            if is_dominant_g2(&mu) {
                dominants.push((n1 + n2, mu));
            }
        }
    }
    dominants.sort();

    let norm = |w: &Weight| {
        let s = *w + Weight::RHO_G;
        s.inner(&s)
    };
    let lambda_norm = norm(lambda);

    let mut dominant_mult: BTreeMap<Weight, u64> = BTreeMap::new();
    for (height, mu) in &dominants {
        if *height == 0 {
            dominant_mult.insert(*mu, 1);
            continue;
        }
        let mut numerator: i128 = 0;
        for (alpha, _) in &POSITIVE_ROOTS {
            for j in 1.. {
                let nu = *mu + *alpha * j;
                let rep = group.dominant_representative(&nu);
                match dominant_mult.get(&rep) {
                    Some(m) => numerator += 2 * (*m as i128) * (nu.inner(alpha) as i128),
                    None => break, // left the weight system; the α-string is over
                }
            }
        }
        let denominator = (lambda_norm - norm(mu)) as i128;
        assert!(denominator > 0 && numerator % denominator == 0);
        let m = numerator / denominator;
        assert!(m > 0);
        dominant_mult.insert(*mu, m as u64);
    }

    let mut table: BTreeMap<Weight, u64> = BTreeMap::new();
    for (mu, m) in &dominant_mult {
        for w in group.orbit(mu) {
            table.insert(w, *m);
        }
    }
    let total: u64 = table.values().sum();
    assert_eq!(total, dim, "multiplicity table must sum to the Weyl dimension");
    Ok(table)
}

/// Direct evaluation route: Σ_μ m_μ · μ(t) from a multiplicity table.
pub fn char_from_weight_table(table: &BTreeMap<Weight, u64>, t: &TorusElement) -> Cyclotomic {
    let two_n = 2 * t.declared_order();
    let mut acc = Cyclotomic::zero(two_n);
    for (mu, m) in table {
        let term = t.eval_weight(mu).scale(&num_rational::BigRational::from_integer(
            num_bigint::BigInt::from(*m),
        ));
        acc = acc.add(&term);
    }
    acc
}

/// Decomposition of V_λ ⊗ V_σ into irreducibles, by the Klimyk rule over
/// the weight table of V_σ.
pub fn tensor_decompose(lambda: &Weight, sigma: &Weight) -> Result<BTreeMap<Weight, u64>> {
    let group = WeylGroup::g2();
    let sigma_table = freudenthal_multiplicities(sigma)?;
    if !is_dominant_g2(lambda) {
        return Err(Error::NonDominant(*lambda));
    }
    let mut acc: BTreeMap<Weight, i64> = BTreeMap::new();
    'weights: for (nu, m) in &sigma_table {
        let mut cand = *lambda + *nu + Weight::RHO_G;
        let mut sign = 1i64;
        // Move λ + ν + ρ to the dominant chamber, tracking the sign;
        // anything on a wall contributes nothing.
        loop {
            let p1 = pairing(&cand, &Coweight::ALPHA1_CHECK);
            let p2 = pairing(&cand, &Coweight::ALPHA2_CHECK);
            if p1 == 0 || p2 == 0 {
                continue 'weights;
            }
            if p1 < 0 {
                cand = group.s_alpha1().act(&cand);
                sign = -sign;
            } else if p2 < 0 {
                cand = group.s_alpha2().act(&cand);
                sign = -sign;
            } else {
                break;
            }
        }
        *acc.entry(cand - Weight::RHO_G).or_insert(0) += sign * (*m as i64);
    }
    let mut out = BTreeMap::new();
    for (mu, m) in acc {
        assert!(m >= 0, "tensor multiplicities are non-negative");
        if m > 0 {
            out.insert(mu, m as u64);
        }
    }
    Ok(out)
}
