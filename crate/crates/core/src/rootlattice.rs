//! Exact model of the G2 character and cocharacter lattices.
//!
//! Weights are written in the (ε1, ε2) basis, where 2ε1 and 2ε2 are the
//! roots of the short and long SU(2) inside the maximal compact subgroup.
//! The character lattice is the root lattice
//!
//! ```text
//! X*(T) = { a ε1 + b ε2 : a + b ∈ 2ℤ },
//! ```
//!
//! with simple roots α1 = -ε1 + ε2 (short) and α2 = 3ε1 - ε2 (long),
//! highest root β = 3ε1 + ε2, and ρ = 4ε1 + 2ε2. Cocharacters use the
//! dual basis (δ1, δ2) of (2ε1, 2ε2), so the pairing is
//! ⟨aε1 + bε2, cδ1 + dδ2⟩ = (ac + bd)/2, an integer on valid pairs.
//!
//! The Weyl group is dihedral of order 12. Its matrices on ε-coordinates
//! are half-integral (they preserve the parity sublattice but not ℤ²),
//! so each element stores the doubled matrix and divides by two when
//! acting. All values here are immutable and all operations are pure.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Element of X*(T) in ε-coordinates. Invariant: `a + b` is even.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight {
    a: i64,
    b: i64,
}

impl Weight {
    pub const fn new(a: i64, b: i64) -> Self {
        assert!((a + b) % 2 == 0, "weight must satisfy a + b even");
        Weight { a, b }
    }

    pub const fn a(&self) -> i64 {
        self.a
    }

    pub const fn b(&self) -> i64 {
        self.b
    }

    pub const ZERO: Weight = Weight::new(0, 0);
    /// Short simple root α1 = -ε1 + ε2.
    pub const ALPHA1: Weight = Weight::new(-1, 1);
    /// Long simple root α2 = 3ε1 - ε2.
    pub const ALPHA2: Weight = Weight::new(3, -1);
    /// Highest root β = λ2 = 3ε1 + ε2 (long).
    pub const BETA: Weight = Weight::new(3, 1);
    /// First fundamental weight λ1 = ε1 + ε2 (short root; highest weight of the 7-dim rep).
    pub const LAMBDA1: Weight = Weight::new(1, 1);
    /// Half sum of the positive roots, ρ = 4ε1 + 2ε2.
    pub const RHO_G: Weight = Weight::new(4, 2);
    /// ρ of the maximal compact, ε1 + ε2.
    pub const RHO_K: Weight = Weight::new(1, 1);
    /// ρ of H = SL2×SL2/±1 realized on roots 2ε1, 2ε2.
    pub const RHO_H: Weight = Weight::new(1, 1);
    pub const TWO_EPS1: Weight = Weight::new(2, 0);
    pub const TWO_EPS2: Weight = Weight::new(0, 2);

    /// Coordinates in the simple-root basis: w = x·α1 + y·α2.
    pub fn alpha_coords(&self) -> (i64, i64) {
        // a = -x + 3y, b = x - y  =>  x = (a + 3b)/2, y = (a + b)/2
        ((self.a + 3 * self.b) / 2, (self.a + self.b) / 2)
    }

    /// Coordinates in the fundamental-weight basis: w = m·λ1 + n·λ2.
    pub fn fundamental_coords(&self) -> (i64, i64) {
        // λ1 = (1,1), λ2 = (3,1): a = m + 3n, b = m + n => n = (a-b)/2, m = (3b-a)/2
        ((3 * self.b - self.a) / 2, (self.a - self.b) / 2)
    }

    /// Invariant inner product, normalized so that short roots have length² 2.
    pub fn inner(&self, other: &Weight) -> i64 {
        // (a a' + 3 b b')/2 is integral on the parity sublattice.
        let n = self.a * other.a + 3 * self.b * other.b;
        debug_assert!(n % 2 == 0);
        n / 2
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        Weight { a: self.a + rhs.a, b: self.b + rhs.b }
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, rhs: Weight) -> Weight {
        Weight { a: self.a - rhs.a, b: self.b - rhs.b }
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight { a: -self.a, b: -self.b }
    }
}

impl Mul<i64> for Weight {
    type Output = Weight;
    fn mul(self, rhs: i64) -> Weight {
        Weight { a: self.a * rhs, b: self.b * rhs }
    }
}

/// Element of X_*(T) in δ-coordinates. Invariant: `c + d` is even.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coweight {
    c: i64,
    d: i64,
}

impl Coweight {
    pub const fn new(c: i64, d: i64) -> Self {
        assert!((c + d) % 2 == 0, "coweight must satisfy c + d even");
        Coweight { c, d }
    }

    pub const fn c(&self) -> i64 {
        self.c
    }

    pub const fn d(&self) -> i64 {
        self.d
    }

    /// α1∨ = -δ1 + 3δ2 (long coroot of the short simple root).
    pub const ALPHA1_CHECK: Coweight = Coweight::new(-1, 3);
    /// α2∨ = δ1 - δ2.
    pub const ALPHA2_CHECK: Coweight = Coweight::new(1, -1);
    /// λ1∨ = δ1 + 3δ2.
    pub const LAMBDA1_CHECK: Coweight = Coweight::new(1, 3);
    /// λ2∨ = β∨ = δ1 + δ2.
    pub const LAMBDA2_CHECK: Coweight = Coweight::new(1, 1);
    pub const TWO_DELTA1: Coweight = Coweight::new(2, 0);
    pub const TWO_DELTA2: Coweight = Coweight::new(0, 2);
    /// Half sum of the positive coroots, ρ∨ = 2δ1 + 4δ2 (a regular direction).
    pub const RHO_CHECK: Coweight = Coweight::new(2, 4);
}

impl Add for Coweight {
    type Output = Coweight;
    fn add(self, rhs: Coweight) -> Coweight {
        Coweight { c: self.c + rhs.c, d: self.d + rhs.d }
    }
}

impl Mul<i64> for Coweight {
    type Output = Coweight;
    fn mul(self, rhs: i64) -> Coweight {
        Coweight { c: self.c * rhs, d: self.d * rhs }
    }
}

/// Exact integer pairing ⟨aε1 + bε2, cδ1 + dδ2⟩ = (ac + bd)/2.
///
/// The parity invariants of both lattices force `ac + bd` even.
pub fn pairing(w: &Weight, cw: &Coweight) -> i64 {
    let n = w.a * cw.c + w.b * cw.d;
    debug_assert!(n % 2 == 0, "pairing of valid lattice points is integral");
    n / 2
}

/// The six positive roots of G2, paired with their coroots.
pub const POSITIVE_ROOTS: [(Weight, Coweight); 6] = [
    (Weight::ALPHA1, Coweight::ALPHA1_CHECK),
    (Weight::ALPHA2, Coweight::ALPHA2_CHECK),
    (Weight::TWO_EPS1, Coweight::TWO_DELTA1),
    (Weight::LAMBDA1, Coweight::LAMBDA1_CHECK),
    (Weight::TWO_EPS2, Coweight::TWO_DELTA2),
    (Weight::BETA, Coweight::LAMBDA2_CHECK),
];

/// The six short roots; together with 0 these are the weights of the 7-dim representation.
pub const SHORT_ROOTS: [Weight; 6] = [
    Weight::new(2, 0),
    Weight::new(1, 1),
    Weight::new(-1, 1),
    Weight::new(-2, 0),
    Weight::new(-1, -1),
    Weight::new(1, -1),
];

/// One of the 12 Weyl group elements.
///
/// `mat2` is twice the matrix of the action on ε-coordinates (the true
/// matrix is half-integral); `sign` is its determinant ±1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    mat2: [[i64; 2]; 2],
    sign: i64,
}

impl WeylElement {
    const IDENTITY: WeylElement = WeylElement { mat2: [[2, 0], [0, 2]], sign: 1 };
    // s_{α1}: (a, b) ↦ ((a + 3b)/2, (a - b)/2)
    const S_ALPHA1: WeylElement = WeylElement { mat2: [[1, 3], [1, -1]], sign: -1 };
    // s_{α2}: (a, b) ↦ ((-a + 3b)/2, (a + b)/2)
    const S_ALPHA2: WeylElement = WeylElement { mat2: [[-1, 3], [1, 1]], sign: -1 };

    pub fn sign(&self) -> i64 {
        self.sign
    }

    pub fn is_identity(&self) -> bool {
        self.mat2 == Self::IDENTITY.mat2
    }

    /// Apply to a weight. Exact: the doubled matrix times the coordinates
    /// is always even on the parity sublattice.
    pub fn act(&self, w: &Weight) -> Weight {
        let a2 = self.mat2[0][0] * w.a + self.mat2[0][1] * w.b;
        let b2 = self.mat2[1][0] * w.a + self.mat2[1][1] * w.b;
        assert!(a2 % 2 == 0 && b2 % 2 == 0);
        Weight::new(a2 / 2, b2 / 2)
    }

    /// Dual action on cocharacters: the transpose of the inverse matrix.
    pub fn act_coweight(&self, cw: &Coweight) -> Coweight {
        let inv = self.inverse();
        // transpose of inv.mat2, still doubled
        let c2 = inv.mat2[0][0] * cw.c + inv.mat2[1][0] * cw.d;
        let d2 = inv.mat2[0][1] * cw.c + inv.mat2[1][1] * cw.d;
        assert!(c2 % 2 == 0 && d2 % 2 == 0);
        Coweight::new(c2 / 2, d2 / 2)
    }

    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let mut m = [[0i64; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                let v = self.mat2[i][0] * other.mat2[0][j] + self.mat2[i][1] * other.mat2[1][j];
                assert!(v % 2 == 0, "Weyl composition stays half-integral");
                *entry = v / 2;
            }
        }
        WeylElement { mat2: m, sign: self.sign * other.sign }
    }

    pub fn inverse(&self) -> WeylElement {
        // det of the true matrix is ±1, so det of the doubled matrix is ±4.
        let det4 = self.mat2[0][0] * self.mat2[1][1] - self.mat2[0][1] * self.mat2[1][0];
        debug_assert!(det4 == 4 * self.sign);
        // With M the true matrix and s = det M, the doubled inverse is
        // 2M⁻¹ = s · adj(2M).
        let s = self.sign;
        let adj = [[self.mat2[1][1], -self.mat2[0][1]], [-self.mat2[1][0], self.mat2[0][0]]];
        let m = [[s * adj[0][0], s * adj[0][1]], [s * adj[1][0], s * adj[1][1]]];
        WeylElement { mat2: m, sign: self.sign }
    }
}

/// The full Weyl group Ω of G2, enumerated once by closing the simple
/// reflections under composition.
pub struct WeylGroup {
    elements: Vec<WeylElement>,
    omega_h: Vec<WeylElement>,
}

static WEYL_G2: OnceLock<WeylGroup> = OnceLock::new();

impl WeylGroup {
    pub fn g2() -> &'static WeylGroup {
        WEYL_G2.get_or_init(|| {
            let gens = [WeylElement::S_ALPHA1, WeylElement::S_ALPHA2];
            let mut elems = vec![WeylElement::IDENTITY];
            let mut frontier = vec![WeylElement::IDENTITY];
            while let Some(w) = frontier.pop() {
                for g in &gens {
                    let p = g.compose(&w);
                    if !elems.contains(&p) {
                        elems.push(p);
                        frontier.push(p);
                    }
                }
            }
            assert_eq!(elems.len(), 12, "Weyl group of G2 has order 12");
            elems.sort_by_key(|w| w.mat2);

            // Ω_H: generated by the reflections in 2ε1 and 2ε2, i.e. the
            // coordinate sign changes (±a, ±b).
            let omega_h: Vec<WeylElement> = [
                [[2, 0], [0, 2]],
                [[-2, 0], [0, 2]],
                [[2, 0], [0, -2]],
                [[-2, 0], [0, -2]],
            ]
            .iter()
            .map(|m| {
                let e = elems.iter().find(|w| w.mat2 == *m).copied();
                e.expect("sign changes lie in the Weyl group")
            })
            .collect();

            WeylGroup { elements: elems, omega_h }
        })
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    /// The subgroup Ω_H of coordinate sign changes (order 4).
    pub fn omega_h(&self) -> &[WeylElement] {
        &self.omega_h
    }

    pub fn identity(&self) -> &WeylElement {
        self.elements.iter().find(|w| w.is_identity()).unwrap()
    }

    pub fn s_alpha1(&self) -> &WeylElement {
        self.elements.iter().find(|w| w.mat2 == WeylElement::S_ALPHA1.mat2).unwrap()
    }

    pub fn s_alpha2(&self) -> &WeylElement {
        self.elements.iter().find(|w| w.mat2 == WeylElement::S_ALPHA2.mat2).unwrap()
    }

    /// Full orbit of a weight, sorted and deduplicated.
    pub fn orbit(&self, w: &Weight) -> Vec<Weight> {
        let mut out: Vec<Weight> = self.elements.iter().map(|g| g.act(w)).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Dominant representative of the orbit of `w`.
    pub fn dominant_representative(&self, w: &Weight) -> Weight {
        let mut v = *w;
        loop {
            if pairing(&v, &Coweight::ALPHA1_CHECK) < 0 {
                v = self.s_alpha1().act(&v);
            } else if pairing(&v, &Coweight::ALPHA2_CHECK) < 0 {
                v = self.s_alpha2().act(&v);
            } else {
                return v;
            }
        }
    }
}

/// True iff `w` lies in the closed G2-dominant chamber.
pub fn is_dominant_g2(w: &Weight) -> bool {
    pairing(w, &Coweight::ALPHA1_CHECK) >= 0 && pairing(w, &Coweight::ALPHA2_CHECK) >= 0
}

/// Half the sum of the positive roots, computed from the explicit list.
pub fn rho_from_positive_roots() -> Weight {
    let total = POSITIVE_ROOTS.iter().fold(Weight::ZERO, |acc, (r, _)| acc + *r);
    Weight::new(total.a() / 2, total.b() / 2)
}

/// Harish-Chandra parameter of the weight-k quaternionic discrete series:
/// s_{α2}((k-2)β + ρ). Defined for k ≥ 2.
pub fn hc_parameter(k: i64) -> Result<Weight> {
    if k < 2 {
        return Err(Error::WeightOutOfRange { k, bound: "k must be at least 2" });
    }
    let v = Weight::BETA * (k - 2) + Weight::RHO_G;
    Ok(WeylGroup::g2().s_alpha2().act(&v))
}

/// Minimal K-type of the weight-k quaternionic discrete series:
/// s_{α2}((k-2)β + 2ρ) - 2ρ_K, which collapses to 2k·ε2.
pub fn minimal_k_type(k: i64) -> Result<Weight> {
    if k < 2 {
        return Err(Error::WeightOutOfRange { k, bound: "k must be at least 2" });
    }
    let v = Weight::BETA * (k - 2) + Weight::RHO_G * 2;
    Ok(WeylGroup::g2().s_alpha2().act(&v) - Weight::RHO_K * 2)
}

/// The three infinitesimal-character shifts appearing in the transfer to
/// H, computed structurally as ω((k-2)β + ρ) - ρ_H for ω = 1, s_{α1}, s_{α2}.
///
/// Closed forms: ((3k-3, k-1), (3k-2, k-2), (0, 2k-2)).
pub fn transfer_weights(k: i64) -> Result<[Weight; 3]> {
    if k <= 2 {
        return Err(Error::WeightOutOfRange { k, bound: "k must be greater than 2" });
    }
    let g = WeylGroup::g2();
    let v = Weight::BETA * (k - 2) + Weight::RHO_G;
    Ok([
        v - Weight::RHO_H,
        g.s_alpha1().act(&v) - Weight::RHO_H,
        g.s_alpha2().act(&v) - Weight::RHO_H,
    ])
}
