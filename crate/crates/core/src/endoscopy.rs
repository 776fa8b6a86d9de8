//! The H = SL2×SL2/±1 correction machinery.
//!
//! H is the unique non-trivial elliptic endoscopic group of G2 that
//! contributes at level 1; its roots are realized as 2ε1 and 2ε2. Counting
//! unramified discrete representations of H weighted by Euler-Poincaré
//! traces collapses to a product of cusp-form counts:
//!
//! ```text
//! hTerm(a, b) = (S_{a+2} - 1_{a=0}) · (S_{b+2} - 1_{b=0}),
//! ```
//!
//! and the per-weight correction to the G2 count is the signed combination
//! `-hTerm(3k-3, k-1) + hTerm(3k-2, k-2)` surviving after the transfers of
//! the quaternionic pseudocoefficient and the compact-form Euler-Poincaré
//! function are subtracted against each other: the third transfer weight
//! 2(k-1)ε2 appears in both with the same sign and cancels. The transfer
//! signs themselves are fixed constants (Whittaker-normalized transfer
//! factors), embedded here as data; the compositional form of the
//! correction is authoritative and the printed piecewise table is kept
//! alongside as a transcription guard.
//!
//! The Satake projection at the end of the module is pure Weyl-orbit
//! combinatorics: a semisimple class for H maps to its G2 class by
//! forgetting down from the Ω_H-orbit to the Ω_{G2}-orbit of the same
//! torus point. Fibers have size 3 exactly over G2-regular classes.

use num_rational::Ratio;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::modforms::dim_cusp_forms;
use crate::rootlattice::{transfer_weights, Weight, WeylGroup};
use crate::weylchar::TorusElement;

/// Constants of the endoscopic setup: the ι multipliers from the
/// stabilization and the κ signs of the pseudocoefficient transfer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EndoscopicConstants {
    /// ι(G2, H) = ι(G2^c, H) = 1/2.
    pub iota_g2_h: Ratio<i64>,
    /// ι(G2^c, G2) = 1.
    pub iota_g2c_g2: Ratio<i64>,
    /// κ^H(s_{α1}) = -1.
    pub kappa_s1: i64,
    /// κ^H(s_{α2}) = -1.
    pub kappa_s2: i64,
    /// κ^H(s_{α1} s_{α2}) = -1.
    pub kappa_s1s2: i64,
}

impl EndoscopicConstants {
    pub const fn standard() -> Self {
        EndoscopicConstants {
            iota_g2_h: Ratio::new_raw(1, 2),
            iota_g2c_g2: Ratio::new_raw(1, 1),
            kappa_s1: -1,
            kappa_s2: -1,
            kappa_s1s2: -1,
        }
    }
}

/// Weighted count of unramified discrete representations of H against the
/// Euler-Poincaré function of weight aε1 + bε2.
pub fn h_term(a: i64, b: i64) -> i64 {
    assert!(a >= 0 && b >= 0, "h_term is defined for dominant H-weights");
    let factor = |x: i64| dim_cusp_forms(x + 2) as i64 - i64::from(x == 0);
    factor(a) * factor(b)
}

/// The endoscopic correction to the weight-k count, assembled
/// compositionally from the transfer weights.
pub fn correction(k: i64) -> Result<i64> {
    let [w1, w2, _cancelled] = transfer_weights(k)?;
    Ok(-h_term(w1.a(), w1.b()) + h_term(w2.a(), w2.b()))
}

/// The same correction as the printed piecewise table in k mod 12.
/// Kept separate so transcription errors in either form are caught by the
/// exhaustive equality test; the compositional form is authoritative.
pub fn correction_piecewise(k: i64) -> Result<i64> {
    if k <= 2 {
        return Err(Error::WeightOutOfRange { k, bound: "k must be greater than 2" });
    }
    Ok(match k.rem_euclid(12) {
        2 => (k / 4) * (k / 12 - 1),
        0 | 4 | 6 | 8 | 10 => (k / 4) * (k / 12),
        1 => -((3 * k - 1) / 12 - 1) * ((k + 1) / 12 - 1),
        5 | 9 => -((3 * k - 1) / 12 - 1) * ((k + 1) / 12),
        _ => -((3 * k - 1) / 12) * ((k + 1) / 12), // k ≡ 3, 7, 11
    })
}

/// One Euler-Poincaré term of a transfer: an integer sign on an H-weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignedWeight {
    pub sign: i64,
    pub weight: Weight,
}

/// The two signed transfer decompositions at weight k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferSigns {
    /// Transfer of the quaternionic pseudocoefficient: signs (-, +, -).
    pub pseudocoefficient: [SignedWeight; 3],
    /// Transfer of the compact-form Euler-Poincaré function: signs (+, -, -).
    pub euler_poincare: [SignedWeight; 3],
}

impl TransferSigns {
    /// ι · (pseudocoefficient - euler_poincare), collected by weight.
    /// The 2(k-1)ε2 terms cancel, leaving -1 on the first transfer weight
    /// and +1 on the second; this is exactly the combination [`correction`]
    /// evaluates through `h_term`.
    pub fn correction_combination(&self) -> BTreeMap<Weight, Ratio<i64>> {
        let iota = EndoscopicConstants::standard().iota_g2_h;
        let mut acc: BTreeMap<Weight, Ratio<i64>> = BTreeMap::new();
        for sw in &self.pseudocoefficient {
            *acc.entry(sw.weight).or_insert_with(|| Ratio::new(0, 1)) += iota * sw.sign;
        }
        for sw in &self.euler_poincare {
            *acc.entry(sw.weight).or_insert_with(|| Ratio::new(0, 1)) -= iota * sw.sign;
        }
        acc.retain(|_, v| *v != Ratio::new(0, 1));
        acc
    }
}

/// The signed Euler-Poincaré decompositions of the two real transfers to H.
pub fn transfer_weight_signs(k: i64) -> Result<TransferSigns> {
    let [w1, w2, w3] = transfer_weights(k)?;
    let consts = EndoscopicConstants::standard();
    // Pseudocoefficient transfer: κ(s_{α2})·η_{w1} - κ(s_{α1}s_{α2})·η_{w2} - η_{w3}.
    let pseudo = [
        SignedWeight { sign: consts.kappa_s2, weight: w1 },
        SignedWeight { sign: -consts.kappa_s1s2, weight: w2 },
        SignedWeight { sign: -1, weight: w3 },
    ];
    let ep = [
        SignedWeight { sign: 1, weight: w1 },
        SignedWeight { sign: -1, weight: w2 },
        SignedWeight { sign: -1, weight: w3 },
    ];
    Ok(TransferSigns { pseudocoefficient: pseudo, euler_poincare: ep })
}

/// A semisimple class for H: a torus point modulo Ω_H (coordinate sign
/// changes). The stored representative is the lexicographic minimum of the
/// orbit, so 0 ≤ c, d.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct HClass {
    rep: TorusElement,
}

impl HClass {
    pub fn new(t: &TorusElement) -> Self {
        let rep = WeylGroup::g2()
            .omega_h()
            .iter()
            .map(|w| t.weyl_image(w))
            .min()
            .expect("Ω_H is nonempty");
        HClass { rep }
    }

    pub fn representative(&self) -> &TorusElement {
        &self.rep
    }

    /// Number of distinct torus points in the Ω_H-orbit.
    pub fn orbit_size(&self) -> usize {
        let mut pts: Vec<TorusElement> =
            WeylGroup::g2().omega_h().iter().map(|w| self.rep.weyl_image(w)).collect();
        pts.sort();
        pts.dedup();
        pts.len()
    }
}

/// A semisimple class for G2: a torus point modulo the full Weyl group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct G2Class {
    rep: TorusElement,
}

impl G2Class {
    pub fn new(t: &TorusElement) -> Self {
        let rep = *t.weyl_orbit().first().expect("orbit is nonempty");
        G2Class { rep }
    }

    pub fn representative(&self) -> &TorusElement {
        &self.rep
    }

    pub fn is_regular(&self) -> bool {
        self.rep.is_g2_regular()
    }
}

/// Project an H-class to its G2-class: the same torus point, reduced
/// modulo the full Weyl action.
pub fn satake_project(h: &HClass) -> G2Class {
    G2Class::new(h.representative())
}

/// The complete fiber of [`satake_project`] over a G2-class: the Ω_H-orbits
/// inside the Ω_{G2}-orbit. Size 3 exactly at G2-regular points.
pub fn fiber(g: &G2Class) -> Vec<HClass> {
    let mut out: Vec<HClass> =
        g.representative().weyl_orbit().iter().map(HClass::new).collect();
    out.sort();
    out.dedup();
    out
}
