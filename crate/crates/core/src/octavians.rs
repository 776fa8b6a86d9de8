//! The integral (Coxeter) octonions and their automorphism group.
//!
//! Octonions are written on the basis 1 = e0, e1, …, e7 with the
//! multiplication rule e_n e_{n+1} = e_{n+3} (indices cyclic in 1..7),
//! so the seven oriented lines are {n, n+1, n+3}. The maximal order is
//! the span of ℤ^8 together with the half-vectors (Σ_{i∈S} ±e_i)/2 whose
//! support S runs over a 16-word binary code of length 8: the words are
//! built from {0}∪line and its complement, with one fixed coordinate swap
//! applied to the whole collection; without the swap the lattice is not
//! closed under multiplication. Membership, norms, and products are all
//! exact on doubled integer coordinates.
//!
//! The unit group is the 240 elements of norm 1 (an E8 root system), and
//! the automorphism group Γ of the order has 12096 elements. Γ is found
//! by sending a fixed basic triple (e1, e2, e3) to candidate triples of
//! pure-imaginary units with the right orthogonality, extending each to
//! a linear map by multiplicativity, and keeping the maps that preserve
//! the lattice. Conjugacy classes are computed by explicit orbit
//! expansion; each class records its size, element order, characteristic
//! polynomial on the trace-zero 7-space, and a torus parameter recovered
//! from its eigenvalues. The invariant dimension
//!
//! ```text
//! dim V_λ^Γ = (1/|Γ|) Σ_classes size · χ_λ(torus)
//! ```
//!
//! is then a plain class-function pairing, and it is the compact-form
//! ingredient of the final counts.

// Index loops read better than iterator chains in the matrix kernels here.
#![allow(clippy::needless_range_loop)]

use std::collections::HashMap;
use std::path::Path;
use std::sync::OnceLock;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::rootlattice::{is_dominant_g2, Weight, SHORT_ROOTS};
use crate::weylchar::{char_at, TorusElement};

/// Order of Γ = Aut of the octonion order.
pub const GAMMA_ORDER: u64 = 12096;

/// The seven oriented Fano lines {n, n+1, n+3} on labels 1..7.
const LINES: [[usize; 3]; 7] =
    [[1, 2, 4], [2, 3, 5], [3, 4, 6], [4, 5, 7], [5, 6, 1], [6, 7, 2], [7, 1, 3]];

/// The coordinate swapped with 0 in the halving-set code. The unswapped
/// collection (Kirmse's) is not multiplication-closed; swapping any one
/// imaginary coordinate fixes it, and the choice is part of the basis
/// convention. Verified by the closure tests below.
const CODE_SWAP: usize = 1;

/// sign/index table: e_i e_j = MUL_SIGN[i][j] · e_{MUL_INDEX[i][j]}.
struct MulTable {
    sign: [[i64; 8]; 8],
    index: [[usize; 8]; 8],
}

fn mul_table() -> &'static MulTable {
    static TABLE: OnceLock<MulTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut sign = [[0i64; 8]; 8];
        let mut index = [[0usize; 8]; 8];
        for j in 0..8 {
            // 1·e_j = e_j, e_j·1 = e_j
            sign[0][j] = 1;
            index[0][j] = j;
            sign[j][0] = 1;
            index[j][0] = j;
        }
        for i in 1..8 {
            // e_i² = -1
            sign[i][i] = -1;
            index[i][i] = 0;
        }
        for line in LINES {
            let [a, b, c] = line;
            for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                sign[x][y] = 1;
                index[x][y] = z;
                sign[y][x] = -1;
                index[y][x] = z;
            }
        }
        MulTable { sign, index }
    })
}

/// Product in the ambient octonion algebra on raw coordinate vectors.
fn mul_raw(x: &[i64; 8], y: &[i64; 8]) -> [i64; 8] {
    let t = mul_table();
    let mut out = [0i64; 8];
    for i in 0..8 {
        if x[i] == 0 {
            continue;
        }
        for j in 0..8 {
            if y[j] == 0 {
                continue;
            }
            out[t.index[i][j]] += t.sign[i][j] * x[i] * y[j];
        }
    }
    out
}

/// The 16 halving-set masks (bit i set = coordinate i is half-integral).
fn code_masks() -> &'static [u8; 16] {
    static MASKS: OnceLock<[u8; 16]> = OnceLock::new();
    MASKS.get_or_init(|| {
        let swap = |mask: u8| -> u8 {
            let b0 = mask & 1;
            let bs = (mask >> CODE_SWAP) & 1;
            (mask & !(1 | (1 << CODE_SWAP))) | bs | (b0 << CODE_SWAP)
        };
        let mut out = [0u8; 16];
        out[0] = 0;
        out[1] = 0xFF;
        for (k, line) in LINES.iter().enumerate() {
            let w: u8 = 1 | line.iter().map(|&i| 1u8 << i).sum::<u8>();
            out[2 + 2 * k] = swap(w);
            out[3 + 2 * k] = swap(!w);
        }
        out.sort_unstable();
        out
    })
}

fn odd_mask(v: &[i64; 8]) -> u8 {
    let mut m = 0u8;
    for (i, x) in v.iter().enumerate() {
        if x & 1 != 0 {
            m |= 1 << i;
        }
    }
    m
}

fn in_order_doubled(v: &[i64; 8]) -> bool {
    code_masks().binary_search(&odd_mask(v)).is_ok()
}

/// An element of the octonion order, stored as doubled coordinates
/// (every coordinate of the element itself is a half-integer).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegralOctonion {
    v: [i64; 8],
}

impl IntegralOctonion {
    pub fn from_doubled(v: [i64; 8]) -> Result<Self> {
        if in_order_doubled(&v) {
            Ok(IntegralOctonion { v })
        } else {
            Err(Error::ClassDataInvalid(format!("{v:?} is not in the octonion order")))
        }
    }

    pub fn doubled(&self) -> &[i64; 8] {
        &self.v
    }

    pub fn one() -> Self {
        let mut v = [0; 8];
        v[0] = 2;
        IntegralOctonion { v }
    }

    /// e_i for i in 0..8.
    pub fn basis_unit(i: usize) -> Self {
        let mut v = [0; 8];
        v[i] = 2;
        IntegralOctonion { v }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut v = [0; 8];
        for i in 0..8 {
            v[i] = self.v[i] + o.v[i];
        }
        IntegralOctonion { v }
    }

    pub fn neg(&self) -> Self {
        let mut v = self.v;
        for x in &mut v {
            *x = -*x;
        }
        IntegralOctonion { v }
    }

    /// Octonion product; panics if the order were not closed (it is).
    pub fn mul(&self, o: &Self) -> Self {
        let raw = mul_raw(&self.v, &o.v);
        let mut v = [0; 8];
        for i in 0..8 {
            assert!(raw[i] % 2 == 0, "order closed under multiplication");
            v[i] = raw[i] / 2;
        }
        debug_assert!(in_order_doubled(&v));
        IntegralOctonion { v }
    }

    pub fn conj(&self) -> Self {
        let mut v = self.v;
        for x in v.iter_mut().skip(1) {
            *x = -*x;
        }
        IntegralOctonion { v }
    }

    /// Four times the norm form (Σ of squared true coordinates).
    pub fn norm4(&self) -> i64 {
        self.v.iter().map(|x| x * x).sum()
    }

    /// trace(x) = x + x̄; equals the doubled real coordinate.
    pub fn trace(&self) -> i64 {
        self.v[0]
    }

    pub fn is_unit(&self) -> bool {
        self.norm4() == 4
    }

    fn dot4(&self, o: &Self) -> i64 {
        self.v.iter().zip(&o.v).map(|(a, b)| a * b).sum()
    }
}

/// All 240 norm-1 elements of the order, by bounded search.
pub fn enumerate_units() -> Result<Vec<IntegralOctonion>> {
    let mut found = Vec::new();
    let mut v = [0i64; 8];
    fn rec(v: &mut [i64; 8], pos: usize, budget: i64, out: &mut Vec<[i64; 8]>) {
        if pos == 8 {
            if budget == 0 {
                out.push(*v);
            }
            return;
        }
        for x in -2..=2i64 {
            if x * x <= budget {
                v[pos] = x;
                rec(v, pos + 1, budget - x * x, out);
            }
        }
        v[pos] = 0;
    }
    let mut raw = Vec::new();
    rec(&mut v, 0, 4, &mut raw);
    for w in raw {
        if in_order_doubled(&w) {
            found.push(IntegralOctonion { v: w });
        }
    }
    found.sort();
    if found.len() != 240 {
        return Err(Error::BadOrderData { found: found.len() });
    }
    Ok(found)
}

/// An automorphism of the order: doubled matrix on the basis e0..e7
/// (column j holds the doubled coordinates of the image of e_j).
/// Entries of the doubled matrix lie in {-2,…,2}, so i8 suffices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Automorphism {
    m: [i8; 64],
}

impl std::fmt::Debug for Automorphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Automorphism[trace7 = {}]", self.trace7_doubled())
    }
}

impl Automorphism {
    pub fn identity() -> Self {
        let mut m = [0i8; 64];
        for i in 0..8 {
            m[9 * i] = 2;
        }
        Automorphism { m }
    }

    fn at(&self, r: usize, c: usize) -> i64 {
        self.m[8 * r + c] as i64
    }

    pub fn apply(&self, x: &IntegralOctonion) -> IntegralOctonion {
        let mut out = [0i64; 8];
        for (r, o) in out.iter_mut().enumerate() {
            let mut acc = 0i64;
            for c in 0..8 {
                acc += self.at(r, c) * x.v[c];
            }
            assert!(acc % 2 == 0);
            *o = acc / 2;
        }
        debug_assert!(in_order_doubled(&out));
        IntegralOctonion { v: out }
    }

    pub fn compose(&self, o: &Self) -> Self {
        let mut m = [0i8; 64];
        for r in 0..8 {
            for c in 0..8 {
                let mut acc = 0i64;
                for k in 0..8 {
                    acc += self.at(r, k) * o.at(k, c);
                }
                assert!(acc % 2 == 0, "automorphism composition stays half-integral");
                let h = acc / 2;
                debug_assert!((-2..=2).contains(&h));
                m[8 * r + c] = h as i8;
            }
        }
        Automorphism { m }
    }

    /// Automorphisms are orthogonal for the norm form, so the inverse is
    /// the transpose.
    pub fn inverse(&self) -> Self {
        let mut m = [0i8; 64];
        for r in 0..8 {
            for c in 0..8 {
                m[8 * r + c] = self.m[8 * c + r];
            }
        }
        Automorphism { m }
    }

    pub fn order(&self) -> u64 {
        let id = Self::identity();
        let mut p = *self;
        for k in 1..=24 {
            if p == id {
                return k;
            }
            p = p.compose(self);
        }
        unreachable!("element order divides the group exponent");
    }

    fn trace7_doubled(&self) -> i64 {
        (1..8).map(|i| self.at(i, i)).sum()
    }

    /// Doubled matrix of the restriction to trace-zero octonions.
    fn seven_block(&self) -> [[i64; 7]; 7] {
        let mut b = [[0i64; 7]; 7];
        for r in 0..7 {
            for c in 0..7 {
                b[r][c] = self.at(r + 1, c + 1);
            }
        }
        b
    }

    /// φ(xy) = φ(x)φ(y) on all basis pairs, φ(1) = 1, norms preserved.
    pub fn is_multiplicative(&self) -> bool {
        let imgs: Vec<IntegralOctonion> =
            (0..8).map(|j| self.apply(&IntegralOctonion::basis_unit(j))).collect();
        if imgs[0] != IntegralOctonion::one() {
            return false;
        }
        for i in 0..8 {
            if !imgs[i].is_unit() {
                return false;
            }
            for j in 0..8 {
                let lhs = self.apply(&IntegralOctonion::basis_unit(i).mul(&IntegralOctonion::basis_unit(j)));
                if lhs != imgs[i].mul(&imgs[j]) {
                    return false;
                }
            }
        }
        true
    }
}

/// The expansion of the standard basis over the reference-triple products
/// [1, a, b, ab, c, ac, bc, (ab)c] with (a, b, c) = (e1, e2, e3): a signed
/// permutation, computed once.
fn reference_expansion() -> &'static [(usize, i64); 8] {
    static EXP: OnceLock<[(usize, i64); 8]> = OnceLock::new();
    EXP.get_or_init(|| {
        let prods = triple_products(
            &IntegralOctonion::basis_unit(1),
            &IntegralOctonion::basis_unit(2),
            &IntegralOctonion::basis_unit(3),
        );
        let mut map = [(usize::MAX, 0i64); 8];
        for (u_idx, p) in prods.iter().enumerate() {
            let nonzero: Vec<usize> = (0..8).filter(|&i| p.v[i] != 0).collect();
            assert_eq!(nonzero.len(), 1, "reference products are signed basis vectors");
            let coord = nonzero[0];
            assert_eq!(p.v[coord].abs(), 2);
            map[coord] = (u_idx, p.v[coord].signum());
        }
        assert!(map.iter().all(|(i, _)| *i != usize::MAX));
        map
    })
}

fn triple_products(
    a: &IntegralOctonion,
    b: &IntegralOctonion,
    c: &IntegralOctonion,
) -> [IntegralOctonion; 8] {
    let ab = a.mul(b);
    [
        IntegralOctonion::one(),
        *a,
        *b,
        ab,
        *c,
        a.mul(c),
        b.mul(c),
        ab.mul(c),
    ]
}

/// Half-integral lattice generators (doubled 0/1 vectors lifting four
/// independent weight-4 codewords); images of these decide stability.
fn half_generators() -> &'static Vec<[i64; 8]> {
    static GENS: OnceLock<Vec<[i64; 8]>> = OnceLock::new();
    GENS.get_or_init(|| {
        let mut rank_basis: Vec<u8> = Vec::new();
        let mut gens = Vec::new();
        for &mask in code_masks().iter() {
            if mask == 0 || mask == 0xFF {
                continue;
            }
            // GF(2) independence against the chosen generators
            let mut reduced = mask;
            for &b in &rank_basis {
                reduced = reduced.min(reduced ^ b);
            }
            if reduced != 0 {
                rank_basis.push(reduced);
                let mut v = [0i64; 8];
                for (i, x) in v.iter_mut().enumerate() {
                    if mask & (1 << i) != 0 {
                        *x = 1;
                    }
                }
                gens.push(v);
                if gens.len() == 4 {
                    break;
                }
            }
        }
        assert_eq!(gens.len(), 4);
        gens
    })
}

/// Assemble the automorphism sending the reference triple to (a, b, c),
/// if it stabilizes the lattice.
fn automorphism_from_triple(
    a: &IntegralOctonion,
    b: &IntegralOctonion,
    c: &IntegralOctonion,
    ab: &IntegralOctonion,
) -> Option<Automorphism> {
    let expansion = reference_expansion();
    let prods = [
        IntegralOctonion::one(),
        *a,
        *b,
        *ab,
        *c,
        a.mul(c),
        b.mul(c),
        ab.mul(c),
    ];
    let mut m = [0i8; 64];
    for j in 0..8 {
        let (u_idx, sign) = expansion[j];
        for r in 0..8 {
            let e = sign * prods[u_idx].v[r];
            debug_assert!((-2..=2).contains(&e));
            m[8 * r + j] = e as i8;
        }
    }
    let phi = Automorphism { m };
    // Images of e_j are units by construction; only the half-integral
    // generators can fall outside the lattice.
    for g in half_generators() {
        let mut img = [0i64; 8];
        for (r, o) in img.iter_mut().enumerate() {
            let mut acc = 0i64;
            for k in 0..8 {
                acc += phi.at(r, k) * g[k];
            }
            if acc % 2 != 0 {
                return None;
            }
            *o = acc / 2;
        }
        if !in_order_doubled(&img) {
            return None;
        }
    }
    Some(phi)
}

/// Enumerate Γ: all automorphisms of the order, sorted deterministically.
pub fn enumerate_aut_group() -> Result<Vec<Automorphism>> {
    let units = enumerate_units()?;
    let pure: Vec<IntegralOctonion> =
        units.iter().filter(|u| u.trace() == 0).copied().collect();

    let mut autos: Vec<Automorphism> = pure
        .par_iter()
        .flat_map_iter(|a| {
            let mut local = Vec::new();
            for b in pure.iter().filter(|b| b.dot4(a) == 0) {
                let ab = a.mul(b);
                for c in pure
                    .iter()
                    .filter(|c| c.dot4(a) == 0 && c.dot4(b) == 0 && c.dot4(&ab) == 0)
                {
                    if let Some(phi) = automorphism_from_triple(a, b, c, &ab) {
                        local.push(phi);
                    }
                }
            }
            local
        })
        .collect();

    autos.sort();
    autos.dedup();
    if autos.len() != GAMMA_ORDER as usize {
        return Err(Error::GroupSizeUnexpected { found: autos.len() });
    }
    Ok(autos)
}

/// A conjugacy class of Γ with everything the character pairing needs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjClass {
    pub order: u64,
    pub size: u64,
    pub torus: TorusElement,
    /// Characteristic polynomial on the trace-zero 7-space, ascending
    /// coefficients, monic: `charpoly7[7] = 1`.
    pub charpoly7: [i64; 8],
}

/// Characteristic polynomial of the true 7×7 restriction from the doubled
/// block, by the Faddeev–LeVerrier recursion.
fn charpoly7_of(aut: &Automorphism) -> [i64; 8] {
    let b = aut.seven_block();
    let matmul = |x: &[[i128; 7]; 7], y: &[[i128; 7]; 7]| {
        let mut out = [[0i128; 7]; 7];
        for r in 0..7 {
            for c in 0..7 {
                let mut acc = 0i128;
                for k in 0..7 {
                    acc += x[r][k] * y[k][c];
                }
                out[r][c] = acc;
            }
        }
        out
    };
    let mut bb = [[0i128; 7]; 7];
    for r in 0..7 {
        for c in 0..7 {
            bb[r][c] = b[r][c] as i128;
        }
    }
    // p_B(y) = y^7 + c_1 y^6 + … + c_7 for the doubled matrix B
    let mut coeffs_desc = [0i128; 8];
    coeffs_desc[0] = 1;
    let mut m = bb;
    for k in 1..=7 {
        let tr: i128 = (0..7).map(|i| m[i][i]).sum();
        assert!(tr % (k as i128) == 0);
        let ck = -tr / (k as i128);
        coeffs_desc[k] = ck;
        if k < 7 {
            let mut shifted = m;
            for i in 0..7 {
                shifted[i][i] += ck;
            }
            m = matmul(&bb, &shifted);
        }
    }
    // p_A(x) = 2^{-7} p_B(2x): coefficient of x^i is b_i / 2^{7-i}.
    let mut out = [0i64; 8];
    for i in 0..=7 {
        let b_i = coeffs_desc[7 - i]; // coefficient of y^i
        let div = 1i128 << (7 - i);
        assert!(b_i % div == 0, "eigenvalues are algebraic integers");
        out[i] = i64::try_from(b_i / div).unwrap();
    }
    assert_eq!(out[7], 1);
    out
}

/// Power traces tr(A^j) of the true 7×7 restriction, j = 1..=jmax.
fn power_traces(aut: &Automorphism, jmax: u64) -> Vec<i64> {
    let mut out = Vec::with_capacity(jmax as usize);
    let mut p = *aut;
    for _ in 1..=jmax {
        let t2 = p.trace7_doubled();
        assert!(t2 % 2 == 0, "traces of automorphisms are rational integers");
        out.push(t2 / 2);
        p = p.compose(aut);
    }
    out
}

/// Trace of the 7-dim representation at a torus point, as an integer if
/// it is one.
fn seven_trace_at(t: &TorusElement) -> Option<i64> {
    let two_n = 2 * t.declared_order();
    let mut acc = Cyclotomic::one(two_n);
    for g in SHORT_ROOTS {
        acc = acc.add(&t.eval_weight(&g));
    }
    acc.to_rational_integer().ok().and_then(|v| i64::try_from(&v).ok())
}

/// ∏ (x - μ(t)) over the seven weights of the 7-dim representation
/// ({0} ∪ short roots), reduced to integer coefficients: the expected
/// characteristic polynomial at a torus point.
fn charpoly_from_torus(t: &TorusElement) -> Option<[i64; 8]> {
    let two_n = 2 * t.declared_order();
    // coefficients of the product polynomial, ascending, in ℚ(ζ_2N)
    let mut coeffs = vec![Cyclotomic::one(two_n)];
    let mut roots = vec![Cyclotomic::one(two_n)];
    roots.extend(SHORT_ROOTS.iter().map(|g| t.eval_weight(g)));
    for root in roots {
        let mut next = vec![Cyclotomic::zero(two_n); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c);
            next[i] = next[i].sub(&c.mul(&root));
        }
        coeffs = next;
    }
    let mut out = [0i64; 8];
    for (i, c) in coeffs.iter().enumerate() {
        out[i] = i64::try_from(&c.to_rational_integer().ok()?).ok()?;
    }
    Some(out)
}

/// Recover the torus parameter of a class from its power traces: the
/// eigenvalues on the 7-space are 1 together with the short-root values.
fn recover_torus(order: u64, traces: &[i64]) -> Result<TorusElement> {
    let two_n = 2 * order as i64;
    let mut matches: Vec<TorusElement> = Vec::new();
    for c in 0..two_n {
        for d in 0..two_n {
            if (c + d) % 2 != 0 {
                continue;
            }
            let t = TorusElement::new(order, c, d);
            let ok = (1..=order).all(|j| {
                seven_trace_at(&t.power(j as i64)) == Some(traces[(j - 1) as usize])
            });
            if ok {
                matches.push(t);
            }
        }
    }
    matches.sort_by_key(|t| (t.c() % 2 != 0 || t.d() % 2 != 0, t.c(), t.d()));
    matches.dedup();
    matches.into_iter().next().ok_or(Error::TorusRecoveryFailed { order })
}

/// Partition Γ into conjugacy classes by explicit orbit expansion, and
/// attach orders, torus parameters, and characteristic polynomials.
/// Output is sorted by (order, size, charpoly7) so the emitted datafile
/// is byte-stable.
pub fn classify(group: &[Automorphism]) -> Result<Vec<ConjClass>> {
    let n = group.len();
    let index: HashMap<Automorphism, usize> =
        group.iter().enumerate().map(|(i, a)| (*a, i)).collect();

    // Small generating set, greedily grown until it generates everything.
    let mut gens: Vec<Automorphism> = Vec::new();
    let mut generated = vec![false; n];
    generated[index[&Automorphism::identity()]] = true;
    let mut generated_count = 1usize;
    for cand in group {
        if generated_count == n {
            break;
        }
        if generated[index[cand]] {
            continue;
        }
        gens.push(*cand);
        // closure under right multiplication by the new generator set
        let mut frontier: Vec<usize> =
            (0..n).filter(|&i| generated[i]).collect();
        while let Some(i) = frontier.pop() {
            for g in &gens {
                let j = index[&group[i].compose(g)];
                if !generated[j] {
                    generated[j] = true;
                    generated_count += 1;
                    frontier.push(j);
                }
            }
        }
    }

    let conjugators: Vec<(Automorphism, Automorphism)> =
        gens.iter().map(|g| (*g, g.inverse())).collect();

    let mut visited = vec![false; n];
    let mut raw_classes: Vec<(usize, Vec<usize>)> = Vec::new(); // (min index, members)
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let mut members = vec![start];
        visited[start] = true;
        let mut frontier = vec![start];
        while let Some(i) = frontier.pop() {
            for (g, g_inv) in &conjugators {
                let conj = g.compose(&group[i]).compose(g_inv);
                let j = index[&conj];
                if !visited[j] {
                    visited[j] = true;
                    members.push(j);
                    frontier.push(j);
                }
            }
        }
        raw_classes.push((start, members));
    }

    let mut classes: Vec<ConjClass> = raw_classes
        .par_iter()
        .map(|(rep_idx, members)| {
            let rep = &group[*rep_idx];
            let order = rep.order();
            let traces = power_traces(rep, order);
            let torus = recover_torus(order, &traces)?;
            Ok(ConjClass {
                order,
                size: members.len() as u64,
                torus,
                charpoly7: charpoly7_of(rep),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    classes.sort_by_key(|a| (a.order, a.size, a.charpoly7));

    let total: u64 = classes.iter().map(|c| c.size).sum();
    if total != GAMMA_ORDER {
        return Err(Error::GroupSizeUnexpected { found: total as usize });
    }
    Ok(classes)
}

/// Structural checks on class data: sizes partition Γ, polynomials are
/// monic with the right trace, torus parameters reproduce the traces and
/// are consistent under power maps.
pub fn validate_classes(classes: &[ConjClass]) -> Result<()> {
    if classes.is_empty() {
        return Err(Error::ClassDataInvalid("no classes".into()));
    }
    let total: u64 = classes.iter().map(|c| c.size).sum();
    if total != GAMMA_ORDER {
        return Err(Error::ClassDataInvalid(format!(
            "class sizes sum to {total}, expected {GAMMA_ORDER}"
        )));
    }
    let torus_reps: Vec<TorusElement> = classes
        .iter()
        .flat_map(|c| c.torus.reduced().weyl_orbit())
        .collect();
    for (i, c) in classes.iter().enumerate() {
        if c.charpoly7[7] != 1 {
            return Err(Error::ClassDataInvalid(format!("class {i}: charpoly not monic")));
        }
        if c.torus.declared_order() != c.order {
            return Err(Error::ClassDataInvalid(format!("class {i}: torus order mismatch")));
        }
        // The torus eigenvalues {1} ∪ {short-root values} must reproduce
        // the whole characteristic polynomial, trace included.
        match charpoly_from_torus(&c.torus) {
            Some(cp) if cp == c.charpoly7 => {}
            _ => {
                return Err(Error::ClassDataInvalid(format!(
                    "class {i}: torus does not reproduce the characteristic polynomial"
                )))
            }
        }
        // Power-map consistency: the torus of a power appears among classes.
        for m in 2..=c.order {
            let canon = c.torus.power(m as i64).reduced().weyl_orbit();
            if !torus_reps.iter().any(|t| canon.contains(t)) {
                return Err(Error::ClassDataInvalid(format!(
                    "class {i}: power {m} torus not represented"
                )));
            }
        }
    }
    Ok(())
}

/// dim V_λ^Γ by averaging χ_λ over the classes.
pub fn invariant_dim(lambda: &Weight, classes: &[ConjClass]) -> Result<u64> {
    if !is_dominant_g2(lambda) {
        return Err(Error::NonDominant(*lambda));
    }
    let mut acc = BigInt::from(0);
    for class in classes {
        let chi = char_at(lambda, &class.torus)?;
        acc += chi.to_rational_integer()? * BigInt::from(class.size);
    }
    let (q, r) = num_integer::Integer::div_rem(&acc, &BigInt::from(GAMMA_ORDER));
    if r != BigInt::from(0) {
        return Err(Error::NonIntegral(format!("{acc}/{GAMMA_ORDER}")));
    }
    u64::try_from(&q).map_err(|_| {
        Error::ClassDataInvalid(format!("negative invariant dimension {q} for {lambda:?}"))
    })
}

/// Serialize classes to the canonical JSON datafile format.
pub fn write_classes(path: &Path, classes: &[ConjClass]) -> Result<()> {
    let json = serde_json::to_string_pretty(classes)
        .map_err(|e| Error::ClassDataInvalid(e.to_string()))?;
    std::fs::write(path, json + "\n")?;
    Ok(())
}

/// Read and validate a class datafile.
pub fn read_classes(path: &Path) -> Result<Vec<ConjClass>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::ClassDataInvalid(format!("{}: {e}", path.display())))?;
    parse_classes(&text)
}

fn parse_classes(text: &str) -> Result<Vec<ConjClass>> {
    let classes: Vec<ConjClass> =
        serde_json::from_str(text).map_err(|e| Error::ClassDataInvalid(e.to_string()))?;
    validate_classes(&classes)?;
    Ok(classes)
}

/// The checked-in class datafile, parsed once. Regenerate with
/// `g2quat classes --emit crates/core/data/g2c_classes.json`.
pub fn builtin_classes() -> Result<&'static [ConjClass]> {
    static CLASSES: OnceLock<Result<Vec<ConjClass>>> = OnceLock::new();
    let r = CLASSES.get_or_init(|| parse_classes(include_str!("../data/g2c_classes.json")));
    match r {
        Ok(v) => Ok(v.as_slice()),
        Err(e) => Err(e.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_multiplicatively_closed() {
        // Spanning set: 2e_i plus the lifts of all nonzero halving sets.
        let mut span: Vec<[i64; 8]> = (0..8)
            .map(|i| {
                let mut v = [0i64; 8];
                v[i] = 2;
                v
            })
            .collect();
        for &mask in code_masks().iter() {
            if mask == 0 {
                continue;
            }
            let mut v = [0i64; 8];
            for (i, x) in v.iter_mut().enumerate() {
                if mask & (1 << i) != 0 {
                    *x = 1;
                }
            }
            span.push(v);
        }
        for x in &span {
            assert!(in_order_doubled(x));
            for y in &span {
                let raw = mul_raw(x, y);
                assert!(raw.iter().all(|e| e % 2 == 0), "{x:?}·{y:?} leaves the order");
                let mut half = [0i64; 8];
                for i in 0..8 {
                    half[i] = raw[i] / 2;
                }
                assert!(in_order_doubled(&half), "{x:?}·{y:?} leaves the order");
            }
        }
    }

    #[test]
    fn alternative_swaps_fail_closure() {
        // The unswapped halving collection must NOT be closed; this pins
        // the convention rather than trusting it silently.
        let lines_mask = |swap: usize| -> Vec<u8> {
            let sw = |mask: u8| -> u8 {
                if swap == 0 {
                    return mask;
                }
                let b0 = mask & 1;
                let bs = (mask >> swap) & 1;
                (mask & !(1 | (1 << swap))) | bs | (b0 << swap)
            };
            let mut out = vec![0u8, 0xFF];
            for line in LINES {
                let w: u8 = 1 | line.iter().map(|&i| 1u8 << i).sum::<u8>();
                out.push(sw(w));
                out.push(sw(!w));
            }
            out.sort_unstable();
            out
        };
        let violations = |masks: &[u8]| -> usize {
            let in_set = |v: &[i64; 8]| masks.binary_search(&odd_mask(v)).is_ok();
            let mut span: Vec<[i64; 8]> = Vec::new();
            for i in 0..8 {
                let mut v = [0i64; 8];
                v[i] = 2;
                span.push(v);
            }
            for &mask in masks {
                if mask == 0 {
                    continue;
                }
                let mut v = [0i64; 8];
                for (i, x) in v.iter_mut().enumerate() {
                    if mask & (1 << i) != 0 {
                        *x = 1;
                    }
                }
                span.push(v);
            }
            let mut bad = 0;
            for x in &span {
                for y in &span {
                    let raw = mul_raw(x, y);
                    if raw.iter().any(|e| e % 2 != 0) {
                        bad += 1;
                        continue;
                    }
                    let mut half = [0i64; 8];
                    for i in 0..8 {
                        half[i] = raw[i] / 2;
                    }
                    if !in_set(&half) {
                        bad += 1;
                    }
                }
            }
            bad
        };
        assert!(violations(&lines_mask(0)) > 0, "Kirmse's collection is not an order");
        assert_eq!(violations(&lines_mask(CODE_SWAP)), 0);
    }

    #[test]
    fn octonion_algebra_basics() {
        // Alternative but non-associative; norm multiplicative.
        let e = IntegralOctonion::basis_unit;
        assert_eq!(e(1).mul(&e(2)), e(4));
        assert_eq!(e(2).mul(&e(1)), e(4).neg());
        assert_eq!(e(1).mul(&e(1)), IntegralOctonion::one().neg());
        // (e1 e2) e3 ≠ e1 (e2 e3): associativity fails somewhere.
        let assoc_fails = (1..8).any(|i| {
            (1..8).any(|j| {
                (1..8).any(|k| {
                    e(i).mul(&e(j)).mul(&e(k)) != e(i).mul(&e(j).mul(&e(k)))
                })
            })
        });
        assert!(assoc_fails);
        // Norm multiplicativity on sampled pairs.
        let units = enumerate_units().unwrap();
        for x in units.iter().step_by(17) {
            for y in units.iter().step_by(23) {
                assert_eq!(x.mul(y).norm4(), 4, "product of units is a unit");
            }
        }
    }

    #[test]
    fn unit_count_and_membership() {
        let units = enumerate_units().unwrap();
        assert_eq!(units.len(), 240);
        assert!(units.contains(&IntegralOctonion::one()));
        assert!(units.contains(&IntegralOctonion::one().neg()));
        for i in 0..8 {
            assert!(units.contains(&IntegralOctonion::basis_unit(i)));
            assert!(units.contains(&IntegralOctonion::basis_unit(i).neg()));
        }
        // Exactly 126 are trace-zero.
        assert_eq!(units.iter().filter(|u| u.trace() == 0).count(), 126);
    }

    #[test]
    fn automorphism_group_and_classes() {
        let group = enumerate_aut_group().unwrap();
        assert_eq!(group.len(), GAMMA_ORDER as usize);
        assert!(group.contains(&Automorphism::identity()));

        // Group axioms and multiplicativity on a deterministic sample.
        for (i, a) in group.iter().step_by(997).enumerate() {
            assert!(a.is_multiplicative(), "sample {i}");
            assert!(group.binary_search(&a.inverse()).is_ok());
            assert_eq!(a.compose(&a.inverse()), Automorphism::identity());
            for b in group.iter().step_by(1013) {
                assert!(group.binary_search(&a.compose(b)).is_ok());
            }
        }

        let classes = classify(&group).unwrap();
        assert_eq!(classes.iter().map(|c| c.size).sum::<u64>(), GAMMA_ORDER);
        // The identity class: size 1, order 1, trivial torus.
        assert_eq!(classes[0].order, 1);
        assert_eq!(classes[0].size, 1);
        assert_eq!(classes[0].torus, TorusElement::identity());
        // Orders divide the group order and class count is sane.
        for c in &classes {
            assert_eq!(GAMMA_ORDER % c.order, 0);
        }
        validate_classes(&classes).unwrap();

        // Eigenvalue consistency for every class: χ_{λ1}(torus) equals the
        // 7×7 trace read from the characteristic polynomial, via char_at.
        for (i, c) in classes.iter().enumerate() {
            let chi = char_at(&Weight::LAMBDA1, &c.torus).unwrap();
            let v = chi.to_rational_integer().unwrap();
            assert_eq!(v, BigInt::from(-c.charpoly7[6]), "class {i}");
        }

        // Invariant dimensions: the trivial rep has a one-dimensional
        // fixed space, the 7- and 14-dim reps have none, and the weight
        // 4β rep has exactly one invariant line.
        assert_eq!(invariant_dim(&Weight::ZERO, &classes).unwrap(), 1);
        assert_eq!(invariant_dim(&Weight::LAMBDA1, &classes).unwrap(), 0);
        assert_eq!(invariant_dim(&Weight::BETA, &classes).unwrap(), 0);
        assert_eq!(invariant_dim(&(Weight::BETA * 4), &classes).unwrap(), 1);
    }

    #[test]
    fn tampered_class_data_is_rejected() {
        let classes = builtin_classes().unwrap();

        let mut bad = classes.to_vec();
        bad[3].charpoly7[1] += 1;
        assert!(matches!(validate_classes(&bad), Err(Error::ClassDataInvalid(_))));

        let mut bad = classes.to_vec();
        bad[5].size += 12;
        assert!(matches!(validate_classes(&bad), Err(Error::ClassDataInvalid(_))));

        let mut bad = classes.to_vec();
        bad[8].torus = TorusElement::new(6, 0, 2);
        assert!(matches!(validate_classes(&bad), Err(Error::ClassDataInvalid(_))));

        assert!(matches!(validate_classes(&[]), Err(Error::ClassDataInvalid(_))));
    }

    #[test]
    fn burnside_check_on_builtin_classes() {
        // Σ size·χ_{λ1}(g)² = |Γ| · dim of the invariants of 7 ⊗ 7*, a
        // positive integer multiple of the group order. The χ values are
        // rational integers, read off the characteristic polynomials.
        let classes = builtin_classes().unwrap();
        let total: i64 = classes
            .iter()
            .map(|c| {
                let trace = -c.charpoly7[6];
                c.size as i64 * trace * trace
            })
            .sum();
        assert!(total > 0);
        assert_eq!(total % GAMMA_ORDER as i64, 0);
        // The multiple is 1: the 7-dim representation stays irreducible on Γ.
        assert_eq!(total / GAMMA_ORDER as i64, 1);
    }

    #[test]
    fn conjugation_and_norm() {
        // x · x̄ = N(x) · 1; in doubled coordinates the real slot is norm4/2.
        let units = enumerate_units().unwrap();
        for u in units.iter().step_by(7) {
            let n = u.mul(&u.conj());
            let mut expected = [0i64; 8];
            expected[0] = u.norm4() / 2;
            assert_eq!(n.v, expected);
        }
    }
}
