//! Dimensions of spaces of level-1 cuspidal eigenforms.
//!
//! For the full modular group the dimension of the weight-k cusp space is
//! the classical closed form:
//!
//! ```text
//! S_k = 0                 if k < 2, k = 2, or k odd,
//!       ⌊k/12⌋ - 1        if k ≡ 2 (mod 12),
//!       ⌊k/12⌋            otherwise (k even).
//! ```
//!
//! Level 1 spaces have multiplicity-one Hecke action, so this is also the
//! number of normalized eigenforms. Negative k returns 0 rather than
//! erroring: callers compose this with arbitrary integer weight shifts.

/// Number of normalized cuspidal eigenforms of level 1 and weight k.
pub fn dim_cusp_forms(k: i64) -> u64 {
    if k < 4 || k % 2 != 0 {
        return 0;
    }
    let q = (k / 12) as u64;
    if k % 12 == 2 {
        q - 1
    } else {
        q
    }
}

/// Memoized dimension table for bulk queries.
pub struct CuspDimTable {
    dims: Vec<u64>,
}

impl CuspDimTable {
    pub fn up_to(max_k: i64) -> Self {
        let max = max_k.max(0) as usize;
        CuspDimTable { dims: (0..=max as i64).map(dim_cusp_forms).collect() }
    }

    pub fn get(&self, k: i64) -> u64 {
        if k < 0 {
            0
        } else {
            self.dims.get(k as usize).copied().unwrap_or_else(|| dim_cusp_forms(k))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_formula_cases() {
        assert_eq!(dim_cusp_forms(2), 0);
        assert_eq!(dim_cusp_forms(14), 0); // 14 ≡ 2 (mod 12): ⌊14/12⌋ - 1
        assert_eq!(dim_cusp_forms(12), 1);
        assert_eq!(dim_cusp_forms(24), 2);
        assert_eq!(dim_cusp_forms(36), 3);
        assert_eq!(dim_cusp_forms(0), 0);
        assert_eq!(dim_cusp_forms(-8), 0);
        for k in (1..200).step_by(2) {
            assert_eq!(dim_cusp_forms(k), 0);
        }
    }

    #[test]
    fn matches_classical_table() {
        // Independent hard-coded dimensions of the cusp spaces for the
        // full modular group, even weights 4..60.
        let classical: [(i64, u64); 29] = [
            (4, 0), (6, 0), (8, 0), (10, 0), (12, 1), (14, 0), (16, 1), (18, 1),
            (20, 1), (22, 1), (24, 2), (26, 1), (28, 2), (30, 2), (32, 2), (34, 2),
            (36, 3), (38, 2), (40, 3), (42, 3), (44, 3), (46, 3), (48, 4), (50, 3),
            (52, 4), (54, 4), (56, 4), (58, 4), (60, 5),
        ];
        for (k, expected) in classical {
            assert_eq!(dim_cusp_forms(k), expected, "k = {k}");
        }
    }

    #[test]
    fn periodic_growth() {
        for k in (4..200).step_by(2) {
            assert_eq!(dim_cusp_forms(k + 12), dim_cusp_forms(k) + 1, "k = {k}");
        }
    }

    #[test]
    fn table_agrees_with_function() {
        let table = CuspDimTable::up_to(100);
        for k in -5..=120 {
            assert_eq!(table.get(k), dim_cusp_forms(k));
        }
    }
}
