//! Command-line surface.
//!
//! Subcommands:
//! - `count --from K --to K [--format table|csv|json]`: per-weight counts.
//! - `invariant --weight A B`: dim V_λ^Γ for λ = Aε1 + Bε2.
//! - `classes --emit PATH | --verify`: regenerate or check the class datafile.
//! - `dims --weight A B`: Weyl dimension.
//! - `modforms --k K`: cusp-form dimension.
//! - `verify [--fixture PATH]`: diff computed counts against a fixture.
//! - `selftest`: run the internal consistency suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 internal consistency error. Output on stdout is byte-stable for
//! fixed flags; diagnostics go to stderr.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::counts;
use crate::cyclotomic::Cyclotomic;
use crate::endoscopy;
use crate::error::{Error, Result};
use crate::modforms::dim_cusp_forms;
use crate::octavians::{self, ConjClass};
use crate::rootlattice::{self, is_dominant_g2, pairing, Coweight, Weight, WeylGroup};
use crate::weylchar::{self, TorusElement};

#[derive(Parser)]
#[command(name = "g2quat", version, about = "Exact counts of level-1 quaternionic automorphic representations on G2")]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

#[derive(Args)]
struct DataOpts {
    /// Read conjugacy-class data from this file instead of the built-in copy.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Re-run the octonion oracle instead of reading cached class data.
    #[arg(long)]
    regenerate: bool,
}

impl DataOpts {
    fn load(&self) -> Result<Vec<ConjClass>> {
        if self.regenerate {
            let group = octavians::enumerate_aut_group()?;
            octavians::classify(&group)
        } else if let Some(path) = &self.data {
            octavians::read_classes(path)
        } else {
            octavians::builtin_classes().map(|c| c.to_vec())
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Count quaternionic representations for each weight in a range.
    Count {
        #[arg(long)]
        from: i64,
        #[arg(long)]
        to: i64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[command(flatten)]
        data: DataOpts,
    },
    /// Dimension of the Γ-invariant subspace of the irreducible with
    /// highest weight Aε1 + Bε2.
    Invariant {
        /// Weight coordinates A B (A + B must be even).
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        weight: Vec<i64>,
        #[command(flatten)]
        data: DataOpts,
    },
    /// Regenerate the conjugacy-class datafile, or verify it against a
    /// fresh enumeration.
    Classes {
        /// Write the regenerated datafile here.
        #[arg(long, conflicts_with = "verify")]
        emit: Option<PathBuf>,
        /// Re-enumerate and compare against the built-in datafile.
        #[arg(long)]
        verify: bool,
    },
    /// Weyl dimension of the irreducible with highest weight Aε1 + Bε2.
    Dims {
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        weight: Vec<i64>,
    },
    /// Number of level-1 cuspidal eigenforms of weight k.
    Modforms {
        #[arg(long)]
        k: i64,
    },
    /// Compare computed counts against a fixture file (default: the
    /// built-in reference table).
    Verify {
        #[arg(long)]
        fixture: Option<PathBuf>,
        #[command(flatten)]
        data: DataOpts,
    },
    /// Run every module's invariant suite.
    Selftest,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::WeightOutOfRange { .. }
        | Error::NonDominant(_)
        | Error::ModulusMismatch(..)
        | Error::FixtureMissing(_)
        | Error::FixtureMalformed(_)
        | Error::Io(_) => 2,
        Error::NonRational
        | Error::NonIntegral(_)
        | Error::OrderMismatch { .. }
        | Error::TruncationTooShort { .. }
        | Error::DeformationDegenerate
        | Error::BoundExceeded { .. }
        | Error::BadOrderData { .. }
        | Error::GroupSizeUnexpected { .. }
        | Error::TorusRecoveryFailed { .. }
        | Error::ClassDataInvalid(_) => 3,
    }
}

fn parse_weight(coords: &[i64]) -> Result<Weight> {
    if coords.len() != 2 || (coords[0] + coords[1]) % 2 != 0 {
        return Err(Error::WeightOutOfRange {
            k: coords.first().copied().unwrap_or(0),
            bound: "weight coordinates A B must satisfy A + B even",
        });
    }
    Ok(Weight::new(coords[0], coords[1]))
}

/// Parse argv and run; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap prints its own message; --help/--version exit cleanly.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(jobs) = cli.jobs {
        // Ignore failure: the global pool can only be installed once.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Count { from, to, format, data } => {
            let classes = data.load()?;
            let reports = counts::count_range(from, to, &classes)?;
            let rendered = match format {
                Format::Table => counts::render_table(&reports),
                Format::Csv => counts::render_csv(&reports),
                Format::Json => counts::render_json(&reports),
            };
            print!("{rendered}");
            Ok(0)
        }
        Command::Invariant { weight, data } => {
            let lambda = parse_weight(&weight)?;
            let classes = data.load()?;
            println!("{}", octavians::invariant_dim(&lambda, &classes)?);
            Ok(0)
        }
        Command::Classes { emit, verify } => {
            if !verify && emit.is_none() {
                eprintln!("error: classes needs either --emit PATH or --verify");
                return Ok(2);
            }
            let group = octavians::enumerate_aut_group()?;
            let classes = octavians::classify(&group)?;
            octavians::validate_classes(&classes)?;
            if let Some(path) = emit {
                octavians::write_classes(&path, &classes)?;
                eprintln!("wrote {} classes to {}", classes.len(), path.display());
                return Ok(0);
            }
            // --verify: compare against the built-in datafile.
            let builtin = octavians::builtin_classes()?;
            if builtin == classes.as_slice() {
                println!("class data verified: {} classes, group order {}", classes.len(), octavians::GAMMA_ORDER);
                Ok(0)
            } else {
                println!("class data MISMATCH against built-in datafile");
                Ok(1)
            }
        }
        Command::Dims { weight } => {
            let lambda = parse_weight(&weight)?;
            println!("{}", weylchar::weyl_dim(&lambda)?);
            Ok(0)
        }
        Command::Modforms { k } => {
            println!("{}", dim_cusp_forms(k));
            Ok(0)
        }
        Command::Verify { fixture, data } => {
            let classes = data.load()?;
            let check = match fixture {
                Some(path) => counts::verify_fixture_path(&path, &classes)?,
                None => counts::verify_fixture(&counts::builtin_fixture()?, &classes)?,
            };
            if check.passed() {
                println!("fixture verified: {} entries match", check.entries);
                Ok(0)
            } else {
                println!("fixture mismatches ({} of {} entries):", check.mismatches.len(), check.entries);
                for m in &check.mismatches {
                    println!("  k = {}: fixture {} vs computed {}", m.k, m.fixture, m.computed);
                }
                Ok(1)
            }
        }
        Command::Selftest => selftest(),
    }
}

// ---------------------------------------------------------------------------
// selftest

type Check = (&'static str, fn() -> std::result::Result<(), String>);

fn selftest() -> Result<i32> {
    let checks: &[Check] = &[
        ("root lattice identities", check_root_lattice),
        ("cyclotomic arithmetic", check_cyclotomic),
        ("modular form dimensions", check_modforms),
        ("endoscopic correction", check_endoscopy),
        ("satake fibers", check_fibers),
        ("class data consistency", check_class_data),
        ("character engine vs multiplicity oracle", check_characters),
        ("invariant dimension properties", check_invariant_dims),
        ("reference table", check_fixture),
    ];
    let mut failures = 0;
    for (name, f) in checks {
        match f() {
            Ok(()) => println!("ok   {name}"),
            Err(msg) => {
                failures += 1;
                println!("FAIL {name}: {msg}");
            }
        }
    }
    if failures == 0 {
        println!("selftest passed ({} suites)", checks.len());
        Ok(0)
    } else {
        println!("selftest FAILED ({failures} suites)");
        Ok(1)
    }
}

fn err(msg: String) -> std::result::Result<(), String> {
    Err(msg)
}

fn check_root_lattice() -> std::result::Result<(), String> {
    let g = WeylGroup::g2();
    if g.elements().len() != 12 {
        return err(format!("Weyl group order {}", g.elements().len()));
    }
    if rootlattice::rho_from_positive_roots() != Weight::RHO_G {
        return err("ρ is not half the positive-root sum".into());
    }
    for (root, coroot) in &rootlattice::POSITIVE_ROOTS {
        if pairing(root, coroot) != 2 {
            return err(format!("⟨α, α∨⟩ ≠ 2 at {root:?}"));
        }
    }
    let table = [
        (Weight::TWO_EPS1, Coweight::ALPHA1_CHECK, -1),
        (Weight::TWO_EPS2, Coweight::ALPHA1_CHECK, 3),
        (Weight::TWO_EPS1, Coweight::ALPHA2_CHECK, 1),
        (Weight::TWO_EPS2, Coweight::ALPHA2_CHECK, -1),
    ];
    for (w, cw, expect) in table {
        if pairing(&w, &cw) != expect {
            return err(format!("pairing table failure at {w:?}"));
        }
    }
    for k in 2..=100 {
        if rootlattice::minimal_k_type(k) != Ok(Weight::new(0, 2 * k)) {
            return err(format!("minimal K-type at k = {k}"));
        }
    }
    for k in 3..=200 {
        let expect = [
            Weight::new(3 * k - 3, k - 1),
            Weight::new(3 * k - 2, k - 2),
            Weight::new(0, 2 * k - 2),
        ];
        if rootlattice::transfer_weights(k) != Ok(expect) {
            return err(format!("transfer weights at k = {k}"));
        }
    }
    Ok(())
}

fn check_cyclotomic() -> std::result::Result<(), String> {
    if !Cyclotomic::root(4, 2).add(&Cyclotomic::one(4)).is_zero() {
        return err("ζ4² ≠ -1".into());
    }
    let s = Cyclotomic::root(6, 1).add(&Cyclotomic::root(6, 5));
    if s.to_rational_integer() != Ok(1.into()) {
        return err("ζ6 + ζ6⁻¹ ≠ 1".into());
    }
    for n in [8u64, 12, 24] {
        let x = Cyclotomic::root(n, 1).add(&Cyclotomic::from_integer(n, 2));
        if !x.mul(&x.inv()).is_one() {
            return err(format!("x·x⁻¹ ≠ 1 in ℚ(ζ{n})"));
        }
    }
    Ok(())
}

fn check_modforms() -> std::result::Result<(), String> {
    let classical: [(i64, u64); 8] =
        [(12, 1), (14, 0), (16, 1), (26, 1), (36, 3), (38, 2), (50, 3), (60, 5)];
    for (k, d) in classical {
        if dim_cusp_forms(k) != d {
            return err(format!("S_{k} ≠ {d}"));
        }
    }
    for k in (4..200).step_by(2) {
        if dim_cusp_forms(k + 12) != dim_cusp_forms(k) + 1 {
            return err(format!("growth failure at k = {k}"));
        }
    }
    Ok(())
}

fn check_endoscopy() -> std::result::Result<(), String> {
    for k in 3..=240 {
        let c = endoscopy::correction(k).map_err(|e| e.to_string())?;
        let p = endoscopy::correction_piecewise(k).map_err(|e| e.to_string())?;
        if c != p {
            return err(format!("correction mismatch at k = {k}: {c} vs {p}"));
        }
        if (k % 2 == 0 && c < 0) || (k % 2 == 1 && c > 0) {
            return err(format!("sign dichotomy fails at k = {k}"));
        }
    }
    for k in 3..=50 {
        let combo = endoscopy::transfer_weight_signs(k)
            .map_err(|e| e.to_string())?
            .correction_combination();
        let [w1, w2, w3] = rootlattice::transfer_weights(k).map_err(|e| e.to_string())?;
        let minus_one = num_rational::Ratio::new(-1, 1);
        let plus_one = num_rational::Ratio::new(1, 1);
        if combo.get(&w1) != Some(&minus_one)
            || combo.get(&w2) != Some(&plus_one)
            || combo.contains_key(&w3)
        {
            return err(format!("transfer cancellation fails at k = {k}"));
        }
    }
    Ok(())
}

fn check_fibers() -> std::result::Result<(), String> {
    let trivial = endoscopy::G2Class::new(&TorusElement::identity());
    if endoscopy::fiber(&trivial).len() != 1 {
        return err("trivial fiber is not a singleton".into());
    }
    for n in 1..=6u64 {
        for c in 0..(2 * n as i64) {
            for d in 0..(2 * n as i64) {
                if (c + d) % 2 != 0 {
                    continue;
                }
                let t = TorusElement::new(n, c, d);
                let g = endoscopy::G2Class::new(&t);
                let f = endoscopy::fiber(&g);
                if f.len() > 3 {
                    return err(format!("fiber size {} at {t:?}", f.len()));
                }
                if (f.len() == 3) != g.is_regular() {
                    return err(format!("fiber size 3 ⟺ regular fails at {t:?}"));
                }
            }
        }
    }
    Ok(())
}

fn check_class_data() -> std::result::Result<(), String> {
    let classes = octavians::builtin_classes().map_err(|e| e.to_string())?;
    octavians::validate_classes(classes).map_err(|e| e.to_string())?;
    for (i, c) in classes.iter().enumerate() {
        let chi = weylchar::char_at(&Weight::LAMBDA1, &c.torus)
            .and_then(|v| v.to_rational_integer())
            .map_err(|e| e.to_string())?;
        if chi != (-c.charpoly7[6]).into() {
            return err(format!("χ_λ1 ≠ trace at class {i}"));
        }
    }
    Ok(())
}

fn check_characters() -> std::result::Result<(), String> {
    let classes = octavians::builtin_classes().map_err(|e| e.to_string())?;
    // χ at the identity equals the dimension for 50 dominant weights.
    let mut count = 0;
    let id = TorusElement::identity();
    'outer: for a in 0..=16i64 {
        for b in 0..=a {
            if (a + b) % 2 != 0 {
                continue;
            }
            let lambda = Weight::new(a, b);
            if !is_dominant_g2(&lambda) {
                continue;
            }
            let chi = weylchar::char_at(&lambda, &id)
                .and_then(|v| v.to_rational_integer())
                .map_err(|e| e.to_string())?;
            if chi != weylchar::weyl_dim(&lambda).map_err(|e| e.to_string())?.into() {
                return err(format!("χ(1) ≠ dim at {lambda:?}"));
            }
            count += 1;
            if count == 50 {
                break 'outer;
            }
        }
    }
    // Weight-sum route agrees with the alternating-sum route on all class
    // representatives for every dominant λ with dim ≤ 10^4 (largest
    // qualifying coordinate is a = 21, at λ = (21, 7)).
    for a in 0..=21i64 {
        for b in 0..=21i64 {
            if (a + b) % 2 != 0 {
                continue;
            }
            let lambda = Weight::new(a, b);
            if !is_dominant_g2(&lambda) {
                continue;
            }
            if weylchar::weyl_dim(&lambda).map_err(|e| e.to_string())? > 10_000 {
                continue;
            }
            let table = weylchar::freudenthal_multiplicities(&lambda).map_err(|e| e.to_string())?;
            for class in classes {
                let direct = weylchar::char_from_weight_table(&table, &class.torus);
                let formula = weylchar::char_at(&lambda, &class.torus).map_err(|e| e.to_string())?;
                if direct != formula {
                    return err(format!("character routes disagree at {lambda:?}, {:?}", class.torus));
                }
            }
        }
    }
    Ok(())
}

fn check_invariant_dims() -> std::result::Result<(), String> {
    let classes = octavians::builtin_classes().map_err(|e| e.to_string())?;
    if octavians::invariant_dim(&Weight::ZERO, classes) != Ok(1) {
        return err("trivial representation must have a 1-dim fixed space".into());
    }
    // 100 deterministic pseudo-random dominant weights: the invariant
    // dimension must come back a non-negative integer.
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let mut tried = 0;
    while tried < 100 {
        let a = (next() % 40) as i64;
        let b = (next() % 40) as i64;
        if (a + b) % 2 != 0 {
            continue;
        }
        let lambda = Weight::new(a, b);
        if !is_dominant_g2(&lambda) {
            continue;
        }
        octavians::invariant_dim(&lambda, classes).map_err(|e| format!("{lambda:?}: {e}"))?;
        tried += 1;
    }
    Ok(())
}

fn check_fixture() -> std::result::Result<(), String> {
    let classes = octavians::builtin_classes().map_err(|e| e.to_string())?;
    let fixture = counts::builtin_fixture().map_err(|e| e.to_string())?;
    let check = counts::verify_fixture(&fixture, classes).map_err(|e| e.to_string())?;
    if !check.passed() {
        return err(format!("{} mismatches", check.mismatches.len()));
    }
    Ok(())
}
