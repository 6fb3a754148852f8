//! Problem files: the JSON input format shared by every CLI command.
//!
//! Representation: [`ProblemFile`] mirrors the on-disk JSON exactly (exponent
//! rows plus rational coefficient strings); [`Problem`] is the validated form
//! with parsed block structure, the polynomial, an optional tail factor
//! raised to a power, and fully defaulted run options. A separate
//! [`ConeFile`] describes a rational cone with two integer gradings for the
//! series oracle.

use std::path::Path;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cone::ConeHRep;
use crate::error::{Error, Result};
use crate::linalg::{Int, Rat};
use crate::oracle::{is_prime, DEFAULT_BUDGET};
use crate::poly::{Dims, SparsePoly};

// --- on-disk schema ---

/// One monomial: exponent row (length = total variable count) and a nonzero
/// rational coefficient written as a string, e.g. `"1"`, `"-3"`, `"2/5"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub exp: Vec<u32>,
    pub coef: String,
}

/// Optional run options; every field has a default.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptionsSpec {
    /// Primes for point-count realizations.
    pub primes: Option<Vec<u64>>,
    /// Sample bound for lattice sweeps.
    pub bound: Option<u32>,
    /// Series truncation depth (powers of T).
    pub depth: Option<u32>,
    /// Exponent on the tail factor `h_terms`.
    #[serde(rename = "N")]
    pub tail_power: Option<u32>,
    /// Enumeration budget (elementary evaluations).
    pub budget: Option<u64>,
}

/// On-disk problem description. The polynomial is `terms`; when `h_terms`
/// is present the full input is `terms + (h_terms)^N` with `N` from options.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    /// Variable block sizes: `[n1, n2]` or `[d1, d2, d3]`.
    pub dims: Vec<usize>,
    pub terms: Vec<TermSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_terms: Option<Vec<TermSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<OptionsSpec>,
}

// --- validated form ---

/// Run options with every default applied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOptions {
    pub primes: Vec<u64>,
    pub bound: u32,
    pub depth: u32,
    pub budget: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { primes: vec![2, 3, 5, 7, 11], bound: 12, depth: 12, budget: DEFAULT_BUDGET }
    }
}

/// Validated problem: block structure, polynomial, optional tail factor.
#[derive(Debug, Clone)]
pub struct Problem {
    pub dims: Dims,
    /// The `terms` part alone.
    pub poly: SparsePoly,
    /// The `h_terms` part, if present (not yet raised to `tail_power`).
    pub tail: Option<SparsePoly>,
    pub tail_power: u32,
    pub options: RunOptions,
}

impl Problem {
    /// The polynomial the commands analyze: `terms + (h_terms)^N`.
    pub fn full_poly(&self) -> SparsePoly {
        match &self.tail {
            Some(t) => self.poly.add(&t.pow(self.tail_power)),
            None => self.poly.clone(),
        }
    }
}

/// Parses a rational coefficient string such as `"7"`, `"-2/3"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let t = s.trim();
    Rat::from_str(t).map_err(|_| Error::Parse(format!("bad rational coefficient '{s}'")))
}

fn terms_to_poly(n: usize, terms: &[TermSpec]) -> Result<SparsePoly> {
    let mut p = SparsePoly::zero(n);
    for t in terms {
        if t.exp.len() != n {
            return Err(Error::InvalidInput(format!(
                "term exponent length {} does not match dims total {n}",
                t.exp.len()
            )));
        }
        let c = parse_rat(&t.coef)?;
        if c.is_zero() {
            return Err(Error::InvalidInput(format!(
                "zero coefficient on term with exponent {:?}",
                t.exp
            )));
        }
        p.add_term(t.exp.clone(), c);
    }
    Ok(p)
}

impl ProblemFile {
    pub fn resolve(&self) -> Result<Problem> {
        let dims = Dims::new(self.dims.clone())?;
        let n = dims.n();
        let poly = terms_to_poly(n, &self.terms)?;
        let tail = match &self.h_terms {
            Some(ts) => {
                let t = terms_to_poly(n, ts)?;
                if t.is_zero() {
                    return Err(Error::InvalidInput("h_terms cancel to zero".into()));
                }
                Some(t)
            }
            None => None,
        };
        let spec = self.options.clone().unwrap_or_default();
        let mut options = RunOptions::default();
        if let Some(ps) = &spec.primes {
            if ps.is_empty() {
                return Err(Error::InvalidInput("prime list must be nonempty".into()));
            }
            for &q in ps {
                if !is_prime(q) {
                    return Err(Error::InvalidInput(format!("modulus {q} is not prime")));
                }
            }
            options.primes = ps.clone();
        }
        if let Some(b) = spec.bound {
            options.bound = b;
        }
        if let Some(d) = spec.depth {
            options.depth = d;
        }
        if let Some(b) = spec.budget {
            if b == 0 {
                return Err(Error::InvalidInput("budget must be positive".into()));
            }
            options.budget = b;
        }
        let tail_power = spec.tail_power.unwrap_or(1);
        if tail_power == 0 {
            return Err(Error::InvalidInput("N must be >= 1".into()));
        }
        if spec.tail_power.is_some() && tail.is_none() {
            return Err(Error::InvalidInput("option N given without h_terms".into()));
        }
        Ok(Problem { dims, poly, tail, tail_power, options })
    }
}

/// Loads and validates a problem file.
pub fn load_problem(path: &Path) -> Result<Problem> {
    let text = std::fs::read_to_string(path)?;
    let file: ProblemFile = serde_json::from_str(&text)?;
    file.resolve()
}

// --- cone files for the series oracle ---

/// On-disk cone description: H-form rows plus two integer gradings, all rows
/// of length `n`. Missing row lists default to empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeFile {
    pub n: usize,
    #[serde(default)]
    pub equalities: Vec<Vec<i64>>,
    #[serde(default)]
    pub weak: Vec<Vec<i64>>,
    #[serde(default)]
    pub strict: Vec<Vec<i64>>,
    /// Grading paired with T.
    pub l: Vec<i64>,
    /// Grading paired with L (negated in the exponent).
    pub lp: Vec<i64>,
}

fn int_rows(n: usize, rows: &[Vec<i64>], label: &str) -> Result<Vec<Vec<Int>>> {
    rows.iter()
        .map(|r| {
            if r.len() != n {
                return Err(Error::InvalidInput(format!(
                    "{label} row length {} does not match n = {n}",
                    r.len()
                )));
            }
            Ok(r.iter().map(|&x| Int::from(x)).collect())
        })
        .collect()
}

impl ConeFile {
    pub fn resolve(&self) -> Result<(ConeHRep, Vec<Int>, Vec<Int>)> {
        if self.n == 0 {
            return Err(Error::InvalidInput("cone dimension n must be >= 1".into()));
        }
        let mut cone = ConeHRep::new(self.n);
        cone.equalities = int_rows(self.n, &self.equalities, "equalities")?;
        cone.weak = int_rows(self.n, &self.weak, "weak")?;
        cone.strict = int_rows(self.n, &self.strict, "strict")?;
        let l = int_rows(self.n, std::slice::from_ref(&self.l), "l")?.pop().unwrap();
        let lp = int_rows(self.n, std::slice::from_ref(&self.lp), "lp")?.pop().unwrap();
        Ok((cone, l, lp))
    }
}

/// Loads and validates a cone file.
pub fn load_cone(path: &Path) -> Result<(ConeHRep, Vec<Int>, Vec<Int>)> {
    let text = std::fs::read_to_string(path)?;
    let file: ConeFile = serde_json::from_str(&text)?;
    file.resolve()
}
