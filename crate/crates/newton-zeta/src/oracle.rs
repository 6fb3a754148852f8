//! Brute-force oracles: direct finite-field enumeration and direct
//! lattice-point enumeration.
//!
//! Everything in this module is deliberately naive. These functions are the
//! independent side of every dual-route check: they never consult face
//! lattices, cone decompositions, or closed forms. Enumeration order is
//! always the odometer with the last index moving fastest, so results and
//! reported witnesses are deterministic.

use std::collections::BTreeMap;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::cone::ConeHRep;
use crate::error::{Error, Result};
use crate::linalg::{dot, Int};
use crate::poly::SparsePoly;

/// Default enumeration budget (number of tuples or evaluations).
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Trial-division primality for the small moduli used in counts.
pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

// --- torus point counts ---

fn torus_points(n: usize, q: u64, budget: u64, mut visit: impl FnMut(&[u64])) -> Result<()> {
    let size = (q - 1).checked_pow(n as u32).filter(|&s| s <= budget);
    if size.is_none() {
        return Err(Error::Budget(format!(
            "torus enumeration ({}-1)^{} exceeds budget {}",
            q, n, budget
        )));
    }
    let mut point = vec![1u64; n];
    loop {
        visit(&point);
        // Advance, last coordinate fastest.
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            point[i] += 1;
            if point[i] < q {
                break;
            }
            point[i] = 1;
        }
    }
}

/// Fiber counts `#{xi in (F_q^*)^n : g(xi) = t}` for t = 1..q-1 (index t-1).
pub fn count_torus_fiber(g: &SparsePoly, q: u64, budget: u64) -> Result<Vec<u64>> {
    let mut counts = vec![0u64; (q - 1) as usize];
    let mut err = None;
    torus_points(g.n, q, budget, |p| {
        if err.is_some() {
            return;
        }
        match g.eval_mod_q(p, q) {
            Ok(v) => {
                if v != 0 {
                    counts[(v - 1) as usize] += 1;
                }
            }
            Err(e) => err = Some(e),
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(counts)
}

/// `#{xi in (F_q^*)^n : g(xi) = 0}`.
pub fn count_torus_zero(g: &SparsePoly, q: u64, budget: u64) -> Result<u64> {
    let mut count = 0u64;
    let mut err = None;
    torus_points(g.n, q, budget, |p| {
        if err.is_some() {
            return;
        }
        match g.eval_mod_q(p, q) {
            Ok(0) => count += 1,
            Ok(_) => {}
            Err(e) => err = Some(e),
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(count)
}

// --- truncated jet counts ---

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetCount {
    /// Tuples whose value has order exactly m, bucketed by the t^m
    /// coefficient (index t-1 for t = 1..q-1).
    pub per_t: Vec<u64>,
    pub total: u64,
}

/// Counts truncated jets `x_i(t) = sum_{j=a_i}^m c_{i,j} t^j` with
/// `c_{i,a_i} != 0` such that `ord_t g(x(t)) = m`, bucketed by the leading
/// coefficient. Empty (all-zero counts) when some `a_i > m`.
pub fn jet_count(g: &SparsePoly, a: &[u32], m: u32, q: u64, budget: u64) -> Result<JetCount> {
    let n = g.n;
    if a.len() != n {
        return Err(Error::InvalidInput(format!(
            "order vector has length {}, polynomial has {} variables",
            a.len(),
            n
        )));
    }
    let per_t_len = (q - 1) as usize;
    if a.iter().any(|&ai| ai > m) {
        return Ok(JetCount { per_t: vec![0; per_t_len], total: 0 });
    }
    // Tuple count: prod_i (q-1) q^(m - a_i).
    let mut size: u128 = 1;
    for &ai in a {
        size = size.saturating_mul((q - 1) as u128);
        size = size.saturating_mul((q as u128).saturating_pow(m - ai));
    }
    if size > budget as u128 {
        return Err(Error::Budget(format!(
            "jet enumeration of {} tuples exceeds budget {}",
            size, budget
        )));
    }

    // Slot table: (variable, degree). The leading slot of each variable is
    // the first one listed; it ranges over 1..q-1, the rest over 0..q-1.
    let mut slots: Vec<(usize, u32)> = Vec::new();
    for i in 0..n {
        for j in a[i]..=m {
            slots.push((i, j));
        }
    }
    let len = (m + 1) as usize;
    // Truncated power series of each variable, coefficients in F_q.
    let mut series: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut s = vec![0u64; len];
            s[a[i] as usize] = 1;
            s
        })
        .collect();
    // Cache of truncated powers per variable, rebuilt when its series
    // changes.
    let max_pow: Vec<u32> = (0..n)
        .map(|i| g.terms.keys().map(|e| e[i]).max().unwrap_or(0))
        .collect();
    let mut powers: Vec<Vec<Vec<u64>>> = vec![Vec::new(); n];
    let mut dirty = vec![true; n];

    // Monomial table with coefficients reduced mod q.
    let mut monomials: Vec<(Vec<u32>, u64)> = Vec::new();
    for (exp, coef) in &g.terms {
        monomials.push((exp.clone(), crate::poly::coef_mod_q(coef, q)?));
    }

    let mut per_t = vec![0u64; per_t_len];
    let mut total = 0u64;
    let mut values: Vec<u64> = slots
        .iter()
        .enumerate()
        .map(|(s, _)| if is_lead(&slots, s) { 1 } else { 0 })
        .collect();
    loop {
        // Evaluate g at the current jet.
        for i in 0..n {
            if dirty[i] {
                rebuild_powers(&mut powers[i], &series[i], max_pow[i], len, q);
                dirty[i] = false;
            }
        }
        let mut acc = vec![0u64; len];
        for (exp, coef) in &monomials {
            let mut prod: Option<Vec<u64>> = None;
            for i in 0..n {
                if exp[i] == 0 {
                    continue;
                }
                let factor = &powers[i][exp[i] as usize];
                prod = Some(match prod {
                    None => factor.clone(),
                    Some(p) => mul_trunc(&p, factor, len, q),
                });
            }
            let term = prod.expect("monomials of a polynomial vanishing at 0 are nonconstant");
            for (d, c) in term.iter().enumerate() {
                acc[d] = (acc[d] + coef * c) % q;
            }
        }
        if acc[..m as usize].iter().all(|&c| c == 0) && acc[m as usize] != 0 {
            per_t[(acc[m as usize] - 1) as usize] += 1;
            total += 1;
        }

        // Advance the odometer, last slot fastest.
        let mut s = slots.len();
        loop {
            if s == 0 {
                return Ok(JetCount { per_t, total });
            }
            s -= 1;
            let (var, deg) = slots[s];
            let lead = is_lead(&slots, s);
            values[s] += 1;
            if values[s] < q {
                series[var][deg as usize] = values[s];
                dirty[var] = true;
                break;
            }
            values[s] = if lead { 1 } else { 0 };
            series[var][deg as usize] = values[s];
            dirty[var] = true;
        }
    }
}

fn is_lead(slots: &[(usize, u32)], s: usize) -> bool {
    s == 0 || slots[s - 1].0 != slots[s].0
}

fn rebuild_powers(cache: &mut Vec<Vec<u64>>, series: &[u64], max_pow: u32, len: usize, q: u64) {
    cache.clear();
    let mut one = vec![0u64; len];
    one[0] = 1;
    cache.push(one);
    for e in 1..=max_pow {
        let next = mul_trunc(&cache[(e - 1) as usize], series, len, q);
        cache.push(next);
    }
}

fn mul_trunc(a: &[u64], b: &[u64], len: usize, q: u64) -> Vec<u64> {
    let mut out = vec![0u64; len];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if i + j >= len {
                break;
            }
            if bj != 0 {
                out[i + j] = (out[i + j] + ai * bj) % q;
            }
        }
    }
    out
}

// --- lattice point enumeration for series coefficients ---

/// Coefficients of T^1..T^k_max of `sum_{a} L^{-l'(a)} T^{l(a)}` over the
/// lattice points of the relatively open cone, by direct enumeration of the
/// box [0, k_max]^n.
///
/// `l_vec` and `lp_vec` are the linear forms l and l' as integer rows;
/// `l_attained` lists extra vectors w with `<w, a> = l(a)` on the cone
/// (vertices of the minimizing face, in engine use). The box is a complete
/// enumeration domain only under conditions checked here: every coordinate
/// must be syntactically pinned (a_j = 0 equality), nonnegative
/// (e_j among weak or strict rows), and bounded by l (positive l
/// coefficient, an `l - e_j` weak row, or an attaining vector with positive
/// j-th entry).
pub fn series_coeff_brute(
    cone: &ConeHRep,
    l_vec: &[Int],
    lp_vec: &[Int],
    k_max: u32,
    l_attained: &[Vec<Int>],
    budget: u64,
) -> Result<Vec<BTreeMap<i64, Int>>> {
    let n = cone.n;
    let e_row = |j: usize| {
        let mut r = vec![Int::zero(); n];
        r[j] = Int::from(1);
        r
    };
    for j in 0..n {
        let ej = e_row(j);
        let pinned_zero = cone.equalities.iter().any(|r| r == &ej);
        let nonneg = pinned_zero
            || cone.weak.iter().any(|r| r == &ej)
            || cone.strict.iter().any(|r| r == &ej);
        if !nonneg {
            return Err(Error::InvalidInput(format!(
                "brute series enumeration requires coordinate {} to be signed by the cone",
                j
            )));
        }
        let binding_row: Vec<Int> = l_vec
            .iter()
            .enumerate()
            .map(|(i, c)| if i == j { c - Int::from(1) } else { c.clone() })
            .collect();
        let bounded = pinned_zero
            || l_vec[j].is_positive()
            || cone.weak.iter().any(|r| r == &binding_row)
            || l_attained.iter().any(|w| w[j].is_positive());
        if !bounded {
            return Err(Error::InvalidInput(format!(
                "brute series enumeration cannot bound coordinate {} by the T-grading",
                j
            )));
        }
    }
    let size = ((k_max as u128) + 1).checked_pow(n as u32);
    if size.map(|s| s > budget as u128).unwrap_or(true) {
        return Err(Error::Budget(format!(
            "lattice enumeration of ({}+1)^{} points exceeds budget {}",
            k_max, n, budget
        )));
    }

    let mut out: Vec<BTreeMap<i64, Int>> = vec![BTreeMap::new(); k_max as usize];
    let mut point = vec![Int::zero(); n];
    loop {
        if cone.contains_relopen(&point) {
            let l = dot(l_vec, &point);
            if l.is_positive() {
                if let Some(k) = l.to_u32().filter(|&k| k <= k_max) {
                    let lp = dot(lp_vec, &point)
                        .to_i64()
                        .expect("l' value fits in i64");
                    let entry = out[(k - 1) as usize].entry(-lp).or_insert_with(Int::zero);
                    *entry += 1;
                }
            }
        }
        // Advance, last coordinate fastest.
        let mut i = n;
        loop {
            if i == 0 {
                for m in out.iter_mut() {
                    m.retain(|_, v| !v.is_zero());
                }
                return Ok(out);
            }
            i -= 1;
            point[i] += 1;
            if point[i] <= Int::from(k_max) {
                break;
            }
            point[i] = Int::zero();
        }
    }
}

// --- nondegeneracy probe ---

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeWitness {
    pub face_index: usize,
    pub q: u64,
    pub point: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeOutcome {
    /// First singular torus point of a face polynomial found, if any.
    pub falsified: Option<ProbeWitness>,
    /// Primes actually checked.
    pub checked: Vec<u64>,
    /// Primes skipped because a coefficient denominator vanishes there.
    pub skipped: Vec<u64>,
    pub evaluations: u64,
}

/// Searches for singular points of the given face polynomials on the torus
/// over each prime. Finding one falsifies nondegeneracy over that prime
/// (which is evidence, not a characteristic-zero proof either way).
pub fn nondegeneracy_probe(
    g: &SparsePoly,
    face_polys: &[SparsePoly],
    primes: &[u64],
    budget: u64,
) -> Result<ProbeOutcome> {
    let n = g.n;
    let mut outcome =
        ProbeOutcome { falsified: None, checked: Vec::new(), skipped: Vec::new(), evaluations: 0 };
    let faces_with_partials: Vec<(usize, &SparsePoly, Vec<SparsePoly>)> = face_polys
        .iter()
        .enumerate()
        .map(|(idx, f)| (idx, f, (0..n).map(|i| f.partial(i)).collect()))
        .collect();
    'primes: for &q in primes {
        let denominator_ok = g
            .terms
            .values()
            .all(|c| crate::poly::coef_mod_q(c, q).is_ok());
        if !denominator_ok {
            outcome.skipped.push(q);
            continue;
        }
        let mut found: Option<ProbeWitness> = None;
        let mut evals = 0u64;
        let mut over = false;
        torus_points(n, q, budget.saturating_sub(outcome.evaluations), |p| {
            if found.is_some() || over {
                return;
            }
            for (idx, f, partials) in &faces_with_partials {
                evals += 1;
                if evals > budget {
                    over = true;
                    return;
                }
                let fv = f.eval_mod_q(p, q).expect("denominators checked above");
                if fv != 0 {
                    continue;
                }
                let singular = partials
                    .iter()
                    .all(|pf| pf.eval_mod_q(p, q).expect("denominators checked above") == 0);
                if singular {
                    found = Some(ProbeWitness { face_index: *idx, q, point: p.to_vec() });
                    return;
                }
            }
        })?;
        outcome.evaluations += evals;
        if over {
            return Err(Error::Budget(format!(
                "nondegeneracy probe exceeded budget {} at q = {}",
                budget, q
            )));
        }
        outcome.checked.push(q);
        if found.is_some() {
            outcome.falsified = found;
            break 'primes;
        }
    }
    Ok(outcome)
}

// --- tests ---
