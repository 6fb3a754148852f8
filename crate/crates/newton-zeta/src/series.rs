//! Rational-function series supported on products of geometric factors.
//!
//! A series here is a finite sum of terms `c * prod_j p(e_j, i_j)` where
//! `c` is a Laurent polynomial in `L`, each factor `p(e, i)` expands as
//! `sum_{m >= 1} L^{m e} T^{m i}` (so `p(e, i) = L^e T^i / (1 - L^e T^i)`),
//! exponents satisfy `e <= -1` and `i >= 1`, and the factor multiset is the
//! canonical key of the term. The limit functional sends each factor to
//! `-1`; it is exact on this representation and additive.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cone::{decompose_open, relopen_info, ConeHRep};
use crate::error::{Error, Result};
use crate::linalg::{dot, Int};

// --- Laurent polynomials in L ---

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct LaurentL {
    terms: BTreeMap<i64, Int>,
}

impl LaurentL {
    pub fn zero() -> Self {
        LaurentL::default()
    }

    pub fn one() -> Self {
        LaurentL::from_term(0, Int::one())
    }

    pub fn from_term(exp: i64, coef: Int) -> Self {
        let mut t = BTreeMap::new();
        if !coef.is_zero() {
            t.insert(exp, coef);
        }
        LaurentL { terms: t }
    }

    pub fn from_map(map: BTreeMap<i64, Int>) -> Self {
        let mut l = LaurentL { terms: map };
        l.terms.retain(|_, v| !v.is_zero());
        l
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<i64, Int> {
        &self.terms
    }

    pub fn add_term(&mut self, exp: i64, coef: &Int) {
        if coef.is_zero() {
            return;
        }
        let e = self.terms.entry(exp).or_insert_with(Int::zero);
        *e += coef;
        if e.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn add(&self, other: &LaurentL) -> LaurentL {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c);
        }
        out
    }

    pub fn neg(&self) -> LaurentL {
        LaurentL {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &LaurentL) -> LaurentL {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &LaurentL) -> LaurentL {
        let mut out = LaurentL::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1 + e2, &(c1 * c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &Int) -> LaurentL {
        if c.is_zero() {
            return LaurentL::zero();
        }
        LaurentL {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Multiplication by `L^k`.
    pub fn shift(&self, k: i64) -> LaurentL {
        LaurentL {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Value at `L = q`, as an exact rational (negative exponents allowed).
    pub fn eval_at(&self, q: &crate::linalg::Rat) -> crate::linalg::Rat {
        let mut acc = crate::linalg::Rat::zero();
        for (e, c) in &self.terms {
            let mut p = crate::linalg::Rat::one();
            for _ in 0..e.unsigned_abs() {
                p *= q;
            }
            if *e < 0 {
                p = p.recip();
            }
            acc += crate::linalg::Rat::from_integer(c.clone()) * p;
        }
        acc
    }
}

impl fmt::Display for LaurentL {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            if idx == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
            }
            let unit_coef = mag.is_one();
            match (*e, unit_coef) {
                (0, _) => write!(f, "{}", mag)?,
                (1, true) => write!(f, "L")?,
                (1, false) => write!(f, "{}*L", mag)?,
                (_, true) => write!(f, "L^{}", e)?,
                (_, false) => write!(f, "{}*L^{}", mag, e)?,
            }
        }
        Ok(())
    }
}

// --- geometric-factor series ---

/// Canonical factor multiset: sorted pairs `(e, i)` with repetition.
pub type FactorKey = Vec<(i64, u32)>;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SrSeries {
    terms: BTreeMap<FactorKey, LaurentL>,
}

impl SrSeries {
    pub fn zero() -> Self {
        SrSeries::default()
    }

    pub fn term(key: FactorKey, coef: LaurentL) -> Self {
        let mut s = SrSeries::zero();
        s.add_assign_term(key, &coef);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<FactorKey, LaurentL> {
        &self.terms
    }

    pub fn add_assign_term(&mut self, mut key: FactorKey, coef: &LaurentL) {
        if coef.is_zero() {
            return;
        }
        key.sort_unstable();
        let slot = self.terms.entry(key).or_insert_with(LaurentL::zero);
        *slot = slot.add(coef);
        if slot.is_zero() {
            let key: Vec<_> = self
                .terms
                .iter()
                .filter(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn add(&self, other: &SrSeries) -> SrSeries {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_assign_term(k.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> SrSeries {
        SrSeries {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &SrSeries) -> SrSeries {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &LaurentL) -> SrSeries {
        let mut out = SrSeries::zero();
        for (k, v) in &self.terms {
            out.add_assign_term(k.clone(), &v.mul(c));
        }
        out
    }

    /// Multiplication by one geometric factor `p(e, i)`.
    pub fn mul_geometric(&self, e: i64, i: u32) -> Result<SrSeries> {
        if e > -1 || i < 1 {
            return Err(Error::InvalidInput(format!(
                "geometric factor p({e},{i}) out of range (need e <= -1, i >= 1)"
            )));
        }
        let mut out = SrSeries::zero();
        for (k, v) in &self.terms {
            let mut key = k.clone();
            key.push((e, i));
            out.add_assign_term(key, v);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &SrSeries) -> SrSeries {
        let mut out = SrSeries::zero();
        for (k1, v1) in &self.terms {
            for (k2, v2) in &other.terms {
                let mut key = k1.clone();
                key.extend_from_slice(k2);
                out.add_assign_term(key, &v1.mul(v2));
            }
        }
        out
    }

    /// The limit functional: every factor goes to -1.
    pub fn limit(&self) -> LaurentL {
        let mut out = LaurentL::zero();
        for (k, v) in &self.terms {
            let signed = if k.len() % 2 == 0 { v.clone() } else { v.neg() };
            out = out.add(&signed);
        }
        out
    }

    /// Coefficients of `T^0..T^k_max` of the expanded series.
    pub fn expand_to(&self, k_max: u32) -> Vec<LaurentL> {
        let len = (k_max + 1) as usize;
        let mut out = vec![LaurentL::zero(); len];
        for (key, coef) in &self.terms {
            // poly[t] = Laurent coefficient of T^t of the factor product.
            let mut poly = vec![LaurentL::zero(); len];
            poly[0] = LaurentL::one();
            for &(e, i) in key {
                let mut next = vec![LaurentL::zero(); len];
                for t in 0..len {
                    if poly[t].is_zero() {
                        continue;
                    }
                    let mut c = 1u32;
                    while t + ((c * i) as usize) < len {
                        let shifted = poly[t].shift(c as i64 * e);
                        next[t + (c * i) as usize] = next[t + (c * i) as usize].add(&shifted);
                        c += 1;
                    }
                }
                poly = next;
            }
            for (t, p) in poly.into_iter().enumerate() {
                if !p.is_zero() {
                    out[t] = out[t].add(&p.mul(coef));
                }
            }
        }
        out
    }
}

impl fmt::Display for SrSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (key, coef)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})", coef)?;
            for (e, i) in key {
                write!(f, "*p({},{})", e, i)?;
            }
        }
        Ok(())
    }
}

// --- cone series ---

/// Generating series `sum_{a in cone} L^{-l'(a)} T^{l(a)}` over the lattice
/// points of the relatively open (possibly half-open) cone, as a sum of
/// geometric-factor products via unimodular decomposition. Requires `l` and
/// `l'` to be strictly positive on the closure minus the origin (checked on
/// every piece generator).
pub fn cone_series(cone: &ConeHRep, l_vec: &[Int], lp_vec: &[Int]) -> Result<SrSeries> {
    let pieces = decompose_open(cone)?;
    let mut out = SrSeries::zero();
    for piece in &pieces {
        let mut key: FactorKey = Vec::with_capacity(piece.gens.len());
        for b in &piece.gens {
            let i = dot(l_vec, b);
            let e = dot(lp_vec, b);
            if !i.is_positive() || !e.is_positive() {
                return Err(Error::Hypothesis(format!(
                    "grading not positive on cone generator {:?} (l = {}, l' = {})",
                    b, i, e
                )));
            }
            let i = i.to_u32().ok_or_else(|| {
                Error::InvalidInput("T-grading value exceeds u32 on a generator".into())
            })?;
            let e = e.to_i64().ok_or_else(|| {
                Error::InvalidInput("L-grading value exceeds i64 on a generator".into())
            })?;
            key.push((-e, i));
        }
        out.add_assign_term(key, &LaurentL::one());
    }
    Ok(out)
}

/// Limit of the cone series. For a genuinely relatively open cone (no weak
/// rows) the limit must be `(-1)^dim`; a mismatch is a hard internal error.
pub fn open_cone_limit(cone: &ConeHRep, l_vec: &[Int], lp_vec: &[Int]) -> Result<LaurentL> {
    let series = cone_series(cone, l_vec, lp_vec)?;
    let lim = series.limit();
    if cone.weak.is_empty() {
        let info = relopen_info(cone)?;
        if !info.empty {
            let expected = if info.dim % 2 == 0 {
                LaurentL::one()
            } else {
                LaurentL::one().neg()
            };
            if lim != expected {
                return Err(Error::Inconsistent(format!(
                    "open cone limit {} differs from (-1)^{}",
                    lim, info.dim
                )));
            }
        }
    }
    Ok(lim)
}

// --- tests ---

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    fn iv(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn quadrant_open() -> ConeHRep {
        ConeHRep {
            n: 2,
            equalities: vec![],
            weak: vec![],
            strict: vec![iv(&[1, 0]), iv(&[0, 1])],
        }
    }

    #[test]
    fn laurent_display_and_arith() {
        let a = LaurentL::from_term(1, int(1)).add(&LaurentL::from_term(0, int(-1)));
        assert_eq!(a.to_string(), "L - 1");
        let b = a.mul(&a);
        assert_eq!(b.to_string(), "L^2 - 2*L + 1");
        assert!(a.sub(&a).is_zero());
        let q = crate::linalg::rat_int(&int(5));
        assert_eq!(a.eval_at(&q), crate::linalg::rat_int(&int(4)));
    }

    #[test]
    fn cone_series_of_ray() {
        let ray = ConeHRep {
            n: 1,
            equalities: vec![],
            weak: vec![],
            strict: vec![iv(&[1])],
        };
        let l = iv(&[1]);
        let s = cone_series(&ray, &l, &l).unwrap();
        assert_eq!(s.terms().len(), 1);
        assert!(s.terms().contains_key(&vec![(-1i64, 1u32)]));
        assert_eq!(s.limit(), LaurentL::one().neg());
    }

    #[test]
    fn cone_series_of_open_quadrant() {
        let l = iv(&[1, 1]);
        let s = cone_series(&quadrant_open(), &l, &l).unwrap();
        assert!(s.terms().contains_key(&vec![(-1i64, 1u32), (-1i64, 1u32)]));
        assert_eq!(s.limit(), LaurentL::one());
    }

    #[test]
    fn cone_series_of_diagonal() {
        let diag = ConeHRep {
            n: 2,
            equalities: vec![iv(&[1, -1])],
            weak: vec![],
            strict: vec![iv(&[1, 0]), iv(&[0, 1])],
        };
        let l = iv(&[1, 1]);
        let s = cone_series(&diag, &l, &l).unwrap();
        assert!(s.terms().contains_key(&vec![(-2i64, 2u32)]));
        assert_eq!(s.terms().len(), 1);
    }

    #[test]
    fn expansion_matches_brute_enumeration() {
        use crate::oracle::series_coeff_brute;
        let l = iv(&[1, 1]);
        let cases = vec![
            quadrant_open(),
            // Half-open triangle x1 <= x2.
            ConeHRep {
                n: 2,
                equalities: vec![],
                weak: vec![iv(&[-1, 1])],
                strict: vec![iv(&[1, 0]), iv(&[0, 1])],
            },
            // Diagonal.
            ConeHRep {
                n: 2,
                equalities: vec![iv(&[1, -1])],
                weak: vec![],
                strict: vec![iv(&[1, 0]), iv(&[0, 1])],
            },
        ];
        for cone in cases {
            let s = cone_series(&cone, &l, &l).unwrap();
            let expanded = s.expand_to(6);
            let brute = series_coeff_brute(&cone, &l, &l, 6, &[], 1_000_000).unwrap();
            for k in 1..=6usize {
                assert_eq!(
                    expanded[k],
                    LaurentL::from_map(brute[k - 1].clone()),
                    "T^{k} coefficient"
                );
            }
        }
    }

    #[test]
    fn half_open_triangle_limit_vanishes() {
        let cone = ConeHRep {
            n: 2,
            equalities: vec![],
            weak: vec![iv(&[-1, 1])],
            strict: vec![iv(&[1, 0]), iv(&[0, 1])],
        };
        let l = iv(&[1, 1]);
        let s = cone_series(&cone, &l, &l).unwrap();
        assert!(s.limit().is_zero());
    }

    #[test]
    fn open_cone_limit_checks_parity() {
        let l = iv(&[1, 1]);
        assert_eq!(open_cone_limit(&quadrant_open(), &l, &l).unwrap(), LaurentL::one());
        let ray = ConeHRep {
            n: 1,
            equalities: vec![],
            weak: vec![],
            strict: vec![iv(&[1])],
        };
        assert_eq!(
            open_cone_limit(&ray, &iv(&[1]), &iv(&[1])).unwrap(),
            LaurentL::one().neg()
        );
    }

    #[test]
    fn grading_positivity_enforced() {
        let l_bad = iv(&[1, 0]);
        let l = iv(&[1, 1]);
        assert!(cone_series(&quadrant_open(), &l_bad, &l).is_err());
    }

    #[test]
    fn limit_is_additive() {
        let a = SrSeries::term(vec![(-1, 1)], LaurentL::one());
        let b = SrSeries::term(vec![(-1, 1), (-2, 2)], LaurentL::from_term(1, int(3)));
        let sum = a.add(&b);
        assert_eq!(sum.limit(), a.limit().add(&b.limit()));
    }
}
