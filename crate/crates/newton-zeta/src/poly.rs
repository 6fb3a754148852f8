//! Sparse multivariate Laurent-free polynomials with exact rational
//! coefficients.
//!
//! Representation: `terms` maps exponent vectors (length `n`) to nonzero
//! coefficients; the map never stores a zero coefficient. Block structure
//! (variable groups with weights +1 / -1 / 0) lives in [`Dims`]; polynomials
//! themselves are block-agnostic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{Int, Rat};

// --- block structure ---

/// Variable blocks. Two blocks carry weights (+1, -1); three blocks carry
/// weights (+1, -1, 0). Block letters are x, y, z in order; a block of size
/// one may be written either as the bare letter or with index 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dims {
    pub blocks: Vec<usize>,
}

impl Dims {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.len() != 2 && blocks.len() != 3 {
            return Err(Error::InvalidInput(format!(
                "dims must list 2 or 3 blocks, got {}",
                blocks.len()
            )));
        }
        if blocks.iter().sum::<usize>() == 0 {
            return Err(Error::InvalidInput("dims must name at least one variable".into()));
        }
        Ok(Dims { blocks })
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().sum()
    }

    /// Half-open index range of one block.
    pub fn block_range(&self, b: usize) -> std::ops::Range<usize> {
        let start: usize = self.blocks[..b].iter().sum();
        start..start + self.blocks[b]
    }

    /// Weight vector: +1 on the first block, -1 on the second, 0 on a third.
    pub fn weights(&self) -> Vec<i64> {
        let mut w = Vec::with_capacity(self.n());
        for (b, &size) in self.blocks.iter().enumerate() {
            let wt = match b {
                0 => 1,
                1 => -1,
                _ => 0,
            };
            w.extend(std::iter::repeat(wt).take(size));
        }
        w
    }

    pub fn var_names(&self) -> Vec<String> {
        let letters = ["x", "y", "z"];
        let mut names = Vec::with_capacity(self.n());
        for (b, &size) in self.blocks.iter().enumerate() {
            if size == 1 {
                names.push(letters[b].to_string());
            } else {
                for i in 1..=size {
                    names.push(format!("{}{}", letters[b], i));
                }
            }
        }
        names
    }

    fn resolve_name(&self, name: &str) -> Option<usize> {
        let names = self.var_names();
        if let Some(i) = names.iter().position(|n| n == name) {
            return Some(i);
        }
        // Alias: a size-one block accepts both "x" and "x1".
        let letters = ["x", "y", "z"];
        for (b, &size) in self.blocks.iter().enumerate() {
            if size == 1 {
                let letter = letters[b];
                if name == format!("{letter}1") || name == letter {
                    return Some(self.block_range(b).start);
                }
            }
        }
        None
    }
}

// --- sparse polynomial ---

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    pub n: usize,
    pub terms: BTreeMap<Vec<u32>, Rat>,
}

impl SparsePoly {
    pub fn zero(n: usize) -> Self {
        SparsePoly { n, terms: BTreeMap::new() }
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rat)>) -> Result<Self> {
        let mut p = SparsePoly::zero(n);
        for (exp, coef) in terms {
            if exp.len() != n {
                return Err(Error::InvalidInput(format!(
                    "exponent vector of length {} in a {}-variable polynomial",
                    exp.len(),
                    n
                )));
            }
            p.add_term(exp, coef);
        }
        Ok(p)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exp: Vec<u32>, coef: Rat) {
        if coef.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(e) => {
                e.insert(coef);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + coef;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Support exponents in canonical (lexicographic) order.
    pub fn support(&self) -> Vec<Vec<u32>> {
        self.terms.keys().cloned().collect()
    }

    pub fn vanishes_at_origin(&self) -> bool {
        !self.terms.contains_key(&vec![0u32; self.n])
    }

    /// Sub-polynomial over the given support exponents (the face polynomial,
    /// when the set is the support on a face).
    pub fn face_poly(&self, exps: &BTreeSet<Vec<u32>>) -> SparsePoly {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| exps.contains(*e))
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        SparsePoly { n: self.n, terms }
    }

    /// First monomial violating weight balance, if any. Balanced means every
    /// monomial has total weight zero.
    pub fn balance_violation(&self, weights: &[i64]) -> Option<Vec<u32>> {
        debug_assert_eq!(weights.len(), self.n);
        self.terms
            .keys()
            .find(|exp| {
                exp.iter()
                    .zip(weights)
                    .map(|(&e, &w)| e as i64 * w)
                    .sum::<i64>()
                    != 0
            })
            .cloned()
    }

    pub fn check_balanced(&self, weights: &[i64]) -> bool {
        self.balance_violation(weights).is_none()
    }

    /// Restriction `g|_{x_D = 0}`: keeps the terms whose exponents vanish on
    /// `d_set`. Variable count and exponent layout are unchanged.
    pub fn restrict_zero(&self, d_set: &BTreeSet<usize>) -> SparsePoly {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| d_set.iter().all(|&i| e[i] == 0))
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        SparsePoly { n: self.n, terms }
    }

    /// Terms supported entirely on the last block, re-indexed as a
    /// polynomial in that block's variables.
    pub fn extract_h(&self, dims: &Dims) -> SparsePoly {
        let last = dims.blocks.len() - 1;
        let range = dims.block_range(last);
        let mut h = SparsePoly::zero(range.len());
        for (exp, coef) in &self.terms {
            if exp.iter().enumerate().all(|(i, &e)| e == 0 || range.contains(&i)) {
                h.add_term(exp[range.clone()].to_vec(), coef.clone());
            }
        }
        h
    }

    pub fn add(&self, other: &SparsePoly) -> SparsePoly {
        debug_assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &SparsePoly) -> SparsePoly {
        debug_assert_eq!(self.n, other.n);
        let mut out = SparsePoly::zero(self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exp: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exp, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> SparsePoly {
        let mut out = SparsePoly::from_terms(self.n, [(vec![0; self.n], Rat::one())]).unwrap();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Formal partial derivative in variable `i`.
    pub fn partial(&self, i: usize) -> SparsePoly {
        let mut out = SparsePoly::zero(self.n);
        for (exp, coef) in &self.terms {
            if exp[i] == 0 {
                continue;
            }
            let mut e = exp.clone();
            e[i] -= 1;
            out.add_term(e, coef * Rat::from_integer(Int::from(exp[i])));
        }
        out
    }

    /// Evaluation over F_q at `point` (entries taken mod q). Rational
    /// coefficients are reduced mod q; a denominator divisible by q is an
    /// error. `0^0 = 1`.
    pub fn eval_mod_q(&self, point: &[u64], q: u64) -> Result<u64> {
        debug_assert_eq!(point.len(), self.n);
        let mut acc = 0u64;
        for (exp, coef) in &self.terms {
            let mut term = coef_mod_q(coef, q)?;
            for (i, &e) in exp.iter().enumerate() {
                if e > 0 {
                    term = term * pow_mod(point[i] % q, e as u64, q) % q;
                }
            }
            acc = (acc + term) % q;
        }
        Ok(acc)
    }

    /// Canonical text rendering with the given variable names.
    pub fn render(&self, names: &[String]) -> String {
        debug_assert_eq!(names.len(), self.n);
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (exp, coef)) in self.terms.iter().enumerate() {
            let neg = coef.is_negative();
            let mag = coef.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut mono = String::new();
            for (j, &e) in exp.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !mono.is_empty() {
                    mono.push('*');
                }
                if e == 1 {
                    mono.push_str(&names[j]);
                } else {
                    let _ = write!(mono, "{}^{}", names[j], e);
                }
            }
            if mono.is_empty() {
                let _ = write!(out, "{}", mag);
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                let _ = write!(out, "{}*{}", mag, mono);
            }
        }
        out
    }
}

pub fn coef_mod_q(coef: &Rat, q: u64) -> Result<u64> {
    let num = coef.numer().mod_floor_u64(q);
    let den = coef.denom().mod_floor_u64(q);
    let inv = inv_mod(den, q).ok_or_else(|| {
        Error::InvalidInput(format!("denominator of {} not invertible mod {}", coef, q))
    })?;
    Ok(num * inv % q)
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, q: u64) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, q: u64) -> u64 {
        use num_integer::Integer as _;
        self.mod_floor(&BigInt::from(q)).to_u64().expect("reduced residue fits in u64")
    }
}

pub fn pow_mod(mut base: u64, mut e: u64, q: u64) -> u64 {
    base %= q;
    let mut acc = 1u64 % q;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % q;
        }
        base = base * base % q;
        e >>= 1;
    }
    acc
}

/// Multiplicative inverse mod q via the extended Euclidean algorithm.
pub fn inv_mod(a: u64, q: u64) -> Option<u64> {
    let (mut r0, mut r1) = (q as i128, (a % q) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (s0, s1) = (s1, s0 - k * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(q as i128) as u64)
}

// --- parsing ---

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(BigInt),
    Caret,
    Star,
    Plus,
    Minus,
    Slash,
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let mut toks = Vec::new();
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                chars.next();
            }
            '^' => {
                chars.next();
                toks.push(Tok::Caret);
            }
            '*' => {
                chars.next();
                toks.push(Tok::Star);
            }
            '+' => {
                chars.next();
                toks.push(Tok::Plus);
            }
            '-' => {
                chars.next();
                toks.push(Tok::Minus);
            }
            '/' => {
                chars.next();
                toks.push(Tok::Slash);
            }
            '0'..='9' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                toks.push(Tok::Num(s.parse().expect("digits parse as integer")));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                toks.push(Tok::Ident(s));
            }
            other => {
                return Err(Error::Parse(format!("unexpected character '{other}'")));
            }
        }
    }
    Ok(toks)
}

/// Parses polynomial text like `x^2*z^2 + x*y*z^2 - 1/2*y^3*z^3` against the
/// variable names of `dims`. Adjacency acts as multiplication; `/` is only
/// allowed between integer literals.
pub fn parse_poly(src: &str, dims: &Dims) -> Result<SparsePoly> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let n = dims.n();
    let mut poly = SparsePoly::zero(n);
    let mut pos = 0usize;
    let mut sign = Rat::one();
    // Leading sign.
    while pos < toks.len() {
        match toks[pos] {
            Tok::Plus => pos += 1,
            Tok::Minus => {
                sign = -sign;
                pos += 1;
            }
            _ => break,
        }
    }
    loop {
        let (exp, coef, next) = parse_term(&toks, pos, dims, n)?;
        poly.add_term(exp, coef * &sign);
        pos = next;
        if pos == toks.len() {
            break;
        }
        sign = Rat::one();
        match toks[pos] {
            Tok::Plus => {}
            Tok::Minus => sign = -sign,
            _ => return Err(Error::Parse("expected '+' or '-' between terms".into())),
        }
        pos += 1;
        while pos < toks.len() {
            match toks[pos] {
                Tok::Plus => pos += 1,
                Tok::Minus => {
                    sign = -sign;
                    pos += 1;
                }
                _ => break,
            }
        }
        if pos == toks.len() {
            return Err(Error::Parse("trailing sign without a term".into()));
        }
    }
    Ok(poly)
}

fn parse_term(
    toks: &[Tok],
    mut pos: usize,
    dims: &Dims,
    n: usize,
) -> Result<(Vec<u32>, Rat, usize)> {
    let mut exp = vec![0u32; n];
    let mut coef = Rat::one();
    let mut saw_factor = false;
    while pos < toks.len() {
        match &toks[pos] {
            Tok::Plus | Tok::Minus => break,
            Tok::Star => {
                if !saw_factor {
                    return Err(Error::Parse("'*' without a preceding factor".into()));
                }
                pos += 1;
            }
            Tok::Num(num) => {
                pos += 1;
                let mut c = Rat::from_integer(num.clone());
                if pos < toks.len() && toks[pos] == Tok::Slash {
                    pos += 1;
                    let Some(Tok::Num(den)) = toks.get(pos) else {
                        return Err(Error::Parse("expected integer after '/'".into()));
                    };
                    if den.is_zero() {
                        return Err(Error::Parse("zero denominator".into()));
                    }
                    c = c / Rat::from_integer(den.clone());
                    pos += 1;
                }
                coef *= c;
                saw_factor = true;
            }
            Tok::Ident(name) => {
                let Some(idx) = dims.resolve_name(name) else {
                    return Err(Error::Parse(format!(
                        "unknown variable '{}' (expected one of {})",
                        name,
                        dims.var_names().join(", ")
                    )));
                };
                pos += 1;
                let mut e = 1u32;
                if pos < toks.len() && toks[pos] == Tok::Caret {
                    pos += 1;
                    let Some(Tok::Num(num)) = toks.get(pos) else {
                        return Err(Error::Parse("expected integer exponent after '^'".into()));
                    };
                    e = num
                        .to_u32()
                        .ok_or_else(|| Error::Parse("exponent too large".into()))?;
                    pos += 1;
                }
                exp[idx] += e;
                saw_factor = true;
            }
            Tok::Caret => return Err(Error::Parse("'^' without a base".into())),
            Tok::Slash => return Err(Error::Parse("'/' is only allowed between integers".into())),
        }
    }
    if !saw_factor {
        return Err(Error::Parse("empty term".into()));
    }
    Ok((exp, coef, pos))
}

// --- tests ---
