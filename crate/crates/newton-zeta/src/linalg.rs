//! Exact dense linear algebra over the integers and rationals.
//!
//! Everything here operates on small matrices (ambient dimensions are the
//! number of variables plus at most one lift coordinate), so simple
//! Gaussian elimination and a textbook Smith normal form are appropriate.
//! Invariants: `primitive` never changes the direction of a vector; Smith
//! diagonal entries are nonnegative; `inv_unimodular` fails loudly if its
//! argument is not unimodular.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;
pub type IMat = Vec<Vec<Int>>;

// --- scalar and vector helpers ---

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat_int(v: &Int) -> Rat {
    Rat::from_integer(v.clone())
}

pub fn dot(a: &[Int], b: &[Int]) -> Int {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn gcd_vec(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |g, x| g.gcd(x))
}

/// Divides by the (positive) gcd of the entries; the zero vector is returned
/// unchanged. Direction is preserved.
pub fn primitive(v: &[Int]) -> Vec<Int> {
    let g = gcd_vec(v);
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Clears denominators and reduces to a primitive integer vector with the
/// same direction.
pub fn primitive_of_rat(v: &[Rat]) -> Vec<Int> {
    let mut lcm = Int::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<Int> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    primitive(&ints)
}

pub fn is_zero_vec(v: &[Int]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn add_vec(a: &[Int], b: &[Int]) -> Vec<Int> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale_vec(c: &Int, v: &[Int]) -> Vec<Int> {
    v.iter().map(|x| c * x).collect()
}

/// `a*u + b*w` componentwise.
pub fn comb_vec(a: &Int, u: &[Int], b: &Int, w: &[Int]) -> Vec<Int> {
    u.iter().zip(w).map(|(x, y)| a * x + b * y).collect()
}

// --- Gaussian elimination over the rationals ---

fn rref(mut rows: Vec<Vec<Rat>>) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let nrows = rows.len();
    let ncols = if nrows == 0 { 0 } else { rows[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..ncols {
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = &*x / &inv;
        }
        for i in 0..nrows {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    let d = &rows[r][j] * &f;
                    rows[i][j] = &rows[i][j] - d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == nrows {
            break;
        }
    }
    (rows, pivots)
}

pub fn rank_rat(rows: &[Vec<Rat>]) -> usize {
    rref(rows.to_vec()).1.len()
}

pub fn rank_int(rows: &[Vec<Int>]) -> usize {
    let rat_rows: Vec<Vec<Rat>> = rows
        .iter()
        .map(|r| r.iter().map(rat_int).collect())
        .collect();
    rank_rat(&rat_rows)
}

/// One rational solution of `A x = b`, or None if inconsistent. When the
/// system is underdetermined the free variables are set to zero.
pub fn solve_rat(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let nrows = a.len();
    debug_assert_eq!(nrows, b.len());
    let ncols = if nrows == 0 { return Some(Vec::new()) } else { a[0].len() };
    let aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let (red, pivots) = rref(aug);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![Rat::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = red[r][ncols].clone();
    }
    Some(x)
}

/// Coordinates of `point` in the linear span of `basis` (rows), or None if
/// `point` is outside the span. `basis` need not be independent; a single
/// representation is returned.
pub fn coords_in_span(basis: &[Vec<Int>], point: &[Int]) -> Option<Vec<Rat>> {
    let n = point.len();
    // Transposed system: sum_j lambda_j basis[j] = point.
    let a: Vec<Vec<Rat>> = (0..n)
        .map(|i| basis.iter().map(|b| rat_int(&b[i])).collect())
        .collect();
    let b: Vec<Rat> = point.iter().map(rat_int).collect();
    solve_rat(&a, &b)
}

/// Primitive integer basis of the rational nullspace `{x : rows * x = 0}`.
pub fn nullspace_int(rows: &[Vec<Int>], n: usize) -> Vec<Vec<Int>> {
    let rat_rows: Vec<Vec<Rat>> = rows
        .iter()
        .map(|r| r.iter().map(rat_int).collect())
        .collect();
    let (red, pivots) = rref(rat_rows);
    let mut basis = Vec::new();
    for free in 0..n {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); n];
        v[free] = Rat::one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -red[r][free].clone();
        }
        basis.push(primitive_of_rat(&v));
    }
    basis
}

// --- small integer matrices ---

pub fn mat_identity(k: usize) -> IMat {
    (0..k)
        .map(|i| (0..k).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &IMat, b: &IMat) -> IMat {
    let rows = a.len();
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| (0..inner).map(|k| &a[i][k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &IMat, v: &[Int]) -> Vec<Int> {
    a.iter().map(|row| dot(row, v)).collect()
}

/// Inverse of a unimodular integer matrix. Errors if the matrix is not
/// square unimodular.
pub fn inv_unimodular(u: &IMat) -> Result<IMat> {
    let k = u.len();
    let a: Vec<Vec<Rat>> = u
        .iter()
        .map(|r| r.iter().map(rat_int).collect())
        .collect();
    let mut inv: IMat = Vec::with_capacity(k);
    let mut cols: Vec<Vec<Int>> = Vec::with_capacity(k);
    for j in 0..k {
        let mut e = vec![Rat::zero(); k];
        e[j] = Rat::one();
        let col = solve_rat(&a, &e)
            .ok_or_else(|| Error::InvalidInput("singular matrix passed to inv_unimodular".into()))?;
        if col.iter().any(|x| !x.is_integer()) {
            return Err(Error::InvalidInput(
                "matrix passed to inv_unimodular is not unimodular".into(),
            ));
        }
        cols.push(col.iter().map(|x| x.to_integer()).collect());
    }
    for i in 0..k {
        inv.push((0..k).map(|j| cols[j][i].clone()).collect());
    }
    Ok(inv)
}

// --- Smith normal form ---

/// Smith-type diagonalization `left * a * right = diag(d)` with unimodular
/// transforms; `d` entries are nonnegative. The divisibility chain is not
/// enforced (not needed by any caller).
pub struct Smith {
    pub d: Vec<Int>,
    pub left: IMat,
    pub right: IMat,
}

pub fn smith(a: &IMat) -> Smith {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m = a.clone();
    let mut left = mat_identity(rows);
    let mut right = mat_identity(cols);
    let steps = rows.min(cols);
    for t in 0..steps {
        loop {
            // Minimal-magnitude nonzero pivot in the trailing submatrix.
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !m[i][j].is_zero()
                        && pivot
                            .map(|(pi, pj)| m[i][j].abs() < m[pi][pj].abs())
                            .unwrap_or(true)
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return finish_smith(m, left, right, steps);
            };
            m.swap(t, pi);
            left.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            for row in right.iter_mut() {
                row.swap(t, pj);
            }
            let mut clean = true;
            for i in t + 1..rows {
                if !m[i][t].is_zero() {
                    let q = div_round(&m[i][t], &m[t][t]);
                    if !q.is_zero() {
                        for j in 0..cols {
                            let d = &m[t][j] * &q;
                            m[i][j] = &m[i][j] - d;
                        }
                        for j in 0..rows {
                            let d = &left[t][j] * &q;
                            left[i][j] = &left[i][j] - d;
                        }
                    }
                    if !m[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !m[t][j].is_zero() {
                    let q = div_round(&m[t][j], &m[t][t]);
                    if !q.is_zero() {
                        for i in 0..rows {
                            let d = &m[i][t] * &q;
                            m[i][j] = &m[i][j] - d;
                        }
                        for i in 0..cols {
                            let dr = &right[i][t] * &q;
                            right[i][j] = &right[i][j] - dr;
                        }
                    }
                    if !m[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if clean
                && (t + 1..rows).all(|i| m[i][t].is_zero())
                && (t + 1..cols).all(|j| m[t][j].is_zero())
            {
                break;
            }
        }
        if m[t][t].is_negative() {
            for j in 0..cols {
                m[t][j] = -m[t][j].clone();
            }
            for j in 0..rows {
                left[t][j] = -left[t][j].clone();
            }
        }
    }
    finish_smith(m, left, right, steps)
}

fn div_round(a: &Int, b: &Int) -> Int {
    // Round-to-nearest quotient keeps remainders at most |b|/2, which makes
    // the pivot magnitude strictly decrease across sweeps.
    let (q, r) = a.div_rem(b);
    let two_r: Int = &r * Int::from(2);
    if two_r.abs() > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

fn finish_smith(m: IMat, mut left: IMat, right: IMat, steps: usize) -> Smith {
    // Normalize diagonal signs so that left * a * right = diag(d) holds
    // exactly with nonnegative d, including on early exit.
    let mut d = Vec::with_capacity(steps);
    for t in 0..steps {
        if m[t][t].is_negative() {
            for x in left[t].iter_mut() {
                *x = -x.clone();
            }
        }
        d.push(m[t][t].abs());
    }
    Smith { d, left, right }
}

// --- lattice data of a simplicial cone ---

/// Lattice-aware description of the span of independent integer generators:
/// `basis` is a lattice basis of `span cap Z^n` (as ambient column vectors),
/// `coords` expresses each generator in that basis (k x k, columns are the
/// generators), and `index` is the index of the subgroup generated by the
/// generators inside the span lattice.
pub struct SpanLattice {
    pub basis: Vec<Vec<Int>>,
    pub coords: IMat,
    /// Diagonal with `coords * Z^k = diag(d) * Z^k` (coords is diag(d) times
    /// a unimodular matrix), used to enumerate box residues.
    pub d: Vec<Int>,
    pub index: Int,
}

pub fn span_lattice(gens: &[Vec<Int>]) -> Result<SpanLattice> {
    let k = gens.len();
    if k == 0 {
        return Ok(SpanLattice {
            basis: Vec::new(),
            coords: Vec::new(),
            d: Vec::new(),
            index: Int::one(),
        });
    }
    let n = gens[0].len();
    // Column matrix of the generators.
    let b: IMat = (0..n).map(|i| gens.iter().map(|g| g[i].clone()).collect()).collect();
    let s = smith(&b);
    if s.d.len() < k || s.d.iter().any(|x| x.is_zero()) {
        return Err(Error::InvalidInput(
            "span_lattice requires linearly independent generators".into(),
        ));
    }
    let left_inv = inv_unimodular(&s.left)?;
    // Columns t = 0..k of left_inv generate span cap Z^n.
    let basis: Vec<Vec<Int>> = (0..k)
        .map(|t| (0..n).map(|i| left_inv[i][t].clone()).collect())
        .collect();
    let right_inv = inv_unimodular(&s.right)?;
    // coords = diag(d) * right_inv restricted to the top k rows.
    let coords: IMat = (0..k)
        .map(|i| (0..k).map(|j| &s.d[i] * &right_inv[i][j]).collect())
        .collect();
    let d: Vec<Int> = s.d.iter().take(k).cloned().collect();
    let index = d.iter().product();
    Ok(SpanLattice { basis, coords, d, index })
}

/// A nonzero lattice point of the half-open box `{sum lambda_i g_i : 0 <=
/// lambda_i < 1}` for a simplicial cone, with its rational coordinates.
/// Returns None when the cone is unimodular. Chooses the point minimizing
/// the coordinate sum, tie-broken by lexicographic order of the ambient
/// vector, so subdivision is deterministic.
pub fn box_point(gens: &[Vec<Int>]) -> Result<Option<(Vec<Rat>, Vec<Int>)>> {
    let lat = span_lattice(gens)?;
    if lat.index.is_one() {
        return Ok(None);
    }
    let k = gens.len();
    let limit = int(100_000);
    if lat.index > limit {
        return Err(Error::Budget(format!(
            "cone lattice index {} exceeds the box enumeration limit",
            lat.index
        )));
    }
    let m_rat: Vec<Vec<Rat>> = lat
        .coords
        .iter()
        .map(|r| r.iter().map(rat_int).collect())
        .collect();
    let d = lat.d.clone();
    let mut best: Option<(Vec<Rat>, Vec<Int>)> = None;
    let mut c = vec![Int::zero(); k];
    loop {
        // Advance the mixed-radix counter over residues mod diag(d).
        let mut t = 0;
        while t < k {
            c[t] += 1;
            if c[t] < d[t] {
                break;
            }
            c[t] = Int::zero();
            t += 1;
        }
        if t == k {
            break;
        }
        let c_rat: Vec<Rat> = c.iter().map(rat_int).collect();
        let sol = solve_rat(&m_rat, &c_rat)
            .expect("coords matrix of independent generators is invertible");
        let lambda: Vec<Rat> = sol.iter().map(|x| x - x.floor()).collect();
        if lambda.iter().all(|x| x.is_zero()) {
            continue;
        }
        // Ambient point: basis * (coords * lambda); integral by construction.
        let in_basis: Vec<Rat> = (0..k)
            .map(|i| (0..k).map(|j| &m_rat[i][j] * &lambda[j]).sum())
            .collect();
        debug_assert!(in_basis.iter().all(|x| x.is_integer()));
        let n = gens[0].len();
        let point: Vec<Int> = (0..n)
            .map(|i| {
                (0..k)
                    .map(|j| &lat.basis[j][i] * in_basis[j].to_integer())
                    .sum()
            })
            .collect();
        let sum: Rat = lambda.iter().sum();
        let better = match &best {
            None => true,
            Some((bl, bp)) => {
                let bsum: Rat = bl.iter().sum();
                sum < bsum || (sum == bsum && point < *bp)
            }
        };
        if better {
            best = Some((lambda, point));
        }
    }
    Ok(best)
}

// --- tests ---
