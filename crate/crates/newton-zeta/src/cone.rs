//! Rational polyhedral cones: constraint representations, double
//! description, Fourier-Motzkin feasibility, and decomposition of relatively
//! open cones into half-open unimodular pieces.
//!
//! Conventions: every cone lives in `Z^n` coordinates and is given by
//! integer constraint rows; `equalities` rows vanish on the cone, `weak`
//! rows are nonnegative, `strict` rows are positive on the cone. The set
//! described is always the *relatively open* region (strict rows strictly
//! positive); its closure relaxes strict rows to nonnegative. All cones
//! handled here are pointed once their equalities are imposed; nonzero
//! lineality is a hard error.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{
    box_point, coords_in_span, dot, is_zero_vec, nullspace_int, primitive, rank_int,
    span_lattice, Int,
};

// --- constraint representation ---

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeHRep {
    pub n: usize,
    pub equalities: Vec<Vec<Int>>,
    pub weak: Vec<Vec<Int>>,
    pub strict: Vec<Vec<Int>>,
}

impl ConeHRep {
    pub fn new(n: usize) -> Self {
        ConeHRep { n, equalities: Vec::new(), weak: Vec::new(), strict: Vec::new() }
    }

    pub fn contains_closure(&self, x: &[Int]) -> bool {
        self.equalities.iter().all(|h| dot(h, x).is_zero())
            && self.weak.iter().all(|h| !dot(h, x).is_negative())
            && self.strict.iter().all(|h| !dot(h, x).is_negative())
    }

    pub fn contains_relopen(&self, x: &[Int]) -> bool {
        self.equalities.iter().all(|h| dot(h, x).is_zero())
            && self.weak.iter().all(|h| !dot(h, x).is_negative())
            && self.strict.iter().all(|h| dot(h, x).is_positive())
    }
}

// --- double description ---

/// Extreme rays of the closure of `cone` (strict rows relaxed to weak),
/// primitive and sorted. Errors if the closure contains a line.
pub fn extreme_rays(cone: &ConeHRep) -> Result<Vec<Vec<Int>>> {
    let n = cone.n;
    // (row, is_equality), equalities processed first.
    let mut rows: Vec<(Vec<Int>, bool)> = Vec::new();
    for e in &cone.equalities {
        rows.push((e.clone(), true));
    }
    for w in cone.weak.iter().chain(cone.strict.iter()) {
        rows.push((w.clone(), false));
    }
    if rows.len() > 128 {
        return Err(Error::InvalidInput(format!(
            "double description limited to 128 constraint rows, got {}",
            rows.len()
        )));
    }

    // State: lineality basis plus rays with zero-set masks over processed rows.
    let mut lineality: Vec<Vec<Int>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
        .collect();
    let mut rays: Vec<(Vec<Int>, u128)> = Vec::new();

    for (idx, (h, is_eq)) in rows.iter().enumerate() {
        let bit = 1u128 << idx;
        let lin_hit = lineality.iter().position(|l| !dot(h, l).is_zero());
        if let Some(pos) = lin_hit {
            let mut l0 = lineality.remove(pos);
            let mut c = dot(h, &l0);
            if !*is_eq && c.is_negative() {
                for x in l0.iter_mut() {
                    *x = -x.clone();
                }
                c = -c;
            }
            // Project everything onto {h = 0} along l0.
            for l in lineality.iter_mut() {
                let hl = dot(h, l);
                if !hl.is_zero() {
                    *l = primitive(&comb_signed(&c, l, &hl, &l0));
                }
            }
            for (r, mask) in rays.iter_mut() {
                let hr = dot(h, r);
                if !hr.is_zero() {
                    *r = primitive(&comb_signed(&c, r, &hr, &l0));
                }
                *mask |= bit;
            }
            if !*is_eq {
                // l0 survives on the positive side with h(l0) > 0.
                rays.push((primitive(&l0), full_mask(idx)));
            }
        } else {
            // Motzkin step on rays; lineality is untouched (h vanishes on it).
            let vals: Vec<Int> = rays.iter().map(|(r, _)| dot(h, r)).collect();
            let mut next: Vec<(Vec<Int>, u128)> = Vec::new();
            for (i, (r, mask)) in rays.iter().enumerate() {
                let keep = if *is_eq {
                    vals[i].is_zero()
                } else {
                    !vals[i].is_negative()
                };
                if keep {
                    let m = if vals[i].is_zero() { mask | bit } else { *mask };
                    next.push((r.clone(), m));
                }
            }
            for i in 0..rays.len() {
                if !vals[i].is_positive() {
                    continue;
                }
                for j in 0..rays.len() {
                    if !vals[j].is_negative() {
                        continue;
                    }
                    let meet = rays[i].1 & rays[j].1;
                    let adjacent = rays.iter().enumerate().all(|(k, (_, m))| {
                        k == i || k == j || (m & meet) != meet
                    });
                    if !adjacent {
                        continue;
                    }
                    let neg = -vals[j].clone();
                    let new = comb_pos(&neg, &rays[i].0, &vals[i], &rays[j].0);
                    next.push((primitive(&new), meet | bit));
                }
            }
            rays = next;
        }
    }

    if !lineality.is_empty() {
        return Err(Error::InvalidInput(
            "cone closure contains a line; extreme rays are undefined".into(),
        ));
    }

    // Defensive cleanup: dedupe and keep genuinely extreme rays (active
    // constraint rank n-1).
    let all_rows: Vec<Vec<Int>> = rows.iter().map(|(h, _)| h.clone()).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (r, _) in rays {
        if is_zero_vec(&r) || !seen.insert(r.clone()) {
            continue;
        }
        let active: Vec<Vec<Int>> = all_rows
            .iter()
            .filter(|h| dot(h, &r).is_zero())
            .cloned()
            .collect();
        if rank_int(&active) == n.saturating_sub(1) {
            out.push(r);
        }
    }
    out.sort();
    Ok(out)
}

fn full_mask(processed: usize) -> u128 {
    if processed >= 128 {
        u128::MAX
    } else {
        (1u128 << processed) - 1
    }
}

/// `c*u - hv*v` with c > 0 guaranteed by callers for rays.
fn comb_pos(c: &Int, u: &[Int], hv: &Int, v: &[Int]) -> Vec<Int> {
    u.iter().zip(v).map(|(a, b)| c * a + hv * b).collect()
}

/// `|c|*u - sign(c)*hu*v`, i.e. the projection of u to {h = 0} along v with
/// a positive coefficient on u.
fn comb_signed(c: &Int, u: &[Int], hu: &Int, v: &[Int]) -> Vec<Int> {
    let (ca, s) = (c.abs(), if c.is_negative() { -Int::one() } else { Int::one() });
    u.iter()
        .zip(v)
        .map(|(a, b)| &ca * a - &s * hu * b)
        .collect()
}

/// H-representation of the cone generated by `rays`: equalities cut out the
/// linear span, weak rows are the facet normals (extreme rays of the dual
/// cone within the span).
pub fn hrep_of_rays(n: usize, rays: &[Vec<Int>]) -> Result<ConeHRep> {
    let mut hrep = ConeHRep::new(n);
    hrep.equalities = nullspace_int(rays, n);
    if rays.is_empty() {
        return Ok(hrep);
    }
    // Dual within the span: {h : <h, r_i> >= 0, h in span(rays)}.
    let dual = ConeHRep {
        n,
        equalities: hrep.equalities.clone(),
        weak: rays.to_vec(),
        strict: Vec::new(),
    };
    hrep.weak = extreme_rays(&dual)?;
    Ok(hrep)
}

/// Canonical form of the cone generated by arbitrary generators: sorted
/// primitive extreme rays.
pub fn canonical_rays(n: usize, gens: &[Vec<Int>]) -> Result<Vec<Vec<Int>>> {
    let gens: Vec<Vec<Int>> = gens.iter().filter(|g| !is_zero_vec(g)).cloned().collect();
    let hrep = hrep_of_rays(n, &gens)?;
    extreme_rays(&hrep)
}

pub fn cone_dim_of_rays(rays: &[Vec<Int>]) -> usize {
    rank_int(rays)
}

// --- relatively open cones ---

/// Extreme rays of the closure, plus emptiness and dimension of the
/// relatively open set.
pub struct RelOpen {
    pub rays: Vec<Vec<Int>>,
    pub empty: bool,
    pub dim: usize,
}

pub fn relopen_info(cone: &ConeHRep) -> Result<RelOpen> {
    let rays = extreme_rays(cone)?;
    // Nonempty iff every strict row is positive somewhere on the closure;
    // the sum of all extreme rays then witnesses all strict rows at once.
    let empty = cone
        .strict
        .iter()
        .any(|h| rays.iter().all(|r| !dot(h, r).is_positive()))
        || (rays.is_empty() && !cone.strict.is_empty());
    let dim = rank_int(&rays);
    Ok(RelOpen { rays, empty, dim })
}

/// A point of the relative interior satisfying all strict rows, when the
/// relatively open cone is nonempty.
pub fn representative_point(cone: &ConeHRep) -> Result<Option<Vec<Int>>> {
    let info = relopen_info(cone)?;
    if info.empty {
        return Ok(None);
    }
    if info.rays.is_empty() {
        // The zero cone with no strict constraints.
        return Ok(Some(vec![Int::zero(); cone.n]));
    }
    let mut p = vec![Int::zero(); cone.n];
    for r in &info.rays {
        p = crate::linalg::add_vec(&p, r);
    }
    Ok(Some(p))
}

// --- Fourier-Motzkin feasibility ---

/// Feasibility of the relatively open homogeneous system by variable
/// elimination with strictness bookkeeping. Exact; used to cross-validate
/// the double-description route.
pub fn fm_feasible(cone: &ConeHRep) -> bool {
    // (row, strict)
    let mut rows: Vec<(Vec<Int>, bool)> = Vec::new();
    for e in &cone.equalities {
        rows.push((e.clone(), false));
        rows.push((e.iter().map(|x| -x.clone()).collect(), false));
    }
    for w in &cone.weak {
        rows.push((w.clone(), false));
    }
    for s in &cone.strict {
        rows.push((s.clone(), true));
    }
    for j in 0..cone.n {
        let mut next: Vec<(Vec<Int>, bool)> = Vec::new();
        let mut pos: Vec<(Vec<Int>, bool)> = Vec::new();
        let mut neg: Vec<(Vec<Int>, bool)> = Vec::new();
        for (r, s) in rows {
            if r[j].is_zero() {
                next.push((r, s));
            } else if r[j].is_positive() {
                pos.push((r, s));
            } else {
                neg.push((r, s));
            }
        }
        for (p, ps) in &pos {
            for (m, ms) in &neg {
                let c1 = -m[j].clone();
                let new: Vec<Int> = p
                    .iter()
                    .zip(m)
                    .map(|(a, b)| &c1 * a + &p[j] * b)
                    .collect();
                next.push((primitive(&new), *ps || *ms));
            }
        }
        // Prune: dedupe rows, keeping the strict version when both occur.
        let mut best: BTreeMap<Vec<Int>, bool> = BTreeMap::new();
        for (r, s) in next {
            let e = best.entry(r).or_insert(false);
            *e = *e || s;
        }
        rows = best.into_iter().collect();
    }
    // All variables eliminated: every row is the zero form. `0 > 0` is the
    // contradiction certificate.
    rows.iter().all(|(r, s)| !*s || !is_zero_vec(r))
}

// --- triangulation and unimodular decomposition ---

/// Half-open unimodular piece `{sum c_i g_i : c_i > 0}`. The generators are
/// primitive, linearly independent, and form a lattice basis of the
/// intersection of their span with `Z^n`, so the lattice points of the piece
/// are exactly the combinations with integer coefficients `c_i >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OpenPiece {
    pub gens: Vec<Vec<Int>>,
}

/// Pulling triangulation of `cone(rays)` into simplicial cones of the same
/// dimension. Deterministic: always pulls the lexicographically smallest
/// ray, and recursion depends only on the ray set, so shared faces are
/// triangulated consistently.
fn pulling_triangulation(n: usize, rays: &[Vec<Int>]) -> Result<Vec<Vec<Vec<Int>>>> {
    let mut memo: BTreeMap<Vec<Vec<Int>>, Vec<Vec<Vec<Int>>>> = BTreeMap::new();
    return go(n, rays.to_vec(), &mut memo);

    fn go(
        n: usize,
        mut rays: Vec<Vec<Int>>,
        memo: &mut BTreeMap<Vec<Vec<Int>>, Vec<Vec<Vec<Int>>>>,
    ) -> Result<Vec<Vec<Vec<Int>>>> {
        rays.sort();
        rays.dedup();
        if let Some(hit) = memo.get(&rays) {
            return Ok(hit.clone());
        }
        let dim = rank_int(&rays);
        let cells = if rays.len() == dim {
            vec![rays.clone()]
        } else {
            let v = rays[0].clone();
            let hrep = hrep_of_rays(n, &rays)?;
            let mut cells = Vec::new();
            for h in &hrep.weak {
                if !dot(h, &v).is_positive() {
                    continue;
                }
                let facet_rays: Vec<Vec<Int>> =
                    rays.iter().filter(|r| dot(h, r).is_zero()).cloned().collect();
                for mut cell in go(n, facet_rays, memo)? {
                    cell.push(v.clone());
                    cell.sort();
                    cells.push(cell);
                }
            }
            cells
        };
        memo.insert(rays, cells.clone());
        Ok(cells)
    }
}

const STELLAR_CELL_CAP: usize = 10_000;

/// Refines a simplicial fan (given by its maximal cells, all of one
/// dimension) until every cell is unimodular, by stellar subdivision at box
/// lattice points. Subdivision at a point is applied to *every* cell
/// containing it, so the collection remains a fan.
fn unimodularize(cells: Vec<Vec<Vec<Int>>>) -> Result<Vec<Vec<Vec<Int>>>> {
    let mut cells = cells;
    loop {
        if cells.len() > STELLAR_CELL_CAP {
            return Err(Error::Budget(format!(
                "stellar subdivision exceeded {} cells",
                STELLAR_CELL_CAP
            )));
        }
        let mut witness: Option<Vec<Int>> = None;
        for cell in &cells {
            let lat = span_lattice(cell)?;
            if !lat.index.is_one() {
                let (_, w) = box_point(cell)?.expect("index > 1 has a box point");
                witness = Some(primitive(&w));
                break;
            }
        }
        let Some(w) = witness else {
            cells.sort();
            cells.dedup();
            return Ok(cells);
        };
        let mut next: Vec<Vec<Vec<Int>>> = Vec::new();
        for cell in cells {
            let Some(lambda) = coords_in_span(&cell, &w) else {
                next.push(cell);
                continue;
            };
            if lambda.iter().any(|c| c.is_negative()) || lambda.iter().all(|c| c.is_zero()) {
                next.push(cell);
                continue;
            }
            // w lies in this cell; replace it by the stellar subdivision at w.
            for (j, c) in lambda.iter().enumerate() {
                if c.is_positive() {
                    let mut sub = cell.clone();
                    sub[j] = w.clone();
                    sub.sort();
                    next.push(sub);
                }
            }
        }
        cells = next;
    }
}

/// Decomposes the relatively open cone into disjoint half-open unimodular
/// pieces whose lattice points partition the cone's lattice points.
pub fn decompose_open(cone: &ConeHRep) -> Result<Vec<OpenPiece>> {
    let info = relopen_info(cone)?;
    if info.empty {
        return Ok(Vec::new());
    }
    if info.rays.is_empty() {
        return Err(Error::InvalidInput(
            "decompose_open does not handle the zero cone".into(),
        ));
    }
    let cells = pulling_triangulation(cone.n, &info.rays)?;
    let cells = unimodularize(cells)?;
    // Collect all faces of all cells (a partition of the closure into
    // relatively open simplicial pieces), then keep the ones inside the
    // strict region. Each constraint row is identically zero or strictly
    // positive on a piece, so the representative point decides membership.
    let mut pieces: BTreeSet<Vec<Vec<Int>>> = BTreeSet::new();
    for cell in &cells {
        let k = cell.len();
        for mask in 1u32..(1 << k) {
            let sub: Vec<Vec<Int>> = (0..k)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| cell[i].clone())
                .collect();
            pieces.insert(sub);
        }
    }
    let mut out = Vec::new();
    for gens in pieces {
        let mut rep = vec![Int::zero(); cone.n];
        for g in &gens {
            rep = crate::linalg::add_vec(&rep, g);
        }
        if cone.contains_relopen(&rep) {
            out.push(OpenPiece { gens });
        }
    }
    Ok(out)
}

// --- fan consistency ---

#[derive(Debug, Clone)]
pub struct FanViolation {
    pub cones: (usize, usize),
    pub reason: String,
}

/// Checks that the given cones (generator lists; the zero cone is implicit)
/// form a fan: every face of a listed cone is listed, and every pairwise
/// intersection is a common face. Returns the first violation found.
pub fn fan_check(n: usize, cones: &[Vec<Vec<Int>>]) -> Result<Option<FanViolation>> {
    struct Canon {
        rays: Vec<Vec<Int>>,
        hrep: ConeHRep,
    }
    let mut canon: Vec<Canon> = Vec::new();
    for gens in cones {
        let rays = canonical_rays(n, gens)?;
        let hrep = hrep_of_rays(n, &rays)?;
        canon.push(Canon { rays, hrep });
    }
    let listed: BTreeSet<Vec<Vec<Int>>> = canon.iter().map(|c| c.rays.clone()).collect();

    // Face of a cone: zero set of a subset of its facet rows.
    let faces_of = |c: &Canon| -> Result<BTreeSet<Vec<Vec<Int>>>> {
        let mut faces = BTreeSet::new();
        let k = c.hrep.weak.len();
        if k > 20 {
            return Err(Error::InvalidInput(
                "fan_check limited to cones with at most 20 facets".into(),
            ));
        }
        for mask in 0u32..(1 << k) {
            let face_rays: Vec<Vec<Int>> = c
                .rays
                .iter()
                .filter(|r| {
                    (0..k).all(|i| mask & (1 << i) == 0 || dot(&c.hrep.weak[i], r).is_zero())
                })
                .cloned()
                .collect();
            faces.insert(canonical_rays(n, &face_rays)?);
        }
        Ok(faces)
    };

    for (i, c) in canon.iter().enumerate() {
        for face in faces_of(c)? {
            if !face.is_empty() && !listed.contains(&face) {
                return Ok(Some(FanViolation {
                    cones: (i, i),
                    reason: format!(
                        "face generated by {:?} is missing from the collection",
                        face
                    ),
                }));
            }
        }
    }
    for i in 0..canon.len() {
        for j in i + 1..canon.len() {
            // Intersection: conjunction of both H-representations.
            let mut meet = ConeHRep::new(n);
            meet.equalities.extend(canon[i].hrep.equalities.iter().cloned());
            meet.equalities.extend(canon[j].hrep.equalities.iter().cloned());
            meet.weak.extend(canon[i].hrep.weak.iter().cloned());
            meet.weak.extend(canon[j].hrep.weak.iter().cloned());
            let meet_rays = extreme_rays(&meet)?;
            for a in [i, j] {
                if !is_face_of(n, &meet_rays, &canon[a].hrep)? {
                    return Ok(Some(FanViolation {
                        cones: (i, j),
                        reason: format!(
                            "intersection generated by {:?} is not a face of cone {}",
                            meet_rays, a
                        ),
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Is `cone(face_rays)` a face of the cone with the given canonical rays and
/// H-representation? Computed as: the minimal face containing it must equal
/// it.
fn is_face_of(n: usize, face_rays: &[Vec<Int>], cone_hrep: &ConeHRep) -> Result<bool> {
    // Must be contained in the cone at all.
    if !face_rays.iter().all(|r| cone_hrep.contains_closure(r)) {
        return Ok(false);
    }
    if face_rays.is_empty() {
        return Ok(true);
    }
    let active: Vec<Vec<Int>> = cone_hrep
        .weak
        .iter()
        .filter(|h| face_rays.iter().all(|r| dot(h, r).is_zero()))
        .cloned()
        .collect();
    let mut minimal = cone_hrep.clone();
    minimal.equalities.extend(active);
    let minimal_rays = extreme_rays(&minimal)?;
    let a: BTreeSet<&Vec<Int>> = minimal_rays.iter().collect();
    let b: BTreeSet<&Vec<Int>> = face_rays.iter().collect();
    let _ = n;
    Ok(a == b)
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
    fn extreme_rays_of_quadrant() {
        let rays = extreme_rays(&quadrant_open()).unwrap();
        assert_eq!(rays, vec![iv(&[0, 1]), iv(&[1, 0])]);
    }

    #[test]
    fn extreme_rays_error_on_lineality() {
        let half = ConeHRep {
            n: 2,
            equalities: vec![],
            weak: vec![iv(&[1, 1])],
            strict: vec![],
        };
        assert!(extreme_rays(&half).is_err());
    }

    #[test]
    fn extreme_rays_of_diagonal() {
        let diag = ConeHRep {
            n: 2,
            equalities: vec![iv(&[1, -1])],
            weak: vec![],
            strict: vec![iv(&[1, 0])],
        };
        assert_eq!(extreme_rays(&diag).unwrap(), vec![iv(&[1, 1])]);
    }

    #[test]
    fn hrep_round_trip() {
        let rays = vec![iv(&[1, 1]), iv(&[1, 0])];
        let hrep = hrep_of_rays(2, &rays).unwrap();
        assert!(hrep.equalities.is_empty());
        let back = extreme_rays(&hrep).unwrap();
        assert_eq!(back, vec![iv(&[1, 0]), iv(&[1, 1])]);
    }

    #[test]
    fn hrep_of_lower_dimensional_cone() {
        let rays = vec![iv(&[1, 1, 0])];
        let hrep = hrep_of_rays(3, &rays).unwrap();
        assert_eq!(hrep.equalities.len(), 2);
        assert!(hrep.contains_closure(&iv(&[2, 2, 0])));
        assert!(!hrep.contains_closure(&iv(&[1, 2, 0])));
        assert!(!hrep.contains_closure(&iv(&[-1, -1, 0])));
    }

    #[test]
    fn relopen_emptiness() {
        let mut impossible = quadrant_open();
        impossible.strict.push(iv(&[-1, -1]));
        let info = relopen_info(&impossible).unwrap();
        assert!(info.empty);
        assert!(!fm_feasible(&impossible));
        let info = relopen_info(&quadrant_open()).unwrap();
        assert!(!info.empty);
        assert_eq!(info.dim, 2);
        assert!(fm_feasible(&quadrant_open()));
    }

    #[test]
    fn representative_point_in_relopen() {
        let p = representative_point(&quadrant_open()).unwrap().unwrap();
        assert!(quadrant_open().contains_relopen(&p));
    }

    #[test]
    fn decompose_open_quadrant_single_piece() {
        let pieces = decompose_open(&quadrant_open()).unwrap();
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].gens, vec![iv(&[0, 1]), iv(&[1, 0])]);
    }

    #[test]
    fn decompose_diagonal() {
        let diag = ConeHRep {
            n: 2,
            equalities: vec![iv(&[1, -1])],
            weak: vec![],
            strict: vec![iv(&[1, 0]), iv(&[0, 1])],
        };
        let pieces = decompose_open(&diag).unwrap();
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].gens, vec![iv(&[1, 1])]);
    }

    #[test]
    fn decompose_strict_half_of_quadrant() {
        // x1 > 0 and x2 - x1 > 0: closure generated by (1,1) and (0,1).
        let cone = ConeHRep {
            n: 2,
            equalities: vec![],
            weak: vec![],
            strict: vec![iv(&[1, 0]), iv(&[-1, 1])],
        };
        let pieces = decompose_open(&cone).unwrap();
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].gens, vec![iv(&[0, 1]), iv(&[1, 1])]);
    }

    #[test]
    fn decompose_half_open_triangle() {
        // x1 > 0, x2 > 0, x1 <= x2: pieces are the open diagonal and the
        // open cone between the diagonal and the x2 axis.
        let cone = ConeHRep {
            n: 2,
            equalities: vec![],
            weak: vec![iv(&[-1, 1])],
            strict: vec![iv(&[1, 0]), iv(&[0, 1])],
        };
        let mut pieces = decompose_open(&cone).unwrap();
        pieces.sort();
        assert_eq!(
            pieces,
            vec![
                OpenPiece { gens: vec![iv(&[0, 1]), iv(&[1, 1])] },
                OpenPiece { gens: vec![iv(&[1, 1])] },
            ]
        );
    }

    #[test]
    fn decompose_non_unimodular_cone() {
        // Open cone spanned by (2,1) and (0,1): stellar subdivision at (1,1).
        let cone = ConeHRep {
            n: 2,
            equalities: vec![],
            weak: vec![],
            strict: vec![iv(&[1, 0]), iv(&[-1, 2])],
        };
        let pieces = decompose_open(&cone).unwrap();
        // Two open 2-dimensional pieces plus the shared open ray (1,1).
        assert_eq!(pieces.len(), 3);
        for p in &pieces {
            let lat = span_lattice(&p.gens).unwrap();
            assert!(lat.index.is_one());
        }
        // Disjoint cover of the relatively open lattice points in a box.
        for x in 0..=6i64 {
            for y in 0..=6i64 {
                let pt = iv(&[x, y]);
                let inside = cone.contains_relopen(&pt);
                let covering = pieces
                    .iter()
                    .filter(|p| {
                        coords_in_span(&p.gens, &pt)
                            .map(|lam| lam.iter().all(|c| c.is_integer() && c >= &crate::linalg::rat_int(&int(1))))
                            .unwrap_or(false)
                    })
                    .count();
                assert_eq!(covering, usize::from(inside), "point {:?}", pt);
            }
        }
    }

    #[test]
    fn decompose_empty_relopen() {
        let mut cone = quadrant_open();
        cone.strict.push(iv(&[-1, -1]));
        assert!(decompose_open(&cone).unwrap().is_empty());
    }

    #[test]
    fn fm_matches_relopen_info_on_samples() {
        let samples = vec![
            quadrant_open(),
            ConeHRep {
                n: 3,
                equalities: vec![iv(&[1, -1, 0])],
                weak: vec![iv(&[0, 0, 1])],
                strict: vec![iv(&[1, 0, 0]), iv(&[0, 0, 1])],
            },
            ConeHRep {
                n: 2,
                equalities: vec![iv(&[1, 1])],
                strict: vec![iv(&[1, 0])],
                weak: vec![iv(&[0, 1])],
            },
        ];
        for cone in samples {
            let dd_nonempty = match relopen_info(&cone) {
                Ok(info) => !info.empty,
                Err(_) => continue,
            };
            assert_eq!(fm_feasible(&cone), dd_nonempty);
        }
    }

    #[test]
    fn fan_check_accepts_quadrant_fan() {
        let cones = vec![
            vec![iv(&[1, 0]), iv(&[0, 1])],
            vec![iv(&[1, 0])],
            vec![iv(&[0, 1])],
        ];
        assert!(fan_check(2, &cones).unwrap().is_none());
    }

    #[test]
    fn fan_check_rejects_overlapping_cones() {
        let cones = vec![
            vec![iv(&[1, 0]), iv(&[0, 1])],
            vec![iv(&[1, 1]), iv(&[2, 1])],
            vec![iv(&[1, 0])],
            vec![iv(&[0, 1])],
            vec![iv(&[1, 1])],
            vec![iv(&[2, 1])],
        ];
        let violation = fan_check(2, &cones).unwrap();
        assert!(violation.is_some());
    }
}
