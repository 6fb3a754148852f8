//! Motivic weight-series engine.
//!
//! The zeta series of a polynomial along a section splits over strata
//! (variables pinned identically zero) and, within each stratum, over the
//! cells of the canonical partition of the weight region. Each cell
//! contributes geometric-factor series with coefficients in a ring of
//! formal classes spanned by atoms; an atom records which torus count it
//! stands for (a fiber count of a face polynomial, or its zero count) so
//! classes can be compared symbolically and realized as point counts over
//! finite fields. The limit class is computed twice, by the closed form
//! over clean cells and by the limit functional on the assembled series,
//! and the two must agree atom by atom.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::cone::{relopen_info, ConeHRep};
use crate::error::{Error, Result};
use crate::linalg::{rat_int, Int, Rat};
use crate::oracle::{count_torus_fiber, count_torus_zero};
use crate::poly::{Dims, SparsePoly};
use crate::polyhedron::NewtonPolyhedron;
use crate::series::{cone_series, LaurentL, SrSeries};

/// Strata are enumerated over all variable subsets; this caps the ambient
/// variable count so the enumeration stays tractable.
const MAX_VARS: usize = 16;

// --- atoms and classes ---

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum AtomKind {
    /// Fiber count of the face polynomial over each angular value.
    TorusFiber,
    /// Zero count of the face polynomial in the torus, constant in the
    /// angular value.
    TorusZero,
    /// The class of a point over each angular value.
    Unit,
}

/// A formal torus-count symbol. Atoms from different strata or different
/// faces never merge; the `lean` field keeps same-face contributions from
/// different cells apart until a pushforward forgets it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Atom {
    pub kind: AtomKind,
    /// Variables pinned identically zero in this stratum.
    pub zero_vars: BTreeSet<usize>,
    /// Support exponents (full-length) of the face polynomial being counted.
    pub face: BTreeSet<Vec<u32>>,
    /// Recession directions of the originating cell; dropped by pushforward.
    pub lean: Option<BTreeSet<usize>>,
}

impl Atom {
    pub fn unit() -> Self {
        Atom {
            kind: AtomKind::Unit,
            zero_vars: BTreeSet::new(),
            face: BTreeSet::new(),
            lean: None,
        }
    }
}

/// Where a class lives: over the section base (per-cell audit retained) or
/// over the angular torus alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Base {
    Section,
    Angular,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MotClass {
    pub base: Base,
    pub n_vars: usize,
    pub terms: BTreeMap<Atom, LaurentL>,
}

impl MotClass {
    pub fn new(base: Base, n_vars: usize) -> Self {
        MotClass { base, n_vars, terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, atom: Atom, coef: &LaurentL) {
        if coef.is_zero() {
            return;
        }
        let slot = self.terms.entry(atom).or_insert_with(LaurentL::zero);
        *slot = slot.add(coef);
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    /// Multiplication by `L^k`.
    pub fn shift(&self, k: i64) -> MotClass {
        MotClass {
            base: self.base,
            n_vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.clone(), c.shift(k)))
                .collect(),
        }
    }
}

/// A zeta numerator: geometric-factor series with atom coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSeries {
    pub n_vars: usize,
    pub terms: BTreeMap<Atom, SrSeries>,
}

impl ClassSeries {
    pub fn new(n_vars: usize) -> Self {
        ClassSeries { n_vars, terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, atom: Atom, series: SrSeries) {
        if series.is_zero() {
            return;
        }
        let slot = self.terms.entry(atom).or_insert_with(SrSeries::zero);
        *slot = slot.add(&series);
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }
}

/// Forgets the base stratification: per-cell audit data is dropped and
/// same-symbol contributions merge (and may cancel).
pub fn pushforward(class: &MotClass) -> MotClass {
    let mut out = MotClass::new(Base::Angular, class.n_vars);
    for (atom, coef) in &class.terms {
        let mut a = atom.clone();
        a.lean = None;
        out.add_term(a, coef);
    }
    out
}

// --- pullback of the zeta series and its limit class ---

#[derive(Debug, Clone)]
pub struct CellReport {
    /// Stratum: variables pinned identically zero (full coordinates).
    pub zero_vars: BTreeSet<usize>,
    /// Vertices of the cell's face, in full coordinates.
    pub face_vertices: Vec<Vec<Int>>,
    /// Recession directions of the face (full coordinates).
    pub lean: BTreeSet<usize>,
    /// Directions needing a truncation bound in the order series.
    pub binding: BTreeSet<usize>,
    pub clean: bool,
    /// Dimension of the relatively open weight cone.
    pub cone_dim: usize,
    /// Closed-form coefficient sign (-1)^(cone_dim + 1).
    pub sign: i64,
}

#[derive(Debug, Clone)]
pub struct Pullback {
    pub n_vars: usize,
    pub block1: BTreeSet<usize>,
    /// Order-exact part of the zeta numerator.
    pub z0: ClassSeries,
    /// Higher-order part (face polynomial vanishing at leading order).
    pub z1: ClassSeries,
    /// Limit class over the section base; equals minus the limit of
    /// `z0 + z1`, checked atom by atom.
    pub milnor: MotClass,
    pub cells: Vec<CellReport>,
}

fn lift_indices(local: &BTreeSet<usize>, live: &[usize]) -> BTreeSet<usize> {
    local.iter().map(|&i| live[i]).collect()
}

fn lift_exps(local: &BTreeSet<Vec<u32>>, live: &[usize], n: usize) -> BTreeSet<Vec<u32>> {
    local
        .iter()
        .map(|e| {
            let mut full = vec![0u32; n];
            for (pos, &coord) in live.iter().enumerate() {
                full[coord] = e[pos];
            }
            full
        })
        .collect()
}

fn basis_row(n: usize, i: usize) -> Vec<Int> {
    let mut row = vec![Int::zero(); n];
    row[i] = Int::one();
    row
}

/// Zeta numerator and limit class of `g` along the section where the
/// variables outside `block1` vanish. `block1` variables keep weight zero
/// allowed; all remaining variables carry strictly positive weights.
pub fn milnor_pullback(g: &SparsePoly, block1: &BTreeSet<usize>) -> Result<Pullback> {
    let n = g.n;
    if g.is_zero() {
        return Err(Error::InvalidInput("zero polynomial".into()));
    }
    if n > MAX_VARS {
        return Err(Error::Budget(format!(
            "{} variables exceed the stratum enumeration cap {}",
            n, MAX_VARS
        )));
    }
    if !g.vanishes_at_origin() {
        return Err(Error::Hypothesis("polynomial has a constant term".into()));
    }
    if let Some(&i) = block1.iter().find(|&&i| i >= n) {
        return Err(Error::InvalidInput(format!("base variable index {i} out of range")));
    }

    let mut z0 = ClassSeries::new(n);
    let mut z1 = ClassSeries::new(n);
    let mut closed = MotClass::new(Base::Section, n);
    let mut cells_out: Vec<CellReport> = Vec::new();

    for mask in 0u32..(1u32 << n) {
        let zero_vars: BTreeSet<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let g_d = g.restrict_zero(&zero_vars);
        if g_d.is_zero() {
            continue;
        }
        // Order positivity: every surviving monomial must use a variable
        // with strictly positive weight, otherwise the order series would
        // have an unbounded degree-zero part.
        for exp in g_d.support() {
            let ok = (0..n).any(|i| exp[i] > 0 && !block1.contains(&i));
            if !ok {
                return Err(Error::Hypothesis(format!(
                    "stratum {:?}: a monomial uses only weight-zero variables",
                    zero_vars
                )));
            }
        }
        let live: Vec<usize> = (0..n).filter(|i| !zero_vars.contains(i)).collect();
        let support: Vec<Vec<Int>> = g_d
            .support()
            .iter()
            .map(|e| live.iter().map(|&i| Int::from(e[i])).collect())
            .collect();
        let poly_d = NewtonPolyhedron::from_support(live.len(), support)?;
        let block1_local: BTreeSet<usize> = live
            .iter()
            .enumerate()
            .filter(|(_, &coord)| block1.contains(&coord))
            .map(|(pos, _)| pos)
            .collect();
        let m = live.len();
        let d_len = Int::from(zero_vars.len() as u64);

        for cell in poly_d.canonical_cells(&block1_local)? {
            let face_local = poly_d.face_support_exps(cell.face)?;
            let face = lift_exps(&face_local, &live, n);
            let lean = lift_indices(&cell.i_set, &live);
            let pinned = poly_d.pinned_zero_set(cell.gamma);
            let binding: BTreeSet<usize> =
                pinned.difference(&cell.i_set).copied().collect();
            let clean = binding.is_empty();

            // Weight gradings: order l(a) = <a, l_vec> and exponent
            // l'(a) = s(a) + |D| l(a).
            let l_vec = cell.l_vec.clone();
            let mut lp_vec: Vec<Int> = vec![Int::one(); m];
            for i in 0..m {
                lp_vec[i] += &d_len * &l_vec[i];
            }

            // Order-exact part: bound the pinned directions by the order.
            let mut cone0 = cell.cone.clone();
            debug_assert!(cone0.weak.is_empty());
            for &j in &binding {
                let mut row = l_vec.clone();
                row[j] -= Int::one();
                cone0.weak.push(row);
            }
            let s0 = cone_series(&cone0, &l_vec, &lp_vec)?;
            let phi = Atom {
                kind: AtomKind::TorusFiber,
                zero_vars: zero_vars.clone(),
                face: face.clone(),
                lean: Some(lean.clone()),
            };
            z0.add_term(phi.clone(), s0);

            // Higher-order part, absent on one-monomial faces (their face
            // polynomial has no torus zeros): one extra order coordinate.
            let psi = if face.len() > 1 {
                let mut lifted = ConeHRep::new(m + 1);
                for row in &cell.cone.equalities {
                    let mut r = row.clone();
                    r.push(Int::zero());
                    lifted.equalities.push(r);
                }
                for row in &cell.cone.strict {
                    let mut r = row.clone();
                    r.push(Int::zero());
                    lifted.strict.push(r);
                }
                lifted.strict.push(basis_row(m + 1, m));
                for &j in &binding {
                    let mut row = l_vec.clone();
                    row[j] -= Int::one();
                    row.push(Int::one());
                    lifted.weak.push(row);
                }
                let mut lt = l_vec.clone();
                lt.push(Int::one());
                let mut ltp = lp_vec.clone();
                ltp.push(Int::one() + &d_len);
                let s1 = cone_series(&lifted, &lt, &ltp)?;
                let psi = Atom {
                    kind: AtomKind::TorusZero,
                    zero_vars: zero_vars.clone(),
                    face: face.clone(),
                    lean: Some(lean.clone()),
                };
                z1.add_term(psi.clone(), s1);
                Some(psi)
            } else {
                None
            };

            // Closed form: clean cells only, signed by the actual dimension
            // of the open weight cone.
            let info = relopen_info(&cell.cone)?;
            if info.empty {
                return Err(Error::Inconsistent("cell with empty open weight cone".into()));
            }
            let sign = if (info.dim + 1) % 2 == 0 { 1i64 } else { -1i64 };
            if clean {
                let coef = LaurentL::from_term(0, Int::from(sign));
                closed.add_term(phi.clone(), &coef);
                if let Some(psi) = &psi {
                    closed.add_term(psi.clone(), &coef.neg());
                }
            }

            cells_out.push(CellReport {
                zero_vars: zero_vars.clone(),
                face_vertices: poly_d.faces[cell.face]
                    .vertices
                    .iter()
                    .map(|&v| {
                        let mut full = vec![Int::zero(); n];
                        for (pos, &coord) in live.iter().enumerate() {
                            full[coord] = poly_d.vertices[v][pos].clone();
                        }
                        full
                    })
                    .collect(),
                lean,
                binding,
                clean,
                cone_dim: info.dim,
                sign,
            });
        }
    }

    // The two routes to the limit class must agree atom by atom; killed
    // cells must contribute vanishing limits.
    let mut limit = MotClass::new(Base::Section, n);
    for (atom, series) in z0.terms.iter().chain(z1.terms.iter()) {
        limit.add_term(atom.clone(), &series.limit().neg());
    }
    if limit.terms != closed.terms {
        return Err(Error::Inconsistent(format!(
            "closed-form class differs from the series limit: {} closed vs {} limit atoms",
            closed.terms.len(),
            limit.terms.len()
        )));
    }

    Ok(Pullback { n_vars: n, block1: block1.clone(), z0, z1, milnor: closed, cells: cells_out })
}

/// The limit class at the origin: every variable carries positive weight.
pub fn milnor_at_origin(g: &SparsePoly) -> Result<Pullback> {
    milnor_pullback(g, &BTreeSet::new())
}

// --- realization as finite-field point counts ---

/// Face polynomial of an atom, projected to the variables live in its
/// stratum. `g` must be the polynomial the atom was built from.
fn atom_poly(g: &SparsePoly, atom: &Atom) -> Result<SparsePoly> {
    let face = g.face_poly(&atom.face);
    if face.terms.len() != atom.face.len() {
        return Err(Error::InvalidInput(
            "atom face exponents missing from the polynomial".into(),
        ));
    }
    let live: Vec<usize> = (0..g.n).filter(|i| !atom.zero_vars.contains(i)).collect();
    let mut out = SparsePoly::zero(live.len());
    for (exp, coef) in &face.terms {
        if atom.zero_vars.iter().any(|&i| exp[i] > 0) {
            return Err(Error::Inconsistent(
                "atom face touches a variable pinned zero in its stratum".into(),
            ));
        }
        out.add_term(live.iter().map(|&i| exp[i]).collect(), coef.clone());
    }
    Ok(out)
}

/// Point counts of a class over the prime field with `q` elements, one
/// exact rational per angular value `t = 1..q-1` (index `t-1`).
pub fn realize_class(g: &SparsePoly, class: &MotClass, q: u64, budget: u64) -> Result<Vec<Rat>> {
    if q < 2 || !crate::oracle::is_prime(q) {
        return Err(Error::InvalidInput(format!("q = {q} is not prime")));
    }
    let width = (q - 1) as usize;
    let mut out = vec![Rat::zero(); width];
    let mut fiber_cache: BTreeMap<(BTreeSet<usize>, BTreeSet<Vec<u32>>), Vec<u64>> =
        BTreeMap::new();
    let mut zero_cache: BTreeMap<(BTreeSet<usize>, BTreeSet<Vec<u32>>), u64> = BTreeMap::new();
    for (atom, coef) in &class.terms {
        let c = coef.eval_at(&rat_int(&Int::from(q)));
        match atom.kind {
            AtomKind::Unit => {
                for slot in out.iter_mut() {
                    *slot += c.clone();
                }
            }
            AtomKind::TorusFiber => {
                let key = (atom.zero_vars.clone(), atom.face.clone());
                if !fiber_cache.contains_key(&key) {
                    let p = atom_poly(g, atom)?;
                    fiber_cache.insert(key.clone(), count_torus_fiber(&p, q, budget)?);
                }
                let counts = &fiber_cache[&key];
                for (t, slot) in out.iter_mut().enumerate() {
                    *slot += c.clone() * rat_int(&Int::from(counts[t]));
                }
            }
            AtomKind::TorusZero => {
                let key = (atom.zero_vars.clone(), atom.face.clone());
                if !zero_cache.contains_key(&key) {
                    let p = atom_poly(g, atom)?;
                    zero_cache.insert(key.clone(), count_torus_zero(&p, q, budget)?);
                }
                let z = rat_int(&Int::from(zero_cache[&key]));
                for slot in out.iter_mut() {
                    *slot += c.clone() * z.clone();
                }
            }
        }
    }
    Ok(out)
}

// --- equality checks ---

#[derive(Debug, Clone)]
pub struct ConjectureOutcome {
    pub lhs: MotClass,
    pub rhs: MotClass,
    pub h: SparsePoly,
    /// Literal atom-map equality (meaningful when both sides are zero or
    /// live on the same variables).
    pub symbolic_equal: bool,
    /// Per prime: do the two sides realize to the same counts for every
    /// angular value?
    pub realized: Vec<(u64, bool)>,
    pub lhs_pullback: Pullback,
    pub rhs_pullback: Option<Pullback>,
}

impl ConjectureOutcome {
    pub fn holds(&self) -> bool {
        self.symbolic_equal || (!self.realized.is_empty() && self.realized.iter().all(|(_, ok)| *ok))
    }
}

/// Compares the pushforward of the limit class along the first block's
/// section with `L^(d1)` times the limit class at the origin of the
/// last-block part. Needs three blocks.
pub fn conjecture_check(
    f: &SparsePoly,
    dims: &Dims,
    q_list: &[u64],
    budget: u64,
) -> Result<ConjectureOutcome> {
    if dims.blocks.len() != 3 {
        return Err(Error::InvalidInput("conjecture check needs three blocks".into()));
    }
    if f.n != dims.n() {
        return Err(Error::InvalidInput("polynomial does not match dims".into()));
    }
    if let Some(exp) = f.balance_violation(&dims.weights()) {
        return Err(Error::Hypothesis(format!(
            "monomial with exponents {:?} is not balanced",
            exp
        )));
    }
    let d1 = dims.blocks[0];
    let block1: BTreeSet<usize> = dims.block_range(0).collect();
    let lhs_pullback = milnor_pullback(f, &block1)?;
    let lhs = pushforward(&lhs_pullback.milnor);

    let h = f.extract_h(dims);
    let (rhs, rhs_pullback) = if h.is_zero() {
        (MotClass::new(Base::Angular, 0), None)
    } else {
        let pb = milnor_at_origin(&h)?;
        (pushforward(&pb.milnor).shift(d1 as i64), Some(pb))
    };

    let symbolic_equal = lhs.terms == rhs.terms
        && (lhs.terms.is_empty() || lhs.n_vars == rhs.n_vars);
    let mut realized = Vec::new();
    for &q in q_list {
        let left = realize_class(f, &lhs, q, budget)?;
        let right = if rhs.terms.is_empty() {
            vec![Rat::zero(); (q - 1) as usize]
        } else {
            realize_class(&h, &rhs, q, budget)?
        };
        realized.push((q, left == right));
    }
    Ok(ConjectureOutcome {
        lhs,
        rhs,
        h,
        symbolic_equal,
        realized,
        lhs_pullback,
        rhs_pullback,
    })
}

#[derive(Debug, Clone)]
pub struct VanishingOutcome {
    pub class: MotClass,
    pub symbolic_zero: bool,
    pub realized_zero: Vec<(u64, bool)>,
    pub pullback: Pullback,
}

/// For a two-block polynomial balanced under weights (+1, -1), the
/// pushforward of the limit class along the first block's section must be
/// the zero class.
pub fn vanishing_check(
    g: &SparsePoly,
    dims: &Dims,
    q_list: &[u64],
    budget: u64,
) -> Result<VanishingOutcome> {
    if dims.blocks.len() != 2 {
        return Err(Error::InvalidInput("vanishing check needs two blocks".into()));
    }
    if g.n != dims.n() {
        return Err(Error::InvalidInput("polynomial does not match dims".into()));
    }
    if let Some(exp) = g.balance_violation(&dims.weights()) {
        return Err(Error::Hypothesis(format!(
            "monomial with exponents {:?} is not balanced",
            exp
        )));
    }
    let block1: BTreeSet<usize> = dims.block_range(0).collect();
    let pullback = milnor_pullback(g, &block1)?;
    let class = pushforward(&pullback.milnor);
    let symbolic_zero = class.is_zero();
    let mut realized_zero = Vec::new();
    for &q in q_list {
        let counts = realize_class(g, &class, q, budget)?;
        realized_zero.push((q, counts.iter().all(|c| c.is_zero())));
    }
    Ok(VanishingOutcome { class, symbolic_zero, realized_zero, pullback })
}

// --- tests ---
