//! Newton polyhedra over the nonnegative orthant.
//!
//! The polyhedron of a finite support `S` of lattice points is
//! `conv(S) + R^n_{>=0}`. It is stored by its facet inequalities, its
//! vertices, and its full proper-face lattice. Every face equals
//! `conv(V) + cone{e_i : i in I}` where `V` is the set of polyhedron
//! vertices lying on the face and `I` the set of coordinate directions in
//! its recession cone; the pair `(V, I)` determines the face as a set and
//! serves as its canonical key. Normal cones are emitted in H-form so the
//! relatively open pieces partition the dual weight region exactly.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::cone::{extreme_rays, ConeHRep};
use crate::error::{Error, Result};
use crate::linalg::{dot, primitive, rank_int, Int};
use crate::poly::SparsePoly;

// --- data model ---

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    /// Primitive inner normal with nonnegative entries.
    pub normal: Vec<Int>,
    /// `<normal, x> >= offset` holds on the polyhedron with equality on the facet.
    pub offset: Int,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    /// Indices into `NewtonPolyhedron::vertices` of the vertices on the face.
    pub vertices: BTreeSet<usize>,
    /// Coordinate directions spanning the recession cone of the face.
    pub recession: BTreeSet<usize>,
    /// Indices into `NewtonPolyhedron::support` of support points on the face.
    pub support_idx: BTreeSet<usize>,
    pub dim: usize,
    pub compact: bool,
}

pub type FaceKey = (Vec<usize>, Vec<usize>);

#[derive(Debug, Clone)]
pub struct NewtonPolyhedron {
    pub n: usize,
    /// Deduplicated, sorted support points.
    pub support: Vec<Vec<Int>>,
    pub facets: Vec<Facet>,
    /// Sorted vertex coordinates; a subset of `support`.
    pub vertices: Vec<Vec<Int>>,
    /// All proper nonempty faces, sorted by (dim, key).
    pub faces: Vec<Face>,
    key_index: BTreeMap<FaceKey, usize>,
}

/// One cell of the canonical partition of the weight region: the set of
/// weights `a` whose minimal face is exactly this cell's face. The cell is
/// the relatively open normal cone, and the minimum value is the linear
/// form `a -> <a, l_vec>` there.
#[derive(Debug, Clone)]
pub struct Cell {
    /// Index of the face picked out by the cell's weights.
    pub face: usize,
    /// Index of the compact face on the same vertex set.
    pub gamma: usize,
    /// Recession directions of the face; always within the allowed zero set.
    pub i_set: BTreeSet<usize>,
    /// A vertex of the face; `<a, l_vec>` is the polyhedron minimum on the cell.
    pub l_vec: Vec<Int>,
    /// Relatively open normal cone in H-form.
    pub cone: ConeHRep,
}

fn face_key(face: &Face) -> FaceKey {
    (
        face.vertices.iter().copied().collect(),
        face.recession.iter().copied().collect(),
    )
}

impl NewtonPolyhedron {
    pub fn from_poly(poly: &SparsePoly) -> Result<Self> {
        let support: Vec<Vec<Int>> = poly
            .support()
            .iter()
            .map(|e| e.iter().map(|&x| Int::from(x)).collect())
            .collect();
        NewtonPolyhedron::from_support(poly.n, support)
    }

    pub fn from_support(n: usize, support: Vec<Vec<Int>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("polyhedron needs at least one variable".into()));
        }
        let mut points: BTreeSet<Vec<Int>> = BTreeSet::new();
        for p in support {
            if p.len() != n {
                return Err(Error::InvalidInput("support point of wrong length".into()));
            }
            if p.iter().any(|c| c.is_negative()) {
                return Err(Error::InvalidInput("support point with negative entry".into()));
            }
            points.insert(p);
        }
        if points.is_empty() {
            return Err(Error::InvalidInput("empty support".into()));
        }
        let support: Vec<Vec<Int>> = points.into_iter().collect();

        // Facets: extreme rays (w, c) of the cone of valid inequalities
        // <w, x> + c >= 0, w >= 0. The polyhedron is full-dimensional, so
        // the rays with w != 0 are exactly its facets; (0, 1) is skipped.
        let mut valid = ConeHRep::new(n + 1);
        for p in &support {
            let mut row: Vec<Int> = p.clone();
            row.push(Int::from(1));
            valid.weak.push(row);
        }
        for i in 0..n {
            let mut row = vec![Int::zero(); n + 1];
            row[i] = Int::from(1);
            valid.weak.push(row);
        }
        let mut facets: BTreeMap<Vec<Int>, Int> = BTreeMap::new();
        for ray in extreme_rays(&valid)? {
            let w = &ray[..n];
            if w.iter().all(|c| c.is_zero()) {
                continue;
            }
            let normal = primitive(w);
            let offset = support.iter().map(|p| dot(&normal, p)).min().unwrap();
            facets.insert(normal, offset);
        }
        let facets: Vec<Facet> = facets
            .into_iter()
            .map(|(normal, offset)| Facet { normal, offset })
            .collect();

        // Vertices: support points whose active facet normals span R^n.
        let mut vertices: Vec<Vec<Int>> = Vec::new();
        for p in &support {
            let active: Vec<Vec<Int>> = facets
                .iter()
                .filter(|f| dot(&f.normal, p) == f.offset)
                .map(|f| f.normal.clone())
                .collect();
            if rank_int(&active) == n {
                vertices.push(p.clone());
            }
        }

        let mut poly = NewtonPolyhedron {
            n,
            support,
            facets,
            vertices,
            faces: Vec::new(),
            key_index: BTreeMap::new(),
        };
        poly.build_face_lattice()?;
        Ok(poly)
    }

    fn face_dim(&self, vertices: &BTreeSet<usize>, recession: &BTreeSet<usize>) -> usize {
        let v0 = *vertices.iter().next().expect("face without vertices");
        let mut dirs: Vec<Vec<Int>> = Vec::new();
        for &v in vertices.iter().skip(1) {
            let d: Vec<Int> = (0..self.n)
                .map(|i| &self.vertices[v][i] - &self.vertices[v0][i])
                .collect();
            dirs.push(d);
        }
        for &i in recession {
            let mut e = vec![Int::zero(); self.n];
            e[i] = Int::from(1);
            dirs.push(e);
        }
        rank_int(&dirs)
    }

    fn build_face_lattice(&mut self) -> Result<()> {
        // Seed with the facets; close under pairwise intersection. The
        // intersection of faces (V1, I1) and (V2, I2) is (V1 & V2, I1 & I2),
        // empty exactly when no vertex survives.
        let mut by_key: BTreeMap<FaceKey, Face> = BTreeMap::new();
        for facet in &self.facets {
            let vertices: BTreeSet<usize> = (0..self.vertices.len())
                .filter(|&v| dot(&facet.normal, &self.vertices[v]) == facet.offset)
                .collect();
            let support_idx: BTreeSet<usize> = (0..self.support.len())
                .filter(|&s| dot(&facet.normal, &self.support[s]) == facet.offset)
                .collect();
            let recession: BTreeSet<usize> =
                (0..self.n).filter(|&i| facet.normal[i].is_zero()).collect();
            if vertices.is_empty() {
                return Err(Error::Inconsistent(
                    "facet without a vertex on a pointed polyhedron".into(),
                ));
            }
            let dim = self.face_dim(&vertices, &recession);
            if dim + 1 != self.n {
                return Err(Error::Inconsistent(format!(
                    "facet {:?} has dimension {} in R^{}",
                    facet.normal, dim, self.n
                )));
            }
            let face = Face { vertices, recession, support_idx, dim, compact: false };
            by_key.insert(face_key(&face), face);
        }
        let mut worklist: Vec<FaceKey> = by_key.keys().cloned().collect();
        while let Some(key) = worklist.pop() {
            let face = by_key[&key].clone();
            let mut new_faces: Vec<Face> = Vec::new();
            for other in by_key.values() {
                let vertices: BTreeSet<usize> =
                    face.vertices.intersection(&other.vertices).copied().collect();
                if vertices.is_empty() {
                    continue;
                }
                let recession: BTreeSet<usize> =
                    face.recession.intersection(&other.recession).copied().collect();
                let meet_key: FaceKey = (
                    vertices.iter().copied().collect(),
                    recession.iter().copied().collect(),
                );
                if by_key.contains_key(&meet_key) {
                    continue;
                }
                let support_idx: BTreeSet<usize> =
                    face.support_idx.intersection(&other.support_idx).copied().collect();
                let dim = self.face_dim(&vertices, &recession);
                new_faces.push(Face {
                    vertices,
                    recession,
                    support_idx,
                    dim,
                    compact: false,
                });
            }
            for f in new_faces {
                let k = face_key(&f);
                if by_key.insert(k.clone(), f).is_none() {
                    worklist.push(k);
                }
            }
        }
        let mut faces: Vec<Face> = by_key.into_values().collect();
        for f in &mut faces {
            f.compact = f.recession.is_empty();
        }
        faces.sort_by_key(|f| (f.dim, face_key(f)));
        self.key_index = faces
            .iter()
            .enumerate()
            .map(|(i, f)| (face_key(f), i))
            .collect();
        self.faces = faces;
        Ok(())
    }

    pub fn face_by_key(&self, vertices: &BTreeSet<usize>, recession: &BTreeSet<usize>) -> Option<usize> {
        let key: FaceKey = (
            vertices.iter().copied().collect(),
            recession.iter().copied().collect(),
        );
        self.key_index.get(&key).copied()
    }

    pub fn compact_faces(&self) -> Vec<usize> {
        (0..self.faces.len()).filter(|&i| self.faces[i].compact).collect()
    }

    /// Exponent tuples (as u32 vectors) of the support points on a face.
    pub fn face_support_exps(&self, face: usize) -> Result<BTreeSet<Vec<u32>>> {
        let mut out = BTreeSet::new();
        for &s in &self.faces[face].support_idx {
            let mut e = Vec::with_capacity(self.n);
            for c in &self.support[s] {
                e.push(u32::try_from(c).map_err(|_| {
                    Error::InvalidInput("support exponent exceeds u32".into())
                })?);
            }
            out.insert(e);
        }
        Ok(out)
    }

    /// Coordinates on which every vertex of the face vanishes.
    pub fn pinned_zero_set(&self, face: usize) -> BTreeSet<usize> {
        (0..self.n)
            .filter(|&i| {
                self.faces[face]
                    .vertices
                    .iter()
                    .all(|&v| self.vertices[v][i].is_zero())
            })
            .collect()
    }

    /// Minimum of `<a, .>` over the polyhedron together with the face where
    /// it is attained. Requires `a` nonnegative and nonzero.
    pub fn min_face(&self, a: &[Int]) -> Result<(Int, usize)> {
        if a.len() != self.n {
            return Err(Error::InvalidInput("weight of wrong length".into()));
        }
        if a.iter().any(|c| c.is_negative()) || a.iter().all(|c| c.is_zero()) {
            return Err(Error::InvalidInput(
                "weight must be nonnegative and nonzero".into(),
            ));
        }
        let values: Vec<Int> = self.vertices.iter().map(|v| dot(a, v)).collect();
        let min = values.iter().min().unwrap().clone();
        let argmin: BTreeSet<usize> = (0..values.len()).filter(|&i| values[i] == min).collect();
        let zeroset: BTreeSet<usize> = (0..self.n).filter(|&i| a[i].is_zero()).collect();
        let face = self.face_by_key(&argmin, &zeroset).ok_or_else(|| {
            Error::Inconsistent(format!("weight {:?} exposes a set outside the face lattice", a))
        })?;
        Ok((min, face))
    }

    /// Normal cone of a face: the weights whose minimal face is exactly this
    /// face form the relatively open set; its closure is the weights whose
    /// minimal face contains this face.
    pub fn sigma_hrep(&self, face: usize) -> ConeHRep {
        let f = &self.faces[face];
        let mut cone = ConeHRep::new(self.n);
        let v0 = *f.vertices.iter().next().expect("face without vertices");
        for &v in f.vertices.iter().skip(1) {
            let row: Vec<Int> = (0..self.n)
                .map(|i| &self.vertices[v][i] - &self.vertices[v0][i])
                .collect();
            cone.equalities.push(row);
        }
        for v in 0..self.vertices.len() {
            if f.vertices.contains(&v) {
                continue;
            }
            let row: Vec<Int> = (0..self.n)
                .map(|i| &self.vertices[v][i] - &self.vertices[v0][i])
                .collect();
            cone.strict.push(row);
        }
        for i in 0..self.n {
            let mut row = vec![Int::zero(); self.n];
            row[i] = Int::from(1);
            if f.recession.contains(&i) {
                cone.equalities.push(row);
            } else {
                cone.strict.push(row);
            }
        }
        cone
    }

    /// All coordinate sets `J` such that the face plus `cone{e_j : j in J}`
    /// is again a face. Defined for compact faces.
    pub fn leant_sets(&self, face: usize) -> Result<Vec<BTreeSet<usize>>> {
        let f = &self.faces[face];
        if !f.compact {
            return Err(Error::InvalidInput("leant sets are defined for compact faces".into()));
        }
        let mut out = Vec::new();
        for other in &self.faces {
            if other.vertices == f.vertices {
                out.push(other.recession.clone());
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn maximal_leant_sets(&self, face: usize) -> Result<Vec<BTreeSet<usize>>> {
        let all = self.leant_sets(face)?;
        Ok(all
            .iter()
            .filter(|s| !all.iter().any(|t| *s != t && s.is_subset(t)))
            .cloned()
            .collect())
    }

    /// True when every vertex of the polyhedron has all coordinates
    /// strictly positive (no vertex lies in a coordinate hyperplane).
    pub fn vertex_positivity(&self) -> bool {
        self.vertices.iter().all(|v| v.iter().all(|c| c.is_positive()))
    }

    /// True when every support point has a positive coordinate outside the
    /// allowed zero set (the hypersurface contains the coordinate subspace
    /// cut out by the other variables).
    pub fn support_positive_outside(&self, allowed_zero: &BTreeSet<usize>) -> bool {
        self.support.iter().all(|p| {
            (0..self.n).any(|i| !allowed_zero.contains(&i) && p[i].is_positive())
        })
    }

    /// Cells of the canonical partition of the weight region where exactly
    /// the coordinates in `block1` may vanish: one cell per face whose
    /// recession directions lie in `block1`, carrying the relatively open
    /// normal cone and the minimum form. The cells partition the lattice
    /// points of the region.
    pub fn canonical_cells(&self, block1: &BTreeSet<usize>) -> Result<Vec<Cell>> {
        let mut cells = Vec::new();
        for (idx, f) in self.faces.iter().enumerate() {
            if !f.recession.is_subset(block1) {
                continue;
            }
            let gamma = self
                .face_by_key(&f.vertices, &BTreeSet::new())
                .ok_or_else(|| {
                    Error::Inconsistent(format!(
                        "no compact face on vertex set {:?}",
                        f.vertices
                    ))
                })?;
            let v0 = *f.vertices.iter().next().expect("face without vertices");
            cells.push(Cell {
                face: idx,
                gamma,
                i_set: f.recession.clone(),
                l_vec: self.vertices[v0].clone(),
                cone: self.sigma_hrep(idx),
            });
        }
        Ok(cells)
    }
}

// --- tests ---
