//! Cornered algebras `e_I A e_I`, the functors `j*` and `j_!` on
//! finite-dimensional modules, and truncated graded modules with `c*` and
//! z-torsion.
//!
//! A module over the cornered algebra is stored as a representation of its
//! generator quiver: one vertex per element of `I` and one unbarred arrow per
//! algebra generator.
//!
//! Warning: only the exactness of `j*` and the identity `j* j_! = id` are
//! relied on here. Statements about higher Ext groups of `j_!` are known to be
//! delicate and nothing in this crate depends on them.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::algebra::{AlgebraKind, Class, GradedAlgebra, SAFETY_WINDOW};
use crate::error::{Error, Result};
use crate::gamma::GroupData;
use crate::linalg::{sparse_from_map, Matrix, SparseEchelon, SparseVec, Subspace};
use crate::quiver::{normalize_corner, ArrowKind, Quiver};
use crate::rep::QuiverRep;
use crate::scalar::Field;

/// Module over a cornered algebra, as a representation of its generator quiver.
pub type CorneredModule<S> = QuiverRep<S>;

#[derive(Clone, Debug)]
pub struct CorneredAlgebra<S> {
    alg: GradedAlgebra<S>,
    corner: Vec<usize>,
    generators: Vec<Class<S>>,
    gen_quiver: Arc<Quiver>,
    factor_bound: usize,
}

impl<S: Field> CorneredAlgebra<S> {
    /// `e_I Pi e_I` or `e_I Pi• e_I`.
    pub fn new(g: &GroupData, kind: &AlgebraKind, corner: &[usize]) -> Result<Self> {
        if matches!(kind, AlgebraKind::FramedPreprojective(_)) {
            return Err(Error::ShapeMismatch("cornering is supported for Pi and Pi• only".into()));
        }
        let alg = GradedAlgebra::<S>::for_group(g, kind)?;
        let corner = normalize_corner(corner, alg.quiver().num_finite)?;
        let bound = crate::algebra::factor_through_bound(g, &corner)?;
        Self::from_algebra(alg, &corner, bound)
    }

    /// Paths between corner vertices that avoid the corner in between have
    /// length at most `factor_bound + 2`, so generators live in those degrees.
    pub fn from_algebra(mut alg: GradedAlgebra<S>, corner: &[usize], factor_bound: usize) -> Result<Self> {
        let corner = normalize_corner(corner, alg.quiver().num_finite)?;
        let top = factor_bound + 2;
        let mut generators: Vec<Class<S>> = Vec::new();
        for d in 1..=top {
            alg.ensure_degree(d)?;
            let mut ech = SparseEchelon::new();
            for g in generators.clone() {
                for &s in &corner {
                    for w in alg.block_words(g.source, s, d - g.degree)? {
                        let wc = alg.word_class(d - g.degree, w);
                        let prod = alg.multiply_classes(&g, &wc)?;
                        ech.insert(&prod.coeffs);
                    }
                }
            }
            for &t in &corner {
                for &s in &corner {
                    for w in alg.block_words(t, s, d)? {
                        if ech.insert(&vec![(w, S::one())]) {
                            generators.push(alg.word_class(d, w));
                        }
                    }
                }
            }
        }
        let pos = |v: usize| corner.iter().position(|&x| x == v).expect("corner vertex");
        let mut q = Quiver::empty(alg.quiver().group, corner.len());
        for g in &generators {
            q.push_arrow(pos(g.target), pos(g.source), ArrowKind::Generator);
        }
        Ok(CorneredAlgebra { alg, corner, generators, gen_quiver: Arc::new(q), factor_bound })
    }

    pub fn corner(&self) -> &[usize] {
        &self.corner
    }

    pub fn generators(&self) -> &[Class<S>] {
        &self.generators
    }

    pub fn generator_quiver(&self) -> &Arc<Quiver> {
        &self.gen_quiver
    }

    pub fn algebra(&self) -> &GradedAlgebra<S> {
        &self.alg
    }

    pub fn algebra_mut(&mut self) -> &mut GradedAlgebra<S> {
        &mut self.alg
    }

    pub fn factor_bound(&self) -> usize {
        self.factor_bound
    }

    pub fn max_generator_degree(&self) -> usize {
        self.generators.iter().map(|g| g.degree).max().unwrap_or(0)
    }

    fn position(&self, v: usize) -> Option<usize> {
        self.corner.iter().position(|&x| x == v)
    }

    /// Matrix of an algebra element acting on `m`.
    pub fn class_matrix(&self, m: &QuiverRep<S>, c: &Class<S>) -> Matrix<S> {
        let mut out = Matrix::zeros(m.dims()[c.target], m.dims()[c.source]);
        for (w, x) in &c.coeffs {
            let word = self.alg.word(c.degree, *w);
            out = out.add(&m.path_matrix(c.target, &word.path).scale(x));
        }
        out
    }
}

/// Restriction `e_I M` with generators acting through path products.
pub fn j_star<S: Field>(alg: &CorneredAlgebra<S>, m: &QuiverRep<S>) -> Result<CorneredModule<S>> {
    if **m.quiver() != **alg.alg.quiver() {
        return Err(Error::ShapeMismatch("module is not over the cornered algebra's quiver".into()));
    }
    let residuals = m.check_relations()?;
    let bad: Vec<String> = residuals
        .iter()
        .filter(|r| !r.matrix.is_zero())
        .map(|r| format!("relation at ({}, {})", r.target, r.source))
        .collect();
    if !bad.is_empty() {
        return Err(Error::RepresentativeDependence(bad.join(", ")));
    }
    let dims = alg.corner.iter().map(|&v| m.dims()[v]).collect();
    let maps = alg.generators.iter().map(|g| alg.class_matrix(m, g)).collect();
    QuiverRep::new(alg.gen_quiver.clone(), dims, maps)
}

const DEGREE_SHIFT: u32 = 40;
const WORD_SHIFT: u32 = 16;
const DEGREE_CEILING: usize = 1 << 20;

/// Column id of `word ⊗ basis_c` in degree `k`. Higher degrees get smaller
/// ids so that elimination prefers to express them through lower ones.
fn encode(k: usize, word: usize, c: usize) -> usize {
    ((DEGREE_CEILING - k) << DEGREE_SHIFT) | (word << WORD_SHIFT) | c
}

fn decode(id: usize) -> (usize, usize, usize) {
    (
        DEGREE_CEILING - (id >> DEGREE_SHIFT),
        (id >> WORD_SHIFT) & ((1 << (DEGREE_SHIFT - WORD_SHIFT)) - 1),
        id & ((1 << WORD_SHIFT) - 1),
    )
}

/// The induced module `A e_I ⊗ m` together with its presentation data.
#[derive(Clone, Debug)]
pub struct Induced<S> {
    pub module: QuiverRep<S>,
    /// Degree at which the computation stopped.
    pub truncation: usize,
    /// Dimension of the truncated tensor product after each degree.
    pub dims_history: Vec<usize>,
    echelon: SparseEchelon<S>,
    basis_at: Vec<Vec<usize>>,
}

impl<S: Field> Induced<S> {
    /// Coordinates of `word ⊗ v` in the basis at the word's target.
    fn coordinates(&self, v: usize, vec: &SparseVec<S>) -> Vec<S> {
        let reduced = self.echelon.reduce(vec);
        let index: HashMap<usize, usize> = self.basis_at[v].iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut out = vec![S::zero(); self.basis_at[v].len()];
        for (c, x) in reduced {
            out[index[&c]] = x;
        }
        out
    }
}

pub fn j_shriek<S: Field>(alg: &mut CorneredAlgebra<S>, m: &CorneredModule<S>) -> Result<Induced<S>> {
    j_shriek_with(alg, m, 0)
}

/// `j_!` computed degree by degree; stops once `SAFETY_WINDOW` consecutive
/// degrees add nothing, and not before degree `min_degree`.
pub fn j_shriek_with<S: Field>(alg: &mut CorneredAlgebra<S>, m: &CorneredModule<S>, min_degree: usize) -> Result<Induced<S>> {
    if **m.quiver() != *alg.gen_quiver {
        return Err(Error::ShapeMismatch("module is not over this cornered algebra".into()));
    }
    let cap = alg.alg.cap();
    let start = alg.max_generator_degree() + SAFETY_WINDOW;
    let mut ech = SparseEchelon::new();
    let mut all_cols: Vec<usize> = Vec::new();
    let mut history = Vec::new();
    let mut quiet = 0;
    let gens = alg.generators.clone();
    for k in 0..=cap {
        alg.alg.ensure_degree(k)?;
        let words = alg.alg.words(k)?.to_vec();
        let mut new_cols = Vec::new();
        for (wi, w) in words.iter().enumerate() {
            if let Some(p) = alg.position(w.source) {
                for c in 0..m.dims()[p] {
                    new_cols.push(encode(k, wi, c));
                }
            }
        }
        all_cols.extend(&new_cols);
        for (gi, g) in gens.iter().enumerate() {
            if g.degree > k {
                continue;
            }
            let low = k - g.degree;
            let s = alg.position(g.source).expect("corner generator");
            let gm = &m.maps()[gi];
            let lower: Vec<(usize, usize)> = alg
                .alg
                .words(low)?
                .iter()
                .enumerate()
                .filter(|(_, w)| w.source == g.target)
                .map(|(i, w)| (i, w.target))
                .collect();
            for (pi, _) in lower {
                let p = alg.alg.word_class(low, pi);
                let prod = alg.alg.multiply_classes(&p, g)?;
                for c in 0..m.dims()[s] {
                    let mut acc = BTreeMap::new();
                    for (w, x) in &prod.coeffs {
                        acc.insert(encode(k, *w, c), x.clone());
                    }
                    for j in 0..gm.rows() {
                        let x = gm[(j, c)].clone();
                        if !x.is_zero() {
                            let e = acc.entry(encode(low, pi, j)).or_insert_with(S::zero);
                            *e = e.clone() - x;
                        }
                    }
                    ech.insert(&sparse_from_map(acc));
                }
            }
        }
        let dim = all_cols.len() - ech.rank();
        let settled = new_cols.iter().all(|c| ech.is_pivot(*c));
        if settled && history.last() == Some(&dim) {
            quiet += 1;
        } else {
            quiet = 0;
        }
        history.push(dim);
        if quiet >= SAFETY_WINDOW && k >= start.max(min_degree) {
            return build_induced(alg, ech, &all_cols, k, history);
        }
    }
    Err(Error::TruncationNotReached { cap, dims: history })
}

fn build_induced<S: Field>(
    alg: &mut CorneredAlgebra<S>,
    ech: SparseEchelon<S>,
    all_cols: &[usize],
    truncation: usize,
    history: Vec<usize>,
) -> Result<Induced<S>> {
    let q = alg.alg.quiver().clone();
    let n = q.num_vertices();
    let mut basis_at = vec![Vec::new(); n];
    let mut cols: Vec<usize> = all_cols.iter().copied().filter(|c| !ech.is_pivot(*c)).collect();
    cols.sort_by_key(|&c| {
        let (k, w, x) = decode(c);
        (k, w, x)
    });
    for &c in &cols {
        let (k, w, _) = decode(c);
        basis_at[alg.alg.word(k, w).target].push(c);
    }
    let dims: Vec<usize> = basis_at.iter().map(|b| b.len()).collect();
    let mut induced = Induced {
        module: QuiverRep::zero(q.clone(), dims.clone()),
        truncation,
        dims_history: history,
        echelon: ech,
        basis_at,
    };
    let mut maps = Vec::with_capacity(q.arrows.len());
    for a in &q.arrows {
        let mut mat = Matrix::zeros(dims[a.tail], dims[a.head]);
        for (j, &c) in induced.basis_at[a.head].iter().enumerate() {
            let (k, w, x) = decode(c);
            let mut path = vec![a.id];
            path.extend(alg.alg.word(k, w).path.iter().copied());
            let cls = alg.alg.reduce_path(a.tail, &path)?;
            let vec: SparseVec<S> = {
                let mut v: Vec<(usize, S)> = cls.coeffs.iter().map(|(w2, y)| (encode(k + 1, *w2, x), y.clone())).collect();
                v.sort_by_key(|e| e.0);
                v
            };
            let coords = induced.coordinates(a.tail, &vec);
            for (i, y) in coords.into_iter().enumerate() {
                mat[(i, j)] = y;
            }
        }
        maps.push(mat);
    }
    induced.module = QuiverRep::new(q, dims, maps)?;
    Ok(induced)
}

/// The map `j_! m -> j_! m'` induced by a cornered homomorphism `f`, given by
/// one matrix per corner vertex.
pub fn induced_map<S: Field>(
    alg: &CorneredAlgebra<S>,
    src: &Induced<S>,
    dst: &Induced<S>,
    f: &[Matrix<S>],
) -> Result<Vec<Matrix<S>>> {
    let top = src.basis_at.iter().flatten().map(|&c| decode(c).0).max().unwrap_or(0);
    if dst.truncation < top + 1 {
        return Err(Error::TruncationNotReached { cap: dst.truncation, dims: dst.dims_history.clone() });
    }
    let n = src.basis_at.len();
    let mut out = Vec::with_capacity(n);
    for v in 0..n {
        let mut mat = Matrix::zeros(dst.basis_at[v].len(), src.basis_at[v].len());
        for (j, &c) in src.basis_at[v].iter().enumerate() {
            let (k, w, x) = decode(c);
            let s = alg.position(alg.alg.word(k, w).source).expect("corner source");
            let fs = &f[s];
            let vec: SparseVec<S> =
                (0..fs.rows()).filter(|&r| !fs[(r, x)].is_zero()).map(|r| (encode(k, w, r), fs[(r, x)].clone())).collect::<BTreeMap<_, _>>().into_iter().collect();
            for (i, y) in dst.coordinates(v, &vec).into_iter().enumerate() {
                mat[(i, j)] = y;
            }
        }
        out.push(mat);
    }
    Ok(out)
}

/// A graded module known on degrees `start ..= start + dims.len() - 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedGradedModule<S> {
    /// The tripled quiver.
    pub quiver: Arc<Quiver>,
    /// Vertices carried by the module; `None` means all.
    pub corner: Option<Vec<usize>>,
    pub start: usize,
    /// `dims[k - start][v]`.
    pub dims: Vec<Vec<usize>>,
    /// `(arrow, k)` maps degree `k` at the head to degree `k + 1` at the tail.
    pub actions: BTreeMap<(usize, usize), Matrix<S>>,
}

impl<S: Field> TruncatedGradedModule<S> {
    pub fn end(&self) -> usize {
        self.start + self.dims.len() - 1
    }

    pub fn carries(&self, v: usize) -> bool {
        self.corner.as_ref().is_none_or(|c| c.contains(&v))
    }

    fn carried_arrows(&self) -> Vec<usize> {
        self.quiver.arrows.iter().filter(|a| self.carries(a.tail) && self.carries(a.head)).map(|a| a.id).collect()
    }

    pub fn dim(&self, k: usize, v: usize) -> usize {
        if k < self.start || k > self.end() {
            0
        } else {
            self.dims[k - self.start][v]
        }
    }

    pub fn action(&self, a: usize, k: usize) -> Matrix<S> {
        let ar = self.quiver.arrow(a);
        self.actions.get(&(a, k)).cloned().unwrap_or_else(|| Matrix::zeros(self.dim(k + 1, ar.tail), self.dim(k, ar.head)))
    }

    /// `z_v` from degree `k` to `k + 1`.
    pub fn z_action(&self, k: usize, v: usize) -> Matrix<S> {
        match self.quiver.loop_at(v) {
            Some(l) if self.carries(v) => self.action(l, k),
            _ => Matrix::zeros(self.dim(k + 1, v), self.dim(k, v)),
        }
    }

    pub fn check_shapes(&self) -> Result<()> {
        for (&(a, k), m) in &self.actions {
            let ar = self.quiver.arrow(a);
            if k >= self.end() || k < self.start {
                return Err(Error::ShapeMismatch(format!("action of arrow {a} at degree {k} leaves the window")));
            }
            if !self.carries(ar.tail) || !self.carries(ar.head) {
                return Err(Error::ShapeMismatch(format!("arrow {a} touches an uncarried vertex")));
            }
            if m.shape() != (self.dim(k + 1, ar.tail), self.dim(k, ar.head)) {
                return Err(Error::ShapeMismatch(format!("arrow {a} at degree {k}")));
            }
        }
        Ok(())
    }

    /// Relation residuals on every degree whose image stays in the window.
    pub fn relation_defects(&self) -> Vec<(usize, usize, usize)> {
        let mut bad = Vec::new();
        for rel in self.quiver.relations() {
            let ok = rel.terms.iter().all(|(_, [x, y])| {
                let (ax, ay) = (self.quiver.arrow(*x), self.quiver.arrow(*y));
                self.carries(ax.tail) && self.carries(ax.head) && self.carries(ay.tail) && self.carries(ay.head)
            });
            if !ok {
                continue;
            }
            for k in self.start..self.end().saturating_sub(1) {
                let mut r = Matrix::zeros(self.dim(k + 2, rel.target), self.dim(k, rel.source));
                for (c, [x, y]) in &rel.terms {
                    r = r.add(&self.action(*x, k + 1).mul(&self.action(*y, k)).scale(&S::from_i64(*c)));
                }
                if !r.is_zero() {
                    bad.push((rel.target, rel.source, k));
                }
            }
        }
        bad
    }

    /// The free module `⊕_k A_k e_i` on degrees `0..=top`.
    pub fn free(alg: &mut GradedAlgebra<S>, i: usize, corner: Option<&[usize]>, top: usize) -> Result<Self> {
        alg.ensure_degree(top + 1)?;
        let quiver = alg.quiver().clone();
        let corner = corner.map(|c| normalize_corner(c, quiver.num_finite)).transpose()?;
        let carries = |v: usize| corner.as_ref().is_none_or(|c| c.contains(&v));
        let n = quiver.num_vertices();
        let mut dims = Vec::with_capacity(top + 1);
        for k in 0..=top {
            dims.push((0..n).map(|v| if carries(v) { alg.dim(v, i, k) } else { Ok(0) }).collect::<Result<Vec<_>>>()?);
        }
        let mut actions = BTreeMap::new();
        for a in quiver.arrows.iter().filter(|a| carries(a.tail) && carries(a.head)) {
            for k in 0..top {
                let src = alg.block_words(a.head, i, k)?;
                let dst = alg.block_words(a.tail, i, k + 1)?;
                let pos: HashMap<usize, usize> = dst.iter().enumerate().map(|(p, &w)| (w, p)).collect();
                let mut m = Matrix::zeros(dst.len(), src.len());
                for (j, &w) in src.iter().enumerate() {
                    let mut path = vec![a.id];
                    path.extend(alg.word(k, w).path.iter().copied());
                    for (w2, x) in alg.reduce_path(a.tail, &path)?.coeffs {
                        m[(pos[&w2], j)] = x;
                    }
                }
                actions.insert((a.id, k), m);
            }
        }
        Ok(TruncatedGradedModule { quiver, corner, start: 0, dims, actions })
    }

    pub fn total_dims(&self) -> Vec<usize> {
        self.dims.iter().map(|d| d.iter().sum()).collect()
    }
}

/// Degreewise quotient by the image of `z`; loops act by zero on the result.
pub fn c_star<S: Field>(m: &TruncatedGradedModule<S>) -> Result<TruncatedGradedModule<S>> {
    m.check_shapes()?;
    let n = m.quiver.num_vertices();
    let mut bases: Vec<Vec<Matrix<S>>> = Vec::new();
    let mut images: Vec<Vec<Subspace<S>>> = Vec::new();
    let mut dims = Vec::new();
    for k in m.start..=m.end() {
        let mut b = Vec::with_capacity(n);
        let mut im = Vec::with_capacity(n);
        let mut d = Vec::with_capacity(n);
        for v in 0..n {
            let full = Subspace::full(m.dim(k, v));
            let img = if k > m.start {
                Subspace::image(&m.z_action(k - 1, v), &Subspace::full(m.dim(k - 1, v)))
            } else {
                Subspace::zero(m.dim(k, v))
            };
            d.push(m.dim(k, v) - img.dim());
            b.push(full.adapted_basis(&img));
            im.push(img);
        }
        bases.push(b);
        images.push(im);
        dims.push(d);
    }
    let mut actions = BTreeMap::new();
    for a in m.carried_arrows() {
        let ar = m.quiver.arrow(a);
        for k in m.start..m.end() {
            let i = k - m.start;
            let (t, h) = (ar.tail, ar.head);
            let act = m.action(a, k);
            if ar.kind == ArrowKind::Loop {
                actions.insert((a, k), Matrix::zeros(dims[i + 1][t], dims[i][h]));
                continue;
            }
            if !images[i + 1][t].contains(&Subspace::image(&act, &images[i][h])) {
                return Err(Error::RelationViolation(vec![format!("arrow {a} does not commute with z at degree {k}")]));
            }
            let skip_h = images[i][h].dim();
            let skip_t = images[i + 1][t].dim();
            let comp = bases[i][h].select_cols(&(skip_h..bases[i][h].cols()).collect::<Vec<_>>());
            let coords = bases[i + 1][t].solve(&act.mul(&comp)).expect("adapted basis spans the component");
            actions.insert((a, k), coords.block(skip_t, 0, dims[i + 1][t], dims[i][h]));
        }
    }
    Ok(TruncatedGradedModule { quiver: m.quiver.clone(), corner: m.corner.clone(), start: m.start, dims, actions })
}

/// Kernels of `z_I` on degrees `start .. end`, indexed `[k - start][v]`.
pub fn z_torsion<S: Field>(m: &TruncatedGradedModule<S>) -> Vec<Vec<Subspace<S>>> {
    let n = m.quiver.num_vertices();
    (m.start..m.end())
        .map(|k| {
            (0..n)
                .map(|v| {
                    let z = m.z_action(k, v);
                    let ker = z.kernel();
                    Subspace::span(&ker)
                })
                .collect()
        })
        .collect()
}

pub fn is_z_torsion_free<S: Field>(m: &TruncatedGradedModule<S>) -> bool {
    z_torsion(m).iter().flatten().all(|s| s.dim() == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::build_group;
    use crate::rep::{are_isomorphic, random_flat_rep};
    use crate::scalar::Rational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cornered(desc: &str, set: &[usize]) -> CorneredAlgebra<Rational> {
        let g = build_group(desc.parse().unwrap()).unwrap();
        CorneredAlgebra::new(&g, &AlgebraKind::GradedPreprojective, set).unwrap()
    }

    #[test]
    fn encoding_round_trips() {
        for (k, w, c) in [(0, 0, 0), (3, 17, 2), (15, 4000, 9)] {
            assert_eq!(decode(encode(k, w, c)), (k, w, c));
        }
        assert!(encode(5, 0, 0) < encode(4, 100, 3));
    }

    #[test]
    fn full_corner_generators_are_arrows() {
        let c = cornered("A1", &[0, 1]);
        assert_eq!(c.generators().len(), 6);
        assert!(c.generators().iter().all(|g| g.degree == 1));
    }

    #[test]
    fn invariant_ring_generators() {
        // z, x^2, xy, y^2 generate the Z/2 invariants of C[x, y, z]
        let c = cornered("A1", &[0]);
        let mut degs: Vec<usize> = c.generators().iter().map(|g| g.degree).collect();
        degs.sort();
        assert_eq!(degs, vec![1, 2, 2, 2]);
    }

    #[test]
    fn j_star_identity_and_vanishing() {
        let c = cornered("A2", &[0, 1, 2]);
        let q = c.algebra().quiver().clone();
        let s = QuiverRep::<Rational>::vertex_simple(q.clone(), 1);
        let r = j_star(&c, &s).unwrap();
        assert_eq!(r.dims(), &[0, 1, 0]);
        let c0 = cornered("A2", &[0]);
        assert_eq!(j_star(&c0, &s).unwrap().dims(), &[0]);
    }

    #[test]
    fn j_star_rejects_unflat() {
        let c = cornered("A1", &[0]);
        let q = c.algebra().quiver().clone();
        let mut m = QuiverRep::<Rational>::zero(q, vec![1, 1]);
        m.set_map(0, Matrix::from_i64_rows(&[&[1]])).unwrap();
        m.set_map(1, Matrix::from_i64_rows(&[&[1]])).unwrap();
        assert!(matches!(j_star(&c, &m), Err(Error::RepresentativeDependence(_))));
    }

    #[test]
    fn j_shriek_of_simple_is_simple() {
        let mut c = cornered("A2", &[0, 1, 2]);
        let gq = c.generator_quiver().clone();
        let m = QuiverRep::<Rational>::vertex_simple(gq, 2);
        let ind = j_shriek(&mut c, &m).unwrap();
        assert_eq!(ind.module.dims(), &[0, 0, 1]);
        assert!(ind.module.maps().iter().all(|x| x.is_zero()));
    }

    #[test]
    fn round_trip_a1() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut c = cornered("A1", &[0]);
        let q = c.algebra().quiver().clone();
        for _ in 0..4 {
            let big = random_flat_rep::<Rational, _>(q.clone(), vec![1, 2], 0.8, &mut rng);
            let m = j_star(&c, &big).unwrap();
            let ind = j_shriek(&mut c, &m).unwrap();
            assert!(ind.module.is_flat());
            assert!(ind.module.dims()[0] >= m.dims()[0]);
            let back = j_star(&c, &ind.module).unwrap();
            assert!(are_isomorphic(&back, &m));
        }
    }

    #[test]
    fn free_module_is_torsion_free() {
        let g = build_group("A2".parse().unwrap()).unwrap();
        let mut alg = GradedAlgebra::<Rational>::for_group(&g, &AlgebraKind::GradedPreprojective).unwrap();
        let f = TruncatedGradedModule::free(&mut alg, 0, None, 5).unwrap();
        assert!(f.relation_defects().is_empty());
        assert!(is_z_torsion_free(&f));
        let fc = TruncatedGradedModule::free(&mut alg, 0, Some(&[0]), 5).unwrap();
        assert!(is_z_torsion_free(&fc));
        let c = c_star(&f).unwrap();
        // dim (c* F)_k = dim F_k - rank z, and z acts by zero afterwards
        for k in 1..=5 {
            assert_eq!(c.total_dims()[k], f.total_dims()[k] - f.total_dims()[k - 1]);
        }
        assert!(!is_z_torsion_free(&c));
        assert!(c.relation_defects().is_empty());
    }

    #[test]
    fn c_star_extremes() {
        let g = build_group("A1".parse().unwrap()).unwrap();
        let q = Arc::new(AlgebraKind::GradedPreprojective.quiver(&g).unwrap());
        let l0 = q.loop_at(0).unwrap();
        // z an isomorphism: only the lowest degree survives
        let mut actions = BTreeMap::new();
        actions.insert((l0, 0), Matrix::<Rational>::identity(2));
        actions.insert((l0, 1), Matrix::<Rational>::identity(2));
        let iso = TruncatedGradedModule {
            quiver: q.clone(),
            corner: None,
            start: 0,
            dims: vec![vec![2, 0], vec![2, 0], vec![2, 0]],
            actions,
        };
        assert_eq!(c_star(&iso).unwrap().total_dims(), vec![2, 0, 0]);
        assert!(is_z_torsion_free(&iso));
        let mut actions = BTreeMap::new();
        actions.insert((l0, 0), Matrix::<Rational>::zeros(2, 2));
        let zero_z =
            TruncatedGradedModule { quiver: q, corner: None, start: 0, dims: vec![vec![2, 0], vec![2, 0]], actions };
        let c = c_star(&zero_z).unwrap();
        assert_eq!(c.dims, zero_z.dims);
        assert_eq!(z_torsion(&zero_z)[0][0].dim(), 2);
    }
}
