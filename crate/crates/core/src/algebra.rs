//! Graded pieces of path algebras modulo quadratic relations.
//!
//! All relations in play are homogeneous of degree 2, so the degree-k ideal is
//! `I_{k-1} V + V^{k-2} R`. The algebra is built one degree at a time: the
//! candidates of degree k are normal words of degree k-1 extended by one
//! arrow on the right, and the new relations are `u r` for normal words `u`
//! of degree k-2, rewritten in candidate coordinates. Normal words are the
//! non-pivot candidates of a per-block echelon form.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gamma::{GroupData, Series};
use crate::linalg::{sparse_accumulate, sparse_from_map, Matrix, SparseEchelon, SparseVec};
use crate::quiver::{frame_quiver, mckay_quiver, normalize_corner, triple_quiver, DimVector, Quiver, Relation};
use crate::scalar::{Field, Rational};

pub const DEFAULT_DEGREE_CAP: usize = 16;
pub const SAFETY_WINDOW: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AlgebraKind {
    /// `Pi` on the doubled McKay quiver.
    Preprojective,
    /// `Pi^w` on the framed doubled quiver, with framing vector `w`.
    FramedPreprojective(Vec<usize>),
    /// `Pi•` on the tripled quiver.
    GradedPreprojective,
}

impl AlgebraKind {
    pub fn quiver(&self, g: &GroupData) -> Result<Quiver> {
        let q = mckay_quiver(g)?;
        match self {
            AlgebraKind::Preprojective => Ok(q),
            AlgebraKind::FramedPreprojective(w) => frame_quiver(&q, &DimVector::new(w.clone())),
            AlgebraKind::GradedPreprojective => triple_quiver(&q),
        }
    }
}

/// A path of a fixed degree. Degree-zero words are vertex idempotents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    pub path: Vec<usize>,
    pub target: usize,
    pub source: usize,
}

#[derive(Clone, Debug)]
struct Degree<S> {
    words: Vec<Word>,
    block_words: BTreeMap<(usize, usize), Vec<usize>>,
    /// `(word of degree k-1, arrow) -> candidate index`.
    candidate_index: HashMap<(usize, usize), usize>,
    candidates: Vec<Word>,
    /// Normal form of each candidate over this degree's words.
    ext: Vec<SparseVec<S>>,
    /// Relation vectors over candidate indices, per block.
    block_relations: BTreeMap<(usize, usize), Vec<SparseVec<S>>>,
    block_rank: BTreeMap<(usize, usize), usize>,
}

impl<S> Default for Degree<S> {
    fn default() -> Self {
        Degree {
            words: Vec::new(),
            block_words: BTreeMap::new(),
            candidate_index: HashMap::new(),
            candidates: Vec::new(),
            ext: Vec::new(),
            block_relations: BTreeMap::new(),
            block_rank: BTreeMap::new(),
        }
    }
}

/// Degree-k piece `e_i A_k e_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedSlice<S> {
    pub target: usize,
    pub source: usize,
    pub degree: usize,
    /// Length-k paths from `source` to `target` spanning the piece.
    pub path_basis: Vec<Vec<usize>>,
    /// Columns span the relations among `path_basis`.
    pub relation_span: Matrix<S>,
    pub dim: usize,
}

/// An element of `e_target A_degree e_source` in normal-word coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Class<S> {
    pub target: usize,
    pub source: usize,
    pub degree: usize,
    pub coeffs: SparseVec<S>,
}

#[derive(Clone, Debug)]
pub struct GradedAlgebra<S> {
    quiver: Arc<Quiver>,
    relations: Vec<Relation>,
    excluded: Vec<bool>,
    arrows_by_tail: Vec<Vec<usize>>,
    degrees: Vec<Degree<S>>,
    cap: usize,
}

impl<S: Field> GradedAlgebra<S> {
    pub fn new(quiver: Arc<Quiver>) -> Self {
        Self::with_excluded(quiver, &[])
    }

    /// The quotient by the two-sided ideal generated by `e_v`, `v ∈ excluded`.
    pub fn with_excluded(quiver: Arc<Quiver>, excluded_vertices: &[usize]) -> Self {
        let n = quiver.num_vertices();
        let mut excluded = vec![false; n];
        for &v in excluded_vertices {
            excluded[v] = true;
        }
        let live = |a: usize| {
            let ar = quiver.arrow(a);
            !excluded[ar.tail] && !excluded[ar.head]
        };
        let relations = quiver
            .relations()
            .into_iter()
            .filter(|r| !excluded[r.target] && !excluded[r.source])
            .map(|r| Relation { terms: r.terms.into_iter().filter(|(_, [x, y])| live(*x) && live(*y)).collect(), ..r })
            .filter(|r| !r.terms.is_empty())
            .collect();
        let mut arrows_by_tail = vec![Vec::new(); n];
        for a in &quiver.arrows {
            if live(a.id) {
                arrows_by_tail[a.tail].push(a.id);
            }
        }
        let mut deg0 = Degree::default();
        for v in (0..n).filter(|&v| !excluded[v]) {
            let idx = deg0.words.len();
            deg0.words.push(Word { path: Vec::new(), target: v, source: v });
            deg0.block_words.insert((v, v), vec![idx]);
        }
        GradedAlgebra { quiver, relations, excluded, arrows_by_tail, degrees: vec![deg0], cap: DEFAULT_DEGREE_CAP }
    }

    pub fn for_group(g: &GroupData, kind: &AlgebraKind) -> Result<Self> {
        Ok(Self::new(Arc::new(kind.quiver(g)?)))
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn is_excluded(&self, v: usize) -> bool {
        self.excluded[v]
    }

    pub fn live_vertices(&self) -> Vec<usize> {
        (0..self.quiver.num_vertices()).filter(|&v| !self.excluded[v]).collect()
    }

    fn check_degree(&self, k: usize) -> Result<()> {
        if k > self.cap {
            Err(Error::DegreeCapExceeded { requested: k, cap: self.cap })
        } else {
            Ok(())
        }
    }

    /// Computes all degrees up to and including `k`.
    pub fn ensure_degree(&mut self, k: usize) -> Result<()> {
        self.check_degree(k)?;
        while self.degrees.len() <= k {
            let next = self.build_next();
            self.degrees.push(next);
        }
        Ok(())
    }

    fn build_next(&self) -> Degree<S> {
        let k = self.degrees.len();
        let prev = &self.degrees[k - 1];
        let mut deg = Degree::<S>::default();
        let mut block_cands: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (wi, w) in prev.words.iter().enumerate() {
            for &a in &self.arrows_by_tail[w.source] {
                let idx = deg.candidates.len();
                let mut path = w.path.clone();
                path.push(a);
                let word = Word { path, target: w.target, source: self.quiver.arrow(a).head };
                block_cands.entry((word.target, word.source)).or_default().push(idx);
                deg.candidate_index.insert((wi, a), idx);
                deg.candidates.push(word);
            }
        }
        if k >= 2 {
            let prev2 = &self.degrees[k - 2];
            for (ui, u) in prev2.words.iter().enumerate() {
                for rel in self.relations.iter().filter(|r| r.target == u.source) {
                    let mut acc: BTreeMap<usize, S> = BTreeMap::new();
                    for (c, [x, y]) in &rel.terms {
                        let ux = &prev.ext[prev.candidate_index[&(ui, *x)]];
                        for (w, d) in ux {
                            let cand = deg.candidate_index[&(*w, *y)];
                            let e = acc.entry(cand).or_insert_with(S::zero);
                            *e = e.clone() + S::from_i64(*c) * d.clone();
                        }
                    }
                    let v = sparse_from_map(acc);
                    if !v.is_empty() {
                        deg.block_relations.entry((u.target, rel.source)).or_default().push(v);
                    }
                }
            }
        }
        deg.ext = vec![Vec::new(); deg.candidates.len()];
        for (block, cands) in &block_cands {
            let mut ech = SparseEchelon::new();
            for r in deg.block_relations.get(block).into_iter().flatten() {
                ech.insert(r);
            }
            deg.block_rank.insert(*block, ech.rank());
            let mut new_index = HashMap::new();
            let mut words = Vec::new();
            for &c in cands {
                if !ech.is_pivot(c) {
                    let wi = deg.words.len();
                    new_index.insert(c, wi);
                    words.push(wi);
                    deg.words.push(deg.candidates[c].clone());
                    deg.ext[c] = vec![(wi, S::one())];
                }
            }
            for &c in cands {
                if let Some(row) = ech.pivot_row(c) {
                    let mut v: SparseVec<S> =
                        row.iter().filter(|(j, _)| *j != c).map(|(j, x)| (new_index[j], -x.clone())).collect();
                    v.sort_by_key(|e| e.0);
                    deg.ext[c] = v;
                }
            }
            if !words.is_empty() {
                deg.block_words.insert(*block, words);
            }
        }
        deg
    }

    pub fn words(&mut self, k: usize) -> Result<&[Word]> {
        self.ensure_degree(k)?;
        Ok(&self.degrees[k].words)
    }

    /// Indices of degree-k normal words from `source` to `target`.
    pub fn block_words(&mut self, target: usize, source: usize, k: usize) -> Result<Vec<usize>> {
        self.ensure_degree(k)?;
        Ok(self.degrees[k].block_words.get(&(target, source)).cloned().unwrap_or_default())
    }

    pub fn word(&self, k: usize, idx: usize) -> &Word {
        &self.degrees[k].words[idx]
    }

    pub fn dim(&mut self, target: usize, source: usize, k: usize) -> Result<usize> {
        Ok(self.block_words(target, source, k)?.len())
    }

    pub fn total_dim(&mut self, k: usize) -> Result<usize> {
        self.ensure_degree(k)?;
        Ok(self.degrees[k].words.len())
    }

    pub fn slice(&mut self, target: usize, source: usize, k: usize) -> Result<GradedSlice<S>> {
        self.ensure_degree(k)?;
        let n = self.quiver.num_vertices();
        if target >= n || source >= n {
            return Err(Error::EndpointMismatch(format!("vertex out of range: {target}, {source}")));
        }
        let deg = &self.degrees[k];
        if k == 0 {
            let live = target == source && !self.excluded[target];
            return Ok(GradedSlice {
                target,
                source,
                degree: 0,
                path_basis: if live { vec![Vec::new()] } else { Vec::new() },
                relation_span: Matrix::zeros(usize::from(live), 0),
                dim: usize::from(live),
            });
        }
        let cands: Vec<usize> = (0..deg.candidates.len())
            .filter(|&c| deg.candidates[c].target == target && deg.candidates[c].source == source)
            .collect();
        let pos: HashMap<usize, usize> = cands.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let rels = deg.block_relations.get(&(target, source)).cloned().unwrap_or_default();
        let mut span = Matrix::zeros(cands.len(), rels.len());
        for (j, r) in rels.iter().enumerate() {
            for (c, x) in r {
                span[(pos[c], j)] = x.clone();
            }
        }
        let dim = self.degrees[k].block_words.get(&(target, source)).map_or(0, |w| w.len());
        Ok(GradedSlice {
            target,
            source,
            degree: k,
            path_basis: cands.iter().map(|&c| deg.candidates[c].path.clone()).collect(),
            relation_span: span,
            dim,
        })
    }

    pub fn idempotent(&self, v: usize) -> Class<S> {
        let idx = self.degrees[0].block_words[&(v, v)][0];
        Class { target: v, source: v, degree: 0, coeffs: vec![(idx, S::one())] }
    }

    pub fn word_class(&self, k: usize, idx: usize) -> Class<S> {
        let w = &self.degrees[k].words[idx];
        Class { target: w.target, source: w.source, degree: k, coeffs: vec![(idx, S::one())] }
    }

    /// Right multiplication of a class by one arrow.
    pub fn mul_arrow(&mut self, u: &Class<S>, a: usize) -> Result<Class<S>> {
        let ar = self.quiver.arrow(a).clone();
        if ar.tail != u.source {
            return Err(Error::EndpointMismatch(format!("arrow {a} does not start at vertex {}", u.source)));
        }
        let k = u.degree + 1;
        self.ensure_degree(k)?;
        let deg = &self.degrees[k];
        let mut acc = BTreeMap::new();
        if !self.excluded[ar.head] && !self.excluded[ar.tail] {
            for (w, c) in &u.coeffs {
                let cand = deg.candidate_index[&(*w, a)];
                sparse_accumulate(&mut acc, c, &deg.ext[cand]);
            }
        }
        Ok(Class { target: u.target, source: ar.head, degree: k, coeffs: sparse_from_map(acc) })
    }

    /// Normal form of a path with the given endpoints.
    pub fn reduce_path(&mut self, target: usize, path: &[usize]) -> Result<Class<S>> {
        if self.excluded[target] {
            return Ok(Class { target, source: target, degree: 0, coeffs: Vec::new() });
        }
        let mut c = self.idempotent(target);
        for &a in path {
            c = self.mul_arrow(&c, a)?;
        }
        Ok(c)
    }

    pub fn multiply_classes(&mut self, u: &Class<S>, v: &Class<S>) -> Result<Class<S>> {
        if u.source != v.target {
            return Err(Error::EndpointMismatch(format!(
                "left factor ends at {} but right factor starts at {}",
                u.source, v.target
            )));
        }
        let mut acc: BTreeMap<usize, S> = BTreeMap::new();
        for (wi, c) in &v.coeffs {
            let path = self.degrees[v.degree].words[*wi].path.clone();
            let mut x = u.clone();
            for a in path {
                x = self.mul_arrow(&x, a)?;
            }
            sparse_accumulate(&mut acc, c, &x.coeffs);
        }
        self.ensure_degree(u.degree + v.degree)?;
        Ok(Class { target: u.target, source: v.source, degree: u.degree + v.degree, coeffs: sparse_from_map(acc) })
    }

    /// Normal form of `sum c p` for arbitrary paths of one degree with common endpoints.
    pub fn reduce_combination(&mut self, target: usize, source: usize, k: usize, terms: &[(S, Vec<usize>)]) -> Result<Class<S>> {
        let mut acc = BTreeMap::new();
        for (c, p) in terms {
            let x = self.reduce_path(target, p)?;
            sparse_accumulate(&mut acc, c, &x.coeffs);
        }
        self.ensure_degree(k)?;
        Ok(Class { target, source, degree: k, coeffs: sparse_from_map(acc) })
    }

    /// Sum of slice dimensions over ordered pairs from `endpoints`, per degree.
    pub fn hilbert(&mut self, endpoints: &[usize], kmax: usize) -> Result<Vec<usize>> {
        self.ensure_degree(kmax)?;
        (0..=kmax)
            .map(|k| {
                let mut s = 0;
                for &i in endpoints {
                    for &j in endpoints {
                        s += self.dim(i, j, k)?;
                    }
                }
                Ok(s)
            })
            .collect()
    }
}

/// Brute-force slice: every path of length k and every `p rel q`.
pub fn full_path_space_slice<S: Field>(
    quiver: &Quiver,
    relations: &[Relation],
    target: usize,
    source: usize,
    k: usize,
) -> GradedSlice<S> {
    let paths = all_paths(quiver, target, source, k);
    let index: HashMap<&Vec<usize>, usize> = paths.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut cols: Vec<Vec<S>> = Vec::new();
    if k >= 2 {
        for rel in relations {
            for a in 0..=k - 2 {
                let ps = all_paths(quiver, target, rel.target, a);
                let qs = all_paths(quiver, rel.source, source, k - 2 - a);
                for p in &ps {
                    for q in &qs {
                        let mut col = vec![S::zero(); paths.len()];
                        for (c, [x, y]) in &rel.terms {
                            let mut full = p.clone();
                            full.push(*x);
                            full.push(*y);
                            full.extend(q);
                            let i = index[&full];
                            col[i] = col[i].clone() + S::from_i64(*c);
                        }
                        cols.push(col);
                    }
                }
            }
        }
    }
    let span = Matrix::from_fn(paths.len(), cols.len(), |r, c| cols[c][r].clone());
    let rank = span.rank();
    GradedSlice { target, source, degree: k, dim: paths.len() - rank, path_basis: paths, relation_span: span }
}

/// All composable paths of length k from `source` to `target`.
pub fn all_paths(quiver: &Quiver, target: usize, source: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack = vec![(Vec::new(), target)];
    while let Some((p, end)) = stack.pop() {
        if p.len() == k {
            if end == source {
                out.push(p);
            }
            continue;
        }
        for a in quiver.arrows.iter().filter(|a| a.tail == end) {
            let mut q = p.clone();
            q.push(a.id);
            stack.push((q, a.head));
        }
    }
    out.sort();
    out
}

fn corner_endpoints(quiver: &Quiver, corner: Option<&[usize]>) -> Result<Vec<usize>> {
    match corner {
        Some(c) => normalize_corner(c, quiver.num_finite),
        None => Ok((0..quiver.num_vertices()).collect()),
    }
}

/// `e_i A_k e_j` for the algebra of `kind` attached to `g`, optionally cornered.
pub fn graded_slice(
    g: &GroupData,
    kind: &AlgebraKind,
    corner: Option<&[usize]>,
    i: usize,
    j: usize,
    k: usize,
) -> Result<GradedSlice<Rational>> {
    let mut alg = GradedAlgebra::<Rational>::for_group(g, kind)?;
    alg.check_degree(k)?;
    if let Some(c) = corner {
        let c = normalize_corner(c, alg.quiver.num_finite)?;
        for v in [i, j] {
            if !c.contains(&v) {
                return Err(Error::VertexNotInCorner(v.to_string()));
            }
        }
    }
    alg.slice(i, j, k)
}

pub fn hilbert_sequence(g: &GroupData, kind: &AlgebraKind, corner: Option<&[usize]>, kmax: usize) -> Result<Vec<usize>> {
    let mut alg = GradedAlgebra::<Rational>::for_group(g, kind)?;
    let ends = corner_endpoints(&alg.quiver, corner)?;
    alg.hilbert(&ends, kmax)
}

/// Character-averaged Molien coefficients for the `(i, j)` isotypic pair.
pub fn molien_sequence(g: &GroupData, i: usize, j: usize, with_z: bool, kmax: usize) -> Result<Vec<usize>> {
    if g.descriptor.series == Series::E || g.elements.is_none() {
        return Err(Error::UnsupportedSeries(g.descriptor.to_string()));
    }
    let classes = g.class_sizes.len();
    let mut h: Vec<Vec<f64>> = Vec::with_capacity(classes);
    for c in 0..classes {
        let t = g.natural_character[c].re;
        let mut seq = vec![1.0, t];
        while seq.len() <= kmax {
            let n = seq.len();
            seq.push(t * seq[n - 1] - seq[n - 2]);
        }
        seq.truncate(kmax + 1);
        h.push(seq);
    }
    let mut out = Vec::with_capacity(kmax + 1);
    let mut running = 0usize;
    for k in 0..=kmax {
        let mut s = num_complex::Complex64::new(0.0, 0.0);
        for c in 0..classes {
            s += g.characters[i][c] * g.characters[j][c].conj() * h[c][k] * g.class_sizes[c] as f64;
        }
        s /= g.order as f64;
        let rounded = s.re.round();
        if s.im.abs() > 1e-6 || (s.re - rounded).abs() > 1e-6 || rounded < 0.0 {
            return Err(Error::NonIntegralCoefficient { degree: k, value: format!("{s}") });
        }
        running += rounded as usize;
        out.push(if with_z { running } else { rounded as usize });
    }
    Ok(out)
}

/// Total dimension of `Pi / Pi e_I Pi` in each degree up to `kmax`.
pub fn quotient_hilbert(g: &GroupData, set: &[usize], kmax: usize) -> Result<Vec<usize>> {
    let q = Arc::new(mckay_quiver(g)?);
    let set = normalize_corner(set, q.num_finite)?;
    let mut alg = GradedAlgebra::<Rational>::with_excluded(q, &set);
    alg.ensure_degree(kmax)?;
    (0..=kmax).map(|k| alg.total_dim(k)).collect()
}

pub fn factor_through_bound(g: &GroupData, set: &[usize]) -> Result<usize> {
    factor_through_bound_with(g, set, SAFETY_WINDOW, DEFAULT_DEGREE_CAP)
}

/// Least `n` with `Pi / Pi e_I Pi` vanishing in degrees `n+1 ..= n+window`.
pub fn factor_through_bound_with(g: &GroupData, set: &[usize], window: usize, cap: usize) -> Result<usize> {
    let q = Arc::new(mckay_quiver(g)?);
    let set = normalize_corner(set, q.num_finite)?;
    let mut alg = GradedAlgebra::<Rational>::with_excluded(q, &set).with_cap(cap);
    let mut zero_run = 0;
    let mut last_nonzero: Option<usize> = None;
    for k in 0..=cap {
        if alg.total_dim(k)? == 0 {
            zero_run += 1;
            let n = last_nonzero.unwrap_or(0);
            if zero_run >= window && k >= n + window {
                return Ok(n);
            }
        } else {
            zero_run = 0;
            last_nonzero = Some(k);
        }
    }
    Err(Error::BoundNotFound { cap })
}
