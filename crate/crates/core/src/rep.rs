//! Finite-dimensional quiver representations, submodule calculus and
//! theta-stability.
//!
//! `maps[a]` is the matrix of `M_{h(a)} -> M_{t(a)}`, so it has shape
//! `dims[t(a)] x dims[h(a)]`.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::quiver::{DimVector, Quiver, StabilityParam};
use crate::scalar::{Field, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct QuiverRep<S> {
    quiver: Arc<Quiver>,
    dims: Vec<usize>,
    maps: Vec<Matrix<S>>,
}

/// A representation of the framed quiver.
pub type FramedRep<S> = QuiverRep<S>;

/// Residual of one relation, a `dims[target] x dims[source]` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual<S> {
    pub target: usize,
    pub source: usize,
    pub matrix: Matrix<S>,
}

/// One subspace per vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct SubmoduleWitness<S> {
    pub spaces: Vec<Subspace<S>>,
}

impl<S: Field> SubmoduleWitness<S> {
    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(|s| s.dim()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.spaces.iter().all(|s| s.dim() == 0)
    }

    pub fn is_full(&self) -> bool {
        self.spaces.iter().all(|s| s.is_full())
    }
}

impl<S: Field> QuiverRep<S> {
    pub fn new(quiver: Arc<Quiver>, dims: Vec<usize>, maps: Vec<Matrix<S>>) -> Result<Self> {
        let r = QuiverRep { quiver, dims, maps };
        r.check_shapes()?;
        Ok(r)
    }

    pub fn zero(quiver: Arc<Quiver>, dims: Vec<usize>) -> Self {
        let maps = quiver.arrows.iter().map(|a| Matrix::zeros(dims[a.tail], dims[a.head])).collect();
        QuiverRep { quiver, dims, maps }
    }

    /// The representation with `M_v = S^1` and all maps zero.
    pub fn vertex_simple(quiver: Arc<Quiver>, v: usize) -> Self {
        let mut dims = vec![0; quiver.num_vertices()];
        dims[v] = 1;
        Self::zero(quiver, dims)
    }

    pub fn check_shapes(&self) -> Result<()> {
        if self.dims.len() != self.quiver.num_vertices() {
            return Err(Error::ShapeMismatch(format!(
                "{} dimensions for {} vertices",
                self.dims.len(),
                self.quiver.num_vertices()
            )));
        }
        if self.maps.len() != self.quiver.arrows.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} maps for {} arrows",
                self.maps.len(),
                self.quiver.arrows.len()
            )));
        }
        for a in &self.quiver.arrows {
            let want = (self.dims[a.tail], self.dims[a.head]);
            if self.maps[a.id].shape() != want {
                return Err(Error::ShapeMismatch(format!(
                    "arrow {} has shape {:?}, expected {:?}",
                    a.id,
                    self.maps[a.id].shape(),
                    want
                )));
            }
        }
        Ok(())
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn maps(&self) -> &[Matrix<S>] {
        &self.maps
    }

    pub fn map(&self, a: usize) -> &Matrix<S> {
        &self.maps[a]
    }

    pub fn set_map(&mut self, a: usize, m: Matrix<S>) -> Result<()> {
        let ar = self.quiver.arrow(a);
        if m.shape() != (self.dims[ar.tail], self.dims[ar.head]) {
            return Err(Error::ShapeMismatch(format!("arrow {a}")));
        }
        self.maps[a] = m;
        Ok(())
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn dim_vector(&self) -> DimVector {
        dim_vector_of(&self.quiver, &self.dims)
    }

    /// Matrix of a path `[a1, .., ak]`, acting by `ak` first.
    pub fn path_matrix(&self, target: usize, path: &[usize]) -> Matrix<S> {
        let mut m = Matrix::identity(self.dims[target]);
        for &a in path {
            m = m.mul(&self.maps[a]);
        }
        m
    }

    pub fn check_relations(&self) -> Result<Vec<Residual<S>>> {
        self.check_shapes()?;
        Ok(self
            .quiver
            .relations()
            .into_iter()
            .map(|rel| {
                let mut m = Matrix::zeros(self.dims[rel.target], self.dims[rel.source]);
                for (c, [x, y]) in &rel.terms {
                    m = m.add(&self.maps[*x].mul(&self.maps[*y]).scale(&S::from_i64(*c)));
                }
                Residual { target: rel.target, source: rel.source, matrix: m }
            })
            .collect())
    }

    pub fn is_flat(&self) -> bool {
        self.check_relations().is_ok_and(|r| r.iter().all(|x| x.matrix.is_zero()))
    }

    pub fn convert<T: Field>(&self, f: impl Fn(&S) -> Result<T>) -> Result<QuiverRep<T>> {
        let maps = self.maps.iter().map(|m| m.try_map(&f)).collect::<Result<Vec<_>>>()?;
        Ok(QuiverRep { quiver: self.quiver.clone(), dims: self.dims.clone(), maps })
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.quiver != other.quiver {
            return Err(Error::ShapeMismatch("direct sum of representations of different quivers".into()));
        }
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let maps = self
            .quiver
            .arrows
            .iter()
            .map(|a| {
                let mut m = Matrix::zeros(dims[a.tail], dims[a.head]);
                m.set_block(0, 0, &self.maps[a.id]);
                m.set_block(self.dims[a.tail], self.dims[a.head], &other.maps[a.id]);
                m
            })
            .collect();
        Ok(QuiverRep { quiver: self.quiver.clone(), dims, maps })
    }

    /// `M'_a = g_{t(a)} M_a g_{h(a)}^{-1}`.
    pub fn base_change(&self, g: &[Matrix<S>]) -> Result<Self> {
        let inv = g
            .iter()
            .map(|x| x.inverse().ok_or_else(|| Error::ShapeMismatch("base change is not invertible".into())))
            .collect::<Result<Vec<_>>>()?;
        let maps = self.quiver.arrows.iter().map(|a| g[a.tail].mul(&self.maps[a.id]).mul(&inv[a.head])).collect();
        QuiverRep::new(self.quiver.clone(), self.dims.clone(), maps)
    }

    pub fn random_base_change<R: Rng + ?Sized>(&self, rng: &mut R) -> Self {
        let g: Vec<_> = self.dims.iter().map(|&d| Matrix::random_invertible(d, rng)).collect();
        self.base_change(&g).expect("random invertible base change")
    }

    pub fn is_closed(&self, w: &SubmoduleWitness<S>) -> bool {
        self.quiver
            .arrows
            .iter()
            .all(|a| w.spaces[a.tail].contains(&Subspace::image(&self.maps[a.id], &w.spaces[a.head])))
    }

    /// The subquotient `big / small` with bases adapted to `small ⊆ big`.
    pub fn subquotient(&self, big: &SubmoduleWitness<S>, small: &SubmoduleWitness<S>) -> Self {
        let n = self.quiver.num_vertices();
        let mut bases = Vec::with_capacity(n);
        let mut dims = Vec::with_capacity(n);
        for v in 0..n {
            let b = big.spaces[v].adapted_basis(&small.spaces[v]);
            dims.push(b.cols() - small.spaces[v].dim());
            bases.push(b);
        }
        let maps = self
            .quiver
            .arrows
            .iter()
            .map(|a| {
                let (t, h) = (a.tail, a.head);
                let skip_h = small.spaces[h].dim();
                let skip_t = small.spaces[t].dim();
                let comp = bases[h].select_cols(&(skip_h..bases[h].cols()).collect::<Vec<_>>());
                let img = self.maps[a.id].mul(&comp);
                let coords = bases[t].solve(&img).expect("subspace is arrow-closed");
                coords.block(skip_t, 0, dims[t], dims[h])
            })
            .collect();
        QuiverRep { quiver: self.quiver.clone(), dims, maps }
    }

    pub fn submodule(&self, w: &SubmoduleWitness<S>) -> Self {
        let zero = SubmoduleWitness { spaces: self.dims.iter().map(|&d| Subspace::zero(d)).collect() };
        self.subquotient(w, &zero)
    }

    pub fn full_witness(&self) -> SubmoduleWitness<S> {
        SubmoduleWitness { spaces: self.dims.iter().map(|&d| Subspace::full(d)).collect() }
    }

    pub fn zero_witness(&self) -> SubmoduleWitness<S> {
        SubmoduleWitness { spaces: self.dims.iter().map(|&d| Subspace::zero(d)).collect() }
    }
}

pub fn dim_vector_of(quiver: &Quiver, dims: &[usize]) -> DimVector {
    DimVector { at_infinity: quiver.infinity.map(|i| dims[i]), components: dims[..quiver.num_finite].to_vec() }
}

/// Least arrow-closed family containing the seed vectors.
pub fn generated_submodule<S: Field>(m: &QuiverRep<S>, seeds: &[(usize, Vec<S>)]) -> SubmoduleWitness<S> {
    let n = m.quiver.num_vertices();
    let mut spaces: Vec<Subspace<S>> = (0..n)
        .map(|v| {
            let vs: Vec<Vec<S>> = seeds.iter().filter(|(u, _)| *u == v).map(|(_, x)| x.clone()).collect();
            Subspace::span_vectors(m.dims[v], &vs)
        })
        .collect();
    loop {
        let mut changed = false;
        for a in &m.quiver.arrows {
            let img = Subspace::image(&m.maps[a.id], &spaces[a.head]);
            if !spaces[a.tail].contains(&img) {
                spaces[a.tail] = spaces[a.tail].sum(&img);
                changed = true;
            }
        }
        if !changed {
            return SubmoduleWitness { spaces };
        }
    }
}

/// Submodule generated by the whole of `M_v` for each listed vertex.
pub fn generated_by_vertices<S: Field>(m: &QuiverRep<S>, vertices: &[usize]) -> SubmoduleWitness<S> {
    let mut seeds = Vec::new();
    for &v in vertices {
        for c in 0..m.dims[v] {
            let mut e = vec![S::zero(); m.dims[v]];
            e[c] = S::one();
            seeds.push((v, e));
        }
    }
    generated_submodule(m, &seeds)
}

/// Largest submodule vanishing on every vertex of `avoid`.
pub fn max_submodule_avoiding<S: Field>(m: &QuiverRep<S>, avoid: &[usize]) -> SubmoduleWitness<S> {
    within_avoiding(m, &m.full_witness(), avoid)
}

/// Largest submodule contained in `ambient` vanishing on `avoid`.
pub fn within_avoiding<S: Field>(
    m: &QuiverRep<S>,
    ambient: &SubmoduleWitness<S>,
    avoid: &[usize],
) -> SubmoduleWitness<S> {
    let n = m.quiver.num_vertices();
    let mut spaces: Vec<Subspace<S>> = (0..n)
        .map(|v| if avoid.contains(&v) { Subspace::zero(m.dims[v]) } else { ambient.spaces[v].clone() })
        .collect();
    loop {
        let mut changed = false;
        for a in &m.quiver.arrows {
            let pre = Subspace::preimage(&m.maps[a.id], &spaces[a.tail]);
            let cut = spaces[a.head].intersect(&pre);
            if cut.dim() < spaces[a.head].dim() {
                spaces[a.head] = cut;
                changed = true;
            }
        }
        if !changed {
            return SubmoduleWitness { spaces };
        }
    }
}

fn framed_theta_i<S: Field>(m: &QuiverRep<S>, theta: &StabilityParam) -> Result<(usize, Vec<usize>)> {
    let inf = m.quiver.infinity.ok_or(Error::UnsupportedTheta)?;
    if m.dims[inf] != 1 {
        return Err(Error::UnsupportedTheta);
    }
    let set = theta.as_theta_i(&m.dim_vector()).ok_or(Error::UnsupportedTheta)?;
    Ok((inf, set))
}

/// Verdict of the specialised checker, with a destabilising dimension vector.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilityVerdict {
    pub semistable: bool,
    pub stable: bool,
    pub witness: Option<DimVector>,
}

pub fn stability_verdict<S: Field>(m: &QuiverRep<S>, theta: &StabilityParam) -> Result<StabilityVerdict> {
    let (inf, set) = framed_theta_i(m, theta)?;
    let g = generated_by_vertices(m, &[inf]);
    let semistable = set.iter().all(|&i| g.spaces[i].is_full());
    if !semistable {
        return Ok(StabilityVerdict {
            semistable,
            stable: false,
            witness: Some(dim_vector_of(&m.quiver, &g.dims())),
        });
    }
    if !g.is_full() {
        return Ok(StabilityVerdict { semistable, stable: false, witness: Some(dim_vector_of(&m.quiver, &g.dims())) });
    }
    let mut avoid = set.clone();
    avoid.push(inf);
    let k = max_submodule_avoiding(m, &avoid);
    if !k.is_zero() {
        return Ok(StabilityVerdict { semistable, stable: false, witness: Some(dim_vector_of(&m.quiver, &k.dims())) });
    }
    Ok(StabilityVerdict { semistable, stable: true, witness: None })
}

pub fn is_semistable<S: Field>(m: &QuiverRep<S>, theta: &StabilityParam) -> Result<bool> {
    Ok(stability_verdict(m, theta)?.semistable)
}

pub fn is_stable<S: Field>(m: &QuiverRep<S>, theta: &StabilityParam) -> Result<bool> {
    Ok(stability_verdict(m, theta)?.stable)
}

pub const BRUTE_FORCE_LIMIT: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct BruteForceReport {
    pub semistable: bool,
    pub stable: bool,
    /// Distinct dimension vectors of nonzero proper submodules with `theta <= 0`.
    pub violations: Vec<DimVector>,
    pub submodules_seen: usize,
}

/// Every subspace of `S^n` for a finite field `S`.
pub fn enumerate_subspaces<S: Field>(n: usize) -> Vec<Subspace<S>> {
    let elems = S::elements().expect("subspace enumeration needs a finite field");
    let mut out = Vec::new();
    for k in 0..=n {
        for pivots in combinations(n, k) {
            let free: Vec<(usize, usize)> = (0..k)
                .flat_map(|r| ((pivots[r] + 1)..n).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
                .collect();
            let mut counter = vec![0usize; free.len()];
            loop {
                let mut rows = Matrix::zeros(k, n);
                for (r, &p) in pivots.iter().enumerate() {
                    rows[(r, p)] = S::one();
                }
                for (idx, &(r, c)) in free.iter().enumerate() {
                    rows[(r, c)] = elems[counter[idx]].clone();
                }
                out.push(Subspace::span(&rows.transpose()));
                let mut i = 0;
                while i < counter.len() {
                    counter[i] += 1;
                    if counter[i] < elems.len() {
                        break;
                    }
                    counter[i] = 0;
                    i += 1;
                }
                if i == counter.len() {
                    break;
                }
            }
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Calls `f` on every arrow-closed family of subspaces.
pub fn for_each_submodule<S: Field>(m: &QuiverRep<S>, mut f: impl FnMut(&SubmoduleWitness<S>)) {
    let n = m.quiver.num_vertices();
    let candidates: Vec<Vec<Subspace<S>>> = m.dims.iter().map(|&d| enumerate_subspaces(d)).collect();
    let mut chosen: Vec<Subspace<S>> = Vec::with_capacity(n);
    fn rec<S: Field>(
        m: &QuiverRep<S>,
        cands: &[Vec<Subspace<S>>],
        chosen: &mut Vec<Subspace<S>>,
        f: &mut dyn FnMut(&SubmoduleWitness<S>),
    ) {
        let v = chosen.len();
        if v == cands.len() {
            f(&SubmoduleWitness { spaces: chosen.clone() });
            return;
        }
        for s in &cands[v] {
            chosen.push(s.clone());
            let ok = m.quiver.arrows.iter().filter(|a| a.tail.max(a.head) == v).all(|a| {
                chosen[a.tail].contains(&Subspace::image(&m.maps[a.id], &chosen[a.head]))
            });
            if ok {
                rec(m, cands, chosen, f);
            }
            chosen.pop();
        }
    }
    rec(m, &candidates, &mut chosen, &mut f);
}

/// Exhaustive King stability over a finite field, for any parameter.
pub fn brute_force_stability<S: Field>(m: &QuiverRep<S>, theta: &StabilityParam) -> Result<BruteForceReport> {
    let p = S::characteristic();
    if p == 0 || S::elements().is_none() {
        return Err(Error::BadPrime(p));
    }
    let total = m.total_dim();
    if total > BRUTE_FORCE_LIMIT {
        return Err(Error::DimensionTooLarge { dim: total, limit: BRUTE_FORCE_LIMIT });
    }
    let whole = m.dim_vector();
    let balanced = theta.evaluate(&whole) == Rational::from_i64(0);
    let zero = Rational::from_i64(0);
    let mut semistable = balanced;
    let mut stable = balanced;
    let mut violations = BTreeSet::new();
    let mut seen = 0;
    for_each_submodule(m, |w| {
        seen += 1;
        let dims = w.dims();
        let nonzero = dims.iter().any(|&d| d > 0);
        let proper = dims.iter().zip(&m.dims).any(|(a, b)| a < b);
        let d = dim_vector_of(&m.quiver, &dims);
        let t = theta.evaluate(&d);
        if t < zero {
            semistable = false;
        }
        if nonzero && proper && t <= zero {
            stable = false;
            violations.insert((d.at_infinity, d.components));
        }
    });
    Ok(BruteForceReport {
        semistable,
        stable,
        violations: violations.into_iter().map(|(a, c)| DimVector { at_infinity: a, components: c }).collect(),
        submodules_seen: seen,
    })
}

/// Reduces an exact rational representation into a prime field.
pub fn reduce_mod_p<T: Field>(m: &QuiverRep<Rational>) -> Result<QuiverRep<T>> {
    m.convert(T::from_rational)
}

/// Polystable form: stable core plus vertex simples off the corner.
#[derive(Clone, Debug, PartialEq)]
pub struct Polystable<S> {
    pub core: QuiverRep<S>,
    /// Multiplicity of `S_i` for each McKay vertex `i`.
    pub simples: Vec<usize>,
}

impl<S: Field> Polystable<S> {
    pub fn summands(&self) -> Vec<QuiverRep<S>> {
        let mut out = vec![self.core.clone()];
        for (i, &k) in self.simples.iter().enumerate() {
            for _ in 0..k {
                out.push(QuiverRep::vertex_simple(self.core.quiver.clone(), i));
            }
        }
        out
    }

    pub fn total_dims(&self) -> Vec<usize> {
        let mut d = self.core.dims.clone();
        for (i, &k) in self.simples.iter().enumerate() {
            d[i] += k;
        }
        d
    }
}

pub fn polystable_decomposition<S: Field>(m: &QuiverRep<S>, set: &[usize]) -> Result<Polystable<S>> {
    let theta = crate::quiver::theta_i(set, &m.dim_vector())?;
    let (inf, set) = framed_theta_i(m, &theta)?;
    if !m.is_flat() {
        return Err(Error::RelationViolation(vec!["input".into()]));
    }
    let g = generated_by_vertices(m, &[inf]);
    if !set.iter().all(|&i| g.spaces[i].is_full()) {
        return Err(Error::NotSemistable);
    }
    let mut avoid = set.clone();
    avoid.push(inf);
    let k = within_avoiding(m, &g, &avoid);
    let core = m.subquotient(&g, &k);
    let simples = (0..m.quiver.num_finite).map(|v| m.dims[v] - core.dims[v]).collect();
    Ok(Polystable { core, simples })
}

/// Invertible intertwiner `phi` with `b_a phi_h = phi_t a_a`, if any.
pub fn find_isomorphism<S: Field>(a: &QuiverRep<S>, b: &QuiverRep<S>) -> Option<Vec<Matrix<S>>> {
    if a.quiver.arrows.len() != b.quiver.arrows.len() || a.dims != b.dims {
        return None;
    }
    let dims = &a.dims;
    let mut offset = vec![0; dims.len() + 1];
    for (v, &d) in dims.iter().enumerate() {
        offset[v + 1] = offset[v] + d * d;
    }
    let unknowns = offset[dims.len()];
    if unknowns == 0 {
        return Some(dims.iter().map(|_| Matrix::zeros(0, 0)).collect());
    }
    let var = |v: usize, r: usize, c: usize| offset[v] + r * dims[v] + c;
    let mut rows: Vec<Vec<S>> = Vec::new();
    for ar in &a.quiver.arrows {
        let (t, h) = (ar.tail, ar.head);
        let (ma, mb) = (&a.maps[ar.id], &b.maps[ar.id]);
        for i in 0..dims[t] {
            for j in 0..dims[h] {
                let mut row = vec![S::zero(); unknowns];
                for k in 0..dims[h] {
                    let x = var(h, k, j);
                    row[x] = row[x].clone() + mb[(i, k)].clone();
                }
                for k in 0..dims[t] {
                    let x = var(t, i, k);
                    row[x] = row[x].clone() - ma[(k, j)].clone();
                }
                rows.push(row);
            }
        }
    }
    let sys = Matrix::from_rows(rows, unknowns).expect("rectangular system");
    let kernel = sys.kernel();
    let kdim = kernel.cols();
    if kdim == 0 {
        return None;
    }
    let assemble = |coeffs: &[S]| -> Vec<Matrix<S>> {
        let flat = kernel.mul_vec(coeffs);
        dims.iter()
            .enumerate()
            .map(|(v, &d)| Matrix::from_fn(d, d, |r, c| flat[var(v, r, c)].clone()))
            .collect()
    };
    let invertible = |phi: &[Matrix<S>]| phi.iter().all(|m| m.is_invertible());
    if let Some(elems) = S::elements() {
        if (elems.len() as f64).powi(kdim as i32) <= 65536.0 {
            let mut counter = vec![0usize; kdim];
            loop {
                let coeffs: Vec<S> = counter.iter().map(|&i| elems[i].clone()).collect();
                let phi = assemble(&coeffs);
                if invertible(&phi) {
                    return Some(phi);
                }
                let mut i = 0;
                while i < kdim {
                    counter[i] += 1;
                    if counter[i] < elems.len() {
                        break;
                    }
                    counter[i] = 0;
                    i += 1;
                }
                if i == kdim {
                    return None;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(ISOMORPHISM_SEED);
    for _ in 0..64 {
        let coeffs: Vec<S> = (0..kdim).map(|_| S::random(&mut rng)).collect();
        let phi = assemble(&coeffs);
        if invertible(&phi) {
            return Some(phi);
        }
    }
    None
}

const ISOMORPHISM_SEED: u64 = 0x1503_0417;

pub fn are_isomorphic<S: Field>(a: &QuiverRep<S>, b: &QuiverRep<S>) -> bool {
    find_isomorphism(a, b).is_some()
}

/// Equal polystable forms: same simple multiplicities and isomorphic cores.
pub fn s_equivalent<S: Field>(a: &Polystable<S>, b: &Polystable<S>) -> bool {
    a.simples == b.simples && are_isomorphic(&a.core, &b.core)
}

/// Random flat representation: positive arrows sampled, bar arrows solved
/// from the vertex relations, loops drawn from the commutant.
pub fn random_flat_rep<S: Field, R: Rng + ?Sized>(
    quiver: Arc<Quiver>,
    dims: Vec<usize>,
    density: f64,
    rng: &mut R,
) -> QuiverRep<S> {
    let mut rep: QuiverRep<S> = QuiverRep::zero(quiver.clone(), dims.clone());
    let positives: Vec<usize> = quiver.positive_arrows().map(|a| a.id).collect();
    for &a in &positives {
        let ar = quiver.arrow(a);
        if rng.gen_bool(density.clamp(0.0, 1.0)) {
            rep.maps[a] = Matrix::random(dims[ar.tail], dims[ar.head], rng);
        }
    }
    // unknown X_b = M_{bbar} for each positive b, shape dims[h(b)] x dims[t(b)]
    let mut offset = vec![0; positives.len() + 1];
    for (i, &b) in positives.iter().enumerate() {
        let ar = quiver.arrow(b);
        offset[i + 1] = offset[i] + dims[ar.head] * dims[ar.tail];
    }
    let unknowns = offset[positives.len()];
    if unknowns > 0 {
        let mut rows = Vec::new();
        for v in 0..quiver.num_vertices() {
            let d = dims[v];
            for r in 0..d {
                for c in 0..d {
                    let mut row = vec![S::zero(); unknowns];
                    for (i, &b) in positives.iter().enumerate() {
                        let ar = quiver.arrow(b);
                        let cols = dims[ar.tail];
                        let mb = &rep.maps[b];
                        // + M_b X_b when t(b) = v
                        if ar.tail == v {
                            for k in 0..dims[ar.head] {
                                let x = offset[i] + k * cols + c;
                                row[x] = row[x].clone() + mb[(r, k)].clone();
                            }
                        }
                        // - X_b M_b when h(b) = v
                        if ar.head == v {
                            for k in 0..dims[ar.tail] {
                                let x = offset[i] + r * cols + k;
                                row[x] = row[x].clone() - mb[(k, c)].clone();
                            }
                        }
                    }
                    rows.push(row);
                }
            }
        }
        let sys = Matrix::from_rows(rows, unknowns).expect("rectangular system");
        let kernel = sys.kernel();
        let coeffs: Vec<S> = (0..kernel.cols()).map(|_| S::random(rng)).collect();
        let flat = if kernel.cols() > 0 { kernel.mul_vec(&coeffs) } else { vec![S::zero(); unknowns] };
        for (i, &b) in positives.iter().enumerate() {
            let ar = quiver.arrow(b);
            let bar = ar.bar.expect("positive arrows are barred");
            let cols = dims[ar.tail];
            rep.maps[bar] = Matrix::from_fn(dims[ar.head], cols, |r, c| flat[offset[i] + r * cols + c].clone());
        }
    }
    if quiver.is_tripled() {
        let loops = commutant_element(&rep, rng);
        for (&v, &d) in &quiver.loops {
            rep.maps[d] = loops[v].clone();
        }
    }
    rep
}

/// Random family `(phi_v)` with `phi_{t(a)} M_a = M_a phi_{h(a)}` for non-loop arrows.
fn commutant_element<S: Field, R: Rng + ?Sized>(rep: &QuiverRep<S>, rng: &mut R) -> Vec<Matrix<S>> {
    let q = &rep.quiver;
    let dims = &rep.dims;
    let mut offset = vec![0; dims.len() + 1];
    for (v, &d) in dims.iter().enumerate() {
        offset[v + 1] = offset[v] + d * d;
    }
    let unknowns = offset[dims.len()];
    let var = |v: usize, r: usize, c: usize| offset[v] + r * dims[v] + c;
    let mut rows = Vec::new();
    for ar in q.arrows.iter().filter(|a| a.bar.is_some()) {
        let (t, h) = (ar.tail, ar.head);
        let m = &rep.maps[ar.id];
        for i in 0..dims[t] {
            for j in 0..dims[h] {
                let mut row = vec![S::zero(); unknowns];
                for k in 0..dims[t] {
                    let x = var(t, i, k);
                    row[x] = row[x].clone() + m[(k, j)].clone();
                }
                for k in 0..dims[h] {
                    let x = var(h, k, j);
                    row[x] = row[x].clone() - m[(i, k)].clone();
                }
                rows.push(row);
            }
        }
    }
    let kernel = if rows.is_empty() {
        Matrix::identity(unknowns)
    } else {
        Matrix::from_rows(rows, unknowns).expect("rectangular system").kernel()
    };
    let coeffs: Vec<S> = (0..kernel.cols()).map(|_| S::random(rng)).collect();
    let flat = if kernel.cols() > 0 { kernel.mul_vec(&coeffs) } else { vec![S::zero(); unknowns] };
    dims.iter().enumerate().map(|(v, &d)| Matrix::from_fn(d, d, |r, c| flat[var(v, r, c)].clone())).collect()
}
