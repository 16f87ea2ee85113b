//! Sufficient dimension vectors, the dimension bound for stable framed
//! modules, variation of GIT between corner chambers, ADHM data for cyclic
//! groups and the quotient check against `e_I Pi e_0`.

use std::sync::Arc;

use crate::algebra::SAFETY_WINDOW;
use crate::corner::{CorneredAlgebra, CorneredModule};
use crate::error::{Error, Result};
use crate::gamma::{GroupData, Series};
use crate::linalg::{Matrix, Subspace};
use crate::quiver::{frame_quiver, mckay_quiver, normalize_corner, theta_i, ArrowKind, DimVector, Quiver};
use crate::rep::{is_stable, polystable_decomposition, FramedRep, Polystable, QuiverRep};
use crate::scalar::Field;

/// Iteration cap for the completion fixpoint.
pub const COMPLETION_CAP: usize = 10_000;

/// `2 v_i >= sum_j a_ij v_j` at every McKay vertex outside `set`.
pub fn is_sufficient(v: &DimVector, set: &[usize], q: &Quiver) -> bool {
    let adj = q.adjacency();
    (0..q.num_finite).filter(|i| !set.contains(i)).all(|i| {
        let s: usize = (0..q.num_finite).map(|j| adj[i][j] * v.components[j]).sum();
        2 * v.components[i] >= s
    })
}

/// Least sufficient vector agreeing with `values` on `set` (same order).
pub fn minimal_sufficient_completion(values: &[usize], set: &[usize], q: &Quiver) -> Result<DimVector> {
    minimal_completion_with_framing(values, set, q, &vec![0; q.num_finite])
}

/// As [`minimal_sufficient_completion`], with `w_i` added to the neighbour sum.
pub fn minimal_completion_with_framing(values: &[usize], set: &[usize], q: &Quiver, w: &[usize]) -> Result<DimVector> {
    if set.is_empty() {
        return Err(Error::EmptyI);
    }
    if values.len() != set.len() {
        return Err(Error::ShapeMismatch(format!("{} values for {} corner vertices", values.len(), set.len())));
    }
    let n = q.num_finite;
    if let Some(&bad) = set.iter().find(|&&i| i >= n) {
        return Err(Error::VertexNotInCorner(bad.to_string()));
    }
    let adj = q.adjacency();
    let mut v = vec![0; n];
    for (&i, &x) in set.iter().zip(values) {
        v[i] = x;
    }
    for _ in 0..COMPLETION_CAP {
        let mut changed = false;
        for i in (0..n).filter(|i| !set.contains(i)) {
            let s: usize = (0..n).map(|j| adj[i][j] * v[j]).sum::<usize>() + w[i];
            let want = s.div_ceil(2);
            if want > v[i] {
                v[i] = want;
                changed = true;
            }
        }
        if !changed {
            return Ok(DimVector::new(v));
        }
    }
    Err(Error::NoTermination(COMPLETION_CAP))
}

/// Checks `dim M <= completion of dim M|_I` for a stable framed module.
pub fn dimension_bound_check<S: Field>(m: &FramedRep<S>, set: &[usize]) -> Result<bool> {
    let q = m.quiver();
    let set = normalize_corner(set, q.num_finite)?;
    let dv = m.dim_vector();
    let theta = theta_i(&set, &dv)?;
    if !is_stable(m, &theta)? {
        return Err(Error::NotStable);
    }
    let values: Vec<usize> = set.iter().map(|&i| dv.components[i]).collect();
    let w = q.framing.clone().unwrap_or_else(|| vec![0; q.num_finite]);
    let bound = minimal_completion_with_framing(&values, &set, q, &w)?;
    Ok(dv.components.iter().zip(&bound.components).all(|(a, b)| a <= b))
}

/// Image of a `theta_from`-stable module in the `theta_to` chamber, `to ⊆ from`.
pub fn vgit_pushforward<S: Field>(m: &FramedRep<S>, from: &[usize], to: &[usize]) -> Result<Polystable<S>> {
    let n = m.quiver().num_finite;
    let from = normalize_corner(from, n)?;
    let to = normalize_corner(to, n)?;
    if let Some(v) = to.iter().find(|v| !from.contains(v)) {
        return Err(Error::VertexNotInCorner(v.to_string()));
    }
    let theta = theta_i(&from, &m.dim_vector())?;
    if !is_stable(m, &theta)? {
        return Err(Error::NotStableForSource);
    }
    polystable_decomposition(m, &to)
}

/// Pushes forward along a decreasing chain, accumulating the vertex simples.
pub fn vgit_chain<S: Field>(m: &FramedRep<S>, chain: &[&[usize]]) -> Result<Polystable<S>> {
    let Some((&first, rest)) = chain.split_first() else {
        return Err(Error::EmptyI);
    };
    let mut current = Polystable { core: m.clone(), simples: vec![0; m.quiver().num_finite] };
    let mut from = first;
    for &to in rest {
        let step = vgit_pushforward(&current.core, from, to)?;
        let simples = current.simples.iter().zip(&step.simples).map(|(a, b)| a + b).collect();
        current = Polystable { core: step.core, simples };
        from = to;
    }
    Ok(current)
}

/// ADHM data `(B1, B2, i, j)` on a weighted space `V` with framing `W`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdhmData<S> {
    pub b1: Matrix<S>,
    pub b2: Matrix<S>,
    /// `W -> V`.
    pub i: Matrix<S>,
    /// `V -> W`.
    pub j: Matrix<S>,
    /// Character of each basis vector of `V`, in `Z/n`.
    pub weights: Vec<usize>,
    pub framing_weights: Vec<usize>,
}

/// Splits cyclic-equivariant ADHM data into a framed McKay representation.
///
/// `B1` lowers weight by one and carries the arrows `k <- k+1`, `B2` raises it
/// and carries their bars, `i` and `j` preserve weight.
pub fn adhm_build_cyclic<S: Field>(g: &GroupData, data: &AdhmData<S>) -> Result<FramedRep<S>> {
    if g.descriptor.series != Series::A {
        return Err(Error::UnsupportedSeries(g.descriptor.to_string()));
    }
    let n = g.num_irreps();
    let dv = data.weights.len();
    let dw = data.framing_weights.len();
    let shapes = [
        ("B1", data.b1.shape(), (dv, dv)),
        ("B2", data.b2.shape(), (dv, dv)),
        ("i", data.i.shape(), (dv, dw)),
        ("j", data.j.shape(), (dw, dv)),
    ];
    for (name, got, want) in shapes {
        if got != want {
            return Err(Error::ShapeMismatch(format!("{name} has shape {got:?}, expected {want:?}")));
        }
    }
    if let Some(&w) = data.weights.iter().chain(&data.framing_weights).find(|&&w| w >= n) {
        return Err(Error::NotEquivariant(format!("weight {w} is not a character of Z/{n}")));
    }
    let check = |name: &str, m: &Matrix<S>, row_w: &[usize], col_w: &[usize], shift: usize| -> Result<()> {
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                if !m[(r, c)].is_zero() && row_w[r] != (col_w[c] + shift) % n {
                    return Err(Error::NotEquivariant(format!("{name}[{r}][{c}] joins weights {} and {}", col_w[c], row_w[r])));
                }
            }
        }
        Ok(())
    };
    check("B1", &data.b1, &data.weights, &data.weights, n - 1)?;
    check("B2", &data.b2, &data.weights, &data.weights, 1)?;
    check("i", &data.i, &data.weights, &data.framing_weights, 0)?;
    check("j", &data.j, &data.framing_weights, &data.weights, 0)?;
    let moment = data.b1.mul(&data.b2).sub(&data.b2.mul(&data.b1)).add(&data.i.mul(&data.j));
    if !moment.is_zero() {
        return Err(Error::MomentMapNonzero);
    }

    let by_weight = |ws: &[usize], k: usize| -> Vec<usize> { (0..ws.len()).filter(|&x| ws[x] == k).collect() };
    let vk: Vec<Vec<usize>> = (0..n).map(|k| by_weight(&data.weights, k)).collect();
    let wk: Vec<Vec<usize>> = (0..n).map(|k| by_weight(&data.framing_weights, k)).collect();
    let framing = DimVector::new(wk.iter().map(|x| x.len()).collect());
    let q = Arc::new(frame_quiver(&mckay_quiver(g)?, &framing)?);
    let inf = q.infinity.expect("framed");
    let mut dims: Vec<usize> = vk.iter().map(|x| x.len()).collect();
    dims.push(1);
    let mut rep = QuiverRep::zero(q.clone(), dims);
    let mut copies = vec![0usize; n];
    for a in q.positive_arrows() {
        let bar = a.bar.expect("positive arrows are barred");
        match a.kind {
            ArrowKind::Double => {
                let (k, k1) = (a.tail, a.head);
                rep.set_map(a.id, data.b1.select_rows(&vk[k]).select_cols(&vk[k1]))?;
                rep.set_map(bar, data.b2.select_rows(&vk[k1]).select_cols(&vk[k]))?;
            }
            ArrowKind::Framing => {
                let k = a.tail;
                debug_assert_eq!(a.head, inf);
                let s = wk[k][copies[k]];
                copies[k] += 1;
                rep.set_map(a.id, data.i.select_rows(&vk[k]).select_cols(&[s]))?;
                rep.set_map(bar, data.j.select_rows(&[s]).select_cols(&vk[k]))?;
            }
            _ => {}
        }
    }
    Ok(rep)
}

/// Monomial ADHM data for a partition: `V = C[x,y]/J` with basis the cells
/// `x^a y^b`, `B2 = x·`, `B1 = y·`, `i = 1`, `j = 0`. `x` has weight 1 and `y`
/// weight -1. `parts[b]` is the number of cells in row `b`.
pub fn partition_adhm<S: Field>(parts: &[usize], n: usize) -> AdhmData<S> {
    let cells: Vec<(usize, usize)> = parts.iter().enumerate().flat_map(|(b, &len)| (0..len).map(move |a| (a, b))).collect();
    let idx = |a: usize, b: usize| cells.iter().position(|&c| c == (a, b));
    let d = cells.len();
    let mut b1 = Matrix::zeros(d, d);
    let mut b2 = Matrix::zeros(d, d);
    for (c, &(a, b)) in cells.iter().enumerate() {
        if let Some(r) = idx(a + 1, b) {
            b2[(r, c)] = S::one();
        }
        if let Some(r) = idx(a, b + 1) {
            b1[(r, c)] = S::one();
        }
    }
    let mut i = Matrix::zeros(d, 1);
    if d > 0 {
        i[(0, 0)] = S::one();
    }
    let weights = cells.iter().map(|&(a, b)| (a + n * b - b) % n).collect();
    AdhmData { b1, b2, i, j: Matrix::zeros(1, d), weights, framing_weights: vec![0] }
}

/// Certificate that a module is a quotient of the truncated `e_I Pi e_0`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuotCertificate<S> {
    /// `dim e_i Z` on McKay vertices, zero off the corner.
    pub dims: DimVector,
    pub truncation: usize,
    /// Kernel of the surjection, per corner vertex, in normal-word coordinates
    /// of `e_i Pi_{<= truncation} e_0`.
    pub kernel: Vec<Subspace<S>>,
}

/// Default truncation: the finiteness bound plus the safety window, and
/// enough degrees for every element of `Z` to be reached from the mark.
pub fn quot_truncation<S: Field>(alg: &CorneredAlgebra<S>, z: &CorneredModule<S>) -> usize {
    (alg.factor_bound() + SAFETY_WINDOW).max(z.total_dim() * alg.max_generator_degree())
}

pub fn check_quot_correspondence<S: Field>(
    alg: &mut CorneredAlgebra<S>,
    z: &CorneredModule<S>,
    mark: &[S],
) -> Result<DimVector> {
    let d = quot_truncation(alg, z);
    Ok(quot_certificate_at(alg, z, mark, d)?.dims)
}

/// Solves for the module map `T = e_I Pi_{<=D} e_0 -> Z` sending `e_0` to
/// `mark`, where elements of degree above `D` act as zero, and checks that it
/// is onto.
pub fn quot_certificate_at<S: Field>(
    alg: &mut CorneredAlgebra<S>,
    z: &CorneredModule<S>,
    mark: &[S],
    truncation: usize,
) -> Result<QuotCertificate<S>> {
    if **z.quiver() != **alg.generator_quiver() {
        return Err(Error::ShapeMismatch("module is not over this cornered algebra".into()));
    }
    let corner = alg.corner().to_vec();
    let Some(p0) = corner.iter().position(|&v| v == 0) else {
        return Err(Error::VertexNotInCorner("0".into()));
    };
    if mark.len() != z.dims()[p0] {
        return Err(Error::ShapeMismatch("marked vector does not live in e_0 Z".into()));
    }
    let n = alg.algebra().quiver().num_finite;
    let mut dims = vec![0; n];
    for (p, &v) in corner.iter().enumerate() {
        dims[v] = z.dims()[p];
    }
    let dims = DimVector::new(dims);

    // basis of T: (degree, word) per corner vertex
    let mut basis: Vec<Vec<(usize, usize)>> = vec![Vec::new(); corner.len()];
    for k in 0..=truncation {
        for (p, &v) in corner.iter().enumerate() {
            for w in alg.algebra_mut().block_words(v, 0, k)? {
                basis[p].push((k, w));
            }
        }
    }
    for (p, &v) in corner.iter().enumerate() {
        if z.dims()[p] > basis[p].len() {
            return Err(Error::NotAQuotient(format!(
                "dim e_{v} Z = {} exceeds dim e_{v} T = {}",
                z.dims()[p],
                basis[p].len()
            )));
        }
    }
    let mut offset = vec![0usize];
    let mut var_of = std::collections::HashMap::new();
    for (p, b) in basis.iter().enumerate() {
        for &t in b {
            var_of.insert((p, t), *offset.last().unwrap());
            offset.push(offset.last().unwrap() + z.dims()[p]);
        }
    }
    let unknowns = *offset.last().unwrap();
    let mut rows: Vec<Vec<S>> = Vec::new();
    let mut rhs: Vec<S> = Vec::new();
    // phi(e_0) = mark
    let e0 = var_of[&(p0, (0, basis[p0][0].1))];
    for (r, x) in mark.iter().enumerate() {
        let mut row = vec![S::zero(); unknowns];
        row[e0 + r] = S::one();
        rows.push(row);
        rhs.push(x.clone());
    }
    // phi(g t) = G phi(t)
    let gens = alg.generators().to_vec();
    for (gi, g) in gens.iter().enumerate() {
        let (pt, ps) = (
            corner.iter().position(|&v| v == g.target).expect("corner"),
            corner.iter().position(|&v| v == g.source).expect("corner"),
        );
        let gm = z.maps()[gi].clone();
        for &(k, w) in &basis[ps].clone() {
            let src = var_of[&(ps, (k, w))];
            let image = if k + g.degree <= truncation {
                let wc = alg.algebra().word_class(k, w);
                Some(alg.algebra_mut().multiply_classes(g, &wc)?)
            } else {
                None
            };
            for r in 0..z.dims()[pt] {
                let mut row = vec![S::zero(); unknowns];
                if let Some(img) = &image {
                    for (u, c) in &img.coeffs {
                        let x = var_of[&(pt, (img.degree, *u))] + r;
                        row[x] = row[x].clone() + c.clone();
                    }
                }
                for c in 0..z.dims()[ps] {
                    let x = src + c;
                    row[x] = row[x].clone() - gm[(r, c)].clone();
                }
                rows.push(row);
                rhs.push(S::zero());
            }
        }
    }
    if unknowns == 0 {
        return Ok(QuotCertificate { dims, truncation, kernel: basis.iter().map(|b| Subspace::full(b.len())).collect() });
    }
    let a = Matrix::from_rows(rows, unknowns)?;
    let b = Matrix::column(&rhs);
    let x = a.solve(&b).ok_or_else(|| Error::NotAQuotient("no module map sends e_0 to the mark".into()))?;
    let mut kernel = Vec::with_capacity(corner.len());
    for (p, bp) in basis.iter().enumerate() {
        let phi = Matrix::from_fn(z.dims()[p], bp.len(), |r, c| x[(var_of[&(p, bp[c])] + r, 0)].clone());
        if phi.rank() != z.dims()[p] {
            return Err(Error::NotAQuotient(format!("the mark does not generate e_{} Z", corner[p])));
        }
        kernel.push(Subspace::span(&phi.kernel()));
    }
    Ok(QuotCertificate { dims, truncation, kernel })
}
