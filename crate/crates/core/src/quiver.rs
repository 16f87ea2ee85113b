//! Doubled, framed and tripled McKay quivers.
//!
//! An arrow `a` acts as a map `M_{h(a)} -> M_{t(a)}`, so as an algebra element
//! it lies in `e_{t(a)} A e_{h(a)}`. A path is a sequence of arrow ids
//! `[a1, .., ak]` meaning the product `a1 a2 .. ak`; it is composable when
//! `h(a_m) = t(a_{m+1})`, and acts on a module by applying `ak` first.
//!
//! In each bar pair the arrow with the smaller id is called positive. The
//! preprojective relation at vertex `i` is `sum_{t(b) = i} eps(b) b bbar`
//! with `eps = +1` on positive arrows.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gamma::{GammaDescriptor, GroupData, Series};
use crate::scalar::{Field, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArrowKind {
    Double,
    Framing,
    Loop,
    /// Unbarred arrow standing for an algebra generator.
    Generator,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub id: usize,
    pub tail: usize,
    pub head: usize,
    pub bar: Option<usize>,
    pub kind: ArrowKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    pub group: Option<GammaDescriptor>,
    /// Number of McKay vertices `0..=r`; the framing vertex, if any, comes next.
    pub num_finite: usize,
    pub infinity: Option<usize>,
    pub arrows: Vec<Arrow>,
    pub loops: BTreeMap<usize, usize>,
    pub framing: Option<Vec<usize>>,
}

/// A homogeneous quadratic relation `sum c [x, y]` in `e_target A e_source`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub target: usize,
    pub source: usize,
    pub terms: Vec<(i64, [usize; 2])>,
}

impl Quiver {
    pub fn empty(group: Option<GammaDescriptor>, num_finite: usize) -> Self {
        Quiver { group, num_finite, infinity: None, arrows: Vec::new(), loops: BTreeMap::new(), framing: None }
    }

    pub fn push_arrow(&mut self, tail: usize, head: usize, kind: ArrowKind) -> usize {
        let id = self.arrows.len();
        self.arrows.push(Arrow { id, tail, head, bar: None, kind });
        id
    }

    /// Adds a positive arrow `t <- h` and its bar.
    pub fn push_pair(&mut self, tail: usize, head: usize, kind: ArrowKind) -> (usize, usize) {
        let a = self.push_arrow(tail, head, kind);
        let b = self.push_arrow(head, tail, kind);
        self.arrows[a].bar = Some(b);
        self.arrows[b].bar = Some(a);
        (a, b)
    }

    pub fn num_vertices(&self) -> usize {
        self.num_finite + usize::from(self.infinity.is_some())
    }

    pub fn is_framed(&self) -> bool {
        self.infinity.is_some()
    }

    pub fn is_tripled(&self) -> bool {
        !self.loops.is_empty()
    }

    pub fn arrow(&self, id: usize) -> &Arrow {
        &self.arrows[id]
    }

    pub fn is_positive(&self, id: usize) -> bool {
        self.arrows[id].bar.is_some_and(|b| id < b)
    }

    pub fn epsilon(&self, id: usize) -> i64 {
        if self.is_positive(id) {
            1
        } else {
            -1
        }
    }

    pub fn vertex_name(&self, v: usize) -> String {
        if Some(v) == self.infinity {
            "inf".to_string()
        } else {
            v.to_string()
        }
    }

    pub fn parse_vertex(&self, s: &str) -> Result<usize> {
        let s = s.trim();
        if s == "inf" || s == "∞" {
            return self.infinity.ok_or_else(|| Error::Parse("quiver has no framing vertex".into()));
        }
        s.parse::<usize>()
            .ok()
            .filter(|&v| v < self.num_finite)
            .ok_or_else(|| Error::Parse(format!("unknown vertex `{s}`")))
    }

    /// Multiplicity-weighted adjacency among McKay vertices (doubled arrows only).
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let n = self.num_finite;
        let mut a = vec![vec![0; n]; n];
        for ar in &self.arrows {
            if ar.kind == ArrowKind::Double {
                a[ar.tail][ar.head] += 1;
            }
        }
        a
    }

    pub fn positive_arrows(&self) -> impl Iterator<Item = &Arrow> + '_ {
        self.arrows.iter().filter(|a| self.is_positive(a.id))
    }

    pub fn loop_at(&self, v: usize) -> Option<usize> {
        self.loops.get(&v).copied()
    }

    /// Preprojective relations, one per vertex that has barred arrows.
    pub fn preprojective_relations(&self) -> Vec<Relation> {
        let mut out = Vec::new();
        for v in 0..self.num_vertices() {
            let terms: Vec<(i64, [usize; 2])> = self
                .arrows
                .iter()
                .filter(|a| a.tail == v)
                .filter_map(|a| a.bar.map(|b| (self.epsilon(a.id), [a.id, b])))
                .collect();
            if !terms.is_empty() {
                out.push(Relation { target: v, source: v, terms });
            }
        }
        out
    }

    /// `d_{t(a)} a - a d_{h(a)}` for every barred arrow between looped vertices.
    pub fn commutation_relations(&self) -> Vec<Relation> {
        self.arrows
            .iter()
            .filter(|a| a.kind != ArrowKind::Loop)
            .filter_map(|a| {
                let dt = self.loop_at(a.tail)?;
                let dh = self.loop_at(a.head)?;
                Some(Relation { target: a.tail, source: a.head, terms: vec![(1, [dt, a.id]), (-1, [a.id, dh])] })
            })
            .collect()
    }

    pub fn relations(&self) -> Vec<Relation> {
        let mut r = self.preprojective_relations();
        r.extend(self.commutation_relations());
        r
    }

    /// Source vertex of a path (where it starts acting), given its target for empty paths.
    pub fn path_source(&self, path: &[usize]) -> Option<usize> {
        path.last().map(|&a| self.arrows[a].head)
    }

    pub fn path_target(&self, path: &[usize]) -> Option<usize> {
        path.first().map(|&a| self.arrows[a].tail)
    }

    pub fn is_composable(&self, path: &[usize]) -> bool {
        path.windows(2).all(|w| self.arrows[w[0]].head == self.arrows[w[1]].tail)
    }

    /// The quiver with the framing vertex and its arrows removed.
    pub fn unframed(&self) -> Quiver {
        let mut q = Quiver::empty(self.group, self.num_finite);
        let mut remap = BTreeMap::new();
        for a in &self.arrows {
            if a.kind == ArrowKind::Framing {
                continue;
            }
            let id = q.arrows.len();
            remap.insert(a.id, id);
            q.arrows.push(Arrow { id, ..a.clone() });
        }
        for a in q.arrows.iter_mut() {
            a.bar = a.bar.map(|b| remap[&b]);
        }
        q.loops = self.loops.iter().map(|(&v, a)| (v, remap[a])).collect();
        q
    }
}

pub fn mckay_quiver(g: &GroupData) -> Result<Quiver> {
    let adj = g.adjacency()?;
    let n = g.num_irreps();
    let desc = g.descriptor;
    if let Some(i) = (0..n).find(|&i| adj[i][i] != 0) {
        return Err(Error::InvalidDescriptor(format!("{desc}: unexpected loop at vertex {i}")));
    }
    let mut q = Quiver::empty(Some(desc), n);
    if desc.series == Series::A {
        // cycle orientation: alpha_k from k+1 to k
        for k in 0..n {
            q.push_pair(k, (k + 1) % n, ArrowKind::Double);
        }
    } else {
        for i in 0..n {
            for j in i + 1..n {
                for _ in 0..adj[i][j] {
                    q.push_pair(i, j, ArrowKind::Double);
                }
            }
        }
    }
    if q.adjacency() != adj {
        return Err(Error::InvalidDescriptor(format!("{desc}: quiver does not match character data")));
    }
    Ok(q)
}

pub fn frame_quiver(q: &Quiver, w: &DimVector) -> Result<Quiver> {
    if q.is_framed() {
        return Err(Error::AlreadyFramed);
    }
    if w.at_infinity.is_some() || w.components.len() != q.num_finite {
        return Err(Error::ShapeMismatch("framing vector must cover exactly the McKay vertices".into()));
    }
    let mut f = q.clone();
    let inf = q.num_finite;
    f.infinity = Some(inf);
    for (k, &wk) in w.components.iter().enumerate() {
        for _ in 0..wk {
            f.push_pair(k, inf, ArrowKind::Framing);
        }
    }
    f.framing = Some(w.components.clone());
    Ok(f)
}

pub fn triple_quiver(q: &Quiver) -> Result<Quiver> {
    if q.is_tripled() {
        return Err(Error::AlreadyTripled);
    }
    if q.is_framed() {
        return Err(Error::AlreadyFramed);
    }
    let mut t = q.clone();
    for v in 0..q.num_finite {
        let id = t.push_arrow(v, v, ArrowKind::Loop);
        t.loops.insert(v, id);
    }
    Ok(t)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DimVector {
    pub at_infinity: Option<usize>,
    pub components: Vec<usize>,
}

impl DimVector {
    pub fn new(components: Vec<usize>) -> Self {
        DimVector { at_infinity: None, components }
    }

    pub fn framed(components: Vec<usize>) -> Self {
        DimVector { at_infinity: Some(1), components }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(vec![0; n])
    }

    pub fn total(&self) -> usize {
        self.components.iter().sum::<usize>() + self.at_infinity.unwrap_or(0)
    }

    pub fn scaled(&self, n: usize) -> Self {
        DimVector { at_infinity: self.at_infinity, components: self.components.iter().map(|x| x * n).collect() }
    }

    /// Componentwise `<=` on McKay vertices and at infinity.
    pub fn le(&self, other: &Self) -> bool {
        self.components.len() == other.components.len()
            && self.components.iter().zip(&other.components).all(|(a, b)| a <= b)
            && self.at_infinity.unwrap_or(0) <= other.at_infinity.unwrap_or(0)
    }
}

/// Rational weights on McKay vertices and on the framing vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilityParam {
    pub at_infinity: Rational,
    pub values: Vec<Rational>,
}

impl StabilityParam {
    pub fn evaluate(&self, d: &DimVector) -> Rational {
        let mut s = self.at_infinity.clone() * Rational::from_i64(d.at_infinity.unwrap_or(0) as i64);
        for (t, &x) in self.values.iter().zip(&d.components) {
            s = s + t.clone() * Rational::from_i64(x as i64);
        }
        s
    }

    /// Recovers `I` when this parameter has the `theta_I` shape for `v`.
    pub fn as_theta_i(&self, v: &DimVector) -> Option<Vec<usize>> {
        let one = Rational::from_i64(1);
        if !self.values.iter().all(|x| x.is_zero() || *x == one) {
            return None;
        }
        let set: Vec<usize> = (0..self.values.len()).filter(|&i| self.values[i] == one).collect();
        (!set.is_empty() && *self == theta_i(&set, v).ok()?).then_some(set)
    }
}

pub fn theta_i(set: &[usize], v: &DimVector) -> Result<StabilityParam> {
    if set.is_empty() {
        return Err(Error::EmptyI);
    }
    let n = v.components.len();
    if let Some(&bad) = set.iter().find(|&&i| i >= n) {
        return Err(Error::VertexNotInCorner(bad.to_string()));
    }
    let mut values = vec![Rational::from_i64(0); n];
    let mut total = 0i64;
    for &i in set {
        values[i] = Rational::from_i64(1);
    }
    for i in 0..n {
        if set.contains(&i) {
            total += v.components[i] as i64;
        }
    }
    Ok(StabilityParam { at_infinity: Rational::from_i64(-total), values })
}

pub fn delta(g: &GroupData) -> DimVector {
    DimVector::new(g.irrep_dims.clone())
}

pub fn one_bar(g: &GroupData) -> DimVector {
    let mut c = vec![0; g.num_irreps()];
    c[0] = 1;
    DimVector::new(c)
}

/// Sorted, deduplicated corner set with range check.
pub fn normalize_corner(set: &[usize], num_finite: usize) -> Result<Vec<usize>> {
    if set.is_empty() {
        return Err(Error::EmptyI);
    }
    let mut s = set.to_vec();
    s.sort_unstable();
    s.dedup();
    if let Some(&bad) = s.iter().find(|&&i| i >= num_finite) {
        return Err(Error::VertexNotInCorner(bad.to_string()));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::build_group;

    fn quiver(s: &str) -> Quiver {
        mckay_quiver(&build_group(s.parse().unwrap()).unwrap()).unwrap()
    }

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn small_quivers() {
        let a1 = quiver("A1");
        assert_eq!((a1.num_vertices(), a1.arrows.len()), (2, 4));
        let a2 = quiver("A2");
        assert_eq!((a2.num_vertices(), a2.arrows.len()), (3, 6));
    }

    #[test]
    fn framing_and_tripling() {
        let a1 = quiver("A1");
        let f = frame_quiver(&a1, &DimVector::new(vec![1, 0])).unwrap();
        assert_eq!((f.num_vertices(), f.arrows.len()), (3, 6));
        assert_eq!(frame_quiver(&f, &DimVector::new(vec![1, 0])), Err(Error::AlreadyFramed));
        let f0 = frame_quiver(&a1, &DimVector::zero(2)).unwrap();
        assert_eq!((f0.num_vertices(), f0.arrows.len()), (3, 4));
        let a2 = quiver("A2");
        let f2 = frame_quiver(&a2, &DimVector::new(vec![2, 0, 1])).unwrap();
        assert_eq!(f2.arrows.len() - a2.arrows.len(), 6);
        let t = triple_quiver(&a1).unwrap();
        assert_eq!(t.arrows.len(), 6);
        assert_eq!(triple_quiver(&t), Err(Error::AlreadyTripled));
        assert_eq!(triple_quiver(&a2).unwrap().arrows.len(), 9);
        for (&v, &d) in &t.loops {
            assert_eq!((t.arrow(d).tail, t.arrow(d).head), (v, v));
            assert!(t.arrow(d).bar.is_none());
        }
    }

    #[test]
    fn bar_is_an_involution() {
        let q = frame_quiver(&quiver("D5"), &DimVector::new(vec![1, 0, 2, 0, 0, 1])).unwrap();
        for a in &q.arrows {
            let b = q.arrow(a.bar.unwrap());
            assert_eq!(b.bar, Some(a.id));
            assert_ne!(b.id, a.id);
            assert_eq!((b.tail, b.head), (a.head, a.tail));
        }
    }

    #[test]
    fn unframe_round_trip() {
        let a3 = quiver("A3");
        let f = frame_quiver(&a3, &DimVector::new(vec![1, 1, 0, 2])).unwrap();
        assert_eq!(f.unframed(), a3);
    }

    #[test]
    fn theta_examples() {
        let th = theta_i(&[0], &DimVector::new(vec![2, 1, 1])).unwrap();
        assert_eq!(th.at_infinity, q(-2));
        assert_eq!(th.values, vec![q(1), q(0), q(0)]);
        let th = theta_i(&[0, 1], &DimVector::new(vec![1, 1])).unwrap();
        assert_eq!(th.at_infinity, q(-2));
        assert_eq!(theta_i(&[], &DimVector::new(vec![1])), Err(Error::EmptyI));
        let v = DimVector::framed(vec![3, 1, 4]);
        let th = theta_i(&[1, 2], &v).unwrap();
        assert!(th.evaluate(&v).is_zero());
        assert_eq!(th.as_theta_i(&v), Some(vec![1, 2]));
    }

    #[test]
    fn delta_and_one_bar() {
        let g = build_group("D4".parse().unwrap()).unwrap();
        assert_eq!(delta(&g).components, vec![1, 1, 2, 1, 1]);
        assert_eq!(one_bar(&g).total(), 1);
    }

    #[test]
    fn relation_shapes() {
        let t = triple_quiver(&quiver("A2")).unwrap();
        let rels = t.relations();
        assert_eq!(rels.len(), 3 + 6);
        for r in rels {
            for (_, [x, y]) in r.terms {
                assert_eq!(t.arrow(x).head, t.arrow(y).tail);
                assert_eq!(t.arrow(x).tail, r.target);
                assert_eq!(t.arrow(y).head, r.source);
            }
        }
    }
}
