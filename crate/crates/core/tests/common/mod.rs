//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use mckay_core::gamma::{GammaDescriptor, Series};
use mckay_core::linalg::Matrix;
use mckay_core::scalar::Field;
use rand::Rng;

/// Labeling-free description of an affine Dynkin graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    /// Two vertices joined by a double edge.
    Double,
    Cycle(usize),
    /// Vertex count and, per branch vertex, its degree with the sorted lengths
    /// of the arms that end in a leaf.
    Tree(usize, Vec<(usize, Vec<usize>)>),
}

pub fn expected_shape(d: GammaDescriptor) -> Shape {
    let r = d.rank;
    match d.series {
        Series::A if r == 1 => Shape::Double,
        Series::A => Shape::Cycle(r + 1),
        Series::D if r == 4 => Shape::Tree(5, vec![(4, vec![1, 1, 1, 1])]),
        Series::D => Shape::Tree(r + 1, vec![(3, vec![1, 1]), (3, vec![1, 1])]),
        Series::E => {
            let arms = match r {
                6 => vec![2, 2, 2],
                7 => vec![1, 3, 3],
                _ => vec![1, 2, 5],
            };
            Shape::Tree(r + 1, vec![(3, arms)])
        }
    }
}

pub fn shape_of(adj: &[Vec<usize>]) -> Shape {
    let n = adj.len();
    if adj.iter().flatten().any(|&x| x >= 2) {
        return Shape::Double;
    }
    let deg: Vec<usize> = adj.iter().map(|r| r.iter().sum()).collect();
    let edges: usize = deg.iter().sum::<usize>() / 2;
    if edges == n && deg.iter().all(|&d| d == 2) {
        return Shape::Cycle(n);
    }
    let mut branches = Vec::new();
    for b in (0..n).filter(|&v| deg[v] >= 3) {
        let mut arms = Vec::new();
        for start in (0..n).filter(|&u| adj[b][u] > 0) {
            let (mut prev, mut cur, mut len) = (b, start, 1);
            while deg[cur] == 2 {
                let next = (0..n).find(|&u| adj[cur][u] > 0 && u != prev).expect("path continues");
                prev = cur;
                cur = next;
                len += 1;
            }
            if deg[cur] == 1 {
                arms.push(len);
            }
        }
        arms.sort_unstable();
        branches.push((deg[b], arms));
    }
    branches.sort();
    Shape::Tree(n, branches)
}

/// `dim C[x,y]^Γ_k` by counting monomials. Cyclic `Z/n`: `x^a y^b` is
/// invariant iff `a ≡ b (mod n)`. Binary dihedral of order `4m`: the diagonal
/// generator needs `a ≡ b (mod 2m)`, the swap pairs `x^a y^b` with `x^b y^a`
/// and fixes `(xy)^a` up to the sign `(-1)^a`.
pub fn invariant_monomials(d: GammaDescriptor, k: usize) -> usize {
    match d.series {
        Series::A => {
            let n = d.rank + 1;
            (0..=k).filter(|&a| (2 * a + n * k - k) % n == 0).count()
        }
        Series::D => {
            let m = d.rank - 2;
            let mut count = 0;
            for a in 0..=k {
                let b = k - a;
                if a.abs_diff(b) % (2 * m) != 0 {
                    continue;
                }
                // one invariant per swap orbit; the fixed monomial needs even a
                if a < b || (a == b && a % 2 == 0) {
                    count += 1;
                }
            }
            count
        }
        Series::E => panic!("no monomial oracle for series E"),
    }
}

/// Coefficients of the series of `C[x,y,z]^Γ` with `z` invariant, degrees `0..=kmax`.
pub fn invariant_series_with_z(d: GammaDescriptor, kmax: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut running = 0;
    for k in 0..=kmax {
        running += invariant_monomials(d, k);
        out.push(running);
    }
    out
}

/// All partitions of `n` as weakly decreasing row lengths.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=n.min(max)).rev() {
            cur.push(p);
            go(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Block-diagonal invertible matrix preserving the given weight decomposition.
pub fn random_equivariant_gl<S: Field, R: Rng>(weights: &[usize], rng: &mut R) -> Matrix<S> {
    let n = weights.len();
    let mut g = Matrix::<S>::zeros(n, n);
    let mut classes: Vec<usize> = weights.to_vec();
    classes.sort_unstable();
    classes.dedup();
    for w in classes {
        let idx: Vec<usize> = (0..n).filter(|&i| weights[i] == w).collect();
        let block = Matrix::<S>::random_invertible(idx.len(), rng);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                g[(i, j)] = block[(a, b)].clone();
            }
        }
    }
    g
}

/// Every `k x n` matrix in reduced row echelon form with full rank over a
/// finite field, written independently of the library enumerator.
pub fn rref_matrices<S: Field>(n: usize, k: usize) -> Vec<Matrix<S>> {
    let elems = S::elements().expect("finite field");
    let mut out = Vec::new();
    let mut pivots = Vec::new();
    fn choose(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, all: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            all.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            choose(i + 1, n, k, cur, all);
            cur.pop();
        }
    }
    choose(0, n, k, &mut Vec::new(), &mut pivots);
    for piv in pivots {
        let free: Vec<(usize, usize)> =
            (0..k).flat_map(|r| (piv[r] + 1..n).filter(|c| !piv.contains(c)).map(move |c| (r, c))).collect();
        let total = elems.len().pow(free.len() as u32);
        for code in 0..total {
            let mut m = Matrix::<S>::zeros(k, n);
            for (r, &p) in piv.iter().enumerate() {
                m[(r, p)] = S::one();
            }
            let mut x = code;
            for &(r, c) in &free {
                m[(r, c)] = elems[x % elems.len()].clone();
                x /= elems.len();
            }
            out.push(m);
        }
    }
    out
}
