//! Finite subgroups of SL(2, C) in ADE form, with character tables.
//!
//! Vertex order per series:
//! - A_r: irreps `chi_m` with `m = 0..=r`, in cycle order.
//! - D_r: trivial, the sign-like character trivial on `a`, the 2-dim irreps
//!   along the long chain, then the two characters with `a -> -1`.
//! - E_r: trivial vertex first, then along the long arm; the branch vertex
//!   last for E7/E8, and the two short arms after the centre for E6.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Mat2 = [[Complex64; 2]; 2];

const CHARACTER_TOL: f64 = 1e-9;
const MULTIPLICITY_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Series {
    A,
    D,
    E,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GammaDescriptor {
    pub series: Series,
    pub rank: usize,
}

impl GammaDescriptor {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let ok = match series {
            Series::A => rank >= 1,
            Series::D => rank >= 4,
            Series::E => (6..=8).contains(&rank),
        };
        let d = GammaDescriptor { series, rank };
        if ok {
            Ok(d)
        } else {
            Err(Error::InvalidDescriptor(d.to_string()))
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.rank + 1
    }
}

impl fmt::Display for GammaDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.series {
            Series::A => 'A',
            Series::D => 'D',
            Series::E => 'E',
        };
        write!(f, "{s}{}", self.rank)
    }
}

impl FromStr for GammaDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidDescriptor(s.to_string());
        let t = s.trim();
        let mut chars = t.chars();
        let series = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Series::A,
            Some('D') => Series::D,
            Some('E') => Series::E,
            _ => return Err(bad()),
        };
        let rest = chars.as_str();
        if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let rank: usize = rest.parse().map_err(|_| bad())?;
        GammaDescriptor::new(series, rank).map_err(|_| bad())
    }
}

#[derive(Clone, Debug)]
pub struct GroupData {
    pub descriptor: GammaDescriptor,
    pub order: usize,
    /// Explicit matrices, series A and D only.
    pub elements: Option<Vec<Mat2>>,
    /// Conjugacy class index of each explicit element.
    pub element_class: Option<Vec<usize>>,
    /// Rows are irreps in vertex order, columns conjugacy classes.
    pub characters: Vec<Vec<Complex64>>,
    pub class_sizes: Vec<usize>,
    pub irrep_dims: Vec<usize>,
    /// Character of the defining 2-dim representation, per class.
    pub natural_character: Vec<Complex64>,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn r(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn root_of_unity(k: i64, n: i64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (k as f64) / (n as f64))
}

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut o = [[c(0.0, 0.0); 2]; 2];
    for (i, row) in o.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    o
}

fn mat_inv_su2(a: &Mat2) -> Mat2 {
    // det = 1, so the inverse is the adjugate
    [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]]
}

fn mat_close(a: &Mat2, b: &Mat2) -> bool {
    (0..2).all(|i| (0..2).all(|j| (a[i][j] - b[i][j]).norm() < 1e-9))
}

fn trace(a: &Mat2) -> Complex64 {
    a[0][0] + a[1][1]
}

/// Index of `m` in `elements`, matched up to float tolerance.
pub fn find_element(elements: &[Mat2], m: &Mat2) -> Option<usize> {
    elements.iter().position(|e| mat_close(e, m))
}

fn conjugacy_classes(elements: &[Mat2]) -> Vec<usize> {
    let mut class = vec![usize::MAX; elements.len()];
    let mut next = 0;
    for x in 0..elements.len() {
        if class[x] != usize::MAX {
            continue;
        }
        for g in elements {
            let y = mat_mul(&mat_mul(g, &elements[x]), &mat_inv_su2(g));
            let idx = find_element(elements, &y).expect("group not closed under conjugation");
            class[idx] = next;
        }
        next += 1;
    }
    class
}

/// Element labels `(m, e)` meaning `a^m b^e` for the binary dihedral group.
fn dihedral_labels(n: usize) -> Vec<(usize, usize)> {
    (0..2).flat_map(|e| (0..2 * n).map(move |m| (m, e))).collect()
}

/// Explicit matrices of every irrep of a series A or D group, one list per
/// vertex, aligned with `GroupData::elements`.
pub fn explicit_irrep_matrices(desc: GammaDescriptor) -> Result<Vec<Vec<Vec<Vec<Complex64>>>>> {
    match desc.series {
        Series::A => {
            let n = desc.rank as i64 + 1;
            Ok((0..n)
                .map(|m| (0..n).map(|k| vec![vec![root_of_unity(m * k, n)]]).collect())
                .collect())
        }
        Series::D => {
            let n = desc.rank - 2;
            let labels = dihedral_labels(n);
            let zeta = |k: i64| root_of_unity(k, 2 * n as i64);
            let mut out: Vec<Vec<Vec<Vec<Complex64>>>> = Vec::new();
            for (s, beta) in dihedral_one_dim(n) {
                out.push(
                    labels
                        .iter()
                        .map(|&(m, e)| vec![vec![s.powi(m as i32) * if e == 1 { beta } else { r(1.0) }]])
                        .collect(),
                );
            }
            let mut two_dim = Vec::new();
            for k in 1..n as i64 {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                two_dim.push(
                    labels
                        .iter()
                        .map(|&(m, e)| {
                            let d = [zeta(k * m as i64), zeta(-k * m as i64)];
                            if e == 0 {
                                vec![vec![d[0], r(0.0)], vec![r(0.0), d[1]]]
                            } else {
                                vec![vec![r(0.0), d[0]], vec![d[1] * sign, r(0.0)]]
                            }
                        })
                        .collect(),
                );
            }
            // vertex order: two a->1 chars, chain of 2-dims, two a->-1 chars
            let mut ordered = vec![out[0].clone(), out[1].clone()];
            ordered.extend(two_dim);
            ordered.push(out[2].clone());
            ordered.push(out[3].clone());
            Ok(ordered)
        }
        Series::E => Err(Error::UnsupportedSeries(desc.to_string())),
    }
}

/// The four 1-dim characters `(s, beta)`: `a -> s`, `b -> beta`, `beta^2 = s^n`.
fn dihedral_one_dim(n: usize) -> [(Complex64, Complex64); 4] {
    let odd = n % 2 == 1;
    let (b1, b2) = if odd { (c(0.0, 1.0), c(0.0, -1.0)) } else { (r(1.0), r(-1.0)) };
    [(r(1.0), r(1.0)), (r(1.0), r(-1.0)), (r(-1.0), b1), (r(-1.0), b2)]
}

fn build_cyclic(desc: GammaDescriptor) -> GroupData {
    let n = desc.rank as i64 + 1;
    let elements: Vec<Mat2> = (0..n)
        .map(|k| [[root_of_unity(k, n), r(0.0)], [r(0.0), root_of_unity(-k, n)]])
        .collect();
    let characters = (0..n).map(|m| (0..n).map(|k| root_of_unity(m * k, n)).collect()).collect();
    GroupData {
        descriptor: desc,
        order: n as usize,
        natural_character: elements.iter().map(trace).collect(),
        element_class: Some((0..n as usize).collect()),
        elements: Some(elements),
        characters,
        class_sizes: vec![1; n as usize],
        irrep_dims: vec![1; n as usize],
    }
}

fn build_binary_dihedral(desc: GammaDescriptor) -> GroupData {
    let n = desc.rank - 2;
    let zeta = |k: i64| root_of_unity(k, 2 * n as i64);
    let labels = dihedral_labels(n);
    let elements: Vec<Mat2> = labels
        .iter()
        .map(|&(m, e)| {
            let (z, zi) = (zeta(m as i64), zeta(-(m as i64)));
            if e == 0 {
                [[z, r(0.0)], [r(0.0), zi]]
            } else {
                [[r(0.0), z], [-zi, r(0.0)]]
            }
        })
        .collect();
    let element_class = conjugacy_classes(&elements);
    let num_classes = element_class.iter().max().map_or(0, |m| m + 1);
    let mut class_sizes = vec![0; num_classes];
    let mut reps = vec![usize::MAX; num_classes];
    for (idx, &cl) in element_class.iter().enumerate() {
        class_sizes[cl] += 1;
        if reps[cl] == usize::MAX {
            reps[cl] = idx;
        }
    }
    let one_dim = dihedral_one_dim(n);
    let char_one = |(s, beta): (Complex64, Complex64), (m, e): (usize, usize)| {
        s.powi(m as i32) * if e == 1 { beta } else { r(1.0) }
    };
    let mut characters = Vec::new();
    let mut irrep_dims = Vec::new();
    let mut push = |row: Vec<Complex64>, d: usize| {
        characters.push(row);
        irrep_dims.push(d);
    };
    for &ch in &one_dim[..2] {
        push(reps.iter().map(|&i| char_one(ch, labels[i])).collect(), 1);
    }
    for k in 1..n {
        let row = reps
            .iter()
            .map(|&i| {
                let (m, e) = labels[i];
                if e == 1 {
                    r(0.0)
                } else {
                    r(2.0 * (PI * (k * m) as f64 / n as f64).cos())
                }
            })
            .collect();
        push(row, 2);
    }
    for &ch in &one_dim[2..] {
        push(reps.iter().map(|&i| char_one(ch, labels[i])).collect(), 1);
    }
    GroupData {
        descriptor: desc,
        order: 4 * n,
        natural_character: reps.iter().map(|&i| trace(&elements[i])).collect(),
        elements: Some(elements),
        element_class: Some(element_class),
        characters,
        class_sizes,
        irrep_dims,
    }
}

fn build_exceptional(desc: GammaDescriptor) -> GroupData {
    let w = root_of_unity(1, 3);
    let w2 = w * w;
    let s2 = 2f64.sqrt();
    let tau = (1.0 + 5f64.sqrt()) / 2.0;
    let sig = (1.0 - 5f64.sqrt()) / 2.0;
    let rows = |v: &[&[Complex64]]| v.iter().map(|x| x.to_vec()).collect::<Vec<_>>();
    let reals = |v: &[&[f64]]| v.iter().map(|x| x.iter().map(|&y| r(y)).collect()).collect::<Vec<_>>();
    let (order, class_sizes, characters): (usize, Vec<usize>, Vec<Vec<Complex64>>) = match desc.rank {
        6 => (
            24,
            vec![1, 1, 6, 4, 4, 4, 4],
            rows(&[
                &[r(1.), r(1.), r(1.), r(1.), r(1.), r(1.), r(1.)],
                &[r(2.), r(-2.), r(0.), r(1.), r(-1.), r(1.), r(-1.)],
                &[r(3.), r(3.), r(-1.), r(0.), r(0.), r(0.), r(0.)],
                &[r(2.), r(-2.), r(0.), w, -w2, w2, -w],
                &[r(1.), r(1.), r(1.), w, w2, w2, w],
                &[r(2.), r(-2.), r(0.), w2, -w, w, -w2],
                &[r(1.), r(1.), r(1.), w2, w, w, w2],
            ]),
        ),
        7 => (
            48,
            vec![1, 1, 6, 6, 6, 8, 8, 12],
            reals(&[
                &[1., 1., 1., 1., 1., 1., 1., 1.],
                &[2., -2., 0., s2, -s2, -1., 1., 0.],
                &[3., 3., -1., 1., 1., 0., 0., -1.],
                &[4., -4., 0., 0., 0., 1., -1., 0.],
                &[3., 3., -1., -1., -1., 0., 0., 1.],
                &[2., -2., 0., -s2, s2, -1., 1., 0.],
                &[1., 1., 1., -1., -1., 1., 1., -1.],
                &[2., 2., 2., 0., 0., -1., -1., 0.],
            ]),
        ),
        _ => (
            120,
            vec![1, 1, 30, 20, 20, 12, 12, 12, 12],
            reals(&[
                &[1., 1., 1., 1., 1., 1., 1., 1., 1.],
                &[2., -2., 0., 1., -1., tau, sig, -sig, -tau],
                &[3., 3., -1., 0., 0., tau, sig, sig, tau],
                &[4., -4., 0., -1., 1., 1., 1., -1., -1.],
                &[5., 5., 1., -1., -1., 0., 0., 0., 0.],
                &[6., -6., 0., 0., 0., -1., -1., 1., 1.],
                &[4., 4., 0., 1., 1., -1., -1., -1., -1.],
                &[2., -2., 0., 1., -1., sig, tau, -tau, -sig],
                &[3., 3., -1., 0., 0., sig, tau, tau, sig],
            ]),
        ),
    };
    let irrep_dims = characters.iter().map(|row| row[0].re.round() as usize).collect();
    GroupData {
        descriptor: desc,
        order,
        elements: None,
        element_class: None,
        natural_character: characters[1].clone(),
        characters,
        class_sizes,
        irrep_dims,
    }
}

pub fn build_group(desc: GammaDescriptor) -> Result<GroupData> {
    let desc = GammaDescriptor::new(desc.series, desc.rank)?;
    let g = match desc.series {
        Series::A => build_cyclic(desc),
        Series::D => build_binary_dihedral(desc),
        Series::E => build_exceptional(desc),
    };
    let defect = g.orthogonality_defect();
    assert!(defect < CHARACTER_TOL, "character table of {desc} fails orthogonality ({defect})");
    Ok(g)
}

impl GroupData {
    pub fn num_irreps(&self) -> usize {
        self.characters.len()
    }

    /// `(1/|G|) sum_c |c| f(c) conj(g(c))`.
    pub fn inner(&self, f: &[Complex64], g: &[Complex64]) -> Complex64 {
        let s: Complex64 = (0..self.class_sizes.len())
            .map(|c| f[c] * g[c].conj() * self.class_sizes[c] as f64)
            .sum();
        s / self.order as f64
    }

    /// Largest deviation of the character Gram matrix from the identity.
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.num_irreps();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let v = self.inner(&self.characters[i], &self.characters[j]);
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((v - r(target)).norm());
            }
        }
        worst
    }

    /// `dim Hom(rho_j, rho_i ⊗ V)`.
    pub fn tensor_multiplicity(&self, i: usize, j: usize) -> Result<usize> {
        let prod: Vec<Complex64> = (0..self.class_sizes.len())
            .map(|c| self.natural_character[c] * self.characters[i][c])
            .collect();
        let v = self.inner(&prod, &self.characters[j]);
        let rounded = v.re.round();
        if v.im.abs() > MULTIPLICITY_TOL || (v.re - rounded).abs() > MULTIPLICITY_TOL || rounded < 0.0 {
            return Err(Error::NonIntegralMultiplicity { i, j, value: format!("{v}") });
        }
        Ok(rounded as usize)
    }

    pub fn adjacency(&self) -> Result<Vec<Vec<usize>>> {
        let n = self.num_irreps();
        (0..n).map(|i| (0..n).map(|j| self.tensor_multiplicity(i, j)).collect()).collect()
    }

    /// Traces of the defining representation on each explicit element.
    pub fn element_traces(&self) -> Option<Vec<f64>> {
        self.elements.as_ref().map(|els| els.iter().map(|e| trace(e).re).collect())
    }
}

/// Stored affine Dynkin edge list in this crate's vertex order. Double edges
/// appear twice.
pub fn affine_dynkin_edges(desc: GammaDescriptor) -> Vec<(usize, usize)> {
    let r = desc.rank;
    match desc.series {
        Series::A if r == 1 => vec![(0, 1), (0, 1)],
        Series::A => (0..=r).map(|k| (k, (k + 1) % (r + 1))).map(|(a, b)| (a.min(b), a.max(b))).collect(),
        Series::D => {
            let mut e = vec![(0, 2), (1, 2)];
            e.extend((2..r - 2).map(|k| (k, k + 1)));
            e.push((r - 2, r - 1));
            e.push((r - 2, r));
            e
        }
        Series::E => match r {
            6 => vec![(0, 1), (1, 2), (2, 3), (3, 4), (2, 5), (5, 6)],
            7 => vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (3, 7)],
            _ => vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (5, 8)],
        },
    }
}

pub fn affine_dynkin_adjacency(desc: GammaDescriptor) -> Vec<Vec<usize>> {
    let n = desc.num_vertices();
    let mut a = vec![vec![0; n]; n];
    for (i, j) in affine_dynkin_edges(desc) {
        a[i][j] += 1;
        a[j][i] += 1;
    }
    a
}

/// All supported descriptors up to the given A/D ranks.
pub fn descriptors(max_a: usize, max_d: usize) -> Vec<GammaDescriptor> {
    let mut v: Vec<_> = (1..=max_a).map(|r| GammaDescriptor { series: Series::A, rank: r }).collect();
    v.extend((4..=max_d).map(|r| GammaDescriptor { series: Series::D, rank: r }));
    v.extend((6..=8).map(|r| GammaDescriptor { series: Series::E, rank: r }));
    v
}
