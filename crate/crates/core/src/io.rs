//! JSON formats for quivers, modules, ADHM data, truncated graded modules and
//! slices. Scalars are written as strings, rationals as `p/q`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::GradedSlice;
use crate::corner::TruncatedGradedModule;
use crate::error::{Error, Result};
use crate::gamma::{build_group, GammaDescriptor};
use crate::linalg::Matrix;
use crate::moduli::AdhmData;
use crate::quiver::{frame_quiver, mckay_quiver, triple_quiver, Arrow, ArrowKind, DimVector, Quiver};
use crate::rep::QuiverRep;
use crate::scalar::{Field, Rational};

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowFile {
    pub id: usize,
    pub tail: String,
    pub head: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bar: Option<usize>,
    pub kind: String,
}

/// Either a full arrow list or a descriptor with optional framing and tripling.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arrows: Option<Vec<ArrowFile>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub loops: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub framing: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub triple: bool,
}

fn kind_name(k: ArrowKind) -> &'static str {
    match k {
        ArrowKind::Double => "double",
        ArrowKind::Framing => "framing",
        ArrowKind::Loop => "loop",
        ArrowKind::Generator => "generator",
    }
}

fn kind_from(s: &str) -> Result<ArrowKind> {
    Ok(match s {
        "double" => ArrowKind::Double,
        "framing" => ArrowKind::Framing,
        "loop" => ArrowKind::Loop,
        "generator" => ArrowKind::Generator,
        _ => return Err(Error::Parse(format!("unknown arrow kind `{s}`"))),
    })
}

impl QuiverFile {
    pub fn from_quiver(q: &Quiver) -> Self {
        QuiverFile {
            group: q.group.map(|g| g.to_string()),
            vertices: Some((0..q.num_vertices()).map(|v| q.vertex_name(v)).collect()),
            arrows: Some(
                q.arrows
                    .iter()
                    .map(|a| ArrowFile {
                        id: a.id,
                        tail: q.vertex_name(a.tail),
                        head: q.vertex_name(a.head),
                        bar: a.bar,
                        kind: kind_name(a.kind).to_string(),
                    })
                    .collect(),
            ),
            loops: q.loops.iter().map(|(&v, &a)| (q.vertex_name(v), a)).collect(),
            framing: q.framing.clone(),
            triple: false,
        }
    }

    pub fn to_quiver(&self) -> Result<Quiver> {
        let group = self.group.as_deref().map(str::parse::<GammaDescriptor>).transpose()?;
        let Some(arrows) = &self.arrows else {
            let g = build_group(group.ok_or_else(|| Error::Parse("quiver needs `group` or `arrows`".into()))?)?;
            let mut q = mckay_quiver(&g)?;
            if self.triple {
                q = triple_quiver(&q)?;
            }
            if let Some(w) = &self.framing {
                q = frame_quiver(&q, &DimVector::new(w.clone()))?;
            }
            return Ok(q);
        };
        let names = self.vertices.clone().ok_or_else(|| Error::Parse("quiver with arrows needs `vertices`".into()))?;
        let num_finite = names.iter().filter(|v| v.as_str() != "inf").count();
        for (i, v) in names.iter().enumerate() {
            let ok = if i < num_finite { *v == i.to_string() } else { v == "inf" };
            if !ok {
                return Err(Error::Parse(format!("vertex {i} is named `{v}`; expected 0..n then `inf`")));
            }
        }
        let mut q = Quiver::empty(group, num_finite);
        if names.len() > num_finite {
            q.infinity = Some(num_finite);
        }
        for (i, a) in arrows.iter().enumerate() {
            if a.id != i {
                return Err(Error::Parse(format!("arrow ids must be 0..n in order; found {} at position {i}", a.id)));
            }
            q.arrows.push(Arrow {
                id: a.id,
                tail: q.parse_vertex(&a.tail)?,
                head: q.parse_vertex(&a.head)?,
                bar: a.bar,
                kind: kind_from(&a.kind)?,
            });
        }
        for a in &q.arrows {
            if let Some(b) = a.bar {
                let ok = q.arrows.get(b).is_some_and(|x| x.bar == Some(a.id) && x.tail == a.head && x.head == a.tail);
                if !ok {
                    return Err(Error::Parse(format!("arrow {} has an inconsistent bar", a.id)));
                }
            }
        }
        for (v, &a) in &self.loops {
            let v = q.parse_vertex(v)?;
            if q.arrows.get(a).is_none_or(|x| x.tail != v || x.head != v) {
                return Err(Error::Parse(format!("loop {a} is not a loop at {v}")));
            }
            q.loops.insert(v, a);
        }
        q.framing = self.framing.clone();
        Ok(q)
    }
}

pub fn quiver_to_json(q: &Quiver) -> String {
    serde_json::to_string_pretty(&QuiverFile::from_quiver(q)).expect("serializable")
}

pub fn quiver_from_json(s: &str) -> Result<Quiver> {
    serde_json::from_str::<QuiverFile>(s).map_err(parse_err)?.to_quiver()
}

pub fn matrix_to_strings<S: Field>(m: &Matrix<S>) -> Vec<Vec<String>> {
    (0..m.rows()).map(|r| m.row(r).iter().map(|x| x.to_text()).collect()).collect()
}

pub fn matrix_from_strings<S: Field>(rows: &[Vec<String>], shape: (usize, usize)) -> Result<Matrix<S>> {
    if rows.len() != shape.0 || rows.iter().any(|r| r.len() != shape.1) {
        return Err(Error::ShapeMismatch(format!("matrix is not {}x{}", shape.0, shape.1)));
    }
    let mut m = Matrix::zeros(shape.0, shape.1);
    for (r, row) in rows.iter().enumerate() {
        for (c, x) in row.iter().enumerate() {
            m[(r, c)] = S::parse_text(x).ok_or_else(|| Error::Parse(format!("bad scalar `{x}` at [{r}][{c}]")))?;
        }
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleFile {
    pub quiver: QuiverFile,
    pub dims: BTreeMap<String, usize>,
    #[serde(default)]
    pub maps: BTreeMap<String, Vec<Vec<String>>>,
}

impl ModuleFile {
    pub fn from_rep<S: Field>(m: &QuiverRep<S>) -> Self {
        let q = m.quiver();
        ModuleFile {
            quiver: QuiverFile::from_quiver(q),
            dims: (0..q.num_vertices()).map(|v| (q.vertex_name(v), m.dims()[v])).collect(),
            maps: q.arrows.iter().map(|a| (a.id.to_string(), matrix_to_strings(m.map(a.id)))).collect(),
        }
    }

    /// Missing maps are zero.
    pub fn to_rep<S: Field>(&self) -> Result<QuiverRep<S>> {
        let q = Arc::new(self.quiver.to_quiver()?);
        let mut dims = vec![0; q.num_vertices()];
        for (name, &d) in &self.dims {
            dims[q.parse_vertex(name)?] = d;
        }
        let mut rep = QuiverRep::zero(q.clone(), dims.clone());
        for (id, rows) in &self.maps {
            let a: usize = id.parse().map_err(|_| Error::Parse(format!("bad arrow id `{id}`")))?;
            let ar = q.arrows.get(a).ok_or_else(|| Error::Parse(format!("no arrow {a}")))?;
            let shape = (dims[ar.tail], dims[ar.head]);
            let m = if rows.is_empty() && shape.0 == 0 {
                Matrix::zeros(0, shape.1)
            } else {
                matrix_from_strings(rows, shape).map_err(|e| Error::ShapeMismatch(format!("arrow {a}: {e}")))?
            };
            rep.set_map(a, m)?;
        }
        Ok(rep)
    }
}

pub fn module_to_json<S: Field>(m: &QuiverRep<S>) -> String {
    serde_json::to_string_pretty(&ModuleFile::from_rep(m)).expect("serializable")
}

pub fn module_from_json<S: Field>(s: &str) -> Result<QuiverRep<S>> {
    serde_json::from_str::<ModuleFile>(s).map_err(parse_err)?.to_rep()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdhmFile {
    pub group: String,
    #[serde(rename = "B1")]
    pub b1: Vec<Vec<String>>,
    #[serde(rename = "B2")]
    pub b2: Vec<Vec<String>>,
    pub i: Vec<Vec<String>>,
    pub j: Vec<Vec<String>>,
    pub weights: Vec<usize>,
    pub framing_weights: Vec<usize>,
}

pub fn adhm_from_json(s: &str) -> Result<(GammaDescriptor, AdhmData<Rational>)> {
    let f: AdhmFile = serde_json::from_str(s).map_err(parse_err)?;
    let (v, w) = (f.weights.len(), f.framing_weights.len());
    Ok((
        f.group.parse()?,
        AdhmData {
            b1: matrix_from_strings(&f.b1, (v, v))?,
            b2: matrix_from_strings(&f.b2, (v, v))?,
            i: matrix_from_strings(&f.i, (v, w))?,
            j: matrix_from_strings(&f.j, (w, v))?,
            weights: f.weights,
            framing_weights: f.framing_weights,
        },
    ))
}

pub fn adhm_to_json<S: Field>(group: &GammaDescriptor, d: &AdhmData<S>) -> String {
    let f = AdhmFile {
        group: group.to_string(),
        b1: matrix_to_strings(&d.b1),
        b2: matrix_to_strings(&d.b2),
        i: matrix_to_strings(&d.i),
        j: matrix_to_strings(&d.j),
        weights: d.weights.clone(),
        framing_weights: d.framing_weights.clone(),
    };
    serde_json::to_string_pretty(&f).expect("serializable")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionFile {
    pub arrow: usize,
    pub degree: usize,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedModuleFile {
    pub quiver: QuiverFile,
    #[serde(default)]
    pub corner: Option<Vec<usize>>,
    pub start: usize,
    /// One entry per degree, one dimension per vertex.
    pub degrees: Vec<Vec<usize>>,
    pub actions: Vec<ActionFile>,
}

pub fn graded_module_to_json<S: Field>(m: &TruncatedGradedModule<S>) -> String {
    let f = GradedModuleFile {
        quiver: QuiverFile::from_quiver(&m.quiver),
        corner: m.corner.clone(),
        start: m.start,
        degrees: m.dims.clone(),
        actions: m
            .actions
            .iter()
            .map(|(&(arrow, degree), mat)| ActionFile { arrow, degree, matrix: matrix_to_strings(mat) })
            .collect(),
    };
    serde_json::to_string_pretty(&f).expect("serializable")
}

pub fn graded_module_from_json<S: Field>(s: &str) -> Result<TruncatedGradedModule<S>> {
    let f: GradedModuleFile = serde_json::from_str(s).map_err(parse_err)?;
    let quiver = Arc::new(f.quiver.to_quiver()?);
    if f.degrees.is_empty() || f.degrees.iter().any(|d| d.len() != quiver.num_vertices()) {
        return Err(Error::ShapeMismatch("every degree needs one dimension per vertex".into()));
    }
    let mut m = TruncatedGradedModule { quiver, corner: f.corner, start: f.start, dims: f.degrees, actions: BTreeMap::new() };
    for a in &f.actions {
        let ar = m.quiver.arrows.get(a.arrow).ok_or_else(|| Error::Parse(format!("no arrow {}", a.arrow)))?;
        let shape = (m.dim(a.degree + 1, ar.tail), m.dim(a.degree, ar.head));
        let mat = if a.matrix.is_empty() && shape.0 == 0 { Matrix::zeros(0, shape.1) } else { matrix_from_strings(&a.matrix, shape)? };
        m.actions.insert((a.arrow, a.degree), mat);
    }
    m.check_shapes()?;
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceFile {
    pub paths: Vec<Vec<usize>>,
    pub relation_rank: usize,
    pub dim: usize,
}

pub fn slice_to_json<S: Field>(s: &GradedSlice<S>) -> String {
    let f = SliceFile { paths: s.path_basis.clone(), relation_rank: s.relation_span.rank(), dim: s.dim };
    serde_json::to_string_pretty(&f).expect("serializable")
}
