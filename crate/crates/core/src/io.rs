//! JSON document formats. Rationals are `"p/q"` strings, words and basis
//! words are 1-based, matrices are lists of rows. Algebras inside towers
//! and ladders are referenced by name from an `algebras` table.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{ConditionalExpectation, Elem, FiniteAlgebra, Ladder, Tower};
use crate::freemodel::{Component, CumulantSpec};
use crate::linalg::Matrix;
use crate::multifunc::{basis_words, CumulantFamily, MultiCoeff};
use crate::rational::{fmt_q, parse_vec, serialize_vec, Q};
use crate::series::{BSeries, SeriesKind};
use crate::towerops::LayeredSpec;

type Rows = Vec<Vec<String>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub ambient_size: usize,
    /// Each basis matrix flattened row-major.
    pub basis: Rows,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapDoc {
    pub source: String,
    pub target: String,
    pub matrix: Rows,
    pub inclusion: Rows,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TowerBody {
    pub levels: Vec<String>,
    pub maps: Vec<MapDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TowerDoc {
    pub algebras: BTreeMap<String, AlgebraDoc>,
    pub levels: Vec<String>,
    pub maps: Vec<MapDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderDoc {
    pub algebras: BTreeMap<String, AlgebraDoc>,
    pub upper: TowerBody,
    pub lower: TowerBody,
    pub rungs: Vec<MapDoc>,
    /// φ(p_j) for the chain the ladder was built from.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alphas: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryDoc {
    pub word: Vec<usize>,
    /// Basis word of the n−1 interior arguments.
    pub at: Vec<usize>,
    pub value: Vec<String>,
}

/// Sparse family: absent entries are zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyDoc {
    pub s: usize,
    pub degree: usize,
    pub base: AlgebraDoc,
    pub entries: Vec<EntryDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesDoc {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b0: Option<Vec<String>>,
    pub family: FamilyDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentDoc {
    Table { arity: usize, entries: Vec<EntryDoc> },
    Chain { values: Rows },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecDoc {
    pub labels: Vec<String>,
    pub degree: usize,
    pub base: AlgebraDoc,
    pub components: Vec<ComponentDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayeredDoc {
    pub spec: SpecDoc,
    pub levels: Vec<usize>,
    pub depth: usize,
    pub x: Vec<String>,
    pub y: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompressionDoc {
    pub spec: SpecDoc,
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub p: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainSpecDoc {
    pub spec: SpecDoc,
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub chain: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderCompressionDoc {
    pub ladder: LadderDoc,
    pub spec: SpecDoc,
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub chain: Vec<String>,
}

/// A scalar-valued φ on A with a chain of projections in A.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainTowerDoc {
    pub algebras: BTreeMap<String, AlgebraDoc>,
    pub phi: MapDoc,
    pub phi0: MapDoc,
    pub chain: Rows,
}

/// φ₀ on B by its values on the basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateDoc {
    pub base: AlgebraDoc,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftDoc {
    pub spec: SpecDoc,
    pub phi0: StateDoc,
    pub x: Vec<String>,
    pub y: Vec<String>,
}

/// Elements of A_level (coordinates) inside a tower.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaDoc {
    pub tower: TowerDoc,
    pub level: usize,
    pub elements: Rows,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleDoc {
    pub spec: SpecDoc,
    pub word: Vec<usize>,
    pub b: Rows,
    pub actual: Vec<String>,
    pub unrestricted: Vec<String>,
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn elem(v: &[String]) -> Result<Elem> {
    Ok(Elem(parse_vec(v)?))
}

fn rows_of(m: &Matrix) -> Rows {
    (0..m.rows).map(|i| (0..m.cols).map(|j| fmt_q(m.get(i, j))).collect()).collect()
}

fn matrix_of(rows: &Rows, shape: (usize, usize), what: &str) -> Result<Matrix> {
    if rows.len() != shape.0 || rows.iter().any(|r| r.len() != shape.1) {
        return Err(Error::Dimension(format!("{what} must be {}x{}", shape.0, shape.1)));
    }
    if shape.0 == 0 {
        return Ok(Matrix::zeros(0, shape.1));
    }
    Matrix::from_rows(rows.iter().map(|r| parse_vec(r)).collect::<Result<_>>()?)
}

impl AlgebraDoc {
    pub fn from_algebra(a: &FiniteAlgebra) -> Self {
        AlgebraDoc {
            label: a.label.clone(),
            ambient_size: a.m,
            basis: a.basis.iter().map(|b| serialize_vec(&b.data)).collect(),
            unit: Some(serialize_vec(&a.unit.0)),
        }
    }

    pub fn build(&self) -> Result<FiniteAlgebra> {
        let m = self.ambient_size;
        let basis = self
            .basis
            .iter()
            .map(|flat| {
                if flat.len() != m * m {
                    return Err(Error::Dimension(format!("basis matrix needs {} entries", m * m)));
                }
                Matrix::from_rows(parse_vec(flat)?.chunks(m).map(<[Q]>::to_vec).collect())
            })
            .collect::<Result<_>>()?;
        let unit = self.unit.as_ref().map(|u| elem(u)).transpose()?;
        FiniteAlgebra::new(m, basis, unit, self.label.clone())
    }
}

/// Names algebras as they are registered, reusing a name for equal algebras.
#[derive(Default)]
struct Namer {
    docs: BTreeMap<String, AlgebraDoc>,
    seen: Vec<(Arc<FiniteAlgebra>, String)>,
}

impl Namer {
    fn name(&mut self, a: &Arc<FiniteAlgebra>, hint: &str) -> String {
        if let Some((_, n)) = self.seen.iter().find(|(b, _)| b.as_ref() == a.as_ref()) {
            return n.clone();
        }
        self.docs.insert(hint.to_string(), AlgebraDoc::from_algebra(a));
        self.seen.push((a.clone(), hint.to_string()));
        hint.to_string()
    }

    fn map(&mut self, e: &ConditionalExpectation, src: &str, tgt: &str) -> MapDoc {
        MapDoc {
            source: self.name(&e.source, src),
            target: self.name(&e.target, tgt),
            matrix: rows_of(&e.matrix),
            inclusion: rows_of(&e.inclusion),
        }
    }

    fn tower(&mut self, t: &Tower, prefix: &str) -> TowerBody {
        let levels = t.levels.iter().enumerate().map(|(j, a)| self.name(a, &format!("{prefix}{j}"))).collect();
        let maps = t
            .maps
            .iter()
            .enumerate()
            .map(|(j, m)| {
                let tgt = if j == 0 { format!("{prefix}-scalars") } else { format!("{prefix}{}", j - 1) };
                self.map(m, &format!("{prefix}{j}"), &tgt)
            })
            .collect();
        TowerBody { levels, maps }
    }
}

/// Built algebras by name.
struct Algebras(BTreeMap<String, Arc<FiniteAlgebra>>);

impl Algebras {
    fn build(docs: &BTreeMap<String, AlgebraDoc>) -> Result<Self> {
        let mut out = BTreeMap::new();
        for (name, d) in docs {
            let a = d.build().map_err(|e| Error::Invariant(format!("algebra {name}: {e}")))?;
            out.insert(name.clone(), Arc::new(a));
        }
        Ok(Algebras(out))
    }

    fn get(&self, name: &str) -> Result<Arc<FiniteAlgebra>> {
        self.0.get(name).cloned().ok_or_else(|| Error::Parse(format!("unknown algebra {name:?}")))
    }

    fn map(&self, d: &MapDoc) -> Result<ConditionalExpectation> {
        let (s, t) = (self.get(&d.source)?, self.get(&d.target)?);
        let matrix = matrix_of(&d.matrix, (t.dim(), s.dim()), "expectation matrix")?;
        let inclusion = matrix_of(&d.inclusion, (s.dim(), t.dim()), "inclusion matrix")?;
        ConditionalExpectation::new(s, t, matrix, inclusion)
    }

    fn tower(&self, body: &TowerBody) -> Result<Tower> {
        let levels = body.levels.iter().map(|n| self.get(n)).collect::<Result<_>>()?;
        let maps = body.maps.iter().map(|m| self.map(m)).collect::<Result<_>>()?;
        Tower::new(levels, maps)
    }
}

impl TowerDoc {
    pub fn from_tower(t: &Tower) -> Self {
        let mut namer = Namer::default();
        let body = namer.tower(t, "A");
        TowerDoc { algebras: namer.docs, levels: body.levels, maps: body.maps }
    }

    pub fn build(&self) -> Result<Tower> {
        let algs = Algebras::build(&self.algebras)?;
        algs.tower(&TowerBody { levels: self.levels.clone(), maps: self.maps.clone() })
    }
}

impl LadderDoc {
    pub fn from_ladder(l: &Ladder, alphas: &[Q]) -> Self {
        let mut namer = Namer::default();
        let upper = namer.tower(&l.upper, "A");
        let lower = namer.tower(&l.lower, "D");
        let rungs = l.rungs.iter().enumerate().map(|(j, r)| namer.map(r, &format!("A{j}"), &format!("D{j}"))).collect();
        LadderDoc { algebras: namer.docs, upper, lower, rungs, alphas: serialize_vec(alphas) }
    }

    pub fn build(&self) -> Result<(Ladder, Vec<Q>)> {
        let algs = Algebras::build(&self.algebras)?;
        let rungs = self.rungs.iter().map(|r| algs.map(r)).collect::<Result<_>>()?;
        let ladder = Ladder::new(algs.tower(&self.upper)?, algs.tower(&self.lower)?, rungs)?;
        Ok((ladder, parse_vec(&self.alphas)?))
    }
}

impl ChainTowerDoc {
    pub fn new(phi: &ConditionalExpectation, chain: &[Elem], phi0: &ConditionalExpectation) -> Self {
        let mut namer = Namer::default();
        let phi_doc = namer.map(phi, "A", "B");
        let phi0_doc = namer.map(phi0, "B", "scalars");
        ChainTowerDoc { algebras: namer.docs, phi: phi_doc, phi0: phi0_doc, chain: chain.iter().map(|p| serialize_vec(&p.0)).collect() }
    }

    pub fn build(&self) -> Result<(ConditionalExpectation, Vec<Elem>, ConditionalExpectation)> {
        let algs = Algebras::build(&self.algebras)?;
        let phi = algs.map(&self.phi)?;
        let chain = self
            .chain
            .iter()
            .map(|c| {
                let e = elem(c)?;
                phi.source.check(&e)?;
                Ok(e)
            })
            .collect::<Result<_>>()?;
        Ok((phi, chain, algs.map(&self.phi0)?))
    }
}

fn entries_of(f: &CumulantFamily) -> Vec<EntryDoc> {
    let d = f.base.dim();
    let mut out = Vec::new();
    for (w, c) in &f.coeffs {
        for (bw, v) in basis_words(d, w.len() - 1).iter().zip(&c.table) {
            if !v.is_zero() {
                out.push(EntryDoc {
                    word: w.iter().map(|i| i + 1).collect(),
                    at: bw.iter().map(|i| i + 1).collect(),
                    value: serialize_vec(&v.0),
                });
            }
        }
    }
    out
}

fn family_from_entries(s: usize, degree: usize, base: Arc<FiniteAlgebra>, entries: &[EntryDoc]) -> Result<CumulantFamily> {
    let d = base.dim();
    let mut f = CumulantFamily::zero(s, degree, base);
    for e in entries {
        let n = e.word.len();
        if n == 0 || n > degree || e.word.iter().any(|&v| v == 0 || v > s) {
            return Err(Error::Range(format!("word {:?} outside {s} letters up to degree {degree}", e.word)));
        }
        if e.at.len() + 1 != n || e.at.iter().any(|&b| b == 0 || b > d) {
            return Err(Error::Dimension(format!("basis word {:?} for word {:?}", e.at, e.word)));
        }
        let value = elem(&e.value)?;
        if value.dim() != d {
            return Err(Error::Dimension(format!("value for word {:?} needs {d} coordinates", e.word)));
        }
        let word: Vec<usize> = e.word.iter().map(|v| v - 1).collect();
        let idx = e.at.iter().fold(0, |acc, &b| acc * d + b - 1);
        let c: &mut MultiCoeff = f.coeffs.get_mut(&word).expect("all words present");
        c.table[idx] = value;
    }
    Ok(f)
}

impl FamilyDoc {
    pub fn from_family(f: &CumulantFamily) -> Self {
        FamilyDoc { s: f.s, degree: f.degree, base: AlgebraDoc::from_algebra(&f.base), entries: entries_of(f) }
    }

    pub fn build(&self) -> Result<CumulantFamily> {
        let base = Arc::new(self.base.build()?);
        family_from_entries(self.s, self.degree, base, &self.entries)
    }
}

impl SeriesDoc {
    pub fn from_series(s: &BSeries) -> Self {
        let b0 = match &s.kind {
            SeriesKind::Symmetric(b) => Some(serialize_vec(&b.0)),
            _ => None,
        };
        SeriesDoc { kind: s.kind.name().into(), b0, family: FamilyDoc::from_family(&s.family) }
    }

    pub fn build(&self) -> Result<BSeries> {
        let family = self.family.build()?;
        let kind = match (self.kind.as_str(), &self.b0) {
            ("moment", _) => SeriesKind::Moment,
            ("rtransform", _) => SeriesKind::RTransform,
            ("trivial", _) => SeriesKind::Trivial,
            ("symmetric", Some(b)) => SeriesKind::Symmetric(elem(b)?),
            ("symmetric", None) => return Err(Error::Parse("symmetric series needs b0".into())),
            (k, _) => return Err(Error::Parse(format!("unknown series kind {k:?}"))),
        };
        BSeries::new(kind, family)
    }
}

impl SpecDoc {
    pub fn from_spec(spec: &CumulantSpec) -> Self {
        let components = spec
            .components
            .iter()
            .map(|c| match c {
                Component::Table(f) => ComponentDoc::Table { arity: f.s, entries: entries_of(f) },
                Component::Chain(b0s) => ComponentDoc::Chain { values: b0s.iter().map(|b| serialize_vec(&b.0)).collect() },
            })
            .collect();
        SpecDoc { labels: spec.labels.clone(), degree: spec.degree, base: AlgebraDoc::from_algebra(&spec.base), components }
    }

    pub fn build(&self) -> Result<CumulantSpec> {
        let base = Arc::new(self.base.build()?);
        let components = self
            .components
            .iter()
            .map(|c| match c {
                ComponentDoc::Table { arity, entries } => {
                    Ok(Component::Table(family_from_entries(*arity, self.degree, base.clone(), entries)?))
                }
                ComponentDoc::Chain { values } => Ok(Component::Chain(values.iter().map(|v| elem(v)).collect::<Result<_>>()?)),
            })
            .collect::<Result<_>>()?;
        CumulantSpec::new(self.labels.clone(), base, self.degree, components)
    }
}

/// Variable indices for labels.
pub fn indices(spec: &CumulantSpec, labels: &[String]) -> Result<Vec<usize>> {
    labels.iter().map(|l| spec.index_of(l)).collect()
}

impl LayeredDoc {
    pub fn new(ls: &LayeredSpec, x: &[&str], y: &[&str]) -> Self {
        LayeredDoc {
            spec: SpecDoc::from_spec(&ls.spec),
            levels: ls.levels.clone(),
            depth: ls.depth,
            x: x.iter().map(|s| s.to_string()).collect(),
            y: y.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn build(&self) -> Result<(LayeredSpec, Vec<usize>, Vec<usize>)> {
        let spec = self.spec.build()?;
        let (xs, ys) = (indices(&spec, &self.x)?, indices(&spec, &self.y)?);
        Ok((LayeredSpec::new(spec, self.levels.clone(), self.depth)?, xs, ys))
    }
}

impl StateDoc {
    pub fn from_state(phi0: &ConditionalExpectation) -> Self {
        StateDoc { base: AlgebraDoc::from_algebra(&phi0.source), values: serialize_vec(&phi0.matrix.data) }
    }

    pub fn build(&self) -> Result<ConditionalExpectation> {
        let b = Arc::new(self.base.build()?);
        let row = matrix_of(&vec![self.values.clone()], (1, b.dim()), "state values")?;
        let inc = Matrix::from_columns(b.dim(), std::slice::from_ref(&b.unit.0));
        ConditionalExpectation::new(b, Arc::new(FiniteAlgebra::scalars()), row, inc)
    }
}

impl LemmaDoc {
    pub fn build(&self) -> Result<(Tower, Vec<Elem>)> {
        let tower = self.tower.build()?;
        let a = tower.levels.get(self.level).ok_or_else(|| Error::Range(format!("level {}", self.level)))?.clone();
        let elements = self
            .elements
            .iter()
            .map(|c| {
                let e = elem(c)?;
                a.check(&e)?;
                Ok(e)
            })
            .collect::<Result<_>>()?;
        Ok((tower, elements))
    }
}

/// Coordinates as rows, for element lists.
pub fn elems_doc(xs: &[Elem]) -> Rows {
    xs.iter().map(|x| serialize_vec(&x.0)).collect()
}

pub fn parse_elems(rows: &Rows) -> Result<Vec<Elem>> {
    rows.iter().map(|r| elem(r)).collect()
}
