//! Finite-dimensional algebras realized inside M_m(ℚ), conditional
//! expectations between them, towers, corners and commuting ladders.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{independent_subset, Matrix};
use crate::rational::Q;

/// Coordinates of an element with respect to some algebra's basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub Vec<Q>);

impl Elem {
    pub fn zero(dim: usize) -> Self {
        Elem(vec![Q::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, o: &Elem) -> Elem {
        Elem(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Elem) -> Elem {
        Elem(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: &Q) -> Elem {
        Elem(self.0.iter().map(|a| a * c).collect())
    }

    pub fn add_assign_scaled(&mut self, o: &Elem, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            if !b.is_zero() {
                *a += b * c;
            }
        }
    }
}

/// A unital subalgebra of M_m(ℚ) with a fixed basis.
///
/// The unit need not be the identity matrix: corners pAp have unit p.
#[derive(Debug, Clone)]
pub struct FiniteAlgebra {
    pub label: Option<String>,
    pub m: usize,
    pub basis: Vec<Matrix>,
    pub unit: Elem,
    pivots: Vec<usize>,
    pivot_inv: Matrix,
    structure: Vec<Vec<Elem>>,
}

impl PartialEq for FiniteAlgebra {
    fn eq(&self, o: &Self) -> bool {
        self.m == o.m && self.basis == o.basis && self.unit == o.unit
    }
}

impl FiniteAlgebra {
    /// Checks independence, closure under products and the unit law.
    pub fn new(m: usize, basis: Vec<Matrix>, unit: Option<Elem>, label: Option<String>) -> Result<Self> {
        if basis.is_empty() {
            return Err(Error::Structure("empty basis".into()));
        }
        if basis.iter().any(|b| b.rows != m || b.cols != m) {
            return Err(Error::Dimension(format!("basis matrices must be {m}x{m}")));
        }
        let dim = basis.len();
        let flat: Vec<Vec<Q>> = basis.iter().map(|b| b.data.clone()).collect();
        if independent_subset(&flat).len() != dim {
            return Err(Error::Structure("basis is linearly dependent".into()));
        }
        let rows = Matrix::from_rows(flat.clone())?;
        let (_, pivots) = rows.rref();
        let mut s = Matrix::zeros(dim, dim);
        for (k, &p) in pivots.iter().enumerate() {
            for (i, f) in flat.iter().enumerate() {
                s.set(k, i, f[p].clone());
            }
        }
        let pivot_inv = s.inverse()?;
        let mut alg = FiniteAlgebra {
            label,
            m,
            basis,
            unit: Elem::zero(dim),
            pivots,
            pivot_inv,
            structure: vec![],
        };
        let mut structure = Vec::with_capacity(dim);
        for i in 0..dim {
            let mut row = Vec::with_capacity(dim);
            for j in 0..dim {
                let prod = alg.basis[i].mul(&alg.basis[j])?;
                let c = alg
                    .coords_of(&prod)
                    .map_err(|_| Error::Structure(format!("span not closed: e{i}*e{j} escapes")))?;
                row.push(c);
            }
            structure.push(row);
        }
        alg.structure = structure;
        let unit = match unit {
            Some(u) => u,
            None => alg.coords_of(&Matrix::identity(m)).map_err(|_| {
                Error::Structure("identity matrix is not in the span; give the unit explicitly".into())
            })?,
        };
        if unit.dim() != dim {
            return Err(Error::Dimension("unit coordinates".into()));
        }
        alg.unit = unit;
        for i in 0..dim {
            let e = alg.basis_elem(i);
            if alg.mul(&alg.unit, &e) != e || alg.mul(&e, &alg.unit) != e {
                return Err(Error::Structure("unit does not act as identity".into()));
            }
        }
        Ok(alg)
    }

    /// ℚ as M_1(ℚ).
    pub fn scalars() -> Self {
        Self::new(1, vec![Matrix::identity(1)], None, Some("scalars".into())).unwrap()
    }

    /// Full matrix algebra M_m(ℚ) with matrix-unit basis in row-major order.
    pub fn full_matrix(m: usize) -> Self {
        let basis = (0..m * m).map(|k| Matrix::unit(m, k / m, k % m)).collect();
        Self::new(m, basis, None, Some(format!("M{m}"))).unwrap()
    }

    /// Diagonal matrices in M_m(ℚ).
    pub fn diagonal(m: usize) -> Self {
        let basis = (0..m).map(|k| Matrix::unit(m, k, k)).collect();
        Self::new(m, basis, None, Some(format!("D{m}"))).unwrap()
    }

    /// Span of the given matrices; closure is verified.
    pub fn span(m: usize, gens: Vec<Matrix>, label: &str) -> Result<Self> {
        Self::new(m, gens, None, Some(label.into()))
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_elem(&self, i: usize) -> Elem {
        let mut e = Elem::zero(self.dim());
        e.0[i] = Q::one();
        e
    }

    pub fn zero(&self) -> Elem {
        Elem::zero(self.dim())
    }

    pub fn one(&self) -> Elem {
        self.unit.clone()
    }

    pub fn scalar(&self, c: &Q) -> Elem {
        self.unit.scale(c)
    }

    pub fn to_matrix(&self, x: &Elem) -> Matrix {
        let mut out = Matrix::zeros(self.m, self.m);
        for (c, b) in x.0.iter().zip(&self.basis) {
            if !c.is_zero() {
                for (o, v) in out.data.iter_mut().zip(&b.data) {
                    if !v.is_zero() {
                        *o += c * v;
                    }
                }
            }
        }
        out
    }

    /// Basis coordinates of an ambient matrix, or a membership error.
    pub fn coords_of(&self, x: &Matrix) -> Result<Elem> {
        if x.rows != self.m || x.cols != self.m {
            return Err(Error::Dimension(format!("expected {}x{} matrix", self.m, self.m)));
        }
        let rhs: Vec<Q> = self.pivots.iter().map(|&p| x.data[p].clone()).collect();
        let c = Elem(self.pivot_inv.mul_vec(&rhs)?);
        if &self.to_matrix(&c) != x {
            return Err(Error::Membership(format!(
                "matrix is not in {}",
                self.label.as_deref().unwrap_or("algebra")
            )));
        }
        Ok(c)
    }

    pub fn contains(&self, x: &Matrix) -> bool {
        self.coords_of(x).is_ok()
    }

    pub fn check(&self, x: &Elem) -> Result<()> {
        if x.dim() != self.dim() {
            return Err(Error::Dimension(format!("element of length {} in algebra of dim {}", x.dim(), self.dim())));
        }
        Ok(())
    }

    pub fn mul(&self, x: &Elem, y: &Elem) -> Elem {
        let d = self.dim();
        let mut out = Elem::zero(d);
        for (i, a) in x.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.0.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out.add_assign_scaled(&self.structure[i][j], &(a * b));
            }
        }
        out
    }

    pub fn mul_all<'a>(&self, xs: impl IntoIterator<Item = &'a Elem>) -> Elem {
        xs.into_iter().fold(self.one(), |acc, x| self.mul(&acc, x))
    }

    /// Two-sided inverse, if any.
    pub fn inverse(&self, x: &Elem) -> Option<Elem> {
        let d = self.dim();
        // left multiplication matrix L_x
        let mut l = Matrix::zeros(d, d);
        for j in 0..d {
            let col = self.mul(x, &self.basis_elem(j));
            for i in 0..d {
                l.set(i, j, col.0[i].clone());
            }
        }
        let y = Elem(l.solve(&self.unit.0).ok()??);
        (self.mul(&y, x) == self.unit).then_some(y)
    }

    pub fn commutes(&self, x: &Elem, y: &Elem) -> bool {
        self.mul(x, y) == self.mul(y, x)
    }

    /// Nonzero and idempotent.
    pub fn is_projection(&self, p: &Elem) -> bool {
        !p.is_zero() && &self.mul(p, p) == p
    }

    /// The corner pAp, with unit p.
    pub fn compress(&self, p: &Elem) -> Result<FiniteAlgebra> {
        self.check(p)?;
        if !self.is_projection(p) {
            return Err(Error::Contract("compression needs a nonzero idempotent".into()));
        }
        let pm = self.to_matrix(p);
        let images: Vec<Matrix> =
            self.basis.iter().map(|b| pm.mul(b).and_then(|x| x.mul(&pm))).collect::<Result<_>>()?;
        let flat: Vec<Vec<Q>> = images.iter().map(|x| x.data.clone()).collect();
        let keep = independent_subset(&flat);
        let basis: Vec<Matrix> = keep.into_iter().map(|i| images[i].clone()).collect();
        let label = self.label.as_ref().map(|l| format!("p{l}p"));
        let cols: Vec<Vec<Q>> = basis.iter().map(|b| b.data.clone()).collect();
        let unit = Matrix::from_columns(self.m * self.m, &cols)
            .solve(&pm.data)?
            .ok_or_else(|| Error::Membership("projection not in its own corner".into()))?;
        let unit = Elem(unit);
        FiniteAlgebra::new(self.m, basis, Some(unit), label)
    }

    /// Coordinates in `self` of every basis matrix of `sub` (literal inclusion).
    pub fn inclusion_of(&self, sub: &FiniteAlgebra) -> Result<Matrix> {
        let cols: Vec<Vec<Q>> =
            sub.basis.iter().map(|b| self.coords_of(b).map(|e| e.0)).collect::<Result<_>>()?;
        Ok(Matrix::from_columns(self.dim(), &cols))
    }
}

/// An element together with its algebra.
#[derive(Debug, Clone)]
pub struct AlgebraElement {
    pub algebra: Arc<FiniteAlgebra>,
    pub coords: Elem,
}

impl AlgebraElement {
    pub fn new(algebra: Arc<FiniteAlgebra>, coords: Elem) -> Result<Self> {
        algebra.check(&coords)?;
        Ok(AlgebraElement { algebra, coords })
    }

    pub fn from_matrix(algebra: Arc<FiniteAlgebra>, m: &Matrix) -> Result<Self> {
        let coords = algebra.coords_of(m)?;
        Ok(AlgebraElement { algebra, coords })
    }

    pub fn matrix(&self) -> Matrix {
        self.algebra.to_matrix(&self.coords)
    }
}

/// Product in the shared algebra; mismatched algebras are rejected.
pub fn mul(x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
    if !Arc::ptr_eq(&x.algebra, &y.algebra) && x.algebra != y.algebra {
        return Err(Error::Dimension("elements live in different algebras".into()));
    }
    Ok(AlgebraElement { algebra: x.algebra.clone(), coords: x.algebra.mul(&x.coords, &y.coords) })
}

pub fn is_projection(p: &AlgebraElement) -> bool {
    p.algebra.is_projection(&p.coords)
}

pub fn compress(algebra: &FiniteAlgebra, p: &Elem) -> Result<FiniteAlgebra> {
    algebra.compress(p)
}

/// A linear map `source → target` that fixes an embedded copy of `target`.
#[derive(Debug, Clone)]
pub struct ConditionalExpectation {
    pub source: Arc<FiniteAlgebra>,
    pub target: Arc<FiniteAlgebra>,
    /// dim(target) x dim(source)
    pub matrix: Matrix,
    /// dim(source) x dim(target): coordinates of the embedded target basis
    pub inclusion: Matrix,
}

impl ConditionalExpectation {
    pub fn new(
        source: Arc<FiniteAlgebra>,
        target: Arc<FiniteAlgebra>,
        matrix: Matrix,
        inclusion: Matrix,
    ) -> Result<Self> {
        if matrix.rows != target.dim() || matrix.cols != source.dim() {
            return Err(Error::Dimension("expectation matrix shape".into()));
        }
        if inclusion.rows != source.dim() || inclusion.cols != target.dim() {
            return Err(Error::Dimension("inclusion matrix shape".into()));
        }
        Ok(ConditionalExpectation { source, target, matrix, inclusion })
    }

    /// Builds the map from a function on source basis elements.
    pub fn from_fn(
        source: Arc<FiniteAlgebra>,
        target: Arc<FiniteAlgebra>,
        inclusion: Matrix,
        f: impl Fn(&Matrix) -> Result<Elem>,
    ) -> Result<Self> {
        let cols: Vec<Vec<Q>> = source.basis.iter().map(|b| f(b).map(|e| e.0)).collect::<Result<_>>()?;
        let matrix = Matrix::from_columns(target.dim(), &cols);
        Self::new(source, target, matrix, inclusion)
    }

    /// Target literally contained in source as matrices.
    pub fn literal_inclusion(source: &FiniteAlgebra, target: &FiniteAlgebra) -> Result<Matrix> {
        source.inclusion_of(target)
    }

    pub fn apply(&self, x: &Elem) -> Result<Elem> {
        self.source.check(x)?;
        Ok(Elem(self.matrix.mul_vec(&x.0)?))
    }

    pub fn include(&self, b: &Elem) -> Result<Elem> {
        self.target.check(b)?;
        Ok(Elem(self.inclusion.mul_vec(&b.0)?))
    }

    /// `self ∘ inner`, where `inner: S → source` and `self: source → target`.
    pub fn after(&self, inner: &ConditionalExpectation) -> Result<ConditionalExpectation> {
        if inner.target.as_ref() != self.source.as_ref() {
            return Err(Error::Dimension("composition: algebras do not chain".into()));
        }
        Ok(ConditionalExpectation {
            source: inner.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&inner.matrix)?,
            inclusion: inner.inclusion.mul(&self.inclusion)?,
        })
    }

    pub fn scaled(&self, c: &Q) -> ConditionalExpectation {
        ConditionalExpectation { matrix: self.matrix.scale(c), ..self.clone() }
    }

    pub fn same_map(&self, o: &ConditionalExpectation) -> bool {
        self.matrix == o.matrix
    }

    /// Whether the target's unit embeds as the source's unit. Corner towers
    /// p₁Ap₁ ⊂ p₂Ap₂ are not unital in this sense.
    pub fn unital_inclusion(&self) -> bool {
        self.inclusion.mul_vec(&self.target.one().0).ok() == Some(self.source.one().0)
    }

    /// Failed invariants: φ(1) = 1, the inclusion is multiplicative,
    /// φ(b) = b and φ(b x b′) = b φ(x) b′ over full basis sweeps.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let s = &self.source;
        let t = &self.target;
        let inc: Vec<Elem> = (0..t.dim()).map(|j| Elem(self.inclusion.column(j))).collect();
        let embed = |b: &Elem| -> Elem {
            let mut acc = s.zero();
            for (c, e) in b.0.iter().zip(&inc) {
                acc.add_assign_scaled(e, c);
            }
            acc
        };
        for i in 0..t.dim() {
            for j in 0..t.dim() {
                let (bi, bj) = (t.basis_elem(i), t.basis_elem(j));
                if embed(&t.mul(&bi, &bj)) != s.mul(&inc[i], &inc[j]) {
                    out.push(format!("inclusion not multiplicative at ({i},{j})"));
                }
            }
        }
        let ap = |x: &Elem| Elem(self.matrix.mul_vec(&x.0).unwrap());
        if ap(&s.one()) != t.one() {
            out.push("φ(1) ≠ 1".into());
        }
        for i in 0..t.dim() {
            if ap(&inc[i]) != t.basis_elem(i) {
                out.push(format!("φ(b) ≠ b for target basis {i}"));
            }
        }
        'outer: for a in 0..t.dim() {
            for c in 0..t.dim() {
                for x in 0..s.dim() {
                    let xe = s.basis_elem(x);
                    let lhs = ap(&s.mul(&s.mul(&inc[a], &xe), &inc[c]));
                    let rhs = t.mul(&t.mul(&t.basis_elem(a), &ap(&xe)), &t.basis_elem(c));
                    if lhs != rhs {
                        out.push(format!("bimodule law fails at b={a}, x={x}, b'={c}"));
                        break 'outer;
                    }
                }
            }
        }
        out
    }

    pub fn verify(&self) -> Result<()> {
        match self.violations().first() {
            None => Ok(()),
            Some(v) => Err(Error::Invariant(v.clone())),
        }
    }

    pub fn identity(a: Arc<FiniteAlgebra>) -> ConditionalExpectation {
        let d = a.dim();
        ConditionalExpectation { source: a.clone(), target: a, matrix: Matrix::identity(d), inclusion: Matrix::identity(d) }
    }
}

/// ℚ ⊂ B = A₀ ⊂ A₁ ⊂ … ⊂ A_T with φ₀: B → ℚ and φ_j: A_j → A_{j−1}.
#[derive(Debug, Clone)]
pub struct Tower {
    pub levels: Vec<Arc<FiniteAlgebra>>,
    pub maps: Vec<ConditionalExpectation>,
}

impl Tower {
    pub fn new(levels: Vec<Arc<FiniteAlgebra>>, maps: Vec<ConditionalExpectation>) -> Result<Self> {
        if levels.is_empty() || maps.len() != levels.len() {
            return Err(Error::Dimension("a tower needs one map per level".into()));
        }
        let t = Tower { levels, maps };
        for (j, m) in t.maps.iter().enumerate() {
            if m.source.as_ref() != t.levels[j].as_ref() {
                return Err(Error::Dimension(format!("φ_{j} does not start at A_{j}")));
            }
            if j == 0 {
                if m.target.dim() != 1 {
                    return Err(Error::Dimension("φ₀ must be scalar-valued".into()));
                }
            } else if m.target.as_ref() != t.levels[j - 1].as_ref() {
                return Err(Error::Dimension(format!("φ_{j} does not land in A_{}", j - 1)));
            }
        }
        Ok(t)
    }

    /// Depth T: the index of the top level.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn base(&self) -> &Arc<FiniteAlgebra> {
        &self.levels[0]
    }

    /// Per-map invariant failures, tagged by level.
    pub fn violations(&self) -> Vec<String> {
        self.maps
            .iter()
            .enumerate()
            .flat_map(|(j, m)| m.violations().into_iter().map(move |v| format!("φ_{j}: {v}")))
            .collect()
    }

    /// E_{k,j} = φ_k ∘ … ∘ φ_j : A_j → A_{k−1}.
    pub fn compose_expectations(&self, k: usize, j: usize) -> Result<ConditionalExpectation> {
        if k == 0 || k > j || j > self.depth() {
            return Err(Error::Range(format!("need 1 ≤ k ≤ j ≤ {}, got k={k}, j={j}", self.depth())));
        }
        let mut e = self.maps[j].clone();
        for i in (k..j).rev() {
            e = self.maps[i].after(&e)?;
        }
        Ok(e)
    }

    /// E_N = φ₀ ∘ … ∘ φ_N : A_N → ℚ.
    pub fn scalar_functional(&self, n: usize) -> Result<ConditionalExpectation> {
        if n > self.depth() {
            return Err(Error::Range(format!("N={n} exceeds depth {}", self.depth())));
        }
        let mut e = self.maps[n].clone();
        for i in (0..n).rev() {
            e = self.maps[i].after(&e)?;
        }
        Ok(e)
    }

    /// Inclusion A_i → A_j (i ≤ j) as a coordinate matrix.
    pub fn inclusion(&self, i: usize, j: usize) -> Result<Matrix> {
        if i > j || j > self.depth() {
            return Err(Error::Range(format!("inclusion A_{i} → A_{j}")));
        }
        let mut m = Matrix::identity(self.levels[i].dim());
        for l in i + 1..=j {
            m = self.maps[l].inclusion.mul(&m)?;
        }
        Ok(m)
    }
}

/// Checks `i_k ∘ φ_{k+1} = φ′_{k+1} ∘ i_{k+1}` as linear maps.
pub fn verify_commuting_square(
    upper_phi: &ConditionalExpectation,
    lower_phi: &ConditionalExpectation,
    i_k: &ConditionalExpectation,
    i_k1: &ConditionalExpectation,
) -> Result<bool> {
    let lhs = i_k.matrix.mul(&upper_phi.matrix)?;
    let rhs = lower_phi.matrix.mul(&i_k1.matrix)?;
    Ok(lhs == rhs)
}

/// Two towers joined by rung expectations `i_j : A_j → A′_j`.
#[derive(Debug, Clone)]
pub struct Ladder {
    pub upper: Tower,
    pub lower: Tower,
    pub rungs: Vec<ConditionalExpectation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareCheck {
    /// `None` stands for the scalar level below B.
    pub k: Option<usize>,
    pub j: usize,
    pub pass: bool,
}

impl Ladder {
    pub fn new(upper: Tower, lower: Tower, rungs: Vec<ConditionalExpectation>) -> Result<Self> {
        if upper.levels.len() != lower.levels.len() || rungs.len() != upper.levels.len() {
            return Err(Error::Dimension("ladder rung count must match level count".into()));
        }
        for (j, r) in rungs.iter().enumerate() {
            if r.source.as_ref() != upper.levels[j].as_ref() || r.target.as_ref() != lower.levels[j].as_ref() {
                return Err(Error::Dimension(format!("rung {j} does not join A_{j} to A'_{j}")));
            }
        }
        Ok(Ladder { upper, lower, rungs })
    }

    pub fn violations(&self) -> Vec<String> {
        let mut v: Vec<String> = self.upper.violations().into_iter().map(|s| format!("upper {s}")).collect();
        v.extend(self.lower.violations().into_iter().map(|s| format!("lower {s}")));
        for (j, r) in self.rungs.iter().enumerate() {
            v.extend(r.violations().into_iter().map(|s| format!("rung {j}: {s}")));
        }
        v
    }

    /// Commuting squares for the index subsequence `seq` (strictly increasing):
    /// the scalar square E′_{seq[0]} i = E_{seq[0]} and, for consecutive
    /// entries k<j, i_k E_{k+1,j} = E′_{k+1,j} i_j.
    pub fn verify_subladder(&self, seq: &[usize]) -> Result<Vec<SquareCheck>> {
        if seq.windows(2).any(|w| w[0] >= w[1]) || seq.last().is_some_and(|&j| j > self.upper.depth()) {
            return Err(Error::Range("subladder indices must increase within depth".into()));
        }
        let mut out = Vec::new();
        if let Some(&j0) = seq.first() {
            let e = self.upper.scalar_functional(j0)?;
            let e2 = self.lower.scalar_functional(j0)?;
            let pass = e.matrix == e2.matrix.mul(&self.rungs[j0].matrix)?;
            out.push(SquareCheck { k: None, j: j0, pass });
        }
        for w in seq.windows(2) {
            out.push(self.square(w[0], w[1])?);
        }
        Ok(out)
    }

    fn square(&self, k: usize, j: usize) -> Result<SquareCheck> {
        let e = self.upper.compose_expectations(k + 1, j)?;
        let e2 = self.lower.compose_expectations(k + 1, j)?;
        let pass = verify_commuting_square(&e, &e2, &self.rungs[k], &self.rungs[j])?;
        Ok(SquareCheck { k: Some(k), j, pass })
    }

    /// All pairs k<j plus the scalar square at every level.
    pub fn verify_commuting_ladder(&self) -> Result<Vec<SquareCheck>> {
        let t = self.upper.depth();
        let mut out = Vec::new();
        for j in 0..=t {
            out.extend(self.verify_subladder(&[j])?);
        }
        for k in 0..t {
            for j in k + 1..=t {
                out.push(self.square(k, j)?);
            }
        }
        Ok(out)
    }
}

/// φ_p = b₀⁻¹ φ|_{pAp} with b₀ = φ(p), landing in B, where B embeds in pAp by b ↦ bp.
pub fn compressed_expectation(phi: &ConditionalExpectation, p: &Elem) -> Result<ConditionalExpectation> {
    let a = &phi.source;
    let b = &phi.target;
    a.check(p)?;
    if !a.is_projection(p) {
        return Err(Error::Contract("p is not a projection".into()));
    }
    let b0 = phi.apply(p)?;
    let b0_inv = b.inverse(&b0).ok_or_else(|| Error::Contract("φ(p) is not invertible in B".into()))?;
    for i in 0..b.dim() {
        if !b.commutes(&b0, &b.basis_elem(i)) {
            return Err(Error::Contract("φ(p) is not central in B".into()));
        }
        let bi = phi.include(&b.basis_elem(i))?;
        if !a.commutes(p, &bi) {
            return Err(Error::Contract("p does not commute with B".into()));
        }
    }
    let corner = Arc::new(a.compress(p)?);
    let pm = a.to_matrix(p);
    let mut cols = Vec::new();
    for i in 0..b.dim() {
        let bm = a.to_matrix(&phi.include(&b.basis_elem(i))?);
        cols.push(corner.coords_of(&bm.mul(&pm)?)?.0);
    }
    let inclusion = Matrix::from_columns(corner.dim(), &cols);
    let phi_c = phi.clone();
    let a_c = a.clone();
    let b_c = b.clone();
    ConditionalExpectation::from_fn(corner, b.clone(), inclusion, move |y| {
        let v = phi_c.apply(&a_c.coords_of(y)?)?;
        Ok(b_c.mul(&b0_inv, &v))
    })
}

/// Tower ℚ ⊂ B ⊂ p₁Ap₁ ⊂ p₂Ap₂ ⊂ … from a scalar-valued chain of projections.
///
/// Level 1 carries the normalized compressed expectation φ_{p₁}; higher
/// levels carry x ↦ p_j x p_j. Returns the tower and the scalars α_j.
pub fn chain_tower(
    phi: &ConditionalExpectation,
    chain: &[Elem],
    phi0: &ConditionalExpectation,
) -> Result<(Tower, Vec<Q>)> {
    let a = &phi.source;
    let b = &phi.target;
    if phi0.source.as_ref() != b.as_ref() || phi0.target.dim() != 1 {
        return Err(Error::Dimension("φ₀ must map B to scalars".into()));
    }
    let mut alphas = Vec::new();
    for (j, p) in chain.iter().enumerate() {
        if !a.is_projection(p) {
            return Err(Error::Contract(format!("p_{} is not a projection", j + 1)));
        }
        let v = phi.apply(p)?;
        let c = &v.0[0] / &b.unit.0[0];
        if b.scalar(&c) != v || c.is_zero() {
            return Err(Error::Contract(format!("φ(p_{}) is not a nonzero multiple of 1_B", j + 1)));
        }
        alphas.push(c);
    }
    for (j, w) in chain.windows(2).enumerate() {
        if a.mul(&w[0], &w[1]) != w[0] || a.mul(&w[1], &w[0]) != w[0] {
            return Err(Error::Contract(format!("p_{}Ap_{} is not inside the next corner", j + 1, j + 1)));
        }
    }
    let mut levels = vec![b.clone()];
    let mut maps = vec![phi0.clone()];
    if let Some(p1) = chain.first() {
        let first = compressed_expectation(phi, p1)?;
        levels.push(first.source.clone());
        maps.push(first);
    }
    for w in chain.windows(2) {
        let lo = levels.last().unwrap().clone();
        let hi = Arc::new(a.compress(&w[1])?);
        let inclusion = hi.inclusion_of(&lo)?;
        let pm = a.to_matrix(&w[0]);
        let lo_c = lo.clone();
        let map = ConditionalExpectation::from_fn(hi.clone(), lo, inclusion, move |y| {
            lo_c.coords_of(&pm.mul(y)?.mul(&pm)?)
        })?;
        levels.push(hi);
        maps.push(map);
    }
    Ok((Tower::new(levels, maps)?, alphas))
}

/// The corner lemmas for a chain: px = xp on pAp, p_i p_j = p_j p_i = p_min,
/// and (p_j ⋯ p_N) A (p_j ⋯ p_N) = p_j A p_j.
pub fn chain_lemma_violations(a: &FiniteAlgebra, chain: &[Elem]) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for (j, p) in chain.iter().enumerate() {
        let corner = a.compress(p)?;
        let pm = a.to_matrix(p);
        for (i, x) in corner.basis.iter().enumerate() {
            if pm.mul(x)? != x.mul(&pm)? {
                out.push(format!("p_{} fails px=xp on corner basis {i}", j + 1));
            }
        }
        for (i, q) in chain.iter().enumerate().skip(j) {
            if a.mul(p, q) != *p || a.mul(q, p) != *p {
                out.push(format!("p_{} p_{} ≠ p_{}", j + 1, i + 1, j + 1));
            }
        }
        let prod = a.mul_all(chain[j..].iter());
        if prod != *p {
            out.push(format!("p_{}⋯p_N ≠ p_{}", j + 1, j + 1));
        }
        let c2 = a.compress(&prod)?;
        if a.inclusion_of(&c2).is_err() || corner.inclusion_of(&c2).is_err() || c2.dim() != corner.dim() {
            out.push(format!("(p_{}⋯p_N)A(p_{}⋯p_N) ≠ p_{}Ap_{}", j + 1, j + 1, j + 1, j + 1));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};

    #[test]
    fn matrix_units_multiply() {
        let m2 = FiniteAlgebra::full_matrix(2);
        let e11 = m2.basis_elem(0);
        let e12 = m2.basis_elem(1);
        assert_eq!(m2.mul(&e11, &e12), e12);
        assert_eq!(m2.mul(&m2.one(), &e12), e12);
        assert!(m2.is_projection(&e11));
        assert!(!m2.is_projection(&m2.zero()));
        assert!(m2.is_projection(&m2.one()));
    }

    #[test]
    fn non_closed_span_is_rejected() {
        let e12 = Matrix::unit(2, 0, 1);
        let e21 = Matrix::unit(2, 1, 0);
        assert!(FiniteAlgebra::new(2, vec![Matrix::identity(2), e12.add(&e21).unwrap()], None, None).is_ok());
        assert!(FiniteAlgebra::new(2, vec![Matrix::identity(2), e12], None, None).is_ok());
        assert!(FiniteAlgebra::new(2, vec![Matrix::unit(2, 0, 1), Matrix::unit(2, 1, 0)], None, None).is_err());
    }

    #[test]
    fn corner_has_unit_p() {
        let m3 = FiniteAlgebra::full_matrix(3);
        let p = m3.coords_of(&Matrix::diag(&[q(1), q(1), q(0)])).unwrap();
        let c = m3.compress(&p).unwrap();
        assert_eq!(c.dim(), 4);
        assert_eq!(c.to_matrix(&c.one()), m3.to_matrix(&p));
        assert_eq!(m3.compress(&m3.one()).unwrap(), m3);
    }

    #[test]
    fn inverse_in_diagonal_algebra() {
        let d = FiniteAlgebra::diagonal(2);
        let x = Elem(vec![q(2), frac(1, 3)]);
        assert_eq!(d.inverse(&x).unwrap(), Elem(vec![frac(1, 2), q(3)]));
        assert!(d.inverse(&Elem(vec![q(0), q(1)])).is_none());
    }
}
