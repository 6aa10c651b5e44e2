//! Truncated B-formal series: moment series, R-transforms, their trivial
//! and symmetric slices, sums, unions and boxed convolutions.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::One;

use crate::error::{Error, Result};
use crate::exactalg::{ConditionalExpectation, Elem, FiniteAlgebra};
use crate::multifunc::{
    all_words, basis_words, extract_from_model, moments_to_cumulants, partition_eval, symmetric_slice,
    CoefficientSource, CumulantFamily, MultiCoeff, Word,
};
use crate::nclattice::{alternating_union, lattice, NcPartition};
use crate::rational::Q;

#[derive(Debug, Clone, PartialEq)]
pub enum SeriesKind {
    Moment,
    RTransform,
    /// Every argument set to 1_B.
    Trivial,
    /// Every argument set to b₀.
    Symmetric(Elem),
}

impl SeriesKind {
    pub fn name(&self) -> &'static str {
        match self {
            SeriesKind::Moment => "moment",
            SeriesKind::RTransform => "rtransform",
            SeriesKind::Trivial => "trivial",
            SeriesKind::Symmetric(_) => "symmetric",
        }
    }

    fn is_sliced(&self) -> bool {
        matches!(self, SeriesKind::Trivial | SeriesKind::Symmetric(_))
    }
}

/// A series together with the full multilinear tables it was cut from.
///
/// Sliced kinds keep the tables because nested evaluation inside a boxed
/// convolution reads them at non-unit arguments.
#[derive(Debug, Clone, PartialEq)]
pub struct BSeries {
    pub kind: SeriesKind,
    pub family: CumulantFamily,
}

impl BSeries {
    pub fn new(kind: SeriesKind, family: CumulantFamily) -> Result<Self> {
        family.validate()?;
        if let SeriesKind::Symmetric(b0) = &kind {
            family.base.check(b0)?;
        }
        Ok(BSeries { kind, family })
    }

    pub fn s(&self) -> usize {
        self.family.s
    }

    pub fn degree(&self) -> usize {
        self.family.degree
    }

    pub fn base(&self) -> &Arc<FiniteAlgebra> {
        &self.family.base
    }

    pub fn trivial(&self) -> BSeries {
        BSeries { kind: SeriesKind::Trivial, family: self.family.clone() }
    }

    pub fn symmetric(&self, b0: Elem) -> Result<BSeries> {
        BSeries::new(SeriesKind::Symmetric(b0), self.family.clone())
    }

    /// One B-value per word: the slice for sliced kinds.
    pub fn values(&self) -> Result<BTreeMap<Word, Elem>> {
        match &self.kind {
            SeriesKind::Trivial => symmetric_slice(&self.family, &self.family.base.one()),
            SeriesKind::Symmetric(b0) => symmetric_slice(&self.family, b0),
            k => Err(Error::Contract(format!("{} series has no single value per word", k.name()))),
        }
    }

    /// First disagreement with `other`: whole tables for general kinds,
    /// slices for sliced kinds.
    pub fn first_difference(&self, other: &BSeries) -> Result<Option<(Word, Vec<usize>)>> {
        check_shape(&self.family, &other.family)?;
        if self.kind.is_sliced() || other.kind.is_sliced() {
            let (a, b) = (self.values()?, other.values()?);
            return Ok(a.iter().find(|(w, v)| b.get(*w) != Some(v)).map(|(w, _)| (w.clone(), vec![])));
        }
        Ok(self.family.first_difference(&other.family))
    }
}

fn check_shape(f: &CumulantFamily, g: &CumulantFamily) -> Result<()> {
    if f.degree != g.degree || f.base != g.base {
        return Err(Error::Dimension(format!(
            "series shapes differ: degree {} vs {}, base dim {} vs {}",
            f.degree,
            g.degree,
            f.base.dim(),
            g.base.dim()
        )));
    }
    Ok(())
}

pub fn moment_series(space: &ConditionalExpectation, xs: &[Elem], degree: usize) -> Result<BSeries> {
    BSeries::new(SeriesKind::Moment, extract_from_model(space, xs, degree)?)
}

pub fn r_transform(space: &ConditionalExpectation, xs: &[Elem], degree: usize) -> Result<BSeries> {
    let m = extract_from_model(space, xs, degree)?;
    BSeries::new(SeriesKind::RTransform, moments_to_cumulants(&m)?)
}

pub fn add(f: &BSeries, g: &BSeries) -> Result<BSeries> {
    check_shape(&f.family, &g.family)?;
    if f.s() != g.s() {
        return Err(Error::Dimension(format!("{} vs {} variables", f.s(), g.s())));
    }
    if f.kind != g.kind {
        return Err(Error::Contract(format!("adding {} and {} series", f.kind.name(), g.kind.name())));
    }
    Ok(BSeries { kind: f.kind.clone(), family: f.family.add(&g.family)? })
}

/// Series on the disjoint union of variables with vanishing mixed coefficients.
pub fn concat_union(f: &BSeries, g: &BSeries) -> Result<BSeries> {
    check_shape(&f.family, &g.family)?;
    if f.kind != g.kind {
        return Err(Error::Contract(format!("joining {} and {} series", f.kind.name(), g.kind.name())));
    }
    let (sf, sg) = (f.s(), g.s());
    let mut out = CumulantFamily::zero(sf + sg, f.degree(), f.base().clone());
    for (w, c) in out.coeffs.iter_mut() {
        if w.iter().all(|&i| i < sf) {
            *c = f.family.coeffs[w].clone();
        } else if w.iter().all(|&i| i >= sf) {
            let local: Word = w.iter().map(|i| i - sf).collect();
            *c = g.family.coeffs[&local].clone();
        }
    }
    Ok(BSeries { kind: f.kind.clone(), family: out })
}

/// Scalar boxed convolution: Σ_π f_π · g_{Kr(π)} per word.
pub fn boxed_scalar(f: &BSeries, g: &BSeries) -> Result<BSeries> {
    check_shape(&f.family, &g.family)?;
    if f.base().dim() != 1 {
        return Err(Error::Contract("scalar boxed convolution over a non-scalar base".into()));
    }
    if f.s() != g.s() {
        return Err(Error::Dimension(format!("{} vs {} variables", f.s(), g.s())));
    }
    let scalar = |fam: &CumulantFamily, w: &[usize]| fam.coeffs[w].table[0].0[0].clone();
    let block_product = |fam: &CumulantFamily, pi: &NcPartition, w: &[usize]| {
        let mut acc = Q::one();
        for b in pi.blocks() {
            let sub: Word = b.iter().map(|&v| w[v - 1]).collect();
            acc *= scalar(fam, &sub);
        }
        acc
    };
    let mut out = CumulantFamily::zero(f.s(), f.degree(), f.base().clone());
    for (w, c) in out.coeffs.iter_mut() {
        let lat = lattice(w.len())?;
        let mut acc = Q::from_integer(0.into());
        for (i, pi) in lat.partitions().iter().enumerate() {
            let kr = &lat.partitions()[lat.kreweras_idx(i)];
            acc += block_product(&f.family, pi, w) * block_product(&g.family, kr, w);
        }
        c.table[0] = Elem(vec![acc]);
    }
    Ok(BSeries { kind: SeriesKind::RTransform, family: out })
}

/// x-letters `0..s` read from `f`, y-letters `s..2s` from `g`.
struct PairSource<'a> {
    f: &'a CumulantFamily,
    g: &'a CumulantFamily,
}

impl CoefficientSource for PairSource<'_> {
    fn base(&self) -> &FiniteAlgebra {
        &self.f.base
    }
    fn coeff(&self, letters: &[usize], args: &[Elem]) -> Result<Elem> {
        let s = self.f.s;
        if letters.iter().all(|&i| i < s) {
            self.f.coeff(letters, args)
        } else if letters.iter().all(|&i| i >= s) {
            let local: Word = letters.iter().map(|i| i - s).collect();
            self.g.coeff(&local, args)
        } else {
            Err(Error::Invariant("mixed block in an alternating union".into()))
        }
    }
}

/// Σ_π (f ⊕ g)^(π ∪ Kr(π)) on `x_{w₁} ⊗ b′₁y_{w₁} ⊗ b₂x_{w₂} ⊗ b′₂y_{w₂} ⊗ …`.
///
/// `b` has the n−1 arguments before x₂…xₙ; `b_prime` has the n−1 arguments
/// before y₂…yₙ (the one before y₁ is 1_B). Passing all-unit `b_prime` gives
/// the trivial-right-factor form.
pub fn boxed_coefficient(
    f: &CumulantFamily,
    g: &CumulantFamily,
    word: &[usize],
    b: &[Elem],
    b_prime: &[Elem],
) -> Result<Elem> {
    let n = word.len();
    if b.len() + 1 != n || b_prime.len() + 1 != n {
        return Err(Error::Dimension(format!("word of length {n} needs {} arguments per side", n - 1)));
    }
    let base = &f.base;
    let s = f.s;
    let mut letters = Vec::with_capacity(2 * n);
    let mut args = Vec::with_capacity(2 * n - 1);
    for (i, &w) in word.iter().enumerate() {
        if i > 0 {
            args.push(b[i - 1].clone());
        }
        letters.push(w);
        args.push(if i == 0 { base.one() } else { b_prime[i - 1].clone() });
        letters.push(s + w);
    }
    let src = PairSource { f, g };
    let lat = lattice(n)?;
    let mut acc = base.zero();
    for (i, pi) in lat.partitions().iter().enumerate() {
        let kr = &lat.partitions()[lat.kreweras_idx(i)];
        let u = alternating_union(pi, kr)?;
        acc = acc.add(&partition_eval(&src, &u, &letters, &args)?);
    }
    Ok(acc)
}

/// Operator-valued boxed convolution against a trivial right factor.
pub fn boxed_amalgamated(f: &BSeries, g: &BSeries) -> Result<BSeries> {
    check_shape(&f.family, &g.family)?;
    if f.s() != g.s() {
        return Err(Error::Dimension(format!("{} vs {} variables", f.s(), g.s())));
    }
    let trivial_right = match &g.kind {
        SeriesKind::Trivial => true,
        SeriesKind::Symmetric(b0) => *b0 == g.base().one(),
        _ => false,
    };
    if !trivial_right {
        return Err(Error::Contract(format!(
            "right factor of kind {} (only trivial right factors give the product's R-transform)",
            g.kind.name()
        )));
    }
    let base = f.base().clone();
    let d = base.dim();
    let mut coeffs = BTreeMap::new();
    for w in all_words(f.s(), f.degree()) {
        let n = w.len();
        let ones = vec![base.one(); n - 1];
        let table = basis_words(d, n - 1)
            .iter()
            .map(|bw| {
                let b: Vec<Elem> = bw.iter().map(|&j| base.basis_elem(j)).collect();
                boxed_coefficient(&f.family, &g.family, &w, &b, &ones)
            })
            .collect::<Result<_>>()?;
        coeffs.insert(w, MultiCoeff { n, b_dim: d, table });
    }
    let family = CumulantFamily { s: f.s(), degree: f.degree(), base, coeffs };
    let kind = if f.kind.is_sliced() { SeriesKind::Trivial } else { SeriesKind::RTransform };
    Ok(BSeries { kind, family })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn scalar(vals: &[(&[usize], i64)], s: usize, degree: usize) -> BSeries {
        let mut f = CumulantFamily::zero(s, degree, Arc::new(FiniteAlgebra::scalars()));
        for (w, v) in vals {
            f.coeffs.get_mut(*w).unwrap().table[0] = Elem(vec![q(*v)]);
        }
        BSeries::new(SeriesKind::RTransform, f).unwrap()
    }

    #[test]
    fn second_coefficient_closed_form() {
        let f = scalar(&[(&[0], 2), (&[0, 0], 3)], 1, 2);
        let g = scalar(&[(&[0], 5), (&[0, 0], 7)], 1, 2);
        let h = boxed_scalar(&f, &g).unwrap();
        assert_eq!(h.family.coeffs[&vec![0]].table[0], Elem(vec![q(10)]));
        // f₂g₁² + f₁²g₂
        assert_eq!(h.family.coeffs[&vec![0, 0]].table[0], Elem(vec![q(3 * 25 + 4 * 7)]));
    }

    #[test]
    fn scalar_and_amalgamated_agree_on_scalars() {
        let mut rng = crate::fixtures::rng(7);
        let base = Arc::new(FiniteAlgebra::scalars());
        let f = BSeries::new(SeriesKind::RTransform, CumulantFamily::random(&mut rng, 2, 3, base.clone())).unwrap();
        let g = BSeries::new(SeriesKind::RTransform, CumulantFamily::random(&mut rng, 2, 3, base)).unwrap();
        let a = boxed_scalar(&f, &g).unwrap();
        let b = boxed_amalgamated(&f, &g.trivial()).unwrap();
        assert_eq!(a.family, b.family);
    }

    #[test]
    fn general_right_factor_is_rejected() {
        let f = scalar(&[(&[0], 1)], 1, 2);
        assert!(matches!(boxed_amalgamated(&f, &f), Err(Error::Contract(_))));
    }

    #[test]
    fn union_has_zero_mixed_words() {
        let f = scalar(&[(&[0], 1), (&[0, 0], 2)], 1, 2);
        let u = concat_union(&f, &f).unwrap();
        assert!(u.family.coeffs[&vec![0, 1]].is_zero());
        assert_eq!(u.family.coeffs[&vec![1, 1]], f.family.coeffs[&vec![0, 0]]);
    }
}
