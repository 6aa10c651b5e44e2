//! Multiplicative moment and cumulant functions over a base algebra B:
//! nested partition evaluation and operator-valued Möbius inversion.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use rand::Rng;

use crate::config;
use crate::error::{Error, Result};
use crate::exactalg::{ConditionalExpectation, Elem, FiniteAlgebra};
use crate::nclattice::{lattice, NcPartition};
use crate::rational::{frac, Q};

/// Variable indices, 0-based.
pub type Word = Vec<usize>;

/// Words of length 1..=n over `s` letters, shortest first then lexicographic.
pub fn all_words(s: usize, n: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer: Vec<Word> = vec![vec![]];
    for _ in 0..n {
        layer = layer
            .iter()
            .flat_map(|w| {
                (0..s).map(move |i| {
                    let mut v = w.clone();
                    v.push(i);
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// All tuples in `{0..d}^len`, lexicographic.
pub fn basis_words(d: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .iter()
            .flat_map(|w| {
                (0..d).map(move |i| {
                    let mut v = w.clone();
                    v.push(i);
                    v
                })
            })
            .collect();
    }
    out
}

/// A B-multilinear map B^{n−1} → B stored on basis words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiCoeff {
    pub n: usize,
    pub b_dim: usize,
    /// Indexed by the basis word read as a base-`b_dim` numeral.
    pub table: Vec<Elem>,
}

impl MultiCoeff {
    pub fn zero(n: usize, b_dim: usize) -> Self {
        MultiCoeff { n, b_dim, table: vec![Elem::zero(b_dim); b_dim.pow((n - 1) as u32)] }
    }

    pub fn from_fn(n: usize, b_dim: usize, mut f: impl FnMut(&[usize]) -> Result<Elem>) -> Result<Self> {
        let table = basis_words(b_dim, n - 1).iter().map(|w| f(w)).collect::<Result<_>>()?;
        Ok(MultiCoeff { n, b_dim, table })
    }

    fn index(&self, bw: &[usize]) -> usize {
        bw.iter().fold(0, |acc, &j| acc * self.b_dim + j)
    }

    pub fn at(&self, bw: &[usize]) -> &Elem {
        &self.table[self.index(bw)]
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(|e| e.is_zero())
    }

    /// Multilinear extension to arbitrary arguments.
    pub fn eval(&self, args: &[Elem]) -> Result<Elem> {
        if args.len() + 1 != self.n {
            return Err(Error::Dimension(format!("{} arguments for a degree-{} coefficient", args.len(), self.n)));
        }
        let mut out = Elem::zero(self.b_dim);
        // sparse expansion of each slot
        let supports: Vec<Vec<(usize, &Q)>> =
            args.iter().map(|a| a.0.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()).collect();
        let mut idx = vec![0usize; args.len()];
        if supports.iter().any(|s| s.is_empty()) {
            return Ok(out);
        }
        loop {
            let mut c = Q::from_integer(1.into());
            let mut flat = 0usize;
            for (slot, &k) in idx.iter().enumerate() {
                let (j, v) = supports[slot][k];
                c *= v;
                flat = flat * self.b_dim + j;
            }
            out.add_assign_scaled(&self.table[flat], &c);
            let mut slot = args.len();
            loop {
                if slot == 0 {
                    return Ok(out);
                }
                slot -= 1;
                idx[slot] += 1;
                if idx[slot] < supports[slot].len() {
                    break;
                }
                idx[slot] = 0;
            }
        }
    }

    pub fn add(&self, o: &MultiCoeff) -> MultiCoeff {
        MultiCoeff { table: self.table.iter().zip(&o.table).map(|(a, b)| a.add(b)).collect(), ..self.clone() }
    }
}

/// Anything that can produce the B-valued coefficient of a letter word at
/// given interleaved arguments `b₂,…,bₙ`.
pub trait CoefficientSource {
    fn base(&self) -> &FiniteAlgebra;
    fn coeff(&self, letters: &[usize], args: &[Elem]) -> Result<Elem>;
}

impl<T: CoefficientSource + ?Sized> CoefficientSource for &T {
    fn base(&self) -> &FiniteAlgebra {
        (**self).base()
    }
    fn coeff(&self, letters: &[usize], args: &[Elem]) -> Result<Elem> {
        (**self).coeff(letters, args)
    }
}

/// Coefficient tables for every word up to a truncation degree.
///
/// The same shape carries moment data (φ̂) or cumulant data (ĉ).
#[derive(Debug, Clone, PartialEq)]
pub struct CumulantFamily {
    pub s: usize,
    pub degree: usize,
    pub base: Arc<FiniteAlgebra>,
    pub coeffs: BTreeMap<Word, MultiCoeff>,
}

impl CumulantFamily {
    pub fn zero(s: usize, degree: usize, base: Arc<FiniteAlgebra>) -> Self {
        let d = base.dim();
        let coeffs = all_words(s, degree).into_iter().map(|w| (w.clone(), MultiCoeff::zero(w.len(), d))).collect();
        CumulantFamily { s, degree, base, coeffs }
    }

    /// Fills every word and basis word from `f(word, basis args)`.
    pub fn from_fn(
        s: usize,
        degree: usize,
        base: Arc<FiniteAlgebra>,
        mut f: impl FnMut(&[usize], &[Elem]) -> Result<Elem>,
    ) -> Result<Self> {
        let d = base.dim();
        let mut coeffs = BTreeMap::new();
        for w in all_words(s, degree) {
            let mc = MultiCoeff::from_fn(w.len(), d, |bw| {
                let args: Vec<Elem> = bw.iter().map(|&j| base.basis_elem(j)).collect();
                f(&w, &args)
            })?;
            coeffs.insert(w, mc);
        }
        Ok(CumulantFamily { s, degree, base, coeffs })
    }

    pub fn from_source(src: &impl CoefficientSource, s: usize, degree: usize, base: Arc<FiniteAlgebra>) -> Result<Self> {
        Self::from_fn(s, degree, base, |w, args| src.coeff(w, args))
    }

    /// Structural check: every word present with matching shapes.
    pub fn validate(&self) -> Result<()> {
        let d = self.base.dim();
        for w in all_words(self.s, self.degree) {
            let mc = self.coeffs.get(&w).ok_or_else(|| Error::Invariant(format!("missing word {}", fmt_word(&w))))?;
            if mc.n != w.len() || mc.b_dim != d || mc.table.len() != d.pow((w.len() - 1) as u32) {
                return Err(Error::Invariant(format!("malformed coefficient at {}", fmt_word(&w))));
            }
            if mc.table.iter().any(|e| e.dim() != d) {
                return Err(Error::Invariant(format!("coordinate length at {}", fmt_word(&w))));
            }
        }
        if self.coeffs.len() != all_words(self.s, self.degree).len() {
            return Err(Error::Invariant("words outside the declared range".into()));
        }
        Ok(())
    }

    pub fn get(&self, w: &[usize]) -> Result<&MultiCoeff> {
        self.coeffs.get(w).ok_or_else(|| {
            Error::Range(format!("word {} beyond degree {} or outside {} letters", fmt_word(w), self.degree, self.s))
        })
    }

    /// Random entries of the form a/b with |a| ≤ 3, 1 ≤ b ≤ 3.
    pub fn random(rng: &mut impl Rng, s: usize, degree: usize, base: Arc<FiniteAlgebra>) -> Self {
        let d = base.dim();
        let coeffs = all_words(s, degree)
            .into_iter()
            .map(|w| {
                let n = w.len();
                let table = (0..d.pow((n - 1) as u32)).map(|_| random_elem(rng, d)).collect();
                (w, MultiCoeff { n, b_dim: d, table })
            })
            .collect();
        CumulantFamily { s, degree, base, coeffs }
    }

    /// Coefficient-wise sum.
    pub fn add(&self, o: &CumulantFamily) -> Result<CumulantFamily> {
        if self.s != o.s || self.degree != o.degree || self.base != o.base {
            return Err(Error::Dimension("families differ in shape".into()));
        }
        let coeffs = self.coeffs.iter().map(|(w, c)| (w.clone(), c.add(&o.coeffs[w]))).collect();
        Ok(CumulantFamily { coeffs, ..self.clone() })
    }

    /// First word (in order) whose coefficients differ, with the basis word.
    pub fn first_difference(&self, o: &CumulantFamily) -> Option<(Word, Vec<usize>)> {
        for (w, c) in &self.coeffs {
            let Some(c2) = o.coeffs.get(w) else { return Some((w.clone(), vec![])) };
            for (k, bw) in basis_words(self.base.dim(), w.len() - 1).into_iter().enumerate() {
                if c.table[k] != c2.table[k] {
                    return Some((w.clone(), bw));
                }
            }
        }
        None
    }
}

pub fn random_q(rng: &mut impl Rng) -> Q {
    frac(rng.gen_range(-3..=3), rng.gen_range(1..=3))
}

pub fn random_elem(rng: &mut impl Rng, d: usize) -> Elem {
    Elem((0..d).map(|_| random_q(rng)).collect())
}

impl CoefficientSource for CumulantFamily {
    fn base(&self) -> &FiniteAlgebra {
        &self.base
    }
    fn coeff(&self, letters: &[usize], args: &[Elem]) -> Result<Elem> {
        self.get(letters)?.eval(args)
    }
}

pub fn fmt_word(w: &[usize]) -> String {
    let inner: Vec<String> = w.iter().map(|i| (i + 1).to_string()).collect();
    format!("({})", inner.join(","))
}

/// Value of the multiplicative extension of `src` at π on
/// `x_{w₁} ⊗ b₂x_{w₂} ⊗ … ⊗ bₙx_{wₙ}`.
///
/// Reduces the leftmost block that is an interval of the surviving points,
/// evaluates it with its interior arguments, and splices the value into the
/// argument slot joining its neighbours (or into an outer factor at the ends).
pub fn partition_eval<S: CoefficientSource + ?Sized>(
    src: &S,
    pi: &NcPartition,
    word: &[usize],
    b_args: &[Elem],
) -> Result<Elem> {
    let n = word.len();
    if pi.n() != n {
        return Err(Error::Dimension(format!("partition of {} points on a word of length {n}", pi.n())));
    }
    if b_args.len() + 1 != n {
        return Err(Error::Dimension(format!("word of length {n} needs {} arguments", n - 1)));
    }
    let b = src.base();
    let labels = pi.labels();
    // surviving points (1-based) and the argument sitting before each
    let mut pts: Vec<usize> = (1..=n).collect();
    let mut args: Vec<Elem> = std::iter::once(b.one()).chain(b_args.iter().cloned()).collect();
    let mut left = b.one();
    let mut right = b.one();
    while !pts.is_empty() {
        // leftmost run of equal labels that is a whole block
        let mut l = 0;
        let (lo, hi) = loop {
            let lab = labels[pts[l]];
            let mut r = l;
            while r + 1 < pts.len() && labels[pts[r + 1]] == lab {
                r += 1;
            }
            let whole = pts.iter().filter(|&&p| labels[p] == lab).count() == r - l + 1;
            if whole {
                break (l, r);
            }
            l = r + 1;
        };
        let letters: Vec<usize> = pts[lo..=hi].iter().map(|&p| word[p - 1]).collect();
        let v = src.coeff(&letters, &args[lo + 1..=hi])?;
        if pts.len() == hi - lo + 1 {
            return Ok(b.mul(&b.mul(&left, &v), &right));
        }
        if lo == 0 {
            left = b.mul(&b.mul(&left, &v), &args[hi + 1]);
            pts.drain(0..=hi);
            args.drain(0..=hi);
            args[0] = b.one();
        } else if hi + 1 == pts.len() {
            right = b.mul(&b.mul(&args[lo], &v), &right);
            pts.truncate(lo);
            args.truncate(lo);
        } else {
            let merged = b.mul(&b.mul(&args[lo], &v), &args[hi + 1]);
            pts.drain(lo..=hi);
            args.drain(lo..=hi);
            args[lo] = merged;
        }
    }
    unreachable!("loop returns when the last block is reduced")
}

/// Σ_{π ∈ NC(n)} weight(π) · partition_eval(src, π, …).
fn weighted_sum<S: CoefficientSource + ?Sized>(
    src: &S,
    word: &[usize],
    args: &[Elem],
    mobius: bool,
) -> Result<Elem> {
    let n = word.len();
    let lat = lattice(n)?;
    let mu = lat.mobius_to_top();
    let mut acc = src.base().zero();
    for (i, pi) in lat.partitions().iter().enumerate() {
        let w = if mobius { mu[i].clone() } else { Q::from_integer(1.into()) };
        if w.is_zero() {
            continue;
        }
        acc.add_assign_scaled(&partition_eval(src, pi, word, args)?, &w);
    }
    Ok(acc)
}

/// Cumulants computed on demand from a moment source: c⁽ⁿ⁾ = Σ_π φ̂(π) μ(π,1ₙ).
pub struct CumulantsOf<S>(pub S);

impl<S: CoefficientSource> CoefficientSource for CumulantsOf<S> {
    fn base(&self) -> &FiniteAlgebra {
        self.0.base()
    }
    fn coeff(&self, letters: &[usize], args: &[Elem]) -> Result<Elem> {
        weighted_sum(&self.0, letters, args, true)
    }
}

/// Moments computed on demand from a cumulant source: φ⁽ⁿ⁾ = Σ_π ĉ(π).
pub struct MomentsOf<S>(pub S);

impl<S: CoefficientSource> CoefficientSource for MomentsOf<S> {
    fn base(&self) -> &FiniteAlgebra {
        self.0.base()
    }
    fn coeff(&self, letters: &[usize], args: &[Elem]) -> Result<Elem> {
        weighted_sum(&self.0, letters, args, false)
    }
}

fn check_caps(f: &CumulantFamily) -> Result<()> {
    let cap = config::max_degree(f.base.dim());
    if f.degree > cap {
        return Err(Error::Range(format!("degree {} exceeds cap {cap} for dim B = {}", f.degree, f.base.dim())));
    }
    f.validate()
}

/// ĉ = φ̂ ∗ μ, word by word and basis word by basis word.
pub fn moments_to_cumulants(moments: &CumulantFamily) -> Result<CumulantFamily> {
    check_caps(moments)?;
    CumulantFamily::from_source(&CumulantsOf(moments), moments.s, moments.degree, moments.base.clone())
}

/// φ̂ = ĉ ∗ ζ.
pub fn cumulants_to_moments(cumulants: &CumulantFamily) -> Result<CumulantFamily> {
    check_caps(cumulants)?;
    CumulantFamily::from_source(&MomentsOf(cumulants), cumulants.s, cumulants.degree, cumulants.base.clone())
}

/// Moments φ(x_{i₁} b₂ x_{i₂} ⋯ bₙ x_{iₙ}) read off a concrete expectation.
pub struct ModelMoments<'a> {
    pub phi: &'a ConditionalExpectation,
    pub elements: Vec<Elem>,
    embedded_basis: Vec<Elem>,
}

impl<'a> ModelMoments<'a> {
    pub fn new(phi: &'a ConditionalExpectation, elements: Vec<Elem>) -> Result<Self> {
        for x in &elements {
            phi.source.check(x)?;
        }
        let embedded_basis =
            (0..phi.target.dim()).map(|j| phi.include(&phi.target.basis_elem(j))).collect::<Result<_>>()?;
        Ok(ModelMoments { phi, elements, embedded_basis })
    }

    fn embed(&self, b: &Elem) -> Elem {
        let mut acc = self.phi.source.zero();
        for (c, e) in b.0.iter().zip(&self.embedded_basis) {
            acc.add_assign_scaled(e, c);
        }
        acc
    }
}

impl CoefficientSource for ModelMoments<'_> {
    fn base(&self) -> &FiniteAlgebra {
        &self.phi.target
    }
    fn coeff(&self, letters: &[usize], args: &[Elem]) -> Result<Elem> {
        let a = &self.phi.source;
        let get = |i: usize| {
            self.elements.get(i).ok_or_else(|| Error::Range(format!("variable {} of {}", i + 1, self.elements.len())))
        };
        let mut prod = get(letters[0])?.clone();
        for (k, &i) in letters.iter().enumerate().skip(1) {
            prod = a.mul(&a.mul(&prod, &self.embed(&args[k - 1])), get(i)?);
        }
        self.phi.apply(&prod)
    }
}

/// Moment family of `elements` under `phi`, filled by direct evaluation.
pub fn extract_from_model(phi: &ConditionalExpectation, elements: &[Elem], degree: usize) -> Result<CumulantFamily> {
    let src = ModelMoments::new(phi, elements.to_vec())?;
    CumulantFamily::from_source(&src, elements.len(), degree, phi.target.clone())
}

/// Per word, the value of the multilinear map at (b₀,…,b₀).
pub fn symmetric_slice(family: &CumulantFamily, b0: &Elem) -> Result<BTreeMap<Word, Elem>> {
    family.base.check(b0)?;
    family
        .coeffs
        .iter()
        .map(|(w, c)| Ok((w.clone(), c.eval(&vec![b0.clone(); w.len() - 1])?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nclattice::enumerate_nc;
    use crate::rational::q;

    fn scalar_family(vals: &[(&[usize], i64)], s: usize, degree: usize) -> CumulantFamily {
        let base = Arc::new(FiniteAlgebra::scalars());
        let mut f = CumulantFamily::zero(s, degree, base);
        for (w, v) in vals {
            f.coeffs.get_mut(*w).unwrap().table[0] = Elem(vec![q(*v)]);
        }
        f
    }

    #[test]
    fn words_in_order() {
        assert_eq!(all_words(2, 2), vec![vec![0], vec![1], vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(basis_words(2, 2).len(), 4);
    }

    #[test]
    fn scalar_second_cumulant() {
        let m = scalar_family(&[(&[0], 2), (&[0, 0], 7)], 1, 2);
        let c = moments_to_cumulants(&m).unwrap();
        assert_eq!(c.coeffs[&vec![0]].table[0], Elem(vec![q(2)]));
        assert_eq!(c.coeffs[&vec![0, 0]].table[0], Elem(vec![q(3)]));
    }

    #[test]
    fn semicircle_moments_are_catalan() {
        let c = scalar_family(&[(&[0, 0], 1)], 1, 5);
        let m = cumulants_to_moments(&c).unwrap();
        let got: Vec<Q> = (1..=5).map(|n| m.coeffs[&vec![0; n]].table[0].0[0].clone()).collect();
        assert_eq!(got, vec![q(0), q(1), q(0), q(2), q(0)]);
    }

    #[test]
    fn zero_partition_on_diagonal_base() {
        // φ̂(0₃)(x ⊗ b₂x ⊗ b₃x) = φ(x) b₂ φ(x) b₃ φ(x)
        let base = Arc::new(FiniteAlgebra::diagonal(2));
        let mut f = CumulantFamily::zero(1, 3, base.clone());
        f.coeffs.get_mut(&vec![0]).unwrap().table[0] = Elem(vec![q(2), q(3)]);
        let b2 = Elem(vec![q(5), q(7)]);
        let b3 = Elem(vec![q(1), q(-1)]);
        let v = partition_eval(&f, &NcPartition::zero(3), &[0, 0, 0], &[b2, b3]).unwrap();
        assert_eq!(v, Elem(vec![q(2 * 5 * 2 * 2), q(-(3 * 7 * 3 * 3))]));
    }

    #[test]
    fn one_block_is_direct() {
        let mut rng = crate::fixtures::rng(7);
        let base = Arc::new(FiniteAlgebra::diagonal(2));
        let f = CumulantFamily::random(&mut rng, 1, 3, base);
        let args = vec![Elem(vec![q(1), q(2)]), Elem(vec![q(3), q(0)])];
        let direct = f.coeffs[&vec![0, 0, 0]].eval(&args).unwrap();
        assert_eq!(partition_eval(&f, &NcPartition::one(3), &[0, 0, 0], &args).unwrap(), direct);
    }

    #[test]
    fn nested_block_splices_into_argument() {
        // π = {1,3}{2}: c(x ⊗ b₂ c(x) b₃ x)
        let f = scalar_family(&[(&[0], 3), (&[0, 0], 5)], 1, 3);
        let pi = NcPartition::parse(3, "[[1,3],[2]]").unwrap();
        let args = vec![Elem(vec![q(2)]), Elem(vec![q(7)])];
        assert_eq!(partition_eval(&f, &pi, &[0, 0, 0], &args).unwrap(), Elem(vec![q(5 * 2 * 3 * 7)]));
        assert_eq!(enumerate_nc(3).unwrap().len(), 5);
    }
}
