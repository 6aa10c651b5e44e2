//! Joint distributions specified by cumulant data. Variables in different
//! components are free over B by construction: their mixed cumulants are 0_B.
//!
//! A component is either an explicit cumulant table or a chain of B-central
//! projections p₁ ≤ p₂ ≤ … with φ(p_j) = b₀⁽ʲ⁾ central in B.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{Elem, FiniteAlgebra};
use crate::multifunc::{all_words, fmt_word, moments_to_cumulants, CoefficientSource, CumulantFamily, Word};
use crate::report::Report;
use crate::rational::{fmt_q, Q};
use crate::series::{add, boxed_amalgamated, boxed_scalar, concat_union, BSeries, SeriesKind};

#[derive(Debug, Clone, PartialEq)]
pub enum Component {
    Table(CumulantFamily),
    /// φ(p_j) for an increasing chain of projections commuting with B.
    Chain(Vec<Elem>),
}

impl Component {
    pub fn arity(&self) -> usize {
        match self {
            Component::Table(f) => f.s,
            Component::Chain(b) => b.len(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CumulantSpec {
    pub labels: Vec<String>,
    pub base: Arc<FiniteAlgebra>,
    pub degree: usize,
    pub components: Vec<Component>,
    chain_cache: Arc<Mutex<HashMap<(usize, Word), Elem>>>,
}

impl PartialEq for CumulantSpec {
    fn eq(&self, o: &Self) -> bool {
        self.labels == o.labels && self.base == o.base && self.degree == o.degree && self.components == o.components
    }
}

impl CumulantSpec {
    pub fn new(
        labels: Vec<String>,
        base: Arc<FiniteAlgebra>,
        degree: usize,
        components: Vec<Component>,
    ) -> Result<Self> {
        let arity: usize = components.iter().map(Component::arity).sum();
        if labels.len() != arity {
            return Err(Error::Dimension(format!("{} labels for {arity} variables", labels.len())));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::Structure(format!("duplicate label {l}")));
            }
        }
        for c in &components {
            match c {
                Component::Table(f) => {
                    if f.degree != degree || *f.base != *base {
                        return Err(Error::Dimension("table component differs in degree or base".into()));
                    }
                    f.validate()?;
                }
                Component::Chain(b0s) => {
                    for b0 in b0s {
                        base.check(b0)?;
                        if !(0..base.dim()).all(|j| base.commutes(b0, &base.basis_elem(j))) {
                            return Err(Error::Contract("projection value is not central in B".into()));
                        }
                        if base.inverse(b0).is_none() {
                            return Err(Error::Contract("projection value is not invertible".into()));
                        }
                    }
                }
            }
        }
        Ok(CumulantSpec { labels, base, degree, components, chain_cache: Arc::default() })
    }

    /// A single table component; labels default to x1, x2, ….
    pub fn from_family(family: CumulantFamily, labels: Option<Vec<String>>) -> Result<Self> {
        let labels = labels.unwrap_or_else(|| (1..=family.s).map(|i| format!("x{i}")).collect());
        Self::new(labels, family.base.clone(), family.degree, vec![Component::Table(family)])
    }

    pub fn s(&self) -> usize {
        self.labels.len()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels.iter().position(|l| l == label).ok_or_else(|| Error::Parse(format!("unknown variable {label}")))
    }

    /// Component index and position inside it.
    pub fn locate(&self, var: usize) -> Result<(usize, usize)> {
        let mut off = 0;
        for (ci, c) in self.components.iter().enumerate() {
            if var < off + c.arity() {
                return Ok((ci, var - off));
            }
            off += c.arity();
        }
        Err(Error::Range(format!("variable {} of {}", var + 1, self.s())))
    }

    fn is_chain(&self, var: usize) -> bool {
        matches!(self.locate(var), Ok((ci, _)) if matches!(self.components[ci], Component::Chain(_)))
    }

    /// Σ_π μ(π,1) Π_V φ(p_{min V}) for a word in one chain.
    ///
    /// All values are central, so the first-block recursion
    /// m(w) = Σ_{V ∋ 1} κ(w|V) Π_{gaps G} m(w|G) is solved for κ(w)
    /// without enumerating NC(n).
    fn chain_kappa(&self, ci: usize, local: &[usize]) -> Result<Elem> {
        let key = (ci, local.to_vec());
        if let Some(v) = self.chain_cache.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let Component::Chain(b0s) = &self.components[ci] else {
            return Err(Error::Invariant("chain lookup on a table component".into()));
        };
        let b = &self.base;
        let moment = |w: &[usize]| b0s[*w.iter().min().expect("nonempty")].clone();
        let n = local.len();
        let mut acc = moment(local);
        // proper blocks containing the first letter, as bitmasks over 1..n
        for mask in 0..(1u64 << (n - 1)) - 1 {
            let block: Vec<usize> = std::iter::once(0).chain((1..n).filter(|t| mask >> (t - 1) & 1 == 1)).collect();
            let sub: Vec<usize> = block.iter().map(|&t| local[t]).collect();
            let mut term = self.chain_kappa(ci, &sub)?;
            let mut bounds = block.clone();
            bounds.push(n);
            for w in bounds.windows(2) {
                if w[1] > w[0] + 1 {
                    term = b.mul(&term, &moment(&local[w[0] + 1..w[1]]));
                }
            }
            acc = acc.sub(&term);
        }
        self.chain_cache.lock().unwrap().insert(key, acc.clone());
        Ok(acc)
    }

    /// The cumulant ĉ(x_{w₁} ⊗ b₂x_{w₂} ⊗ …); 0_B on mixed words.
    pub fn cumulant(&self, letters: &[usize], args: &[Elem]) -> Result<Elem> {
        if letters.is_empty() || args.len() + 1 != letters.len() {
            return Err(Error::Dimension("cumulant needs n letters and n−1 arguments".into()));
        }
        let (c0, _) = self.locate(letters[0])?;
        let mut local = Vec::with_capacity(letters.len());
        for &v in letters {
            let (ci, li) = self.locate(v)?;
            if ci != c0 {
                return Ok(self.base.zero());
            }
            local.push(li);
        }
        match &self.components[c0] {
            Component::Table(f) => f.coeff(&local, args),
            Component::Chain(_) => {
                let k = self.chain_kappa(c0, &local)?;
                Ok(args.iter().fold(k, |acc, a| self.base.mul(&acc, a)))
            }
        }
    }

    /// φ(x_{w₁} b₂ x_{w₂} ⋯ bₙ x_{wₙ}) by first-block recursion.
    pub fn joint_moment(&self, letters: &[usize], args: &[Elem]) -> Result<Elem> {
        if letters.is_empty() || args.len() + 1 != letters.len() {
            return Err(Error::Dimension("moment needs n letters and n−1 arguments".into()));
        }
        for a in args {
            self.base.check(a)?;
        }
        let (left, letters, args) = self.normalize(letters, args)?;
        let mut full = vec![self.base.one()];
        full.extend(args);
        let mut ev = Evaluator { spec: self, letters: &letters, args: &full, memo: HashMap::new() };
        let m = ev.moment(0, letters.len() - 1)?;
        Ok(self.base.mul(&left, &m))
    }

    /// Merges adjacent letters of one chain: d·p_a·c·p_b = (d·c)·p_{min(a,b)}.
    fn normalize(&self, letters: &[usize], args: &[Elem]) -> Result<(Elem, Vec<usize>, Vec<Elem>)> {
        let mut left = self.base.one();
        let mut out_l: Vec<usize> = vec![letters[0]];
        let mut out_a: Vec<Elem> = vec![];
        for (k, &v) in letters.iter().enumerate().skip(1) {
            let c = &args[k - 1];
            let last = *out_l.last().expect("nonempty");
            let same_chain =
                self.is_chain(v) && self.is_chain(last) && self.locate(v)?.0 == self.locate(last)?.0;
            if same_chain {
                let keep = if self.locate(v)?.1 < self.locate(last)?.1 { v } else { last };
                *out_l.last_mut().expect("nonempty") = keep;
                match out_a.last_mut() {
                    Some(d) => *d = self.base.mul(d, c),
                    None => left = self.base.mul(&left, c),
                }
            } else {
                out_l.push(v);
                out_a.push(c.clone());
            }
        }
        Ok((left, out_l, out_a))
    }

    /// Cumulants of all variables to degree N, mixed words included.
    pub fn cumulant_family(&self) -> Result<CumulantFamily> {
        CumulantFamily::from_source(&SpecCumulants(self), self.s(), self.degree, self.base.clone())
    }

    /// Moments of all variables to degree N.
    pub fn moment_family(&self) -> Result<CumulantFamily> {
        CumulantFamily::from_source(&SpecMoments(self), self.s(), self.degree, self.base.clone())
    }

    /// The variables `vars` as a standalone single-table spec.
    pub fn restrict(&self, vars: &[usize]) -> Result<CumulantSpec> {
        let fam = CumulantFamily::from_fn(vars.len(), self.degree, self.base.clone(), |w, args| {
            let g: Word = w.iter().map(|&i| vars[i]).collect();
            self.cumulant(&g, args)
        })?;
        let labels = vars.iter().map(|&v| self.labels[v].clone()).collect();
        CumulantSpec::from_family(fam, Some(labels))
    }
}

pub struct SpecCumulants<'a>(pub &'a CumulantSpec);
pub struct SpecMoments<'a>(pub &'a CumulantSpec);

impl CoefficientSource for SpecCumulants<'_> {
    fn base(&self) -> &FiniteAlgebra {
        &self.0.base
    }
    fn coeff(&self, letters: &[usize], args: &[Elem]) -> Result<Elem> {
        self.0.cumulant(letters, args)
    }
}

impl CoefficientSource for SpecMoments<'_> {
    fn base(&self) -> &FiniteAlgebra {
        &self.0.base
    }
    fn coeff(&self, letters: &[usize], args: &[Elem]) -> Result<Elem> {
        self.0.joint_moment(letters, args)
    }
}

struct Evaluator<'a> {
    spec: &'a CumulantSpec,
    letters: &'a [usize],
    /// `args[t]` sits before letter t; `args[0]` is 1_B.
    args: &'a [Elem],
    memo: HashMap<(usize, usize), Elem>,
}

impl Evaluator<'_> {
    /// Moment of letters l..=r with their interior arguments.
    fn moment(&mut self, l: usize, r: usize) -> Result<Elem> {
        if let Some(v) = self.memo.get(&(l, r)) {
            return Ok(v.clone());
        }
        let (c0, _) = self.spec.locate(self.letters[l])?;
        let cands: Vec<usize> =
            (l + 1..=r).filter(|&t| self.spec.locate(self.letters[t]).map(|x| x.0) == Ok(c0)).collect();
        let mut acc = self.spec.base.zero();
        let mut block = vec![l];
        let mut bargs = vec![];
        self.extend(&cands, 0, &mut block, &mut bargs, r, &mut acc)?;
        self.memo.insert((l, r), acc.clone());
        Ok(acc)
    }

    /// Adds every block starting with `block` (extended by candidates from
    /// `from` on) times the moment of what follows it.
    fn extend(
        &mut self,
        cands: &[usize],
        from: usize,
        block: &mut Vec<usize>,
        bargs: &mut Vec<Elem>,
        r: usize,
        acc: &mut Elem,
    ) -> Result<()> {
        let b = self.spec.base.clone();
        let last = *block.last().expect("nonempty");
        // close the block here
        let letters: Vec<usize> = block.iter().map(|&t| self.letters[t]).collect();
        let within = match &self.spec.components[self.spec.locate(letters[0])?.0] {
            Component::Table(_) => letters.len() <= self.spec.degree,
            Component::Chain(_) => true,
        };
        if !within {
            return Err(Error::Range(format!(
                "moment needs a cumulant of order {} beyond degree {}",
                letters.len(),
                self.spec.degree
            )));
        }
        let v = self.spec.cumulant(&letters, bargs)?;
        if !v.is_zero() {
            let term = if last < r { b.mul(&b.mul(&v, &self.args[last + 1]), &self.moment(last + 1, r)?) } else { v };
            *acc = acc.add(&term);
        }
        for k in from..cands.len() {
            let t = cands[k];
            let arg = if t == last + 1 {
                self.args[t].clone()
            } else {
                let gap = self.moment(last + 1, t - 1)?;
                if gap.is_zero() {
                    continue;
                }
                b.mul(&b.mul(&self.args[last + 1], &gap), &self.args[t])
            };
            block.push(t);
            bargs.push(arg);
            let res = self.extend(cands, k + 1, block, bargs, r, acc);
            block.pop();
            bargs.pop();
            res?;
        }
        Ok(())
    }
}

/// A noncommutative polynomial without constant term: Σ c·(monomial).
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<(Q, Word)>);

impl Poly {
    pub fn var(i: usize) -> Poly {
        Poly(vec![(Q::one(), vec![i])])
    }

    pub fn monomial(w: Word) -> Poly {
        Poly(vec![(Q::one(), w)])
    }

    pub fn sum(a: &Poly, b: &Poly) -> Poly {
        Poly(a.0.iter().chain(&b.0).cloned().collect())
    }
}

/// Moments of polynomial variables, optionally compressed by a chain letter
/// `p` (φ(p · p)) and left-multiplied by a central scale.
pub struct CompositeMoments<'a> {
    pub spec: &'a CumulantSpec,
    pub vars: Vec<Poly>,
    pub wrap: Option<usize>,
    pub scale: Option<Elem>,
    cache: Mutex<HashMap<(Word, Vec<Elem>), Elem>>,
}

impl<'a> CompositeMoments<'a> {
    pub fn new(spec: &'a CumulantSpec, vars: Vec<Poly>) -> Result<Self> {
        for p in &vars {
            for (_, m) in &p.0 {
                if m.is_empty() {
                    return Err(Error::Contract("polynomial variables need nonempty monomials".into()));
                }
                for &v in m {
                    spec.locate(v)?;
                }
            }
        }
        Ok(CompositeMoments { spec, vars, wrap: None, scale: None, cache: Mutex::default() })
    }

    /// Compress every word by the chain letter `p`, normalizing by φ(p)⁻¹.
    pub fn compressed(mut self, p: usize) -> Result<Self> {
        let (ci, li) = self.spec.locate(p)?;
        let Component::Chain(b0s) = &self.spec.components[ci] else {
            return Err(Error::Contract(format!("{} is not a projection", self.spec.labels[p])));
        };
        let inv = self.spec.base.inverse(&b0s[li]).ok_or_else(|| Error::Contract("φ(p) not invertible".into()))?;
        self.wrap = Some(p);
        self.scale = Some(inv);
        Ok(self)
    }
}

impl CoefficientSource for CompositeMoments<'_> {
    fn base(&self) -> &FiniteAlgebra {
        &self.spec.base
    }
    fn coeff(&self, letters: &[usize], args: &[Elem]) -> Result<Elem> {
        let key = (letters.to_vec(), args.to_vec());
        if let Some(v) = self.cache.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let b = &self.spec.base;
        let polys: Vec<&Poly> = letters
            .iter()
            .map(|&i| self.vars.get(i).ok_or_else(|| Error::Range(format!("composite variable {}", i + 1))))
            .collect::<Result<_>>()?;
        let mut acc = b.zero();
        let mut idx = vec![0usize; polys.len()];
        'outer: loop {
            let mut coef = Q::one();
            let mut word: Vec<usize> = vec![];
            let mut wargs: Vec<Elem> = vec![];
            if let Some(p) = self.wrap {
                word.push(p);
            }
            for (slot, &k) in idx.iter().enumerate() {
                let (c, m) = &polys[slot].0[k];
                coef *= c;
                for (t, &v) in m.iter().enumerate() {
                    if !word.is_empty() {
                        wargs.push(if t == 0 && slot > 0 { args[slot - 1].clone() } else { b.one() });
                    }
                    word.push(v);
                }
            }
            if let Some(p) = self.wrap {
                word.push(p);
                wargs.push(b.one());
            }
            if !coef.is_zero() {
                acc.add_assign_scaled(&self.spec.joint_moment(&word, &wargs)?, &coef);
            }
            let mut slot = idx.len();
            loop {
                if slot == 0 {
                    break 'outer;
                }
                slot -= 1;
                idx[slot] += 1;
                if idx[slot] < polys[slot].0.len() {
                    break;
                }
                idx[slot] = 0;
            }
        }
        if let Some(s) = &self.scale {
            acc = b.mul(s, &acc);
        }
        self.cache.lock().unwrap().insert(key, acc.clone());
        Ok(acc)
    }
}

/// Moment family of polynomial variables.
pub fn composite_moment_family(src: &CompositeMoments, degree: usize) -> Result<CumulantFamily> {
    CumulantFamily::from_source(src, src.vars.len(), degree, src.spec.base.clone())
}

/// Joint spec on the disjoint union of variables; mixed cumulants vanish.
pub fn free_union(x: &CumulantSpec, y: &CumulantSpec) -> Result<CumulantSpec> {
    if x.base != y.base || x.degree != y.degree {
        return Err(Error::Dimension("free union of specs with different base or degree".into()));
    }
    let labels = x.labels.iter().chain(&y.labels).cloned().collect();
    let comps = x.components.iter().chain(&y.components).cloned().collect();
    CumulantSpec::new(labels, x.base.clone(), x.degree, comps)
}

fn same_arity(x: &CumulantSpec, y: &CumulantSpec) -> Result<()> {
    if x.s() != y.s() || x.degree != y.degree || x.base != y.base {
        return Err(Error::Dimension(format!("{} vs {} variables or different degree/base", x.s(), y.s())));
    }
    Ok(())
}

/// y-labels suffixed so the union has no collisions.
fn disjoint(y: &CumulantSpec) -> CumulantSpec {
    let mut y = y.clone();
    y.labels = y.labels.iter().map(|l| format!("{l}'")).collect();
    y
}

/// Free additive convolution by adding cumulants.
pub fn free_add(x: &CumulantSpec, y: &CumulantSpec) -> Result<CumulantSpec> {
    same_arity(x, y)?;
    CumulantSpec::from_family(x.cumulant_family()?.add(&y.cumulant_family()?)?, None)
}

/// Free additive convolution through moments of x_i + y_i in the free union.
pub fn free_add_via_moments(x: &CumulantSpec, y: &CumulantSpec) -> Result<CumulantSpec> {
    same_arity(x, y)?;
    let u = free_union(x, &disjoint(y))?;
    let s = x.s();
    let vars = (0..s).map(|i| Poly::sum(&Poly::var(i), &Poly::var(s + i))).collect();
    let m = composite_moment_family(&CompositeMoments::new(&u, vars)?, x.degree)?;
    CumulantSpec::from_family(moments_to_cumulants(&m)?, None)
}

/// Free multiplicative convolution by boxed convolution of the cumulants
/// with the trivial right factor.
pub fn free_mul(x: &CumulantSpec, y: &CumulantSpec) -> Result<CumulantSpec> {
    same_arity(x, y)?;
    let f = BSeries::new(SeriesKind::RTransform, x.cumulant_family()?)?;
    let g = BSeries::new(SeriesKind::RTransform, y.cumulant_family()?)?;
    let h = if x.base.dim() == 1 { boxed_scalar(&f, &g)? } else { boxed_amalgamated(&f, &g.trivial())? };
    CumulantSpec::from_family(h.family, None)
}

/// Free multiplicative convolution through moments of x_i·y_i.
pub fn free_mul_via_moments(x: &CumulantSpec, y: &CumulantSpec) -> Result<CumulantSpec> {
    same_arity(x, y)?;
    let u = free_union(x, &disjoint(y))?;
    let s = x.s();
    let vars = (0..s).map(|i| Poly::monomial(vec![i, s + i])).collect();
    let m = composite_moment_family(&CompositeMoments::new(&u, vars)?, x.degree)?;
    CumulantSpec::from_family(moments_to_cumulants(&m)?, None)
}

fn group_map(s: usize, groups: &[Vec<usize>]) -> Result<Vec<usize>> {
    let mut owner = vec![usize::MAX; s];
    for (g, vars) in groups.iter().enumerate() {
        for &v in vars {
            if v >= s {
                return Err(Error::Range(format!("variable {} of {s}", v + 1)));
            }
            if owner[v] != usize::MAX {
                return Err(Error::Structure(format!("variable {} in two groups", v + 1)));
            }
            owner[v] = g;
        }
    }
    if owner.contains(&usize::MAX) {
        return Err(Error::Structure("groups do not cover every variable".into()));
    }
    Ok(owner)
}

/// First word touching two groups with a nonzero cumulant, if any.
pub fn first_mixed_nonzero(cumulants: &CumulantFamily, groups: &[Vec<usize>]) -> Result<Option<Word>> {
    let owner = group_map(cumulants.s, groups)?;
    for w in all_words(cumulants.s, cumulants.degree) {
        let mixed = w.iter().any(|&v| owner[v] != owner[w[0]]);
        if mixed && !cumulants.coeffs[&w].is_zero() {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Free up to degree N: every mixed cumulant vanishes.
pub fn are_free(spec: &CumulantSpec, groups: &[Vec<usize>]) -> Result<bool> {
    Ok(first_mixed_nonzero(&spec.cumulant_family()?, groups)?.is_none())
}

/// Adjoins a projection free from every existing variable, commuting with B,
/// with φ(p) = α·1_B.
pub fn adjoin_projection(spec: &CumulantSpec, alpha: &Q, label: &str) -> Result<CumulantSpec> {
    if !alpha.is_positive() {
        return Err(Error::Contract(format!("projection weight {} must be positive", fmt_q(alpha))));
    }
    adjoin_chain(spec, vec![spec.base.scalar(alpha)], vec![label.to_string()])
}

/// Adjoins a chain p₁ ≤ p₂ ≤ … with central values φ(p_j) = b0s[j].
pub fn adjoin_chain(spec: &CumulantSpec, b0s: Vec<Elem>, labels: Vec<String>) -> Result<CumulantSpec> {
    let mut all = spec.labels.clone();
    all.extend(labels);
    let mut comps = spec.components.clone();
    comps.push(Component::Chain(b0s));
    CumulantSpec::new(all, spec.base.clone(), spec.degree, comps)
}

trait Positive {
    fn is_positive(&self) -> bool;
}

impl Positive for Q {
    fn is_positive(&self) -> bool {
        *self > Q::zero()
    }
}

/// For free X, Y: R of X ∪ Y is the union, R of x+y the sum and R of xy the
/// boxed convolution against the trivial R_Y (and the scalar ⊡ on ℚ).
pub fn verify_free_pair(spec: &CumulantSpec, xs: &[usize], ys: &[usize]) -> Result<Report> {
    if xs.is_empty() || xs.len() != ys.len() {
        return Err(Error::Dimension(format!("{} x-variables vs {} y-variables", xs.len(), ys.len())));
    }
    let s = xs.len();
    let both: Vec<usize> = xs.iter().chain(ys).copied().collect();
    let joint = spec.restrict(&both)?.cumulant_family()?;
    let mut r = Report::new("free pair calculus");
    let mixed = first_mixed_nonzero(&joint, &[(0..s).collect(), (s..2 * s).collect()])?;
    r.flag("X and Y free over B", mixed.is_none(), mixed.map(|w| format!("mixed cumulant at {}", fmt_word(&w))));
    let rx = BSeries::new(SeriesKind::RTransform, spec.restrict(xs)?.cumulant_family()?)?;
    let ry = BSeries::new(SeriesKind::RTransform, spec.restrict(ys)?.cumulant_family()?)?;
    r.families("R of X ∪ Y = R_X + R_Y on disjoint letters", &joint, &concat_union(&rx, &ry)?.family);
    let r_of = |vars: Vec<Poly>| -> Result<CumulantFamily> {
        moments_to_cumulants(&composite_moment_family(&CompositeMoments::new(spec, vars)?, spec.degree)?)
    };
    let sums = (0..s).map(|i| Poly::sum(&Poly::var(xs[i]), &Poly::var(ys[i]))).collect();
    r.families("R of x+y = R_X + R_Y", &r_of(sums)?, &add(&rx, &ry)?.family);
    let prods = (0..s).map(|i| Poly::monomial(vec![xs[i], ys[i]])).collect();
    let rprod = r_of(prods)?;
    r.families("R of xy = R_X boxed R_Y trivial", &rprod, &boxed_amalgamated(&rx, &ry.trivial())?.family);
    if spec.base.dim() == 1 {
        r.families("r of xy = r_X boxed r_Y (scalar)", &rprod, &boxed_scalar(&rx, &ry)?.family);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multifunc::cumulants_to_moments;
    use crate::nclattice::enumerate_nc;
    use crate::rational::{frac, q};

    fn scalar_spec(vals: &[(&[usize], i64)], s: usize, degree: usize) -> CumulantSpec {
        let mut f = CumulantFamily::zero(s, degree, Arc::new(FiniteAlgebra::scalars()));
        for (w, v) in vals {
            f.coeffs.get_mut(*w).unwrap().table[0] = Elem(vec![q(*v)]);
        }
        CumulantSpec::from_family(f, None).unwrap()
    }

    #[test]
    fn recursion_matches_partition_sum() {
        let mut rng = crate::fixtures::rng(7);
        let base = Arc::new(FiniteAlgebra::diagonal(2));
        let f = CumulantFamily::random(&mut rng, 2, 4, base);
        let spec = CumulantSpec::from_family(f.clone(), None).unwrap();
        assert_eq!(spec.moment_family().unwrap(), cumulants_to_moments(&f).unwrap());
    }

    #[test]
    fn semicircle_sum() {
        let s = scalar_spec(&[(&[0, 0], 1)], 1, 4);
        let sum = free_add_via_moments(&s, &s).unwrap();
        let m = sum.moment_family().unwrap();
        assert_eq!(m.coeffs[&vec![0, 0]].table[0], Elem(vec![q(2)]));
        assert_eq!(m.coeffs[&vec![0, 0, 0, 0]].table[0], Elem(vec![q(8)]));
        assert_eq!(sum, free_add(&s, &s).unwrap());
    }

    #[test]
    fn projection_cumulants() {
        let s = scalar_spec(&[(&[0], 1)], 1, 3);
        let a = frac(1, 3);
        let sp = adjoin_projection(&s, &a, "p").unwrap();
        let c = sp.cumulant_family().unwrap();
        let k = |n: usize| c.coeffs[&vec![1; n]].table[0].0[0].clone();
        assert_eq!(k(1), a);
        assert_eq!(k(2), &a - &a * &a);
        assert_eq!(k(3), &a - q(3) * &a * &a + q(2) * &a * &a * &a);
        assert!(adjoin_projection(&s, &q(0), "p").is_err());
    }

    #[test]
    fn projection_words_collapse() {
        let s = scalar_spec(&[(&[0], 2), (&[0, 0], 1)], 1, 3);
        let sp = adjoin_projection(&s, &frac(1, 2), "p").unwrap();
        let one = Elem(vec![q(1)]);
        let ppp = sp.joint_moment(&[1, 1, 1], &[one.clone(), one.clone()]).unwrap();
        assert_eq!(ppp, Elem(vec![frac(1, 2)]));
        // φ(pxp) = φ(px) = φ(p)φ(x) for free p, x
        let pxp = sp.joint_moment(&[1, 0, 1], &[one.clone(), one]).unwrap();
        assert_eq!(pxp, Elem(vec![q(1)]));
    }

    #[test]
    fn mixed_cumulant_breaks_freeness() {
        let spec = scalar_spec(&[(&[0, 1], 1)], 2, 2);
        assert!(!are_free(&spec, &[vec![0], vec![1]]).unwrap());
        let u = free_union(&scalar_spec(&[(&[0], 1)], 1, 2), &disjoint(&scalar_spec(&[(&[0], 1)], 1, 2))).unwrap();
        assert!(are_free(&u, &[vec![0], vec![1]]).unwrap());
        assert_eq!(enumerate_nc(2).unwrap().len(), 2);
    }
}
