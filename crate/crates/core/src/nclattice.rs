//! Noncrossing partitions, the refinement lattice NC(n), its incidence
//! algebra, Kreweras complements and alternating unions.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::config;
use crate::error::{Error, Result};
use crate::rational::Q;

/// A noncrossing partition of `{1..n}` in canonical form: blocks ascending,
/// ordered by least element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawPartition", into = "RawPartition")]
pub struct NcPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RawPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl TryFrom<RawPartition> for NcPartition {
    type Error = Error;
    fn try_from(r: RawPartition) -> Result<Self> {
        NcPartition::new(r.n, r.blocks)
    }
}

impl From<NcPartition> for RawPartition {
    fn from(p: NcPartition) -> Self {
        RawPartition { n: p.n, blocks: p.blocks }
    }
}

impl NcPartition {
    /// Validates and canonicalizes. Blocks may arrive in any order.
    pub fn new(n: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Range("ground set must be nonempty".into()));
        }
        let mut seen = vec![false; n + 1];
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::Structure("empty block".into()));
            }
            b.sort_unstable();
            for &v in b.iter() {
                if v == 0 || v > n {
                    return Err(Error::Structure(format!("element {v} outside 1..{n}")));
                }
                if seen[v] {
                    return Err(Error::Structure(format!("element {v} repeated")));
                }
                seen[v] = true;
            }
        }
        if seen[1..].iter().any(|s| !s) {
            return Err(Error::Structure("blocks do not cover the ground set".into()));
        }
        blocks.sort();
        let p = NcPartition { n, blocks };
        if let Some((a, b, c, d)) = p.crossing() {
            return Err(Error::Structure(format!("crossing {a}<{b}<{c}<{d}")));
        }
        Ok(p)
    }

    /// Accepts any set partition, crossing or not. Used by brute-force oracles.
    pub fn unchecked(n: usize, mut blocks: Vec<Vec<usize>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort();
        NcPartition { n, blocks }
    }

    pub fn zero(n: usize) -> Self {
        NcPartition { n, blocks: (1..=n).map(|i| vec![i]).collect() }
    }

    pub fn one(n: usize) -> Self {
        NcPartition { n, blocks: vec![(1..=n).collect()] }
    }

    /// Parses `[[1,3],[2]]`.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let blocks: Vec<Vec<usize>> =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("partition {s:?}: {e}")))?;
        Self::new(n, blocks)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `labels[v]` is the block index of `v` (index 0 unused).
    pub fn labels(&self) -> Vec<usize> {
        let mut lab = vec![usize::MAX; self.n + 1];
        for (i, b) in self.blocks.iter().enumerate() {
            for &v in b {
                lab[v] = i;
            }
        }
        lab
    }

    /// A witness `a<b<c<d` with a,c in one block and b,d in another.
    pub fn crossing(&self) -> Option<(usize, usize, usize, usize)> {
        let arcs: Vec<(usize, usize)> =
            self.blocks.iter().flat_map(|b| b.windows(2).map(|w| (w[0], w[1]))).collect();
        for &(a, c) in &arcs {
            for &(b, d) in &arcs {
                if a < b && b < c && c < d {
                    return Some((a, b, c, d));
                }
            }
        }
        None
    }

    pub fn is_noncrossing(&self) -> bool {
        self.crossing().is_none()
    }

    /// Every block of `self` lies inside a block of `other`.
    pub fn leq(&self, other: &NcPartition) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::Dimension(format!("NC({}) vs NC({})", self.n, other.n)));
        }
        let lab = other.labels();
        Ok(self.blocks.iter().all(|b| b.iter().all(|&v| lab[v] == lab[b[0]])))
    }

    /// Index of a block that is an interval `l..=r`, choosing the leftmost
    /// block with no other block nested inside it.
    pub fn leftmost_interval_block(&self) -> usize {
        self.blocks
            .iter()
            .position(|b| b.windows(2).all(|w| w[1] == w[0] + 1))
            .expect("every noncrossing partition has an interval block")
    }
}

impl fmt::Display for NcPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", serde_json::to_string(&self.blocks).unwrap())
    }
}

/// All noncrossing partitions of the interval `lo..=hi` (possibly empty).
fn gen_interval(lo: usize, hi: usize) -> Vec<Vec<Vec<usize>>> {
    if lo > hi {
        return vec![vec![]];
    }
    let rest: Vec<usize> = (lo + 1..=hi).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << rest.len()) {
        let mut block = vec![lo];
        block.extend(rest.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v));
        let mut gaps = Vec::new();
        for w in block.windows(2) {
            gaps.push((w[0] + 1, w[1] - 1));
        }
        gaps.push((block[block.len() - 1] + 1, hi));
        let mut partial: Vec<Vec<Vec<usize>>> = vec![vec![block.clone()]];
        for (a, b) in gaps {
            let fills = gen_interval(a, b);
            partial = partial
                .iter()
                .flat_map(|p| {
                    fills.iter().map(move |f| {
                        let mut q = p.clone();
                        q.extend(f.iter().cloned());
                        q
                    })
                })
                .collect();
        }
        out.extend(partial);
    }
    out
}

/// NC(n) with order relation and Möbius data, built once per n.
#[derive(Debug)]
pub struct NcLattice {
    pub n: usize,
    parts: Vec<NcPartition>,
    index: HashMap<NcPartition, usize>,
    leq: Vec<Vec<bool>>,
    mobius_cols: Mutex<HashMap<usize, Arc<Vec<Q>>>>,
    kreweras: Mutex<HashMap<usize, usize>>,
}

impl NcLattice {
    fn build(n: usize) -> Self {
        let mut parts: Vec<NcPartition> =
            gen_interval(1, n).into_iter().map(|b| NcPartition::unchecked(n, b)).collect();
        parts.sort();
        let index = parts.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let labels: Vec<Vec<usize>> = parts.iter().map(|p| p.labels()).collect();
        let leq = parts
            .iter()
            .map(|a| {
                labels
                    .iter()
                    .map(|lab| a.blocks.iter().all(|b| b.iter().all(|&v| lab[v] == lab[b[0]])))
                    .collect()
            })
            .collect();
        NcLattice {
            n,
            parts,
            index,
            leq,
            mobius_cols: Mutex::new(HashMap::new()),
            kreweras: Mutex::new(HashMap::new()),
        }
    }

    pub fn partitions(&self) -> &[NcPartition] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn index_of(&self, p: &NcPartition) -> Result<usize> {
        self.index
            .get(p)
            .copied()
            .ok_or_else(|| Error::Dimension(format!("{p} is not in NC({})", self.n)))
    }

    pub fn leq_idx(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    /// Column μ(·, π) computed by μ(θ,π) = −Σ_{θ<σ≤π} μ(σ,π).
    fn mobius_column(&self, top: usize) -> Arc<Vec<Q>> {
        if let Some(c) = self.mobius_cols.lock().unwrap().get(&top) {
            return c.clone();
        }
        let mut order: Vec<usize> = (0..self.len()).filter(|&s| self.leq[s][top]).collect();
        // coarser first: fewer blocks
        order.sort_by_key(|&s| self.parts[s].len());
        let mut col = vec![Q::zero(); self.len()];
        for (pos, &t) in order.iter().enumerate() {
            if t == top {
                col[t] = Q::one();
                continue;
            }
            let mut acc = Q::zero();
            for &s in &order[..pos] {
                if s != t && self.leq[t][s] {
                    acc += &col[s];
                }
            }
            col[t] = -acc;
        }
        let col = Arc::new(col);
        self.mobius_cols.lock().unwrap().insert(top, col.clone());
        col
    }

    pub fn mobius_idx(&self, a: usize, b: usize) -> Q {
        if !self.leq[a][b] {
            return Q::zero();
        }
        self.mobius_column(b)[a].clone()
    }

    /// μ(π, 1ₙ) for every π, in lattice order.
    pub fn mobius_to_top(&self) -> Arc<Vec<Q>> {
        self.mobius_column(self.index[&NcPartition::one(self.n)])
    }

    pub fn kreweras_idx(&self, a: usize) -> usize {
        if let Some(&k) = self.kreweras.lock().unwrap().get(&a) {
            return k;
        }
        let pi = &self.parts[a];
        let k = (0..self.len())
            .filter(|&s| interleave(pi, &self.parts[s]).is_noncrossing())
            .min_by_key(|&s| self.parts[s].len())
            .expect("0ₙ always interleaves");
        self.kreweras.lock().unwrap().insert(a, k);
        k
    }
}

fn interleave(pi: &NcPartition, sigma: &NcPartition) -> NcPartition {
    let mut blocks: Vec<Vec<usize>> =
        pi.blocks.iter().map(|b| b.iter().map(|&v| 2 * v - 1).collect()).collect();
    blocks.extend(sigma.blocks.iter().map(|b| b.iter().map(|&v| 2 * v).collect()));
    NcPartition::unchecked(2 * pi.n, blocks)
}

static LATTICES: OnceLock<Mutex<HashMap<usize, Arc<NcLattice>>>> = OnceLock::new();

/// The cached lattice NC(n). Construction is serialized behind one lock.
pub fn lattice(n: usize) -> Result<Arc<NcLattice>> {
    let cap = config::max_n();
    if n == 0 || n > cap {
        return Err(Error::Range(format!("n={n} outside 1..={cap} (raise with --max-n or NCPROB_MAX_N)")));
    }
    let cache = LATTICES.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    Ok(guard.entry(n).or_insert_with(|| Arc::new(NcLattice::build(n))).clone())
}

/// Every element of NC(n), lexicographic on canonical block lists.
pub fn enumerate_nc(n: usize) -> Result<Vec<NcPartition>> {
    Ok(lattice(n)?.partitions().to_vec())
}

pub fn leq(theta: &NcPartition, pi: &NcPartition) -> Result<bool> {
    theta.leq(pi)
}

pub fn mobius(theta: &NcPartition, pi: &NcPartition) -> Result<Q> {
    if theta.n != pi.n {
        return Err(Error::Dimension(format!("NC({}) vs NC({})", theta.n, pi.n)));
    }
    let l = lattice(theta.n)?;
    Ok(l.mobius_idx(l.index_of(theta)?, l.index_of(pi)?))
}

pub fn kreweras(pi: &NcPartition) -> Result<NcPartition> {
    let l = lattice(pi.n)?;
    Ok(l.partitions()[l.kreweras_idx(l.index_of(pi)?)].clone())
}

/// π on odd points 2i−1, σ on even points 2i.
pub fn alternating_union(pi: &NcPartition, sigma: &NcPartition) -> Result<NcPartition> {
    if pi.n != sigma.n {
        return Err(Error::Dimension(format!("NC({}) vs NC({})", pi.n, sigma.n)));
    }
    let u = interleave(pi, sigma);
    match u.crossing() {
        Some((a, b, c, d)) => Err(Error::Structure(format!(
            "interleave crosses at {a}<{b}<{c}<{d}; σ is not below Kr(π)"
        ))),
        None => Ok(u),
    }
}

/// Partitions of `{1..n+1}` with `{1}` a singleton, paired with their image in NC(n).
pub fn nc_prime(n: usize) -> Result<Vec<(NcPartition, NcPartition)>> {
    let small = enumerate_nc(n)?;
    Ok(small
        .into_iter()
        .map(|p| {
            let mut blocks = vec![vec![1]];
            blocks.extend(p.blocks.iter().map(|b| b.iter().map(|v| v + 1).collect()));
            (NcPartition::unchecked(n + 1, blocks), p)
        })
        .collect())
}

/// A function on comparable pairs of NC(n), stored densely in lattice order.
#[derive(Debug, Clone, PartialEq)]
pub struct IncidenceFunction {
    pub n: usize,
    size: usize,
    values: Vec<Q>,
}

impl IncidenceFunction {
    /// Values outside `θ ≤ π` are forced to zero.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Q) -> Result<Self> {
        let l = lattice(n)?;
        let size = l.len();
        let mut values = vec![Q::zero(); size * size];
        for a in 0..size {
            for b in 0..size {
                if l.leq_idx(a, b) {
                    values[a * size + b] = f(a, b);
                }
            }
        }
        Ok(IncidenceFunction { n, size, values })
    }

    pub fn zeta(n: usize) -> Result<Self> {
        Self::from_fn(n, |_, _| Q::one())
    }

    pub fn delta(n: usize) -> Result<Self> {
        Self::from_fn(n, |a, b| if a == b { Q::one() } else { Q::zero() })
    }

    pub fn mobius(n: usize) -> Result<Self> {
        let l = lattice(n)?;
        Self::from_fn(n, |a, b| l.mobius_idx(a, b))
    }

    pub fn get(&self, a: usize, b: usize) -> &Q {
        &self.values[a * self.size + b]
    }

    pub fn value(&self, theta: &NcPartition, pi: &NcPartition) -> Result<Q> {
        let l = lattice(self.n)?;
        Ok(self.get(l.index_of(theta)?, l.index_of(pi)?).clone())
    }

    /// (η₁ ∗ η₂)(θ,π) = Σ_{θ≤σ≤π} η₁(θ,σ) η₂(σ,π).
    pub fn convolve(&self, other: &IncidenceFunction) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::Dimension(format!("I(NC({})) vs I(NC({}))", self.n, other.n)));
        }
        let l = lattice(self.n)?;
        Self::from_fn(self.n, |a, b| {
            let mut acc = Q::zero();
            for s in 0..self.size {
                if l.leq_idx(a, s) && l.leq_idx(s, b) {
                    acc += self.get(a, s) * other.get(s, b);
                }
            }
            acc
        })
    }
}

/// Order-indicator matrix ζ(a,b) = [a ≤ b] in lattice order.
pub fn zeta_matrix(n: usize) -> Result<crate::linalg::Matrix> {
    let l = lattice(n)?;
    let mut m = crate::linalg::Matrix::zeros(l.len(), l.len());
    for a in 0..l.len() {
        for b in 0..l.len() {
            if l.leq_idx(a, b) {
                m.set(a, b, Q::one());
            }
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn small_counts_and_order() {
        assert_eq!(enumerate_nc(1).unwrap(), vec![NcPartition::one(1)]);
        let three = enumerate_nc(3).unwrap();
        assert_eq!(three.len(), 5);
        let mut sorted = three.clone();
        sorted.sort();
        assert_eq!(three, sorted);
    }

    #[test]
    fn crossing_is_rejected() {
        assert!(NcPartition::new(4, vec![vec![1, 3], vec![2, 4]]).is_err());
        assert!(NcPartition::new(3, vec![vec![1], vec![2]]).is_err());
        let p = NcPartition::parse(3, "[[2],[3,1]]").unwrap();
        assert_eq!(p.to_string(), "[[1,3],[2]]");
    }

    #[test]
    fn mobius_examples() {
        assert_eq!(mobius(&NcPartition::zero(2), &NcPartition::one(2)).unwrap(), q(-1));
        assert_eq!(mobius(&NcPartition::zero(4), &NcPartition::one(4)).unwrap(), q(-5));
        let l = lattice(4).unwrap();
        let col = l.mobius_to_top();
        for (i, p) in l.partitions().iter().enumerate() {
            assert_eq!(col[i], mobius(p, &NcPartition::one(4)).unwrap(), "{p}");
        }
        let a = NcPartition::parse(3, "[[1,2],[3]]").unwrap();
        let b = NcPartition::parse(3, "[[1,3],[2]]").unwrap();
        assert!(!a.leq(&b).unwrap());
        assert_eq!(mobius(&a, &b).unwrap(), q(0));
    }

    #[test]
    fn kreweras_extremes() {
        for n in 1..=5 {
            assert_eq!(kreweras(&NcPartition::zero(n)).unwrap(), NcPartition::one(n));
            assert_eq!(kreweras(&NcPartition::one(n)).unwrap(), NcPartition::zero(n));
        }
    }

    #[test]
    fn alternating_union_cases() {
        let u = alternating_union(&NcPartition::one(1), &NcPartition::one(1)).unwrap();
        assert_eq!(u.blocks(), &[vec![1], vec![2]]);
        // 0ₙ against 1ₙ nests; 1ₙ against 1ₙ crosses at 1<2<3<4
        assert!(alternating_union(&NcPartition::zero(2), &NcPartition::one(2)).is_ok());
        assert!(alternating_union(&NcPartition::one(2), &NcPartition::one(2)).is_err());
    }

    #[test]
    fn nc_prime_small() {
        let p = nc_prime(1).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].0.blocks(), &[vec![1], vec![2]]);
        let p3 = nc_prime(3).unwrap();
        assert_eq!(p3.len(), 5);
        assert!(p3.iter().all(|(t, _)| t.blocks().contains(&vec![1]) && t.is_noncrossing()));
    }

    #[test]
    fn range_errors_name_the_bound() {
        let e = lattice(0).unwrap_err();
        assert!(matches!(e, Error::Range(_)));
        let e = lattice(config::max_n() + 1).unwrap_err();
        assert!(e.to_string().contains(&config::max_n().to_string()));
    }
}
