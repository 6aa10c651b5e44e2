//! Builders for the shipped fixtures: concrete towers and ladders of matrix
//! algebras, chains of projections, and abstract specs (free, dependent,
//! layered, with chains). Everything is deterministic given its seed.

use std::sync::Arc;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactalg::{chain_tower, ConditionalExpectation, Elem, FiniteAlgebra, Ladder, Tower};
use crate::freemodel::{adjoin_chain, adjoin_projection, free_union, CompositeMoments, CumulantSpec, Poly};
use crate::freemodel::composite_moment_family;
use crate::linalg::Matrix;
use crate::multifunc::{basis_words, moments_to_cumulants, CumulantFamily};
use crate::rational::{frac, q, Q};
use crate::series::boxed_coefficient;
use crate::towerops::LayeredSpec;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Expectation given by a matrix-valued formula; `target` must sit inside
/// `source` as matrices.
pub fn restriction(
    source: &Arc<FiniteAlgebra>,
    target: &Arc<FiniteAlgebra>,
    f: impl Fn(&Matrix) -> Result<Matrix> + 'static,
) -> Result<ConditionalExpectation> {
    let inc = source.inclusion_of(target)?;
    let t = target.clone();
    ConditionalExpectation::from_fn(source.clone(), target.clone(), inc, move |x| t.coords_of(&f(x)?))
}

/// Scalar-valued functional, with ℚ embedded along the unit.
pub fn state(source: &Arc<FiniteAlgebra>, f: impl Fn(&Matrix) -> Q + 'static) -> Result<ConditionalExpectation> {
    let inc = Matrix::from_columns(source.dim(), std::slice::from_ref(&source.unit.0));
    ConditionalExpectation::from_fn(source.clone(), Arc::new(FiniteAlgebra::scalars()), inc, move |x| Ok(Elem(vec![f(x)])))
}

/// Σ w_i x_ii.
pub fn weighted_trace(source: &Arc<FiniteAlgebra>, w: Vec<Q>) -> Result<ConditionalExpectation> {
    state(source, move |x| w.iter().enumerate().map(|(i, wi)| wi * x.get(i, i)).sum())
}

pub fn diagonal_part(x: &Matrix) -> Result<Matrix> {
    Ok(Matrix::diag(&(0..x.rows).map(|i| x.get(i, i).clone()).collect::<Vec<_>>()))
}

fn block_part(x: &Matrix, size: usize) -> Result<Matrix> {
    let mut y = x.clone();
    for i in 0..x.rows {
        for j in 0..x.cols {
            if i / size != j / size {
                y.set(i, j, Q::zero());
            }
        }
    }
    Ok(y)
}

/// span{diag(1,1,0,0), diag(0,0,1,1)} in M₄.
pub fn two_blocks() -> FiniteAlgebra {
    let d = |v: [i64; 4]| Matrix::diag(&v.map(q));
    FiniteAlgebra::span(4, vec![d([1, 1, 0, 0]), d([0, 0, 1, 1])], "B2").expect("closed")
}

/// M₂ ⊕ M₂ inside M₄.
pub fn block_diagonal() -> FiniteAlgebra {
    let basis = [(0, 0), (0, 1), (1, 0), (1, 1), (2, 2), (2, 3), (3, 2), (3, 3)]
        .into_iter()
        .map(|(i, j)| Matrix::unit(4, i, j))
        .collect();
    FiniteAlgebra::span(4, basis, "M2+M2").expect("closed")
}

fn scalars_in(m: usize) -> FiniteAlgebra {
    FiniteAlgebra::span(m, vec![Matrix::identity(m)], "Q1").expect("closed")
}

/// d ↦ (u d₁ + (1−u) d₂)·P + (v d₃ + (1−v) d₄)·Q from D₄ onto span{P, Q}.
fn block_average(d4: &Arc<FiniteAlgebra>, b: &Arc<FiniteAlgebra>, u: Q, v: Q) -> Result<ConditionalExpectation> {
    restriction(d4, b, move |x| {
        let top = &u * x.get(0, 0) + (q(1) - &u) * x.get(1, 1);
        let bot = &v * x.get(2, 2) + (q(1) - &v) * x.get(3, 3);
        Ok(Matrix::diag(&[top.clone(), top, bot.clone(), bot]))
    })
}

/// B = span{P, Q} ⊂ D₄ ⊂ M₂⊕M₂ ⊂ M₄ with weighted averages at the bottom and
/// diagonal and block restrictions above.
pub fn tower3() -> Result<Tower> {
    let b = Arc::new(two_blocks());
    let d4 = Arc::new(FiniteAlgebra::diagonal(4));
    let m22 = Arc::new(block_diagonal());
    let m4 = Arc::new(FiniteAlgebra::full_matrix(4));
    let phi0 = weighted_trace(&b, vec![frac(1, 6), frac(1, 6), frac(1, 3), frac(1, 3)])?;
    let phi1 = block_average(&d4, &b, frac(1, 3), frac(3, 4))?;
    let phi2 = restriction(&m22, &d4, diagonal_part)?;
    let phi3 = restriction(&m4, &m22, |x| block_part(x, 2))?;
    Tower::new(vec![b, d4, m22, m4], vec![phi0, phi1, phi2, phi3])
}

/// Positive weights with sum 1.
fn random_weights(rng: &mut impl Rng, n: usize) -> Vec<Q> {
    let raw: Vec<Q> = (0..n).map(|_| q(rng.gen_range(1..=4))).collect();
    let total: Q = raw.iter().sum();
    raw.into_iter().map(|r| r / &total).collect()
}

/// B ⊂ D₄ ⊂ M₄ with B = ℚ·1 (`b_dim` 1) or span{P, Q} (`b_dim` 2) and
/// random weights in the lower two maps.
pub fn random_two_level_tower(rng: &mut impl Rng, b_dim: usize) -> Result<Tower> {
    let d4 = Arc::new(FiniteAlgebra::diagonal(4));
    let m4 = Arc::new(FiniteAlgebra::full_matrix(4));
    let phi2 = restriction(&m4, &d4, diagonal_part)?;
    let (b, phi0, phi1) = match b_dim {
        1 => {
            let b = Arc::new(scalars_in(4));
            let phi0 = state(&b, |x| x.get(0, 0).clone())?;
            let w = random_weights(rng, 4);
            let phi1 = restriction(&d4, &b, move |x| {
                let v: Q = (0..4).map(|i| &w[i] * x.get(i, i)).sum();
                Ok(Matrix::identity(4).scale(&v))
            })?;
            (b, phi0, phi1)
        }
        2 => {
            let b = Arc::new(two_blocks());
            let w = random_weights(rng, 2);
            let phi0 = weighted_trace(&b, vec![w[0].clone(), Q::zero(), w[1].clone(), Q::zero()])?;
            let (u, v) = (random_weights(rng, 2).remove(0), random_weights(rng, 2).remove(0));
            (b.clone(), phi0, block_average(&d4, &b, u, v)?)
        }
        _ => return Err(Error::Range(format!("base dimension {b_dim} (1 or 2 supported)"))),
    };
    Tower::new(vec![b, d4, m4], vec![phi0, phi1, phi2])
}

/// Elements of `a` with small random rational coordinates.
pub fn random_elements(rng: &mut impl Rng, a: &FiniteAlgebra, count: usize) -> Vec<Elem> {
    (0..count).map(|_| crate::multifunc::random_elem(rng, a.dim())).collect()
}

/// (φ, chain, φ₀) with a scalar-valued φ on `a`.
pub struct ChainFixture {
    pub name: &'static str,
    pub phi: ConditionalExpectation,
    pub chain: Vec<Elem>,
    pub phi0: ConditionalExpectation,
}

fn diag_elem(a: &FiniteAlgebra, d: &[i64]) -> Result<Elem> {
    a.coords_of(&Matrix::diag(&d.iter().map(|&v| q(v)).collect::<Vec<_>>()))
}

fn unit_state() -> Result<ConditionalExpectation> {
    state(&Arc::new(FiniteAlgebra::scalars()), |x| x.get(0, 0).clone())
}

/// Normalized trace on M₄ with p₁ = diag(1,1,0,0), p₂ = diag(1,1,1,0).
pub fn trace_chain() -> Result<ChainFixture> {
    let a = Arc::new(FiniteAlgebra::full_matrix(4));
    let phi = weighted_trace(&a, vec![frac(1, 4); 4])?;
    let chain = vec![diag_elem(&a, &[1, 1, 0, 0])?, diag_elem(&a, &[1, 1, 1, 0])?];
    Ok(ChainFixture { name: "trace-m4", phi, chain, phi0: unit_state()? })
}

/// Weighted state (1/6, 1/3, 1/2) on M₃ with a full flag ending at 1.
pub fn weighted_chain() -> Result<ChainFixture> {
    let a = Arc::new(FiniteAlgebra::full_matrix(3));
    let phi = weighted_trace(&a, vec![frac(1, 6), frac(1, 3), frac(1, 2)])?;
    let chain = vec![diag_elem(&a, &[1, 0, 0])?, diag_elem(&a, &[1, 1, 0])?, diag_elem(&a, &[1, 1, 1])?];
    Ok(ChainFixture { name: "weighted-m3", phi, chain, phi0: unit_state()? })
}

pub fn chain_fixtures() -> Result<Vec<ChainFixture>> {
    Ok(vec![trace_chain()?, weighted_chain()?])
}

/// The trace chain on M₄ over the diagonal D₄: the lower tower repeats the
/// construction inside D₄ and the rungs are diagonal restrictions.
/// Returns the ladder and the chain values α_j.
pub fn diagonal_ladder() -> Result<(Ladder, Vec<Q>)> {
    let upper_fx = trace_chain()?;
    let (upper, alphas) = chain_tower(&upper_fx.phi, &upper_fx.chain, &upper_fx.phi0)?;
    let d4 = Arc::new(FiniteAlgebra::diagonal(4));
    let phi_d = weighted_trace(&d4, vec![frac(1, 4); 4])?;
    let chain_d = vec![diag_elem(&d4, &[1, 1, 0, 0])?, diag_elem(&d4, &[1, 1, 1, 0])?];
    let (lower, _) = chain_tower(&phi_d, &chain_d, &unit_state()?)?;
    let mut rungs = vec![ConditionalExpectation::identity(upper.levels[0].clone())];
    for j in 1..=upper.depth() {
        rungs.push(restriction(&upper.levels[j], &lower.levels[j], diagonal_part)?);
    }
    Ok((Ladder::new(upper, lower, rungs)?, alphas))
}

/// The diagonal ladder with one entry of the first corner rung changed: an
/// off-diagonal matrix unit is sent to a nonzero diagonal element.
pub fn perturbed_ladder() -> Result<(Ladder, Vec<Q>)> {
    let (mut ladder, alphas) = diagonal_ladder()?;
    let rung = &mut ladder.rungs[1];
    let col = (0..rung.matrix.cols)
        .find(|&c| rung.matrix.column(c).iter().all(Q::is_zero))
        .ok_or_else(|| Error::Invariant("rung has no zero column".into()))?;
    rung.matrix.set(0, col, q(1));
    Ok((ladder, alphas))
}

fn scalar_family(vals: &[(&[usize], Q)], s: usize, degree: usize) -> CumulantFamily {
    let mut f = CumulantFamily::zero(s, degree, Arc::new(FiniteAlgebra::scalars()));
    for (w, v) in vals {
        f.coeffs.get_mut(*w).expect("word within degree").table[0] = Elem(vec![v.clone()]);
    }
    f
}

fn single(f: CumulantFamily, label: &str) -> Result<CumulantSpec> {
    CumulantSpec::from_family(f, Some(vec![label.into()]))
}

/// Standard semicircular: κ₂ = 1, all others 0.
pub fn semicircle(label: &str, degree: usize) -> Result<CumulantSpec> {
    single(scalar_family(&[(&[0, 0], q(1))], 1, degree), label)
}

/// Free Poisson with rate λ: every cumulant equals λ.
pub fn free_poisson(label: &str, rate: Q, degree: usize) -> Result<CumulantSpec> {
    let words: Vec<Vec<usize>> = (1..=degree).map(|n| vec![0; n]).collect();
    let vals: Vec<(&[usize], Q)> = words.iter().map(|w| (w.as_slice(), rate.clone())).collect();
    single(scalar_family(&vals, 1, degree), label)
}

/// Random family in `s` variables over `base`.
pub fn random_spec(rng: &mut impl Rng, labels: &[&str], degree: usize, base: Arc<FiniteAlgebra>) -> Result<CumulantSpec> {
    let f = CumulantFamily::random(rng, labels.len(), degree, base);
    CumulantSpec::from_family(f, Some(labels.iter().map(|l| l.to_string()).collect()))
}

pub fn base_of_dim(d: usize) -> Result<Arc<FiniteAlgebra>> {
    match d {
        1 => Ok(Arc::new(FiniteAlgebra::scalars())),
        d if d >= 2 => Ok(Arc::new(FiniteAlgebra::diagonal(d))),
        _ => Err(Error::Range("base dimension must be positive".into())),
    }
}

/// x (letters 0..s) and y (letters s..2s), free over the base.
pub fn random_free_pair(rng: &mut impl Rng, s: usize, degree: usize, b_dim: usize) -> Result<CumulantSpec> {
    let base = base_of_dim(b_dim)?;
    let xs: Vec<String> = (1..=s).map(|i| format!("x{i}")).collect();
    let ys: Vec<String> = (1..=s).map(|i| format!("y{i}")).collect();
    let x = random_spec(rng, &xs.iter().map(String::as_str).collect::<Vec<_>>(), degree, base.clone())?;
    let y = random_spec(rng, &ys.iter().map(String::as_str).collect::<Vec<_>>(), degree, base)?;
    free_union(&x, &y)
}

/// Semicircular x at level 1, free Poisson y at level 2, depth 3.
pub fn scalar_layers_free() -> Result<LayeredSpec> {
    let u = free_union(&semicircle("x", 4)?, &free_poisson("y", q(2), 4)?)?;
    LayeredSpec::new(u, vec![1, 2], 3)
}

/// x at level 1 and y at level 2 with κ(x, y) = κ(y, x) = 1.
pub fn scalar_layers_dependent() -> Result<LayeredSpec> {
    let f = scalar_family(
        &[(&[0], q(1)), (&[0, 0], q(1)), (&[1], q(2)), (&[1, 1], q(1)), (&[0, 1], q(1)), (&[1, 0], q(1))],
        2,
        4,
    );
    let spec = CumulantSpec::from_family(f, Some(vec!["x".into(), "y".into()]))?;
    LayeredSpec::new(spec, vec![1, 2], 3)
}

const LAYER_SEED: u64 = 2024;

/// Random x, y over D₂, free, at levels 1 and 2 of a depth-3 tower.
pub fn amalgamated_layers_free() -> Result<LayeredSpec> {
    let mut r = rng(LAYER_SEED);
    let base = base_of_dim(2)?;
    let x = random_spec(&mut r, &["x"], 3, base.clone())?;
    let y = random_spec(&mut r, &["y"], 3, base)?;
    LayeredSpec::new(free_union(&x, &y)?, vec![1, 2], 3)
}

/// One random joint table over D₂ for x, y: mixed cumulants do not vanish.
pub fn amalgamated_layers_dependent() -> Result<LayeredSpec> {
    let mut r = rng(LAYER_SEED + 1);
    let spec = random_spec(&mut r, &["x", "y"], 3, base_of_dim(2)?)?;
    LayeredSpec::new(spec, vec![1, 2], 3)
}

/// Free x, y over `b_dim`-dimensional B with a free projection p, φ(p) = α·1.
pub fn compression_spec(seed: u64, b_dim: usize, degree: usize, alpha: &Q) -> Result<CumulantSpec> {
    let pair = random_free_pair(&mut rng(seed), 1, degree, b_dim)?;
    adjoin_projection(&pair, alpha, "p")
}

/// Free scalar x, y with a free chain p₁ ≤ … of values `alphas`.
pub fn chain_spec(seed: u64, degree: usize, alphas: &[Q]) -> Result<CumulantSpec> {
    let pair = random_free_pair(&mut rng(seed), 1, degree, 1)?;
    let b0s = alphas.iter().map(|a| pair.base.scalar(a)).collect();
    let labels = (1..=alphas.len()).map(|j| format!("p{j}")).collect();
    adjoin_chain(&pair, b0s, labels)
}

/// Weighted states on D₂: (w, 1−w).
pub fn diagonal_state(w: Q) -> Result<ConditionalExpectation> {
    let b = base_of_dim(2)?;
    let rest = q(1) - &w;
    weighted_trace(&b, vec![w, rest])
}

/// Free x, y over D₂ whose product R-transform differs from the boxed
/// formula once the y-slots carry the same non-unit arguments as the x-slots.
#[derive(Debug, Clone)]
pub struct BoxedCounterexample {
    pub spec: CumulantSpec,
    pub word: Vec<usize>,
    pub b: Vec<Elem>,
    /// R_{xy} at (word, b).
    pub actual: Elem,
    /// The boxed sum with b′ = b.
    pub unrestricted: Elem,
}

/// Coefficient-vector decoding for the brute-force search: 0/1 entries.
fn family_from_bits(bits: u32, base: &Arc<FiniteAlgebra>) -> CumulantFamily {
    let mut f = CumulantFamily::zero(1, 2, base.clone());
    let mut k = 0;
    for w in [vec![0], vec![0, 0]] {
        for e in f.coeffs.get_mut(&w).expect("degree 2").table.iter_mut() {
            for c in e.0.iter_mut() {
                *c = q(i64::from(bits >> k & 1));
                k += 1;
            }
        }
    }
    f
}

fn candidate(bx: u32, by: u32) -> Result<Option<BoxedCounterexample>> {
    let base = base_of_dim(2)?;
    let fx = family_from_bits(bx, &base);
    let fy = family_from_bits(by, &base);
    let spec = free_union(&single(fx.clone(), "x")?, &single(fy.clone(), "y")?)?;
    let src = CompositeMoments::new(&spec, vec![Poly::monomial(vec![0, 1])])?;
    let r = moments_to_cumulants(&composite_moment_family(&src, 2)?)?;
    let word = vec![0, 0];
    for bw in basis_words(2, 1) {
        let b: Vec<Elem> = bw.iter().map(|&j| base.basis_elem(j)).collect();
        let actual = r.coeffs[&word].eval(&b)?;
        let unrestricted = boxed_coefficient(&fx, &fy, &word, &b, &b)?;
        if actual != unrestricted {
            return Ok(Some(BoxedCounterexample { spec, word, b, actual, unrestricted }));
        }
    }
    Ok(None)
}

/// Smallest 0/1 pair of degree-2 families over D₂ (in bit order) witnessing
/// the failure of the unrestricted boxed formula.
pub fn search_boxed_counterexample() -> Result<(u32, u32)> {
    for bx in 0..64 {
        for by in 0..64 {
            if candidate(bx, by)?.is_some() {
                return Ok((bx, by));
            }
        }
    }
    Err(Error::Invariant("no counterexample among 0/1 families".into()))
}

/// Frozen result of [`search_boxed_counterexample`].
pub const BOXED_COUNTEREXAMPLE_BITS: (u32, u32) = (8, 3);

pub fn boxed_counterexample() -> Result<BoxedCounterexample> {
    let (bx, by) = BOXED_COUNTEREXAMPLE_BITS;
    candidate(bx, by)?.ok_or_else(|| Error::Invariant("frozen counterexample no longer separates".into()))
}

/// Seeds for the randomized two-level towers behind the lemma fixtures.
pub const LEMMA_SEEDS: [(u64, usize); 2] = [(11, 1), (12, 2)];

/// A random two-level tower with two random elements of the top level.
pub fn lemma_fixture(seed: u64, b_dim: usize) -> Result<(Tower, Vec<Elem>)> {
    let mut r = rng(seed);
    let t = random_two_level_tower(&mut r, b_dim)?;
    let xs = random_elements(&mut r, &t.levels[2], 2);
    Ok((t, xs))
}

/// Projection weights of the compression fixtures.
pub fn compression_alphas() -> Vec<(&'static str, Q)> {
    vec![("a1", q(1)), ("a1-2", frac(1, 2)), ("a2-3", frac(2, 3))]
}

/// Chain values of the abstract chain fixtures: the ladder's (1/2, 3/4) and
/// a decreasing (1/2, 1/3) that only the abstract model can realize.
pub fn chain_alphas() -> Vec<(&'static str, Vec<Q>)> {
    vec![("ladder", vec![frac(1, 2), frac(3, 4)]), ("decreasing", vec![frac(1, 2), frac(1, 3)])]
}

pub fn lift_states() -> Vec<(&'static str, Q)> {
    vec![("first", q(1)), ("weighted", frac(1, 3))]
}

const CHAIN_SEED: u64 = 7;
const COMPRESSION_SEED: u64 = 3;
const LIFT_SEED: u64 = 5;

/// Every shipped fixture as (file name, JSON text).
pub fn catalog() -> Result<Vec<(String, String)>> {
    use crate::io::*;
    let mut out: Vec<(String, String)> = Vec::new();
    let mut put = |name: String, text: String| out.push((name, text));
    put("tower3.json".into(), to_json(&TowerDoc::from_tower(&tower3()?)));
    for (seed, d) in LEMMA_SEEDS {
        let (t, xs) = lemma_fixture(seed, d)?;
        put(format!("lemma-b{d}.json"), to_json(&LemmaDoc { tower: TowerDoc::from_tower(&t), level: 2, elements: elems_doc(&xs) }));
    }
    for fx in chain_fixtures()? {
        put(format!("chain-{}.json", fx.name), to_json(&ChainTowerDoc::new(&fx.phi, &fx.chain, &fx.phi0)));
    }
    let (ladder, alphas) = diagonal_ladder()?;
    put("ladder-diagonal.json".into(), to_json(&LadderDoc::from_ladder(&ladder, &alphas)));
    let (bad, _) = perturbed_ladder()?;
    put("ladder-perturbed.json".into(), to_json(&LadderDoc::from_ladder(&bad, &alphas)));
    put("levels-free.json".into(), to_json(&LayeredDoc::new(&scalar_layers_free()?, &["x"], &["y"])));
    put("levels-dependent.json".into(), to_json(&LayeredDoc::new(&scalar_layers_dependent()?, &["x"], &["y"])));
    put("amalgamated-free.json".into(), to_json(&LayeredDoc::new(&amalgamated_layers_free()?, &["x"], &["y"])));
    put("amalgamated-dependent.json".into(), to_json(&LayeredDoc::new(&amalgamated_layers_dependent()?, &["x"], &["y"])));
    let labels = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    for d in [1, 2] {
        for (name, alpha) in compression_alphas() {
            let spec = compression_spec(COMPRESSION_SEED + d as u64, d, 4, &alpha)?;
            let doc = CompressionDoc { spec: SpecDoc::from_spec(&spec), x: labels(&["x1"]), y: labels(&["y1"]), p: "p".into() };
            put(format!("compress-b{d}-{name}.json"), to_json(&doc));
        }
    }
    for (name, alphas) in chain_alphas() {
        let spec = chain_spec(CHAIN_SEED, 3, &alphas)?;
        let doc = ChainSpecDoc { spec: SpecDoc::from_spec(&spec), x: labels(&["x1"]), y: labels(&["y1"]), chain: labels(&["p1", "p2"]) };
        put(format!("chain-compression-{name}.json"), to_json(&doc));
    }
    let spec = chain_spec(CHAIN_SEED, 3, &alphas)?;
    let doc = LadderCompressionDoc {
        ladder: LadderDoc::from_ladder(&ladder, &alphas),
        spec: SpecDoc::from_spec(&spec),
        x: labels(&["x1"]),
        y: labels(&["y1"]),
        chain: labels(&["p1", "p2"]),
    };
    put("ladder-compression.json".into(), to_json(&doc));
    for (name, w) in lift_states() {
        let spec = random_free_pair(&mut rng(LIFT_SEED), 1, 3, 1)?;
        let doc = LiftDoc { spec: SpecDoc::from_spec(&spec), phi0: StateDoc::from_state(&diagonal_state(w)?), x: labels(&["x1"]), y: labels(&["y1"]) };
        put(format!("lift-{name}.json"), to_json(&doc));
    }
    let c = boxed_counterexample()?;
    let doc = CounterexampleDoc {
        spec: SpecDoc::from_spec(&c.spec),
        word: c.word.iter().map(|i| i + 1).collect(),
        b: elems_doc(&c.b),
        actual: crate::rational::serialize_vec(&c.actual.0),
        unrestricted: crate::rational::serialize_vec(&c.unrestricted.0),
    };
    put("boxed-counterexample.json".into(), to_json(&doc));
    Ok(out)
}
