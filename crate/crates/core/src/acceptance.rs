//! The acceptance suite: one entry per criterion, each run against the
//! bundled fixtures or seeded random data, with both sides of every
//! identity kept in the underlying reports.

use std::collections::BTreeSet;
use std::path::Path;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{chain_tower, ConditionalExpectation, Elem, Ladder, Tower};
use crate::fixtures::{self, catalog, random_free_pair, random_two_level_tower};
use crate::freemodel::{verify_free_pair, CumulantSpec};
use crate::io::*;
use crate::multifunc::{all_words, cumulants_to_moments, fmt_word, moments_to_cumulants, CumulantFamily};
use crate::nclattice::{lattice, IncidenceFunction, NcPartition};
use crate::oracle;
use crate::rational::{parse_vec, q, serialize_vec, Q};
use crate::report::Report;
use crate::series::{boxed_amalgamated, boxed_coefficient, BSeries, SeriesKind};
use crate::towerops::*;

/// Wall-clock limits from the criteria, in seconds.
pub const LATTICE_LIMIT: u64 = 10;
pub const DUALITY_LIMIT: u64 = 60;
pub const COMPRESSION_LIMIT: u64 = 120;

/// A failing check, kept for the summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub identity: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_difference: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportSummary {
    pub name: String,
    pub pass: bool,
    pub checks: usize,
    pub failures: Vec<Failure>,
}

impl From<&Report> for ReportSummary {
    fn from(r: &Report) -> Self {
        ReportSummary {
            name: r.name.clone(),
            pass: r.pass,
            checks: r.checks.len(),
            failures: r
                .checks
                .iter()
                .filter(|c| !c.pass)
                .map(|c| Failure { identity: c.identity.clone(), first_difference: c.first_difference.clone() })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub title: String,
    pub pass: bool,
    pub reports: Vec<ReportSummary>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let failed: Vec<String> = self
            .reports
            .iter()
            .flat_map(|r| r.failures.iter().map(move |f| format!("{}: {}", r.name, f.identity)))
            .collect();
        let mut s = format!(
            "criterion {:>2} [{}] {} ({} reports, {:.2}s)",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.title,
            self.reports.len(),
            self.elapsed.as_secs_f64()
        );
        if let Some(first) = failed.first() {
            s.push_str(&format!("; first failure: {first}"));
            if failed.len() > 1 {
                s.push_str(&format!(" (+{} more)", failed.len() - 1));
            }
        }
        s
    }
}

/// Parsed and validated fixtures.
pub struct Bundle {
    pub tower3: Tower,
    pub lemmas: Vec<(String, Tower, Vec<Elem>)>,
    pub chains: Vec<(String, ConditionalExpectation, Vec<Elem>, ConditionalExpectation)>,
    pub ladder: (Ladder, Vec<Q>),
    pub perturbed: Ladder,
    pub layered: Vec<(String, LayeredSpec, Vec<usize>, Vec<usize>)>,
    pub compressions: Vec<(String, CumulantSpec, Vec<usize>, Vec<usize>, usize)>,
    pub chain_specs: Vec<(String, CumulantSpec, Vec<usize>, Vec<usize>, Vec<usize>)>,
    pub ladder_spec: (CumulantSpec, Vec<usize>, Vec<usize>, Vec<usize>),
    pub lifts: Vec<(String, CumulantSpec, ConditionalExpectation, Vec<usize>, Vec<usize>)>,
    pub counterexample: CounterexampleDoc,
}

fn invariant(name: &str, v: Vec<String>) -> Result<()> {
    match v.first() {
        None => Ok(()),
        Some(first) => Err(Error::Invariant(format!("{name}: {first}"))),
    }
}

fn tagged<T>(name: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{name}: {m}")),
        e => Error::Invariant(format!("{name}: {e}")),
    })
}

impl Bundle {
    /// Loads every fixture through `read`, checking module invariants.
    pub fn from_reader(read: impl Fn(&str) -> Result<String>) -> Result<Self> {
        fn doc<T: for<'de> serde::Deserialize<'de>>(read: &impl Fn(&str) -> Result<String>, name: &str) -> Result<T> {
            tagged(name, parse_json(&read(name)?))
        }
        let tower3 = tagged("tower3.json", doc::<TowerDoc>(&read, "tower3.json")?.build())?;
        invariant("tower3.json", tower3.violations())?;

        let mut lemmas = Vec::new();
        for (_, d) in fixtures::LEMMA_SEEDS {
            let name = format!("lemma-b{d}.json");
            let (t, xs) = tagged(&name, doc::<LemmaDoc>(&read, &name)?.build())?;
            invariant(&name, t.violations())?;
            lemmas.push((name, t, xs));
        }

        let mut chains = Vec::new();
        for name in ["chain-trace-m4.json", "chain-weighted-m3.json"] {
            let (phi, chain, phi0) = tagged(name, doc::<ChainTowerDoc>(&read, name)?.build())?;
            invariant(name, phi.violations())?;
            chains.push((name.to_string(), phi, chain, phi0));
        }

        let ladder = tagged("ladder-diagonal.json", doc::<LadderDoc>(&read, "ladder-diagonal.json")?.build())?;
        invariant("ladder-diagonal.json", ladder.0.violations())?;
        // the perturbed copy is broken on purpose; only its shape is checked
        let (perturbed, _) = tagged("ladder-perturbed.json", doc::<LadderDoc>(&read, "ladder-perturbed.json")?.build())?;

        let mut layered = Vec::new();
        for name in ["levels-free.json", "levels-dependent.json", "amalgamated-free.json", "amalgamated-dependent.json"] {
            let (ls, xs, ys) = tagged(name, doc::<LayeredDoc>(&read, name)?.build())?;
            layered.push((name.to_string(), ls, xs, ys));
        }

        let mut compressions = Vec::new();
        for d in [1, 2] {
            for (tag, _) in fixtures::compression_alphas() {
                let name = format!("compress-b{d}-{tag}.json");
                let c: CompressionDoc = doc(&read, &name)?;
                let spec = tagged(&name, c.spec.build())?;
                let (xs, ys) = (tagged(&name, indices(&spec, &c.x))?, tagged(&name, indices(&spec, &c.y))?);
                let p = tagged(&name, spec.index_of(&c.p))?;
                compressions.push((name, spec, xs, ys, p));
            }
        }

        let chain_doc = |name: &str| -> Result<(CumulantSpec, Vec<usize>, Vec<usize>, Vec<usize>)> {
            let c: ChainSpecDoc = doc(&read, name)?;
            let spec = tagged(name, c.spec.build())?;
            let xs = tagged(name, indices(&spec, &c.x))?;
            let ys = tagged(name, indices(&spec, &c.y))?;
            let chain = tagged(name, indices(&spec, &c.chain))?;
            Ok((spec, xs, ys, chain))
        };
        let mut chain_specs = Vec::new();
        for (tag, _) in fixtures::chain_alphas() {
            let name = format!("chain-compression-{tag}.json");
            let (spec, xs, ys, chain) = chain_doc(&name)?;
            chain_specs.push((name, spec, xs, ys, chain));
        }

        let lc: LadderCompressionDoc = doc(&read, "ladder-compression.json")?;
        let name = "ladder-compression.json";
        let spec = tagged(name, lc.spec.build())?;
        let ladder_spec = (
            tagged(name, indices(&spec, &lc.x))?,
            tagged(name, indices(&spec, &lc.y))?,
            tagged(name, indices(&spec, &lc.chain))?,
        );
        let ladder_spec = (spec, ladder_spec.0, ladder_spec.1, ladder_spec.2);

        let mut lifts = Vec::new();
        for (tag, _) in fixtures::lift_states() {
            let name = format!("lift-{tag}.json");
            let l: LiftDoc = doc(&read, &name)?;
            let spec = tagged(&name, l.spec.build())?;
            let phi0 = tagged(&name, l.phi0.build())?;
            let (xs, ys) = (tagged(&name, indices(&spec, &l.x))?, tagged(&name, indices(&spec, &l.y))?);
            lifts.push((name, spec, phi0, xs, ys));
        }

        let counterexample: CounterexampleDoc = doc(&read, "boxed-counterexample.json")?;
        tagged("boxed-counterexample.json", counterexample.spec.build())?;

        Ok(Bundle { tower3, lemmas, chains, ladder, perturbed, layered, compressions, chain_specs, ladder_spec, lifts, counterexample })
    }

    pub fn load(dir: &Path) -> Result<Self> {
        Self::from_reader(|name| {
            std::fs::read_to_string(dir.join(name)).map_err(|e| Error::Parse(format!("{}: {e}", dir.join(name).display())))
        })
    }

    /// The bundle straight from the generators, without touching disk.
    pub fn generated() -> Result<Self> {
        let files = catalog()?;
        Self::from_reader(|name| {
            files
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, t)| t.clone())
                .ok_or_else(|| Error::Parse(format!("no fixture {name}")))
        })
    }
}

/// Sizes for the full run and the quick subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Full,
    Quick,
}

fn finish(id: usize, title: &str, reports: Vec<Report>, start: Instant, limit: Option<u64>) -> CriterionResult {
    let elapsed = start.elapsed();
    let mut reports: Vec<ReportSummary> = reports.iter().map(ReportSummary::from).collect();
    if let Some(l) = limit {
        let ok = elapsed.as_secs() < l;
        reports.push(ReportSummary {
            name: format!("runtime under {l} s"),
            pass: ok,
            checks: 1,
            failures: if ok { vec![] } else { vec![Failure { identity: "runtime".into(), first_difference: None }] },
        });
    }
    CriterionResult { id, title: title.into(), pass: reports.iter().all(|r| r.pass), reports, elapsed }
}

fn blocks_set(parts: impl IntoIterator<Item = Vec<Vec<usize>>>) -> BTreeSet<Vec<Vec<usize>>> {
    parts.into_iter().collect()
}

/// Counts and sets of NC(n) against the brute-force oracle, μ∗ζ = ζ∗μ = δ,
/// and |π| + |Kr(π)| = n + 1.
pub fn lattice_suite(mode: Mode) -> Result<CriterionResult> {
    let start = Instant::now();
    let top = if mode == Mode::Quick { 6 } else { 8 };
    let catalan = [1usize, 2, 5, 14, 42, 132, 429, 1430];
    let mut r = Report::new("NC(n) enumeration, incidence algebra, Kreweras");
    for n in 1..=top {
        let lat = lattice(n)?;
        let ours = blocks_set(lat.partitions().iter().map(|p| p.blocks().to_vec()));
        let brute = blocks_set(oracle::noncrossing_partitions(n));
        r.push(format!("|NC({n})| = {}", catalan[n - 1]), lat.len() == catalan[n - 1], None, lat.len().into(), catalan[n - 1].into());
        r.flag(format!("NC({n}) equals the filtered set partitions"), ours == brute, None);
    }
    for n in 1..=top.min(6) {
        let (mu, zeta, delta) = (IncidenceFunction::mobius(n)?, IncidenceFunction::zeta(n)?, IncidenceFunction::delta(n)?);
        r.flag(format!("μ∗ζ = δ on NC({n})"), mu.convolve(&zeta)? == delta, None);
        r.flag(format!("ζ∗μ = δ on NC({n})"), zeta.convolve(&mu)? == delta, None);
    }
    for n in 1..=top.min(7) {
        let lat = lattice(n)?;
        let bad = (0..lat.len()).find(|&i| lat.partitions()[i].len() + lat.partitions()[lat.kreweras_idx(i)].len() != n + 1);
        r.flag(format!("|π| + |Kr(π)| = {} on NC({n})", n + 1), bad.is_none(), bad.map(|i| lat.partitions()[i].to_string()));
    }
    Ok(finish(1, "lattice suite against brute-force set partitions", vec![r], start, Some(LATTICE_LIMIT)))
}

/// moments_to_cumulants ∘ cumulants_to_moments and its reverse on random
/// families with s ≤ 2, N ≤ 4, dim B ≤ 2.
pub fn duality_suite(mode: Mode, seed: u64) -> Result<CriterionResult> {
    let start = Instant::now();
    let count = if mode == Mode::Quick { 10 } else { 50 };
    let mut rng = fixtures::rng(seed);
    let mut r = Report::new(format!("moment/cumulant round trips on {count} random families"));
    for i in 0..count {
        let (s, n, d) = (1 + i % 2, 1 + (i / 2) % 4, 1 + (i / 8) % 2);
        let f = CumulantFamily::random(&mut rng, s, n, fixtures::base_of_dim(d)?);
        let back = moments_to_cumulants(&cumulants_to_moments(&f)?)?;
        let fwd = cumulants_to_moments(&moments_to_cumulants(&f)?)?;
        let pass = back == f && fwd == f;
        r.flag(format!("family {i} (s={s}, N={n}, dim B={d})"), pass, (!pass).then(|| "round trip differs".into()));
    }
    Ok(finish(2, "Möbius duality round trip", vec![r], start, Some(DUALITY_LIMIT)))
}

/// Joint, sum and product rules on random free pairs, plus the frozen
/// counterexample to the unrestricted amalgamated boxed formula.
pub fn freeness_suite(mode: Mode, seed: u64, bundle: &Bundle) -> Result<CriterionResult> {
    let start = Instant::now();
    let count = if mode == Mode::Quick { 4 } else { 20 };
    let mut rng = fixtures::rng(seed);
    let mut reports = Vec::new();
    for i in 0..count {
        let d = 1 + i % 2;
        let spec = random_free_pair(&mut rng, 1, 4, d)?;
        let mut r = verify_free_pair(&spec, &[0], &[1])?;
        r.name = format!("free pair {i} over dim {d}");
        reports.push(r);
    }
    let c = &bundle.counterexample;
    let spec = c.spec.build()?;
    let mut r = Report::new("unrestricted boxed formula with b′ = b (dim B = 2)");
    let fx = spec.restrict(&[0])?.cumulant_family()?;
    let fy = spec.restrict(&[1])?.cumulant_family()?;
    let word: Vec<usize> = c.word.iter().map(|w| w - 1).collect();
    let b = parse_elems(&c.b)?;
    let rprod = moments_to_cumulants(&crate::freemodel::composite_moment_family(
        &crate::freemodel::CompositeMoments::new(&spec, vec![crate::freemodel::Poly::monomial(vec![0, 1])])?,
        spec.degree,
    )?)?;
    let actual = rprod.coeffs[&word].eval(&b)?;
    let unrestricted = boxed_coefficient(&fx, &fy, &word, &b, &b)?;
    let trivial = boxed_coefficient(&fx, &fy, &word, &b, &vec![spec.base.one(); b.len()])?;
    r.elems("R of xy at the witness = stored value", &actual, &Elem(parse_vec(&c.actual)?));
    r.elems("unrestricted sum = stored value", &unrestricted, &Elem(parse_vec(&c.unrestricted)?));
    r.flag(
        format!("unrestricted sum differs from R of xy at word {}", fmt_word(&word)),
        actual != unrestricted,
        Some(format!("[{}] vs [{}]", serialize_vec(&actual.0).join(", "), serialize_vec(&unrestricted.0).join(", "))),
    );
    r.elems("trivial right factor recovers R of xy", &trivial, &actual);
    let rejects = matches!(
        boxed_amalgamated(&BSeries::new(SeriesKind::RTransform, fx)?, &BSeries::new(SeriesKind::RTransform, fy)?),
        Err(Error::Contract(_))
    );
    r.flag("boxed_amalgamated rejects a non-trivial right factor", rejects, None);
    reports.push(r);
    Ok(finish(3, "freeness calculus on random free pairs", reports, start, None))
}

/// Coefficients of the five-term expansion of k₃^{(E₂)}(x, x, y) as printed,
/// keyed by partition of {1, 2, 3}.
pub fn printed_expansion() -> Vec<(Vec<Vec<usize>>, Q)> {
    vec![
        (vec![vec![1, 2, 3]], q(1)),
        (vec![vec![1, 2], vec![3]], q(-1)),
        (vec![vec![1, 3], vec![2]], q(-1)),
        (vec![vec![1], vec![2, 3]], q(-1)),
        (vec![vec![1], vec![2], vec![3]], q(1)),
    ]
}

/// The E_{j+1}-cumulant lemma and corollary on random two-level towers,
/// and the printed five-term expansion compared term by term.
pub fn tower_cumulant_suite(mode: Mode, seed: u64, bundle: &Bundle) -> Result<CriterionResult> {
    let start = Instant::now();
    let degree = if mode == Mode::Quick { 3 } else { 4 };
    let mut towers: Vec<(String, Tower, Vec<Elem>)> = bundle.lemmas.clone();
    let mut rng = fixtures::rng(seed);
    for d in [1, 2] {
        let t = random_two_level_tower(&mut rng, d)?;
        let xs = fixtures::random_elements(&mut rng, &t.levels[2], 2);
        towers.push((format!("seeded tower over dim {d}"), t, xs));
    }
    let mut reports = Vec::new();
    for (name, t, xs) in &towers {
        let mut r = Report::new(format!("lemma and corollary on {name}"));
        for w in all_words(xs.len(), degree) {
            r.absorb(&fmt_word(&w), verify_lemma_e(t, 1, xs, &w)?);
        }
        reports.push(r);
    }
    let (_, t, xs) = &towers[0];
    let terms = cumulant_expansion(t, 1, xs, &[0, 0, 1])?;
    let mut r = Report::new("five-term expansion of k3 at (x, x, y)");
    for (blocks, printed) in printed_expansion() {
        let p = NcPartition::new(3, blocks)?;
        let term = terms.iter().find(|e| e.partition == p).ok_or_else(|| Error::Invariant("missing term".into()))?;
        r.scalars(format!("coefficient of {p}: μ(π, 1₃) = printed"), &term.mobius, &printed);
    }
    let sum: Q = terms.iter().map(|e| &e.mobius * &e.value).sum();
    r.scalars("Möbius expansion = scalar cumulant", &sum, &scalar_tower_cumulant(t, 1, xs, &[0, 0, 1])?);
    reports.push(r);
    Ok(finish(4, "tower cumulants and the printed three-point expansion", reports, start, None))
}

/// Scalar and amalgamated level theorems: free fixtures pass, dependent
/// fixtures are caught.
pub fn tower_theorem_suite(bundle: &Bundle) -> Result<CriterionResult> {
    let start = Instant::now();
    let mut reports = Vec::new();
    for (name, ls, xs, ys) in &bundle.layered {
        let r = if name.starts_with("levels") {
            verify_scalar_levels(ls, xs, ys, 1, 2)?
        } else {
            verify_amalgamated_levels(ls, xs, ys, 1, 1, 2)?
        };
        let expect_pass = name.contains("free");
        let mut outer = Report::new(format!("{name} (expected {})", if expect_pass { "to hold" } else { "to fail" }));
        outer.flag(
            if expect_pass { "every identity holds" } else { "some identity fails" },
            r.pass == expect_pass,
            (r.pass != expect_pass).then(|| format!("{} of {} checks pass", r.checks.iter().filter(|c| c.pass).count(), r.checks.len())),
        );
        reports.push(outer);
        if expect_pass {
            reports.push(r);
        }
    }
    Ok(finish(5, "tower freeness theorems and persistence", reports, start, None))
}

/// Compatibility for every k < i ≤ j in the tower.
pub fn compatibility_report(t: &Tower, name: &str) -> Result<Report> {
    let mut r = Report::new(format!("compatibility on {name}"));
    let d = t.depth();
    for k in 1..=d {
        for i in k + 1..=d {
            for j in i..=d {
                r.absorb(&format!("k={k} i={i} j={j}"), verify_compatibility(t, k, i, j)?);
            }
        }
    }
    Ok(r)
}

pub fn compatibility_suite(bundle: &Bundle) -> Result<CriterionResult> {
    let start = Instant::now();
    let mut reports = vec![compatibility_report(&bundle.tower3, "tower3.json")?];
    for (name, phi, chain, phi0) in &bundle.chains {
        let (t, _) = chain_tower(phi, chain, phi0)?;
        reports.push(compatibility_report(&t, name)?);
    }
    Ok(finish(6, "compatibility as full-basis map equalities", reports, start, None))
}

pub fn compression_suite(bundle: &Bundle) -> Result<CriterionResult> {
    let start = Instant::now();
    let mut reports = Vec::new();
    for (name, spec, xs, ys, p) in &bundle.compressions {
        let mut r = verify_compression(spec, xs, ys, *p)?;
        r.name = format!("{name}: {}", r.name);
        reports.push(r);
    }
    Ok(finish(7, "compression by a free projection", reports, start, Some(COMPRESSION_LIMIT)))
}

pub fn chain_ladder_suite(bundle: &Bundle) -> Result<CriterionResult> {
    let start = Instant::now();
    let mut reports = Vec::new();
    for (name, phi, chain, phi0) in &bundle.chains {
        let mut r = verify_chain_tower(phi, chain, phi0)?;
        r.name = format!("{name}: {}", r.name);
        reports.push(r);
    }
    let (ladder, alphas) = &bundle.ladder;
    reports.push(verify_ladder(ladder)?);
    let mut r = Report::new("perturbed ladder is detected");
    let caught = verify_ladder(&bundle.perturbed)?;
    r.flag("some square or rung invariant fails", !caught.pass, None);
    let interchange = matches!(ladder_expectation(&bundle.perturbed, 0, 1), Err(Error::Contract(_)));
    r.flag("interchange failure reported for F_(1,1)", interchange, None);
    reports.push(r);
    for (name, spec, xs, ys, chain) in &bundle.chain_specs {
        for j in 1..=chain.len() {
            for k in 0..j {
                let mut r = verify_chain_compression(spec, xs, ys, chain, j, k)?;
                r.name = format!("{name}: {}", r.name);
                reports.push(r);
            }
        }
    }
    let (spec, xs, ys, chain) = &bundle.ladder_spec;
    for j in 1..=chain.len() {
        for k in 0..j {
            reports.push(verify_ladder_compression(ladder, alphas, spec, xs, ys, chain, k, j)?);
        }
    }
    Ok(finish(8, "chains of projections and commuting ladders", reports, start, None))
}

pub fn lift_suite(bundle: &Bundle) -> Result<CriterionResult> {
    let start = Instant::now();
    let mut reports = Vec::new();
    for (name, spec, phi0, xs, ys) in &bundle.lifts {
        let state = serialize_vec(&phi0.matrix.data).join(", ");
        let mut r = verify_lift(spec, phi0)?;
        r.name = format!("{name} (φ₀ = [{state}]): {}", r.name);
        reports.push(r);
        let mut r = verify_lifted_freeness(spec, xs, ys, phi0)?;
        r.name = format!("{name}: {}", r.name);
        reports.push(r);
    }
    Ok(finish(9, "scalar lift to B-valued cumulants", reports, start, None))
}

pub const CRITERIA: [usize; 9] = [1, 2, 3, 4, 5, 6, 7, 8, 9];

/// Criteria run in quick mode.
pub const QUICK: [usize; 6] = [1, 2, 3, 5, 6, 9];

/// Runs one criterion.
pub fn run_criterion(id: usize, mode: Mode, seed: u64, bundle: &Bundle) -> Result<CriterionResult> {
    match id {
        1 => lattice_suite(mode),
        2 => duality_suite(mode, seed),
        3 => freeness_suite(mode, seed, bundle),
        4 => tower_cumulant_suite(mode, seed, bundle),
        5 => tower_theorem_suite(bundle),
        6 => compatibility_suite(bundle),
        7 => compression_suite(bundle),
        8 => chain_ladder_suite(bundle),
        9 => lift_suite(bundle),
        _ => Err(Error::Range(format!("no criterion {id}"))),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub mode: String,
    pub seed: u64,
    pub pass: bool,
    pub criteria: Vec<CriterionResult>,
}

pub fn run_suite(mode: Mode, seed: u64, bundle: &Bundle) -> Result<SuiteResult> {
    let ids: &[usize] = if mode == Mode::Quick { &QUICK } else { &CRITERIA };
    let criteria = ids.iter().map(|&id| run_criterion(id, mode, seed, bundle)).collect::<Result<Vec<_>>>()?;
    Ok(SuiteResult {
        mode: if mode == Mode::Quick { "quick" } else { "full" }.into(),
        seed,
        pass: criteria.iter().all(|c| c.pass),
        criteria,
    })
}

pub const DEFAULT_SEED: u64 = 20;

impl SuiteResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("suite serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s: String = self.criteria.iter().map(|c| c.line() + "\n").collect();
        let failed = self.criteria.iter().filter(|c| !c.pass).count();
        s.push_str(&format!("{} of {} criteria pass (seed {})\n", self.criteria.len() - failed, self.criteria.len(), self.seed));
        s
    }
}
