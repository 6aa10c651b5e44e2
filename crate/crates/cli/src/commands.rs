use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use ncprob::acceptance::{self, Bundle, Mode, SuiteResult};
use ncprob::exactalg::{chain_tower, Elem};
use ncprob::fixtures::catalog;
use ncprob::freemodel::{adjoin_projection, are_free, free_add, free_mul, CumulantSpec};
use ncprob::io::*;
use ncprob::linalg::Matrix;
use ncprob::multifunc::{all_words, cumulants_to_moments, fmt_word, moments_to_cumulants, partition_eval, CumulantFamily};
use ncprob::nclattice::{enumerate_nc, kreweras, mobius, NcPartition};
use ncprob::rational::{fmt_q, parse_q, serialize_vec};
use ncprob::report::Report;
use ncprob::series::{self, boxed_amalgamated, boxed_scalar, BSeries};
use ncprob::towerops::*;
use ncprob::Error;

use crate::args::*;

/// What a command produced.
pub enum Outcome {
    Report(Report),
    Suite(SuiteResult),
    Value { json: Value, text: String },
    /// A document, printed as is or written to a file.
    Doc { body: String, out: Option<PathBuf> },
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Fail {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Contract(_) => 1,
            Error::Invariant(_) => 3,
            _ => 2,
        };
        Fail { code, message: e.to_string() }
    }
}

type Out = Result<Outcome, Fail>;

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail { code: 2, message: format!("{}: {e}", path.display()) })
}

/// Parses a document (exit 2 on malformed JSON) and builds it; anything the
/// build rejects is an invariant violation in the input (exit 3).
fn load<D: DeserializeOwned, T>(path: &Path, build: impl FnOnce(D) -> ncprob::Result<T>) -> Result<T, Fail> {
    let doc: D = parse_json(&read(path)?).map_err(|e| Fail { code: 2, message: format!("{}: {e}", path.display()) })?;
    build(doc).map_err(|e| Fail { code: 3, message: format!("{}: {e}", path.display()) })
}

fn clean(path: &Path, what: &str, v: Vec<String>) -> Result<(), Fail> {
    match v.first() {
        None => Ok(()),
        Some(first) => Err(Fail { code: 3, message: format!("{}: {what}: {first}", path.display()) }),
    }
}

fn usage(message: impl Into<String>) -> Fail {
    Fail { code: 2, message: message.into() }
}

fn value(json: Value, text: impl Into<String>) -> Out {
    Ok(Outcome::Value { json, text: text.into() })
}

fn doc<T: serde::Serialize>(d: &T, out: Option<PathBuf>) -> Out {
    Ok(Outcome::Doc { body: to_json(d), out })
}

/// `1,2,1` to 0-based letters.
fn parse_word(s: &str) -> Result<Vec<usize>, Fail> {
    s.split(',')
        .map(|t| match t.trim().parse::<usize>() {
            Ok(i) if i >= 1 => Ok(i - 1),
            _ => Err(usage(format!("bad letter {t:?} in word {s:?}"))),
        })
        .collect()
}

/// Letters given as labels or 1-based indices.
fn spec_letters(spec: &CumulantSpec, s: &str) -> Result<Vec<usize>, Fail> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            match t.parse::<usize>() {
                Ok(i) if (1..=spec.s()).contains(&i) => Ok(i - 1),
                Ok(_) => Err(usage(format!("letter {t} out of range"))),
                Err(_) => Ok(spec.index_of(t)?),
            }
        })
        .collect()
}

fn parse_rows(s: &str) -> Result<Vec<Elem>, Fail> {
    let rows: Vec<Vec<String>> = parse_json(s)?;
    Ok(parse_elems(&rows)?)
}

fn rows(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows).map(|i| (0..m.cols).map(|j| fmt_q(m.get(i, j))).collect()).collect()
}

fn partition_json(p: &NcPartition) -> Value {
    json!(p.blocks())
}

pub fn run(cli: &Cli) -> Out {
    match &cli.command {
        Command::Nc(c) => nc(c),
        Command::Alg(AlgCmd::Verify { file }) => alg_verify(file),
        Command::Tower(c) => tower(c),
        Command::Ladder(LadderCmd::Verify { file }) => {
            let (ladder, _) = load(file, |d: LadderDoc| d.build())?;
            Ok(Outcome::Report(verify_ladder(&ladder)?))
        }
        Command::Mc(c) => mc(c),
        Command::Series(c) => series_cmd(c),
        Command::Dist(c) => dist(c),
        Command::Verify(c) => verify(c),
        Command::Selftest(a) => selftest(a, cli.seed.unwrap_or(acceptance::DEFAULT_SEED)),
        Command::Fixtures(c) => fixtures(c),
    }
}

fn nc(c: &NcCmd) -> Out {
    match c {
        NcCmd::Enum { n } => {
            let ps = enumerate_nc(*n)?;
            let text: String = ps.iter().map(|p| format!("{p}\n")).collect();
            let list: Vec<Value> = ps.iter().map(partition_json).collect();
            value(json!({ "n": n, "count": ps.len(), "partitions": list }), format!("{text}{} partitions", ps.len()))
        }
        NcCmd::Mobius { n, lower, upper } => {
            let (a, b) = (NcPartition::parse(*n, lower)?, NcPartition::parse(*n, upper)?);
            let m = mobius(&a, &b)?;
            value(json!({ "lower": partition_json(&a), "upper": partition_json(&b), "mobius": fmt_q(&m) }), fmt_q(&m))
        }
        NcCmd::Kreweras { n, pi } => {
            let p = NcPartition::parse(*n, pi)?;
            let k = kreweras(&p)?;
            value(json!({ "pi": partition_json(&p), "kreweras": partition_json(&k) }), k.to_string())
        }
    }
}

fn alg_verify(file: &Path) -> Out {
    let a = load(file, |d: AlgebraDoc| d.build())?;
    let mut r = Report::new(format!("algebra of dimension {} in M_{}", a.dim(), a.m));
    r.flag("basis is independent and closed under products", true, None);
    let unit = a.to_matrix(&a.one());
    let pass = (0..a.dim()).all(|i| {
        let e = a.basis_elem(i);
        a.mul(&a.one(), &e) == e && a.mul(&e, &a.one()) == e
    });
    r.flag("unit acts as identity on the basis", pass, None);
    r.flag("unit is a projection", a.is_projection(&a.one()), (unit.rows == 0).then(|| "empty".into()));
    Ok(Outcome::Report(r))
}

fn tower(c: &TowerCmd) -> Out {
    match c {
        TowerCmd::Verify { file } => {
            let t = load(file, |d: TowerDoc| d.build())?;
            let mut r = Report::new(format!("tower of depth {}", t.depth()));
            for (j, m) in t.maps.iter().enumerate() {
                let v = m.violations();
                r.flag(format!("φ_{j} is a conditional expectation"), v.is_empty(), v.first().cloned());
            }
            Ok(Outcome::Report(r))
        }
        TowerCmd::Compose { file, k, j } => {
            let t = load(file, |d: TowerDoc| d.build())?;
            let e = t.compose_expectations(*k, *j)?;
            let m = rows(&e.matrix);
            let text = m.iter().map(|r| r.join(" ")).collect::<Vec<_>>().join("\n");
            value(
                json!({ "k": k, "j": j, "source_dim": e.source.dim(), "target_dim": e.target.dim(), "matrix": m }),
                text,
            )
        }
    }
}

fn family(path: &Path) -> Result<CumulantFamily, Fail> {
    load(path, |d: FamilyDoc| d.build())
}

fn mc(c: &McCmd) -> Out {
    match c {
        McCmd::M2c(t) => doc(&FamilyDoc::from_family(&moments_to_cumulants(&family(&t.input)?)?), t.out.clone()),
        McCmd::C2m(t) => doc(&FamilyDoc::from_family(&cumulants_to_moments(&family(&t.input)?)?), t.out.clone()),
        McCmd::Eval { input, pi, word, args } => {
            let f = family(input)?;
            let w = parse_word(word)?;
            let p = NcPartition::parse(w.len(), pi)?;
            let b = match args {
                Some(s) => parse_rows(s)?,
                None => vec![f.base.one(); w.len().saturating_sub(1)],
            };
            let v = partition_eval(&f, &p, &w, &b)?;
            let coords = serialize_vec(&v.0);
            value(json!({ "pi": partition_json(&p), "word": fmt_word(&w), "value": coords }), format!("[{}]", coords.join(", ")))
        }
    }
}

fn series_doc(path: &Path) -> Result<BSeries, Fail> {
    load(path, |d: SeriesDoc| d.build())
}

fn space(a: &SpaceArgs, rtransform: bool) -> Out {
    let (t, level, mut xs) = load(&a.space, |d: LemmaDoc| {
        let level = d.level;
        let (t, xs) = d.build()?;
        Ok((t, level, xs))
    })?;
    clean(&a.space, "tower", t.violations())?;
    if let Some(p) = &a.elements {
        xs = parse_rows(&read(p)?)?;
        for x in &xs {
            t.levels[level].check(x)?;
        }
    }
    let e = t.compose_expectations(1, level)?;
    let s = if rtransform { series::r_transform(&e, &xs, a.degree)? } else { series::moment_series(&e, &xs, a.degree)? };
    doc(&SeriesDoc::from_series(&s), a.out.clone())
}

fn series_cmd(c: &SeriesCmd) -> Out {
    match c {
        SeriesCmd::Moment(a) => space(a, false),
        SeriesCmd::Rtransform(a) => space(a, true),
        SeriesCmd::Add(p) => doc(&SeriesDoc::from_series(&series::add(&series_doc(&p.left)?, &series_doc(&p.right)?)?), p.out.clone()),
        SeriesCmd::Boxconv { pair, scalar, amalg, trivial_right } => {
            let f = series_doc(&pair.left)?;
            let mut g = series_doc(&pair.right)?;
            if *trivial_right {
                g = g.trivial();
            }
            let h = match (scalar, amalg) {
                (true, _) => boxed_scalar(&f, &g)?,
                (_, true) => boxed_amalgamated(&f, &g)?,
                _ if f.base().dim() == 1 => boxed_scalar(&f, &g)?,
                _ => boxed_amalgamated(&f, &g)?,
            };
            doc(&SeriesDoc::from_series(&h), pair.out.clone())
        }
    }
}

fn spec(path: &Path) -> Result<CumulantSpec, Fail> {
    load(path, |d: SpecDoc| d.build())
}

fn dist(c: &DistCmd) -> Out {
    match c {
        DistCmd::Freeadd(p) => doc(&SpecDoc::from_spec(&free_add(&spec(&p.left)?, &spec(&p.right)?)?), p.out.clone()),
        DistCmd::Freemul(p) => doc(&SpecDoc::from_spec(&free_mul(&spec(&p.left)?, &spec(&p.right)?)?), p.out.clone()),
        DistCmd::Moment { spec: path, word, at } => {
            let s = spec(path)?;
            let w = spec_letters(&s, word)?;
            let b = match at {
                Some(a) => parse_rows(a)?,
                None => vec![s.base.one(); w.len().saturating_sub(1)],
            };
            let v = s.joint_moment(&w, &b)?;
            let coords = serialize_vec(&v.0);
            value(json!({ "word": fmt_word(&w), "moment": coords }), format!("[{}]", coords.join(", ")))
        }
        DistCmd::Arefree { spec: path, groups } => {
            let s = spec(path)?;
            let gs = groups.split(';').map(|g| spec_letters(&s, g)).collect::<Result<Vec<_>, _>>()?;
            let free = are_free(&s, &gs)?;
            value(json!({ "free": free, "degree": s.degree }), if free { "free" } else { "not free" })
        }
        DistCmd::Adjoinproj { spec: path, alpha, label, out } => {
            let s = spec(path)?;
            doc(&SpecDoc::from_spec(&adjoin_projection(&s, &parse_q(alpha)?, label)?), out.clone())
        }
    }
}

fn is_kind(path: &Path, key: &str) -> Result<bool, Fail> {
    let v: Value = parse_json(&read(path)?).map_err(|e| Fail { code: 2, message: format!("{}: {e}", path.display()) })?;
    Ok(v.get(key).is_some())
}

fn report(r: Report) -> Out {
    Ok(Outcome::Report(r))
}

fn verify(c: &VerifyCmd) -> Out {
    match c {
        VerifyCmd::LemmaE { ctx, j, word, degree } => {
            let (t, xs) = load(ctx, |d: LemmaDoc| d.build())?;
            clean(ctx, "tower", t.violations())?;
            let words = match word {
                Some(w) => vec![parse_word(w)?],
                None => all_words(xs.len(), *degree),
            };
            let mut r = Report::new(format!("tower cumulants at level {j}"));
            for w in words {
                r.absorb(&fmt_word(&w), verify_lemma_e(&t, *j, &xs, &w)?);
            }
            report(r)
        }
        VerifyCmd::Levels { ctx, k, l } => {
            let (ls, xs, ys) = load(ctx, |d: LayeredDoc| d.build())?;
            report(verify_scalar_levels(&ls, &xs, &ys, *k, *l)?)
        }
        VerifyCmd::AmalgamatedLevels { ctx, k, m, n } => {
            let (ls, xs, ys) = load(ctx, |d: LayeredDoc| d.build())?;
            report(verify_amalgamated_levels(&ls, &xs, &ys, *k, *m, *n)?)
        }
        VerifyCmd::Compat { ctx, idx } => {
            let t = if is_kind(ctx, "chain")? {
                let (phi, chain, phi0) = load(ctx, |d: ChainTowerDoc| d.build())?;
                clean(ctx, "φ", phi.violations())?;
                chain_tower(&phi, &chain, &phi0)?.0
            } else {
                load(ctx, |d: TowerDoc| d.build())?
            };
            clean(ctx, "tower", t.violations())?;
            match (idx.k, idx.i, idx.j) {
                (Some(k), Some(i), Some(j)) => report(verify_compatibility(&t, k, i, j)?),
                _ => report(acceptance::compatibility_report(&t, &ctx.display().to_string())?),
            }
        }
        VerifyCmd::Compress { ctx } => {
            let (s, xs, ys, p) = load(ctx, |d: CompressionDoc| {
                let s = d.spec.build()?;
                let (xs, ys, p) = (indices(&s, &d.x)?, indices(&s, &d.y)?, s.index_of(&d.p)?);
                Ok((s, xs, ys, p))
            })?;
            report(verify_compression(&s, &xs, &ys, p)?)
        }
        VerifyCmd::Chain { ctx, idx } => {
            if is_kind(ctx, "phi")? {
                let (phi, chain, phi0) = load(ctx, |d: ChainTowerDoc| d.build())?;
                clean(ctx, "φ", phi.violations())?;
                return report(verify_chain_tower(&phi, &chain, &phi0)?);
            }
            let (s, xs, ys, chain) = load(ctx, |d: ChainSpecDoc| {
                let s = d.spec.build()?;
                let (xs, ys, ch) = (indices(&s, &d.x)?, indices(&s, &d.y)?, indices(&s, &d.chain)?);
                Ok((s, xs, ys, ch))
            })?;
            let mut r = Report::new(format!("compression along a chain of {}", chain.len()));
            for (k, j) in pairs(idx, chain.len()) {
                r.absorb(&format!("k={k} j={j}"), verify_chain_compression(&s, &xs, &ys, &chain, j, k)?);
            }
            report(r)
        }
        VerifyCmd::Ladder { ctx, idx } => {
            if !is_kind(ctx, "ladder")? {
                let (ladder, _) = load(ctx, |d: LadderDoc| d.build())?;
                return report(verify_ladder(&ladder)?);
            }
            let (ladder, alphas, s, xs, ys, chain) = load(ctx, |d: LadderCompressionDoc| {
                let (ladder, alphas) = d.ladder.build()?;
                let s = d.spec.build()?;
                let (xs, ys, ch) = (indices(&s, &d.x)?, indices(&s, &d.y)?, indices(&s, &d.chain)?);
                Ok((ladder, alphas, s, xs, ys, ch))
            })?;
            let mut r = Report::new(format!("compression along a ladder of depth {}", ladder.upper.depth()));
            for (k, j) in pairs(idx, chain.len()) {
                r.absorb(&format!("k={k} j={j}"), verify_ladder_compression(&ladder, &alphas, &s, &xs, &ys, &chain, k, j)?);
            }
            report(r)
        }
        VerifyCmd::Lift { ctx } => {
            let (s, phi0, xs, ys) = load(ctx, |d: LiftDoc| {
                let s = d.spec.build()?;
                let phi0 = d.phi0.build()?;
                let (xs, ys) = (indices(&s, &d.x)?, indices(&s, &d.y)?);
                Ok((s, phi0, xs, ys))
            })?;
            let mut r = Report::new("scalar lift");
            r.absorb("lift", verify_lift(&s, &phi0)?);
            r.absorb("freeness", verify_lifted_freeness(&s, &xs, &ys, &phi0)?);
            report(r)
        }
    }
}

/// The requested (k, j), or every 0 ≤ k < j ≤ len.
fn pairs(idx: &KJ, len: usize) -> Vec<(usize, usize)> {
    match (idx.k, idx.j) {
        (Some(k), Some(j)) => vec![(k, j)],
        _ => (1..=len).flat_map(|j| (0..j).map(move |k| (k, j))).collect(),
    }
}

fn fixture_dir(given: &Option<PathBuf>) -> PathBuf {
    if let Some(d) = given {
        return d.clone();
    }
    let local = PathBuf::from("fixtures");
    if local.join("tower3.json").exists() {
        return local;
    }
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn selftest(a: &SelftestArgs, seed: u64) -> Out {
    let dir = fixture_dir(&a.fixtures);
    let bundle = Bundle::load(&dir).map_err(|e| Fail { code: 3, message: format!("{}: {e}", dir.display()) })?;
    let mode = if a.quick { Mode::Quick } else { Mode::Full };
    Ok(Outcome::Suite(acceptance::run_suite(mode, seed, &bundle)?))
}

fn fixtures(c: &FixturesCmd) -> Out {
    let files = catalog()?;
    match c {
        FixturesCmd::Write { dir } => {
            fs::create_dir_all(dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
            for (name, body) in &files {
                fs::write(dir.join(name), body).map_err(|e| usage(format!("{name}: {e}")))?;
            }
            let names: Vec<&str> = files.iter().map(|(n, _)| n.as_str()).collect();
            value(json!({ "dir": dir.display().to_string(), "written": names }), format!("wrote {} files to {}", names.len(), dir.display()))
        }
        FixturesCmd::Check { dir } => {
            let mut r = Report::new(format!("fixtures in {}", dir.display()));
            for (name, body) in &files {
                let on_disk = fs::read_to_string(dir.join(name)).ok();
                let pass = on_disk.as_deref() == Some(body.as_str());
                r.flag(format!("{name} matches the generator"), pass, on_disk.is_none().then(|| "missing".into()));
            }
            report(r)
        }
    }
}
