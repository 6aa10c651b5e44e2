use ncprob::exactalg::Elem;
use ncprob::fixtures::base_of_dim;
use ncprob::freemodel::{adjoin_projection, CumulantSpec};
use ncprob::multifunc::{cumulants_to_moments, moments_to_cumulants, CumulantFamily};
use ncprob::nclattice::{lattice, NcPartition};
use ncprob::rational::{fmt_q, parse_q, pow, Q};
use ncprob::series::{add, boxed_scalar, BSeries, SeriesKind};
use ncprob::towerops::compression::{compressed_cumulants, sandwich};
use serde_json::{json, Value};

type Out = Result<Value, String>;

fn err(e: ncprob::Error) -> String {
    e.to_string()
}

/// Comma or whitespace separated rationals: the first n terms of a sequence.
pub fn parse_terms(text: &str) -> Result<Vec<Q>, String> {
    let terms: Vec<Q> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| parse_q(t).map_err(err))
        .collect::<Result<_, _>>()?;
    if terms.is_empty() {
        return Err("enter at least one term".into());
    }
    Ok(terms)
}

fn family(terms: &[Q]) -> Result<CumulantFamily, String> {
    CumulantFamily::from_fn(1, terms.len(), base_of_dim(1).map_err(err)?, |w, _| Ok(Elem(vec![terms[w.len() - 1].clone()]))).map_err(err)
}

fn terms(f: &CumulantFamily) -> Vec<Q> {
    (1..=f.degree).map(|n| f.coeffs[&vec![0; n]].table[0].0[0].clone()).collect()
}

fn strings(v: &[Q]) -> Vec<String> {
    v.iter().map(fmt_q).collect()
}

fn both(cumulants: &CumulantFamily) -> Out {
    let moments = cumulants_to_moments(cumulants).map_err(err)?;
    Ok(json!({ "moments": strings(&terms(&moments)), "cumulants": strings(&terms(cumulants)) }))
}

fn cumulants_of(input: &str, values: &str) -> Result<CumulantFamily, String> {
    let f = family(&parse_terms(values)?)?;
    match input {
        "cumulants" => Ok(f),
        "moments" => moments_to_cumulants(&f).map_err(err),
        other => Err(format!("input must be moments or cumulants, not {other:?}")),
    }
}

fn blocks(p: &NcPartition) -> Value {
    json!(p.blocks())
}

pub fn nc_lattice(n: usize) -> Out {
    let lat = lattice(n).map_err(err)?;
    let one = lat.index_of(&NcPartition::one(n)).map_err(err)?;
    let rows: Vec<Value> = lat
        .partitions()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            json!({
                "blocks": blocks(p),
                "text": p.to_string(),
                "kreweras": blocks(&lat.partitions()[lat.kreweras_idx(i)]),
                "mobius_to_one": fmt_q(&lat.mobius_idx(i, one)),
            })
        })
        .collect();
    Ok(json!({ "n": n, "count": lat.len(), "partitions": rows }))
}

pub fn transfer(direction: &str, values: &str) -> Out {
    let f = family(&parse_terms(values)?)?;
    let out = match direction {
        "m2c" => moments_to_cumulants(&f),
        "c2m" => cumulants_to_moments(&f),
        other => return Err(format!("direction must be m2c or c2m, not {other:?}")),
    }
    .map_err(err)?;
    Ok(json!(strings(&terms(&out))))
}

pub fn free_convolution(op: &str, input: &str, left: &str, right: &str) -> Out {
    let (x, y) = (cumulants_of(input, left)?, cumulants_of(input, right)?);
    if x.degree != y.degree {
        return Err(format!("{} terms on the left, {} on the right", x.degree, y.degree));
    }
    let series = |f: CumulantFamily| BSeries::new(SeriesKind::RTransform, f).map_err(err);
    let (f, g) = (series(x)?, series(y)?);
    let h = match op {
        "add" => add(&f, &g),
        "mul" => boxed_scalar(&f, &g),
        other => return Err(format!("operation must be add or mul, not {other:?}")),
    }
    .map_err(err)?;
    both(&h.family)
}

/// Moments of pxp under φ(p · p)/α in the free product with a projection,
/// and the cumulant scaling κₙ ↦ α^{n−1} κₙ as an independent check.
pub fn free_compression(input: &str, values: &str, alpha: &str) -> Out {
    let alpha = parse_q(alpha).map_err(err)?;
    let k = cumulants_of(input, values)?;
    let x = CumulantSpec::from_family(k.clone(), Some(vec!["x".into()])).map_err(err)?;
    let s = adjoin_projection(&x, &alpha, "p").map_err(err)?;
    let p = s.index_of("p").map_err(err)?;
    let cumulants = compressed_cumulants(&s, sandwich(&[0], p), p).map_err(err)?;
    let scaled: Vec<Q> = terms(&k).iter().enumerate().map(|(i, c)| pow(&alpha, i) * c).collect();
    let mut out = both(&cumulants)?;
    out["scaling_agrees"] = json!(scaled == terms(&cumulants));
    Ok(out)
}
