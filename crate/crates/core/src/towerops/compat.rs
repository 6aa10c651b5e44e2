//! Compatibility of stacked expectations, checked as exact matrix equalities
//! over a full basis.

use crate::error::{Error, Result};
use crate::exactalg::Tower;
use crate::linalg::Matrix;
use crate::rational::fmt_q;
use crate::report::Report;
use serde_json::json;

fn same(r: &mut Report, identity: String, lhs: &Matrix, rhs: &Matrix) {
    let pass = lhs == rhs;
    let diff = (!pass).then(|| {
        let k = lhs.data.iter().zip(&rhs.data).position(|(a, b)| a != b).unwrap_or(0);
        format!("entry ({}, {})", k / lhs.cols.max(1) + 1, k % lhs.cols.max(1) + 1)
    });
    r.push(identity, pass, diff, rows(lhs), rows(rhs));
}

fn rows(m: &Matrix) -> serde_json::Value {
    let rows: Vec<Vec<String>> = (0..m.rows).map(|i| (0..m.cols).map(|j| fmt_q(m.get(i, j))).collect()).collect();
    json!(rows)
}

/// For 1 ≤ k < i ≤ j ≤ depth:
/// E_{k,j} = E_{k,j} ∘ E_{i,j}, E_j = E_j ∘ E_{k,j}, E_j = E_{k−1} ∘ E_{k,j},
/// and φ_l φ_{l+1} = φ_l φ_{l+1} ∘ φ_{l+1} for every adjacent pair.
pub fn verify_compatibility(tower: &Tower, k: usize, i: usize, j: usize) -> Result<Report> {
    if !(1 <= k && k < i && i <= j && j <= tower.depth()) {
        return Err(Error::Range(format!("need 1 ≤ k < i ≤ j ≤ {}, got k={k}, i={i}, j={j}", tower.depth())));
    }
    let mut r = Report::new(format!("compatibility k={k} i={i} j={j}"));
    let ekj = tower.compose_expectations(k, j)?;
    let eij = tower.compose_expectations(i, j)?;
    let ej = tower.scalar_functional(j)?;

    let via_i = ekj.matrix.mul(&tower.inclusion(i - 1, j)?)?.mul(&eij.matrix)?;
    same(&mut r, format!("E_{{{k},{j}}} = E_{{{k},{j}}} E_{{{i},{j}}}"), &ekj.matrix, &via_i);

    let via_k = ej.matrix.mul(&tower.inclusion(k - 1, j)?)?.mul(&ekj.matrix)?;
    same(&mut r, format!("E_{j} = E_{j} E_{{{k},{j}}}"), &ej.matrix, &via_k);

    let lower = tower.scalar_functional(k - 1)?.matrix.mul(&ekj.matrix)?;
    same(&mut r, format!("E_{j} = E_{} E_{{{k},{j}}}", k - 1), &ej.matrix, &lower);

    for l in 1..tower.depth() {
        let pair = tower.maps[l].matrix.mul(&tower.maps[l + 1].matrix)?;
        let twice = pair.mul(&tower.maps[l + 1].inclusion)?.mul(&tower.maps[l + 1].matrix)?;
        same(&mut r, format!("φ_{l}φ_{} = φ_{l}φ_{} φ_{}", l + 1, l + 1, l + 1), &pair, &twice);
    }
    Ok(r)
}
