//! Reference data shipped with the crate: the two published weight-set
//! tables and a pair of worked products in the monomial basis.

use serde::Deserialize;

use crate::error::Result;
use crate::symmfunc::{mult, parse_symfunc, SymFunc};
use crate::weightsets::{canonical_form, ClassificationTable, Weight4, WeightOrder, WeightSet};

pub const WEIGHT_CLASSES: &str = include_str!("../data/weight_classes.json");
pub const WEIGHT_CLASSES_ALT: &str = include_str!("../data/weight_classes_alt.json");
pub const WORKED_PRODUCT: &str = include_str!("../data/worked_product.json");

/// One row of a reference weight-set table: the weights beyond the standard
/// basis and the published splitting flag.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
pub struct ReferenceClass {
    pub size: usize,
    pub extra: Vec<Weight4>,
    pub splitting_t3: bool,
}

impl ReferenceClass {
    pub fn weight_set(&self, order: &WeightOrder) -> Result<WeightSet> {
        let mut ws: Vec<Weight4> = crate::weightsets::BASIS.to_vec();
        ws.extend(self.extra.iter().copied());
        WeightSet::new(order, &ws)
    }
}

#[derive(Deserialize)]
struct TableFile {
    classes: Vec<ReferenceClass>,
}

pub fn parse_reference_table(s: &str) -> Result<Vec<ReferenceClass>> {
    Ok(serde_json::from_str::<TableFile>(s)?.classes)
}

/// Diffs a computed classification against a reference table. The match is
/// a bijection under `equivalent`; sizes and splitting flags must agree.
/// Returns one line per discrepancy.
pub fn diff_table(table: &ClassificationTable, reference: &[ReferenceClass]) -> Result<Vec<String>> {
    let order = &table.order;
    let mut out = Vec::new();
    if table.classes.len() != reference.len() {
        out.push(format!("{} classes computed, {} in reference", table.classes.len(), reference.len()));
    }
    let mut hit = vec![0usize; table.classes.len()];
    for (r, row) in reference.iter().enumerate() {
        let ws = row.weight_set(order)?;
        if ws.len() != row.size {
            out.push(format!("reference row {}: size {} but {} weights", r + 1, row.size, ws.len()));
        }
        let canon = canonical_form(order, &ws)?;
        let found: Vec<usize> = (0..table.classes.len()).filter(|&c| table.classes[c].set == canon).collect();
        match found.as_slice() {
            [c] => {
                hit[*c] += 1;
                let computed = table.classes[*c].splitting.is_some();
                if computed != row.splitting_t3 {
                    out.push(format!("reference row {}: splitting flag {} but computed {}", r + 1, row.splitting_t3, computed));
                }
            }
            _ => out.push(format!("reference row {} matches {} computed classes", r + 1, found.len())),
        }
    }
    for (c, &h) in hit.iter().enumerate() {
        if h != 1 {
            out.push(format!("computed class {} matched by {} reference rows", c + 1, h));
        }
    }
    Ok(out)
}

/// Row `i` of `a` must be equivalent to row `i` of `b` and to no other row.
pub fn diff_row_bijection(order: &WeightOrder, a: &[ReferenceClass], b: &[ReferenceClass]) -> Result<Vec<String>> {
    let forms = |t: &[ReferenceClass]| -> Result<Vec<WeightSet>> {
        t.iter().map(|r| canonical_form(order, &r.weight_set(order)?)).collect()
    };
    let (fa, fb) = (forms(a)?, forms(b)?);
    let mut out = Vec::new();
    if fa.len() != fb.len() {
        out.push(format!("row counts differ: {} vs {}", fa.len(), fb.len()));
    }
    for (i, x) in fa.iter().enumerate() {
        for (j, y) in fb.iter().enumerate() {
            if (x == y) != (i == j) {
                out.push(format!("row {} vs row {}: equivalent = {}", i + 1, j + 1, x == y));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Deserialize)]
pub struct ReferenceProduct {
    pub left: String,
    pub right: String,
    pub product: String,
}

#[derive(Deserialize)]
struct ProductFile {
    products: Vec<ReferenceProduct>,
}

pub fn parse_reference_products(s: &str) -> Result<Vec<ReferenceProduct>> {
    Ok(serde_json::from_str::<ProductFile>(s)?.products)
}

/// Recomputes each reference product; returns `(row, computed)` for every
/// row whose product differs from the recorded one.
pub fn diff_products(rows: &[ReferenceProduct]) -> Result<Vec<(ReferenceProduct, SymFunc)>> {
    let mut out = Vec::new();
    for r in rows {
        let got = mult(&parse_symfunc(&r.left)?, &parse_symfunc(&r.right)?);
        if got != parse_symfunc(&r.product)? {
            out.push((r.clone(), got));
        }
    }
    Ok(out)
}
