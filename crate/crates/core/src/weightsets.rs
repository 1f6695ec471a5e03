//! Classification of isotropy weight sets of effective `T^4`-representations
//! without finite isotropy, up to change of basis and signs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub type Weight4 = [i64; 4];

pub const BASIS: [Weight4; 4] = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];

/// Flips the sign so the first nonzero coordinate is positive. `None` for zero.
pub fn normalize(w: Weight4) -> Option<Weight4> {
    let lead = *w.iter().find(|&&c| c != 0)?;
    Some(if lead < 0 { w.map(|c| -c) } else { w })
}

fn det3(m: [[i64; 3]; 3]) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn minor(m: &[Weight4; 4], row: usize, col: usize) -> [[i64; 3]; 3] {
    let mut out = [[0; 3]; 3];
    for (r, i) in (0..4).filter(|&i| i != row).enumerate() {
        for (c, j) in (0..4).filter(|&j| j != col).enumerate() {
            out[r][c] = m[i][j];
        }
    }
    out
}

/// Cofactor expansion along the first row; rows are the given weights.
pub fn det4(m: &[Weight4; 4]) -> i64 {
    (0..4).map(|j| if j % 2 == 0 { 1 } else { -1 } * m[0][j] * det3(minor(m, 0, j))).sum()
}

/// `adj(m)` with `m * adj(m) = det(m) I`.
fn adjugate(m: &[Weight4; 4]) -> [Weight4; 4] {
    let mut adj = [[0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let s = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[j][i] = s * det3(minor(m, i, j));
        }
    }
    adj
}

/// Every four weights have determinant in `{-1, 0, 1}`.
pub fn star_check(ws: &[Weight4]) -> bool {
    let n = ws.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    if det4(&[ws[a], ws[b], ws[c], ws[d]]).abs() > 1 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn adds_cleanly(ws: &[Weight4], v: Weight4) -> bool {
    let n = ws.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if det4(&[ws[a], ws[b], ws[c], v]).abs() > 1 {
                    return false;
                }
            }
        }
    }
    true
}

fn code(w: &Weight4) -> usize {
    w.iter().fold(0, |acc, &c| acc * 3 + (c + 1) as usize)
}

/// A total order on the 40 sign-normalized nonzero vectors of `{-1,0,1}^4`
/// with the standard basis first.
#[derive(Clone, Debug)]
pub struct WeightOrder {
    list: Vec<Weight4>,
    rank: [u8; 81],
}

impl WeightOrder {
    /// Basis, then the remaining vectors lexicographically with `0 < -1 < 1`
    /// in every slot.
    pub fn standard() -> Self {
        let key = |c: i64| match c {
            0 => 0,
            -1 => 1,
            _ => 2,
        };
        let mut tail = Self::tail();
        tail.sort_by_key(|w| w.map(key));
        Self::with_tail(tail).expect("standard order")
    }

    /// Basis, then the remaining vectors in reverse plain lexicographic order.
    pub fn alternative() -> Self {
        let mut tail = Self::tail();
        tail.sort();
        tail.reverse();
        Self::with_tail(tail).expect("alternative order")
    }

    fn tail() -> Vec<Weight4> {
        let mut out = Vec::new();
        for c in 0..81usize {
            let w = [c / 27, c / 9 % 3, c / 3 % 3, c % 3].map(|d| d as i64 - 1);
            if normalize(w) == Some(w) && w.iter().filter(|&&x| x != 0).count() >= 2 {
                out.push(w);
            }
        }
        out
    }

    /// The basis followed by `tail`, which must list every non-basis
    /// normalized vector exactly once.
    pub fn with_tail(tail: Vec<Weight4>) -> Result<Self> {
        let mut list = BASIS.to_vec();
        list.extend(tail);
        let mut rank = [u8::MAX; 81];
        for (i, w) in list.iter().enumerate() {
            if w.iter().any(|c| c.abs() > 1) || normalize(*w) != Some(*w) || rank[code(w)] != u8::MAX {
                return Err(Error::Invalid(format!("bad order entry {w:?}")));
            }
            rank[code(w)] = i as u8;
        }
        if list.len() != 40 {
            return Err(Error::Invalid(format!("order has {} entries, expected 40", list.len())));
        }
        Ok(WeightOrder { list, rank })
    }

    pub fn list(&self) -> &[Weight4] {
        &self.list
    }

    pub fn position(&self, w: &Weight4) -> Option<usize> {
        if w.iter().any(|c| c.abs() > 1) {
            return None;
        }
        let r = self.rank[code(w)];
        (r != u8::MAX).then_some(r as usize)
    }
}

/// A set of normalized weights containing the standard basis and satisfying
/// the determinant condition, kept sorted by a [`WeightOrder`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightSet {
    /// Positions in the order; sorted, basis first.
    idx: Vec<u8>,
}

impl WeightSet {
    pub fn basis() -> Self {
        WeightSet { idx: vec![0, 1, 2, 3] }
    }

    /// Normalizes signs, removes duplicates and checks the invariants.
    pub fn new(order: &WeightOrder, weights: &[Weight4]) -> Result<Self> {
        let mut idx = BTreeSet::new();
        for w in weights {
            let n = normalize(*w).ok_or_else(|| Error::Invalid("zero weight".into()))?;
            let p = order.position(&n).ok_or_else(|| Error::Invalid(format!("weight {w:?} has an entry outside -1..=1")))?;
            idx.insert(p as u8);
        }
        if !(0..4).all(|i| idx.contains(&i)) {
            return Err(Error::Invalid("weight set must contain the standard basis".into()));
        }
        let ws = WeightSet { idx: idx.into_iter().collect() };
        if !star_check(&ws.weights(order)) {
            return Err(Error::Invalid("some four weights have determinant outside {-1,0,1}".into()));
        }
        Ok(ws)
    }

    pub fn len(&self) -> usize {
        self.idx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.idx.is_empty()
    }

    pub fn weights(&self, order: &WeightOrder) -> Vec<Weight4> {
        self.idx.iter().map(|&i| order.list[i as usize]).collect()
    }

    /// Weights other than the standard basis.
    pub fn extra(&self, order: &WeightOrder) -> Vec<Weight4> {
        self.weights(order).into_iter().filter(|w| !BASIS.contains(w)).collect()
    }

    pub fn to_json(&self, order: &WeightOrder) -> Value {
        json!(self.weights(order))
    }

    pub fn from_json_str(order: &WeightOrder, s: &str) -> Result<Self> {
        let raw: Vec<Weight4> = serde_json::from_str(s)?;
        Self::new(order, &raw)
    }

    /// The same set of weights sorted under another order.
    pub fn reorder(&self, from: &WeightOrder, to: &WeightOrder) -> Self {
        let mut idx: Vec<u8> = self.weights(from).iter().map(|w| to.position(w).expect("normalized") as u8).collect();
        idx.sort_unstable();
        WeightSet { idx }
    }
}

/// All `Ω ∪ {v}` passing the determinant check with `v` later than every
/// element of `Ω`.
pub fn extend(order: &WeightOrder, sets: &[WeightSet]) -> Vec<WeightSet> {
    sets.par_iter()
        .flat_map_iter(|ws| {
            let weights = ws.weights(order);
            let last = *ws.idx.last().unwrap_or(&0) as usize;
            (last + 1..order.list.len())
                .filter(move |&i| adds_cleanly(&weights, order.list[i]))
                .map(move |i| {
                    let mut idx = ws.idx.clone();
                    idx.push(i as u8);
                    WeightSet { idx }
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Like [`extend`] but with every `v` not already present.
pub fn extend_unordered(order: &WeightOrder, sets: &[WeightSet]) -> Vec<WeightSet> {
    sets.par_iter()
        .flat_map_iter(|ws| {
            let weights = ws.weights(order);
            (0..order.list.len())
                .filter(|&i| !ws.idx.contains(&(i as u8)) && adds_cleanly(&weights, order.list[i]))
                .map(|i| {
                    let mut idx = ws.idx.clone();
                    idx.push(i as u8);
                    idx.sort_unstable();
                    WeightSet { idx }
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Lexicographic minimum of the orbit: every ordered unimodular 4-tuple of
/// the set is sent to the standard basis, composed with the 16 sign
/// diagonals, and the weights renormalized and sorted.
pub fn canonical_form(order: &WeightOrder, ws: &WeightSet) -> Result<WeightSet> {
    let w = ws.weights(order);
    let n = w.len();
    let mut best: Option<Vec<u8>> = None;
    let mut buf = Vec::with_capacity(n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    if a == b || a == c || a == d || b == c || b == d || c == d {
                        continue;
                    }
                    let m = [w[a], w[b], w[c], w[d]];
                    let det = det4(&m);
                    if det.abs() != 1 {
                        continue;
                    }
                    let adj = adjugate(&m);
                    // coordinates of v in the basis m: v * adj(m) / det
                    let images: Vec<Weight4> = w
                        .iter()
                        .map(|v| std::array::from_fn(|j| det * (0..4).map(|k| v[k] * adj[k][j]).sum::<i64>()))
                        .collect();
                    for signs in 0..16u32 {
                        buf.clear();
                        for img in &images {
                            let flipped: Weight4 = std::array::from_fn(|j| if signs >> j & 1 == 1 { -img[j] } else { img[j] });
                            let norm = normalize(flipped).ok_or_else(|| Error::Consistency("zero image".into()))?;
                            let p = order
                                .position(&norm)
                                .ok_or_else(|| Error::Consistency(format!("image {norm:?} leaves the cube")))?;
                            buf.push(p as u8);
                        }
                        buf.sort_unstable();
                        if best.as_ref().is_none_or(|b| buf < *b) {
                            best = Some(buf.clone());
                        }
                    }
                }
            }
        }
    }
    best.map(|idx| WeightSet { idx }).ok_or_else(|| Error::Precondition("no unimodular 4-subset".into()))
}

pub fn equivalent(order: &WeightOrder, a: &WeightSet, b: &WeightSet) -> Result<bool> {
    Ok(a.len() == b.len() && canonical_form(order, a)? == canonical_form(order, b)?)
}

/// Primitive normal vector of a 3-dimensional subspace meeting the set in
/// exactly three linearly independent weights, if one exists. Any such
/// subspace is spanned by those three weights, so searching spans of
/// 3-subsets is exhaustive.
pub fn splitting_t3(order: &WeightOrder, ws: &WeightSet) -> Option<Weight4> {
    let w = ws.weights(order);
    let n = w.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let Some(normal) = normal_vector(w[a], w[b], w[c]) else { continue };
                let hits = w.iter().filter(|v| (0..4).map(|j| v[j] * normal[j]).sum::<i64>() == 0).count();
                if hits == 3 {
                    return Some(normal);
                }
            }
        }
    }
    None
}

/// Generalized cross product, made primitive with positive leading entry;
/// `None` if the three vectors are dependent.
pub fn normal_vector(u: Weight4, v: Weight4, x: Weight4) -> Option<Weight4> {
    // n . w = det(w, u, v, x)
    let raw: Weight4 = std::array::from_fn(|j| det4(&[BASIS[j], u, v, x]));
    let g = raw.iter().fold(0i64, |g, &c| g.gcd(&c));
    if g == 0 {
        return None;
    }
    normalize(raw.map(|c| c / g))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassEntry {
    pub set: WeightSet,
    pub splitting: Option<Weight4>,
}

#[derive(Clone, Debug)]
pub struct ClassificationTable {
    pub order: WeightOrder,
    pub classes: Vec<ClassEntry>,
}

impl ClassificationTable {
    pub fn histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for c in &self.classes {
            *h.entry(c.set.len()).or_insert(0) += 1;
        }
        h
    }

    pub fn splitting_count(&self) -> usize {
        self.classes.iter().filter(|c| c.splitting.is_some()).count()
    }

    pub fn to_json(&self) -> Value {
        let classes: Vec<Value> = self
            .classes
            .iter()
            .map(|c| {
                json!({
                    "size": c.set.len(),
                    "weights": c.set.to_json(&self.order),
                    "splitting_t3": c.splitting.is_some(),
                    "splitting_normal": c.splitting,
                })
            })
            .collect();
        let hist: serde_json::Map<String, Value> = self.histogram().into_iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
        json!({ "classes": classes, "histogram": hist, "total": self.classes.len() })
    }
}

impl fmt::Display for ClassificationTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<(usize, String, &str)> = self
            .classes
            .iter()
            .map(|c| {
                let extra = c.set.extra(&self.order);
                let text = if extra.is_empty() {
                    "-".to_string()
                } else {
                    extra
                        .iter()
                        .map(|w| format!("({})", w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                (c.set.len(), text, if c.splitting.is_some() { "yes" } else { "no" })
            })
            .collect();
        let width = rows.iter().map(|r| r.1.len()).max().unwrap_or(0).max(7);
        writeln!(f, "Size | {:<width$} | Splitting T^3", "Weights")?;
        writeln!(f, "-----+-{}-+--------------", "-".repeat(width))?;
        for (size, text, split) in rows {
            writeln!(f, "{size:>4} | {text:<width$} | {split}")?;
        }
        Ok(())
    }
}

/// Canonical representatives of `sets`, deduplicated and sorted.
fn reduce(order: &WeightOrder, sets: &[WeightSet]) -> Result<Vec<WeightSet>> {
    let forms: Vec<WeightSet> = sets.par_iter().map(|s| canonical_form(order, s)).collect::<Result<_>>()?;
    Ok(forms.into_iter().collect::<BTreeSet<_>>().into_iter().collect())
}

/// Iterates extension and reduction from the standard basis until no
/// extension survives.
pub fn classify_with(order: &WeightOrder, unordered: bool) -> Result<ClassificationTable> {
    let mut level = vec![WeightSet::basis()];
    let mut all = Vec::new();
    while !level.is_empty() {
        all.extend(level.iter().cloned());
        let next = if unordered { extend_unordered(order, &level) } else { extend(order, &level) };
        level = reduce(order, &next)?;
    }
    let classes = all
        .into_iter()
        .map(|set| {
            let splitting = splitting_t3(order, &set);
            ClassEntry { set, splitting }
        })
        .collect();
    Ok(ClassificationTable { order: order.clone(), classes })
}

pub fn classify_all() -> ClassificationTable {
    classify_with(&WeightOrder::standard(), false).expect("classification of the standard order")
}
