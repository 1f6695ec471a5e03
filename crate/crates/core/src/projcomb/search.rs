use std::collections::HashMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::config::{collinear, span_rank, ProjPoint};
use crate::error::{Error, Result};

/// Every point of `P^dim` with a representative in `{-bound..=bound}^{dim+1}`,
/// sorted.
pub fn grid_points(dim: usize, bound: i64) -> Vec<ProjPoint> {
    let side = (2 * bound + 1) as usize;
    let total = side.pow(dim as u32 + 1);
    let mut out: Vec<ProjPoint> = (0..total)
        .filter_map(|mut c| {
            let mut v = vec![0i64; dim + 1];
            for x in v.iter_mut().rev() {
                *x = (c % side) as i64 - bound;
                c /= side;
            }
            let p = ProjPoint::new(&v).ok()?;
            (p.coords() == v.as_slice()).then_some(p)
        })
        .collect();
    out.sort();
    out
}

/// Lines through pairs of a fixed point list, computed on demand.
struct Lines<'a> {
    pts: &'a [ProjPoint],
    id: HashMap<(usize, usize), usize>,
    members: Vec<Vec<usize>>,
}

impl<'a> Lines<'a> {
    fn new(pts: &'a [ProjPoint]) -> Self {
        Lines { pts, id: HashMap::new(), members: Vec::new() }
    }

    fn line(&mut self, i: usize, j: usize) -> usize {
        let key = (i.min(j), i.max(j));
        if let Some(&l) = self.id.get(&key) {
            return l;
        }
        let on: Vec<usize> = (0..self.pts.len()).filter(|&k| collinear(&self.pts[i], &self.pts[j], &self.pts[k])).collect();
        let l = self.members.len();
        for a in 0..on.len() {
            for b in a + 1..on.len() {
                self.id.insert((on[a], on[b]), l);
            }
        }
        self.members.push(on);
        l
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SgSweepReport {
    pub bound: i64,
    pub max_points: usize,
    pub grid_points: usize,
    /// Non-collinear configurations of 3..=max_points grid points covered.
    pub configurations: u64,
    pub counterexample: Option<Vec<ProjPoint>>,
}

impl SgSweepReport {
    pub fn to_json(&self) -> Value {
        json!({
            "bound": self.bound,
            "max_points": self.max_points,
            "grid_points": self.grid_points,
            "configurations": self.configurations,
            "counterexample": self.counterexample.as_ref().map(|c| c.iter().map(|p| p.coords().to_vec()).collect::<Vec<_>>()),
        })
    }
}

struct SgGrid {
    n: usize,
    line_of: Vec<Vec<u16>>,
    through: Vec<Vec<u16>>,
    on_line: Vec<u64>,
    /// `dead[q]`: lines with no grid point after index `q`, as a bitset.
    dead: Vec<Vec<u64>>,
    words: usize,
    binom: Vec<Vec<u64>>,
}

struct SgState {
    count: Vec<u8>,
    deficient: Vec<u64>,
    stack: Vec<usize>,
    configurations: u64,
    counterexample: Option<Vec<usize>>,
}

impl SgGrid {
    fn extensions(&self, last: usize, size: usize, max: usize) -> u64 {
        let free = self.n - last - 1;
        (0..=max - size).filter(|t| size + t >= 3).map(|t| self.binom[free][t]).sum()
    }

    fn add(&self, st: &mut SgState, q: usize) {
        for &l in &self.through[q] {
            let l = l as usize;
            st.count[l] += 1;
            match st.count[l] {
                2 | 3 => st.deficient[l / 64] ^= 1 << (l % 64),
                _ => {}
            }
        }
        st.stack.push(q);
    }

    fn remove(&self, st: &mut SgState, q: usize) {
        st.stack.pop();
        for &l in &self.through[q] {
            let l = l as usize;
            match st.count[l] {
                2 | 3 => st.deficient[l / 64] ^= 1 << (l % 64),
                _ => {}
            }
            st.count[l] -= 1;
        }
    }

    /// `collinear_on`: the line holding every chosen point, if any.
    fn dfs(&self, st: &mut SgState, max: usize, collinear_on: Option<usize>) {
        if st.counterexample.is_some() {
            return;
        }
        let size = st.stack.len();
        let last = *st.stack.last().expect("nonempty");
        let has_deficient = st.deficient.iter().any(|&w| w != 0);
        if size >= 3 && collinear_on.is_none() {
            st.configurations += 1;
            if !has_deficient {
                st.counterexample = Some(st.stack.clone());
                return;
            }
        }
        // A line met in exactly two points with no later grid point on it
        // stays ordinary in every extension.
        if size >= 2 && (0..self.words).any(|w| st.deficient[w] & self.dead[last][w] != 0) {
            let covered = self.extensions(last, size, max);
            st.configurations += covered - u64::from(size >= 3 && collinear_on.is_none());
            return;
        }
        if size == max {
            return;
        }
        for q in last + 1..self.n {
            let next = match (size, collinear_on) {
                (1, _) => Some(self.line_of[st.stack[0]][q] as usize),
                (_, Some(l)) if self.on_line[l] >> q & 1 == 1 => Some(l),
                _ => None,
            };
            self.add(st, q);
            self.dfs(st, max, next);
            self.remove(st, q);
            if st.counterexample.is_some() {
                return;
            }
        }
    }
}

/// Exhaustive Sylvester–Gallai check over all configurations of at most
/// `max_points` points of `P^2` with coordinates in `{-bound..=bound}`.
///
/// Subtrees whose configurations all keep a known ordinary line are counted
/// without being visited.
pub fn sg_grid_sweep(bound: i64, max_points: usize) -> Result<SgSweepReport> {
    if !(1..=3).contains(&bound) || !(3..=12).contains(&max_points) {
        return Err(Error::Invalid("sweep needs bound in 1..=3 and max_points in 3..=12".into()));
    }
    let pts = grid_points(2, bound);
    let n = pts.len();
    if n > 64 {
        return Err(Error::Invalid(format!("{n} grid points exceed the 64-point sweep limit")));
    }
    let mut lines = Lines::new(&pts);
    let mut line_of = vec![vec![0u16; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                line_of[i][j] = lines.line(i, j) as u16;
            }
        }
    }
    let nl = lines.members.len();
    let words = nl.div_ceil(64);
    let mut through = vec![Vec::new(); n];
    let mut on_line = vec![0u64; nl];
    let mut dead = vec![vec![0u64; words]; n];
    for (l, m) in lines.members.iter().enumerate() {
        for &p in m {
            through[p].push(l as u16);
            on_line[l] |= 1 << p;
        }
        let max_idx = *m.iter().max().expect("line has two points");
        for (q, d) in dead.iter_mut().enumerate() {
            if max_idx <= q {
                d[l / 64] |= 1 << (l % 64);
            }
        }
    }
    let mut binom = vec![vec![0u64; max_points + 1]; n + 1];
    for (a, row) in binom.iter_mut().enumerate() {
        row[0] = 1;
        for b in 1..=max_points.min(a) {
            row[b] = (1..=b as u64).fold(1u64, |acc, t| acc * (a as u64 - t + 1) / t);
        }
    }
    let grid = SgGrid { n, line_of, through, on_line, dead, words, binom };
    let results: Vec<(u64, Option<Vec<usize>>)> = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut st = SgState {
                count: vec![0; nl],
                deficient: vec![0; words],
                stack: Vec::with_capacity(max_points),
                configurations: 0,
                counterexample: None,
            };
            grid.add(&mut st, first);
            grid.dfs(&mut st, max_points, None);
            (st.configurations, st.counterexample)
        })
        .collect();
    let configurations = results.iter().map(|r| r.0).sum();
    let counterexample = results.into_iter().find_map(|r| r.1).map(|c| c.into_iter().map(|i| pts[i].clone()).collect());
    Ok(SgSweepReport { bound, max_points, grid_points: n, configurations, counterexample })
}

/// Which pair of incidence conditions a search enforces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conditions {
    /// Lines through two points of `Ω` meet `N`.
    S2Comb,
    /// Lines through two points of `Ω` carry a third point of `Ω ∪ N`.
    Extended,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub configurations: u64,
    /// Largest projective dimension spanned by `Ω`.
    pub max_span_dim: Option<usize>,
    pub example: Option<(Vec<ProjPoint>, Vec<ProjPoint>)>,
}

impl SearchOutcome {
    fn to_json(&self) -> Value {
        let pts = |v: &Vec<ProjPoint>| v.iter().map(|p| p.coords().to_vec()).collect::<Vec<_>>();
        json!({
            "configurations": self.configurations,
            "max_span_dim": self.max_span_dim,
            "example": self.example.as_ref().map(|(o, n)| json!({ "omega": pts(o), "n": pts(n) })),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionReport {
    pub dim: usize,
    pub grid: i64,
    pub max_points: usize,
    pub s2comb: SearchOutcome,
    pub extended: SearchOutcome,
}

impl DimensionReport {
    pub fn to_json(&self) -> Value {
        json!({
            "dim": self.dim,
            "grid": self.grid,
            "max_points": self.max_points,
            "empirical": true,
            "s2comb": self.s2comb.to_json(),
            "extended": self.extended.to_json(),
        })
    }
}

const OMEGA: u8 = 1;
const NSET: u8 = 2;

struct Search<'a> {
    pts: &'a [ProjPoint],
    lines: Lines<'a>,
    cond: Conditions,
    max_points: usize,
    /// Role of each chosen point.
    role: Vec<u8>,
    /// Roles still open to each unchosen point.
    allowed: Vec<u8>,
    omega: Vec<usize>,
    n: Vec<usize>,
    out: SearchOutcome,
}

impl Search<'_> {
    fn size(&self) -> usize {
        self.omega.len() + self.n.len()
    }

    fn open(&self, p: usize, r: u8) -> bool {
        self.role[p] == 0 && self.allowed[p] & r != 0
    }

    /// The first unmet requirement, as the (point, role) choices that would
    /// meet it.
    fn requirement(&mut self) -> Option<Vec<(usize, u8)>> {
        for a in 0..self.omega.len() {
            for b in a + 1..self.omega.len() {
                let (x, y) = (self.omega[a], self.omega[b]);
                let l = self.lines.line(x, y);
                let on = &self.lines.members[l];
                let met = on.iter().any(|&p| match self.role[p] {
                    NSET => true,
                    OMEGA => self.cond == Conditions::Extended && p != x && p != y,
                    _ => false,
                });
                if !met {
                    let mut c = Vec::new();
                    for &p in on {
                        if self.cond == Conditions::Extended && self.open(p, OMEGA) {
                            c.push((p, OMEGA));
                        }
                        if self.open(p, NSET) {
                            c.push((p, NSET));
                        }
                    }
                    return Some(c);
                }
            }
        }
        for &x in &self.omega {
            for &v in &self.n {
                let l = self.lines.line(x, v);
                let on = &self.lines.members[l];
                if !on.iter().any(|&p| p != x && self.role[p] == OMEGA) {
                    return Some(on.iter().filter(|&&p| self.open(p, OMEGA)).map(|&p| (p, OMEGA)).collect());
                }
            }
        }
        None
    }

    fn assign(&mut self, p: usize, r: u8) {
        self.role[p] = r;
        if r == OMEGA {
            self.omega.push(p);
        } else {
            self.n.push(p);
        }
    }

    fn unassign(&mut self, p: usize) {
        if self.role[p] == OMEGA {
            self.omega.pop();
        } else {
            self.n.pop();
        }
        self.role[p] = 0;
    }

    /// Tries each choice in turn; choice `k` forbids choices `0..k`, so the
    /// subtrees are disjoint.
    fn branch(&mut self, choices: &[(usize, u8)]) {
        let saved: Vec<(usize, u8)> = choices.iter().map(|&(p, _)| (p, self.allowed[p])).collect();
        for &(p, r) in choices {
            if self.size() < self.max_points {
                self.assign(p, r);
                self.run(true);
                self.unassign(p);
            }
            self.allowed[p] &= !r;
        }
        for (p, a) in saved.into_iter().rev() {
            self.allowed[p] = a;
        }
    }

    /// `fresh`: the chosen sets changed since the parent node.
    fn run(&mut self, fresh: bool) {
        if let Some(c) = self.requirement() {
            if self.size() < self.max_points {
                self.branch(&c);
            }
            return;
        }
        if fresh {
            self.record();
        }
        if self.size() == self.max_points {
            return;
        }
        let Some(p) = (0..self.pts.len()).find(|&p| self.role[p] == 0 && self.allowed[p] != 0) else {
            return;
        };
        let saved = self.allowed[p];
        for r in [OMEGA, NSET] {
            if saved & r != 0 {
                self.assign(p, r);
                self.run(true);
                self.unassign(p);
            }
        }
        self.allowed[p] = 0;
        self.run(false);
        self.allowed[p] = saved;
    }

    fn record(&mut self) {
        self.out.configurations += 1;
        let om: Vec<&ProjPoint> = self.omega.iter().map(|&i| &self.pts[i]).collect();
        let dim = span_rank(&om).saturating_sub(1);
        if self.out.max_span_dim.is_none_or(|m| dim > m) {
            self.out.max_span_dim = Some(dim);
            let n = self.n.iter().map(|&i| self.pts[i].clone()).collect();
            self.out.example = Some((om.into_iter().cloned().collect(), n));
        }
    }
}

fn search_conditions(pts: &[ProjPoint], cond: Conditions, max_points: usize) -> SearchOutcome {
    let parts: Vec<SearchOutcome> = (0..pts.len())
        .into_par_iter()
        .map(|first| {
            let mut s = Search {
                pts,
                lines: Lines::new(pts),
                cond,
                max_points,
                role: vec![0; pts.len()],
                // the least element of Ω is `first`
                allowed: (0..pts.len()).map(|p| if p < first { NSET } else { OMEGA | NSET }).collect(),
                omega: Vec::new(),
                n: Vec::new(),
                out: SearchOutcome { configurations: 0, max_span_dim: None, example: None },
            };
            s.assign(first, OMEGA);
            s.run(true);
            s.out
        })
        .collect();
    let mut total = SearchOutcome { configurations: 0, max_span_dim: None, example: None };
    for p in parts {
        total.configurations += p.configurations;
        if p.max_span_dim > total.max_span_dim {
            total.max_span_dim = p.max_span_dim;
            total.example = p.example;
        }
    }
    total
}

/// Enumerates every pair `(Ω, N)` of disjoint grid-point sets in `P^dim`
/// with `Ω` nonempty and `|Ω| + |N| <= max_points` satisfying each pair of
/// incidence conditions, and records the largest dimension spanned by `Ω`.
/// A bounded empirical check, not a proof.
pub fn dimension_bound_search(dim: usize, grid: i64, max_points: usize) -> Result<DimensionReport> {
    if !(2..=5).contains(&dim) || !(1..=2).contains(&grid) || !(2..=8).contains(&max_points) {
        return Err(Error::Invalid("need dim in 2..=5, grid in 1..=2 and max_points in 2..=8".into()));
    }
    let pts = grid_points(dim, grid);
    Ok(DimensionReport {
        dim,
        grid,
        max_points,
        s2comb: search_conditions(&pts, Conditions::S2Comb, max_points),
        extended: search_conditions(&pts, Conditions::Extended, max_points),
    })
}
