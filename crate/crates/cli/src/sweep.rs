use clap::{Args, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use cohomkit::golden;
use cohomkit::linalg::{rank, Field, Matrix};
use cohomkit::periodicity::{lemma_checks, model, model_catalog, periodicity_spectrum, Model};
use cohomkit::projcomb::{
    apply_basis_change, normal_form, normal_form_triangle, sg_grid_sweep, triangle_classify, ClassifyOptions, Triangle, TriangleKind,
    Vector,
};
use cohomkit::steenrod::{
    bp_leading_coefficient, decompose_chern, descent_trace, eligible, frobenius_power, sl_ideal_counterexample, sq, steenrod_power,
    verify_adem_instance, verify_cartan, verify_wu, PrimeContext,
};
use cohomkit::symmfunc::{mult_monomial, partitions_up_to, product_oracle, Partition, SymFunc};
use cohomkit::weightsets::{classify_with, WeightOrder};
use cohomkit::{Error, Result};

use crate::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    AppendixA,
    AppendixB,
    Periodicity,
    #[value(name = "section-4")]
    Section4,
}

#[derive(Args, Clone, Debug)]
pub struct SweepOptions {
    /// Weight bound for the symmetric-function checks (appendix-a).
    #[arg(long, default_value_t = 8)]
    pub weight: u32,
    /// Primes for appendix-a.
    #[arg(long, value_delimiter = ',', default_value = "2,3,5")]
    pub primes: Vec<u64>,
    /// Weight bound for the S_l ideal check (appendix-a).
    #[arg(long, default_value_t = 12)]
    pub sl_weight: u32,
    /// Seed for the random basis changes (section-4).
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Random images per normal form (section-4).
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    /// Coordinate bound of the Sylvester-Gallai grid (section-4).
    #[arg(long, default_value_t = 2)]
    pub bound: i64,
    /// Largest configuration in the Sylvester-Gallai sweep (section-4).
    #[arg(long, default_value_t = 8)]
    pub max_points: usize,
}

struct Battery {
    rows: Vec<(String, u64, Option<String>)>,
}

impl Battery {
    fn new() -> Self {
        Battery { rows: Vec::new() }
    }

    fn record(&mut self, name: impl Into<String>, count: u64, failure: Option<String>) {
        self.rows.push((name.into(), count, failure));
    }

    fn finish(self, suite: &str, summary: Option<String>) -> Report {
        let failed = self.rows.iter().filter(|r| r.2.is_some()).count();
        let mut text = String::new();
        for (name, count, fail) in &self.rows {
            match fail {
                None => text += &format!("ok   {name} ({count} cases)\n"),
                Some(f) => text += &format!("FAIL {name}: {f}\n"),
            }
        }
        if let Some(s) = &summary {
            text += s;
            text.push('\n');
        }
        if failed == 0 {
            text += &format!("{suite}: all {} checks passed", self.rows.len());
        } else {
            text += &format!("{suite}: {failed} of {} checks failed", self.rows.len());
        }
        let checks: Vec<Value> = self
            .rows
            .iter()
            .map(|(n, c, f)| json!({ "name": n, "cases": c, "ok": f.is_none(), "failure": f }))
            .collect();
        Report::new(failed == 0, text, json!({ "suite": suite, "pass": failed == 0, "summary": summary, "checks": checks }))
    }
}

/// First failing case in `cases` order, as a message.
fn first_failure<T: Sync>(cases: &[T], f: impl Fn(&T) -> Option<String> + Sync + Send) -> Option<String> {
    cases.par_iter().find_map_first(f)
}

fn err(e: Error) -> Option<String> {
    Some(format!("error: {e}"))
}

pub fn run(suite: Suite, o: &SweepOptions) -> Result<Report> {
    match suite {
        Suite::AppendixA => appendix_a(o),
        Suite::AppendixB => appendix_b(),
        Suite::Periodicity => periodicity(),
        Suite::Section4 => section_4(o),
    }
}

fn pairs_total(w: u32) -> Vec<(Partition, Partition)> {
    let all = partitions_up_to(w);
    let mut out = Vec::new();
    for a in &all {
        for b in &all {
            if a.weight() + b.weight() <= w {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out.sort_by_key(|(a, b)| a.weight() + b.weight());
    out
}

fn appendix_a(o: &SweepOptions) -> Result<Report> {
    for &p in &o.primes {
        cohomkit::arith::check_prime(p)?;
    }
    let w = o.weight;
    let mut bat = Battery::new();

    let rows = golden::parse_reference_products(golden::WORKED_PRODUCT)?;
    let bad = golden::diff_products(&rows)?;
    bat.record(
        "worked products",
        rows.len() as u64,
        bad.first().map(|(r, got)| format!("{} * {} = {got}, expected {}", r.left, r.right, r.product)),
    );

    let parts = partitions_up_to(w);
    let pairs: Vec<(&Partition, &Partition)> = parts.iter().flat_map(|a| parts.iter().map(move |b| (a, b))).collect();
    let fail = first_failure(&pairs, |(a, b)| {
        (mult_monomial(a, b) != product_oracle(a, b)).then(|| format!("m{a} * m{b} disagrees with the variable expansion"))
    });
    bat.record(format!("monomial products vs expansion, factors of weight <= {w}"), pairs.len() as u64, fail);

    let cartan_pairs = pairs_total(w);
    for &p in &o.primes {
        let mut ctxs = vec![(PrimeContext::chern(p)?, "P")];
        if p == 2 {
            ctxs.push((PrimeContext::stiefel_whitney(), "Sq"));
        }
        for (ctx, op) in ctxs {
            let cases: Vec<(&Partition, &Partition, u32)> = cartan_pairs
                .iter()
                .flat_map(|(a, b)| (0..=a.weight() + b.weight()).map(move |i| (a, b, i)))
                .collect();
            let fail = first_failure(&cases, |(a, b, i)| {
                let f = SymFunc::monomial((*a).clone());
                let g = SymFunc::monomial((*b).clone());
                match verify_cartan(ctx, *i, &f, &g) {
                    Ok(true) => None,
                    Ok(false) => Some(format!("{op}^{i}(m{a} m{b}) at p={p}")),
                    Err(e) => err(e),
                }
            });
            bat.record(format!("Cartan {op} p={p}, total weight <= {w}"), cases.len() as u64, fail);
        }

        let ctx = PrimeContext::chern(p)?;
        let mut adem = Vec::new();
        for b in 1..=4u32 {
            for a in 1..=4 - b {
                if (a as u64) < p * b as u64 {
                    adem.push((a, b));
                }
            }
        }
        let fail = first_failure(&adem, |&(a, b)| match verify_adem_instance(ctx, a, b, w) {
            Ok(true) => None,
            Ok(false) => Some(format!("P^{a}P^{b} at p={p}")),
            Err(e) => err(e),
        });
        bat.record(format!("Adem p={p}, a+b <= 4, weight <= {w}"), adem.len() as u64, fail);

        let mus = partitions_up_to(w);
        let fail = first_failure(&mus, |mu| {
            let f = SymFunc::monomial(mu.clone());
            for i in mu.weight() + 1..=mu.weight() + 2 {
                match steenrod_power(ctx, i, &f) {
                    Ok(r) if r.is_zero() => {}
                    Ok(_) => return Some(format!("P^{i}(m{mu}) is nonzero at p={p}")),
                    Err(e) => return err(e),
                }
            }
            if mu.weight() <= 6 {
                match steenrod_power(ctx, mu.weight(), &f) {
                    Ok(r) if r == frobenius_power(ctx, &f) => {}
                    Ok(_) => return Some(format!("top power of m{mu} is not the p-th power at p={p}")),
                    Err(e) => return err(e),
                }
            }
            if p == 2 {
                for j in (1..=mu.weight()).step_by(2) {
                    match sq(ctx, j, &f) {
                        Ok(r) if r.is_zero() => {}
                        Ok(_) => return Some(format!("Sq^{j}(m{mu}) is nonzero on Chern classes")),
                        Err(e) => return err(e),
                    }
                }
            }
            None
        });
        bat.record(format!("vanishing and top powers p={p}, weight <= {w}"), mus.len() as u64, fail);

        let mut bp = Vec::new();
        for k in 1..=20u32 {
            for i in 0..=k {
                if ctx.weight_shift(i) < k {
                    bp.push((k, i));
                }
            }
        }
        let fail = first_failure(&bp, |&(k, i)| bp_leading_coefficient(p, k, i).err().map(|e| format!("k={k}, i={i}: {e}")));
        bat.record(format!("Brown-Peterson coefficients p={p}, k <= 20"), bp.len() as u64, fail);

        let ks: Vec<u32> = (1..=30).filter(|&k| eligible(p, k)).collect();
        let fail = first_failure(&ks, |&k| match decompose_chern(p, k) {
            Ok(c) if c.verified && c.leading_coeff != 0 => None,
            Ok(_) => Some(format!("c_{k} certificate not verified")),
            Err(e) => Some(format!("c_{k}: {e}")),
        });
        bat.record(format!("Chern decomposition p={p}, eligible k <= 30"), ks.len() as u64, fail);

        let fail = match sl_ideal_counterexample(p, 1, o.sl_weight)? {
            None => None,
            Some(cx) => Some(format!("m{} * m{} hits m{} with coefficient {}", cx.pm, cx.po, cx.pn, cx.coeff)),
        };
        let count = partitions_up_to(o.sl_weight).len() as u64;
        bat.record(format!("S_1 ideal p={p}, weight <= {}", o.sl_weight), count, fail);

        if p > 2 {
            let lambdas: Vec<u32> = ((p as u32 + 1)..=4 * p as u32).filter(|l| !(*l as u64).is_multiple_of(p)).collect();
            let fail = first_failure(&lambdas, |&l| match descent_trace(p, l) {
                Ok(t) => match t.witness_a {
                    None => Some(format!("lambda={l}: no witness")),
                    Some(a) if l as u64 == p + 1 && a as u64 != (p - 1) / 2 => {
                        Some(format!("lambda={l}: witness {a}, expected {}", (p - 1) / 2))
                    }
                    Some(_) => None,
                },
                Err(e) => Some(format!("lambda={l}: {e}")),
            });
            bat.record(format!("descent p={p}, lambda <= {}", 4 * p), lambdas.len() as u64, fail);
        }
    }

    if o.primes.contains(&2) {
        let cases: Vec<(u32, u32)> = (0..=12u32).flat_map(|k| (0..=k / 2).map(move |i| (k, i))).collect();
        let fail = first_failure(&cases, |&(k, i)| match verify_wu(k, i) {
            Ok(true) => None,
            Ok(false) => Some(format!("Sq^{i}(w_{})", k - i)),
            Err(e) => err(e),
        });
        bat.record("Wu formula, k <= 12", cases.len() as u64, fail);
    }
    Ok(bat.finish("appendix-a", None))
}

fn appendix_b() -> Result<Report> {
    let order = WeightOrder::standard();
    let table = classify_with(&order, false)?;
    let t1 = golden::parse_reference_table(golden::WEIGHT_CLASSES)?;
    let t2 = golden::parse_reference_table(golden::WEIGHT_CLASSES_ALT)?;
    let mut bat = Battery::new();
    let d1 = golden::diff_table(&table, &t1)?;
    bat.record("classification vs reference table", t1.len() as u64, (!d1.is_empty()).then(|| d1.join("; ")));
    let d2 = golden::diff_row_bijection(&order, &t1, &t2)?;
    bat.record("alternate reference table vs reference table, row by row", t2.len() as u64, (!d2.is_empty()).then(|| d2.join("; ")));
    let hist: Vec<String> = table.histogram().iter().map(|(k, v)| format!("{k}:{v}")).collect();
    let yes = table.splitting_count();
    let summary = format!(
        "{} classes, histogram {{{}}}, splitting {}/{}",
        table.classes.len(),
        hist.join(","),
        yes,
        table.classes.len() - yes
    );
    Ok(bat.finish("appendix-b", Some(summary)))
}

fn periodicity() -> Result<Report> {
    let mut bat = Battery::new();
    let q = |m: Model| model(m, Field::Rational);
    let cay = periodicity_spectrum(&q(Model::CayleyPlane)?);
    let ok = cay.exact && cay.spectrum.contains(&8) && !cay.spectrum.contains(&4);
    bat.record("Cayley plane: 8 in spectrum, 4 not", 1, (!ok).then(|| format!("spectrum {:?}", cay.spectrum)));
    for (ctor, deg, name) in [(Model::Cp as fn(usize) -> Model, 2, "cp"), (Model::Hp, 4, "hp")] {
        let mut fail = None;
        // m = 1 is a sphere, where the zero class in degree 1 already induces.
        for m in 2..=4 {
            let r = periodicity_spectrum(&q(ctor(m))?);
            if r.minimal_degree != Some(deg) {
                fail = Some(format!("{name}({m}) minimal degree {:?}", r.minimal_degree));
                break;
            }
        }
        bat.record(format!("{name}(2..4) minimal degree {deg}"), 3, fail);
    }
    for field in [Field::Rational, Field::Prime(3)] {
        let models = model_catalog();
        let fail = first_failure(&models, |&m| match model(m, field) {
            Ok(a) => {
                let r = lemma_checks(&a);
                r.failures.first().map(|f| format!("{m}: {f}"))
            }
            Err(e) => Some(format!("{m}: {e}")),
        });
        bat.record(format!("closure checks over {field}"), models.len() as u64, fail);
    }
    Ok(bat.finish("periodicity", None))
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn sorted(sets: [Vec<Vector>; 3]) -> [Vec<Vector>; 3] {
    sets.map(|mut s| {
        s.sort();
        s
    })
}

/// The kind name and normal form match, and the recorded basis change maps
/// the input onto the normal form.
fn round_trip(t: &Triangle, expect: &str) -> Option<String> {
    let cl = triangle_classify(t, ClassifyOptions::default());
    if cl.kind.name() != expect || !cl.m_bound_holds() {
        return Some(format!("classified as {cl}"));
    }
    let img = apply_basis_change(t, &cl)?;
    let nf = normal_form(&cl.kind, t.dim())?;
    (sorted(img) != sorted(nf)).then(|| format!("basis change does not reach the normal form ({cl})"))
}

fn random_invertible(rng: &mut ChaCha8Rng, d: usize) -> Matrix {
    loop {
        let m: Matrix = (0..d).map(|_| (0..d).map(|_| rat(rng.gen_range(-3..=3))).collect()).collect();
        if rank(Field::Rational, &m) == d {
            return m;
        }
    }
}

fn random_scalar(rng: &mut ChaCha8Rng) -> BigRational {
    let num = rng.gen_range(1..=4) * if rng.gen_bool(0.5) { 1 } else { -1 };
    BigRational::new(num.into(), rng.gen_range(1..=3).into())
}

fn section_4(o: &SweepOptions) -> Result<Report> {
    let mut bat = Battery::new();
    let d = 4;
    let e = |k: usize| -> Vector { (0..d).map(|j| rat((j == k) as i64)).collect() };
    let zero: Vector = vec![rat(0); d];
    let forms = [
        ("type1", TriangleKind::Type1 { a: e(0), b: e(1) }),
        ("type2", TriangleKind::Type2 { a: e(0), b: e(1), c: zero }),
        ("type2", TriangleKind::Type2 { a: e(0), b: e(1), c: e(2) }),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
    for (idx, (name, kind)) in forms.iter().enumerate() {
        let t = normal_form_triangle(kind, d).ok_or_else(|| Error::Consistency("normal form".into()))?;
        let fail = cohomkit::projcomb::triangle_axioms_check(&t).err().or_else(|| round_trip(&t, name));
        bat.record(format!("normal form {} {name} classifies to itself", idx + 1), 1, fail);
        let mut fail = None;
        for s in 0..o.samples {
            let m = random_invertible(&mut rng, d);
            let scalars: [Vec<BigRational>; 3] = std::array::from_fn(|k| t.sets()[k].iter().map(|_| random_scalar(&mut rng)).collect());
            let img = t.transform(&m).rescale(&scalars)?;
            if let Some(f) = round_trip(&img, name) {
                fail = Some(format!("seed {} sample {s}: {f}; image {}", o.seed, img.to_json()));
                break;
            }
        }
        bat.record(format!("normal form {} under random GL and scaling (seed {})", idx + 1, o.seed), o.samples as u64, fail);
    }

    let bad = Triangle::from_ints(&[&[1, 0], &[1, 0]], &[&[0, 1], &[0, 1]], &[&[1, -1], &[1, -1]])?;
    let cl = triangle_classify(&bad, ClassifyOptions::default());
    let fail = (cl.kind.name() != "axiom_violation").then(|| format!("accepted as {cl}"));
    bat.record("({a,a},{b,b},{a-b,a-b}) rejected by linear dependence", 1, fail);

    let rep = sg_grid_sweep(o.bound, o.max_points)?;
    let fail = rep.counterexample.as_ref().map(|c| {
        let pts: Vec<String> = c.iter().map(|p| p.to_string()).collect();
        format!("no ordinary line for {}", pts.join(" "))
    });
    bat.record(
        format!("ordinary lines, <= {} of {} grid points in P^2 (coordinates |x| <= {})", o.max_points, rep.grid_points, o.bound),
        rep.configurations,
        fail,
    );
    Ok(bat.finish("section-4", None))
}
