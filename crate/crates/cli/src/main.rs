use std::io::Read;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cohomkit::golden;
use cohomkit::linalg::Field;
use cohomkit::periodicity::{lemma_checks, model, periodicity_spectrum, GradedAlgebra, Model};
use cohomkit::projcomb::{
    extended_sg_check, hansen_witness, s2comb_check, sylvester_gallai_witness, triangle_classify, ClassifyOptions, Configuration,
    SgWitness, Triangle, TriangleKind,
};
use cohomkit::steenrod::{
    adem_expansion, bp_leading_coefficient, chern_coefficient_profile, decompose_chern, descent_trace, sl_ideal_counterexample,
    steenrod_power, verify_adem_instance, verify_wu, PrimeContext,
};
use cohomkit::symmfunc::{mult, parse_symfunc, SymFunc};
use cohomkit::weightsets::{classify_with, WeightOrder};
use cohomkit::{Error, Result};

mod sweep;

#[derive(Parser)]
#[command(name = "cohomkit", version, about = "Exact checks for symmetric functions, Steenrod powers, periodicity and weight sets")]
struct Cli {
    /// Output format; `table` is accepted everywhere and renders like `text`.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads for parallel sweeps.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: u16,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Product of two symmetric functions in the monomial basis.
    Mult {
        left: String,
        right: String,
        /// Reduce coefficients mod this prime.
        #[arg(long)]
        modulus: Option<u64>,
    },
    /// Reduced power P^i (Sq^i for --var-degree 1) of a symmetric function.
    Steenrod {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        i: u32,
        #[arg(long, default_value_t = 2)]
        var_degree: u8,
        f: String,
    },
    /// Wu formula for Sq^i(w_{k-i}); all admissible i when --i is omitted.
    VerifyWu {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        i: Option<u32>,
    },
    /// Coefficient of c_k in P^i(c_{k-(p-1)i}) against the binomial formula.
    VerifyBp {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        i: u32,
    },
    /// Adem relation for P^a P^b on all monomials up to a weight.
    VerifyAdem {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
        #[arg(long, default_value_t = 6)]
        weight: u32,
    },
    /// Ideal property of S_l under multiplication mod p.
    VerifySl {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        l: u32,
        #[arg(long, default_value_t = 6)]
        weight: u32,
    },
    /// Writes c_k as a multiple of a reduced power modulo decomposables.
    DecomposeChern {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
    },
    /// Residue table a_j = ceil(j(p-1)/lambda) and the descent witness.
    Descent {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        lambda: u32,
    },
    /// Periodicity spectrum of a model or of an algebra given as JSON.
    #[command(group(ArgGroup::new("source").required(true).args(["model", "algebra"])))]
    Periodicity {
        /// sphere(n), cp(m), hp(m), cayley_plane or sphere_cross_hp(h,k).
        #[arg(long)]
        model: Option<String>,
        /// Algebra JSON: a file path, `-` for stdin, or inline JSON.
        #[arg(long)]
        algebra: Option<String>,
        /// Coefficient field for --model: Q or Fp:<p>.
        #[arg(long, default_value = "Q")]
        field: String,
        /// Also run the factor, sum and gcd closure checks.
        #[arg(long)]
        lemmas: bool,
    },
    /// Classifies the star-condition weight sets of T^4 and diffs the result
    /// against the shipped reference table.
    ClassifyWeights {
        /// Extend by arbitrary new weights instead of order-increasing ones.
        #[arg(long)]
        unordered: bool,
        /// Use the alternative enumeration order.
        #[arg(long)]
        alternative_order: bool,
    },
    /// Ordinary line of a configuration, or a collinearity certificate.
    SgCheck { config: String },
    /// Hansen hyperplane of a spanning configuration.
    HansenCheck { config: String },
    /// Two-set line conditions for disjoint configurations Omega and N.
    S2combCheck {
        omega: String,
        n: String,
        /// Check the extended condition (third point of Omega or N on each line).
        #[arg(long)]
        extended: bool,
    },
    /// Normal form of a triangle of weight sets.
    TriangleClassify {
        triangle: String,
        /// Skip the linear-dependence requirement on the products.
        #[arg(long)]
        no_lindep: bool,
    },
    /// Runs a verification battery.
    Sweep {
        #[arg(value_enum)]
        suite: sweep::Suite,
        #[command(flatten)]
        opts: sweep::SweepOptions,
    },
}

pub struct Report {
    pub pass: bool,
    pub text: String,
    pub json: Value,
}

impl Report {
    pub fn new(pass: bool, text: impl Into<String>, json: Value) -> Self {
        Report { pass, text: text.into(), json }
    }
}

/// A file path, `-` for stdin, or the JSON text itself.
fn load(arg: &str) -> Result<String> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(arg.to_string());
    }
    let mut s = String::new();
    if arg == "-" {
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Invalid(format!("stdin: {e}")))?;
    } else {
        s = std::fs::read_to_string(arg).map_err(|e| Error::Invalid(format!("{arg}: {e}")))?;
    }
    Ok(s)
}

/// Text like `(2,1) + 3(1,1,1)`, or the JSON form inline.
fn symfunc_arg(arg: &str) -> Result<SymFunc> {
    if arg.trim_start().starts_with('{') {
        SymFunc::from_json_str(arg)
    } else {
        parse_symfunc(arg)
    }
}

fn coords(p: &cohomkit::projcomb::ProjPoint) -> Vec<i64> {
    p.coords().to_vec()
}

fn run(cmd: Command) -> Result<Report> {
    match cmd {
        Command::Mult { left, right, modulus } => {
            let mut prod = mult(&symfunc_arg(&left)?, &symfunc_arg(&right)?);
            if let Some(p) = modulus {
                prod = prod.reduce_mod(p)?;
            }
            Ok(Report::new(true, prod.to_string(), json!({ "product": prod.to_json() })))
        }
        Command::Steenrod { p, i, var_degree, f } => {
            let ctx = PrimeContext::new(p, var_degree)?;
            let f = symfunc_arg(&f)?;
            let img = steenrod_power(ctx, i, &f)?;
            let op = if var_degree == 1 { format!("Sq^{i}") } else { format!("P^{i}") };
            Ok(Report::new(true, format!("{op}({f}) = {img}"), json!({ "p": p, "i": i, "var_degree": var_degree, "result": img.to_json() })))
        }
        Command::VerifyWu { k, i } => {
            let is: Vec<u32> = match i {
                Some(i) => vec![i],
                None => (0..=k / 2).collect(),
            };
            let mut failed = Vec::new();
            for &i in &is {
                if !verify_wu(k, i)? {
                    failed.push(i);
                }
            }
            let text = if failed.is_empty() {
                format!("Wu formula holds for k={k}, i in {is:?}")
            } else {
                format!("Wu formula fails for k={k} at i = {failed:?}")
            };
            Ok(Report::new(failed.is_empty(), text, json!({ "k": k, "checked": is, "failed": failed })))
        }
        Command::VerifyBp { p, k, i } => {
            let ctx = PrimeContext::chern(p)?;
            let shift = ctx.weight_shift(i);
            if shift >= k {
                return Err(Error::Precondition(format!("need k - (p-1)i >= 1, got k={k}, i={i}, p={p}")));
            }
            let source = k - shift;
            let profile = chern_coefficient_profile(ctx, i, source)?;
            match bp_leading_coefficient(p, k, i) {
                Ok(c) => Ok(Report::new(
                    true,
                    format!("coefficient of c_{k} in P^{i}(c_{source}) mod {p}: {c}\nP^{i}(c_{source}) = {profile}"),
                    json!({ "p": p, "k": k, "i": i, "source": source, "coefficient": c, "profile": profile.to_json() }),
                )),
                Err(Error::Consistency(msg)) => Ok(Report::new(false, msg.clone(), json!({ "p": p, "k": k, "i": i, "error": msg }))),
                Err(e) => Err(e),
            }
        }
        Command::VerifyAdem { p, a, b, weight } => {
            let ctx = PrimeContext::chern(p)?;
            let ok = verify_adem_instance(ctx, a, b, weight)?;
            let terms = adem_expansion(p, a, b)?;
            let rhs: Vec<String> = terms.iter().map(|t| format!("{} P^{}P^{}", t.coeff, t.outer, t.inner)).collect();
            let rhs = if rhs.is_empty() { "0".to_string() } else { rhs.join(" + ") };
            let text = format!("P^{a}P^{b} = {rhs} (mod {p}) on weight <= {weight}: {}", if ok { "holds" } else { "FAILS" });
            Ok(Report::new(ok, text, json!({ "p": p, "a": a, "b": b, "weight": weight, "holds": ok, "expansion": terms })))
        }
        Command::VerifySl { p, l, weight } => match sl_ideal_counterexample(p, l, weight)? {
            None => Ok(Report::new(
                true,
                format!("S_{l} is an ideal mod {p} up to weight {weight}"),
                json!({ "p": p, "l": l, "weight": weight, "holds": true }),
            )),
            Some(cx) => Ok(Report::new(
                false,
                format!("m{} * m{} has coefficient {} on m{} outside S_{l} (mod {p})", cx.pm, cx.po, cx.coeff, cx.pn),
                json!({ "p": p, "l": l, "weight": weight, "holds": false,
                        "counterexample": { "pm": cx.pm.parts(), "po": cx.po.parts(), "pn": cx.pn.parts(), "coeff": cx.coeff } }),
            )),
        },
        Command::DecomposeChern { p, k } => {
            let cert = decompose_chern(p, k)?;
            let ok = cert.verified && cert.leading_coeff != 0;
            let text = format!(
                "k = {} * {p}^{}: P^{}(c_{}) = {}c_{k} + ({}) mod {p}{}",
                cert.lambda,
                cert.i,
                cert.op_exponent,
                cert.source_index,
                if cert.leading_coeff == 1 { String::new() } else { cert.leading_coeff.to_string() },
                cert.decomposable_part,
                if ok { "" } else { "  [NOT VERIFIED]" }
            );
            Ok(Report::new(ok, text, cert.to_json()))
        }
        Command::Descent { p, lambda } => {
            let tr = descent_trace(p, lambda)?;
            let mut text = String::from("   j  a_j  deg_factor\n");
            for r in &tr.rows {
                text += &format!("{:>4} {:>4} {:>11}\n", r.j, r.a_j, r.deg_factor);
            }
            match tr.witness_a {
                Some(a) => text += &format!("witness a = {a} (bound {})", (p - 1) / 2),
                None => text += "no witness a <= (p-1)/2",
            }
            Ok(Report::new(tr.witness_a.is_some(), text, serde_json::to_value(&tr)?))
        }
        Command::Periodicity { model: m, algebra, field, lemmas } => {
            let alg = match (m, algebra) {
                (Some(m), _) => model(m.parse::<Model>()?, field.parse::<Field>()?)?,
                (None, Some(src)) => GradedAlgebra::from_json_str(&load(&src)?)?,
                (None, None) => unreachable!("clap enforces the source group"),
            };
            let rep = periodicity_spectrum(&alg);
            let mut text = format!(
                "spectrum {:?}{}\nminimal degree {}",
                rep.spectrum,
                if rep.exact { "" } else { " (sampled, lower bound)" },
                rep.minimal_degree.map_or("none".to_string(), |d| d.to_string())
            );
            for (d, x) in &rep.witnesses {
                text += &format!("\n  degree {d}: {x}");
            }
            let mut out = rep.to_json();
            let mut pass = true;
            if lemmas {
                let lr = lemma_checks(&alg);
                pass = lr.failures.is_empty();
                text += &format!(
                    "\nclosure checks: {} factorizations, {} sums, {} failures",
                    lr.factorizations_checked,
                    lr.sums_checked,
                    lr.failures.len()
                );
                for f in &lr.failures {
                    text += &format!("\n  {f}");
                }
                out["lemmas"] = json!({
                    "factorizations_checked": lr.factorizations_checked,
                    "sums_checked": lr.sums_checked,
                    "failures": lr.failures,
                });
            }
            Ok(Report::new(pass, text, out))
        }
        Command::ClassifyWeights { unordered, alternative_order } => {
            let order = if alternative_order { WeightOrder::alternative() } else { WeightOrder::standard() };
            let table = classify_with(&order, unordered)?;
            let diff = golden::diff_table(&table, &golden::parse_reference_table(golden::WEIGHT_CLASSES)?)?;
            let mut text = table.to_string();
            text.pop();
            for d in &diff {
                text += &format!("\nreference mismatch: {d}");
            }
            let mut out = table.to_json();
            out["matches_reference"] = json!(diff.is_empty());
            out["mismatches"] = json!(diff);
            Ok(Report::new(diff.is_empty(), text, out))
        }
        Command::SgCheck { config } => {
            let cfg = Configuration::from_json_str(&load(&config)?)?;
            let w = sylvester_gallai_witness(&cfg)?;
            let text = match &w {
                SgWitness::OrdinaryLine(a, b) => format!("ordinary line through {a} and {b}"),
                SgWitness::Collinear { rank } => format!("collinear configuration (rank {rank})"),
            };
            Ok(Report::new(true, text, w.to_json()))
        }
        Command::HansenCheck { config } => {
            let cfg = Configuration::from_json_str(&load(&config)?)?;
            let h = hansen_witness(&cfg)?;
            let pts: Vec<String> = h.subspace_points.iter().map(|p| p.to_string()).collect();
            let text = format!("hyperplane with normal {}: exceptional point {}, remaining points {}", h.normal, h.exceptional, pts.join(" "));
            Ok(Report::new(true, text, h.to_json()))
        }
        Command::S2combCheck { omega, n, extended } => {
            let o = Configuration::from_json_str(&load(&omega)?)?;
            let nn = Configuration::from_json_str(&load(&n)?)?;
            let res = if extended { extended_sg_check(&o, &nn)? } else { s2comb_check(&o, &nn)? };
            let name = if extended { "extended" } else { "s2comb" };
            Ok(match res {
                None => Report::new(true, format!("{name} conditions hold"), json!({ "conditions": name, "holds": true })),
                Some(v) => Report::new(
                    false,
                    format!("{name} condition {} fails on the line through {} and {}", v.condition, v.through.0, v.through.1),
                    json!({ "conditions": name, "holds": false, "violation": v.to_json(),
                            "through": [coords(&v.through.0), coords(&v.through.1)] }),
                ),
            })
        }
        Command::TriangleClassify { triangle, no_lindep } => {
            let t = Triangle::from_json_str(&load(&triangle)?)?;
            let cl = triangle_classify(&t, ClassifyOptions { lindep: !no_lindep });
            let pass = !matches!(cl.kind, TriangleKind::AxiomViolation { .. });
            let mut text = cl.to_string();
            if let Some(m) = &cl.basis_change {
                text += "\nbasis change:";
                for row in m {
                    let r: Vec<String> = row.iter().map(cohomkit::arith::format_rational).collect();
                    text += &format!("\n  [{}]", r.join(", "));
                }
            }
            Ok(Report::new(pass, text, cl.to_json()))
        }
        Command::Sweep { suite, opts } => sweep::run(suite, &opts),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs as usize).build_global() {
        eprintln!("error: thread pool: {e}");
        return ExitCode::from(2);
    }
    let format = cli.format;
    match run(cli.command) {
        Ok(r) => {
            if format == Format::Json {
                println!("{}", serde_json::to_string_pretty(&r.json).expect("serializable report"));
            } else {
                println!("{}", r.text);
            }
            if r.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Error::Consistency(msg)) => {
            eprintln!("error: internal consistency check failed: {msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
