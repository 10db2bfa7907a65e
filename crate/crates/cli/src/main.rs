use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::Ordering;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use kostant::arith::rational::{parse_rational_list, rat, render_list};
use kostant::cache::default_cache_dir;
use kostant::multiplicity::{
    dominant_character, freudenthal_multiplicity, symbols, tensor_product_oracle,
};
use kostant::nested::count_chambers;
use kostant::partition::kostant_partition_dp;
use kostant::{Algebra, BigInt, Error, Family, FormalResult, MultiPoly, Options, Rational, Result, RootSystem, Weight};

#[derive(Parser)]
#[command(name = "kostant", version, about = "Partition functions, weight multiplicities and tensor product coefficients")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Multiplicity of the weight mu in V(lambda)
    Mult(Pair),
    /// Multiplicity of V(nu) in V(lambda) ⊗ V(mu)
    Tensor(Triple),
    /// Quasipolynomial of the weight multiplicity near (lambda, mu)
    MultPoly(PairPoly),
    /// Quasipolynomial of the tensor coefficient near (lambda, mu, nu)
    TensorPoly(TriplePoly),
    /// Kostant partition function of a vector
    Kpf(Single),
    /// Quasipolynomial of the partition function near a vector
    KpfPoly(Single),
    /// Number of combinatorial chambers
    Chambers(Common),
    /// Convert a weight between fundamental and canonical coordinates
    Convert(Single),
    /// Cross-check against the brute-force oracles on a small grid
    Selftest(Selftest),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Basis {
    Funda,
    Cano,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    rank: usize,
    /// Input coordinates; defaults to cano for A and funda otherwise
    #[arg(long, value_enum)]
    basis: Option<Basis>,
    #[arg(long, value_enum, default_value = "text")]
    output: Output,
    /// MPNS cache directory (default: $KOSTANT_CACHE_DIR or the user cache dir)
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long)]
    no_cache: bool,
    /// Worker threads
    #[arg(long)]
    jobs: Option<usize>,
    /// Print evaluation counters to stderr
    #[arg(long)]
    stats: bool,
}

#[derive(Args)]
struct Pair {
    #[command(flatten)]
    common: Common,
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    #[arg(long, allow_hyphen_values = true)]
    mu: String,
}

#[derive(Args)]
struct Triple {
    #[command(flatten)]
    common: Common,
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    #[arg(long, allow_hyphen_values = true)]
    mu: String,
    #[arg(long, allow_hyphen_values = true)]
    nu: String,
}

#[derive(Args)]
struct PairPoly {
    #[command(flatten)]
    pair: Pair,
    /// Substitute t·lambda, t·mu for the named symbol t
    #[arg(long)]
    stretch: Option<String>,
}

#[derive(Args)]
struct TriplePoly {
    #[command(flatten)]
    triple: Triple,
    /// Substitute t·lambda, t·mu, t·nu for the named symbol t
    #[arg(long)]
    stretch: Option<String>,
}

#[derive(Args)]
struct Single {
    #[command(flatten)]
    common: Common,
    #[arg(long, allow_hyphen_values = true)]
    weight: String,
}

#[derive(Args)]
struct Selftest {
    #[command(flatten)]
    common: Common,
    /// Largest fundamental coordinate on the grid
    #[arg(long, default_value_t = 2)]
    bound: i64,
}

struct Ctx {
    rs: RootSystem,
    basis: Basis,
    output: Output,
    stats: bool,
    opts: Options,
}

impl Ctx {
    fn new(c: &Common) -> Result<Self> {
        let rs = RootSystem::new(c.family, c.rank)?;
        let basis = c.basis.unwrap_or(if c.family == Family::A { Basis::Cano } else { Basis::Funda });
        if let Some(j) = c.jobs {
            rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build_global()
                .map_err(|e| Error::Internal(e.to_string()))?;
        }
        let cache_dir = if c.no_cache { None } else { c.cache_dir.clone().or_else(default_cache_dir) };
        Ok(Ctx { rs, basis, output: c.output, stats: c.stats, opts: Options { cache_dir, ..Options::default() } })
    }

    fn weight(&self, name: &str, s: &str, basis: Basis) -> Result<Weight> {
        let v = parse_rational_list(s)
            .map_err(|e| Error::Usage(format!("--{name}: {e}")))?;
        let w = match basis {
            Basis::Cano => Weight(v),
            Basis::Funda => self.rs.from_funda_to_cano(&v)?,
        };
        self.rs.validate(&w)?;
        Ok(w)
    }

    fn algebra(&self) -> Result<Algebra> {
        Algebra::with_options(&self.rs, self.opts.clone())
    }

    fn query(&self, command: &str, weights: &[(&str, &Weight)]) -> Value {
        let mut q = Map::new();
        q.insert("command".into(), json!(command));
        q.insert("family".into(), json!(self.rs.family().as_str()));
        q.insert("rank".into(), json!(self.rs.rank()));
        for (name, w) in weights {
            q.insert((*name).into(), json!(w.to_string()));
        }
        Value::Object(q)
    }

    fn report(&self, alg: &Algebra) {
        if self.stats {
            let s = &alg.partition().stats;
            eprintln!(
                "valid terms: {}, partition evaluations: {}, memo hits: {}, residue polynomials: {}",
                alg.valid_terms.load(Ordering::Relaxed),
                s.evaluations.load(Ordering::Relaxed),
                s.memo_hits.load(Ordering::Relaxed),
                s.residue_terms.load(Ordering::Relaxed),
            );
        }
    }

    fn emit_value(&self, query: Value, value: &str) -> String {
        match self.output {
            Output::Text => value.to_string(),
            Output::Json => json!({ "query": query, "value": value }).to_string(),
        }
    }

    fn emit_poly(&self, query: Value, r: &FormalResult, check: &Rational) -> String {
        match self.output {
            Output::Text => r.value.to_string(),
            Output::Json => json!({
                "query": query,
                "quasipolynomial": r.value.to_json(),
                "valid_terms": r.valid_terms,
                "chambers": r.chambers,
                "base_point_check": check.to_string(),
            })
            .to_string(),
        }
    }
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}[{i}]")).collect()
}

fn formal_vars(groups: &[&str], n: usize) -> std::sync::Arc<[String]> {
    let all: Vec<String> = groups.iter().flat_map(|g| names(g, n)).collect();
    let refs: Vec<&str> = all.iter().map(String::as_str).collect();
    MultiPoly::names(&refs)
}

fn check_base(r: &FormalResult, point: &[Rational], expected: &BigInt) -> Result<Rational> {
    let v = r.value.eval(point)?;
    if v != Rational::from_integer(expected.clone()) {
        return Err(Error::Internal(format!("quasipolynomial gives {v} at the base point, expected {expected}")));
    }
    Ok(v)
}

fn run(cmd: Command) -> Result<String> {
    match cmd {
        Command::Mult(p) => {
            let ctx = Ctx::new(&p.common)?;
            let (l, m) = (ctx.weight("lambda", &p.lambda, ctx.basis)?, ctx.weight("mu", &p.mu, ctx.basis)?);
            let alg = ctx.algebra()?;
            let v = alg.weight_multiplicity(&l, &m)?;
            ctx.report(&alg);
            Ok(ctx.emit_value(ctx.query("mult", &[("lambda", &l), ("mu", &m)]), &v.to_string()))
        }
        Command::Tensor(p) => {
            let ctx = Ctx::new(&p.common)?;
            let l = ctx.weight("lambda", &p.lambda, ctx.basis)?;
            let m = ctx.weight("mu", &p.mu, ctx.basis)?;
            let n = ctx.weight("nu", &p.nu, ctx.basis)?;
            let alg = ctx.algebra()?;
            let v = alg.tensor_coefficient(&l, &m, &n)?;
            ctx.report(&alg);
            Ok(ctx.emit_value(ctx.query("tensor", &[("lambda", &l), ("mu", &m), ("nu", &n)]), &v.to_string()))
        }
        Command::MultPoly(pp) => {
            let p = &pp.pair;
            let ctx = Ctx::new(&p.common)?;
            let (l, m) = (ctx.weight("lambda", &p.lambda, ctx.basis)?, ctx.weight("mu", &p.mu, ctx.basis)?);
            let alg = ctx.algebra()?;
            let expected = alg.weight_multiplicity(&l, &m)?;
            let (r, point) = match &pp.stretch {
                Some(t) => (alg.weight_multiplicity_stretched(&l, &m, t)?, vec![rat(1)]),
                None => {
                    let n = ctx.rs.dim();
                    let vars = formal_vars(&["x", "y"], n);
                    let integral = matches!(ctx.rs.family(), Family::A | Family::C);
                    let r = alg.weight_multiplicity_quasipoly(&l, &symbols(vars.clone(), 0, n), &m, &symbols(vars, n, n), integral)?;
                    (r, l.iter().chain(m.iter()).cloned().collect())
                }
            };
            let check = check_base(&r, &point, &expected)?;
            ctx.report(&alg);
            Ok(ctx.emit_poly(ctx.query("mult-poly", &[("lambda", &l), ("mu", &m)]), &r, &check))
        }
        Command::TensorPoly(tp) => {
            let p = &tp.triple;
            let ctx = Ctx::new(&p.common)?;
            let l = ctx.weight("lambda", &p.lambda, ctx.basis)?;
            let m = ctx.weight("mu", &p.mu, ctx.basis)?;
            let nu = ctx.weight("nu", &p.nu, ctx.basis)?;
            let alg = ctx.algebra()?;
            let expected = alg.tensor_coefficient(&l, &m, &nu)?;
            let (r, point) = match &tp.stretch {
                Some(t) => (alg.tensor_stretched(&l, &m, &nu, t)?, vec![rat(1)]),
                None => {
                    let n = ctx.rs.dim();
                    let vars = formal_vars(&["x", "y", "z"], n);
                    let integral = matches!(ctx.rs.family(), Family::A | Family::C);
                    let r = alg.tensor_quasipoly(
                        &l,
                        &symbols(vars.clone(), 0, n),
                        &m,
                        &symbols(vars.clone(), n, n),
                        &nu,
                        &symbols(vars, 2 * n, n),
                        integral,
                    )?;
                    (r, l.iter().chain(m.iter()).chain(nu.iter()).cloned().collect())
                }
            };
            let check = check_base(&r, &point, &expected)?;
            ctx.report(&alg);
            Ok(ctx.emit_poly(ctx.query("tensor-poly", &[("lambda", &l), ("mu", &m), ("nu", &nu)]), &r, &check))
        }
        Command::Kpf(s) => {
            let ctx = Ctx::new(&s.common)?;
            let a = ctx.weight("weight", &s.weight, s.common.basis.unwrap_or(Basis::Cano))?;
            let alg = ctx.algebra()?;
            let v = alg.partition().kostant(&a)?;
            ctx.report(&alg);
            Ok(ctx.emit_value(ctx.query("kpf", &[("weight", &a)]), &v.to_string()))
        }
        Command::KpfPoly(s) => {
            let ctx = Ctx::new(&s.common)?;
            let a = ctx.weight("weight", &s.weight, s.common.basis.unwrap_or(Basis::Cano))?;
            let alg = ctx.algebra()?;
            let n = ctx.rs.dim();
            let all = names("x", n);
            let refs: Vec<&str> = all.iter().map(String::as_str).collect();
            let q = alg.partition().kostant_quasipoly(&a, &refs)?;
            let expected = alg.partition().kostant(&a)?;
            let r = FormalResult { value: q, valid_terms: 1, chambers: vec![] };
            let check = check_base(&r, &a, &expected)?;
            ctx.report(&alg);
            Ok(ctx.emit_poly(ctx.query("kpf-poly", &[("weight", &a)]), &r, &check))
        }
        Command::Chambers(c) => {
            let ctx = Ctx::new(&c)?;
            let n = count_chambers(&ctx.rs)?;
            Ok(ctx.emit_value(ctx.query("chambers", &[]), &n.to_string()))
        }
        Command::Convert(s) => {
            let ctx = Ctx::new(&s.common)?;
            let v = parse_rational_list(&s.weight).map_err(|e| Error::Usage(format!("--weight: {e}")))?;
            let out = match ctx.basis {
                Basis::Funda => ctx.rs.from_funda_to_cano(&v)?.0,
                Basis::Cano => {
                    let w = Weight(v);
                    ctx.rs.validate(&w)?;
                    ctx.rs.from_cano_to_funda(&w)?
                }
            };
            let text = render_list(&out);
            Ok(match ctx.output {
                Output::Text => text,
                Output::Json => json!({
                    "query": ctx.query("convert", &[]),
                    "input": s.weight,
                    "value": text,
                })
                .to_string(),
            })
        }
        Command::Selftest(t) => selftest(&t),
    }
}

fn funda_grid(r: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..r {
        out = out.into_iter().flat_map(|v| (0..=bound).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

fn selftest(t: &Selftest) -> Result<String> {
    let ctx = Ctx::new(&t.common)?;
    let rs = &ctx.rs;
    let alg = ctx.algebra()?;
    let to_cano = |v: &Vec<i64>| rs.from_funda_to_cano(&v.iter().map(|&x| rat(x)).collect::<Vec<_>>());
    let mut checks = 0usize;
    let mut failures = Vec::new();
    let grid = funda_grid(rs.rank(), t.bound);
    for lv in &grid {
        let lam = to_cano(lv)?;
        for (mu, m) in dominant_character(rs, &lam)? {
            checks += 1;
            if alg.weight_multiplicity(&lam, &mu)? != m {
                failures.push(format!("mult {lam} {mu}"));
            }
            let a = &lam - &mu;
            checks += 1;
            if alg.partition().kostant(&a)? != kostant_partition_dp(rs, &a).into() {
                failures.push(format!("kpf {a}"));
            }
        }
        checks += 1;
        if freudenthal_multiplicity(rs, &lam, &lam)? != 1.into() {
            failures.push(format!("highest weight {lam}"));
        }
    }
    let small = funda_grid(rs.rank(), t.bound.min(1));
    for lv in &small {
        for mv in &small {
            let (lam, mu) = (to_cano(lv)?, to_cano(mv)?);
            for (nu, c) in tensor_product_oracle(rs, &lam, &mu)? {
                checks += 1;
                if alg.tensor_coefficient(&lam, &mu, &nu)? != c {
                    failures.push(format!("tensor {lam} {mu} {nu}"));
                }
            }
        }
    }
    ctx.report(&alg);
    if failures.is_empty() {
        Ok(format!("{checks} checks passed"))
    } else {
        Err(Error::Internal(format!("{} of {checks} checks failed: {}", failures.len(), failures.join("; "))))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{out}").and_then(|_| stdout.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    eprintln!("kostant: {e}");
                    ExitCode::from(1)
                }
                _ => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("kostant: {e}");
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}
