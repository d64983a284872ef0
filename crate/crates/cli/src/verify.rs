//! Verification suites with structured pass/fail reports.

use std::str::FromStr;

use clap::{Args, Subcommand};
use hermsph::hall_littlewood::{
    expected_norm, inner_product_numeric, p_poly, torus_quadrature, PlancherelDensity,
};
use hermsph::padic_cartan::sample::random_k;
use hermsph::padic_cartan::{
    cartan_reduce, make_x_lambda, max_precision, omega_bruteforce_m2, orbit_invariants,
    valuation_distribution_m2, Field,
};
use hermsph::schwartz_plancherel::{
    inversion_check, plancherel_check, rank_basis_check, SchwartzFn,
};
use hermsph::spherical::{
    check_functional_equation, check_holomorphic_invariant, omega_closed_rank1, s_to_z,
    sample_point, weyl_group, SpaceParams,
};
use hermsph::weyl_roots::Signature;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::par::{item_seed, par_map, thread_count};
use crate::Output;

pub const DEFAULT_SEED: u64 = 7;

#[derive(Args, Debug, Clone)]
pub struct Space {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    e: Option<u32>,
    /// Residue prime; must agree with e (e = 1 exactly when p = 2).
    #[arg(long)]
    prime: Option<u64>,
    /// Numeric q; defaults to the prime.
    #[arg(long)]
    q: Option<f64>,
}

struct Resolved {
    params: SpaceParams,
    prime: u64,
    q: f64,
}

impl Space {
    fn resolve(&self) -> Result<Resolved, CliError> {
        let e = match (self.e, self.prime) {
            (Some(e), _) => e,
            (None, Some(p)) => (p == 2) as u32,
            (None, None) => 0,
        };
        let params = SpaceParams::new(self.m, e)?;
        let prime = match self.prime {
            Some(p) => {
                Field::new(p, 1)?;
                if (p == 2) as u32 != e {
                    return Err(CliError::Invalid(format!(
                        "prime {p} is inconsistent with e = {e} (e = 1 exactly when p = 2)"
                    )));
                }
                p
            }
            None if e == 1 => 2,
            None => 3,
        };
        let q = self.q.unwrap_or(prime as f64);
        if !(q > 1.0) {
            return Err(CliError::Invalid(format!("q must exceed 1, got {q}")));
        }
        Ok(Resolved { params, prime, q })
    }

    fn json(&self, r: &Resolved) -> Value {
        json!({"m": r.params.m, "n": r.params.n, "e": r.params.e, "prime": r.prime, "q": r.q})
    }
}

#[derive(Subcommand, Debug)]
pub enum Suite {
    /// Functional equations under every Weyl group element.
    Feq {
        #[command(flatten)]
        space: Space,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lambda: Option<Vec<i32>>,
        #[arg(long, default_value_t = 2)]
        max_part: i32,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Orthogonality of the P_mu under the Plancherel density.
    Orth {
        /// Matrix size; fixes the rank and parity.
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 3.0)]
        q: f64,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, default_value_t = 3)]
        max_part: i32,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Parseval identity for orbit indicators and total mass of the measure.
    Plancherel {
        #[command(flatten)]
        space: Space,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, default_value_t = 2)]
        max_part: i32,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Reconstruction of a random Schwartz function from its transform.
    Inversion {
        #[command(flatten)]
        space: Space,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, default_value_t = 3)]
        terms: usize,
        #[arg(long, default_value_t = 3)]
        max_part: i32,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Nonsingularity of the free-module determinant.
    Rank {
        #[command(flatten)]
        space: Space,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Brute-force m = 2 integral against the closed form.
    Oracle {
        #[arg(long, default_value_t = 3)]
        prime: u64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        lambda: i32,
        /// Complex exponent, e.g. `1`, `2.5`, `1+1i`.
        #[arg(long, default_value = "1")]
        s: String,
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Cartan reduction of random K-conjugates of x_lambda.
    Cartan {
        #[command(flatten)]
        space: Space,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lambda: Option<Vec<i32>>,
        #[arg(long, default_value_t = 2)]
        max_part: i32,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// p-adic working precision.
        #[arg(long)]
        precision: Option<u32>,
        /// Number of generator factors in each random K element.
        #[arg(long, default_value_t = 6)]
        steps: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Bound {
    Upper,
    Lower,
}

struct Check {
    name: String,
    value: f64,
    tol: f64,
    bound: Bound,
}

impl Check {
    fn upper(name: String, value: f64, tol: f64) -> Self {
        Check { name, value, tol, bound: Bound::Upper }
    }

    fn lower(name: String, value: f64, tol: f64) -> Self {
        Check { name, value, tol, bound: Bound::Lower }
    }

    fn exact(name: String, ok: bool) -> Self {
        Check::upper(name, if ok { 0.0 } else { 1.0 }, 0.0)
    }

    fn pass(&self) -> bool {
        match self.bound {
            Bound::Upper => self.value <= self.tol,
            Bound::Lower => self.value > self.tol,
        }
    }

    fn json(&self) -> Value {
        json!({
            "name": self.name,
            "value": self.value,
            "tolerance": self.tol,
            "bound": if self.bound == Bound::Upper { "upper" } else { "lower" },
            "pass": self.pass(),
        })
    }
}

struct Report {
    suite: &'static str,
    seed: Option<(u64, bool)>,
    config: Value,
    checks: Vec<Check>,
}

impl Report {
    fn output(self) -> Output {
        let ok = self.checks.iter().all(Check::pass);
        let passed = self.checks.iter().filter(|c| c.pass()).count();
        let mut text = format!("suite: {}\n", self.suite);
        let seed_json = match self.seed {
            Some((s, default)) => {
                text.push_str(&format!("seed: {s}{}\n", if default { " (default)" } else { "" }));
                json!(s)
            }
            None => Value::Null,
        };
        text.push_str(&format!("config: {}\n", self.config));
        text.push_str(&format!("checks: {} ({} passed)\n", self.checks.len(), passed));
        for (bound, label) in [(Bound::Upper, "max residual"), (Bound::Lower, "min value")] {
            let worst = self.checks.iter().filter(|c| c.bound == bound).max_by(|a, b| {
                let (x, y) = match bound {
                    Bound::Upper => (a.value, b.value),
                    Bound::Lower => (b.value, a.value),
                };
                x.total_cmp(&y)
            });
            if let Some(c) = worst {
                text.push_str(&format!("{label}: {:.3e} ({}, tolerance {:.0e})\n", c.value, c.name, c.tol));
            }
        }
        for c in self.checks.iter().filter(|c| !c.pass()) {
            text.push_str(&format!("FAIL {}: value {:.3e}, tolerance {:.0e}\n", c.name, c.value, c.tol));
        }
        text.push_str(if ok { "PASS\n" } else { "FAIL\n" });
        Output {
            json: json!({
                "command": "verify",
                "suite": self.suite,
                "seed": seed_json,
                "config": self.config,
                "checks": self.checks.iter().map(Check::json).collect::<Vec<_>>(),
                "pass": ok,
            }),
            text,
            ok,
        }
    }
}

fn seed_of(s: Option<u64>) -> (u64, bool) {
    s.map_or((DEFAULT_SEED, true), |s| (s, false))
}

fn signatures(
    params: &SpaceParams,
    lambda: &Option<Vec<i32>>,
    max_part: i32,
) -> Result<Vec<Signature>, CliError> {
    match lambda {
        Some(l) => Ok(vec![params.signature(l)?]),
        None => Ok(Signature::enumerate_box(params.n, params.e as i32, max_part)),
    }
}

fn default_grid(n: usize) -> usize {
    if n == 1 {
        256
    } else {
        64
    }
}

/// Transforms of indicators have higher degree than the `P_mu` in `orth`.
fn transform_grid(n: usize) -> usize {
    if n == 1 {
        256
    } else {
        128
    }
}

fn collect<T>(v: Vec<Result<T, CliError>>) -> Result<Vec<T>, CliError> {
    v.into_iter().collect()
}

pub fn run(suite: &Suite) -> Result<Output, CliError> {
    let threads = thread_count()?;
    let report = match suite {
        Suite::Feq { space, lambda, max_part, samples, seed, tol } => {
            let r = space.resolve()?;
            let sigs = signatures(&r.params, lambda, *max_part)?;
            let w = weyl_group(&r.params)?;
            let jobs: Vec<(usize, usize)> =
                (0..sigs.len()).flat_map(|i| (0..w.len()).map(move |j| (i, j))).collect();
            let seed = seed_of(*seed);
            let mut checks = collect(par_map(&jobs, threads, |k, &(i, j)| {
                let mut rng = ChaCha8Rng::seed_from_u64(item_seed(seed.0, k));
                let res = check_functional_equation(
                    sigs[i].entries(),
                    &w[j],
                    &r.params,
                    r.q,
                    *samples,
                    &mut rng,
                )?;
                Ok(Check::upper(format!("lambda={} sigma={}", sigs[i], w[j]), res, *tol))
            }))?;
            for s in &sigs {
                let ok = check_holomorphic_invariant(s.entries(), &r.params).is_ok();
                checks.push(Check::exact(format!("lambda={s} holomorphic W-invariant"), ok));
            }
            let mut config = space.json(&r);
            config["samples"] = json!(samples);
            Report { suite: "feq", seed: Some(seed), config, checks }
        }
        Suite::Orth { m, q, grid, max_part, tol } => {
            let params = SpaceParams::new(*m, 0)?;
            let n = params.n;
            if !(*q > 1.0) {
                return Err(CliError::Invalid(format!("q must exceed 1, got {q}")));
            }
            let grid = grid.unwrap_or(default_grid(n));
            let tol = tol.unwrap_or(if n == 1 { 1e-8 } else { 1e-6 });
            let t = params.t_spec();
            let sigs = Signature::enumerate_box(n, 0, *max_part);
            let polys = collect(
                sigs.iter()
                    .map(|s| Ok(p_poly(s, n, &t)?))
                    .collect(),
            )?;
            let jobs: Vec<(usize, usize)> =
                (0..sigs.len()).flat_map(|i| (i..sigs.len()).map(move |j| (i, j))).collect();
            let v = q.sqrt();
            let checks = collect(par_map(&jobs, threads, |_, &(i, j)| {
                let got = inner_product_numeric(&polys[i], &polys[j], n, &t, *q, grid)?;
                let want = if i == j {
                    let (a, b) = expected_norm(&sigs[i], &t)?;
                    a.eval(v) / b.eval(v)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                Ok(Check::upper(format!("<P{}, P{}>", sigs[i], sigs[j]), (got - want).norm(), tol))
            }))?;
            let config = json!({"m": m, "n": n, "q": q, "grid": grid, "max_part": max_part});
            Report { suite: "orth", seed: None, config, checks }
        }
        Suite::Plancherel { space, grid, max_part, tol } => {
            let r = space.resolve()?;
            let n = r.params.n;
            let grid = grid.unwrap_or(transform_grid(n));
            let tol = tol.unwrap_or(if n == 1 { 1e-8 } else { 1e-5 });
            let sigs = Signature::enumerate_box(n, r.params.e as i32, *max_part);
            let jobs: Vec<(usize, usize)> =
                (0..sigs.len()).flat_map(|i| (i..sigs.len()).map(move |j| (i, j))).collect();
            let mut checks = collect(par_map(&jobs, threads, |_, &(i, j)| {
                let a = SchwartzFn::indicator(r.params, sigs[i].entries())?;
                let b = SchwartzFn::indicator(r.params, sigs[j].entries())?;
                let (l, rr) = plancherel_check(&a, &b, r.q, grid)?;
                Ok(Check::upper(format!("<ch{}, ch{}>", sigs[i], sigs[j]), (l - rr).norm(), tol))
            }))?;
            let dens = PlancherelDensity::new(n, &r.params.t_spec(), r.q)?;
            let mass = torus_quadrature(n, grid, |x| Ok(Complex64::new(dens.at(x)?, 0.0)))?;
            checks.push(Check::upper("total mass".into(), (mass - 1.0).norm(), 1e-10));
            let mut config = space.json(&r);
            config["grid"] = json!(grid);
            config["max_part"] = json!(max_part);
            Report { suite: "plancherel", seed: None, config, checks }
        }
        Suite::Inversion { space, grid, terms, max_part, seed, tol } => {
            let r = space.resolve()?;
            let n = r.params.n;
            let grid = grid.unwrap_or(transform_grid(n));
            let seed = seed_of(*seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
            let sigs = Signature::enumerate_box(n, r.params.e as i32, *max_part);
            let mut phi = SchwartzFn::zero(r.params);
            if *terms > sigs.len() {
                return Err(CliError::Invalid(format!(
                    "{terms} terms requested but only {} signatures have parts <= {max_part}",
                    sigs.len()
                )));
            }
            for i in rand::seq::index::sample(&mut rng, sigs.len(), *terms) {
                let s = &sigs[i];
                let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                phi.add_term(s.entries(), c)?;
            }
            let probe = Signature::enumerate_box(n, r.params.e as i32, max_part + 1);
            let checks = collect(par_map(&probe, threads, |_, s| {
                let (rec, orig) = inversion_check(&phi, s.entries(), r.q, grid)?;
                Ok(Check::upper(format!("phi{s}"), (rec - orig).norm(), *tol))
            }))?;
            let mut config = space.json(&r);
            config["grid"] = json!(grid);
            config["phi"] = phi
                .terms()
                .map(|(l, c)| json!({"lambda": l, "coeff": [c.re, c.im]}))
                .collect();
            Report { suite: "inversion", seed: Some(seed), config, checks }
        }
        Suite::Rank { space, samples, seed, tol } => {
            let r = space.resolve()?;
            let seed = seed_of(*seed);
            let idx: Vec<usize> = (0..*samples).collect();
            let checks = collect(par_map(&idx, threads, |k, _| {
                let mut rng = ChaCha8Rng::seed_from_u64(item_seed(seed.0, k));
                let z = sample_point(&mut rng, r.params.n, r.q, 0.25);
                let d = rank_basis_check(&r.params, r.q, &z)?;
                Ok(Check::lower(format!("sample {k}"), d, *tol))
            }))?;
            let mut config = space.json(&r);
            config["samples"] = json!(samples);
            Report { suite: "rank", seed: Some(seed), config, checks }
        }
        Suite::Oracle { prime, lambda, s, depth, tol } => {
            let s = Complex64::from_str(s.trim())
                .map_err(|_| CliError::Invalid(format!("cannot parse complex exponent {s:?}")))?;
            Field::new(*prime, 1)?;
            let e = (*prime == 2) as u32;
            let params = SpaceParams::new(2, e)?;
            params.signature(&[*lambda])?;
            let need = 2 * (e as i32 + lambda + 1) as u32 + 1;
            let d = depth.unwrap_or(need.max(8));
            let cap = max_precision(*prime);
            if 2 * d > cap {
                return Err(CliError::Precision(format!(
                    "depth {d} needs precision {} but p = {prime} allows {cap}",
                    2 * d
                )));
            }
            let q = *prime as f64;
            let brute = omega_bruteforce_m2(*lambda, s, *prime, d)?;
            let closed = omega_closed_rank1(*lambda, 2, e)?.eval_complex(q, &s_to_z(&[s], &params, q))?;
            let stable = valuation_distribution_m2(*lambda, *prime, d)?
                == valuation_distribution_m2(*lambda, *prime, 2 * d)?;
            let checks = vec![
                Check::upper(format!("lambda={lambda} s={s}"), (brute - closed).norm(), *tol),
                Check::exact(format!("depth {d} vs {} stationary", 2 * d), stable),
            ];
            let config = json!({"m": 2, "e": e, "prime": prime, "lambda": lambda,
                "s": [s.re, s.im], "depth": d,
                "brute_force": [brute.re, brute.im], "closed_form": [closed.re, closed.im]});
            Report { suite: "oracle", seed: None, config, checks }
        }
        Suite::Cartan { space, lambda, max_part, trials, seed, precision, steps } => {
            let r = space.resolve()?;
            if r.params.m % 2 == 0 {
                return Err(CliError::Invalid(format!(
                    "Cartan reduction is implemented for odd m only, got m = {}",
                    r.params.m
                )));
            }
            let prec = precision.unwrap_or(if r.prime == 2 { 40 } else { 30 });
            let f = Field::new(r.prime, prec)?;
            let sigs = signatures(&r.params, lambda, *max_part)?;
            let seed = seed_of(*seed);
            let bases = collect(
                sigs.iter()
                    .map(|s| {
                        let x = make_x_lambda(f, r.params.m, s)?;
                        let inv = orbit_invariants(&x)?;
                        Ok((x, inv))
                    })
                    .collect(),
            )?;
            let jobs: Vec<(usize, usize)> =
                (0..sigs.len()).flat_map(|i| (0..*trials).map(move |t| (i, t))).collect();
            let results = collect(par_map(&jobs, threads, |k, &(i, t)| {
                let mut rng = ChaCha8Rng::seed_from_u64(item_seed(seed.0, k));
                let (x, inv) = &bases[i];
                let y = x.act(&random_k(f, r.params.m, *steps, &mut rng));
                let got = cartan_reduce(&y)?;
                let yinv = orbit_invariants(&y)?;
                let parity_ok = yinv.parity == Some(sigs[i].size().rem_euclid(2) as u8);
                let ok = got == sigs[i] && yinv == *inv && parity_ok;
                Ok((i, t, got, ok))
            }))?;
            let checks = results
                .into_iter()
                .map(|(i, t, got, ok)| {
                    Check::exact(format!("lambda={} trial {t} -> {got}", sigs[i]), ok)
                })
                .collect();
            let mut config = space.json(&r);
            config["precision"] = json!(prec);
            config["trials"] = json!(trials);
            config["steps"] = json!(steps);
            Report { suite: "cartan", seed: Some(seed), config, checks }
        }
    };
    Ok(report.output())
}
