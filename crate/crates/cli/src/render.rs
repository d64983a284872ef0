//! Human-readable and JSON renderings of exact objects.

use hermsph::exact_arith::{MultiLaurent, RationalFn, Scalar};
use serde_json::{json, Value};

use hermsph::exact_arith::GaussianRational;
use num_traits::{One, Zero};

fn coeff_str(c: &GaussianRational) -> String {
    c.to_string()
}

/// Like the canonical form, but purely imaginary values print as `i`, `-2*i`, ...
fn pretty_coeff(c: &GaussianRational) -> String {
    if !c.re.is_zero() || c.im.is_zero() {
        return c.to_string();
    }
    let re = GaussianRational::new(c.im.clone(), c.re.clone()).to_string();
    if c.im.is_one() {
        "i".into()
    } else if (-&c.im).is_one() {
        "-i".into()
    } else {
        format!("{re}*i")
    }
}

fn needs_parens(s: &str) -> bool {
    s[1..].contains(['+', '-'])
}

/// `c*v^k + ...`, with unit coefficients and `v^0` dropped.
pub fn pretty_scalar(s: &Scalar) -> String {
    if s.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, c) in s.terms() {
        let cs = pretty_coeff(c);
        let term = if k == 0 {
            cs
        } else {
            let vk = if k == 1 { "v".to_string() } else { format!("v^{k}") };
            match cs.as_str() {
                "1" => vk,
                "-1" => format!("-{vk}"),
                _ if needs_parens(&cs) => format!("({cs})*{vk}"),
                _ => format!("{cs}*{vk}"),
            }
        };
        push_term(&mut out, &term);
    }
    out
}

fn push_term(out: &mut String, term: &str) {
    if out.is_empty() {
        out.push_str(term);
    } else if let Some(rest) = term.strip_prefix('-') {
        out.push_str(" - ");
        out.push_str(rest);
    } else {
        out.push_str(" + ");
        out.push_str(term);
    }
}

fn monomial(x: &[i32]) -> String {
    x.iter()
        .enumerate()
        .filter(|(_, e)| **e != 0)
        .map(|(j, e)| {
            if *e == 1 {
                format!("X{}", j + 1)
            } else {
                format!("X{}^{}", j + 1, e)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// A single term whose coefficient is real or purely imaginary.
fn is_atom(s: &Scalar) -> bool {
    s.len() == 1 && s.terms().all(|(_, c)| c.re.is_zero() || c.im.is_zero())
}

pub fn pretty_laurent(f: &MultiLaurent) -> String {
    let terms = f.terms();
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (x, s) in &terms {
        let mono = monomial(x);
        let cs = pretty_scalar(s);
        let term = if mono.is_empty() {
            if s.len() > 1 && terms.len() > 1 {
                format!("({cs})")
            } else {
                cs
            }
        } else if cs == "1" {
            mono
        } else if cs == "-1" {
            format!("-{mono}")
        } else if is_atom(s) {
            format!("{cs}*{mono}")
        } else {
            format!("({cs})*{mono}")
        };
        push_term(&mut out, &term);
    }
    out
}

pub fn pretty_ratfn(r: &RationalFn) -> String {
    if let Ok(p) = r.to_laurent() {
        return pretty_laurent(&p);
    }
    format!("({}) / ({})", pretty_laurent(r.num()), pretty_laurent(r.den()))
}

pub fn scalar_json(s: &Scalar) -> Value {
    let terms: Vec<Value> = s
        .terms()
        .map(|(k, c)| json!({"v": k, "coeff": coeff_str(c)}))
        .collect();
    json!({"canonical": s.to_string(), "pretty": pretty_scalar(s), "terms": terms})
}

/// Terms sorted lexicographically by `(X exponents, v exponent)`.
pub fn laurent_json(f: &MultiLaurent) -> Value {
    let terms: Vec<Value> = f
        .flat_terms()
        .map(|(key, c)| {
            let (x, v) = key.split_at(key.len() - 1);
            json!({"x": x, "v": v[0], "coeff": coeff_str(c)})
        })
        .collect();
    json!({"canonical": f.to_string(), "pretty": pretty_laurent(f), "terms": terms})
}

pub fn ratfn_json(r: &RationalFn) -> Value {
    json!({"num": laurent_json(r.num()), "den": laurent_json(r.den()), "pretty": pretty_ratfn(r)})
}
