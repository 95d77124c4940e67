use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use hmf::abgroup::weight_group;
use hmf::decompose::AdeType;
use hmf::mfengine::{endo_algebra_check, is_exceptional, k_object};
use hmf::quiverlab::{ade_quiver, cartan_matrix, coxeter_polynomial, format_polynomial, tensor_of_a_types};
use hmf::weightcalc::{complement_count, exceptional_count, mu_values, WeightSequence};

use crate::commands::orbit_results;
use crate::config::Config;
use crate::report::Report;
use crate::{internal, CliError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Groups,
    Counts,
    Quiver,
    Mf,
    Orbit,
}

impl Suite {
    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Groups => "groups",
            Suite::Counts => "counts",
            Suite::Quiver => "quiver",
            Suite::Mf => "mf",
            Suite::Orbit => "orbit",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Check {
    pub name: String,
    pub cases: usize,
    pub counterexamples: Vec<Value>,
}

impl Check {
    fn new(name: &str) -> Self {
        Check { name: name.into(), ..Default::default() }
    }

    fn record(&mut self, ok: bool, payload: impl FnOnce() -> Value) {
        self.cases += 1;
        if !ok {
            self.counterexamples.push(payload());
        }
    }

    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "cases": self.cases,
            "passed": self.passed(),
            "counterexamples": self.counterexamples,
        })
    }
}

/// Nondecreasing sequences `(d_0, ..., d_n)` with `n <= max_n` and entries in `1..=max_entry`.
pub fn sequences(max_n: usize, max_entry: u64) -> Vec<WeightSequence> {
    fn go(len: usize, lo: u64, max: u64, cur: &mut Vec<u64>, out: &mut Vec<WeightSequence>) {
        if cur.len() == len {
            out.push(WeightSequence::new(cur.clone()).expect("entries positive"));
            return;
        }
        for x in lo..=max {
            cur.push(x);
            go(len, x, max, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for len in 1..=max_n + 1 {
        go(len, 1, max_entry, &mut Vec::new(), &mut out);
    }
    out
}

fn show(d: &WeightSequence) -> Value {
    Value::String(d.to_string())
}

pub fn groups(max_n: usize, max_entry: u64) -> Result<Vec<Check>, CliError> {
    let mut torsion = Check::new("torsion order is the product over the lcm");
    let mut rank = Check::new("free rank is one");
    for d in sequences(max_n, max_entry) {
        let g = weight_group(&d).map_err(internal)?;
        let t = g.group().torsion_order();
        let want = d.product() / d.lcm();
        torsion.record(t == want, || json!({ "weights": show(&d), "snf": t.to_string(), "formula": want.to_string() }));
        let fr = g.group().free_rank();
        rank.record(fr == 1, || json!({ "weights": show(&d), "free_rank": fr }));
    }
    Ok(vec![torsion, rank])
}

pub fn counts(max_n: usize, max_entry: u64) -> Result<Vec<Check>, CliError> {
    let mut formula = Check::new("exceptional count is prod(d_i - 1) + mu * torsion");
    let mut dynkin = Check::new("Dynkin triples give sum(d_i - 1) + 2 objects");
    let mut spots = Check::new("spot values");
    for d in sequences(max_n, max_entry) {
        let mu = mu_values(&d).map_err(internal)?;
        if mu.mu_bar < BigRational::zero() {
            continue;
        }
        let torsion = weight_group(&d).map_err(internal)?.group().torsion_order();
        let base: BigInt = d.entries().iter().map(|&x| BigInt::from(x - 1)).product();
        let want = base + &mu.mu * &torsion;
        let got = exceptional_count(&d).map_err(internal)?;
        formula.record(
            got == want,
            || json!({ "weights": show(&d), "count": got.to_string(), "expected": want.to_string() }),
        );
        let positive = mu.mu_bar > BigRational::zero();
        if d.len() == 3 && positive && d.entries().iter().all(|&x| x >= 2) {
            let vertices: u64 = d.entries().iter().map(|x| x - 1).sum::<u64>() + 2;
            dynkin.record(
                got == BigInt::from(vertices),
                || json!({ "weights": show(&d), "count": got.to_string(), "vertices": vertices }),
            );
        }
    }
    let ws = |v: &[u64]| WeightSequence::new(v.to_vec()).expect("valid");
    let e = exceptional_count(&ws(&[2, 3, 5])).map_err(internal)?;
    spots.record(e == BigInt::from(9), || json!({ "weights": "(2,3,5)", "count": e.to_string() }));
    let e = exceptional_count(&ws(&[3, 3])).map_err(internal)?;
    spots.record(e.is_one(), || json!({ "weights": "(3,3)", "count": e.to_string() }));
    let c = complement_count(&ws(&[3, 3])).map_err(internal)?;
    spots.record(c == BigInt::from(3), || json!({ "weights": "(3,3)", "complement": c.to_string() }));
    Ok(vec![formula, dynkin, spots])
}

pub fn quiver() -> Result<Vec<Check>, CliError> {
    let mut cox = Check::new("Coxeter polynomials of tensor products match D4, E6, E8");
    let cases = [
        (vec![3u64, 3], AdeType::D4, "x^4 + x^3 + x + 1"),
        (vec![3, 4], AdeType::E6, ""),
        (vec![3, 5], AdeType::E8, ""),
    ];
    for (ds, t, literal) in cases {
        let (tc, _) = tensor_of_a_types(&ds);
        let lhs = coxeter_polynomial(&tc).map_err(internal)?;
        let rhs = coxeter_polynomial(&cartan_matrix(&ade_quiver(t).map_err(internal)?)).map_err(internal)?;
        let ok = lhs == rhs && (literal.is_empty() || format_polynomial(&lhs) == literal);
        cox.record(
            ok,
            || json!({ "type": t.to_string(), "tensor": format_polynomial(&lhs), "dynkin": format_polynomial(&rhs) }),
        );
    }
    Ok(vec![cox])
}

pub fn mf(max_d: i64) -> Result<Vec<Check>, CliError> {
    let mut endo = Check::new("endomorphism algebra of the standard objects is the A_{d-1} path algebra");
    let mut exc = Check::new("residue fields are exceptional");
    for d in 2..=max_d {
        let r = endo_algebra_check(d);
        endo.record(r.is_ok(), || json!({ "d": d, "error": r.as_ref().err().map(|e| e.to_string()) }));
        for a in -d..=d {
            let ok = is_exceptional(&k_object(d, a).map_err(internal)?).map_err(internal)?;
            exc.record(ok, || json!({ "d": d, "twist": a }));
        }
    }
    Ok(vec![endo, exc])
}

pub fn orbit(window: i64) -> Result<Vec<Check>, CliError> {
    let mut c = Check::new("orbit identity on the x^3 + y^3 battery");
    let (payload, _) = orbit_results(3, 3, window)?;
    for p in payload["pairs"].as_array().into_iter().flatten() {
        c.record(p["holds"] == json!(true), || p.clone());
    }
    Ok(vec![c])
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Bounds {
    pub max_n: Option<usize>,
    pub max_entry: Option<u64>,
    pub max_d: Option<i64>,
    pub window: Option<i64>,
}

pub fn run(suite: Suite, bounds: Bounds, cfg: &Config) -> Result<Report, CliError> {
    let max_n = bounds.max_n.unwrap_or(cfg.oracle.max_n);
    let max_entry = bounds.max_entry.unwrap_or(cfg.oracle.max_entry);
    let max_d = bounds.max_d.unwrap_or(cfg.oracle.max_d);
    let window = bounds.window.unwrap_or(cfg.window);
    if max_d < 2 {
        return Err(CliError::Usage("--max-d must be at least 2".into()));
    }
    let checks = match suite {
        Suite::Groups => groups(max_n, max_entry)?,
        Suite::Counts => counts(max_n, max_entry)?,
        Suite::Quiver => quiver()?,
        Suite::Mf => mf(max_d)?,
        Suite::Orbit => orbit(window)?,
    };
    let passed = checks.iter().all(Check::passed);
    let input = match suite {
        Suite::Groups | Suite::Counts => json!({ "suite": suite.as_str(), "max_n": max_n, "max_entry": max_entry }),
        Suite::Quiver => json!({ "suite": suite.as_str() }),
        Suite::Mf => json!({ "suite": suite.as_str(), "max_d": max_d }),
        Suite::Orbit => json!({ "suite": suite.as_str(), "window": window }),
    };
    let results = json!({ "checks": checks.iter().map(Check::to_json).collect::<Vec<_>>() });
    let mut rep = Report::new("verify", input, results);
    rep.passed = Some(passed);
    Ok(rep)
}
