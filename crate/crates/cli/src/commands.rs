use serde_json::{json, Value};

use hmf::abgroup::weight_group;
use hmf::decompose::AdeType;
use hmf::decompose::{
    classify_ade, min_partition_with, part_types, rouquier_verdict_with, PartPredicate, PartitionCertificate,
    SearchLimits,
};
use hmf::intmat::IntMatrix;
use hmf::mfengine::{
    endo_algebra_check, exterior_product, is_exceptional, k_object, orbit_hom_check, standard_object, Factorization,
    MfError, MfRing, OrbitSpec,
};
use hmf::quiverlab::{
    ade_quiver, cartan_matrix, coxeter_polynomial, d_quiver, e_quiver, format_polynomial, loewy_length,
    tensor_of_a_types, Quiver,
};
use hmf::weightcalc::{
    complement_count, exceptional_count, gorenstein_parameter, knoerrer_double, mu_values, sod_summary, GradedRingSpec,
    SodSummary, WeightSequence,
};

use crate::config::Config;
use crate::report::{int, rat, Report};
use crate::{internal, CliError};

pub fn parse_weights(s: &str) -> Result<WeightSequence, CliError> {
    let values = s
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| CliError::Usage(format!("not an integer: {t:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    WeightSequence::parse_signed(&values).map_err(|e| CliError::Usage(e.to_string()))
}

fn weights_json(d: &WeightSequence) -> Value {
    json!(d.entries())
}

fn matrix_json(m: &IntMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(int).collect())).collect())
}

pub fn certificate_json(c: &PartitionCertificate) -> Value {
    let types: Vec<Value> =
        part_types(c).into_iter().map(|t| t.map_or(Value::Null, |t| Value::String(t.to_string()))).collect();
    json!({
        "predicate": c.predicate.as_str(),
        "size": c.size,
        "parts": c.parts.iter().map(weights_json).collect::<Vec<_>>(),
        "part_types": types,
        "minimal": c.minimal,
    })
}

fn stats_json(c: &PartitionCertificate) -> Value {
    json!({
        "nodes": c.stats.nodes,
        "memo_entries": c.stats.memo_entries,
        "root_lower_bound": c.stats.root_lower_bound,
        "truncated": c.stats.truncated,
    })
}

fn sod_json(s: &SodSummary) -> Value {
    json!({
        "case": s.case.as_str(),
        "mu": int(&s.mu),
        "torsion": int(&s.torsion),
        "blocks": s.blocks.iter().map(|b| json!({
            "degree": int(&b.degree),
            "kind": b.kind.as_str(),
            "count": int(&b.count),
        })).collect::<Vec<_>>(),
        "total_objects": int(&s.total_objects()),
        "residual": s.residual.as_str(),
    })
}

fn limits(cfg: &Config) -> SearchLimits {
    SearchLimits { node_limit: cfg.node_limit }
}

pub fn analyze(d: &WeightSequence, cfg: &Config) -> Result<Report, CliError> {
    let mu = mu_values(d).map_err(internal)?;
    let group = weight_group(d).map_err(internal)?;
    let torsion = group.group().torsion_order();
    if torsion != d.product() / d.lcm() {
        return Err(internal("torsion order disagrees with the product over lcm"));
    }
    let spec = GradedRingSpec::fermat(d).map_err(internal)?;
    let sod = sod_summary(&spec).map_err(internal)?;
    let verdict = rouquier_verdict_with(d, limits(cfg));
    let mut results = json!({
        "mu_bar": rat(&mu.mu_bar),
        "mu": int(&mu.mu),
        "sign": mu.sign.as_str(),
        "lcm": int(&d.lcm()),
        "torsion": int(&torsion),
        "exceptional_count": exceptional_count(d).map_or(Value::Null, |x| int(&x)),
        "complement_count": complement_count(d).map_or(Value::Null, |x| int(&x)),
        "ade_type": classify_ade(d).map_or(Value::Null, |t| Value::String(t.to_string())),
        "h": certificate_json(&verdict.h_certificate),
        "q": certificate_json(&verdict.q_certificate),
        "rouquier": {
            "n_plus_1": verdict.n_plus_1,
            "lower": verdict.lower,
            "upper": verdict.upper,
            "exact": verdict.exact,
            "conjecture_holds": verdict.conjecture_holds,
        },
        "sod": sod_json(&sod),
    });
    if d.has_unit_weight() {
        let mut note = json!({ "factorizations": "zero" });
        if d.len() == 1 {
            note["geometry"] = json!("point");
        }
        results["degenerate"] = note;
    }
    let provenance = json!({
        "node_limit": cfg.node_limit,
        "h_search": stats_json(&verdict.h_certificate),
        "q_search": stats_json(&verdict.q_certificate),
    });
    Ok(Report::new("analyze", json!({ "weights": weights_json(d) }), results).with_provenance(provenance))
}

pub fn group(d: &WeightSequence) -> Result<Report, CliError> {
    let b = weight_group(d).map_err(internal)?;
    let g = b.group();
    let results = json!({
        "generators": g.num_generators(),
        "relations": matrix_json(g.relations()),
        "invariant_factors": g.invariant_factors().iter().map(int).collect::<Vec<_>>(),
        "free_rank": g.free_rank(),
        "torsion_order": int(&g.torsion_order()),
        "marked": b.marked().to_string(),
        "marked_degree": int(&b.degree(b.marked()).map_err(internal)?),
        "generator_degrees": b.generator_degrees().map_err(internal)?.iter().map(int).collect::<Vec<_>>(),
    });
    Ok(Report::new("group", json!({ "weights": weights_json(d) }), results))
}

pub fn decompose(d: &WeightSequence, cfg: &Config) -> Result<Report, CliError> {
    let h = min_partition_with(d, PartPredicate::Ade, limits(cfg));
    let q = min_partition_with(d, PartPredicate::Nonpositive, limits(cfg));
    let results = json!({ "h": certificate_json(&h), "q": certificate_json(&q) });
    let provenance = json!({
        "node_limit": cfg.node_limit,
        "h_search": stats_json(&h),
        "q_search": stats_json(&q),
    });
    Ok(Report::new("decompose", json!({ "weights": weights_json(d) }), results).with_provenance(provenance))
}

pub fn sod(d: &WeightSequence) -> Result<Report, CliError> {
    let spec = GradedRingSpec::fermat(d).map_err(internal)?;
    let gp = gorenstein_parameter(&spec).map_err(internal)?;
    let summary = sod_summary(&spec).map_err(internal)?;
    let doubled = gorenstein_parameter(&knoerrer_double(&spec)).map_err(internal)?;
    let results = json!({
        "gorenstein": { "eta": gp.eta.to_string(), "mu": int(&gp.mu) },
        "summary": sod_json(&summary),
        "exceptional_count": exceptional_count(d).map_or(Value::Null, |x| int(&x)),
        "complement_count": complement_count(d).map_or(Value::Null, |x| int(&x)),
        "knoerrer_double": { "eta": doubled.eta.to_string(), "mu": int(&doubled.mu) },
    });
    Ok(Report::new("sod", json!({ "weights": weights_json(d) }), results))
}

/// A Dynkin quiver, or the Cartan matrix and Loewy length of a tensor product.
type ParsedQuiver = Result<Quiver, (IntMatrix, usize)>;

fn parse_quiver(s: &str) -> Result<(String, ParsedQuiver), CliError> {
    let bad = || CliError::Usage(format!("expected a type like A3, D4, E6 or a weight list, got {s:?}"));
    let s = s.trim();
    let first = s.chars().next().ok_or_else(bad)?;
    if first.is_ascii_digit() {
        let d = parse_weights(s)?;
        let label = d.entries().iter().map(|x| format!("A{}", x - 1)).collect::<Vec<_>>().join("⊗");
        return Ok((label, Err(tensor_of_a_types(d.entries()))));
    }
    let n: usize = s[1..].parse().map_err(|_| bad())?;
    let q = match first.to_ascii_uppercase() {
        'A' => ade_quiver(AdeType::A(n as u64)),
        'D' => d_quiver(n),
        'E' => e_quiver(n),
        _ => return Err(bad()),
    }
    .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok((format!("{}{n}", first.to_ascii_uppercase()), Ok(q)))
}

pub fn quiver(s: &str) -> Result<Report, CliError> {
    let (label, q) = parse_quiver(s)?;
    let (cartan, ll, arrows) = match &q {
        Ok(q) => (cartan_matrix(q), loewy_length(q), Some(q.arrows().to_vec())),
        Err((c, ll)) => (c.clone(), *ll, None),
    };
    let cox = coxeter_polynomial(&cartan).map_err(internal)?;
    let mut results = json!({
        "label": label,
        "vertices": cartan.rows(),
        "cartan": matrix_json(&cartan),
        "coxeter_polynomial": format_polynomial(&cox),
        "coxeter_coefficients": cox.iter().map(int).collect::<Vec<_>>(),
        "loewy_length": ll,
    });
    if let Some(a) = arrows {
        results["arrows"] = json!(a);
    }
    Ok(Report::new("quiver", json!({ "quiver": s }), results))
}

fn mf_error(e: MfError) -> CliError {
    match e {
        MfError::DegreeTooSmall(_) => CliError::Usage(e.to_string()),
        other => internal(other),
    }
}

pub fn mf(d: i64) -> Result<Report, CliError> {
    let r = endo_algebra_check(d).map_err(mf_error)?;
    let mut exceptional = Vec::new();
    for a in 0..d {
        exceptional.push(
            json!({ "twist": a, "exceptional": is_exceptional(&k_object(d, a).map_err(mf_error)?).map_err(mf_error)? }),
        );
    }
    let all = exceptional.iter().all(|x| x["exceptional"] == json!(true));
    let results = json!({
        "objects": (1..d).map(|i| format!("E{i}")).collect::<Vec<_>>(),
        "hom_dims": r.hom_dims,
        "cartan": matrix_json(&r.cartan),
        "permutation": r.permutation,
        "transposed": r.transposed,
        "certified": r.certified,
        "residue_fields": exceptional,
    });
    let mut rep = Report::new("mf", json!({ "d": d }), results);
    rep.passed = Some(all);
    Ok(rep)
}

/// `E_i ⊠ E_j` for `x^{d1} ⊞ y^{d2}`, labelled `(i, j)`.
pub type Battery = Vec<((i64, i64), Factorization)>;

pub fn orbit_battery(d1: i64, d2: i64) -> Result<Battery, MfError> {
    let (r1, r2) = (MfRing::fermat_one(d1)?, MfRing::fermat_one(d2)?);
    let mut out = Vec::new();
    for i in 1..d1 {
        for j in 1..d2 {
            out.push(((i, j), exterior_product(&standard_object(&r1, i)?, &standard_object(&r2, j)?)?));
        }
    }
    Ok(out)
}

pub fn orbit_results(d1: i64, d2: i64, window: i64) -> Result<(Value, bool), CliError> {
    let battery = orbit_battery(d1, d2).map_err(mf_error)?;
    let psi = OrbitSpec::degree_map(battery[0].1.ring().grading()).map_err(mf_error)?;
    let mut pairs = Vec::new();
    let mut holds = true;
    for (a, e) in &battery {
        for (b, f) in &battery {
            let rep = orbit_hom_check(e, f, &psi, window).map_err(mf_error)?;
            holds &= rep.holds();
            let rows: Vec<Value> = rep
                .rows
                .iter()
                .filter(|r| r.restricted > 0 || r.summed > 0)
                .map(|r| json!({ "epsilon": r.epsilon, "l": r.l, "restricted": r.restricted, "summed": r.summed }))
                .collect();
            pairs.push(json!({
                "source": format!("E{}⊠E{}", a.0, a.1),
                "target": format!("E{}⊠E{}", b.0, b.1),
                "holds": rep.holds(),
                "nonzero": rows,
            }));
        }
    }
    Ok((json!({ "kernel_size": psi.kernel().len(), "pairs": pairs, "holds": holds }), holds))
}

pub fn orbit(d: &WeightSequence, window: i64) -> Result<Report, CliError> {
    let [d1, d2] = d.entries() else {
        return Err(CliError::Usage("orbit takes exactly two weights".into()));
    };
    let (results, holds) = orbit_results(*d1 as i64, *d2 as i64, window)?;
    let mut rep = Report::new("orbit", json!({ "weights": weights_json(d), "window": window }), results)
        .with_provenance(json!({ "window": window }));
    rep.passed = Some(holds);
    Ok(rep)
}
