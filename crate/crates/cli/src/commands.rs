use std::fs::File;
use std::io::BufReader;

use partx_core::audit::{self, AuditGrid, LemmaId};
use partx_core::constructions::{
    size_h, size_phi, size_r, size_r1, size_r2, ConstructionKind, ConstructionSpec, Side,
};
use partx_core::covers::tau_t;
use partx_core::format::{family_to_string, parse_partition, read_family};
use partx_core::partition::first_singletons;
use partx_core::search::{
    exhaustive_search, seeded_search, tuple_seeded_search, Certificate, DualContext, SearchResult,
    SeededConfig, TupleContext,
};
use partx_core::stirling::{stirling_closed_form, threshold_report};
use partx_core::verify::{verify_theorem, TheoremId, TierStatus, VerifyOptions, VerifyParams};
use partx_core::{enumerate_partitions, Error, GroundSet, Partition};
use serde_json::{json, Value};

use crate::output::{Format, Sink};
use crate::{
    AuditArgs, CliError, CliResult, CompareArgs, ConstructArgs, EnumerateArgs, Kind, Mode,
    SearchArgs, SideArg, SizesArgs, Status, StirlingArgs, TauArgs, ThresholdArgs, VerifyArgs,
};

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn stirling(sink: &mut Sink, a: &StirlingArgs) -> CliResult {
    let (n, k) = (a.n as i64, a.k as i64);
    let (value, method) = if a.closed_form {
        (stirling_closed_form(n, k)?, "closed-form")
    } else {
        (partx_core::stirling(n, k), "recurrence")
    };
    sink.table(&["n", "k", "value", "method"])?;
    sink.row(&json!({ "n": n, "k": k, "value": value.to_string(), "method": method }))?;
    Ok(Status::Ok)
}

pub fn threshold(sink: &mut Sink, a: &ThresholdArgs) -> CliResult {
    let r = threshold_report(a.k, a.t, a.double)?;
    sink.table(&["k", "t", "doubled", "min_n", "inequality"])?;
    sink.row(&serde_json::to_value(&r).expect("report serializes"))?;
    Ok(Status::Ok)
}

pub fn enumerate(sink: &mut Sink, a: &EnumerateArgs, budget: u64) -> CliResult {
    let ground = GroundSet::new(a.n)?;
    let stream = enumerate_partitions(ground, a.k, budget)?;
    if sink.format() == Format::Text {
        sink.text(&format!("n={} k={}", a.n, a.k))?;
        for p in stream {
            sink.text(&p.to_string())?;
        }
    } else {
        sink.table(&["index", "partition"])?;
        for (i, p) in stream.enumerate() {
            sink.row(&json!({ "index": i, "partition": p.to_string() }))?;
        }
    }
    Ok(Status::Ok)
}

pub fn tau(sink: &mut Sink, a: &TauArgs) -> CliResult {
    let fam = read_family(BufReader::new(File::open(&a.family)?))?;
    let r = tau_t(&fam, a.t, a.witnesses)?;
    let witnesses: Vec<String> = r.witnesses.iter().map(|p| p.to_string()).collect();
    if sink.format() == Format::Text {
        sink.text(&format!("tau={}", r.tau))?;
        if a.witnesses {
            for w in &witnesses {
                sink.text(w)?;
            }
        }
    } else {
        sink.table(&["tau", "witnesses", "explored"])?;
        sink.row(&json!({ "tau": r.tau, "witnesses": witnesses, "explored": r.explored }))?;
    }
    Ok(Status::Ok)
}

fn need(v: Option<usize>, flag: &str, kind: &str) -> Result<usize, CliError> {
    v.ok_or_else(|| usage(format!("--{flag} is required for kind {kind}")))
}

fn anchors(ground: GroundSet, spec: &str, count: usize) -> Result<Vec<Partition>, CliError> {
    let parts: Vec<&str> = spec.split(';').collect();
    if parts.len() != count {
        return Err(usage(format!(
            "--anchors expects {count} partition(s) separated by ';', got {spec:?}"
        )));
    }
    parts
        .iter()
        .map(|s| parse_partition(ground, s).map_err(CliError::from))
        .collect()
}

fn construction(a: &ConstructArgs, ground: GroundSet) -> Result<ConstructionSpec, CliError> {
    let t = a.t;
    let side = match a.side {
        SideArg::F => Side::F,
        SideArg::G => Side::G,
    };
    let anchor = |count| {
        a.anchors
            .as_deref()
            .map(|s| anchors(ground, s, count))
            .transpose()
    };
    let spec = match a.kind {
        Kind::A => {
            let (k, l) = (need(a.k, "k", "A")?, need(a.l, "l", "A")?);
            match anchor(2)? {
                Some(v) => ConstructionSpec::new(
                    ground,
                    ConstructionKind::A {
                        k,
                        x: v[0].clone(),
                        m: v[1].clone(),
                    },
                )?,
                None => ConstructionSpec::a_default(ground, k, l, t)?,
            }
        }
        Kind::B => {
            let l = need(a.l, "l", "B")?;
            match anchor(2)? {
                Some(v) => ConstructionSpec::new(
                    ground,
                    ConstructionKind::B {
                        x: v[0].clone(),
                        m: v[1].clone(),
                    },
                )?,
                None => ConstructionSpec::b_default(ground, l, t)?,
            }
        }
        Kind::C => {
            let k = need(a.k, "k", "C")?;
            match anchor(1)? {
                Some(v) => ConstructionSpec::new(
                    ground,
                    ConstructionKind::C {
                        k,
                        tt: v[0].clone(),
                    },
                )?,
                None => ConstructionSpec::c_default(ground, k, t)?,
            }
        }
        Kind::D => {
            let l = need(a.l, "l", "D")?;
            match anchor(1)? {
                Some(v) => ConstructionSpec::new(
                    ground,
                    ConstructionKind::D {
                        l,
                        tt: v[0].clone(),
                    },
                )?,
                None => ConstructionSpec::d_default(ground, l, t)?,
            }
        }
        Kind::Hm1 => ConstructionSpec::hm1(ground, need(a.k, "k", "HM1")?, t)?,
        Kind::Hm2 => ConstructionSpec::hm2(ground, need(a.k, "k", "HM2")?, t)?,
        Kind::P28i => {
            let k = need(a.k, "k", "P28i")?;
            match anchor(1)? {
                Some(v) => ConstructionSpec::new(
                    ground,
                    ConstructionKind::P28i {
                        k,
                        g: v[0].clone(),
                        side,
                    },
                )?,
                None => ConstructionSpec::p28i_default(ground, k, t, side)?,
            }
        }
        Kind::P28ii => {
            let k = need(a.k, "k", "P28ii")?;
            let m = match anchor(1)? {
                Some(v) => v[0].clone(),
                None => first_singletons(ground, t + 1)?,
            };
            ConstructionSpec::new(ground, ConstructionKind::P28ii { k, t, m, side })?
        }
    };
    Ok(spec)
}

pub fn construct(sink: &mut Sink, a: &ConstructArgs, budget: u64) -> CliResult {
    let ground = GroundSet::new(a.n)?;
    let spec = construction(a, ground)?;
    let fam = spec.enumerate(budget)?;
    let exact = spec.exact_size();
    if sink.format() == Format::Text {
        sink.text(&family_to_string(&fam))?;
    } else {
        sink.table(&["index", "partition"])?;
        if sink.format() == Format::Json {
            sink.row(&json!({
                "construction": spec.to_string(),
                "size": fam.len(),
                "exact_size": exact.to_string(),
            }))?;
        }
        for (i, p) in fam.iter().enumerate() {
            sink.row(&json!({ "index": i, "partition": p.to_string() }))?;
        }
    }
    if exact != fam.len().into() {
        eprintln!(
            "error: enumerated {} members but the closed form gives {exact}",
            fam.len()
        );
        return Ok(Status::Failed);
    }
    Ok(Status::Ok)
}

pub fn sizes(sink: &mut Sink, a: &SizesArgs) -> CliResult {
    let (n, t) = (a.n, a.t);
    if let Some(ks) = &a.ks {
        let m = t + 1;
        let label = ks
            .iter()
            .map(|k| k.to_string())
            .collect::<Vec<_>>()
            .join(",");
        sink.table(&["n", "ks", "t", "m", "a", "phi"])?;
        for idx in 1..=ks.len() {
            let phi = size_phi(m, idx, ks, t, n)?;
            sink.row(
                &json!({ "n": n, "ks": label, "t": t, "m": m, "a": idx, "phi": phi.to_string() }),
            )?;
        }
        return Ok(Status::Ok);
    }
    let (k, l) = (a.k.expect("clap requires k"), a.l.expect("clap requires l"));
    if t < 1 || k < t + 1 || l < t + 1 || n <= k.max(l) {
        return Err(usage(format!(
            "need 1 <= t < k, l < n, got n={n} k={k} l={l} t={t}"
        )));
    }
    sink.table(&["n", "k", "l", "t", "r1", "r2", "r", "h_k", "h_l"])?;
    sink.row(&json!({
        "n": n, "k": k, "l": l, "t": t,
        "r1": size_r1(n, k, l, t)?.to_string(),
        "r2": size_r2(n, k, l, t)?.to_string(),
        "r": size_r(n, k, l, t)?.to_string(),
        "h_k": size_h(t + 1, k, t, n).to_string(),
        "h_l": size_h(t + 1, l, t, n).to_string(),
    }))?;
    Ok(Status::Ok)
}

pub fn audit(sink: &mut Sink, a: &AuditArgs) -> CliResult {
    let grid = AuditGrid {
        t_max: a.t_max,
        k_max: a.k_max,
        n_extra: a.n_extra,
    };
    let reports = if a.lemma.eq_ignore_ascii_case("all") {
        audit::audit_all(grid)
    } else {
        vec![audit::audit(a.lemma.parse::<LemmaId>()?, grid)]
    };
    sink.table(&["lemma", "part", "params", "verdict", "lhs", "rhs"])?;
    let mut fails = 0;
    for r in &reports {
        for p in &r.points {
            sink.row(&serde_json::to_value(p).expect("audit point serializes"))?;
        }
        fails += r.totals.fail;
    }
    if sink.format() == Format::Json {
        for r in &reports {
            sink.row(&json!({ "summary": r.lemma, "totals": r.totals }))?;
        }
    }
    for r in &reports {
        for p in r.failures() {
            eprintln!(
                "fail: {} {} {}: {} vs {}",
                r.lemma,
                serde_json::to_string(&p.params).unwrap_or_default(),
                p.part,
                p.lhs,
                p.rhs
            );
        }
    }
    Ok(if fails == 0 {
        Status::Ok
    } else {
        Status::Failed
    })
}

fn search_row(r: &SearchResult) -> Value {
    let mut v = serde_json::to_value(r).expect("search result serializes");
    if let Some(obj) = v.as_object_mut() {
        let witness: Vec<String> = r
            .witness_families
            .iter()
            .map(|f| {
                f.iter()
                    .map(|p| p.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        obj.insert("witness".into(), json!(witness));
    }
    v
}

pub fn search(sink: &mut Sink, a: &SearchArgs, budget: u64) -> CliResult {
    let ground = GroundSet::new(a.n)?;
    let ks = match &a.ks {
        Some(ks) => ks.clone(),
        None => vec![a.k.expect("clap requires k"), a.l.expect("clap requires l")],
    };
    let config = SeededConfig {
        gen_max: a.gen_max,
        nontrivial: a.nontrivial,
        seed: a.seed,
        random_draws: a.draws,
        checkpoint: a.checkpoint.clone(),
        stop_after: a.stop_after,
    };
    let result = match (ks.len(), a.mode) {
        (2, Mode::Exhaustive) => exhaustive_search(
            &DualContext::new(ground, ks[0], ks[1], a.t, budget)?,
            a.nontrivial,
            budget,
        ),
        (2, Mode::Seeded) => seeded_search(
            &DualContext::new(ground, ks[0], ks[1], a.t, budget)?,
            &config,
        )?,
        (r, Mode::Seeded) if r >= 3 => {
            tuple_seeded_search(&TupleContext::new(ground, &ks, a.t, budget)?, &config)?
        }
        (r, Mode::Exhaustive) if r >= 3 => {
            return Err(usage("exhaustive search is only available for pairs"))
        }
        _ => return Err(usage("need two or more uniformities")),
    };
    sink.table(&[
        "best_product",
        "mode",
        "nontrivial_constraint",
        "exhaustive",
        "witness",
    ])?;
    sink.row(&search_row(&result))?;
    if let Certificate::Exhaustive(cert) = &result.certificate {
        if !cert.complete {
            eprintln!(
                "error: budget exhausted after {} closed sets; result is partial",
                cert.closed_visited
            );
            return Ok(Status::Budget);
        }
    }
    Ok(Status::Ok)
}

pub fn verify(sink: &mut Sink, a: &VerifyArgs, budget: u64) -> CliResult {
    let theorem: TheoremId = a.theorem.parse()?;
    let params: VerifyParams = a.params.parse()?;
    let opts = VerifyOptions {
        budget,
        seed: a.seed,
        gen_max: a.gen_max,
        random_draws: a.draws,
        tuple_draws: a.tuple_draws,
    };
    let report = verify_theorem(theorem, &params, &opts)?;
    match sink.format() {
        Format::Json => sink.row(&serde_json::to_value(&report).expect("report serializes"))?,
        _ => {
            sink.table(&["theorem", "tier", "status", "exhaustive", "n", "details"])?;
            for tier in &report.tiers {
                let status = serde_json::to_value(tier.status).expect("status serializes");
                sink.row(&json!({
                    "theorem": theorem.as_str(),
                    "tier": tier.tier,
                    "status": status,
                    "exhaustive": tier.exhaustive,
                    "n": tier.n,
                    "details": serde_json::to_string(&tier.details).expect("details serialize"),
                }))?;
            }
        }
    }
    if report.tiers.iter().any(|t| t.status == TierStatus::Fail) {
        return Ok(Status::Failed);
    }
    Ok(Status::Ok)
}

pub fn compare_regimes(sink: &mut Sink, a: &CompareArgs) -> CliResult {
    if a.n_min > a.n_max {
        return Err(usage("--n-min must not exceed --n-max"));
    }
    let r = audit::compare_regimes(a.k, a.t, a.n_min..=a.n_max);
    if let Some(reason) = &r.skipped {
        return Err(CliError::Core(Error::InvalidParameters(reason.clone())));
    }
    sink.table(&[
        "n",
        "r1",
        "r2",
        "sign",
        "in_range",
        "cond_r1",
        "cond_r2",
        "consistent",
    ])?;
    for row in &r.rows {
        sink.row(&serde_json::to_value(row).expect("row serializes"))?;
    }
    Ok(if r.inconsistent == 0 {
        Status::Ok
    } else {
        Status::Failed
    })
}
