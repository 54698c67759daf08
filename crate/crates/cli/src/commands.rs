use std::collections::BTreeMap;
use std::path::Path;

use anyhow::Result;
use clap::ValueEnum;
use rbw_core::certify::{self, Certificate, Certifier, ConditionOptions, ConditionReport, Flag, Verdict};
use rbw_core::fgab::AbInvariants;
use rbw_core::ring::UnitData;
use rbw_core::scissors::{self, ScissorsReport};
use rbw_core::xcomplex::{self, ProjectiveLine};
use rbw_core::{Ring, RingElem};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::output::Report;
use crate::{CertifyArgs, Config, Identity, Invalid, Status};

/// Bumped whenever the cached scissors payload or the code producing it changes shape.
pub const SCISSORS_CACHE_SCHEMA: u32 = 1;

fn invalid(msg: impl Into<String>) -> anyhow::Error {
    Invalid(msg.into()).into()
}

/// Splits on commas outside parentheses and brackets: "gf(2,3),z/9" → ["gf(2,3)", "z/9"].
pub fn split_specs(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    out.push(cur);
    out.into_iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

fn open_ring(spec: &str, cache: Option<&Path>) -> Result<Ring> {
    let ring = Ring::parse(spec)?;
    if let Some(dir) = cache {
        match UnitData::load(dir, &ring) {
            Ok(Some(data)) => {
                log::debug!("unit tables for {} from cache", ring.spec());
                ring.install_units(data);
            }
            Ok(None) => ring.units().save(dir, &ring)?,
            Err(e) => {
                log::warn!("ignoring unreadable unit cache for {}: {e}", ring.spec());
                ring.units().save(dir, &ring)?;
            }
        }
    }
    Ok(ring)
}

fn rings(cfg: &Config) -> Result<Vec<Ring>> {
    let mut specs: Vec<String> = cfg.ring.iter().cloned().collect();
    if let Some(list) = &cfg.rings {
        specs.extend(split_specs(list));
    }
    if specs.is_empty() {
        return Err(invalid("no ring given (use --ring or --rings)"));
    }
    specs.iter().map(|s| open_ring(s, cfg.cache_dir.as_deref())).collect()
}

fn one_ring(cfg: &Config) -> Result<Ring> {
    let mut rs = rings(cfg)?;
    if rs.len() != 1 {
        return Err(invalid("this command takes exactly one ring"));
    }
    Ok(rs.remove(0))
}

/// An element written as `ring info` prints it, or `#n` for the element with code n.
pub fn parse_elem(ring: &Ring, text: &str) -> Result<RingElem> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(code) = t.strip_prefix('#') {
        let n: u32 = code.parse().map_err(|_| invalid(format!("bad element code `{text}`")))?;
        if n >= ring.size() {
            return Err(invalid(format!("element code {n} out of range for {}", ring.spec())));
        }
        return Ok(RingElem(n));
    }
    ring.elements()
        .find(|&e| ring.format(e) == t)
        .ok_or_else(|| invalid(format!("`{text}` is not an element of {}", ring.spec())))
}

fn list(ring: &Ring, xs: &[RingElem]) -> Vec<String> {
    xs.iter().map(|&x| ring.format(x)).collect()
}

pub fn ring_info(cfg: &Config) -> Result<(Report, Status)> {
    let mut items = Vec::new();
    let mut rows = Vec::new();
    for ring in rings(cfg)? {
        let ud = ring.units();
        let unit_group = scissors::units_presentation(&ring).invariants();
        let p1 = ProjectiveLine::new(&ring).ok().map(|p| p.len());
        let kind = if ring.is_field() {
            "field"
        } else if ring.is_local() {
            "local"
        } else {
            "other"
        };
        let residue = ring.residue_field_params().map(|(p, d)| format!("gf({p},{d})"));
        items.push(json!({
            "ring": ring.spec().to_string(),
            "size": ring.size(),
            "characteristic": ring.characteristic(),
            "kind": kind,
            "domain": ring.is_domain(),
            "residue_field": residue,
            "units": ud.units.len(),
            "unit_group": unit_group,
            "unit_group_cyclic": ud.is_cyclic(),
            "mu2": list(&ring, &ud.mu2),
            "w_set_size": ud.wset.len(),
            "square_classes": list(&ring, &ud.square_classes.reps),
            "projective_line": p1,
            "elements": ring.elements().map(|e| ring.format(e)).collect::<Vec<_>>(),
        }));
        rows.push(vec![
            ring.spec().to_string(),
            ring.size().to_string(),
            ring.characteristic().to_string(),
            kind.to_string(),
            residue.unwrap_or_default(),
            ud.units.len().to_string(),
            unit_group.to_string(),
            list(&ring, &ud.mu2).join(" "),
            ud.wset.len().to_string(),
            list(&ring, &ud.square_classes.reps).join(" "),
        ]);
    }
    let headers = vec!["ring", "size", "characteristic", "kind", "residue_field", "units", "unit_group", "mu2", "w_set_size", "square_classes"];
    Ok((Report::new("ring info", json!({ "rings": items }), headers, rows), Status::Pass))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct ScissorsEntry {
    schema_version: u32,
    relator_key: String,
    report: ScissorsReport,
    checks: BTreeMap<String, bool>,
}

/// Hash of the P and RP relator matrices; changes to either formula invalidate the cache.
fn relator_key(ring: &Ring) -> String {
    let p = scissors::p_presentation(ring).relations().sha256();
    let rp = scissors::rp_presentation(ring).relations().sha256();
    format!("{}{}", &p[..16], &rp[..16])
}

fn scissors_cache_path(dir: &Path, ring: &Ring, key: &str) -> std::path::PathBuf {
    let name: String =
        ring.spec().to_string().chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
    dir.join(format!("{name}.scissors.v{SCISSORS_CACHE_SCHEMA}.{key}.json"))
}

fn scissors_entry(ring: &Ring, cache: Option<&Path>) -> Result<ScissorsEntry> {
    let key = relator_key(ring);
    if let Some(dir) = cache {
        let path = scissors_cache_path(dir, ring, &key);
        if let Ok(bytes) = std::fs::read(&path) {
            match serde_json::from_slice::<ScissorsEntry>(&bytes) {
                Ok(e) if e.schema_version == SCISSORS_CACHE_SCHEMA && e.relator_key == key && e.report.ring == ring.spec().to_string() => {
                    log::info!("scissors report for {} from cache", ring.spec());
                    return Ok(e);
                }
                _ => log::warn!("ignoring stale scissors cache {}", path.display()),
            }
        }
    }
    log::info!("building scissors groups for {}", ring.spec());
    let res = scissors::bloch_groups(ring)?;
    let checks: BTreeMap<String, bool> = [
        ("lambda2_factors_through_p", res.lambda2_factors()),
        ("lambda1_lands_in_i2", res.lambda1_in_i2(ring)),
        ("rb_two_ways", res.rb_two_ways()),
        ("p_is_rp_coinvariants", res.coinvariants_check()),
        ("kernel_inclusions", res.chain_checks()),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    let entry = ScissorsEntry { schema_version: SCISSORS_CACHE_SCHEMA, relator_key: key, report: res.report(ring), checks };
    if let Some(dir) = cache {
        std::fs::create_dir_all(dir)?;
        std::fs::write(scissors_cache_path(dir, ring, &entry.relator_key), serde_json::to_vec(&entry)?)?;
    }
    Ok(entry)
}

pub fn scissors(cfg: &Config) -> Result<(Report, Status)> {
    let mut items = Vec::new();
    let mut rows = Vec::new();
    let mut status = Status::Pass;
    for ring in rings(cfg)? {
        let e = scissors_entry(&ring, cfg.cache_dir.as_deref())?;
        let ok = e.checks.values().all(|&v| v);
        if !ok {
            status = Status::Fail;
        }
        let r = &e.report;
        rows.push(vec![
            r.ring.clone(),
            r.p.invariants.to_string(),
            r.rp.invariants.to_string(),
            r.b.to_string(),
            r.rp1.to_string(),
            r.rb.to_string(),
            r.s2_units.to_string(),
            ok.to_string(),
        ]);
        let mut v = serde_json::to_value(&e.report)?;
        v["checks"] = serde_json::to_value(&e.checks)?;
        items.push(v);
    }
    let headers = vec!["ring", "P", "RP", "B", "RP1", "RB", "S2_units", "checks_pass"];
    Ok((Report::new("scissors", json!({ "rings": items }), headers, rows), status))
}

pub fn xcomplex_audit(cfg: &Config, stabilizers: bool) -> Result<(Report, Status)> {
    let mut items = Vec::new();
    let mut rows = Vec::new();
    let mut status = Status::Pass;
    for ring in rings(cfg)? {
        log::info!("X-complex audit for {} through dimension {}", ring.spec(), cfg.dmax);
        let audit = xcomplex::exactness_audit(&ring, cfg.dmax, cfg.budget_x)?;
        // Exactness is only promised below the residue field size.
        let bound = audit.residue_field_size.map_or(0, |k| k as usize);
        let exact_ok = audit.exact_below(bound);
        let needed_dims = bound.min(cfg.dmax + 1);
        let truncated_early = audit.truncated.is_some() && audit.dims.len() < needed_dims;
        let dbar4 = xcomplex::dbar4_relator(&ring);
        let lambda1 = xcomplex::lambda1_composite_check(&ring);
        let stab = stabilizers.then(|| xcomplex::stabilizer_check(&ring, cfg.budget_sl2, cfg.dmax.min(4)));

        let mut ok = exact_ok;
        let mut budget = truncated_early;
        let mut obj = json!({ "ring": ring.spec().to_string(), "exactness": audit, "exact_below_residue_field_size": exact_ok });
        let last_sign = match &dbar4 {
            Ok(d) => {
                ok &= d.same_span_as_rp;
                obj["dbar4"] = serde_json::to_value(d)?;
                d.last_sign
            }
            Err(e) => {
                obj["dbar4"] = json!({ "error": e.to_string() });
                None
            }
        };
        match &lambda1 {
            Ok(l) => {
                ok &= l.holds();
                obj["lambda1_composite"] = serde_json::to_value(l)?;
            }
            Err(e) => obj["lambda1_composite"] = json!({ "error": e.to_string() }),
        }
        match &stab {
            Some(Ok(s)) => {
                ok &= s.ok();
                obj["stabilizers"] = serde_json::to_value(s)?;
            }
            Some(Err(e)) => {
                budget |= matches!(e, rbw_core::Error::Budget { .. });
                obj["stabilizers"] = json!({ "error": e.to_string() });
            }
            None => {}
        }
        if !ok {
            status = status.max(Status::Fail);
        } else if budget {
            status = status.max(Status::Budget);
        }
        let homology: Vec<String> = audit.dims.iter().map(|d| format!("H{}={}", d.dim, d.homology)).collect();
        rows.push(vec![
            ring.spec().to_string(),
            audit.lines.to_string(),
            homology.join(" "),
            exact_ok.to_string(),
            audit.truncated.clone().unwrap_or_default(),
            last_sign.map(|s| if s > 0 { "+" } else { "-" }.to_string()).unwrap_or_default(),
            lambda1.as_ref().ok().and_then(|l| l.sign).map(|s| s.to_string()).unwrap_or_default(),
        ]);
        items.push(obj);
    }
    let headers = vec!["ring", "lines", "homology", "exact_below_k", "truncated", "dbar4_last_sign", "lambda1_sign"];
    Ok((Report::new("xcomplex audit", json!({ "dmax": cfg.dmax, "rings": items }), headers, rows), status))
}

fn certificate_status(certs: &[Certificate]) -> Status {
    let failed: Vec<&Certificate> = certs.iter().filter(|c| !c.passed()).collect();
    if failed.is_empty() {
        Status::Pass
    } else if failed.iter().all(|c| c.budget_exhausted) {
        Status::Budget
    } else {
        Status::Fail
    }
}

pub fn certify(cfg: &Config, args: &CertifyArgs) -> Result<(Report, Status)> {
    let ring = one_ring(cfg)?;
    let cert = Certifier::new(&ring, cfg.budget_boundary)?;
    let elem = |name: &str, v: &Option<String>| -> Result<Option<RingElem>> {
        v.as_deref()
            .map(|s| parse_elem(&ring, s).map_err(|e| invalid(format!("--{name}: {e}"))))
            .transpose()
    };
    let (a, b, c, z) = (elem("a", &args.a)?, elem("b", &args.b)?, elem("c", &args.c)?, elem("z", &args.z)?);
    let name = args.identity.to_possible_value().expect("named").get_name().to_string();
    log::info!("certifying {name} over {}", ring.spec());
    let certs: Vec<Certificate> = match args.identity {
        Identity::D1_11 => vec![cert.d1_11_kernel_check()],
        Identity::D1_10 => vec![cert.d1_10_check()],
        Identity::D1_12 => vec![cert.d1_12_check()],
        Identity::D1_21 => {
            let bs = match b {
                Some(b) => vec![b],
                None => ring.units().mu2.clone(),
            };
            bs.into_iter().map(|b| cert.d1_21_check(b)).collect::<rbw_core::Result<_>>()?
        }
        Identity::Theta => match z {
            Some(z) => vec![cert.theta_certificate(z)?],
            None => cert.theta_all()?,
        },
        Identity::D1_22 => match (a, b, args.all_pairs) {
            (_, _, true) => cert.d1_22_all()?,
            (Some(a), Some(b), false) => vec![cert.d1_22_certificate(a, b)?],
            _ => return Err(invalid("d1_22 needs --a and --b, or --all-pairs")),
        },
        Identity::D2_22 => match (a, b, c, args.all_triples, args.sample) {
            (_, _, _, true, _) => cert.d2_22_all()?,
            (_, _, _, false, Some(n)) => cert.d2_22_triples(&certify::sample_triples(&ring, n, cfg.seed))?,
            (Some(a), Some(b), Some(c), false, None) => vec![cert.d2_22_certificate(a, b, c)?],
            _ => return Err(invalid("d2_22 needs --a, --b and --c, --all-triples, or --sample N")),
        },
    };
    let status = certificate_status(&certs);
    let mut verdicts: BTreeMap<Verdict, usize> = BTreeMap::new();
    for c in &certs {
        *verdicts.entry(c.verdict).or_default() += 1;
    }
    let passed = certs.iter().filter(|c| c.passed()).count();
    log::info!("{name} over {}: {passed}/{} pass", ring.spec(), certs.len());
    let rows = certs
        .iter()
        .map(|c| {
            let params: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let failed: Vec<&str> = c.stages.iter().filter(|s| !s.ok).map(|s| s.name.as_str()).collect();
            vec![
                c.identity.clone(),
                c.ring.clone(),
                params.join(" "),
                serde_json::to_value(c.verdict).expect("enum").as_str().unwrap_or_default().to_string(),
                c.budget_exhausted.to_string(),
                failed.join(" "),
            ]
        })
        .collect();
    let verdict_counts: BTreeMap<String, usize> = verdicts
        .into_iter()
        .map(|(v, n)| (serde_json::to_value(v).expect("enum").as_str().unwrap_or_default().to_string(), n))
        .collect();
    let mut body = json!({
        "identity": name,
        "ring": ring.spec().to_string(),
        "seed": cfg.seed,
        "total": certs.len(),
        "passed": passed,
        "verdicts": verdict_counts,
        "budget_exhausted": certs.iter().any(|c| c.budget_exhausted),
    });
    if !args.summary {
        body["certificates"] = serde_json::to_value(&certs)?;
    }
    let headers = vec!["identity", "ring", "params", "verdict", "budget_exhausted", "failed_stages"];
    Ok((Report::new("certify", body, headers, rows), status))
}

fn options(cfg: &Config) -> ConditionOptions {
    ConditionOptions { audit_budget: cfg.budget_audit, bar_budget: cfg.budget_bar, cross_check_budget: cfg.budget_cross }
}

fn flag(f: Flag) -> &'static str {
    match f {
        Flag::Pass => "pass",
        Flag::Fail => "fail",
        Flag::NotGuaranteed => "not_guaranteed",
    }
}

fn opt_inv(x: &Option<AbInvariants>) -> String {
    x.as_ref().map(|i| i.to_string()).unwrap_or_default()
}

fn condition_row(r: &ConditionReport) -> Vec<String> {
    let direct = |n: usize| r.direct.iter().find(|d| d.degree == n).map(|d| opt_inv(&d.coinvariants)).unwrap_or_default();
    let audit = r
        .exactness_audit
        .as_ref()
        .map(|a| a.dims.iter().map(|d| format!("H{}={}", d.dim, d.homology)).collect::<Vec<_>>().join(" "))
        .unwrap_or_default();
    vec![
        r.ring.clone(),
        flag(r.flags[0]).into(),
        flag(r.flags[1]).into(),
        flag(r.flags[2]).into(),
        audit,
        r.torus_iso_weight.map(|w| w.to_string()).unwrap_or_default(),
        direct(2),
        direct(3),
    ]
}

const CONDITION_HEADERS: [&str; 8] =
    ["ring", "flag1_mu2", "flag2_exactness", "flag3_torus", "x_audit", "torus_weight", "H2(N)_T", "H3(N)_T"];

pub fn conditions(cfg: &Config) -> Result<(Report, Status)> {
    let opts = options(cfg);
    let mut items = Vec::new();
    let mut rows = Vec::new();
    for ring in rings(cfg)? {
        log::info!("condition report for {}", ring.spec());
        let r = certify::condition_report_with(&ring, &opts)?;
        rows.push(condition_row(&r));
        items.push(r);
    }
    Ok((Report::new("conditions", json!({ "rings": items }), CONDITION_HEADERS.to_vec(), rows), Status::Pass))
}

pub fn bw_table(cfg: &Config) -> Result<(Report, Status)> {
    let rs = rings(cfg)?;
    log::info!("BW table for {} rings", rs.len());
    let table = certify::bw_table(&rs, &options(cfg))?;
    let mut status = Status::Pass;
    let mut rows = Vec::new();
    let mut items = Vec::new();
    for (cond, bw) in &table {
        if !bw.snf_paths_agree {
            status = Status::Fail;
        }
        rows.push(vec![
            bw.ring.clone(),
            flag(bw.flags[0]).into(),
            flag(bw.flags[1]).into(),
            flag(bw.flags[2]).into(),
            bw.tor.to_string(),
            bw.tor_fixed.to_string(),
            bw.rb.to_string(),
            bw.rb_dense.to_string(),
            bw.p.to_string(),
            bw.snf_paths_agree.to_string(),
            bw.predicted_h3_order.as_ref().map(|n| n.to_string()).unwrap_or_default(),
        ]);
        items.push(json!({ "conditions": cond, "bw": bw }));
    }
    let headers =
        vec!["ring", "flag1", "flag2", "flag3", "tor", "tor_fixed", "rb", "rb_dense", "p", "snf_paths_agree", "predicted_h3_order"];
    Ok((Report::new("bw-table", json!({ "rings": items }), headers, rows), status))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_lists_split_outside_parentheses() {
        assert_eq!(split_specs("gf(2,3), z/9,gf(2,1)[t]/t^3"), vec!["gf(2,3)", "z/9", "gf(2,1)[t]/t^3"]);
        assert!(split_specs(" , ").is_empty());
    }

    #[test]
    fn elements_by_name_or_code() {
        let ring = Ring::parse("gf(2,3)").unwrap();
        for e in ring.elements() {
            assert_eq!(parse_elem(&ring, &ring.format(e)).unwrap(), e);
            assert_eq!(parse_elem(&ring, &format!("#{}", e.0)).unwrap(), e);
        }
        assert!(parse_elem(&ring, "#8").is_err());
        assert!(parse_elem(&ring, "t").is_err());
    }

    #[test]
    fn failures_outrank_budget_exhaustion() {
        let ring = Ring::parse("gf(2,2)").unwrap();
        let c = Certifier::new(&ring, 1000).unwrap();
        let ok = c.d1_22_certificate(ring.one(), ring.one()).unwrap();
        assert_eq!(certificate_status(&[ok.clone()]), Status::Pass);
        let mut budget = ok.clone();
        budget.verdict = Verdict::Fail;
        budget.budget_exhausted = true;
        assert_eq!(certificate_status(&[ok.clone(), budget.clone()]), Status::Budget);
        let mut failed = ok.clone();
        failed.verdict = Verdict::Fail;
        assert_eq!(certificate_status(&[budget, failed]), Status::Fail);
    }
}
