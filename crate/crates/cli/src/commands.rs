use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use sl2amen::amen::{
    certify, default_free_generators, format_ratio, free_words_check, hyperbolic_pair, min_folner_search,
    parse_ratio, profile_uniform, AmenError, CertificateRecord, Mode, ProfileOptions, Sampler, SearchOptions,
    SearchOutcome, SearchStatus, Verdict,
};
use sl2amen::fields::{Field, RatFunc};
use sl2amen::folog::{
    evaluate_sentence, folner_sentence, parse, read_sentences, FoError, Formula, SentenceOptions,
};
use sl2amen::groups::{self, parse_family, FiniteGroup, GElem, GroupError, GroupHandle};
use sl2amen::matgrp::{self, centralizer_structural, Mat2, MatError};

use crate::cache::{config_hash, now_unix, record_key, Cache, ResultRecord, ARTIFACT_VERSION};
use crate::config::RunConfig;
use crate::{CacheAction, Command, SearchArgs, EXIT_BUDGET, EXIT_INPUT, EXIT_INTERNAL, EXIT_OK, EXIT_REFUSED};

/// A request the library declined, such as the identity's centralizer.
#[derive(Debug)]
pub struct Refusal(pub String);

impl fmt::Display for Refusal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Refusal {}

fn is_budget(e: &GroupError) -> bool {
    matches!(e, GroupError::BudgetExceeded { .. })
}

/// Exit code for a failed command: budget problems give 3, refusals 2,
/// everything else is treated as bad input.
pub fn exit_code_for(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if cause.downcast_ref::<Refusal>().is_some() {
            return EXIT_REFUSED;
        }
        if let Some(e) = cause.downcast_ref::<GroupError>() {
            if is_budget(e) {
                return EXIT_BUDGET;
            }
        }
        if let Some(e) = cause.downcast_ref::<MatError>() {
            match e {
                MatError::IdentityInput(_) => return EXIT_REFUSED,
                MatError::Group(g) if is_budget(g) => return EXIT_BUDGET,
                _ => {}
            }
        }
        if let Some(e) = cause.downcast_ref::<AmenError>() {
            if let AmenError::Group(g) = e {
                if is_budget(g) {
                    return EXIT_BUDGET;
                }
            }
        }
        if let Some(e) = cause.downcast_ref::<FoError>() {
            match e {
                FoError::BudgetExceeded { .. } | FoError::TooLarge { .. } => return EXIT_BUDGET,
                FoError::Group(g) if is_budget(g) => return EXIT_BUDGET,
                _ => {}
            }
        }
    }
    EXIT_INPUT
}

/// What a command computed, before it is wrapped in a record.
pub struct Outcome {
    pub outputs: Value,
    pub text: String,
    pub exit: i32,
}

pub struct Executed {
    pub record: ResultRecord,
    /// The record exactly as stored (or as it would be stored).
    pub stored: String,
    pub cache_hit: bool,
}

/// Writes the files listed under `outputs.files` into the output
/// directory, leaving identical files untouched.
fn materialize(rec: &ResultRecord, out: &Path) -> Result<()> {
    let Some(files) = rec.outputs.get("files").and_then(|f| f.as_object()) else {
        return Ok(());
    };
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    for (name, content) in files {
        let content = content.as_str().context("file contents must be text")?;
        let path = out.join(name);
        if fs::read_to_string(&path).ok().as_deref() == Some(content) {
            continue;
        }
        let tmp = out.join(format!(".{name}.{}.tmp", std::process::id()));
        fs::write(&tmp, content)?;
        fs::rename(&tmp, &path)?;
    }
    Ok(())
}

fn cached(cfg: &RunConfig, command: &str, inputs: Value, compute: impl FnOnce(&str) -> Result<Outcome>) -> Result<Executed> {
    let key = record_key(command, &inputs, cfg);
    let cache = Cache::new(&cfg.out);
    if cfg.cache {
        if let Some((stored, record)) = cache.get(&key)? {
            materialize(&record, &cfg.out)?;
            return Ok(Executed { record, stored, cache_hit: true });
        }
    }
    let start = Instant::now();
    let out = compute(&key)?;
    let record = ResultRecord {
        key,
        command: command.to_string(),
        config_hash: config_hash(cfg),
        config: cfg.entries(),
        inputs,
        outputs: out.outputs,
        text: out.text,
        exit_code: out.exit,
        created_unix: now_unix(),
        elapsed_seconds: start.elapsed().as_secs_f64(),
        artifact_version: ARTIFACT_VERSION.to_string(),
    };
    let stored = if cfg.cache {
        cache.put(&record)?
    } else {
        serde_json::to_string_pretty(&record)? + "\n"
    };
    materialize(&record, &cfg.out)?;
    Ok(Executed { record, stored, cache_hit: false })
}

pub fn execute(command: &Command, cfg: &RunConfig) -> Result<Executed> {
    match command {
        Command::Centralizer { group, element } => centralizer(cfg, group, element),
        Command::Ct { group } => ct(cfg, group),
        Command::Classes { group } => classes(cfg, group),
        Command::Icc { group, element, n, levels } => icc(cfg, group, element, *n, levels),
        Command::Folner(args) => folner(cfg, args, Mode::Translation),
        Command::Cfolner(args) => folner(cfg, args, Mode::Conjugation),
        Command::Profile { family, mode, n, sampler } => profile(cfg, family, mode, n, sampler),
        Command::Fo { groups, file, sentences, folner, mode } => fo(cfg, groups, file.as_deref(), sentences, folner.as_deref(), mode),
        Command::Freewords { max_len, pair, a, b, words } => freewords(cfg, *max_len, pair, a.as_deref(), b.as_deref(), *words),
        Command::Cache { .. } => unreachable!("handled before execute"),
    }
}

fn group(spec: &str) -> Result<GroupHandle> {
    GroupHandle::parse(spec).with_context(|| format!("group spec {spec:?}"))
}

fn element(g: &GroupHandle, text: &str) -> Result<GElem> {
    let x = g.parse_element(text)?;
    if !g.contains(&x) {
        return Err(GroupError::NotAnElement { element: x.to_string(), group: g.spec() }.into());
    }
    Ok(x)
}

fn elements(g: &GroupHandle, list: &str) -> Result<Vec<GElem>> {
    list.split(';').filter(|t| !t.trim().is_empty()).map(|t| element(g, t)).collect()
}

fn strings(xs: &[GElem]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

fn set_text(xs: &[String]) -> String {
    format!("{{{}}}", xs.join(", "))
}

fn centralizer(cfg: &RunConfig, spec: &str, elem: &str) -> Result<Executed> {
    let g = group(spec)?;
    let x = element(&g, elem)?;
    let inputs = json!({ "group": g.spec(), "element": x.to_string() });
    cached(cfg, "centralizer", inputs, |_| {
        if x == g.identity() {
            return Err(Refusal("IdentityInput: the identity has no proper centralizer".into()).into());
        }
        let brute = groups::centralizer(&g, &x, cfg.enum_budget)?;
        let abelian = groups::is_abelian(&g, &brute);
        let whole = brute.len() as u64 == g.order();
        let mut text = String::new();
        writeln!(text, "group        {}", g.spec())?;
        writeln!(text, "element      {x}")?;
        let mut outputs = json!({
            "bruteforce_order": brute.len(),
            "abelian": abelian,
            "whole_group": whole,
            "non_ct_witness": !abelian,
        });
        let mut exit = EXIT_OK;
        if let GElem::Gf2(m) = &x {
            let d = centralizer_structural(m)?;
            let predicted: Vec<Mat2<_>> = d.members();
            let found: Vec<Mat2<_>> = brute
                .iter()
                .map(|y| match y {
                    GElem::Gf2(y) => y.clone(),
                    _ => unreachable!("same group"),
                })
                .collect();
            let agree = predicted == found;
            if !agree {
                exit = EXIT_INTERNAL;
            }
            outputs["kind"] = json!(d.kind.name());
            outputs["order"] = json!(d.order());
            outputs["order_formula"] = json!(d.kind.order_formula());
            outputs["q"] = json!(d.q);
            outputs["representative"] = json!(d.representative.to_string());
            outputs["conjugator"] = json!(d.conjugator.to_string());
            outputs["agreement"] = json!(agree);
            writeln!(text, "kind         {} (order {} = {})", d.kind.name(), d.kind.order_formula(), d.order())?;
            writeln!(text, "order        {}", d.order())?;
            writeln!(text, "normal form  {}", d.representative)?;
            writeln!(text, "conjugator   {}", d.conjugator)?;
            writeln!(
                text,
                "brute force  {} elements, agreement {}",
                brute.len(),
                if agree { "OK" } else { "MISMATCH" }
            )?;
        } else {
            outputs["kind"] = Value::Null;
            outputs["order"] = json!(brute.len());
            writeln!(text, "kind         n/a (no structural form for this group; brute force only)")?;
            writeln!(text, "order        {}{}", brute.len(), if whole { " (whole group)" } else { "" })?;
        }
        if abelian {
            writeln!(text, "abelian      yes")?;
        } else {
            writeln!(text, "abelian      no: non-CT witness, the centralizer of a nontrivial element is nonabelian")?;
        }
        Ok(Outcome { outputs, text, exit })
    })
}

fn ct(cfg: &RunConfig, spec: &str) -> Result<Executed> {
    let g = group(spec)?;
    let inputs = json!({ "group": g.spec() });
    cached(cfg, "ct", inputs, |_| {
        let r = groups::ct_check(&g, cfg.enum_budget)?;
        let mut text = String::new();
        let violation = r.violation.as_ref().map(|v| {
            json!({
                "element": v.element.to_string(),
                "centralizer_order": v.centralizer_order,
                "left": v.left.to_string(),
                "right": v.right.to_string(),
            })
        });
        match &r.violation {
            None => writeln!(
                text,
                "CT holds for {}: all {} nontrivial centralizers are abelian ({} elements)",
                r.group, r.checked, r.group_order
            )?,
            Some(v) => {
                writeln!(text, "CT fails for {}", r.group)?;
                writeln!(text, "witness      {} (centralizer order {})", v.element, v.centralizer_order)?;
                writeln!(text, "commuting    {} and {} centralize it but do not commute", v.left, v.right)?;
            }
        }
        let outputs = json!({
            "group_order": r.group_order,
            "checked": r.checked,
            "holds": r.holds(),
            "violation": violation,
        });
        Ok(Outcome { outputs, text, exit: EXIT_OK })
    })
}

fn classes(cfg: &RunConfig, spec: &str) -> Result<Executed> {
    let g = group(spec)?;
    let inputs = json!({ "group": g.spec() });
    cached(cfg, "classes", inputs, |_| {
        let cls = groups::conjugacy_partition(&g, cfg.enum_budget)?;
        let sizes: Vec<usize> = cls.iter().map(|c| c.size()).collect();
        let total: usize = sizes.iter().sum();
        let mut rows = vec![];
        let mut text = String::new();
        writeln!(text, "{} has {} classes, sizes {{{}}}", g.spec(), cls.len(), sizes.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(","))?;
        writeln!(text, "{:>6} {:>12}  {:<16} representative", "size", "centralizer", "kind")?;
        for c in &cls {
            let kind = match &c.representative {
                GElem::Gf2(m) => matgrp::ClassRecord::for_element(m, c.centralizer_order)?.kind,
                _ => String::new(),
            };
            writeln!(text, "{:>6} {:>12}  {:<16} {}", c.size(), c.centralizer_order, kind, c.representative)?;
            rows.push(json!({
                "representative": c.representative.to_string(),
                "size": c.size(),
                "centralizer_order": c.centralizer_order,
                "kind": kind,
            }));
        }
        writeln!(text, "total {total} = |G|")?;
        let exit = if total as u64 == g.order() { EXIT_OK } else { EXIT_INTERNAL };
        let outputs = json!({ "group_order": g.order(), "sizes": sizes, "classes": rows });
        Ok(Outcome { outputs, text, exit })
    })
}

fn icc(cfg: &RunConfig, spec: &str, elem: &str, n: usize, levels: &[u32]) -> Result<Executed> {
    let g = group(spec)?;
    let x = element(&g, elem)?;
    let GElem::Gf2(m) = &x else {
        bail!("icc works in SL2 over binary fields, not {}", g.spec());
    };
    let inputs = json!({ "group": g.spec(), "element": x.to_string(), "n": n, "levels": levels });
    let tower = cfg.field_tower();
    cached(cfg, "icc", inputs, |_| {
        let fam = matgrp::icc_witness_family(m, n, &tower)?;
        let mut text = String::new();
        writeln!(text, "{} distinct conjugates of {} at level gf2_{}", fam.members.len(), fam.element, fam.level)?;
        let mut conjugates: Vec<String> = vec![];
        let mut rows = vec![];
        let mut consistent = true;
        for w in &fam.members {
            consistent &= fam.element.conj_by(&w.conjugator) == w.conjugate;
            conjugates.push(w.conjugate.to_string());
            writeln!(text, "  b = {:<6} {}", w.scalar.value_text(), w.conjugate)?;
            rows.push(json!({
                "scalar": w.scalar.value_text(),
                "conjugator": w.conjugator.to_string(),
                "conjugate": w.conjugate.to_string(),
            }));
        }
        let mut distinct = conjugates.clone();
        distinct.sort();
        distinct.dedup();
        consistent &= distinct.len() == conjugates.len();
        let mut growth = vec![];
        if !levels.is_empty() {
            let sizes = matgrp::class_growth_along_tower(m, levels, &tower, cfg.enum_budget)?;
            writeln!(text, "class growth along the tower")?;
            writeln!(text, "{:>6} {:>8} {:>12}", "level", "q", "class size")?;
            for (k, s) in levels.iter().zip(&sizes) {
                writeln!(text, "{:>6} {:>8} {:>12}", k, 1u64 << k, s)?;
                growth.push(json!({ "level": k, "q": 1u64 << k, "class_size": s }));
            }
            let chain: Vec<String> = sizes.iter().map(|s| s.to_string()).collect();
            writeln!(text, "growth {}", chain.join(" -> "))?;
        }
        let outputs = json!({
            "level": fam.level,
            "element": fam.element.to_string(),
            "family": rows,
            "distinct": consistent,
            "growth": growth,
        });
        Ok(Outcome { outputs, text, exit: if consistent { EXIT_OK } else { EXIT_INTERNAL } })
    })
}

/// Serializes a certificate, reads it back and verifies it from the JSON
/// alone.
fn round_trip(rec: &CertificateRecord) -> Result<Value> {
    let text = serde_json::to_string(rec)?;
    let back: CertificateRecord = serde_json::from_str(&text)?;
    back.verify().context("certificate failed to re-verify from JSON")?;
    Ok(serde_json::to_value(&back)?)
}

fn search_text(out: &SearchOutcome<GElem>, mode: Mode, text: &mut String) -> fmt::Result {
    writeln!(text, "mode         {mode}")?;
    writeln!(text, "status       {} ({})", out.status.name(), out.method)?;
    match &out.witness {
        Some(w) => {
            writeln!(text, "|T|          {}", w.len())?;
            writeln!(text, "T            {}", set_text(&strings(w)))?;
        }
        None => writeln!(text, "|T|          none")?,
    }
    if let Some(d) = &out.defect {
        writeln!(text, "defect       {} < {}", format_ratio(d), format_ratio(&out.epsilon))?;
    }
    if out.lower_bound > out.min_size {
        writeln!(text, "lower bound  no certifying set of size {} to {}", out.min_size, out.lower_bound - 1)?;
    } else {
        writeln!(text, "lower bound  none beyond the size floor {}", out.min_size)?;
    }
    match out.invariant_union_size {
        Some(u) if out.beats_invariant_unions() => {
            writeln!(text, "orbit unions smallest invariant union has size {u}; the witness beats it")
        }
        Some(u) => writeln!(text, "orbit unions smallest invariant union has size {u}"),
        None => writeln!(text, "orbit unions none large enough"),
    }
}

fn folner(cfg: &RunConfig, args: &SearchArgs, mode: Mode) -> Result<Executed> {
    let g = group(&args.group)?;
    let s = match &args.s {
        Some(list) => elements(&g, list)?,
        None => g.generators(),
    };
    let epsilon = match &args.epsilon {
        Some(e) => parse_ratio(e)?,
        None => cfg.epsilon,
    };
    if *epsilon.numer() == 0 {
        return Err(AmenError::NonPositiveEpsilon.into());
    }
    let check = args.check.as_deref().map(|t| elements(&g, t)).transpose()?;
    let exclude_identity = cfg.exclude_identity_for(mode);
    let command = match mode {
        Mode::Translation => "folner",
        Mode::Conjugation => "cfolner",
    };
    let inputs = json!({
        "group": g.spec(),
        "S": strings(&s),
        "epsilon": format_ratio(&epsilon),
        "min_size": args.min_size,
        "check": check.as_ref().map(|t| strings(t)),
        "heuristic": args.heuristic,
    });
    cached(cfg, command, inputs, |_| {
        let mut text = String::new();
        writeln!(text, "group        {}", g.spec())?;
        writeln!(text, "S            {}", set_text(&strings(&s)))?;
        if let Some(t) = &check {
            return match certify(&g, &s, t, epsilon, mode)? {
                Verdict::Certified(cert) => {
                    let certificate = round_trip(&cert.to_record())?;
                    writeln!(text, "certified    defect {} < {}", format_ratio(&cert.defect), format_ratio(&epsilon))?;
                    writeln!(text, "certificate  re-verified from JSON")?;
                    Ok(Outcome { outputs: json!({ "certified": true, "certificate": certificate }), text, exit: EXIT_OK })
                }
                Verdict::Refused { defect } => {
                    writeln!(text, "refused      defect {} is not below {}", format_ratio(&defect), format_ratio(&epsilon))?;
                    let outputs = json!({ "certified": false, "defect": format_ratio(&defect) });
                    Ok(Outcome { outputs, text, exit: EXIT_REFUSED })
                }
            };
        }
        let options = SearchOptions {
            exclude_identity,
            budget: cfg.search_budget,
            enum_budget: cfg.enum_budget,
            heuristic_only: args.heuristic,
        };
        let out = min_folner_search(&g, &s, epsilon, mode, args.min_size, options)?;
        search_text(&out, mode, &mut text)?;
        let certificate = match &out.witness {
            Some(w) => match certify(&g, &s, w, epsilon, mode)? {
                Verdict::Certified(mut cert) => {
                    cert.exclude_identity = exclude_identity;
                    let c = round_trip(&cert.to_record())?;
                    writeln!(text, "certificate  re-verified from JSON")?;
                    Some(c)
                }
                Verdict::Refused { defect } => {
                    bail!("search returned a set with defect {} that does not certify", format_ratio(&defect))
                }
            },
            None => None,
        };
        let exit = match out.status {
            SearchStatus::Exact | SearchStatus::Heuristic => EXIT_OK,
            SearchStatus::Exhausted => EXIT_REFUSED,
            SearchStatus::BudgetExceeded => EXIT_BUDGET,
        };
        let outputs = json!({
            "status": out.status.name(),
            "method": out.method,
            "size": out.size(),
            "lower_bound": out.lower_bound,
            "invariant_union_size": out.invariant_union_size,
            "beats_invariant_unions": out.beats_invariant_unions(),
            "exclude_identity": exclude_identity,
            "certificate": certificate,
        });
        Ok(Outcome { outputs, text, exit })
    })
}

fn parse_range(text: &str) -> Result<std::ops::RangeInclusive<usize>> {
    let t = text.trim();
    let (lo, hi) = match t.split_once("..") {
        Some((a, b)) => (a.trim().parse()?, b.trim().trim_start_matches('=').parse()?),
        None => {
            let n: usize = t.parse()?;
            (n, n)
        }
    };
    if lo == 0 || hi < lo {
        bail!("n range {text:?} must be a..b with 1 <= a <= b");
    }
    Ok(lo..=hi)
}

fn parse_sampler(text: &str, base: &GroupHandle) -> Result<Sampler> {
    let t = text.trim();
    if t == "mixed" {
        return Ok(Sampler::Mixed);
    }
    if let Some(k) = t.strip_prefix("random:") {
        return Ok(Sampler::Random { samples: k.trim().parse()? });
    }
    if let Some(list) = t.strip_prefix("fixed:") {
        return Ok(Sampler::Fixed(elements(base, list)?));
    }
    bail!("sampler must be mixed, random:<k> or fixed:<e1;e2;...>, not {text:?}")
}

fn profile(cfg: &RunConfig, family_spec: &str, mode: &str, ns: &str, sampler: &str) -> Result<Executed> {
    let family = parse_family(family_spec)?;
    let base = family.first().ok_or_else(|| anyhow!("empty family"))?;
    let mode: Mode = mode.parse()?;
    let ns = parse_range(ns)?;
    let sampler = parse_sampler(sampler, base)?;
    let inputs = json!({
        "family": family.iter().map(|g| g.spec()).collect::<Vec<_>>(),
        "mode": mode,
        "n": format!("{}..{}", ns.start(), ns.end()),
        "sampler": sampler.name(),
    });
    cached(cfg, "profile", inputs, |key| {
        let mut opts = ProfileOptions::new(mode, cfg.seed);
        opts.tower = cfg.field_tower();
        opts.search = SearchOptions {
            exclude_identity: cfg.exclude_identity_for(mode),
            budget: cfg.search_budget,
            enum_budget: cfg.enum_budget,
            heuristic_only: false,
        };
        let p = profile_uniform(&family, mode, ns.clone(), &sampler, &opts)?;

        // every recorded witness must certify again from its strings
        let mut recertified = 0usize;
        for c in &p.cells {
            if let Some(t) = &c.t {
                let g = GroupHandle::parse(&c.group)?;
                let s = c.s.iter().map(|x| g.parse_element(x)).collect::<Result<Vec<_>, _>>()?;
                let t = t.iter().map(|x| g.parse_element(x)).collect::<Result<Vec<_>, _>>()?;
                if !certify(&g, &s, &t, parse_ratio(&c.epsilon)?, mode)?.is_certified() {
                    bail!("profile cell {} n={} has a witness that does not certify", c.level, c.n);
                }
                recertified += 1;
            }
        }

        let config_line: Vec<String> = cfg.entries().iter().map(|(k, v)| format!("{k}={v}")).collect();
        let body = p.to_csv();
        let (version, rest) = body.split_once('\n').expect("csv has a version line");
        let csv = format!("{version}\n# config {}\n{rest}", config_line.join(" "));
        let mut json_text = serde_json::to_string_pretty(&json!({ "config": cfg.entries(), "profile": p }))?;
        json_text.push('\n');
        let stem = format!("profile-{}", &key[..12]);
        let (csv_name, json_name) = (format!("{stem}.csv"), format!("{stem}.json"));

        let mut text = String::new();
        writeln!(text, "{} profile, sampler {}, seed {}", mode, p.sampler, p.seed)?;
        writeln!(text, "{:>10} {:>4} {:>8} {:>6}", "level", "n", "f_hat", "exact")?;
        for f in &p.f_hat {
            let v = f.value.map(|v| v.to_string()).unwrap_or_else(|| "-".into());
            writeln!(text, "{:>10} {:>4} {:>8} {:>6}", f.level, f.n, v, if f.all_exact { "yes" } else { "no" })?;
        }
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for c in &p.cells {
            *counts.entry(c.status.as_str()).or_default() += 1;
        }
        let counts_text: Vec<String> = counts.iter().map(|(k, v)| format!("{k} {v}")).collect();
        writeln!(text, "cells        {} ({}), {} witnesses re-certified", p.cells.len(), counts_text.join(", "), recertified)?;
        writeln!(text, "csv          {}", cfg.out.join(&csv_name).display())?;
        writeln!(text, "json         {}", cfg.out.join(&json_name).display())?;

        let mut files = serde_json::Map::new();
        files.insert(csv_name.clone(), Value::String(csv));
        files.insert(json_name.clone(), Value::String(json_text));
        let outputs = json!({
            "csv_file": csv_name,
            "json_file": json_name,
            "cells": p.cells.len(),
            "statuses": counts,
            "f_hat": p.f_hat,
            "recertified": recertified,
            "files": files,
        });
        Ok(Outcome { outputs, text, exit: EXIT_OK })
    })
}

fn short(f: &Formula) -> String {
    let s = f.to_string();
    if s.len() <= 160 {
        s
    } else {
        format!("<sentence with {} nodes, quantifier depth {}>", f.size(), f.quantifier_depth())
    }
}

fn fo(
    cfg: &RunConfig,
    groups_spec: &str,
    file: Option<&Path>,
    inline: &[String],
    folner: Option<&str>,
    mode: &str,
) -> Result<Executed> {
    let family = parse_family(groups_spec)?;
    let mut sentences: Vec<(String, Formula)> = vec![];
    let mut errors = vec![];
    if let Some(path) = file {
        let body = if path == Path::new("-") {
            std::io::read_to_string(std::io::stdin())?
        } else {
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
        };
        for line in read_sentences(&body) {
            match line.sentence {
                Ok(f) => sentences.push((format!("{}:{}", path.display(), line.line), f)),
                Err(e @ FoError::Syntax { .. }) => errors.push(format!("{}: {e}", path.display())),
                Err(e) => errors.push(format!("{}:{}: {e}", path.display(), line.line)),
            }
        }
    }
    for (i, s) in inline.iter().enumerate() {
        match parse(s) {
            Ok(f) if f.is_sentence() => sentences.push((format!("sentence {}", i + 1), f)),
            Ok(f) => errors.push(format!(
                "sentence {}: {}",
                i + 1,
                FoError::FreeVariables(f.free_vars().into_iter().collect())
            )),
            Err(e) => errors.push(format!("sentence {}: {e}", i + 1)),
        }
    }
    if let Some(nm) = folner {
        let mode: Mode = mode.parse()?;
        let (n, m) = nm.split_once(',').context("--folner takes n,m")?;
        let (n, m): (usize, usize) = (n.trim().parse()?, m.trim().parse()?);
        let opts = SentenceOptions { exclude_identity: cfg.exclude_identity_for(mode), max_nodes: cfg.formula_nodes };
        sentences.push((format!("folner({n},{m},{mode})"), folner_sentence(n, m, mode, opts)?));
    }
    if !errors.is_empty() {
        bail!("{}", errors.join("\n"));
    }
    if sentences.is_empty() {
        bail!("no sentences given (use a file, --sentence or --folner)");
    }
    let inputs = json!({
        "groups": family.iter().map(|g| g.spec()).collect::<Vec<_>>(),
        "sentences": sentences.iter().map(|(_, f)| f.to_string()).collect::<Vec<_>>(),
    });
    cached(cfg, "fo", inputs, |_| {
        let mut text = String::new();
        let mut reports = vec![];
        for (label, f) in &sentences {
            writeln!(text, "{label}: {}", short(f))?;
            for g in &family {
                let r = evaluate_sentence(g, f, cfg.eval_budget)?;
                let detail = match (&r.witness, &r.counterexample) {
                    (Some(w), _) if !w.is_empty() => {
                        let b: Vec<String> = w.iter().map(|b| format!("{} = {}", b.var, b.element)).collect();
                        format!("  witness {}", b.join(", "))
                    }
                    (_, Some(c)) if !c.is_empty() => {
                        let b: Vec<String> = c.iter().map(|b| format!("{} = {}", b.var, b.element)).collect();
                        format!("  counterexample {}", b.join(", "))
                    }
                    _ => String::new(),
                };
                writeln!(text, "  {:<14} {}{}", g.spec(), r.value, detail)?;
                reports.push(json!({
                    "label": label,
                    "group": r.group,
                    "value": r.value,
                    "witness": r.witness,
                    "counterexample": r.counterexample,
                }));
            }
        }
        Ok(Outcome { outputs: json!({ "reports": reports }), text, exit: EXIT_OK })
    })
}

fn freewords(cfg: &RunConfig, max_len: usize, pair: &str, a: Option<&str>, b: Option<&str>, words: bool) -> Result<Executed> {
    let (ga, gb) = match (a, b) {
        (Some(a), Some(b)) => (Mat2::<RatFunc>::parse(a)?, Mat2::<RatFunc>::parse(b)?),
        _ => match pair {
            "default" => default_free_generators(),
            "hyperbolic" => hyperbolic_pair(),
            other => bail!("unknown pair {other:?}; use default or hyperbolic"),
        },
    };
    if max_len > 12 {
        bail!("max_len {max_len} would evaluate over 700000 words; the cap is 12");
    }
    let inputs = json!({ "a": ga.to_string(), "b": gb.to_string(), "max_len": max_len, "words": words });
    cached(cfg, "freewords", inputs, |_| {
        let r = free_words_check(&ga, &gb, max_len);
        let mut text = String::new();
        writeln!(text, "a = {}", r.generators[0])?;
        writeln!(text, "b = {}", r.generators[1])?;
        writeln!(text, "{:>6} {:>8} {:>12} {:>10}", "length", "words", "max degree", "identity")?;
        for l in &r.per_length {
            let d = l.max_entry_degree.map(|d| d.to_string()).unwrap_or_else(|| "-".into());
            writeln!(text, "{:>6} {:>8} {:>12} {:>10}", l.length, l.words, d, l.identities)?;
        }
        writeln!(text, "{} reduced words: {}", r.total_words, r.verdict())?;
        let mut outputs = json!({
            "generators": r.generators,
            "max_len": r.max_len,
            "total_words": r.total_words,
            "per_length": r.per_length,
            "relation_count": r.relations.len(),
            "relations": r.relations.iter().take(100).collect::<Vec<_>>(),
            "verdict": r.verdict(),
        });
        if words {
            outputs["words"] = serde_json::to_value(&r.words)?;
        }
        Ok(Outcome { outputs, text, exit: EXIT_OK })
    })
}

pub fn cache_command(action: &CacheAction, cache: &Cache, json_out: bool) -> Result<i32> {
    match action {
        CacheAction::List => {
            let mut rows = vec![];
            for key in cache.keys()? {
                if let Some((_, rec)) = cache.get(&key)? {
                    rows.push(rec);
                }
            }
            if json_out {
                let v: Vec<Value> = rows
                    .iter()
                    .map(|r| json!({ "key": r.key, "command": r.command, "exit_code": r.exit_code, "created_unix": r.created_unix }))
                    .collect();
                println!("{}", serde_json::to_string_pretty(&v)?);
            } else {
                for r in &rows {
                    println!("{}  {:<12} exit {}  {}", &r.key[..12], r.command, r.exit_code, r.inputs);
                }
            }
            Ok(EXIT_OK)
        }
        CacheAction::Show { key } => {
            let key = cache.resolve(key)?;
            let (stored, rec) = cache.get(&key)?.context("record vanished")?;
            if json_out {
                print!("{stored}");
            } else {
                print!("{}", rec.text);
            }
            Ok(rec.exit_code)
        }
        CacheAction::Verify => {
            let (mut checked, mut failed) = (0usize, 0usize);
            for key in cache.keys()? {
                let Some((_, rec)) = cache.get(&key)? else { continue };
                let Some(c) = rec.outputs.get("certificate").filter(|c| !c.is_null()) else { continue };
                checked += 1;
                let ok = serde_json::from_value::<CertificateRecord>(c.clone())
                    .map_err(anyhow::Error::from)
                    .and_then(|r| r.verify().map_err(anyhow::Error::from));
                if let Err(e) = ok {
                    failed += 1;
                    println!("{}  FAILED: {e:#}", &key[..12]);
                }
            }
            println!("{checked} certificates checked, {failed} failed");
            Ok(if failed == 0 { EXIT_OK } else { EXIT_REFUSED })
        }
        CacheAction::Clear => {
            let n = cache.remove_all()?;
            println!("removed {n} records from {}", cache.dir().display());
            Ok(EXIT_OK)
        }
    }
}
