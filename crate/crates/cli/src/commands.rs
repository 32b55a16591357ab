//! Implementations of the batch subcommands. Each returns a list of JSON
//! records; rendering and exit codes live in `records`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use serde_json::{json, Value};

use tseq_core::canonical::{canonicalize, CoeffRep};
use tseq_core::characters::dsum_char::{ds_continuity, DsCharacter};
use tseq_core::characters::radical::{common_kernel_in_sum, common_kernel_in_table};
use tseq_core::characters::report::{
    classify_embedding_multiples, continuity_report, default_checkpoints,
};
use tseq_core::characters::witness::build_faithful_witness;
use tseq_core::characters::TruncatedPAdic;
use tseq_core::sequences::{make_sequence, ExponentRule, SequenceSpec};
use tseq_core::windows::criteria::{
    coprime_divisibility_report, gap_report, order_ratios, quotient_order_infimum,
    sequence_orders, torsion_window_check, tuple_ratio_infimum, TorsionWindowOutcome,
};
use tseq_core::windows::{enumerate_window, escape_scan, membership, Membership};
use tseq_core::{Ambient, DirectSumContext, Element, OrdersRule, Prime, PruferElement};

use crate::config::RunConfig;
use crate::parse;
use crate::records::AppError;

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable record")
}

fn element_record(e: &Element) -> Value {
    let shown = match e {
        Element::Prufer(a) => a.to_string(),
        Element::Sum(a) => a.to_string(),
    };
    json!({ "value": shown, "element": to_value(e) })
}

/// `canon`: canonical forms of coefficient representations.
pub fn canon(p: Option<u64>, terms: Option<&str>, lines: &[String]) -> Result<Vec<Value>, AppError> {
    let mut inputs: Vec<CoeffRep> = Vec::new();
    if let Some(t) = terms {
        let p = p.ok_or_else(|| AppError::Input("--terms needs --p".into()))?;
        let p = Prime::new(p)?;
        let pairs: Vec<(u32, i64)> = serde_json::from_str(t)?;
        inputs.push(
            CoeffRep::from_i64_terms(p, pairs).map_err(|e| AppError::Input(e.to_string()))?,
        );
    }
    for line in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        inputs.push(serde_json::from_str(line)?);
    }
    if inputs.is_empty() {
        return Err(AppError::Input(
            "give --terms or stream coefficient reps on stdin".into(),
        ));
    }
    let mut out = Vec::new();
    for rep in inputs {
        let c = canonicalize(&rep).map_err(|e| AppError::Input(e.to_string()))?;
        let support: Vec<u32> = c.support().into_iter().collect();
        out.push(json!({
            "cmd": "canon",
            "input": to_value(&rep),
            "canonical": c.terms().iter().map(|(&n, &s)| json!([n, s])).collect::<Vec<_>>(),
            "support": support,
            "lambda": c.weight_count(),
            "value": c.eval().to_string(),
        }));
    }
    Ok(out)
}

/// `aset`: enumerate a windowed combination set.
pub fn aset(cfg: &RunConfig, seq: &str, l: u32, window: &str) -> Result<Vec<Value>, AppError> {
    let (spec, handle) = parse::build_sequence(seq)?;
    let w = parse::parse_window(window)?;
    let set = enumerate_window(&handle, l, w, &cfg.budget())?;
    let mut out = vec![json!({
        "cmd": "aset",
        "seq": to_value(&spec),
        "weight_budget": l,
        "window": { "start": w.start, "end": w.end },
        "distinct_elements": set.len(),
    })];
    for (elem, wit) in &set {
        let mut rec = element_record(elem);
        rec["witness"] = json!({ "indices": wit.indices, "coeffs": wit.coeffs });
        out.push(rec);
    }
    Ok(out)
}

/// `member`: windowed membership with a checkable witness.
pub fn member(cfg: &RunConfig, g: &str, seq: &str, l: u32, window: &str) -> Result<Vec<Value>, AppError> {
    let (spec, handle) = parse::build_sequence(seq)?;
    let w = parse::parse_window(window)?;
    let g = parse::parse_element(g, handle.ambient())?;
    let m = membership(&g, &handle, l, w, &cfg.budget())?;
    let rec = match m {
        Membership::Member { witness } => json!({
            "cmd": "member",
            "seq": to_value(&spec),
            "g": element_record(&g),
            "weight_budget": l,
            "window": { "start": w.start, "end": w.end },
            "membership": "member",
            "witness": { "indices": witness.indices, "coeffs": witness.coeffs },
        }),
        Membership::NotInWindow => json!({
            "cmd": "member",
            "seq": to_value(&spec),
            "g": element_record(&g),
            "weight_budget": l,
            "window": { "start": w.start, "end": w.end },
            "membership": "not_in_window",
            "note": "silent about indices beyond the window",
        }),
    };
    Ok(vec![rec])
}

/// `zpscan`: membership persistence across shifted windows.
pub fn zpscan(
    cfg: &RunConfig,
    g: &str,
    seq: &str,
    l: u32,
    m_range: &str,
    width: Option<u64>,
) -> Result<Vec<Value>, AppError> {
    let (spec, handle) = parse::build_sequence(seq)?;
    let range = parse::parse_range(m_range)?;
    let width = width.unwrap_or(cfg.default_width);
    let g = parse::parse_element(g, handle.ambient())?;
    let verdict = escape_scan(&g, &handle, l, range, width, &cfg.budget())?;
    Ok(vec![json!({
        "cmd": "zpscan",
        "seq": to_value(&spec),
        "g": element_record(&g),
        "weight_budget": l,
        "m_range": { "start": range.0, "end": range.1 },
        "window_width": width,
        "verdict": to_value(&verdict),
        "note": "refuted means membership persisted at every tested window start; the infinite sets are never decided",
    })])
}

/// `criteria`: run every applicable sufficient-condition checker.
pub fn criteria(
    cfg: &RunConfig,
    seq: &str,
    l: Option<u32>,
    window: Option<&str>,
    n: Option<u64>,
    horizon: Option<u64>,
    ds_depth: Option<u64>,
) -> Result<Vec<Value>, AppError> {
    let (spec, handle) = parse::build_sequence(seq)?;
    let w = window.map(parse::parse_window).transpose()?;
    let mut horizon = horizon.unwrap_or(cfg.default_horizon);
    if let Some(w) = &w {
        horizon = horizon.max(w.end);
    }
    if let Some(max) = handle.max_index() {
        horizon = horizon.min(max);
    }
    let mut out = Vec::new();

    let orders = sequence_orders(&handle, horizon)?;
    out.push(json!({
        "cmd": "criteria",
        "seq": to_value(&spec),
        "check": "order_prefix",
        "horizon": horizon,
        "orders": orders.iter().map(|o| o.value().to_string()).collect::<Vec<_>>(),
    }));

    let ratios = order_ratios(&orders);
    out.push(json!({
        "check": "order_ratio_divergence",
        "horizon": horizon,
        "ratios": ratios.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        "backing": "divergence of these ratios is sufficient for a T-sequence; bounded prefixes are inconclusive",
    }));

    let report = coprime_divisibility_report(&orders);
    out.push(json!({
        "check": "pairwise_coprime",
        "horizon": horizon,
        "verdict": to_value(&report.coprime),
        "backing": "pairwise coprime orders are sufficient for a T-sequence when the property persists",
    }));
    out.push(json!({
        "check": "divisibility_growth",
        "horizon": horizon,
        "verdict": to_value(&report.divisibility),
        "backing": "a divisibility chain with ratios tending to infinity is sufficient for a T-sequence",
    }));

    // exponent gaps apply to Prüfer sequences with strictly increasing orders
    if matches!(handle.ambient(), Ambient::Prufer(_)) {
        let exps: Vec<u64> = (1..=horizon)
            .map(|k| {
                handle
                    .term(k)
                    .map(|t| match t {
                        Element::Prufer(a) => u64::from(a.exponent()),
                        Element::Sum(_) => unreachable!(),
                    })
                    .map_err(AppError::from)
            })
            .collect::<Result<_, _>>()?;
        match gap_report(&exps) {
            Ok(v) => out.push(json!({
                "check": "exponent_gap_divergence",
                "horizon": horizon,
                "verdict": to_value(&v),
                "backing": "for shifted sequences, gap divergence is equivalent to being a T-sequence; a persistent bound is a refutation candidate",
            })),
            Err(e) => out.push(json!({
                "check": "exponent_gap_divergence",
                "skipped": e.to_string(),
            })),
        }
    }

    if let (Some(w), Some(l)) = (w, l) {
        let ratio_inf = tuple_ratio_infimum(&orders, l, w, &cfg.budget())?;
        out.push(json!({
            "check": "tuple_order_ratio_infimum",
            "window": { "start": w.start, "end": w.end },
            "weight_budget": l,
            "value": ratio_inf.to_string(),
            "backing": "this infimum tending to infinity with the window start is sufficient for a T-sequence",
        }));
        let quot_inf = quotient_order_infimum(&handle, l, w, cfg.subgroup_cap, &cfg.budget())?;
        out.push(json!({
            "check": "quotient_order_infimum",
            "window": { "start": w.start, "end": w.end },
            "weight_budget": l,
            "value": quot_inf.to_string(),
            "backing": "this infimum tending to infinity with the window start is sufficient for a T-sequence; it always dominates the tuple ratio infimum",
        }));
        if let Some(n) = n {
            let depth = ds_depth.or_else(|| handle.max_index());
            let outcome =
                torsion_window_check(&handle, l, n, w, depth, cfg.torsion_cap, &cfg.budget())?;
            out.push(json!({
                "check": "torsion_window_separation",
                "window": { "start": w.start, "end": w.end },
                "weight_budget": l,
                "torsion": n,
                "outcome": to_value(&outcome),
                "backing": "empty torsion intersections for every weight and divisor, at late enough windows, are sufficient for a T-sequence",
            }));
            if let TorsionWindowOutcome::Violation { .. } = outcome {}
        }
    }
    Ok(out)
}

fn parse_chi(
    chi: &str,
    p: Option<Prime>,
    truncation: Option<usize>,
) -> Result<TruncatedPAdic, AppError> {
    let chi = chi.trim();
    if chi.starts_with('{') {
        return serde_json::from_str(chi).map_err(|e| AppError::Input(e.to_string()));
    }
    if let Some(m) = chi.strip_prefix("mult:") {
        let p = p.ok_or_else(|| AppError::Input("mult:… needs a prime in context".into()))?;
        let len = truncation
            .ok_or_else(|| AppError::Input("mult:… needs --truncation".into()))?;
        let m: BigUint = m
            .parse()
            .map_err(|_| AppError::Input("bad multiplier".into()))?;
        return TruncatedPAdic::from_uint(p, &m, len).map_err(AppError::from);
    }
    Err(AppError::Input(
        "characters are JSON objects or mult:<m> with --truncation".into(),
    ))
}

fn tolerance(p: Prime, exp: u32) -> BigRational {
    BigRational::new(1.into(), num_bigint::BigInt::from(p.power(exp)))
}

pub fn char_eval(
    p: Option<u64>,
    chi: &str,
    y: &str,
    truncation: Option<usize>,
) -> Result<Vec<Value>, AppError> {
    let p = p.map(Prime::new).transpose()?;
    let chi = parse_chi(chi, p, truncation)?;
    let y = PruferElement::from_fraction_str(chi.prime(), y)?;
    let v = chi.eval(&y)?;
    Ok(vec![json!({
        "cmd": "char_eval",
        "y": y.to_string(),
        "value": v.to_string(),
        "norm": format!("{}/{}", v.norm().numer(), v.norm().denom()),
    })])
}

pub fn char_block(
    p: Option<u64>,
    chi: &str,
    lo: u32,
    hi: u32,
    truncation: Option<usize>,
) -> Result<Vec<Value>, AppError> {
    let p = p.map(Prime::new).transpose()?;
    let chi = parse_chi(chi, p, truncation)?;
    let v = chi.block_value(lo, hi)?;
    Ok(vec![json!({
        "cmd": "char_rk",
        "lo": lo,
        "hi": hi,
        "value": v.to_string(),
    })])
}

pub fn char_report(
    cfg: &RunConfig,
    seq: &str,
    chi: &str,
    horizon: Option<u64>,
    truncation: Option<usize>,
    tol_exp: Option<u32>,
    checkpoints: Option<&str>,
) -> Result<Vec<Value>, AppError> {
    let (spec, handle) = parse::build_sequence(seq)?;
    let horizon = horizon.unwrap_or(cfg.default_horizon);
    let cps = match checkpoints {
        Some(s) => parse::parse_checkpoints(s)?,
        None => default_checkpoints(horizon),
    };
    let tol_exp = tol_exp.unwrap_or(cfg.tolerance_exp);
    let report = match handle.ambient() {
        Ambient::Prufer(p) => {
            let chi = parse_chi(chi, Some(*p), truncation)?;
            let tol = tolerance(*p, tol_exp);
            continuity_report(&chi, &handle, horizon, &cps, &tol)?
        }
        Ambient::Sum(_) => {
            let chi: DsCharacter = serde_json::from_str(chi)
                .map_err(|e| AppError::Input(format!("direct-sum characters are JSON: {e}")))?;
            let base = ds_base_tolerance(&chi);
            let tol = BigRational::new(1.into(), num_bigint::BigInt::from(base.pow(tol_exp)));
            ds_continuity(&chi, &handle, horizon, &cps, &tol)?
        }
    };
    Ok(vec![json!({
        "cmd": "char_report",
        "seq": to_value(&spec),
        "report": to_value(&report),
        "note": "tail suprema are exact; the verdict is relative to horizon, truncation, and tolerance",
    })])
}

fn ds_base_tolerance(chi: &DsCharacter) -> u64 {
    chi.context().order_of(1).unwrap_or(3)
}

pub fn char_classify(
    cfg: &RunConfig,
    seq: &str,
    modulus: u64,
    horizon: Option<u64>,
    truncation: Option<usize>,
    tol_exp: Option<u32>,
    checkpoints: Option<&str>,
) -> Result<Vec<Value>, AppError> {
    let (spec, handle) = parse::build_sequence(seq)?;
    let p = match handle.ambient() {
        Ambient::Prufer(p) => *p,
        Ambient::Sum(_) => {
            return Err(AppError::Input(
                "classification of scaled embeddings needs a Prüfer sequence".into(),
            ))
        }
    };
    let mut mod_exp = 0u32;
    let mut m = modulus;
    while m > 1 && m % p.get() == 0 {
        m /= p.get();
        mod_exp += 1;
    }
    if m != 1 || mod_exp == 0 {
        return Err(AppError::Input(format!(
            "--mod must be a positive power of p = {p}"
        )));
    }
    let horizon = horizon.unwrap_or(cfg.default_horizon);
    let cps = match checkpoints {
        Some(s) => parse::parse_checkpoints(s)?,
        None => default_checkpoints(horizon),
    };
    let tol = tolerance(p, tol_exp.unwrap_or(cfg.tolerance_exp));
    // size the truncation to the largest exponent the horizon touches
    let truncation = match truncation {
        Some(t) => t,
        None => {
            let mut needed = 1u32;
            for k in 1..=horizon {
                if let Element::Prufer(a) = handle.term(k)? {
                    needed = needed.max(a.exponent());
                }
            }
            needed as usize + 1
        }
    };
    let c = classify_embedding_multiples(&handle, mod_exp, horizon, truncation, &cps, &tol)?;
    let claim = if c.family_complete {
        "the sequence contains a tail of the unit sequence, so the scaled embeddings exhaust the continuous characters: this is a complete classification at the stated horizon"
    } else {
        "classification restricted to the scaled embeddings; the sequence does not contain a tail of the unit sequence, so other continuous characters may exist"
    };
    Ok(vec![json!({
        "cmd": "char_classify",
        "seq": to_value(&spec),
        "modulus": c.modulus,
        "horizon": horizon,
        "truncation": truncation,
        "tolerance": format!("{}/{}", tol.numer(), tol.denom()),
        "continuous_residues": c.continuous.iter().collect::<Vec<_>>(),
        "scope": claim,
    })])
}

pub fn char_witness(
    p: u64,
    x: &str,
    exponents: &str,
    count: u64,
    truncation: usize,
    set: Option<&str>,
) -> Result<Vec<Value>, AppError> {
    let p = Prime::new(p)?;
    let x = PruferElement::from_fraction_str(p, x)?;
    let rule: ExponentRule = exponents
        .parse()
        .map_err(|e: tseq_core::sequences::SequenceError| AppError::Input(e.to_string()))?;
    let exps: Vec<u32> = (1..=count)
        .map(|k| rule.eval(k).map_err(|e| AppError::Input(e.to_string())))
        .collect::<Result<_, _>>()?;
    let overrides: BTreeMap<u32, u32> = match set {
        None => BTreeMap::new(),
        Some(s) => s
            .split(';')
            .map(|pair| {
                let (pos, d) = pair
                    .split_once('=')
                    .ok_or_else(|| AppError::Input(format!("override `{pair}` must be pos=digit")))?;
                Ok((
                    pos.trim()
                        .parse()
                        .map_err(|_| AppError::Input("bad position".into()))?,
                    d.trim()
                        .parse()
                        .map_err(|_| AppError::Input("bad digit".into()))?,
                ))
            })
            .collect::<Result<_, AppError>>()?,
    };
    let w = build_faithful_witness(&x, &exps, truncation, &overrides)?;
    let block_values: Vec<String> = w
        .complete_blocks
        .iter()
        .map(|&(lo, hi)| {
            w.character
                .block_value(lo, hi)
                .map(|v| v.to_string())
                .map_err(AppError::from)
        })
        .collect::<Result<_, _>>()?;
    Ok(vec![json!({
        "cmd": "char_witness",
        "x": x.to_string(),
        "exponents": exps,
        "truncation": truncation,
        "character": to_value(&w.character),
        "complete_blocks": w.complete_blocks,
        "block_values": block_values,
        "free_positions": w.free_positions,
        "distinct_witnesses": format!("{}^{}", p, w.free_positions),
        "chi_of_x": w.character.eval(&x)?.to_string(),
    })])
}

#[allow(clippy::too_many_arguments)]
pub fn char_radical(
    cfg: &RunConfig,
    p: Option<u64>,
    multiples: Option<&str>,
    torsion_exp: Option<u32>,
    truncation: Option<usize>,
    orders: Option<&str>,
    depth: Option<u64>,
    units: Option<&str>,
    family: Option<&str>,
) -> Result<Vec<Value>, AppError> {
    match (p, orders) {
        (Some(p), None) => {
            let p = Prime::new(p)?;
            let exp = torsion_exp
                .ok_or_else(|| AppError::Input("the Prüfer mode needs --torsion-exp".into()))?;
            let multiples = multiples
                .ok_or_else(|| AppError::Input("the Prüfer mode needs --multiples".into()))?;
            let len = truncation.unwrap_or(exp as usize + 2);
            let family: Vec<TruncatedPAdic> = multiples
                .split(',')
                .map(|m| {
                    let m: BigUint = m
                        .trim()
                        .parse()
                        .map_err(|_| AppError::Input("bad multiplier".into()))?;
                    TruncatedPAdic::from_uint(p, &m, len).map_err(AppError::from)
                })
                .collect::<Result<_, _>>()?;
            let amb = Ambient::Prufer(p);
            let n = p
                .get()
                .checked_pow(exp)
                .ok_or_else(|| AppError::Input("torsion exponent too large".into()))?;
            let table =
                tseq_core::group::subgroup::torsion_subgroup(&amb, n, None, cfg.torsion_cap)?;
            let kernel = common_kernel_in_table(&family, &table)?;
            Ok(vec![json!({
                "cmd": "char_radical",
                "scope": format!("common kernel of the given characters within the {n}-torsion subgroup; never a claim about the infinite dual"),
                "domain_size": table.len(),
                "kernel_size": kernel.len(),
                "kernel": kernel.iter().map(element_record).collect::<Vec<_>>(),
                "generators": kernel.generators().iter().map(element_record).collect::<Vec<_>>(),
            })])
        }
        (None, Some(orders)) => {
            let rule: OrdersRule = orders.parse()?;
            let ctx = DirectSumContext::new(rule)?;
            let depth =
                depth.ok_or_else(|| AppError::Input("the direct-sum mode needs --depth".into()))?;
            let mut fam: Vec<DsCharacter> = Vec::new();
            if let Some(r) = units {
                let (lo, hi) = parse::parse_range(r)?;
                for j in lo..=hi {
                    fam.push(DsCharacter::unit(ctx.clone(), j)?);
                }
            }
            if let Some(f) = family {
                let more: Vec<DsCharacter> = serde_json::from_str(f)?;
                for chi in more {
                    if chi.context() != &ctx {
                        return Err(AppError::Input(
                            "family characters must share the orders rule".into(),
                        ));
                    }
                    fam.push(chi);
                }
            }
            if fam.is_empty() {
                return Err(AppError::Input("give --units and/or --family".into()));
            }
            let kernel = common_kernel_in_sum(&fam, &ctx, depth, cfg.kernel_cap)?;
            Ok(vec![json!({
                "cmd": "char_radical",
                "scope": format!("common kernel of the given characters within the depth-{depth} truncated sum; never a claim about the infinite dual"),
                "family_size": fam.len(),
                "kernel_size": kernel.len(),
                "kernel": kernel.iter().map(element_record).collect::<Vec<_>>(),
                "generators": kernel.generators().iter().map(element_record).collect::<Vec<_>>(),
            })])
        }
        _ => Err(AppError::Input(
            "pick one mode: --p/--multiples/--torsion-exp, or --orders/--depth/--units".into(),
        )),
    }
}

/// `gallery`: the named constructions with parameter schemas and exact
/// leading terms.
pub fn gallery(kind: Option<&str>, terms: u64) -> Result<Vec<Value>, AppError> {
    let entries: Vec<(&str, &str, SequenceSpec)> = vec![
        ("e", "p: prime", SequenceSpec::E { p: 3 }),
        ("ex12", "p: prime", SequenceSpec::Ex12 { p: 3 }),
        (
            "shifted",
            "p: prime, x: fraction num/p^e, exponents: square|fib|linear:a,b|list:…",
            SequenceSpec::Shifted {
                p: 3,
                x: "1/3".into(),
                exponents: ExponentRule::Square,
            },
        ),
        (
            "thm410_b",
            "p: odd prime, x: nonzero fraction num/p^e",
            SequenceSpec::BlockSum { p: 3, x: "1/3".into() },
        ),
        (
            "thm410_d",
            "p: odd prime, x: nonzero fraction num/p^e",
            SequenceSpec::BlockSumInterleaved { p: 3, x: "1/3".into() },
        ),
        (
            "prop33_a",
            "orders: const:n|pow:b|list:…, x: nonzero coordinate map",
            SequenceSpec::SumUnits {
                orders: OrdersRule::Const(3),
                x: BTreeMap::from([(1, 1)]),
            },
        ),
        (
            "prop33_b",
            "orders: const:n|pow:b|list:…, x: nonzero coordinate map",
            SequenceSpec::SumBlocks {
                orders: OrdersRule::Const(3),
                x: BTreeMap::from([(1, 1)]),
            },
        ),
        (
            "prop33_d",
            "orders: const:n|pow:b|list:…, x: nonzero coordinate map",
            SequenceSpec::SumInterleaved {
                orders: OrdersRule::Const(3),
                x: BTreeMap::from([(1, 1)]),
            },
        ),
    ];
    let mut out = Vec::new();
    for (name, params, example) in entries {
        if let Some(filter) = kind {
            if filter != name {
                continue;
            }
        }
        let handle = make_sequence(&example)?;
        let first: Vec<String> = (1..=terms)
            .map(|k| {
                handle.term(k).map(|t| match t {
                    Element::Prufer(a) => a.to_string(),
                    Element::Sum(a) => a.to_string(),
                })
            })
            .collect::<Result<_, _>>()?;
        out.push(json!({
            "cmd": "gallery",
            "kind": name,
            "params": params,
            "example": to_value(&example),
            "first_terms": first,
        }));
    }
    if out.is_empty() {
        return Err(AppError::Input(format!(
            "unknown gallery kind `{}`",
            kind.unwrap_or("")
        )));
    }
    Ok(out)
}
