//! Parsers for the compact command-line forms: sequence specs, elements,
//! windows, ranges, and coordinate maps.
//!
//! Sequence specs are accepted either as JSON (`{"kind":"e","p":3}`) or in
//! the compact form `kind:key=value,…`, e.g. `ex12:p=3`,
//! `thm410_d:p=3,x=1/3`, `shifted:p=3,x=1/3,exponents=square`,
//! `prop33_d:orders=const:3,x=1:1`.

use std::collections::BTreeMap;

use tseq_core::sequences::{make_sequence, SequenceHandle, SequenceSpec};
use tseq_core::windows::Window;
use tseq_core::{Ambient, Element, OrdersRule, PruferElement};

use crate::records::AppError;

pub fn parse_window(s: &str) -> Result<Window, AppError> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| AppError::Input(format!("window `{s}` must look like 3..6")))?;
    let start = a
        .trim()
        .parse()
        .map_err(|_| AppError::Input(format!("bad window start in `{s}`")))?;
    let end = b
        .trim()
        .parse()
        .map_err(|_| AppError::Input(format!("bad window end in `{s}`")))?;
    Window::new(start, end).map_err(|e| AppError::Input(e.to_string()))
}

pub fn parse_range(s: &str) -> Result<(u64, u64), AppError> {
    let w = parse_window(s)?;
    Ok((w.start, w.end))
}

pub fn parse_checkpoints(s: &str) -> Result<Vec<u64>, AppError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| AppError::Input(format!("bad checkpoint `{t}`")))
        })
        .collect()
}

fn parse_coord_map(s: &str) -> Result<BTreeMap<u64, u64>, AppError> {
    let mut map = BTreeMap::new();
    for pair in s.split(';') {
        let (i, r) = pair
            .split_once(':')
            .ok_or_else(|| AppError::Input(format!("coordinate `{pair}` must look like 2:1")))?;
        let i = i
            .trim()
            .parse()
            .map_err(|_| AppError::Input(format!("bad coordinate index in `{pair}`")))?;
        let r = r
            .trim()
            .parse()
            .map_err(|_| AppError::Input(format!("bad residue in `{pair}`")))?;
        map.insert(i, r);
    }
    Ok(map)
}

/// Compact (`kind:key=value,…`) or JSON sequence spec.
pub fn parse_sequence_spec(s: &str) -> Result<SequenceSpec, AppError> {
    let s = s.trim();
    if s.starts_with('{') {
        return serde_json::from_str(s).map_err(|e| AppError::Input(e.to_string()));
    }
    let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
    let mut args: BTreeMap<&str, &str> = BTreeMap::new();
    if !rest.is_empty() {
        for pair in rest.split(',') {
            // orders values contain ':' so only the first '=' splits
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| AppError::Input(format!("bad argument `{pair}` in `{s}`")))?;
            args.insert(k.trim(), v.trim());
        }
    }
    let need = |key: &str| -> Result<&str, AppError> {
        args.get(key)
            .copied()
            .ok_or_else(|| AppError::Input(format!("sequence `{kind}` needs `{key}=…`")))
    };
    let p = || -> Result<u64, AppError> {
        need("p")?
            .parse()
            .map_err(|_| AppError::Input("p must be an integer".into()))
    };
    let orders = || -> Result<OrdersRule, AppError> {
        need("orders")?
            .parse()
            .map_err(|e: tseq_core::GroupError| AppError::Input(e.to_string()))
    };
    // orders rules contain commas in list form: re-join when splitting broke them
    let spec = match kind {
        "e" => SequenceSpec::E { p: p()? },
        "ex12" => SequenceSpec::Ex12 { p: p()? },
        "shifted" => SequenceSpec::Shifted {
            p: p()?,
            x: need("x")?.to_string(),
            exponents: need("exponents")?
                .parse()
                .map_err(|e: tseq_core::sequences::SequenceError| AppError::Input(e.to_string()))?,
        },
        "thm410_b" => SequenceSpec::BlockSum {
            p: p()?,
            x: need("x")?.to_string(),
        },
        "thm410_d" => SequenceSpec::BlockSumInterleaved {
            p: p()?,
            x: need("x")?.to_string(),
        },
        "prop33_a" => SequenceSpec::SumUnits {
            orders: orders()?,
            x: parse_coord_map(need("x")?)?,
        },
        "prop33_b" => SequenceSpec::SumBlocks {
            orders: orders()?,
            x: parse_coord_map(need("x")?)?,
        },
        "prop33_d" => SequenceSpec::SumInterleaved {
            orders: orders()?,
            x: parse_coord_map(need("x")?)?,
        },
        other => {
            return Err(AppError::Input(format!(
                "unknown sequence kind `{other}` (expected e, ex12, shifted, thm410_b, thm410_d, prop33_a, prop33_b, prop33_d)"
            )))
        }
    };
    Ok(spec)
}

pub fn build_sequence(s: &str) -> Result<(SequenceSpec, SequenceHandle), AppError> {
    let spec = parse_sequence_spec(s)?;
    let handle = make_sequence(&spec)?;
    Ok((spec, handle))
}

/// An element given as JSON, or as a fraction interpreted in the ambient
/// group of the sequence it is tested against.
pub fn parse_element(s: &str, ambient: &Ambient) -> Result<Element, AppError> {
    let s = s.trim();
    if s.starts_with('{') {
        let e: Element = serde_json::from_str(s)?;
        if e.ambient() != *ambient {
            return Err(AppError::Input(
                "element lives in a different ambient group than the sequence".into(),
            ));
        }
        return Ok(e);
    }
    match ambient {
        Ambient::Prufer(p) => Ok(Element::Prufer(PruferElement::from_fraction_str(*p, s)?)),
        Ambient::Sum(_) => Err(AppError::Input(
            "direct-sum elements must be given as JSON".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows_and_ranges() {
        let w = parse_window("3..6").unwrap();
        assert_eq!((w.start, w.end), (3, 6));
        assert!(parse_window("6..3").is_err());
        assert_eq!(parse_range("1..10").unwrap(), (1, 10));
    }

    #[test]
    fn compact_specs() {
        assert_eq!(parse_sequence_spec("e:p=3").unwrap(), SequenceSpec::E { p: 3 });
        let s = parse_sequence_spec("thm410_d:p=3,x=1/3").unwrap();
        assert_eq!(
            s,
            SequenceSpec::BlockSumInterleaved {
                p: 3,
                x: "1/3".into()
            }
        );
        let s = parse_sequence_spec("prop33_d:orders=const:3,x=1:1").unwrap();
        match s {
            SequenceSpec::SumInterleaved { orders, x } => {
                assert_eq!(orders, OrdersRule::Const(3));
                assert_eq!(x, BTreeMap::from([(1, 1)]));
            }
            _ => panic!("wrong kind"),
        }
        assert!(parse_sequence_spec("nope:p=3").is_err());
    }

    #[test]
    fn json_specs_also_work() {
        let s = parse_sequence_spec(r#"{"kind":"ex12","p":5}"#).unwrap();
        assert_eq!(s, SequenceSpec::Ex12 { p: 5 });
    }

    #[test]
    fn elements_in_context() {
        let (_, seq) = build_sequence("e:p=3").unwrap();
        let g = parse_element("1/3", seq.ambient()).unwrap();
        assert_eq!(g.order().to_string(), "3");
        assert!(parse_element("1/6", seq.ambient()).is_err());
    }
}
