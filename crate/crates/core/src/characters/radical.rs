//! Common kernels of finite character families over finite truncations.
//!
//! These are the computable stand-ins for the intersection of kernels of all
//! continuous characters: the result is always the common kernel *of the
//! given family, within the given truncation*, never a claim about the
//! infinite object.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_integer::Integer;

use super::dsum_char::DsCharacter;
use super::{CharError, TruncatedPAdic};
use crate::group::dsum::{DirectSumContext, DirectSumElement};
use crate::group::subgroup::SubgroupTable;
use crate::group::{Ambient, Element};

/// Common kernel of Prüfer characters over an explicit finite subgroup.
pub fn common_kernel_in_table(
    family: &[TruncatedPAdic],
    table: &SubgroupTable,
) -> Result<SubgroupTable, CharError> {
    let cap = table.len() as u64;
    let mut kernel = BTreeSet::new();
    for e in table.iter() {
        let y = match e {
            Element::Prufer(y) => y,
            Element::Sum(_) => return Err(CharError::ContextMismatch),
        };
        let mut in_kernel = true;
        for chi in family {
            if !chi.eval(y)?.is_zero() {
                in_kernel = false;
                break;
            }
        }
        if in_kernel {
            kernel.insert(e.clone());
        }
    }
    SubgroupTable::from_closed_set(table.ambient().clone(), kernel, cap).map_err(CharError::Group)
}

/// Common kernel of direct-sum characters inside the truncation
/// `⊕_{i ≤ depth} C_i`.
///
/// When the truncated group fits under the cap it is enumerated outright.
/// Otherwise the computation needs every family member to be supported on a
/// single coordinate, in which case the kernel splits as a product of
/// per-coordinate solution sets.
pub fn common_kernel_in_sum(
    family: &[DsCharacter],
    ctx: &Arc<DirectSumContext>,
    depth: u64,
    cap: u64,
) -> Result<SubgroupTable, CharError> {
    for chi in family {
        if chi.context() != ctx {
            return Err(CharError::ContextMismatch);
        }
        if chi.support_max().unwrap_or(0) > depth {
            return Err(CharError::InvalidInput(
                "a family character is supported beyond the truncation depth".into(),
            ));
        }
    }
    let ambient = Ambient::Sum(ctx.clone());

    let mut total = 1u128;
    let mut orders = Vec::with_capacity(depth as usize);
    for i in 1..=depth {
        let n = ctx.order_of(i).map_err(CharError::Group)?;
        orders.push(n);
        total = total.saturating_mul(u128::from(n));
    }

    if total <= u128::from(cap) {
        // brute force over the whole truncated group
        let mut kernel = BTreeSet::new();
        let mut counter = vec![0u64; depth as usize];
        'elements: loop {
            let coords: Vec<(u64, u64)> = counter
                .iter()
                .enumerate()
                .filter(|(_, &r)| r != 0)
                .map(|(i, &r)| (i as u64 + 1, r))
                .collect();
            let y = DirectSumElement::new(ctx.clone(), coords).map_err(CharError::Group)?;
            let mut in_kernel = true;
            for chi in family {
                if !chi.eval_is_zero(&y)? {
                    in_kernel = false;
                    break;
                }
            }
            if in_kernel {
                kernel.insert(Element::Sum(y));
            }
            for pos in 0..counter.len() {
                counter[pos] += 1;
                if counter[pos] < orders[pos] {
                    continue 'elements;
                }
                counter[pos] = 0;
            }
            break;
        }
        return SubgroupTable::from_closed_set(ambient, kernel, cap).map_err(CharError::Group);
    }

    if family.iter().any(|chi| !chi.is_single_coordinate()) {
        return Err(CharError::CapExceeded { cap });
    }

    // Per-coordinate solution sets. `c·α ≡ 0 mod n` forces α to be a
    // multiple of n/gcd(c, n); the joint solutions are the multiples of the
    // lcm of those, which divides n.
    let mut solutions: Vec<Vec<u64>> = Vec::with_capacity(depth as usize);
    let mut kernel_size = 1u128;
    for i in 1..=depth {
        let n = orders[(i - 1) as usize];
        let mut step = 1u64;
        for chi in family {
            if let Some(&c) = chi.targets().get(&i) {
                let need = n / n.gcd(&c);
                step = step / step.gcd(&need) * need;
            }
        }
        let count = n / step;
        kernel_size = kernel_size.saturating_mul(u128::from(count));
        if kernel_size > u128::from(cap) {
            return Err(CharError::CapExceeded { cap });
        }
        solutions.push((0..count).map(|t| t * step).collect());
    }

    let mut kernel = BTreeSet::new();
    let mut pick = vec![0usize; depth as usize];
    'product: loop {
        let coords: Vec<(u64, u64)> = pick
            .iter()
            .enumerate()
            .map(|(i, &s)| (i as u64 + 1, solutions[i][s]))
            .filter(|&(_, r)| r != 0)
            .collect();
        let y = DirectSumElement::new(ctx.clone(), coords).map_err(CharError::Group)?;
        kernel.insert(Element::Sum(y));
        for pos in 0..pick.len() {
            pick[pos] += 1;
            if pick[pos] < solutions[pos].len() {
                continue 'product;
            }
            pick[pos] = 0;
        }
        break;
    }
    SubgroupTable::from_closed_set(ambient, kernel, cap).map_err(CharError::Group)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::dsum::OrdersRule;
    use crate::group::prime::Prime;
    use crate::group::prufer::PruferElement;
    use crate::group::subgroup::torsion_subgroup;
    use num_bigint::BigUint;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    #[test]
    fn scaled_embedding_kernel_over_torsion() {
        let amb = Ambient::Prufer(p3());
        let table = torsion_subgroup(&amb, 27, None, 10_000).unwrap();
        let chi3 = TruncatedPAdic::from_uint(p3(), &BigUint::from(3u64), 8).unwrap();
        let k = common_kernel_in_table(&[chi3], &table).unwrap();
        assert_eq!(k.len(), 3);
        assert!(k.contains(&Element::Prufer(PruferElement::unit(p3(), 1))));

        let chi1 = TruncatedPAdic::from_uint(p3(), &BigUint::from(1u64), 8).unwrap();
        let k = common_kernel_in_table(&[chi1], &table).unwrap();
        assert_eq!(k.len(), 1);
    }

    #[test]
    fn brute_force_kernel_in_a_small_sum() {
        // all characters with support ≤ 5 killing g_1: kernel is <g_1>
        let ctx = DirectSumContext::new(OrdersRule::Const(3)).unwrap();
        let mut family = Vec::new();
        for c2 in 0..3u64 {
            for c3 in 0..3u64 {
                for c4 in 0..3u64 {
                    for c5 in 0..3u64 {
                        family.push(
                            DsCharacter::new(
                                ctx.clone(),
                                [(2, c2), (3, c3), (4, c4), (5, c5)],
                            )
                            .unwrap(),
                        );
                    }
                }
            }
        }
        let k = common_kernel_in_sum(&family, &ctx, 5, 100_000).unwrap();
        assert_eq!(k.len(), 3);
        let g1 = DirectSumElement::generator(ctx, 1).unwrap();
        assert!(k.contains(&Element::Sum(g1)));
    }

    #[test]
    fn product_path_for_large_truncations() {
        // orders 3^i at depth 40 cannot be enumerated; unit characters on
        // coordinates 2..=40 cut everything above coordinate 1
        let ctx = DirectSumContext::new(OrdersRule::Powers(3)).unwrap();
        let family: Vec<DsCharacter> = (2..=40)
            .map(|j| DsCharacter::unit(ctx.clone(), j).unwrap())
            .collect();
        let k = common_kernel_in_sum(&family, &ctx, 40, 1000).unwrap();
        assert_eq!(k.len(), 3);
        let g1 = DirectSumElement::generator(ctx.clone(), 1).unwrap();
        assert!(k.contains(&Element::Sum(g1)));

        // multi-coordinate characters cannot use the product path
        let multi = DsCharacter::new(ctx.clone(), [(2, 1), (3, 1)]).unwrap();
        assert!(matches!(
            common_kernel_in_sum(&[multi], &ctx, 40, 1000),
            Err(CharError::CapExceeded { .. })
        ));
    }
}
