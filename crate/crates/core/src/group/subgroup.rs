//! Finite subgroups materialized as closed element tables.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;

use super::dsum::{DirectSumContext, DirectSumElement};
use super::prufer::PruferElement;
use super::{Ambient, Element, GroupError};

/// A finite subgroup: the full element set plus the generators it was built
/// from. Closed under addition and negation, and contains zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupTable {
    ambient: Ambient,
    generators: Vec<Element>,
    elements: BTreeSet<Element>,
}

impl SubgroupTable {
    /// Close `generators` under the group operations, failing once the table
    /// grows past `cap`.
    pub fn generate(
        ambient: Ambient,
        generators: Vec<Element>,
        cap: u64,
    ) -> Result<Self, GroupError> {
        for g in &generators {
            if g.ambient() != ambient {
                return Err(GroupError::ContextMismatch);
            }
        }
        let zero = ambient.zero();
        let mut elements = BTreeSet::from([zero.clone()]);
        let mut queue = vec![zero];
        while let Some(x) = queue.pop() {
            for g in &generators {
                let y = x.add(g)?;
                if elements.insert(y.clone()) {
                    if elements.len() as u64 > cap {
                        return Err(GroupError::CapExceeded { cap });
                    }
                    queue.push(y);
                }
            }
        }
        Ok(SubgroupTable {
            ambient,
            generators,
            elements,
        })
    }

    /// Wrap an already-closed element set, recomputing a small generating set
    /// greedily. The caller promises closure; a cheap spot check guards zero.
    pub fn from_closed_set(
        ambient: Ambient,
        elements: BTreeSet<Element>,
        cap: u64,
    ) -> Result<Self, GroupError> {
        if !elements.contains(&ambient.zero()) {
            return Err(GroupError::InvalidElement(
                "a subgroup must contain zero".into(),
            ));
        }
        let mut generators: Vec<Element> = Vec::new();
        let mut closure = SubgroupTable::generate(ambient.clone(), vec![], cap)?;
        for e in &elements {
            if !closure.contains(e) {
                generators.push(e.clone());
                closure = SubgroupTable::generate(ambient.clone(), generators.clone(), cap)?;
            }
        }
        if closure.elements != elements {
            return Err(GroupError::InvalidElement(
                "element set is not closed under the group operations".into(),
            ));
        }
        Ok(closure)
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false // always contains zero
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.elements.contains(e)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Element> {
        self.elements.iter()
    }
}

/// Least `t ≥ 1` with `t·a ∈ H`. Scans the divisors of `o(a)` in order.
pub fn order_mod_subgroup(a: &Element, h: &SubgroupTable) -> Result<BigUint, GroupError> {
    if a.ambient() != *h.ambient() {
        return Err(GroupError::ContextMismatch);
    }
    for t in a.order_factored().divisors() {
        let m = BigInt::from(t.clone());
        if h.contains(&a.scalar_mul(&m)) {
            return Ok(t);
        }
    }
    unreachable!("o(a)*a = 0 lies in every subgroup")
}

/// The n-torsion subgroup `A[n] = {a : n·a = 0}` of the ambient group.
///
/// For a direct sum the answer is taken inside the truncation `⊕_{i≤depth}`,
/// which must be supplied so the set is finite.
pub fn torsion_subgroup(
    ambient: &Ambient,
    n: u64,
    ds_depth: Option<u64>,
    cap: u64,
) -> Result<SubgroupTable, GroupError> {
    if n == 0 {
        return Err(GroupError::InvalidElement("n must be positive".into()));
    }
    match ambient {
        Ambient::Prufer(p) => {
            // A[n] is cyclic of order p^v, v the multiplicity of p in n.
            let mut v = 0u32;
            let mut m = n;
            while m % p.get() == 0 {
                m /= p.get();
                v += 1;
            }
            if BigUint::from(p.get()).pow(v) > BigUint::from(cap) {
                return Err(GroupError::CapExceeded { cap });
            }
            let gen = Element::Prufer(PruferElement::unit(*p, v));
            SubgroupTable::generate(ambient.clone(), vec![gen], cap)
        }
        Ambient::Sum(ctx) => {
            let depth = ds_depth.ok_or_else(|| {
                GroupError::InvalidElement("direct-sum torsion needs a truncation depth".into())
            })?;
            let mut gens = Vec::new();
            let mut size = 1u128;
            for i in 1..=depth {
                let ni = ctx.order_of(i)?;
                let g = ni.gcd(&n);
                size = size.saturating_mul(u128::from(g));
                if size > u128::from(cap) {
                    return Err(GroupError::CapExceeded { cap });
                }
                if g > 1 {
                    // the unique subgroup of C_i killed by n is generated by (n_i/g)·g_i
                    gens.push(Element::Sum(DirectSumElement::new(
                        ctx.clone(),
                        [(i, ni / g)],
                    )?));
                }
            }
            SubgroupTable::generate(ambient.clone(), gens, cap)
        }
    }
}

/// Convenience: the truncated full group `⊕_{i≤depth} C_i` as a table.
pub fn truncated_sum(
    ctx: &Arc<DirectSumContext>,
    depth: u64,
    cap: u64,
) -> Result<SubgroupTable, GroupError> {
    let mut gens = Vec::new();
    let mut size = 1u128;
    for i in 1..=depth {
        size = size.saturating_mul(u128::from(ctx.order_of(i)?));
        if size > u128::from(cap) {
            return Err(GroupError::CapExceeded { cap });
        }
        gens.push(Element::Sum(DirectSumElement::generator(ctx.clone(), i)?));
    }
    SubgroupTable::generate(Ambient::Sum(ctx.clone()), gens, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::dsum::OrdersRule;
    use crate::group::prime::Prime;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    fn unit(n: u32) -> Element {
        Element::Prufer(PruferElement::unit(p3(), n))
    }

    #[test]
    fn generated_subgroup_sizes() {
        let amb = Ambient::Prufer(p3());
        let h = SubgroupTable::generate(amb.clone(), vec![unit(2)], 1000).unwrap();
        assert_eq!(h.len(), 9);
        let h2 = SubgroupTable::generate(amb.clone(), vec![unit(1), unit(2)], 1000).unwrap();
        assert_eq!(h2.len(), 9); // 1/3 already lies in <1/9>

        let ctx = DirectSumContext::new(OrdersRule::Listed(vec![2, 3])).unwrap();
        let g = Element::Sum(DirectSumElement::new(ctx.clone(), [(1, 1), (2, 1)]).unwrap());
        let h3 = SubgroupTable::generate(Ambient::Sum(ctx), vec![g], 1000).unwrap();
        assert_eq!(h3.len(), 6);
    }

    #[test]
    fn cap_is_enforced() {
        let amb = Ambient::Prufer(p3());
        let err = SubgroupTable::generate(amb, vec![unit(5)], 10).unwrap_err();
        assert_eq!(err, GroupError::CapExceeded { cap: 10 });
    }

    #[test]
    fn order_mod_examples() {
        let amb = Ambient::Prufer(p3());
        let h = SubgroupTable::generate(amb, vec![unit(2)], 1000).unwrap();
        assert_eq!(order_mod_subgroup(&unit(3), &h).unwrap(), 3u64.into());
        assert_eq!(order_mod_subgroup(&unit(2), &h).unwrap(), 1u64.into());

        let ctx = DirectSumContext::new(OrdersRule::Listed(vec![4, 2])).unwrap();
        let amb = Ambient::Sum(ctx.clone());
        let h = SubgroupTable::generate(
            amb,
            vec![Element::Sum(DirectSumElement::generator(ctx.clone(), 2).unwrap())],
            1000,
        )
        .unwrap();
        let a = Element::Sum(DirectSumElement::generator(ctx, 1).unwrap());
        assert_eq!(order_mod_subgroup(&a, &h).unwrap(), 4u64.into());
    }

    #[test]
    fn torsion_examples() {
        let amb = Ambient::Prufer(p3());
        assert_eq!(torsion_subgroup(&amb, 9, None, 1000).unwrap().len(), 9);
        assert_eq!(torsion_subgroup(&amb, 2, None, 1000).unwrap().len(), 1);

        let ctx = DirectSumContext::new(OrdersRule::Listed(vec![2, 3])).unwrap();
        let amb = Ambient::Sum(ctx.clone());
        let t = torsion_subgroup(&amb, 2, Some(2), 1000).unwrap();
        assert_eq!(t.len(), 2);
        assert!(t.contains(&Element::Sum(
            DirectSumElement::generator(ctx, 1).unwrap()
        )));
    }

    #[test]
    fn from_closed_set_recovers_generators() {
        let amb = Ambient::Prufer(p3());
        let h = SubgroupTable::generate(amb.clone(), vec![unit(1)], 100).unwrap();
        let set: BTreeSet<Element> = h.iter().cloned().collect();
        let rebuilt = SubgroupTable::from_closed_set(amb, set, 100).unwrap();
        assert_eq!(rebuilt.len(), 3);
        assert_eq!(rebuilt.generators().len(), 1);
    }
}
