//! Exact-arithmetic toolkit for convergence experiments in torsion abelian
//! groups: Prüfer groups `Z(p^∞)`, direct sums of finite cyclic groups,
//! windowed signed-combination sets, and truncated p-adic characters.
//!
//! Everything is computed over arbitrary-precision integers and rationals.
//! Limit statements are reported as finite-horizon verdicts with checkable
//! certificates; no operation ever claims a property of the infinite object.

pub mod canonical;
pub mod characters;
pub mod factored;
pub mod group;
pub mod sequences;
pub mod verdict;
pub mod windows;

pub use factored::Factored;
pub use group::{
    circle::CircleRational,
    dsum::{DirectSumContext, DirectSumElement, OrdersRule},
    prime::Prime,
    prufer::PruferElement,
    subgroup::SubgroupTable,
    Ambient, Element, GroupError,
};
pub use verdict::Verdict;
