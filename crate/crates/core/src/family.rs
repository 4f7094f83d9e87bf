//! The canonical generating family of a windowed subring.
//!
//! The ambient object is the subring `D` of the full bi-infinite product
//! generated by `b_bar`, every `a_bar(i)`, and all square spikes. Restricting
//! to a window `w` is a surjective ring map, and the images of the ambient
//! generators reduce to the finite family produced by [`d_generators`]:
//! `a_bar(i)` telescopes through the `e(i)`, and only difference generators
//! whose support meets the window survive. That surjectivity is what makes
//! windowed computations exact: every homomorphism of the truncation pulls
//! back to the ambient ring, with identical values on restricted vectors.

use crate::ecvec::{FiniteVec, Window};
use crate::expr::{Expr, GenId};

/// Indices `i` for which `e(i)` restricts to something nonzero on `w`:
/// the support of `e(i)` is `i-2..=i+1`.
pub fn e_index_range(w: Window) -> impl Iterator<Item = i64> + Clone {
    (w.lo() - 1)..=(w.hi() + 2)
}

/// The family names in canonical order: `b_bar`, `a_bar(0)`, the surviving
/// `e(i)`, then the square spikes block by block.
pub fn family_ids(w: Window) -> Vec<GenId> {
    let mut ids = vec![GenId::BBar, GenId::ABar];
    ids.extend(e_index_range(w).map(GenId::E));
    ids.extend(w.blocks().map(GenId::SqA));
    ids.extend(w.blocks().map(GenId::SqB));
    ids
}

/// The generating family of the truncated ring on `w`, materialized.
pub fn d_generators(w: Window) -> Vec<(GenId, FiniteVec)> {
    family_ids(w)
        .into_iter()
        .map(|g| (g, g.materialize().restrict(w)))
        .collect()
}

/// Whether a family member belongs to the multiplicative part of the family
/// (everything except the square spikes, which annihilate all products).
pub fn is_multiplicative_gen(g: GenId) -> bool {
    matches!(g, GenId::BBar | GenId::ABar | GenId::E(_))
}

/// Symbolic closed form rebuilding the punctured ghost at `m` from family
/// members, valid as an identity of whole infinite vectors:
///
/// ```text
/// punctured(m) = b_bar * a_bar(m) + e(m-1)e(m+1) + e(m)e(m+2) + b^2@m
/// ```
///
/// with `a_bar(m)` spelled out through its telescope from `a_bar(0)`.
pub fn punctured_ghost_expr(m: i64) -> Expr {
    let a_bar_m = if m >= 0 {
        Expr::sum(
            std::iter::once(Expr::gen(GenId::ABar))
                .chain((1..=m).map(|i| Expr::gen(GenId::E(i)))),
        )
    } else {
        Expr::sum(
            std::iter::once(Expr::gen(GenId::ABar))
                .chain((m + 1..=0).map(|i| Expr::gen(GenId::E(i)).neg())),
        )
    };
    Expr::gen(GenId::BBar)
        .mul(a_bar_m)
        .add(Expr::gen(GenId::E(m - 1)).mul(Expr::gen(GenId::E(m + 1))))
        .add(Expr::gen(GenId::E(m)).mul(Expr::gen(GenId::E(m + 2))))
        .add(Expr::gen(GenId::SqB(m)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ecvec::ECVector;
    use crate::ring::{A, B};

    #[test]
    fn family_shape_on_three_blocks() {
        let w = Window::new(-1, 1);
        let gens = d_generators(w);
        // b_bar, a_bar, e(-2..=3), six square spikes
        assert_eq!(gens.len(), 2 + 6 + 3 + 3);
        assert!(gens.iter().all(|(_, v)| !v.is_zero()));
        assert_eq!(gens[0].0, GenId::BBar);
        assert_eq!(gens[0].1, ECVector::b_bar().restrict(w));
    }

    #[test]
    fn boundary_differences_truncate_to_spikes() {
        let w = Window::new(0, 2);
        let gens = d_generators(w);
        let leftmost = gens.iter().find(|(g, _)| *g == GenId::E(-1)).unwrap();
        assert_eq!(leftmost.1, ECVector::spike(0, -A).restrict(w));
        let rightmost = gens.iter().find(|(g, _)| *g == GenId::E(4)).unwrap();
        assert_eq!(rightmost.1, ECVector::spike(2, A).restrict(w));
        let _ = B;
    }

    #[test]
    fn punctured_closed_form_is_global() {
        for m in -7..=7 {
            assert_eq!(
                punctured_ghost_expr(m).eval_ec(),
                ECVector::punctured_ghost(m),
                "closed form failed at {m}"
            );
        }
    }
}
