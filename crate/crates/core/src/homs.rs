//! Homomorphisms from a windowed subring into `Z8`, enumerated two ways.
//!
//! Every additive map from the truncated ring into `Z8` doubles a `Z4`-linear
//! functional: four-torsion forces even images, and `Z4` is self-injective,
//! so the functional extends to the ambient `Z4`-module through the block
//! embedding `(alpha, beta, gamma) -> (alpha, beta, 2 gamma)`. A hom is
//! therefore a vector `u` of `Z4` coefficients, and multiplicativity only
//! has to be checked on pairs of first-layer generators: square-span values
//! are 2-torsion, so their images lie in `{0,4}` and every cross term in the
//! product expansion dies mod 8.
//!
//! Two independent enumeration strategies exploit that shape:
//!
//! * a backtracking search assigning generator images directly, pruned by
//!   the additive relations the span solver extracted, with hom axioms
//!   re-verified on the closed element table (or on sampled decompositions
//!   where the table would be large);
//! * a sweep over all functionals `u`, filtered by multiplicativity on the
//!   product rows, deduplicated by generator-image signature.
//!
//! [`enumerate_homs`] runs both and insists on identical signature sets —
//! a disagreement means one of the algorithms is wrong, and panics.
//!
//! Classification follows the image pattern on the difference generators:
//! if every `e(i)` maps into `{0,4}` the image multiplies to zero; otherwise
//! the first index with an image in `{2,6}` pins the *coordinate* at which
//! punctured-vector evaluations are allowed to deviate.

use crate::closure::{close, zip_packed, ClosureError, WinClosure};
use crate::ecvec::{embed_z4, ECVector, FiniteVec, Window};
use crate::expr::GenId;
use crate::family::{e_index_range, family_ids};
use crate::ring;
use crate::seed::derive_seed;
use crate::span::{RowDesc, SpanSolver};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;

/// Image shape of a hom, read off the difference generators.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
#[serde(tag = "kind")]
pub enum Classification {
    /// Every `e(i)` image lies in `{0,4}`: all image products vanish.
    ZeroringImage,
    /// Some `e(i)` maps to `{2,6}`; the first such index determines the one
    /// coordinate where punctured evaluations may disagree.
    Critical { first_e_index: i64, coordinate: i64 },
}

/// A ring homomorphism from the subring on `window` into `Z8`, stored as the
/// doubled `Z4` functional `u` together with its generator-image signature.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Hom {
    window: Window,
    u: Vec<u8>,
    gen_images: Vec<u8>,
    class: Classification,
}

impl Hom {
    fn from_functional(window: Window, u: Vec<u8>, gen_images: Vec<u8>) -> Hom {
        let mut h = Hom {
            window,
            u,
            gen_images,
            class: Classification::ZeroringImage,
        };
        h.class = classify(window, |v| h.eval(v));
        h
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// Images of the family generators, in family order.
    pub fn gen_images(&self) -> &[u8] {
        &self.gen_images
    }

    pub fn class(&self) -> Classification {
        self.class
    }

    /// Apply the hom to a vector on its window.
    pub fn eval(&self, v: &FiniteVec) -> u8 {
        assert_eq!(v.window(), self.window, "window mismatch");
        let mut acc = 0u32;
        for (k, &x) in v.values().iter().enumerate() {
            for (c, &ev) in embed_z4(x).iter().enumerate() {
                acc += self.u[3 * k + c] as u32 * ev as u32;
            }
        }
        (2 * (acc % 4) % 8) as u8
    }

    /// Apply the hom to the restriction of a whole vector.
    pub fn eval_ec(&self, v: &ECVector) -> u8 {
        self.eval(&v.restrict(self.window))
    }

    /// The hom's value on the punctured all-`ab` vector with hole at `i`.
    pub fn punctured_value(&self, i: i64) -> u8 {
        self.eval_ec(&ECVector::punctured_ghost(i))
    }

    /// Evaluate through a completely different route: decompose the target
    /// over the solver's rows and push images through the decomposition.
    /// `None` when the target is outside the subring.
    pub fn eval_via_span(&self, span: &SpanSolver, target: &FiniteVec) -> Option<u8> {
        assert_eq!(span.window(), self.window);
        let coeffs = span.decompose(target)?;
        let mut acc = 0u32;
        for (c, row) in coeffs.iter().zip(span.rows()) {
            acc += *c as u32 * self.row_image(row.desc) as u32;
        }
        Some((acc % 8) as u8)
    }

    fn row_image(&self, desc: RowDesc) -> u8 {
        let ids = family_ids(self.window);
        let img_of = |g: GenId| {
            let k = ids.iter().position(|&x| x == g).expect("family member");
            self.gen_images[k]
        };
        match desc {
            RowDesc::Gen(g) => img_of(g),
            RowDesc::Product(g, h) => img_of(g) * img_of(h) % 8,
        }
    }
}

/// Classify by the images of the difference generators meeting the window.
pub fn classify(window: Window, f: impl Fn(&FiniteVec) -> u8) -> Classification {
    for i in e_index_range(window) {
        let img = f(&ECVector::e(i).restrict(window));
        if img == 2 || img == 6 {
            return Classification::Critical {
                first_e_index: i,
                coordinate: i + 1,
            };
        }
    }
    Classification::ZeroringImage
}

/// Projection onto one ambient coordinate of one block — a hom on any
/// window, with no enumeration required. Components are indexed 0..3.
pub fn projection_hom(window: Window, block: i64, component: usize) -> Hom {
    assert!(window.contains(block), "block outside window");
    // The ambient triple of a block element is
    // (2 beta, 2 alpha + 2 beta + 4 gamma, 2 alpha), so each projection is
    // the doubling of an explicit functional on (alpha, beta, 2 gamma).
    let u_block: [u8; 3] = match component {
        0 => [0, 1, 0],
        1 => [1, 1, 1],
        2 => [1, 0, 0],
        _ => panic!("component out of range"),
    };
    let mut u = vec![0u8; 3 * window.len()];
    u[3 * window.offset(block)..3 * window.offset(block) + 3].copy_from_slice(&u_block);
    let gens = crate::family::d_generators(window);
    let imgs: Vec<u8> = {
        let probe = Hom {
            window,
            u: u.clone(),
            gen_images: vec![],
            class: Classification::ZeroringImage,
        };
        gens.iter().map(|(_, v)| probe.eval(v)).collect()
    };
    Hom::from_functional(window, u, imgs)
}

/// The everywhere-zero hom.
pub fn zero_hom(window: Window) -> Hom {
    Hom::from_functional(
        window,
        vec![0; 3 * window.len()],
        vec![0; family_ids(window).len()],
    )
}

/// Enumerate all homs from the windowed subring into `Z8`, by both
/// strategies, cross-asserted. `budget` bounds the subring size that will
/// be touched; windows beyond three blocks are out of the enumerator's
/// reach even when the budget would allow their closure.
pub fn enumerate_homs(window: Window, budget: usize) -> Result<Vec<Hom>, ClosureError> {
    let span = SpanSolver::build(window);
    if span.span_size() > budget as u128 {
        return Err(ClosureError::BudgetExceeded {
            budget,
            found: span.span_size().min(usize::MAX as u128) as usize,
            processed: 0,
        });
    }
    if window.len() > 3 {
        return Err(ClosureError::WindowTooWide {
            blocks: window.len(),
        });
    }

    let search_sigs = enumerate_by_search(&span, budget)?;
    let homs = enumerate_by_functionals(&span);
    let sweep_sigs: Vec<&[u8]> = homs.iter().map(|h| h.gen_images()).collect();
    assert_eq!(
        search_sigs.iter().map(Vec::as_slice).collect::<Vec<_>>(),
        sweep_sigs,
        "the two enumeration strategies disagree on {window}"
    );
    Ok(homs)
}

/// Sweep every `Z4` functional on the embedded window, keep the ones that
/// are multiplicative across the product rows, dedup by signature.
fn enumerate_by_functionals(span: &SpanSolver) -> Vec<Hom> {
    let window = span.window();
    let n3 = 3 * window.len();
    let ids = family_ids(window);
    let gen_pos: BTreeMap<GenId, usize> =
        ids.iter().copied().enumerate().map(|(i, g)| (g, i)).collect();

    let row_embeds: Vec<Vec<u8>> = span
        .rows()
        .iter()
        .map(|r| r.vec.values().iter().flat_map(|&x| embed_z4(x)).collect())
        .collect();
    let mut products = Vec::new();
    for (ri, row) in span.rows().iter().enumerate() {
        if let RowDesc::Product(g, h) = row.desc {
            products.push((ri, gen_pos[&g], gen_pos[&h]));
        }
    }

    let dot = |u: &[u8], e: &[u8]| -> u8 {
        let s: u32 = u.iter().zip(e).map(|(&a, &b)| a as u32 * b as u32).sum();
        (2 * (s % 4) % 8) as u8
    };

    let mut by_sig: BTreeMap<Vec<u8>, Hom> = BTreeMap::new();
    let mut u = vec![0u8; n3];
    for code in 0..4u64.pow(n3 as u32) {
        let mut c = code;
        for d in u.iter_mut() {
            *d = (c & 3) as u8;
            c >>= 2;
        }
        let imgs: Vec<u8> = (0..ids.len()).map(|i| dot(&u, &row_embeds[i])).collect();
        let multiplicative = products
            .iter()
            .all(|&(ri, gi, gj)| dot(&u, &row_embeds[ri]) == imgs[gi] * imgs[gj] % 8);
        if multiplicative {
            by_sig
                .entry(imgs.clone())
                .or_insert_with(|| Hom::from_functional(window, u.clone(), imgs));
        }
    }
    by_sig.into_values().collect()
}

/// Backtracking over generator images with relation-based pruning; returns
/// the signatures found, sorted. Each leaf is re-verified as an actual hom:
/// on closable windows by exhaustive axiom checks over the element table,
/// on three-block windows by seeded decomposition consistency checks.
fn enumerate_by_search(span: &SpanSolver, budget: usize) -> Result<Vec<Vec<u8>>, ClosureError> {
    let window = span.window();
    let ids = family_ids(window);
    let gen_count = ids.len();
    for (i, row) in span.rows()[..gen_count].iter().enumerate() {
        assert_eq!(row.desc, RowDesc::Gen(ids[i]), "row order out of sync");
    }

    // Difference generators first: the relation lattice couples them most
    // tightly, so violations surface near the root of the search tree.
    let mut order: Vec<usize> = (0..gen_count).collect();
    order.sort_by_key(|&i| match ids[i] {
        GenId::E(k) => (0, k),
        GenId::ABar => (1, 0),
        GenId::BBar => (2, 0),
        GenId::SqA(j) => (3, j),
        GenId::SqB(j) => (4, j),
    });
    let mut depth_of_gen = vec![0usize; gen_count];
    for (d, &i) in order.iter().enumerate() {
        depth_of_gen[i] = d;
    }

    let gen_pos: BTreeMap<GenId, usize> =
        ids.iter().copied().enumerate().map(|(i, g)| (g, i)).collect();
    let row_depth: Vec<usize> = span
        .rows()
        .iter()
        .map(|r| match r.desc {
            RowDesc::Gen(g) => depth_of_gen[gen_pos[&g]],
            RowDesc::Product(g, h) => depth_of_gen[gen_pos[&g]].max(depth_of_gen[gen_pos[&h]]),
        })
        .collect();

    // Product rows become determined the moment their later factor gets an
    // image; relations fire as soon as their last row is determined.
    let mut products_at: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); gen_count];
    for (ri, row) in span.rows().iter().enumerate() {
        if let RowDesc::Product(g, h) = row.desc {
            products_at[row_depth[ri]].push((ri, gen_pos[&g], gen_pos[&h]));
        }
    }
    let mut relations_at: Vec<Vec<&[u8]>> = vec![Vec::new(); gen_count];
    for rel in span.relations() {
        let d = rel
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c % 4 != 0)
            .map(|(ri, _)| row_depth[ri])
            .max()
            .unwrap_or(0);
        relations_at[d].push(rel);
    }

    let verifier: Box<dyn LeafVerifier> = if window.len() <= 2 {
        Box::new(TableVerifier::build(window, budget)?)
    } else {
        Box::new(SampleVerifier {
            span,
            rng: std::cell::RefCell::new(ChaCha8Rng::seed_from_u64(derive_seed(
                0,
                "hom-search-verify",
            ))),
        })
    };

    let mut row_images = vec![0u8; span.rows().len()];
    let mut sigs = Vec::new();
    search(
        0,
        &order,
        &ids,
        &products_at,
        &relations_at,
        &mut row_images,
        &*verifier,
        &mut sigs,
    );
    sigs.sort();
    sigs.dedup_by(|a, b| {
        assert_ne!(a, b, "duplicate signature escaped the search");
        false
    });
    Ok(sigs)
}

#[allow(clippy::too_many_arguments)] // recursion state, not an API
fn search(
    depth: usize,
    order: &[usize],
    ids: &[GenId],
    products_at: &[Vec<(usize, usize, usize)>],
    relations_at: &[Vec<&[u8]>],
    row_images: &mut Vec<u8>,
    verifier: &dyn LeafVerifier,
    sigs: &mut Vec<Vec<u8>>,
) {
    if depth == order.len() {
        let sig: Vec<u8> = row_images[..ids.len()].to_vec();
        if verifier.confirm(&sig) {
            sigs.push(sig);
        } else {
            panic!("search produced an assignment that fails hom verification");
        }
        return;
    }
    let gen = order[depth];
    let domain: &[u8] = if matches!(ids[gen], GenId::SqA(_) | GenId::SqB(_)) {
        &[0, 4]
    } else {
        &[0, 2, 4, 6]
    };
    'next: for &img in domain {
        row_images[gen] = img;
        for &(ri, gi, gj) in &products_at[depth] {
            row_images[ri] = row_images[gi] * row_images[gj] % 8;
        }
        for rel in &relations_at[depth] {
            let s: u32 = rel
                .iter()
                .zip(row_images.iter())
                .map(|(&c, &im)| c as u32 * im as u32)
                .sum();
            if !s.is_multiple_of(8) {
                continue 'next;
            }
        }
        search(
            depth + 1,
            order,
            ids,
            products_at,
            relations_at,
            row_images,
            verifier,
            sigs,
        );
    }
}

trait LeafVerifier {
    fn confirm(&self, sig: &[u8]) -> bool;
}

/// Exhaustive verification against the closed element table: replay the
/// provenance to image every element, then check both axioms on all pairs.
struct TableVerifier {
    closure: WinClosure,
    add_id: Vec<u32>,
    mul_id: Vec<u32>,
}

impl TableVerifier {
    fn build(window: Window, budget: usize) -> Result<TableVerifier, ClosureError> {
        let closure = close(window, budget)?;
        let n = closure.len();
        let packed = closure.packed_elements().to_vec();
        let blocks = window.len();
        let mut add_id = vec![0u32; n * n];
        let mut mul_id = vec![0u32; n * n];
        for i in 0..n {
            for j in i..n {
                let s = zip_packed(packed[i], packed[j], blocks, &ring::ADD_TABLE);
                let p = zip_packed(packed[i], packed[j], blocks, &ring::MUL_TABLE);
                let sid = closure.find_packed(s).expect("closure not closed under +");
                let pid = closure.find_packed(p).expect("closure not closed under *");
                add_id[i * n + j] = sid;
                add_id[j * n + i] = sid;
                mul_id[i * n + j] = pid;
                mul_id[j * n + i] = pid;
            }
        }
        Ok(TableVerifier { closure, add_id, mul_id })
    }
}

impl LeafVerifier for TableVerifier {
    fn confirm(&self, sig: &[u8]) -> bool {
        let images = self.closure.replay_images(sig);
        let n = images.len();
        for i in 0..n {
            for j in i..n {
                if images[self.add_id[i * n + j] as usize] != (images[i] + images[j]) % 8 {
                    return false;
                }
                if images[self.mul_id[i * n + j] as usize] != images[i] * images[j] % 8 {
                    return false;
                }
            }
        }
        true
    }
}

/// Seeded spot checks on windows whose element table is too large: random
/// row combinations are imaged through their own coefficients and through a
/// fresh solver decomposition of the sum and product vectors; all four
/// routes must agree.
struct SampleVerifier<'a> {
    span: &'a SpanSolver,
    rng: std::cell::RefCell<ChaCha8Rng>,
}

impl LeafVerifier for SampleVerifier<'_> {
    fn confirm(&self, sig: &[u8]) -> bool {
        let ids = family_ids(self.span.window());
        let img_of = |g: GenId| sig[ids.iter().position(|&x| x == g).unwrap()];
        let row_image = |desc: RowDesc| match desc {
            RowDesc::Gen(g) => img_of(g),
            RowDesc::Product(g, h) => img_of(g) * img_of(h) % 8,
        };
        let image_by_decomposition = |v: &FiniteVec| -> Option<u8> {
            let coeffs = self.span.decompose(v)?;
            let s: u32 = coeffs
                .iter()
                .zip(self.span.rows())
                .map(|(&c, row)| c as u32 * row_image(row.desc) as u32)
                .sum();
            Some((s % 8) as u8)
        };

        let rows = self.span.rows();
        let mut rng = self.rng.borrow_mut();
        for _ in 0..12 {
            let pick = |rng: &mut ChaCha8Rng| {
                let mut v = FiniteVec::zero(self.span.window());
                let mut img = 0u32;
                for _ in 0..4 {
                    let ri = rng.gen_range(0..rows.len());
                    let c = rng.gen_range(1..4u8);
                    v = &v + &rows[ri].vec.scale(c as i64);
                    img += c as u32 * row_image(rows[ri].desc) as u32;
                }
                (v, (img % 8) as u8)
            };
            let (x, fx) = pick(&mut rng);
            let (y, fy) = pick(&mut rng);
            let sum_ok = image_by_decomposition(&(&x + &y)) == Some((fx + fy) % 8);
            let prod_ok = image_by_decomposition(&(&x * &y)) == Some(fx * fy % 8);
            if !sum_ok || !prod_ok {
                return false;
            }
        }
        true
    }
}

/// Count breakdown of an enumerated hom list.
#[derive(Clone, Debug, Serialize)]
pub struct HomSummary {
    pub window: Window,
    pub count: usize,
    pub zeroring: usize,
    pub critical: usize,
    /// Critical homs per critical coordinate.
    pub by_coordinate: BTreeMap<i64, usize>,
}

pub fn summarize(window: Window, homs: &[Hom]) -> HomSummary {
    let mut summary = HomSummary {
        window,
        count: homs.len(),
        zeroring: 0,
        critical: 0,
        by_coordinate: BTreeMap::new(),
    };
    for h in homs {
        match h.class() {
            Classification::ZeroringImage => summary.zeroring += 1,
            Classification::Critical { coordinate, .. } => {
                summary.critical += 1;
                *summary.by_coordinate.entry(coordinate).or_insert(0) += 1;
            }
        }
    }
    summary
}

/// Closed-form count of homs on `k` blocks: `k * 12 * 4^(k-1)` critical
/// plus `4^k` zeroring. Regression oracle for the enumerators.
pub fn expected_hom_count(blocks: u32) -> usize {
    let k = blocks as usize;
    k * 12 * 4usize.pow(blocks - 1) + 4usize.pow(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn homs_on(lo: i64, hi: i64) -> Vec<Hom> {
        enumerate_homs(Window::new(lo, hi), 2_000_000).unwrap()
    }

    #[test]
    fn single_block_count_and_split() {
        let homs = homs_on(0, 0);
        assert_eq!(homs.len(), 16);
        assert_eq!(homs.len(), expected_hom_count(1));
        let s = summarize(Window::new(0, 0), &homs);
        assert_eq!((s.zeroring, s.critical), (4, 12));
    }

    #[test]
    fn two_block_count_and_split() {
        let homs = homs_on(0, 1);
        assert_eq!(homs.len(), 112);
        assert_eq!(homs.len(), expected_hom_count(2));
        let s = summarize(Window::new(0, 1), &homs);
        assert_eq!((s.zeroring, s.critical), (16, 96));
    }

    #[test]
    fn three_block_count_and_split() {
        let homs = homs_on(-1, 1);
        assert_eq!(homs.len(), 640);
        assert_eq!(homs.len(), expected_hom_count(3));
        let s = summarize(Window::new(-1, 1), &homs);
        assert_eq!((s.zeroring, s.critical), (64, 576));
    }

    #[test]
    fn all_images_even_and_zeroring_images_small() {
        for h in homs_on(0, 1) {
            assert!(h.gen_images().iter().all(|&x| x % 2 == 0));
            if h.class() == Classification::ZeroringImage {
                // Image products all vanish exactly when every generator
                // image is 2-torsion.
                assert!(h.gen_images().iter().all(|&x| x == 0 || x == 4), "{h:?}");
            }
        }
    }

    #[test]
    fn projections_are_enumerated_and_classified() {
        let w = Window::new(-1, 1);
        let homs = homs_on(-1, 1);
        for block in w.blocks() {
            for component in 0..3 {
                let p = projection_hom(w, block, component);
                assert!(
                    homs.iter().any(|h| h.gen_images() == p.gen_images()),
                    "projection ({block},{component}) missing"
                );
                match (component, p.class()) {
                    (0, Classification::Critical { first_e_index, coordinate }) => {
                        assert_eq!((first_e_index, coordinate), (block, block + 1));
                    }
                    (1, Classification::Critical { first_e_index, coordinate }) => {
                        assert_eq!((first_e_index, coordinate), (block - 1, block));
                    }
                    (2, Classification::Critical { first_e_index, coordinate }) => {
                        assert_eq!((first_e_index, coordinate), (block - 1, block));
                    }
                    other => panic!("projection misclassified: {other:?}"),
                }
            }
        }
        assert!(homs.iter().any(|h| h.gen_images() == zero_hom(w).gen_images()));
    }

    #[test]
    fn projection_respects_products_on_samples() {
        let w = Window::new(-1, 1);
        let span = SpanSolver::build(w);
        let p = projection_hom(w, 0, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(11, "proj-products"));
        for _ in 0..200 {
            let pick = |rng: &mut ChaCha8Rng| {
                let mut v = FiniteVec::zero(w);
                for _ in 0..3 {
                    let ri = rng.gen_range(0..span.rows().len());
                    v = &v + &span.rows()[ri].vec.scale(rng.gen_range(0..4) as i64);
                }
                v
            };
            let (x, y) = (pick(&mut rng), pick(&mut rng));
            assert_eq!(p.eval(&(&x + &y)), (p.eval(&x) + p.eval(&y)) % 8);
            assert_eq!(p.eval(&(&x * &y)), p.eval(&x) * p.eval(&y) % 8);
        }
    }

    #[test]
    fn dual_route_evaluation_agrees() {
        let w = Window::new(0, 1);
        let span = SpanSolver::build(w);
        let homs = homs_on(0, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(5, "dual-eval"));
        for _ in 0..100 {
            let h = &homs[rng.gen_range(0..homs.len())];
            let mut v = FiniteVec::zero(w);
            for _ in 0..3 {
                let ri = rng.gen_range(0..span.rows().len());
                v = &v + &span.rows()[ri].vec.scale(rng.gen_range(0..4) as i64);
            }
            assert_eq!(h.eval_via_span(&span, &v), Some(h.eval(&v)));
        }
    }

    #[test]
    fn punctured_values_deviate_only_at_the_coordinate() {
        for h in homs_on(-1, 1) {
            let probes: Vec<i64> = (-3..=3).collect();
            let values: Vec<u8> = probes.iter().map(|&i| h.punctured_value(i)).collect();
            let outside = h.punctured_value(10);
            match h.class() {
                Classification::ZeroringImage => {
                    assert!(values.iter().all(|&v| v == outside), "{h:?}");
                }
                Classification::Critical { coordinate, .. } => {
                    for (&i, &v) in probes.iter().zip(&values) {
                        if i != coordinate {
                            assert_eq!(v, outside, "hom {h:?} deviates at {i}");
                        }
                    }
                    if values[probes.iter().position(|&i| i == coordinate).unwrap()] != outside
                    {
                        // A genuine deviation is only ever 4 -> 0.
                        assert_eq!(outside, 4, "{h:?}");
                        assert_eq!(h.punctured_value(coordinate), 0, "{h:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn budget_and_width_guards() {
        assert!(matches!(
            enumerate_homs(Window::new(-2, 2), 2_000_000),
            Err(ClosureError::BudgetExceeded { budget: 2_000_000, .. })
        ));
        assert!(matches!(
            enumerate_homs(Window::new(0, 3), 2_000_000),
            Err(ClosureError::WindowTooWide { blocks: 4 })
        ));
    }

    #[test]
    fn enumeration_is_deterministic() {
        let a = homs_on(0, 0);
        let b = homs_on(0, 0);
        assert_eq!(a, b);
    }
}
