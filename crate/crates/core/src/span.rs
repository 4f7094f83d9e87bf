//! Exact additive-span solver for windowed subrings, over `Z4`.
//!
//! Because every product of three family members vanishes, the additive span
//! of the generators together with their pairwise products is already closed
//! under multiplication — it *is* the windowed subring. Embedding each block
//! through `(alpha, beta, gamma) -> (alpha, beta, 2 gamma)` turns membership
//! questions into linear algebra over `Z4`, which this module solves by a
//! Howell-style column sweep with transform tracking. That yields, without
//! ever materializing the ring:
//!
//! * membership tests with explicit, re-evaluated witness expressions,
//! * the exact cardinality of the span (product of pivot orders),
//! * a generating set for the lattice of additive relations among the rows,
//!   which the homomorphism search uses for constraint propagation.
//!
//! On windows small enough to close, the span provably coincides with the
//! worklist closure; the test suites compare the two element-for-element.

use crate::ecvec::{embed_z4, FiniteVec, Window};
use crate::expr::{Expr, GenId};
use crate::family::{d_generators, is_multiplicative_gen};
use serde::Serialize;
use std::fmt;

/// Provenance of one solver row.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum RowDesc {
    Gen(GenId),
    Product(GenId, GenId),
}

impl RowDesc {
    pub fn expr(self) -> Expr {
        match self {
            RowDesc::Gen(g) => Expr::gen(g),
            RowDesc::Product(g, h) => Expr::gen(g).mul(Expr::gen(h)),
        }
    }
}

impl fmt::Display for RowDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowDesc::Gen(g) => write!(f, "{g}"),
            RowDesc::Product(g, h) => write!(f, "{g}*{h}"),
        }
    }
}

pub struct SpanRow {
    pub desc: RowDesc,
    pub vec: FiniteVec,
}

struct EchelonRow {
    v: Vec<u8>,
    pivot: usize,
    pivot_val: u8, // 1 or 2
    transform: Vec<u8>,
}

/// Solved span of the standard family on one window.
pub struct SpanSolver {
    window: Window,
    rows: Vec<SpanRow>,
    echelon: Vec<EchelonRow>,
    relations: Vec<Vec<u8>>,
}

fn sub_scaled(target: &mut [u8], c: u8, source: &[u8]) {
    if c == 0 {
        return;
    }
    for (t, &s) in target.iter_mut().zip(source) {
        *t = (*t + (4 - (c * s) % 4)) % 4;
    }
}

fn is_zero(v: &[u8]) -> bool {
    v.iter().all(|&x| x == 0)
}

impl SpanSolver {
    pub fn build(window: Window) -> SpanSolver {
        let gens = d_generators(window);
        let mut rows: Vec<SpanRow> = gens
            .iter()
            .map(|(g, v)| SpanRow { desc: RowDesc::Gen(*g), vec: v.clone() })
            .collect();
        // Pairwise products of the multiplicative generators. Products
        // touching a square spike vanish identically and are omitted; zero
        // product rows among these are kept — each one pins the product of
        // two generator images to zero, which the homomorphism search needs.
        let mult: Vec<(GenId, &FiniteVec)> = gens
            .iter()
            .filter(|(g, _)| is_multiplicative_gen(*g))
            .map(|(g, v)| (*g, v))
            .collect();
        for i in 0..mult.len() {
            for j in i..mult.len() {
                let (gi, vi) = mult[i];
                let (gj, vj) = mult[j];
                rows.push(SpanRow { desc: RowDesc::Product(gi, gj), vec: vi * vj });
            }
        }

        let ncols = 3 * window.len();
        let nrows = rows.len();
        let embed = |v: &FiniteVec| -> Vec<u8> {
            v.values().iter().flat_map(|&x| embed_z4(x)).collect()
        };

        // Howell-style sweep. `pool` holds unprocessed (vector, transform)
        // pairs; at each column a unit pivot is preferred, otherwise a pivot
        // of 2 is placed and its double joins the pool so combinations hiding
        // behind the 2-torsion still get their own pivots later.
        let mut pool: Vec<(Vec<u8>, Vec<u8>)> = rows
            .iter()
            .enumerate()
            .map(|(k, r)| {
                let mut t = vec![0u8; nrows];
                t[k] = 1;
                (embed(&r.vec), t)
            })
            .collect();
        let mut echelon: Vec<EchelonRow> = Vec::new();
        let mut relations: Vec<Vec<u8>> = Vec::new();
        let drain_zeros = |pool: &mut Vec<(Vec<u8>, Vec<u8>)>,
                               relations: &mut Vec<Vec<u8>>| {
            pool.retain(|(v, t)| {
                if is_zero(v) {
                    if !is_zero(t) {
                        relations.push(t.clone());
                    }
                    false
                } else {
                    true
                }
            });
        };

        for col in 0..ncols {
            drain_zeros(&mut pool, &mut relations);
            if let Some(k) = pool.iter().position(|(v, _)| v[col] % 2 == 1) {
                let (mut v, mut t) = pool.swap_remove(k);
                if v[col] == 3 {
                    // scale by the unit 3 to normalize the pivot to 1
                    for x in v.iter_mut().chain(t.iter_mut()) {
                        *x = (*x * 3) % 4;
                    }
                }
                for (pv, pt) in pool.iter_mut() {
                    let c = pv[col];
                    if c != 0 {
                        sub_scaled(pv, c, &v);
                        sub_scaled(pt, c, &t);
                    }
                }
                echelon.push(EchelonRow { v, pivot: col, pivot_val: 1, transform: t });
            } else if let Some(k) = pool.iter().position(|(v, _)| v[col] == 2) {
                let (v, t) = pool.swap_remove(k);
                let double: Vec<u8> = v.iter().map(|&x| (2 * x) % 4).collect();
                let double_t: Vec<u8> = t.iter().map(|&x| (2 * x) % 4).collect();
                if is_zero(&double) {
                    if !is_zero(&double_t) {
                        relations.push(double_t);
                    }
                } else {
                    pool.push((double, double_t));
                }
                for (pv, pt) in pool.iter_mut() {
                    // no unit entries remain in this column, so one
                    // subtraction clears a 2
                    if pv[col] == 2 {
                        sub_scaled(pv, 1, &v);
                        sub_scaled(pt, 1, &t);
                    }
                }
                echelon.push(EchelonRow { v, pivot: col, pivot_val: 2, transform: t });
            }
        }
        drain_zeros(&mut pool, &mut relations);
        assert!(pool.is_empty(), "sweep left unprocessed nonzero rows");

        let solver = SpanSolver { window, rows, echelon, relations };
        solver.audit();
        solver
    }

    // Construction-time sanity: every echelon row's transform reproduces its
    // vector, and every relation really sums to zero.
    fn audit(&self) {
        for e in &self.echelon {
            assert_eq!(self.combine(&e.transform), e.v, "transform broken");
        }
        for rel in &self.relations {
            assert!(is_zero(&self.combine(rel)), "false relation recorded");
        }
    }

    fn combine(&self, coeffs: &[u8]) -> Vec<u8> {
        let mut acc = vec![0u8; 3 * self.window.len()];
        for (&c, row) in coeffs.iter().zip(&self.rows) {
            if c == 0 {
                continue;
            }
            for (k, &x) in row.vec.values().iter().enumerate() {
                let e = embed_z4(x);
                for t in 0..3 {
                    acc[3 * k + t] = (acc[3 * k + t] + c * e[t]) % 4;
                }
            }
        }
        acc
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn rows(&self) -> &[SpanRow] {
        &self.rows
    }

    /// Generating set for the additive relations among the rows: every listed
    /// coefficient vector combines the rows to the zero vector, and together
    /// they generate all such combinations.
    pub fn relations(&self) -> &[Vec<u8>] {
        &self.relations
    }

    /// Exact number of elements in the span — the size of the windowed
    /// subring, even when it is far too large to materialize.
    pub fn span_size(&self) -> u128 {
        self.echelon
            .iter()
            .map(|e| if e.pivot_val == 1 { 4u128 } else { 2 })
            .product()
    }

    /// Row coefficients (mod 4) expressing `target` over [`Self::rows`], or
    /// `None` when the target is outside the span.
    pub fn decompose(&self, target: &FiniteVec) -> Option<Vec<u8>> {
        assert_eq!(target.window(), self.window, "window mismatch");
        let mut residual: Vec<u8> =
            target.values().iter().flat_map(|&x| embed_z4(x)).collect();
        let mut coeffs = vec![0u16; self.rows.len()];
        for e in &self.echelon {
            let val = residual[e.pivot];
            let c = match e.pivot_val {
                1 => val,
                _ => {
                    if !val.is_multiple_of(2) {
                        return None;
                    }
                    val / 2
                }
            };
            if c != 0 {
                sub_scaled(&mut residual, c, &e.v);
                for (acc, &t) in coeffs.iter_mut().zip(&e.transform) {
                    *acc = (*acc + (c as u16) * (t as u16)) % 4;
                }
            }
        }
        if !is_zero(&residual) {
            return None;
        }
        Some(coeffs.into_iter().map(|c| c as u8).collect())
    }

    /// Membership test with witness. Returns a symbolic combination of rows
    /// that evaluates to `target`, re-checked by honest re-evaluation before
    /// being handed out; `None` when the target is outside the span.
    pub fn try_express(&self, target: &FiniteVec) -> Option<Expr> {
        let coeffs = self.decompose(target)?;
        let expr = Expr::linear_combination(
            coeffs
                .iter()
                .zip(&self.rows)
                .map(|(&c, row)| (c as i64, row.desc.expr())),
        );
        // A witness that does not evaluate back to the target would mean the
        // solver state is corrupt; that must never escape.
        assert_eq!(
            &expr.eval_window(self.window),
            target,
            "solver produced a bad witness"
        );
        Some(expr)
    }

    pub fn contains(&self, target: &FiniteVec) -> bool {
        self.try_express(target).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::close;
    use crate::ecvec::ECVector;
    use crate::ring::{RElem, A, ZERO};

    #[test]
    fn span_sizes_match_known_cardinalities() {
        // Up to three blocks the restricted ring is the whole product
        // (2^(5n) elements); from four blocks on, mod-2 constraints couple
        // the coordinate patterns and the size is 2^(4n+3).  The dual
        // picture: a parity functional on the generators is pinned by three
        // boundary conditions, leaving n-3 free constraint directions.
        assert_eq!(SpanSolver::build(Window::new(0, 0)).span_size(), 32);
        assert_eq!(SpanSolver::build(Window::new(0, 1)).span_size(), 1024);
        assert_eq!(SpanSolver::build(Window::new(-1, 1)).span_size(), 32768);
        assert_eq!(SpanSolver::build(Window::new(0, 3)).span_size(), 1 << 19);
        assert_eq!(SpanSolver::build(Window::new(-2, 2)).span_size(), 1 << 23);
    }

    #[test]
    fn eleven_block_size_is_astronomical() {
        let s = SpanSolver::build(Window::new(-5, 5));
        assert_eq!(s.span_size(), 1 << (4 * 11 + 3));
    }

    /// Count the additive span of the row pool by brute-force closure and
    /// compare against the pivot-product count.  Independent of the
    /// elimination logic: only vector addition is used.
    #[test]
    fn span_size_matches_additive_closure_count() {
        for (w, expect) in [
            (Window::new(0, 0), 1u64 << 5),
            (Window::new(0, 1), 1 << 10),
            (Window::new(0, 2), 1 << 15),
            (Window::new(0, 3), 1 << 19),
        ] {
            let s = SpanSolver::build(w);
            let bits = 5 * w.len();
            let mut seen = vec![false; 1usize << bits];
            let mut frontier = vec![pack_code(&FiniteVec::zero(w))];
            seen[0] = true;
            let rows: Vec<u64> = s.rows().iter().map(|r| pack_code(&r.vec)).collect();
            let mut count = 1u64;
            while let Some(v) = frontier.pop() {
                for &r in &rows {
                    let sum = add_codes(v, r, w.len());
                    if !seen[sum as usize] {
                        seen[sum as usize] = true;
                        count += 1;
                        frontier.push(sum);
                    }
                }
            }
            assert_eq!(count as u128, s.span_size(), "window {w}");
            assert_eq!(count, expect, "window {w}");
        }
    }

    fn pack_code(v: &FiniteVec) -> u64 {
        v.values()
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, r)| acc | (r.code() as u64) << (5 * i))
    }

    fn add_codes(x: u64, y: u64, blocks: usize) -> u64 {
        let mut out = 0u64;
        for i in 0..blocks {
            let (a, b) = ((x >> (5 * i)) & 31, (y >> (5 * i)) & 31);
            let sum = (RElem::from_code(a as u8) + RElem::from_code(b as u8)).code();
            out |= (sum as u64) << (5 * i);
        }
        out
    }

    #[test]
    fn agrees_with_closure_on_two_blocks() {
        let w = Window::new(0, 1);
        let c = close(w, 10_000).unwrap();
        let s = SpanSolver::build(w);
        assert_eq!(s.span_size(), c.len() as u128);
        for id in 0..c.len() as u32 {
            let v = c.element(id);
            assert!(s.try_express(&v).is_some(), "closure element {id} missing from span");
        }
    }

    #[test]
    fn rejects_nonmembers() {
        let w = Window::new(-2, 2);
        let s = SpanSolver::build(w);
        // A bare `a` spike is not in the five-block ring: every member's
        // alpha-coordinates satisfy the difference-pattern constraints.
        let spike = ECVector::spike(0, A).restrict(w);
        assert!(s.try_express(&spike).is_none());
        assert!(s.contains(&FiniteVec::zero(w)));
        let _ = ZERO;
    }

    #[test]
    fn punctured_ghost_witnesses_on_a_wide_window() {
        let w = Window::new(-5, 5);
        let s = SpanSolver::build(w);
        for m in [-5, 0, 3, 5] {
            let target = ECVector::punctured_ghost(m).restrict(w);
            let expr = s.try_express(&target).expect("witness must exist");
            assert_eq!(expr.eval_window(w), target);
        }
    }

    #[test]
    fn relations_exist_and_are_sound() {
        let s = SpanSolver::build(Window::new(-1, 1));
        assert!(!s.relations().is_empty());
        // Soundness is asserted at build time; double-check one coefficient
        // vector by honest vector arithmetic.
        let rel = &s.relations()[0];
        let mut acc = FiniteVec::zero(s.window());
        for (c, row) in rel.iter().zip(s.rows()) {
            acc = &acc + &row.vec.scale(*c as i64);
        }
        assert!(acc.is_zero());
    }
}
