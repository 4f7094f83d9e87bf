//! Quadratic zero sets over F2 and their 3-flat local structure.
//!
//! A subset of F2^n "is quadratic" when it is exactly the zero set of some
//! polynomial of degree at most 2 (squares collapse onto linear terms, so a
//! quadratic is a constant, n linear bits and n(n-1)/2 pair bits).  `has_q`
//! decides the property by solving the linear system the 2^n point
//! constraints impose on the coefficient bits, and always re-verifies a found
//! witness against the requested set.  `has_q3` asks the local version: the
//! restriction to every affine 3-flat must be quadratic on that flat, decided
//! through a brute-force-backed dimension-3 table.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

/// Point masks live in a u64, so dimensions beyond 6 are out of scope.
pub const MAX_N: usize = 6;

/// Number of coefficient bits of a quadratic in `n` variables.
pub fn monomial_count(n: usize) -> usize {
    1 + n + n * n.saturating_sub(1) / 2
}

/// Coefficient index of the pair monomial `x_i x_j`, `i < j`, after the
/// constant (index 0) and the linear bits (1..=n).
fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    1 + n + i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Bitmask of all monomial values at the point `x`.
fn monomials_at(n: usize, x: u32) -> u64 {
    let mut m = 1u64;
    for i in 0..n {
        if x >> i & 1 == 1 {
            m |= 1 << (1 + i);
            for j in (i + 1)..n {
                if x >> j & 1 == 1 {
                    m |= 1 << pair_index(n, i, j);
                }
            }
        }
    }
    m
}

/// A polynomial of degree at most 2 in `n` variables over F2, stored as one
/// coefficient bit per monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quadratic {
    n: usize,
    coeffs: u64,
}

impl Quadratic {
    pub fn new(n: usize, coeffs: u64) -> Quadratic {
        assert!(n <= MAX_N);
        assert_eq!(coeffs >> monomial_count(n), 0, "stray coefficient bits");
        Quadratic { n, coeffs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> u64 {
        self.coeffs
    }

    pub fn eval(&self, x: u32) -> bool {
        (self.coeffs & monomials_at(self.n, x)).count_ones() & 1 == 1
    }

    /// Bitmask of the zero set: bit `x` is set iff the polynomial vanishes at `x`.
    pub fn solution_mask(&self) -> u64 {
        let mut mask = 0u64;
        for x in 0..1u32 << self.n {
            if !self.eval(x) {
                mask |= 1 << x;
            }
        }
        mask
    }
}

impl fmt::Display for Quadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        if self.coeffs & 1 == 1 {
            terms.push("1".to_string());
        }
        for i in 0..self.n {
            if self.coeffs >> (1 + i) & 1 == 1 {
                terms.push(format!("x{i}"));
            }
        }
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.coeffs >> pair_index(self.n, i, j) & 1 == 1 {
                    terms.push(format!("x{i}*x{j}"));
                }
            }
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// All 2^K quadratics in `n` variables; only sensible for small `n`.
pub fn all_quadratics(n: usize) -> impl Iterator<Item = Quadratic> {
    assert!(monomial_count(n) <= 16, "iteration space too large");
    (0..1u64 << monomial_count(n)).map(move |c| Quadratic::new(n, c))
}

/// Distinct zero-set masks of all quadratics in `n` variables, by brute force.
pub fn brute_force_quadratic_masks(n: usize) -> BTreeSet<u64> {
    all_quadratics(n).map(|q| q.solution_mask()).collect()
}

/// Decide whether `mask` is the zero set of some quadratic, by Gaussian
/// elimination on the coefficient bits: the point `x` contributes the F2
/// constraint `q(x) = [x not in mask]`.  A found witness is re-verified point
/// by point before being returned, so `Some(q)` is self-certifying.
pub fn has_q(n: usize, mask: u64) -> Option<Quadratic> {
    assert!(n <= MAX_N);
    let points = 1u32 << n;
    assert!(points == 64 || mask >> points == 0, "mask beyond the cube");
    let k = monomial_count(n);

    let mut rows: Vec<u64> = (0..points)
        .map(|x| monomials_at(n, x) | ((mask >> x & 1) ^ 1) << k)
        .collect();

    let mut next = 0usize;
    for col in 0..k {
        let Some(p) = (next..rows.len()).find(|&p| rows[p] >> col & 1 == 1) else {
            continue;
        };
        rows.swap(next, p);
        let base = rows[next];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != next && *row >> col & 1 == 1 {
                *row ^= base;
            }
        }
        next += 1;
    }

    if rows.iter().any(|&row| row == 1 << k) {
        return None;
    }

    // Reduced echelon form with free variables at zero: each pivot row fixes
    // its leading coefficient to its right-hand side.
    let mut coeffs = 0u64;
    for &row in &rows {
        let c = row & ((1 << k) - 1);
        if c != 0 && row >> k & 1 == 1 {
            coeffs |= 1 << c.trailing_zeros();
        }
    }

    let q = Quadratic::new(n, coeffs);
    assert_eq!(q.solution_mask(), mask, "solver returned an unsound witness");
    Some(q)
}

/// Gaussian binomial coefficient: the number of k-dimensional linear
/// subspaces of F2^n.
pub fn gaussian_binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    // [n,k] = [n-1,k-1] + 2^k [n-1,k]
    let mut row = vec![0u64; k as usize + 1];
    row[0] = 1;
    for m in 1..=n {
        for j in (1..=k.min(m)).rev() {
            let jj = j as usize;
            row[jj] = row[jj - 1] + (1u64 << j) * row[jj];
        }
    }
    row[k as usize]
}

/// One affine 3-flat, with its 8 points listed in the order of a fixed affine
/// chart: index `c` is `base ^ combo(c)` over a basis of the direction space.
#[derive(Debug, Clone, Copy)]
pub struct FlatTable {
    pub points: [u32; 8],
}

impl FlatTable {
    pub fn mask(&self) -> u64 {
        self.points.iter().fold(0u64, |m, &p| m | 1 << p)
    }

    /// Pull a global point mask back through the chart into a dimension-3 mask.
    pub fn local_mask(&self, mask: u64) -> u8 {
        let mut local = 0u8;
        for (c, &p) in self.points.iter().enumerate() {
            if mask >> p & 1 == 1 {
                local |= 1 << c;
            }
        }
        local
    }
}

fn build_flats(n: usize) -> Vec<FlatTable> {
    assert!((3..=MAX_N).contains(&n));
    let points = 1u32 << n;

    // Every 3-dimensional linear subspace, deduplicated by its point mask.
    let nonzero: Vec<u32> = (1..points).collect();
    let mut spans: BTreeSet<u64> = BTreeSet::new();
    let mut bases: Vec<[u32; 3]> = Vec::new();
    for ai in 0..nonzero.len() {
        for bi in (ai + 1)..nonzero.len() {
            for ci in (bi + 1)..nonzero.len() {
                let (a, b, c) = (nonzero[ai], nonzero[bi], nonzero[ci]);
                // distinct nonzero vectors are dependent only via a ^ b ^ c = 0
                if a ^ b ^ c == 0 {
                    continue;
                }
                let mut mask = 0u64;
                for s in 0..8u32 {
                    let mut p = 0;
                    if s & 1 == 1 {
                        p ^= a;
                    }
                    if s & 2 == 2 {
                        p ^= b;
                    }
                    if s & 4 == 4 {
                        p ^= c;
                    }
                    mask |= 1 << p;
                }
                if mask.count_ones() == 8 && spans.insert(mask) {
                    bases.push([a, b, c]);
                }
            }
        }
    }

    let mut flats = Vec::new();
    for basis in bases {
        let members: Vec<u32> = (0..8u32)
            .map(|s| {
                let mut p = 0;
                for (bit, &v) in basis.iter().enumerate() {
                    if s >> bit & 1 == 1 {
                        p ^= v;
                    }
                }
                p
            })
            .collect();
        let mut seen = 0u64;
        for base in 0..points {
            if seen >> base & 1 == 1 {
                continue;
            }
            let mut pts = [0u32; 8];
            for (c, &m) in members.iter().enumerate() {
                let p = base ^ m;
                pts[c] = p;
                seen |= 1 << p;
            }
            flats.push(FlatTable { points: pts });
        }
    }
    flats
}

/// The affine 3-flats of F2^n, cached per dimension.
pub fn affine_3_flats(n: usize) -> &'static [FlatTable] {
    static CACHE: [OnceLock<Vec<FlatTable>>; MAX_N + 1] =
        [const { OnceLock::new() }; MAX_N + 1];
    assert!((3..=MAX_N).contains(&n));
    CACHE[n].get_or_init(|| build_flats(n))
}

/// Which dimension-3 masks are quadratic zero sets, backed by brute force
/// over all 128 dimension-3 quadratics rather than by any shortcut.
pub fn dim3_memo() -> &'static [bool; 256] {
    static MEMO: OnceLock<[bool; 256]> = OnceLock::new();
    MEMO.get_or_init(|| {
        let mut memo = [false; 256];
        for m in brute_force_quadratic_masks(3) {
            memo[m as usize] = true;
        }
        memo
    })
}

/// Local quadratic property: the restriction of `mask` to every affine
/// 3-flat is a quadratic zero set on that flat.  Vacuously true below
/// dimension 3, where no such flat exists.
pub fn has_q3(n: usize, mask: u64) -> bool {
    assert!(n <= MAX_N);
    if n < 3 {
        return true;
    }
    let points = 1u32 << n;
    assert!(points == 64 || mask >> points == 0, "mask beyond the cube");
    let memo = dim3_memo();
    affine_3_flats(n)
        .iter()
        .all(|flat| memo[flat.local_mask(mask) as usize])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::derive_seed;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn monomial_counts_match_the_closed_form() {
        assert_eq!(
            (0..=6).map(monomial_count).collect::<Vec<_>>(),
            vec![1, 2, 4, 7, 11, 16, 22]
        );
    }

    #[test]
    fn pair_indices_tile_the_coefficient_range() {
        for n in 2..=MAX_N {
            let mut seen = vec![false; monomial_count(n)];
            seen[0] = true;
            for i in 0..n {
                seen[1 + i] = true;
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    let idx = pair_index(n, i, j);
                    assert!(!seen[idx], "collision at n={n} ({i},{j})");
                    seen[idx] = true;
                }
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn dimension_3_zero_sets_are_exactly_the_even_subsets() {
        let masks = brute_force_quadratic_masks(3);
        assert_eq!(masks.len(), 128, "all 128 quadratics cut distinct sets");
        for m in 0..256u64 {
            assert_eq!(
                masks.contains(&m),
                m.count_ones() % 2 == 0,
                "mask {m:#010b}"
            );
        }
        for (m, &quadratic) in dim3_memo().iter().enumerate() {
            assert_eq!(quadratic, masks.contains(&(m as u64)));
        }
    }

    #[test]
    fn solver_matches_brute_force_in_dimensions_2_and_3() {
        let dim2 = brute_force_quadratic_masks(2);
        assert_eq!(dim2.len(), 16, "every subset of the square is quadratic");
        for m in 0..16u64 {
            assert!(has_q(2, m).is_some());
        }
        let dim3 = brute_force_quadratic_masks(3);
        for m in 0..256u64 {
            assert_eq!(has_q(3, m).is_some(), dim3.contains(&m));
        }
    }

    #[test]
    fn solver_is_invariant_under_complement() {
        // q and q+1 swap zero set and support, so the property is symmetric.
        for m in 0..256u64 {
            assert_eq!(has_q(3, m).is_some(), has_q(3, !m & 0xFF).is_some());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(0, "quad-complement"));
        for _ in 0..500 {
            let m = rng.gen::<u64>() & 0xFFFF;
            assert_eq!(has_q(4, m).is_some(), has_q(4, !m & 0xFFFF).is_some());
        }
    }

    #[test]
    fn flat_counts_match_the_gaussian_binomial() {
        assert_eq!(gaussian_binomial(3, 3), 1);
        assert_eq!(gaussian_binomial(4, 3), 15);
        assert_eq!(gaussian_binomial(5, 3), 155);
        assert_eq!(gaussian_binomial(6, 3), 1395);
        for n in 3..=MAX_N {
            let flats = affine_3_flats(n);
            let expected = gaussian_binomial(n as u32, 3) * (1 << (n - 3));
            assert_eq!(flats.len() as u64, expected, "n={n}");
            let distinct: BTreeSet<u64> = flats.iter().map(|f| f.mask()).collect();
            assert_eq!(distinct.len(), flats.len());
            for f in flats {
                assert_eq!(f.mask().count_ones(), 8);
                // affine closure: x ^ y ^ z stays inside
                for x in f.points {
                    for y in f.points {
                        for z in f.points {
                            assert!(f.mask() >> (x ^ y ^ z) & 1 == 1);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dimension_3_has_a_single_flat_so_local_equals_global() {
        assert_eq!(affine_3_flats(3).len(), 1);
        assert_eq!(affine_3_flats(3)[0].mask(), 0xFF);
        for m in 0..256u64 {
            assert_eq!(has_q3(3, m), has_q(3, m).is_some());
        }
    }

    #[test]
    fn local_check_agrees_with_even_intersections_in_dimension_4() {
        // The brute-force dimension-3 table says quadratic = even, so the
        // faithful chart route must coincide with plain parity counting.
        let flats = affine_3_flats(4);
        for m in 0..1u64 << 16 {
            let by_chart = has_q3(4, m);
            let by_parity = flats.iter().all(|f| (m & f.mask()).count_ones() % 2 == 0);
            assert_eq!(by_chart, by_parity, "mask {m:#06x}");
        }
    }

    #[test]
    fn dimension_4_counts_freeze_the_local_global_match() {
        let quad_masks = brute_force_quadratic_masks(4);
        assert_eq!(quad_masks.len(), 2048, "all 2^11 quadratics cut distinct sets");

        let mut q_count = 0usize;
        let mut q3_count = 0usize;
        for m in 0..1u64 << 16 {
            let q = has_q(4, m).is_some();
            let q3 = has_q3(4, m);
            assert_eq!(q, quad_masks.contains(&m));
            if q {
                assert!(q3, "a global quadratic set must be locally quadratic");
                q_count += 1;
            }
            if q3 {
                q3_count += 1;
                assert!(q, "locally quadratic without a global witness at {m:#06x}");
            }
        }
        assert_eq!(q_count, 2048);
        assert_eq!(q3_count, 2048);
    }

    #[test]
    fn random_dimension_5_quadratics_are_locally_quadratic() {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(0, "quad-dim5"));
        for _ in 0..1000 {
            let coeffs = rng.gen::<u64>() & ((1 << monomial_count(5)) - 1);
            let mask = Quadratic::new(5, coeffs).solution_mask();
            assert!(has_q3(5, mask));
            assert!(has_q(5, mask).is_some());
        }
    }

    #[test]
    fn trivial_masks_are_quadratic_everywhere() {
        for n in 2..=5usize {
            let full = if n == 6 { u64::MAX } else { (1u64 << (1 << n)) - 1 };
            assert_eq!(has_q(n, full).map(|q| q.coeffs()), Some(0));
            assert_eq!(has_q(n, 0).map(|q| q.coeffs()), Some(1));
            assert!(has_q3(n, full));
            assert!(has_q3(n, 0));
        }
    }

    #[test]
    fn display_renders_monomials_in_order() {
        let q = Quadratic::new(3, 0b1000011);
        assert_eq!(q.to_string(), "1 + x0 + x1*x2");
        assert_eq!(Quadratic::new(3, 0).to_string(), "0");
    }
}
