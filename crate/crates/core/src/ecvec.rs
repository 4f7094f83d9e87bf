//! Eventually-constant vectors indexed by the integers, and their finite
//! restrictions.
//!
//! An [`ECVector`] takes one fixed *eventual* value at all but finitely many
//! indices; the deviations are stored as a canonical exception map (an entry
//! equal to the eventual value is never stored, so structural equality is
//! semantic equality). All arithmetic is pointwise in the base ring.
//!
//! The distinguished vectors the rest of the crate is built from:
//!
//! ```text
//! b_bar      = (..., b, b, b, ...)                       constant
//! a_bar(i)   = eventually a, with (0, b, 0) at (i-1, i, i+1)
//! e(i)       = a_bar(i) - a_bar(i-1)                     finitely supported
//! ghost      = (..., ab, ab, ab, ...)                    constant
//! ```
//!
//! plus the punctured ghost: the ghost with a single entry zeroed. The
//! module's identity audit ([`verify_vector_identities`]) pins down the full
//! multiplication behavior of this family, including the closed form that
//! rebuilds every punctured ghost out of products of family members.

use crate::ring::{RElem, A, AB, A2, B, B2, ZERO};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// An inclusive range of indices `lo..=hi`, the footprint of a finite
/// restriction.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Window {
    lo: i64,
    hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Window {
        assert!(lo <= hi, "empty window {lo}:{hi}");
        Window { lo, hi }
    }

    pub fn lo(self) -> i64 {
        self.lo
    }

    pub fn hi(self) -> i64 {
        self.hi
    }

    #[allow(clippy::len_without_is_empty)] // never empty by construction
    pub fn len(self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn contains(self, i: i64) -> bool {
        self.lo <= i && i <= self.hi
    }

    pub fn blocks(self) -> impl Iterator<Item = i64> + Clone {
        self.lo..=self.hi
    }

    /// Position of index `i` inside the window; panics when outside.
    pub fn offset(self, i: i64) -> usize {
        assert!(self.contains(i), "index {i} outside window {self}");
        (i - self.lo) as usize
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.lo, self.hi)
    }
}

impl fmt::Debug for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Deserialize)]
struct WindowRepr {
    lo: i64,
    hi: i64,
}

impl<'de> Deserialize<'de> for Window {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = WindowRepr::deserialize(d)?;
        if r.lo > r.hi {
            return Err(D::Error::custom(format!("empty window {}:{}", r.lo, r.hi)));
        }
        Ok(Window::new(r.lo, r.hi))
    }
}

/// A vector over `lo..=hi` only: the restriction of an [`ECVector`] to a
/// window, and the element type of the truncated rings.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FiniteVec {
    window: Window,
    values: Vec<RElem>,
}

impl FiniteVec {
    pub fn new(window: Window, values: Vec<RElem>) -> FiniteVec {
        assert_eq!(values.len(), window.len(), "value count != window size");
        FiniteVec { window, values }
    }

    pub fn from_fn(window: Window, f: impl FnMut(i64) -> RElem) -> FiniteVec {
        FiniteVec { window, values: window.blocks().map(f).collect() }
    }

    pub fn zero(window: Window) -> FiniteVec {
        FiniteVec::constant(window, ZERO)
    }

    pub fn constant(window: Window, x: RElem) -> FiniteVec {
        FiniteVec { window, values: vec![x; window.len()] }
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn get(&self, i: i64) -> RElem {
        self.values[self.window.offset(i)]
    }

    pub fn values(&self) -> &[RElem] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn scale(&self, n: i64) -> FiniteVec {
        FiniteVec {
            window: self.window,
            values: self.values.iter().map(|v| v.scale(n)).collect(),
        }
    }

    fn zip(&self, rhs: &FiniteVec, f: impl Fn(RElem, RElem) -> RElem) -> FiniteVec {
        assert_eq!(self.window, rhs.window, "window mismatch");
        FiniteVec {
            window: self.window,
            values: self
                .values
                .iter()
                .zip(&rhs.values)
                .map(|(&x, &y)| f(x, y))
                .collect(),
        }
    }
}

impl Add for &FiniteVec {
    type Output = FiniteVec;
    fn add(self, rhs: &FiniteVec) -> FiniteVec {
        self.zip(rhs, |x, y| x + y)
    }
}

impl Sub for &FiniteVec {
    type Output = FiniteVec;
    fn sub(self, rhs: &FiniteVec) -> FiniteVec {
        self.zip(rhs, |x, y| x - y)
    }
}

impl Mul for &FiniteVec {
    type Output = FiniteVec;
    fn mul(self, rhs: &FiniteVec) -> FiniteVec {
        self.zip(rhs, |x, y| x * y)
    }
}

impl Neg for &FiniteVec {
    type Output = FiniteVec;
    fn neg(self) -> FiniteVec {
        FiniteVec {
            window: self.window,
            values: self.values.iter().map(|&x| -x).collect(),
        }
    }
}

impl fmt::Debug for FiniteVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.window)?;
        f.debug_list().entries(&self.values).finish()
    }
}

impl<'de> Deserialize<'de> for FiniteVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            window: Window,
            values: Vec<RElem>,
        }
        let r = Repr::deserialize(d)?;
        if r.values.len() != r.window.len() {
            return Err(D::Error::custom(format!(
                "window {} expects {} values, got {}",
                r.window,
                r.window.len(),
                r.values.len()
            )));
        }
        Ok(FiniteVec { window: r.window, values: r.values })
    }
}

/// Eventually-constant vector indexed by all of `Z`.
///
/// Invariant: no stored exception equals the eventual value, so derived
/// equality is pointwise equality.
#[derive(Clone, PartialEq, Eq)]
pub struct ECVector {
    eventual: RElem,
    exceptions: BTreeMap<i64, RElem>,
}

impl ECVector {
    pub fn new(eventual: RElem, exceptions: impl IntoIterator<Item = (i64, RElem)>) -> ECVector {
        let exceptions = exceptions
            .into_iter()
            .filter(|&(_, v)| v != eventual)
            .collect();
        ECVector { eventual, exceptions }
    }

    pub fn constant(x: RElem) -> ECVector {
        ECVector { eventual: x, exceptions: BTreeMap::new() }
    }

    pub fn zero() -> ECVector {
        ECVector::constant(ZERO)
    }

    /// `x` at index `i`, zero everywhere else.
    pub fn spike(i: i64, x: RElem) -> ECVector {
        ECVector::new(ZERO, [(i, x)])
    }

    /// The constant-`b` vector.
    pub fn b_bar() -> ECVector {
        ECVector::constant(B)
    }

    /// Eventually `a`, with the patch `(0, b, 0)` across `(i-1, i, i+1)`.
    pub fn a_bar(i: i64) -> ECVector {
        ECVector::new(A, [(i - 1, ZERO), (i, B), (i + 1, ZERO)])
    }

    /// The finitely supported difference `a_bar(i) - a_bar(i-1)`.
    pub fn e(i: i64) -> ECVector {
        &ECVector::a_bar(i) - &ECVector::a_bar(i - 1)
    }

    /// The constant-`ab` vector. Everything in this crate orbits around it.
    pub fn ghost() -> ECVector {
        ECVector::constant(AB)
    }

    /// The ghost with the single entry at `i` zeroed out.
    pub fn punctured_ghost(i: i64) -> ECVector {
        ECVector::new(AB, [(i, ZERO)])
    }

    pub fn get(&self, i: i64) -> RElem {
        self.exceptions.get(&i).copied().unwrap_or(self.eventual)
    }

    pub fn eventual(&self) -> RElem {
        self.eventual
    }

    pub fn exceptions(&self) -> &BTreeMap<i64, RElem> {
        &self.exceptions
    }

    pub fn is_constant(&self) -> bool {
        self.exceptions.is_empty()
    }

    pub fn scale(&self, n: i64) -> ECVector {
        ECVector::new(
            self.eventual.scale(n),
            self.exceptions.iter().map(|(&i, &v)| (i, v.scale(n))),
        )
    }

    pub fn restrict(&self, window: Window) -> FiniteVec {
        FiniteVec::from_fn(window, |i| self.get(i))
    }

    fn zip(&self, rhs: &ECVector, f: impl Fn(RElem, RElem) -> RElem) -> ECVector {
        let eventual = f(self.eventual, rhs.eventual);
        let keys = self.exceptions.keys().chain(rhs.exceptions.keys());
        ECVector::new(eventual, keys.map(|&i| (i, f(self.get(i), rhs.get(i)))))
    }
}

impl Add for &ECVector {
    type Output = ECVector;
    fn add(self, rhs: &ECVector) -> ECVector {
        self.zip(rhs, |x, y| x + y)
    }
}

impl Sub for &ECVector {
    type Output = ECVector;
    fn sub(self, rhs: &ECVector) -> ECVector {
        self.zip(rhs, |x, y| x - y)
    }
}

impl Mul for &ECVector {
    type Output = ECVector;
    fn mul(self, rhs: &ECVector) -> ECVector {
        self.zip(rhs, |x, y| x * y)
    }
}

impl Neg for &ECVector {
    type Output = ECVector;
    fn neg(self) -> ECVector {
        ECVector::new(-self.eventual, self.exceptions.iter().map(|(&i, &v)| (i, -v)))
    }
}

impl fmt::Display for ECVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "~{}", self.eventual)?;
        if !self.exceptions.is_empty() {
            write!(f, " except {{")?;
            for (n, (i, v)) in self.exceptions.iter().enumerate() {
                if n > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{i}: {v}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ECVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for ECVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            eventual: RElem,
            exceptions: Vec<(i64, RElem)>,
        }
        Repr {
            eventual: self.eventual,
            exceptions: self.exceptions.iter().map(|(&i, &v)| (i, v)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ECVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            eventual: RElem,
            exceptions: Vec<(i64, RElem)>,
        }
        let r = Repr::deserialize(d)?;
        Ok(ECVector::new(r.eventual, r.exceptions))
    }
}

/// Outcome of the family identity audit over `e(i)` for `i` in `lo..=hi`.
#[derive(Debug, Clone, Serialize)]
pub struct VectorIdentityReport {
    pub range_lo: i64,
    pub range_hi: i64,
    /// `e(i)` has exactly the support table `(a, -b, b, -a)` at `i-2..=i+1`.
    pub e_support_table: bool,
    /// `a_bar(m)` telescopes to `a_bar(0)` plus consecutive `e` terms.
    pub a_bar_telescopes: bool,
    /// All products of two family members match their closed forms.
    pub product_table: bool,
    /// `v * v = 2v` for family members (squares are doubles, pointwise).
    pub squares_are_doubles: bool,
    /// `e(c) * (e(c) + e(c-3) + e(c+3) + b_bar) = ab@(c-2) + ab@(c+1)`.
    pub net_identity: bool,
    /// Every punctured ghost is a sum of family products:
    /// `punctured(m) = b_bar*a_bar(m) + e(m-1)e(m+1) + e(m)e(m+2) + b^2@m`.
    pub punctured_ghost_formula: bool,
    pub pass: bool,
}

/// Pin down the arithmetic of the generating family symbolically, at the
/// level of whole eventually-constant vectors.
pub fn verify_vector_identities(lo: i64, hi: i64) -> VectorIdentityReport {
    assert!(lo <= hi);
    let b_bar = ECVector::b_bar();

    let mut e_support_table = true;
    for i in lo..=hi {
        let expect = ECVector::new(ZERO, [(i - 2, A), (i - 1, -B), (i, B), (i + 1, -A)]);
        e_support_table &= ECVector::e(i) == expect;
    }

    let mut a_bar_telescopes = true;
    for m in lo..=hi {
        let mut acc = ECVector::a_bar(0);
        if m > 0 {
            for i in 1..=m {
                acc = &acc + &ECVector::e(i);
            }
        } else {
            for i in (m + 1..=0).rev() {
                acc = &acc - &ECVector::e(i);
            }
        }
        a_bar_telescopes &= acc == ECVector::a_bar(m);
    }

    let mut product_table = true;
    for i in lo..=hi {
        let ei = ECVector::e(i);
        for j in lo..=hi {
            let prod = &ei * &ECVector::e(j);
            let expect = match (j - i).abs() {
                0 => ECVector::new(
                    ZERO,
                    [(i - 2, A2), (i - 1, B2), (i, B2), (i + 1, A2)],
                ),
                1 => {
                    let k = i.min(j);
                    ECVector::new(ZERO, [(k - 1, AB), (k, B2), (k + 1, AB)])
                }
                2 => {
                    let k = i.min(j);
                    ECVector::new(ZERO, [(k, AB), (k + 1, AB)])
                }
                3 => ECVector::spike(i.min(j) + 1, A2),
                _ => ECVector::zero(),
            };
            product_table &= prod == expect;
        }
        product_table &= &b_bar * &ei
            == ECVector::new(ZERO, [(i - 2, AB), (i - 1, B2), (i, B2), (i + 1, AB)]);
        product_table &= &b_bar * &ECVector::a_bar(i)
            == ECVector::new(AB, [(i - 1, ZERO), (i, B2), (i + 1, ZERO)]);
    }
    product_table &= &b_bar * &b_bar == ECVector::constant(B2);

    let mut squares_are_doubles = true;
    for i in lo..=hi {
        for v in [ECVector::e(i), ECVector::a_bar(i), b_bar.clone()] {
            squares_are_doubles &= &v * &v == v.scale(2);
        }
    }

    let mut net_identity = true;
    for c in lo..=hi {
        let ec = ECVector::e(c);
        let mix = &(&(&ec + &ECVector::e(c - 3)) + &ECVector::e(c + 3)) + &b_bar;
        let expect = ECVector::new(ZERO, [(c - 2, AB), (c + 1, AB)]);
        net_identity &= &ec * &mix == expect;
    }

    let mut punctured_ghost_formula = true;
    for m in lo..=hi {
        let rebuilt = &(&(&(&b_bar * &ECVector::a_bar(m))
            + &(&ECVector::e(m - 1) * &ECVector::e(m + 1)))
            + &(&ECVector::e(m) * &ECVector::e(m + 2)))
            + &ECVector::spike(m, B2);
        punctured_ghost_formula &= rebuilt == ECVector::punctured_ghost(m);
    }
    // Compact variant special to index 1, with only one e-product.
    punctured_ghost_formula &= &(&(&b_bar * &ECVector::a_bar(0))
        + &(&ECVector::e(-1) * &ECVector::e(1)))
        + &ECVector::spike(0, B2)
        == ECVector::punctured_ghost(1);

    let pass = e_support_table
        && a_bar_telescopes
        && product_table
        && squares_are_doubles
        && net_identity
        && punctured_ghost_formula;
    VectorIdentityReport {
        range_lo: lo,
        range_hi: hi,
        e_support_table,
        a_bar_telescopes,
        product_table,
        squares_are_doubles,
        net_identity,
        punctured_ghost_formula,
        pass,
    }
}

/// Componentwise embedding of the base ring into `(Z4)^3`, used by the linear
/// solver: `(alpha, beta, gamma) -> (alpha, beta, 2*gamma)`. Additive and
/// injective, and doubling stays inside the image.
pub fn embed_z4(x: RElem) -> [u8; 3] {
    let (alpha, beta, gamma) = x.coords();
    [alpha, beta, 2 * gamma]
}

/// Partial inverse of [`embed_z4`]; `None` when the last entry is odd.
pub fn unembed_z4(v: [u8; 3]) -> Option<RElem> {
    if !v[2].is_multiple_of(2) {
        return None;
    }
    Some(RElem::from_coords(v[0] as i64, v[1] as i64, (v[2] / 2) as i64))
}
