//! Worklist closure of a windowed generating family under `+`, negation
//! and `*`, with provenance for every element found.
//!
//! Window vectors pack into a `u64` at 5 bits per block, so pairwise
//! operations run off the base ring's operation tables without unpacking.
//! The closure records how each element first arose ([`Prov`]); that record
//! replays any ring map from generator images to the whole element table in
//! linear time, and unwinds into a symbolic witness ([`WinClosure::expr_for`]).
//!
//! Single-threaded on purpose: the element order, ids and provenance are part
//! of the deterministic output.

use crate::ecvec::{FiniteVec, Window};
use crate::expr::{Expr, GenId};
use crate::family::d_generators;
use crate::ring::{self, RElem};
use std::collections::{HashMap, HashSet};
use std::fmt;
use thiserror::Error;

/// Hard cap: `5 * blocks` bits must fit a `u64` code.
pub const MAX_BLOCKS: usize = 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClosureError {
    #[error("window spans {blocks} blocks; packed codes support at most {MAX_BLOCKS}")]
    WindowTooWide { blocks: usize },
    #[error(
        "closure budget of {budget} elements exhausted: {found} found, {processed} processed"
    )]
    BudgetExceeded {
        budget: usize,
        found: usize,
        processed: usize,
    },
}

/// How an element first arose during the closure run. Operand ids always
/// precede the element's own id, so one forward pass replays the whole table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Prov {
    Zero,
    Gen(u32),
    Neg(u32),
    Add(u32, u32),
    Mul(u32, u32),
}

pub(crate) fn pack(v: &FiniteVec) -> u64 {
    v.values()
        .iter()
        .enumerate()
        .fold(0u64, |acc, (k, x)| acc | (x.code() as u64) << (5 * k))
}

pub(crate) fn unpack(code: u64, w: Window) -> FiniteVec {
    let mut k = 0;
    FiniteVec::from_fn(w, |_| {
        let x = RElem::from_code(((code >> (5 * k)) & 31) as u8);
        k += 1;
        x
    })
}

pub(crate) fn zip_packed(x: u64, y: u64, blocks: usize, table: &[[u8; 32]; 32]) -> u64 {
    let mut r = 0u64;
    for k in 0..blocks {
        let shift = 5 * k;
        let xc = ((x >> shift) & 31) as usize;
        let yc = ((y >> shift) & 31) as usize;
        r |= (table[xc][yc] as u64) << shift;
    }
    r
}

fn neg_packed(x: u64, blocks: usize) -> u64 {
    let mut r = 0u64;
    for k in 0..blocks {
        let shift = 5 * k;
        r |= (ring::NEG_TABLE[((x >> shift) & 31) as usize] as u64) << shift;
    }
    r
}

// Membership probes dominate the run; up to 25 code bits a flat bitset keeps
// them at one indexed load, beyond that (windows that can only ever end in a
// budget abort) a hash set serves.
enum Seen {
    Direct(Vec<u64>),
    Hashed(HashSet<u64>),
}

impl Seen {
    fn new(code_bits: usize) -> Seen {
        if code_bits <= 25 {
            Seen::Direct(vec![0u64; 1 << (code_bits.max(6) - 6)])
        } else {
            Seen::Hashed(HashSet::new())
        }
    }

    /// True when the code was absent (and is now recorded).
    fn insert(&mut self, code: u64) -> bool {
        match self {
            Seen::Direct(bits) => {
                let word = (code >> 6) as usize;
                let mask = 1u64 << (code & 63);
                let fresh = bits[word] & mask == 0;
                bits[word] |= mask;
                fresh
            }
            Seen::Hashed(set) => set.insert(code),
        }
    }
}

/// The closed element table for one window.
pub struct WinClosure {
    window: Window,
    gens: Vec<(GenId, FiniteVec)>,
    elements: Vec<u64>,
    prov: Vec<Prov>,
    index: HashMap<u64, u32>,
}

impl fmt::Debug for WinClosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WinClosure")
            .field("window", &self.window)
            .field("len", &self.elements.len())
            .finish_non_exhaustive()
    }
}

/// Close the standard family on `window` under ring operations, giving up as
/// soon as more than `budget` elements exist.
pub fn close(window: Window, budget: usize) -> Result<WinClosure, ClosureError> {
    let blocks = window.len();
    if blocks > MAX_BLOCKS {
        return Err(ClosureError::WindowTooWide { blocks });
    }
    let gens = d_generators(window);

    let mut elements: Vec<u64> = Vec::new();
    let mut prov: Vec<Prov> = Vec::new();
    let mut index: HashMap<u64, u32> = HashMap::new();
    let mut seen = Seen::new(5 * blocks);

    let insert = |code: u64,
                      p: Prov,
                      elements: &mut Vec<u64>,
                      prov: &mut Vec<Prov>,
                      index: &mut HashMap<u64, u32>,
                      seen: &mut Seen,
                      processed: usize|
     -> Result<(), ClosureError> {
        if seen.insert(code) {
            if elements.len() >= budget {
                return Err(ClosureError::BudgetExceeded {
                    budget,
                    found: elements.len() + 1,
                    processed,
                });
            }
            index.insert(code, elements.len() as u32);
            elements.push(code);
            prov.push(p);
        }
        Ok(())
    };

    insert(0, Prov::Zero, &mut elements, &mut prov, &mut index, &mut seen, 0)?;
    for (k, (_, v)) in gens.iter().enumerate() {
        insert(
            pack(v),
            Prov::Gen(k as u32),
            &mut elements,
            &mut prov,
            &mut index,
            &mut seen,
            0,
        )?;
    }

    let mut head = 0usize;
    while head < elements.len() {
        let x = elements[head];
        insert(
            neg_packed(x, blocks),
            Prov::Neg(head as u32),
            &mut elements,
            &mut prov,
            &mut index,
            &mut seen,
            head,
        )?;
        // Pairing against the snapshot is exhaustive: for any pair, the later
        // of the two sees the earlier when its own turn comes.
        let snapshot = elements.len();
        for j in 0..snapshot {
            let y = elements[j];
            insert(
                zip_packed(x, y, blocks, &ring::ADD_TABLE),
                Prov::Add(head as u32, j as u32),
                &mut elements,
                &mut prov,
                &mut index,
                &mut seen,
                head,
            )?;
            insert(
                zip_packed(x, y, blocks, &ring::MUL_TABLE),
                Prov::Mul(head as u32, j as u32),
                &mut elements,
                &mut prov,
                &mut index,
                &mut seen,
                head,
            )?;
        }
        head += 1;
    }

    Ok(WinClosure { window, gens, elements, prov, index })
}

impl WinClosure {
    pub fn window(&self) -> Window {
        self.window
    }

    #[allow(clippy::len_without_is_empty)] // always contains at least zero
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[(GenId, FiniteVec)] {
        &self.gens
    }

    pub fn provenance(&self) -> &[Prov] {
        &self.prov
    }

    pub fn packed_elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn element(&self, id: u32) -> FiniteVec {
        unpack(self.elements[id as usize], self.window)
    }

    /// Id of a vector if the closure reached it.
    pub fn find(&self, v: &FiniteVec) -> Option<u32> {
        assert_eq!(v.window(), self.window, "window mismatch");
        self.index.get(&pack(v)).copied()
    }

    pub(crate) fn find_packed(&self, code: u64) -> Option<u32> {
        self.index.get(&code).copied()
    }

    pub fn contains(&self, v: &FiniteVec) -> bool {
        self.find(v).is_some()
    }

    /// Unwind provenance into a symbolic witness for the element.
    pub fn expr_for(&self, id: u32) -> Expr {
        match self.prov[id as usize] {
            Prov::Zero => Expr::Zero,
            Prov::Gen(k) => Expr::gen(self.gens[k as usize].0),
            Prov::Neg(x) => self.expr_for(x).neg(),
            Prov::Add(x, y) => self.expr_for(x).add(self.expr_for(y)),
            Prov::Mul(x, y) => self.expr_for(x).mul(self.expr_for(y)),
        }
    }

    /// Replay a generator-image assignment through the provenance table,
    /// producing the image of every element. `gen_images[k]` is the image of
    /// generator `k` in `Z8`; all arithmetic is mod 8.
    pub fn replay_images(&self, gen_images: &[u8]) -> Vec<u8> {
        assert_eq!(gen_images.len(), self.gens.len());
        let mut images = Vec::with_capacity(self.elements.len());
        for p in &self.prov {
            let img = match *p {
                Prov::Zero => 0,
                Prov::Gen(k) => gen_images[k as usize] % 8,
                Prov::Neg(x) => (8 - images[x as usize]) % 8,
                Prov::Add(x, y) => (images[x as usize] + images[y as usize]) % 8,
                Prov::Mul(x, y) => (images[x as usize] * images[y as usize]) % 8,
            };
            images.push(img);
        }
        images
    }
}
