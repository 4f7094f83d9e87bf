//! Search for locally-quadratic sets with no global quadratic witness.
//!
//! A hit would be a subset of F2^n that restricts to a quadratic zero set on
//! every affine 3-flat yet is no quadratic zero set itself.  Dimension 3 rules
//! this out structurally (the only 3-flat is the whole space), dimension 4 by
//! an exhaustive scan of all 65536 subsets, and higher dimensions are probed
//! by a resumable randomized descent on the number of failing flats.  A hit
//! would be emitted as a re-checkable certificate; none has ever appeared.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cert::{check as check_cert, local_witnesses_for, Certificate};
use crate::quad::{affine_3_flats, has_q, has_q3, MAX_N};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SindiError {
    #[error("exhaustive scanning covers dimensions 3 and 4 only, got {dim}")]
    ExhaustiveTooLarge { dim: usize },
    #[error("randomized search covers dimensions 4..={max}, got {dim}", max = MAX_N)]
    DimOutOfRange { dim: usize },
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SindiVerdict {
    /// The single 3-flat of F2^3 is the whole space, so local and global
    /// quadratic are the same property by definition; checked over all masks.
    StructurallyAbsent { dim: usize, checked_masks: usize },
    /// Every subset was classified; the locally quadratic ones are exactly
    /// the globally quadratic ones.
    ExhaustivelyAbsent {
        dim: usize,
        q_count: usize,
        q3_count: usize,
    },
    /// The randomized search exhausted its step budget without a hit.
    NotFound {
        dim: usize,
        attempts: u64,
        q3_hits: u64,
        restarts: u64,
    },
    Found { dim: usize, mask: u64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct SindiReport {
    pub dim: usize,
    pub mode: String,
    pub verdict: SindiVerdict,
    pub certificate: Option<Certificate>,
    pub pass: bool,
}

/// Dimension 3: local equals global by construction; verify it anyway.
pub fn structural_scan() -> SindiReport {
    let flats = affine_3_flats(3);
    let single_flat = flats.len() == 1 && flats[0].mask() == 0xFF;
    let mut q_count = 0usize;
    let mut agree = true;
    for m in 0..256u64 {
        let q = has_q(3, m).is_some();
        if q {
            q_count += 1;
        }
        if has_q3(3, m) != q {
            agree = false;
        }
    }
    SindiReport {
        dim: 3,
        mode: "structural".into(),
        verdict: SindiVerdict::StructurallyAbsent {
            dim: 3,
            checked_masks: 256,
        },
        certificate: None,
        pass: single_flat && agree && q_count == 128,
    }
}

/// Classify every subset of F2^dim.  A hit would surface here as a mask that
/// passes every flat but defeats the global solver.
pub fn exhaustive_scan(dim: usize) -> Result<SindiReport, SindiError> {
    if dim == 3 {
        return Ok(structural_scan());
    }
    if dim != 4 {
        return Err(SindiError::ExhaustiveTooLarge { dim });
    }

    let merged = (0u64..1 << 16)
        .into_par_iter()
        .fold(
            || (0usize, 0usize, Vec::new(), true),
            |(mut q, mut q3, mut hits, mut contained), m| {
                let global = has_q(4, m).is_some();
                let local = has_q3(4, m);
                if global {
                    q += 1;
                    if !local {
                        contained = false;
                    }
                }
                if local {
                    q3 += 1;
                    if !global {
                        hits.push(m);
                    }
                }
                (q, q3, hits, contained)
            },
        )
        .reduce(
            || (0, 0, Vec::new(), true),
            |a, b| {
                let mut hits = a.2;
                hits.extend(b.2);
                (a.0 + b.0, a.1 + b.1, hits, a.3 && b.3)
            },
        );
    let (q_count, q3_count, mut hits, contained) = merged;
    hits.sort_unstable();

    if let Some(&mask) = hits.first() {
        let certificate = local_witnesses_for(4, mask).map(|local_witnesses| {
            Certificate::LocalGlobalCounterexample {
                dim: 4,
                mask,
                local_witnesses,
            }
        });
        let cert_ok = certificate
            .as_ref()
            .is_some_and(|c| check_cert(c).is_ok());
        return Ok(SindiReport {
            dim: 4,
            mode: "exhaustive".into(),
            verdict: SindiVerdict::Found { dim: 4, mask },
            certificate,
            pass: contained && cert_ok,
        });
    }

    Ok(SindiReport {
        dim: 4,
        mode: "exhaustive".into(),
        verdict: SindiVerdict::ExhaustivelyAbsent {
            dim: 4,
            q_count,
            q3_count,
        },
        certificate: None,
        pass: contained && q_count == q3_count,
    })
}

/// Resumable cursor of the randomized search: everything needed to continue
/// a run bit-for-bit, including the generator position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchState {
    pub dim: usize,
    pub seed: u64,
    pub word_pos_hi: u64,
    pub word_pos_lo: u64,
    pub mask: u64,
    pub attempts: u64,
    pub q3_hits: u64,
    pub restarts: u64,
    pub stall: u32,
}

/// Steps a climb may move sideways before drawing a fresh start.
const STALL_LIMIT: u32 = 96;

fn full_mask(dim: usize) -> u64 {
    let points = 1u32 << dim;
    if points == 64 {
        u64::MAX
    } else {
        (1u64 << points) - 1
    }
}

fn random_mask(rng: &mut ChaCha8Rng, dim: usize) -> u64 {
    rng.gen::<u64>() & full_mask(dim)
}

pub fn fresh_state(dim: usize, seed: u64) -> Result<SearchState, SindiError> {
    if !(4..=MAX_N).contains(&dim) {
        return Err(SindiError::DimOutOfRange { dim });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mask = random_mask(&mut rng, dim);
    let pos = rng.get_word_pos();
    Ok(SearchState {
        dim,
        seed,
        word_pos_hi: (pos >> 64) as u64,
        word_pos_lo: pos as u64,
        mask,
        attempts: 0,
        q3_hits: 0,
        restarts: 0,
        stall: 0,
    })
}

/// Descent engine.  The per-flat intersection parity is linear over symmetric
/// difference, so the failing-flat pattern of any move is a fixed bit row;
/// maintaining the current pattern as a bitset makes every candidate delta a
/// handful of xors and popcounts.
struct Climber {
    dim: usize,
    mask: u64,
    /// bit per flat: current intersection parity is odd
    fail_bits: Vec<u64>,
    fails: u32,
    /// candidate moves: the mask to xor in, and its flat-parity row
    moves: Vec<(u64, Vec<u64>)>,
    /// flat-parity row of a single point, indexed by point
    point_rows: Vec<Vec<u64>>,
}

fn weight(bits: &[u64]) -> u32 {
    bits.iter().map(|w| w.count_ones()).sum()
}

impl Climber {
    fn new(dim: usize, mask: u64) -> Climber {
        let flats = affine_3_flats(dim);
        let words = flats.len().div_ceil(64);
        let points = 1u32 << dim;

        let mut point_rows = vec![vec![0u64; words]; points as usize];
        for (f, flat) in flats.iter().enumerate() {
            for &p in &flat.points {
                point_rows[p as usize][f / 64] |= 1 << (f % 64);
            }
        }

        // moves: every single point, and every whole flat (whose row is the
        // parity of its intersection with each flat — much sparser, so flat
        // moves travel close to the kernel while point moves fine-tune)
        let mut moves = Vec::with_capacity(points as usize + flats.len());
        for p in 0..points {
            moves.push((1u64 << p, point_rows[p as usize].clone()));
        }
        for a in flats {
            let mut row = vec![0u64; words];
            for (f, b) in flats.iter().enumerate() {
                if (a.mask() & b.mask()).count_ones() & 1 == 1 {
                    row[f / 64] |= 1 << (f % 64);
                }
            }
            moves.push((a.mask(), row));
        }

        let mut c = Climber {
            dim,
            mask: 0,
            fail_bits: vec![0u64; words],
            fails: 0,
            moves,
            point_rows,
        };
        c.reset_to(mask);
        c
    }

    fn reset_to(&mut self, mask: u64) {
        self.mask = mask;
        self.fail_bits.iter_mut().for_each(|w| *w = 0);
        for p in 0..1u32 << self.dim {
            if mask >> p & 1 == 1 {
                for (w, row) in self.fail_bits.iter_mut().zip(&self.point_rows[p as usize]) {
                    *w ^= row;
                }
            }
        }
        self.fails = weight(&self.fail_bits);
    }

    fn apply(&mut self, mv: usize) {
        let (delta_mask, row) = &self.moves[mv];
        self.mask ^= delta_mask;
        for (w, r) in self.fail_bits.iter_mut().zip(row) {
            *w ^= r;
        }
        self.fails = weight(&self.fail_bits);
    }

    /// One descent step; `Some(mask)` when the current set is locally
    /// quadratic but globally refuted.
    fn step(&mut self, rng: &mut ChaCha8Rng, state: &mut SearchState) -> Option<u64> {
        if self.fails == 0 {
            debug_assert!(has_q3(self.dim, self.mask));
            if has_q(self.dim, self.mask).is_none() {
                return Some(self.mask);
            }
            state.q3_hits += 1;
            state.restarts += 1;
            state.stall = 0;
            let fresh = random_mask(rng, self.dim);
            self.reset_to(fresh);
            return None;
        }

        let mut best = i64::MAX;
        let mut candidates: Vec<usize> = Vec::new();
        for (m, (_, row)) in self.moves.iter().enumerate() {
            let mut after = 0u32;
            for (w, r) in self.fail_bits.iter().zip(row) {
                after += (w ^ r).count_ones();
            }
            let delta = after as i64 - self.fails as i64;
            if delta < best {
                best = delta;
                candidates.clear();
            }
            if delta == best {
                candidates.push(m);
            }
        }

        let pick = candidates[rng.gen_range(0..candidates.len())];
        self.apply(pick);
        if best < 0 {
            state.stall = 0;
        } else {
            state.stall += 1;
        }
        if state.stall > STALL_LIMIT {
            state.restarts += 1;
            state.stall = 0;
            let fresh = random_mask(rng, self.dim);
            self.reset_to(fresh);
        }
        None
    }
}

/// Continue a randomized search for up to `steps` more steps.
pub fn run_random(mut state: SearchState, steps: u64) -> (SindiReport, SearchState) {
    assert!((4..=MAX_N).contains(&state.dim));
    let mut rng = ChaCha8Rng::seed_from_u64(state.seed);
    rng.set_word_pos(((state.word_pos_hi as u128) << 64) | state.word_pos_lo as u128);
    let mut climber = Climber::new(state.dim, state.mask);

    let mut found = None;
    for _ in 0..steps {
        state.attempts += 1;
        if let Some(mask) = climber.step(&mut rng, &mut state) {
            found = Some(mask);
            break;
        }
    }

    state.mask = climber.mask;
    let pos = rng.get_word_pos();
    state.word_pos_hi = (pos >> 64) as u64;
    state.word_pos_lo = pos as u64;

    let report = match found {
        Some(mask) => {
            let certificate = local_witnesses_for(state.dim, mask).map(|local_witnesses| {
                Certificate::LocalGlobalCounterexample {
                    dim: state.dim,
                    mask,
                    local_witnesses,
                }
            });
            let cert_ok = certificate
                .as_ref()
                .is_some_and(|c| check_cert(c).is_ok());
            SindiReport {
                dim: state.dim,
                mode: "random".into(),
                verdict: SindiVerdict::Found {
                    dim: state.dim,
                    mask,
                },
                certificate,
                pass: cert_ok,
            }
        }
        None => SindiReport {
            dim: state.dim,
            mode: "random".into(),
            verdict: SindiVerdict::NotFound {
                dim: state.dim,
                attempts: state.attempts,
                q3_hits: state.q3_hits,
                restarts: state.restarts,
            },
            certificate: None,
            pass: true,
        },
    };
    (report, state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::derive_seed;

    #[test]
    fn dimension_3_is_structurally_settled() {
        let r = structural_scan();
        assert!(r.pass);
        assert!(matches!(
            r.verdict,
            SindiVerdict::StructurallyAbsent {
                dim: 3,
                checked_masks: 256
            }
        ));
        assert!(r.certificate.is_none());
    }

    #[test]
    fn dimension_4_scan_is_exhaustive_and_absent() {
        let r = exhaustive_scan(4).unwrap();
        assert!(r.pass);
        match r.verdict {
            SindiVerdict::ExhaustivelyAbsent {
                dim,
                q_count,
                q3_count,
            } => {
                assert_eq!(dim, 4);
                assert_eq!(q_count, 2048);
                assert_eq!(q3_count, 2048);
            }
            other => panic!("unexpected verdict {other:?}"),
        }
    }

    #[test]
    fn exhaustive_scan_rejects_large_dimensions() {
        assert!(matches!(
            exhaustive_scan(5),
            Err(SindiError::ExhaustiveTooLarge { dim: 5 })
        ));
        assert_eq!(fresh_state(3, 0), Err(SindiError::DimOutOfRange { dim: 3 }));
        assert_eq!(fresh_state(7, 0), Err(SindiError::DimOutOfRange { dim: 7 }));
    }

    #[test]
    fn random_search_reaches_locally_quadratic_sets() {
        let state = fresh_state(4, derive_seed(0, "sindi-dim4")).unwrap();
        let (report, state) = run_random(state, 5_000);
        assert!(report.pass);
        assert!(matches!(report.verdict, SindiVerdict::NotFound { .. }));
        assert!(
            state.q3_hits >= 1,
            "descent should reach the kernel within budget: {state:?}"
        );
        assert_eq!(state.attempts, 5_000);
    }

    #[test]
    fn random_search_probes_dimension_5_without_a_hit() {
        let state = fresh_state(5, derive_seed(0, "sindi-dim5")).unwrap();
        let (report, state) = run_random(state, 2_000);
        assert!(report.pass);
        assert!(matches!(report.verdict, SindiVerdict::NotFound { .. }));
        assert!(state.q3_hits >= 1, "{state:?}");
    }

    #[test]
    fn resumed_runs_replay_bit_for_bit() {
        let seed = derive_seed(0, "sindi-resume");
        let (r_full, s_full) = run_random(fresh_state(5, seed).unwrap(), 600);
        let (_, s_mid) = run_random(fresh_state(5, seed).unwrap(), 250);
        let json = serde_json::to_string(&s_mid).unwrap();
        let restored: SearchState = serde_json::from_str(&json).unwrap();
        assert_eq!(restored, s_mid);
        let (r_rest, s_rest) = run_random(restored, 350);
        assert_eq!(s_full, s_rest);
        match (&r_full.verdict, &r_rest.verdict) {
            (
                SindiVerdict::NotFound {
                    attempts: a1,
                    q3_hits: h1,
                    restarts: re1,
                    ..
                },
                SindiVerdict::NotFound {
                    attempts: a2,
                    q3_hits: h2,
                    restarts: re2,
                    ..
                },
            ) => {
                assert_eq!((a1, h1, re1), (a2, h2, re2));
            }
            other => panic!("unexpected verdicts {other:?}"),
        }
    }
}
