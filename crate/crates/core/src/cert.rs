//! Re-checkable certificates for the two constructive claims.
//!
//! A certificate carries everything needed to re-establish its claim from
//! scratch: the checker re-derives the target on its own and never trusts
//! the machinery that produced the certificate.  Witness expressions are
//! re-evaluated with bare generator arithmetic, and counterexample masks are
//! re-solved flat by flat and refuted globally.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ecvec::{ECVector, Window};
use crate::expr::Expr;
use crate::quad::{affine_3_flats, has_q, Quadratic};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `expression`, evaluated from bare generators and restricted to
    /// `window`, reproduces the ghost punctured at `index`.
    PuncturedWitness {
        window: Window,
        index: i64,
        expression: Expr,
    },
    /// `mask` restricts to a quadratic zero set on every affine 3-flat of
    /// F2^dim — one local witness per flat, in flat order — while no global
    /// quadratic cuts it.
    LocalGlobalCounterexample {
        dim: usize,
        mask: u64,
        local_witnesses: Vec<Quadratic>,
    },
}

#[derive(Debug, Error, PartialEq)]
pub enum CertError {
    #[error("expression evaluates away from the punctured target at {index} on {window}")]
    PuncturedMismatch { window: Window, index: i64 },
    #[error("witness count {got} does not cover the {expected} flats of dimension {dim}")]
    FlatCount {
        dim: usize,
        got: usize,
        expected: usize,
    },
    #[error("local witness {flat} has {vars} variables, expected 3")]
    WitnessArity { flat: usize, vars: usize },
    #[error("local witness {flat} does not cut the restriction of the mask")]
    LocalMismatch { flat: usize },
    #[error("a global quadratic cuts the mask, so it is no counterexample")]
    GloballyQuadratic,
}

/// What a successful check established.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertSummary {
    pub kind: String,
    pub detail: String,
}

pub fn check(cert: &Certificate) -> Result<CertSummary, CertError> {
    match cert {
        Certificate::PuncturedWitness {
            window,
            index,
            expression,
        } => {
            let target = ECVector::punctured_ghost(*index).restrict(*window);
            if expression.eval_window(*window) != target {
                return Err(CertError::PuncturedMismatch {
                    window: *window,
                    index: *index,
                });
            }
            Ok(CertSummary {
                kind: "punctured_witness".into(),
                detail: format!("ghost punctured at {index} reproduced on {window}"),
            })
        }
        Certificate::LocalGlobalCounterexample {
            dim,
            mask,
            local_witnesses,
        } => {
            let flats = affine_3_flats(*dim);
            if local_witnesses.len() != flats.len() {
                return Err(CertError::FlatCount {
                    dim: *dim,
                    got: local_witnesses.len(),
                    expected: flats.len(),
                });
            }
            for (i, (flat, q)) in flats.iter().zip(local_witnesses).enumerate() {
                if q.n() != 3 {
                    return Err(CertError::WitnessArity {
                        flat: i,
                        vars: q.n(),
                    });
                }
                if q.solution_mask() != flat.local_mask(*mask) as u64 {
                    return Err(CertError::LocalMismatch { flat: i });
                }
            }
            if has_q(*dim, *mask).is_some() {
                return Err(CertError::GloballyQuadratic);
            }
            Ok(CertSummary {
                kind: "local_global_counterexample".into(),
                detail: format!(
                    "mask {mask:#x} is quadratic on all {} flats of F2^{dim} but not globally",
                    flats.len()
                ),
            })
        }
    }
}

/// One local witness per affine 3-flat, when the mask is locally quadratic.
pub fn local_witnesses_for(dim: usize, mask: u64) -> Option<Vec<Quadratic>> {
    affine_3_flats(dim)
        .iter()
        .map(|flat| has_q(3, flat.local_mask(mask) as u64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::GenId;
    use crate::span::SpanSolver;

    fn punctured_cert(index: i64, lo: i64, hi: i64) -> Certificate {
        let w = Window::new(lo, hi);
        let solver = SpanSolver::build(w);
        let target = ECVector::punctured_ghost(index).restrict(w);
        let expression = solver
            .try_express(&target)
            .expect("punctured ghost restriction lies in the span");
        Certificate::PuncturedWitness {
            window: w,
            index,
            expression,
        }
    }

    #[test]
    fn punctured_witness_roundtrips_through_json_and_checks() {
        for index in [-1, 0, 1, 2] {
            let cert = punctured_cert(index, -2, 2);
            let json = serde_json::to_string(&cert).unwrap();
            let back: Certificate = serde_json::from_str(&json).unwrap();
            let summary = check(&back).expect("valid certificate must check");
            assert_eq!(summary.kind, "punctured_witness");
        }
    }

    #[test]
    fn corrupting_the_expression_is_detected() {
        let cert = punctured_cert(0, -2, 2);
        let Certificate::PuncturedWitness {
            window,
            index,
            expression,
        } = cert
        else {
            unreachable!()
        };
        let corrupted = expression.add(Expr::gen(GenId::BBar));
        let bad = Certificate::PuncturedWitness {
            window,
            index,
            expression: corrupted,
        };
        assert_eq!(
            check(&bad),
            Err(CertError::PuncturedMismatch { window, index })
        );
    }

    #[test]
    fn globally_quadratic_masks_are_rejected_as_counterexamples() {
        // A genuine quadratic zero set passes every local check, so the
        // refutation must come from the global solve.
        let mask = has_q(4, 0xFFFF).unwrap().solution_mask();
        let cert = Certificate::LocalGlobalCounterexample {
            dim: 4,
            mask,
            local_witnesses: local_witnesses_for(4, mask).unwrap(),
        };
        assert_eq!(check(&cert), Err(CertError::GloballyQuadratic));
    }

    #[test]
    fn wrong_local_witnesses_are_rejected() {
        let mask = 0xFFFFu64;
        let mut witnesses = local_witnesses_for(4, mask).unwrap();
        witnesses[7] = Quadratic::new(3, 1); // empty zero set, wrong flat cut
        let cert = Certificate::LocalGlobalCounterexample {
            dim: 4,
            mask,
            local_witnesses: witnesses,
        };
        assert_eq!(check(&cert), Err(CertError::LocalMismatch { flat: 7 }));
        let cert = Certificate::LocalGlobalCounterexample {
            dim: 4,
            mask,
            local_witnesses: Vec::new(),
        };
        assert_eq!(
            check(&cert),
            Err(CertError::FlatCount {
                dim: 4,
                got: 0,
                expected: 30
            })
        );
    }
}
