//! Undeformed gl(2/1): classical induced modules, the q -> 1 comparison and
//! an exact rational model used as an anchor for the whole suite.

pub mod exact;

use crate::error::Result;
use crate::evenaction::Generator;
use crate::gzbasis::HighestWeight;
use crate::induced::{build_module, MatrixSet, Normalization};
use crate::qarith::{QContext, Undeformed};

pub use exact::{
    defining_rep_equivalence, defining_representation, exact_classical_module, exact_factor_module,
    super_bracket_violations, weyl_matrix, weyl_parity, ExactModule,
};

/// `build_module` with every q-number replaced by its argument and every
/// power of `q` by 1.
pub fn classical_module(hw: &HighestWeight, norm: &Normalization) -> Result<MatrixSet> {
    build_module(&Undeformed::default(), norm, hw)
}

/// Per-generator maximal entry deviation between the deformed module at `q`
/// and the classical module.
pub fn limit_report(hw: &HighestWeight, q: f64, norm: &Normalization) -> Result<Vec<(Generator, f64)>> {
    let ctx = QContext::new(q)?;
    let quantum = build_module(&ctx, norm, hw)?;
    let classical = classical_module(hw, norm)?;
    quantum
        .iter()
        .map(|(g, m)| Ok((g, m.max_abs_diff(classical.get(g)?))))
        .collect()
}

/// Largest entry deviation over all generators; tends to 0 as `q -> 1`.
pub fn limit_compare(hw: &HighestWeight, q: f64, norm: &Normalization) -> Result<f64> {
    Ok(limit_report(hw, q, norm)?.into_iter().fold(0.0, |m, (_, d)| m.max(d)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hw(a: f64, b: f64, c: f64) -> HighestWeight {
        HighestWeight::new(a, b, c).unwrap()
    }

    #[test]
    fn limit_examples() {
        let norm = Normalization::default();
        assert!(limit_compare(&hw(1.0, 0.0, 1.0), 1.0 + 1e-8, &norm).unwrap() <= 1e-4);
        assert!(limit_compare(&hw(2.0, 0.0, 0.5), 1.0 + 1e-6, &norm).unwrap() <= 1e-3);
        for q in [1.0 + 1e-3, 1.7, 3.0] {
            let report = limit_report(&hw(0.0, 0.0, 0.0), q, &norm).unwrap();
            for (g, d) in report {
                if matches!(g, Generator::E11 | Generator::E22 | Generator::E33 | Generator::H1 | Generator::H2) {
                    assert_eq!(d, 0.0);
                }
            }
        }
    }

    #[test]
    fn limit_decreases_with_epsilon() {
        let norm = Normalization::new(2.0, 1.0, 0.5).unwrap();
        for w in [hw(1.0, 0.0, 1.0), hw(3.0, 1.0, 0.37), hw(4.0, 0.0, -5.0)] {
            let devs: Vec<f64> = [1e-2, 1e-4, 1e-6]
                .iter()
                .map(|e| limit_compare(&w, 1.0 + e, &norm).unwrap())
                .collect();
            assert!(devs[0] > devs[1] && devs[1] > devs[2], "{w}: {devs:?}");
        }
    }

    #[test]
    fn classical_block_structure_matches_quantum() {
        let norm = Normalization::default();
        let w = hw(3.0, 1.0, 0.37);
        let classical = classical_module(&w, &norm).unwrap();
        let quantum = build_module(&QContext::new(1.7).unwrap(), &norm, &w).unwrap();
        for (g, m) in classical.iter().filter(|(g, _)| !matches!(g, Generator::E13 | Generator::E31)) {
            let qm = quantum.get(g).unwrap();
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    assert_eq!(*m.get(r, c) == 0.0, *qm.get(r, c) == 0.0, "{g} ({r},{c})");
                }
            }
        }
    }
}
