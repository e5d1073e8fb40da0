//! Generator names and the action of the even subalgebra on reduced patterns.

use std::fmt;
use std::str::FromStr;

use crate::error::{KacError, Result};
use crate::gzbasis::{lvalues, GzVector};
use crate::lincomb::LinComb;
use crate::qarith::Deformation;

/// Generators of U_q[gl(2/1)] handled by the library, including the
/// composite odd generators `E13`, `E31` and the Cartan combinations
/// `H1 = E11 - E22`, `H2 = E22 + E33`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    E11,
    E22,
    E33,
    E12,
    E21,
    E23,
    E32,
    E13,
    E31,
    H1,
    H2,
}

impl Generator {
    pub const ALL: [Generator; 11] = [
        Generator::E11,
        Generator::E22,
        Generator::E33,
        Generator::E12,
        Generator::E21,
        Generator::E23,
        Generator::E32,
        Generator::E13,
        Generator::E31,
        Generator::H1,
        Generator::H2,
    ];

    /// The nine generators `E_ij`, in the order of `(i, j)` pairs.
    pub const WEYL: [Generator; 9] = [
        Generator::E11,
        Generator::E12,
        Generator::E13,
        Generator::E21,
        Generator::E22,
        Generator::E23,
        Generator::E31,
        Generator::E32,
        Generator::E33,
    ];

    pub fn is_odd(self) -> bool {
        matches!(self, Self::E23 | Self::E32 | Self::E13 | Self::E31)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::E11 => "E11",
            Self::E22 => "E22",
            Self::E33 => "E33",
            Self::E12 => "E12",
            Self::E21 => "E21",
            Self::E23 => "E23",
            Self::E32 => "E32",
            Self::E13 => "E13",
            Self::E31 => "E31",
            Self::H1 => "H1",
            Self::H2 => "H2",
        }
    }

    /// `(i, j)` for `E_ij`, 1-based; `None` for `H1`, `H2`.
    pub fn indices(self) -> Option<(usize, usize)> {
        let name = self.name().as_bytes();
        (name[0] == b'E').then(|| ((name[1] - b'0') as usize, (name[2] - b'0') as usize))
    }

    pub fn from_indices(i: usize, j: usize) -> Option<Self> {
        Self::WEYL.into_iter().find(|g| g.indices() == Some((i, j)))
    }

    /// Shift of the `(E11, E22, E33)` weight produced by the generator.
    pub fn weight_shift(self) -> [f64; 3] {
        let mut shift = [0.0; 3];
        if let Some((i, j)) = self.indices() {
            shift[i - 1] += 1.0;
            shift[j - 1] -= 1.0;
        }
        shift
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Generator {
    type Err = KacError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| KacError::UnsupportedGenerator(s.to_string()))
    }
}

/// Which Cartan combination.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cartan {
    H1,
    H2,
}

/// Action of `E11`, `E22`, `E33`, `E12` or `E21` on a reduced pattern.
pub fn act_even<D: Deformation + ?Sized>(
    ctx: &D,
    g: Generator,
    v: &GzVector,
) -> Result<LinComb<GzVector>> {
    let drop = ctx.tol() / 100.0;
    let l = lvalues(v);
    let out = match g {
        Generator::E11 => LinComb::single(*v, l.l11 + 1.0, drop),
        Generator::E22 => LinComb::single(*v, l.l12 + l.l22 - l.l11 + 2.0, drop),
        Generator::E33 => LinComb::single(*v, l.l31 + 1.0, drop),
        Generator::E12 => match v.shift_m11(1) {
            Some(up) => {
                let c = ctx.bracket(l.l12 - l.l11) * ctx.bracket(l.l11 - l.l22);
                LinComb::single(up, non_negative_sqrt(c, l.l12 - l.l11)?, drop)
            }
            None => LinComb::zero(drop),
        },
        Generator::E21 => match v.shift_m11(-1) {
            Some(down) => {
                let c = ctx.bracket(l.l12 - l.l11 + 1.0) * ctx.bracket(l.l11 - l.l22 - 1.0);
                LinComb::single(down, non_negative_sqrt(c, l.l11 - l.l22 - 1.0)?, drop)
            }
            None => LinComb::zero(drop),
        },
        other => return Err(KacError::UnsupportedGenerator(other.to_string())),
    };
    Ok(out)
}

fn non_negative_sqrt(value: f64, arg: f64) -> Result<f64> {
    if value < 0.0 {
        return Err(KacError::Domain { arg, value });
    }
    Ok(value.sqrt())
}

/// Eigenvalue of `H1 = E11 - E22` or `H2 = E22 + E33` on a pattern.
pub fn cartan_eigenvalue(which: Cartan, v: &GzVector) -> f64 {
    let [e11, e22, e33] = v.weight();
    match which {
        Cartan::H1 => e11 - e22,
        Cartan::H2 => e22 + e33,
    }
}

pub fn act_cartan_h<D: Deformation + ?Sized>(ctx: &D, which: Cartan, v: &GzVector) -> LinComb<GzVector> {
    LinComb::single(*v, cartan_eigenvalue(which, v), ctx.tol() / 100.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gzbasis::{enumerate_basis, highest_weight_vector, HighestWeight, Submodule};
    use crate::qarith::{qfactorial, QContext};

    fn hw100() -> HighestWeight {
        HighestWeight::new(1.0, 0.0, 0.0).unwrap()
    }

    #[test]
    fn parities_and_names() {
        for g in Generator::ALL {
            assert_eq!(g.name().parse::<Generator>().unwrap(), g);
        }
        assert!(Generator::E23.is_odd() && Generator::E31.is_odd());
        assert!(!Generator::E12.is_odd() && !Generator::H2.is_odd());
        assert_eq!(Generator::E31.indices(), Some((3, 1)));
        assert_eq!(Generator::from_indices(1, 3), Some(Generator::E13));
        assert_eq!(Generator::E23.weight_shift(), [0.0, 1.0, -1.0]);
        assert!("E44".parse::<Generator>().is_err());
    }

    #[test]
    fn raising_kills_highest_weight() {
        let ctx = QContext::new(2.0).unwrap();
        for k in Submodule::ALL {
            let m = highest_weight_vector(&hw100(), k).unwrap();
            assert!(act_even(&ctx, Generator::E12, &m).unwrap().is_zero());
        }
    }

    #[test]
    fn diagonal_examples() {
        let ctx = QContext::new(2.0).unwrap();
        let m = highest_weight_vector(&hw100(), Submodule::V0).unwrap();
        let img = act_even(&ctx, Generator::E11, &m).unwrap();
        assert_eq!(img.terms(), &[(m, 1.0)]);
    }

    #[test]
    fn raising_example() {
        let ctx = QContext::new(2.0).unwrap();
        let low = GzVector::new(hw100(), Submodule::V0, 0.0).unwrap();
        let img = act_even(&ctx, Generator::E12, &low).unwrap();
        let top = low.shift_m11(1).unwrap();
        assert_eq!(img.len(), 1);
        assert!((img.coefficient(&top) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cartan_examples() {
        let ctx = QContext::new(2.0).unwrap();
        let m = highest_weight_vector(&hw100(), Submodule::V0).unwrap();
        assert_eq!(act_cartan_h(&ctx, Cartan::H1, &m).coefficient(&m), 1.0);
        assert!(act_cartan_h(&ctx, Cartan::H2, &m).is_zero());
        let low = m.shift_m11(-1).unwrap();
        assert_eq!(act_cartan_h(&ctx, Cartan::H1, &low).coefficient(&low), -1.0);
    }

    #[test]
    fn odd_generators_rejected() {
        let ctx = QContext::new(2.0).unwrap();
        let m = highest_weight_vector(&hw100(), Submodule::V0).unwrap();
        assert!(act_even(&ctx, Generator::E23, &m).is_err());
    }

    /// Lowering the local highest weight `m12 - m11` times and normalising
    /// reproduces every pattern of the submodule.
    #[test]
    fn lowering_chain_reproduces_patterns() {
        let ctx = QContext::new(1.7).unwrap();
        let hw = HighestWeight::new(4.0, 0.0, 0.37).unwrap();
        for k in Submodule::ALL {
            let top = highest_weight_vector(&hw, k).unwrap();
            for v in enumerate_basis(&hw, k) {
                let steps = v.depth();
                let mut current = LinComb::single(top, 1.0, 0.0);
                for _ in 0..steps {
                    let mut next = LinComb::zero(0.0);
                    for (w, c) in current.terms() {
                        for (u, d) in act_even(&ctx, Generator::E21, w).unwrap().terms() {
                            next.push(*u, c * d);
                        }
                    }
                    current = next;
                }
                let mid = v.mid();
                let a = (v.m11() - mid[1]).round() as u32;
                let b = (mid[0] - mid[1]).round() as u32;
                let c = steps as u32;
                let norm = (qfactorial(&ctx, a) / (qfactorial(&ctx, b) * qfactorial(&ctx, c))).sqrt();
                assert_eq!(current.len(), 1);
                assert!((norm * current.coefficient(&v) - 1.0).abs() < 1e-12, "{v}");
            }
        }
    }
}
