/// Finite linear combination of basis vectors.
///
/// Coefficients whose magnitude is at or below the drop threshold are never
/// stored, so exact zeros of the closed-form matrix elements stay exact.
#[derive(Clone, Debug, PartialEq)]
pub struct LinComb<V> {
    terms: Vec<(V, f64)>,
    drop_below: f64,
}

impl<V: PartialEq> LinComb<V> {
    pub fn zero(drop_below: f64) -> Self {
        Self { terms: Vec::new(), drop_below }
    }

    pub fn single(v: V, coeff: f64, drop_below: f64) -> Self {
        let mut out = Self::zero(drop_below);
        out.push(v, coeff);
        out
    }

    /// Adds `coeff * v`, merging with an existing term for `v`.
    pub fn push(&mut self, v: V, coeff: f64) {
        if let Some(slot) = self.terms.iter_mut().find(|(w, _)| *w == v) {
            slot.1 += coeff;
        } else {
            self.terms.push((v, coeff));
        }
        let threshold = self.drop_below;
        self.terms.retain(|(_, c)| c.abs() > threshold);
    }

    pub fn terms(&self) -> &[(V, f64)] {
        &self.terms
    }

    pub fn coefficient(&self, v: &V) -> f64 {
        self.terms.iter().find(|(w, _)| w == v).map_or(0.0, |(_, c)| *c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_and_drops() {
        let mut c = LinComb::zero(1e-12);
        c.push(1u8, 0.5);
        c.push(2u8, 1.0);
        c.push(1u8, -0.5);
        assert_eq!(c.terms(), &[(2u8, 1.0)]);
        c.push(3u8, 1e-13);
        assert_eq!(c.len(), 1);
        assert_eq!(c.coefficient(&3), 0.0);
    }
}
