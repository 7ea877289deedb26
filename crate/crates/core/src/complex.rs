//! Free complexes over presented rings: shape checks, d² = 0, and
//! homology-vanishing via syzygies and lifting.

use crate::limits::{CapExceeded, GbLimits};
use crate::module::{MatrixJson, ModuleMatrix, ModuleSolver};
use crate::ring::Ring;
use serde::Serialize;

/// A complex of free modules `0 → F_n → … → F_1 → F_0`, with `diffs[i]` the
/// differential `∂_{i+1}: F_{i+1} → F_i`.
#[derive(Debug, Clone)]
pub struct FreeComplex {
    ring: Ring,
    ranks: Vec<usize>,
    diffs: Vec<ModuleMatrix>,
    basis_labels: Option<Vec<Vec<String>>>,
}

impl FreeComplex {
    pub fn new(
        ring: Ring,
        ranks: Vec<usize>,
        diffs: Vec<ModuleMatrix>,
        basis_labels: Option<Vec<Vec<String>>>,
    ) -> Self {
        assert_eq!(diffs.len() + 1, ranks.len(), "differential count mismatch");
        for (i, d) in diffs.iter().enumerate() {
            assert_eq!(d.rows(), ranks[i], "rows of ∂_{} mismatch", i + 1);
            assert_eq!(d.cols(), ranks[i + 1], "cols of ∂_{} mismatch", i + 1);
        }
        if let Some(labels) = &basis_labels {
            assert_eq!(labels.len(), ranks.len());
            for (l, r) in labels.iter().zip(&ranks) {
                assert_eq!(l.len(), *r);
            }
        }
        FreeComplex {
            ring,
            ranks,
            diffs,
            basis_labels,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, degree: usize) -> usize {
        self.ranks.get(degree).copied().unwrap_or(0)
    }

    /// `∂_i: F_i → F_{i-1}` for `1 ≤ i ≤ len`.
    pub fn differential(&self, i: usize) -> &ModuleMatrix {
        assert!(i >= 1 && i <= self.len(), "no differential ∂_{i}");
        &self.diffs[i - 1]
    }

    pub fn basis_labels(&self) -> Option<&Vec<Vec<String>>> {
        self.basis_labels.as_ref()
    }

    /// True iff every composite `∂_i ∘ ∂_{i+1}` vanishes modulo relations.
    pub fn check_d_squared(&self) -> bool {
        for i in 1..self.len() {
            if !self.differential(i).compose(self.differential(i + 1)).is_zero() {
                return false;
            }
        }
        true
    }

    /// True iff `ker ∂_i ⊆ im ∂_{i+1}`: the syzygies of `∂_i` each lift
    /// through `∂_{i+1}`.
    pub fn homology_is_zero_at(&self, i: usize, limits: &GbLimits) -> Result<bool, CapExceeded> {
        assert!(i >= 1 && i <= self.len(), "degree out of range");
        let syz = crate::module::syzygies(self.differential(i), limits)?;
        if syz.cols() == 0 {
            return Ok(true);
        }
        if i == self.len() {
            // nothing maps in: homology vanishes only if there are no cycles
            return Ok(false);
        }
        let solver = ModuleSolver::new(self.differential(i + 1), limits)?;
        for c in 0..syz.cols() {
            if solver.solve(&syz.column(c)).is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> ComplexJson {
        ComplexJson {
            ranks: self.ranks.clone(),
            differentials: self.diffs.iter().map(MatrixJson::from).collect(),
            basis_labels: self.basis_labels.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ComplexJson {
    pub ranks: Vec<usize>,
    pub differentials: Vec<MatrixJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis_labels: Option<Vec<Vec<String>>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDesc;
    use crate::monomial::MonomialOrder;
    use crate::parser::parse_poly;
    use crate::poly::Poly;
    use crate::ring::RingPresentation;

    fn koszul_xy(ring: &Ring, flip_sign: bool) -> FreeComplex {
        let x = parse_poly("x", ring).unwrap();
        let y = parse_poly("y", ring).unwrap();
        let d1 = ModuleMatrix::new(ring.clone(), 1, 2, vec![x.clone(), y.clone()]);
        let top = if flip_sign { y.clone() } else { y.neg() };
        let d2 = ModuleMatrix::new(ring.clone(), 2, 1, vec![top, x.clone()]);
        FreeComplex::new(ring.clone(), vec![1, 2, 1], vec![d1, d2], None)
    }

    #[test]
    fn koszul_d_squared() {
        let r = RingPresentation::polynomial(
            FieldDesc::Q,
            vec!["x".into(), "y".into()],
            MonomialOrder::Grevlex,
        );
        assert!(koszul_xy(&r, false).check_d_squared());
        assert!(!koszul_xy(&r, true).check_d_squared());
    }

    #[test]
    fn koszul_acyclic_for_regular_sequence() {
        let r = RingPresentation::polynomial(
            FieldDesc::Q,
            vec!["x".into(), "y".into()],
            MonomialOrder::Grevlex,
        );
        let c = koszul_xy(&r, false);
        let lim = GbLimits::default();
        assert!(c.homology_is_zero_at(1, &lim).unwrap());
        assert!(c.homology_is_zero_at(2, &lim).unwrap());
    }

    #[test]
    fn koszul_on_x_x_has_homology() {
        let r = RingPresentation::polynomial(
            FieldDesc::Q,
            vec!["x".into(), "y".into()],
            MonomialOrder::Grevlex,
        );
        let x = parse_poly("x", &r).unwrap();
        let d1 = ModuleMatrix::new(r.clone(), 1, 2, vec![x.clone(), x.clone()]);
        let d2 = ModuleMatrix::new(r.clone(), 2, 1, vec![x.neg(), x.clone()]);
        let c = FreeComplex::new(r.clone(), vec![1, 2, 1], vec![d1, d2], None);
        assert!(c.check_d_squared());
        let lim = GbLimits::default();
        // the syzygy (1, -1) of [x, x] does not lift through ∂₂ = (-x, x)
        assert!(!c.homology_is_zero_at(1, &lim).unwrap());
    }

    #[test]
    fn zero_column_matrix_shapes() {
        let r = RingPresentation::polynomial(
            FieldDesc::Q,
            vec!["x".into()],
            MonomialOrder::Grevlex,
        );
        let d1 = ModuleMatrix::new(r.clone(), 1, 1, vec![parse_poly("x", &r).unwrap()]);
        let c = FreeComplex::new(r.clone(), vec![1, 1], vec![d1], None);
        assert!(c.check_d_squared());
        let lim = GbLimits::default();
        // x is a nonzerodivisor: no cycles in degree 1
        assert!(c.homology_is_zero_at(1, &lim).unwrap());
        let _ = Poly::zero();
    }
}
