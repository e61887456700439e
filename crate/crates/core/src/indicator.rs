//! Frobenius–Schur indicators from the duality morphisms.
//!
//! For a self-dual simple X with an isomorphism Φ: X → X∨,
//! V_X(Φ) = (d_X ⊗ id_{X∨}) ∘ (id_{X∨} ⊗ Φ⁻¹ ⊗ Φ) ∘ (id_{X∨} ⊗ b̃_X)
//! is ν_X · id_{X∨}.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{self, Scalar};
use crate::repcat::{Morphism, ObjectWord, RepCategory, SimpleLabel};

#[derive(Clone, Debug)]
pub struct SelfDualityWitness {
    pub label: SimpleLabel,
    pub phi: Morphism,
    pub phi_inv: Morphism,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i32", into = "i32")]
pub enum IndicatorValue {
    Quaternionic,
    NotSelfDual,
    Real,
}

impl IndicatorValue {
    pub fn value(self) -> i32 {
        match self {
            IndicatorValue::Quaternionic => -1,
            IndicatorValue::NotSelfDual => 0,
            IndicatorValue::Real => 1,
        }
    }

    /// 1 + ν − ν²
    pub fn parity_factor(self) -> i32 {
        let v = self.value();
        1 + v - v * v
    }
}

impl TryFrom<i32> for IndicatorValue {
    type Error = String;

    fn try_from(v: i32) -> std::result::Result<Self, String> {
        match v {
            -1 => Ok(IndicatorValue::Quaternionic),
            0 => Ok(IndicatorValue::NotSelfDual),
            1 => Ok(IndicatorValue::Real),
            _ => Err(format!("indicator {v} not in {{-1, 0, 1}}")),
        }
    }
}

impl From<IndicatorValue> for i32 {
    fn from(v: IndicatorValue) -> i32 {
        v.value()
    }
}

impl fmt::Display for IndicatorValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.value())
    }
}

/// Π (1 + ν_i − ν_i²)
pub fn nu_product(nus: &[IndicatorValue]) -> i32 {
    nus.iter().map(|v| v.parity_factor()).product()
}

impl SelfDualityWitness {
    /// Builds a witness from Φ ∈ Hom(X, X∨), rescaled to unit operator norm.
    pub fn from_phi(cat: &RepCategory, phi: Morphism) -> Result<Self> {
        let x = match phi.dom().factors() {
            [x] => x.clone(),
            _ => return Err(Error::HypothesisViolation(format!("Φ must start at a simple object, got {}", phi.dom()))),
        };
        if phi.cod() != &ObjectWord::simple(x.dual()) {
            return Err(Error::WordMismatch {
                context: "self-duality witness",
                expected: ObjectWord::simple(x.dual()),
                found: phi.cod().clone(),
            });
        }
        let norm = numerics::operator_norm(phi.mat());
        if norm <= cat.tol().eps_rank {
            return Err(Error::HypothesisViolation(format!("Φ for {x} vanishes")));
        }
        let phi = phi.scale(Complex64::new(1.0 / norm, 0.0));
        let inv = phi
            .mat()
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::HypothesisViolation(format!("Φ for {x} is not invertible")))?;
        let phi_inv = cat.morphism(phi.cod().clone(), phi.dom().clone(), inv)?;
        let w = SelfDualityWitness { label: x, phi, phi_inv };
        let tol = cat.tol();
        let a = w.phi.compose(&w.phi_inv)?;
        let b = w.phi_inv.compose(&w.phi)?;
        if !a.approx_eq(&cat.identity(a.dom())?, tol) || !b.approx_eq(&cat.identity(b.dom())?, tol) {
            return Err(Error::InvariantViolation(format!("Φ⁻¹ for {} is inaccurate", w.label)));
        }
        Ok(w)
    }
}

/// Solves Hom(X, X∨); `None` when X is not self-dual.
pub fn find_self_duality(cat: &RepCategory, x: &SimpleLabel) -> Result<Option<SelfDualityWitness>> {
    let xw = ObjectWord::simple(x.clone());
    let basis = cat.hom_basis(&xw, &xw.dual())?;
    match basis.len() {
        0 => Ok(None),
        1 => {
            let phi = basis.into_iter().next().expect("one element");
            SelfDualityWitness::from_phi(cat, phi).map(Some)
        }
        n => Err(Error::AbsoluteSimplicity {
            dom: xw.clone(),
            cod: xw.dual(),
            dim: n,
        }),
    }
}

/// V_X(Φ) ∈ Hom(X∨, X∨).
pub fn nu_morphism(cat: &RepCategory, w: &SelfDualityWitness) -> Result<Morphism> {
    let x = &w.label;
    let xd = ObjectWord::simple(x.dual());
    let id_xd = cat.identity(&xd)?;
    let bottom = id_xd.tensor(&cat.coevaluation_left(x)?);
    let middle = id_xd.tensor(&w.phi_inv).tensor(&w.phi);
    let top = cat.evaluation(x)?.tensor(&id_xd);
    top.compose(&middle.compose(&bottom)?)
}

/// The mirrored composite with left and right dualities exchanged:
/// (id_{X∨} ⊗ d̃_X) ∘ (Φ ⊗ Φ⁻¹ ⊗ id_{X∨}) ∘ (b_X ⊗ id_{X∨}).
pub fn nu_morphism_exchanged(cat: &RepCategory, w: &SelfDualityWitness) -> Result<Morphism> {
    let x = &w.label;
    let xd = ObjectWord::simple(x.dual());
    let id_xd = cat.identity(&xd)?;
    let bottom = cat.coevaluation(x)?.tensor(&id_xd);
    let middle = w.phi.tensor(&w.phi_inv).tensor(&id_xd);
    let top = id_xd.tensor(&cat.evaluation_left(x)?);
    top.compose(&middle.compose(&bottom)?)
}

fn extract(cat: &RepCategory, m: &Morphism, label: &SimpleLabel) -> Result<IndicatorValue> {
    let c: Scalar = numerics::scalar_multiple_of_identity(m.mat(), cat.tol())
        .ok_or_else(|| Error::NotScalar(format!("V_X(Φ) for {label}")))?;
    let tol = cat.tol();
    if tol.scalar_eq(c, Complex64::new(1.0, 0.0)) {
        Ok(IndicatorValue::Real)
    } else if tol.scalar_eq(c, Complex64::new(-1.0, 0.0)) {
        Ok(IndicatorValue::Quaternionic)
    } else {
        Err(Error::IndicatorOutOfRange(format!("{label}: {c}")))
    }
}

pub fn fs_indicator_with(cat: &RepCategory, w: &SelfDualityWitness) -> Result<IndicatorValue> {
    extract(cat, &nu_morphism(cat, w)?, &w.label)
}

pub fn fs_indicator_exchanged(cat: &RepCategory, w: &SelfDualityWitness) -> Result<IndicatorValue> {
    extract(cat, &nu_morphism_exchanged(cat, w)?, &w.label)
}

pub fn fs_indicator(cat: &RepCategory, x: &SimpleLabel) -> Result<IndicatorValue> {
    match find_self_duality(cat, x)? {
        None => Ok(IndicatorValue::NotSelfDual),
        Some(w) => fs_indicator_with(cat, &w),
    }
}

/// Both sides of d̃_X ∘ (id_X ⊗ Φ) = ν_X · d_X ∘ (Φ ⊗ id_X).
pub fn indicator_identity_sides(cat: &RepCategory, w: &SelfDualityWitness) -> Result<(Morphism, Morphism)> {
    let xw = ObjectWord::simple(w.label.clone());
    let id = cat.identity(&xw)?;
    let lhs = cat.evaluation_left(&w.label)?.compose(&id.tensor(&w.phi))?;
    let rhs = cat.evaluation(&w.label)?.compose(&w.phi.tensor(&id))?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupmodel::fs_indicator_character_oracle;
    use crate::numerics::Tolerance;
    use crate::zoo;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cat(name: &str) -> RepCategory {
        RepCategory::new(zoo::group(name).unwrap(), Tolerance::default())
    }

    #[test]
    fn find_self_duality_examples() {
        let s3 = cat("S3");
        let w = find_self_duality(&s3, &SimpleLabel::new("1")).unwrap().unwrap();
        assert!((w.phi.mat()[(0, 0)].norm() - 1.0).abs() < 1e-12);
        assert!(find_self_duality(&cat("C3"), &SimpleLabel::new("omega")).unwrap().is_none());

        let q8 = cat("Q8");
        let w = find_self_duality(&q8, &SimpleLabel::new("V")).unwrap().unwrap();
        // proportional to the symplectic form [[0,1],[-1,0]]
        let m = w.phi.mat();
        assert!(m[(0, 0)].norm() < 1e-9 && m[(1, 1)].norm() < 1e-9);
        assert!((m[(0, 1)] + m[(1, 0)]).norm() < 1e-9);
        assert!(m[(0, 1)].norm() > 0.5);
    }

    #[test]
    fn fs_indicator_examples() {
        assert_eq!(fs_indicator(&cat("S3"), &SimpleLabel::new("1")).unwrap(), IndicatorValue::Real);
        assert_eq!(fs_indicator(&cat("Q8"), &SimpleLabel::new("V")).unwrap(), IndicatorValue::Quaternionic);
        assert_eq!(fs_indicator(&cat("S3"), &SimpleLabel::new("std")).unwrap(), IndicatorValue::Real);
        assert_eq!(fs_indicator(&cat("C3"), &SimpleLabel::new("omega")).unwrap(), IndicatorValue::NotSelfDual);
        assert_eq!(
            fs_indicator(&cat("Q8"), &SimpleLabel::new("V").dual()).unwrap(),
            IndicatorValue::Quaternionic
        );
    }

    #[test]
    fn nu_product_examples() {
        use IndicatorValue::*;
        assert_eq!(nu_product(&[Real, Real, Real]), 1);
        assert_eq!(nu_product(&[Quaternionic, Real, Real]), -1);
        assert_eq!(nu_product(&[NotSelfDual, NotSelfDual]), 1);
        assert_eq!(nu_product(&[]), 1);
    }

    #[test]
    fn categorical_indicator_matches_oracle_everywhere() {
        let tol = Tolerance::default();
        for name in zoo::GROUP_NAMES {
            let c = cat(name);
            for x in c.simples() {
                let nu = fs_indicator(&c, &x).unwrap().value();
                let oracle = fs_indicator_character_oracle(c.entry(), &x.label, &tol).unwrap();
                assert_eq!(nu, oracle, "{name}/{x}");
            }
        }
    }

    #[test]
    fn indicator_is_witness_independent_and_side_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for name in zoo::GROUP_NAMES {
            let c = cat(name);
            for x in c.simples() {
                let Some(w) = find_self_duality(&c, &x).unwrap() else { continue };
                let nu = fs_indicator_with(&c, &w).unwrap();
                let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                let rescaled = w.phi.scale(Complex64::from_polar(rng.gen_range(0.1..5.0), theta));
                let w2 = SelfDualityWitness::from_phi(&c, rescaled).unwrap();
                let xw = ObjectWord::simple(x.clone());
                let resolved = c.random_intertwiner(&xw, &xw.dual(), &mut rng).unwrap();
                let w3 = SelfDualityWitness::from_phi(&c, resolved).unwrap();
                assert_eq!(fs_indicator_with(&c, &w2).unwrap(), nu, "{name}/{x}");
                assert_eq!(fs_indicator_with(&c, &w3).unwrap(), nu, "{name}/{x}");
                assert_eq!(fs_indicator_exchanged(&c, &w).unwrap(), nu, "{name}/{x}");

                let (lhs, rhs) = indicator_identity_sides(&c, &w3).unwrap();
                assert!(lhs.approx_eq(&rhs.scale(Complex64::new(nu.value() as f64, 0.0)), c.tol()));
            }
        }
    }

    #[test]
    fn witness_rejects_wrong_codomain() {
        let c = cat("Q8");
        let id = c.identity(&ObjectWord::simple(SimpleLabel::new("V"))).unwrap();
        assert!(matches!(SelfDualityWitness::from_phi(&c, id), Err(Error::WordMismatch { .. })));
    }
}
