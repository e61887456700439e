//! Rep(G) as a strict sovereign tensor category.
//!
//! Objects are words of irreps and their duals. The dual of an irrep is
//! realized on the dual basis with ρ∨(g) = ρ(g⁻¹)ᵀ, and the double dual is
//! the original space, so left and right dualities agree on the nose. Tensor
//! factors are ordered row-major: the leftmost factor is the slowest index.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::groupmodel::GroupZooEntry;
use crate::numerics::{self, CMat, CVec, Scalar, Tolerance, ONE};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimpleLabel {
    pub label: String,
    pub dualized: bool,
}

impl SimpleLabel {
    pub fn new(label: impl Into<String>) -> Self {
        SimpleLabel {
            label: label.into(),
            dualized: false,
        }
    }

    pub fn dual(&self) -> Self {
        SimpleLabel {
            label: self.label.clone(),
            dualized: !self.dualized,
        }
    }
}

impl fmt::Display for SimpleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.label, if self.dualized { "^" } else { "" })
    }
}

impl FromStr for SimpleLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (base, dualized) = match s.strip_suffix('^') {
            Some(b) => (b.trim_end(), true),
            None => (s, false),
        };
        if base.is_empty() || !base.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(Error::UnknownLabel(s.to_string()));
        }
        Ok(SimpleLabel {
            label: base.to_string(),
            dualized,
        })
    }
}

impl Serialize for SimpleLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SimpleLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// X₁ ⊗ ... ⊗ X_ℓ; the empty word is the tensor unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ObjectWord(pub Vec<SimpleLabel>);

impl ObjectWord {
    pub fn unit() -> Self {
        ObjectWord(Vec::new())
    }

    pub fn simple(x: SimpleLabel) -> Self {
        ObjectWord(vec![x])
    }

    pub fn factors(&self) -> &[SimpleLabel] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &ObjectWord) -> ObjectWord {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        ObjectWord(v)
    }

    /// (X₁ ⊗ ... ⊗ X_ℓ)∨ = X_ℓ∨ ⊗ ... ⊗ X₁∨
    pub fn dual(&self) -> ObjectWord {
        ObjectWord(self.0.iter().rev().map(SimpleLabel::dual).collect())
    }

    fn split_first(&self) -> Option<(ObjectWord, ObjectWord)> {
        let (x, rest) = self.0.split_first()?;
        Some((ObjectWord::simple(x.clone()), ObjectWord(rest.to_vec())))
    }
}

impl From<Vec<SimpleLabel>> for ObjectWord {
    fn from(v: Vec<SimpleLabel>) -> Self {
        ObjectWord(v)
    }
}

impl FromStr for ObjectWord {
    type Err = Error;

    /// Comma-separated labels, optionally bracketed; empty input is the unit.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')).unwrap_or(s);
        if s.trim().is_empty() {
            return Ok(ObjectWord::unit());
        }
        s.split(',').map(str::parse).collect::<Result<Vec<_>>>().map(ObjectWord)
    }
}

impl fmt::Display for ObjectWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

/// f ∈ Hom(dom, cod) as a dim(cod) × dim(dom) matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Morphism {
    dom: ObjectWord,
    cod: ObjectWord,
    mat: CMat,
}

impl Morphism {
    pub fn dom(&self) -> &ObjectWord {
        &self.dom
    }

    pub fn cod(&self) -> &ObjectWord {
        &self.cod
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn into_mat(self) -> CMat {
        self.mat
    }

    /// Strict tensor product; the matrix is the Kronecker product.
    pub fn tensor(&self, other: &Morphism) -> Morphism {
        Morphism {
            dom: self.dom.concat(&other.dom),
            cod: self.cod.concat(&other.cod),
            mat: numerics::kron(&self.mat, &other.mat),
        }
    }

    /// `self ∘ lower`
    pub fn compose(&self, lower: &Morphism) -> Result<Morphism> {
        if self.dom != lower.cod {
            return Err(Error::WordMismatch {
                context: "compose",
                expected: self.dom.clone(),
                found: lower.cod.clone(),
            });
        }
        Ok(Morphism {
            dom: lower.dom.clone(),
            cod: self.cod.clone(),
            mat: &self.mat * &lower.mat,
        })
    }

    pub fn scale(&self, c: Scalar) -> Morphism {
        Morphism {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            mat: &self.mat * c,
        }
    }

    /// The 1×1 value of an endomorphism of the unit.
    pub fn as_scalar(&self) -> Option<Scalar> {
        (self.mat.shape() == (1, 1) && self.dom.is_empty() && self.cod.is_empty()).then(|| self.mat[(0, 0)])
    }

    pub fn approx_eq(&self, other: &Morphism, tol: &Tolerance) -> bool {
        self.dom == other.dom
            && self.cod == other.cod
            && numerics::approx_equal(&self.mat, &other.mat, tol).unwrap_or(false)
    }

    /// Vector of a morphism out of the unit.
    pub fn as_vector(&self) -> CVec {
        self.mat.column(0).into_owned()
    }
}

/// vec(I_n) as a column: Σ_i e_i ⊗ e^i.
fn vec_identity(n: usize) -> CMat {
    let mut v = CMat::zeros(n * n, 1);
    for i in 0..n {
        v[(i * n + i, 0)] = ONE;
    }
    v
}

/// Rep(G) for one zoo entry.
#[derive(Clone, Debug)]
pub struct RepCategory {
    entry: Arc<GroupZooEntry>,
    tol: Tolerance,
}

impl RepCategory {
    pub fn new(entry: GroupZooEntry, tol: Tolerance) -> Self {
        RepCategory {
            entry: Arc::new(entry),
            tol,
        }
    }

    pub fn from_arc(entry: Arc<GroupZooEntry>, tol: Tolerance) -> Self {
        RepCategory { entry, tol }
    }

    pub fn entry(&self) -> &GroupZooEntry {
        &self.entry
    }

    pub fn tol(&self) -> &Tolerance {
        &self.tol
    }

    /// All simple labels of the entry (irreps, not dualized).
    pub fn simples(&self) -> Vec<SimpleLabel> {
        self.entry.irreps.iter().map(|r| SimpleLabel::new(r.label.clone())).collect()
    }

    pub fn check_label(&self, x: &SimpleLabel) -> Result<()> {
        self.entry.irrep(&x.label).map(|_| ())
    }

    pub fn check_word(&self, w: &ObjectWord) -> Result<()> {
        w.factors().iter().try_for_each(|x| self.check_label(x))
    }

    pub fn simple_dim(&self, x: &SimpleLabel) -> Result<usize> {
        Ok(self.entry.irrep(&x.label)?.dim)
    }

    pub fn word_dim(&self, w: &ObjectWord) -> Result<usize> {
        w.factors().iter().map(|x| self.simple_dim(x)).product()
    }

    /// Character of a simple label; the dual has the conjugate character.
    pub fn character(&self, x: &SimpleLabel) -> Result<Vec<Scalar>> {
        let chi = &self.entry.irrep(&x.label)?.character;
        Ok(if x.dualized {
            chi.iter().map(|c| c.conj()).collect()
        } else {
            chi.clone()
        })
    }

    /// X ≅ Y, decided by characters.
    pub fn isomorphic(&self, x: &SimpleLabel, y: &SimpleLabel) -> Result<bool> {
        let (a, b) = (self.character(x)?, self.character(y)?);
        Ok(a.iter().zip(&b).all(|(p, q)| self.tol.scalar_eq(*p, *q)))
    }

    pub fn is_self_dual(&self, x: &SimpleLabel) -> Result<bool> {
        self.isomorphic(x, &x.dual())
    }

    pub fn rho_simple(&self, x: &SimpleLabel, g: usize) -> Result<CMat> {
        let r = self.entry.irrep(&x.label)?;
        let group = &self.entry.group;
        if g >= group.order() {
            return Err(Error::InvalidElement(g));
        }
        Ok(if x.dualized {
            r.elements[group.inverse[g]].transpose()
        } else {
            r.elements[g].clone()
        })
    }

    pub fn rho_word(&self, w: &ObjectWord, g: usize) -> Result<CMat> {
        let mut m = numerics::identity(1);
        for x in w.factors() {
            m = numerics::kron(&m, &self.rho_simple(x, g)?);
        }
        Ok(m)
    }

    /// Wraps a matrix, checking its shape against the words.
    pub fn morphism(&self, dom: ObjectWord, cod: ObjectWord, mat: CMat) -> Result<Morphism> {
        let want = (self.word_dim(&cod)?, self.word_dim(&dom)?);
        if mat.shape() != want {
            return Err(Error::ShapeMismatch {
                context: "morphism",
                left: want,
                right: mat.shape(),
            });
        }
        Ok(Morphism { dom, cod, mat })
    }

    pub fn is_intertwiner(&self, f: &Morphism) -> Result<bool> {
        for &g in &self.entry.group.generator_elements {
            let lhs = self.rho_word(&f.cod, g)? * &f.mat;
            let rhs = &f.mat * self.rho_word(&f.dom, g)?;
            if !numerics::approx_equal(&lhs, &rhs, &self.tol)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn identity(&self, w: &ObjectWord) -> Result<Morphism> {
        let n = self.word_dim(w)?;
        Ok(Morphism {
            dom: w.clone(),
            cod: w.clone(),
            mat: numerics::identity(n),
        })
    }

    pub fn tensor(&self, f: &Morphism, g: &Morphism) -> Morphism {
        f.tensor(g)
    }

    pub fn compose(&self, g: &Morphism, f: &Morphism) -> Result<Morphism> {
        g.compose(f)
    }

    /// b_X : 1 → X ⊗ X∨
    pub fn coevaluation(&self, x: &SimpleLabel) -> Result<Morphism> {
        let n = self.simple_dim(x)?;
        Ok(Morphism {
            dom: ObjectWord::unit(),
            cod: ObjectWord(vec![x.clone(), x.dual()]),
            mat: vec_identity(n),
        })
    }

    /// d_X : X∨ ⊗ X → 1
    pub fn evaluation(&self, x: &SimpleLabel) -> Result<Morphism> {
        let n = self.simple_dim(x)?;
        Ok(Morphism {
            dom: ObjectWord(vec![x.dual(), x.clone()]),
            cod: ObjectWord::unit(),
            mat: vec_identity(n).transpose(),
        })
    }

    /// b̃_X : 1 → X∨ ⊗ X
    pub fn coevaluation_left(&self, x: &SimpleLabel) -> Result<Morphism> {
        let n = self.simple_dim(x)?;
        Ok(Morphism {
            dom: ObjectWord::unit(),
            cod: ObjectWord(vec![x.dual(), x.clone()]),
            mat: vec_identity(n),
        })
    }

    /// d̃_X : X ⊗ X∨ → 1
    pub fn evaluation_left(&self, x: &SimpleLabel) -> Result<Morphism> {
        let n = self.simple_dim(x)?;
        Ok(Morphism {
            dom: ObjectWord(vec![x.clone(), x.dual()]),
            cod: ObjectWord::unit(),
            mat: vec_identity(n).transpose(),
        })
    }

    /// b_W for a word: b_{X⊗Z} = (id_X ⊗ b_Z ⊗ id_{X∨}) ∘ b_X.
    pub fn coevaluation_word(&self, w: &ObjectWord) -> Result<Morphism> {
        let Some((x, z)) = w.split_first() else {
            return self.identity(&ObjectWord::unit());
        };
        let bx = self.coevaluation(&x.0[0])?;
        let mid = self
            .identity(&x)?
            .tensor(&self.coevaluation_word(&z)?)
            .tensor(&self.identity(&x.dual())?);
        mid.compose(&bx)
    }

    /// d_W for a word: d_{X⊗Z} = d_Z ∘ (id_{Z∨} ⊗ d_X ⊗ id_Z).
    pub fn evaluation_word(&self, w: &ObjectWord) -> Result<Morphism> {
        let Some((x, z)) = w.split_first() else {
            return self.identity(&ObjectWord::unit());
        };
        let mid = self
            .identity(&z.dual())?
            .tensor(&self.evaluation(&x.0[0])?)
            .tensor(&self.identity(&z)?);
        self.evaluation_word(&z)?.compose(&mid)
    }

    /// b̃_W: b̃_{X⊗Z} = (id_{Z∨} ⊗ b̃_X ⊗ id_Z) ∘ b̃_Z.
    pub fn coevaluation_left_word(&self, w: &ObjectWord) -> Result<Morphism> {
        let Some((x, z)) = w.split_first() else {
            return self.identity(&ObjectWord::unit());
        };
        let mid = self
            .identity(&z.dual())?
            .tensor(&self.coevaluation_left(&x.0[0])?)
            .tensor(&self.identity(&z)?);
        mid.compose(&self.coevaluation_left_word(&z)?)
    }

    /// d̃_W: d̃_{X⊗Z} = d̃_X ∘ (id_X ⊗ d̃_Z ⊗ id_{X∨}).
    pub fn evaluation_left_word(&self, w: &ObjectWord) -> Result<Morphism> {
        let Some((x, z)) = w.split_first() else {
            return self.identity(&ObjectWord::unit());
        };
        let mid = self
            .identity(&x)?
            .tensor(&self.evaluation_left_word(&z)?)
            .tensor(&self.identity(&x.dual())?);
        self.evaluation_left(&x.0[0])?.compose(&mid)
    }

    /// f∨ = (d_Y ⊗ id_{X∨}) ∘ (id_{Y∨} ⊗ f ⊗ id_{X∨}) ∘ (id_{Y∨} ⊗ b_X)
    pub fn dual_morphism(&self, f: &Morphism) -> Result<Morphism> {
        let (x, y) = (f.dom(), f.cod());
        let (xd, yd) = (x.dual(), y.dual());
        let bottom = self.identity(&yd)?.tensor(&self.coevaluation_word(x)?);
        let middle = self.identity(&yd)?.tensor(f).tensor(&self.identity(&xd)?);
        let top = self.evaluation_word(y)?.tensor(&self.identity(&xd)?);
        top.compose(&middle.compose(&bottom)?)
    }

    /// Left dual: (id_{X∨} ⊗ d̃_Y) ∘ (id_{X∨} ⊗ f ⊗ id_{Y∨}) ∘ (b̃_X ⊗ id_{Y∨})
    pub fn dual_morphism_left(&self, f: &Morphism) -> Result<Morphism> {
        let (x, y) = (f.dom(), f.cod());
        let (xd, yd) = (x.dual(), y.dual());
        let bottom = self.coevaluation_left_word(x)?.tensor(&self.identity(&yd)?);
        let middle = self.identity(&xd)?.tensor(f).tensor(&self.identity(&yd)?);
        let top = self.identity(&xd)?.tensor(&self.evaluation_left_word(y)?);
        top.compose(&middle.compose(&bottom)?)
    }

    /// Symmetric braiding X ⊗ Y → Y ⊗ X on words.
    pub fn braiding(&self, x: &ObjectWord, y: &ObjectWord) -> Result<Morphism> {
        let (dx, dy) = (self.word_dim(x)?, self.word_dim(y)?);
        let mut m = CMat::zeros(dx * dy, dx * dy);
        for i in 0..dx {
            for j in 0..dy {
                m[(j * dx + i, i * dy + j)] = ONE;
            }
        }
        Ok(Morphism {
            dom: x.concat(y),
            cod: y.concat(x),
            mat: m,
        })
    }

    pub fn braiding_flip(&self, x: &SimpleLabel, y: &SimpleLabel) -> Result<Morphism> {
        self.braiding(&ObjectWord::simple(x.clone()), &ObjectWord::simple(y.clone()))
    }

    fn require_endo(f: &Morphism) -> Result<()> {
        if f.dom != f.cod {
            return Err(Error::NotEndomorphism {
                dom: f.dom.clone(),
                cod: f.cod.clone(),
            });
        }
        Ok(())
    }

    /// tr_L(f) = d_X ∘ (id_{X∨} ⊗ f) ∘ b̃_X
    pub fn trace_left(&self, f: &Morphism) -> Result<Scalar> {
        Self::require_endo(f)?;
        let x = f.dom();
        let closed = self
            .evaluation_word(x)?
            .compose(&self.identity(&x.dual())?.tensor(f))?
            .compose(&self.coevaluation_left_word(x)?)?;
        Ok(closed.mat[(0, 0)])
    }

    /// tr_R(f) = d̃_X ∘ (f ⊗ id_{X∨}) ∘ b_X
    pub fn trace_right(&self, f: &Morphism) -> Result<Scalar> {
        Self::require_endo(f)?;
        let x = f.dom();
        let closed = self
            .evaluation_left_word(x)?
            .compose(&f.tensor(&self.identity(&x.dual())?))?
            .compose(&self.coevaluation_word(x)?)?;
        Ok(closed.mat[(0, 0)])
    }

    /// (dim_L, dim_R)
    pub fn dims(&self, w: &ObjectWord) -> Result<(Scalar, Scalar)> {
        let id = self.identity(w)?;
        Ok((self.trace_left(&id)?, self.trace_right(&id)?))
    }

    /// P = (1/|G|) Σ_g ρ_W(g)
    pub fn averaging_projector(&self, w: &ObjectWord) -> Result<CMat> {
        let n = self.word_dim(w)?;
        let order = self.entry.group.order();
        let mut p = CMat::zeros(n, n);
        for g in 0..order {
            p += self.rho_word(w, g)?;
        }
        Ok(p / Complex64::new(order as f64, 0.0))
    }

    /// Orthonormal basis of H = Hom(1, W), from the range of the averaging projector.
    pub fn invariant_basis(&self, w: &ObjectWord) -> Result<Vec<Morphism>> {
        let p = self.averaging_projector(w)?;
        Ok(numerics::column_space(&p, &self.tol)?
            .into_iter()
            .map(|v| Morphism {
                dom: ObjectWord::unit(),
                cod: w.clone(),
                mat: CMat::from_column_slice(v.len(), 1, v.as_slice()),
            })
            .collect())
    }

    /// Basis of Hom(X, Y) via Hom(X, Y) ≅ Hom(1, Y ⊗ X∨).
    pub fn hom_basis(&self, dom: &ObjectWord, cod: &ObjectWord) -> Result<Vec<Morphism>> {
        let (dx, dy) = (self.word_dim(dom)?, self.word_dim(cod)?);
        let basis = self.invariant_basis(&cod.concat(&dom.dual()))?;
        Ok(basis
            .into_iter()
            .map(|v| Morphism {
                dom: dom.clone(),
                cod: cod.clone(),
                mat: CMat::from_fn(dy, dx, |a, b| v.mat[(a * dx + b, 0)]),
            })
            .collect())
    }

    /// Group average of a random matrix: (1/|G|) Σ_g ρ_Y(g) R ρ_X(g)⁻¹.
    pub fn random_intertwiner<R: Rng>(&self, dom: &ObjectWord, cod: &ObjectWord, rng: &mut R) -> Result<Morphism> {
        let (dx, dy) = (self.word_dim(dom)?, self.word_dim(cod)?);
        let r = CMat::from_fn(dy, dx, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let group = &self.entry.group;
        let mut m = CMat::zeros(dy, dx);
        for g in 0..group.order() {
            m += self.rho_word(cod, g)? * &r * self.rho_word(dom, group.inverse[g])?;
        }
        Ok(Morphism {
            dom: dom.clone(),
            cod: cod.clone(),
            mat: m / Complex64::new(group.order() as f64, 0.0),
        })
    }

    /// B(φ₁, φ₂) = d_W ∘ (φ₁ ⊗ φ₂) for φ₁ ∈ Hom(1, W∨), φ₂ ∈ Hom(1, W).
    pub fn dual_hom_pairing(&self, w: &ObjectWord, phi1: &Morphism, phi2: &Morphism) -> Result<Scalar> {
        let wd = w.dual();
        for (phi, want) in [(phi1, &wd), (phi2, w)] {
            if !phi.dom.is_empty() || &phi.cod != want {
                return Err(Error::WordMismatch {
                    context: "dual_hom_pairing",
                    expected: want.clone(),
                    found: phi.cod.clone(),
                });
            }
        }
        Ok(self.evaluation_word(w)?.compose(&phi1.tensor(phi2))?.mat[(0, 0)])
    }
}
