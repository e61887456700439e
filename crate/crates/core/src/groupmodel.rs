//! Finite groups given by permutation generators, their unitary irreps, and
//! the character-theoretic oracles that the categorical computations are
//! checked against.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{self, CMat, Scalar, Tolerance};

pub type Perm = Vec<usize>;

/// (p * q)(x) = p(q(x))
fn perm_mul(p: &[usize], q: &[usize]) -> Perm {
    q.iter().map(|&x| p[x]).collect()
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    pub name: String,
    pub degree: usize,
    pub generators: Vec<Perm>,
    pub elements: Vec<Perm>,
    /// `cayley[g][h]` is the index of `g * h`.
    pub cayley: Vec<Vec<usize>>,
    /// `words[g]` lists generator indices with `g = s_{w0} * s_{w1} * ...`.
    pub words: Vec<Vec<usize>>,
    pub inverse: Vec<usize>,
    pub identity: usize,
    /// Index of each generator as an element.
    pub generator_elements: Vec<usize>,
}

impl FiniteGroup {
    /// Breadth-first closure of the generators, right-multiplying.
    pub fn from_generators(name: &str, degree: usize, generators: Vec<Perm>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Schema(format!("{name}: no generators")));
        }
        for (k, g) in generators.iter().enumerate() {
            if g.len() != degree || !is_permutation(g) {
                return Err(Error::Schema(format!(
                    "{name}: generator {k} is not a permutation of 0..{degree}"
                )));
            }
        }
        let id: Perm = (0..degree).collect();
        let mut index: HashMap<Perm, usize> = HashMap::new();
        let mut elements = vec![id.clone()];
        let mut words = vec![Vec::new()];
        index.insert(id, 0);
        let mut i = 0;
        while i < elements.len() {
            for (k, s) in generators.iter().enumerate() {
                let h = perm_mul(&elements[i], s);
                if !index.contains_key(&h) {
                    let mut w = words[i].clone();
                    w.push(k);
                    index.insert(h.clone(), elements.len());
                    elements.push(h);
                    words.push(w);
                }
            }
            i += 1;
        }
        let n = elements.len();
        let cayley: Vec<Vec<usize>> = elements
            .iter()
            .map(|g| elements.iter().map(|h| index[&perm_mul(g, h)]).collect())
            .collect();
        let inverse = (0..n)
            .map(|g| (0..n).find(|&h| cayley[g][h] == 0).expect("group closure"))
            .collect();
        let generator_elements = generators.iter().map(|s| index[s]).collect();
        let group = FiniteGroup {
            name: name.to_string(),
            degree,
            generators,
            elements,
            cayley,
            words,
            inverse,
            identity: 0,
            generator_elements,
        };
        group.validate()?;
        Ok(group)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.cayley[g][h]
    }

    /// Group-table invariants: identity row/column, inverses, associativity
    /// on generators, and word reconstruction.
    pub fn validate(&self) -> Result<()> {
        let n = self.order();
        let bad = |m: String| Err(Error::DataCorruption(format!("{}: {m}", self.name)));
        for g in 0..n {
            if self.mul(self.identity, g) != g || self.mul(g, self.identity) != g {
                return bad(format!("identity fails at {g}"));
            }
            if self.mul(g, self.inverse[g]) != self.identity
                || self.mul(self.inverse[g], g) != self.identity
            {
                return bad(format!("inverse fails at {g}"));
            }
            let mut e = self.identity;
            for &k in &self.words[g] {
                e = self.mul(e, self.generator_elements[k]);
            }
            if e != g {
                return bad(format!("word of element {g} evaluates to {e}"));
            }
        }
        for g in 0..n {
            for h in 0..n {
                for &s in &self.generator_elements {
                    if self.mul(self.mul(g, h), s) != self.mul(g, self.mul(h, s)) {
                        return bad(format!("associativity fails at ({g}, {h}, {s})"));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Irrep {
    pub label: String,
    pub dim: usize,
    pub gen_matrices: Vec<CMat>,
    /// Matrices of every element, reconstructed from words.
    pub elements: Vec<CMat>,
    pub character: Vec<Scalar>,
}

impl Irrep {
    fn build(group: &FiniteGroup, label: String, dim: usize, gen_matrices: Vec<CMat>) -> Result<Self> {
        if gen_matrices.len() != group.generators.len() {
            return Err(Error::Schema(format!(
                "{label}: {} generator matrices for {} generators",
                gen_matrices.len(),
                group.generators.len()
            )));
        }
        if let Some(m) = gen_matrices.iter().find(|m| m.shape() != (dim, dim)) {
            return Err(Error::Schema(format!("{label}: matrix of shape {:?}, dim {dim}", m.shape())));
        }
        let elements: Vec<CMat> = group
            .words
            .iter()
            .map(|w| {
                w.iter()
                    .fold(numerics::identity(dim), |acc, &k| acc * &gen_matrices[k])
            })
            .collect();
        let character = elements.iter().map(|m| m.trace()).collect();
        Ok(Irrep {
            label,
            dim,
            gen_matrices,
            elements,
            character,
        })
    }

    fn validate(&self, group: &FiniteGroup, tol: &Tolerance) -> Result<()> {
        let bad = |m: String| Err(Error::DataCorruption(format!("{}/{}: {m}", group.name, self.label)));
        let id = numerics::identity(self.dim);
        for (k, m) in self.gen_matrices.iter().enumerate() {
            if !numerics::approx_equal(&(m.adjoint() * m), &id, tol)? {
                return bad(format!("generator matrix {k} is not unitary"));
            }
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                let prod = &self.elements[g] * &self.elements[h];
                if !numerics::approx_equal(&prod, &self.elements[group.mul(g, h)], tol)? {
                    return bad(format!("not a homomorphism at ({g}, {h})"));
                }
            }
        }
        let norm: f64 = self.character.iter().map(|c| c.norm_sqr()).sum();
        if (norm - group.order() as f64).abs() > tol.eps_eq * group.order() as f64 {
            return bad(format!("sum |chi|^2 = {norm}, not |G| = {}", group.order()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct GroupZooEntry {
    pub group: FiniteGroup,
    pub irreps: Vec<Irrep>,
    pub provenance: String,
}

#[derive(Serialize, Deserialize)]
struct IrrepFile {
    label: String,
    dim: usize,
    gen_matrices: Vec<Vec<Vec<[f64; 2]>>>,
}

#[derive(Serialize, Deserialize)]
struct GroupFile {
    name: String,
    degree: usize,
    #[serde(default)]
    provenance: String,
    generators: Vec<Perm>,
    irreps: Vec<IrrepFile>,
}

impl GroupZooEntry {
    pub fn from_json_str(src: &str, tol: &Tolerance) -> Result<Self> {
        let file: GroupFile = serde_json::from_str(src).map_err(|e| Error::Schema(e.to_string()))?;
        let group = FiniteGroup::from_generators(&file.name, file.degree, file.generators)?;
        let mut irreps = Vec::with_capacity(file.irreps.len());
        for ir in file.irreps {
            let mats = ir
                .gen_matrices
                .iter()
                .map(|m| numerics::from_pairs(m))
                .collect::<Result<Vec<_>>>()?;
            irreps.push(Irrep::build(&group, ir.label, ir.dim, mats)?);
        }
        let entry = GroupZooEntry {
            group,
            irreps,
            provenance: file.provenance,
        };
        entry.validate(tol)?;
        Ok(entry)
    }

    pub fn validate(&self, tol: &Tolerance) -> Result<()> {
        let mut labels: Vec<&str> = self.irreps.iter().map(|r| r.label.as_str()).collect();
        labels.sort_unstable();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Schema(format!("{}: duplicate irrep labels", self.group.name)));
        }
        for r in &self.irreps {
            r.validate(&self.group, tol)?;
        }
        let total: usize = self.irreps.iter().map(|r| r.dim * r.dim).sum();
        if total != self.group.order() {
            return Err(Error::DataCorruption(format!(
                "{}: sum of squared dimensions {total} != |G| = {}",
                self.group.name,
                self.group.order()
            )));
        }
        for (i, a) in self.irreps.iter().enumerate() {
            for b in &self.irreps[i + 1..] {
                if character_inner(a, b).norm() > tol.eps_eq * self.group.order() as f64 {
                    return Err(Error::DataCorruption(format!(
                        "{}: irreps {} and {} are not orthogonal",
                        self.group.name, a.label, b.label
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.group.name
    }

    pub fn irrep(&self, label: &str) -> Result<&Irrep> {
        self.irreps
            .iter()
            .find(|r| r.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn irrep_index(&self, label: &str) -> Result<usize> {
        self.irreps
            .iter()
            .position(|r| r.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn labels(&self) -> Vec<String> {
        self.irreps.iter().map(|r| r.label.clone()).collect()
    }

    pub fn rep_of_element(&self, label: &str, g: usize) -> Result<CMat> {
        rep_of_element(self.irrep(label)?, &self.group, g)
    }

    /// Label of the irrep whose character is the conjugate of `label`'s.
    pub fn dual_label(&self, label: &str, tol: &Tolerance) -> Result<String> {
        let r = self.irrep(label)?;
        self.irreps
            .iter()
            .find(|s| {
                s.character
                    .iter()
                    .zip(&r.character)
                    .all(|(x, y)| tol.scalar_eq(*x, y.conj()))
            })
            .map(|s| s.label.clone())
            .ok_or_else(|| Error::DataCorruption(format!("{label} has no dual in the irrep list")))
    }
}

fn character_inner(a: &Irrep, b: &Irrep) -> Scalar {
    a.character
        .iter()
        .zip(&b.character)
        .map(|(x, y)| x * y.conj())
        .sum()
}

/// Product of generator matrices along the element's word.
pub fn rep_of_element(r: &Irrep, group: &FiniteGroup, g: usize) -> Result<CMat> {
    if g >= group.order() {
        return Err(Error::InvalidElement(g));
    }
    Ok(group.words[g]
        .iter()
        .fold(numerics::identity(r.dim), |acc, &k| acc * &r.gen_matrices[k]))
}

fn nearest_integer(x: Scalar, tol: &Tolerance, what: &str) -> Result<i64> {
    let n = x.re.round();
    if (x - Complex64::new(n, 0.0)).norm() > tol.eps_eq {
        return Err(Error::DataCorruption(format!("{what} = {x} is not an integer")));
    }
    Ok(n as i64)
}

/// (1/|G|) Σ_g χ(g²), rounded and checked to be in {-1, 0, 1}.
pub fn fs_indicator_character_oracle(entry: &GroupZooEntry, label: &str, tol: &Tolerance) -> Result<i32> {
    let r = entry.irrep(label)?;
    let g = &entry.group;
    let sum: Scalar = (0..g.order()).map(|x| r.character[g.mul(x, x)]).sum();
    let v = nearest_integer(sum / Complex64::new(g.order() as f64, 0.0), tol, "FS indicator")?;
    if !(-1..=1).contains(&v) {
        return Err(Error::DataCorruption(format!("FS indicator of {label} is {v}")));
    }
    Ok(v as i32)
}

/// (1/|G|) Σ_g Π_i χ_i(g): the dimension of the invariants in the tensor product.
pub fn invariant_dim_character_oracle(entry: &GroupZooEntry, labels: &[&str], tol: &Tolerance) -> Result<usize> {
    let irreps = labels
        .iter()
        .map(|l| entry.irrep(l))
        .collect::<Result<Vec<_>>>()?;
    let g = &entry.group;
    let sum: Scalar = (0..g.order())
        .map(|x| irreps.iter().map(|r| r.character[x]).product::<Scalar>())
        .sum();
    let v = nearest_integer(sum / Complex64::new(g.order() as f64, 0.0), tol, "invariant dimension")?;
    usize::try_from(v).map_err(|_| Error::DataCorruption(format!("negative invariant dimension {v}")))
}

/// Real character ⇔ the irrep is isomorphic to its contragredient.
pub fn self_dual(r: &Irrep, tol: &Tolerance) -> bool {
    r.character.iter().all(|c| c.im.abs() <= tol.eps_eq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    fn load(name: &str) -> GroupZooEntry {
        zoo::group(name).unwrap()
    }

    #[test]
    fn all_zoo_groups_load_with_expected_orders() {
        let expect = [
            ("C2", 2, 2),
            ("C3", 3, 3),
            ("C4", 4, 4),
            ("S3", 6, 3),
            ("D4", 8, 5),
            ("Q8", 8, 5),
            ("A4", 12, 4),
            ("S4", 24, 5),
            ("SL23", 24, 7),
        ];
        for (name, order, nirr) in expect {
            let e = load(name);
            assert_eq!(e.group.order(), order, "{name}");
            assert_eq!(e.irreps.len(), nirr, "{name}");
        }
    }

    #[test]
    fn rep_of_element_examples() {
        let s3 = load("S3");
        for r in &s3.irreps {
            let m = rep_of_element(r, &s3.group, s3.group.identity).unwrap();
            assert_eq!(m, numerics::identity(r.dim));
        }
        // generator 0 of S3 is the transposition (0 1)
        let t = s3.group.generator_elements[0];
        let m = s3.rep_of_element("sgn", t).unwrap();
        assert!((m[(0, 0)] + 1.0).norm() < 1e-12);

        let q8 = load("Q8");
        let minus_one = (0..8)
            .find(|&g| g != q8.group.identity && q8.group.mul(g, g) == q8.group.identity)
            .unwrap();
        let m = q8.rep_of_element("V", minus_one).unwrap();
        assert!(numerics::approx_equal(&m, &(-numerics::identity(2)), &Tolerance::default()).unwrap());
        assert!(matches!(q8.rep_of_element("V", 99), Err(Error::InvalidElement(99))));
    }

    #[test]
    fn fs_oracle_examples() {
        let tol = Tolerance::default();
        for name in zoo::GROUP_NAMES {
            let e = load(name);
            assert_eq!(fs_indicator_character_oracle(&e, "1", &tol).unwrap(), 1);
        }
        assert_eq!(fs_indicator_character_oracle(&load("Q8"), "V", &tol).unwrap(), -1);
        assert_eq!(fs_indicator_character_oracle(&load("C3"), "omega", &tol).unwrap(), 0);
    }

    #[test]
    fn invariant_dim_examples() {
        let tol = Tolerance::default();
        let s3 = load("S3");
        assert_eq!(invariant_dim_character_oracle(&s3, &["std", "std", "std"], &tol).unwrap(), 1);
        let q8 = load("Q8");
        assert_eq!(invariant_dim_character_oracle(&q8, &["V", "V"], &tol).unwrap(), 1);
        assert_eq!(invariant_dim_character_oracle(&q8, &["V", "V", "V"], &tol).unwrap(), 0);
        assert_eq!(invariant_dim_character_oracle(&q8, &[], &tol).unwrap(), 1);
    }

    #[test]
    fn self_dual_examples() {
        let tol = Tolerance::default();
        assert!(self_dual(load("S3").irrep("1").unwrap(), &tol));
        assert!(!self_dual(load("C3").irrep("omega").unwrap(), &tol));
        assert!(self_dual(load("Q8").irrep("V").unwrap(), &tol));
    }

    #[test]
    fn character_columns_orthogonal() {
        let tol = Tolerance::default();
        for name in zoo::GROUP_NAMES {
            let e = load(name);
            let n = e.group.order();
            for g in 0..n {
                for h in 0..n {
                    let s: Scalar = e.irreps.iter().map(|r| r.character[g] * r.character[h].conj()).sum();
                    // Σ_χ χ(g) χ(h)* = |C_G(g)| if g ~ h, else 0
                    let conj = (0..n).any(|x| e.group.mul(e.group.mul(x, g), e.group.inverse[x]) == h);
                    if conj {
                        let centralizer = (0..n).filter(|&x| e.group.mul(x, g) == e.group.mul(g, x)).count();
                        assert!((s - Complex64::new(centralizer as f64, 0.0)).norm() < tol.eps_eq * n as f64);
                    } else {
                        assert!(s.norm() < tol.eps_eq * n as f64, "{name}: columns {g},{h}");
                    }
                }
            }
        }
    }

    #[test]
    fn oracle_zero_iff_not_self_dual() {
        let tol = Tolerance::default();
        for name in zoo::GROUP_NAMES {
            let e = load(name);
            for r in &e.irreps {
                let nu = fs_indicator_character_oracle(&e, &r.label, &tol).unwrap();
                assert_eq!(nu == 0, !self_dual(r, &tol), "{name}/{}", r.label);
            }
        }
    }

    #[test]
    fn bad_data_is_rejected() {
        let tol = Tolerance::default();
        let src = r#"{"name":"bad","degree":2,"generators":[[1,0]],
            "irreps":[{"label":"1","dim":1,"gen_matrices":[[[[1,0]]]]},
                      {"label":"x","dim":1,"gen_matrices":[[[[0,1]]]]}]}"#;
        // i does not square to 1, so the word map is not a homomorphism
        assert!(matches!(GroupZooEntry::from_json_str(src, &tol), Err(Error::DataCorruption(_))));
        let incomplete = r#"{"name":"bad","degree":2,"generators":[[1,0]],
            "irreps":[{"label":"1","dim":1,"gen_matrices":[[[[1,0]]]]}]}"#;
        assert!(matches!(GroupZooEntry::from_json_str(incomplete, &tol), Err(Error::DataCorruption(_))));
        let notperm = r#"{"name":"bad","degree":2,"generators":[[0,0]],"irreps":[]}"#;
        assert!(matches!(GroupZooEntry::from_json_str(notperm, &tol), Err(Error::Schema(_))));
    }

    proptest::proptest! {
        #[test]
        fn invariant_dim_permutation_invariant(
            g in 0usize..9,
            picks in proptest::collection::vec(0usize..7, 0..4),
            seed in 0u64..1000,
        ) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let tol = Tolerance::default();
            let e = load(zoo::GROUP_NAMES[g]);
            let labels: Vec<String> = picks.iter().map(|&p| e.irreps[p % e.irreps.len()].label.clone()).collect();
            let mut shuffled = labels.clone();
            shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let a: Vec<&str> = labels.iter().map(String::as_str).collect();
            let b: Vec<&str> = shuffled.iter().map(String::as_str).collect();
            proptest::prop_assert_eq!(
                invariant_dim_character_oracle(&e, &a, &tol).unwrap(),
                invariant_dim_character_oracle(&e, &b, &tol).unwrap()
            );
        }
    }
}
