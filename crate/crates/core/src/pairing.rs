//! The bilinear pairing on H = Hom(1, X₁ ⊗ ... ⊗ X_ℓ).
//!
//! Pipeline: a dual-pairing permutation π, its involutive refinement σ, the
//! isomorphisms f_i: X_i → X_{σ(i)}∨, the iterated duality for the σ-word,
//! a braiding c: X₁...X_ℓ → X_{σ(ℓ)}...X_{σ(1)}, and finally
//! ⟨φ, φ'⟩ = d ∘ [f₁ ⊗ ... ⊗ f_ℓ ⊗ c] ∘ [φ ⊗ φ'].
//!
//! Positions are 0-based internally; braid generators s_k are 1-based and
//! swap slots k and k+1.

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indicator::{self, IndicatorValue, SelfDualityWitness};
use crate::numerics::{self, CMat, Tolerance};
use crate::repcat::{Morphism, ObjectWord, RepCategory, SimpleLabel};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualPairingPermutation {
    pub tuple: Vec<SimpleLabel>,
    pub pi: Vec<usize>,
    pub sigma: Vec<usize>,
    pub fixed_points: BTreeSet<usize>,
}

/// Disjoint cycles of a permutation, each starting at its smallest element.
pub fn cycles(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push(i);
            i = perm[i];
        }
        out.push(cycle);
    }
    out
}

pub fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}

/// Involutive refinement of π.
///
/// Odd cycles become fixed points (all their members must be self-dual).
/// On an even cycle (i₁ ... i_n), 1-based k: σ(i_k) = i_{k+1} for even k and
/// σ(i_k) = i_{k−1} for odd k, cyclically.
pub fn sigma_from_pi(pi: &[usize], self_dual: impl Fn(usize) -> bool) -> Result<Vec<usize>> {
    if !is_permutation(pi) {
        return Err(Error::HypothesisViolation(format!("{pi:?} is not a permutation")));
    }
    let mut sigma = vec![usize::MAX; pi.len()];
    for cycle in cycles(pi) {
        let n = cycle.len();
        if n % 2 == 1 {
            if let Some(&bad) = cycle.iter().find(|&&i| !self_dual(i)) {
                return Err(Error::InternalContradiction(format!(
                    "odd cycle {cycle:?} of π contains non-self-dual position {bad}"
                )));
            }
            for &i in &cycle {
                sigma[i] = i;
            }
        } else {
            for k in 1..=n {
                let at = |j: usize| cycle[(j + n - 1) % n];
                sigma[at(k)] = if k % 2 == 0 { at(k + 1) } else { at(k + n - 1) };
            }
        }
    }
    Ok(sigma)
}

fn check_duality_map(cat: &RepCategory, tuple: &[SimpleLabel], perm: &[usize], name: &str) -> Result<()> {
    if perm.len() != tuple.len() || !is_permutation(perm) {
        return Err(Error::HypothesisViolation(format!(
            "{name} = {perm:?} is not a permutation of {} positions",
            tuple.len()
        )));
    }
    for (i, &j) in perm.iter().enumerate() {
        if !cat.isomorphic(&tuple[j], &tuple[i].dual())? {
            return Err(Error::HypothesisViolation(format!(
                "{name}({i}) = {j} but {} is not dual to {}",
                tuple[j], tuple[i]
            )));
        }
    }
    Ok(())
}

/// Lexicographically smallest π with X_{π(i)} ≅ X_i∨, if any.
///
/// Isomorphism classes are matched to their dual classes; within a class any
/// injective partial assignment extends, so the greedy choice is optimal.
pub fn find_pi(cat: &RepCategory, tuple: &[SimpleLabel]) -> Result<Option<Vec<usize>>> {
    let n = tuple.len();
    let mut used = vec![false; n];
    let mut pi = Vec::with_capacity(n);
    for x in tuple {
        let target = x.dual();
        let mut found = None;
        for (j, y) in tuple.iter().enumerate() {
            if !used[j] && cat.isomorphic(y, &target)? {
                found = Some(j);
                break;
            }
        }
        match found {
            Some(j) => {
                used[j] = true;
                pi.push(j);
            }
            None => return Ok(None),
        }
    }
    Ok(Some(pi))
}

pub fn build_sigma(cat: &RepCategory, tuple: &[SimpleLabel], pi: &[usize]) -> Result<DualPairingPermutation> {
    check_duality_map(cat, tuple, pi, "π")?;
    let self_dual = tuple
        .iter()
        .map(|x| cat.is_self_dual(x))
        .collect::<Result<Vec<_>>>()?;
    let sigma = sigma_from_pi(pi, |i| self_dual[i])?;
    validate_sigma(cat, tuple, &sigma)?;
    Ok(DualPairingPermutation {
        tuple: tuple.to_vec(),
        pi: pi.to_vec(),
        fixed_points: (0..sigma.len()).filter(|&i| sigma[i] == i).collect(),
        sigma,
    })
}

fn validate_sigma(cat: &RepCategory, tuple: &[SimpleLabel], sigma: &[usize]) -> Result<()> {
    check_duality_map(cat, tuple, sigma, "σ")?;
    if sigma.iter().enumerate().any(|(i, &j)| sigma[j] != i) {
        return Err(Error::InternalContradiction(format!("σ = {sigma:?} is not an involution")));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct IsoFamily {
    /// f_i ∈ Hom(X_i, X_{σ(i)}∨)
    pub f: Vec<Morphism>,
    pub p: Vec<i32>,
    pub indicators: Vec<IndicatorValue>,
}

/// f_{σ(i)} = (id_{X_i∨} ⊗ d_{X_{σ(i)}}) ∘ (id_{X_i∨} ⊗ f_i ⊗ id_{X_{σ(i)}}) ∘ (b̃_{X_i} ⊗ id_{X_{σ(i)}})
pub fn partner_isomorphism(cat: &RepCategory, xi: &SimpleLabel, xs: &SimpleLabel, fi: &Morphism) -> Result<Morphism> {
    let id_xid = cat.identity(&ObjectWord::simple(xi.dual()))?;
    let id_xs = cat.identity(&ObjectWord::simple(xs.clone()))?;
    let bottom = cat.coevaluation_left(xi)?.tensor(&id_xs);
    let middle = id_xid.tensor(fi).tensor(&id_xs);
    let top = id_xid.tensor(&cat.evaluation(xs)?);
    top.compose(&middle.compose(&bottom)?)
}

/// Both sides of d_{X_{σ(i)}} ∘ (f_i ⊗ id) = p_i · d̃_{X_i} ∘ (id ⊗ f_{σ(i)}).
pub fn fprop_sides(
    cat: &RepCategory,
    xi: &SimpleLabel,
    xs: &SimpleLabel,
    fi: &Morphism,
    fs: &Morphism,
) -> Result<(Morphism, Morphism)> {
    let lhs = cat
        .evaluation(xs)?
        .compose(&fi.tensor(&cat.identity(&ObjectWord::simple(xs.clone()))?))?;
    let rhs = cat
        .evaluation_left(xi)?
        .compose(&cat.identity(&ObjectWord::simple(xi.clone()))?.tensor(fs))?;
    Ok((lhs, rhs))
}

fn unit_isomorphism(cat: &RepCategory, x: &SimpleLabel, target: &SimpleLabel) -> Result<Morphism> {
    let dom = ObjectWord::simple(x.clone());
    let cod = ObjectWord::simple(target.clone());
    let basis = cat.hom_basis(&dom, &cod)?;
    if basis.len() != 1 {
        return Err(Error::AbsoluteSimplicity {
            dom,
            cod,
            dim: basis.len(),
        });
    }
    let f = basis.into_iter().next().expect("one element");
    let norm = numerics::operator_norm(f.mat());
    Ok(f.scale(Complex64::new(1.0 / norm, 0.0)))
}

pub fn build_iso_family(cat: &RepCategory, tuple: &[SimpleLabel], sigma: &[usize]) -> Result<IsoFamily> {
    validate_sigma(cat, tuple, sigma)?;
    let n = tuple.len();
    let mut f: Vec<Option<Morphism>> = vec![None; n];
    for i in 0..n {
        let s = sigma[i];
        if s == i {
            let w = indicator::find_self_duality(cat, &tuple[i])?.ok_or_else(|| {
                Error::InternalContradiction(format!("fixed point {} of σ is not self-dual", tuple[i]))
            })?;
            f[i] = Some(w.phi);
        } else if i < s {
            let fi = unit_isomorphism(cat, &tuple[i], &tuple[s].dual())?;
            f[s] = Some(partner_isomorphism(cat, &tuple[i], &tuple[s], &fi)?);
            f[i] = Some(fi);
        }
    }
    let f: Vec<Morphism> = f.into_iter().map(|m| m.expect("every position assigned")).collect();
    let indicators = tuple
        .iter()
        .map(|x| indicator::fs_indicator(cat, x))
        .collect::<Result<Vec<_>>>()?;

    let mut p = Vec::with_capacity(n);
    for i in 0..n {
        let s = sigma[i];
        let (lhs, rhs) = fprop_sides(cat, &tuple[i], &tuple[s], &f[i], &f[s])?;
        let expected = if s == i { indicators[i].value() } else { 1 };
        if !lhs.approx_eq(&rhs.scale(Complex64::new(expected as f64, 0.0)), cat.tol()) {
            return Err(Error::InvariantViolation(format!(
                "f-property fails at position {i} ({}) with p = {expected}",
                tuple[i]
            )));
        }
        p.push(expected);
    }
    Ok(IsoFamily { f, p, indicators })
}

/// d for the word Y_n ⊗ ... ⊗ Y₁, i.e. a morphism
/// Y₁∨ ⊗ ... ⊗ Y_n∨ ⊗ Y_n ⊗ ... ⊗ Y₁ → 1, built as
/// d_{Y₁} ∘ [id_{Y₁∨} ⊗ d_{Y₂...Y_n} ⊗ id_{Y₁}].
pub fn iterated_duality(cat: &RepCategory, words: &[SimpleLabel]) -> Result<Morphism> {
    let Some((first, rest)) = words.split_first() else {
        return cat.identity(&ObjectWord::unit());
    };
    let inner = iterated_duality(cat, rest)?;
    let mid = cat
        .identity(&ObjectWord::simple(first.dual()))?
        .tensor(&inner)
        .tensor(&cat.identity(&ObjectWord::simple(first.clone()))?);
    cat.evaluation(first)?.compose(&mid)
}

/// Slot t of the target word holds original position σ(ℓ−1−t).
pub fn required_order(sigma: &[usize]) -> Vec<usize> {
    sigma.iter().rev().copied().collect()
}

/// Order of original positions after applying the adjacent transpositions.
pub fn apply_braid_word(len: usize, word: &[usize]) -> Result<Vec<usize>> {
    let mut order: Vec<usize> = (0..len).collect();
    for &k in word {
        if k == 0 || k >= len {
            return Err(Error::HypothesisViolation(format!(
                "braid generator s_{k} out of range for length {len}"
            )));
        }
        order.swap(k - 1, k);
    }
    Ok(order)
}

fn target_slots(required: &[usize]) -> Vec<usize> {
    let mut slot = vec![0; required.len()];
    for (t, &pos) in required.iter().enumerate() {
        slot[pos] = t;
    }
    slot
}

/// Bubble-sort word from source order to `required`.
pub fn bubble_sort_word(required: &[usize]) -> Vec<usize> {
    let slot = target_slots(required);
    let mut order: Vec<usize> = (0..required.len()).collect();
    let mut word = Vec::new();
    let n = order.len();
    for pass in 0..n {
        for j in 0..n.saturating_sub(pass + 1) {
            if slot[order[j]] > slot[order[j + 1]] {
                order.swap(j, j + 1);
                word.push(j + 1);
            }
        }
    }
    word
}

/// Every reduced word realizing `required`, in lexicographic order, up to `cap`.
pub fn reduced_words(required: &[usize], cap: usize) -> Vec<Vec<usize>> {
    fn go(order: &mut Vec<usize>, slot: &[usize], word: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, cap: usize) {
        if out.len() >= cap {
            return;
        }
        let mut done = true;
        for j in 0..order.len().saturating_sub(1) {
            if slot[order[j]] > slot[order[j + 1]] {
                done = false;
                order.swap(j, j + 1);
                word.push(j + 1);
                go(order, slot, word, out, cap);
                word.pop();
                order.swap(j, j + 1);
            }
        }
        if done {
            out.push(word.clone());
        }
    }
    let slot = target_slots(required);
    let mut out = Vec::new();
    go(&mut (0..required.len()).collect(), &slot, &mut Vec::new(), &mut out, cap);
    out
}

/// Two distinct realizing words; the second is not reduced when the
/// permutation has a unique reduced word.
pub fn distinct_braid_words(required: &[usize]) -> Vec<Vec<usize>> {
    let mut words = reduced_words(required, 2);
    if words.len() < 2 && required.len() >= 2 {
        let mut w = words[0].clone();
        w.extend([1, 1]);
        words.push(w);
    }
    words
}

/// Composite of symmetric flips along `word`.
pub fn braid_realization(
    cat: &RepCategory,
    tuple: &[SimpleLabel],
    sigma: &[usize],
    word: &[usize],
) -> Result<Morphism> {
    let required = required_order(sigma);
    let achieved = apply_braid_word(tuple.len(), word)?;
    if achieved != required {
        return Err(Error::BraidWord { achieved, required });
    }
    let mut order: Vec<usize> = (0..tuple.len()).collect();
    let word_of = |order: &[usize]| ObjectWord(order.iter().map(|&i| tuple[i].clone()).collect());
    let mut c = cat.identity(&word_of(&order))?;
    for &k in word {
        let cur = word_of(&order);
        let left = ObjectWord(cur.0[..k - 1].to_vec());
        let right = ObjectWord(cur.0[k + 1..].to_vec());
        let swap = cat
            .identity(&left)?
            .tensor(&cat.braiding_flip(&cur.0[k - 1], &cur.0[k])?)
            .tensor(&cat.identity(&right)?);
        c = swap.compose(&c)?;
        order.swap(k - 1, k);
    }
    Ok(c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    Symmetric,
    Antisymmetric,
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairingMode {
    Braided,
    Palindrome,
}

fn ser_gram<S: serde::Serializer>(g: &CMat, s: S) -> std::result::Result<S::Ok, S::Error> {
    numerics::to_pairs(g).serialize(s)
}

fn de_gram<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<CMat, D::Error> {
    let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
    numerics::from_pairs(&rows).map_err(serde::de::Error::custom)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairingReport {
    pub group: String,
    pub mode: PairingMode,
    pub tuple: Vec<SimpleLabel>,
    pub pi: Vec<usize>,
    pub sigma: Vec<usize>,
    pub p: Vec<i32>,
    pub indicators: Vec<IndicatorValue>,
    pub dim_h: usize,
    pub nu: i32,
    #[serde(serialize_with = "ser_gram", deserialize_with = "de_gram")]
    pub gram: CMat,
    pub nondegenerate: bool,
    pub symmetry: Symmetry,
    pub even_ok: bool,
    pub braid_word: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub nondegenerate: bool,
    pub symmetry: Symmetry,
    pub even_ok: bool,
}

/// Rank, (anti)symmetry and parity verdicts from a Gram matrix.
pub fn classify(gram: &CMat, nu: i32, tol: &Tolerance) -> Verdict {
    let dim = gram.nrows();
    let nondegenerate = numerics::rank(gram, tol) == dim;
    let t = gram.transpose();
    let sym = numerics::approx_equal(gram, &t, tol).unwrap_or(false);
    let anti = numerics::approx_equal(gram, &(-&t), tol).unwrap_or(false);
    let symmetry = match (sym, anti) {
        (true, true) if nu == -1 => Symmetry::Antisymmetric,
        (true, _) => Symmetry::Symmetric,
        (false, true) => Symmetry::Antisymmetric,
        (false, false) => Symmetry::Mixed,
    };
    Verdict {
        nondegenerate,
        symmetry,
        even_ok: nu == 1 || dim.is_multiple_of(2),
    }
}

impl PairingReport {
    pub fn verdict(&self) -> Verdict {
        Verdict {
            nondegenerate: self.nondegenerate,
            symmetry: self.symmetry,
            even_ok: self.even_ok,
        }
    }

    /// Recomputes the verdict from the stored Gram matrix.
    pub fn reverify(&self, tol: &Tolerance) -> Verdict {
        classify(&self.gram, self.nu, tol)
    }

    /// ⟨φ, φ'⟩ = ν ⟨φ', φ⟩ entrywise.
    pub fn gram_matches_nu(&self, tol: &Tolerance) -> bool {
        let t = self.gram.transpose() * Complex64::new(self.nu as f64, 0.0);
        numerics::approx_equal(&self.gram, &t, tol).unwrap_or(false)
    }

    /// Non-degenerate, (anti)symmetric according to ν, and even when ν = −1.
    pub fn theorem_holds(&self, tol: &Tolerance) -> bool {
        let expected = if self.nu == 1 { Symmetry::Symmetric } else { Symmetry::Antisymmetric };
        self.nondegenerate && self.symmetry == expected && self.even_ok && self.gram_matches_nu(tol)
    }
}

#[derive(Clone, Debug, Default)]
pub struct PairingOptions {
    pub pi: Option<Vec<usize>>,
    pub braid_word: Option<Vec<usize>>,
}

/// Gram matrix entries d ∘ [F ⊗ c] ∘ [φ_a ⊗ φ_b] over an orthonormal basis of H.
fn gram_matrix(
    cat: &RepCategory,
    tuple: &[SimpleLabel],
    sigma: &[usize],
    family: &IsoFamily,
    c: &Morphism,
) -> Result<(CMat, usize)> {
    let word = ObjectWord(tuple.to_vec());
    let basis = cat.invariant_basis(&word)?;
    let sigma_word: Vec<SimpleLabel> = sigma.iter().map(|&s| tuple[s].clone()).collect();
    let d = iterated_duality(cat, &sigma_word)?;
    let big_f = family
        .f
        .iter()
        .fold(cat.identity(&ObjectWord::unit())?, |acc, fi| acc.tensor(fi));
    let us = basis.iter().map(|phi| big_f.compose(phi)).collect::<Result<Vec<_>>>()?;
    let vs = basis.iter().map(|phi| c.compose(phi)).collect::<Result<Vec<_>>>()?;
    let n = basis.len();
    let mut gram = CMat::zeros(n, n);
    for (a, u) in us.iter().enumerate() {
        for (b, v) in vs.iter().enumerate() {
            gram[(a, b)] = d.compose(&u.tensor(v))?.mat()[(0, 0)];
        }
    }
    Ok((gram, n))
}

fn assemble(
    cat: &RepCategory,
    mode: PairingMode,
    sp: &DualPairingPermutation,
    braid_word: Vec<usize>,
    c: &Morphism,
) -> Result<PairingReport> {
    let family = build_iso_family(cat, &sp.tuple, &sp.sigma)?;
    let nu = indicator::nu_product(&family.indicators);
    let p_product: i32 = family.p.iter().product();
    if p_product != nu {
        return Err(Error::InternalContradiction(format!(
            "Π p_i = {p_product} but Π (1 + ν_i − ν_i²) = {nu}"
        )));
    }
    let (gram, dim_h) = gram_matrix(cat, &sp.tuple, &sp.sigma, &family, c)?;
    let v = classify(&gram, nu, cat.tol());
    Ok(PairingReport {
        group: cat.entry().name().to_string(),
        mode,
        tuple: sp.tuple.clone(),
        pi: sp.pi.clone(),
        sigma: sp.sigma.clone(),
        p: family.p,
        indicators: family.indicators,
        dim_h,
        nu,
        gram,
        nondegenerate: v.nondegenerate,
        symmetry: v.symmetry,
        even_ok: v.even_ok,
        braid_word,
    })
}

/// The braided pairing. Fails with `NotApplicable` when no π exists.
pub fn pairing_matrix(cat: &RepCategory, tuple: &[SimpleLabel], options: &PairingOptions) -> Result<PairingReport> {
    for x in tuple {
        cat.check_label(x)?;
    }
    let pi = match &options.pi {
        Some(pi) => pi.clone(),
        None => find_pi(cat, tuple)?
            .ok_or_else(|| Error::NotApplicable(format!("no dual-pairing permutation for {}", ObjectWord(tuple.to_vec()))))?,
    };
    let sp = build_sigma(cat, tuple, &pi)?;
    let word = match &options.braid_word {
        Some(w) => w.clone(),
        None => bubble_sort_word(&required_order(&sp.sigma)),
    };
    let c = braid_realization(cat, tuple, &sp.sigma, &word)?;
    assemble(cat, PairingMode::Braided, &sp, word, &c)
}

/// X_j∨ ≅ X_{ℓ−j+1} for every j.
pub fn is_palindromic(cat: &RepCategory, tuple: &[SimpleLabel]) -> Result<bool> {
    let n = tuple.len();
    for j in 0..n {
        if !cat.isomorphic(&tuple[n - 1 - j], &tuple[j].dual())? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Braiding-free variant: σ is the reversal and c the identity.
pub fn pairing_palindrome(cat: &RepCategory, tuple: &[SimpleLabel]) -> Result<PairingReport> {
    for x in tuple {
        cat.check_label(x)?;
    }
    if !is_palindromic(cat, tuple)? {
        return Err(Error::NotApplicable(format!(
            "{} is not duality-palindromic",
            ObjectWord(tuple.to_vec())
        )));
    }
    let n = tuple.len();
    let sigma: Vec<usize> = (0..n).rev().collect();
    validate_sigma(cat, tuple, &sigma)?;
    let sp = DualPairingPermutation {
        tuple: tuple.to_vec(),
        pi: sigma.clone(),
        fixed_points: (0..n).filter(|&i| sigma[i] == i).collect(),
        sigma,
    };
    let c = cat.identity(&ObjectWord(tuple.to_vec()))?;
    assemble(cat, PairingMode::Palindrome, &sp, Vec::new(), &c)
}

/// Witness for σ-fixed positions, exposed for diagnostics.
pub fn fixed_point_witness(cat: &RepCategory, x: &SimpleLabel) -> Result<SelfDualityWitness> {
    indicator::find_self_duality(cat, x)?
        .ok_or_else(|| Error::HypothesisViolation(format!("{x} is not self-dual")))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupScanRow {
    pub tuple: Vec<SimpleLabel>,
    pub applicable: bool,
    pub dim_h: usize,
    pub nu: Option<i32>,
    pub symmetry: Option<Symmetry>,
    pub nondegenerate: Option<bool>,
    pub even_ok: Option<bool>,
    pub violation: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub tuples_scanned: usize,
    pub skipped_no_pi: usize,
    pub nu_minus_one: usize,
    pub nu_minus_one_nonzero_dim: usize,
    pub violations: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupScanReport {
    pub group: String,
    pub max_len: usize,
    pub rows: Vec<GroupScanRow>,
    pub summary: ScanSummary,
}

/// Non-decreasing index sequences of length 1..=max_len over `n` symbols.
pub fn multisets(n: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    fn go(n: usize, len: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(n, len, i, cur, out);
            cur.pop();
        }
    }
    for len in 1..=max_len {
        go(n, len, 0, &mut cur, &mut out);
    }
    out
}

fn scan_row(cat: &RepCategory, tuple: Vec<SimpleLabel>) -> Result<GroupScanRow> {
    match pairing_matrix(cat, &tuple, &PairingOptions::default()) {
        Ok(r) => {
            let violation = !r.theorem_holds(cat.tol());
            Ok(GroupScanRow {
                tuple,
                applicable: true,
                dim_h: r.dim_h,
                nu: Some(r.nu),
                symmetry: Some(r.symmetry),
                nondegenerate: Some(r.nondegenerate),
                even_ok: Some(r.even_ok),
                violation,
            })
        }
        Err(Error::NotApplicable(_)) => {
            let dim_h = cat.invariant_basis(&ObjectWord(tuple.clone()))?.len();
            Ok(GroupScanRow {
                tuple,
                applicable: false,
                dim_h,
                nu: None,
                symmetry: None,
                nondegenerate: None,
                even_ok: None,
                violation: false,
            })
        }
        Err(e) => Err(e),
    }
}

/// Morphism-level evenness audit over all multisets of irreps up to `max_len`.
/// Row order is independent of `jobs`.
pub fn scan_group(cat: &RepCategory, max_len: usize, jobs: usize) -> Result<GroupScanReport> {
    use rayon::prelude::*;
    let simples = cat.simples();
    let tuples: Vec<Vec<SimpleLabel>> = multisets(simples.len(), max_len)
        .into_iter()
        .map(|idx| idx.into_iter().map(|i| simples[i].clone()).collect())
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvariantViolation(e.to_string()))?;
    let rows: Vec<GroupScanRow> = pool.install(|| {
        tuples
            .into_par_iter()
            .map(|t| scan_row(cat, t))
            .collect::<Result<Vec<_>>>()
    })?;
    let mut summary = ScanSummary::default();
    for r in &rows {
        summary.tuples_scanned += 1;
        if !r.applicable {
            summary.skipped_no_pi += 1;
        }
        if r.nu == Some(-1) {
            summary.nu_minus_one += 1;
            if r.dim_h > 0 {
                summary.nu_minus_one_nonzero_dim += 1;
            }
        }
        if r.violation {
            summary.violations += 1;
        }
    }
    Ok(GroupScanReport {
        group: cat.entry().name().to_string(),
        max_len,
        rows,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    fn cat(name: &str) -> RepCategory {
        RepCategory::new(zoo::group(name).unwrap(), Tolerance::default())
    }

    fn t(s: &str) -> Vec<SimpleLabel> {
        s.parse::<ObjectWord>().unwrap().0
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma_from_pi(&[0, 1, 2], |_| true).unwrap(), vec![0, 1, 2]);
        // a 3-cycle on self-dual objects becomes the identity
        assert_eq!(sigma_from_pi(&[1, 2, 0], |_| true).unwrap(), vec![0, 1, 2]);
        // (1 2 3 4) ↦ (1 4)(2 3)
        assert_eq!(sigma_from_pi(&[1, 2, 3, 0], |_| false).unwrap(), vec![3, 2, 1, 0]);
        // 2-cycles are kept
        assert_eq!(sigma_from_pi(&[1, 0, 3, 2], |_| false).unwrap(), vec![1, 0, 3, 2]);
        assert!(matches!(
            sigma_from_pi(&[1, 2, 0], |i| i != 1),
            Err(Error::InternalContradiction(_))
        ));

        let c3 = cat("C3");
        let tuple = t("omega,omegabar,omega,omegabar");
        let sp = build_sigma(&c3, &tuple, &[1, 2, 3, 0]).unwrap();
        assert_eq!(sp.sigma, vec![3, 2, 1, 0]);
        assert!(sp.fixed_points.is_empty());
        assert!(matches!(
            build_sigma(&c3, &tuple, &[0, 1, 2, 3]),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn find_pi_examples() {
        assert_eq!(find_pi(&cat("Q8"), &t("V,V")).unwrap(), Some(vec![0, 1]));
        assert_eq!(find_pi(&cat("C3"), &t("omega,omegabar")).unwrap(), Some(vec![1, 0]));
        assert_eq!(find_pi(&cat("C3"), &t("omega,omega")).unwrap(), None);
        assert_eq!(find_pi(&cat("C3"), &t("omega,omega^")).unwrap(), Some(vec![1, 0]));
    }

    #[test]
    fn iso_family_examples() {
        let s3 = cat("S3");
        let fam = build_iso_family(&s3, &t("1,1"), &[0, 1]).unwrap();
        assert_eq!(fam.p, vec![1, 1]);
        assert!((fam.f[0].mat()[(0, 0)].norm() - 1.0).abs() < 1e-12);
        let fam = build_iso_family(&cat("Q8"), &t("V,V"), &[0, 1]).unwrap();
        assert_eq!(fam.p, vec![-1, -1]);
        let c3 = cat("C3");
        let tuple = t("omega,omegabar");
        let fam = build_iso_family(&c3, &tuple, &[1, 0]).unwrap();
        assert_eq!(fam.p, vec![1, 1]);
        // recomputing from the other end of the orbit recovers f_0
        let back = partner_isomorphism(&c3, &tuple[1], &tuple[0], &fam.f[1]).unwrap();
        assert!(back.approx_eq(&fam.f[0], c3.tol()));
    }

    #[test]
    fn iso_family_on_two_orbit_of_self_dual_objects() {
        let q8 = cat("Q8");
        let tuple = t("V,V");
        let fam = build_iso_family(&q8, &tuple, &[1, 0]).unwrap();
        assert_eq!(fam.p, vec![1, 1]);
        let back = partner_isomorphism(&q8, &tuple[1], &tuple[0], &fam.f[1]).unwrap();
        assert!(back.approx_eq(&fam.f[0], q8.tol()));
    }

    #[test]
    fn iterated_duality_examples() {
        let s3 = cat("S3");
        let x = SimpleLabel::new("std");
        assert_eq!(iterated_duality(&s3, std::slice::from_ref(&x)).unwrap(), s3.evaluation(&x).unwrap());
        assert_eq!(iterated_duality(&s3, &[]).unwrap().mat(), &numerics::identity(1));
        // hand-composed: d_{Y1} ∘ (id_{Y1∨} ⊗ d_{Y2} ⊗ id_{Y1})
        let y1 = SimpleLabel::new("std");
        let y2 = SimpleLabel::new("sgn");
        let by_hand = s3
            .evaluation(&y1)
            .unwrap()
            .compose(
                &s3.identity(&ObjectWord::simple(y1.dual()))
                    .unwrap()
                    .tensor(&s3.evaluation(&y2).unwrap())
                    .tensor(&s3.identity(&ObjectWord::simple(y1.clone())).unwrap()),
            )
            .unwrap();
        let d = iterated_duality(&s3, &[y1.clone(), y2.clone()]).unwrap();
        assert!(d.approx_eq(&by_hand, s3.tol()));
        // equals the word-level evaluation for Y2 ⊗ Y1
        let w = ObjectWord(vec![y2, y1]);
        assert!(d.approx_eq(&s3.evaluation_word(&w).unwrap(), s3.tol()));
    }

    #[test]
    fn braid_realization_examples() {
        let s3 = cat("S3");
        let c = braid_realization(&s3, &t("std"), &[0], &[]).unwrap();
        assert!(c.approx_eq(&s3.identity(&"std".parse().unwrap()).unwrap(), s3.tol()));
        let c = braid_realization(&s3, &t("std,sgn"), &[0, 1], &[1]).unwrap();
        assert_eq!(c.cod(), &"sgn,std".parse::<ObjectWord>().unwrap());
        let triple = t("std,std,std");
        let words = reduced_words(&required_order(&[0, 1, 2]), 10);
        assert_eq!(words, vec![vec![1, 2, 1], vec![2, 1, 2]]);
        let mut verdicts = Vec::new();
        for w in &words {
            let opts = PairingOptions {
                pi: None,
                braid_word: Some(w.clone()),
            };
            let r = pairing_matrix(&s3, &triple, &opts).unwrap();
            verdicts.push(r.verdict());
        }
        assert_eq!(verdicts[0], verdicts[1]);
        assert!(verdicts[0].nondegenerate);
        let err = braid_realization(&s3, &triple, &[0, 1, 2], &[1]).unwrap_err();
        assert!(matches!(err, Error::BraidWord { .. }));
    }

    #[test]
    fn bubble_word_realizes_target() {
        for sigma in [vec![0, 1, 2, 3], vec![3, 2, 1, 0], vec![1, 0, 3, 2], vec![0, 2, 1, 3]] {
            let req = required_order(&sigma);
            let w = bubble_sort_word(&req);
            assert_eq!(apply_braid_word(4, &w).unwrap(), req);
            for r in reduced_words(&req, 100) {
                assert_eq!(r.len(), w.len());
                assert_eq!(apply_braid_word(4, &r).unwrap(), req);
            }
            let d = distinct_braid_words(&req);
            assert_eq!(d.len(), 2);
            assert_ne!(d[0], d[1]);
        }
    }

    #[test]
    fn pairing_examples() {
        let s3 = cat("S3");
        let r = pairing_matrix(&s3, &t("std,std,std"), &PairingOptions::default()).unwrap();
        assert_eq!((r.dim_h, r.nu), (1, 1));
        assert!(r.gram[(0, 0)].norm() > 1e-6);
        assert_eq!(r.symmetry, Symmetry::Symmetric);
        assert!(r.nondegenerate && r.even_ok);

        let q8 = cat("Q8");
        let r = pairing_matrix(&q8, &t("V,V,V"), &PairingOptions::default()).unwrap();
        assert_eq!((r.dim_h, r.nu), (0, -1));
        assert_eq!(r.gram.shape(), (0, 0));
        assert!(r.even_ok && r.nondegenerate);
        assert_eq!(r.symmetry, Symmetry::Antisymmetric);

        let c3 = cat("C3");
        let r = pairing_matrix(&c3, &t("omega,omegabar"), &PairingOptions::default()).unwrap();
        assert_eq!((r.dim_h, r.nu), (1, 1));
        assert!(r.theorem_holds(c3.tol()));

        assert!(matches!(
            pairing_matrix(&c3, &t("omega,omega"), &PairingOptions::default()),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn palindrome_examples() {
        let c3 = cat("C3");
        let a = pairing_palindrome(&c3, &t("omega,omegabar")).unwrap();
        let b = pairing_matrix(&c3, &t("omega,omegabar"), &PairingOptions::default()).unwrap();
        assert_eq!(a.verdict(), b.verdict());
        assert_eq!(a.dim_h, b.dim_h);

        let q8 = cat("Q8");
        let r = pairing_palindrome(&q8, &t("V,V")).unwrap();
        assert_eq!(r.dim_h, 1);
        assert_eq!(r.symmetry, Symmetry::Symmetric);
        assert!(r.nondegenerate);

        let s3 = cat("S3");
        let r = pairing_palindrome(&s3, &t("std,sgn"));
        assert!(matches!(r, Err(Error::NotApplicable(_))));
        let r = pairing_matrix(&s3, &t("std,sgn"), &PairingOptions::default()).unwrap();
        assert_eq!((r.pi.clone(), r.dim_h), (vec![0, 1], 0));
        let r = pairing_palindrome(&s3, &t("std,sgn,std")).unwrap();
        assert_eq!(r.dim_h, 1);
    }

    #[test]
    fn report_round_trips_through_json() {
        let s3 = cat("S3");
        let r = pairing_matrix(&s3, &t("std,std,std,std"), &PairingOptions::default()).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        let back: PairingReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back.reverify(s3.tol()), r.verdict());
        assert_eq!(back.dim_h, r.dim_h);
    }

    #[test]
    fn scans_are_job_count_independent() {
        let q8 = cat("Q8");
        let a = scan_group(&q8, 3, 1).unwrap();
        let b = scan_group(&q8, 3, 4).unwrap();
        assert_eq!(a.summary, b.summary);
        assert_eq!(a.summary.violations, 0);
        let ta: Vec<_> = a.rows.iter().map(|r| r.tuple.clone()).collect();
        let tb: Vec<_> = b.rows.iter().map(|r| r.tuple.clone()).collect();
        assert_eq!(ta, tb);
    }

    #[test]
    fn multisets_count() {
        // C(n + k - 1, k) summed over k = 1..=3 for n = 3: 3 + 6 + 10
        assert_eq!(multisets(3, 3).len(), 19);
    }
}
