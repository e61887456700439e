//! Fusion rings: multiplicities N_{ab}^c, duality, indicators and optional
//! modular data, with the fusion-level evenness audit.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupmodel::GroupZooEntry;
use crate::indicator::{self, IndicatorValue};
use crate::numerics::{self, CMat, Tolerance};
use crate::repcat::{RepCategory, SimpleLabel};

#[derive(Clone, Debug, PartialEq)]
pub struct FusionData {
    pub name: String,
    pub labels: Vec<String>,
    pub unit: usize,
    /// n[a][b][c] = N_{ab}^c
    pub n: Vec<Vec<Vec<u32>>>,
    pub dual: Vec<usize>,
    pub nu: Vec<IndicatorValue>,
    pub s: Option<CMat>,
    pub theta: Option<Vec<Complex64>>,
    pub provenance: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FusionFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    labels: Vec<String>,
    unit: String,
    #[serde(rename = "N")]
    n: Vec<Vec<Vec<i64>>>,
    dual: BTreeMap<String, String>,
    nu: BTreeMap<String, i32>,
    #[serde(rename = "S", default, skip_serializing_if = "Option::is_none")]
    s: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    provenance: BTreeMap<String, String>,
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn violation(msg: impl Into<String>) -> Error {
    Error::InvariantViolation(msg.into())
}

impl FusionData {
    pub fn from_json_str(src: &str, tol: &Tolerance) -> Result<Self> {
        let raw: FusionFile = serde_json::from_str(src).map_err(|e| schema(e.to_string()))?;
        let fd = Self::from_file(raw)?;
        fd.validate(tol)?;
        Ok(fd)
    }

    pub fn load(path: &Path, tol: &Tolerance) -> Result<Self> {
        let mut fd = Self::from_json_str(&std::fs::read_to_string(path)?, tol)?;
        if fd.name.is_empty() {
            if let Some(stem) = path.file_stem() {
                fd.name = stem.to_string_lossy().into_owned();
            }
        }
        Ok(fd)
    }

    fn from_file(raw: FusionFile) -> Result<Self> {
        let k = raw.labels.len();
        if k == 0 {
            return Err(schema("no labels"));
        }
        let index = |l: &str| -> Result<usize> {
            raw.labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| schema(format!("unknown label `{l}`")))
        };
        for (i, l) in raw.labels.iter().enumerate() {
            if raw.labels[..i].contains(l) {
                return Err(schema(format!("duplicate label `{l}`")));
            }
        }
        let unit = index(&raw.unit)?;
        if raw.n.len() != k || raw.n.iter().any(|r| r.len() != k || r.iter().any(|c| c.len() != k)) {
            return Err(schema(format!("N must have shape {k}x{k}x{k}")));
        }
        let n = raw
            .n
            .iter()
            .enumerate()
            .map(|(a, plane)| {
                plane
                    .iter()
                    .enumerate()
                    .map(|(b, line)| {
                        line.iter()
                            .enumerate()
                            .map(|(c, &v)| {
                                u32::try_from(v).map_err(|_| schema(format!("N[{a}][{b}][{c}] = {v} is negative")))
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut dual = vec![usize::MAX; k];
        let mut nu = vec![IndicatorValue::NotSelfDual; k];
        for (i, l) in raw.labels.iter().enumerate() {
            let d = raw.dual.get(l).ok_or_else(|| schema(format!("dual of `{l}` missing")))?;
            dual[i] = index(d)?;
            let v = *raw.nu.get(l).ok_or_else(|| schema(format!("nu of `{l}` missing")))?;
            nu[i] = IndicatorValue::try_from(v).map_err(schema)?;
        }
        for key in raw.dual.keys().chain(raw.nu.keys()) {
            index(key)?;
        }
        let s = raw.s.as_deref().map(numerics::from_pairs).transpose()?;
        if let Some(s) = &s {
            if s.shape() != (k, k) {
                return Err(schema(format!("S must be {k}x{k}")));
            }
        }
        let theta = raw
            .theta
            .map(|t| t.into_iter().map(|[re, im]| Complex64::new(re, im)).collect::<Vec<_>>());
        if theta.as_ref().is_some_and(|t| t.len() != k) {
            return Err(schema(format!("theta must have {k} entries")));
        }
        Ok(FusionData {
            name: raw.name.unwrap_or_default(),
            labels: raw.labels,
            unit,
            n,
            dual,
            nu,
            s,
            theta,
            provenance: raw.provenance,
        })
    }

    pub fn to_json(&self) -> String {
        let mut dual = BTreeMap::new();
        let mut nu = BTreeMap::new();
        for (i, l) in self.labels.iter().enumerate() {
            dual.insert(l.clone(), self.labels[self.dual[i]].clone());
            nu.insert(l.clone(), self.nu[i].value());
        }
        let fields: Vec<(&str, serde_json::Value)> = [
            ("name", Some(serde_json::json!(self.name))),
            ("labels", Some(serde_json::json!(self.labels))),
            ("unit", Some(serde_json::json!(self.labels[self.unit]))),
            ("N", Some(serde_json::json!(self.n))),
            ("dual", Some(serde_json::json!(dual))),
            ("nu", Some(serde_json::json!(nu))),
            ("S", self.s.as_ref().map(|s| serde_json::json!(numerics::to_pairs(s)))),
            (
                "theta",
                self.theta
                    .as_ref()
                    .map(|t| serde_json::json!(t.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())),
            ),
            (
                "provenance",
                (!self.provenance.is_empty()).then(|| serde_json::json!(self.provenance)),
            ),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| (k, v)))
        .collect();
        let body: Vec<String> = fields
            .iter()
            .map(|(k, v)| format!(" {}: {}", serde_json::json!(k), v))
            .collect();
        format!("{{\n{}\n}}\n", body.join(",\n"))
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn n(&self, a: usize, b: usize, c: usize) -> u32 {
        self.n[a][b][c]
    }

    pub fn validate(&self, tol: &Tolerance) -> Result<()> {
        let k = self.rank();
        let u = self.unit;
        let lbl = |i: usize| &self.labels[i];
        for a in 0..k {
            for b in 0..k {
                let d = u32::from(a == b);
                if self.n[u][a][b] != d || self.n[a][u][b] != d {
                    return Err(violation(format!(
                        "unit law fails at a = {a} ({}), b = {b} ({})",
                        lbl(a),
                        lbl(b)
                    )));
                }
            }
        }
        for a in 0..k {
            if self.dual[self.dual[a]] != a {
                return Err(violation(format!("dual is not an involution at {a} ({})", lbl(a))));
            }
            for b in 0..k {
                let want = u32::from(b == self.dual[a]);
                if self.n[a][b][u] != want {
                    return Err(violation(format!(
                        "rigidity: N[{a}][{b}][unit] = {} ({} x {}), expected {want}",
                        self.n[a][b][u],
                        lbl(a),
                        lbl(b)
                    )));
                }
            }
        }
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    for d in 0..k {
                        let l: u64 = (0..k).map(|e| self.n[a][b][e] as u64 * self.n[e][c][d] as u64).sum();
                        let r: u64 = (0..k).map(|f| self.n[b][c][f] as u64 * self.n[a][f][d] as u64).sum();
                        if l != r {
                            return Err(violation(format!(
                                "associativity fails at (a, b, c, d) = ({a}, {b}, {c}, {d}): {l} vs {r}"
                            )));
                        }
                    }
                }
            }
        }
        if self.nu[u] != IndicatorValue::Real {
            return Err(violation("nu of the unit must be +1"));
        }
        for a in 0..k {
            let self_dual = self.dual[a] == a;
            if self_dual == (self.nu[a] == IndicatorValue::NotSelfDual) {
                return Err(violation(format!(
                    "nu({}) = {} inconsistent with dual({}) = {}",
                    lbl(a),
                    self.nu[a],
                    lbl(a),
                    lbl(self.dual[a])
                )));
            }
        }
        if let Some(t) = &self.theta {
            if let Some(i) = t.iter().position(|z| (z.norm() - 1.0).abs() > tol.eps_eq) {
                return Err(violation(format!("theta({}) is not a phase", lbl(i))));
            }
        }
        if self.s.is_some() {
            self.check_verlinde(tol)?;
        }
        Ok(())
    }

    /// Σ_x S_{ax} S_{bx} S̄_{cx} / S_{1x}
    pub fn verlinde(&self, a: usize, b: usize, c: usize) -> Option<Complex64> {
        let s = self.s.as_ref()?;
        let u = self.unit;
        Some((0..self.rank()).map(|x| s[(a, x)] * s[(b, x)] * s[(c, x)].conj() / s[(u, x)]).sum())
    }

    pub fn check_verlinde(&self, tol: &Tolerance) -> Result<()> {
        let Some(s) = &self.s else {
            return Ok(());
        };
        let k = self.rank();
        let ssh = s * s.adjoint();
        if !numerics::approx_equal(&ssh, &numerics::identity(k), tol)? {
            return Err(violation("S is not unitary"));
        }
        if let Some(x) = (0..k).find(|&x| s[(self.unit, x)].norm() <= tol.eps_eq) {
            return Err(violation(format!("S[unit][{x}] vanishes")));
        }
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    let v = self.verlinde(a, b, c).expect("S present");
                    let want = Complex64::new(self.n[a][b][c] as f64, 0.0);
                    if (v - want).norm() > tol.eps_eq {
                        return Err(violation(format!(
                            "Verlinde fails at ({a}, {b}, {c}): {v} vs N = {}",
                            self.n[a][b][c]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// dim Hom(1, μ₁ ⊗ ... ⊗ μ_ℓ); the empty tuple gives 1.
    pub fn multi_fusion_dim_idx(&self, tuple: &[usize]) -> u64 {
        let k = self.rank();
        let mut v = vec![0u64; k];
        v[self.unit] = 1;
        for &mu in tuple {
            let mut w = vec![0u64; k];
            for (b, &vb) in v.iter().enumerate() {
                if vb == 0 {
                    continue;
                }
                for (c, wc) in w.iter_mut().enumerate() {
                    *wc += vb * self.n[b][mu][c] as u64;
                }
            }
            v = w;
        }
        v[self.unit]
    }

    pub fn multi_fusion_dim(&self, tuple: &[&str]) -> Result<u64> {
        let idx = tuple.iter().map(|l| self.index(l)).collect::<Result<Vec<_>>>()?;
        Ok(self.multi_fusion_dim_idx(&idx))
    }

    pub fn nu_product_idx(&self, tuple: &[usize]) -> i32 {
        indicator::nu_product(&tuple.iter().map(|&i| self.nu[i]).collect::<Vec<_>>())
    }

    /// Each label occurs as often as its dual.
    pub fn closed_under_duality(&self, tuple: &[usize]) -> bool {
        let mut count = vec![0usize; self.rank()];
        for &i in tuple {
            count[i] += 1;
        }
        (0..self.rank()).all(|a| count[a] == count[self.dual[a]])
    }

    pub fn evenness_scan(&self, max_len: usize) -> FusionScanReport {
        let mut rows = Vec::new();
        let mut summary = FusionScanSummary::default();
        for tuple in crate::pairing::multisets(self.rank(), max_len) {
            summary.tuples_scanned += 1;
            if !self.closed_under_duality(&tuple) {
                summary.skipped_no_pi += 1;
                continue;
            }
            let nu = self.nu_product_idx(&tuple);
            let dim = self.multi_fusion_dim_idx(&tuple);
            let violation = nu == -1 && dim % 2 == 1;
            if nu == -1 {
                summary.nu_minus_one += 1;
            }
            if violation {
                summary.violations += 1;
            }
            rows.push(FusionScanRow {
                tuple: tuple.iter().map(|&i| self.labels[i].clone()).collect(),
                nu,
                dim,
                violation,
            });
        }
        FusionScanReport {
            name: self.name.clone(),
            max_len,
            rows,
            summary,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FusionScanRow {
    pub tuple: Vec<String>,
    pub nu: i32,
    pub dim: u64,
    pub violation: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FusionScanSummary {
    pub tuples_scanned: usize,
    pub skipped_no_pi: usize,
    pub nu_minus_one: usize,
    pub violations: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FusionScanReport {
    pub name: String,
    pub max_len: usize,
    pub rows: Vec<FusionScanRow>,
    pub summary: FusionScanSummary,
}

impl FusionScanReport {
    pub fn violations(&self) -> impl Iterator<Item = &FusionScanRow> {
        self.rows.iter().filter(|r| r.violation)
    }
}

/// Fusion ring of Rep(G): N from character inner products, ν from the
/// categorical indicator.
pub fn repg_to_fusion(entry: &GroupZooEntry, tol: &Tolerance) -> Result<FusionData> {
    let labels = entry.labels();
    let k = labels.len();
    let order = entry.group.order() as f64;
    let chars: Vec<&[Complex64]> = entry.irreps.iter().map(|r| r.character.as_slice()).collect();
    let mut n = vec![vec![vec![0u32; k]; k]; k];
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                let ip: Complex64 = (0..entry.group.order())
                    .map(|g| chars[a][g] * chars[b][g] * chars[c][g].conj())
                    .sum::<Complex64>()
                    / order;
                let r = ip.re.round();
                if (ip - Complex64::new(r, 0.0)).norm() > 1e-6 || r < 0.0 {
                    return Err(Error::DataCorruption(format!("non-integral multiplicity {ip}")));
                }
                n[a][b][c] = r as u32;
            }
        }
    }
    let dual = labels
        .iter()
        .map(|l| entry.dual_label(l, tol).and_then(|d| entry.irrep_index(&d)))
        .collect::<Result<Vec<_>>>()?;
    let cat = RepCategory::new(entry.clone(), *tol);
    let nu = labels
        .iter()
        .map(|l| indicator::fs_indicator(&cat, &SimpleLabel::new(l.clone())))
        .collect::<Result<Vec<_>>>()?;
    let unit = (0..k)
        .find(|&i| chars[i].iter().all(|z| (z - Complex64::new(1.0, 0.0)).norm() < 1e-9))
        .ok_or_else(|| Error::DataCorruption("no trivial irrep".into()))?;
    let mut provenance = BTreeMap::new();
    provenance.insert("N".into(), format!("character inner products of {}", entry.name()));
    provenance.insert("nu".into(), format!("categorical indicators of {}", entry.name()));
    let fd = FusionData {
        name: format!("rep_{}", entry.name().to_lowercase()),
        labels,
        unit,
        n,
        dual,
        nu,
        s: None,
        theta: None,
        provenance,
    };
    fd.validate(tol)?;
    Ok(fd)
}
