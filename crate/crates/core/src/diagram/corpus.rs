//! `.diag` corpus files: one expression plus `#` directives.
//!
//! ```text
//! # zoo: Q8
//! # seed: 3
//! # bind Phi = witness V
//! # bind Phiinv = witness-inv V
//! # bind f = hom V -> V        first basis element of Hom(V, V)
//! # bind g = random V -> V     seeded random intertwiner
//! # bind phi = invariant V,V   first basis element of Hom(1, V ⊗ V)
//! # let h = dual(f)
//! # dom: V^
//! # cod: V^
//! # shape: 2x2
//! # value: identity | zero | scalar <re>
//! # equals: <expr>
//! # equals-scaled: <re> <expr>
//! # error: syntax <pos> | type <pos> | unbound <name> <pos>
//! ```
//!
//! Non-directive lines are joined with single spaces to form the expression.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{evaluate, parse, Environment};
use crate::error::{Error, Result};
use crate::indicator;
use crate::numerics::{self, Tolerance};
use crate::repcat::{Morphism, ObjectWord, RepCategory};
use crate::zoo;

#[derive(Clone, Debug, PartialEq)]
pub enum ExpectedError {
    Syntax(usize),
    Type(usize),
    Unbound(String, usize),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Bind {
    Witness(String),
    WitnessInv(String),
    Hom(ObjectWord, ObjectWord),
    Random(ObjectWord, ObjectWord),
    Invariant(ObjectWord),
    Let(String),
}

#[derive(Clone, Debug, Default)]
pub struct CorpusCase {
    pub path: PathBuf,
    pub zoo: Option<String>,
    pub seed: u64,
    pub binds: Vec<(String, Bind)>,
    pub expr: String,
    pub dom: Option<ObjectWord>,
    pub cod: Option<ObjectWord>,
    pub shape: Option<(usize, usize)>,
    pub value: Option<String>,
    pub equals: Vec<(f64, String)>,
    pub error: Option<ExpectedError>,
}

fn bad(path: &Path, msg: impl std::fmt::Display) -> Error {
    Error::Schema(format!("{}: {msg}", path.display()))
}

fn arrow(path: &Path, s: &str) -> Result<(ObjectWord, ObjectWord)> {
    let (a, b) = s.split_once("->").ok_or_else(|| bad(path, format!("expected `X -> Y`, got `{s}`")))?;
    Ok((a.parse()?, b.parse()?))
}

impl CorpusCase {
    pub fn parse_file(path: &Path) -> Result<Self> {
        Self::parse_str(path, &std::fs::read_to_string(path)?)
    }

    pub fn parse_str(path: &Path, src: &str) -> Result<Self> {
        let mut case = CorpusCase {
            path: path.to_path_buf(),
            ..Default::default()
        };
        let mut body = Vec::new();
        for line in src.lines() {
            let line = line.trim();
            let Some(d) = line.strip_prefix('#') else {
                if !line.is_empty() {
                    body.push(line);
                }
                continue;
            };
            let Some((key, val)) = d.split_once(':').filter(|(k, _)| !k.trim().starts_with("bind ") && !k.trim().starts_with("let ")) else {
                let d = d.trim();
                if let Some(rest) = d.strip_prefix("bind ").or_else(|| d.strip_prefix("let ")) {
                    let (name, spec) = rest.split_once('=').ok_or_else(|| bad(path, format!("bad binding `{d}`")))?;
                    let (name, spec) = (name.trim().to_string(), spec.trim());
                    let bind = if d.starts_with("let ") {
                        Bind::Let(spec.to_string())
                    } else {
                        let (kind, arg) = spec.split_once(' ').unwrap_or((spec, ""));
                        match kind {
                            "witness" => Bind::Witness(arg.trim().to_string()),
                            "witness-inv" => Bind::WitnessInv(arg.trim().to_string()),
                            "hom" => {
                                let (a, b) = arrow(path, arg)?;
                                Bind::Hom(a, b)
                            }
                            "random" => {
                                let (a, b) = arrow(path, arg)?;
                                Bind::Random(a, b)
                            }
                            "invariant" => Bind::Invariant(arg.parse()?),
                            other => return Err(bad(path, format!("unknown binding kind `{other}`"))),
                        }
                    };
                    case.binds.push((name, bind));
                }
                continue;
            };
            let val = val.trim();
            match key.trim() {
                "zoo" => case.zoo = Some(val.to_string()),
                "seed" => case.seed = val.parse().map_err(|e| bad(path, e))?,
                "dom" => case.dom = Some(val.parse()?),
                "cod" => case.cod = Some(val.parse()?),
                "shape" => {
                    let (r, c) = val.split_once('x').ok_or_else(|| bad(path, "shape must be RxC"))?;
                    case.shape = Some((
                        r.trim().parse().map_err(|e| bad(path, e))?,
                        c.trim().parse().map_err(|e| bad(path, e))?,
                    ));
                }
                "value" => case.value = Some(val.to_string()),
                "equals" => case.equals.push((1.0, val.to_string())),
                "equals-scaled" => {
                    let (k, e) = val.split_once(' ').ok_or_else(|| bad(path, "equals-scaled needs a factor"))?;
                    case.equals.push((k.parse().map_err(|e| bad(path, e))?, e.to_string()));
                }
                "error" => {
                    let parts: Vec<&str> = val.split_whitespace().collect();
                    let pos = |s: &str| s.parse::<usize>().map_err(|e| bad(path, e));
                    case.error = Some(match parts.as_slice() {
                        ["syntax", p] => ExpectedError::Syntax(pos(p)?),
                        ["type", p] => ExpectedError::Type(pos(p)?),
                        ["unbound", n, p] => ExpectedError::Unbound(n.to_string(), pos(p)?),
                        _ => return Err(bad(path, format!("bad error directive `{val}`"))),
                    });
                }
                _ => {}
            }
        }
        case.expr = body.join(" ");
        Ok(case)
    }

    fn environment(&self, cat: &RepCategory) -> Result<Environment> {
        let mut env = Environment::new();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        for (name, bind) in &self.binds {
            let witness = |x: &str| -> Result<indicator::SelfDualityWitness> {
                let x = x.parse()?;
                indicator::find_self_duality(cat, &x)?.ok_or_else(|| bad(&self.path, format!("{x} is not self-dual")))
            };
            let first = |v: Vec<Morphism>| v.into_iter().next().ok_or_else(|| bad(&self.path, format!("`{name}`: empty space")));
            let m = match bind {
                Bind::Witness(x) => witness(x)?.phi,
                Bind::WitnessInv(x) => witness(x)?.phi_inv,
                Bind::Hom(a, b) => first(cat.hom_basis(a, b)?)?,
                Bind::Random(a, b) => cat.random_intertwiner(a, b, &mut rng)?,
                Bind::Invariant(w) => first(cat.invariant_basis(w)?)?,
                Bind::Let(src) => evaluate(&parse(src)?, &env, cat)?,
            };
            env.bind(name.clone(), m)?;
        }
        Ok(env)
    }

    fn category(&self, tol: &Tolerance) -> Result<RepCategory> {
        let name = self.zoo.as_deref().ok_or_else(|| bad(&self.path, "missing `# zoo:`"))?;
        Ok(RepCategory::new(zoo::group_with(name, tol)?, *tol))
    }

    /// Runs the case; `Ok` carries a one-line summary.
    pub fn run(&self, tol: &Tolerance) -> Result<String> {
        let cat = self.category(tol)?;
        let env = self.environment(&cat)?;
        let outcome = parse(&self.expr).and_then(|e| evaluate(&e, &env, &cat));
        match (&self.error, outcome) {
            (Some(want), Ok(m)) => Err(bad(
                &self.path,
                format!("expected {want:?}, evaluated to {} -> {}", m.dom(), m.cod()),
            )),
            (Some(want), Err(err)) => {
                let got = match &err {
                    Error::Syntax { position, .. } => Some(ExpectedError::Syntax(*position)),
                    Error::ComposeMismatch { position, .. } => Some(ExpectedError::Type(*position)),
                    Error::Unbound { position, name } => Some(ExpectedError::Unbound(name.clone(), *position)),
                    _ => None,
                };
                if got.as_ref() == Some(want) {
                    Ok(err.to_string())
                } else {
                    Err(bad(&self.path, format!("expected {want:?}, got {err}")))
                }
            }
            (None, Err(err)) => Err(bad(&self.path, err)),
            (None, Ok(m)) => self.check(&cat, &env, &m),
        }
    }

    fn check(&self, cat: &RepCategory, env: &Environment, m: &Morphism) -> Result<String> {
        let fail = |msg: String| Err(bad(&self.path, msg));
        if let Some(d) = &self.dom {
            if m.dom() != d {
                return fail(format!("dom {} != {d}", m.dom()));
            }
        }
        if let Some(c) = &self.cod {
            if m.cod() != c {
                return fail(format!("cod {} != {c}", m.cod()));
            }
        }
        let shape = m.mat().shape();
        if let Some(s) = self.shape {
            if shape != s {
                return fail(format!("shape {shape:?} != {s:?}"));
            }
        }
        if let Some(v) = &self.value {
            let ok = match v.split_whitespace().collect::<Vec<_>>().as_slice() {
                ["identity"] => {
                    shape.0 == shape.1 && numerics::approx_equal(m.mat(), &numerics::identity(shape.0), cat.tol())?
                }
                ["zero"] => m.mat().iter().all(|z| z.norm() <= cat.tol().eps_eq),
                ["scalar", k] => {
                    let k: f64 = k.parse().map_err(|e| bad(&self.path, e))?;
                    numerics::scalar_multiple_of_identity(m.mat(), cat.tol())
                        .is_some_and(|z| cat.tol().scalar_eq(z, Complex64::new(k, 0.0)))
                }
                _ => return fail(format!("unknown value `{v}`")),
            };
            if !ok {
                return fail(format!("value is not {v}"));
            }
        }
        for (k, src) in &self.equals {
            let other = evaluate(&parse(src)?, env, cat)?.scale(Complex64::new(*k, 0.0));
            if other.dom() != m.dom() || other.cod() != m.cod() || !m.approx_eq(&other, cat.tol()) {
                return fail(format!("not equal to {k} * ({src})"));
            }
        }
        Ok(format!("{} -> {} ({}x{})", m.dom(), m.cod(), shape.0, shape.1))
    }
}

/// All `.diag` files in `dir`, sorted by name.
pub fn load_dir(dir: &Path) -> Result<Vec<CorpusCase>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "diag"))
        .collect();
    paths.sort();
    paths.iter().map(|p| CorpusCase::parse_file(p)).collect()
}
