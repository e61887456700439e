//! Bundled group and fusion data. `SOVCAT_ZOO_DIR` points at a directory with
//! `groups/` and `fusion/` subdirectories that replaces the bundled copies.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::fusiondata::FusionData;
use crate::groupmodel::GroupZooEntry;
use crate::numerics::Tolerance;

pub const ZOO_DIR_ENV: &str = "SOVCAT_ZOO_DIR";

pub const GROUP_NAMES: [&str; 9] = ["C2", "C3", "C4", "S3", "D4", "Q8", "A4", "S4", "SL23"];

pub const FUSION_NAMES: [&str; 5] = ["ising", "fibonacci", "su2_k2", "su2_k4", "rep_q8"];

macro_rules! bundle {
    ($dir:literal, $($name:literal),*) => {
        &[$(($name, include_str!(concat!("../zoo/", $dir, "/", $name, ".json")))),*]
    };
}

static GROUPS: &[(&str, &str)] = bundle!("groups", "C2", "C3", "C4", "S3", "D4", "Q8", "A4", "S4", "SL23");
static FUSION: &[(&str, &str)] = bundle!("fusion", "ising", "fibonacci", "su2_k2", "su2_k4", "rep_q8");

fn override_dir() -> Option<PathBuf> {
    std::env::var_os(ZOO_DIR_ENV).map(PathBuf::from)
}

fn read_entry(sub: &str, name: &str, bundled: &[(&str, &'static str)]) -> Result<String> {
    if let Some(dir) = override_dir() {
        let path = dir.join(sub).join(format!("{name}.json"));
        return std::fs::read_to_string(&path).map_err(|_| Error::UnknownZooEntry(name.to_string()));
    }
    bundled
        .iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .map(|(_, src)| src.to_string())
        .ok_or_else(|| Error::UnknownZooEntry(name.to_string()))
}

pub fn group_with(name: &str, tol: &Tolerance) -> Result<GroupZooEntry> {
    GroupZooEntry::from_json_str(&read_entry("groups", name, GROUPS)?, tol)
}

pub fn group(name: &str) -> Result<GroupZooEntry> {
    group_with(name, &Tolerance::default())
}

pub fn fusion(name: &str) -> Result<FusionData> {
    fusion_with(name, &Tolerance::default())
}

pub fn fusion_with(name: &str, tol: &Tolerance) -> Result<FusionData> {
    let name = name.strip_suffix(".json").unwrap_or(name);
    let mut fd = FusionData::from_json_str(&read_entry("fusion", name, FUSION)?, tol)?;
    if fd.name.is_empty() {
        fd.name = name.to_string();
    }
    Ok(fd)
}

/// A path on disk if it exists, otherwise a fusion zoo name.
pub fn fusion_from_arg(arg: &str, tol: &Tolerance) -> Result<FusionData> {
    let p = Path::new(arg);
    if p.is_file() {
        return FusionData::load(p, tol);
    }
    fusion_with(arg, tol)
}

pub fn group_from_arg(arg: &str, tol: &Tolerance) -> Result<GroupZooEntry> {
    let p = Path::new(arg);
    if arg.ends_with(".json") && p.is_file() {
        return GroupZooEntry::from_json_str(&std::fs::read_to_string(p)?, tol);
    }
    group_with(arg, tol)
}
