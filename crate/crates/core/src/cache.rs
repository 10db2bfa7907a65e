//! On-disk cache of maximal proper nested sets.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::nested::{
    check_nested, default_priority, maximal_proper_nested_sets_with, members_of, Matroid,
    MaximalNestedSet,
};
use crate::roots::{Family, RootSystem};

/// Bumped whenever the frozen root order or the MPNS construction changes.
pub const ORDER_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CachedSet {
    members: Vec<Vec<usize>>,
    theta: Vec<usize>,
    vol: i64,
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    family: Family,
    rank: usize,
    order_version: u32,
    mpns: Vec<CachedSet>,
}

pub fn cache_path(dir: &Path, rs: &RootSystem) -> PathBuf {
    dir.join(format!("mpns-{}{}-v{ORDER_VERSION}.json", rs.family(), rs.rank()))
}

/// The default cache directory: `$KOSTANT_CACHE_DIR`, else
/// `$XDG_CACHE_HOME/kostant`, else `~/.cache/kostant`.
pub fn default_cache_dir() -> Option<PathBuf> {
    if let Some(d) = std::env::var_os("KOSTANT_CACHE_DIR") {
        return Some(PathBuf::from(d));
    }
    if let Some(d) = std::env::var_os("XDG_CACHE_HOME") {
        return Some(PathBuf::from(d).join("kostant"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("kostant"))
}

fn to_file(rs: &RootSystem, sets: &[MaximalNestedSet]) -> CacheFile {
    CacheFile {
        family: rs.family(),
        rank: rs.rank(),
        order_version: ORDER_VERSION,
        mpns: sets
            .iter()
            .map(|m| CachedSet {
                members: m.members.iter().map(|&s| members_of(s).collect()).collect(),
                theta: m.theta.clone(),
                vol: m.vol,
            })
            .collect(),
    }
}

fn from_file(rs: &RootSystem, m: &Matroid, f: CacheFile) -> Option<Vec<MaximalNestedSet>> {
    if f.family != rs.family() || f.rank != rs.rank() || f.order_version != ORDER_VERSION {
        return None;
    }
    let p = default_priority(m);
    let mut out = Vec::with_capacity(f.mpns.len());
    for c in f.mpns {
        if c.members.iter().flatten().chain(&c.theta).any(|&i| i >= m.len()) {
            return None;
        }
        let members: Vec<u64> = c.members.iter().map(|v| v.iter().fold(0, |s, &i| s | 1 << i)).collect();
        if !check_nested(m, &members, &p) {
            return None;
        }
        let set = MaximalNestedSet::new(m, members, &p);
        if set.theta != c.theta || set.vol != c.vol {
            return None;
        }
        out.push(set);
    }
    Some(out)
}

/// MPNS under the frozen order, read from `dir` when a valid cache file
/// exists and written there otherwise.
pub fn load_or_build(rs: &RootSystem, dir: Option<&Path>) -> Result<Vec<MaximalNestedSet>> {
    let m = Matroid::new(rs);
    if let Some(dir) = dir {
        let path = cache_path(dir, rs);
        if let Ok(text) = fs::read_to_string(&path) {
            if let Ok(file) = serde_json::from_str::<CacheFile>(&text) {
                if let Some(sets) = from_file(rs, &m, file) {
                    return Ok(sets);
                }
            }
        }
        let sets = maximal_proper_nested_sets_with(&m, &default_priority(&m));
        fs::create_dir_all(dir)?;
        let tmp = path.with_extension(format!("json.tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_string(&to_file(rs, &sets))?)?;
        fs::rename(&tmp, &path)?;
        return Ok(sets);
    }
    Ok(maximal_proper_nested_sets_with(&m, &default_priority(&m)))
}
