//! Zeta tables on disk under `$ZETA_CACHE_DIR`, keyed by degree and window.

use std::path::PathBuf;

use dafn_core::lattice::Window;
use dafn_core::zeta::{zeta_by_extension, ZetaTable};

use crate::CliError;

pub const CACHE_ENV: &str = "ZETA_CACHE_DIR";

fn path_for(n: usize, w: &Window) -> Option<PathBuf> {
    let dir = std::env::var_os(CACHE_ENV)?;
    let name = format!("zeta_n{n}_x{}_{}_y{}_{}.json", w.x_min, w.x_max, w.y_min, w.y_max);
    Some(PathBuf::from(dir).join(name))
}

fn usable(t: &ZetaTable, n: usize, w: &Window) -> bool {
    t.max_degree() == n
        && t.window() == w
        && t.polys().len() == n + 1
        && (0..=n).all(|k| t.values(k).window() == w)
}

/// Reads a cached table when one matches, otherwise builds and stores it.
/// A corrupt cache entry is rebuilt, never trusted.
pub fn zeta_table(n: usize, w: &Window) -> Result<ZetaTable, CliError> {
    let Some(path) = path_for(n, w) else {
        return Ok(zeta_by_extension(n, w));
    };
    if let Ok(text) = std::fs::read_to_string(&path) {
        if let Ok(t) = serde_json::from_str::<ZetaTable>(&text) {
            if usable(&t, n, w) {
                return Ok(t);
            }
        }
    }
    let t = zeta_by_extension(n, w);
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let text = serde_json::to_string(&t).map_err(|e| CliError::Config(e.to_string()))?;
    std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
    Ok(t)
}
