use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;

/// Environment variable naming the directory used when `--out` is absent.
pub const OUT_DIR_VAR: &str = "COMPRESSION_OUT_DIR";

/// Where an artifact goes: the explicit path, else `default_name` under
/// `$COMPRESSION_OUT_DIR`, else stdout.
pub fn resolve(out: Option<&Path>, default_name: &str) -> Option<PathBuf> {
    match out {
        Some(p) => Some(p.to_path_buf()),
        None => std::env::var_os(OUT_DIR_VAR).map(|d| PathBuf::from(d).join(default_name)),
    }
}

pub fn emit(out: Option<&Path>, default_name: &str, bytes: &[u8]) -> anyhow::Result<()> {
    match resolve(out, default_name) {
        Some(path) => write_file(&path, bytes),
        None => {
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

pub fn write_file(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}
