//! On-disk basis and matrix cache keyed by config hash, validated by header.

use super::config::{ConfigError, JobConfig};
use super::LEDGER_VERSION;
use crate::complexes::{enumerate, BasisTable, ComplexSpec, Twist, Window};
use crate::graph::{canonicalize, decode, Canon};
use crate::homology::SparseMatrix;
use std::io::Write;
use std::path::{Path, PathBuf};
use thiserror::Error;

pub const CACHE_ENV: &str = "GRAPHCX_CACHE";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// Outcome of a cache lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lookup {
    Hit,
    Miss,
    Stale(String),
}

#[derive(Debug, Clone)]
pub struct Cache {
    root: PathBuf,
}

impl Cache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Cache { root: root.into() }
    }

    /// The directory named by `GRAPHCX_CACHE`, if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV).map(Cache::new)
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// File body after `header`, if the file exists and its header matches; otherwise why not.
    fn read(&self, name: &str, header: &str) -> Result<Result<String, Lookup>, CacheError> {
        let path = self.root.join(name);
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Err(Lookup::Miss)),
            Err(e) => return Err(e.into()),
        };
        match text.strip_prefix(header) {
            Some(body) => Ok(Ok(body.to_string())),
            None => Ok(Err(Lookup::Stale(format!("{} has a different header", path.display())))),
        }
    }

    /// Writes through a temporary file in the cache directory, then renames.
    fn write(&self, name: &str, contents: &str) -> Result<(), CacheError> {
        std::fs::create_dir_all(&self.root)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.root)?;
        tmp.write_all(contents.as_bytes())?;
        tmp.persist(self.root.join(name)).map_err(|e| e.error)?;
        Ok(())
    }

    /// Basis of the config's window, enumerated unless a valid cached copy exists.
    pub fn basis(&self, cfg: &JobConfig) -> Result<(BasisTable, Lookup), CacheError> {
        let (spec, window) = cfg.resolve()?;
        let spec = ComplexSpec { twist: Twist::None, ..spec };
        let name = format!("basis-{}.txt", cfg.content_hash());
        let header = basis_header(cfg);
        let lookup = match self.read(&name, &header)? {
            Ok(body) => match parse_basis(spec, window, &body) {
                Some(t) => return Ok((t, Lookup::Hit)),
                None => Lookup::Stale(format!("{name} does not parse as a basis")),
            },
            Err(l) => l,
        };
        let table = enumerate(&spec, &window).map_err(ConfigError::from)?;
        self.write(&name, &format!("{header}{}", basis_body(&table)))?;
        Ok((table, lookup))
    }

    /// Boundary matrix leaving `degree`, computed by `build` unless cached.
    pub fn matrix(
        &self,
        cfg: &JobConfig,
        degree: i64,
        build: impl FnOnce() -> Result<SparseMatrix, crate::homology::HomologyError>,
    ) -> Result<(SparseMatrix, Lookup), CacheError> {
        let key = cfg.content_hash();
        let name = format!("matrix-{key}-d{degree}.txt");
        let (rows, cols) = (format!("basis-{key}.txt#{}", degree - 1), format!("basis-{key}.txt#{degree}"));
        let lookup = match self.read(&name, "")? {
            Ok(body) => match SparseMatrix::from_triplet_text(&body) {
                Ok(m) if body.lines().next() == Some(&matrix_header(&m, &rows, &cols)) => return Ok((m, Lookup::Hit)),
                _ => Lookup::Stale(format!("{name} does not match its basis files")),
            },
            Err(l) => l,
        };
        let m = build().map_err(|e| std::io::Error::other(e.to_string()))?;
        self.write(&name, &m.to_triplet_text(&rows, &cols))?;
        Ok((m, lookup))
    }
}

fn matrix_header(m: &SparseMatrix, rows: &str, cols: &str) -> String {
    SparseMatrix::zeros(m.num_rows(), m.num_cols()).to_triplet_text(rows, cols).trim_end().to_string()
}

fn basis_header(cfg: &JobConfig) -> String {
    format!("# graphcx basis\n# config {}\n# ledger {LEDGER_VERSION}\n", cfg.to_json())
}

/// One `degree<TAB>graph` line per basis element.
pub fn basis_body(table: &BasisTable) -> String {
    let mut out = String::new();
    for (d, g) in table.iter() {
        out.push_str(&format!("{d}\t{}\n", g.encode()));
    }
    out
}

fn parse_basis(spec: ComplexSpec, window: Window, body: &str) -> Option<BasisTable> {
    let mut graphs = Vec::new();
    for line in body.lines() {
        let (d, text) = line.split_once('\t')?;
        let g = decode(text).ok()?;
        match canonicalize(&g, spec.symmetry()).ok()? {
            Canon::Graph(c, 1) if c.encode() == text => graphs.push((d.parse().ok()?, c)),
            _ => return None,
        }
    }
    Some(BasisTable::from_graphs(spec, window, graphs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> JobConfig {
        JobConfig::from_json(r#"{"family": "Graphs", "n": 2, "N": 3, "j": 0}"#).unwrap()
    }

    #[test]
    fn miss_then_hit() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let (a, l) = cache.basis(&cfg()).unwrap();
        assert_eq!(l, Lookup::Miss);
        let (b, l) = cache.basis(&cfg()).unwrap();
        assert_eq!(l, Lookup::Hit);
        assert_eq!(basis_body(&a), basis_body(&b));
    }

    #[test]
    fn stale_files_are_recomputed() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let (a, _) = cache.basis(&cfg()).unwrap();
        let path = dir.path().join(format!("basis-{}.txt", cfg().content_hash()));
        let text = std::fs::read_to_string(&path).unwrap().replace("# ledger", "# ledger old");
        std::fs::write(&path, text).unwrap();
        let (b, l) = cache.basis(&cfg()).unwrap();
        assert!(matches!(l, Lookup::Stale(_)));
        assert_eq!(a.len(), b.len());
        assert_eq!(cache.basis(&cfg()).unwrap().1, Lookup::Hit);
    }

    #[test]
    fn matrices_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let (basis, _) = cache.basis(&cfg()).unwrap();
        let d = basis.degrees().max().unwrap();
        let build = || crate::homology::boundary_matrix(&basis, d);
        let (m1, l1) = cache.matrix(&cfg(), d, build).unwrap();
        let (m2, l2) = cache.matrix(&cfg(), d, || unreachable!()).unwrap();
        assert_eq!((l1, l2), (Lookup::Miss, Lookup::Hit));
        assert_eq!(m1, m2);
    }
}
