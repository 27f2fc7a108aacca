//! Matrix files, input-code specifications and build metadata.

mod alist;
mod mtx;

pub use alist::{export_alist, import_alist};
pub use mtx::{export_mtx, import_mtx};

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::assembly::ClassicalCode;
use crate::css::{CssCode, CssError, ZBlock};
use crate::gf2::SparseMatrix;
use crate::solver::Triple;

/// A malformed matrix file; `line` is 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

impl FormatError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

/// A rejected code specification; `position` is a 0-based byte offset into
/// the specification string.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at position {position}: {message}")]
pub struct SpecError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Format { path: PathBuf, source: FormatError },
    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error(transparent)]
    Css(#[from] CssError),
}

fn read(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write(path: &Path, contents: &str) -> Result<(), IoError> {
    fs::write(path, contents).map_err(|source| IoError::Io {
        path: path.to_owned(),
        source,
    })
}

/// `rep:<L>`, `alist:<path>` or `random:<bits>x<checks>:<seed>`.
pub fn parse_code_spec(s: &str) -> Result<ClassicalCode, SpecError> {
    let err = |position: usize, message: String| SpecError { position, message };
    let Some(colon) = s.find(':') else {
        return Err(err(0, format!("expected rep:, alist: or random:, got {s:?}")));
    };
    let (kind, body) = (&s[..colon], &s[colon + 1..]);
    let start = colon + 1;
    let number = |text: &str, at: usize| -> Result<u64, SpecError> {
        text.parse()
            .map_err(|_| err(at, format!("expected a number, got {text:?}")))
    };
    match kind {
        "rep" => {
            let l = number(body, start)? as usize;
            ClassicalCode::repetition(l).map_err(|e| err(start, e.to_string()))
        }
        "alist" => {
            if body.is_empty() {
                return Err(err(start, "missing path".into()));
            }
            let text = fs::read_to_string(body).map_err(|e| err(start, format!("{body}: {e}")))?;
            let h = import_alist(&text).map_err(|e| err(start, format!("{body}: {e}")))?;
            Ok(ClassicalCode::new(h))
        }
        "random" => {
            let (dims, seed) = body
                .split_once(':')
                .ok_or_else(|| err(start + body.len(), "expected :<seed>".into()))?;
            let (bits, checks) = dims
                .split_once('x')
                .ok_or_else(|| err(start, "expected <bits>x<checks>".into()))?;
            let n = number(bits, start)? as usize;
            let m = number(checks, start + bits.len() + 1)? as usize;
            let seed = number(seed, start + dims.len() + 1)?;
            if n == 0 || m == 0 {
                return Err(err(start, "dimensions must be positive".into()));
            }
            Ok(random_code(n, m, seed))
        }
        _ => Err(err(0, format!("unknown code kind {kind:?}"))),
    }
}

/// Parity-check matrix with independent fair bits, `checks x bits`.
pub fn random_code(bits: usize, checks: usize, seed: u64) -> ClassicalCode {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..checks)
        .map(|_| (0..bits).filter(|_| rng.gen_bool(0.5)).collect())
        .collect();
    ClassicalCode::new(SparseMatrix::from_rows_xor(bits, rows))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixFormat {
    #[default]
    Alist,
    Mtx,
}

impl MatrixFormat {
    fn extension(self) -> &'static str {
        match self {
            MatrixFormat::Alist => "alist",
            MatrixFormat::Mtx => "mtx",
        }
    }

    pub fn export(self, h: &SparseMatrix) -> String {
        match self {
            MatrixFormat::Alist => export_alist(h),
            MatrixFormat::Mtx => export_mtx(h),
        }
    }

    pub fn import(self, text: &str) -> Result<SparseMatrix, FormatError> {
        match self {
            MatrixFormat::Alist => import_alist(text),
            MatrixFormat::Mtx => import_mtx(text),
        }
    }
}

impl FromStr for MatrixFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "alist" => Ok(MatrixFormat::Alist),
            "mtx" => Ok(MatrixFormat::Mtx),
            _ => Err(format!("unknown matrix format {s:?} (expected alist or mtx)")),
        }
    }
}

impl fmt::Display for MatrixFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZBlockMeta {
    pub support: Vec<usize>,
    pub generator: String,
    pub generator_index: usize,
    pub rows: [usize; 2],
}

/// Self-description written next to the matrices of a build.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildMetadata {
    pub p: usize,
    pub q: usize,
    pub w: usize,
    pub n: usize,
    pub x_checks: usize,
    pub z_checks: usize,
    pub z_blocks: Vec<ZBlockMeta>,
    pub codes: Vec<String>,
    pub format: MatrixFormat,
}

impl BuildMetadata {
    pub fn new(triple: Triple, code: &CssCode, codes: Vec<String>, format: MatrixFormat) -> Self {
        Self {
            p: triple.p(),
            q: triple.q(),
            w: triple.w(),
            n: code.n_qubits(),
            x_checks: code.h_x().rows(),
            z_checks: code.h_z().rows(),
            z_blocks: code
                .z_blocks()
                .iter()
                .map(|b| ZBlockMeta {
                    support: b.support.clone(),
                    generator: b.generator.clone(),
                    generator_index: b.generator_index,
                    rows: [b.rows.start, b.rows.end],
                })
                .collect(),
            codes,
            format,
        }
    }

    fn z_blocks(&self) -> Vec<ZBlock> {
        self.z_blocks
            .iter()
            .map(|b| ZBlock {
                support: b.support.clone(),
                generator_index: b.generator_index,
                generator: b.generator.clone(),
                rows: b.rows[0]..b.rows[1],
            })
            .collect()
    }
}

/// Files making up a build with base path `base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildPaths {
    pub h_x: PathBuf,
    pub h_z: PathBuf,
    pub metadata: PathBuf,
}

impl BuildPaths {
    pub fn new(base: &Path, format: MatrixFormat) -> Self {
        let with = |suffix: &str| {
            let mut s = base.as_os_str().to_owned();
            s.push(suffix);
            PathBuf::from(s)
        };
        Self {
            h_x: with(&format!(".hx.{}", format.extension())),
            h_z: with(&format!(".hz.{}", format.extension())),
            metadata: with(".json"),
        }
    }
}

pub fn write_build(base: &Path, code: &CssCode, meta: &BuildMetadata) -> Result<BuildPaths, IoError> {
    let paths = BuildPaths::new(base, meta.format);
    write(&paths.h_x, &meta.format.export(code.h_x()))?;
    write(&paths.h_z, &meta.format.export(code.h_z()))?;
    let json = serde_json::to_string_pretty(meta).expect("metadata serializes") + "\n";
    write(&paths.metadata, &json)?;
    Ok(paths)
}

/// Reads a build back. Qubit labels are not stored and come back empty.
pub fn read_build(base: &Path) -> Result<(CssCode, BuildMetadata), IoError> {
    let meta_path = BuildPaths::new(base, MatrixFormat::Alist).metadata;
    let meta: BuildMetadata = serde_json::from_str(&read(&meta_path)?).map_err(|source| IoError::Json {
        path: meta_path.clone(),
        source,
    })?;
    let paths = BuildPaths::new(base, meta.format);
    let load = |path: &Path| -> Result<SparseMatrix, IoError> {
        meta.format.import(&read(path)?).map_err(|source| IoError::Format {
            path: path.to_owned(),
            source,
        })
    };
    let code = CssCode::new(load(&paths.h_x)?, load(&paths.h_z)?, vec![], meta.z_blocks())?;
    Ok((code, meta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::build_css;
    use crate::solver::solve_fork;

    #[test]
    fn code_spec_examples() {
        let rep = parse_code_spec("rep:3").unwrap();
        assert_eq!((rep.n_bits(), rep.n_checks()), (3, 3));
        assert_eq!(rep.h().row_weights(), vec![2, 2, 2]);
        assert!(parse_code_spec("rep:1").is_err());
        let e = parse_code_spec("rep:x").unwrap_err();
        assert_eq!(e.position, 4);
        assert_eq!(parse_code_spec("cube:3").unwrap_err().position, 0);
        assert_eq!(parse_code_spec("random:4x3:q").unwrap_err().position, 11);
    }

    #[test]
    fn random_codes_are_seeded() {
        let a = parse_code_spec("random:4x3:9").unwrap();
        assert_eq!((a.n_bits(), a.n_checks()), (4, 3));
        assert_eq!(a, parse_code_spec("random:4x3:9").unwrap());
    }

    #[test]
    fn alist_spec_reads_an_exported_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rep3.alist");
        fs::write(&path, export_alist(ClassicalCode::repetition(3).unwrap().h())).unwrap();
        let code = parse_code_spec(&format!("alist:{}", path.display())).unwrap();
        assert_eq!(code, parse_code_spec("rep:3").unwrap());
        assert!(parse_code_spec("alist:/nonexistent/file").is_err());
    }

    #[test]
    fn build_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let triple = Triple::new(3, 2, 0).unwrap();
        let code = build_css(
            &solve_fork(triple).unwrap(),
            &vec![ClassicalCode::repetition(2).unwrap(); 3],
        )
        .unwrap();
        for format in [MatrixFormat::Alist, MatrixFormat::Mtx] {
            let base = dir.path().join(format.to_string());
            let meta = BuildMetadata::new(triple, &code, vec!["rep:2".into(); 3], format);
            write_build(&base, &code, &meta).unwrap();
            let (back, meta_back) = read_build(&base).unwrap();
            assert_eq!(meta_back, meta);
            assert_eq!(back.h_x(), code.h_x());
            assert_eq!(back.h_z(), code.h_z());
            assert_eq!(back.z_blocks(), code.z_blocks());
        }
    }
}
