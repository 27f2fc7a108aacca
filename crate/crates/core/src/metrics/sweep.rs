use std::fmt;
use std::io::Write;

use crate::assembly::{build_css, ClassicalCode};
use crate::css::CssCode;
use crate::lattice::{td_build, TdLabel};
use crate::solver::{solve_fork, Triple};

use super::{code_params, CodeParams, DistanceMethod};

pub const CSV_HEADER: &str =
    "family,p,q,w,L,n,k,d_x,d_z,d_x_exactness,d_z_exactness,k_over_n,d_over_n";

/// A code family evaluated at a lattice size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Product(Triple),
    TetraDigit(TdLabel),
}

impl Family {
    /// The product triple that builds this family. Tetra-digit labels with
    /// consecutive digits map to `(D, D - d_s, 0)`.
    pub fn triple(&self) -> Option<Triple> {
        match *self {
            Family::Product(t) => Some(t),
            Family::TetraDigit(l) if l.d_s == l.d_n + 1 && l.d_l == l.d_s + 1 => {
                Triple::new(l.dim, l.dim - l.d_s, 0).ok()
            }
            Family::TetraDigit(_) => None,
        }
    }

    pub fn build(&self, size: usize) -> Result<CssCode, String> {
        match (self.triple(), self) {
            (Some(t), _) => {
                let spec = solve_fork(t).map_err(|e| e.to_string())?;
                let code = ClassicalCode::repetition(size).map_err(|e| e.to_string())?;
                build_css(&spec, &vec![code; t.p()]).map_err(|e| e.to_string())
            }
            (None, Family::TetraDigit(l)) => td_build(*l, size).map_err(|e| e.to_string()),
            (None, Family::Product(_)) => unreachable!(),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Product(t) => write!(f, "qbp:{}-{}-{}", t.p(), t.q(), t.w()),
            Family::TetraDigit(l) => write!(f, "{l}"),
        }
    }
}

/// `[d_n,d_s,d_l,D]`, `qbp:p-q-w` or `(p,q,w)`.
pub fn parse_family(s: &str) -> Result<Family, String> {
    let s = s.trim();
    let numbers = |body: &str, sep: char| -> Result<Vec<usize>, String> {
        body.split(sep)
            .map(|x| {
                x.trim()
                    .parse::<usize>()
                    .map_err(|_| format!("bad number {:?} in family {s:?}", x.trim()))
            })
            .collect()
    };
    if let Some(body) = s.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
        let v = numbers(body, ',')?;
        let [a, b, c, d] = v[..] else {
            return Err(format!("family {s:?} needs four digits"));
        };
        return TdLabel::new(a, b, c, d)
            .map(Family::TetraDigit)
            .map_err(|e| e.to_string());
    }
    let triple = if let Some(body) = s.strip_prefix("qbp:") {
        numbers(body, '-')?
    } else if let Some(body) = s.strip_prefix('(').and_then(|b| b.strip_suffix(')')) {
        numbers(body, ',')?
    } else {
        return Err(format!("unrecognized family {s:?}"));
    };
    let [p, q, w] = triple[..] else {
        return Err(format!("family {s:?} needs three numbers"));
    };
    Triple::new(p, q, w)
        .map(Family::Product)
        .map_err(|e| e.to_string())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub family: String,
    pub triple: Option<Triple>,
    pub size: usize,
    pub result: Result<CodeParams, String>,
}

impl SweepRow {
    pub fn k_over_n(&self) -> Option<f64> {
        let p = self.result.as_ref().ok()?;
        Some(p.k as f64 / p.n as f64)
    }

    pub fn d_over_n(&self) -> Option<f64> {
        let p = self.result.as_ref().ok()?;
        Some(p.distance()? as f64 / p.n as f64)
    }
}

/// One row per family; a family that fails to build or evaluate records
/// its error and the sweep moves on.
pub fn sweep_table(families: &[Family], size: usize, method: DistanceMethod) -> Vec<SweepRow> {
    families
        .iter()
        .map(|f| SweepRow {
            family: f.to_string(),
            triple: f.triple(),
            size,
            result: f
                .build(size)
                .and_then(|code| code_params(&code, method).map_err(|e| e.to_string())),
        })
        .collect()
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER.split(','))?;
    for row in rows {
        let (p, q, wt) = match row.triple {
            Some(t) => (t.p().to_string(), t.q().to_string(), t.w().to_string()),
            None => Default::default(),
        };
        let mut rec = vec![row.family.clone(), p, q, wt, row.size.to_string()];
        match &row.result {
            Ok(params) => {
                rec.extend([
                    params.n.to_string(),
                    params.k.to_string(),
                    params.d_x.to_string(),
                    params.d_z.to_string(),
                    params.d_x.exactness.to_string(),
                    params.d_z.exactness.to_string(),
                    row.k_over_n().map_or(String::new(), |x| format!("{x:.6}")),
                    row.d_over_n().map_or(String::new(), |x| format!("{x:.6}")),
                ]);
            }
            Err(e) => {
                let msg = format!("error: {e}");
                rec.extend([String::new(), String::new(), String::new(), String::new()]);
                rec.extend([msg.clone(), msg, String::new(), String::new()]);
            }
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
