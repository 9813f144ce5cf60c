use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::DataError;
use crate::atoms::{Atom, Solution};
use crate::geometry::{Domain, DomainRecord};
use crate::manufactured::{Family, HardnessMeta, PdeInstance};

/// One JSONL line. `atoms` is the authoritative solution; `solution_expr`
/// is the same function in prefix notation for external tools.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub case_id: String,
    pub kind: Family,
    pub lambda: f64,
    pub k: f64,
    pub solution_expr: String,
    pub domain: DomainRecord,
    pub n_terms: usize,
    pub std_u: f64,
    pub std_f: f64,
    pub atoms: Vec<Atom>,
}

impl From<&PdeInstance> for CaseRecord {
    fn from(inst: &PdeInstance) -> Self {
        CaseRecord {
            case_id: inst.case_id.clone(),
            kind: inst.family,
            lambda: inst.lambda,
            k: inst.k,
            solution_expr: inst.solution.to_expr(),
            domain: DomainRecord::from(&inst.domain),
            n_terms: inst.solution.n_terms(),
            std_u: inst.hardness.std_u,
            std_f: inst.hardness.std_f,
            atoms: inst.solution.atoms.clone(),
        }
    }
}

impl CaseRecord {
    pub fn to_instance(&self) -> Result<PdeInstance, DataError> {
        if self.atoms.len() != self.n_terms {
            return Err(DataError::Invalid(format!(
                "{}: n_terms {} but {} atoms",
                self.case_id,
                self.n_terms,
                self.atoms.len()
            )));
        }
        let domain = Domain::try_from(&self.domain).map_err(|e| DataError::Invalid(format!("{}: {e}", self.case_id)))?;
        Ok(PdeInstance {
            case_id: self.case_id.clone(),
            family: self.kind,
            lambda: self.lambda,
            k: self.k,
            domain,
            solution: Solution::new(self.atoms.clone()),
            hardness: HardnessMeta { std_u: self.std_u, std_f: self.std_f },
        })
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records always serialize")
    }

    /// Parses one line; `line` is 1-based and only used in errors.
    pub fn parse(text: &str, line: usize) -> Result<Self, DataError> {
        serde_json::from_str(text).map_err(|e| DataError::Parse { line, message: e.to_string() })
    }
}

fn write_lines(mut w: impl Write, records: &[CaseRecord], path: &Path) -> Result<(), DataError> {
    for r in records {
        writeln!(w, "{}", r.to_line()).map_err(DataError::io(path))?;
    }
    w.flush().map_err(DataError::io(path))
}

/// Replaces `path` with `records`, one per line.
pub fn write_records(path: &Path, records: &[CaseRecord]) -> Result<(), DataError> {
    let mut buf = Vec::new();
    write_lines(&mut buf, records, path)?;
    super::write_atomic(path, &buf)
}

/// Appends `records` to `path`, creating it if needed.
pub fn append_records(path: &Path, records: &[CaseRecord]) -> Result<(), DataError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(DataError::io(dir))?;
    }
    let f = OpenOptions::new().create(true).append(true).open(path).map_err(DataError::io(path))?;
    write_lines(std::io::BufWriter::new(f), records, path)
}

/// Reads every non-blank line of `path`; errors name the 1-based line.
pub fn read_records(path: &Path) -> Result<Vec<CaseRecord>, DataError> {
    let f = File::open(path).map_err(DataError::io(path))?;
    let mut out = Vec::new();
    for (n, line) in BufReader::new(f).lines().enumerate() {
        let line = line.map_err(DataError::io(path))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(CaseRecord::parse(&line, n + 1)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manufactured::{sample_instance, GenConfig};
    use crate::rng::RngStream;
    use crate::vec2::Vec2;

    fn small_cfg() -> GenConfig {
        GenConfig { resolution: 32, interior_samples: 128, ..GenConfig::test() }
    }

    #[test]
    fn round_trip_preserves_values_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("test.jsonl");
        let insts: Vec<PdeInstance> = (0..12).filter_map(|i| sample_instance(&small_cfg(), 21, i).ok()).map(|g| g.instance).collect();
        let recs: Vec<CaseRecord> = insts.iter().map(CaseRecord::from).collect();
        write_records(&path, &recs).unwrap();
        let back = read_records(&path).unwrap();
        assert_eq!(back, recs);
        let mut rng = RngStream::from_seed(4);
        for (a, r) in insts.iter().zip(&back) {
            let b = r.to_instance().unwrap();
            assert_eq!(a, &b);
            for _ in 0..64 {
                let p = Vec2::new(rng.range(-1.0, 1.0), rng.range(-1.0, 1.0));
                let (ua, ub) = (a.solution.value(p), b.solution.value(p));
                assert!(ua == ub || (ua - ub).abs() <= 1e-12 * ua.abs());
            }
            if a.family == Family::Laplace {
                assert_eq!((r.lambda, r.k), (0.0, 0.0));
            }
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.jsonl");
        let good = sample_instance(&small_cfg(), 1, 0).unwrap().instance;
        let line = CaseRecord::from(&good).to_line();
        std::fs::write(&path, format!("{line}\n\n{line}\n{{\"case_id\": 3}}\n")).unwrap();
        match read_records(&path) {
            Err(DataError::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn append_extends_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.jsonl");
        let r = CaseRecord::from(&sample_instance(&small_cfg(), 2, 1).unwrap().instance);
        append_records(&path, std::slice::from_ref(&r)).unwrap();
        append_records(&path, std::slice::from_ref(&r)).unwrap();
        assert_eq!(read_records(&path).unwrap().len(), 2);
    }
}
