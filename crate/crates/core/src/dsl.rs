//! Ring specs and semidirect data files.
//!
//! ```text
//! spec := z:<n> | null:<n> | gf:<p>:<n> | mat:<spec>:<k> | tri:<spec>:<k>
//!       | prod:<spec>,<spec> | table:<path>
//! ```
//!
//! Parsing is a single left-to-right pass and every form has a fixed arity,
//! so `tri:gf:2:2:2` is upper-triangular 2x2 over GF(4) and `tri:gf:2:1:2`
//! is over GF(2). A `table:` path runs to the next `,` or the end.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ring::{
    direct_product, galois_field, matrix_ring, null_ring, table_ring, z_mod, Budget, MatrixShape, Ring, RingError,
    TableSpec,
};
use crate::semidirect::{SemidirectData, SemidirectError};

#[derive(Debug, Error)]
pub enum DslError {
    #[error("bad ring spec {spec:?} at offset {offset}: {message}")]
    Parse { spec: String, offset: usize, message: String },
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed JSON in {path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Semidirect(#[from] SemidirectError),
}

impl DslError {
    /// Whether the failure is a size budget rather than malformed input.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            DslError::Ring(RingError::BudgetExceeded { .. })
                | DslError::Semidirect(SemidirectError::Ring(RingError::BudgetExceeded { .. }))
        )
    }
}

pub fn parse_ring(spec: &str, budget: &Budget) -> Result<Ring, DslError> {
    parse_ring_at(spec, budget, None)
}

/// Like [`parse_ring`], resolving relative `table:` paths against `base`.
pub fn parse_ring_at(spec: &str, budget: &Budget, base: Option<&Path>) -> Result<Ring, DslError> {
    let mut p = Parser { src: spec, pos: 0, budget, base };
    let ring = p.ring()?;
    if p.pos != spec.len() {
        return Err(p.fail("trailing input"));
    }
    Ok(ring)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    budget: &'a Budget,
    base: Option<&'a Path>,
}

impl Parser<'_> {
    fn fail(&self, message: &str) -> DslError {
        DslError::Parse { spec: self.src.to_string(), offset: self.pos, message: message.to_string() }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn expect(&mut self, c: char) -> Result<(), DslError> {
        if self.rest().starts_with(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.fail(&format!("expected '{c}'")))
        }
    }

    fn word(&mut self) -> &str {
        let start = self.pos;
        let len = self.rest().find(|c: char| !c.is_ascii_alphanumeric()).unwrap_or(self.rest().len());
        self.pos += len;
        &self.src[start..self.pos]
    }

    fn number(&mut self) -> Result<usize, DslError> {
        let start = self.pos;
        let len = self.rest().find(|c: char| !c.is_ascii_digit()).unwrap_or(self.rest().len());
        if len == 0 {
            return Err(self.fail("expected a number"));
        }
        self.pos += len;
        self.src[start..self.pos].parse().map_err(|_| {
            self.pos = start;
            self.fail("number too large")
        })
    }

    fn positive(&mut self) -> Result<usize, DslError> {
        let at = self.pos;
        let n = self.number()?;
        if n == 0 {
            self.pos = at;
            return Err(self.fail("must be positive"));
        }
        Ok(n)
    }

    fn ring(&mut self) -> Result<Ring, DslError> {
        let at = self.pos;
        let head = self.word().to_string();
        self.expect(':')?;
        let b = self.budget;
        match head.as_str() {
            "z" => Ok(z_mod(self.positive()?, b)?),
            "null" => Ok(null_ring(self.positive()?, b)?),
            "gf" => {
                let p = self.positive()?;
                self.expect(':')?;
                let n = self.positive()?;
                Ok(galois_field(p as u64, n, b)?)
            }
            "mat" | "tri" => {
                let base = self.ring()?;
                self.expect(':')?;
                let k = self.positive()?;
                let shape = if head == "mat" { MatrixShape::Full } else { MatrixShape::UpperTriangular };
                Ok(matrix_ring(&base, k, shape, b)?)
            }
            "prod" => {
                let left = self.ring()?;
                self.expect(',')?;
                let right = self.ring()?;
                Ok(direct_product(&left, &right, b)?)
            }
            "table" => {
                let len = self.rest().find(',').unwrap_or(self.rest().len());
                if len == 0 {
                    return Err(self.fail("expected a path"));
                }
                let raw = &self.src[self.pos..self.pos + len];
                self.pos += len;
                let path = match self.base {
                    Some(dir) => dir.join(raw),
                    None => PathBuf::from(raw),
                };
                load_table(&path, b)
            }
            _ => {
                self.pos = at;
                Err(self.fail("unknown ring family"))
            }
        }
    }
}

fn read(path: &Path) -> Result<String, DslError> {
    std::fs::read_to_string(path).map_err(|source| DslError::Io { path: path.to_path_buf(), source })
}

fn load_table(path: &Path, budget: &Budget) -> Result<Ring, DslError> {
    let spec: TableSpec =
        serde_json::from_str(&read(path)?).map_err(|source| DslError::Json { path: path.to_path_buf(), source })?;
    if spec.order > budget.table_max {
        return Err(RingError::BudgetExceeded {
            what: path.display().to_string(),
            order: spec.order as u128,
            limit: budget.table_max,
        }
        .into());
    }
    Ok(table_ring(spec, &format!("table:{}", path.display()))?)
}

/// On-disk form of [`SemidirectData`]; `L` and `Rm` list the images of the
/// element ids of the ideal in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemidirectFile {
    pub m: u64,
    pub ideal: String,
    pub e: usize,
    #[serde(rename = "L")]
    pub left: Vec<usize>,
    #[serde(rename = "Rm")]
    pub right: Vec<usize>,
}

impl SemidirectFile {
    pub fn parse(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Builds and validates the data.
    pub fn build(&self, budget: &Budget, base: Option<&Path>) -> Result<SemidirectData, DslError> {
        let ideal = parse_ring_at(&self.ideal, budget, base)?;
        let data = SemidirectData { m: self.m, ideal, e: self.e, left: self.left.clone(), right: self.right.clone() };
        data.validate()?;
        Ok(data)
    }
}

pub fn load_semidirect(path: &Path, budget: &Budget) -> Result<SemidirectData, DslError> {
    let file = SemidirectFile::parse(&read(path)?).map_err(|source| DslError::Json { path: path.to_path_buf(), source })?;
    file.build(budget, path.parent())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(spec: &str) -> usize {
        parse_ring(spec, &Budget::default()).unwrap().order()
    }

    #[test]
    fn families() {
        assert_eq!(order("z:6"), 6);
        assert_eq!(order("null:3"), 3);
        assert_eq!(order("gf:3:2"), 9);
        assert_eq!(order("mat:gf:2:1:2"), 16);
        assert_eq!(order("tri:gf:2:1:2"), 8);
        assert_eq!(order("tri:gf:2:2:2"), 64);
        assert_eq!(order("prod:z:2,z:3"), 6);
        assert_eq!(order("prod:prod:z:2,z:2,tri:z:2:2"), 32);
        assert_eq!(order("prod:z:2,prod:z:3,z:5"), 30);
        assert!(!parse_ring("null:2", &Budget::default()).unwrap().is_unital());
    }

    #[test]
    fn parse_errors() {
        let b = Budget::default();
        for bad in ["", "z", "z:", "z:0", "z:4x", "q:4", "gf:2", "prod:z:2", "prod:z:2;z:3", "tri:z:2"] {
            let err = parse_ring(bad, &b).unwrap_err();
            assert!(matches!(err, DslError::Parse { .. }), "{bad}: {err}");
        }
        assert!(matches!(parse_ring("gf:4:1", &b), Err(DslError::Ring(RingError::NotPrime(4)))));
        assert!(parse_ring("gf:2:30", &b).unwrap_err().is_budget());
        assert!(matches!(parse_ring("table:/nonexistent.json", &b), Err(DslError::Io { .. })));
    }

    #[test]
    fn table_files() {
        let dir = std::env::temp_dir().join(format!("ringlab-dsl-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        std::fs::write(dir.join("z3.json"), r#"{"order":3,"add":[[0,1,2],[1,2,0],[2,0,1]],"mul":[0,0,0,0,1,2,0,2,1],"identity":1}"#)
            .unwrap();
        let b = Budget::default();
        let r = parse_ring_at("prod:table:z3.json,z:2", &b, Some(&dir)).unwrap();
        assert_eq!(r.order(), 6);
        assert!(r.is_unital());
        std::fs::write(dir.join("sd.json"), r#"{"m":2,"ideal":"table:z3.json","e":1,"L":[0,0,0],"Rm":[0,0,0]}"#).unwrap();
        let data = load_semidirect(&dir.join("sd.json"), &b).unwrap();
        assert_eq!(data.ideal.order(), 3);
        // m·L(1) = 0 but 1 - e·1 = 1
        std::fs::write(dir.join("bad.json"), r#"{"m":2,"ideal":"z:3","e":0,"L":[0,0,0],"Rm":[0,0,0]}"#).unwrap();
        assert!(matches!(load_semidirect(&dir.join("bad.json"), &b), Err(DslError::Semidirect(_))));
        std::fs::remove_dir_all(&dir).ok();
    }
}
