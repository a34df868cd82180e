use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Serializable description of a group backend.
///
/// ```json
/// {"kind":"abelian","torsion":[2,4],"free_rank":0}
/// {"kind":"cayley_table","elements":["e","a"],"table":[[0,1],[1,0]],"generators":["a"]}
/// {"kind":"heisenberg","k":1,"modulus":null}
/// {"kind":"free_nilpotent","rank":2,"class":3}
/// ```
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    CayleyTable {
        elements: Vec<String>,
        table: Vec<Vec<usize>>,
        #[serde(default)]
        generators: Vec<String>,
    },
    Abelian {
        torsion: Vec<u64>,
        #[serde(default)]
        free_rank: usize,
    },
    Heisenberg {
        k: usize,
        #[serde(default)]
        modulus: Option<u64>,
    },
    FreeNilpotent {
        rank: usize,
        class: u32,
    },
}

impl GroupSpec {
    pub fn abelian(torsion: Vec<u64>, free_rank: usize) -> Self {
        GroupSpec::Abelian { torsion, free_rank }
    }

    pub fn heisenberg(k: usize, modulus: Option<u64>) -> Self {
        GroupSpec::Heisenberg { k, modulus }
    }

    pub fn free_nilpotent(class: u32) -> Self {
        GroupSpec::FreeNilpotent { rank: 2, class }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            GroupSpec::CayleyTable { .. } => "cayley_table",
            GroupSpec::Abelian { .. } => "abelian",
            GroupSpec::Heisenberg { .. } => "heisenberg",
            GroupSpec::FreeNilpotent { .. } => "free_nilpotent",
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("group spec serializes")
    }

    /// Checks the parameter constraints that do not need the full table.
    pub(crate) fn check_parameters(&self) -> Result<()> {
        match self {
            GroupSpec::Abelian { torsion, .. } => {
                if let Some(m) = torsion.iter().find(|&&m| m < 2) {
                    return Err(Error::InvalidSpec(format!(
                        "torsion coefficient {m} must be at least 2"
                    )));
                }
                for w in torsion.windows(2) {
                    if w[1] % w[0] != 0 {
                        return Err(Error::InvalidSpec(format!(
                            "torsion coefficients must form a divisibility chain: {} does not divide {}",
                            w[0], w[1]
                        )));
                    }
                }
                Ok(())
            }
            GroupSpec::Heisenberg { k, modulus } => {
                if *k == 0 {
                    return Err(Error::InvalidSpec("heisenberg k must be at least 1".into()));
                }
                if matches!(modulus, Some(m) if *m < 2) {
                    return Err(Error::InvalidSpec(
                        "heisenberg modulus must be at least 2".into(),
                    ));
                }
                Ok(())
            }
            GroupSpec::FreeNilpotent { rank, class } => {
                if *rank != 2 {
                    return Err(Error::Unsupported(format!(
                        "free nilpotent groups of rank {rank} (only rank 2)"
                    )));
                }
                if !(1..=3).contains(class) {
                    return Err(Error::Unsupported(format!(
                        "free nilpotent groups of class {class} (only 1, 2, 3)"
                    )));
                }
                Ok(())
            }
            GroupSpec::CayleyTable {
                elements, table, ..
            } => {
                let n = elements.len();
                if n == 0 {
                    return Err(Error::InvalidSpec("empty cayley table".into()));
                }
                if table.len() != n || table.iter().any(|row| row.len() != n) {
                    return Err(Error::InvalidSpec(format!("cayley table must be {n}x{n}")));
                }
                if let Some(&bad) = table.iter().flatten().find(|&&v| v >= n) {
                    return Err(Error::InvalidSpec(format!(
                        "table entry {bad} out of range for {n} elements"
                    )));
                }
                Ok(())
            }
        }
    }
}
