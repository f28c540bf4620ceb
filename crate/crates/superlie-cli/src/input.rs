//! JSON input files and their conversion to library types.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use superlie::arith::{parse_q, Q};
use superlie::freelie::{Letter, SuperAlphabet};
use superlie::gkm::{BorcherdsCartanData, MultiplicityTable};
use superlie::graded_series::{Degree, GradingSpec};
use superlie::monstrous::{QSeries, QSeriesFile};

use crate::CliError;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn rational(s: &str) -> Result<Q, CliError> {
    parse_q(s).ok_or_else(|| CliError::Input(format!("not a rational: {s:?}")))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CartanFile {
    pub indices: Option<Vec<String>>,
    pub matrix: Vec<Vec<String>>,
    pub symmetrizers: Option<Vec<String>>,
    pub charge: Option<Vec<u64>>,
    pub parity: Option<Vec<i8>>,
    pub automorphism: Option<String>,
}

impl CartanFile {
    pub fn to_data(&self) -> Result<BorcherdsCartanData, CliError> {
        let n = self.matrix.len();
        let matrix = self
            .matrix
            .iter()
            .map(|row| {
                if row.len() != n {
                    return Err(CliError::Input("matrix is not square".into()));
                }
                row.iter().map(|x| rational(x)).collect()
            })
            .collect::<Result<Vec<Vec<Q>>, _>>()?;
        let indices = self.indices.clone().unwrap_or_else(|| (1..=n).map(|i| i.to_string()).collect());
        let symmetrizers = match &self.symmetrizers {
            Some(v) => v.iter().map(|x| rational(x)).collect::<Result<Vec<_>, _>>()?,
            None => vec![Q::from_integer(1.into()); n],
        };
        let charge = self.charge.clone().unwrap_or_else(|| vec![1; n]);
        let parity = self.parity.clone().unwrap_or_else(|| vec![1; n]);
        if indices.len() != n || symmetrizers.len() != n || charge.len() != n || parity.len() != n {
            return Err(CliError::Input("indices, symmetrizers, charge and parity must match the matrix size".into()));
        }
        let data = BorcherdsCartanData { indices, matrix, symmetrizers, charge, parity };
        let violations = data.validate();
        if !violations.is_empty() {
            let v: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
            return Err(CliError::Input(v.join("; ")));
        }
        Ok(data)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradingFile {
    pub moduli: Vec<u64>,
    pub parity: Vec<i8>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LetterFile {
    pub name: Option<String>,
    pub degree: Vec<u32>,
    #[serde(default)]
    pub acomp: Vec<i64>,
    pub eigenvalue: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorFile {
    pub grading: Option<GradingFile>,
    pub letters: Vec<LetterFile>,
}

impl GeneratorFile {
    /// Without an explicit grading, one group coordinate means ℤ₂ with ψ = −1 and none means no group.
    pub fn to_alphabet(&self) -> Result<SuperAlphabet, CliError> {
        let first = self.letters.first().ok_or_else(|| CliError::Input("no letters".into()))?;
        let rank = first.degree.len();
        let spec = match &self.grading {
            Some(g) => GradingSpec::new(rank, g.moduli.clone(), g.parity.clone()).map_err(|e| CliError::Input(e.to_string()))?,
            None => match first.acomp.len() {
                0 => GradingSpec::plain(rank),
                1 => GradingSpec::super_z2(rank),
                k => return Err(CliError::Input(format!("{k} group coordinates need an explicit grading"))),
            },
        };
        let mut letters = Vec::new();
        for (i, l) in self.letters.iter().enumerate() {
            let eigenvalue = match &l.eigenvalue {
                Some(s) => rational(s)?,
                None => Q::from_integer(1.into()),
            };
            letters.push(Letter {
                name: l.name.clone().unwrap_or_else(|| format!("v{}", i + 1)),
                degree: Degree::new(l.degree.clone(), l.acomp.clone()),
                eigenvalue,
            });
        }
        SuperAlphabet::new(&spec, letters).map_err(|e| CliError::Input(e.to_string()))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiplicityEntry {
    pub coords: Vec<u32>,
    pub dim: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiplicityFile {
    pub entries: Vec<MultiplicityEntry>,
}

impl MultiplicityFile {
    pub fn to_table(&self, rank: usize) -> Result<MultiplicityTable, CliError> {
        let mut t = MultiplicityTable::new();
        for e in &self.entries {
            if e.coords.len() != rank {
                return Err(CliError::Input(format!("root {:?} has the wrong length", e.coords)));
            }
            t.insert(e.coords.clone(), rational(&e.dim)?);
        }
        Ok(t)
    }
}

pub fn read_qseries(path: &Path) -> Result<QSeries, CliError> {
    let file: QSeriesFile = read_json(path)?;
    QSeries::from_file(&file).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Space-separated integers.
pub fn index_list(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<usize>().map_err(|_| CliError::Input(format!("bad index {s:?}"))))
        .collect()
}
