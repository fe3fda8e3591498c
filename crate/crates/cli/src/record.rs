use std::io::{Read, Write};

use serde::{Deserialize, Serialize, Serializer};

use crate::error::CliResult;

pub const CSV_HEADER: [&str; 10] = [
    "experiment",
    "matrix_family",
    "n",
    "rank",
    "selected",
    "blocks",
    "threads",
    "rel_error",
    "wall_seconds",
    "seed",
];

/// One row of an error or timing experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub experiment: String,
    pub matrix_family: String,
    pub n: usize,
    /// Generator rank, 0 when the family has none.
    pub rank: usize,
    pub selected: usize,
    pub blocks: usize,
    pub threads: usize,
    #[serde(serialize_with = "seventeen_digits")]
    pub rel_error: f64,
    #[serde(serialize_with = "seventeen_digits")]
    pub wall_seconds: f64,
    pub seed: u64,
}

fn seventeen_digits<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{x:.16e}"))
}

pub fn write_records<W: Write>(w: W, records: &[ExperimentRecord]) -> CliResult<()> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    // Written explicitly so an empty run still carries the schema.
    out.write_record(CSV_HEADER)?;
    for rec in records {
        out.serialize(rec)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_records<R: Read>(r: R) -> CliResult<Vec<ExperimentRecord>> {
    let mut input = csv::Reader::from_reader(r);
    let header = input.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(crate::error::CliError::Io(format!(
            "unexpected CSV header: {}",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    input
        .deserialize()
        .map(|row| row.map_err(Into::into))
        .collect()
}
