//! Line-delimited JSON helpers shared by every file format in the pipeline.

use crate::error::Result;
use serde::de::DeserializeOwned;
use serde::Serialize;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

/// Read every record from a JSONL file. Blank lines are skipped.
pub fn read_file<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<Vec<T>> {
    let reader = BufReader::new(File::open(path)?);
    read(reader)
}

pub fn read<T: DeserializeOwned>(reader: impl BufRead) -> Result<Vec<T>> {
    let mut records = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        records.push(serde_json::from_str(&line)?);
    }
    Ok(records)
}

/// Write records as one canonical JSON object per line.
pub fn write_file<T: Serialize>(path: impl AsRef<Path>, records: &[T]) -> Result<()> {
    let mut writer = BufWriter::new(File::create(path)?);
    write(&mut writer, records)?;
    writer.flush()?;
    Ok(())
}

pub fn write<T: Serialize>(mut writer: impl Write, records: &[T]) -> Result<()> {
    for record in records {
        serde_json::to_writer(&mut writer, record)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

/// Render records to an in-memory JSONL string.
pub fn to_string<T: Serialize>(records: &[T]) -> Result<String> {
    let mut buffer = Vec::new();
    write(&mut buffer, records)?;
    Ok(String::from_utf8(buffer).expect("serde_json emits UTF-8"))
}
