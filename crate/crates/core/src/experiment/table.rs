// Copyright 2026 The lcdiscard Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Delimited-text tables with a provenance comment line.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::ExperimentError;

/// Writes `# <provenance>`, a header row and the rows, atomically via a
/// sibling temp file.
pub fn write_table<I, R>(path: &Path, provenance: &str, header: &[&str], rows: I) -> Result<(), ExperimentError>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut buf = Vec::new();
    writeln!(buf, "# {provenance}").map_err(|e| ExperimentError::io(path, e))?;
    {
        let mut writer = csv::Writer::from_writer(&mut buf);
        writer.write_record(header).map_err(|e| ExperimentError::csv(path, e))?;
        for row in rows {
            writer
                .write_record(row.into_iter().collect::<Vec<_>>())
                .map_err(|e| ExperimentError::csv(path, e))?;
        }
        writer.flush().map_err(|e| ExperimentError::io(path, e))?;
    }
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| ExperimentError::io(parent, e))?;
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, buf).map_err(|e| ExperimentError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| ExperimentError::io(path, e))
}

pub struct Table {
    pub provenance: Option<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

pub fn read_table(path: &Path) -> Result<Table, ExperimentError> {
    let text = fs::read_to_string(path).map_err(|e| ExperimentError::io(path, e))?;
    let provenance = text
        .lines()
        .next()
        .and_then(|l| l.strip_prefix('#'))
        .map(|l| l.trim().to_string());
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| ExperimentError::csv(path, e))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| ExperimentError::csv(path, e))?;
        rows.push(record.iter().map(str::to_string).collect());
    }
    Ok(Table {
        provenance,
        header,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let rows = vec![vec!["a".to_string(), "1.5".to_string()], vec!["b,c".to_string(), "2".to_string()]];
        write_table(&path, "config_digest: x, seed: 3", &["name", "value"], rows.clone()).unwrap();
        let table = read_table(&path).unwrap();
        assert_eq!(table.provenance.as_deref(), Some("config_digest: x, seed: 3"));
        assert_eq!(table.header, vec!["name", "value"]);
        assert_eq!(table.rows, rows);
        assert_eq!(table.column("value"), Some(1));
    }
}
