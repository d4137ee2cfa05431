//! Dataset CSV: header `x1,…,xm,y1,…,yk`, one record per row.

use std::io::{Read, Write};

use deniable_core::{Dataset, Matrix};

use crate::error::{CliError, Result};

fn column_index(name: &str, prefix: char) -> Option<usize> {
    name.trim().strip_prefix(prefix)?.parse::<usize>().ok().filter(|&i| i >= 1)
}

pub fn read_dataset<R: Read>(reader: R) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let m = headers.iter().take_while(|h| column_index(h, 'x').is_some()).count();
    let k = headers.len() - m;
    for (pos, h) in headers.iter().enumerate() {
        let expected = if pos < m { ('x', pos + 1) } else { ('y', pos - m + 1) };
        if column_index(h, expected.0) != Some(expected.1) {
            return Err(CliError::format(format!(
                "bad header column {:?}: expected {}{}",
                h, expected.0, expected.1
            )));
        }
    }
    if k == 0 {
        return Err(CliError::format("dataset needs at least one y column"));
    }

    let mut inputs = Vec::new();
    let mut responses = Vec::new();
    let mut n = 0;
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        if record.len() != m + k {
            return Err(CliError::format(format!("row {}: expected {} fields", line + 1, m + k)));
        }
        for (pos, field) in record.iter().enumerate() {
            let v: f64 = field
                .trim()
                .parse()
                .map_err(|_| CliError::format(format!("row {}: not a number: {:?}", line + 1, field)))?;
            if pos < m { inputs.push(v) } else { responses.push(v) }
        }
        n += 1;
    }
    Ok(Dataset::new(Matrix::from_row_major(n, m, inputs)?, Matrix::from_row_major(n, k, responses)?)?)
}

pub fn write_dataset<W: Write>(writer: W, data: &Dataset) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let header: Vec<String> = (1..=data.input_dim())
        .map(|i| format!("x{i}"))
        .chain((1..=data.output_dim()).map(|j| format!("y{j}")))
        .collect();
    wtr.write_record(&header)?;
    for i in 0..data.len() {
        // `{}` on f64 prints the shortest string that parses back exactly.
        let row: Vec<String> = data
            .inputs()
            .row(i)
            .iter()
            .chain(data.responses().row(i))
            .map(|v| format!("{v}"))
            .collect();
        wtr.write_record(&row)?;
    }
    wtr.flush().map_err(|e| CliError::io("csv output", e))?;
    Ok(())
}
