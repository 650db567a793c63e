//! CSV rendering of sweep tables.
//!
//! Header: `snr_db,mean_bps_hz,std_error,trials` followed by the
//! estimator's extra columns. Reals are written as `{:.15e}` (16 significant
//! digits), trial counts as integers.

use std::io::{self, Write};

use mimo_capacity_core::sweep::SweepTable;

pub const BASE_COLUMNS: [&str; 4] = ["snr_db", "mean_bps_hz", "std_error", "trials"];

fn real(x: f64) -> String {
    format!("{x:.15e}")
}

pub fn write_csv<W: Write>(table: &SweepTable, mut out: W) -> io::Result<()> {
    let header: Vec<&str> = BASE_COLUMNS.iter().copied().chain(table.extra_columns.iter().copied()).collect();
    writeln!(out, "{}", header.join(","))?;
    for row in &table.rows {
        let mut fields = vec![real(row.snr_db), real(row.mean), real(row.std_error), row.trials.to_string()];
        fields.extend(row.extra.iter().map(|&x| real(x)));
        writeln!(out, "{}", fields.join(","))?;
    }
    out.flush()
}

pub fn to_csv_string(table: &SweepTable) -> String {
    let mut buf = Vec::new();
    write_csv(table, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("CSV is ASCII")
}
