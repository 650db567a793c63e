use std::fs;
use std::io::{self, Write};

use mimo_capacity_core::sweep::snr_sweep;
use thiserror::Error;

use crate::args::{CliInvocation, Output};
use crate::output::to_csv_string;
use crate::parallel::RayonRunner;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
    #[error("sweep failed: {0}")]
    Sweep(#[from] mimo_capacity_core::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] io::Error),
}

/// Runs the sweep and writes its CSV. The table is rendered in full before
/// anything is written.
pub fn run(invocation: &CliInvocation) -> Result<(), RunError> {
    let runner = RayonRunner::new(invocation.workers)?;
    let table = snr_sweep(&invocation.sweep, &runner)?;
    let csv = to_csv_string(&table);
    match &invocation.output {
        Output::Stdout => {
            let mut out = io::stdout().lock();
            out.write_all(csv.as_bytes())?;
            out.flush()?;
        }
        Output::File(path) => fs::write(path, csv)?,
    }
    Ok(())
}
