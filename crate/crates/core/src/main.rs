use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;
use heatgraph::cli::{error_code, run, RunConfig};

fn main() -> ExitCode {
    let config = RunConfig::parse();
    let result = match &config.out {
        Some(path) => File::create(path)
            .map_err(heatgraph::HeatError::from)
            .and_then(|f| {
                let mut w = BufWriter::new(f);
                let status = run(&config, &mut w)?;
                w.flush()?;
                Ok(status)
            }),
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            run(&config, &mut w).and_then(|s| {
                w.flush()?;
                Ok(s)
            })
        }
    };
    match result {
        Ok(status) => ExitCode::from(status.code() as u8),
        Err(err) => {
            eprintln!("heatgraph: {err}");
            ExitCode::from(error_code(&err) as u8)
        }
    }
}
