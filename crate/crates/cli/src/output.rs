use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::args::{Format, OutputArgs};
use crate::error::{CliError, CliResult};

/// Buffered sink for standard output or an `--out` file.
pub fn open(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(coarray_core::Error::from)?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Resolves `--format`, rejecting formats the subcommand cannot emit.
pub fn format(args: &OutputArgs, default: Format, allowed: &[Format]) -> CliResult<Format> {
    let f = args.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(CliError::Usage(
            format!("--format {f:?} is not available for this subcommand").to_lowercase(),
        ))
    }
}

pub fn json<T: Serialize + ?Sized>(value: &T, mut w: impl Write) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut w, value).map_err(coarray_core::Error::from)?;
    writeln!(w).map_err(coarray_core::Error::from)?;
    Ok(())
}

pub fn finish(mut w: Box<dyn Write>) -> CliResult<()> {
    w.flush().map_err(coarray_core::Error::from)?;
    Ok(())
}
