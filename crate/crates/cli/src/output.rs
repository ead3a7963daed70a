use std::io::Write;
use std::path::PathBuf;

use crate::args::Format;
use crate::error::CliError;

/// Where results go. With an output directory, data files land there and
/// the summary goes to stdout; without one, data goes to stdout and the
/// summary to stderr. Nothing is ever written anywhere else.
pub struct Sink {
    pub out_dir: Option<PathBuf>,
    pub format: Format,
}

impl Sink {
    pub fn new(out_dir: Option<PathBuf>, format: Format) -> Result<Self, CliError> {
        if let Some(dir) = &out_dir {
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::Input(format!("cannot create {}: {e}", dir.display())))?;
        }
        Ok(Sink { out_dir, format })
    }

    pub fn extension(&self) -> &'static str {
        match self.format {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }

    pub fn is_json(&self) -> bool {
        self.format == Format::Json
    }

    /// Emit `body` as `<stem>.<ext>`, using the extension of `format`.
    pub fn data(&self, stem: &str, body: &str) -> Result<(), CliError> {
        self.file(&format!("{stem}.{}", self.extension()), body)
    }

    /// Emit `body` under an explicit file name.
    pub fn file(&self, name: &str, body: &str) -> Result<(), CliError> {
        match &self.out_dir {
            Some(dir) => {
                let path = dir.join(name);
                std::fs::write(&path, body).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
            }
            None => {
                let mut out = std::io::stdout().lock();
                let _ = out.write_all(body.as_bytes());
                if !body.ends_with('\n') {
                    let _ = out.write_all(b"\n");
                }
                Ok(())
            }
        }
    }

    pub fn summary(&self, line: &str) {
        if self.out_dir.is_some() {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    }
}
