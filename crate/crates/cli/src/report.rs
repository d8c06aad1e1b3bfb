use std::path::Path;
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::CliError;

/// What a command read and produced. Everything except `timing` is a pure
/// function of the inputs.
#[derive(Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs_digest: String,
    pub outputs: Value,
    pub timing: Timing,
}

#[derive(Serialize)]
pub struct Timing {
    pub elapsed_ms: u128,
}

/// SHA-256 over the command, its arguments and the bytes of every file it
/// read, each length-prefixed.
pub fn digest(command: &str, args: &[String], files: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    let mut feed = |bytes: &[u8]| {
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    };
    feed(command.as_bytes());
    for a in args {
        feed(a.as_bytes());
    }
    for f in files {
        feed(f);
    }
    hex::encode(h.finalize())
}

impl RunReport {
    pub fn new(command: &str, inputs_digest: String, outputs: Value, elapsed: Duration) -> Self {
        RunReport {
            command: command.to_string(),
            inputs_digest,
            outputs,
            timing: Timing {
                elapsed_ms: elapsed.as_millis(),
            },
        }
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(self).map_err(|e| CliError::Internal(e.to_string()))?;
        text.push('\n');
        std::fs::write(path, text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_separates_fields() {
        let a = digest("cone", &["ab".into(), "c".into()], &[]);
        let b = digest("cone", &["a".into(), "bc".into()], &[]);
        assert_ne!(a, b);
        assert_eq!(a, digest("cone", &["ab".into(), "c".into()], &[]));
        assert_ne!(digest("surface", &[], &[b"x"]), digest("surface", &[], &[b"y"]));
        assert_eq!(a.len(), 64);
    }
}
