//! Size-only adapter for compressor executables that read raw bytes on
//! stdin and write the compressed stream to stdout.

use std::io::{Read, Write};
use std::process::{Command, Stdio};
use std::sync::{Arc, Condvar, Mutex};
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use wait_timeout::ChildExt;

use super::{CodecError, Compressor};

/// How to run one external compressor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExternalSpec {
    pub name: String,
    /// Program followed by its arguments.
    pub argv: Vec<String>,
    #[serde(default = "default_timeout")]
    pub timeout_secs: u64,
}

fn default_timeout() -> u64 {
    30
}

#[derive(Debug, Clone)]
pub struct ExternalCodec {
    spec: ExternalSpec,
    slots: Arc<ProcessSlots>,
}

impl ExternalCodec {
    pub fn new(spec: ExternalSpec) -> Self {
        Self::with_slots(spec, Arc::new(ProcessSlots::new(1)))
    }

    /// Shares a process limit with other adapters.
    pub fn with_slots(spec: ExternalSpec, slots: Arc<ProcessSlots>) -> Self {
        Self { spec, slots }
    }

    pub fn spec(&self) -> &ExternalSpec {
        &self.spec
    }

    fn fail(&self, detail: String) -> CodecError {
        CodecError::External {
            codec: self.spec.name.clone(),
            detail,
        }
    }

    /// Runs the tool on `data` and returns its raw standard output.
    pub fn run(&self, data: &[u8]) -> Result<Vec<u8>, CodecError> {
        let (program, args) = self
            .spec
            .argv
            .split_first()
            .ok_or_else(|| self.fail("empty argv template".into()))?;
        let _slot = self.slots.acquire();
        let mut child = Command::new(program)
            .args(args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|e| self.fail(format!("cannot start {program}: {e}")))?;

        let mut stdin = child.stdin.take().expect("piped stdin");
        let input = data.to_vec();
        let writer = thread::spawn(move || stdin.write_all(&input));
        let mut stdout = child.stdout.take().expect("piped stdout");
        let reader = thread::spawn(move || {
            let mut buf = Vec::new();
            stdout.read_to_end(&mut buf).map(|_| buf)
        });
        let mut stderr = child.stderr.take().expect("piped stderr");
        let err_reader = thread::spawn(move || {
            let mut buf = String::new();
            let _ = stderr.read_to_string(&mut buf);
            buf
        });

        let timeout = Duration::from_secs(self.spec.timeout_secs);
        let status = match child
            .wait_timeout(timeout)
            .map_err(|e| self.fail(format!("wait failed: {e}")))?
        {
            Some(status) => status,
            None => {
                let _ = child.kill();
                let _ = child.wait();
                return Err(self.fail(format!("timed out after {}s", self.spec.timeout_secs)));
            }
        };
        // a tool may exit without draining stdin; that is its business
        let _ = writer.join();
        let output = reader
            .join()
            .expect("stdout reader panicked")
            .map_err(|e| self.fail(format!("reading output: {e}")))?;
        let diagnostics = err_reader.join().unwrap_or_default();
        if !status.success() {
            return Err(self.fail(format!("exited with {status}: {}", diagnostics.trim())));
        }
        Ok(output)
    }
}

impl Compressor for ExternalCodec {
    fn name(&self) -> &str {
        &self.spec.name
    }

    fn compressed_bits(&self, data: &[u8]) -> Result<u64, CodecError> {
        Ok(8 * self.run(data)?.len() as u64)
    }
}

/// Counting semaphore bounding concurrent external processes.
#[derive(Debug)]
pub struct ProcessSlots {
    free: Mutex<usize>,
    cv: Condvar,
}

impl ProcessSlots {
    pub fn new(limit: usize) -> Self {
        Self {
            free: Mutex::new(limit.max(1)),
            cv: Condvar::new(),
        }
    }

    fn acquire(&self) -> SlotGuard<'_> {
        let mut free = self.free.lock().expect("slot lock poisoned");
        while *free == 0 {
            free = self.cv.wait(free).expect("slot lock poisoned");
        }
        *free -= 1;
        SlotGuard(self)
    }
}

struct SlotGuard<'a>(&'a ProcessSlots);

impl Drop for SlotGuard<'_> {
    fn drop(&mut self) {
        *self.0.free.lock().expect("slot lock poisoned") += 1;
        self.0.cv.notify_one();
    }
}

/// Convenience wrapper matching the one-shot form of the adapter.
pub fn external_size(spec: &ExternalSpec, data: &[u8]) -> Result<super::CompressedSize, CodecError> {
    ExternalCodec::new(spec.clone())
        .compressed_bits(data)
        .map(super::CompressedSize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(argv: &[&str]) -> ExternalSpec {
        ExternalSpec {
            name: "ext".into(),
            argv: argv.iter().map(|s| s.to_string()).collect(),
            timeout_secs: 5,
        }
    }

    #[test]
    fn identity_tool() {
        let size = external_size(&spec(&["cat"]), b"hello world").unwrap();
        assert_eq!(size.bits(), 88);
        assert_eq!(external_size(&spec(&["cat"]), b"").unwrap().bits(), 0);
    }

    #[test]
    fn missing_executable() {
        let err = external_size(&spec(&["/nonexistent/compressor"]), b"x").unwrap_err();
        assert!(matches!(err, CodecError::External { .. }));
    }

    #[test]
    fn nonzero_exit_carries_stderr() {
        let err = external_size(&spec(&["sh", "-c", "echo boom >&2; exit 3"]), b"x").unwrap_err();
        let text = err.to_string();
        assert!(text.contains("boom"), "{text}");
    }

    #[test]
    fn timeout() {
        let mut s = spec(&["sleep", "5"]);
        s.timeout_secs = 1;
        let err = external_size(&s, b"").unwrap_err();
        assert!(err.to_string().contains("timed out"));
    }

    #[test]
    fn empty_argv() {
        assert!(external_size(&spec(&[]), b"x").is_err());
    }

    #[test]
    fn gzip_compresses_repetition() {
        if Command::new("gzip").arg("--version").output().is_err() {
            eprintln!("gzip not installed; skipping");
            return;
        }
        let data = b"ab".repeat(1000);
        let size = external_size(&spec(&["gzip", "-9", "-n", "-c"]), &data).unwrap();
        assert!(size.bits() < 16000, "{}", size.bits());
    }
}
