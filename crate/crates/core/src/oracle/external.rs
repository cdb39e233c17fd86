//! Running a TH0 prover as a subprocess and reading its SZS status.

use std::io::{Read, Write};
use std::path::Path;
use std::process::{Command, Stdio};
use std::sync::OnceLock;
use std::thread;
use std::time::{Duration, Instant};

use log::{debug, info, warn};
use regex::Regex;

use super::{OracleVerdict, UnknownReason};
use crate::hol::HolProblem;
use crate::tptp::emit_problem;

/// Environment variable holding the default prover command template.
pub const ATP_ENV: &str = "DHOL_ATP";

const POLL: Duration = Duration::from_millis(10);

/// Maps prover output to a verdict by its first `SZS status` line.
pub fn szs_verdict(output: &str, by: &str, elapsed: Duration) -> OracleVerdict {
    static RE: OnceLock<Regex> = OnceLock::new();
    let re = RE.get_or_init(|| Regex::new(r"SZS status\s+([A-Za-z]+)").expect("static regex"));
    let Some(m) = re.captures(output) else {
        return OracleVerdict::Unknown(UnknownReason::ParseFailure);
    };
    match &m[1] {
        "Theorem" | "Unsatisfiable" => OracleVerdict::Proved {
            by: by.into(),
            elapsed,
        },
        "CounterSatisfiable" | "Satisfiable" => OracleVerdict::Refuted {
            by: by.into(),
            elapsed,
        },
        "Timeout" => OracleVerdict::Unknown(UnknownReason::Timeout),
        _ => OracleVerdict::Unknown(UnknownReason::GaveUp),
    }
}

/// A short name for the prover behind a template: its first word.
pub fn prover_name(template: &str) -> String {
    let first = template.split_whitespace().next().unwrap_or("external");
    let base = Path::new(first)
        .file_name()
        .and_then(|s| s.to_str())
        .unwrap_or(first);
    format!("external:{base}")
}

fn shell_quote(s: &str) -> String {
    format!("'{}'", s.replace('\'', "'\\''"))
}

/// Fills `{file}` and `{timeout}`; a template without `{file}` gets the
/// path appended.
pub fn render_command(template: &str, file: &Path, timeout: Duration) -> String {
    let f = shell_quote(&file.to_string_lossy());
    let secs = timeout.as_secs().max(1).to_string();
    let cmd = template.replace("{timeout}", &secs);
    if cmd.contains("{file}") {
        cmd.replace("{file}", &f)
    } else {
        format!("{cmd} {f}")
    }
}

/// Writes the problem to a fresh temporary file, runs the command, and
/// reads the SZS status. When `keep_dir` is set the file is left there.
pub fn run_external(
    problem: &HolProblem,
    template: &str,
    timeout: Duration,
    keep_dir: Option<&Path>,
) -> OracleVerdict {
    let by = prover_name(template);
    let mut builder = tempfile::Builder::new();
    builder.prefix("dhol-").suffix(".p");
    let file = match keep_dir {
        Some(d) => builder.tempfile_in(d),
        None => builder.tempfile(),
    };
    let mut file = match file {
        Ok(f) => f,
        Err(e) => {
            warn!("{by}: cannot create problem file: {e}");
            return OracleVerdict::Unknown(UnknownReason::GaveUp);
        }
    };
    if let Err(e) = file.write_all(emit_problem(problem).as_bytes()).and_then(|_| file.flush()) {
        warn!("{by}: cannot write problem file: {e}");
        return OracleVerdict::Unknown(UnknownReason::GaveUp);
    }
    let cmd = render_command(template, file.path(), timeout);
    let verdict = run_command(&cmd, &by, timeout);
    if keep_dir.is_some() {
        match file.keep() {
            Ok((_, path)) => info!("{by}: kept {}", path.display()),
            Err(e) => warn!("{by}: could not keep problem file: {e}"),
        }
    }
    verdict
}

fn run_command(cmd: &str, by: &str, timeout: Duration) -> OracleVerdict {
    debug!("{by}: running {cmd}");
    let start = Instant::now();
    let mut command = Command::new("sh");
    command
        .arg("-c")
        .arg(cmd)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    #[cfg(unix)]
    {
        use std::os::unix::process::CommandExt;
        command.process_group(0);
    }
    let mut child = match command.spawn() {
        Ok(c) => c,
        Err(e) => {
            warn!("{by}: cannot start: {e}");
            return OracleVerdict::Unknown(UnknownReason::GaveUp);
        }
    };
    let drain = |r: Option<Box<dyn Read + Send>>| {
        thread::spawn(move || {
            let mut s = String::new();
            if let Some(mut r) = r {
                let mut buf = Vec::new();
                let _ = r.read_to_end(&mut buf);
                s = String::from_utf8_lossy(&buf).into_owned();
            }
            s
        })
    };
    let out = drain(child.stdout.take().map(|s| Box::new(s) as Box<dyn Read + Send>));
    let err = drain(child.stderr.take().map(|s| Box::new(s) as Box<dyn Read + Send>));
    let status = loop {
        match child.try_wait() {
            Ok(Some(st)) => break Some(st),
            Ok(None) if start.elapsed() >= timeout => break None,
            Ok(None) => thread::sleep(POLL),
            Err(e) => {
                warn!("{by}: wait failed: {e}");
                break None;
            }
        }
    };
    if status.is_none() {
        kill_group(&mut child);
        let _ = out.join();
        let _ = err.join();
        info!("{by}: timed out after {timeout:?}");
        return OracleVerdict::Unknown(UnknownReason::Timeout);
    }
    let elapsed = start.elapsed();
    let stdout = out.join().unwrap_or_default();
    let stderr = err.join().unwrap_or_default();
    debug!("{by}: exit {status:?}, {} bytes of output", stdout.len() + stderr.len());
    let v = szs_verdict(&stdout, by, elapsed);
    if v == OracleVerdict::Unknown(UnknownReason::ParseFailure) {
        let v2 = szs_verdict(&stderr, by, elapsed);
        if v2 == v && !stderr.trim().is_empty() {
            warn!("{by}: no SZS status; stderr: {}", stderr.trim());
        }
        return v2;
    }
    v
}

fn kill_group(child: &mut std::process::Child) {
    #[cfg(unix)]
    {
        let pgid = format!("-{}", child.id());
        let _ = Command::new("kill")
            .args(["-KILL", "--", &pgid])
            .stdout(Stdio::null())
            .stderr(Stdio::null())
            .status();
    }
    let _ = child.kill();
    let _ = child.wait();
}
