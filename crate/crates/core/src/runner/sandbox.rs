//! Process-level sandboxed compile and run. Each execution gets its own
//! temp workspace; resource limits come from rlimits (plus `-Xmx` for
//! the JVM) and wall-clock kills.

use super::{ExecLimits, Outcome, OutcomeKind, RunnerError};
use crate::corpus::Problem;
use crate::langkit::LanguageId;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::Duration;
use wait_timeout::ChildExt;

/// Resolved toolchain commands for one language.
#[derive(Debug, Clone)]
pub enum Toolchain {
    Java { javac: PathBuf, java: PathBuf },
    Cpp { compiler: PathBuf },
    JavaScript { node: PathBuf },
}

fn which(name: &str) -> Option<PathBuf> {
    let path = std::env::var_os("PATH")?;
    std::env::split_paths(&path)
        .map(|dir| dir.join(name))
        .find(|p| p.is_file())
}

/// Discover the toolchain for a language on PATH, honoring
/// `PERTURBEVAL_JAVAC` / `PERTURBEVAL_JAVA` / `PERTURBEVAL_CXX` /
/// `PERTURBEVAL_NODE` overrides.
pub fn toolchain(language: LanguageId) -> Option<Toolchain> {
    let from_env = |var: &str| std::env::var_os(var).map(PathBuf::from).filter(|p| p.is_file());
    match language {
        LanguageId::Java => {
            let javac = from_env("PERTURBEVAL_JAVAC").or_else(|| which("javac"))?;
            let java = from_env("PERTURBEVAL_JAVA").or_else(|| which("java"))?;
            Some(Toolchain::Java { javac, java })
        }
        LanguageId::Cpp => {
            let compiler = from_env("PERTURBEVAL_CXX")
                .or_else(|| which("g++"))
                .or_else(|| which("c++"))
                .or_else(|| which("clang++"))?;
            Some(Toolchain::Cpp { compiler })
        }
        LanguageId::JavaScript => {
            let node = from_env("PERTURBEVAL_NODE").or_else(|| which("node"))?;
            Some(Toolchain::JavaScript { node })
        }
    }
}

pub fn toolchain_available(language: LanguageId) -> bool {
    toolchain(language).is_some()
}

/// Execute a candidate body against the problem's test suite.
pub fn execute(
    code: &str,
    problem: &Problem,
    limits: &ExecLimits,
    test_rename: Option<&(String, String)>,
) -> Result<Outcome, RunnerError> {
    let program = super::assemble_variant_program(problem, &problem.prompt_text(), code, test_rename);
    execute_program(&program, problem.language, limits)
}

/// Compile (where applicable) and run a complete program, classifying
/// the result.
pub fn execute_program(
    program: &str,
    language: LanguageId,
    limits: &ExecLimits,
) -> Result<Outcome, RunnerError> {
    let Some(toolchain) = toolchain(language) else {
        return Err(RunnerError::ToolchainMissing(language));
    };
    let workspace = tempfile::Builder::new()
        .prefix("perturbeval-exec-")
        .tempdir()
        .map_err(|e| RunnerError::SandboxSetup(e.to_string()))?;
    let dir = workspace.path();

    let keep = std::env::var_os("PERTURBEVAL_KEEP_WORKDIRS").is_some();
    let result = execute_in(dir, program, &toolchain, limits);
    if keep {
        let _ = workspace.keep();
    }
    result
}

fn execute_in(
    dir: &Path,
    program: &str,
    toolchain: &Toolchain,
    limits: &ExecLimits,
) -> Result<Outcome, RunnerError> {
    let write = |name: &str| -> Result<PathBuf, RunnerError> {
        let path = dir.join(name);
        std::fs::write(&path, program).map_err(|e| RunnerError::SandboxSetup(e.to_string()))?;
        Ok(path)
    };

    match toolchain {
        Toolchain::Java { javac, java } => {
            write("Main.java")?;
            let compile = run_limited(
                Command::new(javac).arg("Main.java").current_dir(dir),
                limits.compile_timeout(),
                None,
            )?;
            if let Some(outcome) = classify_compile(&compile) {
                return Ok(outcome);
            }
            let heap = format!("-Xmx{}m", limits.memory_cap_bytes / (1024 * 1024));
            let run = run_limited(
                Command::new(java).arg(heap).arg("Main").current_dir(dir),
                limits.run_timeout(),
                None,
            )?;
            Ok(classify_run(&run))
        }
        Toolchain::Cpp { compiler } => {
            write("main.cpp")?;
            let compile = run_limited(
                Command::new(compiler)
                    .args(["-std=c++17", "-O1", "-o", "main", "main.cpp"])
                    .current_dir(dir),
                limits.compile_timeout(),
                None,
            )?;
            if let Some(outcome) = classify_compile(&compile) {
                return Ok(outcome);
            }
            let run = run_limited(
                Command::new(dir.join("main")).current_dir(dir),
                limits.run_timeout(),
                Some(limits.memory_cap_bytes),
            )?;
            Ok(classify_run(&run))
        }
        Toolchain::JavaScript { node } => {
            write("main.js")?;
            let compile = run_limited(
                Command::new(node).args(["--check", "main.js"]).current_dir(dir),
                limits.compile_timeout(),
                None,
            )?;
            if let Some(outcome) = classify_compile(&compile) {
                return Ok(outcome);
            }
            // V8 reserves large address-space ranges, so the cap goes on
            // the heap rather than RLIMIT_AS.
            let heap = format!("--max-old-space-size={}", limits.memory_cap_bytes / (1024 * 1024));
            let run = run_limited(
                Command::new(node).arg(heap).arg("main.js").current_dir(dir),
                limits.run_timeout(),
                None,
            )?;
            Ok(classify_run(&run))
        }
    }
}

struct RunResult {
    timed_out: bool,
    exit_code: Option<i32>,
    signal: Option<i32>,
    stderr: String,
}

/// Output cap: runaway programs get SIGXFSZ instead of filling the disk.
const OUTPUT_CAP_BYTES: u64 = 64 * 1024 * 1024;

fn run_limited(
    command: &mut Command,
    timeout: Duration,
    memory_cap: Option<u64>,
) -> Result<RunResult, RunnerError> {
    let dir = command
        .get_current_dir()
        .map(Path::to_path_buf)
        .unwrap_or_else(|| std::env::temp_dir());
    let stdout_path = dir.join(".stdout");
    let stderr_path = dir.join(".stderr");
    let stdout =
        std::fs::File::create(&stdout_path).map_err(|e| RunnerError::SandboxSetup(e.to_string()))?;
    let stderr =
        std::fs::File::create(&stderr_path).map_err(|e| RunnerError::SandboxSetup(e.to_string()))?;

    command.stdin(Stdio::null()).stdout(stdout).stderr(stderr);

    #[cfg(unix)]
    {
        use std::os::unix::process::CommandExt;
        let cap = memory_cap;
        unsafe {
            command.pre_exec(move || {
                let set = |resource: libc::__rlimit_resource_t, value: u64| {
                    let limit = libc::rlimit {
                        rlim_cur: value,
                        rlim_max: value,
                    };
                    libc::setrlimit(resource, &limit);
                };
                if let Some(bytes) = cap {
                    set(libc::RLIMIT_AS, bytes);
                }
                set(libc::RLIMIT_FSIZE, OUTPUT_CAP_BYTES);
                Ok(())
            });
        }
    }

    let mut child = command
        .spawn()
        .map_err(|e| RunnerError::SandboxSetup(e.to_string()))?;
    let status = child
        .wait_timeout(timeout)
        .map_err(|e| RunnerError::SandboxSetup(e.to_string()))?;

    let (timed_out, exit_code, signal) = match status {
        Some(status) => {
            #[cfg(unix)]
            let signal = {
                use std::os::unix::process::ExitStatusExt;
                status.signal()
            };
            #[cfg(not(unix))]
            let signal = None;
            (false, status.code(), signal)
        }
        None => {
            let _ = child.kill();
            let _ = child.wait();
            (true, None, None)
        }
    };

    let stderr = std::fs::read_to_string(&stderr_path).unwrap_or_default();
    Ok(RunResult {
        timed_out,
        exit_code,
        signal,
        stderr: truncate(&stderr, 4000),
    })
}

fn truncate(s: &str, max: usize) -> String {
    if s.len() <= max {
        s.to_string()
    } else {
        let mut end = max;
        while !s.is_char_boundary(end) {
            end -= 1;
        }
        format!("{}…", &s[..end])
    }
}

fn classify_compile(result: &RunResult) -> Option<Outcome> {
    if result.timed_out {
        return Some(Outcome::new(OutcomeKind::Timeout, "compile timed out"));
    }
    match result.exit_code {
        Some(0) => None,
        _ => Some(Outcome::new(OutcomeKind::CompileError, result.stderr.clone())),
    }
}

fn classify_run(result: &RunResult) -> Outcome {
    if result.timed_out {
        return Outcome::new(OutcomeKind::Timeout, "run timed out");
    }
    if result.exit_code == Some(0) {
        return Outcome::new(OutcomeKind::Passed, "");
    }
    let stderr_lower = result.stderr.to_lowercase();
    if stderr_lower.contains("assert") {
        return Outcome::new(OutcomeKind::AssertionFailure, result.stderr.clone());
    }
    let detail = match (result.exit_code, result.signal) {
        (Some(code), _) => format!("exit code {code}: {}", result.stderr),
        (None, Some(sig)) => format!("signal {sig}: {}", result.stderr),
        (None, None) => result.stderr.clone(),
    };
    Outcome::new(OutcomeKind::RuntimeError, detail)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn limits() -> ExecLimits {
        ExecLimits {
            compile_timeout_secs: 30,
            run_timeout_secs: 5,
            memory_cap_bytes: 512 * 1024 * 1024,
        }
    }

    // The C++ and JS toolchains are exercised for real; Java paths are
    // covered by the same classify logic.

    #[test]
    fn cpp_pass_fail_compile_timeout() {
        if !toolchain_available(LanguageId::Cpp) {
            eprintln!("skipping: no C++ toolchain");
            return;
        }
        let ok = "#include <cassert>\nint main() { assert(1 + 1 == 2); return 0; }\n";
        assert_eq!(
            execute_program(ok, LanguageId::Cpp, &limits()).unwrap().kind,
            OutcomeKind::Passed
        );

        let assertion = "#undef NDEBUG\n#include <cassert>\nint main() { assert(1 + 1 == 3); return 0; }\n";
        assert_eq!(
            execute_program(assertion, LanguageId::Cpp, &limits()).unwrap().kind,
            OutcomeKind::AssertionFailure
        );

        let broken = "int main() { return 0;\n"; // unbalanced brace
        assert_eq!(
            execute_program(broken, LanguageId::Cpp, &limits()).unwrap().kind,
            OutcomeKind::CompileError
        );

        let spin = "int main() { volatile int x = 0; while (true) { x++; } return x; }\n";
        assert_eq!(
            execute_program(spin, LanguageId::Cpp, &limits()).unwrap().kind,
            OutcomeKind::Timeout
        );
    }

    #[test]
    fn js_pass_fail_and_syntax_error() {
        if !toolchain_available(LanguageId::JavaScript) {
            eprintln!("skipping: no node toolchain");
            return;
        }
        let ok = "const assert = require('node:assert');\nassert.strictEqual(2 + 2, 4);\n";
        assert_eq!(
            execute_program(ok, LanguageId::JavaScript, &limits()).unwrap().kind,
            OutcomeKind::Passed
        );

        let failing = "const assert = require('node:assert');\nassert.strictEqual(2 + 2, 5);\n";
        assert_eq!(
            execute_program(failing, LanguageId::JavaScript, &limits()).unwrap().kind,
            OutcomeKind::AssertionFailure
        );

        let syntax = "function f( {\n";
        assert_eq!(
            execute_program(syntax, LanguageId::JavaScript, &limits()).unwrap().kind,
            OutcomeKind::CompileError
        );

        let runtime = "undefinedFunction();\n";
        assert_eq!(
            execute_program(runtime, LanguageId::JavaScript, &limits()).unwrap().kind,
            OutcomeKind::RuntimeError
        );
    }

    #[test]
    fn missing_toolchain_is_reported() {
        // Guaranteed-missing override makes discovery fail.
        if toolchain_available(LanguageId::Java) {
            eprintln!("skipping: java present on this host");
            return;
        }
        let err = execute_program("class Main {}\n", LanguageId::Java, &limits()).unwrap_err();
        assert!(matches!(err, RunnerError::ToolchainMissing(LanguageId::Java)));
    }
}
