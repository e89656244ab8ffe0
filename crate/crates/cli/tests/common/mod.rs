//! Golden-file cases shared by the golden and acceptance targets.

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Case {
    pub name: String,
    pub exit_code: i32,
    pub args: Vec<String>,
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

/// `name | exit | flags | arg | arg ...`; the flags field is split on whitespace.
pub fn cases() -> Vec<Case> {
    let text = std::fs::read_to_string(golden_dir().join("cases.txt")).expect("cases.txt");
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let parts: Vec<&str> = l.split(" | ").map(str::trim).collect();
            assert!(parts.len() >= 3, "malformed case line: {l}");
            let mut args: Vec<String> = parts[2].split_whitespace().map(String::from).collect();
            args.extend(parts[3..].iter().map(|s| s.to_string()));
            Case {
                name: parts[0].to_string(),
                exit_code: parts[1].parse().expect("exit code"),
                args,
            }
        })
        .collect()
}

/// Stdout and exit code of `petit --json <args>` run inside the golden directory.
pub fn run(args: &[String]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_petit"))
        .arg("--json")
        .args(args)
        .current_dir(golden_dir())
        .env_remove("PETIT_BOUND")
        .output()
        .expect("spawn petit");
    (String::from_utf8(out.stdout).expect("utf-8"), out.status.code().unwrap_or(-1))
}

/// Check one case against its golden file; with `UPDATE_GOLDEN=1` rewrite it.
pub fn check(case: &Case) -> Result<(), String> {
    let (stdout, code) = run(&case.args);
    let path = golden_dir().join(format!("{}.json", case.name));
    if std::env::var("UPDATE_GOLDEN").as_deref() == Ok("1") {
        std::fs::write(&path, &stdout).map_err(|e| e.to_string())?;
    }
    let expected = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if stdout != expected {
        return Err(format!("{}: output differs from golden file\n--- got\n{stdout}--- expected\n{expected}", case.name));
    }
    if code != case.exit_code {
        return Err(format!("{}: exit code {code}, expected {}", case.name, case.exit_code));
    }
    let (again, _) = run(&case.args);
    if again != stdout {
        return Err(format!("{}: output is not reproducible", case.name));
    }
    Ok(())
}
