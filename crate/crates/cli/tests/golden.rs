mod common;

use petit_cli::COMMANDS;

#[test]
fn golden_outputs_match() {
    let failures: Vec<String> = common::cases().iter().filter_map(|c| common::check(c).err()).collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn every_command_has_a_golden_case() {
    let cases = common::cases();
    for cmd in COMMANDS {
        assert!(
            cases.iter().any(|c| c.args.iter().any(|a| a == cmd)),
            "no golden case for {cmd}"
        );
    }
}

#[test]
fn exit_code_two_means_not_found() {
    let cases = common::cases();
    assert!(cases.iter().any(|c| c.exit_code == 2));
    for c in cases.iter().filter(|c| c.exit_code == 2) {
        let (out, code) = common::run(&c.args);
        assert_eq!(code, 2, "{}", c.name);
        assert!(out.contains("within_bound") || out.contains("inconclusive") || out.contains("\"roots\": []"), "{}", c.name);
    }
}

#[test]
fn errors_exit_with_one() {
    let (out, code) = common::run(&["--session".into(), "q.session".into(), "vp".into(), "x".into()]);
    assert_eq!(code, 1);
    assert!(out.contains("WrongCharacteristic"));
    let (_, code) = common::run(&["--session".into(), "missing.session".into(), "minpoly".into()]);
    assert_eq!(code, 1);
}

#[test]
fn bound_precedence() {
    let bin = env!("CARGO_BIN_EXE_petit");
    let run = |extra: &[&str], env: Option<&str>| {
        let mut c = std::process::Command::new(bin);
        c.current_dir(common::golden_dir()).args(["--json", "--session", "q.session"]).args(extra);
        c.args(["eigenring", "f"]);
        match env {
            Some(v) => c.env("PETIT_BOUND", v),
            None => c.env_remove("PETIT_BOUND"),
        };
        String::from_utf8(c.output().unwrap().stdout).unwrap()
    };
    assert!(run(&[], Some("1")).contains("\"bound\": 1"));
    assert!(run(&["--bound", "2"], Some("1")).contains("\"bound\": 2"));
    // no flag, no session option, no environment: N = 2m
    assert!(run(&[], None).contains("\"bound\": 4"));
}
