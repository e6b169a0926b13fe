#![no_main]

use libfuzzer_sys::fuzz_target;

// NUL-separated arguments. Numeric pipelines are only parsed, not run.
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let mut argv = vec!["cmpl".to_string()];
    argv.extend(s.split('\0').map(str::to_string));
    if argv.iter().any(|a| a == "verify") {
        let _ = <cmpl::Cli as clap::Parser>::try_parse_from(&argv);
        return;
    }
    let argv: Vec<String> = argv.into_iter().filter(|a| !a.starts_with("--cache-dir")).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cmpl::run(&argv, None, &mut out, &mut err);
    assert!((0..=3).contains(&code));
    if code == 3 {
        assert!(!err.is_empty());
    }
});
