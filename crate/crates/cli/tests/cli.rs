use std::path::{Path, PathBuf};

use juna_cli::run;

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/reference_m80_n256.pub")
}

fn juna(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("juna").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn value<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no `{key}=` in:\n{text}"))
}

const PI_HEX: &str = "243f6a8885a308d313198a2e03707344a4093822299f31d0082efa98ec4e6c89";

#[test]
fn reference_hash_is_pinned() {
    let f = fixture();
    let (code, out, _) = juna(&[
        "hash",
        "--pub",
        f.to_str().unwrap(),
        "--msg-hex",
        PI_HEX,
        "--bits",
        "256",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, "digest=28cee85474242ff99934\n");

    let dir = tempfile::tempdir().unwrap();
    let msg = dir.path().join("msg.bin");
    let bytes: Vec<u8> = (0..32)
        .map(|i| u8::from_str_radix(&PI_HEX[2 * i..2 * i + 2], 16).unwrap())
        .collect();
    std::fs::write(&msg, bytes).unwrap();
    let (code, out2, _) = juna(&[
        "hash",
        "--pub",
        f.to_str().unwrap(),
        "--msg-file",
        msg.to_str().unwrap(),
    ]);
    assert_eq!((code, out2), (0, out));
}

#[test]
fn padding_is_labelled() {
    let f = fixture();
    let (code, out, _) = juna(&[
        "hash",
        "--pub",
        f.to_str().unwrap(),
        "--msg-bits",
        "1011",
        "--pad",
    ]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "digest").len(), 20);
    assert_eq!(value(&out, "padded"), "true");
}

#[test]
fn bad_messages_exit_2() {
    let f = fixture();
    let (code, _, err) = juna(&["hash", "--pub", f.to_str().unwrap(), "--msg-bits", "1011"]);
    assert_eq!(code, 2);
    assert!(err.contains("length mismatch"));
    let zeros = "0".repeat(256);
    let (code, _, _) = juna(&["hash", "--pub", f.to_str().unwrap(), "--msg-bits", &zeros]);
    assert_eq!(code, 2);
}

#[test]
fn usage_help_and_version() {
    assert_eq!(juna(&["hash"]).0, 1);
    assert_eq!(juna(&["frobnicate"]).0, 1);
    assert_eq!(juna(&["hash", "--pub", "x", "--msg-hex", "ff"]).0, 1);
    let (code, out, _) = juna(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("keygen"));
    assert_eq!(juna(&["--version"]).0, 0);
    assert_eq!(
        juna(&["hash", "--pub", "/nonexistent", "--msg-bits", "1"]).0,
        2
    );
}

#[test]
fn compare_prints_published_costs() {
    let (code, out, _) = juna(&[
        "chp", "compare", "--m", "80", "--n", "2048", "--lgp", "1024",
    ]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "juna_bit_ops"), "52428800");
    assert_eq!(value(&out, "chp_bit_ops"), "8589934592");
}

#[test]
fn keygen_validate_bench() {
    let dir = tempfile::tempdir().unwrap();
    let pubf = dir.path().join("k.pub");
    let privf = dir.path().join("k.priv");
    let (p, q) = (pubf.to_str().unwrap(), privf.to_str().unwrap());
    let args = [
        "keygen",
        "--m",
        "80",
        "--n",
        "96",
        "--p-bits",
        "12",
        "--nbar",
        "96",
        "--out-pub",
        p,
        "--out-priv",
        q,
        "--seed",
        "5",
    ];
    let (code, out, _) = juna(&args);
    assert_eq!(code, 0);
    assert!(out.starts_with("seed=5\n"));
    let first = std::fs::read_to_string(&pubf).unwrap();
    assert_eq!(juna(&args).0, 0);
    assert_eq!(std::fs::read_to_string(&pubf).unwrap(), first);

    let (code, out, _) = juna(&["validate", "--pub", p, "--priv", q]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(value(&out, "status"), "pass");

    let (code, out, _) = juna(&["bench", "--pub", p, "--iters", "100", "--seed", "1"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("seed=1\n"));
    let max: usize = value(&out, "mulcount_max").parse().unwrap();
    assert!(max <= 192);
    assert_eq!(value(&out, "mulcount_bound"), "192");
    assert_eq!(value(&out, "bit_ops_estimate"), "2457600");

    let tampered = first.replacen("C=", "C=1", 1);
    std::fs::write(&pubf, tampered).unwrap();
    assert_eq!(juna(&["validate", "--pub", p, "--priv", q]).0, 2);
}

#[test]
fn toy_attacks() {
    let dir = tempfile::tempdir().unwrap();
    let pubf = dir.path().join("t.pub");
    let privf = dir.path().join("t.priv");
    let (p, q) = (pubf.to_str().unwrap(), privf.to_str().unwrap());
    let args = [
        "keygen",
        "--m",
        "12",
        "--n",
        "8",
        "--p-bits",
        "10",
        "--nbar",
        "8",
        "--out-pub",
        p,
        "--out-priv",
        q,
        "--seed",
        "3",
        "--test-mode",
    ];
    assert_eq!(juna(&args).0, 0);
    assert_eq!(juna(&["validate", "--pub", p, "--priv", q]).0, 2);
    assert_eq!(
        juna(&["validate", "--pub", p, "--priv", q, "--test-mode"]).0,
        0
    );

    let (code, out, _) = juna(&["attack", "brute", "--pub", p, "--priv", q]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "all_hold"), "true");

    let csv = dir.path().join("b.csv");
    let bargs = [
        "attack",
        "birthday",
        "--pub",
        p,
        "--mask-bits",
        "12",
        "--budget",
        "4096",
        "--seed",
        "9",
        "--csv",
        csv.to_str().unwrap(),
    ];
    let (code, out, _) = juna(&bargs);
    assert_eq!(code, 0);
    assert!(out.starts_with("seed=9\n"));
    assert_eq!(value(&out, "truncated"), "true");
    assert_eq!(juna(&bargs).1, out);
    let rows = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(rows.lines().count(), 3);

    let inst = dir.path().join("i.ssp");
    std::fs::write(&inst, "SSP 1\nn=4\ns=11\nc=1\nc=2\nc=4\nc=8\n").unwrap();
    let (code, out, _) = juna(&["attack", "mitm", "--instance", inst.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "bits"), "1101");
}

#[test]
fn chp_round_trip_and_exhaustion() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("chp.txt");
    let (code, out, _) = juna(&[
        "chp",
        "setup",
        "--bits",
        "5",
        "--seed",
        "1",
        "--out",
        f.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "p"), "23");
    let (code, out, _) = juna(&[
        "chp",
        "hash",
        "--params",
        f.to_str().unwrap(),
        "--w1",
        "0",
        "--w2",
        "0",
    ]);
    assert_eq!((code, out.as_str()), (0, "hash=1\n"));
    assert_eq!(
        juna(&[
            "chp",
            "hash",
            "--params",
            f.to_str().unwrap(),
            "--w1",
            "11",
            "--w2",
            "0"
        ])
        .0,
        2
    );
    assert_eq!(
        juna(&["chp", "setup", "--bits", "512", "--budget", "1", "--seed", "1"]).0,
        3
    );
}

#[test]
fn reform_profile() {
    let dir = tempfile::tempdir().unwrap();
    let pubf = dir.path().join("r.pub");
    let privf = dir.path().join("r.priv");
    let (p, q) = (pubf.to_str().unwrap(), privf.to_str().unwrap());
    let args = [
        "keygen",
        "--m",
        "64",
        "--n",
        "128",
        "--p-bits",
        "12",
        "--nbar",
        "128",
        "--out-pub",
        p,
        "--out-priv",
        q,
        "--seed",
        "2",
        "--test-mode",
    ];
    assert_eq!(juna(&args).0, 0, "{:?}", juna(&args));
    let (code, out, _) = juna(&[
        "reform",
        "--profile",
        p,
        "--digest-hex",
        "0123456789abcdef0123456789abcdef",
    ]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "digest").len(), 16);
    assert_eq!(juna(&["reform", "--profile", p, "--digest-hex", "00"]).0, 2);
}
