use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn onepass(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_onepass"))
        .args(args)
        .output()
        .expect("spawn onepass")
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn sample() -> Vec<u8> {
    let mut text = Vec::new();
    for i in 0..4000u32 {
        text.extend_from_slice(format!("line {} of {}\n", i % 37, i % 11).as_bytes());
    }
    text
}

#[test]
fn compress_decompress_roundtrip_both_modes() {
    let dir = TempDir::new().unwrap();
    let input = path(&dir, "in.txt");
    fs::write(&input, sample()).unwrap();
    for stream in [false, true] {
        let packed = path(&dir, "in.opc");
        let unpacked = path(&dir, "out.txt");
        let mut args = vec![
            "compress", "--c", "0.6", "--eps", "0.2", "-i", &input, "-o", &packed,
        ];
        if stream {
            args.push("--stream");
        }
        let out = onepass(&args);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        let report = String::from_utf8_lossy(&out.stderr);
        assert!(
            report.contains(if stream {
                "mode=unknown_n"
            } else {
                "mode=known_n"
            }),
            "{report}"
        );
        assert!(report.contains("peak_buffer_bytes="));

        let out = onepass(&["decompress", "-i", &packed, "-o", &unpacked]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert_eq!(fs::read(&unpacked).unwrap(), fs::read(&input).unwrap());
        assert!(fs::metadata(&packed).unwrap().len() < fs::metadata(&input).unwrap().len());
    }
}

#[test]
fn empty_input_roundtrips() {
    let dir = TempDir::new().unwrap();
    let input = path(&dir, "empty");
    fs::write(&input, b"").unwrap();
    let packed = path(&dir, "empty.opc");
    let unpacked = path(&dir, "empty.out");
    assert!(
        onepass(&["compress", "--c", "0.5", "--eps", "0.2", "-i", &input, "-o", &packed])
            .status
            .success()
    );
    assert!(onepass(&["decompress", "-i", &packed, "-o", &unpacked])
        .status
        .success());
    assert!(fs::read(&unpacked).unwrap().is_empty());
}

#[test]
fn invalid_parameters_exit_with_one() {
    let dir = TempDir::new().unwrap();
    let input = path(&dir, "in");
    fs::write(&input, b"abc").unwrap();
    let packed = path(&dir, "out.opc");
    let out = onepass(&[
        "compress", "--c", "1.5", "--eps", "0.2", "-i", &input, "-o", &packed,
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!Path::new(&packed).exists());

    let out = onepass(&[
        "compress", "--c", "0.5", "--eps", "0.2", "--sigma", "2", "-i", &input, "-o", &packed,
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    assert!(!Path::new(&packed).exists());

    assert_eq!(onepass(&["compress", "--c", "0.5"]).status.code(), Some(1));
}

#[test]
fn wrong_magic_is_corruption() {
    let dir = TempDir::new().unwrap();
    let bogus = path(&dir, "bogus.opc");
    fs::write(&bogus, b"XXXX\x01\x00 not a stream").unwrap();
    let out = onepass(&["decompress", "-i", &bogus, "-o", &path(&dir, "x")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("magic"));
}

#[test]
fn truncated_stream_names_record() {
    let dir = TempDir::new().unwrap();
    let input = path(&dir, "in.txt");
    fs::write(&input, sample()).unwrap();
    let packed = path(&dir, "in.opc");
    assert!(
        onepass(&["compress", "--c", "0.5", "--eps", "0.2", "-i", &input, "-o", &packed])
            .status
            .success()
    );
    let bytes = fs::read(&packed).unwrap();
    fs::write(&packed, &bytes[..bytes.len() - 20]).unwrap();
    let target = path(&dir, "out.txt");
    let out = onepass(&["decompress", "-i", &packed, "-o", &target]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("record"));
    assert!(!Path::new(&target).exists());
}

#[test]
fn entropy_prints_profile() {
    let dir = TempDir::new().unwrap();
    let input = path(&dir, "ab");
    fs::write(&input, b"abababab").unwrap();
    let out = onepass(&["entropy", "--kmax", "2", "-i", &input]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines, ["k,h_k", "0,1", "1,0", "2,0"]);

    let out = onepass(&["entropy", "--kmax", "9", "-i", &input]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn debruijn_count_and_emit() {
    let out = onepass(&["debruijn", "--sigma", "2", "--order", "3", "--count"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "16");

    let out = onepass(&["debruijn", "--sigma", "2", "--order", "3", "--emit"]);
    assert!(out.status.success());
    assert_eq!(out.stdout, [0, 0, 0, 1, 0, 1, 1, 1, 0, 0]);

    let out = onepass(&["debruijn", "--sigma", "2", "--order", "2", "--corpus", "10"]);
    assert!(out.status.success());
    assert_eq!(out.stdout.len(), 8);

    let out = onepass(&["debruijn", "--sigma", "4", "--order", "3", "--count"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn tradeoff_experiment_writes_csv() {
    let dir = TempDir::new().unwrap();
    let input = path(&dir, "markov");
    assert!(onepass(&["markov", "--n", "20000", "-o", &input])
        .status
        .success());
    let csv = path(&dir, "t.csv");
    let out = onepass(&[
        "experiment",
        "tradeoff",
        "--input",
        &input,
        "--c-list",
        "0.5,1",
        "--eps",
        "0.2",
        "--kmax",
        "3",
        "--out",
        &csv,
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("# schema=onepass-tradeoff/1"));
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert!(header.starts_with("row_kind,n,sigma,c,eps,k,b,encoded_bits"));
    let best = text.lines().filter(|l| l.starts_with("best,")).count();
    assert_eq!(best, 2);
}

#[test]
fn lz77_reports_size() {
    let dir = TempDir::new().unwrap();
    let input = path(&dir, "in");
    fs::write(&input, b"abcabcabcabcabcabc").unwrap();
    let out = onepass(&["lz77", "--window", "8", "-i", &input]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("144,"));
}
