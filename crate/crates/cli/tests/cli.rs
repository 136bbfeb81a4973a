use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rotnd_core::format::{decode, encode, read_tensor, write_tensor, AnyTensor};
use rotnd_core::{TensorBuffer, TensorShape};

fn rotnd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rotnd"))
        .args(args)
        .output()
        .expect("spawn rotnd")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn i64_payload(path: &Path) -> Vec<i64> {
    match read_tensor(path).unwrap() {
        AnyTensor::I64(b) => b.data().to_vec(),
        other => panic!("expected i64, got {:?}", other.dtype()),
    }
}

#[test]
fn gen_produces_worked_example_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let seven = dir.path().join("seven.ntrt");
    let out = rotnd(&[
        "gen",
        "--shape",
        "7",
        "--dtype",
        "i64",
        "--fill",
        "iota",
        "--output",
        p(&seven),
    ]);
    assert!(out.status.success());
    assert_eq!(i64_payload(&seven), (1..=7).collect::<Vec<_>>());

    let grid = dir.path().join("grid.ntrt");
    assert!(rotnd(&[
        "gen",
        "--shape",
        "5,7",
        "--fill",
        "iota",
        "--output",
        p(&grid)
    ])
    .status
    .success());
    assert_eq!(i64_payload(&grid), (1..=35).collect::<Vec<_>>());
    assert_eq!(read_tensor(&grid).unwrap().shape().dims(), &[5, 7]);
}

#[test]
fn gen_random_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.ntrt");
    let b = dir.path().join("b.ntrt");
    for path in [&a, &b] {
        let out = rotnd(&[
            "gen",
            "--shape",
            "4,6,3",
            "--dtype",
            "f64",
            "--fill",
            "random",
            "--seed",
            "7",
            "--output",
            p(path),
        ]);
        assert!(out.status.success());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn rotate_worked_examples() {
    let dir = tempfile::tempdir().unwrap();
    let seven = dir.path().join("seven.ntrt");
    let out7 = dir.path().join("seven_rot.ntrt");
    rotnd(&["gen", "--shape", "7", "--output", p(&seven)]);
    let out = rotnd(&[
        "rotate",
        "--input",
        p(&seven),
        "--output",
        p(&out7),
        "--shift",
        "3",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(i64_payload(&out7), vec![5, 6, 7, 1, 2, 3, 4]);

    let grid = dir.path().join("grid.ntrt");
    let rotated = dir.path().join("grid_rot.ntrt");
    rotnd(&["gen", "--shape", "5,7", "--output", p(&grid)]);
    for workers in ["1", "3"] {
        let out = rotnd(&[
            "rotate",
            "--input",
            p(&grid),
            "--output",
            p(&rotated),
            "--shift",
            "2,3",
            "--workers",
            workers,
        ]);
        assert!(out.status.success());
        #[rustfmt::skip]
        let expected = vec![
            26, 27, 28, 22, 23, 24, 25,
            33, 34, 35, 29, 30, 31, 32,
            5, 6, 7, 1, 2, 3, 4,
            12, 13, 14, 8, 9, 10, 11,
            19, 20, 21, 15, 16, 17, 18,
        ];
        assert_eq!(i64_payload(&rotated), expected);
    }
}

#[test]
fn rotate_zero_and_inverse_preserve_payload() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.ntrt");
    let once = dir.path().join("once.ntrt");
    let twice = dir.path().join("twice.ntrt");
    rotnd(&[
        "gen",
        "--shape",
        "6,9",
        "--dtype",
        "u8",
        "--fill",
        "random",
        "--seed",
        "3",
        "--output",
        p(&input),
    ]);

    assert!(rotnd(&[
        "rotate",
        "--input",
        p(&input),
        "--output",
        p(&once),
        "--shift",
        "0,0"
    ])
    .status
    .success());
    assert_eq!(fs::read(&input).unwrap(), fs::read(&once).unwrap());

    assert!(rotnd(&[
        "rotate",
        "--input",
        p(&input),
        "--output",
        p(&once),
        "--shift",
        "-4,11"
    ])
    .status
    .success());
    assert_ne!(fs::read(&input).unwrap(), fs::read(&once).unwrap());
    // d - k = (6 + 4, 9 - 11)
    assert!(rotnd(&[
        "rotate",
        "--input",
        p(&once),
        "--output",
        p(&twice),
        "--shift",
        "10,-2",
        "--workers",
        "2"
    ])
    .status
    .success());
    assert_eq!(fs::read(&input).unwrap(), fs::read(&twice).unwrap());
}

#[test]
fn reverse_command() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.ntrt");
    let out_path = dir.path().join("out.ntrt");
    rotnd(&["gen", "--shape", "2,3", "--output", p(&input)]);
    assert!(
        rotnd(&["reverse", "--input", p(&input), "--output", p(&out_path)])
            .status
            .success()
    );
    assert_eq!(i64_payload(&out_path), vec![6, 5, 4, 3, 2, 1]);

    assert!(rotnd(&[
        "reverse",
        "--input",
        p(&input),
        "--output",
        p(&out_path),
        "--start",
        "0,1",
        "--end",
        "1,2",
        "--workers",
        "2"
    ])
    .status
    .success());
    assert_eq!(i64_payload(&out_path), vec![1, 6, 5, 4, 3, 2]);

    let out = rotnd(&[
        "reverse",
        "--input",
        p(&input),
        "--output",
        p(&out_path),
        "--start",
        "0,1",
        "--end",
        "2,2",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.ntrt");
    let out_path = dir.path().join("out.ntrt");
    rotnd(&["gen", "--shape", "5,7", "--output", p(&input)]);

    // shift arity mismatch
    let out = rotnd(&[
        "rotate",
        "--input",
        p(&input),
        "--output",
        p(&out_path),
        "--shift",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--shift"));

    // bad magic
    let mut bytes = fs::read(&input).unwrap();
    bytes[..4].copy_from_slice(b"XXXX");
    let bad = dir.path().join("bad.ntrt");
    fs::write(&bad, &bytes).unwrap();
    let out = rotnd(&[
        "rotate",
        "--input",
        p(&bad),
        "--output",
        p(&out_path),
        "--shift",
        "1,1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("magic"));

    // missing input and unwritable output are I/O failures
    let missing = dir.path().join("missing.ntrt");
    assert_eq!(
        rotnd(&[
            "rotate",
            "--input",
            p(&missing),
            "--output",
            p(&out_path),
            "--shift",
            "1,1"
        ])
        .status
        .code(),
        Some(2)
    );
    let nowhere = dir.path().join("no/such/dir/out.ntrt");
    assert_eq!(
        rotnd(&[
            "rotate",
            "--input",
            p(&input),
            "--output",
            p(&nowhere),
            "--shift",
            "1,1"
        ])
        .status
        .code(),
        Some(2)
    );

    // argument errors
    assert_eq!(
        rotnd(&["rotate", "--input", p(&input)]).status.code(),
        Some(1)
    );
    assert_eq!(
        rotnd(&[
            "bench",
            "--elems",
            "1000",
            "--dims",
            "2",
            "--reps",
            "2",
            "--csv",
            p(&out_path)
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        rotnd(&[
            "verify",
            "--trials",
            "0",
            "--max-dims",
            "2",
            "--max-elems",
            "10"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        rotnd(&[
            "verify",
            "--trials",
            "1",
            "--max-dims",
            "9",
            "--max-elems",
            "10"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        rotnd(&[
            "gen",
            "--shape",
            "3",
            "--dtype",
            "f32",
            "--output",
            p(&out_path)
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(rotnd(&["--help"]).status.code(), Some(0));
}

#[test]
fn truncated_payload_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("short.ntrt");
    let b = TensorBuffer::from_fn(TensorShape::new(vec![5, 7]).unwrap(), |i| i as i64);
    let mut bytes = encode(&b);
    bytes.truncate(bytes.len() - 8);
    fs::write(&path, bytes).unwrap();
    let out = rotnd(&[
        "rotate",
        "--input",
        p(&path),
        "--output",
        p(&dir.path().join("o")),
        "--shift",
        "1,1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("truncated"));
}

#[test]
fn write_read_round_trip_all_dtypes() {
    let dir = tempfile::tempdir().unwrap();
    let shape = TensorShape::new(vec![3, 4, 2]).unwrap();
    let f = TensorBuffer::from_fn(shape.clone(), |i| i as f64 * -0.5);
    let i = TensorBuffer::from_fn(shape.clone(), |i| i as i64 - 12);
    let u = TensorBuffer::from_fn(shape, |i| i as u8);
    let path = dir.path().join("t.ntrt");
    write_tensor(&path, &f).unwrap();
    assert_eq!(read_tensor(&path).unwrap(), AnyTensor::F64(f));
    write_tensor(&path, &i).unwrap();
    assert_eq!(read_tensor(&path).unwrap(), AnyTensor::I64(i));
    write_tensor(&path, &u).unwrap();
    let bytes = fs::read(&path).unwrap();
    assert_eq!(bytes.len(), 8 + 24 + 24);
    assert_eq!(decode(&bytes).unwrap(), AnyTensor::U8(u));
}

#[test]
fn verify_command() {
    let out = rotnd(&[
        "verify",
        "--trials",
        "1",
        "--max-dims",
        "1",
        "--max-elems",
        "1",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("summary: 1 of 1 trials passed"));

    let out = rotnd(&[
        "verify",
        "--trials",
        "20",
        "--max-dims",
        "3",
        "--max-elems",
        "500",
        "--seed",
        "9",
        "--workers",
        "4",
    ]);
    assert!(out.status.success());
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("bench.csv");
    let out = rotnd(&[
        "bench",
        "--elems",
        "1000,4096",
        "--dims",
        "2",
        "--workers",
        "1,2",
        "--reps",
        "3",
        "--csv",
        p(&csv_path),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let records = rotnd::bench::read_csv(&csv_path).unwrap();
    assert_eq!(records.len(), 4);
    assert_eq!(records[0].shape, vec![31, 32]);
    assert_eq!(records[2].shape, vec![64, 64]);
    assert_eq!(
        records.iter().map(|r| r.workers).collect::<Vec<_>>(),
        vec![1, 2, 1, 2]
    );
    assert!(records
        .iter()
        .all(|r| r.repetitions == 3 && r.reversals == 5));
}
