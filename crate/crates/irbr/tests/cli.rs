use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn irbr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_irbr")).args(args).output().expect("spawn irbr")
}

fn p(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn compress_gray(dir: &TempDir, input: &str, w: &str, h: &str) -> Output {
    irbr(&["compress", "--input", input, "--width", w, "--height", h, "--format", "gray", "--out", &p(dir, "c.irbr")])
}

#[test]
fn flat_raw_roundtrip() {
    let dir = TempDir::new().unwrap();
    let raw = vec![128u8; 64 * 64];
    fs::write(dir.path().join("flat.gray"), &raw).unwrap();
    let o = compress_gray(&dir, &p(&dir, "flat.gray"), "64", "64");
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("drr 0.953125"), "{}", stdout(&o));

    let o = irbr(&["decompress", "--input", &p(&dir, "c.irbr"), "--out", &p(&dir, "back.gray")]);
    assert!(o.status.success(), "{o:?}");
    assert_eq!(fs::read(dir.path().join("back.gray")).unwrap(), raw);
}

#[test]
fn yuv_sequence_roundtrip_all_predictors() {
    let dir = TempDir::new().unwrap();
    let o = irbr(&[
        "gen-corpus", "--kind", "mixed", "--seed", "4", "--width", "40", "--height", "24", "--frames", "3", "--out",
        &p(&dir, "corpus"),
    ]);
    assert!(o.status.success(), "{o:?}");
    let input = dir.path().join("corpus/mixed_s4_40x24.yuv");
    let raw = fs::read(&input).unwrap();
    assert_eq!(raw.len(), 3 * 40 * 24 * 3 / 2);
    for pred in ["edge", "hd", "hvd", "med", "gap"] {
        for bs in ["4", "8", "16"] {
            let o = irbr(&[
                "compress", "--input", input.to_str().unwrap(), "--width", "40", "--height", "24",
                "--predictor", pred, "--block-size", bs, "--out", &p(&dir, "c.irbr"),
            ]);
            assert!(o.status.success(), "{o:?}");
            assert_eq!(stdout(&o).lines().count(), 3);
            let o = irbr(&["decompress", "--input", &p(&dir, "c.irbr"), "--out", &p(&dir, "back.yuv")]);
            assert!(o.status.success(), "{o:?}");
            assert_eq!(fs::read(dir.path().join("back.yuv")).unwrap(), raw, "{pred} {bs}");
        }
    }
}

#[test]
fn pgm_in_pgm_out() {
    let dir = TempDir::new().unwrap();
    let mut pgm = b"P5\n# test\n5 3\n255\n".to_vec();
    pgm.extend((0..15u8).map(|i| i * 17));
    fs::write(dir.path().join("img.pgm"), &pgm).unwrap();
    let o = irbr(&["compress", "--input", &p(&dir, "img.pgm"), "--out", &p(&dir, "c.irbr")]);
    assert!(o.status.success(), "{o:?}");
    let o = irbr(&["decompress", "--input", &p(&dir, "c.irbr"), "--out", &p(&dir, "back.pgm")]);
    assert!(o.status.success(), "{o:?}");
    let back = fs::read(dir.path().join("back.pgm")).unwrap();
    assert!(back.starts_with(b"P5"));
    assert_eq!(&back[back.len() - 15..], &pgm[pgm.len() - 15..]);
}

#[test]
fn size_mismatch_is_usage_error() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("f.gray"), vec![0u8; 64 * 64]).unwrap();
    let o = compress_gray(&dir, &p(&dir, "f.gray"), "63", "64");
    assert_eq!(o.status.code(), Some(2));
    assert!(!dir.path().join("c.irbr").exists());
    let o = irbr(&["compress", "--input", &p(&dir, "missing.yuv"), "--width", "8", "--height", "8", "--out", &p(&dir, "x")]);
    assert_eq!(o.status.code(), Some(2));
    let o = irbr(&["compress", "--input", &p(&dir, "f.gray"), "--block-size", "5", "--out", &p(&dir, "x")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn damaged_container_exit_code() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("f.gray"), vec![7u8; 32 * 16]).unwrap();
    assert!(compress_gray(&dir, &p(&dir, "f.gray"), "32", "16").status.success());
    let good = fs::read(dir.path().join("c.irbr")).unwrap();

    let check = |bytes: &[u8]| {
        fs::write(dir.path().join("bad.irbr"), bytes).unwrap();
        irbr(&["decompress", "--input", &p(&dir, "bad.irbr"), "--out", &p(&dir, "out.gray")]).status.code()
    };
    let mut bad = good.clone();
    bad[1] = b'X';
    assert_eq!(check(&bad), Some(3));
    assert_eq!(check(&good[..good.len() - 5]), Some(3));
    assert_eq!(check(&good[..3]), Some(3));
    let mut bad = good.clone();
    bad[4] = 9;
    assert_eq!(check(&bad), Some(3));
    assert_eq!(check(&good), Some(0));
}

#[test]
fn gen_corpus_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let gen = |sub: &str| {
        let o = irbr(&[
            "gen-corpus", "--kind", "text_like", "--seed", "9", "--width", "32", "--height", "32", "--frames", "2",
            "--out", &p(&dir, sub),
        ]);
        assert!(o.status.success(), "{o:?}");
        fs::read(dir.path().join(sub).join("text_like_s9_32x32.yuv")).unwrap()
    };
    assert_eq!(gen("a"), gen("b"));
    assert!(Path::new(&p(&dir, "a/corpus.json")).exists());
}

#[test]
fn bench_csv_and_json() {
    let dir = TempDir::new().unwrap();
    let corpus = p(&dir, "corpus");
    for kind in ["flat", "text_like"] {
        let o = irbr(&[
            "gen-corpus", "--kind", kind, "--width", "32", "--height", "32", "--format", "gray", "--out", &corpus,
        ]);
        assert!(o.status.success(), "{o:?}");
    }
    let o = irbr(&["bench", "--corpus", &corpus, "--predictors", "hd,edge", "--block-sizes", "16,4,8"]);
    assert!(o.status.success(), "{o:?}");
    let text = stdout(&o);
    let (rows, averages) = text.split_once("\n\n").unwrap();
    let rows: Vec<&str> = rows.lines().collect();
    assert!(rows[0].starts_with("sequence_id,plane_set,predictor,block_size"));
    assert_eq!(rows.len(), 1 + 2 * 6);
    let flat: Vec<(&str, &str)> = rows[1..7]
        .iter()
        .map(|r| {
            let f: Vec<&str> = r.split(',').collect();
            (f[2], f[3])
        })
        .collect();
    assert_eq!(flat, [("edge", "4"), ("edge", "8"), ("edge", "16"), ("hd", "4"), ("hd", "8"), ("hd", "16")]);
    assert!(averages.starts_with("class,plane_set"));

    let o = irbr(&["bench", "--corpus", &corpus, "--report", "json", "--accounting", "bits", "--out", &p(&dir, "r.json")]);
    assert!(o.status.success(), "{o:?}");
    let v: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 2 * 5 * 3);
    assert!(v["rows"].as_array().unwrap().iter().all(|r| r["accounting"] == "bits"));
}

#[test]
fn bench_on_empty_corpus_fails() {
    let dir = TempDir::new().unwrap();
    let o = irbr(&["bench", "--corpus", &p(&dir, "")]);
    assert_eq!(o.status.code(), Some(2));
}
