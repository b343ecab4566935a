use std::path::Path;
use std::process::{Command, Output};

fn apes(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_apes"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn with_cube(n: &str) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let out = apes(
        dir.path(),
        &[
            "gen-shape",
            "cube",
            "--n",
            n,
            "--edge-eps",
            "0.05",
            "--out",
            "cube.xyz",
            "--out-mask",
            "mask.txt",
        ],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    dir
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn help_exits_zero_everywhere() {
    let dir = tempfile::tempdir().unwrap();
    for sub in [
        &[][..],
        &["sample"],
        &["score"],
        &["gen-shape"],
        &["bench"],
        &["image-edge"],
    ] {
        let mut args = sub.to_vec();
        args.push("--help");
        let out = apes(dir.path(), &args);
        assert_eq!(code(&out), 0, "{args:?}");
        assert!(!out.stdout.is_empty());
    }
}

#[test]
fn argument_errors_exit_two() {
    let dir = with_cube("256");
    let p = dir.path();
    let cases: &[&[&str]] = &[
        &[
            "sample", "--in", "cube.xyz", "--method", "grid", "--m", "10", "--out", "s.txt",
        ],
        &[
            "sample", "--in", "cube.xyz", "--method", "grid", "--out", "s.txt",
        ],
        &[
            "sample", "--in", "cube.xyz", "--method", "fps", "--voxel", "0.1", "--m", "4", "--out",
            "s.txt",
        ],
        &[
            "sample", "--in", "cube.xyz", "--method", "nope", "--m", "10", "--out", "s.txt",
        ],
        &[
            "sample", "--in", "cube.xyz", "--method", "fps", "--out", "s.txt",
        ],
        &[
            "sample",
            "--in",
            "cube.xyz",
            "--method",
            "fps",
            "--m",
            "10",
            "--out",
            "s.txt",
            "--out-scores",
            "x.csv",
        ],
        &[
            "sample",
            "--in",
            "cube.xyz",
            "--method",
            "fps",
            "--m",
            "10",
            "--start",
            "1",
            "--start-seed",
            "2",
            "--out",
            "s.txt",
        ],
        &[
            "sample", "--in", "cube.xyz", "--method", "rs", "--m", "ten", "--out", "s.txt",
        ],
        &["gen-shape", "cube", "--n", "100", "--out", "c.xyz"],
        &[
            "gen-shape",
            "sphere",
            "--n",
            "100",
            "--edge-eps",
            "0.1",
            "--out",
            "c.xyz",
        ],
        &[
            "image-edge",
            "--in",
            "x.pgm",
            "--patch",
            "3",
            "--out",
            "e.pbm",
        ],
        &["bench", "--methods", "rs", "--out", "b.csv"],
        &[
            "--threads",
            "0",
            "gen-shape",
            "sphere",
            "--n",
            "10",
            "--out",
            "s.xyz",
        ],
        &["frobnicate"],
    ];
    for args in cases {
        let out = apes(p, args);
        assert_eq!(code(&out), 2, "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn runtime_errors_exit_one() {
    let dir = with_cube("64");
    let p = dir.path();
    let cases: &[&[&str]] = &[
        &[
            "sample",
            "--in",
            "missing.xyz",
            "--method",
            "fps",
            "--m",
            "4",
            "--out",
            "s.txt",
        ],
        &[
            "sample", "--in", "cube.xyz", "--method", "fps", "--m", "65", "--out", "s.txt",
        ],
        &[
            "sample",
            "--in",
            "cube.xyz",
            "--method",
            "apes-local",
            "--m",
            "4",
            "--k",
            "65",
            "--out",
            "s.txt",
        ],
        &[
            "sample",
            "--in",
            "cube.xyz",
            "--method",
            "apes-local",
            "--m",
            "4",
            "--weights",
            "nofile.json",
            "--out",
            "s.txt",
        ],
        &[
            "sample",
            "--in",
            "cube.xyz",
            "--method",
            "apes-local",
            "--stages",
            "32,40",
            "--out",
            "s.txt",
        ],
        &[
            "sample",
            "--in",
            "cube.xyz",
            "--method",
            "grid",
            "--voxel=-1",
            "--out",
            "s.txt",
        ],
        &[
            "bench",
            "--in",
            "cube.xyz",
            "--mask",
            "mask.txt",
            "--methods",
            "rs",
            "--out",
            "b.csv",
        ],
    ];
    for args in cases {
        let out = apes(p, args);
        assert_eq!(
            code(&out),
            1,
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
}

#[test]
fn sample_writes_requested_artifacts() {
    let dir = with_cube("1024");
    let p = dir.path();
    let out = apes(
        p,
        &[
            "sample",
            "--in",
            "cube.xyz",
            "--method",
            "apes-local",
            "--m",
            "512",
            "--k",
            "32",
            "--out",
            "sel.txt",
            "--out-cloud",
            "sel.xyz",
            "--out-scores",
            "s.csv",
        ],
    );
    assert_eq!(code(&out), 0);
    let sel: Vec<usize> = read(p, "sel.txt")
        .lines()
        .map(|l| l.parse().unwrap())
        .collect();
    assert_eq!(sel.len(), 512);
    assert_eq!(read(p, "sel.xyz").lines().count(), 512);
    assert_eq!(read(p, "s.csv").lines().count(), 1025);

    let out = apes(
        p,
        &[
            "sample",
            "--in",
            "cube.xyz",
            "--method",
            "apes-local",
            "--stages",
            "512,256",
            "--out",
            "st.txt",
        ],
    );
    assert_eq!(code(&out), 0);
    let staged: Vec<usize> = read(p, "st.txt")
        .lines()
        .map(|l| l.parse().unwrap())
        .collect();
    assert_eq!(staged.len(), 256);
    assert!(staged.iter().all(|i| sel.contains(i)));
}

#[test]
fn score_matches_sample_scores() {
    let dir = with_cube("300");
    let p = dir.path();
    for method in ["apes-local", "apes-global", "idis"] {
        let w = ["--weights", "seeded_gaussian:2:5", "--k", "12"];
        let mut a = vec![
            "score",
            "--in",
            "cube.xyz",
            "--method",
            method,
            "--out",
            "a.csv",
            "--out-ply",
            "a.ply",
        ];
        a.extend(w);
        assert_eq!(code(&apes(p, &a)), 0);
        let mut b = vec![
            "sample",
            "--in",
            "cube.xyz",
            "--method",
            method,
            "--m",
            "30",
            "--out",
            "s.txt",
            "--out-scores",
            "b.csv",
        ];
        b.extend(w);
        assert_eq!(code(&apes(p, &b)), 0);
        assert_eq!(read(p, "a.csv"), read(p, "b.csv"), "{method}");
        let ply = read(p, "a.ply");
        assert!(ply.contains("property uchar red"));
        assert!(ply.contains(" 255 0 0\n") && ply.contains(" 0 0 255\n"));
    }
}

#[test]
fn weights_file_is_accepted() {
    let dir = with_cube("200");
    let p = dir.path();
    let proj = apes_core::ProjectionPair::seeded_gaussian(4, 3, 6).unwrap();
    apes_core::io::write_weights(p.join("w.json"), &proj).unwrap();
    let from_file = apes(
        p,
        &[
            "score",
            "--in",
            "cube.xyz",
            "--method",
            "apes-global",
            "--weights",
            "w.json",
            "--out",
            "f.csv",
        ],
    );
    let literal = apes(
        p,
        &[
            "score",
            "--in",
            "cube.xyz",
            "--method",
            "apes-global",
            "--weights",
            "seeded_gaussian:4:6",
            "--out",
            "l.csv",
        ],
    );
    assert_eq!((code(&from_file), code(&literal)), (0, 0));
    assert_eq!(read(p, "f.csv"), read(p, "l.csv"));
}

#[test]
fn bench_reports_one_row_per_combination() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let out = apes(
        p,
        &[
            "bench",
            "--shapes",
            "cube,cylinder",
            "--n",
            "1024",
            "--edge-eps",
            "0.05",
            "--methods",
            "rs,fps,apes-local,apes-global",
            "--seeds",
            "0,1",
            "--out",
            "b.csv",
        ],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = read(p, "b.csv");
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(apes_core::evalkit::bench::CSV_HEADER));
    assert_eq!(lines.count(), 4 * 5 * 2);
}

#[test]
fn image_edge_marks_the_step() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let img = apes_core::image::step_image(8, 8, 0.0, 1.0).unwrap();
    apes_core::io::write_pgm(p.join("step.pgm"), &img).unwrap();
    let out = apes(
        p,
        &[
            "image-edge",
            "--in",
            "step.pgm",
            "--patch",
            "3",
            "--top",
            "0.25",
            "--out",
            "e.pbm",
        ],
    );
    assert_eq!(code(&out), 0);
    let pbm = read(p, "e.pbm");
    let rows: Vec<&str> = pbm.lines().skip(2).collect();
    assert!(rows.iter().all(|r| *r == "0 0 0 1 1 0 0 0"), "{pbm}");
}
