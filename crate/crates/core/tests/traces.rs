//! Trace file layout.

use std::fs;

use kinefault::harness::{run_scenario, write_traces, Scenario, TRACE_FILES};

fn short_run(dir: &std::path::Path) {
    let mut s = Scenario::preset("example2").unwrap();
    s.trajectory.k_end = 4200;
    let out = run_scenario(&s).unwrap();
    let written = write_traces(&out, dir).unwrap();
    assert_eq!(written.len(), TRACE_FILES.len());
}

fn read(dir: &std::path::Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap()
}

fn is_float(s: &str) -> bool {
    s.parse::<f64>().is_ok_and(|v| format!("{v:.16e}") == s)
}

#[test]
fn headers_and_row_shape() {
    let dir = tempfile::tempdir().unwrap();
    short_run(dir.path());
    let expected_headers = [
        (
            "sensors.csv",
            "k,t,theta,r_x,r_y,r_z,omega_x,omega_y,omega_z,a_x,a_y,a_z".to_string(),
        ),
        (
            "residuals.csv",
            ["l_s", "r_s", "l_d", "r_d", "l_a", "r_a"]
                .iter()
                .flat_map(|p| ["x", "y", "z"].map(|a| format!("{p}_{a}")))
                .fold("k,t".to_string(), |acc, c| acc + "," + &c),
        ),
        (
            "metrics.csv",
            "k,t,e_s_x,e_s_y,e_d_x,e_d_y,e_a_x,e_a_y,c_s_x,c_s_y,c_d_x,c_d_y,c_a_x,c_a_y,\
             flag_s_x,flag_s_y,flag_d_x,flag_d_y,flag_a_x,flag_a_y,e_s_z,e_d_z,e_a_z"
                .to_string(),
        ),
        ("diagnostic.csv", "k,t,verdict".to_string()),
    ];
    for (file, header) in expected_headers {
        let text = read(dir.path(), file);
        assert!(!text.contains('\r'));
        assert!(text.ends_with('\n'));
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), header, "{file}");
        let width = header.split(',').count();
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), 4200, "{file}");
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.split(',').count(), width, "{file} row {i}");
            assert_eq!(row.split(',').next().unwrap(), (i + 1).to_string());
        }
    }
    let d = read(dir.path(), "derivatives.csv");
    let header: Vec<&str> = d.lines().next().unwrap().split(',').collect();
    assert_eq!(header.len(), 2 + 27);
    assert_eq!(&header[2..5], ["r_dot_x", "r_dot_x_eta", "r_dot_x_v2"]);
    assert_eq!(header[28], "big_r_ddot_y_v2");
}

#[test]
fn numeric_fields_use_full_precision() {
    let dir = tempfile::tempdir().unwrap();
    short_run(dir.path());
    for file in ["sensors.csv", "derivatives.csv", "residuals.csv"] {
        for row in read(dir.path(), file).lines().skip(1) {
            for field in row.split(',').skip(1) {
                assert!(is_float(field), "{file}: `{field}`");
            }
        }
    }
}

#[test]
fn undefined_values_are_empty() {
    let dir = tempfile::tempdir().unwrap();
    short_run(dir.path());
    let metrics = read(dir.path(), "metrics.csv");
    let diagnostic = read(dir.path(), "diagnostic.csv");
    for (row, diag) in metrics.lines().skip(1).zip(diagnostic.lines().skip(1)) {
        let f: Vec<&str> = row.split(',').collect();
        let k: usize = f[0].parse().unwrap();
        let verdict = diag.split(',').nth(2).unwrap();
        // window of 251 samples fills at k = 251; cutoffs freeze at 500
        assert_eq!(f[2].is_empty(), k <= 250, "k={k}");
        assert_eq!(f[8].is_empty(), k < 500, "k={k}");
        if k <= 500 {
            assert!(f[14..20].iter().all(|x| x.is_empty()), "k={k}");
            assert!(verdict.is_empty(), "k={k}");
        } else {
            assert!(f[14..20].iter().all(|x| *x == "AC" || *x == "BC"), "k={k}");
            assert!(
                kinefault::detector::Verdict::parse(verdict).is_some(),
                "k={k}: {verdict}"
            );
        }
        for x in f[2..14].iter().chain(&f[20..]) {
            assert!(x.is_empty() || is_float(x));
        }
    }
}

#[test]
fn summary_is_key_value() {
    let dir = tempfile::tempdir().unwrap();
    short_run(dir.path());
    let text = read(dir.path(), "summary.txt");
    let keys: Vec<&str> = text
        .lines()
        .map(|l| l.split(" = ").next().unwrap())
        .collect();
    assert!(text.lines().all(|l| l.contains(" = ")));
    for k in [
        "scenario",
        "seed",
        "fault",
        "steps_completed",
        "outcome",
        "cutoff_d_x",
        "first_ac_a_x",
        "final_e_s_z",
        "settled_verdict",
    ] {
        assert!(keys.contains(&k), "{k}");
    }
    assert!(text.contains("fault = x_accel:drift:5.0000000000000003e-2:4.0000000000000000e1\n"));
}
