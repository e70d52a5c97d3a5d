use tiltperc::sweep::{read_report, run_sweep, write_report, ReportFormat, SweepConfig};

fn small_config() -> SweepConfig {
    let mut c = SweepConfig::demo();
    c.replicas = 24;
    c
}

fn render(format: ReportFormat) -> String {
    let c = small_config();
    let rows = run_sweep(&c).unwrap();
    let mut buf = Vec::new();
    write_report(&rows, &c.q_grid, format, &mut buf).unwrap();
    String::from_utf8(buf).unwrap()
}

#[test]
fn reruns_are_byte_identical() {
    for f in [ReportFormat::Csv, ReportFormat::Json] {
        assert_eq!(render(f), render(f));
    }
}

#[test]
fn demo_matches_golden_csv() {
    let got = render(ReportFormat::Csv);
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/demo_small.csv");
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(path, &got).unwrap();
    }
    assert_eq!(got, std::fs::read_to_string(path).unwrap());
}

#[test]
fn rows_respect_the_sandwich_and_round_trip() {
    let c = small_config();
    let rows = run_sweep(&c).unwrap();
    assert_eq!(rows.len(), 4);
    for r in &rows {
        assert!(r.sandwich_ok);
        let lower = r.lb_general.max(r.lb_simplex_opt);
        assert!(lower <= r.ub_factorial.min(r.ub_expected_t));
        let (lo, q, hi) = (r.q_hat_lo.unwrap(), r.q_hat.unwrap(), r.q_hat_hi.unwrap());
        assert!(lo <= q && q <= hi);
        assert!(r.runtime_ms.is_none());
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    std::fs::write(&path, render(ReportFormat::Json)).unwrap();
    let back = read_report(&path, ReportFormat::Json).unwrap();
    assert_eq!(back.q_grid, c.q_grid);
    assert_eq!(back.rows, rows);
}
