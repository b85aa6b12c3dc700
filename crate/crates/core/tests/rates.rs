use fcgram::continuation::Method;
use fcgram::convergence::{median, rate_window, run_study, ConvergenceRow, TestFunction, DEFAULT_N_EVAL};
use num_rational::Rational64;

fn study(f: TestFunction, d: usize, b: Rational64, n_list: &[usize]) -> Vec<ConvergenceRow> {
    run_study(&f, d, b, n_list, Method::Hermite, DEFAULT_N_EVAL).unwrap()
}

fn top_three_median(rows: &[ConvergenceRow]) -> f64 {
    let orders: Vec<f64> = rate_window(rows).into_iter().map(|(_, o)| o).collect();
    let tail = &orders[orders.len().saturating_sub(3)..];
    median(tail).unwrap()
}

#[test]
fn smooth_functions_converge_at_order_d() {
    let ns = [32, 64, 128, 256, 512, 1024, 2048];
    for f in [TestFunction::Expx, TestFunction::Osc54] {
        for d in 3..=5 {
            for b in [Rational64::from_integer(2), Rational64::new(17, 16)] {
                let rows = study(f, d, b, &ns);
                let m = top_three_median(&rows);
                assert!((m - d as f64).abs() <= 0.35, "{f} d={d} b={b}: median order {m}");
            }
        }
    }
}

#[test]
fn oscillatory_order_five_settles() {
    let rows = study(TestFunction::Osc54, 5, Rational64::from_integer(2), &[64, 128, 256, 512, 1024]);
    for r in &rows[2..] {
        let o = r.noc.unwrap();
        assert!((4.4..=5.1).contains(&o), "n={} order {o}", r.n);
    }
}

#[test]
fn exponential_order_three() {
    let rows = study(TestFunction::Expx, 3, Rational64::from_integer(2), &[256, 512, 1024]);
    assert!((rows[2].noc.unwrap() - 3.0).abs() < 0.02);
}

#[test]
fn high_frequency_needs_resolution_first() {
    let rows = study(TestFunction::Cosk(200.0), 5, Rational64::from_integer(2), &[64, 4096]);
    assert!(rows[0].e_n > 1.0, "{}", rows[0].e_n);
    assert!(rows[1].e_n < 1e-7, "{}", rows[1].e_n);
}

#[test]
fn round_off_rows_are_excluded() {
    let rows = study(TestFunction::Expx, 5, Rational64::from_integer(2), &[256, 512, 1024, 2048]);
    let window = rate_window(&rows);
    assert!(window.iter().all(|&(n, _)| n <= 512), "{window:?}");
}
