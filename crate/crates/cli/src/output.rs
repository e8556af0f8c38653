//! CSV emission and the condition-report rendering.
//!
//! CSV rows are comma-separated, line-feed terminated, with a mandatory
//! header; floats are printed with 17 significant digits so they parse back
//! to the exact in-memory values.

use std::fmt::Write as _;

use fomas_core::{Comparison, ConditionReport, SimOutput};

/// 17 significant digits: enough to round-trip any f64.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Per-sample CSV: k, t, states, controls, and the metric columns. The
/// final row carries the control the scheme would issue at t_K.
pub fn run_csv(out: &SimOutput) -> String {
    let n = out.trajectory.states[0].len();
    let big_k = out.trajectory.controls.len();
    let mut text = String::new();
    text.push_str("k,t");
    for i in 1..=n {
        let _ = write!(text, ",x_{i}");
    }
    for i in 1..=n {
        let _ = write!(text, ",u_{i}");
    }
    text.push_str(",r,u_norm_sq,bound_value,state_sum\n");

    for k in 0..=big_k {
        let _ = write!(text, "{k},{}", fmt_float(out.trajectory.sample_times[k]));
        for v in &out.trajectory.states[k] {
            let _ = write!(text, ",{}", fmt_float(*v));
        }
        let control = if k < big_k {
            out.trajectory.controls.get(k)
        } else {
            &out.terminal_control
        };
        for v in control {
            let _ = write!(text, ",{}", fmt_float(*v));
        }
        let m = &out.metrics;
        let _ = write!(
            text,
            ",{},{},{},{}\n",
            fmt_float(m.r[k]),
            fmt_float(m.u_norm_sq[k]),
            fmt_float(m.bound_curve[k]),
            fmt_float(m.state_sum[k])
        );
    }
    text
}

/// Dense inter-sample CSV: t plus the state components.
pub fn dense_csv(out: &SimOutput) -> Option<String> {
    let points = out.trajectory.dense_points.as_ref()?;
    let n = out.trajectory.states[0].len();
    let mut text = String::from("t");
    for i in 1..=n {
        let _ = write!(text, ",x_{i}");
    }
    text.push('\n');
    for (t, x) in points {
        let _ = write!(text, "{}", fmt_float(*t));
        for v in x {
            let _ = write!(text, ",{}", fmt_float(*v));
        }
        text.push('\n');
    }
    Some(text)
}

/// Scheme-comparison CSV over the shared sample instants.
pub fn compare_csv(cmp: &Comparison) -> String {
    let mut text =
        String::from("k,t,r_proposed,r_baseline,u_norm_sq_proposed,u_norm_sq_baseline\n");
    let times = &cmp.proposed.trajectory.sample_times;
    for k in 0..times.len() {
        let _ = writeln!(
            text,
            "{k},{},{},{},{},{}",
            fmt_float(times[k]),
            fmt_float(cmp.proposed.metrics.r[k]),
            fmt_float(cmp.baseline.metrics.r[k]),
            fmt_float(cmp.proposed.metrics.u_norm_sq[k]),
            fmt_float(cmp.baseline.metrics.u_norm_sq[k]),
        );
    }
    text
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Human-readable condition report.
pub fn render_report(report: &ConditionReport) -> String {
    let mut text = String::new();
    let _ = writeln!(text, "eps (integrated gain)   = {}", fmt_float(report.eps));
    let _ = writeln!(
        text,
        "1/delta_max             = {}",
        fmt_float(1.0 / report.delta_max)
    );
    let _ = writeln!(
        text,
        "gain condition          = {} (0 < eps < 1/delta_max, strict)",
        verdict(report.gain_ok)
    );
    let _ = writeln!(
        text,
        "lambda2(L_s)            = {}",
        fmt_float(report.lambda2)
    );
    let _ = writeln!(text, "beta                    = {}", fmt_float(report.beta));
    let _ = writeln!(
        text,
        "bound curve (k <= {})   : min = {}, max = {}",
        report.k_check,
        fmt_float(report.bound_curve_min()),
        fmt_float(report.bound_curve_max())
    );
    let _ = writeln!(
        text,
        "bound condition         = {} (curve {}, tail {})",
        verdict(report.bound_ok),
        verdict(report.bound_curve_ok),
        verdict(report.tail_ok)
    );
    let _ = writeln!(
        text,
        "assumption 1 (graph)    = {} (strongly connected and balanced)",
        verdict(report.assumption1_ok)
    );
    let _ = writeln!(
        text,
        "certified               = {}",
        if report.certified() { "yes" } else { "no" }
    );
    for d in &report.diagnostics {
        let _ = writeln!(text, "note: {d}");
    }
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_through_formatting() {
        for v in [
            2.36,
            -0.13393401692638518,
            0.13474074618394383,
            16.0,
            1.0e-300,
            -3.2,
        ] {
            let parsed: f64 = fmt_float(v).parse().unwrap();
            assert_eq!(parsed.to_bits(), v.to_bits(), "{v}");
        }
    }

    #[test]
    fn run_csv_shape() {
        let mut sc = fomas_core::reference_scenario();
        sc.horizon_steps = 3;
        sc.dense_resolution = 2;
        let out = fomas_core::run(&sc).unwrap();
        let csv = run_csv(&out);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 1 + 4, "header + K+1 rows");
        assert_eq!(
            lines[0],
            "k,t,x_1,x_2,x_3,x_4,x_5,u_1,u_2,u_3,u_4,u_5,r,u_norm_sq,bound_value,state_sum"
        );
        assert!(csv.ends_with('\n'));

        let dense = dense_csv(&out).unwrap();
        assert_eq!(dense.lines().count(), 1 + 1 + 3 * 2, "header + 1 + K*res");
    }
}
