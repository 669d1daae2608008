use parsum_core::fuzz::FuzzReport;
use parsum_core::BoundReport;
use serde_json::{json, Value};

const UNDEFINED: &str = "undefined";

fn percent(r: Option<f64>) -> String {
    r.map_or_else(|| UNDEFINED.to_string(), |v| format!("{v:.1}%"))
}

/// Values at 4 decimals and relative errors as percentages at 1 decimal.
pub fn bounds_table(r: &BoundReport) -> String {
    let [ad, inf, mu] = r.relative_errors_percent();
    let mut s = String::new();
    s.push_str(&format!("{:<12} {:>12} {:>14}\n", "quantity", "value", "relative error"));
    s.push_str(&format!("{:<12} {:>12.4} {:>14}\n", "||E||", r.error_norm, "-"));
    s.push_str(&format!("{:<12} {:>12.4} {:>14}\n", "AD bound", r.ad_bound, percent(ad)));
    s.push_str(&format!("{:<12} {:>12.4} {:>14}\n", "inf f(t)", r.f_inf_bound, percent(inf)));
    s.push_str(&format!("{:<12} {:>12.4} {:>14}\n", "mu bound", r.mu_bound, percent(mu)));
    s.push_str(&format!("t* = {:.4}, lambda = {:.4}, mu = {:.4}\n", r.f_argmin, r.lambda, r.mu));
    s
}

pub fn bounds_json(r: &BoundReport) -> Value {
    let rel = |v: Option<f64>| v.map_or_else(|| json!(UNDEFINED), |x| json!(x));
    let [ad, inf, mu] = r.relative_errors;
    json!({
        "error_norm": r.error_norm,
        "ad_bound": r.ad_bound,
        "f_inf_bound": r.f_inf_bound,
        "f_argmin": r.f_argmin,
        "mu_bound": r.mu_bound,
        "lambda": r.lambda,
        "mu": r.mu,
        "relative_errors": { "ad_bound": rel(ad), "f_inf_bound": rel(inf), "mu_bound": rel(mu) },
    })
}

pub fn fuzz_text(r: &FuzzReport, seed: u64) -> String {
    let mut s = format!(
        "seed {seed}: {} trials, {} checks each, {} violation(s)\n",
        r.trials,
        r.checks,
        r.violations.len()
    );
    for v in &r.violations {
        s.push_str(&format!(
            "  trial {} (seed {}, n = {}) [{}] {}\n",
            v.trial, v.seed, v.dim, v.check, v.detail
        ));
    }
    s
}

pub fn fuzz_json(r: &FuzzReport, seed: u64) -> Value {
    json!({
        "seed": seed,
        "trials": r.trials,
        "checks": r.checks,
        "violations": r.violations.iter().map(|v| json!({
            "trial": v.trial,
            "seed": v.seed,
            "dim": v.dim,
            "check": v.check,
            "detail": v.detail,
        })).collect::<Vec<_>>(),
        "failing_seeds": r.failing_trials().into_iter().map(|(_, s)| s).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(e: f64) -> BoundReport {
        BoundReport {
            error_norm: e,
            lambda: 1.5,
            mu: 0.5,
            ad_bound: 0.3,
            f_inf_bound: 0.1,
            f_argmin: 1.0,
            mu_bound: 0.1,
            relative_errors: if e > 0.0 { [Some(2.0), Some(0.0), Some(0.0)] } else { [None; 3] },
        }
    }

    #[test]
    fn table_rounds_to_four_and_one_decimals() {
        let t = bounds_table(&report(0.1));
        assert!(t.contains("0.1000"));
        assert!(t.contains("200.0%"));
        assert!(t.contains("0.3000"));
    }

    #[test]
    fn degenerate_errors_are_marked() {
        let r = report(0.0);
        assert_eq!(bounds_table(&r).matches(UNDEFINED).count(), 3);
        let j = bounds_json(&r);
        assert_eq!(j["relative_errors"]["mu_bound"], UNDEFINED);
        assert!(!j.to_string().contains("null"));
    }
}
