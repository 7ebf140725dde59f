//! Hand-built JSON reports with all floats at 17 significant digits, so a
//! fixed configuration reproduces identical bytes.

use phaseret::hadamard::MagnitudeProfile;
use phaseret::verify::{AgreementReport, Verdict};

/// 17 significant digits; valid as a JSON number.
pub fn f17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        // JSON has no inf/nan; report as null
        "null".to_string()
    }
}

pub fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Agree => "agree",
        Verdict::Disagree => "disagree",
        Verdict::Inconclusive => "inconclusive",
    }
}

pub fn agreement_json(label: &str, rep: &AgreementReport) -> String {
    format!(
        "{{\"line\":{label:?},\"verdict\":\"{}\",\"max_deviation\":{},\"argmax_x\":{},\"tolerance\":{},\"combined_tolerance\":{}}}",
        verdict_str(rep.verdict),
        f17(rep.max_deviation),
        f17(rep.argmax_x),
        f17(rep.tolerance),
        f17(rep.combined_tolerance),
    )
}

pub fn profile_json(label: &str, profile: &MagnitudeProfile) -> String {
    let samples: Vec<String> = profile
        .samples
        .iter()
        .map(|s| {
            format!(
                "{{\"x\":{},\"magnitude\":{},\"tail_error\":{}}}",
                f17(s.x),
                f17(s.magnitude),
                f17(s.tail_error)
            )
        })
        .collect();
    format!(
        "{{\"line\":{label:?},\"samples\":[{}]}}",
        samples.join(",")
    )
}

pub fn join_object(fields: &[(&str, String)]) -> String {
    let body: Vec<String> = fields
        .iter()
        .map(|(k, v)| format!("{k:?}:{v}"))
        .collect();
    format!("{{{}}}", body.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(f17(1.0), "1.0000000000000000e0");
        assert_eq!(f17(std::f64::consts::PI), "3.1415926535897931e0");
        assert_eq!(f17(f64::NAN), "null");
    }

    #[test]
    fn object_shape() {
        let s = join_object(&[("a", "1".into()), ("b", "\"x\"".into())]);
        assert_eq!(s, "{\"a\":1,\"b\":\"x\"}");
    }
}
