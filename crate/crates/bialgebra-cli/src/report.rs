use std::time::Duration;

use bialgebra::verify::Case;
use serde::Serialize;
use serde_json::value::RawValue;

/// A number written with 17 significant digits, or `null` when not finite.
fn number(x: f64) -> Box<RawValue> {
    let text = if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    };
    RawValue::from_string(text).expect("formatted float is valid JSON")
}

#[derive(Serialize)]
struct CaseJson {
    id: String,
    status: &'static str,
    max_defect: Box<RawValue>,
    tolerance: Box<RawValue>,
}

#[derive(Serialize)]
pub struct RunReport {
    suite: String,
    seed: u64,
    passed: bool,
    cases: Vec<CaseJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_seconds: Option<Box<RawValue>>,
}

impl RunReport {
    pub fn new(
        suite: impl Into<String>,
        seed: u64,
        mut cases: Vec<Case>,
        wall_time: Option<Duration>,
    ) -> Self {
        cases.sort_by(|a, b| a.id.cmp(&b.id));
        let passed = cases.iter().all(Case::passed);
        RunReport {
            suite: suite.into(),
            seed,
            passed,
            cases: cases
                .into_iter()
                .map(|c| CaseJson {
                    status: if c.passed() { "pass" } else { "fail" },
                    max_defect: number(c.max_defect),
                    tolerance: number(c.tolerance),
                    id: c.id,
                })
                .collect(),
            wall_time_seconds: wall_time.map(|t| number(t.as_secs_f64())),
        }
    }

    pub fn passed(&self) -> bool {
        self.passed
    }

    pub fn summary(&self) -> String {
        let ok = self.cases.iter().filter(|c| c.status == "pass").count();
        let mut s = format!(
            "{}: {ok}/{} cases pass (seed {})",
            self.suite,
            self.cases.len(),
            self.seed
        );
        for c in self.cases.iter().filter(|c| c.status == "fail") {
            s.push_str(&format!(
                "\n  FAIL {} max_defect {} tolerance {}",
                c.id, c.max_defect, c.tolerance
            ));
        }
        s
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
