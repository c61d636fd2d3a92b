//! Acceptance criteria for the workspace, each a function returning an
//! [`Outcome`]. The `acceptance` test target runs them all and prints one
//! PASS/FAIL line per criterion.

pub mod criteria;

use std::time::{Duration, Instant};

#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "{} [{:>2}] {:<34} {:>8.3}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

/// Run `check`, timing it and failing if it exceeds `budget`.
pub fn timed(id: u32, name: &'static str, budget: Option<Duration>, check: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (mut passed, mut detail) = check();
    let elapsed = start.elapsed();
    if let Some(b) = budget {
        if elapsed > b {
            passed = false;
            detail = format!("{detail}; over the {:.0} s budget", b.as_secs_f64());
        }
    }
    Outcome { id, name, passed, detail, elapsed }
}
