use serde::Serialize;

/// Most violations a report keeps verbatim; the rest are only counted.
pub const MAX_RECORDED: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub input: String,
    pub expected: String,
    pub actual: String,
}

/// Outcome of an exhaustive (or sampled) property check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub cases: u64,
    pub violations: u64,
    pub recorded: Vec<Violation>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        CheckReport {
            name: name.into(),
            cases: 0,
            violations: 0,
            recorded: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn first_violation(&self) -> Option<&Violation> {
        self.recorded.first()
    }

    /// Counts one case; records a violation when `ok` is false.
    pub fn check(&mut self, ok: bool, violation: impl FnOnce() -> Violation) {
        self.cases += 1;
        if !ok {
            self.fail(violation());
        }
    }

    pub fn fail(&mut self, v: Violation) {
        self.violations += 1;
        if self.recorded.len() < MAX_RECORDED {
            self.recorded.push(v);
        }
    }

    /// Conjunction of two partial reports over disjoint case sets.
    pub fn merge(mut self, other: CheckReport) -> CheckReport {
        self.cases += other.cases;
        self.violations += other.violations;
        for v in other.recorded {
            if self.recorded.len() >= MAX_RECORDED {
                break;
            }
            self.recorded.push(v);
        }
        self
    }
}

pub(crate) fn violation(input: impl ToString, expected: impl ToString, actual: impl ToString) -> Violation {
    Violation {
        input: input.to_string(),
        expected: expected.to_string(),
        actual: actual.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_is_conjunction() {
        let mut a = CheckReport::new("a");
        a.check(true, || unreachable!());
        let mut b = CheckReport::new("a");
        b.check(false, || violation(3, "x", "y"));
        let m = a.clone().merge(b);
        assert_eq!(m.cases, 2);
        assert!(!m.passed());
        assert_eq!(m.first_violation().unwrap().input, "3");
        assert!(a.passed());
    }

    #[test]
    fn recording_is_capped() {
        let mut r = CheckReport::new("cap");
        for n in 0..100 {
            r.check(false, || violation(n, 0, 1));
        }
        assert_eq!(r.violations, 100);
        assert_eq!(r.recorded.len(), MAX_RECORDED);
    }
}
