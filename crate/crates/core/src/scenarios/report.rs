use serde::Serialize;

/// One asserted number: passes iff `|predicted − expected| ≤ tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Quantity {
    pub label: String,
    pub predicted: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// A reported but unasserted number.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Observation {
    pub label: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchInfo {
    pub label: String,
    pub weight: f64,
    pub schmidt_rank: usize,
    pub product: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub name: String,
    pub quantities: Vec<Quantity>,
    pub observations: Vec<Observation>,
    pub branch_data: Option<Vec<BranchInfo>>,
}

impl ScenarioReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), quantities: Vec::new(), observations: Vec::new(), branch_data: None }
    }

    pub fn expect(&mut self, label: impl Into<String>, predicted: f64, expected: f64, tolerance: f64) {
        let pass = (predicted - expected).abs() <= tolerance;
        self.quantities.push(Quantity { label: label.into(), predicted, expected, tolerance, pass });
    }

    /// Asserts `value ≤ bound + tolerance` as the quantity `"{label}_excess"`
    /// (the amount by which `value` exceeds `bound`, expected 0); the raw value
    /// is kept as an observation under `label`.
    pub fn expect_at_most(&mut self, label: &str, value: f64, bound: f64, tolerance: f64) {
        let excess = if value.is_nan() { f64::NAN } else { (value - bound).max(0.0) };
        self.expect(format!("{label}_excess"), excess, 0.0, tolerance);
        self.observe(label, value);
    }

    /// Asserts `value ≥ bound` as the quantity `"{label}_shortfall"`.
    pub fn expect_at_least(&mut self, label: &str, value: f64, bound: f64) {
        let shortfall = if value.is_nan() { f64::NAN } else { (bound - value).max(0.0) };
        self.expect(format!("{label}_shortfall"), shortfall, 0.0, 0.0);
        self.observe(label, value);
    }

    pub fn observe(&mut self, label: impl Into<String>, value: f64) {
        self.observations.push(Observation { label: label.into(), value });
    }

    pub fn passed(&self) -> bool {
        self.quantities.iter().all(|q| q.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Quantity> {
        self.quantities.iter().filter(|q| !q.pass)
    }

    /// Sorts quantities and observations by label.
    pub fn sorted(mut self) -> Self {
        self.quantities.sort_by(|a, b| a.label.cmp(&b.label));
        self.observations.sort_by(|a, b| a.label.cmp(&b.label));
        self
    }

    pub fn quantity(&self, label: &str) -> Option<&Quantity> {
        self.quantities.iter().find(|q| q.label == label)
    }

    pub fn observation(&self, label: &str) -> Option<f64> {
        self.observations.iter().find(|o| o.label == label).map(|o| o.value)
    }
}
