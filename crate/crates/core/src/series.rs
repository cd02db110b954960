//! Tabulated simulation output.

use serde::Serialize;

/// Per-run numerical health figures.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    /// Largest `|tr rho - 1|` seen at an output point.
    pub max_trace_deviation: f64,
    /// Largest population in the top two Fock levels of any mode.
    pub max_top_fock_population: f64,
    /// Smallest eigenvalue of the final density matrix, when computed.
    pub min_final_eigenvalue: Option<f64>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

/// Named observable traces on a common time grid.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct TimeSeries {
    /// Sample times (s).
    pub t: Vec<f64>,
    pub names: Vec<String>,
    /// One trace per name, each the same length as `t`.
    pub columns: Vec<Vec<f64>>,
    pub diagnostics: Diagnostics,
}

impl TimeSeries {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let columns = vec![Vec::new(); names.len()];
        Self {
            names,
            columns,
            ..Default::default()
        }
    }

    pub(crate) fn push(&mut self, t: f64, values: &[f64]) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.t.push(t);
        for (col, v) in self.columns.iter_mut().zip(values) {
            col.push(*v);
        }
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.columns[i].as_slice())
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Value of `name` at the last sample.
    pub fn last(&self, name: &str) -> Option<f64> {
        self.column(name).and_then(|c| c.last().copied())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_and_lookup() {
        let mut ts = TimeSeries::new(["a", "b"]);
        ts.push(0.0, &[1.0, 2.0]);
        ts.push(1.0, &[3.0, 4.0]);
        assert_eq!(ts.column("b").unwrap(), &[2.0, 4.0]);
        assert_eq!(ts.last("a"), Some(3.0));
        assert!(ts.column("c").is_none());
        assert_eq!(ts.len(), 2);
    }
}
