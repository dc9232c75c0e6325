use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// An ordered, finite, non-empty sequence of real-valued measurements.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
    source: String,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySeries);
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput { index });
        }
        Ok(Self {
            values,
            source: source.into(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Provenance string, typically `path` or `path#column`.
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rejects_empty_and_non_finite() {
        assert_eq!(TimeSeries::new(vec![], "x"), Err(Error::EmptySeries));
        assert_eq!(
            TimeSeries::new(vec![1.0, f64::NAN], "x"),
            Err(Error::NonFiniteInput { index: 1 })
        );
        assert_eq!(
            TimeSeries::new(vec![f64::INFINITY], "x"),
            Err(Error::NonFiniteInput { index: 0 })
        );
    }
}
