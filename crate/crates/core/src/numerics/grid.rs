use crate::error::{Error, Result};

/// Uniform grid of `count` nodes on `[start, stop]`.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformGrid {
    start: f64,
    stop: f64,
    count: usize,
}

impl UniformGrid {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite()) || stop <= start {
            return Err(Error::DegenerateGrid(format!(
                "need finite stop > start, got [{start}, {stop}]"
            )));
        }
        if count < 6 {
            return Err(Error::DegenerateGrid(format!(
                "need at least 6 nodes, got {count}"
            )));
        }
        Ok(UniformGrid { start, stop, count })
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn stop(&self) -> f64 {
        self.stop
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn step(&self) -> f64 {
        (self.stop - self.start) / (self.count - 1) as f64
    }

    /// Node coordinate. Computed as a convex combination so that the endpoints
    /// are exact and a symmetric grid has an exact zero at its midpoint.
    pub fn node(&self, i: usize) -> f64 {
        debug_assert!(i < self.count);
        let n = (self.count - 1) as f64;
        (self.start * (n - i as f64) + self.stop * i as f64) / n
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.node(i)).collect()
    }

    /// Index of the node closest to `x`, if `x` lies on the grid up to a
    /// relative tolerance of the node spacing.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        let h = self.step();
        let raw = (x - self.start) / h;
        let i = raw.round();
        if i < 0.0 || i as usize >= self.count {
            return None;
        }
        let i = i as usize;
        if (self.node(i) - x).abs() <= 1e-9 * h.max(1.0) {
            Some(i)
        } else {
            None
        }
    }
}
