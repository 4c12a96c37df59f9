use crate::error::NumericsError;
use serde::{Deserialize, Serialize};

/// Default inner offset from the origin where radial integrations start.
pub const DEFAULT_R_EPS: f64 = 1e-6;

/// Strictly increasing, positive radial nodes starting at `r_eps`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    nodes: Vec<f64>,
}

impl RadialGrid {
    pub fn new(nodes: Vec<f64>) -> Result<Self, NumericsError> {
        if nodes.is_empty() {
            return Err(NumericsError::InvalidInput("empty radial grid".into()));
        }
        if nodes[0] <= 0.0 || !nodes[0].is_finite() {
            return Err(NumericsError::InvalidInput(format!(
                "first node must be positive, got {}",
                nodes[0]
            )));
        }
        if nodes
            .windows(2)
            .any(|w| !(w[1] > w[0]) || !w[1].is_finite())
        {
            return Err(NumericsError::InvalidInput(
                "grid nodes not strictly increasing".into(),
            ));
        }
        Ok(Self { nodes })
    }

    /// `r_eps` followed by `h, 2h, ...` up to and including the first node `>= r_max`.
    pub fn uniform(r_eps: f64, h: f64, r_max: f64) -> Result<Self, NumericsError> {
        if !(h > 0.0) || !(r_max > r_eps) {
            return Err(NumericsError::InvalidInput(format!(
                "bad uniform grid: r_eps={r_eps}, h={h}, r_max={r_max}"
            )));
        }
        let mut nodes = vec![r_eps];
        let mut i = 1usize;
        loop {
            let r = i as f64 * h;
            if r > r_eps * (1.0 + 1e-12) {
                nodes.push(r);
            }
            if r >= r_max {
                break;
            }
            i += 1;
        }
        Self::new(nodes)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn r_eps(&self) -> f64 {
        self.nodes[0]
    }

    pub fn r_max(&self) -> f64 {
        *self.nodes.last().unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_grid_starts_at_offset() {
        let g = RadialGrid::uniform(1e-6, 0.1, 1.0).unwrap();
        assert_eq!(g.r_eps(), 1e-6);
        assert!((g.nodes()[1] - 0.1).abs() < 1e-15);
        assert!(g.r_max() >= 1.0);
        assert!(g.nodes().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn rejects_non_monotone() {
        assert!(RadialGrid::new(vec![0.1, 0.3, 0.2]).is_err());
        assert!(RadialGrid::new(vec![0.0, 0.1]).is_err());
        assert!(RadialGrid::new(vec![]).is_err());
    }
}
