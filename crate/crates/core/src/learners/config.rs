use crate::error::{invalid, Result};

/// Problem constants that closed-form rates and bounds are expressed in.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BoundConfig {
    /// Comparator radius R.
    pub r: Option<f64>,
    /// Box half-width R_inf.
    pub r_inf: Option<f64>,
    /// L2 gradient bound G.
    pub g: Option<f64>,
    /// Sup-norm gradient bound G_inf.
    pub g_inf: Option<f64>,
    /// Dimension n.
    pub n: Option<usize>,
}

impl BoundConfig {
    pub fn with_r(mut self, r: f64) -> Self {
        self.r = Some(r);
        self
    }

    pub fn with_r_inf(mut self, r_inf: f64) -> Self {
        self.r_inf = Some(r_inf);
        self
    }

    pub fn with_g(mut self, g: f64) -> Self {
        self.g = Some(g);
        self
    }

    pub fn with_g_inf(mut self, g_inf: f64) -> Self {
        self.g_inf = Some(g_inf);
        self
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    pub fn require_r(&self) -> Result<f64> {
        positive("R", self.r)
    }

    pub fn require_r_inf(&self) -> Result<f64> {
        positive("R_inf", self.r_inf)
    }

    pub fn require_g(&self) -> Result<f64> {
        positive("G", self.g)
    }

    pub fn require_g_inf(&self) -> Result<f64> {
        positive("G_inf", self.g_inf)
    }

    pub fn require_n(&self) -> Result<usize> {
        match self.n {
            Some(n) if n >= 1 => Ok(n),
            _ => Err(invalid("bound config is missing n")),
        }
    }
}

fn positive(name: &str, v: Option<f64>) -> Result<f64> {
    match v {
        Some(v) if v > 0.0 && v.is_finite() => Ok(v),
        Some(v) => Err(invalid(format!("{name} must be positive, got {v}"))),
        None => Err(invalid(format!("bound config is missing {name}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_and_invalid_fields() {
        let c = BoundConfig::default().with_r(1.0).with_g(-1.0);
        assert_eq!(c.require_r().unwrap(), 1.0);
        assert!(c.require_g().is_err());
        assert!(c.require_g_inf().is_err());
        assert!(c.require_n().is_err());
    }
}
