//! Capital recovery and credit-duration derating.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FinanceError {
    #[error("annuity needs at least one year, got {0}")]
    InvalidYears(u32),
    #[error("policy duration {policy} exceeds book life {life}")]
    PolicyExceedsLife { policy: u32, life: u32 },
    #[error("invalid financial parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FinancialParams {
    pub wacc: f64,
    pub book_life_years: u32,
    /// Default capacity factor for technologies that do not state their own.
    pub capacity_factor: f64,
    /// Capital recovery factor used for levelizing. May be pinned to a rounded value.
    pub crf: f64,
}

impl FinancialParams {
    /// Parameters with the closed-form capital recovery factor.
    pub fn new(wacc: f64, book_life_years: u32, capacity_factor: f64) -> Result<Self, FinanceError> {
        let crf = crf(wacc, book_life_years)?;
        let p = FinancialParams { wacc, book_life_years, capacity_factor, crf };
        p.validate()?;
        Ok(p)
    }

    pub fn with_crf(mut self, crf: f64) -> Self {
        self.crf = crf;
        self
    }

    pub fn validate(&self) -> Result<(), FinanceError> {
        if !(self.wacc > 0.0 && self.wacc < 1.0) {
            return Err(FinanceError::InvalidParameter(format!("wacc {} outside (0, 1)", self.wacc)));
        }
        if self.book_life_years < 1 {
            return Err(FinanceError::InvalidYears(self.book_life_years));
        }
        if !(self.capacity_factor > 0.0 && self.capacity_factor <= 1.0) {
            return Err(FinanceError::InvalidParameter(format!(
                "capacity factor {} outside (0, 1]",
                self.capacity_factor
            )));
        }
        let closed = crf(self.wacc, self.book_life_years)?;
        if (closed - self.crf).abs() > 1e-3 {
            return Err(FinanceError::InvalidParameter(format!(
                "crf {} differs from closed form {closed:.5} by more than 1e-3",
                self.crf
            )));
        }
        Ok(())
    }

    /// Derating factor for a credit lasting `years` over this book life.
    pub fn derating(&self, years: u32) -> Result<f64, FinanceError> {
        if years == 0 {
            return Ok(0.0);
        }
        derating_factor(self.wacc, years, self.book_life_years)
    }
}

impl Default for FinancialParams {
    fn default() -> Self {
        FinancialParams { wacc: 0.1, book_life_years: 15, capacity_factor: 0.85, crf: 0.131 }
    }
}

/// Present value of 1 per year for `years` years at rate `r`.
pub fn annuity_factor(r: f64, years: u32) -> f64 {
    if r == 0.0 {
        return years as f64;
    }
    (1.0 - (1.0 + r).powi(-(years as i32))) / r
}

/// Capital recovery factor `r(1+r)^n / ((1+r)^n - 1)`; `1/n` at zero rate.
pub fn crf(wacc: f64, years: u32) -> Result<f64, FinanceError> {
    if years < 1 {
        return Err(FinanceError::InvalidYears(years));
    }
    if wacc < 0.0 {
        return Err(FinanceError::InvalidParameter(format!("negative wacc {wacc}")));
    }
    if wacc == 0.0 {
        return Ok(1.0 / years as f64);
    }
    let g = (1.0 + wacc).powi(years as i32);
    Ok(wacc * g / (g - 1.0))
}

/// Ratio of the `policy_years` annuity factor to the `book_life` annuity factor.
pub fn derating_factor(wacc: f64, policy_years: u32, book_life: u32) -> Result<f64, FinanceError> {
    if policy_years < 1 {
        return Err(FinanceError::InvalidYears(policy_years));
    }
    if policy_years > book_life {
        return Err(FinanceError::PolicyExceedsLife { policy: policy_years, life: book_life });
    }
    Ok(annuity_factor(wacc, policy_years) / annuity_factor(wacc, book_life))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_annuity(r: f64, n: u32) -> f64 {
        (1..=n).map(|k| 1.0 / (1.0 + r).powi(k as i32)).sum()
    }

    #[test]
    fn crf_examples() {
        assert!((crf(0.1, 15).unwrap() - 0.131474).abs() < 1e-6);
        assert_eq!(crf(0.0, 10).unwrap(), 0.1);
        assert!((crf(0.1, 1).unwrap() - 1.1).abs() < 1e-12);
        assert_eq!(crf(0.1, 0), Err(FinanceError::InvalidYears(0)));
    }

    #[test]
    fn derating_examples() {
        let ten = derating_factor(0.1, 10, 15).unwrap();
        let twelve = derating_factor(0.1, 12, 15).unwrap();
        assert!((ten - brute_annuity(0.1, 10) / brute_annuity(0.1, 15)).abs() < 1e-12);
        assert!((ten - 0.8079).abs() < 1e-4);
        assert!((twelve - 0.896).abs() < 5e-4);
        assert_eq!(derating_factor(0.1, 15, 15).unwrap(), 1.0);
        assert_eq!(
            derating_factor(0.1, 16, 15),
            Err(FinanceError::PolicyExceedsLife { policy: 16, life: 15 })
        );
    }

    #[test]
    fn pinned_crf_within_tolerance() {
        let p = FinancialParams::default();
        p.validate().unwrap();
        assert!(p.with_crf(0.14).validate().is_err());
    }

    #[test]
    fn zero_duration_derates_to_zero() {
        assert_eq!(FinancialParams::default().derating(0).unwrap(), 0.0);
    }
}
