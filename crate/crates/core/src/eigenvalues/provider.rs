use std::sync::Arc;

use crate::error::{Error, Result};

use super::form::FormSpec;
use super::local::{lambda_at_prime, lambda_prime_power};
use super::table::EigenTable;

/// Source of eigenvalues at primes: a closed formula, a table, or both.
///
/// Closed forms reach primes of any size; a table stops at `n_max`, which
/// caps how far sums over polynomial values can go for level-1 forms.
#[derive(Debug, Clone)]
pub struct EigenProvider {
    spec: FormSpec,
    table: Option<Arc<EigenTable>>,
}

impl EigenProvider {
    pub fn closed_form(spec: FormSpec) -> Result<Self> {
        spec.validate()?;
        if !spec.has_closed_form() {
            return Err(Error::Domain(format!(
                "{spec} has no closed form at primes; build a table first"
            )));
        }
        Ok(EigenProvider { spec, table: None })
    }

    pub fn tabulated(table: Arc<EigenTable>) -> Self {
        EigenProvider {
            spec: *table.spec(),
            table: Some(table),
        }
    }

    pub fn spec(&self) -> &FormSpec {
        &self.spec
    }

    pub fn table(&self) -> Option<&EigenTable> {
        self.table.as_deref()
    }

    /// Largest prime that can be evaluated, if bounded.
    pub fn prime_limit(&self) -> Option<u64> {
        if self.spec.has_closed_form() {
            None
        } else {
            self.table.as_ref().map(|t| t.n_max() as u64)
        }
    }

    pub fn is_ramified(&self, p: u64) -> bool {
        self.spec.is_ramified(p)
    }

    pub fn lambda_prime(&self, p: u64) -> Result<f64> {
        if self.spec.has_closed_form() {
            return lambda_at_prime(&self.spec, p);
        }
        match &self.table {
            Some(t) if p as usize <= t.n_max() => Ok(t.lambda(p as usize)),
            _ => Err(Error::UnsupportedPrime { p, at: None }),
        }
    }

    pub fn lambda_prime_power(&self, p: u64, e: u32) -> Result<f64> {
        let lp = self.lambda_prime(p)?;
        lambda_prime_power(&self.spec, p, lp, e)
    }
}
