use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Block sizes of the construction: `n = 2m(s1 - ℓ) + m'` with
/// `0 <= m' < 2(s1 - ℓ)` and `s2 = s1 + m'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionPlan {
    pub n: usize,
    pub s1: usize,
    pub s2: usize,
    pub m: usize,
    pub m_prime: usize,
    pub ell: usize,
    pub r: usize,
}

impl ConstructionPlan {
    /// `|V1| = s1(m - 1) + s2`.
    pub fn v1_size(&self) -> usize {
        self.s1 * (self.m - 1) + self.s2
    }

    /// `|V2| = (s1 - 2ℓ)m`.
    pub fn v2_size(&self) -> usize {
        (self.s1 - 2 * self.ell) * self.m
    }

    /// Checks every arithmetic invariant of the plan.
    pub fn check(&self) -> Result<()> {
        let step = 2 * (self.s1 - self.ell.min(self.s1));
        let ok = self.r >= 1
            && self.s1 > 2 * self.ell
            && self.m >= 1
            && self.n == self.m * step + self.m_prime
            && self.m_prime < step
            && self.s2 == self.s1 + self.m_prime
            && self.s1 % self.r == self.ell % self.r
            && self.s2 % self.r == self.ell % self.r
            && self.v1_size() + self.v2_size() == self.n;
        if ok {
            Ok(())
        } else {
            Err(Error::Internal(format!("inconsistent construction plan {self:?}")))
        }
    }
}

pub fn plan_parameters(n: usize, s1: usize, ell: usize, r: usize) -> Result<ConstructionPlan> {
    if r == 0 {
        return Err(Error::param("r must be positive"));
    }
    if n % r != 0 {
        return Err(Error::param(format!("r = {r} does not divide n = {n}")));
    }
    if s1 <= 2 * ell {
        return Err(Error::param(format!("s1 = {s1} must exceed 2ℓ = {}", 2 * ell)));
    }
    if s1 % r != ell % r {
        return Err(Error::param(format!("s1 = {s1} is not congruent to ℓ = {ell} mod r = {r}")));
    }
    let step = 2 * (s1 - ell);
    if n < step {
        return Err(Error::param(format!("n = {n} is smaller than 2(s1 - ℓ) = {step}")));
    }
    let (m, m_prime) = (n / step, n % step);
    let plan = ConstructionPlan { n, s1, s2: s1 + m_prime, m, m_prime, ell, r };
    plan.check()?;
    Ok(plan)
}
