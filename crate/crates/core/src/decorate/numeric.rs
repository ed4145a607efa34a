//! Segment lengths `g_alpha(x) = ceil(ln(x)^alpha)` and the numeric
//! companions built on them.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use serde::Serialize;

use crate::error::{Error, Result};

/// Values of `ln(x)^alpha` this close to an integer are snapped to it
/// before taking the ceiling, so exact powers of `e` land on the integer.
pub const TIE_EPSILON: f64 = 1e-9;

pub fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "alpha must lie in (0, 1], got {alpha}"
        )))
    }
}

/// `ceil(ln(x)^alpha)` for real `x > 0`; zero where `ln(x) <= 0`.
pub fn g_alpha_real(alpha: f64, x: f64) -> Result<u64> {
    check_alpha(alpha)?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Precondition(format!(
            "g_alpha needs a finite x > 0, got {x}"
        )));
    }
    let ln = x.ln();
    if ln <= 0.0 {
        return Ok(0);
    }
    let v = ln.powf(alpha);
    let nearest = v.round();
    let snapped = if (v - nearest).abs() <= TIE_EPSILON {
        nearest
    } else {
        v.ceil()
    };
    Ok(snapped as u64)
}

pub fn g_alpha(alpha: f64, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Precondition("g_alpha is evaluated at n >= 1".into()));
    }
    g_alpha_real(alpha, n as f64)
}

/// `d(x_0, t_m)` in the decorated graph: `m² + g_alpha(m)`.
pub fn tip_distance(alpha: f64, m: u64) -> Result<u64> {
    let g = g_alpha(alpha, m)?;
    m.checked_mul(m)
        .and_then(|sq| sq.checked_add(g))
        .ok_or_else(|| Error::Overflow(format!("tip distance for m = {m}")))
}

/// `x ↦ a·x + b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Affine {
    pub a: f64,
    pub b: f64,
}

impl Affine {
    pub const IDENTITY: Affine = Affine { a: 1.0, b: 0.0 };

    pub fn apply(&self, x: f64) -> f64 {
        self.a * x + self.b
    }
}

/// Polynomial with coefficients in increasing degree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Polynomial(pub Vec<f64>);

impl Polynomial {
    pub fn identity() -> Self {
        Polynomial(vec![0.0, 1.0])
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
}

/// `T(g_alpha(p(x))) / g_beta(x)` at every `x` in `xs`.
pub fn ratio_series(
    alpha: f64,
    beta: f64,
    t: Affine,
    p: &Polynomial,
    xs: &[f64],
) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    check_alpha(beta)?;
    if !(alpha < beta) {
        return Err(Error::Precondition(format!(
            "need alpha < beta, got {alpha} and {beta}"
        )));
    }
    xs.iter()
        .map(|&x| {
            let px = p.eval(x);
            if !(px > 0.0) {
                return Err(Error::Precondition(format!(
                    "p({x}) = {px} is not positive"
                )));
            }
            let den = g_alpha_real(beta, x)?;
            if den == 0 {
                return Err(Error::Precondition(format!(
                    "g_beta({x}) = 0; choose x >= 3"
                )));
            }
            Ok(t.apply(g_alpha_real(alpha, px)? as f64) / den as f64)
        })
        .collect()
}

/// Parameters of the inequality
/// `g_beta(x) > L·g_alpha(L(x + 2x² + A)) + A + (M + D)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThresholdQuery {
    pub alpha: f64,
    pub beta: f64,
    pub l: f64,
    pub a: f64,
    pub m: f64,
    pub d: f64,
    pub check_factor: u64,
    pub ceiling: u64,
}

impl ThresholdQuery {
    pub fn new(alpha: f64, beta: f64, l: f64, a: f64, m: f64, d: f64) -> Self {
        ThresholdQuery {
            alpha,
            beta,
            l,
            a,
            m,
            d,
            check_factor: 10,
            ceiling: 10_000_000,
        }
    }

    fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        check_alpha(self.beta)?;
        if !(self.alpha < self.beta) {
            return Err(Error::Precondition(format!(
                "need alpha < beta, got {} and {}",
                self.alpha, self.beta
            )));
        }
        if !(self.l >= 1.0) || !(self.a >= 0.0) || !(self.m >= 0.0) || !(self.d >= 0.0) {
            return Err(Error::Precondition(
                "need L >= 1, A >= 0, M >= 0, D >= 0".into(),
            ));
        }
        if self.check_factor < 1 {
            return Err(Error::Precondition(
                "check factor must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Both sides of the inequality at `x`.
    pub fn sides(&self, x: u64) -> Result<(f64, f64)> {
        let xf = x as f64;
        let lhs = g_alpha_real(self.beta, xf)? as f64;
        let arg = self.l * (xf + 2.0 * xf * xf + self.a);
        let rhs = self.l * g_alpha_real(self.alpha, arg)? as f64 + self.a + (self.m + self.d);
        Ok((lhs, rhs))
    }

    pub fn holds(&self, x: u64) -> Result<bool> {
        let (lhs, rhs) = self.sides(x)?;
        Ok(lhs > rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub query: ThresholdQuery,
    pub threshold: u64,
    /// The inequality was verified for every integer in this range.
    pub certified_window: (u64, u64),
    /// Largest `x` below the threshold at which the inequality fails.
    pub last_failure: Option<u64>,
}

/// Smallest `N` such that the inequality holds for every integer `x` in
/// `[N, check_factor·N]`.
pub fn find_threshold(q: &ThresholdQuery) -> Result<ThresholdReport> {
    q.validate()?;
    let mut n: u64 = 1;
    let mut x: u64 = 1;
    let mut last_failure = None;
    loop {
        if n > q.ceiling {
            return Err(Error::ThresholdCeiling { ceiling: q.ceiling });
        }
        let end = n
            .checked_mul(q.check_factor)
            .ok_or_else(|| Error::Overflow("threshold window".into()))?;
        if x > end {
            return Ok(ThresholdReport {
                query: *q,
                threshold: n,
                certified_window: (n, end),
                last_failure,
            });
        }
        if q.holds(x)? {
            x += 1;
        } else {
            last_failure = Some(x);
            n = x + 1;
            x = n;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn g_alpha_examples() {
        for alpha in [0.1, 0.25, 0.5, 1.0] {
            assert_eq!(g_alpha(alpha, 1).unwrap(), 0);
        }
        assert_eq!(g_alpha(1.0, 100).unwrap(), 5);
        assert_eq!(g_alpha(0.5, 100).unwrap(), 3);
        assert_eq!(g_alpha(1.0, 2).unwrap(), 1);
        assert!(g_alpha(0.0, 5).is_err());
        assert!(g_alpha(1.5, 5).is_err());
        assert!(g_alpha(0.5, 0).is_err());
    }

    #[test]
    fn exact_powers_of_e_snap() {
        for k in 1..=30 {
            let x = E.powi(k);
            assert_eq!(g_alpha_real(1.0, x).unwrap(), k as u64, "e^{k}");
        }
        assert_eq!(g_alpha_real(0.5, E.powi(16)).unwrap(), 4);
        assert_eq!(g_alpha_real(0.5, E.powi(36)).unwrap(), 6);
    }

    #[test]
    fn g_alpha_at_most_n_and_monotone() {
        for alpha in [0.25, 0.5, 0.75, 1.0] {
            let mut prev = 0;
            for n in 1..5000u64 {
                let g = g_alpha(alpha, n).unwrap();
                assert!(g <= n);
                assert!(g >= prev);
                prev = g;
            }
        }
        for n in 3..2000u64 {
            assert!(g_alpha(0.25, n).unwrap() <= g_alpha(0.5, n).unwrap());
            assert!(g_alpha(0.5, n).unwrap() <= g_alpha(1.0, n).unwrap());
        }
    }

    #[test]
    fn tip_distance_examples() {
        assert_eq!(tip_distance(1.0, 3).unwrap(), 11);
        assert_eq!(tip_distance(0.3, 1).unwrap(), 1);
        assert_eq!(tip_distance(0.5, 10).unwrap(), 102);
    }

    #[test]
    fn tip_precedes_next_attachment() {
        for alpha in [0.25, 0.5, 1.0] {
            for m in 1..2000u64 {
                assert!(tip_distance(alpha, m).unwrap() < (m + 1) * (m + 1));
            }
        }
    }

    #[test]
    fn ratio_examples() {
        let id = Polynomial::identity();
        let xs = [E.powi(4), E.powi(16), E.powi(36)];
        let r = ratio_series(0.5, 1.0, Affine::IDENTITY, &id, &xs).unwrap();
        assert!((r[0] - 0.5).abs() < 1e-12);
        assert!((r[1] - 0.25).abs() < 1e-12);
        assert!((r[2] - 6.0 / 36.0).abs() < 1e-12);
        assert!(r[0] > r[1] && r[1] > r[2]);
        assert!(ratio_series(1.0, 1.0, Affine::IDENTITY, &id, &xs).is_err());
        assert!(ratio_series(0.5, 1.0, Affine::IDENTITY, &id, &[1.0]).is_err());
        assert!(ratio_series(0.5, 1.0, Affine::IDENTITY, &Polynomial(vec![-1.0]), &[5.0]).is_err());
    }

    #[test]
    fn threshold_example() {
        let q = ThresholdQuery::new(0.5, 1.0, 1.0, 0.0, 0.0, 0.0);
        assert!(!q.holds(20).unwrap());
        assert_eq!(q.sides(20).unwrap(), (3.0, 3.0));
        let report = find_threshold(&q).unwrap();
        assert_eq!(report.threshold, 21);
        assert_eq!(report.certified_window, (21, 210));
        assert_eq!(report.last_failure, Some(20));
    }

    /// Brute-force restatement: scan N upward and test each window in full.
    #[test]
    fn threshold_matches_naive_scan() {
        for (l, a, m) in [
            (1.0, 0.0, 0.0),
            (1.0, 1.0, 0.0),
            (1.0, 0.0, 1.0),
            (1.0, 0.0, 2.0),
        ] {
            let q = ThresholdQuery::new(0.5, 1.0, l, a, m, 0.0);
            let fast = find_threshold(&q).unwrap().threshold;
            let naive = (1u64..)
                .find(|&n| (n..=10 * n).all(|x| q.holds(x).unwrap()))
                .unwrap();
            assert_eq!(fast, naive, "L={l} A={a} M={m}");
        }
    }

    #[test]
    fn threshold_rejects_equal_exponents_and_reports_ceiling() {
        assert!(find_threshold(&ThresholdQuery::new(0.5, 0.5, 1.0, 0.0, 0.0, 0.0)).is_err());
        let mut q = ThresholdQuery::new(0.5, 1.0, 3.0, 2.0, 5.0, 5.0);
        q.ceiling = 100;
        assert_eq!(
            find_threshold(&q),
            Err(Error::ThresholdCeiling { ceiling: 100 })
        );
    }
}
