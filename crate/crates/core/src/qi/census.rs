//! Enumeration of all `(L, A)` embeddings of `{-n, ..., n}` into `ℤ` with `f(0) = 0`.

use serde::Serialize;

use crate::constant::Constant;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Census {
    pub n: u32,
    #[serde(rename = "L")]
    pub l: Constant,
    #[serde(rename = "A")]
    pub a: Constant,
    /// Maps are counted up to translation, normalized by `f(0) = 0`.
    pub normalization: &'static str,
    pub feasible_count: u64,
    /// Maps with neither `f(-n) < f(0) < f(n)` nor `f(n) < f(0) < f(-n)`.
    pub order_violations: u64,
    /// The least violating map in enumeration order, as `f(-n), ..., f(n)`.
    pub first_violation: Option<Vec<i64>>,
    /// Maps of the form `k ↦ k` or `k ↦ -k`.
    pub signed_isometries: u64,
    pub nodes_explored: u64,
}

struct Enumerator {
    n: usize,
    /// `f` indexed by `k + n`.
    f: Vec<i64>,
    /// Assignment order of the indices: 0, 1, -1, 2, -2, ...
    order: Vec<usize>,
    lo: Vec<i64>,
    hi: Vec<i64>,
    census: Census,
}

impl Enumerator {
    fn ok(&self, pos: usize, value: i64) -> bool {
        let i = self.order[pos];
        self.order[..pos].iter().all(|&j| {
            let d = i.abs_diff(j);
            let dc = (value - self.f[j]).abs();
            dc >= self.lo[d] && dc <= self.hi[d]
        })
    }

    fn run(&mut self, pos: usize) {
        if pos == self.order.len() {
            self.record();
            return;
        }
        let i = self.order[pos];
        // the previously placed neighbor of i bounds the range
        let nb = if i > self.n { i - 1 } else { i + 1 };
        let step = self.hi[1];
        for value in self.f[nb] - step..=self.f[nb] + step {
            if self.ok(pos, value) {
                self.census.nodes_explored += 1;
                self.f[i] = value;
                self.run(pos + 1);
            }
        }
    }

    fn record(&mut self) {
        let (lo, mid, hi) = (self.f[0], self.f[self.n], self.f[2 * self.n]);
        let c = &mut self.census;
        c.feasible_count += 1;
        if !((lo < mid && mid < hi) || (hi < mid && mid < lo)) {
            c.order_violations += 1;
            if c.first_violation.is_none() {
                c.first_violation = Some(self.f.clone());
            }
        }
        let n = self.n as i64;
        let signed = |s: i64| {
            self.f
                .iter()
                .enumerate()
                .all(|(i, v)| *v == s * (i as i64 - n))
        };
        if signed(1) || signed(-1) {
            c.signed_isometries += 1;
        }
    }
}

/// Counts every `(L, A)` embedding `f` of the interval `{-n, ..., n}` into
/// `ℤ` with `f(0) = 0`, and how many break the endpoint order.
///
/// Refuses when `(2(L + A) + 1)^(2n)` exceeds `budget`.
pub fn endpoint_order_census(n: u32, l: Constant, a: Constant, budget: u64) -> Result<Census> {
    if n == 0 {
        return Err(Error::Precondition("census needs n >= 1".into()));
    }
    if l < Constant::ONE {
        return Err(Error::Precondition(format!(
            "L must be at least 1, got {l}"
        )));
    }
    let branching = 2.0 * (l + a).to_f64() + 1.0;
    let estimate = branching.powi(2 * n as i32);
    if estimate > budget as f64 {
        return Err(Error::Budget(format!(
            "census of size about {estimate:.3e} exceeds the budget {budget}; choose a smaller n"
        )));
    }
    let len = 2 * n as usize + 1;
    let mut order = vec![n as usize];
    for k in 1..=n as usize {
        order.push(n as usize + k);
        order.push(n as usize - k);
    }
    let d_max = 2 * n;
    let lo = (0..=d_max)
        .map(|d| Constant::lower_bound(l, a, d))
        .collect();
    let hi = (0..=d_max)
        .map(|d| Constant::upper_bound(l, a, d))
        .collect();
    let mut e = Enumerator {
        n: n as usize,
        f: vec![0; len],
        order,
        lo,
        hi,
        census: Census {
            n,
            l,
            a,
            normalization: "f(0) = 0",
            feasible_count: 0,
            order_violations: 0,
            first_violation: None,
            signed_isometries: 0,
            nodes_explored: 1,
        },
    };
    e.run(1);
    Ok(e.census)
}

#[cfg(test)]
mod tests {
    use super::*;

    const BUDGET: u64 = 100_000_000;

    #[test]
    fn census_examples() {
        let c = endpoint_order_census(4, Constant::ONE, Constant::ONE, BUDGET).unwrap();
        assert_eq!(c.order_violations, 0);
        assert!(c.feasible_count > 0);
        let c = endpoint_order_census(1, Constant::ONE, Constant::ONE, BUDGET).unwrap();
        assert!(c.order_violations >= 1);
        let c = endpoint_order_census(4, Constant::ONE, Constant::ZERO, BUDGET).unwrap();
        assert_eq!(c.order_violations, 0);
        assert_eq!(c.feasible_count, 2);
        assert_eq!(c.signed_isometries, 2);
    }

    #[test]
    fn census_refuses_large_enumerations() {
        assert!(matches!(
            endpoint_order_census(12, Constant::int(2), Constant::int(2), 1_000_000),
            Err(Error::Budget(_))
        ));
    }

    /// Brute force over every function `{-n..n} → [-R, R]` with `f(0) = 0`.
    fn naive(n: i64, l: Constant, a: Constant) -> (u64, u64) {
        let r = Constant::upper_bound(l, a, n as u32);
        let len = (2 * n + 1) as usize;
        let width = (2 * r + 1) as usize;
        let mut f = vec![0i64; len];
        let (mut feasible, mut violations) = (0, 0);
        let total = width.pow(len as u32 - 1);
        for code in 0..total {
            let mut c = code;
            for (i, v) in f.iter_mut().enumerate() {
                if i as i64 == n {
                    *v = 0;
                } else {
                    *v = (c % width) as i64 - r;
                    c /= width;
                }
            }
            let ok = (0..len).all(|i| {
                (0..len).all(|j| {
                    let d = i.abs_diff(j) as u32;
                    let dc = (f[i] - f[j]).abs();
                    dc >= Constant::lower_bound(l, a, d) && dc <= Constant::upper_bound(l, a, d)
                })
            });
            if ok {
                feasible += 1;
                let (lo, mid, hi) = (f[0], f[n as usize], f[len - 1]);
                if !((lo < mid && mid < hi) || (hi < mid && mid < lo)) {
                    violations += 1;
                }
            }
        }
        (feasible, violations)
    }

    #[test]
    fn census_matches_brute_force() {
        for (n, l, a) in [
            (1, Constant::ONE, Constant::ONE),
            (2, Constant::ONE, Constant::ONE),
            (2, Constant::int(2), Constant::ZERO),
            (1, Constant::ratio(3, 2), Constant::ratio(1, 2)),
            (3, Constant::ONE, Constant::ZERO),
        ] {
            let c = endpoint_order_census(n, l, a, BUDGET).unwrap();
            assert_eq!(
                (c.feasible_count, c.order_violations),
                naive(n as i64, l, a),
                "n={n} L={l} A={a}"
            );
        }
    }
}
