//! Correctly rounded accumulation.
//!
//! QUBO diagonals mix penalty terms of order `λ·k` with kernel row sums of
//! order one. Summing them naively loses the low-order bits that make two
//! algebraically identical matrices agree entry for entry, so the matrix
//! builders accumulate through [`ExactSum`] and round once at the end.

/// Shewchuk-style accumulator of non-overlapping partials. The final
/// [`ExactSum::value`] is the correctly rounded value of the exact sum of
/// everything added.
#[derive(Debug, Default, Clone)]
pub(crate) struct ExactSum {
    partials: Vec<f64>,
}

impl ExactSum {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn add(&mut self, value: f64) {
        let mut x = value;
        let mut kept = 0;
        for idx in 0..self.partials.len() {
            let mut y = self.partials[idx];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                self.partials[kept] = lo;
                kept += 1;
            }
            x = hi;
        }
        self.partials.truncate(kept);
        self.partials.push(x);
    }

    /// Adds the exact product `a·b` (split into head and fma residual).
    pub(crate) fn add_product(&mut self, a: f64, b: f64) {
        let head = a * b;
        let tail = a.mul_add(b, -head);
        self.add(head);
        if tail != 0.0 {
            self.add(tail);
        }
    }

    pub(crate) fn value(&self) -> f64 {
        let p = &self.partials;
        let mut n = p.len();
        if n == 0 {
            return 0.0;
        }
        n -= 1;
        let mut hi = p[n];
        let mut lo = 0.0;
        while n > 0 {
            let x = hi;
            n -= 1;
            let y = p[n];
            hi = x + y;
            let yr = hi - x;
            lo = y - yr;
            if lo != 0.0 {
                break;
            }
        }
        // half-way case: the remaining partials decide the rounding direction
        if n > 0 && ((lo < 0.0 && p[n - 1] < 0.0) || (lo > 0.0 && p[n - 1] > 0.0)) {
            let y = lo * 2.0;
            let x = hi + y;
            let yr = x - hi;
            if y == yr {
                hi = x;
            }
        }
        hi
    }
}

/// Binomial coefficient, saturating at `u128::MAX`.
pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
        let mut acc = ExactSum::new();
        for v in values {
            acc.add(v);
        }
        acc.value()
    }

    #[test]
    fn exact_sum_recovers_cancelled_bits() {
        assert_eq!(exact_sum([1e16, 1.0, -1e16]), 1.0);
        assert_eq!(exact_sum([0.1; 10]), 1.0);
        assert_eq!(exact_sum(std::iter::empty()), 0.0);
    }

    #[test]
    fn product_tail_is_kept() {
        let a = 1.0 + f64::EPSILON;
        let mut acc = ExactSum::new();
        acc.add_product(a, a);
        acc.add(-1.0);
        acc.add(-2.0 * f64::EPSILON);
        assert_eq!(acc.value(), f64::EPSILON * f64::EPSILON);
    }

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(24, 12), 2_704_156);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(1000, 500), u128::MAX);
    }
}
