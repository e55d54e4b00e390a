//! Double-double accumulation: an `f64` head plus an `f64` tail that carries
//! the rounding error of the head.

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl DoubleDouble {
    #[inline]
    pub(crate) fn add(self, other: DoubleDouble) -> DoubleDouble {
        let (s, e) = two_sum(self.hi, other.hi);
        let (hi, lo) = quick_two_sum(s, e + self.lo + other.lo);
        DoubleDouble { hi, lo }
    }

    #[inline]
    pub(crate) fn add_f64(self, v: f64) -> DoubleDouble {
        let (s, e) = two_sum(self.hi, v);
        let (hi, lo) = quick_two_sum(s, e + self.lo);
        DoubleDouble { hi, lo }
    }

    #[inline]
    pub(crate) fn sub(self, other: DoubleDouble) -> DoubleDouble {
        self.add(DoubleDouble {
            hi: -other.hi,
            lo: -other.lo,
        })
    }

    #[inline]
    pub(crate) fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// `self / n` rounded once. When the exact quotient is representable
    /// (e.g. the mean of `n` equal samples) it is returned exactly.
    #[inline]
    pub(crate) fn div(self, n: f64) -> f64 {
        let q = self.hi / n;
        let p = q * n;
        let p_err = q.mul_add(n, -p);
        let rem = ((self.hi - p) - p_err) + self.lo;
        q + rem / n
    }
}

/// Sum of a sequence, accumulated in double-double.
pub(crate) fn sum<'a>(values: impl IntoIterator<Item = &'a f64>) -> DoubleDouble {
    values
        .into_iter()
        .fold(DoubleDouble::default(), |acc, &v| acc.add_f64(v))
}
