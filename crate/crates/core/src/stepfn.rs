//! Eventually periodic-affine functions `Z -> Z ∪ {±∞}`.
//!
//! A [`StepFn`] stores an explicit window of values together with a periodic
//! tail descriptor on each side. On the left, `f(n) = f(n + T) - S` for every
//! `n` before the window; on the right, `f(n) = f(n - T) + S` for every `n`
//! after it. Perversities, thresholds and staircase boundaries are all backed
//! by this type, so that equality, comparison and the generalized inverses
//! used by the upper-set bijections are exactly decidable.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg};

use crate::error::{Error, Result};

/// An integer extended by `-∞` and `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtInt {
    NegInf,
    Fin(i64),
    PosInf,
}

impl ExtInt {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtInt::Fin(_))
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            ExtInt::Fin(v) => Some(v),
            _ => None,
        }
    }
}

impl From<i64> for ExtInt {
    fn from(v: i64) -> Self {
        ExtInt::Fin(v)
    }
}

impl Add<i64> for ExtInt {
    type Output = ExtInt;

    fn add(self, rhs: i64) -> ExtInt {
        match self {
            ExtInt::Fin(v) => ExtInt::Fin(v + rhs),
            other => other,
        }
    }
}

impl Neg for ExtInt {
    type Output = ExtInt;

    fn neg(self) -> ExtInt {
        match self {
            ExtInt::NegInf => ExtInt::PosInf,
            ExtInt::Fin(v) => ExtInt::Fin(-v),
            ExtInt::PosInf => ExtInt::NegInf,
        }
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::NegInf => write!(f, "-inf"),
            ExtInt::Fin(v) => write!(f, "{v}"),
            ExtInt::PosInf => write!(f, "+inf"),
        }
    }
}

/// Periodic tail: period `T >= 1` and shift `S` gained per period when
/// moving away from the explicit window to the right (lost to the left).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Tail {
    pub period: i64,
    pub shift: i64,
}

impl Tail {
    pub const CONSTANT: Tail = Tail { period: 1, shift: 0 };

    pub fn new(period: i64, shift: i64) -> Self {
        Tail { period, shift }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StepFn {
    anchor: i64,
    values: Vec<ExtInt>,
    left: Tail,
    right: Tail,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

fn div_ceil(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    -((-a).div_euclid(b))
}

impl StepFn {
    /// Builds and canonicalizes a step function.
    pub fn new(anchor: i64, values: Vec<ExtInt>, left: Tail, right: Tail) -> Result<Self> {
        if left.period < 1 || right.period < 1 {
            return Err(Error::domain("tail periods must be at least 1"));
        }
        if (values.len() as i64) < left.period.max(right.period) {
            return Err(Error::domain(format!(
                "explicit window has {} values but tails need at least {}",
                values.len(),
                left.period.max(right.period)
            )));
        }
        Ok(StepFn { anchor, values, left, right }.canonical())
    }

    pub fn from_finite(anchor: i64, values: &[i64], left: Tail, right: Tail) -> Result<Self> {
        Self::new(anchor, values.iter().map(|&v| ExtInt::Fin(v)).collect(), left, right)
    }

    pub fn constant(value: ExtInt) -> Self {
        StepFn { anchor: 0, values: vec![value], left: Tail::CONSTANT, right: Tail::CONSTANT }
    }

    /// `n ↦ slope_num * n / slope_den`-like affine germs are built from a
    /// window; this helper evaluates `f` on `[lo, hi]` and attaches tails.
    pub fn from_window<F>(lo: i64, hi: i64, left: Tail, right: Tail, f: F) -> Result<Self>
    where
        F: Fn(i64) -> ExtInt,
    {
        let values = (lo..=hi).map(f).collect();
        Self::new(lo, values, left, right)
    }

    pub fn anchor(&self) -> i64 {
        self.anchor
    }

    /// Last index of the explicit window.
    pub fn end(&self) -> i64 {
        self.anchor + self.values.len() as i64 - 1
    }

    pub fn values(&self) -> &[ExtInt] {
        &self.values
    }

    pub fn left_tail(&self) -> Tail {
        self.left
    }

    pub fn right_tail(&self) -> Tail {
        self.right
    }

    pub fn eval(&self, n: i64) -> ExtInt {
        if n < self.anchor {
            let k = div_ceil(self.anchor - n, self.left.period);
            let m = n + k * self.left.period;
            self.values[(m - self.anchor) as usize] + (-k * self.left.shift)
        } else if n > self.end() {
            let k = div_ceil(n - self.end(), self.right.period);
            let m = n - k * self.right.period;
            self.values[(m - self.anchor) as usize] + k * self.right.shift
        } else {
            self.values[(n - self.anchor) as usize]
        }
    }

    /// A window `[lo, hi]` outside of which both tails are in their periodic
    /// regime for at least one full period.
    pub fn support_window(&self) -> (i64, i64) {
        (self.anchor - self.left.period, self.end() + self.right.period)
    }

    fn left_relation_holds(&self, n: i64, tail: Tail) -> bool {
        self.eval(n) == self.eval(n + tail.period) + (-tail.shift)
    }

    fn right_relation_holds(&self, n: i64, tail: Tail) -> bool {
        self.eval(n) == self.eval(n - tail.period) + tail.shift
    }

    /// Germ at `-∞` (resp. `+∞`) consists of infinite values only.
    fn left_germ_infinite(&self) -> bool {
        (0..self.left.period).all(|i| !self.eval(self.anchor - 1 - i).is_finite())
    }

    fn right_germ_infinite(&self) -> bool {
        (0..self.right.period).all(|i| !self.eval(self.end() + 1 + i).is_finite())
    }

    fn minimal_left_tail(&self) -> Tail {
        let t = self.left;
        if self.left_germ_infinite() {
            // an infinite germ is periodic with any shift
            let v = self.eval(self.anchor - 1);
            if (0..t.period).all(|i| self.eval(self.anchor - 1 - i) == v) {
                return Tail::CONSTANT;
            }
        }
        for d in 1..t.period {
            if t.period % d != 0 || (t.shift * d) % t.period != 0 {
                continue;
            }
            let cand = Tail::new(d, t.shift * d / t.period);
            if (self.anchor - 3 * t.period..self.anchor).all(|n| self.left_relation_holds(n, cand)) {
                return cand;
            }
        }
        t
    }

    fn minimal_right_tail(&self) -> Tail {
        let t = self.right;
        if self.right_germ_infinite() {
            let v = self.eval(self.end() + 1);
            if (0..t.period).all(|i| self.eval(self.end() + 1 + i) == v) {
                return Tail::CONSTANT;
            }
        }
        for d in 1..t.period {
            if t.period % d != 0 || (t.shift * d) % t.period != 0 {
                continue;
            }
            let cand = Tail::new(d, t.shift * d / t.period);
            let end = self.end();
            if (end + 1..=end + 3 * t.period).all(|n| self.right_relation_holds(n, cand)) {
                return cand;
            }
        }
        t
    }

    /// Canonical representation: minimal tail periods, then the shortest
    /// explicit window, then the rightmost admissible anchor. Two step
    /// functions are equal as functions iff their canonical forms coincide.
    fn canonical(self) -> Self {
        let left = self.minimal_left_tail();
        let right = self.minimal_right_tail();
        let min_len = left.period.max(right.period);
        let span = left.period + right.period + lcm(left.period, right.period);

        // First n at which the left relation fails; it holds before the window.
        let first_left_failure =
            (self.anchor..=self.end() + span).find(|&n| !self.left_relation_holds(n, left));
        // Last n at which the right relation fails; it holds after the window.
        let last_right_failure = (self.anchor - span..=self.end())
            .rev()
            .find(|&n| !self.right_relation_holds(n, right));

        let (lo, hi) = match (first_left_failure, last_right_failure) {
            (Some(a), Some(b)) if b - a + 1 >= min_len => (a, b),
            (Some(a), _) => (a, a + min_len - 1),
            (None, Some(b)) => (b - min_len + 1, b),
            (None, None) => (0, min_len - 1),
        };
        let values = (lo..=hi).map(|n| self.eval(n)).collect();
        StepFn { anchor: lo, values, left, right }
    }

    /// `n ↦ f(sign * n + offset)` with `sign = ±1`.
    pub fn reindex(&self, sign: i64, offset: i64) -> Self {
        debug_assert!(sign == 1 || sign == -1);
        if sign == 1 {
            StepFn { anchor: self.anchor - offset, ..self.clone() }.canonical()
        } else {
            let mut values = self.values.clone();
            values.reverse();
            StepFn {
                anchor: offset - self.end(),
                values,
                left: Tail::new(self.right.period, -self.right.shift),
                right: Tail::new(self.left.period, -self.left.shift),
            }
            .canonical()
        }
    }

    pub fn negate(&self) -> Self {
        StepFn {
            anchor: self.anchor,
            values: self.values.iter().map(|&v| -v).collect(),
            left: Tail::new(self.left.period, -self.left.shift),
            right: Tail::new(self.right.period, -self.right.shift),
        }
        .canonical()
    }

    /// `n ↦ f(n) + slope * n + constant`.
    pub fn add_affine(&self, slope: i64, constant: i64) -> Self {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| v + (slope * (self.anchor + i as i64) + constant))
            .collect();
        StepFn {
            anchor: self.anchor,
            values,
            left: Tail::new(self.left.period, self.left.shift + slope * self.left.period),
            right: Tail::new(self.right.period, self.right.shift + slope * self.right.period),
        }
        .canonical()
    }

    /// First `n` (within the decisive window) with `f(n) > f(n + 1)`.
    pub fn nondecreasing_violation(&self) -> Option<i64> {
        let (lo, hi) = self.support_window();
        (lo - 1..=hi).find(|&n| self.eval(n) > self.eval(n + 1))
    }

    pub fn nonincreasing_violation(&self) -> Option<i64> {
        let (lo, hi) = self.support_window();
        (lo - 1..=hi).find(|&n| self.eval(n) < self.eval(n + 1))
    }

    /// Pointwise `self <= other` on all of `Z`, decided exactly.
    pub fn le(&self, other: &StepFn) -> bool {
        let lp = lcm(self.left.period, other.left.period);
        let rp = lcm(self.right.period, other.right.period);
        let left_edge = self.anchor.min(other.anchor);
        let right_edge = self.end().max(other.end());
        // Per period of length lp, f gains (lp / T) * S on the left germ.
        let drift_left = self.left.shift * (lp / self.left.period) - other.left.shift * (lp / other.left.period);
        let drift_right =
            self.right.shift * (rp / self.right.period) - other.right.shift * (rp / other.right.period);
        for n in left_edge - lp + 1..=right_edge + rp - 1 {
            let (a, b) = (self.eval(n), other.eval(n));
            if a > b {
                return false;
            }
            let both_finite = a.is_finite() && b.is_finite();
            // self - other grows without bound as n -> -∞ when drift_left < 0
            if n <= left_edge && both_finite && drift_left < 0 {
                return false;
            }
            if n >= right_edge && both_finite && drift_right > 0 {
                return false;
            }
        }
        true
    }

    /// Pointwise partial order.
    pub fn partial_cmp_pointwise(&self, other: &StepFn) -> Option<Ordering> {
        match (self.le(other), other.le(self)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }

    /// For nondecreasing `f`, the function `a ↦ sup { n : f(n) <= a }`
    /// (with `sup ∅ = -∞` and `+∞` when unbounded).
    pub fn sup_le(&self) -> Result<StepFn> {
        if let Some(n) = self.nondecreasing_violation() {
            return Err(Error::domain(format!("sup_le needs a nondecreasing function (fails at {n})")));
        }
        let anchor = self.anchor;
        let end = self.end();
        let l = self.left;
        let r = self.right;
        let left_germ = self.eval(anchor - 1);
        let right_germ = self.eval(end + 1);
        let finite_values: Vec<i64> = {
            let (lo, hi) = self.support_window();
            (lo..=hi).filter_map(|n| self.eval(n).finite()).collect()
        };
        let fmin = finite_values.iter().copied().min().unwrap_or(0);
        let fmax = finite_values.iter().copied().max().unwrap_or(0);

        // Tails of the inverse and the thresholds beyond which they hold.
        let (new_right, a_hi) = match right_germ {
            ExtInt::NegInf => return Ok(StepFn::constant(ExtInt::PosInf)),
            ExtInt::PosInf => (Tail::CONSTANT, fmax + 1),
            ExtInt::Fin(_) if r.shift == 0 => (Tail::CONSTANT, fmax + 1),
            ExtInt::Fin(_) => {
                let f_end = self.eval(end).finite().unwrap_or(fmax);
                (Tail::new(r.shift, r.period), f_end.max(fmax) + r.shift + 1)
            }
        };
        let (new_left, a_lo) = match left_germ {
            ExtInt::PosInf => return Ok(StepFn::constant(ExtInt::NegInf)),
            ExtInt::NegInf => (Tail::CONSTANT, fmin - 1),
            ExtInt::Fin(_) if l.shift == 0 => (Tail::CONSTANT, fmin - 1),
            ExtInt::Fin(_) => {
                let f_anchor = self.eval(anchor).finite().unwrap_or(fmin);
                (Tail::new(l.shift, l.period), f_anchor.min(fmin) - l.shift - 1)
            }
        };
        let min_len = new_left.period.max(new_right.period);
        let a_hi = a_hi.max(a_lo + min_len - 1);
        StepFn::from_window(a_lo, a_hi, new_left, new_right, |a| self.sup_le_at(a))
    }

    /// Pointwise evaluation of `sup { n : f(n) <= a }` for nondecreasing `f`.
    pub fn sup_le_at(&self, a: i64) -> ExtInt {
        let a_ext = ExtInt::Fin(a);
        let end = self.end();
        // Bounded above by a on the whole right germ?
        let right_germ = self.eval(end + 1);
        let right_bounded = match right_germ {
            ExtInt::NegInf => true,
            ExtInt::PosInf => false,
            ExtInt::Fin(_) => self.right.shift == 0 && right_germ <= a_ext,
        };
        if right_bounded {
            return ExtInt::PosInf;
        }
        let left_germ = self.eval(self.anchor - 1);
        let left_exceeds = match left_germ {
            ExtInt::PosInf => true,
            ExtInt::NegInf => false,
            ExtInt::Fin(_) => self.left.shift == 0 && left_germ > a_ext,
        };
        if left_exceeds && (self.anchor..=end).all(|n| self.eval(n) > a_ext) {
            return ExtInt::NegInf;
        }
        // find hi with f(hi) > a
        let mut step = 1;
        let mut hi = end;
        while self.eval(hi) <= a_ext {
            hi = end + step;
            step *= 2;
        }
        // find lo with f(lo) <= a
        let mut step = 1;
        let mut lo = self.anchor;
        while self.eval(lo) > a_ext {
            lo = self.anchor - step;
            step *= 2;
        }
        if lo > hi {
            return ExtInt::NegInf;
        }
        // invariant: f(lo) <= a < f(hi)
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.eval(mid) <= a_ext {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        ExtInt::Fin(lo)
    }

    /// For nondecreasing `g`, the function `n ↦ inf { a : g(a) >= n }`.
    pub fn inf_ge(&self) -> Result<StepFn> {
        // inf { a : g(a) >= n } = -sup { a' : h(a') <= -n } with h(a') = -g(-a')
        let h = self.reindex(-1, 0).negate();
        Ok(h.sup_le()?.reindex(-1, 0).negate())
    }
}

impl fmt::Display for StepFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[anchor {}; ", self.anchor)?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(
            f,
            "; left ({},{}); right ({},{})]",
            self.left.period, self.left.shift, self.right.period, self.right.shift
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fin(v: i64) -> ExtInt {
        ExtInt::Fin(v)
    }

    fn middle() -> StepFn {
        StepFn::from_finite(0, &[0, 0], Tail::new(2, 1), Tail::new(2, 1)).unwrap()
    }

    #[test]
    fn eval_follows_tails() {
        let m = middle();
        for n in -9..9 {
            assert_eq!(m.eval(n), fin(n.div_euclid(2)), "n = {n}");
        }
    }

    #[test]
    fn canonical_form_is_unique_for_shifted_windows() {
        let a = StepFn::from_finite(0, &[0, 0], Tail::new(2, 1), Tail::new(2, 1)).unwrap();
        let b = StepFn::from_finite(5, &[2, 3, 3, 4], Tail::new(2, 1), Tail::new(2, 1)).unwrap();
        let c = StepFn::from_finite(-4, &[-2, -2, -1, -1, 0, 0], Tail::new(4, 2), Tail::new(6, 3)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn infinite_germ_is_normalized() {
        let f = StepFn::new(0, vec![ExtInt::PosInf, ExtInt::PosInf, fin(3)], Tail::new(2, 7), Tail::CONSTANT)
            .unwrap();
        assert_eq!(f.left_tail(), Tail::CONSTANT);
        assert_eq!(f.eval(-100), ExtInt::PosInf);
        assert_eq!(f.eval(100), fin(3));
    }

    #[test]
    fn sup_le_of_identity_is_identity() {
        let id = StepFn::from_finite(0, &[0], Tail::new(1, 1), Tail::new(1, 1)).unwrap();
        assert_eq!(id.sup_le().unwrap(), id);
    }

    #[test]
    fn sup_le_of_constant_is_a_cut() {
        let zero = StepFn::constant(fin(0));
        let r = zero.sup_le().unwrap();
        assert_eq!(r.eval(-1), ExtInt::NegInf);
        assert_eq!(r.eval(0), ExtInt::PosInf);
        assert_eq!(r.eval(7), ExtInt::PosInf);
    }

    #[test]
    fn le_detects_divergent_slopes() {
        let zero = StepFn::constant(fin(0));
        let id = StepFn::from_finite(0, &[0], Tail::new(1, 1), Tail::new(1, 1)).unwrap();
        assert!(!zero.le(&id));
        assert!(!id.le(&zero));
        assert!(zero.le(&zero.add_affine(0, 1)));
        assert_eq!(zero.partial_cmp_pointwise(&id), None);
    }

    fn arb_monotone() -> impl Strategy<Value = StepFn> {
        (
            -3i64..3,
            prop::collection::vec(0i64..=2, 1..6),
            -3i64..3,
            (1i64..=3, 0i64..=3),
            (1i64..=3, 0i64..=3),
        )
            .prop_filter_map("window too short", |(anchor, steps, start, (tl, sl), (tr, sr))| {
                let mut v = start;
                let mut values = Vec::new();
                for s in steps {
                    values.push(v);
                    v += s;
                }
                if (values.len() as i64) < tl.max(tr) {
                    return None;
                }
                let f = StepFn::from_finite(anchor, &values, Tail::new(tl, sl), Tail::new(tr, sr)).ok()?;
                f.nondecreasing_violation().is_none().then_some(f)
            })
    }

    fn brute_sup_le(f: &StepFn, a: i64) -> ExtInt {
        // the functions generated above are bounded by |slope| <= 3 so a wide
        // scan is conclusive on [-60, 60]
        let hits: Vec<i64> = (-200..=200).filter(|&n| f.eval(n) <= fin(a)).collect();
        match (hits.first(), hits.last()) {
            (None, _) => ExtInt::NegInf,
            (_, Some(&200)) => ExtInt::PosInf,
            (_, Some(&last)) => fin(last),
            _ => unreachable!(),
        }
    }

    proptest! {
        #[test]
        fn canonical_equality_matches_pointwise_equality(f in arb_monotone(), g in arb_monotone()) {
            let pointwise = (-40..40).all(|n| f.eval(n) == g.eval(n));
            prop_assert_eq!(f == g, pointwise);
        }

        #[test]
        fn le_matches_brute_force(f in arb_monotone(), g in arb_monotone()) {
            let brute = (-200..200).all(|n| f.eval(n) <= g.eval(n));
            prop_assert_eq!(f.le(&g), brute);
        }

        #[test]
        fn sup_le_matches_brute_force(f in arb_monotone()) {
            let r = f.sup_le().unwrap();
            for a in -20..20 {
                prop_assert_eq!(r.eval(a), brute_sup_le(&f, a), "a = {}", a);
            }
        }

        #[test]
        fn reindex_and_affine_are_pointwise(f in arb_monotone(), k in -5i64..5, s in -2i64..2, c in -3i64..3) {
            let g = f.reindex(-1, k);
            let h = f.add_affine(s, c);
            for n in -30..30 {
                prop_assert_eq!(g.eval(n), f.eval(k - n));
                prop_assert_eq!(h.eval(n), f.eval(n) + (s * n + c));
                prop_assert_eq!(f.negate().eval(n), -f.eval(n));
            }
        }
    }
}
