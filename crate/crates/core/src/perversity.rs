//! Perversity functions on Z and the two Z-actions on them.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::stepfn::{ExtInt, StepFn, Tail};

/// A finite perversity: `p(n) <= p(n+1) <= p(n) + 1` for every `n`, with
/// eventually periodic tails.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Perversity {
    f: StepFn,
}

/// A perversity or one of the two constant infinite perversities.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtPerversity {
    Finite(Perversity),
    PlusInfinity,
    MinusInfinity,
}

impl Perversity {
    pub fn new(anchor: i64, values: &[i64], left: Tail, right: Tail) -> Result<Self> {
        let f = StepFn::from_finite(anchor, values, left, right)
            .map_err(|e| Error::InvalidPerversity(e.to_string()))?;
        Self::from_step_fn(f)
    }

    pub fn from_step_fn(f: StepFn) -> Result<Self> {
        if f.values().iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPerversity("values must be finite".into()));
        }
        let (lo, hi) = f.support_window();
        for n in lo - f.left_tail().period - 1..=hi + f.right_tail().period {
            let (a, b) = (f.eval(n), f.eval(n + 1));
            if a > b {
                return Err(Error::InvalidPerversity(format!("p({n}) = {a} > p({}) = {b}", n + 1)));
            }
            if b > a + 1 {
                return Err(Error::InvalidPerversity(format!("p({}) = {b} exceeds p({n}) + 1 = {}", n + 1, a + 1)));
            }
        }
        Ok(Perversity { f })
    }

    pub fn constant(c: i64) -> Self {
        Perversity { f: StepFn::constant(ExtInt::Fin(c)) }
    }

    pub fn zero() -> Self {
        Self::constant(0)
    }

    pub fn identity() -> Self {
        Self::new(0, &[0], Tail::new(1, 1), Tail::new(1, 1)).expect("identity is a perversity")
    }

    /// `n ↦ floor(n / 2)`.
    pub fn middle() -> Self {
        Self::new(0, &[0, 0], Tail::new(2, 1), Tail::new(2, 1)).expect("middle is a perversity")
    }

    /// The characteristic function of `[k, +∞)`.
    pub fn chi(k: i64) -> Self {
        Self::new(k - 1, &[0, 1], Tail::CONSTANT, Tail::CONSTANT).expect("chi is a perversity")
    }

    pub fn step_fn(&self) -> &StepFn {
        &self.f
    }

    pub fn eval(&self, n: i64) -> i64 {
        self.f.eval(n).finite().expect("perversities are finite")
    }

    /// `p(n + 2) <= p(n) + 1` everywhere.
    pub fn is_strict(&self) -> bool {
        self.strictness_witness().is_none()
    }

    pub fn strictness_witness(&self) -> Option<i64> {
        let l = self.f.left_tail().period;
        let r = self.f.right_tail().period;
        (self.f.anchor() - 2 * l - 2..=self.f.end() + 2 * r + 2).find(|&n| self.eval(n + 2) > self.eval(n) + 1)
    }

    /// `n ↦ p(n + k)`.
    pub fn act_dot(&self, k: i64) -> Self {
        Perversity { f: self.f.reindex(1, k) }
    }

    /// `n ↦ p(n) + k`.
    pub fn act_plus(&self, k: i64) -> Self {
        Perversity { f: self.f.add_affine(0, k) }
    }

    /// `f_p(n) = p(n) - n`.
    pub fn to_f(&self) -> Threshold {
        Threshold { f: self.f.add_affine(-1, 0) }
    }

    pub fn from_f(f: &Threshold) -> Self {
        Perversity { f: f.f.add_affine(1, 0) }
    }

    pub fn le(&self, other: &Perversity) -> bool {
        self.f.le(&other.f)
    }

    pub fn compare(&self, other: &Perversity) -> Option<Ordering> {
        self.f.partial_cmp_pointwise(&other.f)
    }

    /// Every sequence on `[lo, hi]` with steps in `{0, 1}` and values in
    /// `[vmin, vmax]`, extended by constant tails.
    pub fn enumerate(window: (i64, i64), values: (i64, i64)) -> Vec<Perversity> {
        let (lo, hi) = window;
        let (vmin, vmax) = values;
        if lo > hi || vmin > vmax {
            return Vec::new();
        }
        let len = (hi - lo + 1) as usize;
        let mut out = Vec::new();
        let mut seq = Vec::with_capacity(len);
        fn rec(seq: &mut Vec<i64>, len: usize, vmax: i64, lo: i64, out: &mut Vec<Perversity>) {
            if seq.len() == len {
                out.push(
                    Perversity::new(lo, seq, Tail::CONSTANT, Tail::CONSTANT).expect("step-0/1 sequences are perversities"),
                );
                return;
            }
            let last = *seq.last().expect("seeded");
            for step in 0..=1 {
                if last + step <= vmax {
                    seq.push(last + step);
                    rec(seq, len, vmax, lo, out);
                    seq.pop();
                }
            }
        }
        for start in vmin..=vmax {
            seq.clear();
            seq.push(start);
            rec(&mut seq, len, vmax, lo, &mut out);
        }
        out
    }
}

impl fmt::Display for Perversity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.f)
    }
}

impl ExtPerversity {
    pub fn as_finite(&self) -> Option<&Perversity> {
        match self {
            ExtPerversity::Finite(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.as_finite().is_none()
    }

    pub fn eval(&self, n: i64) -> ExtInt {
        match self {
            ExtPerversity::Finite(p) => ExtInt::Fin(p.eval(n)),
            ExtPerversity::PlusInfinity => ExtInt::PosInf,
            ExtPerversity::MinusInfinity => ExtInt::NegInf,
        }
    }

    /// The backing step function, constant `±∞` for the infinite perversities.
    pub fn step_fn(&self) -> StepFn {
        match self {
            ExtPerversity::Finite(p) => p.f.clone(),
            ExtPerversity::PlusInfinity => StepFn::constant(ExtInt::PosInf),
            ExtPerversity::MinusInfinity => StepFn::constant(ExtInt::NegInf),
        }
    }

    pub fn from_step_fn(f: StepFn) -> Result<Self> {
        let c = f.eval(f.anchor());
        if f == StepFn::constant(ExtInt::PosInf) {
            Ok(ExtPerversity::PlusInfinity)
        } else if f == StepFn::constant(ExtInt::NegInf) {
            Ok(ExtPerversity::MinusInfinity)
        } else if !c.is_finite() || f.values().iter().any(|v| !v.is_finite()) {
            Err(Error::InvalidPerversity(format!("mixes finite and infinite values: {f}")))
        } else {
            Ok(ExtPerversity::Finite(Perversity::from_step_fn(f)?))
        }
    }

    pub fn is_strict(&self) -> Result<bool> {
        self.as_finite()
            .map(Perversity::is_strict)
            .ok_or_else(|| Error::domain("strictness is only defined for finite perversities"))
    }

    pub fn act_dot(&self, k: i64) -> Self {
        match self {
            ExtPerversity::Finite(p) => ExtPerversity::Finite(p.act_dot(k)),
            other => other.clone(),
        }
    }

    pub fn act_plus(&self, k: i64) -> Self {
        match self {
            ExtPerversity::Finite(p) => ExtPerversity::Finite(p.act_plus(k)),
            other => other.clone(),
        }
    }

    pub fn le(&self, other: &ExtPerversity) -> bool {
        match (self, other) {
            (ExtPerversity::MinusInfinity, _) | (_, ExtPerversity::PlusInfinity) => true,
            (ExtPerversity::PlusInfinity, _) | (_, ExtPerversity::MinusInfinity) => false,
            (ExtPerversity::Finite(p), ExtPerversity::Finite(q)) => p.le(q),
        }
    }

    pub fn compare(&self, other: &ExtPerversity) -> Option<Ordering> {
        match (self.le(other), other.le(self)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }
}

impl From<Perversity> for ExtPerversity {
    fn from(p: Perversity) -> Self {
        ExtPerversity::Finite(p)
    }
}

impl fmt::Display for ExtPerversity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtPerversity::Finite(p) => write!(f, "{p}"),
            ExtPerversity::PlusInfinity => write!(f, "+inf"),
            ExtPerversity::MinusInfinity => write!(f, "-inf"),
        }
    }
}

/// A function `f : Z → Z` that is nonincreasing with `f(n - 1) <= f(n) + 1`;
/// these are exactly the functions `n ↦ p(n) - n` for perversities `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Threshold {
    f: StepFn,
}

impl Threshold {
    pub fn new(f: StepFn) -> Result<Self> {
        if f.values().iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPerversity("threshold values must be finite".into()));
        }
        let (lo, hi) = f.support_window();
        for n in lo - f.left_tail().period - 1..=hi + f.right_tail().period {
            let (a, b) = (f.eval(n), f.eval(n + 1));
            if b > a {
                return Err(Error::InvalidPerversity(format!("threshold increases from {n} to {}", n + 1)));
            }
            if a > b + 1 {
                return Err(Error::InvalidPerversity(format!("threshold drops by more than 1 from {n} to {}", n + 1)));
            }
        }
        Ok(Threshold { f })
    }

    pub fn step_fn(&self) -> &StepFn {
        &self.f
    }

    pub fn eval(&self, n: i64) -> i64 {
        self.f.eval(n).finite().expect("thresholds are finite")
    }

    /// `(f ∔ k)(n) = f(n + k) + k`.
    pub fn act_dot(&self, k: i64) -> Self {
        Threshold { f: self.f.reindex(1, k).add_affine(0, k) }
    }

    pub fn le(&self, other: &Threshold) -> bool {
        self.f.le(&other.f)
    }
}
