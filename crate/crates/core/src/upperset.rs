//! Upper sets of Z and of Z x Z (product order), kinky upper sets, and the
//! correspondences with perversities.
//!
//! An upper set `U` of `Z x Z` is stored through its boundary, the
//! nonincreasing function `b : Z → Z ∪ {±∞}` with `U = {(n, n') : n' >= b(n)}`.
//! All inclusions below are inclusions of upper sets.

use std::fmt;

use crate::error::{Error, Result};
use crate::perversity::{ExtPerversity, Perversity};
use crate::stepfn::{ExtInt, StepFn, Tail};
use crate::zposet::Element;

/// An upper set of Z: empty, everything, or `[b, +∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UpperSet1D {
    Empty,
    Full,
    From(i64),
}

impl UpperSet1D {
    pub fn contains(self, x: i64) -> bool {
        match self {
            UpperSet1D::Empty => false,
            UpperSet1D::Full => true,
            UpperSet1D::From(b) => x >= b,
        }
    }

    /// The least element as an extended integer (`+∞` for the empty set).
    pub fn boundary(self) -> ExtInt {
        match self {
            UpperSet1D::Empty => ExtInt::PosInf,
            UpperSet1D::Full => ExtInt::NegInf,
            UpperSet1D::From(b) => ExtInt::Fin(b),
        }
    }

    pub fn from_boundary(b: ExtInt) -> Self {
        match b {
            ExtInt::PosInf => UpperSet1D::Empty,
            ExtInt::NegInf => UpperSet1D::Full,
            ExtInt::Fin(v) => UpperSet1D::From(v),
        }
    }

    pub fn is_subset(self, other: UpperSet1D) -> bool {
        self.boundary() >= other.boundary()
    }
}

/// Translation vectors acting on `Z x Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `(0, 1)`
    North,
    /// `(1, 1)`
    Northeast,
    /// `(-1, 1)`
    Northwest,
    /// `(-1, -1)`
    Southwest,
}

impl Direction {
    pub fn vector(self) -> (i64, i64) {
        match self {
            Direction::North => (0, 1),
            Direction::Northeast => (1, 1),
            Direction::Northwest => (-1, 1),
            Direction::Southwest => (-1, -1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UpperSet2D {
    b: StepFn,
}

impl UpperSet2D {
    pub fn from_boundary(b: StepFn) -> Result<Self> {
        if let Some(n) = b.nonincreasing_violation() {
            return Err(Error::InvalidUpperSet(format!(
                "boundary increases from b({n}) = {} to b({}) = {}",
                b.eval(n),
                n + 1,
                b.eval(n + 1)
            )));
        }
        Ok(UpperSet2D { b })
    }

    pub fn empty() -> Self {
        UpperSet2D { b: StepFn::constant(ExtInt::PosInf) }
    }

    pub fn full() -> Self {
        UpperSet2D { b: StepFn::constant(ExtInt::NegInf) }
    }

    /// `{(n, n') : n' >= k}`.
    pub fn north_of(k: i64) -> Self {
        UpperSet2D { b: StepFn::constant(ExtInt::Fin(k)) }
    }

    /// `{(n, n') : n >= k}`.
    pub fn east_of(k: i64) -> Self {
        let b = StepFn::new(k - 1, vec![ExtInt::PosInf, ExtInt::NegInf], Tail::CONSTANT, Tail::CONSTANT)
            .expect("two-value window");
        UpperSet2D { b }
    }

    pub fn boundary(&self) -> &StepFn {
        &self.b
    }

    pub fn boundary_at(&self, n: i64) -> ExtInt {
        self.b.eval(n)
    }

    pub fn column(&self, n: i64) -> UpperSet1D {
        UpperSet1D::from_boundary(self.b.eval(n))
    }

    pub fn contains(&self, n: i64, m: i64) -> bool {
        ExtInt::Fin(m) >= self.b.eval(n)
    }

    pub fn is_empty(&self) -> bool {
        self.b == StepFn::constant(ExtInt::PosInf)
    }

    pub fn is_full(&self) -> bool {
        self.b == StepFn::constant(ExtInt::NegInf)
    }

    pub fn is_subset(&self, other: &UpperSet2D) -> bool {
        other.b.le(&self.b)
    }

    /// Translate by `k` times the direction vector.
    pub fn act(&self, dir: Direction, k: i64) -> Self {
        let (dx, dy) = dir.vector();
        UpperSet2D { b: self.b.reindex(1, -k * dx).add_affine(0, k * dy) }
    }

    /// `(Z x Z) \ (-U)`.
    pub fn complement_opposite(&self) -> Self {
        UpperSet2D { b: self.b.reindex(-1, 0).negate().add_affine(0, 1) }
    }

    /// `b(n - 1) <= b(n) + 1` for every `n`, i.e. stability under `(-1, 1)`.
    pub fn is_kinky(&self) -> bool {
        self.kink_violation().is_none()
    }

    pub fn kink_violation(&self) -> Option<i64> {
        let (lo, hi) = self.b.support_window();
        (lo - self.b.left_tail().period..=hi + self.b.right_tail().period + 1)
            .find(|&n| self.b.eval(n - 1) > self.b.eval(n) + 1)
    }
}

impl fmt::Display for UpperSet2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "empty")
        } else if self.is_full() {
            write!(f, "Z x Z")
        } else {
            write!(f, "{{n' >= b(n)}} with b = {}", self.b)
        }
    }
}

/// A monotone family `j ↦ U_j` of upper sets of Z (`j <= k ⇒ U_j ⊆ U_k`),
/// stored as the eventually periodic sequence of column boundaries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpperSetFamily {
    pub anchor: i64,
    pub columns: Vec<UpperSet1D>,
    pub left: Tail,
    pub right: Tail,
}

impl UpperSetFamily {
    fn boundary(&self) -> Result<StepFn> {
        StepFn::new(self.anchor, self.columns.iter().map(|c| c.boundary()).collect(), self.left, self.right)
    }

    pub fn column(&self, j: i64) -> Result<UpperSet1D> {
        Ok(UpperSet1D::from_boundary(self.boundary()?.eval(j)))
    }

    /// The graph `{(j, j') : j' ∈ U_j}`.
    pub fn gamma(&self) -> Result<UpperSet2D> {
        let b = self.boundary()?;
        if let Some(n) = b.nonincreasing_violation() {
            return Err(Error::NotMonotone(Element::Int(n), Element::Int(n + 1)));
        }
        Ok(UpperSet2D { b })
    }

    pub fn gamma_inverse(u: &UpperSet2D) -> UpperSetFamily {
        UpperSetFamily {
            anchor: u.b.anchor(),
            columns: u.b.values().iter().map(|&v| UpperSet1D::from_boundary(v)).collect(),
            left: u.b.left_tail(),
            right: u.b.right_tail(),
        }
    }
}

/// An upper set stable under translation by `(-1, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KinkyUpperSet {
    inner: UpperSet2D,
}

impl KinkyUpperSet {
    pub fn new(inner: UpperSet2D) -> Result<Self> {
        match inner.kink_violation() {
            None => Ok(KinkyUpperSet { inner }),
            Some(n) => Err(Error::InvalidUpperSet(format!(
                "not kinky: b({}) = {} > b({n}) + 1 = {}",
                n - 1,
                inner.boundary_at(n - 1),
                inner.boundary_at(n) + 1
            ))),
        }
    }

    pub fn inner(&self) -> &UpperSet2D {
        &self.inner
    }

    /// Neither empty nor everything. Such sets have every column a proper
    /// half-line.
    pub fn is_nontrivial(&self) -> bool {
        !self.inner.is_empty() && !self.inner.is_full()
    }

    /// Image under `(n, n') ↦ (n + n', n')`.
    pub fn phi_transform(&self) -> UpperSet2D {
        // (a, c) ∈ φ(K) iff a >= q(a - c) with q(m) = b(m) + m nondecreasing
        let q = self.inner.b.add_affine(1, 0);
        let r = q.sup_le().expect("kinky boundaries give nondecreasing q");
        UpperSet2D { b: r.negate().add_affine(1, 0) }
    }

    /// Preimage under `(n, n') ↦ (n + n', n')`.
    pub fn phi_inverse(v: &UpperSet2D) -> KinkyUpperSet {
        // (n, c) ∈ φ⁻¹(V) iff w(n + c) >= n with w(a) = a - b_V(a)
        let w = v.b.negate().add_affine(1, 0);
        let s = w.inf_ge().expect("w is nondecreasing");
        KinkyUpperSet { inner: UpperSet2D { b: s.add_affine(-1, 0) } }
    }
}

/// `S_p = {(n, n') : n' >= p(n) - n}`, the graph of the threshold of `p`.
pub fn perversity_graph(p: &ExtPerversity) -> KinkyUpperSet {
    KinkyUpperSet { inner: UpperSet2D { b: p.step_fn().add_affine(-1, 0) } }
}

/// Inverse of [`perversity_graph`] on kinky upper sets.
pub fn graph_to_perversity(k: &KinkyUpperSet) -> ExtPerversity {
    ExtPerversity::from_step_fn(k.inner.b.add_affine(1, 0)).expect("kinky graphs come from perversities")
}

/// `φ(S_p)`. Sends `p_{-∞}` to `Z x Z`, `p_{+∞}` to the empty set, and
/// intertwines `p ↦ p + 1` with the northeast translation. Order-reversing:
/// `p <= q` iff the image of `q` is contained in the image of `p`.
pub fn perversity_to_upperset(p: &ExtPerversity) -> UpperSet2D {
    // (a, c) ∈ φ(S_p) iff p(a - c) <= a, so b(a) = a - sup { m : p(m) <= a }
    let r = p.step_fn().sup_le().expect("perversities are nondecreasing");
    UpperSet2D { b: r.negate().add_affine(1, 0) }
}

/// Inverse of [`perversity_to_upperset`]: `p(n) = inf { a : a - b(a) >= n }`.
pub fn upperset_to_perversity_northeast(u: &UpperSet2D) -> ExtPerversity {
    let w = u.b.negate().add_affine(1, 0);
    let p = w.inf_ge().expect("a - b(a) is nondecreasing");
    ExtPerversity::from_step_fn(p).expect("every upper set comes from a perversity")
}

/// The complement of `-φ(S_p)`. Sends `p_{-∞}` to the empty set and
/// `p_{+∞}` to `Z x Z`, and intertwines `p ↦ p - 1` with the northeast
/// translation. Order-preserving for inclusion of upper sets.
pub fn perversity_to_upperset_complement(p: &ExtPerversity) -> UpperSet2D {
    perversity_to_upperset(p).complement_opposite()
}

/// The perversity `p_U` attached to an upper set, inverse of
/// [`perversity_to_upperset_complement`]:
/// `p_U(n) = n + min { n' : (-n - n', -n') ∉ U } = -max { k : b(k) - k >= n + 1 }`.
pub fn upperset_to_perversity(u: &UpperSet2D) -> ExtPerversity {
    let w = u.b.negate().add_affine(1, 0);
    let r = w.sup_le().expect("k - b(k) is nondecreasing");
    ExtPerversity::from_step_fn(r.reindex(-1, -1).negate()).expect("every upper set comes from a perversity")
}

/// Convenience for finite perversities.
pub fn finite_to_upperset(p: &Perversity) -> UpperSet2D {
    perversity_to_upperset(&ExtPerversity::Finite(p.clone()))
}
