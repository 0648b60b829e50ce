//! Small stable-category models: a semisimple bigraded model, where every
//! extension splits, and the derived category of the A_N quiver, where
//! nonsplit extensions make the swap step of the reordering algorithm
//! nontrivial.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::slicing::{HomOracle, SupportObject, Witness};
use crate::zposet::{Element, ZSetMap, ZToset};

// ---------------------------------------------------------------------------
// Semisimple model

/// An object of the semisimple `Z x_lex Ẑ`-sliced category: a multiset of
/// `♥_w[n]` summands, stored as labels `(n, w)`.
pub type BigradedObject = SupportObject;

/// Builds a bigraded object from `(n, w, multiplicity)` triples.
pub fn bigraded(entries: &[(i64, i64, u32)]) -> Result<BigradedObject> {
    SupportObject::new(entries.iter().map(|&(n, w, m)| (Element::Pair(n, w), m)))
}

/// `dim Hom(X, Y[n])` in the semisimple model.
pub fn semisimple_hom_dimension(x: &BigradedObject, y: &BigradedObject, n: i64) -> Result<u64> {
    let mut total = 0u64;
    for (label, m) in x.iter() {
        let (a, w) = label.pair().ok_or_else(|| Error::domain(format!("{label} is not a bigraded label")))?;
        total += u64::from(*m) * u64::from(y.multiplicity(&Element::Pair(a - n, w)));
    }
    Ok(total)
}

/// All objects with at most `max_entries` distinct labels in
/// `degrees x weights`, each with multiplicity one, in a fixed order.
pub fn semisimple_samples(max_entries: usize, degrees: (i64, i64), weights: (i64, i64)) -> Vec<BigradedObject> {
    let labels: Vec<Element> = (degrees.0..=degrees.1)
        .flat_map(|n| (weights.0..=weights.1).map(move |w| Element::Pair(n, w)))
        .collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fn rec(labels: &[Element], start: usize, left: usize, chosen: &mut Vec<Element>, out: &mut Vec<SupportObject>) {
        out.push(SupportObject::new(chosen.iter().map(|l| (*l, 1))).expect("positive multiplicities"));
        if left == 0 {
            return;
        }
        for i in start..labels.len() {
            chosen.push(labels[i]);
            rec(labels, i + 1, left - 1, chosen, out);
            chosen.pop();
        }
    }
    rec(&labels, 0, max_entries, &mut chosen, &mut out);
    out
}

// ---------------------------------------------------------------------------
// The A_N quiver

/// The A_N quiver `N -> N-1 -> ... -> 1` (arrows `i+1 -> i`).
/// Indecomposable representations are intervals `[a, b]`; the projective
/// at `i` is `[1, i]` and the simple at `i` is `[i, i]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AQuiver {
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub a: usize,
    pub b: usize,
}

impl Interval {
    pub fn new(a: usize, b: usize) -> Self {
        Interval { a, b }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.a, self.b)
    }
}

impl AQuiver {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("A_0 has no vertices"));
        }
        Ok(AQuiver { n })
    }

    pub fn check(&self, i: Interval) -> Result<()> {
        if 1 <= i.a && i.a <= i.b && i.b <= self.n {
            Ok(())
        } else {
            Err(Error::domain(format!("interval {i} is outside A_{}", self.n)))
        }
    }

    pub fn intervals(&self) -> Vec<Interval> {
        (1..=self.n).flat_map(|a| (a..=self.n).map(move |b| Interval::new(a, b))).collect()
    }

    pub fn projective(&self, i: usize) -> Interval {
        Interval::new(1, i)
    }

    pub fn simple(&self, i: usize) -> Interval {
        Interval::new(i, i)
    }

    /// `dim Ext^d(I, J)` from the interval combinatorics.
    pub fn ext(&self, i: Interval, j: Interval, d: i64) -> Result<u64> {
        self.check(i)?;
        self.check(j)?;
        let (a, b, c, e) = (i.a, i.b, j.a, j.b);
        Ok(match d {
            0 => u64::from(a <= c && c <= b && b <= e),
            1 => u64::from(c < a && a <= e + 1 && e < b),
            _ => 0,
        })
    }

    /// The representation of a direct sum of intervals.
    pub fn representation(&self, summands: &[(Interval, u32)]) -> Result<Representation> {
        let mut rep = Representation::zero(self.n);
        for &(iv, m) in summands {
            self.check(iv)?;
            for _ in 0..m {
                rep = rep.direct_sum(&Representation::interval(self.n, iv));
            }
        }
        Ok(rep)
    }

    /// `⟨x, y⟩ = Σ x_i y_i - Σ_{i+1 -> i} x_{i+1} y_i`.
    pub fn euler_form(&self, x: &[usize], y: &[usize]) -> i64 {
        let diag: i64 = (0..self.n).map(|i| (x[i] * y[i]) as i64).sum();
        let arrows: i64 = (0..self.n.saturating_sub(1)).map(|i| (x[i + 1] * y[i]) as i64).sum();
        diag - arrows
    }
}

/// A representation of A_N: vector space dimensions per vertex and a matrix
/// for each arrow `i+1 -> i` (rows indexed by the target).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    pub dims: Vec<usize>,
    pub maps: Vec<Vec<Vec<Rational64>>>,
}

fn zero_matrix(rows: usize, cols: usize) -> Vec<Vec<Rational64>> {
    vec![vec![Rational64::from_integer(0); cols]; rows]
}

impl Representation {
    pub fn zero(n: usize) -> Self {
        Representation { dims: vec![0; n], maps: vec![Vec::new(); n.saturating_sub(1)] }
    }

    pub fn interval(n: usize, iv: Interval) -> Self {
        let dims: Vec<usize> = (1..=n).map(|v| usize::from(iv.a <= v && v <= iv.b)).collect();
        let maps = (0..n.saturating_sub(1))
            .map(|i| {
                let mut m = zero_matrix(dims[i], dims[i + 1]);
                if dims[i] == 1 && dims[i + 1] == 1 {
                    m[0][0] = Rational64::from_integer(1);
                }
                m
            })
            .collect();
        Representation { dims, maps }
    }

    pub fn direct_sum(&self, other: &Representation) -> Representation {
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let maps = (0..self.maps.len())
            .map(|i| {
                let mut m = zero_matrix(dims[i], dims[i + 1]);
                for (r, row) in self.maps[i].iter().enumerate() {
                    for (c, v) in row.iter().enumerate() {
                        m[r][c] = *v;
                    }
                }
                for (r, row) in other.maps[i].iter().enumerate() {
                    for (c, v) in row.iter().enumerate() {
                        m[self.dims[i] + r][self.dims[i + 1] + c] = *v;
                    }
                }
                m
            })
            .collect();
        Representation { dims, maps }
    }
}

fn rank(mut m: Vec<Vec<Rational64>>) -> usize {
    let zero = Rational64::from_integer(0);
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != zero) else { continue };
        m.swap(r, p);
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] != zero {
                let factor = row[c] / pivot_row[c];
                for (x, v) in row[c..cols].iter_mut().zip(&pivot_row[c..cols]) {
                    *x -= factor * *v;
                }
            }
        }
        r += 1;
    }
    r
}

/// `dim Hom(M, N)` and `dim Ext^1(M, N)` from the standard two-term complex
/// `⊕_i Hom(M_i, N_i) -> ⊕_{i+1 -> i} Hom(M_{i+1}, N_i)`, whose kernel and
/// cokernel they are. Computed with exact rational arithmetic.
pub fn brute_force_hom_ext(m: &Representation, n: &Representation) -> (u64, u64) {
    let verts = m.dims.len();
    // Unknowns: the entries of every f_i : M_i -> N_i.
    let mut offset = Vec::with_capacity(verts);
    let mut unknowns = 0;
    for i in 0..verts {
        offset.push(unknowns);
        unknowns += n.dims[i] * m.dims[i];
    }
    let var = |i: usize, r: usize, c: usize| offset[i] + r * m.dims[i] + c;
    let mut rows = Vec::new();
    for i in 0..verts.saturating_sub(1) {
        // f_i ∘ M_a - N_a ∘ f_{i+1} = 0 as maps M_{i+1} -> N_i.
        for r in 0..n.dims[i] {
            for c in 0..m.dims[i + 1] {
                let mut row = vec![Rational64::from_integer(0); unknowns];
                for k in 0..m.dims[i] {
                    row[var(i, r, k)] += m.maps[i][k][c];
                }
                for k in 0..n.dims[i + 1] {
                    row[var(i + 1, k, c)] -= n.maps[i][r][k];
                }
                rows.push(row);
            }
        }
    }
    let target = rows.len();
    let rk = if unknowns == 0 { 0 } else { rank(rows) };
    ((unknowns - rk) as u64, (target - rk) as u64)
}

/// Brute-force `dim Ext^d(I, J)` for intervals; hereditary, so `d >= 2` vanishes.
pub fn brute_force_ext(q: &AQuiver, i: Interval, j: Interval, d: i64) -> Result<u64> {
    q.check(i)?;
    q.check(j)?;
    let (hom, ext1) =
        brute_force_hom_ext(&Representation::interval(q.n, i), &Representation::interval(q.n, j));
    Ok(match d {
        0 => hom,
        1 => ext1,
        _ => 0,
    })
}

/// An object of `D^b(rep A_N)`: a multiset of shifted intervals `I[s]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct QuiverObject {
    summands: BTreeMap<(Interval, i64), u32>,
}

impl QuiverObject {
    pub fn new(q: &AQuiver, items: impl IntoIterator<Item = (Interval, i64, u32)>) -> Result<Self> {
        let mut summands = BTreeMap::new();
        for (iv, s, m) in items {
            q.check(iv)?;
            if m == 0 {
                return Err(Error::domain(format!("zero multiplicity at {iv}[{s}]")));
            }
            *summands.entry((iv, s)).or_insert(0) += m;
        }
        Ok(QuiverObject { summands })
    }

    pub fn zero() -> Self {
        QuiverObject::default()
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn summands(&self) -> impl Iterator<Item = (Interval, i64, u32)> + '_ {
        self.summands.iter().map(|(&(iv, s), &m)| (iv, s, m))
    }

    pub fn direct_sum(&self, other: &QuiverObject) -> QuiverObject {
        let mut summands = self.summands.clone();
        for (k, v) in &other.summands {
            *summands.entry(*k).or_insert(0) += v;
        }
        QuiverObject { summands }
    }

    /// The summands in cohomological degree `-s`, as a representation.
    fn layer(&self, q: &AQuiver, s: i64) -> Result<Representation> {
        let items: Vec<(Interval, u32)> =
            self.summands.iter().filter(|((_, t), _)| *t == s).map(|(&(iv, _), &m)| (iv, m)).collect();
        q.representation(&items)
    }

    fn shifts(&self) -> Vec<i64> {
        let mut s: Vec<i64> = self.summands.keys().map(|(_, s)| *s).collect();
        s.dedup();
        s.sort();
        s.dedup();
        s
    }
}

impl fmt::Display for QuiverObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .summands()
            .map(|(iv, s, m)| if m == 1 { format!("{iv}[{s}]") } else { format!("{iv}[{s}]^{m}") })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `dim Hom(X, Y[n])` from the interval combinatorics.
pub fn quiver_hom_dimension(q: &AQuiver, x: &QuiverObject, y: &QuiverObject, n: i64) -> Result<u64> {
    let mut total = 0;
    for (i, s, m) in x.summands() {
        for (j, t, k) in y.summands() {
            total += u64::from(m) * u64::from(k) * q.ext(i, j, t + n - s)?;
        }
    }
    Ok(total)
}

/// `dim Hom(X, Y[n])` by linear algebra on the whole representations in
/// each pair of degrees, without splitting into intervals.
pub fn quiver_hom_dimension_brute(q: &AQuiver, x: &QuiverObject, y: &QuiverObject, n: i64) -> Result<u64> {
    let mut total = 0;
    for s in x.shifts() {
        let mx = x.layer(q, s)?;
        for t in y.shifts() {
            let d = t + n - s;
            if d == 0 || d == 1 {
                let (hom, ext1) = brute_force_hom_ext(&mx, &y.layer(q, t)?);
                total += if d == 0 { hom } else { ext1 };
            }
        }
    }
    Ok(total)
}

/// Whether a single-layer object is indecomposable: its endomorphism ring is
/// one-dimensional. Every interval has `End = k`, and a sum of two or more
/// summands has at least two idempotents.
pub fn is_indecomposable_brute(q: &AQuiver, x: &QuiverObject) -> Result<bool> {
    let shifts = x.shifts();
    if shifts.len() != 1 {
        return Ok(false);
    }
    let rep = x.layer(q, shifts[0])?;
    Ok(brute_force_hom_ext(&rep, &rep).0 == 1)
}

/// How indecomposables of `D^b(rep A_N)` are assigned slice labels `(s, w)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuiverSlicing {
    /// The standard heart as a single slice: `I[s] ↦ (s, 0)`.
    Standard,
    /// Slices by `w(I) = a + b`. Nonzero maps between intervals increase `w`,
    /// intervals of equal `w` have no extensions, and `Ext^1` always lowers `w`,
    /// so this slicing is not gluable once `N >= 2`.
    Slope,
    /// Slices by the top vertex `w([a, b]) = b`.
    Top,
}

impl QuiverSlicing {
    pub fn weight(self, iv: Interval) -> i64 {
        match self {
            QuiverSlicing::Standard => 0,
            QuiverSlicing::Slope => (iv.a + iv.b) as i64,
            QuiverSlicing::Top => iv.b as i64,
        }
    }

    pub fn label(self, iv: Interval, s: i64) -> Element {
        Element::Pair(s, self.weight(iv))
    }

    /// Verifies the slicing axioms on A_N: no maps from higher to lower
    /// weight and no extensions inside a weight class. Returns the offending
    /// pair, if any.
    pub fn validate(self, q: &AQuiver) -> Result<Option<(Interval, Interval)>> {
        for i in q.intervals() {
            for j in q.intervals() {
                let (wi, wj) = (self.weight(i), self.weight(j));
                if (wi > wj && q.ext(i, j, 0)? != 0) || (wi == wj && q.ext(i, j, 1)? != 0) {
                    return Ok(Some((i, j)));
                }
            }
        }
        Ok(None)
    }
}

/// The orthogonality oracle of a quiver slicing, indexed by `Z x_lex Ẑ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuiverOracle {
    pub quiver: AQuiver,
    pub slicing: QuiverSlicing,
    /// Use the linear-algebra computation instead of the interval rules.
    pub brute_force: bool,
}

impl QuiverOracle {
    pub fn new(quiver: AQuiver, slicing: QuiverSlicing) -> Self {
        QuiverOracle { quiver, slicing, brute_force: false }
    }

    fn class(&self, w: i64) -> Vec<Interval> {
        self.quiver.intervals().into_iter().filter(|iv| self.slicing.weight(*iv) == w).collect()
    }
}

impl HomOracle for QuiverOracle {
    fn index(&self) -> ZToset {
        ZToset::z_lex_zhat()
    }

    fn vanishes(&self, phi: &Element, psi: &Element, n: i64) -> Result<bool> {
        let index = self.index();
        index.check(phi)?;
        index.check(psi)?;
        let (s, v) = phi.pair().expect("pair label");
        let (t, w) = psi.pair().expect("pair label");
        let d = t + n - s;
        for i in self.class(v) {
            for j in self.class(w) {
                let dim = if self.brute_force { brute_force_ext(&self.quiver, i, j, d)? } else { self.quiver.ext(i, j, d)? };
                if dim != 0 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn describe(&self) -> String {
        format!("A_{} quiver, {:?} slicing", self.quiver.n, self.slicing)
    }
}

// ---------------------------------------------------------------------------
// HN towers and reordering

/// Factors with strictly decreasing labels; no factor is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HNTower<T> {
    factors: Vec<(Element, T)>,
}

impl<T> HNTower<T> {
    /// Validates strictly decreasing labels.
    pub fn new(factors: Vec<(Element, T)>) -> Result<Self> {
        for w in factors.windows(2) {
            if w[0].0 <= w[1].0 {
                return Err(Error::domain(format!("tower labels {} and {} are not strictly decreasing", w[0].0, w[1].0)));
            }
        }
        Ok(HNTower { factors })
    }

    pub fn factors(&self) -> &[(Element, T)] {
        &self.factors
    }

    pub fn labels(&self) -> Vec<Element> {
        self.factors.iter().map(|(l, _)| *l).collect()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

/// The HN tower of a semisimple object: one factor per label.
pub fn semisimple_hn_tower(x: &BigradedObject) -> HNTower<u32> {
    HNTower { factors: x.descending() }
}

pub fn semisimple_reassemble(factors: &[(Element, u32)]) -> BigradedObject {
    SupportObject::new(factors.iter().copied()).expect("tower factors have positive multiplicity")
}

/// The HN tower of a quiver object for the given slicing.
pub fn quiver_hn_tower(q: &AQuiver, x: &QuiverObject, slicing: QuiverSlicing) -> Result<HNTower<QuiverObject>> {
    let mut groups: BTreeMap<Element, Vec<(Interval, i64, u32)>> = BTreeMap::new();
    for (iv, s, m) in x.summands() {
        groups.entry(slicing.label(iv, s)).or_default().push((iv, s, m));
    }
    let mut factors = Vec::new();
    for (label, items) in groups.into_iter().rev() {
        factors.push((label, QuiverObject::new(q, items)?));
    }
    Ok(HNTower { factors })
}

/// The direct sum of the factors. Every object of the model is a sum of
/// shifted intervals, so this is the total object of the tower up to
/// isomorphism, and comparing canonical multisets decides isomorphism.
pub fn quiver_reassemble(factors: &[(Element, QuiverObject)]) -> QuiverObject {
    factors.iter().fold(QuiverObject::zero(), |acc, (_, f)| acc.direct_sum(f))
}

/// A slicing `(L, U)` of a Z-toset, given by the least element of `U`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cut {
    pub threshold: Element,
}

impl Cut {
    pub fn new(threshold: Element) -> Self {
        Cut { threshold }
    }

    pub fn in_upper(&self, x: &Element) -> bool {
        *x >= self.threshold
    }
}

/// One exchange of adjacent factors, with the orthogonality fact consulted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapRecord {
    /// Position of the `L` factor before the swap; the `U` factor sat at `position + 1`.
    pub position: usize,
    pub upper: Element,
    pub lower: Element,
}

impl fmt::Display for SwapRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "swap at {}: Hom(D_{}, D_{}[1]) = 0", self.position, self.upper, self.lower)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reordered<T> {
    /// Factors in the order `(U, ..., U, L, ..., L)`.
    pub factors: Vec<(Element, T)>,
    pub upper_len: usize,
    pub swaps: Vec<SwapRecord>,
}

impl<T> Reordered<T> {
    pub fn upper(&self) -> &[(Element, T)] {
        &self.factors[..self.upper_len]
    }

    pub fn lower(&self) -> &[(Element, T)] {
        &self.factors[self.upper_len..]
    }
}

/// Bubbles every `U` factor past the `L` factors in front of it. A swap of
/// an `(L, U)` pair needs `Hom(D_U, D_L[1]) = 0`; when that fails the error
/// carries the position. Positions already emitted into the sorted prefix
/// are never inspected again, and at most `n(n-1)/2` swaps happen.
pub fn reorder_tower<T: Clone>(
    tower: &HNTower<T>,
    f: &ZSetMap,
    oracle: &dyn HomOracle,
    cut: &Cut,
) -> Result<Reordered<T>> {
    let mut factors = tower.factors.clone();
    let mut upper: Vec<bool> = Vec::with_capacity(factors.len());
    for (label, _) in &factors {
        upper.push(cut.in_upper(&f.apply(label)?));
    }
    let mut swaps = Vec::new();
    let mut sorted = 0;
    for i in 0..factors.len() {
        if !upper[i] {
            continue;
        }
        let mut j = i;
        while j > sorted {
            let (lower_label, upper_label) = (factors[j - 1].0, factors[j].0);
            if !oracle.vanishes(&upper_label, &lower_label, 1)? {
                return Err(Error::SwapBlocked { position: j - 1, upper: upper_label, lower: lower_label });
            }
            factors.swap(j - 1, j);
            upper.swap(j - 1, j);
            swaps.push(SwapRecord { position: j - 1, upper: upper_label, lower: lower_label });
            j -= 1;
        }
        sorted += 1;
    }
    Ok(Reordered { factors, upper_len: sorted, swaps })
}

/// `(X_U, X_L)` for a semisimple object.
pub fn semisimple_truncate(
    x: &BigradedObject,
    f: &ZSetMap,
    oracle: &dyn HomOracle,
    cut: &Cut,
) -> Result<(BigradedObject, BigradedObject)> {
    let r = reorder_tower(&semisimple_hn_tower(x), f, oracle, cut)?;
    Ok((semisimple_reassemble(r.upper()), semisimple_reassemble(r.lower())))
}

/// `(X_U, X_L)` for a quiver object.
pub fn quiver_truncate(
    q: &AQuiver,
    x: &QuiverObject,
    slicing: QuiverSlicing,
    f: &ZSetMap,
    cut: &Cut,
) -> Result<(QuiverObject, QuiverObject)> {
    let oracle = QuiverOracle::new(*q, slicing);
    let r = reorder_tower(&quiver_hn_tower(q, x, slicing)?, f, &oracle, cut)?;
    Ok((quiver_reassemble(r.upper()), quiver_reassemble(r.lower())))
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TStructureReport {
    /// Labels in the `U` class whose shift leaves it.
    pub shift_failures: Vec<Element>,
    /// Nonzero `Hom` from a `U` slice to an `L` slice.
    pub hom_failures: Vec<Witness>,
    /// Samples (by index) whose truncation failed, with the error.
    pub truncation_failures: Vec<(usize, String)>,
}

impl TStructureReport {
    pub fn passed(&self) -> bool {
        self.shift_failures.is_empty() && self.hom_failures.is_empty() && self.truncation_failures.is_empty()
    }
}

/// Checks the t-structure `(⟨D_φ⟩_{f(φ) ∈ U}, ⟨D_φ⟩_{f(φ) ∈ L})` on samples
/// of the oracle-described category: closure of the `U` class under `[1]`,
/// vanishing of `Hom` from `U` to `L`, and truncation of every sample.
pub fn verify_t_structure(
    oracle: &dyn HomOracle,
    f: &ZSetMap,
    cut: &Cut,
    samples: &[SupportObject],
) -> Result<TStructureReport> {
    let index = oracle.index();
    let mut report = TStructureReport::default();
    let mut ups = BTreeMap::new();
    let mut lows = BTreeMap::new();
    for x in samples {
        for label in x.labels() {
            if cut.in_upper(&f.apply(&label)?) {
                if !cut.in_upper(&f.apply(&index.shift(&label, 1)?)?) && !report.shift_failures.contains(&label) {
                    report.shift_failures.push(label);
                }
                ups.insert(label, ());
            } else {
                lows.insert(label, ());
            }
        }
    }
    for phi in ups.keys() {
        for psi in lows.keys() {
            if !oracle.vanishes(phi, psi, 0)? {
                report.hom_failures.push(Witness { phi: *phi, psi: *psi, shift: 0 });
            }
        }
    }
    for (i, x) in samples.iter().enumerate() {
        if let Err(e) = semisimple_truncate(x, f, oracle, cut) {
            report.truncation_failures.push((i, e.to_string()));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perversity::Perversity;
    use crate::slicing::{HeartOracle, HeartRule, HeartTable};

    fn a(n: usize) -> AQuiver {
        AQuiver::new(n).unwrap()
    }

    #[test]
    fn semisimple_hom_examples() {
        let x = bigraded(&[(0, 0, 1)]).unwrap();
        assert_eq!(semisimple_hom_dimension(&x, &x, 0).unwrap(), 1);
        assert_eq!(semisimple_hom_dimension(&x, &x, 1).unwrap(), 0);
        let y = bigraded(&[(-1, 0, 2)]).unwrap();
        assert_eq!(semisimple_hom_dimension(&x, &y, 1).unwrap(), 2);
    }

    #[test]
    fn a2_examples() {
        let q = a(2);
        let (s2, p1, p2) = (q.simple(2), q.projective(1), q.projective(2));
        assert_eq!(q.ext(s2, p1, 1).unwrap(), 1);
        assert_eq!(brute_force_ext(&q, s2, p1, 1).unwrap(), 1);
        assert_eq!(q.ext(p1, s2, 0).unwrap(), 0);
        assert_eq!(brute_force_ext(&q, p1, s2, 0).unwrap(), 0);
        // 0 -> P1 -> P2 -> S2 -> 0
        assert_eq!(brute_force_ext(&q, p1, p2, 0).unwrap(), 1);
        assert_eq!(brute_force_ext(&q, p2, s2, 0).unwrap(), 1);
        let x = QuiverObject::new(&q, [(s2, 0, 1)]).unwrap();
        let y = QuiverObject::new(&q, [(p1, 0, 1)]).unwrap();
        assert_eq!(quiver_hom_dimension(&q, &x, &y, 1).unwrap(), 1);
        assert_eq!(quiver_hom_dimension_brute(&q, &x, &y, 1).unwrap(), 1);
        assert!(q.check(Interval::new(2, 3)).is_err());
    }

    #[test]
    fn interval_rules_match_linear_algebra() {
        for n in 1..=4 {
            let q = a(n);
            for i in q.intervals() {
                for j in q.intervals() {
                    let (hom, ext1) = brute_force_hom_ext(&Representation::interval(n, i), &Representation::interval(n, j));
                    assert_eq!(hom, q.ext(i, j, 0).unwrap(), "Hom({i}, {j}) on A_{n}");
                    assert_eq!(ext1, q.ext(i, j, 1).unwrap(), "Ext^1({i}, {j}) on A_{n}");
                    let dx: Vec<usize> = Representation::interval(n, i).dims;
                    let dy: Vec<usize> = Representation::interval(n, j).dims;
                    assert_eq!(q.euler_form(&dx, &dy), hom as i64 - ext1 as i64);
                }
            }
        }
    }

    #[test]
    fn hom_dimension_agrees_on_sums_and_shifts() {
        let q = a(3);
        let x = QuiverObject::new(&q, [(Interval::new(2, 3), 0, 2), (Interval::new(1, 1), 1, 1), (Interval::new(3, 3), 0, 1)]).unwrap();
        let y = QuiverObject::new(&q, [(Interval::new(1, 2), 0, 1), (Interval::new(1, 1), 1, 1), (Interval::new(2, 2), -1, 1)]).unwrap();
        for n in -2..=2 {
            assert_eq!(quiver_hom_dimension(&q, &x, &y, n).unwrap(), quiver_hom_dimension_brute(&q, &x, &y, n).unwrap());
            assert_eq!(quiver_hom_dimension(&q, &y, &x, n).unwrap(), quiver_hom_dimension_brute(&q, &y, &x, n).unwrap());
        }
    }

    #[test]
    fn slicings_satisfy_the_axioms() {
        for n in 1..=4 {
            for s in [QuiverSlicing::Standard, QuiverSlicing::Slope, QuiverSlicing::Top] {
                let bad = s.validate(&a(n)).unwrap();
                assert!(s == QuiverSlicing::Standard || bad.is_none(), "{s:?} on A_{n}: {bad:?}");
            }
        }
    }

    #[test]
    fn hn_towers() {
        let x = bigraded(&[(0, 3, 1), (0, 5, 1), (1, 2, 1)]).unwrap();
        let t = semisimple_hn_tower(&x);
        assert_eq!(t.labels(), vec![Element::Pair(1, 2), Element::Pair(0, 5), Element::Pair(0, 3)]);
        assert_eq!(semisimple_reassemble(t.factors()), x);
        assert!(semisimple_hn_tower(&SupportObject::zero()).is_empty());
        let q = a(2);
        let p2 = QuiverObject::new(&q, [(q.projective(2), 0, 1)]).unwrap();
        let t = quiver_hn_tower(&q, &p2, QuiverSlicing::Standard).unwrap();
        assert_eq!(t.len(), 1);
        assert!(is_indecomposable_brute(&q, &t.factors()[0].1).unwrap());
        let two = QuiverObject::new(&q, [(q.simple(1), 0, 1), (q.simple(2), 0, 1)]).unwrap();
        assert!(!is_indecomposable_brute(&q, &two).unwrap());
    }

    #[test]
    fn reorder_examples() {
        let o = HeartOracle::new(HeartRule::Semisimple);
        let e = ZSetMap::exchange(&o.index()).unwrap();
        let cut = Cut::new(Element::Pair(0, 0));
        // (2,-1) ↦ (-1,2) in L, then (0,1) ↦ (1,0) in U.
        let lu = HNTower::new(vec![(Element::Pair(2, -1), 1u32), (Element::Pair(0, 1), 1)]).unwrap();
        let r = reorder_tower(&lu, &e, &o, &cut).unwrap();
        assert_eq!(r.factors, vec![(Element::Pair(0, 1), 1), (Element::Pair(2, -1), 1)]);
        assert_eq!(r.swaps.len(), 1);
        let ul = HNTower::new(vec![(Element::Pair(0, 1), 1u32), (Element::Pair(-1, -1), 1)]).unwrap();
        let r = reorder_tower(&ul, &e, &o, &cut).unwrap();
        assert_eq!(r.factors, ul.factors().to_vec());
        assert!(r.swaps.is_empty());
    }

    #[test]
    fn blocked_swap_reports_position() {
        // Hom(D_(0,1), D_(2,-1)[1]) = Hom(♥_1, ♥_{-1}[3]) planted nonzero.
        let mut entries = BTreeMap::new();
        entries.insert((1, -1, 3), false);
        let o = HeartOracle::new(HeartRule::Table(HeartTable { entries, default_vanishes: true }));
        let e = ZSetMap::exchange(&o.index()).unwrap();
        let lu = HNTower::new(vec![(Element::Pair(2, -1), 1u32), (Element::Pair(0, 1), 1)]).unwrap();
        let err = reorder_tower(&lu, &e, &o, &Cut::new(Element::Pair(0, 0))).unwrap_err();
        assert_eq!(err, Error::SwapBlocked { position: 0, upper: Element::Pair(0, 1), lower: Element::Pair(2, -1) });
    }

    #[test]
    fn truncation_under_gamma_identity() {
        let o = HeartOracle::new(HeartRule::Semisimple);
        let g = ZSetMap::gamma(&Perversity::identity().into()).unwrap();
        let x = bigraded(&[(0, 0, 1), (-1, 0, 1), (-2, 3, 2), (1, -2, 1)]).unwrap();
        let (u, l) = semisimple_truncate(&x, &g, &o, &Cut::new(Element::Int(0))).unwrap();
        assert_eq!(u, bigraded(&[(0, 0, 1), (-2, 3, 2)]).unwrap());
        assert_eq!(l, bigraded(&[(-1, 0, 1), (1, -2, 1)]).unwrap());
        let (all, none) = semisimple_truncate(&u, &g, &o, &Cut::new(Element::Int(0))).unwrap();
        assert_eq!((all, none.is_zero()), (u, true));
    }

    #[test]
    fn t_structure_checks() {
        let samples = semisimple_samples(2, (-1, 1), (-1, 1));
        let o = HeartOracle::new(HeartRule::Semisimple);
        let e = ZSetMap::exchange(&o.index()).unwrap();
        assert!(verify_t_structure(&o, &e, &Cut::new(Element::Pair(0, 0)), &samples).unwrap().passed());
        let mut entries = BTreeMap::new();
        entries.insert((1, 0, 1), false);
        let bad = HeartOracle::new(HeartRule::Table(HeartTable { entries, default_vanishes: true }));
        let r = verify_t_structure(&bad, &e, &Cut::new(Element::Pair(1, 0)), &samples).unwrap();
        assert!(r.hom_failures.contains(&Witness { phi: Element::Pair(0, 1), psi: Element::Pair(1, 0), shift: 0 }));
    }
}
