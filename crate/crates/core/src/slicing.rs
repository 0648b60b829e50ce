//! Slicings described by orthogonality oracles, the compatibility
//! predicates, support-level pushforward, and the perverse t-structures.
//!
//! A slicing is never materialized as a category. It is an oracle that
//! answers whether `Hom(D_φ, D_ψ[n])` vanishes for slice labels `φ, ψ` and
//! a shift `n`; every predicate quantifies over slices, and vanishing on
//! slices propagates to the extension-closed subcategories they generate.
//!
//! For abelian Z-slicings the index is `Z x_lex Ẑ` and
//! `D_(n, φ) = ♥_φ[n]`, so `Hom(D_(n,φ), D_(m,ψ)[k]) = Hom(♥_φ, ♥_ψ[m + k - n])`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::perversity::{ExtPerversity, Perversity};
use crate::stepfn::ExtInt;
use crate::upperset::{upperset_to_perversity, UpperSet2D};
use crate::zposet::{Element, ZSetMap, ZToset};

/// Answers `Hom(D_φ, D_ψ[n]) = 0?`.
pub trait HomOracle: Send + Sync + fmt::Debug {
    /// The index toset of the slicing.
    fn index(&self) -> ZToset;

    fn vanishes(&self, phi: &Element, psi: &Element, n: i64) -> Result<bool>;

    fn describe(&self) -> String;
}

pub type SharedOracle = Arc<dyn HomOracle>;

/// A slicing: its index toset together with the oracle describing it.
#[derive(Debug, Clone)]
pub struct Slicing {
    pub oracle: SharedOracle,
}

impl Slicing {
    pub fn new(oracle: impl HomOracle + 'static) -> Self {
        Slicing { oracle: Arc::new(oracle) }
    }

    pub fn index(&self) -> ZToset {
        self.oracle.index()
    }

    pub fn orthogonal(&self, phi: &Element, psi: &Element, n: i64) -> Result<bool> {
        self.oracle.vanishes(phi, psi, n)
    }
}

/// A pair of labels and a shift at which an expected vanishing fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Witness {
    pub phi: Element,
    pub psi: Element,
    pub shift: i64,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hom(D_{}, D_{}[{}]) != 0", self.phi, self.psi, self.shift)
    }
}

fn pair_of(x: &Element) -> Result<(i64, i64)> {
    x.pair().ok_or_else(|| Error::domain(format!("{x} is not a pair label")))
}

// ---------------------------------------------------------------------------
// Abelian Z-slicings of a heart

/// Vanishing rule for `Hom(♥_φ, ♥_ψ[d])`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HeartRule {
    /// Nonzero only for `d = 0` and `φ = ψ`.
    Semisimple,
    /// Graded modules over a Koszul algebra: `Ext^d(M_φ, M_ψ) = 0` for `d > ψ - φ`.
    Koszul,
    /// Sheaves by codimension of support on a smooth variety of dimension
    /// `dim`: nonzero possible only for `0 <= d <= dim` and `d >= φ - ψ`.
    CoherentSupport { dim: i64 },
    /// A torsion pair `(♥_0, ♥_1)` on a hereditary heart: `Ext^{>= 2} = 0`
    /// and `Hom(♥_1, ♥_0) = 0`.
    TorsionPair,
    Table(HeartTable),
}

/// Finite table of `(φ, ψ, d) ↦ vanishes` with a default for unlisted triples.
/// The baseline rules (`d < 0`, and `d = 0` with `φ > ψ`) always vanish.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HeartTable {
    pub entries: BTreeMap<(i64, i64, i64), bool>,
    pub default_vanishes: bool,
}

impl HeartTable {
    pub fn lookup(&self, phi: i64, psi: i64, d: i64) -> bool {
        if baseline_vanishes(phi, psi, d) {
            return true;
        }
        *self.entries.get(&(phi, psi, d)).unwrap_or(&self.default_vanishes)
    }
}

/// `d < 0`, or `d = 0` with `φ > ψ`: vanishings every heart slicing has.
pub fn baseline_vanishes(phi: i64, psi: i64, d: i64) -> bool {
    d < 0 || (d == 0 && phi > psi)
}

impl HeartRule {
    pub fn vanishes(&self, phi: i64, psi: i64, d: i64) -> bool {
        match self {
            HeartRule::Semisimple => !(d == 0 && phi == psi),
            HeartRule::Koszul => d < 0 || d > psi - phi,
            HeartRule::CoherentSupport { dim } => !((0..=*dim).contains(&d) && d >= phi - psi),
            HeartRule::TorsionPair => !((0..=1).contains(&d) && !(phi == 1 && psi == 0 && d == 0)),
            HeartRule::Table(t) => t.lookup(phi, psi, d),
        }
    }

    fn name(&self) -> String {
        match self {
            HeartRule::Semisimple => "semisimple".into(),
            HeartRule::Koszul => "koszul".into(),
            HeartRule::CoherentSupport { dim } => format!("coherent-support(dim {dim})"),
            HeartRule::TorsionPair => "torsion-pair".into(),
            HeartRule::Table(t) => format!("table({} entries)", t.entries.len()),
        }
    }
}

/// An abelian Z-slicing, i.e. a slicing indexed by `Z x_lex W` where `W` is
/// Ẑ or a finite interval of it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeartOracle {
    pub rule: HeartRule,
    /// Admissible weights; `None` means all of Ẑ.
    pub weights: Option<(i64, i64)>,
}

impl HeartOracle {
    pub fn new(rule: HeartRule) -> Self {
        let weights = match &rule {
            HeartRule::CoherentSupport { dim } => Some((0, *dim)),
            HeartRule::TorsionPair => Some((0, 1)),
            _ => None,
        };
        HeartOracle { rule, weights }
    }

    pub fn with_weights(rule: HeartRule, lo: i64, hi: i64) -> Self {
        HeartOracle { rule, weights: Some((lo, hi)) }
    }

    pub fn shared(rule: HeartRule) -> SharedOracle {
        Arc::new(Self::new(rule))
    }
}

impl HomOracle for HeartOracle {
    fn index(&self) -> ZToset {
        let second = match self.weights {
            Some((lo, hi)) => ZToset::FiniteInterval { lo, hi },
            None => ZToset::IntTrivial,
        };
        ZToset::LexProduct(Box::new(ZToset::IntTranslation), Box::new(second))
    }

    fn vanishes(&self, phi: &Element, psi: &Element, n: i64) -> Result<bool> {
        let index = self.index();
        index.check(phi)?;
        index.check(psi)?;
        let (a, x) = pair_of(phi)?;
        let (b, y) = pair_of(psi)?;
        Ok(self.rule.vanishes(x, y, b + n - a))
    }

    fn describe(&self) -> String {
        self.rule.name()
    }
}

// ---------------------------------------------------------------------------
// Baric decompositions with t-structures on the pieces: index W x_lex Z

/// Beilinson–Soulé style vanishing pattern for `Hom(♥_i, ♥_j[d])`, `i < j`,
/// modelled on `K_{2(j-i)-d}(k)^{(j-i)}`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BeilinsonSouleConfig {
    /// Impose vanishing for `d <= 0`. When off, these groups are treated as
    /// possibly nonzero.
    pub impose_vanishing: bool,
    /// Borel's computation for number fields: in positive degree only
    /// `d = 1` survives. When off, every `d >= 1` is possibly nonzero.
    pub borel: bool,
    /// Weight/degree pairs `(j - i, d)` declared nonzero regardless of the flags.
    pub planted_nonzero: BTreeSet<(i64, i64)>,
}

impl BeilinsonSouleConfig {
    pub fn number_field() -> Self {
        BeilinsonSouleConfig { impose_vanishing: true, borel: true, planted_nonzero: BTreeSet::new() }
    }

    pub fn generic() -> Self {
        BeilinsonSouleConfig::default()
    }

    fn vanishes(&self, w: i64, d: i64) -> bool {
        if self.planted_nonzero.contains(&(w, d)) {
            return false;
        }
        if d <= 0 {
            self.impose_vanishing
        } else if self.borel {
            d != 1
        } else {
            false
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CrossRule {
    BeilinsonSoule(BeilinsonSouleConfig),
    /// Triples `(i, j, d)` with `i < j` where `Hom(♥_i, ♥_j[d])` is nonzero.
    Table(BTreeSet<(i64, i64, i64)>),
}

/// Pieces `D_i` of a semiorthogonal decomposition, each with a bounded
/// t-structure whose heart has `Ext^d` possibly nonzero for
/// `0 <= d <= piece_ext_degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaricOracle {
    /// Index range of the pieces; `None` means all of Ẑ.
    pub pieces: Option<(i64, i64)>,
    pub piece_ext_degree: i64,
    pub cross: CrossRule,
}

impl BaricOracle {
    pub fn beilinson_soule(config: BeilinsonSouleConfig) -> Self {
        BaricOracle { pieces: None, piece_ext_degree: 0, cross: CrossRule::BeilinsonSoule(config) }
    }

    /// Two pieces `{0, 1}` with hereditary hearts.
    pub fn two_pieces(nonzero: BTreeSet<(i64, i64, i64)>) -> Self {
        BaricOracle { pieces: Some((0, 1)), piece_ext_degree: 1, cross: CrossRule::Table(nonzero) }
    }

    /// `Hom(♥_i, ♥_j[d]) = 0?`.
    pub fn heart_vanishes(&self, i: i64, j: i64, d: i64) -> bool {
        if i > j {
            return true;
        }
        if i == j {
            return d < 0 || d > self.piece_ext_degree;
        }
        // Across pieces negative degrees are not forced to vanish.
        match &self.cross {
            CrossRule::BeilinsonSoule(cfg) => cfg.vanishes(j - i, d),
            CrossRule::Table(t) => !t.contains(&(i, j, d)),
        }
    }
}

impl HomOracle for BaricOracle {
    fn index(&self) -> ZToset {
        let first = match self.pieces {
            Some((lo, hi)) => ZToset::FiniteInterval { lo, hi },
            None => ZToset::IntTrivial,
        };
        ZToset::LexProduct(Box::new(first), Box::new(ZToset::IntTranslation))
    }

    fn vanishes(&self, phi: &Element, psi: &Element, n: i64) -> Result<bool> {
        let index = self.index();
        index.check(phi)?;
        index.check(psi)?;
        let (i, k) = pair_of(phi)?;
        let (j, l) = pair_of(psi)?;
        Ok(self.heart_vanishes(i, j, l + n - k))
    }

    fn describe(&self) -> String {
        match &self.cross {
            CrossRule::BeilinsonSoule(c) => format!(
                "beilinson-soule(vanishing {}, borel {}, planted {:?})",
                c.impose_vanishing, c.borel, c.planted_nonzero
            ),
            CrossRule::Table(t) => format!("baric-table({t:?})"),
        }
    }
}

// ---------------------------------------------------------------------------
// Oracles derived from other oracles

/// The slicing transported along an isomorphism of Z-tosets `g`:
/// `D'_{g(φ)} = D_φ`.
#[derive(Debug, Clone)]
pub struct TransportedOracle {
    pub base: SharedOracle,
    pub forward: ZSetMap,
    pub inverse: ZSetMap,
}

impl TransportedOracle {
    pub fn new(base: SharedOracle, forward: ZSetMap, inverse: ZSetMap) -> Result<Self> {
        if forward.codomain != inverse.domain || inverse.codomain != forward.domain {
            return Err(Error::domain("transport maps are not mutually inverse in shape"));
        }
        Ok(TransportedOracle { base, forward, inverse })
    }

    /// `β_*` for an abelian Z-slicing.
    pub fn beta(base: SharedOracle) -> Result<Self> {
        Self::new(base, ZSetMap::beta(), ZSetMap::beta_inverse())
    }

    /// `e_!` along the exchange map, which is a bijection.
    pub fn exchange(base: SharedOracle) -> Result<Self> {
        let fwd = ZSetMap::exchange(&base.index())?;
        let inv = ZSetMap::exchange(&fwd.codomain)?;
        Self::new(base, fwd, inv)
    }
}

impl HomOracle for TransportedOracle {
    fn index(&self) -> ZToset {
        self.forward.codomain.clone()
    }

    fn vanishes(&self, phi: &Element, psi: &Element, n: i64) -> Result<bool> {
        self.base.vanishes(&self.inverse.apply(phi)?, &self.inverse.apply(psi)?, n)
    }

    fn describe(&self) -> String {
        format!("{}_*({})", self.forward.name(), self.base.describe())
    }
}

/// `f_!` of a slicing, with slices `⟨D_φ⟩_{f(φ) = j}`, restricted to a finite
/// window of source labels.
#[derive(Debug, Clone)]
pub struct PushforwardOracle {
    pub base: SharedOracle,
    pub f: ZSetMap,
    pub source_window: Vec<Element>,
}

impl PushforwardOracle {
    fn fibre(&self, j: &Element) -> Result<Vec<Element>> {
        let mut out = Vec::new();
        for x in &self.source_window {
            if self.f.apply(x)? == *j {
                out.push(*x);
            }
        }
        Ok(out)
    }
}

impl HomOracle for PushforwardOracle {
    fn index(&self) -> ZToset {
        self.f.codomain.clone()
    }

    fn vanishes(&self, phi: &Element, psi: &Element, n: i64) -> Result<bool> {
        let (a, b) = (self.fibre(phi)?, self.fibre(psi)?);
        for x in &a {
            for y in &b {
                if !self.base.vanishes(x, y, n)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn describe(&self) -> String {
        format!("{}_!({})", self.f.name(), self.base.describe())
    }
}

// ---------------------------------------------------------------------------
// Compatibility

/// `f`-compatibility on a window: for all `φ <= ψ` with `f(φ) > f(ψ)`, both
/// `Hom(D_φ, D_ψ)` and `Hom(D_φ, D_ψ[1])` vanish. Returns the first failure.
pub fn f_compatibility_witness(oracle: &dyn HomOracle, f: &ZSetMap, window: &[Element]) -> Result<Option<Witness>> {
    let index = oracle.index();
    let mut labelled = Vec::with_capacity(window.len());
    for x in window {
        index.check(x)?;
        f.domain.check(x)?;
        if f.defined_at(x) {
            labelled.push((*x, f.apply(x)?));
        }
    }
    labelled.sort();
    for (i, (phi, fphi)) in labelled.iter().enumerate() {
        for (psi, fpsi) in &labelled[i..] {
            if fphi > fpsi {
                for shift in 0..=1 {
                    if !oracle.vanishes(phi, psi, shift)? {
                        return Ok(Some(Witness { phi: *phi, psi: *psi, shift }));
                    }
                }
            }
        }
    }
    Ok(None)
}

pub fn is_f_compatible(oracle: &dyn HomOracle, f: &ZSetMap, window: &[Element]) -> Result<bool> {
    Ok(f_compatibility_witness(oracle, f, window)?.is_none())
}

/// Weights and shift range over which heart-level predicates are checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeartWindow {
    pub weights: Vec<i64>,
    pub shifts: (i64, i64),
}

impl HeartWindow {
    pub fn new(weights: impl IntoIterator<Item = i64>, shifts: (i64, i64)) -> Self {
        HeartWindow { weights: weights.into_iter().collect(), shifts }
    }

    /// Labels `(n, φ)` with `n` in `[lo, hi]` and `φ` among the weights.
    pub fn labels(&self, lo: i64, hi: i64) -> Vec<Element> {
        let mut out: Vec<Element> =
            (lo..=hi).flat_map(|n| self.weights.iter().map(move |&w| Element::Pair(n, w))).collect();
        out.sort();
        out
    }
}

impl fmt::Display for HeartWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "weights {:?}, shifts [{}, {}]", self.weights, self.shifts.0, self.shifts.1)
    }
}

/// `Hom(♥_φ, ♥_ψ[d]) = 0?` read off a slicing indexed by `Z x_lex W`.
pub fn heart_vanishes(oracle: &dyn HomOracle, phi: i64, psi: i64, d: i64) -> Result<bool> {
    oracle.vanishes(&Element::Pair(0, phi), &Element::Pair(0, psi), d)
}

fn heart_witness<F>(oracle: &dyn HomOracle, w: &HeartWindow, required: F) -> Result<Option<Witness>>
where
    F: Fn(i64, i64, i64) -> bool,
{
    for &phi in &w.weights {
        for &psi in &w.weights {
            for d in w.shifts.0..=w.shifts.1 {
                if required(phi, psi, d) && !heart_vanishes(oracle, phi, psi, d)? {
                    return Ok(Some(Witness { phi: Element::Pair(0, phi), psi: Element::Pair(0, psi), shift: d }));
                }
            }
        }
    }
    Ok(None)
}

/// Perverse: `♥_φ ⊠ ♥_ψ[d]` whenever `φ > ψ + d`.
pub fn perverse_witness(oracle: &dyn HomOracle, w: &HeartWindow) -> Result<Option<Witness>> {
    heart_witness(oracle, w, |phi, psi, d| phi > psi + d)
}

/// Grading: perverse, and `♥_φ ⊠ ♥_ψ[d]` whenever `φ = ψ + d` with `d >= 2`.
pub fn grading_witness(oracle: &dyn HomOracle, w: &HeartWindow) -> Result<Option<Witness>> {
    heart_witness(oracle, w, |phi, psi, d| phi > psi + d || (phi == psi + d && d >= 2))
}

/// Gluable: `♥_φ ⊠ ♥_ψ[d]` whenever `φ > ψ` and `d > 0`.
pub fn gluable_witness(oracle: &dyn HomOracle, w: &HeartWindow) -> Result<Option<Witness>> {
    heart_witness(oracle, w, |phi, psi, d| phi > psi && d > 0)
}

pub fn is_perverse(oracle: &dyn HomOracle, w: &HeartWindow) -> Result<bool> {
    Ok(perverse_witness(oracle, w)?.is_none())
}

pub fn is_grading(oracle: &dyn HomOracle, w: &HeartWindow) -> Result<bool> {
    Ok(grading_witness(oracle, w)?.is_none())
}

pub fn is_gluable(oracle: &dyn HomOracle, w: &HeartWindow) -> Result<bool> {
    Ok(gluable_witness(oracle, w)?.is_none())
}

/// Gluability as exchange-compatibility on the labels `[0, hi - 1] x weights`,
/// which consults exactly the shifts `0..=hi`.
pub fn gluable_via_exchange(oracle: &dyn HomOracle, w: &HeartWindow) -> Result<Option<Witness>> {
    let e = ZSetMap::exchange(&oracle.index())?;
    f_compatibility_witness(oracle, &e, &w.labels(0, (w.shifts.1 - 1).max(0)))
}

/// `α`-compatibility of the slicing and exchange-compatibility of its
/// transport along `β`, on corresponding windows. The two answers agree.
pub fn alpha_beta_cross_check(oracle: SharedOracle, window: &[Element]) -> Result<(Option<Witness>, Option<Witness>)> {
    let alpha = f_compatibility_witness(oracle.as_ref(), &ZSetMap::alpha(), window)?;
    let beta = ZSetMap::beta();
    let transported = TransportedOracle::beta(oracle)?;
    let image: Vec<Element> = window.iter().map(|x| beta.apply(x)).collect::<Result<_>>()?;
    let e = ZSetMap::exchange(&ZToset::z_lex_z())?;
    let glued = f_compatibility_witness(&transported, &e, &image)?;
    Ok((alpha, glued))
}

/// `g_p`-compatibility on a label window.
pub fn gp_compatibility_witness(oracle: &dyn HomOracle, p: &Perversity, window: &[Element]) -> Result<Option<Witness>> {
    let g = ZSetMap::g(&ExtPerversity::Finite(p.clone()))?;
    f_compatibility_witness(oracle, &g, window)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImplicationReport {
    pub window: HeartWindow,
    pub gluable: Option<Witness>,
    pub grading: Option<Witness>,
    pub perverse: Option<Witness>,
    /// Exchange-compatibility, which must agree with `gluable`.
    pub exchange: Option<Witness>,
}

impl ImplicationReport {
    /// Descriptions of every violated implication in the chain
    /// gluable ⇒ grading ⇒ perverse, and of disagreement between the two
    /// gluability tests.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let (None, Some(w)) = (&self.gluable, &self.grading) {
            out.push(format!("gluable but not grading: {w}"));
        }
        if let (None, Some(w)) = (&self.grading, &self.perverse) {
            out.push(format!("grading but not perverse: {w}"));
        }
        if self.gluable.is_none() != self.exchange.is_none() {
            out.push("heart-level gluability disagrees with exchange-compatibility".into());
        }
        out
    }
}

pub fn implication_check(oracle: &dyn HomOracle, w: &HeartWindow) -> Result<ImplicationReport> {
    Ok(ImplicationReport {
        window: w.clone(),
        gluable: gluable_witness(oracle, w)?,
        grading: grading_witness(oracle, w)?,
        perverse: perverse_witness(oracle, w)?,
        exchange: gluable_via_exchange(oracle, w)?,
    })
}

// ---------------------------------------------------------------------------
// Supports and pushforward

/// The labels `φ` with `H^φ(X) != 0`, with multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct SupportObject {
    entries: BTreeMap<Element, u32>,
}

impl SupportObject {
    pub fn new(items: impl IntoIterator<Item = (Element, u32)>) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (label, m) in items {
            if m == 0 {
                return Err(Error::domain(format!("zero multiplicity at {label}")));
            }
            *entries.entry(label).or_insert(0) += m;
        }
        Ok(SupportObject { entries })
    }

    pub fn zero() -> Self {
        SupportObject::default()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn multiplicity(&self, label: &Element) -> u32 {
        self.entries.get(label).copied().unwrap_or(0)
    }

    pub fn labels(&self) -> Vec<Element> {
        self.entries.keys().copied().collect()
    }

    /// Entries in strictly decreasing label order, as in an HN tower.
    pub fn descending(&self) -> Vec<(Element, u32)> {
        self.entries.iter().rev().map(|(k, v)| (*k, *v)).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Element, &u32)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_multiplicity(&self) -> u32 {
        self.entries.values().sum()
    }

    pub fn filter(&self, keep: impl Fn(&Element) -> bool) -> SupportObject {
        SupportObject { entries: self.entries.iter().filter(|(k, _)| keep(k)).map(|(k, v)| (*k, *v)).collect() }
    }

    pub fn direct_sum(&self, other: &SupportObject) -> SupportObject {
        let mut entries = self.entries.clone();
        for (k, v) in &other.entries {
            *entries.entry(*k).or_insert(0) += v;
        }
        SupportObject { entries }
    }
}

impl fmt::Display for SupportObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (k, v)) in self.descending().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k} x{v}")?;
        }
        write!(f, "}}")
    }
}

/// The cohomology support of `X` for `f_!` of the slicing.
pub fn pushforward_support(oracle: &dyn HomOracle, f: &ZSetMap, x: &SupportObject) -> Result<SupportObject> {
    if let Some(w) = f_compatibility_witness(oracle, f, &x.labels())? {
        return Err(Error::Incompatible { phi: w.phi, psi: w.psi, shift: w.shift });
    }
    let mut entries: BTreeMap<Element, u32> = BTreeMap::new();
    for (label, m) in x.iter() {
        *entries.entry(f.apply(label)?).or_insert(0) += m;
    }
    Ok(SupportObject { entries })
}

/// `(g ∘ f)_! = g_! f_!` on the given supports. The compatibility
/// preconditions are checked first and reported as `Error::Precondition`.
pub fn functoriality_check(
    oracle: SharedOracle,
    f: &ZSetMap,
    g: &ZSetMap,
    samples: &[SupportObject],
    source_window: &[Element],
) -> Result<bool> {
    if let Some(w) = f_compatibility_witness(oracle.as_ref(), f, source_window)? {
        return Err(Error::Precondition(format!("slicing is not f-compatible: {w}")));
    }
    let pushed = PushforwardOracle { base: oracle.clone(), f: f.clone(), source_window: source_window.to_vec() };
    let mut image: Vec<Element> = source_window.iter().map(|x| f.apply(x)).collect::<Result<_>>()?;
    image.sort();
    image.dedup();
    if let Some(w) = f_compatibility_witness(&pushed, g, &image)? {
        return Err(Error::Precondition(format!("f_! of the slicing is not g-compatible: {w}")));
    }
    let gf = ZSetMap::compose(f.clone(), g.clone())?;
    if f_compatibility_witness(oracle.as_ref(), &gf, source_window)?.is_some() {
        return Ok(false);
    }
    for x in samples {
        let direct = pushforward_support(oracle.as_ref(), &gf, x)?;
        let staged = pushforward_support(&pushed, g, &pushforward_support(oracle.as_ref(), f, x)?)?;
        if direct != staged {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Perverse t-structures

/// The t-structure `(γ_p)_!` of an abelian Z-slicing, described on labels:
/// `(n, φ)` is in the upper class iff `n + p(φ) >= 0`, in the heart iff
/// `n + p(φ) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TStructureDescriptor {
    pub perversity: ExtPerversity,
}

impl TStructureDescriptor {
    fn level(&self, n: i64, phi: i64) -> ExtInt {
        self.perversity.eval(phi) + n
    }

    pub fn in_upper(&self, n: i64, phi: i64) -> bool {
        self.level(n, phi) >= ExtInt::Fin(0)
    }

    pub fn in_lower(&self, n: i64, phi: i64) -> bool {
        !self.in_upper(n, phi)
    }

    pub fn in_heart(&self, n: i64, phi: i64) -> bool {
        self.level(n, phi) == ExtInt::Fin(0)
    }

    /// Whether the whole object lies in the heart; otherwise the offending labels.
    pub fn heart_membership(&self, x: &SupportObject) -> Result<(bool, Vec<Element>)> {
        let mut bad = Vec::new();
        for label in x.labels() {
            let (n, phi) = pair_of(&label)?;
            if !self.in_heart(n, phi) {
                bad.push(label);
            }
        }
        Ok((bad.is_empty(), bad))
    }
}

/// Argument of Ψ.
#[derive(Debug, Clone)]
pub enum PsiArg {
    Perversity(ExtPerversity),
    UpperSet(UpperSet2D),
}

/// Ψ with its preconditions checked on the window: the slicing is grading,
/// or perverse with a strict perversity. A grading failure that is rescued
/// by strictness is returned as a warning.
pub fn psi(oracle: &dyn HomOracle, arg: &PsiArg, w: &HeartWindow) -> Result<(TStructureDescriptor, Vec<String>)> {
    let p = match arg {
        PsiArg::Perversity(p) => p.clone(),
        PsiArg::UpperSet(u) => upperset_to_perversity(u),
    };
    let mut warnings = Vec::new();
    if let Some(wit) = grading_witness(oracle, w)? {
        if let Some(pw) = perverse_witness(oracle, w)? {
            return Err(Error::Precondition(format!("slicing is not perverse on {w}: {pw}")));
        }
        match &p {
            ExtPerversity::Finite(q) if !q.is_strict() => {
                return Err(Error::Precondition(format!(
                    "slicing is only perverse on {w} ({wit}) and the perversity is not strict"
                )));
            }
            _ => warnings.push(format!("slicing is not grading on {w} ({wit}); relying on strictness")),
        }
    }
    Ok((TStructureDescriptor { perversity: p }, warnings))
}

/// Heart membership for `♥_p`: every support label `(n, φ)` has `p(φ) = -n`.
pub fn perverse_heart_membership(p: &Perversity, x: &SupportObject) -> Result<(bool, Vec<Element>)> {
    TStructureDescriptor { perversity: ExtPerversity::Finite(p.clone()) }.heart_membership(x)
}

/// The tilt of the heart by the torsion pair with torsion part the weights
/// `>= k`: `X[1]` has its degree-0 components in weights `>= k` and its
/// degree-1 components in weights `< k`.
pub fn tilt_predicate(k: i64, n: i64, phi: i64) -> bool {
    let shifted = n + 1;
    (shifted == 0 && phi >= k) || (shifted == 1 && phi < k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Element {
        Element::Pair(x, y)
    }

    fn window() -> HeartWindow {
        HeartWindow::new(-3..=3, (-4, 4))
    }

    #[test]
    fn monotone_maps_are_always_compatible() {
        let planted = HeartTable { entries: BTreeMap::new(), default_vanishes: false };
        let o = HeartOracle::new(HeartRule::Table(planted));
        let labels = window().labels(-2, 2);
        let proj = ZSetMap::projection_first(&o.index()).unwrap();
        assert!(is_f_compatible(&o, &proj, &labels).unwrap());
        assert!(is_f_compatible(&o, &ZSetMap::identity(o.index()), &labels).unwrap());
    }

    #[test]
    fn semisimple_is_everything() {
        let o = HeartOracle::new(HeartRule::Semisimple);
        let r = implication_check(&o, &window()).unwrap();
        assert!(r.gluable.is_none() && r.grading.is_none() && r.perverse.is_none());
        let e = ZSetMap::exchange(&o.index()).unwrap();
        assert!(is_f_compatible(&o, &e, &window().labels(-2, 2)).unwrap());
    }

    #[test]
    fn planted_hom_breaks_exchange_compatibility() {
        let mut entries = BTreeMap::new();
        entries.insert((1, 0, 1), false);
        let o = HeartOracle::new(HeartRule::Table(HeartTable { entries, default_vanishes: true }));
        let e = ZSetMap::exchange(&o.index()).unwrap();
        let w = f_compatibility_witness(&o, &e, &window().labels(-1, 1)).unwrap().unwrap();
        assert_eq!((w.phi.pair().unwrap().1, w.psi.pair().unwrap().1), (1, 0));
        assert!(!is_gluable(&o, &window()).unwrap());
    }

    #[test]
    fn named_oracles() {
        let w = window();
        assert!(is_gluable(&HeartOracle::new(HeartRule::Koszul), &w).unwrap());
        let tp = HeartOracle::new(HeartRule::TorsionPair);
        let tw = HeartWindow::new(0..=1, (-4, 4));
        assert!(is_grading(&tp, &tw).unwrap());
        assert!(!is_gluable(&tp, &tw).unwrap());
        let coh = HeartOracle::new(HeartRule::CoherentSupport { dim: 3 });
        let cw = HeartWindow::new(0..=3, (-4, 4));
        assert!(is_perverse(&coh, &cw).unwrap());
        let wit = grading_witness(&coh, &cw).unwrap().unwrap();
        let (phi, psi) = (wit.phi.pair().unwrap().1, wit.psi.pair().unwrap().1);
        assert!(phi == psi + wit.shift && wit.shift >= 2);
    }

    #[test]
    fn labels_outside_finite_weights_are_domain_errors() {
        let coh = HeartOracle::new(HeartRule::CoherentSupport { dim: 2 });
        assert!(coh.vanishes(&p(0, 5), &p(0, 0), 0).is_err());
    }

    #[test]
    fn beilinson_soule_gluability_tracks_the_flag() {
        let window = ZToset::zhat_lex_z().window(-3, 3);
        for flag in [true, false] {
            let cfg = BeilinsonSouleConfig { impose_vanishing: flag, ..BeilinsonSouleConfig::number_field() };
            let o = BaricOracle::beilinson_soule(cfg);
            let e = ZSetMap::exchange(&o.index()).unwrap();
            assert_eq!(is_f_compatible(&o, &e, &window).unwrap(), flag);
        }
        let mut cfg = BeilinsonSouleConfig::number_field();
        cfg.planted_nonzero.insert((1, 0));
        let o = BaricOracle::beilinson_soule(cfg);
        let e = ZSetMap::exchange(&o.index()).unwrap();
        assert!(!is_f_compatible(&o, &e, &window).unwrap());
    }

    #[test]
    fn pushforward_examples() {
        let o = HeartOracle::new(HeartRule::Koszul);
        let x = SupportObject::new([(p(0, 3), 1), (p(0, 5), 1), (p(1, 2), 1)]).unwrap();
        let proj = ZSetMap::projection_first(&o.index()).unwrap();
        let y = pushforward_support(&o, &proj, &x).unwrap();
        assert_eq!(y, SupportObject::new([(Element::Int(0), 2), (Element::Int(1), 1)]).unwrap());
        assert_eq!(pushforward_support(&o, &ZSetMap::identity(o.index()), &x).unwrap(), x);
        let diag = SupportObject::new([(p(0, 0), 1), (p(-1, 1), 1), (p(-2, 2), 1)]).unwrap();
        let gamma = ZSetMap::gamma(&Perversity::identity().into()).unwrap();
        assert_eq!(pushforward_support(&o, &gamma, &diag).unwrap(), SupportObject::new([(Element::Int(0), 3)]).unwrap());
    }

    #[test]
    fn heart_membership_examples() {
        let diag = SupportObject::new((0..3).map(|n| (p(-n, n), 1))).unwrap();
        assert!(perverse_heart_membership(&Perversity::identity(), &diag).unwrap().0);
        let flat = SupportObject::new((-2..3).map(|n| (p(0, n), 1))).unwrap();
        assert!(perverse_heart_membership(&Perversity::zero(), &flat).unwrap().0);
        let (ok, bad) = perverse_heart_membership(&Perversity::zero(), &SupportObject::new([(p(1, 0), 1)]).unwrap()).unwrap();
        assert!(!ok);
        assert_eq!(bad, vec![p(1, 0)]);
    }

    #[test]
    fn psi_extremes_and_preconditions() {
        let o = HeartOracle::new(HeartRule::Koszul);
        let (top, _) = psi(&o, &PsiArg::UpperSet(UpperSet2D::full()), &window()).unwrap();
        let (bottom, _) = psi(&o, &PsiArg::UpperSet(UpperSet2D::empty()), &window()).unwrap();
        assert!(top.in_upper(-100, 0) && !bottom.in_upper(100, 0));
        let coh = HeartOracle::new(HeartRule::CoherentSupport { dim: 3 });
        let cw = HeartWindow::new(0..=3, (-4, 4));
        assert!(psi(&coh, &PsiArg::Perversity(Perversity::identity().into()), &cw).is_err());
        let (_, warnings) = psi(&coh, &PsiArg::Perversity(Perversity::middle().into()), &cw).unwrap();
        assert_eq!(warnings.len(), 1);
    }
}
