//! Z-tosets, their elements, and Z-equivariant maps between them.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::perversity::{ExtPerversity, Perversity};

/// An element of one of the supported Z-tosets.
///
/// Lexicographic products are restricted to two atomic factors, so an
/// element is either a single integer or a pair. The derived ordering on
/// `Pair` is the lexicographic one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Int(i64),
    Pair(i64, i64),
}

impl Element {
    pub fn pair(self) -> Option<(i64, i64)> {
        match self {
            Element::Pair(a, b) => Some((a, b)),
            Element::Int(_) => None,
        }
    }

    pub fn int(self) -> Option<i64> {
        match self {
            Element::Int(a) => Some(a),
            Element::Pair(..) => None,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Int(a) => write!(f, "{a}"),
            Element::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ZToset {
    /// Z with the translation action.
    IntTranslation,
    /// Z with the trivial action (written Ẑ).
    IntTrivial,
    /// `{lo, ..., hi}` with the trivial action, as a sub-toset of Ẑ.
    FiniteInterval { lo: i64, hi: i64 },
    /// Lexicographic product with the diagonal action.
    LexProduct(Box<ZToset>, Box<ZToset>),
}

impl ZToset {
    pub fn lex(left: ZToset, right: ZToset) -> Result<ZToset> {
        if matches!(left, ZToset::LexProduct(..)) || matches!(right, ZToset::LexProduct(..)) {
            return Err(Error::domain("nested lexicographic products are not supported"));
        }
        Ok(ZToset::LexProduct(Box::new(left), Box::new(right)))
    }

    /// Z x_lex Z.
    pub fn z_lex_z() -> ZToset {
        ZToset::LexProduct(Box::new(ZToset::IntTranslation), Box::new(ZToset::IntTranslation))
    }

    /// Z x_lex Ẑ, the index set of abelian Z-slicings.
    pub fn z_lex_zhat() -> ZToset {
        ZToset::LexProduct(Box::new(ZToset::IntTranslation), Box::new(ZToset::IntTrivial))
    }

    /// Ẑ x_lex Z, the index set of baric decompositions with a t-structure on each piece.
    pub fn zhat_lex_z() -> ZToset {
        ZToset::LexProduct(Box::new(ZToset::IntTrivial), Box::new(ZToset::IntTranslation))
    }

    pub fn is_atomic(&self) -> bool {
        !matches!(self, ZToset::LexProduct(..))
    }

    fn atomic_contains(&self, v: i64) -> bool {
        match self {
            ZToset::FiniteInterval { lo, hi } => (*lo..=*hi).contains(&v),
            _ => true,
        }
    }

    fn atomic_shift(&self, v: i64, n: i64) -> i64 {
        match self {
            ZToset::IntTranslation => v + n,
            _ => v,
        }
    }

    pub fn contains(&self, x: &Element) -> bool {
        match (self, x) {
            (ZToset::LexProduct(l, r), Element::Pair(a, b)) => l.atomic_contains(*a) && r.atomic_contains(*b),
            (ZToset::LexProduct(..), Element::Int(_)) => false,
            (_, Element::Int(a)) => self.atomic_contains(*a),
            (_, Element::Pair(..)) => false,
        }
    }

    pub fn check(&self, x: &Element) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::domain(format!("{x} is not an element of {self}")))
        }
    }

    pub fn compare(&self, x: &Element, y: &Element) -> Result<Ordering> {
        self.check(x)?;
        self.check(y)?;
        Ok(x.cmp(y))
    }

    pub fn shift(&self, x: &Element, n: i64) -> Result<Element> {
        self.check(x)?;
        let out = match (self, x) {
            (ZToset::LexProduct(l, r), Element::Pair(a, b)) => Element::Pair(l.atomic_shift(*a, n), r.atomic_shift(*b, n)),
            (_, Element::Int(a)) => Element::Int(self.atomic_shift(*a, n)),
            _ => unreachable!("checked above"),
        };
        Ok(out)
    }

    /// All elements whose integer coordinates lie in `[lo, hi]`, intersected
    /// with the toset, in increasing order.
    pub fn window(&self, lo: i64, hi: i64) -> Vec<Element> {
        let mut out: Vec<Element> = match self {
            ZToset::LexProduct(..) => (lo..=hi)
                .flat_map(|a| (lo..=hi).map(move |b| Element::Pair(a, b)))
                .collect(),
            _ => (lo..=hi).map(Element::Int).collect(),
        };
        out.retain(|x| self.contains(x));
        out.sort();
        out
    }
}

impl fmt::Display for ZToset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZToset::IntTranslation => write!(f, "Z"),
            ZToset::IntTrivial => write!(f, "Zhat"),
            ZToset::FiniteInterval { lo, hi } => write!(f, "{{{lo}..{hi}}}"),
            ZToset::LexProduct(l, r) => write!(f, "{l} x_lex {r}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapRule {
    Identity,
    /// `(a, b) ↦ (b, a)`.
    Exchange,
    /// `(n, m) ↦ (n + m, -m)` on Z x_lex Ẑ.
    Alpha,
    /// `(n, m) ↦ (n, n + m)`, Z x_lex Ẑ → Z x_lex Z.
    Beta,
    /// `(n, m) ↦ (n, m - n)`, Z x_lex Z → Z x_lex Ẑ.
    BetaInverse,
    /// `(n, φ) ↦ n + p(φ)`.
    Gamma(Perversity),
    /// `(n, φ) ↦ (n + p(φ), -p(φ))`.
    G(Perversity),
    ProjectionFirst,
    /// `then ∘ first`.
    Compose(Box<ZSetMap>, Box<ZSetMap>),
    /// A finite table; elements outside it are outside the domain of the map.
    Table(BTreeMap<Element, Element>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZSetMap {
    pub domain: ZToset,
    pub codomain: ZToset,
    pub rule: MapRule,
}

fn finite(p: &ExtPerversity) -> Result<Perversity> {
    p.as_finite()
        .cloned()
        .ok_or_else(|| Error::domain(format!("the infinite perversity {p} does not define an integer-valued map")))
}

impl ZSetMap {
    pub fn identity(t: ZToset) -> ZSetMap {
        ZSetMap { domain: t.clone(), codomain: t, rule: MapRule::Identity }
    }

    /// The exchange map `J1 x_lex J2 → J2 x_lex J1`.
    pub fn exchange(domain: &ZToset) -> Result<ZSetMap> {
        match domain {
            ZToset::LexProduct(l, r) => Ok(ZSetMap {
                domain: domain.clone(),
                codomain: ZToset::LexProduct(r.clone(), l.clone()),
                rule: MapRule::Exchange,
            }),
            _ => Err(Error::domain("the exchange map needs a lexicographic product")),
        }
    }

    pub fn alpha() -> ZSetMap {
        ZSetMap { domain: ZToset::z_lex_zhat(), codomain: ZToset::z_lex_zhat(), rule: MapRule::Alpha }
    }

    pub fn beta() -> ZSetMap {
        ZSetMap { domain: ZToset::z_lex_zhat(), codomain: ZToset::z_lex_z(), rule: MapRule::Beta }
    }

    pub fn beta_inverse() -> ZSetMap {
        ZSetMap { domain: ZToset::z_lex_z(), codomain: ZToset::z_lex_zhat(), rule: MapRule::BetaInverse }
    }

    pub fn gamma(p: &ExtPerversity) -> Result<ZSetMap> {
        Ok(ZSetMap { domain: ZToset::z_lex_zhat(), codomain: ZToset::IntTranslation, rule: MapRule::Gamma(finite(p)?) })
    }

    pub fn g(p: &ExtPerversity) -> Result<ZSetMap> {
        Ok(ZSetMap { domain: ZToset::z_lex_zhat(), codomain: ZToset::z_lex_zhat(), rule: MapRule::G(finite(p)?) })
    }

    pub fn projection_first(domain: &ZToset) -> Result<ZSetMap> {
        match domain {
            ZToset::LexProduct(l, _) => Ok(ZSetMap {
                domain: domain.clone(),
                codomain: (**l).clone(),
                rule: MapRule::ProjectionFirst,
            }),
            _ => Err(Error::domain("projection needs a lexicographic product")),
        }
    }

    /// `then ∘ first`.
    pub fn compose(first: ZSetMap, then: ZSetMap) -> Result<ZSetMap> {
        if first.codomain != then.domain {
            return Err(Error::domain(format!(
                "cannot compose: codomain {} differs from domain {}",
                first.codomain, then.domain
            )));
        }
        Ok(ZSetMap {
            domain: first.domain.clone(),
            codomain: then.codomain.clone(),
            rule: MapRule::Compose(Box::new(first), Box::new(then)),
        })
    }

    pub fn table(domain: ZToset, codomain: ZToset, entries: BTreeMap<Element, Element>) -> Result<ZSetMap> {
        for (x, y) in &entries {
            domain.check(x)?;
            codomain.check(y)?;
        }
        Ok(ZSetMap { domain, codomain, rule: MapRule::Table(entries) })
    }

    pub fn name(&self) -> String {
        match &self.rule {
            MapRule::Identity => "identity".into(),
            MapRule::Exchange => "exchange".into(),
            MapRule::Alpha => "alpha".into(),
            MapRule::Beta => "beta".into(),
            MapRule::BetaInverse => "beta_inverse".into(),
            MapRule::Gamma(_) => "gamma_p".into(),
            MapRule::G(_) => "g_p".into(),
            MapRule::ProjectionFirst => "projection_first".into(),
            MapRule::Compose(f, g) => format!("{} . {}", g.name(), f.name()),
            MapRule::Table(_) => "table".into(),
        }
    }

    /// Whether `x` lies in the domain of definition (tables are partial).
    pub fn defined_at(&self, x: &Element) -> bool {
        match &self.rule {
            MapRule::Table(t) => t.contains_key(x),
            MapRule::Compose(f, g) => f.defined_at(x) && f.apply(x).map(|y| g.defined_at(&y)).unwrap_or(false),
            _ => self.domain.contains(x),
        }
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        self.domain.check(x)?;
        let pair = || x.pair().expect("lexicographic domain");
        let out = match &self.rule {
            MapRule::Identity => *x,
            MapRule::Exchange => {
                let (a, b) = pair();
                Element::Pair(b, a)
            }
            MapRule::Alpha => {
                let (n, m) = pair();
                Element::Pair(n + m, -m)
            }
            MapRule::Beta => {
                let (n, m) = pair();
                Element::Pair(n, n + m)
            }
            MapRule::BetaInverse => {
                let (n, m) = pair();
                Element::Pair(n, m - n)
            }
            MapRule::Gamma(p) => {
                let (n, phi) = pair();
                Element::Int(n + p.eval(phi))
            }
            MapRule::G(p) => {
                let (n, phi) = pair();
                let v = p.eval(phi);
                Element::Pair(n + v, -v)
            }
            MapRule::ProjectionFirst => Element::Int(pair().0),
            MapRule::Compose(f, g) => return g.apply(&f.apply(x)?),
            MapRule::Table(t) => {
                *t.get(x).ok_or_else(|| Error::domain(format!("{x} is outside the table of the map")))?
            }
        };
        Ok(out)
    }

    /// Checks `f(x + 1) = f(x) + 1` at every `x` of the window where both
    /// sides are defined. Returns the first failing `x`.
    pub fn verify_equivariance(&self, window: &[Element]) -> Result<Option<Element>> {
        for x in window {
            if !self.defined_at(x) {
                continue;
            }
            let x1 = self.domain.shift(x, 1)?;
            if !self.domain.contains(&x1) || !self.defined_at(&x1) {
                continue;
            }
            let lhs = self.apply(&x1)?;
            let rhs = self.codomain.shift(&self.apply(x)?, 1)?;
            if lhs != rhs {
                return Ok(Some(*x));
            }
        }
        Ok(None)
    }

    /// A pair `x <= y` in the window with `f(x) > f(y)`, if any.
    pub fn monotonicity_witness(&self, window: &[Element]) -> Result<Option<(Element, Element)>> {
        let defined: Vec<(Element, Element)> = window
            .iter()
            .filter(|x| self.defined_at(x))
            .map(|x| Ok((*x, self.apply(x)?)))
            .collect::<Result<_>>()?;
        for (x, fx) in &defined {
            for (y, fy) in &defined {
                if x <= y && fx > fy {
                    return Ok(Some((*x, *y)));
                }
            }
        }
        Ok(None)
    }

    pub fn is_monotone_on(&self, window: &[Element]) -> Result<bool> {
        Ok(self.monotonicity_witness(window)?.is_none())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_and_product_orders_differ() {
        let t = ZToset::z_lex_z();
        let (x, y) = (Element::Pair(1, 5), Element::Pair(2, 0));
        assert_eq!(t.compare(&x, &y).unwrap(), Ordering::Less);
        assert_eq!(t.compare(&x, &x).unwrap(), Ordering::Equal);
    }

    #[test]
    fn shifts() {
        assert_eq!(ZToset::IntTrivial.shift(&Element::Int(7), 3).unwrap(), Element::Int(7));
        assert_eq!(ZToset::z_lex_zhat().shift(&Element::Pair(2, 5), 1).unwrap(), Element::Pair(3, 5));
        assert_eq!(ZToset::z_lex_z().shift(&Element::Pair(2, 5), 1).unwrap(), Element::Pair(3, 6));
    }

    #[test]
    fn finite_interval_rejects_outsiders() {
        let t = ZToset::FiniteInterval { lo: 0, hi: 1 };
        assert!(t.compare(&Element::Int(0), &Element::Int(2)).is_err());
        assert!(ZToset::lex(t.clone(), ZToset::lex(t.clone(), t).unwrap()).is_err());
    }

    #[test]
    fn named_maps() {
        let e = ZSetMap::exchange(&ZToset::z_lex_z()).unwrap();
        assert_eq!(e.apply(&Element::Pair(1, 2)).unwrap(), Element::Pair(2, 1));
        assert_eq!(ZSetMap::alpha().apply(&Element::Pair(1, 2)).unwrap(), Element::Pair(3, -2));
        let id = ExtPerversity::Finite(Perversity::identity());
        assert_eq!(ZSetMap::gamma(&id).unwrap().apply(&Element::Pair(2, 3)).unwrap(), Element::Int(5));
        let ba = ZSetMap::compose(ZSetMap::alpha(), ZSetMap::beta()).unwrap();
        let eb = ZSetMap::compose(ZSetMap::beta(), e).unwrap();
        assert_eq!(ba.apply(&Element::Pair(1, 2)).unwrap(), Element::Pair(3, 1));
        assert_eq!(eb.apply(&Element::Pair(1, 2)).unwrap(), Element::Pair(3, 1));
    }

    #[test]
    fn infinite_perversities_are_rejected() {
        assert!(ZSetMap::gamma(&ExtPerversity::PlusInfinity).is_err());
        assert!(ZSetMap::g(&ExtPerversity::MinusInfinity).is_err());
    }

    #[test]
    fn table_violating_equivariance_has_witness() {
        let t = ZToset::z_lex_z();
        let mut entries = BTreeMap::new();
        entries.insert(Element::Pair(0, 0), Element::Pair(0, 0));
        entries.insert(Element::Pair(1, 1), Element::Pair(5, 1));
        let m = ZSetMap::table(t.clone(), t, entries).unwrap();
        let w = m.verify_equivariance(&[Element::Pair(0, 0), Element::Pair(1, 1)]).unwrap();
        assert_eq!(w, Some(Element::Pair(0, 0)));
    }

    #[test]
    fn exchange_and_alpha_are_not_monotone() {
        let square = ZToset::z_lex_zhat().window(0, 1);
        assert!(ZSetMap::exchange(&ZToset::z_lex_zhat()).unwrap().monotonicity_witness(&square).unwrap().is_some());
        // alpha preserves the order on every 2 x 2 square; side 3 exposes it
        assert!(ZSetMap::alpha().is_monotone_on(&square).unwrap());
        let w = ZSetMap::alpha().monotonicity_witness(&ZToset::z_lex_zhat().window(0, 2)).unwrap();
        assert_eq!(w, Some((Element::Pair(0, 2), Element::Pair(1, 0))));
        assert!(ZSetMap::beta().is_monotone_on(&ZToset::z_lex_zhat().window(-3, 3)).unwrap());
    }
}
