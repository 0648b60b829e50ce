//! End-to-end scenarios: each runs a worked example through the oracles and
//! predicates and records every checked claim.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::Result;
use crate::model::{semisimple_samples, semisimple_truncate, Cut};
use crate::perversity::{ExtPerversity, Perversity};
use crate::slicing::{
    gluable_via_exchange, gluable_witness, gp_compatibility_witness, grading_witness, heart_vanishes, is_f_compatible,
    is_gluable, perverse_witness, psi, pushforward_support, tilt_predicate, BaricOracle, BeilinsonSouleConfig,
    HeartOracle, HeartRule, HeartWindow, HomOracle, PsiArg, SupportObject, TransportedOracle,
};
use crate::zposet::{Element, ZSetMap, ZToset};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub claim: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioReport {
    pub name: String,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl ScenarioReport {
    fn new(name: &str) -> Self {
        ScenarioReport { name: name.into(), checks: Vec::new(), notes: Vec::new() }
    }

    fn check(&mut self, claim: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { claim: claim.into(), passed, detail: detail.into() });
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for ScenarioReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scenario {}", self.name)?;
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        for c in &self.checks {
            let tag = if c.passed { "pass" } else { "FAIL" };
            if c.detail.is_empty() {
                writeln!(f, "  [{tag}] {}", c.claim)?;
            } else {
                writeln!(f, "  [{tag}] {}: {}", c.claim, c.detail)?;
            }
        }
        write!(f, "result: {}", if self.passed() { "pass" } else { "FAIL" })
    }
}

pub const SCENARIOS: [&str; 5] = ["koszul", "motives", "coherent", "torsion-tilt", "bbd-gluing"];

fn show(w: Option<crate::slicing::Witness>) -> String {
    w.map_or_else(|| "no witness".into(), |w| w.to_string())
}

/// Graded modules over a Koszul algebra, through the semisimple bigraded model.
pub fn koszul(window: (i64, i64)) -> Result<ScenarioReport> {
    let mut r = ScenarioReport::new("koszul");
    let (lo, hi) = window;
    let o = HeartOracle::new(HeartRule::Koszul);
    let w = HeartWindow::new(lo..=hi, (lo - hi - 1, hi - lo + 1));
    r.note(format!("oracle: Ext^d(M_phi, M_psi) = 0 for d > psi - phi; window {w}"));

    let glue = gluable_witness(&o, &w)?;
    r.check("the slicing is gluable", glue.is_none(), show(glue));
    let ex = gluable_via_exchange(&o, &w)?;
    r.check("gluability agrees with exchange-compatibility", glue.is_none() == ex.is_none(), show(ex));
    let grad = grading_witness(&o, &w)?;
    r.check("the slicing is grading", grad.is_none(), show(grad));

    let (desc, warnings) = psi(&o, &PsiArg::Perversity(Perversity::identity().into()), &w)?;
    r.check("psi(identity) needs no strictness fallback", warnings.is_empty(), warnings.join("; "));
    let mut mismatch = None;
    for n in lo - hi..=hi - lo {
        for phi in lo..=hi {
            if desc.in_heart(n, phi) != (n == -phi) {
                mismatch = Some((n, phi));
            }
        }
    }
    r.check(
        "the heart of psi(identity) is the diagonal <D_(-n, n)>",
        mismatch.is_none(),
        mismatch.map_or_else(String::new, |(n, phi)| format!("disagreement at ({n}, {phi})")),
    );

    let diag = SupportObject::new((0..3).map(|n| (Element::Pair(-n, n), 1)))?;
    let gamma = ZSetMap::gamma(&Perversity::identity().into())?;
    let pushed = pushforward_support(&o, &gamma, &diag)?;
    r.check(
        "gamma_identity collapses the diagonal object to degree 0",
        pushed == SupportObject::new([(Element::Int(0), 3)])?,
        pushed.to_string(),
    );

    let cut = Cut::new(Element::Int(0));
    let mut bad = 0usize;
    let samples = semisimple_samples(2, (-2, 2), (-2, 2));
    for x in &samples {
        let (u, l) = semisimple_truncate(x, &gamma, &o, &cut)?;
        let above = x.filter(|e| e.pair().is_some_and(|(n, phi)| n + phi >= 0));
        let u_push = pushforward_support(&o, &gamma, &u)?;
        if u != above || u.direct_sum(&l) != *x || u_push.labels().iter().any(|j| *j < Element::Int(0)) {
            bad += 1;
        }
    }
    r.check(
        "truncation along gamma_identity keeps exactly the labels with n + phi >= 0",
        bad == 0,
        format!("{} samples, {bad} failures", samples.len()),
    );
    Ok(r)
}

/// Gluability over `Ẑ x_lex Z` is exactly `Hom(♥_i, ♥_j[d]) = 0` for
/// `i < j`, `d <= 0`, read directly off the oracle.
fn baric_direct_reading(o: &BaricOracle, pieces: (i64, i64), degrees: (i64, i64)) -> bool {
    (pieces.0..=pieces.1).all(|i| {
        (i + 1..=pieces.1).all(|j| (degrees.0..=0.min(degrees.1)).all(|d| o.heart_vanishes(i, j, d)))
    })
}

/// Mixed Tate motives with the Beilinson–Soulé vanishing as a flag.
pub fn motives() -> Result<ScenarioReport> {
    let mut r = ScenarioReport::new("motives");
    let window = ZToset::zhat_lex_z().window(-3, 3);
    let heart_w = HeartWindow::new(-3..=3, (-7, 7));
    r.note("pieces D_i = <Q(i)> with t-structures whose hearts are semisimple; labels (i, k) stand for D_i^heart[k]");
    for borel in [true, false] {
        for flag in [true, false] {
            let cfg = BeilinsonSouleConfig { impose_vanishing: flag, borel, planted_nonzero: BTreeSet::new() };
            let o = BaricOracle::beilinson_soule(cfg);
            let e = ZSetMap::exchange(&o.index())?;
            let glued = is_f_compatible(&o, &e, &window)?;
            let direct = baric_direct_reading(&o, (-3, 3), (-7, 7));
            r.check(
                format!("vanishing flag {flag}, borel {borel}: gluable iff the flag is set"),
                glued == flag && glued == direct,
                format!("gluable {glued}, direct reading {direct}"),
            );
            if glued {
                let pushed = TransportedOracle::exchange(Arc::new(o.clone()))?;
                let ok = is_gluable(&pushed, &heart_w)?;
                r.check(format!("vanishing flag {flag}, borel {borel}: e_! is a gluable abelian Z-slicing"), ok, "");
            }
        }
    }
    for (wt, d) in [(1, 0), (2, -1), (3, 0)] {
        let mut cfg = BeilinsonSouleConfig::number_field();
        cfg.planted_nonzero.insert((wt, d));
        let o = BaricOracle::beilinson_soule(cfg);
        let e = ZSetMap::exchange(&o.index())?;
        let glued = is_f_compatible(&o, &e, &window)?;
        r.check(format!("a nonzero K-group at weight {wt}, degree {d} breaks gluability"), !glued, "");
    }
    let o = BaricOracle::beilinson_soule(BeilinsonSouleConfig::number_field());
    let pushed = TransportedOracle::exchange(Arc::new(o))?;
    let (desc, _) = psi(&pushed, &PsiArg::Perversity(Perversity::zero().into()), &heart_w)?;
    r.check(
        "number field: psi(zero) on e_! has heart <D_i^heart>_i in degree 0",
        (-3..=3).all(|i| desc.in_heart(0, i) && !desc.in_heart(1, i)),
        "",
    );
    Ok(r)
}

/// Coherent sheaves sliced by codimension of support.
pub fn coherent(dim: i64) -> Result<ScenarioReport> {
    let mut r = ScenarioReport::new("coherent");
    let o = HeartOracle::new(HeartRule::CoherentSupport { dim });
    let w = HeartWindow::new(0..=dim, (-dim - 2, dim + 2));
    r.note(format!("smooth variety of dimension {dim}; Ext^d(E, F) = 0 for d < codim E - codim F or d > {dim}"));
    let perv = perverse_witness(&o, &w)?;
    r.check("the slicing is perverse", perv.is_none(), show(perv));
    let grad = grading_witness(&o, &w)?;
    if dim >= 2 {
        r.check("the slicing is not grading", grad.is_some(), show(grad));
    }
    let labels = w.labels(-dim - 2, dim + 2);
    let mid = gp_compatibility_witness(&o, &Perversity::middle(), &labels)?;
    r.check("g_middle-compatible (middle is strict)", mid.is_none(), show(mid));
    if dim >= 2 {
        let id = gp_compatibility_witness(&o, &Perversity::identity(), &labels)?;
        r.check("g_identity-compatibility fails (identity is not strict)", id.is_some(), show(id));
    }
    let (desc, warnings) = psi(&o, &PsiArg::Perversity(Perversity::middle().into()), &w)?;
    r.check("psi(middle) is defined, relying on strictness", warnings.len() == usize::from(grad.is_some()), warnings.join("; "));
    let heart: Vec<String> =
        (0..=dim).map(|c| format!("codim {c} in degree {}", -Perversity::middle().eval(c))).collect();
    r.note(format!("perverse coherent heart for the middle perversity: {}", heart.join(", ")));
    r.check("heart membership follows -p(codim)", (0..=dim).all(|c| desc.in_heart(-Perversity::middle().eval(c), c)), "");
    Ok(r)
}

/// Tilting a heart at a torsion pair via a two-valued perversity.
pub fn torsion_tilt(k: i64) -> Result<ScenarioReport> {
    let mut r = ScenarioReport::new("torsion-tilt");
    let chi = Perversity::chi(k);
    let values: BTreeSet<i64> = (k - 5..=k + 5).map(|n| chi.eval(n)).collect();
    r.check(format!("chi_[{k},inf) is two-valued"), values.len() == 2, format!("{values:?}"));
    let cases: [(HeartOracle, HeartWindow); 2] = [
        (HeartOracle::new(HeartRule::Koszul), HeartWindow::new(k - 4..=k + 4, (-10, 10))),
        (HeartOracle::new(HeartRule::TorsionPair), HeartWindow::new(0..=1, (-3, 3))),
    ];
    for (o, w) in cases {
        let (desc, warnings) = psi(&o, &PsiArg::Perversity(ExtPerversity::Finite(chi.clone())), &w)?;
        r.check(format!("{}: the slicing is grading", o.describe()), warnings.is_empty(), warnings.join("; "));
        let mut bad = None;
        for n in -4..=4 {
            for &phi in &w.weights {
                if desc.in_heart(n, phi) != tilt_predicate(k, n, phi) {
                    bad = Some((n, phi));
                }
            }
        }
        r.check(
            format!("{}: the chi heart is the tilt at torsion weights >= {k}", o.describe()),
            bad.is_none(),
            bad.map_or_else(String::new, |(n, phi)| format!("disagreement at ({n}, {phi})")),
        );
    }
    Ok(r)
}

/// Gluing two pieces `D_0, D_1` with t-structures.
pub fn bbd_gluing() -> Result<ScenarioReport> {
    let mut r = ScenarioReport::new("bbd-gluing");
    let labels = ZToset::FiniteInterval { lo: 0, hi: 1 };
    let index = ZToset::lex(labels, ZToset::IntTranslation)?;
    let window: Vec<Element> = (0..=1).flat_map(|i| (-3..=3).map(move |k| Element::Pair(i, k))).collect();
    let degrees: Vec<i64> = (-2..=2).collect();
    let mut agree = 0;
    let mut glued_count = 0;
    for mask in 0u32..(1 << degrees.len()) {
        let nonzero: BTreeSet<(i64, i64, i64)> =
            degrees.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &d)| (0, 1, d)).collect();
        let o = BaricOracle::two_pieces(nonzero.clone());
        debug_assert_eq!(o.index(), index);
        let e = ZSetMap::exchange(&o.index())?;
        let glued = is_f_compatible(&o, &e, &window)?;
        let direct = nonzero.iter().all(|&(_, _, d)| d > 0);
        if glued == direct {
            agree += 1;
        }
        if glued {
            glued_count += 1;
            let pushed = TransportedOracle::exchange(Arc::new(o))?;
            let baseline = !heart_vanishes(&pushed, 1, 0, 0)?;
            if baseline {
                r.check("e_! keeps Hom(heart_1, heart_0) = 0", false, format!("{nonzero:?}"));
            }
        }
    }
    r.check(
        "gluable iff Hom(heart_0, heart_1[n]) = 0 for all n <= 0",
        agree == 1 << degrees.len(),
        format!("{agree} of {} configurations agree, {glued_count} gluable", 1 << degrees.len()),
    );
    r.note("e_! of a gluable configuration is a Z x_lex {0,1}-slicing: (heart_0, heart_1) glue to one heart");
    Ok(r)
}

/// Runs a scenario by name with its default parameters.
pub fn run(name: &str, k: i64, dim: i64) -> Result<ScenarioReport> {
    match name {
        "koszul" => koszul((-3, 3)),
        "motives" => motives(),
        "coherent" => coherent(dim),
        "torsion-tilt" => torsion_tilt(k),
        "bbd-gluing" => bbd_gluing(),
        other => Err(crate::error::Error::domain(format!("unknown scenario {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_scenario_passes() {
        for name in SCENARIOS {
            let r = run(name, 0, 3).unwrap();
            assert!(r.passed(), "{r}");
        }
        for k in -2..=2 {
            assert!(torsion_tilt(k).unwrap().passed());
        }
        for d in 1..=4 {
            assert!(coherent(d).unwrap().passed());
        }
    }
}
