//! Versioned JSON documents: perversities, upper sets, objects, ext tables
//! and manifests. Every document carries `format` and `version`.

use std::collections::BTreeMap;
use std::path::Path;

use heartglue::slicing::{BaricOracle, BeilinsonSouleConfig, HeartOracle, HeartRule, HeartTable, SharedOracle};
use heartglue::model::{AQuiver, QuiverOracle, QuiverSlicing};
use heartglue::{Element, ExtInt, ExtPerversity, Perversity, StepFn, SupportObject, Tail, UpperSet2D};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const VERSION: u32 = 1;

/// An input problem, reported with exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<heartglue::Error> for InputError {
    fn from(e: heartglue::Error) -> Self {
        InputError(e.to_string())
    }
}

pub type Input<T> = Result<T, InputError>;

fn bad(msg: impl Into<String>) -> InputError {
    InputError(msg.into())
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
pub struct TailDoc {
    pub period: i64,
    pub shift: i64,
}

impl From<Tail> for TailDoc {
    fn from(t: Tail) -> Self {
        TailDoc { period: t.period, shift: t.shift }
    }
}

impl From<TailDoc> for Tail {
    fn from(t: TailDoc) -> Self {
        Tail::new(t.period, t.shift)
    }
}

/// `anchor`, explicit `values` from the anchor on, and both tails.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct StepDoc {
    pub anchor: i64,
    pub values: Vec<Value>,
    pub left_tail: TailDoc,
    pub right_tail: TailDoc,
}

fn ext_to_json(v: ExtInt) -> Value {
    match v {
        ExtInt::Fin(n) => Value::from(n),
        ExtInt::PosInf => Value::from("+inf"),
        ExtInt::NegInf => Value::from("-inf"),
    }
}

fn ext_from_json(v: &Value, field: &str) -> Input<ExtInt> {
    match v {
        Value::Number(n) => n.as_i64().map(ExtInt::Fin).ok_or_else(|| bad(format!("{field}: {n} is not an integer"))),
        Value::String(s) if s == "+inf" => Ok(ExtInt::PosInf),
        Value::String(s) if s == "-inf" => Ok(ExtInt::NegInf),
        other => Err(bad(format!("{field}: expected an integer, \"+inf\" or \"-inf\", found {other}"))),
    }
}

impl StepDoc {
    pub fn from_step(f: &StepFn) -> Self {
        StepDoc {
            anchor: f.anchor(),
            values: f.values().iter().map(|v| ext_to_json(*v)).collect(),
            left_tail: f.left_tail().into(),
            right_tail: f.right_tail().into(),
        }
    }

    pub fn to_step(&self) -> Input<StepFn> {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| ext_from_json(v, &format!("values[{i}]")))
            .collect::<Input<Vec<_>>>()?;
        Ok(StepFn::new(self.anchor, values, self.left_tail.into(), self.right_tail.into())?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PerversityDoc {
    pub format: String,
    pub version: u32,
    #[serde(flatten)]
    pub body: PerversityBody,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum PerversityBody {
    Infinite { value: String },
    Finite(StepDoc),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct UpperSetDoc {
    pub format: String,
    pub version: u32,
    /// `U = {(n, n') : n' >= boundary(n)}`.
    pub boundary: StepDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ObjectDoc {
    pub format: String,
    pub version: u32,
    /// `(degree, weight, multiplicity)`.
    pub entries: Vec<(i64, i64, u32)>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TableEntry {
    pub phi: i64,
    pub psi: i64,
    pub shift: i64,
    pub vanishes: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ExtTableDoc {
    pub format: String,
    pub version: u32,
    /// Admissible weights `[lo, hi]`; absent for all integers.
    #[serde(default)]
    pub weights: Option<(i64, i64)>,
    /// `"vanishes"` or `"nonvanishing"` for triples not listed.
    pub default: String,
    /// Always `"d<0 and (d=0, phi>psi) vanish"`; stated so files are self-describing.
    #[serde(default)]
    pub baseline: Option<String>,
    pub entries: Vec<TableEntry>,
}

/// Oracle description inside a manifest.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OracleDoc {
    Semisimple,
    Koszul,
    CoherentSupport { dim: i64 },
    TorsionPair,
    BeilinsonSoule {
        preset: String,
        #[serde(default)]
        planted_nonzero: Vec<(i64, i64)>,
    },
    Quiver { n: usize, slicing: String },
    Table { table: ExtTableDoc },
    TableFile { path: String },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ManifestDoc {
    pub format: String,
    pub version: u32,
    /// Informational description of the label space, e.g. `"Z x_lex Zhat"`.
    #[serde(default)]
    pub label_space: Option<String>,
    pub oracle: OracleDoc,
    #[serde(default)]
    pub objects: Vec<ObjectDoc>,
    #[serde(default)]
    pub window: Option<(i64, i64)>,
}

fn check_header(format: &str, version: u32, expected: &str) -> Input<()> {
    if format != expected {
        return Err(bad(format!("format: expected \"{expected}\", found \"{format}\"")));
    }
    if version != VERSION {
        return Err(bad(format!("version: unsupported version {version} (supported: {VERSION})")));
    }
    Ok(())
}

/// Parses a document, checking the header before the body so that a
/// document of the wrong kind is reported as such.
fn read_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str, format: &str) -> Input<T> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| bad(format!("malformed {what}: {e}")))?;
    let found = value.get("format").and_then(|f| f.as_str()).ok_or_else(|| bad("format: missing header field"))?;
    let version = value.get("version").and_then(|v| v.as_u64()).ok_or_else(|| bad("version: missing header field"))?;
    check_header(found, version as u32, format)?;
    serde_json::from_value(value).map_err(|e| bad(format!("malformed {what}: {e}")))
}

/// Inline JSON (starting with `{`) or a path to a JSON file.
fn load_text(arg: &str) -> Input<String> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(Path::new(arg)).map_err(|e| bad(format!("cannot read {arg}: {e}")))
    }
}

pub fn perversity_to_doc(p: &ExtPerversity) -> PerversityDoc {
    let body = match p {
        ExtPerversity::PlusInfinity => PerversityBody::Infinite { value: "+inf".into() },
        ExtPerversity::MinusInfinity => PerversityBody::Infinite { value: "-inf".into() },
        ExtPerversity::Finite(q) => PerversityBody::Finite(StepDoc::from_step(q.step_fn())),
    };
    PerversityDoc { format: "heartglue/perversity".into(), version: VERSION, body }
}

pub fn perversity_from_doc(d: &PerversityDoc) -> Input<ExtPerversity> {
    check_header(&d.format, d.version, "heartglue/perversity")?;
    match &d.body {
        PerversityBody::Infinite { value } => match value.as_str() {
            "+inf" => Ok(ExtPerversity::PlusInfinity),
            "-inf" => Ok(ExtPerversity::MinusInfinity),
            other => Err(bad(format!("value: expected \"+inf\" or \"-inf\", found \"{other}\""))),
        },
        PerversityBody::Finite(s) => Ok(ExtPerversity::from_step_fn(s.to_step()?)?),
    }
}

pub fn upperset_to_doc(u: &UpperSet2D) -> UpperSetDoc {
    UpperSetDoc { format: "heartglue/upperset".into(), version: VERSION, boundary: StepDoc::from_step(u.boundary()) }
}

pub fn upperset_from_doc(d: &UpperSetDoc) -> Input<UpperSet2D> {
    check_header(&d.format, d.version, "heartglue/upperset")?;
    Ok(UpperSet2D::from_boundary(d.boundary.to_step()?)?)
}

fn int_arg(s: &str, name: &str) -> Input<i64> {
    s.trim().parse().map_err(|_| bad(format!("{name}: \"{s}\" is not an integer")))
}

/// Presets `zero`, `identity`, `middle`, `chi:K`, `const:C`, `+inf`, `-inf`,
/// or a JSON document (inline or file).
pub fn parse_perversity(arg: &str) -> Input<ExtPerversity> {
    let p = match arg {
        "zero" => Perversity::zero(),
        "identity" => Perversity::identity(),
        "middle" => Perversity::middle(),
        "+inf" => return Ok(ExtPerversity::PlusInfinity),
        "-inf" => return Ok(ExtPerversity::MinusInfinity),
        s if s.starts_with("chi:") => Perversity::chi(int_arg(&s[4..], "chi")?),
        s if s.starts_with("const:") => Perversity::constant(int_arg(&s[6..], "const")?),
        s => return perversity_from_doc(&read_json(&load_text(s)?, "perversity", "heartglue/perversity")?),
    };
    Ok(p.into())
}

/// Presets `empty`, `full`, `north:K`, `east:K`, or a JSON document.
pub fn parse_upperset(arg: &str) -> Input<UpperSet2D> {
    Ok(match arg {
        "empty" => UpperSet2D::empty(),
        "full" => UpperSet2D::full(),
        s if s.starts_with("north:") => UpperSet2D::north_of(int_arg(&s[6..], "north")?),
        s if s.starts_with("east:") => UpperSet2D::east_of(int_arg(&s[5..], "east")?),
        s => upperset_from_doc(&read_json(&load_text(s)?, "upper set", "heartglue/upperset")?)?,
    })
}

pub fn object_from_doc(d: &ObjectDoc) -> Input<SupportObject> {
    check_header(&d.format, d.version, "heartglue/object")?;
    Ok(SupportObject::new(d.entries.iter().map(|&(n, w, m)| (Element::Pair(n, w), m)))?)
}

/// `"n,w,m;n,w,m"` (multiplicity optional), or a JSON object document.
pub fn parse_object(arg: &str) -> Input<SupportObject> {
    let t = arg.trim();
    if t.starts_with('{') || t.ends_with(".json") {
        return object_from_doc(&read_json(&load_text(t)?, "object", "heartglue/object")?);
    }
    let mut items = Vec::new();
    for (i, part) in t.split(';').map(str::trim).filter(|s| !s.is_empty()).enumerate() {
        let nums: Vec<&str> = part.split(',').collect();
        if nums.len() < 2 || nums.len() > 3 {
            return Err(bad(format!("object entry {i}: expected n,w[,m], found \"{part}\"")));
        }
        let n = int_arg(nums[0], "degree")?;
        let w = int_arg(nums[1], "weight")?;
        let m = if nums.len() == 3 { int_arg(nums[2], "multiplicity")? } else { 1 };
        let m = u32::try_from(m).ok().filter(|m| *m > 0).ok_or_else(|| bad(format!("object entry {i}: multiplicity must be positive")))?;
        items.push((Element::Pair(n, w), m));
    }
    Ok(SupportObject::new(items)?)
}

pub fn table_from_doc(d: &ExtTableDoc) -> Input<HeartOracle> {
    check_header(&d.format, d.version, "heartglue/ext-table")?;
    let default_vanishes = match d.default.as_str() {
        "vanishes" => true,
        "nonvanishing" => false,
        other => return Err(bad(format!("default: expected \"vanishes\" or \"nonvanishing\", found \"{other}\""))),
    };
    let mut entries = BTreeMap::new();
    for e in &d.entries {
        if let Some((lo, hi)) = d.weights {
            if !(lo..=hi).contains(&e.phi) || !(lo..=hi).contains(&e.psi) {
                return Err(bad(format!("entries: ({}, {}, {}) is outside weights [{lo}, {hi}]", e.phi, e.psi, e.shift)));
            }
        }
        entries.insert((e.phi, e.psi, e.shift), e.vanishes);
    }
    let rule = HeartRule::Table(HeartTable { entries, default_vanishes });
    Ok(match d.weights {
        Some((lo, hi)) => HeartOracle::with_weights(rule, lo, hi),
        None => HeartOracle::new(rule),
    })
}

pub fn parse_table(arg: &str) -> Input<HeartOracle> {
    table_from_doc(&read_json(&load_text(arg)?, "ext table", "heartglue/ext-table")?)
}

pub fn parse_manifest(arg: &str) -> Input<ManifestDoc> {
    let m: ManifestDoc = read_json(&load_text(arg)?, "manifest", "heartglue/manifest")?;
    check_header(&m.format, m.version, "heartglue/manifest")?;
    if let Some((lo, hi)) = m.window {
        if lo > hi {
            return Err(bad(format!("window: [{lo}, {hi}] is empty")));
        }
    }
    Ok(m)
}

pub fn beilinson_soule_preset(preset: &str) -> Input<BeilinsonSouleConfig> {
    match preset {
        "number-field" => Ok(BeilinsonSouleConfig::number_field()),
        "generic" => Ok(BeilinsonSouleConfig::generic()),
        other => Err(bad(format!("preset: unknown preset \"{other}\" (number-field, generic)"))),
    }
}

pub fn quiver_slicing(name: &str) -> Input<QuiverSlicing> {
    match name {
        "standard" => Ok(QuiverSlicing::Standard),
        "slope" => Ok(QuiverSlicing::Slope),
        "top" => Ok(QuiverSlicing::Top),
        other => Err(bad(format!("slicing: unknown quiver slicing \"{other}\" (standard, slope, top)"))),
    }
}

/// A built oracle, tagged by whether it is an abelian Z-slicing (index
/// `Z x_lex W`) or a baric one (index `W x_lex Z`).
#[derive(Debug, Clone)]
pub enum BuiltOracle {
    Abelian(SharedOracle),
    Baric(SharedOracle),
}

impl BuiltOracle {
    pub fn shared(&self) -> SharedOracle {
        match self {
            BuiltOracle::Abelian(o) | BuiltOracle::Baric(o) => o.clone(),
        }
    }
}

pub fn build_oracle(doc: &OracleDoc) -> Input<BuiltOracle> {
    use std::sync::Arc;
    Ok(match doc {
        OracleDoc::Semisimple => BuiltOracle::Abelian(HeartOracle::shared(HeartRule::Semisimple)),
        OracleDoc::Koszul => BuiltOracle::Abelian(HeartOracle::shared(HeartRule::Koszul)),
        OracleDoc::CoherentSupport { dim } => {
            if *dim < 0 {
                return Err(bad(format!("dim: {dim} is negative")));
            }
            BuiltOracle::Abelian(HeartOracle::shared(HeartRule::CoherentSupport { dim: *dim }))
        }
        OracleDoc::TorsionPair => BuiltOracle::Abelian(HeartOracle::shared(HeartRule::TorsionPair)),
        OracleDoc::BeilinsonSoule { preset, planted_nonzero } => {
            let mut cfg = beilinson_soule_preset(preset)?;
            cfg.planted_nonzero.extend(planted_nonzero.iter().copied());
            BuiltOracle::Baric(Arc::new(BaricOracle::beilinson_soule(cfg)))
        }
        OracleDoc::Quiver { n, slicing } => {
            BuiltOracle::Abelian(Arc::new(QuiverOracle::new(AQuiver::new(*n)?, quiver_slicing(slicing)?)))
        }
        OracleDoc::Table { table } => BuiltOracle::Abelian(Arc::new(table_from_doc(table)?)),
        OracleDoc::TableFile { path } => BuiltOracle::Abelian(Arc::new(parse_table(path)?)),
    })
}

pub fn to_pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("documents serialize")
}
