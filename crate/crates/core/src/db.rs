//! A text database of Picard curves: record construction, deduplication up to
//! ℚ-isomorphism, lookup by curve, weighted point, twist class or bad primes, and validation.
//!
//! Records are blocks of `key=value` lines separated by blank lines, in the field order of
//! [`CurveRecord::to_text`]. Integers are written in decimal, so arbitrary sizes survive.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed};
use rayon::prelude::*;

use crate::arith::factor::{factor_int, DEFAULT_TRIAL_BOUND};
use crate::arith::rat::{fmt_rat, parse_rat, rat, vp, Rat};
use crate::arith::sunit::{is_s_unit, sunit_lambdas};
use crate::binary_forms::BinaryQuartic;
use crate::error::{PicardError, Result};
use crate::invariants::{
    is_isomorphic_special, normalize_weighted_point, normalized_point, qbar_class, special_model,
    twists_with_good_reduction_outside, QbarClass, WeightedPoint,
};
use crate::models::{
    global_minimal_model, lattice_descent, CurveKind, MoveFamily, NonspecialShort, PicardCurve,
    PicardModel, SpecialShort,
};
use crate::poly::QPoly;
use crate::reduction::{
    bad_primes, discriminant_bound_flags, reduced_equation, reduced_special_equation,
    validate_conductor_exponents, ConductorData,
};
use crate::special_class::{standard_special_conductor, standard_special_curve, ClassificationTable};
use crate::ternary_forms::TernaryQuartic;

const HEADER: &str = "# picard curve database v1";

/// One ℚ-isomorphism class of Picard curves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveRecord {
    /// `N.p1e1_p2e2.k`: N the product of the bad primes, then the exponents of Δ^min,
    /// then a counter within that signature.
    pub label: String,
    pub kind: CurveKind,
    /// The model the record was built from.
    pub model: String,
    /// `c; c₀,…,c₄` for `y³ = c·f₀(x)`, or `a; b,c` for `x⁴ = a·(y⁴ + 6by² + cy − 3b²)`.
    pub reduced: String,
    pub minimal_short: String,
    pub minimal_long: String,
    pub point: WeightedPoint,
    pub qbar: QbarClass,
    /// ℚ-isomorphism key.
    pub key: String,
    /// Key shared by all twists.
    pub twists: String,
    /// Sign of Δ of `minimal_long` as written (`lhs − rhs`).
    pub disc_sign: i8,
    /// Exponents of the minimal discriminant.
    pub disc: BTreeMap<u64, i64>,
    pub bad_primes: Vec<u64>,
    /// Conductor exponent at each bad prime, when known.
    pub conductor: BTreeMap<u64, Option<i64>>,
    pub provenance: String,
}

impl CurveRecord {
    pub fn curve(&self) -> Result<PicardCurve> {
        PicardCurve::parse(&self.model)
    }

    fn known_conductor(&self) -> BTreeMap<u64, i64> {
        self.conductor
            .iter()
            .filter_map(|(&p, e)| e.map(|e| (p, e)))
            .collect()
    }

    pub fn conductor_data(&self) -> ConductorData {
        // The bad-prime set is passed only once every bad exponent is known.
        let complete = self.conductor.values().all(Option::is_some);
        ConductorData {
            special: self.kind == CurveKind::Special,
            exponents: self.known_conductor(),
            splits: BTreeMap::new(),
            bad_primes: complete.then(|| self.bad_primes.clone()),
            min_disc: self.disc.clone(),
        }
    }

    /// `(p, f_p ≤ v_p(Δ^min))` for each prime where both are known.
    pub fn bound_flags(&self) -> Vec<(u64, bool)> {
        discriminant_bound_flags(&self.conductor_data())
    }

    pub fn to_text(&self) -> String {
        let pairs = |m: &BTreeMap<u64, i64>| join(m.iter().map(|(p, e)| format!("{p}:{e}")));
        let conductor = join(self.conductor.iter().map(|(p, e)| match e {
            Some(e) => format!("{p}:{e}"),
            None => format!("{p}:?"),
        }));
        let bound = join(
            self.bound_flags()
                .into_iter()
                .map(|(p, ok)| format!("{p}:{}", if ok { "ok" } else { "exceeds" })),
        );
        let fields = [
            ("label", self.label.clone()),
            ("kind", self.kind.to_string()),
            ("model", self.model.clone()),
            ("reduced", self.reduced.clone()),
            ("minimal_short", self.minimal_short.clone()),
            ("minimal_long", self.minimal_long.clone()),
            ("point", join(self.point.c.iter().map(fmt_rat))),
            ("qbar", join(self.qbar.0.iter().map(fmt_rat))),
            ("key", self.key.clone()),
            ("twists", self.twists.clone()),
            ("disc_sign", self.disc_sign.to_string()),
            ("disc", pairs(&self.disc)),
            ("bad_primes", join(self.bad_primes.iter())),
            ("conductor", conductor),
            ("bound", bound),
            ("provenance", self.provenance.clone()),
        ];
        fields.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut fields: BTreeMap<&str, &str> = BTreeMap::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| bad_record(format!("line without '=': {line}")))?;
            if fields.insert(k, v).is_some() {
                return Err(bad_record(format!("duplicate field {k}")));
            }
        }
        let get = |k: &str| fields.get(k).copied().ok_or_else(|| bad_record(format!("missing field {k}")));
        let kind = match get("kind")? {
            "special" => CurveKind::Special,
            "nonspecial" => CurveKind::Nonspecial,
            other => return Err(bad_record(format!("unknown kind {other}"))),
        };
        let point = parse_triple(get("point")?)?;
        let qbar = parse_triple(get("qbar")?)?;
        let conductor = split_list(get("conductor")?)
            .map(|item| {
                let (p, e) = parse_pair(item)?;
                let e = if e == "?" { None } else { Some(parse_i64(e)?) };
                Ok((p, e))
            })
            .collect::<Result<_>>()?;
        let rec = CurveRecord {
            label: get("label")?.to_string(),
            kind,
            model: get("model")?.to_string(),
            reduced: get("reduced")?.to_string(),
            minimal_short: get("minimal_short")?.to_string(),
            minimal_long: get("minimal_long")?.to_string(),
            point: WeightedPoint { c: point },
            qbar: QbarClass(qbar),
            key: get("key")?.to_string(),
            twists: get("twists")?.to_string(),
            disc_sign: match get("disc_sign")? {
                "1" => 1,
                "-1" => -1,
                other => return Err(bad_record(format!("bad disc_sign {other}"))),
            },
            disc: split_list(get("disc")?)
                .map(|item| {
                    let (p, e) = parse_pair(item)?;
                    Ok((p, parse_i64(e)?))
                })
                .collect::<Result<_>>()?,
            bad_primes: split_list(get("bad_primes")?).map(parse_u64).collect::<Result<_>>()?,
            conductor,
            provenance: get("provenance")?.to_string(),
        };
        for k in fields.keys() {
            if !FIELD_NAMES.contains(k) {
                return Err(bad_record(format!("unknown field {k}")));
            }
        }
        // The bound flags are derived; a stored value must agree.
        let expect = rec.to_text();
        let stored_bound = get("bound")?;
        if !expect.contains(&format!("\nbound={stored_bound}\n")) {
            return Err(bad_record(format!("{}: bound flags do not match the stored exponents", rec.label)));
        }
        Ok(rec)
    }
}

const FIELD_NAMES: [&str; 16] = [
    "label",
    "kind",
    "model",
    "reduced",
    "minimal_short",
    "minimal_long",
    "point",
    "qbar",
    "key",
    "twists",
    "disc_sign",
    "disc",
    "bad_primes",
    "conductor",
    "bound",
    "provenance",
];

fn bad_record(msg: String) -> PicardError {
    PicardError::Record(msg)
}

fn join<T: ToString>(items: impl Iterator<Item = T>) -> String {
    items.map(|t| t.to_string()).collect::<Vec<_>>().join(",")
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty())
}

fn parse_u64(s: &str) -> Result<u64> {
    s.trim().parse().map_err(|_| bad_record(format!("not a prime: {s}")))
}

fn parse_i64(s: &str) -> Result<i64> {
    s.trim().parse().map_err(|_| bad_record(format!("not an integer: {s}")))
}

fn parse_pair(s: &str) -> Result<(u64, &str)> {
    let (p, e) = s.split_once(':').ok_or_else(|| bad_record(format!("expected p:e, got {s}")))?;
    Ok((parse_u64(p)?, e.trim()))
}

fn parse_triple(s: &str) -> Result<[Rat; 3]> {
    let v: Vec<Rat> = s
        .split(',')
        .map(|t| parse_rat(t.trim()).ok_or_else(|| bad_record(format!("not a rational: {t}"))))
        .collect::<Result<_>>()?;
    v.try_into().map_err(|_| bad_record(format!("expected three entries: {s}")))
}

/// Weighted point, ℚ-key and twist key of a curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveKeys {
    pub point: WeightedPoint,
    pub qbar: QbarClass,
    pub key: String,
    pub twists: String,
}

fn point_key(w: &WeightedPoint) -> String {
    format!("point:{}", join(w.c.iter().map(fmt_rat)))
}

/// The ℚ-key of a special model: its table class and canonical twist when it has good
/// reduction outside {2, 3}, otherwise the model itself (compared pairwise).
fn special_keys(m: &SpecialShort, table: &ClassificationTable) -> (String, String) {
    match table.identify(m) {
        Some((i, a)) => (format!("special:{i}:{}", fmt_rat(&a)), format!("special/{i}")),
        None => (
            format!("special-model:{}", PicardModel::SpecialShort(m.clone()).render()),
            "special".to_string(),
        ),
    }
}

pub fn curve_keys(c: &PicardCurve, table: &ClassificationTable) -> Result<CurveKeys> {
    if let Some(m) = special_model(c) {
        let marker = WeightedPoint::new(rat(0), rat(0), rat(1));
        let (key, twists) = special_keys(&m, table);
        return Ok(CurveKeys {
            qbar: QbarClass::of(&marker),
            point: marker,
            key,
            twists,
        });
    }
    let m = c
        .model
        .nonspecial_short()
        .ok_or_else(|| PicardError::Computation("no short model".into()))?;
    let point = normalized_point(&m)?;
    Ok(CurveKeys {
        key: point_key(&point),
        qbar: qbar_class(&m),
        twists: qbar_class(&m).to_string(),
        point,
    })
}

/// The curve in the shape used for records: special curves as `b·x⁴ = f(y)`, primitive and
/// integral.
fn working_curve(c: &PicardCurve) -> Result<PicardCurve> {
    let shape = || PicardError::Computation(format!("cannot rewrite {c} in record shape"));
    let model = match special_model(c) {
        Some(m) => {
            let prim = m.to_form().primitive().0;
            PicardModel::SpecialShort(SpecialShort::from_form(&prim).ok_or_else(shape)?)
        }
        None => PicardModel::recognize(&c.model.to_form().primitive().0)?,
    };
    let mut out = PicardCurve::new(model)?;
    out.kind = c.kind;
    Ok(out)
}

/// Minimal model among short ones, by descent at each prime of Δ.
fn minimal_short(c: &PicardCurve, depth: u32) -> Result<PicardModel> {
    let (mut form, family) = match c.kind {
        CurveKind::Special => (
            c.model.special_short().map(|m| m.to_form()),
            MoveFamily::ShortSpecial,
        ),
        CurveKind::Nonspecial => (
            c.model.nonspecial_short().map(|m| m.to_form()),
            MoveFamily::ShortNonspecial,
        ),
    };
    let mut f = form
        .take()
        .ok_or_else(|| PicardError::Computation("no short model".into()))?
        .primitive()
        .0;
    let d = c.disc();
    for p in disc_primes(&d)? {
        if vp(&d, p) >= 9 {
            f = lattice_descent(&f, p, family, depth).0;
        }
    }
    let m = match family {
        MoveFamily::ShortSpecial => SpecialShort::from_form(&f).map(PicardModel::SpecialShort),
        _ => NonspecialShort::from_form(&f).map(PicardModel::NonspecialShort),
    };
    m.ok_or_else(|| PicardError::Computation(format!("descent left the short shape: {f}")))
}

fn disc_primes(d: &Rat) -> Result<Vec<u64>> {
    let fac = factor_int(&d.numer().abs(), DEFAULT_TRIAL_BOUND);
    if !fac.is_complete() {
        return Err(PicardError::Computation(format!("could not factor Δ = {d}")));
    }
    Ok(fac.small_primes())
}

fn reduced_text(c: &PicardCurve) -> Result<String> {
    match c.kind {
        CurveKind::Special => {
            let m = c.model.special_short().expect("working special model");
            let (a, b, cc) = reduced_special_equation(&m)?;
            Ok(format!("{}; {},{}", fmt_rat(&a), fmt_rat(&b), fmt_rat(&cc)))
        }
        CurveKind::Nonspecial => {
            let m = c.model.nonspecial_short().expect("y³-shaped model");
            let (cc, f) = reduced_equation(&m)?;
            Ok(format!("{}; {}", fmt_rat(&cc), join(f.c.iter().map(fmt_rat))))
        }
    }
}

/// Builder options.
#[derive(Clone, Debug)]
pub struct BuildOptions {
    pub depth: u32,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            depth: crate::models::DEFAULT_DEPTH,
        }
    }
}

/// A curve to be stored, with optional known conductor exponents.
#[derive(Clone, Debug)]
pub struct CurveInput {
    pub curve: PicardCurve,
    pub provenance: String,
    pub conductor: BTreeMap<u64, i64>,
}

impl CurveInput {
    pub fn new(curve: PicardCurve) -> Self {
        CurveInput {
            curve,
            provenance: "input".into(),
            conductor: BTreeMap::new(),
        }
    }

    /// `equation [; provenance=…] [; conductor=p:e,…]`.
    pub fn parse_line(line: &str) -> Result<Self> {
        let mut parts = line.split(';');
        let eq = parts.next().unwrap_or_default();
        let mut input = CurveInput::new(PicardCurve::parse(eq.trim())?);
        for part in parts {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| PicardError::Parse(format!("expected key=value, got {part}")))?;
            match k.trim() {
                "provenance" => input.provenance = v.trim().to_string(),
                "conductor" => {
                    for item in split_list(v) {
                        let (p, e) = parse_pair(item).map_err(|e| PicardError::Parse(e.to_string()))?;
                        let e = parse_i64(e).map_err(|e| PicardError::Parse(e.to_string()))?;
                        input.conductor.insert(p, e);
                    }
                }
                other => return Err(PicardError::Parse(format!("unknown attribute {other}"))),
            }
        }
        Ok(input)
    }
}

/// Computes every field except the label.
pub fn build_record(input: &CurveInput, table: &ClassificationTable, opts: &BuildOptions) -> Result<CurveRecord> {
    let c = working_curve(&input.curve)?;
    let keys = curve_keys(&c, table)?;
    let short = minimal_short(&c, opts.depth)?;
    let long = global_minimal_model(&c, opts.depth)?;
    if !long.unfactored.is_one() {
        return Err(PicardError::Computation(format!(
            "Δ of the minimal model has an unfactored part {}",
            long.unfactored
        )));
    }
    let disc: BTreeMap<u64, i64> = long
        .exponents
        .iter()
        .filter(|e| e.global > 0)
        .map(|e| (e.p, e.global))
        .collect();
    let bad = bad_primes(&c)?;
    // Δ has odd degree, so its sign belongs to the form as written in the record.
    let minimal_long = long.curve.model.render();
    let written = PicardModel::recognize(&TernaryQuartic::parse(&minimal_long)?)?;
    let disc_sign = if written.disc().is_negative() { -1 } else { 1 };
    let mut known = input.conductor.clone();
    if known.is_empty() && keys.key == standard_key(table) {
        known = standard_special_conductor();
    }
    let conductor = bad.iter().map(|&p| (p, known.get(&p).copied())).collect();
    Ok(CurveRecord {
        label: String::new(),
        kind: c.kind,
        model: input.curve.model.render(),
        reduced: reduced_text(&c)?,
        minimal_short: short.render(),
        minimal_long,
        point: keys.point,
        qbar: keys.qbar,
        key: keys.key,
        twists: keys.twists,
        disc_sign,
        disc,
        bad_primes: bad,
        conductor,
        provenance: input.provenance.clone(),
    })
}

fn standard_key(table: &ClassificationTable) -> String {
    special_keys(&standard_special_curve(), table).0
}

/// Ordered records with lookup indexes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Database {
    pub records: Vec<CurveRecord>,
    by_key: BTreeMap<String, usize>,
    by_twists: BTreeMap<String, Vec<usize>>,
}

/// Lookup keys.
#[derive(Clone, Debug)]
pub enum Query {
    /// The record ℚ-isomorphic to a curve.
    Curve(PicardCurve),
    /// The record with a given weighted point (normalized first).
    Point(WeightedPoint),
    /// Every record that is a twist of the curve.
    Twists(PicardCurve),
    /// Every record whose bad primes lie in the set.
    BadPrimes(Vec<u64>),
}

/// A problem found by [`Database::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DbViolation {
    pub label: String,
    pub message: String,
}

impl fmt::Display for DbViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.label, self.message)
    }
}

fn signature(r: &CurveRecord) -> String {
    let n: u64 = r.bad_primes.iter().product();
    let exps = if r.disc.is_empty() {
        "1".to_string()
    } else {
        r.disc.iter().map(|(p, e)| format!("{p}e{e}")).collect::<Vec<_>>().join("_")
    };
    format!("{n}.{exps}")
}

/// Builds records in parallel, keeps one per ℚ-class and assigns labels.
pub fn db_build(inputs: &[CurveInput], table: &ClassificationTable, opts: &BuildOptions) -> Result<Database> {
    let mut records: Vec<CurveRecord> = inputs
        .par_iter()
        .map(|i| {
            build_record(i, table, opts)
                .map_err(|e| PicardError::Computation(format!("{}: {e}", i.curve.model.render())))
        })
        .collect::<Result<_>>()?;
    // Deterministic order before deduplication, so the surviving presentation does not
    // depend on the input order.
    records.sort_by(|a, b| (signature(a), &a.key, &a.model).cmp(&(signature(b), &b.key, &b.model)));
    let mut kept: Vec<CurveRecord> = Vec::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut loose: Vec<SpecialShort> = Vec::new();
    for r in records {
        if r.key.starts_with("special-model:") {
            let m = special_model(&working_curve(&r.curve()?)?).expect("special record");
            if loose.iter().any(|o| is_isomorphic_special(o, &m)) {
                continue;
            }
            loose.push(m);
        } else if !seen.insert(r.key.clone()) {
            continue;
        }
        kept.push(r);
    }
    let mut counters: BTreeMap<String, usize> = BTreeMap::new();
    for r in &mut kept {
        let sig = signature(r);
        let k = counters.entry(sig.clone()).or_insert(0);
        *k += 1;
        r.label = format!("{sig}.{k}");
    }
    Ok(Database::from_records(kept))
}

impl Database {
    pub fn from_records(records: Vec<CurveRecord>) -> Self {
        let mut db = Database {
            records,
            ..Default::default()
        };
        for (i, r) in db.records.iter().enumerate() {
            db.by_key.entry(r.key.clone()).or_insert(i);
            db.by_twists.entry(r.twists.clone()).or_default().push(i);
        }
        db
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{HEADER}\n");
        for r in &self.records {
            out.push('\n');
            out.push_str(&r.to_text());
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next() != Some(HEADER) {
            return Err(bad_record("missing database header".into()));
        }
        let body: Vec<&str> = lines.collect();
        let records = body
            .split(|l| l.trim().is_empty())
            .filter(|block| !block.is_empty())
            .map(|block| CurveRecord::parse(&block.join("\n")))
            .collect::<Result<_>>()?;
        Ok(Self::from_records(records))
    }

    pub fn query(&self, q: &Query, table: &ClassificationTable) -> Result<Vec<&CurveRecord>> {
        match q {
            Query::Curve(c) => {
                let c = working_curve(c)?;
                let keys = curve_keys(&c, table)?;
                if let Some(&i) = self.by_key.get(&keys.key) {
                    return Ok(vec![&self.records[i]]);
                }
                let Some(m) = special_model(&c) else {
                    return Ok(Vec::new());
                };
                // Special curves outside the table are compared pairwise.
                for r in self.records.iter().filter(|r| r.key.starts_with("special-model:")) {
                    let other = special_model(&working_curve(&r.curve()?)?).expect("special record");
                    if is_isomorphic_special(&other, &m) {
                        return Ok(vec![r]);
                    }
                }
                Ok(Vec::new())
            }
            Query::Point(w) => {
                let (n, _) = normalize_weighted_point(&w.c[0], &w.c[1], &w.c[2])?;
                if n.is_special() {
                    return Err(PicardError::Precondition(
                        "special curves are looked up by curve, not by point".into(),
                    ));
                }
                Ok(self.by_key.get(&point_key(&n)).map(|&i| &self.records[i]).into_iter().collect())
            }
            Query::Twists(c) => {
                let keys = curve_keys(&working_curve(c)?, table)?;
                Ok(self
                    .by_twists
                    .get(&keys.twists)
                    .map(|is| is.iter().map(|&i| &self.records[i]).collect())
                    .unwrap_or_default())
            }
            Query::BadPrimes(s) => Ok(self
                .records
                .iter()
                .filter(|r| r.bad_primes.iter().all(|p| s.contains(p)))
                .collect()),
        }
    }

    /// Checks labels and keys, conductor exponents against the validator rules and the
    /// bound `f_p ≤ v_p(Δ^min)`, and that the stored discriminant and keys match the stored
    /// minimal model.
    pub fn validate(&self, table: &ClassificationTable) -> Vec<DbViolation> {
        let mut out = Vec::new();
        let mut labels = BTreeSet::new();
        let mut keys = BTreeSet::new();
        for r in &self.records {
            let v = |message: String| DbViolation {
                label: r.label.clone(),
                message,
            };
            if !labels.insert(&r.label) {
                out.push(v("duplicate label".into()));
            }
            if !r.key.starts_with("special-model:") && !keys.insert(&r.key) {
                out.push(v(format!("duplicate ℚ-class key {}", r.key)));
            }
            for viol in validate_conductor_exponents(&r.conductor_data()) {
                out.push(v(viol.to_string()));
            }
            for (p, ok) in r.bound_flags() {
                if !ok {
                    out.push(v(format!("f_{p} exceeds v_{p}(Δ^min)")));
                }
            }
            for p in &r.bad_primes {
                if !r.disc.contains_key(p) {
                    out.push(v(format!("bad prime {p} does not divide Δ^min")));
                }
            }
        }
        let deep: Vec<DbViolation> = self
            .records
            .par_iter()
            .flat_map_iter(|r| check_against_model(r, table))
            .collect();
        out.extend(deep);
        out
    }
}

fn check_against_model(r: &CurveRecord, table: &ClassificationTable) -> Vec<DbViolation> {
    let v = |message: String| DbViolation {
        label: r.label.clone(),
        message,
    };
    let mut out = Vec::new();
    let long = match TernaryQuartic::parse(&r.minimal_long).and_then(|f| PicardModel::recognize(&f)) {
        Ok(m) => m,
        Err(e) => return vec![v(format!("minimal_long does not parse: {e}"))],
    };
    let d = long.disc();
    let sign = if d.is_negative() { -1 } else { 1 };
    let exps: BTreeMap<u64, i64> = match disc_primes(&d) {
        Ok(ps) => ps.into_iter().map(|p| (p, vp(&d, p))).collect(),
        Err(e) => return vec![v(e.to_string())],
    };
    if exps != r.disc || sign != r.disc_sign {
        out.push(v("disc does not match minimal_long".into()));
    }
    match r.curve().and_then(|c| working_curve(&c)).and_then(|c| curve_keys(&c, table)) {
        Ok(k) if k.key == r.key && k.twists == r.twists && k.point == r.point => {}
        Ok(_) => out.push(v("keys do not match the model".into())),
        Err(e) => out.push(v(format!("model does not parse: {e}"))),
    }
    out
}

/// Nonspecial curves `y³ = c·f(x)` where `f` has the four rational roots `{0, 1, λ₃, λ₄}`
/// (up to affine change), with every bad prime in `S`.
///
/// The λᵢ run over solutions of the S-unit equation with exponents at most `bound`.
pub fn enumerate_rational_branch_curves(s: &[u64], bound: u32) -> Result<Vec<NonspecialShort>> {
    if !s.contains(&3) {
        return Err(PicardError::Precondition("S must contain 3".into()));
    }
    let lambdas = sunit_lambdas(s, bound);
    let mut bases: BTreeMap<QbarClass, NonspecialShort> = BTreeMap::new();
    for (i, l3) in lambdas.iter().enumerate() {
        for l4 in &lambdas[i + 1..] {
            if !is_s_unit(&(l3 - l4), s) {
                continue;
            }
            let f = [rat(0), rat(1), l3.clone(), l4.clone()]
                .iter()
                .fold(QPoly::constant(rat(1)), |acc, r| &acc * &QPoly::linear_root(r));
            let f = BinaryQuartic::from_poly(&f)?;
            let m = NonspecialShort::new(rat(1), f)?;
            let q = qbar_class(&m);
            if q.is_special() {
                continue;
            }
            bases.entry(q).or_insert(m);
        }
    }
    let found: Vec<Vec<NonspecialShort>> = bases
        .into_values()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|m| {
            let (c, f0) = reduced_equation(m)?;
            let reduced = NonspecialShort::new(rat(1), f0.scale(&c))?;
            twists_with_good_reduction_outside(&reduced, s)
        })
        .collect::<Result<_>>()?;
    // One reduced model per ℚ-class, built from the normalized point so that it does not
    // depend on which root configuration was met first.
    let points: BTreeSet<WeightedPoint> = found
        .iter()
        .flatten()
        .map(normalized_point)
        .collect::<Result<_>>()?;
    points
        .iter()
        .map(|w| {
            let (c, f0) = reduced_equation(&w.model()?)?;
            NonspecialShort::new(rat(1), f0.scale(&c))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_class::{classify_special_good_outside_23, enumerate_special_twists_23};
    use std::sync::OnceLock;

    fn table() -> &'static ClassificationTable {
        static T: OnceLock<ClassificationTable> = OnceLock::new();
        T.get_or_init(ClassificationTable::embedded)
    }

    fn input(s: &str) -> CurveInput {
        CurveInput::new(PicardCurve::parse(s).unwrap())
    }

    #[test]
    fn standard_record() {
        let r = build_record(&input("x^4 = y^3 + 1"), table(), &BuildOptions::default()).unwrap();
        assert_eq!(r.kind, CurveKind::Special);
        assert_eq!(r.disc, BTreeMap::from([(2, 7), (3, 9)]));
        assert_eq!(r.bad_primes, [2, 3]);
        assert_eq!(r.conductor, BTreeMap::from([(2, Some(6)), (3, Some(6))]));
        assert_eq!(r.key, "special:0:1");
        assert_eq!(r.bound_flags(), [(2, true), (3, true)]);
        assert!(validate_conductor_exponents(&r.conductor_data()).is_empty());
    }

    #[test]
    fn dedup_across_presentations() {
        let db = db_build(
            &[input("y^3 = x^4 - 1"), input("x^4 = y^3 + 1"), input("y^3 = x^4 + x")],
            table(),
            &BuildOptions::default(),
        )
        .unwrap();
        assert_eq!(db.len(), 2);
        let labels: Vec<&str> = db.records.iter().map(|r| r.label.as_str()).collect();
        assert!(labels.iter().all(|l| l.split('.').count() == 3));
        assert!(db.validate(table()).is_empty(), "{:?}", db.validate(table()));

        let hit = db.query(&Query::Curve(PicardCurve::parse("y^3 = x^4 + 512*x").unwrap()), table()).unwrap();
        assert_eq!(hit.len(), 1);
        assert_eq!(hit[0].model, "y^3 = x^4 + x");
        let point = WeightedPoint::new(rat(0), rat(512), rat(0));
        assert_eq!(db.query(&Query::Point(point), table()).unwrap().len(), 1);
        assert_eq!(db.query(&Query::BadPrimes(vec![2, 3]), table()).unwrap().len(), 2);
        assert_eq!(db.query(&Query::BadPrimes(vec![3]), table()).unwrap()[0].model, "y^3 = x^4 + x");

        let rebuilt = db_build(
            &[input("y^3 = x^4 + x"), input("x^4 = y^3 + 1"), input("y^3 = x^4 - 1")],
            table(),
            &BuildOptions::default(),
        )
        .unwrap();
        assert_eq!(rebuilt, db);
        assert!(db_build(&[], table(), &BuildOptions::default()).unwrap().is_empty());
    }

    #[test]
    fn text_round_trip() {
        let db = db_build(
            &[input("y^3 = x^4 + x"), input("x^4 = y^3 + 1"), input("y^3 = 7*(x^4 - 9*x^2 - 10*x - 9)")],
            table(),
            &BuildOptions::default(),
        )
        .unwrap();
        let text = db.to_text();
        let back = Database::parse(&text).unwrap();
        assert_eq!(back, db);
        assert_eq!(back.to_text(), text);
        assert!(Database::parse("nonsense").is_err());
        let broken = text.replacen("disc_sign=", "disc_sgn=", 1);
        assert!(Database::parse(&broken).is_err());
    }

    #[test]
    fn validate_reports_bad_conductors() {
        let mut db = db_build(&[input("x^4 = y^3 + 1")], table(), &BuildOptions::default()).unwrap();
        db.records[0].conductor.insert(2, Some(4));
        db.records[0].conductor.insert(3, Some(10));
        let msgs: Vec<String> = db.validate(table()).iter().map(|v| v.message.clone()).collect();
        assert!(msgs.iter().any(|m| m.contains("exceeds")), "{msgs:?}");
        assert!(msgs.len() >= 2);
    }

    #[test]
    fn special_twist_queries() {
        let t = classify_special_good_outside_23().unwrap();
        let twists = enumerate_special_twists_23(&t);
        // The class of x⁴ + x and a 32-class, built with a shallow search to keep this quick.
        let inputs: Vec<CurveInput> = twists
            .iter()
            .filter(|tw| tw.class == 0 || tw.class == 5)
            .map(|tw| {
                let mut i = CurveInput::new(PicardCurve::new(PicardModel::SpecialShort(tw.curve.clone())).unwrap());
                i.provenance = "special-23".into();
                i
            })
            .collect();
        let db = db_build(&inputs, &t, &BuildOptions { depth: 1 }).unwrap();
        assert_eq!(db.len(), 48);
        let std_curve = PicardCurve::parse("x^4 = y^3 + 1").unwrap();
        assert_eq!(db.query(&Query::Twists(std_curve), &t).unwrap().len(), 16);
        assert_eq!(db.query(&Query::BadPrimes(vec![2, 3]), &t).unwrap().len(), 48);
    }

    #[test]
    fn input_lines() {
        let i = CurveInput::parse_line("y^3 = x^4 + x ; provenance=test ; conductor=2:4,3:5").unwrap();
        assert_eq!(i.provenance, "test");
        assert_eq!(i.conductor, BTreeMap::from([(2, 4), (3, 5)]));
        assert!(CurveInput::parse_line("y^3 = x^4 + x ; colour=red").is_err());
    }

    #[test]
    fn rational_branch_curves() {
        assert!(enumerate_rational_branch_curves(&[3], 3).unwrap().is_empty());
        assert!(enumerate_rational_branch_curves(&[2], 3).is_err());
        let small = enumerate_rational_branch_curves(&[2, 3], 2).unwrap();
        assert!(!small.is_empty());
        for m in &small {
            let c = PicardCurve::new(PicardModel::NonspecialShort(m.clone())).unwrap();
            assert!(bad_primes(&c).unwrap().iter().all(|p| *p == 2 || *p == 3));
            assert!(m.f.c.iter().all(|c| c.is_integer()));
        }
        // Quadratic twists (automorphism group of order 6) lose the rational roots, but every
        // ℚ̄-class has a member with four rational roots.
        let split: BTreeSet<QbarClass> = small
            .iter()
            .filter(|m| m.f.to_poly().rational_roots().len() == 4)
            .map(qbar_class)
            .collect();
        assert!(small.iter().all(|m| split.contains(&qbar_class(m))));
        assert_eq!(enumerate_rational_branch_curves(&[2, 3], 4).unwrap(), small);
    }
}
