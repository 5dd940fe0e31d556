//! JSON encodings of instances, reports and certificates.
//!
//! Rationals are strings `"p/q"` (or `"p"`), integer polynomials are
//! coefficient arrays with the constant term first, and object keys are
//! emitted in a fixed order so that output is byte-stable.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::commpoly::CommPoly;
use crate::deciders::{Budget, BudgetSpent, Certificate, Decision, Mode, Options, Problem, Verdict};
use crate::error::{Error, Result};
use crate::exactnum::{format_rational, parse_rational, AlgebraicReal, ComplexRat, IntPoly, Rational};
use crate::freepoly::{NCPoly, PolyaResult, Word};
use crate::lrs::{Lrs, LrsSpec};
use crate::matrix::{IntMatrix, LinearFunctional, Matrix, RatMatrix};
use crate::reductions::MortalityInstance;
use crate::ring::Ring;
use crate::spectra::{Eigenvalue, SpectrumReport, UnitArg};

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing field {key:?}")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(format!("{what} must be an array")))
}

fn as_u64(v: &Value, what: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| bad(format!("{what} must be a nonnegative integer")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| bad(format!("{what} must be a string")))
}

pub fn rat_to_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

/// Accepts `"p/q"`, `"p"` or a JSON integer.
pub fn rat_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_rational(&n.to_string()),
        _ => Err(bad(format!("expected a rational, got {v}"))),
    }
}

fn rats_to_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rat_to_json).collect())
}

fn rats_from_json(v: &Value, what: &str) -> Result<Vec<Rational>> {
    array(v, what)?.iter().map(rat_from_json).collect()
}

pub fn int_to_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(i) => json!(i),
        None => Value::String(x.to_string()),
    }
}

pub fn int_from_json(v: &Value) -> Result<BigInt> {
    let r = rat_from_json(v)?;
    if !r.is_integer() {
        return Err(bad(format!("expected an integer, got {v}")));
    }
    Ok(r.to_integer())
}

pub fn poly_to_json(p: &IntPoly) -> Value {
    Value::Array(p.coeffs().iter().map(int_to_json).collect())
}

pub fn poly_from_json(v: &Value) -> Result<IntPoly> {
    Ok(IntPoly::new(array(v, "polynomial")?.iter().map(int_from_json).collect::<Result<_>>()?))
}

/// A real value as a string; a non-real one as `{"re", "im"}`.
pub fn complex_to_json(z: &ComplexRat) -> Value {
    if num_traits::Zero::is_zero(&z.im) {
        rat_to_json(&z.re)
    } else {
        json!({"re": rat_to_json(&z.re), "im": rat_to_json(&z.im)})
    }
}

pub fn complex_from_json(v: &Value) -> Result<ComplexRat> {
    match v {
        Value::Object(_) => Ok(ComplexRat::new(rat_from_json(field(v, "re")?)?, rat_from_json(field(v, "im")?)?)),
        _ => Ok(ComplexRat::real(rat_from_json(v)?)),
    }
}

fn decimal(x: f64) -> Value {
    Value::String(format!("{x:.12e}"))
}

pub fn algebraic_to_json(x: &AlgebraicReal) -> Value {
    json!({
        "poly": poly_to_json(x.defining()),
        "interval": [rat_to_json(x.lo()), rat_to_json(x.hi())],
        "display_only": decimal(x.approx()),
    })
}

pub fn algebraic_from_json(v: &Value) -> Result<AlgebraicReal> {
    let iv = array(field(v, "interval")?, "interval")?;
    if iv.len() != 2 {
        return Err(bad("interval must have two endpoints"));
    }
    AlgebraicReal::new(poly_from_json(field(v, "poly")?)?, rat_from_json(&iv[0])?, rat_from_json(&iv[1])?)
}

fn matrix_json<T: Ring>(m: &Matrix<T>, enc: impl Fn(&T) -> Value) -> Value {
    let rows: Vec<Value> = (0..m.size()).map(|i| Value::Array(m.row(i).iter().map(&enc).collect())).collect();
    json!({"size": m.size(), "rows": rows})
}

fn matrix_parse<T: Ring>(v: &Value, dec: impl Fn(&Value) -> Result<T>) -> Result<Matrix<T>> {
    let rows = array(field(v, "rows")?, "rows")?;
    let parsed: Vec<Vec<T>> =
        rows.iter().map(|r| array(r, "row")?.iter().map(&dec).collect::<Result<Vec<T>>>()).collect::<Result<_>>()?;
    if let Some(s) = v.get("size") {
        if as_u64(s, "size")? as usize != parsed.len() {
            return Err(Error::DimensionMismatch(format!("size {s} but {} rows", parsed.len())));
        }
    }
    Matrix::new(parsed)
}

pub fn rat_matrix_to_json(m: &RatMatrix) -> Value {
    matrix_json(m, rat_to_json)
}

pub fn rat_matrix_from_json(v: &Value) -> Result<RatMatrix> {
    matrix_parse(v, rat_from_json)
}

pub fn int_matrix_to_json(m: &IntMatrix) -> Value {
    matrix_json(m, |x| Value::String(x.to_string()))
}

pub fn int_matrix_from_json(v: &Value) -> Result<IntMatrix> {
    matrix_parse(v, int_from_json)
}

pub fn complex_matrix_to_json(m: &Matrix<ComplexRat>) -> Value {
    matrix_json(m, complex_to_json)
}

pub fn complex_matrix_from_json(v: &Value) -> Result<Matrix<ComplexRat>> {
    matrix_parse(v, complex_from_json)
}

pub fn functional_to_json(phi: &LinearFunctional) -> Value {
    match phi {
        LinearFunctional::Trace => json!({"kind": "trace"}),
        LinearFunctional::TraceForm(m) => json!({"kind": "trace_form", "M": rat_matrix_to_json(m)}),
        LinearFunctional::Bilinear(v, w) => json!({"kind": "bilinear", "v": rats_to_json(v), "w": rats_to_json(w)}),
    }
}

pub fn functional_from_json(v: &Value) -> Result<LinearFunctional> {
    match as_str(field(v, "kind")?, "functional kind")? {
        "trace" => Ok(LinearFunctional::Trace),
        "trace_form" => Ok(LinearFunctional::TraceForm(rat_matrix_from_json(field(v, "M")?)?)),
        "bilinear" => Ok(LinearFunctional::Bilinear(rats_from_json(field(v, "v")?, "v")?, rats_from_json(field(v, "w")?, "w")?)),
        k => Err(bad(format!("unknown functional kind {k:?}"))),
    }
}

pub fn commpoly_to_json(p: &CommPoly) -> Value {
    let terms: Vec<Value> =
        p.terms().into_iter().map(|(e, c)| json!({"exps": e, "coeff": Value::String(c.to_string())})).collect();
    json!({"vars": p.vars(), "terms": terms})
}

pub fn commpoly_from_json(v: &Value) -> Result<CommPoly> {
    let vars = as_u64(field(v, "vars")?, "vars")? as usize;
    let mut terms = Vec::new();
    for t in array(field(v, "terms")?, "terms")? {
        let exps: Vec<u32> = array(field(t, "exps")?, "exps")?
            .iter()
            .map(|e| as_u64(e, "exponent").map(|x| x as u32))
            .collect::<Result<_>>()?;
        if exps.len() > vars {
            return Err(bad("exponent vector longer than vars"));
        }
        terms.push((exps, int_from_json(field(t, "coeff")?)?));
    }
    Ok(CommPoly::from_terms(vars, terms))
}

pub fn ncpoly_to_json(p: &NCPoly) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(w, c)| json!({"word": w.letters(), "coeff": Value::String(c.to_string())}))
        .collect();
    json!({"letters": p.letters(), "terms": terms})
}

pub fn ncpoly_from_json(v: &Value) -> Result<NCPoly> {
    let letters = as_u64(field(v, "letters")?, "letters")? as usize;
    let mut terms = Vec::new();
    for t in array(field(v, "terms")?, "terms")? {
        let word: Vec<u32> = array(field(t, "word")?, "word")?
            .iter()
            .map(|e| as_u64(e, "letter").map(|x| x as u32))
            .collect::<Result<_>>()?;
        terms.push((Word(word), int_from_json(field(t, "coeff")?)?));
    }
    NCPoly::from_terms(letters, terms)
}

pub fn polya_to_json(r: &PolyaResult) -> Value {
    match r {
        PolyaResult::AllNonneg => json!({"result": "all_nonneg"}),
        PolyaResult::Witness { word, coefficient, matrices, entry } => json!({
            "result": "witness",
            "word": word.letters(),
            "coeff": Value::String(coefficient.to_string()),
            "matrices": matrices.iter().map(int_matrix_to_json).collect::<Vec<_>>(),
            "entry": [entry.0, entry.1],
        }),
    }
}

pub fn polya_from_json(v: &Value) -> Result<PolyaResult> {
    match as_str(field(v, "result")?, "result")? {
        "all_nonneg" => Ok(PolyaResult::AllNonneg),
        "witness" => {
            let word = array(field(v, "word")?, "word")?
                .iter()
                .map(|e| as_u64(e, "letter").map(|x| x as u32))
                .collect::<Result<_>>()?;
            let entry = array(field(v, "entry")?, "entry")?;
            if entry.len() != 2 {
                return Err(bad("entry must be a pair"));
            }
            let (r, c) = (as_u64(&entry[0], "row")? as usize, as_u64(&entry[1], "column")? as usize);
            if r == 0 || c == 0 {
                return Err(bad("entry is 1-based"));
            }
            Ok(PolyaResult::Witness {
                word: Word(word),
                coefficient: int_from_json(field(v, "coeff")?)?,
                matrices: array(field(v, "matrices")?, "matrices")?.iter().map(int_matrix_from_json).collect::<Result<_>>()?,
                entry: (r, c),
            })
        }
        k => Err(bad(format!("unknown result {k:?}"))),
    }
}

fn ring_elements<T>(v: &Value, what: &str, dec: impl Fn(&Value) -> Result<T>) -> Result<Vec<T>> {
    array(v, what)?.iter().map(dec).collect()
}

pub fn lrs_to_json(spec: &LrsSpec) -> Value {
    match spec {
        LrsSpec::Rational(l) => json!({"ring": "rational", "coeffs": rats_to_json(l.coeffs()), "initial": rats_to_json(l.initial())}),
        LrsSpec::Gaussian(l) => json!({
            "ring": "gaussian",
            "coeffs": l.coeffs().iter().map(gaussian_to_json).collect::<Vec<_>>(),
            "initial": l.initial().iter().map(gaussian_to_json).collect::<Vec<_>>(),
        }),
        LrsSpec::IntPoly { vars, lrs } => json!({
            "ring": format!("intpoly:{vars}"),
            "coeffs": lrs.coeffs().iter().map(commpoly_to_json).collect::<Vec<_>>(),
            "initial": lrs.initial().iter().map(commpoly_to_json).collect::<Vec<_>>(),
        }),
    }
}

fn gaussian_to_json(z: &ComplexRat) -> Value {
    json!({"re": rat_to_json(&z.re), "im": rat_to_json(&z.im)})
}

pub fn lrs_from_json(v: &Value) -> Result<LrsSpec> {
    let ring = v.get("ring").map(|r| as_str(r, "ring")).transpose()?.unwrap_or("rational");
    let (c, i) = (field(v, "coeffs")?, field(v, "initial")?);
    if ring == "rational" {
        return Ok(LrsSpec::Rational(Lrs::new(rats_from_json(c, "coeffs")?, rats_from_json(i, "initial")?)?));
    }
    if ring == "gaussian" {
        return Ok(LrsSpec::Gaussian(Lrs::new(
            ring_elements(c, "coeffs", complex_from_json)?,
            ring_elements(i, "initial", complex_from_json)?,
        )?));
    }
    if let Some(d) = ring.strip_prefix("intpoly:") {
        let vars: usize = d.parse().map_err(|_| bad(format!("bad ring {ring:?}")))?;
        let dec = |x: &Value| commpoly_from_json(x).map(|p| p.with_vars(vars));
        let lrs = Lrs::new(ring_elements(c, "coeffs", dec)?, ring_elements(i, "initial", dec)?)?;
        if lrs.coeffs().iter().chain(lrs.initial()).any(|p| p.vars() > vars) {
            return Err(bad("polynomial uses more variables than the ring"));
        }
        return Ok(LrsSpec::IntPoly { vars, lrs });
    }
    Err(bad(format!("unknown ring {ring:?}")))
}

fn unit_arg_to_json(u: &UnitArg) -> Value {
    match u {
        UnitArg::Zero => json!({"kind": "zero"}),
        UnitArg::Plus => json!({"kind": "plus"}),
        UnitArg::Minus => json!({"kind": "minus"}),
        UnitArg::RootOfUnity { order, index } => json!({"kind": "root_of_unity", "order": order, "index": index}),
        UnitArg::Generic(b) => json!({
            "kind": "generic",
            "center": gaussian_to_json(&b.center),
            "radius": rat_to_json(&b.radius),
        }),
    }
}

pub fn report_to_json(r: &SpectrumReport) -> Value {
    let classes: Vec<Value> = r
        .classes
        .iter()
        .map(|c| {
            let members: Vec<Value> = c
                .members
                .iter()
                .map(|m| {
                    let value = match &m.value {
                        Eigenvalue::Real(x) => json!({"kind": "real", "value": algebraic_to_json(x)}),
                        Eigenvalue::Complex(b) => json!({
                            "kind": "complex",
                            "center": gaussian_to_json(&b.center),
                            "radius": rat_to_json(&b.radius),
                            "display_only": [decimal(crate::exactnum::rational::approx_f64(&b.center.re)), decimal(crate::exactnum::rational::approx_f64(&b.center.im))],
                        }),
                    };
                    json!({"value": value, "multiplicity": m.multiplicity, "unit": unit_arg_to_json(&m.unit)})
                })
                .collect();
            json!({"modulus": algebraic_to_json(&c.modulus), "multiplicity": c.multiplicity(), "members": members})
        })
        .collect();
    let dominant = match &r.unique_dominant {
        Some(d) => json!({"value": algebraic_to_json(&d.value), "multiplicity": d.multiplicity, "positive": d.positive}),
        None => Value::Null,
    };
    json!({
        "size": r.size,
        "scale": Value::String(r.scale.to_string()),
        "char_poly": poly_to_json(&r.char_poly),
        "classes": classes,
        "unique_dominant": dominant,
        "all_real": r.all_real,
        "all_unit_modulus": r.all_unit_modulus,
        "roots_of_unity_order": r.roots_of_unity_order,
        "nilpotent": r.nilpotent,
    })
}

fn spent_to_json(b: &BudgetSpent) -> Value {
    json!({"moment_index": b.moment_index, "degree": b.degree, "relation_bound": b.relation_bound})
}

fn spent_from_json(v: &Value) -> Result<BudgetSpent> {
    Ok(BudgetSpent {
        moment_index: as_u64(field(v, "moment_index")?, "moment_index")?,
        degree: as_u64(field(v, "degree")?, "degree")? as u32,
        relation_bound: as_u64(field(v, "relation_bound")?, "relation_bound")? as u32,
    })
}

fn certificate_to_json(c: &Certificate) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), json!(c.kind()));
    let body = match c {
        Certificate::NegativeMoment { n, value } => json!({"n": n, "value": complex_to_json(value)}),
        Certificate::ClassValue { n, lo, hi } => json!({"n": n, "lo": rat_to_json(lo), "hi": rat_to_json(hi)}),
        Certificate::Trivial { reason, values } => json!({"reason": reason, "values": rats_to_json(values)}),
        Certificate::DominanceBound { n_star, lambda, multiplicity, values } => json!({
            "n_star": n_star,
            "lambda": algebraic_to_json(lambda),
            "multiplicity": multiplicity,
            "values": rats_to_json(values),
        }),
        Certificate::OddBound { n_star, weights, values } => json!({
            "n_star": n_star,
            "weights": weights.iter().map(|(r, w)| json!({"modulus": algebraic_to_json(r), "weight": w})).collect::<Vec<_>>(),
            "values": rats_to_json(values),
        }),
        Certificate::FiniteGroup { order, values } => {
            json!({"order": order, "values": values.iter().map(complex_to_json).collect::<Vec<_>>()})
        }
        Certificate::TorusLowerBound { relations, lower_bound, boxes } => {
            json!({"relations": relations, "lower_bound": rat_to_json(lower_bound), "boxes": boxes})
        }
        Certificate::EvalTable { criterion, k, epsilon, n_star, values } => json!({
            "criterion": criterion,
            "k": k,
            "epsilon": rat_to_json(epsilon),
            "n_star": n_star,
            "values": rats_to_json(values),
        }),
        Certificate::SequenceBound { recurrence, n_star, values } => {
            json!({"recurrence": rats_to_json(recurrence), "n_star": n_star, "values": rats_to_json(values)})
        }
        Certificate::Periodic { recurrence, period, values } => {
            json!({"recurrence": rats_to_json(recurrence), "period": period, "values": rats_to_json(values)})
        }
        Certificate::None { status } => {
            let s: Map<String, Value> = status.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
            json!({"status": s})
        }
    };
    if let Value::Object(b) = body {
        m.extend(b);
    }
    Value::Object(m)
}

fn certificate_from_json(v: &Value) -> Result<Certificate> {
    let n = |k: &str| as_u64(field(v, k)?, k);
    let vals = || rats_from_json(field(v, "values")?, "values");
    Ok(match as_str(field(v, "kind")?, "certificate kind")? {
        "negative_moment" => Certificate::NegativeMoment { n: n("n")?, value: complex_from_json(field(v, "value")?)? },
        "class_value" => Certificate::ClassValue {
            n: n("n")?,
            lo: rat_from_json(field(v, "lo")?)?,
            hi: rat_from_json(field(v, "hi")?)?,
        },
        "trivial" => Certificate::Trivial { reason: as_str(field(v, "reason")?, "reason")?.to_string(), values: vals()? },
        "dominance_bound" => Certificate::DominanceBound {
            n_star: n("n_star")?,
            lambda: algebraic_from_json(field(v, "lambda")?)?,
            multiplicity: n("multiplicity")? as usize,
            values: vals()?,
        },
        "odd_bound" => Certificate::OddBound {
            n_star: n("n_star")?,
            weights: array(field(v, "weights")?, "weights")?
                .iter()
                .map(|w| {
                    let weight = field(w, "weight")?.as_i64().ok_or_else(|| bad("weight must be an integer"))?;
                    Ok((algebraic_from_json(field(w, "modulus")?)?, weight))
                })
                .collect::<Result<_>>()?,
            values: vals()?,
        },
        "finite_group" => Certificate::FiniteGroup {
            order: n("order")?,
            values: ring_elements(field(v, "values")?, "values", complex_from_json)?,
        },
        "torus_lower_bound" => Certificate::TorusLowerBound {
            relations: array(field(v, "relations")?, "relations")?
                .iter()
                .map(|r| {
                    array(r, "relation")?.iter().map(|x| x.as_i64().ok_or_else(|| bad("relation entries are integers"))).collect()
                })
                .collect::<Result<_>>()?,
            lower_bound: rat_from_json(field(v, "lower_bound")?)?,
            boxes: n("boxes")?,
        },
        "eval_table" => Certificate::EvalTable {
            criterion: as_str(field(v, "criterion")?, "criterion")?.to_string(),
            k: n("k")? as usize,
            epsilon: rat_from_json(field(v, "epsilon")?)?,
            n_star: n("n_star")?,
            values: vals()?,
        },
        "sequence_bound" => Certificate::SequenceBound {
            recurrence: rats_from_json(field(v, "recurrence")?, "recurrence")?,
            n_star: n("n_star")?,
            values: vals()?,
        },
        "periodic" => Certificate::Periodic {
            recurrence: rats_from_json(field(v, "recurrence")?, "recurrence")?,
            period: n("period")?,
            values: vals()?,
        },
        "none" => Certificate::None {
            status: field(v, "status")?
                .as_object()
                .ok_or_else(|| bad("status must be an object"))?
                .iter()
                .map(|(k, x)| Ok((k.clone(), as_str(x, "status")?.to_string())))
                .collect::<Result<_>>()?,
        },
        k => return Err(bad(format!("unknown certificate kind {k:?}"))),
    })
}

pub fn decision_to_json(d: &Decision) -> Value {
    json!({
        "verdict": d.verdict.as_str(),
        "certificate": certificate_to_json(&d.certificate),
        "budget_spent": spent_to_json(&d.budget_spent),
    })
}

pub fn decision_from_json(v: &Value) -> Result<Decision> {
    let verdict = match as_str(field(v, "verdict")?, "verdict")? {
        "yes" => Verdict::Yes,
        "no" => Verdict::No,
        "unknown" => Verdict::Unknown,
        k => return Err(bad(format!("unknown verdict {k:?}"))),
    };
    Ok(Decision {
        verdict,
        certificate: certificate_from_json(field(v, "certificate")?)?,
        budget_spent: spent_from_json(field(v, "budget_spent")?)?,
    })
}

/// A parsed instance file.
#[derive(Clone, Debug, PartialEq)]
pub enum Instance {
    Problem(Problem),
    NCPoly(NCPoly),
    Mortality { instance: MortalityInstance, n: Option<IntMatrix> },
}

/// Parses `{"kind": ..., payload..., "options": {...}}`, applying the file's
/// options on top of `base`.
pub fn instance_from_json(v: &Value, base: &Options) -> Result<(Instance, Options)> {
    let opts = match v.get("options") {
        Some(o) => options_from_json(o, base)?,
        None => base.clone(),
    };
    let inst = match as_str(field(v, "kind")?, "kind")? {
        "matrix" => {
            let gaussian = v.get("ring").and_then(Value::as_str) == Some("gaussian") || opts.mode == Mode::Unitary;
            if gaussian {
                if v.get("functional").is_some_and(|f| f.get("kind").and_then(Value::as_str) != Some("trace")) {
                    return Err(Error::InvalidArgument("Gaussian matrices take the trace functional only".into()));
                }
                Instance::Problem(Problem::Unitary(complex_matrix_from_json(v)?))
            } else {
                let a = rat_matrix_from_json(v)?;
                let phi = match v.get("functional") {
                    Some(f) => functional_from_json(f)?,
                    None => LinearFunctional::Trace,
                };
                phi.check_size(a.size())?;
                Instance::Problem(Problem::Moments { a, phi })
            }
        }
        "lrs" => Instance::Problem(Problem::Sequence(lrs_from_json(v)?)),
        "ncpoly" => Instance::NCPoly(ncpoly_from_json(v)?),
        "mortality" => {
            let mats = array(field(v, "matrices")?, "matrices")?.iter().map(int_matrix_from_json).collect::<Result<_>>()?;
            let instance = MortalityInstance::new(mats)?;
            let n = v.get("N").map(int_matrix_from_json).transpose()?;
            Instance::Mortality { instance, n }
        }
        k => return Err(bad(format!("unknown instance kind {k:?}"))),
    };
    Ok((inst, opts))
}

pub fn instance_to_json(inst: &Instance) -> Value {
    match inst {
        Instance::Problem(Problem::Moments { a, phi }) => {
            let mut m = Map::new();
            m.insert("kind".into(), json!("matrix"));
            if let Value::Object(b) = rat_matrix_to_json(a) {
                m.extend(b);
            }
            m.insert("functional".into(), functional_to_json(phi));
            Value::Object(m)
        }
        Instance::Problem(Problem::Unitary(u)) => {
            let mut m = Map::new();
            m.insert("kind".into(), json!("matrix"));
            m.insert("ring".into(), json!("gaussian"));
            if let Value::Object(b) = complex_matrix_to_json(u) {
                m.extend(b);
            }
            Value::Object(m)
        }
        Instance::Problem(Problem::Sequence(spec)) => with_kind("lrs", lrs_to_json(spec)),
        Instance::NCPoly(p) => with_kind("ncpoly", ncpoly_to_json(p)),
        Instance::Mortality { instance, n } => {
            let mut v = json!({
                "kind": "mortality",
                "matrices": instance.matrices().iter().map(int_matrix_to_json).collect::<Vec<_>>(),
            });
            if let Some(n) = n {
                v["N"] = int_matrix_to_json(n);
            }
            v
        }
    }
}

fn with_kind(kind: &str, body: Value) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), json!(kind));
    if let Value::Object(b) = body {
        m.extend(b);
    }
    Value::Object(m)
}

fn options_from_json(v: &Value, base: &Options) -> Result<Options> {
    let mut o = base.clone();
    if let Some(m) = v.get("mode") {
        o.mode = as_str(m, "mode")?.parse()?;
    }
    if let Some(e) = v.get("epsilon") {
        o.epsilon = rat_from_json(e)?;
    }
    if let Some(p) = v.get("p") {
        o.p = as_u64(p, "p")?;
    }
    if let Some(q) = v.get("q") {
        o.q = as_u64(q, "q")?;
    }
    if let Some(b) = v.get("budget") {
        o.budget = budget_from_json(b, &o.budget)?;
    }
    Ok(o)
}

fn budget_from_json(v: &Value, base: &Budget) -> Result<Budget> {
    let mut b = base.clone();
    if let Some(x) = v.get("max_moment_index") {
        b.max_moment_index = as_u64(x, "max_moment_index")?;
    }
    if let Some(x) = v.get("max_invariant_degree") {
        b.max_invariant_degree = as_u64(x, "max_invariant_degree")? as u32;
    }
    if let Some(x) = v.get("relation_exponent_bound") {
        b.relation_exponent_bound = as_u64(x, "relation_exponent_bound")? as u32;
    }
    if let Some(x) = v.get("minimization_depth") {
        b.minimization_depth = as_u64(x, "minimization_depth")? as u32;
    }
    if let Some(x) = v.get("tolerance") {
        b.tolerance = rat_from_json(x)?;
    }
    Ok(b)
}

/// Pretty JSON with a trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, rat};

    #[test]
    fn rationals_are_canonical_strings() {
        assert_eq!(rat_to_json(&rat(6, -4)), json!("-3/2"));
        assert_eq!(rat_to_json(&int(5)), json!("5"));
        assert_eq!(rat_from_json(&json!(7)).unwrap(), int(7));
        assert_eq!(rat_from_json(&json!("2/4")).unwrap(), rat(1, 2));
        assert!(rat_from_json(&json!("1/0")).is_err());
        assert!(rat_from_json(&json!(0.5)).is_err());
    }

    #[test]
    fn decisions_round_trip() {
        let d = Decision::no_real(1, int(-1), BudgetSpent::default());
        let v = decision_to_json(&d);
        assert_eq!(v["certificate"], json!({"kind": "negative_moment", "n": 1, "value": "-1"}));
        assert_eq!(decision_from_json(&v).unwrap(), d);
        let lambda = AlgebraicReal::new(IntPoly::from_i64s(&[-2, 0, 1]), int(1), int(2)).unwrap();
        let d = Decision::yes(
            Certificate::DominanceBound { n_star: 3, lambda, multiplicity: 1, values: vec![int(2), rat(1, 3)] },
            BudgetSpent { moment_index: 3, degree: 0, relation_bound: 0 },
        );
        assert_eq!(decision_from_json(&decision_to_json(&d)).unwrap(), d);
        let d = Decision::unknown(vec![("torus".into(), "budget".into())], BudgetSpent::default());
        assert_eq!(decision_from_json(&decision_to_json(&d)).unwrap(), d);
    }

    #[test]
    fn instances_round_trip() {
        let a = RatMatrix::from_i64(&[&[1, 2], &[3, 4]]);
        let inst = Instance::Problem(Problem::Moments { a, phi: LinearFunctional::Bilinear(vec![int(1), int(0)], vec![int(0), rat(1, 2)]) });
        let (back, _) = instance_from_json(&instance_to_json(&inst), &Options::default()).unwrap();
        assert_eq!(back, inst);
        let p = NCPoly::from_terms(2, [(Word(vec![1, 2]), BigInt::from(1)), (Word(vec![2, 1]), BigInt::from(-2))]).unwrap();
        let inst = Instance::NCPoly(p);
        assert_eq!(instance_from_json(&instance_to_json(&inst), &Options::default()).unwrap().0, inst);
        let spec = LrsSpec::Rational(Lrs::new(vec![int(1), int(1)], vec![int(1), int(1)]).unwrap());
        let inst = Instance::Problem(Problem::Sequence(spec));
        assert_eq!(instance_from_json(&instance_to_json(&inst), &Options::default()).unwrap().0, inst);
        let bad_size = json!({"kind": "matrix", "size": 3, "rows": [["1"]]});
        assert!(instance_from_json(&bad_size, &Options::default()).is_err());
    }

    #[test]
    fn polynomials_round_trip() {
        let c = CommPoly::from_terms(2, [(vec![2, 0], BigInt::from(4)), (vec![1, 1], BigInt::from(6))]);
        assert_eq!(commpoly_from_json(&commpoly_to_json(&c)).unwrap(), c);
        let p = NCPoly::from_terms(2, [(Word(vec![2, 1]), BigInt::from(-2))]).unwrap();
        let r = crate::freepoly::polya_check(&p);
        assert_eq!(polya_from_json(&polya_to_json(&r)).unwrap(), r);
    }
}
