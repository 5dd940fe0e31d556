//! Command implementations behind the `momentpos` binary. Each command maps
//! an instance document to an output document and an exit code.

use serde_json::{json, Value};

use crate::deciders::{self, Decision, Options, Problem, Verdict};
use crate::error::{Error, Result};
use crate::freepoly::{pad, polya_check, witness_holds, PolyaResult};
use crate::io::{self, Instance};
use crate::lrs::{LrsSpec, RingElement};
use crate::matrix::IntMatrix;
use crate::reductions::{
    build_gadget_n, comm_moment_identity, commpoly_embed, lift_mortality, mortality_search, MortalityInstance,
};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

pub fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Yes => EXIT_YES,
        Verdict::No => EXIT_NO,
        Verdict::Unknown => EXIT_UNKNOWN,
    }
}

/// The diagnostic document printed with exit code 3.
pub fn error_json(e: &Error) -> Value {
    let kind = match e {
        Error::Parse(_) => "parse",
        Error::DimensionMismatch(_) => "dimension_mismatch",
        Error::Precondition(_) => "precondition",
        Error::InvalidArgument(_) => "invalid_argument",
        Error::ZeroPolynomial => "zero_polynomial",
        Error::Reducible => "reducible",
        Error::TermIndexFromOne => "term_index",
    };
    json!({"error": {"kind": kind, "message": e.to_string()}})
}

fn problem(inst: Instance) -> Result<Problem> {
    match inst {
        Instance::Problem(p) => Ok(p),
        _ => Err(Error::InvalidArgument("expected a matrix or lrs instance".into())),
    }
}

pub fn spectra(inst: Instance) -> Result<(Value, i32)> {
    match problem(inst)? {
        Problem::Moments { a, .. } => Ok((io::report_to_json(&crate::spectra::analyze(&a)?), EXIT_YES)),
        _ => Err(Error::InvalidArgument("spectra needs a rational matrix instance".into())),
    }
}

pub fn decide(inst: Instance, opts: &Options) -> Result<(Value, i32)> {
    let d = deciders::decide(&problem(inst)?, opts)?;
    Ok((io::decision_to_json(&d), verdict_code(d.verdict)))
}

fn element_json(e: &RingElement) -> Value {
    match e {
        RingElement::Rational(r) => io::rat_to_json(r),
        RingElement::Gaussian(z) => io::complex_to_json(z),
        RingElement::Poly(p) => io::commpoly_to_json(p),
    }
}

/// The first `terms` terms and, for numeric rings, the positivity decision.
pub fn lrs(inst: Instance, opts: &Options, terms: usize) -> Result<(Value, i32)> {
    let spec = match problem(inst)? {
        Problem::Sequence(s) => s,
        _ => return Err(Error::InvalidArgument("lrs needs an lrs instance".into())),
    };
    let prefix: Vec<Value> = (1..=terms).map(|n| spec.term(n).map(|e| element_json(&e))).collect::<Result<_>>()?;
    if matches!(spec, LrsSpec::IntPoly { .. }) {
        return Ok((json!({"terms": prefix, "decision": Value::Null}), EXIT_YES));
    }
    let d = deciders::decide_lrs(&spec, &opts.budget)?;
    Ok((json!({"terms": prefix, "decision": io::decision_to_json(&d)}), verdict_code(d.verdict)))
}

/// Free Polya check; `pad_to` enlarges witness matrices with zero rows and columns.
pub fn polya(inst: Instance, pad_to: Option<usize>) -> Result<(Value, i32)> {
    let p = match inst {
        Instance::NCPoly(p) => p,
        _ => return Err(Error::InvalidArgument("polya needs an ncpoly instance".into())),
    };
    let mut r = polya_check(&p);
    if let (PolyaResult::Witness { matrices, .. }, Some(size)) = (&mut r, pad_to) {
        if size < matrices[0].size() {
            return Err(Error::InvalidArgument(format!("cannot pad to {size}, witness has size {}", matrices[0].size())));
        }
        *matrices = pad(matrices, size);
    }
    let code = if r == PolyaResult::AllNonneg { EXIT_YES } else { EXIT_NO };
    Ok((io::polya_to_json(&r), code))
}

/// Gadget matrices, lifted instance, polynomial embedding and the checked
/// moment identity at exponent `n`, plus a bounded mortality search.
pub fn gadget(inst: Instance, n: u64, bound: u64) -> Result<(Value, i32)> {
    let (m, nm) = match inst {
        Instance::Mortality { instance, n } => (instance, n),
        _ => return Err(Error::InvalidArgument("gadget needs a mortality instance".into())),
    };
    Ok((gadget_report(&m, nm.as_ref(), n, bound)?, EXIT_YES))
}

fn gadget_report(m: &MortalityInstance, nm: Option<&IntMatrix>, n: u64, bound: u64) -> Result<Value> {
    let s = m.size();
    let nm = nm.cloned().unwrap_or_else(|| IntMatrix::identity(s));
    let (a, big_m) = commpoly_embed(m, &nm)?;
    let rows: Vec<Value> =
        (0..a.size()).map(|i| Value::Array(a.row(i).iter().map(io::commpoly_to_json).collect())).collect();
    let (poly, equal) = comm_moment_identity(m, &nm, n)?;
    Ok(json!({
        "gadget_n": io::int_matrix_to_json(&build_gadget_n(s)),
        "lifted": lift_mortality(m).iter().map(io::int_matrix_to_json).collect::<Vec<_>>(),
        "embedding": {"A": {"size": a.size(), "rows": rows}, "M": io::int_matrix_to_json(&big_m)},
        "moment_identity": {"n": n, "poly": io::commpoly_to_json(&poly), "equal": equal},
        "mortality": {"bound": bound, "exponents": mortality_search(m, bound)},
    }))
}

/// Independently re-checks an emitted document against its instance.
pub fn verify_document(inst: Instance, opts: &Options, doc: &Value) -> Result<bool> {
    match inst {
        Instance::Problem(p) => {
            let decision_doc = match (&p, doc.get("decision")) {
                (Problem::Sequence(_), Some(d)) => d,
                _ => doc,
            };
            let d: Decision = io::decision_from_json(decision_doc)?;
            deciders::verify(&p, &d, opts)
        }
        Instance::NCPoly(p) => {
            let r = io::polya_from_json(doc)?;
            Ok(witness_holds(&p, &r) && (r == PolyaResult::AllNonneg) == (polya_check(&p) == PolyaResult::AllNonneg))
        }
        Instance::Mortality { instance, n } => {
            let mi = doc.pointer("/moment_identity/n").and_then(Value::as_u64).ok_or_else(|| Error::Parse("missing moment_identity.n".into()))?;
            let bound = doc.pointer("/mortality/bound").and_then(Value::as_u64).ok_or_else(|| Error::Parse("missing mortality.bound".into()))?;
            let fresh = gadget_report(&instance, n.as_ref(), mi, bound)?;
            Ok(&fresh == doc && fresh["moment_identity"]["equal"] == json!(true))
        }
    }
}

/// Parses an instance document and applies `overrides` to its options.
pub fn load(text: &str, base: &Options, overrides: impl FnOnce(&mut Options)) -> Result<(Instance, Options)> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let (inst, mut opts) = io::instance_from_json(&v, base)?;
    overrides(&mut opts);
    Ok((inst, opts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(text: &str, f: impl FnOnce(Instance, &Options) -> Result<(Value, i32)>) -> (Value, i32) {
        let (inst, opts) = load(text, &Options::default(), |_| {}).unwrap();
        f(inst, &opts).unwrap()
    }

    #[test]
    fn decide_examples() {
        let diag = r#"{"kind":"matrix","rows":[["2","0"],["0","-3"]]}"#;
        let (v, code) = run(diag, decide);
        assert_eq!(code, 1);
        assert_eq!(v["certificate"]["n"], json!(1));
        assert_eq!(v["certificate"]["value"], json!("-1"));
        let cycle = r#"{"kind":"matrix","rows":[[0,0,1],[1,0,0],[0,1,0]],"options":{"mode":"orthogonal"}}"#;
        let (v, code) = run(cycle, decide);
        assert_eq!(code, 0);
        assert_eq!(v["certificate"]["kind"], json!("finite_group"));
        assert_eq!(v["certificate"]["order"], json!(3));
    }

    #[test]
    fn polya_example() {
        let p = r#"{"kind":"ncpoly","letters":2,"terms":[{"word":[1,2],"coeff":"1"},{"word":[2,1],"coeff":"-2"}]}"#;
        let (v, code) = run(p, |i, _| polya(i, None));
        assert_eq!(code, 1);
        assert_eq!(v["word"], json!([2, 1]));
        let (inst, opts) = load(p, &Options::default(), |_| {}).unwrap();
        assert!(verify_document(inst, &opts, &v).unwrap());
        let (v, _) = run(p, |i, _| polya(i, Some(5)));
        assert_eq!(v["matrices"][0]["size"], json!(5));
    }

    #[test]
    fn gadget_round_trip() {
        let m = r#"{"kind":"mortality","matrices":[{"rows":[[2]]},{"rows":[[3]]}]}"#;
        let (v, code) = run(m, |i, _| gadget(i, 2, 3));
        assert_eq!(code, 0);
        assert_eq!(v["moment_identity"]["equal"], json!(true));
        let (inst, opts) = load(m, &Options::default(), |_| {}).unwrap();
        assert!(verify_document(inst, &opts, &v).unwrap());
    }

    #[test]
    fn lrs_terms_and_decision() {
        let fib = r#"{"kind":"lrs","ring":"rational","coeffs":["1","1"],"initial":["1","1"]}"#;
        let (v, code) = run(fib, |i, o| lrs(i, o, 6));
        assert_eq!(code, 0);
        assert_eq!(v["terms"], json!(["1", "1", "2", "3", "5", "8"]));
        let (inst, opts) = load(fib, &Options::default(), |_| {}).unwrap();
        assert!(verify_document(inst, &opts, &v).unwrap());
    }
}
