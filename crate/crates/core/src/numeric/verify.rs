//! Certified numeric verification pipelines and the falsification harness.

use super::modular::{g2_weight2, j_and_derivative};
use super::periods::{cm_model, cm_theta, model_periods};
use super::tau::{parse_tau, QuadraticNumber};
use super::NumericError;
use crate::ball::{pi, two_pi_i, BallComplex, BallReal};
use crate::exact::poly::big_log2;
use crate::exact::relation::{accuracy_bits, search_precision, VecSource};
use crate::exact::{algdep_refinable, integer_relation_refinable, poly_to_json, ExactError, IntPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};
use std::cell::RefCell;

/// Search bounds of a verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub degree: Option<usize>,
    pub height: BigInt,
}

impl Bounds {
    pub fn new(degree: Option<usize>, height: BigInt) -> Self {
        Bounds { degree, height }
    }

    pub fn to_json(&self) -> Value {
        let mut m = serde_json::Map::new();
        if let Some(d) = self.degree {
            m.insert("degree".into(), json!(d));
        }
        m.insert("height".into(), json!(self.height.to_string()));
        m.insert("height_log2".into(), json!(big_log2(&self.height)));
        Value::Object(m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateKind {
    SiegelG1,
    BetaDiagG1,
    Hasc,
}

impl CertificateKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CertificateKind::SiegelG1 => "siegel-g1",
            CertificateKind::BetaDiagG1 => "beta-diag-g1",
            CertificateKind::Hasc => "hasc",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Payload {
    Polynomial(IntPoly),
    Relation { labels: Vec<String>, coeffs: Vec<BigInt> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub input: Value,
    pub bounds: Bounds,
    pub payload: Payload,
    /// Precision of the search.
    pub prec_bits: u32,
    pub residual_log2: f64,
    pub verified_at_bits: u32,
}

impl Certificate {
    pub fn to_json(&self) -> Value {
        let mut m = serde_json::Map::new();
        m.insert("kind".into(), json!(self.kind.as_str()));
        m.insert("input".into(), self.input.clone());
        m.insert("bounds".into(), self.bounds.to_json());
        match &self.payload {
            Payload::Polynomial(p) => {
                m.insert("polynomial".into(), poly_to_json(p));
            }
            Payload::Relation { labels, coeffs } => {
                let c: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
                m.insert("relation".into(), json!({ "labels": labels, "coeffs": c }));
            }
        }
        m.insert("prec_bits".into(), json!(self.prec_bits));
        m.insert("residual_log2".into(), json!(self.residual_log2));
        m.insert("verified_at_bits".into(), json!(self.verified_at_bits));
        Value::Object(m)
    }
}

/// A search that found nothing within its bounds. Evidence, not proof.
#[derive(Clone, Debug, PartialEq)]
pub struct NoneFound {
    pub kind: CertificateKind,
    pub input: Value,
    pub bounds: Bounds,
    pub prec_bits: u32,
}

impl NoneFound {
    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind.as_str(),
            "input": self.input,
            "bounds": self.bounds.to_json(),
            "prec_bits": self.prec_bits,
            "status": "none-found",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Certified(Certificate),
    NoneFound(NoneFound),
}

impl Outcome {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Outcome::Certified(c) => Some(c),
            Outcome::NoneFound(_) => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Outcome::Certified(c) => c.to_json(),
            Outcome::NoneFound(n) => n.to_json(),
        }
    }
}

/// Runs a relation search with a source that may fail with a numeric error;
/// the first such error is reported instead of its exact-layer stand-in.
fn with_stash<T>(
    stash: &RefCell<Option<NumericError>>,
    r: Result<T, ExactError>,
) -> Result<T, NumericError> {
    match r {
        Ok(v) => Ok(v),
        Err(e) => Err(stash.borrow_mut().take().unwrap_or_else(|| e.into())),
    }
}

fn stash_err(stash: &RefCell<Option<NumericError>>, e: NumericError, prec: u32) -> ExactError {
    let out = ExactError::InsufficientPrecision { have: prec, need: prec };
    stash.borrow_mut().get_or_insert(e);
    out
}

fn tau_discriminant(tau0: &QuadraticNumber) -> Result<i64, NumericError> {
    let d = tau0.discriminant().ok_or(NumericError::NotUpperHalfPlane)?;
    d.to_i64().ok_or(NumericError::UnsupportedDiscriminant(i64::MIN))
}

/// `j'(τ0)·π/θ²` for the CM curve attached to the order of `τ0`.
pub fn siegel_value_g1(tau0: &QuadraticNumber, disc: i64, prec: u32) -> Result<BallComplex, NumericError> {
    let wp = prec + 32;
    let t = tau0.to_ball(wp + 16);
    let (_, jp) = j_and_derivative(&t, wp)?;
    if jp.contains_zero() {
        return Err(NumericError::EllipticPointDegenerate(format!("j'(τ0) is not separated from 0 at {prec} bits")));
    }
    let theta = cm_theta(disc, wp)?;
    let v = jp.mul_real(&pi(wp)).div(&theta.sqr())?;
    Ok(v.with_prec(prec))
}

/// Certifies that `j'(τ0)·π/θ²` is algebraic of degree at most
/// `degree_bound` and height at most `height`.
pub fn verify_siegel_g1(tau0: &str, prec: u32, degree_bound: usize, height: &BigInt) -> Result<Outcome, NumericError> {
    let t = parse_tau(tau0)?;
    let disc = tau_discriminant(&t)?;
    if disc == -3 || disc == -4 {
        return Err(NumericError::EllipticPointDegenerate(format!(
            "τ0 is equivalent to an elliptic point (discriminant {disc}), so j'(τ0) = 0"
        )));
    }
    cm_model(disc)?;
    if degree_bound == 0 {
        return Err(NumericError::Exact(ExactError::DimensionMismatch("degree bound must be positive".into())));
    }
    let stash = RefCell::new(None);
    let source = |p: u32| siegel_value_g1(&t, disc, p).map_err(|e| stash_err(&stash, e, p));
    let res = with_stash(&stash, algdep_refinable(&source, prec, degree_bound, height))?;
    let input = json!({ "tau0": tau0, "discriminant": disc, "value": "j'(tau0)*pi/theta^2" });
    let bounds = Bounds::new(Some(degree_bound), height.clone());
    Ok(match res {
        Some(c) => Outcome::Certified(Certificate {
            kind: CertificateKind::SiegelG1,
            input,
            bounds,
            payload: Payload::Polynomial(c.poly),
            prec_bits: c.search_prec,
            residual_log2: c.residual_log2,
            verified_at_bits: c.verified_prec,
        }),
        None => Outcome::NoneFound(NoneFound {
            kind: CertificateKind::SiegelG1,
            input,
            bounds,
            prec_bits: search_precision(degree_bound + 1, height, prec),
        }),
    })
}

/// Labels of the values
/// `[η1, θ, √d·θ, L/θ, √d·L/θ]` searched by [`verify_beta_diag_g1`].
pub const BETA_LABELS: [&str; 5] = ["eta1", "theta", "sqrt(d)*theta", "2*pi*i/theta", "sqrt(d)*2*pi*i/theta"];

/// The values `[η1, θ, √d·θ, L/θ, √d·L/θ]` for the CM model of `disc`,
/// with `η1` shifted by `offset`. Here `θ = Ω` and `η1 = G2(τ)/Ω` is the
/// quasi-period of `Ω` in the lattice `Ω(Z + τZ)`, `τ = Ω'/Ω`.
pub fn beta_values(disc: i64, offset: &BigRational, prec: u32) -> Result<Vec<BallComplex>, NumericError> {
    let wp = prec + 32;
    let model = cm_model(disc)?;
    let (o1, o2) = model_periods(&model, wp)?;
    let tau = o2.div(&o1)?;
    let mut eta1 = g2_weight2(&tau, wp)?.div(&o1)?;
    if !offset.is_zero() {
        eta1 = eta1.add(&BallComplex::from_real(BallReal::from_rational(offset, wp)));
    }
    let sd = BallComplex::new(BallReal::zero(wp), BallReal::from_int(-disc, wp).sqrt()?);
    let l_over = two_pi_i(wp).div(&o1)?;
    let vals = vec![eta1, o1.clone(), sd.mul(&o1), l_over.clone(), sd.mul(&l_over)];
    Ok(vals.into_iter().map(|v| v.with_prec(prec)).collect())
}

/// Decodes a relation over `[η1, θ, √d θ, L/θ, √d L/θ]` into
/// `η1 = a θ + b L/θ` with `a = -(c1 + c2√d)/c0`, `b = -(c3 + c4√d)/c0`.
fn decode_beta(c: &[BigInt], disc: i64) -> Value {
    let part = |x: &BigInt, y: &BigInt| {
        json!({ "rational": format!("{}/{}", -x, &c[0]), "sqrt_d": format!("{}/{}", -y, &c[0]), "d": disc })
    };
    json!({ "a": part(&c[1], &c[2]), "b": part(&c[3], &c[4]), "b_nonzero": !(c[3].is_zero() && c[4].is_zero()) })
}

/// Certifies `η1 ∈ Q̄·θ + Q̄·(2πi/θ)` for the CM curve of discriminant
/// `disc` by an integer relation over `[η1, θ, √d θ, L/θ, √d L/θ]` with a
/// nonzero `η1` coefficient.
pub fn verify_beta_diag_g1(disc: i64, prec: u32, bounds: &Bounds) -> Result<Outcome, NumericError> {
    verify_beta_diag_g1_perturbed(disc, prec, bounds, &BigRational::zero())
}

/// [`verify_beta_diag_g1`] with `η1` replaced by `η1 + offset`.
pub fn verify_beta_diag_g1_perturbed(
    disc: i64,
    prec: u32,
    bounds: &Bounds,
    offset: &BigRational,
) -> Result<Outcome, NumericError> {
    cm_model(disc)?;
    let stash = RefCell::new(None);
    let source = |p: u32| beta_values(disc, offset, p).map_err(|e| stash_err(&stash, e, p));
    let res = with_stash(&stash, integer_relation_refinable(&source, prec, &bounds.height))?;
    let mut input = json!({ "discriminant": disc, "values": BETA_LABELS });
    if !offset.is_zero() {
        input["eta1_offset"] = json!(offset.to_string());
    }
    let none = |input| {
        Outcome::NoneFound(NoneFound {
            kind: CertificateKind::BetaDiagG1,
            input,
            bounds: bounds.clone(),
            prec_bits: search_precision(BETA_LABELS.len(), &bounds.height, prec),
        })
    };
    Ok(match res {
        Some(c) if !c.coeffs[0].is_zero() => {
            input["decoded"] = decode_beta(&c.coeffs, disc);
            Outcome::Certified(Certificate {
                kind: CertificateKind::BetaDiagG1,
                input,
                bounds: bounds.clone(),
                payload: Payload::Relation { labels: BETA_LABELS.iter().map(|s| s.to_string()).collect(), coeffs: c.coeffs },
                prec_bits: c.search_prec,
                residual_log2: c.residual_log2,
                verified_at_bits: c.verified_prec,
            })
        }
        _ => none(input),
    })
}

/// Which value set the falsification harness searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HascVariant {
    /// `θ_j θ_k / π` for `j ≤ k`.
    Products,
    /// `2πi`, then `θ_j` and `2πi/θ_j` for each `j`.
    Reciprocity,
    /// The values themselves.
    Raw,
}

impl HascVariant {
    pub fn as_str(&self) -> &'static str {
        match self {
            HascVariant::Products => "products",
            HascVariant::Reciprocity => "reciprocity",
            HascVariant::Raw => "raw",
        }
    }
}

fn hasc_labels(n: usize, variant: HascVariant) -> Vec<String> {
    match variant {
        HascVariant::Products => {
            let mut out = Vec::new();
            for j in 1..=n {
                for k in j..=n {
                    out.push(if j == k { format!("θ{j}²/π") } else { format!("θ{j}θ{k}/π") });
                }
            }
            out
        }
        HascVariant::Reciprocity => {
            let mut out = vec!["2πi".to_string()];
            for j in 1..=n {
                out.push(format!("θ{j}"));
                out.push(format!("2πi/θ{j}"));
            }
            out
        }
        HascVariant::Raw => (1..=n).map(|j| format!("v{j}")).collect(),
    }
}

fn hasc_values(thetas: &[BallComplex], variant: HascVariant, prec: u32) -> Result<Vec<BallComplex>, NumericError> {
    match variant {
        HascVariant::Products => {
            let p = pi(prec + 16);
            let mut out = Vec::new();
            for j in 0..thetas.len() {
                for k in j..thetas.len() {
                    out.push(thetas[j].mul(&thetas[k]).div_real(&p)?.with_prec(prec));
                }
            }
            Ok(out)
        }
        HascVariant::Reciprocity => {
            let l = two_pi_i(prec + 16);
            let mut out = vec![l.clone().with_prec(prec)];
            for t in thetas {
                out.push(t.clone().with_prec(prec));
                out.push(l.div(t)?.with_prec(prec));
            }
            Ok(out)
        }
        HascVariant::Raw => Ok(thetas.iter().map(|t| t.clone().with_prec(prec)).collect()),
    }
}

/// Searches for an integer relation of height at most `height` among the
/// values derived from `thetas`. The balls must be accurate to twice the
/// search precision (see [`hasc_precision`]) so that any relation can be
/// re-verified.
pub fn hasc_falsify(
    thetas: &[BallComplex],
    prec: u32,
    height: &BigInt,
    variant: HascVariant,
) -> Result<Outcome, NumericError> {
    if thetas.len() < 2 && variant != HascVariant::Reciprocity || thetas.is_empty() {
        return Err(NumericError::Exact(ExactError::DimensionMismatch("need at least two values".into())));
    }
    let have = thetas.iter().map(accuracy_bits).min().unwrap_or(0);
    let need = hasc_precision(thetas.len(), prec, height, variant) - 56;
    if have < need {
        return Err(NumericError::InsufficientPrecision { have, need });
    }
    let stash = RefCell::new(None);
    let source: &VecSource<'_> = &|p: u32| {
        if have + 8 < p {
            return Err(stash_err(&stash, NumericError::InsufficientPrecision { have, need: p }, p));
        }
        hasc_values(thetas, variant, p).map_err(|e| stash_err(&stash, e, p))
    };
    let res = with_stash(&stash, integer_relation_refinable(source, prec, height))?;
    let labels = hasc_labels(thetas.len(), variant);
    let input = json!({ "variant": variant.as_str(), "values": labels });
    let bounds = Bounds::new(None, height.clone());
    Ok(match res {
        Some(c) => Outcome::Certified(Certificate {
            kind: CertificateKind::Hasc,
            input,
            bounds,
            payload: Payload::Relation { labels, coeffs: c.coeffs },
            prec_bits: c.search_prec,
            residual_log2: c.residual_log2,
            verified_at_bits: c.verified_prec,
        }),
        None => Outcome::NoneFound(NoneFound {
            kind: CertificateKind::Hasc,
            input,
            bounds,
            prec_bits: search_precision(labels.len(), height, prec),
        }),
    })
}

/// Accuracy the inputs of [`hasc_falsify`] need.
pub fn hasc_precision(n_thetas: usize, prec: u32, height: &BigInt, variant: HascVariant) -> u32 {
    let dim = match variant {
        HascVariant::Products => n_thetas * (n_thetas + 1) / 2,
        HascVariant::Reciprocity => 2 * n_thetas + 1,
        HascVariant::Raw => n_thetas,
    };
    2 * search_precision(dim, height, prec) + 64
}

/// [`hasc_falsify`] on the representative periods of CM discriminants.
pub fn hasc_falsify_discs(discs: &[i64], prec: u32, height: &BigInt, variant: HascVariant) -> Result<Outcome, NumericError> {
    let p = hasc_precision(discs.len(), prec, height, variant);
    let thetas = discs.iter().map(|&d| cm_theta(d, p)).collect::<Result<Vec<_>, _>>()?;
    let mut out = hasc_falsify(&thetas, prec, height, variant)?;
    let tag = json!(discs);
    match &mut out {
        Outcome::Certified(c) => c.input["discriminants"] = tag,
        Outcome::NoneFound(n) => n.input["discriminants"] = tag,
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    
    fn h(n: u64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn siegel_at_2i() {
        let out = verify_siegel_g1("2i", 400, 4, &h(10u64.pow(15))).unwrap();
        let c = out.certificate().expect("certified");
        // j'(2i)·π/θ² = -205821 i for the model y^2 = x^3 - 11x + 14.
        assert_eq!(c.payload, Payload::Polynomial(IntPoly::from_i64(&[42362284041, 0, 1])));
        assert_eq!(c.verified_at_bits, 2 * c.prec_bits);
        assert!(c.residual_log2 < -(c.verified_at_bits as f64) * 0.8);
        let j = c.to_json();
        for k in ["kind", "input", "bounds", "polynomial", "prec_bits", "residual_log2", "verified_at_bits"] {
            assert!(j.get(k).is_some(), "{k}");
        }
    }

    #[test]
    fn siegel_errors() {
        let hb = h(1000);
        assert!(matches!(verify_siegel_g1("i", 256, 2, &hb), Err(NumericError::EllipticPointDegenerate(_))));
        assert!(matches!(verify_siegel_g1("rho", 256, 2, &hb), Err(NumericError::EllipticPointDegenerate(_))));
        assert!(matches!(verify_siegel_g1("(1+i)/2", 256, 2, &hb), Err(NumericError::EllipticPointDegenerate(_))));
        assert!(matches!(verify_siegel_g1("sqrt(-5)", 256, 2, &hb), Err(NumericError::UnsupportedDiscriminant(-20))));
        assert!(matches!(verify_siegel_g1("-i", 256, 2, &hb), Err(NumericError::NotUpperHalfPlane)));
        assert!(matches!(
            verify_siegel_g1("2i", 64, 8, &h(10u64.pow(18))),
            Err(NumericError::InsufficientPrecision { .. })
        ));
    }

    #[test]
    fn siegel_bounds_too_small() {
        let out = verify_siegel_g1("2i", 256, 2, &h(1000)).unwrap();
        assert!(matches!(out, Outcome::NoneFound(_)));
        assert_eq!(out.to_json()["status"], "none-found");
    }

    #[test]
    fn beta_diag() {
        let b = Bounds::new(None, h(10_000));
        for d in [-4, -3, -7] {
            let out = verify_beta_diag_g1(d, 256, &b).unwrap();
            let c = out.certificate().unwrap_or_else(|| panic!("disc {d}"));
            let Payload::Relation { coeffs, .. } = &c.payload else { panic!() };
            assert!(!coeffs[0].is_zero());
            assert_eq!(c.input["decoded"]["b_nonzero"], true, "disc {d}");
        }
        // L/θ alone: at τ = i, η1 = π/θ, i.e. 4 η1 + √-4·L/θ = 0.
        let c = verify_beta_diag_g1(-4, 256, &b).unwrap();
        let Payload::Relation { coeffs, .. } = &c.certificate().unwrap().payload else { panic!() };
        let expect: Vec<BigInt> = [4, 0, 0, 0, 1].iter().map(|&x| BigInt::from(x)).collect();
        let neg: Vec<BigInt> = expect.iter().map(|x| -x).collect();
        assert!(coeffs == &expect || coeffs == &neg, "{coeffs:?}");
    }

    #[test]
    fn beta_diag_perturbed_fails() {
        let b = Bounds::new(None, h(10_000));
        let off = BigRational::new(h(1), h(10u64.pow(10)));
        for d in [-4, -3] {
            let out = verify_beta_diag_g1_perturbed(d, 256, &b, &off).unwrap();
            assert!(matches!(out, Outcome::NoneFound(_)), "disc {d}");
        }
    }

    #[test]
    fn hasc_planted_and_empty() {
        let v = BallComplex::from_real(crate::ball::BallReal::from_int(2, 1400).sqrt().unwrap());
        let w = BallComplex::from_real(pi(1400));
        let out = hasc_falsify(&[v.clone(), v.mul_int(2), w.clone()], 600, &h(10u64.pow(8)), HascVariant::Raw).unwrap();
        let Payload::Relation { coeffs, .. } = &out.certificate().unwrap().payload else { panic!() };
        assert_eq!(coeffs, &vec![h(2), -h(1), BigInt::zero()]);
        let none = hasc_falsify(&[v, w], 600, &h(10u64.pow(8)), HascVariant::Raw).unwrap();
        assert!(matches!(none, Outcome::NoneFound(_)));
    }

    #[test]
    fn hasc_needs_accurate_inputs() {
        let v = BallComplex::from_real(crate::ball::BallReal::from_int(2, 700).sqrt().unwrap());
        let w = BallComplex::from_real(pi(700));
        let r = hasc_falsify(&[v.mul_int(3), w], 600, &h(10u64.pow(8)), HascVariant::Raw);
        assert!(matches!(r, Err(NumericError::InsufficientPrecision { .. })));
    }

    #[test]
    fn hasc_products_and_reciprocity() {
        let hb = h(10u64.pow(8));
        let out = hasc_falsify_discs(&[-4, -3], 600, &hb, HascVariant::Products).unwrap();
        assert!(matches!(out, Outcome::NoneFound(_)));
        assert_eq!(out.to_json()["input"]["values"][1], "θ1θ2/π");
        for d in [-4, -3] {
            let out = hasc_falsify_discs(&[d], 600, &hb, HascVariant::Reciprocity).unwrap();
            assert!(matches!(out, Outcome::NoneFound(_)), "disc {d}");
        }
        // A duplicated period gives θ1²/π = θ1θ2/π.
        let out = hasc_falsify_discs(&[-4, -4], 600, &hb, HascVariant::Products).unwrap();
        let Payload::Relation { coeffs, .. } = &out.certificate().unwrap().payload else { panic!() };
        assert!(coeffs.iter().sum::<BigInt>().is_zero() && coeffs.iter().any(|c| !c.is_zero()));
    }
}
