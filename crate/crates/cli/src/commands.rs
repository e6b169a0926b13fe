//! Subcommand configuration and execution.

use crate::report::{Outcome, Status};
use crate::{BiqOp, Cli, CmArgs, Command, InputError, RunConfig, RunError, VerifyOp, MAX_PREC_BITS, MIN_PREC_BITS};
use cmpl_core::biq::{self, BiqError, SplitBiQ, SubspacePresentation};
use cmpl_core::cm::{self, CmError, CmField, CmType, RelationLattice};
use cmpl_core::exact::{parse_poly, poly_to_json, splitting_field_order, ExactError};
use cmpl_core::numeric::{self, Bounds, HascVariant, NumericError, Payload};
use cmpl_core::shimura::{self, ShimuraError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Signed, Zero};
use serde_json::{json, Value};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

/// Largest input file accepted.
pub const MAX_INPUT_BYTES: u64 = 1 << 20;
/// Largest height bound accepted, in bits.
pub const MAX_HEIGHT_BITS: u64 = 1 << 14;

struct Defaults {
    prec: u32,
    degree: Option<usize>,
    height: &'static str,
}

fn defaults(cmd: &Command) -> Option<Defaults> {
    match cmd {
        Command::Verify { op: VerifyOp::SiegelG1 { .. } } => Some(Defaults { prec: 1024, degree: Some(8), height: "10^30" }),
        Command::Verify { op: VerifyOp::BetaDiag { .. } } => Some(Defaults { prec: 512, degree: None, height: "10^6" }),
        Command::Verify { op: VerifyOp::Hasc { .. } } => Some(Defaults { prec: 600, degree: None, height: "10^8" }),
        _ => None,
    }
}

/// Parses a height bound: `1000`, `10^30`, `2^64` or `1e30`.
pub fn parse_height(s: &str) -> Result<BigInt, InputError> {
    let bad = || InputError(format!("invalid height bound {s:?} (expected an integer, a^k or me k)"));
    let t = s.trim();
    let int = |x: &str| -> Result<BigInt, InputError> {
        if x.is_empty() || x.len() > 6000 || !x.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        x.parse().map_err(|_| bad())
    };
    let small = |x: &str| -> Result<u32, InputError> { x.parse::<u32>().ok().filter(|&k| k <= 20000).ok_or_else(bad) };
    let h = if let Some((b, e)) = t.split_once('^') {
        let b = int(b)?;
        let e = small(e)?;
        if b.bits() as u128 * e as u128 > u128::from(MAX_HEIGHT_BITS) {
            return Err(InputError(format!("height bound {s} exceeds 2^{MAX_HEIGHT_BITS}")));
        }
        Pow::pow(&b, e)
    } else if let Some((m, e)) = t.split_once(['e', 'E']) {
        let e = small(e)?;
        if u64::from(e) * 10 / 3 > MAX_HEIGHT_BITS {
            return Err(InputError(format!("height bound {s} exceeds 2^{MAX_HEIGHT_BITS}")));
        }
        int(m)? * Pow::pow(&BigInt::from(10), e)
    } else {
        int(t)?
    };
    if h.bits() > MAX_HEIGHT_BITS {
        return Err(InputError(format!("height bound {s} exceeds 2^{MAX_HEIGHT_BITS}")));
    }
    if !h.is_positive() {
        return Err(InputError("height bound must be positive".into()));
    }
    Ok(h)
}

/// Parses a rational: `p/q`, an integer, or a decimal such as `-2.5e-3`.
pub fn parse_rational(s: &str) -> Result<BigRational, InputError> {
    let bad = || InputError(format!("invalid rational {s:?}"));
    let t = s.trim();
    if t.len() > 4000 {
        return Err(bad());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(InputError("zero denominator".into()));
        }
        return Ok(BigRational::new(p, q));
    }
    let (mant, exp) = match t.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok().filter(|e| e.abs() <= 4000).ok_or_else(bad)?),
        None => (t, 0),
    };
    let (neg, digits) = match mant.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = digits.split_once('.').unwrap_or((digits, ""));
    if ip.is_empty() && fp.is_empty() || !ip.bytes().chain(fp.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let n: BigInt = format!("{ip}{fp}").parse().map_err(|_| bad())?;
    let shift = exp - fp.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if shift >= 0 {
        BigRational::from_integer(n * Pow::pow(&ten, shift as u32))
    } else {
        BigRational::new(n, Pow::pow(&ten, (-shift) as u32))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

fn read_json(path: &Path) -> Result<Value, InputError> {
    let err = |e: std::io::Error| InputError(format!("cannot read {}: {e}", path.display()));
    let meta = fs::metadata(path).map_err(err)?;
    if meta.len() > MAX_INPUT_BYTES {
        return Err(InputError(format!("{} exceeds {MAX_INPUT_BYTES} bytes", path.display())));
    }
    let text = fs::read_to_string(path).map_err(err)?;
    serde_json::from_str(&text).map_err(|e| InputError(format!("{}: invalid JSON: {e}", path.display())))
}

fn parse_phi(s: &str) -> Result<Vec<usize>, InputError> {
    s.split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|_| InputError(format!("invalid CM type {s:?}: expected comma-separated indices"))))
        .collect()
}

/// Canonical JSON description of the CM types; stands in for the input in
/// the cache key.
fn cm_subject(a: &CmArgs) -> Result<Value, InputError> {
    if let Some(p) = &a.types {
        if !a.min_poly.is_empty() || !a.phi.is_empty() {
            return Err(InputError("--types cannot be combined with --min-poly/--phi".into()));
        }
        let v = read_json(p)?;
        if !v.is_array() {
            return Err(InputError(format!("{}: expected an array of CM types", p.display())));
        }
        return Ok(v);
    }
    if a.min_poly.len() != a.phi.len() {
        return Err(InputError(format!("{} --min-poly but {} --phi", a.min_poly.len(), a.phi.len())));
    }
    let mut out = Vec::new();
    for (f, phi) in a.min_poly.iter().zip(&a.phi) {
        let poly = parse_poly(f).map_err(|e| InputError(format!("invalid polynomial {f:?}: {e}")))?;
        out.push(json!({ "min_poly": poly_to_json(&poly), "phi": parse_phi(phi)? }));
    }
    Ok(Value::Array(out))
}

fn cm_types(subject: &Value) -> Result<Vec<CmType>, RunError> {
    let items = subject.as_array().ok_or_else(|| RunError::Input("expected an array of CM types".into()))?;
    if items.is_empty() {
        return Err(RunError::Input("no CM type given".into()));
    }
    items.iter().map(|v| CmType::from_json(v).map_err(cm_err)).collect()
}

fn field_from(s: &str) -> Result<Arc<CmField>, RunError> {
    let f = parse_poly(s).map_err(|e| RunError::Input(format!("invalid polynomial {s:?}: {e}")))?;
    if f.degree() > cm::MAX_FIELD_DEGREE as isize {
        return Err(RunError::Input(format!("degree {} exceeds the cap of {}", f.degree(), cm::MAX_FIELD_DEGREE)));
    }
    Ok(Arc::new(CmField::new(&f).map_err(cm_err)?))
}

pub fn config(cli: &Cli, env_cache_dir: Option<PathBuf>) -> Result<RunConfig, InputError> {
    let d = defaults(&cli.command);
    let prec_bits = cli.prec_bits.or(d.as_ref().map(|d| d.prec));
    if let Some(p) = prec_bits {
        if !(MIN_PREC_BITS..=MAX_PREC_BITS).contains(&p) {
            return Err(InputError(format!("--prec-bits must be between {MIN_PREC_BITS} and {MAX_PREC_BITS}, got {p}")));
        }
    }
    let degree_bound = cli.degree_bound.or(d.as_ref().and_then(|d| d.degree));
    if let Some(n) = degree_bound {
        if n == 0 || n > 64 {
            return Err(InputError(format!("--degree-bound must be between 1 and 64, got {n}")));
        }
    }
    let height_bound = match (&cli.height_bound, &d) {
        (Some(h), _) => Some(parse_height(h)?.to_string()),
        (None, Some(d)) => Some(parse_height(d.height)?.to_string()),
        (None, None) => None,
    };
    let (command, subject) = match &cli.command {
        Command::Relations(a) => ("relations", cm_subject(a)?),
        Command::Biq { op } => {
            let lat = |l: &Option<PathBuf>| l.as_ref().map(|p| read_json(p)).transpose();
            match op {
                BiqOp::Decompose { file, lattice } => ("biq decompose", json!({ "structure": read_json(file)?, "lattice": lat(lattice)? })),
                BiqOp::Count { file, lattice } => ("biq count", json!({ "structure": read_json(file)?, "lattice": lat(lattice)? })),
                BiqOp::Test { subspace, lattice } => ("biq test", json!({ "subspace": read_json(subspace)?, "lattice": lat(lattice)? })),
            }
        }
        Command::Siegel { g, cm } => {
            let types = if cm.min_poly.is_empty() && cm.phi.is_empty() && cm.types.is_none() { Value::Null } else { cm_subject(cm)? };
            if g.is_none() && types.is_null() {
                return Err(InputError("siegel needs --g or CM data".into()));
            }
            ("siegel", json!({ "g": g, "cm_types": types }))
        }
        Command::Hilbert { g } => ("hilbert", json!({ "g": g })),
        Command::Weyl { min_poly } => {
            let f = parse_poly(min_poly).map_err(|e| InputError(format!("invalid polynomial {min_poly:?}: {e}")))?;
            ("weyl", json!({ "min_poly": poly_to_json(&f) }))
        }
        Command::Verify { op } => match op {
            VerifyOp::SiegelG1 { tau0 } => {
                let t = numeric::parse_tau(tau0).map_err(|e| InputError(e.to_string()))?;
                ("verify siegel-g1", json!({ "tau0": t.to_string() }))
            }
            VerifyOp::BetaDiag { disc, perturb } => {
                let off = perturb.as_deref().map(parse_rational).transpose()?;
                ("verify beta-diag", json!({ "disc": disc, "perturb": off.map(|r| r.to_string()) }))
            }
            VerifyOp::Hasc { discs, values, variant } => {
                let variant = parse_variant(variant.as_deref())?;
                match (discs.is_empty(), values) {
                    (false, None) => ("verify hasc", json!({ "discs": discs, "variant": variant.as_str() })),
                    (true, Some(v)) => {
                        let exprs: Vec<String> = v.split(';').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect();
                        for e in &exprs {
                            numeric::parse_value(e).map_err(|err| InputError(format!("invalid value {e:?}: {err}")))?;
                        }
                        ("verify hasc", json!({ "values": exprs, "variant": variant.as_str() }))
                    }
                    _ => return Err(InputError("give exactly one of --discs or --values".into())),
                }
            }
        },
    };
    let cache_dir = cli.cache_dir.clone().or(env_cache_dir).filter(|p| !p.as_os_str().is_empty());
    Ok(RunConfig { command: command.into(), subject, prec_bits, degree_bound, height_bound, cache_dir, json: cli.json })
}

fn parse_variant(s: Option<&str>) -> Result<HascVariant, InputError> {
    match s.unwrap_or("products") {
        "products" => Ok(HascVariant::Products),
        "reciprocity" => Ok(HascVariant::Reciprocity),
        "raw" => Ok(HascVariant::Raw),
        v => Err(InputError(format!("unknown variant {v:?} (products, reciprocity, raw)"))),
    }
}

fn cm_err(e: CmError) -> RunError {
    match e {
        CmError::Invariant(m) => RunError::Failed(format!("internal invariant failed: {m}")),
        e => RunError::Input(e.to_string()),
    }
}

fn shimura_err(e: ShimuraError) -> RunError {
    match e {
        ShimuraError::Cm(e) => cm_err(e),
        e => RunError::Input(e.to_string()),
    }
}

fn biq_err(e: BiqError) -> RunError {
    RunError::Input(e.to_string())
}

fn numeric_err(e: NumericError) -> RunError {
    match e {
        NumericError::PrecisionExhausted(_) | NumericError::Ball(_) => RunError::Failed(e.to_string()),
        NumericError::Exact(ExactError::Unsupported(_)) => RunError::Failed(e.to_string()),
        e => RunError::Input(e.to_string()),
    }
}

fn lattice_from(v: &Value) -> Result<Option<RelationLattice>, RunError> {
    if v.is_null() {
        return Ok(None);
    }
    RelationLattice::from_json(v).map(Some).map_err(|e| RunError::Input(format!("invalid relation lattice: {e}")))
}

fn labels_json(s: &SplitBiQ) -> Value {
    json!({
        "formal": s.labels().iter().map(|m| m.formal()).collect::<Vec<_>>(),
        "theta_pi": s.labels().iter().map(|m| m.theta_pi()).collect::<Vec<_>>(),
    })
}

fn labels_line(s: &SplitBiQ) -> String {
    let f: Vec<String> = s.labels().iter().map(|m| m.formal()).collect();
    let t: Vec<String> = s.labels().iter().map(|m| m.theta_pi()).collect();
    format!("labels: [{}]  ({})", f.join(", "), t.join(", "))
}

fn blocks_text(p: &[Vec<usize>]) -> String {
    p.iter().map(|b| format!("{b:?}")).collect::<Vec<_>>().join(" ")
}

fn pairs_text(bs: &[Vec<(usize, usize)>]) -> String {
    bs.iter()
        .map(|b| format!("{{{}}}", b.iter().map(|(j, k)| format!("θ{j}θ{k}")).collect::<Vec<_>>().join(", ")))
        .collect::<Vec<_>>()
        .join(" ")
}

fn prec(c: &RunConfig) -> u32 {
    c.prec_bits.unwrap_or(MIN_PREC_BITS)
}

fn height(c: &RunConfig) -> Result<BigInt, RunError> {
    let h = c.height_bound.as_deref().ok_or_else(|| RunError::Input("missing height bound".into()))?;
    h.parse().map_err(|_| RunError::Input("invalid height bound".into()))
}

pub fn execute(cli: &Cli, c: &RunConfig) -> Result<Outcome, RunError> {
    let s = &c.subject;
    match &cli.command {
        Command::Relations(_) => relations(s),
        Command::Biq { op } => biq_op(op, s),
        Command::Siegel { .. } => siegel(s),
        Command::Hilbert { g } => {
            let t = shimura::hilbert_tangent_biq(*g).map_err(shimura_err)?;
            let summary = vec![format!("hilbert tangent structure, g = {g}"), labels_line(&t)];
            Ok(Outcome::ok(json!({ "g": g, "dim": t.dim(), "labels": labels_json(&t) }), summary))
        }
        Command::Weyl { min_poly } => weyl(min_poly),
        Command::Verify { op } => verify(op, c),
    }
}

fn relations(s: &Value) -> Result<Outcome, RunError> {
    let types = cm_types(s)?;
    let lat = cm::relation_lattice(&types).map_err(cm_err)?;
    let q = cm::quadratic_analysis_for(&lat);
    let labels: Vec<String> = (1..=lat.g()).map(|j| format!("θ{j}")).collect();
    let mut summary = vec![
        format!("g = {}, Mumford-Tate dimension {}, relation rank {}", lat.g(), lat.mt_dim(), lat.rank()),
        format!("symbols: L, {}", labels.join(", ")),
    ];
    if lat.rank() == 0 {
        summary.push("relation lattice: trivial".into());
    } else {
        summary.push(format!("relation lattice basis (exponents of L, θ1..θ{}):", lat.g()));
        for r in lat.basis().to_json().as_array().into_iter().flatten() {
            summary.push(format!("  {r}"));
        }
    }
    summary.push(format!("θjθk/π classes: {} (predicted span dimension {})", pairs_text(&q.classes), q.predicted_dim));
    let result = json!({
        "cm_types": types.iter().map(CmType::to_json).collect::<Vec<_>>(),
        "g": lat.g(),
        "mt_dim": lat.mt_dim(),
        "rank": lat.rank(),
        "lattice": lat.to_json(),
        "symbols": { "formal": std::iter::once("L".to_string()).chain((1..=lat.g()).map(|j| format!("t{j}"))).collect::<Vec<_>>(), "theta_pi": labels },
        "quadratic": q.to_json(),
    });
    Ok(Outcome::ok(result, summary))
}

fn biq_op(op: &BiqOp, s: &Value) -> Result<Outcome, RunError> {
    let lat = lattice_from(&s["lattice"])?;
    match op {
        BiqOp::Decompose { .. } | BiqOp::Count { .. } => {
            let st = SplitBiQ::from_json(&s["structure"]).map_err(biq_err)?;
            let blocks = biq::isotypic_partition(&st, lat.as_ref()).map_err(biq_err)?;
            let mut summary = vec![labels_line(&st), format!("isotypic blocks (0-based): {}", blocks_text(&blocks))];
            let mut result = json!({ "dim": st.dim(), "labels": labels_json(&st), "partition": biq::partition_to_json(&blocks) });
            if matches!(op, BiqOp::Count { .. }) {
                let n = biq::count_biq_subspaces(&st, lat.as_ref()).map_err(biq_err)?;
                summary.push(format!("bi-algebraic subspaces: {n}"));
                result["count"] = n.to_json();
            }
            Ok(Outcome::ok(result, summary))
        }
        BiqOp::Test { .. } => {
            let v = SubspacePresentation::from_json(&s["subspace"]).map_err(biq_err)?;
            let ok = biq::is_biq_subspace(&v, lat.as_ref()).map_err(biq_err)?;
            let mut result = json!({ "dim": v.dim(), "ambient_dim": v.ambient().dim(), "is_biq": ok });
            let mut summary = vec![format!("subspace of dimension {} in {}: {}", v.dim(), v.ambient().dim(), if ok { "bi-algebraic" } else { "not bi-algebraic" })];
            if ok && v.dim() == 1 {
                let p = biq::period_of_line(&v, lat.as_ref()).map_err(biq_err)?;
                summary.push(format!("period: {} ({})", p.formal(), p.theta_pi()));
                result["period"] = json!({ "monomial": p.to_json(), "formal": p.formal(), "theta_pi": p.theta_pi() });
            }
            Ok(Outcome::ok(result, summary))
        }
    }
}

fn siegel(s: &Value) -> Result<Outcome, RunError> {
    let (lat, types) = if s["cm_types"].is_null() {
        (None, Vec::new())
    } else {
        let types = cm_types(&s["cm_types"])?;
        (Some(cm::relation_lattice(&types).map_err(cm_err)?), types)
    };
    let g = match (s["g"].as_u64(), &lat) {
        (Some(g), Some(l)) if g as usize != l.g() => {
            return Err(RunError::Input(format!("--g {g} does not match the CM data (g = {})", l.g())));
        }
        (Some(g), _) => g as usize,
        (None, Some(l)) => l.g(),
        (None, None) => return Err(RunError::Input("siegel needs --g or CM data".into())),
    };
    if g > 64 {
        return Err(RunError::Input(format!("g = {g} exceeds the cap of 64")));
    }
    let t = shimura::siegel_tangent_biq(g).map_err(shimura_err)?;
    let r = shimura::roots(g).map_err(shimura_err)?;
    let mut summary = vec![format!("siegel tangent structure, g = {g}, dimension {}", t.dim()), labels_line(&t)];
    summary.push(format!(
        "roots: {} positive noncompact, {} compact",
        r.noncompact_positive().len(),
        r.compact().len()
    ));
    let mut result = json!({
        "g": g,
        "dim": t.dim(),
        "labels": labels_json(&t),
        "lines": shimura::siegel_lines(g).iter().map(|&(j, k)| json!([j, k])).collect::<Vec<_>>(),
        "roots": r.to_json(),
    });
    if let Some(l) = &lat {
        let rs = shimura::rootspace_analysis(g, l).map_err(shimura_err)?;
        summary.push(format!("condition (i): {}", rs.condition_i));
        summary.push(format!("isotypic blocks: {}", pairs_text(&rs.blocks)));
        result["cm_types"] = json!(types.iter().map(CmType::to_json).collect::<Vec<_>>());
        result["lattice"] = l.to_json();
        result["rootspace"] = rs.to_json();
    }
    Ok(Outcome::ok(result, summary))
}

fn weyl(min_poly: &str) -> Result<Outcome, RunError> {
    let e = field_from(min_poly)?;
    let weyl = cm::weyl_check(&e).map_err(cm_err)?;
    let order = splitting_field_order(e.min_poly()).map_err(|x| cm_err(CmError::Exact(x)))?;
    let mut summary = vec![
        format!("field {} (g = {}), splitting field degree {order}", e.min_poly(), e.g()),
        format!("weyl: {weyl}"),
    ];
    let mut result = json!({ "min_poly": poly_to_json(e.min_poly()), "g": e.g(), "splitting_order": order, "weyl": weyl });
    if weyl {
        let subs = shimura::special_subvarieties_weyl(&e).map_err(shimura_err)?;
        let kinds: Vec<String> = subs.iter().map(|d| format!("{} (dim {})", d.to_json()["kind"].as_str().unwrap_or("?"), d.dim)).collect();
        summary.push(format!("special subvarieties through the point: {}", kinds.join(", ")));
        result["special_subvarieties"] = json!(subs.iter().map(|d| d.to_json()).collect::<Vec<_>>());
    }
    Ok(Outcome::ok(result, summary))
}

fn numeric_outcome(o: numeric::Outcome, title: String) -> Outcome {
    let mut summary = vec![title];
    match &o {
        numeric::Outcome::Certified(c) => {
            match &c.payload {
                Payload::Polynomial(p) => summary.push(format!("minimal polynomial: {p}")),
                Payload::Relation { labels, coeffs } => {
                    let terms: Vec<String> = coeffs.iter().zip(labels).filter(|(c, _)| !c.is_zero()).map(|(c, l)| format!("({c})·{l}")).collect();
                    summary.push(format!("relation: {} = 0", terms.join(" + ")));
                }
            }
            summary.push(format!(
                "searched at {} bits, verified at {} bits, residual 2^{:.1}",
                c.prec_bits, c.verified_at_bits, c.residual_log2
            ));
            Outcome { status: Status::Certified, result: o.to_json(), certificates: vec![c.to_json()], summary }
        }
        numeric::Outcome::NoneFound(n) => {
            let b = &n.bounds;
            let deg = b.degree.map(|d| format!("degree ≤ {d}, ")).unwrap_or_default();
            summary.push(format!("no relation found with {deg}height ≤ {} at {} bits (inconclusive)", b.height, n.prec_bits));
            Outcome { status: Status::NoneFound, result: o.to_json(), certificates: Vec::new(), summary }
        }
    }
}

fn verify(op: &VerifyOp, c: &RunConfig) -> Result<Outcome, RunError> {
    let p = prec(c);
    let h = height(c)?;
    let s = &c.subject;
    match op {
        VerifyOp::SiegelG1 { tau0 } => {
            let deg = c.degree_bound.unwrap_or(8);
            let o = numeric::verify_siegel_g1(tau0, p, deg, &h).map_err(numeric_err)?;
            Ok(numeric_outcome(o, format!("j'(τ0)·π/θ² at τ0 = {}", s["tau0"].as_str().unwrap_or(tau0))))
        }
        VerifyOp::BetaDiag { disc, .. } => {
            let off = match s["perturb"].as_str() {
                Some(r) => parse_rational(r).map_err(RunError::from)?,
                None => BigRational::zero(),
            };
            let bounds = Bounds::new(None, h);
            let o = numeric::verify_beta_diag_g1_perturbed(*disc, p, &bounds, &off).map_err(numeric_err)?;
            let title = if off.is_zero() { format!("η1 for discriminant {disc}") } else { format!("η1 + {off} for discriminant {disc}") };
            Ok(numeric_outcome(o, title))
        }
        VerifyOp::Hasc { variant, .. } => {
            let variant = parse_variant(variant.as_deref())?;
            if let Some(discs) = s["discs"].as_array() {
                let discs: Vec<i64> = discs.iter().filter_map(Value::as_i64).collect();
                let o = numeric::hasc_falsify_discs(&discs, p, &h, variant).map_err(numeric_err)?;
                return Ok(numeric_outcome(o, format!("{} relations for θ of discriminants {discs:?}", variant.as_str())));
            }
            let exprs: Vec<&str> = s["values"].as_array().into_iter().flatten().filter_map(Value::as_str).collect();
            let need = numeric::hasc_precision(exprs.len(), p, &h, variant);
            let vals = exprs
                .iter()
                .map(|e| numeric::parse_value(e).and_then(|x| x.eval(need)))
                .collect::<Result<Vec<_>, _>>()
                .map_err(numeric_err)?;
            let o = numeric::hasc_falsify(&vals, p, &h, variant).map_err(numeric_err)?;
            Ok(numeric_outcome(o, format!("{} relations among [{}]", variant.as_str(), exprs.join("; "))))
        }
    }
}
