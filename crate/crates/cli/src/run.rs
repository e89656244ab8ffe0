//! Command dispatch and result rendering.

use serde_json::{json, Map, Value};

use petit_core::charp::{self, Regime};
use petit_core::nucleus::{self, APolyVerdict, AnsatzConfig, FSubspace, SubspaceStatus};
use petit_core::petit::{is_two_sided, make_petit, PetitAlgebra};
use petit_core::plt::{self, PseudoLinearTransform};
use petit_core::{Element, Error, OrePoly, Result};

use crate::session::{Context, Format};

/// Every command, in help order.
pub const COMMANDS: [&str; 21] = [
    "mul", "divmod-r", "divmod-l", "gcd-r", "petit", "assoc", "two-sided", "nuclei", "eigenring", "apoly", "vp",
    "minpoly", "center", "bound", "diffext", "split", "roots", "resultant", "charpoly", "similar", "scenario",
];

/// Default bound for the root search.
pub const DEFAULT_ROOT_BOUND: usize = 2;
/// Default numerator bound for the similarity search.
pub const DEFAULT_SIMILARITY_BOUND: usize = 4;

/// A rendered result: exit code 0 on success, 2 when nothing was found
/// within the bound.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub value: Value,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(value: Value) -> Outcome {
        Outcome { value, exit_code: 0 }
    }

    fn not_found(value: Value) -> Outcome {
        Outcome { value, exit_code: 2 }
    }

    /// Sorted-key JSON, or `key: value` lines.
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => format!("{}\n", serde_json::to_string_pretty(&self.value).expect("serializable")),
            Format::Text => render_text(&self.value, ""),
        }
    }
}

fn render_text(v: &Value, prefix: &str) -> String {
    let mut out = String::new();
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                match x {
                    Value::Object(_) => out.push_str(&render_text(x, &key)),
                    _ => out.push_str(&format!("{key}: {}\n", scalar_text(x))),
                }
            }
        }
        _ => out.push_str(&format!("{}\n", scalar_text(v))),
    }
    out
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => format!("[{}]", a.iter().map(scalar_text).collect::<Vec<_>>().join(", ")),
        Value::Null => "none".into(),
        other => other.to_string(),
    }
}

/// Settings resolved from flags, session options and the environment.
#[derive(Clone, Debug, Default)]
pub struct Settings {
    pub bound: Option<usize>,
    pub seed: u64,
}

fn arity(cmd: &str, args: &[String], min: usize, max: usize) -> Result<()> {
    if args.len() < min || args.len() > max {
        let want = if min == max { format!("{min}") } else { format!("{min} to {max}") };
        return Err(Error::TypeError(format!("{cmd} takes {want} argument(s), got {}", args.len())));
    }
    Ok(())
}

fn obj(pairs: Vec<(&str, Value)>) -> Value {
    Value::Object(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Map<_, _>>())
}

struct Env<'a> {
    ctx: &'a Context,
    settings: &'a Settings,
}

impl Env<'_> {
    fn p(&self, f: &OrePoly) -> Value {
        Value::String(self.ctx.ring.format(f))
    }

    fn e(&self, a: &Element) -> Value {
        Value::String(self.ctx.tower().format(a))
    }

    fn algebra(&self, src: &str) -> Result<PetitAlgebra> {
        make_petit(&self.ctx.ring, &self.ctx.poly(src)?)
    }

    fn ansatz(&self, a: &PetitAlgebra) -> Option<AnsatzConfig> {
        if a.tower().constant_field().is_some() {
            return None;
        }
        let mut cfg = AnsatzConfig::default_for(a);
        if let Some(b) = self.settings.bound {
            cfg.bound = b;
        }
        Some(cfg)
    }

    fn subspace(&self, a: &PetitAlgebra, s: &FSubspace) -> Value {
        let (status, bound) = match s.status {
            SubspaceStatus::Exact => ("exact", None),
            SubspaceStatus::LowerBound { bound } => ("lower_bound", Some(bound)),
            SubspaceStatus::CertifiedMaximal { bound } => ("certified_maximal", Some(bound)),
            SubspaceStatus::StructuralK { .. } => ("structural_k", None),
        };
        let mut pairs = vec![
            ("basis", Value::Array(s.basis.iter().map(|g| Value::String(a.format(g))).collect())),
            ("dim", json!(s.dim_over_constants())),
            ("status", json!(status)),
        ];
        if let Some(b) = bound {
            pairs.push(("bound", json!(b)));
            pairs.push(("certified_max", json!(status == "certified_maximal")));
        }
        if let SubspaceStatus::StructuralK { samples } = s.status {
            pairs.push(("samples", json!(samples)));
        }
        obj(pairs)
    }
}

/// Run `cmd` with positional `args` against a session (absent for `scenario`).
pub fn run(cmd: &str, args: &[String], ctx: Option<&Context>, settings: &Settings) -> Result<Outcome> {
    if cmd == "scenario" {
        return scenario(args);
    }
    let ctx = ctx.ok_or_else(|| Error::TypeError(format!("{cmd} needs a session file")))?;
    let env = Env { ctx, settings };
    let ring = &ctx.ring;
    let k = ctx.tower();
    let out = match cmd {
        "mul" => {
            arity(cmd, args, 2, 2)?;
            let prod = ring.mul(&ctx.poly(&args[0])?, &ctx.poly(&args[1])?);
            Outcome::ok(obj(vec![("product", env.p(&prod))]))
        }
        "divmod-r" | "divmod-l" => {
            arity(cmd, args, 2, 2)?;
            let (g, f) = (ctx.poly(&args[0])?, ctx.poly(&args[1])?);
            let d = if cmd == "divmod-r" { ring.right_divmod(&g, &f)? } else { ring.left_divmod(&g, &f)? };
            Outcome::ok(obj(vec![("quotient", env.p(&d.quotient)), ("remainder", env.p(&d.remainder))]))
        }
        "gcd-r" => {
            arity(cmd, args, 2, 2)?;
            let g = ring.right_gcd(&ctx.poly(&args[0])?, &ctx.poly(&args[1])?)?;
            Outcome::ok(obj(vec![("gcd", env.p(&g))]))
        }
        "petit" => {
            arity(cmd, args, 1, 1)?;
            let a = env.algebra(&args[0])?;
            Outcome::ok(obj(vec![
                ("degree", json!(a.degree())),
                ("dim_over_constants", json!(a.dimension_over_constants())),
                ("k_in_right_nucleus", json!(nucleus::k_in_right_nucleus(&a)?)),
                ("modulus", env.p(a.modulus())),
                ("t_powers_associative", json!(a.t_powers_associative())),
                ("two_sided", json!(a.two_sided())),
            ]))
        }
        "assoc" => {
            arity(cmd, args, 4, 4)?;
            let a = env.algebra(&args[0])?;
            let els = args[1..]
                .iter()
                .map(|s| a.element(&ctx.poly(s)?))
                .collect::<Result<Vec<_>>>()?;
            let x = a.associator(&els[0], &els[1], &els[2])?;
            Outcome::ok(obj(vec![("associator", json!(a.format(&x))), ("zero", json!(x.is_zero()))]))
        }
        "two-sided" => {
            arity(cmd, args, 1, 1)?;
            Outcome::ok(obj(vec![("two_sided", json!(is_two_sided(ring, &ctx.poly(&args[0])?)?))]))
        }
        "nuclei" => {
            arity(cmd, args, 1, 1)?;
            let a = env.algebra(&args[0])?;
            match env.ansatz(&a) {
                None => {
                    let n = nucleus::all_nuclei(&a)?;
                    Outcome::ok(obj(vec![
                        ("center", env.subspace(&a, &n.center)),
                        ("left", env.subspace(&a, &n.left)),
                        ("middle", env.subspace(&a, &n.middle)),
                        ("nucleus", env.subspace(&a, &n.nucleus)),
                        ("right", env.subspace(&a, &n.right)),
                    ]))
                }
                Some(cfg) => Outcome::ok(obj(vec![
                    ("center", Value::Null),
                    ("left", env.subspace(&a, &nucleus::left_nucleus(&a)?)),
                    ("middle", env.subspace(&a, &nucleus::middle_nucleus(&a)?)),
                    ("nucleus", Value::Null),
                    ("right", env.subspace(&a, &nucleus::right_nucleus(&a, Some(&cfg))?)),
                ])),
            }
        }
        "eigenring" => {
            arity(cmd, args, 1, 1)?;
            let a = env.algebra(&args[0])?;
            let s = nucleus::eigenring(&a, env.ansatz(&a).as_ref())?;
            Outcome::ok(env.subspace(&a, &s))
        }
        "apoly" => {
            arity(cmd, args, 1, 1)?;
            let a = env.algebra(&args[0])?;
            match nucleus::a_polynomial_test(&a, env.ansatz(&a).as_ref())? {
                APolyVerdict::APolynomial { dim } => {
                    Outcome::ok(obj(vec![("dim", json!(dim)), ("verdict", json!("a_polynomial"))]))
                }
                APolyVerdict::Inconclusive { lower_bound } => Outcome::not_found(obj(vec![
                    ("lower_bound", json!(lower_bound)),
                    ("verdict", json!("inconclusive")),
                ])),
                APolyVerdict::EigenringDimension { dim } => {
                    Outcome::ok(obj(vec![("dim", json!(dim)), ("verdict", json!("eigenring_dimension"))]))
                }
            }
        }
        "vp" => {
            arity(cmd, args, 1, 2)?;
            let b = ctx.element(&args[0])?;
            let e: usize = match args.get(1) {
                Some(s) => s.parse().map_err(|_| Error::TypeError(format!("'{s}' is not an exponent")))?,
                None => 1,
            };
            Outcome::ok(obj(vec![("e", json!(e)), ("value", env.e(&charp::v_pe(k, &b, e)?))]))
        }
        "minpoly" => {
            arity(cmd, args, 0, 0)?;
            let g = charp::min_p_polynomial(k)?;
            Outcome::ok(obj(vec![
                ("coefficients", Value::Array(g.c.iter().map(|c| env.e(c)).collect())),
                ("e", json!(g.e)),
                ("g", env.p(&g.g(ring))),
                ("p", json!(g.p)),
            ]))
        }
        "center" => {
            arity(cmd, args, 0, 1)?;
            let d0 = match args.first() {
                Some(s) => ctx.element(s)?,
                None => k.zero(),
            };
            let c = charp::center_of_r(ring, &d0)?;
            Outcome::ok(obj(vec![("d0", env.e(&d0)), ("g", env.p(&c.g.g(ring))), ("z", env.p(&c.z))]))
        }
        "bound" => {
            arity(cmd, args, 1, 1)?;
            Outcome::ok(obj(vec![("bound", env.p(&charp::bound_of(ring, &ctx.poly(&args[0])?)?))]))
        }
        "split" | "diffext" => {
            arity(cmd, args, 1, 1)?;
            let d0 = ctx.element(&args[0])?;
            let g = charp::min_p_polynomial(k)?.with_d0(d0.clone());
            let bound = match settings.bound {
                Some(b) => b,
                None => charp::default_split_bound(k)?,
            };
            let s = charp::split_solver(ring, &g, bound)?;
            let verdict = if s.witness.is_some() { "split" } else { "no_solution_within_bound" };
            let mut pairs = vec![
                ("bound", json!(s.bound)),
                ("d0", env.e(&d0)),
                ("label", json!(s.label)),
                ("verdict", json!(verdict)),
            ];
            if let Some(b) = &s.witness {
                pairs.push(("witness_b", env.e(b)));
            }
            if cmd == "diffext" {
                let a = charp::differential_extension(ring, &d0)?;
                pairs.push(("dim_over_constants", json!(a.dimension_over_constants())));
                pairs.push(("modulus", env.p(a.modulus())));
                pairs.push(("two_sided", json!(a.two_sided())));
                // the report itself succeeds either way
                Outcome::ok(obj(pairs))
            } else if s.witness.is_some() {
                Outcome::ok(obj(pairs))
            } else {
                Outcome::not_found(obj(pairs))
            }
        }
        "roots" => {
            arity(cmd, args, 1, 1)?;
            let bound = settings.bound.unwrap_or(DEFAULT_ROOT_BOUND);
            let r = charp::right_root_search(ring, &ctx.poly(&args[0])?, bound)?;
            let v = obj(vec![
                ("bound", json!(bound)),
                ("candidates", json!(r.candidates)),
                ("exhausted", json!(r.exhausted)),
                ("roots", Value::Array(r.roots.iter().map(|x| env.e(x)).collect())),
            ]);
            if r.roots.is_empty() {
                Outcome::not_found(v)
            } else {
                Outcome::ok(v)
            }
        }
        "resultant" => {
            arity(cmd, args, 2, 2)?;
            let f = ring.monic(&ctx.poly(&args[0])?);
            let g = ring.monic(&ctx.poly(&args[1])?);
            let r = plt::resultant(ring, &f, &g, settings.seed)?;
            Outcome::ok(obj(vec![("degree", json!(r.degree())), ("resultant", env.p(&r))]))
        }
        "charpoly" => {
            arity(cmd, args, 1, 1)?;
            let t = PseudoLinearTransform::new(ring.tower_arc().clone(), ctx.matrix(&args[0])?);
            let c = plt::characteristic_polynomial(&t, settings.seed)?;
            Outcome::ok(obj(vec![
                ("cyclic_vector", Value::Array(c.vector.iter().map(|x| env.e(x)).collect())),
                ("polynomial", env.p(&c.polynomial)),
            ]))
        }
        "similar" => {
            arity(cmd, args, 2, 2)?;
            let bound = settings.bound.unwrap_or(DEFAULT_SIMILARITY_BOUND);
            match plt::similarity_search(ring, &ctx.poly(&args[0])?, &ctx.poly(&args[1])?, bound)? {
                Some(w) => Outcome::ok(obj(vec![
                    ("bound", json!(bound)),
                    ("u", env.p(&w.u)),
                    ("u_prime", env.p(&w.u_prime)),
                    ("verdict", json!("similar")),
                ])),
                None => Outcome::not_found(obj(vec![
                    ("bound", json!(bound)),
                    ("verdict", json!("not_found_within_bound")),
                ])),
            }
        }
        _ => return Err(Error::TypeError(format!("unknown command '{cmd}'"))),
    };
    Ok(out)
}

fn scenario(args: &[String]) -> Result<Outcome> {
    arity("scenario", args, 3, 3)?;
    let nums = args
        .iter()
        .map(|s| s.parse::<u64>().map_err(|_| Error::TypeError(format!("'{s}' is not a nonnegative integer"))))
        .collect::<Result<Vec<_>>>()?;
    let (p, e, m) = (nums[0], nums[1] as usize, nums[2] as usize);
    let s = charp::scenario_builder(p, e, m)?;
    let row = charp::dimension_bookkeeping(p, e as u32);
    let bookkeeping = obj(vec![
        ("m", json!(row.m.to_string())),
        ("e", json!(row.e.to_string())),
        ("m_p_e_le_m_p_m_minus_one", json!(row.m_p_e_le_m_p_m_minus_one)),
        ("m_squared_lt_m_p_e", json!(row.m_squared_lt_m_p_e)),
        ("n", json!(row.n)),
        ("n_plus_one_le_p_pow_n", json!(row.n_plus_one_le_p_pow_n)),
    ]);
    let regime = match s.regime {
        Regime::ProperSubfieldNucleus => "proper_subfield_nucleus",
        Regime::DifferentialExtension => "differential_extension",
    };
    Ok(Outcome::ok(obj(vec![
        ("bookkeeping", bookkeeping),
        ("center_dim", json!(s.center_dim)),
        ("dim_sf", json!(s.dim_sf)),
        ("e", json!(s.e)),
        ("k_degree", json!(s.k_degree)),
        ("left_nucleus_dim", json!(s.left_nucleus_dim)),
        ("m", json!(s.m)),
        ("middle_nucleus_dim", json!(s.middle_nucleus_dim)),
        ("modulus", json!(s.algebra.ring().format(s.algebra.modulus()))),
        ("nucleus_dim", json!(s.nucleus_dim)),
        ("p", json!(s.p)),
        ("regime", json!(regime)),
        ("regime_label", json!(s.regime.label())),
        ("right_nucleus_dim", json!(s.right_nucleus_dim)),
        ("two_sided", json!(s.algebra.two_sided())),
    ])))
}

/// Stable error name for JSON error reports.
pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::NonConstantAlpha(_) => "NonConstantAlpha",
        Error::ConstantFieldTooLarge(_) => "ConstantFieldTooLarge",
        Error::UnsupportedCombination(_) => "UnsupportedCombination",
        Error::InfiniteDimension => "InfiniteDimension",
        Error::DivisionByZero => "DivisionByZero",
        Error::ZeroModulus => "ZeroModulus",
        Error::ZeroPolynomial => "ZeroPolynomial",
        Error::AlgebraMismatch => "AlgebraMismatch",
        Error::NotMonic => "NotMonic",
        Error::NotClosed => "NotClosed",
        Error::AnsatzRequired => "AnsatzRequired",
        Error::InconsistentAnsatz => "InconsistentAnsatz",
        Error::WrongCharacteristic => "WrongCharacteristic",
        Error::NonConstantD0(_) => "NonConstantD0",
        Error::DegreeMismatch(..) => "DegreeMismatch",
        Error::NoCyclicVectorFound => "NoCyclicVectorFound",
        Error::UnsatisfiedHypothesis(_) => "UnsatisfiedHypothesis",
        Error::InternalInconsistency(_) => "InternalInconsistency",
        Error::SyntaxError { .. } => "SyntaxError",
        Error::TypeError(_) => "TypeError",
    }
}
