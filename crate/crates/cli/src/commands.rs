use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use murphy_toric::chern::{validate_chern, validate_murphy_sampled, ChernDatum, MurphyRule};
use murphy_toric::divisor::{class_group, evaluate_support, is_cartier, TDivisor};
use murphy_toric::exact::field::{format_rational, parse_rational};
use murphy_toric::exact::{Field, FieldTag, PrimeField, RationalField};
use murphy_toric::fan::{
    is_complete, projective_fan, star_subdivide, validate_fan, Cone, Fan, LatticeVector,
};
use murphy_toric::incidence::{
    check_configuration, enumerate_c_i, verify_equivalence, EnumOptions, IncidenceData, Strategy,
};
use murphy_toric::io::{self, AnyFiltration, JsonField};
use murphy_toric::klyachko::{check_compatibility, filtration_signature, forced_filtration, RayRef};
use murphy_toric::moduli::{audit_pairwise, generate_conditions, MurphyInstance};
use murphy_toric::murphy_fan::{build_murphy_fan, BuildMode, MurphyFanHandle, RayLabel, MATERIALIZE_LIMIT};
use murphy_toric::Error;

use crate::{BundleCmd, Command, DivisorCmd, FanCmd, IncidenceCmd, MurphyCmd, SearchArgs, StrategyArg};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

type Result<T> = std::result::Result<T, CliError>;

pub enum Outcome {
    Pass,
    Fail,
}

pub struct Context {
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
}

impl Context {
    fn emit(&self, v: &Value) -> Result<()> {
        let text = io::to_canonical_string(v) + "\n";
        match &self.out {
            Some(path) => write_file(path, &text),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn options(&self, s: &SearchArgs) -> EnumOptions {
        let strategy = match s.strategy {
            StrategyArg::Auto => Strategy::Auto,
            StrategyArg::Backtrack => Strategy::Backtrack,
            StrategyArg::Brute => Strategy::Brute,
        };
        EnumOptions { strategy, budget: s.budget, workers: self.workers }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
    Ok(io::parse_json(&text)?)
}

fn verdict(ok: bool) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn parse_list<T: FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|x| x.trim())
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|_| CliError::Usage(format!("bad {what} '{x}'"))))
        .collect()
}

fn parse_rows<T: FromStr>(s: &str, what: &str) -> Result<Vec<Vec<T>>> {
    s.split(';').map(|row| parse_list(row, what)).collect()
}

fn load_fan(path: &Path) -> Result<Fan> {
    Ok(io::fan_from_json(&read_json(path)?)?)
}

/// Reads a fan and a divisor whose coefficients follow the ray order of the
/// file; the result is in the fan's canonical ray order.
fn load_divisor(path: &Path, coeffs: &str) -> Result<(Fan, TDivisor)> {
    let v = read_json(path)?;
    let fan = io::fan_from_json(&v)?;
    let given: Vec<BigInt> = parse_list(coeffs, "coefficient")?;
    let raw = v["rays"].as_array().map_or(0, Vec::len);
    if given.len() != raw {
        return Err(CliError::Usage(format!("{} coefficients for {raw} rays", given.len())));
    }
    let mut canonical = vec![BigInt::from(0); raw];
    for (ray, c) in v["rays"].as_array().into_iter().flatten().zip(given) {
        let coords = ray.as_array().into_iter().flatten().map(io::get_int).collect::<murphy_toric::Result<Vec<_>>>()?;
        let idx = fan.ray_index(&LatticeVector(coords)).expect("ray of the parsed fan");
        canonical[idx] = c;
    }
    Ok((fan, TDivisor::new(canonical)))
}

fn rays_json(fan: &Fan) -> Value {
    Value::Array(fan.rays().iter().map(|r| Value::Array(r.0.iter().map(io::int).collect())).collect())
}

fn load_incidence(path: &Path) -> Result<IncidenceData> {
    Ok(io::incidence_from_json(&read_json(path)?)?)
}

fn prime_field(spec: &str) -> Result<PrimeField> {
    match FieldTag::from_str(spec)? {
        FieldTag::Prime(p) => Ok(PrimeField::new(p as u64)?),
        FieldTag::Rational => Err(CliError::Usage("enumeration needs a prime field".into())),
    }
}

fn field_tag_of(v: &Value) -> Result<FieldTag> {
    let tag = v
        .get("field")
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::Usage("configuration has no \"field\"".into()))?;
    Ok(FieldTag::from_str(tag)?)
}

fn rational_json(q: &BigRational) -> Value {
    if q.is_integer() {
        io::int(q.numer())
    } else {
        Value::String(format_rational(q))
    }
}

fn murphy_handle(n: usize, lazy: bool) -> Result<MurphyFanHandle> {
    let mode = if lazy || n > MATERIALIZE_LIMIT { BuildMode::Lazy } else { BuildMode::Materialized };
    Ok(build_murphy_fan(n, mode)?)
}

pub fn run(ctx: &Context, command: Command) -> Result<Outcome> {
    match command {
        Command::Fan(c) => fan(ctx, c),
        Command::Murphy(c) => murphy(ctx, c),
        Command::Divisor(c) => divisor(ctx, c),
        Command::Bundle(c) => bundle(ctx, c),
        Command::Incidence(c) => incidence(ctx, c),
    }
}

fn fan(ctx: &Context, cmd: FanCmd) -> Result<Outcome> {
    match cmd {
        FanCmd::Build { rays, cones, projective } => {
            let fan = match (rays, cones, projective) {
                (_, _, Some(n)) => projective_fan(n)?,
                (Some(rays), Some(cones), None) => {
                    let rays: Vec<Vec<BigInt>> = parse_rows(&rays, "coordinate")?;
                    let dim = rays.first().map_or(0, Vec::len);
                    Fan::new(dim, rays.into_iter().map(LatticeVector).collect(), parse_rows(&cones, "ray index")?)?
                }
                _ => return Err(CliError::Usage("give --rays with --cones, or --projective".into())),
            };
            eprintln!("fan: dimension {}, {} rays, {} maximal cones", fan.dim(), fan.rays().len(), fan.max_cones().len());
            ctx.emit(&io::fan_to_json(&fan))?;
            Ok(Outcome::Pass)
        }
        FanCmd::Subdivide { fan, cone } => {
            let fan = load_fan(&fan)?;
            let idx: Vec<usize> = parse_list(&cone, "ray index")?;
            if let Some(&bad) = idx.iter().find(|&&i| i >= fan.rays().len()) {
                return Err(CliError::Usage(format!("ray index {bad} out of range")));
            }
            let cone = Cone::new(idx.iter().map(|&i| fan.rays()[i].clone()).collect())?;
            let refined = star_subdivide(&fan, &cone)?;
            eprintln!("subdivided: {} rays, {} maximal cones", refined.rays().len(), refined.max_cones().len());
            ctx.emit(&io::fan_to_json(&refined))?;
            Ok(Outcome::Pass)
        }
        FanCmd::Validate { fan } => {
            let v = read_json(&fan)?;
            let reason = match io::fan_from_json(&v) {
                Err(e @ Error::Parse(_)) => return Err(e.into()),
                Err(e) => Some(e.to_string()),
                Ok(fan) => validate_fan(&fan).err().map(|violation| violation.to_string()),
            };
            match &reason {
                None => eprintln!("valid fan"),
                Some(r) => eprintln!("not a fan: {r}"),
            }
            ctx.emit(&json!({"valid": reason.is_none(), "reason": reason}))?;
            Ok(verdict(reason.is_none()))
        }
        FanCmd::Smooth { fan } => {
            let fan = load_fan(&fan)?;
            let mut singular = Vec::new();
            for cone in fan.max_cones() {
                if !Cone::new(fan.cone_rays(cone).into_iter().cloned().collect())?.is_smooth() {
                    singular.push(cone.clone());
                }
            }
            if singular.is_empty() {
                eprintln!("smooth: every maximal cone is unimodular");
            } else {
                eprintln!("not smooth: {} singular maximal cones, first {:?}", singular.len(), singular[0]);
            }
            ctx.emit(&json!({"smooth": singular.is_empty(), "singular_cones": singular}))?;
            Ok(verdict(singular.is_empty()))
        }
        FanCmd::Complete { fan } => {
            let complete = is_complete(&load_fan(&fan)?);
            eprintln!("{}", if complete { "complete" } else { "not complete" });
            ctx.emit(&json!({ "complete": complete }))?;
            Ok(verdict(complete))
        }
    }
}

fn murphy(ctx: &Context, cmd: MurphyCmd) -> Result<Outcome> {
    match cmd {
        MurphyCmd::Fan { n, lazy } => {
            let h = murphy_handle(n, lazy)?;
            let v = io::murphy_fan_to_json(&h)?;
            eprintln!("Σ_{n}: {} rays, {} maximal cones", v["ray_count"], v["max_cone_count"]);
            ctx.emit(&v)?;
            Ok(Outcome::Pass)
        }
        MurphyCmd::Chern { incidence, lazy, samples, seed } => {
            let inc = load_incidence(&incidence)?;
            if inc.objects() < 3 {
                return Err(Error::DegenerateInstance(inc.objects()).into());
            }
            let rule = MurphyRule::new(inc);
            let h = murphy_handle(rule.n(), lazy)?;
            match h.fan() {
                Some(fan) => {
                    let explicit = rule.explicit_on(&h)?;
                    let check = validate_chern(fan, &explicit)?;
                    match &check {
                        Ok(()) => eprintln!("compatible on all {} maximal cones of Σ_{}", explicit.cones.len(), rule.n()),
                        Err(v) => eprintln!("incompatible: {v}"),
                    }
                    ctx.emit(&io::chern_to_json(&ChernDatum::Explicit(explicit)))?;
                    Ok(verdict(check.is_ok()))
                }
                None => {
                    let check = validate_murphy_sampled(&rule, &h, samples, seed)?;
                    match &check {
                        Ok(k) => eprintln!("compatible on {k} sampled adjacent pairs of Σ_{}", rule.n()),
                        Err(v) => eprintln!("incompatible: {v}"),
                    }
                    ctx.emit(&io::chern_to_json(&ChernDatum::Murphy(rule)))?;
                    Ok(verdict(check.is_ok()))
                }
            }
        }
        MurphyCmd::Equations { incidence, allow_degenerate } => {
            let instance = MurphyInstance::new(load_incidence(&incidence)?, allow_degenerate)?;
            let cs = generate_conditions(&instance)?;
            eprintln!("{} atoms for {} points and {} lines", cs.atoms().len(), cs.points(), cs.lines());
            ctx.emit(&io::conditions_to_json(&cs))?;
            Ok(Outcome::Pass)
        }
        MurphyCmd::Verify { incidence, field, report, allow_degenerate, search } => {
            let inc = load_incidence(&incidence)?;
            let field = prime_field(&field)?;
            let r = verify_equivalence(&inc, &field, &ctx.options(&search), allow_degenerate)?;
            eprintln!(
                "moduli {} {} incidence {} over F_{}",
                r.moduli_count,
                if r.equal { "=" } else { "!=" },
                r.incidence_count,
                r.prime
            );
            let v = io::report_to_json(&r);
            if let Some(path) = report {
                write_file(&path, &(io::to_canonical_string(&v) + "\n"))?;
            }
            ctx.emit(&v)?;
            Ok(verdict(r.equal))
        }
        MurphyCmd::Audit { incidence, allow_degenerate } => {
            let inc = load_incidence(&incidence)?;
            let n = inc.objects().saturating_sub(1);
            let instance = if (2..=MATERIALIZE_LIMIT).contains(&n) {
                MurphyInstance::with_handle(inc, build_murphy_fan(n, BuildMode::Materialized)?)?
            } else {
                MurphyInstance::new(inc, allow_degenerate)?
            };
            let result = audit_pairwise(&instance)?;
            let violation = result.as_ref().err().map(|v| v.to_string());
            match &violation {
                None => eprintln!(
                    "no cone of Σ_{} holds three original rays ({})",
                    instance.n(),
                    if instance.handle().is_some_and(|h| h.is_materialized()) { "face lattice and oracle" } else { "oracle" }
                ),
                Some(v) => eprintln!("audit failed: {v}"),
            }
            ctx.emit(&json!({"n": instance.n(), "ok": violation.is_none(), "violation": violation}))?;
            Ok(verdict(result.is_ok()))
        }
    }
}

fn divisor(ctx: &Context, cmd: DivisorCmd) -> Result<Outcome> {
    match cmd {
        DivisorCmd::Cartier { fan, coeffs } => {
            let (fan, d) = load_divisor(&fan, &coeffs)?;
            match is_cartier(&fan, &d)? {
                Ok(s) => {
                    eprintln!("Cartier");
                    let cones: Vec<Value> = s
                        .cones
                        .iter()
                        .map(|(c, m)| json!({"cone": c, "character": m.0.iter().map(io::int).collect::<Vec<_>>()}))
                        .collect();
                    ctx.emit(&json!({"cartier": true, "rays": rays_json(&fan), "support": cones}))?;
                    Ok(Outcome::Pass)
                }
                Err(nc) => {
                    eprintln!("not Cartier on cone {:?}", nc.cone);
                    let obstruction = nc.obstruction.map(|q| q.iter().map(rational_json).collect::<Vec<_>>());
                    ctx.emit(&json!({"cartier": false, "rays": rays_json(&fan), "cone": nc.cone, "rational_solution": obstruction}))?;
                    Ok(Outcome::Fail)
                }
            }
        }
        DivisorCmd::Classgroup { fan } => {
            let cl = class_group(&load_fan(&fan)?)?;
            eprintln!("Cl = Z^{} with torsion {:?}", cl.rank, cl.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>());
            ctx.emit(&json!({"rank": cl.rank, "torsion": cl.torsion.iter().map(io::int).collect::<Vec<_>>()}))?;
            Ok(Outcome::Pass)
        }
        DivisorCmd::Support { fan, coeffs, point } => {
            let (fan, d) = load_divisor(&fan, &coeffs)?;
            let x = point.split(',').map(|s| parse_rational(s.trim())).collect::<murphy_toric::Result<Vec<_>>>()?;
            match is_cartier(&fan, &d)? {
                Ok(s) => {
                    let value = evaluate_support(&s, &fan, &x)?;
                    eprintln!("ψ = {}", format_rational(&value));
                    ctx.emit(&json!({ "value": rational_json(&value) }))?;
                    Ok(Outcome::Pass)
                }
                Err(nc) => {
                    eprintln!("not Cartier on cone {:?}; no support function", nc.cone);
                    Ok(Outcome::Fail)
                }
            }
        }
    }
}

fn bundle(ctx: &Context, cmd: BundleCmd) -> Result<Outcome> {
    match cmd {
        BundleCmd::CheckCompat { fan, filtration, config, incidence } => match (filtration, config, incidence) {
            (Some(filtration), None, _) => {
                let fan = fan.ok_or_else(|| CliError::Usage("--filtration needs --fan".into()))?;
                let fan = load_fan(&fan)?;
                let assignment = match io::filtration_from_json(&read_json(&filtration)?)? {
                    AnyFiltration::Rational(f) => check_compatibility(&fan, &f).map(|a| a.to_chern()),
                    AnyFiltration::Prime(f) => check_compatibility(&fan, &f).map(|a| a.to_chern()),
                };
                compat_outcome(ctx, assignment)
            }
            (None, Some(config), Some(incidence)) => {
                let inc = load_incidence(&incidence)?;
                let v = read_json(&config)?;
                match field_tag_of(&v)? {
                    FieldTag::Rational => forced(ctx, &RationalField, &inc, &v),
                    FieldTag::Prime(p) => forced(ctx, &PrimeField::new(p as u64)?, &inc, &v),
                }
            }
            _ => Err(CliError::Usage("give --fan and --filtration, or --config and --incidence".into())),
        },
        BundleCmd::Signature { chern, fan, n, ray, label } => {
            let datum = io::chern_from_json(&read_json(&chern)?)?;
            let fan = fan.map(|p| load_fan(&p)).transpose()?;
            let handle = match &datum {
                ChernDatum::Murphy(rule) => Some(murphy_handle(n.unwrap_or(rule.n()), ray.is_none())?),
                ChernDatum::Explicit(_) => None,
            };
            let at = match (ray, label) {
                (Some(r), _) => RayRef::Index(r),
                (None, Some(l)) => RayRef::Label(RayLabel::from_members(parse_list::<usize>(&l, "label member")?)),
                (None, None) => return Err(CliError::Usage("give --ray or --label".into())),
            };
            let sig = filtration_signature(&datum, fan.as_ref(), handle.as_ref(), at)?;
            let text: Vec<String> = sig.iter().map(|(j, d)| format!("{d}@{j}")).collect();
            eprintln!("signature: {}", text.join(" "));
            ctx.emit(&Value::Array(sig.iter().map(|(j, d)| json!({"jump": j, "dim": d})).collect()))?;
            Ok(Outcome::Pass)
        }
    }
}

fn compat_outcome(ctx: &Context, assignment: murphy_toric::Result<murphy_toric::chern::ExplicitChern>) -> Result<Outcome> {
    match assignment {
        Ok(c) => {
            eprintln!("compatible on all {} maximal cones", c.cones.len());
            ctx.emit(&io::chern_to_json(&ChernDatum::Explicit(c)))?;
            Ok(Outcome::Pass)
        }
        Err(Error::Incompatible { cone, cell, reason }) => {
            eprintln!("incompatible on cone {cone:?} at cell {cell:?}: {reason}");
            ctx.emit(&json!({"compatible": false, "cone": cone, "cell": cell, "reason": reason}))?;
            Ok(Outcome::Fail)
        }
        Err(e) => Err(e.into()),
    }
}

/// Forced filtrations of a configuration on Σ_n, checked and compared with
/// the rule datum of the incidence data.
fn forced<F: JsonField>(ctx: &Context, f: &F, inc: &IncidenceData, v: &Value) -> Result<Outcome> {
    let config = io::configuration_from_json(f, v)?;
    if !check_configuration(f, &config, inc) {
        eprintln!("the configuration does not realize the incidence data");
        return Ok(Outcome::Fail);
    }
    if inc.objects() < 3 {
        return Err(Error::DegenerateInstance(inc.objects()).into());
    }
    let h = build_murphy_fan(inc.objects() - 1, BuildMode::Materialized)?;
    let filt = forced_filtration(f, &h, &config)?;
    let fan = h.fan().expect("materialized");
    let recovered = match check_compatibility(fan, &filt) {
        Ok(a) => a.to_chern(),
        Err(e) => return compat_outcome(ctx, Err(e)),
    };
    let matches = recovered == MurphyRule::new(inc.clone()).explicit_on(&h)?;
    eprintln!(
        "compatible on all {} maximal cones; recovered characters {} the rule datum",
        recovered.cones.len(),
        if matches { "equal" } else { "differ from" }
    );
    ctx.emit(&io::chern_to_json(&ChernDatum::Explicit(recovered)))?;
    Ok(verdict(matches))
}

fn incidence(ctx: &Context, cmd: IncidenceCmd) -> Result<Outcome> {
    match cmd {
        IncidenceCmd::Enumerate { incidence, field, search } => {
            let inc = load_incidence(&incidence)?;
            let f = prime_field(&field)?;
            let configs = enumerate_c_i(&inc, &f, &ctx.options(&search))?;
            eprintln!("{} configurations over F_{}", configs.len(), f.modulus());
            ctx.emit(&json!({
                "field": f.tag().to_string(),
                "count": configs.len(),
                "configurations": configs.iter().map(|c| io::configuration_to_json(&f, c)).collect::<Vec<_>>(),
            }))?;
            Ok(Outcome::Pass)
        }
        IncidenceCmd::Check { incidence, config } => {
            let inc = load_incidence(&incidence)?;
            let v = read_json(&config)?;
            let ok = match field_tag_of(&v)? {
                FieldTag::Rational => check_configuration(&RationalField, &io::configuration_from_json(&RationalField, &v)?, &inc),
                FieldTag::Prime(p) => {
                    let f = PrimeField::new(p as u64)?;
                    check_configuration(&f, &io::configuration_from_json(&f, &v)?, &inc)
                }
            };
            eprintln!("{}", if ok { "realizes the incidence data" } else { "does not realize the incidence data" });
            ctx.emit(&json!({ "realizes": ok }))?;
            Ok(verdict(ok))
        }
    }
}
