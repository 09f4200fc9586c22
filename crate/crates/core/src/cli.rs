//! Scenario files, dispatch and reports for the `csalab` binary.
//!
//! A scenario is a JSON object tagged by `"command"`. Unknown keys are
//! rejected. Reports are JSON objects with sorted keys; the text rendering
//! flattens the same object into `path: value` lines.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, ValueEnum};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::{is_prime, QmodZ};
use crate::brauer::{cyclic_algebra, make_class, AbelianField, BrauerClass, CyclicData, Place};
use crate::embed::{self, EmbedInstance, FieldSummary, Thm6Scenario};
use crate::error::{Error, Result};
use crate::generic::{GenericAlgebra, MixedClass};
use crate::groupring::{FiniteGroup, GroupRingElement, Subgroup};
use crate::reduction::{
    self, EnumerationMode, SplitOracle, TableOracle, TransferSetup, UnmovedOracle, UnmovedPairOracle,
    DEFAULT_BUDGET, DEFAULT_SAMPLES, DEFAULT_SEED,
};
use crate::report::class_entries;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_CONSISTENCY: i32 = 3;

/// Environment variable holding a global ceiling on the enumeration budget.
pub const BUDGET_ENV: &str = "CSALAB_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModeKind {
    Exhaustive,
    Sampled,
    Auto,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PlaceSpec {
    Prime(u64),
    Name(String),
}

impl PlaceSpec {
    fn place(&self) -> Result<Place> {
        match self {
            PlaceSpec::Prime(q) => Place::finite(*q),
            PlaceSpec::Name(s) if s == "inf" => Ok(Place::Infinite),
            PlaceSpec::Name(s) => match s.parse::<u64>() {
                Ok(q) => Place::finite(q),
                Err(_) => Err(Error::Invariant(format!("unknown place {s:?}"))),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub conductor: u64,
    #[serde(default)]
    pub fixing: Vec<u64>,
}

impl FieldSpec {
    fn build(&self) -> Result<AbelianField> {
        AbelianField::new(self.conductor, &self.fixing)
    }
}

fn field_or_rationals(f: &Option<FieldSpec>) -> Result<AbelianField> {
    f.as_ref()
        .map_or_else(|| Ok(AbelianField::rationals()), FieldSpec::build)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassSpec {
    /// Base field; ℚ when absent.
    #[serde(default)]
    pub field: Option<FieldSpec>,
    pub invariants: Vec<(PlaceSpec, String)>,
}

impl ClassSpec {
    fn build(&self) -> Result<BrauerClass> {
        let base = field_or_rationals(&self.field)?;
        let inv: Vec<(Place, QmodZ)> = self
            .invariants
            .iter()
            .map(|(p, x)| Ok((p.place()?, x.parse::<QmodZ>()?)))
            .collect::<Result<_>>()?;
        make_class(&base, &inv)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenericSpec {
    pub degree: u64,
    #[serde(default = "one")]
    pub exponent: i64,
}

fn one() -> i64 {
    1
}

/// E^c ⊗ D: an arithmetic class with an optional generic part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixedSpec {
    pub class: ClassSpec,
    #[serde(default)]
    pub generic: Option<GenericSpec>,
}

impl MixedSpec {
    fn build(&self) -> Result<MixedClass> {
        let arith = self.class.build()?;
        match self.generic {
            None => Ok(MixedClass::arithmetic(arith)),
            Some(g) => Ok(MixedClass::new(GenericAlgebra::new(g.degree)?, g.exponent, arith)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum GroupSpec {
    Cyclic { cyclic_orders: Vec<usize> },
    Table { table: Vec<Vec<usize>> },
}

impl GroupSpec {
    fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Cyclic { cyclic_orders } => {
                if cyclic_orders.contains(&0) {
                    return Err(Error::Group("cyclic factor of order 0".into()));
                }
                Ok(FiniteGroup::abelian(cyclic_orders))
            }
            GroupSpec::Table { table } => FiniteGroup::from_table(table.clone(), None),
        }
    }
}

/// G/H given abstractly, or as Gal(top/ℚ) ⊇ Gal(top/sub) for fields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum SetupSpec {
    Group {
        group: GroupSpec,
        /// Members of H; trivial when absent.
        #[serde(default)]
        subgroup: Option<Vec<usize>>,
        r: u64,
        n: u64,
    },
    Field {
        top: FieldSpec,
        sub: FieldSpec,
        r: u64,
        n: u64,
    },
}

impl SetupSpec {
    fn build(&self) -> Result<TransferSetup> {
        match self {
            SetupSpec::Group {
                group,
                subgroup,
                r,
                n,
            } => {
                let g = Arc::new(group.build()?);
                let h = match subgroup {
                    None => Subgroup::trivial(&g),
                    Some(m) => Subgroup::new(&g, m)?,
                };
                TransferSetup::new(&h, *r, *n)
            }
            SetupSpec::Field { top, sub, r, n } => {
                TransferSetup::over_field(&top.build()?, &sub.build()?, *r, *n)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum OracleSpec {
    Split {
        #[serde(default = "one_u64")]
        value: u64,
    },
    Table {
        entries: Vec<(Vec<u64>, u64)>,
        #[serde(default)]
        default: Option<u64>,
    },
    Unmoved {
        base: MixedSpec,
        twisted: MixedSpec,
        /// Class twisted by β, for pairs.
        #[serde(default)]
        twisted2: Option<MixedSpec>,
    },
}

fn one_u64() -> u64 {
    1
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnumerationSpec {
    #[serde(default)]
    pub mode: Option<ModeKind>,
    #[serde(default)]
    pub budget: Option<u64>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub samples: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub alpha: Vec<i64>,
    pub beta: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Scenario {
    Index {
        class: ClassSpec,
    },
    Restrict {
        class: ClassSpec,
        target: FieldSpec,
    },
    Cyclic {
        field: FieldSpec,
        generator: u64,
        a: String,
    },
    EmbedCheck {
        d: ClassSpec,
        a: u64,
        e: MixedSpec,
        #[serde(rename = "N")]
        big_n: u64,
    },
    Counterexample {
        p1: u64,
        p2: u64,
        level: u32,
    },
    Reduce {
        setup: SetupSpec,
        #[serde(default)]
        second: Option<SetupSpec>,
        oracle: OracleSpec,
        #[serde(default)]
        enumeration: EnumerationSpec,
    },
    Thm6 {
        d1: ClassSpec,
        #[serde(default)]
        k1: Option<FieldSpec>,
        d2: ClassSpec,
        #[serde(default)]
        k2: Option<FieldSpec>,
        #[serde(rename = "N")]
        big_n: u64,
        #[serde(default)]
        enumeration: EnumerationSpec,
        #[serde(default)]
        certify: Vec<PairSpec>,
    },
    Thm7 {
        d1: ClassSpec,
        #[serde(default)]
        k1: Option<FieldSpec>,
        d2: ClassSpec,
        #[serde(default)]
        k2: Option<FieldSpec>,
        #[serde(rename = "N")]
        big_n: u64,
        #[serde(default)]
        enumeration: EnumerationSpec,
    },
}

impl Scenario {
    pub fn command(&self) -> &'static str {
        match self {
            Scenario::Index { .. } => "index",
            Scenario::Restrict { .. } => "restrict",
            Scenario::Cyclic { .. } => "cyclic",
            Scenario::EmbedCheck { .. } => "embed-check",
            Scenario::Counterexample { .. } => "counterexample",
            Scenario::Reduce { .. } => "reduce",
            Scenario::Thm6 { .. } => "thm6",
            Scenario::Thm7 { .. } => "thm7",
        }
    }

    fn enumeration(&self) -> Option<&EnumerationSpec> {
        match self {
            Scenario::Reduce { enumeration, .. }
            | Scenario::Thm6 { enumeration, .. }
            | Scenario::Thm7 { enumeration, .. } => Some(enumeration),
            _ => None,
        }
    }
}

#[derive(Parser, Debug, Clone, Default)]
#[command(
    name = "csalab",
    version,
    about = "Brauer classes, embedding checks and index-reduction gcds"
)]
pub struct Flags {
    /// Scenario file (JSON).
    pub scenario: PathBuf,
    #[arg(long, value_enum)]
    pub mode: Option<ModeKind>,
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub samples: Option<u64>,
    /// Print only the JSON report.
    #[arg(long)]
    pub json: bool,
}

/// Exit code and captured output of one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses a scenario, rejecting unknown keys.
pub fn parse_scenario(text: &str) -> std::result::Result<Scenario, String> {
    serde_json::from_str(text).map_err(|e| e.to_string())
}

/// Combines file values, flags and the environment ceiling.
pub fn resolve_mode(spec: &EnumerationSpec, flags: &Flags, ceiling: Option<u64>) -> EnumerationMode {
    let mode = flags.mode.or(spec.mode).unwrap_or(ModeKind::Auto);
    let mut budget = flags.budget.or(spec.budget).unwrap_or(DEFAULT_BUDGET);
    if let Some(c) = ceiling {
        budget = budget.min(c);
    }
    let seed = flags.seed.or(spec.seed).unwrap_or(DEFAULT_SEED);
    let samples = flags.samples.or(spec.samples).unwrap_or(DEFAULT_SAMPLES);
    match mode {
        ModeKind::Exhaustive => EnumerationMode::Exhaustive { budget },
        ModeKind::Sampled => EnumerationMode::Sampled { seed, samples },
        ModeKind::Auto => EnumerationMode::Auto {
            budget,
            seed,
            samples,
        },
    }
}

fn mode_json(mode: EnumerationMode) -> Value {
    match mode {
        EnumerationMode::Exhaustive { budget } => json!({"mode": "exhaustive", "budget": budget}),
        EnumerationMode::Sampled { seed, samples } => {
            json!({"mode": "sampled", "seed": seed, "samples": samples})
        }
        EnumerationMode::Auto {
            budget,
            seed,
            samples,
        } => {
            json!({"mode": "auto", "budget": budget, "seed": seed, "samples": samples})
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn class_json(c: &BrauerClass) -> Value {
    json!({
        "field": to_value(&FieldSummary::from(c.base())),
        "invariants": to_value(&class_entries(c)),
        "index": c.index(),
        "exponent": c.exponent(),
    })
}

fn parse_rational(s: &str) -> Result<Ratio<i64>> {
    let bad = || Error::Invariant(format!("cannot parse {s:?} as a rational number"));
    let (n, d) = match s.trim().split_once('/') {
        Some((n, d)) => (
            n.trim().parse::<i64>().map_err(|_| bad())?,
            d.trim().parse::<i64>().map_err(|_| bad())?,
        ),
        None => (s.trim().parse::<i64>().map_err(|_| bad())?, 1),
    };
    if d == 0 {
        return Err(bad());
    }
    Ok(Ratio::new(n, d))
}

fn elements_of(
    setups: &[&TransferSetup; 2],
    pair: &PairSpec,
) -> Result<(GroupRingElement, GroupRingElement)> {
    Ok((
        GroupRingElement::new(setups[0].space(), setups[0].r(), &pair.alpha)?,
        GroupRingElement::new(setups[1].space(), setups[1].r(), &pair.beta)?,
    ))
}

/// The result object and whether every reported check passed.
fn execute(sc: &Scenario, mode: Option<EnumerationMode>) -> Result<(Value, bool)> {
    let mode = mode.unwrap_or_default();
    match sc {
        Scenario::Index { class } => {
            let c = class.build()?;
            Ok((class_json(&c), true))
        }
        Scenario::Restrict { class, target } => {
            let c = class.build()?;
            let r = c.restrict(&target.build()?)?;
            Ok((
                json!({"original": class_json(&c), "restricted": class_json(&r)}),
                true,
            ))
        }
        Scenario::Cyclic { field, generator, a } => {
            let data = CyclicData {
                field: field.build()?,
                generator: *generator,
                a: parse_rational(a)?,
            };
            let c = cyclic_algebra(&data)?;
            Ok((class_json(&c), true))
        }
        Scenario::EmbedCheck { d, a, e, big_n } => {
            let inst = EmbedInstance::new(d.build()?, *a, e.build()?, *big_n)?;
            let out = embed::embed_check(&inst)?;
            Ok((json!({"b": inst.b(), "outcome": to_value(&out)}), true))
        }
        Scenario::Counterexample { p1, p2, level } => {
            let rep = embed::counterexample_run(*p1, *p2, *level)?;
            Ok((to_value(&rep), rep.passed()))
        }
        Scenario::Reduce {
            setup,
            second,
            oracle,
            ..
        } => {
            let s1 = setup.build()?;
            let report = match second {
                None => match oracle {
                    OracleSpec::Split { value } => reduction::reduce_single(&s1, &SplitOracle(*value), mode)?,
                    OracleSpec::Table { entries, default } => {
                        let t = table_oracle(entries, *default);
                        reduction::reduce_single(&s1, &t, mode)?
                    }
                    OracleSpec::Unmoved {
                        base,
                        twisted,
                        twisted2: None,
                    } => {
                        let o = UnmovedOracle::new(&s1, &base.build()?, &twisted.build()?)?;
                        reduction::reduce_single(&s1, &o, mode)?
                    }
                    OracleSpec::Unmoved { .. } => {
                        return Err(Error::Precondition("twisted2 needs a second setup".into()))
                    }
                },
                Some(second) => {
                    let s2 = second.build()?;
                    match oracle {
                        OracleSpec::Split { value } => {
                            reduction::reduce_double(&s1, &s2, &SplitOracle(*value), mode)?
                        }
                        OracleSpec::Table { entries, default } => {
                            let t = table_oracle(entries, *default);
                            reduction::reduce_double(&s1, &s2, &t, mode)?
                        }
                        OracleSpec::Unmoved {
                            base,
                            twisted,
                            twisted2,
                        } => {
                            let t2 = twisted2
                                .as_ref()
                                .ok_or_else(|| Error::Precondition("pair oracle needs twisted2".into()))?;
                            let o = UnmovedPairOracle::new(
                                &s1,
                                &s2,
                                &base.build()?,
                                &twisted.build()?,
                                &t2.build()?,
                            )?;
                            reduction::reduce_double(&s1, &s2, &o, mode)?
                        }
                    }
                }
            };
            Ok((to_value(&report), true))
        }
        Scenario::Thm6 {
            d1,
            k1,
            d2,
            k2,
            big_n,
            certify,
            ..
        } => {
            let sc = Thm6Scenario::new(
                &d1.build()?,
                &field_or_rationals(k1)?,
                &d2.build()?,
                &field_or_rationals(k2)?,
                *big_n,
            )?;
            let report = embed::thm6_divisibility(&sc, mode, true)?;
            let setups = sc.setups();
            let mut certs = Vec::new();
            for pair in certify {
                let (a, b) = elements_of(&[&setups[0], &setups[1]], pair)?;
                for p in crate::arith::prime_divisors(*big_n) {
                    debug_assert!(is_prime(p));
                    certs.push(to_value(&embed::thm6_certificate(&sc, &a, &b, p)?));
                }
            }
            Ok((
                json!({"divisibility": to_value(&report), "certificates": certs}),
                true,
            ))
        }
        Scenario::Thm7 {
            d1,
            k1,
            d2,
            k2,
            big_n,
            ..
        } => {
            let rep = embed::thm7_pipeline(
                &d1.build()?,
                &field_or_rationals(k1)?,
                &d2.build()?,
                &field_or_rationals(k2)?,
                *big_n,
                mode,
            )?;
            Ok((to_value(&rep), true))
        }
    }
}

fn table_oracle(entries: &[(Vec<u64>, u64)], default: Option<u64>) -> TableOracle {
    TableOracle {
        entries: entries.iter().cloned().collect::<HashMap<_, _>>(),
        default,
    }
}

/// Flattens a JSON value into sorted `path: value` lines.
pub fn render_text(v: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<String>) {
        match v {
            Value::Object(map) => {
                for (k, x) in map {
                    let p = if prefix.is_empty() {
                        k.clone()
                    } else {
                        format!("{prefix}.{k}")
                    };
                    walk(&p, x, out);
                }
            }
            Value::Array(items) if items.iter().any(|x| x.is_object()) => {
                for (i, x) in items.iter().enumerate() {
                    walk(&format!("{prefix}[{i}]"), x, out);
                }
            }
            other => out.push(format!("{prefix}: {other}")),
        }
    }
    let mut lines = Vec::new();
    walk("", v, &mut lines);
    lines.join("\n") + "\n"
}

fn env_ceiling() -> std::result::Result<Option<u64>, String> {
    match std::env::var(BUDGET_ENV) {
        Ok(s) => s
            .trim()
            .parse::<u64>()
            .map(Some)
            .map_err(|_| format!("{BUDGET_ENV}={s:?} is not an integer")),
        Err(_) => Ok(None),
    }
}

/// Exit code for a library error: 3 for consistency violations, else 2.
pub fn exit_code_for(e: &Error) -> i32 {
    if e.is_consistency() {
        EXIT_CONSISTENCY
    } else {
        EXIT_PRECONDITION
    }
}

fn fail(code: i32, kind: &str, msg: &str) -> Outcome {
    let line = msg.replace('\n', " ");
    Outcome {
        code,
        stdout: String::new(),
        stderr: format!("error: {kind}: {line}\n"),
    }
}

/// Runs a scenario given as text.
pub fn run_text(text: &str, flags: &Flags) -> Outcome {
    let sc = match parse_scenario(text) {
        Ok(sc) => sc,
        Err(e) => return fail(EXIT_PRECONDITION, "schema", &e),
    };
    let ceiling = match env_ceiling() {
        Ok(c) => c,
        Err(e) => return fail(EXIT_PRECONDITION, "environment", &e),
    };
    let mode = sc.enumeration().map(|spec| resolve_mode(spec, flags, ceiling));
    let (result, passed) = match execute(&sc, mode) {
        Ok(r) => r,
        Err(e) => {
            let kind = if e.is_consistency() {
                "consistency"
            } else {
                "precondition"
            };
            return fail(exit_code_for(&e), kind, &e.to_string());
        }
    };
    let mut report = json!({
        "command": sc.command(),
        "input": to_value(&sc),
        "result": result,
        "passed": passed,
    });
    if let Some(m) = mode {
        report["enumeration"] = mode_json(m);
    }
    let stdout = if flags.json {
        serde_json::to_string_pretty(&report).expect("json") + "\n"
    } else {
        render_text(&report)
    };
    if passed {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    } else {
        Outcome {
            code: EXIT_CONSISTENCY,
            stdout,
            stderr: format!("error: consistency: {} checks failed\n", sc.command()),
        }
    }
}

/// Reads the scenario file named in `flags` and runs it.
pub fn run(flags: &Flags) -> Outcome {
    run_path(&flags.scenario, flags)
}

pub fn run_path(path: &Path, flags: &Flags) -> Outcome {
    match std::fs::read_to_string(path) {
        Ok(text) => run_text(&text, flags),
        Err(e) => fail(EXIT_PRECONDITION, "io", &format!("{}: {e}", path.display())),
    }
}
