//! Experiment configuration, the seven experiments and their on-disk artifacts.
//!
//! Every experiment computes its artifacts in memory, then writes them together with a
//! `<name>_manifest.json` recording the config hash, seed and tolerances. Output is
//! deterministic for a given config and seed.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::causal_cone::{
    self, connes_distance, field_in_cone, find_clock_phenomenon, monotone_instability_search,
    AnalyticFamily, FiniteDirac, Grid, MatrixField,
};
use crate::error::Error;
use crate::figure::{self, FigureSetup};
use crate::hermitian::{HermMat, DEFAULT_PSD_TOL};
use crate::isocone::{
    self, lex_order_consistency_check, saturation_check, BlochState, CapIsocone, Component,
    LexIsocone,
};
use crate::minkowski::{
    self, lambda_closedness_probe, lambda_leq, lorentz_distance, penrose_inverse, Coordinates,
    Lambda, PenrosePoint,
};
use crate::poset::FinitePoset;

/// Environment variable overriding the configured seed.
pub const SEED_ENV: &str = "NC_CAUSAL_SEED";
pub const MIN_RESOLUTION: usize = 16;
pub const MAX_RESOLUTION: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    Fig1Cone,
    Fig1Isocone,
    ConnesDist,
    ConeCheck,
    LexOrder,
    LambdaOrder,
    Saturate,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::Fig1Cone,
        Experiment::Fig1Isocone,
        Experiment::ConnesDist,
        Experiment::ConeCheck,
        Experiment::LexOrder,
        Experiment::LambdaOrder,
        Experiment::Saturate,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Fig1Cone => "fig1-cone",
            Experiment::Fig1Isocone => "fig1-isocone",
            Experiment::ConnesDist => "connes-dist",
            Experiment::ConeCheck => "cone-check",
            Experiment::LexOrder => "lex-order",
            Experiment::LambdaOrder => "lambda-order",
            Experiment::Saturate => "saturate",
        }
    }

    /// Prefix of the output files.
    pub fn stem(&self) -> String {
        self.name().replace('-', "_")
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.name() == name)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BaseConfig {
    /// Base event, in any coordinate system.
    pub a: Coordinates,
    /// Base state as a Bloch vector.
    pub p: BlochState,
}

impl Default for BaseConfig {
    fn default() -> Self {
        Self {
            a: Coordinates::Cartesian([0.0, 0.0]),
            p: BlochState::new([1.0, 0.0, 0.0]).expect("unit vector"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapConfig {
    pub axis: [f64; 3],
    pub rho: f64,
}

/// JSON experiment configuration; every field is optional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// When present, must name the experiment being run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experiment: Option<String>,
    pub base: BaseConfig,
    pub dirac: FiniteDirac,
    pub cap: CapConfig,
    pub lambda: f64,
    pub resolution: usize,
    pub seed: u64,
    /// Sample count for `lex-order` and trial count for the monotone-calculus search.
    pub samples: usize,
    pub state_samples: usize,
    pub element_samples: usize,
    /// Sphere points in the cap annotation of the isocone panel.
    pub cap_samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub annotate: Option<Vec<[usize; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state_pairs: Option<Vec<[BlochState; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub event_pairs: Option<Vec<[Coordinates; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lex: Option<LexIsocone>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fields: Option<Vec<MatrixField>>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: None,
            base: BaseConfig::default(),
            dirac: FiniteDirac::new(0.0, 1.0),
            cap: CapConfig {
                axis: [0.0, 0.0, 1.0],
                rho: FRAC_PI_4,
            },
            lambda: 0.5,
            resolution: 64,
            seed: 1,
            samples: 1000,
            state_samples: 200,
            element_samples: 400,
            cap_samples: 2000,
            annotate: None,
            state_pairs: None,
            event_pairs: None,
            lex: None,
            fields: None,
        }
    }
}

/// Config problem tied to one field.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    fn new(field: impl Into<String>, message: impl fmt::Display) -> Self {
        Self {
            field: field.into(),
            message: message.to_string(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.is_empty() || self.field == "." {
            write!(f, "invalid config: {}", self.message)
        } else {
            write!(f, "invalid config: field `{}`: {}", self.field, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

/// Parses a JSON config, reporting the path of the offending field.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de)
        .map_err(|e| ConfigError::new(e.path().to_string(), e.inner()))
}

/// Reads the seed override, if the variable is set.
pub fn seed_override(value: Option<&str>) -> Result<Option<u64>, ConfigError> {
    value
        .map(|v| {
            v.trim()
                .parse::<u64>()
                .map_err(|e| ConfigError::new(SEED_ENV, format!("{e}: {v:?}")))
        })
        .transpose()
}

/// Typed view of a validated config.
#[derive(Clone, Debug)]
pub struct Validated {
    pub a: PenrosePoint,
    pub p: BlochState,
    pub dirac: FiniteDirac,
    pub cap: CapIsocone,
    pub lambda: Lambda,
}

impl ExperimentConfig {
    pub fn validate(&self, experiment: Experiment) -> Result<Validated, ConfigError> {
        if let Some(name) = &self.experiment {
            if name != experiment.name() {
                return Err(ConfigError::new(
                    "experiment",
                    format!("config is for `{name}`, not `{}`", experiment.name()),
                ));
            }
        }
        if self.resolution < MIN_RESOLUTION || self.resolution > MAX_RESOLUTION {
            return Err(ConfigError::new(
                "resolution",
                format!(
                    "must lie in [{MIN_RESOLUTION}, {MAX_RESOLUTION}], got {}",
                    self.resolution
                ),
            ));
        }
        let lambda = Lambda::new(self.lambda).map_err(|e| ConfigError::new("lambda", e))?;
        let d = self.dirac;
        if !(d.d1.is_finite() && d.d2.is_finite()) {
            return Err(ConfigError::new("dirac", "entries must be finite"));
        }
        if d.gap() == 0.0 {
            return Err(ConfigError::new("dirac", Error::DegenerateDirac(d.d1)));
        }
        let cap = CapIsocone::cap(self.cap.axis, self.cap.rho)
            .map_err(|e| ConfigError::new("cap", e))?;
        let a = self
            .base
            .a
            .to_penrose()
            .map_err(|e| ConfigError::new("base.a", e))?;
        if a.is_boundary() {
            return Err(ConfigError::new(
                "base.a",
                "the base point must lie inside the Penrose square",
            ));
        }
        for (name, v) in [
            ("samples", self.samples),
            ("state_samples", self.state_samples),
            ("element_samples", self.element_samples),
            ("cap_samples", self.cap_samples),
        ] {
            if v == 0 {
                return Err(ConfigError::new(name, "must be at least 1"));
            }
        }
        for (k, cell) in self.annotate.iter().flatten().enumerate() {
            if cell[0] >= self.resolution || cell[1] >= self.resolution {
                return Err(ConfigError::new(
                    format!("annotate[{k}]"),
                    format!("cell {cell:?} outside a {0}×{0} grid", self.resolution),
                ));
            }
        }
        for (k, pair) in self.event_pairs.iter().flatten().enumerate() {
            for c in pair {
                c.to_penrose()
                    .map_err(|e| ConfigError::new(format!("event_pairs[{k}]"), e))?;
            }
        }
        Ok(Validated {
            a,
            p: self.base.p,
            dirac: d,
            cap,
            lambda,
        })
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("config serializes");
        format!("{:x}", Sha256::digest(text.as_bytes()))
    }
}

/// Lexicographic fixtures used when the config names none.
pub fn default_lex_fixtures() -> Vec<(String, LexIsocone)> {
    let cap = |axis: [f64; 3], rho: f64| Component::cap(axis, rho).expect("valid cap");
    let build = |size: usize, pairs: &[(usize, usize)], comps: Vec<Component>| {
        LexIsocone::new(FinitePoset::from_pairs(size, pairs).expect("acyclic"), comps)
            .expect("valid fixture")
    };
    vec![
        (
            "chain-of-caps".into(),
            build(
                2,
                &[(0, 1)],
                vec![cap([0.0, 0.0, 1.0], FRAC_PI_4), cap([1.0, 0.0, 0.0], 0.3)],
            ),
        ),
        (
            "vee".into(),
            build(
                3,
                &[(0, 1), (0, 2)],
                vec![
                    cap([0.0, 0.0, 1.0], FRAC_PI_4),
                    Component::full(1),
                    cap([1.0, 0.0, 0.0], 0.3),
                ],
            ),
        ),
        (
            "mixed-dimensions".into(),
            build(
                3,
                &[(0, 2), (1, 2)],
                vec![
                    Component::full(3),
                    cap([1.0, 1.0, 1.0], 0.5),
                    Component::full(2),
                ],
            ),
        ),
        (
            "antichain".into(),
            build(
                2,
                &[],
                vec![cap([0.0, 1.0, 0.0], 1.2), Component::full(1)],
            ),
        ),
    ]
}

/// Cone-check fixtures used when the config names none.
pub fn default_cone_fields() -> Vec<(String, MatrixField)> {
    let grid = Grid::square(1.0, 9).expect("valid grid");
    let analytic = |fam| MatrixField::analytic(grid, fam).expect("valid family");
    vec![
        (
            "time".into(),
            analytic(AnalyticFamily::TimePlusConstant {
                a: HermMat::zeros(2),
            }),
        ),
        (
            "time-plus-offdiagonal".into(),
            analytic(AnalyticFamily::TimePlusConstant {
                a: HermMat::from_real_rows(&[&[0.0, 0.4], &[0.4, 1.0]]).expect("symmetric"),
            }),
        ),
        (
            "time-plus-split".into(),
            analytic(AnalyticFamily::TimePlusConstant {
                a: HermMat::from_real_diag(&[0.0, 10.0]),
            }),
        ),
        (
            "lightcone-diagonal".into(),
            analytic(AnalyticFamily::Affine {
                c: HermMat::zeros(2),
                a_u: HermMat::from_real_diag(&[1.0, 0.0]),
                a_v: HermMat::from_real_diag(&[0.0, 1.0]),
            }),
        ),
        (
            "past-directed".into(),
            MatrixField::from_fn(grid, |u, _| HermMat::scalar(2, -u)).expect("valid field"),
        ),
    ]
}

#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    Output { path: PathBuf, source: std::io::Error },
    Compute(Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 1,
            RunError::Output { .. } => 2,
            RunError::Compute(_) => 3,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "{e}"),
            RunError::Output { path, source } => {
                write!(f, "cannot write output {}: {source}", path.display())
            }
            RunError::Compute(e) => write!(f, "experiment failed: {e}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Compute(e)
    }
}

/// Where the seed came from, for the manifest.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeedSource {
    Config,
    Environment,
}

/// In-memory artifacts of one experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifacts {
    pub files: Vec<(String, String)>,
    pub notes: Vec<String>,
}

fn pretty(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("artifact serializes");
    s.push('\n');
    s
}

fn figure_setup(cfg: &ExperimentConfig, v: &Validated) -> FigureSetup {
    FigureSetup {
        a: v.a,
        p: v.p,
        dirac: v.dirac,
        cap: v.cap,
        lambda: v.lambda,
        resolution: cfg.resolution,
        cap_samples: cfg.cap_samples,
    }
}

fn annotated_cells(cfg: &ExperimentConfig, grid: &figure::FutureSetGrid) -> Vec<(usize, usize)> {
    match &cfg.annotate {
        Some(cells) => cells.iter().map(|c| (c[0], c[1])).collect(),
        None => figure::default_annotated_cells(grid),
    }
}

/// Computes the artifacts of `experiment` without touching the file system.
pub fn compute(experiment: Experiment, cfg: &ExperimentConfig) -> Result<Artifacts, RunError> {
    let v = cfg.validate(experiment)?;
    let stem = experiment.stem();
    let mut notes = Vec::new();
    let files = match experiment {
        Experiment::Fig1Cone | Experiment::Fig1Isocone => {
            let setup = figure_setup(cfg, &v);
            let (grid, annotations, panel) = if experiment == Experiment::Fig1Cone {
                let grid = figure::fig1_causal_cone(&setup)?;
                let ann = figure::annotate_causal_cone(&setup, &grid, &annotated_cells(cfg, &grid))?;
                notes.push(
                    "grey cells: causal future of the base event; sphere arcs lie on the \
                     latitude of p and are bounded by the Connes distance |n_p - n_q| / |d1 - d2|, \
                     which on a latitude circle differs from the great-circle distance"
                        .to_string(),
                );
                (grid, ann, "causal-cone")
            } else {
                let grid = figure::fig1_isocone(&setup)?;
                let ann = figure::annotate_isocone(&setup, &grid, &annotated_cells(cfg, &grid))?;
                notes.push(
                    "grey cells: strict Lambda-future of the base event, where the whole sphere \
                     lies above (a, p); the base sphere carries the cap order p + K°"
                        .to_string(),
                );
                (grid, ann, "isocone")
            };
            vec![
                (format!("{stem}.csv"), grid.to_csv()),
                (format!("{stem}.pgm"), grid.to_pgm()),
                (
                    format!("{stem}_annotations.json"),
                    pretty(&json!({
                        "panel": panel,
                        "resolution": grid.resolution,
                        "base_cell": grid.base,
                        "grey_cells": grid.count(figure::CellStatus::Grey),
                        "cells": annotations,
                    })),
                ),
            ]
        }
        Experiment::ConnesDist => connes_artifacts(cfg, &v, &stem)?,
        Experiment::ConeCheck => cone_check_artifacts(cfg, &v, &stem)?,
        Experiment::LexOrder => {
            let reports: Vec<Value> = lex_fixtures(cfg)
                .into_iter()
                .map(|(name, l)| {
                    let r = lex_order_consistency_check(&l, cfg.samples, cfg.seed);
                    json!({"fixture": name, "isocone": l, "report": r})
                })
                .collect();
            vec![(format!("{stem}.json"), pretty(&json!({ "fixtures": reports })))]
        }
        Experiment::LambdaOrder => lambda_artifacts(cfg, &v, &stem)?,
        Experiment::Saturate => {
            let reports: Vec<Value> = lex_fixtures(cfg)
                .into_iter()
                .map(|(name, l)| {
                    let r = saturation_check(&l, cfg.state_samples, cfg.element_samples, cfg.seed);
                    json!({"fixture": name, "isocone": l, "report": r})
                })
                .collect();
            notes.push(
                "sampling evidence only: a clean report means no counterexample was found"
                    .to_string(),
            );
            vec![(format!("{stem}.json"), pretty(&json!({ "fixtures": reports })))]
        }
    };
    Ok(Artifacts { files, notes })
}

fn lex_fixtures(cfg: &ExperimentConfig) -> Vec<(String, LexIsocone)> {
    match &cfg.lex {
        Some(l) => vec![("config".to_string(), l.clone())],
        None => default_lex_fixtures(),
    }
}

fn connes_artifacts(
    cfg: &ExperimentConfig,
    v: &Validated,
    stem: &str,
) -> Result<Vec<(String, String)>, RunError> {
    let p = v.p;
    let n = p.bloch();
    let r = n[0].hypot(n[1]);
    let on_latitude = |dphi: f64| {
        let phi = p.azimuth() + dphi;
        BlochState::new([r * phi.cos(), r * phi.sin(), n[2]])
    };
    let pairs: Vec<[BlochState; 2]> = match &cfg.state_pairs {
        Some(pairs) => pairs.clone(),
        None => {
            let mut pairs = Vec::new();
            if r > 1e-12 {
                for k in 0..=8 {
                    pairs.push([p, on_latitude(PI * k as f64 / 8.0)?]);
                }
            }
            pairs.push([p, BlochState::north()]);
            pairs
        }
    };
    let rows = pairs
        .iter()
        .map(|[s1, s2]| {
            Ok(json!({
                "s1": s1,
                "s2": s2,
                "distance": connes_distance(&v.dirac, s1, s2)?,
                "great_circle": s1.geodesic(s2),
            }))
        })
        .collect::<Result<Vec<Value>, Error>>()?;
    let mut csv = String::from("delta_phi,connes,chord,great_circle\n");
    if r > 1e-12 {
        for k in 0..=64 {
            let dphi = PI * k as f64 / 64.0;
            let q = on_latitude(dphi)?;
            let d = connes_distance(&v.dirac, &p, &q)?
                .finite()
                .expect("same latitude");
            csv.push_str(&format!("{dphi},{d},{},{}\n", p.chord(&q), p.geodesic(&q)));
        }
    }
    Ok(vec![
        (
            format!("{stem}.json"),
            pretty(&json!({"dirac": v.dirac, "gap": v.dirac.gap(), "pairs": rows})),
        ),
        (format!("{stem}.csv"), csv),
    ])
}

fn cone_check_artifacts(
    cfg: &ExperimentConfig,
    v: &Validated,
    stem: &str,
) -> Result<Vec<(String, String)>, RunError> {
    let fields = match &cfg.fields {
        Some(fs) => fs
            .iter()
            .enumerate()
            .map(|(k, f)| (format!("field-{k}"), f.clone()))
            .collect(),
        None => default_cone_fields(),
    };
    let mut rows = Vec::new();
    for (name, f) in &fields {
        let check = field_in_cone(f, &v.dirac, DEFAULT_PSD_TOL)?;
        let clock = if check.in_cone {
            find_clock_phenomenon(f, &v.dirac, cfg.seed)?
        } else {
            None
        };
        let derivatives = match f.scheme() {
            causal_cone::DerivativeScheme::FiniteDifference => "finite-difference".to_string(),
            causal_cone::DerivativeScheme::Analytic(fam) => format!("analytic:{}", fam.name()),
        };
        rows.push(json!({
            "name": name,
            "derivatives": derivatives,
            "check": check,
            "clock_phenomenon": clock,
        }));
    }
    let witness = monotone_instability_search(cfg.samples, cfg.seed)?;
    Ok(vec![(
        format!("{stem}.json"),
        pretty(&json!({
            "dirac": v.dirac,
            "fields": rows,
            "monotone_calculus_witness": witness,
        })),
    )])
}

fn lambda_artifacts(
    cfg: &ExperimentConfig,
    v: &Validated,
    stem: &str,
) -> Result<Vec<(String, String)>, RunError> {
    let pairs: Vec<[Coordinates; 2]> = match &cfg.event_pairs {
        Some(p) => p.clone(),
        None => [[1.0, 0.0], [1.0, 0.8], [0.0, 1.0], [2.0, 0.0], [0.3, 0.1]]
            .into_iter()
            .map(|b| [cfg.base.a, Coordinates::Cartesian(b)])
            .collect(),
    };
    let rows = pairs
        .iter()
        .map(|[x, y]| {
            let (px, py) = (x.to_penrose()?, y.to_penrose()?);
            let lorentz = match (penrose_inverse(&px), penrose_inverse(&py)) {
                (Ok(a), Ok(b)) => Some(lorentz_distance(&a, &b)),
                _ => None,
            };
            Ok(json!({
                "from": px,
                "to": py,
                "lorentz": lorentz,
                "lambda": v.lambda.value(),
                "related": lambda_leq(&px, &py, v.lambda),
                "causal": lambda_leq(&px, &py, Lambda::zero()),
            }))
        })
        .collect::<Result<Vec<Value>, Error>>()?;
    let radius = if v.lambda.value() > 0.0 {
        Some(lambda_closedness_probe(&v.a, v.lambda)?)
    } else {
        None
    };
    Ok(vec![(
        format!("{stem}.json"),
        pretty(&json!({
            "base": v.a,
            "lambda": v.lambda.value(),
            "pairs": rows,
            "closedness_radius": radius,
        })),
    )])
}

fn manifest(
    experiment: Experiment,
    cfg: &ExperimentConfig,
    seed_source: SeedSource,
    artifacts: &Artifacts,
) -> String {
    pretty(&json!({
        "experiment": experiment.name(),
        "version": env!("CARGO_PKG_VERSION"),
        "config_sha256": cfg.hash(),
        "config": cfg,
        "seed": cfg.seed,
        "seed_source": match seed_source {
            SeedSource::Config => "config",
            SeedSource::Environment => SEED_ENV,
        },
        "tolerances": {
            "psd": DEFAULT_PSD_TOL,
            "order": causal_cone::ORDER_TOL,
            "latitude": causal_cone::LATITUDE_TOL,
            "cap_angle": isocone::ANGLE_TOL,
            "spectral": isocone::SPECTRAL_TOL,
            "state_equality": isocone::STATE_EQ_TOL,
            "lambda_threshold_rtol": minkowski::THRESHOLD_RTOL,
        },
        "outputs": artifacts.files.iter().map(|(name, _)| name).collect::<Vec<_>>(),
        "notes": artifacts.notes,
    }))
}

/// Runs an experiment and writes its artifacts and manifest into `out`.
pub fn run(
    experiment: Experiment,
    cfg: &ExperimentConfig,
    seed_source: SeedSource,
    out: &Path,
) -> Result<Vec<PathBuf>, RunError> {
    let artifacts = compute(experiment, cfg)?;
    let manifest = manifest(experiment, cfg, seed_source, &artifacts);
    fs::create_dir_all(out).map_err(|source| RunError::Output {
        path: out.to_path_buf(),
        source,
    })?;
    let mut written = Vec::new();
    let manifest_name = format!("{}_manifest.json", experiment.stem());
    for (name, body) in artifacts.files.iter().chain([&(manifest_name, manifest)]) {
        let path = out.join(name);
        fs::write(&path, body).map_err(|source| RunError::Output {
            path: path.clone(),
            source,
        })?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid_for_every_experiment() {
        let cfg = ExperimentConfig::default();
        for e in Experiment::ALL {
            cfg.validate(e).unwrap();
            assert_eq!(Experiment::from_name(e.name()), Some(e));
        }
    }

    #[test]
    fn field_level_errors() {
        let e = parse_config(r#"{"resolution": "big"}"#).unwrap_err();
        assert_eq!(e.field, "resolution");
        let e = parse_config(r#"{"cap": {"axis": [0, 0, 1], "rho": 0.5, "extra": 1}}"#).unwrap_err();
        assert_eq!(e.field, "cap.extra");
        let e = parse_config(r#"{"base": {"p": [1, 1, 0]}}"#).unwrap_err();
        assert_eq!(e.field, "base.p");

        let cfg = parse_config(r#"{"resolution": 8}"#).unwrap();
        let e = cfg.validate(Experiment::Fig1Cone).unwrap_err();
        assert_eq!(e.field, "resolution");
        assert!(e.to_string().contains("field `resolution`"));

        let cfg = parse_config(r#"{"dirac": {"d1": 1, "d2": 1}}"#).unwrap();
        assert_eq!(cfg.validate(Experiment::ConnesDist).unwrap_err().field, "dirac");
        let cfg = parse_config(r#"{"base": {"a": {"coords": "penrose", "point": [3.141592653589793, 0]}}}"#).unwrap();
        assert_eq!(cfg.validate(Experiment::Fig1Cone).unwrap_err().field, "base.a");
        let cfg = parse_config(r#"{"experiment": "saturate"}"#).unwrap();
        assert_eq!(cfg.validate(Experiment::LexOrder).unwrap_err().field, "experiment");
        let cfg = parse_config(r#"{"lambda": -1}"#).unwrap();
        assert_eq!(cfg.validate(Experiment::LambdaOrder).unwrap_err().field, "lambda");
    }

    #[test]
    fn seed_override_parsing() {
        assert_eq!(seed_override(None).unwrap(), None);
        assert_eq!(seed_override(Some("42")).unwrap(), Some(42));
        assert_eq!(seed_override(Some("x")).unwrap_err().field, SEED_ENV);
    }

    #[test]
    fn config_round_trips_and_hash_is_stable() {
        let cfg = ExperimentConfig::default();
        let text = serde_json::to_string(&cfg).unwrap();
        let back = parse_config(&text).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.hash(), cfg.hash());
        let mut other = cfg.clone();
        other.seed = 2;
        assert_ne!(other.hash(), cfg.hash());
    }

    #[test]
    fn compute_is_deterministic() {
        let cfg = ExperimentConfig {
            resolution: 16,
            samples: 50,
            state_samples: 20,
            element_samples: 40,
            cap_samples: 100,
            ..Default::default()
        };
        for e in Experiment::ALL {
            assert_eq!(compute(e, &cfg).unwrap(), compute(e, &cfg).unwrap(), "{}", e.name());
        }
    }
}
