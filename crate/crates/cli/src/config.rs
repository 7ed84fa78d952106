//! Run configuration: TOML schema, documented defaults and total validation.

use std::fmt;
use std::path::{Path, PathBuf};

use logheat_core::control::Control;
use logheat_core::galerkin::SdeConfig;
use logheat_core::noise::{Atom, MarkSpace, NoiseCoefficient, NoiseFamily, MAX_EXPECTED_EVENTS};
use logheat_core::spectral::{Basis, Domain, SpectralField};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Simulate,
    Skeleton,
    Rate,
    Tail,
    Ldp1,
    Moments,
    Verify,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Self::Simulate => "simulate",
            Self::Skeleton => "skeleton",
            Self::Rate => "rate",
            Self::Tail => "tail",
            Self::Ldp1 => "ldp1",
            Self::Moments => "moments",
            Self::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Optional; when present it must match the subcommand.
    pub experiment: Option<Experiment>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    /// Worker threads; 0 lets the pool pick.
    pub workers: usize,
    pub domain: DomainSection,
    pub sde: SdeSection,
    pub noise: NoiseSection,
    pub marks: Vec<AtomSection>,
    pub control: ControlSection,
    pub target: TargetSection,
    pub moments: MomentsSection,
    pub rate: RateSection,
    pub tail: TailSection,
    pub ldp1: Ldp1Section,
    pub verify: VerifySection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            experiment: None,
            seed: 0,
            out: None,
            workers: 0,
            domain: DomainSection::default(),
            sde: SdeSection::default(),
            noise: NoiseSection::default(),
            marks: vec![AtomSection::default()],
            control: ControlSection::default(),
            target: TargetSection::default(),
            moments: MomentsSection::default(),
            rate: RateSection::default(),
            tail: TailSection::default(),
            ldp1: Ldp1Section::default(),
            verify: VerifySection::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DomainSection {
    pub dimension: usize,
    pub length: f64,
    pub nodes: usize,
}

impl Default for DomainSection {
    fn default() -> Self {
        Self {
            dimension: 1,
            length: 1.0,
            nodes: 128,
        }
    }
}

/// Initial datum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialSection {
    /// `amplitude · 4 (x/L)(1 − x/L)`, projected.
    Bump { amplitude: f64 },
    /// `amplitude · e_k`.
    Mode { k: usize, amplitude: f64 },
    /// Explicit coefficients (padded or truncated to the level).
    Coefficients { values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SdeSection {
    pub level: usize,
    pub horizon: f64,
    pub max_step: f64,
    /// Absent: the unscaled equation.
    pub epsilon: Option<f64>,
    pub laplacian: bool,
    pub log_term: bool,
    pub initial: InitialSection,
}

impl Default for SdeSection {
    fn default() -> Self {
        Self {
            level: 8,
            horizon: 1.0,
            max_step: 0.01,
            epsilon: None,
            laplacian: true,
            log_term: true,
            initial: InitialSection::Bump { amplitude: 1.0 },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseSection {
    pub family: NoiseFamily,
    pub m1: f64,
    pub m2: f64,
    pub theta: f64,
}

impl Default for NoiseSection {
    fn default() -> Self {
        Self {
            family: NoiseFamily::Tanh,
            m1: 0.5,
            m2: 0.5,
            theta: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AtomSection {
    pub weight: f64,
    pub h1: f64,
    pub h2: f64,
}

impl Default for AtomSection {
    fn default() -> Self {
        Self {
            weight: 1.0,
            h1: 1.0,
            h2: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ControlSection {
    pub cells: usize,
    /// Value of every cell and atom unless `rows` is given.
    pub constant: f64,
    /// One row of per-atom values per time cell.
    pub rows: Option<Vec<Vec<f64>>>,
    /// Bounded class `[1/N, N]` required by `ldp1`.
    pub class_bound: f64,
}

impl Default for ControlSection {
    fn default() -> Self {
        Self {
            cells: 4,
            constant: 1.0,
            rows: None,
            class_bound: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TargetSection {
    WholeSpace,
    /// Ball around `center`, or around the uncontrolled terminal state when
    /// `center` is absent.
    TerminalBall {
        radius: f64,
        #[serde(default)]
        center: Option<Vec<f64>>,
    },
    /// `⟨u(T), e_1⟩ ≥ level`, or `≥ (uncontrolled value) + shift` when
    /// `level` is absent.
    TerminalMeanExceedance {
        #[serde(default)]
        level: Option<f64>,
        #[serde(default)]
        shift: Option<f64>,
    },
}

impl Default for TargetSection {
    fn default() -> Self {
        Self::TerminalMeanExceedance {
            level: None,
            shift: Some(0.05),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MomentsSection {
    pub p: f64,
    pub paths: usize,
    /// Replace the SDE horizon by `ln(p / (p − 1 + θ))`.
    pub critical_horizon: bool,
}

impl Default for MomentsSection {
    fn default() -> Self {
        Self {
            p: 2.0,
            paths: 200,
            critical_horizon: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RateSection {
    pub cells: usize,
    pub budget: usize,
    pub restarts: usize,
    pub g_max: f64,
    pub tolerance: f64,
}

impl Default for RateSection {
    fn default() -> Self {
        Self {
            cells: 4,
            budget: 4000,
            restarts: 2,
            g_max: 10.0,
            tolerance: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TailSection {
    pub epsilons: Vec<f64>,
    pub paths: usize,
}

impl Default for TailSection {
    fn default() -> Self {
        Self {
            epsilons: vec![0.4, 0.2, 0.1],
            paths: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Ldp1Section {
    pub epsilons: Vec<f64>,
    pub paths: usize,
    pub delta: f64,
}

impl Default for Ldp1Section {
    fn default() -> Self {
        Self {
            epsilons: vec![0.4, 0.2, 0.1, 0.05],
            paths: 100,
            delta: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySection {
    pub log_sobolev: usize,
    pub log_diff_pairing: usize,
    pub log_plus_weighted: usize,
    pub nonlinear_gronwall: usize,
    pub log_gronwall: usize,
}

impl Default for VerifySection {
    fn default() -> Self {
        Self {
            log_sobolev: 1000,
            log_diff_pairing: 500,
            log_plus_weighted: 500,
            nonlinear_gronwall: 100,
            log_gronwall: 100,
        }
    }
}

/// One semantic problem, located by its dotted field path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

struct Collector(Vec<FieldError>);

impl Collector {
    fn push(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.0.push(FieldError {
            path: path.into(),
            message: message.into(),
        });
    }

    fn check(&mut self, ok: bool, path: &str, message: &str) {
        if !ok {
            self.push(path, message);
        }
    }

    fn core(&mut self, path: impl Into<String>, result: logheat_core::Result<()>) {
        if let Err(e) = result {
            self.push(path, e.to_string());
        }
    }
}

fn positive(x: f64) -> bool {
    x > 0.0 && x.is_finite()
}

/// Parses TOML text; syntax errors carry line and column.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
}

/// Reads, parses and fully validates a config file.
pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let cfg = parse_config(&text)?;
    let errors = cfg.validate();
    if errors.is_empty() {
        Ok(cfg)
    } else {
        Err(CliError::Invalid(errors))
    }
}

impl RunConfig {
    /// Every violated invariant, not just the first.
    pub fn validate(&self) -> Vec<FieldError> {
        let mut c = Collector(Vec::new());
        let d = &self.domain;
        let domain = Domain {
            dimension: d.dimension,
            length: d.length,
            nodes: d.nodes,
        };
        c.core("domain", domain.validate());

        let s = &self.sde;
        c.check(s.level >= 1, "sde.level", "Galerkin level must be at least 1");
        c.check(positive(s.horizon), "sde.horizon", "horizon must be positive and finite");
        c.check(
            positive(s.max_step) && s.max_step <= s.horizon,
            "sde.max_step",
            "max step must lie in (0, horizon]",
        );
        if let Some(eps) = s.epsilon {
            c.check(positive(eps), "sde.epsilon", "epsilon must be positive");
        }
        match &s.initial {
            InitialSection::Bump { amplitude } => {
                c.check(amplitude.is_finite(), "sde.initial.amplitude", "amplitude must be finite")
            }
            InitialSection::Mode { k, amplitude } => {
                c.check(*k >= 1, "sde.initial.k", "mode index must be at least 1");
                c.check(amplitude.is_finite(), "sde.initial.amplitude", "amplitude must be finite");
            }
            InitialSection::Coefficients { values } => {
                c.check(!values.is_empty(), "sde.initial.values", "at least one coefficient required");
                c.check(
                    values.iter().all(|v| v.is_finite()),
                    "sde.initial.values",
                    "coefficients must be finite",
                );
            }
        }

        let n = &self.noise;
        if let Err(e) = NoiseCoefficient::new(n.family, n.m1, n.m2, n.theta) {
            let path = if (0.0..1.0).contains(&n.theta) { "noise" } else { "noise.theta" };
            c.push(path, e.to_string());
        }

        c.check(!self.marks.is_empty(), "marks", "at least one atom required");
        for (i, a) in self.marks.iter().enumerate() {
            c.check(positive(a.weight), &format!("marks[{i}].weight"), "weight must be positive and finite");
            c.check(a.h1 >= 0.0 && a.h1.is_finite(), &format!("marks[{i}].h1"), "h1 must be nonnegative and finite");
            if !(0.0..=1.0).contains(&a.h2) {
                c.push(
                    format!("marks[{i}].h2"),
                    format!("h2 = {} violates 0 <= h2 <= 1 (the Lipschitz ratio may not exceed 1)", a.h2),
                );
            }
        }
        let intensity: f64 = self.marks.iter().map(|a| a.weight.max(0.0)).sum();
        let smallest_eps = self
            .sde
            .epsilon
            .into_iter()
            .chain(self.tail.epsilons.iter().copied())
            .chain(self.ldp1.epsilons.iter().copied())
            .filter(|&e| e > 0.0)
            .fold(1.0f64, f64::min);
        let expected = intensity * s.horizon.max(0.0) / smallest_eps * self.control_sup().max(1.0);
        if expected > MAX_EXPECTED_EVENTS {
            c.push(
                "sde.epsilon",
                format!("expected {expected:.3e} jump events per path exceeds the cap of {MAX_EXPECTED_EVENTS:.0e}"),
            );
        }

        let ctl = &self.control;
        c.check(ctl.cells >= 1, "control.cells", "at least one time cell required");
        c.check(
            ctl.constant >= 0.0 && ctl.constant.is_finite(),
            "control.constant",
            "control values must be nonnegative and finite",
        );
        if let Some(rows) = &ctl.rows {
            if rows.is_empty() {
                c.push("control.rows", "at least one row required");
            }
            for (k, r) in rows.iter().enumerate() {
                if r.len() != self.marks.len() {
                    c.push(
                        format!("control.rows[{k}]"),
                        format!("expected {} values (one per atom), got {}", self.marks.len(), r.len()),
                    );
                }
                if r.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
                    c.push(format!("control.rows[{k}]"), "control values must be nonnegative and finite");
                }
            }
        }
        c.check(ctl.class_bound >= 1.0, "control.class_bound", "class bound N must be at least 1");
        let cells = ctl.rows.as_ref().map_or(ctl.cells, |r| r.len().max(1));
        if positive(s.horizon) && s.max_step > s.horizon / cells.max(1) as f64 {
            c.push("sde.max_step", "max step exceeds the control cell width");
        }

        match &self.target {
            TargetSection::WholeSpace => {}
            TargetSection::TerminalBall { radius, center } => {
                c.check(*radius >= 0.0 && radius.is_finite(), "target.radius", "radius must be nonnegative and finite");
                if let Some(center) = center {
                    c.check(
                        center.len() == s.level,
                        "target.center",
                        "center needs one coefficient per Galerkin mode",
                    );
                    c.check(center.iter().all(|v| v.is_finite()), "target.center", "center must be finite");
                }
            }
            TargetSection::TerminalMeanExceedance { level, shift } => match (level, shift) {
                (Some(l), None) => c.check(l.is_finite(), "target.level", "level must be finite"),
                (None, Some(d)) => c.check(d.is_finite(), "target.shift", "shift must be finite"),
                _ => c.push("target", "give exactly one of `level` and `shift`"),
            },
        }

        let m = &self.moments;
        c.check(m.p >= 2.0 && m.p.is_finite(), "moments.p", "moment order p must be at least 2");
        c.check(m.paths >= 1, "moments.paths", "ensemble size must be positive");

        let r = &self.rate;
        c.check(r.cells >= 1, "rate.cells", "at least one time cell required");
        c.check(r.g_max >= 1.0 && r.g_max.is_finite(), "rate.g_max", "g_max must be at least 1");
        c.check(r.tolerance >= 0.0 && r.tolerance.is_finite(), "rate.tolerance", "tolerance must be nonnegative");
        if positive(s.horizon) && r.cells >= 1 && s.max_step > s.horizon / r.cells as f64 {
            c.push("rate.cells", "control cell width is smaller than the max step");
        }

        let t = &self.tail;
        c.check(!t.epsilons.is_empty(), "tail.epsilons", "at least one epsilon required");
        c.check(t.epsilons.iter().all(|&e| positive(e)), "tail.epsilons", "epsilons must be positive");
        c.check(t.paths >= 100, "tail.paths", "tail estimates need at least 100 paths");

        let l = &self.ldp1;
        c.check(!l.epsilons.is_empty(), "ldp1.epsilons", "at least one epsilon required");
        c.check(l.epsilons.iter().all(|&e| positive(e)), "ldp1.epsilons", "epsilons must be positive");
        c.check(l.paths >= 1, "ldp1.paths", "ensemble size must be positive");
        c.check(l.delta >= 0.0 && l.delta.is_finite(), "ldp1.delta", "delta must be nonnegative");

        let v = &self.verify;
        c.check(
            [v.log_sobolev, v.log_diff_pairing, v.log_plus_weighted, v.nonlinear_gronwall, v.log_gronwall]
                .iter()
                .all(|&k| k >= 1),
            "verify",
            "every suite needs at least one instance",
        );
        c.0
    }

    fn control_sup(&self) -> f64 {
        match &self.control.rows {
            Some(rows) => rows.iter().flatten().copied().fold(0.0, f64::max),
            None => self.control.constant,
        }
    }

    pub fn domain(&self) -> Domain<f64> {
        Domain {
            dimension: self.domain.dimension,
            length: self.domain.length,
            nodes: self.domain.nodes,
        }
    }

    pub fn marks(&self) -> logheat_core::Result<MarkSpace<f64>> {
        MarkSpace::new(self.marks.iter().map(|a| Atom::new(a.weight, a.h1, a.h2)).collect())
    }

    pub fn noise(&self) -> logheat_core::Result<NoiseCoefficient<f64>> {
        NoiseCoefficient::new(self.noise.family, self.noise.m1, self.noise.m2, self.noise.theta)
    }

    pub fn initial(&self) -> logheat_core::Result<SpectralField<f64>> {
        let level = self.sde.level;
        match &self.sde.initial {
            InitialSection::Bump { amplitude } => {
                let basis = Basis::new(self.domain(), level)?;
                let l = self.domain.length;
                SpectralField::from_fn(&basis, |x| amplitude * 4.0 * (x / l) * (1.0 - x / l))
            }
            InitialSection::Mode { k, amplitude } => {
                let mut c = vec![0.0; level.max(*k)];
                c[k - 1] = *amplitude;
                Ok(SpectralField::new(c)?.resize(level))
            }
            InitialSection::Coefficients { values } => Ok(SpectralField::new(values.clone())?.resize(level)),
        }
    }

    pub fn sde_config(&self) -> logheat_core::Result<SdeConfig<f64>> {
        Ok(SdeConfig {
            domain: self.domain(),
            level: self.sde.level,
            horizon: self.sde.horizon,
            max_step: self.sde.max_step,
            u0: self.initial()?,
            epsilon: self.sde.epsilon,
            noise: self.noise()?,
            marks: self.marks()?,
            laplacian: self.sde.laplacian,
            log_term: self.sde.log_term,
        })
    }

    pub fn control(&self) -> logheat_core::Result<Control<f64>> {
        match &self.control.rows {
            Some(rows) => Control::from_rows(self.sde.horizon, rows.clone()),
            None => Control::constant(self.sde.horizon, self.control.cells, self.marks.len(), self.control.constant),
        }
    }
}
