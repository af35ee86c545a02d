//! Effective configuration: flags over config file over defaults.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::path::{Path, PathBuf};

use qwalk_core::classify::ClassifierConfig;
use qwalk_core::coin::{CoinSpec, SubCoinSpec};
use qwalk_core::init::{InitialFamily, InitialStateSpec};
use qwalk_core::walk::MAX_STEPS;
use serde::{Deserialize, Serialize};

use crate::args::{Format, Suite, WalkArgs};
use crate::error::{CliError, CliResult};

/// Largest number of (grid point, step) pairs a single invocation may request.
pub const MAX_GRID: usize = 1_000_000;

pub const DEFAULT_STEPS: usize = 50;
pub const DEFAULT_X_MAX: usize = 20;
pub const DEFAULT_AVG_WINDOW: usize = 10;
/// Momentum grid for the stationary density when `--num-k` is not given.
pub const DEFAULT_STATIONARY_K: usize = 4096;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum AxisValue {
    One(f64),
    Many(Vec<f64>),
    Text(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum StepsValue {
    One(i64),
    Many(Vec<i64>),
    Text(String),
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    init: Option<String>,
    eta: Option<AxisValue>,
    alpha: Option<AxisValue>,
    beta: Option<AxisValue>,
    phi: Option<AxisValue>,
    theta: Option<AxisValue>,
    gamma: Option<AxisValue>,
    xi1: Option<AxisValue>,
    zeta1: Option<AxisValue>,
    xi2: Option<AxisValue>,
    zeta2: Option<AxisValue>,
    steps: Option<StepsValue>,
    num_k: Option<usize>,
    output: Option<PathBuf>,
    format: Option<Format>,
    pi_units: Option<bool>,
    workers: Option<usize>,
    allow_any_angle: Option<bool>,
    record_states: Option<bool>,
    x_max: Option<usize>,
    avg_window: Option<usize>,
    suite: Option<Suite>,
    classifier: Option<ClassifierFile>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassifierFile {
    loc_mass: Option<f64>,
    r_trap: Option<usize>,
    pt_mass: Option<f64>,
    gauss_tol: Option<f64>,
    min_frac: Option<f64>,
    window: Option<usize>,
    central_radius: Option<usize>,
    central_mass: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassifierSettings {
    pub loc_mass: f64,
    pub r_trap: usize,
    pub pt_mass: f64,
    pub gauss_tol: f64,
    pub min_frac: f64,
    pub window: usize,
    pub central_radius: usize,
    pub central_mass: f64,
}

impl From<ClassifierConfig> for ClassifierSettings {
    fn from(c: ClassifierConfig) -> Self {
        Self {
            loc_mass: c.loc_mass,
            r_trap: c.r_trap,
            pt_mass: c.pt_mass,
            gauss_tol: c.gauss_tol,
            min_frac: c.min_frac,
            window: c.window,
            central_radius: c.central_radius,
            central_mass: c.central_mass,
        }
    }
}

impl ClassifierSettings {
    pub fn config(&self) -> ClassifierConfig {
        ClassifierConfig {
            loc_mass: self.loc_mass,
            r_trap: self.r_trap,
            pt_mass: self.pt_mass,
            gauss_tol: self.gauss_tol,
            min_frac: self.min_frac,
            window: self.window,
            central_radius: self.central_radius,
            central_mass: self.central_mass,
        }
    }
}

/// Resolved settings. Angles are in radians. The serialized form is the
/// sidecar written next to every output and can be fed back via `--config`.
#[derive(Debug, Clone, Serialize)]
pub struct Settings {
    pub init: String,
    pub eta: Vec<f64>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub phi: Vec<f64>,
    pub theta: Vec<f64>,
    /// `None` ties the second sub-coin to `theta`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<f64>>,
    pub xi1: Vec<f64>,
    pub zeta1: Vec<f64>,
    pub xi2: Vec<f64>,
    pub zeta2: Vec<f64>,
    pub steps: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub num_k: Option<usize>,
    pub format: Format,
    pub allow_any_angle: bool,
    pub record_states: bool,
    pub x_max: usize,
    pub avg_window: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<Suite>,
    pub classifier: ClassifierSettings,
    #[serde(skip)]
    pub family: InitialFamily,
    #[serde(skip)]
    pub output: Option<PathBuf>,
    #[serde(skip)]
    pub workers: usize,
}

/// One point of the parameter grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub eta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub phi: f64,
    pub theta: f64,
    pub gamma: f64,
    pub xi1: f64,
    pub zeta1: f64,
    pub xi2: f64,
    pub zeta2: f64,
}

impl Point {
    pub fn coin(&self) -> CoinSpec {
        CoinSpec::new(
            SubCoinSpec::su2(self.theta, self.xi1, self.zeta1),
            SubCoinSpec::su2(self.gamma, self.xi2, self.zeta2),
        )
    }

    pub fn init(&self, family: InitialFamily) -> InitialStateSpec {
        InitialStateSpec {
            family,
            eta: self.eta,
            alpha: self.alpha,
            beta: self.beta,
            phi: self.phi,
        }
    }

    pub fn values(&self) -> [f64; 10] {
        [
            self.eta, self.alpha, self.beta, self.phi, self.theta, self.gamma, self.xi1,
            self.zeta1, self.xi2, self.zeta2,
        ]
    }
}

/// Column names matching [`Point::values`].
pub const POINT_COLUMNS: [&str; 10] = [
    "eta", "alpha", "beta", "phi", "theta", "gamma", "xi1", "zeta1", "xi2", "zeta2",
];

/// Parse `a`, `a,b,c` or `start:stop:count` (inclusive, evenly spaced).
pub fn parse_axis(name: &str, text: &str) -> CliResult<Vec<f64>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| CliError::usage(format!("--{name}: cannot parse {s:?} as a number")))
    };
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::usage(format!(
                "--{name}: range must look like start:stop:count"
            )));
        }
        let (a, b) = (num(parts[0])?, num(parts[1])?);
        let n: usize = parts[2].trim().parse().map_err(|_| {
            CliError::usage(format!(
                "--{name}: range count must be a non-negative integer"
            ))
        })?;
        return Ok(match n {
            0 => Vec::new(),
            1 => vec![a],
            _ => (0..n)
                .map(|i| {
                    if i == n - 1 {
                        b
                    } else {
                        a + (b - a) * i as f64 / (n - 1) as f64
                    }
                })
                .collect(),
        });
    }
    text.split(',').map(num).collect()
}

/// Parse `t`, `t1,t2,...` or an inclusive integer range `a:b`.
pub fn parse_steps(text: &str) -> CliResult<Vec<usize>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let int = |s: &str| -> CliResult<i64> {
        s.trim()
            .parse::<i64>()
            .map_err(|_| CliError::usage(format!("--steps: cannot parse {s:?} as an integer")))
    };
    let raw: Vec<i64> = if let Some((a, b)) = text.split_once(':') {
        let (a, b) = (int(a)?, int(b)?);
        if a < 0 || b < 0 {
            return Err(CliError::usage("--steps must be non-negative"));
        }
        (a..=b).collect()
    } else {
        text.split(',').map(int).collect::<CliResult<_>>()?
    };
    steps_from(raw)
}

fn steps_from(raw: Vec<i64>) -> CliResult<Vec<usize>> {
    raw.into_iter()
        .map(|t| {
            if t < 0 {
                return Err(CliError::usage(format!(
                    "--steps must be non-negative, got {t}"
                )));
            }
            let t = t as usize;
            if t > MAX_STEPS {
                return Err(CliError::Resource(format!(
                    "steps {t} exceeds the cap of {MAX_STEPS}"
                )));
            }
            Ok(t)
        })
        .collect()
}

impl AxisValue {
    fn values(&self, name: &str) -> CliResult<Vec<f64>> {
        match self {
            Self::One(v) => Ok(vec![*v]),
            Self::Many(v) => Ok(v.clone()),
            Self::Text(t) => parse_axis(name, t),
        }
    }
}

impl StepsValue {
    fn values(&self) -> CliResult<Vec<usize>> {
        match self {
            Self::One(t) => steps_from(vec![*t]),
            Self::Many(v) => steps_from(v.clone()),
            Self::Text(t) => parse_steps(t),
        }
    }
}

fn load_file(path: &Path) -> CliResult<FileConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::usage(format!("config {}: {e}", path.display())))
}

struct Sources<'a> {
    args: &'a WalkArgs,
    file: &'a FileConfig,
    flag_scale: f64,
    file_scale: f64,
    allow_any: bool,
}

impl Sources<'_> {
    fn axis(
        &self,
        name: &str,
        flag: &Option<String>,
        file: &Option<AxisValue>,
        default: Option<f64>,
    ) -> CliResult<Option<Vec<f64>>> {
        let values = if let Some(t) = flag {
            parse_axis(name, t)?
                .into_iter()
                .map(|v| v * self.flag_scale)
                .collect()
        } else if let Some(v) = file {
            v.values(name)?
                .into_iter()
                .map(|v| v * self.file_scale)
                .collect()
        } else {
            match default {
                Some(d) => vec![d],
                None => return Ok(None),
            }
        };
        if values.is_empty() {
            return Err(CliError::usage(format!("empty grid for --{name}")));
        }
        for &v in &values {
            if !v.is_finite() {
                return Err(CliError::usage(format!("--{name}: {v} is not finite")));
            }
            if !self.allow_any && !(0.0..=FRAC_PI_2).contains(&v) {
                return Err(CliError::usage(format!(
                    "--{name} = {v} lies outside [0, pi/2]; pass --allow-any-angle to accept it"
                )));
            }
        }
        Ok(Some(values))
    }

    fn required(
        &self,
        name: &str,
        flag: &Option<String>,
        file: &Option<AxisValue>,
        default: f64,
    ) -> CliResult<Vec<f64>> {
        Ok(self
            .axis(name, flag, file, Some(default))?
            .unwrap_or_default())
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

impl Settings {
    pub fn resolve(args: &WalkArgs) -> CliResult<Self> {
        let file = match &args.config {
            Some(p) => load_file(p)?,
            None => FileConfig::default(),
        };
        let src = Sources {
            args,
            file: &file,
            flag_scale: if args.pi_units { PI } else { 1.0 },
            file_scale: if file.pi_units.unwrap_or(false) {
                PI
            } else {
                1.0
            },
            allow_any: args.allow_any_angle || file.allow_any_angle.unwrap_or(false),
        };
        let a = src.args;
        let f = src.file;

        let init = a
            .init
            .clone()
            .or_else(|| f.init.clone())
            .unwrap_or_else(|| "psi1".to_string());
        let family: InitialFamily = init
            .parse()
            .map_err(|e: qwalk_core::Error| CliError::usage(e.to_string()))?;

        let steps = match (&a.steps, &f.steps) {
            (Some(t), _) => parse_steps(t)?,
            (None, Some(v)) => v.values()?,
            (None, None) => vec![DEFAULT_STEPS],
        };
        if steps.is_empty() {
            return Err(CliError::usage("empty grid for --steps"));
        }

        let workers = a.workers.or(f.workers).unwrap_or_else(default_workers);
        if workers == 0 {
            return Err(CliError::usage("--workers must be at least 1"));
        }

        let mut classifier = ClassifierSettings::from(ClassifierConfig::default());
        if let Some(c) = &f.classifier {
            classifier.loc_mass = c.loc_mass.unwrap_or(classifier.loc_mass);
            classifier.r_trap = c.r_trap.unwrap_or(classifier.r_trap);
            classifier.pt_mass = c.pt_mass.unwrap_or(classifier.pt_mass);
            classifier.gauss_tol = c.gauss_tol.unwrap_or(classifier.gauss_tol);
            classifier.min_frac = c.min_frac.unwrap_or(classifier.min_frac);
            classifier.window = c.window.unwrap_or(classifier.window);
            classifier.central_radius = c.central_radius.unwrap_or(classifier.central_radius);
            classifier.central_mass = c.central_mass.unwrap_or(classifier.central_mass);
        }

        let settings = Self {
            init: family.name().to_string(),
            eta: src.required("eta", &a.eta, &f.eta, FRAC_PI_4)?,
            alpha: src.required("alpha", &a.alpha, &f.alpha, FRAC_PI_4)?,
            beta: src.required("beta", &a.beta, &f.beta, FRAC_PI_4)?,
            phi: src.required("phi", &a.phi, &f.phi, 0.0)?,
            theta: src.required("theta", &a.theta, &f.theta, FRAC_PI_4)?,
            gamma: src.axis("gamma", &a.gamma, &f.gamma, None)?,
            xi1: src.required("xi1", &a.xi1, &f.xi1, 0.0)?,
            zeta1: src.required("zeta1", &a.zeta1, &f.zeta1, 0.0)?,
            xi2: src.required("xi2", &a.xi2, &f.xi2, 0.0)?,
            zeta2: src.required("zeta2", &a.zeta2, &f.zeta2, 0.0)?,
            steps,
            num_k: a.num_k.or(f.num_k),
            format: a.format.or(f.format).unwrap_or(Format::Csv),
            allow_any_angle: src.allow_any,
            record_states: a.record_states || f.record_states.unwrap_or(false),
            x_max: a.x_max.or(f.x_max).unwrap_or(DEFAULT_X_MAX),
            avg_window: a.avg_window.or(f.avg_window).unwrap_or(DEFAULT_AVG_WINDOW),
            suite: a.suite.or(f.suite),
            classifier,
            family,
            output: a.output.clone().or_else(|| f.output.clone()),
            workers,
        };
        settings.check_grid_size()?;
        Ok(settings)
    }

    fn axes(&self) -> [&[f64]; 10] {
        [
            &self.eta,
            &self.alpha,
            &self.beta,
            &self.phi,
            &self.theta,
            self.gamma.as_deref().unwrap_or(&[f64::NAN]),
            &self.xi1,
            &self.zeta1,
            &self.xi2,
            &self.zeta2,
        ]
    }

    pub fn grid_size(&self) -> usize {
        self.axes()
            .iter()
            .fold(self.steps.len(), |acc, a| acc.saturating_mul(a.len()))
    }

    fn check_grid_size(&self) -> CliResult<()> {
        let n = self.grid_size();
        if n > MAX_GRID {
            return Err(CliError::Resource(format!(
                "grid of {n} evaluations exceeds {MAX_GRID}"
            )));
        }
        Ok(())
    }

    /// Grid points in lexicographic order of the axes in [`POINT_COLUMNS`].
    pub fn points(&self) -> Vec<Point> {
        let axes = self.axes();
        let total = axes.iter().map(|a| a.len()).product::<usize>();
        let mut out = Vec::with_capacity(total);
        let mut idx = [0usize; 10];
        for _ in 0..total {
            let v: [f64; 10] = core::array::from_fn(|i| axes[i][idx[i]]);
            out.push(Point {
                eta: v[0],
                alpha: v[1],
                beta: v[2],
                phi: v[3],
                theta: v[4],
                gamma: if self.gamma.is_some() { v[5] } else { v[4] },
                xi1: v[6],
                zeta1: v[7],
                xi2: v[8],
                zeta2: v[9],
            });
            for i in (0..10).rev() {
                idx[i] += 1;
                if idx[i] < axes[i].len() {
                    break;
                }
                idx[i] = 0;
            }
        }
        out
    }

    pub fn single_point(&self, command: &str) -> CliResult<Point> {
        let points = self.points();
        match points.as_slice() {
            [p] => Ok(*p),
            _ => Err(CliError::usage(format!(
                "{command} takes a single parameter point, got {}",
                points.len()
            ))),
        }
    }

    pub fn single_steps(&self, command: &str) -> CliResult<usize> {
        match self.steps.as_slice() {
            [t] => Ok(*t),
            _ => Err(CliError::usage(format!(
                "{command} takes a single --steps value"
            ))),
        }
    }

    pub fn max_steps(&self) -> usize {
        self.steps.iter().copied().max().unwrap_or(0)
    }

    pub fn pool(&self) -> CliResult<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| CliError::Resource(format!("cannot start worker pool: {e}")))
    }

    pub fn to_toml(&self, command: &str) -> String {
        let body = toml::to_string(self).expect("settings serialize to TOML");
        format!("# effective configuration of `qwalk {command}`; angles in radians\n{body}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args() -> WalkArgs {
        WalkArgs::default()
    }

    #[test]
    fn axis_forms() {
        assert_eq!(parse_axis("eta", "0.5").unwrap(), vec![0.5]);
        assert_eq!(
            parse_axis("eta", "0, 0.25,1").unwrap(),
            vec![0.0, 0.25, 1.0]
        );
        assert_eq!(
            parse_axis("eta", "0:1:5").unwrap(),
            vec![0.0, 0.25, 0.5, 0.75, 1.0]
        );
        assert!(parse_axis("eta", "0:1:0").unwrap().is_empty());
        assert!(parse_axis("eta", "").unwrap().is_empty());
        assert!(parse_axis("eta", "x").is_err());
        assert!(parse_axis("eta", "0:1").is_err());
    }

    #[test]
    fn range_hits_the_endpoint_exactly() {
        let v = parse_axis("theta", &format!("0:{}:33", FRAC_PI_2)).unwrap();
        assert_eq!(v.len(), 33);
        assert_eq!(*v.last().unwrap(), FRAC_PI_2);
    }

    #[test]
    fn steps_forms() {
        assert_eq!(parse_steps("8,10").unwrap(), vec![8, 10]);
        assert_eq!(parse_steps("2:4").unwrap(), vec![2, 3, 4]);
        assert!(matches!(parse_steps("-1"), Err(CliError::Usage(_))));
        assert!(matches!(parse_steps("20000"), Err(CliError::Resource(_))));
    }

    #[test]
    fn defaults() {
        let s = Settings::resolve(&args()).unwrap();
        assert_eq!(s.family, InitialFamily::Psi1);
        assert_eq!(s.steps, vec![DEFAULT_STEPS]);
        let p = s.single_point("run").unwrap();
        assert_eq!(p.theta, FRAC_PI_4);
        assert_eq!(p.gamma, p.theta);
        assert_eq!(s.classifier.config(), ClassifierConfig::default());
    }

    #[test]
    fn pi_units_scale_flags() {
        let mut a = args();
        a.theta = Some("0.5".into());
        a.pi_units = true;
        let s = Settings::resolve(&a).unwrap();
        assert_eq!(s.theta, vec![FRAC_PI_2]);
    }

    #[test]
    fn angle_window_and_escape_hatch() {
        let mut a = args();
        a.eta = Some("2".into());
        assert!(matches!(Settings::resolve(&a), Err(CliError::Usage(_))));
        a.allow_any_angle = true;
        assert_eq!(Settings::resolve(&a).unwrap().eta, vec![2.0]);
    }

    #[test]
    fn grid_order_is_lexicographic() {
        let mut a = args();
        a.eta = Some("0,0.5".into());
        a.theta = Some("0.1,0.2,0.3".into());
        let s = Settings::resolve(&a).unwrap();
        let pts = s.points();
        assert_eq!(pts.len(), 6);
        let pairs: Vec<(f64, f64)> = pts.iter().map(|p| (p.eta, p.theta)).collect();
        assert_eq!(
            pairs,
            vec![
                (0.0, 0.1),
                (0.0, 0.2),
                (0.0, 0.3),
                (0.5, 0.1),
                (0.5, 0.2),
                (0.5, 0.3)
            ]
        );
        assert!(pts.iter().all(|p| p.gamma == p.theta));
    }

    #[test]
    fn oversized_grid_is_a_resource_error() {
        let mut a = args();
        a.eta = Some("0:1:1000".into());
        a.theta = Some("0:1:1001".into());
        assert!(matches!(Settings::resolve(&a), Err(CliError::Resource(_))));
    }

    #[test]
    fn empty_grid_is_a_usage_error() {
        let mut a = args();
        a.eta = Some("0:1:0".into());
        assert!(matches!(Settings::resolve(&a), Err(CliError::Usage(_))));
    }

    #[test]
    fn flags_override_file_and_sidecar_round_trips() {
        let dir = std::env::temp_dir().join(format!("qwalk-settings-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cfg.toml");
        std::fs::write(
            &path,
            "init = \"psi2\"\nalpha = 0.25\npi_units = true\nsteps = [8, 10]\n[classifier]\nwindow = 5\n",
        )
        .unwrap();
        let mut a = args();
        a.config = Some(path.clone());
        let s = Settings::resolve(&a).unwrap();
        assert_eq!(s.family, InitialFamily::Psi2);
        assert_eq!(s.alpha, vec![FRAC_PI_4]);
        assert_eq!(s.steps, vec![8, 10]);
        assert_eq!(s.classifier.window, 5);

        a.alpha = Some("0.1".into());
        a.steps = Some("3".into());
        let s2 = Settings::resolve(&a).unwrap();
        assert_eq!(s2.alpha, vec![0.1]);
        assert_eq!(s2.steps, vec![3]);

        std::fs::write(&path, s.to_toml("sweep")).unwrap();
        let back = Settings::resolve(&WalkArgs {
            config: Some(path),
            ..args()
        })
        .unwrap();
        assert_eq!(back.to_toml("sweep"), s.to_toml("sweep"));
        std::fs::remove_dir_all(dir).unwrap();
    }
}
