//! Flag parsing helpers and the flags > config file > defaults merge.

use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;
use su11kit::{StateVector, ToleranceProfile};

/// Values an optional JSON config file may provide; explicit flags win.
#[derive(Deserialize, Default, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub lambda: Option<f64>,
    pub k: Option<f64>,
    pub dim: Option<usize>,
    pub boson_dim: Option<usize>,
    pub grid: Option<String>,
    pub grid_size: Option<usize>,
    pub r_max: Option<f64>,
    pub nodes: Option<String>,
    pub state: Option<String>,
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub tol: Option<Vec<String>>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, String> {
        match path {
            None => Ok(FileConfig::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| format!("cannot read config {}: {e}", p.display()))?;
                serde_json::from_str(&text)
                    .map_err(|e| format!("cannot parse config {}: {e}", p.display()))
            }
        }
    }
}

pub fn merge<T: Clone>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

/// `NAME=VALUE` tolerance overrides on top of the defaults.
pub fn parse_tolerances(entries: &[String]) -> Result<ToleranceProfile, String> {
    let mut tol = ToleranceProfile::default();
    for entry in entries {
        let (name, value) = entry
            .split_once('=')
            .ok_or_else(|| format!("tolerance override '{entry}' must be NAME=VALUE"))?;
        let value: f64 = value
            .parse()
            .map_err(|_| format!("tolerance value '{value}' is not a number"))?;
        match name {
            "algebraic" => tol.algebraic = value,
            "quadrature" => tol.quadrature = value,
            "grid" => tol.grid = value,
            other => return Err(format!("unknown tolerance '{other}'")),
        }
    }
    tol.validate().map_err(|e| e.to_string())?;
    Ok(tol)
}

/// `RxA` node counts, e.g. `400x64`.
pub fn parse_nodes(spec: &str) -> Result<(usize, usize), String> {
    let (a, b) = spec
        .split_once('x')
        .ok_or_else(|| format!("node spec '{spec}' must be RxA, e.g. 400x64"))?;
    let a = a.parse().map_err(|_| format!("bad node count '{a}'"))?;
    let b = b.parse().map_err(|_| format!("bad node count '{b}'"))?;
    if a == 0 || b == 0 {
        return Err("node counts must be positive".into());
    }
    Ok((a, b))
}

/// `RE,IM` complex flag values.
pub fn parse_complex(spec: &str) -> Result<Complex64, String> {
    let (re, im) = spec
        .split_once(',')
        .ok_or_else(|| format!("complex value '{spec}' must be RE,IM"))?;
    let re: f64 = re.trim().parse().map_err(|_| format!("bad real part '{re}'"))?;
    let im: f64 = im.trim().parse().map_err(|_| format!("bad imaginary part '{im}'"))?;
    Ok(Complex64::new(re, im))
}

/// State specifications:
///
/// - `"3"` — the basis state with that index;
/// - `"0:0.6;2:0,0.8"` — components `index:re[,im]` separated by `;`,
///   normalized after assembly;
/// - `"squeezed"` — the coherent state at `zeta = nu/mu` from `--mu/--nu`.
pub fn parse_state(
    spec: &str,
    dim: usize,
    basis: su11kit::BasisTag,
    squeeze_label: Option<Complex64>,
    lambda: f64,
) -> Result<StateVector, String> {
    if spec == "squeezed" {
        let zeta = squeeze_label.ok_or("state 'squeezed' needs --mu and --nu")?;
        if zeta.norm() >= 1.0 {
            return Err(format!("|nu/mu| = {} must be below one", zeta.norm()));
        }
        let point = su11kit::coherent::DiskPoint::new(zeta).map_err(|e| e.to_string())?;
        let weight = su11kit::LowestWeight::new(lambda).map_err(|e| e.to_string())?;
        return su11kit::coherent::coherent_state(
            weight,
            point,
            dim,
            &ToleranceProfile::default(),
        )
        .map_err(|e| e.to_string());
    }
    if let Ok(index) = spec.parse::<usize>() {
        return StateVector::basis_state(dim, index, basis).map_err(|e| e.to_string());
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); dim];
    for part in spec.split(';') {
        let (idx, value) = part
            .split_once(':')
            .ok_or_else(|| format!("state component '{part}' must be INDEX:RE[,IM]"))?;
        let idx: usize = idx.trim().parse().map_err(|_| format!("bad index '{idx}'"))?;
        if idx >= dim {
            return Err(format!("state index {idx} outside dimension {dim}"));
        }
        let z = if value.contains(',') {
            parse_complex(value)?
        } else {
            Complex64::new(
                value
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad coefficient '{value}'"))?,
                0.0,
            )
        };
        coeffs[idx] = z;
    }
    let state = StateVector::from_slice(&coeffs, basis).map_err(|e| e.to_string())?;
    state.normalized().map_err(|e| e.to_string())
}
