use std::f64::consts::PI;

use super::profiles::Cut;
use super::{HarnessError, InitialCondition};
use crate::dg::DtRule;
use crate::filtering::{default_line_mu, FilterConfig};
use crate::splines::Point2;

/// Parses products and quotients of numbers and the constants `pi`,
/// `sqrt2` / `sqrt(2)`, e.g. `3pi/4`, `1/sqrt2`, `-0.5*pi`.
pub fn parse_real_expr(s: &str) -> Result<f64, HarnessError> {
    let bad = || HarnessError::Invalid(format!("cannot parse number `{s}`"));
    let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let (sign, body) = match text.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, text.as_str()),
    };
    if body.is_empty() {
        return Err(bad());
    }
    let mut value = sign;
    let mut op = '*';
    let mut rest = body;
    loop {
        let end = rest.find(['*', '/']).unwrap_or(rest.len());
        let f = parse_factor(&rest[..end]).ok_or_else(bad)?;
        value = if op == '*' { value * f } else { value / f };
        if end == rest.len() {
            break;
        }
        op = rest.as_bytes()[end] as char;
        rest = &rest[end + 1..];
    }
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

fn parse_factor(s: &str) -> Option<f64> {
    let split = s.find(|c: char| c.is_ascii_alphabetic() && c != 'e' && c != 'E').unwrap_or(s.len());
    // `2e-3` stays numeric, `3pi` splits into 3 · π
    let (num, name) = s.split_at(split);
    let coeff = if num.is_empty() { 1.0 } else { num.parse::<f64>().ok()? };
    let constant = match name {
        "" => 1.0,
        "pi" => PI,
        "sqrt2" | "sqrt(2)" => 2f64.sqrt(),
        _ => return None,
    };
    if num.is_empty() && name.is_empty() {
        return None;
    }
    Some(coeff * constant)
}

/// `tensor[:MU]` or `line:THETA[:MU]`, separated by `;`. The line default is
/// `μ = |cos θ| + |sin θ|`, the tensor default `μ = 1`.
pub fn parse_filters(s: &str) -> Result<Vec<FilterConfig>, HarnessError> {
    let mut out = Vec::new();
    for item in s.split(';').map(str::trim).filter(|t| !t.is_empty()) {
        let parts: Vec<&str> = item.split(':').map(str::trim).collect();
        let config = match (parts[0], parts.len()) {
            ("tensor", 1) => FilterConfig::tensor(1.0),
            ("tensor", 2) => FilterConfig::tensor(parse_real_expr(parts[1])?),
            ("line", 2) => {
                let theta = parse_real_expr(parts[1])?;
                FilterConfig::line(theta, default_line_mu(theta))
            }
            ("line", 3) => FilterConfig::line(parse_real_expr(parts[1])?, parse_real_expr(parts[2])?),
            _ => {
                return Err(HarnessError::Invalid(format!(
                    "bad filter `{item}` (expected tensor[:MU] or line:THETA[:MU])"
                )))
            }
        };
        config.validate()?;
        out.push(config);
    }
    if out.is_empty() {
        return Err(HarnessError::Invalid("no filters given".into()));
    }
    Ok(out)
}

/// `h:Y` (horizontal), `v:X` (vertical) or `d` (main diagonal), separated by `;`.
pub fn parse_cuts(s: &str) -> Result<Vec<Cut>, HarnessError> {
    let mut out = Vec::new();
    for item in s.split(';').map(str::trim).filter(|t| !t.is_empty()) {
        let cut = match item.split_once(':') {
            Some(("h" | "horizontal", v)) => Cut::Horizontal(parse_real_expr(v)?),
            Some(("v" | "vertical", v)) => Cut::Vertical(parse_real_expr(v)?),
            None if item == "d" || item == "diagonal" => Cut::Diagonal,
            _ => return Err(HarnessError::Invalid(format!("bad cut `{item}` (expected h:Y, v:X or d)"))),
        };
        out.push(cut);
    }
    if out.is_empty() {
        return Err(HarnessError::Invalid("no cuts given".into()));
    }
    Ok(out)
}

/// `NX,NY`
pub fn parse_grid(s: &str) -> Result<(usize, usize), HarnessError> {
    let bad = || HarnessError::Invalid(format!("bad grid `{s}` (expected NX,NY)"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let nx: usize = a.trim().parse().map_err(|_| bad())?;
    let ny: usize = b.trim().parse().map_err(|_| bad())?;
    if nx == 0 || ny == 0 {
        return Err(bad());
    }
    Ok((nx, ny))
}

/// `X,Y`
pub fn parse_point(s: &str) -> Result<Point2, HarnessError> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| HarnessError::Invalid(format!("bad point `{s}` (expected X,Y)")))?;
    Ok(Point2::new(parse_real_expr(a)?, parse_real_expr(b)?))
}

/// A convergence study read from flat `key = value` text:
///
/// ```text
/// ic = sinxy
/// k = 1,2,3
/// n = 20,40
/// filters = tensor:1; line:3pi/4:sqrt2
/// tfinal = 2
/// cfl = 0.05
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct StudySpec {
    pub ic: InitialCondition,
    pub degrees: Vec<usize>,
    pub sizes: Vec<usize>,
    pub filters: Vec<FilterConfig>,
    pub tfinal: f64,
    pub dt_rule: DtRule,
}

impl StudySpec {
    pub fn new(ic: InitialCondition, degrees: Vec<usize>, sizes: Vec<usize>, filters: Vec<FilterConfig>) -> Self {
        Self {
            ic,
            degrees,
            sizes,
            filters,
            tfinal: 2.0,
            dt_rule: DtRule::default(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let mut ic = None;
        let mut degrees = None;
        let mut sizes = None;
        let mut filters = Vec::new();
        let mut tfinal = 2.0;
        let mut cfl = DtRule::default().cfl;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let at = |e: HarnessError| HarnessError::Config {
                line,
                message: match e {
                    HarnessError::Invalid(m) => m,
                    other => other.to_string(),
                },
            };
            let (key, value) = content.split_once('=').ok_or(HarnessError::Config {
                line,
                message: format!("expected key = value, found `{content}`"),
            })?;
            let value = value.trim();
            match key.trim() {
                "ic" => ic = Some(value.parse().map_err(at)?),
                "k" => degrees = Some(parse_list(value).map_err(at)?),
                "n" | "N" => sizes = Some(parse_list(value).map_err(at)?),
                "filters" => filters = parse_filters(value).map_err(at)?,
                "tfinal" => tfinal = parse_real_expr(value).map_err(at)?,
                "cfl" => cfl = parse_real_expr(value).map_err(at)?,
                other => {
                    return Err(HarnessError::Config {
                        line,
                        message: format!("unknown key `{other}`"),
                    })
                }
            }
        }
        let missing = |what: &str| HarnessError::Config {
            line: 0,
            message: format!("missing required key `{what}`"),
        };
        let spec = Self {
            ic: ic.ok_or_else(|| missing("ic"))?,
            degrees: degrees.ok_or_else(|| missing("k"))?,
            sizes: sizes.ok_or_else(|| missing("n"))?,
            filters,
            tfinal,
            dt_rule: DtRule::new(cfl),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.degrees.is_empty() || self.sizes.is_empty() {
            return Err(HarnessError::Invalid("k and n lists must be non-empty".into()));
        }
        if self.sizes.contains(&0) {
            return Err(HarnessError::Invalid("mesh sizes must be positive".into()));
        }
        if !(self.tfinal.is_finite() && self.tfinal >= 0.0) {
            return Err(HarnessError::Invalid(format!("invalid tfinal {}", self.tfinal)));
        }
        if !(self.dt_rule.cfl.is_finite() && self.dt_rule.cfl > 0.0) {
            return Err(HarnessError::Invalid(format!("invalid cfl {}", self.dt_rule.cfl)));
        }
        Ok(())
    }
}

fn parse_list(s: &str) -> Result<Vec<usize>, HarnessError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| HarnessError::Invalid(format!("bad integer `{}`", t.trim())))
        })
        .collect()
}
