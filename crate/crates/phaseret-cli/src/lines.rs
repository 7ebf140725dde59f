//! Mini-language for line sets.
//!
//! `R` | `iR` | `R+<v>i` | `rot(<theta>)` | `family(R, tau=<t>, n=<a>..<b>)`
//!
//! A spec names one line except `family`, which expands to the horizontal
//! lines `R + i*t*n` for `n = a..=b`. Angles are radians.

use anyhow::{anyhow, bail, Result};
use num_complex::Complex64;
use phaseret::hadamard::{GridSpec, LineSpec};

/// A parsed line with the label used in reports and CSV.
#[derive(Debug, Clone)]
pub struct NamedLine {
    pub label: String,
    pub line: LineSpec,
}

/// Split a comma-separated list of line specs, keeping commas inside
/// parentheses (the `family(...)` arguments) intact.
pub fn split_line_list(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                cur.push(ch);
            }
            ',' if depth == 0 => {
                out.push(cur.trim().to_string());
                cur = String::new();
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

pub fn parse_lines(spec: &str, grid: GridSpec) -> Result<Vec<NamedLine>> {
    let mut out = Vec::new();
    for item in split_line_list(spec) {
        out.extend(parse_one(&item, grid)?);
    }
    if out.is_empty() {
        bail!("no lines in {spec:?}");
    }
    Ok(out)
}

fn parse_one(s: &str, grid: GridSpec) -> Result<Vec<NamedLine>> {
    if s == "R" {
        return Ok(vec![NamedLine {
            label: s.to_string(),
            line: LineSpec::real_axis(grid),
        }]);
    }
    if s == "iR" {
        return Ok(vec![NamedLine {
            label: s.to_string(),
            line: LineSpec::through_origin(std::f64::consts::FRAC_PI_2, grid),
        }]);
    }
    if let Some(rest) = s.strip_prefix("rot(").and_then(|r| r.strip_suffix(')')) {
        let theta: f64 = rest
            .trim()
            .parse()
            .map_err(|_| anyhow!("bad angle in {s:?}"))?;
        return Ok(vec![NamedLine {
            label: s.to_string(),
            line: LineSpec::through_origin(theta, grid),
        }]);
    }
    if let Some(rest) = s.strip_prefix("family(").and_then(|r| r.strip_suffix(')')) {
        return parse_family(rest, grid);
    }
    if let Some(body) = s.strip_prefix("R+").and_then(|r| r.strip_suffix('i')) {
        let v: f64 = body.parse().map_err(|_| anyhow!("bad offset in {s:?}"))?;
        return Ok(vec![NamedLine {
            label: s.to_string(),
            line: LineSpec::horizontal(v, grid),
        }]);
    }
    bail!("unrecognised line spec {s:?} (expected R, iR, R+<v>i, rot(<theta>), or family(R, tau=<t>, n=<a>..<b>))")
}

fn parse_family(args: &str, grid: GridSpec) -> Result<Vec<NamedLine>> {
    let mut tau: Option<f64> = None;
    let mut range: Option<(i64, i64)> = None;
    for part in args.split(',') {
        let part = part.trim();
        if part == "R" {
            continue;
        }
        if let Some(v) = part.strip_prefix("tau=") {
            tau = Some(v.parse().map_err(|_| anyhow!("bad tau in family: {part:?}"))?);
        } else if let Some(v) = part.strip_prefix("n=") {
            let (a, b) = v
                .split_once("..")
                .ok_or_else(|| anyhow!("bad n range in family: {part:?}"))?;
            range = Some((a.parse()?, b.parse()?));
        } else {
            bail!("unrecognised family argument {part:?}");
        }
    }
    let tau = tau.ok_or_else(|| anyhow!("family needs tau=<t>"))?;
    let (a, b) = range.ok_or_else(|| anyhow!("family needs n=<a>..<b>"))?;
    if a > b {
        bail!("empty family range {a}..{b}");
    }
    Ok((a..=b)
        .map(|n| NamedLine {
            label: format!("R+{}i", tau * n as f64),
            line: LineSpec::horizontal(tau * n as f64, grid),
        })
        .collect())
}

/// `min:max:count` grids.
pub fn parse_grid(s: &str) -> Result<GridSpec> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        bail!("grid must be min:max:count, got {s:?}");
    }
    let grid = GridSpec::new(parts[0].parse()?, parts[1].parse()?, parts[2].parse()?);
    if grid.count > 1_000_000 {
        bail!("grid count {} exceeds 10^6", grid.count);
    }
    if grid.count < 2 {
        bail!("grid needs at least 2 samples");
    }
    if grid.min >= grid.max {
        bail!("grid needs min < max");
    }
    Ok(grid)
}

/// `re,im` complex numbers.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| anyhow!("complex number must be re,im, got {s:?}"))?;
    Ok(Complex64::new(re.trim().parse()?, im.trim().parse()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec {
        GridSpec::new(-1.0, 1.0, 11)
    }

    #[test]
    fn basic_lines() {
        let lines = parse_lines("R,iR,R+0.5i,rot(0.7853981633974483)", grid()).unwrap();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0].line.direction, Complex64::new(1.0, 0.0));
        assert!((lines[1].line.direction - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        assert_eq!(lines[2].line.anchor, Complex64::new(0.0, 0.5));
        assert!((lines[3].line.direction.arg() - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
    }

    #[test]
    fn negative_offset() {
        let lines = parse_lines("R+-1.5i", grid()).unwrap();
        assert_eq!(lines[0].line.anchor, Complex64::new(0.0, -1.5));
    }

    #[test]
    fn family_expansion() {
        let lines = parse_lines("family(R, tau=0.5, n=-2..2)", grid()).unwrap();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0].line.anchor, Complex64::new(0.0, -1.0));
        assert_eq!(lines[4].line.anchor, Complex64::new(0.0, 1.0));
        assert_eq!(lines[2].label, "R+0i");
    }

    #[test]
    fn grid_bounds() {
        assert!(parse_grid("-5:5:1001").is_ok());
        assert!(parse_grid("5:-5:100").is_err());
        assert!(parse_grid("0:1:2000000").is_err());
        assert!(parse_grid("0:1").is_err());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_lines("diag", grid()).is_err());
        assert!(parse_lines("family(R, n=0..2)", grid()).is_err());
    }
}
