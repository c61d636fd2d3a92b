//! Plain-text geometry files, one site per line:
//!
//! ```text
//! # x y z alpha [b e]     (lengths in a0, alpha in 1/a0)
//! 0 0 0 0.41
//! 1.5935 1.5935 1.5935 0.33 0.1 -0.1
//! ```
//!
//! `inf` is accepted for `alpha` (no scatterer) and for `e` (background
//! dressing centered on that site).

use std::path::Path;

use zrp_core::darboux::DressingStep;
use zrp_core::{Alpha, Error as CoreError, Geometry, Point, Site};

use crate::error::{CliError, Result};

fn parse_alpha(token: &str) -> std::result::Result<Alpha, String> {
    let v: f64 = token.parse().map_err(|_| format!("cannot parse '{token}' as a number"))?;
    if v.is_nan() {
        Err("NaN is not a valid parameter".into())
    } else if v == f64::INFINITY {
        Ok(Alpha::Infinite)
    } else if v.is_infinite() {
        Err("-inf is not a valid parameter".into())
    } else {
        Ok(Alpha::Finite(v))
    }
}

fn parse_coord(token: &str) -> std::result::Result<f64, String> {
    match token.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(_) => Err(format!("coordinate '{token}' is not finite")),
        Err(_) => Err(format!("cannot parse '{token}' as a number")),
    }
}

fn parse_line(tokens: &[&str]) -> std::result::Result<Site, String> {
    if tokens.len() != 4 && tokens.len() != 6 {
        return Err(format!("expected 'x y z alpha [b e]', found {} fields", tokens.len()));
    }
    let x = parse_coord(tokens[0])?;
    let y = parse_coord(tokens[1])?;
    let z = parse_coord(tokens[2])?;
    let alpha = parse_alpha(tokens[3])?;
    let mut site = Site::new(Point::new(x, y, z), alpha);
    if tokens.len() == 6 {
        let b = parse_coord(tokens[4])?;
        let e = parse_alpha(tokens[5])?;
        site = site.with_dressing(DressingStep::new(b, e).map_err(|e| e.to_string())?);
    }
    Ok(site)
}

/// Parse geometry text; `origin` names the source in error messages.
pub fn parse_geometry(text: &str, origin: &str) -> Result<Geometry> {
    let mut sites = Vec::new();
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = body.split_whitespace().collect();
        let site = parse_line(&tokens).map_err(|message| CliError::Parse {
            path: origin.to_string(),
            line: i + 1,
            message,
        })?;
        sites.push(site);
        lines.push(i + 1);
    }
    if sites.is_empty() {
        return Err(CliError::Parse { path: origin.to_string(), line: 0, message: "no sites".into() });
    }
    Geometry::new(sites).map_err(|e| match e {
        CoreError::DuplicateSite(a, b) => CliError::Parse {
            path: origin.to_string(),
            line: lines[b],
            message: format!("duplicate site: same position as line {}", lines[a]),
        },
        other => other.into(),
    })
}

pub fn parse_geometry_file(path: impl AsRef<Path>) -> Result<Geometry> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_geometry(&text, &path.display().to_string())
}
