//! Plain-text surface description read by `conefold surface check`.
//!
//! ```text
//! # ten strings at the SPT limit on a torus
//! genus 1
//! point gmu=1.7e-7   # comments may trail
//! point gmu=1.7e-7
//! ```

use std::fs;
use std::path::Path;

use crate::cone_geometry::{cone_point_from_tension, FlatConeSurface, StringTension};
use crate::error::{Error, Result};

pub fn read_surface_file(path: &Path, allow_negative_deficits: bool) -> Result<FlatConeSurface> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    parse_surface(&text, allow_negative_deficits)
}

pub fn parse_surface(text: &str, allow_negative_deficits: bool) -> Result<FlatConeSurface> {
    let mut genus: Option<u32> = None;
    let mut points = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let keyword = words.next().unwrap_or_default();
        let arg = words.next();
        if words.next().is_some() {
            return Err(err(format!("unexpected trailing text in '{line}'")));
        }
        match (genus, keyword) {
            (None, "genus") => {
                let value = arg.ok_or_else(|| err("missing genus value".into()))?;
                genus = Some(value.parse().map_err(|_| {
                    err(format!(
                        "genus must be a non-negative integer, got '{value}'"
                    ))
                })?);
            }
            (None, _) => {
                return Err(err(format!(
                    "expected 'genus <integer>' first, got '{line}'"
                )))
            }
            (Some(_), "genus") => return Err(err("genus given twice".into())),
            (Some(_), "point") => {
                let value = arg
                    .and_then(|a| a.strip_prefix("gmu="))
                    .ok_or_else(|| err(format!("expected 'point gmu=<decimal>', got '{line}'")))?;
                let g: f64 = value
                    .parse()
                    .map_err(|_| err(format!("bad number '{value}'")))?;
                let tension = if allow_negative_deficits {
                    StringTension::signed(g, format!("line {line_no}"))
                } else {
                    StringTension::new(g, format!("line {line_no}"))
                }
                .map_err(|e| err(e.to_string()))?;
                points.push(cone_point_from_tension(&tension).map_err(|e| err(e.to_string()))?);
            }
            (Some(_), other) => return Err(err(format!("unknown keyword '{other}'"))),
        }
    }
    let genus = genus.ok_or_else(|| Error::Parse {
        line: text.lines().count().max(1),
        message: "missing 'genus <integer>' line".into(),
    })?;
    FlatConeSurface::with_policy(genus, points, allow_negative_deficits)
}
