//! Plain-text file formats: points files, chirotope files and an optional
//! SVG rendering.
//!
//! Both formats are line-oriented, `#`-comment friendly and diffable;
//! rationals are always written as `num/den` in lowest terms, so writing is
//! canonical and `parse(write(x)) == x` byte-exactly.

use std::fmt;

use crate::geometry::{CirclePoint, Configuration, ConfigError, LabeledPoint, Point};
use crate::order_type::{Chirotope, OrderTypeError};
use crate::rat::{self, Rat};

pub const POINTS_HEADER: &str = "# inscribe-points v1";
pub const CHIROTOPE_HEADER: &str = "# inscribe-chi v1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IoError {
    MissingHeader(&'static str),
    BadRecord { line: usize, reason: String },
    BadConfig(String),
}

impl fmt::Display for IoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IoError::MissingHeader(h) => write!(f, "missing header {h:?}"),
            IoError::BadRecord { line, reason } => write!(f, "line {line}: {reason}"),
            IoError::BadConfig(reason) => write!(f, "invalid configuration: {reason}"),
        }
    }
}

impl std::error::Error for IoError {}

impl From<ConfigError> for IoError {
    fn from(e: ConfigError) -> Self {
        IoError::BadConfig(e.to_string())
    }
}

impl From<OrderTypeError> for IoError {
    fn from(e: OrderTypeError) -> Self {
        IoError::BadConfig(e.to_string())
    }
}

fn format_circle_param(t: &CirclePoint) -> String {
    match t {
        CirclePoint::Infinity => "1/0".into(),
        CirclePoint::Finite(t) => rat::format_rat(t),
    }
}

fn parse_circle_param(s: &str) -> Option<CirclePoint> {
    if let Some((num, den)) = s.split_once('/') {
        if den == "0" {
            return if num == "1" { Some(CirclePoint::Infinity) } else { None };
        }
        let _ = (num, den);
    }
    rat::parse_rat(s).map(CirclePoint::Finite)
}

/// Serializes a configuration, one record per line:
/// `label x y [B] [t=param]`.
pub fn write_points(config: &Configuration) -> String {
    let mut out = String::from(POINTS_HEADER);
    out.push('\n');
    for p in config.iter() {
        out.push_str(&p.label);
        out.push(' ');
        out.push_str(&rat::format_rat(&p.point.x));
        out.push(' ');
        out.push_str(&rat::format_rat(&p.point.y));
        if p.b_flag {
            out.push_str(" B");
        }
        if let Some(t) = &p.circle {
            out.push_str(" t=");
            out.push_str(&format_circle_param(t));
        }
        out.push('\n');
    }
    out
}

/// Parses a points file; coordinates of `t=`-flagged records must equal the
/// exact embedding of the parameter.
pub fn parse_points(text: &str) -> Result<Configuration, IoError> {
    let mut lines = text.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((_, l)) if l.trim().is_empty() => continue,
            other => break other,
        }
    };
    match header {
        Some((_, l)) if l.trim() == POINTS_HEADER => {}
        _ => return Err(IoError::MissingHeader(POINTS_HEADER)),
    }
    let mut points = Vec::new();
    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |reason: &str| IoError::BadRecord { line: idx + 1, reason: reason.into() };
        let mut fields = line.split_whitespace();
        let label = fields.next().ok_or_else(|| bad("missing label"))?.to_string();
        let x = fields
            .next()
            .and_then(rat::parse_rat)
            .ok_or_else(|| bad("missing or invalid x"))?;
        let y = fields
            .next()
            .and_then(rat::parse_rat)
            .ok_or_else(|| bad("missing or invalid y"))?;
        let mut b_flag = false;
        let mut circle = None;
        for f in fields {
            if f == "B" {
                b_flag = true;
            } else if let Some(t) = f.strip_prefix("t=") {
                circle =
                    Some(parse_circle_param(t).ok_or_else(|| bad("invalid circle parameter"))?);
            } else {
                return Err(bad(&format!("unexpected field {f:?}")));
            }
        }
        points.push(LabeledPoint { label, point: Point::new(x, y), circle, b_flag });
    }
    Ok(Configuration::new(points)?)
}

/// Serializes a chirotope: `n=<count>` plus one line of `+`/`-`/`0` signs
/// over sorted triples in lexicographic order.
pub fn write_chirotope(chi: &Chirotope) -> String {
    let mut out = String::from(CHIROTOPE_HEADER);
    out.push('\n');
    out.push_str(&format!("n={}\n", chi.len()));
    for &s in chi.raw_signs() {
        out.push(match s {
            1 => '+',
            -1 => '-',
            _ => '0',
        });
    }
    out.push('\n');
    out
}

pub fn parse_chirotope(text: &str) -> Result<Chirotope, IoError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, l)) if l.trim() == CHIROTOPE_HEADER => {}
        _ => return Err(IoError::MissingHeader(CHIROTOPE_HEADER)),
    }
    let (idx, nline) = lines.next().ok_or(IoError::BadRecord {
        line: 2,
        reason: "missing n= line".into(),
    })?;
    let n: usize = nline
        .trim()
        .strip_prefix("n=")
        .and_then(|s| s.parse().ok())
        .ok_or(IoError::BadRecord { line: idx + 1, reason: "invalid n= line".into() })?;
    let (idx, sline) = lines.next().ok_or(IoError::BadRecord {
        line: idx + 2,
        reason: "missing sign line".into(),
    })?;
    let expected = n * n.saturating_sub(1) * n.saturating_sub(2) / 6;
    let signs: Vec<i8> = sline
        .trim()
        .chars()
        .map(|c| match c {
            '+' => Ok(1),
            '-' => Ok(-1),
            '0' => Ok(0),
            _ => Err(IoError::BadRecord { line: idx + 1, reason: format!("bad sign {c:?}") }),
        })
        .collect::<Result<_, _>>()?;
    if signs.len() != expected {
        return Err(IoError::BadRecord {
            line: idx + 1,
            reason: format!("expected {expected} signs, found {}", signs.len()),
        });
    }
    Ok(Chirotope::from_signs(n, signs)?)
}

/// Best-effort SVG rendering of a points file: the unit circle plus labeled
/// dots. Not part of any exactness contract.
pub fn to_svg(config: &Configuration) -> String {
    let coords: Vec<(f64, f64, &str, bool)> = config
        .iter()
        .map(|p| (rat::to_f64(&p.point.x), rat::to_f64(&p.point.y), p.label.as_str(), p.b_flag))
        .collect();
    let mut max_r: f64 = 1.0;
    for &(x, y, _, _) in &coords {
        max_r = max_r.max((x * x + y * y).sqrt());
    }
    let scale = 220.0 / max_r;
    let map = |x: f64, y: f64| (250.0 + scale * x, 250.0 - scale * y);
    let mut out = String::new();
    out.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"500\" height=\"500\" viewBox=\"0 0 500 500\">\n",
    );
    out.push_str(&format!(
        "  <circle cx=\"250\" cy=\"250\" r=\"{:.2}\" fill=\"none\" stroke=\"#888\"/>\n",
        scale
    ));
    for (x, y, label, b) in coords {
        let (cx, cy) = map(x, y);
        let color = if b { "#c22" } else { "#226" };
        out.push_str(&format!(
            "  <circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"3\" fill=\"{color}\"/>\n"
        ));
        out.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\">{label}</text>\n",
            cx + 5.0,
            cy - 5.0
        ));
    }
    out.push_str("</svg>\n");
    out
}

/// Parses a `num/den` rational command-line argument.
pub fn parse_rat_arg(s: &str) -> Option<Rat> {
    rat::parse_rat(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order_type::chirotope;
    use crate::staircase::{inscribe_staircase, StaircasePair};

    #[test]
    fn points_roundtrip_byte_exact() {
        let ins = inscribe_staircase(&StaircasePair::new(2, vec![1, 2], vec![0, 1])).unwrap();
        let text = write_points(&ins.config);
        let parsed = parse_points(&text).unwrap();
        assert_eq!(parsed, ins.config);
        assert_eq!(write_points(&parsed), text);
    }

    #[test]
    fn points_with_infinity_parameter() {
        let ins = inscribe_staircase(&StaircasePair::new(0, vec![0, 0], vec![0, 0])).unwrap();
        let text = write_points(&ins.config);
        assert!(text.contains("t=1/0"));
        let parsed = parse_points(&text).unwrap();
        assert_eq!(parsed, ins.config);
    }

    #[test]
    fn points_rejects_mismatched_witness() {
        let text = "# inscribe-points v1\np 1/1 1/1 t=0/1\n";
        assert!(matches!(parse_points(text), Err(IoError::BadConfig(_))));
    }

    #[test]
    fn points_rejects_garbage() {
        assert!(parse_points("nope").is_err());
        let text = "# inscribe-points v1\np 1/1\n";
        assert!(matches!(parse_points(text), Err(IoError::BadRecord { .. })));
    }

    #[test]
    fn chirotope_roundtrip() {
        let ins = inscribe_staircase(&StaircasePair::new(2, vec![2, 2], vec![1, 2])).unwrap();
        let chi = chirotope(&ins.config).unwrap();
        let text = write_chirotope(&chi);
        let parsed = parse_chirotope(&text).unwrap();
        assert_eq!(parsed, chi);
        assert_eq!(write_chirotope(&parsed), text);
    }

    #[test]
    fn svg_smoke() {
        let ins = inscribe_staircase(&StaircasePair::new(1, vec![1], vec![0])).unwrap();
        let svg = to_svg(&ins.config);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("</svg>"));
    }
}
