//! Flat text formats for line sets and point sets.
//!
//! ```text
//! q=2 r=3 kind=projective
//! # comment
//! 1,0,0,0;0,1,0,0
//! ```
//!
//! Point sets use `kind=points` and one point per line. Coordinates are field-element
//! codes; `kind` names the canonical polar space the lines are meant to live in.

use std::collections::HashSet;
use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::covers::LineSet;
use crate::error::{Error, Result};
use crate::fields::FieldTable;
use crate::polar::{make_polar, parabolic_quad, PolarKind, PolarSpace};
use crate::projective::{GeometryContext, Subspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FileKind {
    Projective,
    Symplectic,
    Parabolic,
}

impl fmt::Display for FileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FileKind::Projective => "projective",
            FileKind::Symplectic => "symplectic",
            FileKind::Parabolic => "parabolic",
        })
    }
}

impl FromStr for FileKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "projective" => Ok(FileKind::Projective),
            "symplectic" => Ok(FileKind::Symplectic),
            "parabolic" => Ok(FileKind::Parabolic),
            _ => Err(format!("unknown kind {s:?}")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LineSetFile {
    pub kind: FileKind,
    pub lines: LineSet,
}

impl LineSetFile {
    /// The canonical polar space named by the header, if any. For q even the parabolic
    /// kind is the nucleus quadric.
    pub fn polar(&self) -> Result<Option<PolarSpace>> {
        polar_for(self.kind, self.lines.ctx())
    }
}

pub fn polar_for(kind: FileKind, ctx: &Arc<GeometryContext>) -> Result<Option<PolarSpace>> {
    Ok(match kind {
        FileKind::Projective => None,
        FileKind::Symplectic => Some(PolarSpace::with_gram(
            ctx.clone(),
            PolarKind::Symplectic,
            crate::polar::symplectic_gram(ctx.field(), ctx.n()),
        )?),
        FileKind::Parabolic if ctx.field().p() == 2 => Some(PolarSpace::from_quadric(
            ctx.clone(),
            parabolic_quad(ctx.field(), ctx.n()),
        )?),
        FileKind::Parabolic => {
            let ps = make_polar(PolarKind::Parabolic, ctx.r(), ctx.q())?;
            Some(PolarSpace::from_quadric(ctx.clone(), ps.quad().unwrap().to_vec())?)
        }
    })
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

struct Header {
    q: usize,
    r: usize,
    kind: String,
}

fn parse_header(line_no: usize, text: &str) -> Result<Header> {
    let (mut q, mut r, mut kind) = (None, None, None);
    for tok in text.split_whitespace() {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| parse_err(line_no, format!("expected key=value, got {tok:?}")))?;
        match k {
            "q" => q = Some(v.parse().map_err(|_| parse_err(line_no, "bad q"))?),
            "r" => r = Some(v.parse().map_err(|_| parse_err(line_no, "bad r"))?),
            "kind" => kind = Some(v.to_string()),
            _ => return Err(parse_err(line_no, format!("unknown header key {k:?}"))),
        }
    }
    match (q, r, kind) {
        (Some(q), Some(r), Some(kind)) if r >= 1 => Ok(Header { q, r, kind }),
        _ => Err(parse_err(line_no, "header needs q=, r= and kind=")),
    }
}

/// Non-empty, non-comment lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap().trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_point(f: &FieldTable, n: usize, line_no: usize, text: &str) -> Result<Vec<u8>> {
    let v: Vec<u8> = text
        .split(',')
        .map(|c| {
            let code: usize = c
                .trim()
                .parse()
                .map_err(|_| parse_err(line_no, format!("bad element code {c:?}")))?;
            f.check_code(code).map_err(|e| parse_err(line_no, e.to_string()))
        })
        .collect::<Result<_>>()?;
    if v.len() != n {
        return Err(parse_err(line_no, format!("expected {n} coordinates, got {}", v.len())));
    }
    Ok(v)
}

fn context(h: &Header, line_no: usize) -> Result<Arc<GeometryContext>> {
    let f = FieldTable::new(h.q).map_err(|e| parse_err(line_no, e.to_string()))?;
    Ok(GeometryContext::shared(h.r, Arc::new(f)))
}

pub fn parse_line_set(text: &str) -> Result<LineSetFile> {
    let mut it = content_lines(text);
    let (hl, ht) = it.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let h = parse_header(hl, ht)?;
    let kind: FileKind = h.kind.parse().map_err(|e: String| parse_err(hl, e))?;
    let ctx = context(&h, hl)?;
    let n = ctx.n();
    let f = ctx.field().clone();
    let mut seen = HashSet::new();
    let mut lines = Vec::new();
    for (no, text) in it {
        let (a, b) = text
            .split_once(';')
            .ok_or_else(|| parse_err(no, "expected two points separated by ';'"))?;
        let mut rows = parse_point(&f, n, no, a)?;
        rows.extend(parse_point(&f, n, no, b)?);
        let s = ctx.subspace(&rows);
        if s.dim() != 1 {
            return Err(parse_err(no, "the two points do not span a line"));
        }
        if !seen.insert(s.clone()) {
            return Err(parse_err(no, "duplicate line"));
        }
        lines.push(s);
    }
    if lines.is_empty() {
        return Err(parse_err(hl, "no lines"));
    }
    Ok(LineSetFile {
        kind,
        lines: LineSet::new(ctx, lines)?,
    })
}

fn write_vec(out: &mut String, v: &[u8]) {
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write!(out, "{x}").unwrap();
    }
}

pub fn write_line_set(kind: FileKind, l: &LineSet) -> String {
    let ctx = l.ctx();
    let mut out = format!("q={} r={} kind={kind}\n", ctx.q(), ctx.r());
    for line in l.lines() {
        write_vec(&mut out, line.row(0));
        out.push(';');
        write_vec(&mut out, line.row(1));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone)]
pub struct PointSetFile {
    pub ctx: Arc<GeometryContext>,
    pub points: FixedBitSet,
}

pub fn parse_point_set(text: &str) -> Result<PointSetFile> {
    let mut it = content_lines(text);
    let (hl, ht) = it.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let h = parse_header(hl, ht)?;
    if h.kind != "points" {
        return Err(parse_err(hl, "point sets need kind=points"));
    }
    let ctx = context(&h, hl)?;
    let f = ctx.field().clone();
    let mut points = FixedBitSet::with_capacity(ctx.num_points());
    for (no, text) in it {
        let mut v = parse_point(&f, ctx.n(), no, text)?;
        if !crate::linalg::normalize(&f, &mut v) {
            return Err(parse_err(no, "zero vector"));
        }
        if points.put(ctx.id_of_normalized(&v)) {
            return Err(parse_err(no, "duplicate point"));
        }
    }
    Ok(PointSetFile { ctx, points })
}

pub fn write_point_set(ctx: &GeometryContext, points: &FixedBitSet) -> String {
    let mut out = format!("q={} r={} kind=points\n", ctx.q(), ctx.r());
    for p in points.ones() {
        write_vec(&mut out, ctx.point(p));
        out.push('\n');
    }
    out
}

/// Basis rows of a subspace, for manifests.
pub fn subspace_rows(s: &Subspace) -> Vec<Vec<u8>> {
    (0..s.rank()).map(|i| s.row(i).to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "q=2 r=3 kind=projective\n# two skew lines\n1,0,0,0;0,1,0,0\n0,0,1,0;0,0,0,1 # trailing\n";

    #[test]
    fn parse_and_round_trip() {
        let f = parse_line_set(SAMPLE).unwrap();
        assert_eq!(f.kind, FileKind::Projective);
        assert_eq!(f.lines.len(), 2);
        let again = parse_line_set(&write_line_set(f.kind, &f.lines)).unwrap();
        assert_eq!(again.lines.lines(), f.lines.lines());
    }

    #[test]
    fn duplicate_line_reports_its_line_number() {
        let text = "q=2 r=3 kind=projective\n1,0,0,0;0,1,0,0\n1,1,0,0;0,1,0,0\n";
        assert_eq!(
            parse_line_set(text).unwrap_err(),
            Error::Parse {
                line: 3,
                msg: "duplicate line".into()
            }
        );
    }

    #[test]
    fn rejects_bad_input() {
        for bad in [
            "",
            "q=6 r=3 kind=projective\n1,0,0,0;0,1,0,0\n",
            "q=2 r=3 kind=conic\n1,0,0,0;0,1,0,0\n",
            "q=2 r=3 kind=projective\n1,0,0,0;1,0,0,0\n",
            "q=2 r=3 kind=projective\n1,0,0;0,1,0,0\n",
            "q=2 r=3 kind=projective\n1,0,0,2;0,1,0,0\n",
            "q=2 r=3 kind=projective\n",
        ] {
            assert!(matches!(parse_line_set(bad), Err(Error::Parse { .. })), "{bad:?}");
        }
    }

    #[test]
    fn point_set_round_trip() {
        let ctx = GeometryContext::shared(2, Arc::new(FieldTable::new(3).unwrap()));
        let mut pts = FixedBitSet::with_capacity(ctx.num_points());
        for p in [0, 4, 12] {
            pts.insert(p);
        }
        let back = parse_point_set(&write_point_set(&ctx, &pts)).unwrap();
        assert_eq!(back.points, pts);
    }

    #[test]
    fn even_parabolic_kind_uses_the_nucleus_quadric() {
        let ctx = GeometryContext::shared(6, Arc::new(FieldTable::new(2).unwrap()));
        let ps = polar_for(FileKind::Parabolic, &ctx).unwrap().unwrap();
        assert_eq!(ps.num_points(), 63);
    }
}
