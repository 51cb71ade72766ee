//! The split Cayley hexagon H(q) on the quadric `x0x4 + x1x5 + x2x6 = x3²`, with the
//! projection from the nucleus into W(5,q) for q even.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use crate::covers::LineSet;
use crate::error::{Error, Result};
use crate::fields::FieldTable;
use crate::polar::{parabolic_quad, PolarKind, PolarSpace};
use crate::projective::{theta, GeometryContext, Subspace};

/// Pairs `((i,j),(k,l))` with `p_ij = p_kl` on every hexagon line, where
/// `p_ij = x_i y_j - x_j y_i`.
const PLUCKER: [((usize, usize), (usize, usize)); 6] = [
    ((1, 2), (3, 4)),
    ((5, 4), (3, 2)),
    ((2, 0), (3, 5)),
    ((6, 5), (3, 0)),
    ((0, 1), (3, 6)),
    ((4, 6), (3, 1)),
];

#[derive(Debug, Clone, Serialize)]
pub struct HexagonChecks {
    pub points: usize,
    pub lines: usize,
    pub lines_per_point: bool,
    pub lines_through_point_planar: bool,
    pub quadric_planes: usize,
    /// Number of quadric planes containing q+1 hexagon lines.
    pub hexagon_planes: usize,
    pub plane_counts_ok: bool,
    pub planes_on_hexagon_line_ok: bool,
    pub planes_on_other_line_ok: bool,
    pub elliptic_sections: usize,
    pub elliptic_sections_ok: bool,
}

impl HexagonChecks {
    pub fn pass(&self) -> bool {
        self.lines_per_point
            && self.lines_through_point_planar
            && self.plane_counts_ok
            && self.planes_on_hexagon_line_ok
            && self.planes_on_other_line_ok
            && self.elliptic_sections > 0
            && self.elliptic_sections_ok
    }
}

#[derive(Debug)]
pub struct HexagonModel {
    pub quadric: PolarSpace,
    pub lines: LineSet,
    pub checks: HexagonChecks,
}

fn plucker(f: &FieldTable, x: &[u8], y: &[u8], i: usize, j: usize) -> u8 {
    f.sub(f.mul(x[i], y[j]), f.mul(x[j], y[i]))
}

fn is_hexagon_line(f: &FieldTable, line: &Subspace) -> bool {
    let (x, y) = (line.row(0), line.row(1));
    PLUCKER
        .iter()
        .all(|&((a, b), (c, d))| plucker(f, x, y, a, b) == plucker(f, x, y, c, d))
}

/// The quadric `x0x4 + x1x5 + x2x6 - x3²` on PG(6,q); for q even it has nucleus `e_3`.
pub fn hexagon_quadric(q: usize) -> Result<PolarSpace> {
    let f = Arc::new(FieldTable::new(q)?);
    let ctx = GeometryContext::shared(6, f.clone());
    let ps = PolarSpace::from_quadric(ctx, parabolic_quad(&f, 7))?;
    debug_assert_eq!(ps.kind(), PolarKind::Parabolic);
    Ok(ps)
}

/// Builds the hexagon lines and verifies the structural properties before returning.
pub fn hexagon_lines(q: usize) -> Result<HexagonModel> {
    if !(2..=3).contains(&q) {
        return Err(Error::InvalidArgument("hexagon models are built for q = 2, 3".into()));
    }
    let quadric = hexagon_quadric(q)?;
    let f = quadric.field().clone();
    let all = quadric.ti_lines();
    let hex: Vec<Subspace> = all.iter().filter(|l| is_hexagon_line(&f, l)).cloned().collect();
    let lines = LineSet::new(quadric.ctx().clone(), hex)?;
    let checks = verify_bullets(&quadric, &lines, &all)?;
    if !checks.pass() {
        return Err(Error::Structural(format!("hexagon properties fail: {checks:?}")));
    }
    Ok(HexagonModel {
        quadric,
        lines,
        checks,
    })
}

/// All planes of the quadric, as the spans of a totally singular line and a
/// further singular point of its perp.
pub fn quadric_planes(quadric: &PolarSpace, lines: &[Subspace]) -> Vec<Subspace> {
    let ctx = quadric.ctx();
    let mut planes: Vec<Subspace> = lines
        .par_iter()
        .flat_map_iter(|l| {
            let perp = quadric.perp(l).unwrap();
            let mut local = HashSet::new();
            for p in ctx.points_of(&perp) {
                if quadric.contains_point(p) && !ctx.contains_point(l, p) {
                    let pt = ctx.subspace(ctx.point(p));
                    local.insert(ctx.span(l, &pt).unwrap());
                }
            }
            local
        })
        .collect::<HashSet<_>>()
        .into_iter()
        .collect();
    planes.sort();
    planes
}

fn verify_bullets(quadric: &PolarSpace, hex: &LineSet, all: &[Subspace]) -> Result<HexagonChecks> {
    let ctx = quadric.ctx();
    let f = ctx.field();
    let q = ctx.q();
    let npts = quadric.num_points();

    let mut through: HashMap<usize, Vec<usize>> = HashMap::new();
    for i in 0..hex.len() {
        for &p in hex.points_on(i) {
            through.entry(p as usize).or_default().push(i);
        }
    }
    let lines_per_point =
        through.len() == npts && through.values().all(|v| v.len() == q + 1);

    let mut point_planes = HashSet::new();
    let mut lines_through_point_planar = true;
    for ls in through.values() {
        let rows: Vec<u8> = ls.iter().flat_map(|&i| hex.line(i).rows().to_vec()).collect();
        let plane = ctx.subspace(&rows);
        if plane.dim() != 2 || !quadric.is_totally_isotropic(&plane) {
            lines_through_point_planar = false;
        }
        point_planes.insert(plane);
    }

    let planes = quadric_planes(quadric, all);
    let counts: Vec<usize> = planes
        .par_iter()
        .map(|pl| hex.lines().iter().filter(|l| pl.contains_subspace(f, l)).count())
        .collect();
    let hexagon_planes: HashSet<&Subspace> = planes
        .iter()
        .zip(&counts)
        .filter(|(_, &c)| c == q + 1)
        .map(|(p, _)| p)
        .collect();
    let theta5 = theta(5, q as u64)? as usize;
    let plane_counts_ok = counts.iter().all(|&c| c == 0 || c == q + 1)
        && hexagon_planes.len() == theta5
        && point_planes.iter().all(|p| hexagon_planes.contains(p));

    let hp: Vec<&Subspace> = hexagon_planes.iter().copied().collect();
    let per_line: Vec<(bool, usize)> = all
        .par_iter()
        .map(|l| {
            let n = hp.iter().filter(|p| p.contains_subspace(f, l)).count();
            (hex.contains(l), n)
        })
        .collect();
    let planes_on_hexagon_line_ok = per_line.iter().filter(|x| x.0).all(|x| x.1 == q + 1);
    let planes_on_other_line_ok = per_line.iter().filter(|x| !x.0).all(|x| x.1 == 1);

    // elliptic sections Q-(5,q) have (q³+1)(q+1) points
    let elliptic_size = (q.pow(3) + 1) * (q + 1);
    let sections: Vec<(bool, bool)> = (0..ctx.num_points())
        .into_par_iter()
        .filter_map(|h| {
            let hyper = ctx.point(h);
            let on = quadric
                .points()
                .ones()
                .filter(|&p| crate::linalg::dot(f, hyper, ctx.point(p)) == 0)
                .count();
            if on != elliptic_size {
                return None;
            }
            let inside: Vec<usize> = (0..hex.len())
                .filter(|&i| {
                    hex.points_on(i)
                        .iter()
                        .all(|&p| crate::linalg::dot(f, hyper, ctx.point(p as usize)) == 0)
                })
                .collect();
            let mut seen = FixedBitSet::with_capacity(ctx.num_points());
            let mut disjoint = true;
            for &i in &inside {
                for &p in hex.points_on(i) {
                    if seen.put(p as usize) {
                        disjoint = false;
                    }
                }
            }
            Some((inside.len() == q.pow(3) + 1, disjoint))
        })
        .collect();

    Ok(HexagonChecks {
        points: through.len(),
        lines: hex.len(),
        lines_per_point,
        lines_through_point_planar,
        quadric_planes: planes.len(),
        hexagon_planes: hexagon_planes.len(),
        plane_counts_ok,
        planes_on_hexagon_line_ok,
        planes_on_other_line_ok,
        elliptic_sections: sections.len(),
        elliptic_sections_ok: sections.iter().all(|&(a, b)| a && b),
    })
}

/// Central projection from the nucleus `e_3` of the q-even quadric: dropping the
/// coordinate `x3` lands in the canonical W(5,q).
pub fn hexagon_project_even(model: &HexagonModel) -> Result<(LineSet, PolarSpace)> {
    let qctx = model.quadric.ctx();
    if qctx.field().p() != 2 {
        return Err(Error::InvalidArgument("projection from the nucleus needs q even".into()));
    }
    let w = crate::polar::make_polar(PolarKind::Symplectic, 5, qctx.q())?;
    let wctx = w.ctx().clone();
    let drop3 = |v: &[u8]| -> Vec<u8> {
        v.iter().enumerate().filter(|&(i, _)| i != 3).map(|(_, &x)| x).collect()
    };
    let mut image = BTreeMap::new();
    for p in model.quadric.points().ones() {
        let mut v = drop3(qctx.point(p));
        crate::linalg::normalize(wctx.field(), &mut v);
        if image.insert(wctx.id_of_normalized(&v), p).is_some() {
            return Err(Error::Structural("projection is not injective on the quadric".into()));
        }
    }
    if image.len() != wctx.num_points() {
        return Err(Error::Structural("projection is not onto PG(5,q)".into()));
    }
    let lines: Vec<Subspace> = model
        .lines
        .lines()
        .iter()
        .map(|l| {
            let rows: Vec<u8> = l.rows().chunks(7).flat_map(drop3).collect();
            wctx.subspace(&rows)
        })
        .collect();
    if lines.iter().any(|l| l.dim() != 1 || !w.is_totally_isotropic(l)) {
        return Err(Error::Structural("projected line is not totally isotropic".into()));
    }
    Ok((LineSet::new(wctx, lines)?, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::cover_profile_in;

    #[test]
    fn hexagon_q2_and_projection() {
        let m = hexagon_lines(2).unwrap();
        assert_eq!(m.lines.len(), 63);
        assert_eq!(m.checks.points, 63);
        let (l, w) = hexagon_project_even(&m).unwrap();
        assert_eq!(l.len(), 63);
        assert_eq!(cover_profile_in(&l, &w).unwrap().m, Some(3));
    }

    #[test]
    fn odd_q_cannot_be_projected() {
        let m = hexagon_lines(3).unwrap();
        assert_eq!(m.lines.len(), 364);
        assert!(hexagon_project_even(&m).is_err());
    }
}
