//! Line sets, m-cover recognition, the counting identities every cover satisfies, and
//! the (r-2)-dual predicates in projective, symplectic and parabolic flavours.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hist::Histogram;
use crate::linalg;
use crate::polar::{LineClass, PolarKind, PolarSpace};
use crate::projective::{theta, GeometryContext, Subspace};

/// A duplicate-free set of lines with their point ids cached.
#[derive(Debug, Clone)]
pub struct LineSet {
    ctx: Arc<GeometryContext>,
    lines: Vec<Subspace>,
    points: Vec<u32>,
    index: HashMap<Subspace, usize>,
}

impl LineSet {
    pub fn new(ctx: Arc<GeometryContext>, lines: Vec<Subspace>) -> Result<Self> {
        let k = ctx.q() + 1;
        let mut index = HashMap::with_capacity(lines.len());
        let mut points = Vec::with_capacity(lines.len() * k);
        for (i, l) in lines.iter().enumerate() {
            ctx.check(l)?;
            if l.dim() != 1 {
                return Err(Error::NotALine);
            }
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLine(i));
            }
            points.extend(ctx.points_of(l).into_iter().map(|p| p as u32));
        }
        Ok(LineSet {
            ctx,
            lines,
            points,
            index,
        })
    }

    pub fn ctx(&self) -> &Arc<GeometryContext> {
        &self.ctx
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn lines(&self) -> &[Subspace] {
        &self.lines
    }

    pub fn line(&self, i: usize) -> &Subspace {
        &self.lines[i]
    }

    /// Sorted point ids of line `i`.
    pub fn points_on(&self, i: usize) -> &[u32] {
        let k = self.ctx.q() + 1;
        &self.points[i * k..(i + 1) * k]
    }

    pub fn contains(&self, l: &Subspace) -> bool {
        self.index.contains_key(l)
    }

    pub fn index_of(&self, l: &Subspace) -> Option<usize> {
        self.index.get(l).copied()
    }

    /// Number of lines through each point id.
    pub fn multiplicities(&self) -> Vec<u32> {
        let mut mult = vec![0u32; self.ctx.num_points()];
        for &p in &self.points {
            mult[p as usize] += 1;
        }
        mult
    }

    /// Counts the lines contained in, and the lines meeting in one point, the
    /// subspace cut out by `funcs` (one or two functionals of length `n`).
    pub fn incidence_counts(&self, funcs: &[u8]) -> (u64, u64) {
        let f = self.ctx.field();
        let n = self.ctx.n();
        let mut x = 0;
        let mut y = 0;
        for l in &self.lines {
            let (u, v) = (l.row(0), l.row(1));
            let mut m = [0u8; 4];
            for (j, fc) in funcs.chunks(n).enumerate().take(2) {
                m[2 * j] = linalg::dot(f, fc, u);
                m[2 * j + 1] = linalg::dot(f, fc, v);
            }
            if m == [0; 4] {
                x += 1;
            } else if f.mul(m[0], m[3]) == f.mul(m[1], m[2]) {
                y += 1;
            }
        }
        (x, y)
    }

    /// Number of lines contained in the subspace cut out by `funcs`.
    pub fn contained_in(&self, funcs: &[u8]) -> u64 {
        let f = self.ctx.field();
        let n = self.ctx.n();
        self.lines
            .iter()
            .filter(|l| {
                funcs
                    .chunks(n)
                    .all(|fc| linalg::dot(f, fc, l.row(0)) == 0 && linalg::dot(f, fc, l.row(1)) == 0)
            })
            .count() as u64
    }
}

/// Point multiplicities of a line set over the projective space or a polar space.
#[derive(Debug, Clone, Serialize)]
pub struct CoverProfile {
    pub m: Option<u32>,
    pub size: usize,
    pub domain_points: usize,
    pub multiplicities: Histogram<u32>,
    /// `|L| (q+1) = m |domain|` when `m` is set.
    pub size_identity: Option<bool>,
    /// `q+1` divides `m` for projective covers with `r` even.
    pub even_r_divisibility: Option<bool>,
}

impl CoverProfile {
    pub fn require_m(&self) -> Result<u32> {
        match self.m {
            Some(m) => Ok(m),
            None => Err(Error::NotACover {
                min: *self.multiplicities.keys().next().unwrap_or(&0),
                max: *self.multiplicities.keys().last().unwrap_or(&0),
            }),
        }
    }
}

fn profile(l: &LineSet, domain: impl Iterator<Item = usize>, projective: bool) -> CoverProfile {
    let mult = l.multiplicities();
    let hist: Histogram<u32> = domain.map(|p| mult[p]).collect();
    let domain_points = hist.total() as usize;
    let m = (hist.len() == 1).then(|| *hist.keys().next().unwrap()).filter(|&m| m > 0);
    let q = l.ctx().q();
    CoverProfile {
        size_identity: m.map(|m| l.len() * (q + 1) == m as usize * domain_points),
        even_r_divisibility: m
            .filter(|_| projective && l.ctx().r().is_multiple_of(2))
            .map(|m| (m as usize).is_multiple_of(q + 1)),
        m,
        size: l.len(),
        domain_points,
        multiplicities: hist,
    }
}

/// Profile over all points of PG(r,q).
pub fn cover_profile(l: &LineSet) -> Result<CoverProfile> {
    if l.is_empty() {
        return Err(Error::EmptyLineSet);
    }
    Ok(profile(l, 0..l.ctx().num_points(), true))
}

/// Profile over the points of a polar space; every line must lie in it.
pub fn cover_profile_in(l: &LineSet, ps: &PolarSpace) -> Result<CoverProfile> {
    if l.is_empty() {
        return Err(Error::EmptyLineSet);
    }
    same_geometry(l, ps)?;
    for (i, line) in l.lines().iter().enumerate() {
        if !ps.is_totally_isotropic(line) {
            return Err(Error::NotIsotropic(i));
        }
    }
    Ok(profile(l, ps.points().ones(), false))
}

fn same_geometry(l: &LineSet, ps: &PolarSpace) -> Result<()> {
    if l.ctx().n() != ps.ctx().n() || l.ctx().q() != ps.ctx().q() {
        return Err(Error::ContextMismatch(
            "line set and polar space live in different geometries".into(),
        ));
    }
    Ok(())
}

fn th(n: i64, q: usize) -> u64 {
    theta(n.max(-1), q as u64).unwrap()
}

fn exact_div(a: u64, b: u64, what: &str) -> std::result::Result<u64, String> {
    if a.is_multiple_of(b) {
        Ok(a / b)
    } else {
        Err(format!("{b} does not divide {a} ({what})"))
    }
}

/// Hyperplane and codimension-2 counts of an m-cover of PG(r,q).
#[derive(Debug, Clone, Serialize)]
pub struct CoverCountReport {
    pub m: u32,
    pub size: usize,
    pub expected_size: u64,
    pub hyperplane_counts: Histogram,
    pub expected_hyperplane_count: u64,
    /// `(x, y)` over all (r-2)-spaces: lines inside, lines meeting in a point.
    pub codim2_counts: Histogram<(u64, u64)>,
    pub expected_xy_sum: u64,
    pub pass: bool,
}

/// All (r-2)-spaces of PG(r,q), each given by two functionals.
pub fn codim2_functionals(ctx: &GeometryContext) -> Vec<Vec<u8>> {
    if ctx.r() < 2 {
        return Vec::new();
    }
    ctx.enumerate_subspaces(1)
        .unwrap()
        .map(|s| s.rows().to_vec())
        .collect()
}

pub fn check_cover_counts(l: &LineSet) -> Result<CoverCountReport> {
    let prof = cover_profile(l)?;
    let m = prof.require_m()?;
    let ctx = l.ctx();
    let (r, q) = (ctx.r() as i64, ctx.q());
    let mu = m as u64;
    let expected_size = mu * th(r, q) / (q as u64 + 1);
    let expected_hyperplane_count = mu * th(r - 2, q) / (q as u64 + 1);
    let hyperplane_counts = (0..ctx.num_points())
        .into_par_iter()
        .map(|h| l.contained_in(ctx.point(h)))
        .fold(Histogram::new, |mut acc, x| {
            acc.add(x);
            acc
        })
        .reduce(Histogram::new, Histogram::merge);
    let codim2_counts = codim2_functionals(ctx)
        .par_iter()
        .map(|fs| l.incidence_counts(fs))
        .fold(Histogram::new, |mut acc, xy| {
            acc.add(xy);
            acc
        })
        .reduce(Histogram::new, Histogram::merge);
    let expected_xy_sum = mu * th(r - 2, q);
    let pass = prof.size_identity == Some(true)
        && prof.even_r_divisibility != Some(false)
        && l.len() as u64 == expected_size
        && hyperplane_counts.only(&[expected_hyperplane_count])
        && codim2_counts
            .keys()
            .all(|&(x, y)| x * (q as u64 + 1) + y == expected_xy_sum);
    Ok(CoverCountReport {
        m,
        size: l.len(),
        expected_size,
        hyperplane_counts,
        expected_hyperplane_count,
        codim2_counts,
        expected_xy_sum,
        pass,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DualScope {
    Codim2Projective,
    TiLineSymplectic,
    ParabolicI,
    ParabolicII,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ParabolicVariant {
    I,
    II,
}

impl ParabolicVariant {
    /// Whether a non-member probe line of this class is admissible.
    pub fn admits(self, class: LineClass) -> bool {
        match (self, class) {
            (_, LineClass::Tangent) => false,
            (ParabolicVariant::I, _) => true,
            (ParabolicVariant::II, c) => c != LineClass::Secant,
        }
    }
}

/// Line counts over a family of probe subspaces, split by probe membership.
#[derive(Debug, Clone, Serialize)]
pub struct DualSpectrum {
    pub scope: DualScope,
    pub m: u32,
    pub probes: u64,
    /// Counts over every probe.
    pub histogram: Histogram,
    /// Counts over probes that are lines of the set (empty in the projective scope).
    pub members: Histogram,
    pub non_members: Histogram,
    pub x_in: Option<u64>,
    pub x_out: Option<u64>,
    pub pass: bool,
    /// Divisibility or precondition failure, reported instead of values.
    pub failure: Option<String>,
}

fn dual_values(m: u32, t: i64, q: usize, qpow: u32) -> std::result::Result<(u64, u64), String> {
    let base = exact_div(m as u64 * th(t, q), q as u64 + 1, "m theta / (q+1)")?;
    Ok((base + (q as u64).pow(qpow), base))
}

fn spectrum(
    scope: DualScope,
    m: u32,
    counts: Vec<(bool, u64)>,
    values: std::result::Result<(u64, u64), String>,
    split: bool,
) -> DualSpectrum {
    let mut histogram = Histogram::new();
    let mut members = Histogram::new();
    let mut non_members = Histogram::new();
    for &(member, x) in &counts {
        histogram.add(x);
        if split {
            if member {
                members.add(x);
            } else {
                non_members.add(x);
            }
        }
    }
    let (x_in, x_out, pass, failure) = match values {
        Ok((a, b)) => {
            let pass = if split {
                members.only(&[a]) && non_members.only(&[b])
            } else {
                histogram.only(&[a, b])
            };
            (Some(a), Some(b), pass, None)
        }
        Err(e) => (None, None, false, Some(e)),
    };
    DualSpectrum {
        scope,
        m,
        probes: counts.len() as u64,
        histogram,
        members,
        non_members,
        x_in,
        x_out,
        pass,
        failure,
    }
}

/// Lines of `l` inside each (r-2)-space of PG(r,q), against the two admissible values.
pub fn is_dual_projective(l: &LineSet) -> Result<DualSpectrum> {
    let m = cover_profile(l)?.require_m()?;
    let ctx = l.ctx();
    let (r, q) = (ctx.r() as i64, ctx.q());
    let counts: Vec<(bool, u64)> = codim2_functionals(ctx)
        .par_iter()
        .map(|fs| (false, l.contained_in(fs)))
        .collect();
    let values = dual_values(m, r - 4, q, (r - 3).max(0) as u32);
    Ok(spectrum(DualScope::Codim2Projective, m, counts, values, false))
}

fn perp_functionals(ps: &PolarSpace, line: &Subspace) -> Vec<u8> {
    let mut fs = ps.functional(line.row(0));
    fs.extend(ps.functional(line.row(1)));
    fs
}

/// Lines of `l` inside `ℓ^⊥` for every totally isotropic probe line `ℓ` of `ps`.
pub fn is_dual_symplectic(l: &LineSet, ps: &PolarSpace) -> Result<DualSpectrum> {
    is_dual_symplectic_with(l, ps, &ps.ti_lines())
}

/// As [`is_dual_symplectic`] with a precomputed list of all totally isotropic lines.
pub fn is_dual_symplectic_with(l: &LineSet, ps: &PolarSpace, probes: &[Subspace]) -> Result<DualSpectrum> {
    if ps.kind() != PolarKind::Symplectic {
        return Err(Error::InvalidArgument("symplectic duality needs a symplectic space".into()));
    }
    let m = cover_profile_in(l, ps)?.require_m()?;
    let (r, q) = (ps.r() as i64, ps.ctx().q());
    let counts: Vec<(bool, u64)> = probes
        .par_iter()
        .map(|p| (l.contains(p), l.contained_in(&perp_functionals(ps, p))))
        .collect();
    let values = dual_values(m, r - 4, q, (r - 3).max(0) as u32);
    Ok(spectrum(DualScope::TiLineSymplectic, m, counts, values, true))
}

/// Number of lines of `l` inside `ℓ^⊥` for a single parabolic probe; tangent probes
/// are rejected.
pub fn parabolic_probe_value(l: &LineSet, ps: &PolarSpace, probe: &Subspace) -> Result<u64> {
    if ps.classify_line(probe)? == LineClass::Tangent {
        return Err(Error::TangentProbe);
    }
    Ok(l.contained_in(&perp_functionals(ps, probe)))
}

/// Lines of PG(r,q) grouped by their class relative to the quadric.
pub fn classified_lines(ps: &PolarSpace) -> Vec<(Subspace, LineClass)> {
    let lines: Vec<Subspace> = ps.ctx().enumerate_subspaces(1).unwrap().collect();
    lines
        .into_par_iter()
        .map(|s| {
            let c = ps.classify_line(&s).unwrap();
            (s, c)
        })
        .collect()
}

fn require_parabolic(ps: &PolarSpace) -> Result<()> {
    if ps.kind() != PolarKind::Parabolic || ps.field().p() == 2 || ps.r() < 4 {
        return Err(Error::InvalidArgument(
            "parabolic checks need Q(r,q) with q odd and r >= 4".into(),
        ));
    }
    Ok(())
}

pub fn is_dual_parabolic(l: &LineSet, ps: &PolarSpace, variant: ParabolicVariant) -> Result<DualSpectrum> {
    is_dual_parabolic_with(l, ps, variant, &classified_lines(ps))
}

/// As [`is_dual_parabolic`] with a precomputed classification of all lines.
pub fn is_dual_parabolic_with(
    l: &LineSet,
    ps: &PolarSpace,
    variant: ParabolicVariant,
    lines: &[(Subspace, LineClass)],
) -> Result<DualSpectrum> {
    require_parabolic(ps)?;
    let m = cover_profile_in(l, ps)?.require_m()?;
    let (r, q) = (ps.r() as i64, ps.ctx().q());
    let counts: Vec<(bool, u64)> = lines
        .par_iter()
        .filter_map(|(s, c)| {
            let member = l.contains(s);
            (member || variant.admits(*c))
                .then(|| (member, l.contained_in(&perp_functionals(ps, s))))
        })
        .collect();
    let values = dual_values(m, r - 5, q, (r - 4).max(0) as u32);
    let scope = match variant {
        ParabolicVariant::I => DualScope::ParabolicI,
        ParabolicVariant::II => DualScope::ParabolicII,
    };
    Ok(spectrum(scope, m, counts, values, true))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HyperplaneSection {
    Tangent,
    Hyperbolic,
    Elliptic,
}

/// Counting identities of an m-cover of Q(r,q).
#[derive(Debug, Clone, Serialize)]
pub struct QuadricCoverCountReport {
    pub m: u32,
    pub size: usize,
    pub expected_size: u64,
    /// `(section type, lines inside)` over all hyperplanes.
    pub hyperplane_counts: Histogram<(HyperplaneSection, u64)>,
    pub expected_tangent: u64,
    pub expected_hyperbolic: u64,
    pub expected_elliptic: u64,
    /// `(x, y)` over `ℓ^⊥` for all lines meeting the quadric in 0, 2 or q+1 points.
    pub codim2_counts: Histogram<(u64, u64)>,
    pub expected_xy_sum: u64,
    pub pass: bool,
}

pub fn check_quadric_cover_counts(l: &LineSet, ps: &PolarSpace) -> Result<QuadricCoverCountReport> {
    check_quadric_cover_counts_with(l, ps, &classified_lines(ps))
}

pub fn check_quadric_cover_counts_with(l: &LineSet, ps: &PolarSpace, lines: &[(Subspace, LineClass)]) -> Result<QuadricCoverCountReport> {
    require_parabolic(ps)?;
    let prof = cover_profile_in(l, ps)?;
    let m = prof.require_m()?;
    let ctx = ps.ctx();
    let f = ctx.field().clone();
    let n = ctx.n();
    let (r, q) = (ctx.r() as i64, ctx.q() as u64);
    let mu = m as u64;
    let h = (r / 2) as u32;
    let hyp_pts = (q.pow(h) - 1) * (q.pow(h - 1) + 1) / (q - 1);
    let ell_pts = (q.pow(h) + 1) * (q.pow(h - 1) - 1) / (q - 1);
    let gram_inv = linalg::inverse(&f, ps.gram(), n)
        .ok_or_else(|| Error::InvalidPolar("singular polarization".into()))?;
    let qpts = ps.point_ids();
    let sections: Vec<std::result::Result<(HyperplaneSection, u64), String>> = (0..ctx.num_points())
        .into_par_iter()
        .map(|hid| {
            let c = ctx.point(hid);
            let pole = linalg::mat_vec(&f, &gram_inv, n, c);
            let kind = if ps.is_isotropic(&pole) {
                HyperplaneSection::Tangent
            } else {
                let k = qpts
                    .iter()
                    .filter(|&&p| linalg::dot(&f, c, ctx.point(p)) == 0)
                    .count() as u64;
                if k == hyp_pts {
                    HyperplaneSection::Hyperbolic
                } else if k == ell_pts {
                    HyperplaneSection::Elliptic
                } else {
                    return Err(format!("hyperplane section with {k} points"));
                }
            };
            Ok((kind, l.contained_in(c)))
        })
        .collect();
    let mut hyperplane_counts = Histogram::new();
    for s in sections {
        hyperplane_counts.add(s.map_err(Error::Structural)?);
    }
    let q2 = q * q - 1;
    let expected_tangent = mu * th(r - 3, q as usize) / (q + 1);
    let expected_hyperbolic = mu * (q.pow(h) - 1) * (q.pow(h - 2) + 1) / q2;
    let expected_elliptic = mu * (q.pow(h) + 1) * (q.pow(h - 2) - 1) / q2;
    let codim2_counts = lines
        .par_iter()
        .filter(|(_, c)| *c != LineClass::Tangent)
        .map(|(s, _)| l.incidence_counts(&perp_functionals(ps, s)))
        .fold(Histogram::new, |mut acc, xy| {
            acc.add(xy);
            acc
        })
        .reduce(Histogram::new, Histogram::merge);
    let expected_xy_sum = mu * th(r - 3, q as usize);
    let expected_size = mu * th(r - 1, q as usize) / (q + 1);
    let pass = l.len() as u64 == expected_size
        && hyperplane_counts.keys().all(|&(kind, x)| {
            x == match kind {
                HyperplaneSection::Tangent => expected_tangent,
                HyperplaneSection::Hyperbolic => expected_hyperbolic,
                HyperplaneSection::Elliptic => expected_elliptic,
            }
        })
        && codim2_counts.keys().all(|&(x, y)| x * (q + 1) + y == expected_xy_sum);
    Ok(QuadricCoverCountReport {
        m,
        size: l.len(),
        expected_size,
        hyperplane_counts,
        expected_tangent,
        expected_hyperbolic,
        expected_elliptic,
        codim2_counts,
        expected_xy_sum,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FieldTable;
    use crate::polar::make_polar;

    fn all_lines(r: usize, q: usize) -> LineSet {
        let ctx = GeometryContext::shared(r, Arc::new(FieldTable::new(q).unwrap()));
        let lines = ctx.enumerate_subspaces(1).unwrap().collect();
        LineSet::new(ctx, lines).unwrap()
    }

    /// A spread of PG(3,2) found by greedy search over the enumerated lines.
    fn spread_pg32() -> LineSet {
        let all = all_lines(3, 2);
        fn search(all: &LineSet, used: &mut Vec<bool>, chosen: &mut Vec<usize>, start: usize) -> bool {
            if let Some(p) = used.iter().position(|&u| !u) {
                for i in start..all.len() {
                    let pts = all.points_on(i);
                    if pts.contains(&(p as u32)) && pts.iter().all(|&x| !used[x as usize]) {
                        pts.iter().for_each(|&x| used[x as usize] = true);
                        chosen.push(i);
                        if search(all, used, chosen, 0) {
                            return true;
                        }
                        chosen.pop();
                        pts.iter().for_each(|&x| used[x as usize] = false);
                    }
                }
                false
            } else {
                true
            }
        }
        let mut used = vec![false; 15];
        let mut chosen = Vec::new();
        assert!(search(&all, &mut used, &mut chosen, 0));
        let lines = chosen.iter().map(|&i| all.line(i).clone()).collect();
        LineSet::new(all.ctx().clone(), lines).unwrap()
    }

    #[test]
    fn duplicates_are_rejected() {
        let all = all_lines(3, 2);
        let l = all.line(3).clone();
        assert_eq!(
            LineSet::new(all.ctx().clone(), vec![l.clone(), l]).unwrap_err(),
            Error::DuplicateLine(1)
        );
    }

    #[test]
    fn all_lines_profile() {
        let prof = cover_profile(&all_lines(3, 2)).unwrap();
        assert_eq!(prof.m, Some(7));
        assert_eq!(prof.size, 35);
        assert_eq!(prof.size_identity, Some(true));
    }

    #[test]
    fn spread_profile_and_cover_counts() {
        let s = spread_pg32();
        assert_eq!(cover_profile(&s).unwrap().m, Some(1));
        let rep = check_cover_counts(&s).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.expected_hyperplane_count, 1);
        assert_eq!(rep.hyperplane_counts.get(&1), 15);
    }

    #[test]
    fn all_lines_codim2_identity() {
        let rep = check_cover_counts(&all_lines(3, 2)).unwrap();
        assert!(rep.pass);
        // each (r-2)-space is a line: it contains itself and meets 18 others
        assert_eq!(rep.codim2_counts.keys().collect::<Vec<_>>(), vec![&(1, 18)]);
    }

    #[test]
    fn every_cover_of_pg3_is_dual() {
        for l in [spread_pg32(), all_lines(3, 2), all_lines(3, 3)] {
            let d = is_dual_projective(&l).unwrap();
            assert!(d.pass);
            assert_eq!((d.x_in, d.x_out), (Some(1), Some(0)));
        }
    }

    #[test]
    fn empty_and_non_cover_errors() {
        let all = all_lines(3, 2);
        let empty = LineSet::new(all.ctx().clone(), vec![]).unwrap();
        assert_eq!(cover_profile(&empty).unwrap_err(), Error::EmptyLineSet);
        let two = LineSet::new(all.ctx().clone(), all.lines()[..2].to_vec()).unwrap();
        assert!(matches!(check_cover_counts(&two), Err(Error::NotACover { .. })));
    }

    #[test]
    fn all_ti_lines_of_w53_are_dual_symplectic() {
        let ps = make_polar(PolarKind::Symplectic, 5, 3).unwrap();
        let lines = ps.ti_lines();
        assert_eq!(lines.len(), 3640);
        let l = LineSet::new(ps.ctx().clone(), lines.clone()).unwrap();
        let d = is_dual_symplectic_with(&l, &ps, &lines).unwrap();
        // every point lies on θ_{3,3} = 40 lines: ℓ^⊥ holds ℓ and the 48 lines meeting it
        assert_eq!(d.m, 40);
        assert_eq!((d.x_in, d.x_out), (Some(49), Some(40)));
        assert!(d.pass);
        assert!(d.non_members.is_empty());
        assert_eq!(cover_profile(&l).unwrap().m, Some(40));
    }

    #[test]
    fn q43_quadric_counts_and_parabolic_duality() {
        let ps = make_polar(PolarKind::Parabolic, 4, 3).unwrap();
        let l = LineSet::new(ps.ctx().clone(), ps.ti_lines()).unwrap();
        let rep = check_quadric_cover_counts(&l, &ps).unwrap();
        assert!(rep.pass);
        assert_eq!(
            (rep.expected_size, rep.expected_tangent, rep.expected_hyperbolic, rep.expected_elliptic),
            (40, 4, 8, 0)
        );
        let d1 = is_dual_parabolic(&l, &ps, ParabolicVariant::I).unwrap();
        assert_eq!((d1.x_in, d1.x_out), (Some(1), Some(0)));
        assert!(d1.pass);
        assert!(is_dual_parabolic(&l, &ps, ParabolicVariant::II).unwrap().pass);
    }

    #[test]
    fn tangent_probe_is_rejected() {
        let ps = make_polar(PolarKind::Parabolic, 4, 3).unwrap();
        let l = LineSet::new(ps.ctx().clone(), ps.ti_lines()).unwrap();
        let tangent = classified_lines(&ps)
            .into_iter()
            .find(|(_, c)| *c == LineClass::Tangent)
            .unwrap()
            .0;
        assert_eq!(parabolic_probe_value(&l, &ps, &tangent).unwrap_err(), Error::TangentProbe);
    }
}
