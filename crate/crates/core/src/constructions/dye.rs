//! The line spread of PG(4n-1,q) obtained by field reduction from W(2n-1,q²), together
//! with its pencil of symplectic forms, their Hermitian companions, and the derived
//! line orbits and point sets.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use super::spread::FieldReduction;
use crate::analysis::{bar_set, tight_check, CompanionBundle, TightReport};
use crate::covers::{cover_profile_in, is_dual_symplectic_with, DualSpectrum, LineSet};
use crate::error::{Error, Result};
use crate::fields::ExtensionPair;
use crate::linalg;
use crate::polar::{BaerEmbedding, PolarKind, PolarSpace};
use crate::projective::{theta, GeometryContext, Subspace};

#[derive(Debug)]
pub struct DyeBundle {
    pub n: usize,
    pub q: usize,
    pub reduction: FieldReduction,
    pub emb: Arc<BaerEmbedding>,
    /// Scalars `ω^j`, `j = 0..=q`, indexing the pencil.
    pub lambdas: Vec<u8>,
    /// `W_j` over GF(q) with its lift and Hermitian companion over GF(q²).
    pub pencil: Vec<CompanionBundle>,
    pub spread: LineSet,
    pub sigma1: Subspace,
    pub sigma2: Subspace,
}

fn lines_of(ctx: &GeometryContext, s: &Subspace) -> Vec<Subspace> {
    let pts = ctx.points_of(s);
    let mut seen = HashSet::new();
    for (i, &a) in pts.iter().enumerate() {
        for &b in &pts[i + 1..] {
            seen.insert(ctx.line(a, b));
        }
    }
    let mut v: Vec<Subspace> = seen.into_iter().collect();
    v.sort();
    v
}

/// Left eigenspace `{v : v M = λ v}` of a row-acting matrix.
fn left_eigenspace(ctx: &GeometryContext, m: &[u8], lambda: u8) -> Subspace {
    let f = ctx.field();
    let n = ctx.n();
    let mut a = linalg::transpose(m, n);
    for i in 0..n {
        a[i * n + i] = f.sub(a[i * n + i], lambda);
    }
    ctx.kernel(&a)
}

pub fn dye_build(n: usize, q: usize) -> Result<DyeBundle> {
    if n < 2 {
        return Err(Error::InvalidArgument("the spread bundle needs n >= 2".into()));
    }
    let ext = Arc::new(ExtensionPair::new(q)?);
    let reduction = FieldReduction::new(2 * n, ext.clone())?;
    let r = 4 * n - 1;
    let emb = Arc::new(BaerEmbedding::new(r, ext.clone())?);
    let small = emb.small().clone();
    let big = emb.big().clone();
    let ef = ext.ext().clone();
    let omega = reduction.omega();

    let lambdas: Vec<u8> = (0..=q).map(|j| ef.exp(j)).collect();
    let mut pencil = Vec::new();
    for &l in &lambdas {
        let w = PolarSpace::with_gram(small.clone(), PolarKind::Symplectic, reduction.trace_gram(l))?;
        let b = CompanionBundle::with_embedding(emb.clone(), w)?;
        if !b.commuting {
            return Err(Error::Structural("pencil form has no commuting Hermitian companion".into()));
        }
        pencil.push(b);
    }
    let grams: HashSet<Vec<u8>> = pencil.iter().map(|b| b.small.gram().to_vec()).collect();
    if grams.len() != q + 1 {
        return Err(Error::Structural("pencil forms are not distinct".into()));
    }

    let spread = reduction.spread()?;
    let expected = theta(2 * n as i64 - 1, (q * q) as u64)? as usize;
    if spread.len() != expected {
        return Err(Error::Structural(format!("spread has {} lines", spread.len())));
    }
    if crate::covers::cover_profile(&spread)?.m != Some(1) {
        return Err(Error::Structural("spread is not a partition of the points".into()));
    }
    for b in &pencil {
        if spread.lines().iter().any(|l| !b.small.is_totally_isotropic(l)) {
            return Err(Error::Structural("spread line is not totally isotropic".into()));
        }
    }

    let m: Vec<u8> = reduction.omega_matrix().iter().map(|&x| ext.embed(x)).collect();
    let sigma1 = left_eigenspace(&big, &m, omega);
    let sigma2 = left_eigenspace(&big, &m, ef.pow(omega, q as u64));
    if sigma1.rank() != 2 * n || sigma2.rank() != 2 * n {
        return Err(Error::Structural("eigenspaces have the wrong dimension".into()));
    }
    if emb.tau_subspace(&sigma1)? != sigma2 {
        return Err(Error::Structural("τ does not swap the eigenspaces".into()));
    }
    for s in [&sigma1, &sigma2] {
        if big.points_of(s).iter().any(|&p| emb.is_real(p)) {
            return Err(Error::Structural("eigenspace meets the subgeometry".into()));
        }
        for b in &pencil {
            if !b.herm.is_totally_isotropic(s) {
                return Err(Error::Structural("eigenspace is not a Hermitian generator".into()));
            }
        }
    }
    for l in spread.lines() {
        let ext_line = emb.extend_line(l)?;
        for s in [&sigma1, &sigma2] {
            if big.meet(&ext_line, s)?.dim() != 0 {
                return Err(Error::Structural("extended spread line misses an eigenspace".into()));
            }
        }
    }
    Ok(DyeBundle {
        n,
        q,
        reduction,
        emb,
        lambdas,
        pencil,
        spread,
        sigma1,
        sigma2,
    })
}

#[derive(Debug, Clone)]
pub struct LinePartition {
    /// Index into the pencil.
    pub form: usize,
    pub o1: LineSet,
    pub o2: LineSet,
    pub total_ti_lines: usize,
}

/// Splits the t.i. lines of `W_form` outside the spread by whether the solid spanned by
/// the q+1 spread lines they meet is totally isotropic.
pub fn dye_classify_lines(bundle: &DyeBundle, form: usize) -> Result<LinePartition> {
    let w = &bundle.pencil[form].small;
    let ctx = w.ctx();
    let q = bundle.q;
    let mut owner = vec![usize::MAX; ctx.num_points()];
    for i in 0..bundle.spread.len() {
        for &p in bundle.spread.points_on(i) {
            owner[p as usize] = i;
        }
    }
    let all = w.ti_lines();
    let classified: Vec<Option<bool>> = all
        .par_iter()
        .map(|l| {
            if bundle.spread.contains(l) {
                return Ok(None);
            }
            let hit: BTreeSet<usize> = ctx.points_of(l).iter().map(|&p| owner[p]).collect();
            if hit.len() != q + 1 {
                return Err(Error::Structural(format!(
                    "line meets {} spread lines instead of {}",
                    hit.len(),
                    q + 1
                )));
            }
            let rows: Vec<u8> = hit
                .iter()
                .flat_map(|&i| bundle.spread.line(i).rows().to_vec())
                .collect();
            let t = ctx.subspace(&rows);
            if t.dim() != 3 {
                return Err(Error::Structural("spread lines through a line do not span a solid".into()));
            }
            Ok(Some(w.is_totally_isotropic(&t)))
        })
        .collect::<Result<_>>()?;
    let (mut o1, mut o2) = (Vec::new(), Vec::new());
    for (l, c) in all.iter().zip(&classified) {
        match c {
            Some(true) => o2.push(l.clone()),
            Some(false) => o1.push(l.clone()),
            None => {}
        }
    }
    Ok(LinePartition {
        form,
        o1: LineSet::new(ctx.clone(), o1)?,
        o2: LineSet::new(ctx.clone(), o2)?,
        total_ti_lines: all.len(),
    })
}

/// Totally isotropic subspaces of the given projective dimension in a polar space.
fn ti_subspaces(ps: &PolarSpace, dim: usize) -> Vec<Subspace> {
    let ctx = ps.ctx();
    let mut level: HashSet<Subspace> = ps
        .points()
        .ones()
        .map(|p| ctx.subspace(ctx.point(p)))
        .collect();
    for _ in 0..dim {
        level = level
            .par_iter()
            .flat_map_iter(|s| {
                let perp = ps.perp(s).unwrap();
                ctx.points_of(&perp)
                    .into_iter()
                    .filter(|&p| ps.contains_point(p) && !ctx.contains_point(s, p))
                    .map(|p| ctx.span(s, &ctx.subspace(ctx.point(p))).unwrap())
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    let mut v: Vec<Subspace> = level.into_iter().collect();
    v.sort();
    v
}

#[derive(Debug, Clone)]
pub struct MFamily {
    pub members: Vec<Subspace>,
    /// Spread lines inside each member.
    pub spread_lines_per_member: Vec<usize>,
    /// All lines lying in some member.
    pub lines: HashSet<Subspace>,
}

/// `⟨g, τ(g)⟩` read over GF(q), for every t.i. generator `g` of the symplectic structure
/// induced on Σ₁.
pub fn dye_m(bundle: &DyeBundle) -> Result<MFamily> {
    let n = bundle.n;
    let q = bundle.q as u64;
    let big = bundle.emb.big();
    let bf = big.field().clone();
    let s = &bundle.sigma1;
    let k = s.rank();
    let w_big = &bundle.pencil[0].big;
    let mut g = vec![0u8; k * k];
    for i in 0..k {
        for j in 0..k {
            g[i * k + j] = w_big.form(s.row(i), s.row(j));
        }
    }
    let local_ctx = GeometryContext::shared(k - 1, bf.clone());
    let local = PolarSpace::with_gram(local_ctx.clone(), PolarKind::Symplectic, g)?;
    let gens = ti_subspaces(&local, n - 1);
    let expected: u64 = (1..=n as u32).map(|i| q.pow(2 * i) + 1).product();
    if gens.len() as u64 != expected {
        return Err(Error::Structural(format!("{} generators on Σ₁, expected {expected}", gens.len())));
    }
    let mut members = Vec::new();
    for gen in &gens {
        let rows: Vec<u8> = gen
            .rows()
            .chunks(k)
            .flat_map(|c| crate::constructions::singer::apply_rows(&bf, s.rows(), big.n(), c))
            .collect();
        let gb = big.subspace(&rows);
        let both = big.span(&gb, &bundle.emb.tau_subspace(&gb)?)?;
        let d = bundle
            .emb
            .descend_subspace(&both)?
            .ok_or_else(|| Error::Structural("⟨g, τg⟩ does not descend".into()))?;
        if d.rank() != 2 * n {
            return Err(Error::Structural("member has the wrong dimension".into()));
        }
        for b in &bundle.pencil {
            if !b.small.is_totally_isotropic(&d) {
                return Err(Error::Structural("member is not totally isotropic".into()));
            }
        }
        members.push(d);
    }
    members.sort();
    let ctx = bundle.emb.small();
    let sf = ctx.field();
    let spread_lines_per_member = members
        .iter()
        .map(|m| bundle.spread.lines().iter().filter(|l| m.contains_subspace(sf, l)).count())
        .collect();
    let lines = members.par_iter().flat_map_iter(|m| lines_of(ctx, m)).collect();
    Ok(MFamily {
        members,
        spread_lines_per_member,
        lines,
    })
}

#[derive(Debug)]
pub struct RSet {
    pub points: FixedBitSet,
    pub p1: Vec<Subspace>,
    pub p2: Vec<Subspace>,
    /// Whether `S_P` is the same for every Hermitian form of the pencil.
    pub perp_agrees: bool,
    /// Distinct generators contained in `R` among P1, P2, Σ₁, Σ₂.
    pub generators_in_r: usize,
    pub tight: Vec<TightReport>,
}

fn generator_family(bundle: &DyeBundle, from: &Subspace, to: &Subspace) -> Result<(Vec<Subspace>, bool)> {
    let big = bundle.emb.big();
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut agrees = true;
    for p in big.points_of(from) {
        let mut sp = None;
        for b in &bundle.pencil {
            let s = big.meet(&b.herm.perp_point(p), to)?;
            match &sp {
                None => sp = Some(s),
                Some(prev) if *prev != s => agrees = false,
                _ => {}
            }
        }
        let sp = sp.unwrap();
        if !seen.insert(sp.clone()) {
            return Err(Error::Structural("two points share the same S_P".into()));
        }
        let gen = big.span(&big.subspace(big.point(p)), &sp)?;
        if gen.rank() != from.rank() || bundle.pencil.iter().any(|b| !b.herm.is_totally_isotropic(&gen)) {
            return Err(Error::Structural("⟨P, S_P⟩ is not a generator".into()));
        }
        out.push(gen);
    }
    out.sort();
    Ok((out, agrees))
}

pub fn dye_r(bundle: &DyeBundle) -> Result<RSet> {
    let big = bundle.emb.big();
    let (p1, a1) = generator_family(bundle, &bundle.sigma1, &bundle.sigma2)?;
    let (p2, a2) = generator_family(bundle, &bundle.sigma2, &bundle.sigma1)?;
    let mut points = FixedBitSet::with_capacity(big.num_points());
    for g in &p1 {
        for p in big.points_of(g) {
            points.insert(p);
        }
    }
    let inside = |s: &Subspace| big.points_of(s).iter().all(|&p| points.contains(p));
    let mut gens: HashSet<&Subspace> = p1.iter().chain(&p2).filter(|g| inside(g)).collect();
    for s in [&bundle.sigma1, &bundle.sigma2] {
        if inside(s) {
            gens.insert(s);
        }
    }
    let generators_in_r = gens.len();
    let (q, n) = (bundle.q as u64, bundle.n as u32);
    let i = q.pow(4 * n - 2) + 1;
    let tight = bundle
        .pencil
        .iter()
        .map(|b| tight_check(&b.herm, &points, Some(i)))
        .collect::<Result<_>>()?;
    Ok(RSet {
        points,
        p1,
        p2,
        perp_agrees: a1 && a2,
        generators_in_r,
        tight,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitTight {
    pub name: String,
    pub form: usize,
    pub report: TightReport,
}

#[derive(Debug)]
pub struct DyeOrbitTightness {
    pub f_bar: FixedBitSet,
    pub o1_bar: Vec<FixedBitSet>,
    pub o2_bar: FixedBitSet,
    pub reports: Vec<OrbitTight>,
}

/// Tightness of F̄, Ō₁ (per pencil form) and Ō₂ in every Hermitian companion.
pub fn dye_orbit_tightness(bundle: &DyeBundle, partitions: &[LinePartition]) -> Result<DyeOrbitTightness> {
    let (q, n) = (bundle.q as u64, bundle.n as u32);
    let emb = &bundle.emb;
    let f_bar = bar_set(emb, &bundle.spread)?;
    let o2_bar = bar_set(emb, &partitions[0].o2)?;
    let o1_bar: Vec<FixedBitSet> = partitions.iter().map(|p| bar_set(emb, &p.o1)).collect::<Result<_>>()?;
    let i_f = q * q + 1;
    let i_o1 = q.pow(4 * n - 1) - q.pow(4 * n - 2) + q + 1;
    let i_o2 = q.pow(4 * n - 2) - q * q + q + 1;
    let mut reports = Vec::new();
    for (j, b) in bundle.pencil.iter().enumerate() {
        reports.push(OrbitTight {
            name: "F".into(),
            form: j,
            report: tight_check(&b.herm, &f_bar, Some(i_f))?,
        });
        reports.push(OrbitTight {
            name: "O2".into(),
            form: j,
            report: tight_check(&b.herm, &o2_bar, Some(i_o2))?,
        });
    }
    for p in partitions {
        reports.push(OrbitTight {
            name: "O1".into(),
            form: p.form,
            report: tight_check(&bundle.pencil[p.form].herm, &o1_bar[p.form], Some(i_o1))?,
        });
    }
    Ok(DyeOrbitTightness {
        f_bar,
        o1_bar,
        o2_bar,
        reports,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DyeSummary {
    pub n: usize,
    pub q: usize,
    pub spread_size: usize,
    pub ti_lines: usize,
    pub o1_size: usize,
    pub o2_size: usize,
    pub partition_ok: bool,
    pub o2_same_for_all_forms: bool,
    pub multiplicities: [Option<u32>; 3],
    pub m_size: usize,
    pub m_spread_lines_ok: bool,
    pub o2_is_m_lines: bool,
    pub r_size: usize,
    pub r_size_expected: u64,
    pub r_contains_sigmas: bool,
    pub r_generators: usize,
    pub r_generators_min: u64,
    pub perp_agrees: bool,
    pub r_tight: Vec<TightReport>,
    pub orbit_tight: Vec<OrbitTight>,
    pub r_decomposition_ok: bool,
    pub additivity: (u64, u64, u64, u64),
    pub additivity_ok: bool,
    pub dual: Vec<(String, DualSpectrum)>,
    pub pass: bool,
}

/// Runs every check on the bundle.
pub fn dye_summary(bundle: &DyeBundle) -> Result<DyeSummary> {
    let (q, n) = (bundle.q as u64, bundle.n as u32);
    let partitions: Vec<LinePartition> = (0..bundle.pencil.len())
        .map(|j| dye_classify_lines(bundle, j))
        .collect::<Result<_>>()?;
    let p0 = &partitions[0];
    let w0 = &bundle.pencil[0].small;
    let partition_ok = bundle.spread.len() + p0.o1.len() + p0.o2.len() == p0.total_ti_lines;
    let o2_same_for_all_forms = partitions.iter().all(|p| p.o2.lines() == p0.o2.lines());
    let multiplicities = [
        cover_profile_in(&bundle.spread, w0)?.m,
        cover_profile_in(&p0.o1, w0)?.m,
        cover_profile_in(&p0.o2, w0)?.m,
    ];

    let mf = dye_m(bundle)?;
    let m_spread_lines_ok = mf.spread_lines_per_member.iter().all(|&c| c as u64 == q * q + 1);
    let o2_set: HashSet<&Subspace> = p0.o2.lines().iter().collect();
    let m_minus_f: HashSet<&Subspace> = mf.lines.iter().filter(|l| !bundle.spread.contains(l)).collect();
    let o2_is_m_lines = o2_set == m_minus_f;

    let r = dye_r(bundle)?;
    let big = bundle.emb.big();
    let theta_g = theta(2 * n as i64 - 1, q * q)?;
    let r_size_expected = (q.pow(4 * n - 2) + 1) * theta_g;
    let r_contains_sigmas = [&bundle.sigma1, &bundle.sigma2]
        .iter()
        .all(|s| big.points_of(s).iter().all(|&p| r.points.contains(p)));

    let ot = dye_orbit_tightness(bundle, &partitions)?;
    let mut union = ot.f_bar.clone();
    union.union_with(&ot.o2_bar);
    let mut inter = ot.f_bar.clone();
    inter.intersect_with(&ot.o2_bar);
    let r_decomposition_ok = union == r.points && &inter == bundle.emb.fixed();
    let i_f = q * q + 1;
    let i_o2 = q.pow(4 * n - 2) - q * q + q + 1;
    let i_r = tight_check(&bundle.pencil[0].herm, &r.points, None)?.i.unwrap_or(0);
    let additivity = (i_f, i_o2, q + 1, i_r);
    let additivity_ok = i_f + i_o2 - (q + 1) == i_r;

    let probes = w0.ti_lines();
    let mut dual = Vec::new();
    for (name, l) in [("F", &bundle.spread), ("O1", &p0.o1), ("O2", &p0.o2)] {
        dual.push((name.to_string(), is_dual_symplectic_with(l, w0, &probes)?));
    }

    let pass = partition_ok
        && o2_same_for_all_forms
        && multiplicities.iter().all(Option::is_some)
        && mf.members.len() as u64 == (1..=n).map(|i| q.pow(2 * i) + 1).product::<u64>()
        && m_spread_lines_ok
        && o2_is_m_lines
        && r.points.count_ones(..) as u64 == r_size_expected
        && r_contains_sigmas
        && r.generators_in_r as u64 >= 2 * theta_g + 2
        && r.perp_agrees
        && r.tight.iter().all(|t| t.pass)
        && ot.reports.iter().all(|t| t.report.pass)
        && r_decomposition_ok
        && additivity_ok
        && dual.iter().all(|(_, d)| d.pass);
    Ok(DyeSummary {
        n: bundle.n,
        q: bundle.q,
        spread_size: bundle.spread.len(),
        ti_lines: p0.total_ti_lines,
        o1_size: p0.o1.len(),
        o2_size: p0.o2.len(),
        partition_ok,
        o2_same_for_all_forms,
        multiplicities,
        m_size: mf.members.len(),
        m_spread_lines_ok,
        o2_is_m_lines,
        r_size: r.points.count_ones(..),
        r_size_expected,
        r_contains_sigmas,
        r_generators: r.generators_in_r,
        r_generators_min: 2 * theta_g + 2,
        perp_agrees: r.perp_agrees,
        r_tight: r.tight,
        orbit_tight: ot.reports,
        r_decomposition_ok,
        additivity,
        additivity_ok,
        dual,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundle_2_2_builds() {
        let b = dye_build(2, 2).unwrap();
        assert_eq!(b.spread.len(), 85);
        assert_eq!(b.pencil.len(), 3);
        // a generator of each Hermitian companion is 1-tight
        let mut x = FixedBitSet::with_capacity(b.emb.big().num_points());
        for p in b.emb.big().points_of(&b.sigma1) {
            x.insert(p);
        }
        for c in &b.pencil {
            let t = tight_check(&c.herm, &x, None).unwrap();
            assert_eq!(t.i, Some(1));
        }
    }

    #[test]
    fn n_one_is_rejected() {
        assert!(dye_build(1, 2).is_err());
    }
}
