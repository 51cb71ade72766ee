//! Two-character sets, tight sets, the extended point set `L̄` of a line set, and the
//! both-sides checks tying dual covers to those point-set properties.

pub mod orbits;

use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use crate::covers::{
    cover_profile, cover_profile_in, is_dual_parabolic_with, is_dual_projective,
    is_dual_symplectic_with, DualSpectrum, LineSet, ParabolicVariant,
};
use crate::error::{Error, Result};
use crate::fields::FieldModuli;
use crate::hist::Histogram;
use crate::linalg;
use crate::polar::{check_commuting, BaerEmbedding, LineClass, PolarKind, PolarSpace};
use crate::projective::{theta, GeometryContext, Subspace};

/// Points of PG(r,q²) on the extended lines of `l`.
pub fn bar_set(emb: &BaerEmbedding, l: &LineSet) -> Result<FixedBitSet> {
    if l.is_empty() {
        return Err(Error::EmptyLineSet);
    }
    let mut out = FixedBitSet::with_capacity(emb.big().num_points());
    for line in l.lines() {
        for p in emb.big().points_of(&emb.extend_line(line)?) {
            out.insert(p);
        }
    }
    Ok(out)
}

/// `(q^2 - q)|L| + θ_{r,q}`, the size of `L̄` for a cover.
pub fn predicted_bar_size(r: usize, q: usize, lines: usize) -> u64 {
    let q = q as u64;
    (q * q - q) * lines as u64 + theta(r as i64, q).unwrap()
}

/// The two hyperplane intersection sizes of `L̄` for an (r-2)-dual m-cover of PG(r,q).
pub fn two_char_prediction(r: usize, q: usize, m: u32) -> Result<(u64, u64)> {
    let qq = q as u64;
    let t = |n: i64| theta(n.max(-1), qq).unwrap();
    let num = m as u64 * t(r as i64 - 2);
    if !num.is_multiple_of(qq + 1) {
        return Err(Error::Structural(format!("q+1 does not divide {num}")));
    }
    let base = (qq * qq - qq) * num / (qq + 1);
    Ok((base + t(r as i64 - 1), base + t(r as i64 - 2)))
}

/// Left side of the two-character identity
/// `k² θ_{r-2} + k(1-α-β) θ_{r-1} - k θ_{r-2} + αβ θ_r` over GF(order).
pub fn identity_residual(r: usize, order: usize, k: u64, alpha: u64, beta: u64) -> i128 {
    let t = |n: i64| theta(n.max(-1), order as u64).unwrap() as i128;
    let (k, a, b) = (k as i128, alpha as i128, beta as i128);
    let r = r as i64;
    k * k * t(r - 2) + k * (1 - a - b) * t(r - 1) - k * t(r - 2) + a * b * t(r)
}

#[derive(Debug, Clone, Serialize)]
pub struct TwoCharReport {
    pub r: usize,
    pub order: usize,
    pub k: u64,
    /// Hyperplane intersection sizes over all hyperplanes.
    pub spectrum: Histogram,
    pub alpha: Option<u64>,
    pub beta: Option<u64>,
    pub predicted: bool,
    pub identity_residual: Option<i128>,
    pub pass: bool,
}

/// Exhausts every hyperplane of `ctx`. Without a prediction the set passes when exactly
/// two sizes occur; with one, the two sizes must be the predicted pair.
pub fn two_char_check(ctx: &GeometryContext, x: &FixedBitSet, predicted: Option<(u64, u64)>) -> TwoCharReport {
    let n = ctx.n();
    let f = ctx.field();
    let coords: Vec<u8> = x.ones().flat_map(|p| ctx.point(p).iter().copied()).collect();
    let k = (coords.len() / n) as u64;
    let spectrum = (0..ctx.num_points())
        .into_par_iter()
        .map(|h| {
            let c = ctx.point(h);
            coords.chunks(n).filter(|v| linalg::dot(f, c, v) == 0).count() as u64
        })
        .fold(Histogram::new, |mut acc, v| {
            acc.add(v);
            acc
        })
        .reduce(Histogram::new, Histogram::merge);
    let observed: Vec<u64> = spectrum.keys().copied().collect();
    let (alpha, beta, pass) = match predicted {
        Some((a, b)) => (Some(a), Some(b), observed.len() == 2 && spectrum.only(&[a, b])),
        None if observed.len() == 2 => (Some(observed[1]), Some(observed[0]), true),
        None => (None, None, false),
    };
    let residual = match (alpha, beta) {
        (Some(a), Some(b)) => Some(identity_residual(ctx.r(), ctx.q(), k, a, b)),
        _ => None,
    };
    TwoCharReport {
        r: ctx.r(),
        order: ctx.q(),
        k,
        spectrum,
        alpha,
        beta,
        predicted: predicted.is_some(),
        identity_residual: residual,
        pass,
    }
}

/// `(θ, q-power)` in the tight-set display for an ambient polar space over GF(q²).
pub fn tight_params(ps: &PolarSpace) -> Result<(u64, u64)> {
    let order = ps.ctx().q();
    let q = ps
        .field()
        .sqrt_order()
        .ok_or_else(|| Error::InvalidArgument(format!("tight sets need a square order, got {order}")))? as u64;
    let r = ps.r() as i64;
    let th = |n: i64| theta(n, order as u64).unwrap();
    Ok(if r % 2 == 1 {
        (th((r - 3) / 2), q.pow(r as u32 - 1))
    } else {
        (th((r - 4) / 2), q.pow(r as u32 - 2))
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TightReport {
    pub ambient: PolarKind,
    pub r: usize,
    pub order: usize,
    pub size: u64,
    pub i: Option<u64>,
    pub inferred: bool,
    pub theta: u64,
    pub q_power: u64,
    pub expected_in: Option<u64>,
    pub expected_out: Option<u64>,
    /// `|P^⊥ ∩ X|` for points `P` of `X`.
    pub members: Histogram,
    /// `|P^⊥ ∩ X|` for points of the ambient space outside `X`.
    pub non_members: Histogram,
    pub pass: bool,
}

/// Checks the i-tight display over every point of `ps`. When `i` is omitted it is
/// inferred from one probe and then verified globally.
pub fn tight_check(ps: &PolarSpace, x: &FixedBitSet, i: Option<u64>) -> Result<TightReport> {
    let ctx = ps.ctx();
    if x.len() > ctx.num_points() || x.ones().any(|p| !ps.contains_point(p)) {
        return Err(Error::NotInPolarSpace);
    }
    let (th, qp) = tight_params(ps)?;
    let n = ctx.n();
    let f = ctx.field();
    let coords: Vec<u8> = x.ones().flat_map(|p| ctx.point(p).iter().copied()).collect();
    let (members, non_members) = ps
        .point_ids()
        .into_par_iter()
        .map(|p| {
            let fp = ps.functional(ctx.point(p));
            let c = coords.chunks(n).filter(|v| linalg::dot(f, &fp, v) == 0).count() as u64;
            (x.contains(p), c)
        })
        .fold(
            || (Histogram::new(), Histogram::new()),
            |(mut a, mut b), (member, c)| {
                if member {
                    a.add(c);
                } else {
                    b.add(c);
                }
                (a, b)
            },
        )
        .reduce(
            || (Histogram::new(), Histogram::new()),
            |(a1, b1), (a2, b2)| (a1.merge(a2), b1.merge(b2)),
        );
    let (i, inferred) = match i {
        Some(i) => (Some(i), false),
        None => {
            let guess = if let Some(&v) = non_members.keys().next() {
                (v % th == 0).then(|| v / th)
            } else {
                members
                    .keys()
                    .next()
                    .and_then(|&v| v.checked_sub(qp))
                    .and_then(|v| (v % th == 0).then(|| v / th))
            };
            (guess, true)
        }
    };
    let expected_in = i.map(|i| i * th + qp);
    let expected_out = i.map(|i| i * th);
    let pass = match (expected_in, expected_out) {
        (Some(a), Some(b)) => members.only(&[a]) && non_members.only(&[b]),
        _ => false,
    };
    Ok(TightReport {
        ambient: ps.kind(),
        r: ps.r(),
        order: ctx.q(),
        size: x.count_ones(..) as u64,
        i,
        inferred,
        theta: th,
        q_power: qp,
        expected_in,
        expected_out,
        members,
        non_members,
        pass,
    })
}

/// A polar space over GF(q), its lift to GF(q²), and the Hermitian companion whose
/// polarity composes with the lifted one to τ.
#[derive(Debug)]
pub struct CompanionBundle {
    pub emb: Arc<BaerEmbedding>,
    pub small: PolarSpace,
    pub big: PolarSpace,
    pub herm: PolarSpace,
    pub commuting: bool,
}

impl CompanionBundle {
    pub fn new(small: PolarSpace) -> Result<Self> {
        let q = small.ctx().q();
        let emb = Arc::new(crate::polar::build_embedding(small.r(), q)?);
        Self::with_embedding(emb, small)
    }

    pub fn with_embedding(emb: Arc<BaerEmbedding>, small: PolarSpace) -> Result<Self> {
        let big = emb.lift_polar(&small)?;
        let herm = emb.companion_hermitian(&small)?;
        let commuting = check_commuting(&emb, &big, &herm)?;
        Ok(CompanionBundle {
            emb,
            small,
            big,
            herm,
            commuting,
        })
    }

    pub fn q(&self) -> usize {
        self.emb.q()
    }

    pub fn r(&self) -> usize {
        self.emb.r()
    }

    pub fn moduli(&self) -> FieldModuli {
        self.emb.ext().moduli()
    }

    /// Class of the real line through a non-real point, relative to the small space.
    pub fn real_line_class(&self, big_id: usize) -> Option<LineClass> {
        self.emb
            .real_line_through(big_id)
            .map(|l| self.small.classify_line(&l).unwrap())
    }
}

/// The correspondences between dual covers and point-set properties of `L̄`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Equivalence {
    /// (r-2)-dual cover of PG(r,q) and two-character `L̄` in PG(r,q²).
    DualTwoCharacter,
    /// Symplectic-type dual cover and tight `L̄` in the Hermitian companion.
    SymplecticHermitian,
    /// Symplectic-type dual cover and tight `L̄` in W(r,q²).
    SymplecticLifted,
    /// Parabolic type I dual cover and tight `L̄` in the Hermitian companion.
    ParabolicHermitian,
    /// Parabolic type II dual cover and tight `L̄` in Q(r,q²).
    ParabolicLifted,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum PointSide {
    TwoCharacter(TwoCharReport),
    Tight(TightReport),
}

impl PointSide {
    pub fn pass(&self) -> bool {
        match self {
            PointSide::TwoCharacter(r) => r.pass,
            PointSide::Tight(r) => r.pass,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub relation: Equivalence,
    pub m: u32,
    pub dual: DualSpectrum,
    pub point_side: PointSide,
    /// Predicted sizes (two-character) or tight parameter, as `[a, b]` or `[i]`.
    pub predicted: Vec<u64>,
    /// Whether the observed two-character values equal the predicted ones.
    pub prediction_matches: bool,
    pub dual_pass: bool,
    pub point_pass: bool,
    pub agree: bool,
}

/// Both sides of the projective correspondence, computed independently.
pub fn verify_dual_two_character(l: &LineSet, emb: &BaerEmbedding) -> Result<EquivalenceReport> {
    let m = cover_profile(l)?.require_m()?;
    let dual = is_dual_projective(l)?;
    let bar = bar_set(emb, l)?;
    let tc = two_char_check(emb.big(), &bar, None);
    let pred = two_char_prediction(emb.r(), emb.q(), m)?;
    let prediction_matches = tc.pass && (tc.alpha, tc.beta) == (Some(pred.0), Some(pred.1));
    let (dual_pass, point_pass) = (dual.pass, tc.pass);
    Ok(EquivalenceReport {
        relation: Equivalence::DualTwoCharacter,
        m,
        dual,
        point_side: PointSide::TwoCharacter(tc),
        predicted: vec![pred.0, pred.1],
        prediction_matches,
        dual_pass,
        point_pass,
        agree: dual_pass == point_pass,
    })
}

/// Both sides of a polar correspondence. `probes` optionally supplies the probe lines
/// (all t.i. lines for symplectic, all lines with their classes for parabolic).
pub fn verify_polar_equivalence(
    relation: Equivalence,
    l: &LineSet,
    bundle: &CompanionBundle,
    probes: Option<&[(Subspace, LineClass)]>,
) -> Result<EquivalenceReport> {
    if !bundle.commuting {
        return Err(Error::NotCompanion);
    }
    let kind = bundle.small.kind();
    let expected_kind = match relation {
        Equivalence::DualTwoCharacter => {
            return Err(Error::InvalidArgument("use the projective verifier".into()))
        }
        Equivalence::SymplecticHermitian | Equivalence::SymplecticLifted => PolarKind::Symplectic,
        Equivalence::ParabolicHermitian | Equivalence::ParabolicLifted => PolarKind::Parabolic,
    };
    if kind != expected_kind {
        return Err(Error::InvalidArgument(format!(
            "{relation:?} needs a {expected_kind} bundle, got {kind}"
        )));
    }
    let m = cover_profile_in(l, &bundle.small)?.require_m()?;
    let owned;
    let probes = match probes {
        Some(p) => p,
        None => {
            owned = match kind {
                PolarKind::Symplectic => bundle
                    .small
                    .ti_lines()
                    .into_iter()
                    .map(|s| (s, LineClass::Contained))
                    .collect(),
                _ => crate::covers::classified_lines(&bundle.small),
            };
            &owned[..]
        }
    };
    let dual = match relation {
        Equivalence::SymplecticHermitian | Equivalence::SymplecticLifted => {
            let lines: Vec<Subspace> = probes.iter().map(|(s, _)| s.clone()).collect();
            is_dual_symplectic_with(l, &bundle.small, &lines)?
        }
        Equivalence::ParabolicHermitian => {
            is_dual_parabolic_with(l, &bundle.small, ParabolicVariant::I, probes)?
        }
        _ => is_dual_parabolic_with(l, &bundle.small, ParabolicVariant::II, probes)?,
    };
    let q = bundle.q() as u64;
    let i = m as u64 * (q * q - q) + q + 1;
    let bar = bar_set(&bundle.emb, l)?;
    let ambient = match relation {
        Equivalence::SymplecticHermitian | Equivalence::ParabolicHermitian => &bundle.herm,
        _ => &bundle.big,
    };
    let tight = tight_check(ambient, &bar, Some(i))?;
    let (dual_pass, point_pass) = (dual.pass, tight.pass);
    Ok(EquivalenceReport {
        relation,
        m,
        dual,
        point_side: PointSide::Tight(tight),
        predicted: vec![i],
        prediction_matches: point_pass,
        dual_pass,
        point_pass,
        agree: dual_pass == point_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FieldTable;
    use crate::polar::{build_embedding, make_polar};

    fn pg(r: usize, q: usize) -> Arc<GeometryContext> {
        GeometryContext::shared(r, Arc::new(FieldTable::new(q).unwrap()))
    }

    #[test]
    fn identity_residual_vanishes_for_spread_values() {
        assert_eq!(identity_residual(3, 4, 25, 9, 5), 0);
        assert_ne!(identity_residual(3, 4, 25, 9, 6), 0);
    }

    #[test]
    fn spread_prediction() {
        assert_eq!(two_char_prediction(3, 2, 1).unwrap(), (9, 5));
        assert_eq!(predicted_bar_size(3, 2, 5), 25);
    }

    #[test]
    fn whole_space_is_not_two_character() {
        let ctx = pg(3, 4);
        let mut all = FixedBitSet::with_capacity(ctx.num_points());
        all.insert_range(..);
        let rep = two_char_check(&ctx, &all, None);
        assert!(!rep.pass);
        assert_eq!(rep.spectrum.keys().collect::<Vec<_>>(), vec![&21]);
    }

    #[test]
    fn all_lines_of_w32_give_hermitian_surface() {
        let bundle = CompanionBundle::new(make_polar(PolarKind::Symplectic, 3, 2).unwrap()).unwrap();
        assert!(bundle.commuting);
        let l = LineSet::new(bundle.small.ctx().clone(), bundle.small.ti_lines()).unwrap();
        let bar = bar_set(&bundle.emb, &l).unwrap();
        assert_eq!(bar.count_ones(..), 45);
        assert_eq!(&bar, bundle.herm.points());
    }

    #[test]
    fn lifted_subgeometry_is_q_plus_one_tight() {
        let bundle = CompanionBundle::new(make_polar(PolarKind::Symplectic, 3, 2).unwrap()).unwrap();
        let rep = tight_check(&bundle.herm, bundle.emb.fixed(), None).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.i, Some(3));
    }

    #[test]
    fn tight_rejects_points_off_the_space() {
        let h = make_polar(PolarKind::Hermitian, 3, 4).unwrap();
        let off = (0..h.ctx().num_points()).find(|&p| !h.contains_point(p)).unwrap();
        let mut x = FixedBitSet::with_capacity(h.ctx().num_points());
        x.insert(off);
        assert_eq!(tight_check(&h, &x, None).unwrap_err(), Error::NotInPolarSpace);
    }

    #[test]
    fn generator_is_one_tight() {
        let h = make_polar(PolarKind::Hermitian, 3, 4).unwrap();
        let line = h.ti_lines()[0].clone();
        let mut x = FixedBitSet::with_capacity(h.ctx().num_points());
        for p in h.ctx().points_of(&line) {
            x.insert(p);
        }
        assert_eq!(tight_check(&h, &x, None).unwrap().i, Some(1));
    }

    #[test]
    fn trivial_cover_has_one_hyperplane_size() {
        let emb = build_embedding(3, 2).unwrap();
        let lines = emb.small().enumerate_subspaces(1).unwrap().collect();
        let l = LineSet::new(emb.small().clone(), lines).unwrap();
        let rep = verify_dual_two_character(&l, &emb).unwrap();
        assert!(rep.dual_pass);
        assert!(!rep.point_pass);
        assert_eq!(rep.predicted, vec![21, 17]);
    }
}
