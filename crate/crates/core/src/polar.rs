//! Symplectic, parabolic and Hermitian polar spaces, their polarities, and the Baer
//! embedding PG(r,q) ⊂ PG(r,q²) with its involution τ.

use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{ExtensionPair, FieldTable};
use crate::linalg;
use crate::projective::{GeometryContext, Subspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PolarKind {
    Symplectic,
    Parabolic,
    Hermitian,
}

impl fmt::Display for PolarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PolarKind::Symplectic => "symplectic",
            PolarKind::Parabolic => "parabolic",
            PolarKind::Hermitian => "hermitian",
        })
    }
}

/// Canonical alternating Gram matrix `x_i y_{i+m} - x_{i+m} y_i`, `m = n/2`.
pub fn symplectic_gram(f: &FieldTable, n: usize) -> Vec<u8> {
    let m = n / 2;
    let mut g = vec![0u8; n * n];
    for i in 0..m {
        g[i * n + i + m] = 1;
        g[(i + m) * n + i] = f.neg(1);
    }
    g
}

/// Upper-triangular coefficients of `sum_{i<k} x_i x_{i+k+1} - x_k^2` on `n = 2k+1` coordinates.
pub fn parabolic_quad(f: &FieldTable, n: usize) -> Vec<u8> {
    let k = n / 2;
    let mut c = vec![0u8; n * n];
    for i in 0..k {
        c[i * n + i + k + 1] = 1;
    }
    c[k * n + k] = f.neg(1);
    c
}

/// A nondegenerate polar space inside a projective geometry.
#[derive(Debug, Clone)]
pub struct PolarSpace {
    ctx: Arc<GeometryContext>,
    kind: PolarKind,
    gram: Vec<u8>,
    quad: Option<Vec<u8>>,
    points: FixedBitSet,
    num_points: usize,
}

/// Canonical model of the given kind in PG(r, order). For Hermitian spaces `order` is
/// the square order q².
pub fn make_polar(kind: PolarKind, r: usize, order: usize) -> Result<PolarSpace> {
    let field = Arc::new(FieldTable::new(order)?);
    let n = r + 1;
    let ctx = GeometryContext::shared(r, field.clone());
    match kind {
        PolarKind::Symplectic => PolarSpace::with_gram(ctx, kind, symplectic_gram(&field, n)),
        PolarKind::Parabolic => {
            if field.p() == 2 {
                return Err(Error::InvalidPolar(
                    "parabolic spaces need odd q (use the quadric constructor for the nucleus case)"
                        .into(),
                ));
            }
            PolarSpace::from_quadric(ctx, parabolic_quad(&field, n))
        }
        PolarKind::Hermitian => PolarSpace::with_gram(ctx, kind, linalg::identity(n)),
    }
}

impl PolarSpace {
    /// A symplectic or Hermitian space from its Gram matrix.
    pub fn with_gram(ctx: Arc<GeometryContext>, kind: PolarKind, gram: Vec<u8>) -> Result<Self> {
        let f = ctx.field().clone();
        let n = ctx.n();
        if gram.len() != n * n {
            return Err(Error::InvalidPolar("Gram matrix has the wrong size".into()));
        }
        if !linalg::is_nonsingular(&f, &gram, n) {
            return Err(Error::InvalidPolar("Gram matrix is singular".into()));
        }
        match kind {
            PolarKind::Symplectic => {
                if ctx.r().is_multiple_of(2) {
                    return Err(Error::InvalidPolar("symplectic spaces need odd r".into()));
                }
                for i in 0..n {
                    if gram[i * n + i] != 0 {
                        return Err(Error::InvalidPolar("form is not alternating".into()));
                    }
                    for j in 0..n {
                        if gram[i * n + j] != f.neg(gram[j * n + i]) {
                            return Err(Error::InvalidPolar("form is not alternating".into()));
                        }
                    }
                }
            }
            PolarKind::Hermitian => {
                if !f.has_conj() {
                    return Err(Error::InvalidPolar(format!(
                        "Hermitian forms need a square field order, got {}",
                        f.q()
                    )));
                }
                for i in 0..n {
                    for j in 0..n {
                        if gram[j * n + i] != f.conj(gram[i * n + j]) {
                            return Err(Error::InvalidPolar("form is not Hermitian".into()));
                        }
                    }
                }
            }
            PolarKind::Parabolic => {
                return Err(Error::InvalidPolar(
                    "parabolic spaces are built from a quadratic form".into(),
                ))
            }
        }
        Ok(Self::finish(ctx, kind, gram, None))
    }

    /// A parabolic quadric from upper-triangular coefficients `c_ij` (`i <= j`) of
    /// `Q(x) = sum c_ij x_i x_j`. In even characteristic the polarization has a
    /// one-dimensional radical (the nucleus), which must not be singular.
    pub fn from_quadric(ctx: Arc<GeometryContext>, quad: Vec<u8>) -> Result<Self> {
        let f = ctx.field().clone();
        let n = ctx.n();
        if ctx.r() % 2 == 1 {
            return Err(Error::InvalidPolar("parabolic spaces need even r".into()));
        }
        if quad.len() != n * n || (0..n).any(|i| (0..i).any(|j| quad[i * n + j] != 0)) {
            return Err(Error::InvalidPolar(
                "quadratic form must be an upper-triangular coefficient matrix".into(),
            ));
        }
        let mut gram = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                gram[i * n + j] = f.add(quad[i * n + j], quad[j * n + i]);
            }
        }
        let radical = linalg::nullspace(&f, &gram, n);
        if f.p() == 2 {
            if radical.len() != n || quad_eval(&f, &quad, n, &radical) == 0 {
                return Err(Error::InvalidPolar("quadric is degenerate".into()));
            }
        } else if !radical.is_empty() {
            return Err(Error::InvalidPolar("quadric is degenerate".into()));
        }
        Ok(Self::finish(ctx, PolarKind::Parabolic, gram, Some(quad)))
    }

    fn finish(ctx: Arc<GeometryContext>, kind: PolarKind, gram: Vec<u8>, quad: Option<Vec<u8>>) -> Self {
        let mut ps = PolarSpace {
            points: FixedBitSet::with_capacity(ctx.num_points()),
            ctx,
            kind,
            gram,
            quad,
            num_points: 0,
        };
        let flags: Vec<bool> = (0..ps.ctx.num_points())
            .into_par_iter()
            .map(|id| ps.is_isotropic(ps.ctx.point(id)))
            .collect();
        for (id, on) in flags.into_iter().enumerate() {
            if on {
                ps.points.insert(id);
            }
        }
        ps.num_points = ps.points.count_ones(..);
        ps
    }

    pub fn ctx(&self) -> &Arc<GeometryContext> {
        &self.ctx
    }

    pub fn field(&self) -> &Arc<FieldTable> {
        self.ctx.field()
    }

    pub fn kind(&self) -> PolarKind {
        self.kind
    }

    pub fn r(&self) -> usize {
        self.ctx.r()
    }

    pub fn gram(&self) -> &[u8] {
        &self.gram
    }

    pub fn quad(&self) -> Option<&[u8]> {
        self.quad.as_deref()
    }

    /// Bitset of the isotropic (singular) points.
    pub fn points(&self) -> &FixedBitSet {
        &self.points
    }

    pub fn point_ids(&self) -> Vec<usize> {
        self.points.ones().collect()
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    pub fn contains_point(&self, id: usize) -> bool {
        self.points.contains(id)
    }

    /// Projective dimension of the generators.
    pub fn generator_dim(&self) -> usize {
        let r = self.r();
        match self.kind {
            PolarKind::Symplectic => (r - 1) / 2,
            PolarKind::Parabolic => r / 2 - 1,
            PolarKind::Hermitian => (r - 1) / 2,
        }
    }

    /// The linear functional `x -> form(x, v)`; its kernel is `v^⊥`.
    pub fn functional(&self, v: &[u8]) -> Vec<u8> {
        let f = self.field();
        match self.kind {
            PolarKind::Hermitian => {
                let c: Vec<u8> = v.iter().map(|&x| f.conj(x)).collect();
                linalg::mat_vec(f, &self.gram, self.ctx.n(), &c)
            }
            _ => linalg::mat_vec(f, &self.gram, self.ctx.n(), v),
        }
    }

    pub fn form(&self, x: &[u8], y: &[u8]) -> u8 {
        linalg::dot(self.field(), x, &self.functional(y))
    }

    pub fn is_isotropic(&self, v: &[u8]) -> bool {
        match self.kind {
            PolarKind::Symplectic => true,
            PolarKind::Parabolic => {
                quad_eval(self.field(), self.quad.as_ref().unwrap(), self.ctx.n(), v) == 0
            }
            PolarKind::Hermitian => self.form(v, v) == 0,
        }
    }

    pub fn perp(&self, s: &Subspace) -> Result<Subspace> {
        self.ctx.check(s)?;
        let mut funcs = Vec::with_capacity(s.rows().len());
        for i in 0..s.rank() {
            funcs.extend(self.functional(s.row(i)));
        }
        Ok(self.ctx.kernel(&funcs))
    }

    /// `P^⊥` for a point id.
    pub fn perp_point(&self, id: usize) -> Subspace {
        self.ctx.kernel(&self.functional(self.ctx.point(id)))
    }

    /// True when every vector of `s` is isotropic and any two are orthogonal.
    pub fn is_totally_isotropic(&self, s: &Subspace) -> bool {
        let k = s.rank();
        (0..k).all(|i| {
            self.is_isotropic(s.row(i))
                && (i + 1..k).all(|j| self.form(s.row(i), s.row(j)) == 0)
        })
    }

    /// All totally isotropic lines, ordered by their sorted point-id lists.
    pub fn ti_lines(&self) -> Vec<Subspace> {
        let ids = self.point_ids();
        let ctx = &self.ctx;
        let mut lines: Vec<(Vec<usize>, Subspace)> = ids
            .par_iter()
            .map(|&p| {
                let fp = self.functional(ctx.point(p));
                let mut seen = FixedBitSet::with_capacity(ctx.num_points());
                let mut out = Vec::new();
                for q in self.points.ones().skip_while(|&q| q <= p) {
                    if seen.contains(q) || linalg::dot(ctx.field(), ctx.point(q), &fp) != 0 {
                        continue;
                    }
                    let line = ctx.line(p, q);
                    let pts = ctx.points_of(&line);
                    for &x in &pts {
                        seen.insert(x);
                    }
                    if pts[0] == p {
                        out.push((pts, line));
                    }
                }
                out
            })
            .flatten()
            .collect();
        lines.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        lines.into_iter().map(|(_, l)| l).collect()
    }

    /// Label of a line by its number of points in the polar space.
    pub fn classify_line(&self, line: &Subspace) -> Result<LineClass> {
        self.ctx.check(line)?;
        if line.dim() != 1 {
            return Err(Error::NotALine);
        }
        let hits = self
            .ctx
            .points_of(line)
            .into_iter()
            .filter(|&p| self.points.contains(p))
            .count();
        let q = self.ctx.q();
        Ok(match hits {
            0 => LineClass::External,
            1 => LineClass::Tangent,
            h if h == q + 1 => LineClass::Contained,
            _ => LineClass::Secant,
        })
    }
}

/// `Q(v)` for upper-triangular coefficients.
pub fn quad_eval(f: &FieldTable, c: &[u8], n: usize, v: &[u8]) -> u8 {
    let mut acc = 0u8;
    for i in 0..n {
        if v[i] == 0 {
            continue;
        }
        let mut row = 0u8;
        for j in i..n {
            row = f.add(row, f.mul(c[i * n + j], v[j]));
        }
        acc = f.add(acc, f.mul(v[i], row));
    }
    acc
}

/// Position of a line relative to a quadric or Hermitian point set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LineClass {
    Contained,
    Tangent,
    Secant,
    External,
}

/// PG(r,q) embedded in PG(r,q²) as the fixed points of the coordinatewise Frobenius τ.
#[derive(Debug)]
pub struct BaerEmbedding {
    ext: Arc<ExtensionPair>,
    small: Arc<GeometryContext>,
    big: Arc<GeometryContext>,
    lift: Vec<u32>,
    descend: Vec<u32>,
    tau: Vec<u32>,
    fixed: FixedBitSet,
}

pub fn build_embedding(r: usize, q: usize) -> Result<BaerEmbedding> {
    BaerEmbedding::new(r, Arc::new(ExtensionPair::new(q)?))
}

const NONE: u32 = u32::MAX;

impl BaerEmbedding {
    pub fn new(r: usize, ext: Arc<ExtensionPair>) -> Result<Self> {
        let small = GeometryContext::shared(r, ext.base().clone());
        let big = GeometryContext::shared(r, ext.ext().clone());
        let lift: Vec<u32> = (0..small.num_points())
            .map(|id| {
                let v: Vec<u8> = small.point(id).iter().map(|&x| ext.embed(x)).collect();
                big.id_of_normalized(&v) as u32
            })
            .collect();
        let mut descend = vec![NONE; big.num_points()];
        let mut fixed = FixedBitSet::with_capacity(big.num_points());
        for (s, &b) in lift.iter().enumerate() {
            descend[b as usize] = s as u32;
            fixed.insert(b as usize);
        }
        let tau: Vec<u32> = (0..big.num_points())
            .into_par_iter()
            .map(|id| {
                let v: Vec<u8> = big.point(id).iter().map(|&x| ext.frob(x)).collect();
                big.id_of_normalized(&v) as u32
            })
            .collect();
        Ok(BaerEmbedding {
            ext,
            small,
            big,
            lift,
            descend,
            tau,
            fixed,
        })
    }

    pub fn ext(&self) -> &Arc<ExtensionPair> {
        &self.ext
    }

    pub fn small(&self) -> &Arc<GeometryContext> {
        &self.small
    }

    pub fn big(&self) -> &Arc<GeometryContext> {
        &self.big
    }

    pub fn q(&self) -> usize {
        self.small.q()
    }

    pub fn r(&self) -> usize {
        self.small.r()
    }

    #[inline]
    pub fn lift(&self, small_id: usize) -> usize {
        self.lift[small_id] as usize
    }

    /// Small id of a lifted point.
    #[inline]
    pub fn descend(&self, big_id: usize) -> Option<usize> {
        let s = self.descend[big_id];
        (s != NONE).then_some(s as usize)
    }

    #[inline]
    pub fn tau(&self, big_id: usize) -> usize {
        self.tau[big_id] as usize
    }

    /// Lifted points as a bitset over big ids.
    pub fn fixed(&self) -> &FixedBitSet {
        &self.fixed
    }

    pub fn is_real(&self, big_id: usize) -> bool {
        self.fixed.contains(big_id)
    }

    pub fn lift_vector(&self, v: &[u8]) -> Vec<u8> {
        v.iter().map(|&x| self.ext.embed(x)).collect()
    }

    pub fn tau_vector(&self, v: &[u8]) -> Vec<u8> {
        v.iter().map(|&x| self.ext.frob(x)).collect()
    }

    pub fn lift_subspace(&self, s: &Subspace) -> Result<Subspace> {
        self.small.check(s)?;
        Ok(self.big.subspace(&self.lift_vector(s.rows())))
    }

    /// The small subspace whose extension is `s`, if `s` is τ-invariant.
    pub fn descend_subspace(&self, s: &Subspace) -> Result<Option<Subspace>> {
        self.big.check(s)?;
        let mut rows = Vec::with_capacity(s.rows().len());
        for &x in s.rows() {
            match self.ext.project(x) {
                Some(b) => rows.push(b),
                None => return Ok(None),
            }
        }
        Ok(Some(self.small.subspace(&rows)))
    }

    pub fn tau_subspace(&self, s: &Subspace) -> Result<Subspace> {
        self.big.check(s)?;
        Ok(self.big.subspace(&self.tau_vector(s.rows())))
    }

    /// The line of PG(r,q²) sharing `q+1` points with the given line of PG(r,q).
    pub fn extend_line(&self, line: &Subspace) -> Result<Subspace> {
        self.small.check(line)?;
        if line.dim() != 1 {
            return Err(Error::NotALine);
        }
        self.lift_subspace(line)
    }

    /// For a point off the subgeometry, the unique small line whose extension
    /// contains it: the descent of `⟨P, τ(P)⟩`.
    pub fn real_line_through(&self, big_id: usize) -> Option<Subspace> {
        if self.is_real(big_id) {
            return None;
        }
        let l = self.big.line(big_id, self.tau(big_id));
        self.descend_subspace(&l).ok().flatten()
    }

    /// A polar space over GF(q²) with the small space's form read verbatim.
    pub fn lift_polar(&self, small: &PolarSpace) -> Result<PolarSpace> {
        if small.ctx().n() != self.small.n() || small.ctx().q() != self.q() {
            return Err(Error::ContextMismatch("polar space is not over the small geometry".into()));
        }
        let lift = |m: &[u8]| m.iter().map(|&x| self.ext.embed(x)).collect::<Vec<u8>>();
        match small.kind() {
            PolarKind::Parabolic => {
                PolarSpace::from_quadric(self.big.clone(), lift(small.quad().unwrap()))
            }
            kind => PolarSpace::with_gram(self.big.clone(), kind, lift(small.gram())),
        }
    }

    /// The Hermitian space over GF(q²) whose polarity commutes with the lifted
    /// polarity of `small`, the product being τ.
    pub fn companion_hermitian(&self, small: &PolarSpace) -> Result<PolarSpace> {
        let ef = self.ext.ext().clone();
        let q = self.q();
        let lifted: Vec<u8> = small.gram().iter().map(|&x| self.ext.embed(x)).collect();
        let gram = match small.kind() {
            PolarKind::Symplectic => {
                // a scalar with eps^q = -eps turns an alternating matrix Hermitian
                let eps = if ef.p() == 2 {
                    1
                } else {
                    ef.exp(q.div_ceil(2))
                };
                lifted.iter().map(|&x| ef.mul(eps, x)).collect()
            }
            PolarKind::Parabolic if ef.p() != 2 => lifted,
            _ => return Err(Error::NotCompanion),
        };
        PolarSpace::with_gram(self.big.clone(), PolarKind::Hermitian, gram)
    }
}

/// Whether the polarities of `bilinear` (symplectic or orthogonal, over GF(q²)) and
/// `herm` compose to τ in both orders, checked on every point of the big space.
pub fn check_commuting(emb: &BaerEmbedding, bilinear: &PolarSpace, herm: &PolarSpace) -> Result<bool> {
    let big = emb.big();
    for ps in [bilinear, herm] {
        if ps.ctx().n() != big.n() || ps.ctx().q() != big.q() {
            return Err(Error::ContextMismatch("polar space is not over the big geometry".into()));
        }
    }
    if herm.kind() != PolarKind::Hermitian || bilinear.kind() == PolarKind::Hermitian {
        return Err(Error::ContextMismatch("expected one bilinear and one Hermitian form".into()));
    }
    let f = big.field().clone();
    let n = big.n();
    let Some(gb_inv) = linalg::inverse(&f, bilinear.gram(), n) else {
        return Ok(false);
    };
    let Some(gh_inv) = linalg::inverse(&f, herm.gram(), n) else {
        return Ok(false);
    };
    let ok = (0..big.num_points()).into_par_iter().all(|id| {
        let p = big.point(id);
        let t = emb.tau(id);
        // pole of the hyperplane P^{⊥h} under ⊥
        let c = herm.functional(p);
        let r1 = linalg::mat_vec(&f, &gb_inv, n, &c);
        // pole of P^⊥ under ⊥h: G_h conj(R) = G_b P
        let d = linalg::mat_vec(&f, &gh_inv, n, &bilinear.functional(p));
        let r2: Vec<u8> = d.iter().map(|&x| f.conj(x)).collect();
        big.point_id(&r1) == Some(t) && big.point_id(&r2) == Some(t)
    });
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::theta;

    #[test]
    fn canonical_point_counts() {
        assert_eq!(make_polar(PolarKind::Symplectic, 3, 2).unwrap().num_points(), 15);
        assert_eq!(make_polar(PolarKind::Parabolic, 4, 3).unwrap().num_points(), 40);
        assert_eq!(make_polar(PolarKind::Parabolic, 6, 3).unwrap().num_points(), 364);
        assert_eq!(make_polar(PolarKind::Hermitian, 3, 4).unwrap().num_points(), 45);
        assert_eq!(make_polar(PolarKind::Hermitian, 4, 9).unwrap().num_points(), 2440);
    }

    #[test]
    fn parity_and_kind_errors() {
        assert!(make_polar(PolarKind::Symplectic, 4, 3).is_err());
        assert!(make_polar(PolarKind::Parabolic, 5, 3).is_err());
        assert!(make_polar(PolarKind::Parabolic, 4, 2).is_err());
        assert!(make_polar(PolarKind::Hermitian, 3, 3).is_err());
    }

    #[test]
    fn even_characteristic_quadric_has_nucleus() {
        let f = Arc::new(FieldTable::new(2).unwrap());
        let ctx = GeometryContext::shared(6, f.clone());
        let ps = PolarSpace::from_quadric(ctx.clone(), parabolic_quad(&f, 7)).unwrap();
        assert_eq!(ps.num_points(), 63);
        let nucleus = ctx.point_id(&[0, 0, 0, 1, 0, 0, 0]).unwrap();
        assert_eq!(ps.perp_point(nucleus).dim(), 6);
    }

    #[test]
    fn perp_is_an_involution_reversing_dimension() {
        for (kind, r, q) in [
            (PolarKind::Symplectic, 3, 2),
            (PolarKind::Symplectic, 3, 3),
            (PolarKind::Parabolic, 4, 3),
            (PolarKind::Symplectic, 5, 2),
            (PolarKind::Hermitian, 3, 4),
        ] {
            let ps = make_polar(kind, r, q).unwrap();
            for d in 0..r {
                for s in ps.ctx().enumerate_subspaces(d).unwrap().take(300) {
                    let p = ps.perp(&s).unwrap();
                    assert_eq!(p.dim(), r as isize - 1 - d as isize);
                    assert_eq!(ps.perp(&p).unwrap(), s);
                }
            }
        }
    }

    #[test]
    fn hermitian_isotropy_matches_self_perp() {
        let ps = make_polar(PolarKind::Hermitian, 3, 4).unwrap();
        for id in 0..ps.ctx().num_points() {
            let on = ps.ctx().contains_point(&ps.perp_point(id), id);
            assert_eq!(on, ps.contains_point(id));
        }
    }

    #[test]
    fn ti_line_counts() {
        assert_eq!(make_polar(PolarKind::Symplectic, 3, 2).unwrap().ti_lines().len(), 15);
        assert_eq!(make_polar(PolarKind::Parabolic, 4, 3).unwrap().ti_lines().len(), 40);
        assert_eq!(make_polar(PolarKind::Hermitian, 3, 4).unwrap().ti_lines().len(), 27);
    }

    #[test]
    fn line_classes_of_q43_partition_all_lines() {
        let ps = make_polar(PolarKind::Parabolic, 4, 3).unwrap();
        let mut counts = std::collections::BTreeMap::new();
        for l in ps.ctx().enumerate_subspaces(1).unwrap() {
            *counts.entry(ps.classify_line(&l).unwrap()).or_insert(0usize) += 1;
        }
        assert_eq!(counts.values().sum::<usize>(), 1210);
        assert_eq!(counts[&LineClass::Contained], 40);
    }

    #[test]
    fn embedding_fixed_points_and_extension() {
        let emb = build_embedding(3, 2).unwrap();
        assert_eq!(emb.fixed().count_ones(..), 15);
        for id in 0..emb.big().num_points() {
            assert_eq!(emb.tau(emb.tau(id)), id);
            assert_eq!(emb.tau(id) == id, emb.is_real(id));
        }
        for l in emb.small().enumerate_subspaces(1).unwrap() {
            let e = emb.extend_line(&l).unwrap();
            let pts = emb.big().points_of(&e);
            assert_eq!(pts.len(), 5);
            let real: Vec<usize> = pts.iter().filter_map(|&p| emb.descend(p)).collect();
            assert_eq!(real, emb.small().points_of(&l));
            assert_eq!(emb.tau_subspace(&e).unwrap(), e);
        }
        for l in emb.big().enumerate_subspaces(1).unwrap() {
            let k = emb.big().points_of(&l).iter().filter(|&&p| emb.is_real(p)).count();
            assert!(k == 0 || k == 1 || k == 3);
        }
    }

    #[test]
    fn real_line_through_unreal_point() {
        let emb = build_embedding(3, 3).unwrap();
        for id in (0..emb.big().num_points()).filter(|&p| !emb.is_real(p)).step_by(37) {
            let l = emb.real_line_through(id).unwrap();
            let e = emb.extend_line(&l).unwrap();
            assert!(emb.big().contains_point(&e, id));
        }
    }

    #[test]
    fn companion_pairs_commute() {
        for (kind, r, q) in [(PolarKind::Symplectic, 3, 2), (PolarKind::Symplectic, 3, 3), (PolarKind::Parabolic, 4, 3)] {
            let emb = build_embedding(r, q).unwrap();
            let small = make_polar(kind, r, q).unwrap();
            let big = emb.lift_polar(&small).unwrap();
            let herm = emb.companion_hermitian(&small).unwrap();
            assert!(check_commuting(&emb, &big, &herm).unwrap());
            // P^⊥ = P^{⊥h} for real points
            for s in 0..emb.small().num_points() {
                let b = emb.lift(s);
                assert_eq!(big.perp_point(b), herm.perp_point(b));
            }
        }
    }

    #[test]
    fn mismatched_pair_does_not_commute() {
        let emb = build_embedding(3, 2).unwrap();
        let big = emb.lift_polar(&make_polar(PolarKind::Symplectic, 3, 2).unwrap()).unwrap();
        let herm = PolarSpace::with_gram(emb.big().clone(), PolarKind::Hermitian, linalg::identity(4)).unwrap();
        assert!(!check_commuting(&emb, &big, &herm).unwrap());
    }

    #[test]
    fn hermitian_meets_subgeometry_in_quadric() {
        let emb = build_embedding(4, 3).unwrap();
        let q43 = make_polar(PolarKind::Parabolic, 4, 3).unwrap();
        let herm = emb.companion_hermitian(&q43).unwrap();
        let real_on_h = emb.fixed().ones().filter(|&b| herm.contains_point(b)).count();
        assert_eq!(real_on_h, q43.num_points());
        assert_eq!(q43.num_points() as u64, theta(3, 3).unwrap());
    }

    #[test]
    fn tangent_lines_extend_to_tangent_lines() {
        let emb = build_embedding(4, 3).unwrap();
        let q43 = make_polar(PolarKind::Parabolic, 4, 3).unwrap();
        let herm = emb.companion_hermitian(&q43).unwrap();
        for l in emb.small().enumerate_subspaces(1).unwrap() {
            if q43.classify_line(&l).unwrap() == LineClass::Tangent {
                let e = emb.extend_line(&l).unwrap();
                assert_eq!(herm.classify_line(&e).unwrap(), LineClass::Tangent);
            }
        }
    }
}
