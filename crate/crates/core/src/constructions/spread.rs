//! Field reduction GF(q²)^k → GF(q)^{2k}, the Desarguesian line spread it induces,
//! and the trace forms that make that spread totally isotropic.

use std::sync::Arc;

use crate::covers::LineSet;
use crate::error::{Error, Result};
use crate::fields::ExtensionPair;
use crate::linalg;
use crate::polar::{symplectic_gram, PolarKind, PolarSpace};
use crate::projective::{for_each_normalized, GeometryContext, Subspace};

/// Coordinates read through the basis `{1, ω}` of GF(q²) over GF(q), then moved to a
/// frame in which the trace form `Tr(B)` is the canonical alternating form.
#[derive(Debug)]
pub struct FieldReduction {
    ext: Arc<ExtensionPair>,
    /// GF(q²)-dimension.
    k: usize,
    omega: u8,
    /// `split[x] = (a, b)` with `x = a + b ω`.
    split: Vec<(u8, u8)>,
    /// Rows are the canonical frame, in interleaved `(a_0, b_0, a_1, b_1, ...)` coordinates.
    frame: Vec<u8>,
    frame_inv: Vec<u8>,
    small: Arc<GeometryContext>,
}

impl FieldReduction {
    /// `k` must be even; `Tr(B)` with `B` the canonical alternating form on GF(q²)^k
    /// fixes the frame.
    pub fn new(k: usize, ext: Arc<ExtensionPair>) -> Result<Self> {
        if k == 0 || !k.is_multiple_of(2) {
            return Err(Error::InvalidArgument("field reduction needs even k".into()));
        }
        let ef = ext.ext().clone();
        let omega = ef.primitive();
        let mut split = vec![(0u8, 0u8); ef.q()];
        for a in ext.base().elements() {
            for b in ext.base().elements() {
                let x = ef.add(ext.embed(a), ef.mul(ext.embed(b), omega));
                split[x as usize] = (a, b);
            }
        }
        let n = 2 * k;
        let small = GeometryContext::shared(n - 1, ext.base().clone());
        let mut fr = FieldReduction {
            ext,
            k,
            omega,
            split,
            frame: linalg::identity(n),
            frame_inv: linalg::identity(n),
            small,
        };
        let raw = fr.raw_trace_gram(1);
        let frame = linalg::symplectic_frame(fr.base(), &raw, n)
            .ok_or_else(|| Error::Structural("trace form is degenerate".into()))?;
        fr.frame_inv = linalg::inverse(fr.base(), &frame, n).unwrap();
        fr.frame = frame;
        Ok(fr)
    }

    fn base(&self) -> &crate::fields::FieldTable {
        self.ext.base()
    }

    pub fn ext(&self) -> &Arc<ExtensionPair> {
        &self.ext
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn omega(&self) -> u8 {
        self.omega
    }

    /// PG(2k-1, q).
    pub fn small(&self) -> &Arc<GeometryContext> {
        &self.small
    }

    fn interleave(&self, v: &[u8]) -> Vec<u8> {
        v.iter()
            .flat_map(|&x| {
                let (a, b) = self.split[x as usize];
                [a, b]
            })
            .collect()
    }

    fn deinterleave(&self, w: &[u8]) -> Vec<u8> {
        let ef = self.ext.ext();
        w.chunks(2)
            .map(|ab| ef.add(self.ext.embed(ab[0]), ef.mul(self.ext.embed(ab[1]), self.omega)))
            .collect()
    }

    /// GF(q)-coordinates, in the canonical frame, of a GF(q²)-vector.
    pub fn reduce(&self, v: &[u8]) -> Vec<u8> {
        let raw = self.interleave(v);
        crate::constructions::singer::apply_rows(self.base(), &self.frame_inv, 2 * self.k, &raw)
    }

    /// Inverse of [`reduce`](Self::reduce).
    pub fn expand(&self, w: &[u8]) -> Vec<u8> {
        let raw = crate::constructions::singer::apply_rows(self.base(), &self.frame, 2 * self.k, w);
        self.deinterleave(&raw)
    }

    /// The GF(q)-subspace underlying a set of GF(q²)-vectors (flat rows).
    pub fn reduce_rows(&self, rows: &[u8]) -> Subspace {
        let ef = self.ext.ext();
        let mut out = Vec::new();
        for v in rows.chunks(self.k) {
            out.extend(self.reduce(v));
            let w: Vec<u8> = v.iter().map(|&x| ef.mul(x, self.omega)).collect();
            out.extend(self.reduce(&w));
        }
        self.small.subspace(&out)
    }

    /// `Tr(λ B(x, y))` as a Gram matrix in interleaved coordinates.
    fn raw_trace_gram(&self, lambda: u8) -> Vec<u8> {
        let n = 2 * self.k;
        let ef = self.ext.ext();
        let bgram = symplectic_gram(ef, self.k);
        let basis: Vec<Vec<u8>> = (0..n)
            .map(|i| {
                let mut e = vec![0u8; n];
                e[i] = 1;
                self.deinterleave(&e)
            })
            .collect();
        let mut g = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                let b = linalg::bilinear(ef, &bgram, &basis[i], &basis[j]);
                g[i * n + j] = self.ext.project(self.ext.trace(ef.mul(lambda, b))).unwrap();
            }
        }
        g
    }

    /// `Tr(λ B)` in the canonical frame; `λ = 1` gives the canonical alternating form.
    pub fn trace_gram(&self, lambda: u8) -> Vec<u8> {
        let n = 2 * self.k;
        let f = self.base();
        let raw = self.raw_trace_gram(lambda);
        let t = linalg::mat_mul(f, &self.frame, &raw, n);
        linalg::mat_mul(f, &t, &linalg::transpose(&self.frame, n), n)
    }

    /// Multiplication by ω as a row-acting GF(q)-linear map in the canonical frame.
    pub fn omega_matrix(&self) -> Vec<u8> {
        let n = 2 * self.k;
        let ef = self.ext.ext();
        let mut m = Vec::with_capacity(n * n);
        for i in 0..n {
            let mut e = vec![0u8; n];
            e[i] = 1;
            let v: Vec<u8> = self.expand(&e).iter().map(|&x| ef.mul(x, self.omega)).collect();
            m.extend(self.reduce(&v));
        }
        m
    }

    /// The θ_{k-1,q²} lines obtained from the points of PG(k-1,q²).
    pub fn spread(&self) -> Result<LineSet> {
        let mut lines = Vec::new();
        for_each_normalized(self.k, self.ext.ext().q(), |v| {
            lines.push(self.reduce_rows(v));
        });
        lines.sort();
        LineSet::new(self.small.clone(), lines)
    }
}

/// A line spread of PG(2k-1,q), totally isotropic in the canonical W(2k-1,q).
pub fn symplectic_spread(k: usize, q: usize) -> Result<(LineSet, PolarSpace)> {
    let fr = FieldReduction::new(k, Arc::new(ExtensionPair::new(q)?))?;
    let w = PolarSpace::with_gram(fr.small().clone(), PolarKind::Symplectic, fr.trace_gram(1))?;
    let spread = fr.spread()?;
    if spread.lines().iter().any(|l| !w.is_totally_isotropic(l)) {
        return Err(Error::Structural("spread line is not totally isotropic".into()));
    }
    Ok((spread, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::cover_profile_in;
    use crate::polar::make_polar;

    #[test]
    fn reduce_expand_round_trip() {
        let fr = FieldReduction::new(2, Arc::new(ExtensionPair::new(3).unwrap())).unwrap();
        for_each_normalized(2, 9, |v| assert_eq!(fr.expand(&fr.reduce(v)), v));
    }

    #[test]
    fn trace_form_is_canonical() {
        for q in [2, 3, 4] {
            let fr = FieldReduction::new(2, Arc::new(ExtensionPair::new(q).unwrap())).unwrap();
            let w = make_polar(PolarKind::Symplectic, 3, q).unwrap();
            assert_eq!(fr.trace_gram(1), w.gram());
        }
    }

    #[test]
    fn spread_of_w3q_is_a_one_cover() {
        for q in [2, 3, 4] {
            let (s, w) = symplectic_spread(2, q).unwrap();
            assert_eq!(s.len(), q * q + 1);
            assert_eq!(cover_profile_in(&s, &w).unwrap().m, Some(1));
        }
    }

    #[test]
    fn omega_matrix_has_order_q2_minus_1() {
        let fr = FieldReduction::new(2, Arc::new(ExtensionPair::new(2).unwrap())).unwrap();
        let f = fr.ext().base().clone();
        let m = fr.omega_matrix();
        let mut x = m.clone();
        for _ in 1..3 {
            x = linalg::mat_mul(&f, &x, &m, 4);
        }
        assert_eq!(x, linalg::identity(4));
    }
}
