//! Points and subspaces of PG(r,q).
//!
//! Points carry dense ids in lexicographic order of their normalized coordinate codes,
//! and subspaces are stored by their reduced row-echelon basis so that equality and
//! hashing are plain matrix comparisons.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fields::FieldTable;
use crate::linalg;

/// `q^n + ... + q + 1`, with `theta(-1, q) = 0`.
pub fn theta(n: i64, q: u64) -> Result<u64> {
    if n < -1 {
        return Err(Error::InvalidArgument(format!("theta undefined for n = {n}")));
    }
    Ok((0..=n).map(|i| q.pow(i as u32)).sum())
}

/// Number of `k`-dimensional vector subspaces of an `n`-dimensional space over GF(q).
pub fn gaussian(n: i64, k: i64, q: u64) -> Result<u64> {
    if k < 0 || n < 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "gaussian binomial needs 0 <= k <= n, got n = {n}, k = {k}"
        )));
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k as u32 {
        num *= q.pow(n as u32 - i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    Ok((num / den) as u64)
}

pub(crate) fn theta_u(n: usize, q: usize) -> usize {
    (0..=n).map(|i| q.pow(i as u32)).sum()
}

/// A normalized point together with its id.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    pub id: usize,
    pub coords: Vec<u8>,
}

/// PG(r,q) with a dense point index.
#[derive(Debug)]
pub struct GeometryContext {
    r: usize,
    n: usize,
    field: Arc<FieldTable>,
    coords: Vec<u8>,
    num_points: usize,
}

impl GeometryContext {
    pub fn new(r: usize, field: Arc<FieldTable>) -> Self {
        let n = r + 1;
        let q = field.q();
        let num_points = theta_u(r, q);
        let mut coords = Vec::with_capacity(num_points * n);
        for t in 0..=r {
            let pivot = r - t;
            let mut tail = vec![0u8; t];
            for _ in 0..q.pow(t as u32) {
                let start = coords.len();
                coords.resize(start + n, 0);
                coords[start + pivot] = 1;
                coords[start + pivot + 1..start + n].copy_from_slice(&tail);
                // big-endian increment
                for d in tail.iter_mut().rev() {
                    *d += 1;
                    if (*d as usize) < q {
                        break;
                    }
                    *d = 0;
                }
            }
        }
        debug_assert_eq!(coords.len(), num_points * n);
        GeometryContext {
            r,
            n,
            field,
            coords,
            num_points,
        }
    }

    pub fn shared(r: usize, field: Arc<FieldTable>) -> Arc<Self> {
        Arc::new(Self::new(r, field))
    }

    #[inline]
    pub fn r(&self) -> usize {
        self.r
    }

    /// Vector dimension `r + 1`.
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn q(&self) -> usize {
        self.field.q()
    }

    #[inline]
    pub fn field(&self) -> &Arc<FieldTable> {
        &self.field
    }

    #[inline]
    pub fn num_points(&self) -> usize {
        self.num_points
    }

    #[inline]
    pub fn point(&self, id: usize) -> &[u8] {
        &self.coords[id * self.n..(id + 1) * self.n]
    }

    /// All point coordinates, `n` codes per point in id order.
    pub fn all_coords(&self) -> &[u8] {
        &self.coords
    }

    /// Id of an already normalized vector.
    #[inline]
    pub fn id_of_normalized(&self, v: &[u8]) -> usize {
        let q = self.q();
        let pivot = v.iter().position(|&x| x != 0).expect("nonzero vector");
        let t = self.r - pivot;
        let mut id = theta_u(t.saturating_sub(1), q) * usize::from(t > 0);
        let mut tail = 0usize;
        for &x in &v[pivot + 1..] {
            tail = tail * q + x as usize;
        }
        id += tail;
        id
    }

    /// Id of the point spanned by `v`; `None` for the zero vector.
    pub fn point_id(&self, v: &[u8]) -> Option<usize> {
        let mut w = v.to_vec();
        linalg::normalize(&self.field, &mut w).then(|| self.id_of_normalized(&w))
    }

    pub fn enumerate_points(&self) -> Vec<ProjPoint> {
        (0..self.num_points)
            .map(|id| ProjPoint {
                id,
                coords: self.point(id).to_vec(),
            })
            .collect()
    }

    pub fn check(&self, s: &Subspace) -> Result<()> {
        if s.n != self.n || s.q != self.q() {
            return Err(Error::ContextMismatch(format!(
                "subspace of PG({},{}) used in PG({},{})",
                s.n as isize - 1,
                s.q,
                self.r,
                self.q()
            )));
        }
        Ok(())
    }

    /// Row space of `rows` in canonical form.
    pub fn subspace(&self, rows: &[u8]) -> Subspace {
        let mut m = rows.to_vec();
        linalg::rref(&self.field, &mut m, self.n);
        Subspace {
            n: self.n,
            q: self.q(),
            rows: m,
        }
    }

    pub fn subspace_of_points(&self, ids: &[usize]) -> Subspace {
        let mut rows = Vec::with_capacity(ids.len() * self.n);
        for &id in ids {
            rows.extend_from_slice(self.point(id));
        }
        self.subspace(&rows)
    }

    pub fn empty_subspace(&self) -> Subspace {
        Subspace {
            n: self.n,
            q: self.q(),
            rows: Vec::new(),
        }
    }

    pub fn whole_space(&self) -> Subspace {
        Subspace {
            n: self.n,
            q: self.q(),
            rows: linalg::identity(self.n),
        }
    }

    pub fn span(&self, a: &Subspace, b: &Subspace) -> Result<Subspace> {
        self.check(a)?;
        self.check(b)?;
        let mut rows = a.rows.clone();
        rows.extend_from_slice(&b.rows);
        Ok(self.subspace(&rows))
    }

    pub fn meet(&self, a: &Subspace, b: &Subspace) -> Result<Subspace> {
        self.check(a)?;
        self.check(b)?;
        let mut dual = self.annihilator(a);
        dual.extend_from_slice(&self.annihilator(b));
        Ok(self.subspace(&linalg::nullspace(&self.field, &dual, self.n)))
    }

    /// Basis of the linear functionals vanishing on `s`.
    pub fn annihilator(&self, s: &Subspace) -> Vec<u8> {
        linalg::nullspace(&self.field, &s.rows, self.n)
    }

    /// Subspace cut out by the given functionals.
    pub fn kernel(&self, functionals: &[u8]) -> Subspace {
        self.subspace(&linalg::nullspace(&self.field, functionals, self.n))
    }

    pub fn contains(&self, s: &Subspace, v: &[u8]) -> Result<bool> {
        self.check(s)?;
        if v.len() != self.n {
            return Err(Error::ContextMismatch("vector length".into()));
        }
        Ok(s.contains_vector(&self.field, v))
    }

    pub fn contains_point(&self, s: &Subspace, id: usize) -> bool {
        s.contains_vector(&self.field, self.point(id))
    }

    /// Ids of all points of `s`, ascending.
    pub fn points_of(&self, s: &Subspace) -> Vec<usize> {
        let k = s.rank();
        let mut out = Vec::with_capacity(theta_u(k.saturating_sub(1), self.q()));
        let mut v = vec![0u8; self.n];
        for_each_normalized(k, self.q(), |c| {
            v.iter_mut().for_each(|x| *x = 0);
            for (i, &ci) in c.iter().enumerate() {
                if ci == 0 {
                    continue;
                }
                for (j, x) in v.iter_mut().enumerate() {
                    *x = self.field.add(*x, self.field.mul(ci, s.rows[i * self.n + j]));
                }
            }
            // leading coordinate of a normalized combination of RREF rows is already 1
            out.push(self.id_of_normalized(&v));
        });
        out.sort_unstable();
        out
    }

    /// Every `d`-dimensional subspace exactly once, in a fixed order.
    pub fn enumerate_subspaces(&self, d: usize) -> Result<SubspaceIter> {
        if d > self.r {
            return Err(Error::InvalidArgument(format!(
                "no {d}-spaces in PG({},{})",
                self.r,
                self.q()
            )));
        }
        Ok(SubspaceIter::new(self.n, self.q(), d + 1))
    }

    pub fn line(&self, a: usize, b: usize) -> Subspace {
        self.subspace_of_points(&[a, b])
    }
}

/// Calls `f` on every normalized vector of GF(q)^k (leading nonzero entry 1).
pub fn for_each_normalized(k: usize, q: usize, mut f: impl FnMut(&[u8])) {
    let mut v = vec![0u8; k];
    for pivot in (0..k).rev() {
        v.iter_mut().for_each(|x| *x = 0);
        v[pivot] = 1;
        let t = k - pivot - 1;
        for _ in 0..q.pow(t as u32) {
            f(&v);
            for d in v[pivot + 1..].iter_mut().rev() {
                *d += 1;
                if (*d as usize) < q {
                    break;
                }
                *d = 0;
            }
        }
    }
}

/// A projective subspace in canonical reduced row-echelon form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    n: usize,
    q: usize,
    rows: Vec<u8>,
}

impl Subspace {
    /// Projective dimension; the empty subspace has dimension -1.
    pub fn dim(&self) -> isize {
        self.rank() as isize - 1
    }

    pub fn rank(&self) -> usize {
        self.rows.len() / self.n
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn rows(&self) -> &[u8] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.rows[i * self.n..(i + 1) * self.n]
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn pivots(&self) -> Vec<usize> {
        (0..self.rank())
            .map(|i| self.row(i).iter().position(|&x| x != 0).unwrap())
            .collect()
    }

    /// Membership of a vector in the row space.
    pub fn contains_vector(&self, f: &FieldTable, v: &[u8]) -> bool {
        let mut w = v.to_vec();
        for i in 0..self.rank() {
            let row = self.row(i);
            let p = row.iter().position(|&x| x != 0).unwrap();
            let c = w[p];
            if c == 0 {
                continue;
            }
            for (x, &y) in w.iter_mut().zip(row) {
                *x = f.sub(*x, f.mul(c, y));
            }
        }
        w.iter().all(|&x| x == 0)
    }

    pub fn contains_subspace(&self, f: &FieldTable, other: &Subspace) -> bool {
        (0..other.rank()).all(|i| self.contains_vector(f, other.row(i)))
    }
}

/// Echelon-pattern enumeration of the `k`-dimensional vector subspaces of GF(q)^n.
#[derive(Debug, Clone)]
pub struct SubspaceIter {
    n: usize,
    q: usize,
    k: usize,
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    digits: Vec<u8>,
    done: bool,
}

impl SubspaceIter {
    fn new(n: usize, q: usize, k: usize) -> Self {
        let mut it = SubspaceIter {
            n,
            q,
            k,
            pivots: (0..k).collect(),
            free: Vec::new(),
            digits: Vec::new(),
            done: k > n,
        };
        it.reset_free();
        it
    }

    fn reset_free(&mut self) {
        self.free.clear();
        for (i, &p) in self.pivots.iter().enumerate() {
            for c in p + 1..self.n {
                if !self.pivots.contains(&c) {
                    self.free.push((i, c));
                }
            }
        }
        self.digits = vec![0; self.free.len()];
    }

    fn advance_pivots(&mut self) -> bool {
        let k = self.k;
        let n = self.n;
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.pivots[i] < n - k + i {
                self.pivots[i] += 1;
                for j in i + 1..k {
                    self.pivots[j] = self.pivots[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for SubspaceIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if self.done {
            return None;
        }
        let mut rows = vec![0u8; self.k * self.n];
        for (i, &p) in self.pivots.iter().enumerate() {
            rows[i * self.n + p] = 1;
        }
        for (&(i, c), &d) in self.free.iter().zip(&self.digits) {
            rows[i * self.n + c] = d;
        }
        let out = Subspace {
            n: self.n,
            q: self.q,
            rows,
        };
        // advance
        let mut carried = true;
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if (*d as usize) < self.q {
                carried = false;
                break;
            }
            *d = 0;
        }
        if carried {
            if self.advance_pivots() {
                self.reset_free();
            } else {
                self.done = true;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::build_field;

    fn ctx(r: usize, q: usize) -> GeometryContext {
        GeometryContext::new(r, Arc::new(build_field(q).unwrap()))
    }

    #[test]
    fn theta_values() {
        assert_eq!(theta(-1, 5).unwrap(), 0);
        assert_eq!(theta(3, 2).unwrap(), 15);
        assert_eq!(theta(2, 9).unwrap(), 91);
        assert!(theta(-2, 3).is_err());
    }

    #[test]
    fn gaussian_values() {
        assert_eq!(gaussian(4, 2, 2).unwrap(), 35);
        assert_eq!(gaussian(6, 0, 7).unwrap(), 1);
        assert!(gaussian(2, 3, 2).is_err());
        assert!(gaussian(-1, 0, 2).is_err());
    }

    #[test]
    fn point_counts_and_order() {
        assert_eq!(ctx(2, 2).num_points(), 7);
        assert_eq!(ctx(3, 4).num_points(), 85);
        let c = ctx(5, 3);
        assert_eq!(c.num_points(), 364);
        for id in 1..c.num_points() {
            assert!(c.point(id - 1) < c.point(id));
        }
    }

    #[test]
    fn ids_round_trip() {
        let c = ctx(3, 4);
        for id in 0..c.num_points() {
            assert_eq!(c.id_of_normalized(c.point(id)), id);
        }
        let f = c.field().clone();
        let a = f.primitive();
        let v: Vec<u8> = c.point(40).iter().map(|&x| f.mul(x, a)).collect();
        assert_eq!(c.point_id(&v), Some(40));
        assert_eq!(c.point_id(&[0, 0, 0, 0]), None);
    }

    #[test]
    fn line_has_q_plus_one_points() {
        let c = ctx(3, 3);
        let l = c.line(3, 17);
        assert_eq!(l.dim(), 1);
        let pts = c.points_of(&l);
        assert_eq!(pts.len(), 4);
        assert!(pts.contains(&3) && pts.contains(&17));
    }

    #[test]
    fn hyperplane_meets_line_in_point() {
        let c = ctx(4, 3);
        let h = c.kernel(&[1, 0, 0, 0, 0]);
        assert_eq!(c.points_of(&h).len(), 40);
        let l = c.subspace(&[1, 0, 0, 0, 0, 0, 1, 0, 0, 0]);
        let m = c.meet(&h, &l).unwrap();
        assert_eq!(m.dim(), 0);
    }

    #[test]
    fn two_hyperplanes_of_pg53_meet_in_solid() {
        let c = ctx(5, 3);
        let a = c.kernel(&[1, 0, 0, 0, 0, 0]);
        let b = c.kernel(&[0, 1, 1, 0, 0, 0]);
        let m = c.meet(&a, &b).unwrap();
        assert_eq!(m.dim(), 3);
        assert_eq!(c.points_of(&m).len(), 40);
    }

    #[test]
    fn subspace_counts_match_gaussian() {
        for (r, q) in [(3, 2), (3, 3), (4, 2)] {
            let c = ctx(r, q);
            for d in 0..=r {
                let all: Vec<_> = c.enumerate_subspaces(d).unwrap().collect();
                let want = gaussian(r as i64 + 1, d as i64 + 1, q as u64).unwrap();
                assert_eq!(all.len() as u64, want, "PG({r},{q}) d={d}");
                let set: std::collections::HashSet<_> = all.iter().collect();
                assert_eq!(set.len(), all.len());
                // enumerated bases are already canonical
                for s in all.iter().take(50) {
                    assert_eq!(&c.subspace(s.rows()), s);
                }
            }
        }
    }

    #[test]
    fn larger_subspace_counts() {
        assert_eq!(ctx(4, 2).enumerate_subspaces(2).unwrap().count(), 155);
        assert_eq!(ctx(5, 3).enumerate_subspaces(3).unwrap().count(), 11011);
        let lines = ctx(6, 3).enumerate_subspaces(1).unwrap().count() as u64;
        assert_eq!(lines, gaussian(7, 2, 3).unwrap());
        assert_eq!(lines, 99463);
    }

    #[test]
    fn lines_through_each_point() {
        let c = ctx(3, 3);
        let mut per_point = vec![0usize; c.num_points()];
        for l in c.enumerate_subspaces(1).unwrap() {
            for p in c.points_of(&l) {
                per_point[p] += 1;
            }
        }
        assert!(per_point.iter().all(|&x| x == 13));
    }

    #[test]
    fn context_mismatch_is_rejected() {
        let a = ctx(3, 2);
        let b = ctx(3, 3);
        let s = b.line(0, 1);
        assert!(matches!(a.span(&s, &s), Err(Error::ContextMismatch(_))));
    }
}
