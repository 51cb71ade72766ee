//! Singer cycles of PG(r,q) from primitive polynomials, and their orbits on lines.

use std::collections::HashSet;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::covers::LineSet;
use crate::error::{Error, Result};
use crate::fields::FieldTable;
use crate::polar::BaerEmbedding;
use crate::projective::{theta, GeometryContext, Subspace};

/// Monic primitive polynomials as `(q, [c_0, ..., c_{d-1}])` for `x^d + ... + c_0`.
/// Coefficients are field codes.
const PRIMITIVE: &[(usize, &[u8])] = &[
    (2, &[1, 1]),
    (2, &[1, 1, 0]),
    (2, &[1, 1, 0, 0]),
    (2, &[1, 0, 1, 0, 0]),
    (2, &[1, 1, 0, 0, 0, 0]),
    (2, &[1, 1, 0, 0, 0, 0, 0]),
    (2, &[1, 0, 1, 1, 1, 0, 0, 0]),
    (3, &[2, 1]),
    (3, &[1, 2, 0]),
    (3, &[2, 1, 0, 0]),
    (3, &[1, 2, 0, 0, 0]),
    (4, &[2, 1]),
    (4, &[2, 1, 1]),
    (5, &[2, 1]),
    (5, &[2, 3, 0]),
    (5, &[2, 2, 1, 0]),
];

pub fn primitive_polynomial(degree: usize, q: usize) -> Result<&'static [u8]> {
    PRIMITIVE
        .iter()
        .find(|(pq, c)| *pq == q && c.len() == degree)
        .map(|(_, c)| *c)
        .ok_or(Error::MissingPolynomial { degree, q })
}

/// Multiplication by a root of a monic polynomial, as a collineation of PG(r,q).
#[derive(Debug, Clone)]
pub struct SingerCycle {
    ctx: Arc<GeometryContext>,
    poly: Vec<u8>,
    /// Row i is the image of the i-th basis vector; vectors act on the left.
    matrix: Vec<u8>,
    perm: Vec<u32>,
}

pub fn singer_cycle(r: usize, q: usize) -> Result<SingerCycle> {
    let poly = primitive_polynomial(r + 1, q)?;
    let ctx = GeometryContext::shared(r, Arc::new(FieldTable::new(q)?));
    let c = SingerCycle::with_polynomial(ctx, poly)?;
    if !c.is_regular() {
        return Err(Error::Structural(format!("polynomial {poly:?} over GF({q}) is not primitive")));
    }
    Ok(c)
}

impl SingerCycle {
    /// The companion collineation of `x^{r+1} + c_r x^r + ... + c_0`. No primitivity check.
    pub fn with_polynomial(ctx: Arc<GeometryContext>, poly: &[u8]) -> Result<Self> {
        let n = ctx.n();
        let f = ctx.field().clone();
        if poly.len() != n {
            return Err(Error::InvalidArgument(format!("need a degree-{n} polynomial")));
        }
        for &c in poly {
            f.check_code(c as usize)?;
        }
        if poly[0] == 0 {
            return Err(Error::InvalidArgument("constant term must be nonzero".into()));
        }
        let mut matrix = vec![0u8; n * n];
        for i in 0..n - 1 {
            matrix[i * n + i + 1] = 1;
        }
        for j in 0..n {
            matrix[(n - 1) * n + j] = f.neg(poly[j]);
        }
        let mut c = SingerCycle {
            ctx: ctx.clone(),
            poly: poly.to_vec(),
            matrix,
            perm: Vec::new(),
        };
        c.perm = (0..ctx.num_points())
            .map(|p| {
                let mut v = c.apply(ctx.point(p));
                crate::linalg::normalize(&f, &mut v);
                ctx.id_of_normalized(&v) as u32
            })
            .collect();
        Ok(c)
    }

    pub fn ctx(&self) -> &Arc<GeometryContext> {
        &self.ctx
    }

    pub fn polynomial(&self) -> &[u8] {
        &self.poly
    }

    pub fn matrix(&self) -> &[u8] {
        &self.matrix
    }

    pub fn apply(&self, v: &[u8]) -> Vec<u8> {
        apply_rows(self.ctx.field(), &self.matrix, self.ctx.n(), v)
    }

    pub fn apply_point(&self, p: usize) -> usize {
        self.perm[p] as usize
    }

    pub fn apply_subspace(&self, s: &Subspace) -> Subspace {
        let n = self.ctx.n();
        let rows: Vec<u8> = s.rows().chunks(n).flat_map(|r| self.apply(r)).collect();
        self.ctx.subspace(&rows)
    }

    pub fn point_orbit(&self, p: usize) -> Vec<usize> {
        let mut out = vec![p];
        let mut x = self.apply_point(p);
        while x != p {
            out.push(x);
            x = self.apply_point(x);
        }
        out
    }

    /// Whether the cyclic group acts regularly on points.
    pub fn is_regular(&self) -> bool {
        self.point_orbit(0).len() == self.ctx.num_points()
    }

    /// Orbits on lines, ordered by size and then by their first line.
    pub fn line_orbits(&self) -> Result<Vec<LineSet>> {
        let mut seen: HashSet<Subspace> = HashSet::new();
        let mut orbits = Vec::new();
        for line in self.ctx.enumerate_subspaces(1)? {
            if seen.contains(&line) {
                continue;
            }
            let mut orbit = vec![line.clone()];
            seen.insert(line.clone());
            let mut x = self.apply_subspace(&line);
            while x != line {
                seen.insert(x.clone());
                orbit.push(x.clone());
                x = self.apply_subspace(&x);
            }
            orbit.sort();
            orbits.push(orbit);
        }
        orbits.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a[0].cmp(&b[0])));
        orbits
            .into_iter()
            .map(|o| LineSet::new(self.ctx.clone(), o))
            .collect()
    }
}

pub(crate) fn apply_rows(f: &FieldTable, m: &[u8], n: usize, v: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; n];
    for (i, &c) in v.iter().enumerate() {
        if c == 0 {
            continue;
        }
        for j in 0..n {
            out[j] = f.add(out[j], f.mul(c, m[i * n + j]));
        }
    }
    out
}

/// Orbits of a Singer cycle of PG(r,q), r odd, acting on PG(r,q²).
#[derive(Debug, Clone)]
pub struct BigPartition {
    /// The two invariant (r-1)/2-spaces, as sorted point lists.
    pub invariant_spaces: Vec<Vec<usize>>,
    /// The remaining orbits, each a Baer subgeometry.
    pub baer_orbits: Vec<Vec<usize>>,
}

pub fn big_partition(cycle: &SingerCycle, emb: &BaerEmbedding) -> Result<BigPartition> {
    let r = emb.r();
    let q = emb.q() as u64;
    if r.is_multiple_of(2) || cycle.ctx().r() != r || cycle.ctx().q() != emb.q() {
        return Err(Error::InvalidArgument("needs r odd and a matching cycle".into()));
    }
    let big = emb.big();
    let f = big.field().clone();
    let m: Vec<u8> = cycle.matrix().iter().map(|&x| emb.ext().embed(x)).collect();
    let n = big.n();
    let step = |p: usize| {
        let mut v = apply_rows(&f, &m, n, big.point(p));
        crate::linalg::normalize(&f, &mut v);
        big.id_of_normalized(&v)
    };
    let half = theta((r as i64 - 1) / 2, q * q)? as usize;
    let full = theta(r as i64, q)? as usize;
    let mut seen = FixedBitSet::with_capacity(big.num_points());
    let mut out = BigPartition {
        invariant_spaces: Vec::new(),
        baer_orbits: Vec::new(),
    };
    for p in 0..big.num_points() {
        if seen.contains(p) {
            continue;
        }
        let mut orbit = vec![p];
        seen.insert(p);
        let mut x = step(p);
        while x != p {
            seen.insert(x);
            orbit.push(x);
            x = step(x);
        }
        orbit.sort_unstable();
        if orbit.len() == half {
            let span = big.subspace_of_points(&orbit);
            if span.dim() != (r as isize - 1) / 2 {
                return Err(Error::Structural("short orbit is not a subspace".into()));
            }
            out.invariant_spaces.push(orbit);
        } else if orbit.len() == full {
            if !is_baer_subgeometry(big, &orbit, emb.q()) {
                return Err(Error::Structural("long orbit is not a Baer subgeometry".into()));
            }
            out.baer_orbits.push(orbit);
        } else {
            return Err(Error::Structural(format!("unexpected orbit size {}", orbit.len())));
        }
    }
    let want = (q as usize - 1) * half;
    if out.invariant_spaces.len() != 2 || out.baer_orbits.len() != want {
        return Err(Error::Structural(format!(
            "expected 2 subspaces and {want} Baer subgeometries, got {} and {}",
            out.invariant_spaces.len(),
            out.baer_orbits.len()
        )));
    }
    Ok(out)
}

/// A spanning set of θ_{r,q} points of PG(r,q²) meeting every line through two of its
/// points in exactly q+1 points.
pub fn is_baer_subgeometry(big: &GeometryContext, pts: &[usize], q: usize) -> bool {
    let r = big.r();
    if pts.len() != theta(r as i64, q as u64).unwrap() as usize
        || big.subspace_of_points(pts).dim() != r as isize
    {
        return false;
    }
    let mut set = FixedBitSet::with_capacity(big.num_points());
    pts.iter().for_each(|&p| set.insert(p));
    for (i, &a) in pts.iter().enumerate() {
        for &b in &pts[i + 1..] {
            let on = big.points_of(&big.line(a, b)).into_iter().filter(|&x| set.contains(x)).count();
            if on != q + 1 {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polar::build_embedding;

    #[test]
    fn table_entries_are_primitive() {
        for (q, c) in PRIMITIVE {
            let r = c.len() - 1;
            if r == 0 || theta(r as i64, *q as u64).unwrap() > 200_000 {
                continue;
            }
            let ctx = GeometryContext::shared(r, Arc::new(FieldTable::new(*q).unwrap()));
            let s = SingerCycle::with_polynomial(ctx, c).unwrap();
            assert!(s.is_regular(), "q={q} {c:?}");
        }
    }

    #[test]
    fn point_orbits() {
        assert_eq!(singer_cycle(3, 2).unwrap().point_orbit(0).len(), 15);
        assert_eq!(singer_cycle(4, 2).unwrap().point_orbit(0).len(), 31);
    }

    #[test]
    fn non_primitive_control_is_not_regular() {
        let ctx = GeometryContext::shared(3, Arc::new(FieldTable::new(2).unwrap()));
        let s = SingerCycle::with_polynomial(ctx, &[1, 1, 1, 1]).unwrap();
        assert!(!s.is_regular());
        assert_eq!(s.point_orbit(0).len(), 5);
    }

    #[test]
    fn line_orbit_sizes() {
        let sizes = |r, q| {
            singer_cycle(r, q)
                .unwrap()
                .line_orbits()
                .unwrap()
                .iter()
                .map(|o| o.len())
                .collect::<Vec<_>>()
        };
        assert_eq!(sizes(3, 2), vec![5, 15, 15]);
        assert_eq!(sizes(4, 2), vec![31; 5]);
        assert_eq!(sizes(3, 3), vec![10, 40, 40, 40]);
    }

    #[test]
    fn big_space_partition_pg32() {
        let c = singer_cycle(3, 2).unwrap();
        let emb = build_embedding(3, 2).unwrap();
        let part = big_partition(&c, &emb).unwrap();
        assert_eq!(part.invariant_spaces.len(), 2);
        assert_eq!(part.baer_orbits.len(), 5);
        // the lifted PG(3,2) is itself one of the orbits
        let lifted: Vec<usize> = emb.fixed().ones().collect();
        assert!(part.baer_orbits.contains(&lifted));
    }
}
