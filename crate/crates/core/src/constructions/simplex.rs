//! Tight sets of H(n,q²) carried by the secant lines joining points of a self-polar
//! simplex of the form `Σ x_i^{q+1}`.

use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::analysis::{tight_check, TightReport};
use crate::error::{Error, Result};
use crate::polar::{make_polar, PolarKind, PolarSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SimplexConfig {
    H44L1,
    H44L2,
    H44Both,
    H49All10,
    H64All21,
}

/// Simplex vertices are numbered from 1 as in `U_1 .. U_{n+1}`.
const L1: [(usize, usize); 5] = [(1, 4), (1, 5), (3, 5), (2, 4), (2, 3)];
const L2: [(usize, usize); 5] = [(4, 5), (3, 4), (1, 3), (2, 5), (1, 2)];

impl SimplexConfig {
    pub const ALL: [SimplexConfig; 5] = [
        SimplexConfig::H44L1,
        SimplexConfig::H44L2,
        SimplexConfig::H44Both,
        SimplexConfig::H49All10,
        SimplexConfig::H64All21,
    ];

    /// `(r, q)` of the ambient H(r,q²).
    pub fn ambient(self) -> (usize, usize) {
        match self {
            SimplexConfig::H44L1 | SimplexConfig::H44L2 | SimplexConfig::H44Both => (4, 2),
            SimplexConfig::H49All10 => (4, 3),
            SimplexConfig::H64All21 => (6, 2),
        }
    }

    pub fn pairs(self) -> Vec<(usize, usize)> {
        let all = |k: usize| {
            (1..=k)
                .flat_map(|i| (i + 1..=k).map(move |j| (i, j)))
                .collect::<Vec<_>>()
        };
        match self {
            SimplexConfig::H44L1 => L1.to_vec(),
            SimplexConfig::H44L2 => L2.to_vec(),
            SimplexConfig::H44Both => L1.iter().chain(&L2).copied().collect(),
            SimplexConfig::H49All10 => all(5),
            SimplexConfig::H64All21 => all(7),
        }
    }

    /// Expected tight parameter.
    pub fn expected_i(self) -> u64 {
        match self {
            SimplexConfig::H44L1 | SimplexConfig::H44L2 | SimplexConfig::H64All21 => 3,
            SimplexConfig::H44Both => 6,
            SimplexConfig::H49All10 => 4,
        }
    }
}

impl fmt::Display for SimplexConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SimplexConfig::H44L1 => "H44-L1",
            SimplexConfig::H44L2 => "H44-L2",
            SimplexConfig::H44Both => "H44-both",
            SimplexConfig::H49All10 => "H49-all10",
            SimplexConfig::H64All21 => "H64-all21",
        })
    }
}

impl FromStr for SimplexConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SimplexConfig::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown simplex config {s}")))
    }
}

#[derive(Debug)]
pub struct SimplexModel {
    pub config: SimplexConfig,
    pub hermitian: PolarSpace,
    /// Point ids of `U_1 .. U_{n+1}`.
    pub vertices: Vec<usize>,
    pub points: FixedBitSet,
    pub tight: TightReport,
}

pub fn simplex_tight(config: SimplexConfig) -> Result<SimplexModel> {
    let (r, q) = config.ambient();
    let h = make_polar(PolarKind::Hermitian, r, q * q)?;
    let ctx = h.ctx().clone();
    let n = ctx.n();
    let vertices: Vec<usize> = (0..n)
        .map(|i| {
            let mut v = vec![0u8; n];
            v[i] = 1;
            ctx.id_of_normalized(&v)
        })
        .collect();
    for (i, &u) in vertices.iter().enumerate() {
        let perp = h.perp_point(u);
        let omits_u = (0..n).all(|j| {
            let mut v = vec![0u8; n];
            v[j] = 1;
            ctx.contains(&perp, &v).unwrap() == (j != i)
        });
        if !omits_u {
            return Err(Error::Structural("simplex is not self-polar".into()));
        }
    }
    let mut points = FixedBitSet::with_capacity(ctx.num_points());
    for (a, b) in config.pairs() {
        let line = ctx.line(vertices[a - 1], vertices[b - 1]);
        let on: Vec<usize> = ctx
            .points_of(&line)
            .into_iter()
            .filter(|&p| h.contains_point(p))
            .collect();
        if on.len() != q + 1 {
            return Err(Error::Structural(format!("U{a}U{b} is not a secant line")));
        }
        for p in on {
            points.insert(p);
        }
    }
    let tight = tight_check(&h, &points, None)?;
    Ok(SimplexModel {
        config,
        hermitian: h,
        vertices,
        points,
        tight,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h44_sets() {
        for c in [SimplexConfig::H44L1, SimplexConfig::H44L2] {
            let m = simplex_tight(c).unwrap();
            assert_eq!(m.points.count_ones(..), 15);
            assert!(m.tight.pass);
            assert_eq!(m.tight.i, Some(3));
        }
        let both = simplex_tight(SimplexConfig::H44Both).unwrap();
        assert_eq!(both.points.count_ones(..), 30);
        assert!(both.tight.pass);
        assert_eq!(both.tight.i, Some(6));
    }

    #[test]
    fn config_names_round_trip() {
        for c in SimplexConfig::ALL {
            assert_eq!(c.to_string().parse::<SimplexConfig>().unwrap(), c);
        }
    }
}
