//! Point orbits and line types of H(r,q²) relative to a parabolic Q(r,q) in companion
//! position, for r even and q odd.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use super::{tight_check, CompanionBundle, TightReport};
use crate::error::{Error, Result};
use crate::hist::Histogram;
use crate::polar::{LineClass, PolarKind};
use crate::projective::{theta, Subspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum OrbitLabel {
    /// Lifted points of Q(r,q).
    Qpts,
    /// Non-real points on extended lines of Q(r,q).
    O,
    /// Non-real points on extended external lines.
    E,
    /// Non-real points on extended secant lines.
    S,
}

impl OrbitLabel {
    pub const ALL: [OrbitLabel; 4] = [OrbitLabel::Qpts, OrbitLabel::O, OrbitLabel::E, OrbitLabel::S];

    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LineType {
    I,
    Ii,
    Iii,
    Iv,
    V,
    Vi,
    Vii,
    Viii,
    Ix,
}

impl LineType {
    pub const ALL: [LineType; 9] = [
        LineType::I,
        LineType::Ii,
        LineType::Iii,
        LineType::Iv,
        LineType::V,
        LineType::Vi,
        LineType::Vii,
        LineType::Viii,
        LineType::Ix,
    ];

    /// Intersection sizes with (Qpts, O, E, S).
    pub fn signature(self, q: u64) -> [u64; 4] {
        let qq = q * q;
        match self {
            LineType::I => [q + 1, qq - q, 0, 0],
            LineType::Ii => [1, 0, qq, 0],
            LineType::Iii => [1, 0, 0, qq],
            LineType::Iv => [1, qq, 0, 0],
            LineType::V => [0, qq + 1, 0, 0],
            LineType::Vi => [0, 1, qq, 0],
            LineType::Vii => [0, 1, 0, qq],
            LineType::Viii => [0, 2, (qq - 1) / 2, (qq - 1) / 2],
            LineType::Ix => [0, 0, qq.div_ceil(2), qq.div_ceil(2)],
        }
    }
}

fn require_even_bundle(bundle: &CompanionBundle) -> Result<()> {
    if bundle.small.kind() != PolarKind::Parabolic || !bundle.r().is_multiple_of(2) || bundle.q().is_multiple_of(2) {
        return Err(Error::InvalidArgument(
            "orbit machinery needs a parabolic bundle with r even and q odd".into(),
        ));
    }
    if !bundle.commuting {
        return Err(Error::NotCompanion);
    }
    Ok(())
}

pub fn classify_point_h(bundle: &CompanionBundle, p: usize) -> Result<OrbitLabel> {
    require_even_bundle(bundle)?;
    label_unchecked(bundle, p)
}

fn label_unchecked(bundle: &CompanionBundle, p: usize) -> Result<OrbitLabel> {
    if !bundle.herm.contains_point(p) {
        return Err(Error::NotInPolarSpace);
    }
    if bundle.emb.is_real(p) {
        return Ok(OrbitLabel::Qpts);
    }
    match bundle.real_line_class(p) {
        Some(LineClass::Contained) => Ok(OrbitLabel::O),
        Some(LineClass::External) => Ok(OrbitLabel::E),
        Some(LineClass::Secant) => Ok(OrbitLabel::S),
        Some(LineClass::Tangent) => Err(Error::TangentProbe),
        None => Err(Error::Structural(format!("no real line through point {p}"))),
    }
}

/// Labels of every point of the big space, `None` off H(r,q²).
#[derive(Debug, Clone)]
pub struct OrbitLabels {
    labels: Vec<Option<OrbitLabel>>,
    q: u64,
}

impl OrbitLabels {
    pub fn compute(bundle: &CompanionBundle) -> Result<Self> {
        require_even_bundle(bundle)?;
        let n = bundle.emb.big().num_points();
        let labels = (0..n)
            .into_par_iter()
            .map(|p| {
                if bundle.herm.contains_point(p) {
                    label_unchecked(bundle, p).map(Some)
                } else {
                    Ok(None)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(OrbitLabels {
            labels,
            q: bundle.q() as u64,
        })
    }

    pub fn get(&self, p: usize) -> Option<OrbitLabel> {
        self.labels[p]
    }

    pub fn sizes(&self) -> BTreeMap<OrbitLabel, u64> {
        let mut out: BTreeMap<OrbitLabel, u64> = OrbitLabel::ALL.iter().map(|&l| (l, 0)).collect();
        for l in self.labels.iter().flatten() {
            *out.get_mut(l).unwrap() += 1;
        }
        out
    }

    pub fn orbit(&self, label: OrbitLabel) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.labels.len());
        for (p, l) in self.labels.iter().enumerate() {
            if *l == Some(label) {
                out.insert(p);
            }
        }
        out
    }

    pub fn signature(&self, bundle: &CompanionBundle, line: &Subspace) -> Result<[u64; 4]> {
        let mut sig = [0u64; 4];
        for p in bundle.emb.big().points_of(line) {
            let l = self.labels[p].ok_or_else(|| Error::InvalidArgument("line is not on H".into()))?;
            sig[l.index()] += 1;
        }
        Ok(sig)
    }

    pub fn classify_line(&self, bundle: &CompanionBundle, line: &Subspace) -> Result<LineType> {
        let sig = self.signature(bundle, line)?;
        LineType::ALL
            .into_iter()
            .find(|t| t.signature(self.q) == sig)
            .ok_or_else(|| Error::Structural(format!("unmatched line signature {sig:?}")))
    }
}

pub fn classify_line_h(bundle: &CompanionBundle, labels: &OrbitLabels, line: &Subspace) -> Result<LineType> {
    if !bundle.herm.is_totally_isotropic(line) || line.rank() != 2 {
        return Err(Error::InvalidArgument("not a line of H".into()));
    }
    labels.classify_line(bundle, line)
}

/// Lines of H(r,q²) through `p`.
pub fn h_lines_through(bundle: &CompanionBundle, p: usize) -> Result<Vec<Subspace>> {
    if !bundle.herm.contains_point(p) {
        return Err(Error::NotInPolarSpace);
    }
    let ctx = bundle.emb.big();
    let perp = bundle.herm.functional(ctx.point(p));
    let f = ctx.field();
    let mut seen = FixedBitSet::with_capacity(ctx.num_points());
    seen.insert(p);
    let mut out = Vec::new();
    for x in bundle.herm.points().ones() {
        if seen.contains(x) || crate::linalg::dot(f, &perp, ctx.point(x)) != 0 {
            continue;
        }
        let line = ctx.line(p, x);
        for y in ctx.points_of(&line) {
            seen.insert(y);
        }
        out.push(line);
    }
    Ok(out)
}

pub fn line_census_through_point(
    bundle: &CompanionBundle,
    labels: &OrbitLabels,
    p: usize,
) -> Result<Histogram<LineType>> {
    let mut h = Histogram::new();
    for line in h_lines_through(bundle, p)? {
        h.add(labels.classify_line(bundle, &line)?);
    }
    Ok(h)
}

/// Expected line-type counts through a point of the given orbit. Terms whose exponents
/// go negative for small r vanish.
pub fn census_expected(label: OrbitLabel, r: usize, q: u64) -> BTreeMap<LineType, u64> {
    let r = r as i64;
    let pw = |e: i64| q.pow(e as u32);
    let qm1 = |e: i64| if e <= 0 { 0 } else { pw(e) - 1 };
    let th = |e: i64| theta(e.max(-1), q).unwrap();
    let half = |e: i64| if e < 0 { 0 } else { pw(e) * qm1(r - 2) / 2 };
    let mut out = BTreeMap::new();
    match label {
        OrbitLabel::Qpts => {
            out.insert(LineType::I, th(r - 3));
            out.insert(LineType::Iv, q * qm1(r - 2) * qm1(r - 4) / (q * q - 1));
            out.insert(LineType::Ii, half(r - 3));
            out.insert(LineType::Iii, half(r - 3));
        }
        OrbitLabel::O => {
            out.insert(LineType::I, 1);
            out.insert(LineType::Iv, q * q * qm1(r - 4) / (q - 1));
            out.insert(LineType::V, q.pow(3) * qm1(r - 6) * qm1(r - 4) / (q * q - 1));
            let vi = pw(r - 3) * qm1(r - 4) / 2;
            out.insert(LineType::Vi, vi);
            out.insert(LineType::Vii, vi);
            out.insert(LineType::Viii, pw(2 * r - 5));
        }
        OrbitLabel::E | OrbitLabel::S => {
            let (first, second) = if label == OrbitLabel::E {
                (LineType::Ii, LineType::Vi)
            } else {
                (LineType::Iii, LineType::Vii)
            };
            out.insert(first, th(r - 3));
            out.insert(second, q * qm1(r - 2) * qm1(r - 4) / (q * q - 1));
            out.insert(LineType::Viii, half(r - 3));
            out.insert(LineType::Ix, half(r - 3));
        }
    }
    out.retain(|_, v| *v > 0);
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitTightness {
    pub sizes: BTreeMap<OrbitLabel, u64>,
    /// Qpts, O, E, S against H(r,q²).
    pub hermitian: Vec<(OrbitLabel, TightReport)>,
    /// Tight parameter inferred for the whole of H(r,q²).
    pub whole: TightReport,
    /// Qpts, O and O′ against Q(r,q²).
    pub quadric: Vec<(String, TightReport)>,
    pub o_prime_size: u64,
    pub pass: bool,
}

/// Tight parameters of the four orbits in H(r,q²), and of Qpts, O, O′ in Q(r,q²).
pub fn orbit_tightness(bundle: &CompanionBundle, labels: &OrbitLabels) -> Result<OrbitTightness> {
    require_even_bundle(bundle)?;
    let q = bundle.q() as u64;
    let r = bundle.r() as u32;
    let expected = [
        q + 1,
        q.pow(r - 1) - q,
        (q.pow(r + 1) - q.pow(r - 1)) / 2,
        (q.pow(r + 1) - q.pow(r - 1)) / 2,
    ];
    let mut hermitian = Vec::new();
    for (label, i) in OrbitLabel::ALL.into_iter().zip(expected) {
        hermitian.push((label, tight_check(&bundle.herm, &labels.orbit(label), Some(i))?));
    }
    let whole = tight_check(&bundle.herm, bundle.herm.points(), None)?;

    let big = bundle.emb.big();
    let mut o_prime = FixedBitSet::with_capacity(big.num_points());
    for p in bundle.big.points().ones() {
        if bundle.emb.is_real(p) {
            continue;
        }
        match bundle.real_line_class(p) {
            Some(LineClass::External) => o_prime.insert(p),
            Some(LineClass::Contained) => {}
            other => {
                return Err(Error::Structural(format!(
                    "point {p} of the lifted quadric lies on a {other:?} real line"
                )))
            }
        }
    }
    let quadric = vec![
        (
            "Qpts".to_string(),
            tight_check(&bundle.big, &labels.orbit(OrbitLabel::Qpts), Some(q + 1))?,
        ),
        (
            "O".to_string(),
            tight_check(&bundle.big, &labels.orbit(OrbitLabel::O), Some(q.pow(r - 1) - q))?,
        ),
        (
            "O'".to_string(),
            tight_check(&bundle.big, &o_prime, Some(q.pow(r) - q.pow(r - 1)))?,
        ),
    ];
    let pass = hermitian.iter().all(|(_, t)| t.pass)
        && quadric.iter().all(|(_, t)| t.pass)
        && whole.pass
        && whole.i == Some(expected.iter().sum());
    Ok(OrbitTightness {
        sizes: labels.sizes(),
        hermitian,
        whole,
        quadric,
        o_prime_size: o_prime.count_ones(..) as u64,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polar::make_polar;
    use std::sync::OnceLock;

    fn bundle43() -> &'static (CompanionBundle, OrbitLabels) {
        static B: OnceLock<(CompanionBundle, OrbitLabels)> = OnceLock::new();
        B.get_or_init(|| {
            let b = CompanionBundle::new(make_polar(PolarKind::Parabolic, 4, 3).unwrap()).unwrap();
            let l = OrbitLabels::compute(&b).unwrap();
            (b, l)
        })
    }

    #[test]
    fn orbit_sizes_r4_q3() {
        let (b, l) = bundle43();
        assert!(b.commuting);
        let s = l.sizes();
        assert_eq!(
            s.values().copied().collect::<Vec<_>>(),
            vec![40, 240, 1080, 1080]
        );
    }

    #[test]
    fn tau_preserves_orbits() {
        let (b, l) = bundle43();
        for p in b.herm.points().ones() {
            assert_eq!(l.get(p), l.get(b.emb.tau(p)));
        }
    }

    #[test]
    fn census_rows_r4() {
        for label in OrbitLabel::ALL {
            let row = census_expected(label, 4, 3);
            assert_eq!(row.values().sum::<u64>(), 28, "{label:?}");
        }
        let q = census_expected(OrbitLabel::Qpts, 4, 3);
        assert_eq!(q.get(&LineType::I), Some(&4));
        assert_eq!(q.get(&LineType::Ii), Some(&12));
        assert_eq!(census_expected(OrbitLabel::O, 4, 3).get(&LineType::Viii), Some(&27));
    }

    #[test]
    fn census_rows_general_r_sum_to_line_count() {
        // lines through a point of H(r,q²) correspond to the points of H(r-2,q²)
        for r in [4usize, 6, 8] {
            for q in [3u64, 5] {
                let n = r as u32 - 2;
                let total = (q.pow(n + 1) + 1) * (q.pow(n) - 1) / (q * q - 1);
                for label in OrbitLabel::ALL {
                    assert_eq!(census_expected(label, r, q).values().sum::<u64>(), total);
                }
            }
        }
    }

    #[test]
    fn sampled_census_matches() {
        let (b, l) = bundle43();
        for label in OrbitLabel::ALL {
            let p = l.orbit(label).ones().next().unwrap();
            let got = line_census_through_point(b, l, p).unwrap();
            let want = census_expected(label, 4, 3);
            assert_eq!(got.as_map(), &want);
        }
    }

    #[test]
    fn point_off_h_is_rejected() {
        let (b, _) = bundle43();
        let off = (0..b.emb.big().num_points()).find(|&p| !b.herm.contains_point(p)).unwrap();
        assert_eq!(classify_point_h(b, off).unwrap_err(), Error::NotInPolarSpace);
    }

    #[test]
    fn symplectic_bundle_rejected() {
        let b = CompanionBundle::new(make_polar(PolarKind::Symplectic, 3, 2).unwrap()).unwrap();
        assert!(OrbitLabels::compute(&b).is_err());
    }
}
