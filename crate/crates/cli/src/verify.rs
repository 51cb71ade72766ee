//! `fgver verify`: run named checks against one line-set file.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use clap::{Args, ValueEnum};
use fgver_core::analysis::{bar_set, tight_check, two_char_prediction, two_char_check, CompanionBundle};
use fgver_core::covers::{
    check_cover_counts, check_quadric_cover_counts, cover_profile, cover_profile_in, is_dual_parabolic, is_dual_projective,
    is_dual_symplectic, CoverProfile, LineSet, ParabolicVariant,
};
use fgver_core::io::{parse_line_set, FileKind};
use fgver_core::polar::{build_embedding, BaerEmbedding, PolarSpace};
use fgver_core::Error;
use serde_json::json;

use crate::report::{gram_rows, Geometry, Outcome, Report};

#[derive(Args)]
pub struct VerifyArgs {
    /// Line-set file.
    pub file: PathBuf,
    /// Comma-separated checks to run, in order.
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    pub checks: Vec<CheckName>,
    /// Tight-set parameter; inferred from the data when omitted.
    #[arg(long)]
    pub i: Option<u64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckName {
    Cover,
    #[value(name = "lemma1")]
    CoverCounts,
    #[value(name = "lemma4")]
    QuadricCounts,
    DualProj,
    DualSymp,
    #[value(name = "dual-par-I", alias = "dual-par-i")]
    DualParI,
    #[value(name = "dual-par-II", alias = "dual-par-ii")]
    DualParII,
    TwoChar,
    #[value(name = "tight-H", alias = "tight-h")]
    TightH,
    #[value(name = "tight-W", alias = "tight-w")]
    TightW,
    #[value(name = "tight-Q", alias = "tight-q")]
    TightQ,
}

impl CheckName {
    fn label(self) -> String {
        self.to_possible_value().unwrap().get_name().to_string()
    }

    fn kinds(self) -> &'static [FileKind] {
        use FileKind::*;
        match self {
            CheckName::Cover => &[Projective, Symplectic, Parabolic],
            CheckName::CoverCounts | CheckName::DualProj | CheckName::TwoChar => &[Projective],
            CheckName::QuadricCounts | CheckName::DualParI | CheckName::DualParII | CheckName::TightQ => &[Parabolic],
            CheckName::DualSymp | CheckName::TightW => &[Symplectic],
            CheckName::TightH => &[Symplectic, Parabolic],
        }
    }
}

/// Errors that describe the input rather than a failed property.
fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Parse { .. }
            | Error::DuplicateLine(_)
            | Error::InvalidArgument(_)
            | Error::InvalidPolar(_)
            | Error::ContextMismatch(_)
            | Error::NotPrimePower(_)
            | Error::FieldTooLarge(_)
            | Error::CodeOutOfRange { .. }
    )
}

struct Session {
    lines: LineSet,
    kind: FileKind,
    polar: Option<PolarSpace>,
    emb: Option<Arc<BaerEmbedding>>,
    bundle: Option<CompanionBundle>,
}

impl Session {
    fn polar(&self) -> &PolarSpace {
        self.polar.as_ref().expect("kind checked before use")
    }

    fn profile(&self) -> fgver_core::Result<CoverProfile> {
        match &self.polar {
            Some(ps) => cover_profile_in(&self.lines, ps),
            None => cover_profile(&self.lines),
        }
    }

    fn emb(&mut self) -> fgver_core::Result<Arc<BaerEmbedding>> {
        if self.emb.is_none() {
            let ctx = self.lines.ctx();
            self.emb = Some(Arc::new(build_embedding(ctx.r(), ctx.q())?));
        }
        Ok(self.emb.clone().unwrap())
    }

    fn ensure_bundle(&mut self) -> fgver_core::Result<()> {
        if self.bundle.is_none() {
            let emb = self.emb()?;
            let b = CompanionBundle::with_embedding(emb, self.polar().clone())?;
            if !b.commuting {
                return Err(Error::NotCompanion);
            }
            self.bundle = Some(b);
        }
        Ok(())
    }

    fn run(&mut self, check: CheckName, i: Option<u64>, report: &mut Report) -> fgver_core::Result<()> {
        let name = check.label();
        match check {
            CheckName::Cover => {
                let p = self.profile()?;
                let pass = p.m.is_some() && p.size_identity == Some(true) && p.even_r_divisibility != Some(false);
                report.push(name, pass, &p);
            }
            CheckName::CoverCounts => {
                let r = check_cover_counts(&self.lines)?;
                report.push(name, r.pass, &r);
            }
            CheckName::QuadricCounts => {
                let r = check_quadric_cover_counts(&self.lines, self.polar())?;
                report.push(name, r.pass, &r);
            }
            CheckName::DualProj => {
                let r = is_dual_projective(&self.lines)?;
                report.push(name, r.pass, &r);
            }
            CheckName::DualSymp => {
                let r = is_dual_symplectic(&self.lines, self.polar())?;
                report.push(name, r.pass, &r);
            }
            CheckName::DualParI | CheckName::DualParII => {
                let v = if check == CheckName::DualParI {
                    ParabolicVariant::I
                } else {
                    ParabolicVariant::II
                };
                let r = is_dual_parabolic(&self.lines, self.polar(), v)?;
                report.push(name, r.pass, &r);
            }
            CheckName::TwoChar => {
                let m = self.profile()?.require_m()?;
                let emb = self.emb()?;
                let pred = two_char_prediction(emb.r(), emb.q(), m)?;
                let bar = bar_set(&emb, &self.lines)?;
                let r = two_char_check(emb.big(), &bar, Some(pred));
                let pass = r.pass && r.identity_residual == Some(0);
                report.push(name, pass, json!({ "m": m, "report": r }));
            }
            CheckName::TightH | CheckName::TightW | CheckName::TightQ => {
                let m = self.profile()?.require_m()?;
                self.ensure_bundle()?;
                let bundle = self.bundle.as_ref().unwrap();
                let ambient = if check == CheckName::TightH { &bundle.herm } else { &bundle.big };
                let bar = bar_set(&bundle.emb, &self.lines)?;
                let r = tight_check(ambient, &bar, i)?;
                report.push(name, r.pass, json!({ "m": m, "report": r }));
            }
        }
        Ok(())
    }

    fn geometry(&self) -> Geometry {
        let ctx = self.lines.ctx();
        let mut grams = BTreeMap::new();
        if let Some(ps) = &self.polar {
            grams.insert(self.kind.to_string(), gram_rows(ps));
        }
        if let Some(b) = &self.bundle {
            grams.insert("lifted".into(), gram_rows(&b.big));
            grams.insert("hermitian".into(), gram_rows(&b.herm));
        }
        Geometry {
            q: ctx.q(),
            r: ctx.r(),
            kind: self.kind.to_string(),
            base_modulus: ctx.field().modulus_string(),
            extension_modulus: self.emb.as_ref().map(|e| e.ext().moduli().ext_modulus),
            grams,
        }
    }
}

pub fn run(args: &VerifyArgs) -> Outcome {
    let text = std::fs::read_to_string(&args.file).with_context(|| format!("reading {}", args.file.display()))?;
    let file = parse_line_set(&text).map_err(|e| anyhow!("{}: {e}", args.file.display()))?;
    for &c in &args.checks {
        if !c.kinds().contains(&file.kind) {
            bail!("check {} does not apply to kind={}", c.label(), file.kind);
        }
    }
    let polar = file.polar()?;
    let mut session = Session {
        lines: file.lines,
        kind: file.kind,
        polar,
        emb: None,
        bundle: None,
    };
    let mut report = Report::default();
    for &c in &args.checks {
        if let Err(e) = session.run(c, args.i, &mut report) {
            if is_usage_error(&e) {
                bail!("check {}: {e}", c.label());
            }
            report.push(c.label(), false, json!({ "error": e.to_string() }));
        }
    }
    report.geometry = Some(session.geometry());
    Ok(report)
}
