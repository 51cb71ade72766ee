//! `fgver build`: construct objects, write them as line-set and point-set files, and
//! re-parse every file written.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::Subcommand;
use fgver_core::constructions::dye::{dye_build, dye_classify_lines, dye_r, dye_summary};
use fgver_core::constructions::hexagon::{hexagon_lines, hexagon_project_even};
use fgver_core::constructions::simplex::{simplex_tight, SimplexConfig};
use fgver_core::constructions::singer::singer_cycle;
use fgver_core::covers::{cover_profile, cover_profile_in, LineSet};
use fgver_core::io::{parse_line_set, parse_point_set, subspace_rows, write_line_set, write_point_set, FileKind};
use fgver_core::projective::GeometryContext;
use fgver_core::Error;
use fixedbitset::FixedBitSet;
use serde_json::json;

use crate::report::{gram_rows, Geometry, Outcome, Report};

#[derive(Subcommand)]
pub enum BuildWhat {
    /// Line orbits of a Singer cycle of PG(r,q).
    Singer {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split Cayley hexagon lines on Q(6,q), q in {2,3}, and for q=2 their image in W(5,2).
    Hexagon {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Symplectic spread bundle of PG(4n-1,q) with its pencil of forms.
    Dye {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Points of a Hermitian variety on secants of a self-polar simplex.
    Simplex {
        #[arg(long)]
        config: SimplexConfig,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

impl BuildWhat {
    pub fn out(&self) -> Option<&PathBuf> {
        match self {
            BuildWhat::Singer { out, .. }
            | BuildWhat::Hexagon { out, .. }
            | BuildWhat::Dye { out, .. }
            | BuildWhat::Simplex { out, .. } => out.as_ref(),
        }
    }
}

struct Writer<'a> {
    dir: &'a Path,
    report: &'a mut Report,
}

impl Writer<'_> {
    fn write(&mut self, name: &str, text: &str) -> anyhow::Result<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        self.report.files.push(name.to_string());
        Ok(())
    }

    fn lines(&mut self, name: &str, kind: FileKind, l: &LineSet) -> anyhow::Result<()> {
        let text = write_line_set(kind, l);
        self.write(name, &text)?;
        let back = parse_line_set(&text)?;
        let same = back.kind == kind && back.lines.lines() == l.lines();
        self.report.push(format!("round-trip {name}"), same, json!({ "lines": l.len() }));
        Ok(())
    }

    fn points(&mut self, name: &str, ctx: &GeometryContext, pts: &FixedBitSet) -> anyhow::Result<()> {
        let text = write_point_set(ctx, pts);
        self.write(name, &text)?;
        let back = parse_point_set(&text)?;
        self.report.push(
            format!("round-trip {name}"),
            &back.points == pts,
            json!({ "points": pts.count_ones(..) }),
        );
        Ok(())
    }
}

fn geometry(ctx: &GeometryContext, kind: &str) -> Geometry {
    Geometry {
        q: ctx.q(),
        r: ctx.r(),
        kind: kind.into(),
        base_modulus: ctx.field().modulus_string(),
        extension_modulus: None,
        grams: BTreeMap::new(),
    }
}

/// Construction failures name the invariant and count as failed verification.
fn construction<T>(report: &mut Report, step: &str, r: fgver_core::Result<T>) -> anyhow::Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e @ (Error::Structural(_) | Error::NotACover { .. } | Error::NotIsotropic(_) | Error::NotCompanion)) => {
            report.push(step, false, json!({ "error": e.to_string() }));
            Ok(None)
        }
        Err(e) => bail!("{step}: {e}"),
    }
}

fn singer(r: usize, q: usize, w: &mut Writer) -> anyhow::Result<()> {
    let Some(cycle) = construction(w.report, "singer cycle", singer_cycle(r, q))? else {
        return Ok(());
    };
    let orbits = cycle.line_orbits()?;
    w.report.push(
        "singer cycle",
        cycle.is_regular(),
        json!({ "polynomial": cycle.polynomial(), "orbits": orbits.iter().map(LineSet::len).collect::<Vec<_>>() }),
    );
    for (k, o) in orbits.iter().enumerate() {
        let p = cover_profile(o)?;
        w.report.push(format!("orbit {k} is a cover"), p.m.is_some(), json!({ "size": o.len(), "m": p.m }));
        w.lines(&format!("singer-pg{r}{q}-orbit{k}.lns"), FileKind::Projective, o)?;
    }
    w.report.geometry = Some(geometry(cycle.ctx(), "projective"));
    Ok(())
}

fn hexagon(q: usize, w: &mut Writer) -> anyhow::Result<()> {
    if !(q == 2 || q == 3) {
        bail!("hexagon models are built for q = 2 and q = 3");
    }
    let Some(model) = construction(w.report, "hexagon", hexagon_lines(q))? else {
        return Ok(());
    };
    w.report.push("hexagon structure", model.checks.pass(), &model.checks);
    let p = cover_profile_in(&model.lines, &model.quadric)?;
    w.report.push("hexagon lines cover Q(6,q)", p.m == Some(q as u32 + 1), json!({ "m": p.m }));
    w.lines(&format!("hexagon-q6{q}.lns"), FileKind::Parabolic, &model.lines)?;
    let mut g = geometry(model.quadric.ctx(), "parabolic");
    g.grams.insert("parabolic".into(), gram_rows(&model.quadric));
    if q == 2 {
        if let Some((l, ws)) = construction(w.report, "projection to W(5,2)", hexagon_project_even(&model))? {
            let p = cover_profile_in(&l, &ws)?;
            w.report.push("projected lines cover W(5,2)", p.m == Some(q as u32 + 1), json!({ "m": p.m }));
            w.lines(&format!("hexagon-w5{q}.lns"), FileKind::Symplectic, &l)?;
            g.grams.insert("symplectic".into(), gram_rows(&ws));
        }
    }
    w.report.geometry = Some(g);
    Ok(())
}

fn dye(n: usize, q: usize, w: &mut Writer) -> anyhow::Result<()> {
    let Some(bundle) = construction(w.report, "spread bundle", dye_build(n, q))? else {
        return Ok(());
    };
    let Some(summary) = construction(w.report, "bundle checks", dye_summary(&bundle))? else {
        return Ok(());
    };
    w.report.push("bundle checks", summary.pass, &summary);
    let part = dye_classify_lines(&bundle, 0)?;
    let r = dye_r(&bundle)?;
    w.lines("F.lns", FileKind::Projective, &bundle.spread)?;
    w.lines("O1.lns", FileKind::Projective, &part.o1)?;
    w.lines("O2.lns", FileKind::Projective, &part.o2)?;
    w.points("R.pts", bundle.emb.big(), &r.points)?;

    let moduli = bundle.emb.ext().moduli();
    let forms: Vec<_> = bundle
        .pencil
        .iter()
        .zip(&bundle.lambdas)
        .map(|(b, l)| {
            json!({
                "lambda": l,
                "symplectic": gram_rows(&b.small),
                "hermitian": gram_rows(&b.herm),
            })
        })
        .collect();
    let manifest = json!({
        "n": n,
        "q": q,
        "moduli": moduli,
        "field_reduction_basis": [1, bundle.reduction.omega()],
        "forms": forms,
        "o1_form": 0,
        "sigma1": subspace_rows(&bundle.sigma1),
        "sigma2": subspace_rows(&bundle.sigma2),
        "files": { "F": "F.lns", "O1": "O1.lns", "O2": "O2.lns", "R": "R.pts" },
    });
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    w.write("manifest.json", &text)?;

    let mut g = geometry(bundle.spread.ctx(), "projective");
    g.extension_modulus = Some(moduli.ext_modulus);
    for (j, b) in bundle.pencil.iter().enumerate() {
        g.grams.insert(format!("W{j}"), gram_rows(&b.small));
    }
    w.report.geometry = Some(g);
    Ok(())
}

fn simplex(config: SimplexConfig, w: &mut Writer) -> anyhow::Result<()> {
    let Some(model) = construction(w.report, "simplex", simplex_tight(config))? else {
        return Ok(());
    };
    w.report.push(
        format!("{config} is tight"),
        model.tight.pass && model.tight.i == Some(config.expected_i()),
        &model.tight,
    );
    w.points(&format!("simplex-{config}.pts"), model.hermitian.ctx(), &model.points)?;
    let mut g = geometry(model.hermitian.ctx(), "hermitian");
    g.grams.insert("hermitian".into(), gram_rows(&model.hermitian));
    w.report.geometry = Some(g);
    Ok(())
}

pub fn run(what: &BuildWhat) -> Outcome {
    let dir = match what {
        BuildWhat::Singer { out_dir, .. }
        | BuildWhat::Hexagon { out_dir, .. }
        | BuildWhat::Dye { out_dir, .. }
        | BuildWhat::Simplex { out_dir, .. } => out_dir,
    };
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut report = Report::default();
    let mut w = Writer { dir, report: &mut report };
    match *what {
        BuildWhat::Singer { r, q, .. } => singer(r, q, &mut w)?,
        BuildWhat::Hexagon { q, .. } => hexagon(q, &mut w)?,
        BuildWhat::Dye { n, q, .. } => dye(n, q, &mut w)?,
        BuildWhat::Simplex { config, .. } => simplex(config, &mut w)?,
    }
    Ok(report)
}
