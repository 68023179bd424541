//! Data-producing subcommands.

use anyhow::Result;
use rayon::prelude::*;
use serde_json::json;
use ssh_emitter::dynamics::{decompose_survival, required_cells, site_heatmap, TimeGrid, MAX_HEATMAP_ROWS};
use ssh_emitter::model::{sample_curve, winding_of, WindingVariant};
use ssh_emitter::spectrum::{classify_region, discrete_eigenvalues, has_bound_pair, StateKind};
use ssh_emitter::CouplingParams;

use crate::config::RunConfig;
use crate::output::{Cell, Table, Writer};

pub fn kind_name(kind: StateKind) -> &'static str {
    match kind {
        StateKind::Bound => "bound",
        StateKind::AntiBound => "anti_bound",
        StateKind::Resonance => "resonance",
        StateKind::AntiResonance => "anti_resonance",
        StateKind::ZeroModeBound => "bound",
        StateKind::ZeroModeAntiBound => "anti_bound",
    }
}

fn sweep_row(params: &CouplingParams) -> Vec<Cell> {
    let region = classify_region(params);
    let (mut zp, mut zm) = ([f64::NAN; 2], [f64::NAN; 2]);
    let mut z0 = "none";
    let mut sheet_plus = String::from("none");
    match discrete_eigenvalues(params) {
        Ok(states) => {
            let pair: Vec<_> = states.iter().filter(|s| !s.kind.is_zero_mode()).collect();
            if let [plus, minus] = pair[..] {
                zp = [plus.energy.re, plus.energy.im];
                zm = [minus.energy.re, minus.energy.im];
                sheet_plus = plus.sheet.to_string();
            }
            if let Some(s) = states.iter().find(|s| s.kind.is_zero_mode()) {
                z0 = kind_name(s.kind);
            }
        }
        // g = j1: the pair is undefined there; the row is kept with NaN energies.
        Err(_) => z0 = "singular",
    }
    vec![
        params.g().into(),
        region.short().into(),
        zp[0].into(),
        zp[1].into(),
        zm[0].into(),
        zm[1].into(),
        z0.into(),
        sheet_plus.into(),
        params.j_minus().into(),
        params.j_plus().into(),
    ]
}

pub fn spectrum_sweep(cfg: &RunConfig, w: &mut Writer) -> Result<()> {
    let columns = [
        "g", "region", "re_z_plus", "im_z_plus", "re_z_minus", "im_z_minus", "z0_kind", "sheet_plus", "j_minus",
        "j_plus",
    ];
    let mut table = Table::new("spectrum_sweep", columns.iter().map(|s| s.to_string()).collect());
    let gs = cfg.sweep_values();
    let rows: Vec<Vec<Cell>> = gs
        .par_iter()
        .map(|&g| {
            let p = cfg.params.with_g(g)?;
            Ok(sweep_row(&p))
        })
        .collect::<ssh_emitter::Result<_>>()?;
    for row in rows {
        table.push(row);
    }
    w.table(&table)?;
    w.manifest.summary = json!({ "points": gs.len() });
    Ok(())
}

fn cells_for(cfg: &RunConfig) -> usize {
    cfg.cells.unwrap_or_else(|| required_cells(&cfg.params, cfg.t_max))
}

pub fn dynamics(cfg: &RunConfig, w: &mut Writer) -> Result<()> {
    let grid = TimeGrid::new(0.0, cfg.t_max, cfg.steps)?;
    let n_cells = cells_for(cfg);
    let d = decompose_survival(&cfg.params, &grid, n_cells)?;
    let channels: Vec<_> = d.table.channels().collect();
    let mut columns = vec!["t".to_string(), "p_survival".to_string()];
    for (ch, _) in &channels {
        columns.push(format!("re_{}", ch.as_str()));
        columns.push(format!("im_{}", ch.as_str()));
    }
    let mut table = Table::new("dynamics", columns);
    for (i, t) in grid.times().into_iter().enumerate() {
        let mut row: Vec<Cell> = vec![t.into(), d.table.survival()[i].into()];
        for (_, values) in &channels {
            row.push(values[i].re.into());
            row.push(values[i].im.into());
        }
        table.push(row);
    }
    w.table(&table)?;
    w.manifest.summary = json!({
        "n_cells": n_cells,
        "crossover_timescale": d.crossover_timescale,
        "max_branch_residual": d.max_branch_residual,
    });
    Ok(())
}

pub fn heatmap(cfg: &RunConfig, w: &mut Writer) -> Result<()> {
    let grid = TimeGrid::new(0.0, cfg.t_max, cfg.steps)?.capped(MAX_HEATMAP_ROWS);
    let n_cells = cells_for(cfg);
    let map = site_heatmap(&cfg.params, &grid, n_cells)?;
    let columns = ["t", "site_kind", "cell", "prob"];
    let mut table = Table::new("heatmap", columns.iter().map(|s| s.to_string()).collect());
    for i in 0..map.n_rows() {
        let t = grid.time(i);
        for (site, p) in map.sites().iter().zip(map.row(i)) {
            table.push(vec![t.into(), site.kind_tag().into(), site.cell().into(), (*p).into()]);
        }
    }
    w.table(&table)?;
    w.manifest.summary = json!({ "n_cells": n_cells, "time_rows": grid.n_steps() });
    Ok(())
}

pub fn winding(cfg: &RunConfig, w: &mut Writer) -> Result<()> {
    let p = &cfg.params;
    // Gap closure surfaces here, before anything is written.
    let nu_a = winding_of(p, WindingVariant::Bare)?;
    let mu_ab = winding_of(p, WindingVariant::Tilde)?;
    let nu_b = winding_of(p, WindingVariant::BSite)?;
    let columns = ["variant", "k", "re", "im"];
    let mut table = Table::new("winding", columns.iter().map(|s| s.to_string()).collect());
    for (name, variant) in [("bare", WindingVariant::Bare), ("tilde", WindingVariant::Tilde), ("b_site", WindingVariant::BSite)] {
        for (k, z) in sample_curve(p, variant, cfg.samples) {
            table.push(vec![name.into(), k.into(), z.re.into(), z.im.into()]);
        }
    }
    w.table(&table)?;
    let summary = json!({
        "nu_a": nu_a,
        "mu_ab": mu_ab,
        "nu_b": nu_b,
        "bound_pair": has_bound_pair(p),
    });
    println!("{summary}");
    w.manifest.summary = summary;
    Ok(())
}
