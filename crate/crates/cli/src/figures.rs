//! The five figure commands. Defaults follow the captions where the paper
//! states values (g = 0.5, mω₀/ħ = 1, window (-2, 2), N up to 1000); the
//! N ladders and grid extents are this tool's declared defaults.

use num_complex::Complex64;

use superlab_core::energy_analysis::{
    energy_bound_hw0, mimicry_asymptote_hw0, mimicry_sweep, spectral_energy,
};
use superlab_core::oscillator::{
    build_sequence_state, hn_closed, limit_plane_wave, local_energy, FrequencyScaling,
    OscillatorConfig,
};
use superlab_core::time_evolution::fig5_trace;

use crate::config::Ctx;
use crate::output::{write_csv, write_sidecar, Cell};
use crate::svg::{write_svg, Series};
use crate::{AppError, FigArgs, OutputFormat};

const FIG12_LADDER: [u64; 5] = [2, 5, 10, 20, 50];
const FIG5_LADDER: [u64; 5] = [10, 50, 100, 300, 1000];
const FIG34_G: [f64; 3] = [0.3, 0.5, 1.0];

pub fn run_fig(args: &FigArgs, mut ctx: Ctx) -> Result<(), AppError> {
    match args.id {
        1 => fig1(args, &mut ctx),
        2 => fig2(args, &mut ctx),
        3 => fig3(args, &mut ctx),
        4 => fig4(args, &mut ctx),
        5 => fig5(args, &mut ctx),
        other => Err(AppError::Usage(format!(
            "figure id {other} is not in 1..=5"
        ))),
    }
}

fn emit(
    ctx: &Ctx,
    name: &str,
    header: &[String],
    rows: &[Vec<Cell>],
    panels: &[(&str, &str, Vec<Series>)],
) -> Result<(), AppError> {
    std::fs::create_dir_all(&ctx.out_dir)?;
    if matches!(ctx.format, OutputFormat::Csv | OutputFormat::Both) {
        write_csv(
            &ctx.out_dir.join(format!("{name}.csv")),
            header,
            rows,
            ctx.precision,
        )?;
    }
    if matches!(ctx.format, OutputFormat::Svg | OutputFormat::Both) {
        for (suffix, title, series) in panels {
            let file = if suffix.is_empty() {
                format!("{name}.svg")
            } else {
                format!("{name}_{suffix}.svg")
            };
            write_svg(&ctx.out_dir.join(file), title, series)?;
        }
    }
    write_sidecar(
        &ctx.out_dir.join(format!("{name}.meta.txt")),
        name,
        &ctx.resolved,
    )?;
    Ok(())
}

/// Fig 1: scaled local energy Re Ẽ(x)/E_max under ω_N = ω₀/N; values above
/// 1 are superenergetic.
fn fig1(args: &FigArgs, ctx: &mut Ctx) -> Result<(), AppError> {
    let ns = ctx.list("n-values", args.n_values.clone(), &FIG12_LADDER)?;
    let g = ctx.value("g", args.g, 0.5)?;
    let scale = ctx.value("scale", args.scale, 1.0)?;
    let grid = ctx.grid("grid", &args.grid, (-8.0, 8.0, 801))?;

    let mut header = vec!["x".to_string()];
    for &n in &ns {
        header.push(format!("scaled_local_energy_re_N{n}"));
    }
    let configs: Vec<OscillatorConfig> = ns
        .iter()
        .map(|&n| OscillatorConfig::new(n, g, FrequencyScaling::InverseN, scale))
        .collect::<Result<_, _>>()?;
    let mut rows = Vec::with_capacity(grid.len());
    for &x in &grid {
        let mut row: Vec<Cell> = vec![x.into()];
        for c in &configs {
            row.push((local_energy(c, x).re / c.e_max()).into());
        }
        rows.push(row);
    }
    let series: Vec<Series> = configs
        .iter()
        .enumerate()
        .map(|(j, c)| Series {
            name: format!("N = {}", c.n),
            points: grid
                .iter()
                .enumerate()
                .map(|(i, &x)| {
                    let Cell::Float(v) = rows[i][j + 1] else { unreachable!() };
                    (x, v)
                })
                .collect(),
        })
        .collect();
    emit(
        ctx,
        "fig1",
        &header,
        &rows,
        &[("", "scaled local energy, ω_N = ω₀/N", series)],
    )
}

/// Fig 2: Re and Im of h_N(x)/(2g)^N under ω_N = ω₀/N², with the limiting
/// plane wave e^{ik₀x} in the last columns.
fn fig2(args: &FigArgs, ctx: &mut Ctx) -> Result<(), AppError> {
    let ns = ctx.list("n-values", args.n_values.clone(), &FIG12_LADDER)?;
    let g = ctx.value("g", args.g, 0.5)?;
    let scale = ctx.value("scale", args.scale, 1.0)?;
    let grid = ctx.grid("grid", &args.grid, (-12.0, 12.0, 601))?;

    let mut header = vec!["x".to_string()];
    for &n in &ns {
        header.push(format!("re_h_N{n}"));
        header.push(format!("im_h_N{n}"));
    }
    header.push("re_limit".to_string());
    header.push("im_limit".to_string());

    let configs: Vec<OscillatorConfig> = ns
        .iter()
        .map(|&n| OscillatorConfig::new(n, g, FrequencyScaling::InverseN2, scale))
        .collect::<Result<_, _>>()?;
    let mut rows = Vec::with_capacity(grid.len());
    for &x in &grid {
        let mut row: Vec<Cell> = vec![x.into()];
        for c in &configs {
            let ln_norm = c.n as f64 * (2.0 * g).ln();
            let v = hn_closed(c, x).to_complex_shifted(-ln_norm);
            row.push(v.re.into());
            row.push(v.im.into());
        }
        let lim = limit_plane_wave(&configs[0], x);
        row.push(lim.re.into());
        row.push(lim.im.into());
        rows.push(row);
    }
    let panel = |part: usize, label: &str| -> Vec<Series> {
        let mut out: Vec<Series> = configs
            .iter()
            .enumerate()
            .map(|(j, c)| Series {
                name: format!("N = {} ({label})", c.n),
                points: grid
                    .iter()
                    .enumerate()
                    .map(|(i, &x)| {
                        let Cell::Float(v) = rows[i][1 + 2 * j + part] else { unreachable!() };
                        (x, v)
                    })
                    .collect(),
            })
            .collect();
        out.push(Series {
            name: format!("limit ({label})"),
            points: grid
                .iter()
                .enumerate()
                .map(|(i, &x)| {
                    let Cell::Float(v) = rows[i][1 + 2 * configs.len() + part] else {
                        unreachable!()
                    };
                    (x, v)
                })
                .collect(),
        });
        out
    };
    emit(
        ctx,
        "fig2",
        &header,
        &rows,
        &[
            ("re", "Re h_N(x)/(2g)^N", panel(0, "Re")),
            ("im", "Im h_N(x)/(2g)^N", panel(1, "Im")),
        ],
    )
}

/// Fig 3: spectral energy E_N/ħω₀ vs N under ω_N = ω₀/N², with the bound
/// (N+1/2)/N².
fn fig3(args: &FigArgs, ctx: &mut Ctx) -> Result<(), AppError> {
    let gs = ctx.list("g-values", args.g_values.clone(), &FIG34_G)?;
    let n_max = ctx.value("n-max", args.n_max, 200u64)?;
    let scale = ctx.value("scale", args.scale, 1.0)?;

    let header: Vec<String> = ["N", "g", "E_N_over_hw0", "bound"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut rows = Vec::new();
    for &g in &gs {
        for n in 1..=n_max {
            let config = OscillatorConfig::new(n, g, FrequencyScaling::InverseN2, scale)?;
            let e = spectral_energy(&build_sequence_state(&config)) / config.hbar_omega0();
            rows.push(vec![
                Cell::from(n),
                Cell::from(g),
                Cell::from(e),
                Cell::from(energy_bound_hw0(n)),
            ]);
        }
    }
    let series: Vec<Series> = gs
        .iter()
        .enumerate()
        .map(|(j, &g)| Series {
            name: format!("g = {g}"),
            points: (0..n_max as usize)
                .map(|i| {
                    let Cell::Float(v) = rows[j * n_max as usize + i][2] else { unreachable!() };
                    ((i + 1) as f64, v)
                })
                .collect(),
        })
        .chain(std::iter::once(Series {
            name: "bound".to_string(),
            points: (1..=n_max)
                .map(|n| (n as f64, energy_bound_hw0(n)))
                .collect(),
        }))
        .collect();
    emit(
        ctx,
        "fig3",
        &header,
        &rows,
        &[("", "spectral energy vs N, ω_N = ω₀/N²", series)],
    )
}

/// Fig 4: windowed (mimicry) energy vs N for several g, window (-L, L),
/// with the ħω₀/(2g²) asymptotes.
fn fig4(args: &FigArgs, ctx: &mut Ctx) -> Result<(), AppError> {
    let gs = ctx.list("g-values", args.g_values.clone(), &FIG34_G)?;
    let n_max = ctx.value("n-max", args.n_max, 500u64)?;
    let l_window = ctx.value("window", args.window, 2.0)?;
    let density = ctx.quad_density;

    let reports = mimicry_sweep(&gs, n_max, l_window, density)?;
    for &g in &gs {
        let first_ok = reports
            .iter()
            .find(|r| r.g == g && r.mimicry_condition_met)
            .map(|r| r.n);
        match first_ok {
            Some(n0) if n0 > 1 => eprintln!(
                "superlab: fig4: g = {g}: mimicry condition L <= g sqrt(N) unmet below N = {n0}"
            ),
            None => eprintln!(
                "superlab: fig4: g = {g}: mimicry condition L <= g sqrt(N) unmet for all N <= {n_max}"
            ),
            _ => {}
        }
    }
    let header: Vec<String> = [
        "N",
        "g",
        "E_mim_over_hw0",
        "asymptote_over_hw0",
        "postselection_prob",
        "ln_postselection_prob",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let rows: Vec<Vec<Cell>> = reports
        .iter()
        .map(|r| {
            vec![
                Cell::from(r.n),
                Cell::from(r.g),
                Cell::from(r.windowed_energy_hw0),
                Cell::from(mimicry_asymptote_hw0(r.g)),
                Cell::from(r.postselection_prob),
                Cell::from(r.ln_postselection_prob),
            ]
        })
        .collect();
    let series: Vec<Series> = gs
        .iter()
        .map(|&g| Series {
            name: format!("g = {g}"),
            points: reports
                .iter()
                .filter(|r| r.g == g)
                .map(|r| (r.n as f64, r.windowed_energy_hw0))
                .collect(),
        })
        .chain(gs.iter().map(|&g| Series {
            name: format!("asymptote g = {g}"),
            points: vec![
                (1.0, mimicry_asymptote_hw0(g)),
                (n_max as f64, mimicry_asymptote_hw0(g)),
            ],
        }))
        .collect();
    emit(
        ctx,
        "fig4",
        &header,
        &rows,
        &[("", "windowed energy vs N", series)],
    )
}

/// Fig 5: h_N(0, t)/h_N(0, 0) vs t (units 1/ω₀) as N grows, with the
/// superoscillation reference e^{-iω₀t/(2g²)}.
fn fig5(args: &FigArgs, ctx: &mut Ctx) -> Result<(), AppError> {
    let ns = ctx.list("n-values", args.n_values.clone(), &FIG5_LADDER)?;
    let g = ctx.value("g", args.g, 0.5)?;
    let scale = ctx.value("scale", args.scale, 1.0)?;
    let t_grid = ctx.grid("t-grid", &args.t_grid, (-1.0, 1.0, 401))?;

    let mut header = vec!["t".to_string()];
    for &n in &ns {
        header.push(format!("re_h_N{n}"));
        header.push(format!("im_h_N{n}"));
    }
    header.push("re_ref".to_string());
    header.push("im_ref".to_string());

    let mut traces = Vec::new();
    for &n in &ns {
        let config = OscillatorConfig::new(n, g, FrequencyScaling::InverseN2, scale)?;
        traces.push(fig5_trace(&config, &t_grid)?);
    }
    let freq = superlab_core::time_evolution::time_frequency_units_omega0(g);
    let reference: Vec<Complex64> = t_grid
        .iter()
        .map(|&t| Complex64::new(0.0, -freq * t).exp())
        .collect();

    let mut rows = Vec::with_capacity(t_grid.len());
    for (i, &t) in t_grid.iter().enumerate() {
        let mut row: Vec<Cell> = vec![t.into()];
        for tr in &traces {
            row.push(tr[i].re.into());
            row.push(tr[i].im.into());
        }
        row.push(reference[i].re.into());
        row.push(reference[i].im.into());
        rows.push(row);
    }
    let panel = |re: bool, label: &str| -> Vec<Series> {
        let pick = |z: &Complex64| if re { z.re } else { z.im };
        let mut out: Vec<Series> = ns
            .iter()
            .zip(&traces)
            .map(|(&n, tr)| Series {
                name: format!("N = {n} ({label})"),
                points: t_grid.iter().zip(tr).map(|(&t, z)| (t, pick(z))).collect(),
            })
            .collect();
        out.push(Series {
            name: format!("exp(-iω₀t/(2g²)) ({label})"),
            points: t_grid
                .iter()
                .zip(&reference)
                .map(|(&t, z)| (t, pick(z)))
                .collect(),
        });
        out
    };
    emit(
        ctx,
        "fig5",
        &header,
        &rows,
        &[
            ("re", "Re h_N(0,t)/h_N(0,0)", panel(true, "Re")),
            ("im", "Im h_N(0,t)/h_N(0,0)", panel(false, "Im")),
        ],
    )
}
