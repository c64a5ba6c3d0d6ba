//! Command-line surface: machine-readable tables for the spectrum, the
//! tridiagonal and factorization coefficients, the polynomial families, the
//! spectral measures, and the named verification checks.
//!
//! Exit codes: 0 on success, 1 when a verification or computation fails,
//! 2 for invalid parameters or usage.

mod config;
mod render;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use config::{CommonOpts, OutputFormat, RunConfig};
use morse_susy::morse::{h_tilde_coefficients, shifted_operator};
use morse_susy::orthopoly::{
    eval_closed_form, eval_recursion, family_degree_cap, kernel_poly, p_at_zero_recursion,
    partner_closed_form, FamilyKind,
};
use morse_susy::spectrum::{bound_energies, partner_measure, spectral_measure};
use morse_susy::susy::{
    closed_form_cd, factor_from_polynomials, partner_coefficients_closed, partner_operator,
    FactorCoefficients,
};
use morse_susy::verify::{registry, Check, CheckContext};
use render::{render_csv, render_json, Cell};

#[derive(Parser)]
#[command(
    name = "morse-susy",
    version,
    about = "Tridiagonal SUSY factorization of the Morse oscillator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bound-state energies, weights, and the partner spectrum
    Spectrum {
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Tridiagonal and factorization coefficient table
    Coefficients {
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Polynomial families and kernel polynomials over the energy grid
    Poly {
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Factorization coefficients from both routes
    Factor {
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Discrete weights and continuous densities of both measures
    Measure {
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Run the verification checks
    Verify {
        #[command(flatten)]
        opts: CommonOpts,
        /// Include the finite-difference oracle checks
        #[arg(long)]
        oracle: bool,
        /// Run only the named checks (repeatable); see --list
        #[arg(long = "only", value_name = "NAME")]
        only: Vec<String>,
        /// List available checks and exit
        #[arg(long)]
        list: bool,
        /// Test hook: perturb the off-diagonal coefficient at this index
        #[arg(long = "corrupt-b", value_name = "INDEX", hide = true)]
        corrupt_b: Option<usize>,
    },
}

enum CmdError {
    /// Exit code 2.
    Invalid(String),
    /// Exit code 1.
    Runtime(String),
}

impl From<morse_susy::Error> for CmdError {
    fn from(e: morse_susy::Error) -> Self {
        match e {
            morse_susy::Error::InvalidParameter(_) | morse_susy::Error::Domain(_) => {
                CmdError::Invalid(e.to_string())
            }
            other => CmdError::Runtime(other.to_string()),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match dispatch(cli) {
        Ok((output, code)) => {
            print!("{output}");
            code
        }
        Err(CmdError::Invalid(message)) => {
            eprintln!("error: {message}");
            2
        }
        Err(CmdError::Runtime(message)) => {
            eprintln!("error: {message}");
            1
        }
    };
    std::process::exit(code);
}

fn dispatch(cli: Cli) -> Result<(String, i32), CmdError> {
    match cli.command {
        Command::Spectrum { opts } => {
            let cfg = resolve(&opts)?;
            Ok((cmd_spectrum(&cfg)?, 0))
        }
        Command::Coefficients { opts } => {
            let cfg = resolve(&opts)?;
            Ok((cmd_coefficients(&cfg)?, 0))
        }
        Command::Poly { opts } => {
            let cfg = resolve(&opts)?;
            Ok((cmd_poly(&cfg)?, 0))
        }
        Command::Factor { opts } => {
            let cfg = resolve(&opts)?;
            Ok((cmd_factor(&cfg)?, 0))
        }
        Command::Measure { opts } => {
            let cfg = resolve(&opts)?;
            Ok((cmd_measure(&cfg)?, 0))
        }
        Command::Verify {
            opts,
            oracle,
            only,
            list,
            corrupt_b,
        } => {
            if list {
                let mut out = String::new();
                for check in registry() {
                    out.push_str(&format!("{:<24} {}\n", check.name(), check.description()));
                }
                return Ok((out, 0));
            }
            let cfg = resolve(&opts)?;
            cmd_verify(&cfg, oracle, &only, corrupt_b)
        }
    }
}

fn resolve(opts: &CommonOpts) -> Result<RunConfig, CmdError> {
    opts.resolve().map_err(CmdError::Invalid)
}

fn json_num(x: f64) -> Value {
    // serde_json maps non-finite floats to null, which is what we want for
    // "not applicable" slots; finite values round-trip exactly.
    Value::from(x)
}

fn cmd_spectrum(cfg: &RunConfig) -> Result<String, CmdError> {
    let params = &cfg.params;
    let set = bound_energies(params)?;
    let measure = spectral_measure(params)?;
    let partner = partner_measure(params)?;

    match cfg.format {
        OutputFormat::Csv => {
            let mut rows = Vec::new();
            for m in 0..set.count {
                let mut row = vec![
                    Cell::Int(m),
                    Cell::Num(set.energies[m]),
                    Cell::Num(set.unshifted[m]),
                    Cell::Num(measure.discrete[m].weight),
                ];
                if m < partner.discrete.len() {
                    row.push(Cell::Num(partner.discrete[m].energy));
                    row.push(Cell::Num(partner.discrete[m].weight));
                } else {
                    row.push(Cell::Empty);
                    row.push(Cell::Empty);
                }
                rows.push(row);
            }
            Ok(render_csv(
                &[
                    "m",
                    "energy",
                    "energy_unshifted",
                    "weight",
                    "partner_energy",
                    "partner_weight",
                ],
                &rows,
                &[],
            ))
        }
        OutputFormat::Json => {
            let bound_states: Vec<Value> = (0..set.count)
                .map(|m| {
                    json!({
                        "m": m,
                        "energy": json_num(set.energies[m]),
                        "energy_unshifted": json_num(set.unshifted[m]),
                        "weight": json_num(measure.discrete[m].weight),
                    })
                })
                .collect();
            let partner_states: Vec<Value> = partner
                .discrete
                .iter()
                .map(|p| {
                    json!({
                        "m": p.m,
                        "energy": json_num(p.energy),
                        "weight": json_num(p.weight),
                    })
                })
                .collect();
            Ok(render_json(&json!({
                "bound_states": bound_states,
                "partner": partner_states,
                "continuum_edge": json_num(measure.continuous_edge),
            })))
        }
    }
}

fn truncates_at(params: &morse_susy::MorseParams, n: usize) -> bool {
    (n as f64 + params.gamma + 0.5 - params.depth).abs() < 1e-9
}

fn cmd_coefficients(cfg: &RunConfig) -> Result<String, CmdError> {
    let params = &cfg.params;
    let row_values = |n: usize| {
        let (a_tilde, b) = h_tilde_coefficients(params, n);
        let a = a_tilde + params.shift;
        let (c, d) = closed_form_cd(params, n);
        let (a_plus, b_plus) = partner_coefficients_closed(params, n);
        (a_tilde, a, b, c, d, a_plus, b_plus)
    };

    match cfg.format {
        OutputFormat::Csv => {
            let rows: Vec<Vec<Cell>> = (0..=cfg.nmax)
                .map(|n| {
                    let (a_tilde, a, b, c, d, a_plus, b_plus) = row_values(n);
                    vec![
                        Cell::Int(n),
                        Cell::Num(a_tilde),
                        Cell::Num(a),
                        Cell::Num(b),
                        Cell::Num(c),
                        Cell::Num(d),
                        Cell::Num(a_plus),
                        Cell::Num(b_plus),
                        Cell::Bool(truncates_at(params, n)),
                    ]
                })
                .collect();
            Ok(render_csv(
                &[
                    "n",
                    "a_tilde",
                    "a",
                    "b",
                    "c",
                    "d_next",
                    "a_plus",
                    "b_plus",
                    "truncates",
                ],
                &rows,
                &[],
            ))
        }
        OutputFormat::Json => {
            let rows: Vec<Value> = (0..=cfg.nmax)
                .map(|n| {
                    let (a_tilde, a, b, c, d, a_plus, b_plus) = row_values(n);
                    json!({
                        "n": n,
                        "a_tilde": json_num(a_tilde),
                        "a": json_num(a),
                        "b": json_num(b),
                        "c": json_num(c),
                        "d_next": json_num(d),
                        "a_plus": json_num(a_plus),
                        "b_plus": json_num(b_plus),
                        "truncates": truncates_at(params, n),
                    })
                })
                .collect();
            Ok(render_json(&json!({ "rows": rows })))
        }
    }
}

fn cmd_poly(cfg: &RunConfig) -> Result<String, CmdError> {
    let params = &cfg.params;
    let n_top =
        family_degree_cap(params, FamilyKind::Original).map_or(cfg.nmax, |c| cfg.nmax.min(c));
    let partner_top =
        family_degree_cap(params, FamilyKind::Partner).map_or(cfg.nmax, |c| cfg.nmax.min(c));
    let op = shifted_operator(params);
    let partner_op = partner_operator(&FactorCoefficients::closed_form(params));

    let mut max_discrepancy = 0.0_f64;
    let mut csv_rows = Vec::new();
    let mut json_rows = Vec::new();
    for &energy in &cfg.energy_grid() {
        let rec = eval_recursion(&op, energy, n_top)?;
        let partner_rec = eval_recursion(&partner_op, energy, partner_top)?;
        for n in 0..=n_top {
            let closed = eval_closed_form(params, energy, n)?;
            max_discrepancy = max_discrepancy.max((closed - rec[n]).abs() / rec[n].abs().max(1.0));
            let kernel = kernel_poly(&op, energy, n)?;
            let partner_pair = if n <= partner_top {
                let p_closed = partner_closed_form(params, energy, n)?;
                max_discrepancy = max_discrepancy
                    .max((p_closed - partner_rec[n]).abs() / partner_rec[n].abs().max(1.0));
                Some((partner_rec[n], p_closed))
            } else {
                None
            };
            csv_rows.push(vec![
                Cell::Num(energy),
                Cell::Int(n),
                Cell::Num(rec[n]),
                Cell::Num(closed),
                partner_pair.map_or(Cell::Empty, |p| Cell::Num(p.0)),
                partner_pair.map_or(Cell::Empty, |p| Cell::Num(p.1)),
                Cell::Num(kernel),
            ]);
            json_rows.push(json!({
                "energy": json_num(energy),
                "n": n,
                "p_recursion": json_num(rec[n]),
                "p_closed_form": json_num(closed),
                "p_plus_recursion": partner_pair.map_or(Value::Null, |p| json_num(p.0)),
                "p_plus_closed_form": partner_pair.map_or(Value::Null, |p| json_num(p.1)),
                "kernel": json_num(kernel),
            }));
        }
    }

    match cfg.format {
        OutputFormat::Csv => Ok(render_csv(
            &[
                "energy",
                "n",
                "p_recursion",
                "p_closed_form",
                "p_plus_recursion",
                "p_plus_closed_form",
                "kernel",
            ],
            &csv_rows,
            &[("max_discrepancy".into(), max_discrepancy)],
        )),
        OutputFormat::Json => Ok(render_json(&json!({
            "rows": json_rows,
            "max_discrepancy": json_num(max_discrepancy),
        }))),
    }
}

fn cmd_factor(cfg: &RunConfig) -> Result<String, CmdError> {
    let params = &cfg.params;
    let op = shifted_operator(params);

    // The polynomial route needs P_0(0)..P_{n+1}(0), which exist only below
    // the natural truncation.
    let poly_top = match family_degree_cap(params, FamilyKind::Original) {
        Some(0) => None,
        Some(cap) => Some(cfg.nmax.min(cap - 1)),
        None => Some(cfg.nmax),
    };
    let mut poly_route: Vec<(f64, f64)> = Vec::new();
    let mut max_route_deviation = 0.0_f64;
    if let Some(top) = poly_top {
        let p0 = p_at_zero_recursion(params, top + 1)?;
        let (fc, _clamped) = factor_from_polynomials(&op, &p0, top)?;
        for n in 0..=top {
            let (c, d) = closed_form_cd(params, n);
            let (cp, dp) = (fc.c(n), fc.d(n + 1));
            max_route_deviation = max_route_deviation
                .max((cp - c).abs() / c.abs().max(1.0))
                .max((dp - d).abs() / d.abs().max(1.0));
            poly_route.push((cp, dp));
        }
    }

    match cfg.format {
        OutputFormat::Csv => {
            let rows: Vec<Vec<Cell>> = (0..=cfg.nmax)
                .map(|n| {
                    let (c, d) = closed_form_cd(params, n);
                    let (cp, dp) = poly_route
                        .get(n)
                        .map_or((Cell::Empty, Cell::Empty), |&(cp, dp)| {
                            (Cell::Num(cp), Cell::Num(dp))
                        });
                    vec![Cell::Int(n), Cell::Num(c), Cell::Num(d), cp, dp]
                })
                .collect();
            Ok(render_csv(
                &["n", "c", "d_next", "c_poly", "d_next_poly"],
                &rows,
                &[("max_route_deviation".into(), max_route_deviation)],
            ))
        }
        OutputFormat::Json => {
            let rows: Vec<Value> = (0..=cfg.nmax)
                .map(|n| {
                    let (c, d) = closed_form_cd(params, n);
                    let pair = poly_route.get(n);
                    json!({
                        "n": n,
                        "c": json_num(c),
                        "d_next": json_num(d),
                        "c_poly": pair.map_or(Value::Null, |p| json_num(p.0)),
                        "d_next_poly": pair.map_or(Value::Null, |p| json_num(p.1)),
                    })
                })
                .collect();
            Ok(render_json(&json!({
                "rows": rows,
                "max_route_deviation": json_num(max_route_deviation),
            })))
        }
    }
}

fn cmd_measure(cfg: &RunConfig) -> Result<String, CmdError> {
    let params = &cfg.params;
    let measures = [
        ("original", spectral_measure(params)?),
        ("partner", partner_measure(params)?),
    ];
    let grid = cfg.energy_grid();

    match cfg.format {
        OutputFormat::Csv => {
            let mut rows = Vec::new();
            for (family, measure) in &measures {
                for point in &measure.discrete {
                    rows.push(vec![
                        Cell::Text(family.to_string()),
                        Cell::Text("discrete".into()),
                        Cell::Int(point.m),
                        Cell::Num(point.energy),
                        Cell::Num(point.weight),
                    ]);
                }
                for (i, &energy) in grid.iter().enumerate() {
                    if energy <= measure.continuous_edge {
                        continue;
                    }
                    rows.push(vec![
                        Cell::Text(family.to_string()),
                        Cell::Text("density".into()),
                        Cell::Int(i),
                        Cell::Num(energy),
                        Cell::Num(measure.density(energy)?),
                    ]);
                }
            }
            Ok(render_csv(
                &["family", "kind", "index", "energy", "value"],
                &rows,
                &[],
            ))
        }
        OutputFormat::Json => {
            let mut families = serde_json::Map::new();
            for (family, measure) in &measures {
                let discrete: Vec<Value> = measure
                    .discrete
                    .iter()
                    .map(|p| {
                        json!({
                            "m": p.m,
                            "energy": json_num(p.energy),
                            "weight": json_num(p.weight),
                        })
                    })
                    .collect();
                let mut density = Vec::new();
                for &energy in &grid {
                    if energy <= measure.continuous_edge {
                        continue;
                    }
                    density.push(json!({
                        "energy": json_num(energy),
                        "value": json_num(measure.density(energy)?),
                    }));
                }
                families.insert(
                    family.to_string(),
                    json!({
                        "continuum_edge": json_num(measure.continuous_edge),
                        "discrete": discrete,
                        "density": density,
                    }),
                );
            }
            Ok(render_json(&Value::Object(families)))
        }
    }
}

fn cmd_verify(
    cfg: &RunConfig,
    oracle: bool,
    only: &[String],
    corrupt_b: Option<usize>,
) -> Result<(String, i32), CmdError> {
    let mut cx = CheckContext::new(cfg.params);
    if let Some(index) = corrupt_b {
        let original = shifted_operator(&cfg.params).offdiag(index);
        cx.corrupt_offdiag = Some((index, original + 0.37 * (1.0 + original.abs())));
    }

    let selected: Vec<Box<dyn Check>> = if only.is_empty() {
        registry()
            .into_iter()
            .filter(|c| oracle || !c.requires_oracle())
            .collect()
    } else {
        let mut picked = Vec::new();
        for name in only {
            match registry().into_iter().find(|c| c.name() == name.as_str()) {
                Some(check) => picked.push(check),
                None => {
                    return Err(CmdError::Invalid(format!(
                        "unknown check `{name}`; see verify --list"
                    )))
                }
            }
        }
        picked
    };

    let outcomes: Vec<_> = selected
        .iter()
        .map(|check| (check.name(), check.run(&cx)))
        .collect();
    let all_passed = outcomes.iter().all(|(_, o)| o.passed);

    let output = match cfg.format {
        OutputFormat::Csv => {
            let rows: Vec<Vec<Cell>> = outcomes
                .iter()
                .map(|(name, o)| {
                    vec![
                        Cell::Text(name.to_string()),
                        Cell::Text(if o.passed { "PASS" } else { "FAIL" }.into()),
                        Cell::Num(o.max_deviation),
                        Cell::Num(o.tolerance),
                        Cell::Text(o.detail.clone()),
                    ]
                })
                .collect();
            render_csv(
                &["check", "status", "max_deviation", "tolerance", "detail"],
                &rows,
                &[],
            )
        }
        OutputFormat::Json => {
            let checks: Vec<Value> = outcomes
                .iter()
                .map(|(name, o)| {
                    json!({
                        "check": name,
                        "passed": o.passed,
                        "max_deviation": json_num(o.max_deviation),
                        "tolerance": json_num(o.tolerance),
                        "detail": o.detail,
                    })
                })
                .collect();
            render_json(&json!({ "all_passed": all_passed, "checks": checks }))
        }
    };
    Ok((output, if all_passed { 0 } else { 1 }))
}
