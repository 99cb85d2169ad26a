//! Command-line front end: single-shot computations, parameter sweeps, and
//! the self-verification suite.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse failure,
//! 3 invariant violation during computation.

mod files;
mod sweep;

use clap::{Parser, Subcommand};
use qroof::concurrence::concurrence_theta;
use qroof::entanglement::{capacity_amplitude_damping, capacity_numeric, CapacityOptions};
use qroof::foliation::{leaf_through, optimal_decomposition, LeafKind};
use qroof::roof::DEFAULT_BUDGET;
use qroof::{
    concurrence, entanglement_e, holevo_chi, nats_to_bits, theta_from_kraus, ChannelSpec,
    ConcurrenceMethod, DensityOperator, Ensemble,
};
use serde_json::json;
use std::path::{Path, PathBuf};

/// How a command failed, mapped onto the exit codes above.
#[derive(Debug)]
pub enum Failure {
    /// Unusable input: bad flags, unreadable or invalid spec files.
    Usage(String),
    /// The computation itself rejected the input or failed a cross-check.
    Invariant(String),
    /// The verification suite ran and reported failing properties.
    VerifyFailed,
}

impl Failure {
    pub fn invariant(e: qroof::Error) -> Self {
        Self::Invariant(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "qroof",
    version,
    about = "Entanglement measures, optimal decompositions, and capacities \
             for one-qubit channels of length two"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Concurrence C(T; ρ), with the generic θ-route value alongside the
    /// preferred route for cross-checking.
    Concurrence {
        /// Channel spec file (JSON).
        #[arg(long)]
        channel: PathBuf,
        /// State spec file (JSON).
        #[arg(long)]
        state: PathBuf,
    },
    /// Entanglement E(T; ρ) = h₂(C), the convex roof of the output entropy.
    Entanglement {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long)]
        state: PathBuf,
        /// Report entropic quantities in bits instead of nats.
        #[arg(long)]
        bits: bool,
    },
    /// Entropy with respect to the channel, H(T; ρ) = S(T(ρ)) − E(T; ρ).
    Entropy {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        bits: bool,
    },
    /// Holevo quantity χ of an ensemble, optionally after a channel.
    Chi {
        /// Ensemble spec file (JSON).
        #[arg(long)]
        ensemble: PathBuf,
        /// Channel applied to every member first; omitted means identity.
        #[arg(long)]
        channel: Option<PathBuf>,
        #[arg(long)]
        bits: bool,
    },
    /// One-shot classical capacity, maximized over input states.
    Capacity {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long)]
        bits: bool,
        /// Seed for the generic Bloch-ball search (the amplitude-damping
        /// profile route is deterministic and ignores it).
        #[arg(long, default_value_t = 11)]
        seed: u64,
    },
    /// The leaf of the concurrence foliation through a state, with the
    /// geometric optimal decomposition for trace-preserving channels.
    Foliation {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        bits: bool,
    },
    /// Sweep one parameter and write a comma-separated table.
    Sweep {
        /// Quantity computed per grid point.
        #[arg(long, value_enum)]
        quantity: sweep::Quantity,
        #[arg(long)]
        channel: PathBuf,
        /// Base state; required for state-coordinate sweeps and all
        /// quantities except capacity.
        #[arg(long)]
        state: Option<PathBuf>,
        /// Swept parameter: p, z (channel) or x1, x2, x3 (state).
        #[arg(long)]
        parameter: String,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        /// Number of grid points (rows), endpoints included.
        #[arg(long)]
        steps: usize,
        /// Output file for the table.
        #[arg(long)]
        output: PathBuf,
        /// Opt-in worker count; the row order is identical either way.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        bits: bool,
    },
    /// Run the property suite and print one pass/fail line per property.
    Verify {
        #[arg(long, default_value_t = 41)]
        seed: u64,
        /// Cases per sampled property; omit to run the pinned full suite.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        cases: Option<u64>,
        /// Roof-search evaluation budget; only meaningful with --cases.
        #[arg(long)]
        budget: Option<u64>,
    },
}

/// Restores the default SIGPIPE disposition so piping into `head` and
/// friends ends the process quietly instead of panicking on a closed pipe.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn main() {
    reset_sigpipe();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests print to stdout and succeed; real
            // argument errors land on stderr with the usage exit code.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli.command) {
        Ok(()) => {}
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("invariant violation: {msg}");
            std::process::exit(3);
        }
        Err(Failure::VerifyFailed) => std::process::exit(1),
    }
}

fn load_channel(path: &Path) -> Result<ChannelSpec, Failure> {
    let doc: files::ChannelSpecFile = files::load(path).map_err(Failure::Usage)?;
    doc.to_spec().map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_state(path: &Path) -> Result<DensityOperator, Failure> {
    let doc: files::StateSpecFile = files::load(path).map_err(Failure::Usage)?;
    doc.to_state().map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_ensemble(path: &Path) -> Result<Ensemble, Failure> {
    let doc: files::EnsembleSpecFile = files::load(path).map_err(Failure::Usage)?;
    doc.to_ensemble().map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn unit_name(bits: bool) -> &'static str {
    if bits {
        "bits"
    } else {
        "nats"
    }
}

fn scaled(nats: f64, bits: bool) -> f64 {
    if bits {
        nats_to_bits(nats)
    } else {
        nats
    }
}

/// Concurrence along the preferred route, cross-checked against the
/// generic θ route. Returns the value, the route name, and the θ-route
/// value whenever the preferred route is an independent one.
fn checked_concurrence(
    spec: &ChannelSpec,
    rho: &DensityOperator,
) -> Result<(f64, &'static str, Option<f64>), Failure> {
    let (value, method) = concurrence(spec, rho);
    let (a, b) = spec.raw_matrices();
    let via_theta = concurrence_theta(&theta_from_kraus(&a, &b), rho).value();
    if method != ConcurrenceMethod::Theta && (value.value() - via_theta).abs() >= 1e-10 {
        return Err(Failure::Invariant(format!(
            "concurrence routes disagree: {} gave {}, theta gave {via_theta}",
            method.as_str(),
            value.value()
        )));
    }
    let cross = (method != ConcurrenceMethod::Theta).then_some(via_theta);
    Ok((value.value(), method.as_str(), cross))
}

/// Binary entropy of a concurrence, tolerant of end-point rounding.
fn h2_of(c: f64) -> f64 {
    qroof::h2(c.clamp(0.0, 1.0)).expect("clamped to the domain")
}

fn print_doc(doc: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(doc).expect("serializable document"));
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Concurrence { channel, state } => {
            let spec = load_channel(&channel)?;
            let rho = load_state(&state)?;
            let (value, method, cross) = checked_concurrence(&spec, &rho)?;
            let mut doc = json!({
                "channel_kind": spec.kind_name(),
                "method": method,
                "concurrence": value,
            });
            if let Some(c) = cross {
                doc["concurrence_theta"] = json!(c);
            }
            print_doc(&doc);
            Ok(())
        }
        Command::Entanglement { channel, state, bits } => {
            let spec = load_channel(&channel)?;
            let rho = load_state(&state)?;
            let e = entanglement_e(&spec, &rho).map_err(Failure::invariant)?;
            let (_, method, cross) = checked_concurrence(&spec, &rho)?;
            let mut doc = json!({
                "channel_kind": spec.kind_name(),
                "method": method,
                "E": scaled(e, bits),
                "unit": unit_name(bits),
            });
            if let Some(c) = cross {
                doc["E_theta"] = json!(scaled(h2_of(c), bits));
            }
            print_doc(&doc);
            Ok(())
        }
        Command::Entropy { channel, state, bits } => {
            let spec = load_channel(&channel)?;
            let rho = load_state(&state)?;
            let e = entanglement_e(&spec, &rho).map_err(Failure::invariant)?;
            let s_out = spec.apply(&rho).map_err(Failure::invariant)?.entropy();
            let (_, method, cross) = checked_concurrence(&spec, &rho)?;
            let mut doc = json!({
                "channel_kind": spec.kind_name(),
                "method": method,
                "H": scaled(s_out - e, bits),
                "S_output": scaled(s_out, bits),
                "E": scaled(e, bits),
                "unit": unit_name(bits),
            });
            if let Some(c) = cross {
                doc["H_theta"] = json!(scaled(s_out - h2_of(c), bits));
            }
            print_doc(&doc);
            Ok(())
        }
        Command::Chi { ensemble, channel, bits } => {
            let ens = load_ensemble(&ensemble)?;
            let spec = channel.as_deref().map(load_channel).transpose()?;
            let chi = holevo_chi(&ens, spec.as_ref()).map_err(Failure::invariant)?;
            print_doc(&json!({
                "channel_kind": spec.as_ref().map_or("identity", ChannelSpec::kind_name),
                "chi": scaled(chi, bits),
                "unit": unit_name(bits),
            }));
            Ok(())
        }
        Command::Capacity { channel, bits, seed } => {
            let spec = load_channel(&channel)?;
            let (result, method) = match spec {
                ChannelSpec::AmplitudeDamping { p } => (
                    capacity_amplitude_damping(p, 1e-10).map_err(Failure::invariant)?,
                    "diagonal-profile",
                ),
                _ => (
                    capacity_numeric(&spec, &CapacityOptions { seed, ..Default::default() })
                        .map_err(Failure::invariant)?,
                    "bloch-search",
                ),
            };
            let key = if bits { "capacity_bits" } else { "capacity_nats" };
            let mut doc = json!({
                "channel_kind": spec.kind_name(),
                "method": method,
                "r0": result.maximizer_r,
                "converged": result.converged,
            });
            doc[key] = json!(scaled(result.capacity, bits));
            print_doc(&doc);
            Ok(())
        }
        Command::Foliation { channel, state, bits } => {
            let spec = load_channel(&channel)?;
            let rho = load_state(&state)?;
            let leaf = leaf_through(&spec, &rho).map_err(Failure::invariant)?;
            let (c, method, _) = checked_concurrence(&spec, &rho)?;
            let kind = match leaf.kind {
                LeafKind::Line => "line",
                LeafKind::PlaneDisc => "plane_disc",
                LeafKind::Point => "point",
            };
            let endpoints: Vec<_> = leaf
                .endpoints
                .iter()
                .map(|e| {
                    let b = e.bloch();
                    json!([b.x1, b.x2, b.x3])
                })
                .collect();
            let mut doc = json!({
                "channel_kind": spec.kind_name(),
                "method": method,
                "leaf_kind": kind,
                "base": [leaf.base.x1, leaf.base.x2, leaf.base.x3],
                "directions": leaf.directions,
                "endpoints": endpoints,
                "concurrence": c,
            });
            if let Some(r) = leaf.disc_radius {
                doc["disc_radius"] = json!(r);
            }
            if spec.is_trace_preserving() {
                doc["E"] = json!(scaled(
                    entanglement_e(&spec, &rho).map_err(Failure::invariant)?,
                    bits
                ));
                doc["unit"] = json!(unit_name(bits));
                let decomposition =
                    optimal_decomposition(&spec, &rho).map_err(Failure::invariant)?;
                let members: Vec<_> = decomposition
                    .members()
                    .iter()
                    .map(|(w, pi)| {
                        let b = pi.bloch();
                        json!({"weight": w, "bloch": [b.x1, b.x2, b.x3]})
                    })
                    .collect();
                doc["optimal_decomposition"] = json!(members);
            }
            print_doc(&doc);
            Ok(())
        }
        Command::Sweep {
            quantity,
            channel,
            state,
            parameter,
            from,
            to,
            steps,
            output,
            jobs,
            bits,
        } => {
            let plan = sweep::SweepPlan {
                quantity,
                channel: load_channel(&channel)?,
                state: state.as_deref().map(load_state).transpose()?,
                parameter: sweep::Parameter::parse(&parameter)?,
                from,
                to,
                steps,
                bits,
                jobs: jobs.max(1),
            };
            let table = plan.table()?;
            std::fs::write(&output, table)
                .map_err(|e| Failure::Usage(format!("{}: {e}", output.display())))?;
            Ok(())
        }
        Command::Verify { seed, cases, budget } => {
            let reports = match cases {
                None => {
                    if budget.is_some() {
                        return Err(Failure::Usage(
                            "--budget needs --cases; the pinned suite sets its own budgets"
                                .into(),
                        ));
                    }
                    println!("verification suite: seed={seed} cases=pinned");
                    qroof::run_all(seed)
                }
                Some(n) => {
                    let budget = budget.unwrap_or(5 * DEFAULT_BUDGET as u64) as usize;
                    if budget < DEFAULT_BUDGET {
                        return Err(Failure::Usage(format!(
                            "--budget below the roof-search minimum of {DEFAULT_BUDGET}"
                        )));
                    }
                    println!(
                        "verification suite: seed={seed} cases={n} budget={budget}"
                    );
                    qroof::run_with(seed, n as usize, budget)
                }
            };
            for report in &reports {
                println!("{}", report.summary_line());
            }
            let passed = reports.iter().filter(|r| r.passed).count();
            let ok = passed == reports.len();
            println!(
                "result: {} ({passed}/{} properties)",
                if ok { "PASS" } else { "FAIL" },
                reports.len()
            );
            if ok {
                Ok(())
            } else {
                Err(Failure::VerifyFailed)
            }
        }
    }
}
