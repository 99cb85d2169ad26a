//! Parameter sweeps producing comma-separated tables.
//!
//! Rows follow the grid order deterministically whether computed serially
//! (the default) or by the opt-in worker pool; all values carry 17
//! significant digits and lines end with LF.

use crate::Failure;
use qroof::entanglement::{capacity_amplitude_damping, capacity_numeric, CapacityOptions};
use qroof::{
    concurrence, density_from_bloch, entanglement_e, entropy_h, nats_to_bits, BlochVector,
    ChannelSpec, DensityOperator,
};

/// Quantity computed per grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Quantity {
    /// Concurrence `C(T; ρ)`.
    Concurrence,
    /// Entanglement `E(T; ρ) = h₂(C)`.
    Entanglement,
    /// Entropy with respect to the channel, `H(T; ρ) = S(T(ρ)) − E`.
    Entropy,
    /// One-shot capacity (maximized over input states).
    Capacity,
}

/// The swept parameter: a channel parameter or a Bloch coordinate of the
/// base state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parameter {
    P,
    Z,
    X1,
    X2,
    X3,
}

impl Parameter {
    pub fn parse(name: &str) -> Result<Self, Failure> {
        match name {
            "p" => Ok(Self::P),
            "z" => Ok(Self::Z),
            "x1" => Ok(Self::X1),
            "x2" => Ok(Self::X2),
            "x3" => Ok(Self::X3),
            other => Err(Failure::Usage(format!(
                "unknown sweep parameter `{other}` (expected p, z, x1, x2, or x3)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::P => "p",
            Self::Z => "z",
            Self::X1 => "x1",
            Self::X2 => "x2",
            Self::X3 => "x3",
        }
    }

    fn is_state_coordinate(&self) -> bool {
        matches!(self, Self::X1 | Self::X2 | Self::X3)
    }
}

pub struct SweepPlan {
    pub quantity: Quantity,
    pub channel: ChannelSpec,
    pub state: Option<DensityOperator>,
    pub parameter: Parameter,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub bits: bool,
    pub jobs: usize,
}

impl SweepPlan {
    /// Validates parameter/channel/state compatibility (sweep preconditions).
    fn check(&self) -> Result<(), Failure> {
        match self.parameter {
            Parameter::P => {
                if !matches!(self.channel, ChannelSpec::AmplitudeDamping { .. }) {
                    return Err(Failure::Usage(
                        "parameter `p` belongs to amplitude_damping channels".into(),
                    ));
                }
            }
            Parameter::Z => {
                if !matches!(self.channel, ChannelSpec::PhaseDamping { .. }) {
                    return Err(Failure::Usage(
                        "parameter `z` belongs to phase_damping channels".into(),
                    ));
                }
            }
            _ => {}
        }
        if self.parameter.is_state_coordinate() && self.state.is_none() {
            return Err(Failure::Usage(format!(
                "sweeping `{}` requires --state with the base state",
                self.parameter.name()
            )));
        }
        if self.quantity != Quantity::Capacity && self.state.is_none() {
            return Err(Failure::Usage(
                "this quantity requires --state (only capacity sweeps run without one)"
                    .into(),
            ));
        }
        if self.steps < 2 {
            return Err(Failure::Usage("--steps must be at least 2".into()));
        }
        if !(self.from.is_finite() && self.to.is_finite()) {
            return Err(Failure::Usage("--from/--to must be finite".into()));
        }
        Ok(())
    }

    fn quantity_column(&self) -> &'static str {
        match (self.quantity, self.bits) {
            (Quantity::Concurrence, _) => "concurrence",
            (Quantity::Entanglement, _) => "E",
            (Quantity::Entropy, _) => "H",
            (Quantity::Capacity, false) => "capacity_nats",
            (Quantity::Capacity, true) => "capacity_bits",
        }
    }

    /// The channel/state pair at one grid value.
    fn instance(&self, value: f64) -> Result<(ChannelSpec, Option<DensityOperator>), Failure> {
        let mut channel = self.channel;
        let mut state = self.state;
        match self.parameter {
            Parameter::P => {
                channel = ChannelSpec::amplitude_damping(value)
                    .map_err(|e| Failure::Usage(format!("p = {value}: {e}")))?;
            }
            Parameter::Z => {
                channel = ChannelSpec::phase_damping(qroof::c64(value, 0.0))
                    .map_err(|e| Failure::Usage(format!("z = {value}: {e}")))?;
            }
            Parameter::X1 | Parameter::X2 | Parameter::X3 => {
                let base = self.state.expect("checked by `check`").bloch();
                let b = match self.parameter {
                    Parameter::X1 => BlochVector::new(value, base.x2, base.x3),
                    Parameter::X2 => BlochVector::new(base.x1, value, base.x3),
                    _ => BlochVector::new(base.x1, base.x2, value),
                };
                state = Some(density_from_bloch(b).map_err(|e| {
                    Failure::Usage(format!("{} = {value}: {e}", self.parameter.name()))
                })?);
            }
        }
        Ok((channel, state))
    }

    /// One table row (without trailing newline).
    fn row(&self, value: f64) -> Result<String, Failure> {
        let (channel, state) = self.instance(value)?;
        let scale = |nats: f64| if self.bits { nats_to_bits(nats) } else { nats };
        let cells = match self.quantity {
            Quantity::Concurrence => {
                let rho = state.expect("checked by `check`");
                vec![concurrence(&channel, &rho).0.value()]
            }
            Quantity::Entanglement => {
                let rho = state.expect("checked by `check`");
                vec![scale(entanglement_e(&channel, &rho).map_err(Failure::invariant)?)]
            }
            Quantity::Entropy => {
                let rho = state.expect("checked by `check`");
                vec![scale(entropy_h(&channel, &rho).map_err(Failure::invariant)?)]
            }
            Quantity::Capacity => {
                let result = match channel {
                    ChannelSpec::AmplitudeDamping { p } => {
                        capacity_amplitude_damping(p, 1e-10).map_err(Failure::invariant)?
                    }
                    _ => capacity_numeric(&channel, &CapacityOptions::default())
                        .map_err(Failure::invariant)?,
                };
                vec![scale(result.capacity), result.maximizer_r]
            }
        };
        let mut line = format!("{value:.16e}");
        for cell in cells {
            line.push_str(&format!(",{cell:.16e}"));
        }
        Ok(line)
    }

    /// The full table: header plus one row per grid point, LF endings.
    pub fn table(&self) -> Result<String, Failure> {
        self.check()?;
        let header = match self.quantity {
            Quantity::Capacity => {
                format!("{},{},r0", self.parameter.name(), self.quantity_column())
            }
            _ => format!("{},{}", self.parameter.name(), self.quantity_column()),
        };
        let grid: Vec<f64> = (0..self.steps)
            .map(|i| {
                self.from + (self.to - self.from) * (i as f64) / ((self.steps - 1) as f64)
            })
            .collect();

        let rows: Vec<Result<String, Failure>> = if self.jobs <= 1 {
            grid.iter().map(|&v| self.row(v)).collect()
        } else {
            // Opt-in worker pool; rows are stitched back in grid order so
            // the output is identical to the serial one.
            let workers = self.jobs.min(grid.len());
            let mut slots: Vec<Option<Result<String, Failure>>> =
                (0..grid.len()).map(|_| None).collect();
            std::thread::scope(|scope| {
                let handles: Vec<_> = (0..workers)
                    .map(|w| {
                        let grid = &grid;
                        let plan = &*self;
                        scope.spawn(move || {
                            let mut out = Vec::new();
                            let mut i = w;
                            while i < grid.len() {
                                out.push((i, plan.row(grid[i])));
                                i += workers;
                            }
                            out
                        })
                    })
                    .collect();
                for handle in handles {
                    for (i, row) in handle.join().expect("sweep worker") {
                        slots[i] = Some(row);
                    }
                }
            });
            slots.into_iter().map(|s| s.expect("every row computed")).collect()
        };

        let mut table = header;
        table.push('\n');
        for row in rows {
            table.push_str(&row?);
            table.push('\n');
        }
        Ok(table)
    }
}
