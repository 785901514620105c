//! Parameter sets of the seven reference figures.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{OpSequence, Order};
use crate::observables::GridParams;
use crate::states::{Family, StateSpec};

/// What one panel plots.
#[derive(Debug, Clone, PartialEq)]
pub enum PanelContent {
    Pnd { spec: StateSpec, seq: OpSequence },
    Wigner { spec: StateSpec, seq: OpSequence, grid: GridParams },
    /// `Q` against `n̄` (thermal) or `|α|` (even coherent, real `α`), one
    /// curve per sequence.
    QSweep {
        family: Family,
        curves: Vec<OpSequence>,
        x_min: f64,
        x_max: f64,
        points: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub figure: u8,
    pub label: char,
    pub content: PanelContent,
}

impl Panel {
    /// File stem such as `fig2_d`.
    pub fn name(&self) -> String {
        format!("fig{}_{}", self.figure, self.label)
    }
}

pub const FIGURE_IDS: std::ops::RangeInclusive<u8> = 1..=7;

/// Swept `x` values, evenly spaced and inclusive of both ends.
pub fn sweep_points(x_min: f64, x_max: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![x_min];
    }
    (0..points)
        .map(|i| x_min + (x_max - x_min) * i as f64 / (points - 1) as f64)
        .collect()
}

/// Seed at sweep coordinate `x`.
pub fn sweep_spec(family: Family, x: f64) -> Result<StateSpec> {
    match family {
        Family::Thermal => StateSpec::thermal(x),
        Family::EvenCoherent => StateSpec::even_coherent(Complex64::new(x, 0.0)),
    }
}

fn six(figure: u8, spec: StateSpec, sets: [(usize, usize); 6], wigner: bool) -> Vec<Panel> {
    sets.iter()
        .zip('a'..='f')
        .enumerate()
        .map(|(i, (&(p, q), label))| {
            let order = if i < 3 { Order::AddThenSubtract } else { Order::SubtractThenAdd };
            let seq = OpSequence::new(p, q, order);
            let content = if wigner {
                PanelContent::Wigner {
                    spec,
                    seq,
                    grid: GridParams::default(),
                }
            } else {
                PanelContent::Pnd { spec, seq }
            };
            Panel { figure, label, content }
        })
        .collect()
}

fn sweeps(figure: u8, family: Family, x_min: f64, x_max: f64, points: usize, panels: [(Order, [(usize, usize); 3]); 4]) -> Vec<Panel> {
    panels
        .iter()
        .zip('a'..='d')
        .map(|((order, sets), label)| Panel {
            figure,
            label,
            content: PanelContent::QSweep {
                family,
                curves: sets.iter().map(|&(p, q)| OpSequence::new(p, q, *order)).collect(),
                x_min,
                x_max,
                points,
            },
        })
        .collect()
}

/// Panels of figure `id` (1 to 7).
pub fn figure(id: u8) -> Result<Vec<Panel>> {
    use Order::{AddThenSubtract as Sa, SubtractThenAdd as As};
    let real = |a: f64| StateSpec::even_coherent(Complex64::new(a, 0.0));
    let panels = match id {
        1 => six(1, StateSpec::thermal(0.25)?, [(2, 2), (4, 2), (8, 6), (2, 2), (4, 2), (8, 6)], false),
        2 => six(2, StateSpec::thermal(0.04)?, [(1, 1), (4, 12), (8, 12), (1, 1), (2, 4), (2, 6)], true),
        3 => sweeps(
            3,
            Family::Thermal,
            0.02,
            1.0,
            50,
            [
                (Sa, [(3, 1), (5, 1), (7, 1)]),
                (Sa, [(7, 1), (7, 2), (7, 3)]),
                (As, [(2, 2), (4, 2), (6, 2)]),
                (As, [(4, 2), (4, 4), (4, 6)]),
            ],
        ),
        4 => six(4, real(2.0)?, [(1, 1), (8, 4), (16, 4), (1, 1), (4, 8), (4, 12)], false),
        5 => six(5, real(1.0)?, [(1, 1), (2, 1), (3, 1), (1, 1), (2, 1), (3, 1)], true),
        6 => [1, 5]
            .iter()
            .zip('a'..='b')
            .map(|(&p, label)| -> Result<Panel> {
                Ok(Panel {
                    figure: 6,
                    label,
                    content: PanelContent::Wigner {
                        spec: real(0.1)?,
                        seq: OpSequence::add_then_subtract(p, 0),
                        grid: GridParams::default(),
                    },
                })
            })
            .collect::<Result<Vec<_>>>()?,
        7 => sweeps(
            7,
            Family::EvenCoherent,
            0.05,
            2.0,
            40,
            [
                (Sa, [(1, 1), (2, 1), (3, 1)]),
                (Sa, [(1, 1), (1, 2), (1, 3)]),
                (As, [(1, 1), (2, 1), (3, 1)]),
                (As, [(1, 1), (1, 2), (1, 3)]),
            ],
        ),
        other => return Err(Error::Domain(format!("unknown figure {other} (expected 1 to 7)"))),
    };
    Ok(panels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panel_counts_and_names() {
        let counts: Vec<usize> = FIGURE_IDS.map(|id| figure(id).unwrap().len()).collect();
        assert_eq!(counts, vec![6, 6, 4, 6, 6, 2, 4]);
        assert_eq!(figure(2).unwrap()[3].name(), "fig2_d");
        assert!(figure(0).is_err());
        assert!(figure(8).is_err());
    }

    #[test]
    fn sweep_grid_is_inclusive() {
        let xs = sweep_points(0.02, 1.0, 50);
        assert_eq!(xs.len(), 50);
        assert_eq!(xs[0], 0.02);
        assert!((xs[49] - 1.0).abs() < 1e-15);
    }
}
