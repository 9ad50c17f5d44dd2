use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};

use clap::ValueEnum;

use crate::u2param::PointInteraction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureId {
    Fig2,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
}

impl FigureId {
    pub fn as_str(&self) -> &'static str {
        match self {
            FigureId::Fig2 => "fig2",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6 => "fig6",
            FigureId::Fig7 => "fig7",
            FigureId::Fig8 => "fig8",
            FigureId::Fig9 => "fig9",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variant {
    pub label: &'static str,
    pub p1: PointInteraction,
    /// `None` for single-interaction figures.
    pub p2: Option<PointInteraction>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub id: FigureId,
    pub variants: Vec<Variant>,
    pub k_min: f64,
    pub k_max: f64,
}

fn point(lp: f64, lm: f64, mu: f64, xi: f64) -> PointInteraction {
    PointInteraction::finite(lp, lm, mu, 0.0, xi).expect("preset parameters are valid")
}

fn pair(label: &'static str, a: (f64, f64, f64), b: (f64, f64, f64), d: f64) -> Variant {
    Variant {
        label,
        p1: point(a.0, a.1, a.2, 0.0),
        p2: Some(point(b.0, b.1, b.2, d)),
    }
}

/// Spacing that makes the fig9 pair resonate at `k = sqrt(1.25)`.
pub fn fig9_spacing() -> f64 {
    let k = 1.25_f64.sqrt();
    (PI - (k / 2.0).atan()) / k
}

pub fn preset(id: FigureId) -> FigurePreset {
    let s3 = 3.0_f64.sqrt();
    let (variants, k_max) = match id {
        FigureId::Fig2 => (
            vec![Variant {
                label: "fig2",
                p1: point(2.0, 0.5, FRAC_PI_2, 0.0),
                p2: None,
            }],
            5.0,
        ),
        FigureId::Fig5 => (
            vec![
                pair("mu=pi/2", (0.5, -1.0, FRAC_PI_2), (0.5, -1.0, FRAC_PI_2), 1.0),
                pair("mu=pi/3", (0.5, -1.0, FRAC_PI_3), (0.5, -1.0, FRAC_PI_3), 1.0),
                pair("mu=pi/4", (0.5, -1.0, FRAC_PI_4), (0.5, -1.0, FRAC_PI_4), 1.0),
            ],
            10.0,
        ),
        FigureId::Fig6 => (
            vec![pair("fig6", (1.0, -0.5, FRAC_PI_3), (1.0, -0.5, 2.0 * FRAC_PI_3), 1.0)],
            10.0,
        ),
        FigureId::Fig7 => (
            vec![pair("fig7", (10.0, 1.0, FRAC_PI_3), (-1.0, -10.0, 2.0 * FRAC_PI_3), 1.0)],
            10.0,
        ),
        FigureId::Fig8 => (
            vec![pair(
                "fig8",
                ((1.0 + s3) / 2.0, (1.0 - s3) / 2.0, FRAC_PI_6),
                ((1.0 - s3) / 2.0, -(1.0 + s3) / 2.0, FRAC_PI_3),
                1.0,
            )],
            10.0,
        ),
        FigureId::Fig9 => (
            vec![pair("fig9", (3.0, 1.0, FRAC_PI_2), (4.0, -4.0, FRAC_PI_2), fig9_spacing())],
            6.0,
        ),
    };
    FigurePreset {
        id,
        variants,
        k_min: 1e-3,
        k_max,
    }
}
