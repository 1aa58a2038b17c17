//! Per-family bound formulas, kept as data.

use crate::adversary::Family;

/// `(coef * 2^(d-2) + offset) / div`, or `(coef + offset) / div` when the
/// formula does not scale with the dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Formula {
    pub coef: f64,
    pub offset: f64,
    pub div: f64,
    pub scales_with_d: bool,
}

impl Formula {
    const fn constant(v: f64) -> Self {
        Formula { coef: v, offset: 0.0, div: 1.0, scales_with_d: false }
    }

    const fn cube(coef: f64, offset: f64, div: f64) -> Self {
        Formula { coef, offset, div, scales_with_d: true }
    }

    pub fn eval(&self, d: usize) -> f64 {
        let base = if self.scales_with_d { self.coef * 2f64.powi(d as i32 - 2) } else { self.coef };
        (base + self.offset) / self.div
    }
}

/// Known values for one family: its independent kissing number (exact or a
/// lower bound) and the two MCDS lower bounds, when a block construction exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundRow {
    pub zeta: Formula,
    pub zeta_exact: bool,
    pub opt1: Option<Formula>,
    pub general: Option<Formula>,
}

pub const BOUND_TABLE: &[(&str, BoundRow)] = &[
    (
        "unit-disk",
        BoundRow {
            zeta: Formula::constant(5.0),
            zeta_exact: true,
            opt1: Some(Formula::constant(8.0)),
            general: Some(Formula::constant(3.0)),
        },
    ),
    (
        "fixed-cube",
        BoundRow {
            zeta: Formula::cube(4.0, 0.0, 1.0),
            zeta_exact: true,
            opt1: Some(Formula::cube(7.0, -1.0, 1.0)),
            general: Some(Formula::cube(7.0, 0.0, 3.0)),
        },
    ),
    (
        "arbitrary-cube",
        BoundRow {
            zeta: Formula::cube(6.0, 0.0, 1.0),
            zeta_exact: false,
            opt1: Some(Formula::cube(11.0, -1.0, 1.0)),
            general: Some(Formula::cube(11.0, 0.0, 3.0)),
        },
    ),
    (
        "unit-ball",
        BoundRow {
            zeta: Formula::constant(12.0),
            zeta_exact: true,
            opt1: Some(Formula::constant(17.0)),
            general: Some(Formula::constant(6.0)),
        },
    ),
    (
        "triangle",
        BoundRow {
            zeta: Formula::constant(5.0),
            zeta_exact: false,
            opt1: Some(Formula::constant(9.0)),
            general: Some(Formula { coef: 10.0, offset: 0.0, div: 3.0, scales_with_d: false }),
        },
    ),
    ("fixed-polygon", BoundRow { zeta: Formula::constant(5.0), zeta_exact: false, opt1: None, general: None }),
    ("arbitrary-polygon", BoundRow { zeta: Formula::constant(6.0), zeta_exact: false, opt1: None, general: None }),
];

pub fn table_key(f: Family) -> &'static str {
    match f {
        Family::UnitDisk => "unit-disk",
        Family::FixedCube { .. } => "fixed-cube",
        Family::ArbitraryCube { .. } => "arbitrary-cube",
        Family::UnitBall => "unit-ball",
        Family::Triangle => "triangle",
        Family::FixedPolygon { .. } => "fixed-polygon",
        Family::ArbitraryPolygon { .. } => "arbitrary-polygon",
    }
}

pub fn bound_row(f: Family) -> &'static BoundRow {
    let key = table_key(f);
    &BOUND_TABLE.iter().find(|(k, _)| *k == key).expect("every family has a row").1
}

/// Asymptotic GCDS upper bound `2(zeta - 1)`, checked as `|A| <= 2(zeta-1)|O| + 2`.
pub fn gcds_asymptotic(zeta: usize, offline: usize) -> f64 {
    2.0 * (zeta as f64 - 1.0) * offline as f64 + 2.0
}

/// Absolute GCDS ratio bound `min{2 zeta, 2(zeta-1)(1 + 1/(|A|-1))}`.
pub fn gcds_absolute(zeta: usize, online: usize) -> f64 {
    let z = zeta as f64;
    if online <= 1 {
        return 2.0 * z;
    }
    (2.0 * z).min(2.0 * (z - 1.0) * (1.0 + 1.0 / (online as f64 - 1.0)))
}

pub const FUNKE_SLOPE: f64 = 3.453;
pub const FUNKE_OFFSET: f64 = 8.291;
pub const FUNKE_ASYMPTOTIC: f64 = 6.906;
