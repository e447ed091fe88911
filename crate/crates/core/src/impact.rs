//! The five life-cycle indicators carried together.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul};

use serde::{Deserialize, Serialize};

/// One environmental criterion of an [`ImpactVector`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// Final energy, kWh.
    FinalEnergy,
    /// Global warming potential, kgCO2eq (100-year horizon).
    Gwp,
    /// Deprivation-weighted water use, m3eq.
    Water,
    /// Primary energy, MJ.
    PrimaryEnergy,
    /// Abiotic resource depletion (minerals and metals), kgSbeq.
    Adp,
}

impl Criterion {
    pub const ALL: [Criterion; 5] = [
        Criterion::FinalEnergy,
        Criterion::Gwp,
        Criterion::Water,
        Criterion::PrimaryEnergy,
        Criterion::Adp,
    ];

    pub fn unit(self) -> &'static str {
        match self {
            Criterion::FinalEnergy => "kWh",
            Criterion::Gwp => "kgCO2eq",
            Criterion::Water => "m3eq",
            Criterion::PrimaryEnergy => "MJ",
            Criterion::Adp => "kgSbeq",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Criterion::FinalEnergy => "final_energy",
            Criterion::Gwp => "gwp",
            Criterion::Water => "water",
            Criterion::PrimaryEnergy => "primary_energy",
            Criterion::Adp => "adp",
        }
    }
}

/// Final energy (kWh), GWP (kgCO2eq), water (m3eq), primary energy (MJ) and
/// ADP (kgSbeq). Per-unit factor rows reuse the type with `final_energy` at zero.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ImpactVector {
    pub final_energy: f64,
    pub gwp: f64,
    pub water: f64,
    pub primary_energy: f64,
    pub adp: f64,
}

impl ImpactVector {
    pub const ZERO: ImpactVector = ImpactVector {
        final_energy: 0.0,
        gwp: 0.0,
        water: 0.0,
        primary_energy: 0.0,
        adp: 0.0,
    };

    pub fn new(final_energy: f64, gwp: f64, water: f64, primary_energy: f64, adp: f64) -> Self {
        Self {
            final_energy,
            gwp,
            water,
            primary_energy,
            adp,
        }
    }

    /// A factor row with no energy component.
    pub fn criteria(gwp: f64, water: f64, primary_energy: f64, adp: f64) -> Self {
        Self::new(0.0, gwp, water, primary_energy, adp)
    }

    pub fn get(&self, c: Criterion) -> f64 {
        match c {
            Criterion::FinalEnergy => self.final_energy,
            Criterion::Gwp => self.gwp,
            Criterion::Water => self.water,
            Criterion::PrimaryEnergy => self.primary_energy,
            Criterion::Adp => self.adp,
        }
    }

    pub fn to_array(&self) -> [f64; 5] {
        [
            self.final_energy,
            self.gwp,
            self.water,
            self.primary_energy,
            self.adp,
        ]
    }

    pub fn from_array(a: [f64; 5]) -> Self {
        Self::new(a[0], a[1], a[2], a[3], a[4])
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_array(self.to_array().map(f))
    }

    /// Componentwise combination of two vectors.
    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        let (a, b) = (self.to_array(), other.to_array());
        Self::from_array(std::array::from_fn(|i| f(a[i], b[i])))
    }

    /// Every component finite and non-negative.
    pub fn is_valid(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite() && *v >= 0.0)
    }

    /// `100 * self / base` per criterion; a zero base component yields 100 when
    /// the projected component is also zero.
    pub fn indexed_on(&self, base: &Self) -> Self {
        self.zip_with(base, |v, b| {
            if b == 0.0 {
                if v == 0.0 {
                    100.0
                } else {
                    f64::INFINITY
                }
            } else {
                v / b * 100.0
            }
        })
    }
}

impl Add for ImpactVector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.zip_with(&rhs, |a, b| a + b)
    }
}

impl AddAssign for ImpactVector {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Mul<f64> for ImpactVector {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        self.map(|v| v * k)
    }
}

impl Mul<ImpactVector> for f64 {
    type Output = ImpactVector;
    fn mul(self, v: ImpactVector) -> ImpactVector {
        v * self
    }
}

impl Sum for ImpactVector {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(ImpactVector::ZERO, |acc, v| acc + v)
    }
}

impl<'a> Sum<&'a ImpactVector> for ImpactVector {
    fn sum<I: Iterator<Item = &'a Self>>(iter: I) -> Self {
        iter.fold(ImpactVector::ZERO, |acc, v| acc + *v)
    }
}

impl fmt::Display for ImpactVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:.3e} kWh, {:.3e} kgCO2eq, {:.3e} m3eq, {:.3e} MJ, {:.3e} kgSbeq",
            self.final_energy, self.gwp, self.water, self.primary_energy, self.adp
        )
    }
}
