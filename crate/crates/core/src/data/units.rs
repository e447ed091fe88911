//! Accepted unit strings per field and their conversion factors.

/// A closed set of unit spellings, each with a multiplier to the internal unit.
pub(crate) struct Unit {
    accepted: Vec<(String, f64)>,
}

impl Unit {
    fn of(pairs: &[(&str, f64)]) -> Self {
        Unit {
            accepted: pairs.iter().map(|(s, k)| (s.to_string(), *k)).collect(),
        }
    }

    /// Numerator spellings over one of the denominator spellings.
    fn ratio(num: &[(&str, f64)], den: &[(&str, f64)]) -> Self {
        let mut accepted = Vec::new();
        for (n, kn) in num {
            for (d, kd) in den {
                accepted.push((format!("{n}/{d}"), kn / kd));
            }
        }
        Unit { accepted }
    }

    pub fn factor(&self, s: &str) -> Option<f64> {
        let s = s.trim();
        self.accepted.iter().find(|(u, _)| u == s).map(|(_, k)| *k)
    }

    pub fn expected(&self) -> String {
        let names: Vec<&str> = self.accepted.iter().map(|(u, _)| u.as_str()).collect();
        names.join(", ")
    }

    pub fn power() -> Self {
        Self::of(&[("W", 1.0), ("kW", 1e3)])
    }

    pub fn power_per_gb() -> Self {
        Self::of(&[("W/GB", 1.0), ("W/TB", 1e-3), ("kW/GB", 1e3)])
    }

    pub fn energy_per_gb() -> Self {
        Self::of(&[("kWh/GB", 1.0), ("Wh/GB", 1e-3), ("kWh/TB", 1e-3)])
    }

    pub fn energy_kwh() -> Self {
        Self::of(&[("kWh", 1.0), ("Wh", 1e-3), ("MWh", 1e3), ("J", 1.0 / 3.6e6)])
    }

    pub fn dimensionless() -> Self {
        Self::of(&[("1", 1.0), ("", 1.0)])
    }

    pub fn water_usage() -> Self {
        Self::of(&[("L/kWh", 1.0), ("m3/kWh", 1e3)])
    }

    pub fn time_s() -> Self {
        Self::of(&[("s", 1.0), ("ms", 1e-3)])
    }

    pub fn time_h() -> Self {
        Self::of(&[("h", 1.0), ("d", 24.0), ("yr", 8760.0)])
    }

    pub fn time_yr() -> Self {
        Self::of(&[("yr", 1.0)])
    }

    pub fn token_rate() -> Self {
        Self::of(&[("tokens/s", 1.0)])
    }

    pub fn data_gb() -> Self {
        Self::of(&[("GB", 1.0), ("MB", 1e-3), ("TB", 1e3), ("B", 1e-9)])
    }

    pub fn bytes() -> Self {
        Self::of(&[("B", 1.0)])
    }

    pub fn params_b() -> Self {
        Self::of(&[("Gparam", 1.0), ("Mparam", 1e-3)])
    }

    fn denominators(denom: &str) -> Vec<(&'static str, f64)> {
        match denom {
            "h" => vec![("h", 1.0)],
            "GB/h" => vec![("GB/h", 1.0), ("GB.h", 1.0)],
            "GB" => vec![("GB", 1.0)],
            "kWh" => vec![("kWh", 1.0), ("MWh", 1e3)],
            "L" => vec![("L", 1.0), ("m3", 1e3)],
            _ => vec![],
        }
    }

    pub fn gwp(denom: &str) -> Self {
        Self::ratio(
            &[("kgCO2eq", 1.0), ("gCO2eq", 1e-3)],
            &Self::denominators(denom),
        )
    }

    pub fn water(denom: &str) -> Self {
        Self::ratio(&[("m3eq", 1.0), ("Leq", 1e-3)], &Self::denominators(denom))
    }

    pub fn primary_energy(denom: &str) -> Self {
        Self::ratio(&[("MJ", 1.0), ("kJ", 1e-3)], &Self::denominators(denom))
    }

    pub fn adp(denom: &str) -> Self {
        Self::ratio(
            &[("kgSbeq", 1.0), ("gSbeq", 1e-3)],
            &Self::denominators(denom),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratios_convert_both_sides() {
        let u = Unit::gwp("kWh");
        assert_eq!(u.factor("kgCO2eq/kWh"), Some(1.0));
        assert_eq!(u.factor("gCO2eq/MWh"), Some(1e-6));
        assert_eq!(u.factor("kgCO2eq/h"), None);
    }
}
