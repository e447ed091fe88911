//! Letter grades for a few energies per task.

use ai_footprint::projection::eco_score;

fn main() -> ai_footprint::Result<()> {
    for kwh in [3.46e-8, 3.7e-6, 3.17e-4, 1.55e-3, 9.58e-2] {
        let s = eco_score(kwh)?;
        println!(
            "{kwh:.2e} kWh -> {}{}",
            s.grade,
            if s.beyond_scale {
                " (beyond scale)"
            } else {
                ""
            }
        );
    }
    Ok(())
}
