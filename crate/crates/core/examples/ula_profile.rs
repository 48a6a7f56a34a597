//! Line-of-sight uniform linear array: symbol error rate seen by a
//! single-antenna receiver at each bearing around the transmitter.

use dirmod::simulator::{ula_scenario, write_ula_csv, UlaConfig};

fn main() -> dirmod::Result<()> {
    let cfg = UlaConfig {
        symbols: 1000,
        grid_step_deg: 5.0,
        ..UlaConfig::default()
    };
    let p = ula_scenario(&cfg)?;
    println!("users at {:?} deg, {} infeasible of {}", cfg.user_angles_deg, p.infeasible, p.symbols);
    for a in &cfg.user_angles_deg {
        println!("  SER at user bearing {a:5.1}: {:.4}", p.at(*a).ser);
    }
    let far = p.points.iter().filter(|x| x.distance_deg >= 20.0).map(|x| x.ser).fold(f64::INFINITY, f64::min);
    println!("  lowest SER 20 deg or more from any user: {far:.4}");

    let mut csv = Vec::new();
    write_ula_csv(&p, &mut csv)?;
    let text = String::from_utf8(csv).expect("utf-8");
    for line in text.lines().take(4) {
        println!("{line}");
    }
    Ok(())
}
