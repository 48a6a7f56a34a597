//! Monte Carlo sweep over the number of transmit antennas, written as CSV.

use dirmod::simulator::{sweep, write_reports, DesignChoice, EveStrategy, ScenarioConfig, SweepSpec};

fn main() -> dirmod::Result<()> {
    let cfg = ScenarioConfig {
        user_antenna_counts: vec![1; 6],
        n_e: 10,
        design: DesignChoice::PowerFixed,
        eve_strategies: vec![EveStrategy::Zf],
        trials: 30,
        symbols_per_channel: 20,
        sweep: Some(SweepSpec {
            param: "n_t".into(),
            values: vec![6.0, 8.0, 10.0, 12.0],
        }),
        ..ScenarioConfig::default()
    };
    let rows = sweep(&cfg, "nt_sweep")?;
    for r in &rows {
        println!(
            "N_t {:2}: power {:6.2} dB  SER users {:.4}  eve ZF {:.4}",
            r.n_t,
            r.mean_power_db(),
            r.ser_users,
            r.ser_eve_zf.unwrap_or(f64::NAN)
        );
    }
    write_reports(&rows, std::io::stdout())
}
