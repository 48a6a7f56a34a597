//! Ready-made scenarios for the standard experiments.

use super::config::{DesignChoice, EveStrategy, ScenarioConfig, SweepSpec};
use super::timing::TimingConfig;
use super::ula::UlaConfig;
use crate::{Error, Result};

/// What a preset runs.
#[derive(Clone, Debug)]
pub enum Preset {
    /// Labelled scenarios, each swept independently.
    Scenarios(Vec<(String, ScenarioConfig)>),
    Ula(UlaConfig),
    Timing(TimingConfig),
}

pub const PRESET_NAMES: [&str; 6] = ["fig4", "fig5", "fig9", "fig11", "fig14", "fig15"];

fn sweep(param: &str, values: impl IntoIterator<Item = f64>) -> Option<SweepSpec> {
    Some(SweepSpec {
        param: param.into(),
        values: values.into_iter().collect(),
    })
}

fn per_design(base: ScenarioConfig, prefix: &str) -> Vec<(String, ScenarioConfig)> {
    DesignChoice::ALL
        .iter()
        .map(|&design| {
            (
                format!("{prefix}_{}", design.name()),
                ScenarioConfig {
                    design,
                    ..base.clone()
                },
            )
        })
        .collect()
}

/// Looks up a preset by name; `seed` replaces every scenario's base seed.
pub fn preset(name: &str, seed: u64) -> Result<Preset> {
    let base = ScenarioConfig {
        base_seed: seed,
        ..ScenarioConfig::default()
    };
    let out = match name {
        // Transmit power against N_t for N_U = 8 and 10; no eavesdropper.
        "fig4" => {
            let mut v = Vec::new();
            for n_u in [8usize, 10] {
                let b = ScenarioConfig {
                    user_antenna_counts: vec![1; n_u],
                    eve_strategies: vec![],
                    n_e: 1,
                    sweep: sweep("n_t", (n_u..=20).map(|x| x as f64)),
                    ..base.clone()
                };
                v.extend(per_design(b, &format!("nu{n_u}")));
            }
            Preset::Scenarios(v)
        }
        // SER against N_t with N_U = 10, N_e = 15.
        "fig5" => Preset::Scenarios(per_design(
            ScenarioConfig {
                user_antenna_counts: vec![1; 10],
                n_e: 15,
                eve_strategies: vec![EveStrategy::Zf, EveStrategy::Mmse],
                sweep: sweep("n_t", (10..=20).map(|x| x as f64)),
                ..base.clone()
            },
            "fig5",
        )),
        // SER against N_U with N_t = 16, N_e = 18.
        "fig9" => Preset::Scenarios(per_design(
            ScenarioConfig {
                n_t: 16,
                n_e: 18,
                eve_strategies: vec![EveStrategy::Zf, EveStrategy::Mmse],
                sweep: sweep("n_u", (4..=16).step_by(2).map(|x| x as f64)),
                ..base.clone()
            },
            "fig9",
        )),
        // SER against γ with N_t = 15, N_e = 17, N_U = 14; β² follows γ.
        "fig11" => Preset::Scenarios(per_design(
            ScenarioConfig {
                n_t: 15,
                n_e: 17,
                user_antenna_counts: vec![1; 14],
                eve_strategies: vec![EveStrategy::Zf, EveStrategy::Mmse],
                sweep: sweep("gamma_db", (0..=5).map(|k| 5.0 + 3.0 * k as f64)),
                ..base
            },
            "fig11",
        )),
        "fig14" => Preset::Ula(UlaConfig {
            seed,
            ..UlaConfig::default()
        }),
        "fig15" => Preset::Timing(TimingConfig {
            seed,
            ..TimingConfig::default()
        }),
        other => {
            return Err(Error::Config(format!(
                "unknown preset {other:?}; expected one of {}",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_resolve_and_validate() {
        for name in PRESET_NAMES {
            match preset(name, 3).unwrap() {
                Preset::Scenarios(v) => {
                    assert_eq!(v.len() % 4, 0);
                    for (label, cfg) in v {
                        assert_eq!(cfg.base_seed, 3);
                        cfg.validate().unwrap_or_else(|e| panic!("{label}: {e}"));
                        assert!(cfg.sweep.is_some());
                    }
                }
                Preset::Ula(u) => assert_eq!(u.seed, 3),
                Preset::Timing(t) => assert_eq!(t.seed, 3),
            }
        }
        assert!(preset("fig13", 0).is_err());
    }

    #[test]
    fn fig5_preset_shape() {
        let Preset::Scenarios(v) = preset("fig5", 1).unwrap() else { panic!() };
        let (_, c) = &v[0];
        assert_eq!((c.n_u(), c.n_e), (10, 15));
        assert!((c.gamma_db - 15.56).abs() < 1e-12);
    }
}
