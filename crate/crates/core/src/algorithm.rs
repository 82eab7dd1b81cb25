use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::citest::CiSource;
use crate::error::{Error, Result};
use crate::lcd::{lcd_amp, UigMethod};
use crate::learn::{learn, LearnConfig, Learned, Variant};

/// Any of the five learners.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Pc(Variant),
    /// Decomposition-based learning with stable local searches.
    Lcd,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Pc(Variant::Original),
        Algorithm::Pc(Variant::Stable),
        Algorithm::Pc(Variant::Conservative),
        Algorithm::Pc(Variant::StableConservative),
        Algorithm::Lcd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Pc(v) => v.name(),
            Algorithm::Lcd => "lcd",
        }
    }

    /// Runs the learner. `cfg.variant` is replaced by the algorithm's own
    /// variant; `uig` only matters for [`Algorithm::Lcd`] and defaults to
    /// [`UigMethod::default_for`].
    pub fn run(self, src: &CiSource, cfg: &LearnConfig, uig: Option<&UigMethod>) -> Result<Learned> {
        let mut cfg = cfg.clone();
        match self {
            Algorithm::Pc(v) => {
                cfg.variant = v;
                learn(src, &cfg)
            }
            Algorithm::Lcd => {
                cfg.variant = Variant::Stable;
                let default;
                let uig = match uig {
                    Some(u) => u,
                    None => {
                        default = UigMethod::default_for(src)?;
                        &default
                    }
                };
                Ok(lcd_amp(src, &cfg, uig)?.learned)
            }
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown algorithm `{s}`")))
    }
}

impl Serialize for Algorithm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::triplex_equivalent;
    use crate::synth::{random_amp_cg, GenConfig};

    #[test]
    fn names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("pc-stable".parse::<Algorithm>().is_err());
    }

    #[test]
    fn every_algorithm_recovers_an_oracle() {
        let g = random_amp_cg(&GenConfig::new(8, 2.0, 3)).unwrap();
        for a in Algorithm::ALL {
            let src = CiSource::oracle(g.clone());
            let out = a.run(&src, &LearnConfig::new(Variant::Original), None).unwrap();
            assert!(triplex_equivalent(&out.graph, &g).unwrap(), "{a}");
        }
    }
}
