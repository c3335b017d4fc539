//! State sources for the command line: a JSON state file, or a named family
//! written `family:NAME(key=value,...)`.
//!
//! | family | keys | state |
//! |---|---|---|
//! | `basis` | `k`, `index` (default 0) | `|index>` on `k` qubits |
//! | `hadamard` | `k` | `H^(x)k |0>` |
//! | `haar` | `k`, `seed` | Haar-random state |
//! | `pplus` / `pminus` | `eps`, `n` | `sum_j sqrt(p+-(j)) |j>` |
//! | `comb` | `n` | `sqrt(2/n) sum_j |2j>` |

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::oracles::{comb_distribution, distribution_state, perturbed_uniform, Perturbation};
use crate::qlin::{haar_state, read_state_file, seeded_rng, StateVector};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum StateFamily {
    Basis { k: usize, index: usize },
    Hadamard { k: usize },
    Haar { k: usize, seed: u64 },
    Perturbed { eps: f64, n: usize, sign: Perturbation },
    Comb { n: usize },
}

impl StateFamily {
    pub fn state(&self) -> Result<StateVector> {
        match *self {
            StateFamily::Basis { k, index } => StateVector::basis(k, index),
            StateFamily::Hadamard { k } => Ok(StateVector::uniform(k)),
            StateFamily::Haar { k, seed } => Ok(haar_state(k, &mut seeded_rng(seed))),
            StateFamily::Perturbed { eps, n, sign } => distribution_state(&perturbed_uniform(eps, n, sign)?),
            StateFamily::Comb { n } => distribution_state(&comb_distribution(n)?),
        }
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

struct Args<'a> {
    family: &'a str,
    values: BTreeMap<&'a str, &'a str>,
}

impl<'a> Args<'a> {
    fn take<T: FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        match self.values.remove(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| bad(format!("family {}: cannot parse {key}={v}", self.family))),
        }
    }

    fn need<T: FromStr>(&mut self, key: &str) -> Result<T> {
        self.take(key)?.ok_or_else(|| bad(format!("family {} needs {key}=", self.family)))
    }

    fn finish(self) -> Result<()> {
        match self.values.keys().next() {
            Some(k) => Err(bad(format!("family {} has no key '{k}'", self.family))),
            None => Ok(()),
        }
    }
}

impl FromStr for StateFamily {
    type Err = Error;

    /// Parses `NAME(key=value,...)`; the `family:` prefix is optional here.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s.strip_prefix("family:").unwrap_or(s);
        let (name, rest) = s.split_once('(').ok_or_else(|| bad(format!("expected NAME(key=value,...), got '{s}'")))?;
        let body = rest.strip_suffix(')').ok_or_else(|| bad(format!("missing ')' in '{s}'")))?;
        let mut values = BTreeMap::new();
        for item in body.split(',').map(str::trim).filter(|i| !i.is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(|| bad(format!("expected key=value, got '{item}'")))?;
            if values.insert(k.trim(), v.trim()).is_some() {
                return Err(bad(format!("duplicate key '{}'", k.trim())));
            }
        }
        let name = name.trim();
        let mut a = Args { family: name, values };
        let family = match name {
            "basis" => StateFamily::Basis { k: a.need("k")?, index: a.take("index")?.unwrap_or(0) },
            "hadamard" => StateFamily::Hadamard { k: a.need("k")? },
            "haar" => StateFamily::Haar { k: a.need("k")?, seed: a.need("seed")? },
            "pplus" => StateFamily::Perturbed { eps: a.need("eps")?, n: a.need("n")?, sign: Perturbation::Plus },
            "pminus" => StateFamily::Perturbed { eps: a.need("eps")?, n: a.need("n")?, sign: Perturbation::Minus },
            "comb" => StateFamily::Comb { n: a.need("n")? },
            other => return Err(bad(format!("unknown family '{other}'"))),
        };
        a.finish()?;
        Ok(family)
    }
}

impl fmt::Display for StateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateFamily::Basis { k, index } => write!(f, "family:basis(k={k},index={index})"),
            StateFamily::Hadamard { k } => write!(f, "family:hadamard(k={k})"),
            StateFamily::Haar { k, seed } => write!(f, "family:haar(k={k},seed={seed})"),
            StateFamily::Perturbed { eps, n, sign: Perturbation::Plus } => write!(f, "family:pplus(eps={eps},n={n})"),
            StateFamily::Perturbed { eps, n, sign: Perturbation::Minus } => write!(f, "family:pminus(eps={eps},n={n})"),
            StateFamily::Comb { n } => write!(f, "family:comb(n={n})"),
        }
    }
}

/// Where a command-line state comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSource {
    File(PathBuf),
    Family(StateFamily),
}

impl FromStr for StateSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim_start().starts_with("family:") {
            Ok(StateSource::Family(s.parse()?))
        } else if s.is_empty() {
            Err(bad("empty state path"))
        } else {
            Ok(StateSource::File(PathBuf::from(s)))
        }
    }
}

/// A loaded state, plus a note when the file needed renormalizing.
pub struct ResolvedState {
    pub state: StateVector,
    pub warning: Option<String>,
}

impl StateSource {
    pub fn load(&self) -> Result<ResolvedState> {
        match self {
            StateSource::Family(f) => Ok(ResolvedState { state: f.state()?, warning: None }),
            StateSource::File(path) => {
                let loaded = read_state_file(path)?;
                let warning = loaded.renormalized.then(|| {
                    format!("{}: stored norm {} renormalized to 1", path.display(), loaded.stored_norm)
                });
                Ok(ResolvedState { state: loaded.state, warning })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_family() {
        assert_eq!(
            "family:pplus(eps=0.1,n=8)".parse::<StateFamily>().unwrap(),
            StateFamily::Perturbed { eps: 0.1, n: 8, sign: Perturbation::Plus }
        );
        assert_eq!("basis(k=2)".parse::<StateFamily>().unwrap(), StateFamily::Basis { k: 2, index: 0 });
        assert_eq!("basis(k=2, index=3)".parse::<StateFamily>().unwrap(), StateFamily::Basis { k: 2, index: 3 });
        assert_eq!("hadamard(k=1)".parse::<StateFamily>().unwrap(), StateFamily::Hadamard { k: 1 });
        assert_eq!("haar(seed=4,k=3)".parse::<StateFamily>().unwrap(), StateFamily::Haar { k: 3, seed: 4 });
        assert_eq!("comb(n=8)".parse::<StateFamily>().unwrap(), StateFamily::Comb { n: 8 });
        assert!(matches!("pminus(eps=0.2,n=4)".parse::<StateFamily>().unwrap(), StateFamily::Perturbed { sign: Perturbation::Minus, .. }));
    }

    #[test]
    fn display_round_trips() {
        for s in ["family:basis(k=2,index=1)", "family:haar(k=3,seed=9)", "family:pminus(eps=0.1,n=8)", "family:comb(n=4)"] {
            assert_eq!(s.parse::<StateFamily>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn rejects_malformed_specs() {
        for s in ["pplus(eps=0.1)", "pplus(eps=x,n=8)", "nope(k=1)", "basis(k=1,j=2)", "basis k=1", "basis(k=1", "basis(k=1,k=2)"] {
            assert!(s.parse::<StateFamily>().is_err(), "{s}");
        }
    }

    #[test]
    fn family_states() {
        let s = "family:pplus(eps=0.1,n=8)".parse::<StateFamily>().unwrap().state().unwrap();
        assert_eq!(s.num_qubits(), 3);
        assert!((s.amplitude(0).re - (1.2f64 / 8.0).sqrt()).abs() < 1e-15);
        assert!(StateFamily::Basis { k: 1, index: 2 }.state().is_err());
        let c = StateFamily::Comb { n: 8 }.state().unwrap();
        assert!((c.amplitude(2).re - 0.5).abs() < 1e-15 && c.amplitude(3).norm() == 0.0);
    }

    #[test]
    fn sources() {
        assert!(matches!("a.json".parse::<StateSource>().unwrap(), StateSource::File(_)));
        assert!(matches!("family:comb(n=2)".parse::<StateSource>().unwrap(), StateSource::Family(_)));
        assert!("family:comb()".parse::<StateSource>().is_err());
    }
}
