//! JSON state-vector files: an array of `[re, im]` pairs of length `2^n`.

use std::fs;
use std::path::Path;

use super::{StateVector, C64};
use crate::{Error, Result};

/// Norm deviation above which a loaded state is flagged as renormalized.
pub const FILE_NORM_TOLERANCE: f64 = 1e-6;

/// A state read from disk.
#[derive(Debug, Clone)]
pub struct LoadedState {
    pub state: StateVector,
    /// Set when the stored norm differed from 1 by more than
    /// [`FILE_NORM_TOLERANCE`] and the amplitudes were rescaled.
    pub renormalized: bool,
    pub stored_norm: f64,
}

pub fn read_state_json(text: &str) -> Result<LoadedState> {
    let pairs: Vec<[f64; 2]> = serde_json::from_str(text)?;
    if pairs.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("non-finite amplitude".into()));
    }
    let amps: Vec<C64> = pairs.iter().map(|[re, im]| C64::new(*re, *im)).collect();
    let stored_norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let state = StateVector::normalized(amps)?;
    Ok(LoadedState { state, renormalized: (stored_norm - 1.0).abs() > FILE_NORM_TOLERANCE, stored_norm })
}

pub fn write_state_json(state: &StateVector) -> Result<String> {
    Ok(serde_json::to_string(&state.to_pairs())?)
}

pub fn read_state_file(path: impl AsRef<Path>) -> Result<LoadedState> {
    read_state_json(&fs::read_to_string(path)?)
}

pub fn write_state_file(path: impl AsRef<Path>, state: &StateVector) -> Result<()> {
    fs::write(path, write_state_json(state)? + "\n")?;
    Ok(())
}
