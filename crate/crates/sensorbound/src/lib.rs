//! File formats, a parallel Monte Carlo driver and the command-line front end
//! for `sensorbound-core`.

pub mod cli;
pub mod formats;
pub mod sweep;
