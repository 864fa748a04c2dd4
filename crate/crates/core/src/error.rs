use thiserror::Error;

/// Errors raised by the analytic, exact and simulation layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument outside domain: {0}")]
    Domain(&'static str),

    #[error("singular point: {0}")]
    Singular(&'static str),

    #[error("size cap exceeded: {what} = {value} > {cap}")]
    CapExceeded {
        what: &'static str,
        value: u64,
        cap: u64,
    },

    #[error("capacity violation: {keys} keys do not fit in {slots} slots")]
    Capacity { keys: usize, slots: usize },

    #[error("coefficient extraction residual {residual:e} at index {index} exceeds tolerance")]
    Residual { index: usize, residual: f64 },

    #[error("negative probability {value:e} at index {index}")]
    NegativeMass { index: usize, value: f64 },

    #[error("quadrature did not converge (last change {change:e})")]
    Quadrature { change: f64 },

    #[error("identity check failed: {what} (difference {difference:e})")]
    Identity {
        what: &'static str,
        difference: f64,
    },
}

pub type Result<T> = core::result::Result<T, Error>;
