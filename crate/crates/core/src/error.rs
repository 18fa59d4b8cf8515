use alloc::boxed::Box;
use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A parameter violates its invariant.
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    /// The requested hard-core intensity cannot be packed at the given distance.
    #[error("infeasible hard-core process: intensity {intensity} /m with distance {distance} m (need intensity * distance < 1)")]
    InfeasibleHardCore { intensity: f64, distance: f64 },

    #[error("at least one VRU is required")]
    NoVrus,

    #[error("no job for VRU {0} in this period")]
    UnknownVru(u32),

    #[error("scenario has no vehicles to form a cluster")]
    NoVehicles,

    /// Zero achievable rate (no PRBs or vanishing SNR).
    #[error("unreachable link: {prbs} PRBs at {snr_db} dB gives zero rate")]
    UnreachableLink { prbs: f64, snr_db: f64 },

    #[error("cannot aggregate an empty sample")]
    EmptyAggregate,

    #[error("replication {index}: {source}")]
    Replication {
        index: u64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }

    /// Config-document path of the offending field, when there is one.
    pub fn field_path(&self) -> Option<&'static str> {
        match self {
            Error::InvalidParameter { field, .. } => Some(field),
            Error::InfeasibleHardCore { .. } => Some("scenario.vehicleIntensityPerM"),
            Error::NoVrus => Some("scenario.vruCount"),
            Error::Replication { source, .. } => source.field_path(),
            _ => None,
        }
    }

    /// True for errors caused by the configuration rather than by a sampled
    /// realization.
    pub fn is_config(&self) -> bool {
        match self {
            Error::InvalidParameter { .. } | Error::InfeasibleHardCore { .. } | Error::NoVrus => {
                true
            }
            Error::Replication { source, .. } => source.is_config(),
            _ => false,
        }
    }
}
