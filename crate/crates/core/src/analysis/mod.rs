//! Seeded verification campaigns and the copy-mismatch sensitivity study.

mod campaign;
mod sensitivity;

pub use campaign::{appendix_verify, inequality_campaign, CampaignReport, CheckRecord};
pub use sensitivity::{
    fit_loglog_slope, log_spaced, orthogonal_direction, sensitivity_study, sensitivity_sweep,
    SensitivityRecord, SensitivityStudy, GAP_FLOOR, MAX_DIRECTION_ATTEMPTS,
};
