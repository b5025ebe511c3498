//! Verification campaigns for the matrix inequalities and magnitude
//! bounds, and probes for open conjectures.

pub mod campaign;
pub mod checks;
pub mod probes;
pub mod report;

pub use campaign::{run_all, run_suite, CampaignConfig, Suite};
pub use probes::{
    bm_campaign, bm_one_set_campaign, equality_gap_search, probe_brunn_minkowski, BmCampaign, GapGenerator,
};
pub use report::{exit_code, CheckReport, ProbeReport, ProbeVerdict, Violation};
