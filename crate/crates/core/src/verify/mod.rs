pub mod config;
pub mod data;
pub mod estimates;
pub mod fit;
pub mod orthogonality;
pub mod report;

pub use config::{DataFamily, ExperimentConfig, ExperimentKind, Sign, SweepMode};
pub use data::{annulus_box, make_data};
pub use estimates::{run_linear_2d, run_linear_3d, run_multilinear_2d, run_trilinear_2d, run_trilinear_3d};
pub use fit::{fit_scaling, Fit};
pub use orthogonality::{orthogonality_row, run_orthogonality_check, OrthogonalityRow};
pub use report::{ScalingReport, ScalingRow, SubCheck, ESTIMATE_CLOCK, REPORT_SCHEMA_VERSION};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent generator for trial `index` under a master seed.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
