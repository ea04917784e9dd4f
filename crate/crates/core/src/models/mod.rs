//! Premia, retention, surplus split and acceptability for the four models.
//!
//! | model | premia charged | excess over available funds |
//! |-------|----------------|-----------------------------|
//! | 1 | fair `π_i` | covered by an outside guarantee |
//! | 2 | fair `π_i` | reinsured under `Q_0` |
//! | 3 | `p_i ≥ π_i` | reinsured under `Q_0`, surplus shared |
//! | 4 | `p_i ≥ π^r_i` | reinsured under `Q_r`, surplus shared |

mod portfolio;
mod report;
mod runs;
mod sweep;

pub use portfolio::{Portfolio, ORDERING_GRID};
pub use report::{
    AlternativeSplit, EventPartition, Flows, Identity, ModelId, ModelReport, PartyPayoff,
    PremiaReport, PremiumBound, SurplusShares, Verdict, INSURER,
};
pub use runs::{
    model1_run, model2_run, model3_run, model4_run, run_model, ID_MODEL1_TRANSLATION,
    ID_MODEL2_EQUALITY, ID_MODEL3_INSURER, ID_MODEL3_RETAINED, ID_MODEL4_EXTRA, ID_MODEL4_SCALED,
};
pub use sweep::{capital_sweep, linear_grid, SweepRow, SweepTable};
