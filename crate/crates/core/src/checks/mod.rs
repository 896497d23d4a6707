//! Executable verdicts: Liouville-type monotonicity, comparison, Pohozaev
//! defect, Hölder stability, a priori sweeps and the nonexistence probe.

mod apriori;
mod comparison;
mod holder;
mod pohozaev;
mod probe;
mod psi_check;
mod verdict;

pub use apriori::{apriori_scaled_sweep, AprioriSweep, BOUND_FACTOR};
pub use comparison::{comparison_check, COMPARISON_TOL};
pub use holder::{holder_quotient, GRID_PAIRS};
pub use pohozaev::{pohozaev_defect, pohozaev_terms, PohozaevTerms};
pub use probe::{
    nonexistence_probe, ProbeLevel, ProbeReport, GROWTH_FACTOR, MIN_LEVELS, PROBE_HEADER,
};
pub use psi_check::{
    check_psi_decreasing, constant_over_s_exponent, psi_grid, PsiCheckInput, GRID_POINTS,
};
pub use verdict::{CheckVerdict, CheckWitness, Outcome};
