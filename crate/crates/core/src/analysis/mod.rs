//! Numerical verification of the solver's supporting theory: substring
//! dominance of window moments, Monte-Carlo moment concentration,
//! threshold-variance behavior, and the substring-occurrence combinatorics.

pub mod combinatorics;
pub mod concentration;
pub mod prop1;

pub use combinatorics::{
    brute_count_e, brute_count_no_00, brute_count_s, brute_count_z, brute_p_realize, count_e,
    count_no_00, count_s, count_z, count_z2_two_term, fib, p_realize, CountTable, SCountMode,
};
pub use concentration::{
    closeness_radius, concentration_experiment, exp_model_variance, moment_stats,
    variance_decomposition, MomentStats, VarianceDecomposition,
};
pub use prop1::{proposition1_check, Prop1Report};
