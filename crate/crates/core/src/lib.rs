//! Frobenius powers and critical exponents of monomial ideals in prime
//! characteristic.

pub mod base_p;
pub mod critical;
pub mod error;
pub mod fractal;
pub mod ideal;
pub mod limits;
pub mod oracle;

pub use base_p::{
    admissible, carry_free_canonical, carry_free_sum, expand, is_prime, multinomial_nonzero, tau,
    to_rational, trunc, BasePExpansion, DigitVector, PAdicRational, Representation,
};
pub use critical::{
    fmt_rational, jumps_unit_interval, lambda_b, lce, max_digit_vectors, power_at, skoda_reduce,
    Candidate, CriticalResult, CriticalSolver, JumpInterval, JumpTable, Omega, SkodaReduction,
    SolverOptions, StepLevel, Stepper, StepperOptions, TraceLevel,
};
pub use error::{Error, Result};
pub use fractal::{
    closed_member, dimension, open_member, plot_subdivision, plot_subdivision_with, sierpinski_points,
    Dimension, PlotOptions, SimplexSpec,
};
pub use ideal::{minimalize, parse_ideal, ExponentMatrix, Monomial, MonomialIdeal, ParsedIdeal, Ring};
pub use limits::Limits;
pub use oracle::{integer_frobenius_power, padic_power, scan_powers, Oracle, ScanRun};
