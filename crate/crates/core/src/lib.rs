//! Square roots of nonsquare integers to arbitrary precision.
//!
//! A solution `(n, m)` of `n^2 - p*m^2 = 1` turns each of three
//! hypergeometric kernels into a rapidly converging series for `sqrt(p)`;
//! raising the solution to higher powers shrinks the series argument and
//! speeds convergence further.
//!
//! ```
//! use num_bigint::BigUint;
//! use pellroot::{amplify_power, build, evaluate, fundamental_solution, EvalConfig, PellInstance, Theorem};
//!
//! let base = fundamental_solution(&PellInstance::new(2u32).unwrap());
//! let sol = amplify_power(&base, 4).unwrap();
//! assert_eq!((sol.x(), sol.y()), (&BigUint::from(577u32), &BigUint::from(408u32)));
//!
//! let spec = build(Theorem::A, &sol).unwrap();
//! let report = evaluate(&spec, 30, &EvalConfig::default()).unwrap();
//! assert_eq!(report.decimal, "1.414213562373095048801688724209");
//! assert!(report.oracle_agrees);
//! ```

pub mod corpus;
pub mod eval;
pub mod expansion;
pub mod fixed;
pub mod hyper;
pub mod pell;
pub mod roots;
pub mod wire;

pub use corpus::{golden, parse_corpus, reproduce, GoldenEntry, ReproduceReport};
pub use eval::{
    convergence_table, convergence_table_at, digits_per_term, evaluate, sqrt_oracle, tail_bound, terms_needed,
    EvalConfig, EvalError, EvalReport,
};
pub use expansion::{applicable, build, build_all, BuildError, SeriesSpec, Theorem};
pub use fixed::BigFixed;
pub use hyper::{next_term, partial_sum, term_ratio, verify_identity, Identity, SeriesError, SeriesFamily, TermState};
pub use pell::{
    amplify_binomial, amplify_power, brute_force_solution, fundamental_solution, integer_sqrt, is_nonsquare,
    PellError, PellInstance, PellSolution,
};
