//! Exact weights and weight spectra of Grassmann codes.
//!
//! The Grassmann code C(ℓ, m) over GF(q) has one coordinate per
//! ℓ-dimensional subspace of F^m (its Plücker coordinates) and one codeword
//! per ℓ-form on F^m. This crate computes codeword weights three ways — by
//! enumerating the Grassmannian, by counting vanishing triples, and from
//! closed formulas in the sizes of the weight varieties `X_k(ω)` — and uses
//! the classification of 3-forms on F^7 to assemble the spectrum of
//! C(3, 7).
//!
//! Modules, from the bottom up:
//!
//! - [`gf`]: table-driven arithmetic in GF(q), q ≤ 49.
//! - [`linalg`]: dense matrices, elimination, determinants.
//! - [`extalg`]: alternating forms, wedge and interior products.
//! - [`pfaffian`]: characteristic-free Pfaffians `Pf_k` and 2-form ranks.
//! - [`grassmann`]: Grassmannian enumeration, generator matrices, direct weights.
//! - [`weightvar`]: kernel reduction, weight varieties and weight formulas.
//! - [`classify7`]: the eleven classes of 3-forms on F^7 and the C(3, 7) spectrum.
//! - [`qpoly`]: exact polynomials in q and the counting identities.
//! - [`textio`]: a plain-text format for forms.
//!
//! With the default `parallel` feature the enumeration kernels run on rayon;
//! without it they run sequentially with identical results.

pub mod classify7;
pub mod error;
pub mod extalg;
pub mod gf;
pub mod grassmann;
pub mod linalg;
pub mod par;
pub mod pfaffian;
pub mod qpoly;
pub mod textio;
pub mod weightvar;

pub use classify7::{classify, representative, spectrum_c37, ClassId, Fingerprint, SpectrumEntry, Variant};
pub use error::{Error, Result};
pub use extalg::{AltForm, MultiIndex, Multivector, Vector};
pub use gf::{Field, FieldElement};
pub use grassmann::{
    code_params, codeword_weight_direct, enum_grassmannian, exhaustive_spectrum, triple_count_weight, CodeParams,
    GeneratorMatrix, Grassmannian, SubspaceRepr, WeightStrategy,
};
pub use linalg::Matrix;
pub use pfaffian::{pf_k, rank_2form};
pub use qpoly::QPoly;
pub use weightvar::{q_omega, reduce_degenerate, weight_by_formula, weight_nondeg_formula, x_variety, x_variety_card};
