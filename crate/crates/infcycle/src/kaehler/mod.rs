//! Kähler differential modules over Q: finite-dimensional form spaces of
//! artinian quotients, mixed forms over a smooth patch tensored with an
//! artinian algebra, relative forms of split pairs, and the group
//! Ω^1_{S,I}/dI computing K_2(S,I)_Q.

mod finite;
mod mixed;
mod relative;

pub use finite::{
    combinations, insert_signed, jacobian_omega1_dim, merge_signed, omega_dim, omega_finite,
    FiniteFormSpace,
};
pub use mixed::{d_of_apoly, AForm, MixedFormContext};
pub use relative::{bloch_group, projection_matrix, relative_forms, BlochGroup, RelativeFormGroup};
