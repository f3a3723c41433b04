//! Fixtures shared by the benchmarks.

use auxtherm_core::{FieldChannel, Medium};

/// A mid-sized system: 1000 atoms, one channel at a quarter of its
/// convergence limit for `β = 1`, `k = 0.5`.
pub fn reference_system() -> (Medium, FieldChannel) {
    let medium = Medium::new(1000, 500.0, 1.0).expect("valid medium");
    let bare = 0.5_f64 * 0.5 + 1.0;
    let gamma = (0.25 * 2.0 * bare / medium.density()).sqrt();
    let channel = FieldChannel::new(1.0, 1.0, gamma).expect("valid channel");
    (medium, channel)
}
