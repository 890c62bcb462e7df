//! Text formats shared by the CSV writers.

/// A float with 17 significant digits, which round-trips any `f64`.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}
