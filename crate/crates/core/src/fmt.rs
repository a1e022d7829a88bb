/// Full double precision, 17 significant digits.
pub(crate) fn f64_full(x: f64) -> String {
    format!("{x:.16e}")
}
