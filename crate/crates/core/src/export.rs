//! Shared CSV conventions: `.` decimal separator, 17 significant digits,
//! LF line endings.

/// Scientific notation with 17 significant digits; parses back to the same
/// `f64` bit pattern.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub(crate) fn csv_writer<W: std::io::Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}
