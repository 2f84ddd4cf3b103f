//! Trajectory tables.

use std::fmt::Write as _;

use ramsey_allee_core::dynamics::DerivedSample;
use ramsey_allee_core::{Termination, Trajectory};

pub const HEADER: &str = "t,k,c,L,n,x,z,k_lower,k_upper,c_lower,c_upper,savings_rate";

/// 17 significant digits, enough to read back the same `f64`.
pub fn number(x: f64) -> String {
    format!("{x:.16e}")
}

/// Renders the trajectory table. Every `stride`-th sample is kept, plus the
/// last one. A single-sample trajectory (empty horizon) yields the header
/// alone; an early termination adds a `#` footer naming the reason.
pub fn trajectory_table(trajectory: &Trajectory, derived: &[DerivedSample], stride: usize) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    let n = trajectory.samples.len().min(derived.len());
    if n > 1 {
        let stride = stride.max(1);
        for (i, (s, d)) in trajectory.samples.iter().zip(derived).enumerate() {
            if i % stride != 0 && i + 1 != n {
                continue;
            }
            let fields = [
                s.t,
                s.k,
                s.c,
                s.l,
                d.n,
                d.x,
                d.z,
                d.k_lower,
                d.k_upper,
                d.c_lower,
                d.c_upper,
                d.savings_rate,
            ];
            let row: Vec<String> = fields.iter().map(|&x| number(x)).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
    }
    if let Some(footer) = footer(&trajectory.termination) {
        out.push_str(&footer);
        out.push('\n');
    }
    out
}

pub fn footer(termination: &Termination) -> Option<String> {
    match termination {
        Termination::Completed => None,
        other => Some(format!("# partial: {other}")),
    }
}

/// Generic table with a header row; cells are written as given.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip_exactly() {
        for x in [0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0] {
            let s = number(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(number(1.5), "1.5000000000000000e0");
    }

    #[test]
    fn generic_table_layout() {
        let t = table(&["a", "b"], &[vec!["1".into(), "2".into()]]);
        assert_eq!(t, "a,b\n1,2\n");
    }
}
