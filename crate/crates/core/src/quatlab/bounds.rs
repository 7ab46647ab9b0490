//! Lower bounds on traces and geodesic lengths in the level-`π^n` covers.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InjradBound {
    pub n: u32,
    /// `3^{⌈n/2⌉/2} - 2`.
    pub trace_floor: f64,
    /// `2 arccosh(trace_floor / 2)`, or 0 when `trace_floor < 2`.
    pub length_bound: f64,
    pub injrad_bound: f64,
}

pub fn injrad_lower_bound(n: u32) -> InjradBound {
    let m = n.div_ceil(2);
    let trace_floor = 3f64.powf(m as f64 / 2.0) - 2.0;
    let length_bound = if trace_floor >= 2.0 { 2.0 * (trace_floor / 2.0).acosh() } else { 0.0 };
    InjradBound { n, trace_floor, length_bound, injrad_bound: length_bound / 2.0 }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let b = injrad_lower_bound(4);
        assert_eq!(b.trace_floor, 1.0);
        assert_eq!(b.length_bound, 0.0);
        let b = injrad_lower_bound(6);
        let tf = 27f64.sqrt() - 2.0;
        assert!((b.trace_floor - tf).abs() < 1e-12);
        assert!((b.length_bound - 2.0 * (tf / 2.0).acosh()).abs() < 1e-12);
        assert!((b.trace_floor - 3.196).abs() < 1e-3);
        // floor dominates the looser 3^{n/4} - 2
        for n in 1..40 {
            assert!(injrad_lower_bound(n).trace_floor >= 3f64.powf(n as f64 / 4.0) - 2.0 - 1e-12);
        }
    }

    #[test]
    fn monotone_and_unbounded() {
        let bs: Vec<InjradBound> = (1..60).map(injrad_lower_bound).collect();
        for w in bs.windows(2) {
            assert!(w[1].trace_floor >= w[0].trace_floor);
            assert!(w[1].length_bound >= w[0].length_bound);
        }
        assert!(bs.last().unwrap().injrad_bound > 15.0);
    }
}
