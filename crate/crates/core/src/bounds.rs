//! Fibonacci bounds, golden-ratio tables and the one-fork estimate.
//!
//! Fibonacci numbers use the shifted indexing `φ_1 = 1, φ_2 = 2, φ_3 = 3`,
//! so `φ_c` is the longest period a binary word defined by `c` restrictions
//! can have.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::forbidden::reduced_system;
use crate::scheme::SchemeState;
use crate::words::Necklace;

/// The golden ratio.
pub const ALPHA: f64 = 1.618_033_988_749_895;

/// Second-smallest lower-triangle value of the deviation table, used to
/// scale the growth table.
pub const DEVIATION_SECOND: f64 = 0.944_271_910_0;

/// Largest index whose Fibonacci value fits in a `u64`.
pub const FIB_MAX_INDEX: usize = 91;

/// `φ_c` for `1 ≤ c ≤ 91`.
pub fn fib(c: usize) -> u64 {
    assert!((1..=FIB_MAX_INDEX).contains(&c), "fib index {c} outside 1..={FIB_MAX_INDEX}");
    let (mut a, mut b) = (1u64, 2u64);
    for _ in 1..c {
        (a, b) = (b, a + b);
    }
    a
}

/// Binet's formula in the shifted indexing.
pub fn fib_closed_form(c: usize) -> f64 {
    let e = c as i32 + 1;
    (ALPHA.powi(e) - (-ALPHA).powi(-e)) / 5f64.sqrt()
}

/// Smallest `c` with `φ_c ≥ n`.
pub fn min_restrictions_for(n: usize) -> usize {
    (1..=FIB_MAX_INDEX).find(|&c| fib(c) >= n as u64).expect("n fits in u64")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub word: String,
    pub n: usize,
    pub c: usize,
    pub phi_c: u64,
    pub pass: bool,
    pub tight: bool,
}

impl BoundReport {
    pub fn new(word: String, n: usize, c: usize) -> Self {
        let phi_c = if c > FIB_MAX_INDEX { u64::MAX } else { fib(c) };
        BoundReport { word, n, c, phi_c, pass: phi_c >= n as u64, tight: phi_c == n as u64 }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

pub fn check_bound(w: &Necklace) -> BoundReport {
    BoundReport::new(w.to_string(), w.n(), reduced_system(w).len())
}

/// A lower-triangle cell position `(u, v)` with its value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub u: usize,
    pub v: usize,
    pub value: f64,
}

/// `φ_u / (φ_v · α^(u−v))` for `1 ≤ u ≤ max_u`, `1 ≤ v ≤ max_v`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeviationTable {
    /// Row `u − 1`, column `v − 1`.
    pub values: Vec<Vec<f64>>,
    pub min: Cell,
    pub second: Cell,
}

pub fn deviation_table(max_u: usize, max_v: usize) -> DeviationTable {
    assert!(max_u >= 1 && max_v >= 1, "table bounds must be positive");
    let values: Vec<Vec<f64>> = (1..=max_u)
        .map(|u| {
            (1..=max_v).map(|v| fib(u) as f64 / (fib(v) as f64 * ALPHA.powi(u as i32 - v as i32))).collect()
        })
        .collect();
    let mut lower: Vec<Cell> = (1..=max_u)
        .flat_map(|u| (1..=max_v.min(u)).map(move |v| (u, v)))
        .map(|(u, v)| Cell { u, v, value: values[u - 1][v - 1] })
        .collect();
    lower.sort_by(|a, b| a.value.total_cmp(&b.value));
    let min = lower[0];
    let second = lower.get(1).copied().unwrap_or(min);
    DeviationTable { values, min, second }
}

impl DeviationTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in &self.values {
            let cells: Vec<String> = row.iter().map(|&x| sig(x, 7)).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let rows: Vec<Vec<String>> =
            self.values.iter().map(|r| r.iter().map(|&x| sig(x, 7)).collect()).collect();
        align(&rows)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthEntry {
    pub value: f64,
    /// Printed as `c + 1`.
    pub c_plus_one: usize,
    pub k: usize,
}

/// `multiplier · α^c · (α/2)^k`. Row `r` (from 1) has `c = r`; its columns
/// run `k = c + 1, c, …` down to 0 or until `cols` entries are filled.
pub fn growth_table(rows: usize, cols: usize, multiplier: f64) -> Vec<Vec<GrowthEntry>> {
    (1..=rows)
        .map(|c| {
            (0..cols)
                .map_while(|j| (c + 1).checked_sub(j))
                .map(|k| GrowthEntry {
                    value: multiplier * ALPHA.powi(c as i32) * (ALPHA / 2.0).powi(k as i32),
                    c_plus_one: c + 1,
                    k,
                })
                .collect()
        })
        .collect()
}

pub fn growth_csv(table: &[Vec<GrowthEntry>]) -> String {
    let mut out = String::from("row,col,value,c_plus_one,k\n");
    for (r, row) in table.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            let _ = writeln!(out, "{},{},{},{},{}", r + 1, j + 1, sig(e.value, 6), e.c_plus_one, e.k);
        }
    }
    out
}

pub fn growth_text(table: &[Vec<GrowthEntry>]) -> String {
    let rows: Vec<Vec<String>> = table
        .iter()
        .map(|row| row.iter().map(|e| format!("({}, {}, {})", sig(e.value, 6), e.c_plus_one, e.k)).collect())
        .collect();
    align(&rows)
}

/// Rounds to `digits` significant digits and prints without exponent.
pub fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Rounds to `digits` significant digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    sig(x, digits).parse().expect("formatted float")
}

fn align(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|j| rows.iter().filter_map(|r| r.get(j)).map(String::len).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row.iter().zip(&widths).map(|(s, &w)| format!("{s:>w$}")).collect();
        let _ = writeln!(out, "{}", cells.join("  ").trim_end());
    }
    out
}

/// Weights of a one-fork scheme at accounted-crossroad index `k`: `x` on
/// the path the out-fork will travel, `y` and `z` on the two return paths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneForkState {
    pub k: usize,
    pub x: u64,
    pub y: u64,
    pub z: u64,
}

impl OneForkState {
    pub fn size(&self) -> u64 {
        self.x + self.y + self.z
    }

    pub fn next_size(&self) -> u64 {
        2 * self.x + self.y + self.z
    }

    pub fn within_bounds(&self) -> bool {
        self.size() <= fib(self.k) && self.next_size() <= fib(self.k + 1)
    }

    /// The two states reachable by a collapse with one restriction.
    pub fn successors(&self) -> [OneForkState; 2] {
        let (x, y, z, k) = (self.x, self.y, self.z, self.k + 1);
        [OneForkState { k, x: x + y, y: x + z, z: 0 }, OneForkState { k, x: x + z, y: x + y, z: 0 }]
    }
}

/// What [`strengthened_estimate_check`] found along one drive.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub one_fork_checked: usize,
    pub violations: Vec<String>,
    /// Multi-fork states where `size ≤ φ_(k+d+I−1) / 2^(d+I−1)` fails.
    /// The estimate is not claimed along arbitrary schedules, so these are
    /// only logged.
    pub multi_fork_exceptions: Vec<SchemeState>,
    pub multi_fork_checked: usize,
}

impl EstimateReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks one-fork states and the final cycle against the Fibonacci
/// estimate. `terminal` is `(n, c)` of the finished drive.
pub fn strengthened_estimate_check(
    states: &[SchemeState],
    terminal: Option<(usize, usize)>,
) -> EstimateReport {
    let mut report = EstimateReport::default();
    for s in states {
        if s.index + 1 > FIB_MAX_INDEX {
            continue;
        }
        match s.one_fork {
            Some((x, y, z)) if s.in_forks == 1 => {
                let st = OneForkState { k: s.index, x, y, z };
                report.one_fork_checked += 1;
                if st.size() != s.size {
                    report.violations.push(format!("state {st:?} disagrees with size {}", s.size));
                }
                if !st.within_bounds() {
                    report.violations.push(format!("one-fork state {st:?} exceeds phi bounds"));
                }
            }
            _ if s.in_forks > 1 => {
                report.multi_fork_checked += 1;
                let shift = s.in_forks; // d + 1 − 1
                let idx = s.index + shift;
                if idx <= FIB_MAX_INDEX {
                    let limit = fib(idx) as f64 / 2f64.powi(shift as i32);
                    if s.size as f64 > limit {
                        report.multi_fork_exceptions.push(*s);
                    }
                }
            }
            _ => {}
        }
    }
    if let Some((n, c)) = terminal {
        if c <= FIB_MAX_INDEX && (n as u64) > fib(c) {
            report.violations.push(format!("cycle of length {n} after {c} restrictions"));
        }
    }
    report
}

/// Every one-fork state within bounds at index `k` whose successors leave
/// the bounds at `k + 1`. Empty means the estimate is closed at `k`.
pub fn one_fork_closure_failures(k: usize) -> Vec<OneForkState> {
    let mut failures = Vec::new();
    let (cap, cap_next) = (fib(k), fib(k + 1));
    for x in 0..=cap {
        for y in 0..=cap - x {
            for z in 0..=cap - x - y {
                let st = OneForkState { k, x, y, z };
                if st.next_size() > cap_next {
                    break;
                }
                if st.successors().iter().any(|s| !s.within_bounds()) {
                    failures.push(st);
                }
            }
        }
    }
    failures
}

/// Number of states enumerated by [`one_fork_closure_failures`].
pub fn one_fork_closure_size(k: usize) -> usize {
    let (cap, cap_next) = (fib(k), fib(k + 1));
    let mut count = 0;
    for x in 0..=cap {
        for y in 0..=cap - x {
            let room = (cap - x - y).min(cap_next.saturating_sub(2 * x + y));
            if 2 * x + y <= cap_next {
                count += room as usize + 1;
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Alphabet;

    fn nk(s: &str) -> Necklace {
        Necklace::parse(Alphabet::BINARY, s).unwrap()
    }

    #[test]
    fn fib_values() {
        assert_eq!(fib(1), 1);
        assert_eq!(fib(4), 5);
        assert_eq!(fib(10), 89);
        for c in 3..=FIB_MAX_INDEX {
            assert_eq!(fib(c), fib(c - 1) + fib(c - 2));
        }
        for c in 1..=40 {
            assert!((fib_closed_form(c) - fib(c) as f64).abs() < 1e-9 * fib(c) as f64, "c={c}");
        }
        assert_eq!(min_restrictions_for(4), 4);
        assert_eq!(min_restrictions_for(5), 4);
        assert_eq!(min_restrictions_for(1), 1);
    }

    #[test]
    fn bound_examples() {
        for (w, n, c) in [("aab", 3, 3), ("ab", 2, 2), ("a", 1, 1)] {
            let r = check_bound(&nk(w));
            assert_eq!((r.n, r.c, r.phi_c), (n, c, n as u64));
            assert!(r.pass && r.tight);
        }
    }

    #[test]
    fn deviation_examples() {
        let t = deviation_table(8, 8);
        assert!((t.values[1][0] - 1.236068).abs() < 1e-6);
        for u in 0..8 {
            assert!((t.values[u][u] - 1.0).abs() < 1e-12);
        }
        assert!((t.min.value - 0.9270509831).abs() < 1e-9);
        assert_eq!((t.min.u, t.min.v), (3, 2));
        assert!((t.second.value - DEVIATION_SECOND).abs() < 1e-9);
        assert!(t.to_text().starts_with("1.000000"));
    }

    #[test]
    fn growth_examples() {
        let t1 = growth_table(10, 6, 1.0);
        assert_eq!(t1[0].len(), 3);
        assert_eq!(t1[9].len(), 6);
        let e = t1[0][0];
        assert_eq!((e.c_plus_one, e.k), (2, 2));
        assert!((round_sig(e.value, 6) - 1.05902).abs() < 1e-6);
        let t3 = growth_table(10, 6, DEVIATION_SECOND);
        assert!((round_sig(t3[0][0].value, 6) - 1.0).abs() < 1e-6);
        for row in &t1 {
            let last = row.iter().find(|e| e.k == 0);
            if let Some(e) = last {
                assert!((e.value - ALPHA.powi(e.c_plus_one as i32 - 1)).abs() < 1e-12);
            }
        }
        assert!(growth_csv(&t1).lines().nth(1).unwrap().starts_with("1,1,1.05902,2,2"));
    }

    #[test]
    fn sig_formatting() {
        assert_eq!(sig(0.80901699, 7), "0.8090170");
        assert_eq!(sig(1.0, 7), "1.000000");
        assert_eq!(sig(26.34372, 6), "26.3437");
    }

    #[test]
    fn fibonacci_states_are_tight() {
        for k in 3..20 {
            let st = OneForkState { k, x: fib(k - 1), y: fib(k - 2), z: 0 };
            assert_eq!(st.size(), fib(k));
            assert_eq!(st.next_size(), fib(k + 1));
        }
    }

    #[test]
    fn estimate_trace_examples() {
        assert!(strengthened_estimate_check(&[], None).pass());
        let out = crate::scheme::sequential_drive(&nk("aab"), &mut crate::scheme::FirstPair).unwrap();
        let r = strengthened_estimate_check(&out.states, Some((3, 3)));
        assert!(r.pass(), "{r:?}");
        assert!(r.one_fork_checked >= 1);
    }

    #[test]
    fn closure_small() {
        for k in 2..=8 {
            assert!(one_fork_closure_failures(k).is_empty());
            assert!(one_fork_closure_size(k) > 0);
        }
    }
}
