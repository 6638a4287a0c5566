//! `𝒢(m)`: integer triples `(n₁, n₂, n₃) ∈ (X,3X] × (5X,7X] × (3X,5X]` with `m = −n₁ + n₂ − n₃`.

/// `Σ_{v=1}^{u} c(v)` where `c(u) = u` for `u ≤ 2X` and `4X − u` above, clamped to `[0, 4X − 1]`.
///
/// `c(u)` counts pairs `(n₁, n₃)` with `n₁ + n₃ = 4X + 1 + u`.
fn tent_prefix(u: i128, x: i128) -> i128 {
    let u = u.clamp(0, 4 * x - 1);
    if u <= 2 * x {
        u * (u + 1) / 2
    } else {
        let rising = x * (2 * x + 1);
        let lo = 4 * x - u;
        rising + (2 * x - 1) * (2 * x) / 2 - (lo - 1) * lo / 2
    }
}

/// Closed-form `𝒢(m)`; zero outside `[−3X + 1, 3X − 2]`.
pub fn lattice_count(m: i64, x: u64) -> u64 {
    if x == 0 {
        return 0;
    }
    let (m, x) = (m as i128, x as i128);
    // n₂ ranges over [5X+1, 7X]; n₁ + n₃ = n₂ − m, so u = n₂ − m − 4X − 1.
    let g = tent_prefix(3 * x - m - 1, x) - tent_prefix(x - m - 1, x);
    g as u64
}

/// Direct enumeration over `n₁, n₃`; cost `O(X²)`.
pub fn lattice_count_naive(m: i64, x: u64) -> u64 {
    let x = x as i64;
    let mut count = 0;
    for n1 in x + 1..=3 * x {
        for n3 in 3 * x + 1..=5 * x {
            let n2 = m + n1 + n3;
            count += (5 * x < n2 && n2 <= 7 * x) as u64;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scale_one_box() {
        assert_eq!(lattice_count(-1, 1), 3);
        assert_eq!(lattice_count_naive(-1, 1), 3);
        assert_eq!(lattice_count(4, 1), 0);
        assert_eq!(lattice_count(-4, 1), 0);
    }

    #[test]
    fn total_mass_is_eight_x_cubed() {
        for x in 1..=50u64 {
            let xi = x as i64;
            let total: u64 = (-5 * xi..=5 * xi).map(|m| lattice_count(m, x)).sum();
            assert_eq!(total, 8 * x * x * x);
        }
    }

    #[test]
    fn closed_form_matches_enumeration() {
        for x in 1..=25u64 {
            let xi = x as i64;
            for m in -4 * xi..=4 * xi {
                assert_eq!(lattice_count(m, x), lattice_count_naive(m, x), "X={x} m={m}");
            }
        }
    }

    #[test]
    fn support_ends_at_three_x() {
        for x in 1..=30u64 {
            let xi = x as i64;
            assert_eq!(lattice_count(3 * xi + 1, x), 0);
            assert_eq!(lattice_count(-3 * xi - 1, x), 0);
            assert!(lattice_count(0, x) > 0);
        }
    }
}
