use serde::{Deserialize, Serialize};

use super::sample::ResidueModel;
use crate::error::{LabError, Result};
use crate::primes::{is_prime, primes_between};

/// A path `a, a - p1, a - p1 + p2, b` with `b = a - p1 + p2 - p3`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeHopPath {
    pub vertices: [i64; 4],
    pub primes: [u64; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "outcome")]
pub enum ThreeHop {
    Found(ThreeHopPath),
    /// Every admissible quintuple was tried.
    Absent,
    /// `A` or `B` was empty.
    Vacuous,
}

/// `true` when every vertex is in the model's vertex set and every step is an odd
/// prime dividing the shifted integer at its endpoints.
pub fn validate_path<M: ResidueModel + ?Sized>(model: &M, vertices: &[i64]) -> bool {
    vertices.iter().all(|&v| model.is_vertex(v))
        && vertices.windows(2).all(|w| {
            let q = w[0].abs_diff(w[1]);
            q % 2 == 1 && is_prime(q) && model.divides(q, w[0]) && model.divides(q, w[1])
        })
}

/// Search for a length-3 path from an odd `a ∈ A` to an even `b ∈ B` through
/// steps `-p1, +p2, -p3` with `p1 ∈ (X, 3X]`, `p2 ∈ (5X, 7X]`, `p3 ∈ (3X, 5X]`.
pub fn three_hop_search<M: ResidueModel + ?Sized>(
    model: &M,
    a_set: &[i64],
    b_set: &[i64],
    x: u64,
) -> Result<ThreeHop> {
    if x == 0 {
        return Err(LabError::param("X", "scale must be positive"));
    }
    let xi = x as i64;
    for (name, set, parity) in [("A", a_set, 1), ("B", b_set, 0)] {
        for &v in set {
            if v.rem_euclid(2) != parity {
                return Err(LabError::param(
                    name,
                    format!("{v} has the wrong parity (A odd, B even)"),
                ));
            }
            if v < 0 || v > xi {
                return Err(LabError::param(name, format!("{v} lies outside [0, X]")));
            }
            if !model.is_vertex(v) {
                return Err(LabError::param(name, format!("{v} is not a vertex")));
            }
        }
    }
    if a_set.is_empty() || b_set.is_empty() {
        return Ok(ThreeHop::Vacuous);
    }
    if model.prime_bound() < 7 * x {
        return Err(LabError::param(
            "P",
            format!("residues needed up to 7X = {}", 7 * x),
        ));
    }
    let first = primes_between(x + 1, 3 * x);
    let second = primes_between(5 * x + 1, 7 * x);
    let third = primes_between(3 * x + 1, 5 * x);
    let mut in_b = vec![false; x as usize + 1];
    for &b in b_set {
        in_b[b as usize] = true;
    }
    let mut a_sorted = a_set.to_vec();
    a_sorted.sort_unstable();
    a_sorted.dedup();
    for &a in &a_sorted {
        for &p1 in first.iter().filter(|&&p| model.divides(p, a)) {
            let c = a - p1 as i64;
            if !model.is_vertex(c) {
                continue;
            }
            for &p2 in second.iter().filter(|&&p| model.divides(p, c)) {
                let d = c + p2 as i64;
                if !model.is_vertex(d) {
                    continue;
                }
                for &p3 in third.iter().filter(|&&p| model.divides(p, d)) {
                    let b = d - p3 as i64;
                    if (0..=xi).contains(&b) && in_b[b as usize] {
                        return Ok(ThreeHop::Found(ThreeHopPath {
                            vertices: [a, c, d, b],
                            primes: [p1, p2, p3],
                        }));
                    }
                }
            }
        }
    }
    Ok(ThreeHop::Absent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::testing::Fixed;

    /// Smallest `n` with `n ≡ r mod q` for each pair.
    fn crt(conditions: &[(u64, i64)]) -> u64 {
        let modulus: u64 = conditions.iter().map(|&(q, _)| q).product();
        (0..modulus)
            .find(|&n| conditions.iter().all(|&(q, r)| (n as i64 - r).rem_euclid(q as i64) == 0))
            .unwrap()
    }

    #[test]
    fn scale_ten_example() {
        // 11 | n + 1, 53 | n - 10, 41 | n + 43
        let n = crt(&[(11, -1), (53, 10), (41, -43)]);
        let model = Fixed { n, vertices: None };
        assert!(validate_path(&model, &[1, -10, 43, 2]));
        match three_hop_search(&model, &[1], &[2], 10).unwrap() {
            ThreeHop::Found(path) => {
                assert_eq!(path.vertices[0], 1);
                assert_eq!(path.vertices[3], 2);
                let [p1, p2, p3] = path.primes;
                assert!((11..=30).contains(&p1) && (51..=70).contains(&p2) && (31..=50).contains(&p3));
                assert!(validate_path(&model, &path.vertices));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parity_and_emptiness() {
        let model = Fixed { n: 0, vertices: None };
        assert!(three_hop_search(&model, &[2], &[4], 10).is_err());
        assert!(three_hop_search(&model, &[1], &[3], 10).is_err());
        assert!(three_hop_search(&model, &[11], &[2], 10).is_err());
        assert_eq!(three_hop_search(&model, &[], &[2], 10).unwrap(), ThreeHop::Vacuous);
        assert_eq!(three_hop_search(&model, &[1], &[], 10).unwrap(), ThreeHop::Vacuous);
    }

    #[test]
    fn absence_when_no_divisibility() {
        // n ≡ 0 mod every prime in (10, 30]: 1 - p1 never divisible, so no first hop.
        let model = Fixed { n: 11 * 13 * 17 * 19 * 23 * 29, vertices: None };
        assert_eq!(three_hop_search(&model, &[1], &[2], 10).unwrap(), ThreeHop::Absent);
    }
}
