//! Complete Bell polynomials.
//!
//! `B_n(x_1, ..., x_n)` organizes the chain rule for `exp(g(s))`: the n-th
//! derivative of `exp(g)` is `exp(g) * B_n(g', g'', ..., g^(n))`. The
//! coverage engine consumes these through a scaled recurrence of its own (to
//! keep factorial growth out of intermediates); the plain values here exist
//! as a public kernel and as the anchor for the set-partition oracle tests.

/// Complete Bell polynomial `B_n(x[0], ..., x[n-1])` with `n = x.len()`,
/// via the binomial recurrence
/// `B_{n+1} = sum_{k=0}^{n} C(n, k) B_{n-k} x_{k+1}` and `B_0 = 1`.
///
/// Exact in floating point for the small orders (n <= ~20) used in practice;
/// for n = 0 (empty slice) returns `B_0 = 1`.
pub fn bell_complete(x: &[f64]) -> f64 {
    let n = x.len();
    let mut b = vec![0.0; n + 1];
    b[0] = 1.0;
    for m in 0..n {
        // B_{m+1} = sum_{k=0}^{m} C(m, k) * B_{m-k} * x[k]
        let mut binom = 1.0; // C(m, 0)
        let mut acc = 0.0;
        for k in 0..=m {
            acc += binom * b[m - k] * x[k];
            binom *= (m - k) as f64 / (k + 1) as f64; // C(m, k+1)
        }
        b[m + 1] = acc;
    }
    b[n]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Independent oracle: sum over all set partitions of {1..n} of the
    /// product of block marks, `B_n(x) = sum_partitions prod_blocks x_{|B|}`.
    fn bell_by_set_partitions(x: &[f64]) -> f64 {
        // Each leaf of this recursion visits exactly one set partition: the
        // block containing the lowest remaining element is that element plus
        // any subset of the others, then the leftovers are partitioned.
        fn recurse(elems: &[usize], x: &[f64]) -> f64 {
            if elems.is_empty() {
                return 1.0;
            }
            let rest = &elems[1..];
            let m = rest.len();
            let mut total = 0.0;
            for mask in 0..(1_u32 << m) {
                let mut block_size = 1;
                let mut left = Vec::new();
                for (i, &e) in rest.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        block_size += 1;
                    } else {
                        left.push(e);
                    }
                }
                total += x[block_size - 1] * recurse(&left, x);
            }
            total
        }
        let elems: Vec<usize> = (0..x.len()).collect();
        recurse(&elems, x)
    }

    #[test]
    fn all_ones_arguments_give_bell_numbers() {
        let bell_numbers = [1.0, 1.0, 2.0, 5.0, 15.0, 52.0, 203.0, 877.0, 4140.0];
        for (n, want) in bell_numbers.iter().enumerate() {
            let x = vec![1.0; n];
            assert_eq!(bell_complete(&x), *want, "B_{n}(1,...,1)");
        }
    }

    #[test]
    fn recurrence_matches_set_partition_sum_for_mixed_signs() {
        let x = [0.5, -1.25, 2.0, 3.5, -0.75, 1.1, 0.2, -2.2];
        // Frozen from the combinatorial oracle (and re-derived below).
        let golden = [
            (1, 0.5),
            (3, 0.25),
            (5, -1.8125),
            (8, 2_162.659_375_000_001_5),
        ];
        for (n, want) in golden {
            let got = bell_complete(&x[..n]);
            assert_relative_eq!(got, want, max_relative = 1e-12);
            let oracle = bell_by_set_partitions(&x[..n]);
            assert_relative_eq!(got, oracle, max_relative = 1e-12);
        }
    }

    #[test]
    fn recurrence_matches_set_partition_sum_on_pseudorandom_inputs() {
        // Deterministic LCG-driven arguments; covers every order up to 8.
        let mut state = 0x2545_f491_4f6c_dd1d_u64;
        let mut next = move || {
            state = state.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1);
            ((state >> 33) as f64) / f64::from(1_u32 << 31) - 1.0
        };
        for n in 1..=8 {
            let x: Vec<f64> = (0..n).map(|_| 3.0 * next()).collect();
            let got = bell_complete(&x);
            let want = bell_by_set_partitions(&x);
            let scale = want.abs().max(1.0);
            assert!(
                (got - want).abs() <= 1e-11 * scale,
                "order {n}: recurrence {got} vs partitions {want}"
            );
        }
    }

    #[test]
    fn first_argument_only_reduces_to_powers() {
        // With x = (t, 0, 0, ...), B_n = t^n (only the all-singletons
        // partition survives).
        let t = 1.7;
        for n in 1..=10 {
            let mut x = vec![0.0; n];
            x[0] = t;
            assert_relative_eq!(bell_complete(&x), t.powi(n as i32), max_relative = 1e-12);
        }
    }
}
