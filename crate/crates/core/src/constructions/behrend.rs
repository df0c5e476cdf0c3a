use std::collections::HashMap;

/// Sphere-shell 3AP-free subset of `{0..m}`.
///
/// Vectors with coordinates below `n/2` written in base `n` add without
/// carries, so `x + z = 2y` forces the vector identity; on one sphere that
/// identity is only possible for `x = y = z`. Dimension is
/// `ceil(sqrt(log2 m))`, the radix is the largest that fits under `m`, and
/// the most populated shell wins (smallest radius on ties). The base-3
/// `{0,1}`-digit set is also built and the larger of the two is returned.
pub fn behrend_set(m: u64) -> Vec<i64> {
    let sphere = sphere_set(m);
    let ternary = ternary_set(m);
    if sphere.len() > ternary.len() {
        sphere
    } else {
        ternary
    }
}

fn ternary_set(m: u64) -> Vec<i64> {
    (0..=m as i64)
        .filter(|&x| {
            let mut y = x;
            while y > 0 {
                if y % 3 == 2 {
                    return false;
                }
                y /= 3;
            }
            true
        })
        .collect()
}

/// Dimension used by the sphere construction.
pub fn behrend_dimension(m: u64) -> u32 {
    if m < 2 {
        return 1;
    }
    ((m as f64).log2().sqrt().ceil() as u32).max(1)
}

fn sphere_set(m: u64) -> Vec<i64> {
    let d = behrend_dimension(m);
    // largest radix n with g * (1 + n + ... + n^(d-1)) <= m, g = (n-1)/2
    let span = |n: u64| -> Option<u64> {
        let g = (n - 1) / 2;
        let mut s: u64 = 0;
        let mut p: u64 = 1;
        for _ in 0..d {
            s = s.checked_add(p)?;
            p = p.checked_mul(n)?;
        }
        g.checked_mul(s)
    };
    let mut n = 3u64;
    while matches!(span(n + 1), Some(v) if v <= m) {
        n += 1;
    }
    if !matches!(span(n), Some(v) if v <= m) {
        return vec![0];
    }
    let g = (n - 1) / 2;
    let mut shells: HashMap<u64, Vec<i64>> = HashMap::new();
    let mut coords = vec![0u64; d as usize];
    loop {
        let r: u64 = coords.iter().map(|c| c * c).sum();
        let x: u64 = coords.iter().rev().fold(0, |acc, &c| acc * n + c);
        shells.entry(r).or_default().push(x as i64);
        let mut i = 0;
        loop {
            if i == coords.len() {
                let (_, mut best) = shells
                    .into_iter()
                    .max_by(|a, b| a.1.len().cmp(&b.1.len()).then(b.0.cmp(&a.0)))
                    .unwrap();
                best.sort_unstable();
                return best;
            }
            coords[i] += 1;
            if coords[i] <= g {
                break;
            }
            coords[i] = 0;
            i += 1;
        }
    }
}

/// True when no `x < y < z` in the sorted set satisfies `x + z = 2y`.
pub fn is_3ap_free(set: &[i64]) -> bool {
    let members: std::collections::HashSet<i64> = set.iter().copied().collect();
    for (i, &x) in set.iter().enumerate() {
        for &z in &set[i + 1..] {
            if (x + z) % 2 == 0 && members.contains(&((x + z) / 2)) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert_eq!(behrend_set(1), vec![0, 1]);
        assert_eq!(behrend_set(2), vec![0, 1]);
        let s = behrend_set(8);
        assert!(s.len() >= 4 && is_3ap_free(&s));
        assert_eq!(behrend_set(10), vec![0, 1, 3, 4, 9, 10]);
    }

    #[test]
    fn free_and_in_range() {
        for m in 1..300 {
            let s = behrend_set(m);
            assert!(is_3ap_free(&s), "m={m}");
            assert!(*s.last().unwrap() as u64 <= m && s[0] >= 0);
            assert!(s.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn sphere_shell_is_free() {
        for m in [100, 1000, 5000] {
            assert!(is_3ap_free(&sphere_set(m)));
        }
    }
}
