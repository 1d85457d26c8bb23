//! Enumeration helpers for total assignments `cells → group`.

/// Enumeration budget: the largest number of candidate states a routine may
/// visit before refusing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_states: u128,
}

impl Budget {
    pub const DEFAULT_MAX_STATES: u128 = 10_000_000;

    pub fn new(max_states: u128) -> Self {
        Self { max_states }
    }

    pub fn check(&self, bound: u128) -> crate::Result<()> {
        if bound > self.max_states {
            Err(crate::Error::BudgetExceeded {
                bound,
                budget: self.max_states,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::new(Self::DEFAULT_MAX_STATES)
    }
}

pub fn pow_saturating(base: usize, exp: usize) -> u128 {
    (base as u128).saturating_pow(exp as u32)
}

/// Calls `f` on every vector in `0..radix` of length `slots`, in lexicographic
/// order (last slot fastest).
pub fn for_each_assignment(slots: usize, radix: usize, mut f: impl FnMut(&[usize])) {
    if radix == 0 && slots > 0 {
        return;
    }
    let mut cur = vec![0usize; slots];
    loop {
        f(&cur);
        let mut i = slots;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < radix {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// Every vector in `0..radix` of length `slots`, collected.
pub fn all_assignments(slots: usize, radix: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_assignment(slots, radix, |a| out.push(a.to_vec()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odometer_order_and_count() {
        let all = all_assignments(2, 3);
        assert_eq!(all.len(), 9);
        assert_eq!(all[0], [0, 0]);
        assert_eq!(all[1], [0, 1]);
        assert_eq!(all[8], [2, 2]);
        assert_eq!(all_assignments(0, 5), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn budget_refuses_with_bound() {
        let b = Budget::new(10);
        assert!(b.check(10).is_ok());
        assert_eq!(
            b.check(11),
            Err(crate::Error::BudgetExceeded { bound: 11, budget: 10 })
        );
        assert_eq!(pow_saturating(1000, 100), u128::MAX);
    }
}
