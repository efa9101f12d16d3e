//! Why the delay cannot be dropped: on a nontrivial group, the addition map
//! admits no fixpoint-square solution when `▶ = Id`.
//!
//! Take `X = Y = Z_n` and `h = + : X × X → X`.  A solution `s : X → X` of the
//! undelayed square would satisfy `s(x) = s(x) + x` for every `x`, forcing
//! `x = 0` — impossible once `n ≥ 2`.  The count is established here by brute
//! force over *all* `n^n` set maps (the group structure constrains nothing;
//! only the equation matters), so the result is an exact oracle, not a proof
//! sketch.
//!
//! The guarded models dodge the paradox structurally: in the lift model the
//! analogous addition body is not even monotone on the lifted domain, so it
//! is rejected at morphism-construction time, and every body that *is* a
//! morphism has a dagger.

use serde::Serialize;

/// Outcome of the exhaustive count for one group order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdditionCount {
    pub order: u32,
    pub candidates: u64,
    pub solutions: u64,
}

/// Count solutions of `s(x) = s(x) + x` on `Z_n` among all set maps
/// `s : Z_n → Z_n`, by exhaustive enumeration.
pub fn addition_witness(n: u32) -> AdditionCount {
    assert!(n >= 1 && n <= 8, "exhaustive count is meant for desk scale");
    let n_us = n as usize;
    let candidates = (n_us as u64).pow(n);
    let mut solutions = 0u64;
    // odometer over all maps s : Z_n → Z_n
    let mut s = vec![0usize; n_us];
    loop {
        let ok = (0..n_us).all(|x| s[x] == (s[x] + x) % n_us);
        if ok {
            solutions += 1;
        }
        // advance
        let mut i = 0;
        loop {
            if i == n_us {
                return AdditionCount {
                    order: n,
                    candidates,
                    solutions,
                };
            }
            s[i] += 1;
            if s[i] < n_us {
                break;
            }
            s[i] = 0;
            i += 1;
        }
    }
}

/// Closed form the enumeration must agree with: one solution for the trivial
/// group, none otherwise.
pub fn expected_solutions(n: u32) -> u64 {
    if n == 1 {
        1
    } else {
        0
    }
}
