use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::net::System;

/// Largest exact value kept, in bits. Beyond it only a power-of-two lower bound is tracked.
const EXACT_BITS: u64 = 1 << 16;
/// Numerals with more digits than this are shown in exponent form.
const DIGITS_SHOWN: usize = 60;

/// A natural number that may be too large to materialize.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Magnitude {
    Exact(BigUint),
    /// Some value at least `2^k`.
    Pow2AtLeast(Box<Magnitude>),
}

impl Magnitude {
    pub fn from_u64(n: u64) -> Magnitude {
        Magnitude::Exact(BigUint::from(n))
    }

    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            Magnitude::Exact(n) => Some(n),
            Magnitude::Pow2AtLeast(_) => None,
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, Magnitude::Exact(n) if n.is_zero())
    }

    /// Sum, exact when both sides are; otherwise a valid lower bound.
    fn add(&self, other: &Magnitude) -> Magnitude {
        match (self, other) {
            (Magnitude::Exact(a), Magnitude::Exact(b)) => Magnitude::Exact(a + b),
            (Magnitude::Pow2AtLeast(_), _) => self.clone(),
            (_, Magnitude::Pow2AtLeast(_)) => other.clone(),
        }
    }

    pub fn mul(&self, other: &Magnitude) -> Magnitude {
        if self.is_zero() || other.is_zero() {
            return Magnitude::from_u64(0);
        }
        match (self, other) {
            (Magnitude::Exact(a), Magnitude::Exact(b)) => {
                if a.bits() + b.bits() <= EXACT_BITS {
                    Magnitude::Exact(a * b)
                } else {
                    Magnitude::Pow2AtLeast(Box::new(Magnitude::from_u64(a.bits() + b.bits() - 2)))
                }
            }
            (Magnitude::Pow2AtLeast(k), Magnitude::Exact(n))
            | (Magnitude::Exact(n), Magnitude::Pow2AtLeast(k)) => {
                Magnitude::Pow2AtLeast(Box::new(k.add(&Magnitude::from_u64(n.bits() - 1))))
            }
            (Magnitude::Pow2AtLeast(a), Magnitude::Pow2AtLeast(b)) => {
                Magnitude::Pow2AtLeast(Box::new(a.add(b)))
            }
        }
    }

    pub fn pow2(&self) -> Magnitude {
        match self {
            Magnitude::Exact(e) if *e <= BigUint::from(EXACT_BITS) => {
                Magnitude::Exact(BigUint::one() << e.to_u64().expect("small exponent"))
            }
            _ => Magnitude::Pow2AtLeast(Box::new(self.clone())),
        }
    }

    pub fn succ(&self) -> Magnitude {
        self.add(&Magnitude::from_u64(1))
    }

    /// Whether `n` is at most this magnitude. Exact for exact values; for
    /// lower-bounded ones, `n` is compared with the bound itself.
    pub fn admits(&self, n: &BigUint) -> bool {
        match self {
            Magnitude::Exact(m) => n <= m,
            Magnitude::Pow2AtLeast(k) => match k.exact().and_then(|k| k.to_u64()) {
                Some(k) if k < EXACT_BITS => n <= &(BigUint::one() << k),
                _ => true,
            },
        }
    }

    pub fn admits_i64(&self, n: i64) -> bool {
        n < 0 || self.admits(&BigUint::from(n as u64))
    }

    pub fn cmp_exact(&self, n: &BigUint) -> Option<Ordering> {
        self.exact().map(|m| m.cmp(n))
    }
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Magnitude::Exact(n) => {
                let s = n.to_string();
                if s.len() <= DIGITS_SHOWN {
                    f.write_str(&s)
                } else {
                    write!(f, "~2^{} ({} digits)", n.bits() - 1, s.len())
                }
            }
            Magnitude::Pow2AtLeast(k) => write!(f, ">= 2^({k})"),
        }
    }
}

/// Depth-indexed functions `r_n` and `q_n` of the elementary and light bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Levels {
    pub r: Vec<Magnitude>,
    pub q: Vec<Magnitude>,
}

/// `r_0 .. r_n` and `q_0 .. q_n` at `x` for ELL (`q = 2^(x r + 1)`) or LLL (`q = x r`).
pub fn levels(system: System, n: usize, x: u64) -> Levels {
    let xm = Magnitude::from_u64(x);
    let mut r = vec![Magnitude::from_u64(1)];
    let mut q = Vec::new();
    for k in 0..=n {
        let qk = match system {
            System::Lll => xm.mul(&r[k]),
            _ => xm.mul(&r[k]).succ().pow2(),
        };
        r.push(r[k].mul(&qk));
        q.push(qk);
    }
    r.truncate(n + 1);
    Levels { r, q }
}

/// Polynomial bound `(2y^2 + y)(x + 1)` on steps and sizes, with `x = W_G` and `y = |G|`.
pub fn mell_bound(weight: u64, size: u64) -> BigUint {
    let y = BigUint::from(size);
    (BigUint::from(2u32) * &y * &y + &y) * (BigUint::from(weight) + 1u32)
}

/// Weight bound `p_n(x)` of a subsystem at depth `n` and size `x`.
///
/// For MELL there is no depth-indexed weight bound; `n` is read as the
/// weight and the result is the step bound of [`mell_bound`].
pub fn bound(system: System, n: usize, x: u64) -> Magnitude {
    match system {
        System::Mell => Magnitude::Exact(mell_bound(n as u64, x)),
        System::Sll => Magnitude::Exact(BigUint::from(x).pow(n as u32 + 2)),
        System::Ell | System::Lll => {
            let l = levels(system, n, x);
            Magnitude::from_u64(x).mul(&l.r[n]).mul(&l.q[n])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_values() {
        assert_eq!(mell_bound(0, 5), BigUint::from(55u32));
        assert_eq!(bound(System::Sll, 0, 7), Magnitude::from_u64(49));
        let l = levels(System::Ell, 1, 10);
        assert_eq!(l.q[0], Magnitude::from_u64(1 << 11));
        assert_eq!(l.r[1], Magnitude::from_u64(1 << 11));
        assert_eq!(l.q[1].exact().map(|q| q.bits()), Some(10 * 2048 + 2));
        let l = levels(System::Lll, 2, 3);
        assert_eq!(
            (l.r[2].clone(), l.q[2].clone()),
            (Magnitude::from_u64(27), Magnitude::from_u64(81))
        );
        assert_eq!(bound(System::Lll, 0, 3), Magnitude::from_u64(9));
    }

    #[test]
    fn huge_values_still_admit_small_weights() {
        let b = bound(System::Ell, 3, 20);
        assert!(b.exact().is_none());
        assert!(b.admits(&BigUint::from(u64::MAX)));
        assert!(b.to_string().starts_with(">= 2^"));
    }

    proptest! {
        #[test]
        fn exact_products_are_exact(a in 0u64..1 << 30, b in 0u64..1 << 30) {
            let m = Magnitude::from_u64(a).mul(&Magnitude::from_u64(b));
            prop_assert_eq!(m, Magnitude::Exact(BigUint::from(a) * b));
        }

        #[test]
        fn bounds_grow_with_size(n in 0usize..3, x in 1u64..12) {
            for s in [System::Ell, System::Sll, System::Lll] {
                let (a, b) = (bound(s, n, x), bound(s, n, x + 1));
                if let (Some(a), Some(b)) = (a.exact(), b.exact()) {
                    prop_assert!(a <= b);
                }
            }
        }
    }
}
