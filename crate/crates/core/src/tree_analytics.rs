//! Closed forms for branching trees under the uniform measure.
//!
//! Finite-`n` quantities are exact (`BigUint`/`BigRational`); the
//! asymptotic proportion `ap` is a limit and is returned as `f64`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::generators::BranchingSequence;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeFormulas {
    pub ks: BranchingSequence,
}

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn int(v: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl TreeFormulas {
    pub fn new(ks: BranchingSequence) -> Self {
        Self { ks }
    }

    fn k(&self, l: usize) -> Result<BigUint> {
        self.ks.check_depth(l)?;
        Ok(BigUint::from(self.ks.k(l).expect("checked depth")))
    }

    /// `β(l) = k_1 k_2 ⋯ k_l`, with `β(0) = 1`.
    pub fn beta(&self, l: usize) -> Result<BigUint> {
        (1..=l).try_fold(BigUint::one(), |acc, i| Ok(acc * self.k(i)?))
    }

    /// `N(n) = Σ_{l=0}^{n} β(l)`.
    pub fn node_count(&self, n: usize) -> Result<BigUint> {
        self.ks.check_depth(n)?;
        let mut level = BigUint::one();
        let mut total = BigUint::one();
        for l in 1..=n {
            level *= self.k(l)?;
            total += &level;
        }
        Ok(total)
    }

    /// `c_n(v)`: strict descendants in `T_n` of a node at depth `l`.
    pub fn descendant_count(&self, l: usize, n: usize) -> Result<BigUint> {
        if l > n {
            return Err(Error::InvalidParameter(alloc::format!("depth {l} exceeds tree depth {n}")));
        }
        self.ks.check_depth(n)?;
        let mut level = BigUint::one();
        let mut total = BigUint::zero();
        for m in l + 1..=n {
            level *= self.k(m)?;
            total += &level;
        }
        Ok(total)
    }

    /// `l_n(root) = (k_1 − 1)/(2k_1) · (N − 1)² + N − 1`.
    pub fn root_load(&self, n: usize) -> Result<BigRational> {
        if n == 0 {
            return Err(Error::InvalidParameter("root load needs depth n >= 1".into()));
        }
        let k1 = self.k(1)?;
        let m = int(self.node_count(n)? - 1u32);
        let coeff = ratio(&k1 - 1u32, k1 * 2u32);
        Ok(coeff * m.clone() * m.clone() + m)
    }

    /// `p_n(root) = 2 l_n(root) / (N(N − 1))`.
    pub fn root_proportion(&self, n: usize) -> Result<BigRational> {
        let load = self.root_load(n)?;
        let big_n = self.node_count(n)?;
        let pairs = int(&big_n * (&big_n - 1u32));
        Ok(load * BigRational::from_integer(2.into()) / pairs)
    }

    /// Exact finite-`n` load through a node at depth `l`: the pair products
    /// of the components left after deleting it, plus the `N − 1` pairs it
    /// is an endpoint of.
    pub fn node_load(&self, l: usize, n: usize) -> Result<BigRational> {
        let total = self.node_count(n)?;
        let below = self.descendant_count(l, n)?;
        let rest = &total - 1u32 - &below;
        let mut load = int(&rest * &below + &total - 1u32);
        if l < n {
            let k = self.k(l + 1)?;
            let child = &below / &k;
            let pairs = &k * (&k - 1u32) / 2u32;
            load += int(pairs * &child * &child);
        }
        Ok(load)
    }

    pub fn node_proportion(&self, l: usize, n: usize) -> Result<BigRational> {
        let big_n = self.node_count(n)?;
        Ok(self.node_load(l, n)? * BigRational::from_integer(2.into()) / int(&big_n * (&big_n - 1u32)))
    }

    /// `ap(v) = (1/β(l)) (2 − 1/β(l) − 1/β(l+1))` for a node at depth `l`.
    pub fn asymptotic_proportion(&self, l: usize) -> Result<f64> {
        let b = int(self.beta(l)?);
        let b1 = int(self.beta(l + 1)?);
        let one = BigRational::one();
        let two = BigRational::from_integer(2.into());
        let ap = (one.clone() / b.clone()) * (two - one.clone() / b - one / b1);
        Ok(ap.to_f64().unwrap_or(0.0))
    }
}
