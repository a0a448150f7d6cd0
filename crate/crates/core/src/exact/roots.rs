use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::Rational;
use crate::error::{domain, Result};

/// Integer combination `sum_k c_k exp(2 pi i k / M)` of `M`-th roots of unity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootOfUnitySum {
    order: u64,
    #[serde(with = "decimal_coeffs")]
    coeffs: BTreeMap<u64, BigInt>,
}

/// Coefficients as decimal strings, so arbitrarily large values survive JSON.
mod decimal_coeffs {
    use std::collections::BTreeMap;

    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(coeffs: &BTreeMap<u64, BigInt>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(coeffs.iter().map(|(k, c)| (k, c.to_string())))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<u64, BigInt>, D::Error> {
        BTreeMap::<u64, String>::deserialize(d)?
            .into_iter()
            .map(|(k, c)| c.parse().map(|c| (k, c)).map_err(serde::de::Error::custom))
            .collect()
    }
}

impl RootOfUnitySum {
    pub fn new(order: u64) -> Result<Self> {
        if order == 0 {
            return domain("root-of-unity order must be positive");
        }
        Ok(RootOfUnitySum {
            order,
            coeffs: BTreeMap::new(),
        })
    }

    /// Builds a sum from `(residue, count)` pairs; residues are reduced mod `order`.
    pub fn from_terms<I, C>(order: u64, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut s = RootOfUnitySum::new(order)?;
        for (k, c) in terms {
            s.add_term(&BigInt::from(k), c.into());
        }
        Ok(s)
    }

    /// `sum_j w_j exp(2 pi i r_j)` for rational phases `r_j`, over the least
    /// common denominator of the phases.
    pub fn from_weighted_phases<'a, I>(phases: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a Rational, BigInt)>,
    {
        let phases: Vec<(&Rational, BigInt)> = phases.into_iter().collect();
        let mut order = BigInt::from(1);
        for (r, _) in &phases {
            order = order.lcm(r.denom());
        }
        let Some(order_u64) = order.to_u64() else {
            return domain(format!("root order {order} exceeds 64 bits"));
        };
        let mut s = RootOfUnitySum::new(order_u64)?;
        for (r, w) in phases {
            let k = r.numer() * (&order / r.denom());
            s.add_term(&k, w);
        }
        Ok(s)
    }

    /// `sum_j exp(2 pi i r_j)`.
    pub fn from_phases<'a, I>(phases: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Rational>,
    {
        RootOfUnitySum::from_weighted_phases(phases.into_iter().map(|r| (r, BigInt::from(1))))
    }

    pub fn add_term(&mut self, residue: &BigInt, coeff: BigInt) {
        let k = residue
            .mod_floor(&BigInt::from(self.order))
            .to_u64()
            .expect("reduced residue fits the order");
        let entry = self.coeffs.entry(k).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Nonzero coefficients by residue.
    pub fn coefficients(&self) -> impl Iterator<Item = (u64, &BigInt)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn is_formally_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Multiplies every term by `exp(2 pi i shift / M)`.
    pub fn rotate(&self, shift: i64) -> Self {
        let mut out = RootOfUnitySum::new(self.order).unwrap();
        for (k, c) in &self.coeffs {
            out.add_term(&(BigInt::from(*k) + shift), c.clone());
        }
        out
    }

    /// Applies the Galois automorphism `zeta -> zeta^unit`; `unit` must be
    /// coprime to the order.
    pub fn dilate(&self, unit: u64) -> Result<Self> {
        if unit.gcd(&self.order) != 1 {
            return domain(format!("{unit} is not a unit mod {}", self.order));
        }
        let mut out = RootOfUnitySum::new(self.order)?;
        for (k, c) in &self.coeffs {
            out.add_term(&(BigInt::from(*k) * unit), c.clone());
        }
        Ok(out)
    }

    /// Re-expresses the sum over a multiple of its order.
    pub fn lift(&self, order: u64) -> Result<Self> {
        if !order.is_multiple_of(self.order) {
            return domain(format!("{order} is not a multiple of {}", self.order));
        }
        let f = order / self.order;
        let mut out = RootOfUnitySum::new(order)?;
        for (k, c) in &self.coeffs {
            out.add_term(&(BigInt::from(*k) * f), c.clone());
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let order = self.order.lcm(&other.order);
        let mut out = self.lift(order)?;
        for (k, c) in &other.lift(order)?.coeffs {
            out.add_term(&BigInt::from(*k), c.clone());
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let order = self.order.lcm(&other.order);
        let a = self.lift(order)?;
        let b = other.lift(order)?;
        let mut out = RootOfUnitySum::new(order)?;
        for (i, x) in &a.coeffs {
            for (j, y) in &b.coeffs {
                out.add_term(&(BigInt::from(*i) + *j), x * y);
            }
        }
        Ok(out)
    }

    pub fn to_complex(&self) -> Complex64 {
        let m = self.order as f64;
        self.coeffs
            .iter()
            .map(|(k, c)| {
                let theta = std::f64::consts::TAU * (*k as f64 / m);
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), theta)
            })
            .sum()
    }

    /// Exact test for `sum_k c_k zeta_M^k = 0`.
    pub fn is_zero(&self) -> bool {
        let terms: Vec<(u64, BigInt)> = self.coeffs.iter().map(|(k, c)| (*k, c.clone())).collect();
        vanishes(self.order, terms)
    }
}

/// `root_sum_is_zero` as a free function.
pub fn root_sum_is_zero(s: &RootOfUnitySum) -> bool {
    s.is_zero()
}

fn combine(terms: Vec<(u64, BigInt)>) -> BTreeMap<u64, BigInt> {
    let mut map: BTreeMap<u64, BigInt> = BTreeMap::new();
    for (k, c) in terms {
        *map.entry(k).or_insert_with(BigInt::zero) += c;
    }
    map.retain(|_, c| !c.is_zero());
    map
}

// Decides P(zeta_M) = 0 by descending the tower Q(zeta_M) / Q(zeta_{M/p}).
//
// If p^2 | M then 1, zeta_M, ..., zeta_M^{p-1} is a basis over Q(zeta_{M/p}),
// so every residue class mod p must vanish on its own. If p || M then
// Q(zeta_M) = Q(zeta_{M/p})(zeta_p) with the only relation
// 1 + zeta_p + ... + zeta_p^{p-1} = 0, so the sum vanishes iff all p
// coefficient blocks (over Q(zeta_{M/p})) are equal.
fn vanishes(order: u64, terms: Vec<(u64, BigInt)>) -> bool {
    let terms = combine(terms);
    if terms.is_empty() {
        return true;
    }
    if order == 1 {
        return false;
    }
    let p = smallest_prime_factor(order);
    let rest = order / p;

    if rest.is_multiple_of(p) {
        let mut classes: BTreeMap<u64, Vec<(u64, BigInt)>> = BTreeMap::new();
        for (k, c) in terms {
            classes.entry(k % p).or_default().push((k / p, c));
        }
        return classes.into_values().all(|t| vanishes(rest, t));
    }

    let mut blocks: BTreeMap<u64, Vec<(u64, BigInt)>> = BTreeMap::new();
    if rest == 1 {
        for (k, c) in terms {
            blocks.entry(k).or_default().push((0, c));
        }
    } else {
        // k/M = k a/p + k b/rest with a = rest^{-1} mod p, b = p^{-1} mod rest.
        let a = mod_inverse(rest % p, p);
        let b = mod_inverse(p % rest, rest);
        for (k, c) in terms {
            let block = mul_mod(k, a, p);
            let inner = mul_mod(k, b, rest);
            blocks.entry(block).or_default().push((inner, c));
        }
    }

    if (blocks.len() as u64) < p {
        // some block is empty, hence every block must vanish
        return blocks.into_values().all(|t| vanishes(rest, t));
    }
    let mut iter = blocks.into_values();
    let first = iter.next().expect("p >= 2 blocks");
    iter.all(|block| {
        let mut diff = block;
        diff.extend(first.iter().map(|(k, c)| (*k, -c)));
        vanishes(rest, diff)
    })
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "{a} not invertible mod {m}");
    old_s.rem_euclid(m as i128) as u64
}

pub(crate) fn smallest_prime_factor(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    if n.is_multiple_of(3) {
        return 3;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        if n.is_multiple_of(d + 2) {
            return d + 2;
        }
        d += 6;
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // Independent oracle: reduce mod x^M - 1 and test divisibility by the
    // M-th cyclotomic polynomial with plain integer polynomial division.
    fn cyclotomic(n: usize, cache: &mut BTreeMap<usize, Vec<i64>>) -> Vec<i64> {
        if let Some(p) = cache.get(&n) {
            return p.clone();
        }
        let mut num = vec![0i64; n + 1];
        num[0] = -1;
        num[n] = 1;
        for d in 1..n {
            if n.is_multiple_of(d) {
                let phi = cyclotomic(d, cache);
                num = poly_div_exact(&num, &phi);
            }
        }
        cache.insert(n, num.clone());
        num
    }

    fn poly_rem(a: &[i64], monic: &[i64]) -> Vec<i64> {
        let mut r = a.to_vec();
        let dm = monic.len() - 1;
        while r.len() > dm {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - dm;
            for (i, c) in monic.iter().enumerate() {
                r[shift + i] -= lead * c;
            }
            r.pop();
        }
        r
    }

    fn poly_div_exact(a: &[i64], monic: &[i64]) -> Vec<i64> {
        let mut r = a.to_vec();
        let dm = monic.len() - 1;
        let mut q = vec![0i64; a.len() - dm];
        while r.len() > dm {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - dm;
            q[shift] = lead;
            for (i, c) in monic.iter().enumerate() {
                r[shift + i] -= lead * c;
            }
            r.pop();
        }
        assert!(r.iter().all(|c| *c == 0));
        q
    }

    fn oracle_is_zero(order: usize, coeffs: &[i64], cache: &mut BTreeMap<usize, Vec<i64>>) -> bool {
        let phi = cyclotomic(order, cache);
        poly_rem(coeffs, &phi).iter().all(|c| *c == 0)
    }

    fn sum(order: u64, terms: &[(i64, i64)]) -> RootOfUnitySum {
        RootOfUnitySum::from_terms(order, terms.iter().copied()).unwrap()
    }

    #[test]
    fn small_cases() {
        assert!(sum(2, &[(0, 1), (1, 1)]).is_zero());
        assert!(!sum(3, &[(0, 1), (1, 1)]).is_zero());
        assert!(sum(8, &[(0, 1), (1, 1), (4, 1), (5, 1)]).is_zero());
        assert!(sum(3, &[(0, 1), (1, 1), (2, 1)]).is_zero());
        assert!(sum(1, &[]).is_zero());
        assert!(!sum(1, &[(0, 2)]).is_zero());
        // 1 + zeta_6^2 + zeta_6^4 = 0 and zeta_6 + zeta_6^3 + zeta_6^5 = 0
        assert!(sum(6, &[(1, 1), (3, 1), (5, 1)]).is_zero());
        // 1 - zeta_30^10 - zeta_30^20 + 2 = 3 + 1 = 4, not zero; (1 + zeta^15)(...) is
        assert!(!sum(30, &[(0, 3), (10, -1), (20, -1)]).is_zero());
        assert!(sum(30, &[(0, 1), (15, 1), (7, 1), (22, 1)]).is_zero());
        assert!(RootOfUnitySum::new(0).is_err());
    }

    #[test]
    fn negative_residues_reduce() {
        let s = sum(4, &[(-1, 1), (1, 1)]);
        assert_eq!(s.coefficients().count(), 2);
        assert!(s.is_zero());
    }

    #[test]
    fn phases_build_common_order() {
        let phases: Vec<Rational> = ["1/4", "3/4", "1/6"].iter().map(|s| s.parse().unwrap()).collect();
        let s = RootOfUnitySum::from_phases(&phases[..2]).unwrap();
        assert_eq!(s.order(), 4);
        assert!(s.is_zero());
        let t = RootOfUnitySum::from_phases(&phases).unwrap();
        assert_eq!(t.order(), 12);
        assert!(!t.is_zero());
    }

    fn random_case(rng: &mut ChaCha8Rng) -> (u64, Vec<i64>) {
        let order = rng.gen_range(1..=360usize);
        let mut coeffs = vec![0i64; order];
        let terms = rng.gen_range(0..=6);
        for _ in 0..terms {
            coeffs[rng.gen_range(0..order)] += rng.gen_range(-5..=5);
        }
        // half of the cases get multiplied by a vanishing sum sum_j x^{jM/q}
        // for a prime divisor q of M, which forces an exact zero
        if rng.gen_bool(0.5) && order > 1 {
            let q = smallest_prime_factor(order as u64) as usize;
            let step = order / q;
            let mut prod = vec![0i64; order];
            for (k, c) in coeffs.iter().enumerate() {
                for j in 0..q {
                    prod[(k + j * step) % order] += c;
                }
            }
            coeffs = prod;
        }
        for c in coeffs.iter_mut() {
            *c = (*c).clamp(-5, 5);
        }
        (order as u64, coeffs)
    }

    #[test]
    fn agrees_with_cyclotomic_division_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut cache = BTreeMap::new();
        let mut zeros = 0;
        for _ in 0..10_000 {
            let (order, coeffs) = random_case(&mut rng);
            let s = RootOfUnitySum::from_terms(order, coeffs.iter().enumerate().map(|(k, c)| (k as i64, *c))).unwrap();
            let expected = oracle_is_zero(order as usize, &coeffs, &mut cache);
            assert_eq!(s.is_zero(), expected, "order {order} coeffs {coeffs:?}");
            // floating evaluation must be consistent wherever it is decisive
            let v = s.to_complex().norm();
            if expected {
                assert!(v < 1e-9, "vanishing sum evaluates to {v}");
            } else if v < 1e-9 {
                panic!("nonvanishing sum with |value| = {v}");
            }
            zeros += expected as usize;
        }
        assert!(zeros > 3000, "degenerate sample: {zeros} zeros");
    }

    #[test]
    fn rotation_and_galois_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let (order, coeffs) = random_case(&mut rng);
            let s = RootOfUnitySum::from_terms(order, coeffs.iter().enumerate().map(|(k, c)| (k as i64, *c))).unwrap();
            let z = s.is_zero();
            let shift = rng.gen_range(-1000..1000);
            assert_eq!(s.rotate(shift).is_zero(), z);
            let unit = loop {
                let u = rng.gen_range(1..=order.max(2) * 3);
                if u.gcd(&order) == 1 {
                    break u;
                }
            };
            assert_eq!(s.dilate(unit).unwrap().is_zero(), z);
            assert_eq!(s.lift(order * 6).unwrap().is_zero(), z);
        }
    }

    #[test]
    fn products_and_sums() {
        let a = sum(2, &[(0, 1), (1, 1)]);
        let b = sum(3, &[(0, 1), (1, 1)]);
        assert!(a.mul(&b).unwrap().is_zero());
        assert!(!b.mul(&b).unwrap().is_zero());
        let c = sum(3, &[(0, -1), (1, -1)]);
        assert!(b.add(&c).unwrap().is_formally_empty());
    }

    #[test]
    fn large_prime_order() {
        let p = 1_000_003u64;
        let s = RootOfUnitySum::from_terms(p, (0..5).map(|k| (k, 1))).unwrap();
        assert!(!s.is_zero());
        assert_eq!(smallest_prime_factor(p), p);
        assert_eq!(smallest_prime_factor(49), 7);
    }
}
