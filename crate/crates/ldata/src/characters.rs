//! Dirichlet characters: CRT decomposition, exact root-of-unity values,
//! conductor, parity and a deterministic enumeration.
//!
//! Values are stored as exponents of roots of unity (one cyclic component
//! per prime-power factor of the modulus, with a fixed primitive root for
//! odd prime powers and the {-1} x <5> decomposition at powers of two) and
//! rendered to complex numbers only at API boundaries.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Modulus cap: keeps the classifier search space desk-scale.
pub const MODULUS_CAP: u64 = 10_000;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

/// Smallest primitive root modulo p^e for odd prime p.
fn primitive_root(p: u64, e: u32) -> u64 {
    let pe = p.pow(e);
    let phi_p = p - 1;
    let factors: Vec<u64> = factorize(phi_p).into_iter().map(|(q, _)| q).collect();
    let mut g = 2;
    loop {
        if gcd(g, p) == 1 && factors.iter().all(|&q| pow_mod(g, phi_p / q, p) != 1) {
            break;
        }
        g += 1;
    }
    if e == 1 {
        return g;
    }
    // lift: g is a primitive root mod p^e unless g^{p-1} = 1 mod p^2
    if pow_mod(g, p - 1, p * p) == 1 {
        g += p;
    }
    debug_assert_ne!(pow_mod(g, p - 1, p * p), 1);
    let _ = pe;
    g
}

/// One cyclic component of (Z/qZ)*.
#[derive(Debug, Clone)]
enum Component {
    /// Odd prime power p^e with a fixed primitive root; `dlog[n mod p^e]`
    /// holds the discrete log of n (or u32::MAX when p | n).
    OddPrimePower {
        modulus: u64,
        order: u64,
        prime: u64,
        dlog: std::sync::Arc<Vec<u32>>,
    },
    /// The {+-1} factor at modulus 4 or 2^e (order 2): exponent of -1.
    TwoSign { modulus: u64 },
    /// The <5> factor at modulus 2^e, e >= 3 (order 2^{e-2}).
    TwoFive {
        modulus: u64,
        order: u64,
        dlog: std::sync::Arc<Vec<u32>>,
    },
}

impl Component {
    fn order(&self) -> u64 {
        match self {
            Component::OddPrimePower { order, .. } => *order,
            Component::TwoSign { .. } => 2,
            Component::TwoFive { order, .. } => *order,
        }
    }

    /// Discrete log of n in this component, None when n is not a unit.
    fn dlog(&self, n: u64) -> Option<u64> {
        match self {
            Component::OddPrimePower { modulus, dlog, prime, .. } => {
                let r = n % modulus;
                if r % prime == 0 {
                    None
                } else {
                    Some(dlog[r as usize] as u64)
                }
            }
            Component::TwoSign { modulus } => {
                let r = n % modulus;
                if r % 2 == 0 {
                    return None;
                }
                // exponent of -1: for modulus 4 it is (r-1)/2; for 2^e >= 8,
                // r = (-1)^s 5^k with s = 0 iff r = 1 mod 4
                Some(if r % 4 == 1 { 0 } else { 1 })
            }
            Component::TwoFive { modulus, dlog, .. } => {
                let r = n % modulus;
                if r % 2 == 0 {
                    None
                } else {
                    Some(dlog[r as usize] as u64)
                }
            }
        }
    }
}

fn components_for(q: u64) -> Vec<Component> {
    let mut comps = Vec::new();
    for (p, e) in factorize(q) {
        if p == 2 {
            match e {
                1 => {}
                2 => comps.push(Component::TwoSign { modulus: 4 }),
                _ => {
                    let m = 2u64.pow(e);
                    let order = 2u64.pow(e - 2);
                    let mut dlog = vec![u32::MAX; m as usize];
                    // index +-5^k
                    let mut v = 1u64;
                    for k in 0..order {
                        dlog[v as usize] = k as u32;
                        dlog[(m - v) as usize] = k as u32;
                        v = v * 5 % m;
                    }
                    comps.push(Component::TwoSign { modulus: m });
                    comps.push(Component::TwoFive {
                        modulus: m,
                        order,
                        dlog: std::sync::Arc::new(dlog),
                    });
                }
            }
        } else {
            let m = p.pow(e);
            let order = m / p * (p - 1);
            let g = primitive_root(p, e);
            let mut dlog = vec![u32::MAX; m as usize];
            let mut v = 1u64;
            for k in 0..order {
                dlog[v as usize] = k as u32;
                v = v * g % m;
            }
            comps.push(Component::OddPrimePower {
                modulus: m,
                order,
                prime: p,
                dlog: std::sync::Arc::new(dlog),
            });
        }
    }
    comps
}

/// A Dirichlet character mod q, stored as one exponent per cyclic component.
#[derive(Debug, Clone)]
pub struct DirichletCharacter {
    q: u64,
    components: Vec<Component>,
    exponents: Vec<u64>,
    conductor: u64,
    parity: u8,
    index: usize,
}

impl DirichletCharacter {
    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// Conductor (modulus of the inducing primitive character).
    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.q
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&k| k == 0)
    }

    /// Parity a: chi(-1) = (-1)^a.
    pub fn parity(&self) -> u8 {
        self.parity
    }

    pub fn is_even(&self) -> bool {
        self.parity == 0
    }

    /// Whether all values are real (order <= 2).
    pub fn is_real(&self) -> bool {
        self.components
            .iter()
            .zip(&self.exponents)
            .all(|(c, &k)| k == 0 || 2 * k == c.order())
    }

    /// Order of the character in the dual group.
    pub fn order(&self) -> u64 {
        self.components
            .iter()
            .zip(&self.exponents)
            .map(|(c, &k)| {
                let o = c.order();
                o / gcd(k, o).max(1)
            })
            .fold(1u64, |acc, o| acc / gcd(acc, o) * o)
    }

    /// Index in the deterministic enumeration of characters mod q.
    pub fn index(&self) -> usize {
        self.index
    }

    /// Designator string "q.index" accepted by the CLI.
    pub fn designator(&self) -> String {
        format!("{}.{}", self.q, self.index)
    }

    /// Exact value exponent: chi(n) = e^{2 pi i t} with t in [0,1), or None
    /// when gcd(n, q) > 1.
    pub fn value_exponent(&self, n: u64) -> Option<(u64, u64)> {
        if self.q == 1 {
            return Some((0, 1));
        }
        // accumulate sum k_j * dlog_j(n) / ord_j mod 1 exactly
        let mut num: u128 = 0;
        let mut den: u128 = 1;
        for (c, &k) in self.components.iter().zip(&self.exponents) {
            let d = c.dlog(n)?;
            let o = c.order() as u128;
            let add_num = (k as u128 * d as u128) % o;
            // num/den + add_num/o
            let g = gcd(den as u64, o as u64) as u128;
            let new_den = den / g * o;
            num = num * (o / g) + add_num * (den / g);
            den = new_den;
            num %= den;
        }
        let g = gcd(num as u64, den as u64).max(1);
        Some(((num as u64) / g, (den as u64) / g))
    }

    /// chi(n) rendered to a complex number (exact for the stored root of
    /// unity, rounded once at this boundary).
    pub fn value(&self, n: u64) -> Complex64 {
        match self.value_exponent(n) {
            None => Complex64::new(0.0, 0.0),
            Some((num, den)) => {
                // exact special cases keep real characters exactly real
                match (4 * num).checked_div(den) {
                    _ if num == 0 => Complex64::new(1.0, 0.0),
                    _ if 2 * num == den => Complex64::new(-1.0, 0.0),
                    _ if 4 * num == den => Complex64::new(0.0, 1.0),
                    _ if 4 * num == 3 * den => Complex64::new(0.0, -1.0),
                    _ => {
                        let t = 2.0 * std::f64::consts::PI * (num as f64 / den as f64);
                        Complex64::new(t.cos(), t.sin())
                    }
                }
            }
        }
    }

    pub fn conj(&self) -> DirichletCharacter {
        let exponents = self
            .components
            .iter()
            .zip(&self.exponents)
            .map(|(c, &k)| if k == 0 { 0 } else { c.order() - k })
            .collect();
        let mut out = DirichletCharacter {
            q: self.q,
            components: self.components.clone(),
            exponents,
            conductor: self.conductor,
            parity: self.parity,
            index: 0,
        };
        out.index = enumeration_index(&out);
        out
    }
}

fn component_conductor(c: &Component, k: u64) -> u64 {
    match c {
        Component::OddPrimePower { modulus, order, prime, .. } => {
            if k == 0 {
                return 1;
            }
            let m = order / gcd(k, *order); // order of the component character
            // m = p^a * m' with m' | p-1; conductor is p^{a+1}
            let mut a = 0;
            let mut mm = m;
            while mm % prime == 0 {
                mm /= prime;
                a += 1;
            }
            let _ = modulus;
            prime.pow(a + 1)
        }
        Component::TwoSign { .. } => {
            if k == 0 {
                1
            } else {
                4
            }
        }
        Component::TwoFive { order, .. } => {
            if k == 0 {
                1
            } else {
                let m = order / gcd(k, *order); // a power of two >= 2
                4 * m
            }
        }
    }
}

fn component_parity(c: &Component, k: u64) -> u8 {
    match c {
        // -1 = g^{order/2}
        Component::OddPrimePower { order, .. } => ((k * (order / 2)) % order != 0) as u8,
        Component::TwoSign { .. } => (k % 2) as u8,
        Component::TwoFive { .. } => 0, // -1 maps to the sign component
    }
}

fn enumeration_index(chi: &DirichletCharacter) -> usize {
    let mut idx: u64 = 0;
    for (c, &k) in chi.components.iter().zip(&chi.exponents) {
        idx = idx * c.order() + k;
    }
    idx as usize
}

/// All phi(q) characters mod q in lexicographic exponent order (two-part
/// components first, then odd primes ascending).
pub fn characters_mod(q: u64) -> Result<Vec<DirichletCharacter>> {
    if q == 0 || q > MODULUS_CAP {
        return Err(Error::ModulusTooLarge(q, MODULUS_CAP));
    }
    let components = components_for(q);
    let orders: Vec<u64> = components.iter().map(|c| c.order()).collect();
    let total: u64 = orders.iter().product();
    let mut out = Vec::with_capacity(total as usize);
    for idx in 0..total {
        // mixed-radix digits, most significant first
        let mut rem = idx;
        let mut exponents = vec![0u64; orders.len()];
        for j in (0..orders.len()).rev() {
            exponents[j] = rem % orders[j];
            rem /= orders[j];
        }
        // per-prime conductors multiply; the two 2-adic components (sign
        // and <5>) belong to the same prime, so their conductors combine
        // by max, not by product.
        let mut conductor = 1u64;
        let mut two_part = 1u64;
        for (c, &k) in components.iter().zip(&exponents) {
            let cc = component_conductor(c, k);
            match c {
                Component::OddPrimePower { .. } => conductor *= cc,
                Component::TwoSign { .. } | Component::TwoFive { .. } => {
                    two_part = two_part.max(cc)
                }
            }
        }
        let conductor = conductor * two_part;
        let parity = components
            .iter()
            .zip(&exponents)
            .map(|(c, &k)| component_parity(c, k))
            .sum::<u8>()
            % 2;
        out.push(DirichletCharacter {
            q,
            components: components.clone(),
            exponents,
            conductor,
            parity,
            index: idx as usize,
        });
    }
    Ok(out)
}

/// Looks up a character by its "q.index" designator.
pub fn by_designator(designator: &str) -> Result<DirichletCharacter> {
    let (q, idx) = designator
        .split_once('.')
        .ok_or_else(|| Error::DomainError(format!("bad character designator '{designator}'")))?;
    let q: u64 = q
        .parse()
        .map_err(|_| Error::DomainError(format!("bad modulus in '{designator}'")))?;
    let idx: usize = idx
        .parse()
        .map_err(|_| Error::DomainError(format!("bad index in '{designator}'")))?;
    let all = characters_mod(q)?;
    all.into_iter()
        .nth(idx)
        .ok_or_else(|| Error::DomainError(format!("no character with index {idx} mod {q}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q1_has_single_trivial_character() {
        let cs = characters_mod(1).unwrap();
        assert_eq!(cs.len(), 1);
        let chi = &cs[0];
        assert!(chi.is_principal() && chi.is_primitive() && chi.is_even());
        assert_eq!(chi.value(7), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn q5_census() {
        let cs = characters_mod(5).unwrap();
        assert_eq!(cs.len(), 4);
        assert_eq!(cs.iter().filter(|c| c.is_principal()).count(), 1);
        assert_eq!(cs.iter().filter(|c| c.is_primitive()).count(), 3);
        let real_nonprincipal: Vec<_> = cs
            .iter()
            .filter(|c| c.is_real() && !c.is_principal())
            .collect();
        assert_eq!(real_nonprincipal.len(), 1);
        assert!(real_nonprincipal[0].is_even());
        // the Legendre symbol mod 5 sits at index 2 in this enumeration
        assert_eq!(real_nonprincipal[0].index(), 2);
    }

    #[test]
    fn q8_census() {
        let cs = characters_mod(8).unwrap();
        assert_eq!(cs.len(), 4);
        assert_eq!(cs.iter().filter(|c| c.is_primitive()).count(), 2);
    }

    /// Brute-force oracle: extend multiplicatively from values forced by
    /// the group structure, here checked against explicit Legendre symbols.
    #[test]
    fn legendre_symbol_mod_5() {
        let chi = by_designator("5.2").unwrap();
        let legendre = |n: u64| match n % 5 {
            1 | 4 => 1.0,
            2 | 3 => -1.0,
            _ => 0.0,
        };
        for n in 1..=30 {
            let v = chi.value(n);
            assert!((v.re - legendre(n)).abs() < 1e-15 && v.im == 0.0, "n={n}");
        }
    }

    #[test]
    fn value_at_multiples_of_modulus_is_zero() {
        for q in [3u64, 4, 5, 12, 45] {
            for chi in characters_mod(q).unwrap() {
                assert_eq!(chi.value(q), Complex64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn total_multiplicativity() {
        for q in [7u64, 9, 12, 16, 40] {
            for chi in characters_mod(q).unwrap() {
                for m in 1..=20u64 {
                    for n in 1..=20u64 {
                        let lhs = chi.value(m * n);
                        let rhs = chi.value(m) * chi.value(n);
                        assert!((lhs - rhs).norm() < 1e-12, "q={q} m={m} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn parity_matches_value_at_minus_one() {
        for q in [3u64, 4, 5, 8, 9, 15, 16, 21] {
            for chi in characters_mod(q).unwrap() {
                let v = chi.value(q - 1); // -1 mod q
                let want = if chi.parity() == 0 { 1.0 } else { -1.0 };
                assert!(
                    (v - Complex64::new(want, 0.0)).norm() < 1e-12,
                    "q={q} idx={} v={v}",
                    chi.index()
                );
            }
        }
    }

    #[test]
    fn orthogonality() {
        for q in [5u64, 8, 12, 15] {
            let cs = characters_mod(q).unwrap();
            let phi = euler_phi(q) as f64;
            for a in &cs {
                for b in &cs {
                    let mut s = Complex64::new(0.0, 0.0);
                    for n in 1..=q {
                        s += a.value(n) * b.value(n).conj();
                    }
                    let want = if a.index() == b.index() { phi } else { 0.0 };
                    assert!(
                        (s - Complex64::new(want, 0.0)).norm() < 1e-12,
                        "q={q} {} {}",
                        a.index(),
                        b.index()
                    );
                }
            }
        }
    }

    #[test]
    fn conductor_divides_modulus_and_primitive_iff_equal() {
        for q in [6u64, 9, 12, 16, 18, 45, 100] {
            for chi in characters_mod(q).unwrap() {
                assert_eq!(q % chi.conductor(), 0, "q={q} idx={}", chi.index());
                assert_eq!(chi.is_primitive(), chi.conductor() == q);
            }
        }
    }

    #[test]
    fn induced_character_agrees_with_primitive_on_coprime_arguments() {
        // chi mod 12 induced from a primitive character mod 3 or 4 agrees
        // with it on n coprime to 12.
        for chi in characters_mod(12).unwrap() {
            let f = chi.conductor();
            if f == 12 || f == 1 {
                continue;
            }
            let prims: Vec<_> = characters_mod(f)
                .unwrap()
                .into_iter()
                .filter(|c| c.is_primitive())
                .collect();
            let matching: Vec<_> = prims
                .iter()
                .filter(|c| (1..=48).all(|n| {
                    if gcd(n, 12) != 1 {
                        return true;
                    }
                    (c.value(n) - chi.value(n)).norm() < 1e-12
                }))
                .collect();
            assert_eq!(matching.len(), 1, "conductor {f} idx {}", chi.index());
        }
    }

    #[test]
    fn conjugate_character_values() {
        for chi in characters_mod(7).unwrap() {
            let cj = chi.conj();
            for n in 1..=14 {
                assert!((cj.value(n) - chi.value(n).conj()).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn modulus_cap_enforced() {
        assert!(matches!(
            characters_mod(10_001),
            Err(Error::ModulusTooLarge(_, _))
        ));
    }

    #[test]
    fn character_count_is_phi_q() {
        for q in 1..=60u64 {
            assert_eq!(characters_mod(q).unwrap().len() as u64, euler_phi(q), "q={q}");
        }
    }
}
