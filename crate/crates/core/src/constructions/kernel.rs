use serde::{Deserialize, Serialize};

use crate::algebra::{Gbf, GbfJson, Modulus};
use crate::error::{Error, Result};
use crate::sequence::{phi_star, psi_star};

/// Tolerance used when comparing star values against `2^{k+1}`.
pub const STAR_TOL: f64 = 1e-9;

/// A pair `(a, b)` of functions on `k` variables with its cached merits.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelPair {
    a: Gbf,
    b: Gbf,
    merit: f64,
    star_psi: f64,
}

impl KernelPair {
    pub fn new(a: Gbf, b: Gbf) -> Result<Self> {
        let merit = phi_star(&a, &b)?;
        let star_psi = psi_star(&a, &b)?;
        Ok(Self { a, b, merit, star_psi })
    }

    /// `k = 0`, `a = b = 0`.
    pub fn trivial(q: Modulus) -> Self {
        Self::new(Gbf::zero(q, 0), Gbf::zero(q, 0)).expect("constant pair")
    }

    /// `a = (q/2) x0x1`, `b = (q/2) x0x1 + (alpha + q/2) x0 + beta x1`.
    pub fn alpha_beta(q: Modulus, alpha: u32, beta: u32) -> Self {
        let h = q.half();
        let a = Gbf::from_terms(q, 2, &[(0b11, h)]).expect("valid terms");
        let b = Gbf::from_terms(q, 2, &[(0b11, h), (0b01, q.add(alpha % q.q(), h)), (0b10, beta % q.q())])
            .expect("valid terms");
        Self::new(a, b).expect("same shape")
    }

    /// `a = gamma x0x1`, `b = delta x0x1 + (alpha + q/2) x0 + beta x1`.
    pub fn gamma_delta(q: Modulus, gamma: u32, delta: u32, alpha: u32, beta: u32) -> Self {
        let h = q.half();
        let a = Gbf::from_terms(q, 2, &[(0b11, gamma % q.q())]).expect("valid terms");
        let b = Gbf::from_terms(
            q,
            2,
            &[(0b11, delta % q.q()), (0b01, q.add(alpha % q.q(), h)), (0b10, beta % q.q())],
        )
        .expect("valid terms");
        Self::new(a, b).expect("same shape")
    }

    /// The quaternary length-8 Golay kernel
    /// `a = 2x0x1 + 2x1x2`, `b = 2x0x2 + 2x1x2 + x0 + x1`, scaled by `q/4`.
    pub fn holzmann_kharaghani(q: Modulus) -> Result<Self> {
        if q.q() % 4 != 0 {
            return Err(Error::InvalidModulus(q.q()));
        }
        let s = q.q() / 4;
        let a = Gbf::from_terms(q, 3, &[(0b011, 2 * s), (0b110, 2 * s)])?;
        let b = Gbf::from_terms(q, 3, &[(0b101, 2 * s), (0b110, 2 * s), (0b001, s), (0b010, s)])?;
        Self::new(a, b)
    }

    pub fn a(&self) -> &Gbf {
        &self.a
    }

    pub fn b(&self) -> &Gbf {
        &self.b
    }

    pub fn k(&self) -> usize {
        self.a.m()
    }

    pub fn modulus(&self) -> Modulus {
        self.a.modulus()
    }

    pub fn q(&self) -> u32 {
        self.a.q()
    }

    /// `Phi(a) * Phi(b)`.
    pub fn merit(&self) -> f64 {
        self.merit
    }

    /// `Psi(a) * Psi(b)`.
    pub fn star_psi(&self) -> f64 {
        self.star_psi
    }

    /// `merit / 2^k`, the PMEPR bound of every coset built from this pair.
    pub fn upper_bound(&self) -> f64 {
        self.merit / (1u64 << self.k()) as f64
    }

    pub fn is_complementary(&self) -> bool {
        (self.star_psi - (1u64 << (self.k() + 1)) as f64).abs() <= STAR_TOL
    }

    pub fn to_json(&self) -> KernelJson {
        KernelJson { a: self.a.to_json(), b: self.b.to_json() }
    }

    pub fn from_json(j: &KernelJson) -> Result<Self> {
        Self::new(Gbf::from_json(&j.a)?, Gbf::from_json(&j.b)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelJson {
    pub a: GbfJson,
    pub b: GbfJson,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NamedKernel {
    pub name: String,
    pub kernel: KernelPair,
}

/// Largest merit admitted into the cubic `gamma/delta` entries.
pub const GAMMA_DELTA_MAX_MERIT: f64 = 16.0;

/// Named kernels over `Z_q`.
///
/// Contains the trivial kernel, every `alpha/beta` generator with
/// `alpha, beta in Z_q`, the quaternary length-8 kernel when `4 | q`, and the
/// `gamma/delta` pairs with `gamma != delta` and merit at most 16.
pub fn kernel_catalog(q: Modulus) -> Vec<NamedKernel> {
    let qq = q.q();
    let mut out = vec![NamedKernel { name: "trivial".into(), kernel: KernelPair::trivial(q) }];
    for alpha in 0..qq {
        for beta in 0..qq {
            out.push(NamedKernel {
                name: format!("alpha-beta({alpha},{beta})"),
                kernel: KernelPair::alpha_beta(q, alpha, beta),
            });
        }
    }
    if let Ok(k) = KernelPair::holzmann_kharaghani(q) {
        out.push(NamedKernel { name: "holzmann-kharaghani".into(), kernel: k });
    }
    for gamma in 0..qq {
        for delta in 0..qq {
            if gamma == delta {
                continue;
            }
            for alpha in 0..qq {
                for beta in 0..qq {
                    let k = KernelPair::gamma_delta(q, gamma, delta, alpha, beta);
                    if k.merit() <= GAMMA_DELTA_MAX_MERIT + STAR_TOL {
                        out.push(NamedKernel {
                            name: format!("gamma-delta({gamma},{delta},{alpha},{beta})"),
                            kernel: k,
                        });
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::{psi, CxSeq};

    fn z(q: u32) -> Modulus {
        Modulus::new(q).unwrap()
    }

    #[test]
    fn trivial_kernel() {
        let k = KernelPair::trivial(z(4));
        assert_eq!(k.k(), 0);
        assert_eq!(k.merit(), 2.0);
        assert_eq!(k.upper_bound(), 2.0);
        assert!(k.is_complementary());
    }

    #[test]
    fn holzmann_kernel_matches_printed_sequences() {
        let q = z(4);
        let k = KernelPair::holzmann_kharaghani(q).unwrap();
        let a = CxSeq::parse_text("0,0,0,2,0,0,2,0", q).unwrap();
        // (+ j j - + i i -) with i = -j.
        let b = CxSeq::parse_text("0,1,1,2,0,3,3,2", q).unwrap();
        assert_eq!(psi(k.a()), a);
        assert_eq!(psi(k.b()), b);
        assert!((k.star_psi() - 16.0).abs() < 1e-9);
        assert!(k.is_complementary());
        assert!((k.upper_bound() - 5.0).abs() < 1e-9);
        assert!(KernelPair::holzmann_kharaghani(z(6)).is_err());
        let k16 = KernelPair::holzmann_kharaghani(z(16)).unwrap();
        assert!((k16.merit() - k.merit()).abs() < 1e-9);
    }

    #[test]
    fn alpha_beta_merit_formula() {
        for qq in [4u32, 8] {
            let q = z(qq);
            for alpha in 0..qq {
                for beta in 0..qq {
                    let k = KernelPair::alpha_beta(q, alpha, beta);
                    let d = |t: u32| (num_complex::Complex64::new(1.0, 0.0) - q.phase(t)).norm();
                    let formula = 2.0 * (4.0 + d(q.sub(beta, alpha)) + d(q.add(beta, alpha)));
                    assert!((k.merit() - formula).abs() < 1e-9);
                    assert!(k.merit() <= 16.0 + 1e-9);
                }
            }
        }
    }

    #[test]
    fn catalog_contents() {
        let cat = kernel_catalog(z(4));
        assert_eq!(cat[0].name, "trivial");
        assert_eq!(cat.iter().filter(|n| n.name.starts_with("alpha-beta")).count(), 16);
        assert!(cat.iter().any(|n| n.name == "holzmann-kharaghani"));
        let gd: Vec<_> = cat.iter().filter(|n| n.name.starts_with("gamma-delta")).collect();
        assert!(!gd.is_empty());
        for n in &gd {
            assert!(n.kernel.merit() <= 16.0 + 1e-9);
        }
        assert!(!kernel_catalog(z(2)).iter().any(|n| n.name == "holzmann-kharaghani"));
    }

    #[test]
    fn json_round_trip() {
        let k = KernelPair::holzmann_kharaghani(z(4)).unwrap();
        let s = serde_json::to_string(&k.to_json()).unwrap();
        let back: KernelJson = serde_json::from_str(&s).unwrap();
        assert_eq!(KernelPair::from_json(&back).unwrap(), k);
    }
}
