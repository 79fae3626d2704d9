//! Extended sequences `F_[x=d]` and the radix-4 embedding `Phi`.

use num_complex::Complex64;

use super::correlation::star;
use super::cxseq::{psi, CxSeq};
use crate::algebra::Gbf;
use crate::error::{Error, Result};

/// Where a `k`-variable sequence is placed inside length `2^m`: the embedded
/// variables go to `embed` (strictly increasing) and the remaining variables
/// are fixed to the bits of `assignment`, in increasing index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionSpec {
    m: usize,
    embed: Vec<usize>,
    complement: Vec<usize>,
    assignment: Vec<u8>,
}

fn check_increasing(indices: &[usize], m: usize) -> Result<()> {
    if indices.windows(2).any(|w| w[0] >= w[1]) || indices.last().is_some_and(|&i| i >= m) {
        return Err(Error::InvalidIndices(format!(
            "indices {indices:?} must be strictly increasing and below {m}"
        )));
    }
    Ok(())
}

impl ExtensionSpec {
    pub fn new(m: usize, embed: Vec<usize>, assignment: Vec<u8>) -> Result<Self> {
        check_increasing(&embed, m)?;
        if embed.len() >= m {
            return Err(Error::InvalidIndices(format!(
                "extension needs m > k, got m={m}, k={}",
                embed.len()
            )));
        }
        let complement: Vec<usize> = (0..m).filter(|i| !embed.contains(i)).collect();
        if assignment.len() != complement.len() {
            return Err(Error::LengthMismatch { expected: complement.len(), actual: assignment.len() });
        }
        if assignment.iter().any(|&d| d > 1) {
            return Err(Error::InvalidIndices("assignment must be binary".into()));
        }
        Ok(Self { m, embed, complement, assignment })
    }

    /// Spec from the fixed variables and their values, as in `x = (x_0, x_2)`,
    /// `d = (1, 0)`.
    pub fn from_fixed(m: usize, fixed: &[usize], assignment: Vec<u8>) -> Result<Self> {
        check_increasing(fixed, m)?;
        let embed = (0..m).filter(|i| !fixed.contains(i)).collect();
        Self::new(m, embed, assignment)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.embed.len()
    }

    pub fn embed(&self) -> &[usize] {
        &self.embed
    }

    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    pub fn assignment(&self) -> &[u8] {
        &self.assignment
    }

    /// The fixed part `sum d_a 2^{j_a}` of every supported position.
    pub fn offset(&self) -> usize {
        self.complement
            .iter()
            .zip(&self.assignment)
            .map(|(&j, &d)| (d as usize) << j)
            .sum()
    }

    /// Position of the entry indexed by `u = (u_0, ..., u_{k-1})`.
    pub fn position(&self, u: usize) -> usize {
        let spread: usize = self
            .embed
            .iter()
            .enumerate()
            .filter(|(a, _)| u & (1 << a) != 0)
            .map(|(_, &i)| 1 << i)
            .sum();
        spread + self.offset()
    }

    /// Every assignment of the complementary variables for this embedding.
    pub fn all_assignments(m: usize, embed: &[usize]) -> Result<Vec<ExtensionSpec>> {
        let n_free = m.checked_sub(embed.len()).ok_or_else(|| {
            Error::InvalidIndices(format!("{} embedded variables exceed m={m}", embed.len()))
        })?;
        (0..1usize << n_free)
            .map(|d| {
                let bits = (0..n_free).map(|a| ((d >> a) & 1) as u8).collect();
                ExtensionSpec::new(m, embed.to_vec(), bits)
            })
            .collect()
    }
}

/// `F_[x=d]`: `F` (length `2^k`, full support) spread into length `2^m`.
pub fn extend(f: &CxSeq, spec: &ExtensionSpec) -> Result<CxSeq> {
    let k = spec.k();
    if f.len() != 1 << k {
        return Err(Error::LengthMismatch { expected: 1 << k, actual: f.len() });
    }
    if !f.is_full_support() {
        return Err(Error::NotPolyphase);
    }
    let n = 1 << spec.m();
    let mut values = vec![Complex64::new(0.0, 0.0); n];
    let mut support = vec![false; n];
    for (u, &v) in f.values().iter().enumerate() {
        let p = spec.position(u);
        values[p] = v;
        support[p] = true;
    }
    CxSeq::with_support(values, support)
}

/// `f_[x]`: relabel `x_a -> x_{embed[a]}` and regard the result as a function
/// of `m` variables.
pub fn extend_gbf(f: &Gbf, embed: &[usize], m: usize) -> Result<Gbf> {
    if embed.len() != f.m() {
        return Err(Error::LengthMismatch { expected: f.m(), actual: embed.len() });
    }
    check_increasing(embed, m)?;
    f.substitute(embed, m)
}

/// Length of `Phi(f)` for a `k`-variable `f`: `(4^k + 2) / 3`.
pub fn phi_len(k: usize) -> usize {
    ((1usize << (2 * k)) + 2) / 3
}

/// `Phi(f)`: `xi^{f(u)}` at position `sum u_a 4^a`, zero elsewhere.
pub fn phi(f: &Gbf) -> CxSeq {
    let k = f.m();
    let q = f.modulus();
    let n = phi_len(k);
    let table = f.truth_table();
    let mut values = vec![Complex64::new(0.0, 0.0); n];
    let mut support = vec![false; n];
    for (u, &t) in table.values().iter().enumerate() {
        let p = spread_to_even_bits(u);
        values[p] = q.phase(t);
        support[p] = true;
    }
    CxSeq::with_support(values, support).expect("phases are unimodular")
}

/// Moves bit `a` of `u` to bit `2a`.
fn spread_to_even_bits(u: usize) -> usize {
    let mut out = 0;
    let mut a = 0;
    let mut v = u;
    while v != 0 {
        if v & 1 != 0 {
            out |= 1 << (2 * a);
        }
        v >>= 1;
        a += 1;
    }
    out
}

fn check_pair(a: &Gbf, b: &Gbf) -> Result<()> {
    if a.q() != b.q() {
        return Err(Error::ModulusMismatch { left: a.q(), right: b.q() });
    }
    if a.m() != b.m() {
        return Err(Error::ShapeMismatch { left: a.m(), right: b.m() });
    }
    Ok(())
}

/// `Phi(a) * Phi(b)`.
pub fn phi_star(a: &Gbf, b: &Gbf) -> Result<f64> {
    check_pair(a, b)?;
    star(&phi(a), &phi(b))
}

/// `Psi(a) * Psi(b)`.
pub fn psi_star(a: &Gbf, b: &Gbf) -> Result<f64> {
    check_pair(a, b)?;
    star(&psi(a), &psi(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Modulus;

    fn z(q: u32) -> Modulus {
        Modulus::new(q).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn extension_example() {
        // F = (+ + - +), x = (x0, x2), d = (1 0).
        let f = Gbf::from_terms(z(2), 2, &[(3, 1), (2, 1)]).unwrap();
        let spec = ExtensionSpec::from_fixed(4, &[0, 2], vec![1, 0]).unwrap();
        let e = extend(&psi(&f), &spec).unwrap();
        assert_eq!(CxSeq::parse_text(&e.to_text(z(2)), z(2)).unwrap(), e);
        assert_eq!(e.to_text(z(2)), ".,0,.,0,.,.,.,.,.,1,.,0,.,.,.,.");

        let g = extend_gbf(&f, &[1, 3], 4).unwrap();
        assert_eq!(g, Gbf::from_terms(z(2), 4, &[(0b1010, 1), (0b1000, 1)]).unwrap());
        assert_eq!(
            CxSeq::from_phases(z(2), g.truth_table().values()).to_text(z(2)),
            "0,0,0,0,0,0,0,0,1,1,0,0,1,1,0,0"
        );
        // The extended sequence agrees with Psi(f_[x]) on its support.
        let p = psi(&g);
        for i in e.support_positions() {
            assert_eq!(e.values()[i], p.values()[i]);
        }
    }

    #[test]
    fn extension_small() {
        let q = z(8);
        let f = CxSeq::from_phases(q, &[0, 1]);
        let spec = ExtensionSpec::new(2, vec![0], vec![0]).unwrap();
        let e = extend(&f, &spec).unwrap();
        assert_eq!(e.values(), &[c(1., 0.), q.phase(1), c(0., 0.), c(0., 0.)]);
    }

    #[test]
    fn extension_spec_validation() {
        assert!(ExtensionSpec::new(3, vec![1, 0], vec![0]).is_err());
        assert!(ExtensionSpec::new(3, vec![0, 3], vec![0]).is_err());
        assert!(ExtensionSpec::new(2, vec![0, 1], vec![]).is_err());
        assert!(ExtensionSpec::new(3, vec![0], vec![0]).is_err());
        assert!(ExtensionSpec::new(3, vec![0], vec![0, 2]).is_err());
        let f = Gbf::zero(z(2), 2);
        assert!(extend_gbf(&f, &[2, 1], 4).is_err());
        assert!(extend_gbf(&f, &[1], 4).is_err());
    }

    #[test]
    fn extend_gbf_identity_and_remap() {
        let f = Gbf::from_terms(z(4), 2, &[(3, 2), (1, 1)]).unwrap();
        assert_eq!(extend_gbf(&f, &[0, 1], 2).unwrap(), f);
        let f = Gbf::from_terms(z(4), 2, &[(3, 2)]).unwrap();
        let g = extend_gbf(&f, &[0, 2], 3).unwrap();
        assert_eq!(g, Gbf::from_terms(z(4), 3, &[(0b101, 2)]).unwrap());
    }

    #[test]
    fn zero_padding_keeps_autocorrelation() {
        use crate::sequence::correlation::autocorrelation;
        let q = z(4);
        let f = CxSeq::from_phases(q, &[0, 3, 1, 2]);
        let spec = ExtensionSpec::new(3, vec![0, 1], vec![0]).unwrap();
        let e = extend(&f, &spec).unwrap();
        let (rf, re) = (autocorrelation(&f), autocorrelation(&e));
        for l in 0..8 {
            let want = rf.get(l).copied().unwrap_or_default();
            assert!((re[l] - want).norm() < 1e-12);
        }
    }

    #[test]
    fn phi_examples() {
        let f = Gbf::from_terms(z(4), 2, &[(3, 2), (1, 3), (2, 1)]).unwrap();
        let p = phi(&f);
        assert_eq!(
            p.values(),
            &[c(1., 0.), c(0., -1.), c(0., 0.), c(0., 0.), c(0., 1.), c(-1., 0.)]
        );
        assert_eq!(p.support(), &[true, true, false, false, true, true]);

        let f = Gbf::constant(z(8), 0, 3);
        assert_eq!(phi(&f).values(), &[z(8).phase(3)]);

        let f = Gbf::from_terms(z(4), 1, &[(1, 3), (0, 1)]).unwrap();
        assert_eq!(phi(&f), psi(&f));
        assert_eq!(phi_len(3), 22);
    }

    #[test]
    fn phi_matches_truncated_extension() {
        // Phi(f) is Psi(f) extended over x = (x1, x3, ..., x_{2k-3}) with d = 0,
        // trailing zeros removed.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for k in 2..=4usize {
            for q in [2, 4, 8] {
                let anf = (0..1 << k).map(|_| rng.gen_range(0..q)).collect();
                let f = Gbf::new(z(q), k, anf).unwrap();
                let m = 2 * k - 1;
                let embed: Vec<usize> = (0..k).map(|a| 2 * a).collect();
                let spec = ExtensionSpec::new(m, embed, vec![0; k - 1]).unwrap();
                let e = extend(&psi(&f), &spec).unwrap();
                let p = phi(&f);
                assert_eq!(&e.values()[..p.len()], p.values());
                assert!(e.support()[p.len()..].iter().all(|&s| !s));
            }
        }
    }

    #[test]
    fn phi_star_examples() {
        let q = z(4);
        let zero = Gbf::zero(q, 0);
        assert_eq!(phi_star(&zero, &zero).unwrap(), 2.0);

        let a = Gbf::from_terms(q, 2, &[(3, 2)]).unwrap();
        let b = Gbf::from_terms(q, 2, &[(3, 2), (1, 3), (2, 1)]).unwrap();
        assert!((phi_star(&a, &b).unwrap() - 12.0).abs() < 1e-9);

        let b = Gbf::from_terms(q, 2, &[(3, 2), (1, 3)]).unwrap();
        let want = 8.0 + 4.0 * std::f64::consts::SQRT_2;
        assert!((phi_star(&a, &b).unwrap() - want).abs() < 1e-9);

        assert!(phi_star(&a, &Gbf::zero(q, 1)).is_err());
        assert!(phi_star(&a, &Gbf::zero(z(8), 2)).is_err());
    }
}
