//! (S, L, H) triplets and their network products.
//!
//! A coupling entry is an operator plus a coherent c-number offset, so a
//! coherent drive `(1, α, 0)` lives in the same vector as atomic couplings.
//! Scattering matrices are scalar-valued; operator-valued `S` is not supported.
//!
//! Port indices are 0-based. In [`concatenate`] the left argument's ports come
//! first.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::policy::NumericPolicy;
use crate::quantum::{lowering_op, sigma_z, Operator, C64};

/// One entry of the coupling vector: `op + offset·𝟙`.
#[derive(Debug, Clone, PartialEq)]
pub struct Coupling {
    pub op: Operator,
    pub offset: C64,
}

impl Coupling {
    pub fn new(op: Operator, offset: C64) -> Self {
        Self { op, offset }
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(Operator::zeros(dim), C64::new(0.0, 0.0))
    }

    /// A purely coherent channel.
    pub fn coherent(dim: usize, amplitude: C64) -> Self {
        Self::new(Operator::zeros(dim), amplitude)
    }

    pub fn operator(op: Operator) -> Self {
        Self::new(op, C64::new(0.0, 0.0))
    }

    /// The full operator `op + offset·𝟙`.
    pub fn full(&self) -> Operator {
        &self.op + &Operator::identity(self.op.dim()).scale(self.offset)
    }

    fn scale(&self, c: C64) -> Coupling {
        Coupling::new(self.op.scale(c), self.offset * c)
    }

    fn add(&self, other: &Coupling) -> Coupling {
        Coupling::new(&self.op + &other.op, self.offset + other.offset)
    }
}

/// G = (S, L, H).
#[derive(Debug, Clone, PartialEq)]
pub struct SlhTriplet {
    s: DMatrix<C64>,
    l: Vec<Coupling>,
    h: Operator,
}

fn hermitian_part_of_imag(x: &Operator) -> Operator {
    // (1/2i)(X − X†)
    (x - &x.dagger()).scale(C64::new(0.0, -0.5))
}

impl SlhTriplet {
    pub fn new(s: DMatrix<C64>, l: Vec<Coupling>, h: Operator) -> Result<Self> {
        if !s.is_square() {
            return Err(Error::NotSquare {
                rows: s.nrows(),
                cols: s.ncols(),
            });
        }
        if s.nrows() != l.len() {
            return Err(Error::PortMismatch {
                left: s.nrows(),
                right: l.len(),
            });
        }
        let dim = h.dim();
        for c in &l {
            c.op.check_dim(dim)?;
        }
        let policy = NumericPolicy::global();
        let dev = h.hermitian_deviation();
        if dev > policy.hermitian_tol {
            return Err(Error::NonHermitian {
                what: "triplet Hamiltonian",
                deviation: dev,
            });
        }
        let triplet = Self { s, l, h };
        let udev = triplet.unitarity_deviation();
        if udev > policy.hermitian_tol {
            return Err(Error::InvalidParameter {
                name: "S",
                reason: format!("scattering matrix not unitary (deviation {udev:.3e})"),
            });
        }
        Ok(triplet)
    }

    /// Builds without validation; used for products of valid triplets.
    fn raw(s: DMatrix<C64>, l: Vec<Coupling>, h: Operator) -> Self {
        Self { s, l, h }
    }

    /// The identity element (1, 0, 0) on `n` ports.
    pub fn identity(n_ports: usize, dim: usize) -> Self {
        Self::raw(
            DMatrix::identity(n_ports, n_ports),
            vec![Coupling::zero(dim); n_ports],
            Operator::zeros(dim),
        )
    }

    /// Phase shift (e^{iφ}, 0, 0).
    pub fn phase(phi: f64, dim: usize) -> Self {
        Self::raw(
            DMatrix::from_element(1, 1, C64::from_polar(1.0, phi)),
            vec![Coupling::zero(dim)],
            Operator::zeros(dim),
        )
    }

    /// Coherent drive (1, α, 0) in its own rotating frame.
    pub fn coherent_drive(alpha: C64, dim: usize) -> Self {
        Self::raw(
            DMatrix::identity(1, 1),
            vec![Coupling::coherent(dim, alpha)],
            Operator::zeros(dim),
        )
    }

    /// Two-level atom on an open line, both directions coupled at rate Γ/2,
    /// with `H_TLS = (Δ/2)σ_z` in the drive's rotating frame.
    pub fn two_level_atom(gamma: f64, delta: f64) -> Self {
        let sm = lowering_op(2, 0, 1).expect("valid qubit indices");
        let l = Coupling::operator(sm.scale(C64::new((gamma / 2.0).sqrt(), 0.0)));
        Self::raw(
            DMatrix::identity(2, 2),
            vec![l.clone(), l],
            sigma_z().scale(C64::new(delta / 2.0, 0.0)),
        )
    }

    /// `[(G_φ ⊞ I) ◁ G_TLS]_{0→1}`: the atom in front of a mirror.
    pub fn atom_in_front_of_mirror(gamma: f64, phi: f64, delta: f64) -> Result<Self> {
        let atom = Self::two_level_atom(gamma, delta);
        let stacked = concatenate(&Self::phase(phi, 2), &Self::identity(1, 2))?;
        feedback(&series(&stacked, &atom)?, 0, 1)
    }

    /// Mirror triplet fed by a coherent drive `α`.
    pub fn driven_mirror(gamma: f64, phi: f64, delta: f64, alpha: C64) -> Result<Self> {
        series(
            &Self::atom_in_front_of_mirror(gamma, phi, delta)?,
            &Self::coherent_drive(alpha, 2),
        )
    }

    pub fn n_ports(&self) -> usize {
        self.l.len()
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    pub fn scattering(&self) -> &DMatrix<C64> {
        &self.s
    }

    pub fn couplings(&self) -> &[Coupling] {
        &self.l
    }

    pub fn hamiltonian(&self) -> &Operator {
        &self.h
    }

    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.s.nrows();
        (&self.s * self.s.adjoint() - DMatrix::<C64>::identity(n, n))
            .iter()
            .fold(0.0, |m, z| m.max(z.norm()))
    }

    /// S·L as a coupling vector.
    fn scatter(&self, l: &[Coupling]) -> Vec<Coupling> {
        let dim = self.dim();
        (0..self.n_ports())
            .map(|i| {
                l.iter()
                    .enumerate()
                    .fold(Coupling::zero(dim), |acc, (j, c)| acc.add(&c.scale(self.s[(i, j)])))
            })
            .collect()
    }
}

/// L_a† M L_b summed over ports, with full operators.
fn bilinear(la: &[Coupling], m: &DMatrix<C64>, lb: &[Coupling]) -> Operator {
    let dim = la[0].op.dim();
    let mut acc = Operator::zeros(dim);
    for (i, a) in la.iter().enumerate() {
        let ad = a.full().dagger();
        for (j, b) in lb.iter().enumerate() {
            let mij = m[(i, j)];
            if mij.norm() == 0.0 {
                continue;
            }
            acc = &acc + &(&ad * &b.full()).scale(mij);
        }
    }
    acc
}

/// Series product `G2 ◁ G1`: the output of `G1` feeds `G2`.
pub fn series(g2: &SlhTriplet, g1: &SlhTriplet) -> Result<SlhTriplet> {
    if g2.n_ports() != g1.n_ports() {
        return Err(Error::PortMismatch {
            left: g2.n_ports(),
            right: g1.n_ports(),
        });
    }
    g1.h.check_dim(g2.dim())?;
    let s = &g2.s * &g1.s;
    let l: Vec<Coupling> = g2
        .scatter(&g1.l)
        .iter()
        .zip(&g2.l)
        .map(|(a, b)| a.add(b))
        .collect();
    // H1 + H2 + (1/2i)(L2† S2 L1 − L1† S2† L2)
    let cross = bilinear(&g2.l, &g2.s, &g1.l);
    let h = &(&g1.h + &g2.h) + &hermitian_part_of_imag(&cross);
    Ok(SlhTriplet::raw(s, l, h))
}

/// Concatenation `G2 ⊞ G1` with `G2`'s ports first.
pub fn concatenate(g2: &SlhTriplet, g1: &SlhTriplet) -> Result<SlhTriplet> {
    g1.h.check_dim(g2.dim())?;
    let (n2, n1) = (g2.n_ports(), g1.n_ports());
    let mut s = DMatrix::zeros(n2 + n1, n2 + n1);
    s.view_mut((0, 0), (n2, n2)).copy_from(&g2.s);
    s.view_mut((n2, n2), (n1, n1)).copy_from(&g1.s);
    let l = g2.l.iter().chain(&g1.l).cloned().collect();
    Ok(SlhTriplet::raw(s, l, &g2.h + &g1.h))
}

/// Feeds output port `out_port` back into input port `in_port`.
pub fn feedback(g: &SlhTriplet, out_port: usize, in_port: usize) -> Result<SlhTriplet> {
    let n = g.n_ports();
    for index in [out_port, in_port] {
        if index >= n {
            return Err(Error::PortIndex { index, ports: n });
        }
    }
    if n < 2 {
        return Err(Error::PortIndex {
            index: 1,
            ports: n,
        });
    }
    let (k, l) = (out_port, in_port);
    let skl = g.s[(k, l)];
    let denom = C64::new(1.0, 0.0) - skl;
    if denom.norm() <= 1e-12 {
        return Err(Error::SingularFeedback {
            out_port,
            in_port,
            s_re: skl.re,
            s_im: skl.im,
        });
    }
    let inv = denom.inv();
    let rows: Vec<usize> = (0..n).filter(|&i| i != k).collect();
    let cols: Vec<usize> = (0..n).filter(|&j| j != l).collect();

    let s = DMatrix::from_fn(n - 1, n - 1, |a, b| {
        let (i, j) = (rows[a], cols[b]);
        g.s[(i, j)] + g.s[(i, l)] * inv * g.s[(k, j)]
    });
    let lk = &g.l[k];
    let couplings = rows
        .iter()
        .map(|&i| g.l[i].add(&lk.scale(g.s[(i, l)] * inv)))
        .collect();

    // H + (1/2i)((Σⱼ Lⱼ† S_{j,l}) (1 − S_{k,l})⁻¹ L_k − h.c.)
    let dim = g.dim();
    let mut weighted = Operator::zeros(dim);
    for (j, c) in g.l.iter().enumerate() {
        weighted = &weighted + &c.full().dagger().scale(g.s[(j, l)]);
    }
    let cross = (&weighted * &lk.full()).scale(inv);
    let h = &g.h + &hermitian_part_of_imag(&cross);
    Ok(SlhTriplet::raw(s, couplings, h))
}

/// Hamiltonian and operator-only collapse list of the triplet's master
/// equation.
///
/// Each coherent offset is moved out of its dissipator:
/// `𝒟[A + α] = 𝒟[A] − i[(1/2i)(α A† − ᾱ A), ·]`.
pub fn to_master_equation(g: &SlhTriplet) -> (Operator, Vec<Operator>) {
    let mut h = g.h.clone();
    let mut collapse = Vec::new();
    for c in &g.l {
        if c.offset.norm() > 0.0 {
            let x = c.op.dagger().scale(c.offset);
            h = &h + &hermitian_part_of_imag(&x);
        }
        if c.op.matrix().iter().any(|z| z.norm() > 0.0) {
            collapse.push(c.op.clone());
        }
    }
    (h, collapse)
}

/// Closed-form mirror triplet: (e^{iφ}, e^{iφ/2}√Γ_eff σ₋, (Δ/2)σ_z + (Γ/2) sinφ σ₊σ₋).
pub fn mirror_closed_form(gamma: f64, phi: f64, delta: f64) -> SlhTriplet {
    let gamma_eff = gamma * (1.0 + phi.cos());
    let sm = lowering_op(2, 0, 1).expect("valid qubit indices");
    let l = sm.scale(C64::from_polar(gamma_eff.max(0.0).sqrt(), phi / 2.0));
    let n = &sm.dagger() * &sm;
    let h = &sigma_z().scale(C64::new(delta / 2.0, 0.0)) + &n.scale(C64::new(gamma / 2.0 * phi.sin(), 0.0));
    SlhTriplet::raw(
        DMatrix::from_element(1, 1, C64::from_polar(1.0, phi)),
        vec![Coupling::operator(l)],
        h,
    )
}

/// 50:50 scattering matrix used in tests and examples.
pub fn balanced_beam_splitter() -> DMatrix<C64> {
    let t = C64::new(FRAC_1_SQRT_2, 0.0);
    let r = C64::new(0.0, FRAC_1_SQRT_2);
    DMatrix::from_row_slice(2, 2, &[t, r, r, t])
}
