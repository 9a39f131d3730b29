//! Koetter–Médard construction of rate `min|C|` linear codes for linear
//! targets `f(x) = sum_tau a_tau x_tau` over `F_q`.
//!
//! Over `F_{q^n}` the source matrices `A_tau` (`c x |E|`), the adjacency
//! matrix `F` (`|E| x |E|`) and the receiver matrix `B` (`c x |E|`) are filled
//! with seeded random coefficients `beta`, `gamma`, `delta`. When every
//! `M_tau = A_tau (I - F)^-1 B^t` is invertible, the sources use
//! `a_tau M_tau^-1 A_tau` and the receiver output `z B^t` telescopes to
//! `sum_tau a_tau alpha_tau`. The `F_{q^n}` code is then written over `F_q`
//! by replacing each coefficient with its multiplication matrix.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{verify_with_fallback, ConstructError, Construction, EXHAUSTIVE_LIMIT};
use crate::algebra::{Algebra, Elem, Matrix};
use crate::codes::{Decoder, Encoder, NetworkCode, ValueMap};
use crate::functions::TargetFunction;
use crate::network::{Cut, Network, DEFAULT_CUT_BUDGET};

/// Coefficient draws tried at each extension degree before the degree grows.
pub const KM_DRAWS_PER_DEGREE: u64 = 64;
/// Largest extension field tried.
pub const KM_MAX_FIELD_SIZE: u64 = 1 << 16;

/// Result of [`km_construct`].
#[derive(Clone, Debug)]
pub struct KmConstruction {
    pub construction: Construction,
    /// Extension degree `n`; the code is `(n c, n)` over the base field.
    pub degree: u32,
    /// `min |C|` over all cuts, which is also the rate.
    pub c: u64,
    pub seed: u64,
    /// Coefficient draws made in total, over all degrees.
    pub attempts: u64,
    pub extension: Algebra,
    /// `det M_tau` in the extension field, one per source, all nonzero.
    pub determinants: Vec<Elem>,
    /// First cut with `c` edges in cut-enumeration order, if the network is
    /// small enough to enumerate.
    pub minimizing_cut: Option<Cut>,
}

impl KmConstruction {
    pub fn rate(&self) -> Ratio<u64> {
        self.construction.code.rate()
    }
}

/// One draw of `beta`, `gamma`, `delta` with the resulting matrices.
struct Draw {
    a: Vec<Matrix>,
    f: Matrix,
    b: Matrix,
    m: Vec<Matrix>,
}

fn draw(net: &Network, ext: &Algebra, c: usize, rng: &mut ChaCha8Rng) -> Result<Draw, ConstructError> {
    let edges = net.edges();
    let m = edges.len();
    let size = ext.size();
    let mut a = Vec::with_capacity(net.num_sources());
    for &src in net.sources() {
        let mut at = Matrix::zeros(c, m);
        for e in net.out_edges(src) {
            for i in 0..c {
                at.set(i, e, rng.gen_range(0..size));
            }
        }
        a.push(at);
    }
    let mut f = Matrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            if edges[i].head == edges[j].tail {
                f.set(i, j, rng.gen_range(0..size));
            }
        }
    }
    let mut b = Matrix::zeros(c, m);
    for e in net.in_edges(net.receiver()) {
        for j in 0..c {
            b.set(j, e, rng.gen_range(0..size));
        }
    }
    let inv_i_minus_f = Matrix::identity(ext, m)
        .sub(ext, &f)?
        .inverse(ext)?
        .expect("I - F is unipotent on an acyclic network");
    let right = inv_i_minus_f.mul(ext, &b.transpose())?;
    let m_tau = a.iter().map(|at| at.mul(ext, &right)).collect::<Result<Vec<_>, _>>()?;
    Ok(Draw { a, f, b, m: m_tau })
}

/// Writes elements of `F_{q^n}` as vectors over `F_q`.
struct Coordinates<'a> {
    ext: &'a Algebra,
    degree: usize,
}

impl Coordinates<'_> {
    fn coeffs(&self, x: Elem) -> Vec<Elem> {
        // A degree-1 "extension" is the base itself, which may be an
        // extension field with its own coefficient encoding.
        if self.degree == 1 {
            vec![x]
        } else {
            self.ext.coefficients(x)
        }
    }

    fn basis(&self, i: usize) -> Elem {
        if self.degree == 1 {
            self.ext.one()
        } else {
            let mut unit = vec![0; self.degree];
            unit[i] = 1;
            self.ext.from_coefficients(&unit)
        }
    }

    /// Matrix `M` with `coeffs(v) M = coeffs(v * gamma)`: row `i` holds the
    /// coordinates of `x^i gamma`.
    fn multiplication(&self, gamma: Elem) -> Matrix {
        let n = self.degree;
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for (j, v) in self.coeffs(self.ext.mul(self.basis(i), gamma)).into_iter().enumerate() {
                out.set(i, j, v);
            }
        }
        out
    }

    /// Places `multiplication(x)` at block `(row, col)` of `target`.
    fn place(&self, target: &mut Matrix, row: usize, col: usize, x: Elem) {
        let n = self.degree;
        let block = self.multiplication(x);
        for i in 0..n {
            for j in 0..n {
                target.set(row * n + i, col * n + j, block.get(i, j));
            }
        }
    }
}

fn assemble(net: &Network, field: &Algebra, coords: &Coordinates, d: &Draw, a_hat: &[Matrix], c: usize) -> NetworkCode {
    let n = coords.degree;
    let k = n * c;
    let encoders = net
        .edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| {
            let inputs = net
                .in_edges(edge.tail)
                .into_iter()
                .map(|prev| (prev, coords.multiplication(d.f.get(prev, e))))
                .collect();
            let message = net.source_index(edge.tail).map(|tau| {
                let mut h = Matrix::zeros(k, n);
                for j in 0..c {
                    coords.place(&mut h, j, 0, a_hat[tau].get(j, e));
                }
                h
            });
            Encoder::Linear { inputs, message }
        })
        .collect();
    let blocks = net
        .in_edges(net.receiver())
        .into_iter()
        .map(|e| {
            let mut block = Matrix::zeros(n, k);
            for j in 0..c {
                coords.place(&mut block, 0, j, d.b.get(j, e));
            }
            (e, block)
        })
        .collect();
    NetworkCode {
        k,
        n,
        alphabet: field.clone(),
        encoders,
        decoder: Decoder::LinearThenMap { blocks, map: ValueMap::Identity },
    }
}

/// Builds a rate-`min|C|` linear code computing `sum_tau coeffs[tau] x_tau`
/// over the finite field `field`.
///
/// Degrees `n = 1, 2, ...` are tried with [`KM_DRAWS_PER_DEGREE`] seeded draws
/// each, up to extension fields of [`KM_MAX_FIELD_SIZE`] elements. The result
/// is verified exhaustively when at most `2^20` message assignments exist and
/// by `10^5` seeded random assignments otherwise.
pub fn km_construct(net: &Network, field: &Algebra, coeffs: &[Elem], seed: u64) -> Result<KmConstruction, ConstructError> {
    if !field.is_field() {
        return Err(ConstructError::NotAField(field.to_string()));
    }
    let s = net.num_sources();
    if coeffs.len() != s {
        return Err(ConstructError::CoefficientCount { given: coeffs.len(), sources: s });
    }
    for (tau, &a) in coeffs.iter().enumerate() {
        field.check(a).map_err(|_| ConstructError::BadCoefficient(a))?;
        if a == 0 {
            return Err(ConstructError::ZeroCoefficient(tau + 1));
        }
    }
    let c = net.min_cut_size();
    if c == 0 {
        return Err(ConstructError::ZeroCut);
    }
    for tau in 1..=s {
        let cut = net.max_flow_from(&[tau]);
        if cut < c {
            return Err(ConstructError::SourceCut { source_index: tau, cut, c });
        }
    }
    let cu = c as usize;
    let q = field.size() as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = 0;
    let mut degree = 1u32;
    while q.pow(degree) <= KM_MAX_FIELD_SIZE {
        let ext = field.extension(degree)?;
        for _ in 0..KM_DRAWS_PER_DEGREE {
            attempts += 1;
            let d = draw(net, &ext, cu, &mut rng)?;
            let determinants = d.m.iter().map(|m| m.det(&ext)).collect::<Result<Vec<_>, _>>()?;
            if determinants.contains(&0) {
                continue;
            }
            let mut a_hat = Vec::with_capacity(s);
            for (tau, m) in d.m.iter().enumerate() {
                let inv = m.inverse(&ext)?.expect("nonzero determinant");
                a_hat.push(inv.mul(&ext, &d.a[tau])?.scale(&ext, coeffs[tau]));
            }
            let coords = Coordinates { ext: &ext, degree: degree as usize };
            let code = assemble(net, field, &coords, &d, &a_hat, cu);
            let spec = coeffs.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",");
            let f = TargetFunction::builtin(&format!("linear:{spec}"), field, s)?;
            let assignments = (q as u128).checked_pow((code.k * s) as u32);
            let exhaustive = assignments.is_some_and(|a| a <= EXHAUSTIVE_LIMIT);
            let (verification, exhaustive) = verify_with_fallback(net, &code, &f, exhaustive, seed)?;
            let minimizing_cut = net
                .enumerate_cuts(DEFAULT_CUT_BUDGET)
                .ok()
                .and_then(|cuts| cuts.into_iter().find(|cut| cut.edges.len() as u64 == c));
            return Ok(KmConstruction {
                construction: Construction { network: net.clone(), function: f, code, verification, exhaustive },
                degree,
                c,
                seed,
                attempts,
                extension: ext,
                determinants,
                minimizing_cut,
            });
        }
        degree += 1;
    }
    Err(ConstructError::RetryCapExceeded { attempts, max_field: KM_MAX_FIELD_SIZE })
}
