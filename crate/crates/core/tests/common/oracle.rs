//! Brute-force reference quantities built on nalgebra, sharing no code with
//! the library beyond the input amplitudes.

use nalgebra::{Complex, DMatrix, DVector};

pub type C = Complex<f64>;

pub fn ket(amps: &[f64]) -> DVector<C> {
    DVector::from_iterator(amps.len(), amps.iter().map(|&a| C::new(a, 0.0)))
}

pub fn projector(psi: &DVector<C>) -> DMatrix<C> {
    psi * psi.adjoint()
}

/// Reduced density matrix on `keep` (ascending positions), first subsystem
/// most significant.
pub fn reduce(rho: &DMatrix<C>, dims: &[usize], keep: &[usize]) -> DMatrix<C> {
    let total: usize = dims.iter().product();
    let kd: usize = keep.iter().map(|&k| dims[k]).product();
    let digits = |mut x: usize| -> Vec<usize> {
        let mut d = vec![0; dims.len()];
        for p in (0..dims.len()).rev() {
            d[p] = x % dims[p];
            x /= dims[p];
        }
        d
    };
    let kept_index = |d: &[usize]| keep.iter().fold(0, |acc, &k| acc * dims[k] + d[k]);
    let mut out = DMatrix::<C>::zeros(kd, kd);
    for r in 0..total {
        let dr = digits(r);
        for c in 0..total {
            let dc = digits(c);
            let traced_equal = (0..dims.len()).filter(|p| !keep.contains(p)).all(|p| dr[p] == dc[p]);
            if traced_equal {
                out[(kept_index(&dr), kept_index(&dc))] += rho[(r, c)];
            }
        }
    }
    out
}

pub fn entropy(rho: &DMatrix<C>) -> f64 {
    let eig = nalgebra::SymmetricEigen::new(rho.clone());
    eig.eigenvalues
        .iter()
        .filter(|&&l| l > 1e-14)
        .map(|&l| -l * l.log2())
        .sum()
}

/// `S(X)` for the subsystems at positions `set`; empty set gives 0.
pub fn s(rho: &DMatrix<C>, dims: &[usize], set: &[usize]) -> f64 {
    if set.is_empty() {
        return 0.0;
    }
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    entropy(&reduce(rho, dims, &sorted))
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = a.iter().chain(b).copied().collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// `I(X; Y | Z)`
pub fn cmi(rho: &DMatrix<C>, dims: &[usize], x: &[usize], y: &[usize], z: &[usize]) -> f64 {
    s(rho, dims, &union(x, z)) + s(rho, dims, &union(y, z)) - s(rho, dims, z) - s(rho, dims, &union(&union(x, y), z))
}

/// Costs of a pure instance in reference form: transfer `c`, used Alice
/// systems `a`, used Bob systems `b`, everything else `r`.
pub struct ReferenceCosts {
    pub q: f64,
    pub e_redistribution: f64,
    pub c: f64,
    pub e_merging: f64,
}

pub fn reference_costs(rho: &DMatrix<C>, dims: &[usize], c: usize, a: &[usize], b: &[usize]) -> ReferenceCosts {
    let r: Vec<usize> = (0..dims.len()).filter(|p| *p != c && !a.contains(p) && !b.contains(p)).collect();
    let x = [c];
    let crb = cmi(rho, dims, &x, &r, b);
    ReferenceCosts {
        q: 0.5 * crb,
        e_redistribution: 0.5 * cmi(rho, dims, &x, a, &[]) - 0.5 * cmi(rho, dims, &x, b, &[]),
        c: crb,
        e_merging: s(rho, dims, &union(&x, b)) - s(rho, dims, b),
    }
}

pub fn ghz(n: usize) -> DMatrix<C> {
    let mut amps = vec![0.0; 1 << n];
    amps[0] = std::f64::consts::FRAC_1_SQRT_2;
    amps[(1 << n) - 1] = std::f64::consts::FRAC_1_SQRT_2;
    projector(&ket(&amps))
}

pub fn bell() -> DMatrix<C> {
    ghz(2)
}

/// Copies a library density matrix into nalgebra.
pub fn from_library(state: &qsi_core::hilbert::MultipartiteState) -> DMatrix<C> {
    let rho = state.rho();
    let n = rho.rows();
    DMatrix::from_fn(n, n, |r, c| {
        let z = rho[(r, c)];
        C::new(z.re, z.im)
    })
}
