//! Von Neumann entropy, mutual information, conditional mutual information
//! and root fidelity. All logarithms are base 2.

use std::collections::HashSet;
use std::fmt;

use crate::error::{QsiError, Result};
use crate::hilbert::MultipartiteState;

/// Eigenvalues in `[-PSD_CLAMP, 0)` are treated as round-off.
const PSD_CLAMP: f64 = 1e-9;

/// Relative floor below which eigenvalues of `sqrt(rho) sigma sqrt(rho)` are
/// treated as zero; `sqrt` would otherwise amplify round-off to ~1e-8.
const FIDELITY_CUTOFF: f64 = 1e-13;

/// An information quantity in bits.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default)]
pub struct Bits(pub f64);

impl Bits {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bits", self.0)
    }
}

/// Shannon entropy (bits) of a spectrum, with `0 log 0 = 0`.
pub fn spectrum_entropy(eigenvalues: &[f64]) -> f64 {
    eigenvalues
        .iter()
        .map(|&l| if l >= -PSD_CLAMP { l.max(0.0) } else { l })
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.log2())
        .sum()
}

/// `H(subset)` of the reduced state.
///
/// For states built from a state vector the smaller of the subset and its
/// complement is diagonalized.
pub fn von_neumann<S: AsRef<str>>(state: &MultipartiteState, subset: &[S]) -> Result<Bits> {
    if subset.is_empty() {
        return Err(QsiError::InvalidParameter("entropy of an empty subsystem set".into()));
    }
    let layout = state.layout();
    let mut wanted = HashSet::new();
    for l in subset {
        layout.position(l.as_ref())?;
        if !wanted.insert(l.as_ref()) {
            return Err(QsiError::DuplicateLabel(l.as_ref().to_string()));
        }
    }
    let complement: Vec<&str> = layout
        .labels()
        .into_iter()
        .filter(|l| !wanted.contains(l))
        .collect();
    if complement.is_empty() && state.is_known_pure() {
        return Ok(Bits(0.0));
    }
    let subset_dim = layout.dim_of(subset)?;
    let complement_dim = layout.dim_of(&complement)?;
    let reduced = if state.is_known_pure() && complement_dim < subset_dim {
        state.partial_trace(&complement)?
    } else {
        state.partial_trace(subset)?
    };
    let eigenvalues = reduced.rho().eigvals_hermitian()?;
    Ok(Bits(spectrum_entropy(&eigenvalues)))
}

/// `H` of a possibly empty label set (0 when empty).
pub(crate) fn entropy_or_zero<S: AsRef<str>>(state: &MultipartiteState, labels: &[S]) -> Result<f64> {
    if labels.is_empty() {
        Ok(0.0)
    } else {
        Ok(von_neumann(state, labels)?.0)
    }
}

fn ensure_disjoint(sets: &[&[&str]]) -> Result<()> {
    let mut seen = HashSet::new();
    for set in sets {
        for &l in *set {
            if !seen.insert(l) {
                return Err(QsiError::OverlappingLabels(l.to_string()));
            }
        }
    }
    Ok(())
}

fn as_strs<S: AsRef<str>>(v: &[S]) -> Vec<&str> {
    v.iter().map(|s| s.as_ref()).collect()
}

/// `I(x;y) = H(x) + H(y) - H(xy)`.
pub fn qmi<S: AsRef<str>, T: AsRef<str>>(state: &MultipartiteState, x: &[S], y: &[T]) -> Result<Bits> {
    if x.is_empty() || y.is_empty() {
        return Err(QsiError::InvalidParameter("mutual information needs non-empty label sets".into()));
    }
    qcmi::<S, T, &str>(state, x, y, &[])
}

/// `I(x;y|z) = H(xz) + H(yz) - H(z) - H(xyz)`; with `z` empty this is
/// `I(x;y)`.
pub fn qcmi<S: AsRef<str>, T: AsRef<str>, U: AsRef<str>>(
    state: &MultipartiteState,
    x: &[S],
    y: &[T],
    z: &[U],
) -> Result<Bits> {
    if x.is_empty() || y.is_empty() {
        return Err(QsiError::InvalidParameter(
            "conditional mutual information needs non-empty x and y".into(),
        ));
    }
    conditional_mutual_information_or_zero(state, x, y, z)
}

/// QCMI that is 0 when `x` or `y` is empty.
pub(crate) fn conditional_mutual_information_or_zero<S: AsRef<str>, T: AsRef<str>, U: AsRef<str>>(
    state: &MultipartiteState,
    x: &[S],
    y: &[T],
    z: &[U],
) -> Result<Bits> {
    let (x, y, z) = (as_strs(x), as_strs(y), as_strs(z));
    ensure_disjoint(&[&x, &y, &z])?;
    for l in x.iter().chain(&y).chain(&z) {
        state.layout().position(l)?;
    }
    if x.is_empty() || y.is_empty() {
        return Ok(Bits(0.0));
    }
    let join = |a: &[&str], b: &[&str]| -> Vec<String> {
        a.iter().chain(b).map(|s| s.to_string()).collect()
    };
    let xz = join(&x, &z);
    let yz = join(&y, &z);
    let xyz: Vec<String> = x.iter().chain(&y).chain(&z).map(|s| s.to_string()).collect();
    let value = von_neumann(state, &xz)?.0 + von_neumann(state, &yz)?.0
        - entropy_or_zero(state, &z)?
        - von_neumann(state, &xyz)?.0;
    Ok(Bits(value))
}

/// Root fidelity `Tr sqrt(sqrt(rho) sigma sqrt(rho))`, clamped to `[0, 1]`.
pub fn fidelity(rho: &MultipartiteState, sigma: &MultipartiteState) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(QsiError::Shape(format!(
            "fidelity between states of dimension {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let root = rho.rho().sqrt_psd()?;
    let inner = (&(&root * sigma.rho()) * &root).hermitian_part();
    let eigenvalues = inner.eigvals_hermitian()?;
    let floor = FIDELITY_CUTOFF * eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs())).max(1.0);
    let f: f64 = eigenvalues
        .iter()
        .filter(|&&l| l > floor)
        .map(|l| l.sqrt())
        .sum();
    Ok(f.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{factory, StateKind, SubsystemLayout};
    use crate::matrix::ComplexMatrix;

    fn st(kind: StateKind) -> MultipartiteState {
        factory(&kind).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn entropy_examples() {
        let g = st(StateKind::Ghz(3));
        assert!(close(von_neumann(&g, &["q1", "q2", "q3"]).unwrap().0, 0.0, 1e-12));
        let mixed = st(StateKind::Werner(0.0)).partial_trace(&["q1"]).unwrap();
        assert!(close(von_neumann(&mixed, &["q1"]).unwrap().0, 1.0, 1e-12));
        let w = st(StateKind::W(3));
        let expected = -(1.0f64 / 3.0) * (1.0f64 / 3.0).log2() - (2.0f64 / 3.0) * (2.0f64 / 3.0).log2();
        assert!(close(von_neumann(&w, &["q1"]).unwrap().0, expected, 1e-12));
        assert!(close(expected, 0.91830, 1e-5));
        assert!(von_neumann(&w, &["zz"]).is_err());
        assert!(von_neumann::<&str>(&w, &[]).is_err());
    }

    #[test]
    fn complement_shortcut_matches_direct_computation() {
        let psi = st(StateKind::RandomPure { dims: vec![2, 3, 2, 2], seed: 5 });
        let direct = {
            let r = psi.partial_trace(&["q1", "q2", "q3"]).unwrap();
            spectrum_entropy(&r.rho().eigvals_hermitian().unwrap())
        };
        let via = von_neumann(&psi, &["q1", "q2", "q3"]).unwrap().0;
        assert!(close(direct, via, 1e-12));
    }

    #[test]
    fn mutual_information_examples() {
        let bell = st(StateKind::Bell);
        assert!(close(qmi(&bell, &["q1"], &["q2"]).unwrap().0, 2.0, 1e-12));
        let g = st(StateKind::Ghz(3));
        assert!(close(qmi(&g, &["q1"], &["q2"]).unwrap().0, 1.0, 1e-12));

        let layout = SubsystemLayout::labelled(&[2, 2]).unwrap();
        let rho = ComplexMatrix::from_diag(&[0.3, 0.7]).tensor(&ComplexMatrix::from_diag(&[0.6, 0.4]));
        let product = MultipartiteState::new(layout, rho).unwrap();
        assert!(close(qmi(&product, &["q1"], &["q2"]).unwrap().0, 0.0, 1e-12));

        assert!(matches!(
            qmi(&g, &["q1"], &["q1", "q2"]),
            Err(QsiError::OverlappingLabels(_))
        ));
    }

    #[test]
    fn conditional_mutual_information_examples() {
        let g3 = st(StateKind::Ghz(3));
        let g4 = st(StateKind::Ghz(4));
        assert!(close(
            qcmi::<_, _, &str>(&g3, &["q1"], &["q2"], &[]).unwrap().0,
            qmi(&g3, &["q1"], &["q2"]).unwrap().0,
            1e-15
        ));
        assert!(close(qcmi(&g4, &["q1"], &["q3"], &["q2"]).unwrap().0, 0.0, 1e-12));
        assert!(close(qcmi(&g3, &["q1"], &["q2"], &["q3"]).unwrap().0, 1.0, 1e-12));
        assert!(qcmi(&g3, &["q1"], &["q2"], &["q2"]).is_err());
    }

    #[test]
    fn fidelity_examples() {
        let bell = st(StateKind::Bell);
        assert!(close(fidelity(&bell, &bell).unwrap(), 1.0, 1e-12));

        let layout = SubsystemLayout::labelled(&[2]).unwrap();
        let zero = MultipartiteState::new(layout.clone(), ComplexMatrix::from_diag(&[1.0, 0.0])).unwrap();
        let one = MultipartiteState::new(layout, ComplexMatrix::from_diag(&[0.0, 1.0])).unwrap();
        assert!(close(fidelity(&zero, &one).unwrap(), 0.0, 1e-12));

        let mixed = st(StateKind::Werner(0.0));
        assert!(close(fidelity(&bell, &mixed).unwrap(), 0.5, 1e-12));
        assert!(fidelity(&bell, &zero).is_err());
    }

    #[test]
    fn fidelity_is_symmetric_on_random_states() {
        for seed in 0..20 {
            let a = st(StateKind::RandomMixed { dims: vec![2, 3], rank: 1 + seed as usize % 6, seed });
            let b = st(StateKind::RandomMixed { dims: vec![2, 3], rank: 2, seed: seed + 50 });
            let ab = fidelity(&a, &b).unwrap();
            let ba = fidelity(&b, &a).unwrap();
            assert!(close(ab, ba, 1e-10), "seed {seed}: {ab} vs {ba}");
            assert!(close(fidelity(&a, &a).unwrap(), 1.0, 1e-9));
        }
    }

    #[test]
    fn entropy_is_additive_under_tensor_products() {
        let a = st(StateKind::RandomMixed { dims: vec![2], rank: 2, seed: 1 });
        let b = st(StateKind::RandomMixed { dims: vec![3], rank: 3, seed: 2 })
            .relabel(&["r1"])
            .unwrap()
            .with_role("r1", crate::hilbert::Role::Reference)
            .unwrap();
        let ab = a.tensor(&b).unwrap();
        let sum = von_neumann(&a, &["q1"]).unwrap().0 + von_neumann(&b, &["r1"]).unwrap().0;
        assert!(close(von_neumann(&ab, &["q1", "r1"]).unwrap().0, sum, 1e-9));
    }
}
