//! Multipartite states: subsystem layouts, partial trace, permutation,
//! purification and the named state factories.
//!
//! Index convention: the first subsystem of a layout is the most significant
//! tensor index, matching [`ComplexMatrix::tensor`].

use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{QsiError, Result};
use crate::matrix::{ComplexMatrix, C64, DEFAULT_ZERO_CUTOFF, HERMITIAN_TOL};

pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-9;
pub const NORM_TOL: f64 = 1e-10;

/// Role a subsystem plays in a state transfer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    /// The system `C_A` that Alice sends to Bob.
    Transfer,
    AliceQsi,
    BobQsi,
    Reference,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Transfer => "transfer",
            Role::AliceQsi => "alice_qsi",
            Role::BobQsi => "bob_qsi",
            Role::Reference => "reference",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subsystem {
    pub label: String,
    pub dim: usize,
    pub role: Role,
}

impl Subsystem {
    pub fn new(label: impl Into<String>, dim: usize, role: Role) -> Self {
        Self {
            label: label.into(),
            dim,
            role,
        }
    }
}

/// Ordered list of labelled subsystems.
///
/// Labels are unique and at most one subsystem carries [`Role::Transfer`].
/// Reduced states routinely drop the transfer system, so "exactly one" is
/// only enforced where a full transfer instance is needed (see
/// [`crate::costs::PartitionSpec`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsystemLayout {
    subsystems: Vec<Subsystem>,
}

impl SubsystemLayout {
    pub fn new(subsystems: Vec<Subsystem>) -> Result<Self> {
        let mut seen = HashSet::new();
        for s in &subsystems {
            if !seen.insert(s.label.as_str()) {
                return Err(QsiError::DuplicateLabel(s.label.clone()));
            }
            if s.dim == 0 {
                return Err(QsiError::InvalidLayout(format!(
                    "subsystem `{}` has dimension 0",
                    s.label
                )));
            }
        }
        if subsystems.is_empty() {
            return Err(QsiError::InvalidLayout("layout has no subsystems".into()));
        }
        let transfers = subsystems.iter().filter(|s| s.role == Role::Transfer).count();
        if transfers > 1 {
            return Err(QsiError::InvalidLayout(format!(
                "{transfers} subsystems have role transfer; at most one is allowed"
            )));
        }
        Ok(Self { subsystems })
    }

    /// Qubit-by-default layout labelled `q1..qn`; the first subsystem is the
    /// transfer system and the rest are references.
    pub fn labelled(dims: &[usize]) -> Result<Self> {
        Self::new(
            dims.iter()
                .enumerate()
                .map(|(k, &d)| {
                    let role = if k == 0 { Role::Transfer } else { Role::Reference };
                    Subsystem::new(format!("q{}", k + 1), d, role)
                })
                .collect(),
        )
    }

    pub fn subsystems(&self) -> &[Subsystem] {
        &self.subsystems
    }

    pub fn len(&self) -> usize {
        self.subsystems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsystems.is_empty()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.subsystems.iter().map(|s| s.label.as_str()).collect()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.subsystems.iter().map(|s| s.dim).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.subsystems.iter().map(|s| s.dim).product()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.subsystems
            .iter()
            .position(|s| s.label == label)
            .ok_or_else(|| QsiError::UnknownLabel(label.to_string()))
    }

    pub fn get(&self, label: &str) -> Result<&Subsystem> {
        Ok(&self.subsystems[self.position(label)?])
    }

    pub fn contains(&self, label: &str) -> bool {
        self.subsystems.iter().any(|s| s.label == label)
    }

    /// Product of the dimensions of the named subsystems.
    pub fn dim_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<usize> {
        labels
            .iter()
            .map(|l| self.get(l.as_ref()).map(|s| s.dim))
            .product()
    }

    pub fn labels_with_role(&self, role: Role) -> Vec<String> {
        self.subsystems
            .iter()
            .filter(|s| s.role == role)
            .map(|s| s.label.clone())
            .collect()
    }

    pub fn with_role(&self, label: &str, role: Role) -> Result<Self> {
        let k = self.position(label)?;
        let mut subsystems = self.subsystems.clone();
        if role == Role::Transfer {
            for s in subsystems.iter_mut() {
                if s.role == Role::Transfer {
                    s.role = Role::Reference;
                }
            }
        }
        subsystems[k].role = role;
        Self::new(subsystems)
    }

    pub fn concat(&self, other: &Self) -> Result<Self> {
        let mut subsystems = self.subsystems.clone();
        subsystems.extend(other.subsystems.iter().cloned());
        Self::new(subsystems)
    }

    fn positions<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        labels.iter().map(|l| self.position(l.as_ref())).collect()
    }
}

/// Mixed-radix digits of a flat basis index, most significant first.
fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = index % dims[k];
        index /= dims[k];
    }
    out
}

fn flatten(digits: impl Iterator<Item = usize>, dims: impl Iterator<Item = usize>) -> usize {
    digits.zip(dims).fold(0, |acc, (d, n)| acc * n + d)
}

/// Density operator on a labelled multipartite system.
#[derive(Clone, Debug)]
pub struct MultipartiteState {
    layout: SubsystemLayout,
    rho: ComplexMatrix,
    pure: bool,
}

impl MultipartiteState {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(layout: SubsystemLayout, rho: ComplexMatrix) -> Result<Self> {
        let d = layout.total_dim();
        if rho.rows() != d || rho.cols() != d {
            return Err(QsiError::Shape(format!(
                "density matrix is {}x{}, layout requires {d}x{d}",
                rho.rows(),
                rho.cols()
            )));
        }
        let herm = rho.hermitian_deviation()?;
        if herm > HERMITIAN_TOL {
            return Err(QsiError::NotHermitian {
                deviation: herm,
                tolerance: HERMITIAN_TOL,
            });
        }
        let tr = rho.trace()?;
        let trace_dev = (tr - C64::new(1.0, 0.0)).norm();
        if trace_dev > TRACE_TOL {
            return Err(QsiError::InvalidDensity {
                check: "|trace - 1| exceeds 1e-10",
                measured: trace_dev,
            });
        }
        let min_eig = rho.eigvals_hermitian()?.first().copied().unwrap_or(0.0);
        if min_eig < -PSD_TOL {
            return Err(QsiError::InvalidDensity {
                check: "smallest eigenvalue below -1e-9",
                measured: min_eig,
            });
        }
        Ok(Self {
            layout,
            rho,
            pure: false,
        })
    }

    pub(crate) fn from_parts_unchecked(layout: SubsystemLayout, rho: ComplexMatrix, pure: bool) -> Self {
        debug_assert_eq!(layout.total_dim(), rho.rows());
        Self { layout, rho, pure }
    }

    pub(crate) fn with_rho_unchecked(&self, rho: ComplexMatrix) -> Self {
        Self::from_parts_unchecked(self.layout.clone(), rho, false)
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.rows()
    }

    /// Whether the state was built from a state vector, so that complementary
    /// subsystems have equal entropy.
    pub fn is_known_pure(&self) -> bool {
        self.pure
    }

    /// `Tr rho^2`.
    pub fn purity(&self) -> f64 {
        // For Hermitian rho, Tr rho^2 = sum |rho_ij|^2.
        self.rho.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn with_layout(&self, layout: SubsystemLayout) -> Result<Self> {
        if layout.dims() != self.layout.dims() {
            return Err(QsiError::Shape("relabelled layout must keep every dimension".into()));
        }
        Ok(Self {
            layout,
            rho: self.rho.clone(),
            pure: self.pure,
        })
    }

    pub fn with_role(&self, label: &str, role: Role) -> Result<Self> {
        self.with_layout(self.layout.with_role(label, role)?)
    }

    /// Assigns roles to several labels at once.
    pub fn with_roles(&self, assignments: &[(&str, Role)]) -> Result<Self> {
        let mut layout = self.layout.clone();
        for &(label, role) in assignments {
            layout = layout.with_role(label, role)?;
        }
        self.with_layout(layout)
    }

    /// Renames subsystems in order.
    pub fn relabel<S: AsRef<str>>(&self, labels: &[S]) -> Result<Self> {
        if labels.len() != self.layout.len() {
            return Err(QsiError::InvalidLayout(format!(
                "{} labels supplied for {} subsystems",
                labels.len(),
                self.layout.len()
            )));
        }
        let subsystems = self
            .layout
            .subsystems()
            .iter()
            .zip(labels)
            .map(|(s, l)| Subsystem::new(l.as_ref(), s.dim, s.role))
            .collect();
        self.with_layout(SubsystemLayout::new(subsystems)?)
    }

    /// `rho (x) sigma` with concatenated layouts.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            layout: self.layout.concat(&other.layout)?,
            rho: self.rho.tensor(&other.rho),
            pure: self.pure && other.pure,
        })
    }

    /// Reduced state on `keep`, in the layout's original relative order.
    pub fn partial_trace<S: AsRef<str>>(&self, keep: &[S]) -> Result<Self> {
        if keep.is_empty() {
            return Err(QsiError::InvalidParameter("partial trace must keep at least one subsystem".into()));
        }
        let mut kept_pos = self.layout.positions(keep)?;
        kept_pos.sort_unstable();
        if let Some(w) = kept_pos.windows(2).find(|w| w[0] == w[1]) {
            return Err(QsiError::DuplicateLabel(self.layout.subsystems()[w[0]].label.clone()));
        }
        if kept_pos.len() == self.layout.len() {
            return Ok(self.clone());
        }
        let dims = self.layout.dims();
        let traced_pos: Vec<usize> = (0..dims.len()).filter(|k| !kept_pos.contains(k)).collect();
        let kept_dims: Vec<usize> = kept_pos.iter().map(|&k| dims[k]).collect();
        let traced_dims: Vec<usize> = traced_pos.iter().map(|&k| dims[k]).collect();
        let dk: usize = kept_dims.iter().product();
        let dt: usize = traced_dims.iter().product();

        // full_index[k * dt + t] is the flat index of (kept=k, traced=t)
        let mut full_index = vec![0usize; dk * dt];
        for full in 0..self.dim() {
            let dig = digits(full, &dims);
            let k = flatten(kept_pos.iter().map(|&p| dig[p]), kept_dims.iter().copied());
            let t = flatten(traced_pos.iter().map(|&p| dig[p]), traced_dims.iter().copied());
            full_index[k * dt + t] = full;
        }

        let mut out = ComplexMatrix::zeros(dk, dk);
        for k1 in 0..dk {
            for k2 in 0..dk {
                let mut acc = C64::new(0.0, 0.0);
                for t in 0..dt {
                    acc += self.rho[(full_index[k1 * dt + t], full_index[k2 * dt + t])];
                }
                out[(k1, k2)] = acc;
            }
        }
        let layout = SubsystemLayout::new(
            kept_pos
                .iter()
                .map(|&p| self.layout.subsystems()[p].clone())
                .collect(),
        )?;
        Ok(Self::from_parts_unchecked(layout, out, false))
    }

    /// Reorders subsystems; `new_order` must be a permutation of the labels.
    pub fn permute<S: AsRef<str>>(&self, new_order: &[S]) -> Result<Self> {
        if new_order.len() != self.layout.len() {
            return Err(QsiError::InvalidParameter(format!(
                "permutation lists {} labels, layout has {}",
                new_order.len(),
                self.layout.len()
            )));
        }
        let perm = self.layout.positions(new_order)?;
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if std::mem::replace(&mut seen[p], true) {
                return Err(QsiError::DuplicateLabel(self.layout.subsystems()[p].label.clone()));
            }
        }
        let old_dims = self.layout.dims();
        let new_dims: Vec<usize> = perm.iter().map(|&p| old_dims[p]).collect();
        let d = self.dim();
        // old_of_new[new flat index] = old flat index
        let mut old_of_new = vec![0usize; d];
        for (new_flat, slot) in old_of_new.iter_mut().enumerate() {
            let nd = digits(new_flat, &new_dims);
            let mut od = vec![0usize; old_dims.len()];
            for (new_k, &old_k) in perm.iter().enumerate() {
                od[old_k] = nd[new_k];
            }
            *slot = flatten(od.into_iter(), old_dims.iter().copied());
        }
        let mut out = ComplexMatrix::zeros(d, d);
        for r in 0..d {
            for c in 0..d {
                out[(r, c)] = self.rho[(old_of_new[r], old_of_new[c])];
            }
        }
        let layout = SubsystemLayout::new(
            perm.iter()
                .map(|&p| self.layout.subsystems()[p].clone())
                .collect(),
        )?;
        Ok(Self::from_parts_unchecked(layout, out, self.pure))
    }

    /// Spectral purification `sum_i sqrt(lambda_i) |e_i>|i>` with a fresh
    /// reference subsystem of dimension `rank(rho)` appended last.
    pub fn purify(&self, ref_label: &str) -> Result<PureState> {
        if self.layout.contains(ref_label) {
            return Err(QsiError::DuplicateLabel(ref_label.to_string()));
        }
        let eig = self.rho.eig_hermitian()?;
        let cutoff = eig.support_cutoff(DEFAULT_ZERO_CUTOFF);
        let support: Vec<usize> = (0..eig.eigenvalues.len())
            .filter(|&k| eig.eigenvalues[k] > cutoff)
            .collect();
        let rank = support.len().max(1);
        let d = self.dim();
        let mut amplitudes = vec![C64::new(0.0, 0.0); d * rank];
        let weight_sum: f64 = support.iter().map(|&k| eig.eigenvalues[k]).sum();
        for (r_idx, &k) in support.iter().enumerate() {
            let amp = (eig.eigenvalues[k] / weight_sum).sqrt();
            for x in 0..d {
                amplitudes[x * rank + r_idx] = eig.eigenvectors[(x, k)] * amp;
            }
        }
        let mut subsystems = self.layout.subsystems().to_vec();
        subsystems.push(Subsystem::new(ref_label, rank, Role::Reference));
        PureState::new(SubsystemLayout::new(subsystems)?, amplitudes)
    }

    /// A label not present in the layout, derived from `base`.
    pub fn fresh_label(&self, base: &str) -> String {
        if !self.layout.contains(base) {
            return base.to_string();
        }
        (1..)
            .map(|k| format!("{base}{k}"))
            .find(|l| !self.layout.contains(l))
            .expect("unbounded search")
    }
}

/// Normalized state vector on a labelled system.
#[derive(Clone, Debug)]
pub struct PureState {
    layout: SubsystemLayout,
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(layout: SubsystemLayout, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != layout.total_dim() {
            return Err(QsiError::Shape(format!(
                "{} amplitudes for total dimension {}",
                amplitudes.len(),
                layout.total_dim()
            )));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(QsiError::InvalidParameter("non-finite amplitude".into()));
        }
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(QsiError::NotNormalized { norm_sq });
        }
        Ok(Self { layout, amplitudes })
    }

    /// Normalizes `amplitudes` first; rejects the zero vector.
    pub fn normalized(layout: SubsystemLayout, mut amplitudes: Vec<C64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(QsiError::InvalidParameter("cannot normalize a zero or non-finite vector".into()));
        }
        for z in amplitudes.iter_mut() {
            *z /= norm;
        }
        Self::new(layout, amplitudes)
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// `|psi><psi|`.
    pub fn density(&self) -> MultipartiteState {
        MultipartiteState::from_parts_unchecked(
            self.layout.clone(),
            ComplexMatrix::outer(&self.amplitudes),
            true,
        )
    }
}

impl From<PureState> for MultipartiteState {
    fn from(psi: PureState) -> Self {
        psi.density()
    }
}

/// `(1/sqrt k) sum_i |i>|i>` on subsystems `a` and `b` of dimension `k`.
pub fn maximally_entangled(k: usize) -> Result<PureState> {
    if k == 0 {
        return Err(QsiError::InvalidParameter("Schmidt rank k must be at least 1".into()));
    }
    let amp = C64::new(1.0 / (k as f64).sqrt(), 0.0);
    let mut amplitudes = vec![C64::new(0.0, 0.0); k * k];
    for i in 0..k {
        amplitudes[i * k + i] = amp;
    }
    let layout = SubsystemLayout::new(vec![
        Subsystem::new("a", k, Role::Transfer),
        Subsystem::new("b", k, Role::Reference),
    ])?;
    PureState::new(layout, amplitudes)
}

/// Named state families.
#[derive(Clone, Debug, PartialEq)]
pub enum StateKind {
    /// `|Phi+>` on two qubits.
    Bell,
    Ghz(usize),
    W(usize),
    /// `p |Psi-><Psi-| + (1 - p) I/4`.
    Werner(f64),
    RandomPure { dims: Vec<usize>, seed: u64 },
    /// Reduced state of a random pure state on `dims (x) rank`.
    RandomMixed { dims: Vec<usize>, rank: usize, seed: u64 },
}

/// Builds a named state. Subsystems are labelled `q1..qn`; the first is the
/// transfer system and the rest are references until reassigned.
pub fn factory(kind: &StateKind) -> Result<MultipartiteState> {
    let zero = C64::new(0.0, 0.0);
    match kind {
        StateKind::Bell => {
            let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            let psi = PureState::new(SubsystemLayout::labelled(&[2, 2])?, vec![h, zero, zero, h])?;
            Ok(psi.density())
        }
        &StateKind::Ghz(n) => {
            if n < 2 {
                return Err(QsiError::InvalidParameter(format!("ghz needs n >= 2, got {n}")));
            }
            let d = 1usize << n;
            let mut amps = vec![zero; d];
            let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            amps[0] = h;
            amps[d - 1] = h;
            Ok(PureState::new(SubsystemLayout::labelled(&vec![2; n])?, amps)?.density())
        }
        &StateKind::W(n) => {
            if n < 2 {
                return Err(QsiError::InvalidParameter(format!("w needs n >= 2, got {n}")));
            }
            let d = 1usize << n;
            let mut amps = vec![zero; d];
            let a = C64::new(1.0 / (n as f64).sqrt(), 0.0);
            for k in 0..n {
                amps[1 << k] = a;
            }
            Ok(PureState::new(SubsystemLayout::labelled(&vec![2; n])?, amps)?.density())
        }
        &StateKind::Werner(p) => {
            if !(0.0..=1.0).contains(&p) {
                return Err(QsiError::InvalidParameter(format!("werner p must lie in [0, 1], got {p}")));
            }
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let singlet = ComplexMatrix::outer(&[zero, C64::new(h, 0.0), C64::new(-h, 0.0), zero]);
            let noise = ComplexMatrix::identity(4).scale_real((1.0 - p) / 4.0);
            let rho = &singlet.scale_real(p) + &noise;
            let layout = SubsystemLayout::labelled(&[2, 2])?;
            Ok(MultipartiteState::from_parts_unchecked(layout, rho, p == 1.0))
        }
        StateKind::RandomPure { dims, seed } => {
            check_dims(dims)?;
            let layout = SubsystemLayout::labelled(dims)?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let amps = gaussian_vector(&mut rng, layout.total_dim());
            Ok(PureState::normalized(layout, amps)?.density())
        }
        StateKind::RandomMixed { dims, rank, seed } => {
            check_dims(dims)?;
            if *rank == 0 {
                return Err(QsiError::InvalidParameter("random_mixed rank must be at least 1".into()));
            }
            let mut full_dims = dims.clone();
            full_dims.push(*rank);
            let layout = SubsystemLayout::labelled(&full_dims)?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let amps = gaussian_vector(&mut rng, layout.total_dim());
            let psi = PureState::normalized(layout, amps)?.density();
            let keep: Vec<String> = (1..=dims.len()).map(|k| format!("q{k}")).collect();
            let mut reduced = psi.partial_trace(&keep)?;
            reduced.rho = reduced.rho.hermitian_part();
            Ok(reduced)
        }
    }
}

fn check_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() {
        return Err(QsiError::InvalidParameter("at least one subsystem dimension is required".into()));
    }
    if let Some(d) = dims.iter().find(|&&d| d < 2) {
        return Err(QsiError::InvalidParameter(format!("dim must be >= 2, got {d}")));
    }
    Ok(())
}

/// Complex Gaussian vector; normalized, this is Haar-distributed.
fn gaussian_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    (0..n)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect()
}
