//! Finite truncations of `δ_x, δ_y, 𝒵, 𝒵*` and `A = Re 𝒵` in the basis
//! `e_n = ζ_n / n!`, bracket checks on lattices and on matrices, the `δ_y`
//! series, and the reproducing kernel `Σ ζ_n(p) ζ_n(q)* / (n!)²`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::basis::CoefficientSeries2;
use crate::error::{Error, Result};
use crate::lattice::{LatticeFunction, Window};
use crate::numeric::{factorial, gr_string, ratio_to_f64, GaussianRational};
use crate::products::z_operator;
use crate::zeta::ZetaTable;

/// Operator names shared by the lattice and matrix pictures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Op {
    Identity,
    DeltaX,
    DeltaY,
    Z,
    ZAdj,
    AReZ,
    Dbar,
}

impl Op {
    pub fn symbol(self) -> &'static str {
        match self {
            Op::Identity => "I",
            Op::DeltaX => "δx",
            Op::DeltaY => "δy",
            Op::Z => "Z",
            Op::ZAdj => "Z*",
            Op::AReZ => "A",
            Op::Dbar => "D̄",
        }
    }
}

impl std::str::FromStr for Op {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "I" | "identity" => Op::Identity,
            "delta_x" | "dx" => Op::DeltaX,
            "delta_y" | "dy" => Op::DeltaY,
            "Z" | "z" => Op::Z,
            "Z_adj" | "z_adj" => Op::ZAdj,
            "A_reZ" | "a_rez" | "A" => Op::AReZ,
            "Dbar" | "dbar" => Op::Dbar,
            other => return Err(Error::Parse(format!("unknown operator {other:?}"))),
        })
    }
}

/// A linear combination of operator words; a word `[a, b]` means `a ∘ b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpExpr {
    terms: Vec<(GaussianRational, Vec<Op>)>,
}

impl OpExpr {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn identity() -> Self {
        Self::op(Op::Identity)
    }

    pub fn op(o: Op) -> Self {
        Self { terms: vec![(GaussianRational::one(), vec![o])] }
    }

    pub fn word(ops: &[Op]) -> Self {
        Self { terms: vec![(GaussianRational::one(), ops.to_vec())] }
    }

    pub fn scale(&self, k: &GaussianRational) -> Self {
        Self { terms: self.terms.iter().map(|(c, w)| (c * k, w.clone())).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-GaussianRational::one()))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut terms = Vec::new();
        for (a, wa) in &self.terms {
            for (b, wb) in &other.terms {
                terms.push((a * b, wa.iter().chain(wb).copied().collect()));
            }
        }
        Self { terms }
    }

    /// `[a, b] = ab − ba`.
    pub fn bracket(a: Op, b: Op) -> Self {
        Self::word(&[a, b]).sub(&Self::word(&[b, a]))
    }

    pub fn terms(&self) -> &[(GaussianRational, Vec<Op>)] {
        &self.terms
    }

    /// Applies the expression to `f`; the result lives on the intersection of
    /// the windows each word leaves behind.
    pub fn apply_lattice(&self, f: &LatticeFunction) -> Result<LatticeFunction> {
        let mut parts = Vec::with_capacity(self.terms.len());
        for (c, word) in &self.terms {
            let mut g = f.clone();
            for op in word.iter().rev() {
                g = apply_op_lattice(*op, &g)?;
            }
            parts.push(g.scale(c));
        }
        let Some(first) = parts.first() else {
            return Ok(LatticeFunction::constant(*f.window(), GaussianRational::zero()));
        };
        let mut w = *first.window();
        for p in &parts[1..] {
            w = w.intersect(p.window())?;
        }
        let mut acc = LatticeFunction::constant(w, GaussianRational::zero());
        for p in &parts {
            acc = acc.add(&p.restrict(&w)?)?;
        }
        Ok(acc)
    }

    /// The expression as a product of `N × N` truncations.
    pub fn matrix(&self, n: usize) -> OperatorMatrix {
        let mut acc = OperatorMatrix::zeros(n);
        for (c, word) in &self.terms {
            let m = word
                .iter()
                .map(|&o| matrix_of(o, n))
                .reduce(|a, b| a.mul(&b))
                .unwrap_or_else(|| OperatorMatrix::identity(n));
            acc = acc.add(&m.scale(c));
        }
        acc
    }
}

impl std::fmt::Display for OpExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(c, w)| {
                let word: Vec<&str> = w.iter().map(|o| o.symbol()).collect();
                format!("({c})·{}", word.join(""))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn apply_op_lattice(op: Op, f: &LatticeFunction) -> Result<LatticeFunction> {
    match op {
        Op::Identity => Ok(f.clone()),
        Op::DeltaX => f.delta_x(),
        Op::DeltaY => f.delta_y(),
        Op::Z => z_operator(f),
        Op::Dbar => f.dbar(),
        Op::ZAdj | Op::AReZ => Err(Error::InvalidArgument(format!(
            "{} is defined through the Hilbert space structure and has no lattice form",
            op.symbol()
        ))),
    }
}

/// Square truncation with exact entries and its band profile.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorMatrix {
    n: usize,
    lower: usize,
    upper: usize,
    #[serde(serialize_with = "ser_rows", deserialize_with = "de_rows")]
    entries: Vec<Vec<GaussianRational>>,
}

fn ser_rows<S: serde::Serializer>(rows: &[Vec<GaussianRational>], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(rows.len()))?;
    for r in rows {
        let strs: Vec<String> = r.iter().map(ToString::to_string).collect();
        seq.serialize_element(&strs)?;
    }
    seq.end()
}

fn de_rows<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<GaussianRational>>, D::Error> {
    #[derive(Deserialize)]
    struct Row(#[serde(with = "gr_string::vec")] Vec<GaussianRational>);
    Ok(Vec::<Row>::deserialize(d)?.into_iter().map(|r| r.0).collect())
}

impl OperatorMatrix {
    pub fn from_entries(entries: Vec<Vec<GaussianRational>>) -> Self {
        let n = entries.len();
        let (mut lower, mut upper) = (0, 0);
        for (i, row) in entries.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    lower = lower.max(i.saturating_sub(j));
                    upper = upper.max(j.saturating_sub(i));
                }
            }
        }
        Self { n, lower, upper, entries }
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_entries(vec![vec![GaussianRational::zero(); n]; n])
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { GaussianRational::one() } else { GaussianRational::zero() })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> GaussianRational) -> Self {
        Self::from_entries((0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect())
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// `(lower, upper)` bandwidths.
    pub fn band(&self) -> (usize, usize) {
        (self.lower, self.upper)
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussianRational {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<GaussianRational>] {
        &self.entries
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(self.n, |i, j| &self.entries[i][j] + &other.entries[i][j])
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(self.n, |i, j| &self.entries[i][j] - &other.entries[i][j])
    }

    pub fn scale(&self, k: &GaussianRational) -> Self {
        Self::from_fn(self.n, |i, j| &self.entries[i][j] * k)
    }

    /// Band-aware product.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        Self::from_fn(n, |i, j| {
            let lo = i.saturating_sub(self.lower).max(j.saturating_sub(other.upper));
            let hi = (i + self.upper).min(j + other.lower).min(n - 1);
            if lo > hi {
                return GaussianRational::zero();
            }
            (lo..=hi).map(|k| &self.entries[i][k] * &other.entries[k][j]).sum()
        })
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.entries[j][i].conj())
    }

    /// First entry with `i, j < limit` where the two matrices differ.
    pub fn first_difference(&self, other: &Self, limit: usize) -> Option<(usize, usize)> {
        let limit = limit.min(self.n);
        (0..limit)
            .flat_map(|i| (0..limit).map(move |j| (i, j)))
            .find(|&(i, j)| self.entries[i][j] != other.entries[i][j])
    }

    pub fn to_dmatrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.entries[i][j].to_complex64())
    }

    /// Largest singular value, in floating point.
    pub fn spectral_norm(&self) -> f64 {
        spectral_norm(&self.to_dmatrix())
    }

    /// Rows `(i, j, re, im)` for the nonzero entries.
    pub fn to_csv(&self, float: bool) -> String {
        let mut out = String::from("i,j,re,im\n");
        for (i, row) in self.entries.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    let (re, im) = crate::lattice::format_parts(v, float);
                    out.push_str(&format!("{i},{j},{re},{im}\n"));
                }
            }
        }
        out
    }
}

pub fn spectral_norm(m: &DMatrix<Complex64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().max()
}

/// `−(1−i)/2`, the ratio in the `δ_y` series.
fn deltay_ratio() -> GaussianRational {
    GaussianRational::from_fractions(-1, 2, 1, 2)
}

/// `N × N` truncation of an operator in the basis `e_0, …, e_{N−1}`;
/// column `n` holds the image of `e_n`.
pub fn matrix_of(op: Op, n: usize) -> OperatorMatrix {
    let z = GaussianRational::zero;
    let int = |k: usize| GaussianRational::from(k as i64);
    let half = |k: usize| GaussianRational::from_fractions(k as i64, 2, 0, 1);
    match op {
        Op::Identity => OperatorMatrix::identity(n),
        Op::DeltaX => OperatorMatrix::from_fn(n, |i, j| if i + 1 == j { GaussianRational::one() } else { z() }),
        // δ_y = i Σ_k (−(1−i)/2)^k δ_x^{k+1}: entry (j−k−1, j) is i·r^k.
        Op::DeltaY => {
            let powers: Vec<GaussianRational> = std::iter::successors(Some(GaussianRational::i()), |p| Some(p * &deltay_ratio()))
                .take(n)
                .collect();
            OperatorMatrix::from_fn(n, |i, j| if j > i { powers[j - i - 1].clone() } else { z() })
        }
        // 𝒵 e_j = j e_j + (j+1) e_{j+1}
        Op::Z => OperatorMatrix::from_fn(n, |i, j| {
            if i == j {
                int(j)
            } else if i == j + 1 {
                int(j + 1)
            } else {
                z()
            }
        }),
        // 𝒵* e_j = j e_j + j e_{j−1}
        Op::ZAdj => OperatorMatrix::from_fn(n, |i, j| {
            if i == j || i + 1 == j {
                int(j)
            } else {
                z()
            }
        }),
        // A e_j = j e_j + (j+1)/2 e_{j+1} + j/2 e_{j−1}
        Op::AReZ => OperatorMatrix::from_fn(n, |i, j| {
            if i == j {
                int(j)
            } else if i == j + 1 {
                half(j + 1)
            } else if i + 1 == j {
                half(j)
            } else {
                z()
            }
        }),
        // D̄ annihilates every e_n.
        Op::Dbar => OperatorMatrix::zeros(n),
    }
}

/// One identity `[a, b] = rhs`.
#[derive(Clone, Debug)]
pub struct BracketIdentity {
    pub name: String,
    pub a: Op,
    pub b: Op,
    pub rhs: OpExpr,
}

impl BracketIdentity {
    pub fn new(name: &str, a: Op, b: Op, rhs: OpExpr) -> Self {
        Self { name: name.to_string(), a, b, rhs }
    }
}

fn c(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> GaussianRational {
    GaussianRational::from_fractions(re_num, re_den, im_num, im_den)
}

/// The generator relations as usually stated, `[δ_y, 𝒵] = i(1 + δ_y + δ_y²)` included.
pub fn lie_identities_as_stated() -> Vec<BracketIdentity> {
    let id = OpExpr::identity;
    let dy = || OpExpr::op(Op::DeltaY);
    vec![
        BracketIdentity::new("[dx,Z] = 1 + dx", Op::DeltaX, Op::Z, id().add(&OpExpr::op(Op::DeltaX))),
        BracketIdentity::new(
            "[dy,Z] = i(1 + dy + dy^2)",
            Op::DeltaY,
            Op::Z,
            id().add(&dy()).add(&dy().compose(&dy())).scale(&GaussianRational::i()),
        ),
        BracketIdentity::new(
            "[Dbar,Z] = ((1+i)/2 + (i/2) dy) Dbar",
            Op::Dbar,
            Op::Z,
            id().scale(&c(1, 2, 1, 2)).add(&dy().scale(&c(0, 1, 1, 2))).compose(&OpExpr::op(Op::Dbar)),
        ),
        BracketIdentity::new("[Dbar,dx] = 0", Op::Dbar, Op::DeltaX, OpExpr::zero()),
        BracketIdentity::new("[Dbar,dy] = 0", Op::Dbar, Op::DeltaY, OpExpr::zero()),
        BracketIdentity::new("[dx,dy] = 0", Op::DeltaX, Op::DeltaY, OpExpr::zero()),
    ]
}

/// `[δ_y, 𝒵] = i(1 + δ_y + ½δ_y²)`, i.e. `(i/2)(f(x,y+2) + f(x,y))`.
pub fn deltay_z_corrected() -> BracketIdentity {
    let dy = || OpExpr::op(Op::DeltaY);
    BracketIdentity::new(
        "[dy,Z] = i(1 + dy + dy^2/2)",
        Op::DeltaY,
        Op::Z,
        OpExpr::identity()
            .add(&dy())
            .add(&dy().compose(&dy()).scale(&c(1, 2, 0, 1)))
            .scale(&GaussianRational::i()),
    )
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BracketReport {
    pub name: String,
    pub holds: bool,
    pub checked: usize,
    /// `(function index or 0, x or i, y or j)` of the first violation.
    pub first_violation: Option<(usize, i64, i64)>,
}

/// Lattice mode: `[a,b]f = rhs f` exactly on the common window, for every `f`.
pub fn bracket_check_lattice(id: &BracketIdentity, functions: &[LatticeFunction]) -> Result<BracketReport> {
    let lhs_expr = OpExpr::bracket(id.a, id.b);
    let mut checked = 0;
    for (k, f) in functions.iter().enumerate() {
        let lhs = lhs_expr.apply_lattice(f)?;
        let rhs = id.rhs.apply_lattice(f)?;
        let w = lhs.window().intersect(rhs.window())?;
        let diff = lhs.restrict(&w)?.sub(&rhs.restrict(&w)?)?;
        checked += w.len();
        let bad = w.points().zip(diff.values()).find(|(_, v)| !v.is_zero()).map(|(p, _)| p);
        if let Some((x, y)) = bad {
            return Ok(BracketReport { name: id.name.clone(), holds: false, checked, first_violation: Some((k, x, y)) });
        }
    }
    Ok(BracketReport { name: id.name.clone(), holds: true, checked, first_violation: None })
}

/// Matrix mode: compares `N × N` truncations on indices `< N − mask`.
pub fn bracket_check_matrix(id: &BracketIdentity, n: usize, mask: usize) -> BracketReport {
    let lhs = OpExpr::bracket(id.a, id.b).matrix(n);
    let rhs = id.rhs.matrix(n);
    let limit = n.saturating_sub(mask);
    let diff = lhs.first_difference(&rhs, limit);
    BracketReport {
        name: id.name.clone(),
        holds: diff.is_none(),
        checked: limit * limit,
        first_violation: diff.map(|(i, j)| (0, i as i64, j as i64)),
    }
}

/// Reproducible random functions with small Gaussian-rational values.
pub fn random_lattice_functions(count: usize, w: &Window, seed: u64) -> Vec<LatticeFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            LatticeFunction::from_fn(*w, |_, _| {
                let d = rng.random_range(1..=6);
                c(rng.random_range(-20..=20), d, rng.random_range(-20..=20), d)
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaYReport {
    pub max_n: usize,
    /// Indices `n` where `δ_y ζ_n = i Σ (−(1−i)/2)^k δ_x^{k+1} ζ_n` fails.
    pub corrected_failures: Vec<usize>,
    /// Indices `n` where `δ_y ζ_n = Σ ((i−1)/2)^k δ_x^{k+1} ζ_n` fails.
    pub printed_failures: Vec<usize>,
}

impl DeltaYReport {
    pub fn corrected_holds(&self) -> bool {
        self.corrected_failures.is_empty()
    }

    pub fn printed_fails_on_zeta1(&self) -> bool {
        self.printed_failures.contains(&1)
    }
}

/// Lattice `δ_y ζ_n` against the `δ_x` series, computed on exact polynomial
/// coefficients (the series is finite since `δ_x^{n+1} ζ_n = 0`).
pub fn deltay_check(max_n: usize, zt: &ZetaTable) -> Result<DeltaYReport> {
    if zt.max_degree() < max_n {
        return Err(Error::TableTooSmall { required: max_n, available: zt.max_degree() });
    }
    let ratio = deltay_ratio();
    let mut corrected_failures = Vec::new();
    let mut printed_failures = Vec::new();
    for n in 0..=max_n {
        let direct = zt.values(n).delta_y()?;
        let w = *direct.window();
        let mut series = CoefficientSeries2::zero();
        let mut term = zt.factorial_coeffs(n).delta_x();
        let mut weight = GaussianRational::one();
        while !term.is_zero() {
            series = series.add(&term.scale(&weight));
            weight = &weight * &ratio;
            term = term.delta_x();
        }
        // Printed form: the same sum without the leading i.
        let printed = series.eval_window(&w);
        let corrected = printed.scale(&GaussianRational::i());
        if corrected != direct {
            corrected_failures.push(n);
        }
        if printed != direct {
            printed_failures.push(n);
        }
    }
    Ok(DeltaYReport { max_n, corrected_failures, printed_failures })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommutatorAReport {
    pub n: usize,
    pub mask: usize,
    /// `[δ_x, A] = ½(I + δ_x + δ_x²)` on interior indices.
    pub printed_holds: bool,
    pub printed_first_violation: Option<(usize, usize)>,
    /// `[δ_x, A] = ½(I + δ_x)²` on interior indices.
    pub corrected_holds: bool,
    pub corrected_first_violation: Option<(usize, usize)>,
}

/// `[δ_x, A]` on `N × N` truncations, compared on indices `< N − 2`.
pub fn commutator_a_check(n: usize) -> Result<CommutatorAReport> {
    if n < 6 {
        return Err(Error::Dimension(format!("commutator check needs N >= 6, got {n}")));
    }
    let mask = 2;
    let lhs = OpExpr::bracket(Op::DeltaX, Op::AReZ).matrix(n);
    let dx = OpExpr::op(Op::DeltaX);
    let half = c(1, 2, 0, 1);
    let printed = OpExpr::identity().add(&dx).add(&dx.compose(&dx)).scale(&half).matrix(n);
    let one_dx = OpExpr::identity().add(&dx);
    let corrected = one_dx.compose(&one_dx).scale(&half).matrix(n);
    let pv = lhs.first_difference(&printed, n - mask);
    let cv = lhs.first_difference(&corrected, n - mask);
    Ok(CommutatorAReport {
        n,
        mask,
        printed_holds: pv.is_none(),
        printed_first_violation: pv,
        corrected_holds: cv.is_none(),
        corrected_first_violation: cv,
    })
}

/// A kernel value: the exact partial sum and how much may be missing.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KernelValue {
    #[serde(with = "gr_string")]
    pub value: GaussianRational,
    /// The partial sum is the full series.
    pub exact_total: bool,
    /// Geometric estimate (ratio 1/2) of the omitted tail.
    pub tail_estimate: f64,
}

/// `K(p, q) = Σ_{n ≤ N} ζ_n(p) ζ_n(q)* / (n!)²`.
pub fn kernel_eval(p: (i64, i64), q: (i64, i64), zt: &ZetaTable, n: usize) -> Result<KernelValue> {
    if n > zt.max_degree() {
        return Err(Error::TableTooSmall { required: n, available: zt.max_degree() });
    }
    let mut value = GaussianRational::zero();
    let mut last = GaussianRational::zero();
    for k in 0..=n {
        let f = factorial(k);
        let denom = GaussianRational::from(&f * &f).inv()?;
        last = &(zt.value(k, p.0, p.1)? * &zt.value(k, q.0, q.1)?.conj()) * &denom;
        value += &last;
    }
    let terminates = p.1 == 0 && q.1 == 0 && p.0.min(q.0) >= 0 && p.0.min(q.0) as usize <= n;
    let tail_estimate = if terminates { 0.0 } else { ratio_to_f64(&last.l1_norm()) };
    Ok(KernelValue { value, exact_total: terminates, tail_estimate })
}

/// Gram matrix of a kernel on a point list.
#[derive(Clone, Debug, Serialize)]
pub struct KernelMatrix {
    pub points: Vec<(i64, i64)>,
    pub truncation: usize,
    #[serde(serialize_with = "ser_complex_matrix")]
    pub gram: DMatrix<Complex64>,
    pub min_eigenvalue: f64,
}

fn ser_complex_matrix<S: serde::Serializer>(m: &DMatrix<Complex64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect();
    rows.serialize(s)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_hermitian_eigenvalue(m: &DMatrix<Complex64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let sym = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    SymmetricEigen::new(sym).eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

pub fn kernel_gram(points: &[(i64, i64)], zt: &ZetaTable, n: usize) -> Result<KernelMatrix> {
    let m = points.len();
    let mut gram = DMatrix::from_element(m, m, Complex64::new(0.0, 0.0));
    for i in 0..m {
        for j in i..m {
            let v = kernel_eval(points[i], points[j], zt, n)?.value.to_complex64();
            gram[(i, j)] = v;
            gram[(j, i)] = v.conj();
        }
    }
    let min_eigenvalue = min_hermitian_eigenvalue(&gram);
    Ok(KernelMatrix { points: points.to_vec(), truncation: n, gram, min_eigenvalue })
}

/// `K_F(z,w) = Σ (z w̄)ⁿ / n!` and `K_𝐇(z,w) = Σ (z w̄)ⁿ / (n!)²`, truncated at `N`.
pub fn fock_and_h_kernels(z: Complex64, w: Complex64, n: usize) -> (Complex64, Complex64) {
    let t = z * w.conj();
    let mut kf = Complex64::new(0.0, 0.0);
    let mut kh = Complex64::new(0.0, 0.0);
    let mut pow = Complex64::new(1.0, 0.0);
    let mut fact = 1.0f64;
    for k in 0..=n {
        if k > 0 {
            pow *= t;
            fact *= k as f64;
        }
        kf += pow / fact;
        kh += pow / (fact * fact);
    }
    (kf, kh)
}

#[derive(Clone, Debug, Serialize)]
pub struct FockReport {
    pub truncation: usize,
    pub min_eigenvalue: f64,
    pub psd: bool,
}

/// Gram matrix of `K_F − K_𝐇` on complex points; PSD up to `−1e−10`.
pub fn fock_dominance(points: &[Complex64], n: usize) -> FockReport {
    let m = points.len();
    let gram = DMatrix::from_fn(m, m, |i, j| {
        let (kf, kh) = fock_and_h_kernels(points[i], points[j], n);
        kf - kh
    });
    let min_eigenvalue = min_hermitian_eigenvalue(&gram);
    FockReport { truncation: n, min_eigenvalue, psd: min_eigenvalue >= -1e-10 }
}
