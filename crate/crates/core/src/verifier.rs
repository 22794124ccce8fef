//! Explicit instances of the conic bundle for concrete `m`.
//!
//! `X ⊂ P_Y(E)` is cut out by `F = zᵀ S z` where `S` is the symmetric matrix
//! of sections
//!
//! ```text
//!     ( s1   s2   λ1 )      s_i ∈ H⁰(2D - 2mH)
//! S = ( s2   s3   λ2 )      λ_i ∈ H⁰(2D - mH)
//!     ( λ1   λ2   σ  )      σ   ∈ H⁰(2D)
//! ```
//!
//! Fibers are classified by the exact rank of `S(p)`. Smoothness is audited
//! only at the points where it can fail (rank ≤ 2 fibers and `W = p⁻¹(V) ∩ {z2 = 0}`),
//! so a passing report means "no singular point found at the sampled points",
//! never "X is smooth".

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::coxring::{random_section_where, CoxGrading, DEFAULT_COEFF_RANGE};
use crate::error::{Error, Result};
use crate::linalg::SymMatrix3;
use crate::picard::{ConstructionParams, DivisorClassY};
use crate::poly::Poly;
use crate::univariate::UniPoly;

/// Fiber lines probed per instance.
pub const FIBER_LINES: usize = 20;
/// Chart lines forced through a point of `V`.
pub const V_LINES: usize = 20;
/// Points of `W` checked over each sampled point of `V`.
pub const Z_GRID: [[i64; 3]; 5] = [[1, 0, 0], [0, 1, 0], [1, 1, 0], [1, -1, 0], [1, -2, 0]];

/// Index order of [`SymMatrix3::upper`]: `s1, s2, λ1, s3, λ2, σ`.
const UPPER: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

/// A point of `Y` in Cox coordinates `[x_0..x_{3m}; y0, y1, y2]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxPointY {
    x: Vec<BigRational>,
    y: [BigRational; 3],
}

impl CoxPointY {
    pub fn new(x: Vec<BigRational>, y: [BigRational; 3]) -> Result<Self> {
        if x.iter().all(Zero::is_zero) {
            return Err(Error::InadmissiblePoint("all x-coordinates vanish".into()));
        }
        if y.iter().all(Zero::is_zero) {
            return Err(Error::InadmissiblePoint("all y-coordinates vanish".into()));
        }
        Ok(Self { x, y })
    }

    pub fn from_integers(x: &[i64], y: [i64; 3]) -> Result<Self> {
        let q = |v: i64| BigRational::from_integer(v.into());
        Self::new(x.iter().map(|&v| q(v)).collect(), y.map(q))
    }

    pub fn x(&self) -> &[BigRational] {
        &self.x
    }

    pub fn y(&self) -> &[BigRational; 3] {
        &self.y
    }

    pub fn on_v(&self) -> bool {
        self.y[1].is_zero() && self.y[2].is_zero()
    }

    /// The torus action `x ↦ μx`, `y0 ↦ λy0`, `y_{1,2} ↦ λμ^{-2m} y_{1,2}`.
    pub fn rescale(&self, lambda: &BigRational, mu: &BigRational, params: &ConstructionParams) -> Result<Self> {
        if lambda.is_zero() || mu.is_zero() {
            return Err(Error::Degenerate("torus parameters must be nonzero".into()));
        }
        let fiber = lambda / pow_q(mu, params.fiber_twist());
        Ok(Self {
            x: self.x.iter().map(|v| v * mu).collect(),
            y: [&self.y[0] * lambda, &self.y[1] * &fiber, &self.y[2] * &fiber],
        })
    }

    /// Integer coordinates of a point in the same torus orbit.
    pub fn integer_representative(&self, params: &ConstructionParams) -> Vec<BigInt> {
        let mu = self.x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let scaled = self
            .rescale(&BigRational::one(), &BigRational::from_integer(mu), params)
            .expect("nonzero scaling");
        let lambda = scaled.y.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let scaled = scaled
            .rescale(&BigRational::from_integer(lambda), &BigRational::one(), params)
            .expect("nonzero scaling");
        scaled.x.iter().chain(scaled.y.iter()).map(|v| v.to_integer()).collect()
    }
}

fn pow_q(v: &BigRational, k: i64) -> BigRational {
    (0..k).fold(BigRational::one(), |acc, _| acc * v)
}

impl fmt::Display for CoxPointY {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[BigRational]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        write!(f, "[{};{}]", join(&self.x), join(&self.y))
    }
}

impl Serialize for CoxPointY {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FiberType {
    WholePlane,
    DoubleLine,
    LinePair,
    SmoothConic,
}

impl FiberType {
    pub fn from_rank(rank: usize) -> Self {
        match rank {
            0 => Self::WholePlane,
            1 => Self::DoubleLine,
            2 => Self::LinePair,
            _ => Self::SmoothConic,
        }
    }
}

impl fmt::Display for FiberType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::WholePlane => "WHOLE_PLANE",
            Self::DoubleLine => "DOUBLE_LINE",
            Self::LinePair => "LINE_PAIR",
            Self::SmoothConic => "SMOOTH_CONIC",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberDiagnosis {
    pub rank: usize,
    pub fiber_type: FiberType,
    /// Singular point of the line pair, primitive with positive leading entry.
    #[serde(serialize_with = "ser_opt_vec")]
    pub node: Option<[BigInt; 3]>,
}

impl FiberDiagnosis {
    pub fn of_matrix(s: &SymMatrix3<BigInt>) -> Self {
        let rank = s.rank();
        let node = if rank == 2 { s.kernel_vector_rank2().map(primitive3) } else { None };
        Self { rank, fiber_type: FiberType::from_rank(rank), node }
    }
}

fn primitive3(v: [BigInt; 3]) -> [BigInt; 3] {
    let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return v;
    }
    let sign = v.iter().find(|c| !c.is_zero()).map_or(1, |c| if c.is_negative() { -1 } else { 1 });
    let g = g * sign;
    v.map(|c| c / &g)
}

fn ser_opt_vec<S: Serializer>(v: &Option<[BigInt; 3]>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        None => s.serialize_none(),
        Some(v) => s.collect_seq(v.iter().map(ToString::to_string)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SectionMode {
    /// `s1 = σ′y1`, `s2 = s3 = σ′y2`, `σ = σ′²`, `σ′ = y0`.
    Special,
    /// The special choice plus random terms that keep its shape along `V`.
    Perturbed,
}

/// The matrix `S` of sections, with the partial derivatives of its entries.
#[derive(Debug, Clone)]
pub struct ConicMatrix {
    params: ConstructionParams,
    entries: [Poly<BigInt>; 6],
    /// `σ′`, when the entries were built from it.
    sigma_prime: Option<Poly<BigInt>>,
    /// `partials[v][e] = ∂ entries[e] / ∂ var_v`
    partials: Vec<[Poly<BigInt>; 6]>,
}

impl ConicMatrix {
    /// Entries in the order `s1, s2, λ1, s3, λ2, σ`.
    pub fn from_entries(params: &ConstructionParams, entries: [Poly<BigInt>; 6]) -> Self {
        let nvars = CoxGrading::new(params).nvars();
        let entries = entries.map(|e| if e.nvars() == nvars { e } else { e.extend_vars(nvars) });
        let partials = (0..nvars).map(|v| std::array::from_fn(|e| entries[e].partial(v))).collect();
        Self { params: *params, entries, sigma_prime: None, partials }
    }

    pub fn params(&self) -> &ConstructionParams {
        &self.params
    }

    pub fn entries(&self) -> &[Poly<BigInt>; 6] {
        &self.entries
    }

    pub fn sigma_prime(&self) -> Option<&Poly<BigInt>> {
        self.sigma_prime.as_ref()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly<BigInt> {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        &self.entries[UPPER.iter().position(|&p| p == (i, j)).expect("index in range")]
    }

    /// The same matrix with `σ` replaced.
    pub fn with_sigma(&self, sigma: Poly<BigInt>) -> Self {
        let mut entries = self.entries.clone();
        entries[5] = sigma;
        let mut out = Self::from_entries(&self.params, entries);
        out.sigma_prime = None;
        out
    }

    pub fn term_counts(&self) -> BTreeMap<String, usize> {
        let names = ["s1", "s2", "lambda1", "s3", "lambda2", "sigma"];
        names.iter().zip(&self.entries).map(|(n, e)| (n.to_string(), e.len())).collect()
    }

    /// True iff entry `(i, j)` is homogeneous of degree `c_i + c_j + 2D`
    /// with `c = (-mH, -mH, 0)`.
    pub fn degrees_match(&self) -> bool {
        let grading = CoxGrading::new(&self.params);
        let m = self.params.m();
        let c = [DivisorClassY::new(0, -m), DivisorClassY::new(0, -m), DivisorClassY::ZERO];
        UPPER.iter().zip(&self.entries).all(|(&(i, j), e)| {
            let want = c[i] + c[j] + DivisorClassY::new(2, 0);
            e.terms().all(|(exps, _)| grading.degree_of(exps) == want)
        })
    }

    pub fn eval_at(&self, p: &[BigInt]) -> SymMatrix3<BigInt> {
        SymMatrix3 { upper: std::array::from_fn(|e| self.entries[e].eval(p)) }
    }

    /// `F = zᵀ S z` as a polynomial in the Cox variables followed by `z0, z1, z2`.
    pub fn quadric(&self) -> Poly<BigInt> {
        let n = self.partials.len();
        let mut f = Poly::zero(n + 3);
        for (&(i, j), e) in UPPER.iter().zip(&self.entries) {
            let weight = BigInt::from(if i == j { 1 } else { 2 });
            let mut zz = vec![0; n + 3];
            zz[n + i] += 1;
            zz[n + j] += 1;
            let mono = Poly::monomial(zz, weight);
            f = &f + &(&e.extend_vars(n + 3) * &mono);
        }
        f
    }

    /// `∂S_e/∂v` at `p` for every Cox variable `v`.
    fn jacobian_at(&self, p: &[BigInt]) -> Vec<[BigInt; 6]> {
        self.partials.iter().map(|d| std::array::from_fn(|e| d[e].eval(p))).collect()
    }

    /// Degrees of the entries in the variables selected by `mask`.
    pub fn entry_degrees(&self, mask: &[bool]) -> [u32; 6] {
        std::array::from_fn(|e| self.entries[e].degree_in(mask))
    }

    /// Upper bound for the degree of `det S` in the variables selected by `mask`.
    fn det_degree_bound(&self, mask: &[bool]) -> u32 {
        let deg = self.entry_degrees(mask);
        let d = |i: usize, j: usize| {
            let (i, j) = if i <= j { (i, j) } else { (j, i) };
            deg[UPPER.iter().position(|&p| p == (i, j)).expect("index in range")]
        };
        const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        PERMS.iter().map(|p| d(0, p[0]) + d(1, p[1]) + d(2, p[2])).max().unwrap_or(0)
    }
}

/// Builds `S` from a seed. `λ1, λ2` are general sections of `2D - mH` in
/// both modes; the perturbed mode adds
/// `σ′ = y0 + (terms vanishing on V)`, `s1 = σ′y1 + r1`, `s2 = s3 = σ′y2 + r2`
/// with `r_i ∈ (y1, y2)²`, and `σ = σ′² + (terms vanishing on V)`.
pub fn instantiate_sections(
    params: &ConstructionParams,
    seed: u64,
    mode: SectionMode,
    coeff_range: i64,
) -> Result<ConicMatrix> {
    let g = CoxGrading::new(params);
    let n = g.nvars();
    let m = params.m();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v_order = |e: &[u32]| e[g.y(1)] + e[g.y(2)];
    let lam_cls = DivisorClassY::new(2, -m);
    let lam1 = random_section_where(lam_cls, params, &mut rng, coeff_range, |_| true)?;
    let lam2 = random_section_where(lam_cls, params, &mut rng, coeff_range, |_| true)?;
    let (y0, y1, y2) = (Poly::var(n, g.y(0)), Poly::var(n, g.y(1)), Poly::var(n, g.y(2)));
    let (sigma_prime, r1, r2, rho) = match mode {
        SectionMode::Special => (y0, Poly::zero(n), Poly::zero(n), Poly::zero(n)),
        SectionMode::Perturbed => {
            let extra = random_section_where(DivisorClassY::D, params, &mut rng, coeff_range, |e| v_order(e) >= 1)?;
            let s_cls = DivisorClassY::new(2, -2 * m);
            let r1 = random_section_where(s_cls, params, &mut rng, coeff_range, |e| v_order(e) >= 2)?;
            let r2 = random_section_where(s_cls, params, &mut rng, coeff_range, |e| v_order(e) >= 2)?;
            let rho = random_section_where(DivisorClassY::new(2, 0), params, &mut rng, coeff_range, |e| {
                v_order(e) >= 1
            })?;
            (&y0 + &extra, r1, r2, rho)
        }
    };
    let s1 = &(&sigma_prime * &y1) + &r1;
    let s2 = &(&sigma_prime * &y2) + &r2;
    let sigma = &(&sigma_prime * &sigma_prime) + &rho;
    let mut s = ConicMatrix::from_entries(params, [s1, s2.clone(), lam1, s2, lam2, sigma]);
    s.sigma_prime = Some(sigma_prime);
    Ok(s)
}

pub fn fiber_at(s: &ConicMatrix, p: &CoxPointY) -> Result<FiberDiagnosis> {
    check_dims(s, p)?;
    Ok(FiberDiagnosis::of_matrix(&s.eval_at(&p.integer_representative(&s.params))))
}

fn check_dims(s: &ConicMatrix, p: &CoxPointY) -> Result<()> {
    let n_x = s.params.n_x_vars();
    if p.x.len() != n_x {
        return Err(Error::InadmissiblePoint(format!("expected {n_x} x-coordinates, got {}", p.x.len())));
    }
    Ok(())
}

/// The affine chart `{x_j ≠ 0, y_k ≠ 0, z_l ≠ 0}` used at a point: each index
/// is the coordinate of largest magnitude in the integer representative
/// (first one on ties).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Chart {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}=y{}=z{}=1", self.x, self.y, self.z)
    }
}

/// `∂F/∂v` for every Cox variable, then for `z0, z1, z2`, from the Jacobian
/// of `S` and the value of `S` at the base point.
fn gradient_from(jac: &[[BigInt; 6]], mat: &SymMatrix3<BigInt>, z: &[BigInt; 3]) -> Vec<BigInt> {
    let zz: [BigInt; 6] = std::array::from_fn(|e| {
        let (i, j) = UPPER[e];
        let w = if i == j { 1 } else { 2 };
        &z[i] * &z[j] * w
    });
    let mut out: Vec<BigInt> = jac
        .iter()
        .map(|d| d.iter().zip(&zz).fold(BigInt::zero(), |acc, (v, w)| acc + v * w))
        .collect();
    out.extend(mat.apply(z).into_iter().map(|v| v * 2));
    out
}

fn argmax_abs(v: &[BigInt]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, c) in v.iter().enumerate() {
        if !c.is_zero() && best.is_none_or(|b| c.abs() > v[b].abs()) {
            best = Some(i);
        }
    }
    best
}

/// Gradient of `F` at `(p, z)` in the affine chart around it.
///
/// `F` is homogeneous for the torus of `P(E)`, so whether a partial derivative
/// vanishes does not depend on the representative; the chart derivatives are
/// the Cox partials with the three chart variables left out.
pub fn chart_gradient(s: &ConicMatrix, p: &CoxPointY, z: &[BigInt; 3]) -> Result<(Chart, Vec<BigInt>)> {
    Ok(chart_gradients(s, p, std::slice::from_ref(z))?.pop().expect("one fiber point"))
}

/// [`chart_gradient`] at several fiber points over the same base point.
pub fn chart_gradients(s: &ConicMatrix, p: &CoxPointY, zs: &[[BigInt; 3]]) -> Result<Vec<(Chart, Vec<BigInt>)>> {
    check_dims(s, p)?;
    let pi = p.integer_representative(&s.params);
    let n_x = s.params.n_x_vars();
    let miss = || Error::ChartMissesPoint(p.to_string());
    let (cx, cy) = (argmax_abs(&pi[..n_x]).ok_or_else(miss)?, argmax_abs(&pi[n_x..]).ok_or_else(miss)?);
    let jac = s.jacobian_at(&pi);
    let mat = s.eval_at(&pi);
    zs.iter()
        .map(|z| {
            let chart = Chart { x: cx, y: cy, z: argmax_abs(z).ok_or_else(miss)? };
            let skip = [chart.x, n_x + chart.y, pi.len() + chart.z];
            let grad = gradient_from(&jac, &mat, z)
                .into_iter()
                .enumerate()
                .filter(|(i, _)| !skip.contains(i))
                .map(|(_, v)| v)
                .collect();
            Ok((chart, grad))
        })
        .collect()
}

/// Nonvanishing of `dF` at a point of `W = p⁻¹(V) ∩ {z2 = 0}`.
pub fn check_smooth_at_v_point(s: &ConicMatrix, p: &CoxPointY, z: &[BigInt; 3]) -> Result<bool> {
    Ok(check_smooth_on_w(s, p, std::slice::from_ref(z))?[0])
}

/// [`check_smooth_at_v_point`] for several fiber points over one point of `V`.
pub fn check_smooth_on_w(s: &ConicMatrix, p: &CoxPointY, zs: &[[BigInt; 3]]) -> Result<Vec<bool>> {
    if !p.on_v() {
        return Err(Error::InadmissiblePoint(format!("{p} is not on V")));
    }
    if let Some(z) = zs.iter().find(|z| !z[2].is_zero() || z.iter().all(Zero::is_zero)) {
        return Err(Error::InadmissiblePoint(format!("fiber point {z:?} is not on W")));
    }
    Ok(chart_gradients(s, p, zs)?.into_iter().map(|(_, g)| g.iter().any(|v| !v.is_zero())).collect())
}

/// Nonvanishing of `dF` at the node of a line-pair fiber.
pub fn check_smooth_at_node(s: &ConicMatrix, diag: &FiberDiagnosis, p: &CoxPointY) -> Result<bool> {
    let node = match (&diag.node, diag.rank) {
        (Some(node), 2) => node,
        _ => return Err(Error::RankMismatch { expected: 2, found: diag.rank }),
    };
    let (_, grad) = chart_gradient(s, p, node)?;
    Ok(grad.iter().any(|v| !v.is_zero()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymbolicIdentity {
    /// In the Cox variables with `z` homogeneous.
    pub homogeneous: bool,
    pub chart_z0: bool,
    pub chart_z1: bool,
}

impl SymbolicIdentity {
    pub fn holds(&self) -> bool {
        self.homogeneous && self.chart_z0 && self.chart_z1
    }
}

/// Exact test of `dF|_W = σ′|_V (z0² dy1 + z1(2z0 + z1) dy2)`.
///
/// Every partial derivative of `F` is restricted to `y1 = y2 = z2 = 0` and
/// compared with the displayed formula, homogeneously and after setting
/// `z0 = 1` or `z1 = 1`. Matrices without a `σ′` fail.
pub fn symbolic_df_on_w(s: &ConicMatrix) -> SymbolicIdentity {
    let Some(sigma_prime) = &s.sigma_prime else {
        return SymbolicIdentity { homogeneous: false, chart_z0: false, chart_z1: false };
    };
    let g = CoxGrading::new(&s.params);
    let n = g.nvars();
    let (z0, z1, z2) = (n, n + 1, n + 2);
    let on_w = |p: &Poly<BigInt>| {
        p.substitute(g.y(1), &BigInt::zero())
            .substitute(g.y(2), &BigInt::zero())
            .substitute(z2, &BigInt::zero())
    };
    let f = s.quadric();
    let sp = on_w(&sigma_prime.extend_vars(n + 3));
    let zv = |i| Poly::var(n + 3, i);
    let two = Poly::constant(n + 3, BigInt::from(2));
    let coeff_y1 = &zv(z0) * &zv(z0);
    let coeff_y2 = &zv(z1) * &(&(&two * &zv(z0)) + &zv(z1));
    let expected: Vec<Poly<BigInt>> = (0..n + 3)
        .map(|v| {
            if v == g.y(1) {
                &sp * &coeff_y1
            } else if v == g.y(2) {
                &sp * &coeff_y2
            } else {
                Poly::zero(n + 3)
            }
        })
        .collect();
    let actual: Vec<Poly<BigInt>> = (0..n + 3).map(|v| on_w(&f.partial(v))).collect();
    let in_chart = |var: usize| {
        actual
            .iter()
            .zip(&expected)
            .all(|(a, e)| a.substitute(var, &BigInt::one()) == e.substitute(var, &BigInt::one()))
    };
    SymbolicIdentity { homogeneous: actual == expected, chart_z0: in_chart(z0), chart_z1: in_chart(z1) }
}

/// `t ↦ base + t·direction` in Cox coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub base: Vec<BigInt>,
    pub direction: Vec<BigInt>,
}

impl Line {
    pub fn at(&self, t: &BigInt) -> Vec<BigInt> {
        self.base.iter().zip(&self.direction).map(|(b, d)| b + d * t).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineRestriction {
    pub degree: usize,
    pub squarefree: bool,
}

/// `det S` restricted to a line, by exact interpolation at integer nodes.
pub fn restrict_det_to_line(s: &ConicMatrix, line: &Line) -> Result<UniPoly<BigRational>> {
    let moving: Vec<bool> = line.direction.iter().map(|d| !d.is_zero()).collect();
    let bound = s.det_degree_bound(&moving) as i64;
    let ts: Vec<BigRational> = (0..=bound).map(|t| BigRational::from_integer(t.into())).collect();
    let ys: Vec<BigRational> = (0..=bound)
        .map(|t| BigRational::from_integer(s.eval_at(&line.at(&BigInt::from(t))).det()))
        .collect();
    let poly = UniPoly::interpolate(&ts, &ys);
    if poly.is_zero() {
        return Err(Error::DiscriminantVanishesOnLine);
    }
    Ok(poly)
}

/// Degree of `det S` on a line in a fiber of `Y → P^{3m}`, as a binary form:
/// with `y = s·a + t·b`, the affine degree in `t` plus the multiplicity of the
/// root at `t = ∞`. Errors if the line moves any `x`-coordinate.
pub fn form_degree_on_line(s: &ConicMatrix, line: &Line) -> Result<usize> {
    let n_x = s.params.n_x_vars();
    if line.direction[..n_x].iter().any(|d| !d.is_zero()) {
        return Err(Error::Degenerate("not a line in a fiber: x moves".into()));
    }
    let affine = restrict_det_to_line(s, line)?;
    let mut swapped = line.clone();
    swapped.base[n_x..].clone_from_slice(&line.direction[n_x..]);
    swapped.direction[n_x..].clone_from_slice(&line.base[n_x..]);
    let at_infinity = restrict_det_to_line(s, &swapped)?;
    let order = at_infinity.coeffs().iter().position(|c| !c.is_zero()).unwrap_or(0);
    Ok(affine.degree().unwrap_or(0) + order)
}

pub fn discriminant_on_line(s: &ConicMatrix, line: &Line) -> Result<LineRestriction> {
    let poly = restrict_det_to_line(s, line)?;
    Ok(LineRestriction { degree: poly.degree().unwrap_or(0), squarefree: poly.to_integer_primitive().is_squarefree() })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceConfig {
    pub seed: u64,
    pub samples: usize,
    pub mode: SectionMode,
    pub coeff_range: i64,
    /// Sample coordinates are integers in `[-point_range, point_range]`.
    pub point_range: i64,
}

impl InstanceConfig {
    pub fn new(seed: u64, samples: usize, mode: SectionMode) -> Self {
        Self { seed, samples, mode, coeff_range: DEFAULT_COEFF_RANGE, point_range: 100 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VPointRecord {
    pub index: usize,
    pub point: CoxPointY,
    pub fiber: FiberDiagnosis,
    pub sigma_nonzero: bool,
    pub det_vanishes: bool,
    /// Smoothness at `(p, z)` for each `z` in [`Z_GRID`].
    pub w_smooth: Vec<bool>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointRecord {
    pub index: usize,
    pub point: CoxPointY,
    pub fiber: FiberDiagnosis,
    /// Present when the fiber is a line pair.
    pub node_smooth: Option<bool>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineRecord {
    pub index: usize,
    pub line: String,
    pub resamples: usize,
    pub degree: Option<usize>,
    pub squarefree: Option<bool>,
    pub pass: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Tallies {
    pub v_fiber_types: BTreeMap<FiberType, usize>,
    pub sigma_nonzero_on_v: usize,
    pub w_checks: usize,
    pub w_smooth: usize,
    pub generic_fiber_types: BTreeMap<FiberType, usize>,
    pub node_checks: usize,
    pub node_smooth: usize,
    pub chart_lines: usize,
    pub chart_lines_squarefree: usize,
    pub v_lines: usize,
    pub v_lines_not_squarefree: usize,
    pub fiber_lines: usize,
    pub fiber_lines_degree_6: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceReport {
    pub m: i64,
    pub config: InstanceConfig,
    pub section_terms: BTreeMap<String, usize>,
    pub degrees_match: bool,
    pub symbolic_identity: SymbolicIdentity,
    pub tallies: Tallies,
    pub audit: String,
    pub failures: Vec<String>,
    pub pass: bool,
    pub v_points: Vec<VPointRecord>,
    pub generic_points: Vec<PointRecord>,
    /// Points of `{y0 = 0}`, where the special sections give line pairs.
    pub node_probes: Vec<PointRecord>,
    pub chart_lines: Vec<LineRecord>,
    pub v_lines: Vec<LineRecord>,
    pub fiber_lines: Vec<LineRecord>,
}

struct Sampler<'a> {
    rng: ChaCha8Rng,
    range: i64,
    grading: &'a CoxGrading,
}

impl Sampler<'_> {
    fn int(&mut self) -> i64 {
        self.rng.gen_range(-self.range..=self.range)
    }

    fn nonzero(&mut self) -> i64 {
        loop {
            let v = self.int();
            if v != 0 {
                return v;
            }
        }
    }

    fn x(&mut self) -> Vec<i64> {
        loop {
            let x: Vec<i64> = (0..self.grading.n_x()).map(|_| self.int()).collect();
            if x.iter().any(|&v| v != 0) {
                return x;
            }
        }
    }

    fn point(&mut self, y: impl Fn(&mut Self) -> [i64; 3]) -> CoxPointY {
        loop {
            let x = self.x();
            let y = y(self);
            if let Ok(p) = CoxPointY::from_integers(&x, y) {
                return p;
            }
        }
    }

    fn vec(&mut self, n: usize) -> Vec<BigInt> {
        (0..n).map(|_| BigInt::from(self.int())).collect()
    }

    /// A line in the chart `x_j = 1, y0 = 1`, optionally through `V` at `t = 0`.
    fn chart_line(&mut self, through_v: bool) -> Line {
        let g = self.grading;
        let n = g.nvars();
        let j = self.rng.gen_range(0..g.n_x());
        let mut base = self.vec(n);
        let mut direction = self.vec(n);
        for v in [g.x(j), g.y(0)] {
            base[v] = BigInt::one();
            direction[v] = BigInt::zero();
        }
        if through_v {
            base[g.y(1)] = BigInt::zero();
            base[g.y(2)] = BigInt::zero();
            while direction[g.y(1)].is_zero() && direction[g.y(2)].is_zero() {
                direction[g.y(1)] = BigInt::from(self.int());
                direction[g.y(2)] = BigInt::from(self.int());
            }
        }
        Line { base, direction }
    }

    /// A line in the fiber `π⁻¹(x)`: `x` fixed, `y` moving in a pencil.
    fn fiber_line(&mut self) -> Line {
        let g = self.grading;
        let mut base: Vec<BigInt> = self.x().into_iter().map(BigInt::from).collect();
        let mut direction = vec![BigInt::zero(); g.n_x()];
        base.extend(self.vec(3));
        direction.extend(self.vec(3));
        Line { base, direction }
    }
}

fn describe_line(line: &Line) -> String {
    let join = |v: &[BigInt]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
    format!("[{}] + t[{}]", join(&line.base), join(&line.direction))
}

/// Probes `det S` on lines from `draw`, redrawing while it vanishes identically.
fn probe_lines(
    s: &ConicMatrix,
    count: usize,
    mut draw: impl FnMut() -> Line,
    measure: impl Fn(&ConicMatrix, &Line) -> Result<LineRestriction>,
    accept: impl Fn(&LineRestriction) -> bool,
) -> Vec<LineRecord> {
    const MAX_RESAMPLES: usize = 10;
    (0..count)
        .map(|index| {
            let mut resamples = 0;
            loop {
                let line = draw();
                match measure(s, &line) {
                    Ok(r) => {
                        return LineRecord {
                            index,
                            line: describe_line(&line),
                            resamples,
                            degree: Some(r.degree),
                            squarefree: Some(r.squarefree),
                            pass: accept(&r),
                        }
                    }
                    Err(_) if resamples < MAX_RESAMPLES => resamples += 1,
                    Err(_) => {
                        return LineRecord {
                            index,
                            line: describe_line(&line),
                            resamples,
                            degree: None,
                            squarefree: None,
                            pass: false,
                        }
                    }
                }
            }
        })
        .collect()
}

/// Instantiates `S` and runs every pointwise check.
pub fn run_instance(params: &ConstructionParams, config: &InstanceConfig) -> Result<InstanceReport> {
    if config.samples == 0 {
        return Err(Error::Degenerate("at least one sample is required".into()));
    }
    let s = instantiate_sections(params, config.seed, config.mode, config.coeff_range)?;
    run_instance_with(params, config, &s)
}

/// As [`run_instance`], for a given matrix.
pub fn run_instance_with(params: &ConstructionParams, config: &InstanceConfig, s: &ConicMatrix) -> Result<InstanceReport> {
    let grading = CoxGrading::new(params);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(1);
    let mut sampler = Sampler { rng, range: config.point_range.max(1), grading: &grading };
    let mut tallies = Tallies::default();
    let mut failures = Vec::new();
    let n = config.samples;

    let z_grid: Vec<[BigInt; 3]> = Z_GRID.iter().map(|z| z.map(BigInt::from)).collect();
    let mut v_points = Vec::with_capacity(n);
    for index in 0..n {
        let point = sampler.point(|s| [s.nonzero(), 0, 0]);
        let pi = point.integer_representative(params);
        let mat = s.eval_at(&pi);
        let fiber = FiberDiagnosis::of_matrix(&mat);
        let sigma_nonzero = !mat.get(2, 2).is_zero();
        let det_vanishes = mat.det().is_zero();
        let w_smooth = check_smooth_on_w(s, &point, &z_grid).unwrap_or_else(|_| vec![false; z_grid.len()]);
        *tallies.v_fiber_types.entry(fiber.fiber_type).or_default() += 1;
        tallies.sigma_nonzero_on_v += usize::from(sigma_nonzero);
        tallies.w_checks += w_smooth.len();
        tallies.w_smooth += w_smooth.iter().filter(|&&b| b).count();
        let pass = fiber.fiber_type == FiberType::DoubleLine && sigma_nonzero && det_vanishes && w_smooth.iter().all(|&b| b);
        if !pass {
            failures.push(format!("V point #{index} {point}: {} sigma_nonzero={sigma_nonzero} w_smooth={w_smooth:?}", fiber.fiber_type));
        }
        v_points.push(VPointRecord { index, point, fiber, sigma_nonzero, det_vanishes, w_smooth, pass });
    }

    let diagnose = |index: usize, point: CoxPointY, tallies: &mut Tallies| {
        let fiber = fiber_at(s, &point).expect("sampled points are admissible");
        let node_smooth = (fiber.rank == 2).then(|| check_smooth_at_node(s, &fiber, &point).unwrap_or(false));
        if let Some(ok) = node_smooth {
            tallies.node_checks += 1;
            tallies.node_smooth += usize::from(ok);
        }
        PointRecord { index, point, fiber, node_smooth, pass: false }
    };

    let mut generic_points = Vec::with_capacity(n);
    for index in 0..n {
        let point = sampler.point(|s| [s.int(), s.int(), s.int()]);
        let mut rec = diagnose(index, point, &mut tallies);
        *tallies.generic_fiber_types.entry(rec.fiber.fiber_type).or_default() += 1;
        rec.pass = rec.fiber.rank == 3 || rec.node_smooth == Some(true);
        if !rec.pass {
            failures.push(format!("generic point #{index} {}: {} node_smooth={:?}", rec.point, rec.fiber.fiber_type, rec.node_smooth));
        }
        generic_points.push(rec);
    }

    let mut node_probes = Vec::new();
    if config.mode == SectionMode::Special && s.sigma_prime.is_some() {
        for index in 0..n {
            let point = sampler.point(|s| [0, s.nonzero(), s.nonzero()]);
            let mut rec = diagnose(index, point, &mut tallies);
            rec.pass = rec.node_smooth == Some(true);
            if !rec.pass {
                failures.push(format!("node probe #{index} {}: {} node_smooth={:?}", rec.point, rec.fiber.fiber_type, rec.node_smooth));
            }
            node_probes.push(rec);
        }
    }

    let chart_lines = probe_lines(s, n, || sampler.chart_line(false), discriminant_on_line, |r| r.squarefree);
    let v_lines = probe_lines(s, V_LINES, || sampler.chart_line(true), discriminant_on_line, |r| !r.squarefree);
    let on_fiber = |s: &ConicMatrix, line: &Line| {
        let r = discriminant_on_line(s, line)?;
        Ok(LineRestriction { degree: form_degree_on_line(s, line)?, ..r })
    };
    let fiber_lines = probe_lines(s, FIBER_LINES, || sampler.fiber_line(), on_fiber, |r| r.degree == 6);
    tallies.chart_lines = chart_lines.len();
    tallies.chart_lines_squarefree = chart_lines.iter().filter(|r| r.squarefree == Some(true)).count();
    tallies.v_lines = v_lines.len();
    tallies.v_lines_not_squarefree = v_lines.iter().filter(|r| r.squarefree == Some(false)).count();
    tallies.fiber_lines = fiber_lines.len();
    tallies.fiber_lines_degree_6 = fiber_lines.iter().filter(|r| r.degree == Some(6)).count();
    for (label, records) in [("chart line", &chart_lines), ("V line", &v_lines), ("fiber line", &fiber_lines)] {
        for r in records.iter().filter(|r| !r.pass) {
            failures.push(format!(
                "{label} #{} {}: degree={:?} squarefree={:?}",
                r.index, r.line, r.degree, r.squarefree
            ));
        }
    }

    let degrees_match = s.degrees_match();
    if !degrees_match {
        failures.push("entries of S do not have the Sym2 degree pattern".into());
    }
    let symbolic_identity = symbolic_df_on_w(s);
    if !symbolic_identity.holds() {
        failures.push(format!("dF|_W identity fails: {symbolic_identity:?}"));
    }

    let mut required = vec![("V points", v_points.len()), ("W checks", tallies.w_checks), ("generic points", generic_points.len())];
    required.extend([("chart lines", tallies.chart_lines), ("fiber lines", tallies.fiber_lines), ("V lines", tallies.v_lines)]);
    if config.mode == SectionMode::Special {
        required.push(("node checks", tallies.node_checks));
    }
    for (label, count) in required {
        if count == 0 {
            failures.push(format!("no {label} were checked"));
        }
    }

    let at_risk = tallies.w_checks + tallies.node_checks;
    let singular = (tallies.w_checks - tallies.w_smooth) + (tallies.node_checks - tallies.node_smooth);
    let audit = if singular == 0 {
        format!("no singular point found at {at_risk} sampled at-risk points")
    } else {
        format!("{singular} singular points found at {at_risk} sampled at-risk points")
    };

    Ok(InstanceReport {
        m: params.m(),
        config: config.clone(),
        section_terms: s.term_counts(),
        degrees_match,
        symbolic_identity,
        tallies,
        audit,
        pass: failures.is_empty(),
        failures,
        v_points,
        generic_points,
        node_probes,
        chart_lines,
        v_lines,
        fiber_lines,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(m: i64) -> ConstructionParams {
        ConstructionParams::new(m).unwrap()
    }

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn special(m: i64) -> ConicMatrix {
        instantiate_sections(&params(m), 7, SectionMode::Special, 100).unwrap()
    }

    fn v_point(m: i64, y0: i64) -> CoxPointY {
        let n = params(m).n_x_vars();
        CoxPointY::from_integers(&(1..=n as i64).collect::<Vec<_>>(), [y0, 0, 0]).unwrap()
    }

    #[test]
    fn admissibility() {
        assert!(CoxPointY::from_integers(&[0, 0], [1, 0, 0]).is_err());
        assert!(CoxPointY::from_integers(&[1, 0], [0, 0, 0]).is_err());
        let p = CoxPointY::from_integers(&[1, 0], [2, 0, 0]).unwrap();
        assert!(p.on_v());
        assert!(!CoxPointY::from_integers(&[1, 0], [0, 0, 3]).unwrap().on_v());
    }

    #[test]
    fn integer_representative_clears_denominators() {
        let p = params(2);
        let x: Vec<_> = (0..7).map(|i| q(i + 1, 2 + i % 3)).collect();
        let pt = CoxPointY::new(x, [q(1, 3), q(5, 7), q(-1, 2)]).unwrap();
        let r = pt.integer_representative(&p);
        assert_eq!(r.len(), 10);
        let back = CoxPointY::new(
            r[..7].iter().cloned().map(BigRational::from_integer).collect(),
            std::array::from_fn(|k| BigRational::from_integer(r[7 + k].clone())),
        )
        .unwrap();
        // same orbit: ratios x_i/x_0 agree, and y0^{?} invariants agree
        for i in 1..7 {
            assert_eq!(&back.x()[i] / &back.x()[0], &pt.x()[i] / &pt.x()[0]);
        }
        let inv = |p: &CoxPointY| &p.y()[1] * pow_q(&p.x()[0], 4) / &p.y()[0];
        assert_eq!(inv(&back), inv(&pt));
    }

    #[test]
    fn special_sections_have_the_sym2_pattern() {
        assert!(special(3).degrees_match());
        let s = special(2);
        assert!(s.degrees_match());
        let pert = instantiate_sections(&params(2), 7, SectionMode::Perturbed, 100).unwrap();
        assert!(pert.degrees_match());
        assert_eq!(s.entries()[2], pert.entries()[2]);
    }

    #[test]
    fn sections_restricted_to_v() {
        for mode in [SectionMode::Special, SectionMode::Perturbed] {
            let s = instantiate_sections(&params(2), 3, mode, 100).unwrap();
            let p = v_point(2, 1).integer_representative(&params(2));
            let mat = s.eval_at(&p);
            for (i, j) in [(0, 0), (0, 1), (1, 1), (0, 2), (1, 2)] {
                assert!(mat.get(i, j).is_zero(), "{mode:?} entry ({i},{j})");
            }
            assert_eq!(mat.get(2, 2), &bi(1));
        }
    }

    #[test]
    fn fibers_over_v_are_double_lines() {
        let s = special(2);
        let d = fiber_at(&s, &v_point(2, 3)).unwrap();
        assert_eq!(d.fiber_type, FiberType::DoubleLine);
        assert!(d.node.is_none());
        let generic = CoxPointY::from_integers(&[1, -2, 3, 5, 0, 7, 1], [2, 3, -1]).unwrap();
        assert_eq!(fiber_at(&s, &generic).unwrap().fiber_type, FiberType::SmoothConic);
        assert!(fiber_at(&s, &CoxPointY::from_integers(&[1, 2], [1, 0, 0]).unwrap()).is_err());
    }

    #[test]
    fn identity_matrix_hook() {
        let d = FiberDiagnosis::of_matrix(&SymMatrix3::identity());
        assert_eq!(d.fiber_type, FiberType::SmoothConic);
        assert!(d.node.is_none());
    }

    #[test]
    fn w_gradient_on_the_z_grid() {
        let s = special(2);
        let p = v_point(2, 1);
        for z in Z_GRID {
            assert!(check_smooth_at_v_point(&s, &p, &z.map(bi)).unwrap(), "z = {z:?}");
        }
        // the cross-term cancellation at z = (1, -2, 0) leaves only the dy1 direction
        let (chart, grad) = chart_gradient(&s, &p, &[bi(1), bi(-2), bi(0)]).unwrap();
        assert_eq!(chart, Chart { x: 6, y: 0, z: 1 });
        let g = CoxGrading::new(&params(2));
        // x6 and y0 are chart variables, so y1 sits two slots earlier
        assert_eq!(grad[g.y(1) - 2], bi(1));
        assert_eq!(grad[g.y(2) - 2], bi(0));
        assert!(check_smooth_at_v_point(&s, &p, &[bi(0), bi(0), bi(1)]).is_err());
        let off_v = CoxPointY::from_integers(&[1; 7], [1, 1, 0]).unwrap();
        assert!(check_smooth_at_v_point(&s, &off_v, &[bi(1), bi(0), bi(0)]).is_err());
    }

    #[test]
    fn line_pairs_over_y0_divisor() {
        let s = special(2);
        let p = CoxPointY::from_integers(&[2, 1, -1, 3, 0, 1, 5], [0, 4, -3]).unwrap();
        let d = fiber_at(&s, &p).unwrap();
        assert_eq!(d.fiber_type, FiberType::LinePair);
        let node = d.node.clone().unwrap();
        assert_eq!(node[2], bi(0));
        assert!(check_smooth_at_node(&s, &d, &p).unwrap());
        let smooth = fiber_at(&s, &CoxPointY::from_integers(&[1; 7], [1, 2, 3]).unwrap()).unwrap();
        assert_eq!(check_smooth_at_node(&s, &smooth, &p), Err(Error::RankMismatch { expected: 2, found: 3 }));
    }

    #[test]
    fn node_check_negative_control() {
        // F = y0²(z0² - z1²) + y1² z2²: the line pair over y1 = 0 is singular at its node
        let p2 = params(2);
        let g = CoxGrading::new(&p2);
        let n = g.nvars();
        let y0 = Poly::var(n, g.y(0));
        let y1 = Poly::var(n, g.y(1));
        let sq = &y0 * &y0;
        let s = ConicMatrix::from_entries(
            &p2,
            [sq.clone(), Poly::zero(n), Poly::zero(n), -&sq, Poly::zero(n), &y1 * &y1],
        );
        let p = CoxPointY::from_integers(&[1; 7], [1, 0, 5]).unwrap();
        let d = fiber_at(&s, &p).unwrap();
        assert_eq!(d.node, Some([bi(0), bi(0), bi(1)]));
        assert!(!check_smooth_at_node(&s, &d, &p).unwrap());
    }

    #[test]
    fn symbolic_identity_on_w() {
        assert!(symbolic_df_on_w(&special(2)).holds());
        let pert = instantiate_sections(&params(2), 11, SectionMode::Perturbed, 100).unwrap();
        assert!(symbolic_df_on_w(&pert).holds());
        // breaking s1 = σ′y1 breaks the identity
        let s = special(2);
        let mut entries = s.entries().clone();
        entries[0] = entries[0].scale(&bi(2));
        let broken = ConicMatrix { sigma_prime: s.sigma_prime.clone(), ..ConicMatrix::from_entries(&params(2), entries) };
        assert!(!symbolic_df_on_w(&broken).holds());
        assert!(!symbolic_df_on_w(&ConicMatrix::from_entries(&params(2), s.entries().clone())).holds());
    }

    #[test]
    fn discriminant_on_lines() {
        let p = params(2);
        let s = special(2);
        let g = CoxGrading::new(&p);
        let mut base: Vec<BigInt> = [3, -1, 2, 0, 5, 1, -4].map(bi).to_vec();
        base.extend([bi(2), bi(1), bi(-3)]);
        let mut dir = vec![bi(0); 7];
        dir.extend([bi(1), bi(4), bi(2)]);
        let fiber = Line { base: base.clone(), direction: dir };
        assert_eq!(discriminant_on_line(&s, &fiber).unwrap().degree, 6);

        // direction on {y0 = 0} ⊂ Δ: the affine degree drops, the form degree does not
        let mut tangent = fiber.clone();
        tangent.direction[7] = bi(0);
        assert_eq!(discriminant_on_line(&s, &tangent).unwrap().degree, 5);
        assert_eq!(form_degree_on_line(&s, &tangent).unwrap(), 6);

        let chart = Line {
            base: [1, 2, -3, 4, 1, -1, 2, 1, 3, -2].map(bi).to_vec(),
            direction: [0, 1, 2, -1, 3, 1, 1, 0, 2, 5].map(bi).to_vec(),
        };
        assert!(discriminant_on_line(&s, &chart).unwrap().squarefree);

        let mut through_v = chart.clone();
        through_v.base[g.y(1)] = bi(0);
        through_v.base[g.y(2)] = bi(0);
        assert!(!discriminant_on_line(&s, &through_v).unwrap().squarefree);

        let zero = ConicMatrix::from_entries(&p, std::array::from_fn(|_| Poly::zero(g.nvars())));
        assert_eq!(discriminant_on_line(&zero, &chart), Err(Error::DiscriminantVanishesOnLine));
    }

    #[test]
    fn small_instance_passes_in_both_modes() {
        for mode in [SectionMode::Special, SectionMode::Perturbed] {
            let report = run_instance(&params(2), &InstanceConfig::new(5, 4, mode)).unwrap();
            assert!(report.pass, "{mode:?}: {:?}", report.failures);
            assert_eq!(report.tallies.v_fiber_types.get(&FiberType::DoubleLine), Some(&4));
        }
        assert!(run_instance(&params(2), &InstanceConfig::new(5, 0, SectionMode::Special)).is_err());
    }

    #[test]
    fn zero_sigma_hook_fails_with_whole_planes() {
        let p = params(2);
        let s = special(2).with_sigma(Poly::zero(CoxGrading::new(&p).nvars()));
        let report = run_instance_with(&p, &InstanceConfig::new(1, 3, SectionMode::Special), &s).unwrap();
        assert!(!report.pass);
        assert_eq!(report.tallies.v_fiber_types.get(&FiberType::WholePlane), Some(&3));
    }

    #[test]
    fn report_is_deterministic() {
        let cfg = InstanceConfig::new(9, 3, SectionMode::Perturbed);
        let a = serde_json::to_string(&run_instance(&params(2), &cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&run_instance(&params(2), &cfg).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    fn arb_q() -> impl Strategy<Value = BigRational> {
        (-20i64..=20, 1i64..=6).prop_filter_map("nonzero", |(n, d)| (n != 0).then(|| q(n, d)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn rank_is_torus_invariant(
            x in prop::collection::vec(-9i64..=9, 7),
            y in prop::array::uniform3(-9i64..=9),
            lambda in arb_q(),
            mu in arb_q(),
        ) {
            let p = params(2);
            let Ok(pt) = CoxPointY::from_integers(&x, y) else { return Ok(()) };
            let s = special(2);
            let moved = pt.rescale(&lambda, &mu, &p).unwrap();
            prop_assert_eq!(fiber_at(&s, &pt).unwrap().rank, fiber_at(&s, &moved).unwrap().rank);
        }

        #[test]
        fn det_vanishes_on_v(x in prop::collection::vec(-9i64..=9, 7), y0 in 1i64..=50, seed in 0u64..4) {
            let Ok(pt) = CoxPointY::from_integers(&x, [y0, 0, 0]) else { return Ok(()) };
            let s = instantiate_sections(&params(2), seed, SectionMode::Perturbed, 100).unwrap();
            prop_assert!(s.eval_at(&pt.integer_representative(&params(2))).det().is_zero());
        }
    }
}
