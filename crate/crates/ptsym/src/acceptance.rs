//! Pass/fail checks of every computation against independent reference
//! values. Shared by the `verify` subcommand and the acceptance test.

use std::error::Error;
use std::f64::consts::PI;
use std::fmt;
use std::time::Instant;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::gauss::rat;
use crate::algebra::{DiffOp, Factor, GaussRational, HermiteSeries, MultiIndex, Word};
use crate::c_operator::{build_c, indices_up_to};
use crate::closed_forms::{
    anharmonic_energy, anharmonic_series, zeta_closed, zeta_closed_with, AnharmonicParams, ZetaInput, ZetaPrefactor,
};
use crate::matrix_model::{self, mat_mul, mat_vec, max_diff, pt_inner, Phase, TwoLevelModel, Vec2};
use crate::perturbation::degenerate::even_class;
use crate::perturbation::poly::{RatPoly, RootValue};
use crate::perturbation::{degenerate_block, first_order_state, second_order_state_ix3, ModelId};
use crate::spectral::reconstruct::project_function;
use crate::spectral::{
    completeness_residual, diagonalize, kernel_consistency, numeric_c_matrix, perturbative_match, pt_norm,
    reconstruct_operators, zeta_numeric, HamiltonianFamily,
};
use crate::spectral::matching::MATCH_GRID;

type Outcome = Result<(bool, String), Box<dyn Error>>;

/// Checks that fail for a documented reason; `(id, reason)`.
pub const KNOWN_UNATTAINABLE: &[(&str, &str)] = &[
    (
        "8",
        "at eps = 1 only about 30 levels converge in double precision, and the retained eigenvectors \
         are too far from orthogonal for P^2 = 1 or monotone completeness at that size",
    ),
    ("2-ix2y-expanded", "the expanded reference form of the ix^2y kernel drops a -2/3 y term present in delta_xy + delta_x'y'"),
    ("2-exp-sign", "the reference exponential form flips the sign of the x p x term relative to the series form"),
    ("6-alternate", "the alternate cos(eps pi/(4 + 2 eps)) prefactor disagrees with the numerical spectrum"),
    ("quartic-first-order", "the second-order term at k = 2, nu = 0.01 is 7.7e-3, above the 5e-3 tolerance"),
];

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub seconds: f64,
    pub detail: String,
}

impl CriterionReport {
    pub fn known_unattainable(&self) -> Option<&'static str> {
        KNOWN_UNATTAINABLE.iter().find(|(id, _)| *id == self.id).map(|(_, why)| *why)
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match (self.passed, self.known_unattainable().is_some()) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        write!(f, "{tag:<12} {:<20} {:<44} {:>8.2}s  {}", self.id, self.name, self.seconds, self.detail)
    }
}

fn run(id: &'static str, name: &'static str, f: impl FnOnce() -> Outcome) -> CriterionReport {
    let start = Instant::now();
    let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionReport { id, name, passed, seconds: start.elapsed().as_secs_f64(), detail }
}

fn series(arity: usize, terms: Vec<(Vec<i64>, BigRational)>) -> Result<HermiteSeries, Box<dyn Error>> {
    let mut kept = Vec::new();
    for (idx, c) in terms {
        if idx.iter().any(|&k| k < 0) {
            if !c.is_zero() {
                return Err(format!("nonzero coefficient at negative index {idx:?}").into());
            }
            continue;
        }
        let idx: Vec<u32> = idx.iter().map(|&k| k as u32).collect();
        kept.push((MultiIndex::new(&idx), GaussRational::real(c)));
    }
    Ok(HermiteSeries::from_terms(arity, kept)?)
}

fn falling(n: i64, k: i64) -> i64 {
    (0..k).map(|j| n - j).product()
}

fn reference_ip(n: i64) -> Vec<(Vec<i64>, BigRational)> {
    vec![
        (vec![n + 3], rat(1, 24)),
        (vec![n + 1], rat(3 * (n + 1), 4)),
        (vec![n - 1], rat(-3 * n * n, 2)),
        (vec![n - 3], rat(-falling(n, 3), 3)),
    ]
}

fn reference_q(n: i64) -> Vec<(Vec<i64>, BigRational)> {
    vec![
        (vec![n + 6], rat(-1, 1152)),
        (vec![n + 4], rat(-(4 * n + 7), 128)),
        (vec![n + 2], rat(-(7 * n * n + 33 * n + 27), 32)),
        (vec![n - 2], rat(-falling(n, 2) * (7 * n * n - 19 * n + 1), 8)),
        (vec![n - 4], rat(-falling(n, 4) * (4 * n - 3), 8)),
        (vec![n - 6], rat(-falling(n, 6), 18)),
    ]
}

fn reference_ip_mn(m: i64, n: i64) -> Vec<(Vec<i64>, BigRational)> {
    vec![
        (vec![m + 2, n + 1], rat(1, 24)),
        (vec![m + 2, n - 1], rat(n, 4)),
        (vec![m, n + 1], rat(2 * m + 1, 4)),
        (vec![m, n - 1], rat(-(2 * m + 1) * n, 2)),
        (vec![m - 2, n + 1], rat(-m * (m - 1), 2)),
        (vec![m - 2, n - 1], rat(-m * (m - 1) * n, 3)),
    ]
}

fn reference_ip_klm(k: i64, l: i64, m: i64) -> Vec<(Vec<i64>, BigRational)> {
    vec![
        (vec![k + 1, l + 1, m + 1], rat(1, 24)),
        (vec![k - 1, l + 1, m + 1], rat(k, 4)),
        (vec![k + 1, l - 1, m + 1], rat(l, 4)),
        (vec![k + 1, l + 1, m - 1], rat(m, 4)),
        (vec![k - 1, l - 1, m + 1], rat(-k * l, 2)),
        (vec![k - 1, l + 1, m - 1], rat(-k * m, 2)),
        (vec![k + 1, l - 1, m - 1], rat(-l * m, 2)),
        (vec![k - 1, l - 1, m - 1], rat(-k * l * m, 3)),
    ]
}

/// Exact perturbative eigenstates and energies.
pub fn criterion_1() -> CriterionReport {
    run("1", "exact perturbative coefficients", || {
        let mut slowest: f64 = 0.0;
        let mut checked = 0;
        for n in 0..=10i64 {
            let t = Instant::now();
            let st = second_order_state_ix3(n as u32)?;
            if st.i_p() != series(1, reference_ip(n))? {
                return Ok((false, format!("iP_{n} differs")));
            }
            if st.q.as_ref() != Some(&series(1, reference_q(n))?) {
                return Ok((false, format!("Q_{n} differs")));
            }
            if st.b != Some(rat(30 * n * n + 30 * n + 11, 8)) {
                return Ok((false, format!("B_{n} differs")));
            }
            if st.norm_eps2 != Some(rat((2 * n + 1) * (82 * n * n + 82 * n + 87), 144)) {
                return Ok((false, format!("a_{n} differs")));
            }
            slowest = slowest.max(t.elapsed().as_secs_f64());
            checked += 1;
        }
        for m in 0..=4i64 {
            for n in 0..=4i64 {
                let t = Instant::now();
                let st = first_order_state(ModelId::Ix2y, &MultiIndex::new(&[m as u32, n as u32]))?;
                if st.i_p() != series(2, reference_ip_mn(m, n))? {
                    return Ok((false, format!("iP_{m}{n} differs")));
                }
                slowest = slowest.max(t.elapsed().as_secs_f64());
                checked += 1;
                for k in 0..=4i64 {
                    let t = Instant::now();
                    let st = first_order_state(ModelId::Ixyz, &MultiIndex::new(&[k as u32, m as u32, n as u32]))?;
                    if st.i_p() != series(3, reference_ip_klm(k, m, n))? {
                        return Ok((false, format!("iP_{k}{m}{n} differs")));
                    }
                    slowest = slowest.max(t.elapsed().as_secs_f64());
                    checked += 1;
                }
            }
        }
        Ok((slowest < 1.0, format!("{checked} states bit-exact, slowest {slowest:.3}s")))
    })
}

fn word(c: GaussRational, factors: Vec<Factor>) -> Word {
    Word::new(c, factors)
}

fn real(n: i64, d: i64) -> GaussRational {
    GaussRational::real(rat(n, d))
}

/// `c p^k` with `p = -i d/dx` on axis 0, followed by `prefix` on the left.
fn p_word(c: GaussRational, prefix: &[Factor], k: u32) -> Word {
    let mut f = prefix.to_vec();
    f.extend(std::iter::repeat_n(Factor::D(0), k as usize));
    word(c.mul_i_pow(3 * k), f)
}

fn op(arity: usize, words: &[Word]) -> Result<DiffOp, Box<dyn Error>> {
    Ok(DiffOp::normal_order(arity, words)?)
}

fn minus_i() -> GaussRational {
    -GaussRational::i()
}

struct KernelForms {
    x3c: DiffOp,
    series_first: DiffOp,
    series_second: DiffOp,
    exp_generator: DiffOp,
    exp_reference: DiffOp,
    ix2y_delta: DiffOp,
    ix2y_expanded: DiffOp,
    ixyz_delta: DiffOp,
    ixyz_expanded: DiffOp,
}

fn kernel_forms() -> Result<KernelForms, Box<dyn Error>> {
    use Factor::{Mirror as M, X, D};
    let x3c = op(1, &[word(real(4, 3), vec![D(0), D(0), D(0)]), word(real(-2, 1), vec![X(0), D(0), X(0)])])?.scale(&minus_i());
    let series_first = op(1, &[p_word(real(-4, 3), &[], 3), p_word(real(2, 1), &[X(0), M(0)], 1)])?;
    let series_second = op(
        1,
        &[
            p_word(real(8, 9), &[], 6),
            p_word(real(-8, 3), &[X(0), M(0)], 4),
            p_word(real(2, 1), &[X(0), X(0), M(0), M(0)], 2),
            p_word(real(-12, 1), &[], 2),
        ],
    )?;
    // -(4/3 p^3 + 2 x p x), and the reference -(4/3 p^3 - 2 x p x)
    let xpx = |c: i64| word(real(c, 1).mul_i_pow(3), vec![X(0), D(0), X(0)]);
    let exp_generator = op(1, &[p_word(real(-4, 3), &[], 3), xpx(-2)])?;
    let exp_reference = op(1, &[p_word(real(-4, 3), &[], 3), xpx(2)])?;
    let dxy = |x: Factor, y: Factor| {
        vec![
            word(real(2, 3), vec![D(0), D(0), D(1)]),
            word(real(-1, 3), vec![x, x, D(1)]),
            word(real(-2, 3), vec![x, y, D(0)]),
            word(real(-1, 3), vec![y]),
        ]
    };
    let mut w = dxy(X(0), X(1));
    w.extend(dxy(M(0), M(1)));
    let ix2y_delta = op(2, &w)?.scale(&minus_i());
    let ix2y_expanded = op(
        2,
        &[
            word(real(4, 3), vec![D(0), D(0), D(1)]),
            word(real(2, 3), vec![X(0), M(0), D(1)]),
            word(real(-4, 3), vec![X(0), X(1), D(0)]),
        ],
    )?
    .scale(&minus_i());
    let dxyz = |third: GaussRational, whole: GaussRational| {
        vec![
            word(whole, vec![D(0), D(1), D(2)]),
            word(third.clone(), vec![X(0), X(1), D(2)]),
            word(third.clone(), vec![X(0), X(2), D(1)]),
            word(third, vec![X(1), X(2), D(0)]),
        ]
    };
    let ixyz_delta = op(3, &dxyz(real(-1, 3), real(2, 3)))?.scale(&GaussRational::imag(rat(-2, 1)));
    let ixyz_expanded = op(3, &dxyz(real(-2, 3), real(4, 3)))?.scale(&minus_i());
    Ok(KernelForms {
        x3c,
        series_first,
        series_second,
        exp_generator,
        exp_reference,
        ix2y_delta,
        ix2y_expanded,
        ixyz_delta,
        ixyz_expanded,
    })
}

/// Kernel construction, `C^2 = 1`, and the eigenvalue action on states.
pub fn criterion_2() -> CriterionReport {
    run("2", "C kernels and C^2 = 1", || {
        let forms = kernel_forms()?;
        let ix3 = build_c(ModelId::Ix3, 2)?;
        let ix2y = build_c(ModelId::Ix2y, 1)?;
        let ixyz = build_c(ModelId::Ixyz, 1)?;
        let half = GaussRational::real(rat(1, 2));
        let exp_second = forms.exp_generator.compose(&forms.exp_generator)?.scale(&half);
        let forms_ok = [
            ("x3C", ix3.corrections[1] == forms.x3c),
            ("series eps", ix3.corrections[1] == forms.series_first),
            ("series eps^2", ix3.corrections[2] == forms.series_second),
            ("exponential eps", ix3.corrections[1] == forms.exp_generator),
            ("exponential eps^2", ix3.corrections[2] == exp_second),
            ("ix2y delta form", ix2y.corrections[1] == forms.ix2y_delta),
            ("ixyz delta form", ixyz.corrections[1] == forms.ixyz_delta),
            ("ixyz expanded", ixyz.corrections[1] == forms.ixyz_expanded),
        ];
        if let Some((name, _)) = forms_ok.iter().find(|(_, ok)| !ok) {
            return Ok((false, format!("{name} differs")));
        }
        for k in [&ix3, &ix2y, &ixyz] {
            if !k.compose_c()?.iter().all(DiffOp::is_zero) {
                return Ok((false, format!("C^2 != 1 for {}", k.model)));
            }
        }
        let mut states = 0;
        for n in 0..=6 {
            let st = second_order_state_ix3(n)?;
            if !ix3.apply_c(&st)?.iter().all(HermiteSeries::is_zero) {
                return Ok((false, format!("C phi_{n} != (-1)^n phi_{n}")));
            }
            states += 1;
        }
        for k in [&ix2y, &ixyz] {
            for idx in indices_up_to(k.model.arity(), 6) {
                let st = first_order_state(k.model, &idx)?;
                if !k.apply_c(&st)?.iter().all(HermiteSeries::is_zero) {
                    return Ok((false, format!("{} C phi_{idx} != (-1)^n phi", k.model)));
                }
                states += 1;
            }
        }
        Ok((true, format!("{} kernel forms equal, C^2 - 1 = 0, {states} states are C eigenvectors", forms_ok.len())))
    })
}

/// The expanded `ix^2y` reference kernel, compared term by term.
pub fn criterion_2_ix2y_expanded() -> CriterionReport {
    run("2-ix2y-expanded", "ix2y kernel, expanded reference form", || {
        let forms = kernel_forms()?;
        let k = build_c(ModelId::Ix2y, 1)?;
        let diff = k.corrections[1].sub(&forms.ix2y_expanded)?;
        Ok((diff.is_zero(), format!("built - reference = {diff}")))
    })
}

/// The reference exponential form, compared term by term at first order.
pub fn criterion_2_exp_reference() -> CriterionReport {
    run("2-exp-sign", "exponential kernel, reference sign", || {
        let forms = kernel_forms()?;
        let k = build_c(ModelId::Ix3, 1)?;
        let diff = k.corrections[1].sub(&forms.exp_reference)?;
        Ok((diff.is_zero(), format!("built - reference = {diff}")))
    })
}

/// Characteristic polynomials and roots of the degenerate `ixyz` blocks.
pub fn criterion_3() -> CriterionReport {
    run("3", "degenerate xyz blocks", || {
        let two = degenerate_block(2, Some(&even_class(2)))?;
        let p2 = RatPoly::linear(&rat(1, 8)).pow(2).mul(&RatPoly::linear(&rat(7, 8)));
        if !two.matches(&p2) {
            return Ok((false, format!("n = 2: {}", two.char_poly)));
        }
        let four = degenerate_block(4, Some(&even_class(4)))?;
        let p4 = RatPoly::from_ints(&[-33, -496, 192]).mul(&RatPoly::from_ints(&[81, -352, 192]).pow(2));
        if !four.matches(&p4) {
            return Ok((false, format!("n = 4: {}", four.char_poly)));
        }
        let six = degenerate_block(6, Some(&even_class(6)))?;
        let exact = six.roots.iter().any(|r| r.value == RootValue::Exact(rat(5, 8)));
        let roots = six.root_values();
        let want = [5.473, 2.343, 0.391, 4.003, 1.981, -0.193];
        let worst = want
            .iter()
            .map(|w| roots.iter().map(|(v, _)| (v - w).abs()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max);
        let listed: Vec<String> = roots.iter().map(|(v, m)| format!("{v:.4}x{m}")).collect();
        Ok((exact && worst < 1e-3, format!("n = 6 roots [{}], 5/8 exact: {exact}, worst {worst:.1e}", listed.join(", "))))
    })
}

/// Harmonic limit, reality and norm alternation.
pub fn criterion_4() -> CriterionReport {
    run("4", "spectral reality and PT norms", || {
        let t = Instant::now();
        let harm = diagonalize(HamiltonianFamily::Epsilon { eps: 0.0 }, 200)?;
        let harm_secs = t.elapsed().as_secs_f64();
        let harm_err = (0..=20).map(|n| (harm.levels[n].energy - Complex64::from((2 * n + 1) as f64)).norm()).fold(0.0, f64::max);
        let mut ok = harm_err < 1e-8 && harm_secs < 10.0;
        let mut detail = format!("eps = 0: max |E_n - (2n+1)| = {harm_err:.1e} in {harm_secs:.2}s");
        for eps in [0.5, 1.0, 1.5] {
            let res = diagonalize(HamiltonianFamily::Epsilon { eps }, 200)?;
            let converged: Vec<_> = res.converged_levels().collect();
            let max_im = converged.iter().map(|l| l.energy.im.abs() / l.energy.norm().max(1.0)).fold(0.0, f64::max);
            let positive = converged.iter().all(|l| l.energy.re > 0.0);
            let mut alternate = true;
            for n in 0..=10 {
                let p = pt_norm(&res, n)?;
                alternate &= p.sign == if n % 2 == 0 { 1 } else { -1 };
            }
            ok &= max_im < 1e-8 && positive && alternate;
            detail += &format!(
                "; eps = {eps}: {} converged, max |Im E|/|E| = {max_im:.1e}, positive {positive}, signs alternate {alternate}",
                converged.len()
            );
        }
        Ok((ok, detail))
    })
}

/// Fitted `eps` and `eps^2` coefficients of the cubic oscillator levels.
pub fn criterion_5() -> CriterionReport {
    run("5", "perturbative vs numerical energies", || {
        let fit = perturbative_match(&MATCH_GRID, 200, 2)?;
        let l0 = &fit.levels[0];
        let b_rel = (l0.quadratic / 1.375 - 1.0).abs();
        let b1_rel = (fit.levels[1].quadratic / (71.0 / 8.0) - 1.0).abs();
        Ok((
            l0.linear.abs() < 1e-6 && b_rel < 0.01,
            format!("A0 = {:.2e}, B0 = {:.6} ({b_rel:.1e} rel), B1 = {:.5} ({b1_rel:.1e} rel)", l0.linear, l0.quadratic, fit.levels[1].quadratic),
        ))
    })
}

/// Numerical spectral zeta against the closed form.
pub fn criterion_6() -> CriterionReport {
    run("6", "spectral zeta", || {
        let mut ok = true;
        let mut parts = Vec::new();
        for eps in [0.5, 1.0, 1.5, 1.9] {
            let t = Instant::now();
            let z = zeta_numeric(eps, 400)?;
            let secs = t.elapsed().as_secs_f64();
            let exact = zeta_closed(eps)?;
            let rel = (z.value / exact - 1.0).abs();
            ok &= rel < 1e-3 && secs < 60.0;
            parts.push(format!("eps {eps}: {:.7} vs {exact:.7} ({rel:.1e}, {} levels, {secs:.1}s)", z.value, z.levels));
        }
        Ok((ok, parts.join("; ")))
    })
}

/// The alternate prefactor, compared with the same numerics.
pub fn criterion_6_alternate() -> CriterionReport {
    run("6-alternate", "spectral zeta, alternate prefactor", || {
        let mut worst: f64 = 0.0;
        for eps in [0.5, 1.0, 1.5, 1.9] {
            let z = zeta_numeric(eps, 400)?;
            let alt = zeta_closed_with(ZetaInput::new(eps)?, ZetaPrefactor::Alternate)?;
            worst = worst.max((z.value / alt - 1.0).abs());
        }
        Ok((worst < 1e-3, format!("worst relative deviation {worst:.2e}")))
    })
}

fn vec_diff(a: &Vec2, b: &Vec2) -> f64 {
    (a[0] - b[0]).norm().max((a[1] - b[1]).norm())
}

fn random_vec(rng: &mut ChaCha8Rng) -> Vec2 {
    let mut c = || Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    [c(), c()]
}

/// Exact identities of the 2x2 model over random parameters.
pub fn criterion_7(seed: u64) -> CriterionReport {
    run("7", "2x2 matrix model identities", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let i = Complex64::i();
        let one = Complex64::from(1.0);
        let mut worst: f64 = 0.0;
        let mut worst_evo: f64 = 0.0;
        let mut min_cpt = f64::INFINITY;
        for _ in 0..1000 {
            let r = rng.gen_range(0.1..3.0);
            let theta = rng.gen_range(-PI..PI);
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let s = sign * (r * theta.sin().abs() + rng.gen_range(0.05..3.0));
            let model = TwoLevelModel::new(r, s, theta);
            let sol = matrix_model::solve(model);
            if sol.phase != Phase::Unbroken {
                return Ok((false, format!("{model:?} not unbroken")));
            }
            let h = model.hamiltonian();
            let alpha = (r / s * theta.sin()).asin();
            let (sa, ca) = alpha.sin_cos();
            let norm = (2.0 * ca).sqrt();
            let plus = [Complex64::from_polar(1.0 / norm, alpha / 2.0), Complex64::from_polar(1.0 / norm, -alpha / 2.0)];
            let minus = [i * Complex64::from_polar(1.0 / norm, -alpha / 2.0), -i * Complex64::from_polar(1.0 / norm, alpha / 2.0)];
            let c = [[i * sa / ca, one / ca], [one / ca, -i * sa / ca]];
            let c_lib = sol.c_matrix.ok_or("missing C")?;
            let scale = 1.0 / ca;
            let mut errs = vec![vec_diff(&sol.eigenvectors[0], &plus), vec_diff(&sol.eigenvectors[1], &minus), max_diff(&c_lib, &c) / scale];
            for (k, v) in [plus, minus].iter().enumerate() {
                let e = sol.eigenvalues[k];
                errs.push(vec_diff(&mat_vec(&h, v), &[e * v[0], e * v[1]]) / (r + s.abs()));
                let sgn = if k == 0 { 1.0 } else { -1.0 };
                errs.push((pt_inner(v, v) - sgn).norm());
                errs.push(vec_diff(&mat_vec(&c, v), &[v[0] * sgn, v[1] * sgn]) / scale);
                errs.push((sol.cpt_inner(v, v)? - one).norm() / scale);
            }
            errs.push(pt_inner(&plus, &minus).norm());
            errs.push(max_diff(&mat_mul(&c, &c), &matrix_model::identity()) / (scale * scale));
            errs.push(max_diff(&mat_mul(&c, &h), &mat_mul(&h, &c)) / (scale * (r + s.abs())));
            errs.push(max_diff(&sol.cpt_projector_sum([1.0, 1.0])?, &matrix_model::identity()) / scale);
            errs.push(max_diff(&sol.cpt_projector_sum([1.0, -1.0])?, &c) / scale);

            let psi = random_vec(&mut rng);
            let (x, y, u, v) = (psi[0].re, psi[0].im, psi[1].re, psi[1].im);
            let formula = (x * x + v * v + 2.0 * x * v * sa + y * y + u * u - 2.0 * y * u * sa) / ca;
            let got = sol.cpt_inner(&psi, &psi)?;
            errs.push((got - formula).norm() / scale);
            min_cpt = min_cpt.min(got.re / (psi[0].norm_sqr() + psi[1].norm_sqr()));
            for t in [0.5, 3.0, 10.0] {
                let later = sol.evolve(&psi, t);
                worst_evo = worst_evo.max((sol.cpt_inner(&later, &later)? - got).norm() / got.norm());
            }
            worst = worst.max(errs.into_iter().fold(0.0, f64::max));
        }
        let mut broken_norm: f64 = 0.0;
        for _ in 0..1000 {
            let r = rng.gen_range(0.5..3.0);
            let theta = rng.gen_range(0.3..PI - 0.3) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let bound = r * theta.sin().abs();
            let s = rng.gen_range(0.0..0.95) * bound;
            let sol = matrix_model::solve(TwoLevelModel::new(r, s, theta));
            if sol.phase != Phase::Broken {
                return Ok((false, format!("r = {r}, s = {s}, theta = {theta} not broken")));
            }
            for v in &sol.eigenvectors {
                broken_norm = broken_norm.max(pt_inner(v, v).norm());
            }
        }
        Ok((
            worst < 1e-12 && min_cpt > 0.0 && worst_evo < 1e-10 && broken_norm < 1e-10,
            format!(
                "max identity residual {worst:.1e}, min CPT norm {min_cpt:.3}, evolution drift {worst_evo:.1e}, broken PT norm {broken_norm:.1e}"
            ),
        ))
    })
}

/// Operator reconstructions from the retained eigenvectors at `eps = 1`.
pub fn criterion_8() -> CriterionReport {
    run("8", "operator reconstructions at eps = 1", || {
        let res = diagonalize(HamiltonianFamily::Epsilon { eps: 1.0 }, 200)?;
        let kept = res.retained();
        let m = kept.min(40);
        let rec = reconstruct_operators(&res, m)?;
        let f = project_function(&res, |y| (-(y - 0.5) * (y - 0.5)).exp());
        let grid: Vec<f64> = (0..=60).map(|i| -6.0 + 0.2 * i as f64).collect();
        let ms: Vec<usize> = [10, 20, 30, 40].into_iter().filter(|&k| k <= kept).collect();
        let resid = ms.iter().map(|&k| completeness_residual(&res, &f, k, &grid)).collect::<Result<Vec<_>, _>>()?;
        let monotone = resid.windows(2).all(|w| w[1] < w[0]);
        let listed: Vec<String> = ms.iter().zip(&resid).map(|(k, r)| format!("M={k}: {r:.1e}")).collect();
        Ok((
            m == 40 && rec.parity_residual < 1e-6 && rec.green_residual < 1e-6 && monotone,
            format!(
                "{kept} levels retained, M = {m}: |P^2 - 1| = {:.1e}, |HG - 1| = {:.1e}, |H_M - H| = {:.1e}; completeness {}",
                rec.parity_residual,
                rec.green_residual,
                rec.hamiltonian_residual,
                listed.join(", ")
            ),
        ))
    })
}

/// Numerical `C` against the first-order kernel in the oscillator basis.
pub fn criterion_9() -> CriterionReport {
    run("9", "numerical vs perturbative C", || {
        let k = kernel_consistency(&[0.02, 0.04, 0.08], 60, 4, 1)?;
        let devs: Vec<String> = k.deviation.iter().map(|d| format!("{d:.2e}")).collect();
        let res = diagonalize(HamiltonianFamily::Cubic { eps: 0.08 }, 60)?;
        let c = numeric_c_matrix(&res, res.retained(), 200, 1)?;
        Ok((
            k.slope >= 1.9,
            format!(
                "slope {:.3} on {}x{} block, deviations [{}]; |C^2 - 1| = {:.1e}, min CPT = {:.3}",
                k.slope,
                k.block,
                k.block,
                devs.join(", "),
                c.c_squared_residual,
                c.min_cpt_product
            ),
        ))
    })
}

fn quartic_levels() -> Result<(AnharmonicParams, Vec<f64>), Box<dyn Error>> {
    let params = AnharmonicParams::new(1.0, 0.04)?;
    let res = diagonalize(HamiltonianFamily::QuarticPlus { m: 1.0, g: 0.04 }, 100)?;
    Ok((params, res.retained_energies()))
}

/// Quartic oscillator levels against the first-order formula.
pub fn quartic_first_order() -> CriterionReport {
    run("quartic-first-order", "quartic E_2 vs first order, 5e-3", || {
        let (p, e) = quartic_levels()?;
        let d = (e[2] - anharmonic_energy(&p, 2)).abs();
        Ok((d < 5e-3, format!("E_2 = {:.6}, first order {:.6}, |diff| = {d:.1e}", e[2], anharmonic_energy(&p, 2))))
    })
}

/// Quartic oscillator levels against the series through third order. The
/// fourth-order term is about 1.4e-4 at `k = 2` and 5.8e-4 at `k = 3`.
pub fn quartic_series() -> CriterionReport {
    run("quartic-series", "quartic E_0..E_2 vs third order, 5e-4", || {
        let (p, e) = quartic_levels()?;
        let diffs: Vec<f64> = (0..3).map(|k| (e[k] - anharmonic_series(&p, k as u32, 3)).abs()).collect();
        let listed: Vec<String> = diffs.iter().map(|d| format!("{d:.1e}")).collect();
        Ok((diffs.iter().all(|d| *d < 5e-4), format!("|E_k - series| = [{}]", listed.join(", "))))
    })
}

/// Every check, in order.
pub fn run_all(seed: u64) -> Vec<CriterionReport> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_2_ix2y_expanded(),
        criterion_2_exp_reference(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_6_alternate(),
        criterion_7(seed),
        criterion_8(),
        criterion_9(),
        quartic_first_order(),
        quartic_series(),
    ]
}

/// True when every check outside [`KNOWN_UNATTAINABLE`] passed.
pub fn all_required_pass(reports: &[CriterionReport]) -> bool {
    reports.iter().all(|r| r.passed || r.known_unattainable().is_some())
}
