use rand::Rng;
use serde::Serialize;

use crate::exactalg::groebner::{saturate, Budget, GbStats, Ideal};
use crate::exactalg::upoly::UPoly;
use crate::exactalg::{exterior_square, AlgError, Field, Mat, Poly};
use crate::grassflag::{hf_space, iota_action, DualityMap, MatrixSubspace, SectionMatrix};

/// S^T M = M S, i.e. the section is fixed by the involution attached to M = Λ²T.
pub fn is_fixed_by<F: Field>(s: &Mat<F>, f: &DualityMap<F>) -> bool {
    &s.transpose() * &f.m == &f.m * s
}

/// Self-duality test for sections in the invariant complement.
pub fn selfdual_test<F: Field>(s: &SectionMatrix<F>, f: &DualityMap<F>) -> Result<bool, AlgError> {
    if !hf_space::<F>().contains(&s.s) {
        return Err(AlgError::Invalid("section is not in the invariant complement".into()));
    }
    let fixed = is_fixed_by(&s.s, f);
    debug_assert_eq!(fixed, iota_action(&s.s, f) == s.s);
    Ok(fixed)
}

/// Linear space {M : S^T M = M S}.
pub fn commutant_space<F: Field>(s: &Mat<F>) -> MatrixSubspace<F> {
    // unknown M_{kj} sits in column 10k + j
    let mut a: Mat<F> = Mat::zeros(100, 100);
    for i in 0..10 {
        for j in 0..10 {
            let row = 10 * i + j;
            for k in 0..10 {
                // (S^T M)_{ij} = Σ_k S_{ki} M_{kj}
                let v = a[(row, 10 * k + j)].clone() + s[(k, i)].clone();
                a[(row, 10 * k + j)] = v;
                // (M S)_{ij} = Σ_k M_{ik} S_{kj}
                let v = a[(row, 10 * i + k)].clone() - s[(k, j)].clone();
                a[(row, 10 * i + k)] = v;
            }
        }
    }
    let mats: Vec<Mat<F>> = a.kernel().iter().map(|v| Mat::from_fn(10, 10, |i, j| v[10 * i + j].clone())).collect();
    MatrixSubspace::span(&mats)
}

pub fn charpoly_squarefree<F: Field>(s: &Mat<F>) -> bool {
    UPoly::new(s.charpoly()).is_squarefree()
}

/// Which polynomial system to saturate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Route {
    /// Generic 5x5 matrix, 25 variables.
    Full,
    /// Symmetric 5x5 matrix, 15 variables; valid when every solution of S^T M = M S is symmetric.
    Reduced,
}

#[derive(Clone, Debug, Serialize)]
pub struct RouteOutcome {
    pub route: Route,
    pub variables: usize,
    pub generators: usize,
    /// "unit ideal", "proper ideal (k generators)" or "budget exceeded".
    pub saturation_result: String,
    pub unit: bool,
    pub stats: Option<GbStats>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NonbirationalReport {
    /// "certified-empty", "counterexample", or "budget-exceeded".
    pub status: String,
    pub field: String,
    pub in_hf: bool,
    pub squarefree_charpoly: bool,
    pub dim_commutant: usize,
    pub symmetric: bool,
    pub saturation_result: String,
    pub routes: Vec<RouteOutcome>,
    pub counterexample: Option<Vec<Vec<String>>>,
}

/// Entries of S^T Λ²T - Λ²T S for a 5x5 matrix of polynomials T.
pub fn commutation_ideal<F: Field>(s: &Mat<F>, t: &Mat<Poly<F>>, nvars: usize) -> Ideal<F> {
    let m = exterior_square(t).expect("5x5");
    let sp = s.map(|x| Poly::constant(x.clone()));
    let e = &(&sp.transpose() * &m) - &(&m * &sp);
    Ideal::new(nvars, e.entries().to_vec())
}

pub fn generic_matrix<F: Field>() -> Mat<Poly<F>> {
    Mat::from_fn(5, 5, |i, j| Poly::var(5 * i + j))
}

pub fn generic_symmetric_matrix<F: Field>() -> Mat<Poly<F>> {
    // upper-triangular entries numbered row by row
    let idx = |i: usize, j: usize| {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        (0..a).map(|r| 5 - r).sum::<usize>() + (b - a)
    };
    Mat::from_fn(5, 5, |i, j| Poly::var(idx(i, j)))
}

fn run_route<F: Field>(s: &Mat<F>, route: Route, budget: Budget) -> RouteOutcome {
    let (t, n) = match route {
        Route::Full => (generic_matrix::<F>(), 25),
        Route::Reduced => (generic_symmetric_matrix::<F>(), 15),
    };
    let ideal = commutation_ideal(s, &t, n);
    let det = t.det_laplace();
    let generators = ideal.gens.len();
    match saturate(&ideal, &det, budget) {
        Ok((sat, stats)) => {
            let unit = sat.is_unit();
            let saturation_result =
                if unit { "unit ideal".to_string() } else { format!("proper ideal ({} generators)", sat.gens.len()) };
            RouteOutcome { route, variables: n, generators, saturation_result, unit, stats: Some(stats) }
        }
        Err(_) => RouteOutcome {
            route,
            variables: n,
            generators,
            saturation_result: "budget exceeded".into(),
            unit: false,
            stats: None,
        },
    }
}

/// Options for [`nonbirational_certificate`].
#[derive(Clone, Copy, Debug)]
pub struct CertificateOptions {
    pub budget: Budget,
    /// Also run the 25-variable system when the reduced one applies.
    pub force_full: bool,
    /// Random matrices T tried as explicit counterexamples.
    pub probes: usize,
}

impl Default for CertificateOptions {
    fn default() -> Self {
        CertificateOptions { budget: Budget::default(), force_full: false, probes: 20 }
    }
}

/// Decides whether S^T Λ²T = Λ²T S has a solution with det T ≠ 0 over the field `F`.
///
/// Membership of S in the invariant complement is recorded but does not block the
/// computation, since the polynomial system makes sense for every S.
pub fn nonbirational_certificate<F: Field, R: Rng + ?Sized>(
    s: &Mat<F>,
    opts: CertificateOptions,
    rng: &mut R,
) -> NonbirationalReport {
    let in_hf = hf_space::<F>().contains(s);
    let squarefree_charpoly = charpoly_squarefree(s);
    let comm = commutant_space(s);
    let dim_commutant = comm.dim();
    let symmetric = comm.basis().iter().all(|m| *m == m.transpose());

    let mut counterexample = None;
    let mut probes: Vec<Mat<F>> = vec![Mat::identity(5)];
    probes.extend((0..opts.probes).map(|_| Mat::random(5, 5, rng)));
    for t in probes {
        if let Ok(f) = DualityMap::new(t) {
            if is_fixed_by(s, &f) {
                counterexample = Some(rows_as_strings(&f.t));
                break;
            }
        }
    }

    let mut routes = Vec::new();
    let reduced_ok = dim_commutant == 10 && symmetric && F::characteristic() != 2;
    if reduced_ok {
        routes.push(run_route(s, Route::Reduced, opts.budget));
    }
    if !reduced_ok || opts.force_full {
        routes.push(run_route(s, Route::Full, opts.budget));
    }

    let any_unit = routes.iter().any(|r| r.unit);
    let status = if counterexample.is_some() {
        "counterexample"
    } else if any_unit {
        "certified-empty"
    } else if routes.iter().any(|r| r.stats.is_none()) {
        "budget-exceeded"
    } else {
        // a proper ideal with no rational witness found: inconclusive over this field
        "nonempty-ideal"
    };
    let saturation_result = routes
        .iter()
        .map(|r| format!("{:?}: {}", r.route, r.saturation_result))
        .collect::<Vec<_>>()
        .join("; ");
    NonbirationalReport {
        status: status.to_string(),
        field: F::field_name(),
        in_hf,
        squarefree_charpoly,
        dim_commutant,
        symmetric,
        saturation_result,
        routes,
        counterexample,
    }
}

fn rows_as_strings<F: Field>(m: &Mat<F>) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|x| x.to_string()).collect()).collect()
}
