use faer::{c64, Mat};
use proptest::prelude::*;

use nonlocal_riccati::diagnostics::{compare, Field};
use nonlocal_riccati::riccati::{i_hat, Coupling, OddDegreeProblem, QuadraticProblem};
use nonlocal_riccati::series::{det2_lu, det2_operator, det2_trace_series};
use nonlocal_riccati::{Grid1D, Kernel2D, Space, StarSeries, Symbol};

const M: usize = 16;

fn grid() -> Grid1D {
    Grid1D::new(8.0, M).unwrap()
}

fn kernel() -> impl Strategy<Value = Kernel2D> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), M * M).prop_map(|v| {
        let values = Mat::from_fn(M, M, |i, j| {
            let (re, im) = v[i * M + j];
            c64::new(re, im)
        });
        Kernel2D::new(grid(), Space::Physical, values).unwrap()
    })
}

/// Smooth localized kernel: a sum of two Gaussian bumps.
fn bump_kernel() -> impl Strategy<Value = Kernel2D> {
    ((-1.5f64..1.5, -1.5f64..1.5, 0.5f64..2.0), (-1.5f64..1.5, -1.5f64..1.5, -1.0f64..1.0)).prop_map(
        |((x0, y0, a), (x1, y1, b))| {
            Kernel2D::from_fn(grid(), Space::Physical, move |x, y| {
                let g0 = (-(x - x0).powi(2) - (y - y0).powi(2)).exp();
                let g1 = (-(x - x1).powi(2) - 2.0 * (y - y1).powi(2)).exp();
                c64::new(a * g0, b * g1)
            })
        },
    )
}

fn rel(a: &Kernel2D, b: &Kernel2D) -> f64 {
    a.sub(b).unwrap().hs_norm() / a.hs_norm().max(b.hs_norm()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn star_is_associative(a in kernel(), b in kernel(), c in kernel()) {
        let left = a.star(&b).unwrap().star(&c).unwrap();
        let right = a.star(&b.star(&c).unwrap()).unwrap();
        prop_assert!(rel(&left, &right) < 1e-13);
    }

    #[test]
    fn delta_is_the_identity(a in kernel()) {
        let delta = Kernel2D::delta(grid(), Space::Physical);
        prop_assert!(rel(&a.star(&delta).unwrap(), &a) < 1e-14);
        prop_assert!(rel(&delta.star(&a).unwrap(), &a) < 1e-14);
    }

    #[test]
    fn adjoint_reverses_products(a in kernel(), b in kernel()) {
        let left = a.star(&b).unwrap().adjoint();
        let right = b.adjoint().star(&a.adjoint()).unwrap();
        prop_assert!(rel(&left, &right) < 1e-14);
        prop_assert!(rel(&a.adjoint().adjoint(), &a) == 0.0);
    }

    #[test]
    fn transform_is_a_star_homomorphism(a in kernel(), b in kernel()) {
        let left = a.star(&b).unwrap().ft2().unwrap();
        let right = a.ft2().unwrap().star(&b.ft2().unwrap()).unwrap();
        prop_assert!(rel(&left, &right) < 1e-13);
        prop_assert!(rel(&a.ft2().unwrap().ift2().unwrap(), &a) < 1e-14);
    }

    #[test]
    fn hs_norm_is_a_norm(a in kernel(), b in kernel(), s in -3.0f64..3.0) {
        let sum = a.add(&b).unwrap();
        prop_assert!(sum.hs_norm() <= a.hs_norm() + b.hs_norm() + 1e-12);
        let scaled = a.scale(c64::new(s, 0.0)).hs_norm();
        prop_assert!((scaled - s.abs() * a.hs_norm()).abs() <= 1e-12 * a.hs_norm().max(1.0));
        prop_assert!(a.star(&b).unwrap().hs_norm() <= a.hs_norm() * b.hs_norm() * (1.0 + 1e-12));
    }

    #[test]
    fn det2_forms_agree_below_unit_norm(a in kernel(), h in 0.05f64..0.9) {
        let q = a.scale(c64::new(h / a.hs_norm(), 0.0));
        let op = q.operator();
        let product = det2_operator(&op).unwrap();
        prop_assert!((product - det2_trace_series(&op, 400)).norm() < 1e-9);
        prop_assert!((product - det2_lu(&op)).norm() < 1e-10 * product.norm().max(1.0));
    }

    #[test]
    fn i_hat_at_zero_frequency_is_t(c2 in -2.0f64..2.0, c3 in -2.0f64..2.0, t in 0.0f64..10.0) {
        let d = Symbol::new(vec![0.0, 0.0, c2, c3]);
        prop_assert_eq!(i_hat(&d, 0.0, t), c64::new(t, 0.0));
    }

    #[test]
    fn symbol_sum_is_pointwise(a in prop::collection::vec(-2.0f64..2.0, 1..5),
                               b in prop::collection::vec(-2.0f64..2.0, 1..5),
                               k in -3.0f64..3.0) {
        let (sa, sb) = (Symbol::new(a), Symbol::new(b));
        let lhs = (&sa + &sb).eval(k);
        let rhs = sa.eval(k) + sb.eval(k);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
        prop_assert!(((&sa - &sb).eval(k) - (sa.eval(k) - sb.eval(k))).norm() <= 1e-12 * rhs.norm().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn odd_degree_auxiliary_flow_is_unitary(g0 in bump_kernel(), t in 0.0f64..0.3) {
        let h = Symbol::even(vec![0.0, 0.0, 1.0]).unwrap();
        for f in [StarSeries::identity(), StarSeries::sin(12)] {
            let p = OddDegreeProblem::new(h.clone(), f, g0.clone()).unwrap();
            prop_assert!(p.unitarity_defect(t) < 1e-10);
        }
    }

    #[test]
    fn riccati_solution_preserves_gram_kernel(g0 in bump_kernel(), t in 0.0f64..0.3) {
        let h = Symbol::even(vec![0.0, 0.0, 1.0]).unwrap();
        let p = OddDegreeProblem::new(h, StarSeries::identity(), g0).unwrap();
        let sol = p.solve(t).unwrap();
        let p = sol.p.ift2().unwrap();
        let pp = p.star_adjoint(&p).unwrap();
        let gg = sol.g.star_adjoint(&sol.g).unwrap();
        prop_assert!(rel(&gg, &pp) < 1e-9);
        prop_assert!(sol.residual < 1e-10);
    }

    #[test]
    fn zero_coupling_reduces_to_the_linear_flow(g0 in bump_kernel(), t in 0.0f64..0.5) {
        let d = Symbol::new(vec![0.0, 0.0, 1.0]);
        let p = QuadraticProblem::new(d, Coupling::zero(), g0).unwrap();
        let sol = p.solve(t).unwrap();
        let base = p.base(t).unwrap().ift2().unwrap();
        let (sup, _) = compare(&Field::Plane(sol.g), &Field::Plane(base)).unwrap();
        prop_assert!(sup < 1e-12);
    }

    #[test]
    fn quadratic_solve_has_small_backward_error(g0 in bump_kernel(), t in 0.0f64..0.2) {
        let p = QuadraticProblem::new(
            Symbol::monomial(3, -1.0),
            Coupling::Symbol(Symbol::monomial(1, 1.0)),
            g0,
        ).unwrap();
        let sol = p.solve(t).unwrap();
        prop_assert!(sol.residual < 1e-10);
    }
}
