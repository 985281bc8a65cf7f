use critline::specfun::{eta_completed, gamma_c, onef1, xi_c, zeta_c};
use critline::{Complex, EvalSettings};
use proptest::prelude::*;

fn settings() -> EvalSettings {
    EvalSettings::default()
}

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn completed_zeta_is_symmetric(re in 0.2f64..0.8, im in -30.0f64..30.0) {
        let s = c(re, im);
        let e = eta_completed(s, &settings()).unwrap().value;
        let scale = e.norm().max(1.0);
        let reflected = eta_completed(c(1.0, 0.0) - s, &settings()).unwrap().value;
        prop_assert!((e - reflected).norm() <= 1e-9 * scale);
        let conjugated = eta_completed(s.conj(), &settings()).unwrap().value;
        prop_assert!((e.conj() - conjugated).norm() <= 1e-12 * scale);
    }

    #[test]
    fn xi_is_symmetric_off_the_strip(re in -3.0f64..4.0, im in -20.0f64..20.0) {
        let s = c(re, im);
        let a = xi_c(s, &settings()).unwrap().value;
        let b = xi_c(c(1.0, 0.0) - s, &settings()).unwrap().value;
        prop_assert!((a - b).norm() <= 1e-9 * a.norm().max(1.0), "{a} vs {b}");
    }

    #[test]
    fn zeta_conjugation(re in -5.0f64..6.0, im in 0.5f64..60.0) {
        let s = c(re, im);
        let a = zeta_c(s, &settings()).unwrap();
        let b = zeta_c(s.conj(), &settings()).unwrap();
        prop_assert!((a.value.conj() - b.value).norm() <= 1e-12 * a.value.norm().max(1.0));
    }

    #[test]
    fn gamma_recurrence(re in 0.1f64..20.0, im in -40.0f64..40.0) {
        let s = c(re, im);
        let g = gamma_c(s).unwrap().value;
        let g1 = gamma_c(s + 1.0).unwrap().value;
        prop_assert!((g1 - s * g).norm() <= 1e-12 * g1.norm());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// ₁F₁(a; b; w) = e^w ₁F₁(b − a; b; −w).
    #[test]
    fn kummer_transformation(
        a_re in -3.0f64..3.0, a_im in -5.0f64..5.0,
        b in 0.3f64..3.0,
        w_re in -2.0f64..2.0, w_im in -2.0f64..2.0,
    ) {
        let (a, b, w) = (c(a_re, a_im), c(b, 0.0), c(w_re, w_im));
        let lhs = onef1(a, b, w, &settings()).unwrap().value;
        let rhs = w.exp() * onef1(b - a, b, -w, &settings()).unwrap().value;
        prop_assert!((lhs - rhs).norm() <= 1e-11 * lhs.norm().max(1.0), "{lhs} vs {rhs}");
    }
}
