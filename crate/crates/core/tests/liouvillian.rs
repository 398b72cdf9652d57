use ndarray::Array2;
use proptest::prelude::*;
use qstab_core::model::{plan_drives, stabilization_model, StabilizationTarget, SystemParams};
use qstab_core::quantum::{
    build_lindblad_generator, dagger, frobenius, trace, CollapseChannel, HilbertSpace,
    LindbladModel, Operator,
};
use qstab_core::units::mhz;
use qstab_core::C64;

fn matrix(d: usize, entries: &[(f64, f64)]) -> Array2<C64> {
    Array2::from_shape_fn((d, d), |(i, j)| {
        let (re, im) = entries[i * d + j];
        C64::new(re, im)
    })
}

fn hermitian(d: usize, entries: &[(f64, f64)]) -> Array2<C64> {
    let m = matrix(d, entries);
    (&m + &dagger(&m)).mapv(|z| z * 0.5)
}

fn density(d: usize, entries: &[(f64, f64)]) -> Array2<C64> {
    let m = matrix(d, entries);
    let rho = m.dot(&dagger(&m));
    let t = trace(&rho);
    rho.mapv(|z| z / t)
}

/// `−i[H, ρ] + Σ r(LρL† − ½L†Lρ − ½ρL†L)` with explicit index loops.
fn direct_rhs(h: &Array2<C64>, channels: &[(Array2<C64>, f64)], rho: &Array2<C64>) -> Array2<C64> {
    let d = h.nrows();
    let mul = |a: &Array2<C64>, b: &Array2<C64>| {
        Array2::from_shape_fn((d, d), |(i, j)| (0..d).map(|k| a[[i, k]] * b[[k, j]]).sum::<C64>())
    };
    let adj = |a: &Array2<C64>| Array2::from_shape_fn((d, d), |(i, j)| a[[j, i]].conj());
    let i = C64::new(0.0, 1.0);
    let mut out = (mul(h, rho) - mul(rho, h)).mapv(|z| -i * z);
    for (l, r) in channels {
        let ld = adj(l);
        let ldl = mul(&ld, l);
        let term = mul(&mul(l, rho), &ld) - (mul(&ldl, rho) + mul(rho, &ldl)).mapv(|z| z * 0.5);
        out = out + term.mapv(|z| z * *r);
    }
    out
}

fn random_model() -> impl Strategy<Value = (Array2<C64>, Vec<(Array2<C64>, f64)>, Array2<C64>)> {
    let d = 6;
    let entries = || prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), d * d);
    (
        entries(),
        prop::collection::vec((entries(), 0.0..2.0f64), 1..4),
        entries(),
    )
        .prop_map(move |(h, ch, r)| {
            let channels = ch.into_iter().map(|(e, rate)| (matrix(d, &e), rate)).collect();
            (hermitian(d, &h), channels, density(d, &r))
        })
}

fn build(h: &Array2<C64>, channels: &[(Array2<C64>, f64)]) -> LindbladModel {
    let space = HilbertSpace::new(3).unwrap();
    let ch = channels
        .iter()
        .map(|(l, r)| CollapseChannel::new(Operator::dimensionless(space, l.clone()).unwrap(), *r).unwrap())
        .collect();
    LindbladModel::new(Operator::hamiltonian(space, h.clone()).unwrap(), ch).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generator_preserves_trace((h, ch, rho) in random_model()) {
        let l = build_lindblad_generator(&build(&h, &ch));
        prop_assert!(trace(&l.apply(&rho)).norm() <= 1e-10);
    }

    #[test]
    fn generator_preserves_hermiticity((h, ch, rho) in random_model()) {
        let l = build_lindblad_generator(&build(&h, &ch));
        let out = l.apply(&rho);
        prop_assert!(frobenius(&(&out - &dagger(&out))) <= 1e-10);
    }

    #[test]
    fn generator_matches_direct_sum((h, ch, rho) in random_model()) {
        let l = build_lindblad_generator(&build(&h, &ch));
        let direct = direct_rhs(&h, &ch, &rho);
        prop_assert!(frobenius(&(&l.apply(&rho) - &direct)) <= 1e-12 * frobenius(&direct).max(1.0));
    }
}

/// Every column of the generator against the direct sum on basis projectors.
#[test]
fn blue_sideband_generator_elementwise() {
    let mut params = SystemParams::reference();
    params.kappa = mhz(4.0);
    let space = HilbertSpace::new(4).unwrap();
    let g_eps = mhz(2.0);
    let plan = plan_drives(&StabilizationTarget::pure(0.0, 0.0).unwrap(), g_eps, &params).unwrap();
    let model = stabilization_model(&params, &plan, space, true).unwrap();
    let l = build_lindblad_generator(&model);
    let d = space.dim();
    let h = model.hamiltonian().matrix().clone();
    let ch: Vec<_> = model.channels().iter().map(|c| (c.operator.matrix().clone(), c.rate)).collect();
    let scale = frobenius(l.matrix());
    for k in 0..d {
        for m in 0..d {
            let mut e = Array2::<C64>::zeros((d, d));
            e[[k, m]] = C64::new(1.0, 0.0);
            let diff = &l.apply(&e) - &direct_rhs(&h, &ch, &e);
            assert!(frobenius(&diff) <= 1e-12 * scale, "column ({k},{m})");
        }
    }
}
