mod common;

use diracgraph::complex::{build_complex, Orientation};
use diracgraph::dynamics::*;
use diracgraph::graph::families;
use diracgraph::hodge::{Cochain, Hodge};
use diracgraph::linalg::SymEigen;
use diracgraph::operators::{dirac, laplacian, DiracMatrix};
use diracgraph::SimpleGraph;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

fn setup(g: &SimpleGraph) -> (DiracMatrix, Hodge) {
    let c = build_complex(g, None);
    let d = dirac(&c, &Orientation::canonical(&c));
    let lb = laplacian(&d).unwrap();
    let h = Hodge::new(&d, &lb);
    (d, h)
}

fn example() -> SimpleGraph {
    diracgraph::parse_edge_list(diracgraph::fixtures::EXAMPLE_EDGES).unwrap()
}

fn max_norm(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn check_lax_invariants(d: &DiracMatrix, traj: &Trajectory) {
    let l0 = (d.to_f64() * d.to_f64()).map(|x| Complex64::new(x, 0.0));
    for s in traj.snapshots.iter().chain(std::iter::once(&traj.last)) {
        let (dd, b) = (&s.d, &s.b);
        let dstar = dd.adjoint();
        assert!(max_norm(&(dd * dd)) <= 1e-7, "d^2 at t = {}", s.t);
        assert!(max_norm(&(dd * b + b * dd)) <= 1e-7, "{{d, b}} at t = {}", s.t);
        let l = dd * &dstar + &dstar * dd + b * b;
        assert!(max_norm(&(l - &l0)) <= 1e-7, "d d* + d* d + b^2 at t = {}", s.t);
    }
}

#[test]
fn lax_invariants_along_trajectories() {
    for g in [example(), families::complete(4), families::octahedron()] {
        let (d, _) = setup(&g);
        for variant in [LaxVariant::Real, LaxVariant::Complexified] {
            let config = LaxConfig { t_end: 4.0, h: 0.005, variant, snapshot_every: Some(100), ..LaxConfig::default() };
            let traj = lax_deform(&d, &config).unwrap();
            check_lax_invariants(&d, &traj);
            assert!(traj.monotonicity_violations().is_empty());
        }
    }
}

#[test]
fn real_flow_drives_d_to_zero() {
    let (d, _) = setup(&example());
    let traj = lax_deform(&d, &LaxConfig::default()).unwrap();
    assert!(max_norm(&traj.last.d) < 1e-6);
    // b(∞) is block diagonal with b² = L(0)
    let b = &traj.last.b;
    let l0 = (d.to_f64() * d.to_f64()).map(|x| Complex64::new(x, 0.0));
    assert!(max_norm(&(b * b - l0)) < 1e-6);
}

#[test]
fn cocycles_are_transported() {
    let g = example();
    let c = build_complex(&g, None);
    let (d, h) = setup(&g);
    let n = d.dim();
    let harmonic = &h.harmonic_basis(1)[0];
    let mut f = DVector::zeros(n);
    f.rows_mut(c.offset(1), c.count(1)).copy_from(&harmonic.values);
    // plus an exact 1-form d g
    let g0 = Cochain::new(0, DVector::from_fn(c.count(0), |i, _| (i as f64 * 0.7).sin()));
    let exact = h.apply_d(&g0).unwrap();
    let mut block = f.rows_mut(c.offset(1), c.count(1));
    block += &exact.values;
    let d0 = d.lower().map(|x| x as f64);
    assert!((&d0 * &f).norm() < 1e-12);

    let config = LaxConfig { t_end: 5.0, ..LaxConfig::default() };
    let traj = lax_deform_transport(&d, &config, Some(&f)).unwrap();
    let ft = traj.transported.unwrap();
    assert!((&traj.last.d * &ft).norm() <= 1e-7);
}

#[test]
fn flows_commute_with_the_spectral_decomposition() {
    let (d, h) = setup(&example());
    let e = h.eigen(1).unwrap().clone();
    let u0 = Cochain::new(1, DVector::from_fn(9, |i, _| ((i * 5 + 2) % 7) as f64 - 3.0));
    let v0 = Cochain::new(1, DVector::from_fn(9, |i, _| (i as f64).cos()));
    let t = 2.7;
    let whole_heat = heat_evolve(&h, &u0, t).unwrap();
    let whole_wave = wave_evolve(&h, &WaveState::new(u0.clone(), v0.clone()).unwrap(), t).unwrap();
    let mut heat_sum = DVector::zeros(9);
    let mut wave_sum = DVector::zeros(9);
    for i in 0..9 {
        let v = e.vectors.column(i).into_owned();
        let a = Cochain::new(1, &v * v.dot(&u0.values));
        let b = Cochain::new(1, &v * v.dot(&v0.values));
        heat_sum += heat_evolve(&h, &a, t).unwrap().values;
        wave_sum += wave_evolve(&h, &WaveState::new(a, b).unwrap(), t).unwrap().u.values;
    }
    assert!((heat_sum - whole_heat.values).norm() <= 1e-10);
    assert!((wave_sum - whole_wave.u.values).norm() <= 1e-10);

    let ed = SymEigen::new(&d.to_f64());
    let psi0 = DVector::from_fn(18, |i, _| Complex64::new((i as f64).sin(), 0.5));
    let whole = schrodinger_evolve(&d, &psi0, t).unwrap();
    let mut sum = DVector::zeros(18);
    for i in 0..18 {
        let v = ed.vectors.column(i).map(|x| Complex64::new(x, 0.0));
        let coeff = v.dot(&psi0);
        sum += schrodinger_evolve(&d, &(&v * coeff), t).unwrap();
    }
    assert!((sum - whole).norm() <= 1e-10);
}

#[test]
fn poisson_on_k5_edges() {
    let (_, h) = setup(&families::complete(5));
    let j = Cochain::new(1, DVector::from_fn(10, |i, _| (i as f64 * 1.3).sin()));
    let a = poisson_solve(&h, &j, DEFAULT_POISSON_TOL).unwrap();
    let l1 = h.laplacian_block(1).unwrap();
    assert!((l1 * &a.values - &j.values).norm() <= 1e-8 * j.norm());
    let f = h.apply_d(&a).unwrap();
    assert_eq!(f.degree, 2);
    assert_eq!(f.values.len(), 10);
    // minimum norm: orthogonal to the (trivial) kernel and no larger than any other solution
    let (ls, residual) = poisson_least_squares(&h, &j).unwrap();
    assert!(residual.norm() < 1e-10);
    assert!((ls.values - a.values).norm() < 1e-12);
}

#[test]
fn snapshot_json_shape() {
    let (d, _) = setup(&families::complete(3));
    let config = LaxConfig { t_end: 0.1, snapshot_every: Some(5), variant: LaxVariant::Complexified, ..LaxConfig::default() };
    let traj = lax_deform(&d, &config).unwrap();
    let json = traj.snapshots_json();
    let list = json.as_array().unwrap();
    assert_eq!(list.len(), 3);
    assert_eq!(list[2]["d"].as_array().unwrap().len(), 7);
    assert!(list[2].get("bIm").is_some());
}
